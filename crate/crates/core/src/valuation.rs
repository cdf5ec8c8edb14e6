//! Graded valuations and tensors of valuations, stored in canonical coordinates.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{domain, Result};
use crate::linalg::Matrix;
use crate::model::{algebra, Algebra, BasisId, BasisIndex, ModelId};
use crate::qpi::PiScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    model: ModelId,
    /// One coordinate vector per degree `0..=m`, in the canonical basis.
    coeffs: Vec<Vec<PiScalar>>,
}

impl Valuation {
    pub fn zero(model: ModelId) -> Result<Self> {
        let alg = algebra(model)?;
        Ok(Self::zero_in(&alg))
    }

    pub(crate) fn zero_in(alg: &Algebra) -> Self {
        Valuation {
            model: alg.model(),
            coeffs: alg.dims().iter().map(|&d| vec![PiScalar::zero(); d]).collect(),
        }
    }

    /// The Euler characteristic, unit of the product.
    pub fn chi(model: ModelId) -> Result<Self> {
        Self::homogeneous(model, 0, vec![PiScalar::one()])
    }

    /// The volume, unit of the convolution.
    pub fn vol(model: ModelId) -> Result<Self> {
        let alg = algebra(model)?;
        Self::homogeneous(model, alg.top(), vec![alg.vol_scale().clone()])
    }

    /// Homogeneous element of degree `k` from canonical coordinates.
    pub fn homogeneous(model: ModelId, k: usize, coords: Vec<PiScalar>) -> Result<Self> {
        let alg = algebra(model)?;
        if k > alg.top() {
            return domain(format!("degree {k} exceeds top degree {}", alg.top()));
        }
        if coords.len() != alg.dim(k) {
            return domain(format!(
                "degree {k} of {model} has dimension {}, got {} coordinates",
                alg.dim(k),
                coords.len()
            ));
        }
        let mut v = Self::zero_in(&alg);
        v.coeffs[k] = coords;
        Ok(v)
    }

    /// Builds `Σ c·b_index` from terms in any basis supported by the model.
    pub fn construct(model: ModelId, basis: BasisId, terms: &[(BasisIndex, PiScalar)]) -> Result<Self> {
        let alg = algebra(model)?;
        if !model.supports(basis) {
            return domain(format!("basis {} is not available for {model}", basis.tag()));
        }
        let mut v = Self::zero_in(&alg);
        for (idx, c) in terms {
            let indices = alg.basis_indices(basis, idx.k)?;
            let Some(col) = indices.iter().position(|&j| j == idx.j) else {
                return domain(format!(
                    "index ({}, {}) is not valid for basis {} of {model}",
                    idx.k,
                    idx.j,
                    basis.tag()
                ));
            };
            let a = alg.basis_matrix(basis, idx.k)?;
            for (r, slot) in v.coeffs[idx.k].iter_mut().enumerate() {
                let e = &a[(r, col)];
                if !e.is_zero() {
                    *slot = &*slot + &(e * c);
                }
            }
        }
        Ok(v)
    }

    pub fn model(&self) -> ModelId {
        self.model
    }

    pub fn algebra(&self) -> Arc<Algebra> {
        algebra(self.model).expect("model was valid at construction")
    }

    pub fn top(&self) -> usize {
        self.model.top()
    }

    /// Canonical coordinates of the degree-`k` component.
    pub fn component(&self, k: usize) -> &[PiScalar] {
        self.coeffs.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn components(&self) -> &[Vec<PiScalar>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(PiScalar::is_zero)
    }

    /// Degrees with a nonzero component, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len())
            .filter(|&k| self.coeffs[k].iter().any(|c| !c.is_zero()))
            .collect()
    }

    pub fn homogeneous_part(&self, k: usize) -> Valuation {
        let mut v = Valuation {
            model: self.model,
            coeffs: self.coeffs.iter().map(|c| vec![PiScalar::zero(); c.len()]).collect(),
        };
        if k < v.coeffs.len() {
            v.coeffs[k] = self.coeffs[k].clone();
        }
        v
    }

    /// Coordinates of the degree-`k` component in `basis`.
    pub fn coords_in(&self, basis: BasisId, k: usize) -> Result<Vec<PiScalar>> {
        let alg = self.algebra();
        alg.basis_matrix_inverse(basis, k)?.mul_vec(self.component(k))
    }

    /// Nonzero coefficients in `basis`, degrees and indices ascending.
    pub fn convert_basis(&self, basis: BasisId) -> Result<Vec<(BasisIndex, PiScalar)>> {
        if !self.model.supports(basis) {
            return domain(format!("basis {} is not available for {}", basis.tag(), self.model));
        }
        let alg = self.algebra();
        let mut out = Vec::new();
        for k in 0..=self.top() {
            let coords = self.coords_in(basis, k)?;
            for (&j, c) in alg.basis_indices(basis, k)?.iter().zip(coords) {
                if !c.is_zero() {
                    out.push((BasisIndex::new(k, j), c));
                }
            }
        }
        Ok(out)
    }

    fn check_same(&self, other: &Valuation) -> Result<()> {
        if self.model != other.model {
            return domain(format!("model mismatch: {} vs {}", self.model, other.model));
        }
        Ok(())
    }

    /// `self + λ·other`.
    pub fn add_scale(&self, other: &Valuation, lambda: &PiScalar) -> Result<Valuation> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + &(y * lambda)).collect())
            .collect();
        Ok(Valuation {
            model: self.model,
            coeffs,
        })
    }

    pub fn add(&self, other: &Valuation) -> Result<Valuation> {
        self.add_scale(other, &PiScalar::one())
    }

    pub fn scale(&self, c: &PiScalar) -> Valuation {
        Valuation {
            model: self.model,
            coeffs: self.coeffs.iter().map(|v| v.iter().map(|x| x * c).collect()).collect(),
        }
    }

    /// The Alesker product.
    pub fn product(&self, other: &Valuation) -> Result<Valuation> {
        self.check_same(other)?;
        let alg = self.algebra();
        let mut out = Self::zero_in(&alg);
        for k in self.support() {
            for l in other.support() {
                if k + l > alg.top() {
                    continue;
                }
                let c = alg.mul_components(k, &self.coeffs[k], l, &other.coeffs[l]);
                for (slot, x) in out.coeffs[k + l].iter_mut().zip(c) {
                    *slot = &*slot + &x;
                }
            }
        }
        Ok(out)
    }

    /// The Alesker–Fourier transform (all valuations here are even).
    pub fn fourier(&self) -> Valuation {
        let alg = self.algebra();
        let m = alg.top();
        let mut out = Self::zero_in(&alg);
        for k in self.support() {
            out.coeffs[m - k] = alg
                .fourier_matrix(k)
                .mul_vec(&self.coeffs[k])
                .expect("Fourier matrix shape matches");
        }
        out
    }

    /// Convolution `F(F(a)·F(b))`.
    pub fn convolve(&self, other: &Valuation) -> Result<Valuation> {
        Ok(self.fourier().product(&other.fourier())?.fourier())
    }
}

/// An element of `Val ⊗ Val`; block `(k, l)` has rows indexing degree `k` and columns degree `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorValuation {
    model: ModelId,
    blocks: BTreeMap<(usize, usize), Matrix>,
}

impl TensorValuation {
    pub fn zero(model: ModelId) -> Self {
        TensorValuation {
            model,
            blocks: BTreeMap::new(),
        }
    }

    pub fn model(&self) -> ModelId {
        self.model
    }

    /// Adds `m` into block `(k, l)`; zero blocks are not stored.
    pub fn add_block(&mut self, k: usize, l: usize, m: Matrix) {
        let merged = match self.blocks.remove(&(k, l)) {
            Some(old) => old.add(&m).expect("block shapes agree"),
            None => m,
        };
        if !merged.is_zero() {
            self.blocks.insert((k, l), merged);
        }
    }

    pub fn block(&self, k: usize, l: usize) -> Option<&Matrix> {
        self.blocks.get(&(k, l))
    }

    pub fn blocks(&self) -> &BTreeMap<(usize, usize), Matrix> {
        &self.blocks
    }

    /// Blocks re-expressed with `left`/`right` bases on the two tensor factors.
    pub fn in_bases(&self, left: BasisId, right: BasisId) -> Result<BTreeMap<(usize, usize), Matrix>> {
        let alg = algebra(self.model)?;
        let mut out = BTreeMap::new();
        for (&(k, l), x) in &self.blocks {
            let a = alg.basis_matrix_inverse(left, k)?;
            let b = alg.basis_matrix_inverse(right, l)?;
            out.insert((k, l), a.mul(x)?.mul(&b.transpose())?);
        }
        Ok(out)
    }

    /// The tensor with both factors swapped.
    pub fn swapped(&self) -> TensorValuation {
        TensorValuation {
            model: self.model,
            blocks: self.blocks.iter().map(|(&(k, l), m)| ((l, k), m.transpose())).collect(),
        }
    }

    pub fn is_cocommutative(&self) -> bool {
        self.swapped() == *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpi::rat;

    fn p(s: &str) -> PiScalar {
        s.parse().unwrap()
    }

    #[test]
    fn construct_mu_in_so3() {
        let v = Valuation::construct(ModelId::So(3), BasisId::Mu, &[(BasisIndex::new(1, 0), p("1"))]).unwrap();
        let ts = v.convert_basis(BasisId::Ts).unwrap();
        assert_eq!(ts, vec![(BasisIndex::new(1, 0), p("pi/2"))]);
    }

    #[test]
    fn construct_tasaki_in_u2() {
        let v = Valuation::construct(ModelId::U(2), BasisId::Tasaki, &[(BasisIndex::new(2, 1), p("1"))]).unwrap();
        // canonical order at degree 2 is [t^2, s]
        assert_eq!(v.component(2), &[p("-pi/2"), p("2*pi")]);
    }

    #[test]
    fn unit_element_from_any_basis() {
        for model in [ModelId::So(3), ModelId::U(2), ModelId::G2, ModelId::Spin7] {
            let basis = model.canonical_basis();
            let v = Valuation::construct(model, basis, &[(BasisIndex::new(0, 0), p("1"))]).unwrap();
            assert_eq!(v, Valuation::chi(model).unwrap());
        }
    }

    #[test]
    fn hiv_to_tasaki_in_degree_two() {
        for n in 2..=4 {
            let v = Valuation::construct(ModelId::U(n), BasisId::Hiv, &[(BasisIndex::new(2, 1), p("1"))]).unwrap();
            assert_eq!(
                v.convert_basis(BasisId::Tasaki).unwrap(),
                vec![(BasisIndex::new(2, 1), p("1"))]
            );
        }
    }

    #[test]
    fn primitive_leading_term() {
        for n in 1..=4 {
            for k in 0..=2 * n {
                let v = Valuation::construct(ModelId::U(n), BasisId::Prim, &[(BasisIndex::new(k, 0), p("1"))]).unwrap();
                let tau = v.convert_basis(BasisId::Tasaki).unwrap();
                let fact = PiScalar::from_bigint(crate::qpi::factorial(k as u64));
                assert_eq!(tau, vec![(BasisIndex::new(k, 0), fact)], "n={n} k={k}");
            }
        }
    }

    #[test]
    fn add_scale_examples() {
        let model = ModelId::So(3);
        let mu1 = Valuation::construct(model, BasisId::Mu, &[(BasisIndex::new(1, 0), p("1"))]).unwrap();
        assert!(mu1.add_scale(&mu1, &p("-1")).unwrap().is_zero());

        let s = Valuation::chi(model)
            .unwrap()
            .add_scale(&Valuation::vol(model).unwrap(), &p("1"))
            .unwrap();
        assert_eq!(s.support(), vec![0, 3]);

        let terms = [(BasisIndex::new(1, 0), p("2")), (BasisIndex::new(2, 0), p("pi"))];
        let both = Valuation::construct(model, BasisId::Mu, &terms).unwrap();
        let a = Valuation::construct(model, BasisId::Mu, &terms[..1]).unwrap();
        let b = Valuation::construct(model, BasisId::Mu, &terms[1..]).unwrap();
        assert_eq!(both, a.add_scale(&b, &p("1")).unwrap());

        assert!(mu1
            .add_scale(&Valuation::chi(ModelId::So(2)).unwrap(), &p("1"))
            .is_err());
    }

    #[test]
    fn invalid_indices_rejected() {
        let bad = [(BasisIndex::new(4, 0), p("1"))];
        // q must be at least k - n = 1 in U(3), degree 4
        assert!(Valuation::construct(ModelId::U(3), BasisId::Hiv, &bad).is_err());
        assert!(Valuation::construct(ModelId::So(3), BasisId::Mu, &[(BasisIndex::new(4, 0), p("1"))]).is_err());
        assert!(Valuation::construct(ModelId::So(3), BasisId::Hiv, &[]).is_err());
        assert!(Valuation::construct(ModelId::U(3), BasisId::Mu, &[]).is_err());
        let ok = [(BasisIndex::new(4, 2), PiScalar::from_rational(rat(2, 3)))];
        assert!(Valuation::construct(ModelId::U(3), BasisId::Hiv, &ok).is_ok());
    }

    #[test]
    fn basis_round_trips() {
        let model = ModelId::U(3);
        for basis in [
            BasisId::Ts,
            BasisId::UBasis,
            BasisId::Hiv,
            BasisId::Tasaki,
            BasisId::Prim,
        ] {
            let alg = algebra(model).unwrap();
            let mut terms = Vec::new();
            for k in 0..=6 {
                for (i, &j) in alg.basis_indices(basis, k).unwrap().iter().enumerate() {
                    terms.push((BasisIndex::new(k, j), PiScalar::from_int((k * 7 + i * 3) as i64 - 9)));
                }
            }
            terms.retain(|(_, c)| !c.is_zero());
            let v = Valuation::construct(model, basis, &terms).unwrap();
            assert_eq!(v.convert_basis(basis).unwrap(), terms, "basis {}", basis.tag());
        }
    }
}
