//! `Val^{G2} ≅ C[t,u]/(t²u, u²+4t⁶)` and `Val^{Spin(7)} ≅ C[t,v]/(v²−t⁸, vt)`.
//!
//! Basis monomials are `t^k` in every degree plus `u`, `tu` (G2, degrees 3 and 4)
//! or `v` (Spin(7), degree 4), listed after the power of `t`.

use std::collections::HashMap;

use super::{so::t_power_scale, Algebra, BasisData, BasisId, ModelId};
use crate::error::{domain, Error, Result};
use crate::linalg::Matrix;
use crate::qpi::{factorial, omega, PiScalar};
use crate::quotient::{BiPoly, GradedQuotient};
use crate::valuation::Valuation;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExcModel {
    G2,
    Spin7,
}

impl ExcModel {
    pub fn from_model(model: ModelId) -> Result<Self> {
        match model {
            ModelId::G2 => Ok(ExcModel::G2),
            ModelId::Spin7 => Ok(ExcModel::Spin7),
            other => domain(format!("{other} is not an exceptional model")),
        }
    }

    pub fn model(self) -> ModelId {
        match self {
            ExcModel::G2 => ModelId::G2,
            ExcModel::Spin7 => ModelId::Spin7,
        }
    }

    pub fn top(self) -> usize {
        self.model().top()
    }

    /// Degree of the extra generator.
    pub fn weight(self) -> usize {
        match self {
            ExcModel::G2 => 3,
            ExcModel::Spin7 => 4,
        }
    }

    fn letter(self) -> &'static str {
        match self {
            ExcModel::G2 => "u",
            ExcModel::Spin7 => "v",
        }
    }

    /// Basis monomials `(a, b)` meaning `t^a u^b` (or `t^a v^b`) in degree `k`.
    pub fn basis(self, k: usize) -> Vec<(usize, usize)> {
        let mut out = vec![(k, 0)];
        match (self, k) {
            (ExcModel::G2, 3) => out.push((0, 1)),
            (ExcModel::G2, 4) => out.push((1, 1)),
            (ExcModel::Spin7, 4) => out.push((0, 1)),
            _ => {}
        }
        out
    }

    pub fn monomial_name(self, k: usize, j: usize) -> Option<String> {
        let (a, b) = *self.basis(k).get(j)?;
        Some(match (a, b) {
            (0, 0) => "1".to_string(),
            (1, 0) => "t".to_string(),
            (a, 0) => format!("t^{a}"),
            (0, _) => self.letter().to_string(),
            (1, _) => format!("t{}", self.letter()),
            (a, _) => format!("t^{a}{}", self.letter()),
        })
    }

    /// Inverse of [`ExcModel::monomial_name`]; accepts `1`, `t`, `t^k`, `u`, `tu`, `v`.
    pub fn parse_monomial(self, name: &str) -> Result<(usize, usize)> {
        let s = name.trim();
        for k in 0..=self.top() {
            for j in 0..self.basis(k).len() {
                if self.monomial_name(k, j).as_deref() == Some(s) {
                    return Ok((k, j));
                }
            }
        }
        if s == "t^0" || s == "chi" {
            return Ok((0, 0));
        }
        if s == "t^1" {
            return Ok((1, 0));
        }
        domain(format!("{name:?} is not a basis monomial of {}", self.model()))
    }

    /// Product of monomials reduced by the defining relations: `(coefficient, a, b)` or zero.
    pub fn rewrite(self, mut a: usize, mut b: usize) -> Option<(i64, usize, usize)> {
        let mut c = 1i64;
        while b >= 2 {
            b -= 2;
            match self {
                ExcModel::G2 => {
                    a += 6;
                    c *= -4;
                }
                ExcModel::Spin7 => a += 8,
            }
        }
        let vanishes = match self {
            ExcModel::G2 => (b == 1 && a >= 2) || a > self.top(),
            ExcModel::Spin7 => (b == 1 && a >= 1) || a > self.top(),
        };
        (!vanishes).then_some((c, a, b))
    }

    pub fn generators(self) -> Vec<BiPoly> {
        let one = PiScalar::one;
        match self {
            ExcModel::G2 => {
                let mut rel = BiPoly::monomial(0, 2, one());
                rel.add_term(6, 0, PiScalar::from_int(4));
                vec![BiPoly::monomial(2, 1, one()), rel]
            }
            ExcModel::Spin7 => {
                let mut rel = BiPoly::monomial(0, 2, one());
                rel.add_term(8, 0, PiScalar::from_int(-1));
                vec![rel, BiPoly::monomial(1, 1, one())]
            }
        }
    }
}

/// `F(t^k) = c_k t^{m−k}` from `F(μ_k) = μ_{m−k}`.
fn t_fourier_scale(m: usize, k: usize) -> PiScalar {
    t_power_scale(k).checked_div(&t_power_scale(m - k)).expect("nonzero")
}

pub(crate) fn build(model: ModelId) -> Result<Algebra> {
    let exc = ExcModel::from_model(model)?;
    let m = exc.top();
    let dims: Vec<usize> = (0..=m).map(|k| exc.basis(k).len()).collect();
    let product = |k: usize, i: usize, l: usize, j: usize| {
        let (a1, b1) = exc.basis(k)[i];
        let (a2, b2) = exc.basis(l)[j];
        let mut out = vec![PiScalar::zero(); exc.basis(k + l).len()];
        if let Some((c, a, b)) = exc.rewrite(a1 + a2, b1 + b2) {
            let pos = exc
                .basis(k + l)
                .iter()
                .position(|&x| x == (a, b))
                .expect("rewritten monomial is basic");
            out[pos] = PiScalar::from_int(c);
        }
        out
    };

    let mut fourier = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let mut f = Matrix::zeros(dims[m - k], dims[k]);
        f[(0, 0)] = t_fourier_scale(m, k);
        if dims[k] == 2 {
            // the extra generator pairs with itself up to scale
            f[(1, 1)] = match (exc, k) {
                (ExcModel::G2, 3) => -&t_fourier_scale(m, 3),
                (ExcModel::G2, 4) => -&t_fourier_scale(m, 4),
                (ExcModel::Spin7, 4) => PiScalar::one(),
                _ => return Err(Error::Internal("unexpected two-dimensional degree".into())),
            };
        }
        fourier.push(f);
    }

    let vol_scale = PiScalar::pi()
        .pow(m as u32)
        .checked_div(&(&PiScalar::from_bigint(factorial(m as u64)) * &omega(m as u64)))?;
    let mut bases = HashMap::new();
    bases.insert(BasisId::Ts, BasisData::canonical(&dims));
    Algebra::assemble(model, dims, &product, vol_scale, fourier, vec![PiScalar::one()], bases)
}

/// Graded dimensions as listed in the classification table.
pub fn exc_dims(which: ExcModel) -> Vec<usize> {
    match which {
        ExcModel::G2 => vec![1, 1, 1, 2, 2, 1, 1, 1],
        ExcModel::Spin7 => vec![1, 1, 1, 1, 2, 1, 1, 1, 1],
    }
}

/// Graded dimensions recomputed from the quotient presentation.
pub fn presentation_dims(which: ExcModel) -> Result<Vec<usize>> {
    Ok(GradedQuotient::build(which.weight(), &which.generators(), which.top())?.dims())
}

/// Basis monomial as a valuation.
pub fn monomial(which: ExcModel, name: &str) -> Result<Valuation> {
    let (k, j) = which.parse_monomial(name)?;
    let mut e = vec![PiScalar::zero(); which.basis(k).len()];
    e[j] = PiScalar::one();
    Valuation::homogeneous(which.model(), k, e)
}

pub fn exc_product(a: &Valuation, b: &Valuation) -> Result<Valuation> {
    ExcModel::from_model(a.model())?;
    a.product(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::algebra;

    fn mono(w: ExcModel, s: &str) -> Valuation {
        monomial(w, s).unwrap()
    }

    #[test]
    fn product_examples() {
        let g = ExcModel::G2;
        let uu = exc_product(&mono(g, "u"), &mono(g, "u")).unwrap();
        assert_eq!(uu, mono(g, "t^6").scale(&PiScalar::from_int(-4)));
        let s = ExcModel::Spin7;
        assert!(exc_product(&mono(s, "v"), &mono(s, "t")).unwrap().is_zero());
        let chi = Valuation::chi(ModelId::G2).unwrap();
        assert_eq!(exc_product(&chi, &mono(g, "u")).unwrap(), mono(g, "u"));
        assert_eq!(exc_product(&mono(g, "t"), &mono(g, "u")).unwrap(), mono(g, "tu"));
        assert!(exc_product(&mono(g, "t^2"), &mono(g, "u")).unwrap().is_zero());
        assert_eq!(exc_product(&mono(s, "v"), &mono(s, "v")).unwrap(), mono(s, "t^8"));
    }

    #[test]
    fn dims_tables() {
        assert_eq!(exc_dims(ExcModel::G2), vec![1, 1, 1, 2, 2, 1, 1, 1]);
        assert_eq!(exc_dims(ExcModel::Spin7), vec![1, 1, 1, 1, 2, 1, 1, 1, 1]);
        assert_eq!(exc_dims(ExcModel::G2).iter().sum::<usize>(), 10);
        for w in [ExcModel::G2, ExcModel::Spin7] {
            assert_eq!(presentation_dims(w).unwrap(), exc_dims(w));
            assert_eq!(algebra(w.model()).unwrap().dims(), exc_dims(w).as_slice());
        }
    }

    #[test]
    fn all_monomial_pairs_associative_and_commutative() {
        for w in [ExcModel::G2, ExcModel::Spin7] {
            let m = w.top();
            let monos: Vec<Valuation> = (0..=m)
                .flat_map(|k| (0..w.basis(k).len()).map(move |j| (k, j)))
                .map(|(k, j)| mono(w, &w.monomial_name(k, j).unwrap()))
                .collect();
            for a in &monos {
                for b in &monos {
                    let ab = a.product(b).unwrap();
                    assert_eq!(ab, b.product(a).unwrap());
                    for c in &monos {
                        assert_eq!(ab.product(c).unwrap(), a.product(&b.product(c).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for w in [ExcModel::G2, ExcModel::Spin7] {
            for k in 0..=w.top() {
                for j in 0..w.basis(k).len() {
                    let name = w.monomial_name(k, j).unwrap();
                    assert_eq!(w.parse_monomial(&name).unwrap(), (k, j));
                }
            }
        }
        assert!(ExcModel::G2.parse_monomial("v").is_err());
        assert!(ExcModel::Spin7.parse_monomial("t^9").is_err());
    }

    #[test]
    fn fourier_is_an_involution_on_basis() {
        for w in [ExcModel::G2, ExcModel::Spin7] {
            let alg = algebra(w.model()).unwrap();
            for k in 0..=w.top() {
                let f = alg.fourier_matrix(k).clone();
                let g = alg.fourier_matrix(w.top() - k);
                assert_eq!(g.mul(&f).unwrap(), Matrix::identity(alg.dim(k)));
            }
        }
    }
}
