//! Kinematic and additive kinematic formulas from the inverse of the Poincaré pairing.
//!
//! `k(χ)` is the tensor inverse of the pairing `⟨φ,ψ⟩ = vol-coefficient of φ·ψ`.
//! Everything else follows from `k(φ) = (φ⊗χ)·k(χ)` and `a = (F⊗F)∘k∘F`.

use crate::error::{domain, Error, Result};
use crate::linalg::Matrix;
use crate::model::so::mu_of_unit_ball;
use crate::model::{algebra, BasisId, BasisIndex, ModelId};
use crate::qpi::{binomial, double_factorial, factorial, flag, omega, PiScalar, Rational};
use crate::valuation::{TensorValuation, Valuation};

/// `M[i][j] = ⟨b_i^(k), b_j^(m−k)⟩` in canonical bases.
pub fn pairing_matrix(model: ModelId, k: usize) -> Result<Matrix> {
    let alg = algebra(model)?;
    let m = alg.top();
    if k > m {
        return domain(format!("degree {k} exceeds top degree {m}"));
    }
    let mut out = Matrix::zeros(alg.dim(k), alg.dim(m - k));
    for i in 0..alg.dim(k) {
        for j in 0..alg.dim(m - k) {
            out[(i, j)] = alg.vol_coefficient(alg.mul_basis(k, i, m - k, j));
        }
    }
    Ok(out)
}

/// The principal kinematic tensor `k(χ)`.
pub fn kf_chi(model: ModelId) -> Result<TensorValuation> {
    let m = model.top();
    let mut out = TensorValuation::zero(model);
    for k in 0..=m {
        let x = pairing_matrix(model, k)?
            .transpose()
            .invert()
            .map_err(|_| Error::Internal(format!("Poincaré pairing of {model} is singular in degree {k}")))?;
        out.add_block(k, m - k, x);
    }
    Ok(out)
}

/// `(φ⊗χ)·T` for a tensor `T`.
pub fn left_multiply(phi: &Valuation, tensor: &TensorValuation) -> Result<TensorValuation> {
    let alg = phi.algebra();
    let mut out = TensorValuation::zero(phi.model());
    for d in phi.support() {
        for (&(k, l), x) in tensor.blocks() {
            if k + d > alg.top() {
                continue;
            }
            out.add_block(k + d, l, alg.mul_matrix(d, phi.component(d), k).mul(x)?);
        }
    }
    Ok(out)
}

/// Kinematic tensor `k(φ)`.
pub fn kf(phi: &Valuation) -> Result<TensorValuation> {
    left_multiply(phi, &kf_chi(phi.model())?)
}

/// `(F⊗F)` applied to a tensor.
pub fn fourier_tensor(tensor: &TensorValuation) -> Result<TensorValuation> {
    let alg = algebra(tensor.model())?;
    let m = alg.top();
    let mut out = TensorValuation::zero(tensor.model());
    for (&(k, l), x) in tensor.blocks() {
        let y = alg.fourier_matrix(k).mul(x)?.mul(&alg.fourier_matrix(l).transpose())?;
        out.add_block(m - k, m - l, y);
    }
    Ok(out)
}

/// Additive kinematic tensor `a(φ) = (F⊗F) k(Fφ)`.
pub fn akf(phi: &Valuation) -> Result<TensorValuation> {
    fourier_tensor(&kf(&phi.fourier())?)
}

fn so_tensor(n: usize, entries: impl IntoIterator<Item = ((usize, usize), PiScalar)>) -> Result<TensorValuation> {
    let mut t = TensorValuation::zero(ModelId::So(n));
    for ((k, l), c) in entries {
        t.add_block(k, l, Matrix::from_rows(vec![vec![c]])?);
    }
    Ok(t)
}

/// `c^i_{k,l} = flag(n+i, i) / flag(n+i, k)` for `k + l = n + i`, in the `μ` basis.
pub fn so_kf_closed_form(n: usize, i: usize) -> Result<TensorValuation> {
    if i > n {
        return domain(format!("index {i} exceeds n = {n}"));
    }
    let (ni, ii) = ((n + i) as i64, i as i64);
    let lead = flag(ni, ii)?;
    let entries = (i..=n)
        .map(|k| Ok(((k, n + i - k), lead.checked_div(&flag(ni, k as i64)?)?)))
        .collect::<Result<Vec<_>>>()?;
    so_tensor(n, entries)
}

/// `d^i_{k,l} = flag(2n−i, n−i) / flag(2n−i, n−k)` for `k + l = i`, in the `μ` basis.
pub fn so_akf_closed_form(n: usize, i: usize) -> Result<TensorValuation> {
    if i > n {
        return domain(format!("index {i} exceeds n = {n}"));
    }
    let top = (2 * n - i) as i64;
    let lead = flag(top, (n - i) as i64)?;
    let entries = (0..=i)
        .map(|k| Ok(((k, i - k), lead.checked_div(&flag(top, (n - k) as i64)?)?)))
        .collect::<Result<Vec<_>>>()?;
    so_tensor(n, entries)
}

/// Renormalization `μ̃_k = π^n k! ω_k / (π^k n! ω_n) · μ_k`.
pub fn nijenhuis_scale(n: usize, k: usize) -> PiScalar {
    let num = &PiScalar::pi().pow(n as u32) * &(&PiScalar::from_bigint(factorial(k as u64)) * &omega(k as u64));
    let den = &PiScalar::pi().pow(k as u32) * &(&PiScalar::from_bigint(factorial(n as u64)) * &omega(n as u64));
    num.checked_div(&den).expect("nonzero")
}

/// Coefficients of `k(μ̃_i)` on `μ̃_k ⊗ μ̃_l`; `None` where the tensor has no such block.
pub fn nijenhuis_table(n: usize, i: usize) -> Result<Vec<((usize, usize), PiScalar)>> {
    let mu_i = Valuation::homogeneous(ModelId::So(n), i, vec![nijenhuis_scale(n, i)])?;
    let t = kf(&mu_i)?;
    t.blocks()
        .iter()
        .map(|(&(k, l), x)| {
            let c = x[(0, 0)].checked_div(&(&nijenhuis_scale(n, k) * &nijenhuis_scale(n, l)))?;
            Ok(((k, l), c))
        })
        .collect()
}

/// True iff every coefficient of every `k(μ̃_i)` in the `μ̃` basis is 1 on `k + l = n + i`.
pub fn nijenhuis_check(n: usize) -> Result<bool> {
    for i in 0..=n {
        let table = nijenhuis_table(n, i)?;
        let expected: Vec<(usize, usize)> = (i..=n).map(|k| (k, n + i - k)).collect();
        let got: Vec<(usize, usize)> = table.iter().map(|(kl, _)| *kl).collect();
        if got != expected || !table.iter().all(|(_, c)| c.is_one()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Principal kinematic tensor of `U(n)` from its closed form in the primitive basis.
pub fn un_kf_closed_form(n: usize) -> Result<TensorValuation> {
    let model = ModelId::U(n);
    let alg = algebra(model)?;
    let m = 2 * n;
    let pi_n = PiScalar::pi().pow(n as u32);
    let mut out = TensorValuation::zero(model);
    for k in 0..=m {
        let l = m - k;
        let p = (k / 2).min(l / 2);
        let outer = (&omega(k as u64) * &omega(l as u64)).checked_div(&pi_n)?;
        let mut diag = Matrix::zeros(p + 1, p + 1);
        for r in 0..=p {
            let (nn, rr) = (n as i64, r as i64);
            let mut c = Rational::from_integer(factorial((n - r) as u64));
            c /= Rational::from_integer(num_bigint::BigInt::from(8).pow(r as u32) * factorial((m - 4 * r) as u64));
            c *= double_factorial(2 * nn - 2 * rr + 1)?;
            c /= double_factorial(2 * nn - 4 * rr + 1)?;
            c /= Rational::from_integer(binomial(n as u64, 2 * r as u64));
            diag[(r, r)] = &outer * &PiScalar::from_rational(c);
        }
        let a = alg.basis_matrix(BasisId::Prim, k)?;
        let b = alg.basis_matrix(BasisId::Prim, l)?;
        out.add_block(k, l, a.mul(&diag)?.mul(&b.transpose())?);
    }
    Ok(out)
}

/// `c_k = flag(n,k)^{-1} · φ · μ_k` for `k = 0..=n`.
pub fn general_hadwiger_coeffs(phi: &Valuation) -> Result<Vec<(usize, Valuation)>> {
    let ModelId::So(n) = phi.model() else {
        return domain(format!(
            "general Hadwiger coefficients need an SO(n) valuation, got {}",
            phi.model()
        ));
    };
    (0..=n)
        .map(|k| {
            let mu_k = Valuation::homogeneous(phi.model(), k, vec![PiScalar::one()])?;
            let f = flag(n as i64, k as i64)?.inv()?;
            Ok((k, phi.product(&mu_k)?.scale(&f)))
        })
        .collect()
}

/// Kinematic formulas for every element of a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KinematicTable {
    pub model: ModelId,
    pub source_basis: BasisId,
    pub entries: Vec<(BasisIndex, TensorValuation)>,
}

pub fn kinematic_table(model: ModelId, basis: BasisId, additive: bool) -> Result<KinematicTable> {
    let alg = algebra(model)?;
    let mut entries = Vec::new();
    for k in 0..=alg.top() {
        for &j in alg.basis_indices(basis, k)? {
            let idx = BasisIndex::new(k, j);
            let phi = Valuation::construct(model, basis, &[(idx, PiScalar::one())])?;
            entries.push((idx, if additive { akf(&phi)? } else { kf(&phi)? }));
        }
    }
    Ok(KinematicTable {
        model,
        source_basis: basis,
        entries,
    })
}

/// Additive formulas in `SO(n)` by the template method on pairs of balls.
///
/// Matching the coefficient of `r^j s^{i−j}` in `μ_i((r+s)B) = Σ d μ_k(rB) μ_l(sB)`
/// gives one equation per unknown.
pub fn template_additive_solver(n: usize) -> Result<KinematicTable> {
    let mut entries = Vec::new();
    for i in 0..=n {
        let mut a = Matrix::zeros(i + 1, i + 1);
        let mut rhs = Matrix::zeros(i + 1, 1);
        for j in 0..=i {
            a[(j, j)] = &mu_of_unit_ball(n, j) * &mu_of_unit_ball(n, i - j);
            rhs[(j, 0)] = &PiScalar::from_bigint(binomial(i as u64, j as u64)) * &mu_of_unit_ball(n, i);
        }
        let d = a
            .solve(&rhs)
            .map_err(|e| Error::Internal(format!("template system: {e}")))?;
        entries.push((
            BasisIndex::new(i, 0),
            so_tensor(n, (0..=i).map(|j| ((j, i - j), d[(j, 0)].clone())))?,
        ));
    }
    Ok(KinematicTable {
        model: ModelId::So(n),
        source_basis: BasisId::Mu,
        entries,
    })
}

/// `L` = multiplication by `μ_1 = (π/2)·t`.
pub fn lefschetz_l(a: &Valuation) -> Result<Valuation> {
    let alg = a.algebra();
    let mu1: Vec<PiScalar> = alg
        .t_coords()
        .iter()
        .map(|c| c * &PiScalar::monomial(Rational::new(1.into(), 2.into()), 1))
        .collect();
    a.product(&Valuation::homogeneous(a.model(), 1, mu1)?)
}

/// `Λφ = 2·F(L(Fφ))`.
pub fn lefschetz_lambda(a: &Valuation) -> Result<Valuation> {
    Ok(lefschetz_l(&a.fourier())?.fourier().scale(&PiScalar::from_int(2)))
}

/// Whether multiplication by `t^{m−2k}` maps degree `k` onto degree `m−k`.
pub fn hard_lefschetz_check(model: ModelId, k: usize) -> Result<bool> {
    let alg = algebra(model)?;
    let m = alg.top();
    if 2 * k > m {
        return domain(format!("hard Lefschetz needs 2k ≤ {m}, got k = {k}"));
    }
    let mut x = Matrix::identity(alg.dim(k));
    for d in k..m - k {
        x = alg.mul_matrix(1, alg.t_coords(), d).mul(&x)?;
    }
    Ok(alg.dim(k) == alg.dim(m - k) && x.rank() == alg.dim(k))
}

/// Scalar coefficient of a 1×1 block, as used by SO tables.
pub fn so_coefficient(t: &TensorValuation, k: usize, l: usize) -> PiScalar {
    t.block(k, l).map(|b| b[(0, 0)].clone()).unwrap_or_else(PiScalar::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PiScalar {
        s.parse().unwrap()
    }

    fn mu(n: usize, k: usize) -> Valuation {
        crate::model::so::mu(n, k).unwrap()
    }

    #[test]
    fn pairing_examples() {
        for n in 1..=6 {
            for k in 0..=n {
                let m = pairing_matrix(ModelId::So(n), k).unwrap();
                assert_eq!(m[(0, 0)], flag(n as i64, k as i64).unwrap());
            }
        }
        let g2 = pairing_matrix(ModelId::G2, 3).unwrap();
        // the t^7 unit is π^7/(7! ω_7) times vol, so compare up to that scale
        let alg = algebra(ModelId::G2).unwrap();
        let scaled = g2.scale(alg.vol_scale());
        assert_eq!(scaled, Matrix::from_ints(&[&[1, 0], &[0, -4]]));
        let s7 = pairing_matrix(ModelId::Spin7, 4)
            .unwrap()
            .scale(algebra(ModelId::Spin7).unwrap().vol_scale());
        assert_eq!(s7, Matrix::identity(2));
        let u = pairing_matrix(ModelId::U(3), 0).unwrap();
        assert_eq!(u.rows(), 1);
        assert!(!u.is_zero());
    }

    #[test]
    fn principal_formula_so2() {
        let t = kf_chi(ModelId::So(2)).unwrap();
        assert_eq!(so_coefficient(&t, 0, 2), p("1"));
        assert_eq!(so_coefficient(&t, 1, 1), p("2/pi"));
        assert_eq!(so_coefficient(&t, 2, 0), p("1"));
        assert_eq!(t.blocks().len(), 3);
        assert_eq!(t, so_kf_closed_form(2, 0).unwrap());
    }

    #[test]
    fn u1_matches_so2() {
        let u = kf_chi(ModelId::U(1)).unwrap();
        let so = kf_chi(ModelId::So(2)).unwrap();
        // canonical bases t^k in U(1) versus μ_k in SO(2): t^k = k! ω_k/π^k μ_k
        for ((k, l), x) in u.blocks() {
            let scale = &crate::model::so::t_power_scale(*k) * &crate::model::so::t_power_scale(*l);
            assert_eq!(&x[(0, 0)] * &scale, so_coefficient(&so, *k, *l));
        }
        assert_eq!(un_kf_closed_form(1).unwrap(), u);
    }

    #[test]
    fn kf_examples() {
        let t = kf(&mu(2, 1)).unwrap();
        assert_eq!(t, so_tensor(2, [((1, 2), p("1")), ((2, 1), p("1"))]).unwrap());
        for model in [ModelId::So(3), ModelId::U(2), ModelId::G2, ModelId::Spin7] {
            assert_eq!(kf(&Valuation::chi(model).unwrap()).unwrap(), kf_chi(model).unwrap());
        }
        for n in 1..=5 {
            let vol = Valuation::vol(ModelId::So(n)).unwrap();
            assert_eq!(kf(&vol).unwrap(), so_tensor(n, [((n, n), p("1"))]).unwrap());
        }
    }

    #[test]
    fn akf_examples() {
        let t = akf(&mu(2, 1)).unwrap();
        assert_eq!(t, so_tensor(2, [((1, 0), p("1")), ((0, 1), p("1"))]).unwrap());
        for n in 1..=5 {
            let t = akf(&Valuation::vol(ModelId::So(n)).unwrap()).unwrap();
            for k in 0..=n {
                assert_eq!(
                    so_coefficient(&t, k, n - k),
                    flag(n as i64, k as i64).unwrap().inv().unwrap()
                );
            }
        }
        for model in [ModelId::So(3), ModelId::U(2), ModelId::G2, ModelId::Spin7] {
            let t = akf(&Valuation::chi(model).unwrap()).unwrap();
            assert_eq!(t.blocks().len(), 1);
            assert!(t.block(0, 0).unwrap()[(0, 0)].is_one());
        }
    }

    #[test]
    fn closed_form_examples() {
        let t = so_kf_closed_form(2, 1).unwrap();
        assert_eq!(t, so_tensor(2, [((1, 2), p("1")), ((2, 1), p("1"))]).unwrap());
        for n in 1..=5 {
            for i in 0..=n {
                assert!(so_kf_closed_form(n, i).unwrap().is_cocommutative());
            }
        }
    }

    #[test]
    fn nijenhuis() {
        assert!(nijenhuis_check(2).unwrap());
        assert!(nijenhuis_check(5).unwrap());
        let raw = kf_chi(ModelId::So(2)).unwrap();
        assert!(!so_coefficient(&raw, 1, 1).is_one());
    }

    #[test]
    fn hadwiger_coefficients() {
        let chi = Valuation::chi(ModelId::So(2)).unwrap();
        let c = general_hadwiger_coeffs(&chi).unwrap();
        assert_eq!(c[0].1, chi);
        assert_eq!(c[1].1, mu(2, 1).scale(&p("2/pi")));
        assert_eq!(c[2].1, Valuation::vol(ModelId::So(2)).unwrap());

        let vol = Valuation::vol(ModelId::So(3)).unwrap();
        let c = general_hadwiger_coeffs(&vol).unwrap();
        assert_eq!(c[0].1, vol);
        assert!(c[1..].iter().all(|(_, v)| v.is_zero()));

        // φ = χ reproduces the principal formula: c_k pairs with μ_{n−k}
        for n in 1..=5 {
            let kchi = kf_chi(ModelId::So(n)).unwrap();
            for (k, ck) in general_hadwiger_coeffs(&Valuation::chi(ModelId::So(n)).unwrap()).unwrap() {
                assert_eq!(ck.component(k)[0], so_coefficient(&kchi, k, n - k));
            }
        }
    }

    #[test]
    fn template_examples() {
        let table = template_additive_solver(2).unwrap();
        let (_, row1) = &table.entries[1];
        assert_eq!(row1, &so_tensor(2, [((0, 1), p("1")), ((1, 0), p("1"))]).unwrap());
        for n in 1..=6 {
            let table = template_additive_solver(n).unwrap();
            assert!(so_coefficient(&table.entries[0].1, 0, 0).is_one());
            for (idx, t) in &table.entries {
                assert_eq!(t, &so_akf_closed_form(n, idx.k).unwrap());
            }
        }
    }

    #[test]
    fn lefschetz_examples() {
        assert_eq!(lefschetz_l(&mu(3, 0)).unwrap(), mu(3, 1));
        assert_eq!(lefschetz_lambda(&mu(2, 1)).unwrap(), mu(2, 0).scale(&p("pi")));
        for n in 1..=5 {
            for k in 0..=n {
                let x = mu(n, k);
                let comm = lefschetz_lambda(&lefschetz_l(&x).unwrap())
                    .unwrap()
                    .add_scale(&lefschetz_l(&lefschetz_lambda(&x).unwrap()).unwrap(), &p("-1"))
                    .unwrap();
                assert!(comm.support().iter().all(|&d| d == k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn hard_lefschetz_examples() {
        assert!(hard_lefschetz_check(ModelId::U(3), 2).unwrap());
        for n in 1..=6 {
            for k in 0..=n / 2 {
                assert!(hard_lefschetz_check(ModelId::So(n), k).unwrap());
            }
        }
        assert!(hard_lefschetz_check(ModelId::G2, 3).unwrap());
        assert!(hard_lefschetz_check(ModelId::G2, 4).is_err());
    }
}
