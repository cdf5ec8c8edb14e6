//! `Val^{SO(n)} ≅ C[t]/(t^{n+1})`, stored in the intrinsic volumes `μ_k`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Algebra, BasisData, BasisId, ModelId};
use crate::error::{domain, Result};
use crate::linalg::Matrix;
use crate::qpi::{binomial, factorial, omega, PiScalar};
use crate::valuation::Valuation;

/// Coefficient of `μ_{j+k}` in `μ_j · μ_k`.
pub fn product_constant(j: usize, k: usize) -> PiScalar {
    let c = PiScalar::from_bigint(binomial((j + k) as u64, j as u64));
    (&c * &omega((j + k) as u64))
        .checked_div(&(&omega(j as u64) * &omega(k as u64)))
        .expect("ball volumes are nonzero")
}

/// `t^k = k! ω_k / π^k · μ_k`.
pub fn t_power_scale(k: usize) -> PiScalar {
    let c = PiScalar::from_bigint(factorial(k as u64));
    (&c * &omega(k as u64))
        .checked_div(&PiScalar::pi().pow(k as u32))
        .expect("π ≠ 0")
}

/// `μ_k(B) = binom(n,k) ω_n / ω_{n-k}` for the unit ball.
pub fn mu_of_unit_ball(n: usize, k: usize) -> PiScalar {
    let c = PiScalar::from_bigint(binomial(n as u64, k as u64));
    (&c * &omega(n as u64))
        .checked_div(&omega((n - k) as u64))
        .expect("ω ≠ 0")
}

pub(crate) fn build(n: usize) -> Result<Algebra> {
    let dims = vec![1; n + 1];
    let product = |k: usize, _i: usize, l: usize, _j: usize| vec![product_constant(k, l)];
    let fourier = vec![Matrix::identity(1); n + 1];
    let mut bases = HashMap::new();
    bases.insert(BasisId::Mu, BasisData::canonical(&dims));
    let ts = (0..=n)
        .map(|k| Matrix::from_rows(vec![vec![t_power_scale(k)]]))
        .collect::<Result<Vec<_>>>()?;
    bases.insert(BasisId::Ts, BasisData::new(vec![vec![0]; n + 1], ts)?);
    let t = if n >= 1 { vec![t_power_scale(1)] } else { Vec::new() };
    Algebra::assemble(ModelId::So(n), dims, &product, PiScalar::one(), fourier, t, bases)
}

fn expect_so(a: &Valuation) -> Result<usize> {
    match a.model() {
        ModelId::So(n) => Ok(n),
        other => domain(format!("expected an SO(n) valuation, got {other}")),
    }
}

/// `μ_k` in `SO(n)`.
pub fn mu(n: usize, k: usize) -> Result<Valuation> {
    Valuation::homogeneous(ModelId::So(n), k, vec![PiScalar::one()])
}

pub fn so_product(a: &Valuation, b: &Valuation) -> Result<Valuation> {
    expect_so(a)?;
    a.product(b)
}

pub fn so_fourier(a: &Valuation) -> Result<Valuation> {
    expect_so(a)?;
    Ok(a.fourier())
}

pub fn so_convolve(a: &Valuation, b: &Valuation) -> Result<Valuation> {
    expect_so(a)?;
    a.convolve(b)
}

fn require_nonnegative(x: &PiScalar, what: &str) -> Result<()> {
    match x.sign() {
        Some(Ordering::Less) => domain(format!("{what} must be non-negative, got {x}")),
        Some(_) => Ok(()),
        None if x.eval_approx() >= 0.0 => Ok(()),
        None => domain(format!("{what} must be non-negative, got {x}")),
    }
}

/// Value of `a` on the ball of radius `r`.
pub fn so_eval_ball(a: &Valuation, r: &PiScalar) -> Result<PiScalar> {
    let n = expect_so(a)?;
    require_nonnegative(r, "radius")?;
    Ok((0..=n)
        .map(|k| &(&a.component(k)[0] * &r.pow(k as u32)) * &mu_of_unit_ball(n, k))
        .sum())
}

/// Value of `a` on the box with the given side lengths.
pub fn so_eval_box(a: &Valuation, sides: &[PiScalar]) -> Result<PiScalar> {
    let n = expect_so(a)?;
    if sides.len() != n {
        return domain(format!("a box in dimension {n} needs {n} sides, got {}", sides.len()));
    }
    for s in sides {
        require_nonnegative(s, "side length")?;
    }
    let e = elementary_symmetric(sides);
    Ok((0..=n).map(|k| &a.component(k)[0] * &e[k]).sum())
}

/// `e_0, …, e_n` of the given values.
pub fn elementary_symmetric(xs: &[PiScalar]) -> Vec<PiScalar> {
    let mut e = vec![PiScalar::zero(); xs.len() + 1];
    e[0] = PiScalar::one();
    for (i, x) in xs.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] = &e[k] + &(&e[k - 1] * x);
        }
    }
    e
}

/// Box sides as rationals, a convenience for exact evaluation.
pub fn rational_sides(sides: &[(i64, i64)]) -> Vec<PiScalar> {
    sides
        .iter()
        .map(|&(p, q)| PiScalar::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q))))
        .collect()
}
