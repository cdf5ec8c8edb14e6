//! Positive and monotone cones of `Val^{U(n)}` in hermitian intrinsic volume coordinates.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{domain, Result};
use crate::model::{BasisId, ModelId};
use crate::qpi::{rat, PiScalar};
use crate::valuation::Valuation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Inequality {
    Positive,
    First,
    Second,
}

impl Inequality {
    pub fn tag(self) -> &'static str {
        match self {
            Inequality::Positive => "positive",
            Inequality::First => "first",
            Inequality::Second => "second",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub id: String,
    pub family: Inequality,
    pub k: usize,
    pub q: usize,
}

impl Violation {
    fn new(family: Inequality, k: usize, q: usize) -> Self {
        Violation {
            id: format!("{}@{k},{q}", family.tag()),
            family,
            k,
            q,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeVerdict {
    pub member: bool,
    pub violated: Vec<Violation>,
}

impl ConeVerdict {
    fn from_violations(violated: Vec<Violation>) -> Self {
        ConeVerdict {
            member: violated.is_empty(),
            violated,
        }
    }
}

/// `x ≥ 0`, refusing to guess when the sign is not exactly decidable.
fn nonnegative(x: &PiScalar) -> Result<bool> {
    match x.sign() {
        Some(o) => Ok(o != Ordering::Less),
        None => domain(format!("cannot decide the sign of {x} exactly")),
    }
}

fn expect_un(phi: &Valuation) -> Result<usize> {
    match phi.model() {
        ModelId::U(n) => Ok(n),
        other => domain(format!("cone membership is defined for U(n) valuations, got {other}")),
    }
}

/// HIV coefficients of degree `k`, zero outside the index range.
fn hiv_coefficients(phi: &Valuation, k: usize) -> Result<BTreeMap<usize, PiScalar>> {
    let alg = phi.algebra();
    let qs = alg.basis_indices(BasisId::Hiv, k)?;
    Ok(qs.iter().copied().zip(phi.coords_in(BasisId::Hiv, k)?).collect())
}

fn coefficient(c: &BTreeMap<usize, PiScalar>, q: usize) -> PiScalar {
    c.get(&q).cloned().unwrap_or_else(PiScalar::zero)
}

pub fn un_positive_check(phi: &Valuation) -> Result<ConeVerdict> {
    let n = expect_un(phi)?;
    let mut violated = Vec::new();
    for k in 0..=2 * n {
        for (q, c) in hiv_coefficients(phi, k)? {
            if !nonnegative(&c)? {
                violated.push(Violation::new(Inequality::Positive, k, q));
            }
        }
    }
    Ok(ConeVerdict::from_violations(violated))
}

/// Violated monotonicity inequalities of the degree-`k` component.
pub fn un_monotone_violations(phi: &Valuation, k: usize) -> Result<Vec<Violation>> {
    let n = expect_un(phi)? as i64;
    let c = hiv_coefficients(phi, k)?;
    let ki = k as i64;
    let mut out = Vec::new();

    // (k−2q) c_{k,q} ≥ (k−2q−1) c_{k,q+1}
    for q in (ki - n).max(0)..=(ki - 1).div_euclid(2) {
        let qu = q as usize;
        let lhs = &PiScalar::from_int(ki - 2 * q) * &coefficient(&c, qu);
        let rhs = &PiScalar::from_int(ki - 2 * q - 1) * &coefficient(&c, qu + 1);
        if !nonnegative(&(&lhs - &rhs))? {
            out.push(Violation::new(Inequality::First, k, qu));
        }
    }
    // (n+q−k+1) c_{k,q} ≤ (n+q−k+3/2) c_{k,q+1}
    for q in (ki - n - 1).max(0)..=(ki - 2).div_euclid(2) {
        let qu = q as usize;
        let lhs = &PiScalar::from_int(n + q - ki + 1) * &coefficient(&c, qu);
        let rhs = &PiScalar::from_rational(rat(2 * (n + q - ki) + 3, 2)) * &coefficient(&c, qu + 1);
        if !nonnegative(&(&rhs - &lhs))? {
            out.push(Violation::new(Inequality::Second, k, qu));
        }
    }
    Ok(out)
}

/// Monotone iff every homogeneous component satisfies both inequality families.
pub fn un_monotone_check(phi: &Valuation) -> Result<ConeVerdict> {
    let n = expect_un(phi)?;
    let mut violated = Vec::new();
    for k in 0..=2 * n {
        violated.extend(un_monotone_violations(phi, k)?);
    }
    Ok(ConeVerdict::from_violations(violated))
}
