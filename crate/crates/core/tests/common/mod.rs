//! Seeded random inputs shared by the integration suites.
#![allow(dead_code)]

use kinval::qpi::{rat, PiScalar};
use kinval::{algebra, BasisId, BasisIndex, ModelId, Valuation};
use rand::Rng;

/// `a/b · π^e` with small `a`, `b`, `e`; sometimes a two-term sum.
pub fn random_scalar(rng: &mut impl Rng) -> PiScalar {
    let mono = |rng: &mut dyn rand::RngCore| {
        let a = rng.gen_range(-9..=9);
        let b = rng.gen_range(1..=6);
        PiScalar::monomial(rat(a, b), rng.gen_range(-2..=2))
    };
    let x = mono(rng);
    if rng.gen_bool(0.3) {
        &x + &mono(rng)
    } else {
        x
    }
}

/// Nonzero rational-function element, including non-polynomial denominators.
pub fn random_field_element(rng: &mut impl Rng) -> PiScalar {
    loop {
        let num = random_scalar(rng);
        let den = &random_scalar(rng) + &PiScalar::monomial(rat(rng.gen_range(1..=4), 1), rng.gen_range(0..=2));
        match num.checked_div(&den) {
            Ok(x) if !x.is_zero() => return x,
            _ => {}
        }
    }
}

/// Random element with coefficients `a/b` (no π), for sign-decidable cone tests.
pub fn random_rational_valuation(
    rng: &mut impl Rng,
    model: ModelId,
    basis: BasisId,
    only_degree: Option<usize>,
) -> Valuation {
    random_valuation_with(rng, model, basis, only_degree, |rng| {
        PiScalar::from_rational(rat(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
    })
}

pub fn random_valuation(rng: &mut impl Rng, model: ModelId) -> Valuation {
    random_valuation_with(rng, model, model.canonical_basis(), None, random_scalar)
}

pub fn random_valuation_with<R: Rng>(
    rng: &mut R,
    model: ModelId,
    basis: BasisId,
    only_degree: Option<usize>,
    mut coeff: impl FnMut(&mut R) -> PiScalar,
) -> Valuation {
    let alg = algebra(model).unwrap();
    let mut terms = Vec::new();
    for k in 0..=alg.top() {
        if only_degree.is_some_and(|d| d != k) {
            continue;
        }
        for &j in alg.basis_indices(basis, k).unwrap() {
            if rng.gen_bool(0.6) {
                terms.push((BasisIndex::new(k, j), coeff(rng)));
            }
        }
    }
    Valuation::construct(model, basis, &terms).unwrap()
}

pub fn hiv(n: usize, terms: &[(usize, usize, &str)]) -> Valuation {
    let terms: Vec<_> = terms
        .iter()
        .map(|&(k, q, c)| (BasisIndex::new(k, q), c.parse::<PiScalar>().unwrap()))
        .collect();
    Valuation::construct(ModelId::U(n), BasisId::Hiv, &terms).unwrap()
}

pub fn all_models() -> Vec<ModelId> {
    let mut v: Vec<ModelId> = (1..=6).map(ModelId::So).collect();
    v.extend((1..=4).map(ModelId::U));
    v.push(ModelId::G2);
    v.push(ModelId::Spin7);
    v
}
