//! `Val^{U(n)} ≅ C[t,s]/(f_{n+1}, f_{n+2})`, where `f_m` is the weighted-degree-`m`
//! part of `log(1+t+s)` and `s` has weight 2.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::{Algebra, BasisData, BasisId, ModelId};
use crate::error::{domain, Error, Result};
use crate::linalg::Matrix;
use crate::qpi::{binomial, double_factorial, factorial, omega, PiScalar, Rational};
use crate::quotient::{BiPoly, DegreeTable, GradedQuotient};
use crate::valuation::Valuation;

/// Polynomial in `t` and `s`; the key `(a, b)` stands for `t^a s^b`.
pub type TsPolynomial = BiPoly;

const CACHE_VERSION: u32 = 1;

/// `f_m`, the weighted-degree-`m` part of `log(1+t+s)`.
pub fn log_expansion_term(m: usize) -> Result<TsPolynomial> {
    if m == 0 {
        return domain("log expansion terms start at m = 1");
    }
    let mut f = TsPolynomial::zero();
    for j in m.div_ceil(2)..=m {
        let sign: i64 = if j % 2 == 1 { 1 } else { -1 };
        let c = Rational::new(BigInt::from(sign) * binomial(j as u64, (m - j) as u64), BigInt::from(j));
        f.add_term(2 * j - m, m - j, PiScalar::from_rational(c));
    }
    Ok(f)
}

/// `dim Val_k^{U(n)} = min(⌊k/2⌋, ⌊(2n−k)/2⌋) + 1`.
pub fn un_dim(n: usize, k: usize) -> Result<usize> {
    if k > 2 * n {
        return domain(format!("degree {k} is outside 0..={} for U({n})", 2 * n));
    }
    Ok((k / 2).min((2 * n - k) / 2) + 1)
}

fn max_p(n: usize, k: usize) -> usize {
    (k / 2).min((2 * n - k) / 2)
}

/// The scalar in `s^p t^{k−2p} = c · U_{k,p}`.
pub fn un_ubasis_scale(n: usize, k: usize, p: usize) -> Result<PiScalar> {
    if k > 2 * n || p > max_p(n, k) {
        return domain(format!("U_{{{k},{p}}} is not an index of U({n})"));
    }
    let j = k - 2 * p;
    let num = PiScalar::from_bigint(factorial(j as u64) * factorial(n as u64));
    let den = PiScalar::from_bigint(factorial((n - p) as u64));
    Ok((&num * &omega(j as u64))
        .checked_div(&(&den * &PiScalar::pi().pow(j as u32)))
        .expect("nonzero"))
}

/// `τ_{k,q} = π^k / (ω_k (k−2q)! (2q)!) · t^{k−2q} (4s − t²)^q` as a polynomial.
pub fn tasaki_polynomial(k: usize, q: usize) -> TsPolynomial {
    let c = PiScalar::pi()
        .pow(k as u32)
        .checked_div(
            &(&omega(k as u64) * &PiScalar::from_bigint(factorial((k - 2 * q) as u64) * factorial(2 * q as u64))),
        )
        .expect("nonzero");
    let mut inner = TsPolynomial::monomial(0, 1, PiScalar::from_int(4));
    inner.add_term(2, 0, PiScalar::from_int(-1));
    TsPolynomial::monomial(k - 2 * q, 0, c).mul(&inner.pow(q))
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format: String,
    version: u32,
    group: String,
    n: usize,
    degrees: Vec<DegreeTable>,
}

fn cache_path(n: usize) -> Option<PathBuf> {
    let dir = std::env::var_os("KINVAL_CACHE_DIR")?;
    Some(PathBuf::from(dir).join(format!("u{n}.v{CACHE_VERSION}.json")))
}

fn load_cached(n: usize) -> Option<GradedQuotient> {
    let text = std::fs::read_to_string(cache_path(n)?).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    let ok = file.format == "kinval-normal-form"
        && file.version == CACHE_VERSION
        && file.group == "U"
        && file.n == n
        && file.degrees.len() == 2 * n + 1
        && file.degrees.iter().enumerate().all(|(k, t)| {
            t.basis.len() == un_dim(n, k).unwrap_or(0) && t.reductions.iter().all(|(_, c)| c.len() == t.basis.len())
        });
    ok.then(|| GradedQuotient::from_tables(2, 2 * n, file.degrees))
}

fn store_cached(n: usize, q: &GradedQuotient) {
    let Some(path) = cache_path(n) else { return };
    let file = CacheFile {
        format: "kinval-normal-form".into(),
        version: CACHE_VERSION,
        group: "U".into(),
        n,
        degrees: q.tables().to_vec(),
    };
    // The cache only saves time, so failures to write it are ignored.
    if let Ok(text) = serde_json::to_string(&file) {
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if std::fs::write(&tmp, text).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
    }
}

/// The normal-form tables of `C[t,s]/(f_{n+1}, f_{n+2})`.
pub fn fu_quotient(n: usize) -> Result<GradedQuotient> {
    if let Some(q) = load_cached(n) {
        return Ok(q);
    }
    let gens = [log_expansion_term(n + 1)?, log_expansion_term(n + 2)?];
    let q = GradedQuotient::build(2, &gens, 2 * n)?;
    for k in 0..=2 * n {
        let expected: Vec<(usize, usize)> = (0..=max_p(n, k)).map(|p| (k - 2 * p, p)).collect();
        if q.basis(k) != expected.as_slice() {
            return Err(Error::Internal(format!(
                "U({n}) degree {k}: reduction basis {:?} differs from {expected:?}",
                q.basis(k)
            )));
        }
    }
    store_cached(n, &q);
    Ok(q)
}

/// Memoized [`fu_quotient`].
pub fn shared_quotient(n: usize) -> Result<Arc<GradedQuotient>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GradedQuotient>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(q) = cache.lock().expect("quotient cache poisoned").get(&n) {
        return Ok(Arc::clone(q));
    }
    let built = Arc::new(fu_quotient(n)?);
    let mut map = cache.lock().expect("quotient cache poisoned");
    Ok(Arc::clone(map.entry(n).or_insert(built)))
}

fn columns_to_matrix(cols: Vec<Vec<PiScalar>>) -> Matrix {
    let Some(first) = cols.first() else {
        return Matrix::zeros(0, 0);
    };
    let mut m = Matrix::zeros(first.len(), cols.len());
    for (j, col) in cols.into_iter().enumerate() {
        for (i, x) in col.into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    m
}

fn flat(q: &GradedQuotient, p: &TsPolynomial, k: usize) -> Vec<PiScalar> {
    q.normal_form(p).swap_remove(k)
}

pub(crate) fn build(n: usize) -> Result<Algebra> {
    let m = 2 * n;
    let q = shared_quotient(n)?;
    let dims = q.dims();
    let product = |k: usize, i: usize, l: usize, j: usize| q.reduce_monomial(k + l - 2 * (i + j), i + j);

    let mut bases = HashMap::new();
    bases.insert(BasisId::Ts, BasisData::canonical(&dims));

    let p_indices: Vec<Vec<usize>> = (0..=m).map(|k| (0..=max_p(n, k)).collect()).collect();
    let ubasis = (0..=m)
        .map(|k| {
            let mut a = Matrix::zeros(dims[k], dims[k]);
            for p in 0..dims[k] {
                a[(p, p)] = un_ubasis_scale(n, k, p)?.inv()?;
            }
            Ok(a)
        })
        .collect::<Result<Vec<_>>>()?;
    bases.insert(BasisId::UBasis, BasisData::new(p_indices.clone(), ubasis)?);

    let tasaki_cols: Vec<Vec<Vec<PiScalar>>> = (0..=m)
        .map(|k| (0..dims[k]).map(|qq| flat(&q, &tasaki_polynomial(k, qq), k)).collect())
        .collect();
    let tasaki: Vec<Matrix> = tasaki_cols.iter().cloned().map(columns_to_matrix).collect();
    bases.insert(BasisId::Tasaki, BasisData::new(p_indices.clone(), tasaki.clone())?);

    let mut hiv_indices = Vec::with_capacity(m + 1);
    let mut hiv = Vec::with_capacity(m + 1);
    for (k, tau) in tasaki.iter().enumerate() {
        let idx: Vec<usize> = (k.saturating_sub(n)..=k / 2).collect();
        hiv.push(hiv_matrix(n, k, &idx, tau)?);
        hiv_indices.push(idx);
    }
    let hiv_data = BasisData::new(hiv_indices, hiv)?;

    let prim = (0..=m)
        .map(|k| {
            let cols = (0..dims[k])
                .map(|r| {
                    let mut col = vec![PiScalar::zero(); dims[k]];
                    for (i, tau) in tasaki_cols[k].iter().enumerate().take(r + 1) {
                        let c = primitive_coefficient(n, k, r, i)?;
                        for (slot, x) in col.iter_mut().zip(tau) {
                            *slot = &*slot + &(&c * x);
                        }
                    }
                    Ok(col)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(columns_to_matrix(cols))
        })
        .collect::<Result<Vec<_>>>()?;
    bases.insert(BasisId::Prim, BasisData::new(p_indices, prim)?);

    // Fourier: μ_{k,q} ↦ μ_{2n−k, n−k+q}
    let fourier = (0..=m)
        .map(|k| {
            let l = m - k;
            let mut perm = Matrix::zeros(dims[l], dims[k]);
            for (col, &qq) in hiv_data.indices[k].iter().enumerate() {
                let target = n + qq - k;
                let row = hiv_data.indices[l]
                    .iter()
                    .position(|&x| x == target)
                    .ok_or_else(|| Error::Internal(format!("Fourier index ({k},{qq}) has no image")))?;
                perm[(row, col)] = PiScalar::one();
            }
            hiv_data.to_canon[l].mul(&perm)?.mul(&hiv_data.from_canon[k])
        })
        .collect::<Result<Vec<_>>>()?;
    bases.insert(BasisId::Hiv, hiv_data);

    let vol_scale = PiScalar::pi()
        .pow(m as u32)
        .checked_div(&(&PiScalar::from_bigint(factorial(m as u64)) * &omega(m as u64)))?;
    Algebra::assemble(
        ModelId::U(n),
        dims,
        &product,
        vol_scale,
        fourier,
        vec![PiScalar::one()],
        bases,
    )
}

/// Columns `μ_{k,q}` from the Tasaki columns via `τ_{k,q} = Σ_i binom(i,q) μ_{k,i}`.
fn hiv_matrix(n: usize, k: usize, idx: &[usize], tasaki: &Matrix) -> Result<Matrix> {
    let d = idx.len();
    let binom = |i: usize, q: usize| PiScalar::from_bigint(binomial(i as u64, q as u64));
    if k <= n {
        // explicit inverse: μ_{k,q} = Σ_{i≥q} (−1)^{i−q} binom(i,q) τ_{k,i}
        let mut inv = Matrix::zeros(d, d);
        for &qq in idx {
            for &i in idx.iter().filter(|&&i| i >= qq) {
                let c = binom(i, qq);
                inv[(i, qq)] = if (i - qq) % 2 == 0 { c } else { -c };
            }
        }
        return tasaki.mul(&inv);
    }
    let mut pascal = Matrix::zeros(d, d);
    for (row, &i) in idx.iter().enumerate() {
        for qq in 0..d {
            pascal[(row, qq)] = binom(i, qq);
        }
    }
    let inv = pascal
        .invert()
        .map_err(|_| Error::Internal(format!("Tasaki/HIV relation singular in degree {k} of U({n})")))?;
    tasaki.mul(&inv)
}

/// Coefficient of `τ_{k,i}` in `π_{k,r}`.
fn primitive_coefficient(n: usize, k: usize, r: usize, i: usize) -> Result<PiScalar> {
    let nn = n as i64;
    let (r_, i_) = (r as i64, i as i64);
    let mut c: BigRational = double_factorial(2 * nn - 4 * r_ + 1)?;
    c *= Rational::from_integer(factorial((k - 2 * i) as u64));
    c /= Rational::from_integer(factorial((2 * r - 2 * i) as u64));
    c *= double_factorial(2 * r_ - 2 * i_ - 1)?;
    c /= double_factorial(2 * nn - 2 * r_ - 2 * i_ + 1)?;
    if (r + i) % 2 == 1 {
        c = -c;
    }
    Ok(PiScalar::from_rational(c))
}

fn expect_u(a: &Valuation) -> Result<usize> {
    match a.model() {
        ModelId::U(n) => Ok(n),
        other => domain(format!("expected a U(n) valuation, got {other}")),
    }
}

/// The class of `p` in `Val^{U(n)}`.
pub fn un_normal_form(p: &TsPolynomial, n: usize) -> Result<Valuation> {
    let model = ModelId::U(n);
    let alg = super::algebra(model)?;
    let q = shared_quotient(n)?;
    let mut v = Valuation::zero(model)?;
    for (&(a, b), c) in p.terms() {
        let k = a + 2 * b;
        if k > alg.top() {
            continue;
        }
        let term = Valuation::homogeneous(model, k, q.reduce_monomial(a, b))?;
        v = v.add_scale(&term, c)?;
    }
    Ok(v)
}

pub fn un_product(a: &Valuation, b: &Valuation) -> Result<Valuation> {
    expect_u(a)?;
    a.product(b)
}

pub fn un_fourier(a: &Valuation) -> Result<Valuation> {
    expect_u(a)?;
    Ok(a.fourier())
}

pub fn un_convolve(a: &Valuation, b: &Valuation) -> Result<Valuation> {
    expect_u(a)?;
    a.convolve(b)
}

/// `t^a s^b` as a one-term polynomial.
pub fn ts_monomial(a: usize, b: usize) -> TsPolynomial {
    TsPolynomial::monomial(a, b, PiScalar::one())
}

#[cfg(test)]
pub(crate) fn rational(n: i64, d: i64) -> PiScalar {
    PiScalar::from_rational(Rational::new(BigInt::from(n), BigInt::from(d)))
}
