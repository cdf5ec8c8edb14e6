//! Dimension counts for SU(n) and the stable symplectic families.

use num_bigint::BigInt;
use num_traits::Zero;

use super::unitary::un_dim;
use crate::error::Result;

/// `dim Val_k^{SU(n)}`: the unitary count, enlarged in the middle degree.
pub fn su_dim(n: usize, k: usize) -> Result<usize> {
    let d = un_dim(n, k)?;
    Ok(match (k == n, n.is_multiple_of(2)) {
        (true, true) => d + 4,
        (true, false) => d + 2,
        (false, _) => d,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpFamily {
    Sp,
    SpU1,
    SpSp1,
}

impl SpFamily {
    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "sp" => Some(SpFamily::Sp),
            "spu1" => Some(SpFamily::SpU1),
            "spsp1" => Some(SpFamily::SpSp1),
            _ => None,
        }
    }

    /// Numerator and denominator of the Poincaré series, ascending coefficients.
    fn generating_function(self) -> (Vec<i64>, Vec<i64>) {
        let pow = |p: &[i64], e: usize| (0..e).fold(vec![1], |acc, _| poly_mul(&acc, p));
        let one_minus = [1, -1];
        let one_plus = [1, 1];
        match self {
            SpFamily::Sp => (vec![1, -3, 6, -3, 1], poly_mul(&pow(&one_minus, 7), &pow(&one_plus, 3))),
            SpFamily::SpU1 => (
                vec![1, -2, 2, 0, 2, -2, 1],
                [&[1, 0, 1][..], &[1, 1, 1], &pow(&one_plus, 2), &pow(&one_minus, 6)]
                    .iter()
                    .fold(vec![1], |acc, p| poly_mul(&acc, p)),
            ),
            SpFamily::SpSp1 => (
                vec![1, 0, 0, 1, 2, 1],
                [&[1, 0, 1][..], &[1, 1, 1], &pow(&one_plus, 2), &pow(&one_minus, 4)]
                    .iter()
                    .fold(vec![1], |acc, p| poly_mul(&acc, p)),
            ),
        }
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// First `k_max + 1` coefficients of the stable Poincaré series.
///
/// Every denominator has constant term 1, so the long division stays integral.
pub fn sp_series_coeffs(family: SpFamily, k_max: usize) -> Vec<BigInt> {
    let (num, den) = family.generating_function();
    debug_assert_eq!(den[0], 1);
    let mut out: Vec<BigInt> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut c = num.get(k).map_or_else(BigInt::zero, |&x| BigInt::from(x));
        for (j, &d) in den.iter().enumerate().skip(1).take(k) {
            c -= BigInt::from(d) * &out[k - j];
        }
        out.push(c);
    }
    out
}

/// Truncated power-series product, used to verify the division.
pub fn series_times_poly(series: &[BigInt], poly: &[i64]) -> Vec<BigInt> {
    (0..series.len())
        .map(|k| {
            poly.iter()
                .enumerate()
                .filter(|(j, _)| *j <= k)
                .fold(BigInt::zero(), |acc, (j, &p)| acc + BigInt::from(p) * &series[k - j])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn su_examples() {
        assert_eq!(su_dim(2, 2).unwrap(), 6);
        assert_eq!(su_dim(3, 3).unwrap(), 4);
        for n in 1..=6 {
            for k in (0..=2 * n).filter(|&k| k != n) {
                assert_eq!(su_dim(n, k).unwrap(), un_dim(n, k).unwrap());
            }
        }
        assert!(su_dim(2, 5).is_err());
    }

    #[test]
    fn sp_series() {
        assert_eq!(ints(&sp_series_coeffs(SpFamily::Sp, 2)), vec![1, 1, 7]);
        for f in [SpFamily::Sp, SpFamily::SpU1, SpFamily::SpSp1] {
            let s = sp_series_coeffs(f, 20);
            assert!(s[0].is_one());
            assert!(s.iter().all(|c| *c >= BigInt::zero()));
            let (num, den) = f.generating_function();
            let back = series_times_poly(&s, &den);
            for (k, c) in back.iter().enumerate() {
                assert_eq!(*c, BigInt::from(num.get(k).copied().unwrap_or(0)));
            }
        }
    }

    #[test]
    fn stable_range_matches_rank_two_table() {
        // k ≤ 2 lies in the stable range for Sp(2)
        assert_eq!(ints(&sp_series_coeffs(SpFamily::SpU1, 2)), vec![1, 1, 3]);
        assert_eq!(ints(&sp_series_coeffs(SpFamily::SpSp1, 2)), vec![1, 1, 2]);
    }
}
