//! Exact arithmetic in the field Q(π) of rational functions in a transcendental π.
//!
//! Every coefficient in the engine lives here: ball volumes, flag coefficients,
//! structure constants and the entries of pairing matrices. Values are stored as
//! reduced quotients of polynomials over Q with a monic denominator, so equality
//! is structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

mod poly {
    //! Dense polynomials over Q in ascending degree; the zero polynomial is empty.

    use super::Rational;
    use num_traits::{One, Zero};

    pub fn trim(p: &mut Vec<Rational>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out: Vec<Rational> = (0..a.len().max(b.len()))
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => x + y,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn neg(a: &[Rational]) -> Vec<Rational> {
        a.iter().map(|x| -x).collect()
    }

    pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    pub fn scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
        if c.is_zero() {
            return Vec::new();
        }
        a.iter().map(|x| x * c).collect()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_order(a: &[Rational]) -> usize {
        a.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    pub fn is_monomial(a: &[Rational]) -> bool {
        a.iter().filter(|x| !x.is_zero()).count() == 1
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut rem = a.to_vec();
        trim(&mut rem);
        if rem.len() < b.len() {
            return (Vec::new(), rem);
        }
        let lead = b.last().expect("nonzero divisor");
        let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
        while rem.len() >= b.len() && !rem.is_empty() {
            let shift = rem.len() - b.len();
            let c = rem.last().unwrap() / lead;
            for (i, y) in b.iter().enumerate() {
                rem[shift + i] -= &c * y;
            }
            quot[shift] = c;
            rem.pop();
            trim(&mut rem);
        }
        trim(&mut quot);
        (quot, rem)
    }

    pub fn monic(a: &[Rational]) -> Vec<Rational> {
        match a.last() {
            Some(lead) if !lead.is_one() => {
                let inv = lead.recip();
                a.iter().map(|x| x * &inv).collect()
            }
            _ => a.to_vec(),
        }
    }

    /// Monic greatest common divisor by Euclid's algorithm.
    pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y);
            x = y;
            y = monic(&r);
        }
        monic(&x)
    }
}

/// An element of Q(π): `num(π) / den(π)` in lowest terms, `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PiScalar {
    num: Vec<Rational>,
    den: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl PiScalar {
    pub fn zero() -> Self {
        PiScalar {
            num: Vec::new(),
            den: vec![Rational::one()],
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn pi() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn from_rational(c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PiScalar {
            num: vec![c],
            den: vec![Rational::one()],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// `c · π^power`; negative powers land in the denominator.
    pub fn monomial(c: Rational, power: i64) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut num = vec![Rational::zero(); power.max(0) as usize + 1];
        let mut den = vec![Rational::zero(); (-power).max(0) as usize + 1];
        *num.last_mut().unwrap() = c;
        *den.last_mut().unwrap() = Rational::one();
        PiScalar { num, den }
    }

    /// Builds `num / den` from ascending π-coefficients and reduces it.
    pub fn from_parts(num: Vec<Rational>, den: Vec<Rational>) -> Result<Self> {
        let mut num = num;
        let mut den = den;
        poly::trim(&mut num);
        poly::trim(&mut den);
        if den.is_empty() {
            return domain("zero denominator");
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(mut num: Vec<Rational>, mut den: Vec<Rational>) -> Self {
        if num.is_empty() {
            return Self::zero();
        }
        if den.len() > 1 {
            if poly::is_monomial(&num) || poly::is_monomial(&den) {
                let shift = poly::low_order(&num).min(poly::low_order(&den));
                if shift > 0 {
                    num.drain(..shift);
                    den.drain(..shift);
                }
            } else {
                let g = poly::gcd(&num, &den);
                if g.len() > 1 {
                    num = poly::divrem(&num, &g).0;
                    den = poly::divrem(&den, &g).0;
                }
            }
        }
        let lead = den.last().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = poly::scale(&num, &inv);
            den = poly::scale(&den, &inv);
        }
        PiScalar { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.den.len() == 1 && self.num.len() == 1 && self.num[0].is_one()
    }

    /// Ascending π-coefficients of the numerator.
    pub fn numerator(&self) -> &[Rational] {
        &self.num
    }

    /// Ascending π-coefficients of the (monic) denominator.
    pub fn denominator(&self) -> &[Rational] {
        &self.den
    }

    /// `Some(c)` when the value is a plain rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match (self.num.len(), self.den.len()) {
            (0, _) => Some(Rational::zero()),
            (1, 1) => Some(self.num[0].clone()),
            _ => None,
        }
    }

    /// `Some((c, k))` when the value equals `c · π^k`.
    pub fn as_monomial(&self) -> Option<(Rational, i64)> {
        if self.is_zero() {
            return Some((Rational::zero(), 0));
        }
        if !poly::is_monomial(&self.num) || !poly::is_monomial(&self.den) {
            return None;
        }
        let i = self.num.len() - 1;
        let j = self.den.len() - 1;
        Some((self.num[i].clone() / &self.den[j], i as i64 - j as i64))
    }

    /// Exact sign, available when the value is a rational multiple of a power of π.
    pub fn sign(&self) -> Option<Ordering> {
        self.as_monomial().map(|(c, _)| c.cmp(&Rational::zero()))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return domain("division by zero");
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return domain("division by zero");
        }
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PiScalar {
            num: poly::scale(&self.num, c),
            den: self.den.clone(),
        }
    }

    /// Floating-point value at π.
    pub fn eval_approx(&self) -> f64 {
        let horner = |p: &[Rational]| {
            p.iter().rev().fold(0.0, |acc, c| {
                acc * std::f64::consts::PI + c.to_f64().unwrap_or(f64::NAN)
            })
        };
        let d = horner(&self.den);
        debug_assert!(d != 0.0);
        horner(&self.num) / d
    }

    pub fn to_latex(&self) -> String {
        if self.den.len() == 1 {
            return latex_poly(&self.num);
        }
        let (num, den) = integral_parts(&self.num, &self.den);
        format!("\\frac{{{}}}{{{}}}", latex_poly(&num), latex_poly(&den))
    }
}

pub fn field_op(a: &PiScalar, b: &PiScalar, op: FieldOp) -> Result<PiScalar> {
    Ok(match op {
        FieldOp::Add => a + b,
        FieldOp::Sub => a - b,
        FieldOp::Mul => a * b,
        FieldOp::Div => a.checked_div(b)?,
    })
}

impl<'a> Add<&'a PiScalar> for &'a PiScalar {
    type Output = PiScalar;
    fn add(self, rhs: &PiScalar) -> PiScalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.len() == 1 {
                return PiScalar {
                    num: poly::add(&self.num, &rhs.num),
                    den: self.den.clone(),
                };
            }
            return PiScalar::reduce(poly::add(&self.num, &rhs.num), self.den.clone());
        }
        let num = poly::add(&poly::mul(&self.num, &rhs.den), &poly::mul(&rhs.num, &self.den));
        PiScalar::reduce(num, poly::mul(&self.den, &rhs.den))
    }
}

impl<'a> Sub<&'a PiScalar> for &'a PiScalar {
    type Output = PiScalar;
    fn sub(self, rhs: &PiScalar) -> PiScalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a PiScalar> for &'a PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: &PiScalar) -> PiScalar {
        if self.is_zero() || rhs.is_zero() {
            return PiScalar::zero();
        }
        if self.den.len() == 1 && rhs.den.len() == 1 {
            return PiScalar {
                num: poly::mul(&self.num, &rhs.num),
                den: self.den.clone(),
            };
        }
        PiScalar::reduce(poly::mul(&self.num, &rhs.num), poly::mul(&self.den, &rhs.den))
    }
}

impl Neg for &PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        PiScalar {
            num: poly::neg(&self.num),
            den: self.den.clone(),
        }
    }
}

impl Neg for PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<PiScalar> for PiScalar {
            type Output = PiScalar;
            fn $m(self, rhs: PiScalar) -> PiScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a PiScalar> for PiScalar {
            type Output = PiScalar;
            fn $m(self, rhs: &PiScalar) -> PiScalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for PiScalar {
    fn sum<I: Iterator<Item = PiScalar>>(iter: I) -> Self {
        iter.fold(PiScalar::zero(), |acc, x| &acc + &x)
    }
}

impl From<i64> for PiScalar {
    fn from(n: i64) -> Self {
        PiScalar::from_int(n)
    }
}

impl From<Rational> for PiScalar {
    fn from(c: Rational) -> Self {
        PiScalar::from_rational(c)
    }
}

// ---------------------------------------------------------------------------
// Combinatorial constants

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `1·3·5···m` for odd `m ≥ 1`, with `(-1)!! = 1`.
pub fn double_factorial(m: i64) -> Result<Rational> {
    if m < -1 || m % 2 == 0 {
        return domain(format!("double factorial defined here for odd m >= -1, got {m}"));
    }
    let mut acc = BigInt::one();
    let mut i = 3;
    while i <= m {
        acc *= BigInt::from(i);
        i += 2;
    }
    Ok(Rational::from_integer(acc))
}

/// Volume of the n-dimensional unit ball, from `ω_n = (2π/n) ω_{n-2}`.
pub fn omega(n: u64) -> PiScalar {
    let (c, power) = omega_parts(n);
    PiScalar::monomial(c, power)
}

fn omega_parts(n: u64) -> (Rational, i64) {
    let (mut c, mut power, start) = if n.is_multiple_of(2) {
        (Rational::one(), 0i64, 2)
    } else {
        (int(2), 0i64, 3)
    };
    let mut k = start;
    while k <= n {
        c *= Rational::new(BigInt::from(2), BigInt::from(k));
        power += 1;
        k += 2;
    }
    (c, power)
}

/// Flag coefficient `binom(n,k) ω_n / (ω_k ω_{n-k})`.
pub fn flag(n: i64, k: i64) -> Result<PiScalar> {
    if k < 0 || n < 0 || k > n {
        return domain(format!("flag coefficient needs 0 <= k <= n, got n={n}, k={k}"));
    }
    let (n, k) = (n as u64, k as u64);
    let (cn, pn) = omega_parts(n);
    let (ck, pk) = omega_parts(k);
    let (cl, pl) = omega_parts(n - k);
    let c = Rational::from_integer(binomial(n, k)) * cn / (ck * cl);
    Ok(PiScalar::monomial(c, pn - pk - pl))
}

// ---------------------------------------------------------------------------
// Text form

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_poly(p: &[Rational]) -> String {
    if p.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push(if negative { '-' } else { '+' });
        }
        let power = match k {
            0 => String::new(),
            1 => "pi".to_string(),
            _ => format!("pi^{k}"),
        };
        if k == 0 {
            out.push_str(&fmt_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&power);
        } else {
            out.push_str(&fmt_rational(&mag));
            out.push('*');
            out.push_str(&power);
        }
    }
    out
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 {
            return f.write_str(&fmt_poly(&self.num));
        }
        if poly::is_monomial(&self.den) && self.num.len() == 1 {
            let j = self.den.len() - 1;
            let power = if j == 1 { "pi".to_string() } else { format!("pi^{j}") };
            let c = &self.num[0];
            return if c.is_integer() {
                write!(f, "{}/{}", c.numer(), power)
            } else {
                write!(f, "{}/({}*{})", c.numer(), c.denom(), power)
            };
        }
        write!(f, "({})/({})", fmt_poly(&self.num), fmt_poly(&self.den))
    }
}

impl fmt::Debug for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiScalar({self})")
    }
}

/// Scales a fraction so both parts have integer coefficients (for display).
fn integral_parts(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let lcm = num
        .iter()
        .chain(den.iter())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let s = Rational::from_integer(lcm);
    (poly::scale(num, &s), poly::scale(den, &s))
}

fn latex_poly(p: &[Rational]) -> String {
    if p.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let power = match k {
            0 => String::new(),
            1 => "\\pi".to_string(),
            _ => format!("\\pi^{{{k}}}"),
        };
        let coeff = if mag.is_integer() {
            mag.numer().to_string()
        } else {
            format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
        };
        if k == 0 {
            out.push_str(&coeff);
        } else if mag.is_one() {
            out.push_str(&power);
        } else {
            out.push_str(&coeff);
            out.push_str(&power);
        }
    }
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!(
            "{what} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        )))
    }

    fn expr(&mut self) -> Result<PiScalar> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<PiScalar> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    if d.is_zero() {
                        return self.err("division by zero");
                    }
                    acc = acc.checked_div(&d)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<PiScalar> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<PiScalar> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let negative = if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let e: u32 = match digits.parse() {
            Ok(e) if e <= 1000 => e,
            _ => return self.err("expected small integer exponent"),
        };
        let v = base.pow(e);
        if negative {
            v.inv().or_else(|_| self.err("zero to a negative power"))
        } else {
            Ok(v)
        }
    }

    fn atom(&mut self) -> Result<PiScalar> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let n: BigInt = digits.parse().map_err(|_| Error::Parse(digits.to_string()))?;
                Ok(PiScalar::from_bigint(n))
            }
            Some(b'p') if self.src[self.pos..].starts_with(b"pi") => {
                self.pos += 2;
                Ok(PiScalar::pi())
            }
            Some(_) if self.src[self.pos..].starts_with("π".as_bytes()) => {
                self.pos += "π".len();
                Ok(PiScalar::pi())
            }
            _ => self.err("expected number, 'pi' or '('"),
        }
    }
}

impl FromStr for PiScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let v = p.expr()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(v)
    }
}

impl Serialize for PiScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PiScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(n) => Ok(PiScalar::from_int(n)),
        }
    }
}
