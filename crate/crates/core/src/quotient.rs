//! Graded quotients C[t,x]/I by homogeneous ideals, with `t` of weight 1 and `x` of weight `w`.
//!
//! Each degree is handled independently: all multiples of the generators landing in
//! that degree are stacked into a matrix over the monomials (highest x-power first),
//! and row reduction turns the free columns into the monomial basis. Pivot monomials
//! are then rewritten in terms of that basis.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::qpi::PiScalar;

/// Sparse polynomial in `t` and `x`; the key `(a, b)` is the monomial `t^a x^b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(usize, usize), PiScalar>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: usize, b: usize, c: PiScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, c);
        p
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, PiScalar::one())
    }

    pub fn add_term(&mut self, a: usize, b: usize, c: PiScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((a, b)).or_insert_with(PiScalar::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &PiScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: usize, b: usize) -> PiScalar {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(PiScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &PiScalar) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(a, b), x) in &self.terms {
            out.add_term(a, b, x * c);
        }
        out
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(a, b), x) in &self.terms {
            for (&(c, d), y) in &other.terms {
                out.add_term(a + c, b + d, x * y);
            }
        }
        out
    }

    pub fn pow(&self, e: usize) -> BiPoly {
        (0..e).fold(BiPoly::one(), |acc, _| acc.mul(self))
    }

    /// Weighted degree of a homogeneous polynomial; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self, w: usize) -> Option<usize> {
        let mut degs = self.terms.keys().map(|&(a, b)| a + w * b);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }
}

/// Monomials `t^a x^b` with `a + w·b = d`, highest x-power first.
pub fn monomials_of_degree(d: usize, w: usize) -> Vec<(usize, usize)> {
    (0..=d / w).rev().map(|b| (d - w * b, b)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTable {
    /// Basis monomials of this degree in canonical order (ascending x-power).
    pub basis: Vec<(usize, usize)>,
    /// Coordinates of every monomial of this degree in `basis`.
    pub reductions: Vec<((usize, usize), Vec<PiScalar>)>,
}

#[derive(Clone, Debug)]
pub struct GradedQuotient {
    weight: usize,
    top: usize,
    degrees: Vec<DegreeTable>,
    lookup: Vec<HashMap<(usize, usize), usize>>,
}

impl GradedQuotient {
    /// Builds the quotient, checking that every degree above `top` vanishes.
    pub fn build(weight: usize, generators: &[BiPoly], top: usize) -> Result<Self> {
        assert!(weight >= 1);
        let gens: Vec<(usize, &BiPoly)> = generators
            .iter()
            .map(|g| {
                g.homogeneous_degree(weight)
                    .map(|d| (d, g))
                    .ok_or_else(|| Error::Internal("generator is not homogeneous".into()))
            })
            .collect::<Result<_>>()?;

        let mut degrees = Vec::with_capacity(top + 1);
        for d in 0..=top + weight {
            let table = reduce_degree(d, weight, &gens);
            if d > top {
                if !table.basis.is_empty() {
                    return Err(Error::Internal(format!(
                        "quotient is nonzero in degree {d} above the top degree {top}"
                    )));
                }
            } else {
                degrees.push(table);
            }
        }
        Ok(Self::from_tables(weight, top, degrees))
    }

    pub(crate) fn from_tables(weight: usize, top: usize, degrees: Vec<DegreeTable>) -> Self {
        let lookup = degrees
            .iter()
            .map(|t| t.reductions.iter().enumerate().map(|(i, (m, _))| (*m, i)).collect())
            .collect();
        GradedQuotient {
            weight,
            top,
            degrees,
            lookup,
        }
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn tables(&self) -> &[DegreeTable] {
        &self.degrees
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|t| t.basis.len()).collect()
    }

    pub fn basis(&self, d: usize) -> &[(usize, usize)] {
        &self.degrees[d].basis
    }

    /// Coordinates of `t^a x^b` in the basis of its degree; empty above the top degree.
    pub fn reduce_monomial(&self, a: usize, b: usize) -> Vec<PiScalar> {
        let d = a + self.weight * b;
        if d > self.top {
            return Vec::new();
        }
        let i = self.lookup[d][&(a, b)];
        self.degrees[d].reductions[i].1.clone()
    }

    /// Normal form of a polynomial: per-degree coordinate vectors, degrees `0..=top`.
    pub fn normal_form(&self, p: &BiPoly) -> Vec<Vec<PiScalar>> {
        let mut out: Vec<Vec<PiScalar>> = self
            .degrees
            .iter()
            .map(|t| vec![PiScalar::zero(); t.basis.len()])
            .collect();
        for (&(a, b), c) in p.terms() {
            let d = a + self.weight * b;
            if d > self.top {
                continue;
            }
            for (slot, r) in out[d].iter_mut().zip(self.reduce_monomial(a, b)) {
                if !r.is_zero() {
                    *slot = &*slot + &(c * &r);
                }
            }
        }
        out
    }
}

fn reduce_degree(d: usize, w: usize, gens: &[(usize, &BiPoly)]) -> DegreeTable {
    let monos = monomials_of_degree(d, w);
    let col: HashMap<(usize, usize), usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut rows = Vec::new();
    for &(gd, g) in gens {
        if gd > d {
            continue;
        }
        for (a, b) in monomials_of_degree(d - gd, w) {
            let mut row = vec![PiScalar::zero(); monos.len()];
            for (&(ga, gb), c) in g.terms() {
                row[col[&(ga + a, gb + b)]] = c.clone();
            }
            rows.push(row);
        }
    }
    let (red, pivots) = if rows.is_empty() {
        (Matrix::zeros(0, monos.len()), Vec::new())
    } else {
        Matrix::from_rows(rows).expect("rows share the monomial count").rref()
    };
    let free: Vec<usize> = (0..monos.len()).filter(|j| !pivots.contains(j)).rev().collect();
    let basis: Vec<(usize, usize)> = free.iter().map(|&j| monos[j]).collect();

    let mut reductions = Vec::with_capacity(monos.len());
    for (j, &m) in monos.iter().enumerate().rev() {
        let coords = if let Some(r) = pivots.iter().position(|&p| p == j) {
            free.iter().map(|&f| -&red[(r, f)]).collect()
        } else {
            free.iter()
                .map(|&f| if f == j { PiScalar::one() } else { PiScalar::zero() })
                .collect()
        };
        reductions.push((m, coords));
    }
    DegreeTable { basis, reductions }
}
