//! Models of invariant valuation algebras and their bases.
//!
//! An [`Algebra`] stores, per degree, the structure constants of the product in
//! the model's canonical basis, the Fourier matrices, and change-of-basis matrices
//! for every supported basis. Algebras are built once and shared through a
//! process-wide registry.

pub mod dims;
pub mod exceptional;
pub mod so;
pub mod unitary;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{domain, Error, Result};
use crate::linalg::Matrix;
use crate::qpi::PiScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    So(usize),
    U(usize),
    G2,
    Spin7,
}

impl ModelId {
    /// Validated constructor: `n ≥ 1` for SO and U, no `n` for G2 and Spin(7).
    pub fn new(group: &str, n: Option<usize>) -> Result<Self> {
        let g = group.to_ascii_lowercase();
        match (g.as_str(), n) {
            ("so", Some(n)) if n >= 1 => Ok(ModelId::So(n)),
            ("u", Some(n)) if n >= 1 => Ok(ModelId::U(n)),
            ("so" | "u", Some(_)) => domain("n must be at least 1"),
            ("so" | "u", None) => domain(format!("group {group} requires n")),
            ("g2", None) => Ok(ModelId::G2),
            ("spin7", None) => Ok(ModelId::Spin7),
            ("g2" | "spin7", Some(_)) => domain(format!("group {group} takes no n")),
            _ => domain(format!("unknown group {group:?}")),
        }
    }

    /// Top degree, the real dimension of the ambient space.
    pub fn top(self) -> usize {
        match self {
            ModelId::So(n) => n,
            ModelId::U(n) => 2 * n,
            ModelId::G2 => 7,
            ModelId::Spin7 => 8,
        }
    }

    pub fn group_tag(self) -> &'static str {
        match self {
            ModelId::So(_) => "SO",
            ModelId::U(_) => "U",
            ModelId::G2 => "G2",
            ModelId::Spin7 => "SPIN7",
        }
    }

    pub fn n(self) -> Option<usize> {
        match self {
            ModelId::So(n) | ModelId::U(n) => Some(n),
            _ => None,
        }
    }

    pub fn canonical_basis(self) -> BasisId {
        match self {
            ModelId::So(_) => BasisId::Mu,
            _ => BasisId::Ts,
        }
    }

    pub fn supports(self, basis: BasisId) -> bool {
        use BasisId::*;
        match self {
            ModelId::So(_) => matches!(basis, Mu | Ts),
            ModelId::U(_) => matches!(basis, Ts | UBasis | Hiv | Tasaki | Prim),
            ModelId::G2 | ModelId::Spin7 => basis == Ts,
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::So(n) => write!(f, "SO({n})"),
            ModelId::U(n) => write!(f, "U({n})"),
            ModelId::G2 => f.write_str("G2"),
            ModelId::Spin7 => f.write_str("Spin(7)"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisId {
    /// Intrinsic volumes `μ_k` (SO only).
    Mu,
    /// Monomials in `t, s` (U), powers of `t` (SO), `t, u` or `t, v` monomials.
    Ts,
    /// Alesker's `U_{k,p}`.
    UBasis,
    /// Hermitian intrinsic volumes `μ_{k,q}`.
    Hiv,
    /// Tasaki valuations `τ_{k,q}`.
    Tasaki,
    /// Primitive basis `π_{k,r}`.
    Prim,
}

impl BasisId {
    pub const ALL: [BasisId; 6] = [
        BasisId::Mu,
        BasisId::Ts,
        BasisId::UBasis,
        BasisId::Hiv,
        BasisId::Tasaki,
        BasisId::Prim,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BasisId::Mu => "mu",
            BasisId::Ts => "ts",
            BasisId::UBasis => "u",
            BasisId::Hiv => "hiv",
            BasisId::Tasaki => "tasaki",
            BasisId::Prim => "prim",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        BasisId::ALL
            .into_iter()
            .find(|b| b.tag() == tag.to_ascii_lowercase())
            .ok_or_else(|| Error::Parse(format!("unknown basis {tag:?}")))
    }

    /// Name of the secondary index in JSON, if the basis has one.
    pub fn index_name(self) -> Option<&'static str> {
        match self {
            BasisId::Mu => None,
            BasisId::Ts | BasisId::UBasis => Some("p"),
            BasisId::Hiv | BasisId::Tasaki => Some("q"),
            BasisId::Prim => Some("r"),
        }
    }
}

/// Index of a basis element: degree `k` and the basis-specific second index.
///
/// For HIV the second index is the actual `q`, which starts at `max(0, k−n)`.
/// For the exceptional models it is the position in the degree's monomial list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisIndex {
    pub k: usize,
    pub j: usize,
}

impl BasisIndex {
    pub fn new(k: usize, j: usize) -> Self {
        BasisIndex { k, j }
    }
}

/// Change-of-basis data: columns of `to_canon[k]` are basis elements in canonical coordinates.
#[derive(Clone, Debug)]
pub(crate) struct BasisData {
    pub indices: Vec<Vec<usize>>,
    pub to_canon: Vec<Matrix>,
    pub from_canon: Vec<Matrix>,
}

impl BasisData {
    pub fn new(indices: Vec<Vec<usize>>, to_canon: Vec<Matrix>) -> Result<Self> {
        let from_canon = to_canon
            .iter()
            .enumerate()
            .map(|(k, a)| {
                a.invert()
                    .map_err(|_| Error::Internal(format!("basis matrix in degree {k} is singular")))
            })
            .collect::<Result<_>>()?;
        Ok(BasisData {
            indices,
            to_canon,
            from_canon,
        })
    }

    pub fn canonical(dims: &[usize]) -> Self {
        BasisData {
            indices: dims.iter().map(|&d| (0..d).collect()).collect(),
            to_canon: dims.iter().map(|&d| Matrix::identity(d)).collect(),
            from_canon: dims.iter().map(|&d| Matrix::identity(d)).collect(),
        }
    }
}

/// The invariant algebra of one model, with everything precomputed.
#[derive(Debug)]
pub struct Algebra {
    model: ModelId,
    dims: Vec<usize>,
    /// `structure[k][l][i * dims[l] + j]`: product of basis elements `b_i^(k) b_j^(l)`.
    structure: Vec<Vec<Vec<Vec<PiScalar>>>>,
    /// `vol = vol_scale · b_0^(m)`.
    vol_scale: PiScalar,
    /// Fourier transform from degree `k` to degree `m−k` in canonical coordinates.
    fourier: Vec<Matrix>,
    /// Canonical coordinates of `t` in degree 1.
    t: Vec<PiScalar>,
    bases: HashMap<BasisId, BasisData>,
}

type ProductFn<'a> = dyn Fn(usize, usize, usize, usize) -> Vec<PiScalar> + 'a;

impl Algebra {
    pub(crate) fn assemble(
        model: ModelId,
        dims: Vec<usize>,
        product: &ProductFn<'_>,
        vol_scale: PiScalar,
        fourier: Vec<Matrix>,
        t: Vec<PiScalar>,
        bases: HashMap<BasisId, BasisData>,
    ) -> Result<Self> {
        let m = model.top();
        if dims.len() != m + 1 || dims[m] != 1 {
            return Err(Error::Internal(format!("bad graded dimensions {dims:?}")));
        }
        let structure = (0..=m)
            .map(|k| {
                (0..=m - k)
                    .map(|l| {
                        let mut out = Vec::with_capacity(dims[k] * dims[l]);
                        for i in 0..dims[k] {
                            for j in 0..dims[l] {
                                out.push(product(k, i, l, j));
                            }
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        Ok(Algebra {
            model,
            dims,
            structure,
            vol_scale,
            fourier,
            t,
            bases,
        })
    }

    pub fn model(&self) -> ModelId {
        self.model
    }

    pub fn top(&self) -> usize {
        self.model.top()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.dims.get(k).copied().unwrap_or(0)
    }

    /// `b_i^(k) · b_j^(l)` in canonical coordinates of degree `k+l`; empty past the top.
    pub fn mul_basis(&self, k: usize, i: usize, l: usize, j: usize) -> &[PiScalar] {
        if k + l > self.top() {
            return &[];
        }
        &self.structure[k][l][i * self.dims[l] + j]
    }

    /// Product of homogeneous components `x ∈ Val_k`, `y ∈ Val_l`.
    pub fn mul_components(&self, k: usize, x: &[PiScalar], l: usize, y: &[PiScalar]) -> Vec<PiScalar> {
        let d = k + l;
        if d > self.top() {
            return Vec::new();
        }
        let mut out = vec![PiScalar::zero(); self.dims[d]];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (slot, c) in out.iter_mut().zip(self.mul_basis(k, i, l, j)) {
                    if !c.is_zero() {
                        *slot = &*slot + &(&ab * c);
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ψ ↦ x·ψ` from degree `l` to degree `k+l`, for `x ∈ Val_k`.
    pub fn mul_matrix(&self, k: usize, x: &[PiScalar], l: usize) -> Matrix {
        let d = k + l;
        if d > self.top() {
            return Matrix::zeros(0, self.dims[l]);
        }
        let mut m = Matrix::zeros(self.dims[d], self.dims[l]);
        for j in 0..self.dims[l] {
            let mut e = vec![PiScalar::zero(); self.dims[l]];
            e[j] = PiScalar::one();
            for (r, c) in self.mul_components(k, x, l, &e).into_iter().enumerate() {
                m[(r, j)] = c;
            }
        }
        m
    }

    pub fn vol_scale(&self) -> &PiScalar {
        &self.vol_scale
    }

    /// Coefficient of `vol` in a top-degree component.
    pub fn vol_coefficient(&self, x: &[PiScalar]) -> PiScalar {
        x.first()
            .map(|c| c.checked_div(&self.vol_scale).expect("vol scale is nonzero"))
            .unwrap_or_else(PiScalar::zero)
    }

    pub fn fourier_matrix(&self, k: usize) -> &Matrix {
        &self.fourier[k]
    }

    /// Canonical coordinates of `t = (2/π) μ_1`.
    pub fn t_coords(&self) -> &[PiScalar] {
        &self.t
    }

    pub(crate) fn basis_data(&self, basis: BasisId) -> Result<&BasisData> {
        self.bases
            .get(&basis)
            .ok_or_else(|| Error::Domain(format!("basis {} is not available for {}", basis.tag(), self.model)))
    }

    /// Valid second indices at degree `k` for `basis`, in ascending order.
    pub fn basis_indices(&self, basis: BasisId, k: usize) -> Result<&[usize]> {
        let data = self.basis_data(basis)?;
        data.indices
            .get(k)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Domain(format!("degree {k} exceeds top degree {}", self.top())))
    }

    /// Columns are the basis elements of degree `k` in canonical coordinates.
    pub fn basis_matrix(&self, basis: BasisId, k: usize) -> Result<&Matrix> {
        self.basis_indices(basis, k)?;
        Ok(&self.basis_data(basis)?.to_canon[k])
    }

    pub fn basis_matrix_inverse(&self, basis: BasisId, k: usize) -> Result<&Matrix> {
        self.basis_indices(basis, k)?;
        Ok(&self.basis_data(basis)?.from_canon[k])
    }
}

fn registry() -> &'static Mutex<HashMap<ModelId, Arc<Algebra>>> {
    static REG: OnceLock<Mutex<HashMap<ModelId, Arc<Algebra>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The shared algebra for `model`, built on first use.
///
/// Construction happens outside the lock, so concurrent first calls may build the
/// same algebra twice; the first insertion wins and the results are identical.
pub fn algebra(model: ModelId) -> Result<Arc<Algebra>> {
    if let Some(a) = registry().lock().expect("registry poisoned").get(&model) {
        return Ok(Arc::clone(a));
    }
    let built = Arc::new(match model {
        ModelId::So(n) if n >= 1 => so::build(n)?,
        ModelId::U(n) if n >= 1 => unitary::build(n)?,
        ModelId::G2 | ModelId::Spin7 => exceptional::build(model)?,
        _ => return domain("n must be at least 1"),
    });
    let mut reg = registry().lock().expect("registry poisoned");
    Ok(Arc::clone(reg.entry(model).or_insert(built)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_ids() {
        assert_eq!(ModelId::new("so", Some(3)).unwrap(), ModelId::So(3));
        assert_eq!(ModelId::new("G2", None).unwrap().top(), 7);
        assert_eq!(ModelId::new("spin7", None).unwrap().top(), 8);
        assert_eq!(ModelId::U(4).top(), 8);
        assert!(ModelId::new("g2", Some(7)).is_err());
        assert!(ModelId::new("u", None).is_err());
        assert!(ModelId::new("so", Some(0)).is_err());
        assert!(ModelId::new("sp", Some(2)).is_err());
    }

    #[test]
    fn basis_tags_round_trip() {
        for b in BasisId::ALL {
            assert_eq!(BasisId::from_tag(b.tag()).unwrap(), b);
        }
        assert!(BasisId::from_tag("xyz").is_err());
        assert!(ModelId::So(3).supports(BasisId::Mu));
        assert!(!ModelId::U(3).supports(BasisId::Mu));
        assert!(!ModelId::G2.supports(BasisId::Hiv));
    }

    #[test]
    fn registry_returns_shared_instance() {
        let a = algebra(ModelId::So(4)).unwrap();
        let b = algebra(ModelId::So(4)).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
