//! JSON and LaTeX forms of valuations and tensors.
//!
//! Valuation JSON: `{"group":"U","n":3,"basis":"hiv","terms":[{"k":4,"q":1,"coeff":"2/3"}]}`.
//! SO terms carry `k` only and exceptional terms carry a `monomial` name.
//! Tensor JSON: `{"group":..,"n":..,"basis":..,"blocks":[{"k":1,"l":1,"matrix":[["2/pi"]]}]}`,
//! with rows and columns in ascending basis-index order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::exceptional::ExcModel;
use crate::model::{algebra, BasisId, BasisIndex, ModelId};
use crate::qpi::PiScalar;
use crate::valuation::{TensorValuation, Valuation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomial: Option<String>,
    pub coeff: PiScalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockJson {
    pub k: usize,
    pub l: usize,
    pub matrix: Vec<Vec<PiScalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<String>,
    pub blocks: Vec<BlockJson>,
}

fn check_basis(model: ModelId, basis: BasisId) -> Result<()> {
    if model.supports(basis) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "basis {} is not available for {model}",
            basis.tag()
        )))
    }
}

/// Model named by the document, reconciled with a model given out of band.
fn resolve_model(group: Option<&str>, n: Option<usize>, fallback: Option<ModelId>) -> Result<ModelId> {
    match (group, fallback) {
        (Some(g), fb) => {
            let m = ModelId::new(g, n)?;
            match fb {
                Some(f) if f != m => Err(Error::Domain(format!("document is for {m} but {f} was requested"))),
                _ => Ok(m),
            }
        }
        (None, Some(f)) => match n {
            Some(n) if Some(n) != f.n() => Err(Error::Domain(format!("document has n = {n} but {f} was requested"))),
            _ => Ok(f),
        },
        (None, None) => Err(Error::Domain("valuation JSON needs a group".into())),
    }
}

fn term_index(model: ModelId, basis: BasisId, t: &TermJson) -> Result<BasisIndex> {
    if let ModelId::G2 | ModelId::Spin7 = model {
        let exc = ExcModel::from_model(model)?;
        let name = t
            .monomial
            .as_deref()
            .ok_or_else(|| Error::Domain(format!("{model} terms need a monomial name")))?;
        let (k, j) = exc.parse_monomial(name)?;
        if k != t.k {
            return Err(Error::Domain(format!("monomial {name} has degree {k}, not {}", t.k)));
        }
        return Ok(BasisIndex::new(k, j));
    }
    let given: Vec<(&str, usize)> = [("p", t.p), ("q", t.q), ("r", t.r)]
        .into_iter()
        .filter_map(|(name, v)| v.map(|v| (name, v)))
        .collect();
    let expected = match model {
        ModelId::U(_) => basis.index_name(),
        _ => None,
    };
    match (expected, given.as_slice()) {
        (None, []) => Ok(BasisIndex::new(t.k, 0)),
        (Some(e), [(name, v)]) if *name == e => Ok(BasisIndex::new(t.k, *v)),
        (None, _) => Err(Error::Domain(format!("basis {} takes no second index", basis.tag()))),
        (Some(e), _) => Err(Error::Domain(format!(
            "basis {} needs exactly the index {e:?}",
            basis.tag()
        ))),
    }
}

impl ValuationJson {
    pub fn to_valuation(&self, fallback_model: Option<ModelId>, fallback_basis: Option<BasisId>) -> Result<Valuation> {
        let model = resolve_model(self.group.as_deref(), self.n, fallback_model)?;
        let basis = match (&self.basis, fallback_basis) {
            (Some(b), _) => BasisId::from_tag(b)?,
            (None, Some(b)) => b,
            (None, None) => model.canonical_basis(),
        };
        check_basis(model, basis)?;
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((term_index(model, basis, t)?, t.coeff.clone())))
            .collect::<Result<Vec<_>>>()?;
        Valuation::construct(model, basis, &terms)
    }
}

pub fn valuation_to_json(v: &Valuation, basis: BasisId) -> Result<ValuationJson> {
    let model = v.model();
    check_basis(model, basis)?;
    let exc = ExcModel::from_model(model).ok();
    let terms = v
        .convert_basis(basis)?
        .into_iter()
        .map(|(idx, coeff)| {
            let mut t = TermJson {
                k: idx.k,
                p: None,
                q: None,
                r: None,
                monomial: None,
                coeff,
            };
            if let Some(e) = exc {
                t.monomial = e.monomial_name(idx.k, idx.j);
            } else if let ModelId::U(_) = model {
                match basis.index_name() {
                    Some("p") => t.p = Some(idx.j),
                    Some("q") => t.q = Some(idx.j),
                    Some("r") => t.r = Some(idx.j),
                    _ => {}
                }
            }
            t
        })
        .collect();
    Ok(ValuationJson {
        group: Some(model.group_tag().to_string()),
        n: model.n(),
        basis: Some(basis.tag().to_string()),
        terms,
    })
}

pub fn parse_valuation(
    text: &str,
    fallback_model: Option<ModelId>,
    fallback_basis: Option<BasisId>,
) -> Result<Valuation> {
    let doc: ValuationJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid valuation JSON: {e}")))?;
    doc.to_valuation(fallback_model, fallback_basis)
}

pub fn tensor_to_json(t: &TensorValuation, basis: BasisId) -> Result<TensorJson> {
    let model = t.model();
    check_basis(model, basis)?;
    let blocks = t
        .in_bases(basis, basis)?
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|((k, l), m)| BlockJson {
            k,
            l,
            matrix: m.to_rows(),
        })
        .collect();
    Ok(TensorJson {
        group: Some(model.group_tag().to_string()),
        n: model.n(),
        basis: Some(basis.tag().to_string()),
        blocks,
    })
}

impl TensorJson {
    pub fn to_tensor(&self, fallback_model: Option<ModelId>) -> Result<TensorValuation> {
        let model = resolve_model(self.group.as_deref(), self.n, fallback_model)?;
        let basis = match &self.basis {
            Some(b) => BasisId::from_tag(b)?,
            None => model.canonical_basis(),
        };
        check_basis(model, basis)?;
        let alg = algebra(model)?;
        let mut out = TensorValuation::zero(model);
        for b in &self.blocks {
            let x = Matrix::from_rows(b.matrix.clone())?;
            let (a, c) = (alg.basis_matrix(basis, b.k)?, alg.basis_matrix(basis, b.l)?);
            if x.rows() != a.cols() || x.cols() != c.cols() {
                return Err(Error::Domain(format!("block ({},{}) has the wrong shape", b.k, b.l)));
            }
            out.add_block(b.k, b.l, a.mul(&x)?.mul(&c.transpose())?);
        }
        Ok(out)
    }
}

/// LaTeX symbol for a basis element.
pub fn basis_symbol(model: ModelId, basis: BasisId, idx: BasisIndex) -> String {
    let (k, j) = (idx.k, idx.j);
    if let Ok(e) = ExcModel::from_model(model) {
        let (a, b) = e.basis(k)[j];
        let letter = if e == ExcModel::G2 { "u" } else { "v" };
        return match (a, b) {
            (0, 0) => "\\chi".to_string(),
            (a, 0) => power("t", a),
            (a, _) => format!("{}{letter}", power("t", a)),
        };
    }
    match (model, basis) {
        (_, BasisId::Mu) => format!("\\mu_{{{k}}}"),
        (ModelId::So(_), BasisId::Ts) => {
            if k == 0 {
                "\\chi".to_string()
            } else {
                power("t", k)
            }
        }
        (_, BasisId::Ts) if k == 0 => "\\chi".to_string(),
        (_, BasisId::Ts) => format!("{}{}", power("s", j), power("t", k - 2 * j)),
        (_, BasisId::UBasis) => format!("U_{{{k},{j}}}"),
        (_, BasisId::Hiv) => format!("\\mu_{{{k},{j}}}"),
        (_, BasisId::Tasaki) => format!("\\tau_{{{k},{j}}}"),
        (_, BasisId::Prim) => format!("\\pi_{{{k},{j}}}"),
    }
}

fn power(x: &str, e: usize) -> String {
    match e {
        0 => String::new(),
        1 => x.to_string(),
        _ => format!("{x}^{{{e}}}"),
    }
}

/// `c·X` with sign pulled out front; `X` is empty for a bare scalar.
fn latex_term(c: &PiScalar, symbol: &str) -> (bool, String) {
    let neg = c.sign() == Some(std::cmp::Ordering::Less);
    let a = if neg { -c } else { c.clone() };
    let coeff = a.to_latex();
    let body = if a.is_one() && !symbol.is_empty() {
        symbol.to_string()
    } else if a.as_monomial().is_some() {
        format!("{coeff}{}{symbol}", if symbol.is_empty() { "" } else { "\\," })
    } else {
        format!("\\left({coeff}\\right){symbol}")
    };
    (neg, body)
}

fn latex_sum(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

pub fn valuation_to_latex(v: &Valuation, basis: BasisId) -> Result<String> {
    check_basis(v.model(), basis)?;
    let terms = v
        .convert_basis(basis)?
        .into_iter()
        .map(|(idx, c)| latex_term(&c, &basis_symbol(v.model(), basis, idx)))
        .collect();
    Ok(latex_sum(terms))
}

pub fn tensor_to_latex(t: &TensorValuation, basis: BasisId) -> Result<String> {
    let model = t.model();
    check_basis(model, basis)?;
    let alg = algebra(model)?;
    let mut terms = Vec::new();
    for ((k, l), m) in t.in_bases(basis, basis)? {
        let (rows, cols) = (alg.basis_indices(basis, k)?, alg.basis_indices(basis, l)?);
        for (i, &a) in rows.iter().enumerate() {
            for (j, &b) in cols.iter().enumerate() {
                let c = &m[(i, j)];
                if c.is_zero() {
                    continue;
                }
                let sym = format!(
                    "{} \\otimes {}",
                    basis_symbol(model, basis, BasisIndex::new(k, a)),
                    basis_symbol(model, basis, BasisIndex::new(l, b))
                );
                terms.push(latex_term(c, &sym));
            }
        }
    }
    Ok(latex_sum(terms))
}
