//! Command-line front end. [`run`] is pure apart from reading `--file` inputs.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::cones::{un_monotone_check, un_positive_check};
use crate::error::{Error, Result};
use crate::geometry::{check_pkf_2d, intrinsic_volumes_2d, seeded_polygon_pairs, ConvexBody2D};
use crate::io::{parse_valuation, tensor_to_json, tensor_to_latex, valuation_to_json, valuation_to_latex};
use crate::kinematics::{akf, hard_lefschetz_check, kf, pairing_matrix, template_additive_solver};
use crate::linalg::Matrix;
use crate::model::dims::{sp_series_coeffs, su_dim, SpFamily};
use crate::model::{algebra, BasisId, ModelId};
use crate::valuation::{TensorValuation, Valuation};

#[derive(Parser, Debug)]
#[command(
    name = "kinval",
    version,
    about = "Exact algebra and integral geometry of invariant valuations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// so, u, g2 or spin7
    #[arg(long)]
    group: String,
    /// Required for so and u, rejected for g2 and spin7
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Latex,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Basis for valuation inputs without a "basis" field and for all output
    #[arg(long)]
    basis: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct ValArg {
    /// Valuation JSON, or `chi` / `vol`
    #[arg(long, conflicts_with = "file")]
    val: Option<String>,
    /// Read the valuation JSON from a file
    #[arg(long)]
    file: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Graded dimensions (groups so, u, su, g2, spin7)
    Dims {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Alesker product
    Mult {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Bernig–Fu convolution
    Conv {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Fourier transform
    Fourier {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        val: ValArg,
    },
    /// Kinematic formula k(φ); defaults to φ = χ
    Kf {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        val: ValArg,
    },
    /// Additive kinematic formula a(φ); defaults to φ = χ
    Akf {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        val: ValArg,
    },
    /// Poincaré pairing between degrees k and m−k
    Pd {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long)]
        k: usize,
    },
    /// Hard Lefschetz rank check; every admissible k when omitted
    Hlt {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Re-express a valuation in another basis
    BasisConvert {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        out: OutArgs,
        #[command(flatten)]
        val: ValArg,
        #[arg(long)]
        to: String,
    },
    /// Monotone cone membership in U(n)
    CheckMonotone {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        basis: Option<String>,
        #[command(flatten)]
        val: ValArg,
    },
    /// Positive cone membership in U(n)
    CheckPositive {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        basis: Option<String>,
        #[command(flatten)]
        val: ValArg,
    },
    /// Additive SO(n) formulas by the template method
    Template {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Stable Poincaré series coefficients (sp, spu1, spsp1)
    SeriesSp {
        #[arg(long, default_value = "sp")]
        family: String,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
    },
    /// Quadrature check of the planar principal kinematic formula
    McVerify {
        #[arg(long, value_enum, default_value = "square")]
        body: Body,
        #[arg(long, default_value_t = 4096)]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Accepted for symmetry; output is always JSON
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Body {
    Square,
    Disc,
    Random,
}

enum Output {
    Json(serde_json::Value),
    /// LaTeX or pre-rendered JSON.
    Text(String),
}

fn model_of(args: &ModelArgs) -> Result<ModelId> {
    ModelId::new(&args.group, args.n)
}

fn basis_of(model: ModelId, tag: &Option<String>) -> Result<BasisId> {
    let b = match tag {
        Some(t) => BasisId::from_tag(t)?,
        None => model.canonical_basis(),
    };
    if !model.supports(b) {
        return Err(Error::Domain(format!("basis {} is not available for {model}", b.tag())));
    }
    Ok(b)
}

/// `group` and, for SO and U, `n`.
fn header(model: ModelId) -> serde_json::Map<String, serde_json::Value> {
    let mut doc = serde_json::Map::new();
    doc.insert("group".into(), json!(model.group_tag()));
    if let Some(n) = model.n() {
        doc.insert("n".into(), json!(n));
    }
    doc
}

fn read_file(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))
}

fn valuation_arg(text: &str, model: ModelId, basis: BasisId) -> Result<Valuation> {
    match text.trim() {
        "chi" => Valuation::chi(model),
        "vol" => Valuation::vol(model),
        s => parse_valuation(s, Some(model), Some(basis)),
    }
}

fn single_valuation(v: &ValArg, model: ModelId, basis: BasisId, default_chi: bool) -> Result<Valuation> {
    match (&v.val, &v.file) {
        (Some(s), _) => valuation_arg(s, model, basis),
        (None, Some(path)) => valuation_arg(&read_file(path)?, model, basis),
        (None, None) if default_chi => Valuation::chi(model),
        (None, None) => Err(Error::Parse("a valuation is required (--val or --file)".into())),
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<serde_json::Value> {
    serde_json::to_value(x).map_err(|e| Error::Internal(format!("serialization failed: {e}")))
}

fn emit_valuation(v: &Valuation, basis: BasisId, format: Format) -> Result<Output> {
    Ok(match format {
        Format::Json => Output::Json(to_value(&valuation_to_json(v, basis)?)?),
        Format::Latex => Output::Text(valuation_to_latex(v, basis)?),
    })
}

fn emit_tensor(t: &TensorValuation, basis: BasisId, format: Format) -> Result<Output> {
    Ok(match format {
        Format::Json => Output::Json(to_value(&tensor_to_json(t, basis)?)?),
        Format::Latex => Output::Text(tensor_to_latex(t, basis)?),
    })
}

fn matrix_latex(m: &Matrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|c| c.to_latex()).collect::<Vec<_>>().join(" & "))
        .collect();
    format!("\\begin{{pmatrix}} {} \\end{{pmatrix}}", rows.join(" \\\\ "))
}

fn dims(args: &ModelArgs) -> Result<Output> {
    let v: Vec<usize> = if args.group.eq_ignore_ascii_case("su") {
        let n = args.n.ok_or_else(|| Error::Domain("group su requires n".into()))?;
        if n < 1 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        (0..=2 * n).map(|k| su_dim(n, k)).collect::<Result<_>>()?
    } else {
        algebra(model_of(args)?)?.dims().to_vec()
    };
    Ok(Output::Json(json!(v)))
}

fn pd(model: ModelId, out: &OutArgs, k: usize) -> Result<Output> {
    let basis = basis_of(model, &out.basis)?;
    let alg = algebra(model)?;
    let m = pairing_matrix(model, k)?;
    let a = alg.basis_matrix(basis, k)?;
    let b = alg.basis_matrix(basis, model.top() - k)?;
    let m = a.transpose().mul(&m)?.mul(b)?;
    Ok(match out.format {
        Format::Json => {
            let mut doc = header(model);
            doc.insert("basis".into(), json!(basis.tag()));
            doc.insert("k".into(), json!(k));
            doc.insert("l".into(), json!(model.top() - k));
            doc.insert("matrix".into(), to_value(&m.to_rows())?);
            Output::Json(doc.into())
        }
        Format::Latex => Output::Text(matrix_latex(&m)),
    })
}

fn hlt(model: ModelId, k: Option<usize>) -> Result<Output> {
    let alg = algebra(model)?;
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=model.top() / 2).collect(),
    };
    let rows = ks
        .into_iter()
        .map(|k| {
            let iso = hard_lefschetz_check(model, k)?;
            Ok(json!({"k": k, "dim": alg.dim(k), "dim_dual": alg.dim(model.top() - k), "isomorphism": iso}))
        })
        .collect::<Result<Vec<_>>>()?;
    let all = rows.iter().all(|r| r["isomorphism"] == json!(true));
    let mut doc = header(model);
    doc.insert("all".into(), json!(all));
    doc.insert("degrees".into(), json!(rows));
    Ok(Output::Json(doc.into()))
}

fn cone(model: ModelId, basis: &Option<String>, val: &ValArg, monotone: bool) -> Result<Output> {
    if !matches!(model, ModelId::U(_)) {
        return Err(Error::Domain(format!("cone checks need group u, got {model}")));
    }
    let basis = match basis {
        Some(_) => basis_of(model, basis)?,
        None => BasisId::Hiv,
    };
    let phi = single_valuation(val, model, basis, false)?;
    let verdict = if monotone {
        un_monotone_check(&phi)?
    } else {
        un_positive_check(&phi)?
    };
    let violated: Vec<_> = verdict
        .violated
        .iter()
        .map(|v| json!({"id": v.id, "family": v.family.tag(), "k": v.k, "q": v.q}))
        .collect();
    Ok(Output::Json(json!({
        "cone": if monotone { "monotone" } else { "positive" },
        "member": verdict.member,
        "violated": violated,
    })))
}

fn template(n: usize, format: Format) -> Result<Output> {
    if n < 1 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let table = template_additive_solver(n)?;
    Ok(match format {
        Format::Json => {
            let entries = table
                .entries
                .iter()
                .map(|(idx, t)| Ok(json!({"i": idx.k, "blocks": to_value(&tensor_to_json(t, BasisId::Mu)?.blocks)?})))
                .collect::<Result<Vec<_>>>()?;
            Output::Json(json!({"group": "SO", "n": n, "basis": "mu", "entries": entries}))
        }
        Format::Latex => {
            let lines = table
                .entries
                .iter()
                .map(|(idx, t)| Ok(format!("a(\\mu_{{{}}}) = {}", idx.k, tensor_to_latex(t, BasisId::Mu)?)))
                .collect::<Result<Vec<_>>>()?;
            Output::Text(lines.join("\n"))
        }
    })
}

fn series(family: &str, k_max: usize) -> Result<Output> {
    let f = SpFamily::from_tag(family).ok_or_else(|| Error::Parse(format!("unknown family {family:?}")))?;
    let coeffs: Vec<String> = sp_series_coeffs(f, k_max).iter().map(|c| c.to_string()).collect();
    // coefficients outgrow 64 bits for large k, so the array is written by hand
    Ok(Output::Text(format!("[{}]", coeffs.join(","))))
}

fn mc_verify(body: Body, nodes: usize, seed: u64) -> Result<Output> {
    let (k, l) = match body {
        Body::Square => (ConvexBody2D::unit_square(), ConvexBody2D::unit_square()),
        Body::Disc => {
            let d = ConvexBody2D::disc([0.0, 0.0], 1.0)?;
            (d.clone(), d)
        }
        Body::Random => seeded_polygon_pairs(seed, 1)?.remove(0),
    };
    let r = check_pkf_2d(&k, &l, nodes)?;
    Ok(Output::Json(json!({
        "bodies": [to_value(&k)?, to_value(&l)?],
        "intrinsic_volumes": [intrinsic_volumes_2d(&k)?, intrinsic_volumes_2d(&l)?],
        "nodes": nodes,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "rel_err": r.rel_err,
    })))
}

fn binary(model: &ModelArgs, out: &OutArgs, a: &str, b: &str, product: bool) -> Result<Output> {
    let m = model_of(model)?;
    let basis = basis_of(m, &out.basis)?;
    let load = |s: &str| match s.strip_prefix('@') {
        Some(path) => valuation_arg(&read_file(path)?, m, basis),
        None => valuation_arg(s, m, basis),
    };
    let (x, y) = (load(a)?, load(b)?);
    let z = if product { x.product(&y)? } else { x.convolve(&y)? };
    emit_valuation(&z, basis, out.format)
}

fn dispatch(cmd: &Cmd) -> Result<Output> {
    match cmd {
        Cmd::Dims { model } => dims(model),
        Cmd::Mult { model, out, a, b } => binary(model, out, a, b, true),
        Cmd::Conv { model, out, a, b } => binary(model, out, a, b, false),
        Cmd::Fourier { model, out, val } => {
            let m = model_of(model)?;
            let basis = basis_of(m, &out.basis)?;
            emit_valuation(&single_valuation(val, m, basis, false)?.fourier(), basis, out.format)
        }
        Cmd::Kf { model, out, val } | Cmd::Akf { model, out, val } => {
            let m = model_of(model)?;
            let basis = basis_of(m, &out.basis)?;
            let phi = single_valuation(val, m, basis, true)?;
            let t = if matches!(cmd, Cmd::Kf { .. }) {
                kf(&phi)?
            } else {
                akf(&phi)?
            };
            emit_tensor(&t, basis, out.format)
        }
        Cmd::Pd { model, out, k } => pd(model_of(model)?, out, *k),
        Cmd::Hlt { model, k } => hlt(model_of(model)?, *k),
        Cmd::BasisConvert { model, out, val, to } => {
            let m = model_of(model)?;
            let from = basis_of(m, &out.basis)?;
            let to = basis_of(m, &Some(to.clone()))?;
            emit_valuation(&single_valuation(val, m, from, false)?, to, out.format)
        }
        Cmd::CheckMonotone { model, basis, val } => cone(model_of(model)?, basis, val, true),
        Cmd::CheckPositive { model, basis, val } => cone(model_of(model)?, basis, val, false),
        Cmd::Template { n, format } => template(*n, *format),
        Cmd::SeriesSp { family, k_max } => series(family, *k_max),
        Cmd::McVerify { body, nodes, seed, .. } => mc_verify(*body, *nodes, *seed),
    }
}

/// Runs one invocation; returns `(exit code, stdout, stderr)`.
///
/// Exit 0 on success, 1 for usage and input-format errors, 2 for domain errors.
pub fn run<I, T>(argv: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                (1, String::new(), text)
            } else {
                (0, text, String::new())
            };
        }
    };
    match dispatch(&cli.cmd) {
        Ok(Output::Json(v)) => {
            let mut s = serde_json::to_string_pretty(&v).expect("JSON values serialize");
            s.push('\n');
            (0, s, String::new())
        }
        Ok(Output::Text(s)) => (0, s + "\n", String::new()),
        Err(e) => {
            let code = match e {
                Error::Parse(_) => 1,
                _ => 2,
            };
            (code, String::new(), format!("error: {e}\n"))
        }
    }
}
