//! `clifford`, `spinor` and `dirac`: JSON in, JSON records out.

use purespin::bilinear;
use purespin::clifford::{self, CliffordElement, CliffordJson};
use purespin::dirac::{self, LinearDirac};
use purespin::linalg::Mat;
use purespin::multivector::{Multivector, TermJson};
use purespin::spinor::{self, DoubledSpace, PureSpinor};
use purespin::{Error, Rational, Scalar};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::report::{self, Check, Report};
use crate::{CliError, CliResult, CliffordOp, DiracOp, RunConfig, SpinorOp};

pub fn clifford_op_name(op: CliffordOp) -> &'static str {
    match op {
        CliffordOp::Product => "product",
        CliffordOp::Transpose => "transpose",
        CliffordOp::Parity => "parity",
        CliffordOp::GroupAction => "group-action",
        CliffordOp::PinNormalize => "pin-normalize",
        CliffordOp::Reflections => "reflections",
    }
}

pub fn spinor_op_name(op: SpinorOp) -> &'static str {
    match op {
        SpinorOp::NullSpace => "null-space",
        SpinorOp::FromOrthogonal => "from-orthogonal",
        SpinorOp::Pairing => "pairing",
    }
}

pub fn dirac_op_name(op: DiracOp) -> &'static str {
    match op {
        DiracOp::Image => "image",
        DiracOp::Preimage => "preimage",
        DiracOp::Strong => "strong",
    }
}

/// A JSON scalar given either as a number or as a decimal/rational string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Num {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Num {
    fn text(&self) -> String {
        match self {
            Num::Int(n) => n.to_string(),
            Num::Float(x) => report::num(*x),
            Num::Text(s) => s.clone(),
        }
    }

    fn float(&self) -> CliResult<f64> {
        f64::parse_scalar(&self.text()).map_err(|e| CliError::Input(e.to_string()))
    }
}

fn field<T: DeserializeOwned>(input: &Value, key: &str) -> CliResult<T> {
    let v = input.get(key).ok_or_else(|| CliError::Input(format!("missing field '{key}'")))?;
    serde_json::from_value(v.clone()).map_err(|e| CliError::Input(format!("field '{key}': {e}")))
}

fn matrix(input: &Value, key: &str) -> CliResult<Mat> {
    let rows: Vec<Vec<Num>> = field(input, key)?;
    let c = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != c) {
        return Err(CliError::Input(format!("field '{key}': ragged rows")));
    }
    let mut m = Mat::zeros(rows.len(), c);
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = x.float()?;
        }
    }
    Ok(m)
}

fn gram_text(input: &Value) -> CliResult<Vec<Vec<String>>> {
    let rows: Vec<Vec<Num>> = field(input, "gram")?;
    Ok(rows.iter().map(|r| r.iter().map(Num::text).collect()).collect())
}

fn terms(input: &Value, key: &str) -> CliResult<Vec<TermJson>> {
    #[derive(Deserialize)]
    struct Term {
        idx: Vec<usize>,
        c: Num,
    }
    let ts: Vec<Term> = field(input, key)?;
    Ok(ts.into_iter().map(|t| TermJson { idx: t.idx, c: t.c.text() }).collect())
}

fn element<S: Scalar>(input: &Value, key: &str) -> CliResult<CliffordElement<S>> {
    let json = CliffordJson { gram: gram_text(input)?, terms: terms(input, key)? };
    Ok(CliffordElement::from_json(&json)?)
}

fn input_error(e: Error) -> CliError {
    match e {
        Error::Parse(_) | Error::DimensionMismatch { .. } => CliError::Input(e.to_string()),
        other => CliError::Compute(other),
    }
}

pub fn clifford(op: CliffordOp, input: &Value, config: &RunConfig, out: &mut Report) -> CliResult<()> {
    let tol = config.tolerance;
    match op {
        CliffordOp::Product => {
            let x = element::<Rational>(input, "x").map_err(unwrap_input)?;
            let y = element::<Rational>(input, "y").map_err(unwrap_input)?;
            let xy = x.product(&y)?;
            let filtered = match (xy.degree(), x.degree(), y.degree()) {
                (Some(d), Some(a), Some(b)) => d <= a + b,
                _ => true,
            };
            out.check(Check::flag("filtration", filtered, 1, String::new()));
            out.record(json!({ "product": xy.to_json(), "is_zero": xy.is_zero() }));
        }
        CliffordOp::Transpose | CliffordOp::Parity => {
            let x = element::<Rational>(input, "x").map_err(unwrap_input)?;
            let y = if op == CliffordOp::Transpose { x.transpose() } else { x.parity() };
            let back = if op == CliffordOp::Transpose { y.transpose() } else { y.parity() };
            out.check(Check::flag("involution", back == x, 1, String::new()));
            out.record(json!({ "result": y.to_json() }));
        }
        CliffordOp::GroupAction => {
            let x = element::<Rational>(input, "x").map_err(unwrap_input)?;
            let dim = x.space().dim();
            let act = clifford::clifford_group_action(&x, tol)?;
            let rows: Option<Vec<Vec<String>>> = act
                .matrix
                .as_ref()
                .map(|m| (0..dim).map(|i| (0..dim).map(|j| m[i * dim + j].to_decimal_string()).collect()).collect());
            out.record(json!({ "is_member": act.is_member, "matrix": rows }));
        }
        CliffordOp::PinNormalize => {
            let x = element::<f64>(input, "x").map_err(unwrap_input)?;
            let p = clifford::pin_normalize(&x, tol)?;
            out.record(json!({ "pin": p.g.to_json(), "norm_sign": p.norm_sign }));
        }
        CliffordOp::Reflections => {
            let gram = matrix(input, "gram")?;
            let a = matrix(input, "matrix")?;
            let ws = clifford::factor_into_reflections(&gram, &a, tol).map_err(input_error)?;
            let n = gram.nrows();
            let composed = ws.iter().fold(Mat::identity(n, n), |acc, w| acc * clifford::reflection_matrix(&gram, w));
            let residual = (composed - &a).amax();
            out.check(Check::below("composition", residual, 1e3 * tol.tau, 1));
            out.record(json!({ "reflections": ws.iter().map(|w| report::vector(w)).collect::<Vec<_>>() }));
        }
    }
    Ok(())
}

fn unwrap_input(e: CliError) -> CliError {
    match e {
        CliError::Compute(inner) => input_error(inner),
        other => other,
    }
}

fn form(input: &Value, key: &str, n: usize) -> CliResult<Multivector<f64>> {
    Multivector::from_json(n, &terms(input, key)?).map_err(input_error)
}

pub fn spinor(op: SpinorOp, input: &Value, config: &RunConfig, out: &mut Report) -> CliResult<()> {
    let tol = config.tolerance;
    let n: usize = field(input, "n")?;
    match op {
        SpinorOp::NullSpace => {
            let phi = form(input, "form", n)?;
            let ns = spinor::null_space(&phi, tol)?;
            out.check(Check::flag("pure", ns.is_pure, 1, String::new()));
            out.record(json!({
                "is_pure": ns.is_pure,
                "gap": report::num(ns.gap),
                "dim": ns.subspace.dim(),
                "null_space": report::mat(&ns.subspace.basis),
            }));
        }
        SpinorOp::FromOrthogonal => {
            let a = matrix(input, "matrix")?;
            let e = DoubledSpace::new(n).lagrangian_from_orthogonal(&a, tol).map_err(input_error)?;
            let p = spinor::spinor_of_lagrangian(&e, 1.0, tol)?;
            let back = spinor::null_space(&p.form, tol)?;
            let distance = back.subspace.distance(e.subspace());
            out.check(Check::below("round-trip", distance, 1e-8, 1));
            let json = p.to_json();
            out.record(json!({
                "n": json.n,
                "form": json.form,
                "null_space": report::mat(p.null_space.basis()),
                "gap": report::num(p.gap),
            }));
        }
        SpinorOp::Pairing => {
            let phi = PureSpinor::new(form(input, "phi", n)?, tol)?;
            let psi = PureSpinor::new(form(input, "psi", n)?, tol)?;
            let pairing = spinor::chevalley_pairing(&phi.form, &psi.form);
            let by_pairing = spinor::transversality_by_pairing(&phi, &psi, 1e-8);
            let by_subspace = bilinear::transverse(&phi.null_space, &psi.null_space, tol);
            out.check(Check::flag("pairing-matches-subspaces", by_pairing == by_subspace, 1, String::new()));
            out.record(json!({ "pairing": report::num(pairing), "transverse": by_subspace }));
        }
    }
    Ok(())
}

fn structure(input: &Value, key: &str, tol: purespin::Tolerance) -> CliResult<LinearDirac> {
    LinearDirac::from_basis(matrix(input, key)?, tol).map_err(|e| CliError::Input(format!("field '{key}': {e}")))
}

pub fn dirac(op: DiracOp, input: &Value, config: &RunConfig, out: &mut Report) -> CliResult<()> {
    let tol = config.tolerance;
    let a = matrix(input, "map")?;
    match op {
        DiracOp::Image | DiracOp::Preimage => {
            let (t, dim_check) = if op == DiracOp::Image {
                let e = structure(input, "source", tol)?;
                (dirac::dirac_image(&a, &e, tol).map_err(input_error)?, a.nrows())
            } else {
                let f = structure(input, "target", tol)?;
                (dirac::dirac_preimage(&a, &f, tol).map_err(input_error)?, a.ncols())
            };
            out.check(Check::flag("lagrangian", t.result.n() == dim_check, 1, String::new()));
            out.record(json!({ "basis": report::mat(t.result.basis()), "nonzero_spinor": t.nonzero_spinor }));
        }
        DiracOp::Strong => {
            let e = structure(input, "source", tol)?;
            let f = structure(input, "target", tol)?;
            let (dirac_map, strong, distance) = match dirac::is_strong_dirac(&a, &e, &f, tol) {
                Ok(s) => (true, s, dirac::dirac_image(&a, &e, tol)?.result.distance(&f)),
                Err(Error::NotDiracMap { distance }) => (false, false, distance),
                Err(e) => return Err(input_error(e)),
            };
            out.record(json!({ "dirac_map": dirac_map, "strong": strong, "distance": report::num(distance) }));
        }
    }
    Ok(())
}
