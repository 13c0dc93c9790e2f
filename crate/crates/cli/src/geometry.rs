//! Sampled verifiers on group models: conjugacy volumes, integrability, q-Hamiltonian spaces.

use purespin::lie::cartan;
use purespin::lie::integrability;
use purespin::lie::{CMat, GroupModel, ModelKind};
use purespin::linalg::seeded_rng;
use purespin::qham::{self, exp, spaces};
use purespin::suite;
use serde_json::json;

use crate::report::{self, Check, Report};
use crate::{par_map, CliError, CliResult, RunConfig, Space};

pub fn space_name(space: Space) -> &'static str {
    match space {
        Space::Class => "class",
        Space::Double => "double",
        Space::FusedDouble => "fused-double",
        Space::Exp => "exp",
    }
}

/// `λ` with `ad_{ξ₃}` having eigenvalues `0, ±iλ`.
fn rotation_rate(model: &GroupModel) -> f64 {
    let a = model.ad(&[0.0, 0.0, 1.0]);
    (-(&a * &a).trace() / 2.0).sqrt()
}

/// `exp(θξ₃)` with `Re tr = t`, for the models where the trace labels the class.
fn class_representative(model: &GroupModel, t: f64) -> CliResult<CMat> {
    let theta = match model.kind {
        ModelKind::Su2 if (-2.0..=2.0).contains(&t) => 2.0 * (t / 2.0).acos() / rotation_rate(model),
        ModelKind::So3 if (-1.0..=3.0).contains(&t) => ((t - 1.0) / 2.0).acos() / rotation_rate(model),
        ModelKind::Su2 | ModelKind::So3 => return Err(CliError::Usage(format!("no class with trace {t}"))),
        other => return Err(CliError::Usage(format!("--class-trace is not a class label for {}", other.name()))),
    };
    let g = model.exp(&[0.0, 0.0, theta]);
    let tr: f64 = g.trace().re;
    if (tr - t).abs() > 1e-9 {
        return Err(CliError::Usage(format!("trace {t} not reached (got {tr})")));
    }
    Ok(g)
}

pub fn conjugacy_volume(t: f64, config: &RunConfig, out: &mut Report) -> CliResult<()> {
    let model = config.model();
    let tol = config.tolerance;
    let g0 = class_representative(&model, t)?;
    let mut rng = seeded_rng(config.seed);
    let points: Vec<CMat> = (0..config.samples)
        .map(|_| {
            let k = model.random_element(&mut rng);
            &k * &g0 * model.inverse(&k)
        })
        .collect();
    let results = par_map(&points, |g| cartan::volume_record(&model, g, tol));
    let mut min_density = f64::INFINITY;
    let mut rank_ok = true;
    for (i, (g, r)) in points.iter().zip(results).enumerate() {
        let r = r?;
        min_density = min_density.min(r.density.abs());
        rank_ok &= r.ghjw_rank == r.class_dim;
        out.record(json!({
            "index": i,
            "point": report::group_element(g),
            "class_dim": r.class_dim,
            "ghjw_rank": r.ghjw_rank,
            "density": report::num(r.density),
        }));
    }
    out.check(Check::above("nondegenerate-density", min_density, 1e-6, points.len()));
    out.check(Check::flag("ghjw-rank-equals-class-dim", rank_ok, points.len(), String::new()));
    Ok(())
}

pub fn integrability(config: &RunConfig, out: &mut Report) -> CliResult<()> {
    let model = config.model();
    let tol = config.tolerance;
    let h = config.fd_step;
    let mut rng = seeded_rng(config.seed);
    let points: Vec<CMat> = (0..config.samples).map(|_| model.random_element(&mut rng)).collect();
    let results = par_map(&points, |g| {
        let r = integrability::check_cartan_dirac_integrability(&model, g, h, tol)?;
        let c = integrability::courant_closure_residual(&model, g, h)?;
        Ok::<_, purespin::Error>((r, c))
    });
    let (mut phi, mut courant) = (0.0f64, 0.0f64);
    let mut control = true;
    let mut parity = true;
    for (i, (g, r)) in points.iter().zip(results).enumerate() {
        let (r, c) = r?;
        phi = phi.max(r.phi);
        courant = courant.max(c);
        control &= r.psi > 10.0 * r.phi.max(1e-5);
        parity &= r.parity_flips;
        out.record(json!({
            "index": i,
            "point": report::group_element(g),
            "phi_residual": report::num(r.phi),
            "psi_residual": report::num(r.psi),
            "parity_flips": r.parity_flips,
            "xi_fit": report::num(r.xi_fit),
            "xi_misfit": report::num(r.xi_misfit),
            "courant_residual": report::num(c),
        }));
    }
    let n = points.len();
    out.check(Check::below("phi-closed", phi, 1e-4, n));
    out.check(Check::flag("psi-control-nonzero", control, n, String::new()));
    out.check(Check::flag("parity-flips", parity, n, String::new()));
    out.check(Check::below("courant-closure", courant, 1e-4, n));
    Ok(())
}

pub fn qham(space: Space, config: &RunConfig, out: &mut Report) -> CliResult<()> {
    match space {
        Space::Exp => return exp_space(config, out),
        Space::Class | Space::Double | Space::FusedDouble => {}
    }
    let model = config.model();
    let tol = config.tolerance;
    let h = config.fd_step;
    let sq = model.square();
    let mut rng = seeded_rng(config.seed);
    let pairs: Vec<(CMat, CMat)> =
        (0..config.samples).map(|_| (model.random_element(&mut rng), model.random_element(&mut rng))).collect();
    let results = par_map(&pairs, |(a, b)| -> purespin::Result<serde_json::Value> {
        let (p, m, closure) = match space {
            Space::Class => (spaces::class_point(&model, a, tol)?, &model, None),
            Space::Double => (spaces::double_point(&model, a, b), &sq, None),
            _ => (
                spaces::fused_double_point(&model, a, b)?,
                &model,
                Some(spaces::fused_double_closure_residual(&model, a, b, h)?),
            ),
        };
        let r = qham::compare_definitions(&p, m, 1e-8, tol)?;
        let density = qham::qham_volume_top(&p, m, tol)?;
        Ok(json!({
            "moment_residual": report::num(r.moment_residual),
            "kernel_condition": r.degeneracy.kernel_condition,
            "transversal_condition": r.degeneracy.transversal_condition,
            "definition_one": r.definition_one,
            "definition_two": r.definition_two,
            "density": report::num(density),
            "closure_residual": closure.map(report::num),
        }))
    });
    let (mut moment, mut closure, mut min_density) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut agree = true;
    for (i, r) in results.into_iter().enumerate() {
        let mut r = r?;
        let get = |k: &str| r[k].as_str().and_then(|s| s.parse::<f64>().ok());
        moment = moment.max(get("moment_residual").unwrap_or(f64::NAN));
        min_density = min_density.min(get("density").unwrap_or(f64::NAN).abs());
        if let Some(c) = get("closure_residual") {
            closure = closure.max(c);
        }
        agree &= [&r["kernel_condition"], &r["transversal_condition"], &r["definition_one"], &r["definition_two"]]
            .iter()
            .all(|v| v.as_bool() == Some(true));
        r["index"] = json!(i);
        out.record(r);
    }
    let n = pairs.len();
    out.check(Check::below("moment-condition", moment, 1e-8, n));
    out.check(Check::flag("definitions-hold-and-agree", agree, n, String::new()));
    out.check(Check::above("nondegenerate-volume", min_density, 1e-6, n));
    if space == Space::FusedDouble {
        out.check(Check::below("closure", closure, 1e-4, n));
    }
    Ok(())
}

fn exp_space(config: &RunConfig, out: &mut Report) -> CliResult<()> {
    let model = config.model();
    let tol = config.tolerance;
    let mut rng = seeded_rng(config.seed);
    let xis: Vec<Vec<f64>> = (0..config.samples).map(|_| model.random_algebra(0.8, &mut rng)).collect();
    let results = par_map(&xis, |xi| exp::exp_dirac_check(&model, xi, config.fd_step, tol));
    let (mut closure, mut distance) = (0.0f64, 0.0f64);
    let mut strong = true;
    let mut skipped = 0;
    for (i, (xi, r)) in xis.iter().zip(results).enumerate() {
        let r = match r {
            Ok(r) => r,
            Err(purespin::Error::OutsideExpDomain) => {
                skipped += 1;
                out.record(json!({ "index": i, "xi": report::vector(xi), "outside_domain": true }));
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        closure = closure.max(r.closure_residual);
        distance = distance.max(r.dirac_distance);
        strong &= r.strong;
        out.record(json!({
            "index": i,
            "xi": report::vector(xi),
            "outside_domain": false,
            "closure_residual": report::num(r.closure_residual),
            "dirac_distance": report::num(r.dirac_distance),
            "strong": r.strong,
        }));
    }
    let n = xis.len() - skipped;
    out.check(Check::below("varpi-closure", closure, 1e-5, n));
    out.check(Check::below("dirac-image", distance, 1e-8, n));
    out.check(Check::flag("strong", strong, n, format!("{skipped} samples outside the domain")));
    Ok(())
}

pub fn verify_all(config: &RunConfig, out: &mut Report) -> CliResult<()> {
    if config.group != ModelKind::Su2 {
        return Err(CliError::Usage(format!("verify-all runs on su2, not {}", config.group.name())));
    }
    for c in suite::run_all(config.seed) {
        out.check(Check {
            name: format!("criterion {} {}", c.id, c.name),
            passed: c.passed,
            residual: report::num(c.worst),
            threshold: report::num(c.threshold),
            samples: c.samples,
            detail: c.detail,
        });
    }
    Ok(())
}
