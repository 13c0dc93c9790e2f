//! The exponential map as a strong Dirac map from the Kirillov–Poisson structure, gauged by `ϖ`.

use serde::{Deserialize, Serialize};

use crate::dirac::{self, LinearDirac};
use crate::error::{Error, Result};
use crate::lie::cartan;
use crate::lie::forms;
use crate::lie::group::GroupModel;
use crate::linalg::Mat;
use crate::scalar::Tolerance;

/// Gauss–Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out
}

pub const QUADRATURE_POINTS: usize = 32;

fn col(m: &Mat, j: usize) -> Vec<f64> {
    m.column(j).iter().copied().collect()
}

/// `(exp*η)_ξ` at `ξ` on the coordinate basis of `𝔤`, as a dense `d×d×d` array.
fn exp_pullback_eta(model: &GroupModel, xi: &[f64]) -> Vec<f64> {
    let d = model.dim();
    let eta = forms::eta_form(model);
    let j = model.dexp(xi);
    let cols: Vec<Vec<f64>> = (0..d).map(|i| col(&j, i)).collect();
    let mut out = vec![0.0; d * d * d];
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                out[(a * d + b) * d + c] = forms::evaluate(&eta, &[cols[a].clone(), cols[b].clone(), cols[c].clone()]);
            }
        }
    }
    out
}

/// `ϖ_ξ(v, w) = ∫₀¹ t² (exp*η)_{tξ}(ξ, v, w) dt`, as a `d × d` matrix.
pub fn varpi(model: &GroupModel, xi: &[f64]) -> Mat {
    let d = model.dim();
    let eta = forms::eta_form(model);
    let mut out = Mat::zeros(d, d);
    for (t, w) in gauss_legendre_unit(QUADRATURE_POINTS) {
        let txi: Vec<f64> = xi.iter().map(|x| t * x).collect();
        let j = model.dexp(&txi);
        let jxi: Vec<f64> = (&j * nalgebra::DVector::from_column_slice(xi)).iter().copied().collect();
        for a in 0..d {
            for b in (a + 1)..d {
                let v = forms::evaluate(&eta, &[jxi.clone(), col(&j, a), col(&j, b)]);
                out[(a, b)] += w * t * t * v;
                out[(b, a)] -= w * t * t * v;
            }
        }
    }
    out
}

/// `max |dϖ − exp*η|` at `ξ`, with `dϖ` by central differences in linear coordinates.
pub fn varpi_closure_residual(model: &GroupModel, xi: &[f64], h: f64) -> Result<f64> {
    if !(h > 1e2 * f64::EPSILON) {
        return Err(Error::StepUnderflow(h));
    }
    let d = model.dim();
    let partial: Vec<Mat> = (0..d)
        .map(|i| {
            let mut p = xi.to_vec();
            let mut m = xi.to_vec();
            p[i] += h;
            m[i] -= h;
            (varpi(model, &p) - varpi(model, &m)) / (2.0 * h)
        })
        .collect();
    let target = exp_pullback_eta(model, xi);
    let mut worst = 0.0f64;
    for a in 0..d {
        for b in (a + 1)..d {
            for c in (b + 1)..d {
                let dw = partial[a][(b, c)] - partial[b][(a, c)] + partial[c][(a, b)];
                worst = worst.max((dw - target[(a * d + b) * d + c]).abs());
            }
        }
    }
    Ok(worst)
}

/// The linear Poisson structure of `𝔤* ≅ 𝔤` at `ξ`: `π(α, β) = −B(ξ, [B⁻¹α, B⁻¹β])`,
/// the sign matching `ξ^♯ = (Ad_{g⁻¹} − 1)ξ` on the group side.
pub fn kirillov_poisson(model: &GroupModel, xi: &[f64]) -> Result<Mat> {
    let d = model.dim();
    let binv = model.b().clone().try_inverse().ok_or(Error::NotInvertible)?;
    let raised: Vec<Vec<f64>> = (0..d).map(|i| col(&binv, i)).collect();
    Ok(Mat::from_fn(d, d, |i, j| -model.pair(xi, &model.bracket(&raised[i], &raised[j]))))
}

/// `|det d exp_ξ|`.
pub fn dexp_determinant(model: &GroupModel, xi: &[f64]) -> f64 {
    model.dexp(xi).determinant().abs()
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExpReport {
    pub closure_residual: f64,
    pub dirac_distance: f64,
    pub strong: bool,
}

/// The gauged Kirillov–Poisson structure `(Gr_π)^ϖ` at `ξ`.
pub fn gauged_poisson(model: &GroupModel, xi: &[f64]) -> Result<LinearDirac> {
    let pi = kirillov_poisson(model, xi)?;
    Ok(dirac::gauge_transform(&LinearDirac::graph_of_bivector(&pi), &varpi(model, xi)))
}

pub fn exp_dirac_check(model: &GroupModel, xi: &[f64], h: f64, tol: Tolerance) -> Result<ExpReport> {
    if dexp_determinant(model, xi) <= cartan_threshold(tol) {
        return Err(Error::OutsideExpDomain);
    }
    let closure_residual = varpi_closure_residual(model, xi, h)?;
    let source = gauged_poisson(model, xi)?;
    let target = cartan::cartan_dirac_fiber(model, &model.exp(xi), tol)?;
    let a = model.dexp(xi);
    let dirac_distance = dirac::dirac_image(&a, &source, tol)?.result.distance(&target);
    let strong = match dirac::is_strong_dirac(&a, &source, &target, tol) {
        Ok(s) => s,
        Err(Error::NotDiracMap { .. }) => false,
        Err(e) => return Err(e),
    };
    Ok(ExpReport { closure_residual, dirac_distance, strong })
}

fn cartan_threshold(tol: Tolerance) -> f64 {
    dirac::SINGULAR_FACTOR * tol.tau
}
