//! Integrability checks for the Cartan–Dirac structure by finite differences.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::cartan::{self, ConjugacyClassPoint};
use crate::lie::forms::{self, fd_exterior_derivative};
use crate::lie::group::{CMat, GroupModel};
use crate::linalg::Mat;
use crate::multivector::Multivector;
use crate::scalar::Tolerance;
use crate::spinor::{self, DoubledSpace};

/// `(d + η)β` at `g` for a form field `β`.
pub fn twisted_d<F>(model: &GroupModel, eta: &Multivector<f64>, field: &F, g: &CMat, h: f64) -> Result<Multivector<f64>>
where
    F: Fn(&CMat) -> Multivector<f64>,
{
    let d = fd_exterior_derivative(model, field, g, h)?.coeffs;
    Ok(d.add(&eta.wedge(&field(g))))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegrabilityResidual {
    /// `‖(d+η)φ‖_∞`.
    pub phi: f64,
    /// `‖(d+η)ψ‖_∞`, the non-integrable control.
    pub psi: f64,
    /// Parity of `(d+η)φ` is opposite to that of `φ`.
    pub parity_flips: bool,
    /// Best `λ` in `(d+η)ψ ≈ λ ρ(e(Ξ))ψ` and the relative misfit.
    pub xi_fit: f64,
    pub xi_misfit: f64,
}

fn odd_even(m: &Multivector<f64>, scale: f64) -> (bool, bool) {
    let mut even = false;
    let mut odd = false;
    for (b, c) in m.terms() {
        if c.abs() > 1e-10 * scale.max(1.0) {
            if b.count_ones() % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
    }
    (even, odd)
}

/// `ρ(e(Ξ))` applied to `chi` at `g`, with `Ξ ∈ ∧³𝔤` the structure-constants tensor
/// `Ξ^{abc} = B⁻¹B⁻¹B⁻¹ B(ξ_i, [ξ_j, ξ_k])`.
pub fn rho_e_xi(model: &GroupModel, g: &CMat, chi: &Multivector<f64>) -> Result<Multivector<f64>> {
    let d = model.dim();
    let binv = model.b().clone().try_inverse().ok_or(Error::Degenerate)?;
    let mut t = vec![0.0; d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                t[(i * d + j) * d + k] = model.pair(&unit(d, i), &model.bracket(&unit(d, j), &unit(d, k)));
            }
        }
    }
    let es: Vec<Vec<f64>> = (0..d).map(|a| cartan::cartan_sections(model, g, &unit(d, a)).0).collect();
    let mut out = Multivector::zero(d);
    for a in 0..d {
        for b in (a + 1)..d {
            for c in (b + 1)..d {
                let mut xi = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        for k in 0..d {
                            xi += binv[(a, i)] * binv[(b, j)] * binv[(c, k)] * t[(i * d + j) * d + k];
                        }
                    }
                }
                if xi == 0.0 {
                    continue;
                }
                let v = spinor::rho_contravariant(&es[c], chi);
                let v = spinor::rho_contravariant(&es[b], &v);
                let v = spinor::rho_contravariant(&es[a], &v);
                out = out.add(&v.scale(&xi));
            }
        }
    }
    Ok(out)
}

fn unit(d: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = 1.0;
    v
}

/// `(d+η)φ` and `(d+η)ψ` at `g`.
pub fn check_cartan_dirac_integrability(model: &GroupModel, g: &CMat, h: f64, tol: Tolerance) -> Result<IntegrabilityResidual> {
    let eta = forms::eta_form(model);
    let phi_field = |x: &CMat| cartan::phi_on_group(model, x, tol).map(|s| s.form).unwrap_or_else(|_| Multivector::zero(model.dim()));
    let psi_field = |x: &CMat| cartan::psi_on_group(model, x, tol).map(|s| s.form).unwrap_or_else(|_| Multivector::zero(model.dim()));
    let phi0 = cartan::phi_on_group(model, g, tol)?.form;
    let psi0 = cartan::psi_on_group(model, g, tol)?.form;
    let dphi = twisted_d(model, &eta, &phi_field, g, h)?;
    let dpsi = twisted_d(model, &eta, &psi_field, g, h)?;
    let (pe, po) = odd_even(&phi0, phi0.max_abs());
    let (de, dodd) = odd_even(&dphi, phi0.max_abs() * 1e4);
    let parity_flips = (pe != po) && !(pe && de) && !(po && dodd);
    let target = rho_e_xi(model, g, &psi0)?;
    let tt = target.dot(&target);
    let (xi_fit, xi_misfit) = if tt > 0.0 {
        let lambda = dpsi.dot(&target) / tt;
        (lambda, dpsi.sub(&target.scale(&lambda)).norm() / dpsi.norm().max(f64::MIN_POSITIVE))
    } else {
        (0.0, 1.0)
    };
    Ok(IntegrabilityResidual { phi: dphi.max_abs(), psi: dpsi.max_abs(), parity_flips, xi_fit, xi_misfit })
}

/// A section of `𝕋G` in the left trivialization: `g ↦ (v, α) ∈ 𝔤 ⊕ 𝔤*`.
pub type Section<'a> = dyn Fn(&CMat) -> Vec<f64> + 'a;

fn rho_field<'a>(w: &'a Section<'_>, beta: &'a dyn Fn(&CMat) -> Multivector<f64>) -> impl Fn(&CMat) -> Multivector<f64> + 'a {
    move |x: &CMat| spinor::rho_contravariant(&w(x), &beta(x))
}

/// The Courant bracket `⟦w₁,w₂⟧` at `g` from `ρ(⟦w₁,w₂⟧) = [ρ(w₁),[ρ(w₂), d+η]]`, evaluated on
/// the probing forms `1` and `θ^k`.
pub fn courant_bracket(
    model: &GroupModel,
    eta: &Multivector<f64>,
    w1: &Section<'_>,
    w2: &Section<'_>,
    g: &CMat,
    h: f64,
) -> Result<Vec<f64>> {
    let d = model.dim();
    let apply = |beta: &dyn Fn(&CMat) -> Multivector<f64>| -> Result<Multivector<f64>> {
        let a = |m: &Multivector<f64>| spinor::rho_contravariant(&w1(g), m);
        let b = |m: &Multivector<f64>| spinor::rho_contravariant(&w2(g), m);
        // a b D β + a D b β − b D a β − D b a β
        let t1 = a(&b(&twisted_d(model, eta, &beta, g, h)?));
        let bb = rho_field(w2, beta);
        let t2 = a(&twisted_d(model, eta, &bb, g, h)?);
        let ab = rho_field(w1, beta);
        let t3 = b(&twisted_d(model, eta, &ab, g, h)?);
        let ba = |x: &CMat| spinor::rho_contravariant(&w2(x), &spinor::rho_contravariant(&w1(x), &beta(x)));
        let t4 = twisted_d(model, eta, &ba, g, h)?;
        Ok(t1.add(&t2).sub(&t3).sub(&t4))
    };
    let one = |_: &CMat| Multivector::one(d);
    let o1 = apply(&one)?;
    let mut out = vec![0.0; 2 * d];
    for k in 0..d {
        out[d + k] = o1.coeff(1 << k);
        let theta = move |_: &CMat| Multivector::basis(d, k);
        out[k] = apply(&theta)?.coeff(0);
    }
    Ok(out)
}

/// `max |⟨e(χ), ⟦e(ξ), e(ζ)⟧⟩|` over basis triples.
pub fn courant_closure_residual(model: &GroupModel, g: &CMat, h: f64) -> Result<f64> {
    let d = model.dim();
    let eta = forms::eta_form(model);
    let ds = DoubledSpace::new(d);
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let ei = move |x: &CMat| cartan::cartan_sections(model, x, &unit(d, i)).0;
            let ej = move |x: &CMat| cartan::cartan_sections(model, x, &unit(d, j)).0;
            let br = courant_bracket(model, &eta, &ei, &ej, g, h)?;
            for k in 0..d {
                let ek = cartan::cartan_sections(model, g, &unit(d, k)).0;
                worst = worst.max(ds.pair(&ek, &br).abs());
            }
        }
    }
    Ok(worst)
}

/// `(e^{ad_Y} − 1)/ad_Y` by its power series.
fn right_dexp(model: &GroupModel, y: &[f64]) -> Mat {
    let d = model.dim();
    let ad = model.ad(y);
    let mut term = Mat::identity(d, d);
    let mut out = Mat::identity(d, d);
    for k in 1..30 {
        term = &term * &ad / (k as f64 + 1.0);
        out += &term;
    }
    out
}

/// Residual of `dω_𝒞 = ι_𝒞*η` at `g`, in the chart `y ↦ exp(Y) g exp(−Y)` with
/// `Y = Σ y_a ζ_a` over the frame generators.
pub fn leaf_two_form_derivative_check(model: &GroupModel, g: &CMat, h: f64, tol: Tolerance) -> Result<f64> {
    let p = ConjugacyClassPoint::new(model, g, tol);
    let m = p.dim();
    let d = model.dim();
    if m < 3 {
        return Ok(0.0);
    }
    let zeta: Vec<Vec<f64>> = p.indices.iter().map(|&i| unit(d, i)).collect();
    let omega_chart = |y: &[f64]| -> Mat {
        let mut yv = vec![0.0; d];
        for (a, z) in zeta.iter().enumerate() {
            for i in 0..d {
                yv[i] += y[a] * z[i];
            }
        }
        let k = model.exp(&yv);
        let pt = &k * g * model.inverse(&k);
        let j = right_dexp(model, &yv);
        let nu: Vec<Vec<f64>> = zeta.iter().map(|z| (&j * DVector::from_column_slice(z)).as_slice().to_vec()).collect();
        Mat::from_fn(m, m, |a, b| cartan::ghjw_form(model, &pt, &nu[a], &nu[b]))
    };
    let mut grads = Vec::with_capacity(m);
    for a in 0..m {
        let mut yp = vec![0.0; m];
        let mut ym = vec![0.0; m];
        yp[a] = h;
        ym[a] = -h;
        grads.push((omega_chart(&yp) - omega_chart(&ym)) / (2.0 * h));
    }
    let eta = forms::eta_form(model);
    let frame: Vec<Vec<f64>> = (0..m).map(|a| p.frame.column(a).as_slice().to_vec()).collect();
    let mut worst: f64 = 0.0;
    for a in 0..m {
        for b in (a + 1)..m {
            for c in (b + 1)..m {
                let dw = grads[a][(b, c)] - grads[b][(a, c)] + grads[c][(a, b)];
                let e = forms::evaluate(&eta, &[frame[a].clone(), frame[b].clone(), frame[c].clone()]);
                worst = worst.max((dw - e).abs());
            }
        }
    }
    Ok(worst)
}
