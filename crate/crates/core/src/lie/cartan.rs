//! Cartan–Dirac structure on a group: sections `e`, `f`, the GHJW form, the pure spinors
//! `ψ` and `φ`, and conjugacy-class volume densities.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::clifford::factor_into_reflections;
use crate::dirac::{self, LinearDirac, SpinorRoute};
use crate::error::{Error, Result};
use crate::lie::group::{CMat, GroupModel, ModelKind};
use crate::linalg::Mat;
use crate::multivector::Multivector;
use crate::scalar::Tolerance;
use crate::spinor;

fn col(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

fn unit(d: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = 1.0;
    v
}

/// The orthogonal section `A` with `A(ξ^L) = ξ^R`; in the left trivialization `A_g = Ad_{g⁻¹}`.
pub fn section_a(model: &GroupModel, g: &CMat) -> Mat {
    model.ad_group(&model.inverse(g))
}

/// Generating vector field of conjugation, `ξ^♯(g) = d/dt exp(tξ) g exp(−tξ) = (Ad_{g⁻¹} − 1)ξ`
/// in the left trivialization.
pub fn sharp(model: &GroupModel, g: &CMat, xi: &[f64]) -> Vec<f64> {
    (sharp_matrix(model, g) * col(xi)).as_slice().to_vec()
}

/// `d × d` matrix whose columns are `ξ_i^♯(g)`.
pub fn sharp_matrix(model: &GroupModel, g: &CMat) -> Mat {
    let d = model.dim();
    section_a(model, g) - Mat::identity(d, d)
}

/// `ω(ξ₁^♯, ξ₂^♯)|_g = B(½(Ad_g − Ad_{g⁻¹})ξ₁, ξ₂)`.
pub fn ghjw_form(model: &GroupModel, g: &CMat, xi1: &[f64], xi2: &[f64]) -> f64 {
    let a = model.ad_group(g);
    let ai = model.ad_group(&model.inverse(g));
    let v = (a - ai) * col(xi1) * 0.5;
    model.pair(v.as_slice(), xi2)
}

/// `(e(ξ), f(ξ))` at `g`, each in `𝔤 ⊕ 𝔤*` (left trivialization):
/// `e(ξ) = ξ^♯ ⊕ B((θ^L+θ^R)/2, ξ)`, `f(ξ) = ½(1+Ad⁻¹)ξ ⊕ B((θ^R−θ^L)/4, ξ)`, so that
/// `A^κ(ξ₁ ⊕ Bξ₂) = f(ξ₁) + e(ξ₂)`.
pub fn cartan_sections(model: &GroupModel, g: &CMat, xi: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let d = model.dim();
    let id = Mat::identity(d, d);
    let a = model.ad_group(g);
    let ai = model.ad_group(&model.inverse(g));
    let b = model.b();
    let x = col(xi);
    let ev = (&ai - &id) * &x;
    let ea = (b + a.transpose() * b) * &x * 0.5;
    let fv = (&id + &ai) * &x * 0.5;
    let fa = b * (&ai - &id) * &x * 0.25;
    (
        ev.iter().chain(ea.iter()).copied().collect(),
        fv.iter().chain(fa.iter()).copied().collect(),
    )
}

fn section_matrix(model: &GroupModel, g: &CMat, pick_e: bool) -> Mat {
    let d = model.dim();
    let mut m = Mat::zeros(2 * d, d);
    for i in 0..d {
        let (e, f) = cartan_sections(model, g, &unit(d, i));
        m.set_column(i, &col(if pick_e { &e } else { &f }));
    }
    m
}

/// The Cartan–Dirac fiber `E_g = span{e(ξ)}`.
pub fn cartan_dirac_fiber(model: &GroupModel, g: &CMat, tol: Tolerance) -> Result<LinearDirac> {
    LinearDirac::from_basis(section_matrix(model, g, true), tol)
}

/// The complement `F_g = span{f(ξ)}`.
pub fn cartan_complement(model: &GroupModel, g: &CMat, tol: Tolerance) -> Result<LinearDirac> {
    LinearDirac::from_basis(section_matrix(model, g, false), tol)
}

/// `ψ` or `φ` at a point, with how it was obtained.
#[derive(Debug, Clone)]
pub struct GroupSpinor {
    pub form: Multivector<f64>,
    pub route: SpinorRoute,
    /// Set for models without a Pin lift: the overall sign is not meaningful.
    pub sign_agnostic: bool,
}

fn probe_direction(d: usize) -> Vec<f64> {
    (0..d).map(|i| (1.3 * i as f64 + 0.7).sin()).collect()
}

fn singular(model: &GroupModel, g: &CMat, tol: Tolerance) -> bool {
    let d = model.dim();
    (section_a(model, g) + Mat::identity(d, d)).determinant().abs() < dirac::SINGULAR_FACTOR * tol.tau
}

fn closed_form_psi(model: &GroupModel, g: &CMat) -> Result<(Multivector<f64>, bool)> {
    let base = dirac::spinor_closed_form(&section_a(model, g), model.b())?;
    match model.half_det_sign_function(g) {
        Some(h) if h < 0.0 => Ok((base.neg(), false)),
        Some(_) => Ok((base, false)),
        None => Ok((base, true)),
    }
}

/// A regular point `g·exp(εζ)` near `g` for sign matching. The probe direction comes
/// first, then the coordinate directions, in case `ζ` is nearly tangent to the singular set.
fn regular_neighbor(model: &GroupModel, g: &CMat, tol: Tolerance) -> Result<CMat> {
    let d = model.dim();
    let mut dirs = vec![probe_direction(d)];
    dirs.extend((0..d).map(|i| unit(d, i)));
    let mut eps = 1e-2;
    while eps < 0.5 {
        for zeta in &dirs {
            let xi: Vec<f64> = zeta.iter().map(|z| z * eps).collect();
            let gp = g * model.exp(&xi);
            if !singular(model, &gp, tol) && model.half_det_sign_function(&gp).is_none_or(|h| h.abs() > 1e-6) {
                return Ok(gp);
            }
        }
        eps *= 2.0;
    }
    Err(Error::ReflectionFailure)
}

/// Reflection path applied to `1` and to `start`, sign-corrected against the correct ψ.
fn reflection_pair(
    model: &GroupModel,
    g: &CMat,
    start: &Multivector<f64>,
    psi_ref: &Multivector<f64>,
    tol: Tolerance,
) -> Result<(Multivector<f64>, Multivector<f64>)> {
    let ws = factor_into_reflections(model.b(), &section_a(model, g), tol)?;
    let psi = dirac::apply_reflections(&ws, model.b(), &Multivector::one(model.dim()));
    let out = dirac::apply_reflections(&ws, model.b(), start);
    if psi.dot(psi_ref) < 0.0 {
        Ok((psi.neg(), out.neg()))
    } else {
        Ok((psi, out))
    }
}

/// The pure spinor `ψ_g = ρ(Ã_g^κ)·1` with null space `F_g` and `ψ_e = 1`; away from
/// `det(Ad_g + 1) = 0` it is `det^{1/2}((Ad_g+1)/2) exp(¼B((Ad_g−1)/(Ad_g+1)θ^L, θ^L))`.
pub fn psi_on_group(model: &GroupModel, g: &CMat, tol: Tolerance) -> Result<GroupSpinor> {
    if !singular(model, g, tol) {
        let (form, sign_agnostic) = closed_form_psi(model, g)?;
        return Ok(GroupSpinor { form, route: SpinorRoute::ClosedForm, sign_agnostic });
    }
    let gp = regular_neighbor(model, g, tol)?;
    let (near, sign_agnostic) = closed_form_psi(model, &gp)?;
    let (form, _) = reflection_pair(model, g, &Multivector::one(model.dim()), &near, tol)?;
    Ok(GroupSpinor { form, route: SpinorRoute::Reflections, sign_agnostic })
}

/// `φ_g = ρ(Ã_g^κ) μ` with `μ = θ¹∧⋯∧θ^d`; its null space is `E_g`.
pub fn phi_on_group(model: &GroupModel, g: &CMat, tol: Tolerance) -> Result<GroupSpinor> {
    let psi = psi_on_group(model, g, tol)?;
    let (_, form) = reflection_pair(model, g, &Multivector::volume(model.dim()), &psi.form, tol)?;
    Ok(GroupSpinor { form, route: SpinorRoute::Reflections, sign_agnostic: psi.sign_agnostic })
}

/// A point of a conjugacy class with a tangent frame chosen among the `ξ_i^♯`.
#[derive(Debug, Clone)]
pub struct ConjugacyClassPoint {
    pub g: CMat,
    /// Indices `i` of the chosen `ξ_i`.
    pub indices: Vec<usize>,
    /// `d × m`: columns are `ξ_i^♯(g)` for the chosen `i`.
    pub frame: Mat,
}

impl ConjugacyClassPoint {
    /// Greedy pivoting on the residual norm of `ξ_i^♯(g)`.
    pub fn new(model: &GroupModel, g: &CMat, tol: Tolerance) -> Self {
        let s = sharp_matrix(model, g);
        let d = model.dim();
        let scale = s.amax().max(1.0);
        let mut residuals: Vec<DVector<f64>> = (0..d).map(|i| s.column(i).into_owned()).collect();
        let mut indices = Vec::new();
        loop {
            let (best, norm) = (0..d)
                .filter(|i| !indices.contains(i))
                .map(|i| (i, residuals[i].norm()))
                .fold((usize::MAX, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best == usize::MAX || norm <= 1e3 * tol.tau * scale {
                break;
            }
            indices.push(best);
            let q = residuals[best].clone() / norm;
            for r in residuals.iter_mut() {
                let c = q.dot(r);
                *r -= &q * c;
            }
        }
        let mut frame = Mat::zeros(d, indices.len());
        for (c, &i) in indices.iter().enumerate() {
            frame.set_column(c, &s.column(i));
        }
        ConjugacyClassPoint { g: g.clone(), indices, frame }
    }

    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// The GHJW form in the frame.
    pub fn two_form(&self, model: &GroupModel) -> Mat {
        let d = model.dim();
        let m = self.dim();
        Mat::from_fn(m, m, |a, b| {
            ghjw_form(model, &self.g, &unit(d, self.indices[a]), &unit(d, self.indices[b]))
        })
    }
}

/// Density of `(e^ω ι*ψ)_[top]` on the frame; for models without a lift the absolute value.
pub fn conjugacy_volume_top(model: &GroupModel, p: &ConjugacyClassPoint, tol: Tolerance) -> Result<f64> {
    let psi = psi_on_group(model, &p.g, tol)?;
    let pulled = spinor::pullback(&p.frame, &psi.form);
    let omega = spinor::two_form_of_matrix(&p.two_form(model));
    let top = omega.exp_wedge().wedge(&pulled).coeff(Multivector::<f64>::volume(p.dim()).top_blade());
    Ok(if psi.sign_agnostic { top.abs() } else { top })
}

/// `(e, μ)` in `𝔨* ⋊ K` for `μ ∈ 𝔨*` in dual coordinates.
pub fn coadjoint_point(model: &GroupModel, mu: &[f64]) -> Result<CMat> {
    if model.kind != ModelKind::CoadjointSu2 {
        return Err(Error::Parse(format!("{} is not a semidirect coadjoint model", model.name())));
    }
    let xi: Vec<f64> = [0.0, 0.0, 0.0].iter().chain(mu.iter()).copied().collect();
    Ok(model.exp(&xi))
}

/// `ω_KKS(ξ₁^♯, ξ₂^♯)|_μ = ⟨μ, [ξ₁, ξ₂]⟩` for `ξ_i ∈ 𝔨 = su(2)`.
pub fn kks_form(mu: &[f64], xi1: &[f64], xi2: &[f64]) -> f64 {
    let k = GroupModel::su2();
    let br = k.bracket(xi1, xi2);
    mu.iter().zip(br.iter()).map(|(a, b)| a * b).sum()
}

/// Summary of a volume evaluation, for reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VolumeRecord {
    pub class_dim: usize,
    pub ghjw_rank: usize,
    pub density: f64,
}

pub fn volume_record(model: &GroupModel, g: &CMat, tol: Tolerance) -> Result<VolumeRecord> {
    let p = ConjugacyClassPoint::new(model, g, tol);
    let w = p.two_form(model);
    let ghjw_rank = if p.dim() == 0 { 0 } else { crate::linalg::rank(&w, 1e-9) };
    Ok(VolumeRecord { class_dim: p.dim(), ghjw_rank, density: conjugacy_volume_top(model, &p, tol)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::{is_lagrangian, transverse};
    use crate::lie::forms::{self, FD_STEP};
    use crate::linalg::{self, seeded_rng};
    use crate::spinor::null_space;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn c(re: f64, im: f64) -> crate::lie::group::C64 {
        crate::lie::group::C64::new(re, im)
    }

    fn diag_i() -> CMat {
        CMat::from_row_slice(2, 2, &[c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)])
    }

    #[test]
    fn ghjw_trivial_cases() {
        let m = GroupModel::su2();
        let mut rng = seeded_rng(1);
        for _ in 0..5 {
            let x = m.random_algebra(1.0, &mut rng);
            let y = m.random_algebra(1.0, &mut rng);
            assert_eq!(ghjw_form(&m, &m.identity(), &x, &y), 0.0);
            assert!(ghjw_form(&m, &diag_i(), &x, &y).abs() < 1e-14);
            let g = m.random_element(&mut rng);
            assert!((ghjw_form(&m, &g, &x, &y) + ghjw_form(&m, &g, &y, &x)).abs() < 1e-14);
        }
    }

    #[test]
    fn ghjw_depends_only_on_sharp() {
        let m = GroupModel::new(ModelKind::Su3);
        let mut rng = seeded_rng(5);
        // g in the maximal torus; centralizer directions are the diagonal generators
        let g = m.exp(&[0.0, 0.0, 0.7, 0.0, 0.0, 0.0, 0.0, 0.3]);
        let x = m.random_algebra(1.0, &mut rng);
        let y = m.random_algebra(1.0, &mut rng);
        let mut xk = x.clone();
        xk[2] += 1.1;
        xk[7] -= 0.4;
        assert!(linalg::null_space(&sharp_matrix(&m, &g), 1e-10).basis.ncols() == 2);
        let a = ghjw_form(&m, &g, &x, &y);
        assert!((a - ghjw_form(&m, &g, &xk, &y)).abs() < 1e-12);
    }

    #[test]
    fn sections_at_identity_and_generic_points() {
        let m = GroupModel::su2();
        let e = cartan_dirac_fiber(&m, &m.identity(), tol()).unwrap();
        let f = cartan_complement(&m, &m.identity(), tol()).unwrap();
        let ds = spinor::DoubledSpace::new(3);
        assert!(e.e.distance(&ds.dual_lagrangian()) < 1e-12);
        assert!(f.e.distance(&ds.v_lagrangian()) < 1e-12);
        let mut rng = seeded_rng(9);
        for _ in 0..10 {
            let g = m.random_element(&mut rng);
            let e = cartan_dirac_fiber(&m, &g, tol()).unwrap();
            let f = cartan_complement(&m, &g, tol()).unwrap();
            assert!(is_lagrangian(e.e.subspace(), tol()) && is_lagrangian(f.e.subspace(), tol()));
            assert!(transverse(&e.e, &f.e, tol()));
            let k = dirac::kappa_embed(&section_a(&m, &g), m.b(), tol()).unwrap();
            let kv = LinearDirac::from_basis(k.columns(3, 3).into_owned(), tol()).unwrap();
            let kw = LinearDirac::from_basis(k.columns(0, 3).into_owned(), tol()).unwrap();
            assert!(e.distance(&kv) < 1e-10);
            assert!(f.distance(&kw) < 1e-10);
        }
    }

    #[test]
    fn fiber_two_form_is_ghjw() {
        let m = GroupModel::new(ModelKind::Su3);
        let mut rng = seeded_rng(12);
        let g = m.random_element(&mut rng);
        let e = cartan_dirac_fiber(&m, &g, tol()).unwrap();
        let gt = spinor::graph_two_form_of(&e.e, tol());
        // gt.omega is expressed on gt.range; evaluate on ξ^♯ via the extension
        let ext = gt.extended();
        for _ in 0..5 {
            let x = m.random_algebra(1.0, &mut rng);
            let y = m.random_algebra(1.0, &mut rng);
            let u = col(&sharp(&m, &g, &x));
            let v = col(&sharp(&m, &g, &y));
            let val = (u.transpose() * &ext * v)[(0, 0)];
            assert!((val - ghjw_form(&m, &g, &x, &y)).abs() < 1e-10, "{val}");
        }
    }

    #[test]
    fn psi_identity_and_null_space() {
        let m = GroupModel::su2();
        let psi = psi_on_group(&m, &m.identity(), tol()).unwrap();
        assert!(psi.form.sub(&Multivector::one(3)).max_abs() < 1e-14);
        let mut rng = seeded_rng(3);
        for _ in 0..10 {
            let g = m.random_element(&mut rng);
            let psi = psi_on_group(&m, &g, tol()).unwrap();
            let f = cartan_complement(&m, &g, tol()).unwrap();
            let ns = null_space(&psi.form, tol()).unwrap();
            assert!(ns.subspace.distance(f.e.subspace()) < 1e-9);
            let phi = phi_on_group(&m, &g, tol()).unwrap();
            let e = cartan_dirac_fiber(&m, &g, tol()).unwrap();
            assert!(null_space(&phi.form, tol()).unwrap().subspace.distance(e.e.subspace()) < 1e-9);
        }
    }

    #[test]
    fn psi_singular_point_fallback() {
        let m = GroupModel::su2();
        let g = diag_i();
        let psi = psi_on_group(&m, &g, tol()).unwrap();
        assert_eq!(psi.route, SpinorRoute::Reflections);
        assert!(psi.form.max_abs() > 0.1);
        assert!(psi.form.coeff(0).abs() < 1e-12);
        // continuity: nearby closed-form values approach it
        let gp = &g * m.exp(&[1e-3, -2e-3, 1.5e-3]);
        let near = psi_on_group(&m, &gp, tol()).unwrap();
        assert_eq!(near.route, SpinorRoute::ClosedForm);
        assert!(near.form.sub(&psi.form).max_abs() < 1e-2);
    }

    #[test]
    fn psi_is_continuous_across_the_sign_change() {
        let m = GroupModel::su2();
        // path exp(tξ₃) passes tr = 0 at t = π
        let mut prev = psi_on_group(&m, &m.identity(), tol()).unwrap().form;
        let steps = 400;
        for s in 1..=steps {
            let t = 4.0 * std::f64::consts::PI * s as f64 / steps as f64;
            let cur = psi_on_group(&m, &m.exp(&[0.0, 0.0, t]), tol()).unwrap().form;
            assert!(cur.sub(&prev).max_abs() < 0.1, "jump at t = {t}");
            prev = cur;
        }
        // exp(4πξ₃) = e
        assert!(prev.sub(&Multivector::one(3)).max_abs() < 1e-9);
    }

    #[test]
    fn psi_is_ad_invariant() {
        let m = GroupModel::su2();
        let mut rng = seeded_rng(21);
        for _ in 0..5 {
            let g = m.random_element(&mut rng);
            let h = m.random_element(&mut rng);
            let conj = &h * &g * m.inverse(&h);
            let lhs = spinor::pullback(&m.ad_group(&h), &psi_on_group(&m, &conj, tol()).unwrap().form);
            let rhs = psi_on_group(&m, &g, tol()).unwrap().form;
            assert!(lhs.sub(&rhs).max_abs() < 1e-8);
        }
    }

    #[test]
    fn so3_is_sign_agnostic() {
        let m = GroupModel::new(ModelKind::So3);
        let mut rng = seeded_rng(2);
        let g = m.random_element(&mut rng);
        let psi = psi_on_group(&m, &g, tol()).unwrap();
        assert!(psi.sign_agnostic);
        let p = ConjugacyClassPoint::new(&m, &g, tol());
        assert!(conjugacy_volume_top(&m, &p, tol()).unwrap() > 0.0);
    }

    #[test]
    fn class_frames_and_densities() {
        let m = GroupModel::su2();
        let p = ConjugacyClassPoint::new(&m, &m.identity(), tol());
        assert_eq!(p.dim(), 0);
        assert!((conjugacy_volume_top(&m, &p, tol()).unwrap() - 1.0).abs() < 1e-14);
        let minus = m.identity() * c(-1.0, 0.0);
        let p = ConjugacyClassPoint::new(&m, &minus, tol());
        assert_eq!(p.dim(), 0);
        assert!((conjugacy_volume_top(&m, &p, tol()).unwrap().abs() - 1.0).abs() < 1e-12);
        let mut rng = seeded_rng(8);
        for _ in 0..20 {
            let g = m.random_element(&mut rng);
            let p = ConjugacyClassPoint::new(&m, &g, tol());
            assert_eq!(p.dim(), 2);
            assert!(conjugacy_volume_top(&m, &p, tol()).unwrap().abs() > 1e-6);
        }
        let p = ConjugacyClassPoint::new(&m, &diag_i(), tol());
        assert!(p.two_form(&m).amax() < 1e-14);
        assert!(conjugacy_volume_top(&m, &p, tol()).unwrap().abs() > 1e-6);
    }

    #[test]
    fn ghjw_equals_kks_on_coadjoint_orbits() {
        let m = GroupModel::new(ModelKind::CoadjointSu2);
        let mut rng = seeded_rng(4);
        for _ in 0..10 {
            let mu = GroupModel::su2().random_algebra(1.0, &mut rng);
            let g = coadjoint_point(&m, &mu).unwrap();
            let x = GroupModel::su2().random_algebra(1.0, &mut rng);
            let y = GroupModel::su2().random_algebra(1.0, &mut rng);
            let pad = |v: &[f64]| v.iter().copied().chain([0.0; 3]).collect::<Vec<_>>();
            let lhs = ghjw_form(&m, &g, &pad(&x), &pad(&y));
            assert!((lhs - kks_form(&mu, &x, &y)).abs() < 1e-10, "{lhs} vs {}", kks_form(&mu, &x, &y));
        }
    }

    #[test]
    fn contraction_identity_pins_eta() {
        let m = GroupModel::su2();
        let eta = forms::eta_form(&m);
        let mut rng = seeded_rng(17);
        for _ in 0..5 {
            let g = m.random_element(&mut rng);
            let xi = m.random_algebra(1.0, &mut rng);
            let field = |h: &CMat| {
                let (e, _) = cartan_sections(&m, h, &xi);
                Multivector::vector(&e[3..])
            };
            let d = forms::fd_exterior_derivative(&m, &field, &g, FD_STEP).unwrap().coeffs;
            let lhs = eta.contract_vector(&sharp(&m, &g, &xi));
            assert!(lhs.add(&d).max_abs() < 1e-7, "{}", lhs.add(&d).max_abs());
        }
    }
}
