//! Linear Dirac structures on `V`, Dirac maps, gauge transformations, and the spinor of
//! an orthogonal transformation of `(V, B)`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::bilinear::{doubled_gram, LagrangianSubspace, Subspace};
use crate::clifford::factor_into_reflections;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::multivector::Multivector;
use crate::scalar::Tolerance;
use crate::spinor::{self, PureSpinor};

/// A Lagrangian subspace `E ⊂ V ⊕ V*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearDirac {
    pub e: LagrangianSubspace,
}

impl LinearDirac {
    pub fn new(e: LagrangianSubspace) -> Self {
        LinearDirac { e }
    }

    pub fn from_basis(basis: Mat, tol: Tolerance) -> Result<Self> {
        let n = basis.nrows() / 2;
        let s = Subspace::new(doubled_gram(n), basis, tol)?;
        Ok(LinearDirac { e: LagrangianSubspace::new(s, tol)? })
    }

    pub fn n(&self) -> usize {
        self.e.half_dim()
    }

    pub fn basis(&self) -> &Mat {
        self.e.basis()
    }

    /// `Gr_ω = {(v, ι_v ω)}` for an antisymmetric matrix `ω`.
    pub fn graph_of_two_form(omega: &Mat) -> Self {
        let n = omega.nrows();
        let basis = linalg::vstack(&Mat::identity(n, n), &omega.transpose());
        LinearDirac { e: LagrangianSubspace::new_unchecked(Subspace { gram: doubled_gram(n), basis }) }
    }

    /// `Gr_π = {(π(α,·), α)}` for an antisymmetric matrix `π`.
    pub fn graph_of_bivector(pi: &Mat) -> Self {
        let n = pi.nrows();
        let basis = linalg::vstack(&pi.transpose(), &Mat::identity(n, n));
        LinearDirac { e: LagrangianSubspace::new_unchecked(Subspace { gram: doubled_gram(n), basis }) }
    }

    pub fn distance(&self, other: &LinearDirac) -> f64 {
        self.e.distance(&other.e)
    }
}

/// `ι(π)φ` with `ι(u∧v) = ι(u)ι(v)`.
pub fn iota_bivector(pi: &Mat, phi: &Multivector<f64>) -> Multivector<f64> {
    let n = pi.nrows();
    let mut out = Multivector::zero(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let c = pi[(i, j)];
            if c != 0.0 {
                out = out.add(&phi.contract(j).contract(i).scale(&c));
            }
        }
    }
    out
}

/// `e^{−ι(π)}μ` with `μ = scale·e¹∧…∧eⁿ`; its null space is `Gr_π`.
pub fn graph_of_bivector(pi: &Mat, scale: f64, tol: Tolerance) -> Result<PureSpinor> {
    let n = pi.nrows();
    let mu = Multivector::volume(n).scale(&scale);
    let mut term = mu.clone();
    let mut out = mu;
    let mut k = 1.0;
    loop {
        term = iota_bivector(pi, &term).scale(&(-1.0 / k));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
        k += 1.0;
    }
    PureSpinor::new(out, tol)
}

/// Image of `E` under `v⊕α ↦ v⊕(α + ι_vτ)`.
pub fn gauge_transform(e: &LinearDirac, tau: &Mat) -> LinearDirac {
    let n = e.n();
    let b = e.basis();
    let x = b.rows(0, n).into_owned();
    let y = b.rows(n, n).into_owned() + tau.transpose() * &x;
    LinearDirac { e: LagrangianSubspace::new_unchecked(Subspace { gram: doubled_gram(n), basis: linalg::vstack(&x, &y) }) }
}

/// Spinor counterpart of [`gauge_transform`]: `e^{−τ} ∧ φ`.
pub fn gauge_spinor(phi: &Multivector<f64>, tau: &Mat) -> Multivector<f64> {
    spinor::two_form_of_matrix(tau).neg().exp_wedge().wedge(phi)
}

/// Result of transporting a Dirac structure along a linear map.
#[derive(Debug, Clone)]
pub struct DiracTransport {
    pub result: LinearDirac,
    /// False when the spinor line is sent to zero (the map is not strong).
    pub nonzero_spinor: bool,
}

fn dirac_from_spanning(n: usize, spanning: &Mat, tol: Tolerance) -> Result<LinearDirac> {
    let s = Subspace::span(doubled_gram(n), spanning, tol);
    Ok(LinearDirac { e: LagrangianSubspace::new(s, tol)? })
}

/// `E′ = {(Av, α′) : (v, A*α′) ∈ E}` for `A: V → V′` (an `n′ × n` matrix).
pub fn dirac_image(a: &Mat, e: &LinearDirac, tol: Tolerance) -> Result<DiracTransport> {
    let n = e.n();
    let np = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.ncols() });
    }
    if np == 0 {
        let result = LinearDirac { e: LagrangianSubspace::new_unchecked(Subspace { gram: Mat::zeros(0, 0), basis: Mat::zeros(0, 0) }) };
        return Ok(DiracTransport { result, nonzero_spinor: kernel_meets(a, e, tol) == 0 });
    }
    let b = e.basis();
    let x = b.rows(0, n).into_owned();
    let y = b.rows(n, n).into_owned();
    let sys = linalg::hstack(&y, &(-a.transpose()));
    let ker = linalg::null_space(&sys, tol.tau).basis;
    let c = ker.rows(0, n).into_owned();
    let alpha = ker.rows(n, np).into_owned();
    let spanning = linalg::vstack(&(a * &x * &c), &alpha);
    let result = dirac_from_spanning(np, &spanning, tol)?;
    Ok(DiracTransport { result, nonzero_spinor: kernel_meets(a, e, tol) == 0 })
}

/// `F = {(v, A*α′) : (Av, α′) ∈ F′}`.
pub fn dirac_preimage(a: &Mat, f: &LinearDirac, tol: Tolerance) -> Result<DiracTransport> {
    let np = f.n();
    let n = a.ncols();
    if a.nrows() != np {
        return Err(Error::DimensionMismatch { expected: np, got: a.nrows() });
    }
    let b = f.basis();
    let x = b.rows(0, np).into_owned();
    let y = b.rows(np, np).into_owned();
    let sys = linalg::hstack(a, &(-&x));
    let ker = linalg::null_space(&sys, tol.tau).basis;
    let v = ker.rows(0, n).into_owned();
    let c = ker.rows(n, np).into_owned();
    let spanning = linalg::vstack(&v, &(a.transpose() * &y * &c));
    let result = dirac_from_spanning(n, &spanning, tol)?;
    // A*φ′ = 0 iff F′ meets 0 ⊕ ker(A*)
    let ann = linalg::null_space(&a.transpose(), tol.tau).basis;
    let probe = linalg::vstack(&Mat::zeros(np, ann.ncols()), &ann);
    let meets = if ann.ncols() == 0 { 0 } else { linalg::intersection_dim(b, &probe, tol.tau) };
    Ok(DiracTransport { result, nonzero_spinor: meets == 0 })
}

/// `dim E ∩ (ker A ⊕ 0)`.
fn kernel_meets(a: &Mat, e: &LinearDirac, tol: Tolerance) -> usize {
    let n = e.n();
    let ker = linalg::null_space(a, tol.tau).basis;
    if ker.ncols() == 0 {
        return 0;
    }
    let probe = linalg::vstack(&ker, &Mat::zeros(n, ker.ncols()));
    linalg::intersection_dim(e.basis(), &probe, tol.tau)
}

/// Image computed through the covariant spinor: the null space of `A_*χ`, or `None`
/// when the pushforward vanishes.
pub fn dirac_image_by_spinor(a: &Mat, e: &LinearDirac, tol: Tolerance) -> Result<Option<LinearDirac>> {
    let chi = spinor::covariant_spinor_of_lagrangian(&e.e, tol)?;
    let pushed = spinor::pushforward(a, &chi);
    if pushed.max_abs() <= tol.tau * chi.max_abs() {
        return Ok(None);
    }
    let ns = spinor::covariant_null_space(&pushed, tol)?;
    if !ns.is_pure {
        return Err(Error::NotLagrangian);
    }
    Ok(Some(LinearDirac { e: LagrangianSubspace::new_unchecked(ns.subspace) }))
}

/// Preimage computed through the contravariant spinor: the null space of `A*φ′`.
pub fn dirac_preimage_by_spinor(a: &Mat, f: &LinearDirac, tol: Tolerance) -> Result<Option<LinearDirac>> {
    let phi = spinor::spinor_of_lagrangian(&f.e, 1.0, tol)?.form;
    let pulled = spinor::pullback(a, &phi);
    if pulled.max_abs() <= tol.tau * phi.max_abs() {
        return Ok(None);
    }
    let ns = spinor::null_space(&pulled, tol)?;
    if !ns.is_pure {
        return Err(Error::NotLagrangian);
    }
    Ok(Some(LinearDirac { e: LagrangianSubspace::new_unchecked(ns.subspace) }))
}

/// `A: (V,E) → (V′,E′)` is a strong Dirac map iff `E′` is the image of `E` and
/// `E ∩ (ker A ⊕ 0) = 0`.
pub fn is_strong_dirac(a: &Mat, e: &LinearDirac, e_prime: &LinearDirac, tol: Tolerance) -> Result<bool> {
    let img = dirac_image(a, e, tol)?;
    let distance = img.result.distance(e_prime);
    if distance > 1e3 * tol.tau {
        return Err(Error::NotDiracMap { distance });
    }
    Ok(kernel_meets(a, e, tol) == 0)
}

fn check_orthogonal(a: &Mat, b: &Mat, tol: Tolerance) -> Result<()> {
    let defect = (a.transpose() * b * a - b).norm();
    if defect > tol.tau * b.norm().max(1.0) * 10.0 {
        return Err(Error::NotOrthogonal { defect });
    }
    Ok(())
}

/// `A^κ` on `V ⊕ V*` for `A ∈ O(V, B)`:
/// `[[½(A+I), (A−I)B⁻¹], [¼B(A−I), ½B(A+I)B⁻¹]]`.
pub fn kappa_embed(a: &Mat, b: &Mat, tol: Tolerance) -> Result<Mat> {
    check_orthogonal(a, b, tol)?;
    let n = a.nrows();
    let id = Mat::identity(n, n);
    let binv = b.clone().try_inverse().ok_or(Error::Degenerate)?;
    let mut k = Mat::zeros(2 * n, 2 * n);
    k.view_mut((0, 0), (n, n)).copy_from(&((a + &id) * 0.5));
    k.view_mut((0, n), (n, n)).copy_from(&((a - &id) * &binv));
    k.view_mut((n, 0), (n, n)).copy_from(&(b * (a - &id) * 0.25));
    k.view_mut((n, n), (n, n)).copy_from(&(b * (a + &id) * &binv * 0.5));
    Ok(k)
}

/// `κ(w) = (w, ½Bw)`: the image of `w ∈ (V,B)` in `𝕍`.
pub fn kappa_vector(w: &[f64], b: &Mat) -> Vec<f64> {
    let bw = b * DVector::from_column_slice(w);
    w.iter().copied().chain(bw.iter().map(|x| 0.5 * x)).collect()
}

/// `det(A+I)` below this multiple of `τ` switches to the reflection path.
pub const SINGULAR_FACTOR: f64 = 1e3;

/// How a spinor of an orthogonal map was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinorRoute {
    ClosedForm,
    Reflections,
}

/// `det^{1/2}((A+I)/2)·exp(ς)` with the 2-form `ς = ½B(A−I)(A+I)⁻¹`; requires `det(A+I) ≠ 0`.
pub fn spinor_closed_form(a: &Mat, b: &Mat) -> Result<Multivector<f64>> {
    let n = a.nrows();
    let id = Mat::identity(n, n);
    let ap = a + &id;
    let det = (&ap * 0.5).determinant();
    if det <= 0.0 {
        return Err(Error::NotInvertible);
    }
    // X = (A−I)(A+I)⁻¹ solves (A+I)ᵀ Xᵀ = (A−I)ᵀ
    let xt = ap.transpose().lu().solve(&(a - &id).transpose()).ok_or(Error::NotInvertible)?;
    let s = b * xt.transpose() * 0.5;
    let s = (&s - s.transpose()) * 0.5;
    Ok(spinor::two_form_of_matrix(&s).exp_wedge().scale(&det.sqrt()))
}

/// `ρ(κw₁)⋯ρ(κw_k)·1` for a factorization `A = R_{w₁}⋯R_{w_k}` with Pin-normalized `w_i`.
pub fn spinor_by_reflections(a: &Mat, b: &Mat, tol: Tolerance) -> Result<Multivector<f64>> {
    let ws = factor_into_reflections(b, a, tol)?;
    Ok(apply_reflections(&ws, b, &Multivector::one(a.nrows())))
}

/// `ρ(κw₁)⋯ρ(κw_k)·start` with each `w_i` Pin-normalized.
pub fn apply_reflections(ws: &[Vec<f64>], b: &Mat, start: &Multivector<f64>) -> Multivector<f64> {
    let mut out = start.clone();
    for w in ws.iter().rev() {
        let wv = DVector::from_column_slice(w);
        let q = wv.dot(&(b * &wv));
        let w: Vec<f64> = w.iter().map(|x| x / (q.abs() / 2.0).sqrt()).collect();
        out = spinor::rho_contravariant(&kappa_vector(&w, b), &out);
    }
    out
}

/// Pure spinor with null space `A^κ(V)`: the closed form times `sign`, or the reflection
/// path times `sign` when `|det(A+I)| < 10³τ`.
pub fn spinor_of_orthogonal(a: &Mat, b: &Mat, sign: f64, tol: Tolerance) -> Result<(Multivector<f64>, SpinorRoute)> {
    check_orthogonal(a, b, tol)?;
    let n = a.nrows();
    let det = (a + Mat::identity(n, n)).determinant();
    if det.abs() >= SINGULAR_FACTOR * tol.tau {
        Ok((spinor_closed_form(a, b)?.scale(&sign), SpinorRoute::ClosedForm))
    } else {
        Ok((spinor_by_reflections(a, b, tol)?.scale(&sign), SpinorRoute::Reflections))
    }
}

/// Pulls back `ψ′` (with `N_ψ′` transverse to `E′`) along a strong Dirac map. The result is
/// nonzero and its null space is transverse to `E`.
pub fn pullback_transversality(
    a: &Mat,
    e: &LinearDirac,
    e_prime: &LinearDirac,
    psi_prime: &PureSpinor,
    tol: Tolerance,
) -> Result<PureSpinor> {
    if !is_strong_dirac(a, e, e_prime, tol)? {
        return Err(Error::NotStrong);
    }
    let pulled = spinor::pullback(a, &psi_prime.form);
    if pulled.max_abs() <= tol.tau * psi_prime.form.max_abs() {
        return Err(Error::ZeroSpinor);
    }
    PureSpinor::new(pulled, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::{chevalley_pairing, null_space, DoubledSpace};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn ns_distance(phi: &Multivector<f64>, e: &LinearDirac) -> f64 {
        null_space(phi, tol()).unwrap().subspace.distance(e.e.subspace())
    }

    #[test]
    fn bivector_spinor_null_space_is_graph() {
        let pi = Mat::from_row_slice(2, 2, &[0.0, 0.7, -0.7, 0.0]);
        let phi = graph_of_bivector(&pi, 1.0, tol()).unwrap();
        let mut want = Multivector::volume(2);
        want.add_term(0, 0.7);
        assert!(phi.form.sub(&want).max_abs() < 1e-15);
        assert!(phi.null_space.distance(&LinearDirac::graph_of_bivector(&pi).e) < 1e-12);
        let zero = graph_of_bivector(&Mat::zeros(3, 3), 1.0, tol()).unwrap();
        assert_eq!(zero.form, Multivector::volume(3));
        // π invertible: Gr_π is transverse to V* and the pairing with 1 is nonzero
        assert!(chevalley_pairing(&Multivector::one(2), &phi.form).abs() > 0.1);
    }

    #[test]
    fn gauge_of_v_is_graph() {
        let mut rng = linalg::seeded_rng(2);
        let tau = linalg::random_antisymmetric(3, &mut rng);
        let v = LinearDirac::new(DoubledSpace::new(3).v_lagrangian());
        assert!(gauge_transform(&v, &tau).distance(&LinearDirac::graph_of_two_form(&tau)) < 1e-12);
        assert!(gauge_transform(&v, &Mat::zeros(3, 3)).distance(&v) < 1e-14);
        let a = linalg::random_orthogonal(3, &mut rng);
        let e = LinearDirac::new(DoubledSpace::new(3).lagrangian_from_orthogonal(&a, tol()).unwrap());
        let phi = spinor::spinor_of_lagrangian(&e.e, 1.0, tol()).unwrap();
        let g = gauge_transform(&e, &tau);
        assert!(ns_distance(&gauge_spinor(&phi.form, &tau), &g) < 1e-9);
    }

    #[test]
    fn image_along_zero_map() {
        let om = Mat::from_row_slice(2, 2, &[0.0, 2.0, -2.0, 0.0]);
        let a = Mat::zeros(0, 2);
        let gr = LinearDirac::graph_of_two_form(&om);
        let img = dirac_image(&a, &gr, tol()).unwrap();
        assert_eq!(img.result.n(), 0);
        assert!(img.nonzero_spinor);
        let degenerate = LinearDirac::graph_of_two_form(&Mat::zeros(2, 2));
        assert!(!dirac_image(&a, &degenerate, tol()).unwrap().nonzero_spinor);
    }

    #[test]
    fn image_and_preimage_agree_with_spinors() {
        let mut rng = linalg::seeded_rng(4);
        for trial in 0..10 {
            let a = linalg::gaussian_matrix(2, 3, &mut rng);
            let q = linalg::random_orthogonal(3, &mut rng);
            let e = LinearDirac::new(DoubledSpace::new(3).lagrangian_from_orthogonal(&q, tol()).unwrap());
            let img = dirac_image(&a, &e, tol()).unwrap();
            let by_spinor = dirac_image_by_spinor(&a, &e, tol()).unwrap();
            assert_eq!(img.nonzero_spinor, by_spinor.is_some(), "trial {trial}");
            if let Some(s) = by_spinor {
                assert!(s.distance(&img.result) < 1e-8, "trial {trial}");
            }
            let q2 = linalg::random_orthogonal(2, &mut rng);
            let f = LinearDirac::new(DoubledSpace::new(2).lagrangian_from_orthogonal(&q2, tol()).unwrap());
            let pre = dirac_preimage(&a, &f, tol()).unwrap();
            let by_spinor = dirac_preimage_by_spinor(&a, &f, tol()).unwrap();
            assert_eq!(pre.nonzero_spinor, by_spinor.is_some());
            if let Some(s) = by_spinor {
                assert!(s.distance(&pre.result) < 1e-8);
            }
        }
    }

    #[test]
    fn preimage_along_inclusion_restricts_the_form() {
        let mut rng = linalg::seeded_rng(9);
        let om = linalg::random_antisymmetric(3, &mut rng);
        let inc = linalg::gaussian_matrix(3, 2, &mut rng);
        let pre = dirac_preimage(&inc, &LinearDirac::graph_of_two_form(&om), tol()).unwrap();
        let restricted = inc.transpose() * &om * &inc;
        assert!(pre.result.distance(&LinearDirac::graph_of_two_form(&restricted)) < 1e-10);
    }

    #[test]
    fn strong_dirac_examples() {
        let v = LinearDirac::new(DoubledSpace::new(2).v_lagrangian());
        let id = Mat::identity(2, 2);
        assert!(is_strong_dirac(&id, &v, &v, tol()).unwrap());
        let proj = Mat::from_row_slice(1, 2, &[1.0, 0.0]);
        let img = dirac_image(&proj, &v, tol()).unwrap().result;
        assert!(!is_strong_dirac(&proj, &v, &img, tol()).unwrap());
        let wrong = LinearDirac::new(DoubledSpace::new(1).dual_lagrangian());
        assert!(matches!(is_strong_dirac(&proj, &v, &wrong, tol()), Err(Error::NotDiracMap { .. })));
        // the inclusion of the range with its 2-form
        let mut rng = linalg::seeded_rng(12);
        let e = LinearDirac::new(DoubledSpace::new(3).lagrangian_from_orthogonal(&linalg::random_orthogonal(3, &mut rng), tol()).unwrap());
        let g = spinor::graph_two_form_of(&e.e, tol());
        let leaf = LinearDirac::graph_of_two_form(&g.omega);
        assert!(is_strong_dirac(&g.range, &leaf, &e, tol()).unwrap());
    }

    #[test]
    fn kappa_examples() {
        let id = Mat::identity(3, 3);
        assert!((kappa_embed(&id, &id, tol()).unwrap() - Mat::identity(6, 6)).norm() < 1e-15);
        let k = kappa_embed(&(-&id), &id, tol()).unwrap();
        let mut want = Mat::zeros(6, 6);
        want.view_mut((0, 3), (3, 3)).copy_from(&(-2.0 * &id));
        want.view_mut((3, 0), (3, 3)).copy_from(&(-0.5 * &id));
        assert!((k - want).norm() < 1e-15);
        let mut rng = linalg::seeded_rng(1);
        let a = linalg::random_orthogonal(3, &mut rng);
        let b = linalg::random_orthogonal(3, &mut rng);
        let ka = kappa_embed(&a, &id, tol()).unwrap();
        let kb = kappa_embed(&b, &id, tol()).unwrap();
        assert!((kappa_embed(&(&a * &b), &id, tol()).unwrap() - &ka * &kb).norm() < 1e-12);
        let g = doubled_gram(3);
        assert!((ka.transpose() * &g * &ka - g).norm() < 1e-12);
        assert!(matches!(kappa_embed(&(2.0 * &id), &id, tol()), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn closed_form_matches_reflections_with_nondefinite_pairing() {
        let mut rng = linalg::seeded_rng(17);
        // B a random positive definite form; A its orthogonal transformation S Q S⁻¹
        let s = linalg::gaussian_matrix(3, 3, &mut rng) + 3.0 * Mat::identity(3, 3);
        let sinv = s.clone().try_inverse().unwrap();
        let b = sinv.transpose() * &sinv;
        let q = linalg::random_rotation(3, &mut rng);
        let a = &s * q * &sinv;
        let c = spinor_closed_form(&a, &b).unwrap();
        let r = spinor_by_reflections(&a, &b, tol()).unwrap();
        let err = c.sub(&r).max_abs().min(c.add(&r).max_abs());
        assert!(err < 1e-10, "{err}");
        let ka = kappa_embed(&a, &b, tol()).unwrap();
        let v = DoubledSpace::new(3).v_lagrangian();
        let image = Subspace::span(doubled_gram(3), &(&ka * v.basis()), tol());
        assert!(null_space(&c, tol()).unwrap().subspace.distance(&image) < 1e-9);
    }

    #[test]
    fn minus_identity_gives_volume() {
        let id = Mat::identity(3, 3);
        let (psi, route) = spinor_of_orthogonal(&(-&id), &id, 1.0, tol()).unwrap();
        assert_eq!(route, SpinorRoute::Reflections);
        let top = psi.top_coefficient();
        assert!(top.abs() > 0.1);
        assert!(psi.sub(&Multivector::volume(3).scale(&top)).max_abs() < 1e-12);
        let (one, _) = spinor_of_orthogonal(&id, &id, 1.0, tol()).unwrap();
        assert_eq!(one, Multivector::one(3));
    }

    #[test]
    fn pullback_along_strong_map_is_transverse() {
        let mut rng = linalg::seeded_rng(33);
        let a = linalg::gaussian_matrix(2, 3, &mut rng);
        let q = linalg::random_orthogonal(3, &mut rng);
        let e = LinearDirac::new(DoubledSpace::new(3).lagrangian_from_orthogonal(&q, tol()).unwrap());
        let img = dirac_image(&a, &e, tol()).unwrap();
        assert!(img.nonzero_spinor);
        let fp = loop {
            let b = linalg::random_orthogonal(2, &mut rng);
            let f = LinearDirac::new(DoubledSpace::new(2).lagrangian_from_orthogonal(&b, tol()).unwrap());
            if crate::bilinear::transverse(&f.e, &img.result.e, tol()) {
                break f;
            }
        };
        let psi_p = spinor::spinor_of_lagrangian(&fp.e, 1.0, tol()).unwrap();
        let psi = pullback_transversality(&a, &e, &img.result, &psi_p, tol()).unwrap();
        let phi_e = spinor::spinor_of_lagrangian(&e.e, 1.0, tol()).unwrap();
        let p = chevalley_pairing(&phi_e.form, &psi.form);
        assert!(p.abs() > 1e-10);
    }
}
