//! q-Hamiltonian `G`-spaces sampled at points: moment and minimal-degeneracy conditions,
//! their Dirac-geometric reformulation, fusion, and volume densities.

pub mod exp;
pub mod spaces;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::dirac::{self, LinearDirac};
use crate::error::{Error, Result};
use crate::lie::cartan;
use crate::lie::forms;
use crate::lie::group::{CMat, GroupModel};
use crate::linalg::{self, Mat};
use crate::multivector::Multivector;
use crate::scalar::Tolerance;
use crate::spinor;

/// Linear data of a q-Hamiltonian space at one point `x`, in a tangent frame of size `m`.
#[derive(Debug, Clone)]
pub struct QHamPoint {
    /// `ω_x` on the frame, `m × m` antisymmetric.
    pub omega: Mat,
    pub phi: CMat,
    /// Row `a` is `Φ⁻¹dΦ(t_a) ∈ 𝔤`: `m × d`.
    pub dphi: Mat,
    /// Column `j` is `ξ_j^♯(x)` in frame coordinates: `m × d`.
    pub action: Mat,
}

impl QHamPoint {
    pub fn dim(&self) -> usize {
        self.omega.nrows()
    }

    /// The same point described in the frame `t′ = t·q`.
    pub fn change_frame(&self, q: &Mat) -> Result<QHamPoint> {
        let qi = q.clone().try_inverse().ok_or(Error::DegenerateFrame)?;
        Ok(QHamPoint {
            omega: q.transpose() * &self.omega * q,
            phi: self.phi.clone(),
            dphi: q.transpose() * &self.dphi,
            action: qi * &self.action,
        })
    }

    /// The trivial space: a point with `Φ = e`.
    pub fn point(model: &GroupModel) -> QHamPoint {
        let d = model.dim();
        QHamPoint { omega: Mat::zeros(0, 0), phi: model.identity(), dphi: Mat::zeros(0, d), action: Mat::zeros(0, d) }
    }

    /// `dΦ` as a `d × m` linear map.
    pub fn moment_map_differential(&self) -> Mat {
        self.dphi.transpose()
    }
}

/// `max_j ‖ι(ξ_j^♯)ω − Φ*B((θ^L+θ^R)/2, ξ_j)‖_∞`.
pub fn check_moment_condition(p: &QHamPoint, model: &GroupModel) -> f64 {
    let d = model.dim();
    let m = p.dim();
    if m == 0 {
        return 0.0;
    }
    let ad = model.ad_group(&p.phi);
    let half = (Mat::identity(d, d) + ad) * 0.5;
    // row a: ½(1 + Ad_Φ) ℓ_a paired with ξ_j
    let rhs = &p.dphi * half.transpose() * model.b();
    let lhs = p.omega.transpose() * &p.action;
    (lhs - rhs).amax()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    /// `ker ω = {ξ^♯ : Ad_Φ ξ = −ξ}`.
    pub kernel_condition: bool,
    /// `ker ω ∩ ker dΦ = 0`.
    pub transversal_condition: bool,
}

impl DegeneracyReport {
    pub fn agree(&self) -> bool {
        self.kernel_condition == self.transversal_condition
    }

    pub fn holds(&self) -> bool {
        self.kernel_condition && self.transversal_condition
    }
}

const RANK_TOL: f64 = 1e-8;

/// Both formulations of minimal degeneracy.
pub fn check_minimal_degeneracy(p: &QHamPoint, model: &GroupModel) -> DegeneracyReport {
    let d = model.dim();
    let m = p.dim();
    if m == 0 {
        return DegeneracyReport { kernel_condition: true, transversal_condition: true };
    }
    let scale = p.omega.amax().max(p.dphi.amax()).max(1.0);
    let ker_omega = linalg::null_space(&(&p.omega / scale), RANK_TOL).basis;
    let ad = model.ad_group(&p.phi);
    let minus = linalg::null_space(&(ad + Mat::identity(d, d)), RANK_TOL).basis;
    let sharp_minus = if minus.ncols() == 0 { Mat::zeros(m, 0) } else { linalg::column_basis(&(&p.action * minus), RANK_TOL) };
    let kernel_condition = ker_omega.ncols() == sharp_minus.ncols()
        && (ker_omega.ncols() == 0 || linalg::subspace_distance(&ker_omega, &sharp_minus) < 1e-6);
    let ker_dphi = linalg::null_space(&(p.moment_map_differential() / scale), RANK_TOL).basis;
    let transversal_condition = ker_omega.ncols() == 0 || ker_dphi.ncols() == 0 || linalg::intersection_dim(&ker_omega, &ker_dphi, RANK_TOL) == 0;
    DegeneracyReport { kernel_condition, transversal_condition }
}

/// Dirac-geometric formulation: `dΦ: (T_xM, Gr_ω) → (T_ΦG, E_Φ)` is a strong Dirac map.
pub fn is_dirac_moment_map(p: &QHamPoint, model: &GroupModel, tol: Tolerance) -> Result<bool> {
    let e = cartan::cartan_dirac_fiber(model, &p.phi, tol)?;
    let gr = LinearDirac::graph_of_two_form(&p.omega);
    match dirac::is_strong_dirac(&p.moment_map_differential(), &gr, &e, tol) {
        Ok(b) => Ok(b),
        Err(Error::NotDiracMap { .. }) => Ok(false),
        Err(err) => Err(err),
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EquivalenceRecord {
    pub moment_residual: f64,
    pub degeneracy: DegeneracyReport,
    pub definition_one: bool,
    pub definition_two: bool,
}

impl EquivalenceRecord {
    pub fn agree(&self) -> bool {
        self.definition_one == self.definition_two
    }
}

/// Evaluates both definitions at a point; `threshold` applies to the moment residual.
pub fn compare_definitions(p: &QHamPoint, model: &GroupModel, threshold: f64, tol: Tolerance) -> Result<EquivalenceRecord> {
    let moment_residual = check_moment_condition(p, model);
    let degeneracy = check_minimal_degeneracy(p, model);
    let definition_one = moment_residual < threshold && degeneracy.holds();
    let definition_two = is_dirac_moment_map(p, model, tol)?;
    Ok(EquivalenceRecord { moment_residual, degeneracy, definition_one, definition_two })
}

/// `τ = ½B(pr₁*θ^L, pr₂*θ^R)` at `(g₁, g₂)` on `(x₁⊕x₂, y₁⊕y₂)` in the left trivialization.
pub fn fusion_tau(model: &GroupModel, g2: &CMat, x: (&[f64], &[f64]), y: (&[f64], &[f64])) -> f64 {
    let ad = model.ad_group(g2);
    let r = |v: &[f64]| (&ad * DVector::from_column_slice(v)).as_slice().to_vec();
    0.5 * (model.pair(x.0, &r(y.1)) - model.pair(y.0, &r(x.1)))
}

/// `τ` as a `2d × 2d` matrix on `𝔤 ⊕ 𝔤`.
pub fn fusion_tau_matrix(model: &GroupModel, g2: &CMat) -> Mat {
    let d = model.dim();
    let ad = model.ad_group(g2);
    let half = model.b() * ad * 0.5;
    let mut t = Mat::zeros(2 * d, 2 * d);
    t.view_mut((0, d), (d, d)).copy_from(&half);
    t.view_mut((d, 0), (d, d)).copy_from(&(-half.transpose()));
    t
}

/// `max |Mult*η − pr₁*η − pr₂*η − dτ|` at `(g₁, g₂)`, with `dτ` by finite differences.
pub fn fusion_identity_residual(model: &GroupModel, g1: &CMat, g2: &CMat, h: f64) -> Result<f64> {
    let d = model.dim();
    let sq = model.square();
    let eta = forms::eta_form(model);
    let mult = linalg::hstack(&model.ad_group(&model.inverse(g2)), &Mat::identity(d, d));
    let pr1 = linalg::hstack(&Mat::identity(d, d), &Mat::zeros(d, d));
    let pr2 = linalg::hstack(&Mat::zeros(d, d), &Mat::identity(d, d));
    let lhs = spinor::pullback(&mult, &eta)
        .sub(&spinor::pullback(&pr1, &eta))
        .sub(&spinor::pullback(&pr2, &eta));
    let field = |g: &CMat| {
        let (_, b) = GroupModel::split(g);
        spinor::two_form_of_matrix(&fusion_tau_matrix(model, &b))
    };
    let dtau = forms::fd_exterior_derivative(&sq, &field, &GroupModel::join(g1, g2), h)?.coeffs;
    Ok(lhs.sub(&dtau).max_abs())
}

/// Two moment components over the same point and frame, for a `G × G`-space.
#[derive(Debug, Clone)]
pub struct FusionData {
    pub first: QHamPoint,
    pub second: QHamPoint,
}

/// `Φ = Φ₁Φ₂`, `ω + (Φ₁,Φ₂)*τ`, diagonal action.
pub fn fuse(f: &FusionData, model: &GroupModel) -> Result<QHamPoint> {
    let (p1, p2) = (&f.first, &f.second);
    if p1.dim() != p2.dim() || (&p1.omega - &p2.omega).amax() > 1e-12 {
        return Err(Error::DimensionMismatch { expected: p1.dim(), got: p2.dim() });
    }
    let ad2i = model.ad_group(&model.inverse(&p2.phi));
    let dphi = &p1.dphi * ad2i.transpose() + &p2.dphi;
    let tau = fusion_tau_matrix(model, &p2.phi);
    let stacked = linalg::hstack(&p1.dphi, &p2.dphi);
    let omega = &p1.omega + &stacked * tau * stacked.transpose();
    Ok(QHamPoint { omega, phi: &p1.phi * &p2.phi, dphi, action: &p1.action + &p2.action })
}

/// Density of `(e^ω Φ*ψ)_[top]` on the frame; absolute value for models without a lift.
pub fn qham_volume_top(p: &QHamPoint, model: &GroupModel, tol: Tolerance) -> Result<f64> {
    let psi = cartan::psi_on_group(model, &p.phi, tol)?;
    let pulled = spinor::pullback(&p.moment_map_differential(), &psi.form);
    let w = spinor::two_form_of_matrix(&p.omega);
    let top = w.exp_wedge().wedge(&pulled).coeff(Multivector::<f64>::volume(p.dim()).top_blade());
    Ok(if psi.sign_agnostic { top.abs() } else { top })
}
