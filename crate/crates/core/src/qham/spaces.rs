//! Sample-point constructors: conjugacy classes, the double `D(G)` and the fused double.

use nalgebra::DVector;

use super::{fuse, FusionData, QHamPoint};
use crate::error::{Error, Result};
use crate::lie::cartan::{self, ConjugacyClassPoint};
use crate::lie::forms;
use crate::lie::group::{CMat, GroupModel};
use crate::linalg::{self, Mat};
use crate::multivector::Multivector;
use crate::scalar::Tolerance;
use crate::spinor;

/// A conjugacy class through `g`, with the GHJW form and the inclusion as moment map.
pub fn class_point(model: &GroupModel, g: &CMat, tol: Tolerance) -> Result<QHamPoint> {
    let c = ConjugacyClassPoint::new(model, g, tol);
    let omega = c.two_form(model);
    let action = if c.dim() == 0 {
        Mat::zeros(0, model.dim())
    } else {
        let coords = linalg::pseudo_inverse(&c.frame, 1e-12) * cartan::sharp_matrix(model, g);
        if (&c.frame * &coords - cartan::sharp_matrix(model, g)).amax() > 1e3 * tol.tau {
            return Err(Error::DegenerateFrame);
        }
        coords
    };
    Ok(QHamPoint { omega, phi: g.clone(), dphi: c.frame.transpose(), action })
}

fn block_rows(top: &Mat, bottom: &Mat) -> Mat {
    linalg::vstack(top, bottom)
}

/// `ω` of the double on `(x₁⊕x₂, y₁⊕y₂)`, in the left trivialization of `G × G`.
pub fn double_omega(model: &GroupModel, a: &CMat, b: &CMat) -> Mat {
    let d = model.dim();
    let bm = model.b();
    let ada = model.ad_group(a);
    let adb = model.ad_group(b);
    // ½B(x₁, Ad_b y₂) + ½B(Ad_a x₁, y₂), antisymmetrized
    let upper = (bm * &adb + ada.transpose() * bm) * 0.5;
    let mut w = Mat::zeros(2 * d, 2 * d);
    w.view_mut((0, d), (d, d)).copy_from(&upper);
    w.view_mut((d, 0), (d, d)).copy_from(&(-upper.transpose()));
    w
}

/// The two moment components of the double at `(a, b)`, for the `G × G` action
/// `(g₁, g₂)·(a, b) = (g₁ a g₂⁻¹, g₂ b g₁⁻¹)`.
pub fn double_components(model: &GroupModel, a: &CMat, b: &CMat) -> FusionData {
    let d = model.dim();
    let id = Mat::identity(d, d);
    let ai = model.ad_group(&model.inverse(a));
    let bi = model.ad_group(&model.inverse(b));
    let ab = model.ad_group(&(b * a));
    let adb = model.ad_group(b);
    let omega = double_omega(model, a, b);
    // rows are Φ⁻¹dΦ of the frame vectors (x₁ = e_i or x₂ = e_i)
    let dphi1 = block_rows(&bi.transpose(), &id);
    let dphi2 = block_rows(&(-ab.transpose()), &(-adb.transpose()));
    let act1 = block_rows(&ai, &(-&id));
    let act2 = block_rows(&(-&id), &bi);
    FusionData {
        first: QHamPoint { omega: omega.clone(), phi: a * b, dphi: dphi1, action: act1 },
        second: QHamPoint {
            omega,
            phi: model.inverse(a) * model.inverse(b),
            dphi: dphi2,
            action: act2,
        },
    }
}

/// The double as a `G × G`-space, over the square model.
pub fn double_point(model: &GroupModel, a: &CMat, b: &CMat) -> QHamPoint {
    let d = model.dim();
    let f = double_components(model, a, b);
    let mut dphi = Mat::zeros(2 * d, 2 * d);
    dphi.view_mut((0, 0), (2 * d, d)).copy_from(&f.first.dphi);
    dphi.view_mut((0, d), (2 * d, d)).copy_from(&f.second.dphi);
    QHamPoint {
        omega: f.first.omega,
        phi: GroupModel::join(&f.first.phi, &f.second.phi),
        dphi,
        action: linalg::hstack(&f.first.action, &f.second.action),
    }
}

/// The fused double: diagonal action, moment map the commutator `aba⁻¹b⁻¹`.
pub fn fused_double_point(model: &GroupModel, a: &CMat, b: &CMat) -> Result<QHamPoint> {
    fuse(&double_components(model, a, b), model)
}

/// `max |dω^fus − (Φ^fus)*η|` at `(a, b)`, with `dω^fus` by finite differences on `G × G`.
pub fn fused_double_closure_residual(model: &GroupModel, a: &CMat, b: &CMat, h: f64) -> Result<f64> {
    let sq = model.square();
    let eta = forms::eta_form(model);
    let field = |g: &CMat| {
        let (x, y) = GroupModel::split(g);
        match fused_double_point(model, &x, &y) {
            Ok(p) => spinor::two_form_of_matrix(&p.omega),
            Err(_) => Multivector::zero(2 * model.dim()),
        }
    };
    let dw = forms::fd_exterior_derivative(&sq, &field, &GroupModel::join(a, b), h)?.coeffs;
    let p = fused_double_point(model, a, b)?;
    let pulled = spinor::pullback(&p.moment_map_differential(), &eta);
    Ok(dw.sub(&pulled).max_abs())
}

/// `max |ω(gag⁻¹, gbg⁻¹)(Ad_g x, Ad_g y) − ω(a, b)(x, y)|` for the diagonal action on the
/// fused double.
pub fn fused_double_invariance_defect(model: &GroupModel, a: &CMat, b: &CMat, g: &CMat) -> Result<f64> {
    let gi = model.inverse(g);
    let p = fused_double_point(model, a, b)?;
    let q = fused_double_point(model, &(g * a * &gi), &(g * b * &gi))?;
    let d = model.dim();
    let ad = model.ad_group(g);
    let mut t = Mat::zeros(2 * d, 2 * d);
    t.view_mut((0, 0), (d, d)).copy_from(&ad);
    t.view_mut((d, d), (d, d)).copy_from(&ad);
    Ok((t.transpose() * q.omega * t - p.omega).amax())
}

/// Rank data at a sample with `Φ = e`: the rank of `dΦ` and `dim ker ω`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelSetRanks {
    pub dphi_rank: usize,
    pub kernel_dim: usize,
}

pub fn level_set_ranks(p: &QHamPoint, model: &GroupModel, tol: Tolerance) -> Result<LevelSetRanks> {
    let d = model.dim();
    if (model.ad_group(&p.phi) - Mat::identity(d, d)).amax() > 1e3 * tol.tau {
        return Err(Error::NotLiftable("level set samples need Φ = e".into()));
    }
    let scale = p.omega.amax().max(1.0);
    Ok(LevelSetRanks {
        dphi_rank: linalg::rank(&p.dphi, 1e-8),
        kernel_dim: linalg::null_space(&(&p.omega / scale), 1e-8).basis.ncols(),
    })
}

/// Frame-coordinate vector of `ξ_j^♯` for the point's action.
pub fn sharp_of(p: &QHamPoint, xi: &[f64]) -> Vec<f64> {
    (&p.action * DVector::from_column_slice(xi)).as_slice().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::seeded_rng;
    use crate::qham::{check_minimal_degeneracy, check_moment_condition, is_dirac_moment_map, qham_volume_top};

    #[test]
    fn class_points_are_q_hamiltonian() {
        let m = GroupModel::su2();
        let tol = Tolerance::default();
        let mut rng = seeded_rng(5);
        for _ in 0..10 {
            let g = m.random_element(&mut rng);
            let p = class_point(&m, &g, tol).unwrap();
            assert!(check_moment_condition(&p, &m) < 1e-10);
            assert!(check_minimal_degeneracy(&p, &m).holds());
            assert!(is_dirac_moment_map(&p, &m, tol).unwrap());
            let c = ConjugacyClassPoint::new(&m, &g, tol);
            let v1 = qham_volume_top(&p, &m, tol).unwrap();
            let v2 = cartan::conjugacy_volume_top(&m, &c, tol).unwrap();
            assert!((v1 - v2).abs() < 1e-10);
        }
    }

    #[test]
    fn double_components_satisfy_moment_condition() {
        let m = GroupModel::su2();
        let sq = m.square();
        let mut rng = seeded_rng(6);
        for _ in 0..5 {
            let a = m.random_element(&mut rng);
            let b = m.random_element(&mut rng);
            let f = double_components(&m, &a, &b);
            let r1 = check_moment_condition(&f.first, &m);
            let r2 = check_moment_condition(&f.second, &m);
            assert!(r1 < 1e-10 && r2 < 1e-10, "{r1} {r2}");
            let p = double_point(&m, &a, &b);
            assert!(check_moment_condition(&p, &sq) < 1e-10);
            assert!(check_minimal_degeneracy(&p, &sq).holds());
        }
    }

    #[test]
    fn fused_double_moment_and_closure() {
        let m = GroupModel::su2();
        let tol = Tolerance::default();
        let mut rng = seeded_rng(7);
        for _ in 0..5 {
            let a = m.random_element(&mut rng);
            let b = m.random_element(&mut rng);
            let p = fused_double_point(&m, &a, &b).unwrap();
            let comm = &a * &b * m.inverse(&a) * m.inverse(&b);
            assert!((&p.phi - comm).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
            let r = check_moment_condition(&p, &m);
            assert!(r < 1e-8, "{r}");
            assert!(check_minimal_degeneracy(&p, &m).holds());
            assert!(qham_volume_top(&p, &m, tol).unwrap().abs() > 1e-6);
            let c = fused_double_closure_residual(&m, &a, &b, forms::FD_STEP).unwrap();
            assert!(c < 1e-4, "{c}");
        }
    }

    #[test]
    fn fused_double_is_invariant() {
        let m = GroupModel::su2();
        let mut rng = seeded_rng(12);
        for _ in 0..5 {
            let a = m.random_element(&mut rng);
            let b = m.random_element(&mut rng);
            let g = m.random_element(&mut rng);
            assert!(fused_double_invariance_defect(&m, &a, &b, &g).unwrap() < 1e-12);
        }
    }

    #[test]
    fn commuting_pairs_lie_on_the_level_set() {
        let m = GroupModel::su2();
        let tol = Tolerance::default();
        let a = m.exp(&[0.0, 0.0, 0.7]);
        let b = m.exp(&[0.0, 0.0, -1.9]);
        let p = fused_double_point(&m, &a, &b).unwrap();
        let r = level_set_ranks(&p, &m, tol).unwrap();
        // Ad_e ξ = −ξ has no solutions, so ω is nondegenerate; the torus stabilizer drops the rank
        assert_eq!(r.kernel_dim, 0);
        assert_eq!(r.dphi_rank, 2);
        let g = m.random_element(&mut seeded_rng(1));
        let q = fused_double_point(&m, &g, &m.random_element(&mut seeded_rng(2))).unwrap();
        assert!(level_set_ranks(&q, &m, tol).is_err());
    }
}
