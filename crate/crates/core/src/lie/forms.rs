//! Differential forms on a group in the left trivialization: a form at `g` is an element
//! of `∧𝔤*` evaluated on left-invariant frame values.

use crate::error::{Error, Result};
use crate::lie::group::{CMat, GroupModel};
use crate::multivector::{blade_indices, Multivector};

/// Default finite-difference step.
pub const FD_STEP: f64 = 1e-4;

/// A form at a point, with coefficients on `θ^{i₁}∧…∧θ^{i_k}` (left-invariant coframe).
#[derive(Debug, Clone)]
pub struct TrivializedForm {
    pub point: CMat,
    pub coeffs: Multivector<f64>,
}

/// `dθ^k = −½ Σ c^k_ij θ^i∧θ^j`.
fn d_theta(model: &GroupModel, k: usize) -> Multivector<f64> {
    let d = model.dim();
    let mut out = Multivector::zero(d);
    for i in 0..d {
        for j in (i + 1)..d {
            let c = model.structure_constant(i, j, k);
            if c != 0.0 {
                out.add_term((1 << i) | (1 << j), -c);
            }
        }
    }
    out
}

/// Chevalley–Eilenberg differential on constant-coefficient forms.
pub fn d_ce(model: &GroupModel, form: &Multivector<f64>) -> Multivector<f64> {
    let d = model.dim();
    let dtheta: Vec<Multivector<f64>> = (0..d).map(|k| d_theta(model, k)).collect();
    let mut out = Multivector::zero(d);
    for (b, c) in form.terms() {
        let idx = blade_indices(b);
        for r in 0..idx.len() {
            let mut acc = Multivector::one(d);
            for (s, &i) in idx.iter().enumerate() {
                acc = if s == r { acc.wedge(&dtheta[i]) } else { acc.wedge(&Multivector::basis(d, i)) };
            }
            let sign = if r % 2 == 0 { *c } else { -*c };
            out = out.add(&acc.scale(&sign));
        }
    }
    out
}

/// `g·exp(t ξ_i)`.
pub fn step_along(model: &GroupModel, g: &CMat, i: usize, t: f64) -> CMat {
    let mut xi = vec![0.0; model.dim()];
    xi[i] = t;
    g * model.exp(&xi)
}

/// Left-invariant derivative `ξ_i^L f` of a form-valued function by central differences.
pub fn fd_directional<F>(model: &GroupModel, field: &F, g: &CMat, i: usize, h: f64) -> Multivector<f64>
where
    F: Fn(&CMat) -> Multivector<f64>,
{
    let p = field(&step_along(model, g, i, h));
    let m = field(&step_along(model, g, i, -h));
    p.sub(&m).scale(&(0.5 / h))
}

/// `d` of a left-trivialized form field: `Σ θ^i ∧ ξ_i^L(coeffs) + d_CE(coeffs)`.
pub fn fd_exterior_derivative<F>(model: &GroupModel, field: &F, g: &CMat, h: f64) -> Result<TrivializedForm>
where
    F: Fn(&CMat) -> Multivector<f64>,
{
    if !(h > 1e2 * f64::EPSILON) {
        return Err(Error::StepUnderflow(h));
    }
    let d = model.dim();
    let mut out = d_ce(model, &field(g));
    for i in 0..d {
        let di = fd_directional(model, field, g, i, h);
        out = out.add(&Multivector::basis(d, i).wedge(&di));
    }
    Ok(TrivializedForm { point: g.clone(), coeffs: out })
}

/// The Cartan 3-form as a constant form, `η(ξ,ζ,χ) = −½B(ξ,[ζ,χ])`. The sign is the one for
/// which `ι(ξ^♯)η = −d B((θ^L+θ^R)/2, ξ)` with `ξ^♯` the generating field of conjugation.
pub fn eta_form(model: &GroupModel) -> Multivector<f64> {
    let d = model.dim();
    let mut out = Multivector::zero(d);
    for i in 0..d {
        for j in (i + 1)..d {
            for k in (j + 1)..d {
                let mut ei = vec![0.0; d];
                let mut ej = vec![0.0; d];
                let mut ek = vec![0.0; d];
                ei[i] = 1.0;
                ej[j] = 1.0;
                ek[k] = 1.0;
                let v = -0.5 * model.pair(&ei, &model.bracket(&ej, &ek));
                if v.abs() > 1e-15 {
                    out.add_term((1 << i) | (1 << j) | (1 << k), v);
                }
            }
        }
    }
    out
}

/// Evaluates a form on tangent vectors given in left-trivialized coordinates.
pub fn evaluate(form: &Multivector<f64>, vectors: &[Vec<f64>]) -> f64 {
    let k = vectors.len();
    let mut out = 0.0;
    for (b, c) in form.terms() {
        let idx = blade_indices(b);
        if idx.len() != k {
            continue;
        }
        let m = crate::linalg::Mat::from_fn(k, k, |r, s| vectors[s][idx[r]]);
        out += c * m.determinant();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::group::ModelKind;
    use crate::linalg;

    #[test]
    fn d_ce_squares_to_zero() {
        for kind in [ModelKind::Su2, ModelKind::Su3, ModelKind::CoadjointSu2] {
            let m = GroupModel::new(kind);
            let d = m.dim();
            for i in 0..d {
                let dd = d_ce(&m, &d_ce(&m, &Multivector::basis(d, i)));
                assert!(dd.max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_one_form_is_closed() {
        let m = GroupModel::su2();
        let f = |g: &CMat| Multivector::scalar(3, (g[(0, 0)] * g[(1, 0)].conj()).re + g[(0, 1)].im);
        let df = |g: &CMat| fd_exterior_derivative(&m, &f, g, 1e-3).unwrap().coeffs;
        let mut rng = linalg::seeded_rng(2);
        let g = m.random_element(&mut rng);
        let ddf = fd_exterior_derivative(&m, &df, &g, 1e-3).unwrap().coeffs;
        assert!(ddf.max_abs() < 1e-6, "{}", ddf.max_abs());
    }

    #[test]
    fn eta_is_closed_and_nonzero() {
        let m = GroupModel::su2();
        let eta = eta_form(&m);
        assert!(eta.coeff(0b111).abs() > 0.1);
        assert!(d_ce(&m, &eta).max_abs() < 1e-14);
        assert!(fd_exterior_derivative(&m, &|_: &CMat| eta.clone(), &m.identity(), 0.0).is_err());
    }

    #[test]
    fn left_invariant_function_derivative() {
        let m = GroupModel::su2();
        let mut rng = linalg::seeded_rng(4);
        let g = m.random_element(&mut rng);
        // f(g) = Re tr(g X) has ξ_i^L f = Re tr(g ξ_i X)
        let x = m.generator(1).clone();
        let f = |h: &CMat| Multivector::scalar(3, (h * &x).trace().re);
        let df = fd_exterior_derivative(&m, &f, &g, FD_STEP).unwrap().coeffs;
        for i in 0..3 {
            let want = (&g * m.generator(i) * &x).trace().re;
            assert!((df.coeff(1 << i) - want).abs() < 1e-7);
        }
    }
}
