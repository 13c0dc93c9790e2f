//! Clifford algebra of a bilinear space with the relation `w₁w₂ + w₂w₁ = ⟨w₁,w₂⟩·1`,
//! so that `w² = ½⟨w,w⟩`.
//!
//! Elements are stored on ordered monomials `e_{a₁}⋯e_{a_k}`, `a₁ < … < a_k`, in the
//! generators of the space. The basis need not be orthogonal.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bilinear::BilinearSpace;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::multivector::{blade_indices, grade, Blade, Multivector, TermJson};
use crate::scalar::{Scalar, Tolerance};

/// Element of `Cl(W)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordElement<S: Scalar> {
    space: Arc<BilinearSpace<S>>,
    mv: Multivector<S>,
}

fn top_bit(b: Blade) -> usize {
    31 - b.leading_zeros() as usize
}

/// `e_A · e_j` expanded on ordered monomials.
fn monomial_times_generator<S: Scalar>(space: &BilinearSpace<S>, a: Blade, j: usize) -> Vec<(Blade, S)> {
    if a == 0 {
        return vec![(1 << j, S::one())];
    }
    let k = top_bit(a);
    let rest = a & !(1 << k);
    if k < j {
        return vec![(a | (1 << j), S::one())];
    }
    if k == j {
        return vec![(rest, space.entry(j, j) / S::from_i64(2))];
    }
    // e_{A'} e_k e_j = −(e_{A'} e_j) e_k + ⟨e_k,e_j⟩ e_{A'}
    let mut out: Vec<(Blade, S)> = monomial_times_generator(space, rest, j)
        .into_iter()
        .map(|(b, c)| (b | (1 << k), -c))
        .collect();
    let g = space.entry(k, j);
    if !g.is_zero() {
        out.push((rest, g));
    }
    out
}

fn times_generator<S: Scalar>(space: &BilinearSpace<S>, x: &Multivector<S>, j: usize) -> Multivector<S> {
    let mut out = Multivector::zero(x.dim());
    for (b, c) in x.terms() {
        for (b2, c2) in monomial_times_generator(space, b, j) {
            out.add_term(b2, c.clone() * c2);
        }
    }
    out
}

impl<S: Scalar> CliffordElement<S> {
    pub fn new(space: Arc<BilinearSpace<S>>, mv: Multivector<S>) -> Result<Self> {
        if mv.dim() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), got: mv.dim() });
        }
        Ok(CliffordElement { space, mv })
    }

    pub fn scalar(space: Arc<BilinearSpace<S>>, c: S) -> Self {
        let mv = Multivector::scalar(space.dim(), c);
        CliffordElement { space, mv }
    }

    pub fn one(space: Arc<BilinearSpace<S>>) -> Self {
        Self::scalar(space, S::one())
    }

    /// The vector `Σ cᵢ eᵢ ∈ W`.
    pub fn vector(space: Arc<BilinearSpace<S>>, coeffs: &[S]) -> Result<Self> {
        if coeffs.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), got: coeffs.len() });
        }
        let mv = Multivector::vector(coeffs);
        Ok(CliffordElement { space, mv })
    }

    pub fn generator(space: Arc<BilinearSpace<S>>, i: usize) -> Self {
        let mv = Multivector::basis(space.dim(), i);
        CliffordElement { space, mv }
    }

    pub fn space(&self) -> &Arc<BilinearSpace<S>> {
        &self.space
    }

    pub fn mv(&self) -> &Multivector<S> {
        &self.mv
    }

    pub fn is_zero(&self) -> bool {
        self.mv.is_zero()
    }

    fn with(&self, mv: Multivector<S>) -> Self {
        CliffordElement { space: self.space.clone(), mv }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch { expected: self.space.dim(), got: other.space.dim() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.with(self.mv.add(&other.mv)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.with(self.mv.sub(&other.mv)))
    }

    pub fn scale(&self, c: &S) -> Self {
        self.with(self.mv.scale(c))
    }

    /// Right multiplication by the generator `e_j`.
    pub fn times_generator(&self, j: usize) -> Self {
        self.with(times_generator(&self.space, &self.mv, j))
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Multivector::zero(self.space.dim());
        for (b, c) in other.mv.terms() {
            let mut acc = self.mv.clone();
            for j in blade_indices(b) {
                acc = times_generator(&self.space, &acc, j);
            }
            out = out.add(&acc.scale(c));
        }
        Ok(self.with(out))
    }

    /// Anti-automorphism with `(w₁⋯w_k)^⊤ = w_k⋯w₁`.
    pub fn transpose(&self) -> Self {
        let dim = self.space.dim();
        let mut out = Multivector::zero(dim);
        for (b, c) in self.mv.terms() {
            let mut acc = Multivector::scalar(dim, c.clone());
            for j in blade_indices(b).into_iter().rev() {
                acc = times_generator(&self.space, &acc, j);
            }
            out = out.add(&acc);
        }
        self.with(out)
    }

    /// Parity automorphism: `+1` on even, `−1` on odd elements.
    pub fn parity(&self) -> Self {
        self.with(self.mv.grade_involution())
    }

    /// Largest monomial length (the filtration degree of this representation).
    pub fn degree(&self) -> Option<u32> {
        self.mv.max_grade()
    }

    /// Matrix of left multiplication `y ↦ x·y` on the monomial basis, row-major.
    pub fn left_regular(&self) -> Vec<Vec<S>> {
        let dim = self.space.dim();
        let size = 1usize << dim;
        let mut rows = vec![vec![S::zero(); size]; size];
        for col in 0..size {
            let basis = self.with(Multivector::blade(dim, col as Blade, S::one()));
            let p = self.product(&basis).expect("same space");
            for (b, c) in p.mv.terms() {
                rows[b as usize][col] = c.clone();
            }
        }
        rows
    }

    /// Inverse by a linear solve in the regular representation, or `xᵀ/c` when `xᵀx = c`
    /// is an exact nonzero scalar.
    pub fn inverse(&self) -> Result<Self> {
        if S::is_exact() {
            let t = self.transpose();
            let n = t.product(self)?;
            let c = n.mv.coeff(0);
            if !c.is_zero() && n.mv.terms().all(|(b, x)| b == 0 || x.is_zero()) {
                return Ok(t.scale(&(S::one() / c)));
            }
        }
        let dim = self.space.dim();
        let size = 1usize << dim;
        let mut rhs = vec![S::zero(); size];
        rhs[0] = S::one();
        let x = linalg::exact_solve(&self.left_regular(), &rhs).ok_or(Error::NotInvertible)?;
        let mut mv = Multivector::zero(dim);
        for (b, c) in x.into_iter().enumerate() {
            mv.add_term(b as Blade, c);
        }
        let inv = self.with(mv);
        if !S::is_exact() {
            let check = self.product(&inv)?.sub(&Self::one(self.space.clone()))?;
            let err = check.mv.terms().fold(0.0f64, |m, (_, c)| m.max(c.to_f64().abs()));
            if err > 1e-8 {
                return Err(Error::NotInvertible);
            }
        }
        Ok(inv)
    }

    /// Coefficient vector when the element lies in `W`.
    pub fn vector_part(&self) -> Vec<S> {
        (0..self.space.dim()).map(|i| self.mv.coeff(1 << i)).collect()
    }

    pub fn to_json(&self) -> CliffordJson {
        CliffordJson {
            gram: (0..self.space.dim())
                .map(|i| (0..self.space.dim()).map(|j| self.space.entry(i, j).to_decimal_string()).collect())
                .collect(),
            terms: self.mv.to_json(),
        }
    }

    pub fn from_json(json: &CliffordJson) -> Result<Self> {
        let dim = json.gram.len();
        let mut gram = Vec::with_capacity(dim * dim);
        for row in &json.gram {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
            for s in row {
                gram.push(S::parse_scalar(s)?);
            }
        }
        let space = Arc::new(BilinearSpace::new(dim, gram)?);
        let mv = Multivector::from_json(dim, &json.terms)?;
        Ok(CliffordElement { space, mv })
    }
}

/// Multivector JSON together with the gram matrix of the underlying space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliffordJson {
    pub gram: Vec<Vec<String>>,
    pub terms: Vec<TermJson>,
}

fn max_abs<S: Scalar>(mv: &Multivector<S>) -> f64 {
    mv.terms().fold(0.0f64, |m, (_, c)| m.max(c.to_f64().abs()))
}

/// Result of the twisted conjugation `y ↦ Π(g) y g⁻¹` restricted to `W`.
#[derive(Debug, Clone)]
pub struct GroupAction<S: Scalar> {
    pub is_member: bool,
    /// Column `j` is the image of `e_j`, row-major `dim × dim`. Present when `is_member`.
    pub matrix: Option<Vec<S>>,
}

pub fn clifford_group_action<S: Scalar>(g: &CliffordElement<S>, tol: Tolerance) -> Result<GroupAction<S>> {
    let dim = g.space.dim();
    let inv = g.inverse()?;
    let pg = g.parity();
    let scale = max_abs(&g.mv) * max_abs(&inv.mv);
    let mut m = vec![S::zero(); dim * dim];
    for j in 0..dim {
        let y = pg.product(&CliffordElement::generator(g.space.clone(), j))?.product(&inv)?;
        for (b, c) in y.mv.terms() {
            if grade(b) != 1 {
                let off = if S::is_exact() { !c.is_zero() } else { c.to_f64().abs() > tol.tau * scale.max(1.0) };
                if off {
                    return Ok(GroupAction { is_member: false, matrix: None });
                }
                continue;
            }
            m[top_bit(b) * dim + j] = c.clone();
        }
    }
    Ok(GroupAction { is_member: true, matrix: Some(m) })
}

/// Element of `Pin(W)`: `g^⊤g = norm_sign·1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PinElement<S: Scalar> {
    pub g: CliffordElement<S>,
    pub norm_sign: i8,
}

pub fn pin_normalize<S: Scalar>(g: &CliffordElement<S>, tol: Tolerance) -> Result<PinElement<S>> {
    let n = g.transpose().product(g)?;
    let c = n.mv.coeff(0);
    let rest = n.mv.sub(&Multivector::scalar(n.mv.dim(), c.clone()));
    let not_scalar = if S::is_exact() { !rest.is_zero() } else { max_abs(&rest) > tol.tau * c.to_f64().abs().max(1.0) };
    if not_scalar || c.is_zero() || (!S::is_exact() && c.to_f64().abs() <= tol.tau) {
        return Err(Error::NotInCliffordGroup("g^T g is not a nonzero scalar".into()));
    }
    let sign: i8 = if c.to_f64() > 0.0 { 1 } else { -1 };
    let abs = if sign > 0 { c } else { -c };
    let root = abs
        .sqrt_exact()
        .ok_or_else(|| Error::NotInCliffordGroup("normalization needs an irrational square root".into()))?;
    Ok(PinElement { g: g.scale(&(S::one() / root)), norm_sign: sign })
}

/// Reflection matrix `y ↦ y − 2⟨w,y⟩/⟨w,w⟩ w` for the form `gram`.
pub fn reflection_matrix(gram: &Mat, w: &[f64]) -> Mat {
    let w = nalgebra::DVector::from_column_slice(w);
    let gw = gram * &w;
    let q = w.dot(&gw);
    Mat::identity(w.len(), w.len()) - (&w * gw.transpose()) * (2.0 / q)
}

/// Writes `A = R_{w₁} ∘ … ∘ R_{w_k}` as a composition of reflections.
///
/// Works along a `G`-orthogonal eigenbasis of the gram matrix. A basis vector `x` with
/// `y = Ax ≠ x` is handled by the single reflection in `y − x` when that vector is
/// safely non-isotropic, and otherwise by the pair `R_x R_{x+y}`.
pub fn factor_into_reflections(gram: &Mat, a: &Mat, tol: Tolerance) -> Result<Vec<Vec<f64>>> {
    let n = gram.nrows();
    if a.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: n, got: a.nrows() });
    }
    let defect = (a.transpose() * gram * a - gram).norm();
    if defect > tol.tau * gram.norm().max(1.0) {
        return Err(Error::NotOrthogonal { defect });
    }
    let eig = gram.clone().symmetric_eigen();
    let scale = gram.norm().max(1.0);
    let mut cur = a.clone();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let x = eig.eigenvectors.column(i).into_owned();
        let y = &cur * &x;
        let d = &y - &x;
        if d.norm() <= tol.tau.sqrt() * 1e-3 {
            continue;
        }
        let qd = d.dot(&(gram * &d));
        if qd.abs() > 1e3 * tol.tau * scale * d.norm_squared().max(1.0) {
            let w: Vec<f64> = d.iter().copied().collect();
            cur = reflection_matrix(gram, &w) * cur;
            out.push(w);
        } else {
            let u: Vec<f64> = (&x + &y).iter().copied().collect();
            let xv: Vec<f64> = x.iter().copied().collect();
            let qu = (&x + &y).dot(&(gram * (&x + &y)));
            if qu.abs() <= 1e3 * tol.tau * scale {
                return Err(Error::ReflectionFailure);
            }
            cur = reflection_matrix(gram, &xv) * reflection_matrix(gram, &u) * cur;
            out.push(u);
            out.push(xv);
        }
    }
    let recomposed = out.iter().fold(Mat::identity(n, n), |m, w| m * reflection_matrix(gram, w));
    if (recomposed - a).norm() > 1e3 * tol.tau * a.norm().max(1.0) {
        return Err(Error::ReflectionFailure);
    }
    Ok(out)
}

/// `p = e₁f¹ ⋯ e_nfⁿ` for dual bases of transverse Lagrangians, `⟨e_i,f^j⟩ = δ_ij`.
pub fn projector_p<S: Scalar>(
    space: Arc<BilinearSpace<S>>,
    e: &[Vec<S>],
    f: &[Vec<S>],
    tol: Tolerance,
) -> Result<CliffordElement<S>> {
    if e.len() != f.len() || 2 * e.len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim() / 2, got: e.len() });
    }
    let mut defect = 0.0f64;
    let mut exact_ok = true;
    let mut check = |val: S, want: S| {
        let d = val - want;
        exact_ok &= d.is_zero();
        defect = defect.max(d.to_f64().abs());
    };
    for i in 0..e.len() {
        for j in 0..e.len() {
            let delta = if i == j { S::one() } else { S::zero() };
            check(space.pair(&e[i], &f[j]), delta);
            check(space.pair(&e[i], &e[j]), S::zero());
            check(space.pair(&f[i], &f[j]), S::zero());
        }
    }
    if (S::is_exact() && !exact_ok) || defect > tol.tau {
        return Err(Error::NotDualBases { defect });
    }
    let mut p = CliffordElement::one(space.clone());
    for (ei, fi) in e.iter().zip(f) {
        let ee = CliffordElement::vector(space.clone(), ei)?;
        let ff = CliffordElement::vector(space.clone(), fi)?;
        p = p.product(&ee)?.product(&ff)?;
    }
    Ok(p)
}

/// Properties of the projector `p`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProjectorReport {
    pub idempotent: bool,
    pub annihilated_by_e: bool,
    pub annihilates_f: bool,
    pub p_minus_one_in_left_ideal: bool,
}

impl ProjectorReport {
    pub fn all(&self) -> bool {
        self.idempotent && self.annihilated_by_e && self.annihilates_f && self.p_minus_one_in_left_ideal
    }
}

fn dense<S: Scalar>(x: &CliffordElement<S>) -> Vec<S> {
    let size = 1usize << x.space.dim();
    let mut v = vec![S::zero(); size];
    for (b, c) in x.mv.terms() {
        v[b as usize] = c.clone();
    }
    v
}

fn negligible<S: Scalar>(x: &CliffordElement<S>, tol: Tolerance) -> bool {
    if S::is_exact() {
        x.is_zero()
    } else {
        max_abs(&x.mv) <= tol.tau
    }
}

/// Checks `p² = p`, `e_i p = 0`, `p f^j = 0` and `p − 1 ∈ Cl(W)·E`.
///
/// Ideal membership is a rank comparison: `{m·e_i}` over all monomials `m` spans
/// `Cl(W)·E`, and `p − 1` lies in it iff appending it leaves the rank unchanged.
pub fn projector_properties<S: Scalar>(
    p: &CliffordElement<S>,
    e: &[Vec<S>],
    f: &[Vec<S>],
    tol: Tolerance,
) -> Result<ProjectorReport> {
    let space = p.space.clone();
    let idempotent = negligible(&p.product(p)?.sub(p)?, tol);
    let mut annihilated_by_e = true;
    let mut annihilates_f = true;
    let mut e_elems = Vec::new();
    for ei in e {
        let ee = CliffordElement::vector(space.clone(), ei)?;
        annihilated_by_e &= negligible(&ee.product(p)?, tol);
        e_elems.push(ee);
    }
    for fi in f {
        let ff = CliffordElement::vector(space.clone(), fi)?;
        annihilates_f &= negligible(&p.product(&ff)?, tol);
    }
    let dim = space.dim();
    let mut rows: Vec<Vec<S>> = Vec::new();
    for m in 0..(1u32 << dim) {
        let mono = CliffordElement::new(space.clone(), Multivector::blade(dim, m, S::one()))?;
        for ee in &e_elems {
            rows.push(dense(&mono.product(ee)?));
        }
    }
    let target = dense(&p.sub(&CliffordElement::one(space.clone()))?);
    let (r0, r1) = if S::is_exact() {
        let r0 = linalg::exact_rank(&rows);
        rows.push(target);
        (r0, linalg::exact_rank(&rows))
    } else {
        let to_mat = |rows: &[Vec<S>]| Mat::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j].to_f64());
        let r0 = linalg::rank(&to_mat(&rows), tol.tau);
        rows.push(target);
        (r0, linalg::rank(&to_mat(&rows), tol.tau))
    };
    Ok(ProjectorReport {
        idempotent,
        annihilated_by_e,
        annihilates_f,
        p_minus_one_in_left_ideal: r0 == r1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilinear::make_split_space;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn split(n: usize) -> Arc<BilinearSpace<Q>> {
        Arc::new(make_split_space(n))
    }

    fn el(space: &Arc<BilinearSpace<Q>>, terms: &[(Blade, i64)]) -> CliffordElement<Q> {
        let mut mv = Multivector::zero(space.dim());
        for &(b, c) in terms {
            mv.add_term(b, q(c, 1));
        }
        CliffordElement::new(space.clone(), mv).unwrap()
    }

    #[test]
    fn square_of_generator_is_half_the_norm() {
        let w = split(1);
        let e1 = CliffordElement::generator(w.clone(), 0);
        let e2 = CliffordElement::generator(w.clone(), 1);
        assert_eq!(e1.product(&e1).unwrap(), CliffordElement::scalar(w.clone(), q(1, 2)));
        assert_eq!(e2.product(&e2).unwrap(), CliffordElement::scalar(w.clone(), q(-1, 2)));
        let anti = e1.product(&e2).unwrap().add(&e2.product(&e1).unwrap()).unwrap();
        assert!(anti.is_zero());
        let e12 = e1.product(&e2).unwrap();
        assert_eq!(e12.product(&e12).unwrap(), CliffordElement::scalar(w, q(1, 4)));
    }

    #[test]
    fn non_orthogonal_gram_relations() {
        let gram = vec![q(0, 1), q(1, 1), q(1, 1), q(0, 1)];
        let w = Arc::new(BilinearSpace::new(2, gram).unwrap());
        let e = CliffordElement::generator(w.clone(), 0);
        let f = CliffordElement::generator(w.clone(), 1);
        assert!(e.product(&e).unwrap().is_zero());
        let anti = e.product(&f).unwrap().add(&f.product(&e).unwrap()).unwrap();
        assert_eq!(anti, CliffordElement::one(w.clone()));
        // f·e = 1 − e·f
        let fe = f.product(&e).unwrap();
        assert_eq!(fe, el(&w, &[(0, 1), (0b11, -1)]));
    }

    #[test]
    fn transpose_reverses_generators() {
        let w = split(1);
        let e12 = el(&w, &[(0b11, 1)]);
        assert_eq!(e12.transpose(), el(&w, &[(0b11, -1)]));
        let v = el(&w, &[(0b01, 3), (0b10, -2)]);
        assert_eq!(v.transpose(), v);
    }

    #[test]
    fn group_action_of_a_vector_is_its_reflection() {
        let w = split(1);
        let v = el(&w, &[(0b01, 2), (0b10, 1)]);
        let act = clifford_group_action(&v, Tolerance::default()).unwrap();
        assert!(act.is_member);
        // ⟨v,v⟩ = 3; R(y) = y − 2⟨v,y⟩/3·v with G = diag(1,−1)
        let m = act.matrix.unwrap();
        let want = [q(1, 1) - q(8, 3), q(-4, 3) * q(-1, 1), q(-4, 3), q(1, 1) + q(2, 3)];
        assert_eq!(m, want.to_vec());
        let one = CliffordElement::one(w.clone());
        let id = clifford_group_action(&one, Tolerance::default()).unwrap().matrix.unwrap();
        assert_eq!(id, vec![q(1, 1), q(0, 1), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn non_member_detected() {
        let w = split(1);
        let x = el(&w, &[(0, 1), (0b01, 1)]);
        // 1 + e₁ is invertible (e₁² = ½) but twisted conjugation leaves W
        let act = clifford_group_action(&x, Tolerance::default()).unwrap();
        assert!(!act.is_member);
        let iso = el(&w, &[(0b01, 1), (0b10, 1)]);
        assert_eq!(iso.inverse().unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn pin_normalization() {
        let w = split(2);
        let v = el(&w, &[(0b0001, 2), (0b0010, 2)]);
        // ⟨v,v⟩ = 8
        let p = pin_normalize(&v, Tolerance::default()).unwrap();
        assert_eq!(p.g, v.scale(&q(1, 2)));
        assert_eq!(p.norm_sign, 1);
        let t = el(&w, &[(0b0100, 2), (0b1000, 2)]);
        let p = pin_normalize(&t, Tolerance::default()).unwrap();
        assert_eq!(p.norm_sign, -1);
        let one = CliffordElement::one(w);
        assert_eq!(pin_normalize(&one, Tolerance::default()).unwrap().g, one);
    }

    #[test]
    fn reflections_recompose() {
        let mut rng = linalg::seeded_rng(11);
        let g = Mat::identity(3, 3);
        let a = linalg::random_rotation(3, &mut rng);
        let ws = factor_into_reflections(&g, &a, Tolerance::default()).unwrap();
        assert!(ws.len() <= 3);
        let r = ws.iter().fold(Mat::identity(3, 3), |m, w| m * reflection_matrix(&g, w));
        assert!((r - a).norm() < 1e-10);
        assert!(factor_into_reflections(&g, &g, Tolerance::default()).unwrap().is_empty());
        let refl = reflection_matrix(&g, &[1.0, 0.0, 0.0]);
        let ws = factor_into_reflections(&g, &refl, Tolerance::default()).unwrap();
        assert_eq!(ws.len(), 1);
        assert!(ws[0][1].abs() < 1e-12 && ws[0][2].abs() < 1e-12);
    }

    #[test]
    fn projector_in_split_plane() {
        let w = split(1);
        let e = vec![vec![q(1, 1), q(1, 1)]];
        let f = vec![vec![q(1, 2), q(-1, 2)]];
        let p = projector_p(w.clone(), &e, &f, Tolerance::default()).unwrap();
        let rep = projector_properties(&p, &e, &f, Tolerance::default()).unwrap();
        assert!(rep.all(), "{rep:?}");
        let bad = vec![vec![q(1, 1), q(-1, 1)]];
        assert!(matches!(projector_p(w, &e, &bad, Tolerance::default()), Err(Error::NotDualBases { .. })));
    }

    fn arb_element(n: usize) -> impl Strategy<Value = CliffordElement<Q>> {
        let size = 1usize << (2 * n);
        proptest::collection::vec(-3i64..=3, size).prop_map(move |cs| {
            let space = split(n);
            let terms: Vec<(Blade, i64)> = cs.iter().enumerate().map(|(b, &c)| (b as Blade, c)).collect();
            el(&space, &terms)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn product_is_associative(x in arb_element(2), y in arb_element(2), z in arb_element(2)) {
            let l = x.product(&y).unwrap().product(&z).unwrap();
            let r = x.product(&y.product(&z).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn transpose_is_an_involutive_anti_automorphism(x in arb_element(2), y in arb_element(2)) {
            prop_assert_eq!(x.transpose().transpose(), x.clone());
            let l = x.product(&y).unwrap().transpose();
            let r = y.transpose().product(&x.transpose()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn parity_is_an_automorphism(x in arb_element(2), y in arb_element(2)) {
            let l = x.product(&y).unwrap().parity();
            let r = x.parity().product(&y.parity()).unwrap();
            prop_assert_eq!(l, r);
            prop_assert_eq!(x.parity().parity(), x);
        }

        #[test]
        fn filtration_degree_is_subadditive(x in arb_element(2), y in arb_element(2)) {
            let p = x.product(&y).unwrap();
            if let (Some(dp), Some(dx), Some(dy)) = (p.degree(), x.degree(), y.degree()) {
                prop_assert!(dp <= dx + dy);
            }
        }
    }
}
