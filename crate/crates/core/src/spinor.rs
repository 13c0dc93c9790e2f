//! Spinor modules of `𝕍 = V ⊕ V*`: forms `∧V*` (contravariant) and multivectors
//! `∧V` (covariant), pure spinors and their null spaces, and the Chevalley pairing.
//!
//! Elements of `𝕍` are coordinate vectors `(v, α)` of length `2n`.

use serde::{Deserialize, Serialize};

use crate::bilinear::{doubled_gram, LagrangianSubspace, Subspace};
use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::multivector::{Blade, Multivector, TermJson};
use crate::scalar::{Scalar, Tolerance};

/// Gap between retained and discarded singular values required to call a spinor pure.
pub const PURITY_GAP: f64 = 1e6;

/// `𝕍 = V ⊕ V*` with `⟨v⊕α, v'⊕α'⟩ = α(v') + α'(v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubledSpace {
    pub n: usize,
}

impl DoubledSpace {
    pub fn new(n: usize) -> Self {
        DoubledSpace { n }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn gram(&self) -> Mat {
        doubled_gram(self.n)
    }

    pub fn pair<S: Scalar>(&self, w1: &[S], w2: &[S]) -> S {
        let n = self.n;
        let mut s = S::zero();
        for i in 0..n {
            s = s + w1[n + i].clone() * w2[i].clone() + w2[n + i].clone() * w1[i].clone();
        }
        s
    }

    /// `V ⊂ 𝕍`.
    pub fn v_lagrangian(&self) -> LagrangianSubspace {
        let mut b = Mat::zeros(2 * self.n, self.n);
        b.view_mut((0, 0), (self.n, self.n)).fill_with_identity();
        LagrangianSubspace::new_unchecked(Subspace { gram: self.gram(), basis: b })
    }

    /// `V* ⊂ 𝕍`.
    pub fn dual_lagrangian(&self) -> LagrangianSubspace {
        let mut b = Mat::zeros(2 * self.n, self.n);
        b.view_mut((self.n, 0), (self.n, self.n)).fill_with_identity();
        LagrangianSubspace::new_unchecked(Subspace { gram: self.gram(), basis: b })
    }

    /// Image of `ε_j ∈ ℝ^{n,n}` under the isometry `ε_i ↦ v_i + ½v^i`, `ε_{n+i} ↦ v_i − ½v^i`.
    pub fn split_isometry<S: Scalar>(&self) -> Vec<Vec<S>> {
        let n = self.n;
        let half = S::from_ratio(1, 2);
        (0..2 * n)
            .map(|j| {
                let mut w = vec![S::zero(); 2 * n];
                let i = j % n;
                w[i] = S::one();
                w[n + i] = if j < n { half.clone() } else { -half.clone() };
                w
            })
            .collect()
    }

    /// `E_A = {(Av, v)} ⊂ ℝ^{n,n}` carried into `𝕍`, spanned by `((A+I)v, ½(A−I)v)`.
    pub fn lagrangian_from_orthogonal(&self, a: &Mat, tol: Tolerance) -> Result<LagrangianSubspace> {
        let n = self.n;
        let defect = (a.transpose() * a - Mat::identity(n, n)).norm();
        if a.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: n, got: a.nrows() });
        }
        if defect > tol.tau {
            return Err(Error::NotOrthogonal { defect });
        }
        let id = Mat::identity(n, n);
        let basis = linalg::vstack(&(a + &id), &((a - &id) * 0.5));
        LagrangianSubspace::new(Subspace::new(self.gram(), basis, tol)?, tol)
    }
}

/// `ρ(v⊕α)φ = ι_v φ + α ∧ φ` on `∧V*`.
pub fn rho_contravariant<S: Scalar>(w: &[S], phi: &Multivector<S>) -> Multivector<S> {
    let n = phi.dim();
    assert_eq!(w.len(), 2 * n);
    phi.contract_vector(&w[..n]).add(&Multivector::vector(&w[n..]).wedge(phi))
}

/// `ρ(v⊕α)χ = v ∧ χ + ι_α χ` on `∧V`.
pub fn rho_covariant<S: Scalar>(w: &[S], chi: &Multivector<S>) -> Multivector<S> {
    let n = chi.dim();
    assert_eq!(w.len(), 2 * n);
    Multivector::vector(&w[..n]).wedge(chi).add(&chi.contract_vector(&w[n..]))
}

/// Exchanges the two halves of an element of `𝕍`, turning the covariant action into
/// the contravariant one.
pub fn swap_halves<S: Scalar>(w: &[S]) -> Vec<S> {
    let n = w.len() / 2;
    w[n..].iter().chain(&w[..n]).cloned().collect()
}

fn dense<S: Scalar>(x: &Multivector<S>) -> Vec<S> {
    let mut v = vec![S::zero(); 1usize << x.dim()];
    for (b, c) in x.terms() {
        v[b as usize] = c.clone();
    }
    v
}

fn from_dense<S: Scalar>(dim: usize, v: &[S]) -> Multivector<S> {
    let mut m = Multivector::zero(dim);
    for (b, c) in v.iter().enumerate() {
        m.add_term(b as Blade, c.clone());
    }
    m
}

/// Matrix of `ρ(w)` on `∧V*` in the blade basis; row-major `2ⁿ × 2ⁿ`.
pub fn rho_matrix<S: Scalar>(w: &[S], n: usize) -> Vec<Vec<S>> {
    let size = 1usize << n;
    let mut rows = vec![vec![S::zero(); size]; size];
    for col in 0..size {
        let img = rho_contravariant(w, &Multivector::blade(n, col as Blade, S::one()));
        for (b, c) in img.terms() {
            rows[b as usize][col] = c.clone();
        }
    }
    rows
}

fn mat_mul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![S::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !bk[j].is_zero() {
                    out[i][j] = out[i][j].clone() + a[i][k].clone() * bk[j].clone();
                }
            }
        }
    }
    out
}

/// Rank of the extension of `ρ` to `Cl(ℝ^{n,n}) → End(∧V*)`, computed on all `4ⁿ`
/// ordered monomials of the generators `ε_j`.
pub fn clifford_rho_rank<S: Scalar>(n: usize) -> usize {
    let gens: Vec<Vec<Vec<S>>> =
        DoubledSpace::new(n).split_isometry::<S>().iter().map(|w| rho_matrix(w, n)).collect();
    let size = 1usize << n;
    let identity: Vec<Vec<S>> = (0..size)
        .map(|i| (0..size).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    let mut rows = Vec::with_capacity(1 << (2 * n));
    for mono in 0u32..(1 << (2 * n)) {
        let mut m = identity.clone();
        for j in 0..2 * n {
            if mono & (1 << j) != 0 {
                m = mat_mul(&m, &gens[j]);
            }
        }
        rows.push(m.into_iter().flatten().collect::<Vec<S>>());
    }
    linalg::exact_rank(&rows)
}

fn action_columns<S: Scalar>(phi: &Multivector<S>) -> Vec<Vec<S>> {
    let n = phi.dim();
    (0..2 * n)
        .map(|k| {
            let mut w = vec![S::zero(); 2 * n];
            w[k] = S::one();
            dense(&rho_contravariant(&w, phi))
        })
        .collect()
}

/// Basis of `N_φ = {w : ρ(w)φ = 0}` by an exact solve.
pub fn null_space_exact<S: Scalar>(phi: &Multivector<S>) -> Result<Vec<Vec<S>>> {
    if phi.is_zero() {
        return Err(Error::ZeroSpinor);
    }
    let cols = action_columns(phi);
    let rows: Vec<Vec<S>> = (0..cols[0].len()).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    Ok(linalg::exact_null_space(&rows, 2 * phi.dim()))
}

/// Basis of the forms fixed by `E`: `{φ ∈ ∧V* : ρ(w)φ = 0 for all w ∈ E}`.
pub fn fixed_line<S: Scalar>(e: &[Vec<S>], n: usize) -> Vec<Multivector<S>> {
    let mut rows: Vec<Vec<S>> = Vec::new();
    for w in e {
        rows.extend(rho_matrix(w, n));
    }
    linalg::exact_null_space(&rows, 1 << n).into_iter().map(|v| from_dense(n, &v)).collect()
}

/// Null space of a float spinor with its singular-value gap.
#[derive(Debug, Clone)]
pub struct NullSpaceResult {
    pub subspace: Subspace,
    pub is_pure: bool,
    pub gap: f64,
}

pub fn null_space(phi: &Multivector<f64>, tol: Tolerance) -> Result<NullSpaceResult> {
    if phi.max_abs() == 0.0 {
        return Err(Error::ZeroSpinor);
    }
    let n = phi.dim();
    let cols = action_columns(phi);
    let m = Mat::from_fn(1 << n, 2 * n, |r, c| cols[c][r]);
    let ns = linalg::null_space(&m, tol.tau);
    let subspace = Subspace::new(doubled_gram(n), ns.basis, tol)?;
    debug_assert!(subspace.isotropy_defect() <= 1e3 * tol.tau.sqrt());
    let is_pure = subspace.dim() == n && ns.gap > PURITY_GAP;
    Ok(NullSpaceResult { subspace, is_pure, gap: ns.gap })
}

/// Contravariant spinor together with its Lagrangian null space.
#[derive(Debug, Clone)]
pub struct PureSpinor {
    pub form: Multivector<f64>,
    pub null_space: LagrangianSubspace,
    pub gap: f64,
}

impl PureSpinor {
    pub fn new(form: Multivector<f64>, tol: Tolerance) -> Result<Self> {
        let ns = null_space(&form, tol)?;
        if !ns.is_pure {
            return Err(Error::NotLagrangian);
        }
        Ok(PureSpinor { form, null_space: LagrangianSubspace::new_unchecked(ns.subspace), gap: ns.gap })
    }

    pub fn n(&self) -> usize {
        self.form.dim()
    }

    pub fn to_json(&self) -> PureSpinorJson {
        PureSpinorJson {
            n: self.n(),
            form: self.form.to_json(),
            null_space: linalg::to_rows(self.null_space.basis()),
        }
    }

    pub fn from_json(json: &PureSpinorJson, tol: Tolerance) -> Result<Self> {
        Self::new(Multivector::from_json(json.n, &json.form)?, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureSpinorJson {
    pub n: usize,
    pub form: Vec<TermJson>,
    pub null_space: Vec<Vec<f64>>,
}

/// Range, 2-form and kernel of a Lagrangian `E ⊂ V ⊕ V*`.
#[derive(Debug, Clone)]
pub struct GraphTwoForm {
    /// Orthonormal basis of `S = ran(E) ⊂ V`, one column per vector.
    pub range: Mat,
    /// `ω_S(s_a, s_b)` on the basis of `range`.
    pub omega: Mat,
    /// Basis of `ker ω_S = {v : (v, 0) ∈ E}`.
    pub kernel: Mat,
}

impl GraphTwoForm {
    /// `ω_S` extended by zero on `S^⊥`, as a matrix on `V`.
    pub fn extended(&self) -> Mat {
        &self.range * &self.omega * self.range.transpose()
    }

    /// Orthonormal basis of `ann(S)`.
    pub fn annihilator(&self) -> Mat {
        let n = self.range.nrows();
        if self.range.ncols() == 0 {
            return Mat::identity(n, n);
        }
        linalg::null_space(&self.range.transpose(), 1e-12).basis
    }
}

fn split_blocks(e: &Mat) -> (Mat, Mat) {
    let n = e.nrows() / 2;
    (e.rows(0, n).into_owned(), e.rows(n, n).into_owned())
}

pub fn graph_two_form_of(e: &LagrangianSubspace, tol: Tolerance) -> GraphTwoForm {
    let (x, y) = split_blocks(e.basis());
    let range = linalg::column_basis(&x, tol.tau);
    let k = range.ncols();
    let pinv = linalg::pseudo_inverse(&x, tol.tau);
    let lifts = &y * (&pinv * &range);
    let raw = lifts.transpose() * &range;
    let omega = (&raw - raw.transpose()) * 0.5;
    let ker = linalg::null_space(&y, tol.tau).basis;
    let kernel = linalg::column_basis(&(&x * ker), tol.tau);
    debug_assert_eq!(omega.nrows(), k);
    GraphTwoForm { range, omega, kernel }
}

/// `Σ_{i<j} m_ij e^i ∧ e^j`.
pub fn two_form_of_matrix(m: &Mat) -> Multivector<f64> {
    Multivector::two_form(m.nrows(), &linalg::row_major(m))
}

/// `β₁ ∧ … ∧ β_k` for the columns of `m`.
pub fn wedge_columns(m: &Mat) -> Multivector<f64> {
    let mut out = Multivector::one(m.nrows());
    for j in 0..m.ncols() {
        out = out.wedge(&Multivector::vector(&m.column(j).iter().copied().collect::<Vec<_>>()));
    }
    out
}

/// `φ = e^{−ω_S} ∧ μ`, with `μ` the wedge of an orthonormal basis of `ann(ran E)` times
/// `orientation`.
pub fn spinor_of_lagrangian(e: &LagrangianSubspace, orientation: f64, tol: Tolerance) -> Result<PureSpinor> {
    let g = graph_two_form_of(e, tol);
    let mu = wedge_columns(&g.annihilator()).scale(&orientation);
    let form = two_form_of_matrix(&g.extended()).neg().exp_wedge().wedge(&mu);
    Ok(PureSpinor { form, null_space: e.clone(), gap: f64::INFINITY })
}

/// Top coefficient of `φ^⊤ ∧ ψ`.
pub fn chevalley_pairing<S: Scalar>(phi: &Multivector<S>, psi: &Multivector<S>) -> S {
    phi.reversal().wedge(psi).top_coefficient()
}

pub fn transversality_by_pairing(phi: &PureSpinor, psi: &PureSpinor, threshold: f64) -> bool {
    chevalley_pairing(&phi.form, &psi.form).abs() > threshold
}

/// Algebra map `∧V → ∧V'` induced by `A: V → V'`.
pub fn pushforward(a: &Mat, chi: &Multivector<f64>) -> Multivector<f64> {
    chi.induced(a)
}

/// Algebra map `∧V'* → ∧V*` induced by the transpose of `A: V → V'`.
pub fn pullback(a: &Mat, phi: &Multivector<f64>) -> Multivector<f64> {
    phi.induced(&a.transpose())
}

/// `χ ↦ ι(χ)μ` for the standard volume form `μ = e¹ ∧ … ∧ eⁿ`, with
/// `ι(v₁∧…∧v_k) = ι(v₁)∘…∘ι(v_k)`. Sends covariant null spaces to contravariant ones.
pub fn star<S: Scalar>(chi: &Multivector<S>) -> Multivector<S> {
    let n = chi.dim();
    let mu = Multivector::volume(n);
    let mut out = Multivector::zero(n);
    for (b, c) in chi.terms() {
        let mut acc = mu.clone();
        for i in crate::multivector::blade_indices(b).into_iter().rev() {
            acc = acc.contract(i);
        }
        out = out.add(&acc.scale(c));
    }
    out
}

/// Null space of a covariant spinor `χ ∈ ∧V`.
pub fn covariant_null_space(chi: &Multivector<f64>, tol: Tolerance) -> Result<NullSpaceResult> {
    if chi.max_abs() == 0.0 {
        return Err(Error::ZeroSpinor);
    }
    let n = chi.dim();
    let m = Mat::from_fn(1 << n, 2 * n, |r, c| {
        let mut w = vec![0.0; 2 * n];
        w[c] = 1.0;
        rho_covariant(&w, chi).coeff(r as Blade)
    });
    let ns = linalg::null_space(&m, tol.tau);
    let subspace = Subspace::new(doubled_gram(n), ns.basis, tol)?;
    let is_pure = subspace.dim() == n && ns.gap > PURITY_GAP;
    Ok(NullSpaceResult { subspace, is_pure, gap: ns.gap })
}

/// Covariant pure spinor with null space `E`: the contravariant construction applied
/// to `E` with its halves exchanged.
pub fn covariant_spinor_of_lagrangian(e: &LagrangianSubspace, tol: Tolerance) -> Result<Multivector<f64>> {
    let n = e.half_dim();
    let b = e.basis();
    let swapped = linalg::vstack(&b.rows(n, n).into_owned(), &b.rows(0, n).into_owned());
    let e2 = LagrangianSubspace::new_unchecked(Subspace { gram: doubled_gram(n), basis: swapped });
    Ok(spinor_of_lagrangian(&e2, 1.0, tol)?.form)
}

/// Componentwise evaluation `Σ_i β_i(v_i)` used by the duality pairing `⟨A*ψ′, χ⟩` of
/// forms against multivectors on the same blade basis.
pub fn dual_pairing(phi: &Multivector<f64>, chi: &Multivector<f64>) -> f64 {
    phi.terms().map(|(b, c)| c * chi.coeff(b)).sum()
}
