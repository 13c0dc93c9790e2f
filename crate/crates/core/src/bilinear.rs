//! Bilinear spaces, subspaces, and the Lagrangian Grassmannian of a split form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::scalar::{Scalar, Tolerance};

/// A finite-dimensional space with a symmetric nondegenerate bilinear form.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearSpace<S: Scalar> {
    dim: usize,
    gram: Vec<S>,
}

impl<S: Scalar> BilinearSpace<S> {
    /// `gram` is row-major `dim × dim`. Symmetry is checked exactly for rationals and
    /// within `1e-12` relative for floats; nondegeneracy by rank.
    pub fn new(dim: usize, gram: Vec<S>) -> Result<Self> {
        if gram.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: gram.len() });
        }
        let space = BilinearSpace { dim, gram };
        for i in 0..dim {
            for j in 0..i {
                let d = space.entry(i, j) - space.entry(j, i);
                let asym = if S::is_exact() { !d.is_zero() } else { d.to_f64().abs() > 1e-12 };
                if asym {
                    return Err(Error::Parse("gram matrix is not symmetric".into()));
                }
            }
        }
        let full_rank = if S::is_exact() {
            let rows: Vec<Vec<S>> = (0..dim).map(|i| space.gram[i * dim..(i + 1) * dim].to_vec()).collect();
            linalg::exact_rank(&rows) == dim
        } else {
            linalg::rank(&space.gram_f64(), 1e-12) == dim
        };
        if !full_rank {
            return Err(Error::Degenerate);
        }
        Ok(space)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> S {
        self.gram[i * self.dim + j].clone()
    }

    pub fn gram(&self) -> &[S] {
        &self.gram
    }

    pub fn gram_f64(&self) -> Mat {
        Mat::from_fn(self.dim, self.dim, |i, j| self.gram[i * self.dim + j].to_f64())
    }

    pub fn pair(&self, u: &[S], v: &[S]) -> S {
        let mut acc = S::zero();
        for i in 0..self.dim {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if !v[j].is_zero() {
                    acc = acc + u[i].clone() * self.entry(i, j) * v[j].clone();
                }
            }
        }
        acc
    }

    /// `(positive, negative)` counts of the eigenvalues of the gram matrix.
    pub fn signature(&self) -> (usize, usize) {
        let eig = self.gram_f64().symmetric_eigen().eigenvalues;
        let pos = eig.iter().filter(|x| **x > 0.0).count();
        (pos, self.dim - pos)
    }

    pub fn is_split(&self) -> bool {
        let (p, n) = self.signature();
        p == n
    }
}

/// `ℝ^{n,n}` with `⟨e_i, e_j⟩ = ±δ_ij`, `+` for `i ≤ n`.
pub fn make_split_space<S: Scalar>(n: usize) -> BilinearSpace<S> {
    assert!(n >= 1, "split space needs n >= 1");
    let d = 2 * n;
    let mut gram = vec![S::zero(); d * d];
    for i in 0..d {
        gram[i * d + i] = if i < n { S::one() } else { -S::one() };
    }
    BilinearSpace { dim: d, gram }
}

/// The doubled space `V ⊕ V*` with the pairing form; coordinates `(v, α)`.
pub fn doubled_gram(n: usize) -> Mat {
    let mut g = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        g[(i, n + i)] = 1.0;
        g[(n + i, i)] = 1.0;
    }
    g
}

/// A subspace of a float bilinear space, stored by a basis of column vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subspace {
    #[serde(with = "mat_rows")]
    pub gram: Mat,
    #[serde(with = "mat_rows")]
    pub basis: Mat,
}

impl Subspace {
    /// Wraps a basis; dependent columns are rejected.
    pub fn new(gram: Mat, basis: Mat, tol: Tolerance) -> Result<Self> {
        if basis.nrows() != gram.nrows() {
            return Err(Error::DimensionMismatch { expected: gram.nrows(), got: basis.nrows() });
        }
        if linalg::rank(&basis, tol.tau) != basis.ncols() {
            return Err(Error::Parse("subspace basis columns are dependent".into()));
        }
        Ok(Subspace { gram, basis })
    }

    /// Orthonormalized span of arbitrary (possibly dependent) spanning columns.
    pub fn span(gram: Mat, spanning: &Mat, tol: Tolerance) -> Self {
        let basis = linalg::column_basis(spanning, tol.tau);
        Subspace { gram, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Largest `|⟨v, w⟩|` over orthonormalized basis pairs.
    pub fn isotropy_defect(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let q = linalg::column_basis(&self.basis, 1e-14);
        (q.transpose() * &self.gram * &q).amax()
    }

    pub fn is_isotropic(&self, tol: Tolerance) -> bool {
        self.isotropy_defect() <= tol.tau
    }

    pub fn distance(&self, other: &Subspace) -> f64 {
        linalg::subspace_distance(&self.basis, &other.basis)
    }

    pub fn intersection_dim(&self, other: &Subspace, tol: Tolerance) -> usize {
        linalg::intersection_dim(&self.basis, &other.basis, tol.tau)
    }
}

/// True iff `s` is isotropic and of half the ambient dimension.
pub fn is_lagrangian(s: &Subspace, tol: Tolerance) -> bool {
    2 * s.dim() == s.ambient_dim() && s.is_isotropic(tol)
}

/// A Lagrangian subspace `E = E^⊥`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LagrangianSubspace(Subspace);

impl LagrangianSubspace {
    pub fn new(s: Subspace, tol: Tolerance) -> Result<Self> {
        if is_lagrangian(&s, tol) {
            Ok(LagrangianSubspace(s))
        } else {
            Err(Error::NotLagrangian)
        }
    }

    /// Accepts `s` without checking; callers guarantee the invariant.
    pub(crate) fn new_unchecked(s: Subspace) -> Self {
        LagrangianSubspace(s)
    }

    pub fn subspace(&self) -> &Subspace {
        &self.0
    }

    pub fn basis(&self) -> &Mat {
        &self.0.basis
    }

    pub fn half_dim(&self) -> usize {
        self.0.dim()
    }

    pub fn distance(&self, other: &LagrangianSubspace) -> f64 {
        self.0.distance(&other.0)
    }
}

/// `E_A = {(Av, v)} ⊂ ℝ^{n,n}`; `A` must be orthogonal within `tol`.
pub fn lagrangian_from_orthogonal(a: &Mat, tol: Tolerance) -> Result<LagrangianSubspace> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: a.ncols() });
    }
    let defect = (a.transpose() * a - Mat::identity(n, n)).amax();
    if defect > tol.tau {
        return Err(Error::NotOrthogonal { defect });
    }
    let basis = linalg::vstack(a, &Mat::identity(n, n));
    let gram = make_split_space::<f64>(n).gram_f64();
    Ok(LagrangianSubspace(Subspace { gram, basis }))
}

pub fn transverse(e: &LagrangianSubspace, f: &LagrangianSubspace, tol: Tolerance) -> bool {
    e.0.intersection_dim(&f.0, tol) == 0
}

/// Same connected component of `Lag(W)` iff `n + dim(E ∩ F)` is even.
pub fn same_component(e: &LagrangianSubspace, f: &LagrangianSubspace, tol: Tolerance) -> bool {
    (e.half_dim() + e.0.intersection_dim(&f.0, tol)).is_multiple_of(2)
}

/// Exact isotropy-and-dimension test on a rational basis (columns given as vectors).
pub fn is_lagrangian_exact<S: Scalar>(space: &BilinearSpace<S>, columns: &[Vec<S>]) -> bool {
    if 2 * columns.len() != space.dim() {
        return false;
    }
    let rows: Vec<Vec<S>> = columns.to_vec();
    if linalg::exact_rank(&rows) != columns.len() {
        return false;
    }
    columns
        .iter()
        .all(|u| columns.iter().all(|v| space.pair(u, v).is_zero()))
}

pub(crate) mod mat_rows {
    use super::Mat;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &Mat, s: S) -> Result<S::Ok, S::Error> {
        let rows = crate::linalg::to_rows(m);
        (m.nrows(), m.ncols(), rows).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Mat, D::Error> {
        let (r, c, rows): (usize, usize, Vec<Vec<f64>>) = Deserialize::deserialize(d)?;
        if rows.len() != r || rows.iter().any(|x| x.len() != c) {
            return Err(serde::de::Error::custom("matrix shape mismatch"));
        }
        Ok(Mat::from_fn(r, c, |i, j| rows[i][j]))
    }
}
