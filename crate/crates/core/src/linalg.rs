//! Dense linear algebra helpers: SVD-based rank and null spaces for floats,
//! fraction-exact Gaussian elimination for rationals, and seeded random matrices.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::scalar::Scalar;

pub type Mat = DMatrix<f64>;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Singular value decomposition `m = U diag(s) Vᵀ` with `s` descending.
///
/// One-sided Jacobi on the columns, after padding `m` with zero rows to at least square.
/// `U` is `nrows × k` and `V` is `ncols × ncols` (all right singular vectors), where
/// `k = ncols`; columns of `U` for zero singular values are zero.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Mat,
    pub s: Vec<f64>,
    pub v: Mat,
}

pub fn svd(m: &Mat) -> Svd {
    let (r, c) = m.shape();
    let rows = r.max(c);
    let mut a = Mat::zeros(rows, c);
    a.view_mut((0, 0), (r, c)).copy_from(m);
    let mut v = Mat::identity(c, c);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..c {
            for q in (p + 1)..c {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dot(&a.column(q));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                for (mat, n) in [(&mut a, rows), (&mut v, c)] {
                    for i in 0..n {
                        let (x, y) = (mat[(i, p)], mat[(i, q)]);
                        mat[(i, p)] = cs * x - sn * y;
                        mat[(i, q)] = sn * x + cs * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(f64, usize)> = (0..c).map(|j| (a.column(j).norm(), j)).collect();
    order.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut u = Mat::zeros(r, c);
    let mut vs = Mat::zeros(c, c);
    let mut s = Vec::with_capacity(c);
    for (k, &(sv, j)) in order.iter().enumerate() {
        s.push(sv);
        vs.set_column(k, &v.column(j));
        if sv > 0.0 {
            let col = a.column(j).rows(0, r) / sv;
            u.set_column(k, &col);
        }
    }
    Svd { u, s, v: vs }
}

/// Moore–Penrose inverse, discarding singular values `<= eps` (absolute).
pub fn pseudo_inverse(m: &Mat, eps: f64) -> Mat {
    let d = svd(m);
    let mut out = Mat::zeros(m.ncols(), m.nrows());
    for (k, &sv) in d.s.iter().enumerate() {
        if sv > eps {
            out += d.v.column(k) * d.u.column(k).transpose() / sv;
        }
    }
    out
}

/// Singular values padded to `ncols` entries, together with right singular vectors
/// spanning all of the domain (columns of the returned matrix).
fn full_svd(m: &Mat) -> (Vec<f64>, Mat) {
    let d = svd(m);
    (d.s, d.v)
}

/// Numerical rank with the threshold `rel_tol · σ_max`.
pub fn rank(m: &Mat, rel_tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = svd(m).s;
    let smax = sv.iter().fold(0.0f64, |a, b| a.max(*b));
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > rel_tol * smax).count()
}

/// Null space decision from singular values.
#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Orthonormal basis, one column per null direction.
    pub basis: Mat,
    /// Ratio between the smallest retained and the largest discarded singular value
    /// (infinite when nothing is discarded or everything is).
    pub gap: f64,
}

/// Null space of `m` keeping singular values below `rel_tol · σ_max`.
pub fn null_space(m: &Mat, rel_tol: f64) -> NullSpace {
    let c = m.ncols();
    if m.nrows() == 0 || m.iter().all(|x| *x == 0.0) {
        return NullSpace { basis: Mat::identity(c, c), gap: f64::INFINITY };
    }
    let (s, v) = full_svd(m);
    let smax = s[0];
    let keep = s.iter().filter(|x| **x > rel_tol * smax).count();
    let gap = if keep == 0 || keep == c || s[keep] == 0.0 {
        f64::INFINITY
    } else {
        s[keep - 1] / s[keep]
    };
    let basis = v.columns(keep, c - keep).into_owned();
    NullSpace { basis, gap }
}

/// Orthonormal basis of the column span.
pub fn column_basis(m: &Mat, rel_tol: f64) -> Mat {
    if m.ncols() == 0 {
        return Mat::zeros(m.nrows(), 0);
    }
    let d = svd(m);
    let smax = d.s.first().copied().unwrap_or(0.0);
    let keep = d.s.iter().filter(|&&x| smax > 0.0 && x > rel_tol * smax).count();
    d.u.columns(0, keep).into_owned()
}

/// Orthogonal projector onto the column span of `basis`, `B (BᵀB)⁻¹ Bᵀ`.
pub fn projector(basis: &Mat) -> Mat {
    if basis.ncols() == 0 {
        return Mat::zeros(basis.nrows(), basis.nrows());
    }
    let gram = basis.transpose() * basis;
    let inv = gram.try_inverse().expect("basis columns must be independent");
    basis * inv * basis.transpose()
}

/// Frobenius distance between orthogonal projectors of two column spans.
pub fn subspace_distance(a: &Mat, b: &Mat) -> f64 {
    (projector(a) - projector(b)).norm()
}

pub fn hstack(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = Mat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((0, a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn vstack(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.ncols(), b.ncols());
    let mut out = Mat::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), 0), b.shape()).copy_from(b);
    out
}

/// Dimension of the intersection of two column spans.
pub fn intersection_dim(a: &Mat, b: &Mat, rel_tol: f64) -> usize {
    let ra = rank(a, rel_tol);
    let rb = rank(b, rel_tol);
    let rab = rank(&hstack(a, b), rel_tol);
    ra + rb - rab
}

pub fn gaussian_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> Mat {
    Mat::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the sign of R's
/// diagonal absorbed into Q.
pub fn random_orthogonal(n: usize, rng: &mut impl Rng) -> Mat {
    let g = gaussian_matrix(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let col = -q.column(j);
            q.set_column(j, &col);
        }
    }
    q
}

/// Random rotation (determinant +1).
pub fn random_rotation(n: usize, rng: &mut impl Rng) -> Mat {
    let mut q = random_orthogonal(n, rng);
    if q.determinant() < 0.0 {
        let col = -q.column(0);
        q.set_column(0, &col);
    }
    q
}

pub fn random_antisymmetric(n: usize, rng: &mut impl Rng) -> Mat {
    let g = gaussian_matrix(n, n, rng);
    (&g - g.transpose()) * 0.5
}

/// Flatten a matrix row-major.
pub fn row_major(m: &Mat) -> Vec<f64> {
    let mut v = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            v.push(m[(i, j)]);
        }
    }
    v
}

pub fn to_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

pub fn from_rows(rows: &[Vec<f64>]) -> Option<Mat> {
    let r = rows.len();
    let c = rows.first().map_or(0, |x| x.len());
    if rows.iter().any(|x| x.len() != c) {
        return None;
    }
    Some(Mat::from_fn(r, c, |i, j| rows[i][j]))
}

/// Gauss–Jordan row reduction with magnitude pivoting; exact over rationals.
/// Returns the reduced rows and pivot columns.
pub fn exact_row_reduce<S: Scalar>(rows: &[Vec<S>]) -> (Vec<Vec<S>>, Vec<usize>) {
    let mut a: Vec<Vec<S>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.to_f64().abs()));
    for c in 0..ncols {
        let Some(p) = (r..a.len())
            .filter(|&i| !a[i][c].negligible(scale))
            .max_by(|&i, &j| a[i][c].to_f64().abs().partial_cmp(&a[j][c].to_f64().abs()).unwrap())
        else {
            continue;
        };
        a.swap(r, p);
        let inv = S::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].negligible(scale) {
                let f = a[i][c].clone();
                for j in c..ncols {
                    let v = a[i][j].clone() - f.clone() * a[r][j].clone();
                    a[i][j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (a, pivots)
}

/// Solve `A x = b` by reduction of the augmented system.
pub fn exact_solve<S: Scalar>(a: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = a.first().map_or(0, |r| r.len());
    let aug: Vec<Vec<S>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = exact_row_reduce(&aug);
    if pivots.contains(&n) || pivots.len() < n {
        return None;
    }
    let mut x = vec![S::zero(); n];
    for (row, &p) in red.iter().zip(&pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

pub fn exact_rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    exact_row_reduce(rows).1.len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows.
pub fn exact_null_space<S: Scalar>(rows: &[Vec<S>], ncols: usize) -> Vec<Vec<S>> {
    let (red, pivots) = exact_row_reduce(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![S::zero(); ncols];
            x[f] = S::one();
            for (row, &p) in red.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}
