//! Matrix Lie group models with a fixed basis `ξ₁…ξ_d` of the Lie algebra.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Mat;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Su2,
    So3,
    Su3,
    /// `𝔨* ⋊ K` for `K = SU(2)`, coadjoint action, pairing form.
    CoadjointSu2,
    /// The abelian torus `U(1)²`.
    Torus,
}

impl ModelKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "su2" => Ok(ModelKind::Su2),
            "so3" => Ok(ModelKind::So3),
            "su3" => Ok(ModelKind::Su3),
            "coadjoint-su2" | "ksu2" => Ok(ModelKind::CoadjointSu2),
            "torus" | "u1^2" => Ok(ModelKind::Torus),
            other => Err(Error::Parse(format!("unknown group '{other}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Su2 => "su2",
            ModelKind::So3 => "so3",
            ModelKind::Su3 => "su3",
            ModelKind::CoadjointSu2 => "coadjoint-su2",
            ModelKind::Torus => "torus",
        }
    }
}

/// A matrix group with invariant form `B`.
#[derive(Debug, Clone)]
pub struct GroupModel {
    pub kind: ModelKind,
    generators: Vec<CMat>,
    /// `[ξ_i, ξ_j] = Σ_k c[(i·d + j)·d + k] ξ_k`.
    structure: Vec<f64>,
    b: Mat,
    coord_pinv: Mat,
    /// For `G × G`, the factor `G`.
    factor: Option<Box<GroupModel>>,
}

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

fn pauli() -> [CMat; 3] {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        CMat::from_row_slice(2, 2, &[z, o, o, z]),
        CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

fn su2_generators() -> Vec<CMat> {
    pauli().iter().map(|s| s * c(0.0, 0.5)).collect()
}

fn so3_generators() -> Vec<CMat> {
    // (L_k)_{ij} = −ε_{kij}
    (0..3).map(|k| CMat::from_fn(3, 3, |i, j| c(-eps_kij(k, i, j), 0.0))).collect()
}

fn eps_kij(k: usize, i: usize, j: usize) -> f64 {
    if k == i || i == j || k == j {
        0.0
    } else if (k + 1) % 3 == i && (i + 1) % 3 == j {
        1.0
    } else {
        -1.0
    }
}

fn gell_mann() -> Vec<CMat> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let s3 = 1.0 / 3f64.sqrt();
    let m = |v: [C64; 9]| CMat::from_row_slice(3, 3, &v);
    vec![
        m([z, o, z, o, z, z, z, z, z]),
        m([z, -i, z, i, z, z, z, z, z]),
        m([o, z, z, z, -o, z, z, z, z]),
        m([z, z, o, z, z, z, o, z, z]),
        m([z, z, -i, z, z, z, i, z, z]),
        m([z, z, z, z, z, o, z, o, z]),
        m([z, z, z, z, z, -i, z, i, z]),
        m([o * s3, z, z, z, o * s3, z, z, z, o * (-2.0 * s3)]),
    ]
}

/// Block `diag(k, [[ad-part, translation], [0, 0]])` embedding of `𝔨 ⋉ 𝔨*` in `6 × 6`
/// complex matrices: the `k` block is `2 × 2`, the affine block `4 × 4`.
fn coadjoint_generators() -> Vec<CMat> {
    let k = su2_generators();
    let ad = su2_ad_matrices();
    let mut out = Vec::new();
    for a in 0..3 {
        let mut m = CMat::zeros(6, 6);
        m.view_mut((0, 0), (2, 2)).copy_from(&k[a]);
        for r in 0..3 {
            for s in 0..3 {
                m[(2 + r, 2 + s)] = c(ad[a][(r, s)], 0.0);
            }
        }
        out.push(m);
    }
    for a in 0..3 {
        let mut m = CMat::zeros(6, 6);
        m[(2 + a, 5)] = c(1.0, 0.0);
        out.push(m);
    }
    out
}

fn su2_ad_matrices() -> Vec<Mat> {
    (0..3)
        .map(|i| Mat::from_fn(3, 3, |k, j| -eps_kij(i, j, k)))
        .collect()
}

fn real_embedding(m: &CMat) -> Vec<f64> {
    m.iter().map(|z| z.re).chain(m.iter().map(|z| z.im)).collect()
}

impl GroupModel {
    pub fn new(kind: ModelKind) -> Self {
        let (generators, b) = match kind {
            ModelKind::Su2 => (su2_generators(), Mat::identity(3, 3)),
            ModelKind::So3 => (so3_generators(), Mat::identity(3, 3)),
            ModelKind::Su3 => (gell_mann().iter().map(|l| l * c(0.0, 0.5)).collect(), Mat::identity(8, 8)),
            ModelKind::CoadjointSu2 => {
                let mut b = Mat::zeros(6, 6);
                b.view_mut((0, 3), (3, 3)).fill_with_identity();
                b.view_mut((3, 0), (3, 3)).fill_with_identity();
                (coadjoint_generators(), b)
            }
            ModelKind::Torus => {
                let gens = (0..2)
                    .map(|k| CMat::from_fn(2, 2, |i, j| if i == j && i == k { c(0.0, 1.0) } else { c(0.0, 0.0) }))
                    .collect();
                (gens, Mat::identity(2, 2))
            }
        };
        Self::from_parts(kind, generators, b, None)
    }

    fn from_parts(kind: ModelKind, generators: Vec<CMat>, b: Mat, factor: Option<Box<GroupModel>>) -> Self {
        let d = generators.len();
        let emb = Mat::from_fn(2 * generators[0].len(), d, |r, j| real_embedding(&generators[j])[r]);
        let coord_pinv = crate::linalg::pseudo_inverse(&emb, 1e-12);
        let mut model = GroupModel { kind, generators, structure: vec![0.0; d * d * d], b, coord_pinv, factor };
        for i in 0..d {
            for j in 0..d {
                let br = &model.generators[i] * &model.generators[j] - &model.generators[j] * &model.generators[i];
                let cs = model.coords(&br);
                for k in 0..d {
                    model.structure[(i * d + j) * d + k] = cs[k];
                }
            }
        }
        model
    }

    pub fn su2() -> Self {
        Self::new(ModelKind::Su2)
    }

    /// `G × G` with block-diagonal elements and `B ⊕ B`.
    pub fn square(&self) -> Self {
        let n = self.generators[0].nrows();
        let d = self.dim();
        let mut gens = Vec::with_capacity(2 * d);
        for off in [0, n] {
            for g in &self.generators {
                let mut m = CMat::zeros(2 * n, 2 * n);
                m.view_mut((off, off), (n, n)).copy_from(g);
                gens.push(m);
            }
        }
        let mut b = Mat::zeros(2 * d, 2 * d);
        b.view_mut((0, 0), (d, d)).copy_from(&self.b);
        b.view_mut((d, d), (d, d)).copy_from(&self.b);
        Self::from_parts(self.kind, gens, b, Some(Box::new(self.clone())))
    }

    /// The factor model of `G × G`.
    pub fn factor(&self) -> Option<&GroupModel> {
        self.factor.as_deref()
    }

    /// `(a, b) ↦ diag(a, b)`.
    pub fn join(a: &CMat, b: &CMat) -> CMat {
        let n = a.nrows();
        let mut m = CMat::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(a);
        m.view_mut((n, n), (n, n)).copy_from(b);
        m
    }

    /// Inverse of [`GroupModel::join`].
    pub fn split(g: &CMat) -> (CMat, CMat) {
        let n = g.nrows() / 2;
        (g.view((0, 0), (n, n)).into_owned(), g.view((n, n), (n, n)).into_owned())
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn b(&self) -> &Mat {
        &self.b
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        let d = self.dim();
        self.structure[(i * d + j) * d + k]
    }

    /// Whether `Ad` lifts to a homomorphism into `Pin(𝔤)`, so that `ψ` has a global sign.
    pub fn liftable(&self) -> bool {
        self.kind != ModelKind::So3
    }

    pub fn generator(&self, i: usize) -> &CMat {
        &self.generators[i]
    }

    /// `Σ ξ_i X_i`.
    pub fn algebra_element(&self, xi: &[f64]) -> CMat {
        let n = self.generators[0].nrows();
        let mut m = CMat::zeros(n, n);
        for (x, g) in xi.iter().zip(&self.generators) {
            m += g * c(*x, 0.0);
        }
        m
    }

    /// Coordinates of a Lie algebra element given as a matrix.
    pub fn coords(&self, m: &CMat) -> Vec<f64> {
        let v = DVector::from_vec(real_embedding(m));
        (&self.coord_pinv * v).iter().copied().collect()
    }

    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; d];
        for i in 0..d {
            for j in 0..d {
                let xy = x[i] * y[j];
                if xy != 0.0 {
                    for (k, o) in out.iter_mut().enumerate() {
                        *o += xy * self.structure[(i * d + j) * d + k];
                    }
                }
            }
        }
        out
    }

    /// `ad_ξ` as a `d × d` matrix.
    pub fn ad(&self, xi: &[f64]) -> Mat {
        let d = self.dim();
        let mut m = Mat::zeros(d, d);
        for j in 0..d {
            let mut e = vec![0.0; d];
            e[j] = 1.0;
            m.set_column(j, &DVector::from_vec(self.bracket(xi, &e)));
        }
        m
    }

    pub fn identity(&self) -> CMat {
        let n = self.generators[0].nrows();
        CMat::identity(n, n)
    }

    pub fn exp(&self, xi: &[f64]) -> CMat {
        self.algebra_element(xi).exp()
    }

    pub fn inverse(&self, g: &CMat) -> CMat {
        g.clone().try_inverse().expect("group elements are invertible")
    }

    /// `Ad_g` as a `d × d` matrix.
    pub fn ad_group(&self, g: &CMat) -> Mat {
        let d = self.dim();
        let gi = self.inverse(g);
        let mut m = Mat::zeros(d, d);
        for j in 0..d {
            let x = g * &self.generators[j] * &gi;
            m.set_column(j, &DVector::from_vec(self.coords(&x)));
        }
        m
    }

    pub fn pair(&self, x: &[f64], y: &[f64]) -> f64 {
        (DVector::from_column_slice(x).transpose() * &self.b * DVector::from_column_slice(y))[(0, 0)]
    }

    /// Random group element: Haar for SU(2); `exp` of a Gaussian algebra element scaled
    /// by `π` otherwise.
    pub fn random_element(&self, rng: &mut impl Rng) -> CMat {
        if let Some(f) = &self.factor {
            let a = f.random_element(rng);
            return Self::join(&a, &f.random_element(rng));
        }
        match self.kind {
            ModelKind::Su2 => {
                let q: Vec<f64> = (0..4).map(|_| StandardNormal.sample(rng)).collect();
                let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
                let (a, b, cc, dd) = (q[0] / n, q[1] / n, q[2] / n, q[3] / n);
                CMat::from_row_slice(2, 2, &[c(a, b), c(cc, dd), c(-cc, dd), c(a, -b)])
            }
            _ => {
                let xi: Vec<f64> = (0..self.dim()).map(|_| StandardNormal.sample(rng)).collect();
                let scale = std::f64::consts::PI / (1.0 + xi.iter().map(|x| x * x).sum::<f64>().sqrt());
                self.exp(&xi.iter().map(|x| x * scale * 2.0).collect::<Vec<_>>())
            }
        }
    }

    pub fn random_algebra(&self, scale: f64, rng: &mut impl Rng) -> Vec<f64> {
        (0..self.dim()).map(|_| {
            let z: f64 = StandardNormal.sample(rng);
            scale * z
        }).collect()
    }

    /// The analytic square root of `det((Ad_g + 1)/2)` normalized by `1` at `e`.
    /// `None` for models without a lift.
    pub fn half_det_sign_function(&self, g: &CMat) -> Option<f64> {
        if let Some(f) = &self.factor {
            let (a, b) = Self::split(g);
            return Some(f.half_det_sign_function(&a)? * f.half_det_sign_function(&b)?);
        }
        match self.kind {
            ModelKind::Su2 => Some((g[(0, 0)] + g[(1, 1)]).re / 2.0),
            ModelKind::Su3 => {
                let eig = g.clone().eigenvalues()?;
                let th: Vec<f64> = eig.iter().map(|z| z.arg()).collect();
                let mut h = 1.0;
                for a in 0..3 {
                    for b in (a + 1)..3 {
                        h *= ((th[a] - th[b]) / 2.0).cos();
                    }
                }
                Some(h)
            }
            ModelKind::CoadjointSu2 => {
                let t = (g[(0, 0)] + g[(1, 1)]).re / 2.0;
                Some(t * t)
            }
            ModelKind::Torus => Some(1.0),
            ModelKind::So3 => None,
        }
    }

    /// Central elements act trivially by `Ad`.
    pub fn is_central(&self, g: &CMat, tol: f64) -> bool {
        let d = self.dim();
        (self.ad_group(g) - Mat::identity(d, d)).amax() <= tol
    }

    /// Left-trivialized differential of `exp` at `ξ`: `(1 − e^{−ad_ξ})/ad_ξ`.
    pub fn dexp(&self, xi: &[f64]) -> Mat {
        let d = self.dim();
        let ad = self.ad(xi);
        let mut term = Mat::identity(d, d);
        let mut sum = Mat::identity(d, d);
        for k in 1..60 {
            term = &term * (-&ad) * (1.0 / (k as f64 + 1.0));
            sum += &term;
            if term.amax() < 1e-18 {
                break;
            }
        }
        sum
    }

    /// Largest entry of `ad_ξᵀB + B ad_ξ` over basis elements.
    pub fn ad_invariance_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            let ad = self.ad(&e);
            worst = worst.max((ad.transpose() * &self.b + &self.b * &ad).amax());
        }
        worst
    }
}
