//! Runners for the acceptance criteria. Each runner draws its samples from a seeded
//! generator and reports the worst observed value against its threshold.

use std::sync::Arc;

use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bilinear::{self, make_split_space};
use crate::clifford::{self, CliffordElement};
use crate::dirac;
use crate::error::Result;
use crate::lie::cartan::{self, ConjugacyClassPoint};
use crate::lie::forms::FD_STEP;
use crate::lie::group::{CMat, GroupModel, ModelKind};
use crate::lie::integrability;
use crate::linalg::{self, seeded_rng, Mat};
use crate::multivector::{Blade, Multivector};
use crate::qham::{self, exp, spaces};
use crate::scalar::{Scalar, Tolerance};
use crate::spinor::{self, DoubledSpace};

type Q = BigRational;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed value of the criterion's main metric.
    pub worst: f64,
    pub threshold: f64,
    pub samples: usize,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<34} {}  worst={:.3e} threshold={:.1e} samples={} {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.worst,
            self.threshold,
            self.samples,
            self.detail
        )
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "clifford-exactness"),
    (2, "fixed-line-dimension"),
    (3, "purity-round-trip"),
    (4, "chevalley-transversality"),
    (5, "closed-form-psi"),
    (6, "cartan-dirac-integrability"),
    (7, "class-volume-nondegeneracy"),
    (8, "ghjw-equals-kks"),
    (9, "q-hamiltonian-suite"),
    (10, "fusion-identity"),
    (11, "exponential-theorem"),
    (12, "courant-closure"),
];

fn name_of(id: u8) -> &'static str {
    CRITERIA.iter().find(|c| c.0 == id).map(|c| c.1).unwrap_or("unknown")
}

fn rng_for(seed: u64, id: u8) -> ChaCha8Rng {
    seeded_rng(seed.wrapping_mul(1000).wrapping_add(id as u64))
}

fn small_rational(rng: &mut impl Rng) -> Q {
    Q::from_ratio(rng.random_range(-4..=4), rng.random_range(1..=3))
}

fn sparse_element(space: &Arc<bilinear::BilinearSpace<Q>>, terms: usize, rng: &mut impl Rng) -> CliffordElement<Q> {
    let size = 1u64 << space.dim();
    let mut mv = Multivector::zero(space.dim());
    for _ in 0..terms {
        mv.add_term(rng.random_range(0..size) as Blade, small_rational(rng));
    }
    CliffordElement::new(space.clone(), mv).expect("dimension matches")
}

fn exact_inverse(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let e: Vec<Q> = (0..n).map(|i| if i == j { Q::one() } else { Q::zero() }).collect();
        cols.push(linalg::exact_solve(m, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

fn exact_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).fold(Q::zero(), |s, l| s + a[i][l].clone() * b[l][j].clone())).collect())
        .collect()
}

/// A rational orthogonal matrix: a signed permutation times the Cayley transform of a
/// rational antisymmetric matrix.
pub fn rational_orthogonal(n: usize, rng: &mut impl Rng) -> Vec<Vec<Q>> {
    loop {
        let mut s = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let x = small_rational(rng);
                s[j][i] = -x.clone();
                s[i][j] = x;
            }
        }
        let plus: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() + s[i][j].clone() } else { s[i][j].clone() }).collect()).collect();
        let minus: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() - s[i][j].clone() } else { -s[i][j].clone() }).collect()).collect();
        let Some(inv) = exact_inverse(&plus) else { continue };
        let cayley = exact_mul(&minus, &inv);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let p: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..n).map(|j| if perm[i] == j { Q::from_i64(if rng.random_bool(0.5) { 1 } else { -1 }) } else { Q::zero() }).collect())
            .collect();
        return exact_mul(&p, &cayley);
    }
}

/// Columns `((A+I)v, ½(A−I)v)` of `E_A ⊂ V ⊕ V*`, exactly.
pub fn exact_lagrangian(a: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let half = Q::from_ratio(1, 2);
    (0..n)
        .map(|j| {
            let mut w = vec![Q::zero(); 2 * n];
            for i in 0..n {
                let id = if i == j { Q::one() } else { Q::zero() };
                w[i] = a[i][j].clone() + id.clone();
                w[n + i] = half.clone() * (a[i][j].clone() - id);
            }
            w
        })
        .collect()
}

pub fn clifford_exactness(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 1);
    let tol = Tolerance::default();
    let mut failures = Vec::new();
    let mut triples = 0;
    for n in 1..=3usize {
        let space = Arc::new(make_split_space::<Q>(n));
        for _ in 0..200 {
            let terms = 1 << n;
            let x = sparse_element(&space, terms, &mut rng);
            let y = sparse_element(&space, terms, &mut rng);
            let z = sparse_element(&space, terms, &mut rng);
            if x.product(&y)?.product(&z)? != x.product(&y.product(&z)?)? {
                failures.push(format!("assoc n={n}"));
            }
            triples += 1;
        }
        let rank = spinor::clifford_rho_rank::<Q>(n);
        if rank != 1 << (2 * n) {
            failures.push(format!("rank n={n} got {rank}"));
        }
        let mut m: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                m[i][j] = small_rational(&mut rng);
            }
        }
        let mit = exact_inverse(&m).expect("unipotent").into_iter().collect::<Vec<_>>();
        let half = Q::from_ratio(1, 2);
        let base_e: Vec<Vec<Q>> = (0..n).map(|i| (0..2 * n).map(|k| if k == i || k == n + i { Q::one() } else { Q::zero() }).collect()).collect();
        let base_f: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..2 * n).map(|k| if k == i { half.clone() } else if k == n + i { -half.clone() } else { Q::zero() }).collect())
            .collect();
        let comb = |base: &[Vec<Q>], coef: &dyn Fn(usize, usize) -> Q| -> Vec<Vec<Q>> {
            (0..n)
                .map(|i| (0..2 * n).map(|k| (0..n).fold(Q::zero(), |s, j| s + coef(j, i) * base[j][k].clone())).collect())
                .collect()
        };
        let e = comb(&base_e, &|j, i| m[j][i].clone());
        let f = comb(&base_f, &|j, i| mit[i][j].clone());
        let p = clifford::projector_p(space.clone(), &e, &f, tol)?;
        let rep = clifford::projector_properties(&p, &e, &f, tol)?;
        if !rep.all() {
            failures.push(format!("projector n={n} {rep:?}"));
        }
    }
    Ok(CriterionResult {
        id: 1,
        name: name_of(1),
        passed: failures.is_empty(),
        worst: failures.len() as f64,
        threshold: 0.0,
        samples: triples,
        detail: if failures.is_empty() { "exact".into() } else { failures.join("; ") },
    })
}

pub fn fixed_line_dimension(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 2);
    let mut bad = 0;
    let mut samples = 0;
    for n in 1..=3usize {
        for _ in 0..50 {
            let a = rational_orthogonal(n, &mut rng);
            let e = exact_lagrangian(&a);
            if spinor::fixed_line(&e, n).len() != 1 {
                bad += 1;
            }
            samples += 1;
        }
    }
    Ok(CriterionResult {
        id: 2,
        name: name_of(2),
        passed: bad == 0,
        worst: bad as f64,
        threshold: 0.0,
        samples,
        detail: format!("{bad} Lagrangians with dim != 1"),
    })
}

pub fn purity_round_trip(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 3);
    let tol = Tolerance::default();
    let mut worst = 0.0f64;
    for k in 0..500 {
        let n = 1 + k % 4;
        let a = linalg::random_orthogonal(n, &mut rng);
        let ds = DoubledSpace::new(n);
        let e = ds.lagrangian_from_orthogonal(&a, tol)?;
        let phi = spinor::spinor_of_lagrangian(&e, 1.0, tol)?;
        let ns = spinor::null_space(&phi.form, tol)?;
        worst = worst.max(ns.subspace.distance(e.subspace()));
    }
    Ok(CriterionResult { id: 3, name: name_of(3), passed: worst < 1e-9, worst, threshold: 1e-9, samples: 500, detail: String::new() })
}

/// `A·R` with `R` fixing a random unit vector, so that `E_A ∩ E_{AR} ≠ 0`.
fn meeting_partner(a: &Mat, rng: &mut impl Rng) -> Mat {
    let n = a.nrows();
    let q = linalg::random_orthogonal(n, rng);
    let mut r = Mat::identity(n, n);
    if n > 1 {
        let inner = linalg::random_orthogonal(n - 1, rng);
        r.view_mut((1, 1), (n - 1, n - 1)).copy_from(&inner);
    }
    a * &q * r * q.transpose()
}

pub fn chevalley_transversality(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 4);
    let tol = Tolerance::default();
    let mut disagreements = 0;
    let mut meeting = 0;
    for k in 0..500 {
        let n = 1 + k % 4;
        let ds = DoubledSpace::new(n);
        let a = linalg::random_orthogonal(n, &mut rng);
        let b = if k % 2 == 0 { meeting_partner(&a, &mut rng) } else { linalg::random_orthogonal(n, &mut rng) };
        let e = ds.lagrangian_from_orthogonal(&a, tol)?;
        let f = ds.lagrangian_from_orthogonal(&b, tol)?;
        let pe = spinor::spinor_of_lagrangian(&e, 1.0, tol)?;
        let pf = spinor::spinor_of_lagrangian(&f, 1.0, tol)?;
        let by_pairing = spinor::transversality_by_pairing(&pe, &pf, 1e-8);
        let by_subspace = bilinear::transverse(&e, &f, tol);
        if !by_subspace {
            meeting += 1;
        }
        if by_pairing != by_subspace {
            disagreements += 1;
        }
    }
    Ok(CriterionResult {
        id: 4,
        name: name_of(4),
        passed: disagreements == 0,
        worst: disagreements as f64,
        threshold: 0.0,
        samples: 500,
        detail: format!("{meeting} non-transverse pairs"),
    })
}

pub fn closed_form_psi(seed: u64) -> Result<CriterionResult> {
    let mut rng = rng_for(seed, 5);
    let tol = Tolerance::default();
    let mut worst = 0.0f64;
    let mut samples = 0;
    while samples < 200 {
        let n = 1 + samples % 5;
        let a = linalg::random_rotation(n, &mut rng);
        if (&a + Mat::identity(n, n)).determinant().abs() <= 1e-3 {
            continue;
        }
        let id = Mat::identity(n, n);
        let c = dirac::spinor_closed_form(&a, &id)?;
        let r = dirac::spinor_by_reflections(&a, &id, tol)?;
        worst = worst.max(c.sub(&r).max_abs().min(c.add(&r).max_abs()));
        samples += 1;
    }
    let mut fallback_ok = true;
    for n in 1..=5 {
        let id = Mat::identity(n, n);
        let (psi, route) = dirac::spinor_of_orthogonal(&(-&id), &id, 1.0, tol)?;
        let top = psi.top_coefficient();
        fallback_ok &= route == dirac::SpinorRoute::Reflections
            && top.abs() > 1e-3
            && psi.sub(&Multivector::volume(n).scale(&top)).max_abs() < 1e-12;
    }
    Ok(CriterionResult {
        id: 5,
        name: name_of(5),
        passed: worst < 1e-8 && fallback_ok,
        worst,
        threshold: 1e-8,
        samples,
        detail: format!("A = -I fallback {}", if fallback_ok { "ok" } else { "wrong" }),
    })
}

pub fn cartan_dirac_integrability(seed: u64) -> Result<CriterionResult> {
    let m = GroupModel::su2();
    let tol = Tolerance::default();
    let mut rng = rng_for(seed, 6);
    let mut worst = 0.0f64;
    let mut control_ok = true;
    for _ in 0..20 {
        let g = m.random_element(&mut rng);
        let r = integrability::check_cartan_dirac_integrability(&m, &g, FD_STEP, tol)?;
        worst = worst.max(r.phi);
        control_ok &= r.psi > 10.0 * r.phi.max(1e-4 / 10.0);
    }
    Ok(CriterionResult {
        id: 6,
        name: name_of(6),
        passed: worst < 1e-4 && control_ok,
        worst,
        threshold: 1e-4,
        samples: 20,
        detail: format!("psi control {}", if control_ok { "non-integrable" } else { "too small" }),
    })
}

/// A sample on a conjugacy class together with its computed density.
#[derive(Debug, Clone)]
pub struct ClassSample {
    pub point: ConjugacyClassPoint,
    pub density: f64,
}

/// Class through `exp(θξ₃)`, conjugated by a random element.
pub fn class_sample(m: &GroupModel, theta: f64, rng: &mut impl Rng, tol: Tolerance) -> Result<ClassSample> {
    let k = m.random_element(rng);
    let g: CMat = &k * m.exp(&[0.0, 0.0, theta]) * m.inverse(&k);
    let point = ConjugacyClassPoint::new(m, &g, tol);
    let density = cartan::conjugacy_volume_top(m, &point, tol)?;
    Ok(ClassSample { point, density })
}

/// Densities on 20 classes × 100 points, the class with `tr = 0` included.
pub fn class_volume_samples(seed: u64) -> Result<Vec<ClassSample>> {
    let m = GroupModel::su2();
    let tol = Tolerance::default();
    let mut rng = rng_for(seed, 7);
    let mut thetas: Vec<f64> = (0..19).map(|_| rng.random_range(0.05..(2.0 * std::f64::consts::PI - 0.05))).collect();
    thetas.push(std::f64::consts::PI);
    let mut out = Vec::with_capacity(2000);
    for &t in &thetas {
        for _ in 0..100 {
            out.push(class_sample(&m, t, &mut rng, tol)?);
        }
    }
    Ok(out)
}

pub fn class_volume_nondegeneracy(seed: u64) -> Result<CriterionResult> {
    let samples = class_volume_samples(seed)?;
    let min = samples.iter().map(|s| s.density.abs()).fold(f64::INFINITY, f64::min);
    Ok(CriterionResult {
        id: 7,
        name: name_of(7),
        passed: min > 1e-6,
        worst: min,
        threshold: 1e-6,
        samples: samples.len(),
        detail: "worst = min |density|".into(),
    })
}

pub fn ghjw_equals_kks(seed: u64) -> Result<CriterionResult> {
    let m = GroupModel::new(ModelKind::CoadjointSu2);
    let k = GroupModel::su2();
    let mut rng = rng_for(seed, 8);
    let mut worst = 0.0f64;
    let pad = |v: &[f64]| v.iter().copied().chain([0.0; 3]).collect::<Vec<_>>();
    for _ in 0..100 {
        let mu = k.random_algebra(1.0, &mut rng);
        let g = cartan::coadjoint_point(&m, &mu)?;
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (unit(3, i), unit(3, j));
                worst = worst.max((cartan::ghjw_form(&m, &g, &pad(&x), &pad(&y)) - cartan::kks_form(&mu, &x, &y)).abs());
            }
        }
    }
    Ok(CriterionResult { id: 8, name: name_of(8), passed: worst < 1e-10, worst, threshold: 1e-10, samples: 100, detail: String::new() })
}

fn unit(d: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; d];
    v[i] = 1.0;
    v
}

pub fn q_hamiltonian_suite(seed: u64) -> Result<CriterionResult> {
    let m = GroupModel::su2();
    let tol = Tolerance::default();
    let mut rng = rng_for(seed, 9);
    let mut worst = 0.0f64;
    let mut kernel_failures = 0;
    let mut disagreements = 0;
    let mut min_density = f64::INFINITY;
    for k in 0..100 {
        let p = if k % 2 == 0 {
            spaces::class_point(&m, &m.random_element(&mut rng), tol)?
        } else {
            let a = m.random_element(&mut rng);
            let b = m.random_element(&mut rng);
            let p = spaces::fused_double_point(&m, &a, &b)?;
            min_density = min_density.min(qham::qham_volume_top(&p, &m, tol)?.abs());
            p
        };
        let r = qham::compare_definitions(&p, &m, 1e-8, tol)?;
        worst = worst.max(r.moment_residual);
        if !(r.degeneracy.holds() && r.degeneracy.agree()) {
            kernel_failures += 1;
        }
        if !r.agree() {
            disagreements += 1;
        }
    }
    // corrupted points must fail both definitions together
    for _ in 0..20 {
        let mut p = spaces::class_point(&m, &m.random_element(&mut rng), tol)?;
        p.omega *= 1.5;
        if !qham::compare_definitions(&p, &m, 1e-8, tol)?.agree() {
            disagreements += 1;
        }
    }
    let passed = worst < 1e-8 && kernel_failures == 0 && disagreements == 0 && min_density > 1e-6;
    Ok(CriterionResult {
        id: 9,
        name: name_of(9),
        passed,
        worst,
        threshold: 1e-8,
        samples: 120,
        detail: format!("kernel failures {kernel_failures}, disagreements {disagreements}, min fused density {min_density:.3e}"),
    })
}

pub fn fusion_identity(seed: u64) -> Result<CriterionResult> {
    let m = GroupModel::su2();
    let mut rng = rng_for(seed, 10);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let a = m.random_element(&mut rng);
        let b = m.random_element(&mut rng);
        worst = worst.max(qham::fusion_identity_residual(&m, &a, &b, FD_STEP)?);
    }
    Ok(CriterionResult { id: 10, name: name_of(10), passed: worst < 1e-4, worst, threshold: 1e-4, samples: 10, detail: String::new() })
}

pub fn exponential_theorem(seed: u64) -> Result<CriterionResult> {
    let m = GroupModel::su2();
    let tol = Tolerance::default();
    let mut rng = rng_for(seed, 11);
    let mut closure = 0.0f64;
    let mut all_strong = true;
    let mut samples = 0;
    while samples < 20 {
        let xi = m.random_algebra(1.5, &mut rng);
        if exp::dexp_determinant(&m, &xi) <= dirac::SINGULAR_FACTOR * tol.tau {
            continue;
        }
        let near: Vec<f64> = xi.iter().map(|x| x * 0.2).collect();
        closure = closure.max(exp::exp_dirac_check(&m, &near, FD_STEP, tol)?.closure_residual);
        all_strong &= exp::exp_dirac_check(&m, &xi, FD_STEP, tol)?.strong;
        samples += 1;
    }
    Ok(CriterionResult {
        id: 11,
        name: name_of(11),
        passed: closure < 1e-5 && all_strong,
        worst: closure,
        threshold: 1e-5,
        samples,
        detail: format!("strong Dirac {}", if all_strong { "at all samples" } else { "failed" }),
    })
}

pub fn courant_closure(seed: u64) -> Result<CriterionResult> {
    let m = GroupModel::su2();
    let mut rng = rng_for(seed, 12);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let g = m.random_element(&mut rng);
        worst = worst.max(integrability::courant_closure_residual(&m, &g, FD_STEP)?);
    }
    Ok(CriterionResult { id: 12, name: name_of(12), passed: worst < 1e-4, worst, threshold: 1e-4, samples: 10, detail: String::new() })
}

pub fn run_criterion(id: u8, seed: u64) -> Result<CriterionResult> {
    match id {
        1 => clifford_exactness(seed),
        2 => fixed_line_dimension(seed),
        3 => purity_round_trip(seed),
        4 => chevalley_transversality(seed),
        5 => closed_form_psi(seed),
        6 => cartan_dirac_integrability(seed),
        7 => class_volume_nondegeneracy(seed),
        8 => ghjw_equals_kks(seed),
        9 => q_hamiltonian_suite(seed),
        10 => fusion_identity(seed),
        11 => exponential_theorem(seed),
        12 => courant_closure(seed),
        other => Err(crate::error::Error::Parse(format!("no criterion {other}"))),
    }
}

/// All criteria; a runner error is reported as a failed criterion.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|&(id, name)| {
            run_criterion(id, seed).unwrap_or_else(|e| CriterionResult {
                id,
                name,
                passed: false,
                worst: f64::NAN,
                threshold: f64::NAN,
                samples: 0,
                detail: format!("error: {e}"),
            })
        })
        .collect()
}
