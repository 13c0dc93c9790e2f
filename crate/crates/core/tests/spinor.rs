use proptest::prelude::*;
use purespin::dirac;
use purespin::linalg::{gaussian_matrix, random_antisymmetric, random_orthogonal, seeded_rng, Mat};
use purespin::multivector::Multivector;
use purespin::spinor::{self, DoubledSpace};
use purespin::Tolerance;
use rand::Rng;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn random_form(n: usize, rng: &mut impl Rng) -> Multivector<f64> {
    let v: Vec<f64> = (0..1usize << n).map(|_| rng.random_range(-1.0..1.0)).collect();
    Multivector::from_dense(n, &v)
}

/// `e^{−ω} ∧ β₁ ∧ … ∧ β_k`, pure with a `(n−k)`-dimensional range.
fn random_pure(n: usize, rng: &mut impl Rng) -> Multivector<f64> {
    let k = rng.random_range(0..=n);
    let betas = gaussian_matrix(n, k, rng);
    let omega = random_antisymmetric(n, rng);
    spinor::two_form_of_matrix(&omega).neg().exp_wedge().wedge(&spinor::wedge_columns(&betas))
}

/// Best `c` in `a ≈ c b` and the relative misfit.
fn proportional(a: &Multivector<f64>, b: &Multivector<f64>) -> f64 {
    let c = a.dot(b) / b.dot(b);
    a.sub(&b.scale(&c)).norm() / a.norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn null_spaces_are_isotropic(n in 1usize..=4, seed in any::<u64>(), kind in 0u8..3) {
        let mut rng = seeded_rng(seed);
        let phi = match kind {
            0 => random_form(n, &mut rng),
            1 => random_pure(n, &mut rng),
            _ => random_pure(n, &mut rng).add(&random_pure(n, &mut rng)),
        };
        prop_assume!(phi.max_abs() > 1e-6);
        let ns = spinor::null_space(&phi, tol()).unwrap();
        prop_assert!(ns.subspace.isotropy_defect() < 1e-9);
        prop_assert!(ns.subspace.dim() <= n);
        if kind == 1 {
            prop_assert!(ns.is_pure);
        }
    }

    #[test]
    fn pullback_is_adjoint_to_pushforward(n in 1usize..=4, m in 1usize..=4, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = gaussian_matrix(m, n, &mut rng);
        let psi = random_form(m, &mut rng);
        let chi = random_form(n, &mut rng);
        let lhs = spinor::dual_pairing(&psi, &spinor::pushforward(&a, &chi));
        let rhs = spinor::dual_pairing(&spinor::pullback(&a, &psi), &chi);
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()), "{} {}", lhs, rhs);
    }

    #[test]
    fn pure_spinors_decompose_as_exp_times_volume(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let phi = random_pure(n, &mut rng);
        let ns = spinor::null_space(&phi, tol()).unwrap();
        prop_assert!(ns.is_pure);
        let e = purespin::bilinear::LagrangianSubspace::new(ns.subspace, tol()).unwrap();
        let rebuilt = spinor::spinor_of_lagrangian(&e, 1.0, tol()).unwrap();
        prop_assert!(proportional(&phi, &rebuilt.form) < 1e-9);
    }

    #[test]
    fn spinors_of_orthogonal_maps_have_the_right_null_space(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = random_orthogonal(n, &mut rng);
        let b = Mat::identity(n, n);
        let (psi, _) = dirac::spinor_of_orthogonal(&a, &b, 1.0, tol()).unwrap();
        let expected = DoubledSpace::new(n).lagrangian_from_orthogonal(&a, tol()).unwrap();
        let ns = spinor::null_space(&psi, tol()).unwrap();
        prop_assert!(ns.is_pure);
        prop_assert!(ns.subspace.distance(expected.subspace()) < 1e-8);
        // even exactly when det A = 1
        let parity = psi.pruned(1e-12).parity();
        prop_assert_eq!(parity, Some(if a.determinant() > 0.0 { 0 } else { 1 }));
    }
}

fn rotation(n: usize, t: f64) -> Mat {
    let mut r = Mat::identity(n, n);
    r[(0, 0)] = t.cos();
    r[(0, 1)] = -t.sin();
    r[(1, 0)] = t.sin();
    r[(1, 1)] = t.cos();
    r
}

/// Follows `ψ(A(t))` continuously around `t ∈ [0, 2πk]` and returns the endpoint.
fn continued_spinor(n: usize, turns: usize) -> Multivector<f64> {
    let b = Mat::identity(n, n);
    let steps = 400 * turns;
    let mut prev = Multivector::one(n);
    for s in 1..=steps {
        let t = 2.0 * std::f64::consts::PI * turns as f64 * s as f64 / steps as f64;
        let (mut psi, _) = dirac::spinor_of_orthogonal(&rotation(n, t), &b, 1.0, tol()).unwrap();
        psi = psi.scale(&(1.0 / psi.norm()));
        if psi.dot(&prev) < 0.0 {
            psi = psi.neg();
        }
        prev = psi;
    }
    prev
}

#[test]
fn a_full_rotation_flips_the_spinor_once() {
    for n in 2..=3 {
        let one = continued_spinor(n, 1);
        assert!(one.sub(&Multivector::one(n).neg()).max_abs() < 1e-9, "n={n}");
        let two = continued_spinor(n, 2);
        assert!(two.sub(&Multivector::one(n)).max_abs() < 1e-9, "n={n}");
    }
}

#[test]
fn reflecting_twice_fixes_the_spinor() {
    // normalized w·w = sgn⟨w,w⟩ = +1 for a definite B
    let b = Mat::identity(2, 2);
    let start = spinor::two_form_of_matrix(&random_antisymmetric(2, &mut seeded_rng(4))).exp_wedge();
    let w = vec![0.6, -0.8];
    let twice = dirac::apply_reflections(&[w.clone(), w], &b, &start);
    assert!(twice.sub(&start).max_abs() < 1e-12);
}
