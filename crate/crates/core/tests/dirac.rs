use proptest::prelude::*;
use purespin::dirac::{self, LinearDirac};
use purespin::linalg::{gaussian_matrix, random_orthogonal, seeded_rng, subspace_distance, Mat};
use purespin::spinor::DoubledSpace;
use purespin::Tolerance;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn random_dirac(n: usize, rng: &mut impl rand::Rng) -> LinearDirac {
    let a = random_orthogonal(n, rng);
    LinearDirac::new(DoubledSpace::new(n).lagrangian_from_orthogonal(&a, tol()).unwrap())
}

/// Positive definite `B = MᵀM + I`.
fn definite(n: usize, rng: &mut impl rand::Rng) -> Mat {
    let m = gaussian_matrix(n, n, rng);
    m.transpose() * m + Mat::identity(n, n)
}

/// An element of `O(V, B)` as `L⁻ᵀ Q Lᵀ` with `B = L Lᵀ`.
fn b_orthogonal(b: &Mat, rng: &mut impl rand::Rng) -> Mat {
    let n = b.nrows();
    let l = b.clone().cholesky().unwrap().l();
    let lt_inv = l.transpose().try_inverse().unwrap();
    &lt_inv * random_orthogonal(n, rng) * l.transpose()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn strong_dirac_maps_compose(n in 1usize..=4, m in 1usize..=4, k in 1usize..=4, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let e = random_dirac(n, &mut rng);
        let a = gaussian_matrix(m, n, &mut rng);
        let b = gaussian_matrix(k, m, &mut rng);
        let e1 = dirac::dirac_image(&a, &e, tol()).unwrap().result;
        let e2 = dirac::dirac_image(&b, &e1, tol()).unwrap().result;
        let first = dirac::is_strong_dirac(&a, &e, &e1, tol()).unwrap();
        let second = dirac::is_strong_dirac(&b, &e1, &e2, tol()).unwrap();
        prop_assume!(first && second);
        prop_assert!(dirac::is_strong_dirac(&(&b * &a), &e, &e2, tol()).unwrap());
    }

    #[test]
    fn image_and_preimage_agree_with_the_spinor_route(n in 1usize..=4, m in 1usize..=4, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a = gaussian_matrix(m, n, &mut rng);
        let e = random_dirac(n, &mut rng);
        let f = random_dirac(m, &mut rng);
        let img = dirac::dirac_image(&a, &e, tol()).unwrap();
        if let Some(by_spinor) = dirac::dirac_image_by_spinor(&a, &e, tol()).unwrap() {
            prop_assert!(img.nonzero_spinor);
            prop_assert!(img.result.distance(&by_spinor) < 1e-8);
        } else {
            prop_assert!(!img.nonzero_spinor);
        }
        let pre = dirac::dirac_preimage(&a, &f, tol()).unwrap();
        if let Some(by_spinor) = dirac::dirac_preimage_by_spinor(&a, &f, tol()).unwrap() {
            prop_assert!(pre.result.distance(&by_spinor) < 1e-8);
        }
    }

    #[test]
    fn cayley_embedding_is_injective(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let b = definite(n, &mut rng);
        let a1 = b_orthogonal(&b, &mut rng);
        let a2 = b_orthogonal(&b, &mut rng);
        let k1 = dirac::kappa_embed(&a1, &b, tol()).unwrap();
        let k2 = dirac::kappa_embed(&a2, &b, tol()).unwrap();
        // A^κ(V) is spanned by the images of (v, 0)
        let (r1, r2) = (k1.columns(0, n).into_owned(), k2.columns(0, n).into_owned());
        prop_assume!((&a1 - &a2).norm() > 1e-6);
        prop_assert!(subspace_distance(&r1, &r2) > 1e-9);
    }

    #[test]
    fn cayley_images_are_lagrangian_with_the_matching_spinor(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let b = definite(n, &mut rng);
        let a = b_orthogonal(&b, &mut rng);
        let k = dirac::kappa_embed(&a, &b, tol()).unwrap();
        let e = LinearDirac::from_basis(k.columns(0, n).into_owned(), tol()).unwrap();
        let (psi, _) = dirac::spinor_of_orthogonal(&a, &b, 1.0, tol()).unwrap();
        let ns = purespin::spinor::null_space(&psi, tol()).unwrap();
        prop_assert!(ns.is_pure);
        prop_assert!(subspace_distance(&ns.subspace.basis, e.basis()) < 1e-7);
    }
}

#[test]
fn zero_map_is_strong_iff_the_source_misses_v() {
    let mut rng = seeded_rng(2);
    let ds = DoubledSpace::new(2);
    let z = Mat::zeros(3, 2);
    // the image under the zero map is T*V′ = 0 ⊕ V′*
    let dual = LinearDirac::new(DoubledSpace::new(3).dual_lagrangian());
    let generic = random_dirac(2, &mut rng);
    let tangent = LinearDirac::new(ds.v_lagrangian());
    for e in [&generic, &tangent] {
        assert!(dirac::dirac_image(&z, e, tol()).unwrap().result.distance(&dual) < 1e-12);
    }
    let misses = purespin::bilinear::transverse(&generic.e, &ds.v_lagrangian(), tol());
    assert_eq!(dirac::is_strong_dirac(&z, &generic, &dual, tol()).unwrap(), misses);
    assert!(!dirac::is_strong_dirac(&z, &tangent, &dual, tol()).unwrap());
}
