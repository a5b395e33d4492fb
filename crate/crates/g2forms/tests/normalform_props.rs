use g2forms::cayley::{is_automorphism, random_g2};
use g2forms::normalform::{
    in_cross_section, is_conjugate, normal_form, sample_canonical, Tolerances, normal_form_with,
};
use g2forms::symeig::{eigen_decompose, proj_norm, TypeTag};
use g2forms::vecprod7::cross;
use g2forms::Mat7;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn tags() -> impl Strategy<Value = TypeTag> {
    (0..TypeTag::ALL.len()).prop_map(|i| TypeTag::ALL[i])
}

fn orbit_point(seed: u64, tag: TypeTag) -> (Mat7, Mat7) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = sample_canonical(&mut rng, tag);
    let g = random_g2(&mut rng).matrix;
    (c, g.transpose() * c * g)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn orbit_invariance(seed in any::<u64>(), tag in tags()) {
        let (c, d) = orbit_point(seed, tag);
        let r = normal_form(&d).unwrap();
        prop_assert_eq!(r.params.type_tag, tag);
        prop_assert!((r.canonical - c).norm() <= 1e-6 * c.norm());
        prop_assert!(in_cross_section(&r.canonical));
    }

    #[test]
    fn witness_is_valid(seed in any::<u64>(), tag in tags()) {
        let (_, d) = orbit_point(seed, tag);
        let r = normal_form(&d).unwrap();
        let w = r.witness.matrix;
        prop_assert!(is_automorphism(&w));
        prop_assert!((w.transpose() * d * w - r.canonical).norm() <= 1e-7 * d.norm());
    }

    #[test]
    fn idempotent(seed in any::<u64>(), tag in tags()) {
        let (_, d) = orbit_point(seed, tag);
        let once = normal_form(&d).unwrap().canonical;
        let twice = normal_form(&once).unwrap().canonical;
        prop_assert!((once - twice).amax() <= 1e-8);
    }

    #[test]
    fn distinct_parameters_not_conjugate(seed in any::<u64>(), tag in tags()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample_canonical(&mut rng, tag);
        let b = sample_canonical(&mut rng, tag);
        let pa = normal_form(&a).unwrap().params;
        let pb = normal_form(&b).unwrap().params;
        let labels = pa.eigenvalues.iter().zip(&pb.eigenvalues).map(|(x, y)| (x - y).abs());
        let angles = pa.angles.iter().map(|(n, x)| pb.angle(n).map_or(f64::INFINITY, |y| (x - y).abs()));
        let gap = labels.chain(angles).fold(0.0f64, f64::max);
        let differ = gap >= 1e-2 || pa.case != pb.case;
        prop_assume!(differ || (a - b).amax() < 1e-12);
        prop_assert_eq!(is_conjugate(&a, &b).unwrap().is_some(), !differ);
    }

    #[test]
    fn tolerances_do_not_change_generic_results(seed in any::<u64>(), tag in tags()) {
        let (_, d) = orbit_point(seed, tag);
        let loose = Tolerances { cluster_tol: 1e-6, snap_tol: 1e-8 };
        let a = normal_form(&d).unwrap();
        let b = normal_form_with(&d, &loose).unwrap();
        prop_assert!((a.canonical - b.canonical).amax() < 1e-8);
    }
}

/// `cos alpha = <S, uv>` for orthonormal `u, v` in the complement `S` of
/// the 4-dimensional eigenspace.
fn alpha_from_eigenvectors(d: &Mat7) -> f64 {
    let e = eigen_decompose(d, 1e-7).unwrap();
    let s: Vec<_> = e
        .pairs
        .iter()
        .filter(|p| p.multiplicity != 4)
        .flat_map(|p| p.basis.clone())
        .collect();
    let u = (s[0] + s[1] * 0.3).normalize();
    let v = s[1] - u * u.dot(&s[1]);
    let v = (v + s[2] * 0.7).normalize();
    proj_norm(&s, &cross(&u, &v)).clamp(0.0, 1.0).acos()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn alpha_matches_eigenvector_formula(seed in any::<u64>(), k in 0usize..3) {
        let tag = [TypeTag::T34, TypeTag::T124, TypeTag::T1114][k];
        let (_, d) = orbit_point(seed, tag);
        let alpha = normal_form(&d).unwrap().params.angle("alpha").unwrap();
        prop_assert!((alpha - alpha_from_eigenvectors(&d)).abs() < 1e-7);
    }
}
