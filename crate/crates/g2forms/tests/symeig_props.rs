use g2forms::cayley::random_g2;
use g2forms::sample::{random_with_spectrum, to_dmatrix};
use g2forms::symeig::{eigen_decompose, jacobi, TypeTag};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seven eigenvalues realising the multiplicities of `tag`, gaps at least 0.1.
fn spectrum(rng: &mut ChaCha8Rng, tag: TypeTag) -> [f64; 7] {
    let mut out = Vec::with_capacity(7);
    let mut x = rng.random_range(-3.0..0.0);
    for &m in tag.parts() {
        x += rng.random_range(0.1..1.0);
        out.extend(std::iter::repeat_n(x, m));
    }
    std::array::from_fn(|i| out[i])
}

fn tags() -> impl Strategy<Value = TypeTag> {
    (0..TypeTag::ALL.len()).prop_map(|i| TypeTag::ALL[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn jacobi_is_orthogonal(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let a = &g + g.transpose();
        let (vals, q) = jacobi(&a).unwrap();
        prop_assert!((q.transpose() * &q - DMatrix::identity(n, n)).amax() < 1e-12);
        let rebuilt = &q * DMatrix::from_diagonal(&vals) * q.transpose();
        prop_assert!((rebuilt - &a).amax() < 1e-11);
        prop_assert!(vals.as_slice().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn reconstruction_and_type(seed in any::<u64>(), tag in tags()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals = spectrum(&mut rng, tag);
        let a = random_with_spectrum(&mut rng, &vals);
        let e = eigen_decompose(&a, 1e-7).unwrap();
        prop_assert_eq!(e.type_tag, tag);
        prop_assert!((e.reconstruct() - a).norm() <= 1e-9 * a.norm());
    }

    #[test]
    fn eigenpairs_are_g2_invariant(seed in any::<u64>(), tag in tags()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vals = spectrum(&mut rng, tag);
        let a = random_with_spectrum(&mut rng, &vals);
        let g = random_g2(&mut rng).matrix;
        let e1 = eigen_decompose(&a, 1e-7).unwrap();
        let e2 = eigen_decompose(&(g.transpose() * a * g), 1e-7).unwrap();
        prop_assert_eq!(e1.pairs.len(), e2.pairs.len());
        for (p, q) in e1.pairs.iter().zip(&e2.pairs) {
            prop_assert_eq!(p.multiplicity, q.multiplicity);
            prop_assert!((p.value - q.value).abs() < 1e-8);
        }
    }
}

#[test]
fn nan_input_is_an_error() {
    let mut a = to_dmatrix(&g2forms::Mat7::identity());
    a[(2, 3)] = f64::NAN;
    a[(3, 2)] = f64::NAN;
    assert!(jacobi(&a).is_err());
}
