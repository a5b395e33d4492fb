use g2forms::orthoparam::*;
use g2forms::sample::{random_orthogonal, to_dmatrix};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ortho(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_orthogonal(&mut rng, n)
}

/// Within each block, leading entries positive and strictly moving right.
fn is_echelon(t: &DMatrix<f64>, d: &DiagSpec, tol: f64) -> bool {
    for (a, b) in d.blocks() {
        let mut last: Option<usize> = None;
        for i in (a - 1)..b {
            let Some(p) = (0..t.ncols()).find(|&c| t[(i, c)].abs() > tol) else {
                return false;
            };
            if t[(i, p)] <= 0.0 || last.is_some_and(|l| p <= l) {
                return false;
            }
            last = Some(p);
        }
    }
    true
}

fn block_diag_orthogonal(d: &DiagSpec, seed: u64) -> DMatrix<f64> {
    let n = d.n();
    let mut m = DMatrix::zeros(n, n);
    for (k, (a, b)) in d.blocks().into_iter().enumerate() {
        let s = b - a + 1;
        m.view_mut((a - 1, a - 1), (s, s))
            .copy_from(&ortho(s, seed.wrapping_add(k as u64 * 7919)));
    }
    m
}

fn patterns() -> impl Strategy<Value = Vec<usize>> {
    prop::sample::select(vec![
        vec![1, 1],
        vec![2],
        vec![1, 2],
        vec![2, 1],
        vec![3, 1],
        vec![1, 1, 2],
        vec![2, 2],
        vec![1, 3],
        vec![1, 1, 1, 1],
        vec![2, 1, 2],
        vec![3, 2, 1],
        vec![1, 2, 2, 2],
    ])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn polar_round_trip(n in 1usize..8, seed in any::<u64>()) {
        let v = ortho(n, seed).column(0).into_owned();
        let p = polar(&v).unwrap();
        prop_assert!(p.is_valid());
        prop_assert!((unpolar(&p.0) - v).amax() < 1e-12);
    }

    #[test]
    fn factorize_round_trip(n in 1usize..8, seed in any::<u64>()) {
        let t = ortho(n, seed);
        let tau = factorize(&t).unwrap();
        prop_assert!(tau.is_valid());
        prop_assert!((compose(&tau) - &t).amax() < 1e-10);
    }

    #[test]
    fn reduce_lands_in_cross_section(mults in patterns(), seed in any::<u64>()) {
        let d = DiagSpec::pattern(&mults);
        let t = ortho(d.n(), seed);
        let (tau, nmat) = reduce_to_cross_section(&t, &d).unwrap();
        let r = compose(&tau);
        prop_assert!((&nmat * &t - &r).amax() < 1e-10);
        prop_assert!((&nmat - block_diag_orthogonal_like(&nmat, &d)).amax() < 1e-10);
        prop_assert!(is_echelon(&r, &d, 1e-9));
        prop_assert!(in_k(&tau, &d));
        let a = t.transpose() * d.matrix() * &t;
        prop_assert!((sym_from_tau(&tau, &d) - a).amax() < 1e-10);
    }

    #[test]
    fn cross_section_meets_each_coset_once(mults in patterns(), seed in any::<u64>()) {
        let d = DiagSpec::pattern(&mults);
        let t = ortho(d.n(), seed);
        let n = block_diag_orthogonal(&d, seed ^ 0x5555);
        let (t1, _) = reduce_to_cross_section(&t, &d).unwrap();
        let (t2, _) = reduce_to_cross_section(&(n * &t), &d).unwrap();
        prop_assert!(t1.max_abs_diff(&t2) < 1e-8);
    }

    #[test]
    fn membership_matches_echelon_oracle(mults in patterns(), seed in any::<u64>()) {
        // random tau tuples, pushed onto structured values half of the time
        let d = DiagSpec::pattern(&mults);
        let n = d.n();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_orthogonal(&mut rng, n);
        let mut tau = factorize(&t).unwrap();
        use rand::Rng;
        for b in tau.blocks.iter_mut() {
            let m = b.len();
            for k in 0..m.saturating_sub(1) {
                match rng.random_range(0..4) {
                    0 => b[k] = std::f64::consts::FRAC_PI_2,
                    1 => {
                        b[k] = if rng.random_bool(0.5) { 0.0 } else { std::f64::consts::PI };
                        for x in b[k + 1..].iter_mut() {
                            *x = 0.0;
                        }
                        break;
                    }
                    _ => {}
                }
            }
        }
        let r = compose(&tau);
        prop_assert_eq!(in_k(&tau, &d), is_echelon(&r, &d, 1e-9));
    }

    #[test]
    fn parametrize_sym_recovers_matrix(mults in patterns(), seed in any::<u64>()) {
        let d = DiagSpec::new(
            (0..mults.len()).map(|k| 1.0 + 1.5 * k as f64).collect(),
            mults.clone(),
        ).unwrap();
        let t = ortho(d.n(), seed);
        let a = t.transpose() * d.matrix() * &t;
        let a = (&a + a.transpose()) * 0.5;
        let tau = parametrize_sym(&a, &d, 1e-7).unwrap();
        prop_assert!(in_k(&tau, &d));
        prop_assert!((sym_from_tau(&tau, &d) - a).amax() < 1e-9);
    }

    #[test]
    fn single_sign_change_picks_one(n in 2usize..6, i in 1usize..6, seed in any::<u64>()) {
        prop_assume!(i <= n);
        let d = DiagSpec::new((1..=n).map(|k| k as f64).collect(), vec![1; n]).unwrap();
        let t = ortho(n, seed);
        let a = t.transpose() * d.matrix() * &t;
        let b = sign_action(&a, i);
        let ta = parametrize_sym(&a, &d, 1e-7).unwrap();
        let tb = parametrize_sym(&b, &d, 1e-7).unwrap();
        prop_assert!(in_k_i(&ta, &d, i) != in_k_i(&tb, &d, i));
    }
}

fn block_diag_orthogonal_like(m: &DMatrix<f64>, d: &DiagSpec) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for (a, b) in d.blocks() {
        let s = b - a + 1;
        out.view_mut((a - 1, a - 1), (s, s))
            .copy_from(&m.view((a - 1, a - 1), (s, s)));
    }
    out
}

#[test]
fn to_dmatrix_matches_identity() {
    let i7 = g2forms::Mat7::identity();
    assert_eq!(to_dmatrix(&i7), DMatrix::identity(7, 7));
}
