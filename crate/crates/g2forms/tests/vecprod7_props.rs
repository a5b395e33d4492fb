use g2forms::vecprod7::{cross, is_closed, m_map, s_invariants, OrientedSubspace3};
use g2forms::{basis, Vec7};
use proptest::prelude::*;

fn vec7() -> impl Strategy<Value = Vec7> {
    proptest::array::uniform7(-1.0f64..1.0).prop_map(|a| Vec7::from_column_slice(&a))
}

fn spanning() -> impl Strategy<Value = OrientedSubspace3> {
    (vec7(), vec7(), vec7())
        .prop_filter_map("degenerate", |(a, b, c)| OrientedSubspace3::from_spanning(&a, &b, &c).ok())
        .prop_filter("ill conditioned", |s| {
            // keep away from nearly dependent spanning sets
            s.basis().iter().all(|b| b.norm() > 0.5)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bilinear_and_antisymmetric(x in vec7(), y in vec7(), z in vec7(), a in -2.0f64..2.0) {
        prop_assert!((cross(&x, &y) + cross(&y, &x)).amax() < 1e-14);
        let lhs = cross(&(x * a + z), &y);
        let rhs = cross(&x, &y) * a + cross(&z, &y);
        prop_assert!((lhs - rhs).amax() < 1e-13);
    }

    #[test]
    fn norm_identity(x in vec7(), y in vec7()) {
        let p = cross(&x, &y);
        let rhs = x.norm_squared() * y.norm_squared() - x.dot(&y).powi(2);
        prop_assert!((p.norm_squared() - rhs).abs() < 1e-12);
        prop_assert!(p.dot(&x).abs() < 1e-13 && p.dot(&y).abs() < 1e-13);
    }

    #[test]
    fn m_map_is_orthogonal(s in spanning(), c in proptest::array::uniform3(-1.0f64..1.0)) {
        let [b1, b2, b3] = *s.basis();
        let v = b1 * c[0] + b2 * c[1] + b3 * c[2];
        let w = b1 * c[2] - b3 * c[0];
        let mv = m_map(&s, &v).unwrap();
        prop_assert!((mv.norm() - v.norm()).abs() < 1e-10);
        let lin = m_map(&s, &(v + w)).unwrap() - mv - m_map(&s, &w).unwrap();
        prop_assert!(lin.norm() < 1e-10);
        prop_assert!((m_map(&s.reversed(), &v).unwrap() + mv).norm() < 1e-10);
    }

    #[test]
    fn invariants_match_m_map(s in spanning(), c in proptest::array::uniform3(-1.0f64..1.0)) {
        let [b1, b2, b3] = *s.basis();
        let v = b1 * c[0] + b2 * c[1] + b3 * c[2];
        prop_assume!(v.norm() > 0.1);
        let v = v.normalize();
        let mv = m_map(&s, &v).unwrap();
        let (align, axis) = s_invariants(&s);
        prop_assert!((s.project(&mv).norm() - align).abs() < 1e-9);
        prop_assert!((cross(&v, &mv) - axis).amax() < 1e-9);
    }

    #[test]
    fn vectors_outside_rejected(s in spanning(), x in vec7()) {
        let off = x - s.project(&x);
        prop_assume!(off.norm() > 1e-3);
        prop_assert!(m_map(&s, &x).is_err());
    }
}

#[test]
fn associative_subspace_is_closed() {
    let s = OrientedSubspace3::new(basis(0), basis(1), basis(2)).unwrap();
    assert!(is_closed(&s, 1e-12));
    let t = OrientedSubspace3::new(basis(0), basis(1), basis(3)).unwrap();
    assert!(!is_closed(&t, 1e-3));
}
