//! A short randomized run over the library invariants.

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use g2forms::cayley::{automorphism_defect, random_g2, random_triple};
use g2forms::divalg::{are_isomorphic, build_algebra, check_flexible, morphism_defect, DissidentMapSpec};
use g2forms::normalform::{in_cross_section, normal_form, sample_canonical};
use g2forms::orthoparam::{compose, factorize};
use g2forms::sample::{random_orthogonal, random_pds};
use g2forms::symeig::TypeTag;
use g2forms::vecprod7::cross;
use g2forms::Vec7;

fn rand7(rng: &mut ChaCha8Rng) -> Vec7 {
    Vec7::from_fn(|_, _| rng.random_range(-1.0..1.0))
}

/// Report text and whether every check passed.
pub fn run(seed: u64) -> (String, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<(&str, f64, f64)> = Vec::new();

    let mut worst = 0.0f64;
    for _ in 0..50 {
        let x = rand7(&mut rng);
        let y = rand7(&mut rng);
        let p = cross(&x, &y);
        let lhs = p.norm_squared();
        let rhs = x.norm_squared() * y.norm_squared() - x.dot(&y).powi(2);
        worst = worst.max((lhs - rhs).abs()).max(p.dot(&x).abs());
    }
    checks.push(("cross product", worst, 1e-12));

    let worst = (0..20)
        .map(|_| automorphism_defect(&random_g2(&mut rng).matrix))
        .fold(0.0, f64::max);
    checks.push(("g2 sampling", worst, 1e-12));
    let worst = (0..20)
        .map(|_| random_triple(&mut rng).deviation())
        .fold(0.0, f64::max);
    checks.push(("cayley triples", worst, 1e-12));

    let mut worst = 0.0f64;
    for n in 2..=7 {
        let t = random_orthogonal(&mut rng, n);
        let tau = factorize(&t).map(|tau| (compose(&tau) - &t).amax());
        worst = worst.max(tau.unwrap_or(f64::INFINITY));
    }
    checks.push(("polar factorization", worst, 1e-10));

    let mut worst = 0.0f64;
    for tag in TypeTag::ALL {
        let c = sample_canonical(&mut rng, tag);
        let g = random_g2(&mut rng).matrix;
        let d = g.transpose() * c * g;
        let err = match normal_form(&d) {
            Ok(r) if r.params.type_tag == tag && in_cross_section(&r.canonical) => {
                let w = r.witness.matrix;
                (w.transpose() * d * w - r.canonical).amax() + (r.canonical - c).amax()
            }
            _ => f64::INFINITY,
        };
        worst = worst.max(err);
    }
    checks.push(("normal form round trip", worst, 1e-8));

    let d = random_pds(&mut rng, 0.5, 2.0);
    let g = random_g2(&mut rng).matrix;
    let d2 = g.transpose() * d * g;
    let worst = match (DissidentMapSpec::new(d), DissidentMapSpec::new(d2)) {
        (Ok(s1), Ok(s2)) => {
            let a = build_algebra(&s1);
            let b = build_algebra(&s2);
            let flexible = check_flexible(&a, &mut rng, 100, 1e-10);
            match are_isomorphic(&s1, &s2) {
                Ok(Some(sigma)) if flexible => morphism_defect(&a, &b, &sigma.matrix, &mut rng, 100),
                _ => f64::INFINITY,
            }
        }
        _ => f64::INFINITY,
    };
    checks.push(("algebra isomorphism", worst, 1e-9));

    let mut out = String::new();
    let mut ok = true;
    for (name, err, tol) in checks {
        let pass = err <= tol;
        ok &= pass;
        let _ = writeln!(
            out,
            "{} {name} (error {err:.2e}, tolerance {tol:.0e})",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    (out, ok)
}
