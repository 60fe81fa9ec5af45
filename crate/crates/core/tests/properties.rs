use proptest::prelude::*;

use twistlab::characters::{jacobi, jacobi_slow};
use twistlab::config::{OutputFormat, RunConfig};
use twistlab::ecurve::{build_curve, TraceCache};
use twistlab::famstats::TestFunction;
use twistlab::ffield::{build_extension, FieldElem, FieldSpec};
use twistlab::fqpoly::iter_family;
use twistlab::lfunction::{spectral, twist_lpoly};
use twistlab::Poly;

fn poly5(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0i64..5, 0..=max_deg + 1).prop_map(|c| Poly::from_i64(5, &c))
}

fn nonzero5(max_deg: usize) -> impl Strategy<Value = Poly> {
    poly5(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn division_identity(a in poly5(8), b in nonzero5(4)) {
        let (q, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(q.mul(&b).add(&r), a);
        prop_assert!(r.is_zero() || r.deg() < b.deg());
    }

    #[test]
    fn gcd_divides_both(a in nonzero5(6), b in nonzero5(6)) {
        let g = a.gcd(&b).unwrap();
        prop_assert!(g.is_monic());
        prop_assert!(g.divides(&a) && g.divides(&b));
    }

    #[test]
    fn factorization_reassembles(f in nonzero5(7)) {
        prop_assume!(!f.is_constant());
        let factors = f.factor().unwrap();
        let product = factors.iter().fold(Poly::one(5), |acc, (q, e)| acc.mul(&q.pow(*e)));
        prop_assert_eq!(product, f.monic());
        for (q, _) in &factors {
            prop_assert!(q.is_irreducible().unwrap());
        }
    }

    #[test]
    fn jacobi_fast_matches_slow(f in poly5(6), d in nonzero5(5)) {
        let d = d.monic();
        prop_assume!(d.is_squarefree().unwrap() && !d.is_constant());
        prop_assert_eq!(jacobi(&f, &d), jacobi_slow(&f, &d));
    }

    #[test]
    fn jacobi_is_multiplicative(f in nonzero5(4), g in nonzero5(4), d in nonzero5(4)) {
        let d = d.monic();
        prop_assume!(d.is_squarefree().unwrap() && !d.is_constant());
        prop_assert_eq!(jacobi(&f.mul(&g), &d), jacobi(&f, &d) * jacobi(&g, &d));
    }

    #[test]
    fn field_inverse_and_logs(x in 1u64..625) {
        let f = build_extension(FieldSpec::new(5).unwrap(), 4).unwrap();
        let x = FieldElem(x);
        let inv = f.inv(x).unwrap();
        prop_assert_eq!(f.mul(x, inv), FieldElem::ONE);
        let l = f.log(x).unwrap();
        prop_assert_eq!(f.exp(l), x);
        prop_assert_eq!(f.quad_char(x) == 1, l.is_multiple_of(2));
    }

    #[test]
    fn zech_addition_matches_addition(x in 0u64..343, y in 0u64..343) {
        let f = build_extension(FieldSpec::new(7).unwrap(), 3).unwrap();
        let (x, y) = (FieldElem(x), FieldElem(y));
        let s = f.log_add(f.log_raw(x), f.log_raw(y));
        prop_assert_eq!(s, f.log_raw(f.add(x, y)));
    }

    #[test]
    fn test_function_shape(nu in 0.01f64..=1.0, y in -2.0f64..2.0, x in -50.0f64..50.0) {
        let phi = TestFunction::new(nu, 1.0).unwrap();
        prop_assert_eq!(phi.phi_hat(y), phi.phi_hat(-y));
        prop_assert!(phi.phi_hat(y) >= 0.0);
        prop_assert!(y.abs() < nu || phi.phi_hat(y) == 0.0);
        prop_assert!(phi.phi(x) >= 0.0 && phi.phi(x) <= 1.0);
    }

    #[test]
    fn config_round_trip(p in prop::sample::select(vec![5u32, 7, 11]), n in 1usize..8, nu in 0.01f64..1.0,
                         ell in prop::option::of(2u32..7), workers in 0usize..16, csv in any::<bool>()) {
        let cfg = RunConfig {
            p, n, nu, ell, workers,
            class: Some("1,1".into()),
            format: if csv { OutputFormat::Csv } else { OutputFormat::Json },
            ..RunConfig::default()
        };
        let text = cfg.to_json();
        let back = RunConfig::from_json(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_json(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn twist_l_polynomials_are_well_formed(idx in 0usize..80) {
        let curve = build_curve(Poly::from_i64(5, &[0, 1]), Poly::from_i64(5, &[1])).unwrap();
        let d = iter_family(3, &curve.finite_conductor, None).unwrap().nth(idx).unwrap();
        let cache = TraceCache::new(curve);
        let l = twist_lpoly(&cache, &d).unwrap();
        prop_assert_eq!(l.degree(), 7);
        prop_assert!(l.satisfies_functional_equation());
        let sd = spectral(&l).unwrap();
        prop_assert!(sd.rh_error < 1e-8);
        prop_assert_eq!(sd.rank.is_multiple_of(2), sd.eps == 1);
        prop_assert!(sd.rank <= 7);
        let det = sd.det();
        prop_assert!((det.re - (-1f64).powi(7) * sd.eps as f64).abs() < 1e-8 && det.im.abs() < 1e-8);
    }
}
