use alpha_futaki::character::{alpha_futaki_axis, classical_futaki_axis};
use alpha_futaki::family::FamilySpec;
use alpha_futaki::integrate::{
    integrate_poly, integrate_poly_boundary, integrate_poly_facet, integrate_radial, volume,
};
use alpha_futaki::polytope::{cube, standard_blowup_polytope};
use alpha_futaki::{MultiPoly, RadialSum, Rational};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-1000i64..1000, 1i64..200).prop_map(|(p, q)| Rational::new(p, q))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |r| !r.is_zero())
}

/// Slab parameter in (1, 6].
fn slab_b() -> impl Strategy<Value = Rational> {
    (1i64..50, 1i64..10)
        .prop_map(|(p, q)| Rational::one() + Rational::new(p, q))
        .prop_filter("b <= 6", |b| *b <= Rational::integer(6))
}

/// Random multilinear polynomial in `n` variables.
fn poly(n: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=1, n), -20i64..20, 1i64..6), 1..5).prop_map(move |terms| {
        terms.into_iter().fold(MultiPoly::zero(n), |acc, (e, p, q)| {
            let m = MultiPoly::monomial(Rational::new(p, q), e).unwrap();
            acc.try_add(&m).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn field_axioms(a in rational(), b in rational(), c in rational(), d in nonzero_rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a + Rational::zero(), a.clone());
        prop_assert_eq!(&a * Rational::one(), a.clone());
        prop_assert!((&a + (-a.clone())).is_zero());
        prop_assert!((&d * d.recip().unwrap()).is_one());
        prop_assert_eq!((&a / &d) * &d, a.clone());
    }

    #[test]
    fn rational_text_round_trip(a in rational()) {
        let s = a.to_string();
        prop_assert_eq!(s.parse::<Rational>().unwrap(), a.clone());
        let j = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&j).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_eval_is_a_ring_map(p in poly(3), q in poly(3), x in prop::collection::vec(rational(), 3)) {
        let sum = p.try_add(&q).unwrap().eval(&x).unwrap();
        prop_assert_eq!(sum, p.eval(&x).unwrap() + q.eval(&x).unwrap());
        let prod = p.try_mul(&q).unwrap().eval(&x).unwrap();
        prop_assert_eq!(prod, p.eval(&x).unwrap() * q.eval(&x).unwrap());
    }

    #[test]
    fn integration_is_linear(p in poly(2), q in poly(2), c in rational(), b in slab_b()) {
        let body = standard_blowup_polytope(2, &b).unwrap();
        let combo = p.try_add(&q.scale(&c)).unwrap();
        prop_assert_eq!(
            integrate_poly(&body, &combo).unwrap(),
            integrate_poly(&body, &p).unwrap() + &c * integrate_poly(&body, &q).unwrap()
        );
        prop_assert_eq!(
            integrate_poly_boundary(&body, &combo).unwrap(),
            integrate_poly_boundary(&body, &p).unwrap() + &c * integrate_poly_boundary(&body, &q).unwrap()
        );
    }

    #[test]
    fn integration_is_additive_over_domains(p in poly(2)) {
        // [0,2]^2 splits into four unit squares.
        let big = cube(2, &Rational::zero(), &Rational::integer(2)).unwrap();
        let whole = integrate_poly(&big, &p).unwrap();
        let unit = cube(2, &Rational::zero(), &Rational::one()).unwrap();
        let mut parts = Rational::zero();
        for t in [[0, 0], [1, 0], [0, 1], [1, 1]] {
            parts += integrate_poly(&unit.translate(&t).unwrap(), &p).unwrap();
        }
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn translation_covariance(p in poly(3), t in prop::collection::vec(-3i64..4, 3), b in slab_b()) {
        let body = standard_blowup_polytope(3, &b).unwrap();
        let moved = body.translate(&t).unwrap();
        let tr: Vec<Rational> = t.iter().map(|&v| Rational::integer(v)).collect();
        let pulled = p.shift(&tr).unwrap();
        prop_assert_eq!(integrate_poly(&moved, &p).unwrap(), integrate_poly(&body, &pulled).unwrap());
        prop_assert_eq!(
            integrate_poly_boundary(&moved, &p).unwrap(),
            integrate_poly_boundary(&body, &pulled).unwrap()
        );
        prop_assert_eq!(volume(&moved), volume(&body));
        prop_assert_eq!(moved.is_delzant(), body.is_delzant());
    }

    #[test]
    fn radial_integral_is_linear(
        k1 in -8i32..3, k2 in -8i32..3, c in rational(), b in slab_b(), n in 2usize..5
    ) {
        let f = RadialSum::term(MultiPoly::var(n, 0).unwrap(), k1);
        let g = RadialSum::power(n, Rational::one(), k2);
        let lhs = integrate_radial(n, &b, &f.try_add(&g.scale(&c)).unwrap()).unwrap();
        let rhs = integrate_radial(n, &b, &f).unwrap() + integrate_radial(n, &b, &g).unwrap().scale(&c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn radial_agrees_with_triangulation(p in poly(3), b in slab_b()) {
        let body = standard_blowup_polytope(3, &b).unwrap();
        let exact = integrate_radial(3, &b, &RadialSum::from_poly(p.clone())).unwrap();
        prop_assert!(exact.is_rational());
        prop_assert_eq!(exact.rational, integrate_poly(&body, &p).unwrap());
    }

    #[test]
    fn facet_order_is_irrelevant(b in slab_b(), seed in 0u64..1000) {
        let body = standard_blowup_polytope(3, &b).unwrap();
        let mut order: Vec<usize> = (0..body.facet_count()).collect();
        let k = order.len();
        for i in 0..k {
            order.swap(i, (seed as usize * 7 + i * 3) % k);
        }
        let shuffled = body.permuted(&order).unwrap();
        prop_assert_eq!(shuffled.is_delzant(), body.is_delzant());
        prop_assert_eq!(volume(&shuffled), volume(&body));
        let x1 = MultiPoly::var(3, 0).unwrap();
        prop_assert_eq!(
            integrate_poly_boundary(&shuffled, &x1).unwrap(),
            integrate_poly_boundary(&body, &x1).unwrap()
        );
        prop_assert_eq!(shuffled.blowup_slab_parameter(), Some(b));
    }

    #[test]
    fn each_vertex_is_simple(b in slab_b(), n in 2usize..5) {
        let body = standard_blowup_polytope(n, &b).unwrap();
        for (i, v) in body.vertices().iter().enumerate() {
            prop_assert_eq!(body.tight_facets(i).len(), n);
            prop_assert!(body.contains(v));
        }
    }

    #[test]
    fn facet_integrals_sum_to_boundary(p in poly(2), b in slab_b()) {
        let body = standard_blowup_polytope(2, &b).unwrap();
        let total: Rational = (0..body.facet_count()).map(|i| integrate_poly_facet(&body, i, &p).unwrap()).sum();
        prop_assert_eq!(total, integrate_poly_boundary(&body, &p).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn character_is_linear_in_couplings(
        a_num in 2i64..60, b in slab_b(), alpha0 in rational(), alpha1 in rational()
    ) {
        let a = Rational::new(a_num, 2);
        let Ok(spec) = FamilySpec::new(2, a, b) else { return Ok(()) };
        let one = Rational::one();
        let zero = Rational::zero();
        let full = alpha_futaki_axis(&spec, 0, &alpha0, &alpha1).unwrap();
        let parts = &alpha0 * alpha_futaki_axis(&spec, 0, &one, &zero).unwrap()
            + &alpha1 * alpha_futaki_axis(&spec, 0, &zero, &one).unwrap();
        prop_assert_eq!(full, parts);
        let classical = classical_futaki_axis(&standard_blowup_polytope(2, spec.b()).unwrap(), 0).unwrap();
        prop_assert_eq!(alpha_futaki_axis(&spec, 1, &Rational::integer(2), &zero).unwrap(), classical);
    }

    #[test]
    fn determinant_matches_eigenvalues(
        n in 2usize..6, b in slab_b(), a_num in 2i64..80,
        w in prop::collection::vec(1i64..30, 5), t in 1i64..99
    ) {
        let Ok(spec) = FamilySpec::new(n, Rational::new(a_num, 3), b.clone()) else { return Ok(()) };
        let total: i64 = w[..n].iter().sum();
        let big_x = Rational::one() + (&b - Rational::one()) * Rational::new(t, 100);
        let x: Vec<Rational> = w[..n].iter().map(|&wi| Rational::new(wi, total) * &big_x).collect();
        prop_assert_eq!(spec.jacobian_determinant(&x).unwrap(), spec.determinant_factored(&x).unwrap());
        prop_assert_eq!(spec.minor_sum(&x).unwrap(), spec.minor_sum_radial().eval(&x).unwrap());
    }
}
