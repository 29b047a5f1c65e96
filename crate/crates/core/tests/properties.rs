use loghh_core::cli::express;
use loghh_core::cli::oracle::dense_rank;
use loghh_core::cyclic::{build_cyclic, hc, CyclicBicomplex};
use loghh_core::exactlin::{rank, smith_normal_form, IntMatrix, ScalarField, SparseMatrix};
use loghh_core::grobner::{groebner_basis, normal_form, parse_poly, Budget, Ideal, MonomialOrder, Poly, PolyRing};
use loghh_core::monoidlat::AffineMonoid;
use proptest::prelude::*;

fn field() -> impl Strategy<Value = ScalarField> {
    prop::sample::select(vec![
        ScalarField::Rationals,
        ScalarField::prime(2).unwrap(),
        ScalarField::prime(3).unwrap(),
        ScalarField::prime(101).unwrap(),
    ])
}

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
}

fn ring(f: ScalarField) -> PolyRing {
    PolyRing::with_options(f, vec!["x".into(), "y".into(), "z".into()], &[], MonomialOrder::DegRevLex, None).unwrap()
}

fn poly(r: &PolyRing, terms: &[(i64, [u32; 3])]) -> Poly {
    let f = r.field;
    r.from_terms(terms.iter().map(|(c, e)| (e.to_vec().into(), f.from_i64(*c))))
}

fn terms() -> impl Strategy<Value = Vec<(i64, [u32; 3])>> {
    prop::collection::vec((-3i64..=3, [0u32..3, 0u32..3, 0u32..3]), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn smith_form_identities(a in matrix(6)) {
        let m = IntMatrix::from_i64(&a);
        prop_assert!(smith_normal_form(&m).verify(&m));
    }

    #[test]
    fn sparse_and_dense_rank_agree(f in field(), a in matrix(7)) {
        let s = SparseMatrix::from_i64(&f, &a);
        let dense = a.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect();
        prop_assert_eq!(rank(&f, &s), dense_rank(&f, dense));
        prop_assert_eq!(rank(&f, &s), rank(&f, &s.transpose()));
    }

    #[test]
    fn ideal_members_reduce_to_zero(f in field(), g in prop::collection::vec(terms(), 1..3), h in terms()) {
        let r = ring(f);
        let gens: Vec<Poly> = g.iter().map(|t| poly(&r, t)).collect();
        let gb = groebner_basis(&Ideal::new(r.clone(), gens.clone()), &Budget::default()).unwrap();
        let member = r.add(&r.mul(&gens[0], &poly(&r, &h)), gens.last().unwrap());
        prop_assert!(normal_form(&r, &member, &gb).is_zero());
        let reduced = normal_form(&r, &poly(&r, &h), &gb);
        prop_assert_eq!(normal_form(&r, &reduced, &gb), reduced);
    }

    #[test]
    fn formatted_polynomials_reparse(f in field(), t in terms()) {
        let r = ring(f);
        let p = poly(&r, &t);
        prop_assert_eq!(parse_poly(&r, &r.format(&p)).unwrap(), p);
    }

    #[test]
    fn theta_images_are_recovered(
        gens in prop::collection::vec(prop::collection::vec(0i64..3, 2), 1..4),
        coeffs in prop::collection::vec(0u64..3, 3),
    ) {
        let gens: Vec<Vec<i64>> = gens.into_iter().filter(|g| g.iter().any(|&x| x != 0)).collect();
        prop_assume!(!gens.is_empty());
        let p = AffineMonoid::new(2, gens.clone()).unwrap();
        let mut v = vec![0i64; 2];
        for (c, g) in coeffs.iter().zip(&gens) {
            for (x, y) in v.iter_mut().zip(g) {
                *x += *c as i64 * y;
            }
        }
        let found = express(&p, &v).unwrap();
        let mut w = vec![0i64; 2];
        for (c, g) in found.iter().zip(&gens) {
            for (x, y) in w.iter_mut().zip(g) {
                *x += *c as i64 * y;
            }
        }
        prop_assert_eq!(w, v);
        prop_assert!(found.iter().sum::<u64>() <= coeffs.iter().take(gens.len()).sum::<u64>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    /// Truncated monogenic algebras `k[x]/(x^e)`: the bicomplex squares to
    /// zero and `HC` does not change when widened.
    #[test]
    fn truncated_polynomial_cyclic(f in field(), e in 2u32..4) {
        let text = format!(
            r#"{{"field": "{}", "total": {{"monoid": {{"free": 0}}, "ring": {{"variables": ["x"], "relations": ["x^{e}"]}}}},
                "grading": {{"weights": {{"x": 1}}}}, "tasks": []}}"#,
            f.name()
        );
        let s = loghh_core::cli::parse_problem(&text).unwrap().to_spec().unwrap();
        let cm = build_cyclic(&s, 3, &Budget::default()).unwrap();
        prop_assert!(CyclicBicomplex::new(&cm, 0..5, 3).squares_to_zero(&cm));
        let a = hc(&cm, 2, 4).unwrap();
        let b = hc(&cm, 2, 5).unwrap();
        prop_assert_eq!(&a.tables, &b.tables);
        prop_assert_eq!(a.dims()[0], e as usize);
    }
}
