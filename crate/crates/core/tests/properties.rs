use proptest::prelude::*;

use specrig::exact::{discriminant, resultant, BiPoly, Field, Mat, Rat, RatFn, UPoly};
use specrig::io::parse_expr;
use specrig::local::difference_poly;
use specrig::puiseux::clusters::{disc_valuation, puiseux_clusters};

fn rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=4).prop_map(|(a, b)| Rat::new(a, b))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    rat().prop_filter("nonzero", |r| !r.is_zero())
}

fn qpoly(max_deg: usize) -> impl Strategy<Value = UPoly<Rat>> {
    prop::collection::vec(rat(), 1..=max_deg + 1).prop_map(|c| UPoly::new(c, &Rat::zero()))
}

fn ratfn() -> impl Strategy<Value = RatFn> {
    (qpoly(3), qpoly(2).prop_filter("denominator", |d| !d.is_zero()))
        .prop_map(|(n, d)| RatFn::new(n, d))
}

/// p(z) / z^k, the shape of matrix entries near a pole.
fn laurent() -> impl Strategy<Value = RatFn> {
    (qpoly(2), 0i64..3).prop_map(|(p, k)| RatFn::from_poly(p).times(&RatFn::monomial(Rat::one(), -k)))
}

fn qmat(n: usize) -> impl Strategy<Value = Mat<Rat>> {
    prop::collection::vec(rat(), n * n).prop_map(move |v| Mat::from_fn(n, n, |i, j| v[i * n + j].clone()))
}

fn invertible(n: usize) -> impl Strategy<Value = Mat<Rat>> {
    qmat(n).prop_filter("invertible", |m| !m.det().is_zero())
}

fn linear_product(roots: &[Rat]) -> UPoly<Rat> {
    roots
        .iter()
        .fold(UPoly::one(&Rat::zero()), |acc, a| acc.times(&UPoly::linear_root(a)))
}

/// A random expression tree printed with explicit parentheses.
fn expr_string() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0u32..20).prop_map(|n| n.to_string()),
        Just("z".to_string()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) + ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a}) - ({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), 0u32..4).prop_map(|(a, e)| format!("({a})^{e}")),
            inner.clone().prop_map(|a| format!("-({a})")),
            (inner, 1u32..5).prop_map(|(a, k)| format!("({a})/(z + {k})")),
        ]
    })
}

/// y^r - c z^a, y - c z^a or y - c, as a polynomial in y over Q(z).
fn branch_factor() -> impl Strategy<Value = BiPoly> {
    (1usize..=3, -3i64..=2, nonzero_rat()).prop_map(|(r, a, c)| {
        let mut co = vec![RatFn::zero(); r + 1];
        co[0] = RatFn::monomial(-c, a);
        co[r] = RatFn::one();
        UPoly::new(co, &RatFn::zero())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn charpoly_is_a_similarity_invariant(m in qmat(3), p in invertible(3)) {
        let pinv = p.inverse().unwrap();
        let conj = p.times(&m).times(&pinv);
        prop_assert_eq!(conj.charpoly(), m.charpoly());
    }

    #[test]
    fn charpoly_over_qz_is_invariant_under_constant_conjugation(
        e in prop::collection::vec(laurent(), 4),
        p in invertible(2),
    ) {
        let m = Mat::from_fn(2, 2, |i, j| e[2 * i + j].clone());
        let pr = p.map(|x| RatFn::constant(x.clone()));
        let pinv = p.inverse().unwrap().map(|x| RatFn::constant(x.clone()));
        let conj = pr.times(&m).times(&pinv);
        prop_assert_eq!(conj.charpoly(), m.charpoly());
    }

    #[test]
    fn resultant_of_split_polynomials(
        a in prop::collection::vec(rat(), 1..4),
        b in prop::collection::vec(rat(), 1..4),
    ) {
        let (f, g) = (linear_product(&a), linear_product(&b));
        let mut want = Rat::one();
        for x in &a {
            for y in &b {
                want = want * (x.clone() - y.clone());
            }
        }
        prop_assert_eq!(resultant(&f, &g).unwrap(), want);
    }

    #[test]
    fn resultant_is_multiplicative_and_graded_symmetric(f in qpoly(3), g in qpoly(3), h in qpoly(2)) {
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
        prop_assume!(f.deg() > 0 && g.deg() > 0);
        let fg = resultant(&f, &g).unwrap();
        let gf = resultant(&g, &f).unwrap();
        let sign = if (f.deg() * g.deg()) % 2 == 0 { Rat::one() } else { -Rat::one() };
        prop_assert_eq!(gf, sign * fg.clone());
        let fh = resultant(&f, &h).unwrap();
        prop_assert_eq!(resultant(&f, &g.times(&h)).unwrap(), fg * fh);
    }

    #[test]
    fn discriminant_vanishes_exactly_on_repeated_roots(a in prop::collection::vec(rat(), 2..5)) {
        let f = linear_product(&a);
        let distinct = (0..a.len()).all(|i| (0..i).all(|j| a[i] != a[j]));
        prop_assert_eq!(discriminant(&f).unwrap().is_zero(), !distinct);
    }

    #[test]
    fn difference_poly_from_roots(a in prop::collection::vec(rat(), 1..5)) {
        let f = linear_product(&a);
        let mut diffs = vec![];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in a.iter().enumerate() {
                if i != j {
                    diffs.push(x.clone() - y.clone());
                }
            }
        }
        prop_assert_eq!(difference_poly(&f), linear_product(&diffs));
    }

    #[test]
    fn printed_rational_functions_reparse(f in ratfn()) {
        let printed = f.display_in("z");
        prop_assert_eq!(parse_expr(&printed, "z").unwrap(), f);
    }

    #[test]
    fn parse_print_parse(s in expr_string()) {
        let f = parse_expr(&s, "z").unwrap();
        let again = parse_expr(&f.display_in("z"), "z").unwrap();
        prop_assert_eq!(again, f);
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn contacts_are_symmetric_up_to_ramification(fs in prop::collection::vec(branch_factor(), 1..4)) {
        let f = fs.iter().skip(1).fold(fs[0].clone(), |acc, g| acc.times(g));
        prop_assume!(!discriminant(&f).unwrap().is_zero());
        let cs = puiseux_clusters(&f, &Rat::zero()).unwrap();
        for i in 0..cs.len() {
            for j in 0..cs.len() {
                let weighted = |a: usize, b: usize| {
                    let mut v: Vec<Rat> = vec![];
                    for _ in 0..cs.clusters[a].r {
                        v.extend(cs.contacts(a, b));
                    }
                    v.sort();
                    v
                };
                prop_assert_eq!(weighted(i, j), weighted(j, i));
            }
        }
        // discriminant valuation equals the ordered pair contact sum
        let dv = disc_valuation(&f).unwrap();
        prop_assert_eq!(cs.pair_contact_sum(), Rat::from(dv));
    }
}
