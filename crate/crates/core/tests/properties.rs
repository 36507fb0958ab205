use proptest::prelude::*;

#[path = "common/strategies.rs"]
mod strategies;
use strategies::*;

use telesum_core::frac::{bezout_solve, Frac, N};
use telesum_core::gcd::gcd;
use telesum_core::mono::Mono;
use telesum_core::ore::{Action, OpMono, OreAlgebra, OreOperator, QuotientModule, VariableSpec};
use telesum_core::poly::Poly;
use telesum_core::series::{laurent_expand, Point};
use telesum_core::shift::integer_shift_set;
use telesum_core::shiftless::{partial_fractions, shiftless_decompose};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lagrange_identity(
        l in prop::collection::vec(poly(3, 2), 2..=4),
        u in small_rational(),
        v in small_rational(),
    ) {
        lagrange_case(l, u, v)?;
    }

    #[test]
    fn canonical_form_laws(r1 in rational(), r2 in rational(), a in -3i64..=3, b in 1i64..=3) {
        canonical_case(r1, r2, a, b)?;
    }

    #[test]
    fn gcd_divides_and_bezout_recombines(a in nonzero_poly(3, 2), b in nonzero_poly(3, 2), t in poly(3, 2)) {
        let g = gcd(&a, &b);
        prop_assert!(a.div_exact(&g).is_some());
        prop_assert!(b.div_exact(&g).is_some());
        let (ua, ub) = (Frac::from_poly(a.div_exact(&g).unwrap()), Frac::from_poly(b.div_exact(&g).unwrap()));
        if ub.deg_n() > 0 {
            let target = Frac::from_poly(t);
            if let Ok((s, q)) = bezout_solve(&target, &ua, &ub) {
                prop_assert_eq!(&(&s * &ua) + &(&q * &ub), target);
                prop_assert!(s.deg_n() < ub.deg_n());
            }
        }
    }

    #[test]
    fn integer_shift_set_brute_force(
        fa in prop::collection::vec(factor(), 1..3),
        fb in prop::collection::vec(factor(), 1..3),
    ) {
        let a = fa.iter().fold(Poly::one(), |acc, f| &acc * f);
        let b = fb.iter().fold(Poly::one(), |acc, f| &acc * f);
        let brute: Vec<i64> =
            (-20..=20).filter(|&k| gcd(&a.shift_i(N, k), &b).degree(N) > 0).collect();
        prop_assert_eq!(integer_shift_set(&a, &b), brute);
    }

    #[test]
    fn laurent_product(f in small_rational(), g in small_rational(), pt in -3i64..=3) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let point = Point::Integer(pt);
        let order = 3;
        let fs = laurent_expand(&f, point, order + 8);
        let gs = laurent_expand(&g, point, order + 8);
        let prod = laurent_expand(&(&f * &g), point, order);
        let mul = fs.mul(&gs);
        for e in prod.valuation().min(0)..order {
            prop_assert_eq!(prod.coeff(e), mul.coeff(e));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partial_fraction_round_trip(r in rational()) {
        let classes = shiftless_decompose(r.den());
        let pf = partial_fractions(&r, &classes).unwrap();
        prop_assert_eq!(pf.recombine(&classes), r);
    }
}

fn mixed_algebra() -> OreAlgebra {
    OreAlgebra::new(
        vec![
            VariableSpec { name: "x".into(), action: Action::Differential, summation: false },
            VariableSpec { name: "n".into(), action: Action::Shift, summation: true },
        ],
        vec!["a".into()],
    )
    .unwrap()
}

fn operator() -> impl Strategy<Value = OreOperator> {
    prop::collection::vec(((0u32..=2, 0u32..=2), poly(2, 2)), 1..4).prop_map(|terms| {
        let mut op = OreOperator::zero();
        for ((i, j), c) in terms {
            let m = OpMono(Mono::from_exps(&[i, j]));
            op.add_term(m, &Frac::from_poly(c));
        }
        op
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn operator_product_is_associative(a in operator(), b in operator(), c in operator()) {
        let alg = mixed_algebra();
        prop_assert_eq!(alg.mul(&alg.mul(&a, &b), &c), alg.mul(&a, &alg.mul(&b, &c)));
    }

    #[test]
    fn normal_form_is_idempotent(op in operator()) {
        let alg = mixed_algebra();
        // Bessel squared: staircase {1, S_n, D_x}.
        let gens = [
            "Dx^2 - (2*n - 1)/x*Dx - 2*Sn + 2",
            "Dx*Sn + Dx + 2*(n + 1)/x*Sn - 2*n/x",
            "Sn^2 - 2*(n + 1)/x*Dx - 4*(n + 1)^2/x^2*Sn + (4*n^2 + 4*n - x^2)/x^2",
        ];
        let gens = gens.iter().map(|g| telesum_core::expr::parse_operator(&alg, g, 1, 0).unwrap()).collect();
        let m = QuotientModule::new(alg, gens).unwrap();
        let nf = m.normal_form(&op);
        let mut back = OreOperator::zero();
        for (mono, c) in m.staircase().iter().zip(&nf) {
            back.add_term(*mono, c);
        }
        prop_assert_eq!(m.normal_form(&back), nf);
    }
}
