//! Random proper hypergeometric summands: every emitted telescoper must pass
//! the full verification identity in the quotient module.

use proptest::prelude::*;

use telesum_core::expr::{format_poly, parse_operator};
use telesum_core::frac::Frac;
use telesum_core::ore::{Action, OreAlgebra, QuotientModule, VariableSpec};
use telesum_core::poly::Poly;
use telesum_core::telescoper::{telescope, verify, Mode};

/// `(a n + b k + c)!^e`.
#[derive(Clone, Debug)]
struct Factorial {
    a: i64,
    b: i64,
    c: i64,
    e: i32,
}

fn linear(a: i64, b: i64, c: i64) -> Frac {
    let p = &(&Poly::var(1).scale(&a.into()) + &Poly::var(0).scale(&b.into())) + &Poly::int(c);
    Frac::from_poly(p)
}

/// `L! (L + 1) ... (L + step)` over `L!`, for a step of 0, 1 or 2.
fn rising(a: i64, b: i64, c: i64, step: i64) -> Frac {
    let mut acc = Frac::one();
    for i in 1..=step {
        acc = &acc * &linear(a, b, c + i);
    }
    for i in 0..-step {
        acc = &acc / &linear(a, b, c - i);
    }
    acc
}

impl Factorial {
    fn ratio_k(&self) -> Frac {
        rising(self.a, self.b, self.c, self.b).pow(self.e)
    }

    fn ratio_n(&self) -> Frac {
        rising(self.a, self.b, self.c, self.a).pow(self.e)
    }
}

fn factorial() -> impl Strategy<Value = Factorial> {
    (0i64..=2, -1i64..=1, 0i64..=2, prop_oneof![Just(1), Just(-1)])
        .prop_map(|(a, b, c, e)| Factorial { a, b, c, e })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn telescopers_verify(fs in prop::collection::vec(factorial(), 1..=3)) {
        let uk = fs.iter().fold(Frac::one(), |acc, f| &acc * &f.ratio_k());
        let un = fs.iter().fold(Frac::one(), |acc, f| &acc * &f.ratio_n());
        let alg = OreAlgebra::new(
            vec![
                VariableSpec { name: "k".into(), action: Action::Shift, summation: true },
                VariableSpec { name: "n".into(), action: Action::Shift, summation: false },
            ],
            vec![],
        )
        .unwrap();
        let names = alg.poly_names().to_vec();
        let gens = [
            format!("({})*Sk - ({})", format_poly(uk.den(), &names), format_poly(uk.num(), &names)),
            format!("({})*Sn - ({})", format_poly(un.den(), &names), format_poly(un.num(), &names)),
        ];
        let gens = gens.iter().map(|g| parse_operator(&alg, g, 1, 0).unwrap()).collect();
        let m = QuotientModule::new(alg, gens).unwrap();
        let res = telescope(&m, Mode::First).unwrap();
        prop_assert!(!res.telescopers.is_empty());
        for t in &res.telescopers {
            prop_assert!(verify(&m, &res.cyclic, &res.dag, t));
        }
    }
}
