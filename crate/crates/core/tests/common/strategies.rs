#![allow(dead_code)]
//! Random inputs shared by the property tests and the acceptance target.

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use num_bigint::BigInt;

use telesum_core::cyclic::{adjoint_apply, lagrange_bilinear, operator_apply};
use telesum_core::frac::{Frac, N};
use telesum_core::mono::Mono;
use telesum_core::poly::Poly;
use telesum_core::reduction::{AdjointOperator, Reducer};

pub const X: usize = 1;

/// Polynomial in `n` and `x` with exponents below `deg + 1`.
pub fn poly(deg: u32, nvars: usize) -> impl Strategy<Value = Poly> {
    let exps = (0..=deg, 0..=deg);
    prop::collection::vec((exps, -4i64..=4), 1..5).prop_map(move |terms| {
        Poly::from_terms(
            terms
                .into_iter()
                .map(|((a, b), c)| {
                    let b = if nvars > 1 { b } else { 0 };
                    (Mono::from_exps(&[a, b]), BigInt::from(c))
                })
                .collect(),
        )
    })
}

pub fn nonzero_poly(deg: u32, nvars: usize) -> impl Strategy<Value = Poly> {
    poly(deg, nvars).prop_filter("nonzero", |p| !p.is_zero())
}

/// Monic-in-`n` linear or quadratic factors with a random shift.
pub fn factor() -> impl Strategy<Value = Poly> {
    (0usize..4, -3i64..=3).prop_map(|(kind, h)| {
        let n = Poly::var(N);
        let x = Poly::var(X);
        let base = match kind {
            0 => &n + &Poly::int(2),
            1 => &n - &Poly::int(2),
            2 => &(&n * &n) + &Poly::int(1),
            _ => &(&n * &n) + &x,
        };
        base.shift_i(N, h)
    })
}

pub fn rational() -> impl Strategy<Value = Frac> {
    (poly(3, 2), prop::collection::vec((factor(), 1u32..=2), 0..3)).prop_map(|(num, dens)| {
        let den = dens.iter().fold(Poly::one(), |acc, (f, e)| &acc * &f.pow(*e));
        Frac::new(num, den)
    })
}

pub fn small_rational() -> impl Strategy<Value = Frac> {
    (poly(2, 2), prop::collection::vec(factor(), 0..2)).prop_map(|(num, dens)| {
        let den = dens.iter().fold(Poly::one(), |acc, f| &acc * f);
        Frac::new(num, den)
    })
}

/// `L* = x^2 (n - 2) S^-3 - n(4n^2 - x^2 - 4n) S^-2 + n(4n^2 - x^2 - 4n) S^-1 - x^2 (n + 2)`.
pub fn sample_adjoint() -> AdjointOperator {
    let n = Poly::var(N);
    let x2 = &Poly::var(X) * &Poly::var(X);
    let mid = &n * &(&(&(&Poly::int(4) * &(&n * &n)) - &x2) - &(&Poly::int(4) * &n));
    AdjointOperator::new(vec![-(&x2 * &(&n + &Poly::int(2))), mid.clone(), -mid, &x2 * &(&n - &Poly::int(2))])
}

/// `u L(v) - L*(u) v = Delta_n(P_L(u, v))` for `L = sum_i l[i] S_n^i`.
pub fn lagrange_case(l: Vec<Poly>, u: Frac, v: Frac) -> Result<(), TestCaseError> {
    let l: Vec<Frac> = l.into_iter().map(Frac::from_poly).collect();
    let lhs = &(&u * &operator_apply(&l, &v)) - &(&adjoint_apply(&l, &u) * &v);
    let p = lagrange_bilinear(&l, &u, l.len() - 1);
    let w = operator_apply(&p, &v);
    prop_assert_eq!(lhs, &w.shift(N, 1) - &w);
    Ok(())
}

/// Linearity, idempotence, vanishing on the image and preimage soundness of
/// the canonical form modulo the image of [`sample_adjoint`].
pub fn canonical_case(r1: Frac, r2: Frac, a: i64, b: i64) -> Result<(), TestCaseError> {
    let mut red = Reducer::new(sample_adjoint());
    let adj = red.adjoint().clone();
    let c1 = red.canonical_form(&r1);
    let c2 = red.canonical_form(&r2);
    prop_assert_eq!(&(&r1 - &c1.value), &adj.apply(&c1.preimage));
    prop_assert_eq!(&(&r2 - &c2.value), &adj.apply(&c2.preimage));
    let (a, b) = (Frac::int(a), &Frac::int(b) * &Frac::var(X));
    let combo = &(&a * &r1) + &(&b * &r2);
    let cc = red.canonical_form(&combo);
    prop_assert_eq!(&cc.value, &(&(&a * &c1.value) + &(&b * &c2.value)));
    prop_assert_eq!(&(&combo - &cc.value), &adj.apply(&cc.preimage));
    let again = red.canonical_form(&c1.value);
    prop_assert_eq!(&again.value, &c1.value);
    let image = adj.apply(&r1);
    let ci = red.canonical_form(&image);
    prop_assert!(ci.value.is_zero());
    prop_assert_eq!(&image, &adj.apply(&ci.preimage));
    Ok(())
}
