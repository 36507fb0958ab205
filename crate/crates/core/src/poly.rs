//! Sparse multivariate polynomials with integer coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::mono::{Mono, MAX_VARS};

/// A polynomial in `Z[x0, ..., x7]`.
///
/// Terms are kept sorted by decreasing monomial (lex order, `x0` largest)
/// and never carry a zero coefficient, so structural equality is equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, BigInt)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: alloc::vec![(Mono::ONE, c)] }
        }
    }

    pub fn int(c: i64) -> Poly {
        Poly::constant(BigInt::from(c))
    }

    pub fn var(v: usize) -> Poly {
        Poly::monomial(Mono::var(v, 1), BigInt::one())
    }

    pub fn monomial(m: Mono, c: BigInt) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: alloc::vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(mut terms: Vec<(Mono, BigInt)>) -> Poly {
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Mono, BigInt)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => {
                    if let Some(last) = out.last() {
                        if last.1.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some(last) = out.last() {
            if last.1.is_zero() {
                out.pop();
            }
        }
        Poly { terms: out }
    }

    /// Wraps terms already sorted decreasingly with no repeats or zeros.
    pub(crate) fn from_sorted_unchecked(terms: Vec<(Mono, BigInt)>) -> Poly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, BigInt)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, BigInt)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if self.is_zero() {
            Some(BigInt::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// Coefficient of the constant monomial.
    pub fn constant_term(&self) -> BigInt {
        match self.terms.last() {
            Some((m, c)) if m.is_one() => c.clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn leading_mono(&self) -> Option<Mono> {
        self.terms.first().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.terms.first().map(|t| t.1.clone()).unwrap_or_else(BigInt::zero)
    }

    pub fn coeff_of(&self, m: Mono) -> BigInt {
        match self.terms.binary_search_by(|t| m.cmp(&t.0)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn degree(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exp(var)).max().unwrap_or(0)
    }

    pub fn low_degree(&self, var: usize) -> u32 {
        self.terms.iter().map(|t| t.0.exp(var)).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.total_degree()).max().unwrap_or(0)
    }

    /// Bit mask of the variables that actually occur.
    pub fn var_mask(&self) -> u8 {
        let mut mask = 0u8;
        for (m, _) in &self.terms {
            for v in 0..MAX_VARS {
                if m.exp(v) > 0 {
                    mask |= 1 << v;
                }
            }
        }
        mask
    }

    pub fn contains_var(&self, var: usize) -> bool {
        self.terms.iter().any(|t| t.0.exp(var) > 0)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    /// Divides every coefficient by `c`; the division must be exact.
    pub fn div_scalar(&self, c: &BigInt) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| {
                    debug_assert!((a % c).is_zero());
                    (*m, a / c)
                })
                .collect(),
        }
    }

    pub fn mul_mono(&self, m: Mono) -> Poly {
        Poly { terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.clone())).collect() }
    }

    /// Integer content, carrying the sign of the leading coefficient.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if self.leading_coeff().is_negative() {
            -g
        } else {
            g
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        if c.is_one() {
            self.clone()
        } else {
            self.div_scalar(&c)
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficients with respect to `var`: `self = sum c[i] var^i`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Poly> {
        let d = self.degree(var) as usize;
        let mut buckets: Vec<Vec<(Mono, BigInt)>> = alloc::vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.exp(var) as usize].push((m.without(var), c.clone()));
        }
        // Removing one variable keeps the relative lex order of the rest.
        buckets.into_iter().map(Poly::from_sorted_unchecked).collect()
    }

    pub fn from_coeffs_in(var: usize, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (i, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                debug_assert_eq!(m.exp(var), 0);
                terms.push((m.with_exp(var, i as u32), a.clone()));
            }
        }
        Poly::from_terms(terms)
    }

    /// Leading coefficient with respect to `var`, as a polynomial free of `var`.
    pub fn lc_in(&self, var: usize) -> Poly {
        let d = self.degree(var);
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter(|t| t.0.exp(var) == d)
            .map(|(m, c)| (m.without(var), c.clone()))
            .collect();
        Poly::from_sorted_unchecked(terms)
    }

    /// Substitutes the integer `value` for `var`.
    pub fn eval(&self, var: usize, value: &BigInt) -> Poly {
        if !self.contains_var(var) {
            return self.clone();
        }
        let d = self.degree(var) as usize;
        let mut powers = Vec::with_capacity(d + 1);
        powers.push(BigInt::one());
        for i in 1..=d {
            let next = &powers[i - 1] * value;
            powers.push(next);
        }
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.without(var), c * &powers[m.exp(var) as usize]))
                .collect(),
        )
    }

    /// Evaluates at integer values for every variable.
    pub fn eval_all(&self, values: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, val) in values.iter().enumerate() {
                let e = m.exp(v);
                if e > 0 {
                    t *= num_traits::pow(val.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// `self(var -> var + k)`.
    pub fn shift(&self, var: usize, k: &BigInt) -> Poly {
        if k.is_zero() || !self.contains_var(var) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(var);
        let lin = &Poly::var(var) + &Poly::constant(k.clone());
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &lin) + c;
        }
        acc
    }

    pub fn shift_i(&self, var: usize, k: i64) -> Poly {
        self.shift(var, &BigInt::from(k))
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let terms: Vec<_> = self
            .terms
            .iter()
            .filter(|t| t.0.exp(var) > 0)
            .map(|(m, c)| {
                let e = m.exp(var);
                (m.with_exp(var, e - 1), c * BigInt::from(e))
            })
            .collect();
        Poly::from_terms(terms)
    }

    /// Replaces variable `from` by `to` (which must not occur).
    pub fn rename_var(&self, from: usize, to: usize) -> Poly {
        debug_assert!(from == to || !self.contains_var(to));
        Poly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| (m.without(from).with_exp(to, m.exp(from)), c.clone()))
                .collect(),
        )
    }

    /// Exact division; `None` when `divisor` does not divide `self` in `Z[x]`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if divisor.is_constant() {
            let c = &divisor.terms[0].1;
            if self.terms.iter().all(|t| (&t.1 % c).is_zero()) {
                return Some(self.div_scalar(c));
            }
            return None;
        }
        if divisor.len() == 1 {
            let (dm, dc) = &divisor.terms[0];
            let mut out = Vec::with_capacity(self.len());
            for (m, c) in &self.terms {
                let q = dm.div_of(*m)?;
                let (qc, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                out.push((q, qc));
            }
            return Some(Poly::from_sorted_unchecked(out));
        }
        let (lm, lc) = (&divisor.terms[0].0, &divisor.terms[0].1);
        for v in 0..MAX_VARS {
            if divisor.degree(v) > self.degree(v) {
                return None;
            }
        }
        let mut rem: BTreeMap<Mono, BigInt> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Mono, BigInt)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let q = lm.div_of(m)?;
            let (qc, r) = c.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (dm, dc) in &divisor.terms[1..] {
                let key = dm.mul(q);
                let prod = &qc * dc;
                match rem.get_mut(&key) {
                    Some(slot) => {
                        *slot -= prod;
                        if slot.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -prod);
                    }
                }
            }
            quot.push((q, qc));
        }
        Some(Poly::from_sorted_unchecked(quot))
    }

    /// Pseudo-division with respect to `var`: returns `(q, r, e)` with
    /// `lc^e * self = q * divisor + r` and `deg_var r < deg_var divisor`.
    pub fn pseudo_divrem(&self, divisor: &Poly, var: usize) -> (Poly, Poly, u32) {
        let dd = divisor.degree(var);
        let lc = divisor.lc_in(var);
        let mut r = self.clone();
        let mut q = Poly::zero();
        let mut e = 0;
        while !r.is_zero() && r.degree(var) >= dd {
            let rd = r.degree(var);
            let t = &r.lc_in(var) * &Poly::monomial(Mono::var(var, rd - dd), BigInt::one());
            q = &(&q * &lc) + &t;
            r = &(&r * &lc) - &(&t * divisor);
            e += 1;
        }
        (q, r, e)
    }

    /// Sign-normalised leading coefficient comparison helper.
    pub fn is_lc_negative(&self) -> bool {
        self.leading_coeff().is_negative()
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.iter().map(|t| t.1.bits()).max().unwrap_or(0)
    }

    /// Total order used to make canonical choices (not a monomial order).
    pub fn cmp_canonical(&self, other: &Poly) -> Ordering {
        let la = self.terms.len();
        let lb = other.terms.len();
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0) {
                Ordering::Equal => {}
                o => return o,
            }
            match a.1.cmp(&b.1) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        la.cmp(&lb)
    }
}

fn add_terms(a: &[(Mono, BigInt)], b: &[(Mono, BigInt)], negate_b: bool) -> Poly {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        let c = if negate_b { -&t.1 } else { t.1.clone() };
        out.push((t.0, c));
    }
    Poly { terms: out }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        add_terms(&self.terms, &rhs.terms, false)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        add_terms(&self.terms, &rhs.terms, true)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return Poly { terms: self.terms.iter().map(|(t, a)| (t.mul(*m), a * c)).collect() };
        }
        if self.terms.len() == 1 {
            return rhs * self;
        }
        let mut prods = Vec::with_capacity(self.len() * rhs.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                prods.push((m1.mul(*m2), c1 * c2));
            }
        }
        Poly::from_terms(prods)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", c)?;
            for v in 0..MAX_VARS {
                let e = m.exp(v);
                if e > 0 {
                    write!(f, "*x{}^{}", v, e)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: usize) -> Poly {
        Poly::var(v)
    }

    #[test]
    fn arithmetic_roundtrip() {
        let a = &(&x(0) + &Poly::int(1)) * &(&x(1) - &Poly::int(2));
        let b = &x(0) + &x(2);
        let p = &a * &b;
        assert_eq!(p.div_exact(&b), Some(a.clone()));
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!((&p + &Poly::int(1)).div_exact(&a), None);
        assert_eq!(&p - &p, Poly::zero());
    }

    #[test]
    fn shift_and_derivative() {
        let p = &x(0).pow(3) + &x(1);
        let s = p.shift_i(0, 2);
        assert_eq!(s.eval(0, &BigInt::from(0)), &Poly::int(8) + &x(1));
        assert_eq!(p.derivative(0), x(0).pow(2).scale(&BigInt::from(3)));
    }

    #[test]
    fn coefficients_roundtrip() {
        let p = &(&x(0).pow(2) * &x(1)) + &(&x(0) * &x(2)) - Poly::int(5);
        let c = p.coeffs_in(0);
        assert_eq!(c.len(), 3);
        assert_eq!(Poly::from_coeffs_in(0, &c), p);
        assert_eq!(p.lc_in(0), x(1));
    }

    #[test]
    fn pseudo_division_identity() {
        let a = &(&x(0).pow(3) * &x(1)) + &x(0) + Poly::int(7);
        let b = &(&x(0).pow(2) * &(&x(1) + &Poly::int(1))) - &x(2);
        let (q, r, e) = a.pseudo_divrem(&b, 0);
        let lhs = &b.lc_in(0).pow(e) * &a;
        assert_eq!(lhs, &(&q * &b) + &r);
        assert!(r.degree(0) < 2);
    }
}
