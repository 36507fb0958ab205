//! Rational functions over `Q` in the engine's variables.
//!
//! A single fraction type backs the three coefficient domains:
//! [`ParamScalar`] (elements of `K`, free of the summation variable),
//! [`UniPoly`] (elements of `K[n]`, denominator free of `n`) and
//! [`RationalFunction`] (elements of `K(n)`).  Variable 0 is always `n`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::gcd::{gcd, gcd_many};
use crate::poly::Poly;

/// The summation variable's index in every [`Poly`].
pub const N: usize = 0;

/// `num / den` in lowest terms with a positive leading coefficient in `den`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frac {
    num: Poly,
    den: Poly,
}

/// An element of the coefficient field `K` (free of `n`).
pub type ParamScalar = Frac;
/// An element of `K[n]` (denominator free of `n`).
pub type UniPoly = Frac;
/// An element of `K(n)`.
pub type RationalFunction = Frac;

impl Default for Frac {
    fn default() -> Self {
        Frac::zero()
    }
}

impl Frac {
    pub fn zero() -> Frac {
        Frac { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Frac {
        Frac::from_poly(Poly::one())
    }

    pub fn int(c: i64) -> Frac {
        Frac::from_poly(Poly::int(c))
    }

    pub fn rational(a: i64, b: i64) -> Frac {
        Frac::new(Poly::int(a), Poly::int(b))
    }

    pub fn var(v: usize) -> Frac {
        Frac::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Frac {
        Frac { num: p, den: Poly::one() }
    }

    pub fn from_bigint(c: BigInt) -> Frac {
        Frac::from_poly(Poly::constant(c))
    }

    /// Builds and normalises `num / den`.
    pub fn new(num: Poly, den: Poly) -> Frac {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Frac::zero();
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        if den.is_lc_negative() {
            num = -num;
            den = -den;
        }
        Frac { num, den }
    }

    /// Trusts that `num / den` is already in lowest terms.
    pub(crate) fn from_parts_unchecked(num: Poly, den: Poly) -> Frac {
        debug_assert!(!den.is_lc_negative());
        Frac { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// True for elements of `K`.
    pub fn is_param_scalar(&self) -> bool {
        !self.contains_var(N)
    }

    /// True for elements of `K[n]`.
    pub fn is_unipoly(&self) -> bool {
        !self.den.contains_var(N)
    }

    /// The rational constant this fraction equals, if it is one.
    pub fn as_rational(&self) -> Option<(BigInt, BigInt)> {
        Some((self.num.constant_value()?, self.den.constant_value()?))
    }

    pub fn inv(&self) -> Frac {
        assert!(!self.is_zero(), "inverse of zero");
        let (mut n, mut d) = (self.den.clone(), self.num.clone());
        if d.is_lc_negative() {
            n = -n;
            d = -d;
        }
        Frac { num: n, den: d }
    }

    pub fn pow(&self, e: i32) -> Frac {
        if e < 0 {
            return self.inv().pow(-e);
        }
        Frac { num: self.num.pow(e as u32), den: self.den.pow(e as u32) }
    }

    pub fn scale_int(&self, c: &BigInt) -> Frac {
        self * &Frac::from_bigint(c.clone())
    }

    /// `self(v -> v + k)`.
    pub fn shift(&self, v: usize, k: i64) -> Frac {
        if k == 0 || !self.contains_var(v) {
            return self.clone();
        }
        let k = BigInt::from(k);
        let num = self.num.shift(v, &k);
        let den = self.den.shift(v, &k);
        // Shifting is a ring automorphism: lowest terms are preserved and the
        // leading coefficient of the lex-leading term is unchanged.
        Frac { num, den }
    }

    pub fn derivative(&self, v: usize) -> Frac {
        if !self.contains_var(v) {
            return Frac::zero();
        }
        if self.den.is_constant() {
            return Frac { num: self.num.derivative(v), den: self.den.clone() };
        }
        // (a/b)' = (a' b - a b') / b^2, reduced through g = gcd(b, b').
        let db = self.den.derivative(v);
        let g = gcd(&self.den, &db);
        let b_g = self.den.div_exact(&g).unwrap();
        let db_g = db.div_exact(&g).unwrap();
        let num = &(&self.num.derivative(v) * &b_g) - &(&self.num * &db_g);
        Frac::new(num, &self.den * &b_g)
    }

    /// Substitutes an integer for variable `v`; `None` at a pole.
    pub fn eval(&self, v: usize, value: &BigInt) -> Option<Frac> {
        let d = self.den.eval(v, value);
        if d.is_zero() {
            return None;
        }
        Some(Frac::new(self.num.eval(v, value), d))
    }

    // ----- K[n] views -------------------------------------------------------

    /// Degree in `n` of the numerator (for elements of `K[n]`).
    pub fn deg_n(&self) -> u32 {
        self.num.degree(N)
    }

    /// Coefficient of `n^i` as an element of `K`.
    pub fn coeff_n(&self, i: u32) -> ParamScalar {
        debug_assert!(self.is_unipoly());
        let c = self.num.coeffs_in(N);
        match c.into_iter().nth(i as usize) {
            Some(p) => Frac::new(p, self.den.clone()),
            None => Frac::zero(),
        }
    }

    pub fn coeffs_n(&self) -> Vec<ParamScalar> {
        debug_assert!(self.is_unipoly());
        if self.is_zero() {
            return Vec::new();
        }
        self.num.coeffs_in(N).into_iter().map(|p| Frac::new(p, self.den.clone())).collect()
    }

    pub fn from_coeffs_n(coeffs: &[ParamScalar]) -> UniPoly {
        let mut acc = Frac::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &Frac::var(N)) + c;
        }
        acc
    }

    pub fn lc_n(&self) -> ParamScalar {
        Frac::new(self.num.lc_in(N), self.den.clone())
    }

    /// Monic version in `K[n]`.
    pub fn monic_n(&self) -> UniPoly {
        if self.is_zero() {
            return Frac::zero();
        }
        let lc = self.num.lc_in(N);
        Frac::new(self.num.clone(), lc)
    }

    /// Numerator and denominator as elements of `K[n]`, the denominator monic.
    pub fn numerator_n(&self) -> UniPoly {
        let lc = self.den.lc_in(N);
        Frac::new(self.num.clone(), lc)
    }

    pub fn denominator_n(&self) -> UniPoly {
        Frac::new(self.den.clone(), self.den.lc_in(N))
    }
}

fn add_frac(a: &Frac, b: &Frac, negate: bool) -> Frac {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate { -b } else { b.clone() };
    }
    let bn = if negate { -&b.num } else { b.num.clone() };
    if a.den == b.den {
        let num = &a.num + &bn;
        if a.den.is_one() {
            return Frac { num, den: Poly::one() };
        }
        return Frac::new(num, a.den.clone());
    }
    if a.den.is_one() {
        return Frac::from_parts_unchecked(&(&a.num * &b.den) + &bn, b.den.clone());
    }
    if b.den.is_one() {
        return Frac::from_parts_unchecked(&a.num + &(&bn * &a.den), a.den.clone());
    }
    let g = gcd(&a.den, &b.den);
    let ad = a.den.div_exact(&g).unwrap();
    let bd = b.den.div_exact(&g).unwrap();
    let num = &(&a.num * &bd) + &(&bn * &ad);
    if num.is_zero() {
        return Frac::zero();
    }
    let den = &a.den * &bd;
    if g.is_one() {
        return Frac::from_parts_unchecked(num, den);
    }
    let h = gcd(&num, &g);
    if h.is_one() {
        Frac::from_parts_unchecked(num, den)
    } else {
        Frac::new(num.div_exact(&h).unwrap(), den.div_exact(&h).unwrap())
    }
}

fn mul_frac(a: &Frac, b: &Frac) -> Frac {
    if a.is_zero() || b.is_zero() {
        return Frac::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return Frac { num: &a.num * &b.num, den: Poly::one() };
    }
    let g1 = gcd(&a.num, &b.den);
    let g2 = gcd(&b.num, &a.den);
    let an = a.num.div_exact(&g1).unwrap();
    let bd = b.den.div_exact(&g1).unwrap();
    let bn = b.num.div_exact(&g2).unwrap();
    let ad = a.den.div_exact(&g2).unwrap();
    let mut num = &an * &bn;
    let mut den = &ad * &bd;
    if den.is_lc_negative() {
        num = -num;
        den = -den;
    }
    Frac { num, den }
}

impl Add for &Frac {
    type Output = Frac;
    fn add(self, rhs: &Frac) -> Frac {
        add_frac(self, rhs, false)
    }
}

impl Sub for &Frac {
    type Output = Frac;
    fn sub(self, rhs: &Frac) -> Frac {
        add_frac(self, rhs, true)
    }
}

impl Mul for &Frac {
    type Output = Frac;
    fn mul(self, rhs: &Frac) -> Frac {
        mul_frac(self, rhs)
    }
}

impl Div for &Frac {
    type Output = Frac;
    fn div(self, rhs: &Frac) -> Frac {
        mul_frac(self, &rhs.inv())
    }
}

impl Neg for &Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac { num: -self.num, den: self.den }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for Frac {
            type Output = Frac;
            fn $f(self, rhs: Frac) -> Frac {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl fmt::Debug for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{:?}", self.num)
        } else {
            write!(f, "({:?})/({:?})", self.num, self.den)
        }
    }
}

/// Content of `p` with respect to `n`: the gcd of its coefficients in `n`.
pub fn content_n(p: &Poly) -> Poly {
    if !p.contains_var(N) {
        return p.clone();
    }
    gcd_many(p.coeffs_in(N).iter())
}

/// `p` divided by its content in `n`, with positive leading coefficient.
pub fn primitive_n(p: &Poly) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    let c = content_n(p);
    let q = p.div_exact(&c).unwrap();
    if q.is_lc_negative() {
        -q
    } else {
        q
    }
}

/// gcd in `K[n]` of two polynomials, as an `n`-primitive integer polynomial.
pub fn gcd_n(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return primitive_n(b);
    }
    if b.is_zero() {
        return primitive_n(a);
    }
    primitive_n(&gcd(&primitive_n(a), &primitive_n(b)))
}

/// Division with remainder in `K[n]`.
pub fn divrem_n(a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly) {
    debug_assert!(a.is_unipoly() && b.is_unipoly());
    assert!(!b.is_zero(), "division by zero in K[n]");
    if a.deg_n() < b.deg_n() || a.is_zero() {
        return (Frac::zero(), a.clone());
    }
    let (q, r, e) = a.num.pseudo_divrem(&b.num, N);
    // lc^e a_num = q b_num + r  =>  a = q b_den /(lc^e a_den) * b + r/(lc^e a_den)
    let lce = b.num.lc_in(N).pow(e);
    let scale = &lce * &a.den;
    let quot = Frac::new(&q * &b.den, scale.clone());
    let rem = Frac::new(r, scale);
    (quot, rem)
}

pub fn rem_n(a: &UniPoly, b: &UniPoly) -> UniPoly {
    divrem_n(a, b).1
}

/// Inverse of `a` modulo `m` in `K[n]`; `a` and `m` must be coprime.
pub fn inverse_mod_n(a: &UniPoly, m: &UniPoly) -> UniPoly {
    // Extended Euclid tracking only the coefficient of `a`.
    let mut r0 = m.clone();
    let mut r1 = rem_n(a, m);
    let mut s0 = Frac::zero();
    let mut s1 = Frac::one();
    while !r1.is_zero() && r1.deg_n() > 0 {
        let (q, r) = divrem_n(&r0, &r1);
        let s = &s0 - &(&q * &s1);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    assert!(!r1.is_zero(), "inverse_mod_n: arguments are not coprime");
    // r1 is a nonzero constant c with s1 * a = c mod m.
    rem_n(&(&s1 / &r1), m)
}

/// Solves `target = a * unit_part + b * modulus` with `deg a < deg modulus`.
pub fn bezout_solve(
    target: &UniPoly,
    unit_part: &UniPoly,
    modulus: &UniPoly,
) -> Result<(UniPoly, UniPoly), crate::error::Error> {
    if gcd_n(unit_part.num(), modulus.num()).degree(N) > 0 {
        return Err(crate::error::Error::NotCoprime);
    }
    if modulus.deg_n() == 0 {
        return Ok((Frac::zero(), target / modulus));
    }
    let a = rem_n(&(target * &inverse_mod_n(unit_part, modulus)), modulus);
    let rest = target - &(&a * unit_part);
    let (b, r) = divrem_n(&rest, modulus);
    debug_assert!(r.is_zero());
    Ok((a, b))
}
