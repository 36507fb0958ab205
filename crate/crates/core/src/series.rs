//! Truncated Laurent series in `n - n0` or `1/n` with coefficients in `K`.

use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::frac::{Frac, ParamScalar, N};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Integer(i64),
    Infinity,
}

/// `sum_k coeffs[k] t^(lowest + k) + O(t^truncation)` where `t = n - n0`,
/// or `t = 1/n` at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    pub point: Point,
    pub lowest: i64,
    pub coeffs: Vec<ParamScalar>,
    pub truncation: i64,
}

/// Coefficients of `p` in `t` for the local parameter at `point` (ascending)
/// and the power of `t` to factor in front.
fn local_coeffs(p: &Poly, point: Point) -> (Vec<ParamScalar>, i64) {
    match point {
        Point::Integer(n0) => {
            let q = p.shift(N, &BigInt::from(n0));
            (q.coeffs_in(N).into_iter().map(Frac::from_poly).collect(), 0)
        }
        Point::Infinity => {
            let mut c: Vec<ParamScalar> = p.coeffs_in(N).into_iter().map(Frac::from_poly).collect();
            c.reverse();
            let d = p.degree(N) as i64;
            (c, -d)
        }
    }
}

fn strip(mut c: Vec<ParamScalar>, mut low: i64) -> (Vec<ParamScalar>, i64) {
    let z = c.iter().take_while(|x| x.is_zero()).count();
    c.drain(..z);
    low += z as i64;
    (c, low)
}

impl LaurentSeries {
    pub fn zero(point: Point, truncation: i64) -> LaurentSeries {
        LaurentSeries { point, lowest: truncation, coeffs: Vec::new(), truncation }
    }

    fn normalized(point: Point, coeffs: Vec<ParamScalar>, lowest: i64, truncation: i64) -> LaurentSeries {
        let (mut c, low) = strip(coeffs, lowest);
        if low >= truncation {
            return LaurentSeries::zero(point, truncation);
        }
        c.truncate((truncation - low) as usize);
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        LaurentSeries { point, lowest: low, coeffs: c, truncation }
    }

    /// Whether no term is known to be nonzero below the truncation.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the first nonzero term, or the truncation for zero.
    pub fn valuation(&self) -> i64 {
        self.lowest
    }

    pub fn coeff(&self, e: i64) -> ParamScalar {
        if e < self.lowest {
            return Frac::zero();
        }
        assert!(e < self.truncation, "coefficient beyond truncation");
        self.coeffs.get((e - self.lowest) as usize).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&ParamScalar> {
        self.coeffs.first()
    }

    pub fn add(&self, other: &LaurentSeries) -> LaurentSeries {
        assert_eq!(self.point, other.point);
        let trunc = self.truncation.min(other.truncation);
        let low = self.lowest.min(other.lowest).min(trunc);
        let len = (trunc - low).max(0) as usize;
        let mut c = alloc::vec![Frac::zero(); len];
        for s in [self, other] {
            for (k, a) in s.coeffs.iter().enumerate() {
                let e = s.lowest + k as i64;
                if e < trunc {
                    let i = (e - low) as usize;
                    c[i] = &c[i] + a;
                }
            }
        }
        LaurentSeries::normalized(self.point, c, low, trunc)
    }

    pub fn neg(&self) -> LaurentSeries {
        LaurentSeries { coeffs: self.coeffs.iter().map(|c| -c).collect(), ..self.clone() }
    }

    pub fn scale(&self, c: &ParamScalar) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        LaurentSeries::normalized(self.point, coeffs, self.lowest, self.truncation)
    }

    pub fn mul(&self, other: &LaurentSeries) -> LaurentSeries {
        assert_eq!(self.point, other.point);
        let low = self.lowest + other.lowest;
        let trunc = (self.lowest + other.truncation).min(other.lowest + self.truncation);
        if self.is_zero() || other.is_zero() || low >= trunc {
            return LaurentSeries::zero(self.point, trunc);
        }
        let len = (trunc - low) as usize;
        let mut c = alloc::vec![Frac::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j < len {
                    c[i + j] = &c[i + j] + &(a * b);
                }
            }
        }
        LaurentSeries::normalized(self.point, c, low, trunc)
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn inv(&self) -> LaurentSeries {
        let a0 = self.leading().expect("inverse of a zero series").inv();
        let rel = (self.truncation - self.lowest) as usize;
        let mut b: Vec<ParamScalar> = Vec::with_capacity(rel);
        for k in 0..rel {
            if k == 0 {
                b.push(a0.clone());
                continue;
            }
            let mut s = Frac::zero();
            for i in 1..=k {
                if let Some(ai) = self.coeffs.get(i) {
                    s = &s + &(ai * &b[k - i]);
                }
            }
            b.push(-&(&s * &a0));
        }
        let low = -self.lowest;
        LaurentSeries::normalized(self.point, b, low, low + rel as i64)
    }

    /// Applies a coefficient-wise map (parameter derivative or shift).
    pub fn map_coeffs(&self, f: impl Fn(&ParamScalar) -> ParamScalar) -> LaurentSeries {
        let coeffs = self.coeffs.iter().map(f).collect();
        LaurentSeries::normalized(self.point, coeffs, self.lowest, self.truncation)
    }
}

/// Valuation of `f` at `point` (negative for a pole).
pub fn valuation(f: &Frac, point: Point) -> i64 {
    if f.is_zero() {
        return i64::MAX;
    }
    let v = |p: &Poly| -> i64 {
        match point {
            Point::Integer(n0) => p.shift(N, &BigInt::from(n0)).low_degree(N) as i64,
            Point::Infinity => -(p.degree(N) as i64),
        }
    };
    v(f.num()) - v(f.den())
}

/// Expansion of `f` at `point` with all terms of exponent below `order`.
pub fn laurent_expand(f: &Frac, point: Point, order: i64) -> LaurentSeries {
    if f.is_zero() {
        return LaurentSeries::zero(point, order);
    }
    let (nc, nshift) = local_coeffs(f.num(), point);
    let (dc, dshift) = local_coeffs(f.den(), point);
    let (nc, nlow) = strip(nc, nshift);
    let (dc, dlow) = strip(dc, dshift);
    let low = nlow - dlow;
    if low >= order {
        return LaurentSeries::zero(point, order);
    }
    let rel = (order - low) as usize;
    let num = LaurentSeries { point, lowest: 0, coeffs: nc, truncation: rel as i64 };
    let den = LaurentSeries { point, lowest: 0, coeffs: dc, truncation: rel as i64 };
    let q = num.mul(&den.inv());
    LaurentSeries::normalized(point, q.coeffs, low, order)
}

/// Expansion with the default window: the pole order plus four terms.
pub fn laurent_expand_default(f: &Frac, point: Point) -> LaurentSeries {
    let v = valuation(f, point);
    let start = if v == i64::MAX { 0 } else { v.min(0) };
    laurent_expand(f, point, start + 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_pole() {
        let f = Frac::new(Poly::one(), &Poly::var(N) - &Poly::int(1));
        let s = laurent_expand_default(&f, Point::Integer(1));
        assert_eq!(s.lowest, -1);
        assert_eq!(s.leading(), Some(&Frac::one()));
    }

    #[test]
    fn at_infinity() {
        let x = Frac::var(1);
        let f = &(&Frac::int(2) * &Frac::var(N)) / &x;
        let s = laurent_expand_default(&f, Point::Infinity);
        assert_eq!(s.lowest, -1);
        assert_eq!(s.leading(), Some(&(&Frac::int(2) / &x)));
    }

    #[test]
    fn product_matches_product_of_series() {
        let n = Frac::var(N);
        let x = Frac::var(1);
        let f = &(&n + &x) / &(&n * &(&n - &Frac::int(2)));
        let g = &(&n * &n) / &(&n + &Frac::int(1));
        for pt in [Point::Integer(0), Point::Integer(2), Point::Infinity] {
            let a = laurent_expand(&f, pt, 5);
            let b = laurent_expand(&g, pt, 5);
            let prod = a.mul(&b);
            let direct = laurent_expand(&(&f * &g), pt, prod.truncation);
            assert_eq!(prod, direct);
        }
    }
}
