//! Packed monomials.
//!
//! A monomial in at most [`MAX_VARS`] variables is stored in a single `u128`
//! with 16 bits per exponent.  Variable 0 occupies the most significant field,
//! so comparing the packed integers is exactly the lexicographic order with
//! `x0 > x1 > ... > x7`.

use core::fmt;

/// Maximum number of polynomial variables.
pub const MAX_VARS: usize = 8;
const BITS: u32 = 16;
const FIELD: u128 = (1u128 << BITS) - 1;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Mono(u128);

#[inline]
fn shift_of(var: usize) -> u32 {
    debug_assert!(var < MAX_VARS);
    (MAX_VARS - 1 - var) as u32 * BITS
}

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn var(var: usize, exp: u32) -> Mono {
        Mono::ONE.with_exp(var, exp)
    }

    pub fn from_exps(exps: &[u32]) -> Mono {
        let mut m = Mono::ONE;
        for (i, &e) in exps.iter().enumerate() {
            m = m.with_exp(i, e);
        }
        m
    }

    #[inline]
    pub fn exp(self, var: usize) -> u32 {
        ((self.0 >> shift_of(var)) & FIELD) as u32
    }

    #[inline]
    pub fn with_exp(self, var: usize, exp: u32) -> Mono {
        assert!(exp as u128 <= FIELD, "exponent overflow");
        let s = shift_of(var);
        Mono((self.0 & !(FIELD << s)) | ((exp as u128) << s))
    }

    #[inline]
    pub fn without(self, var: usize) -> Mono {
        self.with_exp(var, 0)
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn mul(self, other: Mono) -> Mono {
        if cfg!(debug_assertions) {
            for v in 0..MAX_VARS {
                assert!(self.exp(v) + other.exp(v) <= FIELD as u32, "exponent overflow");
            }
        }
        Mono(self.0 + other.0)
    }

    pub fn divides(self, other: Mono) -> bool {
        (0..MAX_VARS).all(|v| self.exp(v) <= other.exp(v))
    }

    /// `other / self`, if `self` divides `other`.
    pub fn div_of(self, other: Mono) -> Option<Mono> {
        if self.divides(other) {
            Some(Mono(other.0 - self.0))
        } else {
            None
        }
    }

    pub fn total_degree(self) -> u32 {
        (0..MAX_VARS).map(|v| self.exp(v)).sum()
    }

    pub fn lcm(self, other: Mono) -> Mono {
        let mut m = Mono::ONE;
        for v in 0..MAX_VARS {
            m = m.with_exp(v, self.exp(v).max(other.exp(v)));
        }
        m
    }

    pub fn exps(self) -> [u32; MAX_VARS] {
        let mut e = [0; MAX_VARS];
        for (v, slot) in e.iter_mut().enumerate() {
            *slot = self.exp(v);
        }
        e
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.exps())
    }
}
