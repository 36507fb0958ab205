//! Arithmetic modulo word-sized primes.
//!
//! Used by the modular gcd, by shift detection and by integer root finding.
//! Dense univariate polynomials are `Vec<u64>` in ascending degree order with
//! no trailing zeros.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, Sign};
use num_traits::{ToPrimitive, Zero};

/// Primes just below `2^62`, in decreasing order.
pub const PRIMES: [u64; 48] = [
    0x3fffffffffffffc7,
    0x3fffffffffffffa9,
    0x3fffffffffffff8b,
    0x3fffffffffffff71,
    0x3fffffffffffff67,
    0x3fffffffffffff59,
    0x3fffffffffffff55,
    0x3fffffffffffff3d,
    0x3fffffffffffff35,
    0x3ffffffffffffeef,
    0x3ffffffffffffee1,
    0x3ffffffffffffec3,
    0x3ffffffffffffe45,
    0x3ffffffffffffe1d,
    0x3ffffffffffffe11,
    0x3ffffffffffffdc1,
    0x3ffffffffffffdbb,
    0x3ffffffffffffda5,
    0x3ffffffffffffd87,
    0x3ffffffffffffd69,
    0x3ffffffffffffd03,
    0x3ffffffffffffcfb,
    0x3ffffffffffffcf7,
    0x3ffffffffffffce9,
    0x3ffffffffffffcd3,
    0x3ffffffffffffcc1,
    0x3ffffffffffffc65,
    0x3ffffffffffffc2b,
    0x3ffffffffffffc1f,
    0x3ffffffffffffc17,
    0x3ffffffffffffc11,
    0x3ffffffffffffc07,
    0x3ffffffffffffb53,
    0x3ffffffffffffb27,
    0x3ffffffffffffaf3,
    0x3ffffffffffffab7,
    0x3ffffffffffffa67,
    0x3ffffffffffffa15,
    0x3ffffffffffff9ef,
    0x3ffffffffffff9d9,
    0x3ffffffffffff9d3,
    0x3ffffffffffff9c5,
    0x3ffffffffffff9af,
    0x3ffffffffffff977,
    0x3ffffffffffff95f,
    0x3ffffffffffff95b,
    0x3ffffffffffff959,
    0x3ffffffffffff8e1,
];

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Endless supply of distinct primes below `2^62`, starting with [`PRIMES`].
pub fn primes() -> impl Iterator<Item = u64> {
    let mut idx = 0usize;
    let mut last = PRIMES[PRIMES.len() - 1];
    core::iter::from_fn(move || {
        if idx < PRIMES.len() {
            idx += 1;
            return Some(PRIMES[idx - 1]);
        }
        let mut c = last - 2;
        while !is_prime(c) {
            c -= 2;
        }
        last = c;
        Some(c)
    })
}

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn neg(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64, p: u64) -> u64 {
    assert!(a != 0, "inverse of zero mod p");
    pow(a, p - 2, p)
}

pub fn from_i64(a: i64, p: u64) -> u64 {
    let r = (a as i128).rem_euclid(p as i128);
    r as u64
}

pub fn reduce(a: &BigInt, p: u64) -> u64 {
    let (sign, digits) = a.to_u64_digits();
    let mut r: u128 = 0;
    for d in digits.iter().rev() {
        r = ((r << 64) | *d as u128) % p as u128;
    }
    let r = r as u64;
    if sign == Sign::Minus {
        neg(r, p)
    } else {
        r
    }
}

/// Symmetric representative in `(-p/2, p/2]`.
pub fn symmetric(a: u64, p: u64) -> i64 {
    if a > p / 2 {
        -((p - a) as i64)
    } else {
        a as i64
    }
}

/// Small deterministic generator (splitmix64) for evaluation points.
#[derive(Clone, Debug)]
pub struct SplitMix(u64);

impl SplitMix {
    pub fn new(seed: u64) -> SplitMix {
        SplitMix(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over F_p.

pub fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn deg(a: &[u64]) -> isize {
    a.len() as isize - 1
}

pub fn upoly_eval(a: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0;
    for &c in a.iter().rev() {
        acc = add(mul(acc, x, p), c, p);
    }
    acc
}

pub fn upoly_add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut r = vec![0; n];
    for (i, slot) in r.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = add(x, y, p);
    }
    trim(&mut r);
    r
}

pub fn upoly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut r = vec![0; n];
    for (i, slot) in r.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = sub(x, y, p);
    }
    trim(&mut r);
    r
}

pub fn upoly_scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().map(|&x| mul(x, c, p)).collect();
    trim(&mut r);
    r
}

pub fn upoly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let s = acc[i + j] + x as u128 * y as u128;
            acc[i + j] = if s >= pp * 4 { s % pp } else { s };
        }
    }
    let mut r: Vec<u64> = acc.into_iter().map(|s| (s % pp) as u64).collect();
    trim(&mut r);
    r
}

/// Quotient and remainder; `b` must be nonzero.
pub fn upoly_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty(), "division by zero polynomial mod p");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv_lc = inv(b[db], p);
    let mut q = vec![0; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = mul(r[i + db], inv_lc, p);
        q[i] = c;
        if c != 0 {
            for j in 0..=db {
                r[i + j] = sub(r[i + j], mul(c, b[j], p), p);
            }
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn upoly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    upoly_divrem(a, b, p).1
}

pub fn upoly_monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => upoly_scale(a, inv(lc, p), p),
    }
}

/// Monic gcd.
pub fn upoly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = upoly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    upoly_monic(&x, p)
}

/// Resultant of `a` and `b` (both nonzero) by the Euclidean algorithm.
pub fn upoly_resultant(a: &[u64], b: &[u64], p: u64) -> u64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    if x.is_empty() || y.is_empty() {
        return 0;
    }
    let mut res = 1u64;
    loop {
        let dx = x.len() - 1;
        let dy = y.len() - 1;
        if dy == 0 {
            return mul(res, pow(y[0], dx as u64, p), p);
        }
        if dx == 0 {
            return mul(res, pow(x[0], dy as u64, p), p);
        }
        if dx < dy {
            if dx % 2 == 1 && dy % 2 == 1 {
                res = neg(res, p);
            }
            core::mem::swap(&mut x, &mut y);
            continue;
        }
        let r = upoly_rem(&x, &y, p);
        if r.is_empty() {
            return 0;
        }
        // res(x, y) = (-1)^(dx dy) lc(y)^(dx - dr) res(y, r)
        let dr = r.len() - 1;
        if dx % 2 == 1 && dy % 2 == 1 {
            res = neg(res, p);
        }
        res = mul(res, pow(y[dy], (dx - dr) as u64, p), p);
        x = y;
        y = r;
    }
}

/// `a(x + k)`.
pub fn upoly_taylor_shift(a: &[u64], k: u64, p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let n = r.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            r[j] = add(r[j], mul(k, r[j + 1], p), p);
        }
    }
    trim(&mut r);
    r
}

pub fn upoly_derivative(a: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, &c)| mul(c, i as u64 % p, p)).collect();
    trim(&mut r);
    r
}

/// `base^e mod m`.
fn upoly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = upoly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = upoly_rem(&upoly_mul(&result, &b, p), m, p);
        }
        e >>= 1;
        if e > 0 {
            b = upoly_rem(&upoly_mul(&b, &b, p), m, p);
        }
    }
    result
}

/// Distinct roots of `a` in `F_p` (odd `p`), in increasing order.
pub fn upoly_roots(a: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    trim(&mut a);
    if a.len() <= 1 {
        return Vec::new();
    }
    let a = upoly_monic(&a, p);
    // gcd(a, x^p - x) is the product of the distinct linear factors.
    let xp = upoly_powmod(&[0, 1], p, &a, p);
    let g = upoly_gcd(&a, &upoly_sub(&xp, &[0, 1], p), p);
    let mut roots = Vec::new();
    let mut rng = SplitMix::new(0x7065_7473_0000_0001);
    split_linear(&g, p, &mut rng, &mut roots);
    roots.sort_unstable();
    roots
}

fn split_linear(g: &[u64], p: u64, rng: &mut SplitMix, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(neg(mul(g[0], inv(g[1], p), p), p)),
        _ => loop {
            let a = rng.below(p);
            let h = upoly_powmod(&[a, 1], (p - 1) / 2, g, p);
            let d = upoly_gcd(g, &upoly_sub(&h, &[1], p), p);
            if d.len() > 1 && d.len() < g.len() {
                let (q, _) = upoly_divrem(g, &d, p);
                split_linear(&d, p, rng, out);
                split_linear(&upoly_monic(&q, p), p, rng, out);
                return;
            }
        },
    }
}

/// Interpolation through `(xs[i], ys[i])` with distinct `xs`.
pub fn upoly_interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    // Newton form, then expand.
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = sub(coef[i], coef[i - 1], p);
            let den = sub(xs[i], xs[i - j], p);
            coef[i] = mul(num, inv(den, p), p);
        }
    }
    let mut r: Vec<u64> = Vec::new();
    for i in (0..n).rev() {
        // r = r * (x - xs[i]) + coef[i]
        let mut next = vec![0u64; r.len() + 1];
        for (k, &c) in r.iter().enumerate() {
            next[k + 1] = add(next[k + 1], c, p);
            next[k] = sub(next[k], mul(c, xs[i], p), p);
        }
        next[0] = add(next[0], coef[i], p);
        trim(&mut next);
        r = next;
    }
    r
}

/// Converts a `u64` residue from a `BigInt` if it fits.
pub fn small(a: &BigInt) -> Option<i64> {
    a.to_i64()
}

pub fn is_zero_big(a: &BigInt) -> bool {
    a.is_zero()
}
