//! Integer roots, integer shifts and shift-class decompositions in `K[n]`.
//!
//! All polynomials here are integer polynomials viewed in `K[n]`; their
//! content in `n` is irrelevant.  Candidates are found from a modular
//! specialisation of the parameters and then verified exactly.

use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::frac::{gcd_n, primitive_n, N};
use crate::gcd::gcd;
use crate::modp::{self, SplitMix};
use crate::mono::MAX_VARS;
use crate::poly::Poly;

/// Integer shifts above this magnitude are not searched for.
pub const SHIFT_BOUND: i64 = 1 << 40;

/// A specialisation of every variable except `n` modulo a prime.
struct Specialization {
    p: u64,
    point: [u64; MAX_VARS],
}

impl Specialization {
    /// Picks a point where none of `guards` vanishes.
    fn new(guards: &[&Poly], seed: u64) -> Specialization {
        let mut rng = SplitMix::new(seed);
        for p in modp::primes() {
            for _ in 0..8 {
                let mut point = [0u64; MAX_VARS];
                for slot in point.iter_mut().skip(1) {
                    *slot = 2 + rng.below(p - 3);
                }
                let s = Specialization { p, point };
                if guards.iter().all(|g| s.eval_const(g) != 0) {
                    return s;
                }
            }
        }
        unreachable!()
    }

    fn eval_const(&self, g: &Poly) -> u64 {
        let mut acc = 0u64;
        for (m, c) in g.terms() {
            let mut t = modp::reduce(c, self.p);
            for v in 0..MAX_VARS {
                let e = m.exp(v);
                if e > 0 {
                    t = modp::mul(t, modp::pow(self.point[v], e as u64, self.p), self.p);
                }
            }
            acc = modp::add(acc, t, self.p);
        }
        acc
    }

    /// Dense image in `F_p[n]`.
    fn image(&self, f: &Poly) -> Vec<u64> {
        let d = f.degree(N) as usize;
        let mut out = alloc::vec![0u64; d + 1];
        for (m, c) in f.terms() {
            let mut t = modp::reduce(c, self.p);
            for v in 1..MAX_VARS {
                let e = m.exp(v);
                if e > 0 {
                    t = modp::mul(t, modp::pow(self.point[v], e as u64, self.p), self.p);
                }
            }
            let k = m.exp(N) as usize;
            out[k] = modp::add(out[k], t, self.p);
        }
        modp::trim(&mut out);
        out
    }
}

/// Integer values `z` with `f(z) = 0` identically in the parameters.
pub fn integer_roots(f: &Poly) -> Vec<BigInt> {
    assert!(!f.is_zero(), "integer_roots of the zero polynomial");
    if f.degree(N) == 0 {
        return Vec::new();
    }
    let f = primitive_n(f);
    let lc = f.lc_in(N);
    let s = Specialization::new(&[&lc], 0x1f2e_3d4c_5b6a_7988);
    let img = s.image(&f);
    let mut out: Vec<BigInt> = modp::upoly_roots(&img, s.p)
        .into_iter()
        .map(|r| modp::symmetric(r, s.p))
        .filter(|z| z.abs() <= SHIFT_BOUND)
        .map(BigInt::from)
        .filter(|z| f.eval(N, z).is_zero())
        .collect();
    out.sort();
    out
}

/// All integers `k` such that `a(n + k)` and `b(n)` have a common factor of
/// positive degree in `n`, in increasing order.
pub fn integer_shift_set(a: &Poly, b: &Poly) -> Vec<i64> {
    let da = a.degree(N) as usize;
    let db = b.degree(N) as usize;
    if da == 0 || db == 0 {
        return Vec::new();
    }
    let la = a.lc_in(N);
    let lb = b.lc_in(N);
    let s = Specialization::new(&[&la, &lb], 0x5151_7e55_0000_0001);
    let p = s.p;
    let ap = s.image(a);
    let bp = s.image(b);
    // res_n(a(n + k), b(n)) has degree da * db in k.
    let npts = da * db + 1;
    let xs: Vec<u64> = (0..npts as u64).collect();
    let ys: Vec<u64> =
        xs.iter().map(|&k| modp::upoly_resultant(&modp::upoly_taylor_shift(&ap, k, p), &bp, p)).collect();
    let res = modp::upoly_interpolate(&xs, &ys, p);
    let mut out: Vec<i64> = modp::upoly_roots(&res, p)
        .into_iter()
        .map(|r| modp::symmetric(r, p))
        .filter(|k| k.abs() <= SHIFT_BOUND)
        .filter(|&k| gcd_n(&a.shift_i(N, k), b).degree(N) > 0)
        .collect();
    out.sort_unstable();
    out
}

/// Squarefree decomposition in `K[n]`: pairs `(f_i, i)` with `f = c * prod f_i^i`,
/// every `f_i` squarefree, `n`-primitive and of positive degree.
pub fn squarefree(f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if f.degree(N) == 0 {
        return out;
    }
    let f = primitive_n(f);
    let df = f.derivative(N);
    let g = gcd(&f, &df);
    let mut c = f.div_exact(&g).unwrap();
    let mut d = &df.div_exact(&g).unwrap() - &c.derivative(N);
    let mut i = 1;
    while c.degree(N) > 0 {
        let a = gcd(&c, &d);
        if a.degree(N) > 0 {
            out.push((primitive_n(&a), i));
        }
        c = c.div_exact(&a).unwrap();
        d = &d.div_exact(&a).unwrap() - &c.derivative(N);
        i += 1;
    }
    out
}

/// Splits a list of squarefree polynomials into a pairwise coprime basis.
pub fn gcd_free_basis(items: &[Poly]) -> Vec<Poly> {
    let mut basis: Vec<Poly> = items.iter().filter(|p| p.degree(N) > 0).map(primitive_n).collect();
    'outer: loop {
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let d = gcd_n(&basis[i], &basis[j]);
                if d.degree(N) == 0 {
                    continue;
                }
                let b = basis.remove(j);
                let a = basis.remove(i);
                for piece in [a.div_exact(&d).unwrap(), b.div_exact(&d).unwrap(), d] {
                    if piece.degree(N) > 0 {
                        let piece = primitive_n(&piece);
                        if !basis.contains(&piece) {
                            basis.push(piece);
                        }
                    }
                }
                continue 'outer;
            }
        }
        break;
    }
    basis.sort_by(|a, b| a.cmp_canonical(b));
    basis
}

/// One shift-equivalence class: the members are `q(n - j)` for `j` in `shifts`
/// (sorted, starting at 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftOrbit {
    pub q: Poly,
    pub shifts: Vec<i64>,
}

/// Groups the irreducible-free factors of `polys` into shift classes.
///
/// The returned polynomials `q` are squarefree, shift-free
/// (`gcd(q(n), q(n + k)) = 1` for `k != 0`) and pairwise shift-coprime; the
/// product of all members divides a power of the product of `polys`, and every
/// factor of the inputs divides some member.
pub fn shift_orbits(polys: &[Poly]) -> Vec<ShiftOrbit> {
    let mut parts = Vec::new();
    for p in polys {
        for (f, _) in squarefree(p) {
            parts.push(f);
        }
    }
    let mut basis = gcd_free_basis(&parts);
    if basis.is_empty() {
        return Vec::new();
    }
    let rad = basis.iter().fold(Poly::one(), |acc, b| &acc * b);
    let shifts: Vec<i64> = integer_shift_set(&rad, &rad).into_iter().filter(|&k| k > 0).collect();

    // Refine until any two pieces are either exact shifts or shift-coprime.
    'refine: loop {
        for &h in &shifts {
            for i in 0..basis.len() {
                let shifted = primitive_n(&basis[i].shift_i(N, h));
                for j in 0..basis.len() {
                    let d = gcd_n(&shifted, &basis[j]);
                    if d.degree(N) == 0 || (d == basis[j] && d == shifted) {
                        continue;
                    }
                    let mut fresh = Vec::new();
                    if i != j {
                        let back = primitive_n(&d.shift_i(N, -h));
                        fresh.push(primitive_n(&basis[i].div_exact(&back).unwrap()));
                        fresh.push(back);
                    }
                    fresh.push(primitive_n(&basis[j].div_exact(&d).unwrap()));
                    fresh.push(d);
                    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
                    basis.remove(hi);
                    if lo != hi {
                        basis.remove(lo);
                    }
                    for f in fresh {
                        if f.degree(N) > 0 && !basis.contains(&f) {
                            basis.push(f);
                        }
                    }
                    continue 'refine;
                }
            }
        }
        break;
    }
    basis.sort_by(|a, b| a.cmp_canonical(b));

    // Group pieces into orbits: piece j equals piece i shifted by h.
    let mut orbit_of: Vec<Option<usize>> = alloc::vec![None; basis.len()];
    let mut orbits: Vec<(usize, Vec<(usize, i64)>)> = Vec::new();
    for i in 0..basis.len() {
        if orbit_of[i].is_some() {
            continue;
        }
        let id = orbits.len();
        orbit_of[i] = Some(id);
        let mut members = alloc::vec![(i, 0i64)];
        for &h in &shifts {
            for sign in [1i64, -1] {
                // basis[i](n + sign*h) == basis[j](n)  means  basis[j] = q(n - j') with j' = -sign*h
                let cand = primitive_n(&basis[i].shift_i(N, sign * h));
                if let Some(j) = basis.iter().position(|b| *b == cand) {
                    if orbit_of[j].is_none() {
                        orbit_of[j] = Some(id);
                        members.push((j, -sign * h));
                    }
                }
            }
        }
        orbits.push((i, members));
    }
    let mut out = Vec::new();
    for (root, members) in orbits {
        let jmin = members.iter().map(|m| m.1).min().unwrap();
        // Re-base so that every member is q(n - j) with j >= 0.
        let q = primitive_n(&basis[root].shift_i(N, -jmin));
        let mut js: Vec<i64> = members.iter().map(|m| m.1 - jmin).collect();
        js.sort_unstable();
        out.push(ShiftOrbit { q, shifts: js });
    }
    out.sort_by(|a, b| a.q.cmp_canonical(&b.q));
    out
}

/// Multiplicity of `f` (of positive degree) as a factor of `g`.
pub fn multiplicity(f: &Poly, g: &Poly) -> u32 {
    let mut g = g.clone();
    let mut e = 0;
    while let Some(q) = g.div_exact(f) {
        g = q;
        e += 1;
    }
    e
}
