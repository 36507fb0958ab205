//! Multivariate polynomial gcd over `Z` by Brown's modular algorithm.
//!
//! Images modulo word-sized primes are computed by recursive evaluation and
//! Newton interpolation on the least significant variable, combined by
//! Chinese remaindering and confirmed by trial division over `Z`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::modp;
use crate::mono::{Mono, MAX_VARS};
use crate::poly::Poly;

type Sp = Vec<(Mono, u64)>;

fn sp_from_poly(a: &Poly, p: u64) -> Sp {
    a.terms()
        .iter()
        .filter_map(|(m, c)| {
            let r = modp::reduce(c, p);
            (r != 0).then_some((*m, r))
        })
        .collect()
}

fn sp_scale(a: &Sp, c: u64, p: u64) -> Sp {
    if c == 0 {
        return Vec::new();
    }
    a.iter().map(|(m, x)| (*m, modp::mul(*x, c, p))).collect()
}

fn sp_monic(a: &Sp, p: u64) -> Sp {
    match a.first() {
        None => Vec::new(),
        Some(&(_, lc)) => sp_scale(a, modp::inv(lc, p), p),
    }
}

/// Exact division test: does `b` divide `a` over `F_p`?
fn sp_divides(a: &Sp, b: &Sp, p: u64) -> bool {
    let (lm, lc) = b[0];
    let inv_lc = modp::inv(lc, p);
    let mut rem: BTreeMap<Mono, u64> = a.iter().cloned().collect();
    while let Some((m, c)) = rem.pop_last() {
        let q = match lm.div_of(m) {
            Some(q) => q,
            None => return false,
        };
        let qc = modp::mul(c, inv_lc, p);
        for &(bm, bc) in &b[1..] {
            let key = bm.mul(q);
            let prod = modp::mul(qc, bc, p);
            let slot = rem.entry(key).or_insert(0);
            *slot = modp::sub(*slot, prod, p);
            if *slot == 0 {
                rem.remove(&key);
            }
        }
    }
    true
}

/// Splits `a` into dense univariate coefficients in `var`, keyed by the
/// remaining monomial.
fn split_last(a: &Sp, var: usize) -> BTreeMap<Mono, Vec<u64>> {
    let mut out: BTreeMap<Mono, Vec<u64>> = BTreeMap::new();
    for &(m, c) in a {
        let e = m.exp(var) as usize;
        let slot = out.entry(m.without(var)).or_default();
        if slot.len() <= e {
            slot.resize(e + 1, 0);
        }
        slot[e] = c;
    }
    out
}

fn join_last(parts: &BTreeMap<Mono, Vec<u64>>, var: usize) -> Sp {
    let mut terms: Sp = Vec::new();
    for (m, coeffs) in parts {
        for (e, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                terms.push((m.with_exp(var, e as u32), c));
            }
        }
    }
    terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    terms
}

fn eval_last(parts: &BTreeMap<Mono, Vec<u64>>, alpha: u64, p: u64) -> Sp {
    let mut out: Sp = Vec::new();
    for (m, coeffs) in parts.iter().rev() {
        let v = modp::upoly_eval(coeffs, alpha, p);
        if v != 0 {
            out.push((*m, v));
        }
    }
    out
}

fn univariate_dense(a: &Sp, var: usize) -> Vec<u64> {
    let d = a.iter().map(|t| t.0.exp(var)).max().unwrap_or(0) as usize;
    let mut v = alloc::vec![0u64; d + 1];
    for &(m, c) in a {
        v[m.exp(var) as usize] = c;
    }
    modp::trim(&mut v);
    v
}

fn from_dense(v: &[u64], var: usize) -> Sp {
    let mut out: Sp = Vec::new();
    for (e, &c) in v.iter().enumerate().rev() {
        if c != 0 {
            out.push((Mono::var(var, e as u32), c));
        }
    }
    out
}

/// Monic gcd over `F_p` of nonzero `a` and `b` in the variables `vars`.
fn pgcd(a: &Sp, b: &Sp, vars: &[usize], p: u64) -> Sp {
    if vars.is_empty() {
        return alloc::vec![(Mono::ONE, 1)];
    }
    if vars.len() == 1 {
        let v = vars[0];
        let g = modp::upoly_gcd(&univariate_dense(a, v), &univariate_dense(b, v), p);
        return from_dense(&g, v);
    }
    let last = vars[vars.len() - 1];
    let rest = &vars[..vars.len() - 1];
    let pa = split_last(a, last);
    let pb = split_last(b, last);

    let content = |parts: &BTreeMap<Mono, Vec<u64>>| {
        let mut g: Vec<u64> = Vec::new();
        for c in parts.values() {
            g = modp::upoly_gcd(&g, c, p);
            if g.len() == 1 {
                break;
            }
        }
        g
    };
    let ca = content(&pa);
    let cb = content(&pb);
    let cont = modp::upoly_gcd(&ca, &cb, p);
    let prim = |parts: BTreeMap<Mono, Vec<u64>>, c: &Vec<u64>| -> BTreeMap<Mono, Vec<u64>> {
        if c.len() == 1 {
            return parts;
        }
        parts.into_iter().map(|(m, v)| (m, modp::upoly_divrem(&v, c, p).0)).collect()
    };
    let pa = prim(pa, &ca);
    let pb = prim(pb, &cb);
    let lca = pa.values().next_back().unwrap().clone();
    let lcb = pb.values().next_back().unwrap().clone();
    let gamma = modp::upoly_gcd(&lca, &lcb, p);
    let deg_a = pa.values().map(|v| v.len()).max().unwrap() - 1;
    let deg_b = pb.values().map(|v| v.len()).max().unwrap() - 1;
    let bound = deg_a.min(deg_b) + gamma.len() - 1;
    let a_prim = join_last(&pa, last);
    let b_prim = join_last(&pb, last);

    let mut interp: BTreeMap<Mono, Vec<u64>> = BTreeMap::new();
    let mut modulus: Vec<u64> = alloc::vec![1];
    let mut points = 0usize;
    let mut current_lm: Option<Mono> = None;
    let mut alpha = 0u64;
    loop {
        alpha += 1;
        assert!(alpha < p, "ran out of evaluation points");
        if modp::upoly_eval(&lca, alpha, p) == 0 || modp::upoly_eval(&lcb, alpha, p) == 0 {
            continue;
        }
        let aa = eval_last(&pa, alpha, p);
        let ba = eval_last(&pb, alpha, p);
        let g = pgcd(&aa, &ba, rest, p);
        let lm = g[0].0;
        if lm.is_one() {
            // The primitive parts are coprime.
            return from_dense(&modp::upoly_monic(&cont, p), last);
        }
        match current_lm {
            Some(cur) if lm > cur => continue,
            Some(cur) if lm < cur => {
                interp.clear();
                modulus = alloc::vec![1];
                points = 0;
                current_lm = Some(lm);
            }
            None => current_lm = Some(lm),
            _ => {}
        }
        let g = sp_scale(&g, modp::upoly_eval(&gamma, alpha, p), p);
        // Newton step.
        let m_alpha = modp::upoly_eval(&modulus, alpha, p);
        let scale = modp::inv(m_alpha, p);
        let mut changed = false;
        let mut keys: Vec<Mono> = interp.keys().cloned().collect();
        for &(m, _) in &g {
            if !interp.contains_key(&m) {
                keys.push(m);
            }
        }
        let gmap: BTreeMap<Mono, u64> = g.into_iter().collect();
        for m in keys {
            let target = gmap.get(&m).copied().unwrap_or(0);
            let cur = interp.get(&m).map(|v| modp::upoly_eval(v, alpha, p)).unwrap_or(0);
            let diff = modp::sub(target, cur, p);
            if diff != 0 {
                changed = true;
                let corr = modp::upoly_scale(&modulus, modp::mul(diff, scale, p), p);
                let slot = interp.entry(m).or_default();
                *slot = modp::upoly_add(slot, &corr, p);
                if slot.is_empty() {
                    interp.remove(&m);
                }
            }
        }
        modulus = modp::upoly_mul(&modulus, &[modp::neg(alpha, p), 1], p);
        points += 1;
        if points > bound || (!changed && points > 1) {
            // Primitive part with respect to `last`.
            let mut c: Vec<u64> = Vec::new();
            for v in interp.values() {
                c = modp::upoly_gcd(&c, v, p);
            }
            let cand: BTreeMap<Mono, Vec<u64>> = interp
                .iter()
                .map(|(m, v)| (*m, modp::upoly_divrem(v, &c, p).0))
                .collect();
            let cand = join_last(&cand, last);
            if sp_divides(&a_prim, &cand, p) && sp_divides(&b_prim, &cand, p) {
                let cont_sp = from_dense(&cont, last);
                return sp_monic(&sp_mul(&cand, &cont_sp, p), p);
            }
            if points > bound + 8 {
                // Persistent failure means every point so far was unlucky;
                // restart the interpolation from scratch.
                interp.clear();
                modulus = alloc::vec![1];
                points = 0;
                current_lm = None;
            }
        }
    }
}

fn sp_mul(a: &Sp, b: &Sp, p: u64) -> Sp {
    let mut acc: BTreeMap<Mono, u64> = BTreeMap::new();
    for &(ma, ca) in a {
        for &(mb, cb) in b {
            let slot = acc.entry(ma.mul(mb)).or_insert(0);
            *slot = modp::add(*slot, modp::mul(ca, cb, p), p);
        }
    }
    acc.into_iter().rev().filter(|t| t.1 != 0).collect()
}

fn active_vars(a: &Poly, b: &Poly) -> Vec<usize> {
    let mask = a.var_mask() | b.var_mask();
    (0..MAX_VARS).filter(|v| mask & (1 << v) != 0).collect()
}

fn normalize_sign(p: Poly) -> Poly {
    if p.is_lc_negative() {
        -p
    } else {
        p
    }
}

/// Greatest common divisor with positive leading coefficient.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return normalize_sign(b.clone());
    }
    if b.is_zero() {
        return normalize_sign(a.clone());
    }
    let c = a.content().abs().gcd(&b.content().abs());
    if a.is_constant() || b.is_constant() {
        return Poly::constant(c);
    }
    let a = a.primitive();
    let b = b.primitive();
    if a == b {
        return a.scale(&c);
    }
    let (small, large) = if a.len() <= b.len() { (&a, &b) } else { (&b, &a) };
    if large.div_exact(small).is_some() {
        return small.scale(&c);
    }
    let vars = active_vars(&a, &b);
    // Variables occurring in only one argument cannot occur in the gcd, so a
    // quick univariate image in each shared variable often proves coprimality.
    let shared = a.var_mask() & b.var_mask();
    if shared == 0 {
        return Poly::constant(c);
    }
    let gamma = a.leading_coeff().gcd(&b.leading_coeff());
    let mut acc: Option<(Poly, BigInt, Mono)> = None;
    for p in modp::primes() {
        if modp::reduce(&a.leading_coeff(), p) == 0 || modp::reduce(&b.leading_coeff(), p) == 0 {
            continue;
        }
        let ap = sp_from_poly(&a, p);
        let bp = sp_from_poly(&b, p);
        let g = pgcd(&ap, &bp, &vars, p);
        let lm = g[0].0;
        if lm.is_one() {
            return Poly::constant(c);
        }
        let g = sp_scale(&g, modp::reduce(&gamma, p), p);
        let next = match acc.take() {
            Some((prev, m, cur)) if lm == cur => {
                let combined = crt_combine(&prev, &m, &g, p);
                let stable = combined == prev;
                let m = m * BigInt::from(p);
                if stable {
                    let cand = combined.primitive();
                    if a.div_exact(&cand).is_some() && b.div_exact(&cand).is_some() {
                        return cand.scale(&c);
                    }
                }
                (combined, m, lm)
            }
            Some((prev, m, cur)) if lm > cur => (prev, m, cur),
            _ => {
                let lifted = Poly::from_terms(
                    g.iter().map(|&(mm, x)| (mm, BigInt::from(modp::symmetric(x, p)))).collect(),
                );
                (lifted, BigInt::from(p), lm)
            }
        };
        acc = Some(next);
    }
    unreachable!("prime supply is unbounded")
}

/// Combines `prev` (mod `m`, symmetric) with the image `g` mod `p`.
fn crt_combine(prev: &Poly, m: &BigInt, g: &Sp, p: u64) -> Poly {
    let m_mod_p = modp::reduce(m, p);
    let m_inv = modp::inv(m_mod_p, p);
    let new_mod = m * BigInt::from(p);
    let half = &new_mod >> 1;
    let gmap: BTreeMap<Mono, u64> = g.iter().cloned().collect();
    let mut keys: Vec<Mono> = prev.terms().iter().map(|t| t.0).collect();
    for &(mm, _) in g {
        keys.push(mm);
    }
    keys.sort_unstable();
    keys.dedup();
    let mut terms = Vec::with_capacity(keys.len());
    for key in keys {
        let old = prev.coeff_of(key);
        let target = gmap.get(&key).copied().unwrap_or(0);
        let diff = modp::sub(target, modp::reduce(&old, p), p);
        let t = modp::mul(diff, m_inv, p);
        let mut v = &old + m * BigInt::from(t);
        if v > half {
            v -= &new_mod;
        } else if v < -&half {
            v += &new_mod;
        }
        if !v.is_zero() {
            terms.push((key, v));
        }
    }
    Poly::from_terms(terms)
}

pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    normalize_sign(a * &b.div_exact(&g).expect("gcd divides"))
}

/// gcd of a list.
pub fn gcd_many<'a, I: IntoIterator<Item = &'a Poly>>(items: I) -> Poly {
    let mut g = Poly::zero();
    for it in items {
        g = gcd(&g, it);
        if g.is_one() {
            break;
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(v: usize) -> Poly {
        Poly::var(v)
    }

    #[test]
    fn gcd_of_products() {
        let f = &(&x(0) + &x(1)) + &Poly::int(3);
        let g = &(&x(0) * &x(2)) - &Poly::int(2);
        let h = &x(1).pow(2) + &x(2);
        let a = &(&f * &g) * &Poly::int(6);
        let b = &(&f * &h) * &Poly::int(4);
        assert_eq!(gcd(&a, &b), f.scale(&BigInt::from(2)));
        assert!(gcd(&g, &h).is_one());
    }

    #[test]
    fn gcd_with_powers_and_content_in_last_variable() {
        let f = &(&x(0) * &x(3)) + &Poly::int(1);
        let a = &(&f.pow(2) * &(&x(3) - &Poly::int(1))) * &x(1);
        let b = &(&f * &(&x(3) - &Poly::int(1))) * &(&x(0) + &Poly::int(5));
        let expect = &f * &(&x(3) - &Poly::int(1));
        assert_eq!(gcd(&a, &b), normalize_sign(expect));
    }

    #[test]
    fn gcd_sign_and_zero() {
        let f = -&(&x(0) + &Poly::int(1));
        assert_eq!(gcd(&f, &Poly::zero()), &x(0) + &Poly::int(1));
        assert_eq!(gcd(&Poly::int(6), &Poly::int(-4)), Poly::int(2));
    }

    #[test]
    fn lcm_divisible_by_both() {
        let a = &(&x(0) + &Poly::int(1)) * &x(1);
        let b = &(&x(0) + &Poly::int(1)) * &x(2);
        let l = lcm(&a, &b);
        assert!(l.div_exact(&a).is_some() && l.div_exact(&b).is_some());
        assert_eq!(l.total_degree(), 3);
    }
}
