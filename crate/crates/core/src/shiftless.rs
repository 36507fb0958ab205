//! Shiftless decompositions and partial fractions with respect to them.

use alloc::vec::Vec;

use crate::error::Error;
use crate::frac::{content_n, divrem_n, inverse_mod_n, primitive_n, rem_n, Frac, UniPoly, N};
use crate::poly::Poly;
use crate::shift::{integer_shift_set, multiplicity, shift_orbits};

/// A class `Q` together with the occurrences `Q(n + h)^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftlessClass {
    pub q: Poly,
    pub occurrences: Vec<(i64, u32)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShiftlessDecomposition {
    pub classes: Vec<ShiftlessClass>,
}

impl ShiftlessDecomposition {
    /// The product of all occurrences (an `n`-primitive integer polynomial).
    pub fn recombine(&self) -> Poly {
        let mut acc = Poly::one();
        for c in &self.classes {
            for &(h, e) in &c.occurrences {
                acc = &acc * &c.q.shift_i(N, h).pow(e);
            }
        }
        acc
    }
}

fn from_orbits(target: &Poly, extra: &[Poly]) -> ShiftlessDecomposition {
    let target = primitive_n(target);
    let mut inputs = alloc::vec![target.clone()];
    inputs.extend(extra.iter().cloned());
    let mut classes = Vec::new();
    for orbit in shift_orbits(&inputs) {
        let mut occ = Vec::new();
        for &j in orbit.shifts.iter().rev() {
            let e = multiplicity(&orbit.q.shift_i(N, -j), &target);
            if e > 0 {
                occ.push((-j, e));
            }
        }
        if occ.is_empty() {
            continue;
        }
        // Re-base so that the smallest occurring shift is zero.
        let h0 = occ[0].0;
        let q = orbit.q.shift_i(N, h0);
        let occurrences = occ.into_iter().map(|(h, e)| (h - h0, e)).collect();
        classes.push(ShiftlessClass { q, occurrences });
    }
    ShiftlessDecomposition { classes }
}

/// Groups the factors of `q` into squarefree, pairwise shift-coprime classes.
pub fn shiftless_decompose(q: &Poly) -> ShiftlessDecomposition {
    if q.degree(N) == 0 {
        return ShiftlessDecomposition::default();
    }
    from_orbits(q, &[])
}

/// Splits classes so that every shift of every class meets `p` in a power of
/// itself.
pub fn refine(decomp: &ShiftlessDecomposition, p: &Poly) -> ShiftlessDecomposition {
    let prod = decomp.recombine();
    if prod.degree(N) == 0 {
        return decomp.clone();
    }
    from_orbits(&prod, &[p.clone()])
}

/// `numer / prod member_i^e_i` split into a polynomial and, per member,
/// `Q`-adic pieces `(power, c)` with `deg c < deg member`.
pub fn split_fractions(numer: &UniPoly, parts: &[(UniPoly, u32)]) -> (UniPoly, Vec<Vec<(u32, UniPoly)>>) {
    let powers: Vec<UniPoly> = parts.iter().map(|(m, e)| m.pow(*e as i32)).collect();
    let total = powers.iter().fold(Frac::one(), |acc, p| &acc * p);
    let (quo, rem) = divrem_n(numer, &total);
    let mut out = Vec::with_capacity(parts.len());
    for (i, (member, e)) in parts.iter().enumerate() {
        let ni = if parts.len() == 1 {
            rem.clone()
        } else {
            let ci = powers.iter().enumerate().filter(|(k, _)| *k != i).fold(Frac::one(), |acc, (_, p)| &acc * p);
            rem_n(&(&rem_n(&rem, &powers[i]) * &inverse_mod_n(&ci, &powers[i])), &powers[i])
        };
        out.push(qadic(&ni, member, *e));
    }
    (quo, out)
}

/// `a / m^t` with `deg a < t deg m` as pieces `(s, c)` meaning `c / m^s`.
pub fn qadic(a: &UniPoly, m: &UniPoly, t: u32) -> Vec<(u32, UniPoly)> {
    let mut out = Vec::new();
    let mut rem = a.clone();
    for u in 0..t {
        if rem.is_zero() {
            break;
        }
        let (q, c) = divrem_n(&rem, m);
        if !c.is_zero() {
            out.push((t - u, c));
        }
        rem = q;
    }
    debug_assert!(rem.is_zero());
    out
}

/// One term `numerator / Q_class(n + shift)^power`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractionTerm {
    pub class: usize,
    pub shift: i64,
    pub power: u32,
    pub numerator: UniPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractionForm {
    pub polynomial_part: UniPoly,
    pub terms: Vec<PartialFractionTerm>,
}

impl PartialFractionForm {
    pub fn recombine(&self, classes: &ShiftlessDecomposition) -> Frac {
        let mut acc = self.polynomial_part.clone();
        for t in &self.terms {
            let m = Frac::from_poly(classes.classes[t.class].q.shift_i(N, t.shift));
            acc = &acc + &(&t.numerator / &m.pow(t.power as i32));
        }
        acc
    }
}

/// Partial fractions of `r` over the classes of `classes`.
pub fn partial_fractions(r: &Frac, classes: &ShiftlessDecomposition) -> Result<PartialFractionForm, Error> {
    let den = r.den();
    if den.degree(N) == 0 {
        return Ok(PartialFractionForm { polynomial_part: r.clone(), terms: Vec::new() });
    }
    let c = content_n(den);
    let mut rest = den.div_exact(&c).unwrap();
    // Find the exponent of each class member in the denominator.
    let mut parts: Vec<((usize, i64), u32)> = Vec::new();
    for (ci, cls) in classes.classes.iter().enumerate() {
        for k in integer_shift_set(&cls.q, &rest) {
            let m = cls.q.shift_i(N, k);
            let e = multiplicity(&m, &rest);
            if e == 0 {
                return Err(Error::ClassMismatch);
            }
            rest = rest.div_exact(&m.pow(e)).unwrap();
            parts.push(((ci, k), e));
        }
    }
    if rest.degree(N) > 0 {
        return Err(Error::ClassMismatch);
    }
    let members: Vec<(UniPoly, u32)> = parts
        .iter()
        .map(|((ci, k), e)| (Frac::from_poly(classes.classes[*ci].q.shift_i(N, *k)), *e))
        .collect();
    // r = num / (c * rest * prod m^e) with rest constant in n.
    let numer = Frac::new(r.num().clone(), &c * &rest);
    let (poly, pieces) = split_fractions(&numer, &members);
    let mut terms = Vec::new();
    for (((ci, k), _), list) in parts.iter().zip(pieces) {
        for (s, num) in list {
            terms.push(PartialFractionTerm { class: *ci, shift: *k, power: s, numerator: num });
        }
    }
    Ok(PartialFractionForm { polynomial_part: poly, terms })
}
