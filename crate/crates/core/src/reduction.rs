//! Canonical forms of rational functions modulo the image of an adjoint
//! operator `L* = sum_i p_i(n) S_n^(-i)`.
//!
//! Rational functions are handled in partial-fraction coordinates over a
//! registry of shift classes.  The classes coming from `p_0 p_r` are fixed at
//! construction; denominators that are unrelated to them are registered on
//! the fly, so atom coordinates stay comparable across calls.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::frac::{content_n, divrem_n, gcd_n, inverse_mod_n, primitive_n, rem_n, Frac, ParamScalar, UniPoly, N};
use crate::gcd::gcd_many;
use crate::poly::Poly;
use crate::shiftless::split_fractions;
use crate::shift::{integer_roots, integer_shift_set, multiplicity, shift_orbits, squarefree};

/// `L* = sum_i p_i(n) S_n^(-i)` with integer polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointOperator {
    pub p: Vec<Poly>,
}

impl AdjointOperator {
    /// The adjoint of `L = sum_i a_i(n) S_n^i`, content-normalized.
    pub fn of_operator(a: &[Poly]) -> AdjointOperator {
        let p: Vec<Poly> = a.iter().enumerate().map(|(i, ai)| ai.shift_i(N, -(i as i64))).collect();
        AdjointOperator::new(p)
    }

    /// Wraps explicit coefficients, dividing out their common content in `K`
    /// and making the leading coefficient of `p_r` positive.
    pub fn new(mut p: Vec<Poly>) -> AdjointOperator {
        while p.len() > 1 && p.last().unwrap().is_zero() {
            p.pop();
        }
        assert!(p.iter().any(|c| !c.is_zero()), "zero adjoint operator");
        let contents: Vec<Poly> = p.iter().filter(|c| !c.is_zero()).map(content_n).collect();
        let mut c = gcd_many(contents.iter());
        if p.last().unwrap().is_lc_negative() {
            c = -c;
        }
        let p = p.iter().map(|x| x.div_exact(&c).unwrap()).collect();
        AdjointOperator { p }
    }

    pub fn order(&self) -> usize {
        self.p.len() - 1
    }

    pub fn apply(&self, f: &Frac) -> Frac {
        let mut acc = Frac::zero();
        for (i, pi) in self.p.iter().enumerate() {
            if !pi.is_zero() && !f.is_zero() {
                acc = &acc + &(&Frac::from_poly(pi.clone()) * &f.shift(N, -(i as i64)));
            }
        }
        acc
    }

    fn apply_poly(&self, f: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for (i, pi) in self.p.iter().enumerate() {
            acc = &acc + &(pi * &f.shift_i(N, -(i as i64)));
        }
        acc
    }
}

/// Coordinate of a rational function in partial-fraction form.
///
/// `Polar` stands for `n^degree / Q_class(n - shift)^power` with
/// `degree < deg Q_class`; `Poly(d)` stands for `n^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Poly(u32),
    Polar { class: usize, shift: i64, power: u32, degree: u32 },
}

/// A rational function as a polynomial part plus `Q`-adic polar terms.
///
/// The entry `(class, j, s) -> c` stands for `c(n) / Q_class(n - j)^s` with
/// `deg c < deg Q_class`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Decomp {
    pub poly: UniPoly,
    pub polar: BTreeMap<(usize, i64, u32), UniPoly>,
}

impl Decomp {
    pub fn zero() -> Decomp {
        Decomp::default()
    }

    pub fn from_poly(p: UniPoly) -> Decomp {
        Decomp { poly: p, polar: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.polar.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.polar.is_empty()
    }

    fn add_polar(&mut self, key: (usize, i64, u32), c: &UniPoly) {
        if c.is_zero() {
            return;
        }
        match self.polar.get_mut(&key) {
            Some(slot) => {
                let s = &*slot + c;
                if s.is_zero() {
                    self.polar.remove(&key);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.polar.insert(key, c.clone());
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &ParamScalar, other: &Decomp) {
        if c.is_zero() {
            return;
        }
        if !other.poly.is_zero() {
            self.poly = &self.poly + &(c * &other.poly);
        }
        for (k, v) in &other.polar {
            self.add_polar(*k, &(c * v));
        }
    }

    pub fn add_assign(&mut self, other: &Decomp) {
        self.add_scaled(&Frac::one(), other);
    }

    pub fn scaled(&self, c: &ParamScalar) -> Decomp {
        let mut out = Decomp::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn coeff(&self, atom: Atom) -> ParamScalar {
        match atom {
            Atom::Poly(d) => {
                if self.poly.is_zero() {
                    Frac::zero()
                } else {
                    self.poly.coeff_n(d)
                }
            }
            Atom::Polar { class, shift, power, degree } => match self.polar.get(&(class, shift, power)) {
                Some(c) => c.coeff_n(degree),
                None => Frac::zero(),
            },
        }
    }

    /// The largest atom with a nonzero coefficient, and that coefficient.
    pub fn leading(&self) -> Option<(Atom, ParamScalar)> {
        if let Some((&(class, shift, power), c)) = self.polar.iter().next_back() {
            return Some((Atom::Polar { class, shift, power, degree: c.deg_n() }, c.lc_n()));
        }
        if self.poly.is_zero() {
            None
        } else {
            Some((Atom::Poly(self.poly.deg_n()), self.poly.lc_n()))
        }
    }

    /// All atoms with nonzero coefficients, in increasing order.
    pub fn atoms(&self) -> Vec<(Atom, ParamScalar)> {
        let mut out = Vec::new();
        if !self.poly.is_zero() {
            for (d, c) in self.poly.coeffs_n().into_iter().enumerate() {
                if !c.is_zero() {
                    out.push((Atom::Poly(d as u32), c));
                }
            }
        }
        for (&(class, shift, power), c) in &self.polar {
            for (d, a) in c.coeffs_n().into_iter().enumerate() {
                if !a.is_zero() {
                    out.push((Atom::Polar { class, shift, power, degree: d as u32 }, a));
                }
            }
        }
        out
    }

    pub fn classes(&self) -> BTreeSet<usize> {
        self.polar.keys().map(|k| k.0).collect()
    }

    /// Shifts of `class` present in the polar part.
    pub fn shifts_of(&self, class: usize) -> BTreeSet<i64> {
        self.polar.range((class, i64::MIN, 0)..=(class, i64::MAX, u32::MAX)).map(|(k, _)| k.1).collect()
    }
}

/// One shift class `Q` with the multiplicities of its shifts in `p_0` and `p_r`.
#[derive(Clone, Debug)]
pub struct ShiftClass {
    pub q: Poly,
    pub degree: u32,
    /// `j -> ` multiplicity of `Q(n - j)` in `p_0(n)`.
    pub ord0: BTreeMap<i64, u32>,
    /// `j -> ` multiplicity of `Q(n - j)` in `p_r(n)`.
    pub ordr: BTreeMap<i64, u32>,
}

impl ShiftClass {
    /// `Q(n - j)` as an integer polynomial.
    pub fn member(&self, j: i64) -> Poly {
        self.q.shift_i(N, -j)
    }

    fn member_n(&self, j: i64) -> UniPoly {
        Frac::from_poly(self.member(j))
    }
}

/// `L*(n^s) = n^(s + sigma) (p(s) + O(1/n))`; `p` is stored with `s` in variable 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndicialData {
    pub sigma: i64,
    pub p: Frac,
    /// Nonnegative integer roots of `p`, increasing.
    pub roots: Vec<u32>,
}

impl IndicialData {
    pub fn of(adj: &AdjointOperator) -> IndicialData {
        let big_d = adj.p.iter().filter(|p| !p.is_zero()).map(|p| p.degree(N)).max().unwrap() as i64;
        let coeffs: Vec<Vec<Poly>> = adj.p.iter().map(|p| p.coeffs_in(N)).collect();
        let s = Poly::var(N);
        for d in (big_d - adj.order() as i64 - 1..=big_d).rev() {
            let mut c = Frac::zero();
            for (i, ci) in coeffs.iter().enumerate() {
                for (e, pe) in ci.iter().enumerate() {
                    let k = e as i64 - d;
                    if k < 0 || pe.is_zero() {
                        continue;
                    }
                    let k = k as u32;
                    let mut falling = Poly::one();
                    let mut fact = BigInt::from(1);
                    for t in 0..k {
                        falling = &falling * &(&s - &Poly::int(t as i64));
                        fact *= BigInt::from(t + 1);
                    }
                    let sign = BigInt::from(-(i as i64)).pow(k);
                    let term = (pe * &falling).scale(&sign);
                    c = &c + &Frac::new(term, Poly::constant(fact));
                }
            }
            if !c.is_zero() {
                let mut roots: Vec<u32> = integer_roots(c.num())
                    .into_iter()
                    .filter(|r| r.sign() != num_bigint::Sign::Minus)
                    .map(|r| u32::try_from(r).expect("indicial root out of range"))
                    .collect();
                roots.sort_unstable();
                return IndicialData { sigma: d, p: c, roots };
            }
        }
        unreachable!("indicial polynomial vanishes identically")
    }

    pub fn eval(&self, s: u32) -> ParamScalar {
        self.p.eval(N, &BigInt::from(s)).unwrap()
    }
}

/// An echelon basis element together with a preimage under `L*`.
#[derive(Clone, Debug)]
pub struct BasisRow {
    pub lead: Atom,
    pub value: Decomp,
    pub preimage: Frac,
}

/// A canonical form paired with `T` such that `input - value = L*(T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedValue {
    pub value: Frac,
    pub preimage: Frac,
}

/// Work counters, exposed for reports and tests.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub canonical_forms: u64,
    pub weak_polar_steps: u64,
    pub weak_poly_steps: u64,
}

fn insert_row(rows: &mut Vec<BasisRow>, mut value: Decomp, mut preimage: Frac) -> bool {
    for row in rows.iter() {
        let c = value.coeff(row.lead);
        if !c.is_zero() {
            value.add_scaled(&-&c, &row.value);
            preimage = &preimage - &(&c * &row.preimage);
        }
    }
    let Some((lead, lc)) = value.leading() else { return false };
    let inv = lc.inv();
    let value = value.scaled(&inv);
    let preimage = &preimage * &inv;
    for row in rows.iter_mut() {
        let c = row.value.coeff(lead);
        if !c.is_zero() {
            row.value.add_scaled(&-&c, &value);
            row.preimage = &row.preimage - &(&c * &preimage);
        }
    }
    rows.push(BasisRow { lead, value, preimage });
    rows.sort_by(|a, b| b.lead.cmp(&a.lead));
    true
}

/// Precomputed reduction data for one adjoint operator.
#[derive(Clone, Debug)]
pub struct Reducer {
    adj: AdjointOperator,
    classes: Vec<ShiftClass>,
    polar_bases: Vec<Vec<BasisRow>>,
    poly_basis: Vec<BasisRow>,
    indicial: IndicialData,
    stats: ReductionStats,
}

impl Reducer {
    pub fn new(adj: AdjointOperator) -> Reducer {
        let r = adj.order();
        let p0 = adj.p[0].clone();
        let pr = adj.p[r].clone();
        let indicial = IndicialData::of(&adj);
        let mut classes = Vec::new();
        for orbit in shift_orbits(&[p0.clone(), pr.clone()]) {
            let q = orbit.q;
            let mut ord0 = BTreeMap::new();
            let mut ordr = BTreeMap::new();
            for &j in &orbit.shifts {
                let m = q.shift_i(N, -j);
                let a = multiplicity(&m, &p0);
                let b = multiplicity(&m, &pr);
                if a > 0 {
                    ord0.insert(j, a);
                }
                if b > 0 {
                    ordr.insert(j, b);
                }
            }
            classes.push(ShiftClass { degree: q.degree(N), q, ord0, ordr });
        }
        let mut red = Reducer {
            adj,
            polar_bases: alloc::vec![Vec::new(); classes.len()],
            classes,
            poly_basis: Vec::new(),
            indicial,
            stats: ReductionStats::default(),
        };
        red.build_bases();
        red
    }

    pub fn adjoint(&self) -> &AdjointOperator {
        &self.adj
    }

    pub fn order(&self) -> usize {
        self.adj.order()
    }

    pub fn classes(&self) -> &[ShiftClass] {
        &self.classes
    }

    pub fn indicial(&self) -> &IndicialData {
        &self.indicial
    }

    pub fn polar_basis(&self, class: usize) -> &[BasisRow] {
        &self.polar_bases[class]
    }

    pub fn poly_basis(&self) -> &[BasisRow] {
        &self.poly_basis
    }

    pub fn stats(&self) -> ReductionStats {
        self.stats
    }

    // ----- partial fractions -------------------------------------------------

    /// `num / Q_class(n - j)^t` for a polynomial `num`, in atom coordinates.
    fn single_decomp(&self, num: &UniPoly, class: usize, j: i64, t: u32, out: &mut Decomp) {
        if num.is_zero() {
            return;
        }
        let qj = self.classes[class].member_n(j);
        let (quo, mut rem) = divrem_n(num, &qj.pow(t as i32));
        out.poly = &out.poly + &quo;
        for u in 0..t {
            if rem.is_zero() {
                break;
            }
            let (q2, c) = divrem_n(&rem, &qj);
            out.add_polar((class, j, t - u), &c);
            rem = q2;
        }
    }

    /// `L*(a / Q_class(n - j)^t)` in atom coordinates.
    pub fn adjoint_image_atom(&self, a: &UniPoly, class: usize, j: i64, t: u32) -> Decomp {
        let mut out = Decomp::zero();
        for (i, pi) in self.adj.p.iter().enumerate() {
            if pi.is_zero() {
                continue;
            }
            let num = &Frac::from_poly(pi.clone()) * &a.shift(N, -(i as i64));
            self.single_decomp(&num, class, j + i as i64, t, &mut out);
        }
        out
    }

    /// `L*` applied to a function given in atom coordinates.
    pub fn adjoint_image(&self, x: &Decomp) -> Decomp {
        let mut out = Decomp::zero();
        if !x.poly.is_zero() {
            out.poly = self.apply_poly(&x.poly);
        }
        for (&(class, j, s), c) in &x.polar {
            out.add_assign(&self.adjoint_image_atom(c, class, j, s));
        }
        out
    }

    fn apply_poly(&self, p: &UniPoly) -> UniPoly {
        Frac::new(self.adj.apply_poly(p.num()), p.den().clone())
    }

    /// Locates `f` (squarefree, `n`-primitive) among registered class members;
    /// returns the hit members and the unmatched cofactor.
    fn match_classes(&self, f: &Poly, classes: impl Iterator<Item = usize>) -> (Vec<(usize, i64)>, Poly) {
        let mut rest = f.clone();
        let mut hits = Vec::new();
        for c in classes {
            if rest.degree(N) == 0 {
                break;
            }
            for k in integer_shift_set(&self.classes[c].q, &rest) {
                let j = -k;
                let g = gcd_n(&rest, &self.classes[c].member(j));
                if g.degree(N) > 0 {
                    rest = primitive_n(&rest.div_exact(&g).unwrap());
                    hits.push((c, j));
                }
            }
        }
        (hits, rest)
    }

    /// Partial-fraction decomposition over the class registry, registering
    /// classes for denominator factors unrelated to existing ones.
    pub fn decompose(&mut self, f: &Frac) -> Decomp {
        if f.is_zero() {
            return Decomp::zero();
        }
        let den = f.den();
        if den.degree(N) == 0 {
            return Decomp::from_poly(f.clone());
        }
        let c = content_n(den);
        let dprim = den.div_exact(&c).unwrap();
        let mut need: BTreeMap<(usize, i64), u32> = BTreeMap::new();
        let mut leftovers: Vec<(Poly, u32)> = Vec::new();
        for (g, e) in squarefree(&dprim) {
            let (hits, rest) = self.match_classes(&g, 0..self.classes.len());
            for h in hits {
                let slot = need.entry(h).or_insert(0);
                *slot = (*slot).max(e);
            }
            if rest.degree(N) > 0 {
                leftovers.push((rest, e));
            }
        }
        if !leftovers.is_empty() {
            let polys: Vec<Poly> = leftovers.iter().map(|l| l.0.clone()).collect();
            let first = self.classes.len();
            for orbit in shift_orbits(&polys) {
                self.classes.push(ShiftClass {
                    degree: orbit.q.degree(N),
                    q: orbit.q,
                    ord0: BTreeMap::new(),
                    ordr: BTreeMap::new(),
                });
                self.polar_bases.push(Vec::new());
            }
            for (g, e) in leftovers {
                let (hits, rest) = self.match_classes(&g, first..self.classes.len());
                debug_assert!(rest.degree(N) == 0);
                for h in hits {
                    let slot = need.entry(h).or_insert(0);
                    *slot = (*slot).max(e);
                }
            }
        }
        // f = num / (c * dprim) = num * (E / dprim) / (c * E).
        let mut e_poly = Poly::one();
        for (&(cl, j), &e) in &need {
            e_poly = &e_poly * &self.classes[cl].member(j).pow(e);
        }
        let cof = e_poly.div_exact(&dprim).expect("class members cover the denominator");
        let numer = Frac::new(f.num() * &cof, c);
        self.partial_fractions_over(&numer, &need)
    }

    /// Splits `numer / prod Q_c(n - j)^e` into atoms.
    fn partial_fractions_over(&self, numer: &UniPoly, need: &BTreeMap<(usize, i64), u32>) -> Decomp {
        let parts: Vec<(UniPoly, u32)> =
            need.iter().map(|(&(cl, j), &e)| (self.classes[cl].member_n(j), e)).collect();
        let (poly, pieces) = split_fractions(numer, &parts);
        let mut out = Decomp::from_poly(poly);
        for (&(cl, j), list) in need.keys().zip(pieces) {
            for (s, c) in list {
                out.add_polar((cl, j, s), &c);
            }
        }
        out
    }

    /// Recombines atom coordinates into a rational function.
    pub fn to_frac(&self, x: &Decomp) -> Frac {
        let mut acc = x.poly.clone();
        let mut by_member: BTreeMap<(usize, i64), Vec<(u32, &UniPoly)>> = BTreeMap::new();
        for (&(cl, j, s), c) in &x.polar {
            by_member.entry((cl, j)).or_default().push((s, c));
        }
        for ((cl, j), terms) in by_member {
            let qj = self.classes[cl].member_n(j);
            let smax = terms.iter().map(|t| t.0).max().unwrap();
            let mut num = Frac::zero();
            for (s, c) in terms {
                num = &num + &(c * &qj.pow((smax - s) as i32));
            }
            acc = &acc + &(&num / &qj.pow(smax as i32));
        }
        acc
    }

    // ----- weak polar reduction ----------------------------------------------

    /// Full numerator `lambda` of the pole at `Q(n - j)`, over `Q(n - j)^s`.
    fn numerator_at(&self, x: &Decomp, class: usize, j: i64) -> (UniPoly, u32) {
        let qj = self.classes[class].member_n(j);
        let terms: Vec<(u32, UniPoly)> = x
            .polar
            .range((class, j, 0)..=(class, j, u32::MAX))
            .map(|(k, c)| (k.2, c.clone()))
            .collect();
        let s = terms.iter().map(|t| t.0).max().unwrap();
        let mut lam = Frac::zero();
        for (si, c) in terms {
            lam = &lam + &(&c * &qj.pow((s - si) as i32));
        }
        (lam, s)
    }

    /// Moves the poles of `class` into shifts `0..r`; returns the preimage.
    pub fn weak_reduce_polar(&mut self, x: &mut Decomp, class: usize) -> Frac {
        let r = self.order() as i64;
        let mut pre = Frac::zero();
        let p0 = Frac::from_poly(self.adj.p[0].clone());
        let pr = Frac::from_poly(self.adj.p[r as usize].clone());
        loop {
            let shifts = x.shifts_of(class);
            let (Some(&jmin), Some(&jmax)) = (shifts.first(), shifts.last()) else { break };
            let cls = &self.classes[class];
            let (j, o, unit, target_shift) = if jmin < 0 {
                let o = cls.ord0.get(&jmin).copied().unwrap_or(0);
                (jmin, o, &p0 / &cls.member_n(jmin).pow(o as i32), jmin)
            } else if jmax >= r && r >= 0 {
                let o = cls.ordr.get(&jmax).copied().unwrap_or(0);
                (jmax, o, &pr / &cls.member_n(jmax).pow(o as i32), jmax - r)
            } else {
                break;
            };
            self.stats.weak_polar_steps += 1;
            let (lam, s) = self.numerator_at(x, class, j);
            let qj = self.classes[class].member_n(j);
            let modulus = qj.pow(s as i32);
            let a = rem_n(&(&lam * &inverse_mod_n(&unit, &modulus)), &modulus);
            let a = if target_shift == j { a } else { a.shift(N, r) };
            let t = s + o;
            let image = self.adjoint_image_atom(&a, class, target_shift, t);
            x.add_scaled(&Frac::int(-1), &image);
            let qt = self.classes[class].member_n(target_shift).pow(t as i32);
            pre = &pre + &(&a / &qt);
            debug_assert!(!x.shifts_of(class).contains(&j));
        }
        if cfg!(debug_assertions) {
            for j in x.shifts_of(class) {
                debug_assert!(j >= 0 && j < r.max(1), "weak reduction left a pole at shift {}", j);
            }
        }
        pre
    }

    // ----- strong bases ------------------------------------------------------

    fn generator(&mut self, class: usize, j: i64, s: u32, l: u32) -> (Decomp, Frac) {
        let a = Frac::from_poly(Poly::var(N).pow(l));
        let mut g = self.adjoint_image_atom(&a, class, j, s);
        let t = self.weak_reduce_polar(&mut g, class);
        let pre = &(&a / &self.classes[class].member_n(j).pow(s as i32)) - &t;
        (g, pre)
    }

    fn build_class_basis(&mut self, class: usize, window: &[(i64, u32)]) -> (Vec<BasisRow>, Vec<BasisRow>) {
        let mut rows = Vec::new();
        let mut poly_rows = Vec::new();
        let d = self.classes[class].degree;
        for &(j, smax) in window {
            for s in 1..=smax {
                for l in 0..s * d {
                    let (g, pre) = self.generator(class, j, s, l);
                    if g.is_polynomial() {
                        if !g.is_zero() {
                            poly_rows.push(BasisRow { lead: Atom::Poly(0), value: g, preimage: pre });
                        }
                    } else {
                        insert_row(&mut rows, g, pre);
                    }
                }
            }
        }
        let mut polar = Vec::new();
        for row in rows {
            if matches!(row.lead, Atom::Poly(_)) {
                poly_rows.push(row);
            } else {
                polar.push(row);
            }
        }
        (polar, poly_rows)
    }

    fn default_window(&self, class: usize) -> Vec<(i64, u32)> {
        let r = self.order() as i64;
        let cls = &self.classes[class];
        let mut w: BTreeMap<i64, u32> = BTreeMap::new();
        for (&j, &o) in &cls.ord0 {
            if j < 0 {
                w.insert(j, o);
            }
        }
        for (&jj, &o) in &cls.ordr {
            let j = jj - r;
            if j >= 0 {
                let e = w.entry(j).or_insert(0);
                *e = (*e).max(o);
            }
        }
        w.into_iter().collect()
    }

    /// Whether the strong basis of `class` reduces `L*` of a probe function
    /// to a polynomial.
    fn probe_passes(&mut self, class: usize, window: &[(i64, u32)]) -> bool {
        let r = self.order() as i64;
        let d = self.classes[class].degree;
        let (lo, hi) = match (window.first(), window.last()) {
            (Some(a), Some(b)) => (a.0.min(0) - 1, b.0.max(r) + 1),
            _ => (-1, r + 1),
        };
        let smax = window.iter().map(|w| w.1).max().unwrap_or(0) + 1;
        let mut probe = Decomp::zero();
        let mut k = 1i64;
        for j in lo..=hi {
            for s in 1..=smax {
                let c = Frac::from_poly(&Poly::var(N).pow((j.rem_euclid(d as i64)) as u32) + &Poly::int(k));
                probe.add_polar((class, j, s), &rem_n(&c, &self.classes[class].member_n(0)));
                k = k % 7 + 1;
            }
        }
        let mut x = self.adjoint_image(&probe);
        self.weak_reduce_polar(&mut x, class);
        self.strong_reduce_polar(&mut x, class);
        x.shifts_of(class).is_empty()
    }

    fn build_bases(&mut self) {
        let mut poly_gens: Vec<(Decomp, Frac)> = Vec::new();
        for class in 0..self.classes.len() {
            let mut window = self.default_window(class);
            if window.is_empty() {
                continue;
            }
            let mut widen = 0u32;
            loop {
                let (polar, poly_rows) = self.build_class_basis(class, &window);
                self.polar_bases[class] = polar;
                if self.probe_passes(class, &window) || widen >= 3 {
                    for row in poly_rows {
                        poly_gens.push((row.value, row.preimage));
                    }
                    break;
                }
                widen += 1;
                let r = self.order() as i64;
                let lo = window.first().unwrap().0.min(0) - widen as i64;
                let hi = window.last().unwrap().0.max(0) + widen as i64;
                let smax = window.iter().map(|w| w.1).max().unwrap() + widen;
                window = (lo..=hi.max(r)).map(|j| (j, smax)).collect();
            }
        }
        for &s in &self.indicial.roots.clone() {
            let a = Frac::from_poly(Poly::var(N).pow(s));
            poly_gens.push((Decomp::from_poly(self.apply_poly(&a)), a));
        }
        let mut rows = Vec::new();
        for (g, pre) in poly_gens {
            let (w, t) = self.weak_reduce_poly(&g.poly);
            insert_row(&mut rows, Decomp::from_poly(w), &pre - &t);
        }
        self.poly_basis = rows;
    }

    /// Reduces the polar part of `class` against its echelon basis.
    pub fn strong_reduce_polar(&self, x: &mut Decomp, class: usize) -> Frac {
        let mut pre = Frac::zero();
        for row in &self.polar_bases[class] {
            let c = x.coeff(row.lead);
            if !c.is_zero() {
                x.add_scaled(&-&c, &row.value);
                pre = &pre + &(&c * &row.preimage);
            }
        }
        pre
    }

    // ----- polynomial reduction ----------------------------------------------

    /// Weak reduction at infinity; returns the reduced polynomial and preimage.
    pub fn weak_reduce_poly(&mut self, p: &UniPoly) -> (UniPoly, Frac) {
        let sigma = self.indicial.sigma;
        let mut p = p.clone();
        let mut parked = Frac::zero();
        let mut pre = Frac::zero();
        while !p.is_zero() {
            let d = p.deg_n() as i64;
            if d < sigma {
                break;
            }
            let t = (d - sigma) as u32;
            let lc = p.lc_n();
            let mono = Frac::from_poly(Poly::var(N).pow(d as u32));
            if self.indicial.roots.contains(&t) {
                let lt = &lc * &mono;
                parked = &parked + &lt;
                p = &p - &lt;
            } else {
                self.stats.weak_poly_steps += 1;
                let c = &lc / &self.indicial.eval(t);
                let nt = Poly::var(N).pow(t);
                let image = Frac::from_poly(self.adj.apply_poly(&nt));
                p = &p - &(&c * &image);
                pre = &pre + &(&c * &Frac::from_poly(nt));
            }
        }
        (&parked + &p, pre)
    }

    pub fn strong_reduce_poly(&self, p: &mut UniPoly) -> Frac {
        let mut pre = Frac::zero();
        for row in &self.poly_basis {
            let Atom::Poly(d) = row.lead else { continue };
            if p.is_zero() {
                break;
            }
            let c = p.coeff_n(d);
            if !c.is_zero() {
                *p = &*p - &(&c * &row.value.poly);
                pre = &pre + &(&c * &row.preimage);
            }
        }
        pre
    }

    // ----- canonical form ----------------------------------------------------

    /// Canonical form of a function given in atom coordinates.
    pub fn reduce_decomp(&mut self, mut x: Decomp) -> (Decomp, Frac) {
        self.stats.canonical_forms += 1;
        let mut pre = Frac::zero();
        for class in x.classes() {
            pre = &pre + &self.weak_reduce_polar(&mut x, class);
        }
        for class in x.classes() {
            pre = &pre + &self.strong_reduce_polar(&mut x, class);
        }
        let (mut p, t) = self.weak_reduce_poly(&x.poly);
        pre = &pre + &t;
        pre = &pre + &self.strong_reduce_poly(&mut p);
        x.poly = p;
        (x, pre)
    }

    pub fn reduce(&mut self, f: &Frac) -> (Decomp, Frac) {
        let x = self.decompose(f);
        self.reduce_decomp(x)
    }

    pub fn canonical_form(&mut self, f: &Frac) -> ReducedValue {
        let (x, preimage) = self.reduce(f);
        ReducedValue { value: self.to_frac(&x), preimage }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n() -> Poly {
        Poly::var(N)
    }

    fn x() -> Poly {
        Poly::var(1)
    }

    fn frac(p: Poly) -> Frac {
        Frac::from_poly(p)
    }

    /// `L* = x^2 (n - 2) S^-3 - n(4n^2 - x^2 - 4n) S^-2 + n(4n^2 - x^2 - 4n) S^-1 - x^2 (n + 2)`.
    fn sample_adjoint() -> AdjointOperator {
        let n = n();
        let x2 = &x() * &x();
        let mid = &n * &(&(&(&Poly::int(4) * &(&n * &n)) - &x2) - &(&Poly::int(4) * &n));
        AdjointOperator::new(alloc::vec![
            -(&x2 * &(&n + &Poly::int(2))),
            mid.clone(),
            -mid,
            &x2 * &(&n - &Poly::int(2)),
        ])
    }

    #[test]
    fn indicial_examples() {
        let ind = IndicialData::of(&sample_adjoint());
        assert_eq!(ind.sigma, 2);
        assert_eq!(ind.p, frac(&Poly::int(4) * &n()));
        let c = IndicialData::of(&AdjointOperator::new(alloc::vec![Poly::int(3)]));
        assert_eq!((c.sigma, c.p.clone()), (0, Frac::one()));
        let t = IndicialData::of(&AdjointOperator::new(alloc::vec![Poly::int(-1), Poly::int(1)]));
        assert_eq!(t.sigma, -1);
        assert_eq!(t.p, frac(-n()));
    }

    #[test]
    fn adjoint_of_shift() {
        let a = AdjointOperator::of_operator(&[Poly::zero(), n()]);
        assert_eq!(a.p, alloc::vec![Poly::zero(), &n() - &Poly::int(1)]);
    }

    #[test]
    fn decompose_round_trip() {
        let mut red = Reducer::new(sample_adjoint());
        let f = Frac::new(
            &(&(&n() * &n()) * &x()) + &Poly::int(3),
            &(&(&n() - &Poly::int(1)).pow(2) * &(&n() + &Poly::int(3))) * &(&(&n() * &n()) + &x()),
        );
        let d = red.decompose(&f);
        assert_eq!(red.to_frac(&d), f);
        for (k, c) in &d.polar {
            assert!(c.deg_n() < red.classes()[k.0].degree);
        }
    }

    #[test]
    fn image_reduces_to_zero() {
        let mut red = Reducer::new(sample_adjoint());
        let adj = red.adjoint().clone();
        let fs = [
            Frac::new(Poly::one(), &n() + &Poly::int(3)),
            Frac::new(x(), (&n() - &Poly::int(4)).pow(2)),
            Frac::new(&n() + &x(), &(&n() * &n()) + &x()),
            frac(&n() * &n()),
            Frac::new(Poly::one(), &n() + &Poly::int(1)),
        ];
        for f in fs {
            let g = adj.apply(&f);
            let rv = red.canonical_form(&g);
            assert!(rv.value.is_zero(), "{:?} -> {:?}", f, rv.value);
            assert!(adj.apply(&rv.preimage) == g);
        }
    }

    #[test]
    fn fresh_class_passes_through() {
        let mut red = Reducer::new(sample_adjoint());
        let f = Frac::new(Poly::one(), &(&n() * &n()) + &x());
        let rv = red.canonical_form(&f);
        assert_eq!(rv.value, f);
        assert!(rv.preimage.is_zero());
    }
}
