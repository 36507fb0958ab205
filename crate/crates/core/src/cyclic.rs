//! Cyclic vectors for the summation shift, the annihilating recurrence and
//! the Lagrange identity that links it to its adjoint.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::Error;
use crate::frac::{Frac, N};
use crate::gcd::{gcd_many, lcm};
use crate::linalg::{inverse, row_times};
use crate::modp::SplitMix;
use crate::ore::{Action, QuotientModule};
use crate::poly::Poly;
use crate::reduction::AdjointOperator;

/// `M*(u) = sum_i m_i(n - i) u(n - i)` for `M = sum_i m_i S_n^i`.
pub fn adjoint_apply(m: &[Frac], u: &Frac) -> Frac {
    let mut acc = Frac::zero();
    if u.is_zero() {
        return acc;
    }
    for (i, mi) in m.iter().enumerate() {
        if !mi.is_zero() {
            acc = &acc + &(mi * u).shift(N, -(i as i64));
        }
    }
    acc
}

/// `M(v) = sum_i m_i(n) v(n + i)`.
pub fn operator_apply(m: &[Frac], v: &Frac) -> Frac {
    let mut acc = Frac::zero();
    for (i, mi) in m.iter().enumerate() {
        if !mi.is_zero() {
            acc = &acc + &(mi * &v.shift(N, i as i64));
        }
    }
    acc
}

/// Coefficients of `P_M(u, .)`: entry `i` is
/// `sum_{j = i+1}^{ord M} m_j(n + i - j) u(n + i - j)`, padded to `len`.
pub fn lagrange_bilinear(m: &[Frac], u: &Frac, len: usize) -> Vec<Frac> {
    let mut out = alloc::vec![Frac::zero(); len];
    if u.is_zero() {
        return out;
    }
    let prods: Vec<Frac> = m.iter().map(|mi| mi * u).collect();
    for (i, slot) in out.iter_mut().enumerate() {
        for (j, pj) in prods.iter().enumerate().skip(i + 1) {
            if !pj.is_zero() {
                *slot = &*slot + &pj.shift(N, i as i64 - j as i64);
            }
        }
    }
    out
}

/// Cyclic vector data for the summation shift on a quotient module.
#[derive(Clone, Debug)]
pub struct CyclicData {
    /// Staircase coordinates of the cyclic vector.
    pub gamma: Vec<Frac>,
    /// `L = sum_i l[i] S_n^i` annihilating the cyclic vector.
    pub l: Vec<Poly>,
    /// Row `i` holds the staircase coordinates of `S_n^i gamma`.
    pub change_of_basis: Vec<Vec<Frac>>,
    inverse: Vec<Vec<Frac>>,
    /// `1 = A_1(gamma)`.
    pub a1: Vec<Frac>,
    /// `d_j gamma = B_j(gamma)` for every non-summation Ore variable `j`.
    pub b: BTreeMap<usize, Vec<Frac>>,
    /// Cyclic coordinates of `S_n^t gamma` for `t < 2r - 1`.
    pub powers: Vec<Vec<Frac>>,
    /// `tables[j][i][l]`: coefficient of `S_n^l gamma` in `S_n^i d_j gamma`.
    pub tables: BTreeMap<usize, Vec<Vec<Frac>>>,
    actions: BTreeMap<usize, Action>,
    poly_vars: BTreeMap<usize, usize>,
}

fn try_candidate(module: &QuotientModule, gamma: Vec<Frac>) -> Option<(Vec<Vec<Frac>>, Vec<Vec<Frac>>)> {
    let r = module.dim();
    let s = module.algebra().summation();
    let mut rows = alloc::vec![gamma];
    for _ in 1..r {
        let next = module.apply(s, rows.last().unwrap());
        rows.push(next);
    }
    let inv = inverse(&rows)?;
    Some((rows, inv))
}

/// Deterministic candidate cyclic vectors: unit vectors, then sparse
/// combinations with small integer weights and monomial factors, then
/// pseudo-random dense combinations from the same family.
fn candidates(r: usize) -> impl Iterator<Item = Vec<Poly>> {
    let mut list: Vec<Vec<Poly>> = Vec::new();
    let rr = r as i64;
    for support in 1..=r.min(3) {
        let mut subsets = Vec::new();
        for mask in 1u32..(1 << r) {
            if mask.count_ones() as usize == support {
                subsets.push(mask);
            }
        }
        for c in 1..=rr {
            for d in 0..r as u32 {
                for &mask in &subsets {
                    let mut v = alloc::vec![Poly::zero(); r];
                    let mut first = true;
                    for (i, slot) in v.iter_mut().enumerate() {
                        if mask & (1 << i) != 0 {
                            // The first entry keeps weight one so candidates differ.
                            *slot = if first { Poly::one() } else { Poly::var(N).pow(d).scale(&c.into()) };
                            first = false;
                        }
                    }
                    if support == 1 && (c > 1 || d > 0) {
                        continue;
                    }
                    if !list.contains(&v) {
                        list.push(v);
                    }
                }
            }
        }
    }
    let mut rng = SplitMix::new(0x6379_636c_6963_0001);
    for _ in 0..64 {
        let v: Vec<Poly> = (0..r)
            .map(|_| {
                let coeffs: Vec<Poly> = (0..r).map(|_| Poly::int(rng.below(r as u64 + 1) as i64)).collect();
                Poly::from_coeffs_in(N, &coeffs)
            })
            .collect();
        list.push(v);
    }
    list.into_iter()
}

impl CyclicData {
    pub fn find(module: &QuotientModule) -> Result<CyclicData, Error> {
        module.check_shift_invertible()?;
        let r = module.dim();
        for cand in candidates(r) {
            if cand.iter().all(|p| p.is_zero()) {
                continue;
            }
            let gamma: Vec<Frac> = cand.into_iter().map(Frac::from_poly).collect();
            if let Some((rows, inv)) = try_candidate(module, gamma) {
                return Ok(CyclicData::build(module, rows, inv));
            }
        }
        Err(Error::NoCyclicVectorFound("candidate family exhausted although the shift is invertible".into()))
    }

    /// Uses a given vector, failing when it is not cyclic.
    pub fn with_gamma(module: &QuotientModule, gamma: Vec<Frac>) -> Result<CyclicData, Error> {
        module.check_shift_invertible()?;
        match try_candidate(module, gamma) {
            Some((rows, inv)) => Ok(CyclicData::build(module, rows, inv)),
            None => Err(Error::NoCyclicVectorFound("the given vector is not cyclic".into())),
        }
    }

    fn build(module: &QuotientModule, rows: Vec<Vec<Frac>>, inv: Vec<Vec<Frac>>) -> CyclicData {
        let r = module.dim();
        let alg = module.algebra();
        let s = alg.summation();
        let gamma = rows[0].clone();
        let top = module.apply(s, &rows[r - 1]);
        // S^r gamma = sum_l c_l S^l gamma.
        let c = row_times(&top, &inv);
        let den = lcm_of_denominators(&c);
        let mut l: Vec<Poly> = c.iter().map(|ci| (&(-ci) * &Frac::from_poly(den.clone())).num().clone()).collect();
        l.push(den);
        let content = gcd_many(l.iter().filter(|p| !p.is_zero()));
        let content = if l[r].is_lc_negative() { -content } else { content };
        let l: Vec<Poly> = l.iter().map(|p| p.div_exact(&content).unwrap()).collect();

        let mut unit = alloc::vec![Frac::zero(); r];
        unit[0] = Frac::one();
        let a1 = if gamma == unit { unit.clone() } else { row_times(&unit, &inv) };

        let mut b = BTreeMap::new();
        let mut actions = BTreeMap::new();
        let mut poly_vars = BTreeMap::new();
        for j in alg.telescoping_vars() {
            let w = module.apply(j, &gamma);
            b.insert(j, row_times(&w, &inv));
            actions.insert(j, alg.action(j));
            poly_vars.insert(j, alg.poly_var(j));
        }

        let mut data = CyclicData {
            gamma,
            l,
            change_of_basis: rows,
            inverse: inv,
            a1,
            b,
            powers: Vec::new(),
            tables: BTreeMap::new(),
            actions,
            poly_vars,
        };
        data.powers = data.shift_powers(2 * r - 1);
        let mut tables = BTreeMap::new();
        for (&j, bj) in &data.b {
            let mut t = Vec::with_capacity(r);
            for i in 0..r {
                let mut row = alloc::vec![Frac::zero(); r];
                for (k, bk) in bj.iter().enumerate() {
                    if bk.is_zero() {
                        continue;
                    }
                    let sb = bk.shift(N, i as i64);
                    for (l, slot) in row.iter_mut().enumerate() {
                        let p = &data.powers[i + k][l];
                        if !p.is_zero() {
                            *slot = &*slot + &(&sb * p);
                        }
                    }
                }
                t.push(row);
            }
            tables.insert(j, t);
        }
        data.tables = tables;
        data
    }

    pub fn order(&self) -> usize {
        self.l.len() - 1
    }

    /// `S_n^r gamma = sum_l c_l S_n^l gamma`.
    fn companion(&self) -> Vec<Frac> {
        let r = self.order();
        let ar = Frac::from_poly(self.l[r].clone());
        (0..r).map(|i| &(-&Frac::from_poly(self.l[i].clone())) / &ar).collect()
    }

    /// `S_n` applied to an element given in cyclic coordinates.
    pub fn shift_in_cyclic(&self, u: &[Frac]) -> Vec<Frac> {
        let r = self.order();
        let comp = self.companion();
        let mut out = alloc::vec![Frac::zero(); r];
        for (l, ul) in u.iter().enumerate() {
            if ul.is_zero() {
                continue;
            }
            let s = ul.shift(N, 1);
            if l + 1 < r {
                out[l + 1] = &out[l + 1] + &s;
            } else {
                for (k, ck) in comp.iter().enumerate() {
                    out[k] = &out[k] + &(&s * ck);
                }
            }
        }
        out
    }

    fn shift_powers(&self, count: usize) -> Vec<Vec<Frac>> {
        let r = self.order();
        let mut out: Vec<Vec<Frac>> = Vec::with_capacity(count);
        for t in 0..count {
            if t < r {
                let mut e = alloc::vec![Frac::zero(); r];
                e[t] = Frac::one();
                out.push(e);
            } else {
                let next = self.shift_in_cyclic(&out[t - 1]);
                out.push(next);
            }
        }
        out
    }

    /// Cyclic coordinates of an element given in staircase coordinates.
    pub fn express_in_cyclic(&self, w: &[Frac]) -> Vec<Frac> {
        row_times(w, &self.inverse)
    }

    /// Staircase coordinates of an element given in cyclic coordinates.
    pub fn to_staircase(&self, u: &[Frac]) -> Vec<Frac> {
        row_times(u, &self.change_of_basis)
    }

    /// The adjoint of `L`.
    pub fn adjoint(&self) -> AdjointOperator {
        AdjointOperator::of_operator(&self.l)
    }

    fn sigma(&self, j: usize, f: &Frac) -> Frac {
        match self.actions[&j] {
            Action::Shift => f.shift(self.poly_vars[&j], 1),
            Action::Differential => f.clone(),
        }
    }

    /// `phi_j(R)`, so that `d_j (R gamma) = phi_j(R) gamma + Delta_n(Q_j(R) gamma)`.
    pub fn phi(&self, j: usize, r: &Frac) -> Frac {
        let u = self.sigma(j, r);
        let mut out = adjoint_apply(&self.b[&j], &u);
        if self.actions[&j] == Action::Differential {
            out = &out + &r.derivative(self.poly_vars[&j]);
        }
        out
    }

    /// `Q_j(R) = P_{B_j}(sigma_j(R), .)` in cyclic coordinates.
    pub fn cert_increment(&self, j: usize, r: &Frac) -> Vec<Frac> {
        lagrange_bilinear(&self.b[&j], &self.sigma(j, r), self.order())
    }

    /// `P_L(T, .)` in cyclic coordinates.
    pub fn lagrange_l(&self, t: &Frac) -> Vec<Frac> {
        let l: Vec<Frac> = self.l.iter().map(|p| Frac::from_poly(p.clone())).collect();
        lagrange_bilinear(&l, t, self.order())
    }

    /// `d_j` applied to an element given in cyclic coordinates.
    pub fn derive_in_cyclic(&self, j: usize, g: &[Frac]) -> Vec<Frac> {
        let r = self.order();
        let table = &self.tables[&j];
        let mut out = alloc::vec![Frac::zero(); r];
        for (i, gi) in g.iter().enumerate() {
            if gi.is_zero() {
                continue;
            }
            let s = self.sigma(j, gi);
            for (l, slot) in out.iter_mut().enumerate() {
                if !table[i][l].is_zero() {
                    *slot = &*slot + &(&s * &table[i][l]);
                }
            }
            if self.actions[&j] == Action::Differential {
                out[i] = &out[i] + &gi.derivative(self.poly_vars[&j]);
            }
        }
        out
    }

    pub fn action(&self, j: usize) -> Action {
        self.actions[&j]
    }

    pub fn poly_var(&self, j: usize) -> usize {
        self.poly_vars[&j]
    }
}

fn lcm_of_denominators(c: &[Frac]) -> Poly {
    let mut acc = Poly::one();
    for x in c {
        if !x.is_zero() {
            acc = lcm(&acc, x.den());
        }
    }
    acc
}
