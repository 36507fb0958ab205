//! The telescoping loop: grevlex exploration of monomials in the
//! non-summation operators, reduced forms, relation detection and
//! certificate bookkeeping.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::certificate::{Certificate, CertificateDag, NodeId};
use crate::cyclic::{adjoint_apply, lagrange_bilinear, CyclicData};
use crate::error::Error;
use crate::frac::{Frac, N};
use crate::gcd::{gcd_many, lcm};
use crate::ore::{Action, OpMono, OreOperator, QuotientModule};
use crate::poly::Poly;
use crate::reduction::{Atom, Decomp, Reducer};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Explore until the Gröbner basis of the telescoping ideal is complete.
    Full,
    /// Stop at the first telescoper.
    First,
    /// Explore monomials of total degree at most the bound.
    Bounded(u32),
}

#[derive(Clone, Debug)]
pub struct Telescoper {
    /// Coefficients in `K`, cleared of denominators and content.
    pub operator: OreOperator,
    pub certificate: Certificate,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TelescopeStats {
    pub monomials_visited: u64,
    pub canonical_forms: u64,
    pub dag_nodes: u64,
}

#[derive(Clone, Debug)]
pub struct TelescopeResult {
    pub telescopers: Vec<Telescoper>,
    /// Monomials whose reduced forms are independent.
    pub quotient_basis: Vec<OpMono>,
    /// `false` when the exploration was cut short by the mode.
    pub complete: bool,
    pub dag: CertificateDag,
    pub cyclic: CyclicData,
    pub stats: TelescopeStats,
}

struct Row {
    lead: Atom,
    value: Decomp,
    combo: BTreeMap<OpMono, Frac>,
}

struct Visited {
    reduced: Decomp,
    reduced_frac: Frac,
    cert: Certificate,
}

/// The telescoping engine for one quotient module.
pub struct Telescoping<'a> {
    module: &'a QuotientModule,
    cyclic: CyclicData,
    reducer: Reducer,
    dag: CertificateDag,
    l_coeffs: Vec<Frac>,
    stats: TelescopeStats,
}

impl<'a> Telescoping<'a> {
    pub fn new(module: &'a QuotientModule) -> Result<Telescoping<'a>, Error> {
        let cyclic = CyclicData::find(module)?;
        Ok(Telescoping::with_cyclic(module, cyclic))
    }

    pub fn with_cyclic(module: &'a QuotientModule, cyclic: CyclicData) -> Telescoping<'a> {
        let reducer = Reducer::new(cyclic.adjoint());
        let l_coeffs = cyclic.l.iter().map(|p| Frac::from_poly(p.clone())).collect();
        Telescoping { module, cyclic, reducer, dag: CertificateDag::new(), l_coeffs, stats: TelescopeStats::default() }
    }

    pub fn cyclic(&self) -> &CyclicData {
        &self.cyclic
    }

    pub fn reducer(&self) -> &Reducer {
        &self.reducer
    }

    fn r(&self) -> usize {
        self.cyclic.order()
    }

    /// Nodes for `-P_L(T, .)`.
    fn minus_lagrange_l(&mut self, t: &Frac) -> Vec<NodeId> {
        let r = self.r();
        let mut out = alloc::vec![CertificateDag::ZERO; r];
        if t.is_zero() {
            return out;
        }
        let leaf = self.dag.leaf(t.clone());
        for (i, slot) in out.iter_mut().enumerate() {
            let mut parts = Vec::new();
            for l in i + 1..=r {
                let a = &self.l_coeffs[l];
                if a.is_zero() {
                    continue;
                }
                let k = i as i64 - l as i64;
                let shifted = self.dag.shift_n(k, leaf);
                parts.push(self.dag.scale(-&a.shift(N, k), shifted));
            }
            *slot = self.dag.sum(parts);
        }
        out
    }

    /// Nodes for `P_M(u, .)` where `u` is already a node.
    fn lagrange_nodes(&mut self, m: &[Frac], u: NodeId) -> Vec<NodeId> {
        let r = self.r();
        let mut out = alloc::vec![CertificateDag::ZERO; r];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut parts = Vec::new();
            for (j, mj) in m.iter().enumerate().skip(i + 1) {
                if mj.is_zero() {
                    continue;
                }
                let k = i as i64 - j as i64;
                let shifted = self.dag.shift_n(k, u);
                parts.push(self.dag.scale(mj.shift(N, k), shifted));
            }
            *slot = self.dag.sum(parts);
        }
        out
    }

    fn sum_coords(&mut self, a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
        a.iter().zip(b).map(|(&x, &y)| self.dag.sum(alloc::vec![x, y])).collect()
    }

    fn reduce(&mut self, f: &Frac) -> (Decomp, Frac, Frac) {
        let (x, t) = self.reducer.reduce(f);
        let xf = self.reducer.to_frac(&x);
        (x, xf, t)
    }

    fn seed(&mut self) -> Visited {
        let a1 = self.cyclic.a1.clone();
        let input = adjoint_apply(&a1, &Frac::one());
        let (reduced, reduced_frac, t) = self.reduce(&input);
        let r = self.r();
        let p = lagrange_bilinear(&a1, &Frac::one(), r);
        let base: Vec<NodeId> = p.into_iter().map(|c| self.dag.leaf(c)).collect();
        let corr = self.minus_lagrange_l(&t);
        let coeffs = self.sum_coords(&base, &corr);
        Visited { reduced, reduced_frac, cert: Certificate { coeffs } }
    }

    fn step(&mut self, parent: &Visited, j: usize) -> Visited {
        let input = self.cyclic.phi(j, &parent.reduced_frac);
        let (reduced, reduced_frac, t) = self.reduce(&input);
        let r = self.r();
        let action = self.cyclic.action(j);
        let pv = self.cyclic.poly_var(j);
        // d_j applied to the parent certificate in cyclic coordinates.
        let table = self.cyclic.tables[&j].clone();
        let sigma_g: Vec<NodeId> = parent
            .cert
            .coeffs
            .iter()
            .map(|&g| match action {
                Action::Shift => self.dag.param_shift(pv, g),
                Action::Differential => g,
            })
            .collect();
        let mut coords = Vec::with_capacity(r);
        for l in 0..r {
            let mut parts = Vec::new();
            for i in 0..r {
                parts.push(self.dag.scale(table[i][l].clone(), sigma_g[i]));
            }
            if action == Action::Differential {
                parts.push(self.dag.param_derivative(pv, parent.cert.coeffs[l]));
            }
            coords.push(self.dag.sum(parts));
        }
        // Q_j(R_parent).
        let leaf = self.dag.leaf(parent.reduced_frac.clone());
        let u = match action {
            Action::Shift => self.dag.param_shift(pv, leaf),
            Action::Differential => leaf,
        };
        let b = self.cyclic.b[&j].clone();
        let q = self.lagrange_nodes(&b, u);
        let coords = self.sum_coords(&coords, &q);
        let corr = self.minus_lagrange_l(&t);
        let coeffs = self.sum_coords(&coords, &corr);
        Visited { reduced, reduced_frac, cert: Certificate { coeffs } }
    }

    /// Runs the exploration.
    pub fn run(mut self, mode: Mode) -> TelescopeResult {
        let vars = self.module.algebra().telescoping_vars();
        let mut queue: BTreeMap<OpMono, Option<(OpMono, usize)>> = BTreeMap::new();
        queue.insert(OpMono::ONE, None);
        let mut visited: BTreeMap<OpMono, Visited> = BTreeMap::new();
        let mut rows: Vec<Row> = Vec::new();
        let mut leading: Vec<OpMono> = Vec::new();
        let mut telescopers = Vec::new();
        let mut basis = Vec::new();
        let mut complete = true;
        let mut seen: BTreeSet<OpMono> = BTreeSet::new();
        seen.insert(OpMono::ONE);

        while let Some((alpha, origin)) = queue.pop_first() {
            if leading.iter().any(|l| l.divides(alpha)) {
                continue;
            }
            if let Mode::Bounded(d) = mode {
                if alpha.degree() > d {
                    complete = false;
                    continue;
                }
            }
            self.stats.monomials_visited += 1;
            let v = match origin {
                None => self.seed(),
                Some((beta, j)) => {
                    let parent = visited.remove(&beta).expect("parent visited");
                    let v = self.step(&parent, j);
                    visited.insert(beta, parent);
                    v
                }
            };
            // Relation search against the echelon of earlier reduced forms.
            let mut x = v.reduced.clone();
            let mut combo: BTreeMap<OpMono, Frac> = BTreeMap::new();
            combo.insert(alpha, Frac::one());
            for row in &rows {
                let c = x.coeff(row.lead);
                if c.is_zero() {
                    continue;
                }
                x.add_scaled(&-&c, &row.value);
                for (m, a) in &row.combo {
                    let e = combo.entry(*m).or_default();
                    *e = &*e - &(&c * a);
                }
            }
            combo.retain(|_, c| !c.is_zero());
            match x.leading() {
                None => {
                    let t = self.emit(&combo, &visited, &v);
                    telescopers.push(t);
                    leading.push(alpha);
                    if mode == Mode::First {
                        complete = false;
                        break;
                    }
                }
                Some((lead, lc)) => {
                    let inv = lc.inv();
                    let value = x.scaled(&inv);
                    let combo = combo.into_iter().map(|(m, c)| (m, &c * &inv)).collect();
                    rows.push(Row { lead, value, combo });
                    rows.sort_by(|a, b| b.lead.cmp(&a.lead));
                    basis.push(alpha);
                    visited.insert(alpha, v);
                    for &j in &vars {
                        let child = alpha.mul(OpMono::var(j));
                        if seen.insert(child) {
                            queue.insert(child, Some((alpha, j)));
                        }
                    }
                }
            }
        }
        if !queue.is_empty() {
            complete = false;
        }
        self.stats.canonical_forms = self.reducer.stats().canonical_forms;
        self.stats.dag_nodes = self.dag.len() as u64;
        TelescopeResult {
            telescopers,
            quotient_basis: basis,
            complete,
            dag: self.dag,
            cyclic: self.cyclic,
            stats: self.stats,
        }
    }

    fn emit(&mut self, combo: &BTreeMap<OpMono, Frac>, visited: &BTreeMap<OpMono, Visited>, current: &Visited) -> Telescoper {
        let (alpha, _) = combo.iter().next_back().expect("nonempty relation");
        let mut den = Poly::one();
        for c in combo.values() {
            den = lcm(&den, c.den());
        }
        let mut nums: BTreeMap<OpMono, Poly> = BTreeMap::new();
        for (m, c) in combo {
            let p = (c * &Frac::from_poly(den.clone())).num().clone();
            nums.insert(*m, p);
        }
        let mut content = gcd_many(nums.values());
        if nums[alpha].is_lc_negative() {
            content = -content;
        }
        let mut operator = OreOperator::zero();
        let mut terms: Vec<(Frac, &Certificate)> = Vec::new();
        for (m, p) in &nums {
            let c = Frac::from_poly(p.div_exact(&content).unwrap());
            operator.add_term(*m, &c);
            let cert = if m == alpha { &current.cert } else { &visited[m].cert };
            terms.push((c, cert));
        }
        let certificate = self.dag.combine(&terms);
        Telescoper { operator, certificate }
    }
}

/// Computes telescopers of the module's summand with respect to the
/// summation variable.
pub fn telescope(module: &QuotientModule, mode: Mode) -> Result<TelescopeResult, Error> {
    Ok(Telescoping::new(module)?.run(mode))
}

/// Checks `T(1) - Delta_n(G) = 0` in the module.
pub fn verify(module: &QuotientModule, cyclic: &CyclicData, dag: &CertificateDag, t: &Telescoper) -> bool {
    let lhs = module.normal_form(&t.operator);
    let g = dag.expand(&t.certificate);
    let gs = cyclic.to_staircase(&g);
    let shifted = module.apply(module.algebra().summation(), &gs);
    lhs.iter().zip(shifted.iter().zip(&gs)).all(|(a, (s, g))| *a == s - g)
}

/// The identity checked by [`verify`], specialised at an integer point for
/// some of the polynomial variables other than `n`.  Never expands the full
/// certificate, so it stays cheap when the expanded coefficients are huge.
/// `None` means the point hits a pole or a derivative variable.
pub fn verify_at(
    module: &QuotientModule,
    cyclic: &CyclicData,
    dag: &CertificateDag,
    t: &Telescoper,
    point: &[(usize, BigInt)],
) -> Option<bool> {
    let at = |f: &Frac| point.iter().try_fold(f.clone(), |g, (v, c)| g.eval(*v, c));
    let g = dag.expand_at(&t.certificate, point)?;
    let gs: Vec<Frac> = cyclic.to_staircase(&g).iter().map(at).collect::<Option<_>>()?;
    let shifted: Vec<Frac> =
        module.apply(module.algebra().summation(), &gs).iter().map(at).collect::<Option<_>>()?;
    let lhs: Vec<Frac> = module.normal_form(&t.operator).iter().map(at).collect::<Option<_>>()?;
    Some(lhs.iter().zip(shifted.iter().zip(&gs)).all(|(a, (s, g))| *a == s - g))
}
