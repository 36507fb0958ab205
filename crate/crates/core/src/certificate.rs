//! Certificates stored as shared expression graphs.
//!
//! Children are always created before their parents, so node ids form a
//! topological order and every traversal below is a plain loop over ids.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::frac::{primitive_n, Frac, UniPoly, N};
use crate::gcd::{gcd, lcm};
use crate::poly::Poly;
use crate::series::{laurent_expand, valuation, LaurentSeries, Point};
use crate::shift::integer_roots;

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DagNode {
    Leaf(Frac),
    Sum(Vec<NodeId>),
    Scale(Frac, NodeId),
    ShiftN(i64, NodeId),
    /// Derivative with respect to a polynomial variable.
    ParamDerivative(usize, NodeId),
    /// Substitution `v -> v + 1` of a polynomial variable.
    ParamShift(usize, NodeId),
}

/// `G = sum_i coeffs[i] S_n^i gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub coeffs: Vec<NodeId>,
}

/// Append-only node store; node 0 is the zero leaf.
#[derive(Clone, Debug)]
pub struct CertificateDag {
    nodes: Vec<DagNode>,
}

impl Default for CertificateDag {
    fn default() -> Self {
        CertificateDag::new()
    }
}

/// Pole-check outcome for one integer point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointReport {
    pub point: i64,
    /// Per coefficient: the valuation at the point and its leading coefficient.
    pub coeffs: Vec<(i64, Frac)>,
}

impl PointReport {
    pub fn has_pole(&self) -> bool {
        self.coeffs.iter().any(|c| c.0 < 0)
    }

    /// Values at the point, when there is no pole.
    pub fn values(&self) -> Option<Vec<Frac>> {
        if self.has_pole() {
            return None;
        }
        Some(self.coeffs.iter().map(|(v, c)| if *v == 0 { c.clone() } else { Frac::zero() }).collect())
    }
}

impl CertificateDag {
    pub const ZERO: NodeId = 0;

    pub fn new() -> CertificateDag {
        CertificateDag { nodes: alloc::vec![DagNode::Leaf(Frac::zero())] }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn node(&self, id: NodeId) -> &DagNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[DagNode] {
        &self.nodes
    }

    fn push(&mut self, n: DagNode) -> NodeId {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    pub fn zero_certificate(&self, r: usize) -> Certificate {
        Certificate { coeffs: alloc::vec![Self::ZERO; r] }
    }

    pub fn leaf(&mut self, f: Frac) -> NodeId {
        if f.is_zero() {
            return Self::ZERO;
        }
        self.push(DagNode::Leaf(f))
    }

    pub fn sum(&mut self, ids: Vec<NodeId>) -> NodeId {
        let ids: Vec<NodeId> = ids.into_iter().filter(|&i| i != Self::ZERO).collect();
        match ids.len() {
            0 => Self::ZERO,
            1 => ids[0],
            _ => self.push(DagNode::Sum(ids)),
        }
    }

    pub fn scale(&mut self, c: Frac, id: NodeId) -> NodeId {
        if c.is_zero() || id == Self::ZERO {
            return Self::ZERO;
        }
        if c.is_one() {
            return id;
        }
        self.push(DagNode::Scale(c, id))
    }

    pub fn shift_n(&mut self, k: i64, id: NodeId) -> NodeId {
        if k == 0 || id == Self::ZERO {
            return id;
        }
        self.push(DagNode::ShiftN(k, id))
    }

    pub fn param_derivative(&mut self, v: usize, id: NodeId) -> NodeId {
        if id == Self::ZERO {
            return id;
        }
        self.push(DagNode::ParamDerivative(v, id))
    }

    pub fn param_shift(&mut self, v: usize, id: NodeId) -> NodeId {
        if id == Self::ZERO {
            return id;
        }
        self.push(DagNode::ParamShift(v, id))
    }

    /// `sum_k c_k G_k` coordinate-wise.
    pub fn combine(&mut self, terms: &[(Frac, &Certificate)]) -> Certificate {
        let r = terms.first().map_or(0, |t| t.1.coeffs.len());
        let mut coeffs = Vec::with_capacity(r);
        for i in 0..r {
            let parts: Vec<NodeId> = terms.iter().map(|(c, g)| (c.clone(), g.coeffs[i])).collect::<Vec<_>>()
                .into_iter()
                .map(|(c, id)| self.scale(c, id))
                .collect();
            coeffs.push(self.sum(parts));
        }
        Certificate { coeffs }
    }

    fn children(&self, id: NodeId) -> Vec<NodeId> {
        match &self.nodes[id] {
            DagNode::Leaf(_) => Vec::new(),
            DagNode::Sum(v) => v.clone(),
            DagNode::Scale(_, c)
            | DagNode::ShiftN(_, c)
            | DagNode::ParamDerivative(_, c)
            | DagNode::ParamShift(_, c) => alloc::vec![*c],
        }
    }

    /// Nodes reachable from `roots`, in increasing id order.
    pub fn reachable(&self, roots: &[NodeId]) -> Vec<NodeId> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<NodeId> = roots.to_vec();
        while let Some(id) = stack.pop() {
            if seen.insert(id) {
                stack.extend(self.children(id));
            }
        }
        seen.into_iter().collect()
    }

    /// Bottom-up evaluation of `f` over the nodes reachable from `roots`.
    fn fold<T: Clone>(&self, roots: &[NodeId], mut f: impl FnMut(&DagNode, &dyn Fn(NodeId) -> T) -> T) -> BTreeMap<NodeId, T> {
        let mut memo: BTreeMap<NodeId, T> = BTreeMap::new();
        for id in self.reachable(roots) {
            let v = {
                let get = |c: NodeId| memo[&c].clone();
                f(&self.nodes[id], &get)
            };
            memo.insert(id, v);
        }
        memo
    }

    /// Fully normalized coefficients.
    pub fn expand(&self, cert: &Certificate) -> Vec<Frac> {
        let memo = self.fold(&cert.coeffs, |node, get| match node {
            DagNode::Leaf(f) => f.clone(),
            DagNode::Sum(ids) => ids.iter().fold(Frac::zero(), |acc, &i| &acc + &get(i)),
            DagNode::Scale(c, i) => c * &get(*i),
            DagNode::ShiftN(k, i) => get(*i).shift(N, *k),
            DagNode::ParamDerivative(v, i) => get(*i).derivative(*v),
            DagNode::ParamShift(v, i) => get(*i).shift(*v, 1),
        });
        cert.coeffs.iter().map(|id| memo[id].clone()).collect()
    }

    /// Coefficients with the variables of `point` replaced by integers,
    /// leaving `n` and the other variables symbolic.  Returns `None` when
    /// some node has a pole at the point, or when a derivative is taken
    /// in a substituted variable.
    pub fn expand_at(&self, cert: &Certificate, point: &[(usize, BigInt)]) -> Option<Vec<Frac>> {
        let slot = |v: usize| point.iter().position(|p| p.0 == v);
        let zero = alloc::vec![0i64; point.len()];
        let mut need: BTreeSet<(NodeId, Vec<i64>)> = cert.coeffs.iter().map(|&id| (id, zero.clone())).collect();
        let mut plan = Vec::new();
        while let Some((id, off)) = need.pop_last() {
            match &self.nodes[id] {
                DagNode::Leaf(_) => {}
                DagNode::Sum(ids) => need.extend(ids.iter().map(|&c| (c, off.clone()))),
                DagNode::Scale(_, c) | DagNode::ShiftN(_, c) => {
                    need.insert((*c, off.clone()));
                }
                DagNode::ParamDerivative(v, c) => {
                    if slot(*v).is_some() {
                        return None;
                    }
                    need.insert((*c, off.clone()));
                }
                DagNode::ParamShift(v, c) => {
                    let mut o = off.clone();
                    if let Some(s) = slot(*v) {
                        o[s] += 1;
                    }
                    need.insert((*c, o));
                }
            }
            plan.push((id, off));
        }
        let at = |f: &Frac, off: &[i64]| -> Option<Frac> {
            let mut g = f.clone();
            for ((v, c), k) in point.iter().zip(off) {
                g = g.eval(*v, &(c + k))?;
            }
            Some(g)
        };
        let mut memo: BTreeMap<(NodeId, Vec<i64>), Frac> = BTreeMap::new();
        for (id, off) in plan.into_iter().rev() {
            let v = match &self.nodes[id] {
                DagNode::Leaf(f) => at(f, &off)?,
                DagNode::Sum(ids) => ids.iter().fold(Frac::zero(), |acc, &c| &acc + &memo[&(c, off.clone())]),
                DagNode::Scale(c, x) => &at(c, &off)? * &memo[&(*x, off.clone())],
                DagNode::ShiftN(k, x) => memo[&(*x, off.clone())].shift(N, *k),
                DagNode::ParamDerivative(v, x) => memo[&(*x, off.clone())].derivative(*v),
                DagNode::ParamShift(v, x) => match slot(*v) {
                    Some(s) => {
                        let mut o = off.clone();
                        o[s] += 1;
                        memo[&(*x, o)].clone()
                    }
                    None => memo[&(*x, off.clone())].shift(*v, 1),
                },
            };
            memo.insert((id, off), v);
        }
        Some(cert.coeffs.iter().map(|&id| memo[&(id, zero.clone())].clone()).collect())
    }

    /// A polynomial in `n` divisible by the denominator of every coefficient.
    pub fn denominator_multiple(&self, cert: &Certificate) -> UniPoly {
        let memo = self.fold(&cert.coeffs, |node, get| match node {
            DagNode::Leaf(f) => n_part(f.den()),
            DagNode::Sum(ids) => ids.iter().fold(Poly::one(), |acc, &i| lcm(&acc, &get(i))),
            DagNode::Scale(c, i) => {
                // Factors of the scalar's numerator cancel poles of the child.
                let d = n_part(&(c.den() * &get(*i)));
                let g = n_part(&gcd(&d, &n_part(c.num())));
                d.div_exact(&g).unwrap()
            }
            DagNode::ShiftN(k, i) => get(*i).shift_i(N, *k),
            DagNode::ParamDerivative(v, i) => {
                let d = get(*i);
                if d.contains_var(*v) {
                    &d * &d
                } else {
                    d
                }
            }
            DagNode::ParamShift(v, i) => get(*i).shift_i(*v, 1),
        });
        let mut acc = Poly::one();
        for id in &cert.coeffs {
            acc = lcm(&acc, &memo[id]);
        }
        Frac::from_poly(acc).monic_n()
    }

    /// Integer roots of the denominator multiple, increasing.
    pub fn candidate_poles(&self, cert: &Certificate) -> Vec<i64> {
        let d = self.denominator_multiple(cert);
        let mut roots: Vec<i64> =
            integer_roots(d.num()).into_iter().filter_map(|r| i64::try_from(r).ok()).collect();
        roots.sort_unstable();
        roots
    }

    /// Laurent expansions of the given nodes at `point` up to `order`.
    pub fn series_at(&self, roots: &[NodeId], point: i64, order: i64) -> Vec<LaurentSeries> {
        // Top-down: the truncation each (node, point) must reach.
        let mut need: BTreeMap<(NodeId, i64), i64> = BTreeMap::new();
        for &r in roots {
            let e = need.entry((r, point)).or_insert(order);
            *e = (*e).max(order);
        }
        let mut plan: Vec<((NodeId, i64), i64)> = Vec::new();
        while let Some(((id, pt), ord)) = need.pop_last() {
            plan.push(((id, pt), ord));
            let mut req = |key: (NodeId, i64), o: i64| {
                let e = need.entry(key).or_insert(o);
                *e = (*e).max(o);
            };
            match &self.nodes[id] {
                DagNode::Leaf(_) => {}
                DagNode::Sum(ids) => {
                    for &c in ids {
                        req((c, pt), ord);
                    }
                }
                DagNode::Scale(c, x) => {
                    let v = valuation(c, Point::Integer(pt));
                    req((*x, pt), ord - v);
                }
                DagNode::ShiftN(k, x) => req((*x, pt + k), ord),
                DagNode::ParamDerivative(_, x) | DagNode::ParamShift(_, x) => req((*x, pt), ord),
            }
        }
        // Bottom-up in increasing id order.
        let mut memo: BTreeMap<(NodeId, i64), LaurentSeries> = BTreeMap::new();
        for ((id, pt), ord) in plan.into_iter().rev() {
            let p = Point::Integer(pt);
            let s = match &self.nodes[id] {
                DagNode::Leaf(f) => laurent_expand(f, p, ord),
                DagNode::Sum(ids) => {
                    let mut acc = LaurentSeries::zero(p, ord);
                    for c in ids {
                        acc = acc.add(&memo[&(*c, pt)]);
                    }
                    acc
                }
                DagNode::Scale(c, x) => {
                    let xs = &memo[&(*x, pt)];
                    let cs = laurent_expand(c, p, ord - xs.valuation());
                    cs.mul(xs)
                }
                DagNode::ShiftN(k, x) => {
                    let xs = &memo[&(*x, pt + k)];
                    LaurentSeries { point: p, ..xs.clone() }
                }
                DagNode::ParamDerivative(v, x) => memo[&(*x, pt)].map_coeffs(|c| c.derivative(*v)),
                DagNode::ParamShift(v, x) => memo[&(*x, pt)].map_coeffs(|c| c.shift(*v, 1)),
            };
            memo.insert((id, pt), s);
        }
        roots.iter().map(|r| memo[&(*r, point)].clone()).collect()
    }

    /// Expands every coefficient at each candidate pole inside `range`
    /// (all candidates when `range` is `None`).
    pub fn check_integer_poles(&self, cert: &Certificate, range: Option<(i64, i64)>) -> Vec<PointReport> {
        let mut out = Vec::new();
        for pt in self.candidate_poles(cert) {
            if let Some((a, b)) = range {
                if pt < a || pt > b {
                    continue;
                }
            }
            out.push(self.report_at(cert, pt));
        }
        out
    }

    /// Leading behavior of every coefficient at `pt`; terms up to the
    /// constant one decide both the pole order and the value.
    pub fn report_at(&self, cert: &Certificate, pt: i64) -> PointReport {
        let series = self.series_at(&cert.coeffs, pt, 1);
        let coeffs = series
            .iter()
            .map(|s| match s.leading() {
                Some(c) => (s.valuation(), c.clone()),
                None => (s.truncation, Frac::zero()),
            })
            .collect();
        PointReport { point: pt, coeffs }
    }
}

fn n_part(p: &Poly) -> Poly {
    if p.degree(N) == 0 {
        Poly::one()
    } else {
        primitive_n(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaf_pole_detection() {
        let mut dag = CertificateDag::new();
        let f = Frac::new(Poly::one(), &Poly::var(N) - &Poly::int(2));
        let id = dag.leaf(f.clone());
        let cert = Certificate { coeffs: alloc::vec![id] };
        assert_eq!(dag.denominator_multiple(&cert), Frac::from_poly(&Poly::var(N) - &Poly::int(2)));
        let rep = dag.check_integer_poles(&cert, None);
        assert_eq!(rep.len(), 1);
        assert_eq!(rep[0].point, 2);
        assert_eq!(rep[0].coeffs[0], (-1, Frac::one()));
        let z = dag.zero_certificate(2);
        assert_eq!(dag.denominator_multiple(&z), Frac::one());
        assert_eq!(dag.expand(&z), alloc::vec![Frac::zero(), Frac::zero()]);
    }

    #[test]
    fn cancelling_poles_are_not_reported() {
        // 1/n - 1/(n+1) shifted back: (n+1 - n)... build 1/n - S^{-1}(1/(n+1)) = 0.
        let mut dag = CertificateDag::new();
        let n = Poly::var(N);
        let a = dag.leaf(Frac::new(Poly::one(), n.clone()));
        let b = dag.leaf(Frac::new(Poly::int(-1), &n + &Poly::int(1)));
        let sb = dag.shift_n(-1, b);
        let x = dag.leaf(Frac::new(Poly::var(1), Poly::one()));
        let s = dag.sum(alloc::vec![a, sb, x]);
        let cert = Certificate { coeffs: alloc::vec![s] };
        assert_eq!(dag.expand(&cert)[0], Frac::var(1));
        let rep = dag.report_at(&cert, 0);
        assert!(!rep.has_pole());
        assert_eq!(rep.values().unwrap()[0], Frac::var(1));
    }

    #[test]
    fn combine_is_linear() {
        let mut dag = CertificateDag::new();
        let a = dag.leaf(Frac::var(N));
        let b = dag.leaf(Frac::var(1));
        let g1 = Certificate { coeffs: alloc::vec![a, b] };
        let g2 = Certificate { coeffs: alloc::vec![b, a] };
        let c = dag.combine(&[(Frac::int(2), &g1), (Frac::int(-1), &g2)]);
        let e = dag.expand(&c);
        assert_eq!(e[0], &(&Frac::int(2) * &Frac::var(N)) - &Frac::var(1));
    }
}
