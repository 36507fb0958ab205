//! Ore algebras of mixed shift/differential operators and quotient modules.
//!
//! Operators are finite sums `sum c_a d^a` with rational-function
//! coefficients written to the left.  The commutation rules are
//! `S c = sigma(c) S` for a shift and `D c = c D + c'` for a derivation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;

use crate::error::Error;
use crate::frac::{Frac, RationalFunction, N};
use crate::mono::{Mono, MAX_VARS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Shift,
    Differential,
}

/// One variable of the problem together with the operator acting on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableSpec {
    pub name: String,
    pub action: Action,
    pub summation: bool,
}

/// Exponent vector of an operator monomial, ordered by grevlex.
///
/// Field `i` is the exponent of the `i`-th declared Ore variable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct OpMono(pub Mono);

impl OpMono {
    pub const ONE: OpMono = OpMono(Mono::ONE);

    pub fn var(i: usize) -> OpMono {
        OpMono(Mono::var(i, 1))
    }

    pub fn exp(self, i: usize) -> u32 {
        self.0.exp(i)
    }

    pub fn degree(self) -> u32 {
        self.0.total_degree()
    }

    pub fn mul(self, other: OpMono) -> OpMono {
        OpMono(self.0.mul(other.0))
    }

    pub fn divides(self, other: OpMono) -> bool {
        self.0.divides(other.0)
    }

    pub fn div_of(self, other: OpMono) -> Option<OpMono> {
        self.0.div_of(other.0).map(OpMono)
    }
}

impl Ord for OpMono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for v in (0..MAX_VARS).rev() {
            let (a, b) = (self.exp(v), other.exp(v));
            if a != b {
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for OpMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Variables of the problem and the layout of polynomial variables.
///
/// Polynomial variable 0 is the summation variable; the other Ore variables
/// follow in declaration order and pure parameters come last.
#[derive(Clone, Debug)]
pub struct OreAlgebra {
    vars: Vec<VariableSpec>,
    params: Vec<String>,
    poly_var: Vec<usize>,
    names: Vec<String>,
    summation: usize,
}

impl OreAlgebra {
    pub fn new(vars: Vec<VariableSpec>, params: Vec<String>) -> Result<OreAlgebra, Error> {
        let sums: Vec<usize> = vars.iter().enumerate().filter(|(_, v)| v.summation).map(|(i, _)| i).collect();
        if sums.len() != 1 {
            return Err(Error::Semantic(alloc::format!(
                "exactly one summation variable is required, found {}",
                sums.len()
            )));
        }
        let summation = sums[0];
        if vars[summation].action != Action::Shift {
            return Err(Error::Semantic("the summation variable must carry a shift".into()));
        }
        if vars.len() + params.len() > MAX_VARS {
            return Err(Error::Semantic(alloc::format!(
                "at most {} variables and parameters are supported",
                MAX_VARS
            )));
        }
        let mut names: Vec<String> = Vec::new();
        let mut poly_var = alloc::vec![0; vars.len()];
        names.push(vars[summation].name.clone());
        for (i, v) in vars.iter().enumerate() {
            if i != summation {
                poly_var[i] = names.len();
                names.push(v.name.clone());
            }
        }
        names.extend(params.iter().cloned());
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Semantic(alloc::format!("duplicate name `{}`", a)));
            }
        }
        Ok(OreAlgebra { vars, params, poly_var, names, summation })
    }

    pub fn vars(&self) -> &[VariableSpec] {
        &self.vars
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn summation(&self) -> usize {
        self.summation
    }

    /// Polynomial variable index carrying Ore variable `i`.
    pub fn poly_var(&self, i: usize) -> usize {
        self.poly_var[i]
    }

    /// Names of polynomial variables, indexed by polynomial variable.
    pub fn poly_names(&self) -> &[String] {
        &self.names
    }

    /// Ore variables other than the summation variable, in declaration order.
    pub fn telescoping_vars(&self) -> Vec<usize> {
        (0..self.vars.len()).filter(|&i| i != self.summation).collect()
    }

    pub fn action(&self, i: usize) -> Action {
        self.vars[i].action
    }

    /// `d_i^k c` written as `sum c_t d_i^(k - t)`; returns `(t, c_t)` pairs.
    fn commute_var(&self, i: usize, k: u32, c: &Frac) -> Vec<(u32, Frac)> {
        let pv = self.poly_var[i];
        match self.vars[i].action {
            Action::Shift => alloc::vec![(0, c.shift(pv, k as i64))],
            Action::Differential => {
                let mut out = Vec::new();
                let mut deriv = c.clone();
                let mut binom = BigInt::from(1);
                for t in 0..=k {
                    if deriv.is_zero() {
                        break;
                    }
                    out.push((t, deriv.scale_int(&binom)));
                    binom = binom * BigInt::from(k - t) / BigInt::from(t + 1);
                    deriv = deriv.derivative(pv);
                }
                out
            }
        }
    }

    /// `d^m c` as an operator.
    pub fn mono_times_coeff(&self, m: OpMono, c: &Frac) -> OreOperator {
        let mut terms: Vec<(OpMono, Frac)> = alloc::vec![(OpMono::ONE, c.clone())];
        for i in 0..self.vars.len() {
            let k = m.exp(i);
            if k == 0 {
                continue;
            }
            let mut next = Vec::new();
            for (mono, coeff) in &terms {
                for (t, ct) in self.commute_var(i, k, coeff) {
                    let e = mono.exp(i) + k - t;
                    next.push((OpMono(mono.0.with_exp(i, e)), ct));
                }
            }
            terms = next;
        }
        let mut op = OreOperator::zero();
        for (mono, c) in terms {
            op.add_term(mono, &c);
        }
        op
    }

    pub fn mul(&self, a: &OreOperator, b: &OreOperator) -> OreOperator {
        let mut out = OreOperator::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let commuted = self.mono_times_coeff(*ma, cb);
                for (m, c) in &commuted.terms {
                    out.add_term(m.mul(*mb), &(ca * c));
                }
            }
        }
        out
    }

    /// Applies `sigma_i` (shift) or the identity (derivation) to `c`.
    pub fn sigma(&self, i: usize, c: &Frac) -> Frac {
        match self.vars[i].action {
            Action::Shift => c.shift(self.poly_var[i], 1),
            Action::Differential => c.clone(),
        }
    }

    /// Applies `delta_i`: zero for a shift, the derivative for a derivation.
    pub fn delta(&self, i: usize, c: &Frac) -> Frac {
        match self.vars[i].action {
            Action::Shift => Frac::zero(),
            Action::Differential => c.derivative(self.poly_var[i]),
        }
    }
}

/// A finite sum of operator monomials with rational coefficients on the left.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OreOperator {
    pub terms: BTreeMap<OpMono, RationalFunction>,
}

impl OreOperator {
    pub fn zero() -> OreOperator {
        OreOperator { terms: BTreeMap::new() }
    }

    pub fn monomial(m: OpMono, c: Frac) -> OreOperator {
        let mut op = OreOperator::zero();
        op.add_term(m, &c);
        op
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: OpMono, c: &Frac) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                let s = &*slot + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add(&self, other: &OreOperator) -> OreOperator {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, other: &OreOperator) -> OreOperator {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, &-c);
        }
        out
    }

    /// Left multiplication by a coefficient.
    pub fn scale(&self, c: &Frac) -> OreOperator {
        if c.is_zero() {
            return OreOperator::zero();
        }
        OreOperator { terms: self.terms.iter().map(|(m, a)| (*m, c * a)).collect() }
    }

    pub fn leading(&self) -> Option<(OpMono, &Frac)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }
}

/// The module `A / I` for a left ideal given by a Gröbner basis.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    alg: OreAlgebra,
    gens: Vec<OreOperator>,
    leading: Vec<OpMono>,
    staircase: Vec<OpMono>,
    index: BTreeMap<OpMono, usize>,
    /// `action[i][k]` holds the coordinates of `d_i e_k`.
    action: Vec<Vec<Vec<Frac>>>,
}

impl QuotientModule {
    /// Builds the quotient, treating `gens` as a Gröbner basis for grevlex.
    pub fn new(alg: OreAlgebra, gens: Vec<OreOperator>) -> Result<QuotientModule, Error> {
        if gens.iter().any(|g| g.is_zero()) {
            return Err(Error::Semantic("a generator is zero".into()));
        }
        let leading: Vec<OpMono> = gens.iter().map(|g| g.leading().unwrap().0).collect();
        let nv = alg.num_vars();
        let mut bounds = alloc::vec![0u32; nv];
        for (i, b) in bounds.iter_mut().enumerate() {
            let pure = leading
                .iter()
                .filter(|m| (0..nv).all(|j| j == i || m.exp(j) == 0) && m.exp(i) > 0)
                .map(|m| m.exp(i))
                .min();
            match pure {
                Some(e) => *b = e,
                None => {
                    return Err(Error::NotDFinite(alloc::format!(
                        "no generator has a pure power of the operator for `{}` as leading monomial",
                        alg.vars()[i].name
                    )))
                }
            }
        }
        let mut staircase = Vec::new();
        let mut exps = alloc::vec![0u32; nv];
        loop {
            let m = OpMono(Mono::from_exps(&exps));
            if !leading.iter().any(|l| l.divides(m)) {
                staircase.push(m);
            }
            let mut i = 0;
            loop {
                if i == nv {
                    break;
                }
                exps[i] += 1;
                if exps[i] < bounds[i] {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
            if i == nv {
                break;
            }
        }
        staircase.sort();
        let index = staircase.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut q = QuotientModule { alg, gens, leading, staircase, index, action: Vec::new() };
        let mut action = Vec::with_capacity(nv);
        for i in 0..nv {
            let mut rows = Vec::with_capacity(q.staircase.len());
            for k in 0..q.staircase.len() {
                let m = q.staircase[k].mul(OpMono::var(i));
                rows.push(q.normal_form(&OreOperator::monomial(m, Frac::one())));
            }
            action.push(rows);
        }
        q.action = action;
        Ok(q)
    }

    pub fn algebra(&self) -> &OreAlgebra {
        &self.alg
    }

    pub fn generators(&self) -> &[OreOperator] {
        &self.gens
    }

    pub fn leading_monomials(&self) -> &[OpMono] {
        &self.leading
    }

    pub fn staircase(&self) -> &[OpMono] {
        &self.staircase
    }

    pub fn dim(&self) -> usize {
        self.staircase.len()
    }

    pub fn action_matrix(&self, i: usize) -> &[Vec<Frac>] {
        &self.action[i]
    }

    /// Coordinates of `op * 1` on the staircase basis.
    pub fn normal_form(&self, op: &OreOperator) -> Vec<Frac> {
        let mut work = op.clone();
        let mut coords = alloc::vec![Frac::zero(); self.staircase.len()];
        while let Some((m, c)) = work.terms.pop_last() {
            if let Some(&k) = self.index.get(&m) {
                coords[k] = &coords[k] + &c;
                continue;
            }
            let g = self
                .leading
                .iter()
                .position(|l| l.divides(m))
                .expect("monomial outside the staircase must be reducible");
            let beta = self.leading[g].div_of(m).unwrap();
            let red = self.alg.mul(&OreOperator::monomial(beta, Frac::one()), &self.gens[g]);
            let lc = red.terms.get(&m).expect("leading monomial of the reducer").clone();
            let factor = &c / &lc;
            for (rm, rc) in &red.terms {
                if *rm != m {
                    work.add_term(*rm, &-&(&factor * rc));
                }
            }
        }
        coords
    }

    /// `d_i` applied to the element with coordinates `v`.
    pub fn apply(&self, i: usize, v: &[Frac]) -> Vec<Frac> {
        let mut out = alloc::vec![Frac::zero(); v.len()];
        for (k, vk) in v.iter().enumerate() {
            if vk.is_zero() {
                continue;
            }
            let s = self.alg.sigma(i, vk);
            for (l, slot) in out.iter_mut().enumerate() {
                let a = &self.action[i][k][l];
                if !a.is_zero() {
                    *slot = &*slot + &(&s * a);
                }
            }
            let d = self.alg.delta(i, vk);
            if !d.is_zero() {
                out[k] = &out[k] + &d;
            }
        }
        out
    }

    /// Checks that the summation shift acts invertibly.
    pub fn check_shift_invertible(&self) -> Result<(), Error> {
        let m = &self.action[self.alg.summation()];
        if crate::linalg::rank(m) < m.len() {
            return Err(Error::SingularShiftMatrix(
                "the summation shift does not act invertibly on the quotient".into(),
            ));
        }
        Ok(())
    }
}

/// The summation variable is always polynomial variable 0.
pub const SUMMATION_POLY_VAR: usize = N;
