//! Drives the engine for one subcommand and fills in a report.

use telesum_core::certificate::{CertificateDag, DagNode, NodeId};
use telesum_core::cyclic::CyclicData;
use telesum_core::error::Error;
use telesum_core::expr::{format_frac, format_opmono, format_operator};
use telesum_core::frac::Frac;
use telesum_core::gcd::lcm;
use telesum_core::ore::{OreAlgebra, QuotientModule};
use telesum_core::poly::Poly;
use telesum_core::reduction::{AdjointOperator, Reducer};
use telesum_core::telescoper::{verify, TelescopeResult, Telescoping};

use crate::problem::{format_mode, Options, ProblemFile};
use crate::report::ResultReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Telescope,
    Reduce,
    Certificate,
    CheckPoles,
}

impl Subcommand {
    pub fn name(self) -> &'static str {
        match self {
            Subcommand::Telescope => "telescope",
            Subcommand::Reduce => "reduce",
            Subcommand::Certificate => "certificate",
            Subcommand::CheckPoles => "check-poles",
        }
    }
}

/// One line of the node table: `id<TAB>kind<TAB>payload`.
pub fn node_line(dag: &CertificateDag, id: NodeId, alg: &OreAlgebra) -> String {
    let names = alg.poly_names();
    let (kind, payload) = match dag.node(id) {
        DagNode::Leaf(f) => ("leaf", format_frac(f, names)),
        DagNode::Sum(ids) => ("sum", ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")),
        DagNode::Scale(c, i) => ("scale", format!("{} {}", i, format_frac(c, names))),
        DagNode::ShiftN(k, i) => ("shift", format!("{} {}", i, k)),
        DagNode::ParamDerivative(v, i) => ("diff", format!("{} {}", i, names[*v])),
        DagNode::ParamShift(v, i) => ("pshift", format!("{} {}", i, names[*v])),
    };
    format!("{}\t{}\t{}", id, kind, payload)
}

fn module(problem: &ProblemFile) -> Result<QuotientModule, Error> {
    QuotientModule::new(problem.algebra.clone(), problem.generators.clone())
}

fn fill_telescopers(report: &mut ResultReport, m: &QuotientModule, res: &TelescopeResult, opts: &Options) {
    let alg = m.algebra();
    report.mode = Some(format_mode(opts.mode));
    report.complete = Some(res.complete);
    report.basis = m.staircase().iter().map(|s| format_opmono(*s, alg)).collect();
    report.cyclic_vector = res.cyclic.gamma.iter().map(|c| format_frac(c, alg.poly_names())).collect();
    report.telescopers = res.telescopers.iter().map(|t| format_operator(&t.operator, alg)).collect();
    if opts.verify {
        report.verification = res
            .telescopers
            .iter()
            .enumerate()
            .map(|(i, t)| (format!("T{}", i + 1), verify(m, &res.cyclic, &res.dag, t)))
            .collect();
    }
    report.counters = vec![
        ("monomials_visited".into(), res.stats.monomials_visited),
        ("canonical_forms".into(), res.stats.canonical_forms),
        ("dag_nodes".into(), res.stats.dag_nodes),
        ("telescopers".into(), res.telescopers.len() as u64),
    ];
}

fn fill_certificates(report: &mut ResultReport, alg: &OreAlgebra, res: &TelescopeResult, opts: &Options) {
    report.certificates = res.telescopers.iter().map(|t| t.certificate.coeffs.clone()).collect();
    let roots: Vec<NodeId> = report.certificates.iter().flatten().copied().collect();
    report.nodes = res.dag.reachable(&roots).into_iter().map(|id| node_line(&res.dag, id, alg)).collect();
    if opts.expand_certificate {
        report.expanded = res
            .telescopers
            .iter()
            .map(|t| res.dag.expand(&t.certificate).iter().map(|c| format_frac(c, alg.poly_names())).collect())
            .collect();
    }
}

fn set(points: &[i64]) -> String {
    let items: Vec<String> = points.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn fill_poles(report: &mut ResultReport, alg: &OreAlgebra, res: &TelescopeResult, opts: &Options) {
    let names = alg.poly_names();
    for (i, t) in res.telescopers.iter().enumerate() {
        let tag = format!("T{}", i + 1);
        let reports = res.dag.check_integer_poles(&t.certificate, opts.pole_range);
        let mut checked = Vec::new();
        let mut poles = Vec::new();
        for r in &reports {
            checked.push(r.point);
            match r.values() {
                Some(vals) => {
                    let vals: Vec<String> = vals.iter().map(|v| format_frac(v, names)).collect();
                    report.poles.push(format!("{} n={}: values {}", tag, r.point, vals.join("; ")));
                }
                None => {
                    poles.push(r.point);
                    let orders: Vec<String> = r.coeffs.iter().map(|c| c.0.min(0).to_string()).collect();
                    report.poles.push(format!("{} n={}: pole, valuations {}", tag, r.point, orders.join(" ")));
                }
            }
        }
        report.poles.push(if checked.is_empty() {
            format!("{}: no integer candidates", tag)
        } else if poles.is_empty() {
            format!("{}: no integer poles in {}", tag, set(&checked))
        } else {
            format!("{}: integer poles at {}", tag, set(&poles))
        });
    }
}

fn cleared_adjoint(coeffs: &[Frac]) -> AdjointOperator {
    let den = coeffs.iter().fold(Poly::one(), |acc, c| lcm(&acc, c.den()));
    let p = coeffs
        .iter()
        .map(|c| (c.num() * &den).div_exact(c.den()).expect("lcm is a multiple of every denominator"))
        .collect();
    AdjointOperator::new(p)
}

fn reduce(problem: &ProblemFile, opts: &Options, report: &mut ResultReport) -> Result<(), Error> {
    let f = problem
        .function
        .as_ref()
        .ok_or_else(|| Error::Semantic("reduce needs a [function] section".into()))?;
    let adj = match &problem.adjoint {
        Some(c) => {
            if c.iter().all(|x| x.is_zero()) {
                return Err(Error::Semantic("zero adjoint operator".into()));
            }
            cleared_adjoint(c)
        }
        None => CyclicData::find(&module(problem)?)?.adjoint(),
    };
    let names = problem.algebra.poly_names();
    let mut reducer = Reducer::new(adj.clone());
    let out = reducer.canonical_form(f);
    report.reduction = vec![
        ("adjoint".into(), adj.p.iter().map(|p| format_frac(&Frac::from_poly(p.clone()), names)).collect::<Vec<_>>().join("; ")),
        ("value".into(), format_frac(&out.value, names)),
        ("preimage".into(), format_frac(&out.preimage, names)),
    ];
    if opts.verify {
        report.verification = vec![("reduction".into(), f - &out.value == adj.apply(&out.preimage))];
    }
    let stats = reducer.stats();
    report.counters = vec![
        ("canonical_forms".into(), stats.canonical_forms),
        ("weak_polar_steps".into(), stats.weak_polar_steps),
        ("weak_poly_steps".into(), stats.weak_poly_steps),
    ];
    Ok(())
}

/// Runs `sub` on `problem` with the given effective options.
pub fn run(problem: &ProblemFile, sub: Subcommand, opts: &Options) -> Result<ResultReport, Error> {
    let mut report = ResultReport { subcommand: sub.name().into(), ..Default::default() };
    if sub == Subcommand::Reduce {
        reduce(problem, opts, &mut report)?;
        return Ok(report);
    }
    if problem.generators.is_empty() {
        return Err(Error::Semantic("no generators".into()));
    }
    let m = module(problem)?;
    let res = Telescoping::new(&m)?.run(opts.mode);
    fill_telescopers(&mut report, &m, &res, opts);
    match sub {
        Subcommand::Certificate => fill_certificates(&mut report, m.algebra(), &res, opts),
        Subcommand::CheckPoles => fill_poles(&mut report, m.algebra(), &res, opts),
        _ => {}
    }
    Ok(report)
}
