#![allow(dead_code)]
//! An undetermined coefficient Zeilberger solver written independently of
//! the engine, and a driver comparing both on hypergeometric sums.
//!
//! For a term F(n, k) the oracle looks for c_0..c_rho in Q(n) and a
//! certificate R = P(k)/D(k) with
//!     sum_i c_i F(n+i,k)/F(n,k) = R(k+1) F(n,k+1)/F(n,k) - R(k),
//! where D is the lcm of the denominators of the ratios F(n+i,k)/F(n,k) and
//! P has unknown coefficients up to a degree bound.

use telesum_core::expr::{format_operator, parse_operator, parse_rational};
use telesum_core::frac::Frac;
use telesum_core::gcd::lcm;
use telesum_core::ore::{Action, OpMono, OreAlgebra, QuotientModule, VariableSpec};
use telesum_core::poly::Poly;
use telesum_core::telescoper::{telescope, verify, Mode};

/// Hypergeometric sums with their expected telescoper order: term ratios
/// in `k` and in `n`.
pub const SUMS: [(&str, &str, &str, u32); 5] = [
    ("binomial", "(n - k)/(k + 1)", "(n + 1)/(n + 1 - k)", 1),
    ("binomial squared", "(n - k)^2/(k + 1)^2", "(n + 1)^2/(n + 1 - k)^2", 1),
    ("central Delannoy", "(n - k)*(n + k + 1)/(k + 1)^2", "(n + k + 1)/(n + 1 - k)", 2),
    ("Franel", "(n - k)^3/(k + 1)^3", "(n + 1)^3/(n + 1 - k)^3", 2),
    ("Apery", "(n - k)^2*(n + k + 1)^2/(k + 1)^4", "(n + k + 1)^2/(n + 1 - k)^2", 2),
];

const K: usize = 0;
const NV: usize = 1;

pub fn algebra() -> OreAlgebra {
    OreAlgebra::new(
        vec![
            VariableSpec { name: "k".into(), action: Action::Shift, summation: true },
            VariableSpec { name: "n".into(), action: Action::Shift, summation: false },
        ],
        vec![],
    )
    .unwrap()
}

/// Kernel of a matrix over Q(n), one basis vector per free column.
pub fn nullspace(mut rows: Vec<Vec<Frac>>, cols: usize) -> Vec<Vec<Frac>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Frac::zero(); cols];
        v[free] = Frac::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -&rows[i][free];
        }
        out.push(v);
    }
    out
}

/// Telescoper coefficients `c_0..c_rho`, normalized so that `c_rho = 1`.
pub fn zeilberger(uk: &Frac, un: &Frac, max_order: usize, max_deg: u32) -> Option<Vec<Frac>> {
    for rho in 1..=max_order {
        let mut ratios = vec![Frac::one()];
        for i in 0..rho {
            let next = &ratios[i] * &un.shift(NV, i as i64);
            ratios.push(next);
        }
        let den = ratios.iter().fold(Poly::one(), |acc, r| lcm(&acc, r.den()));
        let den = Frac::from_poly(den);
        for d in 0..=max_deg {
            let mut exprs: Vec<Frac> = ratios.clone();
            for j in 0..=d {
                let kj = Frac::var(K).pow(j as i32);
                let at = &kj / &den;
                let next = &(&at.shift(K, 1) * uk) - &at;
                exprs.push(-&next);
            }
            let common = exprs.iter().fold(Poly::one(), |acc, e| lcm(&acc, e.den()));
            let cleared: Vec<Vec<Poly>> = exprs
                .iter()
                .map(|e| {
                    let f = &Frac::from_poly(common.clone()) * e;
                    f.num().coeffs_in(K)
                })
                .collect();
            let height = cleared.iter().map(|c| c.len()).max().unwrap_or(0);
            let rows: Vec<Vec<Frac>> = (0..height)
                .map(|m| {
                    cleared
                        .iter()
                        .map(|c| c.get(m).map_or(Frac::zero(), |p| Frac::from_poly(p.clone())))
                        .collect()
                })
                .collect();
            for v in nullspace(rows, exprs.len()) {
                if !v[rho].is_zero() {
                    let inv = v[rho].inv();
                    return Some(v[..=rho].iter().map(|x| x * &inv).collect());
                }
            }
        }
    }
    None
}

pub fn generators(uk: &Frac, un: &Frac) -> Vec<String> {
    let alg = algebra();
    let names = alg.poly_names();
    let f = |p: &Poly| telesum_core::expr::format_poly(p, names);
    vec![
        format!("({})*Sk - ({})", f(uk.den()), f(uk.num())),
        format!("({})*Sn - ({})", f(un.den()), f(un.num())),
    ]
}

/// Runs the engine and the oracle on one sum; `Err` describes a mismatch.
pub fn check(uk: &str, un: &str, expected_order: u32) -> Result<(), String> {
    let alg = algebra();
    let uk = parse_rational(&alg, uk, 1, 0).unwrap();
    let un = parse_rational(&alg, un, 1, 0).unwrap();
    let oracle = zeilberger(&uk, &un, 3, 6).ok_or("oracle found no telescoper")?;
    let gens: Vec<_> =
        generators(&uk, &un).iter().map(|g| parse_operator(&alg, g, 1, 0).unwrap()).collect();
    let m = QuotientModule::new(alg.clone(), gens).map_err(|e| e.to_string())?;
    let res = telescope(&m, Mode::First).map_err(|e| e.to_string())?;
    let t = res.telescopers.first().ok_or("no telescoper")?;
    if !verify(&m, &res.cyclic, &res.dag, t) {
        return Err("certificate does not verify".into());
    }
    let (lead, lc) = t.operator.leading().unwrap();
    if lead.exp(1) != expected_order || oracle.len() as u32 != expected_order + 1 {
        return Err(format!("order mismatch: {}", format_operator(&t.operator, &alg)));
    }
    let inv = lc.inv();
    for (i, c) in oracle.iter().enumerate() {
        let mono = (0..i).fold(OpMono::ONE, |m, _| m.mul(OpMono::var(1)));
        let ours = t.operator.terms.get(&mono).map_or(Frac::zero(), |x| x * &inv);
        if &ours != c {
            return Err(format!("coefficient of Sn^{} differs", i));
        }
    }
    Ok(())
}
