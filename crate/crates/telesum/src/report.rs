//! The textual result report.
//!
//! Reports use the same `[section]` layout as problem files.  Everything in
//! a report is a function of the input alone, so repeated runs produce
//! byte-identical output.

use std::fmt::Write as _;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResultReport {
    pub subcommand: String,
    pub mode: Option<String>,
    /// Staircase monomials of the quotient module.
    pub basis: Vec<String>,
    /// Staircase coordinates of the cyclic vector.
    pub cyclic_vector: Vec<String>,
    pub telescopers: Vec<String>,
    pub complete: Option<bool>,
    /// Node ids of the certificate coefficients, one list per telescoper.
    pub certificates: Vec<Vec<usize>>,
    /// Node table lines `id<TAB>kind<TAB>payload`.
    pub nodes: Vec<String>,
    /// Expanded certificate coefficients, one list per telescoper.
    pub expanded: Vec<Vec<String>>,
    pub poles: Vec<String>,
    pub verification: Vec<(String, bool)>,
    pub reduction: Vec<(String, String)>,
    pub counters: Vec<(String, u64)>,
}

impl ResultReport {
    /// True when every requested verification succeeded.
    pub fn verified(&self) -> bool {
        self.verification.iter().all(|v| v.1)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[run]\nsubcommand = {}", self.subcommand);
        if let Some(m) = &self.mode {
            let _ = writeln!(out, "mode = {}", m);
        }
        if let Some(c) = self.complete {
            let _ = writeln!(out, "complete = {}", c);
        }
        let mut list = |title: &str, lines: &[String]| {
            if !lines.is_empty() {
                let _ = writeln!(out, "\n[{}]", title);
                for l in lines {
                    let _ = writeln!(out, "{}", l);
                }
            }
        };
        list("basis", &self.basis);
        list("cyclic-vector", &self.cyclic_vector);
        let numbered: Vec<String> =
            self.telescopers.iter().enumerate().map(|(i, t)| format!("T{} = {}", i + 1, t)).collect();
        list("telescopers", &numbered);
        let certs: Vec<String> = self
            .certificates
            .iter()
            .enumerate()
            .map(|(i, ids)| {
                let ids: Vec<String> = ids.iter().map(|id| id.to_string()).collect();
                format!("T{} = {}", i + 1, ids.join(" "))
            })
            .collect();
        list("certificates", &certs);
        list("nodes", &self.nodes);
        let expanded: Vec<String> = self
            .expanded
            .iter()
            .enumerate()
            .flat_map(|(i, cs)| cs.iter().enumerate().map(move |(k, c)| format!("T{}[{}] = {}", i + 1, k, c)))
            .collect();
        list("expanded-certificates", &expanded);
        list("poles", &self.poles);
        let verification: Vec<String> = self
            .verification
            .iter()
            .map(|(name, ok)| format!("{} = {}", name, if *ok { "ok" } else { "FAILED" }))
            .collect();
        list("verification", &verification);
        let reduction: Vec<String> = self.reduction.iter().map(|(k, v)| format!("{} = {}", k, v)).collect();
        list("reduction", &reduction);
        let counters: Vec<String> = self.counters.iter().map(|(k, v)| format!("{} = {}", k, v)).collect();
        list("counters", &counters);
        out
    }
}
