//! Problem files.
//!
//! A problem file is a sequence of `[section]` headers, each followed by
//! lines of content.  `#` starts a comment.  Recognised sections:
//!
//! ```text
//! [parameters]   names separated by whitespace or commas
//! [variables]    one per line: <name> shift|diff [summation]
//! [generators]   one operator expression per line
//! [options]      key = value lines (mode, verify, expand-certificate, pole-range)
//! [adjoint]      reduce only: p_0, p_1, ... one per line, for sum_i p_i S^-i
//! [function]     reduce only: one rational function
//! ```

use std::fmt::Write as _;

use telesum_core::error::Error;
use telesum_core::expr::{format_frac, format_operator, parse_operator, parse_rational};
use telesum_core::frac::Frac;
use telesum_core::ore::{Action, OreAlgebra, OreOperator, VariableSpec};
use telesum_core::telescoper::Mode;

/// Degree bound used when `bounded` is given without one.
pub const DEFAULT_BOUND: u32 = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub mode: Mode,
    pub verify: bool,
    pub expand_certificate: bool,
    pub pole_range: Option<(i64, i64)>,
}

impl Default for Options {
    fn default() -> Self {
        Options { mode: Mode::Full, verify: false, expand_certificate: false, pole_range: None }
    }
}

#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub algebra: OreAlgebra,
    pub generators: Vec<OreOperator>,
    pub options: Options,
    pub adjoint: Option<Vec<Frac>>,
    pub function: Option<Frac>,
    /// Warnings collected while reading the file.
    pub warnings: Vec<String>,
}

impl ProblemFile {
    pub fn parameters(&self) -> &[String] {
        self.algebra.params()
    }

    pub fn variables(&self) -> &[VariableSpec] {
        self.algebra.vars()
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Parses `full`, `first`, `bounded` or `bounded=<d>`.  The flag is true
/// when the default bound was substituted.
pub fn parse_mode(s: &str) -> Option<(Mode, bool)> {
    match s.trim() {
        "full" => Some((Mode::Full, false)),
        "first" => Some((Mode::First, false)),
        "bounded" => Some((Mode::Bounded(DEFAULT_BOUND), true)),
        other => {
            let d = other.strip_prefix("bounded=")?.trim().parse().ok()?;
            Some((Mode::Bounded(d), false))
        }
    }
}

pub fn format_mode(m: Mode) -> String {
    match m {
        Mode::Full => "full".into(),
        Mode::First => "first".into(),
        Mode::Bounded(d) => format!("bounded={}", d),
    }
}

/// Parses `a..b` with `a <= b`.
pub fn parse_range(s: &str) -> Option<(i64, i64)> {
    let (a, b) = s.trim().split_once("..")?;
    let (a, b) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
    (a <= b).then_some((a, b))
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.trim() {
        "true" | "yes" | "on" => Some(true),
        "false" | "no" | "off" => Some(false),
        _ => None,
    }
}

/// One content line: its 1-based number, the column where `text` starts and
/// the text with comments stripped.
struct Line<'a> {
    number: usize,
    col0: usize,
    text: &'a str,
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, Error> {
    let mut sections: Vec<(String, usize, Vec<Line>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let body = raw.split('#').next().unwrap();
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = body.len() - body.trim_start().len();
        if let Some(rest) = trimmed.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                return Err(parse_err(number, col0 + 1, "unterminated section header"));
            };
            let name = name.trim().to_string();
            if !["parameters", "variables", "generators", "options", "adjoint", "function"]
                .contains(&name.as_str())
            {
                return Err(parse_err(number, col0 + 1, format!("unknown section `{}`", name)));
            }
            if sections.iter().any(|s| s.0 == name) {
                return Err(parse_err(number, col0 + 1, format!("duplicate section `{}`", name)));
            }
            sections.push((name, number, Vec::new()));
            continue;
        }
        match sections.last_mut() {
            Some(s) => s.2.push(Line { number, col0, text: trimmed }),
            None => return Err(parse_err(number, col0 + 1, "content before the first section header")),
        }
    }
    let section = |name: &str| sections.iter().find(|s| s.0 == name).map(|s| &s.2[..]).unwrap_or(&[]);

    let mut params = Vec::new();
    for l in section("parameters") {
        params.extend(l.text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(String::from));
    }

    let mut vars = Vec::new();
    for l in section("variables") {
        let words: Vec<&str> = l.text.split_whitespace().collect();
        if words.len() < 2 || words.len() > 3 {
            return Err(parse_err(l.number, l.col0 + 1, "expected `<name> shift|diff [summation]`"));
        }
        let action = match words[1] {
            "shift" => Action::Shift,
            "diff" => Action::Differential,
            other => return Err(parse_err(l.number, l.col0 + 1, format!("unknown action `{}`", other))),
        };
        let summation = match words.get(2) {
            None => false,
            Some(&"summation") => true,
            Some(other) => return Err(parse_err(l.number, l.col0 + 1, format!("unexpected `{}`", other))),
        };
        vars.push(VariableSpec { name: words[0].to_string(), action, summation });
    }
    let algebra = OreAlgebra::new(vars, params)?;

    let mut generators = Vec::new();
    for l in section("generators") {
        let op = parse_operator(&algebra, l.text, l.number, l.col0)?;
        if op.is_zero() {
            return Err(Error::Semantic(format!("generator on line {} is zero", l.number)));
        }
        generators.push(op);
    }

    let mut options = Options::default();
    let mut warnings = Vec::new();
    for l in section("options") {
        let Some((key, value)) = l.text.split_once('=') else {
            return Err(parse_err(l.number, l.col0 + 1, "expected `key = value`"));
        };
        let bad = || parse_err(l.number, l.col0 + 1, format!("invalid value for `{}`", key.trim()));
        match key.trim() {
            "mode" => {
                let (mode, defaulted) = parse_mode(value).ok_or_else(bad)?;
                if defaulted {
                    warnings.push(format!("bounded mode without a bound; using {}", DEFAULT_BOUND));
                }
                options.mode = mode;
            }
            "verify" => options.verify = parse_bool(value).ok_or_else(bad)?,
            "expand-certificate" => options.expand_certificate = parse_bool(value).ok_or_else(bad)?,
            "pole-range" => options.pole_range = Some(parse_range(value).ok_or_else(bad)?),
            other => return Err(parse_err(l.number, l.col0 + 1, format!("unknown option `{}`", other))),
        }
    }

    let adjoint = match section("adjoint") {
        [] => None,
        lines => Some(
            lines
                .iter()
                .map(|l| parse_rational(&algebra, l.text, l.number, l.col0))
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let function = match section("function") {
        [] => None,
        [l] => Some(parse_rational(&algebra, l.text, l.number, l.col0)?),
        [_, l, ..] => return Err(parse_err(l.number, l.col0 + 1, "`function` holds a single expression")),
    };

    if generators.is_empty() && adjoint.is_none() {
        return Err(Error::Semantic("no generators".into()));
    }
    Ok(ProblemFile { algebra, generators, options, adjoint, function, warnings })
}

/// Canonical text of a problem file; parsing it gives back the same problem.
pub fn format_problem(p: &ProblemFile) -> String {
    let mut out = String::new();
    let names = p.algebra.poly_names();
    if !p.parameters().is_empty() {
        let _ = writeln!(out, "[parameters]\n{}\n", p.parameters().join(" "));
    }
    out.push_str("[variables]\n");
    for v in p.variables() {
        let action = match v.action {
            Action::Shift => "shift",
            Action::Differential => "diff",
        };
        let _ = writeln!(out, "{} {}{}", v.name, action, if v.summation { " summation" } else { "" });
    }
    if !p.generators.is_empty() {
        out.push_str("\n[generators]\n");
        for g in &p.generators {
            let _ = writeln!(out, "{}", format_operator(g, &p.algebra));
        }
    }
    let o = &p.options;
    let _ = write!(
        out,
        "\n[options]\nmode = {}\nverify = {}\nexpand-certificate = {}\n",
        format_mode(o.mode),
        o.verify,
        o.expand_certificate
    );
    if let Some((a, b)) = o.pole_range {
        let _ = writeln!(out, "pole-range = {}..{}", a, b);
    }
    if let Some(adj) = &p.adjoint {
        out.push_str("\n[adjoint]\n");
        for c in adj {
            let _ = writeln!(out, "{}", format_frac(c, names));
        }
    }
    if let Some(f) = &p.function {
        let _ = writeln!(out, "\n[function]\n{}", format_frac(f, names));
    }
    out
}
