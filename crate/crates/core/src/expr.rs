//! Textual rational expressions and operators: parsing and printing.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := ("+" | "-") unary | power
//! power  := atom ("^" "-"? integer)?
//! atom   := integer | identifier | "(" expr ")"
//! ```
//!
//! Identifiers name variables and parameters, or operator symbols `S<var>`
//! and `D<var>`.  Products are taken in the operator algebra, so a
//! coefficient written to the right of an operator symbol is commuted
//! through it.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::Error;
use crate::frac::Frac;
use crate::mono::Mono;
use crate::ore::{Action, OpMono, OreAlgebra, OreOperator};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(s: &str, line: usize, col0: usize) -> Result<Lexer, Error> {
    let mut toks = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            toks.push((Tok::Int(text.parse().unwrap()), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if "+-*/^()".contains(c) {
            toks.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(Error::Parse { line, column: col0 + i + 1, message: format!("unexpected character `{}`", c) });
        }
    }
    Ok(Lexer { toks })
}

#[derive(Clone, Debug)]
enum Value {
    Scalar(Frac),
    Op(OreOperator),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    alg: &'a OreAlgebra,
    line: usize,
    col0: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, at: usize, msg: String) -> Result<T, Error> {
        Err(Error::Parse { line: self.line, column: self.col0 + at + 1, message: msg })
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value, Error> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                let rhs = self.term()?;
                acc = add(acc, rhs, false);
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = add(acc, rhs, true);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value, Error> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = self.mul(acc, rhs);
            } else if self.eat('/') {
                let at = self.here();
                let rhs = self.unary()?;
                match rhs {
                    Value::Scalar(d) if !d.is_zero() => {
                        acc = self.mul(acc, Value::Scalar(d.inv()));
                    }
                    Value::Scalar(_) => return self.err(at, "division by zero".into()),
                    Value::Op(_) => return self.err(at, "division by an operator".into()),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Value, Error> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(neg(v));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value, Error> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let at = self.here();
        let e = match self.peek() {
            Some(Tok::Int(e)) => {
                let e = i32::try_from(e.clone()).ok();
                self.pos += 1;
                match e {
                    Some(e) => e,
                    None => return self.err(at, "exponent too large".into()),
                }
            }
            _ => return self.err(at, "expected an integer exponent".into()),
        };
        let e = if negative { -e } else { e };
        match base {
            Value::Scalar(f) => {
                if e < 0 && f.is_zero() {
                    return self.err(at, "zero raised to a negative power".into());
                }
                Ok(Value::Scalar(f.pow(e)))
            }
            Value::Op(op) => {
                if e < 0 {
                    return self.err(at, "negative power of an operator".into());
                }
                let mut acc = OreOperator::monomial(OpMono::ONE, Frac::one());
                for _ in 0..e {
                    acc = self.alg.mul(&acc, &op);
                }
                Ok(Value::Op(acc))
            }
        }
    }

    fn atom(&mut self) -> Result<Value, Error> {
        let at = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Value::Scalar(Frac::from_bigint(v)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.ident(&name, at)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return self.err(self.here(), "expected `)`".into());
                }
                Ok(v)
            }
            Some(t) => self.err(at, format!("unexpected token {:?}", t)),
            None => self.err(at, "unexpected end of expression".into()),
        }
    }

    fn ident(&self, name: &str, at: usize) -> Result<Value, Error> {
        if let Some(v) = self.alg.poly_names().iter().position(|n| n == name) {
            return Ok(Value::Scalar(Frac::var(v)));
        }
        let (head, rest) = name.split_at(1);
        if head == "S" || head == "D" {
            if let Some(i) = self.alg.vars().iter().position(|v| v.name == rest) {
                let want = if head == "S" { Action::Shift } else { Action::Differential };
                if self.alg.action(i) != want {
                    return Err(Error::Semantic(format!(
                        "`{}` does not match the action declared for `{}`",
                        name, rest
                    )));
                }
                return Ok(Value::Op(OreOperator::monomial(OpMono::var(i), Frac::one())));
            }
        }
        Err(Error::Semantic(format!("unknown name `{}` (column {})", name, self.col0 + at + 1)))
    }

    fn mul(&self, a: Value, b: Value) -> Value {
        match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x * &y),
            (Value::Scalar(x), Value::Op(o)) => Value::Op(o.scale(&x)),
            (Value::Op(o), Value::Scalar(y)) => {
                Value::Op(self.alg.mul(&o, &OreOperator::monomial(OpMono::ONE, y)))
            }
            (Value::Op(o), Value::Op(p)) => Value::Op(self.alg.mul(&o, &p)),
        }
    }
}

fn as_op(v: Value) -> OreOperator {
    match v {
        Value::Scalar(f) => OreOperator::monomial(OpMono::ONE, f),
        Value::Op(o) => o,
    }
}

fn add(a: Value, b: Value, negate: bool) -> Value {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(if negate { &x - &y } else { &x + &y }),
        (a, b) => {
            let (a, b) = (as_op(a), as_op(b));
            Value::Op(if negate { a.sub(&b) } else { a.add(&b) })
        }
    }
}

fn neg(v: Value) -> Value {
    match v {
        Value::Scalar(x) => Value::Scalar(-&x),
        Value::Op(o) => Value::Op(o.scale(&Frac::int(-1))),
    }
}

fn parse_value(alg: &OreAlgebra, s: &str, line: usize, col0: usize) -> Result<Value, Error> {
    let lx = lex(s, line, col0)?;
    let mut p = Parser { toks: lx.toks, pos: 0, alg, line, col0, end: s.chars().count() };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err(p.here(), "trailing input".into());
    }
    Ok(v)
}

/// Parses a rational expression in the variables and parameters of `alg`.
/// `line` and `col0` locate the text for error messages.
pub fn parse_rational(alg: &OreAlgebra, s: &str, line: usize, col0: usize) -> Result<Frac, Error> {
    match parse_value(alg, s, line, col0)? {
        Value::Scalar(f) => Ok(f),
        Value::Op(_) => Err(Error::Semantic("operator symbol in a rational expression".into())),
    }
}

/// Parses an operator expression.
pub fn parse_operator(alg: &OreAlgebra, s: &str, line: usize, col0: usize) -> Result<OreOperator, Error> {
    Ok(as_op(parse_value(alg, s, line, col0)?))
}

// ----- printing -------------------------------------------------------------

fn mono_str(m: Mono, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (v, name) in names.iter().enumerate() {
        let e = m.exp(v);
        if e == 1 {
            parts.push(name.clone());
        } else if e > 1 {
            parts.push(format!("{}^{}", name, e));
        }
    }
    parts.join("*")
}

/// Prints a polynomial with the given variable names.
pub fn format_poly(p: &Poly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.sign() == num_bigint::Sign::Minus;
        let a = if neg { -c } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let ms = mono_str(*m, names);
        if ms.is_empty() {
            out.push_str(&a.to_string());
        } else if a == BigInt::from(1) {
            out.push_str(&ms);
        } else {
            out.push_str(&format!("{}*{}", a, ms));
        }
    }
    out
}

fn wrap(s: String, p: &Poly) -> String {
    if p.len() > 1 {
        format!("({})", s)
    } else {
        s
    }
}

/// Prints a rational function; the output parses back to the same value.
pub fn format_frac(f: &Frac, names: &[String]) -> String {
    if f.den().is_one() {
        return format_poly(f.num(), names);
    }
    let num = wrap(format_poly(f.num(), names), f.num());
    let den = format_poly(f.den(), names);
    let den = if den.contains('*') || den.contains(' ') || den.starts_with('-') {
        format!("({})", den)
    } else {
        den
    };
    format!("{}/{}", num, den)
}

pub fn format_opmono(m: OpMono, alg: &OreAlgebra) -> String {
    let mut parts = Vec::new();
    for (i, v) in alg.vars().iter().enumerate() {
        let e = m.exp(i);
        if e == 0 {
            continue;
        }
        let sym = match v.action {
            Action::Shift => format!("S{}", v.name),
            Action::Differential => format!("D{}", v.name),
        };
        parts.push(if e == 1 { sym } else { format!("{}^{}", sym, e) });
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Prints an operator as a signed sum of `coeff*MONO` terms in decreasing
/// grevlex order.
pub fn format_operator(op: &OreOperator, alg: &OreAlgebra) -> String {
    if op.is_zero() {
        return "0".into();
    }
    let names = alg.poly_names();
    let mut out = String::new();
    for (i, (m, c)) in op.terms.iter().rev().enumerate() {
        let negative = c.num().len() == 1 && c.num().leading_coeff().sign() == num_bigint::Sign::Minus;
        let c = if negative { -c } else { c.clone() };
        let cs = format_frac(&c, names);
        let simple = c.num().len() == 1 && c.den().is_one();
        let body = if *m == OpMono::ONE {
            if simple || i == 0 {
                cs
            } else {
                format!("({})", cs)
            }
        } else {
            let ms = format_opmono(*m, alg);
            if c.is_one() {
                ms
            } else if simple {
                format!("{}*{}", cs, ms)
            } else {
                format!("({})*{}", cs, ms)
            }
        };
        match (i, negative) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::VariableSpec;

    fn alg() -> OreAlgebra {
        OreAlgebra::new(
            alloc::vec![
                VariableSpec { name: "x".into(), action: Action::Differential, summation: false },
                VariableSpec { name: "n".into(), action: Action::Shift, summation: true },
            ],
            alloc::vec!["a".into()],
        )
        .unwrap()
    }

    #[test]
    fn rational_round_trip() {
        let a = alg();
        let f = parse_rational(&a, "(n^2 - a)/(2*x*(n+1)) - 3/4", 1, 0).unwrap();
        let s = format_frac(&f, a.poly_names());
        assert_eq!(parse_rational(&a, &s, 1, 0).unwrap(), f);
        let g = parse_rational(&a, "x^-2 * x^3", 1, 0).unwrap();
        assert_eq!(g, Frac::var(a.poly_var(0)));
    }

    #[test]
    fn operators() {
        let a = alg();
        let op = parse_operator(&a, "Sn - 1", 1, 0).unwrap();
        assert_eq!(op.terms.len(), 2);
        let s = format_operator(&op, &a);
        assert_eq!(parse_operator(&a, &s, 1, 0).unwrap(), op);
        // D_x * x = x D_x + 1
        let p = parse_operator(&a, "Dx*x", 1, 0).unwrap();
        let q = parse_operator(&a, "x*Dx + 1", 1, 0).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn errors() {
        let a = alg();
        assert!(matches!(parse_operator(&a, "Sn*Sx", 1, 0), Err(Error::Semantic(_))));
        assert!(matches!(parse_operator(&a, "Dn", 1, 0), Err(Error::Semantic(_))));
        assert!(matches!(parse_operator(&a, "n + y", 1, 0), Err(Error::Semantic(_))));
        match parse_operator(&a, "n + * 2", 3, 4) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 9)),
            other => panic!("{:?}", other),
        }
        assert!(matches!(parse_operator(&a, "(n + 1", 1, 0), Err(Error::Parse { .. })));
    }
}
