//! Text format for inequality systems.
//!
//! ```text
//! rates: R1, R2
//! template: Q; U0|Q; V0|Q
//! R1 <= I(U0;Y|Q,V0) - I(U0;Z|Q)     # tag
//! R1 + R2 <= I(U0,V0;Y|Q) - 1/2*H(Z)
//! Rd1 = R11 + R12
//! 0 <= H(A) - H(A|B)
//! ```
//!
//! Terms are rate variables, `H(A,B|C)`, `I(A;B|C)` and rational constants,
//! each with an optional `p/q` coefficient. Names may carry trailing primes.
//! A trailing `# ...` on an inequality line becomes its tag; lines that
//! start with `#` are comments.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::dist::Template;
use crate::error::{Error, Result};
use crate::info::{mutual_info_expr, InfoExpr};
use crate::poly::{IneqSystem, LinIneq, RateVar};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rational),
    Op(&'static str),
}

struct Lexer<'a> {
    src: &'a [u8],
    line: usize,
    toks: Vec<(Tok, usize)>,
}

impl<'a> Lexer<'a> {
    fn err(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: col + 1,
            msg: msg.into(),
        }
    }

    fn run(mut self) -> Result<Vec<(Tok, usize)>> {
        let s = self.src;
        let mut i = 0;
        while i < s.len() {
            let c = s[i] as char;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let st = i;
                while i < s.len() && (s[i].is_ascii_alphanumeric() || s[i] == b'_') {
                    i += 1;
                }
                while i < s.len() && s[i] == b'\'' {
                    i += 1;
                }
                let name = std::str::from_utf8(&s[st..i]).unwrap().to_string();
                self.toks.push((Tok::Ident(name), st));
            } else if c.is_ascii_digit() || c == '.' {
                let st = i;
                while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
                    i += 1;
                }
                let text = std::str::from_utf8(&s[st..i]).unwrap();
                let v = rational::parse(text)
                    .map_err(|_| self.err(st, format!("bad number `{text}`")))?;
                self.toks.push((Tok::Num(v), st));
            } else {
                let two = if i + 1 < s.len() {
                    &s[i..i + 2]
                } else {
                    &s[i..i + 1]
                };
                let (op, len): (&'static str, usize) = match two {
                    b"<=" => ("<=", 2),
                    b">=" => (">=", 2),
                    b"==" => ("=", 2),
                    _ => match c {
                        '=' => ("=", 1),
                        '+' => ("+", 1),
                        '-' => ("-", 1),
                        '*' => ("*", 1),
                        '/' => ("/", 1),
                        '(' => ("(", 1),
                        ')' => (")", 1),
                        ',' => (",", 1),
                        ';' => (";", 1),
                        '|' => ("|", 1),
                        _ => return Err(self.err(i, format!("unexpected character `{c}`"))),
                    },
                };
                self.toks.push((Tok::Op(op), i));
                i += len;
            }
        }
        Ok(self.toks)
    }
}

/// Linear form over rate variables plus an information expression.
#[derive(Default)]
struct Side {
    rates: BTreeMap<RateVar, Rational>,
    order: Vec<RateVar>,
    info: InfoExpr,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser {
    fn err_at(&self, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: col + 1,
            msg: msg.into(),
        }
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Op(o)) if *o == op) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, op: &str) -> Result<()> {
        if self.eat_op(op) {
            Ok(())
        } else {
            Err(self.err_at(self.col(), format!("expected `{op}`")))
        }
    }

    fn number(&mut self) -> Result<Option<Rational>> {
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return Ok(None);
        };
        self.pos += 1;
        if self.eat_op("/") {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Num(d)) if !d.is_zero() => {
                    self.pos += 1;
                    return Ok(Some(n / d));
                }
                _ => return Err(self.err_at(col, "expected a nonzero denominator")),
            }
        }
        Ok(Some(n))
    }

    fn var_list(&mut self) -> Result<(Vec<String>, usize)> {
        let start = self.col();
        let mut out: Vec<String> = Vec::new();
        loop {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Ident(n)) => {
                    if out.contains(&n) {
                        return Err(self.err_at(col, format!("variable {n} repeated")));
                    }
                    self.pos += 1;
                    out.push(n);
                }
                _ => return Err(self.err_at(col, "expected a variable name")),
            }
            if !self.eat_op(",") {
                break;
            }
        }
        Ok((out, start))
    }

    fn info_call(&mut self, which: &str) -> Result<InfoExpr> {
        self.expect_op("(")?;
        let (a, _) = self.var_list()?;
        let e = if which == "I" {
            self.expect_op(";")?;
            let (b, bcol) = self.var_list()?;
            let (c, ccol) = if self.eat_op("|") {
                self.var_list()?
            } else {
                (vec![], 0)
            };
            if let Some(v) = b.iter().find(|v| a.contains(v)) {
                return Err(self.err_at(bcol, format!("variable {v} appears in both arguments")));
            }
            if let Some(v) = c.iter().find(|v| a.contains(v) || b.contains(v)) {
                return Err(self.err_at(
                    ccol,
                    format!("variable {v} appears in an argument and the condition"),
                ));
            }
            mutual_info_expr(&a, &b, &c)?
        } else {
            let (c, ccol) = if self.eat_op("|") {
                self.var_list()?
            } else {
                (vec![], 0)
            };
            if let Some(v) = c.iter().find(|v| a.contains(v)) {
                return Err(self.err_at(ccol, format!("variable {v} appears on both sides of `|`")));
            }
            InfoExpr::cond_h(&a, &c)
        };
        self.expect_op(")")?;
        Ok(e)
    }

    fn side(&mut self) -> Result<Side> {
        let mut side = Side::default();
        let mut first = true;
        loop {
            let mut sign = Rational::one();
            if self.eat_op("-") {
                sign = -sign;
            } else if !self.eat_op("+") && !first {
                break;
            }
            first = false;
            let col = self.col();
            let coef = self.number()?;
            let had_coef = coef.is_some();
            let k = sign * coef.unwrap_or_else(Rational::one);
            let star = had_coef && self.eat_op("*");
            match self.peek().cloned() {
                Some(Tok::Ident(name))
                    if (name == "H" || name == "I")
                        && matches!(self.toks.get(self.pos + 1), Some((Tok::Op("("), _))) =>
                {
                    self.pos += 1;
                    let e = self.info_call(&name)?;
                    side.info = side.info.add(&e.scale(&k));
                }
                Some(Tok::Ident(name)) => {
                    self.pos += 1;
                    if !side.order.contains(&name) {
                        side.order.push(name.clone());
                    }
                    *side.rates.entry(name).or_insert_with(Rational::zero) += k;
                }
                _ if had_coef && !star => side.info.add_constant(&k),
                _ => return Err(self.err_at(col, "expected a term")),
            }
        }
        Ok(side)
    }
}

fn tokens(text: &str, line: usize) -> Result<Vec<(Tok, usize)>> {
    Lexer {
        src: text.as_bytes(),
        line,
        toks: Vec::new(),
    }
    .run()
}

/// Parses a standalone information expression such as `I(X;Y|Z) - H(Z)`.
pub fn parse_info_expr(text: &str) -> Result<InfoExpr> {
    let mut p = Parser {
        toks: tokens(text, 1)?,
        pos: 0,
        line: 1,
        end_col: text.len(),
    };
    let side = p.side()?;
    if p.pos != p.toks.len() {
        return Err(p.err_at(p.col(), "unexpected trailing input"));
    }
    if let Some(v) = side.order.first() {
        return Err(Error::InvalidExpression(format!(
            "rate variable {v} in an information expression"
        )));
    }
    Ok(side.info)
}

/// Parses one statement into one inequality, or two for `=`.
fn parse_statement(text: &str, line: usize) -> Result<(Vec<LinIneq>, Vec<RateVar>)> {
    let mut p = Parser {
        toks: tokens(text, line)?,
        pos: 0,
        line,
        end_col: text.len(),
    };
    let lhs = p.side()?;
    let op_col = p.col();
    let op = match p.peek() {
        Some(Tok::Op(o)) if ["<=", ">=", "="].contains(o) => *o,
        _ => return Err(p.err_at(op_col, "expected `<=`, `>=` or `=`")),
    };
    p.pos += 1;
    let rhs = p.side()?;
    if p.pos != p.toks.len() {
        return Err(p.err_at(p.col(), "unexpected trailing input"));
    }
    let mut order = lhs.order.clone();
    for v in &rhs.order {
        if !order.contains(v) {
            order.push(v.clone());
        }
    }
    // lhs.rates - rhs.rates <= rhs.info - lhs.info
    let mut coeffs = lhs.rates.clone();
    for (v, c) in &rhs.rates {
        *coeffs.entry(v.clone()).or_insert_with(Rational::zero) -= c;
    }
    let le = LinIneq::le(coeffs.clone(), rhs.info.sub(&lhs.info));
    let ge = LinIneq::le(
        coeffs.into_iter().map(|(v, c)| (v, -c)),
        lhs.info.sub(&rhs.info),
    );
    let out = match op {
        "<=" => vec![le],
        ">=" => vec![ge],
        _ => vec![le, ge],
    };
    Ok((out, order))
}

/// Parses a whole system.
pub fn parse_system(text: &str) -> Result<IneqSystem> {
    let mut sys = IneqSystem::default();
    let mut declared = false;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("rates:") {
            for v in rest.split(',').map(str::trim).filter(|v| !v.is_empty()) {
                if !crate::info::is_ident(v) {
                    return Err(Error::Parse {
                        line,
                        col: 1,
                        msg: format!("bad rate name `{v}`"),
                    });
                }
                if !sys.vars.iter().any(|w| w == v) {
                    sys.vars.push(v.to_string());
                }
            }
            declared = true;
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("template:") {
            sys.template = Some(Template::parse(rest));
            continue;
        }
        let (body, tag) = match raw.split_once('#') {
            Some((b, t)) => (b, Some(t.trim().to_string()).filter(|t| !t.is_empty())),
            None => (raw, None),
        };
        let (ineqs, order) = parse_statement(body, line)?;
        for v in order {
            if !sys.vars.contains(&v) {
                if declared {
                    let col = body.find(v.as_str()).unwrap_or(0) + 1;
                    return Err(Error::Parse {
                        line,
                        col,
                        msg: format!("rate variable {v} is not declared"),
                    });
                }
                sys.vars.push(v);
            }
        }
        for mut i in ineqs {
            i.tag = tag.clone();
            sys.push(i);
        }
    }
    Ok(sys)
}

// ---------------------------------------------------------------------------

fn format_rate_terms(terms: &[(String, Rational)]) -> String {
    let mut s = String::new();
    for (k, (v, c)) in terms.iter().enumerate() {
        let mag = c.abs();
        let sign = match (k == 0, c.is_negative()) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        if mag.is_one() {
            s += &format!("{sign}{v}");
        } else {
            s += &format!("{sign}{}*{v}", rational::format(&mag));
        }
    }
    s
}

fn format_ineq_ordered(i: &LinIneq, order: &[RateVar]) -> String {
    let mut terms: Vec<(String, Rational)> = order
        .iter()
        .filter_map(|v| i.coeffs.get(v).map(|c| (v.clone(), c.clone())))
        .collect();
    for (v, c) in &i.coeffs {
        if !order.contains(v) {
            terms.push((v.clone(), c.clone()));
        }
    }
    let body = if terms.is_empty() {
        format!("0 <= {}", i.rhs)
    } else if terms.iter().all(|(_, c)| c.is_negative()) {
        let flipped: Vec<(String, Rational)> = terms.into_iter().map(|(v, c)| (v, -c)).collect();
        format!("{} >= {}", format_rate_terms(&flipped), i.rhs.neg())
    } else {
        format!("{} <= {}", format_rate_terms(&terms), i.rhs)
    };
    match &i.tag {
        Some(t) => format!("{body}  # {t}"),
        None => body,
    }
}

pub fn format_ineq(i: &LinIneq) -> String {
    format_ineq_ordered(i, &[])
}

pub fn format_template(t: &Template) -> String {
    t.factors
        .iter()
        .map(|f| {
            if f.givens.is_empty() {
                f.targets.join(",")
            } else {
                format!("{}|{}", f.targets.join(","), f.givens.join(","))
            }
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Pretty-prints a system so that [`parse_system`] reads it back unchanged.
pub fn format_system(sys: &IneqSystem) -> String {
    let mut out = format!("rates: {}\n", sys.vars.join(", "));
    if let Some(t) = &sys.template {
        out += &format!("template: {}\n", format_template(t));
    }
    for i in sys.all() {
        out += &format_ineq_ordered(i, &sys.vars);
        out.push('\n');
    }
    out
}
