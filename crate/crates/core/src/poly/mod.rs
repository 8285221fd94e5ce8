//! Linear inequality systems over rate variables with symbolic right-hand
//! sides, Fourier-Motzkin elimination and redundancy removal.

mod cert;
mod region;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dist::Template;
use crate::error::{Error, Result};
use crate::info::InfoExpr;
use crate::rational::{self, Rational};

pub use cert::{Certificate, Certifier, ShannonColumn};
pub use region::{
    dist_to_polygon, hausdorff_2d, hull_2d, numeric_region, numeric_region_bound, regions_match_2d,
    vertices_2d, NumericRegion,
};

pub type RateVar = String;

/// `sum coeffs[v] * v <= rhs`. With no rate coefficients it reads `0 <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinIneq {
    #[serde(with = "ratmap")]
    pub coeffs: BTreeMap<RateVar, Rational>,
    pub rhs: InfoExpr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<String>,
}

mod ratmap {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<String, Rational>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let out: BTreeMap<&String, String> =
            m.iter().map(|(k, v)| (k, rational::format(v))).collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<String, Rational>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in raw {
            let r = rational::parse(&v).map_err(serde::de::Error::custom)?;
            if !r.is_zero() {
                out.insert(k, r);
            }
        }
        Ok(out)
    }
}

impl LinIneq {
    pub fn le(coeffs: impl IntoIterator<Item = (RateVar, Rational)>, rhs: InfoExpr) -> Self {
        let mut m = BTreeMap::new();
        for (v, c) in coeffs {
            let e: &mut Rational = m.entry(v).or_insert_with(Rational::zero);
            *e += c;
        }
        m.retain(|_, c| !c.is_zero());
        LinIneq {
            coeffs: m,
            rhs,
            tag: None,
        }
    }

    pub fn ge(coeffs: impl IntoIterator<Item = (RateVar, Rational)>, rhs: InfoExpr) -> Self {
        let neg = coeffs.into_iter().map(|(v, c)| (v, -c));
        LinIneq::le(neg, rhs.neg())
    }

    /// `0 <= rhs`.
    pub fn assumption(rhs: InfoExpr) -> Self {
        LinIneq {
            coeffs: BTreeMap::new(),
            rhs,
            tag: None,
        }
    }

    /// `-v <= 0`.
    pub fn nonneg(v: &str) -> Self {
        LinIneq::le([(v.to_string(), rational::int(-1))], InfoExpr::zero())
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = Some(tag.into());
        self
    }

    pub fn coeff(&self, v: &str) -> Rational {
        self.coeffs.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_assumption(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_nonneg_of(&self, v: &str) -> bool {
        self.coeffs.len() == 1 && self.coeff(v) < Rational::zero() && self.rhs.is_zero()
    }

    pub fn scale(&self, k: &Rational) -> LinIneq {
        debug_assert!(k.is_positive());
        LinIneq {
            coeffs: self
                .coeffs
                .iter()
                .map(|(v, c)| (v.clone(), c * k))
                .collect(),
            rhs: self.rhs.scale(k),
            tag: self.tag.clone(),
        }
    }

    /// Positive rescaling so that the first nonzero rate coefficient (in
    /// `order`, then name order) has magnitude one. Atom-only inequalities
    /// are scaled by their first atom coefficient instead.
    pub fn canonical(&self, order: &[RateVar]) -> LinIneq {
        let lead = order
            .iter()
            .find_map(|v| self.coeffs.get(v))
            .or_else(|| self.coeffs.values().next())
            .or_else(|| self.rhs.terms().values().next())
            .cloned();
        match lead {
            Some(c) if !c.is_zero() => self.scale(&(Rational::one() / c.abs())),
            _ => self.clone(),
        }
    }

    /// Same inequality up to positive scaling and tags.
    pub fn same_as(&self, other: &LinIneq, order: &[RateVar]) -> bool {
        let a = self.canonical(order);
        let b = other.canonical(order);
        a.coeffs == b.coeffs && a.rhs == b.rhs
    }

    fn key(&self) -> (BTreeMap<RateVar, Rational>, InfoExpr) {
        (self.coeffs.clone(), self.rhs.clone())
    }
}

impl fmt::Display for LinIneq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::dsl::format_ineq(self))
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "farkas")]
    Farkas,
    #[serde(rename = "farkas+shannon")]
    FarkasShannon,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "farkas" => Ok(Mode::Farkas),
            "farkas+shannon" => Ok(Mode::FarkasShannon),
            _ => Err(Error::InvalidConfig(format!(
                "unknown mode `{s}` (farkas | farkas+shannon)"
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Farkas => "farkas",
            Mode::FarkasShannon => "farkas+shannon",
        })
    }
}

/// Rate inequalities plus atom-only assumptions. All rate variables are
/// implicitly nonnegative. The optional template lists the factorization the
/// entropies come from; its conditional independences may be used when
/// certifying redundancy.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IneqSystem {
    pub vars: Vec<RateVar>,
    pub ineqs: Vec<LinIneq>,
    #[serde(default)]
    pub assumptions: Vec<LinIneq>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<Template>,
}

impl IneqSystem {
    pub fn new(vars: Vec<RateVar>) -> Self {
        IneqSystem {
            vars,
            ..Default::default()
        }
    }

    /// Adds an inequality; atom-only ones go to the assumptions.
    pub fn push(&mut self, ineq: LinIneq) {
        for v in ineq.coeffs.keys() {
            if !self.vars.contains(v) {
                self.vars.push(v.clone());
            }
        }
        if ineq.is_assumption() {
            self.assumptions.push(ineq);
        } else {
            self.ineqs.push(ineq);
        }
    }

    pub fn all(&self) -> impl Iterator<Item = &LinIneq> {
        self.ineqs.iter().chain(self.assumptions.iter())
    }

    pub fn certifier(&self, mode: Mode) -> Certifier {
        Certifier::new(mode, self.template.as_ref())
    }

    pub fn validate(&self) -> Result<()> {
        for i in &self.ineqs {
            for v in i.coeffs.keys() {
                if !self.vars.contains(v) {
                    return Err(Error::InvalidSystem(format!(
                        "rate variable {v} is not declared"
                    )));
                }
            }
        }
        if self.assumptions.iter().any(|a| !a.is_assumption()) {
            return Err(Error::InvalidSystem(
                "assumptions may not involve rate variables".into(),
            ));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------

/// Outcome of a redundancy sweep.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Pruned {
    pub system: IneqSystem,
    pub certificates: Vec<Certificate>,
}

/// Drops every inequality implied by the remaining ones, the assumptions and
/// rate nonnegativity, in listed order. Each removal carries a certificate.
/// If a certificate cannot be verified exactly the inequality is kept.
pub fn remove_redundant(sys: &IneqSystem, mode: Mode) -> Pruned {
    let cert = sys.certifier(mode);
    let mut certificates = Vec::new();
    let mut ineqs = dedupe(&sys.ineqs, &sys.vars);
    let mut assumptions = dedupe(&sys.assumptions, &sys.vars);
    assumptions.retain(|a| !trivially_true(a));

    let mut i = 0;
    while i < assumptions.len() {
        let premises: Vec<&LinIneq> = assumptions
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, a)| a)
            .collect();
        match cert.implied(&assumptions[i], &premises, &sys.vars) {
            Some(c) => {
                certificates.push(c);
                assumptions.remove(i);
            }
            None => i += 1,
        }
    }
    let mut i = 0;
    while i < ineqs.len() {
        let premises: Vec<&LinIneq> = ineqs
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, a)| a)
            .chain(assumptions.iter())
            .collect();
        match cert.implied(&ineqs[i], &premises, &sys.vars) {
            Some(c) => {
                certificates.push(c);
                ineqs.remove(i);
            }
            None => i += 1,
        }
    }
    Pruned {
        system: IneqSystem {
            vars: sys.vars.clone(),
            ineqs,
            assumptions,
            template: sys.template.clone(),
        },
        certificates,
    }
}

fn trivially_true(a: &LinIneq) -> bool {
    a.is_assumption() && a.rhs.terms().is_empty() && !a.rhs.constant_term().is_negative()
}

fn dedupe(list: &[LinIneq], order: &[RateVar]) -> Vec<LinIneq> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for l in list {
        let c = l.canonical(order);
        if seen.insert(c.key()) {
            out.push(c);
        }
    }
    out
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EliminationStep {
    pub var: RateVar,
    pub positive: usize,
    pub negative: usize,
    pub generated: usize,
    pub kept: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Elimination {
    pub system: IneqSystem,
    pub steps: Vec<EliminationStep>,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Copy, Debug)]
pub struct FmOptions {
    pub mode: Mode,
    /// Run redundancy removal after every elimination step.
    pub prune: bool,
}

impl Default for FmOptions {
    fn default() -> Self {
        FmOptions {
            mode: Mode::FarkasShannon,
            prune: true,
        }
    }
}

/// Eliminates `order` one variable at a time. Nonnegativity of every rate
/// variable is added explicitly first, so the projection is onto the
/// nonnegative orthant of the remaining variables.
pub fn fm_eliminate(sys: &IneqSystem, order: &[RateVar], opts: FmOptions) -> Result<Elimination> {
    sys.validate()?;
    for v in order {
        if !sys.vars.contains(v) {
            return Err(Error::InvalidSystem(format!(
                "cannot eliminate undeclared variable {v}"
            )));
        }
    }
    let mut cur = sys.clone();
    for v in &sys.vars {
        if !cur.ineqs.iter().any(|i| i.is_nonneg_of(v)) {
            cur.ineqs.push(LinIneq::nonneg(v));
        }
    }
    let mut steps = Vec::new();
    let mut certificates = Vec::new();
    for x in order {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for i in &cur.ineqs {
            let c = i.coeff(x);
            if c.is_positive() {
                pos.push(i.scale(&(Rational::one() / c)));
            } else if c.is_negative() {
                neg.push(i.scale(&(Rational::one() / -c)));
            } else {
                rest.push(i.clone());
            }
        }
        let mut generated = 0;
        let mut next = IneqSystem {
            vars: cur.vars.iter().filter(|v| *v != x).cloned().collect(),
            ineqs: Vec::new(),
            assumptions: cur.assumptions.clone(),
            template: cur.template.clone(),
        };
        for r in rest {
            next.ineqs.push(r);
        }
        for p in &pos {
            for n in &neg {
                let mut coeffs = p.coeffs.clone();
                for (v, c) in &n.coeffs {
                    let e = coeffs.entry(v.clone()).or_insert_with(Rational::zero);
                    *e += c;
                }
                coeffs.retain(|_, c| !c.is_zero());
                debug_assert!(!coeffs.contains_key(x));
                let combo = LinIneq {
                    coeffs,
                    rhs: p.rhs.add(&n.rhs),
                    tag: None,
                };
                generated += 1;
                if combo.is_assumption() {
                    if !trivially_true(&combo) {
                        next.assumptions.push(combo);
                    }
                } else {
                    next.ineqs.push(combo);
                }
            }
        }
        next.ineqs = dedupe(&next.ineqs, &next.vars);
        next.assumptions = dedupe(&next.assumptions, &next.vars);
        if opts.prune {
            let pruned = remove_redundant(&next, opts.mode);
            certificates.extend(pruned.certificates);
            next = pruned.system;
        }
        steps.push(EliminationStep {
            var: x.clone(),
            positive: pos.len(),
            negative: neg.len(),
            generated,
            kept: next.ineqs.len() + next.assumptions.len(),
        });
        cur = next;
    }
    // nonnegativity is implicit in every system
    let vars = cur.vars.clone();
    cur.ineqs
        .retain(|i| !vars.iter().any(|v| i.is_nonneg_of(v)));
    Ok(Elimination {
        system: cur,
        steps,
        certificates,
    })
}

// ---------------------------------------------------------------------------

/// The first inequality of one system that has no counterpart in the other.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    /// `"left"` when the inequality belongs to the first system.
    pub side: String,
    pub ineq: LinIneq,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} system has unmatched {}", self.side, self.ineq)
    }
}

/// Checks that each system contains the other's inequalities and assumptions
/// up to positive scaling. Right-hand sides match when they are identical or
/// provably equal under Shannon inequalities and the conditional
/// independences of the attached template.
pub fn symbolic_equal(a: &IneqSystem, b: &IneqSystem) -> std::result::Result<(), Witness> {
    let template = a.template.as_ref().or(b.template.as_ref());
    let cert = Certifier::new(Mode::FarkasShannon, template);
    let order: Vec<RateVar> = a.vars.iter().chain(&b.vars).cloned().collect();
    let visible = |s: &IneqSystem| -> Vec<LinIneq> {
        s.all()
            .filter(|i| !order.iter().any(|v| i.is_nonneg_of(v)))
            .map(|i| i.canonical(&order))
            .collect()
    };
    let (la, lb) = (visible(a), visible(b));
    let matches = |x: &LinIneq, y: &LinIneq| -> bool {
        if x.coeffs != y.coeffs {
            return false;
        }
        if x.rhs == y.rhs {
            return true;
        }
        if x.is_assumption() {
            // assumptions are compared after normalising the whole expression
            return cert.equivalent(&x.rhs, &y.rhs, &[])
                || same_assumption_up_to_scale(&cert, x, y);
        }
        cert.equivalent(&x.rhs, &y.rhs, &[])
    };
    for (side, from, to) in [("left", &la, &lb), ("right", &lb, &la)] {
        for x in from.iter() {
            if !to.iter().any(|y| matches(x, y)) {
                return Err(Witness {
                    side: side.into(),
                    ineq: x.clone(),
                });
            }
        }
    }
    Ok(())
}

fn same_assumption_up_to_scale(cert: &Certifier, x: &LinIneq, y: &LinIneq) -> bool {
    // 0 <= c1 and 0 <= c2 describe the same constraint when each implies the other
    cert.implied(x, &[y], &[]).is_some() && cert.implied(y, &[x], &[]).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn c(v: i64) -> InfoExpr {
        InfoExpr::constant(int(v))
    }

    fn le(terms: &[(&str, i64)], rhs: InfoExpr) -> LinIneq {
        LinIneq::le(terms.iter().map(|(v, k)| (v.to_string(), int(*k))), rhs)
    }

    #[test]
    fn canonical_scaling() {
        let i = le(&[("a", 3), ("b", -6)], c(9));
        let k = i.canonical(&["a".into(), "b".into()]);
        assert_eq!(k.coeff("a"), int(1));
        assert_eq!(k.coeff("b"), int(-2));
        assert_eq!(k.rhs, c(3));
        let neg = le(&[("a", -2)], c(4)).canonical(&["a".into()]);
        assert_eq!(neg.coeff("a"), int(-1));
    }

    #[test]
    fn eliminates_simple_chain() {
        // a + t <= 4, b - t <= 1  =>  a + b <= 5
        let mut s = IneqSystem::new(vec!["a".into(), "b".into(), "t".into()]);
        s.push(le(&[("a", 1), ("t", 1)], c(4)));
        s.push(le(&[("b", 1), ("t", -1)], c(1)));
        let r = fm_eliminate(&s, &["t".into()], FmOptions::default()).unwrap();
        let target = le(&[("a", 1), ("b", 1)], c(5));
        assert!(r
            .system
            .ineqs
            .iter()
            .any(|i| i.same_as(&target, &r.system.vars)));
        // b <= 1 + t with t <= 4 - a <= 4 gives b <= 5, redundant given a + b <= 5
        assert_eq!(r.system.ineqs.len(), 2, "{:?}", r.system.ineqs);
    }

    #[test]
    fn redundancy_certificates_verify() {
        let mut s = IneqSystem::new(vec!["a".into(), "b".into()]);
        s.push(le(&[("a", 1)], c(2)));
        s.push(le(&[("b", 1)], c(3)));
        s.push(le(&[("a", 1), ("b", 1)], c(7)));
        let p = remove_redundant(&s, Mode::Farkas);
        assert_eq!(p.system.ineqs.len(), 2);
        assert_eq!(p.certificates.len(), 1);
        assert!(p.certificates[0].verify());
    }

    #[test]
    fn infeasible_constant_becomes_assumption() {
        let mut s = IneqSystem::new(vec!["t".into()]);
        s.push(le(&[("t", 1)], c(-1)));
        let r = fm_eliminate(&s, &["t".into()], FmOptions::default()).unwrap();
        assert_eq!(r.system.assumptions.len(), 1);
        assert!(r.system.assumptions[0].rhs.constant_term().is_negative());
    }

    #[test]
    fn symbolic_equal_reports_witness() {
        let mut a = IneqSystem::new(vec!["a".into()]);
        a.push(le(&[("a", 2)], c(4)));
        let mut b = IneqSystem::new(vec!["a".into()]);
        b.push(le(&[("a", 1)], c(2)));
        assert!(symbolic_equal(&a, &b).is_ok());
        b.push(le(&[("a", 1)], c(1)));
        let w = symbolic_equal(&a, &b).unwrap_err();
        assert_eq!(w.side, "right");
    }
}
