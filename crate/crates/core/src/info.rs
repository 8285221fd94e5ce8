//! Shannon quantities, both numeric and as exact symbolic combinations of
//! joint entropies.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::dist::{Binding, JointPmf};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Probabilities below this are treated as zero inside `p log p`.
pub const PROB_FLOOR: f64 = 1e-15;

/// `H(p)` in bits.
pub fn entropy_of(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > PROB_FLOOR)
        .map(|&p| -p * p.log2())
        .sum()
}

pub fn entropy(joint: &JointPmf, vars: &[String]) -> Result<f64> {
    Ok(entropy_of(&joint.marginal_probs(vars)?))
}

pub fn binary_entropy(p: f64) -> f64 {
    entropy_of(&[p, 1.0 - p])
}

// ---------------------------------------------------------------------------

/// A nonempty set of variables standing for their joint entropy.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EntropyAtom(Vec<String>);

impl EntropyAtom {
    pub fn new<I, S>(vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set: BTreeSet<String> = vars.into_iter().map(|s| s.as_ref().to_string()).collect();
        if set.is_empty() {
            return Err(Error::InvalidExpression(
                "entropy atom needs at least one variable".into(),
            ));
        }
        Ok(EntropyAtom(set.into_iter().collect()))
    }

    pub fn vars(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for EntropyAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({})", self.0.join(","))
    }
}

impl FromStr for EntropyAtom {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix("H(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| {
                Error::InvalidExpression(format!("`{s}` is not of the form H(A,B,...)"))
            })?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.iter().any(|p| !is_ident(p)) {
            return Err(Error::InvalidExpression(format!(
                "bad variable list in `{s}`"
            )));
        }
        EntropyAtom::new(parts)
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let body = s.trim_end_matches('\'');
    let mut chars = body.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

// ---------------------------------------------------------------------------

/// `constant + sum coeff * H(atom)` with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct InfoExpr {
    terms: BTreeMap<EntropyAtom, Rational>,
    constant: Rational,
}

impl InfoExpr {
    pub fn zero() -> Self {
        InfoExpr::default()
    }

    pub fn constant(c: Rational) -> Self {
        InfoExpr {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn atom(a: EntropyAtom) -> Self {
        let mut e = InfoExpr::zero();
        e.add_term(a, rational::int(1));
        e
    }

    /// `H(vars)`; an empty set gives zero.
    pub fn h<S: AsRef<str>>(vars: &[S]) -> Self {
        match EntropyAtom::new(vars) {
            Ok(a) => InfoExpr::atom(a),
            Err(_) => InfoExpr::zero(),
        }
    }

    /// `H(a | c) = H(a, c) - H(c)`.
    pub fn cond_h<S: AsRef<str>>(a: &[S], c: &[S]) -> Self {
        let ac: Vec<&str> = a.iter().chain(c).map(|s| s.as_ref()).collect();
        InfoExpr::h(&ac).sub(&InfoExpr::h(c))
    }

    pub fn add_term(&mut self, atom: EntropyAtom, coeff: Rational) {
        let entry = self
            .terms
            .entry(atom.clone())
            .or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&atom);
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn terms(&self) -> &BTreeMap<EntropyAtom, Rational> {
        &self.terms
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn add(&self, other: &InfoExpr) -> InfoExpr {
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out.constant += &other.constant;
        out
    }

    pub fn sub(&self, other: &InfoExpr) -> InfoExpr {
        self.add(&other.scale(&rational::int(-1)))
    }

    pub fn scale(&self, k: &Rational) -> InfoExpr {
        if k.is_zero() {
            return InfoExpr::zero();
        }
        InfoExpr {
            terms: self.terms.iter().map(|(a, c)| (a.clone(), c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn neg(&self) -> InfoExpr {
        self.scale(&rational::int(-1))
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|a| a.0.iter().cloned())
            .collect()
    }

    /// Replaces every variable by its image, merging atoms that collide.
    /// Variables mapped to an empty list disappear from their atoms.
    pub fn substitute(&self, map: &Binding) -> InfoExpr {
        let mut out = InfoExpr::constant(self.constant.clone());
        for (a, c) in &self.terms {
            let mut vars = BTreeSet::new();
            for v in &a.0 {
                match map.get(v) {
                    Some(img) => vars.extend(img.iter().cloned()),
                    None => {
                        vars.insert(v.clone());
                    }
                }
            }
            if let Ok(atom) = EntropyAtom::new(vars) {
                out.add_term(atom, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for InfoExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut push =
            |f: &mut fmt::Formatter<'_>, c: &Rational, body: Option<String>| -> fmt::Result {
                let neg = c.is_negative();
                let mag = c.abs();
                let sign = match (first, neg) {
                    (true, true) => "-",
                    (true, false) => "",
                    (false, true) => " - ",
                    (false, false) => " + ",
                };
                first = false;
                match body {
                    Some(b) if mag == rational::int(1) => write!(f, "{sign}{b}"),
                    Some(b) => write!(f, "{sign}{}*{b}", rational::format(&mag)),
                    None => write!(f, "{sign}{}", rational::format(&mag)),
                }
            };
        for (a, c) in &self.terms {
            push(f, c, Some(a.to_string()))?;
        }
        if !self.constant.is_zero() {
            push(f, &self.constant, None)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    vars: Vec<String>,
    #[serde(with = "rational")]
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct InfoExprJson {
    #[serde(default)]
    terms: Vec<TermJson>,
    #[serde(with = "rational", default = "Rational::zero")]
    constant: Rational,
}

impl Serialize for InfoExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InfoExprJson {
            terms: self
                .terms
                .iter()
                .map(|(a, c)| TermJson {
                    vars: a.0.clone(),
                    coeff: c.clone(),
                })
                .collect(),
            constant: self.constant.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InfoExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = InfoExprJson::deserialize(d)?;
        let mut e = InfoExpr::constant(raw.constant);
        for t in raw.terms {
            let a = EntropyAtom::new(t.vars).map_err(serde::de::Error::custom)?;
            e.add_term(a, t.coeff);
        }
        Ok(e)
    }
}

/// `I(A; B | C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)`.
///
/// The three arguments must be pairwise disjoint and `A`, `B` nonempty.
pub fn mutual_info_expr<S: AsRef<str>>(a: &[S], b: &[S], c: &[S]) -> Result<InfoExpr> {
    let set = |x: &[S]| -> BTreeSet<String> { x.iter().map(|s| s.as_ref().to_string()).collect() };
    let (sa, sb, sc) = (set(a), set(b), set(c));
    if sa.is_empty() || sb.is_empty() {
        return Err(Error::InvalidExpression(
            "mutual information needs two nonempty arguments".into(),
        ));
    }
    if let Some(v) = sa.intersection(&sb).next() {
        return Err(Error::InvalidExpression(format!(
            "variable {v} appears on both sides of I(;)"
        )));
    }
    if let Some(v) = sa.union(&sb).find(|v| sc.contains(*v)) {
        return Err(Error::InvalidExpression(format!(
            "variable {v} appears in an argument and the condition"
        )));
    }
    let join = |x: &BTreeSet<String>, y: &BTreeSet<String>| -> Vec<String> {
        x.union(y).cloned().collect()
    };
    let ac = join(&sa, &sc);
    let bc = join(&sb, &sc);
    let abc = join(&sa, &join(&sb, &sc).into_iter().collect());
    let cv: Vec<String> = sc.into_iter().collect();
    Ok(InfoExpr::h(&ac)
        .add(&InfoExpr::h(&bc))
        .sub(&InfoExpr::h(&abc))
        .sub(&InfoExpr::h(&cv)))
}

// ---------------------------------------------------------------------------

/// Memoised atom entropies for one joint pmf.
pub struct EntropyCache<'a> {
    joint: &'a JointPmf,
    cache: HashMap<EntropyAtom, f64>,
}

impl<'a> EntropyCache<'a> {
    pub fn new(joint: &'a JointPmf) -> Self {
        EntropyCache {
            joint,
            cache: HashMap::new(),
        }
    }

    pub fn atom(&mut self, a: &EntropyAtom) -> Result<f64> {
        if let Some(v) = self.cache.get(a) {
            return Ok(*v);
        }
        let v = entropy(self.joint, &a.0)?;
        self.cache.insert(a.clone(), v);
        Ok(v)
    }

    pub fn eval(&mut self, e: &InfoExpr) -> Result<f64> {
        let mut total = rational::to_f64(&e.constant);
        for (a, c) in &e.terms {
            total += rational::to_f64(c) * self.atom(a)?;
        }
        Ok(total)
    }
}

pub fn eval_expr(e: &InfoExpr, joint: &JointPmf) -> Result<f64> {
    EntropyCache::new(joint).eval(e)
}

/// Evaluates with symbolic variables bound to tuples of joint variables.
pub fn eval_expr_bound(e: &InfoExpr, joint: &JointPmf, binding: &Binding) -> Result<f64> {
    let syms: Vec<String> = e.variables().into_iter().collect();
    let bound = joint.bind(binding, &syms)?;
    eval_expr(e, &bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::VariableSpec;
    use crate::rational::{frac, int};

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn entropy_basics() {
        let j =
            JointPmf::uniform(vec![VariableSpec::new("A", 4), VariableSpec::new("B", 2)]).unwrap();
        assert!((entropy(&j, &s(&["A"])).unwrap() - 2.0).abs() < 1e-12);
        assert!((entropy(&j, &s(&["A", "B"])).unwrap() - 3.0).abs() < 1e-12);
        assert!(entropy(&j, &s(&["C"])).is_err());
        assert!((binary_entropy(0.11) - 0.4999157).abs() < 1e-6);
    }

    #[test]
    fn mi_expansion_drops_empty_term() {
        let e = mutual_info_expr(&["X"], &["Y"], &[] as &[&str]).unwrap();
        assert_eq!(e.terms().len(), 3);
        assert_eq!(e.to_string(), "H(X) - H(X,Y) + H(Y)");
        let e = mutual_info_expr(&["A"], &["B"], &["C"]).unwrap();
        assert_eq!(e.terms().len(), 4);
    }

    #[test]
    fn mi_rejects_overlap() {
        assert!(mutual_info_expr(&["X"], &["X"], &[] as &[&str]).is_err());
        assert!(mutual_info_expr(&["X"], &["Y"], &["X"]).is_err());
        assert!(mutual_info_expr(&[] as &[&str], &["Y"], &[]).is_err());
    }

    #[test]
    fn algebra_cancels() {
        let e = mutual_info_expr(&["X"], &["Y"], &[] as &[&str]).unwrap();
        assert!(e.sub(&e).is_zero());
        let half = e.scale(&frac(1, 2));
        assert!(half.add(&half).sub(&e).is_zero());
        let mut c = InfoExpr::constant(int(3));
        c.add_constant(&int(-3));
        assert!(c.is_zero());
    }

    #[test]
    fn xor_mutual_information() {
        // Z = X xor Y with X, Y uniform: I(X;Z) = 0, I(X;Z|Y) = 1
        let mut probs = vec![0.0; 8];
        for x in 0..2 {
            for y in 0..2 {
                probs[x * 4 + y * 2 + (x ^ y)] = 0.25;
            }
        }
        let j = JointPmf::new(
            vec![
                VariableSpec::new("X", 2),
                VariableSpec::new("Y", 2),
                VariableSpec::new("Z", 2),
            ],
            probs,
        )
        .unwrap();
        let i0 = mutual_info_expr(&["X"], &["Z"], &[] as &[&str]).unwrap();
        let i1 = mutual_info_expr(&["X"], &["Z"], &["Y"]).unwrap();
        assert!(eval_expr(&i0, &j).unwrap().abs() < 1e-12);
        assert!((eval_expr(&i1, &j).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn substitution_merges_atoms() {
        let e = mutual_info_expr(&["U0"], &["Y"], &["V0"]).unwrap();
        let mut b = Binding::new();
        b.insert("V0".into(), vec![]);
        let r = e.substitute(&b);
        assert_eq!(
            r,
            mutual_info_expr(&["U0"], &["Y"], &[] as &[&str]).unwrap()
        );
    }

    #[test]
    fn atom_text_roundtrip() {
        let a: EntropyAtom = "H(Y1, U0,Q)".parse().unwrap();
        assert_eq!(a.to_string(), "H(Q,U0,Y1)");
        assert!("H()".parse::<EntropyAtom>().is_err());
        assert!("G(X)".parse::<EntropyAtom>().is_err());
    }
}
