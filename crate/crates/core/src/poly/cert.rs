//! Implication certificates for linear inequalities with entropy constants.
//!
//! A target `a.R <= c` follows from premises `a_i.R <= c_i` when there are
//! multipliers `l_i >= 0` and `m_v >= 0` with
//! `sum l_i a_i - m = a` and `c - sum l_i c_i` a nonnegative combination of
//! valid information inequalities plus a nonnegative constant.
//!
//! The search runs as a floating point LP. Its support is then re-solved in
//! exact arithmetic and only an exactly verified certificate is accepted.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use microlp::{ComparisonOp, OptimizationDirection, Problem, Variable};
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{LinIneq, Mode, RateVar};
use crate::dist::{Dag, Template};
use crate::info::{EntropyAtom, InfoExpr};
use crate::rational::{self, Rational};

const SUPPORT_TOL: f64 = 1e-9;

/// A valid information inequality `expr >= 0`, or an equality `expr = 0` for
/// conditional independences implied by the factorization.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShannonColumn {
    /// `H(a) >= 0`
    Nonneg(EntropyAtom),
    /// `H(sup) - H(sub) >= 0`
    Monotone { sub: EntropyAtom, sup: EntropyAtom },
    /// `H(a) + H(b) - H(a u b) - H(a n b) >= 0`
    Submodular { a: EntropyAtom, b: EntropyAtom },
    /// `sign * (H(a) + H(b) - H(a u b) - H(a n b))` with the bracket equal to zero
    Independence {
        a: EntropyAtom,
        b: EntropyAtom,
        negated: bool,
    },
}

impl ShannonColumn {
    pub fn expr(&self) -> InfoExpr {
        let submod = |a: &EntropyAtom, b: &EntropyAtom| {
            let union: Vec<&String> = a.vars().iter().chain(b.vars()).collect();
            let inter: Vec<&String> = a.vars().iter().filter(|v| b.vars().contains(v)).collect();
            InfoExpr::atom(a.clone())
                .add(&InfoExpr::atom(b.clone()))
                .sub(&InfoExpr::h(&union))
                .sub(&InfoExpr::h(&inter))
        };
        match self {
            ShannonColumn::Nonneg(a) => InfoExpr::atom(a.clone()),
            ShannonColumn::Monotone { sub, sup } => {
                InfoExpr::atom(sup.clone()).sub(&InfoExpr::atom(sub.clone()))
            }
            ShannonColumn::Submodular { a, b } => submod(a, b),
            ShannonColumn::Independence { a, b, negated } => {
                let e = submod(a, b);
                if *negated {
                    e.neg()
                } else {
                    e
                }
            }
        }
    }
}

/// Exact multipliers showing that `target` is implied.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub target: LinIneq,
    #[serde(with = "weighted")]
    pub premises: Vec<(LinIneq, Rational)>,
    #[serde(with = "weighted")]
    pub nonneg: Vec<(RateVar, Rational)>,
    #[serde(with = "weighted")]
    pub shannon: Vec<(ShannonColumn, Rational)>,
    #[serde(with = "rational")]
    pub slack: Rational,
}

/// Serializes `(item, multiplier)` lists with the multiplier as "p/q".
mod weighted {
    use serde::de::DeserializeOwned;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{self, Rational};

    #[derive(Serialize)]
    struct Out<'a, T> {
        item: &'a T,
        #[serde(with = "rational")]
        multiplier: &'a Rational,
    }

    #[derive(Deserialize)]
    struct In<T> {
        item: T,
        #[serde(with = "rational")]
        multiplier: Rational,
    }

    pub fn serialize<T: Serialize, S: Serializer>(
        v: &[(T, Rational)],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|(item, multiplier)| Out { item, multiplier }))
    }

    pub fn deserialize<'de, T: DeserializeOwned, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<(T, Rational)>, D::Error> {
        let v: Vec<In<T>> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|i| (i.item, i.multiplier)).collect())
    }
}

impl Certificate {
    /// Recomputes the combination exactly.
    pub fn verify(&self) -> bool {
        if self.premises.iter().any(|(_, l)| l.is_negative())
            || self.nonneg.iter().any(|(_, l)| l.is_negative())
            || self.shannon.iter().any(|(_, l)| l.is_negative())
            || self.slack.is_negative()
        {
            return false;
        }
        let mut coeffs: BTreeMap<RateVar, Rational> = BTreeMap::new();
        let mut rhs = InfoExpr::constant(self.slack.clone());
        for (p, l) in &self.premises {
            for (v, c) in &p.coeffs {
                *coeffs.entry(v.clone()).or_insert_with(Rational::zero) += c * l;
            }
            rhs = rhs.add(&p.rhs.scale(l));
        }
        for (v, l) in &self.nonneg {
            *coeffs.entry(v.clone()).or_insert_with(Rational::zero) -= l;
        }
        for (s, l) in &self.shannon {
            rhs = rhs.add(&s.expr().scale(l));
        }
        coeffs.retain(|_, c| !c.is_zero());
        coeffs == self.target.coeffs && rhs == self.target.rhs
    }
}

// ---------------------------------------------------------------------------

type Mask = u64;

struct Scope {
    names: Vec<String>,
}

impl Scope {
    fn mask(&self, atom: &EntropyAtom) -> Mask {
        atom.vars()
            .iter()
            .map(|v| 1u64 << self.names.binary_search(v).expect("variable in scope"))
            .fold(0, |m, b| m | b)
    }

    fn atom(&self, m: Mask) -> EntropyAtom {
        EntropyAtom::new(
            (0..self.names.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| self.names[i].as_str()),
        )
        .expect("nonempty mask")
    }
}

enum Col {
    Premise(usize),
    Nonneg(usize),
    Shannon(ShannonColumn),
    Slack,
}

/// Decides implications between inequalities, optionally using the
/// conditional independences of a factorization template.
pub struct Certifier {
    mode: Mode,
    dag: Option<Dag>,
    dsep: Mutex<HashMap<(u64, u64, u64), bool>>,
}

impl Certifier {
    pub fn new(mode: Mode, template: Option<&Template>) -> Self {
        let dag = match mode {
            Mode::FarkasShannon => template.map(Dag::from_template).filter(|d| d.len() <= 64),
            Mode::Farkas => None,
        };
        Certifier {
            mode,
            dag,
            dsep: Mutex::new(HashMap::new()),
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    fn independent(&self, scope: &Scope, x: Mask, y: Mask, z: Mask) -> bool {
        let dag = match &self.dag {
            Some(d) => d,
            None => return false,
        };
        let to_dag = |m: Mask| -> Option<u64> {
            let mut out = 0u64;
            for i in 0..scope.names.len() {
                if m >> i & 1 == 1 {
                    out |= 1u64 << dag.names.iter().position(|n| n == &scope.names[i])?;
                }
            }
            Some(out)
        };
        let (Some(dx), Some(dy), Some(dz)) = (to_dag(x), to_dag(y), to_dag(z)) else {
            return false;
        };
        let mut cache = self.dsep.lock().unwrap();
        *cache
            .entry((dx, dy, dz))
            .or_insert_with(|| dag.d_separated(dx, dy, dz))
    }

    /// `0 <= a - b` and `0 <= b - a` both hold.
    pub fn equivalent(&self, a: &InfoExpr, b: &InfoExpr, premises: &[&LinIneq]) -> bool {
        let d = a.sub(b);
        self.implied(&LinIneq::assumption(d.clone()), premises, &[])
            .is_some()
            && self
                .implied(&LinIneq::assumption(d.neg()), premises, &[])
                .is_some()
    }

    /// Searches for a certificate that `target` follows from `premises` and
    /// nonnegativity of the variables in `vars`.
    pub fn implied(
        &self,
        target: &LinIneq,
        premises: &[&LinIneq],
        vars: &[RateVar],
    ) -> Option<Certificate> {
        let mut names: Vec<String> = target
            .rhs
            .variables()
            .into_iter()
            .chain(premises.iter().flat_map(|p| p.rhs.variables()))
            .collect();
        names.sort();
        names.dedup();
        if names.len() > 64 {
            return None;
        }
        let scope = Scope { names };
        let sparse = |e: &InfoExpr| -> Vec<(Mask, Rational)> {
            e.terms()
                .iter()
                .map(|(a, c)| (scope.mask(a), c.clone()))
                .collect()
        };

        let mut rate_vars: Vec<RateVar> = vars.to_vec();
        for v in target
            .coeffs
            .keys()
            .chain(premises.iter().flat_map(|p| p.coeffs.keys()))
        {
            if !rate_vars.contains(v) {
                rate_vars.push(v.clone());
            }
        }
        let nr = rate_vars.len();
        let mut atom_row: HashMap<Mask, usize> = HashMap::new();
        let mut atom_of_row: Vec<Mask> = Vec::new();
        let mut row_of = |m: Mask, atom_row: &mut HashMap<Mask, usize>| -> usize {
            *atom_row.entry(m).or_insert_with(|| {
                atom_of_row.push(m);
                nr + atom_of_row.len() - 1
            })
        };

        // columns as sparse (row, value) lists; the unit row is usize::MAX until rows are known
        const UNIT: usize = usize::MAX;
        let mut cols: Vec<(Col, Vec<(usize, Rational)>)> = Vec::new();
        let mut present: Vec<Mask> = Vec::new();
        let mut target_entries: Vec<(usize, Rational)> = Vec::new();
        for (v, c) in &target.coeffs {
            target_entries.push((rate_vars.iter().position(|r| r == v).unwrap(), c.clone()));
        }
        for (m, c) in sparse(&target.rhs) {
            present.push(m);
            target_entries.push((row_of(m, &mut atom_row), c));
        }
        if !target.rhs.constant_term().is_zero() {
            target_entries.push((UNIT, target.rhs.constant_term().clone()));
        }
        for (i, p) in premises.iter().enumerate() {
            let mut e = Vec::new();
            for (v, c) in &p.coeffs {
                e.push((rate_vars.iter().position(|r| r == v).unwrap(), c.clone()));
            }
            for (m, c) in sparse(&p.rhs) {
                present.push(m);
                e.push((row_of(m, &mut atom_row), c));
            }
            if !p.rhs.constant_term().is_zero() {
                e.push((UNIT, p.rhs.constant_term().clone()));
            }
            cols.push((Col::Premise(i), e));
        }
        for r in 0..nr {
            cols.push((Col::Nonneg(r), vec![(r, rational::int(-1))]));
        }
        cols.push((Col::Slack, vec![(UNIT, rational::int(1))]));

        if self.mode == Mode::FarkasShannon {
            present.sort_unstable();
            present.dedup();
            let one = rational::int(1);
            let neg_one = rational::int(-1);
            for (ia, &a) in present.iter().enumerate() {
                cols.push((
                    Col::Shannon(ShannonColumn::Nonneg(scope.atom(a))),
                    vec![(row_of(a, &mut atom_row), one.clone())],
                ));
                for &b in &present[ia + 1..] {
                    let (sub, sup) = if a & b == a {
                        (a, b)
                    } else if a & b == b {
                        (b, a)
                    } else {
                        (0, 0)
                    };
                    if sup != 0 {
                        cols.push((
                            Col::Shannon(ShannonColumn::Monotone {
                                sub: scope.atom(sub),
                                sup: scope.atom(sup),
                            }),
                            vec![
                                (row_of(sup, &mut atom_row), one.clone()),
                                (row_of(sub, &mut atom_row), neg_one.clone()),
                            ],
                        ));
                        continue;
                    }
                    let mut e = vec![
                        (row_of(a, &mut atom_row), one.clone()),
                        (row_of(b, &mut atom_row), one.clone()),
                        (row_of(a | b, &mut atom_row), neg_one.clone()),
                    ];
                    if a & b != 0 {
                        e.push((row_of(a & b, &mut atom_row), neg_one.clone()));
                    }
                    let (aa, bb) = (scope.atom(a), scope.atom(b));
                    if self.independent(&scope, a & !b, b & !a, a & b) {
                        let neg: Vec<(usize, Rational)> = e.iter().map(|(r, v)| (*r, -v)).collect();
                        cols.push((
                            Col::Shannon(ShannonColumn::Independence {
                                a: aa.clone(),
                                b: bb.clone(),
                                negated: false,
                            }),
                            e,
                        ));
                        cols.push((
                            Col::Shannon(ShannonColumn::Independence {
                                a: aa,
                                b: bb,
                                negated: true,
                            }),
                            neg,
                        ));
                    } else {
                        cols.push((Col::Shannon(ShannonColumn::Submodular { a: aa, b: bb }), e));
                    }
                }
            }
        }

        let unit_row = nr + atom_of_row.len();
        let n_rows = unit_row + 1;
        let fix = |r: usize| if r == UNIT { unit_row } else { r };
        let mut b = vec![Rational::zero(); n_rows];
        for (r, v) in &target_entries {
            b[fix(*r)] += v;
        }
        let cols: Vec<(Col, Vec<(usize, Rational)>)> = cols
            .into_iter()
            .map(|(c, e)| (c, e.into_iter().map(|(r, v)| (fix(r), v)).collect()))
            .collect();

        let active = presolve(&cols, &b, n_rows)?;
        let y = solve_exact(&cols, &active, &b, n_rows)?;

        let mut cert = Certificate {
            target: target.clone(),
            premises: Vec::new(),
            nonneg: Vec::new(),
            shannon: Vec::new(),
            slack: Rational::zero(),
        };
        for (j, val) in y {
            match &cols[j].0 {
                Col::Premise(i) => cert.premises.push(((*premises[*i]).clone(), val)),
                Col::Nonneg(r) => cert.nonneg.push((rate_vars[*r].clone(), val)),
                Col::Shannon(s) => cert.shannon.push((s.clone(), val)),
                Col::Slack => cert.slack = val,
            }
        }
        debug_assert!(cert.verify(), "exact certificate failed verification");
        cert.verify().then_some(cert)
    }
}

/// Drops columns forced to zero: in a row with zero target whose active
/// entries all share one sign, every such column must vanish. Returns
/// `None` when some row with nonzero target loses all its columns.
fn presolve(
    cols: &[(Col, Vec<(usize, Rational)>)],
    b: &[Rational],
    n_rows: usize,
) -> Option<Vec<bool>> {
    let mut active = vec![true; cols.len()];
    let mut by_row: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n_rows];
    for (j, (_, e)) in cols.iter().enumerate() {
        for (r, v) in e {
            by_row[*r].push((j, v.is_positive()));
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for (r, entries) in by_row.iter().enumerate() {
            let live: Vec<&(usize, bool)> = entries.iter().filter(|(j, _)| active[*j]).collect();
            if live.is_empty() {
                if !b[r].is_zero() {
                    return None;
                }
                continue;
            }
            let all_pos = live.iter().all(|(_, p)| *p);
            let all_neg = live.iter().all(|(_, p)| !*p);
            let kill = (b[r].is_zero() && (all_pos || all_neg))
                || (b[r].is_positive() && all_neg)
                || (b[r].is_negative() && all_pos);
            if kill {
                if !b[r].is_zero() {
                    return None;
                }
                for (j, _) in live {
                    active[*j] = false;
                }
                changed = true;
            }
        }
    }
    Some(active)
}

fn solve_exact(
    cols: &[(Col, Vec<(usize, Rational)>)],
    active: &[bool],
    b: &[Rational],
    n_rows: usize,
) -> Option<Vec<(usize, Rational)>> {
    let idx: Vec<usize> = (0..cols.len()).filter(|&j| active[j]).collect();
    let used_rows: Vec<usize> = {
        let mut touched = vec![false; n_rows];
        for &j in &idx {
            for (r, _) in &cols[j].1 {
                touched[*r] = true;
            }
        }
        (0..n_rows).filter(|&r| touched[r]).collect()
    };
    if (0..n_rows).any(|r| !b[r].is_zero() && !used_rows.contains(&r)) {
        return None;
    }
    let row_pos: HashMap<usize, usize> =
        used_rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();

    let mut pb = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Variable> = idx
        .iter()
        .map(|_| pb.add_var(1.0, (0.0, f64::INFINITY)))
        .collect();
    let mut rows: Vec<Vec<(Variable, f64)>> = vec![Vec::new(); used_rows.len()];
    for (k, &j) in idx.iter().enumerate() {
        for (r, v) in &cols[j].1 {
            rows[row_pos[r]].push((vars[k], rational::to_f64(v)));
        }
    }
    for (i, row) in rows.into_iter().enumerate() {
        pb.add_constraint(row, ComparisonOp::Eq, rational::to_f64(&b[used_rows[i]]));
    }
    let sol = pb.solve().ok()?.into_solution().ok()?;
    let values: Vec<f64> = vars.iter().map(|v| sol.var_value(*v)).collect();

    for tol in [SUPPORT_TOL, 1e-7, 1e-12] {
        let support: Vec<usize> = (0..idx.len()).filter(|&k| values[k] > tol).collect();
        if let Some(y) = exact_on_support(cols, &idx, &support, b, &used_rows, &row_pos) {
            return Some(y);
        }
    }
    None
}

/// Solves the equality system restricted to `support` columns exactly and
/// accepts the solution only if it is nonnegative.
fn exact_on_support(
    cols: &[(Col, Vec<(usize, Rational)>)],
    idx: &[usize],
    support: &[usize],
    b: &[Rational],
    used_rows: &[usize],
    row_pos: &HashMap<usize, usize>,
) -> Option<Vec<(usize, Rational)>> {
    let m = used_rows.len();
    let k = support.len();
    let mut a = vec![vec![Rational::zero(); k + 1]; m];
    for (c, &s) in support.iter().enumerate() {
        for (r, v) in &cols[idx[s]].1 {
            a[row_pos[r]][c] = v.clone();
        }
    }
    for (i, &r) in used_rows.iter().enumerate() {
        a[i][k] = b[r].clone();
    }
    // reduced row echelon form
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..k {
        let Some(p) = (row..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Rational::one() / &a[row][c];
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m {
            if i != row && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for cc in c..=k {
                    let delta = &f * &a[row][cc];
                    a[i][cc] -= delta;
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == m {
            break;
        }
    }
    if a[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut y = Vec::new();
    for (i, &c) in pivots.iter().enumerate() {
        let v = a[i][k].clone();
        if v.is_negative() {
            return None;
        }
        if !v.is_zero() {
            y.push((idx[support[c]], v));
        }
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::mutual_info_expr;

    #[test]
    fn shannon_mode_proves_mutual_information_nonnegative() {
        let i = mutual_info_expr(&["X"], &["Y"], &["Z"]).unwrap();
        let target = LinIneq::assumption(i.clone());
        let farkas = Certifier::new(Mode::Farkas, None);
        assert!(farkas.implied(&target, &[], &[]).is_none());
        let shannon = Certifier::new(Mode::FarkasShannon, None);
        let c = shannon.implied(&target, &[], &[]).unwrap();
        assert!(c.verify());
        // the converse needs an independence
        let rev = LinIneq::assumption(i.neg());
        assert!(shannon.implied(&rev, &[], &[]).is_none());
        let t = Template::parse("Z; X|Z; Y|Z");
        let with_ci = Certifier::new(Mode::FarkasShannon, Some(&t));
        assert!(with_ci.implied(&rev, &[], &[]).is_some());
    }

    #[test]
    fn markov_chain_gives_conditional_independence_equality() {
        // I(X;Z|Y) = 0 on X - Y - Z, but not on the collider X -> Z <- Y
        let cmi = mutual_info_expr(&["X"], &["Z"], &["Y"]).unwrap();
        let chain = Template::parse("X; Y|X; Z|Y");
        let c = Certifier::new(Mode::FarkasShannon, Some(&chain));
        assert!(c
            .implied(&LinIneq::assumption(cmi.neg()), &[], &[])
            .is_some());
        assert!(c.equivalent(&cmi, &InfoExpr::zero(), &[]));
        let collider = Template::parse("X; Y; Z|X,Y");
        let c = Certifier::new(Mode::FarkasShannon, Some(&collider));
        assert!(c
            .implied(&LinIneq::assumption(cmi.neg()), &[], &[])
            .is_none());
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let c = Certifier::new(Mode::FarkasShannon, None);
        let target = LinIneq::assumption(InfoExpr::h(&["A", "B"]).sub(&InfoExpr::h(&["A"])));
        let mut cert = c.implied(&target, &[], &[]).unwrap();
        assert!(cert.verify());
        cert.slack += rational::int(1);
        assert!(!cert.verify());
    }
}
