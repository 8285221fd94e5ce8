//! Finite joint distributions, factorizations and channel builders.
//!
//! A [`JointPmf`] always stores its variables in sorted name order with the
//! first variable varying slowest. Factor tables use the same row-major layout
//! over their listed targets and givens.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SUM_TOL: f64 = 1e-9;

/// Maps a symbolic variable to the joint variables it stands for. An empty list
/// binds the symbol to a constant. Symbols without an entry bind to themselves.
pub type Binding = BTreeMap<String, Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    pub card: usize,
}

impl VariableSpec {
    pub fn new(name: &str, card: usize) -> Self {
        VariableSpec {
            name: name.to_string(),
            card,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "JointPmfRaw")]
pub struct JointPmf {
    variables: Vec<VariableSpec>,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct JointPmfRaw {
    variables: Vec<VariableSpec>,
    probs: Vec<f64>,
}

impl TryFrom<JointPmfRaw> for JointPmf {
    type Error = Error;
    fn try_from(raw: JointPmfRaw) -> Result<Self> {
        JointPmf::new(raw.variables, raw.probs)
    }
}

fn size_of(vars: &[VariableSpec]) -> Result<usize> {
    let mut n: usize = 1;
    for v in vars {
        if v.card == 0 {
            return Err(Error::InvalidDistribution(format!(
                "variable {} has zero cardinality",
                v.name
            )));
        }
        n = n
            .checked_mul(v.card)
            .filter(|&n| n <= 1 << 28)
            .ok_or_else(|| Error::ResourceLimit("joint alphabet too large".into()))?;
    }
    Ok(n)
}

fn check_unique(names: impl IntoIterator<Item = impl AsRef<str>>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in names {
        let n = n.as_ref();
        if !seen.insert(n.to_string()) {
            return Err(Error::InvalidDistribution(format!(
                "variable {n} listed twice"
            )));
        }
    }
    Ok(())
}

fn strides(cards: &[usize]) -> Vec<usize> {
    let mut s = vec![1; cards.len()];
    for i in (0..cards.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * cards[i + 1];
    }
    s
}

/// Reorders a row-major table from `from` variable order to `to` order.
fn permute(from: &[VariableSpec], probs: &[f64], to: &[VariableSpec]) -> Vec<f64> {
    let pos: Vec<usize> = to
        .iter()
        .map(|v| {
            from.iter()
                .position(|f| f.name == v.name)
                .expect("same variable set")
        })
        .collect();
    let from_cards: Vec<usize> = from.iter().map(|v| v.card).collect();
    let from_strides = strides(&from_cards);
    let to_cards: Vec<usize> = to.iter().map(|v| v.card).collect();
    let mut out = vec![0.0; probs.len()];
    let mut digits = vec![0usize; to.len()];
    for slot in out.iter_mut() {
        let src: usize = digits
            .iter()
            .zip(&pos)
            .map(|(d, &p)| d * from_strides[p])
            .sum();
        *slot = probs[src];
        for k in (0..digits.len()).rev() {
            digits[k] += 1;
            if digits[k] < to_cards[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    out
}

impl JointPmf {
    /// Builds a pmf, validating it and moving it into sorted variable order.
    pub fn new(variables: Vec<VariableSpec>, probs: Vec<f64>) -> Result<Self> {
        check_unique(variables.iter().map(|v| &v.name))?;
        let n = size_of(&variables)?;
        if probs.len() != n {
            return Err(Error::InvalidDistribution(format!(
                "expected {n} probabilities, got {}",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::InvalidDistribution(format!("bad probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        let mut sorted = variables.clone();
        sorted.sort_by(|a, b| a.name.cmp(&b.name));
        let probs = if sorted == variables {
            probs
        } else {
            permute(&variables, &probs, &sorted)
        };
        Ok(JointPmf {
            variables: sorted,
            probs,
        })
    }

    pub fn point_mass(variables: Vec<VariableSpec>, values: &[usize]) -> Result<Self> {
        let n = size_of(&variables)?;
        let cards: Vec<usize> = variables.iter().map(|v| v.card).collect();
        if values.len() != cards.len() || values.iter().zip(&cards).any(|(v, c)| v >= c) {
            return Err(Error::InvalidDistribution(
                "point mass value out of range".into(),
            ));
        }
        let idx: usize = values.iter().zip(strides(&cards)).map(|(v, s)| v * s).sum();
        let mut probs = vec![0.0; n];
        probs[idx] = 1.0;
        JointPmf::new(variables, probs)
    }

    pub fn uniform(variables: Vec<VariableSpec>) -> Result<Self> {
        let n = size_of(&variables)?;
        JointPmf::new(variables, vec![1.0 / n as f64; n])
    }

    /// Product of independent pmfs over disjoint variable sets.
    pub fn product(a: &JointPmf, b: &JointPmf) -> Result<Self> {
        let mut vars = a.variables.clone();
        vars.extend(b.variables.iter().cloned());
        let mut probs = Vec::with_capacity(a.probs.len() * b.probs.len());
        for pa in &a.probs {
            for pb in &b.probs {
                probs.push(pa * pb);
            }
        }
        JointPmf::new(vars, probs)
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn cards(&self) -> Vec<usize> {
        self.variables.iter().map(|v| v.card).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .binary_search_by(|v| v.name.as_str().cmp(name))
            .map_err(|_| Error::UnknownVariable(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_ok()
    }

    /// Marginal probabilities over `idx` (positions into the variable list),
    /// laid out row-major in the given order.
    pub fn marginal_by_index(&self, idx: &[usize]) -> Vec<f64> {
        let cards = self.cards();
        let sub_cards: Vec<usize> = idx.iter().map(|&i| cards[i]).collect();
        let sub_strides = strides(&sub_cards);
        let full_strides = strides(&cards);
        let m: usize = sub_cards.iter().product();
        let mut out = vec![0.0; m];
        if idx.is_empty() {
            out[0] = self.probs.iter().sum();
            return out;
        }
        // project every full index onto the sub-index with a precomputed table per variable
        let contrib: Vec<(usize, usize, usize)> = idx
            .iter()
            .zip(&sub_strides)
            .map(|(&i, &s)| (full_strides[i], cards[i], s))
            .collect();
        for (k, p) in self.probs.iter().enumerate() {
            if *p == 0.0 {
                continue;
            }
            let mut j = 0;
            for &(fs, c, ss) in &contrib {
                j += ((k / fs) % c) * ss;
            }
            out[j] += p;
        }
        out
    }

    pub fn marginal_probs(&self, names: &[String]) -> Result<Vec<f64>> {
        let idx = names
            .iter()
            .map(|n| self.index_of(n))
            .collect::<Result<Vec<_>>>()?;
        check_unique(names)?;
        Ok(self.marginal_by_index(&idx))
    }

    pub fn marginalize(&self, keep: &[String]) -> Result<JointPmf> {
        let probs = self.marginal_probs(keep)?;
        let vars = keep
            .iter()
            .map(|n| self.variables[self.index_of(n).unwrap()].clone())
            .collect();
        JointPmf::new(vars, probs)
    }

    /// `p(targets | givens)` as a factor. Rows with zero given-mass are undefined.
    pub fn conditional(&self, targets: &[String], givens: &[String]) -> Result<Factor> {
        let mut all: Vec<String> = givens.to_vec();
        all.extend(targets.iter().cloned());
        let joint = self.marginal_probs(&all)?;
        let t: usize = targets
            .iter()
            .map(|n| self.variables[self.index_of(n).unwrap()].card)
            .product();
        let mut table = joint.clone();
        for (r, row) in table.chunks_mut(t).enumerate() {
            let mass: f64 = row.iter().sum();
            if mass <= 0.0 {
                return Err(Error::UndefinedConditional(format!(
                    "p({} | {}) has a zero-probability conditioning row {r}",
                    targets.join(","),
                    givens.join(",")
                )));
            }
            row.iter_mut().for_each(|p| *p /= mass);
        }
        Ok(Factor {
            targets: targets.to_vec(),
            givens: givens.to_vec(),
            table,
        })
    }

    /// Joint over `symbols`, each bound to a tuple of this pmf's variables.
    /// Two symbols may share variables; an empty binding gives a constant.
    pub fn bind(&self, binding: &Binding, symbols: &[String]) -> Result<JointPmf> {
        check_unique(symbols)?;
        let cards = self.cards();
        let full_strides = strides(&cards);
        let mut sym_vars = Vec::new();
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for s in symbols {
            let bound = match binding.get(s) {
                Some(v) => v.clone(),
                None => vec![s.clone()],
            };
            let idx = bound
                .iter()
                .map(|n| self.index_of(n))
                .collect::<Result<Vec<_>>>()?;
            let card: usize = idx.iter().map(|&i| cards[i]).product();
            sym_vars.push(VariableSpec::new(s, card));
            parts.push(idx);
        }
        let n = size_of(&sym_vars)?;
        let sym_cards: Vec<usize> = sym_vars.iter().map(|v| v.card).collect();
        let sym_strides = strides(&sym_cards);
        let mut probs = vec![0.0; n];
        for (k, p) in self.probs.iter().enumerate() {
            if *p == 0.0 {
                continue;
            }
            let mut j = 0;
            for (part, ss) in parts.iter().zip(&sym_strides) {
                let mut v = 0;
                for &i in part {
                    v = v * cards[i] + (k / full_strides[i]) % cards[i];
                }
                j += v * ss;
            }
            probs[j] += p;
        }
        JointPmf::new(sym_vars, probs)
    }

    /// Decodes a flat index into per-variable values (sorted variable order).
    pub fn decode(&self, mut k: usize) -> Vec<usize> {
        let cards = self.cards();
        let mut out = vec![0; cards.len()];
        for i in (0..cards.len()).rev() {
            out[i] = k % cards[i];
            k /= cards[i];
        }
        out
    }

    /// Largest absolute gap between this pmf and the product of its own
    /// conditionals along `template`.
    pub fn factorization_residual(&self, template: &Template) -> Result<f64> {
        let dag = Dag::from_template(template);
        let names: Vec<String> = dag.names.clone();
        let m = self.marginalize(&names)?;
        let cards = m.cards();
        let order: Vec<usize> = dag.topo_order();
        let mut families = Vec::new();
        for &v in &order {
            let pa: Vec<usize> = (0..dag.len())
                .filter(|&u| dag.parents[v] >> u & 1 == 1)
                .collect();
            let pa_names: Vec<String> = pa.iter().map(|&u| names[u].clone()).collect();
            let mv = m.index_of(&names[v])?;
            let pa_idx = pa_names
                .iter()
                .map(|n| m.index_of(n))
                .collect::<Result<Vec<_>>>()?;
            let mut fam_idx = pa_idx.clone();
            fam_idx.push(mv);
            let fam = m.marginal_by_index(&fam_idx);
            let par = m.marginal_by_index(&pa_idx);
            families.push((fam_idx, fam, par));
        }
        let mut worst: f64 = 0.0;
        for k in 0..m.probs.len() {
            let vals = m.decode(k);
            let mut prod = 1.0;
            for (fam_idx, fam, par) in &families {
                let mut fi = 0;
                let mut pi = 0;
                for (pos, &i) in fam_idx.iter().enumerate() {
                    fi = fi * cards[i] + vals[i];
                    if pos + 1 < fam_idx.len() {
                        pi = pi * cards[i] + vals[i];
                    }
                }
                let denom = par[pi];
                prod *= if denom > 0.0 { fam[fi] / denom } else { 0.0 };
            }
            worst = worst.max((prod - m.probs[k]).abs());
        }
        Ok(worst)
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub targets: Vec<String>,
    #[serde(default)]
    pub givens: Vec<String>,
    pub table: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorizationSpec {
    pub variables: Vec<VariableSpec>,
    pub factors: Vec<Factor>,
}

impl FactorizationSpec {
    pub fn template(&self) -> Template {
        Template {
            factors: self
                .factors
                .iter()
                .map(|f| FactorShape {
                    targets: f.targets.clone(),
                    givens: f.givens.clone(),
                })
                .collect(),
        }
    }
}

/// Multiplies the factors into a joint pmf. Factors must be listed so that
/// every given is produced by an earlier factor.
pub fn compose_joint(spec: &FactorizationSpec) -> Result<JointPmf> {
    check_unique(spec.variables.iter().map(|v| &v.name))?;
    let card_of: HashMap<&str, usize> = spec
        .variables
        .iter()
        .map(|v| (v.name.as_str(), v.card))
        .collect();
    let card = |n: &str| {
        card_of
            .get(n)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(n.to_string()))
    };
    let mut vars: Vec<VariableSpec> = Vec::new();
    let mut probs = vec![1.0];
    for f in &spec.factors {
        for g in &f.givens {
            if !vars.iter().any(|v| &v.name == g) {
                return Err(Error::InvalidDistribution(format!(
                    "given {g} is not produced by an earlier factor"
                )));
            }
        }
        for t in &f.targets {
            if vars.iter().any(|v| &v.name == t) || f.givens.contains(t) {
                return Err(Error::InvalidDistribution(format!(
                    "variable {t} targeted twice"
                )));
            }
        }
        check_unique(&f.targets)?;
        let t_size: usize = f
            .targets
            .iter()
            .map(|n| card(n))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .product();
        let g_cards = f
            .givens
            .iter()
            .map(|n| card(n))
            .collect::<Result<Vec<_>>>()?;
        let g_size: usize = g_cards.iter().product();
        if f.table.len() != t_size * g_size {
            return Err(Error::InvalidDistribution(format!(
                "factor over {} has {} entries, expected {}",
                f.targets.join(","),
                f.table.len(),
                t_size * g_size
            )));
        }
        for row in f.table.chunks(t_size) {
            let s: f64 = row.iter().sum();
            if row.iter().any(|p| !p.is_finite() || *p < 0.0) || (s - 1.0).abs() > SUM_TOL {
                return Err(Error::InvalidDistribution(format!(
                    "a row of the factor over {} sums to {s}",
                    f.targets.join(",")
                )));
            }
        }
        let cur_cards: Vec<usize> = vars.iter().map(|v| v.card).collect();
        let cur_strides = strides(&cur_cards);
        let g_pos: Vec<usize> = f
            .givens
            .iter()
            .map(|g| vars.iter().position(|v| &v.name == g).unwrap())
            .collect();
        let mut next = vec![0.0; probs.len() * t_size];
        for (i, p) in probs.iter().enumerate() {
            if *p == 0.0 {
                continue;
            }
            let mut gi = 0;
            for (&pos, &gc) in g_pos.iter().zip(&g_cards) {
                gi = gi * gc + (i / cur_strides[pos]) % cur_cards[pos];
            }
            let row = &f.table[gi * t_size..(gi + 1) * t_size];
            for (t, q) in row.iter().enumerate() {
                next[i * t_size + t] = p * q;
            }
        }
        probs = next;
        for t in &f.targets {
            vars.push(VariableSpec::new(t, card(t)?));
        }
        size_of(&vars)?;
    }
    for v in &spec.variables {
        if !vars.iter().any(|w| w.name == v.name) {
            return Err(Error::InvalidDistribution(format!(
                "variable {} has no factor",
                v.name
            )));
        }
    }
    // renormalise away accumulated rounding of rows summing to 1 within tolerance
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    JointPmf::new(vars, probs)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorShape {
    pub targets: Vec<String>,
    #[serde(default)]
    pub givens: Vec<String>,
}

/// The shape of a factorization without its tables, e.g. `p(q)p(u0|q)...`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Template {
    pub factors: Vec<FactorShape>,
}

impl Template {
    /// Parses `Q; U0|Q; U1,U2|U0` style shorthand.
    pub fn parse(s: &str) -> Template {
        let split = |x: &str| -> Vec<String> {
            x.split(',')
                .map(|t| t.trim().to_string())
                .filter(|t| !t.is_empty())
                .collect()
        };
        let factors = s
            .split(';')
            .filter(|f| !f.trim().is_empty())
            .map(|f| match f.split_once('|') {
                Some((t, g)) => FactorShape {
                    targets: split(t),
                    givens: split(g),
                },
                None => FactorShape {
                    targets: split(f),
                    givens: vec![],
                },
            })
            .collect();
        Template { factors }
    }

    pub fn variables(&self) -> Vec<String> {
        self.factors
            .iter()
            .flat_map(|f| f.targets.iter().cloned())
            .collect()
    }
}

/// Directed acyclic graph over at most 64 named nodes, parents as bitmasks.
/// Targets of one factor are chained in listed order.
#[derive(Clone, Debug)]
pub struct Dag {
    pub names: Vec<String>,
    pub parents: Vec<u64>,
}

impl Dag {
    pub fn from_template(t: &Template) -> Dag {
        let names = t.variables();
        assert!(names.len() <= 64, "dag limited to 64 nodes");
        let pos = |n: &str| names.iter().position(|m| m == n);
        let mut parents = vec![0u64; names.len()];
        for f in &t.factors {
            let mut mask: u64 = f
                .givens
                .iter()
                .filter_map(|g| pos(g))
                .fold(0, |m, i| m | 1 << i);
            for tname in &f.targets {
                let i = pos(tname).unwrap();
                parents[i] |= mask;
                mask |= 1 << i;
            }
        }
        Dag { names, parents }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn mask_of(&self, vars: &[String]) -> Option<u64> {
        let mut m = 0u64;
        for v in vars {
            m |= 1 << self.names.iter().position(|n| n == v)?;
        }
        Some(m)
    }

    fn topo_order(&self) -> Vec<usize> {
        let mut done = 0u64;
        let mut order = Vec::new();
        while order.len() < self.len() {
            for v in 0..self.len() {
                if done >> v & 1 == 0 && self.parents[v] & !done == 0 {
                    done |= 1 << v;
                    order.push(v);
                }
            }
        }
        order
    }

    /// True when `x` and `y` are d-separated by `z` (all bitmasks over nodes).
    pub fn d_separated(&self, x: u64, y: u64, z: u64) -> bool {
        if x & y != 0 {
            return false;
        }
        // ancestral closure
        let mut anc = x | y | z;
        loop {
            let mut next = anc;
            for v in 0..self.len() {
                if anc >> v & 1 == 1 {
                    next |= self.parents[v];
                }
            }
            if next == anc {
                break;
            }
            anc = next;
        }
        // moral graph restricted to the ancestral set
        let n = self.len();
        let mut adj = vec![0u64; n];
        for v in 0..n {
            if anc >> v & 1 == 0 {
                continue;
            }
            let pa = self.parents[v] & anc;
            adj[v] |= pa;
            for u in 0..n {
                if pa >> u & 1 == 1 {
                    adj[u] |= 1 << v | pa & !(1 << u);
                }
            }
        }
        let mut seen = x;
        let mut frontier = x;
        while frontier != 0 {
            let mut next = 0u64;
            for v in 0..n {
                if frontier >> v & 1 == 1 {
                    next |= adj[v];
                }
            }
            next &= anc & !z & !seen;
            if next & y != 0 {
                return false;
            }
            seen |= next;
            frontier = next;
        }
        true
    }
}

// ---------------------------------------------------------------------------

/// A memoryless channel `p(outputs | inputs)` plus the binding that maps the
/// symbolic outputs used by rate expressions onto its variables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub variables: Vec<VariableSpec>,
    pub factor: Factor,
    #[serde(default)]
    pub binding: Binding,
}

impl ChannelSpec {
    pub fn inputs(&self) -> &[String] {
        &self.factor.givens
    }

    pub fn card(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .find(|v| v.name == name)
            .map(|v| v.card)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Re-expresses the channel over symbolic outputs, e.g. `Y1 = (Yr, S1)`.
    pub fn symbolic(&self, outputs: &[String]) -> Result<ChannelSpec> {
        let inputs = self.inputs().to_vec();
        let in_vars: Vec<VariableSpec> = inputs
            .iter()
            .map(|n| Ok(VariableSpec::new(n, self.card(n)?)))
            .collect::<Result<_>>()?;
        let in_size: usize = in_vars.iter().map(|v| v.card).product();
        let mut table = Vec::new();
        let mut out_vars = Vec::new();
        for row in 0..in_size {
            let mut vals = vec![0; inputs.len()];
            let mut r = row;
            for i in (0..inputs.len()).rev() {
                vals[i] = r % in_vars[i].card;
                r /= in_vars[i].card;
            }
            let mut spec = FactorizationSpec {
                variables: self.variables.clone(),
                factors: vec![],
            };
            for (v, &x) in in_vars.iter().zip(&vals) {
                let mut t = vec![0.0; v.card];
                t[x] = 1.0;
                spec.factors.push(Factor {
                    targets: vec![v.name.clone()],
                    givens: vec![],
                    table: t,
                });
            }
            spec.factors.push(self.factor.clone());
            let joint = compose_joint(&spec)?;
            let mut binding = self.binding.clone();
            for n in &inputs {
                binding.entry(n.clone()).or_insert_with(|| vec![n.clone()]);
            }
            let sym = joint.bind(&binding, outputs)?;
            if out_vars.is_empty() {
                out_vars = outputs
                    .iter()
                    .map(|o| sym.variables[sym.index_of(o).unwrap()].clone())
                    .collect();
            }
            table.extend(sym.marginal_probs(outputs)?);
        }
        let mut variables = out_vars;
        variables.extend(in_vars);
        Ok(ChannelSpec {
            variables,
            factor: Factor {
                targets: outputs.to_vec(),
                givens: inputs,
                table,
            },
            binding: Binding::new(),
        })
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Noiseless switch: the legitimate receivers share switch `S1 ~ Bern(tau1)`
/// and the eavesdropper has `S2 ~ Bern(tau2)`. State 0 connects to
/// transmitter 1. Every receiver observes its own state.
pub fn noiseless_switch_channel(tau1: f64, tau2: f64, card: usize) -> Result<ChannelSpec> {
    for t in [tau1, tau2] {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidConfig(format!(
                "switch probability {t} outside [0,1]"
            )));
        }
    }
    let variables = vec![
        VariableSpec::new("S1", 2),
        VariableSpec::new("S2", 2),
        VariableSpec::new("Yr", card),
        VariableSpec::new("Zr", card),
        VariableSpec::new("X1", card),
        VariableSpec::new("X2", card),
    ];
    let mut table = Vec::new();
    for x1 in 0..card {
        for x2 in 0..card {
            for s1 in 0..2 {
                for s2 in 0..2 {
                    for y in 0..card {
                        for z in 0..card {
                            let ps1 = if s1 == 0 { tau1 } else { 1.0 - tau1 };
                            let ps2 = if s2 == 0 { tau2 } else { 1.0 - tau2 };
                            let yv = if s1 == 0 { x1 } else { x2 };
                            let zv = if s2 == 0 { x1 } else { x2 };
                            table.push(if y == yv && z == zv { ps1 * ps2 } else { 0.0 });
                        }
                    }
                }
            }
        }
    }
    let mut binding = Binding::new();
    binding.insert("Y1".into(), names(&["Yr", "S1"]));
    binding.insert("Y2".into(), names(&["Yr", "S1"]));
    binding.insert("Z".into(), names(&["Zr", "S2"]));
    Ok(ChannelSpec {
        variables,
        factor: Factor {
            targets: names(&["S1", "S2", "Yr", "Zr"]),
            givens: names(&["X1", "X2"]),
            table,
        },
        binding,
    })
}

/// Degraded switch: `S ~ Bern(tau)` selects which input reaches `Y1` through
/// `w1[x1]` or `w2[x2]`; then `Y2 ~ d2[s][y1]` and `Z ~ dz[s][y2]`.
/// Every output is observed together with `S`.
pub fn degraded_switch_channel(
    tau: f64,
    w1: &[Vec<f64>],
    w2: &[Vec<f64>],
    d2: [&[Vec<f64>]; 2],
    dz: [&[Vec<f64>]; 2],
) -> Result<ChannelSpec> {
    let cx1 = w1.len();
    let cx2 = w2.len();
    let cy1 = w1.first().map_or(0, |r| r.len());
    let cy2 = d2[0].first().map_or(0, |r| r.len());
    let cz = dz[0].first().map_or(0, |r| r.len());
    let shape_ok = w2.iter().all(|r| r.len() == cy1)
        && d2
            .iter()
            .all(|m| m.len() == cy1 && m.iter().all(|r| r.len() == cy2))
        && dz
            .iter()
            .all(|m| m.len() == cy2 && m.iter().all(|r| r.len() == cz));
    if !shape_ok || cy1 == 0 || cy2 == 0 || cz == 0 || !(0.0..=1.0).contains(&tau) {
        return Err(Error::InvalidConfig(
            "inconsistent degraded switch matrices".into(),
        ));
    }
    let variables = vec![
        VariableSpec::new("S", 2),
        VariableSpec::new("Y1r", cy1),
        VariableSpec::new("Y2r", cy2),
        VariableSpec::new("Zr", cz),
        VariableSpec::new("X1", cx1),
        VariableSpec::new("X2", cx2),
    ];
    let mut table = Vec::new();
    for x1 in 0..cx1 {
        for x2 in 0..cx2 {
            for s in 0..2 {
                for y1 in 0..cy1 {
                    for y2 in 0..cy2 {
                        for z in 0..cz {
                            let ps = if s == 0 { tau } else { 1.0 - tau };
                            let py1 = if s == 0 { w1[x1][y1] } else { w2[x2][y1] };
                            table.push(ps * py1 * d2[s][y1][y2] * dz[s][y2][z]);
                        }
                    }
                }
            }
        }
    }
    let mut binding = Binding::new();
    binding.insert("Y1".into(), names(&["Y1r", "S"]));
    binding.insert("Y2".into(), names(&["Y2r", "S"]));
    binding.insert("Z".into(), names(&["Zr", "S"]));
    Ok(ChannelSpec {
        variables,
        factor: Factor {
            targets: names(&["S", "Y1r", "Y2r", "Zr"]),
            givens: names(&["X1", "X2"]),
            table,
        },
        binding,
    })
}
