//! Named regions: builtin systems, evaluation on joints, derivation from the
//! raw proof systems, envelope search and bound comparison.

mod builtin;
mod search;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::dist::{Binding, JointPmf, Template};
use crate::dsl;
use crate::error::{Error, Result};
use crate::info::{EntropyCache, InfoExpr};
use crate::poly::{
    fm_eliminate, numeric_region, symbolic_equal, Certificate, EliminationStep, FmOptions,
    IneqSystem, LinIneq, Mode, NumericRegion, RateVar, Witness,
};
use crate::rational::{self, Rational};

pub use search::{
    check_remark2, compare_bounds, random_joint, random_joint_with, remark2_sweep, search_envelope,
    AuxSearchConfig, ContainmentReport, DirectionGap, EnvelopePoint, RegionEnvelope, Remark2Report,
    Remark2Sweep, Sampler,
};

/// Tolerance on the factorization residual of a joint handed to [`evaluate`].
pub const FACTORIZATION_TOL: f64 = 1e-9;
/// Assumption values below `-ASSUMPTION_TOL` are reported as violated.
pub const ASSUMPTION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegionId {
    Thm1Inner,
    Cor1DegradedInner,
    Thm2OuterDegraded,
    Thm3SwitchCapacity,
    Thm4OuterGeneral,
    Thm5NoiselessSwitch,
    Thm7StrongRaw,
    Thm7StrongReduced,
    Thm8Macwt,
    AppbRaw,
    AppcRaw,
}

impl RegionId {
    pub const ALL: [RegionId; 11] = [
        RegionId::Thm1Inner,
        RegionId::Cor1DegradedInner,
        RegionId::Thm2OuterDegraded,
        RegionId::Thm3SwitchCapacity,
        RegionId::Thm4OuterGeneral,
        RegionId::Thm5NoiselessSwitch,
        RegionId::Thm7StrongRaw,
        RegionId::Thm7StrongReduced,
        RegionId::Thm8Macwt,
        RegionId::AppbRaw,
        RegionId::AppcRaw,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RegionId::Thm1Inner => "THM1_INNER",
            RegionId::Cor1DegradedInner => "COR1_DEGRADED_INNER",
            RegionId::Thm2OuterDegraded => "THM2_OUTER_DEGRADED",
            RegionId::Thm3SwitchCapacity => "THM3_SWITCH_CAPACITY",
            RegionId::Thm4OuterGeneral => "THM4_OUTER_GENERAL",
            RegionId::Thm5NoiselessSwitch => "THM5_NOISELESS_SWITCH",
            RegionId::Thm7StrongRaw => "THM7_STRONG_RAW",
            RegionId::Thm7StrongReduced => "THM7_STRONG_REDUCED",
            RegionId::Thm8Macwt => "THM8_MACWT",
            RegionId::AppbRaw => "APPB_RAW",
            RegionId::AppcRaw => "APPC_RAW",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            RegionId::Thm1Inner => "weak-secrecy inner bound, general channel",
            RegionId::Cor1DegradedInner => "inner bound for the degraded channel",
            RegionId::Thm2OuterDegraded => "outer bound for the degraded channel",
            RegionId::Thm3SwitchCapacity => "capacity of the degraded switch channel",
            RegionId::Thm4OuterGeneral => "outer bound, general channel",
            RegionId::Thm5NoiselessSwitch => "capacity of the noiseless switch channel",
            RegionId::Thm7StrongRaw => "strong-secrecy constraints before elimination",
            RegionId::Thm7StrongReduced => {
                "strong-secrecy constraints with the redundant ones dropped"
            }
            RegionId::Thm8Macwt => "multiple access wiretap region",
            RegionId::AppbRaw => "multiple access wiretap proof constraints",
            RegionId::AppcRaw => "weak-secrecy proof constraints",
        }
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegionId {
    type Err = Error;

    /// Accepts the full id or its leading component (`THM1`, `APPB`).
    fn from_str(s: &str) -> Result<Self> {
        let up = s.trim().to_ascii_uppercase();
        if let Some(id) = RegionId::ALL.iter().find(|id| id.as_str() == up) {
            return Ok(*id);
        }
        let short: Vec<RegionId> = RegionId::ALL
            .iter()
            .copied()
            .filter(|id| id.as_str().split('_').next() == Some(up.as_str()))
            .collect();
        match short.as_slice() {
            [one] => Ok(*one),
            _ => Err(Error::UnknownRegion(s.to_string())),
        }
    }
}

/// Which side of `tau1 = tau2` a parameterized branch covers. The branch's
/// right-hand sides are multiplied by the positive part of the difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guard {
    Tau1AtLeastTau2,
    Tau2AtLeastTau1,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Branch {
    pub guard: Guard,
    pub system: IneqSystem,
}

/// Channel parameters for the parameterized regions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default)]
    pub tau1: Option<f64>,
    #[serde(default)]
    pub tau2: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionSpec {
    pub id: RegionId,
    /// For parameterized regions this is the first branch.
    pub system: IneqSystem,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub branches: Vec<Branch>,
    pub template: Template,
    /// Output symbols produced by the channel.
    pub outputs: Vec<String>,
    /// Default elimination order for raw systems.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eliminate: Vec<RateVar>,
    /// Published system the raw one should reduce to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<RegionId>,
}

impl RegionSpec {
    /// Factors of the template that do not involve channel outputs.
    pub fn aux_template(&self) -> Template {
        Template {
            factors: self
                .template
                .factors
                .iter()
                .filter(|f| !f.targets.iter().any(|t| self.outputs.contains(t)))
                .cloned()
                .collect(),
        }
    }

    pub fn is_parameterized(&self) -> bool {
        !self.branches.is_empty()
    }

    /// The system in force for `params`; for parameterized regions the
    /// matching branch with every right-hand side scaled.
    pub fn instantiate(&self, params: &Params) -> Result<IneqSystem> {
        if self.branches.is_empty() {
            return Ok(self.system.clone());
        }
        let (Some(t1), Some(t2)) = (params.tau1, params.tau2) else {
            return Err(Error::InvalidConfig(format!(
                "{} needs tau1 and tau2",
                self.id
            )));
        };
        let (t1, t2) = (decimal(t1)?, decimal(t2)?);
        let (guard, scale) = if t1 >= t2 {
            (Guard::Tau1AtLeastTau2, &t1 - &t2)
        } else {
            (Guard::Tau2AtLeastTau1, &t2 - &t1)
        };
        let branch = self
            .branches
            .iter()
            .find(|b| b.guard == guard)
            .expect("both branches present");
        let mut sys = branch.system.clone();
        for i in sys.ineqs.iter_mut() {
            i.rhs = i.rhs.scale(&scale);
        }
        Ok(sys)
    }

    /// Text form; parameterized regions list each branch under a comment.
    pub fn emit(&self) -> String {
        if self.branches.is_empty() {
            return dsl::format_system(&self.system);
        }
        let mut out = String::new();
        for b in &self.branches {
            let g = match b.guard {
                Guard::Tau1AtLeastTau2 => {
                    "# branch tau1 >= tau2, right-hand sides scaled by tau1 - tau2\n"
                }
                Guard::Tau2AtLeastTau1 => {
                    "# branch tau2 >= tau1, right-hand sides scaled by tau2 - tau1\n"
                }
            };
            out += g;
            out += &dsl::format_system(&b.system);
            out.push('\n');
        }
        out
    }
}

/// Exact rational from the shortest decimal that prints as `v`, so that
/// `0.7 - 0.3` is exactly `2/5`.
pub fn decimal(v: f64) -> Result<Rational> {
    if !v.is_finite() {
        return Err(Error::InvalidConfig(format!("non-finite parameter {v}")));
    }
    rational::parse(&format!("{v}"))
}

fn parse_builtin(text: &str) -> IneqSystem {
    dsl::parse_system(text).unwrap_or_else(|e| panic!("builtin system does not parse: {e}"))
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

pub fn builtin_system(id: RegionId) -> RegionSpec {
    use RegionId::*;
    let text = match id {
        Thm1Inner => builtin::thm1(),
        Cor1DegradedInner => builtin::cor1(),
        Thm2OuterDegraded => builtin::thm2(),
        Thm3SwitchCapacity => builtin::thm3(),
        Thm4OuterGeneral => builtin::thm4(),
        Thm5NoiselessSwitch => builtin::thm5_first(),
        Thm7StrongRaw => builtin::thm7_raw(),
        Thm7StrongReduced => builtin::thm7_reduced(),
        Thm8Macwt => builtin::thm8(),
        AppbRaw => builtin::appb_raw(),
        AppcRaw => builtin::appc_raw(),
    };
    let system = parse_builtin(&text);
    let template = system
        .template
        .clone()
        .expect("builtin systems carry a template");
    let branches = if id == Thm5NoiselessSwitch {
        vec![
            Branch {
                guard: Guard::Tau1AtLeastTau2,
                system: system.clone(),
            },
            Branch {
                guard: Guard::Tau2AtLeastTau1,
                system: parse_builtin(&builtin::thm5_second()),
            },
        ]
    } else {
        Vec::new()
    };
    let outputs = match id {
        Thm8Macwt | AppbRaw => names(&["Y", "Z"]),
        _ => names(&["Y1", "Y2", "Z"]),
    };
    let (eliminate, target) = match id {
        AppbRaw => (names(&["R11", "R12", "R21", "R22"]), Some(Thm8Macwt)),
        AppcRaw => (
            names(&[
                "R1'", "R1''", "R2'", "R2''", "T1", "T2", "S1", "S2", "Rt1", "Rt2",
            ]),
            Some(Thm1Inner),
        ),
        Thm7StrongRaw | Thm7StrongReduced => (
            names(&["Rt1", "Rt2", "Rt1'", "Rt2'", "Rt1''", "Rt2''"]),
            None,
        ),
        _ => (Vec::new(), None),
    };
    RegionSpec {
        id,
        system,
        branches,
        template,
        outputs,
        eliminate,
        target,
    }
}

/// Decoding constraints left out of the strong-secrecy region statement.
pub fn thm7_omitted_decoding() -> IneqSystem {
    let mut sys = parse_builtin(&builtin::thm7_omitted_decoding());
    sys.template = Some(Template::parse(builtin::THM7_TEMPLATE));
    sys
}

// ---------------------------------------------------------------------------

/// A numeric region together with what was checked on the way.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Evaluation {
    pub region: NumericRegion,
    /// `None` when the joint does not cover the template.
    pub factorization_residual: Option<f64>,
    pub assumptions_hold: bool,
    pub origin_feasible: bool,
    pub warnings: Vec<String>,
}

impl Evaluation {
    /// Largest `R1` and `R2` over a planar region.
    pub fn maxima(&self) -> Option<[f64; 2]> {
        let v = self.region.vertices.as_ref()?;
        Some([
            v.iter().map(|p| p[0]).fold(0.0, f64::max),
            v.iter().map(|p| p[1]).fold(0.0, f64::max),
        ])
    }
}

/// Evaluates `spec` on `joint`, whose variables are bound to the region's
/// symbols through `binding` (unbound symbols map to the variable of the
/// same name). A symbol absent from both is treated as constant.
///
/// Fails when the joint does not factor along the template; assumption
/// violations and clamped rows are reported as warnings.
pub fn evaluate(
    spec: &RegionSpec,
    joint: &JointPmf,
    binding: &Binding,
    params: &Params,
) -> Result<Evaluation> {
    let sys = spec.instantiate(params)?;
    evaluate_system(&sys, Some(&spec.template), joint, binding)
}

/// [`evaluate`] for an arbitrary system.
pub fn evaluate_system(
    sys: &IneqSystem,
    template: Option<&Template>,
    joint: &JointPmf,
    binding: &Binding,
) -> Result<Evaluation> {
    let mut warnings = Vec::new();
    let used: BTreeSet<String> = sys.all().flat_map(|i| i.rhs.variables()).collect();
    let mut symbols = used.clone();
    if let Some(t) = template {
        symbols.extend(t.variables());
    }
    let mut full = binding.clone();
    for s in &symbols {
        if !full.contains_key(s) && !joint.contains(s) {
            if s != "Q" && used.contains(s) {
                warnings.push(format!("{s} is not in the joint; treated as constant"));
            }
            full.insert(s.clone(), Vec::new());
        }
    }
    let symbols: Vec<String> = symbols.into_iter().collect();
    let bound = joint.bind(&full, &symbols)?;
    let residual = match template {
        Some(t) => {
            let r = bound.factorization_residual(t)?;
            if r > FACTORIZATION_TOL {
                return Err(Error::InvalidDistribution(format!(
                    "joint does not factor as {} (residual {r:.3e})",
                    dsl::format_template(t)
                )));
            }
            Some(r)
        }
        None => None,
    };
    let region = numeric_region(sys, &bound)?;
    let assumptions_hold = region.assumptions_hold(ASSUMPTION_TOL);
    for (tag, v) in &region.assumption_values {
        if *v < -ASSUMPTION_TOL {
            warnings.push(format!(
                "assumption {} violated by {:.3e}",
                tag.as_deref().unwrap_or("(untagged)"),
                -v
            ));
        }
    }
    for &k in &region.clamped {
        warnings.push(format!(
            "bound {} is negative; raised to zero",
            region.tags[k].as_deref().unwrap_or("(untagged)")
        ));
    }
    let origin_feasible = region.rows.iter().all(|(_, b)| *b >= -ASSUMPTION_TOL);
    if !origin_feasible {
        warnings.push("the origin violates a bound with mixed-sign coefficients".into());
    }
    Ok(Evaluation {
        region,
        factorization_residual: residual,
        assumptions_hold,
        origin_feasible,
        warnings,
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub target: String,
    pub equal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Derivation {
    pub system: IneqSystem,
    pub steps: Vec<EliminationStep>,
    pub certificates: Vec<Certificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    pub elapsed_ms: u128,
}

/// Eliminates `eliminate` from `raw` and compares with `target` when given.
pub fn derive(
    raw: &IneqSystem,
    eliminate: &[RateVar],
    mode: Mode,
    target: Option<(&str, &IneqSystem)>,
) -> Result<Derivation> {
    let start = Instant::now();
    let elim = fm_eliminate(raw, eliminate, FmOptions { mode, prune: true })?;
    let verdict = target.map(|(name, t)| {
        let r = symbolic_equal(&elim.system, t);
        Verdict {
            target: name.to_string(),
            equal: r.is_ok(),
            witness: r.err(),
        }
    });
    Ok(Derivation {
        system: elim.system,
        steps: elim.steps,
        certificates: elim.certificates,
        verdict,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Runs the default elimination of a raw builtin system (or `eliminate` when
/// given) and compares with its published target.
pub fn derive_from_raw(
    id: RegionId,
    eliminate: Option<&[RateVar]>,
    mode: Mode,
) -> Result<Derivation> {
    let spec = builtin_system(id);
    let order = eliminate.unwrap_or(&spec.eliminate);
    if order.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "{id} has no default elimination order"
        )));
    }
    let target = spec.target.map(builtin_system);
    derive(
        &spec.system,
        order,
        mode,
        target.as_ref().map(|t| (t.id.as_str(), &t.system)),
    )
}

// ---------------------------------------------------------------------------

/// Substitutes symbols in every right-hand side (an empty tuple makes a
/// symbol constant) and drops assumptions that become trivially true.
pub fn reduce(sys: &IneqSystem, map: &Binding) -> IneqSystem {
    let sub = |i: &LinIneq| LinIneq {
        coeffs: i.coeffs.clone(),
        rhs: i.rhs.substitute(map),
        tag: i.tag.clone(),
    };
    IneqSystem {
        vars: sys.vars.clone(),
        ineqs: sys.ineqs.iter().map(sub).collect(),
        assumptions: sys
            .assumptions
            .iter()
            .map(sub)
            .filter(|a| !(a.rhs.terms().is_empty() && a.rhs.constant_term() >= &Rational::zero()))
            .collect(),
        template: None,
    }
}

/// Special cases of the general channel obtained by identifying symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// No eavesdropper, no auxiliaries: compound multiple access channel.
    CompoundMac,
    /// One legitimate receiver, auxiliaries collapsed: multiple access wiretap.
    MacWiretap,
    /// One transmitter, one legitimate receiver: broadcast with a
    /// confidential message.
    ConfidentialBroadcast,
}

impl Reduction {
    pub fn binding(self) -> Binding {
        let mut m = Binding::new();
        let mut put = |k: &str, v: &[&str]| {
            m.insert(k.to_string(), names(v));
        };
        match self {
            Reduction::CompoundMac => {
                put("Z", &[]);
                put("Q", &[]);
                for u in ["U0", "U1", "U2"] {
                    put(u, &["X1"]);
                }
                for v in ["V0", "V1", "V2"] {
                    put(v, &["X2"]);
                }
            }
            Reduction::MacWiretap => {
                put("Y2", &["Y1"]);
                for u in ["U0", "U1", "U2"] {
                    put(u, &["U"]);
                }
                for v in ["V0", "V1", "V2"] {
                    put(v, &["V"]);
                }
            }
            Reduction::ConfidentialBroadcast => {
                put("Y2", &["Y1"]);
                put("X2", &[]);
                for v in ["V0", "V1", "V2"] {
                    put(v, &[]);
                }
                for u in ["U0", "U1", "U2"] {
                    put(u, &["U"]);
                }
            }
        }
        m
    }
}

// ---------------------------------------------------------------------------

/// Capacity of the noiseless switch: `((tau1-tau2)+ H(X1), (tau2-tau1)+ H(X2))`.
pub fn thm5_capacity(
    tau1: &Rational,
    tau2: &Rational,
    h_x1: &Rational,
    h_x2: &Rational,
) -> (Rational, Rational) {
    let pos = |d: Rational| {
        if d > Rational::zero() {
            d
        } else {
            Rational::zero()
        }
    };
    (pos(tau1 - tau2) * h_x1, pos(tau2 - tau1) * h_x2)
}

/// Floating form of [`thm5_capacity`] with the entropies computed from the
/// input marginals; parameters are read as decimals.
pub fn thm5_capacity_f64(tau1: f64, tau2: f64, px1: &[f64], px2: &[f64]) -> Result<(f64, f64)> {
    let h = |p: &[f64]| -> Result<Rational> {
        // uniform marginals over a power of two have an exact entropy
        let k = p.len();
        let uniform = p.iter().all(|x| (x - 1.0 / k as f64).abs() < 1e-15);
        if uniform && k.is_power_of_two() {
            return Ok(rational::int(k.trailing_zeros() as i64));
        }
        rational::from_f64(crate::info::entropy_of(p))
    };
    let (r1, r2) = thm5_capacity(&decimal(tau1)?, &decimal(tau2)?, &h(px1)?, &h(px2)?);
    Ok((rational::to_f64(&r1), rational::to_f64(&r2)))
}

/// Value of every right-hand side of `sys` on `joint`, in order.
pub fn rhs_values(sys: &IneqSystem, joint: &JointPmf) -> Result<Vec<f64>> {
    let mut cache = EntropyCache::new(joint);
    sys.ineqs.iter().map(|i| cache.eval(&i.rhs)).collect()
}

/// `true` when `e` mentions only the listed symbols.
pub fn expr_within(e: &InfoExpr, symbols: &[String]) -> bool {
    e.variables().iter().all(|v| symbols.contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::VariableSpec;

    #[test]
    fn ids_parse_and_list() {
        for id in RegionId::ALL {
            assert_eq!(id.as_str().parse::<RegionId>().unwrap(), id);
        }
        assert_eq!("thm8".parse::<RegionId>().unwrap(), RegionId::Thm8Macwt);
        assert!("THM7".parse::<RegionId>().is_err()); // ambiguous
        assert!("THM9".parse::<RegionId>().is_err());
    }

    #[test]
    fn builtin_counts_and_tags() {
        let count = |id| {
            let s = builtin_system(id);
            (s.system.ineqs.len(), s.system.assumptions.len())
        };
        assert_eq!(count(RegionId::Thm8Macwt), (6, 0));
        assert_eq!(count(RegionId::Thm1Inner), (8, 1));
        assert_eq!(count(RegionId::Cor1DegradedInner), (3, 0));
        assert_eq!(count(RegionId::AppbRaw), (13, 0));
        assert_eq!(count(RegionId::AppcRaw), (18, 0));
        for id in RegionId::ALL {
            let s = builtin_system(id);
            for i in s.system.all() {
                assert!(i.tag.is_some(), "{id}: untagged {i}");
            }
            for v in s.system.all().flat_map(|i| i.rhs.variables()) {
                assert!(
                    s.template.variables().contains(&v),
                    "{id}: {v} outside the template"
                );
            }
        }
    }

    #[test]
    fn builtin_text_round_trips() {
        for id in RegionId::ALL {
            let s = builtin_system(id);
            let again = dsl::parse_system(&dsl::format_system(&s.system)).unwrap();
            assert_eq!(again, s.system, "{id}");
        }
    }

    #[test]
    fn thm5_branch_scaling() {
        let spec = builtin_system(RegionId::Thm5NoiselessSwitch);
        let sys = spec
            .instantiate(&Params {
                tau1: Some(0.7),
                tau2: Some(0.3),
            })
            .unwrap();
        let expect = InfoExpr::h(&["X1"]).scale(&rational::frac(2, 5));
        assert_eq!(sys.ineqs[0].rhs, expect);
        assert!(sys.ineqs[1].rhs.is_zero());
        assert!(spec.instantiate(&Params::default()).is_err());
        let (r1, r2) = thm5_capacity_f64(0.7, 0.3, &[0.5, 0.5], &[0.5, 0.5]).unwrap();
        assert_eq!((r1, r2), (0.4, 0.0));
    }

    #[test]
    fn thm1_on_noiseless_mac_without_eavesdropper() {
        // Z constant, all auxiliaries equal the inputs, Y1 = Y2 = (X1, X2)
        let x = JointPmf::uniform(vec![VariableSpec::new("X1", 2), VariableSpec::new("X2", 2)])
            .unwrap();
        let mut b = Binding::new();
        for (k, v) in [
            ("U0", "X1"),
            ("U1", "X1"),
            ("U2", "X1"),
            ("V0", "X2"),
            ("V1", "X2"),
            ("V2", "X2"),
        ] {
            b.insert(k.into(), vec![v.into()]);
        }
        b.insert("Y1".into(), names(&["X1", "X2"]));
        b.insert("Y2".into(), names(&["X1", "X2"]));
        b.insert("Z".into(), vec![]);
        let spec = builtin_system(RegionId::Thm1Inner);
        let ev = evaluate(&spec, &x, &b, &Params::default()).unwrap();
        assert!(ev.assumptions_hold);
        let v = ev.region.vertices.unwrap();
        let expect = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert!(crate::poly::regions_match_2d(&v, &expect, 1e-12), "{v:?}");
    }

    #[test]
    fn factorization_mismatch_is_rejected() {
        // X2 depends on X1 although the template makes them independent
        let j = JointPmf::new(
            vec![VariableSpec::new("X1", 2), VariableSpec::new("X2", 2)],
            vec![0.5, 0.0, 0.0, 0.5],
        )
        .unwrap();
        let spec = builtin_system(RegionId::Thm5NoiselessSwitch);
        let p = Params {
            tau1: Some(0.7),
            tau2: Some(0.3),
        };
        assert!(matches!(
            evaluate(&spec, &j, &Binding::new(), &p),
            Err(Error::InvalidDistribution(_))
        ));
    }

    #[test]
    fn compound_mac_reduction_kills_eavesdropper_terms() {
        let sys = reduce(
            &builtin_system(RegionId::Thm1Inner).system,
            &Reduction::CompoundMac.binding(),
        );
        assert!(sys.assumptions.is_empty());
        for i in &sys.ineqs {
            assert!(!i.rhs.variables().contains("Z"));
        }
    }
}
