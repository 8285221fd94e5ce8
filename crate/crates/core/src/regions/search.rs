//! Auxiliary-distribution search over the union in an achievable region.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{builtin_system, Params, RegionId, RegionSpec};
use crate::dist::{
    compose_joint, ChannelSpec, Factor, FactorizationSpec, JointPmf, Template, VariableSpec,
};
use crate::error::{Error, Result};
use crate::info::{mutual_info_expr, EntropyCache};
use crate::poly::{hull_2d, numeric_region, IneqSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    DirichletRandom,
    /// Rows on the simplex grid with `grid_resolution` steps, enumerated
    /// exhaustively when the grid has at most `samples` points.
    Grid,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default)]
pub struct AuxSearchConfig {
    /// Per-variable cardinality; `Q` defaults to 1, other auxiliaries to `default_card`.
    pub cardinalities: BTreeMap<String, usize>,
    pub default_card: usize,
    pub sampler: Sampler,
    pub samples: usize,
    pub refinement_passes: usize,
    /// Candidates refined per direction.
    pub refine_top: usize,
    pub golden_iters: usize,
    /// Weights `(lambda1, lambda2)`; empty means `direction_count` directions
    /// spread over the first quadrant.
    pub directions: Vec<[f64; 2]>,
    pub direction_count: usize,
    /// Share of sampled factors whose rows are deterministic.
    pub deterministic_fraction: f64,
    pub grid_resolution: usize,
    /// Samples with an assumption below `-assumption_tol` are skipped.
    pub assumption_tol: f64,
    pub params: Params,
    pub seed: u64,
}

impl Default for AuxSearchConfig {
    fn default() -> Self {
        AuxSearchConfig {
            cardinalities: BTreeMap::new(),
            default_card: 2,
            sampler: Sampler::DirichletRandom,
            samples: 2000,
            refinement_passes: 3,
            refine_top: 1,
            golden_iters: 16,
            directions: Vec::new(),
            direction_count: 9,
            deterministic_fraction: 0.25,
            grid_resolution: 2,
            assumption_tol: 1e-6,
            params: Params::default(),
            seed: 0,
        }
    }
}

impl AuxSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples must be at least 1".into()));
        }
        if self.default_card == 0 || self.cardinalities.values().any(|c| *c == 0) {
            return Err(Error::InvalidConfig(
                "cardinalities must be at least 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.deterministic_fraction) {
            return Err(Error::InvalidConfig(
                "deterministic_fraction must lie in [0,1]".into(),
            ));
        }
        if self.sampler == Sampler::Grid && self.grid_resolution == 0 {
            return Err(Error::InvalidConfig(
                "grid_resolution must be at least 1".into(),
            ));
        }
        if self
            .directions
            .iter()
            .any(|d| d[0] < 0.0 || d[1] < 0.0 || d[0] + d[1] <= 0.0)
        {
            return Err(Error::InvalidConfig(
                "directions must be nonnegative and nonzero".into(),
            ));
        }
        Ok(())
    }

    pub fn weights(&self) -> Vec<[f64; 2]> {
        if !self.directions.is_empty() {
            return self.directions.clone();
        }
        let n = self.direction_count.max(2);
        (0..n)
            .map(|k| {
                let t = std::f64::consts::FRAC_PI_2 * k as f64 / (n - 1) as f64;
                let (s, c) = t.sin_cos();
                // exact axes at the ends
                [
                    if k == n - 1 { 0.0 } else { c },
                    if k == 0 { 0.0 } else { s },
                ]
            })
            .collect()
    }

    fn card(&self, name: &str) -> usize {
        match self.cardinalities.get(name) {
            Some(c) => *c,
            None if name == "Q" => 1,
            None => self.default_card,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub lambda: [f64; 2],
    pub rate: [f64; 2],
    pub value: f64,
    /// Auxiliary and input factors achieving the point.
    pub distribution: FactorizationSpec,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RegionEnvelope {
    /// One point per direction, sorted by increasing `R1`.
    pub points: Vec<EnvelopePoint>,
    pub samples: usize,
    /// Samples dropped because an assumption failed.
    pub excluded: usize,
}

impl RegionEnvelope {
    /// Convex hull of the boundary points and their projections on the axes.
    pub fn polygon(&self) -> Vec<[f64; 2]> {
        let mut pts = vec![[0.0, 0.0]];
        for p in &self.points {
            let [a, b] = p.rate;
            pts.extend([[a, b], [a, 0.0], [0.0, b]]);
        }
        hull_2d(&pts)
    }

    pub fn max_r1(&self) -> f64 {
        self.points.iter().map(|p| p.rate[0]).fold(0.0, f64::max)
    }

    pub fn max_r2(&self) -> f64 {
        self.points.iter().map(|p| p.rate[1]).fold(0.0, f64::max)
    }

    /// `lambda1,lambda2,R1,R2` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda1,lambda2,R1,R2\n");
        for p in &self.points {
            s += &format!(
                "{},{},{},{}\n",
                p.lambda[0], p.lambda[1], p.rate[0], p.rate[1]
            );
        }
        s
    }

    /// Reads the CSV written by [`RegionEnvelope::to_csv`]; distributions are left empty.
    pub fn from_csv(text: &str) -> Result<RegionEnvelope> {
        let mut points = Vec::new();
        for (k, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let v: Vec<f64> = line
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::InvalidConfig(format!("envelope line {}: {e}", k + 1)))?;
            if v.len() != 4 {
                return Err(Error::InvalidConfig(format!(
                    "envelope line {} needs 4 columns",
                    k + 1
                )));
            }
            points.push(EnvelopePoint {
                lambda: [v[0], v[1]],
                rate: [v[2], v[3]],
                value: v[0] * v[2] + v[1] * v[3],
                distribution: FactorizationSpec {
                    variables: vec![],
                    factors: vec![],
                },
            });
        }
        Ok(RegionEnvelope {
            samples: points.len(),
            points,
            excluded: 0,
        })
    }
}

// ---------------------------------------------------------------------------

/// Sampled factor tables with the vertices of the region they give.
type Sample = (Vec<Vec<f64>>, Vec<[f64; 2]>);

fn split_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 on the pair
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn dirichlet_row<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

fn onehot(k: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; k];
    v[i] = 1.0;
    v
}

/// All ways to put `r` units into `k` cells, as probability rows.
fn grid_rows(k: usize, r: usize) -> Vec<Vec<f64>> {
    fn go(k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == k {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=left).rev() {
            cur.push(x);
            go(k, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, r, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|c| c.into_iter().map(|x| x as f64 / r as f64).collect())
        .collect()
}

/// Shape of one sampled factor.
#[derive(Clone, Debug)]
struct Slot {
    targets: Vec<String>,
    givens: Vec<String>,
    rows: usize,
    width: usize,
}

/// Everything fixed across samples.
struct Problem {
    variables: Vec<VariableSpec>,
    slots: Vec<Slot>,
    channel: Factor,
    channel_vars: Vec<VariableSpec>,
    system: IneqSystem,
    symbols: Vec<String>,
    assumption_tol: f64,
}

impl Problem {
    fn new(spec: &RegionSpec, channel: &ChannelSpec, cfg: &AuxSearchConfig) -> Result<Problem> {
        let system = spec.instantiate(&cfg.params)?;
        let sym = channel.symbolic(&spec.outputs)?;
        let aux = spec.aux_template();
        let mut variables: Vec<VariableSpec> = Vec::new();
        for v in aux.variables() {
            let card = if sym.inputs().contains(&v) {
                sym.card(&v)?
            } else {
                cfg.card(&v)
            };
            variables.push(VariableSpec::new(&v, card));
        }
        for x in sym.inputs() {
            if !variables.iter().any(|v| &v.name == x) {
                return Err(Error::InvalidConfig(format!(
                    "channel input {x} is not produced by {}",
                    spec.id
                )));
            }
        }
        let card_of = |n: &str| {
            variables
                .iter()
                .find(|v| v.name == n)
                .map(|v| v.card)
                .unwrap_or(1)
        };
        let slots = aux
            .factors
            .iter()
            .map(|f| Slot {
                targets: f.targets.clone(),
                givens: f.givens.clone(),
                rows: f.givens.iter().map(|g| card_of(g)).product(),
                width: f.targets.iter().map(|t| card_of(t)).product(),
            })
            .collect();
        let channel_vars: Vec<VariableSpec> = sym
            .variables
            .iter()
            .filter(|v| spec.outputs.contains(&v.name))
            .cloned()
            .collect();
        let symbols: Vec<String> = system
            .all()
            .flat_map(|i| i.rhs.variables())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        Ok(Problem {
            variables,
            slots,
            channel: sym.factor,
            channel_vars,
            system,
            symbols,
            assumption_tol: cfg.assumption_tol,
        })
    }

    fn aux_spec(&self, tables: &[Vec<f64>]) -> FactorizationSpec {
        FactorizationSpec {
            variables: self.variables.clone(),
            factors: self
                .slots
                .iter()
                .zip(tables)
                .map(|(s, t)| Factor {
                    targets: s.targets.clone(),
                    givens: s.givens.clone(),
                    table: t.clone(),
                })
                .collect(),
        }
    }

    /// Joint over the symbols of the system.
    fn joint(&self, tables: &[Vec<f64>]) -> Result<JointPmf> {
        let mut spec = self.aux_spec(tables);
        spec.variables.extend(self.channel_vars.iter().cloned());
        spec.factors.push(self.channel.clone());
        compose_joint(&spec)?.marginalize(&self.symbols)
    }

    /// Vertices of the region, or `None` when an assumption fails.
    fn vertices(&self, tables: &[Vec<f64>]) -> Option<Vec<[f64; 2]>> {
        let joint = self.joint(tables).ok()?;
        let region = numeric_region(&self.system, &joint).ok()?;
        if !region.assumptions_hold(self.assumption_tol) {
            return None;
        }
        region.vertices
    }

    fn sample<R: Rng>(
        &self,
        rng: &mut R,
        cfg: &AuxSearchConfig,
        grid: &[Vec<Vec<f64>>],
        index: usize,
    ) -> Vec<Vec<f64>> {
        if cfg.sampler == Sampler::Grid {
            let total: f64 = self
                .slots
                .iter()
                .zip(grid)
                .map(|(s, g)| (g.len() as f64).powi(s.rows as i32))
                .product();
            let mut code = index;
            return self
                .slots
                .iter()
                .zip(grid)
                .map(|(s, g)| {
                    (0..s.rows)
                        .flat_map(|_| {
                            let pick = if total <= cfg.samples as f64 {
                                let p = code % g.len();
                                code /= g.len();
                                p
                            } else {
                                rng.gen_range(0..g.len())
                            };
                            g[pick].clone()
                        })
                        .collect()
                })
                .collect();
        }
        self.slots
            .iter()
            .map(|s| {
                let det = rng.gen::<f64>() < cfg.deterministic_fraction;
                (0..s.rows)
                    .flat_map(|_| {
                        if det {
                            onehot(s.width, rng.gen_range(0..s.width))
                        } else {
                            dirichlet_row(rng, s.width)
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

fn best(vertices: &[[f64; 2]], w: [f64; 2]) -> ([f64; 2], f64) {
    vertices
        .iter()
        .map(|p| (*p, w[0] * p[0] + w[1] * p[1]))
        .fold(([0.0, 0.0], f64::NEG_INFINITY), |a, b| {
            if b.1 > a.1 + 1e-15 {
                b
            } else {
                a
            }
        })
}

/// Coordinate-wise golden-section ascent on one direction.
fn refine(
    problem: &Problem,
    mut tables: Vec<Vec<f64>>,
    w: [f64; 2],
    passes: usize,
    iters: usize,
) -> (Vec<Vec<f64>>, [f64; 2], f64) {
    let score = |t: &[Vec<f64>]| {
        problem
            .vertices(t)
            .map(|v| best(&v, w))
            .unwrap_or(([0.0, 0.0], f64::NEG_INFINITY))
    };
    let (mut point, mut value) = score(&tables);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..passes {
        for (f, slot) in problem.slots.iter().enumerate() {
            if slot.width < 2 {
                continue;
            }
            for row in 0..slot.rows {
                for i in 0..slot.width - 1 {
                    let (a, b) = (row * slot.width + i, row * slot.width + i + 1);
                    let mass = tables[f][a] + tables[f][b];
                    if mass < 1e-12 {
                        continue;
                    }
                    let mut trial = tables.clone();
                    let mut at = |t: f64| {
                        trial[f][a] = t * mass;
                        trial[f][b] = (1.0 - t) * mass;
                        let (p, v) = score(&trial);
                        (p, v, trial.clone())
                    };
                    let mut cands = vec![at(0.0), at(1.0)];
                    let (mut lo, mut hi) = (0.0, 1.0);
                    let mut x1 = hi - phi * (hi - lo);
                    let mut x2 = lo + phi * (hi - lo);
                    let mut f1 = at(x1);
                    let mut f2 = at(x2);
                    for _ in 0..iters {
                        if f1.1 >= f2.1 {
                            hi = x2;
                            x2 = x1;
                            cands.push(std::mem::replace(&mut f2, f1.clone()));
                            x1 = hi - phi * (hi - lo);
                            f1 = at(x1);
                        } else {
                            lo = x1;
                            x1 = x2;
                            cands.push(std::mem::replace(&mut f1, f2.clone()));
                            x2 = lo + phi * (hi - lo);
                            f2 = at(x2);
                        }
                    }
                    cands.push(f1);
                    cands.push(f2);
                    for (p, v, t) in cands {
                        if v > value + 1e-12 {
                            value = v;
                            point = p;
                            tables = t;
                        }
                    }
                }
            }
        }
    }
    (tables, point, value)
}

/// Maximizes `lambda . R` over sampled auxiliary distributions for every
/// direction. Each sample draws from its own seed derived from `cfg.seed`
/// and its index, so results do not depend on the thread count.
pub fn search_envelope(
    spec: &RegionSpec,
    channel: &ChannelSpec,
    cfg: &AuxSearchConfig,
) -> Result<RegionEnvelope> {
    cfg.validate()?;
    let problem = Problem::new(spec, channel, cfg)?;
    let grid: Vec<Vec<Vec<f64>>> = problem
        .slots
        .iter()
        .map(|s| grid_rows(s.width, cfg.grid_resolution.max(1)))
        .collect();
    let sampled: Vec<Option<Sample>> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(cfg.seed, i as u64));
            let tables = problem.sample(&mut rng, cfg, &grid, i);
            problem.vertices(&tables).map(|v| (tables, v))
        })
        .collect();
    let excluded = sampled.iter().filter(|s| s.is_none()).count();
    let kept: Vec<Sample> = sampled.into_iter().flatten().collect();
    if kept.is_empty() {
        return Ok(RegionEnvelope {
            points: vec![],
            samples: cfg.samples,
            excluded,
        });
    }
    let weights = cfg.weights();
    let mut points: Vec<EnvelopePoint> = weights
        .par_iter()
        .map(|&w| {
            let mut scored: Vec<(usize, f64)> = kept
                .iter()
                .enumerate()
                .map(|(k, (_, v))| (k, best(v, w).1))
                .collect();
            // stable order: value descending, then index
            scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
            let mut top: Option<(Vec<Vec<f64>>, [f64; 2], f64)> = None;
            for &(k, _) in scored.iter().take(cfg.refine_top.max(1)) {
                let r = refine(
                    &problem,
                    kept[k].0.clone(),
                    w,
                    cfg.refinement_passes,
                    cfg.golden_iters,
                );
                if top.as_ref().is_none_or(|t| r.2 > t.2 + 1e-15) {
                    top = Some(r);
                }
            }
            let (tables, rate, value) = top.expect("at least one candidate");
            EnvelopePoint {
                lambda: w,
                rate,
                value,
                distribution: problem.aux_spec(&tables),
            }
        })
        .collect();
    points.sort_by(|a, b| {
        a.rate[0]
            .total_cmp(&b.rate[0])
            .then(b.rate[1].total_cmp(&a.rate[1]))
    });
    Ok(RegionEnvelope {
        points,
        samples: cfg.samples,
        excluded,
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Remark2Report {
    /// Right-hand side of the assumption; negative means violated.
    pub assumption_value: f64,
    pub assumption_holds: bool,
    /// `I(U1,V1;U2,V2|Q,U0,V0,Z)`.
    pub dependence: f64,
    /// The implication "assumption holds => dependence < 1e-6" is not falsified.
    pub implication_ok: bool,
}

/// Evaluates the weak-secrecy assumption and the conditional dependence
/// between the two private-auxiliary pairs given the common ones and `Z`.
pub fn check_remark2(joint: &JointPmf) -> Result<Remark2Report> {
    let need = ["Q", "U0", "V0", "U1", "V1", "U2", "V2", "Z"];
    for v in need {
        if v != "Q" && !joint.contains(v) {
            return Err(Error::UnknownVariable(v.to_string()));
        }
    }
    let spec = builtin_system(RegionId::Thm1Inner);
    let assumption = &spec.system.assumptions[0].rhs;
    let cond: Vec<&str> = if joint.contains("Q") {
        vec!["Q", "U0", "V0", "Z"]
    } else {
        vec!["U0", "V0", "Z"]
    };
    let dep = mutual_info_expr(&["U1", "V1"], &["U2", "V2"], &cond)?;
    let mut cache = EntropyCache::new(joint);
    let a = cache.eval(assumption)?;
    let d = cache.eval(&dep)?.max(0.0);
    let holds = a >= -1e-9;
    Ok(Remark2Report {
        assumption_value: a,
        assumption_holds: holds,
        dependence: d,
        implication_ok: !holds || d < 1e-6,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Remark2Sweep {
    pub samples: usize,
    pub assumption_holds: usize,
    pub counterexamples: usize,
    /// Largest dependence among samples where the assumption holds.
    pub max_dependence_when_holds: f64,
}

/// Samples joints along the weak-secrecy factorization with random channels
/// and checks the implication on each.
pub fn remark2_sweep(
    samples: usize,
    seed: u64,
    card: usize,
    deterministic_fraction: f64,
) -> Result<Remark2Sweep> {
    let template = Template::parse(
        "Q; U0|Q; U1,U2|U0; V0|Q; V1,V2|V0; X1|U0,U1,U2; X2|V0,V1,V2; Y1,Y2,Z|X1,X2",
    );
    let reports: Vec<Remark2Report> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, i as u64));
            let joint = random_joint(&template, card, deterministic_fraction, &mut rng)?;
            check_remark2(&joint)
        })
        .collect::<Result<_>>()?;
    let holds: Vec<&Remark2Report> = reports.iter().filter(|r| r.assumption_holds).collect();
    Ok(Remark2Sweep {
        samples,
        assumption_holds: holds.len(),
        counterexamples: reports.iter().filter(|r| !r.implication_ok).count(),
        max_dependence_when_holds: holds.iter().map(|r| r.dependence).fold(0.0, f64::max),
    })
}

/// A joint drawn factor by factor; `Q` has cardinality 1, everything else
/// `card`. Each factor is deterministic with probability `det`.
pub fn random_joint<R: Rng>(
    template: &Template,
    card: usize,
    det: f64,
    rng: &mut R,
) -> Result<JointPmf> {
    random_joint_with(template, &|v| if v == "Q" { 1 } else { card }, det, rng)
}

/// [`random_joint`] with the cardinality of every variable given by `card`.
pub fn random_joint_with<R: Rng>(
    template: &Template,
    card: &dyn Fn(&str) -> usize,
    det: f64,
    rng: &mut R,
) -> Result<JointPmf> {
    let vars: Vec<VariableSpec> = template
        .variables()
        .iter()
        .map(|v| VariableSpec::new(v, card(v)))
        .collect();
    let card_of = |n: &str| vars.iter().find(|v| v.name == n).map_or(1, |v| v.card);
    let factors = template
        .factors
        .iter()
        .map(|f| {
            let rows: usize = f.givens.iter().map(|g| card_of(g)).product();
            let width: usize = f.targets.iter().map(|t| card_of(t)).product();
            let d = rng.gen::<f64>() < det;
            let table = (0..rows)
                .flat_map(|_| {
                    if d {
                        onehot(width, rng.gen_range(0..width))
                    } else {
                        dirichlet_row(rng, width)
                    }
                })
                .collect();
            Factor {
                targets: f.targets.clone(),
                givens: f.givens.clone(),
                table,
            }
        })
        .collect();
    compose_joint(&FactorizationSpec {
        variables: vars,
        factors,
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectionGap {
    pub lambda: [f64; 2],
    pub inner: f64,
    pub outer: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContainmentReport {
    pub contained: bool,
    pub max_violation: f64,
    pub gaps: Vec<DirectionGap>,
}

fn outside_distance(p: [f64; 2], poly: &[[f64; 2]]) -> f64 {
    crate::poly::dist_to_polygon(p, poly)
}

/// Checks that every inner boundary point lies in the down-closed hull of
/// the outer envelope, and reports support-function gaps per direction.
pub fn compare_bounds(inner: &RegionEnvelope, outer: &RegionEnvelope) -> ContainmentReport {
    let outer_poly = outer.polygon();
    let inner_poly = inner.polygon();
    let max_violation = inner
        .points
        .iter()
        .map(|p| outside_distance(p.rate, &outer_poly))
        .fold(0.0, f64::max);
    let mut dirs: Vec<[f64; 2]> = inner
        .points
        .iter()
        .chain(&outer.points)
        .map(|p| p.lambda)
        .collect();
    dirs.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    dirs.dedup();
    let support = |poly: &[[f64; 2]], w: [f64; 2]| {
        poly.iter()
            .map(|p| w[0] * p[0] + w[1] * p[1])
            .fold(0.0, f64::max)
    };
    let gaps = dirs
        .into_iter()
        .map(|w| {
            let (i, o) = (support(&inner_poly, w), support(&outer_poly, w));
            DirectionGap {
                lambda: w,
                inner: i,
                outer: o,
                gap: o - i,
            }
        })
        .collect();
    ContainmentReport {
        contained: max_violation <= 1e-9,
        max_violation,
        gaps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rows_cover_simplex() {
        let g = grid_rows(3, 2);
        assert_eq!(g.len(), 6);
        assert!(g
            .iter()
            .all(|r| (r.iter().sum::<f64>() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn seeds_differ_per_index() {
        assert_ne!(split_seed(1, 0), split_seed(1, 1));
        assert_ne!(split_seed(1, 0), split_seed(2, 0));
    }

    #[test]
    fn identical_envelopes_are_contained_with_zero_gap() {
        let env =
            RegionEnvelope::from_csv("lambda1,lambda2,R1,R2\n1,0,0.5,0.1\n0,1,0.2,0.4\n").unwrap();
        let r = compare_bounds(&env, &env);
        assert!(r.contained);
        assert!(r.gaps.iter().all(|g| g.gap.abs() < 1e-15));
        let origin = RegionEnvelope::from_csv("lambda1,lambda2,R1,R2\n1,0,0,0\n").unwrap();
        assert!(compare_bounds(&origin, &env).contained);
        assert!(!compare_bounds(&env, &origin).contained);
    }

    #[test]
    fn default_directions_include_axes() {
        let w = AuxSearchConfig::default().weights();
        assert_eq!(w.first(), Some(&[1.0, 0.0]));
        assert_eq!(w.last(), Some(&[0.0, 1.0]));
    }

    #[test]
    fn remark2_on_independent_and_correlated_pairs() {
        use crate::dist::VariableSpec as V;
        // all private auxiliaries independent bits, Z constant: both sides zero
        let vars = ["U0", "V0", "U1", "V1", "U2", "V2", "Z"];
        let j = JointPmf::uniform(
            vars.iter()
                .filter(|v| **v != "Z")
                .map(|v| V::new(v, 2))
                .collect(),
        )
        .unwrap();
        let z = JointPmf::point_mass(vec![V::new("Z", 1)], &[0]).unwrap();
        let r = check_remark2(&JointPmf::product(&j, &z).unwrap()).unwrap();
        assert!(r.assumption_holds && r.dependence < 1e-12);
        // U1 = U2 a fair bit: the Marton term is one bit and the assumption fails
        let mut probs = vec![0.0; 4];
        probs[0] = 0.5;
        probs[3] = 0.5;
        let u = JointPmf::new(vec![V::new("U1", 2), V::new("U2", 2)], probs).unwrap();
        let rest = JointPmf::point_mass(
            ["U0", "V0", "V1", "V2", "Z"]
                .iter()
                .map(|v| V::new(v, 1))
                .collect(),
            &[0, 0, 0, 0, 0],
        )
        .unwrap();
        let r = check_remark2(&JointPmf::product(&u, &rest).unwrap()).unwrap();
        assert!(!r.assumption_holds && r.dependence > 0.99);
        assert!(r.implication_ok);
    }
}
