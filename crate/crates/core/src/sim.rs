//! Seeded Monte Carlo experiments: the codebook counting bound and the
//! near-independence of random bin indices from the eavesdropper output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::JointPmf;
use crate::error::{Error, Result};
use crate::info::{eval_expr, mutual_info_expr};

/// Largest number of codeword pairs a counting trial may inspect.
pub const MAX_PAIRS_LOG2: u32 = 26;
/// Largest input alphabet `|X|^n` the binning enumeration accepts.
pub const MAX_STATES_LOG2: u32 = 22;

const LEMMA_VARS: [&str; 6] = ["Q", "U0", "V0", "U1", "V1", "Z"];

fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// How the eavesdropper sequence is produced in a counting trial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZSource {
    /// Through `p(z|q,u0,v0,u1,v1)` from the codewords at a uniformly drawn
    /// index pair, so the selected tuple is typical with high probability.
    #[default]
    Codewords,
    /// Through `p(z|q,u0,v0)`, independently of the codebooks.
    Independent,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma1Config {
    pub n: usize,
    /// Joint over `Q, U0, V0, U1, V1, Z`; a missing `Q` is taken as constant.
    pub joint: JointPmf,
    pub s: f64,
    pub t: f64,
    /// Typicality slack: relative deviation of every tuple frequency.
    pub epsilon: f64,
    /// Exponent slack in the counting event; defaults to `epsilon`.
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default = "default_delta1")]
    pub delta1: f64,
    /// Entropy bound slack; defaults to `3 * delta`.
    #[serde(default)]
    pub delta2: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub z_source: ZSource,
}

fn default_delta1() -> f64 {
    0.1
}

impl Lemma1Config {
    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or(self.epsilon)
    }

    pub fn delta2(&self) -> f64 {
        self.delta2.unwrap_or(3.0 * self.delta())
    }

    /// Codebook sizes as powers of two.
    pub fn exponents(&self) -> (u32, u32) {
        let e = |r: f64| (self.n as f64 * r - 1e-9).ceil().max(0.0) as u32;
        (e(self.s), e(self.t))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.trials == 0 {
            return Err(Error::InvalidConfig(
                "n and trials must be at least 1".into(),
            ));
        }
        if !(self.s >= 0.0 && self.t >= 0.0) {
            return Err(Error::InvalidConfig("rates must be nonnegative".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::InvalidConfig("epsilon must be positive".into()));
        }
        for v in LEMMA_VARS.iter().filter(|v| **v != "Q") {
            if !self.joint.contains(v) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
        }
        let (a, b) = self.exponents();
        if a + b > MAX_PAIRS_LOG2 {
            return Err(Error::ResourceLimit(format!(
                "2^{a} x 2^{b} codeword pairs exceed the limit of 2^{MAX_PAIRS_LOG2}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Satisfied,
    Violated,
}

/// The three mutual informations the rates are compared with.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Lemma1Thresholds {
    pub i_u1: f64,
    pub i_v1: f64,
    pub i_joint: f64,
}

impl Lemma1Thresholds {
    pub fn of(joint: &JointPmf) -> Result<Self> {
        let joint = with_q(joint)?;
        let c = ["Q", "U0", "V0"];
        Ok(Lemma1Thresholds {
            i_u1: eval_expr(&mutual_info_expr(&["U1"], &["Z"], &c)?, &joint)?,
            i_v1: eval_expr(&mutual_info_expr(&["V1"], &["Z"], &c)?, &joint)?,
            i_joint: eval_expr(&mutual_info_expr(&["U1", "V1"], &["Z"], &c)?, &joint)?,
        })
    }

    pub fn regime(&self, s: f64, t: f64, delta1: f64) -> Regime {
        if s > self.i_u1 + delta1 && t > self.i_v1 + delta1 && s + t > self.i_joint + delta1 {
            Regime::Satisfied
        } else {
            Regime::Violated
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Lemma1Result {
    pub n: usize,
    pub regime: Regime,
    pub thresholds: Lemma1Thresholds,
    /// Codebooks hold `2^s_exponent` and `2^t_exponent` codewords.
    pub s_exponent: u32,
    pub t_exponent: u32,
    pub trials: usize,
    pub p_e1: f64,
    pub mean_count: f64,
    pub max_count: u64,
    /// Count above which the event is declared.
    pub e1_threshold: f64,
    /// Mean of `log2 N` over trials with at least one typical pair.
    pub entropy_bits: f64,
    /// `n (S + T - I) + n delta2` with the realized rates.
    pub bound_bits: f64,
    /// Share of non-degenerate trials whose estimate exceeds the bound.
    pub exceed_fraction: f64,
    /// Trials without any typical pair.
    pub degenerate_trials: usize,
    /// Share of trials in which the selected index pair was typical.
    pub selected_typical: f64,
}

fn with_q(joint: &JointPmf) -> Result<JointPmf> {
    if joint.contains("Q") {
        return Ok(joint.clone());
    }
    let q = JointPmf::point_mass(vec![crate::dist::VariableSpec::new("Q", 1)], &[0])?;
    JointPmf::product(joint, &q)
}

/// Strong typicality of a sequence of tuple indices against `p`.
fn typical(counts: &[u32], p: &[f64], n: usize, eps: f64) -> bool {
    counts.iter().zip(p).all(|(&c, &q)| {
        if q == 0.0 {
            c == 0
        } else {
            (c as f64 / n as f64 - q).abs() <= eps * q
        }
    })
}

/// Inverse-cdf draw from an unnormalized row.
fn draw<R: Rng>(rng: &mut R, row: &[f64]) -> usize {
    let total: f64 = row.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, w) in row.iter().enumerate() {
        if u < *w {
            return i;
        }
        u -= w;
    }
    row.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

struct LemmaModel {
    /// Joint in `LEMMA_VARS` order, flattened row-major.
    p: Vec<f64>,
    cards: [usize; 6],
}

impl LemmaModel {
    fn new(joint: &JointPmf) -> Result<Self> {
        let joint = with_q(joint)?;
        let names: Vec<String> = LEMMA_VARS.iter().map(|s| s.to_string()).collect();
        let p = joint.marginal_probs(&names)?;
        let mut cards = [0; 6];
        for (k, v) in LEMMA_VARS.iter().enumerate() {
            cards[k] = joint.variables()[joint.index_of(v)?].card;
        }
        Ok(LemmaModel { p, cards })
    }

    fn index(&self, v: [usize; 6]) -> usize {
        v.iter().zip(self.cards).fold(0, |acc, (x, c)| acc * c + x)
    }

    /// Probability of the partial assignment; `None` entries are summed out.
    fn mass(&self, v: [Option<usize>; 6]) -> f64 {
        let mut total = 0.0;
        for (k, p) in self.p.iter().enumerate() {
            let mut rest = k;
            let mut ok = true;
            for i in (0..6).rev() {
                let x = rest % self.cards[i];
                rest /= self.cards[i];
                if let Some(want) = v[i] {
                    ok &= want == x;
                }
            }
            if ok {
                total += p;
            }
        }
        total
    }
}

struct Trial {
    count: u64,
    selected_typical: bool,
}

fn lemma_trial(model: &LemmaModel, cfg: &Lemma1Config, seed: u64) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.n;
    let c = model.cards;
    let (se, te) = cfg.exponents();
    let (nu, nv) = (1usize << se, 1usize << te);

    // conditional tables
    let base: Vec<f64> = (0..c[0] * c[1] * c[2])
        .map(|k| {
            model.mass([
                Some(k / (c[1] * c[2])),
                Some(k / c[2] % c[1]),
                Some(k % c[2]),
                None,
                None,
                None,
            ])
        })
        .collect();
    let u1_given: Vec<Vec<f64>> = (0..c[1])
        .map(|u0| {
            (0..c[3])
                .map(|u1| model.mass([None, Some(u0), None, Some(u1), None, None]))
                .collect()
        })
        .collect();
    let v1_given: Vec<Vec<f64>> = (0..c[2])
        .map(|v0| {
            (0..c[4])
                .map(|v1| model.mass([None, None, Some(v0), None, Some(v1), None]))
                .collect()
        })
        .collect();

    let mut qs = Vec::with_capacity(n);
    for _ in 0..n {
        let k = draw(&mut rng, &base);
        qs.push([k / (c[1] * c[2]), k / c[2] % c[1], k % c[2]]);
    }
    let ucw: Vec<Vec<usize>> = (0..nu)
        .map(|_| qs.iter().map(|s| draw(&mut rng, &u1_given[s[1]])).collect())
        .collect();
    let vcw: Vec<Vec<usize>> = (0..nv)
        .map(|_| qs.iter().map(|s| draw(&mut rng, &v1_given[s[2]])).collect())
        .collect();
    let (l, k) = (rng.gen_range(0..nu), rng.gen_range(0..nv));
    let z: Vec<usize> = (0..n)
        .map(|i| {
            let [q, u0, v0] = qs[i];
            let row: Vec<f64> = (0..c[5])
                .map(|z| match cfg.z_source {
                    ZSource::Codewords => model.mass([
                        Some(q),
                        Some(u0),
                        Some(v0),
                        Some(ucw[l][i]),
                        Some(vcw[k][i]),
                        Some(z),
                    ]),
                    ZSource::Independent => {
                        model.mass([Some(q), Some(u0), Some(v0), None, None, Some(z)])
                    }
                })
                .collect();
            draw(&mut rng, &row)
        })
        .collect();

    let mut counts = vec![0u32; model.p.len()];
    let mut check = |lu: usize, kv: usize| {
        counts.iter_mut().for_each(|x| *x = 0);
        for i in 0..n {
            let [q, u0, v0] = qs[i];
            let idx = model.index([q, u0, v0, ucw[lu][i], vcw[kv][i], z[i]]);
            if model.p[idx] == 0.0 {
                return false;
            }
            counts[idx] += 1;
        }
        typical(&counts, &model.p, n, cfg.epsilon)
    };
    let selected_typical = check(l, k);
    let mut count = 0u64;
    for lu in 0..nu {
        for kv in 0..nv {
            if check(lu, kv) {
                count += 1;
            }
        }
    }
    Trial {
        count,
        selected_typical,
    }
}

/// Counts jointly typical codeword pairs over independent trials.
pub fn run_lemma1_counting(cfg: &Lemma1Config) -> Result<Lemma1Result> {
    cfg.validate()?;
    let model = LemmaModel::new(&cfg.joint)?;
    let thresholds = Lemma1Thresholds::of(&cfg.joint)?;
    let trials: Vec<Trial> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| lemma_trial(&model, cfg, split_seed(cfg.seed, t as u64)))
        .collect();
    let (se, te) = cfg.exponents();
    let n = cfg.n as f64;
    let rates = (se + te) as f64;
    let e1_threshold =
        (1.0 + cfg.delta1) * (rates - n * thresholds.i_joint + n * cfg.delta()).exp2();
    let bound_bits = rates - n * thresholds.i_joint + n * cfg.delta2();
    let live: Vec<f64> = trials
        .iter()
        .filter(|t| t.count > 0)
        .map(|t| (t.count as f64).log2())
        .collect();
    let m = cfg.trials as f64;
    Ok(Lemma1Result {
        n: cfg.n,
        regime: thresholds.regime(cfg.s, cfg.t, cfg.delta1),
        thresholds,
        s_exponent: se,
        t_exponent: te,
        trials: cfg.trials,
        p_e1: trials
            .iter()
            .filter(|t| t.count as f64 > e1_threshold)
            .count() as f64
            / m,
        mean_count: trials.iter().map(|t| t.count as f64).sum::<f64>() / m,
        max_count: trials.iter().map(|t| t.count).max().unwrap_or(0),
        e1_threshold,
        entropy_bits: if live.is_empty() {
            0.0
        } else {
            live.iter().sum::<f64>() / live.len() as f64
        },
        bound_bits,
        exceed_fraction: if live.is_empty() {
            0.0
        } else {
            live.iter().filter(|h| **h > bound_bits + 1e-12).count() as f64 / live.len() as f64
        },
        degenerate_trials: cfg.trials - live.len(),
        selected_typical: trials.iter().filter(|t| t.selected_typical).count() as f64 / m,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub bits: f64,
    pub bound_bits: f64,
    pub exceed_fraction: f64,
    pub excluded_trials: usize,
}

/// Plug-in estimate of `H(L,K | Q^n, U0^n, V0^n, Z^n, C)` with the index
/// pair uniform over the typical pairs of each trial.
pub fn estimate_entropy_lk(cfg: &Lemma1Config) -> Result<EntropyEstimate> {
    let r = run_lemma1_counting(cfg)?;
    Ok(EntropyEstimate {
        bits: r.entropy_bits,
        bound_bits: r.bound_bits,
        exceed_fraction: r.exceed_fraction,
        excluded_trials: r.degenerate_trials,
    })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BinningConfig {
    pub n: usize,
    /// Joint over the source and the eavesdropper observation.
    pub joint: JointPmf,
    #[serde(default = "default_x")]
    pub x: Vec<String>,
    #[serde(default = "default_z")]
    pub z: Vec<String>,
    /// Bin rate in bits; `round(2^{nR})` bins.
    pub rate: f64,
    pub trials: usize,
    pub seed: u64,
}

fn default_x() -> Vec<String> {
    vec!["X".into()]
}

fn default_z() -> Vec<String> {
    vec!["Z".into()]
}

impl BinningConfig {
    pub fn bins(&self) -> usize {
        ((self.n as f64 * self.rate).exp2().round() as usize).max(1)
    }

    fn validate(&self) -> Result<(usize, usize)> {
        if self.n == 0 || self.trials == 0 {
            return Err(Error::InvalidConfig(
                "n and trials must be at least 1".into(),
            ));
        }
        if !(self.rate >= 0.0) {
            return Err(Error::InvalidConfig("rate must be nonnegative".into()));
        }
        let card = |names: &[String]| -> Result<usize> {
            let mut c = 1usize;
            for v in names {
                c *= self.joint.variables()[self.joint.index_of(v)?].card;
            }
            Ok(c)
        };
        let (cx, cz) = (card(&self.x)?, card(&self.z)?);
        let states = (cx as f64).powi(self.n as i32);
        if states > (1u64 << MAX_STATES_LOG2) as f64 {
            return Err(Error::ResourceLimit(format!(
                "{cx}^{} source sequences exceed the limit of 2^{MAX_STATES_LOG2}",
                self.n
            )));
        }
        if (cz as f64).powi(self.n as i32) * states > (1u64 << 40) as f64 {
            return Err(Error::ResourceLimit(
                "source and observation sequences exceed 2^40 pairs".into(),
            ));
        }
        Ok((cx, cz))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BinningResult {
    pub n: usize,
    pub bins: usize,
    pub trials: usize,
    /// Mean total variation between `p(w, z^n)` and `Unif(w) p(z^n)`.
    pub tv: f64,
    pub tv_min: f64,
    pub tv_max: f64,
}

/// Exact total variation of a uniformly random binning, averaged over trials.
pub fn run_osrb_tv(cfg: &BinningConfig) -> Result<BinningResult> {
    let (cx, cz) = cfg.validate()?;
    let mut names = cfg.x.clone();
    names.extend(cfg.z.iter().cloned());
    let pxz = cfg.joint.marginal_probs(&names)?; // row-major: x then z
    let n = cfg.n;
    let m = cfg.bins();
    let nx = cx.pow(n as u32);
    let nz = cz.pow(n as u32);
    let tvs: Vec<f64> = (0..cfg.trials)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(cfg.seed, t as u64));
            let bins: Vec<u32> = (0..nx).map(|_| rng.gen_range(0..m) as u32).collect();
            let per_z: Vec<f64> = (0..nz)
                .into_par_iter()
                .map(|zi| {
                    // p(x^n, z^n) for every x^n, built symbol by symbol
                    let mut mass = vec![1.0f64];
                    let mut rest = zi;
                    let mut zs = vec![0; n];
                    for i in (0..n).rev() {
                        zs[i] = rest % cz;
                        rest /= cz;
                    }
                    for &z in &zs {
                        let mut next = Vec::with_capacity(mass.len() * cx);
                        for p in &mass {
                            for x in 0..cx {
                                next.push(p * pxz[x * cz + z]);
                            }
                        }
                        mass = next;
                    }
                    let pz: f64 = mass.iter().sum();
                    let mut acc = vec![0.0f64; m];
                    for (x, p) in mass.iter().enumerate() {
                        acc[bins[x] as usize] += p;
                    }
                    let u = pz / m as f64;
                    acc.iter().map(|a| (a - u).abs()).sum::<f64>()
                })
                .collect();
            0.5 * per_z.iter().sum::<f64>()
        })
        .collect();
    Ok(BinningResult {
        n,
        bins: m,
        trials: cfg.trials,
        tv: tvs.iter().sum::<f64>() / tvs.len() as f64,
        tv_min: tvs.iter().copied().fold(f64::INFINITY, f64::min),
        tv_max: tvs.iter().copied().fold(0.0, f64::max),
    })
}

// ---------------------------------------------------------------------------

/// One row of a sweep trace.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub metric: String,
    pub value: f64,
    pub trials: usize,
}

pub fn lemma1_rows(r: &Lemma1Result) -> Vec<SweepRow> {
    let row = |metric: &str, value: f64| SweepRow {
        n: r.n,
        metric: metric.into(),
        value,
        trials: r.trials,
    };
    vec![
        row("p_e1", r.p_e1),
        row("mean_count", r.mean_count),
        row("max_count", r.max_count as f64),
        row("entropy_bits", r.entropy_bits),
        row("bound_bits", r.bound_bits),
        row("exceed_fraction", r.exceed_fraction),
        row("selected_typical", r.selected_typical),
    ]
}

pub fn osrb_rows(r: &BinningResult) -> Vec<SweepRow> {
    vec![SweepRow {
        n: r.n,
        metric: "tv".into(),
        value: r.tv,
        trials: r.trials,
    }]
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from("n,metric,value,trials\n");
    for r in rows {
        s += &format!("{},{},{},{}\n", r.n, r.metric, r.value, r.trials);
    }
    s
}

/// Runs the counting experiment at every blocklength in `ns`.
pub fn lemma1_sweep(cfg: &Lemma1Config, ns: &[usize]) -> Result<Vec<Lemma1Result>> {
    ns.iter()
        .map(|&n| run_lemma1_counting(&Lemma1Config { n, ..cfg.clone() }))
        .collect()
}

pub fn osrb_sweep(cfg: &BinningConfig, ns: &[usize]) -> Result<Vec<BinningResult>> {
    ns.iter()
        .map(|&n| run_osrb_tv(&BinningConfig { n, ..cfg.clone() }))
        .collect()
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for k in i..=j {
                r[idx[k]] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    if va == 0.0 || vb == 0.0 {
        return 0.0;
    }
    cov / (va * vb).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::VariableSpec;

    fn independent_joint() -> JointPmf {
        let vars = ["Q", "U0", "V0", "U1", "V1", "Z"]
            .iter()
            .map(|v| {
                VariableSpec::new(
                    v,
                    if v.starts_with('U') || v.starts_with('V') {
                        2
                    } else {
                        1
                    },
                )
            })
            .collect();
        JointPmf::uniform(vars).unwrap()
    }

    #[test]
    fn single_codewords_give_zero_entropy() {
        let cfg = Lemma1Config {
            n: 6,
            joint: independent_joint(),
            s: 0.0,
            t: 0.0,
            epsilon: 1.0,
            delta: None,
            delta1: 0.1,
            delta2: None,
            trials: 20,
            seed: 3,
            z_source: ZSource::Codewords,
        };
        let r = run_lemma1_counting(&cfg).unwrap();
        assert!(r.max_count <= 1);
        assert_eq!(r.entropy_bits, 0.0);
        assert_eq!(estimate_entropy_lk(&cfg).unwrap().bits, 0.0);
    }

    #[test]
    fn counts_never_exceed_codebook_pairs_and_are_reproducible() {
        let cfg = Lemma1Config {
            n: 5,
            joint: independent_joint(),
            s: 0.4,
            t: 0.4,
            epsilon: 0.9,
            delta: None,
            delta1: 0.1,
            delta2: None,
            trials: 12,
            seed: 9,
            z_source: ZSource::Independent,
        };
        let a = run_lemma1_counting(&cfg).unwrap();
        let b = run_lemma1_counting(&cfg).unwrap();
        assert!(a.max_count <= 1 << (a.s_exponent + a.t_exponent));
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn guards_reject_large_experiments() {
        let cfg = Lemma1Config {
            n: 20,
            joint: independent_joint(),
            s: 1.0,
            t: 1.0,
            epsilon: 0.5,
            delta: None,
            delta1: 0.1,
            delta2: None,
            trials: 1,
            seed: 0,
            z_source: ZSource::Codewords,
        };
        assert!(matches!(
            run_lemma1_counting(&cfg),
            Err(Error::ResourceLimit(_))
        ));
        let x =
            JointPmf::uniform(vec![VariableSpec::new("X", 2), VariableSpec::new("Z", 1)]).unwrap();
        let b = BinningConfig {
            n: 23,
            joint: x,
            x: default_x(),
            z: default_z(),
            rate: 0.5,
            trials: 1,
            seed: 0,
        };
        assert!(matches!(run_osrb_tv(&b), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn one_bin_has_zero_total_variation() {
        let j = JointPmf::new(
            vec![VariableSpec::new("X", 2), VariableSpec::new("Z", 2)],
            vec![0.4, 0.1, 0.1, 0.4],
        )
        .unwrap();
        let cfg = BinningConfig {
            n: 6,
            joint: j,
            x: default_x(),
            z: default_z(),
            rate: 0.0,
            trials: 3,
            seed: 1,
        };
        let r = run_osrb_tv(&cfg).unwrap();
        assert_eq!(r.bins, 1);
        assert!(r.tv.abs() < 1e-15);
    }

    #[test]
    fn spearman_matches_hand_values() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
        assert!((spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]) - 0.8).abs() < 1e-12);
        assert_eq!(spearman(&[1.0, 1.0], &[1.0, 2.0]), 0.0);
    }
}
