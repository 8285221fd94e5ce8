//! One PASS/FAIL line per acceptance criterion. Criteria listed in
//! `UNATTAINABLE` are still run as stated; their failure is reported but
//! does not fail the process.

mod common;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secrecy_regions::dist::{
    compose_joint, Binding, FactorizationSpec, JointPmf, Template, VariableSpec,
};
use secrecy_regions::poly::{
    dist_to_polygon, fm_eliminate, hausdorff_2d, numeric_region, remove_redundant, vertices_2d,
    FmOptions, IneqSystem, LinIneq, Mode,
};
use secrecy_regions::rational::{frac, int};
use secrecy_regions::regions::{
    builtin_system, derive_from_raw, evaluate, evaluate_system, random_joint_with, reduce,
    remark2_sweep, search_envelope, thm5_capacity, thm5_capacity_f64, AuxSearchConfig, Params,
    Reduction, RegionId,
};
use secrecy_regions::sim::{
    lemma1_sweep, osrb_sweep, spearman, BinningConfig, Lemma1Config, Regime, ZSource,
};

use common::*;

/// Criteria that fail for reasons recorded with the project notes.
const UNATTAINABLE: &[u32] = &[1, 3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn planar(sys: &IneqSystem, joint: &JointPmf) -> Vec<[f64; 2]> {
    evaluate_system(sys, None, joint, &Binding::new())
        .unwrap()
        .region
        .vertices
        .unwrap()
}

// ---------------------------------------------------------------------------

/// Independent bits `U`, `V` sent as they are; the legitimate receiver sees
/// both and the eavesdropper their sum modulo two.
fn xor_joint() -> JointPmf {
    let mut yz = Vec::new();
    for x1 in 0..2 {
        for x2 in 0..2 {
            let mut row = vec![0.0; 8];
            row[(2 * x1 + x2) * 2 + (x1 ^ x2)] = 1.0;
            yz.extend(row);
        }
    }
    compose_joint(&FactorizationSpec {
        variables: vec![
            VariableSpec::new("Q", 1),
            VariableSpec::new("U", 2),
            VariableSpec::new("V", 2),
            VariableSpec::new("X1", 2),
            VariableSpec::new("X2", 2),
            VariableSpec::new("Y", 4),
            VariableSpec::new("Z", 2),
        ],
        factors: vec![
            factor(&["Q"], &[], vec![1.0]),
            factor(&["U"], &["Q"], vec![0.5, 0.5]),
            factor(&["V"], &["Q"], vec![0.5, 0.5]),
            factor(&["X1"], &["U"], vec![1.0, 0.0, 0.0, 1.0]),
            factor(&["X2"], &["V"], vec![1.0, 0.0, 0.0, 1.0]),
            factor(&["Y", "Z"], &["X1", "X2"], yz),
        ],
    })
    .unwrap()
}

fn criterion1() -> Outcome {
    let t = Instant::now();
    let d = derive_from_raw(RegionId::AppbRaw, None, Mode::FarkasShannon).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let v = d.verdict.unwrap();
    let mut detail = format!(
        "{} inequalities after elimination, {secs:.2}s, symbolic match {}",
        d.system.ineqs.len(),
        v.equal
    );
    if let Some(w) = &v.witness {
        // The witness is a genuine extra constraint: a point of the target
        // region on a concrete joint that the derived system excludes.
        let j = xor_joint();
        let target = numeric_region(&builtin_system(RegionId::Thm8Macwt).system, &j).unwrap();
        let derived = numeric_region(&d.system, &j).unwrap();
        let p = |vars: &[String]| -> Vec<f64> {
            vars.iter()
                .map(|v| match v.as_str() {
                    "R2" | "Rd2" => 1.0,
                    _ => 0.0,
                })
                .collect()
        };
        detail += &format!(
            "; witness {w}; point (R1,R2,Rd1,Rd2)=(0,1,0,1) on the xor joint: in target {}, in derived {}",
            target.contains(&p(&target.vars), 1e-9),
            derived.contains(&p(&derived.vars), 1e-9)
        );
    }
    outcome(v.equal && secs < 10.0, detail)
}

fn criterion2() -> Outcome {
    let t = Instant::now();
    let d = derive_from_raw(RegionId::AppcRaw, None, Mode::FarkasShannon).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let v = d.verdict.unwrap();
    let target = builtin_system(RegionId::Thm1Inner).system;
    let pass = v.equal && d.system.assumptions.len() == target.assumptions.len() && secs < 60.0;
    outcome(
        pass,
        format!(
            "{} inequalities + {} assumption(s), exact match with THM1_INNER: {}, {secs:.2}s",
            d.system.ineqs.len(),
            d.system.assumptions.len(),
            v.equal
        ),
    )
}

fn criterion3() -> Outcome {
    let thm7 = derive_from_raw(RegionId::Thm7StrongReduced, None, Mode::FarkasShannon)
        .unwrap()
        .system;
    let thm1 = builtin_system(RegionId::Thm1Inner).system;
    let t = Instant::now();
    let full = derive_from_raw(RegionId::Thm7StrongRaw, None, Mode::FarkasShannon)
        .unwrap()
        .system;
    let full_secs = t.elapsed().as_secs_f64();

    let general = builtin_system(RegionId::Thm7StrongReduced).template;
    // private auxiliaries independent given the common ones, eavesdropper
    // output independent of everything: the dependence in the assumption vanishes
    let split = Template::parse(
        "Q; U0|Q; U1|U0; U2|U0; V0|Q; V1|V0; V2|V0; X1|U0,U1,U2; X2|V0,V1,V2; Y1,Y2|X1,X2; Z|Q",
    );
    let free = free_key_rates();
    let mut free_ok = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let (mut equal_ok, mut equal_n, mut contain_ok, mut contain_n, mut worst) =
        (0, 0, 0, 0, 0.0f64);
    for i in 0..400 {
        let pattern = i % 4;
        let trivial: &[&str] = match pattern {
            0 => &["U2", "V2"],
            1 => &["U1", "V1"],
            _ => &[],
        };
        let card = |v: &str| {
            if v == "Q" || trivial.contains(&v) {
                1
            } else {
                2
            }
        };
        let template = if pattern == 2 { &split } else { &general };
        let j = random_joint_with(template, &card, 0.25, &mut rng).unwrap();
        let e1 = evaluate_system(&thm1, None, &j, &Binding::new()).unwrap();
        let p1 = e1.region.vertices.clone().unwrap();
        let p7 = planar(&thm7, &j);
        if e1.assumptions_hold {
            equal_n += 1;
            let h = hausdorff_2d(&p1, &p7);
            worst = worst.max(h);
            if h <= 1e-9 {
                equal_ok += 1;
            }
            if hausdorff_2d(&p1, &planar(&free, &j)) <= 1e-9 {
                free_ok += 1;
            }
        } else {
            contain_n += 1;
            if p1.iter().all(|p| dist_to_polygon(*p, &p7) <= 1e-9) {
                contain_ok += 1;
            }
        }
    }
    let pass = equal_n >= 100 && equal_ok == equal_n && contain_ok == contain_n && contain_n > 0;
    outcome(
        pass,
        format!(
            "equal on {equal_ok}/{equal_n} joints satisfying the assumption (max vertex gap {worst:.1e}); \
             contains on {contain_ok}/{contain_n} violating it; full elimination keeps {} inequalities + {} \
             assumption(s) in {full_secs:.1}s (291 stated without a redundancy criterion); \
             with Rt1, Rt2 free of sign the reduced elimination ({} inequalities) equals it on {free_ok}/{equal_n}",
            full.ineqs.len(),
            full.assumptions.len(),
            free.ineqs.len()
        ),
    )
}

/// The reduced strong-secrecy system eliminated with `Rt1`, `Rt2` each split
/// into a difference of two nonnegative rates, so they may take any sign.
fn free_key_rates() -> IneqSystem {
    let spec = builtin_system(RegionId::Thm7StrongReduced);
    let mut free = IneqSystem::new(Vec::new());
    free.template = spec.system.template.clone();
    for q in spec.system.ineqs.iter().chain(&spec.system.assumptions) {
        let mut coeffs = Vec::new();
        for (v, c) in &q.coeffs {
            if v == "Rt1" || v == "Rt2" {
                coeffs.push((format!("{v}p"), c.clone()));
                coeffs.push((format!("{v}n"), -c.clone()));
            } else {
                coeffs.push((v.clone(), c.clone()));
            }
        }
        free.push(LinIneq::le(coeffs, q.rhs.clone()));
    }
    let order = names(&[
        "Rt1p", "Rt1n", "Rt2p", "Rt2n", "Rt1'", "Rt2'", "Rt1''", "Rt2''",
    ]);
    fm_eliminate(
        &free,
        &order,
        FmOptions {
            mode: Mode::FarkasShannon,
            prune: true,
        },
    )
    .unwrap()
    .system
}

fn switch_joint(tau1: f64, tau2: f64, x2_point: bool) -> (JointPmf, Binding) {
    let ch = secrecy_regions::dist::noiseless_switch_channel(tau1, tau2, 2).unwrap();
    let mut variables = ch.variables.clone();
    variables.sort_by_key(|v| !(v.name == "X1" || v.name == "X2"));
    let x2 = if x2_point {
        vec![1.0, 0.0]
    } else {
        vec![0.5, 0.5]
    };
    let spec = FactorizationSpec {
        variables,
        factors: vec![
            factor(&["X1"], &[], vec![0.5, 0.5]),
            factor(&["X2"], &[], x2),
            ch.factor.clone(),
        ],
    };
    let mut binding = ch.binding.clone();
    binding.insert("U0".into(), names(&["X1"]));
    binding.insert("V0".into(), names(&["X2"]));
    (compose_joint(&spec).unwrap(), binding)
}

fn criterion4() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;

    let (r1, r2) = thm5_capacity(&frac(7, 10), &frac(3, 10), &int(1), &int(1));
    let exact = r1 == frac(2, 5) && r2 == int(0);
    let (f1, f2) = thm5_capacity_f64(0.7, 0.3, &[0.5, 0.5], &[0.5, 0.5]).unwrap();
    let exact_f = f1 == 0.4 && f2 == 0.0;
    notes.push(format!(
        "closed form ({r1}, {r2}) exact {exact}, float ({f1}, {f2})"
    ));
    pass &= exact && exact_f;

    let uniform =
        JointPmf::uniform(vec![VariableSpec::new("X1", 2), VariableSpec::new("X2", 2)]).unwrap();
    let ev = evaluate(
        &builtin_system(RegionId::Thm5NoiselessSwitch),
        &uniform,
        &Binding::new(),
        &Params {
            tau1: Some(0.7),
            tau2: Some(0.3),
        },
    )
    .unwrap();
    let m5 = ev.maxima().unwrap();
    pass &= m5 == [0.4, 0.0];

    // the outer bound is evaluated with the second input held fixed, which
    // is the input distribution the capacity expression is attained with
    let (j, b) = switch_joint(0.7, 0.3, true);
    let ev4 = evaluate(
        &builtin_system(RegionId::Thm4OuterGeneral),
        &j,
        &b,
        &Params::default(),
    )
    .unwrap();
    let m4 = ev4.maxima().unwrap();
    let ok4 = (m4[0] - 0.4).abs() <= 1e-9 && m4[1].abs() <= 1e-9;
    notes.push(format!("outer bound maxima ({:.12}, {:.12})", m4[0], m4[1]));
    pass &= ok4;

    let cfg = AuxSearchConfig {
        samples: 2000,
        seed: 5,
        ..AuxSearchConfig::default()
    };
    let ch = secrecy_regions::dist::noiseless_switch_channel(0.7, 0.3, 2).unwrap();
    let t = Instant::now();
    let env = search_envelope(&builtin_system(RegionId::Thm1Inner), &ch, &cfg).unwrap();
    notes.push(format!(
        "inner search R1 {:.4} in {:.1}s",
        env.max_r1(),
        t.elapsed().as_secs_f64()
    ));
    pass &= env.max_r1() >= 0.38;

    let (e1, e2) = thm5_capacity_f64(0.5, 0.5, &[0.5, 0.5], &[0.5, 0.5]).unwrap();
    let (j, b) = switch_joint(0.5, 0.5, true);
    let m4e = evaluate(
        &builtin_system(RegionId::Thm4OuterGeneral),
        &j,
        &b,
        &Params::default(),
    )
    .unwrap()
    .maxima()
    .unwrap();
    let (j, b) = switch_joint(0.5, 0.5, false);
    let m4u = evaluate(
        &builtin_system(RegionId::Thm4OuterGeneral),
        &j,
        &b,
        &Params::default(),
    )
    .unwrap()
    .maxima()
    .unwrap();
    let ch = secrecy_regions::dist::noiseless_switch_channel(0.5, 0.5, 2).unwrap();
    let env_eq = search_envelope(&builtin_system(RegionId::Thm1Inner), &ch, &cfg).unwrap();
    let zero = [
        e1,
        e2,
        m4e[0],
        m4e[1],
        m4u[0],
        m4u[1],
        env_eq.max_r1(),
        env_eq.max_r2(),
    ];
    let ok_eq = zero.iter().all(|x| x.abs() <= 1e-6);
    notes.push(format!(
        "equal switches: largest maximum {:.1e}",
        zero.iter().fold(0.0f64, |a, x| a.max(x.abs()))
    ));
    pass &= ok_eq;
    outcome(pass, notes.join("; "))
}

fn criterion5() -> Outcome {
    let thm1 = builtin_system(RegionId::Thm1Inner).system;
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut report = Vec::new();
    let mut pass = true;
    let cases: [(Reduction, &str); 3] = [
        (Reduction::CompoundMac, "Q; X1|Q; X2|Q; Y1,Y2|X1,X2"),
        (Reduction::MacWiretap, "Q; U|Q; V|Q; X1|U; X2|V; Y1,Z|X1,X2"),
        (Reduction::ConfidentialBroadcast, "Q; U|Q; X1|U; Y1,Z|X1"),
    ];
    for (red, template) in cases {
        let sys = reduce(&thm1, &red.binding());
        let template = Template::parse(template);
        let q_card = if red == Reduction::CompoundMac { 1 } else { 2 };
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let j = random_joint_with(
                &template,
                &|v| if v == "Q" { q_card } else { 2 },
                0.2,
                &mut rng,
            )
            .unwrap();
            let got = planar(&sys, &j);
            let rows: Vec<([f64; 2], f64)> = match red {
                Reduction::CompoundMac => ["Y1", "Y2"]
                    .iter()
                    .flat_map(|y| {
                        [
                            ([1.0, 0.0], mi(&j, &["X1"], &[y], &["X2"])),
                            ([0.0, 1.0], mi(&j, &["X2"], &[y], &["X1"])),
                            ([1.0, 1.0], mi(&j, &["X1", "X2"], &[y], &[])),
                        ]
                    })
                    .collect(),
                Reduction::MacWiretap => vec![
                    (
                        [1.0, 0.0],
                        mi(&j, &["U"], &["Y1"], &["Q", "V"]) - mi(&j, &["U"], &["Z"], &["Q"]),
                    ),
                    (
                        [0.0, 1.0],
                        mi(&j, &["V"], &["Y1"], &["Q", "U"]) - mi(&j, &["V"], &["Z"], &["Q"]),
                    ),
                    (
                        [1.0, 1.0],
                        mi(&j, &["U", "V"], &["Y1"], &["Q"]) - mi(&j, &["U", "V"], &["Z"], &["Q"]),
                    ),
                ],
                Reduction::ConfidentialBroadcast => vec![
                    (
                        [1.0, 0.0],
                        mi(&j, &["U"], &["Y1"], &["Q"]) - mi(&j, &["U"], &["Z"], &["Q"]),
                    ),
                    ([0.0, 1.0], 0.0),
                ],
            };
            // a negative bound on nonnegative rates leaves only the face at zero
            let rows: Vec<([f64; 2], f64)> =
                rows.into_iter().map(|(a, b)| (a, b.max(0.0))).collect();
            let want = vertices_2d(&rows);
            worst = worst.max(hausdorff_2d(&got, &want));
        }
        pass &= worst <= 1e-9;
        report.push(format!("{red:?} max gap {worst:.1e}"));
    }
    outcome(pass, format!("100 joints each: {}", report.join(", ")))
}

fn criterion6() -> Outcome {
    let s = remark2_sweep(1000, 66, 2, 0.5).unwrap();
    outcome(
        s.counterexamples == 0,
        format!(
            "{} samples, assumption holds on {}, counterexamples {}, max dependence when it holds {:.1e}",
            s.samples, s.assumption_holds, s.counterexamples, s.max_dependence_when_holds
        ),
    )
}

fn criterion7() -> Outcome {
    let joint = lemma1_joint();
    let th = secrecy_regions::sim::Lemma1Thresholds::of(&joint).unwrap();
    let base = Lemma1Config {
        n: 8,
        joint,
        s: th.i_u1 + 0.2,
        t: th.i_v1 + 0.2,
        epsilon: 0.8,
        delta: Some(0.1),
        delta1: 0.1,
        delta2: None,
        trials: 200,
        seed: 7,
        z_source: ZSource::Codewords,
    };
    let ns = [8, 10, 12, 14];
    let t = Instant::now();
    let sat = lemma1_sweep(&base, &ns).unwrap();
    let sat_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let viol = lemma1_sweep(
        &Lemma1Config {
            t: th.i_v1 - 0.2,
            ..base.clone()
        },
        &ns,
    )
    .unwrap();
    let viol_secs = t.elapsed().as_secs_f64();
    let p_sat: Vec<f64> = sat.iter().map(|r| r.p_e1).collect();
    let nonincreasing = p_sat.windows(2).all(|w| w[1] <= w[0]);
    let exceed12 = sat[2].exceed_fraction;
    let p_viol14 = viol[3].p_e1;
    let regimes = sat.iter().all(|r| r.regime == Regime::Satisfied)
        && viol.iter().all(|r| r.regime == Regime::Violated);
    let pass = regimes
        && nonincreasing
        && exceed12 <= 0.05
        && p_viol14 >= 0.5
        && sat_secs < 300.0
        && viol_secs < 300.0;
    outcome(
        pass,
        format!(
            "satisfied P(E1) {p_sat:?} nonincreasing {nonincreasing}, exceed at n=12 {exceed12:.3}; violated P(E1) at \
             n=14 {p_viol14:.3}; {sat_secs:.1}s + {viol_secs:.1}s"
        ),
    )
}

fn criterion8() -> Outcome {
    let ns: Vec<usize> = (4..=14).collect();
    let secure = BinningConfig {
        n: 4,
        joint: bsc_source(0.25),
        x: names(&["X"]),
        z: names(&["Z"]),
        rate: 0.3,
        trials: 10,
        seed: 11,
    };
    let t = Instant::now();
    let a = osrb_sweep(&secure, &ns).unwrap();
    let a_secs = t.elapsed().as_secs_f64();
    let x: Vec<f64> = ns.iter().map(|n| *n as f64).collect();
    let tv: Vec<f64> = a.iter().map(|r| r.tv).collect();
    let rho = spearman(&x, &tv);
    let t = Instant::now();
    let b = osrb_sweep(
        &BinningConfig {
            joint: bsc_source(0.1),
            rate: 0.8,
            ..secure.clone()
        },
        &ns,
    )
    .unwrap();
    let b_secs = t.elapsed().as_secs_f64();
    let end = b.last().unwrap().tv;
    outcome(
        rho <= -0.8 && end >= 0.1 && a_secs < 300.0 && b_secs < 300.0,
        format!(
            "secure Spearman {rho:.3} (TV {:.3} -> {:.3}); insecure TV at n=14 {end:.3}; {a_secs:.1}s + {b_secs:.1}s",
            tv[0],
            tv[tv.len() - 1]
        ),
    )
}

fn criterion9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut fme_ok, mut prune_ok, mut worst) = (0, 0, 0.0f64);
    for _ in 0..50 {
        let sys = random_system(&mut rng);
        let oracle = project_xy(&numeric_rows(&sys));
        let mode = if rng.gen::<bool>() {
            Mode::Farkas
        } else {
            Mode::FarkasShannon
        };
        let e = fm_eliminate(&sys, &["z".to_string()], FmOptions { mode, prune: true }).unwrap();
        let rows: Vec<([f64; 2], f64)> = numeric_rows(&e.system)
            .into_iter()
            .map(|(a, b)| {
                let c = |name: &str| {
                    e.system
                        .vars
                        .iter()
                        .position(|v| v == name)
                        .map_or(0.0, |k| a[k])
                };
                ([c("x"), c("y")], b)
            })
            .collect();
        let got = vertices_2d(&rows);
        let h = hausdorff_2d(&got, &oracle);
        worst = worst.max(h);
        if h <= 1e-9 && same_points(&got, &oracle, 1e-9) {
            fme_ok += 1;
        }
        let pruned = remove_redundant(&sys, mode).system;
        if same_points(
            &vertices_3d(&numeric_rows(&sys)),
            &vertices_3d(&numeric_rows(&pruned)),
            1e-9,
        ) {
            prune_ok += 1;
        }
    }
    outcome(
        fme_ok == 50 && prune_ok == 50,
        format!("projection matches on {fme_ok}/50 (max gap {worst:.1e}); redundancy removal preserves {prune_ok}/50"),
    )
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion1),
        (2, criterion2),
        (3, criterion3),
        (4, criterion4),
        (5, criterion5),
        (6, criterion6),
        (7, criterion7),
        (8, criterion8),
        (9, criterion9),
    ];
    // numeric arguments select criteria; everything else is ignored
    let only: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut unexpected = 0;
    for (k, f) in criteria
        .into_iter()
        .filter(|(k, _)| only.is_empty() || only.contains(k))
    {
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && UNATTAINABLE.contains(&k) {
            " [known, see notes]"
        } else {
            ""
        };
        println!("{tag} criterion {k}: {}{note}", o.detail);
        if !o.pass && !UNATTAINABLE.contains(&k) {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
