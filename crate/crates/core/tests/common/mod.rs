#![allow(dead_code)]

use rand::Rng;
use secrecy_regions::dist::{compose_joint, Factor, FactorizationSpec, JointPmf, VariableSpec};
use secrecy_regions::info::{entropy, InfoExpr};
use secrecy_regions::poly::{hull_2d, IneqSystem, LinIneq};
use secrecy_regions::rational;

fn s(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// `I(A;B|C)` straight from joint entropies.
pub fn mi(j: &JointPmf, a: &[&str], b: &[&str], c: &[&str]) -> f64 {
    let h = |parts: &[&[&str]]| {
        let mut v: Vec<String> = parts.iter().flat_map(|p| s(p)).collect();
        v.sort();
        v.dedup();
        if v.is_empty() {
            0.0
        } else {
            entropy(j, &v).unwrap()
        }
    };
    h(&[a, c]) + h(&[b, c]) - h(&[a, b, c]) - h(&[c])
}

pub fn factor(t: &[&str], g: &[&str], table: Vec<f64>) -> Factor {
    Factor {
        targets: s(t),
        givens: s(g),
        table,
    }
}

/// Uniform bits `U1`, `V1`, trivial `Q, U0, V0` and `Z = V1`.
pub fn lemma1_joint() -> JointPmf {
    let mut variables: Vec<VariableSpec> = ["Q", "U0", "V0"]
        .iter()
        .map(|v| VariableSpec::new(v, 1))
        .collect();
    variables.extend(["U1", "V1", "Z"].iter().map(|v| VariableSpec::new(v, 2)));
    compose_joint(&FactorizationSpec {
        variables,
        factors: vec![
            factor(&["Q"], &[], vec![1.0]),
            factor(&["U0"], &[], vec![1.0]),
            factor(&["V0"], &[], vec![1.0]),
            factor(&["U1"], &[], vec![0.5, 0.5]),
            factor(&["V1"], &[], vec![0.5, 0.5]),
            factor(
                &["Z"],
                &["U1", "V1"],
                vec![1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0],
            ),
        ],
    })
    .unwrap()
}

/// Uniform bit `X` seen by the eavesdropper through a binary symmetric
/// channel with crossover `p`.
pub fn bsc_source(p: f64) -> JointPmf {
    compose_joint(&FactorizationSpec {
        variables: vec![VariableSpec::new("X", 2), VariableSpec::new("Z", 2)],
        factors: vec![
            factor(&["X"], &[], vec![0.5, 0.5]),
            factor(&["Z"], &["X"], vec![1.0 - p, p, p, 1.0 - p]),
        ],
    })
    .unwrap()
}

/// Solves a 3x3 system by Cramer's rule.
fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d.abs() < 1e-12 {
        return None;
    }
    let mut x = [0.0; 3];
    for (k, xk) in x.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][k] = b[r];
        }
        *xk = det(m) / d;
    }
    Some(x)
}

/// Rows `a . x <= b` of a system whose right-hand sides are constants,
/// over its declared variables, with nonnegativity appended.
pub fn numeric_rows(sys: &IneqSystem) -> Vec<(Vec<f64>, f64)> {
    let n = sys.vars.len();
    let mut rows: Vec<(Vec<f64>, f64)> = sys
        .ineqs
        .iter()
        .map(|i| {
            assert!(i.rhs.terms().is_empty(), "non-constant right-hand side");
            (
                sys.vars
                    .iter()
                    .map(|v| rational::to_f64(&i.coeff(v)))
                    .collect(),
                rational::to_f64(i.rhs.constant_term()),
            )
        })
        .collect();
    for k in 0..n {
        let mut a = vec![0.0; n];
        a[k] = -1.0;
        rows.push((a, 0.0));
    }
    rows
}

/// Every vertex of a bounded polytope in three dimensions by brute force.
pub fn vertices_3d(rows: &[(Vec<f64>, f64)]) -> Vec<[f64; 3]> {
    let mut out: Vec<[f64; 3]> = Vec::new();
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            for k in j + 1..rows.len() {
                let a = [0, 1, 2].map(|c| [rows[i].0[c], rows[j].0[c], rows[k].0[c]]);
                let a = [
                    [a[0][0], a[1][0], a[2][0]],
                    [a[0][1], a[1][1], a[2][1]],
                    [a[0][2], a[1][2], a[2][2]],
                ];
                let Some(p) = solve3(a, [rows[i].1, rows[j].1, rows[k].1]) else {
                    continue;
                };
                let ok = rows
                    .iter()
                    .all(|(r, b)| r[0] * p[0] + r[1] * p[1] + r[2] * p[2] <= b + 1e-9);
                if ok
                    && !out
                        .iter()
                        .any(|q| (0..3).all(|c| (q[c] - p[c]).abs() < 1e-9))
                {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Projection onto the first two coordinates by vertex enumeration.
pub fn project_xy(rows: &[(Vec<f64>, f64)]) -> Vec<[f64; 2]> {
    let pts: Vec<[f64; 2]> = vertices_3d(rows).iter().map(|p| [p[0], p[1]]).collect();
    hull_2d(&pts)
}

/// Random bounded system over `x, y, z` with integer data.
pub fn random_system<R: Rng>(rng: &mut R) -> IneqSystem {
    let vars: Vec<String> = s(&["x", "y", "z"]);
    let mut sys = IneqSystem::new(vars.clone());
    let rows = rng.gen_range(2..6);
    for _ in 0..rows {
        let coeffs: Vec<(String, rational::Rational)> = vars
            .iter()
            .map(|v| (v.clone(), rational::int(rng.gen_range(-3..=3))))
            .filter(|(_, c)| *c != rational::int(0))
            .collect();
        if coeffs.is_empty() {
            continue;
        }
        let b = rational::int(rng.gen_range(0..8));
        sys.push(LinIneq::le(coeffs, InfoExpr::constant(b)));
    }
    // keep it bounded
    let bound = rational::int(rng.gen_range(4..12));
    sys.push(LinIneq::le(
        vars.iter().map(|v| (v.clone(), rational::int(1))),
        InfoExpr::constant(bound),
    ));
    sys
}

/// Same point sets up to `tol`.
pub fn same_points<const D: usize>(a: &[[f64; D]], b: &[[f64; D]], tol: f64) -> bool {
    let within = |p: &[f64; D], q: &[f64; D]| (0..D).all(|c| (p[c] - q[c]).abs() <= tol);
    a.iter().all(|p| b.iter().any(|q| within(p, q)))
        && b.iter().all(|p| a.iter().any(|q| within(p, q)))
}
