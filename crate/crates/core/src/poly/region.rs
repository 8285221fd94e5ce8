//! Numeric instances of symbolic systems and planar geometry helpers.

use serde::{Deserialize, Serialize};

use super::{IneqSystem, RateVar};
use crate::dist::{Binding, JointPmf};
use crate::error::Result;
use crate::info::EntropyCache;
use crate::rational;

const FEAS_TOL: f64 = 1e-9;

/// Half-spaces `coeffs . R <= rhs` over `vars`, intersected with the
/// nonnegative orthant.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NumericRegion {
    pub vars: Vec<RateVar>,
    pub rows: Vec<(Vec<f64>, f64)>,
    pub tags: Vec<Option<String>>,
    /// Value of every assumption right-hand side; negative means violated.
    pub assumption_values: Vec<(Option<String>, f64)>,
    /// Indices of rows whose negative bound was raised to zero.
    pub clamped: Vec<usize>,
    /// Counterclockwise vertices when the region is planar.
    pub vertices: Option<Vec<[f64; 2]>>,
}

impl NumericRegion {
    pub fn assumptions_hold(&self, tol: f64) -> bool {
        self.assumption_values.iter().all(|(_, v)| *v >= -tol)
    }

    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        point.iter().all(|x| *x >= -tol)
            && self
                .rows
                .iter()
                .all(|(a, b)| a.iter().zip(point).map(|(x, y)| x * y).sum::<f64>() <= b + tol)
    }

    /// Largest `w . R` over a planar region.
    pub fn support(&self, w: [f64; 2]) -> Option<([f64; 2], f64)> {
        self.vertices
            .as_ref()?
            .iter()
            .map(|p| (*p, w[0] * p[0] + w[1] * p[1]))
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Substitutes entropies from `joint` into every right-hand side.
///
/// A bound that is negative on an inequality whose coefficients are all
/// nonnegative would empty the region; it is raised to zero and reported in
/// `clamped`, so the result collapses onto a face of the orthant instead.
pub fn numeric_region(sys: &IneqSystem, joint: &JointPmf) -> Result<NumericRegion> {
    let mut cache = EntropyCache::new(joint);
    let mut rows = Vec::new();
    let mut tags = Vec::new();
    let mut clamped = Vec::new();
    for (k, i) in sys.ineqs.iter().enumerate() {
        let a: Vec<f64> = sys
            .vars
            .iter()
            .map(|v| rational::to_f64(&i.coeff(v)))
            .collect();
        let mut b = cache.eval(&i.rhs)?;
        if b < 0.0 && a.iter().all(|x| *x >= 0.0) {
            b = 0.0;
            clamped.push(k);
        }
        rows.push((a, b));
        tags.push(i.tag.clone());
    }
    let assumption_values = sys
        .assumptions
        .iter()
        .map(|a| Ok((a.tag.clone(), cache.eval(&a.rhs)?)))
        .collect::<Result<Vec<_>>>()?;
    let vertices = (sys.vars.len() == 2).then(|| {
        let lines: Vec<([f64; 2], f64)> = rows.iter().map(|(a, b)| ([a[0], a[1]], *b)).collect();
        vertices_2d(&lines)
    });
    Ok(NumericRegion {
        vars: sys.vars.clone(),
        rows,
        tags,
        assumption_values,
        clamped,
        vertices,
    })
}

/// Like [`numeric_region`] with the system's symbols bound to joint variables.
pub fn numeric_region_bound(
    sys: &IneqSystem,
    joint: &JointPmf,
    binding: &Binding,
) -> Result<NumericRegion> {
    let syms: Vec<String> = sys
        .all()
        .flat_map(|i| i.rhs.variables())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let bound = joint.bind(binding, &syms)?;
    numeric_region(sys, &bound)
}

/// Vertices of `{x >= 0, a.x <= b}` in the plane, counterclockwise.
/// Unbounded directions are not represented.
pub fn vertices_2d(rows: &[([f64; 2], f64)]) -> Vec<[f64; 2]> {
    let mut lines: Vec<([f64; 2], f64)> = rows.to_vec();
    lines.push(([-1.0, 0.0], 0.0));
    lines.push(([0.0, -1.0], 0.0));
    let feasible = |p: [f64; 2]| {
        lines.iter().all(|(a, b)| {
            let scale = 1.0f64.max(b.abs()).max(a[0].abs()).max(a[1].abs());
            a[0] * p[0] + a[1] * p[1] <= b + FEAS_TOL * scale
        })
    };
    let mut pts = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let ([a1, b1], c1) = lines[i];
            let ([a2, b2], c2) = lines[j];
            let det = a1 * b2 - a2 * b1;
            if det.abs() < 1e-12 {
                continue;
            }
            let p = [(c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det];
            if p[0].is_finite() && p[1].is_finite() && feasible(p) {
                pts.push(p);
            }
        }
    }
    hull_2d(&pts)
}

/// Convex hull, counterclockwise from the lowest-leftmost point, without
/// collinear points. Coordinates are first rounded to multiples of
/// `1e-12`, which merges near-duplicates; otherwise rounding noise in a
/// degenerate region can reorder points and lose an endpoint.
pub fn hull_2d(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    // adding zero turns -0.0 into 0.0, which total_cmp would order first
    let snap = |x: f64| (x * 1e12).round() / 1e12 + 0.0;
    let mut p: Vec<[f64; 2]> = points.iter().map(|q| [snap(q[0]), snap(q[1])]).collect();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup();
    if p.len() <= 2 {
        return p;
    }
    let cross = |o: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &q in &p {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], q) <= 1e-15
        {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &q in p.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], q) <= 1e-15
        {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn dist_point_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    let q = [a[0] + t * d[0], a[1] + t * d[1]];
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

/// Distance from `p` to a convex counterclockwise polygon; zero inside.
pub fn dist_to_polygon(p: [f64; 2], poly: &[[f64; 2]]) -> f64 {
    match poly.len() {
        0 => f64::INFINITY,
        1 => dist_point_segment(p, poly[0], poly[0]),
        2 => dist_point_segment(p, poly[0], poly[1]),
        n => {
            let inside = (0..n).all(|i| {
                let (a, b) = (poly[i], poly[(i + 1) % n]);
                (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0.0
            });
            if inside {
                return 0.0;
            }
            (0..n)
                .map(|i| dist_point_segment(p, poly[i], poly[(i + 1) % n]))
                .fold(f64::INFINITY, f64::min)
        }
    }
}

/// Hausdorff distance between two convex polygons given by their vertices.
pub fn hausdorff_2d(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let one = a.iter().map(|p| dist_to_polygon(*p, b)).fold(0.0, f64::max);
    let two = b.iter().map(|p| dist_to_polygon(*p, a)).fold(0.0, f64::max);
    one.max(two)
}

/// Two planar vertex lists describe the same region within `tol`: every
/// vertex of each lies within `tol` of the other polygon.
pub fn regions_match_2d(a: &[[f64; 2]], b: &[[f64; 2]], tol: f64) -> bool {
    hausdorff_2d(a, b) <= tol
}
