//! Exact hypervolume by slicing objectives.
//!
//! Two objectives use a sorted sweep. Higher dimensions slice along the last
//! objective and recurse on the projection of every point at or below the
//! slice, bottoming out in the sweep.

use crate::error::{Error, Result};
use crate::pareto::Objectives;

/// Lebesgue measure of the region dominated by `approx` and bounded by
/// `ref_point`. Points that do not strictly dominate the reference point are
/// dropped; an empty remainder yields 0.
pub fn hypervolume<T: Objectives>(approx: &[T], ref_point: &[f64]) -> Result<f64> {
    let k = ref_point.len();
    if k < 2 {
        return Err(Error::InvalidParameter(
            "hypervolume needs at least two objectives".into(),
        ));
    }
    if ref_point.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("reference point"));
    }
    let mut points = Vec::with_capacity(approx.len());
    for p in approx {
        let f = p.objectives();
        if f.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: f.len(),
            });
        }
        if f.iter().zip(ref_point).all(|(v, r)| v < r) {
            points.push(f.to_vec());
        }
    }
    Ok(slice(points, ref_point))
}

fn slice(mut points: Vec<Vec<f64>>, ref_point: &[f64]) -> f64 {
    let k = ref_point.len();
    if points.is_empty() {
        return 0.0;
    }
    if k == 2 {
        return sweep_2d(points, ref_point);
    }
    let last = k - 1;
    points.sort_by(|a, b| a[last].total_cmp(&b[last]));
    let mut volume = 0.0;
    let mut projected: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for i in 0..points.len() {
        projected.push(points[i][..last].to_vec());
        let upper = points.get(i + 1).map_or(ref_point[last], |p| p[last]);
        let depth = upper - points[i][last];
        if depth > 0.0 {
            volume += depth * slice(non_dominated(&projected), &ref_point[..last]);
        }
    }
    volume
}

fn non_dominated(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    crate::pareto::non_dominated_indices(points)
        .into_iter()
        .map(|i| points[i].clone())
        .collect()
}

fn sweep_2d(mut points: Vec<Vec<f64>>, ref_point: &[f64]) -> f64 {
    points.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut volume = 0.0;
    let mut ceiling = ref_point[1];
    for p in &points {
        if p[1] < ceiling {
            volume += (ref_point[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    volume
}
