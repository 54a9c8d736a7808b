//! Quality indicators: Spread (SP), Inverted Generational Distance (IGD) and
//! Hypervolume (HV).

mod hypervolume;

pub use hypervolume::hypervolume;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::{lexicographic, Objectives};

/// Indicator values of one approximation set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Indicators {
    pub sp: f64,
    pub igd: f64,
    pub hv: f64,
}

impl Indicators {
    pub fn compute<T: Objectives, R: Objectives>(
        approx: &[T],
        reference: &[R],
        ref_point: &[f64],
    ) -> Result<Self> {
        Ok(Self {
            sp: spread(approx, reference)?,
            igd: igd(approx, reference)?,
            hv: hypervolume(approx, ref_point)?,
        })
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn nearest<T: Objectives>(p: &[f64], set: &[T]) -> f64 {
    set.iter()
        .map(|q| distance(p, q.objectives()))
        .fold(f64::INFINITY, f64::min)
}

fn check_sets<T: Objectives, R: Objectives>(approx: &[T], reference: &[R]) -> Result<usize> {
    if approx.is_empty() {
        return Err(Error::Empty("approximation set"));
    }
    if reference.is_empty() {
        return Err(Error::Empty("reference set"));
    }
    let k = reference[0].objectives().len();
    for p in approx.iter().map(|p| p.objectives()).chain(reference.iter().map(|r| r.objectives())) {
        if p.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: p.len(),
            });
        }
    }
    Ok(k)
}

/// Mean distance from each reference point to its nearest approximation point.
pub fn igd<T: Objectives, R: Objectives>(approx: &[T], reference: &[R]) -> Result<f64> {
    check_sets(approx, reference)?;
    let total: f64 = reference
        .iter()
        .map(|r| nearest(r.objectives(), approx))
        .sum();
    Ok(total / reference.len() as f64)
}

/// Spread of `approx` relative to the extremes of `reference`.
///
/// Two objectives use the Δ-spread over consecutive gaps along the front
/// sorted by the first objective. Three or more objectives use the
/// generalized form with nearest-neighbour gaps and one extreme per
/// objective. Fewer than two points, or a fully collapsed front, give 1.
pub fn spread<T: Objectives, R: Objectives>(approx: &[T], reference: &[R]) -> Result<f64> {
    let k = check_sets(approx, reference)?;
    if approx.len() < 2 {
        return Ok(1.0);
    }
    let mut front: Vec<&[f64]> = approx.iter().map(|p| p.objectives()).collect();
    front.sort_by(|a, b| lexicographic(a, b));

    let value = if k == 2 {
        delta_spread(&front, reference)
    } else {
        generalized_spread(&front, reference)
    };
    Ok(value)
}

/// Reference member with the largest value in each objective.
fn extremes<R: Objectives>(reference: &[R], k: usize) -> Vec<&[f64]> {
    (0..k)
        .map(|m| {
            reference
                .iter()
                .map(|r| r.objectives())
                .max_by(|a, b| a[m].total_cmp(&b[m]).then_with(|| lexicographic(b, a)))
                .expect("reference is non-empty")
        })
        .collect()
}

fn delta_spread<R: Objectives>(front: &[&[f64]], reference: &[R]) -> f64 {
    // extremes()[1] has the largest f2, i.e. the first end of a front sorted by f1
    let ends = extremes(reference, 2);
    let d_first = nearest(ends[1], front);
    let d_last = nearest(ends[0], front);

    let gaps: Vec<f64> = front.windows(2).map(|w| distance(w[0], w[1])).collect();
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    let deviation: f64 = gaps.iter().map(|d| (d - mean).abs()).sum();

    let denominator = d_first + d_last + gaps.len() as f64 * mean;
    if denominator == 0.0 {
        return 1.0;
    }
    (d_first + d_last + deviation) / denominator
}

fn generalized_spread<R: Objectives>(front: &[&[f64]], reference: &[R]) -> f64 {
    let k = front[0].len();
    let n = front.len();
    let d_extremes: f64 = extremes(reference, k)
        .into_iter()
        .map(|e| nearest(e, front))
        .sum();

    let neighbour: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| distance(front[i], front[j]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mean = neighbour.iter().sum::<f64>() / n as f64;
    let deviation: f64 = neighbour.iter().map(|d| (d - mean).abs()).sum();

    let denominator = d_extremes + n as f64 * mean;
    if denominator == 0.0 {
        return 1.0;
    }
    (d_extremes + deviation) / denominator
}

/// Component-wise maximum of `points`.
pub fn nadir<T: Objectives>(points: &[T]) -> Result<Vec<f64>> {
    let first = points.first().ok_or(Error::Empty("point set"))?.objectives();
    let mut out = first.to_vec();
    for p in points {
        for (o, v) in out.iter_mut().zip(p.objectives()) {
            *o = o.max(*v);
        }
    }
    Ok(out)
}

/// Hypervolume reference point: the nadir of `reference` scaled by 1.1.
pub fn reference_point<T: Objectives>(reference: &[T]) -> Result<Vec<f64>> {
    Ok(nadir(reference)?.into_iter().map(|v| 1.1 * v).collect())
}
