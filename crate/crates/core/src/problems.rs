//! Box-constrained benchmark problems: UF1, UF2, UF3, UF10 from the CEC 2009
//! unconstrained suite and DTLZ5, DTLZ6 with three objectives.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum ProblemId {
    Uf1,
    Uf2,
    Uf3,
    Uf10,
    Dtlz5,
    Dtlz6,
}

impl ProblemId {
    pub const ALL: [ProblemId; 6] = [
        ProblemId::Uf1,
        ProblemId::Uf2,
        ProblemId::Uf3,
        ProblemId::Uf10,
        ProblemId::Dtlz5,
        ProblemId::Dtlz6,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::Uf1 => "UF1",
            ProblemId::Uf2 => "UF2",
            ProblemId::Uf3 => "UF3",
            ProblemId::Uf10 => "UF10",
            ProblemId::Dtlz5 => "DTLZ5",
            ProblemId::Dtlz6 => "DTLZ6",
        }
    }

    pub fn objectives(self) -> usize {
        match self {
            ProblemId::Uf1 | ProblemId::Uf2 | ProblemId::Uf3 => 2,
            ProblemId::Uf10 | ProblemId::Dtlz5 | ProblemId::Dtlz6 => 3,
        }
    }

    /// 30 variables for the UF instances, `k + 9` for DTLZ.
    pub fn default_dimension(self) -> usize {
        match self {
            ProblemId::Dtlz5 | ProblemId::Dtlz6 => self.objectives() + 9,
            _ => 30,
        }
    }

    fn min_dimension(self) -> usize {
        match self {
            ProblemId::Uf1 | ProblemId::Uf2 | ProblemId::Uf3 => 3,
            ProblemId::Uf10 => 5,
            ProblemId::Dtlz5 | ProblemId::Dtlz6 => self.objectives(),
        }
    }

    /// Default number of reference-front points used for indicators.
    pub fn default_reference_size(self) -> usize {
        if self.objectives() == 2 {
            1000
        } else {
            2500
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownId {
                kind: "problem",
                name: s.to_string(),
            })
    }
}

impl TryFrom<String> for ProblemId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ProblemId> for String {
    fn from(id: ProblemId) -> String {
        id.as_str().to_string()
    }
}

/// A benchmark instance with a fixed decision dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Problem {
    id: ProblemId,
    n: usize,
}

impl Problem {
    pub fn new(id: ProblemId) -> Self {
        Self {
            id,
            n: id.default_dimension(),
        }
    }

    pub fn with_dimension(id: ProblemId, n: usize) -> Result<Self> {
        if n < id.min_dimension() {
            return Err(Error::InvalidParameter(format!(
                "{id} needs at least {} decision variables, got {n}",
                id.min_dimension()
            )));
        }
        Ok(Self { id, n })
    }

    pub fn id(&self) -> ProblemId {
        self.id
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn objectives(&self) -> usize {
        self.id.objectives()
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        match self.id {
            ProblemId::Uf1 | ProblemId::Uf2 => {
                let mut b = vec![(-1.0, 1.0); self.n];
                b[0] = (0.0, 1.0);
                b
            }
            ProblemId::Uf3 | ProblemId::Dtlz5 | ProblemId::Dtlz6 => vec![(0.0, 1.0); self.n],
            ProblemId::Uf10 => {
                let mut b = vec![(-2.0, 2.0); self.n];
                b[0] = (0.0, 1.0);
                b[1] = (0.0, 1.0);
                b
            }
        }
    }

    /// Evaluates `x` after checking its length and bounds.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: x.len(),
            });
        }
        for (index, (&value, (lower, upper))) in x.iter().zip(self.bounds()).enumerate() {
            if !(lower..=upper).contains(&value) {
                return Err(Error::OutOfBounds {
                    index,
                    value,
                    lower,
                    upper,
                });
            }
        }
        Ok(self.evaluate_unchecked(x))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &[f64]) -> Vec<f64> {
        match self.id {
            ProblemId::Uf1 => uf1(x),
            ProblemId::Uf2 => uf2(x),
            ProblemId::Uf3 => uf3(x),
            ProblemId::Uf10 => uf10(x),
            ProblemId::Dtlz5 => dtlz5_like(x, self.objectives(), dtlz5_g(x, self.objectives())),
            ProblemId::Dtlz6 => dtlz5_like(x, self.objectives(), dtlz6_g(x, self.objectives())),
        }
    }

    /// `m` evenly parameterized points of the analytic Pareto front.
    pub fn true_front_sample(&self, m: usize) -> Result<Vec<Vec<f64>>> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!(
                "reference front needs at least 2 points, got {m}"
            )));
        }
        let step = |i: usize| i as f64 / (m - 1) as f64;
        let points = match self.id {
            // uniform in sqrt(f1): f1 = t^2, f2 = 1 - t
            ProblemId::Uf1 | ProblemId::Uf2 | ProblemId::Uf3 => (0..m)
                .map(|i| {
                    let t = step(i);
                    vec![t * t, 1.0 - t]
                })
                .collect(),
            ProblemId::Dtlz5 | ProblemId::Dtlz6 => (0..m)
                .map(|i| {
                    let theta = step(i) * FRAC_PI_2;
                    let c = theta.cos() / SQRT_2;
                    vec![c, c, theta.sin()]
                })
                .collect(),
            ProblemId::Uf10 => sphere_octant(m),
        };
        Ok(points)
    }

    pub fn default_true_front(&self) -> Vec<Vec<f64>> {
        self.true_front_sample(self.id.default_reference_size())
            .expect("default reference size is at least 2")
    }
}

/// Equal-area spiral over the positive octant of the unit sphere. The height
/// runs uniformly from the equator to the pole while the azimuth follows the
/// golden-ratio sequence.
fn sphere_octant(m: usize) -> Vec<Vec<f64>> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    (0..m)
        .map(|i| {
            let z = i as f64 / (m - 1) as f64;
            let phi = (i as f64 * golden).fract() * FRAC_PI_2;
            let r = (1.0 - z * z).max(0.0).sqrt();
            vec![r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

/// 1-based index sets used by the UF instances.
fn odd_even_split(n: usize) -> (Vec<usize>, Vec<usize>) {
    let odd = (3..=n).filter(|j| j % 2 == 1).collect();
    let even = (2..=n).filter(|j| j % 2 == 0).collect();
    (odd, even)
}

fn mean_times_two(sum: f64, count: usize) -> f64 {
    2.0 * sum / count as f64
}

fn uf1(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let nf = n as f64;
    let (j1, j2) = odd_even_split(n);
    let y = |j: usize| x[j - 1] - (6.0 * PI * x[0] + j as f64 * PI / nf).sin();
    let s1: f64 = j1.iter().map(|&j| y(j).powi(2)).sum();
    let s2: f64 = j2.iter().map(|&j| y(j).powi(2)).sum();
    vec![
        x[0] + mean_times_two(s1, j1.len()),
        1.0 - x[0].sqrt() + mean_times_two(s2, j2.len()),
    ]
}

fn uf2(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let nf = n as f64;
    let x1 = x[0];
    let (j1, j2) = odd_even_split(n);
    let amplitude =
        |j: usize| 0.3 * x1 * x1 * (24.0 * PI * x1 + 4.0 * j as f64 * PI / nf).cos() + 0.6 * x1;
    let angle = |j: usize| 6.0 * PI * x1 + j as f64 * PI / nf;
    let s1: f64 = j1
        .iter()
        .map(|&j| (x[j - 1] - amplitude(j) * angle(j).cos()).powi(2))
        .sum();
    let s2: f64 = j2
        .iter()
        .map(|&j| (x[j - 1] - amplitude(j) * angle(j).sin()).powi(2))
        .sum();
    vec![
        x1 + mean_times_two(s1, j1.len()),
        1.0 - x1.sqrt() + mean_times_two(s2, j2.len()),
    ]
}

fn uf3(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let x1 = x[0];
    let (j1, j2) = odd_even_split(n);
    let y = |j: usize| {
        let exponent = 0.5 * (1.0 + 3.0 * (j as f64 - 2.0) / (n as f64 - 2.0));
        x[j - 1] - x1.powf(exponent)
    };
    let term = |set: &[usize]| {
        let mut sum = 0.0;
        let mut prod = 1.0;
        for &j in set {
            let yj = y(j);
            sum += yj * yj;
            prod *= (20.0 * yj * PI / (j as f64).sqrt()).cos();
        }
        mean_times_two(4.0 * sum - 2.0 * prod + 2.0, set.len())
    };
    vec![x1 + term(&j1), 1.0 - x1.sqrt() + term(&j2)]
}

fn uf10(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let nf = n as f64;
    let (x1, x2) = (x[0], x[1]);
    let mut sums = [0.0; 3];
    let mut counts = [0usize; 3];
    for j in 3..=n {
        let y = x[j - 1] - 2.0 * x2 * (2.0 * PI * x1 + j as f64 * PI / nf).sin();
        let h = 4.0 * y * y - (8.0 * PI * y).cos() + 1.0;
        // j-1 divisible by 3 -> f1, j-2 -> f2, j -> f3
        let slot = match j % 3 {
            1 => 0,
            2 => 1,
            _ => 2,
        };
        sums[slot] += h;
        counts[slot] += 1;
    }
    let (a, b) = (0.5 * x1 * PI, 0.5 * x2 * PI);
    vec![
        a.cos() * b.cos() + mean_times_two(sums[0], counts[0]),
        a.cos() * b.sin() + mean_times_two(sums[1], counts[1]),
        a.sin() + mean_times_two(sums[2], counts[2]),
    ]
}

fn dtlz5_g(x: &[f64], k: usize) -> f64 {
    x[k - 1..].iter().map(|v| (v - 0.5).powi(2)).sum()
}

fn dtlz6_g(x: &[f64], k: usize) -> f64 {
    x[k - 1..].iter().map(|v| v.powf(0.1)).sum()
}

fn dtlz5_like(x: &[f64], k: usize, g: f64) -> Vec<f64> {
    let t = PI / (4.0 * (1.0 + g));
    let mut theta = Vec::with_capacity(k - 1);
    theta.push(x[0] * FRAC_PI_2);
    theta.extend(x[1..k - 1].iter().map(|v| t * (1.0 + 2.0 * g * v)));

    (0..k)
        .map(|i| {
            let mut f = 1.0 + g;
            for th in &theta[..k - 1 - i] {
                f *= th.cos();
            }
            if i > 0 {
                f *= theta[k - 1 - i].sin();
            }
            f
        })
        .collect()
}
