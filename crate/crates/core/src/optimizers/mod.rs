//! Comparison baselines: an OMOPSO-style swarm and NSGA-II.

mod nsga2;
mod omopso;
mod particle;
mod variation;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::{lexicographic, non_dominated_indices, Solution};
use crate::problems::ProblemId;

pub use nsga2::{run_nsga2, GaParams};
pub use omopso::{run_omopso, Omopso};
pub use particle::{pso_update, turbulence, Mutation, Particle, PsoParams};
pub use variation::{polynomial_mutation, sbx_crossover};

pub(crate) use particle::{check_range, crowding_tournament, fly, mutate, random_position, Pull};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Algorithm {
    Nsga2,
    Omopso,
    MopsoCa,
}

impl Algorithm {
    /// Column order of the summary table.
    pub const ALL: [Algorithm; 3] = [Algorithm::Nsga2, Algorithm::Omopso, Algorithm::MopsoCa];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Nsga2 => "nsga2",
            Algorithm::Omopso => "omopso",
            Algorithm::MopsoCa => "mopso-ca",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Nsga2 => "NSGA-II",
            Algorithm::Omopso => "OMOPSO",
            Algorithm::MopsoCa => "MOPSO-CA",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str().eq_ignore_ascii_case(s) || a.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownId {
                kind: "algorithm",
                name: s.to_string(),
            })
    }
}

impl TryFrom<String> for Algorithm {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Algorithm> for String {
    fn from(a: Algorithm) -> String {
        a.as_str().to_string()
    }
}

/// Outcome of one seeded optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub algorithm: Algorithm,
    pub problem: ProblemId,
    pub seed: u64,
    pub evaluations_used: usize,
    /// Mutually non-dominated, duplicate-free in objective space.
    pub final_front: Vec<Solution>,
}

impl RunResult {
    pub fn objectives(&self) -> Vec<Vec<f64>> {
        self.final_front.iter().map(|s| s.f.clone()).collect()
    }
}

/// Non-dominated members of `candidates` with duplicate objective vectors
/// collapsed, sorted lexicographically.
pub(crate) fn non_dominated_front(candidates: &[Solution]) -> Vec<Solution> {
    let mut front: Vec<Solution> = non_dominated_indices(candidates)
        .into_iter()
        .map(|i| candidates[i].clone())
        .collect();
    front.sort_by(|a, b| lexicographic(&a.f, &b.f));
    front.dedup_by(|a, b| a.f == b.f);
    front
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithm_ids_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
            assert_eq!(a.label().parse::<Algorithm>().unwrap(), a);
        }
        assert!("spea2".parse::<Algorithm>().is_err());
    }
}
