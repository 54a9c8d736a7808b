//! Multi-objective particle swarm optimization with cooperating agents.
//!
//! The population is split by Pareto ranking into sub-populations, each one
//! driven by an agent that keeps its own local archive. Agents elect a shared
//! global leader every iteration through a call-for-proposal negotiation, and
//! particles are pulled towards their personal best, their sub-population
//! leader and the elected global leader.
//!
//! Alongside the cooperative optimizer the crate ships:
//!
//! * [`pareto`]: dominance, non-dominated sorting, crowding distance and
//!   bounded archives shared by every optimizer,
//! * [`problems`]: the DTLZ5, DTLZ6, UF1, UF2, UF3 and UF10 benchmarks with
//!   reference front samplers,
//! * [`metrics`]: spread, inverted generational distance and hypervolume,
//! * [`optimizers`]: an OMOPSO-style swarm and NSGA-II baselines,
//! * [`agents`]: the cooperative agent optimizer itself,
//! * [`experiment`]: seeded batch experiments and report generation.

pub mod agents;
pub mod error;
pub mod experiment;
pub mod front_file;
pub mod metrics;
pub mod optimizers;
pub mod pareto;
pub mod problems;
pub mod rng;

pub use agents::{run_mopso_ca, CaParams, MopsoCa};
pub use error::{Error, Result};
pub use optimizers::{run_nsga2, run_omopso, Algorithm, GaParams, PsoParams, RunResult};
pub use pareto::{BoundedArchive, Dominance, Front, Solution};
pub use problems::{Problem, ProblemId};
