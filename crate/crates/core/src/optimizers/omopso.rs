use crate::error::Result;
use crate::pareto::{BoundedArchive, Solution};
use crate::problems::Problem;
use crate::rng::{seeded, RunRng};

use super::{
    crowding_tournament, mutate, non_dominated_front, pso_update, random_position, Algorithm,
    Particle, PsoParams, RunResult,
};

/// Single-swarm MOPSO with a crowding-truncated leader archive.
///
/// Each iteration every particle draws a leader from the archive by binary
/// tournament on crowding distance, moves, is optionally perturbed, and is
/// re-evaluated. All new positions are then offered to the archive.
#[derive(Debug, Clone)]
pub struct Omopso {
    problem: Problem,
    params: PsoParams,
    bounds: Vec<(f64, f64)>,
    seed: u64,
    rng: RunRng,
    particles: Vec<Particle>,
    archive: BoundedArchive,
    evaluations: usize,
    iteration: usize,
}

impl Omopso {
    pub fn new(problem: Problem, params: PsoParams, seed: u64) -> Result<Self> {
        params.validate()?;
        let bounds = problem.bounds();
        let mut rng = seeded(seed);
        let mut archive = BoundedArchive::new(params.archive_capacity)?;
        let mut particles = Vec::with_capacity(params.population);
        for _ in 0..params.population {
            let x = random_position(&bounds, &mut rng);
            let f = problem.evaluate_unchecked(&x);
            let position = Solution::new(x, f);
            archive.insert(position.clone());
            particles.push(Particle::at_rest(position));
        }
        Ok(Self {
            evaluations: particles.len(),
            problem,
            params,
            bounds,
            seed,
            rng,
            particles,
            archive,
            iteration: 0,
        })
    }

    pub fn step(&mut self) {
        let leaders = self.archive.members().to_vec();
        let crowding = self.archive.crowding();
        for (index, particle) in self.particles.iter_mut().enumerate() {
            let leader = &leaders[crowding_tournament(&crowding, &mut self.rng)];
            pso_update(particle, &leader.x, &self.params, &self.bounds, &mut self.rng);
            mutate(particle, index, self.params.mutation, &self.bounds, &mut self.rng);
            particle.f = self.problem.evaluate_unchecked(&particle.x);
            particle.update_pbest(&mut self.rng);
        }
        self.evaluations += self.particles.len();
        for particle in &self.particles {
            self.archive.insert(particle.position());
        }
        self.iteration += 1;
    }

    pub fn run(mut self) -> RunResult {
        while self.iteration < self.params.iterations {
            self.step();
        }
        self.into_result()
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn archive(&self) -> &BoundedArchive {
        &self.archive
    }

    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn into_result(self) -> RunResult {
        RunResult {
            algorithm: Algorithm::Omopso,
            problem: self.problem.id(),
            seed: self.seed,
            evaluations_used: self.evaluations,
            final_front: non_dominated_front(self.archive.members()),
        }
    }
}

pub fn run_omopso(problem: &Problem, params: &PsoParams, seed: u64) -> Result<RunResult> {
    Ok(Omopso::new(*problem, params.clone(), seed)?.run())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::{dominates, lexicographic};
    use crate::problems::ProblemId;

    fn small(iterations: usize) -> PsoParams {
        PsoParams {
            population: 30,
            archive_capacity: 20,
            iterations,
            ..PsoParams::default()
        }
    }

    #[test]
    fn zero_iterations_returns_initial_non_dominated_subset() {
        let problem = Problem::new(ProblemId::Uf1);
        let params = PsoParams { archive_capacity: 200, ..small(0) };
        let swarm = Omopso::new(problem, params.clone(), 4).unwrap();
        let initial: Vec<Solution> = swarm.particles().iter().map(|p| p.position()).collect();
        let result = run_omopso(&problem, &params, 4).unwrap();
        assert_eq!(result.final_front, non_dominated_front(&initial));
        assert_eq!(result.evaluations_used, 30);
    }

    #[test]
    fn same_seed_same_front() {
        let problem = Problem::new(ProblemId::Dtlz5);
        let a = run_omopso(&problem, &small(20), 9).unwrap();
        let b = run_omopso(&problem, &small(20), 9).unwrap();
        assert_eq!(a, b);
        let c = run_omopso(&problem, &small(20), 10).unwrap();
        assert_ne!(a.final_front, c.final_front);
    }

    #[test]
    fn invariants_hold_every_iteration() {
        let problem = Problem::new(ProblemId::Uf10);
        let mut swarm = Omopso::new(problem, small(0), 1).unwrap();
        let bounds = problem.bounds();
        for it in 1..=30 {
            let before: Vec<Solution> = swarm.particles().iter().map(|p| p.pbest.clone()).collect();
            swarm.step();
            assert_eq!(swarm.evaluations(), 30 * (it + 1));
            for p in swarm.particles() {
                for (x, &(l, u)) in p.x.iter().zip(&bounds) {
                    assert!((l..=u).contains(x));
                }
                assert_eq!(p.f, problem.evaluate(&p.x).unwrap());
            }
            for (p, old) in swarm.particles().iter().zip(&before) {
                assert!(!dominates(&old.f, &p.pbest.f), "pbest degraded");
            }
            let members = swarm.archive().members();
            assert!(members.len() <= 20);
            for a in members {
                for b in members {
                    assert!(!dominates(&a.f, &b.f));
                }
            }
        }
    }

    #[test]
    fn final_front_is_sorted_and_non_dominated() {
        let r = run_omopso(&Problem::new(ProblemId::Uf2), &small(10), 3).unwrap();
        for w in r.final_front.windows(2) {
            assert!(lexicographic(&w[0].f, &w[1].f).is_lt());
        }
    }
}
