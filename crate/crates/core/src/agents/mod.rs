//! Cooperative-agent MOPSO.
//!
//! The swarm is split by Pareto ranking into sub-populations, one per agent.
//! Between two synchronization barriers every agent runs a MOPSO step on its
//! own particles, guided by its personal best, a leader drawn from its local
//! archive and the global leader elected by negotiation. At the barrier the
//! global archive absorbs the new positions in agent order and the swarm is
//! periodically re-ranked and re-split. Agent `i` keeps its local archive
//! across re-splits.

mod negotiation;

pub use negotiation::{
    evaluate_offer, make_offer, negotiate, NegotiationOutcome, Offer, TraceRecord, Vote,
};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizers::{
    check_range, crowding_tournament, fly, mutate, random_position, Algorithm, Mutation, Particle,
    PsoParams, Pull, RunResult,
};
use crate::pareto::{pareto_rank, BoundedArchive, Solution};
use crate::problems::Problem;
use crate::rng::{child_seed, seeded, uniform_in};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CaParams {
    pub w_range: (f64, f64),
    pub c1_range: (f64, f64),
    pub c2_range: (f64, f64),
    pub c3_range: (f64, f64),
    pub population: usize,
    pub archive_capacity: usize,
    pub iterations: usize,
    pub mutation: Mutation,
    pub max_agents: usize,
    /// Iterations between two re-subdivisions of the swarm.
    pub rerank_period: usize,
    pub local_archive_capacity: usize,
}

impl Default for CaParams {
    fn default() -> Self {
        let swarm = PsoParams::default();
        Self {
            w_range: swarm.w_range,
            c1_range: swarm.c1_range,
            c2_range: swarm.c2_range,
            c3_range: (1.5, 2.0),
            population: swarm.population,
            archive_capacity: swarm.archive_capacity,
            iterations: swarm.iterations,
            mutation: Mutation::None,
            max_agents: 8,
            rerank_period: 1,
            local_archive_capacity: swarm.archive_capacity,
        }
    }
}

impl CaParams {
    /// The parameters shared with the single-swarm optimizer.
    pub fn swarm(&self) -> PsoParams {
        PsoParams {
            w_range: self.w_range,
            c1_range: self.c1_range,
            c2_range: self.c2_range,
            population: self.population,
            archive_capacity: self.archive_capacity,
            iterations: self.iterations,
            mutation: self.mutation,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.swarm().validate()?;
        check_range("c3_range", self.c3_range)?;
        if self.max_agents == 0 {
            return Err(Error::InvalidParameter("max_agents must be at least 1".into()));
        }
        if self.rerank_period == 0 {
            return Err(Error::InvalidParameter("rerank_period must be at least 1".into()));
        }
        if self.local_archive_capacity == 0 {
            return Err(Error::InvalidParameter(
                "local_archive_capacity must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Particles of one Pareto front (or of the merged tail fronts) owned by
/// one agent.
#[derive(Debug, Clone, PartialEq)]
pub struct SubPopulation {
    pub agent_id: usize,
    pub particles: Vec<Particle>,
    pub local_archive: BoundedArchive,
}

/// Splits the swarm into one sub-population per front, in rank order.
///
/// Fronts of rank `max_agents - 1` and above share the last sub-population.
/// Each local archive is seeded with the non-dominated positions of its own
/// sub-population.
pub fn subdivide(
    particles: Vec<Particle>,
    max_agents: usize,
    local_archive_capacity: usize,
) -> Result<Vec<SubPopulation>> {
    if max_agents == 0 {
        return Err(Error::InvalidParameter("max_agents must be at least 1".into()));
    }
    let fronts = pareto_rank(&particles)?;
    let groups = fronts.len().min(max_agents);
    let mut slots: Vec<Option<Particle>> = particles.into_iter().map(Some).collect();
    let mut subs = Vec::with_capacity(groups);
    for agent_id in 0..groups {
        let ranks = if agent_id + 1 == groups {
            &fronts[agent_id..]
        } else {
            &fronts[agent_id..=agent_id]
        };
        let members: Vec<Particle> = ranks
            .iter()
            .flat_map(|front| front.members.iter())
            .map(|&i| slots[i].take().expect("fronts are disjoint"))
            .collect();
        let mut local_archive = BoundedArchive::new(local_archive_capacity)?;
        for p in &members {
            local_archive.insert(p.position());
        }
        subs.push(SubPopulation {
            agent_id,
            particles: members,
            local_archive,
        });
    }
    Ok(subs)
}

/// Three-attractor update: inertia, personal best, local leader and
/// negotiated global leader.
///
/// Draws `w, c1, c2, r1, r2` exactly like [`crate::optimizers::pso_update`],
/// then `c3, r3`.
pub fn ca_update<R: Rng + ?Sized>(
    particle: &mut Particle,
    lbest: &[f64],
    gbest: &[f64],
    params: &CaParams,
    bounds: &[(f64, f64)],
    rng: &mut R,
) {
    let w = uniform_in(rng, params.w_range);
    let c1 = uniform_in(rng, params.c1_range);
    let c2 = uniform_in(rng, params.c2_range);
    let r1: f64 = rng.gen();
    let r2: f64 = rng.gen();
    let c3 = uniform_in(rng, params.c3_range);
    let r3: f64 = rng.gen();
    let pbest = particle.pbest.x.clone();
    fly(
        particle,
        w,
        &[
            Pull { coefficient: c1, r: r1, target: &pbest },
            Pull { coefficient: c2, r: r2, target: lbest },
            Pull { coefficient: c3, r: r3, target: gbest },
        ],
        bounds,
    );
}

/// Shared, read-only context of one agent step.
struct StepContext<'a> {
    problem: &'a Problem,
    params: &'a CaParams,
    bounds: &'a [(f64, f64)],
    gbest: &'a Solution,
    seed: u64,
    iteration: usize,
}

impl StepContext<'_> {
    fn advance(&self, agent: &mut SubPopulation) {
        let mut rng = seeded(child_seed(self.seed, agent.agent_id, self.iteration));
        let leaders = agent.local_archive.members().to_vec();
        let crowding = agent.local_archive.crowding();
        for (index, particle) in agent.particles.iter_mut().enumerate() {
            let lbest = if leaders.is_empty() {
                particle.pbest.x.clone()
            } else {
                leaders[crowding_tournament(&crowding, &mut rng)].x.clone()
            };
            ca_update(particle, &lbest, &self.gbest.x, self.params, self.bounds, &mut rng);
            mutate(particle, index, self.params.mutation, self.bounds, &mut rng);
            particle.f = self.problem.evaluate_unchecked(&particle.x);
            particle.update_pbest(&mut rng);
        }
        for particle in &agent.particles {
            agent.local_archive.insert(particle.position());
        }
    }
}

/// State of a cooperative-agent run, advanced one iteration at a time.
pub struct MopsoCa {
    problem: Problem,
    params: CaParams,
    bounds: Vec<(f64, f64)>,
    seed: u64,
    agents: Vec<SubPopulation>,
    archive: BoundedArchive,
    evaluations: usize,
    iteration: usize,
    pool: Option<rayon::ThreadPool>,
    trace: Option<Vec<TraceRecord>>,
    last_outcome: Option<NegotiationOutcome>,
}

impl MopsoCa {
    pub fn new(problem: Problem, params: CaParams, seed: u64) -> Result<Self> {
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
        let agents = subdivide(particles, params.max_agents, params.local_archive_capacity)?;
        let mut run = Self {
            evaluations: params.population,
            problem,
            params,
            bounds,
            seed,
            agents,
            archive,
            iteration: 0,
            pool: None,
            trace: None,
            last_outcome: None,
        };
        run.reconcile();
        Ok(run)
    }

    /// Runs agent steps on `threads` worker threads. Results do not depend
    /// on the thread count.
    pub fn with_parallelism(mut self, threads: usize) -> Result<Self> {
        self.pool = if threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Some(pool)
        } else {
            None
        };
        Ok(self)
    }

    /// Records every negotiation round.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn step(&mut self) {
        let offers: Vec<Offer> = self.agents.iter().map(make_offer).collect();
        let outcome = negotiate(&offers, &self.agents);
        if let Some(trace) = self.trace.as_mut() {
            trace.extend(TraceRecord::from_round(self.iteration, &offers, &outcome));
        }

        let ctx = StepContext {
            problem: &self.problem,
            params: &self.params,
            bounds: &self.bounds,
            gbest: &outcome.accepted,
            seed: self.seed,
            iteration: self.iteration,
        };
        match &self.pool {
            Some(pool) => pool.install(|| self.agents.par_iter_mut().for_each(|a| ctx.advance(a))),
            None => self.agents.iter_mut().for_each(|a| ctx.advance(a)),
        }
        self.evaluations += self.params.population;

        for agent in &self.agents {
            for particle in &agent.particles {
                self.archive.insert(particle.position());
            }
        }
        self.reconcile();
        self.last_outcome = Some(outcome);
        self.iteration += 1;

        if self.iteration.is_multiple_of(self.params.rerank_period) {
            self.resubdivide();
        }
    }

    /// Re-inserts local-archive members that dominate a global member. Such
    /// insertions never truncate, so after this no local member dominates
    /// any global member.
    fn reconcile(&mut self) {
        loop {
            let mut changed = false;
            for agent in &self.agents {
                for member in agent.local_archive.members() {
                    changed |= self.archive.insert_if_dominating(member);
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Re-pools and re-splits the swarm. Agent `i` keeps its local archive,
    /// which absorbs the positions and personal bests of its new members.
    fn resubdivide(&mut self) {
        let mut memories = Vec::with_capacity(self.agents.len());
        let mut pooled = Vec::with_capacity(self.params.population);
        for agent in std::mem::take(&mut self.agents) {
            memories.push(agent.local_archive);
            pooled.extend(agent.particles);
        }
        self.agents = subdivide(pooled, self.params.max_agents, self.params.local_archive_capacity)
            .expect("swarm is non-empty and parameters were validated");
        for (agent, mut memory) in self.agents.iter_mut().zip(memories) {
            for member in agent.local_archive.members() {
                memory.insert(member.clone());
            }
            for particle in &agent.particles {
                memory.insert(particle.pbest.clone());
            }
            agent.local_archive = memory;
        }
        self.reconcile();
    }

    pub fn run(mut self) -> RunResult {
        while self.iteration < self.params.iterations {
            self.step();
        }
        self.into_result()
    }

    pub fn agents(&self) -> &[SubPopulation] {
        &self.agents
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

    pub fn last_outcome(&self) -> Option<&NegotiationOutcome> {
        self.last_outcome.as_ref()
    }

    pub fn trace(&self) -> Option<&[TraceRecord]> {
        self.trace.as_deref()
    }

    pub fn particles(&self) -> impl Iterator<Item = &Particle> {
        self.agents.iter().flat_map(|a| a.particles.iter())
    }

    pub fn into_result(self) -> RunResult {
        RunResult {
            algorithm: Algorithm::MopsoCa,
            problem: self.problem.id(),
            seed: self.seed,
            evaluations_used: self.evaluations,
            final_front: crate::optimizers::non_dominated_front(self.archive.members()),
        }
    }
}

pub fn run_mopso_ca(problem: &Problem, params: &CaParams, seed: u64) -> Result<RunResult> {
    Ok(MopsoCa::new(*problem, params.clone(), seed)?.run())
}
