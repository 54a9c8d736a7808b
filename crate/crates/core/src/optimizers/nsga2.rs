use std::cmp::Ordering;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::{crowding_distance, pareto_rank, Solution};
use crate::problems::Problem;
use crate::rng::seeded;

use super::particle::check_probability;
use super::{non_dominated_front, polynomial_mutation, random_position, sbx_crossover};
use super::{Algorithm, RunResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaParams {
    pub population: usize,
    pub max_evaluations: usize,
    pub crossover_prob: f64,
    /// Per-variable mutation probability; `None` means `1/n`.
    pub mutation_prob: Option<f64>,
    pub sbx_eta: f64,
    pub pm_eta: f64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population: 200,
            max_evaluations: 25_000,
            crossover_prob: 0.9,
            mutation_prob: None,
            sbx_eta: 20.0,
            pm_eta: 20.0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::InvalidParameter("population must be at least 2".into()));
        }
        if self.max_evaluations < self.population {
            return Err(Error::InvalidParameter(format!(
                "max_evaluations ({}) must cover the initial population ({})",
                self.max_evaluations, self.population
            )));
        }
        check_probability("crossover_prob", self.crossover_prob)?;
        if let Some(p) = self.mutation_prob {
            check_probability("mutation_prob", p)?;
        }
        if !(self.sbx_eta >= 0.0 && self.pm_eta >= 0.0) {
            return Err(Error::InvalidParameter("distribution indices must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
struct Individual {
    solution: Solution,
    rank: usize,
    crowding: f64,
}

/// Assigns rank and crowding from a fresh non-dominated sort.
fn assign_fitness(pop: &mut [Individual]) {
    let objectives: Vec<&[f64]> = pop.iter().map(|i| i.solution.f.as_slice()).collect();
    let fronts = pareto_rank(&objectives).expect("population is non-empty");
    let crowding: Vec<Vec<f64>> = fronts
        .iter()
        .map(|front| {
            let members: Vec<&[f64]> = front.members.iter().map(|&i| objectives[i]).collect();
            crowding_distance(&members)
        })
        .collect();
    for (front, crowding) in fronts.into_iter().zip(crowding) {
        for (&i, c) in front.members.iter().zip(crowding) {
            pop[i].rank = front.rank;
            pop[i].crowding = c;
        }
    }
}

/// Lower rank wins, then larger crowding distance.
fn crowded_cmp(a: &Individual, b: &Individual) -> Ordering {
    a.rank
        .cmp(&b.rank)
        .then_with(|| b.crowding.total_cmp(&a.crowding))
}

fn tournament<'a, R: Rng + ?Sized>(pop: &'a [Individual], rng: &mut R) -> &'a Individual {
    let a = &pop[rng.gen_range(0..pop.len())];
    let b = &pop[rng.gen_range(0..pop.len())];
    if crowded_cmp(b, a).is_lt() {
        b
    } else {
        a
    }
}

/// Elitist (mu + lambda) survival: whole fronts first, the last one cut by
/// descending crowding distance.
fn environmental_selection(combined: Vec<Individual>, size: usize) -> Vec<Individual> {
    let objectives: Vec<&[f64]> = combined.iter().map(|i| i.solution.f.as_slice()).collect();
    let fronts = pareto_rank(&objectives).expect("population is non-empty");
    let mut chosen: Vec<usize> = Vec::with_capacity(size);
    for front in fronts {
        if chosen.len() + front.members.len() <= size {
            chosen.extend(&front.members);
            if chosen.len() == size {
                break;
            }
            continue;
        }
        let members: Vec<&[f64]> = front.members.iter().map(|&i| objectives[i]).collect();
        let crowding = crowding_distance(&members);
        let mut order: Vec<usize> = (0..front.members.len()).collect();
        order.sort_by(|&a, &b| crowding[b].total_cmp(&crowding[a]).then(a.cmp(&b)));
        chosen.extend(order.into_iter().take(size - chosen.len()).map(|j| front.members[j]));
        break;
    }
    let mut slots: Vec<Option<Individual>> = combined.into_iter().map(Some).collect();
    let mut next: Vec<Individual> = chosen
        .into_iter()
        .map(|i| slots[i].take().expect("each index chosen once"))
        .collect();
    assign_fitness(&mut next);
    next
}

/// Generational NSGA-II run until exactly `max_evaluations` evaluations.
pub fn run_nsga2(problem: &Problem, params: &GaParams, seed: u64) -> Result<RunResult> {
    params.validate()?;
    let bounds = problem.bounds();
    let mut rng = seeded(seed);
    let mut evaluations = 0usize;
    let mut evaluate = |x: Vec<f64>| {
        evaluations += 1;
        let f = problem.evaluate_unchecked(&x);
        Individual {
            solution: Solution::new(x, f),
            rank: 0,
            crowding: 0.0,
        }
    };

    let mut pop: Vec<Individual> = (0..params.population)
        .map(|_| evaluate(random_position(&bounds, &mut rng)))
        .collect();
    assign_fitness(&mut pop);

    let mut used = params.population;
    while used < params.max_evaluations {
        let brood = params.population.min(params.max_evaluations - used);
        let mut offspring = Vec::with_capacity(brood + 1);
        while offspring.len() < brood {
            let p1 = tournament(&pop, &mut rng);
            let p2 = tournament(&pop, &mut rng);
            let (c1, c2) =
                sbx_crossover(&p1.solution.x, &p2.solution.x, &bounds, params, &mut rng);
            for child in [c1, c2] {
                if offspring.len() < brood {
                    let child = polynomial_mutation(&child, &bounds, params, &mut rng);
                    offspring.push(evaluate(child));
                }
            }
        }
        used += offspring.len();
        pop.extend(offspring);
        pop = environmental_selection(pop, params.population);
    }

    let rank_zero: Vec<Solution> = pop
        .into_iter()
        .filter(|i| i.rank == 0)
        .map(|i| i.solution)
        .collect();
    Ok(RunResult {
        algorithm: Algorithm::Nsga2,
        problem: problem.id(),
        seed,
        evaluations_used: evaluations,
        final_front: non_dominated_front(&rank_zero),
    })
}
