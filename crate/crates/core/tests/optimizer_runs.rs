use mopso_ca::optimizers::Omopso;
use mopso_ca::pareto::dominates;
use mopso_ca::{
    run_mopso_ca, run_nsga2, run_omopso, CaParams, GaParams, MopsoCa, Problem, ProblemId,
    PsoParams, RunResult, Solution,
};

fn small_pso(iterations: usize) -> PsoParams {
    PsoParams {
        population: 30,
        archive_capacity: 20,
        iterations,
        ..PsoParams::default()
    }
}

fn small_ca(iterations: usize) -> CaParams {
    CaParams {
        population: 30,
        archive_capacity: 20,
        local_archive_capacity: 20,
        iterations,
        ..CaParams::default()
    }
}

fn assert_valid_front(r: &RunResult, problem: &Problem, capacity: usize) {
    assert!(!r.final_front.is_empty());
    assert!(r.final_front.len() <= capacity);
    let bounds = problem.bounds();
    for s in &r.final_front {
        assert!(s.x.iter().zip(&bounds).all(|(x, &(l, u))| l <= *x && *x <= u));
        assert_eq!(problem.evaluate(&s.x).unwrap(), s.f);
        assert!(!r.final_front.iter().any(|t| dominates(&t.f, &s.f)));
    }
}

#[test]
fn every_algorithm_spends_its_budget_exactly() {
    for id in ProblemId::ALL {
        let problem = Problem::new(id);
        let ga = GaParams {
            population: 30,
            max_evaluations: 457,
            ..GaParams::default()
        };
        assert_eq!(run_nsga2(&problem, &ga, 1).unwrap().evaluations_used, 457);
        assert_eq!(run_omopso(&problem, &small_pso(7), 1).unwrap().evaluations_used, 30 * 8);
        assert_eq!(run_mopso_ca(&problem, &small_ca(7), 1).unwrap().evaluations_used, 30 * 8);
    }
}

#[test]
fn fronts_are_valid_on_every_problem() {
    for id in ProblemId::ALL {
        let problem = Problem::new(id);
        assert_valid_front(&run_omopso(&problem, &small_pso(10), 2).unwrap(), &problem, 20);
        assert_valid_front(&run_mopso_ca(&problem, &small_ca(10), 2).unwrap(), &problem, 20);
        let ga = GaParams {
            population: 30,
            max_evaluations: 300,
            ..GaParams::default()
        };
        assert_valid_front(&run_nsga2(&problem, &ga, 2).unwrap(), &problem, 30);
    }
}

#[test]
fn single_agent_run_shares_the_swarm_invariants() {
    let problem = Problem::new(ProblemId::Uf2);
    let ca = CaParams {
        max_agents: 1,
        c3_range: (1.5, 2.0),
        ..small_ca(0)
    };
    let mut agents = MopsoCa::new(problem, ca, 9).unwrap();
    let mut swarm = Omopso::new(problem, small_pso(0), 9).unwrap();
    let bounds = problem.bounds();
    let in_bounds = |x: &[f64]| x.iter().zip(&bounds).all(|(v, &(l, u))| l <= *v && *v <= u);
    for _ in 0..20 {
        agents.step();
        swarm.step();
        assert_eq!(agents.agents().len(), 1);
        assert_eq!(agents.evaluations(), swarm.evaluations());
        assert!(agents.particles().all(|p| in_bounds(&p.x)));
        assert!(swarm.particles().iter().all(|p| in_bounds(&p.x)));
        for archive in [agents.archive(), swarm.archive()] {
            let m: &[Solution] = archive.members();
            assert!(m.len() <= 20);
            assert!(m.iter().all(|a| !m.iter().any(|b| dominates(&b.f, &a.f))));
        }
    }
}

#[test]
fn zero_budget_runs_return_the_initial_non_dominated_subset() {
    let problem = Problem::new(ProblemId::Dtlz6);
    let swarm = Omopso::new(problem, small_pso(0), 4).unwrap();
    let initial: Vec<Solution> = swarm
        .particles()
        .iter()
        .map(|p| Solution::new(p.x.clone(), p.f.clone()))
        .collect();
    let front = run_mopso_ca(&problem, &CaParams { archive_capacity: 30, ..small_ca(0) }, 4)
        .unwrap()
        .final_front;
    for s in &front {
        assert!(initial.contains(s));
        assert!(!initial.iter().any(|t| dominates(&t.f, &s.f)));
    }
    let expected = initial
        .iter()
        .filter(|s| !initial.iter().any(|t| dominates(&t.f, &s.f)))
        .count();
    assert_eq!(front.len(), expected);
}
