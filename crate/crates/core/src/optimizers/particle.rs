use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pareto::{relation, Dominance, Objectives, Solution};
use crate::rng::uniform_in;

/// A swarm member: position, velocity and personal best.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    /// Objectives at `x`.
    pub f: Vec<f64>,
    pub pbest: Solution,
}

impl Particle {
    /// A particle at rest whose personal best is its current position.
    pub fn at_rest(position: Solution) -> Self {
        Self {
            v: vec![0.0; position.x.len()],
            x: position.x.clone(),
            f: position.f.clone(),
            pbest: position,
        }
    }

    pub fn position(&self) -> Solution {
        Solution::new(self.x.clone(), self.f.clone())
    }

    /// Replaces the personal best when the current position dominates it;
    /// mutually non-dominated positions win a fair coin toss.
    pub fn update_pbest<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let replace = match relation(&self.f, &self.pbest.f) {
            Dominance::FirstDominates => true,
            Dominance::SecondDominates => false,
            Dominance::NonDominated | Dominance::Equal => rng.gen_bool(0.5),
        };
        if replace {
            self.pbest = self.position();
        }
    }
}

impl Objectives for Particle {
    fn objectives(&self) -> &[f64] {
        &self.f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mutation {
    None,
    /// Uniform perturbation applied to every third particle. `probability`
    /// is per decision variable and defaults to `1/n`.
    Turbulence { probability: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoParams {
    pub w_range: (f64, f64),
    pub c1_range: (f64, f64),
    pub c2_range: (f64, f64),
    pub population: usize,
    pub archive_capacity: usize,
    pub iterations: usize,
    pub mutation: Mutation,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            w_range: (0.1, 0.5),
            c1_range: (1.5, 2.0),
            c2_range: (1.5, 2.0),
            population: 200,
            archive_capacity: 100,
            iterations: 250,
            mutation: Mutation::Turbulence { probability: None },
        }
    }
}

pub(crate) fn check_range(name: &str, (lo, hi): (f64, f64)) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidParameter(format!(
            "{name} must be a finite non-empty range, got ({lo}, {hi})"
        )));
    }
    Ok(())
}

pub(crate) fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

impl PsoParams {
    pub fn validate(&self) -> Result<()> {
        check_range("w_range", self.w_range)?;
        check_range("c1_range", self.c1_range)?;
        check_range("c2_range", self.c2_range)?;
        if self.population < 2 {
            return Err(Error::InvalidParameter("population must be at least 2".into()));
        }
        if self.archive_capacity == 0 {
            return Err(Error::InvalidParameter("archive_capacity must be positive".into()));
        }
        if let Mutation::Turbulence { probability: Some(p) } = self.mutation {
            check_probability("turbulence probability", p)?;
        }
        Ok(())
    }
}

/// One attraction term `c * r * (target - x)`.
pub(crate) struct Pull<'a> {
    pub coefficient: f64,
    pub r: f64,
    pub target: &'a [f64],
}

/// Velocity and position update shared by every swarm variant.
///
/// Terms with a zero coefficient are skipped so that collapsing a
/// coefficient range reproduces the shorter update bit for bit. Velocities
/// are clamped to half the variable range; a position leaving the box is
/// clipped and the offending velocity component reversed.
pub(crate) fn fly(particle: &mut Particle, inertia: f64, pulls: &[Pull<'_>], bounds: &[(f64, f64)]) {
    for (i, &(lower, upper)) in bounds.iter().enumerate() {
        let x = particle.x[i];
        let mut v = inertia * particle.v[i];
        for pull in pulls {
            if pull.coefficient != 0.0 {
                v += pull.coefficient * pull.r * (pull.target[i] - x);
            }
        }
        let v_max = 0.5 * (upper - lower);
        v = v.clamp(-v_max, v_max);
        let mut next = x + v;
        if next < lower {
            next = lower;
            v = -v;
        } else if next > upper {
            next = upper;
            v = -v;
        }
        particle.x[i] = next;
        particle.v[i] = v;
    }
}

/// Two-attractor update: inertia, personal best and a leader.
///
/// Draws `w, c1, c2, r1, r2` in that order.
pub fn pso_update<R: Rng + ?Sized>(
    particle: &mut Particle,
    leader: &[f64],
    params: &PsoParams,
    bounds: &[(f64, f64)],
    rng: &mut R,
) {
    let w = uniform_in(rng, params.w_range);
    let c1 = uniform_in(rng, params.c1_range);
    let c2 = uniform_in(rng, params.c2_range);
    let r1: f64 = rng.gen();
    let r2: f64 = rng.gen();
    let pbest = particle.pbest.x.clone();
    fly(
        particle,
        w,
        &[
            Pull { coefficient: c1, r: r1, target: &pbest },
            Pull { coefficient: c2, r: r2, target: leader },
        ],
        bounds,
    );
}

/// Uniform perturbation of up to half the variable range per mutated gene.
pub fn turbulence<R: Rng + ?Sized>(
    x: &mut [f64],
    probability: f64,
    bounds: &[(f64, f64)],
    rng: &mut R,
) {
    for (xi, &(lower, upper)) in x.iter_mut().zip(bounds) {
        if rng.gen::<f64>() < probability {
            let shift = (rng.gen::<f64>() - 0.5) * 0.5 * (upper - lower);
            *xi = (*xi + shift).clamp(lower, upper);
        }
    }
}

/// Applies the configured mutation to the particle at `index` in its swarm.
pub(crate) fn mutate<R: Rng + ?Sized>(
    particle: &mut Particle,
    index: usize,
    mutation: Mutation,
    bounds: &[(f64, f64)],
    rng: &mut R,
) {
    if let Mutation::Turbulence { probability } = mutation {
        if index.is_multiple_of(3) {
            let p = probability.unwrap_or(1.0 / bounds.len() as f64);
            turbulence(&mut particle.x, p, bounds, rng);
        }
    }
}

/// Binary tournament preferring the larger crowding distance.
pub(crate) fn crowding_tournament<R: Rng + ?Sized>(crowding: &[f64], rng: &mut R) -> usize {
    debug_assert!(!crowding.is_empty());
    if crowding.len() == 1 {
        return 0;
    }
    let a = rng.gen_range(0..crowding.len());
    let b = rng.gen_range(0..crowding.len());
    if crowding[b] > crowding[a] {
        b
    } else {
        a
    }
}

pub(crate) fn random_position<R: Rng + ?Sized>(bounds: &[(f64, f64)], rng: &mut R) -> Vec<f64> {
    bounds
        .iter()
        .map(|&(lower, upper)| lower + (upper - lower) * rng.gen::<f64>())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn bounds(n: usize) -> Vec<(f64, f64)> {
        vec![(-1.0, 1.0); n]
    }

    fn particle(x: Vec<f64>, v: Vec<f64>, pbest: Vec<f64>) -> Particle {
        Particle {
            f: vec![0.0, 0.0],
            pbest: Solution::new(pbest, vec![0.0, 0.0]),
            x,
            v,
        }
    }

    #[test]
    fn stationary_when_all_attractors_coincide() {
        let x = vec![0.3, -0.2, 0.7];
        let mut p = particle(x.clone(), vec![0.0; 3], x.clone());
        pso_update(&mut p, &x, &PsoParams::default(), &bounds(3), &mut seeded(1));
        assert_eq!(p.x, x);
        assert!(p.v.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn collapsed_inertia_and_social_terms_stop_the_particle() {
        let params = PsoParams {
            w_range: (0.0, 0.0),
            c2_range: (0.0, 0.0),
            ..PsoParams::default()
        };
        let x = vec![0.1, 0.2];
        let mut p = particle(x.clone(), vec![0.4, -0.3], x.clone());
        pso_update(&mut p, &[0.9, -0.9], &params, &bounds(2), &mut seeded(2));
        assert_eq!(p.x, x);
        assert!(p.v.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn fixed_seed_gives_identical_trajectory() {
        let run = || {
            let mut rng = seeded(42);
            let mut p = particle(vec![0.0, 0.5], vec![0.1, 0.1], vec![0.2, 0.4]);
            let mut trace = Vec::new();
            for _ in 0..50 {
                pso_update(&mut p, &[-0.5, 0.9], &PsoParams::default(), &bounds(2), &mut rng);
                trace.push(p.x.clone());
            }
            trace
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn repair_clips_and_reverses_velocity() {
        let b = vec![(0.0, 1.0)];
        let mut p = particle(vec![0.9], vec![0.5], vec![0.9]);
        fly(&mut p, 1.0, &[], &b);
        assert_eq!(p.x, vec![1.0]);
        assert_eq!(p.v, vec![-0.5]);
    }

    #[test]
    fn velocity_is_clamped_to_half_range() {
        let b = vec![(0.0, 1.0)];
        let mut p = particle(vec![0.0], vec![0.0], vec![0.0]);
        fly(&mut p, 0.0, &[Pull { coefficient: 2.0, r: 1.0, target: &[1.0] }], &b);
        assert_eq!(p.v, vec![0.5]);
        assert_eq!(p.x, vec![0.5]);
    }

    #[test]
    fn pbest_follows_dominance() {
        let mut rng = seeded(0);
        let mut p = Particle::at_rest(Solution::new(vec![0.0], vec![1.0, 1.0]));
        p.x = vec![0.5];
        p.f = vec![0.5, 0.5];
        p.update_pbest(&mut rng);
        assert_eq!(p.pbest.f, vec![0.5, 0.5]);
        p.f = vec![2.0, 2.0];
        p.update_pbest(&mut rng);
        assert_eq!(p.pbest.f, vec![0.5, 0.5]);
    }

    #[test]
    fn turbulence_stays_in_bounds() {
        let b = bounds(10);
        let mut rng = seeded(8);
        for _ in 0..200 {
            let mut x = random_position(&b, &mut rng);
            turbulence(&mut x, 1.0, &b, &mut rng);
            assert!(x.iter().all(|v| (-1.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn validation() {
        assert!(PsoParams::default().validate().is_ok());
        let bad = PsoParams { population: 1, ..PsoParams::default() };
        assert!(bad.validate().is_err());
        let bad = PsoParams { w_range: (0.5, 0.1), ..PsoParams::default() };
        assert!(bad.validate().is_err());
    }
}
