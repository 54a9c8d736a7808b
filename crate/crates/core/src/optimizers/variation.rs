//! Real-coded variation operators: simulated binary crossover and
//! polynomial mutation, both bounded.

use rand::Rng;

use super::GaParams;

const EPS: f64 = 1.0e-14;

fn spread_factor(u: f64, alpha: f64, exponent: f64) -> f64 {
    if u <= 1.0 / alpha {
        (u * alpha).powf(exponent)
    } else {
        (1.0 / (2.0 - u * alpha)).powf(exponent)
    }
}

/// Simulated binary crossover with distribution index `sbx_eta`.
///
/// With probability `1 - crossover_prob` the parents are returned unchanged.
/// Each variable is recombined with probability 1/2; children are clipped to
/// the bounds.
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    bounds: &[(f64, f64)],
    params: &GaParams,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.gen::<f64>() >= params.crossover_prob {
        return (c1, c2);
    }
    let exponent = 1.0 / (params.sbx_eta + 1.0);
    for (i, &(lower, upper)) in bounds.iter().enumerate() {
        if rng.gen::<f64>() > 0.5 || (p1[i] - p2[i]).abs() <= EPS {
            continue;
        }
        let (y1, y2) = if p1[i] < p2[i] { (p1[i], p2[i]) } else { (p2[i], p1[i]) };
        let u: f64 = rng.gen();

        let beta = 1.0 + 2.0 * (y1 - lower) / (y2 - y1);
        let alpha = 2.0 - beta.powf(-(params.sbx_eta + 1.0));
        let low = 0.5 * ((y1 + y2) - spread_factor(u, alpha, exponent) * (y2 - y1));

        let beta = 1.0 + 2.0 * (upper - y2) / (y2 - y1);
        let alpha = 2.0 - beta.powf(-(params.sbx_eta + 1.0));
        let high = 0.5 * ((y1 + y2) + spread_factor(u, alpha, exponent) * (y2 - y1));

        let low = low.clamp(lower, upper);
        let high = high.clamp(lower, upper);
        if rng.gen::<f64>() <= 0.5 {
            c1[i] = high;
            c2[i] = low;
        } else {
            c1[i] = low;
            c2[i] = high;
        }
    }
    (c1, c2)
}

/// Bounded polynomial mutation with distribution index `pm_eta`.
///
/// Each variable mutates with probability `mutation_prob`, defaulting to `1/n`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &[f64],
    bounds: &[(f64, f64)],
    params: &GaParams,
    rng: &mut R,
) -> Vec<f64> {
    let probability = params.mutation_prob.unwrap_or(1.0 / bounds.len() as f64);
    let exponent = 1.0 / (params.pm_eta + 1.0);
    x.iter()
        .zip(bounds)
        .map(|(&y, &(lower, upper))| {
            if rng.gen::<f64>() >= probability {
                return y;
            }
            let range = upper - lower;
            let delta1 = (y - lower) / range;
            let delta2 = (upper - y) / range;
            let u: f64 = rng.gen();
            let deltaq = if u <= 0.5 {
                let xy = 1.0 - delta1;
                let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(params.pm_eta + 1.0);
                val.powf(exponent) - 1.0
            } else {
                let xy = 1.0 - delta2;
                let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(params.pm_eta + 1.0);
                1.0 - val.powf(exponent)
            };
            (y + deltaq * range).clamp(lower, upper)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use proptest::prelude::*;

    fn bounds() -> Vec<(f64, f64)> {
        vec![(0.0, 1.0), (-2.0, 2.0), (-1.0, 1.0), (0.0, 1.0)]
    }

    #[test]
    fn no_crossover_returns_parents() {
        let params = GaParams { crossover_prob: 0.0, ..GaParams::default() };
        let p1 = [0.1, 0.2, 0.3, 0.4];
        let p2 = [0.9, -1.5, 0.7, 0.0];
        let (a, b) = sbx_crossover(&p1, &p2, &bounds(), &params, &mut seeded(1));
        assert_eq!((a.as_slice(), b.as_slice()), (&p1[..], &p2[..]));
    }

    #[test]
    fn identical_parents_are_reproduced() {
        let params = GaParams { crossover_prob: 1.0, ..GaParams::default() };
        let p = [0.1, 0.2, 0.3, 0.4];
        for seed in 0..20 {
            let (a, b) = sbx_crossover(&p, &p, &bounds(), &params, &mut seeded(seed));
            assert_eq!(a, p);
            assert_eq!(b, p);
        }
    }

    #[test]
    fn zero_mutation_probability_is_identity() {
        let params = GaParams { mutation_prob: Some(0.0), ..GaParams::default() };
        let x = [0.1, 0.2, 0.3, 0.4];
        assert_eq!(polynomial_mutation(&x, &bounds(), &params, &mut seeded(3)), x);
    }

    #[test]
    fn mutation_is_deterministic_per_seed() {
        let params = GaParams { mutation_prob: Some(1.0), ..GaParams::default() };
        let x = [0.1, 0.2, 0.3, 0.4];
        let a = polynomial_mutation(&x, &bounds(), &params, &mut seeded(3));
        let b = polynomial_mutation(&x, &bounds(), &params, &mut seeded(3));
        assert_eq!(a, b);
        assert_ne!(a, x);
    }

    fn point() -> impl Strategy<Value = Vec<f64>> {
        (0.0f64..=1.0, -2.0f64..=2.0, -1.0f64..=1.0, 0.0f64..=1.0)
            .prop_map(|(a, b, c, d)| vec![a, b, c, d])
    }

    proptest! {
        #[test]
        fn offspring_stay_in_bounds(p1 in point(), p2 in point(), seed in any::<u64>()) {
            let params = GaParams { crossover_prob: 1.0, mutation_prob: Some(1.0), ..GaParams::default() };
            let mut rng = seeded(seed);
            let (a, b) = sbx_crossover(&p1, &p2, &bounds(), &params, &mut rng);
            for child in [a, b] {
                let child = polynomial_mutation(&child, &bounds(), &params, &mut rng);
                for (v, (l, u)) in child.iter().zip(bounds()) {
                    prop_assert!((l..=u).contains(v));
                }
            }
        }
    }
}
