//! Agents' expected returns and their cross-stock coupling coefficients.

use rand::Rng;

use crate::config::CouplingSpec;

/// Weight of the *other* stock's lagged return in one agent's expectation
/// for stock 1 (`b1`) and stock 2 (`b2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingCoefficients {
    pub b1: f64,
    pub b2: f64,
}

impl CouplingCoefficients {
    #[inline]
    pub fn for_stock(&self, stock: crate::Stock) -> f64 {
        match stock {
            crate::Stock::One => self.b1,
            crate::Stock::Two => self.b2,
        }
    }
}

/// `a · r_own(t-1) + b · r_other(t-1)`.
#[inline]
pub fn expected_return(a: f64, b: f64, r_own_lag: f64, r_other_lag: f64) -> f64 {
    a * r_own_lag + b * r_other_lag
}

/// Draws one coefficient pair per agent. Uniform specs draw `b1` and `b2`
/// independently.
pub fn sample_couplings<R: Rng + ?Sized>(
    spec: &CouplingSpec,
    n_agents: usize,
    rng: &mut R,
) -> Vec<CouplingCoefficients> {
    match *spec {
        CouplingSpec::Homogeneous { b1, b2 } => vec![CouplingCoefficients { b1, b2 }; n_agents],
        CouplingSpec::Uniform {
            c1,
            delta1,
            c2,
            delta2,
        } => (0..n_agents)
            .map(|_| CouplingCoefficients {
                b1: uniform_around(rng, c1, delta1),
                b2: uniform_around(rng, c2, delta2),
            })
            .collect(),
    }
}

fn uniform_around<R: Rng + ?Sized>(rng: &mut R, center: f64, half_width: f64) -> f64 {
    if half_width == 0.0 {
        center
    } else {
        center + half_width * (2.0 * rng.gen::<f64>() - 1.0)
    }
}

/// Change of the population-mean expectation: `a · Δr_own + c · Δr_other`,
/// where `c` is the mean coupling.
#[inline]
pub fn mean_expected_return_delta(a: f64, c: f64, dr_own_lag: f64, dr_other_lag: f64) -> f64 {
    a * dr_own_lag + c * dr_other_lag
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn expected_return_examples() {
        assert!((expected_return(1.0, 0.5, 0.02, -0.01) - 0.015).abs() < 1e-15);
        assert_eq!(expected_return(0.7, 0.0, 0.03, 123.0), 0.7 * 0.03);
        assert!((expected_return(0.1, -1.0, 0.0, 0.03) + 0.03).abs() < 1e-15);
    }

    #[test]
    fn mean_delta_examples() {
        assert_eq!(mean_expected_return_delta(1.0, 0.0, 0.4, -9.0), 0.4);
        assert_eq!(mean_expected_return_delta(1.0, 1.0, 0.1, -0.1), 0.0);
        assert!((mean_expected_return_delta(1.0, 0.5, 0.02, 0.02) - 0.03).abs() < 1e-15);
    }

    #[test]
    fn homogeneous_is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let spec = CouplingSpec::Homogeneous { b1: 0.5, b2: -0.3 };
        let bs = sample_couplings(&spec, 1001, &mut rng);
        assert_eq!(bs.len(), 1001);
        assert!(bs.iter().all(|c| c.b1 == 0.5 && c.b2 == -0.3));
    }

    #[test]
    fn uniform_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let spec = CouplingSpec::Uniform {
            c1: 0.4,
            delta1: 0.2,
            c2: 0.4,
            delta2: 0.2,
        };
        for c in sample_couplings(&spec, 10_000, &mut rng) {
            assert!((0.2..=0.6).contains(&c.b1));
            assert!((0.2..=0.6).contains(&c.b2));
        }
    }

    #[test]
    fn uniform_mean_within_three_sigma() {
        for (n, seed) in [(1001, 2), (100_000, 3)] {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = CouplingSpec::Uniform {
                c1: 0.0,
                delta1: 1.0,
                c2: 0.0,
                delta2: 1.0,
            };
            let bs = sample_couplings(&spec, n, &mut rng);
            let tol = 3.0 * (2.0 / 12f64.sqrt()) / (n as f64).sqrt();
            let m1 = bs.iter().map(|c| c.b1).sum::<f64>() / n as f64;
            let m2 = bs.iter().map(|c| c.b2).sum::<f64>() / n as f64;
            assert!(m1.abs() < tol, "mean b1 {m1} (tol {tol})");
            assert!(m2.abs() < tol, "mean b2 {m2} (tol {tol})");
        }
    }

    #[test]
    fn stocks_draw_independently() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let spec = CouplingSpec::Uniform {
            c1: 0.0,
            delta1: 1.0,
            c2: 0.0,
            delta2: 1.0,
        };
        let bs = sample_couplings(&spec, 100_000, &mut rng);
        let x: Vec<f64> = bs.iter().map(|c| c.b1).collect();
        let y: Vec<f64> = bs.iter().map(|c| c.b2).collect();
        let r = crate::stats::pearson(&x, &y).unwrap();
        assert!(r.abs() < 3.0 / (bs.len() as f64).sqrt(), "corr(b1, b2) = {r}");
    }

    proptest! {
        #[test]
        fn linear_in_returns(a in 0.0f64..1.0, b in -2.0f64..2.0, x in -1.0f64..1.0, y in -1.0f64..1.0, l in -10.0f64..10.0) {
            let lhs = expected_return(a, b, l * x, l * y);
            let rhs = l * expected_return(a, b, x, y);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }

        #[test]
        fn homogeneous_mean_delta_is_agent_delta(a in 0.01f64..=1.0, b in -1.0f64..1.0, dx in -1.0f64..1.0, dy in -1.0f64..1.0) {
            // With one shared coefficient the population mean is the agent's own change.
            let agent = expected_return(a, b, dx, dy);
            prop_assert_eq!(mean_expected_return_delta(a, b, dx, dy), agent);
        }
    }
}
