//! Correlation, least squares, and the small hypothesis tests used to
//! compare simulated distributions.

use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Least-squares fit of `y = beta0 + beta1·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionReport {
    pub beta0: f64,
    pub beta1: f64,
    /// Two-sided p-value for `beta1 != 0`, normal approximation.
    pub p_value: f64,
    pub r_squared: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Report {
    pub phi: f64,
    pub n: usize,
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample standard deviation (`n - 1` denominator).
pub fn std_dev(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let m = mean(x);
    (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64).sqrt()
}

struct Moments {
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

fn moments(x: &[f64], y: &[f64], need: usize) -> Result<Moments> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < need {
        return Err(Error::TooFewSamples {
            need,
            got: x.len(),
        });
    }
    let mean_x = mean(x);
    let mean_y = mean(y);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mean_x, b - mean_y);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Ok(Moments {
        mean_x,
        mean_y,
        sxx,
        syy,
        sxy,
    })
}

/// Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let m = moments(x, y, 2)?;
    if m.sxx == 0.0 {
        return Err(Error::DegenerateSeries("first series is constant"));
    }
    if m.syy == 0.0 {
        return Err(Error::DegenerateSeries("second series is constant"));
    }
    Ok((m.sxy / (m.sxx.sqrt() * m.syy.sqrt())).clamp(-1.0, 1.0))
}

/// Two-sided normal tail probability `P(|Z| > |z|)`.
pub fn normal_two_sided_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2)
}

/// Ordinary least squares of `y` on `x`.
pub fn ols(x: &[f64], y: &[f64]) -> Result<RegressionReport> {
    let m = moments(x, y, 3)?;
    if m.sxx == 0.0 {
        return Err(Error::DegenerateSeries("regressor is constant"));
    }
    if m.syy == 0.0 {
        return Err(Error::DegenerateSeries("response is constant"));
    }
    let n = x.len();
    let beta1 = m.sxy / m.sxx;
    let beta0 = m.mean_y - beta1 * m.mean_x;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - beta0 - beta1 * a).powi(2))
        .sum();
    let r_squared = (1.0 - ssr / m.syy).clamp(0.0, 1.0);
    let se = (ssr / (n - 2) as f64 / m.sxx).sqrt();
    let p_value = if se == 0.0 {
        0.0
    } else {
        normal_two_sided_p(beta1 / se)
    };
    Ok(RegressionReport {
        beta0,
        beta1,
        p_value,
        r_squared,
        n,
    })
}

/// First-order autoregressive coefficient: OLS slope of `r(t)` on `r(t-1)`.
pub fn ar1(r: &[f64]) -> Result<Ar1Report> {
    if r.len() < 3 {
        return Err(Error::TooFewSamples {
            need: 3,
            got: r.len(),
        });
    }
    let m = moments(&r[..r.len() - 1], &r[1..], 2)?;
    if m.sxx == 0.0 {
        return Err(Error::DegenerateSeries("lagged series is constant"));
    }
    Ok(Ar1Report {
        phi: m.sxy / m.sxx,
        n: r.len(),
    })
}

/// Ranks starting at 1, ties sharing their average rank.
pub fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut out = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    pearson(&ranks(x), &ranks(y))
}

/// Two-sided p-value of Welch's unequal-variance t-test.
pub fn welch_t_test(x: &[f64], y: &[f64]) -> Result<f64> {
    for s in [x, y] {
        if s.len() < 2 {
            return Err(Error::TooFewSamples {
                need: 2,
                got: s.len(),
            });
        }
    }
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (vx, vy) = (std_dev(x).powi(2) / nx, std_dev(y).powi(2) / ny);
    let se2 = vx + vy;
    let diff = mean(x) - mean(y);
    if se2 == 0.0 {
        return Ok(if diff == 0.0 { 1.0 } else { 0.0 });
    }
    let t = diff / se2.sqrt();
    let df = se2 * se2 / (vx * vx / (nx - 1.0) + vy * vy / (ny - 1.0));
    Ok(student_two_sided_p(t, df))
}

/// Two-sided p-value of the paired t-test on `x - y`.
pub fn paired_t_test(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(Error::TooFewSamples {
            need: 2,
            got: x.len(),
        });
    }
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let n = d.len() as f64;
    let se = std_dev(&d) / n.sqrt();
    let m = mean(&d);
    if se == 0.0 {
        return Ok(if m == 0.0 { 1.0 } else { 0.0 });
    }
    Ok(student_two_sided_p(m / se, n - 1.0))
}

fn student_two_sided_p(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("positive degrees of freedom");
    (2.0 * dist.cdf(-t.abs())).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand::Rng;

    fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
        // Box-Muller; keeps the fixtures free of extra dependencies.
        let u1: f64 = 1.0 - rng.gen::<f64>();
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        assert!((pearson(&x, &x).unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap() + 1.0).abs() < 1e-15);
        // cov = (−1.5·−0.5 + −0.5·−1.5 + 0.5·1.5 + 1.5·0.5)/3 = 1, var = 5/3 each → 0.6
        assert!((pearson(&x, &[2.0, 1.0, 4.0, 3.0]).unwrap() - 0.6).abs() < 1e-12);
        assert!(matches!(
            pearson(&x, &[1.0; 4]),
            Err(Error::DegenerateSeries(_))
        ));
        assert!(matches!(pearson(&x, &[1.0; 3]), Err(Error::LengthMismatch(4, 3))));
    }

    #[test]
    fn ols_exact_line() {
        let x: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let r = ols(&x, &y).unwrap();
        assert!((r.beta1 - 2.0).abs() < 1e-12);
        assert!((r.beta0 - 1.0).abs() < 1e-12);
        assert!((r.r_squared - 1.0).abs() < 1e-12);
        assert!(r.p_value < 1e-12);
        assert_eq!(r.n, 50);
    }

    #[test]
    fn ols_on_independent_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let x: Vec<f64> = (0..100).map(|_| gaussian(&mut rng)).collect();
        let y: Vec<f64> = (0..100).map(|_| gaussian(&mut rng)).collect();
        let r = ols(&x, &y).unwrap();
        assert!(r.beta1.abs() < 0.3, "slope {}", r.beta1);
        assert!(r.p_value > 0.05, "p {}", r.p_value);
    }

    #[test]
    fn ols_errors() {
        assert!(matches!(
            ols(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::DegenerateSeries(_))
        ));
        assert!(matches!(
            ols(&[1.0, 2.0], &[1.0, 2.0]),
            Err(Error::TooFewSamples { need: 3, got: 2 })
        ));
    }

    #[test]
    fn ar1_examples() {
        let trend: Vec<f64> = (0..20).map(|i| 0.01 * i as f64).collect();
        assert!((ar1(&trend).unwrap().phi - 1.0).abs() < 1e-12);
        let alt: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 0.01 } else { -0.01 }).collect();
        assert!((ar1(&alt).unwrap().phi + 1.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let noise: Vec<f64> = (0..10_000).map(|_| gaussian(&mut rng)).collect();
        assert!(ar1(&noise).unwrap().phi.abs() < 0.05);
        assert!(matches!(ar1(&[1.0, 1.0, 1.0]), Err(Error::DegenerateSeries(_))));
    }

    #[test]
    fn spearman_handles_ties() {
        assert_eq!(ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
        let r = spearman(&[1.0, 2.0, 3.0, 4.0], &[1.0, 4.0, 9.0, 16.0]).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn t_tests() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let x: Vec<f64> = (0..200).map(|_| gaussian(&mut rng)).collect();
        let y: Vec<f64> = (0..200).map(|_| gaussian(&mut rng)).collect();
        assert!(welch_t_test(&x, &y).unwrap() > 0.01);
        let shifted: Vec<f64> = y.iter().map(|v| v + 1.0).collect();
        assert!(welch_t_test(&x, &shifted).unwrap() < 1e-6);
        assert!(paired_t_test(&y, &shifted).unwrap() < 1e-12);
        assert_eq!(paired_t_test(&x, &x).unwrap(), 1.0);
        assert!((normal_two_sided_p(1.959_963_985) - 0.05).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn pearson_affine_invariance(
            pts in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5..40),
            scale in 0.1f64..10.0,
            shift in -5.0f64..5.0,
        ) {
            let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pts.iter().map(|p| p.1 + 0.3 * p.0).collect();
            prop_assume!(std_dev(&x) > 1e-6 && std_dev(&y) > 1e-6);
            let r = pearson(&x, &y).unwrap();
            let xs: Vec<f64> = x.iter().map(|v| scale * v + shift).collect();
            let xn: Vec<f64> = x.iter().map(|v| -scale * v + shift).collect();
            prop_assert!((pearson(&xs, &y).unwrap() - r).abs() < 1e-9);
            prop_assert!((pearson(&xn, &y).unwrap() + r).abs() < 1e-9);
            prop_assert!((-1.0..=1.0).contains(&r));
        }

        #[test]
        fn ols_slope_matches_pearson(pts in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5..40)) {
            let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pts.iter().map(|p| p.1 - 0.5 * p.0).collect();
            prop_assume!(std_dev(&x) > 1e-6 && std_dev(&y) > 1e-6);
            let fit = ols(&x, &y).unwrap();
            let r = pearson(&x, &y).unwrap();
            prop_assert!((fit.beta1 * std_dev(&x) / std_dev(&y) - r).abs() < 1e-9);
            prop_assert!((fit.r_squared - r * r).abs() < 1e-9);
        }

        #[test]
        fn ar1_is_scaled_lag_correlation(r in proptest::collection::vec(-1.0f64..1.0, 5..60)) {
            let (x, y) = (&r[..r.len() - 1], &r[1..]);
            prop_assume!(std_dev(x) > 1e-6 && std_dev(y) > 1e-6);
            let phi = ar1(&r).unwrap().phi;
            let via_pearson = pearson(x, y).unwrap() * std_dev(y) / std_dev(x);
            prop_assert!((phi - via_pearson).abs() < 1e-9);
        }
    }
}
