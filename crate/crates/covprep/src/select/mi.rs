//! Mutual information via the Kraskov–Stögbauer–Grassberger estimator
//! (variant 1) with Chebyshev distances in the joint space.

use crate::error::{Error, Result};

/// Digamma function for positive arguments: upward recurrence into the
/// asymptotic regime, then the standard series.
pub fn digamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    acc + x.ln()
        - 0.5 * inv
        - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)))
}

/// KSG estimator 1 with `k` nearest neighbours, clamped below at zero.
/// Exact ties in the marginals inflate the estimate; callers that cannot
/// guarantee distinct values should jitter the inputs first.
pub fn mutual_information(x: &[f64], y: &[f64], k: usize) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < k + 2 {
        return Err(Error::TooFewSamples { got: n, need: k + 2 });
    }

    let mut sum = 0.0;
    let mut dists = Vec::with_capacity(n - 1);
    for i in 0..n {
        dists.clear();
        for j in 0..n {
            if j != i {
                dists.push((x[i] - x[j]).abs().max((y[i] - y[j]).abs()));
            }
        }
        let (_, eps, _) = dists.select_nth_unstable_by(k - 1, f64::total_cmp);
        let eps = *eps;
        let nx = (0..n)
            .filter(|&j| j != i && (x[i] - x[j]).abs() < eps)
            .count();
        let ny = (0..n)
            .filter(|&j| j != i && (y[i] - y[j]).abs() < eps)
            .count();
        sum += digamma((nx + 1) as f64) + digamma((ny + 1) as f64);
    }
    let mi = digamma(k as f64) + digamma(n as f64) - sum / n as f64;
    Ok(mi.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_for;
    use rand::Rng;

    #[test]
    fn digamma_matches_known_values() {
        // psi(1) = -gamma, psi(2) = 1 - gamma, psi(1/2) = -gamma - 2 ln 2
        let gamma = 0.5772156649015329;
        assert!((digamma(1.0) + gamma).abs() < 1e-10);
        assert!((digamma(2.0) - (1.0 - gamma)).abs() < 1e-10);
        assert!((digamma(0.5) + gamma + 2.0 * std::f64::consts::LN_2).abs() < 1e-10);
        assert!((digamma(10.0) - 2.2517525890667214).abs() < 1e-10);
    }

    fn gauss_pair(rng: &mut impl Rng) -> (f64, f64) {
        // Box-Muller
        let u1: f64 = rng.random_range(f64::EPSILON..1.0);
        let u2: f64 = rng.random_range(0.0..1.0);
        let r = (-2.0 * u1.ln()).sqrt();
        let th = std::f64::consts::TAU * u2;
        (r * th.cos(), r * th.sin())
    }

    #[test]
    fn independent_samples_have_near_zero_mi() {
        let mut rng = rng_for(7, "mi-indep");
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for _ in 0..2000 {
            let (a, b) = gauss_pair(&mut rng);
            x.push(a);
            y.push(b);
        }
        let mi = mutual_information(&x, &y, 3).unwrap();
        assert!(mi < 0.05, "mi {mi}");
    }

    #[test]
    fn identical_vectors_have_large_mi() {
        let mut rng = rng_for(8, "mi-ident");
        let x: Vec<f64> = (0..2000).map(|_| gauss_pair(&mut rng).0).collect();
        let mi = mutual_information(&x, &x, 3).unwrap();
        assert!(mi > 2.0, "mi {mi}");
    }

    #[test]
    fn correlated_gaussian_matches_analytic_mi() {
        // MI of a bivariate Gaussian with rho = 0.9 is -ln(1 - 0.81)/2
        let rho: f64 = 0.9;
        let mut rng = rng_for(9, "mi-gauss");
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for _ in 0..5000 {
            let (a, b) = gauss_pair(&mut rng);
            x.push(a);
            y.push(rho * a + (1.0 - rho * rho).sqrt() * b);
        }
        let mi = mutual_information(&x, &y, 3).unwrap();
        let expected = -0.5 * (1.0 - rho * rho).ln();
        assert!((mi - expected).abs() < 0.1, "mi {mi} vs {expected}");
    }

    #[test]
    fn input_validation() {
        assert!(matches!(
            mutual_information(&[1.0, 2.0], &[1.0], 3),
            Err(Error::LengthMismatch(2, 1))
        ));
        assert!(matches!(
            mutual_information(&[1.0; 4], &[1.0; 4], 3),
            Err(Error::TooFewSamples { got: 4, need: 5 })
        ));
    }
}
