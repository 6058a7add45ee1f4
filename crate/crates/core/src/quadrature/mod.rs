//! Quadrature rules behind the sampling theorem: the equiangular rule on the
//! sphere and the half-range Gauss–Hermite rule on `[0, ∞)`.

pub mod hermite;

use std::f64::consts::PI;

use crate::error::{Result, SglError};

/// Equiangular spherical rule of order `L` on a `2L × 2L` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalRule {
    pub order: usize,
    /// `ϑ_j = (2j+1)π / 4L`.
    pub theta: Vec<f64>,
    /// `φ_k = kπ / L`.
    pub phi: Vec<f64>,
    /// Closed-form weights as printed in the classical rule.
    pub weights_raw: Vec<f64>,
    /// `(π/L) · weights_raw`, the weights that reproduce spherical inner products.
    pub weights: Vec<f64>,
}

/// Builds the order-`L` equiangular rule.
pub fn sphere_rule(order: usize) -> Result<SphericalRule> {
    if order == 0 {
        return Err(SglError::Domain("spherical rule order must be at least 1".into()));
    }
    let lf = order as f64;
    let theta: Vec<f64> = (0..2 * order)
        .map(|j| (2 * j + 1) as f64 * PI / (4.0 * lf))
        .collect();
    let phi: Vec<f64> = (0..2 * order).map(|k| k as f64 * PI / lf).collect();
    let weights_raw: Vec<f64> = (0..2 * order)
        .map(|j| {
            let odd = (2 * j + 1) as f64;
            let sum: f64 = (0..order)
                .map(|l| {
                    let m = (2 * l + 1) as f64;
                    (odd * m * PI / (4.0 * lf)).sin() / m
                })
                .sum();
            (odd * PI / (4.0 * lf)).sin() * 2.0 / lf * sum
        })
        .collect();
    let weights = weights_raw.iter().map(|b| PI / lf * b).collect();
    Ok(SphericalRule {
        order,
        theta,
        phi,
        weights_raw,
        weights,
    })
}

/// Half-range Gauss–Hermite rule of order `N` for `e^{−r²}` on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialRule {
    pub order: usize,
    /// Strictly increasing positive nodes.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `ã_i = a_i e^{r_i²} r_i²`, formed in extended precision.
    pub modified_weights: Vec<f64>,
}

/// Generates the order-`N` half-range Gauss–Hermite rule (`1 ≤ N ≤ 128`).
pub fn half_range_hermite_rule(order: usize) -> Result<RadialRule> {
    let generated = hermite::generate(order)?;
    Ok(RadialRule {
        order,
        nodes: generated.nodes,
        weights: generated.weights,
        modified_weights: generated.modified_weights,
    })
}

/// `ã_i = exp(ln a_i + r_i² + 2 ln r_i)` from double-precision nodes and weights.
pub fn modified_radial_weights(rule: &RadialRule) -> Result<Vec<f64>> {
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&r, &a)| {
            if r <= 0.0 || a <= 0.0 {
                return Err(SglError::Domain(format!(
                    "modified weights need positive nodes and weights, got r = {r}, a = {a}"
                )));
            }
            Ok((a.ln() + r * r + 2.0 * r.ln()).exp())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::sph_harm;
    use num_complex::Complex64;

    #[test]
    fn order_one_sphere_rule() {
        let rule = sphere_rule(1).unwrap();
        assert!((rule.theta[0] - PI / 4.0).abs() < 1e-15);
        assert!((rule.theta[1] - 3.0 * PI / 4.0).abs() < 1e-15);
        assert_eq!(rule.phi, vec![0.0, PI]);
        for b in &rule.weights_raw {
            assert!((b - 1.0).abs() < 1e-15);
        }
        // |Y_00|² = 1/4π on all four nodes
        let total: f64 = rule.weights.iter().map(|b| 2.0 * b / (4.0 * PI)).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert!(sphere_rule(0).is_err());
    }

    #[test]
    fn weights_are_positive() {
        for order in 1..=256 {
            let rule = sphere_rule(order).unwrap();
            assert!(rule.weights_raw.iter().all(|&b| b > 0.0), "L = {order}");
            assert!(rule.theta.windows(2).all(|w| w[1] > w[0]));
            assert!(rule.theta[0] > 0.0 && *rule.theta.last().unwrap() < PI);
        }
    }

    #[test]
    fn spherical_rule_reproduces_orthonormality() {
        for order in [1usize, 2, 3, 5, 8, 16] {
            let rule = sphere_rule(order).unwrap();
            let pairs: Vec<(usize, isize)> = crate::indexing::harmonic_pairs(order).collect();
            let samples: Vec<Vec<Complex64>> = pairs
                .iter()
                .map(|&(l, m)| {
                    let mut v = Vec::with_capacity(4 * order * order);
                    for &t in &rule.theta {
                        for &p in &rule.phi {
                            v.push(sph_harm(l, m, t, p).unwrap());
                        }
                    }
                    v
                })
                .collect();
            let side = 2 * order;
            for (a, ya) in samples.iter().enumerate() {
                for (b, yb) in samples.iter().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..side {
                        for k in 0..side {
                            acc += rule.weights[j] * ya[j * side + k] * yb[j * side + k].conj();
                        }
                    }
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((acc - want).norm() < 1e-11, "L={order} {:?} {:?}", pairs[a], pairs[b]);
                }
            }
        }
    }

    fn log_moment(rule: &RadialRule, k: usize) -> f64 {
        // Σ a_i r_i^k, accumulated relative to the largest term
        let logs: Vec<f64> = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(r, a)| a.ln() + k as f64 * r.ln())
            .collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        top + logs.iter().map(|l| (l - top).exp()).sum::<f64>().ln()
    }

    fn log_gamma_half_integer(twice: usize) -> f64 {
        // ln Γ(twice/2)
        if twice.is_multiple_of(2) {
            crate::special::ln_factorial(twice / 2 - 1)
        } else {
            crate::special::ln_gamma_half(twice / 2)
        }
    }

    #[test]
    fn order_one_rule() {
        let rule = half_range_hermite_rule(1).unwrap();
        assert!((rule.nodes[0] - 1.0 / PI.sqrt()).abs() < 1e-15);
        assert!((rule.nodes[0] - 0.564190).abs() < 1e-6);
        assert!((rule.weights[0] - PI.sqrt() / 2.0).abs() < 1e-15);
        assert!((rule.weights[0] - 0.886227).abs() < 1e-6);
        let want = PI.sqrt() / 2.0 * (1.0 / PI).exp() / PI;
        assert!((rule.modified_weights[0] - want).abs() < 1e-15 * want);
    }

    #[test]
    fn moment_exactness() {
        for order in (1..=64).step_by(7).chain([32, 64]) {
            let rule = half_range_hermite_rule(order).unwrap();
            for k in 0..2 * order {
                let want = log_gamma_half_integer(k + 1) - 2f64.ln();
                let got = log_moment(&rule, k);
                assert!(((got - want).exp() - 1.0).abs() < 1e-12, "N={order} k={k}");
            }
        }
    }

    #[test]
    fn bandlimit_sixteen_nodes() {
        let rule = half_range_hermite_rule(32).unwrap();
        assert_eq!(rule.nodes.len(), 32);
        assert!(rule.nodes[0] > 0.0);
        assert!(rule.nodes.windows(2).all(|w| w[1] > w[0]));
        assert!(rule.weights.iter().all(|&a| a > 0.0));
    }

    #[test]
    fn modified_weights_log_space_agree() {
        for order in [1usize, 4, 8, 16, 32] {
            let rule = half_range_hermite_rule(order).unwrap();
            let direct = modified_radial_weights(&rule).unwrap();
            for (x, y) in direct.iter().zip(&rule.modified_weights) {
                assert!(*y > 0.0);
                assert!((x - y).abs() < 1e-13 * y, "N={order}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn nodes_interlace() {
        let mut prev = half_range_hermite_rule(1).unwrap();
        for order in 2..=64 {
            let next = half_range_hermite_rule(order).unwrap();
            for i in 0..prev.order {
                assert!(next.nodes[i] < prev.nodes[i] && prev.nodes[i] < next.nodes[i + 1]);
            }
            prev = next;
        }
    }
}
