//! Discrete radial transform between the `2B` radial nodes and SGL degrees
//! `n = l+1..=B` for one order `l`.
//!
//! Both directions run the normalized three-term recurrence in `n`. The
//! forward direction sweeps each node upward with `e^{−r²}` fused into the
//! seed; the inverse evaluates the synthesis sum with Clenshaw's backward
//! recurrence and carries no exponential factor.

use num_complex::Complex64;

use crate::error::{Result, SglError};
use crate::quadrature::RadialRule;
use crate::special::{ln_gamma_half, radial_column};

/// Recurrence coefficients and per-node seeds for one radial rule.
#[derive(Debug, Clone)]
pub struct RadialPlan {
    bandlimit: usize,
    rule: RadialRule,
    /// `(2n − l − 1/2, 1/sqrt((n+1/2)(n−l)), c_nl)` at `l * B + n`.
    steps: Vec<(f64, f64, f64)>,
    /// `sqrt(2/Γ(l+3/2)) r_i^l e^{−r_i²}` at `l * 2B + i`.
    seed_decay: Vec<f64>,
    /// `sqrt(2/Γ(l+3/2)) r_i^l` at `l * 2B + i`.
    seed_plain: Vec<f64>,
}

impl RadialPlan {
    /// Plan for bandlimit `B = order / 2`; the rule order must be even.
    pub fn new(rule: RadialRule) -> Result<Self> {
        if rule.order == 0 || !rule.order.is_multiple_of(2) {
            return Err(SglError::Domain(format!(
                "radial rule order must be a positive even number 2B, got {}",
                rule.order
            )));
        }
        let b = rule.order / 2;
        let side = rule.order;
        let mut steps = vec![(0.0, 0.0, 0.0); b * b];
        for l in 0..b {
            let fl = l as f64;
            for n in (l + 1)..b {
                let fnn = n as f64;
                let den = ((fnn + 0.5) * (fnn - fl)).sqrt();
                let c = -(((fnn - 0.5) * (fnn - fl - 1.0)) / ((fnn + 0.5) * (fnn - fl))).sqrt();
                steps[l * b + n] = (2.0 * fnn - fl - 0.5, 1.0 / den, c);
            }
        }
        let mut seed_decay = vec![0.0; b * side];
        let mut seed_plain = vec![0.0; b * side];
        for l in 0..b {
            let log_norm = 0.5 * (2f64.ln() - ln_gamma_half(l + 1));
            for (i, &r) in rule.nodes.iter().enumerate() {
                let log_pow = log_norm + l as f64 * r.ln();
                seed_plain[l * side + i] = log_pow.exp();
                seed_decay[l * side + i] = (log_pow - r * r).exp();
            }
        }
        Ok(RadialPlan {
            bandlimit: b,
            rule,
            steps,
            seed_decay,
            seed_plain,
        })
    }

    pub fn bandlimit(&self) -> usize {
        self.bandlimit
    }

    pub fn rule(&self) -> &RadialRule {
        &self.rule
    }

    fn check(&self, l: usize, found: usize, expected: usize) -> Result<()> {
        if l >= self.bandlimit {
            return Err(SglError::OutOfRange(format!(
                "order l = {l} must be below B = {}",
                self.bandlimit
            )));
        }
        if found != expected {
            return Err(SglError::LengthMismatch { expected, found });
        }
        Ok(())
    }

    /// `t_n = Σ_i N_nl R_nl(r_i) e^{−r_i²} ã_i s_i` for `n = l+1..=B`.
    pub fn forward(&self, l: usize, s: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(l, s.len(), self.rule.order)?;
        let mut out = vec![Complex64::default(); self.bandlimit - l];
        self.forward_into(l, s, &mut out);
        Ok(out)
    }

    /// Unchecked core of [`RadialPlan::forward`]; `out` is overwritten.
    pub(crate) fn forward_into(&self, l: usize, s: &[Complex64], out: &mut [Complex64]) {
        let b = self.bandlimit;
        let side = self.rule.order;
        out.iter_mut().for_each(|z| *z = Complex64::default());
        let steps = &self.steps[l * b..(l + 1) * b];
        for i in 0..side {
            let w = s[i] * self.rule.modified_weights[i];
            let r2 = self.rule.nodes[i] * self.rule.nodes[i];
            let mut prev = 0.0;
            let mut cur = self.seed_decay[l * side + i];
            out[0] += w * cur;
            for (n, slot) in ((l + 1)..b).zip(out[1..].iter_mut()) {
                let (shift, inv, c) = steps[n];
                let next = (shift - r2) * inv * cur + c * prev;
                prev = cur;
                cur = next;
                *slot += w * cur;
            }
        }
    }

    /// `s_i = Σ_n t_n N_nl R_nl(r_i)` for every node, by Clenshaw's recurrence.
    pub fn inverse(&self, l: usize, t: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check(l, t.len(), self.bandlimit - l)?;
        let mut out = vec![Complex64::default(); self.rule.order];
        self.inverse_into(l, t, &mut out);
        Ok(out)
    }

    /// Unchecked core of [`RadialPlan::inverse`]; `out` is overwritten.
    pub(crate) fn inverse_into(&self, l: usize, t: &[Complex64], out: &mut [Complex64]) {
        let b = self.bandlimit;
        let side = self.rule.order;
        let steps = &self.steps[l * b..(l + 1) * b];
        for (i, o) in out.iter_mut().enumerate() {
            let r2 = self.rule.nodes[i] * self.rule.nodes[i];
            // b_n = t_n + α_n b_{n+1} + β_{n+1} b_{n+2}, descending from n = B
            let mut next = Complex64::default();
            let mut next2 = Complex64::default();
            let mut beta_next = 0.0;
            for n in ((l + 1)..=b).rev() {
                let (alpha, beta) = if n < b {
                    let (shift, inv, c) = steps[n];
                    ((shift - r2) * inv, c)
                } else {
                    (0.0, 0.0)
                };
                let cur = t[n - l - 1] + next * alpha + next2 * beta_next;
                next2 = next;
                next = cur;
                beta_next = beta;
            }
            *o = next * self.seed_plain[l * side + i];
        }
    }
}

/// One-shot forward DRT for order `l`; prefer [`RadialPlan`] for repeated use.
pub fn drt_forward(l: usize, s: &[Complex64], rule: &RadialRule) -> Result<Vec<Complex64>> {
    RadialPlan::new(rule.clone())?.forward(l, s)
}

/// One-shot inverse DRT for order `l`.
pub fn drt_inverse(l: usize, t: &[Complex64], rule: &RadialRule) -> Result<Vec<Complex64>> {
    RadialPlan::new(rule.clone())?.inverse(l, t)
}

/// Max deviation of `R_l diag(a_i r_i²) R_lᵀ` from the identity, where `R_l`
/// holds `N_nl R_nl(r_i)` for `n = l+1..=B` and the rule may have any order.
pub fn radial_orthogonality_check(l: usize, bandlimit: usize, rule: &RadialRule) -> Result<f64> {
    if l >= bandlimit {
        return Err(SglError::OutOfRange(format!(
            "order l = {l} must be below B = {bandlimit}"
        )));
    }
    // scaled[i][n − l − 1] = sqrt(a_i) r_i N_nl R_nl(r_i), kept in range at large r
    let scaled: Vec<Vec<f64>> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&r, &a)| {
            let factor = a.sqrt() * r;
            radial_column(l, bandlimit, r, false)
                .into_iter()
                .map(|v| v * factor)
                .collect()
        })
        .collect();
    let size = bandlimit - l;
    let mut worst: f64 = 0.0;
    for p in 0..size {
        for q in 0..size {
            let entry: f64 = scaled.iter().map(|row| row[p] * row[q]).sum();
            let want = if p == q { 1.0 } else { 0.0 };
            worst = worst.max((entry - want).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::half_range_hermite_rule;
    use crate::special::{gen_laguerre, norm_const};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<Complex64> {
        (0..len)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// `N_nl L_{n−l−1}^{(l+1/2)}(r²) r^l` from the explicit polynomial.
    fn closed_form(n: usize, l: usize, r: f64) -> f64 {
        norm_const(n, l).unwrap() * gen_laguerre(n - l - 1, l as f64 + 0.5, r * r) * r.powi(l as i32)
    }

    #[test]
    fn forward_matches_matrix_product() {
        let b = 8;
        let rule = half_range_hermite_rule(2 * b).unwrap();
        let plan = RadialPlan::new(rule.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for l in 0..b {
            let s = random_vec(&mut rng, 2 * b);
            let got = plan.forward(l, &s).unwrap();
            assert_eq!(got.len(), b - l);
            for n in (l + 1)..=b {
                let want: Complex64 = (0..2 * b)
                    .map(|i| {
                        let r = rule.nodes[i];
                        s[i] * (closed_form(n, l, r) * (-r * r).exp() * rule.modified_weights[i])
                    })
                    .sum();
                let err = (got[n - l - 1] - want).norm();
                assert!(err < 1e-12 * want.norm().max(1.0), "l={l} n={n}: {err}");
            }
        }
    }

    #[test]
    fn inverse_matches_direct_synthesis() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for b in [2usize, 4, 8, 16] {
            let rule = half_range_hermite_rule(2 * b).unwrap();
            let plan = RadialPlan::new(rule.clone()).unwrap();
            for l in 0..b {
                let t = random_vec(&mut rng, b - l);
                let got = plan.inverse(l, &t).unwrap();
                for (i, &r) in rule.nodes.iter().enumerate() {
                    let column = radial_column(l, b, r, false);
                    let want: Complex64 = t.iter().zip(&column).map(|(&c, &v)| c * v).sum();
                    let scale = column.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                    assert!((got[i] - want).norm() < 1e-11 * scale, "B={b} l={l} i={i}");
                }
            }
        }
    }

    #[test]
    fn single_degree_cases() {
        let b = 6;
        let rule = half_range_hermite_rule(2 * b).unwrap();
        let plan = RadialPlan::new(rule.clone()).unwrap();
        let s: Vec<Complex64> = (0..2 * b).map(|i| Complex64::new(i as f64 * 0.1, 1.0)).collect();
        let got = plan.forward(b - 1, &s).unwrap();
        assert_eq!(got.len(), 1);
        let want: Complex64 = (0..2 * b)
            .map(|i| {
                let r = rule.nodes[i];
                s[i] * (closed_form(b, b - 1, r) * (-r * r).exp() * rule.modified_weights[i])
            })
            .sum();
        assert!((got[0] - want).norm() < 1e-12 * want.norm());

        for l in [0usize, 2, 5] {
            let mut t = vec![Complex64::default(); b - l];
            t[0] = Complex64::new(1.0, 0.0);
            let values = plan.inverse(l, &t).unwrap();
            let norm = (2.0 / ln_gamma_half(l + 1).exp()).sqrt();
            for (v, &r) in values.iter().zip(&rule.nodes) {
                let want = norm * r.powi(l as i32);
                assert!((v.re - want).abs() < 1e-13 * want.max(1.0) && v.im == 0.0);
            }
        }
    }

    #[test]
    fn zero_in_zero_out() {
        let rule = half_range_hermite_rule(8).unwrap();
        let plan = RadialPlan::new(rule).unwrap();
        let zero = vec![Complex64::default(); 8];
        assert!(plan.forward(1, &zero).unwrap().iter().all(|z| z.norm() == 0.0));
        let zero = vec![Complex64::default(); 3];
        assert!(plan.inverse(1, &zero).unwrap().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn shape_errors() {
        let rule = half_range_hermite_rule(8).unwrap();
        let plan = RadialPlan::new(rule.clone()).unwrap();
        assert!(plan.forward(4, &[Complex64::default(); 8]).is_err());
        assert!(plan.forward(0, &[Complex64::default(); 7]).is_err());
        assert!(plan.inverse(0, &[Complex64::default(); 3]).is_err());
        assert!(RadialPlan::new(half_range_hermite_rule(7).unwrap()).is_err());
    }

    #[test]
    fn forward_inverts_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for b in [4usize, 8, 16] {
            let rule = half_range_hermite_rule(2 * b).unwrap();
            for l in 0..b {
                let t = random_vec(&mut rng, b - l);
                let s = drt_inverse(l, &t, &rule).unwrap();
                let back = drt_forward(l, &s, &rule).unwrap();
                assert!(max_diff(&back, &t) < 1e-10, "B={b} l={l}");
            }
        }
    }

    #[test]
    fn forward_is_weighted_transpose_of_inverse() {
        let b = 4;
        let rule = half_range_hermite_rule(2 * b).unwrap();
        let plan = RadialPlan::new(rule.clone()).unwrap();
        for l in 0..b {
            for i in 0..2 * b {
                let mut e = vec![Complex64::default(); 2 * b];
                e[i] = Complex64::new(1.0, 0.0);
                let column = plan.forward(l, &e).unwrap();
                for n in 0..b - l {
                    let mut u = vec![Complex64::default(); b - l];
                    u[n] = Complex64::new(1.0, 0.0);
                    let inv = plan.inverse(l, &u).unwrap()[i].re;
                    let r = rule.nodes[i];
                    let want = inv * (-r * r).exp() * rule.modified_weights[i];
                    assert!((column[n].re - want).abs() < 1e-13, "l={l} i={i} n={n}");
                }
            }
        }
    }

    #[test]
    fn orthogonality_diagnostic() {
        for b in [1usize, 2, 4, 8, 16] {
            let rule = half_range_hermite_rule(2 * b).unwrap();
            for l in 0..b {
                let dev = radial_orthogonality_check(l, b, &rule).unwrap();
                assert!(dev < 1e-10, "B={b} l={l}: {dev}");
            }
        }
        let rule = half_range_hermite_rule(16).unwrap();
        assert!(radial_orthogonality_check(0, 8, &rule).unwrap() < 1e-11);
        assert!(radial_orthogonality_check(7, 8, &rule).unwrap() < 1e-12);
    }

    #[test]
    fn insufficient_rule_is_detected() {
        // degree 2B−2 polynomials need a rule exact to that degree
        let rule = half_range_hermite_rule(3).unwrap();
        let dev = radial_orthogonality_check(0, 8, &rule).unwrap();
        assert!(dev > 0.1, "deviation {dev}");
    }
}
