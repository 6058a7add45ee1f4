//! Half-range Gauss–Hermite rules, generated in extended precision.
//!
//! Recurrence coefficients of the monic orthogonal polynomials for
//! `e^{−r²}` on `[0, ∞)` come from the analytic moments
//! `μ_k = Γ((k+1)/2) / 2` by the Chebyshev algorithm. The moment map is
//! badly conditioned (about one bit lost per unit of order), so the whole
//! pipeline runs with a binary mantissa that grows with the order. Nodes are
//! seeded by a double-precision Golub–Welsch eigen-solve of the Jacobi
//! matrix and polished by Newton's method on `p_N` in extended precision;
//! weights are the Christoffel numbers `1 / Σ_k p̂_k(r_i)²` evaluated at the
//! polished nodes.

use dashu_float::FBig;

use crate::error::{Result, SglError};

type Big = FBig;

/// Largest supported rule order.
pub const MAX_ORDER: usize = 128;

/// Working precision in bits for a rule of order `n`.
pub fn working_precision(n: usize) -> usize {
    192 + 4 * n
}

/// Extended-precision nodes and weights rounded to doubles.
#[derive(Debug, Clone)]
pub struct HermiteNodes {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `a_i e^{r_i²} r_i²`, formed before rounding.
    pub modified_weights: Vec<f64>,
    /// Weights from the double-precision eigenvector components,
    /// `μ_0 · v_{0i}²`, kept for diagnostics.
    pub eigen_weights: Vec<f64>,
}

fn big(x: i64, prec: usize) -> Big {
    Big::from(x).with_precision(prec).value()
}

fn to_f64(x: &Big) -> f64 {
    x.to_f64().value()
}

/// Analytic moments `μ_k = ∫_0^∞ r^k e^{−r²} dr`, `k < count`.
pub fn moments(count: usize, prec: usize) -> Vec<Big> {
    let mut out: Vec<Big> = Vec::with_capacity(count);
    let half = big(1, prec) / big(2, prec);
    let mu0 = Big::pi(prec).sqrt() * half.clone();
    for k in 0..count {
        let value = match k {
            0 => mu0.clone(),
            1 => half.clone(),
            _ => out[k - 2].clone() * big(k as i64 - 1, prec) * half.clone(),
        };
        out.push(value);
    }
    out
}

/// Monic recurrence coefficients `(α_k, β_k)`, `k < n`, by the Chebyshev
/// algorithm; `β_0 = μ_0`.
pub fn recurrence_coefficients(n: usize, prec: usize) -> Result<(Vec<Big>, Vec<Big>)> {
    let mu = moments(2 * n, prec);
    let zero = big(0, prec);
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    alpha.push(mu[1].clone() / mu[0].clone());
    beta.push(mu[0].clone());
    // sigma rows k−2 and k−1, indexed by l
    let mut sig_prev2 = vec![zero.clone(); 2 * n];
    let mut sig_prev = mu.clone();
    for k in 1..n {
        let mut sig = vec![zero.clone(); 2 * n];
        for l in k..(2 * n - k) {
            sig[l] = sig_prev[l + 1].clone()
                - alpha[k - 1].clone() * sig_prev[l].clone()
                - beta[k - 1].clone() * sig_prev2[l].clone();
        }
        if sig[k] <= zero {
            return Err(SglError::Precision(format!(
                "non-positive norm at degree {k} of the half-range Hermite recurrence; \
                 {prec} bits are insufficient"
            )));
        }
        alpha.push(sig[k + 1].clone() / sig[k].clone() - sig_prev[k].clone() / sig_prev[k - 1].clone());
        beta.push(sig[k].clone() / sig_prev[k - 1].clone());
        sig_prev2 = sig_prev;
        sig_prev = sig;
    }
    Ok((alpha, beta))
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix with diagonal `diag` and off-diagonal `off` (`off[i]` couples `i`
/// and `i+1`), by implicit QL iterations.
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let mut z = vec![0.0; n];
    if n > 0 {
        z[0] = 1.0;
    }
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(SglError::Precision(format!(
                    "tridiagonal eigen-solve did not converge for eigenvalue {l} of {n}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    Ok((order.iter().map(|&i| d[i]).collect(), order.iter().map(|&i| z[i]).collect()))
}

/// Monic `p_N(x)` and its derivative by the recurrence.
fn monic_value(x: &Big, alpha: &[Big], beta: &[Big], prec: usize) -> (Big, Big) {
    let mut p_prev = big(0, prec);
    let mut p = big(1, prec);
    let mut dp_prev = big(0, prec);
    let mut dp = big(0, prec);
    for k in 0..alpha.len() {
        let shift = x.clone() - alpha[k].clone();
        let p_next = shift.clone() * p.clone() - beta[k].clone() * p_prev.clone();
        let dp_next = p.clone() + shift * dp.clone() - beta[k].clone() * dp_prev.clone();
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    (p, dp)
}

/// Christoffel number `1 / Σ_{k<N} p_k(x)² / (β_0 ⋯ β_k)`.
fn christoffel(x: &Big, alpha: &[Big], beta: &[Big], prec: usize) -> Big {
    let mut p_prev = big(0, prec);
    let mut p = big(1, prec);
    let mut norm = beta[0].clone();
    let mut sum = p.clone() * p.clone() / norm.clone();
    for k in 0..alpha.len() - 1 {
        let p_next = (x.clone() - alpha[k].clone()) * p.clone() - beta[k].clone() * p_prev.clone();
        p_prev = p;
        p = p_next;
        norm *= beta[k + 1].clone();
        sum += p.clone() * p.clone() / norm.clone();
    }
    big(1, prec) / sum
}

/// Generates the order-`n` half-range Gauss–Hermite rule.
pub fn generate(n: usize) -> Result<HermiteNodes> {
    if n == 0 || n > MAX_ORDER {
        return Err(SglError::UnsupportedOrder { order: n, max: MAX_ORDER });
    }
    let prec = working_precision(n);
    let (alpha, beta) = recurrence_coefficients(n, prec)?;

    let diag: Vec<f64> = alpha.iter().map(to_f64).collect();
    let off: Vec<f64> = beta[1..].iter().map(|b| to_f64(&b.sqrt())).collect();
    let (seeds, first) = tridiagonal_eigen(&diag, &off)?;
    let mu0 = to_f64(&beta[0]);
    let eigen_weights: Vec<f64> = first.iter().map(|v| mu0 * v * v).collect();

    let tolerance = {
        let scale = Big::from(1).with_precision(prec).value();
        let bits = (prec - 16) as isize;
        scale * Big::from_parts(1.into(), -bits)
    };
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut modified_weights = Vec::with_capacity(n);
    for (i, &seed) in seeds.iter().enumerate() {
        let mut x = Big::try_from(seed)
            .map_err(|_| SglError::Precision(format!("non-finite eigenvalue seed {seed}")))?
            .with_precision(prec)
            .value();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = monic_value(&x, &alpha, &beta, prec);
            let step = p / dp;
            x -= step.clone();
            let mut rel = step.clone() / x.clone();
            if rel < big(0, prec) {
                rel = -rel;
            }
            if rel <= tolerance {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(SglError::Precision(format!(
                "Newton refinement of node {i} of the order-{n} rule did not converge"
            )));
        }
        let weight = christoffel(&x, &alpha, &beta, prec);
        let x2 = x.clone() * x.clone();
        let modified = weight.clone() * x2.clone().exp() * x2;
        let node = to_f64(&x);
        let w = to_f64(&weight);
        if !(node > 0.0) || !(w > 0.0) {
            return Err(SglError::Precision(format!(
                "node {i} of the order-{n} rule lost positivity (r = {node}, a = {w})"
            )));
        }
        nodes.push(node);
        weights.push(w);
        modified_weights.push(to_f64(&modified));
    }
    if nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SglError::Precision(format!(
            "nodes of the order-{n} rule are not strictly increasing"
        )));
    }
    Ok(HermiteNodes {
        nodes,
        weights,
        modified_weights,
        eigen_weights,
    })
}
