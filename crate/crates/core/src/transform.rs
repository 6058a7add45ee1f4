//! Discrete SGL Fourier transforms between the `8B³` sample grid (ψ-order)
//! and the `Ω(B)` coefficient vector (ω-order).
//!
//! Three realizations share one contract: the naive transforms evaluate every
//! basis function at every node, the separated transforms split the sum into
//! a naive spherical stage and a radial matrix stage, and the fast transforms
//! combine the seminaive spherical transform with the recurrence-based radial
//! transform.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, SglError};
use crate::indexing::{coefficient_count, nu, nu_inv, omega, psi_inv, sample_count, sgl_triples};
use crate::quadrature::{half_range_hermite_rule, sphere_rule, RadialRule, SphericalRule};
use crate::radial::RadialPlan;
use crate::special::{radial_column, sgl_basis, sgl_basis_prepared, PreparedPoint, SphericalPoint};
use crate::spherical::{
    sft_naive_forward, sft_naive_inverse, sft_seminaive_forward_into, sft_seminaive_inverse_into, LegendreDctTable,
    SphericalCoefficients, SphericalPlan, SphericalWorkspace,
};

/// Which realization of the transform pair to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Naive,
    Separated,
    Fast,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Naive, Variant::Separated, Variant::Fast];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Naive => "naive",
            Variant::Separated => "separated",
            Variant::Fast => "fast",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = SglError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "naive" => Ok(Variant::Naive),
            "separated" => Ok(Variant::Separated),
            "fast" => Ok(Variant::Fast),
            other => Err(SglError::UnknownVariant(other.to_string())),
        }
    }
}

/// Below this many basis evaluations the naive transforms stay on the calling thread.
const SERIAL_WORK: usize = 1 << 16;

/// Immutable tables and kernel plans for one bandlimit.
#[derive(Clone)]
pub struct TransformPlan {
    bandlimit: usize,
    radial: RadialPlan,
    spherical: SphericalPlan,
    pool: Option<Arc<rayon::ThreadPool>>,
}

impl fmt::Debug for TransformPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformPlan")
            .field("bandlimit", &self.bandlimit)
            .field("threads", &self.threads())
            .finish()
    }
}

impl TransformPlan {
    /// Builds every table in memory, including the extended-precision radial rule.
    pub fn generate(bandlimit: usize) -> Result<Self> {
        if bandlimit == 0 {
            return Err(SglError::InvalidBandlimit(bandlimit));
        }
        let radial = half_range_hermite_rule(2 * bandlimit)?;
        let spherical = sphere_rule(bandlimit)?;
        let legendre = LegendreDctTable::build_with(&spherical)?;
        Self::from_tables(radial, spherical, legendre)
    }

    pub fn from_tables(radial: RadialRule, spherical: SphericalRule, legendre: LegendreDctTable) -> Result<Self> {
        let bandlimit = spherical.order;
        if bandlimit == 0 {
            return Err(SglError::InvalidBandlimit(bandlimit));
        }
        if radial.order != 2 * bandlimit {
            return Err(SglError::BandlimitMismatch {
                plan: bandlimit,
                requested: radial.order / 2,
            });
        }
        Ok(TransformPlan {
            bandlimit,
            radial: RadialPlan::new(radial)?,
            spherical: SphericalPlan::from_parts(spherical, legendre)?,
            pool: None,
        })
    }

    /// Caps internal parallelism at `threads` workers; `0` means the global pool.
    pub fn with_threads(mut self, threads: usize) -> Result<Self> {
        self.pool = if threads == 0 {
            None
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| SglError::Domain(format!("cannot build thread pool: {e}")))?;
            Some(Arc::new(pool))
        };
        Ok(self)
    }

    pub fn threads(&self) -> usize {
        match &self.pool {
            Some(pool) => pool.current_num_threads(),
            None => rayon::current_num_threads(),
        }
    }

    pub fn bandlimit(&self) -> usize {
        self.bandlimit
    }

    pub fn radial_rule(&self) -> &RadialRule {
        self.radial.rule()
    }

    pub fn spherical_rule(&self) -> &SphericalRule {
        self.spherical.rule()
    }

    pub fn legendre_table(&self) -> &LegendreDctTable {
        self.spherical.table()
    }

    /// Maps `f` over `items`, in parallel only when `work` basis evaluations
    /// outweigh the cost of dispatching to the pool.
    fn map_items<T: Sync, R: Send>(&self, items: &[T], work: usize, f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        if work < SERIAL_WORK {
            items.iter().map(f).collect()
        } else {
            self.install(|| items.par_iter().map(f).collect())
        }
    }

    fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(op),
            None => op(),
        }
    }

    /// `(r, ϑ, φ)` of sample `ψ`.
    pub fn node(&self, index: usize) -> Result<SphericalPoint> {
        let (i, j, k) = psi_inv(index, self.bandlimit)?;
        Ok(SphericalPoint {
            r: self.radial.rule().nodes[i],
            theta: self.spherical.rule().theta[j],
            phi: self.spherical.rule().phi[k],
        })
    }

    /// Quadrature weight `ã_i e^{−r_i²} b_j` of sample `ψ`.
    pub fn sample_weight(&self, index: usize) -> Result<f64> {
        let (i, j, _) = psi_inv(index, self.bandlimit)?;
        let r = self.radial.rule().nodes[i];
        Ok(self.radial.rule().modified_weights[i] * (-r * r).exp() * self.spherical.rule().weights[j])
    }

    fn check_grid(&self, grid: &[Complex64]) -> Result<()> {
        let want = sample_count(self.bandlimit);
        if grid.len() != want {
            return Err(SglError::LengthMismatch {
                expected: want,
                found: grid.len(),
            });
        }
        Ok(())
    }

    fn check_coeffs(&self, coeffs: &[Complex64]) -> Result<()> {
        let want = coefficient_count(self.bandlimit);
        if coeffs.len() != want {
            return Err(SglError::LengthMismatch {
                expected: want,
                found: coeffs.len(),
            });
        }
        Ok(())
    }

    pub fn forward(&self, variant: Variant, grid: &[Complex64]) -> Result<Vec<Complex64>> {
        match variant {
            Variant::Naive => dsglft_naive(grid, self),
            Variant::Separated => dsglft_separated(grid, self),
            Variant::Fast => fsglft(grid, self),
        }
    }

    pub fn inverse(&self, variant: Variant, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        match variant {
            Variant::Naive => idsglft_naive(coeffs, self),
            Variant::Separated => idsglft_separated(coeffs, self),
            Variant::Fast => ifsglft(coeffs, self),
        }
    }
}

fn nodes(plan: &TransformPlan) -> Vec<(PreparedPoint, f64)> {
    (0..sample_count(plan.bandlimit))
        .map(|p| Ok((PreparedPoint::new(plan.node(p)?), plan.sample_weight(p)?)))
        .collect::<Result<_>>()
        .expect("indices in range")
}

/// `f̂_nlm = Σ_ψ ã_i e^{−r_i²} b_j f(x_ψ) conj(H_nlm(x_ψ))`, one basis evaluation per term.
pub fn dsglft_naive(grid: &[Complex64], plan: &TransformPlan) -> Result<Vec<Complex64>> {
    plan.check_grid(grid)?;
    let nodes = nodes(plan);
    let triples: Vec<(usize, usize, isize)> = sgl_triples(plan.bandlimit).collect();
    Ok(plan.map_items(&triples, triples.len() * nodes.len(), |&(n, l, m)| {
        let mut acc = Complex64::default();
        for (&(x, w), &f) in nodes.iter().zip(grid) {
            acc += f * w * sgl_basis_prepared(n, l, m, &x).conj();
        }
        acc
    }))
}

/// `f(x_ψ) = Σ_ω f̂_ω H_ω(x_ψ)`, one basis evaluation per term.
pub fn idsglft_naive(coeffs: &[Complex64], plan: &TransformPlan) -> Result<Vec<Complex64>> {
    plan.check_coeffs(coeffs)?;
    let nodes = nodes(plan);
    let triples: Vec<(usize, usize, isize)> = sgl_triples(plan.bandlimit).collect();
    Ok(plan.map_items(&nodes, triples.len() * nodes.len(), |&(x, _)| {
        let mut acc = Complex64::default();
        for (&(n, l, m), &c) in triples.iter().zip(coeffs) {
            acc += c * sgl_basis_prepared(n, l, m, &x);
        }
        acc
    }))
}

/// `N_nl R_nl(r_i)` at `[l][i][n − l − 1]`.
fn radial_matrices(plan: &TransformPlan) -> Vec<Vec<Vec<f64>>> {
    let b = plan.bandlimit;
    (0..b)
        .map(|l| {
            plan.radial
                .rule()
                .nodes
                .iter()
                .map(|&r| radial_column(l, b, r, false))
                .collect()
        })
        .collect()
}

/// Naive spherical quadrature per shell, then dense radial products.
pub fn dsglft_separated(grid: &[Complex64], plan: &TransformPlan) -> Result<Vec<Complex64>> {
    plan.check_grid(grid)?;
    let b = plan.bandlimit;
    let shell_len = 4 * b * b;
    let shells: Vec<SphericalCoefficients> = plan.install(|| {
        grid.par_chunks(shell_len)
            .map(|shell| sft_naive_forward(shell, b))
            .collect::<Result<_>>()
    })?;
    let matrices = radial_matrices(plan);
    let rule = plan.radial.rule();
    let weights: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.modified_weights)
        .map(|(r, a)| a * (-r * r).exp())
        .collect();
    let mut out = vec![Complex64::default(); coefficient_count(b)];
    for l in 0..b {
        for m in -(l as isize)..=l as isize {
            let v = nu(l, m);
            for n in (l + 1)..=b {
                let mut acc = Complex64::default();
                for (i, shell) in shells.iter().enumerate() {
                    acc += shell.values[v] * (matrices[l][i][n - l - 1] * weights[i]);
                }
                out[omega(n, l, m)] = acc;
            }
        }
    }
    Ok(out)
}

/// Dense radial synthesis, then naive spherical synthesis per shell.
pub fn idsglft_separated(coeffs: &[Complex64], plan: &TransformPlan) -> Result<Vec<Complex64>> {
    plan.check_coeffs(coeffs)?;
    let b = plan.bandlimit;
    let matrices = radial_matrices(plan);
    let mut shells = vec![SphericalCoefficients::zeros(b); 2 * b];
    for l in 0..b {
        for m in -(l as isize)..=l as isize {
            let v = nu(l, m);
            for (i, shell) in shells.iter_mut().enumerate() {
                let mut acc = Complex64::default();
                for n in (l + 1)..=b {
                    acc += coeffs[omega(n, l, m)] * matrices[l][i][n - l - 1];
                }
                shell.values[v] = acc;
            }
        }
    }
    let parts: Vec<Vec<Complex64>> = plan.install(|| {
        shells
            .par_iter()
            .map(sft_naive_inverse)
            .collect::<Result<_>>()
    })?;
    Ok(parts.concat())
}

/// Fast forward transform: seminaive spherical stage per shell, then one
/// recurrence-based radial transform per `(l, m)`.
pub fn fsglft(grid: &[Complex64], plan: &TransformPlan) -> Result<Vec<Complex64>> {
    plan.check_grid(grid)?;
    let b = plan.bandlimit;
    let side = 2 * b;
    let harmonics = b * b;
    // stage[i * B² + ν]
    let mut stage = vec![Complex64::default(); side * harmonics];
    plan.install(|| {
        stage
            .par_chunks_mut(harmonics)
            .zip(grid.par_chunks(4 * b * b))
            .try_for_each_init(SphericalWorkspace::default, |ws, (out, shell)| {
                sft_seminaive_forward_into(shell, &plan.spherical, out, ws)
            })
    })?;
    // radial[ν * B + (n − l − 1)]
    let mut radial = vec![Complex64::default(); harmonics * b];
    plan.install(|| {
        radial.par_chunks_mut(b).enumerate().for_each_init(
            || vec![Complex64::default(); side],
            |s, (v, out)| {
                let (l, _) = nu_inv(v);
                for (slot, shell) in s.iter_mut().zip(stage.chunks(harmonics)) {
                    *slot = shell[v];
                }
                plan.radial.forward_into(l, s, &mut out[..b - l]);
            },
        )
    });
    let mut out = vec![Complex64::default(); coefficient_count(b)];
    for (v, t) in radial.chunks(b).enumerate() {
        let (l, m) = nu_inv(v);
        for (n, &value) in ((l + 1)..=b).zip(t) {
            out[omega(n, l, m)] = value;
        }
    }
    Ok(out)
}

/// Fast inverse transform: one Clenshaw radial synthesis per `(l, m)`, then
/// the seminaive spherical inverse per shell.
pub fn ifsglft(coeffs: &[Complex64], plan: &TransformPlan) -> Result<Vec<Complex64>> {
    plan.check_coeffs(coeffs)?;
    let b = plan.bandlimit;
    let side = 2 * b;
    let harmonics = b * b;
    // radial[ν * 2B + i]
    let mut radial = vec![Complex64::default(); harmonics * side];
    plan.install(|| {
        radial.par_chunks_mut(side).enumerate().for_each_init(
            || Vec::with_capacity(b),
            |t, (v, s)| {
                let (l, m) = nu_inv(v);
                t.clear();
                t.extend(((l + 1)..=b).map(|n| coeffs[omega(n, l, m)]));
                plan.radial.inverse_into(l, t, s);
            },
        )
    });
    let mut stage = vec![Complex64::default(); side * harmonics];
    for (v, s) in radial.chunks(side).enumerate() {
        for (i, &value) in s.iter().enumerate() {
            stage[i * harmonics + v] = value;
        }
    }
    let mut grid = vec![Complex64::default(); sample_count(b)];
    plan.install(|| {
        grid.par_chunks_mut(4 * b * b)
            .zip(stage.par_chunks(harmonics))
            .try_for_each_init(SphericalWorkspace::default, |ws, (shell, c)| {
                sft_seminaive_inverse_into(c, &plan.spherical, shell, ws)
            })
    })?;
    Ok(grid)
}

/// Maximum absolute and relative coefficient errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundtripError {
    pub max_abs: f64,
    pub max_rel: f64,
    /// Reference entries with zero magnitude, excluded from `max_rel`.
    pub skipped: usize,
}

/// Errors of `computed` against the reference `reference`.
pub fn roundtrip_error(reference: &[Complex64], computed: &[Complex64]) -> Result<RoundtripError> {
    if reference.len() != computed.len() {
        return Err(SglError::LengthMismatch {
            expected: reference.len(),
            found: computed.len(),
        });
    }
    let mut out = RoundtripError {
        max_abs: 0.0,
        max_rel: 0.0,
        skipped: 0,
    };
    for (a, b) in reference.iter().zip(computed) {
        let err = (a - b).norm();
        out.max_abs = out.max_abs.max(err);
        let mag = a.norm();
        if mag == 0.0 {
            out.skipped += 1;
        } else {
            out.max_rel = out.max_rel.max(err / mag);
        }
    }
    Ok(out)
}

/// `H_nlm` sampled at every node of the plan, in ψ-order.
pub fn sample_basis(n: usize, l: usize, m: isize, plan: &TransformPlan) -> Result<Vec<Complex64>> {
    (0..sample_count(plan.bandlimit))
        .map(|p| sgl_basis(n, l, m, plan.node(p)?))
        .collect()
}
