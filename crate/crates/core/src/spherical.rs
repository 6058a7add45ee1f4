//! Spherical Fourier transforms on the `2L × 2L` equiangular grid.
//!
//! The naive transforms evaluate the quadrature sum directly. The seminaive
//! transforms split into an azimuthal DFT per polar row and a discrete
//! Legendre transform per order `m`, where each Legendre inner product is
//! taken in cosine (even `m`) or sine (odd `m`) space. There the transformed
//! Legendre vectors have at most `l + 1` nonzero leading entries, so only
//! those are stored.

use num_complex::Complex64;

use crate::error::{Result, SglError};
use crate::indexing::nu;
use crate::kernels::{AzimuthPlan, DctPlan, TrigMode, TrigScratch};
use crate::quadrature::{sphere_rule, SphericalRule};
use crate::special::normalized_legendre_column;

/// Spherical harmonic coefficients in ν-order.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalCoefficients {
    pub order: usize,
    pub values: Vec<Complex64>,
}

impl SphericalCoefficients {
    pub fn zeros(order: usize) -> Self {
        SphericalCoefficients {
            order,
            values: vec![Complex64::default(); order * order],
        }
    }

    pub fn new(order: usize, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != order * order {
            return Err(SglError::LengthMismatch {
                expected: order * order,
                found: values.len(),
            });
        }
        Ok(SphericalCoefficients { order, values })
    }

    pub fn get(&self, l: usize, m: isize) -> Complex64 {
        self.values[nu(l, m)]
    }
}

pub(crate) fn trig_mode(m: usize) -> TrigMode {
    if m.is_multiple_of(2) {
        TrigMode::Cosine
    } else {
        TrigMode::Sine
    }
}

/// `(−1)^{|m|}` for negative `m`, else 1.
#[inline]
pub(crate) fn order_sign(m: isize) -> f64 {
    if m < 0 && m.unsigned_abs() % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// DFT bin holding azimuthal order `m`.
#[inline]
pub(crate) fn bin(m: isize, len: usize) -> usize {
    m.rem_euclid(len as isize) as usize
}

/// Transformed normalized Legendre vectors `T_{2L} (M_lm P_lm(cos ϑ_j))_j`
/// for `0 ≤ m ≤ l < L`, truncated to `l + 1` entries. `T` is the cosine
/// transform for even `m` and the sine transform for odd `m`. Negative orders
/// reuse the `|m|` row with the sign `(−1)^{|m|}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreDctTable {
    order: usize,
    /// Row-major by `m`, then `l = m..L`.
    rows: Vec<Vec<f64>>,
}

impl LegendreDctTable {
    pub fn build(order: usize) -> Result<Self> {
        let rule = sphere_rule(order)?;
        Self::build_with(&rule)
    }

    pub fn build_with(rule: &SphericalRule) -> Result<Self> {
        let order = rule.order;
        let side = 2 * order;
        let cosines: Vec<f64> = rule.theta.iter().map(|t| t.cos()).collect();
        let mut rows = Vec::with_capacity(order * (order + 1) / 2);
        for m in 0..order {
            let plan = DctPlan::new(side, trig_mode(m));
            // columns[j][l − m]
            let columns: Vec<Vec<f64>> = cosines
                .iter()
                .map(|&t| normalized_legendre_column(m, order - 1, t))
                .collect();
            for l in m..order {
                let samples: Vec<f64> = columns.iter().map(|c| c[l - m]).collect();
                let mut row = plan.forward(&samples)?;
                row.truncate(l + 1);
                rows.push(row);
            }
        }
        Ok(LegendreDctTable { order, rows })
    }

    /// Rebuilds a table from stored rows in `(m, l)` order, checking shapes.
    pub fn from_rows(order: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        let want = order * (order + 1) / 2;
        if rows.len() != want {
            return Err(SglError::LengthMismatch {
                expected: want,
                found: rows.len(),
            });
        }
        let mut idx = 0;
        for m in 0..order {
            for l in m..order {
                if rows[idx].len() != l + 1 {
                    return Err(SglError::LengthMismatch {
                        expected: l + 1,
                        found: rows[idx].len(),
                    });
                }
                idx += 1;
            }
        }
        Ok(LegendreDctTable { order, rows })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    fn row_index(&self, l: usize, m: usize) -> usize {
        m * self.order - m * m.saturating_sub(1) / 2 + (l - m)
    }

    /// Stored row for `(l, |m|)`.
    pub fn row(&self, l: usize, m: usize) -> &[f64] {
        &self.rows[self.row_index(l, m)]
    }

    /// Number of stored `f64` values.
    pub fn stored_len(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }
}

/// Immutable state for repeated spherical transforms of one order.
#[derive(Debug, Clone)]
pub struct SphericalPlan {
    rule: SphericalRule,
    table: LegendreDctTable,
    azimuth: AzimuthPlan,
    cosine: DctPlan,
    sine: DctPlan,
}

impl SphericalPlan {
    pub fn new(order: usize) -> Result<Self> {
        let rule = sphere_rule(order)?;
        let table = LegendreDctTable::build_with(&rule)?;
        Self::from_parts(rule, table)
    }

    pub fn from_parts(rule: SphericalRule, table: LegendreDctTable) -> Result<Self> {
        if rule.order != table.order() {
            return Err(SglError::BandlimitMismatch {
                plan: table.order(),
                requested: rule.order,
            });
        }
        let side = 2 * rule.order;
        Ok(SphericalPlan {
            azimuth: AzimuthPlan::new(side),
            cosine: DctPlan::new(side, TrigMode::Cosine),
            sine: DctPlan::new(side, TrigMode::Sine),
            rule,
            table,
        })
    }

    pub fn order(&self) -> usize {
        self.rule.order
    }

    pub fn rule(&self) -> &SphericalRule {
        &self.rule
    }

    pub fn table(&self) -> &LegendreDctTable {
        &self.table
    }

    fn trig(&self, m: usize) -> &DctPlan {
        match trig_mode(m) {
            TrigMode::Cosine => &self.cosine,
            TrigMode::Sine => &self.sine,
        }
    }
}

fn check_grid(samples: &[Complex64], order: usize) -> Result<()> {
    let want = 4 * order * order;
    if samples.len() != want {
        return Err(SglError::LengthMismatch {
            expected: want,
            found: samples.len(),
        });
    }
    Ok(())
}

/// `M_lm P_lm(cos ϑ_j)` for all `0 ≤ m ≤ l < L`, indexed `[m][j][l − m]`.
fn legendre_grid(rule: &SphericalRule) -> Vec<Vec<Vec<f64>>> {
    let order = rule.order;
    (0..order)
        .map(|m| {
            rule.theta
                .iter()
                .map(|t| normalized_legendre_column(m, order - 1, t.cos()))
                .collect()
        })
        .collect()
}

/// `⟨g, Y_lm⟩ ≈ Σ_{j,k} b_j g(ϑ_j, φ_k) conj(Y_lm(ϑ_j, φ_k))` by direct summation.
pub fn sft_naive_forward(samples: &[Complex64], order: usize) -> Result<SphericalCoefficients> {
    check_grid(samples, order)?;
    let rule = sphere_rule(order)?;
    let side = 2 * order;
    let legendre = legendre_grid(&rule);
    let mut out = SphericalCoefficients::zeros(order);
    for l in 0..order {
        for m in -(l as isize)..=l as isize {
            let am = m.unsigned_abs();
            let sign = order_sign(m);
            let mut acc = Complex64::default();
            for j in 0..side {
                let y = sign * legendre[am][j][l - am];
                let mut row = Complex64::default();
                for k in 0..side {
                    let phase = Complex64::from_polar(1.0, -(m as f64) * rule.phi[k]);
                    row += samples[j * side + k] * phase;
                }
                acc += rule.weights[j] * y * row;
            }
            out.values[nu(l, m)] = acc;
        }
    }
    Ok(out)
}

/// `g(ϑ_j, φ_k) = Σ_{l,m} c_lm Y_lm(ϑ_j, φ_k)` by direct summation.
pub fn sft_naive_inverse(coeffs: &SphericalCoefficients) -> Result<Vec<Complex64>> {
    let order = coeffs.order;
    if coeffs.values.len() != order * order {
        return Err(SglError::LengthMismatch {
            expected: order * order,
            found: coeffs.values.len(),
        });
    }
    let rule = sphere_rule(order)?;
    let side = 2 * order;
    let legendre = legendre_grid(&rule);
    let mut out = vec![Complex64::default(); side * side];
    for j in 0..side {
        for k in 0..side {
            let mut acc = Complex64::default();
            for l in 0..order {
                for m in -(l as isize)..=l as isize {
                    let am = m.unsigned_abs();
                    let y = order_sign(m) * legendre[am][j][l - am];
                    let phase = Complex64::from_polar(1.0, m as f64 * rule.phi[k]);
                    acc += coeffs.values[nu(l, m)] * y * phase;
                }
            }
            out[j * side + k] = acc;
        }
    }
    Ok(out)
}

/// Direct Legendre sums `M_lm Σ_j P_lm(cos ϑ_j) t_j` for `l = |m|..L`.
pub fn dlt_naive(m: isize, t: &[Complex64], rule: &SphericalRule) -> Result<Vec<Complex64>> {
    let order = rule.order;
    let am = m.unsigned_abs();
    if am >= order {
        return Err(SglError::OutOfRange(format!("|m| = {am} must be below L = {order}")));
    }
    if t.len() != 2 * order {
        return Err(SglError::LengthMismatch {
            expected: 2 * order,
            found: t.len(),
        });
    }
    let sign = order_sign(m);
    let columns: Vec<Vec<f64>> = rule
        .theta
        .iter()
        .map(|th| normalized_legendre_column(am, order - 1, th.cos()))
        .collect();
    Ok((am..order)
        .map(|l| {
            t.iter()
                .zip(&columns)
                .map(|(&x, c)| x * (sign * c[l - am]))
                .sum()
        })
        .collect())
}

/// Legendre sums for `l = |m|..L` as truncated inner products in transform
/// space. `t` already carries the quadrature weights.
pub fn dlt_seminaive(m: isize, t: &[Complex64], plan: &SphericalPlan) -> Result<Vec<Complex64>> {
    let order = plan.order();
    let am = m.unsigned_abs();
    if am >= order {
        return Err(SglError::OutOfRange(format!("|m| = {am} must be below L = {order}")));
    }
    let transformed = plan.trig(am).forward_complex(t)?;
    let sign = order_sign(m);
    Ok((am..order)
        .map(|l| {
            let row = plan.table.row(l, am);
            let acc: Complex64 = row.iter().zip(&transformed).map(|(&p, &x)| x * p).sum();
            acc * sign
        })
        .collect())
}

/// Transpose of [`dlt_seminaive`] without weights:
/// `v_j = Σ_l c_l M_lm P_lm(cos ϑ_j)` for coefficients `c_l`, `l = |m|..L`.
pub fn idlt_seminaive(m: isize, c: &[Complex64], plan: &SphericalPlan) -> Result<Vec<Complex64>> {
    let order = plan.order();
    let am = m.unsigned_abs();
    if am >= order {
        return Err(SglError::OutOfRange(format!("|m| = {am} must be below L = {order}")));
    }
    if c.len() != order - am {
        return Err(SglError::LengthMismatch {
            expected: order - am,
            found: c.len(),
        });
    }
    let sign = order_sign(m);
    let mut acc = vec![Complex64::default(); 2 * order];
    for (l, &coef) in (am..order).zip(c) {
        let scaled = coef * sign;
        for (a, &p) in acc.iter_mut().zip(plan.table.row(l, am)) {
            *a += scaled * p;
        }
    }
    plan.trig(am).inverse_complex(&acc)
}

/// Reusable buffers for the seminaive transforms on one thread.
#[derive(Debug, Clone, Default)]
pub struct SphericalWorkspace {
    spectra: Vec<Complex64>,
    columns: Vec<Complex64>,
    column: Vec<Complex64>,
    transformed: Vec<Complex64>,
    trig: TrigScratch,
    fft: Vec<Complex64>,
}

/// Seminaive forward transform: row DFTs, weighting, then one DLT per order.
pub fn sft_seminaive_forward(samples: &[Complex64], plan: &SphericalPlan) -> Result<SphericalCoefficients> {
    let mut out = SphericalCoefficients::zeros(plan.order());
    sft_seminaive_forward_into(samples, plan, &mut out.values, &mut SphericalWorkspace::default())?;
    Ok(out)
}

/// [`sft_seminaive_forward`] writing the `L²` coefficients into `out`.
pub fn sft_seminaive_forward_into(
    samples: &[Complex64],
    plan: &SphericalPlan,
    out: &mut [Complex64],
    ws: &mut SphericalWorkspace,
) -> Result<()> {
    let order = plan.order();
    check_grid(samples, order)?;
    if out.len() != order * order {
        return Err(SglError::LengthMismatch {
            expected: order * order,
            found: out.len(),
        });
    }
    let side = 2 * order;
    ws.spectra.clear();
    ws.spectra.extend_from_slice(samples);
    plan.azimuth.forward_with(&mut ws.spectra, &mut ws.fft)?;
    // columns[bin * 2L + j] = b_j G_bin(ϑ_j)
    ws.columns.resize(side * side, Complex64::default());
    for (j, (row, &w)) in ws.spectra.chunks(side).zip(&plan.rule.weights).enumerate() {
        for (k, &z) in row.iter().enumerate() {
            ws.columns[k * side + j] = z * w;
        }
    }
    ws.transformed.resize(side, Complex64::default());
    for m in -(order as isize - 1)..order as isize {
        let am = m.unsigned_abs();
        let b = bin(m, side);
        plan.trig(am).forward_complex_into(
            &ws.columns[b * side..(b + 1) * side],
            &mut ws.transformed,
            &mut ws.trig,
        )?;
        let sign = order_sign(m);
        for l in am..order {
            let row = plan.table.row(l, am);
            let acc: Complex64 = row.iter().zip(&ws.transformed).map(|(&p, &x)| x * p).sum();
            out[nu(l, m)] = acc * sign;
        }
    }
    Ok(())
}

/// Seminaive inverse transform: transposed DLT per order, then row synthesis.
pub fn sft_seminaive_inverse(coeffs: &SphericalCoefficients, plan: &SphericalPlan) -> Result<Vec<Complex64>> {
    if coeffs.order != plan.order() {
        return Err(SglError::BandlimitMismatch {
            plan: plan.order(),
            requested: coeffs.order,
        });
    }
    let side = 2 * plan.order();
    let mut grid = vec![Complex64::default(); side * side];
    sft_seminaive_inverse_into(&coeffs.values, plan, &mut grid, &mut SphericalWorkspace::default())?;
    Ok(grid)
}

/// [`sft_seminaive_inverse`] from `L²` coefficients in ν-order into a `2L × 2L` grid.
pub fn sft_seminaive_inverse_into(
    coeffs: &[Complex64],
    plan: &SphericalPlan,
    grid: &mut [Complex64],
    ws: &mut SphericalWorkspace,
) -> Result<()> {
    let order = plan.order();
    if coeffs.len() != order * order {
        return Err(SglError::LengthMismatch {
            expected: order * order,
            found: coeffs.len(),
        });
    }
    check_grid(grid, order)?;
    let side = 2 * order;
    // columns[bin * 2L + j]; the unused Nyquist bin stays zero
    ws.columns.clear();
    ws.columns.resize(side * side, Complex64::default());
    ws.column.resize(side, Complex64::default());
    for m in -(order as isize - 1)..order as isize {
        let am = m.unsigned_abs();
        let sign = order_sign(m);
        ws.column.iter_mut().for_each(|z| *z = Complex64::default());
        for l in am..order {
            let scaled = coeffs[nu(l, m)] * sign;
            for (a, &p) in ws.column.iter_mut().zip(plan.table.row(l, am)) {
                *a += scaled * p;
            }
        }
        let b = bin(m, side);
        plan.trig(am).inverse_complex_into(
            &ws.column,
            &mut ws.columns[b * side..(b + 1) * side],
            &mut ws.trig,
        )?;
    }
    for (j, row) in grid.chunks_mut(side).enumerate() {
        for (k, z) in row.iter_mut().enumerate() {
            *z = ws.columns[k * side + j];
        }
    }
    plan.azimuth.synthesis_with(grid, &mut ws.fft)?;
    Ok(())
}

/// `Y_lm` sampled on the order-`L` grid, `(j, k)` row-major.
pub fn sample_harmonic(l: usize, m: isize, order: usize) -> Result<Vec<Complex64>> {
    let rule = sphere_rule(order)?;
    let mut out = Vec::with_capacity(4 * order * order);
    for &t in &rule.theta {
        for &p in &rule.phi {
            out.push(crate::special::sph_harm(l, m, t, p)?);
        }
    }
    Ok(out)
}

/// `1/sqrt(4π)`, the constant value of `Y_00`.
pub const Y00: f64 = 0.282_094_791_773_878_14;
