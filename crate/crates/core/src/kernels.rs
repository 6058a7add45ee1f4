//! Orthogonal cosine/sine transforms on the shifted grid and the azimuthal DFT.
//!
//! The cosine transform is the orthonormal DCT-II
//! `[C_N u]_k = c_k Σ_j u_j cos(k ϑ_j)`, `ϑ_j = (2j+1)π/2N`, with
//! `c_0 = sqrt(1/N)` and `c_k = sqrt(2/N)` otherwise. The sine transform is
//! the orthonormal DST-II `[S_N u]_{k−1} = s_k Σ_j u_j sin(k ϑ_j)` for
//! `k = 1..=N`, with `s_N = sqrt(1/N)` and `s_k = sqrt(2/N)` otherwise. Both
//! matrices are orthogonal, so the inverses are the transposes.
//!
//! Fast paths need a power-of-two length; other lengths use the dense
//! matrices with identical results up to rounding.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Result, SglError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrigMode {
    Cosine,
    Sine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelVariant {
    Naive,
    Fast,
}

fn cosine_scale(k: usize, n: usize) -> f64 {
    if k == 0 {
        (1.0 / n as f64).sqrt()
    } else {
        (2.0 / n as f64).sqrt()
    }
}

/// Entry `(k, j)` of the dense transform matrix.
pub fn matrix_entry(mode: TrigMode, n: usize, k: usize, j: usize) -> f64 {
    let angle = (2 * j + 1) as f64 * PI / (2 * n) as f64;
    match mode {
        TrigMode::Cosine => cosine_scale(k, n) * (k as f64 * angle).cos(),
        TrigMode::Sine => {
            let freq = k + 1;
            let scale = if freq == n {
                (1.0 / n as f64).sqrt()
            } else {
                (2.0 / n as f64).sqrt()
            };
            scale * (freq as f64 * angle).sin()
        }
    }
}

/// Orthogonal cosine or sine transform of a fixed length.
#[derive(Clone)]
pub struct DctPlan {
    len: usize,
    mode: TrigMode,
    variant: KernelVariant,
    fft: Option<Arc<dyn Fft<f64>>>,
    ifft: Option<Arc<dyn Fft<f64>>>,
    /// `c_k e^{−iπk/2N}`
    post: Vec<Complex64>,
    /// `e^{iπk/2N} σ_k / N` with `σ_0 = sqrt(N)`, `σ_k = sqrt(N/2)`
    pre: Vec<Complex64>,
}

impl std::fmt::Debug for DctPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DctPlan")
            .field("len", &self.len)
            .field("mode", &self.mode)
            .field("variant", &self.variant)
            .finish()
    }
}

impl DctPlan {
    /// Fast for power-of-two lengths, dense otherwise.
    pub fn new(len: usize, mode: TrigMode) -> Self {
        let variant = if len.is_power_of_two() && len > 1 {
            KernelVariant::Fast
        } else {
            KernelVariant::Naive
        };
        Self::with_variant(len, mode, variant).expect("variant chosen to match length")
    }

    pub fn with_variant(len: usize, mode: TrigMode, variant: KernelVariant) -> Result<Self> {
        if len == 0 {
            return Err(SglError::Domain("transform length must be positive".into()));
        }
        let mut plan = DctPlan {
            len,
            mode,
            variant,
            fft: None,
            ifft: None,
            post: Vec::new(),
            pre: Vec::new(),
        };
        if variant == KernelVariant::Fast {
            if !len.is_power_of_two() || len < 2 {
                return Err(SglError::Domain(format!(
                    "fast cosine/sine transform needs a power-of-two length >= 2, got {len}"
                )));
            }
            let mut planner = FftPlanner::new();
            plan.fft = Some(planner.plan_fft_forward(len));
            plan.ifft = Some(planner.plan_fft_inverse(len));
            let nf = len as f64;
            plan.post = (0..len)
                .map(|k| Complex64::from_polar(cosine_scale(k, len), -PI * k as f64 / (2.0 * nf)))
                .collect();
            plan.pre = (0..len)
                .map(|k| {
                    let sigma = if k == 0 { nf.sqrt() } else { (nf / 2.0).sqrt() };
                    Complex64::from_polar(sigma / nf, PI * k as f64 / (2.0 * nf))
                })
                .collect();
        }
        Ok(plan)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mode(&self) -> TrigMode {
        self.mode
    }

    pub fn variant(&self) -> KernelVariant {
        self.variant
    }

    fn check(&self, found: usize) -> Result<()> {
        if found != self.len {
            return Err(SglError::LengthMismatch {
                expected: self.len,
                found,
            });
        }
        Ok(())
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        let data: Vec<Complex64> = input.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Ok(self.forward_complex(&data)?.into_iter().map(|z| z.re).collect())
    }

    pub fn inverse(&self, input: &[f64]) -> Result<Vec<f64>> {
        let data: Vec<Complex64> = input.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Ok(self.inverse_complex(&data)?.into_iter().map(|z| z.re).collect())
    }

    /// Applies the real transform to real and imaginary parts.
    pub fn forward_complex(&self, input: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::default(); self.len];
        self.forward_complex_into(input, &mut out, &mut TrigScratch::default())?;
        Ok(out)
    }

    /// Applies the transpose, which is the inverse.
    pub fn inverse_complex(&self, input: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::default(); self.len];
        self.inverse_complex_into(input, &mut out, &mut TrigScratch::default())?;
        Ok(out)
    }

    /// [`DctPlan::forward_complex`] into `out`, reusing `scratch`.
    pub fn forward_complex_into(
        &self,
        input: &[Complex64],
        out: &mut [Complex64],
        scratch: &mut TrigScratch,
    ) -> Result<()> {
        self.check(input.len())?;
        self.check(out.len())?;
        match self.variant {
            KernelVariant::Naive => self.dense(input, out, false),
            KernelVariant::Fast => match self.mode {
                TrigMode::Cosine => self.fast_cosine(input, out, &mut scratch.work, &mut scratch.fft),
                TrigMode::Sine => {
                    scratch.staged.clear();
                    scratch.staged.extend(
                        input
                            .iter()
                            .enumerate()
                            .map(|(j, &x)| if j % 2 == 0 { x } else { -x }),
                    );
                    self.fast_cosine(&scratch.staged, out, &mut scratch.work, &mut scratch.fft);
                    out.reverse();
                }
            },
        }
        Ok(())
    }

    /// [`DctPlan::inverse_complex`] into `out`, reusing `scratch`.
    pub fn inverse_complex_into(
        &self,
        input: &[Complex64],
        out: &mut [Complex64],
        scratch: &mut TrigScratch,
    ) -> Result<()> {
        self.check(input.len())?;
        self.check(out.len())?;
        match self.variant {
            KernelVariant::Naive => self.dense(input, out, true),
            KernelVariant::Fast => match self.mode {
                TrigMode::Cosine => self.fast_cosine_transpose(input, out, &mut scratch.work, &mut scratch.fft),
                TrigMode::Sine => {
                    scratch.staged.clear();
                    scratch.staged.extend(input.iter().rev().copied());
                    self.fast_cosine_transpose(&scratch.staged, out, &mut scratch.work, &mut scratch.fft);
                    for o in out.iter_mut().skip(1).step_by(2) {
                        *o = -*o;
                    }
                }
            },
        }
        Ok(())
    }

    fn dense(&self, input: &[Complex64], out: &mut [Complex64], transpose: bool) {
        let n = self.len;
        for (row, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::default();
            for (col, &x) in input.iter().enumerate() {
                let (k, j) = if transpose { (col, row) } else { (row, col) };
                acc += x * matrix_entry(self.mode, n, k, j);
            }
            *o = acc;
        }
    }

    /// Orthonormal DCT-II through one complex FFT of length N. Real and
    /// imaginary parts are two real sequences packed into one FFT.
    fn fast_cosine(&self, input: &[Complex64], out: &mut [Complex64], v: &mut Vec<Complex64>, fft_scratch: &mut Vec<Complex64>) {
        let n = self.len;
        let half = n / 2;
        v.resize(n, Complex64::default());
        for j in 0..half {
            v[j] = input[2 * j];
            v[n - 1 - j] = input[2 * j + 1];
        }
        let fft = self.fft.as_ref().expect("fast plan");
        fft_scratch.resize(fft.get_inplace_scratch_len(), Complex64::default());
        fft.process_with_scratch(v, fft_scratch);
        for k in 0..n {
            let a = v[k];
            let b = v[if k == 0 { 0 } else { n - k }];
            // real and imaginary sequences' spectra, each halved
            let (p_re, p_im) = (a.re + b.re, a.im - b.im);
            let (q_re, q_im) = (a.im + b.im, b.re - a.re);
            let t = self.post[k];
            out[k] = Complex64::new(
                0.5 * (t.re * p_re - t.im * p_im),
                0.5 * (t.re * q_re - t.im * q_im),
            );
        }
    }

    /// Transpose of the orthonormal DCT-II (a scaled DCT-III).
    fn fast_cosine_transpose(
        &self,
        input: &[Complex64],
        out: &mut [Complex64],
        v: &mut Vec<Complex64>,
        fft_scratch: &mut Vec<Complex64>,
    ) {
        let n = self.len;
        v.resize(n, Complex64::default());
        for k in 0..n {
            let y = input[k];
            let mirror = if k == 0 { Complex64::default() } else { input[n - k] };
            // the real and imaginary sequences each yield a real result, so they share one FFT
            let re_term = Complex64::new(y.re, -mirror.re);
            let im_term = Complex64::new(y.im, -mirror.im);
            v[k] = self.pre[k] * Complex64::new(re_term.re - im_term.im, re_term.im + im_term.re);
        }
        let ifft = self.ifft.as_ref().expect("fast plan");
        fft_scratch.resize(ifft.get_inplace_scratch_len(), Complex64::default());
        ifft.process_with_scratch(v, fft_scratch);
        let half = n / 2;
        for j in 0..half {
            out[2 * j] = v[j];
            out[2 * j + 1] = v[n - 1 - j];
        }
    }
}

/// Reusable buffers for repeated [`DctPlan`] calls on one thread.
#[derive(Debug, Clone, Default)]
pub struct TrigScratch {
    staged: Vec<Complex64>,
    work: Vec<Complex64>,
    fft: Vec<Complex64>,
}

/// `C_N u`.
pub fn dct_forward(input: &[f64]) -> Result<Vec<f64>> {
    DctPlan::new(input.len().max(1), TrigMode::Cosine).forward(input)
}

/// `C_Nᵀ v`.
pub fn dct_inverse(input: &[f64]) -> Result<Vec<f64>> {
    DctPlan::new(input.len().max(1), TrigMode::Cosine).inverse(input)
}

/// `S_N u`.
pub fn dst_forward(input: &[f64]) -> Result<Vec<f64>> {
    DctPlan::new(input.len().max(1), TrigMode::Sine).forward(input)
}

/// `S_Nᵀ v`.
pub fn dst_inverse(input: &[f64]) -> Result<Vec<f64>> {
    DctPlan::new(input.len().max(1), TrigMode::Sine).inverse(input)
}

/// Length-`2L` DFT along the azimuth, `G_m = Σ_k g_k e^{−imφ_k}`, `φ_k = 2πk/2L`.
#[derive(Clone)]
pub struct AzimuthPlan {
    len: usize,
    fft: Option<Arc<dyn Fft<f64>>>,
    ifft: Option<Arc<dyn Fft<f64>>>,
}

impl std::fmt::Debug for AzimuthPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AzimuthPlan")
            .field("len", &self.len)
            .field("fast", &self.fft.is_some())
            .finish()
    }
}

impl AzimuthPlan {
    pub fn new(len: usize) -> Self {
        let variant = if len.is_power_of_two() {
            KernelVariant::Fast
        } else {
            KernelVariant::Naive
        };
        Self::with_variant(len, variant).expect("variant chosen to match length")
    }

    pub fn with_variant(len: usize, variant: KernelVariant) -> Result<Self> {
        if len == 0 {
            return Err(SglError::Domain("DFT length must be positive".into()));
        }
        let (fft, ifft) = match variant {
            KernelVariant::Naive => (None, None),
            KernelVariant::Fast => {
                if !len.is_power_of_two() {
                    return Err(SglError::Domain(format!(
                        "fast DFT needs a power-of-two length, got {len}"
                    )));
                }
                let mut planner = FftPlanner::new();
                (
                    Some(planner.plan_fft_forward(len)),
                    Some(planner.plan_fft_inverse(len)),
                )
            }
        };
        Ok(AzimuthPlan { len, fft, ifft })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn dense(&self, data: &mut [Complex64], sign: f64) {
        let n = self.len;
        let input = data.to_vec();
        for (m, o) in data.iter_mut().enumerate() {
            let mut acc = Complex64::default();
            for (k, &x) in input.iter().enumerate() {
                let angle = sign * 2.0 * PI * ((m * k) % n) as f64 / n as f64;
                acc += x * Complex64::from_polar(1.0, angle);
            }
            *o = acc;
        }
    }

    fn run(&self, data: &mut [Complex64], forward: bool) -> Result<()> {
        self.run_with(data, forward, &mut Vec::new())
    }

    /// Transforms every consecutive row of length `2L` in `data`.
    fn run_with(&self, data: &mut [Complex64], forward: bool, scratch: &mut Vec<Complex64>) -> Result<()> {
        if data.is_empty() || !data.len().is_multiple_of(self.len) {
            return Err(SglError::LengthMismatch {
                expected: self.len,
                found: data.len(),
            });
        }
        let plan = if forward { &self.fft } else { &self.ifft };
        match plan {
            Some(fft) => {
                scratch.resize(fft.get_inplace_scratch_len(), Complex64::default());
                fft.process_with_scratch(data, scratch);
            }
            None => {
                for row in data.chunks_mut(self.len) {
                    self.dense(row, if forward { -1.0 } else { 1.0 });
                }
            }
        }
        Ok(())
    }

    /// In place: `g ↦ G`, bin `m` at index `m mod 2L`.
    pub fn forward(&self, data: &mut [Complex64]) -> Result<()> {
        self.run(data, true)
    }

    /// In place, unnormalized: `G ↦ Σ_m G_m e^{imφ_k}`.
    pub fn synthesis(&self, data: &mut [Complex64]) -> Result<()> {
        self.run(data, false)
    }

    /// [`AzimuthPlan::forward`] on each row of a row-major batch, reusing `scratch`.
    pub fn forward_with(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) -> Result<()> {
        self.run_with(data, true, scratch)
    }

    /// [`AzimuthPlan::synthesis`] on each row of a row-major batch, reusing `scratch`.
    pub fn synthesis_with(&self, data: &mut [Complex64], scratch: &mut Vec<Complex64>) -> Result<()> {
        self.run_with(data, false, scratch)
    }

    /// In place: exact inverse of [`AzimuthPlan::forward`].
    pub fn inverse(&self, data: &mut [Complex64]) -> Result<()> {
        self.run(data, false)?;
        let scale = 1.0 / self.len as f64;
        data.iter_mut().for_each(|z| *z *= scale);
        Ok(())
    }
}

/// Out-of-place azimuthal DFT.
pub fn azimuth_dft(row: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out = row.to_vec();
    AzimuthPlan::new(row.len().max(1)).forward(&mut out)?;
    Ok(out)
}

/// Out-of-place inverse azimuthal DFT.
pub fn azimuth_idft(bins: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out = bins.to_vec();
    AzimuthPlan::new(bins.len().max(1)).inverse(&mut out)?;
    Ok(out)
}
