//! Linear index maps between grid/coefficient tuples and flat vector offsets.
//!
//! Sample grids are stored in ψ-order, `ψ = 4B²i + 2Bj + k`, where `i` runs
//! over radii, `j` over polar angles and `k` over azimuths. Coefficient vectors
//! are stored in ω-order, `ω = n(n−1)(2n−1)/6 + l(l+1) + m`, which is the
//! lexicographic order of `(n, l, m)` with `|m| ≤ l < n`. Spherical harmonic
//! coefficients use `ν = l(l+1) + m`.

use crate::error::{Result, SglError};

/// Flat angular index `μ = 2Bj + k`.
#[inline]
pub fn mu(j: usize, k: usize, b: usize) -> usize {
    2 * b * j + k
}

/// Flat sample index `ψ = 4B²i + 2Bj + k`.
#[inline]
pub fn psi(i: usize, j: usize, k: usize, b: usize) -> usize {
    4 * b * b * i + 2 * b * j + k
}

/// Flat spherical harmonic index `ν = l(l+1) + m`.
#[inline]
pub fn nu(l: usize, m: isize) -> usize {
    ((l * (l + 1)) as isize + m) as usize
}

/// Offset of the first coefficient of degree `n` in ω-order.
#[inline]
pub fn degree_offset(n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    n * (n - 1) * (2 * n - 1) / 6
}

/// Flat SGL coefficient index `ω = n(n−1)(2n−1)/6 + l(l+1) + m`.
#[inline]
pub fn omega(n: usize, l: usize, m: isize) -> usize {
    degree_offset(n) + nu(l, m)
}

/// Number of samples, `Ψ = 8B³`.
#[inline]
pub fn sample_count(b: usize) -> usize {
    8 * b * b * b
}

/// Number of SGL coefficients up to bandlimit `B`, `Ω = B(B+1)(2B+1)/6`.
#[inline]
pub fn coefficient_count(b: usize) -> usize {
    b * (b + 1) * (2 * b + 1) / 6
}

/// Checked `μ`.
pub fn mu_checked(j: usize, k: usize, b: usize) -> Result<usize> {
    if j >= 2 * b || k >= 2 * b {
        return Err(SglError::OutOfRange(format!(
            "(j, k) = ({j}, {k}) outside 0..{} for B = {b}",
            2 * b
        )));
    }
    Ok(mu(j, k, b))
}

/// Checked `ψ`.
pub fn psi_checked(i: usize, j: usize, k: usize, b: usize) -> Result<usize> {
    if i >= 2 * b || j >= 2 * b || k >= 2 * b {
        return Err(SglError::OutOfRange(format!(
            "(i, j, k) = ({i}, {j}, {k}) outside 0..{} for B = {b}",
            2 * b
        )));
    }
    Ok(psi(i, j, k, b))
}

/// Checked `ν`.
pub fn nu_checked(l: usize, m: isize) -> Result<usize> {
    if m.unsigned_abs() > l {
        return Err(SglError::OutOfRange(format!("|m| > l for (l, m) = ({l}, {m})")));
    }
    Ok(nu(l, m))
}

/// Checked `ω`.
pub fn omega_checked(n: usize, l: usize, m: isize) -> Result<usize> {
    if n == 0 || l >= n || m.unsigned_abs() > l {
        return Err(SglError::OutOfRange(format!(
            "(n, l, m) = ({n}, {l}, {m}) violates |m| <= l < n"
        )));
    }
    Ok(omega(n, l, m))
}

/// Inverse of [`mu`].
pub fn mu_inv(index: usize, b: usize) -> Result<(usize, usize)> {
    let side = 2 * b;
    if index >= side * side {
        return Err(SglError::OutOfRange(format!(
            "μ = {index} outside 0..{}",
            side * side
        )));
    }
    Ok((index / side, index % side))
}

/// Inverse of [`psi`].
pub fn psi_inv(index: usize, b: usize) -> Result<(usize, usize, usize)> {
    if index >= sample_count(b) {
        return Err(SglError::OutOfRange(format!(
            "ψ = {index} outside 0..{}",
            sample_count(b)
        )));
    }
    let side = 2 * b;
    let shell = side * side;
    Ok((index / shell, (index % shell) / side, index % side))
}

/// Inverse of [`nu`]. Every `ν ≥ 0` is valid.
pub fn nu_inv(index: usize) -> (usize, isize) {
    let mut l = (index as f64).sqrt() as usize;
    // guard against rounding in the square root
    while l * l > index {
        l -= 1;
    }
    while (l + 1) * (l + 1) <= index {
        l += 1;
    }
    (l, index as isize - (l * (l + 1)) as isize)
}

/// Inverse of [`omega`] for coefficient vectors of bandlimit `B`.
pub fn omega_inv(index: usize, b: usize) -> Result<(usize, usize, isize)> {
    if index >= coefficient_count(b) {
        return Err(SglError::OutOfRange(format!(
            "ω = {index} outside 0..{}",
            coefficient_count(b)
        )));
    }
    let mut n = 1;
    while degree_offset(n + 1) <= index {
        n += 1;
    }
    let (l, m) = nu_inv(index - degree_offset(n));
    Ok((n, l, m))
}

/// All `(n, l, m)` with `|m| ≤ l < n ≤ B`, in ω-order.
pub fn sgl_triples(b: usize) -> impl Iterator<Item = (usize, usize, isize)> {
    (1..=b).flat_map(|n| {
        (0..n).flat_map(move |l| (-(l as isize)..=l as isize).map(move |m| (n, l, m)))
    })
}

/// All `(l, m)` with `|m| ≤ l < L`, in ν-order.
pub fn harmonic_pairs(order: usize) -> impl Iterator<Item = (usize, isize)> {
    (0..order).flat_map(|l| (-(l as isize)..=l as isize).map(move |m| (l, m)))
}

/// Sizes of the canonical layouts for a bandlimit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub bandlimit: usize,
}

impl Layout {
    pub fn new(bandlimit: usize) -> Result<Self> {
        if bandlimit == 0 {
            return Err(SglError::InvalidBandlimit(bandlimit));
        }
        Ok(Layout { bandlimit })
    }

    /// Nodes per axis, `2B`.
    pub fn side(&self) -> usize {
        2 * self.bandlimit
    }

    pub fn psi_count(&self) -> usize {
        sample_count(self.bandlimit)
    }

    pub fn omega_count(&self) -> usize {
        coefficient_count(self.bandlimit)
    }

    /// Spherical harmonics per shell, `B²`.
    pub fn nu_count(&self) -> usize {
        self.bandlimit * self.bandlimit
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_examples() {
        assert_eq!(omega(1, 0, 0), 0);
        assert_eq!(omega(2, 1, -1), 2);
        assert_eq!(omega(2, 1, 1), 4);
        assert_eq!(coefficient_count(2), 5);
        assert_eq!(omega_inv(0, 1).unwrap(), (1, 0, 0));
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(1, 1), 3);
        assert_eq!(nu_inv(3), (1, 1));
        assert_eq!(nu(2, 1), 7);
        assert_eq!(nu_inv(0), (0, 0));
    }

    #[test]
    fn closed_form_counts() {
        for b in 1..=8 {
            assert_eq!(sample_count(b), 8 * b * b * b);
            assert_eq!(coefficient_count(b), sgl_triples(b).count());
            assert_eq!(harmonic_pairs(b).count(), b * b);
        }
    }

    #[test]
    fn exhaustive_bijections() {
        for b in 1..=4 {
            let side = 2 * b;
            let mut hit = vec![0u32; sample_count(b)];
            for i in 0..side {
                for j in 0..side {
                    for k in 0..side {
                        let p = psi_checked(i, j, k, b).unwrap();
                        hit[p] += 1;
                        assert_eq!(psi_inv(p, b).unwrap(), (i, j, k));
                    }
                }
            }
            assert!(hit.iter().all(|&c| c == 1));

            let mut hit = vec![0u32; side * side];
            for j in 0..side {
                for k in 0..side {
                    let p = mu_checked(j, k, b).unwrap();
                    hit[p] += 1;
                    assert_eq!(mu_inv(p, b).unwrap(), (j, k));
                }
            }
            assert!(hit.iter().all(|&c| c == 1));

            let mut hit = vec![0u32; coefficient_count(b)];
            for (n, l, m) in sgl_triples(b) {
                let w = omega_checked(n, l, m).unwrap();
                hit[w] += 1;
                assert_eq!(omega_inv(w, b).unwrap(), (n, l, m));
            }
            assert!(hit.iter().all(|&c| c == 1));

            let mut hit = vec![0u32; b * b];
            for (l, m) in harmonic_pairs(b) {
                let v = nu_checked(l, m).unwrap();
                hit[v] += 1;
                assert_eq!(nu_inv(v), (l, m));
            }
            assert!(hit.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn omega_is_monotone_in_lexicographic_order() {
        let idx: Vec<usize> = sgl_triples(6).map(|(n, l, m)| omega(n, l, m)).collect();
        assert!(idx.windows(2).all(|w| w[1] == w[0] + 1));
    }

    #[test]
    fn range_violations() {
        assert!(omega_checked(2, 2, 0).is_err());
        assert!(omega_checked(3, 1, 2).is_err());
        assert!(omega_checked(0, 0, 0).is_err());
        assert!(psi_checked(4, 0, 0, 2).is_err());
        assert!(mu_checked(0, 4, 2).is_err());
        assert!(nu_checked(1, -2).is_err());
        assert!(omega_inv(5, 2).is_err());
        assert!(psi_inv(64, 2).is_err());
        assert!(Layout::new(0).is_err());
    }
}
