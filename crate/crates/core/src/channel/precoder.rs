use num_complex::Complex64;

use super::CMatrix;
use crate::error::{precondition, Error, Result};

/// Which linear construction produced a [`PrecoderSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecoderKind {
    ZeroForcing,
    BlockDiagonal,
}

/// Transmit beamformers: one unit-norm column per stream for zero-forcing,
/// one orthonormal `M × (M − (K−1)N)` basis per user for block
/// diagonalization.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    pub blocks: Vec<CMatrix>,
    pub kind: PrecoderKind,
}

impl PrecoderSet {
    /// All beamformer columns side by side.
    pub fn stacked(&self) -> CMatrix {
        let rows = self.blocks.first().map_or(0, |b| b.nrows());
        let cols: usize = self.blocks.iter().map(|b| b.ncols()).sum();
        let mut out = CMatrix::zeros(rows, cols);
        let mut at = 0;
        for b in &self.blocks {
            out.columns_mut(at, b.ncols()).copy_from(b);
            at += b.ncols();
        }
        out
    }
}

/// Column-normalized pseudo-inverse `Hᴴ(HHᴴ)⁻¹` of a stack of row channels.
/// Column `j` is orthogonal to every row except row `j`.
pub fn zf_precoder(stacked: &CMatrix) -> Result<PrecoderSet> {
    let (rows, m) = stacked.shape();
    if rows == 0 || rows > m {
        return Err(precondition(format!("zero-forcing needs 1 ≤ rows ≤ M, got {rows} rows for M = {m}")));
    }
    let h_adj = stacked.adjoint();
    let gram_inv =
        (stacked * &h_adj).try_inverse().ok_or_else(|| Error::Numerical("rank-deficient channel stack".into()))?;
    let mut w = h_adj * gram_inv;
    for mut col in w.column_iter_mut() {
        let norm = col.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Numerical("degenerate zero-forcing column".into()));
        }
        col /= Complex64::from(norm);
    }
    let blocks = w.column_iter().map(|c| CMatrix::from_iterator(c.nrows(), 1, c.iter().copied())).collect();
    Ok(PrecoderSet { blocks, kind: PrecoderKind::ZeroForcing })
}

/// Block-diagonalization precoders with the per-user effective channels.
#[derive(Debug, Clone, PartialEq)]
pub struct BdPrecoder {
    pub precoders: PrecoderSet,
    /// `G_k = H_k W_k`, each `N × (M − (K−1)N)`.
    pub effective: Vec<CMatrix>,
    /// Largest squared singular value of each `G_k`.
    pub mu2_max: Vec<f64>,
    /// `‖G_k‖²_F`.
    pub frobenius: Vec<f64>,
}

/// Orthonormal null-space bases of the other users' stacked channels.
pub fn bd_precoder(channels: &[CMatrix]) -> Result<BdPrecoder> {
    let k = channels.len();
    let (n, m) = channels.first().map(|h| h.shape()).ok_or_else(|| precondition("no channels"))?;
    if channels.iter().any(|h| h.shape() != (n, m)) {
        return Err(precondition("all channels must share one N × M shape"));
    }
    if m < k * n {
        return Err(precondition(format!("block diagonalization needs M ≥ KN, got M = {m}, KN = {}", k * n)));
    }
    let others_rank = (k - 1) * n;
    let mut blocks = Vec::with_capacity(k);
    for j in 0..k {
        if others_rank == 0 {
            blocks.push(CMatrix::identity(m, m));
            continue;
        }
        // Zero padding to a square stack keeps every right singular vector.
        let mut padded = CMatrix::zeros(m, m);
        let mut row = 0;
        for (i, h) in channels.iter().enumerate() {
            if i != j {
                padded.rows_mut(row, n).copy_from(h);
                row += n;
            }
        }
        let svd = padded.svd(false, true);
        let s = &svd.singular_values;
        if !(s[others_rank - 1] > 1e-10 * s[0]) {
            return Err(Error::Numerical("rank-deficient interference stack".into()));
        }
        let v_t = svd.v_t.expect("requested V");
        blocks.push(v_t.rows(others_rank, m - others_rank).adjoint());
    }
    let effective: Vec<CMatrix> = channels.iter().zip(&blocks).map(|(h, w)| h * w).collect();
    let mu2_max = effective.iter().map(|g| g.clone().singular_values().max().powi(2)).collect();
    let frobenius = effective.iter().map(|g| g.norm_squared()).collect();
    Ok(BdPrecoder {
        precoders: PrecoderSet { blocks, kind: PrecoderKind::BlockDiagonal },
        effective,
        mu2_max,
        frobenius,
    })
}
