//! Stage three of weight reduction: thicken (balance against a repetition
//! code) and then keep each original Z-stabiliser at a single height.

use crate::balance::{distance_balance, ClassicalCode};
use crate::css::CssCode;
use crate::gf2::{BitMatrix, BitVector};
use crate::zoo::repetition_pcm;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThickenMeta {
    pub n_orig: usize,
    pub n_x_orig: usize,
    pub n_z_orig: usize,
    pub l: usize,
}

impl ThickenMeta {
    /// Copy m of original qubit q.
    pub fn qubit_at(&self, q: usize, m: usize) -> usize {
        debug_assert!(q < self.n_orig && m < self.l);
        q * self.l + m
    }

    /// Height-j cell of original X-stabiliser s (second qubit block).
    pub fn x_cell(&self, s: usize, j: usize) -> usize {
        debug_assert!(s < self.n_x_orig && j < self.l - 1);
        self.n_orig * self.l + s * (self.l - 1) + j
    }

    /// Copy m of original X-stabiliser s.
    pub fn x_row_at(&self, s: usize, m: usize) -> usize {
        debug_assert!(s < self.n_x_orig && m < self.l);
        s * self.l + m
    }

    /// Copy m of original Z-stabiliser v.
    pub fn z_row_at(&self, v: usize, m: usize) -> usize {
        debug_assert!(v < self.n_z_orig && m < self.l);
        v * self.l + m
    }

    /// Repetition row j of original qubit q (second Z block).
    pub fn z_chain_row(&self, q: usize, j: usize) -> usize {
        debug_assert!(q < self.n_orig && j < self.l - 1);
        self.n_z_orig * self.l + q * (self.l - 1) + j
    }

    pub fn num_qubits(&self) -> usize {
        self.n_orig * self.l + self.n_x_orig * (self.l - 1)
    }

    pub fn num_z_stabs(&self) -> usize {
        self.n_z_orig * self.l + self.n_orig * (self.l - 1)
    }

    pub fn num_x_stabs(&self) -> usize {
        self.n_x_orig * self.l
    }
}

/// Balance against the length-l repetition code.
pub fn thicken(code: &CssCode, l: usize) -> Result<(CssCode, ThickenMeta)> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!(
            "thickening needs l >= 2, got {l}"
        )));
    }
    let rep = ClassicalCode::new(repetition_pcm(l)?);
    let (thickened, balance_meta) = distance_balance(code, &rep)?;
    let meta = ThickenMeta {
        n_orig: code.num_qubits(),
        n_x_orig: code.num_x_stabs(),
        n_z_orig: code.num_z_stabs(),
        l,
    };
    debug_assert_eq!(balance_meta.num_qubits(), meta.num_qubits());
    Ok((thickened, meta))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum HeightStrategy {
    /// Assign each stabiliser the height that keeps the largest per-copy
    /// Z-degree as small as possible, scanning stabilisers in index order.
    Greedy,
    Random(u64),
    Explicit(Vec<usize>),
}

impl Default for HeightStrategy {
    fn default() -> Self {
        HeightStrategy::Greedy
    }
}

/// Drop all but one height of every widened Z-stabiliser. The kept rows
/// plus the per-qubit repetition rows span the same row space, so the code
/// is unchanged; only the check count and Z-degrees drop.
pub fn choose_heights(
    thickened: &CssCode,
    meta: &ThickenMeta,
    strategy: &HeightStrategy,
) -> Result<(CssCode, Vec<usize>)> {
    if thickened.num_qubits() != meta.num_qubits()
        || thickened.num_z_stabs() != meta.num_z_stabs()
    {
        return Err(Error::DimensionMismatch(
            "thickened code does not match its layout metadata".into(),
        ));
    }
    let heights = match strategy {
        HeightStrategy::Explicit(h) => {
            if h.len() != meta.n_z_orig {
                return Err(Error::InvalidParameter(format!(
                    "need {} heights, got {}",
                    meta.n_z_orig,
                    h.len()
                )));
            }
            if let Some(bad) = h.iter().find(|&&m| m >= meta.l) {
                return Err(Error::InvalidParameter(format!(
                    "height {bad} out of range for l = {}",
                    meta.l
                )));
            }
            h.clone()
        }
        HeightStrategy::Random(seed) => {
            let mut rng = ChaCha12Rng::seed_from_u64(*seed);
            (0..meta.n_z_orig)
                .map(|_| rng.random_range(0..meta.l))
                .collect()
        }
        HeightStrategy::Greedy => greedy_heights(thickened, meta),
    };

    let mut z_rows: Vec<BitVector> = Vec::with_capacity(meta.n_z_orig + meta.n_orig * (meta.l - 1));
    for (v, &m) in heights.iter().enumerate() {
        z_rows.push(thickened.h_z().row(meta.z_row_at(v, m)));
    }
    for q in 0..meta.n_orig {
        for j in 0..meta.l - 1 {
            z_rows.push(thickened.h_z().row(meta.z_chain_row(q, j)));
        }
    }
    let reduced = CssCode::new(
        thickened.h_x().clone(),
        BitMatrix::from_rows(thickened.num_qubits(), &z_rows),
    )?;
    reduced.ensure_valid()?;
    Ok((reduced, heights))
}

/// Greedy choice: Z-degree of copy (q, m) starts at the repetition-row
/// load; each stabiliser then takes the height whose worst loaded copy in
/// its support is lightest, breaking ties by total load then by height.
fn greedy_heights(thickened: &CssCode, meta: &ThickenMeta) -> Vec<usize> {
    let mut degree = vec![0usize; meta.n_orig * meta.l];
    for q in 0..meta.n_orig {
        for j in 0..meta.l - 1 {
            for idx in thickened.h_z().row_support(meta.z_chain_row(q, j)) {
                if idx < meta.n_orig * meta.l {
                    degree[idx] += 1;
                }
            }
        }
    }
    let mut heights = Vec::with_capacity(meta.n_z_orig);
    for v in 0..meta.n_z_orig {
        let mut best: Option<(usize, usize, usize)> = None;
        for m in 0..meta.l {
            let support = thickened.h_z().row_support(meta.z_row_at(v, m));
            let worst = support.iter().map(|&i| degree[i] + 1).max().unwrap_or(0);
            let total: usize = support.iter().map(|&i| degree[i] + 1).sum();
            let key = (worst, total, m);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (_, _, m) = best.expect("l >= 2 so some height exists");
        for idx in thickened.h_z().row_support(meta.z_row_at(v, m)) {
            degree[idx] += 1;
        }
        heights.push(m);
    }
    heights
}
