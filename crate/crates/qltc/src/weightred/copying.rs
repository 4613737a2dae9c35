//! Stage one of weight reduction: replace each qubit by one copy per
//! X-stabiliser that can touch it, so every copy meets at most one
//! original X-stabiliser plus the repetition chain gluing the copies.

use crate::css::CssCode;
use crate::gf2::{BitMatrix, BitVector};
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyMeta {
    pub n_orig: usize,
    pub n_x_orig: usize,
    pub n_z_orig: usize,
    /// Copies per qubit: the X-side column weight of the input (at least 1).
    pub copies: usize,
}

impl CopyMeta {
    pub fn qubit(&self, q: usize, j: usize) -> usize {
        debug_assert!(j < self.copies);
        q * self.copies + j
    }

    /// Repetition-chain X-stab joining copies j and j+1 of qubit q.
    pub fn chain_stab(&self, q: usize, j: usize) -> usize {
        debug_assert!(j + 1 < self.copies);
        self.n_x_orig + q * (self.copies - 1) + j
    }

    pub fn num_qubits(&self) -> usize {
        self.n_orig * self.copies
    }

    pub fn num_x_stabs(&self) -> usize {
        self.n_x_orig + self.n_orig * (self.copies - 1)
    }
}

/// Expand each qubit into `q_x` copies. Each X-stabiliser lands on a
/// private copy of every qubit in its support (round-robin by stabiliser
/// index), repetition chains tie the copies together, and Z-stabilisers
/// widen onto all copies.
pub fn copy_qubits(code: &CssCode) -> Result<(CssCode, CopyMeta)> {
    code.ensure_valid()?;
    let n = code.num_qubits();
    let copies = code.h_x().max_col_weight().max(1);
    let meta = CopyMeta {
        n_orig: n,
        n_x_orig: code.num_x_stabs(),
        n_z_orig: code.num_z_stabs(),
        copies,
    };
    let nn = meta.num_qubits();

    let mut next_slot = vec![0usize; n];
    let mut x_rows: Vec<BitVector> = Vec::with_capacity(meta.num_x_stabs());
    for s in 0..code.num_x_stabs() {
        let mut row = BitVector::zeros(nn);
        for q in code.h_x().row_support(s) {
            let j = next_slot[q];
            debug_assert!(j < copies);
            next_slot[q] = j + 1;
            row.set(meta.qubit(q, j), true);
        }
        x_rows.push(row);
    }
    for q in 0..n {
        for j in 0..copies - 1 {
            let mut row = BitVector::zeros(nn);
            row.set(meta.qubit(q, j), true);
            row.set(meta.qubit(q, j + 1), true);
            x_rows.push(row);
        }
    }

    let mut z_rows: Vec<BitVector> = Vec::with_capacity(code.num_z_stabs());
    for v in 0..code.num_z_stabs() {
        let mut row = BitVector::zeros(nn);
        for q in code.h_z().row_support(v) {
            for j in 0..copies {
                row.set(meta.qubit(q, j), true);
            }
        }
        z_rows.push(row);
    }

    let copied = CssCode::new(
        BitMatrix::from_rows(nn, &x_rows),
        BitMatrix::from_rows(nn, &z_rows),
    )?;
    copied.ensure_valid()?;
    Ok((copied, meta))
}
