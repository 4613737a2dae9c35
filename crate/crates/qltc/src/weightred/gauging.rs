//! Stage two of weight reduction: split every X-stabiliser of weight
//! above three into a chain of weight-3 checks joined by ancilla qubits.

use crate::css::CssCode;
use crate::gf2::{BitMatrix, BitVector};
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugedStab {
    pub stab: usize,
    /// Original support in ascending qubit order.
    pub support: Vec<usize>,
    /// First ancilla qubit of this stab's chain.
    pub ancilla_start: usize,
    /// First replacement row in the new X matrix.
    pub row_start: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeMeta {
    pub n_orig: usize,
    pub n_x_orig: usize,
    pub gauged: Vec<GaugedStab>,
    pub num_qubits: usize,
    pub num_x_stabs: usize,
}

/// Replace each X-stabiliser on q_1..q_w (w >= 4) by the chain
/// {q_1,q_2,e_1}, {e_{j-1},q_{j+1},e_j}, .., {e_{w-2},q_w} over w-2 fresh
/// ancillas. Every Z-stabiliser gains the prefix parities of its overlap
/// with the chain, which keeps all commutators zero.
pub fn gauge_x_stabs(code: &CssCode) -> Result<(CssCode, GaugeMeta)> {
    code.ensure_valid()?;
    let n = code.num_qubits();

    let mut gauged = Vec::new();
    let mut num_qubits = n;
    let mut num_x_stabs = 0;
    for s in 0..code.num_x_stabs() {
        let support = code.h_x().row_support(s);
        if support.len() >= 4 {
            gauged.push(GaugedStab {
                stab: s,
                ancilla_start: num_qubits,
                row_start: num_x_stabs,
                support: support.clone(),
            });
            num_qubits += support.len() - 2;
            num_x_stabs += support.len() - 1;
        } else {
            num_x_stabs += 1;
        }
    }
    let meta = GaugeMeta {
        n_orig: n,
        n_x_orig: code.num_x_stabs(),
        gauged,
        num_qubits,
        num_x_stabs,
    };

    let mut x_rows: Vec<BitVector> = Vec::with_capacity(num_x_stabs);
    let mut gauged_iter = meta.gauged.iter().peekable();
    for s in 0..code.num_x_stabs() {
        match gauged_iter.peek() {
            Some(g) if g.stab == s => {
                let g = gauged_iter.next().unwrap();
                let w = g.support.len();
                let e = |j: usize| g.ancilla_start + j - 1;
                for r in 0..w - 1 {
                    let mut row = BitVector::zeros(num_qubits);
                    if r == 0 {
                        row.set(g.support[0], true);
                        row.set(g.support[1], true);
                        row.set(e(1), true);
                    } else if r == w - 2 {
                        row.set(e(w - 2), true);
                        row.set(g.support[w - 1], true);
                    } else {
                        row.set(e(r), true);
                        row.set(g.support[r + 1], true);
                        row.set(e(r + 1), true);
                    }
                    x_rows.push(row);
                }
            }
            _ => {
                let mut row = BitVector::zeros(num_qubits);
                for q in code.h_x().row_support(s) {
                    row.set(q, true);
                }
                x_rows.push(row);
            }
        }
    }

    let mut z_rows: Vec<BitVector> = Vec::with_capacity(code.num_z_stabs());
    for v in 0..code.num_z_stabs() {
        let mut row = BitVector::zeros(num_qubits);
        for q in code.h_z().row_support(v) {
            row.set(q, true);
        }
        for g in &meta.gauged {
            let w = g.support.len();
            let mut prefix = false;
            // Ancilla j carries the parity of the overlap on q_1..q_{j+1}.
            for j in 1..=w - 2 {
                prefix ^= code.h_z().get(v, g.support[j - 1]);
                let with_next = prefix ^ code.h_z().get(v, g.support[j]);
                if with_next {
                    row.set(g.ancilla_start + j - 1, true);
                }
            }
        }
        z_rows.push(row);
    }

    let gauged_code = CssCode::new(
        BitMatrix::from_rows(num_qubits, &x_rows),
        BitMatrix::from_rows(num_qubits, &z_rows),
    )?;
    gauged_code.ensure_valid()?;
    Ok((gauged_code, meta))
}
