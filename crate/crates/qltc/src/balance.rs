//! Distance balancing by tensoring with a classical code.
//!
//! The homological product of the 3-term CSS complex with the 2-term
//! cochain complex of a classical code lengthens one side's distance by
//! the classical distance while the other side is unchanged. Thickening
//! is the special case of a repetition code.

use crate::css::{css_from_chain, chain_from_css, ChainComplex, CssCode};
use crate::gf2::BitMatrix;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug)]
pub struct ClassicalCode {
    h: BitMatrix,
    independent_checks: bool,
    dim: usize,
}

impl ClassicalCode {
    pub fn new(h: BitMatrix) -> Self {
        let rank = h.rank();
        ClassicalCode {
            independent_checks: rank == h.rows(),
            dim: h.cols() - rank,
            h,
        }
    }

    pub fn h(&self) -> &BitMatrix {
        &self.h
    }

    pub fn independent_checks(&self) -> bool {
        self.independent_checks
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.h.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.h.cols() == 0
    }

    /// Minimum weight of a nonzero codeword.
    pub fn distance(&self, budget: u32) -> Result<usize> {
        let empty = BitMatrix::zeros(0, self.h.cols());
        crate::oracle::brute_distance(&self.h, &empty, budget)
    }
}

/// One A_i (x) B_j block inside a product level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub a_level: usize,
    pub b_level: usize,
    pub offset: usize,
    pub len: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ProductLayout {
    /// Summands per product level, ordered by decreasing A-index.
    pub levels: Vec<Vec<Summand>>,
}

impl ProductLayout {
    pub fn summand(&self, level: usize, a_level: usize) -> Option<&Summand> {
        self.levels[level].iter().find(|s| s.a_level == a_level)
    }
}

/// Tensor product of chain complexes over GF(2):
/// (A x B)_p = direct sum of A_i (x) B_j with i + j = p, summands ordered
/// by decreasing i, and boundary a(x)b -> da(x)b + a(x)db.
pub fn homological_product(
    a: &ChainComplex,
    b: &ChainComplex,
) -> Result<(ChainComplex, ProductLayout)> {
    let la = a.dims().len();
    let lb = b.dims().len();
    let levels = la + lb - 1;
    let mut layout = ProductLayout {
        levels: Vec::with_capacity(levels),
    };
    let mut dims = Vec::with_capacity(levels);
    for p in 0..levels {
        let mut summands = Vec::new();
        let mut offset = 0;
        for i in (0..la).rev() {
            let Some(j) = p.checked_sub(i) else { continue };
            if j >= lb {
                continue;
            }
            let len = a.dims()[i] * b.dims()[j];
            summands.push(Summand {
                a_level: i,
                b_level: j,
                offset,
                len,
            });
            offset += len;
        }
        dims.push(offset);
        layout.levels.push(summands);
    }

    let mut boundaries = Vec::with_capacity(levels - 1);
    for p in 0..levels - 1 {
        let mut m = BitMatrix::zeros(dims[p], dims[p + 1]);
        for src in &layout.levels[p + 1] {
            // d(a (x) b) lands in (i-1, j) via dA and (i, j-1) via dB.
            if src.a_level > 0 {
                if let Some(dst) = layout.summand(p, src.a_level - 1) {
                    let da = a.boundary(src.a_level - 1);
                    let block = da.kronecker(&BitMatrix::identity(b.dims()[src.b_level]));
                    copy_block(&mut m, &block, dst.offset, src.offset);
                }
            }
            if src.b_level > 0 {
                if let Some(dst) = layout
                    .levels[p]
                    .iter()
                    .find(|s| s.a_level == src.a_level && s.b_level == src.b_level - 1)
                {
                    let db = b.boundary(src.b_level - 1);
                    let block = BitMatrix::identity(a.dims()[src.a_level]).kronecker(db);
                    copy_block(&mut m, &block, dst.offset, src.offset);
                }
            }
        }
        boundaries.push(m);
    }
    // The constructor re-checks every composite map is zero.
    let chain = ChainComplex::new(dims, boundaries)?;
    Ok((chain, layout))
}

fn copy_block(m: &mut BitMatrix, block: &BitMatrix, row_offset: usize, col_offset: usize) {
    for r in 0..block.rows() {
        for c in block.row(r).iter_support() {
            m.set(row_offset + r, col_offset + c, true);
        }
    }
}

/// Layout bookkeeping of one balancing step, enough to reconstruct which
/// product block any qubit or stabiliser row lives in.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BalanceMeta {
    pub n_orig: usize,
    pub n_x_orig: usize,
    pub n_z_orig: usize,
    /// Length of the classical code (t = l for thickening).
    pub t: usize,
    /// Number of classical checks (s = l - 1 for thickening).
    pub s: usize,
    pub classical_dim: usize,
}

impl BalanceMeta {
    /// Qubits are [C1 (x) R0 | C0 (x) R1]: n_orig * t then n_x_orig * s.
    pub fn num_qubits(&self) -> usize {
        self.n_orig * self.t + self.n_x_orig * self.s
    }

    /// Z-stab rows are [C2 (x) R0 | C1 (x) R1]: n_z_orig * t then n_orig * s.
    pub fn num_z_stabs(&self) -> usize {
        self.n_z_orig * self.t + self.n_orig * self.s
    }

    pub fn num_x_stabs(&self) -> usize {
        self.n_x_orig * self.t
    }
}

/// Tensor with the cochain complex of `classical` and keep the bottom
/// three terms: d_x grows by the classical distance, d_z is unchanged, and
/// k multiplies by the classical dimension.
pub fn distance_balance(
    code: &CssCode,
    classical: &ClassicalCode,
) -> Result<(CssCode, BalanceMeta)> {
    if !classical.independent_checks() {
        return Err(Error::InvalidParameter(
            "distance balancing needs independent classical checks".into(),
        ));
    }
    let chain = chain_from_css(code)?;
    // R* has R1 = checks, R0 = bits, boundary H^T.
    let r_star = ChainComplex::new(
        vec![classical.h().cols(), classical.h().rows()],
        vec![classical.h().transpose()],
    )?;
    let (product, layout) = homological_product(&chain, &r_star)?;
    debug_assert_eq!(layout.levels.len(), 4);
    let balanced = css_from_chain(&product, 1)?;
    balanced.ensure_valid()?;
    let meta = BalanceMeta {
        n_orig: code.num_qubits(),
        n_x_orig: code.num_x_stabs(),
        n_z_orig: code.num_z_stabs(),
        t: classical.h().cols(),
        s: classical.h().rows(),
        classical_dim: classical.dim(),
    };
    debug_assert_eq!(balanced.num_qubits(), meta.num_qubits());
    debug_assert_eq!(balanced.num_z_stabs(), meta.num_z_stabs());
    debug_assert_eq!(balanced.num_x_stabs(), meta.num_x_stabs());
    Ok((balanced, meta))
}

/// Balance both sides: balance the dual, flip back, balance again.
/// Distances gain the classical distance on each side and k multiplies by
/// the squared classical dimension.
pub fn double_distance_balance(
    code: &CssCode,
    classical: &ClassicalCode,
) -> Result<(CssCode, BalanceMeta, BalanceMeta)> {
    let (z_balanced, meta_inner) = distance_balance(&code.dual(), classical)?;
    let (both, meta_outer) = distance_balance(&z_balanced.dual(), classical)?;
    Ok((both, meta_inner, meta_outer))
}
