//! The four-stage weight-reduction pipeline: copying tames X-degrees,
//! gauging tames X-weights, thickening with heights tames Z-degrees, and
//! coning tames Z-weights.

pub mod cone;
pub mod copying;
pub mod gauging;
pub mod ledger;
pub mod reduce;
pub mod thicken;

pub use cone::{build_local_graph, cone, cone_unchecked, find_unreasonable, is_reasonable, ConeMeta, LocalGraph};
pub use copying::{copy_qubits, CopyMeta};
pub use gauging::{gauge_x_stabs, GaugeMeta};
pub use ledger::{
    all_evaluated_pass, echo_ledger, measure_wr_stages, parameter_ledger, LedgerConstants,
    LedgerRow, RowStatus, WrStageParams,
};
pub use reduce::{
    cellulate, reduce_cone, reduce_cone_stages, reduce_cone_unchecked, ReduceMeta, ReduceStages,
    StageSizes,
};
pub use thicken::{choose_heights, thicken, HeightStrategy, ThickenMeta};

use crate::css::CssCode;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageProfile {
    pub label: String,
    pub sizes: StageSizes,
    pub w_x: usize,
    pub w_z: usize,
    pub q_x: usize,
    pub q_z: usize,
}

impl StageProfile {
    pub fn of(label: &str, code: &CssCode) -> Self {
        StageProfile {
            label: label.to_string(),
            sizes: StageSizes::of(code),
            w_x: code.h_x().max_row_weight(),
            w_z: code.h_z().max_row_weight(),
            q_x: code.h_x().max_col_weight(),
            q_z: code.h_z().max_col_weight(),
        }
    }

    pub fn locality(&self) -> usize {
        self.w_x.max(self.w_z).max(self.q_x).max(self.q_z)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceOptions {
    /// Thickening depth for stage three; None picks the smallest l that
    /// lets greedy heights give every qubit copy at most one kept check.
    pub l1: Option<usize>,
    /// Thickening depth inside the reduced cone; None uses the disc
    /// colouring count.
    pub l2: Option<usize>,
    pub heights: HeightStrategy,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions {
            l1: None,
            l2: None,
            heights: HeightStrategy::Greedy,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FullReduction {
    pub code: CssCode,
    pub copy: CopyMeta,
    pub gauge: GaugeMeta,
    pub l1: usize,
    pub thicken: ThickenMeta,
    pub heights: Vec<usize>,
    pub reduce: ReduceMeta,
    /// Input profile followed by one profile per stage.
    pub stages: Vec<StageProfile>,
    pub copied_code: CssCode,
    pub gauged_code: CssCode,
    pub heighted_code: CssCode,
    /// Everything the coning stage materialises, cone through reduced.
    pub cone_stages: reduce::ReduceStages,
}

/// Check degree target on the qubit-copy columns after choosing
/// heights: one kept check plus two repetition-chain checks.
pub const THICKEN_QZ_TARGET: usize = 3;

/// Largest number of checks on any qubit-copy column (the first n*l
/// columns; the remaining columns sit under X-cells and are bounded by
/// w_x instead).
fn copy_column_degree(meta: &ThickenMeta, heighted: &CssCode) -> usize {
    let cut = meta.n_orig * meta.l;
    heighted.h_z().col_weights()[..cut]
        .iter()
        .copied()
        .max()
        .unwrap_or(0)
}

/// Largest number of other checks any single check shares a qubit
/// with. Greedy heights with l of at least this plus one always leave
/// a collision-free height, so the search below terminates.
fn check_conflict_degree(code: &CssCode) -> usize {
    let nz = code.num_z_stabs();
    let supports: Vec<Vec<usize>> = (0..nz).map(|v| code.h_z().row_support(v)).collect();
    let mut worst = 0;
    for v in 0..nz {
        let here: std::collections::HashSet<usize> = supports[v].iter().copied().collect();
        let deg = (0..nz)
            .filter(|&u| u != v && supports[u].iter().any(|q| here.contains(q)))
            .count();
        worst = worst.max(deg);
    }
    worst
}

/// Run all four stages. Stage three searches l upward from 2 until the
/// chosen heights meet the copy-column degree target; stage four
/// refuses unreasonable inputs.
pub fn weight_reduce_full(code: &CssCode, opts: &ReduceOptions) -> Result<FullReduction> {
    let mut stages = vec![StageProfile::of("input", code)];
    let (copied, copy_meta) = copy_qubits(code)?;
    stages.push(StageProfile::of("copied", &copied));
    let (gauged, gauge_meta) = gauge_x_stabs(&copied)?;
    stages.push(StageProfile::of("gauged", &gauged));

    let (l1, tmeta, heighted, heights) = match opts.l1 {
        Some(l) => {
            let (thick, tmeta) = thicken(&gauged, l)?;
            let (heighted, heights) = choose_heights(&thick, &tmeta, &opts.heights)?;
            (l, tmeta, heighted, heights)
        }
        None => {
            let cap = check_conflict_degree(&gauged) + 2;
            let mut found = None;
            for l in 2..=cap.max(2) {
                let (thick, tmeta) = thicken(&gauged, l)?;
                let (heighted, heights) = choose_heights(&thick, &tmeta, &opts.heights)?;
                if copy_column_degree(&tmeta, &heighted) <= THICKEN_QZ_TARGET {
                    found = Some((l, tmeta, heighted, heights));
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::Infeasible(format!(
                    "no thickening depth up to {cap} meets the check degree target; \
                     pass l1 explicitly"
                ))
            })?
        }
    };
    stages.push(StageProfile::of("thickened", &heighted));

    let cone_stages = reduce::reduce_cone_stages(&heighted, opts.l2)?;
    stages.push(StageProfile::of("coned", &cone_stages.reduced));

    Ok(FullReduction {
        code: cone_stages.reduced.clone(),
        copy: copy_meta,
        gauge: gauge_meta,
        l1,
        thicken: tmeta,
        heights,
        reduce: cone_stages.meta.clone(),
        stages,
        copied_code: copied,
        gauged_code: gauged,
        heighted_code: heighted,
        cone_stages,
    })
}
