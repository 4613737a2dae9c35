//! Reduced coning: thicken the cone so its disc checks can sit at
//! distinct heights, then cellulate every disc into faces of weight at
//! most four. Z-weights come down to the X-degree plus a constant.

use crate::css::CssCode;
use crate::gf2::{BitMatrix, BitVector};
use crate::weightred::cone::{cone, cone_unchecked, ConeMeta};
use crate::weightred::thicken::{choose_heights, thicken, HeightStrategy};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Chords and faces of one disc of perimeter w: chord j joins polygon
/// positions j and w-j, faces are a cap, quads, and a final cap, each of
/// weight at most four, summing to the disc boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cellulation {
    pub perimeter: usize,
    pub chords: usize,
    /// Faces as (edge positions, chord indices); chord j is 1-based.
    pub faces: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Largest j with 2j < w - 1; chords (j, w-j) for j = 1..=c leave every
/// polygon vertex on at most one chord.
pub fn cellulate(perimeter: usize) -> Cellulation {
    let w = perimeter;
    let c = if w >= 4 { (w - 2) / 2 } else { 0 };
    let mut faces = Vec::new();
    if c == 0 {
        faces.push(((0..w).collect(), Vec::new()));
    } else {
        faces.push((vec![w - 1, 0], vec![1]));
        for j in 1..c {
            faces.push((vec![j, w - j - 1], vec![j + 1, j]));
        }
        faces.push(((c..w - c).collect(), vec![c]));
    }
    debug_assert!(faces.iter().all(|(e, ch)| e.len() + ch.len() <= 4));
    Cellulation {
        perimeter: w,
        chords: c,
        faces,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSizes {
    pub n: usize,
    pub n_x: usize,
    pub n_z: usize,
}

impl StageSizes {
    pub fn of(code: &CssCode) -> Self {
        StageSizes {
            n: code.num_qubits(),
            n_x: code.num_x_stabs(),
            n_z: code.num_z_stabs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReduceMeta {
    pub cone: ConeMeta,
    pub l2: usize,
    /// Height per disc, in the order of `cone.discs`.
    pub disc_heights: Vec<usize>,
    pub cellulations: Vec<Cellulation>,
    pub total_chords: usize,
    pub cone_sizes: StageSizes,
    /// The intermediate code after dual-thicken-heights-dual, before
    /// cellulation.
    pub mid_sizes: StageSizes,
}

/// Same-block discs sharing a vertex must sit at distinct heights so that
/// each Z-check sees at most one chord. Greedy colouring in disc order;
/// returns the heights and the number of colours used.
fn colour_discs(cone_meta: &ConeMeta) -> (Vec<usize>, usize) {
    let discs = &cone_meta.discs;
    let mut heights = vec![0usize; discs.len()];
    let mut palette = 1;
    for (d, &(block, cyc)) in discs.iter().enumerate() {
        let mine: std::collections::HashSet<usize> = cone_meta.locals[block].cycles[cyc]
            .vertices
            .iter()
            .copied()
            .collect();
        let mut used = vec![false; d + 1];
        for (e, &(other_block, other_cyc)) in discs.iter().enumerate().take(d) {
            if other_block != block {
                continue;
            }
            let shares = cone_meta.locals[block].cycles[other_cyc]
                .vertices
                .iter()
                .any(|v| mine.contains(v));
            if shares {
                used[heights[e]] = true;
            }
        }
        let colour = (0..).find(|&c| c >= used.len() || !used[c]).unwrap();
        heights[d] = colour;
        palette = palette.max(colour + 1);
    }
    (heights, palette)
}

/// The reduced cone together with every code materialised on the way,
/// in construction order. The height-kept variants share the reduced
/// code's Z-row space.
#[derive(Clone, Debug)]
pub struct ReduceStages {
    pub cone_code: CssCode,
    /// Cone thickened dually by l2, before any height choice.
    pub thick_cone_code: CssCode,
    /// Every check given one height, discs and originals alike.
    pub full_heights_code: CssCode,
    /// Heights chosen for discs only; the code that gets cellulated.
    pub mid_code: CssCode,
    pub reduced: CssCode,
    pub meta: ReduceMeta,
}

pub fn reduce_cone(code: &CssCode, l2: Option<usize>) -> Result<(CssCode, ReduceMeta)> {
    let stages = reduce_cone_impl(code, l2, true)?;
    Ok((stages.reduced, stages.meta))
}

pub fn reduce_cone_unchecked(code: &CssCode, l2: Option<usize>) -> Result<(CssCode, ReduceMeta)> {
    let stages = reduce_cone_impl(code, l2, false)?;
    Ok((stages.reduced, stages.meta))
}

pub fn reduce_cone_stages(code: &CssCode, l2: Option<usize>) -> Result<ReduceStages> {
    reduce_cone_impl(code, l2, true)
}

fn reduce_cone_impl(code: &CssCode, l2: Option<usize>, check: bool) -> Result<ReduceStages> {
    let (coned, cone_meta) = if check { cone(code)? } else { cone_unchecked(code)? };
    let cone_sizes = StageSizes::of(&coned);

    let (disc_heights, palette) = colour_discs(&cone_meta);
    let l2 = match l2 {
        Some(l) => {
            if l < palette.max(2) {
                return Err(Error::InvalidParameter(format!(
                    "l2 = {l} too small: disc colouring needs {} heights",
                    palette.max(2)
                )));
            }
            l
        }
        None => palette.max(2),
    };

    // Thicken the dual so the disc checks, now Z-type, gain heights.
    let dual = coned.dual();
    let (thick, tmeta) = thicken(&dual, l2)?;

    // Partial heights: original checks stay at every height, each disc
    // keeps only its colour.
    let mut z_rows: Vec<BitVector> = Vec::new();
    for v in 0..cone_meta.n_x_orig {
        for m in 0..l2 {
            z_rows.push(thick.h_z().row(tmeta.z_row_at(v, m)));
        }
    }
    for (d, _) in cone_meta.discs.iter().enumerate() {
        let v = cone_meta.n_x_orig + d;
        z_rows.push(thick.h_z().row(tmeta.z_row_at(v, disc_heights[d])));
    }
    let disc_row_start = cone_meta.n_x_orig * l2;
    for q in 0..tmeta.n_orig {
        for j in 0..l2 - 1 {
            z_rows.push(thick.h_z().row(tmeta.z_chain_row(q, j)));
        }
    }
    let n_mid = thick.num_qubits();
    let mid = CssCode::new(
        thick.h_x().clone(),
        BitMatrix::from_rows(n_mid, &z_rows),
    )?
    .dual();
    let mid_sizes = StageSizes::of(&mid);

    // Cellulate each disc X-row in place: chords become fresh qubits and
    // every face becomes a weight <= 4 check.
    let cellulations: Vec<Cellulation> = cone_meta
        .discs
        .iter()
        .map(|&(block, cyc)| cellulate(cone_meta.locals[block].cycles[cyc].len()))
        .collect();
    let total_chords: usize = cellulations.iter().map(|c| c.chords).sum();
    let nn = n_mid + total_chords;
    let mut chord_offsets = Vec::with_capacity(cellulations.len());
    let mut next = n_mid;
    for cell in &cellulations {
        chord_offsets.push(next);
        next += cell.chords;
    }

    let mut x_rows: Vec<BitVector> = Vec::new();
    for r in 0..mid.num_x_stabs() {
        if r >= disc_row_start && r < disc_row_start + cone_meta.discs.len() {
            continue;
        }
        let mut row = BitVector::zeros(nn);
        for q in mid.h_x().row_support(r) {
            row.set(q, true);
        }
        x_rows.push(row);
    }
    for (d, &(block, cyc)) in cone_meta.discs.iter().enumerate() {
        let walk = &cone_meta.locals[block].cycles[cyc];
        let cell = &cellulations[d];
        let height = disc_heights[d];
        let edge_qubit = |pos: usize| {
            tmeta.qubit_at(cone_meta.edge_qubit(block, walk.edges[pos]), height)
        };
        let mut face_sum = BitVector::zeros(nn);
        for (edges, chords) in &cell.faces {
            let mut row = BitVector::zeros(nn);
            for &pos in edges {
                row.set(edge_qubit(pos), true);
            }
            for &j in chords {
                row.set(chord_offsets[d] + j - 1, true);
            }
            face_sum.xor_assign(&row);
            x_rows.push(row);
        }
        // Faces must reassemble exactly the disc at its height.
        let disc_row = mid.h_x().row(disc_row_start + d);
        debug_assert_eq!(face_sum.support(), disc_row.support());
    }

    let mut final_z_rows: Vec<BitVector> = Vec::new();
    for zr in 0..mid.num_z_stabs() {
        let mut row = BitVector::zeros(nn);
        for q in mid.h_z().row_support(zr) {
            row.set(q, true);
        }
        // Z-row zr is copy m of cone Z-row u = (block, qubit q); add the
        // chords at q from this block's discs at height m.
        let u = zr / l2;
        let m = zr % l2;
        debug_assert_eq!(tmeta.x_row_at(u, m), zr);
        let (block, q) = cone_meta.z_rows[u];
        for (d, &(dblock, cyc)) in cone_meta.discs.iter().enumerate() {
            if dblock != block || disc_heights[d] != m {
                continue;
            }
            let walk = &cone_meta.locals[block].cycles[cyc];
            let w = walk.len();
            for j in 1..=cellulations[d].chords {
                if walk.vertices[j] == q || walk.vertices[w - j] == q {
                    row.set(chord_offsets[d] + j - 1, true);
                }
            }
        }
        final_z_rows.push(row);
    }

    let reduced = CssCode::new(
        BitMatrix::from_rows(nn, &x_rows),
        BitMatrix::from_rows(nn, &final_z_rows),
    )?;
    reduced.ensure_valid()?;
    let (full_heighted, _) = choose_heights(&thick, &tmeta, &HeightStrategy::Greedy)?;
    let meta = ReduceMeta {
        cone: cone_meta,
        l2,
        disc_heights,
        cellulations,
        total_chords,
        cone_sizes,
        mid_sizes,
    };
    Ok(ReduceStages {
        cone_code: coned,
        thick_cone_code: thick.dual(),
        full_heights_code: full_heighted.dual(),
        mid_code: mid,
        reduced,
        meta,
    })
}
