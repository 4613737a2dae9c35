//! CSS codes and the 3-term chain complexes they are equivalent to.
//!
//! A CSS code is a pair of check matrices (h_x, h_z) over the same qubit
//! set with h_x * h_z^T = 0. Equivalently a chain complex
//!   F2^{n_z} -> F2^n -> F2^{n_x}
//! whose top space indexes Z-stabilisers and bottom space X-stabilisers.

use crate::gf2::{BitMatrix, Echelon};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq)]
pub struct CssCode {
    h_x: BitMatrix,
    h_z: BitMatrix,
}

impl CssCode {
    /// Wraps the pair without checking commutation; use `validate` or
    /// `ensure_valid` for that. Column counts must agree.
    pub fn new(h_x: BitMatrix, h_z: BitMatrix) -> Result<Self> {
        if h_x.cols() != h_z.cols() {
            return Err(Error::DimensionMismatch(format!(
                "h_x has {} columns, h_z has {}",
                h_x.cols(),
                h_z.cols()
            )));
        }
        Ok(CssCode { h_x, h_z })
    }

    pub fn h_x(&self) -> &BitMatrix {
        &self.h_x
    }

    pub fn h_z(&self) -> &BitMatrix {
        &self.h_z
    }

    pub fn num_qubits(&self) -> usize {
        self.h_x.cols()
    }

    pub fn num_x_stabs(&self) -> usize {
        self.h_x.rows()
    }

    pub fn num_z_stabs(&self) -> usize {
        self.h_z.rows()
    }

    /// Every anticommuting row pair plus zero-weight rows. Dependent rows
    /// are permitted and not reported here.
    pub fn validate(&self) -> ValidationReport {
        let mut anticommuting = Vec::new();
        let zt = self.h_z.transpose();
        let prod = self.h_x.matmul(&zt);
        for xr in 0..prod.rows() {
            for zr in prod.row(xr).iter_support() {
                anticommuting.push((xr, zr));
            }
        }
        let zero_weight_x =
            (0..self.h_x.rows()).filter(|&r| self.h_x.row_weight(r) == 0).collect();
        let zero_weight_z =
            (0..self.h_z.rows()).filter(|&r| self.h_z.row_weight(r) == 0).collect();
        ValidationReport {
            anticommuting,
            zero_weight_x,
            zero_weight_z,
        }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if let Some(&(x_row, z_row)) = report.anticommuting.first() {
            return Err(Error::Commutation {
                violations: report.anticommuting.len(),
                x_row,
                z_row,
            });
        }
        Ok(())
    }

    /// X and Z exchanged; parameters swap exactly.
    pub fn dual(&self) -> CssCode {
        CssCode {
            h_x: self.h_z.clone(),
            h_z: self.h_x.clone(),
        }
    }

    pub fn k(&self) -> usize {
        let rx = self.h_x.rank();
        let rz = self.h_z.rank();
        self.num_qubits().saturating_sub(rx + rz)
    }
}

impl std::fmt::Debug for CssCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CssCode {{ n: {}, n_x: {}, n_z: {} }}",
            self.num_qubits(),
            self.num_x_stabs(),
            self.num_z_stabs()
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    /// (x_row, z_row) pairs with odd overlap.
    pub anticommuting: Vec<(usize, usize)>,
    pub zero_weight_x: Vec<usize>,
    pub zero_weight_z: Vec<usize>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.anticommuting.is_empty()
    }
}

/// Chain complex of GF(2) spaces. Space 0 is the bottom; boundary[i] maps
/// space i+1 into space i (a dims[i] x dims[i+1] matrix).
#[derive(Clone, Debug)]
pub struct ChainComplex {
    dims: Vec<usize>,
    boundaries: Vec<BitMatrix>,
}

impl ChainComplex {
    /// Rejects inconsistent dimensions and any nonzero composite map.
    pub fn new(dims: Vec<usize>, boundaries: Vec<BitMatrix>) -> Result<Self> {
        if dims.len() != boundaries.len() + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} spaces need {} boundary maps, got {}",
                dims.len(),
                dims.len() - 1,
                boundaries.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows() != dims[i] || b.cols() != dims[i + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "boundary {i} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    dims[i],
                    dims[i + 1]
                )));
            }
        }
        for i in 0..boundaries.len().saturating_sub(1) {
            let composite = boundaries[i].matmul(&boundaries[i + 1]);
            if (0..composite.rows()).any(|r| composite.row_weight(r) > 0) {
                return Err(Error::Invariant(format!(
                    "boundary {i} of boundary {} is nonzero",
                    i + 1
                )));
            }
        }
        Ok(ChainComplex { dims, boundaries })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self, i: usize) -> &BitMatrix {
        &self.boundaries[i]
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// dim H_i = dim ker(boundary[i-1]) - rank(boundary[i]).
    pub fn homology_dim(&self, i: usize) -> usize {
        let ker = if i == 0 {
            self.dims[0]
        } else {
            let (rank, _) = self.boundaries[i - 1].rank_kernel();
            self.dims[i] - rank
        };
        let img = if i < self.boundaries.len() {
            self.boundaries[i].rank()
        } else {
            0
        };
        ker - img
    }
}

/// The 3-term complex of a CSS code: spaces [n_x, n, n_z] bottom to top,
/// boundary 0 = h_x, boundary 1 = h_z^T.
pub fn chain_from_css(code: &CssCode) -> Result<ChainComplex> {
    code.ensure_valid()?;
    ChainComplex::new(
        vec![code.num_x_stabs(), code.num_qubits(), code.num_z_stabs()],
        vec![code.h_x().clone(), code.h_z().transpose()],
    )
}

/// CSS code with qubits at space `level` of the complex: h_x is the
/// boundary below, h_z the transposed boundary above.
pub fn css_from_chain(chain: &ChainComplex, level: usize) -> Result<CssCode> {
    if level == 0 || level + 1 >= chain.len() {
        return Err(Error::InvalidParameter(format!(
            "level {level} needs a space below and above (complex has {} spaces)",
            chain.len()
        )));
    }
    CssCode::new(
        chain.boundary(level - 1).clone(),
        chain.boundary(level).transpose(),
    )
}

/// How a metric value was obtained, if at all.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric<T> {
    Exact(T),
    /// Enumeration would need 2^needed steps, over the budget.
    Skipped { needed: u32 },
    /// The quantity does not exist here (no logicals, or a full kernel).
    Undefined,
    NotRequested,
}

impl<T> Metric<T> {
    pub fn exact(&self) -> Option<&T> {
        match self {
            Metric::Exact(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, Metric::Skipped { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub n_x: usize,
    pub n_z: usize,
    pub rank_x: usize,
    pub rank_z: usize,
    pub k: usize,
    /// Max X/Z stabiliser weights (0 when there are no rows).
    pub w_x: usize,
    pub w_z: usize,
    /// Max number of X/Z stabilisers on one qubit.
    pub q_x: usize,
    pub q_z: usize,
    pub d_x: Metric<usize>,
    pub d_z: Metric<usize>,
    pub rho_x: Metric<crate::oracle::Rational>,
    pub rho_z: Metric<crate::oracle::Rational>,
}

#[derive(Clone, Copy, Debug)]
pub struct MeasureOptions {
    pub distances: bool,
    pub soundness: bool,
    /// Enumeration exponent cap shared by all oracle calls.
    pub budget: u32,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            distances: true,
            soundness: false,
            budget: crate::oracle::DEFAULT_BUDGET,
        }
    }
}

impl MeasureOptions {
    pub fn structural() -> Self {
        MeasureOptions {
            distances: false,
            soundness: false,
            budget: crate::oracle::DEFAULT_BUDGET,
        }
    }

    pub fn full(budget: u32) -> Self {
        MeasureOptions {
            distances: true,
            soundness: true,
            budget,
        }
    }
}

/// Ranks, dimension and locality are always exact; distances and soundness
/// are exact within the budget and otherwise flagged skipped, never
/// silently approximated.
pub fn measure(code: &CssCode, opts: &MeasureOptions) -> Result<CodeParams> {
    code.ensure_valid()?;
    let rank_x = code.h_x().rank();
    let rank_z = code.h_z().rank();
    let n = code.num_qubits();
    let k = n - rank_x - rank_z;

    let d_x = if opts.distances {
        metric_from(crate::oracle::brute_distance_x(code, opts.budget), k)?
    } else {
        Metric::NotRequested
    };
    let d_z = if opts.distances {
        metric_from(crate::oracle::brute_distance_z(code, opts.budget), k)?
    } else {
        Metric::NotRequested
    };
    let (rho_x, rho_z) = if opts.soundness {
        let q = crate::oracle::quantum_soundness(code, opts.budget)?;
        (q.rho_x, q.rho_z)
    } else {
        (Metric::NotRequested, Metric::NotRequested)
    };

    Ok(CodeParams {
        n,
        n_x: code.num_x_stabs(),
        n_z: code.num_z_stabs(),
        rank_x,
        rank_z,
        k,
        w_x: code.h_x().max_row_weight(),
        w_z: code.h_z().max_row_weight(),
        q_x: code.h_x().max_col_weight(),
        q_z: code.h_z().max_col_weight(),
        d_x,
        d_z,
        rho_x,
        rho_z,
    })
}

fn metric_from(result: Result<usize>, k: usize) -> Result<Metric<usize>> {
    match result {
        Ok(d) => Ok(Metric::Exact(d)),
        Err(Error::BudgetExceeded { needed, .. }) => Ok(Metric::Skipped { needed }),
        Err(Error::NoLogicals) if k == 0 => Ok(Metric::Undefined),
        Err(e) => Err(e),
    }
}

/// Z row space membership test set up once per code.
pub fn z_row_space(code: &CssCode) -> Echelon {
    Echelon::from_rows(code.h_z().iter_rows())
}

/// X row space membership test set up once per code.
pub fn x_row_space(code: &CssCode) -> Echelon {
    Echelon::from_rows(code.h_x().iter_rows())
}
