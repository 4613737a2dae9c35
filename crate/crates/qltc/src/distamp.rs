//! Distance amplification: concatenate with an inner code, permute along a
//! pseudorandom bipartite graph, then encode each block again.
//!
//! The outer code's logical content rides through untouched while the block
//! structure converts high relative distance into linear distance. All
//! graphs here are sampled and then verified exhaustively, so every claimed
//! pseudorandomness slack is an actual measured bound at this scale.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::css::CssCode;
use crate::gf2::{BitMatrix, BitVector, Echelon};
use crate::{Error, Result};

/// Paired logical representatives: x_i and z_j overlap oddly iff i = j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalBasis {
    x_logicals: Vec<BitVector>,
    z_logicals: Vec<BitVector>,
}

impl LogicalBasis {
    pub fn k(&self) -> usize {
        self.x_logicals.len()
    }

    pub fn x_logicals(&self) -> &[BitVector] {
        &self.x_logicals
    }

    pub fn z_logicals(&self) -> &[BitVector] {
        &self.z_logicals
    }
}

/// Representatives of ker(checks) modulo the row space of `modulo`, taken
/// from the reduced kernel basis in its construction order.
fn quotient_reps(checks: &BitMatrix, modulo: &BitMatrix) -> Vec<BitVector> {
    let (_, kernel) = checks.rank_kernel();
    let mut ech = Echelon::new(checks.cols());
    for r in 0..modulo.rows() {
        ech.insert(modulo.row(r));
    }
    let mut reps = Vec::new();
    for v in kernel {
        if ech.insert(v.clone()) {
            reps.push(v);
        }
    }
    reps
}

/// Deterministic symplectic basis of the logical space: X-representatives
/// from ker(h_z) modulo rowspace(h_x), Z-representatives dually, then
/// Gram-Schmidt over F2 until the pairing matrix is the identity.
pub fn logical_basis(code: &CssCode) -> Result<LogicalBasis> {
    let k = code.k();
    if k == 0 {
        return Err(Error::NoLogicals);
    }
    let mut xs = quotient_reps(code.h_z(), code.h_x());
    let mut zs = quotient_reps(code.h_x(), code.h_z());
    debug_assert_eq!(xs.len(), k);
    debug_assert_eq!(zs.len(), k);
    for i in 0..k {
        let mut found = None;
        'search: for (u, x) in xs.iter().enumerate().skip(i) {
            for (v, z) in zs.iter().enumerate().skip(i) {
                if x.dot(z) {
                    found = Some((u, v));
                    break 'search;
                }
            }
        }
        // The symplectic form is non-degenerate on the quotient, so a
        // partner always exists among the remaining vectors.
        let (u, v) = found.ok_or_else(|| {
            Error::Invariant("logical pairing degenerated during Gram-Schmidt".into())
        })?;
        xs.swap(i, u);
        zs.swap(i, v);
        let (x_i, z_i) = (xs[i].clone(), zs[i].clone());
        for w in i + 1..k {
            if xs[w].dot(&z_i) {
                xs[w].xor_assign(&x_i);
            }
            if zs[w].dot(&x_i) {
                zs[w].xor_assign(&z_i);
            }
        }
    }
    Ok(LogicalBasis {
        x_logicals: xs,
        z_logicals: zs,
    })
}

fn embed_in_block(row: &BitVector, block: usize, block_size: usize, total: usize) -> BitVector {
    let mut out = BitVector::zeros(total);
    for p in row.iter_support() {
        out.set(block * block_size + p, true);
    }
    out
}

/// Encode `blocks` groups of k_in outer qubits into one inner copy each:
/// outer stabilisers pass through the inner logical representatives, inner
/// stabilisers repeat per block. The logical count is the outer one.
pub fn concatenate_css(outer: &CssCode, inner: &CssCode, blocks: usize) -> Result<CssCode> {
    let k_in = inner.k();
    if k_in == 0 {
        return Err(Error::NoLogicals);
    }
    if blocks == 0 || blocks * k_in != outer.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "{blocks} blocks of {k_in} logical qubits cannot carry {} outer qubits",
            outer.num_qubits()
        )));
    }
    let basis = logical_basis(inner)?;
    let n_in = inner.num_qubits();
    let total = blocks * n_in;
    let through = |h: &BitMatrix, logicals: &[BitVector]| -> Vec<BitVector> {
        (0..h.rows())
            .map(|r| {
                let mut out = BitVector::zeros(total);
                for q in h.row(r).iter_support() {
                    let (block, slot) = (q / k_in, q % k_in);
                    for p in logicals[slot].iter_support() {
                        out.flip(block * n_in + p);
                    }
                }
                out
            })
            .collect()
    };
    let replicate = |h: &BitMatrix| -> Vec<BitVector> {
        (0..blocks)
            .flat_map(|block| {
                (0..h.rows()).map(move |r| embed_in_block(&h.row(r), block, n_in, total))
            })
            .collect()
    };
    let mut x_rows = through(outer.h_x(), basis.x_logicals());
    x_rows.extend(replicate(inner.h_x()));
    let mut z_rows = through(outer.h_z(), basis.z_logicals());
    z_rows.extend(replicate(inner.h_z()));
    let code = CssCode::new(
        BitMatrix::from_rows(total, &x_rows),
        BitMatrix::from_rows(total, &z_rows),
    )?;
    if code.k() != outer.k() {
        return Err(Error::Invariant(format!(
            "concatenation moved the logical count from {} to {}",
            outer.k(),
            code.k()
        )));
    }
    Ok(code)
}

/// Regular bipartite multigraph on b + b block vertices with numbered edge
/// endpoints; doubles as a permutation of b * n_in qubit positions.
#[derive(Clone, Debug, PartialEq)]
pub struct PermGraph {
    b: usize,
    n_in: usize,
    eps: f64,
    /// targets[i][j]: (arrival block, arrival slot) of edge j leaving block i.
    targets: Vec<Vec<(usize, usize)>>,
    seed: u64,
}

impl PermGraph {
    /// Validates that the arrival endpoints tile every (block, slot) pair
    /// exactly once, which is what makes the edge map a permutation.
    pub fn from_targets(
        n_in: usize,
        eps: f64,
        targets: Vec<Vec<(usize, usize)>>,
        seed: u64,
    ) -> Result<Self> {
        let b = targets.len();
        if b == 0 || n_in == 0 {
            return Err(Error::InvalidParameter(
                "permutation graph needs at least one block and one slot".into(),
            ));
        }
        let mut seen = vec![false; b * n_in];
        for (i, row) in targets.iter().enumerate() {
            if row.len() != n_in {
                return Err(Error::InvalidParameter(format!(
                    "block {i} has {} edges instead of {n_in}",
                    row.len()
                )));
            }
            for &(block, slot) in row {
                if block >= b || slot >= n_in {
                    return Err(Error::InvalidParameter(format!(
                        "edge from block {i} arrives outside the graph at ({block}, {slot})"
                    )));
                }
                if std::mem::replace(&mut seen[block * n_in + slot], true) {
                    return Err(Error::InvalidParameter(format!(
                        "arrival ({block}, {slot}) is used twice"
                    )));
                }
            }
        }
        Ok(PermGraph {
            b,
            n_in,
            eps,
            targets,
            seed,
        })
    }

    /// Every edge stays in its own block and slot. 1-pseudorandom, no more.
    pub fn identity(b: usize, n_in: usize) -> PermGraph {
        let targets = (0..b)
            .map(|i| (0..n_in).map(|j| (i, j)).collect())
            .collect();
        PermGraph {
            b,
            n_in,
            eps: 1.0,
            targets,
            seed: 0,
        }
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn targets(&self, block: usize) -> &[(usize, usize)] {
        &self.targets[block]
    }

    /// Qubit position map: slot j of block i moves to slot j' of block i'.
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm = vec![0usize; self.b * self.n_in];
        for (i, row) in self.targets.iter().enumerate() {
            for (j, &(block, slot)) in row.iter().enumerate() {
                perm[i * self.n_in + j] = block * self.n_in + slot;
            }
        }
        perm
    }

    /// Edge multiplicities between left and right block vertices.
    pub fn block_matrix(&self) -> Vec<Vec<usize>> {
        let mut cnt = vec![vec![0usize; self.b]; self.b];
        for (i, row) in self.targets.iter().enumerate() {
            for &(block, _) in row {
                cnt[i][block] += 1;
            }
        }
        cnt
    }
}

/// Exhaustive verification caps the block count: 4^b subset pairs.
pub const MAX_VERIFIABLE_BLOCKS: usize = 12;

/// Attempts before graph sampling gives up.
pub const MAX_GRAPH_ATTEMPTS: usize = 64;

/// Uniform half-edge matching between departure and arrival numberings,
/// resampled until exact verification accepts the slack `eps`.
pub fn sample_pseudorandom_graph(
    b: usize,
    n_in: usize,
    eps: f64,
    seed: u64,
) -> Result<PermGraph> {
    if b == 0 || n_in == 0 {
        return Err(Error::InvalidParameter(
            "permutation graph needs at least one block and one slot".into(),
        ));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "pseudorandomness slack must lie in (0, 1], got {eps}"
        )));
    }
    if (n_in as f64) < 4.0 / (eps * eps) {
        return Err(Error::InvalidParameter(format!(
            "degree {n_in} below the existence bound 4/eps^2 = {}",
            4.0 / (eps * eps)
        )));
    }
    if b > MAX_VERIFIABLE_BLOCKS {
        return Err(Error::BudgetExceeded {
            needed: 2 * b as u32,
            budget: 2 * MAX_VERIFIABLE_BLOCKS as u32,
        });
    }
    let mut arrivals: Vec<(usize, usize)> = (0..b)
        .flat_map(|i| (0..n_in).map(move |j| (i, j)))
        .collect();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..MAX_GRAPH_ATTEMPTS {
        arrivals.shuffle(&mut rng);
        let targets: Vec<Vec<(usize, usize)>> =
            arrivals.chunks(n_in).map(|c| c.to_vec()).collect();
        let graph = PermGraph::from_targets(n_in, eps, targets, seed)?;
        if verify_pseudorandom(&graph).holds {
            return Ok(graph);
        }
    }
    Err(Error::Infeasible(format!(
        "no {eps}-pseudorandom graph on {b}+{b} blocks of degree {n_in} within {MAX_GRAPH_ATTEMPTS} attempts"
    )))
}

#[derive(Clone, Debug)]
pub struct PseudorandomReport {
    /// Every nonempty (S, T) kept ||E(S,T)| - n_in |S||T| / b| within
    /// eps * n_in * sqrt(|S||T|).
    pub holds: bool,
    /// Smallest slack this graph actually satisfies.
    pub eps_star: f64,
    pub worst_s: Vec<usize>,
    pub worst_t: Vec<usize>,
    pub checked: u64,
}

/// Exact check of the deviation inequality over all block subset pairs.
pub fn verify_pseudorandom(graph: &PermGraph) -> PseudorandomReport {
    let b = graph.b;
    let n_in = graph.n_in as f64;
    let cnt = graph.block_matrix();
    let mut report = PseudorandomReport {
        holds: true,
        eps_star: 0.0,
        worst_s: Vec::new(),
        worst_t: Vec::new(),
        checked: 0,
    };
    for s_mask in 1u64..(1 << b) {
        let s_size = s_mask.count_ones() as f64;
        let mut col_sums = vec![0usize; b];
        for (i, row) in cnt.iter().enumerate() {
            if s_mask >> i & 1 == 1 {
                for (sum, &c) in col_sums.iter_mut().zip(row) {
                    *sum += c;
                }
            }
        }
        // Gray-code walk over T keeps the edge count incremental.
        let mut edges = 0isize;
        let mut t_gray = 0u64;
        for step in 1u64..(1 << b) {
            let bit = step.trailing_zeros() as usize;
            let next = step ^ (step >> 1);
            if next > t_gray {
                edges += col_sums[bit] as isize;
            } else {
                edges -= col_sums[bit] as isize;
            }
            t_gray = next;
            let t_size = t_gray.count_ones() as f64;
            let expectation = n_in * s_size * t_size / b as f64;
            let deviation = (edges as f64 - expectation).abs();
            let scale = n_in * (s_size * t_size).sqrt();
            report.checked += 1;
            let ratio = deviation / scale;
            if ratio > report.eps_star {
                report.eps_star = ratio;
                report.worst_s = (0..b).filter(|i| s_mask >> i & 1 == 1).collect();
                report.worst_t = (0..b).filter(|i| t_gray >> i & 1 == 1).collect();
            }
            if deviation > graph.eps * scale {
                report.holds = false;
            }
        }
    }
    report
}

#[derive(Clone, Debug)]
pub struct CountingReport {
    /// For every T below the size cap, at most `allowed` left blocks send
    /// more than alpha_in * n_in edges into T.
    pub holds: bool,
    pub size_cap: f64,
    pub allowed: f64,
    pub worst_t: Vec<usize>,
    pub worst_count: usize,
    pub checked: u64,
}

/// Exhaustive counting bound behind the distance proof: heavy left blocks
/// against small arrival sets T stay below the alpha_out fraction.
pub fn verify_counting_bound(
    graph: &PermGraph,
    alpha_out: f64,
    alpha_in: f64,
    eps: f64,
) -> CountingReport {
    let b = graph.b;
    let cnt = graph.block_matrix();
    let size_cap = (alpha_in - eps * (alpha_in / alpha_out).sqrt()) * b as f64;
    let allowed = alpha_out * b as f64;
    let mut report = CountingReport {
        holds: true,
        size_cap,
        allowed,
        worst_t: Vec::new(),
        worst_count: 0,
        checked: 0,
    };
    let mut into_t = vec![0isize; b];
    let mut t_gray = 0u64;
    for step in 1u64..(1 << b) {
        let bit = step.trailing_zeros() as usize;
        let next = step ^ (step >> 1);
        let sign = if next > t_gray { 1 } else { -1 };
        for (i, load) in into_t.iter_mut().enumerate() {
            *load += sign * cnt[i][bit] as isize;
        }
        t_gray = next;
        if (t_gray.count_ones() as f64) > size_cap {
            continue;
        }
        let threshold = alpha_in * graph.n_in as f64;
        let heavy = into_t.iter().filter(|&&e| e as f64 > threshold).count();
        report.checked += 1;
        if heavy > report.worst_count {
            report.worst_count = heavy;
            report.worst_t = (0..b).filter(|i| t_gray >> i & 1 == 1).collect();
        }
        if heavy as f64 > allowed {
            report.holds = false;
        }
    }
    report
}

/// Relative distance floor of the amplified code given the three block
/// relative distances and the graph slack.
pub fn ael_distance_floor(delta_block: f64, delta_in: f64, delta_out: f64, eps: f64) -> f64 {
    delta_block * (delta_in / 2.0 - eps * (delta_in / delta_out).sqrt())
}

/// Shape data feeding the soundness floor of the amplified code.
#[derive(Clone, Copy, Debug)]
pub struct AelSoundnessInputs {
    pub n_out: usize,
    /// Checks of the amplified side in the outer code.
    pub checks_out: usize,
    /// Overall outer locality.
    pub w_out: usize,
    pub rho_out: f64,
    pub n_in: usize,
    pub k_in: usize,
    pub n_block: usize,
    pub n_total: usize,
    /// Checks of the amplified side in the final code.
    pub checks_total: usize,
}

/// Lower bound on the amplified side's soundness in terms of the outer
/// code's measured soundness.
pub fn ael_soundness_floor(inp: &AelSoundnessInputs) -> f64 {
    let rho_hat = inp.checks_out as f64 * inp.rho_out / inp.n_out as f64;
    let w = inp.w_out as f64;
    let n_in = inp.n_in as f64;
    let k_in = inp.k_in as f64;
    let alpha = rho_hat
        / (n_in * k_in * w + rho_hat + k_in * (1.0 + n_in) * (rho_hat + w) + 1.0);
    (inp.n_total as f64 / inp.checks_total as f64) * alpha / (n_in * inp.n_block as f64)
}

/// Record of one amplification: block structure and locality growth.
#[derive(Clone, Debug)]
pub struct AelMeta {
    pub blocks: usize,
    pub n_in: usize,
    pub n_block: usize,
    pub w_out: usize,
    pub w_final: usize,
    /// w_final / (w_out * n_in^2), the constant in the locality bound.
    pub weight_ratio: f64,
}

fn locality(code: &CssCode) -> usize {
    code.h_x()
        .max_row_weight()
        .max(code.h_z().max_row_weight())
        .max(code.h_x().max_col_weight())
        .max(code.h_z().max_col_weight())
}

/// Concatenate with the inner code, permute qubits along the graph, then
/// encode each arrival block into the block code.
pub fn ael_amplify(
    outer: &CssCode,
    inner: &CssCode,
    block: &CssCode,
    graph: &PermGraph,
) -> Result<(CssCode, AelMeta)> {
    if graph.n_in() != inner.num_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "graph degree {} differs from inner length {}",
            graph.n_in(),
            inner.num_qubits()
        )));
    }
    if block.k() != graph.n_in() {
        return Err(Error::DimensionMismatch(format!(
            "block code carries {} logical qubits but each block holds {}",
            block.k(),
            graph.n_in()
        )));
    }
    let encoded = concatenate_css(outer, inner, graph.b())?;
    let perm = graph.permutation();
    let mut inverse = vec![0usize; perm.len()];
    for (from, &to) in perm.iter().enumerate() {
        inverse[to] = from;
    }
    let permuted = CssCode::new(
        encoded.h_x().select_columns(&inverse),
        encoded.h_z().select_columns(&inverse),
    )?;
    let out = concatenate_css(&permuted, block, graph.b())?;
    if out.k() != outer.k() {
        return Err(Error::Invariant(format!(
            "amplification moved the logical count from {} to {}",
            outer.k(),
            out.k()
        )));
    }
    let w_out = locality(outer);
    let w_final = locality(&out);
    let meta = AelMeta {
        blocks: graph.b(),
        n_in: graph.n_in(),
        n_block: block.num_qubits(),
        w_out,
        w_final,
        weight_ratio: w_final as f64 / (w_out * graph.n_in() * graph.n_in()) as f64,
    };
    Ok((out, meta))
}
