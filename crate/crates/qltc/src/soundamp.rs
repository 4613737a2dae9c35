//! Soundness amplification by appending grouped sums of stabilisers.
//!
//! Each round leaves the stabiliser row space untouched, so n, k and both
//! distances are invariant; only the check count and locality change. The
//! sums are routed through randomly sampled left-regular bipartite graphs
//! whose lossless expansion guarantees that sparsely violated words stay
//! visibly violated among the new checks.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::css::CssCode;
use crate::gf2::{BitMatrix, BitVector};
use crate::oracle::{brute_soundness, Rational, DEFAULT_BUDGET};
use crate::{Error, Result};

/// Resampling attempts before sampling gives up.
pub const MAX_SAMPLE_ATTEMPTS: usize = 64;

/// Subset-enumeration ceiling for exhaustive verification.
pub const DEFAULT_SUBSET_BUDGET: u64 = 1 << 21;

/// Rounds applied before [`amplify_to_constant`] stops short of target.
pub const DEFAULT_ROUND_CAP: usize = 8;

fn mix(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GROUP_SALT: u64 = 0x67726F7570;
const ROUND_SALT: u64 = 0x726F756E64;

/// Left degree and largest verifiable subset size for a sampled expander.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpanderParams {
    pub d: usize,
    pub k_max: usize,
}

impl ExpanderParams {
    /// A graph with `k_max = 0` carries no expansion guarantee at all.
    pub fn is_feasible(&self) -> bool {
        self.k_max >= 1
    }
}

/// Left degree D = ceil((1/eps) log2(8 e^2 n/m)) and the matching subset
/// ceiling K = floor((1/2e) (eps/D)^(eps D/(eps D - 1)) m). Sampling at
/// these parameters succeeds with probability above one half.
pub fn expander_params(n_left: usize, m_right: usize, eps: f64) -> Result<ExpanderParams> {
    if n_left == 0 || m_right == 0 {
        return Err(Error::InvalidParameter(
            "expander needs at least one vertex on each side".into(),
        ));
    }
    if m_right > n_left {
        return Err(Error::InvalidParameter(format!(
            "right side larger than left: {m_right} > {n_left}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "expansion slack must lie strictly between 0 and 1, got {eps}"
        )));
    }
    let e = std::f64::consts::E;
    let ratio = n_left as f64 / m_right as f64;
    let d = ((1.0 / eps) * (8.0 * e * e * ratio).log2()).ceil() as usize;
    // eps * d >= log2(8 e^2) > 1, so the exponent below is finite.
    let ed = eps * d as f64;
    let expo = ed / (ed - 1.0);
    let k_raw = (eps / d as f64).powf(expo) * m_right as f64 / (2.0 * e);
    Ok(ExpanderParams {
        d,
        k_max: k_raw.floor() as usize,
    })
}

/// D-left-regular bipartite multigraph; parallel edges are kept because
/// stabiliser sums cancel over F2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    left_degree: usize,
    /// Right endpoints of each left vertex's half-edges, sorted, repeats kept.
    neighbours: Vec<Vec<usize>>,
    seed: u64,
}

impl BipartiteGraph {
    pub fn from_neighbours(right: usize, neighbours: Vec<Vec<usize>>, seed: u64) -> Result<Self> {
        if neighbours.is_empty() || right == 0 {
            return Err(Error::InvalidParameter(
                "graph needs at least one vertex on each side".into(),
            ));
        }
        let d = neighbours[0].len();
        if d == 0 {
            return Err(Error::InvalidParameter("left degree must be positive".into()));
        }
        for (v, nb) in neighbours.iter().enumerate() {
            if nb.len() != d {
                return Err(Error::InvalidParameter(format!(
                    "left vertex {v} has degree {} instead of {d}",
                    nb.len()
                )));
            }
            if nb.iter().any(|&w| w >= right) {
                return Err(Error::InvalidParameter(format!(
                    "left vertex {v} has an endpoint beyond {right} right vertices"
                )));
            }
        }
        let mut neighbours = neighbours;
        for nb in &mut neighbours {
            nb.sort_unstable();
        }
        Ok(BipartiteGraph {
            left: neighbours.len(),
            right,
            left_degree: d,
            neighbours,
            seed,
        })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn left_degree(&self) -> usize {
        self.left_degree
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.neighbours[v]
    }

    /// Half-edge counts per right vertex.
    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.right];
        for nb in &self.neighbours {
            for &w in nb {
                deg[w] += 1;
            }
        }
        deg
    }

    pub fn max_right_degree(&self) -> usize {
        self.right_degrees().into_iter().max().unwrap_or(0)
    }

    /// Ceiling cap ceil(left * D / right) that sampling never exceeds.
    pub fn right_degree_cap(&self) -> usize {
        (self.left * self.left_degree).div_ceil(self.right)
    }

    /// Half-edge multiplicity into each right vertex touched by `subset`.
    fn multiplicities(&self, subset: &[usize]) -> BTreeMap<usize, usize> {
        let mut mult = BTreeMap::new();
        for &v in subset {
            for &w in &self.neighbours[v] {
                *mult.entry(w).or_insert(0) += 1;
            }
        }
        mult
    }

    /// Distinct right vertices adjacent to the subset.
    pub fn neighbourhood_size(&self, subset: &[usize]) -> usize {
        self.multiplicities(subset).len()
    }

    /// Right vertices meeting exactly one half-edge from the subset. Only
    /// these are guaranteed to flip when every subset stabiliser flips.
    pub fn unique_neighbour_count(&self, subset: &[usize]) -> usize {
        self.multiplicities(subset)
            .values()
            .filter(|&&m| m == 1)
            .count()
    }
}

/// Uniform half-edge matching: left half-edges meet a fixed right-side
/// degree profile (cap on a prefix, floor on the rest), shuffled once per
/// attempt. Resamples until verification passes whenever `k_max >= 1`.
pub fn sample_lossless_expander(
    n_left: usize,
    m_right: usize,
    eps: f64,
    seed: u64,
) -> Result<BipartiteGraph> {
    let params = expander_params(n_left, m_right, eps)?;
    sample_with_params(n_left, m_right, eps, params, seed)
}

fn sample_with_params(
    n_left: usize,
    m_right: usize,
    eps: f64,
    params: ExpanderParams,
    seed: u64,
) -> Result<BipartiteGraph> {
    let d = params.d;
    let total = n_left * d;
    let floor_deg = total / m_right;
    let n_high = total - floor_deg * m_right;
    let mut slots = Vec::with_capacity(total);
    for w in 0..m_right {
        let deg = if w < n_high { floor_deg + 1 } else { floor_deg };
        slots.extend(std::iter::repeat_n(w, deg));
    }
    debug_assert_eq!(slots.len(), total);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    for _ in 0..MAX_SAMPLE_ATTEMPTS {
        slots.shuffle(&mut rng);
        let neighbours: Vec<Vec<usize>> = slots.chunks(d).map(|c| c.to_vec()).collect();
        let graph = BipartiteGraph::from_neighbours(m_right, neighbours, seed)?;
        if params.k_max == 0 {
            return Ok(graph);
        }
        if verify_lossless(&graph, params.k_max, eps).holds {
            return Ok(graph);
        }
    }
    Err(Error::Infeasible(format!(
        "no lossless expander at ({n_left}, {m_right}, {eps}) within {MAX_SAMPLE_ATTEMPTS} attempts"
    )))
}

/// Subset found during verification, with both neighbour counts and the
/// thresholds they were held against.
#[derive(Clone, Debug)]
pub struct LosslessWitness {
    pub subset: Vec<usize>,
    pub neighbours: usize,
    pub required: f64,
    pub unique_neighbours: usize,
    pub unique_required: f64,
}

#[derive(Clone, Debug)]
pub struct LosslessReport {
    /// Every checked subset S kept |N(S)| >= (1 - eps) |S| D.
    pub holds: bool,
    /// Every checked subset kept its unique-neighbour count at or above
    /// (1 - 2 eps) |S| D.
    pub unique_holds: bool,
    /// False when the subset budget forced sampled spot checks.
    pub exhaustive: bool,
    pub checked: u64,
    /// Minimiser of |N(S)| / (|S| D) over the checked subsets.
    pub worst: Option<LosslessWitness>,
}

/// Exhaustive expansion check over all left subsets of size at most
/// `k_max` under [`DEFAULT_SUBSET_BUDGET`].
pub fn verify_lossless(graph: &BipartiteGraph, k_max: usize, eps: f64) -> LosslessReport {
    verify_lossless_with_budget(graph, k_max, eps, DEFAULT_SUBSET_BUDGET)
}

fn subset_count(n: usize, k_max: usize) -> u128 {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for k in 1..=k_max.min(n) {
        binom = binom.saturating_mul((n - k + 1) as u128) / k as u128;
        total = total.saturating_add(binom);
    }
    total
}

/// Falls back to seeded random subsets when the exhaustive enumeration
/// would exceed `budget`; the report is then probabilistic and says so.
pub fn verify_lossless_with_budget(
    graph: &BipartiteGraph,
    k_max: usize,
    eps: f64,
    budget: u64,
) -> LosslessReport {
    let k_max = k_max.min(graph.left);
    let mut report = LosslessReport {
        holds: true,
        unique_holds: true,
        exhaustive: true,
        checked: 0,
        worst: None,
    };
    if k_max == 0 {
        return report;
    }
    let consider = |subset: &[usize], report: &mut LosslessReport| {
        let neighbours = graph.neighbourhood_size(subset);
        let unique = graph.unique_neighbour_count(subset);
        let half_edges = (subset.len() * graph.left_degree) as f64;
        let required = (1.0 - eps) * half_edges;
        let unique_required = (1.0 - 2.0 * eps) * half_edges;
        if (neighbours as f64) < required {
            report.holds = false;
        }
        if (unique as f64) < unique_required {
            report.unique_holds = false;
        }
        report.checked += 1;
        let ratio = neighbours as f64 / half_edges;
        let current = report
            .worst
            .as_ref()
            .map(|w| w.neighbours as f64 / ((w.subset.len() * graph.left_degree) as f64));
        if current.is_none_or(|c| ratio < c) {
            report.worst = Some(LosslessWitness {
                subset: subset.to_vec(),
                neighbours,
                required,
                unique_neighbours: unique,
                unique_required,
            });
        }
    };
    if subset_count(graph.left, k_max) <= budget as u128 {
        for size in 1..=k_max {
            for subset in (0..graph.left).combinations(size) {
                consider(&subset, &mut report);
            }
        }
    } else {
        report.exhaustive = false;
        let mut rng = ChaCha12Rng::seed_from_u64(mix(graph.seed, 0x7665_7269_6679));
        let mut indices: Vec<usize> = (0..graph.left).collect();
        for _ in 0..budget {
            let size = rng.random_range(1..=k_max);
            indices.shuffle(&mut rng);
            let mut subset = indices[..size].to_vec();
            subset.sort_unstable();
            consider(&subset, &mut report);
        }
    }
    report
}

/// Which stabiliser side receives the new checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    X,
    Z,
}

impl Side {
    fn matrix<'a>(&self, code: &'a CssCode) -> &'a BitMatrix {
        match self {
            Side::X => code.h_x(),
            Side::Z => code.h_z(),
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::X => write!(f, "x"),
            Side::Z => write!(f, "z"),
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Side::X),
            "z" => Ok(Side::Z),
            other => Err(Error::InvalidParameter(format!(
                "side must be x or z, got {other}"
            ))),
        }
    }
}

/// One amplification round's knobs. When `rho` is None the round measures
/// the side's soundness with the brute oracle under `budget`.
#[derive(Clone, Debug)]
pub struct SaRoundConfig {
    pub alpha: f64,
    pub rho: Option<Rational>,
    pub budget: u32,
}

impl SaRoundConfig {
    pub fn new(alpha: f64) -> Self {
        SaRoundConfig {
            alpha,
            rho: None,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn with_rho(alpha: f64, rho: Rational) -> Self {
        SaRoundConfig {
            alpha,
            rho: Some(rho),
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Outcome of one group inside a round.
#[derive(Clone, Debug, Serialize)]
pub struct GroupMeta {
    pub index: i64,
    /// Right vertices, hence new checks contributed: round(n_checks / 2^(i alpha)).
    pub m: usize,
    pub eps: f64,
    pub d: usize,
    pub k_max: usize,
    /// Reason this group was not sampled, when it was not.
    pub skipped: Option<String>,
    /// Whether sampled expansion was verified; None when vacuous (k_max = 0).
    pub verified: Option<bool>,
    pub right_degree_cap: usize,
    pub new_rows: usize,
    pub max_new_weight: usize,
}

/// Record of one round: the soundness it was driven by and what each
/// group contributed.
#[derive(Clone, Debug, Serialize)]
pub struct RoundMeta {
    pub side: Side,
    pub alpha: f64,
    pub kappa: f64,
    pub rho: Rational,
    pub rho_measured: bool,
    pub groups: Vec<GroupMeta>,
    /// Total checks appended; 0 means the round was the identity.
    pub added: usize,
}

impl RoundMeta {
    /// Exact growth bound: old count plus the realised per-group sizes.
    pub fn group_sum(&self) -> usize {
        self.groups.iter().map(|g| g.new_rows).sum()
    }
}

/// Group plan for soundness `rho` at trade-off `alpha`: indices i from
/// ceil(kappa log2(1/rho)) to floor(log2(1/rho)) with kappa = (1+alpha)/2,
/// group size round(n_checks / 2^(i alpha)) and slack sqrt(i alpha / 2^(i(1-alpha))).
pub fn group_plan(n_checks: usize, rho: &Rational, alpha: f64) -> Vec<(i64, usize, f64)> {
    let kappa = (1.0 + alpha) / 2.0;
    let level = -rho.to_f64().log2();
    let lo = (kappa * level).ceil() as i64;
    let hi = level.floor() as i64;
    let mut plan = Vec::new();
    if hi < lo {
        return plan;
    }
    for i in lo..=hi {
        let ia = i as f64 * alpha;
        let m = ((n_checks as f64 / ia.exp2()).round() as usize).max(1);
        let eps = (ia / (i as f64 * (1.0 - alpha)).exp2()).sqrt();
        plan.push((i, m, eps));
    }
    plan
}

/// Append, per group and per right vertex of its sampled expander, the F2
/// sum of the adjacent old checks. The row space is unchanged, so k and
/// both distances are too; only check count and locality move.
pub fn amplification_round(
    code: &CssCode,
    side: Side,
    cfg: &SaRoundConfig,
    seed: u64,
) -> Result<(CssCode, RoundMeta)> {
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie strictly between 0 and 1, got {}",
            cfg.alpha
        )));
    }
    let h = side.matrix(code);
    let (rho, rho_measured) = match &cfg.rho {
        Some(r) => (r.clone(), false),
        None => (brute_soundness(h, cfg.budget)?.rho, true),
    };
    if !rho.is_positive() {
        return Err(Error::InvalidParameter(
            "soundness must be positive to plan a round".into(),
        ));
    }
    let kappa = (1.0 + cfg.alpha) / 2.0;
    let n_checks = h.rows();
    let old_weight = h.max_row_weight();
    let mut groups = Vec::new();
    let mut new_rows: Vec<BitVector> = Vec::new();
    for (i, m, eps) in group_plan(n_checks, &rho, cfg.alpha) {
        let mut meta = GroupMeta {
            index: i,
            m,
            eps,
            d: 0,
            k_max: 0,
            skipped: None,
            verified: None,
            right_degree_cap: 0,
            new_rows: 0,
            max_new_weight: 0,
        };
        if i < 1 {
            meta.skipped = Some("group index below 1".into());
            groups.push(meta);
            continue;
        }
        if !(eps > 0.0 && eps < 1.0) {
            meta.skipped = Some(format!("slack {eps} outside (0, 1)"));
            groups.push(meta);
            continue;
        }
        if m > n_checks {
            meta.skipped = Some(format!("{m} right vertices exceed {n_checks} checks"));
            groups.push(meta);
            continue;
        }
        let params = expander_params(n_checks, m, eps)?;
        meta.d = params.d;
        meta.k_max = params.k_max;
        let graph = sample_with_params(n_checks, m, eps, params, mix(seed, GROUP_SALT ^ i as u64))?;
        if params.k_max >= 1 {
            // Sampling already retried until this held.
            meta.verified = Some(true);
        }
        meta.right_degree_cap = graph.right_degree_cap();
        let mut sums = vec![BitVector::zeros(h.cols()); m];
        for v in 0..n_checks {
            let row = h.row(v);
            for &w in graph.neighbours(v) {
                sums[w].xor_assign(&row);
            }
        }
        meta.new_rows = m;
        meta.max_new_weight = sums.iter().map(BitVector::weight).max().unwrap_or(0);
        debug_assert!(meta.max_new_weight <= old_weight * meta.right_degree_cap);
        new_rows.extend(sums);
        groups.push(meta);
    }
    let added = new_rows.len();
    let out = if added == 0 {
        code.clone()
    } else {
        let extension = BitMatrix::from_rows(h.cols(), &new_rows);
        let extended = BitMatrix::vstack(&[h, &extension]);
        if !extended.row_space_equal(h) {
            return Err(Error::Invariant(
                "amplification round moved the stabiliser row space".into(),
            ));
        }
        match side {
            Side::X => CssCode::new(extended, code.h_z().clone())?,
            Side::Z => CssCode::new(code.h_x().clone(), extended)?,
        }
    };
    let meta = RoundMeta {
        side,
        alpha: cfg.alpha,
        kappa,
        rho,
        rho_measured,
        groups,
        added,
    };
    Ok((out, meta))
}

/// Result of iterated amplification.
#[derive(Clone, Debug)]
pub struct AmplifyOutcome {
    pub code: CssCode,
    /// Rounds that actually appended checks.
    pub rounds: usize,
    pub reached_target: bool,
    /// True when a round became the identity while still below target.
    pub stalled: bool,
    /// Measured soundness before each round and after the last.
    pub trajectory: Vec<Rational>,
    pub round_metas: Vec<RoundMeta>,
    /// log_{1/rho_0}(w_final / w_0): realised exponent of the weight
    /// growth against the initial soundness. None when no round ran.
    pub weight_exponent: Option<f64>,
    pub qubit_degree_exponent: Option<f64>,
}

/// Measure, then amplify until the side's soundness reaches `target` or a
/// round cap or fixpoint intervenes.
pub fn amplify_to_constant(
    code: &CssCode,
    side: Side,
    target: &Rational,
    alpha: f64,
    seed: u64,
) -> Result<AmplifyOutcome> {
    amplify_with_budget(code, side, target, alpha, seed, DEFAULT_BUDGET, DEFAULT_ROUND_CAP)
}

pub fn amplify_with_budget(
    code: &CssCode,
    side: Side,
    target: &Rational,
    alpha: f64,
    seed: u64,
    budget: u32,
    round_cap: usize,
) -> Result<AmplifyOutcome> {
    let mut current = code.clone();
    let mut trajectory = Vec::new();
    let mut round_metas: Vec<RoundMeta> = Vec::new();
    let initial_weight = side.matrix(code).max_row_weight();
    let initial_degree = side.matrix(code).max_col_weight();
    let mut reached_target = false;
    let mut stalled = false;
    loop {
        let rho = brute_soundness(side.matrix(&current), budget)?.rho;
        trajectory.push(rho.clone());
        if rho >= *target {
            reached_target = true;
            break;
        }
        if round_metas.len() >= round_cap {
            break;
        }
        let cfg = SaRoundConfig {
            alpha,
            rho: Some(rho),
            budget,
        };
        let round_seed = mix(seed, ROUND_SALT ^ round_metas.len() as u64);
        let (next, meta) = amplification_round(&current, side, &cfg, round_seed)?;
        if meta.added == 0 {
            stalled = true;
            break;
        }
        current = next;
        round_metas.push(meta);
    }
    let rho_0 = trajectory[0].to_f64();
    let scale = (1.0 / rho_0).log2();
    let exponent = |initial: usize, fin: usize| {
        (!round_metas.is_empty() && scale > 0.0 && initial > 0)
            .then(|| (fin as f64 / initial as f64).log2() / scale)
    };
    let weight_exponent = exponent(initial_weight, side.matrix(&current).max_row_weight());
    let qubit_degree_exponent = exponent(initial_degree, side.matrix(&current).max_col_weight());
    Ok(AmplifyOutcome {
        rounds: round_metas.len(),
        reached_target,
        stalled,
        trajectory,
        round_metas,
        weight_exponent,
        qubit_degree_exponent,
        code: current,
    })
}
