//! Batch pipeline: an ordered list of transform steps applied to a code
//! file, each producing a measured report with its invariant checks.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::balance::{distance_balance, double_distance_balance, ClassicalCode};
use crate::codefile::{self, CodeFile};
use crate::css::{measure, CodeParams, CssCode, MeasureOptions, Metric};
use crate::distamp::{ael_amplify, ael_distance_floor, sample_pseudorandom_graph,
    verify_pseudorandom, MAX_VERIFIABLE_BLOCKS};
use crate::oracle::{Rational, DEFAULT_BUDGET};
use crate::report::TransformReport;
use crate::soundamp::{amplification_round, amplify_with_budget, SaRoundConfig, Side};
use crate::weightred::{
    choose_heights, cone, copy_qubits, gauge_x_stabs, measure_wr_stages, parameter_ledger,
    reduce_cone, thicken, weight_reduce_full, HeightStrategy, LedgerConstants, ReduceOptions,
    RowStatus, ThickenMeta,
};
use crate::zoo::repetition_pcm;
use crate::{Error, Result};

/// Metadata key carrying the thickening layout between a `thicken` step
/// and a later `heights` step.
const THICKEN_META: &str = "thicken";

/// One transform in a pipeline. Operations that draw randomness carry
/// their seed explicitly; there are no implicit defaults for them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PipelineStep {
    Copy,
    Gauge,
    Thicken {
        l: usize,
    },
    Heights {
        #[serde(default)]
        strategy: HeightStrategy,
    },
    Cone,
    ReduceCone {
        #[serde(default)]
        l2: Option<usize>,
    },
    WeightReduce {
        #[serde(default)]
        l1: Option<usize>,
        #[serde(default)]
        l2: Option<usize>,
    },
    Balance {
        t: usize,
    },
    Ddb {
        t: usize,
    },
    SoundampRound {
        side: Side,
        alpha: f64,
        seed: u64,
    },
    Soundamp {
        side: Side,
        alpha: f64,
        /// Soundness to reach, as "p/q".
        target: String,
        seed: u64,
    },
    Ael {
        /// Code file paths for the inner and block codes.
        inner: String,
        block: String,
        eps: f64,
        seed: u64,
    },
}

impl PipelineStep {
    pub fn name(&self) -> &'static str {
        match self {
            PipelineStep::Copy => "copy",
            PipelineStep::Gauge => "gauge",
            PipelineStep::Thicken { .. } => "thicken",
            PipelineStep::Heights { .. } => "heights",
            PipelineStep::Cone => "cone",
            PipelineStep::ReduceCone { .. } => "reduce-cone",
            PipelineStep::WeightReduce { .. } => "weight-reduce",
            PipelineStep::Balance { .. } => "balance",
            PipelineStep::Ddb { .. } => "ddb",
            PipelineStep::SoundampRound { .. } => "soundamp-round",
            PipelineStep::Soundamp { .. } => "soundamp",
            PipelineStep::Ael { .. } => "ael",
        }
    }
}

fn default_budget() -> u32 {
    DEFAULT_BUDGET
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub steps: Vec<PipelineStep>,
    /// Oracle enumeration exponent cap for every measurement.
    #[serde(default = "default_budget")]
    pub budget: u32,
    #[serde(default = "default_true")]
    pub distances: bool,
    #[serde(default)]
    pub soundness: bool,
    /// Evaluate the parameter ledger after weight-reduce steps.
    #[serde(default)]
    pub ledger: bool,
    /// Fitted-constant overrides for the ledger, as a JSON file path;
    /// absent means the built-in fitted set.
    #[serde(default)]
    pub ledger_constants: Option<String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            steps: Vec::new(),
            budget: DEFAULT_BUDGET,
            distances: true,
            soundness: false,
            ledger: false,
            ledger_constants: None,
        }
    }
}

impl PipelineConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: 0,
            msg: format!("bad pipeline config: {e}"),
        })
    }

    fn measure_options(&self) -> MeasureOptions {
        MeasureOptions {
            distances: self.distances,
            soundness: self.soundness,
            budget: self.budget,
        }
    }

    fn constants(&self) -> Result<LedgerConstants> {
        match &self.ledger_constants {
            None => Ok(LedgerConstants::fitted()),
            Some(path) => LedgerConstants::from_json(&std::fs::read_to_string(path)?),
        }
    }
}

/// Pipeline result: reports cover the input measurement and every step
/// that ran; `aborted` holds the error that stopped a failed run.
#[derive(Debug)]
pub struct PipelineRun {
    pub output: CodeFile,
    pub reports: Vec<TransformReport>,
    pub aborted: Option<Error>,
}

impl PipelineRun {
    /// True when every step ran and every check in every report held.
    pub fn passed(&self) -> bool {
        self.aborted.is_none() && self.reports.iter().all(|r| r.passed())
    }
}

/// Both distances exact, or nothing to compare at this budget.
fn exact_pair(a: &Metric<usize>, b: &Metric<usize>) -> Option<(usize, usize)> {
    Some((*a.exact()?, *b.exact()?))
}

fn locality(p: &CodeParams) -> usize {
    p.w_x.max(p.w_z).max(p.q_x).max(p.q_z)
}

/// Smallest exact distance, for relative-distance formulas.
fn exact_min_distance(p: &CodeParams) -> Option<usize> {
    Some((*p.d_x.exact()?).min(*p.d_z.exact()?))
}

struct StepContext<'a> {
    prev: &'a CodeParams,
}

impl StepContext<'_> {
    fn check_k(&self, report: &mut TransformReport) {
        let k = report.measured.k;
        report.check(
            "dimension preserved",
            k == self.prev.k,
            format!("k {} -> {}", self.prev.k, k),
        );
    }

    fn check_valid(&self, report: &mut TransformReport, code: &CssCode) {
        let v = code.validate();
        report.check(
            "stabilisers commute",
            v.is_valid(),
            format!("{} anticommuting pairs", v.anticommuting.len()),
        );
    }
}

fn check_distance_unchanged(
    report: &mut TransformReport,
    name: &str,
    got: &Metric<usize>,
    before: &Metric<usize>,
) {
    if let Some((new, old)) = exact_pair(got, before) {
        report.check(name, new == old, format!("{new} vs {old}"));
    }
}

fn apply_step(
    step: &PipelineStep,
    state: &mut CodeFile,
    cfg: &PipelineConfig,
    prev: &CodeParams,
) -> Result<TransformReport> {
    let opts = cfg.measure_options();
    let ctx = StepContext { prev };
    let mut report = match step {
        PipelineStep::Copy => {
            let (out, meta) = copy_qubits(&state.code)?;
            let measured = measure(&out, &opts)?;
            let mut report = TransformReport::new("copy", json!({}), measured);
            let q_x = prev.q_x.max(1);
            report.check(
                "length multiplies by q_x",
                report.measured.n == prev.n * q_x,
                format!("n {} vs {}*{q_x}", report.measured.n, prev.n),
            );
            report.check(
                "z weight multiplies by q_x",
                report.measured.w_z == prev.w_z * q_x,
                format!("w_z {} vs {}*{q_x}", report.measured.w_z, prev.w_z),
            );
            report.check(
                "x degree at most 3",
                report.measured.q_x <= 3,
                format!("q_x = {}", report.measured.q_x),
            );
            let d_x = report.measured.d_x.clone();
            check_distance_unchanged(&mut report, "d_x unchanged", &d_x, &prev.d_x);
            if let Some((d_new, d_old)) = exact_pair(&report.measured.d_z, &prev.d_z) {
                report.check(
                    "d_z multiplies by q_x",
                    d_new == d_old * q_x,
                    format!("d_z {d_new} vs {d_old}*{q_x}"),
                );
            }
            debug_assert_eq!(meta.num_qubits(), report.measured.n);
            state.code = out;
            report
        }
        PipelineStep::Gauge => {
            let (out, meta) = gauge_x_stabs(&state.code)?;
            let measured = measure(&out, &opts)?;
            let mut report =
                TransformReport::new("gauge", json!({"split": meta.gauged.len()}), measured);
            report.check(
                "x weight at most 3",
                report.measured.w_x <= 3,
                format!("w_x = {}", report.measured.w_x),
            );
            state.code = out;
            report
        }
        PipelineStep::Thicken { l } => {
            let (out, meta) = thicken(&state.code, *l)?;
            let measured = measure(&out, &opts)?;
            let mut report = TransformReport::new("thicken", json!({"l": l}), measured);
            report.check(
                "sizes match the layout",
                report.measured.n == meta.num_qubits()
                    && report.measured.n_x == meta.num_x_stabs()
                    && report.measured.n_z == meta.num_z_stabs(),
                format!(
                    "n/n_x/n_z = {}/{}/{}",
                    report.measured.n, report.measured.n_x, report.measured.n_z
                ),
            );
            if let Some((d_new, d_old)) = exact_pair(&report.measured.d_x, &prev.d_x) {
                report.check(
                    "d_x multiplies by l",
                    d_new == d_old * l,
                    format!("d_x {d_new} vs {d_old}*{l}"),
                );
            }
            if let Some((d_new, d_old)) = exact_pair(&report.measured.d_z, &prev.d_z) {
                report.check("d_z unchanged", d_new == d_old, format!("d_z {d_new} vs {d_old}"));
            }
            state.code = out;
            state.set_meta(THICKEN_META, &meta)?;
            report
        }
        PipelineStep::Heights { strategy } => {
            let meta: ThickenMeta = state.get_meta(THICKEN_META)?.ok_or_else(|| {
                Error::InvalidParameter(
                    "heights needs a thickened input (no thicken metadata present)".into(),
                )
            })?;
            let (out, heights) = choose_heights(&state.code, &meta, strategy)?;
            let measured = measure(&out, &opts)?;
            let mut report =
                TransformReport::new("heights", json!({"heights": heights}), measured);
            report.check(
                "z row space unchanged",
                out.h_z().row_space_equal(state.code.h_z()),
                "kept rows plus chains span the original Z space",
            );
            report.check(
                "length unchanged",
                report.measured.n == prev.n,
                format!("n {} vs {}", report.measured.n, prev.n),
            );
            state.code = out;
            state.meta.remove(THICKEN_META);
            report
        }
        PipelineStep::Cone => {
            let (out, meta) = cone(&state.code)?;
            let measured = measure(&out, &opts)?;
            let mut report = TransformReport::new(
                "cone",
                json!({"discs": meta.discs.len()}),
                measured,
            );
            report.check(
                "z weight at most q_x + 1",
                report.measured.w_z <= prev.q_x + 1,
                format!("w_z {} vs q_x {} + 1", report.measured.w_z, prev.q_x),
            );
            if let Some((d_new, d_old)) = exact_pair(&report.measured.d_x, &prev.d_x) {
                report.check(
                    "d_x does not drop",
                    d_new >= d_old,
                    format!("d_x {d_new} vs {d_old}"),
                );
            }
            state.code = out;
            report
        }
        PipelineStep::ReduceCone { l2 } => {
            let (out, meta) = reduce_cone(&state.code, *l2)?;
            let measured = measure(&out, &opts)?;
            let mut report = TransformReport::new(
                "reduce-cone",
                json!({"l2": meta.l2, "chords": meta.total_chords}),
                measured,
            );
            report.check(
                "z weight at most q_x + 4",
                report.measured.w_z <= prev.q_x + 4,
                format!("w_z {} vs q_x {} + 4", report.measured.w_z, prev.q_x),
            );
            state.code = out;
            report
        }
        PipelineStep::WeightReduce { l1, l2 } => {
            let red = weight_reduce_full(
                &state.code,
                &ReduceOptions {
                    l1: *l1,
                    l2: *l2,
                    heights: HeightStrategy::Greedy,
                },
            )?;
            let measured = measure(&red.code, &opts)?;
            let stages: Vec<serde_json::Value> = red
                .stages
                .iter()
                .map(|s| json!({"stage": s.label, "n": s.sizes.n, "locality": s.locality()}))
                .collect();
            let mut report = TransformReport::new(
                "weight-reduce",
                json!({"l1": red.l1, "l2": red.reduce.l2, "stages": stages}),
                measured,
            );
            let loc = locality(&report.measured);
            report.check(
                "constant locality reached",
                loc <= 9,
                format!("locality = {loc}"),
            );
            if cfg.ledger {
                let constants = cfg.constants()?;
                let params = measure_wr_stages(&state.code, &red, cfg.budget)?;
                let rows = parameter_ledger(&params, &constants);
                let mut pass = 0usize;
                let mut skipped = 0usize;
                let mut unevaluated = 0usize;
                for row in &rows {
                    match &row.status {
                        RowStatus::Pass => pass += 1,
                        RowStatus::Skipped { .. } => skipped += 1,
                        RowStatus::Unevaluated { .. } => unevaluated += 1,
                        RowStatus::Fail => report.check(
                            &format!("ledger {} {}", row.table, row.relation),
                            false,
                            format!("measured {} vs {}", row.measured, row.expected),
                        ),
                    }
                }
                report.check(
                    "ledger rows hold",
                    true,
                    format!("{pass} pass, {skipped} over budget, {unevaluated} unevaluated"),
                );
            }
            state.code = red.code;
            report
        }
        PipelineStep::Balance { t } => {
            let classical = ClassicalCode::new(repetition_pcm(*t)?);
            let dim = classical.dim();
            let (out, meta) = distance_balance(&state.code, &classical)?;
            let measured = measure(&out, &opts)?;
            let mut report = TransformReport::new("balance", json!({"t": t}), measured);
            report.check(
                "dimension multiplies by the classical dimension",
                report.measured.k == prev.k * dim,
                format!("k {} vs {}*{dim}", report.measured.k, prev.k),
            );
            debug_assert_eq!(meta.num_qubits(), report.measured.n);
            state.code = out;
            report
        }
        PipelineStep::Ddb { t } => {
            let classical = ClassicalCode::new(repetition_pcm(*t)?);
            let dim = classical.dim();
            let (out, _, _) = double_distance_balance(&state.code, &classical)?;
            let measured = measure(&out, &opts)?;
            let mut report = TransformReport::new("ddb", json!({"t": t}), measured);
            report.check(
                "dimension multiplies by the squared classical dimension",
                report.measured.k == prev.k * dim * dim,
                format!("k {} vs {}*{dim}^2", report.measured.k, prev.k),
            );
            state.code = out;
            report
        }
        PipelineStep::SoundampRound { side, alpha, seed } => {
            let round_cfg = SaRoundConfig {
                alpha: *alpha,
                rho: None,
                budget: cfg.budget,
            };
            let (out, meta) = amplification_round(&state.code, *side, &round_cfg, *seed)?;
            let measured = measure(&out, &opts)?;
            let mut report = TransformReport::new(
                "soundamp-round",
                serde_json::to_value(&meta)
                    .map_err(|e| Error::InvalidParameter(format!("round meta: {e}")))?,
                measured,
            );
            let (old_h, new_h) = match side {
                Side::X => (state.code.h_x(), out.h_x()),
                Side::Z => (state.code.h_z(), out.h_z()),
            };
            report.check(
                "row space unchanged",
                new_h.row_space_equal(old_h),
                "appended checks are sums of existing ones",
            );
            report.check(
                "growth within the group-sum bound",
                meta.added == meta.group_sum()
                    && meta.groups.iter().all(|g| g.new_rows <= g.m),
                format!("added {} rows across {} groups", meta.added, meta.groups.len()),
            );
            let d_x = report.measured.d_x.clone();
            check_distance_unchanged(&mut report, "d_x unchanged", &d_x, &prev.d_x);
            let d_z = report.measured.d_z.clone();
            check_distance_unchanged(&mut report, "d_z unchanged", &d_z, &prev.d_z);
            state.code = out;
            report
        }
        PipelineStep::Soundamp {
            side,
            alpha,
            target,
            seed,
        } => {
            let target: Rational = target.parse()?;
            let outcome = amplify_with_budget(
                &state.code,
                *side,
                &target,
                *alpha,
                *seed,
                cfg.budget,
                8,
            )?;
            let measured = measure(&outcome.code, &opts)?;
            let trajectory: Vec<String> =
                outcome.trajectory.iter().map(|r| r.to_string()).collect();
            let mut report = TransformReport::new(
                "soundamp",
                json!({
                    "alpha": alpha,
                    "target": target.to_string(),
                    "rounds": outcome.rounds,
                    "trajectory": trajectory,
                    "weight_exponent": outcome.weight_exponent,
                }),
                measured,
            );
            report.check(
                "target soundness reached",
                outcome.reached_target,
                format!(
                    "trajectory {} in {} rounds{}",
                    outcome
                        .trajectory
                        .iter()
                        .map(|r| r.to_string())
                        .collect::<Vec<_>>()
                        .join(" -> "),
                    outcome.rounds,
                    if outcome.stalled { " (stalled)" } else { "" },
                ),
            );
            let (old_h, new_h) = match side {
                Side::X => (state.code.h_x(), outcome.code.h_x()),
                Side::Z => (state.code.h_z(), outcome.code.h_z()),
            };
            report.check(
                "row space unchanged",
                new_h.row_space_equal(old_h),
                "every round appends sums of existing checks",
            );
            state.code = outcome.code;
            report
        }
        PipelineStep::Ael {
            inner,
            block,
            eps,
            seed,
        } => {
            let inner = codefile::read(Path::new(inner), false)?;
            let block = codefile::read(Path::new(block), false)?;
            let k_in = inner.code.k();
            if k_in == 0 || !state.code.num_qubits().is_multiple_of(k_in) {
                return Err(Error::DimensionMismatch(format!(
                    "inner dimension {k_in} does not divide the {} outer qubits",
                    state.code.num_qubits()
                )));
            }
            let b = state.code.num_qubits() / k_in;
            if b > MAX_VERIFIABLE_BLOCKS {
                return Err(Error::BudgetExceeded {
                    needed: 2 * b as u32,
                    budget: 2 * MAX_VERIFIABLE_BLOCKS as u32,
                });
            }
            let graph =
                sample_pseudorandom_graph(b, inner.code.num_qubits(), *eps, *seed)?;
            let graph_report = verify_pseudorandom(&graph);
            let (out, meta) = ael_amplify(&state.code, &inner.code, &block.code, &graph)?;
            let measured = measure(&out, &opts)?;
            let mut report = TransformReport::new(
                "ael",
                json!({
                    "blocks": meta.blocks,
                    "eps": eps,
                    "eps_star": graph_report.eps_star,
                    "weight_ratio": meta.weight_ratio,
                }),
                measured,
            );
            report.check(
                "length is blocks times the block length",
                report.measured.n == meta.blocks * meta.n_block,
                format!("n = {}", report.measured.n),
            );
            let inner_params = measure(&inner.code, &opts)?;
            let block_params = measure(&block.code, &opts)?;
            let floors = (
                exact_min_distance(prev),
                exact_min_distance(&inner_params),
                exact_min_distance(&block_params),
                exact_min_distance(&report.measured),
            );
            if let (Some(d_out), Some(d_in), Some(d_block), Some(d_new)) = floors {
                let floor = ael_distance_floor(
                    d_block as f64 / block_params.n as f64,
                    d_in as f64 / inner_params.n as f64,
                    d_out as f64 / prev.n as f64,
                    graph_report.eps_star,
                );
                report.check(
                    "distance above the amplification floor",
                    d_new as f64 >= floor * report.measured.n as f64,
                    format!("d {} vs floor {:.4}", d_new, floor * report.measured.n as f64),
                );
            }
            state.code = out;
            report
        }
    };
    ctx.check_valid(&mut report, &state.code);
    match step {
        PipelineStep::Balance { .. } | PipelineStep::Ddb { .. } => {}
        _ => ctx.check_k(&mut report),
    }
    Ok(report)
}

/// Runs the configured steps in order. A step error stops the run; the
/// reports of completed steps are kept alongside the error.
pub fn run_pipeline(cfg: &PipelineConfig, input: CodeFile) -> PipelineRun {
    let mut state = input;
    let mut reports = Vec::new();
    let opts = cfg.measure_options();
    let initial = match measure(&state.code, &opts) {
        Ok(p) => p,
        Err(e) => {
            return PipelineRun {
                output: state,
                reports,
                aborted: Some(e),
            }
        }
    };
    reports.push(TransformReport::new("input", json!({}), initial));
    for step in &cfg.steps {
        let prev = reports.last().expect("input report").measured.clone();
        match apply_step(step, &mut state, cfg, &prev) {
            Ok(report) => reports.push(report),
            Err(e) => {
                return PipelineRun {
                    output: state,
                    reports,
                    aborted: Some(e),
                }
            }
        }
    }
    PipelineRun {
        output: state,
        reports,
        aborted: None,
    }
}
