//! Command line front end: generate zoo codes, measure code files, apply
//! single transforms, run configured pipelines, and render saved reports.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::codefile::{self, CodeFile};
use crate::css::measure;
use crate::oracle::DEFAULT_BUDGET;
use crate::pipeline::{run_pipeline, PipelineConfig, PipelineStep};
use crate::report::{render_table, to_json, TransformReport};
use crate::soundamp::Side;
use crate::weightred::HeightStrategy;
use crate::zoo::{cross_code, hypergraph_product, repetition_pcm, surface_code, toric_code};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "qltc",
    about = "CSS code transformation toolkit: weight reduction, balancing, \
             soundness and distance amplification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    /// Toric code of linear size L.
    Toric,
    /// Surface code of distance d (hypergraph product of repetitions).
    Surface,
    /// Hypergraph product of two length-t repetition codes.
    Hgp,
    /// Cross construction over the length-t repetition matrix.
    Cross,
}

#[derive(Args)]
struct MeasureFlags {
    /// Oracle enumeration exponent cap (2^budget steps).
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u32,
    /// Skip distance oracles.
    #[arg(long)]
    no_distances: bool,
    /// Measure classical soundness of both check matrices.
    #[arg(long)]
    soundness: bool,
}

impl MeasureFlags {
    fn options(&self) -> crate::css::MeasureOptions {
        crate::css::MeasureOptions {
            distances: !self.no_distances,
            soundness: self.soundness,
            budget: self.budget,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Construct a zoo code and write it as a code file.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        /// Family size parameter (L, d, or t).
        #[arg(long)]
        size: usize,
        /// Output code file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure a code file and print its parameter table.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        measure: MeasureFlags,
        /// Load the file even if its stabilisers do not commute.
        #[arg(long)]
        force: bool,
    },
    /// Apply one transform to a code file.
    Transform {
        file: PathBuf,
        /// Operation: copy, gauge, thicken, heights, cone, reduce-cone,
        /// weight-reduce, balance, ddb, soundamp-round, soundamp, ael.
        #[arg(long)]
        op: String,
        /// Thickening depth (thicken).
        #[arg(long)]
        l: Option<usize>,
        /// Stage-three depth override (weight-reduce).
        #[arg(long)]
        l1: Option<usize>,
        /// Cone thickening depth override (reduce-cone, weight-reduce).
        #[arg(long)]
        l2: Option<usize>,
        /// Repetition length (balance, ddb).
        #[arg(long)]
        t: Option<usize>,
        /// Stabiliser side receiving new checks (soundamp ops).
        #[arg(long)]
        side: Option<Side>,
        /// Soundness/weight trade-off in (0,1) (soundamp ops).
        #[arg(long)]
        alpha: Option<f64>,
        /// Target soundness "p/q" (soundamp).
        #[arg(long)]
        target: Option<String>,
        /// Pseudorandomness slack (ael).
        #[arg(long)]
        eps: Option<f64>,
        /// Inner code file (ael).
        #[arg(long)]
        inner: Option<PathBuf>,
        /// Block code file (ael).
        #[arg(long)]
        block: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        measure: MeasureFlags,
        #[arg(long)]
        force: bool,
        /// Output code file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the step reports as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run a JSON-configured pipeline over a code file.
    Pipeline {
        file: PathBuf,
        /// Pipeline configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Override the configured oracle budget.
        #[arg(long)]
        budget: Option<u32>,
        /// Override the configured ledger-constants file.
        #[arg(long)]
        ledger_constants: Option<PathBuf>,
        #[arg(long)]
        force: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check that a code file parses and its stabilisers commute.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        measure: MeasureFlags,
    },
    /// Render a saved JSON report as a table.
    Report {
        /// Report JSON written by transform or pipeline.
        from: PathBuf,
    },
}

fn generate(family: Family, size: usize) -> Result<CodeFile> {
    let code = match family {
        Family::Toric => toric_code(size)?,
        Family::Surface => surface_code(size)?,
        Family::Hgp => {
            let h = repetition_pcm(size)?;
            hypergraph_product(&h, &h)?
        }
        Family::Cross => cross_code(&repetition_pcm(size)?)?,
    };
    let mut file = CodeFile::new(code);
    file.set_meta(
        "generate",
        &serde_json::json!({"family": format!("{family:?}").to_lowercase(), "size": size}),
    )?;
    Ok(file)
}

fn transform_step(cmd: &Command) -> Result<PipelineStep> {
    let Command::Transform {
        op,
        l,
        l1,
        l2,
        t,
        side,
        alpha,
        target,
        eps,
        inner,
        block,
        seed,
        ..
    } = cmd
    else {
        unreachable!("transform_step on a non-transform command");
    };
    let missing = |what: &str| Error::InvalidParameter(format!("--op {op} needs --{what}"));
    let step = match op.as_str() {
        "copy" => PipelineStep::Copy,
        "gauge" => PipelineStep::Gauge,
        "thicken" => PipelineStep::Thicken {
            l: l.ok_or_else(|| missing("l"))?,
        },
        "heights" => PipelineStep::Heights {
            strategy: match seed {
                Some(s) => HeightStrategy::Random(*s),
                None => HeightStrategy::Greedy,
            },
        },
        "cone" => PipelineStep::Cone,
        "reduce-cone" => PipelineStep::ReduceCone { l2: *l2 },
        "weight-reduce" => PipelineStep::WeightReduce { l1: *l1, l2: *l2 },
        "balance" => PipelineStep::Balance {
            t: t.ok_or_else(|| missing("t"))?,
        },
        "ddb" => PipelineStep::Ddb {
            t: t.ok_or_else(|| missing("t"))?,
        },
        "soundamp-round" => PipelineStep::SoundampRound {
            side: side.ok_or_else(|| missing("side"))?,
            alpha: alpha.ok_or_else(|| missing("alpha"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
        },
        "soundamp" => PipelineStep::Soundamp {
            side: side.ok_or_else(|| missing("side"))?,
            alpha: alpha.ok_or_else(|| missing("alpha"))?,
            target: target.clone().ok_or_else(|| missing("target"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
        },
        "ael" => PipelineStep::Ael {
            inner: path_string(inner.as_deref().ok_or_else(|| missing("inner"))?),
            block: path_string(block.as_deref().ok_or_else(|| missing("block"))?),
            eps: eps.ok_or_else(|| missing("eps"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
        },
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown transform op '{other}'"
            )))
        }
    };
    Ok(step)
}

fn path_string(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn write_reports(path: Option<&Path>, reports: &[TransformReport]) -> Result<()> {
    if let Some(path) = path {
        std::fs::write(path, to_json(reports)?)?;
    }
    Ok(())
}

/// Exit code for an error per the contract: 2 for usage and parse
/// problems, 3 for oracle budget exhaustion, 1 for violated invariants.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidParameter(_) | Error::Io(_) => 2,
        Error::BudgetExceeded { .. } => 3,
        _ => 1,
    }
}

fn finish_run(
    run: crate::pipeline::PipelineRun,
    out: Option<&Path>,
    report_path: Option<&Path>,
) -> Result<i32> {
    write_reports(report_path, &run.reports)?;
    print!("{}", render_table(&run.reports));
    if let Some(e) = run.aborted {
        eprintln!("pipeline aborted: {e}");
        return Ok(exit_code(&e));
    }
    if let Some(path) = out {
        codefile::write(path, &run.output)?;
    }
    Ok(if run.passed() { 0 } else { 1 })
}

fn dispatch(cli: Cli) -> Result<i32> {
    match &cli.command {
        Command::Generate { family, size, out } => {
            let file = generate(*family, *size)?;
            codefile::write(out, &file)?;
            println!(
                "wrote {} (n = {}, k = {})",
                out.display(),
                file.code.num_qubits(),
                file.code.k()
            );
            Ok(0)
        }
        Command::Analyze {
            file,
            measure: flags,
            force,
        } => {
            let loaded = codefile::read(file, *force)?;
            let params = measure(&loaded.code, &flags.options())?;
            let report = TransformReport::new("input", serde_json::json!({}), params);
            print!("{}", render_table(&[report]));
            Ok(0)
        }
        Command::Transform {
            file,
            measure: flags,
            force,
            out,
            report,
            ..
        } => {
            let step = transform_step(&cli.command)?;
            let cfg = PipelineConfig {
                steps: vec![step],
                budget: flags.budget,
                distances: !flags.no_distances,
                soundness: flags.soundness,
                ..PipelineConfig::default()
            };
            let input = codefile::read(file, *force)?;
            finish_run(run_pipeline(&cfg, input), out.as_deref(), report.as_deref())
        }
        Command::Pipeline {
            file,
            config,
            budget,
            ledger_constants,
            force,
            out,
            report,
        } => {
            let mut cfg = PipelineConfig::from_json(&std::fs::read_to_string(config)?)?;
            if let Some(b) = budget {
                cfg.budget = *b;
            }
            if let Some(path) = ledger_constants {
                cfg.ledger_constants = Some(path_string(path));
            }
            let input = codefile::read(file, *force)?;
            finish_run(run_pipeline(&cfg, input), out.as_deref(), report.as_deref())
        }
        Command::Verify {
            file,
            measure: flags,
        } => {
            let loaded = codefile::read(file, false)?;
            let params = measure(&loaded.code, &flags.options())?;
            println!(
                "ok: n = {}, k = {}, {} X checks, {} Z checks",
                params.n, params.k, params.n_x, params.n_z
            );
            Ok(0)
        }
        Command::Report { from } => {
            let reports = crate::report::from_json(&std::fs::read_to_string(from)?)?;
            print!("{}", render_table(&reports));
            Ok(0)
        }
    }
}

/// Entry point behind the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful exits; real usage errors are 2.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
