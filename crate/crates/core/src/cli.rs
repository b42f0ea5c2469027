//! Command-line front end.
//!
//! Exit codes: 0 woven / verified / no gap found, 1 not woven / refuted /
//! gap found, 2 invalid input, failed hypothesis or precondition, 3
//! numerical failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::frames::{
    frame_bounds, theta_frame_bounds, FrameBounds, FrameConfig, ThetaSide, VectorFrame,
};
use crate::gframes::{theta_gframe_bounds, IndexedFamily};
use crate::io::{self, parse_instance, ParseError};
use crate::theorems::{
    search_gap, specialize_identity, verify_corollary1, verify_remark_equivalence, verify_theorem1,
    GapSearchParams, Instance, Status, TheoremReport,
};
use crate::weaving::{check_woven, sample_woven, WeaveMode, WeaveOptions, WeavePair, DEFAULT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "weavekit",
    version,
    about = "Frame bounds and weaving checks for finite frames and g-frames"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampling and search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Verdict threshold: a family is a frame when its optimal lower bound exceeds this.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = SideArg::Adjoint)]
    theta_side: SideArg,
    /// Maximum number of enumerated selections.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Include per-selection bounds in weaving reports.
    #[arg(long, global = true)]
    full_table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Adjoint,
    Direct,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Def1,
    Def3,
    Gframe,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimal frame bounds of one family of the instance.
    Bounds {
        /// lambda, omega (induced families), lambda[j], omega[j], local_f[j] or local_g[j].
        #[arg(long, default_value = "lambda")]
        frame_of: String,
        /// Θ-frame bounds instead of ordinary frame bounds (ambient families only).
        #[arg(long)]
        theta: bool,
        input: PathBuf,
    },
    /// Optimal Θ-g-frame bounds of Λ and Ω.
    Gbounds { input: PathBuf },
    /// Induced sequences {Λ_j* f_jk} and {Ω_j* g_jk} as frame blocks.
    Induce { input: PathBuf },
    /// Exhaustive (or sampled) weaving check.
    WeaveCheck {
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Check N random selections plus the two constant ones instead of all.
        #[arg(long)]
        sample: Option<usize>,
        input: PathBuf,
    },
    /// g-frame weaving versus outer-partition weaving of the induced sequences.
    VerifyTheorem1 { input: PathBuf },
    /// Outer-partition versus element-wise weaving for singleton inner index sets.
    VerifyRemark { input: PathBuf },
    /// g-frame versus element-wise weaving for orthonormal one-dimensional local bases.
    VerifyCorollary {
        /// Replace Θ by the identity and compare with ordinary frame bounds.
        #[arg(long)]
        identity_theta: bool,
        input: PathBuf,
    },
    /// Random search for instances woven under outer partitions but not element-wise.
    SearchGap {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        inner_sizes: Vec<usize>,
        #[arg(long)]
        trials: usize,
    },
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Input(e.to_string())
    }
}

struct Output {
    json: Value,
    text: String,
    code: i32,
}

fn options(cli: &Cli) -> Result<WeaveOptions, Failure> {
    let mut frame = FrameConfig::default();
    if let Some(tol) = cli.tol {
        if !tol.is_finite() || tol < 0.0 {
            return Err(Failure::Input(format!(
                "--tol must be a finite non-negative number, got {tol}"
            )));
        }
        frame.verdict_eps = tol;
    }
    frame.theta_side = match cli.theta_side {
        SideArg::Adjoint => ThetaSide::Adjoint,
        SideArg::Direct => ThetaSide::Direct,
    };
    if cli.cap == 0 {
        return Err(Failure::Input("--cap must be at least 1".into()));
    }
    Ok(WeaveOptions {
        frame,
        cap: cli.cap,
        full_table: cli.full_table,
    })
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn verdict_code(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    }
}

/// Splits `name[j]` into `("name", Some(j))`.
fn parse_family_ref(s: &str) -> Result<(&str, Option<usize>), Failure> {
    let bad = || Failure::Input(format!("--frame-of: cannot parse {s:?}"));
    match s.split_once('[') {
        None => Ok((s, None)),
        Some((name, rest)) => {
            let idx = rest.strip_suffix(']').ok_or_else(bad)?;
            Ok((name, Some(idx.parse().map_err(|_| bad())?)))
        }
    }
}

fn select_family(inst: &Instance, spec: &str) -> Result<(VectorFrame, bool), Failure> {
    let (name, index) = parse_family_ref(spec)?;
    let out_of_range = |j: usize, n: usize| {
        Failure::Input(format!(
            "--frame-of {spec}: index {j} out of range (n = {n})"
        ))
    };
    let induced_block = |family: IndexedFamily, j: Option<usize>| -> Result<VectorFrame, Failure> {
        match j {
            None => Ok(family.to_frame()),
            Some(j) => {
                let group = family
                    .groups()
                    .get(j)
                    .ok_or_else(|| out_of_range(j, family.outer_count()))?;
                Ok(VectorFrame::new(family.ambient_dim(), group.clone())?)
            }
        }
    };
    match name {
        "lambda" => Ok((induced_block(inst.induced_f(), index)?, true)),
        "omega" => Ok((induced_block(inst.induced_g(), index)?, true)),
        "local_f" | "local_g" => {
            let set = if name == "local_f" {
                inst.local_f()
            } else {
                inst.local_g()
            };
            let j = index.ok_or_else(|| {
                Failure::Input(format!("--frame-of {name} needs an index, e.g. {name}[0]"))
            })?;
            let frame = set
                .frames()
                .get(j)
                .ok_or_else(|| out_of_range(j, set.len()))?;
            Ok((frame.clone(), false))
        }
        _ => Err(Failure::Input(format!(
            "--frame-of: unknown family {name:?} (expected lambda, omega, local_f or local_g)"
        ))),
    }
}

fn theorem_output(report: TheoremReport) -> Output {
    let code = match report.status {
        Status::Verified | Status::Marginal => EXIT_OK,
        Status::Refuted => EXIT_NEGATIVE,
        Status::HypothesesNotMet => EXIT_INPUT,
    };
    Output {
        json: io::theorem_report_value(&report),
        text: io::theorem_report_text(&report),
        code,
    }
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let opts = options(cli)?;
    match &cli.command {
        Command::Bounds {
            frame_of,
            theta,
            input,
        } => {
            let inst = load(input)?;
            let (frame, ambient) = select_family(&inst, frame_of)?;
            let b: FrameBounds = if *theta {
                if !ambient {
                    return Err(Failure::Input(
                        "--theta applies to families in the ambient space only".into(),
                    ));
                }
                theta_frame_bounds(&frame, inst.theta(), &opts.frame)?
            } else {
                frame_bounds(&frame, &opts.frame)?
            };
            Ok(Output {
                json: io::bounds_value(frame_of, &b),
                text: io::bounds_text(frame_of, &b),
                code: verdict_code(b.is_frame),
            })
        }
        Command::Gbounds { input } => {
            let inst = load(input)?;
            let l = theta_gframe_bounds(inst.lambda(), inst.theta(), &opts.frame)?;
            let o = theta_gframe_bounds(inst.omega(), inst.theta(), &opts.frame)?;
            Ok(Output {
                json: json!({ "lambda": io::bounds_value("lambda", &l), "omega": io::bounds_value("omega", &o) }),
                text: format!(
                    "{}{}",
                    io::bounds_text("lambda", &l),
                    io::bounds_text("omega", &o)
                ),
                code: verdict_code(l.is_frame && o.is_frame),
            })
        }
        Command::Induce { input } => {
            let inst = load(input)?;
            let (f, g) = (inst.induced_f(), inst.induced_g());
            Ok(Output {
                json: json!({ "induced_f": io::family_block(&f), "induced_g": io::family_block(&g) }),
                text: format!(
                    "{}{}",
                    io::family_text("induced_f", &f),
                    io::family_text("induced_g", &g)
                ),
                code: EXIT_OK,
            })
        }
        Command::WeaveCheck {
            mode,
            sample,
            input,
        } => {
            let inst = load(input)?;
            let (f, g) = (inst.induced_f(), inst.induced_g());
            let (mode, pair) = match mode {
                ModeArg::Def1 => (WeaveMode::Def1, WeavePair::Families(&f, &g)),
                ModeArg::Def3 => (WeaveMode::Def3, WeavePair::Families(&f, &g)),
                ModeArg::Gframe => (
                    WeaveMode::GFrame,
                    WeavePair::GFrames(inst.lambda(), inst.omega()),
                ),
            };
            let report = match sample {
                Some(count) => sample_woven(pair, inst.theta(), mode, *count, cli.seed, &opts)?,
                None => check_woven(pair, inst.theta(), mode, &opts)?,
            };
            Ok(Output {
                json: io::weaving_report_value(&report),
                text: io::weaving_report_text(&report),
                code: verdict_code(report.woven),
            })
        }
        Command::VerifyTheorem1 { input } => {
            Ok(theorem_output(verify_theorem1(&load(input)?, &opts)?))
        }
        Command::VerifyRemark { input } => Ok(theorem_output(verify_remark_equivalence(
            &load(input)?,
            &opts,
        )?)),
        Command::VerifyCorollary {
            identity_theta,
            input,
        } => {
            let inst = load(input)?;
            let report = if *identity_theta {
                specialize_identity(&inst, &opts)?
            } else {
                verify_corollary1(&inst, &opts)?
            };
            Ok(theorem_output(report))
        }
        Command::SearchGap {
            dim,
            n,
            inner_sizes,
            trials,
        } => {
            let params = GapSearchParams {
                dim: *dim,
                n: *n,
                inner_sizes: inner_sizes.clone(),
                trials: *trials,
                seed: cli.seed,
            };
            let out = search_gap(&params, &opts)?;
            Ok(Output {
                json: io::gap_search_value(&out),
                text: io::gap_search_text(&out),
                code: verdict_code(out.hits.is_empty()),
            })
        }
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli) {
        Ok(o) => {
            let written = if cli.json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&o.json).expect("JSON values serialize")
                )
            } else {
                write!(out, "{}", o.text)
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: writing output: {e}");
                return EXIT_INPUT;
            }
            o.code
        }
        Err(Failure::Input(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INPUT
        }
        Err(Failure::Numerical(m)) => {
            let _ = writeln!(err, "numerical failure: {m}");
            EXIT_NUMERICAL
        }
    }
}
