//! Command-line front end binding all modules, with reproducible
//! config-driven execution.
//!
//! Exit statuses: 0 success, 2 validation error, 3 numerical failure
//! (step underflow / positive-definiteness loss), 4 internal consistency
//! failure. Diagnostics are single machine-parseable lines on stderr.

use std::path::PathBuf;

use clap::Parser;

use crate::algebra::Polynomial;
use crate::census::{self, CensusError, Count};
use crate::config::{Command, ConfigError, OutputFormat, RunConfig, Toledo};
use crate::critical::{self, CriticalError, Enumeration};
use crate::curve::CurveContext;
use crate::flow::{self, heat, FlowError, GroupTag};
use crate::groups::{parse_group, GroupError, GroupName};
use crate::morse::{self, IndexValue, MorseError};
use crate::records;

#[derive(Debug, Parser)]
#[command(
    name = "higgsmorse",
    version,
    about = "Morse theory on Higgs-bundle moduli: strata, indices, censuses, difference series and the lattice metric heat flow"
)]
pub struct Cli {
    /// enumerate | index | assemble | census | dwww | flow | check
    pub command: String,
    /// Flat key-value config file; flags override file values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Group identifier: gl(n), sl(n), sl(n,R), sp(2n,R), u(p,q).
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub genus: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    pub degree: Option<i64>,
    /// Integer Toledo invariant, or `max` / `-max` for ±n(g−1).
    #[arg(long, allow_hyphen_values = true)]
    pub toledo: Option<String>,
    /// Series truncation order (default 2·dim M + 4).
    #[arg(long)]
    pub trunc: Option<usize>,
    /// Stratum parameter ℓ = deg L₁ for the dwww command.
    #[arg(long, allow_negative_numbers = true)]
    pub ell: Option<i64>,
    /// Externally supplied P_t(N₀) polynomial string for assemble.
    #[arg(long)]
    pub n0: Option<String>,
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long)]
    pub rank: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "max-steps")]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv | records | json-lines
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<CriticalError> for CliError {
    fn from(e: CriticalError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<MorseError> for CliError {
    fn from(e: MorseError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::HitchinBaseMismatch(_, _) => CliError::Internal(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<FlowError> for CliError {
    fn from(e: FlowError) -> Self {
        match e {
            FlowError::StepUnderflow { .. } | FlowError::PositivityLoss { .. } => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl Cli {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let file_cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        let flag_cfg = RunConfig {
            command: Some(Command::parse(&self.command)?),
            group: self.group,
            n: self.n,
            p: self.p,
            q: self.q,
            genus: self.genus,
            degree: self.degree,
            toledo: match self.toledo.as_deref() {
                None => None,
                Some("max") => Some(Toledo::Max),
                Some("-max") | Some("min") => Some(Toledo::MinusMax),
                Some(v) => Some(Toledo::Value(v.parse::<i64>().map_err(|e| {
                    CliError::Validation(format!("bad --toledo {v:?}: {e}"))
                })?)),
            },
            trunc: self.trunc,
            ell: self.ell,
            n0: self.n0,
            size: self.size,
            rank: self.rank,
            seed: self.seed,
            tol: self.tol,
            max_steps: self.max_steps,
            out: self.out.map(|p| p.display().to_string()),
            format: match self.format.as_deref() {
                None => None,
                Some(f) => Some(OutputFormat::parse(f)?),
            },
        };
        Ok(file_cfg.merged_with(flag_cfg))
    }
}

fn require<T: Copy>(v: Option<T>, name: &'static str) -> Result<T, CliError> {
    v.ok_or(CliError::Validation(format!(
        "missing required parameter: {name}"
    )))
}

fn resolve_group(cfg: &RunConfig) -> Result<GroupName, CliError> {
    let s = cfg.group.as_deref().ok_or(CliError::Validation(
        "missing required parameter: group".into(),
    ))?;
    Ok(parse_group(s, cfg.n, cfg.p, cfg.q)?)
}

fn resolve_toledo(toledo: Option<Toledo>, n: u32, g: u32) -> Result<i64, CliError> {
    let bound = n as i64 * (g as i64 - 1);
    Ok(match toledo {
        Some(Toledo::Max) => bound,
        Some(Toledo::MinusMax) => -bound,
        Some(Toledo::Value(v)) => v,
        None => {
            return Err(CliError::Validation(
                "missing required parameter: toledo".into(),
            ))
        }
    })
}

fn enumerate_for(cfg: &RunConfig) -> Result<Enumeration, CliError> {
    let group = resolve_group(cfg)?;
    let genus = require(cfg.genus, "genus")?;
    let ctx = CurveContext::new(genus);
    match group {
        GroupName::GlC { n: 2 } => {
            let d = require(cfg.degree, "degree")?;
            Ok(critical::enumerate_gl2_critical(&ctx, d)?)
        }
        GroupName::GlC { n: 3 } => {
            let d = require(cfg.degree, "degree")?;
            Ok(critical::enumerate_gl3_critical(&ctx, d)?)
        }
        GroupName::Sp2nR { n } => {
            let d = match (cfg.toledo, cfg.degree) {
                (Some(t), _) => resolve_toledo(Some(t), n, genus)?,
                (None, Some(d)) => d,
                (None, None) => {
                    return Err(CliError::Validation(
                        "missing required parameter: toledo or degree".into(),
                    ))
                }
            };
            Ok(critical::enumerate_sp2nr_minima(n, &ctx, d)?)
        }
        other => Err(CliError::Validation(format!(
            "enumeration is implemented for gl(2), gl(3) and sp(2n,R); got {other}"
        ))),
    }
}

/// The executed artifact: bytes for the output file plus a human summary for
/// stdout when no --out is given.
pub struct Artifact {
    pub body: String,
    pub summary: String,
}

pub fn dispatch(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let command = cfg.command.ok_or(CliError::Validation(
        "missing required parameter: command".into(),
    ))?;
    match command {
        Command::Enumerate => {
            let enumeration = enumerate_for(cfg)?;
            let body = match cfg.format.unwrap_or_default() {
                OutputFormat::Csv => records::strata_csv(&enumeration.strata),
                OutputFormat::Records => records::strata_records(&enumeration.strata),
                OutputFormat::JsonLines => records::strata_json_lines(&enumeration.strata),
            };
            let summary = format!("{} strata", enumeration.strata.len());
            Ok(Artifact { body, summary })
        }
        Command::Index => {
            let enumeration = enumerate_for(cfg)?;
            let genus = require(cfg.genus, "genus")?;
            let ctx = CurveContext::new(genus);
            let mut rows = Vec::new();
            for s in enumeration.strata {
                let report = morse::morse_index(&s.hodge, &ctx)?;
                let (minimum, _) = morse::is_local_minimum(&s.hodge, &ctx)?;
                rows.push((s, report, minimum));
            }
            let body = records::index_records(&rows);
            let summary = format!("{} index records", rows.len());
            Ok(Artifact { body, summary })
        }
        Command::Assemble => {
            let group = resolve_group(cfg)?;
            if !matches!(group, GroupName::GlC { n: 2 }) {
                return Err(CliError::Validation(
                    "assemble is implemented for gl(2) stratum sets".into(),
                ));
            }
            let genus = require(cfg.genus, "genus")?;
            let d = require(cfg.degree, "degree")?;
            let ctx = CurveContext::new(genus);
            let n0 = match &cfg.n0 {
                Some(text) => Some(
                    text.parse::<Polynomial>()
                        .map_err(|e| CliError::Validation(format!("bad n0 polynomial: {e}")))?,
                ),
                None => None,
            };
            let enumeration = critical::enumerate_gl2_critical(&ctx, d)?;
            let mut terms = Vec::new();
            let mut skipped_n0 = false;
            for s in &enumeration.strata {
                match morse::stratum_poincare(s, &ctx, n0.as_ref()) {
                    Some(p) => {
                        let report = morse::morse_index(&s.hodge, &ctx)?;
                        let IndexValue::Exact(idx) = report.index else {
                            return Err(CliError::Internal(format!(
                                "unresolved index on {}",
                                s.label
                            )));
                        };
                        terms.push((idx, p));
                    }
                    None => skipped_n0 = true,
                }
            }
            let total = morse::poincare_assemble(&terms)?;
            let mut body = String::new();
            for (idx, p) in &terms {
                body.push_str(&format!("term index={idx} poly={p}\n"));
            }
            body.push_str(&format!("assembled {total}\n"));
            if skipped_n0 {
                body.push_str("note N0 contribution omitted (no n0 polynomial supplied)\n");
            }
            Ok(Artifact {
                body,
                summary: format!("assembled {total}"),
            })
        }
        Command::Census => {
            let group = resolve_group(cfg)?;
            let GroupName::Sp2nR { n } = group else {
                return Err(CliError::Validation(format!(
                    "census is implemented for sp(2n,R); got {group}"
                )));
            };
            let genus = require(cfg.genus, "genus")?;
            let d = resolve_toledo(cfg.toledo, n, genus)?;
            let bound = n as i64 * (genus as i64 - 1);
            let report = if d.abs() == bound {
                if n >= 3 {
                    census::count_sp2nr_maximal(n, genus)?
                } else if n == 2 {
                    census::count_sp4_maximal(genus)?
                } else {
                    return Err(CliError::Validation(
                        "maximal census needs n >= 2 (Sp(2,R) reduces to the rank-2 case)".into(),
                    ));
                }
            } else {
                census::count_sp2nr_nonmaximal(n, genus, d)?
            };
            let body = records::census_csv(&[report.clone()]);
            let total = match report.total {
                Count::Known(v) => v.to_string(),
                Count::Unknown => "UNKNOWN".into(),
            };
            Ok(Artifact {
                body,
                summary: format!("total {total}"),
            })
        }
        Command::Dwww => {
            let genus = require(cfg.genus, "genus")?;
            let ell = require(cfg.ell, "ell")?;
            let deg_e = require(cfg.degree, "degree")?;
            let ctx = CurveContext::new(genus);
            // default truncation: 2·dim M + 4 for the rank-2 moduli space
            let dim = 4 * (2 * genus as usize - 2) + 2;
            let order = cfg.trunc.unwrap_or(2 * dim + 4);
            let out = morse::dwww_difference(ell, deg_e, &ctx, order)?;
            let body = format!(
                "first {}\nsecond {}\ndifference {}\nshift {}\nsym_index {}\n",
                out.first,
                out.second,
                out.difference(),
                out.shift,
                out.sym_index
            );
            Ok(Artifact {
                body,
                summary: format!("shift {}", out.shift),
            })
        }
        Command::Flow => {
            let size = cfg.size.unwrap_or(16);
            let rank = cfg.rank.unwrap_or(2);
            let seed = cfg.seed.unwrap_or(0);
            let tol = cfg.tol.unwrap_or(1e-6);
            let max_steps = cfg.max_steps.unwrap_or(20_000);
            let tag = match cfg.group.as_deref() {
                None => GroupTag::GlC,
                Some(s) => match parse_group(s, cfg.n, cfg.p, cfg.q)? {
                    GroupName::GlC { .. } | GroupName::SlC { .. } => GroupTag::GlC,
                    GroupName::SlR { .. } => GroupTag::SlnR,
                    GroupName::Sp2nR { n } => GroupTag::Sp2nR { n: n as usize },
                    other => {
                        return Err(CliError::Validation(format!(
                            "flow tags: gl(n), sl(n,R), sp(2n,R); got {other}"
                        )))
                    }
                },
            };
            let geometry = flow::LatticeGeometry::new(size, 1.0)?;
            let mut state = flow::random_state(geometry, rank, tag, seed, 0.1);
            let params = heat::FlowParams::new(tol, max_steps)?;
            let trace = heat::heat_flow_run(&mut state, &params)?;
            let body = records::trace_csv(&trace);
            let last = trace.steps.last().expect("at least the initial row");
            let summary = format!(
                "converged={} steps={} energy={:?} grad_norm={:?} clusters={}",
                trace.converged,
                trace.steps.len() - 1,
                last.energy,
                last.grad_norm,
                trace.limit.clusters.len()
            );
            Ok(Artifact { body, summary })
        }
        Command::Check => run_check(),
    }
}

/// Internal consistency battery; any failure is a hard exit-4 error.
fn run_check() -> Result<Artifact, CliError> {
    let mut body = String::new();
    for n in 1..=6u32 {
        for g in 2..=6u32 {
            let base = census::hitchin_base_dim(GroupName::Sp2nR { n }, g)?;
            let closed = (g as i64 - 1) * (2 * n as i64 * n as i64 + n as i64);
            if base.total != closed {
                return Err(CliError::Internal(format!(
                    "hitchin base dimension mismatch at n={n} g={g}"
                )));
            }
            let (lo, hi) = census::milnor_wood(n, g)?;
            if lo != -hi {
                return Err(CliError::Internal(format!(
                    "milnor-wood interval asymmetric at n={n} g={g}"
                )));
            }
        }
    }
    body.push_str("check hitchin_base_dim: ok (n <= 6, g <= 6)\n");
    body.push_str("check milnor_wood symmetry: ok (n <= 6, g <= 6)\n");
    for g in 2..=6u32 {
        for n in 3..=5u32 {
            let r = census::count_sp2nr_maximal(n, g)?;
            let Count::Known(total) = r.total else {
                return Err(CliError::Internal("maximal count unknown".into()));
            };
            if total != r.breakdown_sum() {
                return Err(CliError::Internal(format!(
                    "breakdown sum mismatch at n={n} g={g}"
                )));
            }
        }
        let r = census::count_sp4_maximal(g)?;
        let Count::Known(total) = r.total else {
            return Err(CliError::Internal("sp4 count unknown".into()));
        };
        if total != r.breakdown_sum() {
            return Err(CliError::Internal(format!(
                "sp4 breakdown mismatch at g={g}"
            )));
        }
    }
    body.push_str("check census breakdown sums: ok (g <= 6)\n");
    Ok(Artifact {
        body,
        summary: "all checks ok".into(),
    })
}

/// Executes a parsed command line: writes the artifact to --out (or prints
/// it), returning the process exit code.
pub fn run(cli: Cli) -> i32 {
    let cfg = match cli.into_config() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error code={} message={:?}", e.exit_code(), e.to_string());
            return e.exit_code();
        }
    };
    match dispatch(&cfg) {
        Ok(artifact) => {
            match &cfg.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, artifact.body.as_bytes()) {
                        eprintln!("error code=2 message={:?}", format!("write {path}: {e}"));
                        return 2;
                    }
                    println!("{}", artifact.summary);
                }
                None => print!("{}", artifact.body),
            }
            0
        }
        Err(e) => {
            let msg = e.to_string();
            let first_line = msg.lines().next().unwrap_or("");
            eprintln!("error code={} message={:?}", e.exit_code(), first_line);
            e.exit_code()
        }
    }
}
