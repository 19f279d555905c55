//! Implementations of the CLI verbs: run, compare, presets, check.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use drasim_core::{compare, run, Error as CoreError, ExperimentConfig, Trace};

use crate::doc::{parse_document, resolve, DocError, ExperimentDocument, Resolved};
use crate::presets;

/// Errors surfaced to the user, each with a process exit code:
/// 1 document/IO problems, 2 numerical divergence, 3 oracle failure,
/// 4 mismatched comparison baselines.
#[derive(Debug)]
pub enum CliError {
    Doc(DocError),
    Core(CoreError),
    Io(PathBuf, std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Doc(e) => write!(f, "document error: {e}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Doc(_) | CliError::Io(..) => 1,
            CliError::Core(e) => match e {
                CoreError::NumericalDivergence { .. } => 2,
                CoreError::NoBracket { .. } | CoreError::NonConvex { .. } => 3,
                CoreError::MismatchedBaseline { .. } => 4,
                _ => 1,
            },
        }
    }
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        CliError::Doc(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

/// Flags shared by run and compare.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub output: PathBuf,
    pub seed_override: Option<u64>,
    pub stride: Option<u64>,
    pub quiet: bool,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn write(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| CliError::Io(parent.to_path_buf(), e))?;
        }
    }
    fs::write(path, contents).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn load(path: &Path, flags: &Flags) -> Result<Resolved, CliError> {
    let text = read(path)?;
    let doc = parse_document(&text)?;
    Ok(resolve(&doc, flags.seed_override, flags.stride)?)
}

/// Replayable description of a finished run, written next to its trace.
/// The embedded `document` re-parses to the exact same experiment.
#[derive(Debug, Serialize, Deserialize)]
pub struct Summary {
    pub label: String,
    pub steps_run: u64,
    pub termination_step: Option<u64>,
    pub drift_onset_step: Option<u64>,
    pub last_feasible_step: Option<u64>,
    pub initial_residual: f64,
    pub final_residual: f64,
    pub final_drift: f64,
    pub final_grad_gap: f64,
    pub epsilon_bound: f64,
    pub f_star: f64,
    pub phi_star: f64,
    pub seeds: SummarySeeds,
    pub document: ExperimentDocument,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SummarySeeds {
    pub graph: u64,
    pub init: u64,
    pub noise: u64,
}

fn summarize(label: &str, trace: &Trace, document: ExperimentDocument) -> Summary {
    Summary {
        label: label.to_string(),
        steps_run: trace.steps_run,
        termination_step: trace.termination_step,
        drift_onset_step: trace.drift_onset_step,
        last_feasible_step: trace.drift_onset_step.map(|s| s - 1),
        initial_residual: trace.initial_residual,
        final_residual: trace.final_residual(),
        final_drift: trace.final_drift(),
        final_grad_gap: trace.final_grad_gap(),
        epsilon_bound: trace.epsilon_bound,
        f_star: trace.f_star,
        phi_star: trace.phi_star,
        seeds: SummarySeeds {
            graph: trace.seeds.graph,
            init: trace.seeds.init,
            noise: trace.seeds.noise,
        },
        document,
    }
}

fn report(trace: &Trace, trace_path: &Path, quiet: bool, label: &str) {
    if quiet {
        return;
    }
    match trace.termination_step {
        Some(step) => println!(
            "[{label}] terminated at step {step} (drift onset {})",
            trace.drift_onset_step.unwrap_or(step)
        ),
        None => println!(
            "[{label}] ran {} steps without termination",
            trace.steps_run
        ),
    }
    println!(
        "[{label}] final residual {:e}, feasibility drift {:e}, epsilon bound {:e}",
        trace.final_residual(),
        trace.final_drift(),
        trace.epsilon_bound
    );
    println!(
        "[{label}] seeds: graph {} init {} noise {}; trace: {}",
        trace.seeds.graph,
        trace.seeds.init,
        trace.seeds.noise,
        trace_path.display()
    );
}

fn write_artifacts(
    out_dir: &Path,
    label: &str,
    trace_name: &str,
    summary_name: &str,
    trace: &Trace,
    document: ExperimentDocument,
    quiet: bool,
) -> Result<(), CliError> {
    let trace_path = out_dir.join(trace_name);
    write(&trace_path, trace.to_csv_string().as_bytes())?;
    let summary = summarize(label, trace, document);
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write(&out_dir.join(summary_name), json.as_bytes())?;
    report(trace, &trace_path, quiet, label);
    Ok(())
}

/// `drasim run <doc>`: one experiment, trace + summary artifacts.
pub fn cmd_run(doc_path: &Path, flags: &Flags) -> Result<(), CliError> {
    let resolved = load(doc_path, flags)?;
    let trace = run(&resolved.config)?;
    write_artifacts(
        &flags.output,
        "run",
        &resolved.trace_name,
        &resolved.summary_name,
        &trace,
        resolved.document,
        flags.quiet,
    )
}

/// Merged residual table: one step column, one residual column per label.
fn residual_table(labeled: &[(String, Trace)]) -> String {
    let mut out = String::from("step");
    for (label, _) in labeled {
        out.push_str(",residual_");
        out.push_str(label);
    }
    out.push('\n');
    let rows = labeled
        .iter()
        .map(|(_, t)| t.records.len())
        .max()
        .unwrap_or(0);
    for row in 0..rows {
        out.push_str(&(row as u64 + 1).to_string());
        for (_, trace) in labeled {
            out.push(',');
            if let Some(r) = trace.records.get(row) {
                out.push_str(&format!("{:e}", r.residual));
            }
        }
        out.push('\n');
    }
    out
}

/// `drasim compare`: run documents (or a preset) that differ only in their
/// dynamics, and emit aligned artifacts plus a merged residual table.
pub fn cmd_compare(
    doc_paths: &[PathBuf],
    preset: Option<&str>,
    flags: &Flags,
) -> Result<(), CliError> {
    let mut entries: Vec<(String, Resolved)> = Vec::new();
    match preset {
        Some(name) => {
            let docs = presets::documents(name).ok_or_else(|| {
                DocError(format!(
                    "unknown preset `{name}`; available: {}",
                    presets::PRESET_NAMES.join(", ")
                ))
            })?;
            for (label, doc) in docs {
                entries.push((label, resolve(&doc, flags.seed_override, flags.stride)?));
            }
        }
        None => {
            if doc_paths.is_empty() {
                return Err(CliError::Doc(DocError(
                    "compare needs document paths or --preset".into(),
                )));
            }
            for path in doc_paths {
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| "doc".into());
                entries.push((label, load(path, flags)?));
            }
        }
    }
    // Disambiguate duplicate labels by position.
    let mut labels: Vec<String> = entries.iter().map(|(l, _)| l.clone()).collect();
    for i in 0..labels.len() {
        if labels.iter().filter(|l| **l == labels[i]).count() > 1 {
            labels = entries
                .iter()
                .enumerate()
                .map(|(k, (l, _))| format!("{k}_{l}"))
                .collect();
            break;
        }
    }

    let configs: Vec<ExperimentConfig> = entries.iter().map(|(_, r)| r.config.clone()).collect();
    let traces = compare(&configs)?;

    let labeled: Vec<(String, Trace)> = labels.iter().cloned().zip(traces).collect();
    for ((label, trace), (_, resolved)) in labeled.iter().zip(&entries) {
        write_artifacts(
            &flags.output,
            label,
            &format!("{label}_trace.csv"),
            &format!("{label}_summary.json"),
            trace,
            resolved.document.clone(),
            flags.quiet,
        )?;
    }
    write(
        &flags.output.join("residuals.csv"),
        residual_table(&labeled).as_bytes(),
    )?;
    if !flags.quiet {
        println!(
            "merged residual table: {}",
            flags.output.join("residuals.csv").display()
        );
    }
    Ok(())
}

/// `drasim presets`: list the built-in presets and their parameters.
pub fn cmd_presets() {
    print!("{}", presets::listing());
}

/// `drasim check <doc>`: parse and resolve without running.
pub fn cmd_check(doc_path: &Path, flags: &Flags) -> Result<(), CliError> {
    let resolved = load(doc_path, flags)?;
    if !flags.quiet {
        println!(
            "ok: {} agents, {} max steps, law {}, seeds graph {} init {} noise {}",
            resolved.config.problem.n(),
            resolved.config.max_steps,
            resolved.config.dynamics.law.name(),
            resolved.config.seeds.graph,
            resolved.config.seeds.init,
            resolved.config.seeds.noise,
        );
    }
    Ok(())
}
