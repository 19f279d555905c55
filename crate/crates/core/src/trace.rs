//! Trajectory records and their CSV serialization.

use std::io::{self, Write};

use crate::sim::SeedSet;

/// Metrics for one completed step. `state` is populated only on stride steps.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub step: u64,
    pub time: f64,
    /// Lyapunov residual `F(x) - F*`.
    pub residual: f64,
    /// Constraint violation `a'x - b`.
    pub drift: f64,
    /// Gradient-consensus gap; see [`crate::sim::consensus_gap`].
    pub max_grad_gap: f64,
    pub state: Option<Vec<f64>>,
}

/// Full record of one run.
///
/// Records are indexed by completed step (step k holds the state after k
/// updates); scalar metrics are recorded every step, full state vectors every
/// `state_stride` steps. When the drift-based termination criterion fires,
/// `drift_onset_step` marks the first step of the sustained violating window
/// (its predecessor is the last state known feasible) and `termination_step`
/// the step at which the window completed.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub steps_run: u64,
    pub termination_step: Option<u64>,
    pub drift_onset_step: Option<u64>,
    pub initial_residual: f64,
    pub final_state: Vec<f64>,
    pub epsilon_bound: f64,
    pub f_star: f64,
    pub phi_star: f64,
    pub dt: f64,
    pub n: usize,
    pub seeds: SeedSet,
}

impl Trace {
    pub fn final_record(&self) -> &TraceRecord {
        self.records
            .last()
            .expect("a run records at least one step")
    }

    pub fn final_residual(&self) -> f64 {
        self.final_record().residual
    }

    pub fn final_drift(&self) -> f64 {
        self.final_record().drift
    }

    pub fn final_grad_gap(&self) -> f64 {
        self.final_record().max_grad_gap
    }

    /// First recorded step whose residual is at or below `threshold`.
    pub fn steps_to_residual_below(&self, threshold: f64) -> Option<u64> {
        self.records
            .iter()
            .find(|r| r.residual <= threshold)
            .map(|r| r.step)
    }

    /// Write the trace as CSV: `step,time,residual,drift,max_grad_gap`, then
    /// one `x_i` column per agent when any record carries a state snapshot.
    /// Values use exponent notation, which round-trips f64 exactly.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let with_state = self.records.iter().any(|r| r.state.is_some());
        write!(out, "step,time,residual,drift,max_grad_gap")?;
        if with_state {
            for i in 0..self.n {
                write!(out, ",x_{i}")?;
            }
        }
        writeln!(out)?;
        for r in &self.records {
            write!(
                out,
                "{},{:e},{:e},{:e},{:e}",
                r.step, r.time, r.residual, r.drift, r.max_grad_gap
            )?;
            if with_state {
                match &r.state {
                    Some(x) => {
                        for v in x {
                            write!(out, ",{v:e}")?;
                        }
                    }
                    None => {
                        for _ in 0..self.n {
                            write!(out, ",")?;
                        }
                    }
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}
