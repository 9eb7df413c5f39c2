//! Fan-out of independent trials.
//!
//! Every suite trial is a pure function of (seed, trial index), so trials
//! can run in any order on any number of threads without changing results.
//! The `parallel` feature routes the parallel mode through rayon; without it
//! both modes run sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl ExecMode {
    pub fn label(&self) -> &'static str {
        match self {
            ExecMode::Sequential => "sequential",
            ExecMode::Parallel => "parallel",
        }
    }
}

impl std::str::FromStr for ExecMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "sequential" | "seq" => Ok(ExecMode::Sequential),
            "parallel" | "par" => Ok(ExecMode::Parallel),
            other => Err(format!("unknown execution mode: {}", other)),
        }
    }
}

/// Maps the trial indices 0..trials through `f`, preserving index order in
/// the output.
pub fn map_trials<T, F>(mode: ExecMode, trials: u32, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u32) -> T + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..trials).map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                (0..trials).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..trials).map(f).collect()
            }
        }
    }
}
