use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Machine-readable summary written to stderr as one JSON line by every command.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub status: Status,
    pub exit_code: i32,
    pub seed: Option<u64>,
    /// Input path -> sha256 hex digest.
    pub inputs: BTreeMap<String, String>,
    pub pulse_count: Option<usize>,
    pub wall_time_s: f64,
    pub fidelity: Option<f64>,
    pub residual: Option<f64>,
    pub max_boundary_residual: Option<f64>,
    pub final_phase: Option<String>,
    pub final_placement: Option<Vec<usize>>,
    pub message: Option<String>,
    #[serde(skip)]
    started: Option<Instant>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ThresholdFailed,
    Error,
}

impl RunReport {
    pub fn start(command: &'static str) -> Self {
        RunReport {
            command,
            status: Status::Ok,
            exit_code: 0,
            seed: None,
            inputs: BTreeMap::new(),
            pulse_count: None,
            wall_time_s: 0.0,
            fidelity: None,
            residual: None,
            max_boundary_residual: None,
            final_phase: None,
            final_placement: None,
            message: None,
            started: Some(Instant::now()),
        }
    }

    pub fn record_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.insert(
            path.display().to_string(),
            hex::encode(Sha256::digest(bytes)),
        );
    }

    pub fn fail_threshold(&mut self, message: String) {
        self.status = Status::ThresholdFailed;
        self.exit_code = 1;
        self.message = Some(message);
    }

    pub fn fail_error(&mut self, message: String) {
        self.status = Status::Error;
        self.exit_code = 2;
        self.message = Some(message);
    }

    pub fn finish(mut self) -> i32 {
        if let Some(t) = self.started {
            self.wall_time_s = t.elapsed().as_secs_f64();
        }
        eprintln!(
            "{}",
            serde_json::to_string(&self).expect("report serializes")
        );
        self.exit_code
    }
}
