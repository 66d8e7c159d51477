//! Run configuration: a JSON document whose keys mirror the command-line flags.
//! Flags given on the command line override values from the file.

use std::path::{Path, PathBuf};

use pt_lattice::{Branch, IntegratorConfig, PrepRegime, PrepSpec, Scenario, Scheme};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RegimeName {
    Symmetric,
    Broken,
}

impl From<RegimeName> for PrepRegime {
    fn from(r: RegimeName) -> Self {
        match r {
            RegimeName::Symmetric => PrepRegime::Symmetric,
            RegimeName::Broken => PrepRegime::Broken,
        }
    }
}

/// `decaying` and `growing` are aliases for `minus` and `plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BranchName {
    Plus,
    Minus,
    Decaying,
    Growing,
}

impl From<BranchName> for Branch {
    fn from(b: BranchName) -> Self {
        match b {
            BranchName::Plus | BranchName::Growing => Branch::Plus,
            BranchName::Minus | BranchName::Decaying => Branch::Minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub name: Option<String>,
    pub scenario: u8,
    pub regime: RegimeName,
    pub gamma: f64,
    pub g: f64,
    #[serde(rename = "J")]
    pub hopping: f64,
    pub sites: usize,
    /// Left subsystem site; `sites / 2` when absent.
    pub ks: Option<usize>,
    pub n0: f64,
    pub branch: BranchName,
    pub global_phase: f64,
    pub t_final: f64,
    pub dt: f64,
    pub record_every: usize,
    pub epsilon: f64,
    /// Rate-fit window; `[0, min(5, t_final)]` when absent.
    pub fit_window: Option<[f64; 2]>,
    /// Left sites `k` of the links `(k, k+1)` whose current and correlation are exported.
    pub pairs: Option<Vec<usize>>,
    /// Sites whose phase and phase derivative are exported.
    pub phase_sites: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            name: None,
            scenario: 1,
            regime: RegimeName::Symmetric,
            gamma: 0.8,
            g: 0.0,
            hopping: 1.0,
            sites: 50,
            ks: None,
            n0: 0.5,
            branch: BranchName::Minus,
            global_phase: 0.0,
            t_final: 20.0,
            dt: 1e-3,
            record_every: 10,
            epsilon: 0.01,
            fit_window: None,
            pairs: None,
            phase_sites: None,
            out: None,
        }
    }
}

/// Flag values; `None` leaves the file (or default) value untouched.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Row 1..=4 of the reservoir-current table
    #[arg(long)]
    pub scenario: Option<u8>,
    #[arg(long, value_enum)]
    pub regime: Option<RegimeName>,
    /// Gain-loss factor of the two-mode system
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Nonlinearity
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Hopping amplitude
    #[arg(long = "J")]
    pub hopping: Option<f64>,
    #[arg(long)]
    pub sites: Option<usize>,
    #[arg(long)]
    pub ks: Option<usize>,
    #[arg(long)]
    pub n0: Option<f64>,
    #[arg(long, value_enum)]
    pub branch: Option<BranchName>,
    #[arg(long = "t-final")]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "record-every")]
    pub record_every: Option<usize>,
    /// Relative breakdown threshold
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($($field:ident),*) => { $( if let Some(v) = o.$field.clone() { self.$field = v; } )* };
        }
        set!(scenario, regime, gamma, g, hopping, sites, n0, branch, t_final, dt, record_every, epsilon);
        if let Some(ks) = o.ks {
            self.ks = Some(ks);
        }
        if let Some(out) = &o.out {
            self.out = Some(out.clone());
        }
    }

    pub fn ks(&self) -> usize {
        self.ks.unwrap_or(self.sites / 2)
    }

    pub fn fit_window(&self) -> (f64, f64) {
        match self.fit_window {
            Some([a, b]) => (a, b),
            None => (0.0, self.t_final.min(5.0)),
        }
    }

    pub fn pairs(&self) -> Vec<usize> {
        self.pairs.clone().unwrap_or_else(|| {
            let ks = self.ks();
            vec![ks - 1, ks, ks + 1]
        })
    }

    pub fn phase_sites(&self) -> Vec<usize> {
        self.phase_sites.clone().unwrap_or_else(|| vec![self.ks(), self.ks() + 1])
    }

    pub fn prep_spec(&self) -> PrepSpec {
        PrepSpec {
            scenario: Scenario::from_row(self.scenario).unwrap_or(Scenario::InwardLossRight),
            regime: self.regime.into(),
            gamma: self.gamma,
            hopping: self.hopping,
            g: self.g,
            n0: self.n0,
            ks: self.ks(),
            sites: self.sites,
            branch: self.branch.into(),
            global_phase: self.global_phase,
        }
    }

    pub fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig { dt: self.dt, record_every: self.record_every, t_final: self.t_final, scheme: Scheme::Rk4 }
    }

    /// Checks every field before anything is computed. Errors name the
    /// offending key; `source` (the config text, when there is one) lets
    /// them point at its line.
    pub fn validate(&self, source: Option<&str>) -> Result<(), CliError> {
        let fail = |key: &str, msg: String| -> Result<(), CliError> { Err(CliError::config(key, source, msg)) };
        if let Err(e) = Scenario::from_row(self.scenario) {
            return fail("scenario", e.to_string());
        }
        if let Err(e) = self.prep_spec().validate() {
            let key = match &e {
                pt_lattice::Error::Regime(_) => "gamma",
                pt_lattice::Error::InvalidParameter(m) if m.contains("kS") => "ks",
                pt_lattice::Error::InvalidParameter(m) if m.contains("g = ") => "g",
                pt_lattice::Error::InvalidParameter(m) if m.contains("n0") => "n0",
                pt_lattice::Error::InvalidParameter(m) if m.contains("J ") => "J",
                _ => "",
            };
            return fail(key, e.to_string());
        }
        if let Err(e) = self.integrator().validate() {
            let key = match &e {
                pt_lattice::Error::InvalidParameter(m) if m.starts_with("dt") => "dt",
                pt_lattice::Error::InvalidParameter(m) if m.starts_with("t_final") => "t_final",
                _ => "record_every",
            };
            return fail(key, e.to_string());
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return fail("epsilon", format!("epsilon must be finite and > 0, got {}", self.epsilon));
        }
        let (a, b) = self.fit_window();
        if !(a >= 0.0 && a < b && b <= self.t_final) {
            return fail("fit_window", format!("fit window [{a}, {b}] must lie inside [0, {}]", self.t_final));
        }
        if let Some(k) = self.pairs().into_iter().find(|k| *k == 0 || *k >= self.sites) {
            return fail("pairs", format!("link ({k}, {}) is outside the chain of {} sites", k + 1, self.sites));
        }
        if let Some(k) = self.phase_sites().into_iter().find(|k| *k == 0 || *k > self.sites) {
            return fail("phase_sites", format!("site {k} is outside the chain of {} sites", self.sites));
        }
        Ok(())
    }
}

/// Parses a config document. Syntax errors and unknown keys carry serde's
/// line and column.
pub fn parse_config(text: &str, path: &Path) -> Result<RunConfig, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse { path: path.to_path_buf(), source: e })
}

pub fn load_config(path: &Path) -> Result<(RunConfig, String), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
    Ok((parse_config(&text, path)?, text))
}

/// 1-based line of the first occurrence of `"key"` in a JSON document.
pub fn locate_key(text: &str, key: &str) -> Option<usize> {
    if key.is_empty() {
        return None;
    }
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}
