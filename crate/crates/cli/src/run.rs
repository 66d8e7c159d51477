//! Executes one configured run and writes its outputs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use pt_lattice::{
    breakdown_time, characteristic_values, chemical_potential_embedded, correlation, current, decay_rate_fit, evolve,
    peak_deviation, phase_derivative, prepare, tms_chemical_potential, unwrap_phases, BreakdownReference, Complex64,
    LatticeState, PrepRegime, Regime, Trajectory,
};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;

pub const TRAJECTORY_FILE: &str = "trajectory.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const PROFILE_FILE: &str = "initial_profile.csv";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValues {
    pub c: f64,
    pub j: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiteValue {
    pub site: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    BlowUp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: u8,
    pub scenario_label: String,
    pub experimentally_accessible: bool,
    pub regime: String,
    pub branch: String,
    pub gamma: f64,
    #[serde(rename = "J")]
    pub hopping: f64,
    pub g: f64,
    pub n0: f64,
    pub sites: usize,
    pub ks: usize,
    /// Two-mode correlation and current; absent above the exceptional point.
    pub reference: Option<ReferenceValues>,
    pub mu: ComplexValue,
    pub mu_tilde: ComplexValue,
    /// `2 Im μ`, the occupation rate of the isolated two-mode system.
    pub tms_rate: f64,
    /// `2 Im μ̃`, the expected occupation rate of the embedded subsystem.
    pub subsystem_rate: f64,
    pub epsilon: f64,
    pub breakdown_time: Option<f64>,
    pub peak_deviation_before_breakdown: f64,
    pub fit_window: [f64; 2],
    pub fitted_rates: Vec<SiteValue>,
    pub initial_phase_derivative: Vec<SiteValue>,
    pub initial_total_norm: f64,
    pub status: RunStatus,
    pub blow_up_time: Option<f64>,
    pub fit_error: Option<String>,
}

/// Summary plus where the files went.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub summary: Summary,
    pub out_dir: PathBuf,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.summary.status {
            RunStatus::Ok => 0,
            RunStatus::BlowUp => 2,
        }
    }
}

fn num(x: f64) -> String {
    // 17 significant digits round-trip every f64.
    format!("{x:.16e}")
}

/// Validates, prepares, integrates and writes `trajectory.csv`,
/// `summary.json` and (broken regime) `initial_profile.csv` into `out_dir`.
pub fn execute(cfg: &RunConfig, source: Option<&str>, out_dir: &Path) -> Result<RunReport, CliError> {
    cfg.validate(source)?;
    let spec = cfg.prep_spec();
    let (initial, params) = prepare(&spec)?;
    let traj = evolve(&initial, &params, &cfg.integrator())?;

    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    write_file(&out_dir.join(TRAJECTORY_FILE), &trajectory_csv(&traj, cfg))?;
    if spec.regime == PrepRegime::Broken {
        write_file(&out_dir.join(PROFILE_FILE), &profile_csv(&initial, params.gain_loss()))?;
    }

    let summary = summarize(cfg, &traj)?;
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write_file(&out_dir.join(SUMMARY_FILE), &(json + "\n"))?;
    Ok(RunReport { summary, out_dir: out_dir.to_path_buf() })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn summarize(cfg: &RunConfig, traj: &Trajectory) -> Result<Summary, CliError> {
    let spec = cfg.prep_spec();
    let ks = spec.ks;
    let tms_regime = Regime::classify(spec.gamma, spec.hopping);
    let g = if spec.regime == PrepRegime::Broken { 0.0 } else { spec.g };
    let mu = match tms_regime {
        Regime::ExceptionalPoint => Complex64::new(g * spec.n0, 0.0),
        _ => tms_chemical_potential(spec.n0, spec.gamma, spec.hopping, g, spec.branch),
    };
    let mu_tilde = chemical_potential_embedded(spec.n0, spec.gamma, spec.hopping, g, spec.branch);
    let subsystem_rate = 2.0 * mu_tilde.im;

    let reference = match spec.regime {
        PrepRegime::Symmetric => {
            let (c, j) = characteristic_values(spec.n0, spec.gamma, spec.hopping)?;
            Some(ReferenceValues { c, j })
        }
        PrepRegime::Broken => None,
    };
    let reference_kind = match spec.regime {
        PrepRegime::Symmetric => BreakdownReference::ConstantN0,
        PrepRegime::Broken => BreakdownReference::AnalyticExponential { rate: subsystem_rate },
    };
    let t_star = breakdown_time(traj, ks, reference_kind, cfg.epsilon)?;
    let peak = peak_deviation(traj, ks, reference_kind, t_star)?;

    let (a, b) = cfg.fit_window();
    let mut fitted_rates = Vec::new();
    let mut fit_error = None;
    for site in [ks, ks + 1] {
        match decay_rate_fit(traj, site, (a, b)) {
            Ok(value) => fitted_rates.push(SiteValue { site, value }),
            Err(e) => fit_error = Some(e.to_string()),
        }
    }

    let initial = &traj.states[0];
    let initial_phase_derivative = [ks, ks + 1]
        .into_iter()
        .filter_map(|site| phase_derivative(initial, &traj.params, site).ok().map(|value| SiteValue { site, value }))
        .collect();

    Ok(Summary {
        scenario: spec.scenario.row(),
        scenario_label: spec.scenario.to_string(),
        experimentally_accessible: spec.scenario.experimentally_accessible(),
        regime: spec.regime.to_string(),
        branch: spec.branch.to_string(),
        gamma: spec.gamma,
        hopping: spec.hopping,
        g: spec.g,
        n0: spec.n0,
        sites: spec.sites,
        ks,
        reference,
        mu: mu.into(),
        mu_tilde: mu_tilde.into(),
        tms_rate: 2.0 * mu.im,
        subsystem_rate,
        epsilon: cfg.epsilon,
        breakdown_time: t_star,
        peak_deviation_before_breakdown: peak,
        fit_window: [a, b],
        fitted_rates,
        initial_phase_derivative,
        initial_total_norm: initial.total_norm(),
        status: if traj.blow_up.is_some() { RunStatus::BlowUp } else { RunStatus::Ok },
        blow_up_time: traj.blow_up,
        fit_error,
    })
}

/// Header plus one row per recorded sample:
/// `t, n_1..n_M, j_k_k+1, c_k_k+1 (per pair), phi_k, phi_raw_k, phidot_k (per phase site)`.
pub fn trajectory_csv(traj: &Trajectory, cfg: &RunConfig) -> String {
    let m = traj.params.sites();
    let hop = traj.params.hopping();
    let pairs = cfg.pairs();
    let phase_sites = cfg.phase_sites();

    let mut header = vec!["t".to_string()];
    header.extend((1..=m).map(|k| format!("n_{k}")));
    for k in &pairs {
        header.push(format!("j_{k}_{}", k + 1));
        header.push(format!("c_{k}_{}", k + 1));
    }
    for k in &phase_sites {
        header.push(format!("phi_{k}"));
        header.push(format!("phi_raw_{k}"));
        header.push(format!("phidot_{k}"));
    }

    let raw: Vec<Vec<f64>> =
        phase_sites.iter().map(|k| traj.states.iter().map(|s| s.amplitudes()[k - 1].arg()).collect()).collect();
    let unwrapped: Vec<Vec<f64>> = raw.iter().map(|r| unwrap_phases(r)).collect();

    let mut out = header.join(",");
    out.push('\n');
    for (i, (t, s)) in traj.times.iter().zip(&traj.states).enumerate() {
        let mut row = vec![num(*t)];
        row.extend(s.amplitudes().iter().map(|z| num(z.norm_sqr())));
        for &k in &pairs {
            row.push(num(current(s, k, k + 1, hop).expect("validated pair")));
            row.push(num(correlation(s, k, k + 1).expect("validated pair")));
        }
        for (p, &k) in phase_sites.iter().enumerate() {
            row.push(num(unwrapped[p][i]));
            row.push(num(raw[p][i]));
            row.push(phase_derivative(s, &traj.params, k).map_or_else(|_| "NaN".to_string(), num));
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn profile_csv(state: &LatticeState, gain_loss: &[f64]) -> String {
    let mut out = String::from("site,n,phase,gamma\n");
    for (k, (z, g)) in state.amplitudes().iter().zip(gain_loss).enumerate() {
        let _ = writeln!(out, "{},{},{},{}", k + 1, num(z.norm_sqr()), num(z.arg()), num(*g));
    }
    out
}
