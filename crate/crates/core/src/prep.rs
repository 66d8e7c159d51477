//! Initial states and gain/loss profiles that make the two sites `{kS, kS+1}`
//! of a reservoir chain behave like the two-mode system.
//!
//! Every link `k → k+1` carries a phase difference taken from the two-mode
//! eigenstate, with the current sign set by the scenario on either side of the
//! subsystem. Below the exceptional point all occupations equal `n0`. Above it
//! the phase differences become complex; their real parts are `±π/2` and their
//! imaginary parts turn into a geometric ladder of occupations, so only real
//! occupations and real phases are ever stored.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{LatticeParams, LatticeState};
use crate::tms::{link_phase, Branch};

/// Orientation of the reservoir currents relative to the subsystem current `j > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// `j_L = +j`, `j_R = -j`: both reservoirs feed the subsystem, loss only on `kS+1`.
    InwardLossRight,
    /// `j_L = j_R = +j`: current flows straight through, no gain or loss.
    PassThrough,
    /// `j_L = -j`, `j_R = +j`: gain on `kS`.
    OutwardGainLeft,
    /// `j_L = -j`, `j_R = -j`: gain on `kS`, loss on `kS+1`.
    GainAndLoss,
}

impl Scenario {
    pub const ALL: [Scenario; 4] =
        [Scenario::InwardLossRight, Scenario::PassThrough, Scenario::OutwardGainLeft, Scenario::GainAndLoss];

    /// Row 1..=4 of the current-orientation table.
    pub fn from_row(row: u8) -> Result<Self> {
        match row {
            1..=4 => Ok(Self::ALL[usize::from(row) - 1]),
            _ => Err(Error::InvalidParameter(format!("scenario must be 1..=4, got {row}"))),
        }
    }

    pub fn row(self) -> u8 {
        match self {
            Scenario::InwardLossRight => 1,
            Scenario::PassThrough => 2,
            Scenario::OutwardGainLeft => 3,
            Scenario::GainAndLoss => 4,
        }
    }

    /// Sign of `j_L` relative to `j`.
    pub fn s_left(self) -> f64 {
        match self {
            Scenario::InwardLossRight | Scenario::PassThrough => 1.0,
            Scenario::OutwardGainLeft | Scenario::GainAndLoss => -1.0,
        }
    }

    /// Sign of `j_R` relative to `j`.
    pub fn s_right(self) -> f64 {
        match self {
            Scenario::PassThrough | Scenario::OutwardGainLeft => 1.0,
            Scenario::InwardLossRight | Scenario::GainAndLoss => -1.0,
        }
    }

    /// No gain site is needed, only loss.
    pub fn experimentally_accessible(self) -> bool {
        self.s_left() > 0.0
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |s: f64| if s > 0.0 { '+' } else { '-' };
        write!(f, "row {} (j_L = {}j, j_R = {}j)", self.row(), sign(self.s_left()), sign(self.s_right()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrepRegime {
    Symmetric,
    Broken,
}

impl fmt::Display for PrepRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PrepRegime::Symmetric => "symmetric",
            PrepRegime::Broken => "broken",
        })
    }
}

/// What to prepare. Site indices are 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct PrepSpec {
    pub scenario: Scenario,
    pub regime: PrepRegime,
    pub gamma: f64,
    pub hopping: f64,
    pub g: f64,
    pub n0: f64,
    pub ks: usize,
    pub sites: usize,
    /// Chemical-potential branch. Above the exceptional point `Minus` decays.
    pub branch: Branch,
    pub global_phase: f64,
}

impl PrepSpec {
    /// Defaults: `J = 1`, `g = 0`, `n0 = 0.5`, `kS = ⌊M/2⌋`, decaying/lower branch.
    pub fn new(scenario: Scenario, regime: PrepRegime, gamma: f64, sites: usize) -> Self {
        Self {
            scenario,
            regime,
            gamma,
            hopping: 1.0,
            g: 0.0,
            n0: 0.5,
            ks: sites / 2,
            sites,
            branch: Branch::Minus,
            global_phase: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sites < 4 || self.ks < 2 || self.ks + 2 > self.sites {
            return Err(Error::InvalidParameter(format!(
                "subsystem site kS = {} needs 2 <= kS <= M - 2 with M = {}",
                self.ks, self.sites
            )));
        }
        for (name, v) in [("gamma", self.gamma), ("g", self.g), ("global_phase", self.global_phase)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
            }
        }
        if !(self.hopping > 0.0) || !self.hopping.is_finite() {
            return Err(Error::InvalidParameter(format!("J must be finite and > 0, got {}", self.hopping)));
        }
        if !(self.n0 >= 0.0) || !self.n0.is_finite() {
            return Err(Error::InvalidParameter(format!("n0 must be finite and >= 0, got {}", self.n0)));
        }
        let above = self.gamma.abs() > self.hopping;
        match self.regime {
            PrepRegime::Symmetric if above => {
                Err(Error::Regime(format!("symmetric preparation needs |gamma| <= J, got gamma = {}", self.gamma)))
            }
            PrepRegime::Broken if !above => {
                Err(Error::Regime(format!("broken preparation needs |gamma| > J, got gamma = {}", self.gamma)))
            }
            PrepRegime::Broken if self.g != 0.0 => {
                Err(Error::InvalidParameter(format!("broken preparation is linear only (g = 0), got g = {}", self.g)))
            }
            _ => Ok(()),
        }
    }

    /// Current on the subsystem link, `j = 2 n0 γ`.
    pub fn subsystem_current(&self) -> f64 {
        2.0 * self.n0 * self.gamma
    }

    /// Current sign on link `k → k+1`.
    fn link_sign(&self, k: usize) -> f64 {
        use std::cmp::Ordering::*;
        match k.cmp(&self.ks) {
            Less => self.scenario.s_left(),
            Equal => 1.0,
            Greater => self.scenario.s_right(),
        }
    }
}

/// Local rates `γ_k`: zero outside the subsystem,
/// `γ_kS = (j_L - j)/n0` and `γ_{kS+1} = (j - j_R)/n0` with `j = 2 n0 γ`.
pub fn gamma_profile(spec: &PrepSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut profile = vec![0.0; spec.sites];
    let two_gamma = 2.0 * spec.gamma;
    profile[spec.ks - 1] = two_gamma * (spec.scenario.s_left() - 1.0);
    profile[spec.ks] = two_gamma * (1.0 - spec.scenario.s_right());
    Ok(profile)
}

/// Occupations and real phases along the chain for either regime.
fn build(spec: &PrepSpec) -> Result<(LatticeState, LatticeParams)> {
    let alpha = spec.gamma / spec.hopping;
    let m = spec.sites;
    let ks = spec.ks - 1;

    // Half log-occupation and phase per site, anchored at the subsystem.
    let mut log_amp = vec![0.0; m];
    let mut phase = vec![0.0; m];
    let mid = link_phase(alpha, spec.branch);
    log_amp[ks] = 0.5 * spec.n0.ln() + 0.5 * mid.im;
    phase[ks] = -0.5 * mid.re;
    for k in ks..m - 1 {
        let delta = link_phase(spec.link_sign(k + 1) * alpha, spec.branch);
        log_amp[k + 1] = log_amp[k] - delta.im;
        phase[k + 1] = phase[k] + delta.re;
    }
    for k in (0..ks).rev() {
        let delta = link_phase(spec.link_sign(k + 1) * alpha, spec.branch);
        log_amp[k] = log_amp[k + 1] + delta.im;
        phase[k] = phase[k + 1] - delta.re;
    }

    let occupations: Vec<f64> = log_amp.iter().map(|a| (2.0 * a).exp()).collect();
    let phases: Vec<f64> = phase.iter().map(|p| p + spec.global_phase).collect();
    let state = LatticeState::from_polar(&occupations, &phases)?;
    let params = LatticeParams::with_gain_loss(spec.hopping, spec.g, gamma_profile(spec)?)?;
    Ok((state, params))
}

/// Uniform occupations `n0` with equal-magnitude currents; the subsystem
/// carries the two-mode phases `±φ`. Interior occupations are stationary at
/// `t = 0`. The two chain ends drain (or fill) at the rate of the adjacent
/// reservoir current, which is what eventually ends the quasi-stationary phase.
pub fn prepare_pt_symmetric(spec: &PrepSpec) -> Result<(LatticeState, LatticeParams)> {
    spec.validate()?;
    if spec.regime != PrepRegime::Symmetric {
        return Err(Error::Regime("prepare_pt_symmetric called with a broken-regime preparation".into()));
    }
    build(spec)
}

/// Phase differences of `±π/2` and an exponential occupation ladder with
/// neighbour ratio `(α ± √(α² - 1))²`. The subsystem occupations are those of
/// the broken two-mode eigenstate and identical across scenarios.
pub fn prepare_pt_broken(spec: &PrepSpec) -> Result<(LatticeState, LatticeParams)> {
    spec.validate()?;
    if spec.regime != PrepRegime::Broken {
        return Err(Error::Regime("prepare_pt_broken called with a symmetric-regime preparation".into()));
    }
    build(spec)
}

pub fn prepare(spec: &PrepSpec) -> Result<(LatticeState, LatticeParams)> {
    match spec.regime {
        PrepRegime::Symmetric => prepare_pt_symmetric(spec),
        PrepRegime::Broken => prepare_pt_broken(spec),
    }
}
