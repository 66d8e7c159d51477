//! Open one-dimensional lattice in the discrete Gross-Pitaevskii (mean-field) form
//!
//! ```text
//! i dψ_k/dt = -J ψ_{k-1} - J ψ_{k+1} + g |ψ_k|² ψ_k + μ_k ψ_k - i (γ_k / 2) ψ_k
//! ```
//!
//! with hard walls at both chain ends (the missing neighbour amplitude is zero).
//! Units are ħ = m = 1. A positive `γ_k` removes particles from site `k`, a
//! negative one injects them.
//!
//! Sites are numbered from 1 in every public function that takes a site index.

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Static model parameters of the chain.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeParams {
    hopping: f64,
    nonlinearity: f64,
    onsite: Vec<f64>,
    gain_loss: Vec<f64>,
}

impl LatticeParams {
    /// Builds a chain from per-site onsite energies and gain/loss rates.
    pub fn new(hopping: f64, nonlinearity: f64, onsite: Vec<f64>, gain_loss: Vec<f64>) -> Result<Self> {
        if onsite.is_empty() {
            return Err(Error::InvalidParameter("lattice needs at least one site".into()));
        }
        if onsite.len() != gain_loss.len() {
            return Err(Error::DimensionMismatch { expected: onsite.len(), actual: gain_loss.len() });
        }
        if !hopping.is_finite() || hopping < 0.0 {
            return Err(Error::InvalidParameter(format!("hopping J must be finite and >= 0, got {hopping}")));
        }
        if !nonlinearity.is_finite() {
            return Err(Error::InvalidParameter(format!("nonlinearity g must be finite, got {nonlinearity}")));
        }
        if let Some(x) = onsite.iter().chain(&gain_loss).find(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite site parameter {x}")));
        }
        Ok(Self { hopping, nonlinearity, onsite, gain_loss })
    }

    /// Uniform chain with zero onsite energies.
    pub fn with_gain_loss(hopping: f64, nonlinearity: f64, gain_loss: Vec<f64>) -> Result<Self> {
        let onsite = vec![0.0; gain_loss.len()];
        Self::new(hopping, nonlinearity, onsite, gain_loss)
    }

    pub fn sites(&self) -> usize {
        self.onsite.len()
    }

    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    pub fn nonlinearity(&self) -> f64 {
        self.nonlinearity
    }

    pub fn onsite(&self) -> &[f64] {
        &self.onsite
    }

    /// Local rates γ_k (loss for positive values).
    pub fn gain_loss(&self) -> &[f64] {
        &self.gain_loss
    }

    /// γ_k of a single site, 1-based.
    pub fn gain_loss_at(&self, site: usize) -> Result<f64> {
        check_site(site, self.sites())?;
        Ok(self.gain_loss[site - 1])
    }
}

/// Two-mode system with gain `+iγ` on site 1 and loss `-iγ` on site 2,
/// expressed through the lattice rates `γ_1 = -2γ`, `γ_2 = +2γ`.
pub fn tms_as_lattice(gamma: f64, g: f64, hopping: f64) -> Result<LatticeParams> {
    if !(hopping > 0.0) {
        return Err(Error::InvalidParameter(format!("two-mode system needs J > 0, got {hopping}")));
    }
    LatticeParams::with_gain_loss(hopping, g, vec![-2.0 * gamma, 2.0 * gamma])
}

/// Complex amplitude per site at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeState {
    amplitudes: Vec<Complex64>,
    time: f64,
}

impl LatticeState {
    pub fn new(amplitudes: Vec<Complex64>, time: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidParameter("state needs at least one site".into()));
        }
        if !time.is_finite() || amplitudes.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite { time });
        }
        Ok(Self { amplitudes, time })
    }

    /// `ψ_k = √n_k · exp(iφ_k)` at t = 0.
    pub fn from_polar(occupations: &[f64], phases: &[f64]) -> Result<Self> {
        if occupations.len() != phases.len() {
            return Err(Error::DimensionMismatch { expected: occupations.len(), actual: phases.len() });
        }
        if let Some((k, &n)) = occupations.iter().enumerate().find(|(_, n)| !(**n >= 0.0)) {
            return Err(Error::NegativeOccupation { site: k + 1, value: n });
        }
        let amplitudes =
            occupations.iter().zip(phases).map(|(&n, &phi)| Complex64::from_polar(n.sqrt(), phi)).collect();
        Self::new(amplitudes, 0.0)
    }

    pub fn sites(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn from_parts(amplitudes: Vec<Complex64>, time: f64) -> Self {
        Self { amplitudes, time }
    }

    /// Amplitude of a site, 1-based.
    pub fn amplitude(&self, site: usize) -> Result<Complex64> {
        check_site(site, self.sites())?;
        Ok(self.amplitudes[site - 1])
    }

    /// `n_k = |ψ_k|²`, 1-based.
    pub fn site_occupation(&self, site: usize) -> Result<f64> {
        self.amplitude(site).map(|z| z.norm_sqr())
    }

    pub fn occupations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Principal-value phases in (-π, π].
    pub fn phases(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.arg()).collect()
    }

    pub fn total_norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by `exp(iθ)`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let factor = Complex64::from_polar(1.0, theta);
        Self { amplitudes: self.amplitudes.iter().map(|z| z * factor).collect(), time: self.time }
    }

    /// Same amplitudes, different clock.
    pub fn at_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub(crate) fn check_against(&self, params: &LatticeParams) -> Result<()> {
        if self.sites() != params.sites() {
            return Err(Error::DimensionMismatch { expected: params.sites(), actual: self.sites() });
        }
        Ok(())
    }
}

/// Time derivative `dψ_k/dt` of every site.
pub fn rhs(state: &LatticeState, params: &LatticeParams) -> Result<Vec<Complex64>> {
    state.check_against(params)?;
    let mut out = vec![Complex64::new(0.0, 0.0); state.sites()];
    rhs_into(state.amplitudes(), params, &mut out);
    Ok(out)
}

/// Allocation-free right-hand side; `psi`, `out` and `params` must agree in length.
pub(crate) fn rhs_into(psi: &[Complex64], params: &LatticeParams, out: &mut [Complex64]) {
    let m = psi.len();
    let zero = Complex64::new(0.0, 0.0);
    let hop = params.hopping;
    let g = params.nonlinearity;
    for k in 0..m {
        let left = if k > 0 { psi[k - 1] } else { zero };
        let right = if k + 1 < m { psi[k + 1] } else { zero };
        let z = psi[k];
        let energy = -hop * (left + right) + (g * z.norm_sqr() + params.onsite[k]) * z;
        out[k] = -I * energy - 0.5 * params.gain_loss[k] * z;
    }
}

pub(crate) fn check_site(site: usize, len: usize) -> Result<()> {
    if site == 0 || site > len {
        return Err(Error::IndexOutOfRange { index: site, len });
    }
    Ok(())
}
