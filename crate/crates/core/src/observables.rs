//! Currents, correlations, phases and derived run diagnostics.
//!
//! Bilinears are evaluated in rectangular form,
//! `c_{k,l} = 2 Re(ψ_k* ψ_l)` and `j_{k,l} = 2J Im(ψ_k* ψ_l)`, which equals the
//! polar definitions `2√(n_k n_l) cos(φ_l - φ_k)` and
//! `2J √(n_k n_l) sin(φ_l - φ_k)` but stays well defined when a site empties.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::integrator::{phase_derivative, Trajectory};
use crate::lattice::{check_site, LatticeState};

/// Particle current from site `k` to site `l` (1-based).
pub fn current(state: &LatticeState, k: usize, l: usize, hopping: f64) -> Result<f64> {
    let (a, b) = (state.amplitude(k)?, state.amplitude(l)?);
    Ok(2.0 * hopping * (a.conj() * b).im)
}

/// Phase coherence between sites `k` and `l` (1-based).
pub fn correlation(state: &LatticeState, k: usize, l: usize) -> Result<f64> {
    let (a, b) = (state.amplitude(k)?, state.amplitude(l)?);
    Ok(2.0 * (a.conj() * b).re)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObservableKind {
    Occupation,
    Current,
    Correlation,
    Phase,
    PhaseDerivative,
    TotalNorm,
}

impl ObservableKind {
    fn arity(self) -> usize {
        match self {
            ObservableKind::Current | ObservableKind::Correlation => 2,
            ObservableKind::TotalNorm => 0,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSeries {
    pub kind: ObservableKind,
    pub sites: Vec<usize>,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl ObservableSeries {
    /// Evaluates `kind` on every recorded snapshot. Phases are unwrapped.
    pub fn from_trajectory(traj: &Trajectory, kind: ObservableKind, sites: &[usize]) -> Result<Self> {
        if sites.len() != kind.arity() {
            return Err(Error::InvalidParameter(format!(
                "{kind:?} takes {} site(s), got {}",
                kind.arity(),
                sites.len()
            )));
        }
        let m = traj.params.sites();
        for &s in sites {
            check_site(s, m)?;
        }
        let hop = traj.params.hopping();
        let values = match kind {
            ObservableKind::Occupation => traj.occupation_series(sites[0])?,
            ObservableKind::TotalNorm => traj.states.iter().map(|s| s.total_norm()).collect(),
            ObservableKind::Current => {
                traj.states.iter().map(|s| current(s, sites[0], sites[1], hop)).collect::<Result<_>>()?
            }
            ObservableKind::Correlation => {
                traj.states.iter().map(|s| correlation(s, sites[0], sites[1])).collect::<Result<_>>()?
            }
            ObservableKind::Phase => {
                let raw: Vec<f64> = traj.states.iter().map(|s| s.amplitudes()[sites[0] - 1].arg()).collect();
                unwrap_phases(&raw)
            }
            ObservableKind::PhaseDerivative => {
                traj.states.iter().map(|s| phase_derivative(s, &traj.params, sites[0])).collect::<Result<_>>()?
            }
        };
        Ok(Self { kind, sites: sites.to_vec(), times: traj.times.clone(), values })
    }
}

/// Continuous phase from principal values: each jump larger than π is
/// shifted by a multiple of 2π.
pub fn unwrap_phases(raw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(raw.len());
    let mut offset = 0.0;
    for (i, &p) in raw.iter().enumerate() {
        if i > 0 {
            let d = p - raw[i - 1];
            if d > PI {
                offset -= TAU * ((d - PI) / TAU).ceil();
            } else if d < -PI {
                offset += TAU * ((-d - PI) / TAU).ceil();
            }
        }
        out.push(p + offset);
    }
    out
}

/// Expected subsystem occupation against which deviations are measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BreakdownReference {
    /// `n_ref(t) = n_k(0)`.
    ConstantN0,
    /// `n_ref(t) = n_k(0) exp(rate · t)`.
    AnalyticExponential { rate: f64 },
}

/// Largest relative deviation `|n_k(t)/n_ref(t) - 1|` over the two subsystem
/// sites at one snapshot, or `None` when the reference has underflowed.
fn relative_deviation(traj: &Trajectory, idx: usize, ks: usize, reference: BreakdownReference) -> Option<f64> {
    let t = traj.times[idx] - traj.times[0];
    let factor = match reference {
        BreakdownReference::ConstantN0 => 1.0,
        BreakdownReference::AnalyticExponential { rate } => (rate * t).exp(),
    };
    let mut worst: f64 = 0.0;
    for k in [ks - 1, ks] {
        let n_ref = traj.states[0].amplitudes()[k].norm_sqr() * factor;
        if !n_ref.is_normal() {
            return None;
        }
        let n = traj.states[idx].amplitudes()[k].norm_sqr();
        worst = worst.max((n / n_ref - 1.0).abs());
    }
    Some(worst)
}

fn check_subsystem(traj: &Trajectory, ks: usize) -> Result<()> {
    check_site(ks, traj.params.sites())?;
    check_site(ks + 1, traj.params.sites())
}

/// First recorded time at which either subsystem occupation `{kS, kS+1}`
/// deviates from the reference by more than `epsilon` (relative). `None` when
/// the threshold is never crossed. Evaluation stops silently once the
/// exponential reference underflows.
pub fn breakdown_time(
    traj: &Trajectory,
    ks: usize,
    reference: BreakdownReference,
    epsilon: f64,
) -> Result<Option<f64>> {
    check_subsystem(traj, ks)?;
    for idx in 0..traj.len() {
        match relative_deviation(traj, idx, ks, reference) {
            None => break,
            Some(dev) if dev > epsilon => return Ok(Some(traj.times[idx])),
            Some(_) => {}
        }
    }
    Ok(None)
}

/// Largest relative subsystem deviation over the snapshots strictly before `until`.
pub fn peak_deviation(traj: &Trajectory, ks: usize, reference: BreakdownReference, until: Option<f64>) -> Result<f64> {
    check_subsystem(traj, ks)?;
    let mut peak: f64 = 0.0;
    for idx in 0..traj.len() {
        if until.is_some_and(|u| traj.times[idx] >= u) {
            break;
        }
        match relative_deviation(traj, idx, ks, reference) {
            None => break,
            Some(dev) => peak = peak.max(dev),
        }
    }
    Ok(peak)
}

/// Least-squares slope of `ln n_k(t)` over the recorded samples in `window`.
pub fn decay_rate_fit(traj: &Trajectory, site: usize, window: (f64, f64)) -> Result<f64> {
    check_site(site, traj.params.sites())?;
    let (t0, t1) = window;
    let (first, last) = (traj.times[0], *traj.times.last().unwrap());
    if !(t0 < t1) || t0 < first || t1 > last {
        return Err(Error::Fit(format!("window [{t0}, {t1}] not inside recorded range [{first}, {last}]")));
    }
    let mut pts = Vec::new();
    for (t, s) in traj.times.iter().zip(&traj.states) {
        if *t < t0 || *t > t1 {
            continue;
        }
        let n = s.amplitudes()[site - 1].norm_sqr();
        if !(n > 0.0) {
            return Err(Error::Fit(format!("non-positive occupation at site {site}, t = {t}")));
        }
        pts.push((*t, n.ln()));
    }
    if pts.len() < 2 {
        return Err(Error::Fit(format!("fewer than two samples in [{t0}, {t1}]")));
    }
    let count = pts.len() as f64;
    let mean_t = pts.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / count;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, y) in &pts {
        sxy += (t - mean_t) * (y - mean_y);
        sxx += (t - mean_t) * (t - mean_t);
    }
    Ok(sxy / sxx)
}
