//! Fixed-step classical Runge-Kutta integration of the lattice equations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{check_site, rhs, rhs_into, LatticeParams, LatticeState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    Rk4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    /// Keep every `record_every`-th step (t = 0 and `t_final` are always kept).
    pub record_every: usize,
    pub t_final: f64,
    pub scheme: Scheme,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { dt: 1e-3, record_every: 10, t_final: 20.0, scheme: Scheme::Rk4 }
    }
}

impl IntegratorConfig {
    pub fn new(t_final: f64) -> Self {
        Self { t_final, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!("dt must be finite and > 0, got {}", self.dt)));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(Error::InvalidParameter(format!("t_final must be finite and >= 0, got {}", self.t_final)));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidParameter("record_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// Recorded snapshots of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<LatticeState>,
    pub params: LatticeParams,
    /// Set when a step produced a non-finite amplitude; the recorded data stop
    /// at the last finite state.
    pub blow_up: Option<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> &LatticeState {
        self.states.last().expect("trajectory always holds the initial state")
    }

    /// `n_k(t)` along the run, 1-based site.
    pub fn occupation_series(&self, site: usize) -> Result<Vec<f64>> {
        check_site(site, self.params.sites())?;
        Ok(self.states.iter().map(|s| s.amplitudes()[site - 1].norm_sqr()).collect())
    }
}

/// Scratch buffers for RK4 so a run does not allocate per step.
struct Rk4Workspace {
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
}

impl Rk4Workspace {
    fn new(m: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); m];
        Self { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    fn advance(&mut self, psi: &mut [Complex64], params: &LatticeParams, dt: f64) {
        let half = 0.5 * dt;
        rhs_into(psi, params, &mut self.k1);
        for ((t, y), k) in self.tmp.iter_mut().zip(psi.iter()).zip(&self.k1) {
            *t = y + half * k;
        }
        rhs_into(&self.tmp, params, &mut self.k2);
        for ((t, y), k) in self.tmp.iter_mut().zip(psi.iter()).zip(&self.k2) {
            *t = y + half * k;
        }
        rhs_into(&self.tmp, params, &mut self.k3);
        for ((t, y), k) in self.tmp.iter_mut().zip(psi.iter()).zip(&self.k3) {
            *t = y + dt * k;
        }
        rhs_into(&self.tmp, params, &mut self.k4);
        let sixth = dt / 6.0;
        for (i, y) in psi.iter_mut().enumerate() {
            *y += sixth * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

/// One RK4 step of size `dt`.
pub fn step(state: &LatticeState, params: &LatticeParams, dt: f64) -> Result<LatticeState> {
    state.check_against(params)?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!("dt must be finite and > 0, got {dt}")));
    }
    let mut psi = state.amplitudes().to_vec();
    Rk4Workspace::new(psi.len()).advance(&mut psi, params, dt);
    let time = state.time() + dt;
    if psi.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite { time });
    }
    Ok(LatticeState::from_parts(psi, time))
}

/// Integrates from `initial` to `initial.time() + cfg.t_final`.
///
/// Step times are computed as `t0 + i·dt` rather than accumulated; the last
/// step is shortened so the run ends exactly on `t_final`. Diverging but finite
/// occupations are legitimate and kept. A non-finite amplitude stops the run
/// and sets [`Trajectory::blow_up`].
pub fn evolve(initial: &LatticeState, params: &LatticeParams, cfg: &IntegratorConfig) -> Result<Trajectory> {
    initial.check_against(params)?;
    cfg.validate()?;
    let t0 = initial.time();
    let t_end = t0 + cfg.t_final;
    // Tolerate t_final being a multiple of dt up to rounding.
    let n_steps = ((cfg.t_final / cfg.dt) * (1.0 - 1e-12)).ceil() as usize;

    let mut psi = initial.amplitudes().to_vec();
    let mut ws = Rk4Workspace::new(psi.len());
    let mut times = vec![t0];
    let mut states = vec![initial.clone()];
    let mut blow_up = None;

    for i in 1..=n_steps {
        let t_prev = t0 + (i - 1) as f64 * cfg.dt;
        let t = if i == n_steps { t_end } else { t0 + i as f64 * cfg.dt };
        ws.advance(&mut psi, params, t - t_prev);
        if psi.iter().any(|z| !z.is_finite()) {
            blow_up = Some(t);
            break;
        }
        if i % cfg.record_every == 0 || i == n_steps {
            times.push(t);
            states.push(LatticeState::from_parts(psi.clone(), t));
        }
    }

    Ok(Trajectory { times, states, params: params.clone(), blow_up })
}

/// `dφ_k/dt = Im(ψ_k* dψ_k/dt) / n_k`, evaluated from the equations of motion.
pub fn phase_derivative(state: &LatticeState, params: &LatticeParams, site: usize) -> Result<f64> {
    check_site(site, state.sites())?;
    let d = rhs(state, params)?;
    let z = state.amplitudes()[site - 1];
    let n = z.norm_sqr();
    if n == 0.0 {
        return Err(Error::UndefinedPhase { site });
    }
    // (ψ̇_I ψ_R - ψ_I ψ̇_R) / n
    Ok((d[site - 1].im * z.re - z.im * d[site - 1].re) / n)
}
