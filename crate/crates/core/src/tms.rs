//! Closed-form eigenstates of the non-Hermitian two-mode system
//!
//! ```text
//! i d/dt (ψ_1, ψ_2) = [[g|ψ_1|² + iγ, -J], [-J, g|ψ_2|² - iγ]] (ψ_1, ψ_2)
//! ```
//!
//! Every eigenstate has the form `(√n0 e^{iφ}, √n0 e^{-iφ})` with
//! `φ = -θ/2`, where `θ` is the phase difference `arg ψ_2 - arg ψ_1`. Below the
//! exceptional point `θ` is real. Above it `θ` is the complex arcsine of
//! `γ/J`, and its imaginary part shifts the two occupations apart while their
//! product stays `n0²`.
//!
//! All observables are invariant under a global phase; the convention here
//! pins the phase `φ` on site 1 and `-φ` on site 2.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::LatticeState;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Sign choice in `μ = g n0 ± √(J² - γ²)` and in `α ± √(α² - 1)`.
///
/// As a chemical-potential branch, `Minus` is the ground-state-like solution
/// below the exceptional point and the decaying solution above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Branch {
    Plus,
    #[default]
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Symmetric,
    Broken,
    ExceptionalPoint,
}

impl Regime {
    pub fn classify(gamma: f64, hopping: f64) -> Self {
        let a = gamma.abs();
        if a < hopping {
            Regime::Symmetric
        } else if a > hopping {
            Regime::Broken
        } else {
            Regime::ExceptionalPoint
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Symmetric => "symmetric",
            Regime::Broken => "broken",
            Regime::ExceptionalPoint => "exceptional-point",
        })
    }
}

/// Analytic two-mode eigenstate together with its chemical potential.
#[derive(Debug, Clone, PartialEq)]
pub struct TmsSolution {
    pub amplitudes: [Complex64; 2],
    pub mu: Complex64,
    pub regime: Regime,
    pub branch: Branch,
    pub n0: f64,
    pub gamma: f64,
    pub hopping: f64,
    pub g: f64,
}

impl TmsSolution {
    pub fn occupations(&self) -> [f64; 2] {
        [self.amplitudes[0].norm_sqr(), self.amplitudes[1].norm_sqr()]
    }

    /// `ψ_i(t) = φ_i exp(-iμt)`; negative `t` evolves backwards.
    pub fn evolve(&self, t: f64) -> LatticeState {
        evolve_analytic(self, t)
    }
}

/// Arcsine continued past |α| = 1.
///
/// For |α| ≤ 1 both branches return the real principal value. For α > 1 the
/// result is `π/2 - i ln(α ± √(α² - 1))` and for α < -1 it is the odd
/// continuation `-(π/2 - i ln(|α| ± √(α² - 1)))`.
pub fn complex_arcsin_branch(alpha: f64, branch: Branch) -> Complex64 {
    let a = alpha.abs();
    if a <= 1.0 {
        return Complex64::new(alpha.asin(), 0.0);
    }
    // ln(a - s) = -ln(a + s); the second form avoids cancellation for large a.
    let log_plus = (a + (a * a - 1.0).sqrt()).ln();
    let log = match branch {
        Branch::Plus => log_plus,
        Branch::Minus => -log_plus,
    };
    Complex64::new(FRAC_PI_2, -log) * alpha.signum()
}

/// Phase difference `θ = arg ψ_{k+1} - arg ψ_k` of an eigenstate link with
/// current ratio `alpha = j / (2J n0)`, for the given chemical-potential branch.
///
/// `Minus` takes the principal (complex) arcsine, `Plus` the supplementary
/// angle `π - θ`. Above the exceptional point `Minus` is the decaying mode.
pub fn link_phase(alpha: f64, branch: Branch) -> Complex64 {
    let principal = complex_arcsin_branch(alpha, Branch::Plus);
    match branch {
        Branch::Minus => principal,
        Branch::Plus => Complex64::new(PI, 0.0) - principal,
    }
}

/// `μ = g n0 ± √(J² - γ²)` with the complex square root above the exceptional point.
pub fn tms_chemical_potential(n0: f64, gamma: f64, hopping: f64, g: f64, branch: Branch) -> Complex64 {
    let root = Complex64::new(hopping * hopping - gamma * gamma, 0.0).sqrt();
    g * n0 + branch.sign() * root
}

fn check_common(n0: f64, gamma: f64, hopping: f64) -> Result<()> {
    if !(n0 >= 0.0) || !n0.is_finite() {
        return Err(Error::InvalidParameter(format!("n0 must be finite and >= 0, got {n0}")));
    }
    if !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma must be finite, got {gamma}")));
    }
    if !(hopping > 0.0) || !hopping.is_finite() {
        return Err(Error::InvalidParameter(format!("J must be finite and > 0, got {hopping}")));
    }
    Ok(())
}

fn eigenstate(n0: f64, alpha: f64, branch: Branch) -> [Complex64; 2] {
    let phi = -0.5 * link_phase(alpha, branch);
    let amp = n0.sqrt();
    [amp * (I * phi).exp(), amp * (-I * phi).exp()]
}

/// Stationary eigenstate for |γ| ≤ J. At |γ| = J the regime is tagged as the
/// exceptional point.
pub fn pt_symmetric_state(n0: f64, gamma: f64, hopping: f64, g: f64, branch: Branch) -> Result<TmsSolution> {
    check_common(n0, gamma, hopping)?;
    if !g.is_finite() {
        return Err(Error::InvalidParameter(format!("g must be finite, got {g}")));
    }
    let regime = Regime::classify(gamma, hopping);
    if regime == Regime::Broken {
        return Err(Error::Regime(format!("|gamma| = {} exceeds J = {hopping}; use pt_broken_state", gamma.abs())));
    }
    let mu = if regime == Regime::ExceptionalPoint {
        Complex64::new(g * n0, 0.0)
    } else {
        tms_chemical_potential(n0, gamma, hopping, g, branch)
    };
    Ok(TmsSolution { amplitudes: eigenstate(n0, gamma / hopping, branch), mu, regime, branch, n0, gamma, hopping, g })
}

/// Eigenstate with complex chemical potential for |γ| > J (linear case, g = 0).
/// `Branch::Minus` decays, `Branch::Plus` grows.
pub fn pt_broken_state(n0: f64, gamma: f64, hopping: f64, branch: Branch) -> Result<TmsSolution> {
    check_common(n0, gamma, hopping)?;
    if gamma.abs() <= hopping {
        return Err(Error::Regime(format!(
            "|gamma| = {} does not exceed J = {hopping}; use pt_symmetric_state",
            gamma.abs()
        )));
    }
    Ok(TmsSolution {
        amplitudes: eigenstate(n0, gamma / hopping, branch),
        mu: tms_chemical_potential(n0, gamma, hopping, 0.0, branch),
        regime: Regime::Broken,
        branch,
        n0,
        gamma,
        hopping,
        g: 0.0,
    })
}

pub fn evolve_analytic(sol: &TmsSolution, t: f64) -> LatticeState {
    let rot = (-I * sol.mu * t).exp();
    LatticeState::from_parts(vec![sol.amplitudes[0] * rot, sol.amplitudes[1] * rot], t)
}

/// Time-independent correlation and current `(c, j)` of the stationary state.
pub fn characteristic_values(n0: f64, gamma: f64, hopping: f64) -> Result<(f64, f64)> {
    check_common(n0, gamma, hopping)?;
    let alpha = gamma / hopping;
    if alpha.abs() > 1.0 {
        return Err(Error::Regime(format!("characteristic values need |gamma| <= J, got alpha = {alpha}")));
    }
    Ok((2.0 * n0 * (1.0 - alpha * alpha).sqrt(), 2.0 * n0 * gamma))
}

/// Chemical potential `g n0 ± 2√(J² - γ²)` of the two sites when they are
/// embedded in the reservoir chain. The hopping part is twice the isolated value.
pub fn chemical_potential_embedded(n0: f64, gamma: f64, hopping: f64, g: f64, branch: Branch) -> Complex64 {
    let root = Complex64::new(hopping * hopping - gamma * gamma, 0.0).sqrt();
    g * n0 + 2.0 * branch.sign() * root
}
