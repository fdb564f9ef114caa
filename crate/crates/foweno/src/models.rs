//! Flux models: linear advection, Burgers, and the 1D/2D Euler equations
//! of gas dynamics with the ideal-gas equation of state.
//!
//! Conserved variables are `u` (scalar), `(rho, rho u, E)` in 1D and
//! `(rho, rho u, rho v, E)` in 2D, with `p = (gamma - 1)(E - rho |v|^2 / 2)`.

use thiserror::Error;

/// A state with non-positive density or pressure.
#[derive(Debug, Clone, Copy, Error, PartialEq)]
#[error("non-physical state: density {density:.6e}, pressure {pressure:.6e}")]
pub struct AdmissibilityError {
    pub density: f64,
    pub pressure: f64,
}

/// Primitive variables (rho, u, p) for the 1D Euler equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerPrimitive1D {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl EulerPrimitive1D {
    pub fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.p / self.rho).sqrt()
    }

    /// Specific internal energy, e = p / ((gamma - 1) rho).
    pub fn internal_energy(&self, gamma: f64) -> f64 {
        self.p / ((gamma - 1.0) * self.rho)
    }

    pub fn check(&self) -> Result<(), AdmissibilityError> {
        if self.rho <= 0.0 || self.p <= 0.0 || !self.rho.is_finite() || !self.p.is_finite() {
            return Err(AdmissibilityError {
                density: self.rho,
                pressure: self.p,
            });
        }
        Ok(())
    }
}

/// Primitive variables (rho, u, v, p) for the 2D Euler equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerPrimitive2D {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl EulerPrimitive2D {
    pub fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self { rho, u, v, p }
    }

    pub fn check(&self) -> Result<(), AdmissibilityError> {
        if self.rho <= 0.0 || self.p <= 0.0 || !self.rho.is_finite() || !self.p.is_finite() {
            return Err(AdmissibilityError {
                density: self.rho,
                pressure: self.p,
            });
        }
        Ok(())
    }
}

/// Spatial direction of a flux or wave-speed query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// The flux function of a conservation law, with the conversions and wave
/// speed bounds the solvers need. Immutable and freely shareable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxModel {
    Advection { a: f64 },
    Burgers,
    Euler1d { gamma: f64 },
    Euler2d { gamma: f64 },
}

impl FluxModel {
    /// Number of conserved components.
    pub fn ncomp(&self) -> usize {
        match self {
            FluxModel::Advection { .. } | FluxModel::Burgers => 1,
            FluxModel::Euler1d { .. } => 3,
            FluxModel::Euler2d { .. } => 4,
        }
    }

    pub fn gas_gamma(&self) -> Option<f64> {
        match self {
            FluxModel::Euler1d { gamma } | FluxModel::Euler2d { gamma } => Some(*gamma),
            _ => None,
        }
    }

    /// Pressure from the conserved state (Euler models only).
    pub fn pressure(&self, u: &[f64]) -> f64 {
        match self {
            FluxModel::Euler1d { gamma } => (gamma - 1.0) * (u[2] - u[1] * u[1] / (2.0 * u[0])),
            FluxModel::Euler2d { gamma } => {
                let ke = (u[1] * u[1] + u[2] * u[2]) / (2.0 * u[0]);
                (gamma - 1.0) * (u[3] - ke)
            }
            _ => panic!("pressure undefined for scalar models"),
        }
    }

    /// Evaluates the flux along `axis` into `out`.
    ///
    /// Fails with the offending state when an Euler state has non-positive
    /// density or pressure.
    pub fn flux(&self, u: &[f64], axis: Axis, out: &mut [f64]) -> Result<(), AdmissibilityError> {
        debug_assert_eq!(u.len(), self.ncomp());
        debug_assert_eq!(out.len(), self.ncomp());
        match self {
            FluxModel::Advection { a } => {
                out[0] = a * u[0];
                Ok(())
            }
            FluxModel::Burgers => {
                out[0] = 0.5 * u[0] * u[0];
                Ok(())
            }
            FluxModel::Euler1d { .. } => {
                let p = self.pressure(u);
                if u[0] <= 0.0 || p <= 0.0 {
                    return Err(AdmissibilityError {
                        density: u[0],
                        pressure: p,
                    });
                }
                let vel = u[1] / u[0];
                out[0] = u[1];
                out[1] = u[1] * vel + p;
                out[2] = vel * (u[2] + p);
                Ok(())
            }
            FluxModel::Euler2d { .. } => {
                let p = self.pressure(u);
                if u[0] <= 0.0 || p <= 0.0 {
                    return Err(AdmissibilityError {
                        density: u[0],
                        pressure: p,
                    });
                }
                // Shared kernel for both directions: normal momentum mn,
                // tangential momentum mt; the component layout mirrors
                // under an x <-> y swap so transposed data produce
                // bitwise-transposed fluxes.
                let (n, t) = match axis {
                    Axis::X => (1, 2),
                    Axis::Y => (2, 1),
                };
                let vn = u[n] / u[0];
                out[0] = u[n];
                out[n] = u[n] * vn + p;
                out[t] = u[t] * vn;
                out[3] = vn * (u[3] + p);
                Ok(())
            }
        }
    }

    /// Algebraic flux evaluation for Taylor-predicted states: the formula
    /// is evaluated as long as it stays meaningful (positive density for
    /// the divisions, finite output). A transiently negative predicted
    /// pressure is tolerated here, it only enters polynomially; callers
    /// fall back when this returns false.
    pub fn flux_predicted(&self, u: &[f64], axis: Axis, out: &mut [f64]) -> bool {
        match self {
            FluxModel::Advection { .. } | FluxModel::Burgers => {
                self.flux(u, axis, out).expect("scalar flux is total");
                u[0].is_finite()
            }
            FluxModel::Euler1d { .. } | FluxModel::Euler2d { .. } => {
                if u[0].is_nan() || u[0] <= 0.0 {
                    return false;
                }
                let p = self.pressure(u);
                if !p.is_finite() {
                    return false;
                }
                let n = self.ncomp();
                match self {
                    FluxModel::Euler1d { .. } => {
                        let vel = u[1] / u[0];
                        out[0] = u[1];
                        out[1] = u[1] * vel + p;
                        out[2] = vel * (u[2] + p);
                    }
                    _ => {
                        let (nn, t) = match axis {
                            Axis::X => (1, 2),
                            Axis::Y => (2, 1),
                        };
                        let vn = u[nn] / u[0];
                        out[0] = u[nn];
                        out[nn] = u[nn] * vn + p;
                        out[t] = u[t] * vn;
                        out[3] = vn * (u[3] + p);
                    }
                }
                out[..n].iter().all(|v| v.is_finite())
            }
        }
    }

    /// Largest signal speed of a single state along `axis`.
    pub fn wave_speed(&self, u: &[f64], axis: Axis) -> Result<f64, AdmissibilityError> {
        match self {
            FluxModel::Advection { a } => Ok(a.abs()),
            FluxModel::Burgers => Ok(u[0].abs()),
            FluxModel::Euler1d { gamma } => {
                let p = self.pressure(u);
                if u[0] <= 0.0 || p <= 0.0 {
                    return Err(AdmissibilityError {
                        density: u[0],
                        pressure: p,
                    });
                }
                Ok((u[1] / u[0]).abs() + (gamma * p / u[0]).sqrt())
            }
            FluxModel::Euler2d { gamma } => {
                let p = self.pressure(u);
                if u[0] <= 0.0 || p <= 0.0 {
                    return Err(AdmissibilityError {
                        density: u[0],
                        pressure: p,
                    });
                }
                let m = match axis {
                    Axis::X => u[1],
                    Axis::Y => u[2],
                };
                Ok((m / u[0]).abs() + (gamma * p / u[0]).sqrt())
            }
        }
    }

    /// Global maximum wave speed over a set of states (chunked by
    /// component count) along `axis`.
    pub fn max_wave_speed(&self, states: &[f64], axis: Axis) -> Result<f64, AdmissibilityError> {
        let m = self.ncomp();
        let mut alpha: f64 = 0.0;
        for cell in states.chunks_exact(m) {
            alpha = alpha.max(self.wave_speed(cell, axis)?);
        }
        Ok(alpha)
    }

    /// Primitive -> conserved conversion. Scalars pass through.
    pub fn primitive_to_conserved(&self, prim: &[f64]) -> Result<Vec<f64>, AdmissibilityError> {
        match self {
            FluxModel::Advection { .. } | FluxModel::Burgers => Ok(vec![prim[0]]),
            FluxModel::Euler1d { gamma } => {
                let w = EulerPrimitive1D::new(prim[0], prim[1], prim[2]);
                w.check()?;
                let e = w.p / (gamma - 1.0) + 0.5 * w.rho * w.u * w.u;
                Ok(vec![w.rho, w.rho * w.u, e])
            }
            FluxModel::Euler2d { gamma } => {
                let w = EulerPrimitive2D::new(prim[0], prim[1], prim[2], prim[3]);
                w.check()?;
                let e = w.p / (gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v);
                Ok(vec![w.rho, w.rho * w.u, w.rho * w.v, e])
            }
        }
    }

    /// Conserved -> primitive conversion, rejecting inadmissible states.
    pub fn conserved_to_primitive(&self, u: &[f64]) -> Result<Vec<f64>, AdmissibilityError> {
        match self {
            FluxModel::Advection { .. } | FluxModel::Burgers => Ok(vec![u[0]]),
            FluxModel::Euler1d { .. } => {
                let p = self.pressure(u);
                if u[0] <= 0.0 || p <= 0.0 {
                    return Err(AdmissibilityError {
                        density: u[0],
                        pressure: p,
                    });
                }
                Ok(vec![u[0], u[1] / u[0], p])
            }
            FluxModel::Euler2d { .. } => {
                let p = self.pressure(u);
                if u[0] <= 0.0 || p <= 0.0 {
                    return Err(AdmissibilityError {
                        density: u[0],
                        pressure: p,
                    });
                }
                Ok(vec![u[0], u[1] / u[0], u[2] / u[0], p])
            }
        }
    }
}

/// Global Lax-Friedrichs flux splitting, componentwise:
/// `f+- = (f +- alpha u) / 2`; the parts recombine to `f` exactly.
pub fn lax_friedrichs_split(
    flux: &[f64],
    state: &[f64],
    alpha: f64,
    plus: &mut [f64],
    minus: &mut [f64],
) {
    for c in 0..flux.len() {
        plus[c] = 0.5 * (flux[c] + alpha * state[c]);
        minus[c] = 0.5 * (flux[c] - alpha * state[c]);
    }
}
