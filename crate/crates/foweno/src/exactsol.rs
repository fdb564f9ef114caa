//! Reference solutions: the exact Riemann solver for the 1D Euler
//! equations, exact advection transport, and the pre-shock characteristic
//! solution of Burgers' equation.
//!
//! The Riemann solver follows the standard pressure-function formulation
//! (Toro, "Riemann Solvers and Numerical Methods for Fluid Dynamics"):
//! Newton iteration on the star pressure starting from the two-rarefaction
//! approximation, then self-similar sampling in xi = x / t.

use thiserror::Error;

use crate::models::EulerPrimitive1D;

#[derive(Debug, Error, PartialEq)]
pub enum ExactSolError {
    #[error("initial states generate vacuum (pressure positivity condition violated)")]
    VacuumGenerated,
    #[error("pressure iteration did not converge within {iters} iterations")]
    NoConvergence { iters: usize },
    #[error("time {t} is past the shock-formation time {t_break}")]
    PastBreakingTime { t: f64, t_break: f64 },
    #[error("characteristic root bracketing failed at x = {x}")]
    BracketFailure { x: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveKind {
    Shock,
    Rarefaction,
}

/// Solved Riemann problem: star-region values, wave pattern, and a
/// self-similar sampler over xi = x / t.
#[derive(Debug, Clone)]
pub struct RiemannSolution {
    pub p_star: f64,
    pub u_star: f64,
    pub left_wave: WaveKind,
    pub right_wave: WaveKind,
    pub gamma: f64,
    left: EulerPrimitive1D,
    right: EulerPrimitive1D,
}

/// f_K(p): velocity jump across the left or right wave as a function of
/// the star pressure, together with its derivative.
fn wave_function(p: f64, state: &EulerPrimitive1D, gamma: f64) -> (f64, f64) {
    let c = state.sound_speed(gamma);
    if p > state.p {
        // Shock branch.
        let a = 2.0 / ((gamma + 1.0) * state.rho);
        let b = (gamma - 1.0) / (gamma + 1.0) * state.p;
        let root = (a / (p + b)).sqrt();
        let f = (p - state.p) * root;
        let df = root * (1.0 - 0.5 * (p - state.p) / (b + p));
        (f, df)
    } else {
        // Rarefaction branch.
        let z = (gamma - 1.0) / (2.0 * gamma);
        let f = 2.0 * c / (gamma - 1.0) * ((p / state.p).powf(z) - 1.0);
        let df = 1.0 / (state.rho * c) * (p / state.p).powf(-(gamma + 1.0) / (2.0 * gamma));
        (f, df)
    }
}

/// Exact solution of the Riemann problem for the 1D Euler equations.
///
/// The Newton iteration on the pressure function converges to a relative
/// pressure change of 1e-12; failure to converge within 100 iterations and
/// vacuum-generating data are reported explicitly.
pub fn euler_exact_riemann(
    left: EulerPrimitive1D,
    right: EulerPrimitive1D,
    gamma: f64,
) -> Result<RiemannSolution, ExactSolError> {
    left.check().expect("admissible left state");
    right.check().expect("admissible right state");
    let cl = left.sound_speed(gamma);
    let cr = right.sound_speed(gamma);
    let du = right.u - left.u;
    if 2.0 * (cl + cr) / (gamma - 1.0) <= du {
        return Err(ExactSolError::VacuumGenerated);
    }

    // Two-rarefaction initial guess, clamped positive.
    let z = (gamma - 1.0) / (2.0 * gamma);
    let guess = ((cl + cr - 0.5 * (gamma - 1.0) * du)
        / (cl / left.p.powf(z) + cr / right.p.powf(z)))
    .powf(1.0 / z);
    let mut p = guess.max(1e-14);

    let mut converged = false;
    for _ in 0..100 {
        let (fl, dfl) = wave_function(p, &left, gamma);
        let (fr, dfr) = wave_function(p, &right, gamma);
        let f = fl + fr + du;
        let df = dfl + dfr;
        let step = f / df;
        let next = (p - step).max(1e-14);
        let change = (next - p).abs() / (0.5 * (next + p));
        p = next;
        if change <= 1e-12 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(ExactSolError::NoConvergence { iters: 100 });
    }

    let (fl, _) = wave_function(p, &left, gamma);
    let (fr, _) = wave_function(p, &right, gamma);
    let u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
    Ok(RiemannSolution {
        p_star: p,
        u_star,
        left_wave: if p > left.p {
            WaveKind::Shock
        } else {
            WaveKind::Rarefaction
        },
        right_wave: if p > right.p {
            WaveKind::Shock
        } else {
            WaveKind::Rarefaction
        },
        gamma,
        left,
        right,
    })
}

impl RiemannSolution {
    /// Primitive state at the similarity coordinate `xi = x / t`.
    pub fn sample(&self, xi: f64) -> EulerPrimitive1D {
        let g = self.gamma;
        let (ps, us) = (self.p_star, self.u_star);
        if xi <= us {
            // Left side of the contact.
            let s = &self.left;
            let c = s.sound_speed(g);
            match self.left_wave {
                WaveKind::Shock => {
                    let pr = ps / s.p;
                    let speed =
                        s.u - c * ((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g)).sqrt();
                    if xi <= speed {
                        *s
                    } else {
                        let g6 = (g - 1.0) / (g + 1.0);
                        let rho = s.rho * ((pr + g6) / (g6 * pr + 1.0));
                        EulerPrimitive1D::new(rho, us, ps)
                    }
                }
                WaveKind::Rarefaction => {
                    let head = s.u - c;
                    let cs = c * (ps / s.p).powf((g - 1.0) / (2.0 * g));
                    let tail = us - cs;
                    if xi <= head {
                        *s
                    } else if xi >= tail {
                        let rho = s.rho * (ps / s.p).powf(1.0 / g);
                        EulerPrimitive1D::new(rho, us, ps)
                    } else {
                        let f = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * c) * (s.u - xi);
                        let rho = s.rho * f.powf(2.0 / (g - 1.0));
                        let u = 2.0 / (g + 1.0) * (c + 0.5 * (g - 1.0) * s.u + xi);
                        let p = s.p * f.powf(2.0 * g / (g - 1.0));
                        EulerPrimitive1D::new(rho, u, p)
                    }
                }
            }
        } else {
            let s = &self.right;
            let c = s.sound_speed(g);
            match self.right_wave {
                WaveKind::Shock => {
                    let pr = ps / s.p;
                    let speed =
                        s.u + c * ((g + 1.0) / (2.0 * g) * pr + (g - 1.0) / (2.0 * g)).sqrt();
                    if xi >= speed {
                        *s
                    } else {
                        let g6 = (g - 1.0) / (g + 1.0);
                        let rho = s.rho * ((pr + g6) / (g6 * pr + 1.0));
                        EulerPrimitive1D::new(rho, us, ps)
                    }
                }
                WaveKind::Rarefaction => {
                    let head = s.u + c;
                    let cs = c * (ps / s.p).powf((g - 1.0) / (2.0 * g));
                    let tail = us + cs;
                    if xi >= head {
                        *s
                    } else if xi <= tail {
                        let rho = s.rho * (ps / s.p).powf(1.0 / g);
                        EulerPrimitive1D::new(rho, us, ps)
                    } else {
                        let f = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * c) * (s.u - xi);
                        let rho = s.rho * f.powf(2.0 / (g - 1.0));
                        let u = 2.0 / (g + 1.0) * (-c + 0.5 * (g - 1.0) * s.u + xi);
                        let p = s.p * f.powf(2.0 * g / (g - 1.0));
                        EulerPrimitive1D::new(rho, u, p)
                    }
                }
            }
        }
    }
}

/// Exact periodic advection: `u(x, t) = u0(wrap(x - a t))`.
pub fn advection_exact(
    u0: &dyn Fn(f64) -> f64,
    a: f64,
    xmin: f64,
    xmax: f64,
    x: f64,
    t: f64,
) -> f64 {
    let period = xmax - xmin;
    let mut xi = (x - a * t - xmin) % period;
    if xi < 0.0 {
        xi += period;
    }
    u0(xmin + xi)
}

/// First time at which characteristics of Burgers' equation cross:
/// `-1 / min u0'` (infinite for non-decreasing profiles). The minimum
/// slope is located by dense sampling plus local refinement.
pub fn burgers_breaking_time(u0_slope: &dyn Fn(f64) -> f64, xmin: f64, xmax: f64) -> f64 {
    let samples = 4096;
    let h = (xmax - xmin) / samples as f64;
    let mut best_x = xmin;
    let mut best = f64::INFINITY;
    for i in 0..=samples {
        let x = xmin + i as f64 * h;
        let s = u0_slope(x);
        if s < best {
            best = s;
            best_x = x;
        }
    }
    // Golden-section refinement around the coarse minimum.
    let (mut lo, mut hi) = (best_x - h, best_x + h);
    let phi = 0.5 * (3.0 - 5f64.sqrt());
    for _ in 0..80 {
        let a = lo + phi * (hi - lo);
        let b = hi - phi * (hi - lo);
        if u0_slope(a) < u0_slope(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let min_slope = best.min(u0_slope(0.5 * (lo + hi)));
    if min_slope >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / min_slope
    }
}

/// Pre-shock solution of Burgers' equation by characteristic tracing:
/// solves `x = xi + u0(xi) t` with a bisection-safeguarded Newton
/// iteration and returns `u0(xi)`.
pub fn burgers_characteristic(
    u0: &dyn Fn(f64) -> f64,
    u0_slope: &dyn Fn(f64) -> f64,
    breaking_time: f64,
    x: f64,
    t: f64,
) -> Result<f64, ExactSolError> {
    if t >= breaking_time {
        return Err(ExactSolError::PastBreakingTime {
            t,
            t_break: breaking_time,
        });
    }
    if t == 0.0 {
        return Ok(u0(x));
    }
    let g = |xi: f64| xi + u0(xi) * t - x;
    // Expand a bracket around x; g is strictly increasing for t below the
    // breaking time.
    let mut half = t.abs().max(1e-6);
    let (mut lo, mut hi) = (x - half, x + half);
    let mut tries = 0;
    while g(lo) > 0.0 || g(hi) < 0.0 {
        half *= 2.0;
        lo = x - half;
        hi = x + half;
        tries += 1;
        if tries > 60 {
            return Err(ExactSolError::BracketFailure { x });
        }
    }
    let mut xi = x;
    if !(lo..=hi).contains(&xi) {
        xi = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let r = g(xi);
        if r.abs() <= 1e-12 * (1.0 + x.abs()) {
            return Ok(u0(xi));
        }
        if r > 0.0 {
            hi = xi;
        } else {
            lo = xi;
        }
        let d = 1.0 + u0_slope(xi) * t;
        let newton = xi - r / d;
        xi = if d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(u0(xi))
}
