//! Time stepping: SSP Runge-Kutta and approximate Taylor methods in
//! conservative form.
//!
//! The approximate Taylor methods avoid the Cauchy-Kovalevskaya procedure
//! by computing time derivatives of the flux recursively: Taylor-predict
//! states at neighbouring time levels, evaluate the flux there, and
//! differentiate numerically in time, then in space.
//!
//! * LAT uses global centered differentiation (`numdiff` centered family);
//!   one step of degree m touches a wide stencil.
//! * CAT keeps every recursion local to the `2p` cells around one
//!   interface (`numdiff` interpolatory family) and assembles a numerical
//!   flux there; for linear problems CAT reduces exactly to the classical
//!   Lax-Wendroff scheme.
//!
//! The first time derivative is replaced by a WENO flux difference built
//! from global Lax-Friedrichs splitting, which is what suppresses Gibbs
//! oscillations; a `Centered` variant keeps the plain interpolatory term
//! instead (the linear-reduction form, useful for validation).

use thiserror::Error;

use crate::grid::{fill_ghosts, Boundary, Grid1, State1};
use crate::models::{lax_friedrichs_split, AdmissibilityError, Axis, FluxModel};
use crate::numdiff::{centered_diff_coeffs, interp_avg_coeffs, interp_diff_coeffs};
use crate::reconstruct::{ReconstructError, ReconstructionConfig};
use num_rational::Rational64;

pub(crate) const MAX_COMP: usize = 4;
pub(crate) const MAX_WIN: usize = 8;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("solution diverged at step {step} (interior max exceeded 1e6 or NaN)")]
    Diverged { step: u64 },
    #[error("inadmissible state in cell {cell} at t = {time:.6e}: {source}")]
    Inadmissible {
        cell: isize,
        time: f64,
        #[source]
        source: AdmissibilityError,
    },
    #[error("inadmissible state in cell ({i}, {j}) at t = {time:.6e}: {source}")]
    Inadmissible2d {
        i: isize,
        j: isize,
        time: f64,
        #[source]
        source: AdmissibilityError,
    },
    #[error("scheme configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
}

/// Replaces the k = 1 Taylor term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstOrderTerm {
    /// WENO interface flux on split fluxes (the shock-capturing form).
    WenoFlux,
    /// Plain centered/interpolatory first derivative (linear-reduction form).
    Centered,
}

/// Half-width selection for the LAT differentiation formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatWidths {
    /// Spatial first-derivative formulas use p = ceil((m+1-k)/2) at level k,
    /// temporal differentiation uses p = (m-1)/2 (requires odd m).
    Graded,
    /// One half-width everywhere (requires m - 1 <= 2p).
    Uniform(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeIntegrator {
    SspRk3,
    /// Ten-stage fourth-order low-storage SSP scheme.
    SspRk104,
    Lat {
        m: usize,
        widths: LatWidths,
    },
    /// Compact approximate Taylor of degree m = 2p.
    Cat {
        m: usize,
    },
}

impl TimeIntegrator {
    pub fn lat(m: usize) -> Self {
        TimeIntegrator::Lat {
            m,
            widths: LatWidths::Graded,
        }
    }

    pub fn cat(m: usize) -> Self {
        TimeIntegrator::Cat { m }
    }
}

/// Full scheme: integrator, CFL number, reconstruction, and the k = 1 term.
#[derive(Debug, Clone)]
pub struct SchemeConfig {
    pub integrator: TimeIntegrator,
    pub cfl: f64,
    pub recon: ReconstructionConfig,
    pub first_order: FirstOrderTerm,
}

impl SchemeConfig {
    pub fn new(integrator: TimeIntegrator, cfl: f64, recon: ReconstructionConfig) -> Self {
        Self {
            integrator,
            cfl,
            recon,
            first_order: FirstOrderTerm::WenoFlux,
        }
    }

    pub fn with_first_order(mut self, first_order: FirstOrderTerm) -> Self {
        self.first_order = first_order;
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.cfl.is_nan() || self.cfl <= 0.0 {
            return Err(SolverError::Config("cfl must be positive".into()));
        }
        match self.integrator {
            TimeIntegrator::Lat { m, widths } => {
                if m < 2 {
                    return Err(SolverError::Config("LAT degree must be at least 2".into()));
                }
                match widths {
                    LatWidths::Graded if m % 2 == 0 => Err(SolverError::Config(
                        "graded LAT widths require an odd Taylor degree".into(),
                    )),
                    LatWidths::Uniform(p) if m - 1 > 2 * p => Err(SolverError::Config(
                        "uniform LAT half-width too small for the Taylor degree".into(),
                    )),
                    _ => Ok(()),
                }
            }
            TimeIntegrator::Cat { m } => {
                if m < 2 || m % 2 != 0 {
                    return Err(SolverError::Config(
                        "CAT degree must be even and at least 2 (m = 2p)".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Ghost cells one step needs; generous by construction.
    pub fn ghost_width(&self) -> usize {
        let pr = self.recon.pair_extents().1; // p + 1
        match self.integrator {
            TimeIntegrator::SspRk3 | TimeIntegrator::SspRk104 => pr,
            TimeIntegrator::Cat { m } => self.recon.p + m,
            TimeIntegrator::Lat { m, widths } => {
                let first = match (self.first_order, widths) {
                    (FirstOrderTerm::WenoFlux, _) => pr,
                    (FirstOrderTerm::Centered, LatWidths::Graded) => m.div_ceil(2),
                    (FirstOrderTerm::Centered, LatWidths::Uniform(p)) => p,
                };
                let extra: usize = match widths {
                    LatWidths::Graded => (1..m).map(|k| (m + 1 - k).div_ceil(2)).sum(),
                    LatWidths::Uniform(p) => (m - 1) * p,
                };
                first + extra
            }
        }
    }
}

/// Step-level instrumentation, accumulated by the drivers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunStats {
    /// Semidiscrete right-hand-side evaluations.
    pub rhs_evals: u64,
    /// Pointwise flux evaluations (including Taylor predictions).
    pub flux_evals: u64,
    /// Interfaces (CAT) or cells (LAT) that fell back to the first-order
    /// term after an inadmissible Taylor prediction.
    pub fallbacks: u64,
    pub steps: u64,
}

// --- padded helpers ------------------------------------------------------

/// Values on the padded cell range, cell-major.
pub(crate) struct PVec {
    pub data: Vec<f64>,
    pub w: usize,
    pub m: usize,
}

impl PVec {
    pub fn zeros(n: usize, w: usize, m: usize) -> Self {
        Self {
            data: vec![0.0; (n + 2 * w) * m],
            w,
            m,
        }
    }

    #[inline]
    pub fn idx(&self, i: isize) -> usize {
        ((i + self.w as isize) as usize) * self.m
    }

    #[inline]
    pub fn cell(&self, i: isize) -> &[f64] {
        let k = self.idx(i);
        &self.data[k..k + self.m]
    }

    #[inline]
    pub fn cell_mut(&mut self, i: isize) -> &mut [f64] {
        let k = self.idx(i);
        let m = self.m;
        &mut self.data[k..k + m]
    }
}

/// Interface-indexed values: entry `i` corresponds to `x_{i+1/2}`.
pub struct IfaceFlux {
    pub lo: isize,
    pub m: usize,
    pub data: Vec<f64>,
}

impl IfaceFlux {
    pub fn zeros(lo: isize, hi: isize, m: usize) -> Self {
        Self {
            lo,
            m,
            data: vec![0.0; ((hi - lo + 1) as usize) * m],
        }
    }

    #[inline]
    pub fn at(&self, i: isize) -> &[f64] {
        let k = ((i - self.lo) as usize) * self.m;
        &self.data[k..k + self.m]
    }

    #[inline]
    pub(crate) fn at_mut(&mut self, i: isize) -> &mut [f64] {
        let k = ((i - self.lo) as usize) * self.m;
        let m = self.m;
        &mut self.data[k..k + m]
    }
}

/// Splits `f(u)` over all padded cells with the global speed `alpha`.
pub(crate) struct SplitFluxes {
    pub plus: PVec,
    pub minus: PVec,
    pub raw: PVec,
    pub alpha: f64,
}

pub(crate) fn eval_and_split(
    state: &State1,
    model: FluxModel,
    stats: &mut RunStats,
) -> Result<SplitFluxes, SolverError> {
    let m = state.ncomp;
    let (n, w) = (state.n as isize, state.w as isize);
    let mut raw = PVec::zeros(state.n, state.w, m);
    let mut alpha: f64 = 0.0;
    for i in -w..n + w {
        let u = state.cell(i);
        model
            .flux(u, Axis::X, raw.cell_mut(i))
            .map_err(|source| SolverError::Inadmissible {
                cell: i,
                time: state.time,
                source,
            })?;
        alpha = alpha.max(model.wave_speed(u, Axis::X).map_err(|source| {
            SolverError::Inadmissible {
                cell: i,
                time: state.time,
                source,
            }
        })?);
    }
    stats.flux_evals += (state.n + 2 * state.w) as u64;
    let mut plus = PVec::zeros(state.n, state.w, m);
    let mut minus = PVec::zeros(state.n, state.w, m);
    for i in -w..n + w {
        let k = raw.idx(i);
        lax_friedrichs_split(
            &raw.data[k..k + m],
            state.cell(i),
            alpha,
            &mut plus.data[k..k + m],
            &mut minus.data[k..k + m],
        );
    }
    Ok(SplitFluxes {
        plus,
        minus,
        raw,
        alpha,
    })
}

/// WENO interface flux from one pair of split-flux windows.
///
/// `fplus` covers the upwind window (cells `i-p ..= i+p`, or the 4-cell
/// extended stencil for OWENO3), `fminus` the downwind window in natural
/// order (cells `i+1-p ..= i+1+p`, or the same 4 cells for OWENO3).
pub fn weno_interface_flux(
    recon: &ReconstructionConfig,
    fplus: &[f64],
    fminus: &[f64],
) -> Result<f64, ReconstructError> {
    let a = recon.reconstruct(fplus)?;
    let b = recon.reconstruct_mirrored(fminus)?;
    Ok(a.value + b.value)
}

/// Interface fluxes for `i in lo..=hi` (interface `i` = `x_{i+1/2}`),
/// componentwise over the split-flux arrays.
pub(crate) fn fhat_range(
    recon: &ReconstructionConfig,
    split: &SplitFluxes,
    lo: isize,
    hi: isize,
) -> IfaceFlux {
    let m = split.plus.m;
    let wl = recon.window_len();
    let is_oweno3 = matches!(recon.family, crate::reconstruct::Family::Oweno3);
    let p = recon.p as isize;
    let mut out = IfaceFlux::zeros(lo, hi, m);
    let mut wp = [0.0; MAX_WIN];
    let mut wm = [0.0; MAX_WIN];
    let mut dump = [0.0; 4];
    for i in lo..=hi {
        let (pstart, mstart) = if is_oweno3 {
            (i - 1, i - 1)
        } else {
            (i - p, i + 1 - p)
        };
        for c in 0..m {
            for (t, buf) in wp[..wl].iter_mut().enumerate() {
                *buf = split.plus.cell(pstart + t as isize)[c];
            }
            for (t, buf) in wm[..wl].iter_mut().enumerate() {
                *buf = split.minus.cell(mstart + t as isize)[c];
            }
            let v =
                recon.kernel(&wp[..wl], &mut dump) + recon.kernel_mirrored(&wm[..wl], &mut dump);
            out.at_mut(i)[c] = v;
        }
    }
    out
}

/// Conservative semidiscrete right-hand side.
pub struct SemidiscreteRhs {
    /// Interface fluxes at `x_{i+1/2}` for `i in -1..=n-1`.
    pub flux_hat: IfaceFlux,
    /// `-(fhat_{i+1/2} - fhat_{i-1/2}) / dx` per interior cell, cell-major.
    pub rhs: Vec<f64>,
    pub alpha: f64,
}

/// Computes the WENO semidiscrete RHS; ghost cells are filled here.
pub fn semidiscrete_rhs(
    state: &mut State1,
    grid: &Grid1,
    model: FluxModel,
    recon: &ReconstructionConfig,
    bc: Boundary,
    stats: &mut RunStats,
) -> Result<SemidiscreteRhs, SolverError> {
    fill_ghosts(state, bc);
    let split = eval_and_split(state, model, stats)?;
    let n = state.n as isize;
    let m = state.ncomp;
    let fhat = fhat_range(recon, &split, -1, n - 1);
    let dx = grid.dx();
    let mut rhs = vec![0.0; state.n * m];
    for i in 0..n {
        for c in 0..m {
            rhs[(i as usize) * m + c] = -(fhat.at(i)[c] - fhat.at(i - 1)[c]) / dx;
        }
    }
    stats.rhs_evals += 1;
    Ok(SemidiscreteRhs {
        flux_hat: fhat,
        rhs,
        alpha: split.alpha,
    })
}

// --- SSP Runge-Kutta ------------------------------------------------------

/// Shu-Osher three-stage third-order SSP scheme on a flat state vector.
pub fn ssprk3_step<E>(
    u: &mut [f64],
    dt: f64,
    mut rhs: impl FnMut(&[f64]) -> Result<Vec<f64>, E>,
) -> Result<(), E> {
    let n = u.len();
    let l0 = rhs(u)?;
    let mut u1: Vec<f64> = (0..n).map(|i| u[i] + dt * l0[i]).collect();
    let l1 = rhs(&u1)?;
    for i in 0..n {
        u1[i] = 0.75 * u[i] + 0.25 * u1[i] + 0.25 * dt * l1[i];
    }
    let l2 = rhs(&u1)?;
    for i in 0..n {
        u[i] = u[i] / 3.0 + 2.0 / 3.0 * u1[i] + 2.0 / 3.0 * dt * l2[i];
    }
    Ok(())
}

/// Ketcheson's ten-stage fourth-order low-storage SSP scheme
/// (SIAM J. Sci. Comput. 30, 2008). Exactly ten RHS evaluations.
pub fn ssprk104_step<E>(
    u: &mut [f64],
    dt: f64,
    mut rhs: impl FnMut(&[f64]) -> Result<Vec<f64>, E>,
) -> Result<(), E> {
    let n = u.len();
    let mut q1 = u.to_vec();
    let mut q2 = u.to_vec();
    for _ in 0..5 {
        let l = rhs(&q1)?;
        for i in 0..n {
            q1[i] += dt / 6.0 * l[i];
        }
    }
    for i in 0..n {
        q2[i] = q2[i] / 25.0 + 9.0 / 25.0 * q1[i];
        q1[i] = 15.0 * q2[i] - 5.0 * q1[i];
    }
    for _ in 0..4 {
        let l = rhs(&q1)?;
        for i in 0..n {
            q1[i] += dt / 6.0 * l[i];
        }
    }
    let l = rhs(&q1)?;
    for i in 0..n {
        u[i] = q2[i] + 0.6 * q1[i] + 0.1 * dt * l[i];
    }
    Ok(())
}

// --- LAT -------------------------------------------------------------------

pub(crate) struct LatTables {
    m: usize,
    p_time: usize,
    /// Centered D^1 weights for the level-k spatial derivative, k = 2..=m.
    dx_weights: Vec<Vec<f64>>,
    dx_halfwidths: Vec<usize>,
    /// Centered D^{k-1} weights in time, k = 2..=m.
    dt_weights: Vec<Vec<f64>>,
    /// Centered D^1 for the first derivative (centered variant only).
    d1_first: Vec<f64>,
    p_first: usize,
}

impl LatTables {
    pub fn build(m: usize, widths: LatWidths) -> Self {
        let p_time = match widths {
            LatWidths::Graded => (m - 1) / 2,
            LatWidths::Uniform(p) => p,
        };
        let p_for = |k: usize| match widths {
            LatWidths::Graded => (m + 1 - k).div_ceil(2),
            LatWidths::Uniform(p) => p,
        };
        let dx_halfwidths: Vec<usize> = (2..=m).map(p_for).collect();
        let dx_weights = dx_halfwidths
            .iter()
            .map(|&p| centered_diff_coeffs(p, 1).unwrap().weights)
            .collect();
        let dt_weights = (2..=m)
            .map(|k| centered_diff_coeffs(p_time.max(1), k - 1).unwrap().weights)
            .collect();
        let p_first = p_for(1);
        let d1_first = centered_diff_coeffs(p_first, 1).unwrap().weights;
        Self {
            m,
            p_time: p_time.max(1),
            dx_weights,
            dx_halfwidths,
            dt_weights,
            d1_first,
            p_first,
        }
    }
}

/// One step of the Lax-Wendroff approximate Taylor method.
///
/// Ghost cells are filled once from the incoming state; the Taylor
/// recursion shrinks the usable margin level by level. A cell whose
/// Taylor-predicted state loses admissibility freezes its predicted flux
/// at the current-time value, which zeroes that cell's higher-order
/// contributions (logged as a fallback).
#[allow(clippy::too_many_arguments)]
pub(crate) fn lat_step(
    state: &mut State1,
    grid: &Grid1,
    model: FluxModel,
    recon: &ReconstructionConfig,
    tables: &LatTables,
    first_order: FirstOrderTerm,
    bc: Boundary,
    dt: f64,
    stats: &mut RunStats,
) -> Result<(), SolverError> {
    fill_ghosts(state, bc);
    let (n, w) = (state.n as isize, state.w as isize);
    let nc = state.ncomp;
    let dx = grid.dx();
    let m = tables.m;
    let split = eval_and_split(state, model, stats)?;

    // Margin of cells beyond the interior where the first derivative is known.
    let first_margin = match first_order {
        FirstOrderTerm::WenoFlux => {
            let (el, er) = recon.pair_extents();
            w - (el.max(er) as isize)
        }
        FirstOrderTerm::Centered => w - tables.p_first as isize,
    };
    assert!(first_margin >= 0, "ghost width too small for LAT");

    // u_derivs[l] approximates the (l+1)-th time derivative.
    let mut u_derivs: Vec<PVec> = Vec::with_capacity(m);
    let mut d1 = PVec::zeros(state.n, state.w, nc);
    match first_order {
        FirstOrderTerm::WenoFlux => {
            let fhat = fhat_range(recon, &split, -first_margin - 1, n - 1 + first_margin);
            for i in -first_margin..n + first_margin {
                for c in 0..nc {
                    d1.cell_mut(i)[c] = -(fhat.at(i)[c] - fhat.at(i - 1)[c]) / dx;
                }
            }
        }
        FirstOrderTerm::Centered => {
            let p1 = tables.p_first as isize;
            for i in -first_margin..n + first_margin {
                for c in 0..nc {
                    let mut acc = 0.0;
                    for (t, wgt) in tables.d1_first.iter().enumerate() {
                        acc += wgt * split.raw.cell(i - p1 + t as isize)[c];
                    }
                    d1.cell_mut(i)[c] = -acc / dx;
                }
            }
        }
    }
    u_derivs.push(d1);

    let mut margin = first_margin;
    let mut fell_back = vec![false; (state.n + 2 * state.w).max(1)];
    for k in 2..=m {
        // Taylor-predicted fluxes at time offsets r = -p_time..=p_time,
        // then the (k-1)-th time derivative of the flux, pointwise.
        let pt = tables.p_time as isize;
        let wt = &tables.dt_weights[k - 2];
        let mut ftilde = PVec::zeros(state.n, state.w, nc);
        let mut pred = [0.0; MAX_COMP];
        let mut fpred = [0.0; MAX_COMP];
        for i in -margin..n + margin {
            let base = state.cell(i);
            let mut acc = [0.0; MAX_COMP];
            let mut ok = true;
            for r in -pt..=pt {
                let rdt = r as f64 * dt;
                pred[..nc].copy_from_slice(base);
                let mut fac = 1.0;
                for (l, ud) in u_derivs.iter().enumerate() {
                    fac *= rdt / (l as f64 + 1.0);
                    let d = ud.cell(i);
                    for c in 0..nc {
                        pred[c] += fac * d[c];
                    }
                }
                stats.flux_evals += 1;
                if !model.flux_predicted(&pred[..nc], Axis::X, &mut fpred[..nc]) {
                    ok = false;
                    break;
                }
                let wgt = wt[(r + pt) as usize];
                for c in 0..nc {
                    acc[c] += wgt * fpred[c];
                }
            }
            let dst = ftilde.cell_mut(i);
            if ok {
                let scale = dt.powi((k - 1) as i32);
                for c in 0..nc {
                    dst[c] = acc[c] / scale;
                }
            } else {
                // Freeze the predicted flux at its t_n value: the centered
                // time difference of a constant vanishes, so this cell stops
                // contributing beyond first order.
                let slot = (i + w) as usize;
                if !fell_back[slot] {
                    fell_back[slot] = true;
                    stats.fallbacks += 1;
                }
                for c in 0..nc {
                    dst[c] = 0.0;
                }
            }
        }

        let pk = tables.dx_halfwidths[k - 2] as isize;
        let wx = &tables.dx_weights[k - 2];
        margin -= pk;
        assert!(margin >= 0, "ghost width too small at level {k}");
        let mut uk = PVec::zeros(state.n, state.w, nc);
        for i in -margin..n + margin {
            for c in 0..nc {
                let mut acc = 0.0;
                for (t, wgt) in wx.iter().enumerate() {
                    acc += wgt * ftilde.cell(i - pk + t as isize)[c];
                }
                uk.cell_mut(i)[c] = -acc / dx;
            }
        }
        u_derivs.push(uk);
    }

    // Taylor update of the interior.
    for i in 0..n {
        let mut fac = 1.0;
        for (l, ud) in u_derivs.iter().enumerate() {
            fac *= dt / (l as f64 + 1.0);
            let d = ud.cell(i);
            let cellmut = state.cell_mut(i);
            for c in 0..nc {
                cellmut[c] += fac * d[c];
            }
        }
    }
    state.time += dt;
    Ok(())
}

// --- CAT -------------------------------------------------------------------

pub(crate) struct CatTables {
    p: usize,
    m: usize,
    /// gamma^{1,j} for j = -p+1..=p (first spatial derivative at offset j).
    a1j: Vec<Vec<f64>>,
    /// gamma^{k-1,0} in time for k = 2..=m.
    atime: Vec<Vec<f64>>,
    /// gamma^{0,1/2}: interface interpolation weights.
    ahalf: Vec<f64>,
}

impl CatTables {
    pub fn build(m: usize) -> Self {
        let p = m / 2;
        let a1j = (-(p as i64) + 1..=p as i64)
            .map(|j| {
                interp_diff_coeffs(p, 1, Rational64::new(j, 1))
                    .unwrap()
                    .weights
            })
            .collect();
        let atime = (2..=m)
            .map(|k| {
                interp_diff_coeffs(p, k - 1, Rational64::new(0, 1))
                    .unwrap()
                    .weights
            })
            .collect();
        // Sliding-average interface weights: the conservative difference of
        // the assembled flux telescopes into the full-order centered formula.
        let ahalf = interp_avg_coeffs(p, 0, Rational64::new(1, 2))
            .unwrap()
            .weights;
        Self {
            p,
            m,
            a1j,
            atime,
            ahalf,
        }
    }
}

const MAX_Q: usize = 6; // 2p for CAT6
const MAX_LVL: usize = 6; // m for CAT6

/// Compact approximate Taylor flux at one interface `x_{i+1/2}`.
///
/// `local` holds the stencil states u_{i-p+1..i+p} (cell-major) and
/// `local_flux` their fluxes; `fhat` is the WENO interface flux (`None`
/// selects the centered k = 1 term). Returns the flux and whether the
/// interface fell back to the first-order term.
#[allow(clippy::too_many_arguments)]
pub(crate) fn cat_flux(
    tables: &CatTables,
    model: FluxModel,
    local: &[f64],
    local_flux: &[f64],
    fhat: Option<&[f64]>,
    dt: f64,
    dx: f64,
    stats: &mut RunStats,
    out: &mut [f64],
) -> bool {
    let p = tables.p;
    let q = 2 * p;
    let m = tables.m;
    let nc = model.ncomp();

    let first: [f64; MAX_COMP] = {
        let mut f = [0.0; MAX_COMP];
        match fhat {
            Some(v) => f[..nc].copy_from_slice(v),
            None => {
                for (j, wgt) in tables.ahalf.iter().enumerate() {
                    for c in 0..nc {
                        f[c] += wgt * local_flux[j * nc + c];
                    }
                }
            }
        }
        f
    };

    // ftilde[l][j][c] ~ l-th time derivative of the flux at node j.
    let mut ftilde = [[[0.0; MAX_COMP]; MAX_Q]; MAX_LVL];
    let mut utilde = [[[0.0; MAX_COMP]; MAX_Q]; MAX_LVL];
    for j in 0..q {
        ftilde[0][j][..nc].copy_from_slice(&local_flux[j * nc..j * nc + nc]);
    }

    let mut pred = [0.0; MAX_COMP];
    let mut fpred = [0.0; MAX_COMP];
    let mut fell_back = false;
    'levels: for k in 2..=m {
        // (a) local time derivatives of the solution from the previous level.
        for j in 0..q {
            let wgt = &tables.a1j[j];
            for c in 0..nc {
                let mut acc = 0.0;
                for (r, wr) in wgt.iter().enumerate() {
                    acc += wr * ftilde[k - 2][r][c];
                }
                utilde[k - 2][j][c] = -acc / dx;
            }
        }
        // (b) Taylor predictions at the 2p time offsets and (c) the
        // (k-1)-th time derivative of the flux.
        let wt = &tables.atime[k - 2];
        let scale = dt.powi((k - 1) as i32);
        for j in 0..q {
            let base = &local[j * nc..j * nc + nc];
            let mut acc = [0.0; MAX_COMP];
            for roff in -(p as i64) + 1..=p as i64 {
                let rdt = roff as f64 * dt;
                pred[..nc].copy_from_slice(base);
                let mut fac = 1.0;
                for (l, ut) in utilde.iter().enumerate().take(k - 1) {
                    fac *= rdt / (l as f64 + 1.0);
                    for c in 0..nc {
                        pred[c] += fac * ut[j][c];
                    }
                }
                stats.flux_evals += 1;
                if !model.flux_predicted(&pred[..nc], Axis::X, &mut fpred[..nc]) {
                    fell_back = true;
                    break 'levels;
                }
                let wr = wt[(roff + p as i64 - 1) as usize];
                for c in 0..nc {
                    acc[c] += wr * fpred[c];
                }
            }
            for c in 0..nc {
                ftilde[k - 1][j][c] = acc[c] / scale;
            }
        }
    }

    if fell_back {
        stats.fallbacks += 1;
        out[..nc].copy_from_slice(&first[..nc]);
        return true;
    }

    // Assemble F = first-order term + sum_{k=2..m} dt^{k-1}/k! A^{0,1/2}(ftilde^{(k-1)}).
    let mut f = [0.0; MAX_COMP];
    f[..nc].copy_from_slice(&first[..nc]);
    let mut dt_pow = 1.0;
    let mut kfac = 1.0;
    for (k, level) in ftilde.iter().enumerate().take(m).skip(1) {
        // k is the level index = time-derivative order; term order k+1.
        dt_pow *= dt;
        kfac *= (k + 1) as f64;
        let coeff = dt_pow / kfac;
        for (j, wgt) in tables.ahalf.iter().enumerate() {
            for c in 0..nc {
                f[c] += coeff * wgt * level[j][c];
            }
        }
    }
    out[..nc].copy_from_slice(&f[..nc]);
    false
}

/// One step of the compact approximate Taylor method: per-interface
/// [`cat_flux`] followed by the conservative update.
#[allow(clippy::too_many_arguments)]
pub(crate) fn cat_step(
    state: &mut State1,
    grid: &Grid1,
    model: FluxModel,
    recon: &ReconstructionConfig,
    tables: &CatTables,
    first_order: FirstOrderTerm,
    bc: Boundary,
    dt: f64,
    stats: &mut RunStats,
) -> Result<(), SolverError> {
    fill_ghosts(state, bc);
    let n = state.n as isize;
    let nc = state.ncomp;
    let dx = grid.dx();
    let p = tables.p as isize;
    let q = 2 * tables.p;
    let split = eval_and_split(state, model, stats)?;
    let fhat = match first_order {
        FirstOrderTerm::WenoFlux => Some(fhat_range(recon, &split, -1, n - 1)),
        FirstOrderTerm::Centered => None,
    };

    let mut fluxes = IfaceFlux::zeros(-1, n - 1, nc);
    let mut local = vec![0.0; q * nc];
    let mut local_flux = vec![0.0; q * nc];
    let mut out = [0.0; MAX_COMP];
    for i in -1..n {
        for j in 0..q {
            let cell = i - p + 1 + j as isize;
            local[j * nc..j * nc + nc].copy_from_slice(state.cell(cell));
            local_flux[j * nc..j * nc + nc].copy_from_slice(split.raw.cell(cell));
        }
        cat_flux(
            tables,
            model,
            &local,
            &local_flux,
            fhat.as_ref().map(|f| f.at(i)),
            dt,
            dx,
            stats,
            &mut out,
        );
        fluxes.at_mut(i).copy_from_slice(&out[..nc]);
    }

    for i in 0..n {
        let cell = state.cell_mut(i);
        for c in 0..nc {
            cell[c] += dt / dx * (fluxes.at(i - 1)[c] - fluxes.at(i)[c]);
        }
    }
    state.time += dt;
    Ok(())
}

// --- driver ------------------------------------------------------------

/// CFL time step: `cfl * dx / alpha`; infinite when nothing moves, so the
/// caller caps it at the remaining time.
pub fn cfl_dt(
    state: &State1,
    model: FluxModel,
    grid: &Grid1,
    cfl: f64,
) -> Result<f64, SolverError> {
    let mut alpha: f64 = 0.0;
    for i in 0..state.n as isize {
        alpha = alpha.max(model.wave_speed(state.cell(i), Axis::X).map_err(|source| {
            SolverError::Inadmissible {
                cell: i,
                time: state.time,
                source,
            }
        })?);
    }
    if alpha == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(cfl * grid.dx() / alpha)
    }
}

/// Prebuilt tables for one scheme; build once, step many times.
pub struct Stepper1 {
    pub scheme: SchemeConfig,
    lat: Option<LatTables>,
    cat: Option<CatTables>,
}

impl Stepper1 {
    pub fn new(scheme: SchemeConfig) -> Result<Self, SolverError> {
        scheme.validate()?;
        let (lat, cat) = match scheme.integrator {
            TimeIntegrator::Lat { m, widths } => (Some(LatTables::build(m, widths)), None),
            TimeIntegrator::Cat { m } => (None, Some(CatTables::build(m))),
            _ => (None, None),
        };
        Ok(Self { scheme, lat, cat })
    }

    pub fn ghost_width(&self) -> usize {
        self.scheme.ghost_width()
    }

    /// Advances one step of size `dt`.
    pub fn step(
        &self,
        state: &mut State1,
        grid: &Grid1,
        model: FluxModel,
        bc: Boundary,
        dt: f64,
        stats: &mut RunStats,
    ) -> Result<(), SolverError> {
        match self.scheme.integrator {
            TimeIntegrator::SspRk3 | TimeIntegrator::SspRk104 => {
                let mut scratch = state.clone();
                let recon = &self.scheme.recon;
                let mut err: Option<SolverError> = None;
                {
                    let rhs = |u: &[f64]| -> Result<Vec<f64>, ()> {
                        scratch.interior_mut().copy_from_slice(u);
                        match semidiscrete_rhs(&mut scratch, grid, model, recon, bc, stats) {
                            Ok(r) => Ok(r.rhs),
                            Err(e) => {
                                err = Some(e);
                                Err(())
                            }
                        }
                    };
                    let mut interior = state.interior().to_vec();
                    let res = match self.scheme.integrator {
                        TimeIntegrator::SspRk3 => ssprk3_step(&mut interior, dt, rhs),
                        _ => ssprk104_step(&mut interior, dt, rhs),
                    };
                    if res.is_ok() {
                        state.interior_mut().copy_from_slice(&interior);
                    }
                }
                if let Some(e) = err {
                    return Err(e);
                }
                state.time += dt;
                Ok(())
            }
            TimeIntegrator::Lat { .. } => lat_step(
                state,
                grid,
                model,
                &self.scheme.recon,
                self.lat.as_ref().unwrap(),
                self.scheme.first_order,
                bc,
                dt,
                stats,
            ),
            TimeIntegrator::Cat { .. } => cat_step(
                state,
                grid,
                model,
                &self.scheme.recon,
                self.cat.as_ref().unwrap(),
                self.scheme.first_order,
                bc,
                dt,
                stats,
            ),
        }
    }

    /// Integrates to `t_final` under the CFL rule, reporting divergence
    /// (interior max over 1e6 or NaN) with the step at which it happened.
    pub fn advance(
        &self,
        state: &mut State1,
        grid: &Grid1,
        model: FluxModel,
        bc: Boundary,
        t_final: f64,
        stats: &mut RunStats,
    ) -> Result<(), SolverError> {
        let tol = 1e-12 * t_final.abs().max(1.0);
        while state.time < t_final - tol {
            let dt = cfl_dt(state, model, grid, self.scheme.cfl)?.min(t_final - state.time);
            self.step(state, grid, model, bc, dt, stats)?;
            stats.steps += 1;
            let m = state.interior_max_abs();
            if !m.is_finite() || m > 1e6 {
                return Err(SolverError::Diverged { step: stats.steps });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{init_gaussian_burgers, Grid1};

    fn advection() -> FluxModel {
        FluxModel::Advection { a: 1.0 }
    }

    fn sine_state(grid: &Grid1, ghost: usize) -> State1 {
        let mut s = State1::zeros(grid, 1, ghost).unwrap();
        for i in 0..grid.n as isize {
            s.cell_mut(i)[0] = (2.0 * std::f64::consts::PI * grid.center(i)).sin();
        }
        s
    }

    type ScalarStepper = fn(&mut [f64], f64, &mut dyn FnMut(f64) -> f64);

    /// Samples the linear stability polynomial R(z) of a stepper by running
    /// one step on the scalar ODE u' = z u, then recovers its power-series
    /// coefficients through a Vandermonde solve (the polynomial is exact).
    fn stability_series(stepper: ScalarStepper, deg: usize) -> Vec<f64> {
        let zs: Vec<f64> = (0..=deg).map(|i| -0.31 - 0.17 * i as f64).collect();
        let rs: Vec<f64> = zs
            .iter()
            .map(|&z| {
                let mut u = [1.0];
                let mut f = |v: f64| z * v;
                stepper(&mut u, 1.0, &mut f);
                u[0]
            })
            .collect();
        // Solve Vandermonde for the coefficients.
        let n = deg + 1;
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|r| (0..n).map(|c| zs[r].powi(c as i32)).collect())
            .collect();
        let mut b = rs;
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
                .unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            for r in 0..n {
                if r != col {
                    let f = a[r][col] / a[col][col];
                    for c in 0..n {
                        a[r][c] -= f * a[col][c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
        (0..n).map(|i| b[i] / a[i][i]).collect()
    }

    fn run_rk3(u: &mut [f64], dt: f64, f: &mut dyn FnMut(f64) -> f64) {
        ssprk3_step::<()>(u, dt, |v| Ok(vec![f(v[0])])).unwrap();
    }

    fn run_rk104(u: &mut [f64], dt: f64, f: &mut dyn FnMut(f64) -> f64) {
        ssprk104_step::<()>(u, dt, |v| Ok(vec![f(v[0])])).unwrap();
    }

    #[test]
    fn ssprk3_order_conditions() {
        let c = stability_series(run_rk3, 3);
        let expect = [1.0, 1.0, 0.5, 1.0 / 6.0];
        for (a, b) in c.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn ssprk104_order_conditions_and_stage_count() {
        let c = stability_series(run_rk104, 10);
        let expect = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for (a, b) in c.iter().zip(expect) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        // Fourth order, not fifth.
        assert!((c[5] - 1.0 / 120.0).abs() > 1e-4);

        let mut evals = 0;
        let mut u = [1.0];
        ssprk104_step::<()>(&mut u, 0.1, |v| {
            evals += 1;
            Ok(vec![-v[0]])
        })
        .unwrap();
        assert_eq!(evals, 10);
    }

    #[test]
    fn ssprk_identity_on_zero_rhs() {
        // Identity up to the round-off of the convex stage combinations.
        let mut u = [1.0, -2.0, 3.0];
        ssprk3_step::<()>(&mut u, 0.3, |v| Ok(vec![0.0; v.len()])).unwrap();
        for (a, b) in u.iter().zip([1.0, -2.0, 3.0]) {
            assert!((a - b).abs() <= 1e-14 * b.abs());
        }
        let mut u = [1.0, -2.0, 3.0];
        ssprk104_step::<()>(&mut u, 0.3, |v| Ok(vec![0.0; v.len()])).unwrap();
        for (a, b) in u.iter().zip([1.0, -2.0, 3.0]) {
            assert!((a - b).abs() <= 1e-14 * b.abs());
        }
    }

    #[test]
    fn ssprk_exponential_accuracy() {
        // u' = -u over one step: SSPRK3 error ~ dt^4/24, SSPRK(10,4) ~ dt^5.
        let dt = 1e-2;
        let mut u = [1.0];
        ssprk3_step::<()>(&mut u, dt, |v| Ok(vec![-v[0]])).unwrap();
        let err3 = (u[0] - (-dt).exp()).abs();
        assert!(err3 < 1e-9 && err3 > 1e-11, "err3 = {err3:e}");

        let mut u = [1.0];
        ssprk104_step::<()>(&mut u, dt, |v| Ok(vec![-v[0]])).unwrap();
        let err4 = (u[0] - (-dt).exp()).abs();
        assert!(err4 < 1e-11, "err4 = {err4:e}");
    }

    #[test]
    fn rhs_constant_state_is_zero() {
        let grid = Grid1::new(0.0, 1.0, 16);
        let recon = ReconstructionConfig::foweno(2).unwrap();
        let mut s = State1::zeros(&grid, 1, 3).unwrap();
        for i in 0..16 {
            s.cell_mut(i)[0] = 2.5;
        }
        let mut stats = RunStats::default();
        let r = semidiscrete_rhs(
            &mut s,
            &grid,
            advection(),
            &recon,
            Boundary::Periodic,
            &mut stats,
        )
        .unwrap();
        for v in &r.rhs {
            assert!(v.abs() < 1e-13);
        }
        assert_eq!(stats.rhs_evals, 1);
    }

    #[test]
    fn rhs_telescopes() {
        let grid = Grid1::new(0.0, 1.0, 32);
        let recon = ReconstructionConfig::foweno(2).unwrap();
        let mut s = sine_state(&grid, 3);
        let mut stats = RunStats::default();
        let r = semidiscrete_rhs(
            &mut s,
            &grid,
            FluxModel::Burgers,
            &recon,
            Boundary::Periodic,
            &mut stats,
        )
        .unwrap();
        let sum: f64 = r.rhs.iter().sum::<f64>() * grid.dx();
        let boundary = r.flux_hat.at(-1)[0] - r.flux_hat.at(31)[0];
        assert!((sum - boundary).abs() < 1e-12);
    }

    #[test]
    fn upwind_reduction_for_positive_advection() {
        // With f- identically zero, fhat is the pure upwind reconstruction.
        let grid = Grid1::new(0.0, 1.0, 16);
        let recon = ReconstructionConfig::foweno(2).unwrap();
        let mut s = sine_state(&grid, 3);
        fill_ghosts(&mut s, Boundary::Periodic);
        let mut stats = RunStats::default();
        let split = eval_and_split(&s, advection(), &mut stats).unwrap();
        assert_eq!(split.alpha, 1.0);
        let fhat = fhat_range(&recon, &split, 0, 0);
        let window: Vec<f64> = (-2..=2).map(|j| s.cell(j)[0]).collect();
        let expect = recon.reconstruct(&window).unwrap().value;
        assert!((fhat.at(0)[0] - expect).abs() < 1e-15);
    }

    #[test]
    fn rhs_order_matches_reconstruction() {
        // Smooth advection: rhs ~ -u_x with O(h^5) error for p = 2.
        let recon = ReconstructionConfig::foweno(2).unwrap();
        let mut errs = Vec::new();
        for n in [20usize, 40, 80] {
            let grid = Grid1::new(0.0, 1.0, n);
            let mut s = sine_state(&grid, 3);
            let mut stats = RunStats::default();
            let r = semidiscrete_rhs(
                &mut s,
                &grid,
                advection(),
                &recon,
                Boundary::Periodic,
                &mut stats,
            )
            .unwrap();
            let mut emax = 0.0f64;
            for i in 0..n {
                let x = grid.center(i as isize);
                let exact = -2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * x).cos();
                emax = emax.max((r.rhs[i] - exact).abs());
            }
            errs.push(emax);
        }
        let eoc1 = (errs[0] / errs[1]).log2();
        let eoc2 = (errs[1] / errs[2]).log2();
        assert!(eoc1 > 4.4 && eoc2 > 4.4, "EOC {eoc1}, {eoc2}");
    }

    fn lw_trajectory(initial: &[f64], c: f64, steps: usize) -> Vec<f64> {
        let n = initial.len();
        let mut u = initial.to_vec();
        for _ in 0..steps {
            let old = u.clone();
            for i in 0..n {
                let um = old[(i + n - 1) % n];
                let up = old[(i + 1) % n];
                u[i] = old[i] - 0.5 * c * (up - um) + 0.5 * c * c * (up - 2.0 * old[i] + um);
            }
        }
        u
    }

    #[test]
    fn cat2_linear_reduces_to_lax_wendroff() {
        let n = 64;
        let grid = Grid1::new(0.0, 1.0, n);
        let scheme = SchemeConfig::new(TimeIntegrator::cat(2), 0.8, ReconstructionConfig::oweno3())
            .with_first_order(FirstOrderTerm::Centered);
        let stepper = Stepper1::new(scheme).unwrap();
        let mut s = sine_state(&grid, stepper.ghost_width());
        let initial: Vec<f64> = s.interior().to_vec();
        let dt = 0.8 * grid.dx();
        let mut stats = RunStats::default();
        for _ in 0..10 {
            stepper
                .step(
                    &mut s,
                    &grid,
                    advection(),
                    Boundary::Periodic,
                    dt,
                    &mut stats,
                )
                .unwrap();
        }
        let lw = lw_trajectory(&initial, 0.8, 10);
        for (a, b) in s.interior().iter().zip(&lw) {
            assert!((a - b).abs() <= 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn lat_m2_single_step_is_five_point_lax_wendroff() {
        // LAT with m = 2, uniform half-width 1 and the centered first
        // derivative: u^{n+1} = u - (a dt / 2dx)(u_{i+1} - u_{i-1})
        //                        + (a^2 dt^2 / 8dx^2)(u_{i+2} - 2u_i + u_{i-2}).
        let n = 50;
        let grid = Grid1::new(0.0, 1.0, n);
        let scheme = SchemeConfig::new(
            TimeIntegrator::Lat {
                m: 2,
                widths: LatWidths::Uniform(1),
            },
            0.5,
            ReconstructionConfig::oweno3(),
        )
        .with_first_order(FirstOrderTerm::Centered);
        let stepper = Stepper1::new(scheme).unwrap();
        let mut s = sine_state(&grid, stepper.ghost_width());
        let initial: Vec<f64> = s.interior().to_vec();
        let dt = 0.5 * grid.dx();
        let mut stats = RunStats::default();
        stepper
            .step(
                &mut s,
                &grid,
                advection(),
                Boundary::Periodic,
                dt,
                &mut stats,
            )
            .unwrap();
        let c = dt / grid.dx();
        for i in 0..n {
            let um2 = initial[(i + n - 2) % n];
            let um1 = initial[(i + n - 1) % n];
            let up1 = initial[(i + 1) % n];
            let up2 = initial[(i + 2) % n];
            let expect =
                initial[i] - 0.5 * c * (up1 - um1) + c * c / 8.0 * (up2 - 2.0 * initial[i] + um2);
            let got = s.interior()[i];
            assert!((got - expect).abs() <= 1e-15, "cell {i}: {got} vs {expect}");
        }
    }

    #[test]
    fn constant_state_is_fixed_point() {
        for integ in [
            TimeIntegrator::SspRk3,
            TimeIntegrator::SspRk104,
            TimeIntegrator::lat(3),
            TimeIntegrator::cat(2),
            TimeIntegrator::cat(4),
        ] {
            let grid = Grid1::new(0.0, 1.0, 40);
            let scheme = SchemeConfig::new(integ, 0.5, ReconstructionConfig::oweno3());
            let stepper = Stepper1::new(scheme).unwrap();
            let mut s = State1::zeros(&grid, 1, stepper.ghost_width()).unwrap();
            for i in 0..40 {
                s.cell_mut(i)[0] = 3.25;
            }
            let mut stats = RunStats::default();
            stepper
                .step(
                    &mut s,
                    &grid,
                    FluxModel::Burgers,
                    Boundary::Periodic,
                    1e-3,
                    &mut stats,
                )
                .unwrap();
            for v in s.interior() {
                assert!((v - 3.25).abs() < 1e-13, "{integ:?}");
            }
        }
    }

    #[test]
    fn cat_flux_consistency_on_constant_data() {
        for m in [2, 4, 6] {
            let tables = CatTables::build(m);
            let model = FluxModel::Euler1d { gamma: 1.4 };
            let u = model.primitive_to_conserved(&[1.2, 0.4, 0.9]).unwrap();
            let mut f = vec![0.0; 3];
            model.flux(&u, Axis::X, &mut f).unwrap();
            let q = m; // 2p
            let mut local = Vec::new();
            let mut local_flux = Vec::new();
            for _ in 0..q {
                local.extend_from_slice(&u);
                local_flux.extend_from_slice(&f);
            }
            let mut out = [0.0; MAX_COMP];
            let mut stats = RunStats::default();
            let fb = cat_flux(
                &tables,
                model,
                &local,
                &local_flux,
                None,
                1e-3,
                0.01,
                &mut stats,
                &mut out,
            );
            assert!(!fb);
            for c in 0..3 {
                assert!(
                    (out[c] - f[c]).abs() <= 1e-13 * f[c].abs().max(1.0),
                    "m={m} c={c}"
                );
            }
        }
    }

    #[test]
    fn cat_flux_is_stencil_local() {
        // Two interfaces sharing a grid point see different data outside
        // the overlap, so their local flux time-derivatives differ.
        let tables = CatTables::build(2);
        let model = FluxModel::Burgers;
        let mut stats = RunStats::default();
        let mut out_a = [0.0; MAX_COMP];
        let mut out_b = [0.0; MAX_COMP];
        // Interface between cells {1.0, 2.0} and between {2.0, 5.0}: the
        // shared point 2.0 gets different predicted derivatives.
        let flux = |u: f64| 0.5 * u * u;
        cat_flux(
            &tables,
            model,
            &[1.0, 2.0],
            &[flux(1.0), flux(2.0)],
            None,
            0.01,
            0.1,
            &mut stats,
            &mut out_a,
        );
        cat_flux(
            &tables,
            model,
            &[2.0, 5.0],
            &[flux(2.0), flux(5.0)],
            None,
            0.01,
            0.1,
            &mut stats,
            &mut out_b,
        );
        assert!((out_a[0] - out_b[0]).abs() > 1e-3);
    }

    #[test]
    fn burgers_one_step_matches_taylor_expansion() {
        // Smooth Gaussian, one LAT step: compare against the exact
        // Cauchy-Kovalevskaya expansion through dt^3 with
        //   u_t   = -u u_x,
        //   u_tt  = 2 u u_x^2 + u^2 u_xx,
        //   u_ttt = -6 u u_x^3 - 9 u^2 u_x u_xx - u^3 u_xxx,
        // from analytic derivatives of the profile. The comparison is
        // restricted to cells away from the periodic seam, where the
        // wrapped profile has a derivative kink the unwrapped oracle
        // cannot represent.
        let u0 = |x: f64| (-10.0 * (x - 0.5f64).powi(2)).exp();
        let du = |x: f64| -20.0 * (x - 0.5) * u0(x);
        let d2u = |x: f64| (-20.0 + 400.0 * (x - 0.5f64).powi(2)) * u0(x);
        let d3u = |x: f64| {
            let s = x - 0.5;
            (1200.0 * s - 8000.0 * s.powi(3)) * u0(x)
        };
        let ck = |x: f64| -> [f64; 4] {
            let (u, ux, uxx, uxxx) = (u0(x), du(x), d2u(x), d3u(x));
            [
                u,
                -u * ux,
                2.0 * u * ux * ux + u * u * uxx,
                -6.0 * u * ux.powi(3) - 9.0 * u * u * ux * uxx - u.powi(3) * uxxx,
            ]
        };

        // Validate the symbolic derivatives against time differences of
        // the exact characteristic solution.
        let tb = crate::exactsol::burgers_breaking_time(&du, 0.0, 1.0);
        for x in [0.31, 0.52, 0.68] {
            let tau = 1e-3;
            let sample =
                |t: f64| crate::exactsol::burgers_characteristic(&u0, &du, tb, x, t).unwrap();
            let um2 = sample(-2.0 * tau);
            let um1 = sample(-tau);
            let up1 = sample(tau);
            let up2 = sample(2.0 * tau);
            let d = ck(x);
            let fd1 = (up1 - um1) / (2.0 * tau);
            let fd2 = (up1 - 2.0 * d[0] + um1) / (tau * tau);
            let fd3 = (up2 - 2.0 * up1 + 2.0 * um1 - um2) / (2.0 * tau.powi(3));
            // Central-difference truncation is tau^2 u_ttt / 6 ~ 1e-5.
            assert!((fd1 - d[1]).abs() < 1e-4, "u_t at {x}: {fd1} vs {}", d[1]);
            assert!(
                (fd2 - d[2]).abs() < 1e-3 * d[2].abs().max(1.0),
                "u_tt at {x}: {fd2} vs {}",
                d[2]
            );
            assert!(
                (fd3 - d[3]).abs() < 2e-2 * d[3].abs().max(1.0),
                "u_ttt at {x}: {fd3} vs {}",
                d[3]
            );
        }

        let n = 400;
        let grid = Grid1::new(0.0, 1.0, n);
        let scheme = SchemeConfig::new(
            TimeIntegrator::Lat {
                m: 3,
                widths: LatWidths::Graded,
            },
            0.5,
            ReconstructionConfig::foweno(2).unwrap(),
        );
        let stepper = Stepper1::new(scheme).unwrap();
        let mut s = init_gaussian_burgers(&grid, stepper.ghost_width()).unwrap();
        let dt = 1e-3;
        let mut stats = RunStats::default();
        stepper
            .step(
                &mut s,
                &grid,
                FluxModel::Burgers,
                Boundary::Periodic,
                dt,
                &mut stats,
            )
            .unwrap();
        let mut emax = 0.0f64;
        for i in 0..n {
            let x = grid.center(i as isize);
            if !(0.05..=0.95).contains(&x) {
                continue;
            }
            let d = ck(x);
            let taylor = d[0] + dt * d[1] + 0.5 * dt * dt * d[2] + dt.powi(3) / 6.0 * d[3];
            emax = emax.max((s.interior()[i] - taylor).abs());
        }
        // O(dt^4) truncation of the oracle plus the O(dt^2 h^2) level-2
        // spatial term.
        assert!(emax < 1e-8, "emax = {emax:e}");
    }

    #[test]
    fn cfl_dt_examples() {
        let grid = Grid1::new(0.0, 1.0, 100);
        let mut s = State1::zeros(&grid, 1, 0).unwrap();
        for i in 0..100 {
            s.cell_mut(i)[0] = 1.0;
        }
        let dt = cfl_dt(&s, advection(), &grid, 0.5).unwrap();
        assert!((dt - 0.005).abs() < 1e-15);
        // Zero wave speed: capped by the caller at the remaining time.
        let z = State1::zeros(&grid, 1, 0).unwrap();
        assert!(cfl_dt(&z, FluxModel::Burgers, &grid, 0.5)
            .unwrap()
            .is_infinite());
    }

    #[test]
    fn conservation_over_steps() {
        // Periodic Burgers: total mass drifts only at round-off level.
        for integ in [
            TimeIntegrator::SspRk3,
            TimeIntegrator::lat(3),
            TimeIntegrator::cat(4),
        ] {
            let grid = Grid1::new(0.0, 1.0, 64);
            let recon = match integ {
                TimeIntegrator::Cat { .. } => ReconstructionConfig::foweno(2).unwrap(),
                _ => ReconstructionConfig::oweno3(),
            };
            let scheme = SchemeConfig::new(integ, 0.4, recon);
            let stepper = Stepper1::new(scheme).unwrap();
            let mut s = init_gaussian_burgers(&grid, stepper.ghost_width()).unwrap();
            let mass0 = s.interior_sums()[0] * grid.dx();
            let mut stats = RunStats::default();
            for _ in 0..50 {
                let dt = cfl_dt(&s, FluxModel::Burgers, &grid, 0.4).unwrap();
                stepper
                    .step(
                        &mut s,
                        &grid,
                        FluxModel::Burgers,
                        Boundary::Periodic,
                        dt,
                        &mut stats,
                    )
                    .unwrap();
            }
            let mass1 = s.interior_sums()[0] * grid.dx();
            assert!(
                ((mass1 - mass0) / mass0).abs() < 1e-12,
                "{integ:?}: drift {:e}",
                (mass1 - mass0) / mass0
            );
        }
    }

    #[test]
    fn divergence_is_reported_not_crashed() {
        // A deliberately huge CFL blows up the linear advection run.
        let grid = Grid1::new(0.0, 2.0, 100);
        let scheme = SchemeConfig::new(
            TimeIntegrator::lat(5),
            3.0,
            ReconstructionConfig::foweno(2).unwrap(),
        );
        let stepper = Stepper1::new(scheme).unwrap();
        let mut s = crate::grid::init_test1(&grid, stepper.ghost_width()).unwrap();
        let mut stats = RunStats::default();
        let err = stepper
            .advance(
                &mut s,
                &grid,
                advection(),
                Boundary::Periodic,
                2.0,
                &mut stats,
            )
            .unwrap_err();
        assert!(matches!(err, SolverError::Diverged { .. }));
    }

    #[test]
    fn scheme_validation() {
        let recon = ReconstructionConfig::oweno3();
        assert!(Stepper1::new(SchemeConfig::new(
            TimeIntegrator::Lat {
                m: 4,
                widths: LatWidths::Graded
            },
            0.5,
            recon.clone()
        ))
        .is_err());
        assert!(Stepper1::new(SchemeConfig::new(
            TimeIntegrator::Cat { m: 3 },
            0.5,
            recon.clone()
        ))
        .is_err());
        assert!(Stepper1::new(SchemeConfig::new(TimeIntegrator::cat(2), 0.0, recon)).is_err());
    }

    #[test]
    fn weno_interface_flux_recombines_constant() {
        let recon = ReconstructionConfig::foweno(2).unwrap();
        // Constant split parts recombine to the constant flux value.
        let fp = [1.5; 5];
        let fm = [0.75; 5];
        let v = weno_interface_flux(&recon, &fp, &fm).unwrap();
        assert!((v - 2.25).abs() < 1e-14);
    }

    #[test]
    fn lat_fallback_keeps_run_alive() {
        // A near-vacuum Riemann state with a large dt forces inadmissible
        // Taylor predictions; the step falls back instead of failing.
        let grid = Grid1::new(0.0, 1.0, 50);
        let scheme = SchemeConfig::new(TimeIntegrator::lat(3), 0.9, ReconstructionConfig::oweno3());
        let stepper = Stepper1::new(scheme).unwrap();
        let model = FluxModel::Euler1d { gamma: 1.4 };
        let mut s = crate::grid::init_riemann_1d(
            &grid,
            model,
            crate::models::EulerPrimitive1D::new(1.0, -2.0, 0.4),
            crate::models::EulerPrimitive1D::new(1.0, 2.0, 0.4),
            0.5,
            stepper.ghost_width(),
        )
        .unwrap();
        let mut stats = RunStats::default();
        let dt = cfl_dt(&s, model, &grid, 0.9).unwrap();
        stepper
            .step(&mut s, &grid, model, Boundary::Outflow, dt, &mut stats)
            .unwrap();
        // The run survives; whether fallbacks fired is data-dependent,
        // but the counter must be consistent with a finite state.
        assert!(s.interior_max_abs().is_finite());
    }
}
