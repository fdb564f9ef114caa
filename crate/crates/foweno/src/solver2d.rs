//! Dimension-wise extension of the 1D schemes to 2D Cartesian grids.
//!
//! Interface fluxes are one-dimensional WENO reconstructions along grid
//! lines with a direction-specific Lax-Friedrichs splitting speed; CAT
//! assembles its flux from a `(2p) x (2p)` rectangle of cells around each
//! interface with the time-derivative recursion fed by both flux
//! divergences.
//!
//! Every kernel is written so that the x- and y-direction paths execute
//! mirrored arithmetic: data invariant under the diagonal swap
//! `(x, y) -> (y, x)`, `u <-> v` stay exactly symmetric in floating point.

use crate::grid::{fill_ghosts_2d, Boundary, Grid2, State2};
use crate::integrators::{
    ssprk104_step, ssprk3_step, FirstOrderTerm, RunStats, SchemeConfig, SolverError,
    TimeIntegrator, MAX_COMP, MAX_WIN,
};
use crate::models::{lax_friedrichs_split, Axis, FluxModel};
use crate::numdiff::{centered_diff_coeffs, interp_avg_coeffs, interp_diff_coeffs};
use crate::reconstruct::{Family, ReconstructionConfig};
use num_rational::Rational64;

/// Global per-direction splitting speeds, from the interior cells (ghost
/// values are copies and add nothing to the maximum).
fn direction_speeds(state: &State2, model: FluxModel) -> Result<(f64, f64), SolverError> {
    let (nx, ny) = (state.nx as isize, state.ny as isize);
    let mut ax: f64 = 0.0;
    let mut ay: f64 = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let u = state.cell(i, j);
            let err = |source| SolverError::Inadmissible2d {
                i,
                j,
                time: state.time,
                source,
            };
            ax = ax.max(model.wave_speed(u, Axis::X).map_err(err)?);
            ay = ay.max(model.wave_speed(u, Axis::Y).map_err(err)?);
        }
    }
    Ok((ax, ay))
}

/// One padded grid line (row for X, column for Y) copied out of the state.
fn gather_line(state: &State2, axis: Axis, line: isize, buf: &mut [f64]) {
    let nc = state.ncomp;
    let (len, w) = match axis {
        Axis::X => (state.nx as isize, state.w as isize),
        Axis::Y => (state.ny as isize, state.w as isize),
    };
    for t in -w..len + w {
        let cell = match axis {
            Axis::X => state.cell(t, line),
            Axis::Y => state.cell(line, t),
        };
        let k = ((t + w) as usize) * nc;
        buf[k..k + nc].copy_from_slice(cell);
    }
}

/// WENO interface fluxes along one line: `out[i]` is the flux at interface
/// `i + 1/2` for `i in lo..=hi` (line coordinates). `line_id` only labels
/// admissibility errors.
#[allow(clippy::too_many_arguments)]
fn line_fluxes(
    line_u: &[f64],
    w: isize,
    nc: usize,
    model: FluxModel,
    axis: Axis,
    alpha: f64,
    recon: &ReconstructionConfig,
    lo: isize,
    hi: isize,
    line_id: isize,
    stats: &mut RunStats,
    out: &mut [f64],
) -> Result<(), SolverError> {
    let cells = line_u.len() / nc;
    let mut fp = vec![0.0; cells * nc];
    let mut fm = vec![0.0; cells * nc];
    let mut f = [0.0; MAX_COMP];
    for t in 0..cells {
        let u = &line_u[t * nc..t * nc + nc];
        model.flux(u, axis, &mut f[..nc]).map_err(|source| {
            let along = t as isize - w;
            let (i, j) = match axis {
                Axis::X => (along, line_id),
                Axis::Y => (line_id, along),
            };
            SolverError::Inadmissible2d {
                i,
                j,
                time: 0.0,
                source,
            }
        })?;
        lax_friedrichs_split(
            &f[..nc],
            u,
            alpha,
            &mut fp[t * nc..t * nc + nc],
            &mut fm[t * nc..t * nc + nc],
        );
    }
    stats.flux_evals += cells as u64;

    let wl = recon.window_len();
    let is_oweno3 = matches!(recon.family, Family::Oweno3);
    let p = recon.p as isize;
    let mut wpb = [0.0; MAX_WIN];
    let mut wmb = [0.0; MAX_WIN];
    let mut dump = [0.0; 4];
    for i in lo..=hi {
        let (pstart, mstart) = if is_oweno3 {
            (i - 1, i - 1)
        } else {
            (i - p, i + 1 - p)
        };
        for c in 0..nc {
            for t in 0..wl {
                let cell = (pstart + t as isize + w) as usize;
                wpb[t] = fp[cell * nc + c];
            }
            for t in 0..wl {
                let cell = (mstart + t as isize + w) as usize;
                wmb[t] = fm[cell * nc + c];
            }
            out[((i - lo) as usize) * nc + c] =
                recon.kernel(&wpb[..wl], &mut dump) + recon.kernel_mirrored(&wmb[..wl], &mut dump);
        }
    }
    Ok(())
}

/// Conservative 2D right-hand side: directional WENO flux differences.
pub struct Rhs2 {
    /// Cell-major interior values of `-(df/dx + dg/dy)`.
    pub rhs: Vec<f64>,
    pub alpha_x: f64,
    pub alpha_y: f64,
}

/// Semidiscrete RHS of the 2D system; ghost frames are filled here.
pub fn rhs_2d(
    state: &mut State2,
    grid: &Grid2,
    model: FluxModel,
    recon: &ReconstructionConfig,
    bc: Boundary,
    stats: &mut RunStats,
) -> Result<Rhs2, SolverError> {
    fill_ghosts_2d(state, bc, bc);
    let (ax, ay) = direction_speeds(state, model)?;
    let nc = state.ncomp;
    let (nx, ny) = (state.nx, state.ny);
    let w = state.w as isize;
    let dx = grid.dx();
    let dy = grid.dy();

    let mut rx = vec![0.0; nx * ny * nc];
    let mut line = vec![0.0; (nx + 2 * state.w) * nc];
    let mut fhat = vec![0.0; (nx + 1) * nc];
    for j in 0..ny {
        gather_line(state, Axis::X, j as isize, &mut line);
        line_fluxes(
            &line,
            w,
            nc,
            model,
            Axis::X,
            ax,
            recon,
            -1,
            nx as isize - 1,
            j as isize,
            stats,
            &mut fhat,
        )?;
        for i in 0..nx {
            for c in 0..nc {
                rx[(j * nx + i) * nc + c] = -(fhat[(i + 1) * nc + c] - fhat[i * nc + c]) / dx;
            }
        }
    }

    let mut ry = vec![0.0; nx * ny * nc];
    let mut line = vec![0.0; (ny + 2 * state.w) * nc];
    let mut ghat = vec![0.0; (ny + 1) * nc];
    for i in 0..nx {
        gather_line(state, Axis::Y, i as isize, &mut line);
        line_fluxes(
            &line,
            w,
            nc,
            model,
            Axis::Y,
            ay,
            recon,
            -1,
            ny as isize - 1,
            i as isize,
            stats,
            &mut ghat,
        )?;
        for j in 0..ny {
            for c in 0..nc {
                ry[(j * nx + i) * nc + c] = -(ghat[(j + 1) * nc + c] - ghat[j * nc + c]) / dy;
            }
        }
    }

    // Single addition per entry keeps the diagonal symmetry exact.
    let rhs: Vec<f64> = rx.iter().zip(&ry).map(|(a, b)| a + b).collect();
    stats.rhs_evals += 1;
    Ok(Rhs2 {
        rhs,
        alpha_x: ax,
        alpha_y: ay,
    })
}

fn interior_to_vec(state: &State2) -> Vec<f64> {
    let nc = state.ncomp;
    let mut out = vec![0.0; state.nx * state.ny * nc];
    for j in 0..state.ny {
        for i in 0..state.nx {
            out[(j * state.nx + i) * nc..(j * state.nx + i + 1) * nc]
                .copy_from_slice(state.cell(i as isize, j as isize));
        }
    }
    out
}

fn vec_to_interior(state: &mut State2, v: &[f64]) {
    let nc = state.ncomp;
    let nx = state.nx;
    for j in 0..state.ny {
        for i in 0..nx {
            state
                .cell_mut(i as isize, j as isize)
                .copy_from_slice(&v[(j * nx + i) * nc..(j * nx + i + 1) * nc]);
        }
    }
}

// --- CAT in 2D ---------------------------------------------------------

struct Cat2Tables {
    p: usize,
    m: usize,
    a1j: Vec<Vec<f64>>,
    atime: Vec<Vec<f64>>,
    ahalf: Vec<f64>,
}

impl Cat2Tables {
    fn build(m: usize) -> Self {
        let p = m / 2;
        Self {
            p,
            m,
            a1j: (-(p as i64) + 1..=p as i64)
                .map(|j| {
                    interp_diff_coeffs(p, 1, Rational64::new(j, 1))
                        .unwrap()
                        .weights
                })
                .collect(),
            atime: (2..=m)
                .map(|k| {
                    interp_diff_coeffs(p, k - 1, Rational64::new(0, 1))
                        .unwrap()
                        .weights
                })
                .collect(),
            ahalf: interp_avg_coeffs(p, 0, Rational64::new(1, 2))
                .unwrap()
                .weights,
        }
    }
}

/// Scratch for one rectangular CAT flux; indexed [level][an][at][comp]
/// flattened, with `an` the offset along the flux normal.
struct Cat2Scratch {
    fn_lvl: Vec<f64>,
    ft_lvl: Vec<f64>,
    ut_lvl: Vec<f64>,
    q: usize,
    nc: usize,
}

impl Cat2Scratch {
    fn new(m: usize, nc: usize) -> Self {
        let q = m; // 2p
        let len = m * q * q * nc;
        Self {
            fn_lvl: vec![0.0; len],
            ft_lvl: vec![0.0; len],
            ut_lvl: vec![0.0; len],
            q,
            nc,
        }
    }

    #[inline]
    fn at(&self, lvl: usize, an: usize, at: usize) -> usize {
        ((lvl * self.q + an) * self.q + at) * self.nc
    }
}

/// CAT flux at one interface from the local `(2p) x (2p)` rectangle.
///
/// `local` holds the rectangle states indexed `[an][at][comp]` where `an`
/// runs along the flux normal (offsets -p+1..=p about the interface) and
/// `at` along the tangential axis (offsets -p+1..=p about the flux point's
/// tangential cell). Returns true if the interface fell back to `first`.
#[allow(clippy::too_many_arguments)]
fn cat_flux_2d(
    tables: &Cat2Tables,
    model: FluxModel,
    local: &[f64],
    normal: Axis,
    first: &[f64],
    dt: f64,
    d_normal: f64,
    d_tangent: f64,
    scratch: &mut Cat2Scratch,
    stats: &mut RunStats,
    out: &mut [f64],
) -> bool {
    let p = tables.p;
    let q = 2 * p;
    let m = tables.m;
    let nc = model.ncomp();
    let tangent = match normal {
        Axis::X => Axis::Y,
        Axis::Y => Axis::X,
    };

    // Level 0: fluxes of the rectangle states along both axes.
    let mut buf = [0.0; MAX_COMP];
    for an in 0..q {
        for at in 0..q {
            let u = &local[(an * q + at) * nc..(an * q + at + 1) * nc];
            let k = scratch.at(0, an, at);
            if !model.flux_predicted(u, normal, &mut buf[..nc]) {
                stats.fallbacks += 1;
                out[..nc].copy_from_slice(first);
                return true;
            }
            scratch.fn_lvl[k..k + nc].copy_from_slice(&buf[..nc]);
            if !model.flux_predicted(u, tangent, &mut buf[..nc]) {
                stats.fallbacks += 1;
                out[..nc].copy_from_slice(first);
                return true;
            }
            scratch.ft_lvl[k..k + nc].copy_from_slice(&buf[..nc]);
            stats.flux_evals += 2;
        }
    }

    let mut pred = [0.0; MAX_COMP];
    let mut fell_back = false;
    'levels: for k in 2..=m {
        // Local solution time derivatives from both flux divergences.
        for an in 0..q {
            for at in 0..q {
                let dst = scratch.at(k - 2, an, at);
                for c in 0..nc {
                    let mut accn = 0.0;
                    for (r, wr) in tables.a1j[an].iter().enumerate() {
                        accn += wr * scratch.fn_lvl[scratch.at(k - 2, r, at) + c];
                    }
                    let mut acct = 0.0;
                    for (r, wr) in tables.a1j[at].iter().enumerate() {
                        acct += wr * scratch.ft_lvl[scratch.at(k - 2, an, r) + c];
                    }
                    scratch.ut_lvl[dst + c] = -accn / d_normal + -acct / d_tangent;
                }
            }
        }
        // Taylor predictions at the 2p time offsets, differentiated in time.
        let wt = &tables.atime[k - 2];
        let scale = dt.powi((k - 1) as i32);
        for an in 0..q {
            for at in 0..q {
                let base = &local[(an * q + at) * nc..(an * q + at + 1) * nc];
                let mut accn = [0.0; MAX_COMP];
                let mut acct = [0.0; MAX_COMP];
                for roff in -(p as i64) + 1..=p as i64 {
                    let rdt = roff as f64 * dt;
                    pred[..nc].copy_from_slice(base);
                    let mut fac = 1.0;
                    for l in 0..k - 1 {
                        fac *= rdt / (l as f64 + 1.0);
                        let src = scratch.at(l, an, at);
                        for c in 0..nc {
                            pred[c] += fac * scratch.ut_lvl[src + c];
                        }
                    }
                    stats.flux_evals += 2;
                    if !model.flux_predicted(&pred[..nc], normal, &mut buf[..nc]) {
                        fell_back = true;
                        break 'levels;
                    }
                    let wr = wt[(roff + p as i64 - 1) as usize];
                    for c in 0..nc {
                        accn[c] += wr * buf[c];
                    }
                    if !model.flux_predicted(&pred[..nc], tangent, &mut buf[..nc]) {
                        fell_back = true;
                        break 'levels;
                    }
                    for c in 0..nc {
                        acct[c] += wr * buf[c];
                    }
                }
                let dst = scratch.at(k - 1, an, at);
                for c in 0..nc {
                    scratch.fn_lvl[dst + c] = accn[c] / scale;
                    scratch.ft_lvl[dst + c] = acct[c] / scale;
                }
            }
        }
    }

    if fell_back {
        stats.fallbacks += 1;
        out[..nc].copy_from_slice(first);
        return true;
    }

    // F = first + sum_k dt^{k-1}/k! A^{0,1/2}(normal-flux level k-1) at the
    // tangential offset 0 (local index p-1).
    let at0 = p - 1;
    let mut f = [0.0; MAX_COMP];
    f[..nc].copy_from_slice(first);
    let mut dt_pow = 1.0;
    let mut kfac = 1.0;
    for lvl in 1..m {
        dt_pow *= dt;
        kfac *= (lvl + 1) as f64;
        let coeff = dt_pow / kfac;
        for (an, wgt) in tables.ahalf.iter().enumerate() {
            let src = scratch.at(lvl, an, at0);
            for c in 0..nc {
                f[c] += coeff * wgt * scratch.fn_lvl[src + c];
            }
        }
    }
    out[..nc].copy_from_slice(&f[..nc]);
    false
}

/// One CAT step on the 2D grid: x-fluxes at `(x_{i+1/2}, y_j)`, y-fluxes
/// at `(x_i, y_{j+1/2})`, conservative update in both directions.
#[allow(clippy::too_many_arguments)]
fn cat_step_2d(
    state: &mut State2,
    grid: &Grid2,
    model: FluxModel,
    scheme: &SchemeConfig,
    tables: &Cat2Tables,
    bc: Boundary,
    dt: f64,
    stats: &mut RunStats,
) -> Result<(), SolverError> {
    fill_ghosts_2d(state, bc, bc);
    let (ax, ay) = direction_speeds(state, model)?;
    let nc = state.ncomp;
    let (nx, ny) = (state.nx, state.ny);
    let w = state.w as isize;
    let dx = grid.dx();
    let dy = grid.dy();
    let p = tables.p as isize;
    let q = 2 * tables.p;
    let recon = &scheme.recon;

    // WENO interface fluxes (the k = 1 terms), per direction.
    let centered = scheme.first_order == FirstOrderTerm::Centered;
    let mut fhatx = vec![0.0; (nx + 1) * ny * nc];
    let mut line = vec![0.0; (nx + 2 * state.w) * nc];
    let mut lf = vec![0.0; (nx + 1) * nc];
    for j in 0..ny {
        gather_line(state, Axis::X, j as isize, &mut line);
        line_fluxes(
            &line,
            w,
            nc,
            model,
            Axis::X,
            ax,
            recon,
            -1,
            nx as isize - 1,
            j as isize,
            stats,
            &mut lf,
        )?;
        fhatx[j * (nx + 1) * nc..(j + 1) * (nx + 1) * nc].copy_from_slice(&lf);
    }
    let mut fhaty = vec![0.0; nx * (ny + 1) * nc];
    let mut line = vec![0.0; (ny + 2 * state.w) * nc];
    let mut lf = vec![0.0; (ny + 1) * nc];
    for i in 0..nx {
        gather_line(state, Axis::Y, i as isize, &mut line);
        line_fluxes(
            &line,
            w,
            nc,
            model,
            Axis::Y,
            ay,
            recon,
            -1,
            ny as isize - 1,
            i as isize,
            stats,
            &mut lf,
        )?;
        fhaty[i * (ny + 1) * nc..(i + 1) * (ny + 1) * nc].copy_from_slice(&lf);
    }

    let mut scratch = Cat2Scratch::new(tables.m, nc);
    let mut local = vec![0.0; q * q * nc];
    let mut first = [0.0; MAX_COMP];
    let mut out = [0.0; MAX_COMP];

    // x-direction fluxes: interfaces (i+1/2, j), rectangle
    // {i-p+1..i+p} x {j-p+1..j+p}.
    let mut flux_x = vec![0.0; (nx + 1) * ny * nc];
    for j in 0..ny as isize {
        for i in -1..nx as isize {
            for an in 0..q {
                for at in 0..q {
                    let cell = state.cell(i - p + 1 + an as isize, j - p + 1 + at as isize);
                    local[(an * q + at) * nc..(an * q + at + 1) * nc].copy_from_slice(cell);
                }
            }
            let k1 = &fhatx[(j as usize * (nx + 1) + (i + 1) as usize) * nc..][..nc];
            if centered {
                centered_first_term(tables, &local, q, nc, model, Axis::X, &mut first, stats);
            } else {
                first[..nc].copy_from_slice(k1);
            }
            cat_flux_2d(
                tables,
                model,
                &local,
                Axis::X,
                &first[..nc],
                dt,
                dx,
                dy,
                &mut scratch,
                stats,
                &mut out,
            );
            flux_x[(j as usize * (nx + 1) + (i + 1) as usize) * nc..][..nc]
                .copy_from_slice(&out[..nc]);
        }
    }

    // y-direction fluxes: interfaces (i, j+1/2), same rectangle with the
    // roles of the axes swapped (an runs along y).
    let mut flux_y = vec![0.0; nx * (ny + 1) * nc];
    for i in 0..nx as isize {
        for j in -1..ny as isize {
            for an in 0..q {
                for at in 0..q {
                    let cell = state.cell(i - p + 1 + at as isize, j - p + 1 + an as isize);
                    local[(an * q + at) * nc..(an * q + at + 1) * nc].copy_from_slice(cell);
                }
            }
            let k1 = &fhaty[(i as usize * (ny + 1) + (j + 1) as usize) * nc..][..nc];
            if centered {
                centered_first_term(tables, &local, q, nc, model, Axis::Y, &mut first, stats);
            } else {
                first[..nc].copy_from_slice(k1);
            }
            cat_flux_2d(
                tables,
                model,
                &local,
                Axis::Y,
                &first[..nc],
                dt,
                dx,
                dy,
                &mut scratch,
                stats,
                &mut out,
            );
            flux_y[(i as usize * (ny + 1) + (j + 1) as usize) * nc..][..nc]
                .copy_from_slice(&out[..nc]);
        }
    }

    for j in 0..ny {
        for i in 0..nx {
            let fxl = &flux_x[(j * (nx + 1) + i) * nc..][..nc];
            let fxr = &flux_x[(j * (nx + 1) + i + 1) * nc..][..nc];
            let fyb = &flux_y[(i * (ny + 1) + j) * nc..][..nc];
            let fyt = &flux_y[(i * (ny + 1) + j + 1) * nc..][..nc];
            let mut incr = [0.0; MAX_COMP];
            for c in 0..nc {
                incr[c] = dt / dx * (fxl[c] - fxr[c]) + dt / dy * (fyb[c] - fyt[c]);
            }
            let cell = state.cell_mut(i as isize, j as isize);
            for c in 0..nc {
                cell[c] += incr[c];
            }
        }
    }
    state.time += dt;
    Ok(())
}

/// Interpolatory first-order term A^{0,1/2} of the normal flux along the
/// rectangle's tangential-offset-0 row (linear-reduction variant).
#[allow(clippy::too_many_arguments)]
fn centered_first_term(
    tables: &Cat2Tables,
    local: &[f64],
    q: usize,
    nc: usize,
    model: FluxModel,
    normal: Axis,
    first: &mut [f64; MAX_COMP],
    stats: &mut RunStats,
) {
    let at0 = tables.p - 1;
    let mut buf = [0.0; MAX_COMP];
    first[..nc].fill(0.0);
    for (an, wgt) in tables.ahalf.iter().enumerate() {
        let u = &local[(an * q + at0) * nc..(an * q + at0 + 1) * nc];
        model
            .flux(u, normal, &mut buf[..nc])
            .expect("admissible stencil state");
        stats.flux_evals += 1;
        for c in 0..nc {
            first[c] += wgt * buf[c];
        }
    }
}

// --- LAT in 2D ---------------------------------------------------------

struct Lat2Tables {
    m: usize,
    p_time: usize,
    dx_weights: Vec<Vec<f64>>,
    dx_halfwidths: Vec<usize>,
    dt_weights: Vec<Vec<f64>>,
}

impl Lat2Tables {
    fn build(m: usize) -> Self {
        let p_time = (m - 1) / 2;
        let dx_halfwidths: Vec<usize> = (2..=m).map(|k| (m + 1 - k).div_ceil(2)).collect();
        Self {
            m,
            p_time,
            dx_weights: dx_halfwidths
                .iter()
                .map(|&p| centered_diff_coeffs(p, 1).unwrap().weights)
                .collect(),
            dx_halfwidths,
            dt_weights: (2..=m)
                .map(|k| centered_diff_coeffs(p_time, k - 1).unwrap().weights)
                .collect(),
        }
    }
}

/// Padded 2D scratch field.
struct Field {
    data: Vec<f64>,
    nx: usize,
    w: usize,
    nc: usize,
}

impl Field {
    fn zeros(nx: usize, ny: usize, w: usize, nc: usize) -> Self {
        Self {
            data: vec![0.0; (nx + 2 * w) * (ny + 2 * w) * nc],
            nx,
            w,
            nc,
        }
    }

    #[inline]
    fn at(&self, i: isize, j: isize) -> usize {
        (((j + self.w as isize) as usize) * (self.nx + 2 * self.w)
            + ((i + self.w as isize) as usize))
            * self.nc
    }
}

/// One LAT step in 2D: the first time derivative comes from the 2D WENO
/// flux divergence, higher derivatives from global centered
/// differentiation in each direction.
#[allow(clippy::too_many_arguments)]
fn lat_step_2d(
    state: &mut State2,
    grid: &Grid2,
    model: FluxModel,
    scheme: &SchemeConfig,
    tables: &Lat2Tables,
    bc: Boundary,
    dt: f64,
    stats: &mut RunStats,
) -> Result<(), SolverError> {
    fill_ghosts_2d(state, bc, bc);
    let (ax, ay) = direction_speeds(state, model)?;
    let nc = state.ncomp;
    let (nx, ny) = (state.nx, state.ny);
    let w = state.w as isize;
    let dx = grid.dx();
    let dy = grid.dy();
    let m = tables.m;
    let recon = &scheme.recon;

    let (el, er) = recon.pair_extents();
    let first_margin = w - el.max(er) as isize;
    assert!(first_margin >= 0);

    // First derivative over the extended margin: directional WENO fluxes.
    let mut d1x = Field::zeros(nx, ny, state.w, nc);
    let mut line = vec![0.0; (nx + 2 * state.w) * nc];
    let nifx = (nx as isize - 1 + first_margin) - (-first_margin - 1) + 1;
    let mut lf = vec![0.0; nifx as usize * nc];
    for j in -first_margin..ny as isize + first_margin {
        gather_line(state, Axis::X, j, &mut line);
        line_fluxes(
            &line,
            w,
            nc,
            model,
            Axis::X,
            ax,
            recon,
            -first_margin - 1,
            nx as isize - 1 + first_margin,
            j,
            stats,
            &mut lf,
        )?;
        for i in -first_margin..nx as isize + first_margin {
            let hi = ((i + first_margin + 1) as usize) * nc;
            let lo = ((i + first_margin) as usize) * nc;
            let dst = d1x.at(i, j);
            for c in 0..nc {
                d1x.data[dst + c] = -(lf[hi + c] - lf[lo + c]) / dx;
            }
        }
    }
    let mut d1y = Field::zeros(nx, ny, state.w, nc);
    let mut line = vec![0.0; (ny + 2 * state.w) * nc];
    let nify = (ny as isize - 1 + first_margin) - (-first_margin - 1) + 1;
    let mut lf = vec![0.0; nify as usize * nc];
    for i in -first_margin..nx as isize + first_margin {
        gather_line(state, Axis::Y, i, &mut line);
        line_fluxes(
            &line,
            w,
            nc,
            model,
            Axis::Y,
            ay,
            recon,
            -first_margin - 1,
            ny as isize - 1 + first_margin,
            i,
            stats,
            &mut lf,
        )?;
        for j in -first_margin..ny as isize + first_margin {
            let hi = ((j + first_margin + 1) as usize) * nc;
            let lo = ((j + first_margin) as usize) * nc;
            let dst = d1y.at(i, j);
            for c in 0..nc {
                d1y.data[dst + c] = -(lf[hi + c] - lf[lo + c]) / dy;
            }
        }
    }
    let mut u_derivs: Vec<Field> = Vec::with_capacity(m);
    let mut d1 = Field::zeros(nx, ny, state.w, nc);
    for k in 0..d1.data.len() {
        d1.data[k] = d1x.data[k] + d1y.data[k];
    }
    u_derivs.push(d1);

    let mut margin = first_margin;
    for k in 2..=m {
        let pt = tables.p_time as isize;
        let wt = &tables.dt_weights[k - 2];
        let mut ftn = Field::zeros(nx, ny, state.w, nc);
        let mut ftt = Field::zeros(nx, ny, state.w, nc);
        let mut pred = [0.0; MAX_COMP];
        let mut buf = [0.0; MAX_COMP];
        for j in -margin..ny as isize + margin {
            for i in -margin..nx as isize + margin {
                let base = state.cell(i, j);
                let mut accn = [0.0; MAX_COMP];
                let mut acct = [0.0; MAX_COMP];
                let mut ok = true;
                for r in -pt..=pt {
                    let rdt = r as f64 * dt;
                    pred[..nc].copy_from_slice(base);
                    let mut fac = 1.0;
                    for (l, ud) in u_derivs.iter().enumerate() {
                        fac *= rdt / (l as f64 + 1.0);
                        let src = ud.at(i, j);
                        for c in 0..nc {
                            pred[c] += fac * ud.data[src + c];
                        }
                    }
                    stats.flux_evals += 2;
                    if !model.flux_predicted(&pred[..nc], Axis::X, &mut buf[..nc]) {
                        ok = false;
                        break;
                    }
                    let wgt = wt[(r + pt) as usize];
                    for c in 0..nc {
                        accn[c] += wgt * buf[c];
                    }
                    if !model.flux_predicted(&pred[..nc], Axis::Y, &mut buf[..nc]) {
                        ok = false;
                        break;
                    }
                    for c in 0..nc {
                        acct[c] += wgt * buf[c];
                    }
                }
                let dn = ftn.at(i, j);
                let dtt = ftt.at(i, j);
                if ok {
                    let scale = dt.powi((k - 1) as i32);
                    for c in 0..nc {
                        ftn.data[dn + c] = accn[c] / scale;
                        ftt.data[dtt + c] = acct[c] / scale;
                    }
                } else {
                    stats.fallbacks += 1;
                    for c in 0..nc {
                        ftn.data[dn + c] = 0.0;
                        ftt.data[dtt + c] = 0.0;
                    }
                }
            }
        }

        let pk = tables.dx_halfwidths[k - 2] as isize;
        let wx = &tables.dx_weights[k - 2];
        margin -= pk;
        assert!(margin >= 0);
        let mut uk = Field::zeros(nx, ny, state.w, nc);
        for j in -margin..ny as isize + margin {
            for i in -margin..nx as isize + margin {
                let dst = uk.at(i, j);
                for c in 0..nc {
                    let mut accx = 0.0;
                    for (t, wgt) in wx.iter().enumerate() {
                        accx += wgt * ftn.data[ftn.at(i - pk + t as isize, j) + c];
                    }
                    let mut accy = 0.0;
                    for (t, wgt) in wx.iter().enumerate() {
                        accy += wgt * ftt.data[ftt.at(i, j - pk + t as isize) + c];
                    }
                    uk.data[dst + c] = -accx / dx + -accy / dy;
                }
            }
        }
        u_derivs.push(uk);
    }

    for j in 0..ny as isize {
        for i in 0..nx as isize {
            let mut fac = 1.0;
            let mut incr = [0.0; MAX_COMP];
            for (l, ud) in u_derivs.iter().enumerate() {
                fac *= dt / (l as f64 + 1.0);
                let src = ud.at(i, j);
                for c in 0..nc {
                    incr[c] += fac * ud.data[src + c];
                }
            }
            let cell = state.cell_mut(i, j);
            for c in 0..nc {
                cell[c] += incr[c];
            }
        }
    }
    state.time += dt;
    Ok(())
}

// --- driver ------------------------------------------------------------

/// 2D time step bound: `cfl / (alpha_x/dx + alpha_y/dy)`.
pub fn cfl_dt_2d(
    state: &State2,
    model: FluxModel,
    grid: &Grid2,
    cfl: f64,
) -> Result<f64, SolverError> {
    let (ax, ay) = direction_speeds(state, model)?;
    let denom = ax / grid.dx() + ay / grid.dy();
    if denom == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(cfl / denom)
    }
}

/// Prebuilt 2D stepper for one scheme.
pub struct Stepper2 {
    pub scheme: SchemeConfig,
    cat: Option<Cat2Tables>,
    lat: Option<Lat2Tables>,
}

impl Stepper2 {
    pub fn new(scheme: SchemeConfig) -> Result<Self, SolverError> {
        scheme.validate()?;
        let (cat, lat) = match scheme.integrator {
            TimeIntegrator::Cat { m } => (Some(Cat2Tables::build(m)), None),
            TimeIntegrator::Lat { m, widths } => {
                if widths != crate::integrators::LatWidths::Graded {
                    return Err(SolverError::Config(
                        "2D LAT supports graded widths only".into(),
                    ));
                }
                (None, Some(Lat2Tables::build(m)))
            }
            _ => (None, None),
        };
        Ok(Self { scheme, cat, lat })
    }

    pub fn ghost_width(&self) -> usize {
        self.scheme.ghost_width()
    }

    pub fn step(
        &self,
        state: &mut State2,
        grid: &Grid2,
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
                let mut interior = interior_to_vec(state);
                {
                    let rhs = |u: &[f64]| -> Result<Vec<f64>, ()> {
                        vec_to_interior(&mut scratch, u);
                        match rhs_2d(&mut scratch, grid, model, recon, bc, stats) {
                            Ok(r) => Ok(r.rhs),
                            Err(e) => {
                                err = Some(e);
                                Err(())
                            }
                        }
                    };
                    let res = match self.scheme.integrator {
                        TimeIntegrator::SspRk3 => ssprk3_step(&mut interior, dt, rhs),
                        _ => ssprk104_step(&mut interior, dt, rhs),
                    };
                    if res.is_ok() {
                        vec_to_interior(state, &interior);
                    }
                }
                if let Some(e) = err {
                    return Err(e);
                }
                state.time += dt;
                Ok(())
            }
            TimeIntegrator::Cat { .. } => cat_step_2d(
                state,
                grid,
                model,
                &self.scheme,
                self.cat.as_ref().unwrap(),
                bc,
                dt,
                stats,
            ),
            TimeIntegrator::Lat { .. } => lat_step_2d(
                state,
                grid,
                model,
                &self.scheme,
                self.lat.as_ref().unwrap(),
                bc,
                dt,
                stats,
            ),
        }
    }

    pub fn advance(
        &self,
        state: &mut State2,
        grid: &Grid2,
        model: FluxModel,
        bc: Boundary,
        t_final: f64,
        stats: &mut RunStats,
    ) -> Result<(), SolverError> {
        let tol = 1e-12 * t_final.abs().max(1.0);
        while state.time < t_final - tol {
            let dt = cfl_dt_2d(state, model, grid, self.scheme.cfl)?.min(t_final - state.time);
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
