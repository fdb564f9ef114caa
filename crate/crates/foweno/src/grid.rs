//! Uniform cell-centered grids with ghost layers, boundary handling,
//! initial conditions and deterministic CSV output.
//!
//! Cell centers sit at `x_i = a + (i + 1/2) dx`; interface fluxes live at
//! `x_{i+1/2}`. Ghost cells are filled by periodic wrap or zeroth-order
//! extrapolation once per step.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::models::{EulerPrimitive1D, EulerPrimitive2D, FluxModel};

#[derive(Debug, Error)]
pub enum GridError {
    #[error(
        "initial condition defined on [{expected_lo}, {expected_hi}], grid covers [{lo}, {hi}]"
    )]
    DomainMismatch {
        expected_lo: f64,
        expected_hi: f64,
        lo: f64,
        hi: f64,
    },
    #[error("{cells} cells cannot support ghost width {ghost} (need cells >= 2 * ghost)")]
    TooFewCells { cells: usize, ghost: usize },
    #[error("model/state component mismatch")]
    ComponentMismatch,
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

/// Boundary treatment per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    /// Zeroth-order extrapolation (outflow/inflow).
    Outflow,
}

/// Geometry of a uniform 1D grid.
#[derive(Debug, Clone, Copy)]
pub struct Grid1 {
    pub xmin: f64,
    pub xmax: f64,
    pub n: usize,
}

impl Grid1 {
    pub fn new(xmin: f64, xmax: f64, n: usize) -> Self {
        assert!(n >= 1 && xmax > xmin);
        Self { xmin, xmax, n }
    }

    pub fn dx(&self) -> f64 {
        (self.xmax - self.xmin) / self.n as f64
    }

    /// Center of cell `i` (ghost indices allowed).
    pub fn center(&self, i: isize) -> f64 {
        self.xmin + (i as f64 + 0.5) * self.dx()
    }
}

/// Conserved-variable field on a 1D grid, including ghost cells.
///
/// Storage is cell-major: `data[(i + w) * ncomp + c]`.
#[derive(Debug, Clone)]
pub struct State1 {
    pub time: f64,
    pub ncomp: usize,
    pub n: usize,
    pub w: usize,
    pub data: Vec<f64>,
}

impl State1 {
    pub fn zeros(grid: &Grid1, ncomp: usize, ghost: usize) -> Result<Self, GridError> {
        if ghost > 0 && grid.n < 2 * ghost {
            return Err(GridError::TooFewCells {
                cells: grid.n,
                ghost,
            });
        }
        Ok(Self {
            time: 0.0,
            ncomp,
            n: grid.n,
            w: ghost,
            data: vec![0.0; (grid.n + 2 * ghost) * ncomp],
        })
    }

    #[inline]
    pub fn idx(&self, i: isize) -> usize {
        ((i + self.w as isize) as usize) * self.ncomp
    }

    #[inline]
    pub fn cell(&self, i: isize) -> &[f64] {
        let k = self.idx(i);
        &self.data[k..k + self.ncomp]
    }

    #[inline]
    pub fn cell_mut(&mut self, i: isize) -> &mut [f64] {
        let k = self.idx(i);
        let m = self.ncomp;
        &mut self.data[k..k + m]
    }

    /// Interior values as one contiguous slice.
    pub fn interior(&self) -> &[f64] {
        &self.data[self.w * self.ncomp..(self.w + self.n) * self.ncomp]
    }

    pub fn interior_mut(&mut self) -> &mut [f64] {
        let (a, b) = (self.w * self.ncomp, (self.w + self.n) * self.ncomp);
        &mut self.data[a..b]
    }

    /// Largest |value| over interior cells; NaN poisons the result.
    pub fn interior_max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for v in self.interior() {
            if v.is_nan() {
                return f64::NAN;
            }
            m = m.max(v.abs());
        }
        m
    }

    /// Per-component interior sums via Neumaier compensation
    /// (mass when multiplied by dx).
    pub fn interior_sums(&self) -> Vec<f64> {
        let mut sum = vec![0.0; self.ncomp];
        let mut comp = vec![0.0; self.ncomp];
        for cell in self.interior().chunks_exact(self.ncomp) {
            for (c, v) in cell.iter().enumerate() {
                let t = sum[c] + v;
                if sum[c].abs() >= v.abs() {
                    comp[c] += (sum[c] - t) + v;
                } else {
                    comp[c] += (v - t) + sum[c];
                }
                sum[c] = t;
            }
        }
        for c in 0..self.ncomp {
            sum[c] += comp[c];
        }
        sum
    }
}

/// Fills the ghost layer from the interior: periodic wrap or nearest-cell copy.
pub fn fill_ghosts(state: &mut State1, bc: Boundary) {
    let (n, w, m) = (state.n as isize, state.w as isize, state.ncomp);
    for g in 0..w {
        let (left_src, right_src) = match bc {
            Boundary::Periodic => (n - w + g, g),
            Boundary::Outflow => (0, n - 1),
        };
        let li = state.idx(g - w);
        let ls = state.idx(left_src);
        state.data.copy_within(ls..ls + m, li);
        let ri = state.idx(n + g);
        let rs = state.idx(right_src);
        state.data.copy_within(rs..rs + m, ri);
    }
}

/// Geometry of a uniform 2D grid.
#[derive(Debug, Clone, Copy)]
pub struct Grid2 {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid2 {
    pub fn square(lo: f64, hi: f64, n: usize) -> Self {
        Self {
            xmin: lo,
            xmax: hi,
            ymin: lo,
            ymax: hi,
            nx: n,
            ny: n,
        }
    }

    pub fn dx(&self) -> f64 {
        (self.xmax - self.xmin) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.ymax - self.ymin) / self.ny as f64
    }

    pub fn center_x(&self, i: isize) -> f64 {
        self.xmin + (i as f64 + 0.5) * self.dx()
    }

    pub fn center_y(&self, j: isize) -> f64 {
        self.ymin + (j as f64 + 0.5) * self.dy()
    }
}

/// Conserved-variable field on a 2D grid with ghost frames on both axes.
/// Row-major: `data[((j + w) * (nx + 2w) + (i + w)) * ncomp + c]`.
#[derive(Debug, Clone)]
pub struct State2 {
    pub time: f64,
    pub ncomp: usize,
    pub nx: usize,
    pub ny: usize,
    pub w: usize,
    pub data: Vec<f64>,
}

impl State2 {
    pub fn zeros(grid: &Grid2, ncomp: usize, ghost: usize) -> Result<Self, GridError> {
        if ghost > 0 && (grid.nx < 2 * ghost || grid.ny < 2 * ghost) {
            return Err(GridError::TooFewCells {
                cells: grid.nx.min(grid.ny),
                ghost,
            });
        }
        Ok(Self {
            time: 0.0,
            ncomp,
            nx: grid.nx,
            ny: grid.ny,
            w: ghost,
            data: vec![0.0; (grid.nx + 2 * ghost) * (grid.ny + 2 * ghost) * ncomp],
        })
    }

    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let row = (j + self.w as isize) as usize;
        let col = (i + self.w as isize) as usize;
        (row * (self.nx + 2 * self.w) + col) * self.ncomp
    }

    #[inline]
    pub fn cell(&self, i: isize, j: isize) -> &[f64] {
        let k = self.idx(i, j);
        &self.data[k..k + self.ncomp]
    }

    #[inline]
    pub fn cell_mut(&mut self, i: isize, j: isize) -> &mut [f64] {
        let k = self.idx(i, j);
        let m = self.ncomp;
        &mut self.data[k..k + m]
    }

    pub fn interior_max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for j in 0..self.ny as isize {
            for i in 0..self.nx as isize {
                for v in self.cell(i, j) {
                    if v.is_nan() {
                        return f64::NAN;
                    }
                    m = m.max(v.abs());
                }
            }
        }
        m
    }

    pub fn interior_sums(&self) -> Vec<f64> {
        let mut sum = vec![0.0; self.ncomp];
        for j in 0..self.ny as isize {
            for i in 0..self.nx as isize {
                for (c, v) in self.cell(i, j).iter().enumerate() {
                    sum[c] += v;
                }
            }
        }
        sum
    }
}

/// Fills both ghost frames; the x-pass runs first, the y-pass then wraps
/// whole padded rows so corner ghosts hold doubly-wrapped values.
pub fn fill_ghosts_2d(state: &mut State2, bc_x: Boundary, bc_y: Boundary) {
    let (nx, ny, w) = (state.nx as isize, state.ny as isize, state.w as isize);
    let m = state.ncomp;
    for j in 0..ny {
        for g in 0..w {
            let (ls, rs) = match bc_x {
                Boundary::Periodic => (nx - w + g, g),
                Boundary::Outflow => (0, nx - 1),
            };
            let d = state.idx(g - w, j);
            let s = state.idx(ls, j);
            state.data.copy_within(s..s + m, d);
            let d = state.idx(nx + g, j);
            let s = state.idx(rs, j);
            state.data.copy_within(s..s + m, d);
        }
    }
    let row_len = (state.nx + 2 * state.w) * m;
    for g in 0..w {
        let (ls, rs) = match bc_y {
            Boundary::Periodic => (ny - w + g, g),
            Boundary::Outflow => (0, ny - 1),
        };
        let d = state.idx(-(state.w as isize), g - w);
        let s = state.idx(-(state.w as isize), ls);
        state.data.copy_within(s..s + row_len, d);
        let d = state.idx(-(state.w as isize), ny + g);
        let s = state.idx(-(state.w as isize), rs);
        state.data.copy_within(s..s + row_len, d);
    }
}

// --- initial conditions --------------------------------------------------

/// Composite advection profile on [0, 2]: a narrow Gaussian, a triangle,
/// a top-hat and a half-ellipse, zero between the features.
///
/// The printed piecewise intervals of this classical profile overlap; the
/// first four branches take priority on their stated intervals and the
/// half-ellipse applies only on its real support |x - 5/3| <= 1/10.
pub fn test1_profile(x: f64) -> f64 {
    if x < 2.0 / 3.0 {
        (-1200.0 * (x - 1.0 / 3.0).powi(2)).exp()
    } else if x < 5.0 / 6.0 {
        6.0 * (x - 2.0 / 3.0)
    } else if x < 1.0 {
        -6.0 * (x - 1.0)
    } else if (7.0 / 6.0..=4.0 / 3.0).contains(&x) {
        1.0
    } else {
        let s = 1.0 - 100.0 * (x - 5.0 / 3.0).powi(2);
        if s > 0.0 {
            s.sqrt()
        } else {
            0.0
        }
    }
}

/// Samples the composite profile on a grid over [0, 2].
pub fn init_test1(grid: &Grid1, ghost: usize) -> Result<State1, GridError> {
    check_domain(grid, 0.0, 2.0)?;
    let mut s = State1::zeros(grid, 1, ghost)?;
    for i in 0..grid.n as isize {
        s.cell_mut(i)[0] = test1_profile(grid.center(i));
    }
    Ok(s)
}

/// Gaussian pulse `exp(-10 (x - 1/2)^2)` for the Burgers test.
pub fn gaussian_profile(x: f64) -> f64 {
    (-10.0 * (x - 0.5).powi(2)).exp()
}

pub fn init_gaussian_burgers(grid: &Grid1, ghost: usize) -> Result<State1, GridError> {
    let mut s = State1::zeros(grid, 1, ghost)?;
    for i in 0..grid.n as isize {
        s.cell_mut(i)[0] = gaussian_profile(grid.center(i));
    }
    Ok(s)
}

/// Piecewise-constant Riemann data by cell-center location; a center
/// exactly on the split takes the right state.
pub fn init_riemann_1d(
    grid: &Grid1,
    model: FluxModel,
    left: EulerPrimitive1D,
    right: EulerPrimitive1D,
    x_split: f64,
    ghost: usize,
) -> Result<State1, GridError> {
    let m = model.ncomp();
    if m != 3 {
        return Err(GridError::ComponentMismatch);
    }
    let lc = model
        .primitive_to_conserved(&[left.rho, left.u, left.p])
        .expect("admissible left state");
    let rc = model
        .primitive_to_conserved(&[right.rho, right.u, right.p])
        .expect("admissible right state");
    let mut s = State1::zeros(grid, m, ghost)?;
    for i in 0..grid.n as isize {
        let src = if grid.center(i) < x_split { &lc } else { &rc };
        s.cell_mut(i).copy_from_slice(src);
    }
    Ok(s)
}

/// Quadrant states numbered counterclockwise from the top-right:
/// 1 = (x > xs, y > ys), 2 = (x < xs, y > ys), 3 = lower-left, 4 = lower-right.
pub fn init_riemann_2d(
    grid: &Grid2,
    model: FluxModel,
    quadrants: [EulerPrimitive2D; 4],
    split: (f64, f64),
    ghost: usize,
) -> Result<State2, GridError> {
    let m = model.ncomp();
    if m != 4 {
        return Err(GridError::ComponentMismatch);
    }
    let cons: Vec<Vec<f64>> = quadrants
        .iter()
        .map(|q| {
            model
                .primitive_to_conserved(&[q.rho, q.u, q.v, q.p])
                .expect("admissible quadrant state")
        })
        .collect();
    let mut s = State2::zeros(grid, m, ghost)?;
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let right = grid.center_x(i) >= split.0;
            let top = grid.center_y(j) >= split.1;
            let q = match (right, top) {
                (true, true) => 0,
                (false, true) => 1,
                (false, false) => 2,
                (true, false) => 3,
            };
            s.cell_mut(i, j).copy_from_slice(&cons[q]);
        }
    }
    Ok(s)
}

fn check_domain(grid: &Grid1, lo: f64, hi: f64) -> Result<(), GridError> {
    if (grid.xmin - lo).abs() > 1e-12 || (grid.xmax - hi).abs() > 1e-12 {
        return Err(GridError::DomainMismatch {
            expected_lo: lo,
            expected_hi: hi,
            lo: grid.xmin,
            hi: grid.xmax,
        });
    }
    Ok(())
}

// --- output ----------------------------------------------------------------

/// `x,comp0[,comp1,...]` with 17 significant digits; byte-deterministic.
pub fn write_csv_1d<W: Write>(grid: &Grid1, state: &State1, out: &mut W) -> io::Result<()> {
    write!(out, "x")?;
    for c in 0..state.ncomp {
        write!(out, ",comp{c}")?;
    }
    writeln!(out)?;
    for i in 0..grid.n as isize {
        write!(out, "{:.16e}", grid.center(i))?;
        for v in state.cell(i) {
            write!(out, ",{v:.16e}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// `x,y,comp0[,...]` in row-major order (y outer, x inner).
pub fn write_csv_2d<W: Write>(grid: &Grid2, state: &State2, out: &mut W) -> io::Result<()> {
    write!(out, "x,y")?;
    for c in 0..state.ncomp {
        write!(out, ",comp{c}")?;
    }
    writeln!(out)?;
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            write!(out, "{:.16e},{:.16e}", grid.center_x(i), grid.center_y(j))?;
            for v in state.cell(i, j) {
                write!(out, ",{v:.16e}")?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Bare value matrix of one component (one row per y line), for contour
/// plotting.
pub fn write_matrix_csv<W: Write>(state: &State2, component: usize, out: &mut W) -> io::Result<()> {
    for j in 0..state.ny as isize {
        for i in 0..state.nx as isize {
            if i > 0 {
                write!(out, ",")?;
            }
            write!(out, "{:.16e}", state.cell(i, j)[component])?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// Reads a CSV produced by [`write_csv_1d`]; returns (x, values) with
/// values cell-major.
pub fn read_csv_1d<R: BufRead>(input: R) -> io::Result<(Vec<f64>, Vec<f64>, usize)> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "empty csv"))??;
    let ncomp = header.split(',').count() - 1;
    let mut xs = Vec::new();
    let mut vals = Vec::new();
    for line in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let mut it = line.split(',');
        let x: f64 = it
            .next()
            .unwrap()
            .parse()
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        xs.push(x);
        for tok in it {
            vals.push(
                tok.parse::<f64>()
                    .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?,
            );
        }
    }
    Ok((xs, vals, ncomp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn periodic_ghosts_wrap() {
        let grid = Grid1::new(0.0, 1.0, 4);
        let mut s = State1::zeros(&grid, 1, 1).unwrap();
        for i in 0..4 {
            s.cell_mut(i)[0] = (i + 1) as f64;
        }
        fill_ghosts(&mut s, Boundary::Periodic);
        assert_eq!(s.cell(-1)[0], 4.0);
        assert_eq!(s.cell(4)[0], 1.0);
    }

    #[test]
    fn outflow_ghosts_copy_endpoints() {
        let grid = Grid1::new(0.0, 1.0, 4);
        let mut s = State1::zeros(&grid, 1, 2).unwrap();
        for i in 0..4 {
            s.cell_mut(i)[0] = (i + 1) as f64;
        }
        fill_ghosts(&mut s, Boundary::Outflow);
        assert_eq!(s.cell(-1)[0], 1.0);
        assert_eq!(s.cell(-2)[0], 1.0);
        assert_eq!(s.cell(4)[0], 4.0);
        assert_eq!(s.cell(5)[0], 4.0);
    }

    #[test]
    fn ghost_fill_is_idempotent() {
        let grid = Grid1::new(0.0, 1.0, 6);
        let mut s = State1::zeros(&grid, 2, 2).unwrap();
        for i in 0..6 {
            s.cell_mut(i)[0] = i as f64;
            s.cell_mut(i)[1] = -(i as f64);
        }
        fill_ghosts(&mut s, Boundary::Periodic);
        let once = s.data.clone();
        fill_ghosts(&mut s, Boundary::Periodic);
        assert_eq!(s.data, once);
    }

    #[test]
    fn corner_ghosts_doubly_wrap() {
        let grid = Grid2::square(0.0, 1.0, 4);
        let mut s = State2::zeros(&grid, 1, 1).unwrap();
        for j in 0..4 {
            for i in 0..4 {
                s.cell_mut(i, j)[0] = (10 * j + i) as f64;
            }
        }
        fill_ghosts_2d(&mut s, Boundary::Periodic, Boundary::Periodic);
        // Corner (-1,-1) wraps to interior (3,3).
        assert_eq!(s.cell(-1, -1)[0], s.cell(3, 3)[0]);
        assert_eq!(s.cell(4, -1)[0], s.cell(0, 3)[0]);
        assert_eq!(s.cell(4, 4)[0], s.cell(0, 0)[0]);
    }

    #[test]
    fn test1_profile_landmarks() {
        assert_eq!(test1_profile(1.0 / 3.0), 1.0);
        assert_eq!(test1_profile(1.25), 1.0);
        assert!((test1_profile(5.0 / 3.0) - 1.0).abs() < 1e-15);
        // Gaps between the features are zero.
        assert_eq!(test1_profile(1.05), 0.0);
        assert_eq!(test1_profile(1.45), 0.0);
        assert_eq!(test1_profile(1.9), 0.0);
    }

    #[test]
    fn init_test1_checks_domain() {
        let bad = Grid1::new(0.0, 1.0, 50);
        assert!(matches!(
            init_test1(&bad, 1),
            Err(GridError::DomainMismatch { .. })
        ));
        let good = Grid1::new(0.0, 2.0, 50);
        assert!(init_test1(&good, 2).is_ok());
    }

    #[test]
    fn init_is_mesh_consistent() {
        // A fixed physical point away from feature edges samples the same
        // value whatever the resolution.
        for n in [60, 120, 240] {
            let grid = Grid1::new(0.0, 2.0, n);
            let s = init_test1(&grid, 1).unwrap();
            let i = (1.25 / grid.dx() - 0.5).round() as isize;
            assert_eq!(s.cell(i)[0], 1.0, "n={n}");
        }
    }

    #[test]
    fn gaussian_landmarks() {
        assert_eq!(gaussian_profile(0.5), 1.0);
        assert!((gaussian_profile(0.0) - (-2.5f64).exp()).abs() < 1e-15);
        let d = 0.17;
        assert_eq!(gaussian_profile(0.5 + d), gaussian_profile(0.5 - d));
    }

    #[test]
    fn riemann_init_split_convention() {
        let grid = Grid1::new(0.0, 1.0, 10);
        let model = FluxModel::Euler1d { gamma: 1.4 };
        let l = EulerPrimitive1D::new(1.0, 0.0, 1.0);
        let r = EulerPrimitive1D::new(0.125, 0.0, 0.1);
        // Cell 4 center = 0.45 < 0.5, cell 5 center = 0.55.
        let s = init_riemann_1d(&grid, model, l, r, 0.5, 2).unwrap();
        assert_eq!(s.cell(4)[0], 1.0);
        assert_eq!(s.cell(5)[0], 0.125);
        // A center exactly on the split belongs to the right state.
        let s = init_riemann_1d(&grid, model, l, r, 0.45, 2).unwrap();
        assert_eq!(s.cell(4)[0], 0.125);
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let grid = Grid1::new(0.0, 1.0, 8);
        let model = FluxModel::Euler1d { gamma: 1.4 };
        let s = init_riemann_1d(
            &grid,
            model,
            EulerPrimitive1D::new(1.0, 0.0, 1.0),
            EulerPrimitive1D::new(0.125, 0.0, 0.1),
            0.5,
            0,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_csv_1d(&grid, &s, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x,comp0,comp1,comp2\n"));
        assert_eq!(text.lines().count(), 9);

        let (xs, vals, ncomp) = read_csv_1d(io::Cursor::new(&buf)).unwrap();
        assert_eq!(ncomp, 3);
        let mut s2 = State1::zeros(&grid, 3, 0).unwrap();
        s2.data.copy_from_slice(&vals);
        let mut buf2 = Vec::new();
        write_csv_1d(&grid, &s2, &mut buf2).unwrap();
        assert_eq!(buf, buf2);
        assert_eq!(xs.len(), 8);
    }
}
