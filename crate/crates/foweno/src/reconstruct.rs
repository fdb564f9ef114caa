//! Shock-capturing spatial reconstructions at cell interfaces.
//!
//! Grid values are treated as cell averages of a flux-primitive function
//! (the classical finite-difference flux-splitting setting), and every
//! operator produces the value of that function at the right interface
//! `x_{i+1/2}` as a convex combination of `p+1` substencil reconstructions:
//!
//! * [`weno_js_reconstruct`]: classical weights `c_s / (I_s + eps)^2` with
//!   Jiang-Shu smoothness indicators (Jiang & Shu, JCP 126, 1996);
//! * [`oweno3_reconstruct`]: third-order reconstruction on the extended
//!   four-point stencil whose corrector weight keeps the optimal order at
//!   critical points of any order;
//! * [`foweno_reconstruct`]: order `2p+1` (p >= 2) reconstruction combining
//!   fast smoothness indicators (sums of squared first-order undivided
//!   differences) with optimal weights driven by a discriminant of the
//!   highest undivided differences.
//!
//! All weights, substencil coefficients and indicator quadratic forms are
//! generated at startup from exactness conditions in rational arithmetic;
//! no table is transcribed by hand.

use std::sync::OnceLock;

use num_rational::BigRational;
use thiserror::Error;

use crate::numdiff::centered_diff_coeffs;
use crate::ratmath::{rat, rat_frac, rat_pow, solve_exact, to_f64};

#[derive(Debug, Error, PartialEq)]
pub enum ReconstructError {
    #[error("substencil half-width {p} outside the supported range {min}..={max}")]
    UnsupportedHalfWidth { p: usize, min: usize, max: usize },
    #[error("expected {expected} stencil values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("exponents must satisfy a1 >= 1 and a2 >= (p+1)/(2 a1)")]
    AccuracyCondition,
    #[error("ideal weights must be positive and sum to one")]
    BadIdealWeights,
}

/// Reconstruction family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    WenoJs,
    Oweno3,
    Foweno,
}

/// Reconstructed interface value plus the final nonlinear weights
/// (diagnostic; the weights are nonnegative and sum to one).
#[derive(Debug, Clone)]
pub struct ReconstructionResult {
    pub value: f64,
    pub weights: Vec<f64>,
}

const MAX_P: usize = 3;

/// Configuration of one reconstruction operator.
///
/// Substencil coefficients, ideal weights and (for FOWENO) the undivided
/// central-difference weights are cached here so the per-interface kernels
/// touch no global state.
#[derive(Debug, Clone)]
pub struct ReconstructionConfig {
    pub family: Family,
    pub p: usize,
    pub epsilon: f64,
    pub a1: f64,
    pub a2: f64,
    pub ideal_weights: Vec<f64>,
    /// Use the discriminant literally as `|B - 4AC|` instead of `|B^2 - 4AC|`.
    pub literal_discriminant: bool,
    sub_coeffs: Vec<Vec<f64>>,
    diff_2p: Vec<f64>,
    diff_2pm1: Vec<f64>,
    diff_2pm2: Vec<f64>,
}

impl ReconstructionConfig {
    /// Classical WENO of order `2p+1` with Jiang-Shu indicators, eps = 1e-6.
    pub fn weno_js(p: usize) -> Result<Self, ReconstructError> {
        check_p(p, 1)?;
        Self::build(Family::WenoJs, p, 1e-6)
    }

    /// Third-order optimal WENO on the extended four-point stencil, eps = 1e-100.
    pub fn oweno3() -> Self {
        Self::build(Family::Oweno3, 1, 1e-100).expect("p=1 tables always exist")
    }

    /// Fast optimal WENO of order `2p+1` (p >= 2), eps = 1e-100,
    /// a1 = 1, a2 = ceil((p+1)/2).
    pub fn foweno(p: usize) -> Result<Self, ReconstructError> {
        check_p(p, 2)?;
        Self::build(Family::Foweno, p, 1e-100)
    }

    /// Operator of order `order = 2p+1` in {3, 5, 7}: OWENO3 for order 3,
    /// FOWENO otherwise.
    pub fn foweno_order(order: usize) -> Result<Self, ReconstructError> {
        match order {
            3 => Ok(Self::oweno3()),
            5 | 7 => Self::foweno(order / 2),
            _ => Err(ReconstructError::UnsupportedHalfWidth {
                p: order / 2,
                min: 1,
                max: MAX_P,
            }),
        }
    }

    fn build(family: Family, p: usize, epsilon: f64) -> Result<Self, ReconstructError> {
        let (diff_2p, diff_2pm1, diff_2pm2) = if family == Family::Foweno {
            (
                centered_diff_coeffs(p, 2 * p).unwrap().weights,
                centered_diff_coeffs(p, 2 * p - 1).unwrap().weights,
                centered_diff_coeffs(p, 2 * p - 2).unwrap().weights,
            )
        } else {
            (Vec::new(), Vec::new(), Vec::new())
        };
        let a1 = 1.0;
        let a2 = ((p + 1) as f64 / (2.0 * a1)).ceil();
        Ok(Self {
            family,
            p,
            epsilon,
            a1,
            a2,
            ideal_weights: ideal_weights(p)?,
            literal_discriminant: false,
            sub_coeffs: substencil_coefficients(p),
            diff_2p,
            diff_2pm1,
            diff_2pm2,
        })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self, ReconstructError> {
        if epsilon <= 0.0 {
            return Err(ReconstructError::NonPositiveEpsilon);
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_exponents(mut self, a1: f64, a2: f64) -> Result<Self, ReconstructError> {
        if a1 < 1.0 || a2 < (self.p + 1) as f64 / (2.0 * a1) {
            return Err(ReconstructError::AccuracyCondition);
        }
        self.a1 = a1;
        self.a2 = a2;
        Ok(self)
    }

    pub fn with_literal_discriminant(mut self, literal: bool) -> Self {
        self.literal_discriminant = literal;
        self
    }

    /// Nominal order of accuracy, `2p + 1`.
    pub fn order(&self) -> usize {
        2 * self.p + 1
    }

    /// Number of cells one one-sided reconstruction reads.
    pub fn window_len(&self) -> usize {
        match self.family {
            Family::Oweno3 => 4,
            _ => 2 * self.p + 1,
        }
    }

    /// Cells needed left and right of the interface `x_{i+1/2}` (counted
    /// from cell `i`) to evaluate both the upwind and the mirrored
    /// reconstruction.
    pub fn pair_extents(&self) -> (usize, usize) {
        match self.family {
            Family::Oweno3 => (1, 2),
            _ => (self.p, self.p + 1),
        }
    }

    /// Reconstruction at the right interface from the left-to-right window
    /// (`2p+1` cells ending at `i+p`, or the 4-cell extended stencil for
    /// OWENO3).
    pub fn reconstruct(&self, window: &[f64]) -> Result<ReconstructionResult, ReconstructError> {
        self.check_window(window)?;
        let mut w = [0.0; 4];
        let value = self.kernel(window, &mut w);
        Ok(ReconstructionResult {
            value,
            weights: w[..self.p + 1].to_vec(),
        })
    }

    /// Reconstruction for the mirrored (downwind) direction: applies the
    /// operator to `window` reflected about the interface. The window is
    /// given in natural left-to-right order and covers the cells the
    /// mirrored stencil reads (`i+1-p ..= i+1+p`, or `i-1 ..= i+2` for
    /// OWENO3).
    pub fn reconstruct_mirrored(
        &self,
        window: &[f64],
    ) -> Result<ReconstructionResult, ReconstructError> {
        self.check_window(window)?;
        let mut w = [0.0; 4];
        let value = self.kernel_mirrored(window, &mut w);
        Ok(ReconstructionResult {
            value,
            weights: w[..self.p + 1].to_vec(),
        })
    }

    fn check_window(&self, window: &[f64]) -> Result<(), ReconstructError> {
        if window.len() != self.window_len() {
            return Err(ReconstructError::LengthMismatch {
                expected: self.window_len(),
                got: window.len(),
            });
        }
        Ok(())
    }

    /// Allocation-free kernel; writes the `p+1` weights into `weights_out`.
    #[inline]
    pub(crate) fn kernel(&self, window: &[f64], weights_out: &mut [f64; 4]) -> f64 {
        match self.family {
            Family::WenoJs => self.kernel_weno_js(window, weights_out),
            Family::Oweno3 => self.kernel_oweno3(window, weights_out),
            Family::Foweno => self.kernel_foweno(window, weights_out),
        }
    }

    #[inline]
    pub(crate) fn kernel_mirrored(&self, window: &[f64], weights_out: &mut [f64; 4]) -> f64 {
        let mut buf = [0.0; 8];
        let n = window.len();
        for (dst, src) in buf[..n].iter_mut().zip(window.iter().rev()) {
            *dst = *src;
        }
        self.kernel(&buf[..n], weights_out)
    }

    fn substencil_values_into(&self, stencil: &[f64], out: &mut [f64; 4]) {
        for s in 0..=self.p {
            let mut acc = 0.0;
            for (j, c) in self.sub_coeffs[s].iter().enumerate() {
                acc += c * stencil[s + j];
            }
            out[s] = acc;
        }
    }

    fn kernel_weno_js(&self, stencil: &[f64], w: &mut [f64; 4]) -> f64 {
        let mut ps = [0.0; 4];
        self.substencil_values_into(stencil, &mut ps);
        let mut ind = [0.0; 4];
        jiang_shu_indicators_into(stencil, self.p, &mut ind);
        let mut sum = 0.0;
        for s in 0..=self.p {
            let d = ind[s] + self.epsilon;
            w[s] = self.ideal_weights[s] / (d * d);
            sum += w[s];
        }
        let mut value = 0.0;
        for s in 0..=self.p {
            w[s] /= sum;
            value += w[s] * ps[s];
        }
        value
    }

    /// OWENO3 on the extended stencil (f_{i-1}, f_i, f_{i+1}, f_{i+2}).
    fn kernel_oweno3(&self, f: &[f64], w: &mut [f64; 4]) -> f64 {
        let eps = self.epsilon;
        let p0 = -0.5 * f[0] + 1.5 * f[1];
        let p1 = 0.5 * f[1] + 0.5 * f[2];
        let i0 = (f[1] - f[0]) * (f[1] - f[0]);
        let i1 = (f[2] - f[1]) * (f[2] - f[1]);
        let i2 = (f[3] - f[2]) * (f[3] - f[2]);
        // Preliminary weights, cross-indexed so the smoother substencil
        // receives the larger weight (the ENO selection on step data).
        let denom = i0 + i1 + 2.0 * eps;
        let t0 = (i1 + eps) / denom;
        let t1 = (i0 + eps) / denom;
        let d = -f[0] + 3.0 * f[1] - 3.0 * f[2] + f[3];
        let tau = d * d * (i0 + i1 + i2);
        let j = i0 * (i1 + i2) + (i0 + i1) * i2;
        let omega = j / (j + tau + eps);
        w[0] = omega * self.ideal_weights[0] + (1.0 - omega) * t0;
        w[1] = omega * self.ideal_weights[1] + (1.0 - omega) * t1;
        w[0] * p0 + w[1] * p1
    }

    fn kernel_foweno(&self, stencil: &[f64], w: &mut [f64; 4]) -> f64 {
        let eps = self.epsilon;
        let mut ps = [0.0; 4];
        self.substencil_values_into(stencil, &mut ps);
        let mut ind = [0.0; 4];
        fast_indicators_into(stencil, self.p, &mut ind);

        let a = 0.5 * dot(&self.diff_2p, stencil);
        let b = dot(&self.diff_2pm1, stencil);
        let c = dot(&self.diff_2pm2, stencil);
        let disc = if self.literal_discriminant {
            (b - 4.0 * a * c).abs()
        } else {
            (b * b - 4.0 * a * c).abs()
        };
        let tau = (2.0 * a) * (2.0 * a);
        let ta = powa(tau, self.a1);
        let da = powa(disc, self.a1);
        let d = ta * da / (ta + da + eps);

        let mut sum = 0.0;
        for s in 0..=self.p {
            let amp = 1.0 + d / (powa(ind[s], self.a1) + eps);
            w[s] = self.ideal_weights[s] * powa(amp, self.a2);
            sum += w[s];
        }
        let mut value = 0.0;
        for s in 0..=self.p {
            w[s] /= sum;
            value += w[s] * ps[s];
        }
        value
    }
}

fn check_p(p: usize, min: usize) -> Result<(), ReconstructError> {
    if p < min || p > MAX_P {
        return Err(ReconstructError::UnsupportedHalfWidth { p, min, max: MAX_P });
    }
    Ok(())
}

#[inline]
fn dot(weights: &[f64], values: &[f64]) -> f64 {
    weights.iter().zip(values).map(|(w, v)| w * v).sum()
}

/// x^a for the user exponents; the defaults a = 1 and a = 2 stay exact.
#[inline]
fn powa(x: f64, a: f64) -> f64 {
    if a == 1.0 {
        x
    } else if a == 2.0 {
        x * x
    } else {
        x.powf(a)
    }
}

// --- generated tables -------------------------------------------------

/// Moment of x^r over the unit cell centered at c: int_{c-1/2}^{c+1/2} x^r dx.
fn cell_moment(c: &BigRational, r: usize) -> BigRational {
    let hi = c + rat_frac(1, 2);
    let lo = c - rat_frac(1, 2);
    (rat_pow(&hi, r + 1) - rat_pow(&lo, r + 1)) / rat((r + 1) as i64)
}

fn substencil_coefficients_exact(p: usize) -> Vec<Vec<BigRational>> {
    (0..=p)
        .map(|s| {
            // Substencil cells sit at offsets s-p .. s from cell i; the
            // reconstruction is exact for cell averages of degree <= p and
            // evaluated at x = 1/2.
            let offsets: Vec<BigRational> = (0..=p)
                .map(|j| rat(s as i64 - p as i64 + j as i64))
                .collect();
            let a: Vec<Vec<BigRational>> = (0..=p)
                .map(|r| offsets.iter().map(|c| cell_moment(c, r)).collect())
                .collect();
            let b: Vec<BigRational> = (0..=p).map(|r| rat_pow(&rat_frac(1, 2), r)).collect();
            solve_exact(a, b)
        })
        .collect()
}

/// Interface-value coefficients of the `p+1` substencil reconstructions;
/// entry `[s][j]` multiplies the cell average at offset `s - p + j`.
pub fn substencil_coefficients(p: usize) -> Vec<Vec<f64>> {
    substencil_coefficients_exact(p)
        .iter()
        .map(|row| row.iter().map(to_f64).collect())
        .collect()
}

/// Values of the `p+1` substencil reconstructions at the right interface.
pub fn substencil_values(stencil: &[f64], p: usize) -> Result<Vec<f64>, ReconstructError> {
    if stencil.len() != 2 * p + 1 {
        return Err(ReconstructError::LengthMismatch {
            expected: 2 * p + 1,
            got: stencil.len(),
        });
    }
    let coeffs = cached_sub_coeffs(p);
    Ok((0..=p)
        .map(|s| {
            coeffs[s]
                .iter()
                .enumerate()
                .map(|(j, c)| c * stencil[s + j])
                .sum()
        })
        .collect())
}

/// Ideal (linear) weights: the unique convex coefficients for which the
/// weighted substencil reconstructions reproduce the full-stencil
/// reconstruction for arbitrary data.
pub fn ideal_weights(p: usize) -> Result<Vec<f64>, ReconstructError> {
    check_p(p, 1)?;
    let sub = substencil_coefficients_exact(p);
    // Full (2p+1)-cell reconstruction coefficients at the interface.
    let offsets: Vec<BigRational> = (-(p as i64)..=p as i64).map(rat).collect();
    let a: Vec<Vec<BigRational>> = (0..=2 * p)
        .map(|r| offsets.iter().map(|c| cell_moment(c, r)).collect())
        .collect();
    let b: Vec<BigRational> = (0..=2 * p).map(|r| rat_pow(&rat_frac(1, 2), r)).collect();
    let full = solve_exact(a, b);

    // Substencil s covers node columns s .. s+p; the first p+1 node
    // equations are lower triangular in c_s, the rest must close exactly.
    let mut c = vec![rat(0); p + 1];
    for t in 0..=p {
        let mut acc = full[t].clone();
        for s in 0..t {
            if t - s <= p {
                acc -= &c[s] * &sub[s][t - s];
            }
        }
        c[t] = acc / &sub[t][0];
    }
    for t in p + 1..=2 * p {
        let mut acc = rat(0);
        for s in 0..=p {
            if t >= s && t - s <= p {
                acc += &c[s] * &sub[s][t - s];
            }
        }
        assert_eq!(acc, full[t], "ideal-weight closure failed for p={p}");
    }
    let weights: Vec<f64> = c.iter().map(to_f64).collect();
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|w| *w <= 0.0) || (sum - 1.0).abs() > 1e-14 {
        return Err(ReconstructError::BadIdealWeights);
    }
    Ok(weights)
}

fn cached_sub_coeffs(p: usize) -> &'static Vec<Vec<f64>> {
    static CACHE: [OnceLock<Vec<Vec<f64>>>; MAX_P] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[p - 1].get_or_init(|| substencil_coefficients(p))
}

// --- smoothness indicators ---------------------------------------------

#[inline]
fn fast_indicators_into(stencil: &[f64], p: usize, out: &mut [f64; 4]) {
    for s in 0..=p {
        let mut acc = 0.0;
        for j in 1..=p {
            let d = stencil[s + j] - stencil[s + j - 1];
            acc += d * d;
        }
        out[s] = acc;
    }
}

/// Fast smoothness indicators: for each substencil, the sum of squared
/// first-order undivided differences inside it.
pub fn fast_indicators(stencil: &[f64], p: usize) -> Result<Vec<f64>, ReconstructError> {
    if stencil.len() != 2 * p + 1 {
        return Err(ReconstructError::LengthMismatch {
            expected: 2 * p + 1,
            got: stencil.len(),
        });
    }
    let mut out = [0.0; 4];
    fast_indicators_into(stencil, p, &mut out);
    Ok(out[..=p].to_vec())
}

/// Symmetric quadratic form for one Jiang-Shu indicator: `diag` holds the
/// squared-term coefficients, `cross` the doubled off-diagonal ones.
#[derive(Debug)]
struct JsForm {
    diag: Vec<f64>,
    cross: Vec<(usize, usize, f64)>,
}

/// Generates the Jiang-Shu indicator of substencil s as a quadratic form in
/// the cell averages, from the defining integrals
/// `sum_{l=1..p} int_{cell i} h^{2l-1} (d^l q_s/dx^l)^2 dx`
/// with q_s the substencil reconstruction polynomial (grid step normalized
/// to 1, so the result is undivided).
fn jiang_shu_form(p: usize, s: usize) -> JsForm {
    let n = p + 1;
    // M maps polynomial coefficients to cell averages over the substencil.
    let offsets: Vec<BigRational> = (0..=p)
        .map(|j| rat(s as i64 - p as i64 + j as i64))
        .collect();
    let m: Vec<Vec<BigRational>> = (0..n)
        .map(|row| (0..n).map(|r| cell_moment(&offsets[row], r)).collect())
        .collect();
    // Columns of M^{-1}.
    let minv_cols: Vec<Vec<BigRational>> = (0..n)
        .map(|col| {
            let mut e = vec![rat(0); n];
            e[col] = rat(1);
            solve_exact(m.clone(), e)
        })
        .collect();

    // Q[r][t] = sum_l (r)_l (t)_l int_{-1/2}^{1/2} x^{r+t-2l} dx.
    let moment0 = |e: usize| -> BigRational {
        if e % 2 == 1 {
            rat(0)
        } else {
            rat_frac(1, ((e + 1) as i64) << e)
        }
    };
    let falling = |r: usize, l: usize| -> BigRational {
        let mut acc = rat(1);
        for i in 0..l {
            acc *= rat((r - i) as i64);
        }
        acc
    };
    let mut q = vec![vec![rat(0); n]; n];
    for l in 1..=p {
        for r in l..n {
            for t in l..n {
                let term = falling(r, l) * falling(t, l) * moment0(r + t - 2 * l);
                q[r][t] += term;
            }
        }
    }
    // G = M^{-T} Q M^{-1}; entry (a, b) = minv_col_a^T Q minv_col_b.
    let mut diag = Vec::with_capacity(n);
    let mut cross = Vec::new();
    let g_entry = |a: usize, b: usize| -> BigRational {
        let mut acc = rat(0);
        for r in 0..n {
            for t in 0..n {
                acc += &minv_cols[a][r] * &q[r][t] * &minv_cols[b][t];
            }
        }
        acc
    };
    for a in 0..n {
        diag.push(to_f64(&g_entry(a, a)));
    }
    for a in 0..n {
        for b in a + 1..n {
            let g = g_entry(a, b);
            if g != rat(0) {
                cross.push((a, b, 2.0 * to_f64(&g)));
            }
        }
    }
    JsForm { diag, cross }
}

fn cached_js_forms(p: usize) -> &'static Vec<JsForm> {
    static CACHE: [OnceLock<Vec<JsForm>>; MAX_P] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CACHE[p - 1].get_or_init(|| (0..=p).map(|s| jiang_shu_form(p, s)).collect())
}

#[inline]
fn jiang_shu_indicators_into(stencil: &[f64], p: usize, out: &mut [f64; 4]) {
    if p == 1 {
        // Identical definition at third order; evaluate in factored form.
        fast_indicators_into(stencil, p, out);
        return;
    }
    let forms = cached_js_forms(p);
    for (s, form) in forms.iter().enumerate() {
        let f = &stencil[s..s + p + 1];
        let mut acc = 0.0;
        for (r, d) in form.diag.iter().enumerate() {
            acc += d * f[r] * f[r];
        }
        for &(r, t, c) in &form.cross {
            acc += c * f[r] * f[t];
        }
        out[s] = acc;
    }
}

/// Jiang-Shu smoothness indicators for `p` in 1..=3; at `p = 1` they
/// coincide exactly with [`fast_indicators`].
pub fn jiang_shu_indicators(stencil: &[f64], p: usize) -> Result<Vec<f64>, ReconstructError> {
    check_p(p, 1)?;
    if stencil.len() != 2 * p + 1 {
        return Err(ReconstructError::LengthMismatch {
            expected: 2 * p + 1,
            got: stencil.len(),
        });
    }
    let mut out = [0.0; 4];
    jiang_shu_indicators_into(stencil, p, &mut out);
    Ok(out[..=p].to_vec())
}

// --- convenience entry points -----------------------------------------

/// OWENO3 reconstruction from the extended stencil
/// `(f_{i-1}, f_i, f_{i+1}, f_{i+2})`.
pub fn oweno3_reconstruct(
    extended: &[f64],
    config: &ReconstructionConfig,
) -> Result<ReconstructionResult, ReconstructError> {
    expect_family(config, Family::Oweno3)?;
    config.reconstruct(extended)
}

/// FOWENO reconstruction of order `2p+1`, `p >= 2`.
pub fn foweno_reconstruct(
    stencil: &[f64],
    config: &ReconstructionConfig,
) -> Result<ReconstructionResult, ReconstructError> {
    expect_family(config, Family::Foweno)?;
    config.reconstruct(stencil)
}

/// Classical Jiang-Shu WENO reconstruction of order `2p+1`.
pub fn weno_js_reconstruct(
    stencil: &[f64],
    config: &ReconstructionConfig,
) -> Result<ReconstructionResult, ReconstructError> {
    expect_family(config, Family::WenoJs)?;
    config.reconstruct(stencil)
}

/// Mirrored reconstruction for the downwind flux component; see
/// [`ReconstructionConfig::reconstruct_mirrored`].
pub fn reconstruct_negative(
    window: &[f64],
    config: &ReconstructionConfig,
) -> Result<ReconstructionResult, ReconstructError> {
    config.reconstruct_mirrored(window)
}

fn expect_family(config: &ReconstructionConfig, family: Family) -> Result<(), ReconstructError> {
    assert!(
        config.family == family,
        "configuration built for {:?}, called as {:?}",
        config.family,
        family
    );
    Ok(())
}

// --- arithmetic cost ----------------------------------------------------

/// Static count of floating-point additions/subtractions and
/// multiplications one indicator-set evaluation performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpCount {
    pub adds: usize,
    pub mults: usize,
}

impl OpCount {
    pub fn total(&self) -> usize {
        self.adds + self.mults
    }
}

/// Cost of [`fast_indicators`]: per substencil, p differences, p squarings
/// and p-1 accumulating additions.
pub fn fast_indicator_ops(p: usize) -> OpCount {
    OpCount {
        adds: (p + 1) * (2 * p - 1),
        mults: (p + 1) * p,
    }
}

/// Cost of [`jiang_shu_indicators`] as implemented (quadratic forms for
/// p >= 2; the factored coincident form at p = 1).
pub fn jiang_shu_indicator_ops(p: usize) -> OpCount {
    if p == 1 {
        return fast_indicator_ops(1);
    }
    let forms = cached_js_forms(p);
    let mut adds = 0;
    let mut mults = 0;
    for form in forms.iter() {
        let terms = form.diag.len() + form.cross.len();
        mults += 2 * terms;
        adds += terms - 1;
    }
    OpCount { adds, mults }
}
