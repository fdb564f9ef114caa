//! Numerical differentiation formulas on uniform grids.
//!
//! Three families are used by the approximate Taylor integrators:
//!
//! * centered `(2p+1)`-point formulas `D^k` on the nodes `{-p, ..., p}`,
//!   approximating the k-th derivative at node 0 (maximal order: exact on
//!   monomials through degree 2p);
//! * interpolatory `2p`-point formulas `A^{k,q}` on the nodes
//!   `{-p+1, ..., p}`: the k-th derivative of the degree `2p-1` point-value
//!   interpolant at offset `q`: used for local spatial derivatives and the
//!   temporal differentiation of Taylor-predicted values;
//! * their sliding-average variant, built from the polynomial whose unit
//!   cell averages match the samples: used wherever values are assembled
//!   into a numerical flux whose *differences* must stay high order.
//!
//! The sliding-average convention is what ties everything together: the
//! divided difference of its shifted midpoint evaluations telescopes
//! exactly into the centered formula,
//!
//! ```text
//! D^k_p(f)_i = (A^{k-1,1/2}_p(f)_i - A^{k-1,1/2}_p(f)_{i-1}) / h,
//! ```
//!
//! for every k up to 2p, which gives the approximate Taylor methods their
//! conservative form at full interior order. (With point-value midpoint
//! interpolation the identity fails below k = 2p-1 and conservative flux
//! differences retain only second-order accuracy.) The two variants
//! coincide at p = 1.
//!
//! Weights are generated on demand by solving the exactness systems in
//! exact rational arithmetic and cached as `f64`.

use std::io;

use num_rational::{BigRational, Rational64};
use thiserror::Error;

use crate::ratmath::{cell_moment, factorial, rat, rat_pow, solve_exact, to_f64};

#[derive(Debug, Error, PartialEq)]
pub enum NumDiffError {
    #[error("stencil half-width must be at least 1")]
    ZeroHalfWidth,
    #[error("derivative order {k} not representable on this stencil (max {max})")]
    OrderTooHigh { k: usize, max: usize },
    #[error("expected {expected} stencil values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Which family a table belongs to; interpolatory tables carry their offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TableKind {
    Centered,
    Interpolatory { q: Rational64 },
    SlidingAverage { q: Rational64 },
}

/// Differentiation weights for one `(p, kind, k, q)` combination.
///
/// Centered tables hold `2p+1` weights on nodes `-p..=p`; interpolatory
/// tables hold `2p` weights on nodes `-p+1..=p`. Immutable once built.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    pub p: usize,
    pub k: usize,
    pub kind: TableKind,
    pub weights: Vec<f64>,
}

impl CoefficientTable {
    /// Leftmost node offset covered by the weights.
    pub fn first_node(&self) -> isize {
        match self.kind {
            TableKind::Centered => -(self.p as isize),
            TableKind::Interpolatory { .. } | TableKind::SlidingAverage { .. } => {
                -(self.p as isize) + 1
            }
        }
    }

    /// Applies the formula to `values` with grid step `h`:
    /// `h^{-k} * sum_j w_j values[j]`.
    pub fn apply(&self, values: &[f64], h: f64) -> Result<f64, NumDiffError> {
        if values.len() != self.weights.len() {
            return Err(NumDiffError::LengthMismatch {
                expected: self.weights.len(),
                got: values.len(),
            });
        }
        Ok(self.dot(values) / h.powi(self.k as i32))
    }

    /// Weight/value dot product without the `h^{-k}` scaling.
    #[inline]
    pub fn dot(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.weights.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Centered `(2p+1)`-point weights for the k-th derivative at node 0.
///
/// The weights are the unique solution of
/// `sum_j w_j j^r = r! [r == k]` for `r = 0..=2p`.
pub fn centered_diff_coeffs(p: usize, k: usize) -> Result<CoefficientTable, NumDiffError> {
    if p == 0 {
        return Err(NumDiffError::ZeroHalfWidth);
    }
    if k > 2 * p {
        return Err(NumDiffError::OrderTooHigh { k, max: 2 * p });
    }
    let nodes: Vec<BigRational> = (-(p as i64)..=p as i64).map(rat).collect();
    let rows = 2 * p + 1;
    let a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| nodes.iter().map(|x| rat_pow(x, r)).collect())
        .collect();
    let b: Vec<BigRational> = (0..rows)
        .map(|r| if r == k { factorial(k) } else { rat(0) })
        .collect();
    let weights = solve_exact(a, b).iter().map(to_f64).collect();
    Ok(CoefficientTable {
        p,
        k,
        kind: TableKind::Centered,
        weights,
    })
}

/// Interpolatory `2p`-point weights on nodes `{-p+1, ..., p}` for the k-th
/// derivative of the degree `2p-1` interpolant at offset `q`.
///
/// Exactness conditions: `sum_j w_j j^r = (d^k/ds^k) s^r |_{s=q}` for
/// `r = 0..=2p-1`.
pub fn interp_diff_coeffs(
    p: usize,
    k: usize,
    q: Rational64,
) -> Result<CoefficientTable, NumDiffError> {
    if p == 0 {
        return Err(NumDiffError::ZeroHalfWidth);
    }
    if k >= 2 * p {
        return Err(NumDiffError::OrderTooHigh { k, max: 2 * p - 1 });
    }
    let nodes: Vec<BigRational> = (-(p as i64) + 1..=p as i64).map(rat).collect();
    let qr = BigRational::new((*q.numer()).into(), (*q.denom()).into());
    let rows = 2 * p;
    let a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| nodes.iter().map(|x| rat_pow(x, r)).collect())
        .collect();
    let b = derivative_targets(rows, k, &qr);
    let weights = solve_exact(a, b).iter().map(to_f64).collect();
    Ok(CoefficientTable {
        p,
        k,
        kind: TableKind::Interpolatory { q },
        weights,
    })
}

/// Sliding-average variant of the interpolatory family: the k-th
/// derivative at offset `q` of the degree `2p-1` polynomial whose unit-cell
/// averages over the stencil match the samples.
///
/// Exactness: `sum_j w_j m_r(j) = (d^k/ds^k) s^r |_{s=q}` with `m_r(j)` the
/// cell moments. This is the family whose shifted midpoint evaluations
/// telescope exactly into the centered formulas; the approximate Taylor
/// fluxes assemble with it so their conservative differences keep full
/// order. At p = 1 both variants coincide.
pub fn interp_avg_coeffs(
    p: usize,
    k: usize,
    q: Rational64,
) -> Result<CoefficientTable, NumDiffError> {
    if p == 0 {
        return Err(NumDiffError::ZeroHalfWidth);
    }
    if k >= 2 * p {
        return Err(NumDiffError::OrderTooHigh { k, max: 2 * p - 1 });
    }
    let nodes: Vec<BigRational> = (-(p as i64) + 1..=p as i64).map(rat).collect();
    let qr = BigRational::new((*q.numer()).into(), (*q.denom()).into());
    let rows = 2 * p;
    let a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| nodes.iter().map(|x| cell_moment(x, r)).collect())
        .collect();
    let b = derivative_targets(rows, k, &qr);
    let weights = solve_exact(a, b).iter().map(to_f64).collect();
    Ok(CoefficientTable {
        p,
        k,
        kind: TableKind::SlidingAverage { q },
        weights,
    })
}

/// (d^k/ds^k) s^r at s = q for r = 0..rows-1.
fn derivative_targets(rows: usize, k: usize, q: &BigRational) -> Vec<BigRational> {
    (0..rows)
        .map(|r| {
            if r < k {
                rat(0)
            } else {
                &factorial(r) / &factorial(r - k) * rat_pow(q, r - k)
            }
        })
        .collect()
}

/// Debug dump: one `p,kind,k,q,j,weight` row per weight, 17 significant digits.
pub fn write_tables_csv<W: io::Write>(tables: &[&CoefficientTable], out: &mut W) -> io::Result<()> {
    writeln!(out, "p,kind,k,q,j,weight")?;
    for t in tables {
        let (kind, q) = match t.kind {
            TableKind::Centered => ("centered", String::new()),
            TableKind::Interpolatory { q } => {
                ("interpolatory", format!("{}/{}", q.numer(), q.denom()))
            }
            TableKind::SlidingAverage { q } => {
                ("sliding-average", format!("{}/{}", q.numer(), q.denom()))
            }
        };
        for (idx, w) in t.weights.iter().enumerate() {
            let j = t.first_node() + idx as isize;
            writeln!(out, "{},{},{},{},{},{:.16e}", t.p, kind, t.k, q, j, w)?;
        }
    }
    Ok(())
}
