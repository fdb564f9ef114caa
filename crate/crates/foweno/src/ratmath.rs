//! Exact rational linear algebra for generating coefficient tables.
//!
//! All differentiation and reconstruction weights in this crate are obtained
//! by solving small monomial-exactness systems. Solving them over the
//! rationals and converting to `f64` at the end removes transcription and
//! round-off concerns from the tables themselves.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn rat_frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// x^e for integer e >= 0 (0^0 = 1, the convention the monomial systems use).
pub(crate) fn rat_pow(x: &BigRational, e: usize) -> BigRational {
    let mut acc = rat(1);
    for _ in 0..e {
        acc *= x;
    }
    acc
}

pub(crate) fn factorial(n: usize) -> BigRational {
    let mut acc = rat(1);
    for i in 1..=n {
        acc *= rat(i as i64);
    }
    acc
}

/// Moment of x^r over the unit cell centered at c:
/// `int_{c-1/2}^{c+1/2} x^r dx`.
pub(crate) fn cell_moment(c: &BigRational, r: usize) -> BigRational {
    let hi = c + rat_frac(1, 2);
    let lo = c - rat_frac(1, 2);
    (rat_pow(&hi, r + 1) - rat_pow(&lo, r + 1)) / rat((r + 1) as i64)
}

/// Solve `a x = b` by Gauss-Jordan elimination in exact arithmetic.
///
/// Panics on a singular matrix; every system assembled in this crate is a
/// Vandermonde-type system with distinct nodes, hence invertible.
pub(crate) fn solve_exact(
    mut a: Vec<Vec<BigRational>>,
    mut b: Vec<BigRational>,
) -> Vec<BigRational> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular coefficient system");
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &a[col][col];
            for c in col..n {
                let t = &a[col][c] * &factor;
                a[r][c] -= t;
            }
            let t = &b[col] * &factor;
            b[r] -= t;
        }
    }
    (0..n).map(|i| &b[i] / &a[i][i]).collect()
}

pub(crate) fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().expect("rational out of f64 range")
}
