//! Dumps the differentiation tables the approximate Taylor methods are
//! built from, in the debug CSV format.

use foweno::numdiff::{
    centered_diff_coeffs, interp_avg_coeffs, interp_diff_coeffs, write_tables_csv,
};
use num_rational::Rational64;

fn main() {
    let half = Rational64::new(1, 2);
    let tables = [
        centered_diff_coeffs(1, 1).unwrap(),
        centered_diff_coeffs(2, 1).unwrap(),
        centered_diff_coeffs(2, 4).unwrap(),
        interp_diff_coeffs(2, 0, half).unwrap(),
        interp_diff_coeffs(2, 1, Rational64::new(0, 1)).unwrap(),
        interp_avg_coeffs(2, 0, half).unwrap(),
        interp_avg_coeffs(3, 0, half).unwrap(),
    ];

    let refs: Vec<&_> = tables.iter().collect();
    let mut out = Vec::new();
    write_tables_csv(&refs, &mut out).unwrap();
    print!("{}", String::from_utf8(out).unwrap());
}
