//! Arithmetic in the residue field `F_p` and in `F_p((t))` at finite
//! absolute precision, plus small matrices over `F_p((t))`.

mod composition;
mod matrix;
mod residue;
mod series;

pub use composition::Composition;
pub use matrix::MatrixLF;
pub use residue::{check_odd_prime, is_odd_prime, legendre, ResidueElem};
pub use series::{
    lf_arith, lf_sqrt, parse_series, roots_of_unity, ArithOp, LaurentSeries, PARSED_ZERO_PRECISION,
};
