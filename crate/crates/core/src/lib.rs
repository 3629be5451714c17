//! Exact arithmetic for Kloosterman-type orbital integrals over `F_p((t))`.
//!
//! Every quantity is computed exactly: residues and truncated Laurent series
//! in [`localfield`], values of characters and integrals in the cyclotomic
//! field `Q(zeta_{4p})` in [`exactvalue`]. On top of that sit
//!
//! - [`symbols`]: the tame Hilbert symbol and the Weil constant,
//! - [`germs`]: the germ sums `J(a, r)`, `I(a, r)`, their closed forms and the
//!   germ functions `K` and `L`,
//! - [`orbital`]: orbital integrals at ranks 2 and 3, the intermediate
//!   integrals and the germ-expansion check,
//! - [`sweep`]: a registry of named identities evaluated over parameter grids.

pub mod error;
pub mod exactvalue;
pub mod germs;
pub mod localfield;
pub mod orbital;
pub mod sweep;
pub mod symbols;

pub use error::{Error, Result};
pub use exactvalue::ExactValue;
pub use localfield::{Composition, LaurentSeries, MatrixLF, ResidueElem};
