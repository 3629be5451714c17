//! Values in the cyclotomic field `Q(zeta_{4p})`: characters, Gauss sums,
//! `sqrt(p)`, and exact integration of locally constant functions.

mod characters;
mod field;
mod integrate;

pub use characters::{abs_half_power, big_psi_char, gauss_sum, psi_char, sqrt_q, sqrt_q_pow, theta_char};
pub use field::{degree, q_pow, ExactValue};
pub use integrate::{integrate, integrate_phase, integrate_phase_stable, residue_counts_value, Constraint, DomainSpec};
