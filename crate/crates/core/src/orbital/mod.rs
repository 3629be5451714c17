//! Orbital integrals `I(w t, phi)` and `J(w t, f)` at ranks 2 and 3, the
//! rank-2 intermediate integrals and the germ-expansion check.
//!
//! Orbital integrals are computed by refining cells of unipotent
//! coordinates until the test function is constant on each cell; the
//! intermediate integrals enumerate representatives directly, so the two
//! sides of each decomposition identity share no evaluation code.

mod congruence;
mod expansion;
mod integrals;
mod intermediate;
mod label;
mod search;

pub use congruence::{CongruenceFunction, Membership};
pub use expansion::{germ_expansion_check, ExpansionCheck};
pub use integrals::{orbital_i, orbital_j, unit_sym_test};
pub use intermediate::{
    check_decomposition_i, check_decomposition_j, intermediate_i, intermediate_j, sample_test_function,
    DecompositionCheck, BRUTE_FORCE_BUDGET,
};
pub use label::{
    levi_positions, orbit_point, radical_positions, relevant_representative, unipotent, upper_positions, OrbitLabel,
};
pub use search::DEFAULT_NODE_BUDGET;
