//! The germ sums `J(a, r)` and `I(a, r)`, their closed forms, the germs `K`
//! and `L`, and the counting and quadratic-form identities behind them.
//!
//! The congruence condition on the variables is `x_i = 1 mod t^m O`.

mod closed;
mod counting;
mod params;
mod quadratic;
mod sums;

pub use closed::{
    closed_i, closed_j, gamma_inv_a, germ_k, germ_l, germ_l_via_k, ratio_from_closed_forms, ratio_prop,
};
pub use counting::{bracket_identities, count_c1_exponent, count_c2, count_c2_direct};
pub use params::{germ_regime_threshold, GermParams};
pub use quadratic::{
    delta_quadratic_part, diagonalize_quadratic, expected_diagonal, fp_mul, quadratic_form_matrix, transpose,
    DeltaExpansion, FpMatrix,
};
pub use sums::{
    budget_from_env, eval_i, eval_j, DpEvaluator, EvaluatorRegistry, GermSum, GermSumEvaluator, NaiveEvaluator,
    SumVar, DEFAULT_BUDGET,
};
