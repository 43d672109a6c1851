//! Weighted sparse index sets, their combination coefficients, cardinality
//! bounds and cost accounting.

mod bounds;
mod multi_index;
mod set;
mod weights;

pub use bounds::{
    bound_bd, bound_loglog, bound_sg, bound_tp, check_go_tail, cost_bound_sq, cost_exact,
    go_constant, max_box_volume, TailCheck,
};
pub use multi_index::MultiIndex;
pub use set::{
    cardinality_x, combination_coefficient, enumerate_x, enumerate_y, fits, in_x, in_y,
    weighted_sum, WeightedIndexSet,
};
pub use weights::WeightVector;
