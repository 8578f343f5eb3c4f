//! Integer-coefficient polynomials in `p` and their roots.

pub mod families;
pub mod integer;
pub mod roots;
pub mod sparse;

pub use families::{
    balanced_value, build_f_k, build_split_test, build_two_class_test, marginal, Constants,
    TripartiteSplit,
};
pub use integer::{
    flat_case, marginal_slope_at_one, second_difference_s, square_sum, FlatCase, SecondDifference,
};
pub use roots::{
    crossing_root, isolate_root, junction_points, peak_point, positive_roots, unit_interval_roots,
    Crossing, CrossingRoot, IsolatedRoot, PeakPoint, DEFAULT_SCAN_POINTS,
};
pub use sparse::SparsePolynomial;
