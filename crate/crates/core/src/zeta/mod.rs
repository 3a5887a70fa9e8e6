//! Selberg zeta functions: Fredholm determinants, Euler products and zeros.

mod det;
mod euler;
mod zeros;

pub use det::{converge_in_n, leading_eigenvalue, refined_zeta, refined_zeta_log, zeta_det, zeta_log_det};
pub use euler::{euler_product, euler_product_over, primitive_classes, trace_to_length, EulerProduct, PrimitiveClass};
pub use zeros::{
    bisect, count_zeros_rect, count_zeros_rect_fn, delta, delta_by_determinant, delta_by_eigenvalue, fmt17, new_eigenvalue_count,
    real_zeros, real_zeros_fn, winding_number, DeltaReport, Rect, Zero, ZeroOptions, ZeroReport,
};
