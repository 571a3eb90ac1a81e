//! Kernels of localities.
//!
//! A kernel is a partial normal subgroup `N` with `P ∩ N ∈ Δ` for every
//! object `P`; it is a locality `(N, Γ, T)` in its own right. The reports
//! here compare properties of `L` with properties of its kernel, each side
//! evaluated on its own.

mod checks;
mod kernel;
mod product;
mod theorems;
mod theta;

pub use checks::{frattini_generation, frattini_report, quotient_iso_report};
pub use kernel::{construct_with_kernel, is_kernel, kernel_triple, KernelTriple};
pub use product::{product_nh, product_report, ProductInstance};
pub use theorems::{precondition_report, theorem_b_report, theorem_c_report};
pub use theta::{linking_kernel_quotient, theta_subgroup};
