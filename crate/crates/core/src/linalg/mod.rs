//! Linear algebra kernels: small dense matrices for element work, CSR
//! storage for the global blocks, and a sparse LDL^T factorization with
//! reverse Cuthill-McKee ordering for the saddle-point step systems.

pub mod dense;
pub mod ldl;
pub mod sparse;

pub use dense::DenseMatrix;
pub use ldl::{reverse_cuthill_mckee, FactorizedSystem, LdlFactorization, RESIDUAL_TOL};
pub use sparse::{add_scaled_vec, dot, inf_norm_vec, CsrMatrix};
