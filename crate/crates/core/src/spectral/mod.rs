//! Grids, sampled fields, discrete Fourier transforms, L^p norms and the
//! quadrature engines consumed by the other modules.

mod dft;
mod field;
mod grid;
pub mod hlzf;
mod interp;
mod norm;
pub mod quad;
mod special;
mod sphere;

pub use dft::{dft, transform_axes, Direction};
pub use field::{Domain, SampledField};
pub use grid::GridSpec;
pub use interp::interp_cubic;
pub use norm::{inner, lp_norm, lp_norm_slice, pairwise_sum, pairwise_sum_complex};
pub use quad::{gauss_legendre, singular_quad, QuadratureSpec, SingularRule};
pub use special::gamma;
pub use sphere::{sphere_nodes, sphere_quad};
