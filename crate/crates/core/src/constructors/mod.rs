//! Frames of the standard constructions and the characteristic-class checks.

mod basic;
mod bundles;
mod grassmannian;
mod surgery;
mod toric;

pub use basic::{bt_frame, point_frame, product_frame, projective_frame, sphere_frame, stabilize, Extent, FrameFamily};
pub use bundles::{
    chern_sw_check, euler_check, projective_bundle_frame, thom_frame, thom_space_frame, BundleSpec, ProjectiveBundle,
    TauBundle,
};
pub use grassmannian::grassmannian_frame;
pub use surgery::{connected_sum_frame, fiber_bundle_series, FiberSeriesReport, CONNECTED_SUM_CAVEAT};
pub use toric::{bareiss_determinant, toric_frame, ToricData};
