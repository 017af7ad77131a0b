//! Poisson kernel, Green functions, minimal thinness, harmonic measure.

pub mod green_arc;
pub mod kernel;
pub mod minthin;
pub mod superharmonic;
pub mod wos;

pub use green_arc::{green_arc_complement, green_arc_many, map_tolerance, psi_j_barrier, ArcOnCircle};
pub use kernel::{green_disc, poisson_kernel, poisson_kernel_f64};
pub use minthin::{minthin_psi_test, MinThinReport, ThinVerdict};
pub use superharmonic::{superharmonicity_check, SuperharmonicReport};
pub use wos::{harmonic_measure, modified_measure_functional, MeasureEstimate, WosConfig};
