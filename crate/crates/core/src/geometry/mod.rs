//! Compact sets, domains, approach regions and the connected-complement check.

pub mod compact;
pub mod complement;
pub mod domain;
pub mod region;

pub use compact::{CompactSet, SampleDensity, Shape, ShapeTag};
pub use complement::{connected_complement_check, default_box, BoundingBox, ComplementVerdict};
pub use domain::{Domain, DomainDesc, PowerPsi};
pub use region::{region_membership, region_samples, tangent_disc, ApproachRegion, RegionParams};
