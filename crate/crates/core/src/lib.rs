pub mod data;
pub mod dist;
pub mod error;
pub mod figures;
pub mod fit;
pub mod optim;
pub mod sampling;
pub mod specfun;
pub mod versatility;

pub use dist::{DistributionSpec, Support};
pub use error::{Error, Result};
