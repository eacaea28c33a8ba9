pub mod bounds;
pub mod constants;
pub mod error;
pub mod hyp_trig;
pub mod hyperboloid;
pub mod precision;
pub mod steklov;
pub mod verify;
pub mod volumes;
pub mod surface;

pub use error::{LabError, Result};
