//! Downlink rate coverage of small cells that take their backhaul wirelessly
//! from massive-MIMO connector nodes, in either in-band (IBFD) or out-of-band
//! (OBFD) full duplex.
//!
//! Two evaluation paths share one parameter set: [`analytic`] inverts the
//! interference Laplace transforms numerically, and [`sim`] samples Poisson
//! topologies.

pub mod analytic;
pub mod config;
pub mod error;
pub mod model;
pub mod report;
pub mod sim;
pub mod specfun;

pub use error::{Error, Result};
pub use model::{derive_model, DerivedModel, LoadDistribution, Mode, NetworkParams};
pub use report::{CoverageReport, Method};
