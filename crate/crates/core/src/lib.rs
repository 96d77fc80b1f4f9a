//! Stochastic comparisons of the second-order statistic of heterogeneous
//! exponentiated location-scale (ELS) samples, independent or coupled by an
//! Archimedean copula.
//!
//! A batch holds `n` components `X_i` with distribution `F_b((x - λ_i) / θ_i)^{α_i}`
//! for a shared baseline `F_b`. The crate evaluates the survival and hazard of the
//! second smallest component, tests usual-stochastic and hazard-rate orders on grids,
//! checks majorization hypotheses, and verifies the catalogue of comparison results
//! in [`theorems`] against concrete batches.

pub mod baseline;
pub mod copula;
pub mod error;
pub mod majorize;
pub mod numeric;
pub mod orderstat;
pub mod scenario;
pub mod stochorder;
pub mod theorems;

pub use baseline::{check_shape, BaselineFamily, ShapeCheck, ShapeCondition};
pub use copula::{Additivity, Generator};
pub use error::{Error, Result};
pub use majorize::{ChainClass, MajorKind};
pub use numeric::Grid;
pub use orderstat::ElsBatch;
pub use stochorder::{Direction, OrderRelation, OrderVerdict, Status};
