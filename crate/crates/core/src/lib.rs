//! Exact computations with mapping classes of the once-punctured torus.
//!
//! The modules follow the argument for uniform exponential growth of
//! non-virtually-abelian subgroups:
//!
//! * [`farey_model`]: slopes, matrices, classification, Farey distance.
//! * [`twist_calculus`]: intersection growth under Dehn twists and twist
//!   ping-pong.
//! * [`free_cert`]: free-subgroup certificates, purification and the search
//!   for short independent words.
//! * [`growth_counter`]: exact ball sizes in the word metric.
//! * [`random_walk`]: return probabilities and spectral-radius bounds.
//! * [`constants_engine`]: the arithmetic behind the subsurface-projection
//!   thresholds.
//! * [`acceptance`]: end-to-end checks shared by the test suite and the CLI.

pub mod acceptance;
pub mod constants_engine;
pub mod error;
pub mod exact;
pub mod farey_model;
pub mod free_cert;
pub mod growth_counter;
pub mod random_walk;
pub mod twist_calculus;

pub use error::{McgError, Result};
pub use farey_model::{MappingClass, Slope};
