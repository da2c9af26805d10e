//! Online convex optimization with simultaneous adaptive and dynamic regret
//! guarantees.
//!
//! The building blocks are projected online gradient descent ([`ogd`]), the
//! dense and geometric covering interval systems ([`intervals`]), the
//! AdaNormalHedge meta-learner ([`anh`]) and the Ader step-size ensemble
//! ([`ader`]). [`combined`] assembles them into AOD (OGD experts on dense
//! intervals) and AOA (Ader experts on geometric intervals). [`metrics`]
//! measures regret on recorded runs and [`harness`] drives experiments.

pub mod ader;
pub mod anh;
pub mod combined;
pub mod domain;
pub mod env;
pub mod error;
pub mod game;
pub mod harness;
pub mod intervals;
pub mod loss;
pub mod metrics;
pub mod ogd;
pub mod point;

pub use ader::Ader;
pub use combined::{Aoa, Aod};
pub use domain::Domain;
pub use env::Environment;
pub use error::{Error, Result};
pub use game::{run_game, OnlineLearner, RunTrace};
pub use intervals::{Interval, IntervalSystem};
pub use loss::{Loss, LossFunction};
pub use ogd::Ogd;
pub use point::Point;
