//! Game-theory engine: strategic-form solution concepts, equilibrium
//! search, learning dynamics, coalition-form solution concepts and
//! coalition formation, plus ready-made scenario games.

pub mod coalition;
pub mod dynamics;
pub mod error;
pub mod formation;
pub mod game;
pub mod harness;
pub mod linalg;
pub mod lp;
pub mod scenarios;
pub mod solvers;

pub use error::{Error, Result};
pub use game::{ContinuousGame, FiniteGame, JointDistribution, MixedProfile, StrategicGame};
