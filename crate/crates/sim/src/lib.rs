//! Deterministic 2-D intersection world and the constrained-MDP
//! environment built on top of it.
//!
//! `map`/`world` hold the kinematic simulation: polyline routes through an
//! unsignalized crossing, IDM-controlled social traffic with stochastic
//! spawning, oriented-rectangle collision detection, fixed 0.1 s stepping.
//! `env` wraps that into the RL interface: ego-frame state encoding, task
//! vectors, action mapping and the vector reward.

pub mod collision;
pub mod env;
pub mod idm;
pub mod map;
pub mod trace;
pub mod vehicle;
pub mod world;

pub use env::{
    ActionPair, EgoTask, IntersectionEnv, StateVector, TaskVector, VectorReward, SOCIAL_SLOTS,
    STATE_DIM,
};
pub use map::{Arm, MapParams, MapSpec, Route, RouteId};
pub use vehicle::{Role, VehicleState};
pub use world::{Outcome, TrafficConfig, World};
