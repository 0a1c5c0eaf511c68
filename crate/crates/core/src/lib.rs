//! Analysis and simulation of two-user oblivious arbitrarily varying
//! multiple-access channels under list decoding.
//!
//! The crate covers four areas:
//!
//! * [`symmetrizability`] — bipartite confusion graphs, the linear systems
//!   defining symmetrizing jammer laws, and weak/strong symmetrizability orders;
//! * [`region`] — worst-case jammers and inner/outer capacity-region bounds;
//! * [`discrete_sim`] — constant-composition codes, a typicality list decoder
//!   and i.i.d./symmetrizing jammers;
//! * [`gaussian_sim`] — spherical codes, a minimum-distance list decoder and
//!   the superposition jamming attack.
//!
//! All information quantities are in bits.

pub mod channel;
pub mod cli;
pub mod discrete_sim;
pub mod dist;
pub mod error;
pub mod grid;
pub mod gaussian_sim;
pub mod lp;
pub mod region;
pub mod rng;
pub mod symmetrizability;
pub mod types;

pub use channel::{DiscreteAvmac, InputDistribution};
pub use dist::{CondDistribution, JointDistribution};
pub use error::{Error, Result};
