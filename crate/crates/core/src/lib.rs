//! Exact counting and uniform random generation of k-noncrossing set
//! partitions, and of 2-regular k-noncrossing set partitions.
//!
//! Partitions of `[N]` with no `k`-crossing correspond to walks of length
//! `2N` through Young shapes with fewer than `k` rows. The [`count`] module
//! builds big-integer tables of such walks, the [`sampler`] draws walks one
//! step at a time with exact transition weights, and [`bijection`] turns the
//! walks back into arc diagrams.

pub mod bijection;
pub mod count;
pub mod diagram;
pub mod error;
pub mod sampler;
pub mod tableau;
pub mod testkit;

pub use diagram::{is_k_noncrossing, is_m_regular, max_crossing, Arc, Braid, CrossingReport, Partition};
pub use error::{Error, Result};
pub use tableau::{legal_steps, ChamberPoint, Parity, Shape, Step, Walk, WalkKind};
pub use count::{total_partitions, total_regular, OmegaTable, SigmaStarTable, Tables};
pub use bijection::{decode_braid, decode_partition, encode_partition, phi_inverse, phi_map, theta, theta_inv};
pub use sampler::{uniform_below, BitStream, Mode, SamplerSession, TransitionWeights};
