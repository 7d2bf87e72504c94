//! Fault-tolerant paired 2-disjoint path covers and Hamiltonian paths in the
//! BCube data-center topology under the partitioned edge fault model.
//!
//! The crate models the logical graph BC(n,k), validates and generates
//! partitioned edge fault sets whose per-dimension counts stay within
//! exponential budgets, constructs fault-avoiding Hamiltonian paths and
//! paired 2-disjoint path covers, and checks every output against
//! independent verifiers and brute-force searches on small instances.

pub mod dpc;
pub mod error;
pub mod files;
pub mod hampath;
pub mod oracle;
pub mod pef;
pub mod topology;

pub use error::{Error, Result};
