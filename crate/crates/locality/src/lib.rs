//! Exact computations with finite fusion systems, partial groups and localities.
//!
//! * [`grp`]: table groups, subgroup lattices, Sylow subgroups and cores.
//! * [`fus`]: fusion systems, saturation and the subgroup families built on it.
//! * [`ploc`]: partial groups and localities.
//! * [`kern`]: kernels of localities and the checks built on them.
//! * [`io`] and [`catalog`]: JSON interchange and the built-in instances.

pub mod bits;
pub mod caps;
pub mod catalog;
pub mod error;
pub mod fus;
pub mod grp;
pub mod io;
pub mod kern;
pub mod ploc;
pub mod report;
pub mod run;
pub mod suite;

pub use caps::Caps;
pub use error::{Error, Result};
