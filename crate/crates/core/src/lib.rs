//! Exact combinatorics of Hirzebruch-Jung continued fractions, zero chains and
//! triangulated polygons, and the classification of wormhole singularities
//! (cyclic quotient surface singularities with two extremal P-resolutions).

pub mod coherent;
pub mod continued_fraction;
pub mod error;
pub mod oracle;
pub mod rational;
pub mod render;
pub mod triangulation;
pub mod wormhole;

pub use continued_fraction::HJChain;
pub use error::{Error, Result};
pub use rational::{ExactRational, SingularityLabel};
