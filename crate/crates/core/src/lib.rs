//! Finite-dimensional frames, Θ-frames and g-frames, induced sequences and
//! exhaustive checks of the two weaving notions for indexed families.

pub mod cli;
pub mod error;
pub mod frames;
pub mod gframes;
pub mod io;
pub mod linalg;
pub mod theorems;
pub mod weaving;

pub use error::{Error, Result};
pub use frames::{FrameBounds, FrameConfig, OperatorTheta, ThetaSide, VectorFrame};
pub use gframes::{GFrame, IndexedFamily, LocalFrameSet};
pub use linalg::{Matrix, Vector};
pub use weaving::{WeaveMode, WeaveOptions, WeavingReport};
