pub mod eisenstein;
pub mod error;
pub mod classify;
pub mod cli;
pub mod forms;
pub mod gaussian;
pub mod hilbert;
pub mod lax;
pub mod par;
pub mod polygon;
pub mod rat;
pub mod render;
pub mod ring;
pub mod spine;
pub mod spine_geom;
pub mod topograph;

pub use error::{Error, Result};
