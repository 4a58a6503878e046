//! Small numerical kernels shared by the thermodynamic and geometric layers.

pub mod diff;
pub mod fit;
pub mod format;
pub mod quad;
pub mod root;
