//! Truncated exact power series and the transforms built on them.

pub mod distribution;
pub mod fps;
pub mod solve;
pub mod verify;

pub use distribution::Distribution;
pub use fps::FormalPowerSeries;
