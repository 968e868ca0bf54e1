//! Support code for the `dtomo` binary: configuration, JSON readers and SVG output.

pub mod config;
pub mod input;
pub mod render;
