//! Coupled Einstein and nonlinear electromagnetic evolution in wave coordinates.

pub mod diagnostics;
pub mod em_model;
pub mod evolution;
pub mod grid;
pub mod initial_data;
pub mod null_frame;
pub mod tensor_core;
pub mod verify;
