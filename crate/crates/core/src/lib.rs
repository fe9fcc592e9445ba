//! Spin Sutherland systems obtained by reducing free motion on products of
//! compact Lie groups under twisted conjugation.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod lie;
pub mod linalg;
pub mod ode;
pub mod product;
pub mod projection;
pub mod quantum;
pub mod sample;
pub mod sutherland;
pub mod verify;
pub mod ym;

pub use error::{Error, Result};
