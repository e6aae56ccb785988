//! Library side of the `sta-fields` command-line driver.

pub mod config;
pub mod error;
pub mod output;
pub mod simulate;
pub mod spin;
pub mod verify;
pub mod wave;
