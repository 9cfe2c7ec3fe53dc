pub mod eqcheck;
pub mod error;
pub mod bilin;
pub mod classify;
pub mod cli;
pub mod deform;
pub mod fomc;
pub mod group;
pub mod linalg;
pub mod poly;
pub mod qalg;
pub mod report;
pub mod ring;
pub mod ringfile;

pub use error::{Error, Result};
pub use ring::FdzRing;
