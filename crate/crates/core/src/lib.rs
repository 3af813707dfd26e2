pub mod channel;
pub mod cli;
pub mod constraint;
pub mod error;
pub mod gap;
pub mod hk;
pub mod io;
pub mod manifest;
pub mod outer;
pub mod polytope;
