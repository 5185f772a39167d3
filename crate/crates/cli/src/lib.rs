//! Library surface of the experiment driver; the `metadist` binary is a
//! thin argument-parsing wrapper over these modules.

pub mod config;
pub mod csvw;
pub mod experiments;
