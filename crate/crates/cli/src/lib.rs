//! Batch front-end for mining campaigns: configuration, multi-seed runs,
//! set comparison and file output.

pub mod campaign;
pub mod compare;
pub mod config;
