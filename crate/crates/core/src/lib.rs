//! Joint thermometry of several thermal baths with a collisional model.
pub mod error;
pub mod analytic;
pub mod cli;
pub mod channels;
pub mod estimation;
pub mod linalg;
pub mod protocols;
