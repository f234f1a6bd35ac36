pub mod acceptance;
pub mod analysis;
pub mod chain;
pub mod cli;
pub mod ed;
pub mod elliptic;
pub mod error;
pub mod quadrature;
pub mod scaling;
pub mod summation;
