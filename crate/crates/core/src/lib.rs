pub mod lattice;
pub mod series;
pub mod stacky;
pub mod suborb;
pub mod mirror;
pub mod oracle;
pub mod cli;
