pub mod constituents;
pub mod error;
pub mod howe;
pub mod ktype;
pub mod oracle;
pub mod parameters;
#[cfg(test)]
mod properties;
pub mod rational;
pub mod structure;
pub mod unitarity;
