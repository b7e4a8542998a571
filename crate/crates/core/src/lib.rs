//! Chained polar subcode representation of the extended Golay code, with
//! successive-cancellation, list, sequential and block decoders, an
//! exhaustive maximum-likelihood oracle, and an AWGN simulation harness.

pub mod channel;
pub mod decoder;
pub mod error;
pub mod fht;
pub mod gf2;
pub mod golay;
pub mod ops;
pub mod oracle;
pub mod sc;
pub mod tables;

pub use decoder::{Algorithm, DecodeResult, LlrVector};
pub use error::{Error, Result};
pub use ops::OpCounter;
