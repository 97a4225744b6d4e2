pub mod error;
pub mod exact_arith;
pub mod fp_hypersurface;
pub mod phi_lab;
pub mod qp_series;
pub mod cyclo_cancel;

pub use error::{Error, Result};
