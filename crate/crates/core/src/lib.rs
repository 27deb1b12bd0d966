pub mod alif;
pub mod bench;
pub mod config;
pub mod error;
pub mod fpfilter;
pub mod instfreq;
pub mod io;
pub mod iterfilt;
pub mod signal;
pub mod signals;
mod spline;
mod tridiag;

pub use error::{Error, Result};
