//! Smith-McMillan decoupling of square MIMO plants: exact polynomial and
//! rational-matrix algebra, closed-loop maps in both domains, internal
//! stability, frequency-domain bounds and step responses.

pub mod design;
pub mod error;
pub mod freq;
pub mod io;
pub mod loops;
pub mod polymat;
pub mod polyrat;
pub mod sim;
pub mod stability;
pub mod tfm;

pub use error::{Error, Result};
