//! Exact finite models of quantale-enriched categories.

pub mod bimodule;
pub mod caps;
pub mod completion;
pub mod error;
pub mod ideal;
pub mod category;
pub mod quantale;

pub use caps::Caps;
pub use error::{Error, Result};
pub use quantale::{QuantaleTable, StandardQuantale};
