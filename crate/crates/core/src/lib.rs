//! Exact truncated q-series arithmetic, shifted and Well-Poised Bailey
//! pairs, and a corpus of Rogers-Ramanujan type identities verified
//! coefficientwise over the rationals.

pub mod bailey;
pub mod corpus;
pub mod error;
pub mod instances;
pub mod monomial;
pub mod oracle;
pub mod par;
pub mod product;
pub mod qfunc;
pub mod rational;
pub mod series;
pub mod wp;

pub use error::{Error, Result};
pub use monomial::{Monomial, Param};
pub use rational::Rational;
pub use series::{TSeries, EXACT};
