//! Root numbers, average root numbers and generic ranks for one-parameter
//! families of elliptic curves over Q(t).

pub mod algebra;
pub mod averages;
pub mod curves;
pub mod density;
pub mod error;
pub mod poly;
pub mod ranks;
pub mod root_numbers;
pub mod scalar;
pub mod ser;
pub mod suite;
pub mod surfaces;

pub use error::{Error, Result};

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;
pub type Real = f64;
