//! Right-angled Coxeter groups, their multi-parameter Hecke algebras and the
//! simplicity classification of the reduced Hecke C*-algebra.

pub mod catalog;
pub mod central;
pub mod coxeter;
pub mod enumeration;
pub mod error;
pub mod growth;
pub mod hecke;
pub mod operator;
pub mod params;
pub mod poly;
pub mod scalar;
pub mod suite;

pub use coxeter::{CoxeterDiagram, Elem, Gen};
pub use error::{Error, Result};
pub use params::{MultiParameter, Rational, SignPattern};
