//! Coefficient fields: exact rationals and binary floats.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Num, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::params::{format_rational, rational_sqrt, Rational};

pub trait Scalar: Num + Clone + Neg<Output = Self> + PartialOrd + Debug + Send + Sync + 'static {
    fn from_rational(r: &Rational) -> Self;
    /// `√q`; exact mode fails unless `q` is a rational square.
    fn sqrt_of(q: &Rational) -> Result<Self>;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    fn render(&self) -> String;
    const EXACT: bool;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn sqrt_of(q: &Rational) -> Result<Self> {
        rational_sqrt(q).ok_or_else(|| Error::NotASquare {
            generator: String::new(),
            value: format_rational(q),
        })
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn render(&self) -> String {
        format_rational(self)
    }

    const EXACT: bool = true;
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn sqrt_of(q: &Rational) -> Result<Self> {
        Ok(Self::from_rational(q).sqrt())
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn render(&self) -> String {
        format!("{self:e}")
    }

    const EXACT: bool = false;
}
