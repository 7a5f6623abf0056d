//! Univariate polynomials over ℚ, Sturm sequences and isolation of the
//! smallest positive real root by dyadic bisection.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::params::{format_rational, to_f64, Rational};

/// Coefficients in ascending degree, with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Rational::one()] }
    }

    /// `c₀ + c₁t`.
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + to_f64(c))
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|x| x.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn square_free(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    /// Power series of `self / other` up to degree `n` inclusive; `other(0)`
    /// must be nonzero.
    pub fn series_quotient(&self, other: &Poly, n: usize) -> Vec<Rational> {
        let c0 = other.coeff(0);
        assert!(!c0.is_zero(), "series quotient needs a unit constant term");
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeff(k);
            for j in 1..=k.min(other.coeffs.len().saturating_sub(1)) {
                acc -= &other.coeffs[j] * &out[k - j];
            }
            out.push(acc * &inv0);
        }
        out
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let mono = match i {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{i}"),
            };
            if i == 0 || !a.is_one() {
                f.write_str(&format_rational(&a))?;
            }
            f.write_str(&mono)?;
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// Sturm sequence `p₀ = p, p₁ = p', p_{k+1} = −rem(p_{k−1}, p_k)`.
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        seq.push(-&r);
    }
    seq.pop();
    seq
}

fn sign_variations(seq: &[Poly], t: &Rational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let v = p.eval(t);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in `(a, b]`; `p(a)` must be nonzero.
pub fn count_roots(seq: &[Poly], a: &Rational, b: &Rational) -> usize {
    sign_variations(seq, a) - sign_variations(seq, b)
}

/// Closed interval with rational (in practice dyadic) endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn point(x: Rational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    pub fn to_strings(&self) -> [String; 2] {
        [format_rational(&self.lo), format_rational(&self.hi)]
    }
}

/// Default isolation width `2⁻⁶⁴`.
pub const DEFAULT_PRECISION_BITS: u32 = 64;

fn pow2(e: i64) -> Rational {
    let two = BigInt::from(2);
    if e >= 0 {
        Rational::from_integer(num_traits::pow(two, e as usize))
    } else {
        Rational::new(BigInt::one(), num_traits::pow(two, (-e) as usize))
    }
}

/// Smallest positive real root of `p`, as an interval `(lo, hi]` of width at
/// most `2^{-bits}` containing exactly one root, or a point when the root is
/// hit exactly. `None` when `p` has no positive root. Requires `p(0) ≠ 0`.
pub fn smallest_positive_root(p: &Poly, bits: u32) -> Option<Interval> {
    assert!(!p.coeff(0).is_zero(), "root isolation needs p(0) ≠ 0");
    if p.degree()? == 0 {
        return None;
    }
    let sf = p.square_free();
    let seq = sturm_sequence(&sf);
    // Cauchy bound, rounded up to a power of two
    let lead = sf.leading();
    let bound = sf.coeffs()[..sf.coeffs().len() - 1]
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(Rational::zero(), |m, x| if x > m { x } else { m })
        + Rational::one();
    let mut e = 0i64;
    while pow2(e) < bound {
        e += 1;
    }
    let zero = Rational::zero();
    let mut hi = pow2(e);
    if count_roots(&seq, &zero, &hi) == 0 {
        return None;
    }
    let mut lo = zero;
    let eps = pow2(-(bits as i64));
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / Rational::from_integer(2.into());
        if count_roots(&seq, &lo, &mid) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if sf.eval(&hi).is_zero() {
        return Some(Interval::point(hi));
    }
    Some(Interval { lo, hi })
}

/// Rounds `x` down (`up = false`) or up to the grid `2^{-bits}ℤ`.
pub fn dyadic_round(x: &Rational, bits: u32, up: bool) -> Rational {
    let scale = pow2(bits as i64);
    let y = x * &scale;
    let n = if up { y.ceil() } else { y.floor() };
    n / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{int, rat};

    #[test]
    fn arithmetic() {
        let p = Poly::from_ints(&[1, -1, -1]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval(&int(1)), int(-1));
        assert_eq!(p.derivative(), Poly::from_ints(&[-1, -2]));
        let q = Poly::from_ints(&[1, 1]);
        let (d, r) = (&p * &q).div_rem(&q);
        assert_eq!(d, p);
        assert!(r.is_zero());
        assert_eq!(p.to_string(), "1 - t - t^2");
        let sq = &q * &q;
        assert_eq!(sq.square_free(), q.monic());
    }

    #[test]
    fn series_of_golden_ratio_function() {
        // (1+t)²/(1−t−t²) = 1 + 3t + 5t² + 8t³ + ...
        let num = Poly::from_ints(&[1, 2, 1]);
        let den = Poly::from_ints(&[1, -1, -1]);
        let s = num.series_quotient(&den, 5);
        assert_eq!(s, [int(1), int(3), int(5), int(8), int(13), int(21)]);
    }

    #[test]
    fn sturm_counts() {
        // (t − 1/2)(t − 2)(t + 1)
        let p = &(&Poly::linear(rat(-1, 2), int(1)) * &Poly::linear(int(-2), int(1))) * &Poly::linear(int(1), int(1));
        let seq = sturm_sequence(&p);
        assert_eq!(count_roots(&seq, &int(0), &int(10)), 2);
        assert_eq!(count_roots(&seq, &int(-5), &int(10)), 3);
        assert_eq!(count_roots(&seq, &int(0), &rat(1, 2)), 1);
        assert_eq!(count_roots(&seq, &rat(1, 2), &int(1)), 0);
    }

    #[test]
    fn smallest_root_isolation() {
        let p = Poly::from_ints(&[1, -2]);
        assert_eq!(smallest_positive_root(&p, 64), Some(Interval::point(rat(1, 2))));
        let p = Poly::from_ints(&[1, -1, -1]);
        let iv = smallest_positive_root(&p, 64).unwrap();
        assert!(iv.width() <= pow2(-64));
        assert!(p.eval(&iv.lo).is_positive() && p.eval(&iv.hi).is_negative());
        assert!((iv.midpoint_f64() - 0.618_033_988_749_895).abs() < 1e-15);
        assert_eq!(smallest_positive_root(&Poly::from_ints(&[1, 1]), 64), None);
        assert_eq!(smallest_positive_root(&Poly::one(), 64), None);
        // double root at 1: square-free reduction keeps it isolable
        let p = Poly::from_ints(&[1, -2, 1]);
        assert_eq!(smallest_positive_root(&p, 64), Some(Interval::point(int(1))));
    }

    #[test]
    fn dyadic_rounding() {
        assert_eq!(dyadic_round(&rat(1, 3), 2, false), rat(1, 4));
        assert_eq!(dyadic_round(&rat(1, 3), 2, true), rat(1, 2));
        assert_eq!(dyadic_round(&rat(3, 4), 2, true), rat(3, 4));
    }
}
