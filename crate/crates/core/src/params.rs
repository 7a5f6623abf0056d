//! Multi-parameters `q = (q_s)`, sign patterns `ε ∈ {−1, 1}^S` and exact
//! rational helpers.
//!
//! In a right-angled system no two distinct generators are conjugate, so a
//! multi-parameter is an arbitrary positive value per generator.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coxeter::{CoxeterDiagram, Gen};
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q`, an integer, or a decimal literal (`0.6`, `-1.25`, `2e-3`)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::MalformedRational(text.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = digits.split_once('.').unwrap_or((digits, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{ip}{fp}0").parse::<BigInt>().map_err(|_| bad())? / 10;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut r = if scale >= 0 {
        Rational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// `p/q` in lowest terms, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact square root of a non-negative rational, when it is a perfect square.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A positive rational value per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiParameter {
    values: Vec<Rational>,
}

impl MultiParameter {
    pub fn new(d: &CoxeterDiagram, values: Vec<Rational>) -> Result<Self> {
        if values.len() != d.rank() {
            return Err(Error::InvalidArgument(format!(
                "expected {} parameter values, got {}",
                d.rank(),
                values.len()
            )));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_positive() {
                return Err(Error::NonPositiveParameter(d.names()[i].clone()));
            }
        }
        Ok(MultiParameter { values })
    }

    pub fn uniform(d: &CoxeterDiagram, value: Rational) -> Result<Self> {
        Self::new(d, vec![value; d.rank()])
    }

    /// Parses `a=1/4,b=0.5,...`; `all=v` sets every generator and may be
    /// followed by per-generator overrides.
    pub fn parse(d: &CoxeterDiagram, text: &str) -> Result<Self> {
        let mut values: Vec<Option<Rational>> = vec![None; d.rank()];
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidArgument(format!("expected name=value, got `{part}`")))?;
            let v = parse_rational(value)?;
            let name = name.trim();
            if name == "all" && d.index_of("all").is_none() {
                values.iter_mut().for_each(|x| *x = Some(v.clone()));
            } else {
                let g = d
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
                values[g as usize] = Some(v);
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::MissingParameter(d.names()[i].clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, values)
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, s: Gen) -> &Rational {
        &self.values[s as usize]
    }

    /// `q_w` over the letters of a word.
    pub fn weight(&self, letters: &[Gen]) -> Rational {
        letters
            .iter()
            .fold(Rational::one(), |acc, &s| acc * &self.values[s as usize])
    }

    /// `(q_s^{ε_s})_s`.
    pub fn flipped(&self, eps: &SignPattern) -> MultiParameter {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| if eps.is_negative(i as Gen) { v.recip() } else { v.clone() })
            .collect();
        MultiParameter { values }
    }

    /// `(t·q_s)_s`.
    pub fn scaled(&self, t: &Rational) -> MultiParameter {
        MultiParameter {
            values: self.values.iter().map(|v| v * t).collect(),
        }
    }

    /// Exact square roots `r_s = √q_s`; fails unless every `q_s` is a
    /// perfect rational square.
    pub fn exact_roots(&self, d: &CoxeterDiagram) -> Result<Vec<Rational>> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                rational_sqrt(v).ok_or_else(|| Error::NotASquare {
                    generator: d.names()[i].clone(),
                    value: format_rational(v),
                })
            })
            .collect()
    }

    /// `p_s(q) = q_s^{-1/2}(q_s − 1)`, exact when `q_s` is a square.
    pub fn p_exact(&self, d: &CoxeterDiagram, s: Gen) -> Result<Rational> {
        let r = rational_sqrt(self.value(s)).ok_or_else(|| Error::NotASquare {
            generator: d.name(s).to_string(),
            value: format_rational(self.value(s)),
        })?;
        Ok(&r - r.recip())
    }

    pub fn display(&self, d: &CoxeterDiagram) -> String {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{}={}", d.names()[i], format_rational(v)))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// A sign per generator, stored as the mask of generators with `ε_s = −1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignPattern {
    negative: u64,
    rank: u8,
}

impl SignPattern {
    pub fn all_positive(rank: usize) -> Self {
        SignPattern { negative: 0, rank: rank as u8 }
    }

    pub fn all_negative(rank: usize) -> Self {
        let negative = if rank == 64 { u64::MAX } else { (1u64 << rank) - 1 };
        SignPattern { negative, rank: rank as u8 }
    }

    pub fn from_mask(rank: usize, negative: u64) -> Self {
        let full = Self::all_negative(rank).negative;
        SignPattern { negative: negative & full, rank: rank as u8 }
    }

    pub fn from_signs(signs: &[i8]) -> Self {
        let negative = signs
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0u64, |m, (i, _)| m | 1 << i);
        SignPattern { negative, rank: signs.len() as u8 }
    }

    /// Parses `+-+`, `+,-,+` or `1,-1,1`.
    pub fn parse(rank: usize, text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let signs: Vec<i8> = if t.contains(',') {
            t.split(',')
                .map(|p| match p {
                    "+" | "1" | "+1" => Ok(1),
                    "-" | "-1" => Ok(-1),
                    _ => Err(Error::InvalidArgument(format!("bad sign `{p}`"))),
                })
                .collect::<Result<_>>()?
        } else {
            t.chars()
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' => Ok(-1),
                    _ => Err(Error::InvalidArgument(format!("bad sign `{c}`"))),
                })
                .collect::<Result<_>>()?
        };
        if signs.len() == 1 && rank > 1 {
            return Ok(if signs[0] < 0 { Self::all_negative(rank) } else { Self::all_positive(rank) });
        }
        if signs.len() != rank {
            return Err(Error::InvalidArgument(format!(
                "sign pattern has {} entries, diagram has rank {rank}",
                signs.len()
            )));
        }
        Ok(Self::from_signs(&signs))
    }

    /// All `2^rank` patterns, in display order.
    pub fn all(rank: usize) -> Vec<SignPattern> {
        assert!(rank < 31, "sign sweep limited to rank < 31");
        let mut v: Vec<SignPattern> = (0u64..1 << rank).map(|m| Self::from_mask(rank, m)).collect();
        v.sort();
        v
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    pub fn negative_mask(&self) -> u64 {
        self.negative
    }

    pub fn is_negative(&self, s: Gen) -> bool {
        self.negative >> s & 1 == 1
    }

    pub fn sign(&self, s: Gen) -> i32 {
        if self.is_negative(s) {
            -1
        } else {
            1
        }
    }

    /// `∏ ε_{s_i}` over the letters of a word.
    pub fn sign_of(&self, letters: &[Gen]) -> i32 {
        letters.iter().fold(1, |acc, &s| acc * self.sign(s))
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rank {
            f.write_str(if self.negative >> i & 1 == 1 { "-" } else { "+" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignPattern({self})")
    }
}

/// Lexicographic on the sign string with `+` before `-`.
impl Ord for SignPattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.negative.reverse_bits().cmp(&other.negative.reverse_bits()))
    }
}

impl PartialOrd for SignPattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("1/4").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("0.6").unwrap(), rat(3, 5));
        assert_eq!(parse_rational("-1.25").unwrap(), rat(-5, 4));
        assert_eq!(parse_rational("2e-3").unwrap(), rat(1, 500));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&rat(6, 8)), "3/4");
        assert_eq!(format_rational(&int(-2)), "-2");
    }

    #[test]
    fn square_roots() {
        assert_eq!(rational_sqrt(&rat(1, 4)), Some(rat(1, 2)));
        assert_eq!(rational_sqrt(&rat(9, 16)), Some(rat(3, 4)));
        assert_eq!(rational_sqrt(&rat(1, 2)), None);
    }

    #[test]
    fn parameter_parsing() {
        let d = catalog::diagram_a();
        let q = MultiParameter::parse(&d, "a=1/4,b=1/4,c=1/4").unwrap();
        assert_eq!(q, MultiParameter::uniform(&d, rat(1, 4)).unwrap());
        let q = MultiParameter::parse(&d, "all=1,c=4").unwrap();
        assert_eq!(q.values(), [int(1), int(1), int(4)]);
        assert_eq!(MultiParameter::parse(&d, "a=1,b=1"), Err(Error::MissingParameter("c".into())));
        assert_eq!(MultiParameter::parse(&d, "all=1,z=1"), Err(Error::UnknownGenerator("z".into())));
        assert!(matches!(
            MultiParameter::parse(&d, "all=0"),
            Err(Error::NonPositiveParameter(_))
        ));
        assert_eq!(q.p_exact(&d, 2).unwrap(), rat(3, 2));
        let half = MultiParameter::uniform(&d, rat(1, 2)).unwrap();
        assert!(matches!(half.exact_roots(&d), Err(Error::NotASquare { .. })));
    }

    #[test]
    fn sign_patterns() {
        let all = SignPattern::all(3);
        let shown: Vec<String> = all.iter().map(|e| e.to_string()).collect();
        assert_eq!(shown, ["+++", "++-", "+-+", "+--", "-++", "-+-", "--+", "---"]);
        assert_eq!(SignPattern::parse(3, "-").unwrap(), SignPattern::all_negative(3));
        assert_eq!(SignPattern::parse(3, "+,-,+").unwrap().to_string(), "+-+");
        assert_eq!(SignPattern::parse(3, "1,-1,1").unwrap().to_string(), "+-+");
        assert!(SignPattern::parse(3, "+-").is_err());
        let e = SignPattern::parse(3, "+-+").unwrap();
        assert_eq!(e.sign_of(&[0, 1, 1, 2]), 1);
        assert_eq!(e.sign_of(&[1]), -1);
    }
}
