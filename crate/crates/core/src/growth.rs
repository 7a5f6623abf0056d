//! The growth series `W(q) = Σ_w q_w` as a rational function, the growth
//! exponent `ρ(q)`, the convergence region and the simplicity verdict.
//!
//! For a right-angled system the spherical subsets are the cliques of the
//! commuting graph and `W_Γ(q) = ∏_{s∈Γ}(1 + q_s)`, which gives
//!
//! ```text
//! 1/W(q) = D(q) = Σ_{Γ clique} ∏_{s∈Γ} −q_s/(1 + q_s).
//! ```

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::coxeter::CoxeterDiagram;
use crate::error::{Error, Result};
use crate::params::{format_rational, MultiParameter, Rational, SignPattern};
use crate::poly::{count_roots, dyadic_round, smallest_positive_root, sturm_sequence, Interval, Poly, DEFAULT_PRECISION_BITS};

/// `D(q) = 1/W(q)`, exact.
pub fn growth_reciprocal(d: &CoxeterDiagram, q: &MultiParameter) -> Rational {
    let factors: Vec<Rational> = q
        .values()
        .iter()
        .map(|v| -(v / (v + Rational::one())))
        .collect();
    d.cliques()
        .iter()
        .map(|&g| {
            let mut term = Rational::one();
            let mut m = g;
            while m != 0 {
                term *= &factors[m.trailing_zeros() as usize];
                m &= m - 1;
            }
            term
        })
        .fold(Rational::zero(), |a, b| a + b)
}

/// Denominator `∏_v (1 + t·v)^{e_v}` that clears `D(t·q)`, where `v` runs over
/// the distinct values of `q` and `e_v` is the largest number of clique
/// members carrying the value `v`.
pub fn clearing_denominator(d: &CoxeterDiagram, q: &MultiParameter) -> Poly {
    exponents(d, q)
        .iter()
        .fold(Poly::one(), |acc, (v, &e)| &acc * &Poly::linear(Rational::one(), v.clone()).pow(e))
}

fn exponents(d: &CoxeterDiagram, q: &MultiParameter) -> BTreeMap<Rational, usize> {
    let mut e: BTreeMap<Rational, usize> = BTreeMap::new();
    for g in d.cliques() {
        let mut per: BTreeMap<&Rational, usize> = BTreeMap::new();
        let mut m = g;
        while m != 0 {
            *per.entry(&q.values()[m.trailing_zeros() as usize]).or_default() += 1;
            m &= m - 1;
        }
        for (v, n) in per {
            let slot = e.entry(v.clone()).or_default();
            *slot = (*slot).max(n);
        }
    }
    e
}

/// `N(t) = D(t·q)·∏_v(1 + t·v)^{e_v}`, a polynomial with `N(0) = 1`.
pub fn cleared_polynomial(d: &CoxeterDiagram, q: &MultiParameter) -> Poly {
    let e = exponents(d, q);
    let mut total = Poly::zero();
    for g in d.cliques() {
        let mut remaining = e.clone();
        let mut term = Poly::one();
        let mut m = g;
        while m != 0 {
            let v = &q.values()[m.trailing_zeros() as usize];
            term = &term * &Poly::linear(Rational::zero(), -v);
            *remaining.get_mut(v).unwrap() -= 1;
            m &= m - 1;
        }
        for (v, k) in remaining {
            term = &term * &Poly::linear(Rational::one(), v).pow(k);
        }
        total = &total + &term;
    }
    total
}

/// Position of `q` relative to the convergence region `R ∩ ℝ_{>0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    Interior,
    Boundary,
    Exterior,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Interior => "Interior",
            Region::Boundary => "Boundary",
            Region::Exterior => "Exterior",
        }
    }
}

/// Exact growth data along the ray `t ↦ t·q`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub q: MultiParameter,
    pub reciprocal_value: Rational,
    pub cleared_polynomial: Poly,
    /// Isolating interval of the smallest positive root of `N`; `None` for `+∞`.
    pub t0: Option<Interval>,
    /// `1/t₀`, rounded outward to the dyadic grid.
    pub rho: Interval,
    pub region: Region,
}

impl GrowthReport {
    /// `W(q)` when the series converges.
    pub fn growth_value(&self) -> Option<Rational> {
        (self.region == Region::Interior).then(|| self.reciprocal_value.recip())
    }

    pub fn to_json(&self, d: &CoxeterDiagram) -> serde_json::Value {
        let t0 = match &self.t0 {
            Some(iv) => serde_json::json!(iv.to_strings()),
            None => serde_json::json!("inf"),
        };
        serde_json::json!({
            "q": self.q.display(d),
            "reciprocal": format_rational(&self.reciprocal_value),
            "growth_value": self.growth_value().map(|w| format_rational(&w)),
            "cleared_polynomial": self.cleared_polynomial.to_strings(),
            "t0_interval": t0,
            "rho_interval": self.rho.to_strings(),
            "rho_approx": self.rho.midpoint_f64(),
            "region": self.region.as_str(),
        })
    }
}

pub fn pole_and_rho(d: &CoxeterDiagram, q: &MultiParameter) -> GrowthReport {
    pole_and_rho_with(d, q, DEFAULT_PRECISION_BITS)
}

pub fn pole_and_rho_with(d: &CoxeterDiagram, q: &MultiParameter, bits: u32) -> GrowthReport {
    let n = cleared_polynomial(d, q);
    debug_assert!(n.coeff(0).is_one());
    let t0 = smallest_positive_root(&n, bits);
    let rho = match &t0 {
        None => Interval::point(Rational::zero()),
        Some(iv) if iv.is_point() => {
            let r = iv.lo.recip();
            Interval {
                lo: dyadic_round(&r, bits, false),
                hi: dyadic_round(&r, bits, true),
            }
        }
        Some(iv) => {
            // a root of N satisfies t ≥ 1/(1 + max|c_i|) since N(0) = 1
            let cmax = n.coeffs().iter().skip(1).map(|c| c.abs()).max().unwrap_or_else(Rational::zero);
            let floor = (cmax + Rational::one()).recip();
            let lo = if iv.lo > floor { iv.lo.clone() } else { floor };
            Interval {
                lo: dyadic_round(&iv.hi.recip(), bits, false),
                hi: dyadic_round(&lo.recip(), bits, true),
            }
        }
    };
    GrowthReport {
        q: q.clone(),
        reciprocal_value: growth_reciprocal(d, q),
        region: region_of(&n),
        cleared_polynomial: n,
        t0,
        rho,
    }
}

/// `ρ < 1` iff `N` has no root in `(0, 1]`; `ρ = 1` iff the first positive
/// root is exactly `1`.
fn region_of(n: &Poly) -> Region {
    if n.degree().unwrap_or(0) == 0 {
        return Region::Interior;
    }
    let sf = n.square_free();
    let seq = sturm_sequence(&sf);
    let (zero, one) = (Rational::zero(), Rational::one());
    let upto_one = count_roots(&seq, &zero, &one);
    if upto_one == 0 {
        Region::Interior
    } else if upto_one == 1 && sf.eval(&one).is_zero() {
        Region::Boundary
    } else {
        Region::Exterior
    }
}

pub fn region_membership(d: &CoxeterDiagram, q: &MultiParameter) -> Region {
    region_of(&cleared_polynomial(d, q))
}

/// `W(q)` for `q` in the open region, exact.
pub fn growth_value(d: &CoxeterDiagram, q: &MultiParameter) -> Result<Rational> {
    match region_membership(d, q) {
        Region::Interior => Ok(growth_reciprocal(d, q).recip()),
        r => Err(Error::OutsideRegion(format!("{} is in the {} of R", q.display(d), r.as_str().to_lowercase()))),
    }
}

/// Weighted sphere sums `a_0(q), …, a_n(q)`, the Taylor coefficients of
/// `t ↦ W(t·q)` at `t = 1` scaling.
pub fn sphere_weights_from_series(d: &CoxeterDiagram, q: &MultiParameter, n: usize) -> Vec<Rational> {
    let num = clearing_denominator(d, q);
    let den = cleared_polynomial(d, q);
    num.series_quotient(&den, n)
}

/// Coefficients `W_α` of the multivariate growth series, indexed by
/// multidegree, for `|α| ≤ max_len`; computed from `D_α = (−1)^{|α|}` when the
/// support of `α` is a clique and `0` otherwise.
#[derive(Clone, Debug)]
pub struct MultivariateSeries {
    rank: usize,
    max_len: usize,
    coeffs: Vec<i128>,
}

impl MultivariateSeries {
    pub fn new(d: &CoxeterDiagram, max_len: usize) -> Result<Self> {
        let rank = d.rank();
        let base = max_len + 1;
        let size = (base as u128)
            .checked_pow(rank as u32)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| Error::InvalidArgument(format!("series table too large for rank {rank}")))?
            as usize;
        let decode = |mut k: usize| {
            let mut deg = vec![0usize; rank];
            for e in deg.iter_mut() {
                *e = k % base;
                k /= base;
            }
            deg
        };
        let is_clique = |mask: u64| {
            let mut m = mask;
            while m != 0 {
                let s = m.trailing_zeros();
                m &= m - 1;
                if mask & !(1 << s) & !d.commute_mask(s as u8) != 0 {
                    return false;
                }
            }
            true
        };
        // keys in increasing order of total degree so that W_{α−β} is ready
        let mut keys: Vec<(usize, Vec<usize>)> = (0..size)
            .map(|k| (k, decode(k)))
            .filter(|(_, deg)| deg.iter().sum::<usize>() <= max_len)
            .collect();
        keys.sort_by_key(|(_, deg)| deg.iter().sum::<usize>());
        let mut coeffs = vec![0i128; size];
        coeffs[0] = 1;
        let mut beta = vec![0usize; rank];
        for (k, alpha) in keys.iter().skip(1) {
            // W_α = −Σ_{0 < β ≤ α, supp β clique} (−1)^{|β|} W_{α−β}
            let mut acc: i128 = 0;
            beta.iter_mut().for_each(|b| *b = 0);
            loop {
                let mut i = 0;
                while i < rank {
                    if beta[i] < alpha[i] {
                        beta[i] += 1;
                        break;
                    }
                    beta[i] = 0;
                    i += 1;
                }
                if i == rank {
                    break;
                }
                let supp = beta.iter().enumerate().filter(|(_, &b)| b > 0).fold(0u64, |m, (i, _)| m | 1 << i);
                if !is_clique(supp) {
                    continue;
                }
                let size: usize = beta.iter().sum();
                let rest = k - beta.iter().rev().fold(0usize, |acc, &b| acc * base + b);
                let sign = if size.is_multiple_of(2) { 1 } else { -1 };
                acc += sign * coeffs[rest];
            }
            coeffs[*k] = -acc;
        }
        Ok(MultivariateSeries { rank, max_len, coeffs })
    }

    pub fn get(&self, degree: &[usize]) -> i128 {
        assert_eq!(degree.len(), self.rank);
        if degree.iter().sum::<usize>() > self.max_len {
            return 0;
        }
        let base = self.max_len + 1;
        self.coeffs[degree.iter().rev().fold(0usize, |k, &e| k * base + e)]
    }

    /// Total coefficient per length: the sphere sizes.
    pub fn sphere_sizes(&self) -> Vec<i128> {
        let base = self.max_len + 1;
        let mut out = vec![0i128; self.max_len + 1];
        for (mut k, &c) in self.coeffs.iter().enumerate() {
            let mut total = 0;
            for _ in 0..self.rank {
                total += k % base;
                k /= base;
            }
            if total <= self.max_len {
                out[total] += c;
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Simple,
    NotSimple,
    NotApplicable,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Simple => "Simple",
            Status::NotSimple => "NotSimple",
            Status::NotApplicable => "NotApplicable",
        }
    }
}

/// Growth data of one flipped parameter `(q_s^{ε_s})_s`.
#[derive(Clone, Debug)]
pub struct FlipReport {
    pub eps: SignPattern,
    pub report: GrowthReport,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub reason: Option<String>,
    pub witnesses: Vec<SignPattern>,
    pub boundary_flags: Vec<SignPattern>,
    /// Every witness has `ρ = 1` exactly: `q` lies in the closure of `R′`
    /// but not in `R′` itself, so the verdict rests on a boundary decision.
    pub exact_boundary: bool,
    pub per_flip: Vec<FlipReport>,
}

impl Verdict {
    pub fn to_json(&self, d: &CoxeterDiagram) -> serde_json::Value {
        let per_flip: serde_json::Map<String, serde_json::Value> = self
            .per_flip
            .iter()
            .map(|f| {
                let t0 = match &f.report.t0 {
                    Some(iv) => serde_json::json!(iv.to_strings()),
                    None => serde_json::json!("inf"),
                };
                let v = serde_json::json!({
                    "q": f.report.q.display(d),
                    "region": f.report.region.as_str(),
                    "rho_interval": f.report.rho.to_strings(),
                    "t0_interval": t0,
                });
                (f.eps.to_string(), v)
            })
            .collect();
        serde_json::json!({
            "status": self.status.as_str(),
            "reason": self.reason,
            "witnesses": self.witnesses.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "boundary_flags": self.boundary_flags.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "exact_boundary": self.exact_boundary,
            "per_flip": per_flip,
        })
    }
}

/// Verdict for irreducible systems of infinite rank: simple for every `q`.
/// Not computed; stated for completeness.
pub const INFINITE_RANK_STATUS: Status = Status::Simple;

/// Largest rank for which the `2^rank` sign sweep is attempted.
pub const MAX_SWEEP_RANK: usize = 20;

/// Simple iff no flip `(q_s^{ε_s})_s` has `ρ ≤ 1`.
pub fn classify_simplicity(d: &CoxeterDiagram, q: &MultiParameter) -> Verdict {
    let not_applicable = |reason: &str| Verdict {
        status: Status::NotApplicable,
        reason: Some(reason.to_string()),
        witnesses: vec![],
        boundary_flags: vec![],
        exact_boundary: false,
        per_flip: vec![],
    };
    if !d.is_irreducible() {
        return not_applicable("diagram is reducible");
    }
    if d.rank() > MAX_SWEEP_RANK {
        return not_applicable("rank too large for the sign-pattern sweep");
    }
    let per_flip: Vec<FlipReport> = SignPattern::all(d.rank())
        .into_iter()
        .map(|eps| FlipReport {
            eps,
            report: pole_and_rho(d, &q.flipped(&eps)),
        })
        .collect();
    let witnesses: Vec<SignPattern> = per_flip
        .iter()
        .filter(|f| f.report.region != Region::Exterior)
        .map(|f| f.eps)
        .collect();
    let boundary_flags: Vec<SignPattern> = per_flip
        .iter()
        .filter(|f| f.report.region == Region::Boundary)
        .map(|f| f.eps)
        .collect();
    Verdict {
        status: if witnesses.is_empty() { Status::Simple } else { Status::NotSimple },
        reason: None,
        exact_boundary: !witnesses.is_empty() && witnesses.len() == boundary_flags.len(),
        witnesses,
        boundary_flags,
        per_flip,
    }
}

/// Sign patterns `ε` with `ρ(|q_ε|) ≤ 1`: the characters `χ_{q_ε}` that
/// extend to the reduced C*-algebra.
pub fn character_list(d: &CoxeterDiagram, q: &MultiParameter) -> Result<Vec<SignPattern>> {
    if !d.is_irreducible() {
        return Err(Error::Reducible);
    }
    Ok(classify_simplicity(d, q).witnesses)
}

/// `ρ(q) ≈ a_l(q)^{1/l}`, a floating upper estimate used to sanity-check the
/// pole method.
pub fn fekete_estimate(a_l: &Rational, l: usize) -> f64 {
    crate::params::to_f64(a_l).powf(1.0 / l as f64)
}

/// Whether the interval lies entirely at or above zero.
pub fn interval_nonnegative(iv: &Interval) -> bool {
    !iv.lo.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::enumeration::{sphere_sizes, MultidegreeCounts};
    use crate::params::{int, parse_rational, rat};

    fn uniform(d: &CoxeterDiagram, v: &str) -> MultiParameter {
        MultiParameter::uniform(d, parse_rational(v).unwrap()).unwrap()
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(growth_reciprocal(&catalog::d_infinity(), &uniform(&catalog::d_infinity(), "1")), int(0));
        assert_eq!(growth_reciprocal(&catalog::diagram_a(), &uniform(&catalog::diagram_a(), "1")), rat(-1, 4));
        let d1 = catalog::free_product(1);
        assert_eq!(growth_reciprocal(&d1, &uniform(&d1, "3")).recip(), int(4));
    }

    #[test]
    fn cleared_polynomials() {
        let f3 = catalog::free_product(3);
        assert_eq!(cleared_polynomial(&f3, &uniform(&f3, "1")), Poly::from_ints(&[1, -2]));
        let a = catalog::diagram_a();
        assert_eq!(cleared_polynomial(&a, &uniform(&a, "1")), Poly::from_ints(&[1, -1, -1]));
        let p = catalog::pentagon();
        assert_eq!(cleared_polynomial(&p, &uniform(&p, "1")), Poly::from_ints(&[1, -3, 1]));
        let dinf = catalog::d_infinity();
        assert_eq!(cleared_polynomial(&dinf, &uniform(&dinf, "1")), Poly::from_ints(&[1, -1]));
    }

    #[test]
    fn regions() {
        let f3 = catalog::free_product(3);
        assert_eq!(region_membership(&f3, &uniform(&f3, "1/4")), Region::Interior);
        let r = pole_and_rho(&f3, &uniform(&f3, "1/4"));
        assert_eq!(r.t0, Some(Interval::point(int(2))));
        assert!(r.rho.contains(&rat(1, 2)));
        let dinf = catalog::d_infinity();
        assert_eq!(region_membership(&dinf, &uniform(&dinf, "1")), Region::Boundary);
        let a = catalog::diagram_a();
        assert_eq!(region_membership(&a, &uniform(&a, "1")), Region::Exterior);
        assert_eq!(growth_value(&f3, &uniform(&f3, "1/4")).unwrap(), rat(5, 2));
        assert!(growth_value(&a, &uniform(&a, "1")).is_err());
    }

    #[test]
    fn series_matches_streaming_counts() {
        for d in catalog::connected_corpus(4) {
            let one = MultiParameter::uniform(&d, int(1)).unwrap();
            let series = sphere_weights_from_series(&d, &one, 9);
            let counts: Vec<Rational> = sphere_sizes(&d, 9).into_iter().map(|c| Rational::from_integer(c.into())).collect();
            assert_eq!(series, counts);
            let multi = MultivariateSeries::new(&d, 7).unwrap();
            let enumerated = MultidegreeCounts::enumerate(&d, 7).unwrap();
            for (deg, c) in enumerated.entries() {
                assert_eq!(multi.get(&deg), c as i128);
            }
            let total: Vec<i128> = sphere_sizes(&d, 7).into_iter().map(|c| c as i128).collect();
            assert_eq!(multi.sphere_sizes(), total);
        }
    }

    #[test]
    fn classification_examples() {
        let dinf = catalog::d_infinity();
        for v in ["1/4", "1", "4"] {
            assert_eq!(classify_simplicity(&dinf, &uniform(&dinf, v)).status, Status::NotSimple);
        }
        let f3 = catalog::free_product(3);
        for v in ["1", "0.6", "1.9"] {
            assert_eq!(classify_simplicity(&f3, &uniform(&f3, v)).status, Status::Simple, "q = {v}");
        }
        for v in ["0.4", "1/2", "2", "3"] {
            assert_eq!(classify_simplicity(&f3, &uniform(&f3, v)).status, Status::NotSimple, "q = {v}");
        }
        let half = classify_simplicity(&f3, &uniform(&f3, "1/2"));
        assert_eq!(half.boundary_flags, [SignPattern::all_positive(3)]);
        assert!(half.exact_boundary);
        assert!(!classify_simplicity(&f3, &uniform(&f3, "3")).exact_boundary);
        // the mixed flip (1/4, 4) of D∞ always has ρ = 1, but (1/4, 1/4) is interior
        let quarter = classify_simplicity(&dinf, &uniform(&dinf, "1/4"));
        assert_eq!(quarter.boundary_flags.len(), 2);
        assert!(!quarter.exact_boundary);
        assert!(classify_simplicity(&dinf, &uniform(&dinf, "1")).exact_boundary);
        let p = catalog::pentagon();
        assert_eq!(classify_simplicity(&p, &uniform(&p, "1")).status, Status::Simple);
        let red = CoxeterDiagram::new(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(classify_simplicity(&red, &uniform(&red, "1")).status, Status::NotApplicable);
        let d1 = catalog::free_product(1);
        assert_eq!(classify_simplicity(&d1, &uniform(&d1, "1")).status, Status::NotSimple);
    }

    #[test]
    fn characters() {
        let f3 = catalog::free_product(3);
        assert_eq!(character_list(&f3, &uniform(&f3, "1/4")).unwrap(), [SignPattern::all_positive(3)]);
        assert!(character_list(&f3, &uniform(&f3, "1")).unwrap().is_empty());
        let dinf = catalog::d_infinity();
        let chars = character_list(&dinf, &uniform(&dinf, "1")).unwrap();
        assert!(chars.contains(&SignPattern::all_positive(2)));
        assert!(chars.contains(&SignPattern::all_negative(2)));
    }
}
