//! Verification suites over balls and the acceptance report.
//!
//! Each suite returns a JSON value with a `passed` flag; the acceptance
//! criteria run the suites at fixed configurations and add the exact value
//! checks. Everything is seeded, so reports are reproducible byte for byte.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::catalog;
use crate::central::{character_witness_ratio_sq, generator_residual_sq, projection_inner, RadialAlgebra};
use crate::coxeter::{CoxeterDiagram, Elem};
use crate::enumeration::{ball, fitted_kappa_constant, kappa_profile, sphere_sizes, Ball, MultidegreeCounts};
use crate::error::{Error, Result};
use crate::growth::{classify_simplicity, sphere_weights_from_series, Status};
use crate::hecke::HeckeAlgebra;
use crate::operator::{
    conjugate_action, haagerup_ratio, positivity_window, positivity_window_exact, proj_p, q_operator, rep_hecke,
    verify_cliq_identity, verify_power_split, TruncatedOperator,
};
use crate::params::{format_rational, int, rat, to_f64, MultiParameter, Rational, SignPattern};
use crate::poly::Poly;
use crate::scalar::Scalar;

/// Arithmetic used by the operator suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::InvalidArgument(format!("unknown mode `{s}`"))),
        }
    }
}

/// Inputs shared by the `verify` suites.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub diagram: CoxeterDiagram,
    pub q: MultiParameter,
    pub radius: usize,
    pub seed: u64,
    pub mode: Mode,
    pub word: Option<Elem>,
    pub trials: usize,
}

pub const SUITES: [&str; 6] = ["action", "cliq", "corollary", "positivity", "haagerup", "qop"];

pub fn verify_suite(name: &str, cfg: &SuiteConfig) -> Result<Value> {
    match name {
        "action" => with_mode(cfg, |alg, b| action_suite(alg, b, cfg.radius.saturating_sub(2))),
        "cliq" => with_mode(cfg, |alg, b| cliq_suite(alg, b, cfg.radius.saturating_sub(2))),
        "corollary" => {
            let d = &cfg.diagram;
            let g = match &cfg.word {
                Some(w) => w.clone(),
                None => d
                    .find_covering_closed_path()
                    .ok_or_else(|| Error::InvalidArgument("diagram has no covering closed path".into()))?,
            };
            let ls: Vec<usize> = (1..).take_while(|l| l * g.len() + 2 <= cfg.radius).collect();
            if ls.is_empty() {
                return Err(Error::BallTooSmall { have: cfg.radius, need: g.len() + 2 });
            }
            with_mode(cfg, |alg, b| split_suite(alg, b, &g, &ls))
        }
        "positivity" => {
            let values: Vec<Rational> = {
                let mut v = cfg.q.values().to_vec();
                v.sort();
                v.dedup();
                v
            };
            positivity_suite(&cfg.diagram, &values, cfg.trials, (cfg.radius / 2).clamp(1, 4), cfg.seed, cfg.mode)
        }
        "haagerup" => {
            let alg = HeckeAlgebra::<f64>::new(&cfg.diagram, &cfg.q)?;
            let b = Arc::new(ball(&cfg.diagram, cfg.radius)?);
            let ls: Vec<usize> = (1..=cfg.radius.saturating_sub(2).min(6)).collect();
            if ls.is_empty() {
                return Err(Error::BallTooSmall { have: cfg.radius, need: 3 });
            }
            let (v, _) = haagerup_suite(&alg, &b, &ls, cfg.trials, cfg.seed)?;
            Ok(v)
        }
        "qop" => {
            let q = cfg.q.value(0).clone();
            if cfg.q.values().iter().any(|v| v != &q) {
                return Err(Error::InvalidArgument("qop takes a single parameter (use all=v)".into()));
            }
            let u = cfg.word.clone().unwrap_or_else(Elem::identity);
            let b = Arc::new(ball(&cfg.diagram, cfg.radius)?);
            qop_suite(&b, &u, &q, &(0..=cfg.radius).collect::<Vec<_>>())
        }
        _ => Err(Error::InvalidArgument(format!("unknown suite `{name}`; expected one of {}", SUITES.join(", ")))),
    }
}

fn with_mode(cfg: &SuiteConfig, f: impl Fn(&dyn AnyAlgebra, &Arc<Ball>) -> Value) -> Result<Value> {
    let b = Arc::new(ball(&cfg.diagram, cfg.radius)?);
    Ok(match cfg.mode {
        Mode::Exact => f(&HeckeAlgebra::<Rational>::new(&cfg.diagram, &cfg.q)?, &b),
        Mode::Float => f(&HeckeAlgebra::<f64>::new(&cfg.diagram, &cfg.q)?, &b),
    })
}

/// Object-safe view of `HeckeAlgebra<K>` for the suites that run in both
/// arithmetic modes.
pub trait AnyAlgebra {
    fn action(&self, ball: &Arc<Ball>, max_len: usize) -> Tally;
    fn cliq(&self, ball: &Arc<Ball>, max_len: usize) -> Tally;
    fn power_split(&self, ball: &Arc<Ball>, g: &Elem, ls: &[usize]) -> (Tally, Vec<Value>);
}

impl<K: Scalar> AnyAlgebra for HeckeAlgebra<K> {
    fn action(&self, ball: &Arc<Ball>, max_len: usize) -> Tally {
        action_cases(self, ball, max_len)
    }

    fn cliq(&self, ball: &Arc<Ball>, max_len: usize) -> Tally {
        cliq_cases(self, ball, max_len)
    }

    fn power_split(&self, ball: &Arc<Ball>, g: &Elem, ls: &[usize]) -> (Tally, Vec<Value>) {
        split_cases(self, ball, g, ls)
    }
}

/// Count of checked cases, the failing ones (first few), and the largest
/// residual seen.
#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub cases: usize,
    pub failures: Vec<String>,
    pub failure_count: usize,
    pub max_residual: f64,
}

impl Tally {
    fn record(&mut self, ok: bool, residual: f64, label: impl FnOnce() -> String) {
        self.cases += 1;
        self.max_residual = self.max_residual.max(residual);
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < 10 {
                self.failures.push(label());
            }
        }
    }

    fn check<K: Scalar>(&mut self, a: &TruncatedOperator<K>, b: &TruncatedOperator<K>, label: impl FnOnce() -> String) {
        let r = a.residual_on_domain(b).to_f64();
        let ok = a.agrees_on_domain(b) && a.joint_radius(b) >= 0;
        self.record(ok, r, label);
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.cases > 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cases": self.cases,
            "failures": self.failure_count,
            "failing_cases": self.failures,
            "max_residual": self.max_residual,
            "passed": self.passed(),
        })
    }
}

/// The three cases of `s.P_w` and the identities
/// `T_s(1 − P_s)T_s = P_s`, `T_s P_w T_s = P_{sw}` (`w ∉ C_W(s)`, `s ≰ w`),
/// for every generator `s` and every `|w| ≤ max_len`.
pub fn action_cases<K: Scalar>(alg: &HeckeAlgebra<K>, b: &Arc<Ball>, max_len: usize) -> Tally {
    let d = b.diagram();
    let mut tally = Tally::default();
    let id = TruncatedOperator::<K>::identity(b);
    for s in d.generators() {
        let se = d.generator(s);
        let ts = rep_hecke(alg, &alg.generator(s), b);
        let ps = proj_p::<K>(&se, b);
        let lhs = ts.mul(&id.sub(&ps)).mul(&ts);
        tally.check(&lhs, &ps, || format!("T_{0}(1 - P_{0})T_{0}", d.name(s)));
        for w in b.elements().iter().take_while(|w| w.len() <= max_len) {
            let pw = proj_p::<K>(w, b);
            let moved = conjugate_action(&se, &pw);
            let sw = d.left_mul(s, w);
            let psw = proj_p::<K>(&sw, b);
            let expected = if !d.centralizes(s, w) {
                psw.clone()
            } else if d.is_left_descent(s, w) {
                psw.sub(&pw)
            } else {
                pw.clone()
            };
            tally.check(&moved, &expected, || format!("{}.P_{}", d.name(s), d.format(w)));
            if !d.centralizes(s, w) && !d.is_left_descent(s, w) {
                let lhs = ts.mul(&pw).mul(&ts);
                tally.check(&lhs, &psw, || format!("T_{0} P_{1} T_{0}", d.name(s), d.format(w)));
            }
        }
    }
    tally
}

pub fn action_suite(alg: &dyn AnyAlgebra, b: &Arc<Ball>, max_len: usize) -> Value {
    let t = alg.action(b, max_len);
    let mut v = t.to_json();
    v["max_word_length"] = json!(max_len);
    v["radius"] = json!(b.radius());
    v
}

/// The clique decomposition of `T_w` as matrices, for every `|w| ≤ max_len`.
pub fn cliq_cases<K: Scalar>(alg: &HeckeAlgebra<K>, b: &Arc<Ball>, max_len: usize) -> Tally {
    let d = b.diagram();
    let mut tally = Tally::default();
    for w in b.elements().iter().take_while(|w| w.len() <= max_len) {
        match verify_cliq_identity(alg, w, b) {
            Ok(r) => {
                let ok = if K::EXACT { r.is_zero() } else { r.to_f64() <= 1e-9 };
                tally.record(ok, r.to_f64(), || d.format(w));
            }
            Err(e) => tally.record(false, f64::NAN, || format!("{}: {e}", d.format(w))),
        }
    }
    tally
}

pub fn cliq_suite(alg: &dyn AnyAlgebra, b: &Arc<Ball>, max_len: usize) -> Value {
    let mut v = alg.cliq(b, max_len).to_json();
    v["max_word_length"] = json!(max_len);
    v["radius"] = json!(b.radius());
    v
}

pub fn split_cases<K: Scalar>(alg: &HeckeAlgebra<K>, b: &Arc<Ball>, g: &Elem, ls: &[usize]) -> (Tally, Vec<Value>) {
    let d = b.diagram();
    let mut tally = Tally::default();
    let mut witnesses = vec![];
    for &l in ls {
        match verify_power_split(alg, g, l, b) {
            Ok(split) => {
                let ok = split.exactness_radius >= 0
                    && if K::EXACT { split.residual.is_zero() } else { split.residual.to_f64() <= 1e-9 };
                tally.record(ok, split.residual.to_f64(), || format!("l = {l}"));
                witnesses.push(json!({
                    "l": l,
                    "exactness_radius": split.exactness_radius,
                    "x_terms": split.terms.iter().map(|t| json!({
                        "coefficient": t.coefficient.render(),
                        "projection": d.format(&t.projection),
                        "translation": d.format(&t.translation),
                    })).collect::<Vec<_>>(),
                }));
            }
            Err(e) => tally.record(false, f64::NAN, || format!("l = {l}: {e}")),
        }
    }
    (tally, witnesses)
}

pub fn split_suite(alg: &dyn AnyAlgebra, b: &Arc<Ball>, g: &Elem, ls: &[usize]) -> Value {
    let (t, witnesses) = alg.power_split(b, g, ls);
    let mut v = t.to_json();
    v["g"] = json!(b.diagram().format(g));
    v["splits"] = json!(witnesses);
    v
}

/// `P_v P_w = P_{v∨w}` (zero when the join does not exist) for every pair
/// in the ball.
pub fn join_cases(b: &Ball) -> Tally {
    let d = b.diagram();
    let words = b.len().div_ceil(64);
    let upper: Vec<Vec<u64>> = (0..b.len())
        .map(|i| {
            let mut bits = vec![0u64; words];
            for j in b.upper_set(i) {
                bits[j / 64] |= 1 << (j % 64);
            }
            bits
        })
        .collect();
    let empty = vec![0u64; words];
    let mut tally = Tally::default();
    for i in 0..b.len() {
        for j in 0..b.len() {
            let join = d.join(b.element(i), b.element(j));
            let expected = join.as_ref().and_then(|u| b.index_of(u)).map_or(&empty, |k| &upper[k]);
            let ok = upper[i].iter().zip(&upper[j]).zip(expected).all(|((x, y), z)| x & y == *z);
            tally.record(ok, if ok { 0.0 } else { 1.0 }, || {
                format!("P_{} P_{}", d.format(b.element(i)), d.format(b.element(j)))
            });
        }
    }
    tally
}

/// Seeded `(w, q)` pairs with `|w| ≤ max_len` and `q_s` drawn from
/// `values`; checks the spectrum of the compression of `(T_w)*T_w` on the
/// `2|w|`-ball against the window, in floating point and, in exact mode,
/// by exact semidefiniteness.
pub fn positivity_suite(d: &CoxeterDiagram, values: &[Rational], samples: usize, max_len: usize, seed: u64, mode: Mode) -> Result<Value> {
    if values.iter().any(|v| crate::params::rational_sqrt(v).is_none()) {
        return Err(Error::InvalidArgument("positivity suite needs square parameter values".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = ball(d, max_len)?;
    let mut balls: HashMap<usize, Arc<Ball>> = HashMap::new();
    let mut tally = Tally::default();
    let mut endpoint_failures = 0;
    let mut cases = vec![];
    for _ in 0..samples {
        let len = rng.gen_range(1..=max_len);
        let sphere = words.sphere(len);
        let w = sphere[rng.gen_range(0..sphere.len())].clone();
        let q: Vec<Rational> = d.generators().map(|_| values[rng.gen_range(0..values.len())].clone()).collect();
        let q = MultiParameter::new(d, q)?;
        let alg = HeckeAlgebra::<Rational>::new(d, &q)?;
        let b = balls.entry(2 * len).or_insert_with(|| Arc::new(ball(d, 2 * len).expect("small ball"))).clone();
        let win = positivity_window(&alg, &w, &b)?;
        let float_ok = win.within(1e-9);
        let exact_ok = match mode {
            Mode::Exact => Some(positivity_window_exact(&alg, &w, &b)?),
            Mode::Float => None,
        };
        let attained = len != 1
            || ((win.lo - to_f64(&win.bound_lo)).abs() <= 1e-9 && (win.hi - to_f64(&win.bound_hi)).abs() <= 1e-9);
        if !attained {
            endpoint_failures += 1;
        }
        let excess = (to_f64(&win.bound_lo) - win.lo).max(win.hi - to_f64(&win.bound_hi)).max(0.0);
        tally.record(float_ok && exact_ok.unwrap_or(true) && attained, excess, || {
            format!("w = {}, q = {}", d.format(&w), q.display(d))
        });
        cases.push(json!({
            "w": d.format(&w),
            "q": q.display(d),
            "radius": 2 * len,
            "spectrum": [win.lo, win.hi],
            "window": [format_rational(&win.bound_lo), format_rational(&win.bound_hi)],
            "exact_check": exact_ok,
        }));
    }
    let mut v = tally.to_json();
    v["endpoint_failures"] = json!(endpoint_failures);
    v["samples"] = json!(cases);
    Ok(v)
}

/// Max ratios `‖x‖/(l‖x‖₂)` per sphere and their maximum, the fitted `C`.
pub fn haagerup_suite(alg: &HeckeAlgebra<f64>, b: &Arc<Ball>, ls: &[usize], trials: usize, seed: u64) -> Result<(Value, f64)> {
    let mut per_l = vec![];
    let mut ratios = vec![];
    for &l in ls {
        let s = haagerup_ratio(alg, b, l, trials, seed)?;
        per_l.push(json!({"l": l, "max_ratio": s.max_ratio}));
        ratios.push(s.max_ratio);
    }
    let c = ratios.iter().cloned().fold(0.0, f64::max);
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((
        json!({
            "radius": b.radius(),
            "trials": trials,
            "per_sphere": per_l,
            "fitted_c": c,
            "spread": c / lo,
            "passed": ratios.iter().all(|r| r.is_finite()),
        }),
        c,
    ))
}

/// Partial sums of the Q-operator at the given cutoffs: entrywise
/// monotone, and Cauchy within the κ-based tail bound.
pub fn qop_suite(b: &Arc<Ball>, u: &Elem, q: &Rational, cutoffs: &[usize]) -> Result<Value> {
    let d = b.diagram();
    let ops = cutoffs.iter().map(|&l| q_operator(u, q, b, l)).collect::<Result<Vec<_>>>()?;
    let mut tally = Tally::default();
    let mut rows = vec![];
    for (i, a) in ops.iter().enumerate() {
        rows.push(json!({
            "cutoff": a.cutoff,
            "tail_bound": a.tail_bound,
            "entry_at_identity": format_rational(&a.op.entry(0, 0)),
        }));
        if let Some(next) = ops.get(i + 1) {
            tally.record(next.tail_bound < a.tail_bound, 0.0, || format!("tail bound not decreasing at {}", a.cutoff));
        }
        for c in &ops[i + 1..] {
            let diff = c.op.sub(&a.op);
            let mut monotone = true;
            let mut worst = Rational::zero();
            for j in 0..diff.dim() {
                let x = diff.entry(j, j);
                monotone &= !x.is_negative();
                if x.abs() > worst {
                    worst = x.abs();
                }
            }
            let gap = to_f64(&worst);
            tally.record(monotone && gap <= a.tail_bound, gap, || format!("cutoffs {} and {}", a.cutoff, c.cutoff));
        }
    }
    let mut v = tally.to_json();
    v["u"] = json!(d.format(u));
    v["q"] = json!(format_rational(q));
    v["kappa_constant"] = json!(ops.first().map(|o| o.kappa_constant));
    v["partial_sums"] = json!(rows);
    Ok(v)
}

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    pub details: Value,
}

impl CriterionResult {
    pub fn to_json(&self) -> Value {
        json!({"id": self.id, "title": self.title, "passed": self.passed, "details": self.details})
    }

    pub fn line(&self) -> String {
        format!("{} {:<3} {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.title)
    }
}

pub const CRITERIA: [(&str, &str); 12] = [
    ("1", "classifier verdicts and pole intervals"),
    ("2", "growth series against enumeration"),
    ("3", "Hecke algebra identities"),
    ("4", "operator identities on exactness domains"),
    ("5", "positivity windows"),
    ("6a", "central projection traces"),
    ("6b", "central projection residuals"),
    ("6c", "orthogonality of central projections"),
    ("7a", "character multiplicativity"),
    ("7b", "character growth witness"),
    ("8", "sphere-norm growth"),
    ("9", "prefix counts and Q-operator tails"),
];

pub fn run_criterion(id: &str) -> Result<CriterionResult> {
    let (id, title) = CRITERIA
        .iter()
        .find(|(k, _)| *k == id)
        .copied()
        .ok_or_else(|| Error::InvalidArgument(format!("unknown criterion `{id}`")))?;
    let (passed, details) = match id {
        "1" => criterion_classifier()?,
        "2" => criterion_growth_series()?,
        "3" => criterion_hecke_identities()?,
        "4" => criterion_operator_identities()?,
        "5" => criterion_positivity()?,
        "6a" => criterion_projection_traces()?,
        "6b" => criterion_projection_residuals()?,
        "6c" => criterion_projection_orthogonality()?,
        "7a" => criterion_character_multiplicativity()?,
        "7b" => criterion_character_witness()?,
        "8" => criterion_haagerup()?,
        "9" => criterion_kappa_qop()?,
        _ => unreachable!(),
    };
    Ok(CriterionResult { id, title, passed, details })
}

/// Runs every criterion in order; a criterion that errors counts as failed.
pub fn run_all(mut progress: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|(id, title)| {
            let r = run_criterion(id).unwrap_or_else(|e| CriterionResult {
                id,
                title,
                passed: false,
                details: json!({"error": e.to_string()}),
            });
            progress(&r);
            r
        })
        .collect()
}

pub fn report_json(results: &[CriterionResult]) -> Value {
    json!({
        "criteria": results.iter().map(CriterionResult::to_json).collect::<Vec<_>>(),
        "passed": results.iter().all(|r| r.passed),
        "failed": results.iter().filter(|r| !r.passed).map(|r| r.id).collect::<Vec<_>>(),
    })
}

fn uniform(d: &CoxeterDiagram, q: Rational) -> Result<MultiParameter> {
    MultiParameter::uniform(d, q)
}

fn criterion_classifier() -> Result<(bool, Value)> {
    let d_inf = catalog::d_infinity();
    let free3 = catalog::free_product(3);
    let pentagon = catalog::pentagon();
    let a = catalog::diagram_a();
    // (diagram, q, expected status, expected boundary)
    let cases: Vec<(&str, &CoxeterDiagram, Rational, Status, bool)> = vec![
        ("D_infinity", &d_inf, rat(1, 4), Status::NotSimple, false),
        ("D_infinity", &d_inf, int(1), Status::NotSimple, true),
        ("D_infinity", &d_inf, int(4), Status::NotSimple, false),
        ("free_product_3", &free3, rat(3, 5), Status::Simple, false),
        ("free_product_3", &free3, int(1), Status::Simple, false),
        ("free_product_3", &free3, rat(19, 10), Status::Simple, false),
        ("free_product_3", &free3, rat(2, 5), Status::NotSimple, false),
        ("free_product_3", &free3, rat(1, 2), Status::NotSimple, true),
        ("free_product_3", &free3, int(2), Status::NotSimple, true),
        ("free_product_3", &free3, int(3), Status::NotSimple, false),
        ("pentagon", &pentagon, int(1), Status::Simple, false),
        ("A", &a, int(1), Status::Simple, false),
    ];
    let mut counts: HashMap<&str, MultidegreeCounts> = HashMap::new();
    let mut ok = true;
    let mut rows = vec![];
    for (name, d, q, status, boundary) in cases {
        let q = uniform(d, q)?;
        let verdict = classify_simplicity(d, &q);
        let counts = match counts.entry(name) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(MultidegreeCounts::enumerate(d, 12)?),
        };
        // ρ = inf_l a_l^{1/l} by submultiplicativity, so every a_l^{1/l}
        // from brute-force counts bounds the pole-method ρ from above
        let mut fekete_ok = true;
        for f in &verdict.per_flip {
            let lo = to_f64(&f.report.rho.lo);
            for l in 1..=12 {
                let a_l = counts.sphere_weight(&f.report.q, l);
                fekete_ok &= lo <= crate::growth::fekete_estimate(&a_l, l) * (1.0 + 1e-12);
            }
        }
        let flagged = verdict.exact_boundary;
        let case_ok = verdict.status == status && flagged == boundary && fekete_ok;
        ok &= case_ok;
        rows.push(json!({
            "diagram": name,
            "q": q.display(d),
            "status": verdict.status.as_str(),
            "expected": status.as_str(),
            "boundary_flags": verdict.boundary_flags.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "exact_boundary": verdict.exact_boundary,
            "fekete_consistent": fekete_ok,
            "passed": case_ok,
        }));
    }
    // t0 for the all-positive pattern at q = 1 against the exact quadratic
    let mut poles = vec![];
    for (name, d, quad) in [
        ("pentagon", &pentagon, Poly::from_ints(&[1, -3, 1])),
        ("A", &a, Poly::from_ints(&[-1, 1, 1])),
    ] {
        let verdict = classify_simplicity(d, &uniform(d, int(1))?);
        let flip = verdict
            .per_flip
            .iter()
            .find(|f| f.eps == SignPattern::all_positive(d.rank()))
            .expect("all-positive pattern");
        let t0 = flip.report.t0.clone().expect("finite pole");
        let contains = t0.lo >= Rational::zero()
            && t0.hi <= Rational::one()
            && !(quad.eval(&t0.lo) * quad.eval(&t0.hi)).is_positive();
        let narrow = t0.width() <= num_traits::pow(rat(1, 2), 32);
        ok &= contains && narrow;
        poles.push(json!({
            "diagram": name,
            "t0_interval": t0.to_strings(),
            "root_of": quad.to_string(),
            "contains_root": contains,
            "width_at_most_2^-32": narrow,
        }));
    }
    Ok((ok, json!({"cases": rows, "poles": poles})))
}

fn criterion_growth_series() -> Result<(bool, Value)> {
    let mut ok = true;
    let mut rows = vec![];
    for d in catalog::connected_corpus(5) {
        let series = sphere_weights_from_series(&d, &uniform(&d, int(1))?, 12);
        let streamed = sphere_sizes(&d, 12);
        let stream_ok = series.iter().zip(&streamed).all(|(a, b)| a == &Rational::from_integer((*b).into()));
        // breadth-first balls as long as they stay small
        let mut radius = 12;
        while radius > 0 && streamed[..=radius].iter().sum::<u64>() > 300_000 {
            radius -= 1;
        }
        let bfs = ball(&d, radius)?;
        let bfs_ok = bfs.sphere_sizes().iter().zip(&streamed).all(|(a, b)| *a as u64 == *b);
        ok &= stream_ok && bfs_ok;
        rows.push(json!({
            "diagram": d.to_json_value(),
            "sphere_sizes": streamed,
            "series_matches_enumeration": stream_ok,
            "bfs_radius": radius,
            "bfs_matches": bfs_ok,
        }));
    }
    let a = catalog::diagram_a();
    let head = sphere_sizes(&a, 3);
    let a_ok = head == [1, 3, 5, 8];
    ok &= a_ok;
    Ok((ok, json!({"corpus": rows, "corpus_size": rows.len(), "diagram_a_counts": head, "diagram_a_ok": a_ok})))
}

fn square_parameters(d: &CoxeterDiagram) -> Result<MultiParameter> {
    let pool = [rat(1, 4), int(9), rat(4, 9), int(1), rat(1, 9)];
    MultiParameter::new(d, d.generators().map(|s| pool[s as usize % pool.len()].clone()).collect())
}

fn criterion_hecke_identities() -> Result<(bool, Value)> {
    let mut ok = true;
    let mut rows = vec![];
    for (name, d) in [("A", catalog::diagram_a()), ("pentagon", catalog::pentagon())] {
        let alg = HeckeAlgebra::<Rational>::new(&d, &square_parameters(&d)?)?;
        let quadratic = d.generators().all(|s| {
            let t = alg.generator(s);
            alg.mul(&t, &t) == alg.one().add(&t.scale(alg.p(s)))
        });
        let b5 = ball(&d, 5)?;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut assoc = 0;
        let mut trace = 0;
        for _ in 0..200 {
            let x = alg.random_element(&b5, 3, 5, &mut rng);
            let y = alg.random_element(&b5, 3, 5, &mut rng);
            let z = alg.random_element(&b5, 3, 5, &mut rng);
            if alg.mul(&alg.mul(&x, &y), &z) == alg.mul(&x, &alg.mul(&y, &z)) {
                assoc += 1;
            }
            if alg.trace(&alg.mul(&x, &y)) == alg.trace(&alg.mul(&y, &x)) {
                trace += 1;
            }
        }
        let group = HeckeAlgebra::<Rational>::new(&d, &uniform(&d, int(1))?)?;
        let b4 = ball(&d, 4)?;
        let mut degenerate = true;
        for v in b4.elements() {
            for w in b4.elements() {
                degenerate &= group.mul(&group.t(v), &group.t(w)) == group.t(&d.multiply(v, w));
            }
        }
        let case_ok = quadratic && assoc == 200 && trace == 200 && degenerate;
        ok &= case_ok;
        rows.push(json!({
            "diagram": name,
            "q": alg.parameter().display(&d),
            "quadratic_relations": quadratic,
            "associativity": format!("{assoc}/200"),
            "trace_property": format!("{trace}/200"),
            "group_algebra_at_q_1": degenerate,
            "group_algebra_pairs": b4.len() * b4.len(),
        }));
    }
    Ok((ok, json!(rows)))
}

fn criterion_operator_identities() -> Result<(bool, Value)> {
    let a = catalog::diagram_a();
    let pentagon = catalog::pentagon();
    let mut details = serde_json::Map::new();
    let mut ok = true;
    for (name, d) in [("A", &a), ("pentagon", &pentagon)] {
        let alg = HeckeAlgebra::<Rational>::new(d, &square_parameters(d)?)?;
        let b = Arc::new(ball(d, 7)?);
        let t = action_cases(&alg, &b, 5);
        ok &= t.passed();
        details.insert(format!("action_{name}"), t.to_json());
        let b5 = ball(d, 5)?;
        let j = join_cases(&b5);
        ok &= j.passed();
        details.insert(format!("joins_{name}"), j.to_json());
    }
    let alg = HeckeAlgebra::<Rational>::new(&a, &square_parameters(&a)?)?;
    let t = cliq_cases(&alg, &Arc::new(ball(&a, 8)?), 6);
    ok &= t.passed();
    details.insert("cliq_A".into(), t.to_json());
    let alg = HeckeAlgebra::<Rational>::new(&a, &uniform(&a, rat(1, 4))?)?;
    let g = a.parse_elem("acbc")?;
    let (t, splits) = split_cases(&alg, &Arc::new(ball(&a, 10)?), &g, &[1, 2]);
    ok &= t.passed();
    let mut v = t.to_json();
    v["splits"] = json!(splits);
    details.insert("power_split_A".into(), v);
    Ok((ok, Value::Object(details)))
}

fn criterion_positivity() -> Result<(bool, Value)> {
    let d = catalog::diagram_a();
    let v = positivity_suite(&d, &[rat(1, 4), rat(1, 9), int(1)], 50, 4, 0, Mode::Exact)?;
    Ok((v["passed"] == json!(true), v))
}

fn free3_quarter() -> Result<HeckeAlgebra<Rational>> {
    let d = catalog::free_product(3);
    HeckeAlgebra::new(&d, &uniform(&d, rat(1, 4))?)
}

const PROJECTION_DEPTH: usize = 60;

fn criterion_projection_traces() -> Result<(bool, Value)> {
    let alg = free3_quarter()?;
    let eps = SignPattern::all_positive(3);
    let radial = RadialAlgebra::from_algebra(&alg)?;
    let n = alg.projection_normalizer(&eps)?;
    let chi = alg.char_generator(&eps, 0);
    let expected = rat(2, 5);
    let explicit_ok = (0..=6).all(|i| {
        alg.central_projection_partial(&eps, i)
            .map(|e| alg.trace(&e) == expected)
            .unwrap_or(false)
    });
    let radial_ok = (0..=PROJECTION_DEPTH).all(|i| radial.projection(&n, &chi, i)[0] == expected);
    Ok((
        explicit_ok && radial_ok,
        json!({
            "normalizer": format_rational(&n),
            "expanded_up_to": 6,
            "expanded_ok": explicit_ok,
            "radial_up_to": PROJECTION_DEPTH,
            "radial_ok": radial_ok,
        }),
    ))
}

fn strictly_decreasing(v: &[Rational]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn criterion_projection_residuals() -> Result<(bool, Value)> {
    let alg = free3_quarter()?;
    let eps = SignPattern::all_positive(3);
    let radial = RadialAlgebra::from_algebra(&alg)?;
    let n = alg.projection_normalizer(&eps)?;
    let chi = alg.char_generator(&eps, 0);
    let idem = radial.idempotency_residuals_sq(&n, &chi, PROJECTION_DEPTH);
    let gen = (0..=PROJECTION_DEPTH)
        .map(|i| generator_residual_sq(&alg, &eps, 0, i))
        .collect::<Result<Vec<_>>>()?;
    // the closed forms agree with full expansions on the first partial sums
    let mut cross = true;
    for i in 0..=4 {
        let e = alg.central_projection_partial(&eps, i)?;
        cross &= alg.l2_norm_sq(&alg.mul(&e, &e).sub(&e)) == idem[i];
        cross &= alg.l2_norm_sq(&alg.mul(&alg.generator(0), &e).sub(&e.scale(&chi))) == gen[i];
    }
    let threshold = rat(1, 1_000_000) * rat(1, 1_000_000);
    let first_below = |v: &[Rational]| v.iter().position(|r| r < &threshold);
    let idem_below = first_below(&idem);
    let gen_below = first_below(&gen);
    let passed = cross
        && strictly_decreasing(&idem[3..])
        && strictly_decreasing(&gen[3..])
        && idem_below.is_some()
        && gen_below.is_some();
    let sqrt = |v: &[Rational]| v.iter().map(|r| to_f64(r).sqrt()).collect::<Vec<_>>();
    Ok((
        passed,
        json!({
            "idempotency_residuals": sqrt(&idem),
            "generator_residuals": sqrt(&gen),
            "idempotency_decreasing_from_3": strictly_decreasing(&idem[3..]),
            "generator_decreasing_from_3": strictly_decreasing(&gen[3..]),
            "idempotency_first_below_1e-6": idem_below,
            "generator_first_below_1e-6": gen_below,
            "expansion_cross_check": cross,
        }),
    ))
}

fn criterion_projection_orthogonality() -> Result<(bool, Value)> {
    let alg = free3_quarter()?;
    let plus = SignPattern::all_positive(3);
    let minus = SignPattern::all_negative(3);
    let requested = match projection_inner(&alg, &plus, &minus, PROJECTION_DEPTH) {
        Ok(v) => (to_f64(&v).abs() < 1e-4, json!({"inner_product": to_f64(&v)})),
        Err(e) => (false, json!({"error": e.to_string()})),
    };
    // a pair of patterns whose projections both exist
    let d = catalog::free_product(3);
    let alg = HeckeAlgebra::<Rational>::new(&d, &MultiParameter::new(&d, vec![int(1), rat(1, 9), rat(1, 9)])?)?;
    let other = SignPattern::parse(3, "-++")?;
    let series: Vec<f64> = [10, 20, 40, PROJECTION_DEPTH]
        .iter()
        .map(|&i| projection_inner(&alg, &plus, &other, i).map(|v| to_f64(&v)))
        .collect::<Result<_>>()?;
    Ok((
        requested.0,
        json!({
            "requested_pair": {"q": "all=1/4", "patterns": ["+++", "---"], "result": requested.1},
            "well_posed_pair": {
                "q": alg.parameter().display(&d),
                "patterns": ["+++", "-++"],
                "inner_products_at_10_20_40_60": series,
                "below_1e-4": series.last().is_some_and(|v| v.abs() < 1e-4),
            },
        }),
    ))
}

fn criterion_character_multiplicativity() -> Result<(bool, Value)> {
    let mut ok = true;
    let mut rows = vec![];
    for (name, d) in [("A", catalog::diagram_a()), ("free_product_3", catalog::free_product(3))] {
        let alg = HeckeAlgebra::<Rational>::new(&d, &square_parameters(&d)?)?;
        let b = ball(&d, 4)?;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut failures = 0;
        let patterns = SignPattern::all(d.rank());
        for eps in &patterns {
            for _ in 0..200 {
                let x = alg.random_element(&b, 3, 5, &mut rng);
                let y = alg.random_element(&b, 3, 5, &mut rng);
                if alg.char_value(eps, &alg.mul(&x, &y)) != alg.char_value(eps, &x) * alg.char_value(eps, &y) {
                    failures += 1;
                }
            }
        }
        ok &= failures == 0;
        rows.push(json!({"diagram": name, "q": alg.parameter().display(&d), "patterns": patterns.len(), "samples_per_pattern": 200, "failures": failures}));
    }
    Ok((ok, json!(rows)))
}

fn criterion_character_witness() -> Result<(bool, Value)> {
    let d = catalog::free_product(3);
    let alg = HeckeAlgebra::<Rational>::new(&d, &uniform(&d, int(1))?)?;
    let eps = SignPattern::all_positive(3);
    let ratios = (2..=8).map(|l| character_witness_ratio_sq(&alg, &eps, l)).collect::<Result<Vec<_>>>()?;
    let closed_form = ratios.iter().zip(2i64..).all(|(r, l)| *r == Rational::new((3 << (l - 1)).into(), (l * l).into()));
    let monotone = ratios.windows(2).all(|w| w[1] > w[0]);
    let first_drop = ratios.windows(2).position(|w| w[1] <= w[0]).map(|k| k + 2);
    Ok((
        closed_form && monotone,
        json!({
            "ratios_l_2_to_8": ratios.iter().map(|r| to_f64(r).sqrt()).collect::<Vec<_>>(),
            "matches_sqrt(3*2^(l-1))/l": closed_form,
            "increasing": monotone,
            "first_non_increase_at_l": first_drop,
        }),
    ))
}

fn criterion_haagerup() -> Result<(bool, Value)> {
    let d = catalog::pentagon();
    let alg = HeckeAlgebra::<f64>::new(&d, &uniform(&d, rat(7, 10))?)?;
    let ls: Vec<usize> = (1..=6).collect();
    let (v10, c10) = haagerup_suite(&alg, &Arc::new(ball(&d, 10)?), &ls, 50, 0)?;
    let (v11, c11) = haagerup_suite(&alg, &Arc::new(ball(&d, 11)?), &ls, 50, 0)?;
    let spread = v10["spread"].as_f64().unwrap_or(f64::INFINITY);
    let stable = (c11 - c10).abs() <= 0.1 * c10;
    Ok((
        spread < 3.0 && stable,
        json!({
            "n_10": v10,
            "n_11": v11,
            "spread_below_3": spread < 3.0,
            "fitted_c_stable_within_10_percent": stable,
        }),
    ))
}

fn criterion_kappa_qop() -> Result<(bool, Value)> {
    let d = catalog::diagram_a();
    let b = Arc::new(ball(&d, 10)?);
    let c = fitted_kappa_constant(&b);
    let k = d.rank() as i32 - 2;
    let bound_ok = b.elements().iter().all(|w| {
        kappa_profile(&d, w)
            .iter()
            .enumerate()
            .all(|(l, &x)| x as f64 <= c * (l.max(1) as f64).powi(k) + 1e-12)
    });
    let by_radius: Vec<f64> = (6..=10)
        .map(|n| ball(&d, n).map(|b| fitted_kappa_constant(&b)))
        .collect::<Result<_>>()?;
    let cutoffs: Vec<usize> = (4..=10).collect();
    let mut ok = bound_ok;
    let mut qops = vec![];
    for u in ["e", "c"] {
        let v = qop_suite(&b, &d.parse_elem(u)?, &rat(1, 2), &cutoffs)?;
        ok &= v["passed"] == json!(true);
        qops.push(v);
    }
    Ok((
        ok,
        json!({
            "fitted_c": c,
            "fitted_c_by_radius_6_to_10": by_radius,
            "bound_holds_on_ball": bound_ok,
            "q_operator": qops,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        let d = catalog::diagram_a();
        let cfg = SuiteConfig {
            diagram: d.clone(),
            q: MultiParameter::uniform(&d, rat(1, 4)).unwrap(),
            radius: 5,
            seed: 0,
            mode: Mode::Exact,
            word: None,
            trials: 3,
        };
        for name in ["action", "cliq", "positivity", "qop"] {
            let mut c = cfg.clone();
            if name == "qop" {
                c.q = MultiParameter::uniform(&d, rat(1, 2)).unwrap();
            }
            let v = verify_suite(name, &c).unwrap();
            assert_eq!(v["passed"], json!(true), "{name}: {v}");
        }
        let mut c = cfg.clone();
        c.radius = 6;
        assert_eq!(verify_suite("corollary", &c).unwrap()["passed"], json!(true));
        let mut c = cfg;
        c.mode = Mode::Float;
        assert_eq!(verify_suite("haagerup", &c).unwrap()["passed"], json!(true));
        assert!(verify_suite("nope", &c).is_err());
    }

    #[test]
    fn joins_on_small_ball() {
        let d = catalog::diagram_a();
        assert!(join_cases(&ball(&d, 3).unwrap()).passed());
    }
}
