//! Truncations of operators on `ℓ²(W)` to balls, with an explicit radius on
//! which the truncation agrees with the true operator.
//!
//! A [`TruncatedOperator`] stores the columns `X δ_v` for every `v` in the
//! ball, with rows outside the ball dropped. Its exactness radius `r` means
//! that for `|v| ≤ r` the stored column equals the true `P_n X δ_v`; its
//! spread `k` bounds `| |u| − |v| |` over nonzero entries `(u, v)`. Identity
//! checks compare columns only inside the exactness domain.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coxeter::{CoxeterDiagram, Elem, Gen};
use crate::enumeration::{fitted_kappa_constant, Ball};
use crate::error::{Error, Result};
use crate::hecke::{HeckeAlgebra, HeckeElement};
use crate::params::{to_f64, Rational};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct TruncatedOperator<K> {
    ball: Arc<Ball>,
    cols: Vec<Vec<(u32, K)>>,
    exactness_radius: i64,
    spread: usize,
}

impl<K: Scalar> TruncatedOperator<K> {
    fn from_maps(ball: &Arc<Ball>, cols: Vec<BTreeMap<u32, K>>, exactness_radius: i64, spread: usize) -> Self {
        let cols = cols
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        TruncatedOperator {
            ball: ball.clone(),
            cols,
            exactness_radius: exactness_radius.min(ball.radius() as i64),
            spread,
        }
    }

    pub fn identity(ball: &Arc<Ball>) -> Self {
        Self::diagonal(ball, |_| K::one())
    }

    pub fn zero(ball: &Arc<Ball>) -> Self {
        Self::diagonal(ball, |_| K::zero())
    }

    /// Diagonal operator, exact on the whole ball.
    pub fn diagonal(ball: &Arc<Ball>, f: impl Fn(usize) -> K) -> Self {
        let cols = (0..ball.len())
            .map(|i| {
                let c = f(i);
                if c.is_zero() {
                    vec![]
                } else {
                    vec![(i as u32, c)]
                }
            })
            .collect();
        TruncatedOperator {
            ball: ball.clone(),
            cols,
            exactness_radius: ball.radius() as i64,
            spread: 0,
        }
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Largest `m` such that columns `δ_v`, `|v| ≤ m`, are exact; negative
    /// when no column is.
    pub fn exactness_radius(&self) -> i64 {
        self.exactness_radius
    }

    pub fn spread(&self) -> usize {
        self.spread
    }

    pub fn column(&self, j: usize) -> &[(u32, K)] {
        &self.cols[j]
    }

    pub fn entry(&self, row: usize, col: usize) -> K {
        self.cols[col]
            .binary_search_by_key(&(row as u32), |(r, _)| *r)
            .map(|k| self.cols[col][k].1.clone())
            .unwrap_or_else(|_| K::zero())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// Product with exactness `min(r_B, r_A − k_B)` and spread `k_A + k_B`.
    pub fn mul(&self, other: &Self) -> Self {
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<u32, K> = BTreeMap::new();
                for (k, b) in col {
                    for (i, a) in &self.cols[*k as usize] {
                        let e = acc.entry(*i).or_insert_with(K::zero);
                        *e = e.clone() + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect();
        let r = other.exactness_radius.min(self.exactness_radius - other.spread as i64);
        Self::from_maps(&self.ball, cols, r, self.spread + other.spread)
    }

    fn combine(&self, other: &Self, sign: K) -> Self {
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut acc: BTreeMap<u32, K> = a.iter().cloned().collect();
                for (i, c) in b {
                    let e = acc.entry(*i).or_insert_with(K::zero);
                    *e = e.clone() + sign.clone() * c.clone();
                }
                acc
            })
            .collect();
        Self::from_maps(
            &self.ball,
            cols,
            self.exactness_radius.min(other.exactness_radius),
            self.spread.max(other.spread),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, K::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -K::one())
    }

    pub fn scale(&self, c: &K) -> Self {
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(i, x)| (*i, x.clone() * c.clone())).collect())
            .collect();
        Self::from_maps(&self.ball, cols, self.exactness_radius, self.spread)
    }

    /// Transpose (the adjoint, for real entries). A column `δ_v` of the
    /// transpose reads row `v`, which is complete when `|v| + k ≤ min(n, r)`.
    pub fn transpose(&self) -> Self {
        let mut cols: Vec<BTreeMap<u32, K>> = vec![BTreeMap::new(); self.dim()];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                cols[*i as usize].insert(j as u32, c.clone());
            }
        }
        let k = self.spread as i64;
        let r = (self.ball.radius() as i64 - k).min(self.exactness_radius - k);
        Self::from_maps(&self.ball, cols, r, self.spread)
    }

    pub fn is_symmetric(&self) -> bool {
        self.cols.iter().enumerate().all(|(j, col)| {
            col.iter().all(|(i, c)| {
                let t = self.entry(j, *i as usize);
                if K::EXACT {
                    &t == c
                } else {
                    (t - c.clone()).to_f64().abs() <= 1e-12 * (1.0 + c.to_f64().abs())
                }
            })
        })
    }

    /// Common exactness radius of two operators on the same ball.
    pub fn joint_radius(&self, other: &Self) -> i64 {
        self.exactness_radius.min(other.exactness_radius)
    }

    /// Largest entry of `|self − other|` over the columns inside both
    /// exactness domains.
    pub fn residual_on_domain(&self, other: &Self) -> K {
        assert!(Arc::ptr_eq(&self.ball, &other.ball) || self.ball.len() == other.ball.len());
        let r = self.joint_radius(other);
        let mut worst = K::zero();
        for j in 0..self.dim() {
            if self.ball.length(j) as i64 > r {
                break;
            }
            let mut diff: BTreeMap<u32, K> = self.cols[j].iter().cloned().collect();
            for (i, c) in &other.cols[j] {
                let e = diff.entry(*i).or_insert_with(K::zero);
                *e = e.clone() - c.clone();
            }
            for v in diff.into_values() {
                let a = v.abs_val();
                if a > worst {
                    worst = a;
                }
            }
        }
        worst
    }

    /// Exact equality on the joint exactness domain (exact mode) or within
    /// `1e-9` (float mode).
    pub fn agrees_on_domain(&self, other: &Self) -> bool {
        let r = self.residual_on_domain(other);
        if K::EXACT {
            r.is_zero()
        } else {
            r.to_f64() <= 1e-9
        }
    }

    /// Number of columns in the exactness domain.
    pub fn domain_size(&self) -> usize {
        if self.exactness_radius < 0 {
            0
        } else {
            self.ball.ball_size(self.exactness_radius as usize)
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                m[(*i as usize, j)] = c.to_f64();
            }
        }
        m
    }

    pub fn to_f64(&self) -> TruncatedOperator<f64> {
        TruncatedOperator {
            ball: self.ball.clone(),
            cols: self
                .cols
                .iter()
                .map(|col| col.iter().map(|(i, c)| (*i, c.to_f64())).collect())
                .collect(),
            exactness_radius: self.exactness_radius,
            spread: self.spread,
        }
    }

    /// `y = X v` in floating point.
    pub fn apply_f64(&self, v: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        for (j, col) in self.cols.iter().enumerate() {
            if v[j] != 0.0 {
                for (i, c) in col {
                    y[*i as usize] += c.to_f64() * v[j];
                }
            }
        }
        y
    }

    /// `y = Xᵀ v` in floating point.
    pub fn apply_transpose_f64(&self, v: &[f64]) -> Vec<f64> {
        self.cols
            .iter()
            .map(|col| col.iter().map(|(i, c)| c.to_f64() * v[*i as usize]).sum())
            .collect()
    }
}

/// `s ≤ w`-dependent action `T_s δ_w = δ_{sw} (+ p_s δ_w)` applied to a
/// sparse vector on the ball; `None` if the result leaves the ball.
fn left_generator_in_ball<K: Scalar>(ball: &Ball, p: &[K], s: Gen, v: &BTreeMap<u32, K>) -> Option<BTreeMap<u32, K>> {
    let mut out: BTreeMap<u32, K> = BTreeMap::new();
    for (&i, c) in v {
        let j = ball.left_mul(s, i as usize)? as u32;
        let e = out.entry(j).or_insert_with(K::zero);
        *e = e.clone() + c.clone();
        if ball.left_descents(i as usize) >> s & 1 == 1 {
            let e = out.entry(i).or_insert_with(K::zero);
            *e = e.clone() + c.clone() * p[s as usize].clone();
        }
    }
    Some(out)
}

/// Compression of the Hecke element `a` to the ball. Columns are computed in
/// the full algebra and then cut to the ball, so every column is the true
/// `P_n T_a δ_v`; the reported exactness radius is `n − max|w|`, beyond
/// which the compression no longer sees all of `T_a δ_v`.
pub fn rep_hecke<K: Scalar>(alg: &HeckeAlgebra<K>, a: &HeckeElement<K>, ball: &Arc<Ball>) -> TruncatedOperator<K> {
    let d = ball.diagram();
    let p: Vec<K> = d.generators().map(|s| alg.p(s).clone()).collect();
    let k = a.max_length();
    let n = ball.radius();
    let cols = (0..ball.len())
        .map(|j| {
            let mut acc: BTreeMap<u32, K> = BTreeMap::new();
            if ball.length(j) + k <= n {
                for (w, c) in a.terms() {
                    let mut v = BTreeMap::from([(j as u32, c.clone())]);
                    for &s in w.letters().iter().rev() {
                        v = left_generator_in_ball(ball, &p, s, &v).expect("stays inside the ball");
                    }
                    for (i, x) in v {
                        let e = acc.entry(i).or_insert_with(K::zero);
                        *e = e.clone() + x;
                    }
                }
            } else {
                let prod = alg.mul(a, &alg.t(ball.element(j)));
                for (w, c) in prod.terms() {
                    if let Some(i) = ball.index_of(w) {
                        acc.insert(i as u32, c.clone());
                    }
                }
            }
            acc
        })
        .collect();
    TruncatedOperator::from_maps(ball, cols, n as i64 - k as i64, k)
}

/// `P_w`: projection onto `span{δ_v : w ≤ v}`.
pub fn proj_p<K: Scalar>(w: &Elem, ball: &Arc<Ball>) -> TruncatedOperator<K> {
    let mut mark = vec![false; ball.len()];
    if let Some(i) = ball.index_of(w) {
        for j in ball.upper_set(i) {
            mark[j] = true;
        }
    }
    TruncatedOperator::diagonal(ball, |j| if mark[j] { K::one() } else { K::zero() })
}

/// `P_Γ = ∏_{s∈Γ} P_s = P_{∏Γ}` for a clique given as a mask.
pub fn proj_clique<K: Scalar>(clique: u64, ball: &Arc<Ball>) -> TruncatedOperator<K> {
    let d = ball.diagram();
    let letters: Vec<Gen> = (0..64).filter(|s| clique >> s & 1 == 1).map(|s| s as Gen).collect();
    proj_p(&d.normal_form(&letters), ball)
}

/// The group unitary `T_w^{(1)}: δ_v ↦ δ_{wv}`.
pub fn translation<K: Scalar>(w: &Elem, ball: &Arc<Ball>) -> TruncatedOperator<K> {
    let d = ball.diagram();
    let cols = (0..ball.len())
        .map(|j| {
            let mut m = BTreeMap::new();
            let target = if ball.length(j) + w.len() <= ball.radius() {
                w.letters()
                    .iter()
                    .rev()
                    .try_fold(j, |acc, &s| ball.left_mul(s, acc))
            } else {
                ball.index_of(&d.multiply(w, ball.element(j)))
            };
            if let Some(i) = target {
                m.insert(i as u32, K::one());
            }
            m
        })
        .collect();
    TruncatedOperator::from_maps(ball, cols, ball.radius() as i64 - w.len() as i64, w.len())
}

/// `w.X = T_w^{(1)} X T_{w⁻¹}^{(1)}`.
pub fn conjugate_action<K: Scalar>(w: &Elem, x: &TruncatedOperator<K>) -> TruncatedOperator<K> {
    let ball = x.ball();
    let d = ball.diagram();
    translation(w, ball).mul(x).mul(&translation(&d.inverse(w), ball))
}

/// Partial sum `Σ_{l=|u|}^{L} Σ_{|w|=l, u≤w⁻¹} q^l P_w` and the κ-based bound
/// on the omitted tail.
#[derive(Clone, Debug)]
pub struct QOperator {
    pub op: TruncatedOperator<Rational>,
    pub cutoff: usize,
    /// `C Σ_{l>L} q^l l^{rank−2}` with `C` the fitted κ constant of the ball.
    pub tail_bound: f64,
    pub kappa_constant: f64,
}

pub fn q_operator(u: &Elem, q: &Rational, ball: &Arc<Ball>, cutoff: usize) -> Result<QOperator> {
    if !(q.is_positive() && q < &Rational::one()) {
        return Err(Error::InvalidArgument("q must lie in (0, 1)".into()));
    }
    if cutoff > ball.radius() {
        return Err(Error::BallTooSmall { have: ball.radius(), need: cutoff });
    }
    let d = ball.diagram();
    let powers: Vec<Rational> = (0..=cutoff).map(|l| num_traits::pow(q.clone(), l)).collect();
    let entries: Vec<Rational> = ball
        .elements()
        .iter()
        .map(|v| {
            d.prefixes(v)
                .iter()
                .filter(|w| w.len() >= u.len() && w.len() <= cutoff && d.starts_with(u, &d.inverse(w)))
                .fold(Rational::zero(), |acc, w| acc + &powers[w.len()])
        })
        .collect();
    let op = TruncatedOperator::diagonal(ball, |i| entries[i].clone());
    let c = fitted_kappa_constant(ball);
    Ok(QOperator {
        op,
        cutoff,
        tail_bound: kappa_tail(c, to_f64(q), d.rank(), cutoff),
        kappa_constant: c,
    })
}

/// `C Σ_{l>L} q^l max(l,1)^{k−2}`, summed until the terms are negligible.
pub fn kappa_tail(c: f64, q: f64, rank: usize, cutoff: usize) -> f64 {
    let k = rank as i32 - 2;
    let mut total = 0.0;
    let mut l = cutoff + 1;
    loop {
        let term = q.powi(l as i32) * if k <= 0 { 1.0 } else { (l as f64).powi(k) };
        total += term;
        if term < 1e-18 * total.max(1e-300) || l > cutoff + 100_000 {
            break;
        }
        l += 1;
    }
    c * total
}

/// Norm of the finite matrix: a lower bound on the norm of the operator it
/// compresses.
pub fn op_norm<K: Scalar>(x: &TruncatedOperator<K>) -> f64 {
    if x.dim() <= 1500 {
        let m = x.to_dense();
        m.singular_values().iter().cloned().fold(0.0, f64::max)
    } else {
        power_norm(x, 500, 1e-12, 0)
    }
}

/// Power iteration on `XᵀX` from a seeded start; every iterate gives a
/// lower bound, the last one is returned.
pub fn power_norm<K: Scalar>(x: &TruncatedOperator<K>, max_iter: usize, tol: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..x.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut v);
    let mut est = 0.0;
    for _ in 0..max_iter {
        let y = x.apply_f64(&v);
        let ny = norm(&y);
        let mut z = x.apply_transpose_f64(&y);
        if normalize(&mut z) == 0.0 {
            return 0.0;
        }
        let done = (ny - est).abs() <= tol * ny;
        est = ny;
        v = z;
        if done {
            break;
        }
    }
    est
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = norm(v);
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Smallest and largest eigenvalue of a self-adjoint truncation.
pub fn spectrum_bounds<K: Scalar>(x: &TruncatedOperator<K>) -> Result<(f64, f64)> {
    if !x.is_symmetric() {
        return Err(Error::NotSelfAdjoint);
    }
    let eig = SymmetricEigen::new(x.to_dense());
    let lo = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Exact positive semidefiniteness of a symmetric rational matrix by
/// symmetric elimination.
pub fn is_psd_exact(m: &[Vec<Rational>]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot.is_negative() {
            return false;
        }
        if pivot.is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero()) {
                return false;
            }
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for j in k + 1..n {
                if !a[k][j].is_zero() {
                    let t = &f * &a[k][j];
                    a[i][j] -= t;
                }
            }
            a[i][k] = Rational::zero();
        }
    }
    true
}

pub fn dense_exact(x: &TruncatedOperator<Rational>) -> Vec<Vec<Rational>> {
    let n = x.dim();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for j in 0..n {
        for (i, c) in x.column(j) {
            m[*i as usize][j] = c.clone();
        }
    }
    m
}

/// Spectral window of the compression of `(T_w)* T_w`, with the bounds
/// `∏ min{q_s, q_s^{-1}}` and `∏ max{q_s, q_s^{-1}}` over the letters of `w`.
#[derive(Clone, Debug)]
pub struct PositivityWindow {
    pub lo: f64,
    pub hi: f64,
    pub bound_lo: Rational,
    pub bound_hi: Rational,
}

impl PositivityWindow {
    pub fn within(&self, tol: f64) -> bool {
        self.lo >= to_f64(&self.bound_lo) - tol && self.hi <= to_f64(&self.bound_hi) + tol
    }
}

pub fn window_bounds(q: &crate::params::MultiParameter, w: &Elem) -> (Rational, Rational) {
    let mut lo = Rational::one();
    let mut hi = Rational::one();
    for &s in w.letters() {
        let v = q.value(s);
        let inv = v.recip();
        if v < &inv {
            lo *= v;
            hi *= inv;
        } else {
            lo *= inv;
            hi *= v.clone();
        }
    }
    (lo, hi)
}

pub fn positivity_window(alg: &HeckeAlgebra<Rational>, w: &Elem, ball: &Arc<Ball>) -> Result<PositivityWindow> {
    if ball.radius() < 2 * w.len() {
        return Err(Error::BallTooSmall { have: ball.radius(), need: 2 * w.len() });
    }
    let y = positivity_operator(alg, w, ball);
    let (lo, hi) = spectrum_bounds(&y)?;
    let (bound_lo, bound_hi) = window_bounds(alg.parameter(), w);
    Ok(PositivityWindow { lo, hi, bound_lo, bound_hi })
}

/// Compression of `(T_w)* T_w` to the ball.
pub fn positivity_operator(alg: &HeckeAlgebra<Rational>, w: &Elem, ball: &Arc<Ball>) -> TruncatedOperator<Rational> {
    let t = alg.t(w);
    let y = alg.mul(&alg.adjoint(&t), &t);
    rep_hecke(alg, &y, ball)
}

/// Exact check of `c ≤ X ≤ C` for the compression of `(T_w)* T_w`.
pub fn positivity_window_exact(alg: &HeckeAlgebra<Rational>, w: &Elem, ball: &Arc<Ball>) -> Result<bool> {
    if ball.radius() < 2 * w.len() {
        return Err(Error::BallTooSmall { have: ball.radius(), need: 2 * w.len() });
    }
    let y = positivity_operator(alg, w, ball);
    let (lo, hi) = window_bounds(alg.parameter(), w);
    let id = TruncatedOperator::<Rational>::identity(ball);
    let below = y.sub(&id.scale(&lo));
    let above = id.scale(&hi).sub(&y);
    Ok(is_psd_exact(&dense_exact(&below)) && is_psd_exact(&dense_exact(&above)))
}

/// Largest `‖x‖/(l‖x‖₂)` over seeded random `x = Σ_{|w|=l} c_w T_w`
/// (coefficients uniform in `[−1, 1]`, or in `[0, 1]` on odd trials), where
/// `‖x‖` is the norm of `x` restricted to `span{δ_v : |v| ≤ n − l}`, on which
/// the truncation to the `n`-ball is exact.
#[derive(Clone, Debug)]
pub struct HaagerupSample {
    pub l: usize,
    pub n: usize,
    pub max_ratio: f64,
    pub ratios: Vec<f64>,
}

pub fn haagerup_ratio(
    alg: &HeckeAlgebra<f64>,
    ball: &Arc<Ball>,
    l: usize,
    trials: usize,
    seed: u64,
) -> Result<HaagerupSample> {
    let n = ball.radius();
    if l == 0 || n < l + 2 {
        return Err(Error::BallTooSmall { have: n, need: l + 2 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width = ball.sphere_range(l).len();
    let samples: Vec<Vec<f64>> = (0..trials)
        .map(|t| {
            // odd trials are nonnegative, which probes the radial direction
            let lo = if t % 2 == 0 { -1.0 } else { 0.0 };
            (0..width).map(|_| rng.gen_range(lo..1.0)).collect()
        })
        .collect();
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(trials.max(1));
    let mut ratios = vec![0.0; trials];
    std::thread::scope(|scope| {
        for (k, chunk) in ratios.chunks_mut(trials.div_ceil(threads).max(1)).enumerate() {
            let samples = &samples;
            scope.spawn(move || {
                let start = k * trials.div_ceil(threads).max(1);
                for (t, out) in chunk.iter_mut().enumerate() {
                    *out = sphere_ratio(alg, ball, l, &samples[start + t], seed.wrapping_add((start + t) as u64));
                }
            });
        }
    });
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    Ok(HaagerupSample { l, n, max_ratio, ratios })
}

/// `‖x‖/(l‖x‖₂)` for `x = Σ_{|w|=l} c_w T_w`, coefficients in sphere order,
/// with `‖x‖` taken on the exact domain `|v| ≤ n − l`.
pub fn sphere_ratio(alg: &HeckeAlgebra<f64>, ball: &Arc<Ball>, l: usize, coeffs: &[f64], seed: u64) -> f64 {
    let op = sphere_operator(alg, ball, l, coeffs);
    let nrm = power_norm(&op, 200, 1e-7, seed);
    let l2 = coeffs.iter().map(|c| c * c).sum::<f64>().sqrt();
    nrm / (l as f64 * l2)
}

/// `x = Σ_{|w|=l} c_w T_w` on the columns `δ_v`, `|v| ≤ n − l`; the other
/// columns are left empty.
fn sphere_operator(alg: &HeckeAlgebra<f64>, ball: &Arc<Ball>, l: usize, coeffs: &[f64]) -> TruncatedOperator<f64> {
    let n = ball.radius();
    let d = ball.diagram();
    let p: Vec<f64> = d.generators().map(|s| *alg.p(s)).collect();
    let sphere = ball.sphere_range(l);
    let mut acc = vec![0.0f64; ball.len()];
    let mut seen = vec![false; ball.len()];
    let mut touched: Vec<u32> = vec![];
    let mut cols: Vec<Vec<(u32, f64)>> = vec![vec![]; ball.len()];
    for (j, col) in cols.iter_mut().enumerate().take(ball.ball_size(n - l)) {
        for (wi, c) in sphere.clone().zip(coeffs) {
            let mut v = vec![(j as u32, *c)];
            for &s in ball.element(wi).letters().iter().rev() {
                let mut next = Vec::with_capacity(2 * v.len());
                for (i, x) in v {
                    next.push((ball.left_mul(s, i as usize).expect("stays inside the ball") as u32, x));
                    if ball.left_descents(i as usize) >> s & 1 == 1 {
                        next.push((i, x * p[s as usize]));
                    }
                }
                v = next;
            }
            for (i, x) in v {
                if !seen[i as usize] {
                    seen[i as usize] = true;
                    touched.push(i);
                }
                acc[i as usize] += x;
            }
        }
        touched.sort_unstable();
        for &i in &touched {
            if acc[i as usize] != 0.0 {
                col.push((i, acc[i as usize]));
            }
            acc[i as usize] = 0.0;
            seen[i as usize] = false;
        }
        touched.clear();
    }
    TruncatedOperator {
        ball: ball.clone(),
        cols,
        exactness_radius: (n - l) as i64,
        spread: l,
    }
}

/// Residual of `T_w^{(q)} = Σ_{A_w} (∏_{s∈Γ} p_s) T_{w′}^{(1)} P_Γ T_{w″}^{(1)}`
/// on the joint exactness domain.
pub fn verify_cliq_identity<K: Scalar>(alg: &HeckeAlgebra<K>, w: &Elem, ball: &Arc<Ball>) -> Result<K> {
    if ball.radius() < w.len() + 2 {
        return Err(Error::BallTooSmall { have: ball.radius(), need: w.len() + 2 });
    }
    let lhs = rep_hecke(alg, &alg.t(w), ball);
    let mut rhs: Option<TruncatedOperator<K>> = None;
    for term in alg.cliq_decomposition(w) {
        let piece = translation::<K>(&term.prefix, ball)
            .mul(&proj_clique(term.clique, ball))
            .mul(&translation(&term.suffix, ball))
            .scale(&term.coefficient);
        rhs = Some(match rhs {
            None => piece,
            Some(r) => r.add(&piece),
        });
    }
    Ok(lhs.residual_on_domain(&rhs.expect("A_w is never empty")))
}

/// One term `p_{t_i} P_{t_1…t_i} T^{(1)}_{t_1…t̂_i…t_m}` of the split.
#[derive(Clone, Debug)]
pub struct SplitTerm<K> {
    pub coefficient: K,
    pub projection: Elem,
    pub translation: Elem,
}

#[derive(Clone, Debug)]
pub struct PowerSplit<K> {
    pub residual: K,
    pub terms: Vec<SplitTerm<K>>,
    pub exactness_radius: i64,
}

/// Checks `T_{g^l}^{(q)} = T_{g^l}^{(1)} + P_{s_1} x` with
/// `x = Σ_i p_{t_i} P_{t_1…t_i} T^{(1)}_{t_1…t̂_i…t_m}`, `t_1…t_m = g^l`.
pub fn verify_power_split<K: Scalar>(
    alg: &HeckeAlgebra<K>,
    g: &Elem,
    l: usize,
    ball: &Arc<Ball>,
) -> Result<PowerSplit<K>> {
    let d: &CoxeterDiagram = ball.diagram();
    let word: Vec<Gen> = (0..l).flat_map(|_| g.letters().iter().copied()).collect();
    let m = word.len();
    if ball.radius() < m + 2 {
        return Err(Error::BallTooSmall { have: ball.radius(), need: m + 2 });
    }
    let gl = d.normal_form(&word);
    if gl.len() != m {
        return Err(Error::InvalidArgument("g^l is not length-additive".into()));
    }
    let terms: Vec<SplitTerm<K>> = (0..m)
        .map(|i| {
            let mut hat = word.clone();
            hat.remove(i);
            SplitTerm {
                coefficient: alg.p(word[i]).clone(),
                projection: d.normal_form(&word[..=i]),
                translation: d.normal_form(&hat),
            }
        })
        .collect();
    let mut x = TruncatedOperator::<K>::zero(ball);
    for t in &terms {
        let piece = proj_p::<K>(&t.projection, ball)
            .mul(&translation(&t.translation, ball))
            .scale(&t.coefficient);
        x = x.add(&piece);
    }
    let s1 = d.generator(word[0]);
    let rhs = translation::<K>(&gl, ball).add(&proj_p(&s1, ball).mul(&x));
    let lhs = rep_hecke(alg, &alg.t(&gl), ball);
    Ok(PowerSplit {
        residual: lhs.residual_on_domain(&rhs),
        exactness_radius: lhs.joint_radius(&rhs),
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::enumeration::ball;
    use crate::params::{int, rat, MultiParameter};

    fn setup(d: &CoxeterDiagram, q: Rational, n: usize) -> (HeckeAlgebra<Rational>, Arc<Ball>) {
        let alg = HeckeAlgebra::new(d, &MultiParameter::uniform(d, q).unwrap()).unwrap();
        (alg, Arc::new(ball(d, n).unwrap()))
    }

    #[test]
    fn generator_on_d_infinity() {
        let d = catalog::d_infinity();
        let (alg, b) = setup(&d, rat(1, 4), 2);
        let ta = rep_hecke(&alg, &alg.generator(0), &b);
        let idx = |w: &str| b.index_of(&d.parse_elem(w).unwrap()).unwrap();
        assert_eq!(ta.entry(idx("a"), idx("e")), int(1));
        assert_eq!(ta.entry(idx("e"), idx("a")), int(1));
        assert_eq!(ta.entry(idx("a"), idx("a")), rat(-3, 2));
        assert_eq!(ta.entry(idx("ab"), idx("b")), int(1));
        assert_eq!(ta.exactness_radius(), 1);
        let id = rep_hecke(&alg, &alg.one(), &b);
        assert!(id.agrees_on_domain(&TruncatedOperator::identity(&b)));
    }

    #[test]
    fn column_of_identity_reproduces_coefficients() {
        let d = catalog::diagram_a();
        let (alg, b) = setup(&d, rat(1, 9), 3);
        let x = alg.parse_element("2*T(ab) - T(c) + 1/3*T(bca)").unwrap();
        let op = rep_hecke(&alg, &x, &b);
        for (w, c) in x.terms() {
            assert_eq!(&op.entry(b.index_of(w).unwrap(), 0), c);
        }
    }

    #[test]
    fn homomorphism_on_domain() {
        let d = catalog::diagram_a();
        let (alg, b) = setup(&d, rat(4, 9), 6);
        let x = alg.parse_element("T(ac) - 2*T(b)").unwrap();
        let y = alg.parse_element("T(cb) + 1/2*T(a)").unwrap();
        let lhs = rep_hecke(&alg, &alg.mul(&x, &y), &b);
        let rhs = rep_hecke(&alg, &x, &b).mul(&rep_hecke(&alg, &y, &b));
        assert!(rhs.exactness_radius() >= 2);
        assert!(lhs.agrees_on_domain(&rhs));
    }

    #[test]
    fn projections() {
        let d = catalog::diagram_a();
        let b = Arc::new(ball(&d, 3).unwrap());
        let pa = proj_p::<Rational>(&d.parse_elem("a").unwrap(), &b);
        let idx = |w: &str| b.index_of(&d.parse_elem(w).unwrap()).unwrap();
        assert_eq!(pa.entry(idx("ab"), idx("ab")), int(1));
        assert_eq!(pa.entry(idx("b"), idx("b")), int(0));
        let pe = proj_p::<Rational>(&Elem::identity(), &b);
        assert!(pe.agrees_on_domain(&TruncatedOperator::identity(&b)));
    }

    #[test]
    fn proposition_action_cases() {
        let d = catalog::diagram_a();
        let b = Arc::new(ball(&d, 5).unwrap());
        let e = |w: &str| d.parse_elem(w).unwrap();
        let a = e("a");
        let lhs = conjugate_action(&a, &proj_p::<Rational>(&e("c"), &b));
        assert!(lhs.agrees_on_domain(&proj_p(&e("ac"), &b)));
        let lhs = conjugate_action(&a, &proj_p::<Rational>(&e("ab"), &b));
        assert!(lhs.agrees_on_domain(&proj_p::<Rational>(&e("b"), &b).sub(&proj_p(&e("ab"), &b))));
        let lhs = conjugate_action(&a, &proj_p::<Rational>(&e("b"), &b));
        assert!(lhs.agrees_on_domain(&proj_p(&e("b"), &b)));
    }

    #[test]
    fn spectra_of_a_generator() {
        let d = catalog::free_product(1);
        let (alg, b) = setup(&d, rat(1, 4), 2);
        let ta = rep_hecke(&alg, &alg.generator(0), &b);
        let (lo, hi) = spectrum_bounds(&ta).unwrap();
        assert!((lo + 2.0).abs() < 1e-12 && (hi - 0.5).abs() < 1e-12);
        assert!((op_norm(&ta) - 2.0).abs() < 1e-12);
        assert!((op_norm(&TruncatedOperator::<Rational>::identity(&b)) - 1.0).abs() < 1e-12);
        let w = positivity_window(&alg, &d.parse_elem("a").unwrap(), &b).unwrap();
        assert!((w.lo - 0.25).abs() < 1e-9 && (w.hi - 4.0).abs() < 1e-9);
        assert!(positivity_window_exact(&alg, &d.parse_elem("a").unwrap(), &b).unwrap());
        let d = catalog::diagram_a();
        let (alg, b) = setup(&d, rat(1, 4), 4);
        let ac = d.parse_elem("ac").unwrap();
        let w = positivity_window(&alg, &ac, &b).unwrap();
        assert_eq!((w.bound_lo.clone(), w.bound_hi.clone()), (rat(1, 16), int(16)));
        assert!(w.within(1e-9));
        assert!(positivity_window_exact(&alg, &ac, &b).unwrap());
        let not_sym = rep_hecke(&alg, &alg.t(&ac), &b);
        assert_eq!(spectrum_bounds(&not_sym), Err(Error::NotSelfAdjoint));
    }

    #[test]
    fn psd_by_elimination() {
        assert!(is_psd_exact(&[vec![int(2), int(1)], vec![int(1), int(1)]]));
        assert!(!is_psd_exact(&[vec![int(1), int(2)], vec![int(2), int(1)]]));
        assert!(is_psd_exact(&[vec![int(0), int(0)], vec![int(0), int(1)]]));
        assert!(!is_psd_exact(&[vec![int(0), int(1)], vec![int(1), int(1)]]));
    }

    #[test]
    fn q_operator_entries() {
        let d = catalog::diagram_a();
        let b = Arc::new(ball(&d, 4).unwrap());
        let q = q_operator(&Elem::identity(), &rat(1, 2), &b, 4).unwrap();
        assert_eq!(q.op.entry(0, 0), int(1));
        let a = b.index_of(&d.parse_elem("a").unwrap()).unwrap();
        assert_eq!(q.op.entry(a, a), rat(3, 2));
        assert!(q_operator(&Elem::identity(), &int(1), &b, 4).is_err());
    }

    #[test]
    fn cliq_identity_small() {
        let d = catalog::diagram_a();
        let alg = HeckeAlgebra::<Rational>::new(&d, &MultiParameter::new(&d, vec![rat(1, 4), rat(9, 4), rat(1, 9)]).unwrap()).unwrap();
        let b = Arc::new(ball(&d, 5).unwrap());
        for w in ["a", "ab", "acb", "cab"] {
            assert!(verify_cliq_identity(&alg, &d.parse_elem(w).unwrap(), &b).unwrap().is_zero(), "{w}");
        }
    }

    #[test]
    fn power_split_small() {
        let d = catalog::diagram_a();
        let (alg, b) = setup(&d, rat(1, 4), 6);
        let g = d.find_covering_closed_path().unwrap();
        let split = verify_power_split(&alg, &g, 1, &b).unwrap();
        assert!(split.terms.len() <= 4);
        assert!(split.exactness_radius >= 0);
        assert!(split.residual.is_zero());
    }

    #[test]
    fn haagerup_single_generator() {
        let d = catalog::free_product(2);
        let alg = HeckeAlgebra::<f64>::new(&d, &MultiParameter::uniform(&d, rat(1, 4)).unwrap()).unwrap();
        let b = Arc::new(ball(&d, 6).unwrap());
        let s = haagerup_ratio(&alg, &b, 1, 5, 1).unwrap();
        assert!(s.max_ratio > 0.5 && s.max_ratio <= 2.0 * 2f64.sqrt() + 1e-9, "{:?}", s);
        assert!(haagerup_ratio(&alg, &b, 5, 1, 1).is_err());
    }
}
