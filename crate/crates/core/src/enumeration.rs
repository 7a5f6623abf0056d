//! Balls and spheres of `W` in the word metric, weighted sphere sums, and
//! the prefix counts `κ_w(l)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::coxeter::{CoxeterDiagram, Elem, Gen};
use crate::error::{Error, Result};
use crate::params::{MultiParameter, Rational};
use crate::scalar::Scalar;

pub const DEFAULT_CAP: usize = 2_000_000;

const OUTSIDE: u32 = u32::MAX;

/// All elements of length at most `radius`, sorted by (length, ShortLex),
/// with left-multiplication tables by generators.
#[derive(Clone)]
pub struct Ball {
    diagram: CoxeterDiagram,
    radius: usize,
    elements: Vec<Elem>,
    index: HashMap<Elem, u32>,
    offsets: Vec<usize>,
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
    left_desc: Vec<u64>,
}

impl std::fmt::Debug for Ball {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ball")
            .field("radius", &self.radius)
            .field("sizes", &self.sphere_sizes())
            .finish()
    }
}

pub fn ball(d: &CoxeterDiagram, n: usize) -> Result<Ball> {
    Ball::with_cap(d, n, DEFAULT_CAP)
}

impl Ball {
    /// Breadth-first construction: the next sphere is the set of right
    /// extensions `ws` with `|ws| > |w|`, deduplicated by normal form.
    pub fn with_cap(d: &CoxeterDiagram, n: usize, cap: usize) -> Result<Ball> {
        let mut elements = vec![Elem::identity()];
        let mut offsets = vec![0, 1];
        let mut frontier = vec![Elem::identity()];
        for _ in 0..n {
            let mut next = BTreeSet::new();
            for w in &frontier {
                let mut free = !d.right_descents(w) & full_mask(d.rank());
                while free != 0 {
                    let s = free.trailing_zeros() as Gen;
                    free &= free - 1;
                    next.insert(d.right_mul(w, s));
                }
            }
            if elements.len() + next.len() > cap {
                return Err(Error::BallTooLarge(cap));
            }
            frontier = next.into_iter().collect();
            elements.extend(frontier.iter().cloned());
            offsets.push(elements.len());
        }
        let index: HashMap<Elem, u32> =
            elements.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let left_desc: Vec<u64> = elements.iter().map(|w| d.left_descents(w)).collect();
        let left = d
            .generators()
            .map(|s| {
                elements
                    .iter()
                    .map(|w| index.get(&d.left_mul(s, w)).copied().unwrap_or(OUTSIDE))
                    .collect()
            })
            .collect();
        let right = d
            .generators()
            .map(|s| {
                elements
                    .iter()
                    .map(|w| index.get(&d.right_mul(w, s)).copied().unwrap_or(OUTSIDE))
                    .collect()
            })
            .collect();
        Ok(Ball {
            diagram: d.clone(),
            radius: n,
            elements,
            index,
            offsets,
            left,
            right,
            left_desc,
        })
    }

    pub fn diagram(&self) -> &CoxeterDiagram {
        &self.diagram
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Elem {
        &self.elements[i]
    }

    pub fn index_of(&self, w: &Elem) -> Option<usize> {
        self.index.get(w).map(|&i| i as usize)
    }

    /// Elements of length exactly `l`.
    pub fn sphere(&self, l: usize) -> &[Elem] {
        &self.elements[self.sphere_range(l)]
    }

    pub fn sphere_range(&self, l: usize) -> std::ops::Range<usize> {
        assert!(l <= self.radius, "sphere {l} outside ball of radius {}", self.radius);
        self.offsets[l]..self.offsets[l + 1]
    }

    /// Number of elements of length at most `l`.
    pub fn ball_size(&self, l: usize) -> usize {
        self.offsets[l.min(self.radius) + 1]
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|p| p[1] - p[0]).collect()
    }

    /// Index of `s·w_i`, or `None` when it leaves the ball.
    pub fn left_mul(&self, s: Gen, i: usize) -> Option<usize> {
        let j = self.left[s as usize][i];
        (j != OUTSIDE).then_some(j as usize)
    }

    /// Index of `w_i·s`, or `None` when it leaves the ball.
    pub fn right_mul(&self, i: usize, s: Gen) -> Option<usize> {
        let j = self.right[s as usize][i];
        (j != OUTSIDE).then_some(j as usize)
    }

    /// Indices of all `v` in the ball with `w_i ≤ v`, reached by
    /// length-increasing right multiplications.
    pub fn upper_set(&self, i: usize) -> Vec<usize> {
        let mut seen = vec![i];
        let mut stack = vec![i];
        let mut mark = std::collections::HashSet::from([i]);
        while let Some(j) = stack.pop() {
            let len = self.elements[j].len();
            for s in 0..self.right.len() {
                if let Some(k) = self.right_mul(j, s as Gen) {
                    if self.elements[k].len() > len && mark.insert(k) {
                        seen.push(k);
                        stack.push(k);
                    }
                }
            }
        }
        seen.sort_unstable();
        seen
    }

    pub fn left_descents(&self, i: usize) -> u64 {
        self.left_desc[i]
    }

    pub fn length(&self, i: usize) -> usize {
        self.elements[i].len()
    }

    /// `Σ_{|w| = l} q_w` over the stored sphere.
    pub fn sphere_weight(&self, q: &MultiParameter, l: usize) -> Result<Rational> {
        if l > self.radius {
            return Err(Error::BallTooSmall { have: self.radius, need: l });
        }
        Ok(self
            .sphere(l)
            .iter()
            .fold(Rational::zero(), |acc, w| acc + q.weight(w.letters())))
    }
}

fn full_mask(rank: usize) -> u64 {
    if rank == 64 {
        u64::MAX
    } else {
        (1u64 << rank) - 1
    }
}

/// Visits the normal word of every element of length `1..=max_len` in
/// ShortLex order of prefixes, without storing them.
///
/// Appending `c` to a normal word is allowed unless `c` is blocked: `c`
/// would cancel against an earlier `c`, or could be commuted in front of
/// a larger letter. After appending `c` the blocked set becomes
/// `{c} ∪ (commute(c) ∩ (B ∪ {a < c}))`.
pub fn for_each_normal_word(d: &CoxeterDiagram, max_len: usize, mut f: impl FnMut(&[Gen])) {
    let mut word = Vec::with_capacity(max_len);
    walk(d, max_len, 0, &mut word, &mut f);
}

fn walk(d: &CoxeterDiagram, max_len: usize, blocked: u64, word: &mut Vec<Gen>, f: &mut impl FnMut(&[Gen])) {
    if word.len() == max_len {
        return;
    }
    let mut free = !blocked & full_mask(d.rank());
    while free != 0 {
        let c = free.trailing_zeros() as Gen;
        free &= free - 1;
        let below = (1u64 << c) - 1;
        let next = 1u64 << c | d.commute_mask(c) & (blocked | below);
        word.push(c);
        f(word);
        walk(d, max_len, next, word, f);
        word.pop();
    }
}

/// Sphere sizes `#{|w| = l}` for `l = 0..=max_len`, by streaming.
pub fn sphere_sizes(d: &CoxeterDiagram, max_len: usize) -> Vec<u64> {
    let mut sizes = vec![0u64; max_len + 1];
    sizes[0] = 1;
    for_each_normal_word(d, max_len, |w| sizes[w.len()] += 1);
    sizes
}

/// `Σ_{|w|=l} ∏ z_{s_i}` over reduced words `s_1…s_l`, for `l = 0..=max_len`,
/// by dynamic programming over the blocked sets of the normal-word automaton.
/// The weights may be negative, so this covers products of two characters.
pub fn weighted_sphere_sums<K: Scalar>(d: &CoxeterDiagram, z: &[K], max_len: usize) -> Vec<K> {
    let full = full_mask(d.rank());
    let mut states: BTreeMap<u64, K> = BTreeMap::from([(0u64, K::one())]);
    let mut out = vec![K::one()];
    for _ in 0..max_len {
        let mut next: BTreeMap<u64, K> = BTreeMap::new();
        for (blocked, w) in &states {
            let mut free = !blocked & full;
            while free != 0 {
                let c = free.trailing_zeros() as Gen;
                free &= free - 1;
                let below = (1u64 << c) - 1;
                let b = 1u64 << c | d.commute_mask(c) & (blocked | below);
                let e = next.entry(b).or_insert_with(K::zero);
                *e = e.clone() + w.clone() * z[c as usize].clone();
            }
        }
        out.push(next.values().fold(K::zero(), |a, x| a + x.clone()));
        states = next;
    }
    out
}

/// Number of elements per multidegree (letter multiplicities), up to a
/// total length bound.
#[derive(Clone, Debug)]
pub struct MultidegreeCounts {
    rank: usize,
    max_len: usize,
    counts: Vec<u64>,
}

impl MultidegreeCounts {
    pub fn enumerate(d: &CoxeterDiagram, max_len: usize) -> Result<Self> {
        let rank = d.rank();
        let base = max_len + 1;
        let size = (base as u128).checked_pow(rank as u32).filter(|&s| s <= 1 << 26);
        let size = size.ok_or_else(|| {
            Error::InvalidArgument(format!("multidegree table too large for rank {rank}, length {max_len}"))
        })? as usize;
        let stride: Vec<usize> = (0..rank).map(|i| base.pow(i as u32)).collect();
        let mut counts = vec![0u64; size];
        counts[0] = 1;
        let mut key = 0usize;
        fn go(
            d: &CoxeterDiagram,
            max_len: usize,
            blocked: u64,
            key: &mut usize,
            stride: &[usize],
            depth: usize,
            counts: &mut [u64],
        ) {
            if depth == max_len {
                return;
            }
            let mut free = !blocked & full_mask(d.rank());
            while free != 0 {
                let c = free.trailing_zeros() as Gen;
                free &= free - 1;
                let below = (1u64 << c) - 1;
                let next = 1u64 << c | d.commute_mask(c) & (blocked | below);
                *key += stride[c as usize];
                counts[*key] += 1;
                go(d, max_len, next, key, stride, depth + 1, counts);
                *key -= stride[c as usize];
            }
        }
        go(d, max_len, 0, &mut key, &stride, 0, &mut counts);
        Ok(MultidegreeCounts { rank, max_len, counts })
    }

    /// Count of elements with the given letter multiplicities.
    pub fn get(&self, degree: &[usize]) -> u64 {
        assert_eq!(degree.len(), self.rank);
        if degree.iter().sum::<usize>() > self.max_len {
            return 0;
        }
        let base = self.max_len + 1;
        let key = degree.iter().rev().fold(0usize, |k, &e| k * base + e);
        self.counts[key]
    }

    /// Nonzero entries as (multidegree, count).
    pub fn entries(&self) -> Vec<(Vec<usize>, u64)> {
        let base = self.max_len + 1;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(mut k, &c)| {
                let mut deg = vec![0; self.rank];
                for e in deg.iter_mut() {
                    *e = k % base;
                    k /= base;
                }
                (deg, c)
            })
            .collect()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// `a_l(q) = Σ_{|w| = l} q_w`.
    pub fn sphere_weight(&self, q: &MultiParameter, l: usize) -> Rational {
        self.entries()
            .into_iter()
            .filter(|(deg, _)| deg.iter().sum::<usize>() == l)
            .fold(Rational::zero(), |acc, (deg, c)| {
                let mut term = Rational::from_integer(c.into());
                for (s, &e) in deg.iter().enumerate() {
                    term *= num_traits::pow(q.values()[s].clone(), e);
                }
                acc + term
            })
    }
}

/// `a_l(q) = Σ_{|w| = l} q_w`, exact.
pub fn sphere_weight(d: &CoxeterDiagram, q: &MultiParameter, l: usize) -> Rational {
    if l == 0 {
        return Rational::one();
    }
    let mut degrees: HashMap<Vec<u8>, u64> = HashMap::new();
    for_each_normal_word(d, l, |w| {
        if w.len() == l {
            let mut deg = vec![0u8; d.rank()];
            for &s in w {
                deg[s as usize] += 1;
            }
            *degrees.entry(deg).or_default() += 1;
        }
    });
    weigh(q, degrees)
}

fn weigh(q: &MultiParameter, degrees: HashMap<Vec<u8>, u64>) -> Rational {
    degrees.into_iter().fold(Rational::zero(), |acc, (deg, c)| {
        let mut term = Rational::from_integer(c.into());
        for (s, &e) in deg.iter().enumerate() {
            term *= num_traits::pow(q.values()[s].clone(), e as usize);
        }
        acc + term
    })
}

/// `Σ q_w` over `{|w| = l : g ≤ w⁻¹}`.
pub fn restricted_sphere_weight(d: &CoxeterDiagram, q: &MultiParameter, l: usize, g: &Elem) -> Rational {
    if l < g.len() {
        return Rational::zero();
    }
    if l == 0 {
        return Rational::one();
    }
    let mut degrees: HashMap<Vec<u8>, u64> = HashMap::new();
    for_each_normal_word(d, l, |w| {
        if w.len() == l {
            let w = Elem::from_normal_word(w.to_vec());
            if d.starts_with(g, &d.inverse(&w)) {
                let mut deg = vec![0u8; d.rank()];
                for &s in w.letters() {
                    deg[s as usize] += 1;
                }
                *degrees.entry(deg).or_default() += 1;
            }
        }
    });
    weigh(q, degrees)
}

/// `κ_w(l) = #{v ≤ w : |v| = l}`.
pub fn kappa(d: &CoxeterDiagram, w: &Elem, l: usize) -> u64 {
    kappa_profile(d, w).get(l).copied().unwrap_or(0)
}

/// `κ_w(l)` for every `l = 0..=|w|`.
pub fn kappa_profile(d: &CoxeterDiagram, w: &Elem) -> Vec<u64> {
    let mut out = vec![0u64; w.len() + 1];
    for v in d.prefixes(w) {
        out[v.len()] += 1;
    }
    out
}

/// Smallest `C` with `κ_w(l) ≤ C·max(l,1)^{rank−2}` over every `w` in the
/// ball and every `l` (with `l^0 = 1`).
pub fn fitted_kappa_constant(ball: &Ball) -> f64 {
    let d = ball.diagram();
    let k = d.rank() as i32 - 2;
    let mut best = 0.0f64;
    for w in ball.elements() {
        for (l, &c) in kappa_profile(d, w).iter().enumerate() {
            let scale = if k <= 0 { 1.0 } else { (l.max(1) as f64).powi(k) };
            best = best.max(c as f64 / scale);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::params::{int, rat};

    #[test]
    fn weighted_sums_match_enumeration() {
        for d in catalog::connected_corpus(4) {
            let z: Vec<Rational> = d.generators().map(|s| rat(if s % 2 == 0 { -1 } else { 2 }, s as i64 + 2)).collect();
            let mut brute = vec![Rational::zero(); 7];
            brute[0] = int(1);
            for_each_normal_word(&d, 6, |w| {
                brute[w.len()] += w.iter().fold(int(1), |a, &s| a * &z[s as usize]);
            });
            assert_eq!(weighted_sphere_sums(&d, &z, 6), brute);
        }
    }

    #[test]
    fn ball_examples() {
        let b = ball(&catalog::d_infinity(), 3).unwrap();
        assert_eq!(b.sphere_sizes(), [1, 2, 2, 2]);
        assert_eq!(b.len(), 7);
        let d = catalog::diagram_a();
        let b = ball(&d, 2).unwrap();
        assert_eq!(b.sphere_sizes(), [1, 3, 5]);
        let names: Vec<String> = b.sphere(2).iter().map(|w| d.format(w)).collect();
        assert_eq!(names, ["ab", "ac", "bc", "ca", "cb"]);
        assert_eq!(ball(&d, 0).unwrap().elements(), [Elem::identity()]);
        assert!(matches!(Ball::with_cap(&catalog::free_product(4), 8, 1000), Err(Error::BallTooLarge(1000))));
    }

    #[test]
    fn ball_tables() {
        let d = catalog::diagram_a();
        let b = ball(&d, 3).unwrap();
        for i in 0..b.len() {
            assert_eq!(b.left_descents(i), d.left_descents(b.element(i)));
            for s in d.generators() {
                let sw = d.left_mul(s, b.element(i));
                assert_eq!(b.left_mul(s, i), b.index_of(&sw));
                let ws = d.right_mul(b.element(i), s);
                assert_eq!(b.right_mul(i, s), b.index_of(&ws));
            }
            let above: Vec<usize> = (0..b.len()).filter(|&j| d.starts_with(b.element(i), b.element(j))).collect();
            assert_eq!(b.upper_set(i), above);
        }
    }

    #[test]
    fn streaming_matches_bfs() {
        for d in catalog::connected_corpus(4) {
            let b = ball(&d, 6).unwrap();
            let bfs: Vec<u64> = b.sphere_sizes().iter().map(|&x| x as u64).collect();
            assert_eq!(sphere_sizes(&d, 6), bfs);
            let mut words = vec![Elem::identity()];
            for_each_normal_word(&d, 6, |w| words.push(d.normal_form(w)));
            words.sort();
            let mut sorted = b.elements().to_vec();
            sorted.sort();
            assert_eq!(words, sorted);
        }
    }

    #[test]
    fn sphere_weight_examples() {
        let dinf = catalog::d_infinity();
        let one = MultiParameter::uniform(&dinf, int(1)).unwrap();
        for l in 1..6 {
            assert_eq!(sphere_weight(&dinf, &one, l), int(2));
        }
        let d = catalog::diagram_a();
        let one = MultiParameter::uniform(&d, int(1)).unwrap();
        let a: Vec<Rational> = (0..4).map(|l| sphere_weight(&d, &one, l)).collect();
        assert_eq!(a, [int(1), int(3), int(5), int(8)]);
        let q = MultiParameter::new(&d, vec![rat(1, 2), rat(1, 3), int(2)]).unwrap();
        let b = ball(&d, 4).unwrap();
        let counts = MultidegreeCounts::enumerate(&d, 4).unwrap();
        for l in 0..=4 {
            assert_eq!(sphere_weight(&d, &q, l), b.sphere_weight(&q, l).unwrap());
            assert_eq!(counts.sphere_weight(&q, l), b.sphere_weight(&q, l).unwrap());
        }
    }

    /// Independent oracle: all products `u·g⁻¹` with `|u| = l − |g|` that are
    /// length-additive.
    fn restricted_oracle(d: &CoxeterDiagram, q: &MultiParameter, l: usize, g: &Elem) -> Rational {
        if l < g.len() {
            return Rational::zero();
        }
        let b = ball(d, l - g.len()).unwrap();
        let ginv = d.inverse(g);
        let mut hits = BTreeSet::new();
        for u in b.sphere(l - g.len()) {
            let w = d.multiply(u, &ginv);
            if w.len() == l {
                hits.insert(w);
            }
        }
        hits.iter().fold(Rational::zero(), |acc, w| acc + q.weight(w.letters()))
    }

    #[test]
    fn restricted_weights() {
        let d = catalog::diagram_a();
        let one = MultiParameter::uniform(&d, int(1)).unwrap();
        let g = d.parse_elem("acbc").unwrap();
        assert_eq!(restricted_sphere_weight(&d, &one, 3, &g), int(0));
        let q = MultiParameter::new(&d, vec![rat(1, 2), rat(1, 3), int(2)]).unwrap();
        assert_eq!(restricted_sphere_weight(&d, &q, 4, &g), q.weight(d.inverse(&g).letters()));
        for l in 0..=7 {
            assert_eq!(restricted_sphere_weight(&d, &one, l, &g), restricted_oracle(&d, &one, l, &g));
            assert_eq!(restricted_sphere_weight(&d, &q, l, &g), restricted_oracle(&d, &q, l, &g));
        }
    }

    #[test]
    fn kappa_examples() {
        let d = catalog::diagram_a();
        let ab = d.parse_elem("ab").unwrap();
        assert_eq!(kappa_profile(&d, &ab), [1, 2, 1]);
        let w = d.parse_elem("abcab").unwrap();
        assert_eq!(kappa(&d, &w, 0), 1);
        assert_eq!(kappa(&d, &w, 5), 1);
    }

    #[test]
    fn reducible_counts_convolve() {
        let d = CoxeterDiagram::new(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]).unwrap();
        let full = sphere_sizes(&d, 8);
        let parts: Vec<Vec<u64>> = d.components().iter().map(|c| sphere_sizes(c, 8)).collect();
        let mut conv = vec![0u64; 9];
        for i in 0..=8 {
            for j in 0..=8 - i {
                conv[i + j] += parts[0][i] * parts[1][j];
            }
        }
        assert_eq!(full, conv);
    }
}
