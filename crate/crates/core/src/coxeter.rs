//! Right-angled Coxeter systems: diagrams, canonical words and the weak
//! right Bruhat order.
//!
//! Generators are addressed by their position in the diagram (`Gen`), which is
//! also the total order used for ShortLex comparisons. Every [`Elem`] holds
//! the lexicographically least reduced word of its group element, so equality,
//! hashing and ordering of elements are plain operations on letter vectors.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a generator inside its diagram.
pub type Gen = u8;

/// Maximum supported rank (commuting rows are stored as `u64` masks).
pub const MAX_RANK: usize = 64;

/// A group element stored as its ShortLex-least reduced word.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Elem(Vec<Gen>);

impl Elem {
    pub fn identity() -> Self {
        Elem(Vec::new())
    }

    /// Wraps a word that the caller guarantees to be in normal form.
    pub(crate) fn from_normal_word(word: Vec<Gen>) -> Self {
        Elem(word)
    }

    pub fn letters(&self) -> &[Gen] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Bitmask of the letters occurring in the word.
    pub fn support(&self) -> u64 {
        self.0.iter().fold(0u64, |m, &g| m | (1u64 << g))
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Elem{:?}", self.0)
    }
}

/// ShortLex: shorter words first, then lexicographic in generator order.
impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A right-angled Coxeter diagram: generator names plus the set of commuting
/// pairs (`m_st = 2`). Every other pair of distinct generators has `m_st = ∞`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoxeterDiagram {
    names: Vec<String>,
    commute: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct DiagramFile {
    generators: Vec<String>,
    #[serde(default)]
    commuting: Vec<Vec<String>>,
}

impl fmt::Debug for CoxeterDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterDiagram({})", self.to_json())
    }
}

impl CoxeterDiagram {
    /// Builds a diagram from generator names and commuting pairs given by name.
    pub fn new<S: AsRef<str>>(generators: &[S], commuting: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = generators.iter().map(|s| s.as_ref().to_string()).collect();
        let mut pairs = Vec::with_capacity(commuting.len());
        for (a, b) in commuting {
            pairs.push((a.as_ref().to_string(), b.as_ref().to_string()));
        }
        Self::build(names, &pairs)
    }

    fn build(names: Vec<String>, pairs: &[(String, String)]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::EmptyDiagram);
        }
        if names.len() > MAX_RANK {
            return Err(Error::RankTooLarge(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.contains('.') || n.chars().any(char::is_whitespace) {
                return Err(Error::MalformedDiagram(format!("invalid generator name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::DuplicateGenerator(n.clone()));
            }
        }
        let mut commute = vec![0u64; names.len()];
        let find = |n: &str| {
            names
                .iter()
                .position(|x| x == n)
                .ok_or_else(|| Error::UnknownGenerator(n.to_string()))
        };
        for (a, b) in pairs {
            let i = find(a)?;
            let j = find(b)?;
            if i == j {
                return Err(Error::SelfPair(a.clone()));
            }
            commute[i] |= 1 << j;
            commute[j] |= 1 << i;
        }
        Ok(CoxeterDiagram { names, commute })
    }

    /// Builds a diagram from generator names and commuting pairs given by index.
    pub fn from_indices<S: AsRef<str>>(generators: &[S], commuting: &[(usize, usize)]) -> Result<Self> {
        let names: Vec<String> = generators.iter().map(|s| s.as_ref().to_string()).collect();
        let pairs: Vec<(String, String)> = commuting
            .iter()
            .map(|&(i, j)| {
                let get = |k: usize| {
                    names
                        .get(k)
                        .cloned()
                        .ok_or_else(|| Error::UnknownGenerator(format!("#{k}")))
                };
                Ok((get(i)?, get(j)?))
            })
            .collect::<Result<_>>()?;
        Self::build(names, &pairs)
    }

    /// Parses the JSON diagram format
    /// `{"generators": ["a","b","c"], "commuting": [["a","b"]]}`.
    pub fn parse_json(text: &str) -> Result<Self> {
        let file: DiagramFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedDiagram(e.to_string()))?;
        let mut pairs = Vec::with_capacity(file.commuting.len());
        for p in &file.commuting {
            if p.len() != 2 {
                return Err(Error::MalformedDiagram(format!(
                    "commuting entry must have two generators, got {}",
                    p.len()
                )));
            }
            pairs.push((p[0].clone(), p[1].clone()));
        }
        Self::build(file.generators, &pairs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("diagram serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file()).expect("diagram serializes")
    }

    fn to_file(&self) -> DiagramFile {
        let mut commuting = Vec::new();
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                if self.commutes(i as Gen, j as Gen) {
                    commuting.push(vec![self.names[i].clone(), self.names[j].clone()]);
                }
            }
        }
        DiagramFile {
            generators: self.names.clone(),
            commuting,
        }
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g as usize]
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> {
        (0..self.rank() as u32).map(|g| g as Gen)
    }

    pub fn index_of(&self, name: &str) -> Option<Gen> {
        self.names.iter().position(|n| n == name).map(|i| i as Gen)
    }

    /// `true` iff `s ≠ t` and `m_st = 2`.
    #[inline]
    pub fn commutes(&self, s: Gen, t: Gen) -> bool {
        self.commute[s as usize] >> t & 1 == 1
    }

    /// Mask of generators commuting with `s` (never contains `s`).
    #[inline]
    pub fn commute_mask(&self, s: Gen) -> u64 {
        self.commute[s as usize]
    }

    fn full_mask(&self) -> u64 {
        if self.rank() == 64 {
            u64::MAX
        } else {
            (1u64 << self.rank()) - 1
        }
    }

    /// Mask of generators `t` with `m_st = ∞`.
    pub fn infinity_mask(&self, s: Gen) -> u64 {
        self.full_mask() & !self.commute[s as usize] & !(1u64 << s)
    }

    /// Connectivity of the graph whose edges are the pairs with `m_st = ∞`.
    pub fn is_irreducible(&self) -> bool {
        self.component_masks().len() == 1
    }

    /// Generator masks of the connected components of the `m_st = ∞` graph,
    /// ordered by their smallest generator.
    pub fn component_masks(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in self.generators() {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << s;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                let mut nb = self.infinity_mask(x) & !comp;
                while nb != 0 {
                    let t = nb.trailing_zeros() as Gen;
                    nb &= nb - 1;
                    comp |= 1 << t;
                    stack.push(t);
                }
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    /// Irreducible components as sub-diagrams with the induced relation.
    pub fn components(&self) -> Vec<CoxeterDiagram> {
        self.component_masks()
            .into_iter()
            .map(|m| self.sub_diagram(m))
            .collect()
    }

    /// The special subsystem on the generators in `mask`, keeping their order.
    pub fn sub_diagram(&self, mask: u64) -> CoxeterDiagram {
        let keep: Vec<usize> = (0..self.rank()).filter(|&i| mask >> i & 1 == 1).collect();
        let names = keep.iter().map(|&i| self.names[i].clone()).collect();
        let commute = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .enumerate()
                    .filter(|(_, &j)| self.commute[i] >> j & 1 == 1)
                    .fold(0u64, |m, (k, _)| m | 1 << k)
            })
            .collect();
        CoxeterDiagram { names, commute }
    }

    /// All sets of pairwise commuting generators, the empty set included.
    pub fn cliques(&self) -> Vec<u64> {
        let mut out = vec![0u64];
        self.extend_cliques(0, 0, self.full_mask(), &mut out);
        out.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
        out
    }

    fn extend_cliques(&self, start: usize, current: u64, allowed: u64, out: &mut Vec<u64>) {
        for s in start..self.rank() {
            if allowed >> s & 1 == 1 {
                let next = current | 1 << s;
                out.push(next);
                self.extend_cliques(s + 1, next, allowed & self.commute[s], out);
            }
        }
    }

    // ----- words -------------------------------------------------------

    /// Parses a word into letters without reducing it. Accepts `e` (or the
    /// empty string) for the identity, dot- or whitespace-separated names, and
    /// plain concatenation when every generator name is a single character.
    pub fn parse_letters(&self, text: &str) -> Result<Vec<Gen>> {
        let t = text.trim();
        if t.is_empty() || (t == "e" && self.index_of("e").is_none()) {
            return Ok(Vec::new());
        }
        let lookup = |n: &str| {
            self.index_of(n)
                .ok_or_else(|| Error::UnknownGenerator(n.to_string()))
        };
        if t.contains('.') || t.contains(char::is_whitespace) {
            return t
                .split(|c: char| c == '.' || c.is_whitespace())
                .filter(|p| !p.is_empty())
                .map(lookup)
                .collect();
        }
        if let Some(g) = self.index_of(t) {
            return Ok(vec![g]);
        }
        if self.names.iter().all(|n| n.chars().count() == 1) {
            return t.chars().map(|c| lookup(&c.to_string())).collect();
        }
        Err(Error::MalformedWord(text.to_string()))
    }

    /// Parses and normalizes a word.
    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        Ok(self.normal_form(&self.parse_letters(text)?))
    }

    /// Renders an element: `e` for the identity, concatenated names when all
    /// names are single characters, dot-separated names otherwise.
    pub fn format(&self, w: &Elem) -> String {
        self.format_letters(w.letters())
    }

    pub fn format_letters(&self, letters: &[Gen]) -> String {
        if letters.is_empty() {
            return "e".to_string();
        }
        let sep = if self.names.iter().all(|n| n.chars().count() == 1) {
            ""
        } else {
            "."
        };
        letters
            .iter()
            .map(|&g| self.names[g as usize].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Deletes cancelling letter pairs: a letter cancels against an earlier
    /// equal letter when everything in between commutes with it.
    pub fn reduce(&self, letters: &[Gen]) -> Vec<Gen> {
        let mut out: Vec<Gen> = Vec::with_capacity(letters.len());
        for &s in letters {
            let cm = self.commute[s as usize];
            let mut cancel = None;
            for j in (0..out.len()).rev() {
                let t = out[j];
                if t == s {
                    cancel = Some(j);
                    break;
                }
                if cm >> t & 1 == 0 {
                    break;
                }
            }
            match cancel {
                Some(j) => {
                    out.remove(j);
                }
                None => out.push(s),
            }
        }
        out
    }

    /// Lexicographically least rearrangement of a reduced word using only
    /// commutations (greedy choice of the smallest available letter).
    fn lex_min(&self, reduced: Vec<Gen>) -> Vec<Gen> {
        let n = reduced.len();
        let mut used = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut best: Option<usize> = None;
            // letters before the candidate that are still unused must all commute with it
            let mut blocking = 0u64;
            for i in 0..n {
                if used[i] {
                    continue;
                }
                let s = reduced[i];
                let free = blocking & !self.commute[s as usize] == 0;
                if free && best.is_none_or(|b| s < reduced[b]) {
                    best = Some(i);
                }
                blocking |= 1 << s;
            }
            let b = best.expect("some letter is always available");
            used[b] = true;
            out.push(reduced[b]);
        }
        out
    }

    /// The ShortLex-least reduced word of the element represented by `letters`.
    pub fn normal_form(&self, letters: &[Gen]) -> Elem {
        Elem(self.lex_min(self.reduce(letters)))
    }

    pub fn multiply(&self, v: &Elem, w: &Elem) -> Elem {
        let mut letters = Vec::with_capacity(v.len() + w.len());
        letters.extend_from_slice(&v.0);
        letters.extend_from_slice(&w.0);
        self.normal_form(&letters)
    }

    pub fn inverse(&self, w: &Elem) -> Elem {
        let rev: Vec<Gen> = w.0.iter().rev().copied().collect();
        Elem(self.lex_min(rev))
    }

    pub fn generator(&self, s: Gen) -> Elem {
        Elem(vec![s])
    }

    pub fn left_mul(&self, s: Gen, w: &Elem) -> Elem {
        let mut letters = Vec::with_capacity(w.len() + 1);
        letters.push(s);
        letters.extend_from_slice(&w.0);
        self.normal_form(&letters)
    }

    pub fn right_mul(&self, w: &Elem, s: Gen) -> Elem {
        let mut letters = w.0.clone();
        letters.push(s);
        self.normal_form(&letters)
    }

    /// Mask of left descents: generators `s` with `s ≤ w`.
    pub fn left_descents(&self, w: &Elem) -> u64 {
        let mut before = 0u64;
        let mut out = 0u64;
        for &s in &w.0 {
            if before & !self.commute[s as usize] == 0 {
                out |= 1 << s;
            }
            before |= 1 << s;
        }
        out
    }

    /// Mask of right descents: generators `s` with `|ws| < |w|`.
    pub fn right_descents(&self, w: &Elem) -> u64 {
        let mut after = 0u64;
        let mut out = 0u64;
        for &s in w.0.iter().rev() {
            if after & !self.commute[s as usize] == 0 {
                out |= 1 << s;
            }
            after |= 1 << s;
        }
        out
    }

    /// `s ≤ w` in the weak right Bruhat order.
    pub fn is_left_descent(&self, s: Gen, w: &Elem) -> bool {
        self.left_descents(w) >> s & 1 == 1
    }

    /// `v ≤ w`, i.e. `|v⁻¹w| = |w| − |v|`.
    pub fn starts_with(&self, v: &Elem, w: &Elem) -> bool {
        if v.len() > w.len() {
            return false;
        }
        let vinv = self.inverse(v);
        self.multiply(&vinv, w).len() == w.len() - v.len()
    }

    /// Greatest common prefix in the weak right order.
    pub fn meet(&self, v: &Elem, w: &Elem) -> Elem {
        let mut common = Vec::new();
        let mut vr = v.clone();
        let mut wr = w.clone();
        loop {
            let shared = self.left_descents(&vr) & self.left_descents(&wr);
            if shared == 0 {
                break;
            }
            let s = shared.trailing_zeros() as Gen;
            common.push(s);
            vr = self.left_mul(s, &vr);
            wr = self.left_mul(s, &wr);
        }
        self.normal_form(&common)
    }

    /// Least common upper bound in the weak right order, if one exists.
    pub fn join(&self, v: &Elem, w: &Elem) -> Option<Elem> {
        let m = self.meet(v, w);
        let minv = self.inverse(&m);
        let vr = self.multiply(&minv, v);
        let wr = self.multiply(&minv, w);
        let (sv, sw) = (vr.support(), wr.support());
        if sv & sw != 0 {
            return None;
        }
        let mut x = sv;
        while x != 0 {
            let s = x.trailing_zeros() as Gen;
            x &= x - 1;
            if sw & !self.commute[s as usize] != 0 {
                return None;
            }
        }
        Some(self.multiply(&self.multiply(&m, &vr), &wr))
    }

    /// `sw = ws`.
    pub fn centralizes(&self, s: Gen, w: &Elem) -> bool {
        self.left_mul(s, w) == self.right_mul(w, s)
    }

    /// All prefixes `v ≤ w`, in ShortLex order.
    pub fn prefixes(&self, w: &Elem) -> Vec<Elem> {
        let mut layer = vec![Elem::identity()];
        let mut all = vec![Elem::identity()];
        for _ in 0..w.len() {
            let mut next = Vec::new();
            for v in &layer {
                // v·s ≤ w iff s is a left descent of v⁻¹w
                let rest = self.multiply(&self.inverse(v), w);
                let mut d = self.left_descents(&rest);
                while d != 0 {
                    let s = d.trailing_zeros() as Gen;
                    d &= d - 1;
                    next.push(self.right_mul(v, s));
                }
            }
            next.sort();
            next.dedup();
            all.extend(next.iter().cloned());
            layer = next;
        }
        all
    }

    /// A closed path in the `m_st = ∞` graph visiting every generator,
    /// obtained from the depth-first tour of a spanning tree with the final
    /// return to the root dropped. Absent for rank < 2 or reducible diagrams.
    pub fn find_covering_closed_path(&self) -> Option<Elem> {
        if self.rank() < 2 || !self.is_irreducible() {
            return None;
        }
        let mut tour = Vec::new();
        let mut visited = 0u64;
        self.dfs_tour(0, &mut visited, &mut tour);
        tour.pop();
        Some(self.normal_form(&tour))
    }

    fn dfs_tour(&self, s: Gen, visited: &mut u64, tour: &mut Vec<Gen>) {
        *visited |= 1 << s;
        tour.push(s);
        for t in self.generators() {
            if *visited >> t & 1 == 0 && self.infinity_mask(s) >> t & 1 == 1 {
                self.dfs_tour(t, visited, tour);
                tour.push(s);
            }
        }
    }

    /// `true` iff the word is a path (consecutive letters joined by `∞`), is
    /// closed (first and last joined by `∞`) and uses every generator.
    pub fn is_covering_closed_path(&self, letters: &[Gen]) -> bool {
        let n = letters.len();
        if n < 2 {
            return false;
        }
        let inf = |a: Gen, b: Gen| self.infinity_mask(a) >> b & 1 == 1;
        letters.windows(2).all(|p| inf(p[0], p[1]))
            && inf(letters[0], letters[n - 1])
            && letters.iter().fold(0u64, |m, &g| m | 1 << g) == self.full_mask()
    }
}
