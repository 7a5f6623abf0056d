//! Named diagrams used throughout the examples and test suites.

use crate::coxeter::CoxeterDiagram;

/// Single-character generator names; `e` is skipped since it denotes the identity.
const ALPHABET: &[u8] = b"abcdfghijkmnpqrstuvwxyz";

pub fn generator_names(rank: usize) -> Vec<String> {
    assert!(rank <= ALPHABET.len(), "catalog names cover rank ≤ {}", ALPHABET.len());
    ALPHABET[..rank].iter().map(|&c| (c as char).to_string()).collect()
}

fn with_pairs(rank: usize, pairs: &[(usize, usize)]) -> CoxeterDiagram {
    CoxeterDiagram::from_indices(&generator_names(rank), pairs).expect("catalog diagram is valid")
}

/// Infinite dihedral group: two generators, `m_ab = ∞`.
pub fn d_infinity() -> CoxeterDiagram {
    free_product(2)
}

/// Three generators with only `a` and `b` commuting.
pub fn diagram_a() -> CoxeterDiagram {
    with_pairs(3, &[(0, 1)])
}

/// Free product of `n` copies of ℤ/2 (no commuting pairs).
pub fn free_product(n: usize) -> CoxeterDiagram {
    with_pairs(n, &[])
}

/// `n`-cycle of commuting pairs; `cycle(5)` is the right-angled pentagon group.
pub fn cycle(n: usize) -> CoxeterDiagram {
    let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    with_pairs(n, &pairs)
}

pub fn pentagon() -> CoxeterDiagram {
    cycle(5)
}

/// Every irreducible right-angled diagram with at most `max_rank` generators,
/// one representative per isomorphism class.
pub fn connected_corpus(max_rank: usize) -> Vec<CoxeterDiagram> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let mut seen = std::collections::BTreeSet::new();
        for mask in 0u32..(1 << edges.len()) {
            let chosen: Vec<(usize, usize)> = edges
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let key = canonical_key(n, &chosen);
            if !seen.insert(key) {
                continue;
            }
            let d = with_pairs(n, &chosen);
            if d.is_irreducible() {
                out.push(d);
            }
        }
    }
    out
}

/// Lexicographically least adjacency bitstring over all vertex relabelings.
fn canonical_key(n: usize, edges: &[(usize, usize)]) -> u64 {
    let mut adj = vec![vec![false; n]; n];
    for &(i, j) in edges {
        adj[i][j] = true;
        adj[j][i] = true;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        let mut key = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                key = key << 1 | adj[perm[i]][perm[j]] as u64;
            }
        }
        best = best.min(key);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_sizes_match_connected_graph_counts() {
        // irreducible diagrams ↔ graphs whose complement is connected:
        // 1, 1, 2, 6, 21 classes on 1..5 vertices
        let counts: Vec<usize> = (1..=5)
            .map(|n| connected_corpus(n).iter().filter(|d| d.rank() == n).count())
            .collect();
        assert_eq!(counts, [1, 1, 2, 6, 21]);
    }

    #[test]
    fn named_diagrams() {
        assert_eq!(pentagon().cliques().len(), 11);
        assert!(diagram_a().commutes(0, 1));
        assert!(!diagram_a().commutes(0, 2));
        assert_eq!(d_infinity().rank(), 2);
    }
}
