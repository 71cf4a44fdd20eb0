//! Deterministic instance generators: seeded random graphs, seeded
//! terminal sampling, and small named families used in tests and docs.

use crate::field::mix64;
use crate::graph::{Graph, TerminalSet};

/// Random graph on n vertices where each pair is an edge independently
/// with probability p. The edge set is a pure function of (n, p, seed).
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&p), "probability {p} out of range");
    let threshold = (p * 18_446_744_073_709_551_616.0) as u128;
    let mut g = Graph::new(n);
    let mut pair = 0u64;
    for u in 1..=n {
        for v in (u + 1)..=n {
            if u128::from(mix64(seed, pair)) < threshold {
                g.add_edge(u, v);
            }
            pair += 1;
        }
    }
    g
}

/// Random instance: a G(n, p) graph plus k sampled terminals, with the
/// edge and terminal streams split off the one seed.
pub fn instance(n: usize, p: f64, k: usize, seed: u64) -> (Graph, TerminalSet) {
    (gnp(n, p, mix64(seed, 0)), sample_terminals(n, k, mix64(seed, 1)))
}

/// Family graph plus k sampled terminals, seeded like `instance`.
pub fn family_instance(f: Family, n: usize, k: usize, seed: u64) -> (Graph, TerminalSet) {
    let g = family(f, n);
    let t = sample_terminals(g.n(), k, mix64(seed, 1));
    (g, t)
}

/// k distinct vertices of 1..=n, chosen by a seeded partial shuffle.
pub fn sample_terminals(n: usize, k: usize, seed: u64) -> TerminalSet {
    assert!(k <= n, "cannot sample {k} terminals from {n} vertices");
    let mut pool: Vec<usize> = (1..=n).collect();
    let mut picked = Vec::with_capacity(k);
    for i in 0..k {
        let j = (mix64(seed, i as u64) % pool.len() as u64) as usize;
        picked.push(pool.swap_remove(j));
    }
    TerminalSet::new(picked)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Cycle on n vertices.
    Cycle,
    /// Two triangles sharing one vertex: 5 vertices, no cycle through
    /// both outer pairs.
    Bowtie,
    /// Two disjoint triangles on 6 vertices.
    TwoTriangles,
    /// Square grid with side n, so n*n vertices.
    Grid,
}

impl Family {
    pub fn parse(name: &str) -> Option<Family> {
        match name {
            "cycle" => Some(Family::Cycle),
            "bowtie" => Some(Family::Bowtie),
            "two-triangles" => Some(Family::TwoTriangles),
            "grid" => Some(Family::Grid),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Cycle => "cycle",
            Family::Bowtie => "bowtie",
            Family::TwoTriangles => "two-triangles",
            Family::Grid => "grid",
        }
    }
}

/// Builds a named family graph. `n` is the cycle length or grid side;
/// the bowtie and two-triangles graphs have fixed size and ignore it.
pub fn family(f: Family, n: usize) -> Graph {
    match f {
        Family::Cycle => {
            assert!(n >= 3, "cycle needs at least 3 vertices");
            let mut g = Graph::new(n);
            for v in 1..n {
                g.add_edge(v, v + 1);
            }
            g.add_edge(n, 1);
            g
        }
        Family::Bowtie => {
            Graph::from_edges(5, &[(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)])
        }
        Family::TwoTriangles => {
            Graph::from_edges(6, &[(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
        }
        Family::Grid => {
            assert!(n >= 1, "grid needs positive side");
            let at = |r: usize, c: usize| r * n + c + 1;
            let mut g = Graph::new(n * n);
            for r in 0..n {
                for c in 0..n {
                    if c + 1 < n {
                        g.add_edge(at(r, c), at(r, c + 1));
                    }
                    if r + 1 < n {
                        g.add_edge(at(r, c), at(r + 1, c));
                    }
                }
            }
            g
        }
    }
}
