//! Graph representation, instance parsing, and the terminal reduction
//! that rewrites an instance so every terminal has degree exactly two
//! and sits in a canonical position.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use thiserror::Error;

/// Simple undirected graph with vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize) -> Graph {
        Graph { n, edges: BTreeSet::new() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Inserts the edge `{u, v}`; returns false if it was already present.
    /// Panics on loops or out-of-range endpoints.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "loop edge {u}-{v}");
        assert!(
            (1..=self.n).contains(&u) && (1..=self.n).contains(&v),
            "edge {u}-{v} out of range 1..={}",
            self.n
        );
        self.edges.insert((u.min(v), u.max(v)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in sorted order, each as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Adjacency lists indexed `1..=n` (index 0 unused), each sorted.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }
}

/// Distinct terminal vertices, kept sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalSet {
    verts: Vec<usize>,
}

impl TerminalSet {
    /// Panics on duplicates; parse_instance reports them as errors instead.
    pub fn new(mut verts: Vec<usize>) -> TerminalSet {
        verts.sort_unstable();
        for w in verts.windows(2) {
            assert!(w[0] != w[1], "duplicate terminal {}", w[0]);
        }
        TerminalSet { verts }
    }

    pub fn k(&self) -> usize {
        self.verts.len()
    }

    pub fn verts(&self) -> &[usize] {
        &self.verts
    }

    pub fn contains(&self, v: usize) -> bool {
        self.verts.binary_search(&v).is_ok()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("missing problem line 'p kcycle <n> <m> <k>'")]
    MissingHeader,
    #[error("line {line}: expected 'p kcycle <n> <m> <k>', got '{content}'")]
    BadHeader { line: usize, content: String },
    #[error("line {line}: expected {expected}, got '{content}'")]
    BadLine { line: usize, expected: &'static str, content: String },
    #[error("line {line}: vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: loop edge at vertex {v}")]
    LoopEdge { line: usize, v: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: duplicate terminal {v}")]
    DuplicateTerminal { line: usize, v: usize },
    #[error("line {line}: unexpected extra content '{content}'")]
    TrailingContent { line: usize, content: String },
    #[error("unexpected end of input: missing {missing} '{kind}' line(s)")]
    UnexpectedEnd { kind: &'static str, missing: usize },
}

/// Parses the instance format: a `p kcycle <n> <m> <k>` problem line,
/// then exactly k `t <v>` lines, then exactly m `e <u> <v>` lines.
/// Vertices are 1-indexed; blank lines and lines starting with '#' are
/// skipped anywhere.
pub fn parse_instance(text: &str) -> Result<(Graph, TerminalSet), ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, header) = lines.next().ok_or(ParseError::MissingHeader)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || ParseError::BadHeader { line, content: header.to_string() };
    if fields.len() != 5 || fields[0] != "p" || fields[1] != "kcycle" {
        return Err(bad_header());
    }
    let n: usize = fields[2].parse().map_err(|_| bad_header())?;
    let m: usize = fields[3].parse().map_err(|_| bad_header())?;
    let k: usize = fields[4].parse().map_err(|_| bad_header())?;

    let parse_vertex = |line: usize, tok: &str, expected: &'static str, content: &str| {
        let v: usize = tok.parse().map_err(|_| ParseError::BadLine {
            line,
            expected,
            content: content.to_string(),
        })?;
        if !(1..=n).contains(&v) {
            return Err(ParseError::VertexOutOfRange { line, vertex: v, n });
        }
        Ok(v)
    };

    let mut terminals = Vec::with_capacity(k);
    for i in 0..k {
        let (line, content) = lines.next().ok_or(ParseError::UnexpectedEnd {
            kind: "t",
            missing: k - i,
        })?;
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 || fields[0] != "t" {
            return Err(ParseError::BadLine {
                line,
                expected: "'t <v>'",
                content: content.to_string(),
            });
        }
        let v = parse_vertex(line, fields[1], "'t <v>'", content)?;
        if terminals.contains(&v) {
            return Err(ParseError::DuplicateTerminal { line, v });
        }
        terminals.push(v);
    }

    let mut g = Graph::new(n);
    for i in 0..m {
        let (line, content) = lines.next().ok_or(ParseError::UnexpectedEnd {
            kind: "e",
            missing: m - i,
        })?;
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "e" {
            return Err(ParseError::BadLine {
                line,
                expected: "'e <u> <v>'",
                content: content.to_string(),
            });
        }
        let u = parse_vertex(line, fields[1], "'e <u> <v>'", content)?;
        let v = parse_vertex(line, fields[2], "'e <u> <v>'", content)?;
        if u == v {
            return Err(ParseError::LoopEdge { line, v });
        }
        if !g.add_edge(u, v) {
            return Err(ParseError::DuplicateEdge { line, u: u.min(v), v: u.max(v) });
        }
    }

    if let Some((line, content)) = lines.next() {
        return Err(ParseError::TrailingContent { line, content: content.to_string() });
    }

    Ok((g, TerminalSet::new(terminals)))
}

/// Canonical text form of an instance; parse_instance inverts it.
pub fn format_instance(g: &Graph, terminals: &TerminalSet) -> String {
    let mut out = String::new();
    writeln!(out, "p kcycle {} {} {}", g.n(), g.m(), terminals.k()).unwrap();
    for &v in terminals.verts() {
        writeln!(out, "t {v}").unwrap();
    }
    for (u, v) in g.edges() {
        writeln!(out, "e {u} {v}").unwrap();
    }
    out
}

/// True iff the graph contains a simple cycle of length at least 3,
/// i.e. some connected component is not a tree.
pub fn has_any_cycle(g: &Graph) -> bool {
    let mut seen = vec![false; g.n() + 1];
    let adj = g.adjacency();
    for start in 1..=g.n() {
        if seen[start] {
            continue;
        }
        let mut vertices = 0usize;
        let mut degree_sum = 0usize;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            vertices += 1;
            degree_sum += adj[v].len();
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if degree_sum / 2 >= vertices {
            return true;
        }
    }
    false
}

/// True iff some simple cycle of length at least 3 passes through `v`:
/// exactly when `v` has an incident non-bridge edge.
pub fn on_some_cycle(g: &Graph, v: usize) -> bool {
    assert!((1..=g.n()).contains(&v), "vertex {v} out of range");
    let bridges = bridge_edges(g);
    g.neighbors(v)
        .iter()
        .any(|&w| !bridges.contains(&(v.min(w), v.max(w))))
}

/// All bridge edges, via an iterative lowpoint computation.
fn bridge_edges(g: &Graph) -> BTreeSet<(usize, usize)> {
    let n = g.n();
    let adj = g.adjacency();
    let mut disc = vec![0usize; n + 1];
    let mut low = vec![0usize; n + 1];
    let mut timer = 0usize;
    let mut bridges = BTreeSet::new();

    for root in 1..=n {
        if disc[root] != 0 {
            continue;
        }
        // stack frames: (vertex, parent, index into adj[vertex])
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, 0, 0)];
        timer += 1;
        disc[root] = timer;
        low[root] = timer;
        while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
            if *idx < adj[v].len() {
                let w = adj[v][*idx];
                *idx += 1;
                if disc[w] == 0 {
                    timer += 1;
                    disc[w] = timer;
                    low[w] = timer;
                    stack.push((w, v, 0));
                } else if w != parent {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        bridges.insert((p.min(v), p.max(v)));
                    }
                }
            }
        }
    }
    bridges
}

/// Where a vertex of the reduced graph came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexOrigin {
    /// Fresh terminal standing in for an original terminal.
    Terminal { original: usize },
    /// One of the two copies of an original terminal; copy is 0 or 1.
    Twin { original: usize, copy: u8 },
    /// Original non-terminal, relabeled.
    Carried { original: usize },
    /// Midpoint of a subdivided terminal-terminal edge.
    Subdivision { u: usize, v: usize },
}

/// A reduced instance: terminals are exactly vertices `1..=k`, each of
/// degree 2 with neighborhood `{k+2i-1, k+2i}`, pairwise non-adjacent
/// and sharing no neighbors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedInstance {
    pub graph: Graph,
    pub k: usize,
    /// origin[i-1] describes reduced vertex i.
    pub origin: Vec<VertexOrigin>,
}

/// Rewrites `(g, K)` into canonical reduced form, preserving whether a
/// cycle through all terminals exists. Terminal-terminal edges are
/// subdivided first; then each terminal v is replaced by two copies
/// carrying v's neighborhood plus a fresh degree-2 terminal adjacent to
/// exactly those copies.
///
/// Vertex labels: fresh terminals take `1..=k` (ordered by original
/// terminal label), the copies of terminal i take `k+2i-1` and `k+2i`,
/// then original non-terminals in ascending order, then subdivision
/// vertices in sorted original-edge order.
pub fn reduce_terminals(g: &Graph, terminals: &TerminalSet) -> ReducedInstance {
    let k = terminals.k();
    assert!(k >= 2, "reduction requires at least 2 terminals");
    let n = g.n();

    let mut subdividers: Vec<(usize, usize)> = Vec::new();
    let mut inner_edges: Vec<(usize, usize)> = Vec::new();
    for (u, v) in g.edges() {
        if terminals.contains(u) && terminals.contains(v) {
            subdividers.push((u, v));
        } else {
            inner_edges.push((u, v));
        }
    }

    // term_index[v] = i for original terminal v (1-based); relabel[v] = new
    // label for original non-terminals and subdividers.
    let mut term_index = vec![0usize; n + 1];
    for (i, &v) in terminals.verts().iter().enumerate() {
        term_index[v] = i + 1;
    }
    let s = subdividers.len();
    let n_reduced = n + s + 2 * k;
    let mut origin = Vec::with_capacity(n_reduced);
    for &t in terminals.verts() {
        origin.push(VertexOrigin::Terminal { original: t });
    }
    for &t in terminals.verts() {
        origin.push(VertexOrigin::Twin { original: t, copy: 0 });
        origin.push(VertexOrigin::Twin { original: t, copy: 1 });
    }

    let mut relabel = vec![0usize; n + s + 1];
    let mut next = 3 * k;
    for v in 1..=n {
        if term_index[v] == 0 {
            next += 1;
            relabel[v] = next;
            origin.push(VertexOrigin::Carried { original: v });
        }
    }
    for (j, &(u, v)) in subdividers.iter().enumerate() {
        next += 1;
        relabel[n + 1 + j] = next;
        origin.push(VertexOrigin::Subdivision { u, v });
    }
    debug_assert_eq!(next, n_reduced);
    debug_assert_eq!(origin.len(), n_reduced);

    let mut reduced = Graph::new(n_reduced);
    for i in 1..=k {
        reduced.add_edge(i, k + 2 * i - 1);
        reduced.add_edge(i, k + 2 * i);
    }
    // twin_of(i, c) = label of copy c of terminal i
    let twin = |i: usize, c: usize| k + 2 * i - 1 + c;
    let connect = |reduced: &mut Graph, a: usize, b: usize| {
        // a, b are vertices of the subdivided graph; terminals expand to twins
        match (term_index_of(a, n, &term_index), term_index_of(b, n, &term_index)) {
            (Some(i), None) => {
                let nb = relabel_of(b, &relabel);
                reduced.add_edge(twin(i, 0), nb);
                reduced.add_edge(twin(i, 1), nb);
            }
            (None, Some(j)) => {
                let na = relabel_of(a, &relabel);
                reduced.add_edge(na, twin(j, 0));
                reduced.add_edge(na, twin(j, 1));
            }
            (None, None) => {
                reduced.add_edge(relabel_of(a, &relabel), relabel_of(b, &relabel));
            }
            (Some(_), Some(_)) => unreachable!("terminal-terminal edge after subdivision"),
        }
    };
    for &(u, v) in &inner_edges {
        connect(&mut reduced, u, v);
    }
    for (j, &(u, v)) in subdividers.iter().enumerate() {
        let w = n + 1 + j;
        connect(&mut reduced, u, w);
        connect(&mut reduced, w, v);
    }

    let out = ReducedInstance { graph: reduced, k, origin };
    debug_assert!(out.check_invariants());
    out
}

fn term_index_of(v: usize, n: usize, term_index: &[usize]) -> Option<usize> {
    if v <= n && term_index[v] != 0 {
        Some(term_index[v])
    } else {
        None
    }
}

fn relabel_of(v: usize, relabel: &[usize]) -> usize {
    debug_assert_ne!(relabel[v], 0);
    relabel[v]
}

impl ReducedInstance {
    /// Terminals 1..=k have degree 2 with neighborhood {k+2i-1, k+2i};
    /// no terminal-terminal edges; no shared neighbors.
    pub fn check_invariants(&self) -> bool {
        let k = self.k;
        for i in 1..=k {
            if self.graph.neighbors(i) != vec![k + 2 * i - 1, k + 2 * i] {
                return false;
            }
        }
        for i in 1..=k {
            for j in (i + 1)..=k {
                if self.graph.has_edge(i, j) {
                    return false;
                }
            }
        }
        true
    }
}
