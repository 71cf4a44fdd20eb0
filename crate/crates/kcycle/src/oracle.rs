//! Independent reference implementations used to validate the algebraic
//! pipeline: exhaustive cycle search, exhaustive matching search, cofactor
//! determinants, and a tiny symbolic polynomial model of the identity
//! behind the subset-sum detectors. Everything here favors obviousness
//! over speed and shares no search logic with the modules under test.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use crate::field::{mix64, FieldElement};
use crate::graph::{Graph, TerminalSet};
use crate::linalg::DenseMatrix;
use crate::solver::subset_zero_sum;

/// Exhaustive test for a simple cycle of length at least 3 visiting every
/// terminal. Intended for small graphs (roughly n <= 18).
pub fn brute_kcycle(g: &Graph, terminals: &TerminalSet) -> bool {
    let n = g.n();
    let adj = g.adjacency();
    let mut required = vec![false; n + 1];
    for &t in terminals.verts() {
        required[t] = true;
    }
    if terminals.k() == 0 {
        // Each cycle is found from its smallest vertex, with larger
        // vertices only on the rest of the path.
        return (1..=n).any(|s| {
            let search = CycleSearch { adj: &adj, start: s, required: &required, min_vertex: s };
            let mut visited = vec![false; n + 1];
            visited[s] = true;
            search.extend(s, 1, &mut visited, 0)
        });
    }
    let start = terminals.verts()[0];
    let search = CycleSearch { adj: &adj, start, required: &required, min_vertex: 1 };
    let mut visited = vec![false; n + 1];
    visited[start] = true;
    search.extend(start, 1, &mut visited, terminals.k() - 1)
}

struct CycleSearch<'a> {
    adj: &'a [Vec<usize>],
    start: usize,
    required: &'a [bool],
    /// Lower bound on vertices allowed beyond the start; canonicalizes
    /// the unconstrained search so each cycle is tried once.
    min_vertex: usize,
}

impl CycleSearch<'_> {
    /// Tries to grow the simple path ending at `cur` into a cycle back
    /// to the start that picks up `remaining` more required vertices.
    fn extend(&self, cur: usize, depth: usize, visited: &mut Vec<bool>, remaining: usize) -> bool {
        for &w in &self.adj[cur] {
            if w == self.start && depth >= 3 && remaining == 0 {
                return true;
            }
            if w < self.min_vertex || visited[w] {
                continue;
            }
            let need = remaining - usize::from(self.required[w]);
            visited[w] = true;
            let viable =
                need == 0 || required_reachable(self.adj, w, visited, self.required, need);
            if viable && self.extend(w, depth + 1, visited, need) {
                return true;
            }
            visited[w] = false;
        }
        false
    }
}

/// Every required vertex still missing from the path must at least be
/// reachable from `from` without touching the path; prune otherwise.
fn required_reachable(
    adj: &[Vec<usize>],
    from: usize,
    visited: &[bool],
    required: &[bool],
    mut need: usize,
) -> bool {
    let mut seen = visited.to_vec();
    let mut stack = vec![from];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                if required[w] {
                    need -= 1;
                    if need == 0 {
                        return true;
                    }
                }
                stack.push(w);
            }
        }
    }
    false
}

/// Exhaustive test for a perfect matching, pairing the lowest unmatched
/// vertex first. Intended for small graphs.
pub fn brute_matching(g: &Graph) -> bool {
    let n = g.n();
    if n % 2 == 1 {
        return false;
    }
    let adj = g.adjacency();
    let mut matched = vec![false; n + 1];
    pair_up(&adj, &mut matched, n)
}

fn pair_up(adj: &[Vec<usize>], matched: &mut Vec<bool>, n: usize) -> bool {
    let u = match (1..=n).find(|&v| !matched[v]) {
        None => return true,
        Some(u) => u,
    };
    matched[u] = true;
    for &v in &adj[u] {
        if !matched[v] {
            matched[v] = true;
            if pair_up(adj, matched, n) {
                return true;
            }
            matched[v] = false;
        }
    }
    matched[u] = false;
    false
}

/// Determinant by first-row cofactor expansion. In characteristic 2 the
/// expansion needs no signs. Factorial cost, so n is capped at 8.
pub fn cofactor_det(m: &DenseMatrix) -> FieldElement {
    let n = m.n();
    assert!(n <= 8, "cofactor expansion is limited to n <= 8, got {n}");
    let rows: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| (0..n).map(|j| m[(i, j)]).collect())
        .collect();
    expand(&rows)
}

fn expand(rows: &[Vec<FieldElement>]) -> FieldElement {
    let n = rows.len();
    if n == 0 {
        return FieldElement::ONE;
    }
    let mut acc = FieldElement::ZERO;
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<FieldElement>> = rows[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        acc += rows[0][j] * expand(&minor);
    }
    acc
}

/// Largest exponent a single variable may reach; keeps term keys small
/// and catches runaway products in tests.
pub const MAX_VAR_DEGREE: u8 = 8;

/// Sparse multivariate polynomial over the 64-bit binary field, with
/// variables numbered 1..=nvars. Terms map exponent vectors to nonzero
/// coefficients; the zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u8>, FieldElement>,
}

impl SmallPolynomial {
    pub fn zero(nvars: usize) -> SmallPolynomial {
        SmallPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: FieldElement) -> SmallPolynomial {
        let mut p = SmallPolynomial::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn variable(nvars: usize, i: usize) -> SmallPolynomial {
        assert!((1..=nvars).contains(&i), "variable {i} out of range");
        let mut exps = vec![0; nvars];
        exps[i - 1] = 1;
        let mut p = SmallPolynomial::zero(nvars);
        p.add_term(exps, FieldElement::ONE);
        p
    }

    pub fn monomial(nvars: usize, exps: &[u8], c: FieldElement) -> SmallPolynomial {
        assert_eq!(exps.len(), nvars);
        let mut p = SmallPolynomial::zero(nvars);
        p.add_term(exps.to_vec(), c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u8]) -> FieldElement {
        self.terms.get(exps).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u8], FieldElement)> + '_ {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    /// Adds `c` to the coefficient of the given exponent vector; entries
    /// that cancel to zero are dropped so equality stays structural.
    pub fn add_term(&mut self, exps: Vec<u8>, c: FieldElement) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let merged = *o.get() + c;
                if merged.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = merged;
                }
            }
        }
    }

    /// The polynomial with every listed variable set to zero: terms that
    /// mention one of them vanish, the rest survive unchanged.
    pub fn zero_vars(&self, vars: &[usize]) -> SmallPolynomial {
        let mut out = SmallPolynomial::zero(self.nvars);
        'term: for (exps, &c) in &self.terms {
            for &v in vars {
                if exps[v - 1] > 0 {
                    continue 'term;
                }
            }
            out.add_term(exps.clone(), c);
        }
        out
    }

    /// The terms divisible by the product of all listed variables, kept
    /// with their full exponents.
    pub fn filter_divisible(&self, vars: &[usize]) -> SmallPolynomial {
        let mut out = SmallPolynomial::zero(self.nvars);
        'term: for (exps, &c) in &self.terms {
            for &v in vars {
                if exps[v - 1] == 0 {
                    continue 'term;
                }
            }
            out.add_term(exps.clone(), c);
        }
        out
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> FieldElement {
        assert_eq!(point.len(), self.nvars);
        let mut acc = FieldElement::ZERO;
        for (exps, &c) in &self.terms {
            let mut term = c;
            for (i, &e) in exps.iter().enumerate() {
                term *= point[i].pow(u64::from(e));
            }
            acc += term;
        }
        acc
    }
}

impl Add for SmallPolynomial {
    type Output = SmallPolynomial;

    fn add(mut self, rhs: SmallPolynomial) -> SmallPolynomial {
        assert_eq!(self.nvars, rhs.nvars);
        for (exps, c) in rhs.terms {
            self.add_term(exps, c);
        }
        self
    }
}

impl Mul for &SmallPolynomial {
    type Output = SmallPolynomial;

    fn mul(self, rhs: &SmallPolynomial) -> SmallPolynomial {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = SmallPolynomial::zero(self.nvars);
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &rhs.terms {
                let exps: Vec<u8> = ea
                    .iter()
                    .zip(eb)
                    .map(|(&a, &b)| {
                        let e = a + b;
                        assert!(e <= MAX_VAR_DEGREE, "degree overflow at exponent {e}");
                        e
                    })
                    .collect();
                out.add_term(exps, ca * cb);
            }
        }
        out
    }
}

/// Seeded random polynomial: up to `max_terms` monomials with per-variable
/// exponents up to `max_degree`. Colliding monomials merge, so the result
/// may have fewer terms than drawn.
pub fn random_polynomial(
    nvars: usize,
    max_terms: usize,
    max_degree: u8,
    seed: u64,
) -> SmallPolynomial {
    assert!(max_degree <= MAX_VAR_DEGREE);
    let mut counter = 0u64;
    let mut draw = move |limit: u64| {
        let x = mix64(seed, counter);
        counter += 1;
        x % limit
    };
    let nterms = draw(max_terms as u64 + 1) as usize;
    let mut p = SmallPolynomial::zero(nvars);
    for _ in 0..nterms {
        let exps: Vec<u8> = (0..nvars).map(|_| draw(u64::from(max_degree) + 1) as u8).collect();
        let coeff = FieldElement::new(mix64(seed, counter));
        counter += 1;
        p.add_term(exps, coeff);
    }
    p
}

/// Verifies, symbolically, that alternating subset sums of partial zero
/// evaluations isolate exactly the terms divisible by every variable in
/// `t_vars`: sum over I subseteq T of P with I zeroed equals the part of
/// P divisible by prod T. This is the identity the subset-sum detectors
/// rely on, checked term by term.
pub fn lemma_polypie_check(p: &SmallPolynomial, t_vars: &[usize]) -> bool {
    let mut sorted = t_vars.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), t_vars.len(), "t_vars must be distinct");
    for &v in t_vars {
        assert!((1..=p.nvars()).contains(&v), "variable {v} out of range");
    }
    let summed = subset_zero_sum(t_vars.len() as u32, SmallPolynomial::zero(p.nvars()), |mask| {
        let zeroed: Vec<usize> = t_vars
            .iter()
            .enumerate()
            .filter(|&(j, _)| (mask >> j) & 1 == 1)
            .map(|(_, &v)| v)
            .collect();
        p.zero_vars(&zeroed)
    });
    summed == p.filter_divisible(t_vars)
}
