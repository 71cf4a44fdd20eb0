//! Builds the matrix encoding of a reduced instance: one variable per
//! edge placed symmetrically, a unit diagonal outside the closed
//! terminal neighborhood, a fixed direction through terminal 1, and
//! per-terminal orientation tags on the other terminals' edges.
//!
//! With n the reduced dimension and k terminals, the layout is: cell
//! (i,i) = 1 for i > 3k and 0 otherwise; cells (1,k+2) and (k+1,1) are
//! forced to 0 so every cycle through terminal 1 is traversed in one
//! direction only; for each terminal i >= 2 the four cells joining it to
//! its two neighbors carry a tag that later multiplies them by a_i or
//! 1+a_i, selecting a traversal direction per 0/1 value of a_i.

use crate::field::{FieldElement, FieldRng};
use crate::graph::{Graph, ReducedInstance};
use crate::linalg::{AffineEntry, AffineMatrix, DenseMatrix};
use std::collections::BTreeMap;

/// Which factor a tagged cell carries: `a_i` or `1 + a_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Plain,
    Flipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Zero,
    One,
    Edge { var: usize, orient: Option<(usize, Polarity)> },
}

/// An edge indeterminate and the matrix cells where it appears.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeVariable {
    pub id: usize,
    /// Endpoints (u, v) with u < v, in reduced-graph labels.
    pub endpoints: (usize, usize),
    /// 1-based (row, col) cells carrying this variable; two for most
    /// edges, one for the two edges at terminal 1 (their mirror cells
    /// are forced to zero).
    pub positions: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
struct Evaluation {
    seed: u64,
    values: Vec<FieldElement>,
}

/// The matrix encoding of an instance, before or after its edge
/// variables are bound to field values.
#[derive(Clone, Debug)]
pub struct EncodedMatrix {
    n: usize,
    k: usize,
    cells: Vec<Cell>,
    edge_vars: Vec<EdgeVariable>,
    evaluation: Option<Evaluation>,
}

/// The 2k terminal-incident edge variables, ordered
/// `{1,k+1}, {1,k+2}, {2,k+3}, {2,k+4}, ...`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSet {
    vars: Vec<usize>,
    pos_of_var: Vec<Option<u8>>,
}

impl TargetSet {
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    /// Position of an edge variable within the target set, if present.
    #[inline]
    pub fn position(&self, var: usize) -> Option<usize> {
        self.pos_of_var.get(var).copied().flatten().map(usize::from)
    }
}

/// How tagged cells are treated during instantiation.
#[derive(Clone, Copy, Debug)]
pub enum TagMode {
    /// Every tagged cell keeps its full value, as if untagged.
    Erase,
    /// Bit i-2 holds the 0/1 value assigned to terminal i's variable:
    /// a tagged cell keeps its value or drops to zero accordingly.
    Assign(u64),
}

/// Builds the encoded matrix and its target set from a reduced instance.
pub fn build_matrix(r: &ReducedInstance) -> (EncodedMatrix, TargetSet) {
    let k = r.k;
    assert!(k >= 2, "matrix encoding requires at least 2 terminals");
    let n = r.graph.n();
    let mut m = tutte_skeleton(&r.graph);
    m.k = k;

    for i in (3 * k + 1)..=n {
        *m.cell_mut(i, i) = Cell::One;
    }

    // terminal 1 passes its cycle in one fixed direction
    m.zero_cell(1, k + 2);
    m.zero_cell(k + 1, 1);

    for i in 2..=k {
        m.tag_cell(k + 2 * i - 1, i, i, Polarity::Plain);
        m.tag_cell(i, k + 2 * i, i, Polarity::Plain);
        m.tag_cell(k + 2 * i, i, i, Polarity::Flipped);
        m.tag_cell(i, k + 2 * i - 1, i, Polarity::Flipped);
    }

    let by_endpoints: BTreeMap<(usize, usize), usize> =
        m.edge_vars.iter().map(|e| (e.endpoints, e.id)).collect();
    let mut vars = Vec::with_capacity(2 * k);
    for i in 1..=k {
        for nb in [k + 2 * i - 1, k + 2 * i] {
            vars.push(by_endpoints[&(i, nb)]);
        }
    }
    let mut pos_of_var = vec![None; m.edge_vars.len()];
    for (pos, &v) in vars.iter().enumerate() {
        pos_of_var[v] = Some(u8::try_from(pos).unwrap());
    }

    (m, TargetSet { vars, pos_of_var })
}

/// Plain symmetric construction: edge variables mirrored, zero diagonal,
/// no orientation structure. Its determinant at a random evaluation is
/// nonzero exactly when the graph has a perfect matching (up to the
/// usual random-evaluation failure bound), which the tests lean on.
pub fn build_tutte(g: &Graph) -> EncodedMatrix {
    tutte_skeleton(g)
}

fn tutte_skeleton(g: &Graph) -> EncodedMatrix {
    let n = g.n();
    let mut cells = vec![Cell::Zero; n * n];
    let mut edge_vars = Vec::with_capacity(g.m());
    for (id, (u, v)) in g.edges().enumerate() {
        cells[(u - 1) * n + (v - 1)] = Cell::Edge { var: id, orient: None };
        cells[(v - 1) * n + (u - 1)] = Cell::Edge { var: id, orient: None };
        edge_vars.push(EdgeVariable {
            id,
            endpoints: (u, v),
            positions: vec![(u, v), (v, u)],
        });
    }
    EncodedMatrix { n, k: 0, cells, edge_vars, evaluation: None }
}

impl EncodedMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_edge_vars(&self) -> usize {
        self.edge_vars.len()
    }

    pub fn edge_vars(&self) -> &[EdgeVariable] {
        &self.edge_vars
    }

    pub fn is_evaluated(&self) -> bool {
        self.evaluation.is_some()
    }

    /// Seed the edge variables were bound with, once evaluated.
    pub fn seed(&self) -> Option<u64> {
        self.evaluation.as_ref().map(|e| e.seed)
    }

    fn cell_mut(&mut self, r: usize, c: usize) -> &mut Cell {
        &mut self.cells[(r - 1) * self.n + (c - 1)]
    }

    fn cell(&self, r: usize, c: usize) -> Cell {
        self.cells[(r - 1) * self.n + (c - 1)]
    }

    fn zero_cell(&mut self, r: usize, c: usize) {
        let Cell::Edge { var, .. } = self.cell(r, c) else {
            panic!("cell ({r}, {c}) carries no edge to zero");
        };
        self.edge_vars[var].positions.retain(|&p| p != (r, c));
        *self.cell_mut(r, c) = Cell::Zero;
    }

    fn tag_cell(&mut self, r: usize, c: usize, terminal: usize, polarity: Polarity) {
        let Cell::Edge { var, orient } = self.cell(r, c) else {
            panic!("cell ({r}, {c}) carries no edge to tag");
        };
        assert!(orient.is_none(), "cell ({r}, {c}) tagged twice");
        *self.cell_mut(r, c) = Cell::Edge { var, orient: Some((terminal, polarity)) };
    }

    /// Binds every edge variable to a uniform nonzero field value drawn
    /// from the seed, in edge-id order. Tags stay symbolic.
    pub fn apply_evaluation(&self, seed: u64) -> EncodedMatrix {
        let mut out = self.clone();
        let mut rng = FieldRng::new(seed);
        let values = (0..self.edge_vars.len()).map(|_| rng.next_nonzero()).collect();
        out.evaluation = Some(Evaluation { seed, values });
        out
    }

    /// Concrete matrix with tagged cells resolved per `tags` and no edge
    /// variables zeroed.
    pub fn instantiate(&self, tags: TagMode) -> DenseMatrix {
        self.instantiate_inner(tags, |_| false)
    }

    /// Concrete matrix with tagged cells resolved per `tags`, and every
    /// target variable whose bit is set in `zero_mask` replaced by zero
    /// at all its cells.
    pub fn instantiate_zeroed(
        &self,
        tags: TagMode,
        target: &TargetSet,
        zero_mask: u64,
    ) -> DenseMatrix {
        self.instantiate_inner(tags, |var| {
            target.position(var).is_some_and(|p| (zero_mask >> p) & 1 == 1)
        })
    }

    fn instantiate_inner(&self, tags: TagMode, zeroed: impl Fn(usize) -> bool) -> DenseMatrix {
        let values = &self
            .evaluation
            .as_ref()
            .expect("matrix must be evaluated before instantiation")
            .values;
        let n = self.n;
        let mut out = DenseMatrix::zero(n);
        for r in 0..n {
            for c in 0..n {
                let value = match self.cells[r * n + c] {
                    Cell::Zero => continue,
                    Cell::One => FieldElement::ONE,
                    Cell::Edge { var, orient } => {
                        if zeroed(var) {
                            continue;
                        }
                        let v = values[var];
                        match (tags, orient) {
                            (TagMode::Erase, _) | (_, None) => v,
                            (TagMode::Assign(mask), Some((i, pol))) => {
                                let bit = (mask >> (i - 2)) & 1 == 1;
                                let keep = match pol {
                                    Polarity::Plain => bit,
                                    Polarity::Flipped => !bit,
                                };
                                if keep {
                                    v
                                } else {
                                    continue;
                                }
                            }
                        }
                    }
                };
                out[(r, c)] = value;
            }
        }
        out
    }

    /// The evaluated matrix with tags carried as affine entries: a
    /// tagged cell of value v becomes `v * a_i` or `v + v * a_i`, and
    /// every other cell a constant.
    pub fn affine_matrix(&self) -> AffineMatrix {
        let values = &self
            .evaluation
            .as_ref()
            .expect("matrix must be evaluated before conversion")
            .values;
        let n = self.n;
        let mut out = AffineMatrix::zero(n);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = match self.cells[r * n + c] {
                    Cell::Zero => AffineEntry::ZERO,
                    Cell::One => AffineEntry::concrete(FieldElement::ONE),
                    Cell::Edge { var, orient } => {
                        let v = values[var];
                        match orient {
                            None => AffineEntry::concrete(v),
                            Some((i, Polarity::Plain)) => {
                                AffineEntry { var: Some(i), c1: v, c0: FieldElement::ZERO }
                            }
                            Some((i, Polarity::Flipped)) => {
                                AffineEntry { var: Some(i), c1: v, c0: v }
                            }
                        }
                    }
                };
            }
        }
        out
    }
}
