//! Converting a bounded-width branching program into a shallow circuit.
//!
//! A length-`L`, width-`w` program is reachability in a layered graph, and
//! reachability parallelizes: each level becomes a `w×w` matrix of literals
//! (which next-level node do you reach, as a function of one variable), and
//! the whole program is the product of those matrices, taken by divide and
//! conquer. Each boolean matrix product costs `⌈log₂ w⌉ + 1` gate depth (an
//! AND plus a balanced OR over `w` terms), there are `⌈log₂ L⌉` rounds, and
//! reading the answer out of the final matrix costs one more OR tree, for a
//! total depth of at most `(⌈log₂ w⌉+1)·⌈log₂ L⌉ + ⌈log₂ w⌉ + 1` — checked
//! on every conversion.

use thiserror::Error;

use crate::bp::GeneralBp;
use crate::circuit::{Circuit, CircuitBuilder, NodeId};

/// Errors from the matrix helpers. (`bp_to_circuit` itself cannot fail: a
/// constructed [`GeneralBp`] is already leveled and in range.)
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParallelizeError {
    #[error("level {t} out of range: the program has {levels} branch levels")]
    LevelOutOfRange { t: usize, levels: usize },
    #[error("cannot multiply {a_rows}x{a_cols} by {b_rows}x{b_cols}")]
    DimensionMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },
}

/// One entry of a transition matrix: a constant, a literal over one
/// variable, or a gate already emitted into the builder.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatrixEntry {
    Zero,
    One,
    /// `x_var` (1-indexed).
    Pos(usize),
    /// `¬x_var`.
    Neg(usize),
    Gate(NodeId),
}

/// A boolean matrix whose entries are [`MatrixEntry`] formulas. Entry
/// `(u, v)` says whether node `u` of the first level reaches node `v` of
/// the last level of the range the matrix covers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LiteralMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<MatrixEntry>,
}

impl LiteralMatrix {
    fn filled(rows: usize, cols: usize, entry: MatrixEntry) -> LiteralMatrix {
        LiteralMatrix {
            rows,
            cols,
            entries: vec![entry; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> MatrixEntry {
        assert!(
            r < self.rows && c < self.cols,
            "entry ({r},{c}) out of range"
        );
        self.entries[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, e: MatrixEntry) {
        self.entries[r * self.cols + c] = e;
    }
}

/// The transition matrix of branch level `t`: entry `(u, v)` is the literal
/// deciding whether node `u` steps to `v`. A node with both edges equal
/// contributes a constant One on that edge.
pub fn level_matrix(bp: &GeneralBp, t: usize) -> Result<LiteralMatrix, ParallelizeError> {
    let levels = bp.levels();
    if t >= levels.len() {
        return Err(ParallelizeError::LevelOutOfRange {
            t,
            levels: levels.len(),
        });
    }
    let rows = levels[t].len();
    let cols = levels.get(t + 1).map_or(bp.sinks().len(), Vec::len);
    let mut m = LiteralMatrix::filled(rows, cols, MatrixEntry::Zero);
    for (u, node) in levels[t].iter().enumerate() {
        if node.edge0 == node.edge1 {
            m.set(u, node.edge0, MatrixEntry::One);
        } else {
            m.set(u, node.edge1, MatrixEntry::Pos(node.var));
            m.set(u, node.edge0, MatrixEntry::Neg(node.var));
        }
    }
    Ok(m)
}

/// Boolean matrix product over the builder: entry `(u, v)` of the result is
/// `OR_m (a(u,m) AND b(m,v))`, with constants folded away and the OR taken
/// as a balanced tree, so the product adds at most `⌈log₂ inner⌉ + 1` to
/// the depth of its operands.
pub fn bool_matrix_product(
    a: &LiteralMatrix,
    b: &LiteralMatrix,
    builder: &mut CircuitBuilder,
) -> Result<LiteralMatrix, ParallelizeError> {
    if a.cols != b.rows {
        return Err(ParallelizeError::DimensionMismatch {
            a_rows: a.rows,
            a_cols: a.cols,
            b_rows: b.rows,
            b_cols: b.cols,
        });
    }
    let mut out = LiteralMatrix::filled(a.rows, b.cols, MatrixEntry::Zero);
    for u in 0..a.rows {
        for v in 0..b.cols {
            let mut terms = Vec::with_capacity(a.cols);
            for m in 0..a.cols {
                match and_entries(a.get(u, m), b.get(m, v), builder) {
                    MatrixEntry::Zero => {}
                    term => terms.push(term),
                }
            }
            out.set(u, v, or_entries(terms, builder));
        }
    }
    Ok(out)
}

/// Converts a leveled branching program into an equivalent circuit of depth
/// at most [`depth_bound`]`(width, length)`.
pub fn bp_to_circuit(bp: &GeneralBp) -> Circuit {
    let mut builder = CircuitBuilder::new(bp.n());
    let length = bp.length();
    let result = if length == 0 {
        if bp.sinks()[bp.start()] {
            MatrixEntry::One
        } else {
            MatrixEntry::Zero
        }
    } else {
        let m = range_product(bp, 0, length, &mut builder);
        let terms: Vec<MatrixEntry> = (0..m.cols())
            .filter(|&v| bp.sinks()[v])
            .map(|v| m.get(bp.start(), v))
            .collect();
        or_entries(terms, &mut builder)
    };
    let output = materialize(result, &mut builder);
    let circuit = builder.finish(output).pruned();

    let bound = depth_bound(bp.width(), length);
    assert!(
        circuit.depth() <= bound,
        "converted circuit has depth {} > bound {bound} (width {}, length {length})",
        circuit.depth(),
        bp.width()
    );
    circuit
}

/// The depth guarantee of [`bp_to_circuit`]:
/// `(⌈log₂ w⌉+1)·⌈log₂ L⌉ + ⌈log₂ w⌉ + 1`. For width 5 this is
/// `4·⌈log₂ L⌉ + 4`.
pub fn depth_bound(width: usize, length: usize) -> usize {
    let w = ceil_log2(width);
    (w + 1) * ceil_log2(length) + w + 1
}

/// `⌈log₂ x⌉`, with the degenerate cases 0 and 1 mapping to 0.
fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Product of the level matrices for branch levels `lo..hi`, split at the
/// midpoint so the multiplication tree is balanced.
fn range_product(
    bp: &GeneralBp,
    lo: usize,
    hi: usize,
    builder: &mut CircuitBuilder,
) -> LiteralMatrix {
    debug_assert!(lo < hi);
    if hi - lo == 1 {
        return level_matrix(bp, lo).expect("range is in bounds");
    }
    let mid = (lo + hi) / 2;
    let a = range_product(bp, lo, mid, builder);
    let b = range_product(bp, mid, hi, builder);
    bool_matrix_product(&a, &b, builder).expect("adjacent ranges share a dimension")
}

fn materialize(e: MatrixEntry, builder: &mut CircuitBuilder) -> NodeId {
    match e {
        MatrixEntry::Zero => builder.constant(false),
        MatrixEntry::One => builder.constant(true),
        MatrixEntry::Pos(v) => builder.input(v),
        MatrixEntry::Neg(v) => {
            let x = builder.input(v);
            builder.not(x)
        }
        MatrixEntry::Gate(id) => id,
    }
}

/// AND of two entries with constant folding: Zero annihilates, One is
/// dropped, and only the remaining case emits a gate.
fn and_entries(a: MatrixEntry, b: MatrixEntry, builder: &mut CircuitBuilder) -> MatrixEntry {
    match (a, b) {
        (MatrixEntry::Zero, _) | (_, MatrixEntry::Zero) => MatrixEntry::Zero,
        (MatrixEntry::One, x) | (x, MatrixEntry::One) => x,
        (a, b) => {
            let ga = materialize(a, builder);
            let gb = materialize(b, builder);
            MatrixEntry::Gate(builder.and(ga, gb))
        }
    }
}

/// OR of entries with constant folding and a balanced gate tree: depth
/// `⌈log₂ terms⌉` above the deepest term.
fn or_entries(mut terms: Vec<MatrixEntry>, builder: &mut CircuitBuilder) -> MatrixEntry {
    if terms.contains(&MatrixEntry::One) {
        return MatrixEntry::One;
    }
    terms.retain(|&t| t != MatrixEntry::Zero);
    match terms.len() {
        0 => MatrixEntry::Zero,
        1 => terms[0],
        _ => {
            let gates: Vec<NodeId> = terms.into_iter().map(|t| materialize(t, builder)).collect();
            MatrixEntry::Gate(or_tree(&gates, builder))
        }
    }
}

fn or_tree(ids: &[NodeId], builder: &mut CircuitBuilder) -> NodeId {
    match ids {
        [one] => *one,
        _ => {
            let (l, r) = ids.split_at(ids.len().div_ceil(2));
            let gl = or_tree(l, builder);
            let gr = or_tree(r, builder);
            builder.or(gl, gr)
        }
    }
}
