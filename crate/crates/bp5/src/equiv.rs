//! Brute-force equivalence checking between anything that computes a
//! Boolean function, plus a deterministic corpus generator for
//! differential testing.
//!
//! Every transformation in this crate claims to preserve the computed
//! function. This module is the instrument that checks such claims at desk
//! scale: enumerate the whole input space, evaluate both sides, report the
//! first disagreement. It deliberately knows nothing about how the objects
//! were produced — it depends on evaluators only, so a bug in a
//! transformation cannot hide inside its own checker.

use std::rc::Rc;

use rand::prelude::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::advice::{run_tm, AdviceTape};
use crate::bp::{BpNode, GeneralBp, PermProgram};
use crate::circuit::{Circuit, CircuitBuilder, NodeId};

/// Exhaustive runs enumerate at most `2^MAX_EXHAUSTIVE_INPUTS` inputs.
pub const MAX_EXHAUSTIVE_INPUTS: usize = 20;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("arity mismatch: evaluators take {left} and {right} variables, oracle asked for {n}")]
    ArityMismatch { left: usize, right: usize, n: usize },
    #[error("2^{n} inputs exceeds the exhaustive cap of 2^{MAX_EXHAUSTIVE_INPUTS}")]
    TooManyInputs { n: usize },
    #[error("evaluation failed on input {input}: {msg}")]
    Eval { input: String, msg: String },
}

/// Anything that maps a fixed number of input bits to one output bit.
pub trait Evaluate {
    /// Number of input variables.
    fn arity(&self) -> usize;
    /// The function's value on `x`, where `x[0]` is x1.
    fn eval_bit(&self, x: &[bool]) -> Result<bool, OracleError>;
}

fn eval_error(x: &[bool], e: impl std::fmt::Display) -> OracleError {
    OracleError::Eval {
        input: format_bits(x),
        msg: e.to_string(),
    }
}

impl Evaluate for Circuit {
    fn arity(&self) -> usize {
        self.n()
    }
    fn eval_bit(&self, x: &[bool]) -> Result<bool, OracleError> {
        self.eval(x).map_err(|e| eval_error(x, e))
    }
}

impl Evaluate for PermProgram {
    fn arity(&self) -> usize {
        self.n()
    }
    fn eval_bit(&self, x: &[bool]) -> Result<bool, OracleError> {
        self.eval(x).map_err(|e| eval_error(x, e))
    }
}

impl Evaluate for GeneralBp {
    fn arity(&self) -> usize {
        self.n()
    }
    fn eval_bit(&self, x: &[bool]) -> Result<bool, OracleError> {
        self.eval(x).map_err(|e| eval_error(x, e))
    }
}

impl Evaluate for AdviceTape {
    fn arity(&self) -> usize {
        self.n()
    }
    fn eval_bit(&self, x: &[bool]) -> Result<bool, OracleError> {
        run_tm(self, x)
            .map(|(accept, _)| accept)
            .map_err(|e| eval_error(x, e))
    }
}

/// Outcome of an equivalence run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Equal,
    /// The lexicographically first input where the two sides differ.
    Counterexample(Vec<bool>),
}

/// The `i`-th input in canonical order: x1 is the least-significant bit of
/// `i`, so input 0 is all-false and counterexamples are reproducible.
pub fn index_to_input(i: u64, n: usize) -> Vec<bool> {
    (0..n).map(|j| (i >> j) & 1 == 1).collect()
}

/// Renders an input as the bits of x1, x2, … in order, e.g. `101`.
pub fn format_bits(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Compares `f` and `g` on all `2^n` inputs. Returns the first differing
/// input, re-evaluated before being reported so a flaky evaluator cannot
/// manufacture a counterexample.
pub fn equiv_exhaustive(
    f: &dyn Evaluate,
    g: &dyn Evaluate,
    n: usize,
) -> Result<Verdict, OracleError> {
    if f.arity() != n || g.arity() != n {
        return Err(OracleError::ArityMismatch {
            left: f.arity(),
            right: g.arity(),
            n,
        });
    }
    if n > MAX_EXHAUSTIVE_INPUTS {
        return Err(OracleError::TooManyInputs { n });
    }
    for i in 0..(1u64 << n) {
        let x = index_to_input(i, n);
        if f.eval_bit(&x)? != g.eval_bit(&x)? {
            // Confirm the disagreement is real before reporting it.
            if f.eval_bit(&x)? == g.eval_bit(&x)? {
                return Err(OracleError::Eval {
                    input: format_bits(&x),
                    msg: "evaluator returned different values on repeated calls".into(),
                });
            }
            return Ok(Verdict::Counterexample(x));
        }
    }
    Ok(Verdict::Equal)
}

/// How many random objects [`gen_corpus`] adds on top of the exhaustive
/// small-circuit enumeration.
#[derive(Clone, Copy, Debug)]
pub struct CorpusCounts {
    pub circuits: usize,
    pub bps: usize,
}

/// A deterministic test corpus.
#[derive(Debug)]
pub struct Corpus {
    pub circuits: Vec<Circuit>,
    pub bps: Vec<GeneralBp>,
}

/// Generates the corpus: every structurally distinct circuit of height at
/// most 2 over the leaves {x1, x2, x3, false, true} (operand order ignored
/// for AND/OR), then `counts.circuits` random circuits with n ≤ 8 and
/// AND/OR depth ≤ 6, then `counts.bps` random leveled programs with width
/// ≤ 5, length ≤ 64, n ≤ 10. Identical seeds give identical corpora.
pub fn gen_corpus(seed: u64, counts: CorpusCounts) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut circuits = mini_circuits();
    for _ in 0..counts.circuits {
        let n = rng.random_range(1..=8);
        let gates = rng.random_range(1..=24);
        circuits.push(random_circuit(&mut rng, n, gates, 6));
    }
    let mut bps = Vec::with_capacity(counts.bps);
    for _ in 0..counts.bps {
        let n = rng.random_range(1..=10);
        // Mostly short programs; a fifth stretch up to length 64.
        let length = if rng.random_range(0..5) < 4 {
            rng.random_range(1..=4)
        } else {
            *[8usize, 16, 32, 64].choose(&mut rng).unwrap()
        };
        bps.push(random_bp(&mut rng, n, length));
    }
    Corpus { circuits, bps }
}

/// A random circuit over `n` variables with `gates` gates and AND/OR depth
/// at most `depth_cap`.
pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, gates: usize, depth_cap: usize) -> Circuit {
    assert!(n >= 1 && gates >= 1 && depth_cap >= 1);
    let mut b = CircuitBuilder::new(n);
    // Pool of (node, AND/OR depth) the generator may wire from.
    let mut pool: Vec<(NodeId, usize)> = (1..=n).map(|i| (b.input(i), 0)).collect();
    pool.push((b.constant(false), 0));
    pool.push((b.constant(true), 0));
    let mut last = pool[rng.random_range(0..n)].0;
    for _ in 0..gates {
        let (node, depth) = match rng.random_range(0..10) {
            0 | 1 => {
                let &(a, d) = pool.choose(rng).unwrap();
                (b.not(a), d)
            }
            r => {
                // Both operands must sit strictly below the cap.
                let shallow: Vec<(NodeId, usize)> = pool
                    .iter()
                    .copied()
                    .filter(|&(_, d)| d < depth_cap)
                    .collect();
                let &(x, dx) = shallow.choose(rng).unwrap();
                let &(y, dy) = shallow.choose(rng).unwrap();
                let node = if r < 6 { b.and(x, y) } else { b.or(x, y) };
                (node, dx.max(dy) + 1)
            }
        };
        pool.push((node, depth));
        last = node;
    }
    let c = b.finish(last);
    debug_assert!(c.depth() <= depth_cap);
    c
}

/// A random leveled branching program: `length` levels of 1–5 nodes each,
/// ending in a false sink and a true sink.
pub fn random_bp<R: Rng>(rng: &mut R, n: usize, length: usize) -> GeneralBp {
    assert!(n >= 1 && length >= 1);
    let sizes: Vec<usize> = (0..length).map(|_| rng.random_range(1..=5)).collect();
    let levels: Vec<Vec<BpNode>> = (0..length)
        .map(|t| {
            let next = if t + 1 < length { sizes[t + 1] } else { 2 };
            (0..sizes[t])
                .map(|_| BpNode {
                    var: rng.random_range(1..=n),
                    edge0: rng.random_range(0..next),
                    edge1: rng.random_range(0..next),
                })
                .collect()
        })
        .collect();
    let start = rng.random_range(0..sizes[0]);
    GeneralBp::new(n, levels, vec![false, true], start).expect("generated program is well-formed")
}

/// Shared subtrees for the exhaustive height-≤2 enumeration.
#[derive(Clone)]
enum Expr {
    X(usize),
    C(bool),
    Not(Rc<Expr>),
    And(Rc<Expr>, Rc<Expr>),
    Or(Rc<Expr>, Rc<Expr>),
}

fn build_expr(b: &mut CircuitBuilder, e: &Expr) -> NodeId {
    match e {
        Expr::X(i) => b.input(*i),
        Expr::C(v) => b.constant(*v),
        Expr::Not(a) => {
            let a = build_expr(b, a);
            b.not(a)
        }
        Expr::And(x, y) => {
            let x = build_expr(b, x);
            let y = build_expr(b, y);
            b.and(x, y)
        }
        Expr::Or(x, y) => {
            let x = build_expr(b, x);
            let y = build_expr(b, y);
            b.or(x, y)
        }
    }
}

/// Every circuit of structural height ≤ 2 over {x1, x2, x3, false, true},
/// with AND/OR operand order quotiented out: 5 leaves, 35 height-1 trees,
/// 1645 height-2 trees — 1685 circuits, all over three variables.
fn mini_circuits() -> Vec<Circuit> {
    let leaves: Vec<Rc<Expr>> = vec![
        Rc::new(Expr::X(1)),
        Rc::new(Expr::X(2)),
        Rc::new(Expr::X(3)),
        Rc::new(Expr::C(false)),
        Rc::new(Expr::C(true)),
    ];

    // Height exactly 1: a gate whose operands are all leaves.
    let mut height1: Vec<Rc<Expr>> = leaves
        .iter()
        .map(|a| Rc::new(Expr::Not(a.clone())))
        .collect();
    for (i, a) in leaves.iter().enumerate() {
        for b in &leaves[i..] {
            height1.push(Rc::new(Expr::And(a.clone(), b.clone())));
            height1.push(Rc::new(Expr::Or(a.clone(), b.clone())));
        }
    }

    // Height exactly 2: a gate with at least one height-1 operand.
    let mut height2: Vec<Rc<Expr>> = height1
        .iter()
        .map(|a| Rc::new(Expr::Not(a.clone())))
        .collect();
    let low: Vec<(Rc<Expr>, bool)> = leaves
        .iter()
        .map(|e| (e.clone(), false))
        .chain(height1.iter().map(|e| (e.clone(), true)))
        .collect();
    for (i, (a, a_tall)) in low.iter().enumerate() {
        for (b, b_tall) in &low[i..] {
            if *a_tall || *b_tall {
                height2.push(Rc::new(Expr::And(a.clone(), b.clone())));
                height2.push(Rc::new(Expr::Or(a.clone(), b.clone())));
            }
        }
    }

    leaves
        .iter()
        .chain(&height1)
        .chain(&height2)
        .map(|e| {
            let mut b = CircuitBuilder::new(3);
            let root = build_expr(&mut b, e);
            b.finish(root)
        })
        .collect()
}
