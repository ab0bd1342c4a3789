//! Fan-in-2 Boolean circuits over AND/OR/NOT with a textual netlist format.
//!
//! **Depth convention.** `Circuit::depth` counts only AND and OR gates on
//! the longest input-to-output path; NOT gates and constants are free. Every
//! depth bound in this crate (the `4^depth` program length, the `O(log L)`
//! parallelization depth) is stated against this convention, so it is the
//! one fixed point nothing else may reinterpret.
//!
//! Fan-out is unrestricted: a node may feed any number of gates. Consumers
//! that cannot share subtrees (the program compiler) simply expand the DAG
//! once per use.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

/// Index of a node in [`Circuit::nodes`]; operands always point backwards.
pub type NodeId = usize;

/// One node of the DAG. `Input` holds a 1-indexed variable number.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Node {
    Input(usize),
    Const(bool),
    Not(NodeId),
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
}

/// Errors from building, parsing, or evaluating circuits.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: reference to undefined name {name:?}")]
    Undefined { line: usize, name: String },
    #[error("line {line}: duplicate definition of {name:?}")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: input x{index} out of range (circuit has {n} inputs)")]
    InputOutOfRange { line: usize, index: usize, n: usize },
    #[error("missing `inputs N` header line")]
    MissingInputs,
    #[error("missing `output ARG` line")]
    MissingOutput,
    #[error("assignment has {got} bits but the circuit has {expected} inputs")]
    AssignmentLength { expected: usize, got: usize },
    #[error("malformed circuit: {0}")]
    Invalid(String),
}

/// A circuit: `n` input variables, a topologically ordered node list, and a
/// designated output node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Circuit {
    n: usize,
    nodes: Vec<Node>,
    output: NodeId,
}

impl Circuit {
    /// Validates topological order (operands strictly before their gate),
    /// input ranges, and the output reference.
    pub fn new(n: usize, nodes: Vec<Node>, output: NodeId) -> Result<Circuit, CircuitError> {
        for (id, node) in nodes.iter().enumerate() {
            let check = |op: NodeId| {
                if op >= id {
                    Err(CircuitError::Invalid(format!(
                        "node {id} references node {op}, which is not strictly earlier"
                    )))
                } else {
                    Ok(())
                }
            };
            match *node {
                Node::Input(i) => {
                    if i == 0 || i > n {
                        return Err(CircuitError::Invalid(format!(
                            "node {id} reads input x{i}, out of range for {n} inputs"
                        )));
                    }
                }
                Node::Const(_) => {}
                Node::Not(a) => check(a)?,
                Node::And(a, b) | Node::Or(a, b) => {
                    check(a)?;
                    check(b)?;
                }
            }
        }
        if output >= nodes.len() {
            return Err(CircuitError::Invalid(format!(
                "output references node {output}, but there are only {} nodes",
                nodes.len()
            )));
        }
        Ok(Circuit { n, nodes, output })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn output(&self) -> NodeId {
        self.output
    }

    /// Total gate count (AND, OR, and NOT nodes).
    pub fn gate_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Not(_) | Node::And(..) | Node::Or(..)))
            .count()
    }

    /// Evaluates the circuit on an assignment, `x[i]` being variable `i+1`.
    pub fn eval(&self, x: &[bool]) -> Result<bool, CircuitError> {
        if x.len() != self.n {
            return Err(CircuitError::AssignmentLength {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut val = vec![false; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            val[id] = match *node {
                Node::Input(i) => x[i - 1],
                Node::Const(b) => b,
                Node::Not(a) => !val[a],
                Node::And(a, b) => val[a] && val[b],
                Node::Or(a, b) => val[a] || val[b],
            };
        }
        Ok(val[self.output])
    }

    /// Depth of the output node, counting AND/OR gates only (NOT is free).
    pub fn depth(&self) -> usize {
        let mut d = vec![0usize; self.nodes.len()];
        for (id, node) in self.nodes.iter().enumerate() {
            d[id] = match *node {
                Node::Input(_) | Node::Const(_) => 0,
                Node::Not(a) => d[a],
                Node::And(a, b) | Node::Or(a, b) => 1 + d[a].max(d[b]),
            };
        }
        d[self.output]
    }

    /// Parses the netlist format:
    ///
    /// ```text
    /// inputs 2
    /// # comment
    /// g    = AND x1 x2
    /// both = OR g 0
    /// output both
    /// ```
    ///
    /// One statement per line. The header `inputs N` comes first; each gate
    /// line is `NAME = OP ARG [ARG]` with OP one of `AND`, `OR` (two
    /// arguments) or `NOT` (one); the final line is `output ARG`. Arguments
    /// are `xK` (variable `K`, 1-indexed), the constants `0` and `1`, or the
    /// name of an earlier gate. Names match `[A-Za-z_][A-Za-z0-9_]*` and may
    /// not collide with the reserved forms. Blank lines and `#` comments are
    /// ignored.
    pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
        let mut n: Option<usize> = None;
        let mut nodes: Vec<Node> = Vec::new();
        let mut names: HashMap<String, NodeId> = HashMap::new();
        let mut interned: HashMap<Node, NodeId> = HashMap::new();
        let mut output: Option<NodeId> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.trim();
            if stripped.is_empty() || stripped.starts_with('#') {
                continue;
            }
            if output.is_some() {
                return Err(CircuitError::Syntax {
                    line,
                    msg: "statement after the output line".into(),
                });
            }
            let toks: Vec<&str> = stripped.split_whitespace().collect();
            let Some(n) = n else {
                if toks.len() == 2 && toks[0] == "inputs" {
                    let count: usize = toks[1].parse().map_err(|_| CircuitError::Syntax {
                        line,
                        msg: format!("bad input count {:?}", toks[1]),
                    })?;
                    n = Some(count);
                    continue;
                }
                return Err(CircuitError::Syntax {
                    line,
                    msg: "expected `inputs N` header".into(),
                });
            };
            let mut resolve = |tok: &str| -> Result<NodeId, CircuitError> {
                resolve_arg(tok, line, n, &mut nodes, &mut interned, &names)
            };
            if toks[0] == "output" {
                if toks.len() != 2 {
                    return Err(CircuitError::Syntax {
                        line,
                        msg: "expected `output ARG`".into(),
                    });
                }
                output = Some(resolve(toks[1])?);
                continue;
            }
            if toks.len() < 2 || toks[1] != "=" {
                return Err(CircuitError::Syntax {
                    line,
                    msg: "expected `NAME = OP ARG [ARG]`".into(),
                });
            }
            let name = toks[0];
            validate_name(name, line)?;
            if names.contains_key(name) {
                return Err(CircuitError::Duplicate {
                    line,
                    name: name.to_string(),
                });
            }
            let (op, args) = (toks.get(2).copied(), &toks[3.min(toks.len())..]);
            let node = match (op, args.len()) {
                (Some("NOT"), 1) => Node::Not(resolve(args[0])?),
                (Some("AND"), 2) => {
                    let a = resolve(args[0])?;
                    let b = resolve(args[1])?;
                    Node::And(a, b)
                }
                (Some("OR"), 2) => {
                    let a = resolve(args[0])?;
                    let b = resolve(args[1])?;
                    Node::Or(a, b)
                }
                (Some(op @ ("NOT" | "AND" | "OR")), k) => {
                    return Err(CircuitError::Syntax {
                        line,
                        msg: format!(
                            "{op} takes {} argument(s), got {k}",
                            if op == "NOT" { 1 } else { 2 }
                        ),
                    })
                }
                (Some(op), _) => {
                    return Err(CircuitError::Syntax {
                        line,
                        msg: format!("unknown operation {op:?}"),
                    })
                }
                (None, _) => {
                    return Err(CircuitError::Syntax {
                        line,
                        msg: "missing operation".into(),
                    })
                }
            };
            nodes.push(node);
            names.insert(name.to_string(), nodes.len() - 1);
        }

        let n = n.ok_or(CircuitError::MissingInputs)?;
        let output = output.ok_or(CircuitError::MissingOutput)?;
        Circuit::new(n, nodes, output)
    }

    /// Serializes back to the netlist format, naming gate `i` as `g<i>`.
    /// Reparsing the result reproduces the node list and output exactly.
    pub fn to_netlist(&self) -> String {
        let tok = |id: NodeId| -> String {
            match self.nodes[id] {
                Node::Input(i) => format!("x{i}"),
                Node::Const(false) => "0".into(),
                Node::Const(true) => "1".into(),
                _ => format!("g{id}"),
            }
        };
        let mut out = format!("inputs {}\n", self.n);
        for (id, node) in self.nodes.iter().enumerate() {
            match *node {
                Node::Input(_) | Node::Const(_) => {}
                Node::Not(a) => writeln!(out, "g{id} = NOT {}", tok(a)).unwrap(),
                Node::And(a, b) => writeln!(out, "g{id} = AND {} {}", tok(a), tok(b)).unwrap(),
                Node::Or(a, b) => writeln!(out, "g{id} = OR {} {}", tok(a), tok(b)).unwrap(),
            }
        }
        writeln!(out, "output {}", tok(self.output)).unwrap();
        out
    }

    /// A copy with every node unreachable from the output removed (ids are
    /// compacted, relative order preserved).
    pub(crate) fn pruned(&self) -> Circuit {
        let mut live = vec![false; self.nodes.len()];
        let mut stack = vec![self.output];
        while let Some(id) = stack.pop() {
            if live[id] {
                continue;
            }
            live[id] = true;
            match self.nodes[id] {
                Node::Input(_) | Node::Const(_) => {}
                Node::Not(a) => stack.push(a),
                Node::And(a, b) | Node::Or(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (id, node) in self.nodes.iter().enumerate() {
            if !live[id] {
                continue;
            }
            remap[id] = nodes.len();
            nodes.push(match *node {
                Node::Input(i) => Node::Input(i),
                Node::Const(b) => Node::Const(b),
                Node::Not(a) => Node::Not(remap[a]),
                Node::And(a, b) => Node::And(remap[a], remap[b]),
                Node::Or(a, b) => Node::Or(remap[a], remap[b]),
            });
        }
        Circuit {
            n: self.n,
            nodes,
            output: remap[self.output],
        }
    }
}

fn validate_name(name: &str, line: usize) -> Result<(), CircuitError> {
    let mut chars = name.chars();
    let head_ok = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !head_ok || !tail_ok {
        return Err(CircuitError::Syntax {
            line,
            msg: format!("bad gate name {name:?}"),
        });
    }
    if name == "inputs" || name == "output" || is_var_token(name) {
        return Err(CircuitError::Syntax {
            line,
            msg: format!("gate name {name:?} collides with a reserved form"),
        });
    }
    Ok(())
}

/// `xK` with K all digits — the token form of variable K.
fn is_var_token(tok: &str) -> bool {
    tok.len() > 1 && tok.starts_with('x') && tok[1..].bytes().all(|b| b.is_ascii_digit())
}

fn resolve_arg(
    tok: &str,
    line: usize,
    n: usize,
    nodes: &mut Vec<Node>,
    interned: &mut HashMap<Node, NodeId>,
    names: &HashMap<String, NodeId>,
) -> Result<NodeId, CircuitError> {
    let leaf = if tok == "0" {
        Node::Const(false)
    } else if tok == "1" {
        Node::Const(true)
    } else if is_var_token(tok) {
        let index: usize = tok[1..].parse().map_err(|_| CircuitError::Syntax {
            line,
            msg: format!("bad variable token {tok:?}"),
        })?;
        if index == 0 || index > n {
            return Err(CircuitError::InputOutOfRange { line, index, n });
        }
        Node::Input(index)
    } else if let Some(&id) = names.get(tok) {
        return Ok(id);
    } else if validate_name(tok, line).is_ok() {
        return Err(CircuitError::Undefined {
            line,
            name: tok.to_string(),
        });
    } else {
        return Err(CircuitError::Syntax {
            line,
            msg: format!("bad argument token {tok:?}"),
        });
    };
    Ok(*interned.entry(leaf).or_insert_with(|| {
        nodes.push(leaf);
        nodes.len() - 1
    }))
}

/// Incremental construction with interned leaves, for code that assembles
/// circuits gate by gate (the parallelizer, the corpus generators).
pub struct CircuitBuilder {
    n: usize,
    nodes: Vec<Node>,
    interned: HashMap<Node, NodeId>,
}

impl CircuitBuilder {
    pub fn new(n: usize) -> CircuitBuilder {
        CircuitBuilder {
            n,
            nodes: Vec::new(),
            interned: HashMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nodes emitted so far.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn leaf(&mut self, node: Node) -> NodeId {
        *self.interned.entry(node).or_insert_with(|| {
            self.nodes.push(node);
            self.nodes.len() - 1
        })
    }

    /// Node for variable `i` (1-indexed; panics if out of range).
    pub fn input(&mut self, i: usize) -> NodeId {
        assert!(
            i >= 1 && i <= self.n,
            "input x{i} out of range (n = {})",
            self.n
        );
        self.leaf(Node::Input(i))
    }

    pub fn constant(&mut self, b: bool) -> NodeId {
        self.leaf(Node::Const(b))
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        assert!(a < self.nodes.len());
        self.nodes.push(Node::Not(a));
        self.nodes.len() - 1
    }

    pub fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        assert!(a < self.nodes.len() && b < self.nodes.len());
        self.nodes.push(Node::And(a, b));
        self.nodes.len() - 1
    }

    pub fn or(&mut self, a: NodeId, b: NodeId) -> NodeId {
        assert!(a < self.nodes.len() && b < self.nodes.len());
        self.nodes.push(Node::Or(a, b));
        self.nodes.len() - 1
    }

    /// Finishes with the given output node. The builder maintains the
    /// `Circuit` invariants, so this cannot fail.
    pub fn finish(self, output: NodeId) -> Circuit {
        Circuit::new(self.n, self.nodes, output)
            .expect("builder-constructed circuits are valid by construction")
    }
}
