//! Compiling circuits into width-5 permutation branching programs.
//!
//! The construction is Barrington's: a literal becomes one instruction; NOT
//! folds the inverse target into the last instruction; AND of two programs
//! is the commutator of retargeted copies, which costs twice each operand
//! and is why a depth-`d` circuit compiles to length at most `4^d`. OR is
//! De Morgan over AND and NOT. Everything relies on the left-to-right
//! composition convention fixed in [`crate::perm5`].
//!
//! Targets: every compiler entry point produces a program whose target is
//! the caller's σ, so subprograms for a circuit's gates can be concatenated
//! freely. Internally AND routes through the commutator pair and retargets
//! the result back.

use crate::bp::{BpError, Instruction, PermProgram};
use crate::circuit::{Circuit, Node, NodeId};
use crate::perm5::{find_commutator_pair, find_conjugator, Perm5, PermError};
use thiserror::Error;

/// Above this predicted length the compiler logs a warning.
pub const WARN_INSTRUCTIONS: u128 = 1_000_000;
/// Above this predicted length the compiler refuses to run.
pub const MAX_INSTRUCTIONS: u128 = 100_000_000;

/// Errors from the circuit-to-program compiler.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("variable index {index} out of range (program reads {n} inputs)")]
    VarOutOfRange { index: usize, n: usize },
    #[error("a constant-1 program needs at least one variable to read")]
    NoVariables,
    #[error("operands read different input counts: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("compilation would emit {predicted} instructions, over the {limit} limit")]
    ResourceLimit { predicted: u128, limit: u128 },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Bp(#[from] BpError),
}

/// The default top-level target: the cycle 1→2→3→4→5→1.
pub fn default_target() -> Perm5 {
    "23451".parse().expect("fixed literal is a valid 5-cycle")
}

/// One instruction that α-computes the literal `x_var`: apply α when the
/// variable is 1, do nothing otherwise.
pub fn compile_literal(var: usize, alpha: Perm5, n: usize) -> Result<PermProgram, CompileError> {
    require_cycle(alpha)?;
    if var == 0 || var > n {
        return Err(CompileError::VarOutOfRange { index: var, n });
    }
    Ok(PermProgram::new(
        n,
        vec![Instruction {
            var,
            perm1: alpha,
            perm0: Perm5::IDENTITY,
        }],
        alpha,
    )?)
}

/// α-computes a constant. Constant 0 is the empty program; constant 1 reads
/// an arbitrary variable and applies α on both branches, which is only
/// possible when there is a variable to read.
pub fn compile_const(bit: bool, alpha: Perm5, n: usize) -> Result<PermProgram, CompileError> {
    require_cycle(alpha)?;
    if !bit {
        return Ok(PermProgram::empty(n, alpha)?);
    }
    if n == 0 {
        return Err(CompileError::NoVariables);
    }
    Ok(PermProgram::new(
        n,
        vec![Instruction {
            var: 1,
            perm1: alpha,
            perm0: alpha,
        }],
        alpha,
    )?)
}

/// Conjugates every instruction by the canonical witness `g` with
/// `g⁻¹·target·g = beta`, producing a program with the same length that
/// β-computes the same function.
pub fn retarget(prog: &PermProgram, beta: Perm5) -> Result<PermProgram, CompileError> {
    require_cycle(beta)?;
    let g = find_conjugator(prog.target(), beta)?;
    let instructions = prog
        .instructions()
        .iter()
        .map(|ins| Instruction {
            var: ins.var,
            perm1: ins.perm1.conjugate(g),
            perm0: ins.perm0.conjugate(g),
        })
        .collect();
    Ok(PermProgram::new(prog.n(), instructions, beta)?)
}

/// Reverses the program and inverts every permutation, so the yield on each
/// input is inverted: the result target⁻¹-computes the same function.
pub fn invert_target(prog: &PermProgram) -> PermProgram {
    let instructions = prog
        .instructions()
        .iter()
        .rev()
        .map(|ins| Instruction {
            var: ins.var,
            perm1: ins.perm1.inverse(),
            perm0: ins.perm0.inverse(),
        })
        .collect();
    PermProgram::new(prog.n(), instructions, prog.target().inverse())
        .expect("inverting a valid program preserves validity")
}

/// Same length, same target, computes the negation. Appending target⁻¹ to
/// the final instruction turns a yield of target into identity and vice
/// versa (making the program target⁻¹-compute ¬f); retargeting restores the
/// original target. The negation of an empty program is constant 1, which
/// needs a variable.
pub fn compile_not(prog: &PermProgram) -> Result<PermProgram, CompileError> {
    if prog.is_empty() {
        return compile_const(true, prog.target(), prog.n());
    }
    let inv = prog.target().inverse();
    let mut instructions = prog.instructions().to_vec();
    let last = instructions.last_mut().expect("nonempty");
    last.perm1 = last.perm1.compose(inv);
    last.perm0 = last.perm0.compose(inv);
    let flipped = PermProgram::new(prog.n(), instructions, inv)?;
    retarget(&flipped, prog.target())
}

/// The commutator construction: retarget the operands to the canonical pair
/// (σ₁, σ₂), then run first·second·first⁻¹·second⁻¹. The yield is the
/// commutator of the pair — a 5-cycle — exactly when both operands fire,
/// and the identity otherwise. Costs 2·len(p) + 2·len(q); the result keeps
/// `p`'s target.
pub fn compile_and(p: &PermProgram, q: &PermProgram) -> Result<PermProgram, CompileError> {
    if p.n() != q.n() {
        return Err(CompileError::ArityMismatch {
            left: p.n(),
            right: q.n(),
        });
    }
    let (s1, s2) = find_commutator_pair();
    let a = retarget(p, s1)?;
    let b = retarget(q, s2)?;
    let a_inv = invert_target(&a);
    let b_inv = invert_target(&b);
    let raw = PermProgram::concat(&[&a, &b, &a_inv, &b_inv], s1.commutator(s2))?;
    retarget(&raw, p.target())
}

/// De Morgan: ¬(¬p ∧ ¬q). Costs 2·max(len(p),1) + 2·max(len(q),1) because
/// negating an empty operand first materializes a constant-1 instruction.
pub fn compile_or(p: &PermProgram, q: &PermProgram) -> Result<PermProgram, CompileError> {
    if p.n() != q.n() {
        return Err(CompileError::ArityMismatch {
            left: p.n(),
            right: q.n(),
        });
    }
    let np = compile_not(p)?;
    let nq = compile_not(q)?;
    compile_not(&compile_and(&np, &nq)?)
}

/// Predicted instruction count for `compile_circuit`, from the per-gate
/// cost recurrence (literal 1, constant 0 or 1, NOT preserves length but
/// never below 1, AND/OR double and add). Saturates at `u128::MAX`.
pub fn compiled_length(circuit: &Circuit) -> u128 {
    let mut len = vec![0u128; circuit.nodes().len()];
    for id in reachable_order(circuit) {
        len[id] = match circuit.nodes()[id] {
            Node::Input(_) => 1,
            Node::Const(b) => b as u128,
            Node::Not(a) => len[a].max(1),
            Node::And(a, b) => len[a]
                .saturating_mul(2)
                .saturating_add(len[b].saturating_mul(2)),
            Node::Or(a, b) => len[a]
                .max(1)
                .saturating_mul(2)
                .saturating_add(len[b].max(1).saturating_mul(2)),
        };
    }
    len[circuit.output()]
}

/// Compiles a circuit into a program that σ-computes it: the yield on input
/// `x` is σ when the circuit outputs 1 and the identity when it outputs 0.
///
/// The length is at most `4^depth` (AND/OR depth; NOT is free) — checked on
/// every compile. Fan-out is handled by expansion: each use of a shared
/// node re-emits its subprogram. The predicted length is checked before any
/// work happens: past [`WARN_INSTRUCTIONS`] a warning is logged, past
/// [`MAX_INSTRUCTIONS`] compilation is refused.
pub fn compile_circuit(circuit: &Circuit, sigma: Perm5) -> Result<PermProgram, CompileError> {
    require_cycle(sigma)?;
    let predicted = compiled_length(circuit);
    if predicted > MAX_INSTRUCTIONS {
        return Err(CompileError::ResourceLimit {
            predicted,
            limit: MAX_INSTRUCTIONS,
        });
    }
    if predicted > WARN_INSTRUCTIONS {
        log::warn!(
            "compiling a circuit of depth {} into {predicted} instructions",
            circuit.depth()
        );
    }

    let order = reachable_order(circuit);
    // Free each subprogram once its last consumer is compiled, keeping peak
    // memory near the output size rather than the sum over all gates.
    let mut uses = vec![0usize; circuit.nodes().len()];
    for &id in &order {
        match circuit.nodes()[id] {
            Node::Input(_) | Node::Const(_) => {}
            Node::Not(a) => uses[a] += 1,
            Node::And(a, b) | Node::Or(a, b) => {
                uses[a] += 1;
                uses[b] += 1;
            }
        }
    }
    uses[circuit.output()] += 1;

    let n = circuit.n();
    let mut progs: Vec<Option<PermProgram>> = vec![None; circuit.nodes().len()];
    for &id in &order {
        let mut operand = |op: NodeId, progs: &mut Vec<Option<PermProgram>>| {
            let prog = progs[op]
                .clone()
                .expect("topological order compiles operands first");
            uses[op] -= 1;
            if uses[op] == 0 {
                progs[op] = None;
            }
            prog
        };
        let prog = match circuit.nodes()[id] {
            Node::Input(i) => compile_literal(i, sigma, n)?,
            Node::Const(b) => compile_const(b, sigma, n)?,
            Node::Not(a) => {
                let pa = operand(a, &mut progs);
                compile_not(&pa)?
            }
            Node::And(a, b) => {
                let pa = operand(a, &mut progs);
                let pb = operand(b, &mut progs);
                compile_and(&pa, &pb)?
            }
            Node::Or(a, b) => {
                let pa = operand(a, &mut progs);
                let pb = operand(b, &mut progs);
                compile_or(&pa, &pb)?
            }
        };
        progs[id] = Some(prog);
    }
    let result = progs[circuit.output()]
        .take()
        .expect("output is reachable from itself");

    assert_eq!(result.len() as u128, predicted, "cost model out of sync");
    let bound = 4u128.saturating_pow(circuit.depth() as u32);
    assert!(
        result.len() as u128 <= bound,
        "compiled length {} exceeds 4^depth = {bound}",
        result.len()
    );
    Ok(result)
}

/// Node ids reachable from the output, in ascending (hence topological)
/// order.
fn reachable_order(circuit: &Circuit) -> Vec<NodeId> {
    let mut live = vec![false; circuit.nodes().len()];
    let mut stack = vec![circuit.output()];
    while let Some(id) = stack.pop() {
        if live[id] {
            continue;
        }
        live[id] = true;
        match circuit.nodes()[id] {
            Node::Input(_) | Node::Const(_) => {}
            Node::Not(a) => stack.push(a),
            Node::And(a, b) | Node::Or(a, b) => {
                stack.push(a);
                stack.push(b);
            }
        }
    }
    (0..circuit.nodes().len()).filter(|&id| live[id]).collect()
}

fn require_cycle(p: Perm5) -> Result<(), CompileError> {
    if p.is_five_cycle() {
        Ok(())
    } else {
        Err(PermError::NotFiveCycle(p).into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm5::Perm5;

    fn sigma() -> Perm5 {
        default_target()
    }

    fn bits(i: usize, n: usize) -> Vec<bool> {
        (0..n).map(|j| (i >> j) & 1 == 1).collect()
    }

    /// Checks that `prog` σ-computes `f` exhaustively, including that every
    /// yield is identity or target.
    fn assert_computes(prog: &PermProgram, f: impl Fn(&[bool]) -> bool) {
        for i in 0..1usize << prog.n() {
            let x = bits(i, prog.n());
            let y = prog.yield_perm(&x).unwrap();
            assert!(
                y == Perm5::IDENTITY || y == prog.target(),
                "yield {y} on {x:?}"
            );
            assert_eq!(prog.eval(&x).unwrap(), f(&x), "wrong value on {x:?}");
        }
    }

    #[test]
    fn literal_is_one_instruction() {
        let prog = compile_literal(2, sigma(), 3).unwrap();
        assert_eq!(prog.len(), 1);
        assert_computes(&prog, |x| x[1]);
        assert!(matches!(
            compile_literal(4, sigma(), 3),
            Err(CompileError::VarOutOfRange { index: 4, n: 3 })
        ));
        assert!(matches!(
            compile_literal(1, "21345".parse().unwrap(), 3),
            Err(CompileError::Perm(PermError::NotFiveCycle(_)))
        ));
    }

    #[test]
    fn constants_compile() {
        let zero = compile_const(false, sigma(), 2).unwrap();
        assert_eq!(zero.len(), 0);
        assert_computes(&zero, |_| false);

        let one = compile_const(true, sigma(), 2).unwrap();
        assert_eq!(one.len(), 1);
        assert_computes(&one, |_| true);

        assert!(compile_const(false, sigma(), 0).is_ok());
        assert!(matches!(
            compile_const(true, sigma(), 0),
            Err(CompileError::NoVariables)
        ));
    }

    #[test]
    fn retarget_changes_only_the_target() {
        let prog = compile_literal(1, sigma(), 2).unwrap();
        for &beta in Perm5::five_cycles() {
            let re = retarget(&prog, beta).unwrap();
            assert_eq!(re.target(), beta);
            assert_eq!(re.len(), prog.len());
            assert_computes(&re, |x| x[0]);
        }
    }

    #[test]
    fn invert_target_inverts_every_yield() {
        let prog = compile_and(
            &compile_literal(1, sigma(), 2).unwrap(),
            &compile_literal(2, sigma(), 2).unwrap(),
        )
        .unwrap();
        let inv = invert_target(&prog);
        assert_eq!(inv.target(), prog.target().inverse());
        for i in 0..4 {
            let x = bits(i, 2);
            assert_eq!(
                inv.yield_perm(&x).unwrap(),
                prog.yield_perm(&x).unwrap().inverse()
            );
        }
    }

    #[test]
    fn not_flips_the_function_at_equal_length() {
        let lit = compile_literal(1, sigma(), 1).unwrap();
        let not = compile_not(&lit).unwrap();
        assert_eq!(not.len(), lit.len());
        assert_eq!(not.target(), sigma());
        assert_computes(&not, |x| !x[0]);

        let double = compile_not(&not).unwrap();
        assert_computes(&double, |x| x[0]);

        // ¬0 = 1 via the empty-program special case.
        let one = compile_not(&compile_const(false, sigma(), 1).unwrap()).unwrap();
        assert_computes(&one, |_| true);
        assert!(matches!(
            compile_not(&compile_const(false, sigma(), 0).unwrap()),
            Err(CompileError::NoVariables)
        ));
    }

    #[test]
    fn and_is_the_commutator_of_its_operands() {
        let p = compile_literal(1, sigma(), 2).unwrap();
        let q = compile_literal(2, sigma(), 2).unwrap();
        let and = compile_and(&p, &q).unwrap();
        assert_eq!(and.len(), 4);
        assert_eq!(and.target(), sigma());
        assert_computes(&and, |x| x[0] && x[1]);

        // Degenerate operands.
        let zero = compile_const(false, sigma(), 2).unwrap();
        let and_zero = compile_and(&p, &zero).unwrap();
        assert_computes(&and_zero, |_| false);
        let one = compile_const(true, sigma(), 2).unwrap();
        let and_one = compile_and(&p, &one).unwrap();
        assert_computes(&and_one, |x| x[0]);

        assert!(matches!(
            compile_and(&p, &compile_literal(1, sigma(), 3).unwrap()),
            Err(CompileError::ArityMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn or_by_de_morgan() {
        let p = compile_literal(1, sigma(), 2).unwrap();
        let q = compile_literal(2, sigma(), 2).unwrap();
        let or = compile_or(&p, &q).unwrap();
        assert_eq!(or.len(), 4);
        assert_computes(&or, |x| x[0] || x[1]);

        let zero = compile_const(false, sigma(), 2).unwrap();
        let or_zero = compile_or(&p, &zero).unwrap();
        assert_computes(&or_zero, |x| x[0]);
        assert_eq!(or_zero.len(), 4);
    }

    #[test]
    fn nested_gates_compose() {
        // (x1 AND x2) OR (NOT x3): depth 2, so length ≤ 16.
        let a = compile_and(
            &compile_literal(1, sigma(), 3).unwrap(),
            &compile_literal(2, sigma(), 3).unwrap(),
        )
        .unwrap();
        let b = compile_not(&compile_literal(3, sigma(), 3).unwrap()).unwrap();
        let prog = compile_or(&a, &b).unwrap();
        assert!(prog.len() <= 16);
        assert_computes(&prog, |x| (x[0] && x[1]) || !x[2]);
    }

    #[test]
    fn compile_circuit_handles_sharing_and_dead_gates() {
        let text = "\
inputs 3
shared = AND x1 x2
dead = OR x1 x3
a = OR shared x3
b = AND a shared
output b
";
        let c = crate::circuit::Circuit::parse(text).unwrap();
        let prog = compile_circuit(&c, sigma()).unwrap();
        assert_eq!(prog.len() as u128, compiled_length(&c));
        for i in 0..8 {
            let x = bits(i, 3);
            assert_eq!(prog.eval(&x).unwrap(), c.eval(&x).unwrap());
        }
    }

    #[test]
    fn compile_circuit_propagates_the_target() {
        let c = crate::circuit::Circuit::parse("inputs 2\ng = OR x1 x2\noutput g\n").unwrap();
        for &beta in Perm5::five_cycles().iter().take(6) {
            let prog = compile_circuit(&c, beta).unwrap();
            assert_eq!(prog.target(), beta);
            for i in 0..4 {
                let x = bits(i, 2);
                assert_eq!(prog.eval(&x).unwrap(), c.eval(&x).unwrap());
            }
        }
    }

    #[test]
    fn and_tree_lengths_hit_four_to_the_depth() {
        // Balanced AND trees of depth 1, 2, 3 over distinct variables.
        for (depth, n) in [(1usize, 2usize), (2, 4), (3, 8)] {
            let mut lines = vec![format!("inputs {n}")];
            let mut layer: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
            let mut next_id = 0;
            while layer.len() > 1 {
                let mut next = Vec::new();
                for pair in layer.chunks(2) {
                    let name = format!("g{next_id}");
                    next_id += 1;
                    lines.push(format!("{name} = AND {} {}", pair[0], pair[1]));
                    next.push(name);
                }
                layer = next;
            }
            lines.push(format!("output {}", layer[0]));
            let c = crate::circuit::Circuit::parse(&(lines.join("\n") + "\n")).unwrap();
            assert_eq!(c.depth(), depth);
            let prog = compile_circuit(&c, sigma()).unwrap();
            assert_eq!(prog.len(), 4usize.pow(depth as u32));
            assert_computes(&prog, |x| x.iter().all(|&b| b));
        }
    }

    #[test]
    fn resource_limit_trips_before_compiling() {
        // A chain of 40 ANDs doubles the length 40 times: 2^40 ≫ the limit.
        let mut lines = vec!["inputs 1".to_string(), "g0 = AND x1 x1".to_string()];
        for i in 1..40 {
            lines.push(format!("g{i} = AND g{} g{}", i - 1, i - 1));
        }
        lines.push("output g39".to_string());
        let c = crate::circuit::Circuit::parse(&(lines.join("\n") + "\n")).unwrap();
        match compile_circuit(&c, sigma()) {
            Err(CompileError::ResourceLimit { predicted, limit }) => {
                assert_eq!(limit, MAX_INSTRUCTIONS);
                assert!(predicted > limit);
            }
            other => panic!("expected a resource limit, got {other:?}"),
        }
    }

    #[test]
    fn cost_model_saturates_instead_of_overflowing() {
        // 200 doublings would overflow u128 if unchecked.
        let mut lines = vec!["inputs 1".to_string(), "g0 = AND x1 x1".to_string()];
        for i in 1..200 {
            lines.push(format!("g{i} = AND g{} g{}", i - 1, i - 1));
        }
        lines.push("output g199".to_string());
        let c = crate::circuit::Circuit::parse(&(lines.join("\n") + "\n")).unwrap();
        assert!(compiled_length(&c) > MAX_INSTRUCTIONS);
    }
}
