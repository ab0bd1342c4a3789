//! Compile a circuit into a width-5 permutation program and watch the
//! length bound 4^depth hold — with equality on balanced AND trees.

use bp5::barrington::{compile_circuit, default_target};
use bp5::circuit::{Circuit, CircuitBuilder};
use bp5::equiv::index_to_input;
use bp5::perm5::Perm5;

fn main() {
    // Majority of three, straight from a netlist.
    let majority = Circuit::parse(
        "inputs 3\n\
         ab = AND x1 x2\n\
         ac = AND x1 x3\n\
         bc = AND x2 x3\n\
         or1 = OR ab ac\n\
         out = OR or1 bc\n\
         output out",
    )
    .unwrap();

    let target = default_target();
    let prog = compile_circuit(&majority, target).unwrap();
    println!(
        "majority(x1,x2,x3): {} gates, AND/OR depth {}",
        majority.gate_count(),
        majority.depth()
    );
    println!(
        "compiled: {} instructions (bound 4^{} = {}), target {target}",
        prog.len(),
        majority.depth(),
        4u64.pow(majority.depth() as u32)
    );
    println!();

    // The program's yield is always the identity or the target — the
    // function value is *which one*.
    println!("x1x2x3  yield  accept");
    for i in 0..8u64 {
        let x = index_to_input(i, 3);
        let y = prog.yield_perm(&x).unwrap();
        let accept = prog.eval(&x).unwrap();
        let bits: String = x.iter().map(|&b| if b { '1' } else { '0' }).collect();
        assert_eq!(y == target, accept);
        assert!(accept == (y == target) && (y == target || y == Perm5::IDENTITY));
        println!("{bits}     {y}  {accept}");
    }
    println!();

    // Balanced AND trees meet the bound exactly: each AND level multiplies
    // the length by 4.
    println!("balanced AND trees:");
    for depth in 1..=4u32 {
        let n = 1usize << depth;
        let mut b = CircuitBuilder::new(n);
        let mut layer: Vec<_> = (1..=n).map(|i| b.input(i)).collect();
        while layer.len() > 1 {
            layer = layer.chunks(2).map(|p| b.and(p[0], p[1])).collect();
        }
        let tree = b.finish(layer[0]);
        let prog = compile_circuit(&tree, target).unwrap();
        println!(
            "  depth {depth}: AND of {n:2} inputs -> length {:4} = 4^{depth}",
            prog.len()
        );
        assert_eq!(prog.len() as u64, 4u64.pow(depth));
    }
}
