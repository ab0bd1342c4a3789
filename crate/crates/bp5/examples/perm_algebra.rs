//! A tour of the S5 toolbox: composition, inverses, conjugation, and the
//! commutator pair that makes width-5 programs expressive.

use bp5::perm5::{find_commutator_pair, find_conjugator, Perm5};
use std::str::FromStr;

fn main() {
    // Permutations are written as the images of 1..=5, so "23451" sends
    // 1→2, 2→3, …, 5→1. Composition is left to right: (a.compose(b)) means
    // "apply a, then b".
    let a = Perm5::from_str("23451").unwrap();
    let b = Perm5::from_str("21345").unwrap();
    println!("a          = {a}   (cycle type {:?})", a.cycle_type());
    println!("b          = {b}   (cycle type {:?})", b.cycle_type());
    println!("a then b   = {}", a.compose(b));
    println!("b then a   = {}", b.compose(a));
    println!("a⁻¹        = {}", a.inverse());
    println!("a·a⁻¹      = {}", a.compose(a.inverse()));
    println!();

    // Of the 120 permutations, exactly 24 are 5-cycles; they form a single
    // conjugacy class, so any one can be turned into any other.
    let five_cycles = Perm5::five_cycles();
    println!("5-cycles in S5: {}", five_cycles.len());
    let alpha = Perm5::from_str("23451").unwrap();
    let beta = Perm5::from_str("25134").unwrap();
    let g = find_conjugator(alpha, beta).unwrap();
    println!("g with g⁻¹·{alpha}·g = {beta}: g = {g}");
    assert_eq!(alpha.conjugate(g), beta);
    println!();

    // The engine of the whole construction: two 5-cycles whose commutator
    // σ₁σ₂σ₁⁻¹σ₂⁻¹ is again a 5-cycle. Both operands can then be recovered
    // from the commutator by conjugation, which is what lets AND cost only
    // a 4× blowup in program length.
    let (s1, s2) = find_commutator_pair();
    let c = s1.commutator(s2);
    println!("commutator pair: σ₁ = {s1}, σ₂ = {s2}");
    println!("σ₁σ₂σ₁⁻¹σ₂⁻¹ = {c}  (5-cycle: {})", c.is_five_cycle());

    // Contrast with a pair that fails: disjoint small cycles commute with
    // nothing interesting — their commutator collapses.
    let x = Perm5::from_str("21345").unwrap(); // swaps 1,2
    let y = Perm5::from_str("12354").unwrap(); // swaps 4,5
    println!(
        "disjoint swaps commute: commutator = {} (identity: {})",
        x.commutator(y),
        x.commutator(y) == Perm5::IDENTITY
    );
}
