//! Exact algebra over the symmetric group S5 on the states {1,…,5}.
//!
//! Everything downstream — instruction concatenation, retargeting, the
//! commutator trick — hinges on a single composition convention, fixed here
//! once and for all: **composition reads left to right**. `a.compose(b)`
//! applies `a` first and `b` second, matching the order in which a
//! permutation program executes its instructions.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

/// Errors from constructing or parsing permutations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("images {0:?} are not a permutation of 1..=5")]
    NotAPermutation([u8; 5]),
    #[error("expected a 5-cycle, got {0}")]
    NotFiveCycle(Perm5),
    #[error("bad permutation literal {0:?}: want exactly five characters from '1'..='5'")]
    BadLiteral(String),
}

/// A permutation of {1,…,5}, stored as its image table: `image(s)` is where
/// state `s` goes.
///
/// The textual form is the image table as five digits, so `"23451"` is the
/// cycle sending 1→2, 2→3, 3→4, 4→5, 5→1. The derived `Ord` is
/// lexicographic on that table; "smallest" below always means smallest in
/// this order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm5 {
    images: [u8; 5],
}

impl Perm5 {
    /// The identity permutation.
    pub const IDENTITY: Perm5 = Perm5 {
        images: [1, 2, 3, 4, 5],
    };

    /// Builds a permutation from its image table (`images[s-1]` is the image
    /// of `s`). Fails unless the table is a bijection on {1,…,5}.
    pub fn new(images: [u8; 5]) -> Result<Perm5, PermError> {
        let mut seen = [false; 5];
        for &v in &images {
            if !(1..=5).contains(&v) || seen[v as usize - 1] {
                return Err(PermError::NotAPermutation(images));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Perm5 { images })
    }

    /// The image of state `s` (1-indexed; panics if `s` is out of range).
    pub fn image(self, s: u8) -> u8 {
        assert!((1..=5).contains(&s), "state {s} out of range 1..=5");
        self.images[s as usize - 1]
    }

    /// The raw image table.
    pub fn images(self) -> [u8; 5] {
        self.images
    }

    /// Left-to-right composition: the result maps `s` to `other(self(s))`,
    /// i.e. `self` acts first.
    pub fn compose(self, other: Perm5) -> Perm5 {
        let mut images = [0u8; 5];
        for (img, &first) in images.iter_mut().zip(&self.images) {
            *img = other.images[first as usize - 1];
        }
        Perm5 { images }
    }

    /// The inverse permutation.
    pub fn inverse(self) -> Perm5 {
        let mut images = [0u8; 5];
        for s in 0..5 {
            images[self.images[s] as usize - 1] = s as u8 + 1;
        }
        Perm5 { images }
    }

    /// Conjugation `g⁻¹ · self · g` (left to right: first undo `g`, then
    /// apply `self`, then apply `g`). Conjugation relabels the cycle
    /// structure of `self` along `g` without changing its shape.
    pub fn conjugate(self, g: Perm5) -> Perm5 {
        g.inverse().compose(self).compose(g)
    }

    /// The commutator `self · other · self⁻¹ · other⁻¹`, composed left to
    /// right.
    pub fn commutator(self, other: Perm5) -> Perm5 {
        self.compose(other)
            .compose(self.inverse())
            .compose(other.inverse())
    }

    /// Whether the permutation is a single cycle through all five states.
    pub fn is_five_cycle(self) -> bool {
        let mut s = 1u8;
        for _ in 0..4 {
            s = self.image(s);
            if s == 1 {
                return false;
            }
        }
        self.image(s) == 1
    }

    /// Cycle lengths in ascending order; the identity is `[1,1,1,1,1]` and a
    /// 5-cycle is `[5]`.
    pub fn cycle_type(self) -> Vec<u8> {
        let mut seen = [false; 5];
        let mut lens = Vec::new();
        for start in 1..=5u8 {
            if seen[start as usize - 1] {
                continue;
            }
            let mut len = 0u8;
            let mut s = start;
            loop {
                seen[s as usize - 1] = true;
                len += 1;
                s = self.image(s);
                if s == start {
                    break;
                }
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }

    /// All 120 permutations in lexicographic image-table order.
    pub fn all() -> &'static [Perm5] {
        static ALL: OnceLock<Vec<Perm5>> = OnceLock::new();
        ALL.get_or_init(|| {
            let mut out = Vec::with_capacity(120);
            let mut images = [0u8; 5];
            fn fill(images: &mut [u8; 5], depth: usize, used: u8, out: &mut Vec<Perm5>) {
                if depth == 5 {
                    out.push(Perm5 { images: *images });
                    return;
                }
                for v in 1..=5u8 {
                    if used & (1 << v) == 0 {
                        images[depth] = v;
                        fill(images, depth + 1, used | (1 << v), out);
                    }
                }
            }
            fill(&mut images, 0, 0, &mut out);
            out
        })
    }

    /// The 24 five-cycles, in lexicographic order.
    pub fn five_cycles() -> &'static [Perm5] {
        static CYCLES: OnceLock<Vec<Perm5>> = OnceLock::new();
        CYCLES.get_or_init(|| {
            Perm5::all()
                .iter()
                .copied()
                .filter(|p| p.is_five_cycle())
                .collect()
        })
    }
}

impl fmt::Display for Perm5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.images {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm5(\"{self}\")")
    }
}

impl FromStr for Perm5 {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        if bytes.len() != 5 || bytes.iter().any(|b| !(b'1'..=b'5').contains(b)) {
            return Err(PermError::BadLiteral(s.to_string()));
        }
        let mut images = [0u8; 5];
        for (i, &b) in bytes.iter().enumerate() {
            images[i] = b - b'0';
        }
        Perm5::new(images)
    }
}

/// The lexicographically smallest `g` with `alpha.conjugate(g) == beta`.
/// Both arguments must be 5-cycles; any two 5-cycles are conjugate in S5, so
/// for valid arguments a conjugator always exists.
pub fn find_conjugator(alpha: Perm5, beta: Perm5) -> Result<Perm5, PermError> {
    if !alpha.is_five_cycle() {
        return Err(PermError::NotFiveCycle(alpha));
    }
    if !beta.is_five_cycle() {
        return Err(PermError::NotFiveCycle(beta));
    }
    Ok(Perm5::all()
        .iter()
        .copied()
        .find(|&g| alpha.conjugate(g) == beta)
        .expect("any two 5-cycles are conjugate in S5"))
}

/// The lexicographically first pair of 5-cycles whose commutator is again a
/// 5-cycle (ordered by the first element, then the second). This is the pair
/// the AND construction is built on; S5 is non-solvable, so the search cannot
/// come up empty — if it ever does, the algebra above is broken.
pub fn find_commutator_pair() -> (Perm5, Perm5) {
    static PAIR: OnceLock<(Perm5, Perm5)> = OnceLock::new();
    *PAIR.get_or_init(|| {
        for &a in Perm5::five_cycles() {
            for &b in Perm5::five_cycles() {
                if a.commutator(b).is_five_cycle() {
                    return (a, b);
                }
            }
        }
        panic!("no 5-cycle commutator pair found in S5; the group algebra is broken");
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::IndexedRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: compose by chasing each point through both maps.
    fn compose_pointwise(a: Perm5, b: Perm5) -> [u8; 5] {
        let mut images = [0u8; 5];
        for s in 1..=5u8 {
            images[s as usize - 1] = b.image(a.image(s));
        }
        images
    }

    /// Independent oracle: a 5-cycle returns to 1 in exactly five steps.
    fn cycle_walk_is_five_cycle(p: Perm5) -> bool {
        let mut s = 1u8;
        for step in 1..=5 {
            s = p.image(s);
            if s == 1 {
                return step == 5;
            }
        }
        false
    }

    fn p(s: &str) -> Perm5 {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_non_bijections() {
        assert_eq!(
            Perm5::new([1, 1, 3, 4, 5]),
            Err(PermError::NotAPermutation([1, 1, 3, 4, 5]))
        );
        assert_eq!(
            Perm5::new([0, 2, 3, 4, 5]),
            Err(PermError::NotAPermutation([0, 2, 3, 4, 5]))
        );
        assert!("12345".parse::<Perm5>().is_ok());
        assert_eq!(
            "1234".parse::<Perm5>(),
            Err(PermError::BadLiteral("1234".into()))
        );
        assert_eq!(
            "123456".parse::<Perm5>(),
            Err(PermError::BadLiteral("123456".into()))
        );
        assert_eq!(
            "12346".parse::<Perm5>(),
            Err(PermError::BadLiteral("12346".into()))
        );
        assert_eq!(
            "11345".parse::<Perm5>(),
            Err(PermError::NotAPermutation([1, 1, 3, 4, 5]))
        );
    }

    #[test]
    fn display_round_trips() {
        for &q in Perm5::all() {
            assert_eq!(p(&q.to_string()), q);
        }
    }

    #[test]
    fn composition_is_left_to_right() {
        // Frozen: applying 1→2→3→4→5→1 twice shifts every state by two.
        assert_eq!(p("23451").compose(p("23451")), p("34512"));
        // Order matters; fix one asymmetric case by hand. With a = 21345
        // (swap 1,2) and b = 13245 (swap 2,3): a then b sends 1→2→3.
        assert_eq!(p("21345").compose(p("13245")).image(1), 3);
        assert_eq!(p("13245").compose(p("21345")).image(1), 2);
    }

    #[test]
    fn compose_matches_pointwise_oracle_exhaustively() {
        for &a in Perm5::all() {
            for &b in Perm5::all() {
                assert_eq!(a.compose(b).images(), compose_pointwise(a, b));
            }
        }
    }

    #[test]
    fn inverse_cancels_both_sides() {
        assert_eq!(p("23451").inverse(), p("51234"));
        for &a in Perm5::all() {
            assert_eq!(a.compose(a.inverse()), Perm5::IDENTITY);
            assert_eq!(a.inverse().compose(a), Perm5::IDENTITY);
        }
    }

    #[test]
    fn composition_is_associative_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..1000 {
            let a = *Perm5::all().choose(&mut rng).unwrap();
            let b = *Perm5::all().choose(&mut rng).unwrap();
            let c = *Perm5::all().choose(&mut rng).unwrap();
            assert_eq!(a.compose(b).compose(c), a.compose(b.compose(c)));
        }
    }

    #[test]
    fn five_cycle_detection_matches_cycle_walk() {
        let mut count = 0;
        for &q in Perm5::all() {
            assert_eq!(q.is_five_cycle(), cycle_walk_is_five_cycle(q));
            if q.is_five_cycle() {
                count += 1;
            }
        }
        // 4! cyclic orderings of the five states.
        assert_eq!(count, 24);
        assert_eq!(Perm5::five_cycles().len(), 24);
    }

    #[test]
    fn cycle_types_partition_five() {
        for &q in Perm5::all() {
            let ty = q.cycle_type();
            assert_eq!(ty.iter().map(|&l| l as usize).sum::<usize>(), 5);
        }
        assert_eq!(Perm5::IDENTITY.cycle_type(), vec![1, 1, 1, 1, 1]);
        assert_eq!(p("23451").cycle_type(), vec![5]);
        assert_eq!(p("21345").cycle_type(), vec![1, 1, 1, 2]);
    }

    #[test]
    fn conjugation_preserves_cycle_type_on_all_pairs() {
        // 120 × 120 = 14,400 pairs, all checked.
        for &q in Perm5::all() {
            for &g in Perm5::all() {
                assert_eq!(q.conjugate(g).cycle_type(), q.cycle_type());
            }
        }
    }

    #[test]
    fn all_is_lexicographic_and_complete() {
        let all = Perm5::all();
        assert_eq!(all.len(), 120);
        for w in all.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(all[0], Perm5::IDENTITY);
        assert_eq!(all[119], p("54321"));
    }

    #[test]
    fn find_conjugator_is_minimal_and_correct() {
        for &a in Perm5::five_cycles() {
            for &b in Perm5::five_cycles() {
                let g = find_conjugator(a, b).unwrap();
                assert_eq!(a.conjugate(g), b);
                // Minimality: no lexicographically smaller witness.
                for &h in Perm5::all() {
                    if h >= g {
                        break;
                    }
                    assert_ne!(a.conjugate(h), b);
                }
            }
        }
        assert_eq!(
            find_conjugator(a_non_cycle(), p("23451")),
            Err(PermError::NotFiveCycle(a_non_cycle()))
        );
        assert_eq!(
            find_conjugator(p("23451"), a_non_cycle()),
            Err(PermError::NotFiveCycle(a_non_cycle()))
        );
        // Conjugating a cycle by itself fixes it, so the self-conjugator is
        // the identity.
        assert_eq!(
            find_conjugator(p("23451"), p("23451")).unwrap(),
            Perm5::IDENTITY
        );
    }

    fn a_non_cycle() -> Perm5 {
        p("21345")
    }

    #[test]
    fn commutator_pair_is_frozen_and_valid() {
        let (a, b) = find_commutator_pair();
        // Frozen values, found by the exhaustive search and verified by hand:
        // a = (1 2 3 4 5), b = (1 2 4 5 3), and their commutator walks
        // 1→5→3→2→4→1.
        assert_eq!(a, p("23451"));
        assert_eq!(b, p("24153"));
        let c = a.commutator(b);
        assert_eq!(c, p("54213"));
        assert!(c.is_five_cycle());
        // Lexicographic minimality of the pair.
        for &x in Perm5::five_cycles() {
            for &y in Perm5::five_cycles() {
                if (x, y) >= (a, b) {
                    break;
                }
                assert!(!x.commutator(y).is_five_cycle());
            }
        }
    }

    #[test]
    fn commutator_of_commuting_elements_is_identity() {
        let a = p("23451");
        // Powers of a commute with a.
        let a2 = a.compose(a);
        assert_eq!(a.commutator(a2), Perm5::IDENTITY);
        assert_eq!(a.commutator(Perm5::IDENTITY), Perm5::IDENTITY);
    }
}
