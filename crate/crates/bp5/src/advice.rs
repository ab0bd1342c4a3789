//! Advice tapes and the constant-space two-tape interpreter.
//!
//! A width-5 permutation program serializes onto a one-way *advice tape*
//! over the alphabet `B I u m 1 2 3 4 5 a r A E`:
//!
//! ```text
//! B ( I var-block perm1-block perm0-block )* A accept-block E
//! ```
//!
//! Per instruction: `I`, then one symbol per input variable (`m` marks the
//! variable the instruction reads, `u` everywhere else), then the five
//! digits of the 1-branch permutation, then the five digits of the
//! 0-branch. The accept block holds `a` at the accepting state (where the
//! target sends state 1) and `r` elsewhere. A length-`L` program over `n`
//! variables encodes in exactly `2 + L·(11+n) + 6` symbols.
//!
//! [`run_tm`] re-executes the program off the tape with a machine that has
//! *no* random-access storage: a read-only two-way input tape bracketed by
//! end markers, the read-only strictly one-way advice head, and exactly
//! four mutable registers — the control state, the program state
//! `s ∈ 1..=5`, one input bit `b`, and a digit counter `c ∈ 1..=5`. The
//! register space is therefore a fixed constant, independent of the input
//! length and the advice length, and every run records a witness set of the
//! register snapshots it actually visited so the bound is checked, not
//! argued.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::bp::{Instruction, PermProgram};
use crate::perm5::Perm5;

/// Errors from parsing, decoding, or running advice tapes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdviceError {
    #[error("tape offset {offset}: {msg}")]
    Grammar { offset: usize, msg: String },
    #[error("input has {got} bits but the tape encodes programs over {expected}")]
    InputLengthMismatch { expected: usize, got: usize },
}

/// A validated advice tape: the raw symbols plus the variable count
/// inferred from the first instruction's var block (0 if there are no
/// instructions).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AdviceTape {
    symbols: Vec<u8>,
    n: usize,
}

impl AdviceTape {
    /// Validates a symbol string against the grammar: block structure,
    /// alphabet, equal-length var blocks with exactly one mark, and
    /// permutation blocks that really are permutations.
    pub fn parse(text: &str) -> Result<AdviceTape, AdviceError> {
        let s = text.as_bytes();
        let err = |offset: usize, msg: &str| AdviceError::Grammar {
            offset,
            msg: msg.to_string(),
        };
        let mut pos = 0usize;
        if s.first() != Some(&b'B') {
            return Err(err(0, "tape must begin with B"));
        }
        pos += 1;
        let mut n: Option<usize> = None;
        loop {
            match s.get(pos) {
                Some(b'I') => {
                    pos += 1;
                    // Var block: {u,m}* with exactly one m.
                    let block_start = pos;
                    let mut marks = 0usize;
                    while let Some(&c) = s.get(pos) {
                        if c != b'u' && c != b'm' {
                            break;
                        }
                        if c == b'm' {
                            marks += 1;
                            if marks > 1 {
                                return Err(err(pos, "second mark in one var block"));
                            }
                        }
                        pos += 1;
                    }
                    let len = pos - block_start;
                    if marks == 0 {
                        return Err(err(block_start, "var block has no marked slot"));
                    }
                    match n {
                        None => n = Some(len),
                        Some(expect) if expect != len => {
                            return Err(AdviceError::Grammar {
                                offset: block_start,
                                msg: format!(
                                    "var block has {len} slots, earlier blocks had {expect}"
                                ),
                            })
                        }
                        Some(_) => {}
                    }
                    for _ in 0..2 {
                        parse_perm_block(s, &mut pos)?;
                    }
                }
                Some(b'A') => {
                    pos += 1;
                    for _ in 0..5 {
                        match s.get(pos) {
                            Some(b'a' | b'r') => pos += 1,
                            _ => return Err(err(pos, "accept block needs five of {a,r}")),
                        }
                    }
                    if s.get(pos) != Some(&b'E') {
                        return Err(err(pos, "expected E after the accept block"));
                    }
                    pos += 1;
                    if pos != s.len() {
                        return Err(err(pos, "trailing symbols after E"));
                    }
                    return Ok(AdviceTape {
                        symbols: s.to_vec(),
                        n: n.unwrap_or(0),
                    });
                }
                _ => return Err(err(pos, "expected I (instruction) or A (accept block)")),
            }
        }
    }

    /// Reads a tape file: the raw symbol string, optionally ending in one
    /// newline.
    pub fn load(path: &Path) -> Result<AdviceTape, std::io::Error> {
        let mut text = fs::read_to_string(path)?;
        if text.ends_with('\n') {
            text.pop();
        }
        AdviceTape::parse(&text)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string()))
    }

    /// Writes the symbol string with a trailing newline.
    pub fn save(&self, path: &Path) -> Result<(), std::io::Error> {
        fs::write(path, format!("{}\n", self.as_str()))
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// The tape as text (the alphabet is ASCII).
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.symbols).expect("tape alphabet is ASCII")
    }

    /// Number of input variables each instruction's var block spans.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of encoded instructions.
    pub fn instruction_count(&self) -> usize {
        self.symbols.iter().filter(|&&c| c == b'I').count()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl fmt::Display for AdviceTape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn parse_perm_block(s: &[u8], pos: &mut usize) -> Result<Perm5, AdviceError> {
    let start = *pos;
    let mut images = [0u8; 5];
    for slot in &mut images {
        match s.get(*pos) {
            Some(&d @ b'1'..=b'5') => {
                *slot = d - b'0';
                *pos += 1;
            }
            _ => {
                return Err(AdviceError::Grammar {
                    offset: *pos,
                    msg: "permutation block needs five digits from 1-5".into(),
                })
            }
        }
    }
    Perm5::new(images).map_err(|e| AdviceError::Grammar {
        offset: start,
        msg: e.to_string(),
    })
}

/// Serializes a program onto a tape. The accepting state recorded in the
/// accept block is `target(1)`; a 5-cycle never fixes 1, so acceptance is
/// always distinguishable from the identity yield.
pub fn encode_advice(prog: &PermProgram) -> AdviceTape {
    let n = prog.n();
    let mut symbols = Vec::with_capacity(2 + prog.len() * (11 + n) + 6);
    symbols.push(b'B');
    for ins in prog.instructions() {
        symbols.push(b'I');
        for slot in 1..=n {
            symbols.push(if slot == ins.var { b'm' } else { b'u' });
        }
        for d in ins.perm1.images() {
            symbols.push(b'0' + d);
        }
        for d in ins.perm0.images() {
            symbols.push(b'0' + d);
        }
    }
    symbols.push(b'A');
    let accept = prog.target().image(1);
    for state in 1..=5u8 {
        symbols.push(if state == accept { b'a' } else { b'r' });
    }
    symbols.push(b'E');
    AdviceTape { symbols, n }
}

/// Rebuilds a program from a tape. The instructions come back exactly; the
/// accept block only records the accepting state, so the target is
/// reconstructed as the lexicographically smallest 5-cycle sending 1 there.
/// The result accepts exactly the inputs the tape's machine accepts (state
/// 1 lands on the accepting state); when the original target was already
/// that canonical cycle — as with the default target — the round trip is
/// exact.
pub fn decode_advice(tape: &AdviceTape) -> Result<PermProgram, AdviceError> {
    let s = tape.symbols();
    let mut pos = 1; // past B
    let mut instructions = Vec::new();
    while s[pos] == b'I' {
        pos += 1;
        let mut var = 0usize;
        for slot in 1..=tape.n {
            if s[pos] == b'm' {
                var = slot;
            }
            pos += 1;
        }
        let perm1 = parse_perm_block(s, &mut pos).expect("validated at parse time");
        let perm0 = parse_perm_block(s, &mut pos).expect("validated at parse time");
        instructions.push(Instruction { var, perm1, perm0 });
    }
    let accept_block = pos + 1; // past A
    let marks: Vec<u8> = (0..5u8)
        .filter(|i| s[accept_block + *i as usize] == b'a')
        .map(|i| i + 1)
        .collect();
    let &[accepting] = marks.as_slice() else {
        return Err(AdviceError::Grammar {
            offset: accept_block,
            msg: format!(
                "cannot decode a program: accept block marks {} states, want exactly 1",
                marks.len()
            ),
        });
    };
    if accepting == 1 {
        return Err(AdviceError::Grammar {
            offset: accept_block,
            msg: "cannot decode a program: no 5-cycle sends 1 to itself".into(),
        });
    }
    let target = Perm5::five_cycles()
        .iter()
        .copied()
        .find(|c| c.image(1) == accepting)
        .expect("a 5-cycle sending 1 to any other state exists");
    Ok(PermProgram::new(tape.n, instructions, target)
        .expect("grammar guarantees variables are in range"))
}

/// The machine's control states. `CONTROLS` lists them in snapshot-index
/// order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Control {
    /// Expecting the leading `B`.
    ExpectStart,
    /// Between blocks: the next symbol is `I` or `A`.
    Dispatch,
    /// Walking the input head back to the left end marker.
    Rewind,
    /// In a var block, mark not yet seen: advancing both heads in lockstep.
    SlotSeek,
    /// In a var block after the mark: consuming the rest without moving the
    /// input head.
    SlotSkip,
    /// In the 1-branch permutation block, capture still pending.
    Perm1Seek,
    /// In the 1-branch block after the capture (or with b=0: no capture).
    Perm1Rest,
    /// In the 0-branch permutation block, capture still pending.
    Perm0Seek,
    /// In the 0-branch block after the capture (or with b=1).
    Perm0Rest,
    /// Scanning the accept block for position s.
    AcceptScan,
    /// Expecting the closing `E`.
    ExpectEnd,
    Halt,
}

/// All control states, in the order used to index register snapshots.
pub const CONTROLS: [Control; 12] = [
    Control::ExpectStart,
    Control::Dispatch,
    Control::Rewind,
    Control::SlotSeek,
    Control::SlotSkip,
    Control::Perm1Seek,
    Control::Perm1Rest,
    Control::Perm0Seek,
    Control::Perm0Rest,
    Control::AcceptScan,
    Control::ExpectEnd,
    Control::Halt,
];

/// Size of the whole mutable-register space: every reachable combination of
/// control state, program state, bit, and counter. The register witness of
/// any run, on any input and any tape, fits inside this constant.
pub const REGISTER_SPACE_BOUND: usize = CONTROLS.len() * 5 * 2 * 5;

/// One observed configuration of the four mutable registers.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct RegisterSnapshot {
    pub control: Control,
    /// Program state s ∈ 1..=5.
    pub state: u8,
    /// Bit register.
    pub bit: bool,
    /// Digit counter c ∈ 1..=5.
    pub counter: u8,
}

/// Evidence recorded by a run: sequential-access and constant-space
/// behavior as measured facts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TraceStats {
    /// Machine steps: one per advice symbol consumed plus one per rewind
    /// move (a step may move the input head and consume a symbol at once).
    pub steps: u64,
    /// Every movement of the two-way input head.
    pub input_head_moves: u64,
    /// Leftward movements of the advice head. The head type has no
    /// leftward method, so this is structurally zero; it is reported so the
    /// claim is visible in output rather than implicit in the code.
    pub advice_head_moves_left: u64,
    /// Distinct register configurations observed, initial state included.
    pub register_witness: BTreeSet<RegisterSnapshot>,
}

/// The two-way read-only input head. Position 0 is the left end marker,
/// positions `1..=n` the bits, position `n+1` the right end marker. Every
/// move is counted.
struct InputHead<'a> {
    bits: &'a [bool],
    pos: usize,
    moves: u64,
}

/// What the input head sees.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Cell {
    Start,
    Bit(bool),
    End,
}

impl<'a> InputHead<'a> {
    fn new(bits: &'a [bool]) -> InputHead<'a> {
        InputHead {
            bits,
            pos: 0,
            moves: 0,
        }
    }

    fn read(&self) -> Cell {
        if self.pos == 0 {
            Cell::Start
        } else if self.pos <= self.bits.len() {
            Cell::Bit(self.bits[self.pos - 1])
        } else {
            Cell::End
        }
    }

    fn move_left(&mut self) {
        debug_assert!(self.pos > 0, "cannot move past the left end marker");
        self.pos -= 1;
        self.moves += 1;
    }

    fn move_right(&mut self) {
        debug_assert!(
            self.pos <= self.bits.len(),
            "cannot move past the right end marker"
        );
        self.pos += 1;
        self.moves += 1;
    }
}

/// The one-way advice head. There is deliberately no way to move it left —
/// sequential access is a property of the type, not a discipline.
struct AdviceHead<'a> {
    symbols: &'a [u8],
    pos: usize,
}

impl<'a> AdviceHead<'a> {
    fn new(symbols: &'a [u8]) -> AdviceHead<'a> {
        AdviceHead { symbols, pos: 0 }
    }

    fn next(&mut self) -> Option<u8> {
        let sym = self.symbols.get(self.pos).copied();
        if sym.is_some() {
            self.pos += 1;
        }
        sym
    }

    fn offset(&self) -> usize {
        self.pos
    }
}

/// Runs the tape's program on `x` with the constant-space machine and
/// returns its verdict together with the recorded trace.
///
/// Per instruction the machine rewinds the input head to the left marker,
/// walks it right in lockstep with the var block (loading the marked bit
/// into `b`), then streams both permutation blocks, capturing the digit at
/// position `s` of the branch selected by `b` into the state register. At
/// the accept block it accepts iff position `s` holds `a`. This is exactly
/// the acceptance rule of the general-program view: accept iff state 1 is
/// carried to the accepting state.
pub fn run_tm(tape: &AdviceTape, x: &[bool]) -> Result<(bool, TraceStats), AdviceError> {
    if x.len() != tape.n {
        return Err(AdviceError::InputLengthMismatch {
            expected: tape.n,
            got: x.len(),
        });
    }

    let mut input = InputHead::new(x);
    let mut advice = AdviceHead::new(tape.symbols());

    let mut control = Control::ExpectStart;
    let mut s: u8 = 1;
    let mut b: bool = false;
    let mut c: u8 = 1;

    let mut steps: u64 = 0;
    let mut seen = [false; REGISTER_SPACE_BOUND];
    let snapshot_index = |control: Control, s: u8, b: bool, c: u8| -> usize {
        let ctl = CONTROLS
            .iter()
            .position(|&k| k == control)
            .expect("control is listed");
        ((ctl * 5 + (s as usize - 1)) * 2 + b as usize) * 5 + (c as usize - 1)
    };
    seen[snapshot_index(control, s, b, c)] = true;

    // Grammar violations below are unreachable for tapes built by `parse`,
    // but the machine reports them rather than trusting its caller.
    let grammar = |offset: usize, msg: &str| AdviceError::Grammar {
        offset,
        msg: msg.to_string(),
    };
    let too_short = || AdviceError::InputLengthMismatch {
        expected: tape.n,
        got: x.len(),
    };

    while control != Control::Halt {
        if control == Control::Rewind {
            // Input-driven: walk left until the marker, consuming no advice.
            if input.read() == Cell::Start {
                control = Control::SlotSeek;
                continue;
            }
            input.move_left();
            steps += 1;
            seen[snapshot_index(control, s, b, c)] = true;
            continue;
        }

        let at = advice.offset();
        let Some(sym) = advice.next() else {
            return Err(grammar(at, "tape ended before E"));
        };
        steps += 1;

        match control {
            Control::ExpectStart => match sym {
                b'B' => control = Control::Dispatch,
                _ => return Err(grammar(at, "expected B")),
            },
            Control::Dispatch => match sym {
                b'I' => control = Control::Rewind,
                b'A' => {
                    c = 1;
                    control = Control::AcceptScan;
                }
                _ => return Err(grammar(at, "expected I or A")),
            },
            Control::SlotSeek => match sym {
                b'u' => {
                    if input.read() == Cell::End {
                        return Err(too_short());
                    }
                    input.move_right();
                }
                b'm' => {
                    if input.read() == Cell::End {
                        return Err(too_short());
                    }
                    input.move_right();
                    match input.read() {
                        Cell::Bit(bit) => b = bit,
                        _ => return Err(too_short()),
                    }
                    control = Control::SlotSkip;
                }
                _ => return Err(grammar(at, "var block ended without a mark")),
            },
            Control::SlotSkip => match sym {
                b'u' => {}
                b'1'..=b'5' => {
                    c = 1;
                    perm_digit(sym - b'0', true, true, &mut control, &mut s, b, &mut c);
                }
                _ => return Err(grammar(at, "expected u or a permutation digit")),
            },
            Control::Perm1Seek | Control::Perm1Rest | Control::Perm0Seek | Control::Perm0Rest => {
                match sym {
                    b'1'..=b'5' => {
                        let phase1 = matches!(control, Control::Perm1Seek | Control::Perm1Rest);
                        let seeking = matches!(control, Control::Perm1Seek | Control::Perm0Seek);
                        perm_digit(sym - b'0', phase1, seeking, &mut control, &mut s, b, &mut c);
                    }
                    _ => return Err(grammar(at, "expected a permutation digit")),
                }
            }
            Control::AcceptScan => match sym {
                b'a' | b'r' => {
                    if c == s {
                        b = sym == b'a';
                    }
                    if c < 5 {
                        c += 1;
                    } else {
                        control = Control::ExpectEnd;
                    }
                }
                _ => return Err(grammar(at, "expected a or r")),
            },
            Control::ExpectEnd => match sym {
                b'E' => control = Control::Halt,
                _ => return Err(grammar(at, "expected E")),
            },
            Control::Rewind | Control::Halt => unreachable!("handled above"),
        }

        seen[snapshot_index(control, s, b, c)] = true;
    }

    let register_witness = seen
        .iter()
        .enumerate()
        .filter(|(_, &hit)| hit)
        .map(|(idx, _)| {
            let counter = (idx % 5) as u8 + 1;
            let bit = (idx / 5) % 2 == 1;
            let state = ((idx / 10) % 5) as u8 + 1;
            let control = CONTROLS[idx / 50];
            RegisterSnapshot {
                control,
                state,
                bit,
                counter,
            }
        })
        .collect();

    Ok((
        b,
        TraceStats {
            steps,
            input_head_moves: input.moves,
            advice_head_moves_left: 0,
            register_witness,
        },
    ))
}

/// Handles one permutation digit at counter position `c`. In the seeking
/// half of the branch selected by `b`, the digit at position `s` becomes
/// the new state. After five digits, phase 1 hands over to phase 0 and
/// phase 0 returns to dispatch.
fn perm_digit(
    digit: u8,
    phase1: bool,
    seeking: bool,
    control: &mut Control,
    s: &mut u8,
    b: bool,
    c: &mut u8,
) {
    let selected = if phase1 { b } else { !b };
    let captured = seeking && selected && *c == *s;
    if captured {
        *s = digit;
    }
    let still_seeking = seeking && !captured;
    if *c < 5 {
        *c += 1;
        *control = match (phase1, still_seeking) {
            (true, true) => Control::Perm1Seek,
            (true, false) => Control::Perm1Rest,
            (false, true) => Control::Perm0Seek,
            (false, false) => Control::Perm0Rest,
        };
    } else if phase1 {
        *c = 1;
        // The 0-branch is only live when b=0; start it seeking then.
        *control = if b {
            Control::Perm0Rest
        } else {
            Control::Perm0Seek
        };
    } else {
        *c = 1;
        *control = Control::Dispatch;
    }
}
