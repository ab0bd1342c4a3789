//! Command-line front end: every pipeline stage as a subcommand, with
//! machine-readable `key=value` output on stdout and diagnostics on
//! stderr. Exit codes: 0 success (or "equal"), 1 counterexample found,
//! 2 usage or format error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bp5::advice::{encode_advice, run_tm, AdviceTape};
use bp5::barrington::{compile_circuit, default_target};
use bp5::bp::{GeneralBp, PermProgram};
use bp5::circuit::Circuit;
use bp5::equiv::{equiv_exhaustive, format_bits, Evaluate, Verdict, MAX_EXHAUSTIVE_INPUTS};
use bp5::parallelize::{bp_to_circuit, depth_bound};
use bp5::perm5::Perm5;
use bp5::sort::{advice_merge_sort, build_table, reference_merge_sort, SortParams, SortTable};

#[derive(Parser)]
#[command(
    name = "bp5",
    version,
    about = "Compile circuits to width-5 permutation programs, parallelize programs back \
             into shallow circuits, run encoded programs in constant space, and benchmark \
             table-assisted sorting."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compile a circuit netlist into a width-5 permutation program.
    Compile {
        /// Circuit netlist file.
        #[arg(long)]
        circuit: PathBuf,
        /// Where to write the permutation program.
        #[arg(long)]
        out: PathBuf,
        /// Target 5-cycle as five digits, e.g. 23451 (default 23451).
        #[arg(long)]
        target: Option<String>,
    },
    /// Convert a leveled branching program into a shallow circuit.
    Bp2circuit {
        /// Branching program file (genbp or permbp).
        #[arg(long)]
        bp: PathBuf,
        /// Where to write the circuit netlist.
        #[arg(long)]
        out: PathBuf,
    },
    /// Serialize a permutation program as a sequential advice tape.
    Encode {
        /// Permutation program file.
        #[arg(long)]
        bp: PathBuf,
        /// Where to write the advice tape.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the constant-space interpreter on an advice tape.
    Simulate {
        /// Advice tape file.
        #[arg(long)]
        advice: PathBuf,
        /// Input bits, x1 first, e.g. 101.
        #[arg(long)]
        input: String,
        /// Also print the trace statistics as key=value lines.
        #[arg(long)]
        stats: bool,
    },
    /// Evaluate one object on one input.
    Eval {
        /// Circuit netlist file.
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Permutation program file.
        #[arg(long)]
        bp: Option<PathBuf>,
        /// General branching program file.
        #[arg(long)]
        genbp: Option<PathBuf>,
        /// Input bits, x1 first.
        #[arg(long)]
        input: String,
    },
    /// Exhaustively compare two objects (circuit, program, or tape).
    Equiv {
        /// First file; format is detected from its first line.
        #[arg(long)]
        a: PathBuf,
        /// Second file.
        #[arg(long)]
        b: PathBuf,
        /// Refuse inputs wider than this.
        #[arg(long, default_value_t = MAX_EXHAUSTIVE_INPUTS)]
        max_n: usize,
    },
    /// Demonstrate the round trip: program → circuit → width-5 program.
    Roundtrip {
        /// General branching program file.
        #[arg(long)]
        genbp: PathBuf,
    },
    /// Build the sorted-block table and write it to a file.
    SortTable {
        /// Input length (a power of two).
        #[arg(long)]
        n: usize,
        /// Maximum value.
        #[arg(long)]
        k: u8,
        /// Block size (a power-of-two divisor of n; defaults to
        /// n/⌈log₂n⌉ rounded down to a power of two).
        #[arg(long)]
        b: Option<usize>,
        /// Where to write the table.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sort a comma-separated list using a prebuilt table.
    Sort {
        /// Table file from sort-table.
        #[arg(long)]
        table: PathBuf,
        /// Comma-separated values, e.g. 3,1,2,0.
        #[arg(long)]
        input: String,
        /// Also print comparison and key-construction counts.
        #[arg(long)]
        count: bool,
    },
    /// Compare comparison counts: table-assisted vs plain merge sort.
    BenchSort {
        /// Table file from sort-table.
        #[arg(long)]
        table: PathBuf,
        /// Number of random inputs.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Random seed (printed, so runs are reproducible).
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init()
        .ok();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Compile {
            circuit,
            out,
            target,
        } => {
            let c = read_circuit(&circuit)?;
            let target = match target {
                Some(t) => Perm5::from_str(&t).map_err(|e| e.to_string())?,
                None => default_target(),
            };
            let prog = compile_circuit(&c, target).map_err(|e| e.to_string())?;
            write_file(&out, &prog.to_text())?;
            println!("n={}", c.n());
            println!("depth={}", c.depth());
            println!("length={}", prog.len());
            println!("target={target}");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bp2circuit { bp, out } => {
            let bp = read_general(&bp)?;
            let c = bp_to_circuit(&bp);
            write_file(&out, &c.to_netlist())?;
            println!("length={}", bp.length());
            println!("width={}", bp.width());
            println!("gates={}", c.gate_count());
            println!("depth={}", c.depth());
            println!("depth_bound={}", depth_bound(bp.width(), bp.length()));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Encode { bp, out } => {
            let text = read_text(&bp)?;
            let prog = PermProgram::parse(&text).map_err(|e| format!("{}: {e}", bp.display()))?;
            let tape = encode_advice(&prog);
            tape.save(&out).map_err(|e| e.to_string())?;
            println!("n={}", tape.n());
            println!("instructions={}", tape.instruction_count());
            println!("advice_len={}", tape.len());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Simulate {
            advice,
            input,
            stats,
        } => {
            let tape = AdviceTape::load(&advice).map_err(|e| e.to_string())?;
            let x = parse_bits(&input)?;
            let (accept, trace) = run_tm(&tape, &x).map_err(|e| e.to_string())?;
            println!("{}", if accept { "accept" } else { "reject" });
            if stats {
                println!("steps={}", trace.steps);
                println!("input_head_moves={}", trace.input_head_moves);
                println!("advice_head_moves_left={}", trace.advice_head_moves_left);
                println!("register_witness={}", trace.register_witness.len());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Eval {
            circuit,
            bp,
            genbp,
            input,
        } => {
            let sources = [&circuit, &bp, &genbp];
            if sources.iter().filter(|s| s.is_some()).count() != 1 {
                return Err("eval takes exactly one of --circuit, --bp, --genbp".into());
            }
            let x = parse_bits(&input)?;
            let value = if let Some(path) = circuit {
                read_circuit(&path)?.eval_bit(&x)
            } else if let Some(path) = bp {
                let text = read_text(&path)?;
                PermProgram::parse(&text)
                    .map_err(|e| format!("{}: {e}", path.display()))?
                    .eval_bit(&x)
            } else {
                read_general(&genbp.unwrap())?.eval_bit(&x)
            }
            .map_err(|e| e.to_string())?;
            println!("{}", u8::from(value));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Equiv { a, b, max_n } => {
            let f = load_any(&a)?;
            let g = load_any(&b)?;
            let n = f.arity();
            if n > max_n {
                return Err(format!("n = {n} is over the requested cap {max_n}"));
            }
            match equiv_exhaustive(f.as_ref(), g.as_ref(), n).map_err(|e| e.to_string())? {
                Verdict::Equal => {
                    println!("equal over 2^{n} inputs");
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::Counterexample(x) => {
                    println!("counterexample {}", format_bits(&x));
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::Roundtrip { genbp } => {
            let bp = read_general(&genbp)?;
            let c = bp_to_circuit(&bp);
            let prog = compile_circuit(&c, default_target()).map_err(|e| e.to_string())?;
            println!("length={}", bp.length());
            println!("width={}", bp.width());
            println!("circuit_gates={}", c.gate_count());
            println!("circuit_depth={}", c.depth());
            let bound = depth_bound(bp.width(), bp.length());
            println!("depth_bound={bound}");
            println!("compiled_length={}", prog.len());
            println!("length_bound=4^{bound}");
            match equiv_exhaustive(&bp, &prog, bp.n()).map_err(|e| e.to_string())? {
                Verdict::Equal => {
                    println!("equal over 2^{} inputs", bp.n());
                    Ok(ExitCode::SUCCESS)
                }
                Verdict::Counterexample(x) => {
                    println!("counterexample {}", format_bits(&x));
                    Ok(ExitCode::from(1))
                }
            }
        }
        Cmd::SortTable { n, k, b, out } => {
            let params = match b {
                Some(b) => SortParams::new(n, k, b),
                None => SortParams::with_default_block(n, k),
            }
            .map_err(|e| e.to_string())?;
            let table = build_table(params).map_err(|e| e.to_string())?;
            table.save(&out).map_err(|e| e.to_string())?;
            println!("n={n}");
            println!("k={k}");
            println!("b={}", params.b());
            println!("merge_levels={}", params.merge_levels());
            println!("entries={}", table.entry_count());
            println!("bytes={}", table.to_bytes().len());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sort {
            table,
            input,
            count,
        } => {
            let table = SortTable::load(&table).map_err(|e| e.to_string())?;
            let values = parse_values(&input)?;
            let (sorted, comparisons) =
                advice_merge_sort(&values, &table).map_err(|e| e.to_string())?;
            let rendered: Vec<String> = sorted.iter().map(u8::to_string).collect();
            println!("{}", rendered.join(","));
            if count {
                let (_, reference) = reference_merge_sort(&values);
                println!("comparisons={comparisons}");
                println!("key_ops={}", values.len());
                println!("reference_comparisons={reference}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::BenchSort {
            table,
            trials,
            seed,
        } => {
            let table = SortTable::load(&table).map_err(|e| e.to_string())?;
            let p = *table.params();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut adv, mut reference) = (Stats::default(), Stats::default());
            for _ in 0..trials {
                let input: Vec<u8> = (0..p.n()).map(|_| rng.random_range(0..=p.k())).collect();
                let (sorted, a) = advice_merge_sort(&input, &table).map_err(|e| e.to_string())?;
                let (expected, r) = reference_merge_sort(&input);
                if sorted != expected {
                    return Err(format!(
                        "table sort disagreed with the reference on {input:?}"
                    ));
                }
                adv.push(a);
                reference.push(r);
            }
            println!("seed={seed}");
            println!("trials={trials}");
            println!("n={}", p.n());
            println!("k={}", p.k());
            println!("b={}", p.b());
            println!("merge_levels={}", p.merge_levels());
            println!(
                "comparison_bound={}",
                p.n() as u64 * p.merge_levels() as u64
            );
            for (name, s) in [("advice", &adv), ("reference", &reference)] {
                println!("{name}_mean={:.2}", s.mean());
                println!("{name}_min={}", s.min);
                println!("{name}_max={}", s.max);
            }
            // Per-block key construction is O(b), so O(n) per sort; it is
            // charged separately from comparisons.
            println!("key_ops_per_sort={}", p.n());
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Default)]
struct Stats {
    sum: u64,
    count: u64,
    min: u64,
    max: u64,
}

impl Stats {
    fn push(&mut self, v: u64) {
        if self.count == 0 || v < self.min {
            self.min = v;
        }
        self.max = self.max.max(v);
        self.sum += v;
        self.count += 1;
    }

    fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum as f64 / self.count as f64
        }
    }
}

fn read_text(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_circuit(path: &Path) -> Result<Circuit, String> {
    Circuit::parse(&read_text(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

/// Reads a leveled program; a permutation program is accepted too and
/// widened to its 5-node-per-level graph form.
fn read_general(path: &Path) -> Result<GeneralBp, String> {
    let text = read_text(path)?;
    match first_word(&text) {
        "permbp" => Ok(PermProgram::parse(&text)
            .map_err(|e| format!("{}: {e}", path.display()))?
            .to_general()),
        _ => GeneralBp::parse(&text).map_err(|e| format!("{}: {e}", path.display())),
    }
}

fn first_word(text: &str) -> &str {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("")
        .split_whitespace()
        .next()
        .unwrap_or("")
}

/// Detects a file's format from its first significant line: `inputs` for
/// circuits, `permbp`/`genbp` for programs, a leading `B` for advice
/// tapes.
fn load_any(path: &Path) -> Result<Box<dyn Evaluate>, String> {
    let text = read_text(path)?;
    let wrap = |e: String| format!("{}: {e}", path.display());
    match first_word(&text) {
        "inputs" => Ok(Box::new(
            Circuit::parse(&text).map_err(|e| wrap(e.to_string()))?,
        )),
        "permbp" => Ok(Box::new(
            PermProgram::parse(&text).map_err(|e| wrap(e.to_string()))?,
        )),
        "genbp" => Ok(Box::new(
            GeneralBp::parse(&text).map_err(|e| wrap(e.to_string()))?,
        )),
        w if w.starts_with('B') => Ok(Box::new(
            AdviceTape::parse(text.trim_end_matches('\n')).map_err(|e| wrap(e.to_string()))?,
        )),
        w => Err(format!(
            "{}: unrecognized format (first word {w:?}); expected a circuit, \
             branching program, or advice tape",
            path.display()
        )),
    }
}

/// Parses `101` into input bits, x1 first.
fn parse_bits(s: &str) -> Result<Vec<bool>, String> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(format!("input bit {other:?} is not 0 or 1")),
        })
        .collect()
}

/// Parses `3,1,2,0` into byte values.
fn parse_values(s: &str) -> Result<Vec<u8>, String> {
    s.split(',')
        .map(|v| {
            let v = v.trim();
            v.parse::<u8>()
                .map_err(|e| format!("value {v:?} is not a byte: {e}"))
        })
        .collect()
}
