//! Merge sort with a precomputed block table.
//!
//! The trade: a table maps *every* possible length-`b` block over the value
//! range to its sorted form, so the bottom `log₂ b` levels of a merge sort
//! collapse into `n/b` lookups charged zero comparisons. Only the top
//! `log₂(n/b)` merge passes remain, so a sort costs at most
//! `n · merge_levels` comparisons instead of roughly `n · log₂ n`. The
//! table is enormous relative to the input — `(k+1)^b` entries — which is
//! the whole point: it is precomputed advice, built once, consulted by
//! address.
//!
//! With the default block size `b ≈ n/⌈log₂ n⌉`, `merge_levels` is
//! `⌈log₂⌈log₂ n⌉⌉` — doubly logarithmic in `n`.

use std::fs;
use std::path::Path;

use thiserror::Error;

/// Magic bytes at the head of a table file.
const MAGIC: &[u8; 5] = b"SADV1";

/// Default cap on table entries a build will attempt.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 24;

/// Errors from sort parameters, table construction, and table files.
#[derive(Debug, Error)]
pub enum SortError {
    #[error("n must be a power of two, got {0}")]
    BadN(usize),
    #[error("block size {b} must be a power-of-two divisor of n = {n}")]
    BadBlock { b: usize, n: usize },
    #[error("table would hold {entries} entries, over the {limit} limit (shrink b or k)")]
    TableTooLarge { entries: u128, limit: u64 },
    #[error("input has {got} values but the table sorts blocks of n = {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("value {value} exceeds the table's maximum {k}")]
    ValueOutOfRange { value: u8, k: u8 },
    #[error("table file: {0}")]
    Format(String),
    #[error("corrupt table: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Sizing for a table-assisted sort: `n` values in `{0,…,k}`, handled in
/// blocks of `b`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SortParams {
    n: usize,
    k: u8,
    b: usize,
}

impl SortParams {
    /// Validates that `n` is a power of two and `b` a power-of-two divisor
    /// of it.
    pub fn new(n: usize, k: u8, b: usize) -> Result<SortParams, SortError> {
        if n == 0 || !n.is_power_of_two() {
            return Err(SortError::BadN(n));
        }
        if b == 0 || !b.is_power_of_two() || !n.is_multiple_of(b) {
            return Err(SortError::BadBlock { b, n });
        }
        Ok(SortParams { n, k, b })
    }

    /// Uses the default block size [`default_block`].
    pub fn with_default_block(n: usize, k: u8) -> Result<SortParams, SortError> {
        if n == 0 || !n.is_power_of_two() {
            return Err(SortError::BadN(n));
        }
        SortParams::new(n, k, default_block(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// Number of blocks, `n/b`.
    pub fn block_count(&self) -> usize {
        self.n / self.b
    }

    /// Merge passes after the lookups: `log₂(n/b)`.
    pub fn merge_levels(&self) -> u32 {
        self.block_count().trailing_zeros()
    }

    /// `(k+1)^b`, or `None` if it exceeds `u128`.
    pub fn table_entries(&self) -> Option<u128> {
        (self.k as u128 + 1).checked_pow(self.b as u32)
    }
}

/// The default block size: `max(1, n / ⌈log₂ n⌉)`, rounded down to the
/// nearest power of two (every power of two at most `n` divides `n`).
pub fn default_block(n: usize) -> usize {
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return 1;
    }
    let log = (usize::BITS - (n - 1).leading_zeros()) as usize; // ⌈log₂ n⌉
    let raw = (n / log).max(1);
    1 << raw.ilog2()
}

/// The precomputed advice: the sorted form of every possible block, stored
/// flat in lexicographic key order (first element most significant).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SortTable {
    params: SortParams,
    entries: Vec<u8>,
}

/// Builds the full table under the default entry limit.
pub fn build_table(params: SortParams) -> Result<SortTable, SortError> {
    build_table_with_limit(params, DEFAULT_TABLE_LIMIT)
}

/// Builds the full table: every length-`b` sequence over `{0,…,k}`,
/// enumerated lexicographically, mapped to its ascending form. Values are
/// plain bytes, so the canonical ascending sequence is what any correct
/// sort produces.
pub fn build_table_with_limit(params: SortParams, limit: u64) -> Result<SortTable, SortError> {
    let entries = params
        .table_entries()
        .filter(|&e| e <= limit as u128)
        .ok_or(SortError::TableTooLarge {
            entries: params.table_entries().unwrap_or(u128::MAX),
            limit,
        })?;

    let b = params.b;
    let mut flat = Vec::with_capacity(entries as usize * b);
    let mut key = vec![0u8; b];
    let mut scratch = vec![0u8; b];
    loop {
        scratch.copy_from_slice(&key);
        scratch.sort_unstable();
        flat.extend_from_slice(&scratch);
        // Odometer increment: last position is least significant, so the
        // enumeration is lexicographic ascending.
        let mut pos = b;
        loop {
            if pos == 0 {
                return Ok(SortTable {
                    params,
                    entries: flat,
                });
            }
            pos -= 1;
            if key[pos] < params.k {
                key[pos] += 1;
                key[pos + 1..].fill(0);
                break;
            }
        }
    }
}

impl SortTable {
    pub fn params(&self) -> &SortParams {
        &self.params
    }

    /// Number of entries, `(k+1)^b`.
    pub fn entry_count(&self) -> usize {
        self.entries.len() / self.params.b
    }

    /// The sorted form of `block`, found by address: the block's
    /// lexicographic rank, costing `b` arithmetic steps and zero
    /// comparisons between elements.
    pub fn lookup(&self, block: &[u8]) -> Result<&[u8], SortError> {
        debug_assert_eq!(block.len(), self.params.b);
        let radix = self.params.k as usize + 1;
        let mut rank = 0usize;
        for &v in block {
            if v > self.params.k {
                return Err(SortError::ValueOutOfRange {
                    value: v,
                    k: self.params.k,
                });
            }
            rank = rank * radix + v as usize;
        }
        let b = self.params.b;
        self.entries
            .get(rank * b..(rank + 1) * b)
            .ok_or_else(|| SortError::Corrupt(format!("no record at rank {rank}")))
    }

    /// Binary serialization: `SADV1`, then `n`, `k`, `b` as little-endian
    /// u32, then the records in key order. Total size `17 + b·(k+1)^b`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(17 + self.entries.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.params.n as u32).to_le_bytes());
        out.extend_from_slice(&(self.params.k as u32).to_le_bytes());
        out.extend_from_slice(&(self.params.b as u32).to_le_bytes());
        out.extend_from_slice(&self.entries);
        out
    }

    /// Deserializes and fully validates: header shape, exact length, and
    /// both table invariants — record count `(k+1)^b`, and every record the
    /// ascending rearrangement of its (position-implied) key.
    pub fn from_bytes(data: &[u8]) -> Result<SortTable, SortError> {
        if data.len() < 17 {
            return Err(SortError::Format(format!(
                "file is {} bytes, smaller than the 17-byte header",
                data.len()
            )));
        }
        if &data[..5] != MAGIC {
            return Err(SortError::Format("bad magic, want SADV1".into()));
        }
        let word = |i: usize| u32::from_le_bytes(data[i..i + 4].try_into().unwrap());
        let n = word(5) as usize;
        let k_raw = word(9);
        let b = word(13) as usize;
        let k: u8 = k_raw
            .try_into()
            .map_err(|_| SortError::Format(format!("k = {k_raw} does not fit in a byte")))?;
        let params = SortParams::new(n, k, b).map_err(|e| SortError::Format(e.to_string()))?;

        let entry_count = params
            .table_entries()
            .ok_or_else(|| SortError::Format("entry count overflows".into()))?;
        let expected = 17u128 + entry_count * b as u128;
        if data.len() as u128 != expected {
            return Err(SortError::Format(format!(
                "file is {} bytes, want exactly {expected} for n={n} k={k} b={b}",
                data.len()
            )));
        }

        let table = SortTable {
            params,
            entries: data[17..].to_vec(),
        };
        table.validate()?;
        Ok(table)
    }

    /// Checks every record against its implied key: ascending order and
    /// equal value multisets.
    fn validate(&self) -> Result<(), SortError> {
        let b = self.params.b;
        let k = self.params.k;
        let mut key = vec![0u8; b];
        for (rank, record) in self.entries.chunks_exact(b).enumerate() {
            let mut key_counts = [0usize; 256];
            for &v in &key {
                key_counts[v as usize] += 1;
            }
            let mut rec_counts = [0usize; 256];
            for (i, &v) in record.iter().enumerate() {
                if v > k {
                    return Err(SortError::Corrupt(format!(
                        "record {rank} holds value {v} > k = {k}"
                    )));
                }
                if i > 0 && record[i - 1] > v {
                    return Err(SortError::Corrupt(format!(
                        "record {rank} is not in ascending order"
                    )));
                }
                rec_counts[v as usize] += 1;
            }
            if key_counts != rec_counts {
                return Err(SortError::Corrupt(format!(
                    "record {rank} is not a rearrangement of its key"
                )));
            }
            // Next key, odometer order — matches the build enumeration.
            let mut pos = b;
            while pos > 0 {
                pos -= 1;
                if key[pos] < k {
                    key[pos] += 1;
                    key[pos + 1..].fill(0);
                    break;
                }
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), SortError> {
        Ok(fs::write(path, self.to_bytes())?)
    }

    pub fn load(path: &Path) -> Result<SortTable, SortError> {
        SortTable::from_bytes(&fs::read(path)?)
    }
}

/// Sorts `x` ascending using the table: each block of `b` is replaced by
/// its looked-up sorted form (zero comparisons), then `merge_levels`
/// bottom-up merge passes finish the job. Returns the sorted sequence and
/// the comparison count, which is at most `n · merge_levels` — asserted on
/// every call.
pub fn advice_merge_sort(x: &[u8], table: &SortTable) -> Result<(Vec<u8>, u64), SortError> {
    let params = table.params();
    if x.len() != params.n() {
        return Err(SortError::LengthMismatch {
            expected: params.n(),
            got: x.len(),
        });
    }
    for &v in x {
        if v > params.k() {
            return Err(SortError::ValueOutOfRange {
                value: v,
                k: params.k(),
            });
        }
    }

    let n = params.n();
    let b = params.b();
    let mut cur = Vec::with_capacity(n);
    for block in x.chunks_exact(b) {
        cur.extend_from_slice(table.lookup(block)?);
    }

    let mut comparisons = 0u64;
    let mut buf = vec![0u8; n];
    let mut run = b;
    for _ in 0..params.merge_levels() {
        for pair in (0..n).step_by(2 * run) {
            merge_runs(
                &cur[pair..pair + run],
                &cur[pair + run..pair + 2 * run],
                &mut buf[pair..pair + 2 * run],
                &mut comparisons,
            );
        }
        std::mem::swap(&mut cur, &mut buf);
        run *= 2;
    }

    debug_assert!(cur.windows(2).all(|w| w[0] <= w[1]));
    let bound = n as u64 * params.merge_levels() as u64;
    assert!(
        comparisons <= bound,
        "merge passes used {comparisons} comparisons, over the n·merge_levels bound {bound}"
    );
    Ok((cur, comparisons))
}

/// Plain top-down merge sort with comparison counting — the baseline and
/// oracle the table-assisted sort is measured against. Stable, like the
/// table sort.
pub fn reference_merge_sort(x: &[u8]) -> (Vec<u8>, u64) {
    fn rec(x: &[u8], comparisons: &mut u64) -> Vec<u8> {
        if x.len() <= 1 {
            return x.to_vec();
        }
        let (l, r) = x.split_at(x.len() / 2);
        let left = rec(l, comparisons);
        let right = rec(r, comparisons);
        let mut out = vec![0u8; x.len()];
        merge_runs(&left, &right, &mut out, comparisons);
        out
    }
    let mut comparisons = 0;
    let sorted = rec(x, &mut comparisons);
    (sorted, comparisons)
}

/// Stable two-run merge: ties take from the left. One comparison per
/// element placed while both runs are nonempty.
fn merge_runs(left: &[u8], right: &[u8], out: &mut [u8], comparisons: &mut u64) {
    debug_assert_eq!(left.len() + right.len(), out.len());
    let (mut i, mut j) = (0, 0);
    for slot in out.iter_mut() {
        let take_left = if i == left.len() {
            false
        } else if j == right.len() {
            true
        } else {
            *comparisons += 1;
            left[i] <= right[j]
        };
        if take_left {
            *slot = left[i];
            i += 1;
        } else {
            *slot = right[j];
            j += 1;
        }
    }
}
