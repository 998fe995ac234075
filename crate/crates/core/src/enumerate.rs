//! Brute-force generators and the class table `a_{n,k}`.
//!
//! Strong avoiders are found by walking the 132-avoiders (Catalan many) and
//! testing the square, rather than walking all of `S_n`. The walk is split
//! by the position of `n`, and those partitions are counted independently
//! and summed.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::perm::{contains_pattern_raw, cycle_length_raw, square_into, Pattern, Permutation};

/// Largest `n` for which `gen_all` runs without acknowledgment.
pub const ALL_LIMIT: usize = 11;
/// Largest `n` for which the 132-avoider generator runs without acknowledgment.
pub const AVOIDER_LIMIT: usize = 16;
/// Largest `n` for the brute-force counters.
pub const TABLE_LIMIT: usize = 15;

/// Knobs shared by the brute-force counters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// Worker threads for the per-position fan-out; 1 runs inline.
    pub jobs: usize,
    /// Lifts the size guards.
    pub unsafe_n: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            jobs: 1,
            unsafe_n: false,
        }
    }
}

fn guard(what: &'static str, n: usize, limit: usize, unsafe_n: bool) -> Result<()> {
    if n > limit && !unsafe_n {
        return Err(Error::GuardExceeded { what, n, limit });
    }
    Ok(())
}

fn require_positive(n: usize) -> Result<()> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    Ok(())
}

/// All of `S_n` in lexicographic order.
pub struct AllPermutations {
    buf: Vec<u32>,
    fresh: bool,
    done: bool,
}

impl AllPermutations {
    /// No size guard; see [`gen_all`].
    pub fn new(n: usize) -> Self {
        AllPermutations {
            buf: (0..n as u32).collect(),
            fresh: true,
            done: n == 0,
        }
    }
}

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
        } else if !next_permutation(&mut self.buf) {
            self.done = true;
            return None;
        }
        Some(Permutation::from_zero_based(self.buf.clone()))
    }
}

fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Every element of `S_n`, lexicographically. Refuses `n > ALL_LIMIT`.
pub fn gen_all(n: usize) -> Result<AllPermutations> {
    gen_all_with(n, false)
}

pub fn gen_all_with(n: usize, unsafe_n: bool) -> Result<AllPermutations> {
    require_positive(n)?;
    guard("gen_all", n, ALL_LIMIT, unsafe_n)?;
    Ok(AllPermutations::new(n))
}

/// A node of the 132-avoider decomposition: the maximum sits at `pos`, the
/// entries before it are an avoider on the `pos` largest remaining values and
/// the entries after it an avoider on the smallest.
#[derive(Debug)]
struct Node {
    len: usize,
    pos: usize,
    last_pos: usize,
    kids: Option<Box<(Node, Node)>>,
}

impl Node {
    fn first(len: usize) -> Node {
        Node::at(len, 0, len.saturating_sub(1))
    }

    fn at(len: usize, pos: usize, last_pos: usize) -> Node {
        let kids = (len > 0).then(|| Box::new((Node::first(pos), Node::first(len - 1 - pos))));
        Node {
            len,
            pos,
            last_pos,
            kids,
        }
    }

    fn advance(&mut self) -> bool {
        let Some(kids) = self.kids.as_mut() else {
            return false;
        };
        if kids.1.advance() {
            return true;
        }
        if kids.0.advance() {
            kids.1 = Node::first(kids.1.len);
            return true;
        }
        if self.pos < self.last_pos {
            *self = Node::at(self.len, self.pos + 1, self.last_pos);
            return true;
        }
        false
    }

    fn write(&self, out: &mut [u32], lo: u32) {
        let Some(kids) = &self.kids else { return };
        let top = lo + self.len as u32 - 1;
        out[self.pos] = top;
        let (before, after) = out.split_at_mut(self.pos);
        kids.0.write(before, top - self.pos as u32);
        kids.1.write(&mut after[1..], lo);
    }
}

/// The 132-avoiding permutations of size `n`, each exactly once.
///
/// Order: by the position of `n`, ascending; within a position, by the
/// arrangement before `n`, then the arrangement after it, both in this same
/// order recursively.
pub struct Avoiders132 {
    root: Node,
    buf: Vec<u32>,
    fresh: bool,
    done: bool,
}

impl Avoiders132 {
    /// No size guard; see [`gen_avoiders_132`].
    pub fn new(n: usize) -> Self {
        Avoiders132 {
            root: Node::first(n),
            buf: vec![0; n],
            fresh: true,
            done: n == 0,
        }
    }

    /// Only the avoiders with `n` at position `b` (1-based).
    pub fn with_max_at(n: usize, b: usize) -> Result<Self> {
        if b == 0 || b > n {
            return Err(invalid(format!("position {b} is outside [1, {n}]")));
        }
        Ok(Avoiders132 {
            root: Node::at(n, b - 1, b - 1),
            buf: vec![0; n],
            fresh: true,
            done: false,
        })
    }

    /// Advances and exposes the 0-based one-line form without allocating.
    pub(crate) fn next_raw(&mut self) -> Option<&[u32]> {
        if self.done {
            return None;
        }
        if self.fresh {
            self.fresh = false;
        } else if !self.root.advance() {
            self.done = true;
            return None;
        }
        self.root.write(&mut self.buf, 0);
        Some(&self.buf)
    }
}

impl Iterator for Avoiders132 {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        self.next_raw()
            .map(|raw| Permutation::from_zero_based(raw.to_vec()))
    }
}

/// The 132-avoiders of `S_n`. Refuses `n > AVOIDER_LIMIT`.
pub fn gen_avoiders_132(n: usize) -> Result<Avoiders132> {
    gen_avoiders_132_with(n, false)
}

pub fn gen_avoiders_132_with(n: usize, unsafe_n: bool) -> Result<Avoiders132> {
    require_positive(n)?;
    guard("gen_avoiders_132", n, AVOIDER_LIMIT, unsafe_n)?;
    Ok(Avoiders132::new(n))
}

/// Strongly 132-avoiding permutations of size `n` (the set `A_n`).
pub fn strong_avoiders_132(n: usize, unsafe_n: bool) -> Result<impl Iterator<Item = Permutation>> {
    let p132 = Pattern::p132();
    Ok(gen_avoiders_132_with(n, unsafe_n)?.filter(move |p| !p.square().contains_pattern(&p132)))
}

/// Runs `count` once per position of `n` and sums the per-position vectors.
fn fan_out<F>(n: usize, width: usize, jobs: usize, count: F) -> Result<Vec<u64>>
where
    F: Fn(usize) -> Vec<u64> + Sync + Send,
{
    let merge = |mut a: Vec<u64>, b: Vec<u64>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    if jobs <= 1 {
        return Ok((1..=n).map(&count).fold(vec![0; width], merge));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| invalid(format!("cannot start {jobs} workers: {e}")))?;
    Ok(pool.install(|| {
        (1..=n)
            .into_par_iter()
            .map(&count)
            .reduce(|| vec![0; width], merge)
    }))
}

/// Every member of `A_n`, sorted, collected across the per-position partitions.
pub fn collect_strong_avoiders(n: usize, opts: &Options) -> Result<Vec<Permutation>> {
    require_positive(n)?;
    guard("collect_strong_avoiders", n, TABLE_LIMIT, opts.unsafe_n)?;
    let pattern = Pattern::p132();
    let part = |b: usize| {
        let mut found = Vec::new();
        let mut sq = vec![0u32; n];
        let mut it = Avoiders132::with_max_at(n, b).expect("b in range");
        while let Some(p) = it.next_raw() {
            square_into(p, &mut sq);
            if !contains_pattern_raw(&sq, pattern.as_permutation().raw()) {
                found.push(Permutation::from_zero_based(p.to_vec()));
            }
        }
        found
    };
    let mut all: Vec<Permutation> = if opts.jobs <= 1 {
        (1..=n).flat_map(part).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| invalid(format!("cannot start {} workers: {e}", opts.jobs)))?;
        pool.install(|| (1..=n).into_par_iter().flat_map_iter(part).collect())
    };
    all.sort();
    Ok(all)
}

/// Counts of strong avoiders of size `n`, split by the cycle length of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub n: usize,
    /// `counts[k - 1] = a_{n,k}`.
    pub counts: Vec<u64>,
}

impl Column {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// One column of the class table by brute force.
pub fn brute_column(n: usize, opts: &Options) -> Result<Column> {
    require_positive(n)?;
    guard("brute_table", n, TABLE_LIMIT, opts.unsafe_n)?;
    let pattern = Pattern::p132();
    let counts = fan_out(n, n, opts.jobs, |b| {
        let mut counts = vec![0u64; n];
        let mut sq = vec![0u32; n];
        let mut it = Avoiders132::with_max_at(n, b).expect("b in range");
        while let Some(p) = it.next_raw() {
            square_into(p, &mut sq);
            if !contains_pattern_raw(&sq, pattern.as_permutation().raw()) {
                counts[cycle_length_raw(p, n - 1) - 1] += 1;
            }
        }
        counts
    })?;
    Ok(Column { n, counts })
}

/// `a_{n,k}` and `a_n` for every `1 <= k <= n <= n_max`.
pub fn brute_table(n_max: usize, opts: &Options) -> Result<ClassTable> {
    require_positive(n_max)?;
    guard("brute_table", n_max, TABLE_LIMIT, opts.unsafe_n)?;
    let columns = (1..=n_max)
        .map(|n| brute_column(n, opts))
        .collect::<Result<Vec<_>>>()?;
    ClassTable::from_columns(columns)
}

/// The `(n, k) -> a_{n,k}` grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTable {
    columns: Vec<Column>,
}

/// One `(n, k, count)` cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub n: usize,
    pub k: usize,
    pub count: u64,
}

impl ClassTable {
    /// Columns must be exactly `n = 1, 2, ..., n_max`, each with `n` counts.
    pub fn from_columns(columns: Vec<Column>) -> Result<Self> {
        if columns.is_empty() {
            return Err(invalid("a class table needs at least one column"));
        }
        for (i, c) in columns.iter().enumerate() {
            if c.n != i + 1 || c.counts.len() != c.n {
                return Err(invalid(format!("malformed column for n = {}", c.n)));
            }
        }
        Ok(ClassTable { columns })
    }

    pub fn n_max(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, n: usize) -> Option<&Column> {
        n.checked_sub(1).and_then(|i| self.columns.get(i))
    }

    /// `a_{n,k}`; zero outside `1 <= k <= n <= n_max`.
    pub fn count(&self, n: usize, k: usize) -> u64 {
        self.column(n)
            .and_then(|c| k.checked_sub(1).and_then(|i| c.counts.get(i)))
            .copied()
            .unwrap_or(0)
    }

    pub fn total(&self, n: usize) -> Option<u64> {
        self.column(n).map(Column::total)
    }

    /// `Σ_{k >= 4} a_{n,k}`.
    pub fn count_k_ge_4(&self, n: usize) -> u64 {
        (4..=n).map(|k| self.count(n, k)).sum()
    }

    /// Checks the structural facts every table must satisfy: zeros at
    /// `k >= 4` with `k ∤ n`, and `a_{n+1,1} = a_n`. Returns the violated
    /// cells as `(n, k, expected, got)`.
    pub fn violations(&self) -> Vec<(usize, usize, u64, u64)> {
        let mut bad = Vec::new();
        for c in &self.columns {
            for k in 4..=c.n {
                let got = self.count(c.n, k);
                if !c.n.is_multiple_of(k) && got != 0 {
                    bad.push((c.n, k, 0, got));
                }
            }
            if let Some(next) = self.column(c.n + 1) {
                if next.counts[0] != c.total() {
                    bad.push((c.n + 1, 1, c.total(), next.counts[0]));
                }
            }
        }
        bad
    }

    pub fn records(&self) -> Vec<Record> {
        self.columns
            .iter()
            .flat_map(|c| {
                c.counts.iter().enumerate().map(|(i, &count)| Record {
                    n: c.n,
                    k: i + 1,
                    count,
                })
            })
            .collect()
    }

    fn cell(&self, n: usize, k: usize) -> String {
        if k > n {
            String::new()
        } else if k >= 4 && !n.is_multiple_of(k) && self.count(n, k) == 0 {
            "-".to_string()
        } else {
            self.count(n, k).to_string()
        }
    }

    fn grid(&self) -> Vec<Vec<String>> {
        let n_max = self.n_max();
        let mut rows = Vec::with_capacity(n_max + 2);
        rows.push(
            std::iter::once("k\\n".to_string())
                .chain((1..=n_max).map(|n| n.to_string()))
                .collect(),
        );
        for k in 1..=n_max {
            rows.push(
                std::iter::once(k.to_string())
                    .chain((1..=n_max).map(|n| self.cell(n, k)))
                    .collect(),
            );
        }
        rows.push(
            std::iter::once("Total".to_string())
                .chain(self.columns.iter().map(|c| c.total().to_string()))
                .collect(),
        );
        rows
    }

    /// Rows `k`, columns `n`, `-` for structural zeros, a final `Total` row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for row in self.grid() {
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }

    /// Same layout as the TSV, right-aligned for reading.
    pub fn to_text(&self) -> String {
        let grid = self.grid();
        let cols = grid[0].len();
        let widths: Vec<usize> = (0..cols)
            .map(|j| grid.iter().map(|r| r[j].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &grid {
            let line = row
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}"))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(out, "{}", line.trim_end());
        }
        out
    }

    /// The total row as an OEIS b-file, offset 1.
    pub fn totals_bfile(&self) -> String {
        let mut out = String::new();
        for c in &self.columns {
            let _ = writeln!(out, "{} {}", c.n, c.total());
        }
        out
    }
}

/// 132-avoiders of `S_n` whose cycles all have length 3.
pub fn count_only_3cycle_avoiders(n: usize, opts: &Options) -> Result<u64> {
    require_positive(n)?;
    guard("count_only_3cycle_avoiders", n, TABLE_LIMIT, opts.unsafe_n)?;
    if !n.is_multiple_of(3) {
        return Ok(0);
    }
    let counts = fan_out(n, 1, opts.jobs, |b| {
        let mut it = Avoiders132::with_max_at(n, b).expect("b in range");
        let mut hits = 0;
        while let Some(p) = it.next_raw() {
            if (0..n).all(|v| cycle_length_raw(p, v) == 3) {
                hits += 1;
            }
        }
        vec![hits]
    })?;
    Ok(counts[0])
}

/// 132-avoiding involutions of `S_n`.
pub fn count_involutions_132(n: usize, opts: &Options) -> Result<u64> {
    require_positive(n)?;
    guard("count_involutions_132", n, TABLE_LIMIT, opts.unsafe_n)?;
    let counts = fan_out(n, 1, opts.jobs, |b| {
        let mut it = Avoiders132::with_max_at(n, b).expect("b in range");
        let mut hits = 0;
        while let Some(p) = it.next_raw() {
            if p.iter()
                .enumerate()
                .all(|(i, &x)| p[x as usize] as usize == i)
            {
                hits += 1;
            }
        }
        vec![hits]
    })?;
    Ok(counts[0])
}

/// Strong 312-avoiders of size `n`, found among the complements of the
/// 132-avoiders (complementing swaps 132 and 312).
pub fn count_strong_312(n: usize, opts: &Options) -> Result<u64> {
    require_positive(n)?;
    guard("count_strong_312", n, AVOIDER_LIMIT, opts.unsafe_n)?;
    let p312 = Pattern::p312();
    let t = p312.as_permutation().raw().to_vec();
    let counts = fan_out(n, 1, opts.jobs, |b| {
        let mut it = Avoiders132::with_max_at(n, b).expect("b in range");
        let mut comp = vec![0u32; n];
        let mut sq = vec![0u32; n];
        let mut hits = 0;
        while let Some(p) = it.next_raw() {
            for (c, &x) in comp.iter_mut().zip(p) {
                *c = n as u32 - 1 - x;
            }
            assert!(
                !contains_pattern_raw(&comp, &t),
                "complement of an avoider contains 312"
            );
            square_into(&comp, &mut sq);
            if !contains_pattern_raw(&sq, &t) {
                hits += 1;
            }
        }
        vec![hits]
    })?;
    Ok(counts[0])
}

/// Strong avoiders of `pattern` by filtering all of `S_n`. Independent of the
/// avoider generator; only sensible for small `n`.
pub fn count_strong_full_scan(n: usize, pattern: &Pattern, unsafe_n: bool) -> Result<u64> {
    Ok(gen_all_with(n, unsafe_n)?
        .filter(|p| p.strongly_avoids(pattern))
        .count() as u64)
}
