//! Wavy-latin squares: a partition into latin H-graphs and one into latin
//! V-graphs such that every H-graph meets every V-graph in exactly one cell.
//! Also the census of squares up to color renaming, row and column
//! permutation and transposition.

use crate::error::{Error, Result};
use crate::position::{Position, PositionArray};
use crate::state::SquareState;
use std::fmt::Write as _;
use std::io::Write as _;
use std::ops::ControlFlow;
use std::path::Path;

pub const DEFAULT_WAVY_BUDGET: u64 = 50_000_000;
/// Largest n accepted by the type canonicalization.
pub const MAX_TYPE_N: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WavyNetwork {
    pub h_graphs: Vec<PositionArray>,
    pub v_graphs: Vec<PositionArray>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WavyOutcome {
    Wavy(WavyNetwork),
    NotWavy,
    Unknown,
}

impl WavyOutcome {
    pub fn is_wavy(&self) -> Option<bool> {
        match self {
            WavyOutcome::Wavy(_) => Some(true),
            WavyOutcome::NotWavy => Some(false),
            WavyOutcome::Unknown => None,
        }
    }
}

struct Search<'a> {
    n: usize,
    digits: &'a [usize],
    h: Vec<usize>,
    v: Vec<usize>,
    col_h: Vec<u32>,
    color_h: Vec<u32>,
    row_v: Vec<u32>,
    color_v: Vec<u32>,
    pair: Vec<u32>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    // Labels cell by cell in rank order. The H-graph through (0, r) is
    // named r and the V-graph through (c, 0) is named c.
    fn run(&mut self, rank: usize) -> ControlFlow<bool> {
        let n = self.n;
        if rank == n * n {
            return ControlFlow::Break(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return ControlFlow::Break(false);
        }
        let (c, r) = (rank % n, rank / n);
        let d = self.digits[rank];
        let hs: Vec<usize> = if c == 0 { vec![r] } else { (0..n).collect() };
        let vs: Vec<usize> = if r == 0 { vec![c] } else { (0..n).collect() };
        for &h in &hs {
            let hb = 1u32 << h;
            if (self.col_h[c] | self.color_h[d]) & hb != 0 {
                continue;
            }
            for &v in &vs {
                let vb = 1u32 << v;
                if (self.row_v[r] | self.color_v[d] | self.pair[h]) & vb != 0 {
                    continue;
                }
                self.col_h[c] |= hb;
                self.color_h[d] |= hb;
                self.row_v[r] |= vb;
                self.color_v[d] |= vb;
                self.pair[h] |= vb;
                self.h[rank] = h;
                self.v[rank] = v;
                let out = self.run(rank + 1);
                self.col_h[c] ^= hb;
                self.color_h[d] ^= hb;
                self.row_v[r] ^= vb;
                self.color_v[d] ^= vb;
                self.pair[h] ^= vb;
                out?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Backtracking search for a wavy-latin network; `Unknown` once `budget`
/// search nodes are spent. Practical for n up to about 5.
pub fn wavy_latin(state: &SquareState, budget: u64) -> Result<WavyOutcome> {
    let n = state.n();
    if n > 31 {
        return Err(Error::Unsupported(n));
    }
    let mut s = Search {
        n,
        digits: state.digits(),
        h: vec![0; n * n],
        v: vec![0; n * n],
        col_h: vec![0; n],
        color_h: vec![0; n],
        row_v: vec![0; n],
        color_v: vec![0; n],
        pair: vec![0; n],
        nodes: 0,
        budget,
    };
    match s.run(0) {
        ControlFlow::Continue(()) => Ok(WavyOutcome::NotWavy),
        ControlFlow::Break(false) => Ok(WavyOutcome::Unknown),
        ControlFlow::Break(true) => {
            let mut hg = vec![vec![Position::new(0, 0); n]; n];
            let mut vg = vec![vec![Position::new(0, 0); n]; n];
            for rank in 0..n * n {
                let p = Position::from_rank(rank, n);
                hg[s.h[rank]][p.col] = p;
                vg[s.v[rank]][p.row] = p;
            }
            let h_graphs = hg
                .into_iter()
                .map(|g| PositionArray::new(n, g))
                .collect::<Result<_>>()?;
            let v_graphs = vg
                .into_iter()
                .map(|g| PositionArray::new(n, g))
                .collect::<Result<_>>()?;
            Ok(WavyOutcome::Wavy(WavyNetwork { h_graphs, v_graphs }))
        }
    }
}

/// Checks the defining properties of a network against `state`.
pub fn is_wavy_network(state: &SquareState, net: &WavyNetwork) -> bool {
    let n = state.n();
    let graphs_ok = |gs: &[PositionArray], h: bool| {
        let mut seen = vec![false; n * n];
        gs.len() == n
            && gs.iter().all(|g| {
                let set = g.to_set();
                (if h {
                    set.is_h_graph()
                } else {
                    set.is_v_graph()
                }) && state.is_latin_set(g.iter())
                    && g.iter()
                        .all(|p| !std::mem::replace(&mut seen[p.rank(n)], true))
            })
    };
    graphs_ok(&net.h_graphs, true)
        && graphs_ok(&net.v_graphs, false)
        && net.h_graphs.iter().all(|h| {
            let hs = h.to_set();
            net.v_graphs
                .iter()
                .all(|v| v.iter().filter(|&p| hs.contains(p)).count() == 1)
        })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out
}

/// Relabels colors in order of first appearance along the ranks.
fn normalize_colors(digits: &[u8], n: usize) -> Vec<u8> {
    let mut label = vec![u8::MAX; n];
    let mut next = 0;
    digits
        .iter()
        .map(|&d| {
            if label[d as usize] == u8::MAX {
                label[d as usize] = next;
                next += 1;
            }
            label[d as usize]
        })
        .collect()
}

/// Least color-normalized digit sequence over all row permutations, column
/// permutations and transposition; returned as a square.
pub fn canonical_type(state: &SquareState) -> Result<SquareState> {
    let n = state.n();
    if n > MAX_TYPE_N {
        return Err(Error::Unsupported(n));
    }
    let src: Vec<u8> = state.digits().iter().map(|&d| d as u8).collect();
    let perms = permutations(n);
    let mut best: Option<Vec<u8>> = None;
    let mut img = vec![0u8; n * n];
    for t in [false, true] {
        for rows in &perms {
            for cols in &perms {
                for r in 0..n {
                    for c in 0..n {
                        let (sc, sr) = if t {
                            (rows[r], cols[c])
                        } else {
                            (cols[c], rows[r])
                        };
                        img[c + n * r] = src[sc + n * sr];
                    }
                }
                let cand = normalize_colors(&img, n);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
    }
    SquareState::new(
        n,
        best.unwrap_or_default()
            .into_iter()
            .map(usize::from)
            .collect(),
    )
}

/// Pruned orbit search deciding whether a color-normalized sequence is the
/// least element of its orbit.
struct OrbitCheck<'a> {
    n: usize,
    target: &'a [u8],
    src: Vec<u8>,
    row_of: Vec<usize>,
    col_of: Vec<usize>,
    row_used: u32,
    col_used: u32,
    label: Vec<u8>,
    next: u8,
}

impl OrbitCheck<'_> {
    fn cell(&self, c: usize, r: usize) -> u8 {
        self.src[self.col_of[c] + self.n * self.row_of[r]]
    }

    // Compares the image digit at rank `pos` (source digit `d`) with the
    // target. Break(true): image smaller. Continue(false): image larger.
    fn step(&mut self, pos: usize, d: u8, undo: &mut Vec<u8>) -> ControlFlow<bool, bool> {
        let l = if self.label[d as usize] == u8::MAX {
            self.label[d as usize] = self.next;
            self.next += 1;
            undo.push(d);
            self.next - 1
        } else {
            self.label[d as usize]
        };
        match l.cmp(&self.target[pos]) {
            std::cmp::Ordering::Less => ControlFlow::Break(true),
            std::cmp::Ordering::Greater => ControlFlow::Continue(false),
            std::cmp::Ordering::Equal => ControlFlow::Continue(true),
        }
    }

    fn unwind(&mut self, undo: &[u8]) {
        for &d in undo {
            self.label[d as usize] = u8::MAX;
            self.next -= 1;
        }
    }

    /// Break(()) iff some completion is smaller than the target.
    fn row0(&mut self, c: usize) -> ControlFlow<()> {
        let n = self.n;
        if c == n {
            return self.rows(1);
        }
        for sc in 0..n {
            if self.col_used >> sc & 1 == 1 {
                continue;
            }
            self.col_of[c] = sc;
            let mut undo = Vec::new();
            let d = self.cell(c, 0);
            let res = self.step(c, d, &mut undo);
            let out = match res {
                ControlFlow::Break(_) => ControlFlow::Break(()),
                ControlFlow::Continue(false) => ControlFlow::Continue(()),
                ControlFlow::Continue(true) => {
                    self.col_used |= 1 << sc;
                    let o = self.row0(c + 1);
                    self.col_used ^= 1 << sc;
                    o
                }
            };
            self.unwind(&undo);
            out?;
        }
        ControlFlow::Continue(())
    }

    fn rows(&mut self, r: usize) -> ControlFlow<()> {
        let n = self.n;
        if r == n {
            return ControlFlow::Continue(());
        }
        for sr in 0..n {
            if self.row_used >> sr & 1 == 1 {
                continue;
            }
            self.row_of[r] = sr;
            let mut undo = Vec::new();
            let mut equal = true;
            let mut smaller = false;
            for c in 0..n {
                let d = self.cell(c, r);
                match self.step(c + n * r, d, &mut undo) {
                    ControlFlow::Break(_) => {
                        smaller = true;
                        break;
                    }
                    ControlFlow::Continue(false) => {
                        equal = false;
                        break;
                    }
                    ControlFlow::Continue(true) => {}
                }
            }
            let out = if smaller {
                ControlFlow::Break(())
            } else if equal {
                self.row_used |= 1 << sr;
                let o = self.rows(r + 1);
                self.row_used ^= 1 << sr;
                o
            } else {
                ControlFlow::Continue(())
            };
            self.unwind(&undo);
            out?;
        }
        ControlFlow::Continue(())
    }
}

/// Whether `digits` (color-normalized, rank order) is the canonical
/// representative of its type.
fn is_canonical(digits: &[u8], n: usize) -> bool {
    for t in [false, true] {
        let src: Vec<u8> = if t {
            (0..n * n).map(|i| digits[(i / n) + n * (i % n)]).collect()
        } else {
            digits.to_vec()
        };
        for r0 in 0..n {
            let mut chk = OrbitCheck {
                n,
                target: digits,
                src: src.clone(),
                row_of: vec![0; n],
                col_of: vec![0; n],
                row_used: 1 << r0,
                col_used: 0,
                label: vec![u8::MAX; n],
                next: 0,
            };
            chk.row_of[0] = r0;
            if chk.row0(0).is_break() {
                return false;
            }
        }
    }
    true
}

/// Visits every color-normalized equi-n-square (colors first appear in
/// increasing order along the ranks); these are the placements divided by
/// the `n!` color renamings.
pub fn for_each_normalized_placement(n: usize, visit: &mut dyn FnMut(&[u8]) -> ControlFlow<()>) {
    fn rec(
        n: usize,
        pos: usize,
        used: u8,
        count: &mut [usize],
        cur: &mut Vec<u8>,
        visit: &mut dyn FnMut(&[u8]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if pos == n * n {
            return visit(cur);
        }
        let top = (used as usize + 1).min(n);
        for d in 0..top {
            if count[d] == n {
                continue;
            }
            count[d] += 1;
            cur.push(d as u8);
            let out = rec(n, pos + 1, used.max(d as u8 + 1), count, cur, visit);
            cur.pop();
            count[d] -= 1;
            out?;
        }
        ControlFlow::Continue(())
    }
    let mut count = vec![0; n];
    let mut cur = Vec::with_capacity(n * n);
    let _ = rec(n, 0, 0, &mut count, &mut cur, visit);
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusReport {
    pub n: usize,
    /// Color-normalized placements scanned.
    pub placements: u64,
    pub types: u64,
    /// Canonical representatives with no wavy-latin network.
    pub non_wavy: Vec<SquareState>,
    /// Types whose search ran out of budget.
    pub unknown: Vec<SquareState>,
}

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub budget: u64,
    pub jobs: usize,
    /// Placements between checkpoint writes.
    pub chunk: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_WAVY_BUDGET,
            jobs: 1,
            chunk: 1 << 16,
        }
    }
}

const CHECKPOINT_MAGIC: &str = "equisquare-wavy-census 1";

fn digits_string(d: &[u8]) -> String {
    d.iter().map(|&x| char::from(b'0' + x)).collect()
}

fn state_of(n: usize, d: &[u8]) -> Result<SquareState> {
    SquareState::new(n, d.iter().map(|&x| usize::from(x)).collect())
}

#[derive(Default)]
struct Progress {
    next: u64,
    records: Vec<(Vec<u8>, Option<bool>)>,
}

/// Checkpoint layout, one item per line:
/// `equisquare-wavy-census 1`, `n <n>`, `next <placements done>`, then one
/// record per type found so far: the canonical digits in rank order and a
/// flag `1` (wavy), `0` (not wavy) or `?` (budget exhausted).
fn read_checkpoint(path: &Path, n: usize) -> Result<Progress> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Progress::default()),
        Err(e) => return Err(Error::Internal(format!("reading {}: {e}", path.display()))),
    };
    let bad = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut lines = text.lines().enumerate();
    if lines.next().map(|(_, l)| l.trim()) != Some(CHECKPOINT_MAGIC) {
        return Err(bad(1, "not a census checkpoint"));
    }
    let mut field = |name: &str| -> Result<u64> {
        let (i, l) = lines.next().ok_or_else(|| bad(0, "truncated header"))?;
        l.strip_prefix(name)
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| bad(i + 1, &format!("expected `{name} <value>`")))
    };
    if field("n")? != n as u64 {
        return Err(bad(2, "checkpoint is for a different n"));
    }
    let next = field("next")?;
    let mut records = Vec::new();
    for (i, l) in lines {
        let mut it = l.split_whitespace();
        let (Some(code), Some(flag)) = (it.next(), it.next()) else {
            return Err(bad(i + 1, "expected `<digits> <flag>`"));
        };
        let d: Vec<u8> = code.bytes().map(|b| b.wrapping_sub(b'0')).collect();
        if d.len() != n * n || d.iter().any(|&x| x as usize >= n) {
            return Err(bad(i + 1, "bad digit string"));
        }
        let flag = match flag {
            "1" => Some(true),
            "0" => Some(false),
            "?" => None,
            _ => return Err(bad(i + 1, "flag must be 1, 0 or ?")),
        };
        records.push((d, flag));
    }
    Ok(Progress { next, records })
}

fn write_checkpoint(path: &Path, n: usize, p: &Progress) -> Result<()> {
    let mut s = format!("{CHECKPOINT_MAGIC}\nn {n}\nnext {}\n", p.next);
    for (d, flag) in &p.records {
        let f = match flag {
            Some(true) => "1",
            Some(false) => "0",
            None => "?",
        };
        let _ = writeln!(s, "{} {f}", digits_string(d));
    }
    let tmp = path.with_extension("tmp");
    let io = |e: std::io::Error| Error::Internal(format!("writing {}: {e}", path.display()));
    let mut file = std::fs::File::create(&tmp).map_err(io)?;
    file.write_all(s.as_bytes()).map_err(io)?;
    file.sync_all().map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

fn classify(chunk: &[Vec<u8>], n: usize, budget: u64) -> Result<Vec<(Vec<u8>, Option<bool>)>> {
    let mut out = Vec::new();
    for d in chunk {
        if is_canonical(d, n) {
            let flag = wavy_latin(&state_of(n, d)?, budget)?.is_wavy();
            out.push((d.clone(), flag));
        }
    }
    Ok(out)
}

/// Counts types of equi-n-squares and the ones that are not wavy-latin.
/// With a checkpoint path the run resumes from, and periodically saves to,
/// that file.
pub fn wavy_census(
    n: usize,
    opts: &CensusOptions,
    checkpoint: Option<&Path>,
) -> Result<CensusReport> {
    if !(1..=4).contains(&n) {
        return Err(Error::Unsupported(n));
    }
    let mut prog = match checkpoint {
        Some(p) => read_checkpoint(p, n)?,
        None => Progress::default(),
    };
    let jobs = opts.jobs.max(1);
    let chunk_len = opts.chunk.max(1);
    let mut index = 0u64;
    let mut chunk: Vec<Vec<u8>> = Vec::with_capacity(chunk_len);
    let mut failure: Option<Error> = None;

    let flush = |chunk: &mut Vec<Vec<u8>>, upto: u64, prog: &mut Progress| -> Result<()> {
        let found = if jobs == 1 || chunk.len() < jobs {
            classify(chunk, n, opts.budget)?
        } else {
            let per = chunk.len().div_ceil(jobs);
            let parts: Vec<Result<Vec<_>>> = std::thread::scope(|scope| {
                let handles: Vec<_> = chunk
                    .chunks(per)
                    .map(|c| scope.spawn(move || classify(c, n, opts.budget)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("census worker panicked"))
                    .collect()
            });
            let mut all = Vec::new();
            for p in parts {
                all.extend(p?);
            }
            all
        };
        prog.records.extend(found);
        prog.next = upto;
        chunk.clear();
        if let Some(path) = checkpoint {
            write_checkpoint(path, n, prog)?;
        }
        Ok(())
    };

    for_each_normalized_placement(n, &mut |d| {
        index += 1;
        if index <= prog.next {
            return ControlFlow::Continue(());
        }
        chunk.push(d.to_vec());
        if chunk.len() == chunk_len {
            if let Err(e) = flush(&mut chunk, index, &mut prog) {
                failure = Some(e);
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    if let Some(e) = failure {
        return Err(e);
    }
    if !chunk.is_empty() || checkpoint.is_some() {
        flush(&mut chunk, index.max(prog.next), &mut prog)?;
    }

    prog.records.sort();
    let mut report = CensusReport {
        n,
        placements: index,
        types: prog.records.len() as u64,
        ..Default::default()
    };
    for (d, flag) in &prog.records {
        match flag {
            Some(false) => report.non_wavy.push(state_of(n, d)?),
            None => report.unknown.push(state_of(n, d)?),
            Some(true) => {}
        }
    }
    Ok(report)
}
