//! V-moves maximizing the number of occupied rows.

use crate::error::{Error, Result};
use crate::moves::{Axis, ElementaryMove};
use crate::position::{full_mask, rotate_mask, Position, PositionSet, MAX_MASK_N};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::ops::ControlFlow;

/// Default node budget of the exhaustive optimizer.
pub const DEFAULT_V_BUDGET: u64 = 20_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeuristicOptions {
    pub restarts: usize,
    pub seed: u64,
}

impl Default for HeuristicOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VOptions {
    /// Node budget for the exhaustive search.
    pub budget: u64,
    /// Fall back to (or go straight to) randomized hill climbing. Results
    /// from this mode are weakly V-optimal and not certified.
    pub heuristic: Option<HeuristicOptions>,
    /// Skip the exhaustive search altogether.
    pub heuristic_only: bool,
}

impl Default for VOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_V_BUDGET,
            heuristic: None,
            heuristic_only: false,
        }
    }
}

/// Quantities attached to one S-column `K`: `s0 = #(S ∩ K)`, `u0` row-unique
/// positions of S in K, `f` cells of K on S-free rows, `f0` the remaining
/// cells of K.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnStats {
    pub col: usize,
    pub s0: usize,
    pub u0: usize,
    pub f0: usize,
    pub f: usize,
    /// `Σ_v (#rows(S) - #rows(v(S)))` over all n rotations `v` of K.
    pub deficit_sum: i64,
    /// `s0 * f <= (n - s0) * u0`.
    pub first_holds: bool,
    /// `s0 * f0 >= (n - s0) * (s0 - u0)`.
    pub second_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimizationReport {
    pub input: PositionSet,
    pub v_move: ElementaryMove,
    pub moved: PositionSet,
    pub rows: usize,
    /// True when the search was exhaustive, i.e. `moved` is V-optimal.
    pub certified: bool,
    /// Statistics for every column of `moved`.
    pub stats: Vec<ColumnStats>,
}

/// Body columns (at least two positions) as row masks and column-unique
/// positions, both in column order.
struct Layout {
    n: usize,
    body: Vec<(usize, u128)>,
    singles: Vec<Position>,
}

impl Layout {
    fn new(s: &PositionSet) -> Result<Self> {
        let n = s.n();
        if n > MAX_MASK_N {
            return Err(Error::Unsupported(n));
        }
        let masks = s.col_masks()?;
        let mut body = Vec::new();
        let mut singles = Vec::new();
        for (c, &m) in masks.iter().enumerate() {
            match m.count_ones() {
                0 => {}
                1 => singles.push(Position::new(c, m.trailing_zeros() as usize)),
                _ => body.push((c, m)),
            }
        }
        Ok(Self { n, body, singles })
    }

    fn union(&self, offsets: &[usize]) -> u128 {
        self.body
            .iter()
            .zip(offsets)
            .fold(0, |u, ((_, m), &v)| u | rotate_mask(*m, v, self.n))
    }

    /// Full V-move from body offsets: column-unique positions go to distinct
    /// free rows (kept in place when already free).
    fn complete(&self, offsets: &[usize]) -> ElementaryMove {
        let n = self.n;
        let mut mv = ElementaryMove::zero(Axis::V, n);
        for ((c, _), &v) in self.body.iter().zip(offsets) {
            mv.offsets[*c] = v;
        }
        let mut taken = self.union(offsets);
        let full = full_mask(n);
        for p in &self.singles {
            let bit = 1u128 << p.row;
            if taken & bit == 0 {
                taken |= bit;
                continue;
            }
            let free = !taken & full;
            if free == 0 {
                continue;
            }
            let target = free.trailing_zeros() as usize;
            taken |= 1u128 << target;
            mv.offsets[p.col] = (target + n - p.row) % n;
        }
        mv
    }
}

fn apply_v(s: &PositionSet, mv: &ElementaryMove) -> PositionSet {
    PositionSet::new(s.n(), s.iter().map(|p| mv.apply(p))).expect("moves are bijective")
}

/// Branch and bound over body-column offsets, first body column pinned,
/// offsets tried in lexicographic order.
struct BodySearch<'a> {
    layout: &'a Layout,
    suffix: Vec<usize>,
    cap: usize,
    budget: u64,
    used: u64,
}

impl<'a> BodySearch<'a> {
    fn new(layout: &'a Layout, budget: u64) -> Self {
        let k = layout.body.len();
        let mut suffix = vec![0; k + 1];
        for i in (0..k).rev() {
            suffix[i] = suffix[i + 1] + layout.body[i].1.count_ones() as usize;
        }
        let cap = layout.n.min(suffix[0]);
        Self {
            layout,
            suffix,
            cap,
            budget,
            used: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.budget {
            Err(Error::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    /// Lexicographically least offsets of maximum union size.
    fn best(&mut self) -> Result<(usize, Vec<usize>)> {
        let k = self.layout.body.len();
        if k == 0 {
            return Ok((0, Vec::new()));
        }
        let mut cur = vec![0; k];
        let mut best = (0usize, vec![0; k]);
        self.best_rec(1, self.layout.body[0].1, &mut cur, &mut best)?;
        Ok(best)
    }

    fn best_rec(
        &mut self,
        i: usize,
        union: u128,
        cur: &mut Vec<usize>,
        best: &mut (usize, Vec<usize>),
    ) -> Result<()> {
        let size = union.count_ones() as usize;
        if i == cur.len() {
            if size > best.0 {
                *best = (size, cur.clone());
            }
            return Ok(());
        }
        let m = self.layout.body[i].1;
        for v in 0..self.layout.n {
            if best.0 >= self.cap || size + self.suffix[i] <= best.0 {
                return Ok(());
            }
            self.tick()?;
            cur[i] = v;
            self.best_rec(i + 1, union | rotate_mask(m, v, self.layout.n), cur, best)?;
        }
        cur[i] = 0;
        Ok(())
    }

    /// Visits all offset tuples reaching `target`, in lexicographic order.
    fn each(
        &mut self,
        target: usize,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<()> {
        let k = self.layout.body.len();
        if k == 0 {
            let _ = visit(&[]);
            return Ok(());
        }
        let mut cur = vec![0; k];
        self.each_rec(1, self.layout.body[0].1, &mut cur, target, visit)
            .map(|_| ())
    }

    fn each_rec(
        &mut self,
        i: usize,
        union: u128,
        cur: &mut Vec<usize>,
        target: usize,
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let size = union.count_ones() as usize;
        if size + self.suffix[i] < target {
            return Ok(ControlFlow::Continue(()));
        }
        if i == cur.len() {
            return Ok(if size == target {
                visit(cur)
            } else {
                ControlFlow::Continue(())
            });
        }
        let m = self.layout.body[i].1;
        for v in 0..self.layout.n {
            self.tick()?;
            cur[i] = v;
            if self
                .each_rec(
                    i + 1,
                    union | rotate_mask(m, v, self.layout.n),
                    cur,
                    target,
                    visit,
                )?
                .is_break()
            {
                return Ok(ControlFlow::Break(()));
            }
        }
        cur[i] = 0;
        Ok(ControlFlow::Continue(()))
    }
}

/// Finds a V-move maximizing the number of rows. Exhaustive (and certified)
/// unless the budget runs out, in which case the heuristic options decide
/// between an error and a weakly optimal, uncertified answer.
pub fn v_optimize(s: &PositionSet, opts: &VOptions) -> Result<OptimizationReport> {
    let layout = Layout::new(s)?;
    if !opts.heuristic_only {
        let mut search = BodySearch::new(&layout, opts.budget);
        match search.best() {
            Ok((_, offsets)) => return report(s, layout.complete(&offsets), true),
            Err(Error::BudgetExceeded(b)) if opts.heuristic.is_none() => {
                return Err(Error::BudgetExceeded(b))
            }
            Err(Error::BudgetExceeded(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let h = opts.heuristic.clone().unwrap_or_default();
    let mv = heuristic_v_move(s, &h, |_| false)?;
    report(s, mv, false)
}

/// Calls `visit` on every V-move reaching the optimum row count, body
/// offsets in lexicographic order (first body column pinned at 0). Returns
/// the optimum.
pub fn for_each_optimal_v_move(
    s: &PositionSet,
    budget: u64,
    mut visit: impl FnMut(&ElementaryMove) -> ControlFlow<()>,
) -> Result<usize> {
    let layout = Layout::new(s)?;
    let mut search = BodySearch::new(&layout, budget);
    let (best, offsets) = search.best()?;
    let rows = row_count(&apply_v(s, &layout.complete(&offsets)));
    let mut inner = |o: &[usize]| visit(&layout.complete(o));
    search.each(best, &mut inner)?;
    Ok(rows)
}

/// Randomized greedy placement plus single-column hill climbing. Every
/// candidate is weakly V-optimal; `accept` may stop the restarts early.
pub fn heuristic_v_move(
    s: &PositionSet,
    opts: &HeuristicOptions,
    mut accept: impl FnMut(&ElementaryMove) -> bool,
) -> Result<ElementaryMove> {
    let n = s.n();
    if n > MAX_MASK_N {
        return Err(Error::Unsupported(n));
    }
    let masks = s.col_masks()?;
    let cols: Vec<usize> = (0..n).filter(|&c| masks[c] != 0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<(usize, Vec<usize>)> = None;
    for attempt in 0..opts.restarts.max(1) {
        let mut order = cols.clone();
        let mut offsets = vec![0usize; n];
        if attempt == 0 {
            order.sort_by_key(|&c| (std::cmp::Reverse(masks[c].count_ones()), c));
        } else {
            order.shuffle(&mut rng);
        }
        // greedy: each column to an offset adding most new rows; the first
        // restart takes the least such offset, later ones a random one
        let mut union = 0u128;
        for (i, &c) in order.iter().enumerate() {
            let ties = best_offsets(masks[c], union, n);
            let v = if i == 0 || attempt == 0 {
                ties[0]
            } else {
                *ties.choose(&mut rng).unwrap()
            };
            offsets[c] = v;
            union |= rotate_mask(masks[c], v, n);
        }
        hill_climb(&masks, &cols, &mut offsets, n);
        let rows = cols
            .iter()
            .fold(0u128, |u, &c| u | rotate_mask(masks[c], offsets[c], n))
            .count_ones() as usize;
        let mv = ElementaryMove::new(Axis::V, offsets.clone())?;
        let stop = accept(&mv);
        if best.as_ref().is_none_or(|b| rows > b.0) {
            best = Some((rows, offsets));
        }
        if stop {
            return Ok(mv);
        }
    }
    ElementaryMove::new(Axis::V, best.unwrap().1)
}

/// Offsets of `m` adding the most rows not in `union`, ascending.
fn best_offsets(m: u128, union: u128, n: usize) -> Vec<usize> {
    let gains: Vec<u32> = (0..n)
        .map(|v| (rotate_mask(m, v, n) & !union).count_ones())
        .collect();
    let top = *gains.iter().max().unwrap();
    (0..n).filter(|&v| gains[v] == top).collect()
}

fn hill_climb(masks: &[u128], cols: &[usize], offsets: &mut [usize], n: usize) {
    loop {
        let mut improved = false;
        for &c in cols {
            let others = cols
                .iter()
                .filter(|&&d| d != c)
                .fold(0u128, |u, &d| u | rotate_mask(masks[d], offsets[d], n));
            let cur = (others | rotate_mask(masks[c], offsets[c], n)).count_ones();
            for v in 0..n {
                if (others | rotate_mask(masks[c], v, n)).count_ones() > cur {
                    offsets[c] = v;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            return;
        }
    }
}

fn row_count(s: &PositionSet) -> usize {
    s.row_count()
}

fn report(s: &PositionSet, v_move: ElementaryMove, certified: bool) -> Result<OptimizationReport> {
    let moved = apply_v(s, &v_move);
    let rows = moved.row_count();
    let stats = moved
        .col_sets()
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_empty())
        .map(|(c, _)| column_stats(&moved, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(OptimizationReport {
        input: s.clone(),
        v_move,
        moved,
        rows,
        certified,
        stats,
    })
}

/// True iff no rotation of a single column raises the number of rows.
pub fn is_weakly_v_optimal(s: &PositionSet) -> bool {
    let n = s.n();
    let masks = match s.col_masks() {
        Ok(m) => m,
        Err(_) => return weakly_optimal_slow(s),
    };
    let cols: Vec<usize> = (0..n).filter(|&c| masks[c] != 0).collect();
    let total = cols.iter().fold(0u128, |u, &c| u | masks[c]).count_ones();
    cols.iter().all(|&c| {
        let others = cols
            .iter()
            .filter(|&&d| d != c)
            .fold(0u128, |u, &d| u | masks[d]);
        (1..n).all(|v| (others | rotate_mask(masks[c], v, n)).count_ones() <= total)
    })
}

fn weakly_optimal_slow(s: &PositionSet) -> bool {
    let n = s.n();
    let rows = s.row_count();
    (0..n).filter(|&c| s.iter().any(|p| p.col == c)).all(|c| {
        (1..n).all(|v| {
            apply_v(s, &ElementaryMove::single(Axis::V, n, c, v as i64)).row_count() <= rows
        })
    })
}

/// Column statistics with the deficit sum computed by brute force over all
/// rotations of the column.
pub fn column_stats(s: &PositionSet, col: usize) -> Result<ColumnStats> {
    let n = s.n();
    if col >= n {
        return Err(Error::OutOfRange { col, row: 0, n });
    }
    let rows = s.row_sets();
    let in_col: Vec<usize> = s.iter().filter(|p| p.col == col).map(|p| p.row).collect();
    if in_col.is_empty() {
        return Err(Error::Precondition(format!(
            "column {col} holds no position of the set"
        )));
    }
    let s0 = in_col.len();
    let u0 = in_col.iter().filter(|&&r| rows[r].len() == 1).count();
    let f = rows.iter().filter(|r| r.is_empty()).count();
    let f0 = n - s0 - f;
    let base = s.row_count() as i64;
    let deficit_sum: i64 = (0..n)
        .map(|v| {
            base - apply_v(s, &ElementaryMove::single(Axis::V, n, col, v as i64)).row_count() as i64
        })
        .sum();
    Ok(ColumnStats {
        col,
        s0,
        u0,
        f0,
        f,
        deficit_sum,
        first_holds: s0 * f <= (n - s0) * u0,
        second_holds: s0 * f0 >= (n - s0) * (s0 - u0),
    })
}

impl ColumnStats {
    /// `(n - s0) u0 - s0 f`, which always equals [`ColumnStats::deficit_sum`].
    pub fn slack(&self) -> i64 {
        let n = (self.s0 + self.f0 + self.f) as i64;
        (n - self.s0 as i64) * self.u0 as i64 - (self.s0 * self.f) as i64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[(usize, usize)]) -> PositionSet {
        PositionSet::from_pairs(n, xs).unwrap()
    }

    #[test]
    fn tiny_examples() {
        let r = v_optimize(&set(2, &[(0, 0), (0, 1)]), &VOptions::default()).unwrap();
        assert!(r.v_move.is_identity());
        assert_eq!(r.rows, 2);
        let r = v_optimize(&set(2, &[(0, 0), (1, 0)]), &VOptions::default()).unwrap();
        assert_eq!(r.v_move.offsets, vec![0, 1]);
        assert_eq!(r.rows, 2);
        assert!(!is_weakly_v_optimal(&set(2, &[(0, 0), (1, 0)])));
    }

    #[test]
    fn six_set_reaches_five_rows() {
        let s = set(6, &[(0, 0), (1, 0), (1, 1), (2, 1), (0, 2), (2, 2)]);
        let r = v_optimize(&s, &VOptions::default()).unwrap();
        assert_eq!(r.rows, 5);
        assert!(r.certified);
        // brute force over all 6^3 column rotations
        let mut best = 0;
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    let mv = ElementaryMove::new(Axis::V, vec![a, b, c, 0, 0, 0]).unwrap();
                    best = best.max(apply_v(&s, &mv).row_count());
                }
            }
        }
        assert_eq!(best, 5);
    }

    #[test]
    fn stats_identity_on_v_graph() {
        let s = set(4, &[(0, 0), (1, 1), (1, 2), (3, 3)]);
        let st = column_stats(&s, 0).unwrap();
        assert_eq!((st.s0, st.u0, st.f), (1, 1, 0));
        assert_eq!(st.deficit_sum, st.slack());
    }

    #[test]
    fn coopt_enumeration_starts_with_best() {
        let s = set(5, &[(0, 0), (0, 1), (1, 0), (1, 1), (2, 4)]);
        let r = v_optimize(&s, &VOptions::default()).unwrap();
        let mut first = None;
        let mut count = 0;
        let opt = for_each_optimal_v_move(&s, 1 << 20, |mv| {
            if first.is_none() {
                first = Some(mv.clone());
            }
            count += 1;
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(opt, r.rows);
        assert_eq!(first.unwrap(), r.v_move);
        assert!(count >= 2);
    }

    #[test]
    fn heuristic_is_weakly_optimal() {
        let s = set(7, &[(0, 0), (0, 1), (0, 2), (1, 0), (1, 3), (2, 5), (3, 5)]);
        let opts = VOptions {
            heuristic: Some(HeuristicOptions::default()),
            heuristic_only: true,
            ..Default::default()
        };
        let r = v_optimize(&s, &opts).unwrap();
        assert!(!r.certified);
        assert!(is_weakly_v_optimal(&r.moved));
    }
}
