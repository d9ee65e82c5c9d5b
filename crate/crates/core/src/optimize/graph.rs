//! Mapping n-sets onto function graphs with one shuffle, and ordered arrays
//! onto graphs with two.

use super::voptimize::{
    for_each_optimal_v_move, heuristic_v_move, v_optimize, HeuristicOptions, VOptions,
};
use crate::error::{Error, Result};
use crate::moves::{Axis, ElementaryMove, MoveSequence};
use crate::ngon::{separate_masks, FamilyOutcome};
use crate::position::{PositionArray, PositionSet, MAX_MASK_N};
use std::ops::ControlFlow;

/// Default number of rotation trials for a rows-apart search.
pub const DEFAULT_FAMILY_BUDGET: u64 = 1 << 22;

/// Sizes for which every n-set is known to map onto an H-graph with one
/// VH-shuffle.
pub fn in_guaranteed_range(n: usize) -> bool {
    (2..=34).contains(&n) || n == 37
}

/// Outcome of a search that can prove impossibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// The search space was exhausted.
    Impossible,
    /// The budget ran out first.
    Unknown,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found(_))
    }
}

/// An H-move after which every column holds exactly one position, i.e. the
/// row sections rotated pairwise apart.
pub fn rows_apart(s: &PositionSet, budget: u64) -> Result<SearchOutcome<ElementaryMove>> {
    let n = s.n();
    if n > MAX_MASK_N {
        return Err(Error::Unsupported(n));
    }
    let masks = s.row_masks()?;
    let rows: Vec<usize> = (0..n).filter(|&r| masks[r] != 0).collect();
    let family: Vec<u128> = rows.iter().map(|&r| masks[r]).collect();
    Ok(match separate_masks(n, &family, budget) {
        FamilyOutcome::Separated(rot) => {
            let mut mv = ElementaryMove::zero(Axis::H, n);
            for (&r, v) in rows.iter().zip(rot) {
                mv.offsets[r] = v;
            }
            SearchOutcome::Found(mv)
        }
        FamilyOutcome::Inseparable => SearchOutcome::Impossible,
        FamilyOutcome::Unknown => SearchOutcome::Unknown,
    })
}

/// Column-wise dual of [`rows_apart`]: a V-move giving one position per row.
pub fn cols_apart(s: &PositionSet, budget: u64) -> Result<SearchOutcome<ElementaryMove>> {
    Ok(match rows_apart(&s.transpose(), budget)? {
        SearchOutcome::Found(m) => SearchOutcome::Found(m.transpose()),
        SearchOutcome::Impossible => SearchOutcome::Impossible,
        SearchOutcome::Unknown => SearchOutcome::Unknown,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyOptions {
    pub family_budget: u64,
    pub v_budget: u64,
    /// Co-optimal V-moves tried after the first optimal one fails.
    pub coopt_retries: usize,
    pub heuristic: HeuristicOptions,
}

impl Default for KeyOptions {
    fn default() -> Self {
        Self {
            family_budget: DEFAULT_FAMILY_BUDGET,
            v_budget: super::voptimize::DEFAULT_V_BUDGET,
            coopt_retries: 256,
            heuristic: HeuristicOptions::default(),
        }
    }
}

/// How the V-part of a graph shuffle was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphMethod {
    /// No V-move needed.
    HOnly,
    /// The lexicographically least V-optimal move.
    Optimal,
    /// A later co-optimal V-move (index in enumeration order).
    CoOptimal(usize),
    /// A weakly optimal move from randomized hill climbing.
    Heuristic,
}

/// A VH-shuffle (or HV for the dual) mapping a set onto a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphShuffle {
    pub first: ElementaryMove,
    pub second: ElementaryMove,
    pub method: GraphMethod,
}

impl GraphShuffle {
    pub fn to_sequence(&self) -> MoveSequence {
        MoveSequence::from_moves(
            self.first.n(),
            vec![self.first.clone(), self.second.clone()],
        )
        .unwrap()
    }
}

/// A V-move then an H-move taking the n-set `s` onto an H-graph. Tries the
/// bare H-move first, then the optimal V-moves, then weakly optimal ones.
pub fn shuffle_to_hgraph(s: &PositionSet, opts: &KeyOptions) -> Result<Option<GraphShuffle>> {
    let n = s.n();
    if s.len() != n {
        return Err(Error::Precondition(format!(
            "set has {} positions, need n = {n}",
            s.len()
        )));
    }
    let zero = ElementaryMove::zero(Axis::V, n);
    if let SearchOutcome::Found(h) = rows_apart(s, opts.family_budget)? {
        return Ok(Some(GraphShuffle {
            first: zero,
            second: h,
            method: GraphMethod::HOnly,
        }));
    }
    let exhaustive = v_optimize(
        s,
        &VOptions {
            budget: opts.v_budget,
            heuristic: None,
            heuristic_only: false,
        },
    );
    match exhaustive {
        Ok(rep) => {
            if let SearchOutcome::Found(h) = rows_apart(&rep.moved, opts.family_budget)? {
                return Ok(Some(GraphShuffle {
                    first: rep.v_move,
                    second: h,
                    method: GraphMethod::Optimal,
                }));
            }
            let mut found = None;
            let mut idx = 0usize;
            let res = for_each_optimal_v_move(s, opts.v_budget, |mv| {
                idx += 1;
                if idx == 1 {
                    return ControlFlow::Continue(());
                }
                if idx > opts.coopt_retries + 1 {
                    return ControlFlow::Break(());
                }
                let moved = mv_apply(s, mv);
                if let Ok(SearchOutcome::Found(h)) = rows_apart(&moved, opts.family_budget) {
                    found = Some(GraphShuffle {
                        first: mv.clone(),
                        second: h,
                        method: GraphMethod::CoOptimal(idx - 1),
                    });
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            match res {
                Ok(_) | Err(Error::BudgetExceeded(_)) => {}
                Err(e) => return Err(e),
            }
            if found.is_some() {
                return Ok(found);
            }
        }
        Err(Error::BudgetExceeded(_)) => {}
        Err(e) => return Err(e),
    }
    let mut found = None;
    heuristic_v_move(s, &opts.heuristic, |mv| {
        let moved = mv_apply(s, mv);
        if let Ok(SearchOutcome::Found(h)) = rows_apart(&moved, opts.family_budget) {
            found = Some(GraphShuffle {
                first: mv.clone(),
                second: h,
                method: GraphMethod::Heuristic,
            });
            true
        } else {
            false
        }
    })?;
    Ok(found)
}

/// Dual of [`shuffle_to_hgraph`]: an H-move then a V-move onto a V-graph.
pub fn shuffle_to_vgraph(s: &PositionSet, opts: &KeyOptions) -> Result<Option<GraphShuffle>> {
    Ok(
        shuffle_to_hgraph(&s.transpose(), opts)?.map(|g| GraphShuffle {
            first: g.first.transpose(),
            second: g.second.transpose(),
            method: g.method,
        }),
    )
}

fn mv_apply(s: &PositionSet, mv: &ElementaryMove) -> PositionSet {
    PositionSet::new(s.n(), s.iter().map(|p| mv.apply(p))).expect("moves are bijective")
}

/// Four moves (HVHV for an H-graph target, VHVH for a V-graph target)
/// sending `a[i]` to `g[i]` for every `i`.
pub fn array_onto_graph(
    a: &PositionArray,
    g: &PositionArray,
    opts: &KeyOptions,
) -> Result<MoveSequence> {
    let n = a.n();
    if g.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: g.n(),
        });
    }
    if a.len() != n || g.len() != n {
        return Err(Error::Precondition(format!(
            "arrays must hold n = {n} positions"
        )));
    }
    let gs = g.to_set();
    if gs.is_h_graph() {
        onto_h_graph(a, g, opts)
    } else if gs.is_v_graph() {
        Ok(onto_h_graph(&a.transpose(), &g.transpose(), opts)?.transpose())
    } else {
        Err(Error::Precondition(
            "target is neither an H-graph nor a V-graph".into(),
        ))
    }
}

fn onto_h_graph(a: &PositionArray, g: &PositionArray, opts: &KeyOptions) -> Result<MoveSequence> {
    let n = a.n();
    if a == g {
        let moves = vec![
            ElementaryMove::zero(Axis::H, n),
            ElementaryMove::zero(Axis::V, n),
            ElementaryMove::zero(Axis::H, n),
            ElementaryMove::zero(Axis::V, n),
        ];
        return MoveSequence::from_moves(n, moves);
    }
    let hv = shuffle_to_vgraph(&a.to_set(), opts)?
        .ok_or_else(|| Error::NotFound(format!("no HV-shuffle onto a V-graph for this {n}-set")))?;
    let a1: Vec<_> = a
        .iter()
        .map(|p| hv.second.apply(hv.first.apply(p)))
        .collect();
    let mut h2 = ElementaryMove::zero(Axis::H, n);
    for (p, t) in a1.iter().zip(g.iter()) {
        h2.offsets[p.row] = (t.col + n - p.col) % n;
    }
    let mut v3 = ElementaryMove::zero(Axis::V, n);
    for (p, t) in a1.iter().zip(g.iter()) {
        let q = h2.apply(*p);
        v3.offsets[q.col] = (t.row + n - q.row) % n;
    }
    let seq = MoveSequence::from_moves(n, vec![hv.first, hv.second, h2, v3])?;
    debug_assert!(a.iter().zip(g.iter()).all(|(p, t)| seq.apply(p) == t));
    Ok(seq)
}

/// A V-move then an H-move sending `src[i]` (an H-graph) to `dst[i]`
/// (a V-graph).
pub fn graph_to_graph_shuffle(src: &PositionArray, dst: &PositionArray) -> Result<MoveSequence> {
    let n = src.n();
    if dst.n() != n || src.len() != n || dst.len() != n {
        return Err(Error::Precondition(
            "pairing must match n positions onto n positions".into(),
        ));
    }
    if !src.to_set().is_h_graph() {
        return Err(Error::Precondition("source is not an H-graph".into()));
    }
    if !dst.to_set().is_v_graph() {
        return Err(Error::Precondition("target is not a V-graph".into()));
    }
    let mut v = ElementaryMove::zero(Axis::V, n);
    let mut h = ElementaryMove::zero(Axis::H, n);
    for (p, t) in src.iter().zip(dst.iter()) {
        v.offsets[p.col] = (t.row + n - p.row) % n;
        h.offsets[t.row] = (t.col + n - p.col) % n;
    }
    MoveSequence::from_moves(n, vec![v, h])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::position::Position;
    use rand::seq::index::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn prop42_set() -> PositionSet {
        PositionSet::from_pairs(6, &[(0, 0), (1, 0), (1, 1), (2, 1), (0, 2), (2, 2)]).unwrap()
    }

    #[test]
    fn prop42_rows_cannot_be_rotated_apart() {
        assert_eq!(
            rows_apart(&prop42_set(), 1 << 20).unwrap(),
            SearchOutcome::Impossible
        );
        assert_eq!(
            cols_apart(&prop42_set(), 1 << 20).unwrap(),
            SearchOutcome::Impossible
        );
        let g = shuffle_to_hgraph(&prop42_set(), &KeyOptions::default())
            .unwrap()
            .unwrap();
        let moved = g.to_sequence().apply_set(&prop42_set()).unwrap();
        assert!(moved.is_h_graph());
        assert_ne!(g.method, GraphMethod::HOnly);
    }

    #[test]
    fn full_column_spreads() {
        let s = PositionSet::new(5, (0..5).map(|r| Position::new(2, r))).unwrap();
        let g = shuffle_to_hgraph(&s, &KeyOptions::default())
            .unwrap()
            .unwrap();
        assert_eq!(g.method, GraphMethod::HOnly);
        assert!(g.to_sequence().apply_set(&s).unwrap().is_h_graph());
    }

    #[test]
    fn swapped_pair_onto_bottom_row() {
        for n in 3..8 {
            let mut cells = vec![Position::new(1, 0), Position::new(0, 0)];
            cells.extend((2..n).map(|k| Position::new(k, 0)));
            let a = PositionArray::new(n, cells).unwrap();
            let g = PositionArray::bottom_row(n);
            let seq = array_onto_graph(&a, &g, &KeyOptions::default()).unwrap();
            assert_eq!(seq.half_shuffles(), 4);
            assert_eq!(seq.apply_array(&a).unwrap(), g);
        }
    }

    #[test]
    fn identical_arrays_give_zero_moves() {
        let g = PositionArray::bottom_row(4);
        let seq = array_onto_graph(&g, &g, &KeyOptions::default()).unwrap();
        assert_eq!(seq.half_shuffles(), 4);
        assert!(seq.moves().iter().all(ElementaryMove::is_identity));
    }

    #[test]
    fn random_arrays_onto_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 10;
        for t in 0..50 {
            let cells: Vec<Position> = sample(&mut rng, n * n, n)
                .iter()
                .map(|r| Position::from_rank(r, n))
                .collect();
            let a = PositionArray::new(n, cells).unwrap();
            let rows: Vec<usize> = (0..n)
                .map(|_| rand::Rng::gen_range(&mut rng, 0..n))
                .collect();
            let mut g = PositionArray::h_graph(n, &rows).unwrap();
            if t % 2 == 1 {
                g = g.transpose();
            }
            let seq = array_onto_graph(&a, &g, &KeyOptions::default()).unwrap();
            let first = seq.moves()[0].axis;
            assert_eq!(first, if t % 2 == 0 { Axis::H } else { Axis::V });
            assert_eq!(seq.apply_array(&a).unwrap(), g);
        }
    }

    #[test]
    fn graph_to_graph_examples() {
        let n = 5;
        let src = PositionArray::bottom_row(n);
        let dst = PositionArray::new(n, (0..n).map(|k| Position::new(0, k)).collect()).unwrap();
        let seq = graph_to_graph_shuffle(&src, &dst).unwrap();
        assert_eq!(seq.apply_array(&src).unwrap(), dst);
        let diag = PositionArray::new(n, (0..n).map(|k| Position::new(k, k)).collect()).unwrap();
        let seq = graph_to_graph_shuffle(&diag, &diag).unwrap();
        assert!(seq.moves().iter().all(ElementaryMove::is_identity));
        assert!(graph_to_graph_shuffle(&dst, &src).is_err());
    }
}
