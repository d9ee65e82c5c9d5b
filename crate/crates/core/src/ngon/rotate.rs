//! Backtracking search for rotations that make a family of subsets of Z/nZ
//! pairwise disjoint, on bitmask representations.

use crate::position::rotate_mask;

/// Result of a family search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyOutcome {
    /// Rotation per input set (the first is always 0).
    Separated(Vec<usize>),
    /// The search space was exhausted: no separating rotations exist.
    Inseparable,
    /// The node budget ran out before the search finished.
    Unknown,
}

impl FamilyOutcome {
    pub fn rotations(&self) -> Option<&[usize]> {
        match self {
            FamilyOutcome::Separated(r) => Some(r),
            _ => None,
        }
    }
}

/// Separates the given masks in Z/nZ. The first mask is pinned at rotation
/// 0; the rest are placed in order of decreasing size, rotations tried in
/// increasing order. `budget` bounds the number of rotation trials.
pub fn separate_masks(n: usize, masks: &[u128], budget: u64) -> FamilyOutcome {
    let b = masks.len();
    if b == 0 {
        return FamilyOutcome::Separated(Vec::new());
    }
    let total: u32 = masks.iter().map(|m| m.count_ones()).sum();
    if total as usize > n {
        return FamilyOutcome::Inseparable;
    }
    let mut order: Vec<usize> = (1..b).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(masks[i].count_ones()), i));
    let mut search = Search {
        n,
        masks,
        order: &order,
        rot: vec![0; b],
        budget,
        used: 0,
    };
    match search.place(0, masks[0]) {
        Some(true) => FamilyOutcome::Separated(search.rot),
        Some(false) => FamilyOutcome::Inseparable,
        None => FamilyOutcome::Unknown,
    }
}

struct Search<'a> {
    n: usize,
    masks: &'a [u128],
    order: &'a [usize],
    rot: Vec<usize>,
    budget: u64,
    used: u64,
}

impl Search<'_> {
    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn place(&mut self, depth: usize, occ: u128) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let i = self.order[depth];
        let m = self.masks[i];
        if m == 0 {
            self.rot[i] = 0;
            return self.place(depth + 1, occ);
        }
        if m.count_ones() == 1 {
            // sets are ordered by size, so only points remain: any free slot works
            let p = m.trailing_zeros() as usize;
            let free = !occ & crate::position::full_mask(self.n);
            if free == 0 {
                return Some(false);
            }
            self.used += 1;
            if self.used > self.budget {
                return None;
            }
            let target = free.trailing_zeros() as usize;
            self.rot[i] = (target + self.n - p) % self.n;
            return self.place(depth + 1, occ | (1u128 << target));
        }
        for v in 0..self.n {
            self.used += 1;
            if self.used > self.budget {
                return None;
            }
            let r = rotate_mask(m, v, self.n);
            if r & occ != 0 {
                continue;
            }
            self.rot[i] = v;
            match self.place(depth + 1, occ | r) {
                Some(false) => continue,
                other => return other,
            }
        }
        Some(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(xs: &[usize]) -> u128 {
        xs.iter().fold(0, |m, &x| m | (1u128 << x))
    }

    #[test]
    fn separates_and_verifies() {
        let masks = [mask(&[0, 1]), mask(&[0, 2]), mask(&[0, 1]), mask(&[3])];
        let out = separate_masks(8, &masks, 1 << 20);
        let rot = out.rotations().unwrap();
        assert_eq!(rot[0], 0);
        let mut occ = 0u128;
        for (m, &v) in masks.iter().zip(rot) {
            let r = rotate_mask(*m, v, 8);
            assert_eq!(r & occ, 0);
            occ |= r;
        }
    }

    #[test]
    fn too_many_points() {
        assert_eq!(
            separate_masks(3, &[mask(&[0, 1]), mask(&[0, 1])], 100),
            FamilyOutcome::Inseparable
        );
    }

    #[test]
    fn exhausted_search_is_inseparable() {
        // {0,1} and {0,2} in Z/4: every rotation of the second meets the first
        assert_eq!(
            separate_masks(4, &[mask(&[0, 1]), mask(&[0, 2])], 100),
            FamilyOutcome::Inseparable
        );
    }

    #[test]
    fn budget_gives_unknown() {
        let masks = [
            mask(&[0, 1, 2]),
            mask(&[0, 1, 2]),
            mask(&[0, 1, 2]),
            mask(&[0, 3, 6]),
        ];
        assert_eq!(separate_masks(12, &masks, 2), FamilyOutcome::Unknown);
    }
}
