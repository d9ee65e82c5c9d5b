//! Column-size partitions, the rows recursion and the rows value.

use std::collections::HashMap;
use std::fmt;

/// A multiset of positive integers, stored in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn sum(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn max(&self) -> Option<usize> {
        self.parts.first().copied()
    }

    /// `(part, multiplicity)` pairs, parts descending.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

/// Multiset notation, e.g. `{5_2, 2, 1_3}`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (p, c)) in self.multiplicities().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if c == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}_{c}")?;
            }
        }
        f.write_str("}")
    }
}

/// Calls `visit` with every partition of `total` into exactly `count` parts,
/// each at most `max_part`, parts in descending order.
pub fn for_each_partition(
    total: usize,
    count: usize,
    max_part: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    fn rec(
        rest: usize,
        count: usize,
        cap: usize,
        buf: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if count == 0 {
            if rest == 0 {
                visit(buf);
            }
            return;
        }
        if rest < count || rest > count * cap {
            return;
        }
        let hi = cap.min(rest - (count - 1));
        let lo = rest.div_ceil(count);
        for p in (lo..=hi).rev() {
            buf.push(p);
            rec(rest - p, count - 1, p, buf, visit);
            buf.pop();
        }
    }
    let mut buf = Vec::with_capacity(count);
    rec(total, count, max_part, &mut buf, visit);
}

/// One step of the recursion: rows gained by a column of size `s` when `r`
/// rows are already taken.
#[inline]
pub fn rows_step(r: usize, s: usize, n: usize) -> usize {
    ((n - r) * s).div_ceil(n)
}

/// `r_0 = 0`, `r_{i+1} = r_i + ⌈(n - r_i) s_i / n⌉`; returns `r_c`.
pub fn rows_recursion(sizes: &[usize], n: usize) -> usize {
    sizes.iter().fold(0, |r, &s| r + rows_step(r, s, n))
}

/// Maximum of [`rows_recursion`] over all orderings of the multiset.
pub fn rval(p: &Partition, n: usize) -> usize {
    let kinds = p.multiplicities();
    let sizes: Vec<usize> = kinds.iter().map(|k| k.0).collect();
    let counts: Vec<usize> = kinds.iter().map(|k| k.1).collect();
    let mut memo = HashMap::new();
    rval_rec(&sizes, &mut counts.clone(), 0, n, &mut memo)
}

fn rval_rec(
    sizes: &[usize],
    counts: &mut Vec<usize>,
    r: usize,
    n: usize,
    memo: &mut HashMap<(Vec<usize>, usize), usize>,
) -> usize {
    if counts.iter().all(|&c| c == 0) {
        return r;
    }
    if let Some(&v) = memo.get(&(counts.clone(), r)) {
        return v;
    }
    let mut best = 0;
    for i in 0..sizes.len() {
        if counts[i] == 0 {
            continue;
        }
        counts[i] -= 1;
        let v = rval_rec(sizes, counts, r + rows_step(r, sizes[i], n), n, memo);
        counts[i] += 1;
        best = best.max(v);
        if best == n {
            break;
        }
    }
    memo.insert((counts.clone(), r), best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recursion_is_order_sensitive() {
        assert_eq!(rows_recursion(&[4, 3, 2, 2], 11), 8);
        assert_eq!(rows_recursion(&[4, 2, 3, 2], 11), 9);
        assert_eq!(rows_recursion(&[9], 9), 9);
    }

    #[test]
    fn rval_examples() {
        assert_eq!(rval(&Partition::new(vec![4, 3, 2, 2]), 11), 9);
        assert_eq!(
            rval(&Partition::new(vec![2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1]), 16),
            15
        );
        assert_eq!(rval(&Partition::new(vec![10, 5, 5]), 20), 15);
        assert_eq!(rval(&Partition::new(vec![7]), 7), 7);
    }

    #[test]
    fn partitions_enumerated() {
        let mut seen = Vec::new();
        for_each_partition(7, 3, 4, &mut |p| seen.push(p.to_vec()));
        assert_eq!(seen, vec![vec![4, 2, 1], vec![3, 3, 1], vec![3, 2, 2]]);
        let mut count = 0;
        for_each_partition(10, 4, 10, &mut |_| count += 1);
        assert_eq!(count, 9);
    }

    #[test]
    fn multiset_notation() {
        assert_eq!(
            Partition::new(vec![1, 5, 2, 5, 1, 1]).to_string(),
            "{5_2, 2, 1_3}"
        );
    }
}
