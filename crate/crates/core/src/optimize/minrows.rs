//! Lower bound on the number of rows of a V-optimal n-set, with the list of
//! critical column partitions.

use super::partition::{for_each_partition, rval, Partition};

/// `max(⌈s f / (n - s)⌉, s - f)`: least number of row-unique positions in a
/// column of size `s < n` of a weakly V-optimal set with `f` free rows.
pub fn rowunique(n: usize, s: usize, f: usize) -> usize {
    assert!(s < n, "column size must be below n");
    (s * f).div_ceil(n - s).max(s.saturating_sub(f))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinrowsResult {
    pub n: usize,
    /// Starting value `⌈n/2⌉ + 1`.
    pub start: usize,
    /// The bound `r(n)`.
    pub rows: usize,
    /// Critical column partitions at `rows`, in scan order.
    pub critical: Vec<Partition>,
}

/// Critical partitions for a candidate row count `r` (empty when `r` is not
/// attainable by the pruning rules).
pub fn critical_partitions(n: usize, r: usize) -> Vec<Partition> {
    let mut crit = Vec::new();
    if r >= n {
        return crit;
    }
    let f = n - r;
    for m in (2..r).rev() {
        let c_lo = (n - m).div_ceil(m);
        for c in c_lo..=(r - m) {
            for_each_partition(n - m, c, m, &mut |k| {
                let ru: usize = k.iter().map(|&s| rowunique(n, s, f)).sum();
                if ru > r - m {
                    return;
                }
                // singleton parts skip the recursion and count one row each
                let mut body: Vec<usize> = Vec::with_capacity(c + 1);
                body.push(m);
                body.extend(k.iter().copied().filter(|&s| s > 1));
                let cu = c + 1 - body.len();
                let body = Partition::new(body);
                if rval(&body, n) + cu <= r {
                    let mut all = body.parts().to_vec();
                    all.extend(std::iter::repeat_n(1, cu));
                    crit.push(Partition::new(all));
                }
            });
        }
    }
    crit
}

/// Scans `r = ⌈n/2⌉ + 1, ...` until a critical partition survives. Returns
/// `n` (with no partitions) once `r` reaches `n`.
pub fn minrows(n: usize) -> MinrowsResult {
    assert!(n >= 2, "minrows needs n >= 2");
    let start = n.div_ceil(2) + 1;
    let mut r = start;
    loop {
        if r >= n {
            return MinrowsResult {
                n,
                start,
                rows: n,
                critical: Vec::new(),
            };
        }
        let critical = critical_partitions(n, r);
        if !critical.is_empty() {
            return MinrowsResult {
                n,
                start,
                rows: r,
                critical,
            };
        }
        r += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rowunique_values() {
        assert_eq!(rowunique(20, 5, 6), 2);
        assert_eq!(rowunique(10, 5, 1), 4);
    }

    #[test]
    fn small_table_values() {
        assert_eq!(minrows(8).rows, 6);
        assert_eq!(minrows(12).rows, 9);
        assert_eq!(minrows(5).rows, 4);
        // every partition of 6 (resp. 7) has rows value >= 5 (resp. 6)
        assert_eq!(minrows(6).rows, 5);
        assert_eq!(minrows(7).rows, 6);
        assert_eq!(minrows(2).rows, 2);
        assert_eq!(minrows(3).rows, 3);
    }

    #[test]
    fn critical_at_twenty() {
        let res = minrows(20);
        assert_eq!(res.rows, 14);
        assert_eq!(res.critical, vec![Partition::new(vec![5, 5, 5, 5])]);
    }
}
