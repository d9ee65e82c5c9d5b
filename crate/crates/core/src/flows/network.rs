//! Unit-capacity flow network `s -> U-parts -> elements -> W-parts -> t`
//! and the common-transversal search built on it.

use crate::error::{Error, Result};
use std::collections::{HashMap, VecDeque};

/// A directed graph with unit (or larger integral) capacities, solved by
/// breadth-first augmenting paths. Arcs are scanned in insertion order, so
/// results are deterministic.
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
}

impl FlowNetwork {
    pub fn new(vertices: usize) -> Self {
        Self {
            head: vec![Vec::new(); vertices],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    pub fn vertices(&self) -> usize {
        self.head.len()
    }

    /// Adds an arc and its residual twin; returns the arc id.
    pub fn add_arc(&mut self, from: usize, to: usize, cap: u32) -> usize {
        let id = self.to.len();
        self.to.push(to);
        self.cap.push(cap);
        self.head[from].push(id);
        self.to.push(from);
        self.cap.push(0);
        self.head[to].push(id + 1);
        id
    }

    /// Flow currently carried by arc `id`.
    pub fn flow(&self, id: usize) -> u32 {
        self.cap[id + 1]
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> u32 {
        let mut total = 0;
        let mut pred = vec![usize::MAX; self.vertices()];
        loop {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            let mut queue = VecDeque::from([s]);
            let mut reached = false;
            while let Some(v) = queue.pop_front() {
                for &e in &self.head[v] {
                    let w = self.to[e];
                    if self.cap[e] > 0 && w != s && pred[w] == usize::MAX {
                        pred[w] = e;
                        if w == t {
                            reached = true;
                            break;
                        }
                        queue.push_back(w);
                    }
                }
                if reached {
                    break;
                }
            }
            if !reached {
                return total;
            }
            let mut push = u32::MAX;
            let mut v = t;
            while v != s {
                let e = pred[v];
                push = push.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = pred[v];
                self.cap[e] -= push;
                self.cap[e ^ 1] += push;
                v = self.to[e ^ 1];
            }
            total += push;
        }
    }
}

/// Elements (arbitrary ids) meeting every part of both partitions exactly
/// once and avoiding `avoid`. The ground set must have `n k - l` elements,
/// both partitions `n` parts of size at most `k`, `0 <= l < k` and
/// `#avoid <= k - l - 1`. Output is ordered by the `U`-part hit.
pub fn common_transversal(
    u_parts: &[Vec<usize>],
    w_parts: &[Vec<usize>],
    avoid: &[usize],
    k: usize,
    l: usize,
) -> Result<Vec<usize>> {
    let n = u_parts.len();
    let pre = |msg: String| Err(Error::Precondition(msg));
    if w_parts.len() != n {
        return pre(format!("partitions have {} and {} parts", n, w_parts.len()));
    }
    if l >= k {
        return pre(format!("need l < k, got l = {l}, k = {k}"));
    }
    if avoid.len() + l + 1 > k {
        return pre(format!(
            "{} avoided elements exceed k - l - 1 = {}",
            avoid.len(),
            k - l - 1
        ));
    }
    let mut index: HashMap<usize, usize> = HashMap::new();
    let mut elems: Vec<usize> = Vec::new();
    let mut u_of: Vec<usize> = Vec::new();
    for (i, part) in u_parts.iter().enumerate() {
        if part.len() > k {
            return pre(format!("U-part {i} has {} > k = {k} elements", part.len()));
        }
        for &e in part {
            if index.insert(e, elems.len()).is_some() {
                return pre(format!("element {e} repeated in U"));
            }
            elems.push(e);
            u_of.push(i);
        }
    }
    if elems.len() + l != n * k {
        return pre(format!(
            "ground set has {} elements, expected n k - l = {}",
            elems.len(),
            n * k - l
        ));
    }
    let mut w_of = vec![usize::MAX; elems.len()];
    for (j, part) in w_parts.iter().enumerate() {
        if part.len() > k {
            return pre(format!("W-part {j} has {} > k = {k} elements", part.len()));
        }
        for &e in part {
            let Some(&x) = index.get(&e) else {
                return pre(format!("element {e} of W is not in U"));
            };
            if w_of[x] != usize::MAX {
                return pre(format!("element {e} repeated in W"));
            }
            w_of[x] = j;
        }
    }
    if w_of.contains(&usize::MAX) {
        return pre("W does not cover the ground set".into());
    }
    let mut deleted = vec![false; elems.len()];
    for &a in avoid {
        let Some(&x) = index.get(&a) else {
            return pre(format!("avoided element {a} not in the ground set"));
        };
        deleted[x] = true;
    }
    // reduced instance: n k - l' elements with l' = l + #avoid < k
    let l2 = l + deleted.iter().filter(|&&d| d).count();
    debug_assert!(l2 < k);

    let m = elems.len();
    let s = 0;
    let t = 1;
    let u0 = 2;
    let e0 = u0 + n;
    let w0 = e0 + m;
    let mut net = FlowNetwork::new(w0 + n);
    for i in 0..n {
        net.add_arc(s, u0 + i, 1);
    }
    let mut mid = vec![usize::MAX; m];
    for x in 0..m {
        if !deleted[x] {
            net.add_arc(u0 + u_of[x], e0 + x, 1);
            mid[x] = net.add_arc(e0 + x, w0 + w_of[x], 1);
        }
    }
    for j in 0..n {
        net.add_arc(w0 + j, t, 1);
    }
    let value = net.max_flow(s, t) as usize;
    if value != n {
        return Err(Error::Internal(format!("flow value {value} below n = {n}")));
    }
    let mut out = vec![usize::MAX; n];
    for x in 0..m {
        if mid[x] != usize::MAX && net.flow(mid[x]) == 1 {
            out[u_of[x]] = elems[x];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_partitions() {
        let parts = vec![vec![0, 1], vec![2, 3], vec![4, 5]];
        let t = common_transversal(&parts, &parts, &[], 2, 0).unwrap();
        assert_eq!(t.len(), 3);
        for (i, e) in t.iter().enumerate() {
            assert!(parts[i].contains(e));
        }
    }

    #[test]
    fn avoidance() {
        let u = vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]];
        let w = vec![vec![0, 3, 6], vec![1, 4, 7], vec![2, 5, 8]];
        let t = common_transversal(&u, &w, &[0, 4], 3, 0).unwrap();
        assert!(!t.contains(&0) && !t.contains(&4));
        let mut ws: Vec<usize> = t.iter().map(|e| e % 3).collect();
        ws.sort();
        assert_eq!(ws, vec![0, 1, 2]);
        assert!(common_transversal(&u, &w, &[0, 4, 8], 3, 0).is_err());
    }

    #[test]
    fn deficient_ground_set() {
        // n = 2, k = 3, l = 2: four elements
        let u = vec![vec![10, 11], vec![12, 13]];
        let w = vec![vec![10, 12, 13], vec![11]];
        let t = common_transversal(&u, &w, &[], 3, 2).unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.contains(&11));
    }

    #[test]
    fn precondition_errors() {
        let u = vec![vec![0, 1], vec![2, 3]];
        assert!(common_transversal(&u, &u, &[], 2, 2).is_err());
        assert!(common_transversal(&u, &u[..1], &[], 2, 0).is_err());
        assert!(common_transversal(&u, &u, &[], 3, 0).is_err());
        assert!(common_transversal(&u, &[vec![0, 1], vec![2, 9]], &[], 2, 0).is_err());
    }
}
