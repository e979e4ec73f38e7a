//! Multi-index bookkeeping for exterior and symmetric powers.
//!
//! Exterior labels are strictly increasing tuples, symmetric labels are
//! non-decreasing tuples. Both are enumerated lexicographically, and the
//! position of a label in that enumeration is its basis index.

use std::collections::HashMap;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Strictly increasing `k`-tuples drawn from `0..n`, lexicographic.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Non-decreasing `k`-tuples drawn from `0..n`, lexicographic.
pub fn nondecreasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Reverse lookup from label to basis position.
#[derive(Debug, Clone)]
pub struct LabelIndex {
    labels: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl LabelIndex {
    pub fn new(labels: Vec<Vec<usize>>) -> Self {
        let lookup = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Self { labels, lookup }
    }

    pub fn position(&self, label: &[usize]) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// `e_i ∧ e_I` for sorted `I`: `None` when `i ∈ I`, else the sorted set and sign.
pub fn wedge_insert(i: usize, set: &[usize]) -> Option<(Vec<usize>, f64)> {
    match set.binary_search(&i) {
        Ok(_) => None,
        Err(pos) => {
            let mut out = Vec::with_capacity(set.len() + 1);
            out.extend_from_slice(&set[..pos]);
            out.push(i);
            out.extend_from_slice(&set[pos..]);
            Some((out, parity(pos)))
        }
    }
}

/// Interior product `ι_{e_i} e_I`: `None` when `i ∉ I`, else the remaining set and sign.
pub fn interior_remove(i: usize, set: &[usize]) -> Option<(Vec<usize>, f64)> {
    match set.binary_search(&i) {
        Err(_) => None,
        Ok(pos) => {
            let mut out = set.to_vec();
            out.remove(pos);
            Some((out, parity(pos)))
        }
    }
}

/// Number of distinct words with the letter multiset of a non-decreasing tuple.
pub fn multinomial(tuple: &[usize]) -> f64 {
    let mut fact = 1.0f64;
    let mut denom = 1.0f64;
    let mut run = 0usize;
    for (pos, &x) in tuple.iter().enumerate() {
        fact *= (pos + 1) as f64;
        if pos > 0 && tuple[pos - 1] == x {
            run += 1;
        } else {
            run = 1;
        }
        denom *= run as f64;
    }
    fact / denom
}

/// Insert `j` into a non-decreasing tuple.
pub fn multiset_insert(j: usize, tuple: &[usize]) -> Vec<usize> {
    let pos = tuple.partition_point(|&x| x <= j);
    let mut out = Vec::with_capacity(tuple.len() + 1);
    out.extend_from_slice(&tuple[..pos]);
    out.push(j);
    out.extend_from_slice(&tuple[pos..]);
    out
}

/// Remove one copy of `j` from a non-decreasing tuple.
pub fn multiset_remove(j: usize, tuple: &[usize]) -> Option<Vec<usize>> {
    let pos = tuple.iter().position(|&x| x == j)?;
    let mut out = tuple.to_vec();
    out.remove(pos);
    Some(out)
}

/// Sign of the shuffle `(I, I^c)` relative to `0..n`.
pub fn complement_sign(set: &[usize], n: usize) -> (Vec<usize>, f64) {
    let comp: Vec<usize> = (0..n).filter(|i| set.binary_search(i).is_err()).collect();
    let mut inversions = 0usize;
    for &a in set {
        inversions += comp.iter().filter(|&&b| b < a).count();
    }
    (comp, parity(inversions))
}

fn parity(count: usize) -> f64 {
    if count.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(increasing_tuples(4, 2).len(), 6);
        assert_eq!(nondecreasing_tuples(3, 2).len(), 6);
        assert_eq!(increasing_tuples(5, 0), vec![Vec::<usize>::new()]);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 4), 0);
    }

    #[test]
    fn lexicographic_order() {
        let l = increasing_tuples(4, 2);
        assert_eq!(l[0], vec![0, 1]);
        assert_eq!(l[5], vec![2, 3]);
        let mut sorted = l.clone();
        sorted.sort();
        assert_eq!(l, sorted);
        let s = nondecreasing_tuples(2, 2);
        assert_eq!(s, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn wedge_and_interior_signs_agree() {
        // ι_{e_i} is adjoint to e_i ∧ ·, so the two signs match.
        for set in increasing_tuples(5, 2) {
            for i in 0..5 {
                if let Some((big, s)) = wedge_insert(i, &set) {
                    let (back, t) = interior_remove(i, &big).unwrap();
                    assert_eq!(back, set);
                    assert_eq!(s, t);
                }
            }
        }
        assert_eq!(wedge_insert(1, &[0, 2]), Some((vec![0, 1, 2], -1.0)));
        assert_eq!(wedge_insert(1, &[1, 2]), None);
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[]), 1.0);
        assert_eq!(multinomial(&[0, 0, 1]), 3.0);
        assert_eq!(multinomial(&[0, 1, 2]), 6.0);
        assert_eq!(multinomial(&[2, 2, 2]), 1.0);
        assert_eq!(multiset_insert(1, &[0, 1, 2]), vec![0, 1, 1, 2]);
        assert_eq!(multiset_remove(3, &[0, 1]), None);
    }

    #[test]
    fn complement_shuffle() {
        assert_eq!(complement_sign(&[0, 1], 4), (vec![2, 3], 1.0));
        assert_eq!(complement_sign(&[1], 3), (vec![0, 2], -1.0));
    }
}
