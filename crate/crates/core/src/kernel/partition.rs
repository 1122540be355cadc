//! Ordered partitions of a set into labelled blocks of prescribed sizes.

use super::scalar::Field;
use super::varset::VarSet;
use crate::error::{Error, Result};

/// All ways to split positions `0..n` into labelled blocks of the given sizes.
///
/// Blocks are listed in increasing position order. The enumeration is
/// lexicographic in the choice for block 0, then block 1, and so on.
pub fn index_partitions(n: usize, sizes: &[usize]) -> Result<Vec<Vec<Vec<usize>>>> {
    let total: usize = sizes.iter().sum();
    if total != n {
        return Err(Error::SizeMismatch(format!("block sizes {sizes:?} do not sum to {n}")));
    }
    let mut out = Vec::new();
    let remaining: Vec<usize> = (0..n).collect();
    let mut acc = Vec::with_capacity(sizes.len());
    fill(&remaining, sizes, &mut acc, &mut out);
    Ok(out)
}

fn fill(remaining: &[usize], sizes: &[usize], acc: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    let Some((&k, rest_sizes)) = sizes.split_first() else {
        out.push(acc.clone());
        return;
    };
    for chosen in combinations(remaining.len(), k) {
        let block: Vec<usize> = chosen.iter().map(|&c| remaining[c]).collect();
        let rest: Vec<usize> = remaining
            .iter()
            .enumerate()
            .filter(|(pos, _)| !chosen.contains(pos))
            .map(|(_, &p)| p)
            .collect();
        acc.push(block);
        fill(&rest, rest_sizes, acc, out);
        acc.pop();
    }
}

/// k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // rightmost position that can still advance
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Iterator over the partitions of a [`VarSet`] into blocks of fixed sizes.
#[derive(Debug)]
pub struct Partitions<'a, F> {
    src: &'a VarSet<F>,
    plans: std::vec::IntoIter<Vec<Vec<usize>>>,
}

impl<'a, F: Field> Iterator for Partitions<'a, F> {
    type Item = Vec<VarSet<F>>;

    fn next(&mut self) -> Option<Self::Item> {
        let plan = self.plans.next()?;
        Some(plan.iter().map(|block| self.src.pick(block)).collect())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.plans.size_hint()
    }
}

impl<'a, F: Field> ExactSizeIterator for Partitions<'a, F> {}

/// Partitions of `src` into labelled blocks with the given cardinalities.
///
/// Yields `multinomial(#src; sizes)` items; within each block the original
/// indices strictly increase. When the sizes cannot be met (a negative
/// remainder in the caller's arithmetic) use [`feasible_sizes`] first.
pub fn partitions<'a, F: Field>(src: &'a VarSet<F>, sizes: &[usize]) -> Result<Partitions<'a, F>> {
    let plans = index_partitions(src.len(), sizes)?;
    Ok(Partitions { src, plans: plans.into_iter() })
}

/// Block sizes `(fixed..., len - sum(fixed))`, or `None` if the fixed blocks
/// do not fit. Lets infeasible sums be treated as empty.
pub fn feasible_sizes(len: usize, fixed: &[usize]) -> Option<Vec<usize>> {
    let used: usize = fixed.iter().sum();
    let rest = len.checked_sub(used)?;
    let mut v = fixed.to_vec();
    v.push(rest);
    Some(v)
}

pub fn multinomial(sizes: &[usize]) -> u128 {
    let mut acc: u128 = 1;
    let mut n = 0u128;
    for &k in sizes {
        for j in 1..=k as u128 {
            n += 1;
            acc = acc * n / j;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::Qi;
    use std::collections::HashSet;

    #[test]
    fn three_into_one_two() {
        let w = VarSet::new(vec![Qi::from_i64(1), Qi::from_i64(2), Qi::from_i64(3)]);
        let parts: Vec<_> = partitions(&w, &[1, 2]).unwrap().collect();
        let idx: Vec<(Vec<usize>, Vec<usize>)> =
            parts.iter().map(|p| (p[0].indices().to_vec(), p[1].indices().to_vec())).collect();
        assert_eq!(
            idx,
            vec![(vec![0], vec![1, 2]), (vec![1], vec![0, 2]), (vec![2], vec![0, 1])]
        );
    }

    #[test]
    fn empty_source_has_one_partition() {
        let w = VarSet::<Qi>::empty();
        assert_eq!(partitions(&w, &[]).unwrap().count(), 1);
        assert_eq!(partitions(&w, &[0, 0]).unwrap().count(), 1);
    }

    #[test]
    fn four_into_two_two() {
        assert_eq!(index_partitions(4, &[2, 2]).unwrap().len(), 6);
    }

    #[test]
    fn size_mismatch() {
        assert!(matches!(index_partitions(3, &[1, 1]), Err(Error::SizeMismatch(_))));
        assert_eq!(feasible_sizes(2, &[1, 2]), None);
        assert_eq!(feasible_sizes(4, &[1, 2]), Some(vec![1, 2, 1]));
    }

    #[test]
    fn counts_match_multinomials_without_duplicates() {
        for sizes in [vec![2, 1, 2], vec![0, 3, 1], vec![1, 1, 1, 1], vec![5]] {
            let n = sizes.iter().sum();
            let all = index_partitions(n, &sizes).unwrap();
            assert_eq!(all.len() as u128, multinomial(&sizes));
            let unique: HashSet<_> = all.iter().cloned().collect();
            assert_eq!(unique.len(), all.len());
            for p in &all {
                for block in p {
                    assert!(block.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }
}
