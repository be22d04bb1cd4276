//! The kernel family of a base-k set.
//!
//! For the characteristic function `f` of a set `X` there are finitely many
//! maps `f_1, ..., f_s` such that every subsequence `n -> f(k^c n + j)` with
//! `0 <= j < k^c` equals some `f_i`. Working on the zero-closed automaton,
//! appending the fixed suffix `pad_c(j)` only moves the final-state set, so
//! the family is the closure of the final set under digit preimages.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::automaton::{Automaton, StateId};
use crate::basek::{canonical_expansion, BaseKSet};

/// The closure of a set's residual maps under `n -> f(k n + j)`.
#[derive(Debug, Clone)]
pub struct KernelFamily {
    base: Automaton,
    members: Vec<BTreeSet<StateId>>,
    ids: BTreeMap<BTreeSet<StateId>, usize>,
    /// Least suffix depth at which every member is realized: each member is
    /// `n -> f(k^r n + j)` for some `r <= depth_bound`.
    pub depth_bound: u32,
}

impl KernelFamily {
    /// Family size `s`.
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// The member realizing `n -> f(k^c n + j)`. Requires `j < k^c`.
    pub fn index(&self, c: u32, j: u64) -> usize {
        let k = self.base.radix();
        assert!(
            (j as u128) < (k as u128).pow(c),
            "kernel index requires j < k^c"
        );
        let mut word = canonical_expansion(j, k);
        while (word.len() as u32) < c {
            word.insert(0, 0);
        }
        let set = self.finals_for_suffix(&word);
        *self.ids.get(&set).expect("kernel family is closed under suffixes")
    }

    /// The member as a base-k set over the shared zero-closed automaton.
    pub fn member_set(&self, idx: usize) -> BaseKSet {
        let a = self
            .base
            .with_initial_finals(self.base.initial().iter().copied(), self.members[idx].iter().copied())
            .expect("member finals are valid states");
        BaseKSet::new(a).expect("kernel base automaton is single track")
    }

    /// Final-state set after appending `suffix`, folded right to left.
    fn finals_for_suffix(&self, suffix: &[u32]) -> BTreeSet<StateId> {
        let mut finals: BTreeSet<StateId> = self.base.finals().iter().copied().collect();
        for &d in suffix.iter().rev() {
            finals = prepend_digit(&self.base, d, &finals);
        }
        finals
    }
}

fn prepend_digit(a: &Automaton, d: u32, finals: &BTreeSet<StateId>) -> BTreeSet<StateId> {
    (0..a.state_count())
        .filter(|&q| a.successors(q, d).any(|t| finals.contains(&t)))
        .collect()
}

/// Compute the kernel family of a base-k set.
pub fn k_kernel(set: &BaseKSet) -> KernelFamily {
    let base = set.zero_closed();
    let start: BTreeSet<StateId> = base.finals().iter().copied().collect();
    let mut ids = BTreeMap::new();
    let mut members = vec![start.clone()];
    ids.insert(start.clone(), 0usize);
    let mut queue = VecDeque::from([(start, 0u32)]);
    let mut depth_bound = 0;
    while let Some((finals, depth)) = queue.pop_front() {
        for d in 0..base.radix() {
            let next = prepend_digit(&base, d, &finals);
            if !ids.contains_key(&next) {
                ids.insert(next.clone(), members.len());
                members.push(next.clone());
                depth_bound = depth + 1;
                queue.push_back((next, depth + 1));
            }
        }
    }
    KernelFamily { base, members, ids, depth_bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn multiples_of_three_have_three_kernel_maps() {
        let x = corpus::multiples_of(3, 2);
        let fam = k_kernel(&x);
        assert!(fam.size() <= 3, "family size {}", fam.size());
    }

    #[test]
    fn empty_set_has_singleton_kernel() {
        let a = crate::Automaton::builder(2, 1).unwrap().states(1).initial([0]).build().unwrap();
        let x = BaseKSet::new(a).unwrap();
        assert_eq!(k_kernel(&x).size(), 1);
    }

    #[test]
    fn kernel_members_realize_subsequences() {
        for set in [corpus::multiples_of(3, 2), corpus::powers_of_base(2), corpus::evil_numbers()] {
            let fam = k_kernel(&set);
            let k = set.radix() as u64;
            for c in 0..=3u32 {
                for j in 0..k.pow(c) {
                    let member = fam.member_set(fam.index(c, j));
                    for n in 0..200u64 {
                        assert_eq!(
                            set.member(k.pow(c) * n + j),
                            member.member(n),
                            "c={c} j={j} n={n}"
                        );
                    }
                }
            }
        }
    }
}
