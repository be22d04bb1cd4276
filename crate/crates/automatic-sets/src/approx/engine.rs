//! The layered condition engine.
//!
//! The shift condition at `(n, i, r)` quantifies over all words `v` with
//! `|v| = j <= r + i` and compares set membership of a shifted value
//! against cycle-language membership of `v`. Words are never enumerated:
//!
//! - both sides are tracked as a pair (set-side state subset of the
//!   zero-closed automaton, cycle-side state), and a pair disagrees at
//!   depth `d` exactly when some length-`d` word leads it to a pair whose
//!   acceptance flags differ. `bad[pair]` holds one bit per depth and is
//!   a fixed-point computation done once per engine;
//! - for the additive side (`j <= r`, word shorter than the shift), the
//!   shifted value has canonical expansion `canon(n) a^s` with
//!   `s = r - j`, so its state subset steps along the distinguished digit;
//! - for the subtractive side (`j > r`, word `v = v0 v1` with
//!   `|v1| = r`), the prefix values `n - [a^t] + [v0]` with `t = j - r`
//!   form a consecutive integer range, and state subsets of consecutive
//!   values come from a table with the recurrence
//!   `S(w) = step(S(w / k), w mod k)`.
//!
//! Failure masks are `u128` bitmaps over shifts, so an engine covers
//! shift bounds up to 127; the stabilization bound of every desk-scale
//! context fits comfortably.

use std::collections::BTreeMap;

use crate::automaton::StateId;

use super::{ApproxError, ApproxTrace, CycleContext, Rejection, Side};

/// Subset id in the interned powerset of the zero-closed automaton.
type SubsetId = u32;

const VALUE_TABLE_CAP: u64 = 1 << 22;

pub struct Evaluator<'c> {
    ctx: &'c CycleContext,
    k: u64,
    letter: u32,
    max_shift: u32,
    // interned subsets of the zero-closed automaton, closed under steps
    subset_step: Vec<Vec<SubsetId>>,
    init_subset: SubsetId,
    empty_subset: SubsetId,
    // cycle side: partial DFA with an explicit dead state
    l_step: Vec<Vec<usize>>,
    l_count: usize,
    // disagreement masks per pair node, bit d = some length-d word ends in
    // a pair with differing acceptance
    bad: Vec<u128>,
    // S(w) for consecutive values
    value_table: Vec<SubsetId>,
}

impl<'c> Evaluator<'c> {
    pub(super) fn new(ctx: &'c CycleContext, max_shift: u32) -> Result<Self, ApproxError> {
        if max_shift > 127 {
            return Err(ApproxError::ShiftBoundTooLarge(max_shift));
        }
        let star = ctx.set().zero_closed();
        let radix = star.radix();

        // subset closure from the initial subset and the empty subset
        let mut ids: BTreeMap<Vec<StateId>, SubsetId> = BTreeMap::new();
        let mut subsets: Vec<Vec<StateId>> = Vec::new();
        let mut accepting: Vec<bool> = Vec::new();
        let intern = |set: Vec<StateId>,
                          subsets: &mut Vec<Vec<StateId>>,
                          accepting: &mut Vec<bool>,
                          ids: &mut BTreeMap<Vec<StateId>, SubsetId>|
         -> SubsetId {
            if let Some(&id) = ids.get(&set) {
                return id;
            }
            let id = subsets.len() as SubsetId;
            accepting.push(set.iter().any(|&q| star.is_final(q)));
            ids.insert(set.clone(), id);
            subsets.push(set);
            id
        };
        let empty_subset = intern(Vec::new(), &mut subsets, &mut accepting, &mut ids);
        let init: Vec<StateId> = star.initial().iter().copied().collect();
        let init_subset = intern(init, &mut subsets, &mut accepting, &mut ids);
        let mut subset_step: Vec<Vec<SubsetId>> = Vec::new();
        let mut at = 0usize;
        while at < subsets.len() {
            let mut row = Vec::with_capacity(radix as usize);
            for d in 0..radix {
                let src: std::collections::BTreeSet<StateId> = subsets[at].iter().copied().collect();
                let image: Vec<StateId> = star.step_set(&src, d).into_iter().collect();
                row.push(intern(image, &mut subsets, &mut accepting, &mut ids));
            }
            subset_step.push(row);
            at += 1;
        }

        // cycle side steps with a dead sink
        let a = ctx.automaton();
        let l_count = a.state_count() + 1;
        let dead = a.state_count();
        let mut l_step = vec![vec![dead; radix as usize]; l_count];
        for q in 0..a.state_count() {
            for d in 0..radix {
                if let Some(t) = a.dfa_step(q, d) {
                    l_step[q][d as usize] = t;
                }
            }
        }

        // disagreement masks
        let node_count = subsets.len() * l_count;
        let mut bad = vec![0u128; node_count];
        let l_accepting: Vec<bool> = (0..l_count)
            .map(|q| q < a.state_count() && a.is_final(q))
            .collect();
        for (sid, acc) in accepting.iter().enumerate() {
            for (l, l_acc) in l_accepting.iter().enumerate() {
                if acc != l_acc {
                    bad[sid * l_count + l] = 1;
                }
            }
        }
        for depth in 0..max_shift {
            for sid in 0..subsets.len() {
                for l in 0..l_count {
                    let mut hit = false;
                    for d in 0..radix as usize {
                        let succ = subset_step[sid][d] as usize * l_count + l_step[l][d];
                        if bad[succ] & (1u128 << depth) != 0 {
                            hit = true;
                            break;
                        }
                    }
                    if hit {
                        bad[sid * l_count + l] |= 1u128 << (depth + 1);
                    }
                }
            }
        }

        Ok(Evaluator {
            ctx,
            k: radix as u64,
            letter: ctx.letter(),
            max_shift,
            subset_step,
            init_subset,
            empty_subset,
            l_step,
            l_count,
            bad,
            value_table: vec![init_subset],
        })
    }

    fn node(&self, sid: SubsetId, l: usize) -> usize {
        sid as usize * self.l_count + l
    }

    fn step_subset(&self, sid: SubsetId, digit: u32) -> SubsetId {
        self.subset_step[sid as usize][digit as usize]
    }

    /// State subset after reading any expansion of `value`.
    fn subset_of_value(&mut self, value: u128) -> SubsetId {
        if value < VALUE_TABLE_CAP as u128 {
            let value = value as u64;
            if (value as usize) < self.value_table.len() {
                return self.value_table[value as usize];
            }
            let mut next = self.value_table.len() as u64;
            while next <= value {
                let id = self.step_subset(self.value_table[(next / self.k) as usize], (next % self.k) as u32);
                self.value_table.push(id);
                next += 1;
            }
            self.value_table[value as usize]
        } else {
            // run the canonical expansion directly
            let mut digits = Vec::new();
            let mut rest = value;
            while rest > 0 {
                digits.push((rest % self.k as u128) as u32);
                rest /= self.k as u128;
            }
            let mut sid = self.init_subset;
            for &d in digits.iter().rev() {
                sid = self.step_subset(sid, d);
            }
            sid
        }
    }

    fn bits_upto(shift: u32) -> u128 {
        if shift >= 127 {
            u128::MAX
        } else {
            (1u128 << (shift + 1)) - 1
        }
    }

    /// Bit `r` set: the additive side fails at shift `r` (for any
    /// candidate). Covers word lengths `j <= r` via pairs at suffix runs
    /// `s = r - j`.
    fn additive_mask(&mut self, n: u64) -> u128 {
        let mut mask = 0u128;
        let mut sid = self.subset_of_value(n as u128);
        let p = self.ctx.state();
        for s in 0..=self.max_shift {
            let node = self.node(sid, p);
            mask |= self.bad[node] << s;
            sid = self.step_subset(sid, self.letter);
        }
        mask & Self::bits_upto(self.max_shift)
    }

    /// Bit `r` set: the subtractive side with prefix length `t = j - r`
    /// fails at shift `r`. `[a^t]` is the value of the run word.
    fn subtractive_mask(&mut self, n: u64, t: u32) -> u128 {
        let a_run: u128 = {
            let mut v = 0u128;
            for _ in 0..t {
                v = v * self.k as u128 + self.letter as u128;
            }
            v
        };
        let lo: i128 = n as i128 - a_run as i128;
        let count = (self.k as u128).pow(t);
        // cycle-side states for all zero-padded prefixes of length t
        let p = self.ctx.state();
        let mut l_states = vec![p];
        for _ in 0..t {
            let mut next = Vec::with_capacity(l_states.len() * self.k as usize);
            for &q in &l_states {
                for d in 0..self.k as usize {
                    next.push(self.l_step[q][d]);
                }
            }
            l_states = next;
        }
        debug_assert_eq!(l_states.len() as u128, count);
        let mut mask = 0u128;
        for (u, &l) in l_states.iter().enumerate() {
            let w = lo + u as i128;
            let sid = if w < 0 { self.empty_subset } else { self.subset_of_value(w as u128) };
            mask |= self.bad[self.node(sid, l)];
        }
        mask & Self::bits_upto(self.max_shift)
    }

    /// Largest admissible exponent for `n`: `k^{i-1} <= n`.
    fn exponent_limit(&self, n: u64) -> u32 {
        crate::basek::canonical_expansion(n, self.k as u32).len() as u32
    }

    fn require_member(&self, n: u64) -> Result<(), ApproxError> {
        if self.ctx.case() == super::StateCase::III {
            return Err(ApproxError::CaseThree);
        }
        if !self.ctx.set().member(n) {
            return Err(ApproxError::NotMember(n));
        }
        Ok(())
    }

    /// The approximation value at shift bound `shift_bound`, stopping the
    /// prefix enumeration at the first failing exponent.
    pub fn value(&mut self, n: u64, shift_bound: u32) -> Result<u64, ApproxError> {
        assert!(shift_bound <= self.max_shift, "shift bound exceeds the engine's coverage");
        self.require_member(n)?;
        if n == 0 {
            return Ok(1);
        }
        let pass = Self::bits_upto(shift_bound);
        let mut cumulative = self.additive_mask(n);
        debug_assert_eq!(
            cumulative & pass,
            0,
            "exponent 0 must pass in a normalized case I/II context"
        );
        let i_max = self.exponent_limit(n);
        for i in 1..=i_max {
            cumulative |= self.subtractive_mask(n, i);
            if cumulative & pass != 0 {
                return Ok((self.k).pow(i - 1));
            }
        }
        Ok(self.k.pow(i_max))
    }

    /// One shift condition: does `(n, i, r)` hold for all words of length
    /// at most `r + i`?
    pub fn condition_check(&mut self, n: u64, i: u32, r: u32) -> Result<(bool, Option<Rejection>), ApproxError> {
        assert!(r <= self.max_shift, "shift exceeds the engine's coverage");
        if n == 0 {
            return Err(ApproxError::ZeroUndefined);
        }
        if i > self.exponent_limit(n) {
            return Err(ApproxError::ExponentTooLarge);
        }
        let bit = 1u128 << r;
        let mut failing = self.additive_mask(n) & bit != 0;
        for t in 1..=i {
            if failing {
                break;
            }
            failing = self.subtractive_mask(n, t) & bit != 0;
        }
        if !failing {
            return Ok((true, None));
        }
        let rejection = self.witness(n, i, r);
        Ok((false, Some(rejection)))
    }

    /// The full trace at shift bound `shift_bound`.
    pub fn approx(&mut self, n: u64, shift_bound: u32) -> Result<(u64, ApproxTrace), ApproxError> {
        assert!(shift_bound <= self.max_shift, "shift bound exceeds the engine's coverage");
        self.require_member(n)?;
        if n == 0 {
            return Ok((
                1,
                ApproxTrace {
                    n,
                    accepted_exponent: 0,
                    rejections: Vec::new(),
                    values_by_shift: vec![1; shift_bound as usize + 1],
                },
            ));
        }
        let i_max = self.exponent_limit(n);
        // cumulative failure masks per candidate exponent
        let mut cumulative = Vec::with_capacity(i_max as usize + 1);
        cumulative.push(self.additive_mask(n));
        for t in 1..=i_max {
            let with_t = cumulative[t as usize - 1] | self.subtractive_mask(n, t);
            cumulative.push(with_t);
        }
        let accepted_at = |bound: u32| -> u32 {
            let pass = Self::bits_upto(bound);
            let mut best = 0;
            for (i, mask) in cumulative.iter().enumerate() {
                if mask & pass == 0 {
                    best = i as u32;
                }
            }
            best
        };
        let values_by_shift: Vec<u64> =
            (0..=shift_bound).map(|b| self.k.pow(accepted_at(b))).collect();
        let accepted = accepted_at(shift_bound);
        let mut rejections = Vec::new();
        for i in accepted + 1..=i_max {
            let mask = cumulative[i as usize] & Self::bits_upto(shift_bound);
            debug_assert_ne!(mask, 0);
            rejections.push(self.witness(n, i, mask.trailing_zeros()));
        }
        Ok((
            self.k.pow(accepted),
            ApproxTrace { n, accepted_exponent: accepted, rejections, values_by_shift },
        ))
    }

    /// Reconstruct the shortest, then lexicographically least,
    /// counterexample word for a failing `(n, i, r)`.
    fn witness(&mut self, n: u64, i: u32, r: u32) -> Rejection {
        let p = self.ctx.state();
        for j in 0..=r + i {
            if j <= r {
                // additive side with suffix run s = r - j
                let s = r - j;
                let mut sid = self.subset_of_value(n as u128);
                for _ in 0..s {
                    sid = self.step_subset(sid, self.letter);
                }
                let node = self.node(sid, p);
                if self.bad[node] & (1u128 << j) != 0 {
                    let word = self.extract_word(node, j);
                    return Rejection {
                        exponent: i,
                        shift: r,
                        witness: word,
                        side: Side::Low,
                        negative_value: false,
                    };
                }
            } else {
                let t = j - r;
                let a_run: i128 = {
                    let mut v = 0i128;
                    for _ in 0..t {
                        v = v * self.k as i128 + self.letter as i128;
                    }
                    v
                };
                let lo = n as i128 - a_run;
                // prefixes in numeric order are zero-padded words in
                // lexicographic order
                for u in 0..(self.k as u128).pow(t) {
                    let l = self.run_padded(p, u, t);
                    let w = lo + u as i128;
                    let sid = if w < 0 { self.empty_subset } else { self.subset_of_value(w as u128) };
                    let node = self.node(sid, l);
                    if self.bad[node] & (1u128 << r) != 0 {
                        let mut word = pad_digits(u, self.k, t);
                        word.extend(self.extract_word(node, r));
                        return Rejection {
                            exponent: i,
                            shift: r,
                            witness: word,
                            side: Side::High,
                            negative_value: w < 0,
                        };
                    }
                }
            }
        }
        unreachable!("witness requested for a passing condition")
    }

    /// Cycle-side state after the zero-padded length-`t` expansion of `u`.
    fn run_padded(&self, from: usize, u: u128, t: u32) -> usize {
        let mut q = from;
        for d in pad_digits(u, self.k, t) {
            q = self.l_step[q][d as usize];
        }
        q
    }

    /// Greedy lexicographically least word of length `depth` from a bad
    /// node to a disagreement.
    fn extract_word(&self, mut node: usize, depth: u32) -> Vec<u32> {
        let mut word = Vec::with_capacity(depth as usize);
        for level in (0..depth).rev() {
            let sid = (node / self.l_count) as SubsetId;
            let l = node % self.l_count;
            let mut advanced = false;
            for d in 0..self.k as usize {
                let succ = self.node(self.subset_step[sid as usize][d], self.l_step[l][d]);
                if self.bad[succ] & (1u128 << level) != 0 {
                    word.push(d as u32);
                    node = succ;
                    advanced = true;
                    break;
                }
            }
            debug_assert!(advanced, "bad-mask invariant violated during extraction");
        }
        word
    }
}

/// The `len` base-k digits of `value`, zero padded, most significant
/// first.
fn pad_digits(value: u128, k: u64, len: u32) -> Vec<u32> {
    let mut digits = vec![0u32; len as usize];
    let mut rest = value;
    for slot in (0..len as usize).rev() {
        digits[slot] = (rest % k as u128) as u32;
        rest /= k as u128;
    }
    digits
}
