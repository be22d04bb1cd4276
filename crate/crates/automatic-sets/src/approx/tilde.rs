//! The offset view of a cycle-language set.
//!
//! Shifting a member by the run value `[a^t]`, where `k^t` is the largest
//! power of `k` at most `n`, turns trailing runs of the distinguished
//! digit into trailing zeros: the offset set relates its members' trailing
//! zero counts to the original members' suffix runs. With the zero letter
//! the offset vanishes and the view is the set itself.

use super::{ApproxError, CycleContext};

/// The run value `[a^t]` with `t` the largest exponent with `k^t <= n`.
/// Undefined at 0.
pub fn offset_value(n: u64, radix: u32, digit: u32) -> Result<u64, ApproxError> {
    if n == 0 {
        return Err(ApproxError::ZeroUndefined);
    }
    let k = radix as u64;
    let mut power = 1u64;
    let mut run = 0u64;
    // invariant: power = k^t, run = [a^t]
    loop {
        let next = match power.checked_mul(k) {
            Some(p) => p,
            None => break,
        };
        if next > n {
            break;
        }
        power = next;
        run = run
            .checked_mul(k)
            .and_then(|r| r.checked_add(digit as u64))
            .ok_or(ApproxError::Overflow)?;
    }
    Ok(run)
}

impl CycleContext {
    /// Membership in the offset set: `n` is a member when `n + [a^t]` is
    /// in the context's set.
    pub fn offset_member(&self, n: u64) -> Result<bool, ApproxError> {
        let run = offset_value(n, self.radix(), self.letter())?;
        let shifted = n.checked_add(run).ok_or(ApproxError::Overflow)?;
        Ok(self.set().member(shifted))
    }

    /// The approximation transported to the offset set:
    /// the stabilized value at `n + [a^t]`.
    pub fn offset_approx(&self, n: u64) -> Result<u64, ApproxError> {
        if !self.offset_member(n)? {
            return Err(ApproxError::NotMember(n));
        }
        let run = offset_value(n, self.radix(), self.letter())?;
        self.approx_stable(n + run)
    }

    /// Batch form of [`offset_approx`](Self::offset_approx) reusing one
    /// evaluator.
    pub(crate) fn offset_approx_with(
        &self,
        ev: &mut super::engine::Evaluator<'_>,
        n: u64,
    ) -> Result<u64, ApproxError> {
        if !self.offset_member(n)? {
            return Err(ApproxError::NotMember(n));
        }
        let run = offset_value(n, self.radix(), self.letter())?;
        ev.value(n + run, self.stabilization_bound())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::tests::running_example_context;

    #[test]
    fn offset_value_examples() {
        // k = 3, a = 1: for n in [9, 26], t = 2 and [a^2] = [11] = 4
        assert_eq!(offset_value(9, 3, 1).unwrap(), 4);
        assert_eq!(offset_value(26, 3, 1).unwrap(), 4);
        assert_eq!(offset_value(27, 3, 1).unwrap(), 13);
        assert_eq!(offset_value(1, 3, 1).unwrap(), 0);
        assert!(offset_value(0, 3, 1).is_err());
    }

    #[test]
    fn zero_letter_offset_is_identity() {
        // a context with letter 0: the offset vanishes
        let a = crate::Automaton::builder(2, 1)
            .unwrap()
            .states(1)
            .initial([0])
            .finals([0])
            .edge(0, 0, 0)
            .build()
            .unwrap();
        let ctx = crate::approx::CycleContext::from_cycle(&a, 0).unwrap();
        assert_eq!(ctx.letter(), 0);
        for n in 1..64u64 {
            assert_eq!(ctx.offset_member(n).unwrap(), ctx.set().member(n));
        }
    }

    #[test]
    fn running_example_offset_respects_members() {
        let ctx = running_example_context();
        // 18 = [200]: 18 + [11] = 22 which is a member
        assert!(ctx.offset_member(18).unwrap());
        assert_eq!(ctx.offset_approx(18).unwrap(), ctx.approx_stable(22).unwrap());
    }
}
