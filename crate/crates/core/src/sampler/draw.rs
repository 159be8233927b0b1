//! Exact categorical draws on big-integer weights without touching most of
//! their bits.
//!
//! Each weight `w_j` is a sum of stored entries. With `S` chosen so the
//! largest term has about `P` bits left after `>> S`, the truncated sum
//! `A_j = Σ ⌊t >> S⌋` satisfies `A_j·2^S <= w_j < (A_j + E_j)·2^S`, where
//! `E_j` is the number of terms. Candidate `j` owns a slot of width
//! `(A_j + E_j)·2^S`; a uniform point in the union of slots either lands in
//! the leading `w_j` of its slot (accept `j`) or in the slack (redraw). The
//! high part of the point usually decides on its own; only when it falls in
//! the last `E_j` units are the `S` low bits drawn and compared exactly.

use num_bigint::BigUint;
use smallvec::SmallVec;

use super::rng::BitStream;
use crate::count::packed::{Entry, TOP_BITS};
use crate::error::{Error, Result};

pub(crate) type Terms<'a> = SmallVec<[Entry<'a>; 8]>;

/// Truncated weights for one draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Plan {
    pub(crate) shift: u64,
    // (A_j, E_j) per candidate
    pub(crate) slots: SmallVec<[(u64, u64); 16]>,
    pub(crate) width: u64,
}

/// `⌊x >> s⌋` from the cached head. Needs `s >= bits - TOP_BITS`, which
/// holds whenever the precision is at most `TOP_BITS`.
fn shr_u64(e: &Entry<'_>, s: u64) -> u64 {
    let dropped = (e.bits as u64).saturating_sub(TOP_BITS as u64);
    debug_assert!(s >= dropped);
    let rest = s - dropped;
    if rest >= 64 {
        0
    } else {
        e.top >> rest
    }
}

/// Bits kept per term: what the heads hold, and few enough that the slot
/// widths sum below `2^63`.
pub(crate) fn default_precision(term_count: usize) -> u32 {
    let spread = usize::BITS - term_count.leading_zeros();
    (62 - spread).clamp(1, TOP_BITS)
}

pub(crate) fn plan(cands: &[Terms<'_>], precision: u32) -> Plan {
    debug_assert!(precision <= TOP_BITS);
    let max_bits = cands
        .iter()
        .flat_map(|terms| terms.iter().map(|t| t.bits as u64))
        .max()
        .unwrap_or(0);
    let shift = max_bits.saturating_sub(precision as u64);
    let mut slots = SmallVec::new();
    let mut width = 0u64;
    for terms in cands {
        let approx: u64 = terms.iter().map(|t| shr_u64(t, shift)).sum();
        let slack = if shift == 0 {
            0
        } else {
            terms.iter().filter(|t| !t.is_zero()).count() as u64
        };
        slots.push((approx, slack));
        width += approx + slack;
    }
    Plan {
        shift,
        slots,
        width,
    }
}

/// Locates `hi` (in `[0, width)`) and decides acceptance. `exact(j, offset)`
/// is called only when the truncated weights cannot decide; it must return
/// whether `offset·2^S + low < w_j` for freshly drawn low bits.
pub(crate) fn resolve<F>(plan: &Plan, hi: u64, exact: F) -> Option<usize>
where
    F: FnOnce(usize, u64) -> bool,
{
    let mut start = 0u64;
    for (j, &(approx, slack)) in plan.slots.iter().enumerate() {
        let end = start + approx + slack;
        if hi < end {
            let offset = hi - start;
            if offset < approx {
                return Some(j);
            }
            return exact(j, offset).then_some(j);
        }
        start = end;
    }
    unreachable!("point beyond the last slot")
}

/// Picks candidate `j` with probability `w_j / Σ w`.
pub(crate) fn draw_index(cands: &[Terms<'_>], rng: &mut BitStream) -> Result<usize> {
    let term_count = cands.iter().map(|t| t.len()).sum();
    let plan = plan(cands, default_precision(term_count));
    if plan.width == 0 {
        return Err(Error::Invariant("all transition weights are zero".into()));
    }
    loop {
        let hi = rng.below_u64(plan.width);
        let hit = resolve(&plan, hi, |j, offset| {
            let low = rng.big_bits(plan.shift);
            let point = (BigUint::from(offset) << plan.shift) + low;
            let weight: BigUint = cands[j].iter().map(|t| t.to_big()).sum();
            point < weight
        });
        if let Some(j) = hit {
            return Ok(j);
        }
    }
}
