//! Direct dynamic program over shapes, independent of the reflection sum.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{param, Error, Result};
use crate::tableau::{apply_step, legal_steps_for, ChamberPoint, Parity, Rows, Shape, Step, WalkKind};

/// Most distinct states the forward pass may hold at once.
pub const MAX_CHAMBER_STATES: usize = 1 << 22;

/// Number of walks of length `s` from the empty shape to `v` that stay in
/// `W`, for the given walk kind. With `loop_free`, braid walks may not use
/// `(+1, -1)` as a vertex pair.
pub fn chamber_count(
    k: usize,
    v: &ChamberPoint,
    s: usize,
    kind: WalkKind,
    loop_free: bool,
) -> Result<BigUint> {
    if k < 2 {
        return Err(param("k", format!("must be at least 2, got {k}")));
    }
    if v.k() != k {
        return Err(param("v", format!("point {v} has the wrong dimension for k = {k}")));
    }
    let target = Shape::from_point(v)?;
    let no_loops = loop_free && kind == WalkKind::Braid;

    // (rows, previous odd step was +1)
    let mut states: HashMap<(Rows, bool), BigUint> = HashMap::new();
    states.insert((Shape::empty(k).padded_rows().into(), false), BigUint::one());
    for position in 1..=s {
        let parity = Parity::of_position(position);
        let adding = kind.adds_at(parity);
        let mut next: HashMap<(Rows, bool), BigUint> = HashMap::with_capacity(states.len() * 2);
        for ((rows, pending), count) in &states {
            let forbid = no_loops && parity == Parity::Even && *pending;
            for step in legal_steps_for(rows, adding, forbid) {
                let mut after = rows.clone();
                apply_step(&mut after, step);
                let flag = no_loops && parity == Parity::Odd && step == Step::Add(1);
                *next.entry((after, flag)).or_default() += count;
            }
        }
        if next.len() > MAX_CHAMBER_STATES {
            return Err(Error::TableTooLarge {
                cells: next.len() as u128,
                limit: MAX_CHAMBER_STATES as u128,
            });
        }
        states = next;
    }
    Ok(states
        .iter()
        .filter(|((rows, _), _)| rows.as_slice() == target.padded_rows())
        .map(|(_, c)| c)
        .sum())
}
