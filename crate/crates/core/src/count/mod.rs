//! Exact walk counts: orthant tables, chamber tables by reflection,
//! loop-free braid tables by inclusion–exclusion, and the totals built on
//! them.

mod cache;
mod chamber;
mod omega;
mod orthant;
pub(crate) mod packed;
mod sigma;

pub use cache::{load_tables, load_tables_for, save_tables, Tables};
pub use chamber::{chamber_count, MAX_CHAMBER_STATES};
pub use omega::OmegaTable;
pub use orthant::{build_a_table, ATable, MAX_A_TABLE_CELLS};
pub use sigma::SigmaStarTable;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{param, Result};

pub(crate) use omega::binomial_row;

/// Number of `k`-noncrossing partitions of `[n]`.
pub fn total_partitions(k: usize, n: usize) -> Result<BigUint> {
    if k < 2 {
        return Err(param("k", format!("must be at least 2, got {k}")));
    }
    if n == 0 {
        return Ok(BigUint::one());
    }
    // the last stored layer only holds the empty shape
    let mut last = BigUint::default();
    let empty = vec![0u32; k - 1];
    omega::omega_layers(k, 2 * n, |s, layer| {
        if s == 2 * n - 1 {
            last = layer.get(&empty).to_big();
        }
        Ok(())
    })?;
    Ok(last)
}

/// Number of 2-regular `k`-noncrossing partitions of `[n]` (`k >= 3`).
pub fn total_regular(k: usize, n: usize) -> Result<BigUint> {
    if k < 3 {
        return Err(param("k", format!("regular mode needs k >= 3, got {k}")));
    }
    if n <= 1 {
        return Ok(BigUint::one());
    }
    let ell = n - 1;
    let empty = vec![0u32; k - 1];
    let mut at_delta = Vec::with_capacity(ell + 1);
    omega::omega_layers(k, 2 * ell + 1, |_, layer| {
        at_delta.push(layer.get(&empty).to_big());
        Ok(())
    })?;
    let binom = binomial_row(ell);
    let mut pos = BigUint::default();
    let mut neg = BigUint::default();
    for (h, c) in binom.iter().enumerate() {
        let term = c * &at_delta[ell - h];
        if h % 2 == 0 {
            pos += term;
        } else {
            neg += term;
        }
    }
    Ok(pos - neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nums(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn small_totals() {
        let p: Vec<_> = (0..=6).map(|n| total_partitions(3, n).unwrap()).collect();
        assert_eq!(p, nums(&[1, 1, 2, 5, 15, 52, 202]));
        let r: Vec<_> = (1..=6).map(|n| total_regular(3, n).unwrap()).collect();
        assert_eq!(r, nums(&[1, 1, 2, 5, 15, 51]));
        assert_eq!(total_regular(3, 0).unwrap(), BigUint::one());
        assert!(total_regular(2, 4).is_err());
        assert!(total_partitions(1, 4).is_err());
    }

    #[test]
    fn totals_match_tables() {
        for k in 2..=4 {
            for n in 0..=8 {
                let t = OmegaTable::for_partitions(k, n).unwrap();
                let d = crate::tableau::ChamberPoint::delta(k);
                assert_eq!(t.get(&d, 2 * n).unwrap(), total_partitions(k, n).unwrap());
            }
        }
    }
}
