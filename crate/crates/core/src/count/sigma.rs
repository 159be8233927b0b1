//! Loop-free braid-walk counts `σ*[ν][s]`.
//!
//! Braid walks add (or stay) at odd steps and remove (or stay) at even
//! steps; a walk is loop-free when no vertex pair is `(+1, -1)`. Even
//! layers come from chamber counts by inclusion–exclusion, odd layers from
//! one more add-or-stay step: `σ*[ν][2ℓ+1] = Σ_j σ*[ν - e_j][2ℓ]`.

use num_bigint::BigUint;
use smallvec::SmallVec;

use super::omega::{
    alternating_sum, binomial_row, point_rows, trimmed, two_sided_bound, OmegaTable,
};
use super::packed::{Entry, PackedLayer};
use crate::error::{param, Error, Result};
use crate::tableau::{can_remove, ChamberPoint};

/// Stored loop-free braid-walk counts for walks of a fixed total length.
#[derive(Clone, Debug)]
pub struct SigmaStarTable {
    k: usize,
    len: usize,
    // layers[m] holds s = 2m
    layers: Vec<PackedLayer>,
}

impl SigmaStarTable {
    /// Builds all even layers `s <= len` that loop-free walks of total
    /// length `len` visit. Needs `omega.horizon() >= len + 1`.
    pub fn build(omega: &OmegaTable, len: usize) -> Result<Self> {
        if len % 2 != 0 {
            return Err(param("len", format!("braid walks have even length, got {len}")));
        }
        if omega.horizon() < len + 1 {
            return Err(Error::InsufficientLength {
                required: len + 1,
                available: omega.horizon(),
            });
        }
        let k = omega.k();
        let mut layers = Vec::with_capacity(len / 2 + 1);
        for ell in 0..=len / 2 {
            let binom = binomial_row(ell);
            let layer = PackedLayer::build(k - 1, two_sided_bound(2 * ell, len), |rows| {
                let v = alternating_sum(rows, ell, &binom, |r, s| omega.odd_entry(r, s))?;
                Ok((v.bits() > 0).then_some(v))
            })?;
            layers.push(layer);
        }
        Ok(SigmaStarTable { k, len, layers })
    }

    /// Table for regular partitions of `[n]` (braids on `[n-1]`).
    pub fn for_regular(omega: &OmegaTable, n: usize) -> Result<Self> {
        Self::build(omega, 2 * n.saturating_sub(1))
    }

    pub(crate) fn from_layers(k: usize, len: usize, layers: Vec<PackedLayer>) -> Self {
        SigmaStarTable { k, len, layers }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn layers(&self) -> &[PackedLayer] {
        &self.layers
    }

    pub fn heap_bytes(&self) -> usize {
        self.layers.iter().map(PackedLayer::heap_bytes).sum()
    }

    pub(crate) fn even_entry(&self, rows: &[u32], s: usize) -> Result<Entry<'_>> {
        debug_assert!(s % 2 == 0);
        if s > self.len {
            return Err(Error::InsufficientLength {
                required: s,
                available: self.len,
            });
        }
        let size: u32 = rows.iter().sum();
        if size > (s / 2) as u32 {
            return Ok(Entry::ZERO);
        }
        if s == 0 {
            return Ok(Entry::ONE);
        }
        let layer = &self.layers[s / 2];
        if size > layer.bound() {
            return Err(Error::MissingEntry {
                shape: trimmed(rows),
                len: s,
            });
        }
        Ok(layer.get(rows))
    }

    /// Pushes entries whose sum is `σ*[λ][s]`.
    pub(crate) fn terms<'a>(
        &'a self,
        rows: &[u32],
        s: usize,
        out: &mut SmallVec<[Entry<'a>; 8]>,
    ) -> Result<()> {
        if s % 2 == 0 {
            let e = self.even_entry(rows, s)?;
            if !e.is_zero() {
                out.push(e);
            }
            return Ok(());
        }
        let mut below: SmallVec<[u32; 6]> = SmallVec::from_slice(rows);
        let e = self.even_entry(&below, s - 1)?;
        if !e.is_zero() {
            out.push(e);
        }
        for r in 1..=rows.len() {
            if can_remove(rows, r) {
                below[r - 1] -= 1;
                let e = self.even_entry(&below, s - 1)?;
                if !e.is_zero() {
                    out.push(e);
                }
                below[r - 1] += 1;
            }
        }
        Ok(())
    }

    pub(crate) fn value(&self, rows: &[u32], s: usize) -> Result<BigUint> {
        let mut t = SmallVec::new();
        self.terms(rows, s, &mut t)?;
        Ok(t.iter().map(|e| e.to_big()).sum())
    }

    fn check_point(&self, v: &ChamberPoint) -> Result<()> {
        if v.k() != self.k {
            return Err(param("v", format!("point {v} has the wrong dimension for k = {}", self.k)));
        }
        if !v.in_w() {
            return Err(Error::Domain {
                point: v.coords().to_vec(),
            });
        }
        Ok(())
    }

    /// `σ*[ν][s]` for any `s <= len`.
    pub fn get(&self, v: &ChamberPoint, s: usize) -> Result<BigUint> {
        self.check_point(v)?;
        self.value(&point_rows(v), s)
    }

    /// `σ*[ν][s]` for odd `s`, by the one-step recursion.
    pub fn sigma_star_odd(&self, v: &ChamberPoint, s: usize) -> Result<BigUint> {
        if s % 2 == 0 {
            return Err(param("s", format!("expected an odd length, got {s}")));
        }
        self.get(v, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn pt(c: &[i64]) -> ChamberPoint {
        ChamberPoint::new(c)
    }

    #[test]
    fn small_values() {
        let omega = OmegaTable::build(3, 9).unwrap();
        let st = SigmaStarTable::build(&omega, 8).unwrap();
        assert_eq!(st.get(&pt(&[1, 0]), 0).unwrap(), BigUint::one());
        assert_eq!(st.get(&pt(&[1, 0]), 4).unwrap(), BigUint::from(2u8));
        assert_eq!(st.get(&pt(&[1, 0]), 6).unwrap(), BigUint::from(5u8));
        assert_eq!(st.sigma_star_odd(&pt(&[2, 0]), 1).unwrap(), BigUint::one());
        assert_eq!(st.sigma_star_odd(&pt(&[1, 0]), 1).unwrap(), BigUint::one());
        assert_eq!(st.sigma_star_odd(&pt(&[2, 1]), 1).unwrap(), BigUint::zero());
        assert!(matches!(
            st.sigma_star_odd(&pt(&[1, 0]), 2),
            Err(Error::Parameter { .. })
        ));
    }

    #[test]
    fn needs_long_enough_omega() {
        let omega = OmegaTable::build(3, 6).unwrap();
        assert!(matches!(
            SigmaStarTable::build(&omega, 6),
            Err(Error::InsufficientLength { required: 7, .. })
        ));
    }
}
