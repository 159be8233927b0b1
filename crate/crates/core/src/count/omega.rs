//! Chamber counts `ω[ν][s]`: partition-parity walks from `δ` to `ν` that
//! stay inside `W`, assembled from orthant layers by the reflection sum.
//!
//! Only odd layers are stored. An even layer follows from the preceding odd
//! one, since the last step of an even-length walk adds a box or stays:
//! `ω[ν][2m+2] = Σ_j ω[ν - e_j][2m+1]` over `ν - e_j` in `W`.
//!
//! A table is built for a fixed horizon `H`. Layer `s` keeps shapes with at
//! most `min(s/2, (H-s)/2)` boxes: larger shapes are either unreachable in
//! `s` steps or cannot return to the empty shape within `H - s`.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::orthant::{reflect, signed_permutations, QBox};
use super::packed::{Entry, PackedLayer};
use crate::error::{param, Error, Result};
use crate::tableau::{can_remove, ChamberPoint};

/// Shape bound of stored layer `s` under horizon `horizon`.
pub(crate) fn two_sided_bound(s: usize, horizon: usize) -> u32 {
    (s / 2).min(horizon.saturating_sub(s) / 2) as u32
}

/// Bound on the sorted excess of orthant points that can still influence a
/// stored chamber entry: `min(s/2, #odd t in (s, H])`.
fn orthant_bound(s: usize, horizon: usize) -> u32 {
    let odd_after = (horizon + 1) / 2 - ((s + 1) / 2).min((horizon + 1) / 2);
    (s / 2).min(odd_after) as u32
}

/// Streams the odd chamber layers `s = 1, 3, ..` up to `horizon`.
pub(crate) fn omega_layers<F>(k: usize, horizon: usize, mut sink: F) -> Result<()>
where
    F: FnMut(usize, PackedLayer) -> Result<()>,
{
    let max_excess = (0..=horizon)
        .map(|s| orthant_bound(s, horizon))
        .max()
        .unwrap_or(0) as usize;
    let qbox = QBox::new(k, max_excess)?;
    let perms = signed_permutations(k - 1);
    let dims = k - 1;
    let mut prev = qbox.initial_layer();
    let mut next = vec![BigUint::zero(); qbox.cells()];
    for s in 1..=horizon {
        qbox.step(&prev, &mut next, s, orthant_bound(s, horizon));
        std::mem::swap(&mut prev, &mut next);
        if s % 2 == 0 {
            continue;
        }
        let layer = PackedLayer::build(dims, two_sided_bound(s, horizon), |rows| {
            let nu: SmallVec<[i64; 6]> = rows
                .iter()
                .enumerate()
                .map(|(i, &r)| r as i64 + (dims - 1 - i) as i64)
                .collect();
            let v = reflect(&perms, &nu, |p| qbox.index(p).map(|idx| prev[idx].clone()))?;
            Ok((!v.is_zero()).then_some(v))
        })?;
        sink(s, layer)?;
    }
    Ok(())
}

/// Stored chamber counts for partition-parity walks up to a fixed horizon.
#[derive(Clone, Debug)]
pub struct OmegaTable {
    k: usize,
    horizon: usize,
    // layers[m] holds s = 2m + 1
    layers: Vec<PackedLayer>,
}

impl OmegaTable {
    /// Builds every layer `s <= horizon` that walks of total length
    /// `horizon` (from and back to the empty shape) can visit.
    pub fn build(k: usize, horizon: usize) -> Result<Self> {
        if k < 2 {
            return Err(param("k", format!("must be at least 2, got {k}")));
        }
        let mut layers = Vec::with_capacity(horizon / 2 + 1);
        omega_layers(k, horizon, |_, layer| {
            layers.push(layer);
            Ok(())
        })?;
        Ok(OmegaTable { k, horizon, layers })
    }

    /// Table for complete walks of length `2n` (partitions of `[n]`).
    pub fn for_partitions(k: usize, n: usize) -> Result<Self> {
        Self::build(k, 2 * n)
    }

    pub(crate) fn from_layers(k: usize, horizon: usize, layers: Vec<PackedLayer>) -> Self {
        OmegaTable { k, horizon, layers }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub(crate) fn layers(&self) -> &[PackedLayer] {
        &self.layers
    }

    /// Approximate heap footprint in bytes.
    pub fn heap_bytes(&self) -> usize {
        self.layers.iter().map(PackedLayer::heap_bytes).sum()
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

    /// A stored odd entry; zero outside the support.
    pub(crate) fn odd_entry(&self, rows: &[u32], s: usize) -> Result<Entry<'_>> {
        debug_assert!(s % 2 == 1);
        if s > self.horizon {
            return Err(Error::InsufficientLength {
                required: s,
                available: self.horizon,
            });
        }
        let size: u32 = rows.iter().sum();
        if size > (s / 2) as u32 {
            return Ok(Entry::ZERO);
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

    /// Pushes entries whose sum is `ω[λ][s]`.
    pub(crate) fn terms<'a>(
        &'a self,
        rows: &[u32],
        s: usize,
        out: &mut SmallVec<[Entry<'a>; 8]>,
    ) -> Result<()> {
        if s == 0 {
            if rows.iter().all(|&r| r == 0) {
                out.push(Entry::ONE);
            }
            return Ok(());
        }
        if s % 2 == 1 {
            let e = self.odd_entry(rows, s)?;
            if !e.is_zero() {
                out.push(e);
            }
            return Ok(());
        }
        let mut below: SmallVec<[u32; 6]> = SmallVec::from_slice(rows);
        let e = self.odd_entry(&below, s - 1)?;
        if !e.is_zero() {
            out.push(e);
        }
        for r in 1..=rows.len() {
            if can_remove(rows, r) {
                below[r - 1] -= 1;
                let e = self.odd_entry(&below, s - 1)?;
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

    /// `ω[ν][s]`.
    pub fn get(&self, v: &ChamberPoint, s: usize) -> Result<BigUint> {
        self.check_point(v)?;
        self.value(&point_rows(v), s)
    }

    /// Loop-free braid-walk count of length `2ℓ` by inclusion–exclusion
    /// over the number of `(+1, -1)` vertex pairs:
    /// `Σ_h (-1)^h C(ℓ,h) ω[ν][2(ℓ-h)+1]`.
    pub fn sigma_star_even(&self, v: &ChamberPoint, ell: usize) -> Result<BigUint> {
        self.check_point(v)?;
        if 2 * ell + 1 > self.horizon {
            return Err(Error::InsufficientLength {
                required: 2 * ell + 1,
                available: self.horizon,
            });
        }
        let binom = binomial_row(ell);
        alternating_sum(&point_rows(v), ell, &binom, |rows, s| self.odd_entry(rows, s))
    }
}

/// `C(ℓ, 0..=ℓ)`.
pub(crate) fn binomial_row(ell: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for h in 1..=ell {
        let next = &row[h - 1] * BigUint::from(ell - h + 1) / BigUint::from(h);
        row.push(next);
    }
    row
}

pub(crate) fn alternating_sum<'a, F>(
    rows: &[u32],
    ell: usize,
    binom: &[BigUint],
    mut odd: F,
) -> Result<BigUint>
where
    F: FnMut(&[u32], usize) -> Result<Entry<'a>>,
{
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    for h in 0..=ell {
        let e = odd(rows, 2 * (ell - h) + 1)?;
        if e.is_zero() {
            continue;
        }
        let term = &binom[h] * e.to_big();
        if h % 2 == 0 {
            pos += term;
        } else {
            neg += term;
        }
    }
    if neg > pos {
        return Err(Error::Invariant(format!(
            "negative inclusion-exclusion sum at shape {rows:?}, length {}",
            2 * ell
        )));
    }
    Ok(pos - neg)
}

pub(crate) fn point_rows(v: &ChamberPoint) -> SmallVec<[u32; 6]> {
    let dims = v.coords().len();
    v.coords()
        .iter()
        .enumerate()
        .map(|(i, &c)| (c - (dims - 1 - i) as i64) as u32)
        .collect()
}

pub(crate) fn trimmed(rows: &[u32]) -> Vec<u32> {
    let len = rows.iter().rposition(|&r| r != 0).map_or(0, |p| p + 1);
    rows[..len].to_vec()
}
