//! Compact storage for one length-layer of a chamber table.
//!
//! Entries are indexed by shape. Row `i` (1-based) of a shape with at most
//! `bound` boxes has at most `bound / i` boxes, so a mixed-radix box with
//! digit `i` in `0..=bound/i` covers every such shape. Counts are stored as
//! little-endian `u32` limbs in one arena; zero is the empty slice.
//!
//! Each cell also has an 8-byte head: the bit length of its count and the
//! leading [`TOP_BITS`] bits. The sampler compares magnitudes through the
//! heads alone, so the hot part of a layer is small enough to stay cached;
//! the offsets and limbs are read only when heads cannot decide.

use num_bigint::BigUint;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Upper limit on limbs held in a single layer (the offsets are `u32`).
const MAX_LAYER_LIMBS: usize = u32::MAX as usize;

/// Leading bits kept in a head.
pub(crate) const TOP_BITS: u32 = 40;
const LEN_BITS: u32 = 64 - TOP_BITS;
const MAX_ENTRY_BITS: u64 = (1 << LEN_BITS) - 1;

/// A stored count: its head plus where to find the limbs.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Entry<'a> {
    /// `⌊x >> max(0, bits - TOP_BITS)⌋`
    pub(crate) top: u64,
    pub(crate) bits: u32,
    src: Source<'a>,
}

#[derive(Clone, Copy, Debug)]
enum Source<'a> {
    Limbs(&'a [u32]),
    Cell(&'a PackedLayer, usize),
}

impl<'a> Entry<'a> {
    pub(crate) const ZERO: Entry<'static> = Entry {
        top: 0,
        bits: 0,
        src: Source::Limbs(&[]),
    };

    pub(crate) const ONE: Entry<'static> = Entry {
        top: 1,
        bits: 1,
        src: Source::Limbs(&[1]),
    };

    #[cfg(test)]
    pub(crate) fn from_limbs(limbs: &'a [u32]) -> Self {
        let (top, bits) = head(limbs);
        Entry {
            top,
            bits,
            src: Source::Limbs(limbs),
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub(crate) fn limbs(&self) -> &'a [u32] {
        match self.src {
            Source::Limbs(l) => l,
            Source::Cell(layer, idx) => layer.limbs_at(idx),
        }
    }

    pub(crate) fn to_big(self) -> BigUint {
        to_big(self.limbs())
    }
}

fn head(limbs: &[u32]) -> (u64, u32) {
    let Some(&last) = limbs.last() else {
        return (0, 0);
    };
    let bits = 32 * (limbs.len() as u32 - 1) + (32 - last.leading_zeros());
    let shift = bits.saturating_sub(TOP_BITS);
    let word = (shift / 32) as usize;
    let mut acc: u128 = 0;
    for t in 0..3 {
        if let Some(&l) = limbs.get(word + t) {
            acc |= (l as u128) << (32 * t);
        }
    }
    ((acc >> (shift % 32)) as u64, bits)
}

#[derive(Clone, Debug)]
pub(crate) struct PackedLayer {
    bound: u32,
    radix: SmallVec<[u32; 6]>,
    // top << LEN_BITS | bits
    heads: Vec<u64>,
    offsets: Vec<u32>,
    limbs: Vec<u32>,
}

impl PackedLayer {
    pub(crate) fn cell_count(parts: usize, bound: u32) -> u128 {
        (1..=parts as u32).map(|i| (bound / i) as u128 + 1).product()
    }

    /// Builds a layer by calling `value` on every shape with at most
    /// `parts` rows and at most `bound` boxes, in index order.
    pub(crate) fn build<F>(parts: usize, bound: u32, mut value: F) -> Result<Self>
    where
        F: FnMut(&[u32]) -> Result<Option<BigUint>>,
    {
        let radix: SmallVec<[u32; 6]> = (1..=parts as u32).map(|i| bound / i + 1).collect();
        let cells = Self::cell_count(parts, bound) as usize;
        let mut heads = Vec::with_capacity(cells);
        let mut offsets = Vec::with_capacity(cells + 1);
        let mut limbs = Vec::new();
        offsets.push(0);
        let mut rows: SmallVec<[u32; 6]> = SmallVec::from_elem(0, parts);
        for cell in 0..cells {
            if cell > 0 {
                // increment the mixed-radix counter, row 1 fastest
                for d in 0..parts {
                    rows[d] += 1;
                    if rows[d] < radix[d] {
                        break;
                    }
                    rows[d] = 0;
                }
            }
            let mut packed = 0u64;
            let is_shape = rows.windows(2).all(|w| w[0] >= w[1]);
            if is_shape && rows.iter().sum::<u32>() <= bound {
                if let Some(v) = value(&rows)? {
                    if v.bits() > MAX_ENTRY_BITS {
                        return Err(Error::TableTooLarge {
                            cells: v.bits() as u128,
                            limit: MAX_ENTRY_BITS as u128,
                        });
                    }
                    let start = limbs.len();
                    limbs.extend(v.iter_u32_digits());
                    let (top, bits) = head(&limbs[start..]);
                    packed = top << LEN_BITS | bits as u64;
                }
            }
            if limbs.len() > MAX_LAYER_LIMBS {
                return Err(Error::TableTooLarge {
                    cells: limbs.len() as u128,
                    limit: MAX_LAYER_LIMBS as u128,
                });
            }
            heads.push(packed);
            offsets.push(limbs.len() as u32);
        }
        limbs.shrink_to_fit();
        Ok(PackedLayer {
            bound,
            radix,
            heads,
            offsets,
            limbs,
        })
    }

    pub(crate) fn bound(&self) -> u32 {
        self.bound
    }

    fn limbs_at(&self, idx: usize) -> &[u32] {
        &self.limbs[self.offsets[idx] as usize..self.offsets[idx + 1] as usize]
    }

    fn entry_at(&self, idx: usize) -> Entry<'_> {
        let packed = self.heads[idx];
        Entry {
            top: packed >> LEN_BITS,
            bits: (packed & MAX_ENTRY_BITS) as u32,
            src: Source::Cell(self, idx),
        }
    }

    /// Entry for a shape (padded rows). The caller guarantees that the size
    /// is at most `bound`.
    pub(crate) fn get(&self, rows: &[u32]) -> Entry<'_> {
        debug_assert!(rows.iter().sum::<u32>() <= self.bound);
        let mut idx = 0usize;
        let mut stride = 1usize;
        for (d, &r) in rows.iter().enumerate() {
            idx += r as usize * stride;
            stride *= self.radix[d] as usize;
        }
        self.entry_at(idx)
    }

    /// Every nonzero entry as (rows, limbs), in index order.
    pub(crate) fn entries(&self) -> impl Iterator<Item = (SmallVec<[u32; 6]>, &[u32])> + '_ {
        let parts = self.radix.len();
        (0..self.heads.len()).filter_map(move |idx| {
            if self.heads[idx] == 0 {
                return None;
            }
            let mut rest = idx;
            let mut rows = SmallVec::with_capacity(parts);
            for d in 0..parts {
                rows.push((rest % self.radix[d] as usize) as u32);
                rest /= self.radix[d] as usize;
            }
            Some((rows, self.limbs_at(idx)))
        })
    }

    pub(crate) fn heap_bytes(&self) -> usize {
        8 * self.heads.capacity() + 4 * (self.offsets.capacity() + self.limbs.capacity())
    }
}

pub(crate) fn to_big(limbs: &[u32]) -> BigUint {
    BigUint::from_slice(limbs)
}
