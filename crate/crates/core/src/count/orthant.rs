//! Walks confined to the orthant `Q = { ν : ν_i >= 0 }`.
//!
//! Layers are dense boxes `[0, side)^{k-1}`. Odd steps remove (`ν - e_j`
//! or stay), even steps add (`ν + e_j` or stay), so the layer recursions
//! read the previous layer at `ν + e_j` (odd) and `ν - e_j` (even).

use num_bigint::BigUint;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{param, Error, Result};
use crate::tableau::ChamberPoint;

/// Cells per dense layer allowed before giving up.
pub(crate) const MAX_BOX_CELLS: u128 = 1 << 24;
/// Total cells (over all retained layers) for a full [`ATable`].
pub const MAX_A_TABLE_CELLS: u128 = 1 << 24;

pub(crate) type Coords = SmallVec<[i64; 6]>;

/// Dense box geometry shared by the layer recursions.
pub(crate) struct QBox {
    dims: usize,
    side: usize,
    strides: SmallVec<[usize; 6]>,
    // `excess` of each cell: boxes needed above δ once coordinates are sorted
    excess: Vec<u32>,
    delta_index: usize,
}

impl QBox {
    /// A box large enough for every point whose excess is at most
    /// `max_excess`, plus one step of slack.
    pub(crate) fn new(k: usize, max_excess: usize) -> Result<Self> {
        let dims = k - 1;
        let side = (k - 2) + max_excess + 2;
        let cells = (side as u128).pow(dims as u32);
        if cells > MAX_BOX_CELLS {
            return Err(Error::TableTooLarge {
                cells,
                limit: MAX_BOX_CELLS,
            });
        }
        let cells = cells as usize;
        let mut strides = SmallVec::new();
        let mut stride = 1;
        for _ in 0..dims {
            strides.push(stride);
            stride *= side;
        }
        let mut excess = Vec::with_capacity(cells);
        let mut coords: SmallVec<[usize; 6]> = SmallVec::from_elem(0, dims);
        let mut sorted: SmallVec<[usize; 6]> = SmallVec::from_elem(0, dims);
        for cell in 0..cells {
            if cell > 0 {
                advance(&mut coords, side);
            }
            sorted.copy_from_slice(&coords);
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let g: usize = sorted
                .iter()
                .enumerate()
                .map(|(i, &c)| c.saturating_sub(dims - 1 - i))
                .sum();
            excess.push(g as u32);
        }
        let delta_index = (0..dims).map(|i| (dims - 1 - i) * strides[i]).sum();
        Ok(QBox {
            dims,
            side,
            strides,
            excess,
            delta_index,
        })
    }

    pub(crate) fn cells(&self) -> usize {
        self.excess.len()
    }

    pub(crate) fn index(&self, coords: &[i64]) -> Option<usize> {
        let mut idx = 0;
        for (d, &c) in coords.iter().enumerate() {
            if c < 0 || c as usize >= self.side {
                return None;
            }
            idx += c as usize * self.strides[d];
        }
        Some(idx)
    }

    pub(crate) fn initial_layer(&self) -> Vec<BigUint> {
        let mut layer = vec![BigUint::zero(); self.cells()];
        layer[self.delta_index] = BigUint::one();
        layer
    }

    /// Computes layer `s >= 1` from layer `s - 1` for every cell whose
    /// excess is at most `bound`; all other cells are set to zero.
    pub(crate) fn step(&self, prev: &[BigUint], next: &mut [BigUint], s: usize, bound: u32) {
        let removing = s % 2 == 1;
        let mut coords: SmallVec<[usize; 6]> = SmallVec::from_elem(0, self.dims);
        for cell in 0..self.cells() {
            if cell > 0 {
                advance(&mut coords, self.side);
            }
            let out = &mut next[cell];
            if self.excess[cell] > bound {
                if !out.is_zero() {
                    out.set_zero();
                }
                continue;
            }
            out.clone_from(&prev[cell]);
            for d in 0..self.dims {
                if removing {
                    if coords[d] + 1 < self.side {
                        *out += &prev[cell + self.strides[d]];
                    }
                } else if coords[d] > 0 {
                    *out += &prev[cell - self.strides[d]];
                }
            }
        }
    }
}

fn advance(coords: &mut [usize], side: usize) {
    for c in coords.iter_mut() {
        *c += 1;
        if *c < side {
            return;
        }
        *c = 0;
    }
}

/// All permutations of `0..n` with their sign (`true` = odd).
pub(crate) fn signed_permutations(n: usize) -> Vec<(SmallVec<[usize; 6]>, bool)> {
    fn rec(
        prefix: &mut SmallVec<[usize; 6]>,
        used: &mut [bool],
        out: &mut Vec<(SmallVec<[usize; 6]>, bool)>,
    ) {
        if prefix.len() == used.len() {
            let mut inversions = 0;
            for i in 0..prefix.len() {
                for j in i + 1..prefix.len() {
                    if prefix[i] > prefix[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((prefix.clone(), inversions % 2 == 1));
            return;
        }
        for x in 0..used.len() {
            if !used[x] {
                used[x] = true;
                prefix.push(x);
                rec(prefix, used, out);
                prefix.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut SmallVec::new(), &mut vec![false; n], &mut out);
    out
}

/// Signed sum `Σ_π sgn(π) f(π(ν))` over coordinate permutations.
pub(crate) fn reflect<F>(
    perms: &[(SmallVec<[usize; 6]>, bool)],
    nu: &[i64],
    mut f: F,
) -> Result<BigUint>
where
    F: FnMut(&[i64]) -> Option<BigUint>,
{
    let mut pos = BigUint::zero();
    let mut neg = BigUint::zero();
    let mut permuted: Coords = SmallVec::from_slice(nu);
    for (perm, odd) in perms {
        for (i, &p) in perm.iter().enumerate() {
            permuted[i] = nu[p];
        }
        if let Some(v) = f(&permuted) {
            if *odd {
                neg += v;
            } else {
                pos += v;
            }
        }
    }
    if neg > pos {
        return Err(Error::Invariant(format!(
            "negative reflection sum at {nu:?}"
        )));
    }
    Ok(pos - neg)
}

/// Counts `a[ν][s]` of `Q`-confined walks from `δ` with the partition
/// parity (odd steps remove, even steps add), for all `s <= max_len`.
#[derive(Clone, Debug)]
pub struct ATable {
    k: usize,
    max_len: usize,
    side: usize,
    layers: Vec<Vec<BigUint>>,
    strides: SmallVec<[usize; 6]>,
}

/// Builds the full orthant table up to `max_len`.
pub fn build_a_table(k: usize, max_len: usize) -> Result<ATable> {
    if k < 2 {
        return Err(param("k", format!("must be at least 2, got {k}")));
    }
    let qbox = QBox::new(k, max_len / 2)?;
    let total = qbox.cells() as u128 * (max_len as u128 + 1);
    if total > MAX_A_TABLE_CELLS {
        return Err(Error::TableTooLarge {
            cells: total,
            limit: MAX_A_TABLE_CELLS,
        });
    }
    let mut layers = vec![qbox.initial_layer()];
    for s in 1..=max_len {
        let mut next = vec![BigUint::zero(); qbox.cells()];
        qbox.step(&layers[s - 1], &mut next, s, (s / 2) as u32);
        layers.push(next);
    }
    Ok(ATable {
        k,
        max_len,
        side: qbox.side,
        strides: qbox.strides.clone(),
        layers,
    })
}

impl ATable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    fn check(&self, v: &ChamberPoint, s: usize) -> Result<()> {
        if v.k() != self.k {
            return Err(param("v", format!("point {v} has the wrong dimension for k = {}", self.k)));
        }
        if s > self.max_len {
            return Err(Error::InsufficientLength {
                required: s,
                available: self.max_len,
            });
        }
        Ok(())
    }

    fn lookup(&self, coords: &[i64], s: usize) -> Option<&BigUint> {
        let mut idx = 0;
        for (d, &c) in coords.iter().enumerate() {
            if c < 0 || c as usize >= self.side {
                return None;
            }
            idx += c as usize * self.strides[d];
        }
        Some(&self.layers[s][idx])
    }

    /// `a[ν][s]`; zero outside `Q`.
    pub fn get(&self, v: &ChamberPoint, s: usize) -> Result<BigUint> {
        self.check(v, s)?;
        Ok(self.lookup(v.coords(), s).cloned().unwrap_or_default())
    }

    /// The chamber count `ω[ν][s]` by the reflection sum over this table.
    pub fn omega(&self, v: &ChamberPoint, s: usize) -> Result<BigUint> {
        self.check(v, s)?;
        if !v.in_w() {
            return Err(Error::Domain {
                point: v.coords().to_vec(),
            });
        }
        let perms = signed_permutations(self.k - 1);
        reflect(&perms, v.coords(), |p| self.lookup(p, s).cloned())
    }
}
