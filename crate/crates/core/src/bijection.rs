//! Walks to arc diagrams and back.
//!
//! A walk is read vertex by vertex while a filled tableau records which
//! vertices are still open. Adding a box to row `r` at vertex `i` appends
//! `i` to row `r`. Removing a box from row `r` takes the corner entry of
//! that row and reverse-bumps it up to the first row; the entry pushed out
//! of the first row is the left endpoint `j` of a new arc `(j, i)`.

use smallvec::SmallVec;

use crate::diagram::{max_crossing, Arc, Braid, Partition};
use crate::error::{param, Error, Result};
use crate::tableau::{Step, Walk, WalkKind};

/// Rows of distinct vertex labels, increasing along rows and down columns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FilledTableau {
    rows: Vec<Vec<u32>>,
}

impl FilledTableau {
    pub fn new(parts: usize) -> Self {
        FilledTableau {
            rows: vec![Vec::new(); parts],
        }
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Row lengths.
    pub fn shape(&self) -> Vec<u32> {
        self.rows.iter().map(|r| r.len() as u32).collect()
    }

    /// True if rows and columns strictly increase and the shape is a
    /// partition.
    pub fn is_standard(&self) -> bool {
        let rows_ok = self.rows.iter().all(|r| r.windows(2).all(|w| w[0] < w[1]));
        let shape_ok = self.rows.windows(2).all(|w| w[0].len() >= w[1].len());
        let cols_ok = self
            .rows
            .windows(2)
            .all(|w| w[1].iter().zip(&w[0]).all(|(lo, hi)| hi < lo));
        rows_ok && shape_ok && cols_ok
    }

    fn place(&mut self, r: usize, label: u32) {
        self.rows[r - 1].push(label);
    }

    /// Removes the corner of row `r` and reverse-bumps it out of row 1.
    fn eject(&mut self, r: usize) -> Result<u32> {
        let mut x = self.rows[r - 1]
            .pop()
            .ok_or_else(|| Error::Invariant(format!("row {r} is empty")))?;
        for row in self.rows[..r - 1].iter_mut().rev() {
            // largest entry smaller than x
            let pos = row.partition_point(|&y| y < x);
            if pos == 0 {
                return Err(Error::Invariant(format!(
                    "reverse insertion of {x} found no smaller entry"
                )));
            }
            std::mem::swap(&mut row[pos - 1], &mut x);
        }
        Ok(x)
    }

    /// Row-inserts `x`; returns the row (1-based) that grew.
    fn insert(&mut self, mut x: u32) -> usize {
        for (idx, row) in self.rows.iter_mut().enumerate() {
            let pos = row.partition_point(|&y| y < x);
            if pos == row.len() {
                row.push(x);
                return idx + 1;
            }
            std::mem::swap(&mut row[pos], &mut x);
        }
        self.rows.push(vec![x]);
        self.rows.len()
    }

    /// Deletes `x`, which must sit at the end of some row; returns that row.
    fn delete_corner(&mut self, x: u32) -> Result<usize> {
        for (idx, row) in self.rows.iter_mut().enumerate() {
            if row.last() == Some(&x) {
                row.pop();
                return Ok(idx + 1);
            }
        }
        Err(Error::Invariant(format!("{x} is not at a corner")))
    }
}

/// One vertex's pair of steps, in time order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EmPair {
    pub first: Step,
    pub second: Step,
}

/// Splits a walk into vertex pairs `(2i-1, 2i)`; a trailing odd step forms a
/// pair with `Nothing`.
pub fn vertex_pairs(w: &Walk) -> Vec<EmPair> {
    w.steps()
        .chunks(2)
        .map(|c| EmPair {
            first: c[0],
            second: c.get(1).copied().unwrap_or(Step::Nothing),
        })
        .collect()
}

fn require_kind(w: &Walk, kind: WalkKind) -> Result<()> {
    if w.kind() != kind {
        return Err(param("w", format!("expected a {kind:?} walk, got {:?}", w.kind())));
    }
    Ok(())
}

fn decode_arcs(w: &Walk) -> Result<Vec<Arc>> {
    w.validate_complete()?;
    let mut t = FilledTableau::new(w.k() - 1);
    let mut arcs = Vec::new();
    for (idx, &step) in w.steps().iter().enumerate() {
        let vertex = (idx / 2 + 1) as u32;
        match step {
            Step::Nothing => {}
            Step::Add(r) => t.place(r as usize, vertex),
            Step::Remove(r) => arcs.push((t.eject(r as usize)?, vertex)),
        }
    }
    Ok(arcs)
}

/// Decodes a complete partition walk of length `2N` into a partition of
/// `[N]` with no `k`-crossing.
pub fn decode_partition(w: &Walk) -> Result<Partition> {
    require_kind(w, WalkKind::Partition)?;
    let arcs = decode_arcs(w)?;
    Partition::from_arcs((w.len() / 2) as u32, &arcs)
}

/// Inverse of [`decode_partition`].
pub fn encode_partition(p: &Partition, k: usize) -> Result<Walk> {
    if k < 2 {
        return Err(param("k", format!("must be at least 2, got {k}")));
    }
    let report = max_crossing(p);
    if report.max_crossing >= k {
        return Err(Error::Crossing {
            k,
            found: report.max_crossing,
        });
    }
    let n = p.n() as usize;
    let mut left_of = vec![0u32; n + 1];
    let mut is_left = vec![false; n + 1];
    for (i, j) in p.arcs() {
        left_of[j as usize] = i;
        is_left[i as usize] = true;
    }
    let mut t = FilledTableau::new(0);
    let mut steps = vec![Step::Nothing; 2 * n];
    for i in (1..=n).rev() {
        if is_left[i] {
            steps[2 * i - 1] = Step::Add(t.delete_corner(i as u32)? as u16);
        }
        if left_of[i] != 0 {
            let row = t.insert(left_of[i]);
            if row > k - 1 {
                return Err(Error::Invariant(format!(
                    "insertion reached row {row} on a {k}-noncrossing partition"
                )));
            }
            steps[2 * i - 2] = Step::Remove(row as u16);
        }
        // drop trailing empty rows so `insert` can start new ones
        while t.rows.last().is_some_and(Vec::is_empty) {
            t.rows.pop();
        }
    }
    Ok(Walk::new(WalkKind::Partition, k, steps))
}

/// Decodes a complete braid walk of length `2M` into a braid on `[M]`.
pub fn decode_braid(w: &Walk) -> Result<Braid> {
    require_kind(w, WalkKind::Braid)?;
    let arcs = decode_arcs(w)?;
    Braid::new((w.len() / 2) as u32, arcs)
}

/// Partition walk to braid walk.
///
/// A partition walk of length `2ℓ+1` starts with a forced `Nothing`;
/// dropping it leaves a braid walk of length `2ℓ` to the same shape, with
/// pair `i` of the result being steps `(2i, 2i+1)` of the input. A complete
/// partition walk of even length `2N` is first cut to `2N-1` (its last step
/// is a forced `Nothing`).
pub fn phi_map(w: &Walk) -> Result<Walk> {
    require_kind(w, WalkKind::Partition)?;
    let mut steps = w.steps();
    if steps.len() % 2 == 0 {
        w.validate_complete()?;
        if steps.is_empty() {
            return Err(param("w", "the empty walk has no odd-length prefix"));
        }
        steps = &steps[..steps.len() - 1];
    } else {
        w.validate()?;
    }
    debug_assert_eq!(steps[0], Step::Nothing);
    Ok(Walk::new(WalkKind::Braid, w.k(), steps[1..].to_vec()))
}

/// Inverse of [`phi_map`] on odd-length walks: braid walk of length `2ℓ` to
/// partition walk of length `2ℓ+1`.
pub fn phi_inverse(b: &Walk) -> Result<Walk> {
    require_kind(b, WalkKind::Braid)?;
    b.validate()?;
    if b.len() % 2 != 0 {
        return Err(param("b", format!("braid walks have even length, got {}", b.len())));
    }
    let mut steps = Vec::with_capacity(b.len() + 2);
    steps.push(Step::Nothing);
    steps.extend_from_slice(b.steps());
    Ok(Walk::new(WalkKind::Partition, b.k(), steps))
}

/// Partition on `[N]` to braid on `[N-1]`: arc `(i, j)` becomes `(i, j-1)`.
pub fn theta(p: &Partition) -> Result<Braid> {
    if p.n() == 0 {
        return Err(param("p", "needs at least one vertex"));
    }
    let arcs: Vec<Arc> = p.arcs().into_iter().map(|(i, j)| (i, j - 1)).collect();
    Braid::new(p.n() - 1, arcs)
}

/// Braid on `[N-1]` to partition on `[N]`.
pub fn theta_inv(b: &Braid) -> Result<Partition> {
    let arcs: SmallVec<[Arc; 16]> = b.arcs().iter().map(|&(i, j)| (i, j + 1)).collect();
    Partition::from_arcs(b.n() + 1, &arcs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::is_m_regular;

    fn pwalk(text: &str) -> Walk {
        Walk::parse(WalkKind::Partition, 3, text).unwrap()
    }

    fn bwalk(text: &str) -> Walk {
        Walk::parse(WalkKind::Braid, 3, text).unwrap()
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_partition(&pwalk(". +1 . . -1 .")).unwrap(), part("{1,3}{2}"));
        assert_eq!(
            decode_partition(&pwalk(". +1 . +2 -2 . -1 .")).unwrap(),
            part("{1,3}{2,4}")
        );
        assert_eq!(
            decode_partition(&pwalk(". +1 . +1 -1 . -1 .")).unwrap(),
            part("{1,4}{2,3}")
        );
        assert_eq!(decode_partition(&pwalk("")).unwrap(), Partition::singletons(0));
        assert!(decode_partition(&pwalk(". +1")).is_err());
        assert!(decode_partition(&bwalk("+1 -1")).is_err());
    }

    #[test]
    fn encode_examples() {
        assert_eq!(
            encode_partition(&part("{1,3}{2}"), 3).unwrap().to_string(),
            ". +1 . . -1 ."
        );
        assert_eq!(
            encode_partition(&Partition::singletons(3), 3).unwrap().to_string(),
            ". . . . . ."
        );
        assert!(matches!(
            encode_partition(&part("{1,4}{2,5}{3,6}"), 3),
            Err(Error::Crossing { k: 3, found: 3 })
        ));
        assert_eq!(
            encode_partition(&part("{1,3}{2,4}"), 3).unwrap().to_string(),
            ". +1 . +2 -2 . -1 ."
        );
    }

    #[test]
    fn braid_examples() {
        let b = decode_braid(&bwalk("+1 -1")).unwrap();
        assert_eq!(b.arcs(), &[(1, 1)]);
        assert_eq!(decode_braid(&bwalk("+1 . . -1")).unwrap().arcs(), &[(1, 2)]);
        assert_eq!(decode_braid(&bwalk("")).unwrap(), Braid::empty(0));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_map(&pwalk(". . . . .")).unwrap().to_string(), ". . . .");
        assert_eq!(phi_map(&pwalk(". +1 -1 .")).unwrap().to_string(), "+1 -1");
        assert_eq!(phi_map(&pwalk(". +1 . . -1")).unwrap().to_string(), "+1 . . -1");
        assert_eq!(phi_inverse(&bwalk("+1 . . -1")).unwrap().to_string(), ". +1 . . -1");
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(&part("{1,2}")).unwrap().arcs(), &[(1, 1)]);
        assert_eq!(theta(&part("{1,3}{2}")).unwrap().arcs(), &[(1, 2)]);
        assert_eq!(theta(&Partition::singletons(4)).unwrap(), Braid::empty(3));
        let b = Braid::new(3, vec![(1, 1), (2, 3)]).unwrap();
        let p = theta_inv(&b).unwrap();
        assert_eq!(p, part("{1,2,4}{3}"));
        assert_eq!(theta(&p).unwrap(), b);
        assert!(!is_m_regular(&p, 2).unwrap());
    }

    #[test]
    fn tableau_checks() {
        let mut t = FilledTableau::new(2);
        t.place(1, 1);
        t.place(1, 2);
        t.place(2, 3);
        assert!(t.is_standard());
        assert_eq!(t.shape(), vec![2, 1]);
        assert_eq!(t.eject(2).unwrap(), 2);
        assert_eq!(t.rows(), &[vec![1, 3], vec![]]);
    }
}
