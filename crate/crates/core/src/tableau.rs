//! Shapes with at most `k - 1` rows, their Weyl-chamber coordinates, and
//! walks of elementary moves between them.
//!
//! A shape `λ` maps to the chamber point `ν_i = λ_i + (k - 1 - i)`, so the
//! empty shape sits at `δ = (k-2, ..., 1, 0)` and every valid shape lands in
//! `W = { ν_1 > ν_2 > ... > ν_{k-1} >= 0 }`. Adding a box to row `r` is the
//! lattice step `+e_r`, removing one is `-e_r`.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{param, Error, Result};

pub(crate) type Rows = SmallVec<[u32; 7]>;

/// A Young-diagram shape with at most `k - 1` rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    // always exactly k - 1 entries, zero-padded
    rows: Rows,
}

impl Shape {
    pub fn empty(k: usize) -> Self {
        assert!(k >= 2, "k must be at least 2");
        Shape {
            rows: SmallVec::from_elem(0, k - 1),
        }
    }

    /// Builds a shape from row lengths (trailing zeros optional).
    pub fn new(k: usize, rows: &[u32]) -> Result<Self> {
        if k < 2 {
            return Err(param("k", format!("must be at least 2, got {k}")));
        }
        let trimmed = trim_zeros(rows);
        if trimmed.len() > k - 1 {
            return Err(Error::Structure(format!(
                "shape {rows:?} has more than {} rows",
                k - 1
            )));
        }
        if trimmed.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Structure(format!("rows {rows:?} are not weakly decreasing")));
        }
        let mut padded: Rows = SmallVec::from_elem(0, k - 1);
        padded[..trimmed.len()].copy_from_slice(trimmed);
        Ok(Shape { rows: padded })
    }

    pub(crate) fn from_padded(rows: Rows) -> Self {
        debug_assert!(rows.windows(2).all(|w| w[0] >= w[1]));
        Shape { rows }
    }

    pub fn k(&self) -> usize {
        self.rows.len() + 1
    }

    /// Row lengths with trailing zeros trimmed.
    pub fn rows(&self) -> &[u32] {
        trim_zeros(&self.rows)
    }

    /// Row lengths padded with zeros to exactly `k - 1` entries.
    pub fn padded_rows(&self) -> &[u32] {
        &self.rows
    }

    /// Length of row `r` (1-based); zero beyond the last row.
    pub fn row(&self, r: usize) -> u32 {
        if r >= 1 && r <= self.rows.len() {
            self.rows[r - 1]
        } else {
            0
        }
    }

    pub fn size(&self) -> u32 {
        self.rows.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn can_add(&self, r: usize) -> bool {
        can_add(&self.rows, r)
    }

    pub fn can_remove(&self, r: usize) -> bool {
        can_remove(&self.rows, r)
    }

    /// Applies a step, or returns `None` if the result is not a valid shape.
    pub fn apply(&self, step: Step) -> Option<Shape> {
        let mut rows = self.rows.clone();
        apply_step(&mut rows, step).then_some(Shape { rows })
    }

    pub fn to_point(&self) -> ChamberPoint {
        let m = self.rows.len();
        ChamberPoint {
            coords: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, &r)| r as i64 + (m - 1 - i) as i64)
                .collect(),
        }
    }

    pub fn from_point(v: &ChamberPoint) -> Result<Shape> {
        if !v.in_w() {
            return Err(Error::Domain {
                point: v.coords.to_vec(),
            });
        }
        let m = v.coords.len();
        Ok(Shape {
            rows: v
                .coords
                .iter()
                .enumerate()
                .map(|(i, &c)| (c - (m - 1 - i) as i64) as u32)
                .collect(),
        })
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

fn trim_zeros(rows: &[u32]) -> &[u32] {
    let len = rows.iter().rposition(|&r| r != 0).map_or(0, |p| p + 1);
    &rows[..len]
}

pub(crate) fn can_add(rows: &[u32], r: usize) -> bool {
    r >= 1 && r <= rows.len() && (r == 1 || rows[r - 2] > rows[r - 1])
}

pub(crate) fn can_remove(rows: &[u32], r: usize) -> bool {
    r >= 1 && r <= rows.len() && rows[r - 1] > 0 && (r == rows.len() || rows[r - 1] > rows[r])
}

/// Applies `step` in place; returns false (leaving `rows` untouched) if the
/// step is illegal.
pub(crate) fn apply_step(rows: &mut [u32], step: Step) -> bool {
    match step {
        Step::Nothing => true,
        Step::Add(r) => {
            let r = r as usize;
            if !can_add(rows, r) {
                return false;
            }
            rows[r - 1] += 1;
            true
        }
        Step::Remove(r) => {
            let r = r as usize;
            if !can_remove(rows, r) {
                return false;
            }
            rows[r - 1] -= 1;
            true
        }
    }
}

/// An integer point `(ν_1, ..., ν_{k-1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChamberPoint {
    coords: SmallVec<[i64; 7]>,
}

impl ChamberPoint {
    pub fn new(coords: &[i64]) -> Self {
        ChamberPoint {
            coords: SmallVec::from_slice(coords),
        }
    }

    /// The start point `δ = (k-2, k-3, ..., 1, 0)`.
    pub fn delta(k: usize) -> Self {
        ChamberPoint {
            coords: (0..k - 1).rev().map(|c| c as i64).collect(),
        }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// The `k` this point belongs to (dimension plus one).
    pub fn k(&self) -> usize {
        self.coords.len() + 1
    }

    /// Strictly decreasing and nonnegative.
    pub fn in_w(&self) -> bool {
        self.coords.windows(2).all(|w| w[0] > w[1]) && self.coords.last().map_or(true, |&c| c >= 0)
    }

    /// All coordinates nonnegative.
    pub fn in_q(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    /// `self + sign * e_axis`; axis 0 is the zero step.
    pub fn shifted(&self, axis: usize, sign: i64) -> ChamberPoint {
        let mut out = self.clone();
        if axis > 0 {
            out.coords[axis - 1] += sign;
        }
        out
    }
}

impl fmt::Display for ChamberPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// One elementary step. Rows are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Nothing,
    Add(u16),
    Remove(u16),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Nothing => f.write_str("."),
            Step::Add(r) => write!(f, "+{r}"),
            Step::Remove(r) => write!(f, "-{r}"),
        }
    }
}

impl FromStr for Step {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Structure(format!("bad step token {s:?}"));
        let row = |t: &str| t.parse::<u16>().ok().filter(|&r| r >= 1).ok_or_else(bad);
        match s {
            "." => Ok(Step::Nothing),
            _ if s.starts_with('+') => Ok(Step::Add(row(&s[1..])?)),
            _ if s.starts_with('-') => Ok(Step::Remove(row(&s[1..])?)),
            _ => Err(bad()),
        }
    }
}

/// Parity of a step's 1-based position in a walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of_position(position: usize) -> Parity {
        if position % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Which parity carries which move.
///
/// * `Partition` (P-walk): odd steps remove or do nothing, even steps add or
///   do nothing. Vertex `i` owns steps `2i-1, 2i`.
/// * `Braid` (B-walk): odd steps add or do nothing, even steps remove or do
///   nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WalkKind {
    Partition,
    Braid,
}

impl WalkKind {
    /// True if steps at this parity add boxes (false: they remove).
    pub fn adds_at(self, parity: Parity) -> bool {
        matches!(
            (self, parity),
            (WalkKind::Partition, Parity::Even) | (WalkKind::Braid, Parity::Odd)
        )
    }
}

/// Steps allowed from `shape` at a step of the given parity.
///
/// Always includes `Nothing`. With `forbid_loop_after = Some(Add(1))` and a
/// removing parity, `Remove(1)` is excluded: that pair would be a loop in a
/// braid.
pub fn legal_steps(
    shape: &Shape,
    parity: Parity,
    kind: WalkKind,
    forbid_loop_after: Option<Step>,
) -> SmallVec<[Step; 8]> {
    legal_steps_for(&shape.rows, kind.adds_at(parity), forbid_loop_after == Some(Step::Add(1)))
}

pub(crate) fn legal_steps_for(rows: &[u32], adding: bool, no_loop: bool) -> SmallVec<[Step; 8]> {
    let mut out = SmallVec::new();
    out.push(Step::Nothing);
    for r in 1..=rows.len() {
        if adding {
            if can_add(rows, r) {
                out.push(Step::Add(r as u16));
            }
        } else if can_remove(rows, r) && !(no_loop && r == 1) {
            out.push(Step::Remove(r as u16));
        }
    }
    out
}

/// A walk of elementary steps starting at the empty shape.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    kind: WalkKind,
    k: usize,
    steps: Vec<Step>,
}

impl Walk {
    pub fn new(kind: WalkKind, k: usize, steps: Vec<Step>) -> Self {
        Walk { kind, k, steps }
    }

    /// Parses the token form, e.g. `. +1 -1 .`.
    pub fn parse(kind: WalkKind, k: usize, text: &str) -> Result<Self> {
        let steps = text
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<Step>>>()?;
        Ok(Walk { kind, k, steps })
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The shape sequence `λ^0, ..., λ^L`, validating the walk on the way.
    pub fn shapes(&self) -> Result<Vec<Shape>> {
        if self.k < 2 {
            return Err(param("k", format!("must be at least 2, got {}", self.k)));
        }
        let mut rows: Rows = SmallVec::from_elem(0, self.k - 1);
        let mut shapes = Vec::with_capacity(self.steps.len() + 1);
        shapes.push(Shape { rows: rows.clone() });
        for (idx, &step) in self.steps.iter().enumerate() {
            let position = idx + 1;
            let adding = self.kind.adds_at(Parity::of_position(position));
            let fail = |reason: String| Error::Walk {
                index: position,
                reason,
            };
            match step {
                Step::Add(_) if !adding => {
                    return Err(fail(format!("{step} not allowed at this parity")));
                }
                Step::Remove(_) if adding => {
                    return Err(fail(format!("{step} not allowed at this parity")));
                }
                _ => {}
            }
            if let Step::Add(r) | Step::Remove(r) = step {
                if r as usize > self.k - 1 {
                    return Err(fail(format!("row {r} exceeds k - 1 = {}", self.k - 1)));
                }
            }
            if !apply_step(&mut rows, step) {
                return Err(fail(format!(
                    "{step} is illegal on shape {:?}",
                    trim_zeros(&rows)
                )));
            }
            shapes.push(Shape { rows: rows.clone() });
        }
        Ok(shapes)
    }

    /// Checks parity rules and shape validity.
    pub fn validate(&self) -> Result<()> {
        self.shapes().map(|_| ())
    }

    /// As [`Walk::validate`], and additionally requires an even length and
    /// an empty final shape.
    pub fn validate_complete(&self) -> Result<()> {
        let shapes = self.shapes()?;
        if self.steps.len() % 2 != 0 {
            return Err(Error::Walk {
                index: self.steps.len(),
                reason: "complete walks have even length".into(),
            });
        }
        if !shapes.last().is_some_and(Shape::is_empty) {
            return Err(Error::Walk {
                index: self.steps.len(),
                reason: "walk does not return to the empty shape".into(),
            });
        }
        Ok(())
    }

    /// For braid walks: true if no vertex uses the pair `(+1, -1)`.
    pub fn is_loop_free(&self) -> bool {
        self.steps
            .chunks(2)
            .all(|pair| pair != [Step::Add(1), Step::Remove(1)])
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, step) in self.steps.iter().enumerate() {
            if idx > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn shape(k: usize, rows: &[u32]) -> Shape {
        Shape::new(k, rows).unwrap()
    }

    #[test]
    fn shape_point_examples() {
        assert_eq!(Shape::empty(3).to_point(), ChamberPoint::new(&[1, 0]));
        assert_eq!(shape(3, &[2, 1]).to_point(), ChamberPoint::new(&[3, 1]));
        assert_eq!(shape(4, &[1, 1]).to_point(), ChamberPoint::new(&[3, 2, 0]));
        assert_eq!(ChamberPoint::delta(4), ChamberPoint::new(&[2, 1, 0]));

        assert!(Shape::from_point(&ChamberPoint::new(&[1, 0])).unwrap().is_empty());
        assert_eq!(
            Shape::from_point(&ChamberPoint::new(&[3, 1])).unwrap(),
            shape(3, &[2, 1])
        );
        assert_eq!(
            Shape::from_point(&ChamberPoint::new(&[3, 2, 0])).unwrap(),
            shape(4, &[1, 1])
        );
        assert!(matches!(
            Shape::from_point(&ChamberPoint::new(&[1, 1])),
            Err(Error::Domain { .. })
        ));
        assert!(Shape::from_point(&ChamberPoint::new(&[0, -1])).is_err());
    }

    #[test]
    fn shape_validation() {
        assert!(Shape::new(3, &[1, 2]).is_err());
        assert!(Shape::new(3, &[1, 1, 1]).is_err());
        assert_eq!(shape(3, &[2, 0]).rows(), &[2]);
        assert_eq!(shape(3, &[2]).padded_rows(), &[2, 0]);
    }

    #[test]
    fn legal_step_examples() {
        let empty = Shape::empty(3);
        assert_eq!(
            legal_steps(&empty, Parity::Odd, WalkKind::Partition, None).as_slice(),
            &[Step::Nothing]
        );
        let one = shape(3, &[1]);
        assert_eq!(
            legal_steps(&one, Parity::Even, WalkKind::Partition, None).as_slice(),
            &[Step::Nothing, Step::Add(1), Step::Add(2)]
        );
        assert_eq!(
            legal_steps(&one, Parity::Even, WalkKind::Braid, Some(Step::Add(1))).as_slice(),
            &[Step::Nothing]
        );
        assert_eq!(
            legal_steps(&one, Parity::Even, WalkKind::Braid, None).as_slice(),
            &[Step::Nothing, Step::Remove(1)]
        );
        // the loop restriction only touches removals
        assert_eq!(
            legal_steps(&one, Parity::Odd, WalkKind::Braid, Some(Step::Add(1))).as_slice(),
            &[Step::Nothing, Step::Add(1), Step::Add(2)]
        );
    }

    #[test]
    fn walk_examples() {
        let w = Walk::parse(WalkKind::Partition, 3, ". +1 -1 .").unwrap();
        w.validate_complete().unwrap();
        assert_eq!(w.to_string(), ". +1 -1 .");

        let bad = Walk::parse(WalkKind::Partition, 3, "-1 +1").unwrap();
        match bad.validate() {
            Err(Error::Walk { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }

        let b = Walk::parse(WalkKind::Braid, 3, "+1 -1").unwrap();
        b.validate_complete().unwrap();
        assert!(!b.is_loop_free());

        // parity violation: add at an odd position of a P-walk
        let p = Walk::parse(WalkKind::Partition, 3, "+1 .").unwrap();
        assert!(matches!(p.validate(), Err(Error::Walk { index: 1, .. })));
        // row beyond k - 1
        let p = Walk::parse(WalkKind::Partition, 3, ". +3").unwrap();
        assert!(matches!(p.validate(), Err(Error::Walk { index: 2, .. })));
        // incomplete
        let p = Walk::parse(WalkKind::Partition, 3, ". +1").unwrap();
        p.validate().unwrap();
        assert!(p.validate_complete().is_err());
        // second row may only grow under the first
        let p = Walk::parse(WalkKind::Partition, 3, ". +2").unwrap();
        assert!(p.validate().is_err());
    }

    #[test]
    fn step_tokens() {
        for t in [".", "+1", "-3", "+12"] {
            assert_eq!(t.parse::<Step>().unwrap().to_string(), t);
        }
        for t in ["+0", "x", "+", "-a", ""] {
            assert!(t.parse::<Step>().is_err());
        }
    }

    fn arb_shape() -> impl Strategy<Value = Shape> {
        (2usize..6, proptest::collection::vec(0u32..6, 0..5)).prop_map(|(k, mut rows)| {
            rows.truncate(k - 1);
            rows.sort_unstable_by(|a, b| b.cmp(a));
            Shape::new(k, &rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn point_round_trip(s in arb_shape()) {
            let v = s.to_point();
            prop_assert!(v.in_w());
            prop_assert_eq!(Shape::from_point(&v).unwrap(), s);
        }

        #[test]
        fn legal_steps_are_exactly_the_valid_ones(s in arb_shape(), adding in any::<bool>()) {
            let legal = legal_steps_for(s.padded_rows(), adding, false);
            let k = s.k();
            for r in 1..k as u16 {
                for step in [Step::Add(r), Step::Remove(r)] {
                    let right_class = matches!(step, Step::Add(_)) == adding;
                    let valid = s.apply(step).is_some();
                    prop_assert_eq!(legal.contains(&step), right_class && valid);
                    if let Some(next) = s.apply(step) {
                        prop_assert!(next.to_point().in_w());
                    }
                }
            }
        }
    }
}
