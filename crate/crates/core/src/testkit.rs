//! Brute-force oracles and statistical checks.
//!
//! Everything here is deliberately naive: partitions come from
//! restricted-growth strings, walks from explicit step-by-step enumeration.
//! Hard guards keep the exponential parts small.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigUint;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::bijection::{decode_partition, encode_partition};
use crate::count::{chamber_count, total_partitions, total_regular, OmegaTable};
use crate::diagram::{is_k_noncrossing, is_m_regular, Arc, Partition};
use crate::error::{param, Error, Result};
use crate::tableau::{ChamberPoint, Step, Walk, WalkKind};

/// Largest `n` accepted by the partition enumerators.
pub const MAX_ENUM_N: u32 = 13;
/// Largest `n` accepted by [`max_crossing_brute`].
pub const MAX_BRUTE_CROSSING_N: u32 = 12;
/// Longest walk the walk enumerators accept.
pub const MAX_BRUTE_LEN: usize = 14;

fn guard(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        return Err(Error::Guard { what, value, limit });
    }
    Ok(())
}

/// All set partitions of `[n]`, in lexicographic order of their
/// restricted-growth strings.
pub fn enum_partitions(n: u32) -> Result<PartitionIter> {
    guard("n", n as usize, MAX_ENUM_N as usize)?;
    Ok(PartitionIter {
        n,
        rgs: vec![0; n as usize],
        done: false,
    })
}

#[derive(Clone, Debug)]
pub struct PartitionIter {
    n: u32,
    rgs: Vec<u32>,
    done: bool,
}

impl PartitionIter {
    fn advance(&mut self) {
        let n = self.rgs.len();
        // rightmost position that can still grow
        for i in (1..n).rev() {
            let cap = self.rgs[..i].iter().max().copied().unwrap_or(0) + 1;
            if self.rgs[i] < cap {
                self.rgs[i] += 1;
                for x in &mut self.rgs[i + 1..] {
                    *x = 0;
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let blocks_n = self.rgs.iter().max().map_or(0, |&m| m as usize + 1);
        let mut blocks = vec![Vec::new(); blocks_n];
        for (i, &b) in self.rgs.iter().enumerate() {
            blocks[b as usize].push(i as u32 + 1);
        }
        let p = Partition::new(self.n, blocks).expect("restricted-growth strings give partitions");
        self.advance();
        Some(p)
    }
}

/// The `k`-noncrossing partitions of `[n]`, optionally also `m`-regular.
pub fn enum_filtered(n: u32, k: usize, m: Option<u32>) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for p in enum_partitions(n)? {
        if !is_k_noncrossing(&p, k)? {
            continue;
        }
        if let Some(m) = m {
            if !is_m_regular(&p, m)? {
                continue;
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// Longest chain extending a crossing whose arcs so far end at `first_right`
/// (smallest right end) and `last_right`. Arcs are sorted by left end, and
/// left ends in a standard diagram are distinct.
fn extend_crossing(arcs: &[Arc], from: usize, first_right: u32, last_right: u32) -> usize {
    let mut best = 0;
    for (idx, &(l, r)) in arcs.iter().enumerate().skip(from) {
        if l >= first_right {
            break;
        }
        if r > last_right {
            best = best.max(1 + extend_crossing(arcs, idx + 1, first_right, r));
        }
    }
    best
}

/// Largest crossing of the standard arc diagram, by trying every set of
/// arcs that could still form one.
pub fn max_crossing_brute(p: &Partition) -> Result<usize> {
    guard("n", p.n() as usize, MAX_BRUTE_CROSSING_N as usize)?;
    let mut arcs = p.arcs();
    arcs.sort();
    let mut best = 0;
    for (idx, &(_, r)) in arcs.iter().enumerate() {
        best = best.max(1 + extend_crossing(&arcs, idx + 1, r, r));
    }
    Ok(best)
}

/// Region a brute-force walk must stay in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Confine {
    /// Nonnegative coordinates.
    Q,
    /// Strictly decreasing nonnegative coordinates.
    W,
}

impl Confine {
    fn admits(self, c: &[i64]) -> bool {
        match self {
            Confine::Q => c.iter().all(|&x| x >= 0),
            Confine::W => {
                c.windows(2).all(|w| w[0] > w[1]) && c.last().map_or(true, |&x| x >= 0)
            }
        }
    }
}

struct Enumerator<'a> {
    kind: WalkKind,
    loop_free: bool,
    confine: Confine,
    len: usize,
    coords: Vec<i64>,
    steps: Vec<Step>,
    visit: &'a mut dyn FnMut(&[i64], &[Step]),
}

impl Enumerator<'_> {
    fn run(&mut self) {
        let done = self.steps.len();
        if done == self.len {
            (self.visit)(&self.coords, &self.steps);
            return;
        }
        let position = done + 1;
        let adding = match self.kind {
            WalkKind::Partition => position % 2 == 0,
            WalkKind::Braid => position % 2 == 1,
        };
        let sign = if adding { 1 } else { -1 };
        let after_add_one = self.loop_free
            && self.kind == WalkKind::Braid
            && position % 2 == 0
            && self.steps.last() == Some(&Step::Add(1));
        self.steps.push(Step::Nothing);
        self.run();
        self.steps.pop();
        for axis in 0..self.coords.len() {
            if after_add_one && axis == 0 {
                continue;
            }
            self.coords[axis] += sign;
            if self.confine.admits(&self.coords) {
                let row = axis as u16 + 1;
                self.steps.push(if adding { Step::Add(row) } else { Step::Remove(row) });
                self.run();
                self.steps.pop();
            }
            self.coords[axis] -= sign;
        }
    }
}

fn enumerate_walks(
    k: usize,
    len: usize,
    kind: WalkKind,
    loop_free: bool,
    confine: Confine,
    visit: &mut dyn FnMut(&[i64], &[Step]),
) -> Result<()> {
    if k < 2 {
        return Err(param("k", format!("must be at least 2, got {k}")));
    }
    guard("s", len, MAX_BRUTE_LEN)?;
    let mut e = Enumerator {
        kind,
        loop_free,
        confine,
        len,
        coords: ChamberPoint::delta(k).coords().to_vec(),
        steps: Vec::with_capacity(len),
        visit,
    };
    e.run();
    Ok(())
}

/// Endpoint tallies of every walk of length `s` from `δ`.
pub fn brute_walk_counts(
    k: usize,
    s: usize,
    kind: WalkKind,
    loop_free: bool,
    confine: Confine,
) -> Result<HashMap<ChamberPoint, BigUint>> {
    let mut tally: HashMap<Vec<i64>, u64> = HashMap::new();
    enumerate_walks(k, s, kind, loop_free, confine, &mut |c, _| {
        *tally.entry(c.to_vec()).or_default() += 1;
    })?;
    Ok(tally
        .into_iter()
        .map(|(c, n)| (ChamberPoint::new(&c), BigUint::from(n)))
        .collect())
}

/// Number of walks of length `s` from `δ` to `v` that stay in `confine`.
pub fn brute_walk_count(
    k: usize,
    v: &ChamberPoint,
    s: usize,
    kind: WalkKind,
    loop_free: bool,
    confine: Confine,
) -> Result<BigUint> {
    if v.k() != k {
        return Err(param("v", format!("point {v} has the wrong dimension for k = {k}")));
    }
    let target = v.coords();
    let mut n = 0u64;
    enumerate_walks(k, s, kind, loop_free, confine, &mut |c, _| {
        if c == target {
            n += 1;
        }
    })?;
    Ok(BigUint::from(n))
}

/// Every walk of length `len` from the empty shape back to it, staying
/// within `k - 1` rows.
pub fn enum_walks(k: usize, len: usize, kind: WalkKind, loop_free: bool) -> Result<Vec<Walk>> {
    let delta = ChamberPoint::delta(k);
    let mut out = Vec::new();
    enumerate_walks(k, len, kind, loop_free, Confine::W, &mut |c, steps| {
        if c == delta.coords() {
            out.push(Walk::new(kind, k, steps.to_vec()));
        }
    })?;
    Ok(out)
}

/// A fixed ordering of a finite object set.
#[derive(Clone, Debug)]
pub struct UniverseIndex<T> {
    objects: Vec<T>,
    index: HashMap<T, usize>,
}

impl<T: Clone + Eq + Hash> UniverseIndex<T> {
    /// Indexes objects in the given order. Duplicates are an error.
    pub fn new(objects: Vec<T>) -> Result<Self> {
        let mut index = HashMap::with_capacity(objects.len());
        for (i, o) in objects.iter().enumerate() {
            if index.insert(o.clone(), i).is_some() {
                return Err(Error::Invariant(format!("duplicate object at position {i}")));
            }
        }
        Ok(UniverseIndex { objects, index })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn position(&self, x: &T) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn get(&self, i: usize) -> Option<&T> {
        self.objects.get(i)
    }

    pub fn objects(&self) -> &[T] {
        &self.objects
    }
}

/// Result of a Pearson goodness-of-fit test against the uniform law.
#[derive(Clone, Debug, Serialize)]
pub struct ChiSquareReport {
    pub samples: u64,
    pub cells: usize,
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// Significance level the verdict uses.
    pub alpha: f64,
    /// Largest `|observed - expected| / expected` over the cells.
    pub max_relative_deviation: f64,
    pub passed: bool,
}

/// Tests whether `samples` look uniform over `universe`. Any sample
/// outside the universe is an error.
pub fn chi_square_uniformity<T, I>(
    samples: I,
    universe: &UniverseIndex<T>,
    alpha: f64,
) -> Result<ChiSquareReport>
where
    T: Clone + Eq + Hash + std::fmt::Display,
    I: IntoIterator<Item = T>,
{
    if universe.is_empty() {
        return Err(param("universe", "must not be empty"));
    }
    let mut observed = vec![0u64; universe.len()];
    let mut total = 0u64;
    for x in samples {
        let i = universe
            .position(&x)
            .ok_or_else(|| Error::OutsideUniverse(x.to_string()))?;
        observed[i] += 1;
        total += 1;
    }
    if total == 0 {
        return Err(param("samples", "must not be empty"));
    }
    let expected = total as f64 / universe.len() as f64;
    let mut statistic = 0.0;
    let mut max_dev: f64 = 0.0;
    for &o in &observed {
        let d = o as f64 - expected;
        statistic += d * d / expected;
        max_dev = max_dev.max(d.abs() / expected);
    }
    let dof = universe.len() - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .map_err(|e| Error::Invariant(e.to_string()))?
            .sf(statistic)
    };
    Ok(ChiSquareReport {
        samples: total,
        cells: universe.len(),
        statistic,
        degrees_of_freedom: dof,
        p_value,
        alpha,
        max_relative_deviation: max_dev,
        passed: p_value > alpha,
    })
}

/// One oracle comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub k: usize,
    pub n: usize,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub k_max: usize,
    pub n_max: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Largest `n` used for the walk round trips in [`verify`].
pub const VERIFY_ROUND_TRIP_N: usize = 7;

/// Compares the counting engine and the bijection against the brute-force
/// oracles for `2 <= k <= k_max` and `n <= n_max`.
pub fn verify(k_max: usize, n_max: usize) -> Result<VerifyReport> {
    if k_max < 2 {
        return Err(param("k_max", format!("must be at least 2, got {k_max}")));
    }
    guard("n_max", n_max, MAX_ENUM_N as usize)?;
    let mut checks = Vec::new();
    let mut push = |name: &str, k: usize, n: usize, expected: String, actual: String| {
        let passed = expected == actual;
        checks.push(Check {
            name: name.to_string(),
            k,
            n,
            expected,
            actual,
            passed,
        });
    };
    for k in 2..=k_max {
        for n in 0..=n_max {
            let family = enum_filtered(n as u32, k, None)?;
            push(
                "count",
                k,
                n,
                family.len().to_string(),
                total_partitions(k, n)?.to_string(),
            );
            if k >= 3 {
                let regular = family
                    .iter()
                    .filter(|p| is_m_regular(p, 2).unwrap_or(false))
                    .count();
                push(
                    "count_regular",
                    k,
                    n,
                    regular.to_string(),
                    total_regular(k, n)?.to_string(),
                );
            }
            if n <= VERIFY_ROUND_TRIP_N {
                let mut ok = 0usize;
                for p in &family {
                    let w = encode_partition(p, k)?;
                    if decode_partition(&w)? == *p {
                        ok += 1;
                    }
                }
                push("round_trip", k, n, family.len().to_string(), ok.to_string());
                let walks = enum_walks(k, 2 * n, WalkKind::Partition, false)?;
                push("walk_count", k, n, family.len().to_string(), walks.len().to_string());
            }
            if 2 * n <= 10 {
                // every endpoint at length s is stored once the horizon is 2s
                let omega = OmegaTable::build(k, 4 * n)?;
                let brute = brute_walk_counts(k, 2 * n, WalkKind::Partition, false, Confine::W)?;
                let mut agree = 0usize;
                for (v, c) in &brute {
                    if omega.get(v, 2 * n)? == *c
                        && chamber_count(k, v, 2 * n, WalkKind::Partition, false)? == *c
                    {
                        agree += 1;
                    }
                }
                push("reflection", k, n, brute.len().to_string(), agree.to_string());
            }
        }
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        k_max,
        n_max,
        checks,
        passed,
    })
}
