//! Set partitions and braids as arc diagrams over `[n] = {1, ..., n}`.
//!
//! A partition is drawn in its standard representation: the elements of each
//! block are joined by arcs in numerical order, so every vertex has at most
//! one arc to its left and at most one to its right. A braid additionally
//! allows loops `(i, i)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{param, Error, Result};

/// An arc `(left, right)` with 1-based endpoints.
pub type Arc = (u32, u32);

/// A set partition of `[n]`, stored canonically: blocks sorted by their
/// minimum, elements ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: u32,
    blocks: Vec<Vec<u32>>,
}

impl Partition {
    /// Builds a partition from arbitrary blocks, validating that they are
    /// nonempty, disjoint and cover `[n]`.
    pub fn new(n: u32, blocks: Vec<Vec<u32>>) -> Result<Self> {
        let mut seen = vec![false; n as usize + 1];
        let mut blocks = blocks;
        for block in &mut blocks {
            if block.is_empty() {
                return Err(Error::Structure("empty block".into()));
            }
            block.sort_unstable();
            for &x in block.iter() {
                if x == 0 || x > n {
                    return Err(Error::Structure(format!("element {x} outside [1, {n}]")));
                }
                if seen[x as usize] {
                    return Err(Error::Structure(format!("element {x} appears twice")));
                }
                seen[x as usize] = true;
            }
        }
        if let Some(x) = (1..=n).find(|&x| !seen[x as usize]) {
            return Err(Error::Structure(format!("element {x} is not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { n, blocks })
    }

    /// The partition of `[n]` into singletons.
    pub fn singletons(n: u32) -> Self {
        Partition {
            n,
            blocks: (1..=n).map(|x| vec![x]).collect(),
        }
    }

    /// Reassembles a partition from its standard-representation arcs.
    ///
    /// Blocks are the connected components of the arc graph; vertices without
    /// arcs become singletons. Fails if some vertex has two arcs on the same
    /// side, or an arc is not of the form `(i, j)` with `1 <= i < j <= n`
    /// (which also rules out cycles).
    pub fn from_arcs(n: u32, arcs: &[Arc]) -> Result<Self> {
        let size = n as usize + 1;
        let mut next = vec![0u32; size];
        let mut has_left = vec![false; size];
        for &(i, j) in arcs {
            if i == 0 || j > n || i >= j {
                return Err(Error::Structure(format!("arc ({i},{j}) is not valid on [{n}]")));
            }
            if next[i as usize] != 0 {
                return Err(Error::Structure(format!("vertex {i} has two arcs to its right")));
            }
            if has_left[j as usize] {
                return Err(Error::Structure(format!("vertex {j} has two arcs to its left")));
            }
            next[i as usize] = j;
            has_left[j as usize] = true;
        }
        let mut blocks = Vec::new();
        for start in 1..=n {
            if has_left[start as usize] {
                continue;
            }
            let mut block = vec![start];
            let mut v = start;
            while next[v as usize] != 0 {
                v = next[v as usize];
                block.push(v);
            }
            blocks.push(block);
        }
        Ok(Partition { n, blocks })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Standard-representation arcs, sorted by left endpoint.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut arcs: Vec<Arc> = self
            .blocks
            .iter()
            .flat_map(|b| b.windows(2).map(|w| (w[0], w[1])))
            .collect();
        arcs.sort_unstable();
        arcs
    }

    /// The arcs in text form, e.g. `(1,5) (3,7)`.
    pub fn arcs_string(&self) -> String {
        format_arcs(&self.arcs())
    }
}

impl fmt::Display for Partition {
    /// Canonical block form, e.g. `{1,5}{2}{3,7,10}`. The empty partition
    /// prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            f.write_str("{")?;
            for (idx, x) in block.iter().enumerate() {
                if idx > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses the block form; `n` is the largest element.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut blocks = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('{')
                .ok_or_else(|| Error::Structure(format!("expected `{{` in {s:?}")))?;
            let close = body
                .find('}')
                .ok_or_else(|| Error::Structure(format!("unterminated block in {s:?}")))?;
            let block = body[..close]
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Structure(format!("bad element {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = body[close + 1..].trim_start();
        }
        let n = blocks.iter().flatten().copied().max().unwrap_or(0);
        Partition::new(n, blocks)
    }
}

/// A braid over `[n]`: arcs `(i, j)` with `i <= j`, where each vertex is the
/// left endpoint of at most one arc and the right endpoint of at most one
/// arc. A loop `(i, i)` uses both roles of its vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Braid {
    n: u32,
    arcs: Vec<Arc>,
}

impl Braid {
    pub fn new(n: u32, arcs: Vec<Arc>) -> Result<Self> {
        let size = n as usize + 1;
        let mut left = vec![false; size];
        let mut right = vec![false; size];
        let mut arcs = arcs;
        for &(i, j) in &arcs {
            if i == 0 || j > n || i > j {
                return Err(Error::Structure(format!("braid arc ({i},{j}) is not valid on [{n}]")));
            }
            if std::mem::replace(&mut left[i as usize], true) {
                return Err(Error::Structure(format!("vertex {i} is a left endpoint twice")));
            }
            if std::mem::replace(&mut right[j as usize], true) {
                return Err(Error::Structure(format!("vertex {j} is a right endpoint twice")));
            }
        }
        arcs.sort_unstable();
        Ok(Braid { n, arcs })
    }

    pub fn empty(n: u32) -> Self {
        Braid { n, arcs: Vec::new() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn has_loop(&self) -> bool {
        self.arcs.iter().any(|&(i, j)| i == j)
    }
}

impl fmt::Display for Braid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_arcs(&self.arcs))
    }
}

fn format_arcs(arcs: &[Arc]) -> String {
    arcs.iter()
        .map(|(i, j)| format!("({i},{j})"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Result of [`max_crossing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingReport {
    /// Largest `m` such that `m` mutually crossing arcs exist.
    pub max_crossing: usize,
    /// One maximal set `(i_1,j_1), ..., (i_m,j_m)` with
    /// `i_1 < ... < i_m < j_1 < ... < j_m`.
    pub witness: Vec<Arc>,
}

/// Size of the largest set of mutually crossing arcs.
///
/// Pairwise-crossing arcs sorted by left endpoint have increasing right
/// endpoints, and all of them straddle the largest left endpoint `t`. So for
/// every left endpoint `t` we take the arcs with `i <= t < j` in order of `i`
/// and find the longest strictly increasing run of right endpoints.
pub fn max_crossing(p: &Partition) -> CrossingReport {
    max_crossing_of_arcs(&p.arcs())
}

pub(crate) fn max_crossing_of_arcs(arcs: &[Arc]) -> CrossingReport {
    let mut best = CrossingReport {
        max_crossing: 0,
        witness: Vec::new(),
    };
    let mut sorted = arcs.to_vec();
    sorted.sort_unstable();
    for &(t, _) in &sorted {
        let straddling: Vec<Arc> = sorted
            .iter()
            .copied()
            .filter(|&(i, j)| i <= t && t < j)
            .collect();
        if straddling.len() <= best.max_crossing {
            continue;
        }
        let chain = longest_increasing_by_right(&straddling);
        if chain.len() > best.max_crossing {
            best = CrossingReport {
                max_crossing: chain.len(),
                witness: chain,
            };
        }
    }
    best
}

/// Patience-sorting LIS on right endpoints; input is sorted by left endpoint.
fn longest_increasing_by_right(arcs: &[Arc]) -> Vec<Arc> {
    // tails[len] = index of the arc ending the best chain of length len + 1
    let mut tails: Vec<usize> = Vec::new();
    let mut parent = vec![usize::MAX; arcs.len()];
    for (idx, &(_, j)) in arcs.iter().enumerate() {
        let pos = tails.partition_point(|&t| arcs[t].1 < j);
        if pos > 0 {
            parent[idx] = tails[pos - 1];
        }
        if pos == tails.len() {
            tails.push(idx);
        } else {
            tails[pos] = idx;
        }
    }
    let mut chain = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied().unwrap_or(usize::MAX);
    while cur != usize::MAX {
        chain.push(arcs[cur]);
        cur = parent[cur];
    }
    chain.reverse();
    chain
}

/// True iff `p` has no `k`-crossing.
pub fn is_k_noncrossing(p: &Partition, k: usize) -> Result<bool> {
    if k < 2 {
        return Err(param("k", format!("must be at least 2, got {k}")));
    }
    // a k-crossing needs 2k distinct vertices
    if (p.n() as usize) < 2 * k {
        return Ok(true);
    }
    Ok(max_crossing(p).max_crossing < k)
}

/// True iff any two distinct elements of a block differ by at least `m`.
pub fn is_m_regular(p: &Partition, m: u32) -> Result<bool> {
    if m < 1 {
        return Err(param("m", "must be at least 1"));
    }
    Ok(p.arcs().iter().all(|&(i, j)| j - i >= m))
}
