//! Text persistence for built tables.
//!
//! A cache file holds one section per table:
//!
//! ```text
//! nckp-tab 1
//! k 3
//! max_len 12
//! kind omega
//! records 17
//! 1,0 1 1
//! 2,0 3 1
//! ...
//! end
//! ```
//!
//! `max_len` is the horizon of an omega table and the walk length of a
//! sigma_star table. Each record is `ν_1,...,ν_{k-1} s count` with the count
//! in decimal; only nonzero stored entries appear (odd `s` for omega, even
//! `s` for sigma_star). A regular-mode cache is an omega section followed
//! by a sigma_star section.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigUint;

use super::omega::{two_sided_bound, OmegaTable};
use super::packed::{to_big, PackedLayer};
use super::sigma::SigmaStarTable;
use crate::error::{Error, Result};

const MAGIC: &str = "nckp-tab";
const VERSION: u32 = 1;

/// Tables needed by a sampling session.
#[derive(Clone, Debug)]
pub enum Tables {
    Plain(OmegaTable),
    Regular {
        omega: OmegaTable,
        sigma: SigmaStarTable,
    },
}

impl Tables {
    /// Builds the tables for partitions of `[n]` (or regular partitions).
    pub fn build(k: usize, n: usize, regular: bool) -> Result<Self> {
        if regular {
            if k < 3 {
                return Err(crate::error::param(
                    "k",
                    format!("regular mode needs k >= 3, got {k}"),
                ));
            }
            let len = 2 * n.saturating_sub(1);
            let omega = OmegaTable::build(k, len + 1)?;
            let sigma = SigmaStarTable::build(&omega, len)?;
            Ok(Tables::Regular { omega, sigma })
        } else {
            Ok(Tables::Plain(OmegaTable::for_partitions(k, n)?))
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Tables::Plain(o) => o.k(),
            Tables::Regular { omega, .. } => omega.k(),
        }
    }

    pub fn is_regular(&self) -> bool {
        matches!(self, Tables::Regular { .. })
    }

    /// Vertex count these tables serve.
    pub fn n(&self) -> usize {
        match self {
            Tables::Plain(o) => o.horizon() / 2,
            Tables::Regular { sigma, .. } => sigma.len() / 2 + 1,
        }
    }

    /// Refuses tables built for different parameters.
    pub fn expect(&self, k: usize, n: usize, regular: bool) -> Result<()> {
        let mismatch = |field: &'static str, expected: String, found: String| {
            Err(Error::CacheMismatch {
                field,
                expected,
                found,
            })
        };
        if self.is_regular() != regular {
            let name = |r: bool| if r { "regular" } else { "plain" }.to_string();
            return mismatch("mode", name(regular), name(self.is_regular()));
        }
        if self.k() != k {
            return mismatch("k", k.to_string(), self.k().to_string());
        }
        let n = if regular { n.max(1) } else { n };
        if self.n() != n {
            return mismatch("n", n.to_string(), self.n().to_string());
        }
        Ok(())
    }
}

fn write_section<W: Write>(
    out: &mut W,
    k: usize,
    max_len: usize,
    kind: &str,
    layers: &[PackedLayer],
    first_len: usize,
) -> Result<()> {
    let records: usize = layers.iter().map(|l| l.entries().count()).sum();
    writeln!(out, "{MAGIC} {VERSION}")?;
    writeln!(out, "k {k}")?;
    writeln!(out, "max_len {max_len}")?;
    writeln!(out, "kind {kind}")?;
    writeln!(out, "records {records}")?;
    let dims = k - 1;
    for (m, layer) in layers.iter().enumerate() {
        let s = first_len + 2 * m;
        for (rows, limbs) in layer.entries() {
            let coords: Vec<String> = rows
                .iter()
                .enumerate()
                .map(|(i, &r)| (r as usize + dims - 1 - i).to_string())
                .collect();
            writeln!(out, "{} {s} {}", coords.join(","), to_big(limbs))?;
        }
    }
    writeln!(out, "end")?;
    Ok(())
}

/// Writes tables to `path`.
pub fn save_tables(tables: &Tables, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    match tables {
        Tables::Plain(o) => write_section(&mut out, o.k(), o.horizon(), "omega", o.layers(), 1)?,
        Tables::Regular { omega, sigma } => {
            write_section(&mut out, omega.k(), omega.horizon(), "omega", omega.layers(), 1)?;
            write_section(&mut out, sigma.k(), sigma.len(), "sigma_star", sigma.layers(), 0)?;
        }
    }
    out.flush()?;
    Ok(())
}

struct Reader {
    path: PathBuf,
    lines: std::io::Lines<BufReader<File>>,
    line: usize,
    offset: usize,
    next_offset: usize,
}

impl Reader {
    fn fail(&self, reason: impl Into<String>) -> Error {
        Error::CacheParse {
            path: self.path.clone(),
            line: self.line,
            offset: self.offset,
            reason: reason.into(),
        }
    }

    fn next_line(&mut self) -> Result<Option<String>> {
        match self.lines.next() {
            None => Ok(None),
            Some(line) => {
                let line = line?;
                self.line += 1;
                self.offset = self.next_offset;
                self.next_offset += line.len() + 1;
                Ok(Some(line))
            }
        }
    }

    fn require_line(&mut self) -> Result<String> {
        match self.next_line()? {
            Some(line) => Ok(line),
            None => {
                self.line += 1;
                self.offset = self.next_offset;
                Err(self.fail("unexpected end of file (truncated cache)"))
            }
        }
    }

    fn field<T: std::str::FromStr>(&mut self, name: &str) -> Result<T> {
        let line = self.require_line()?;
        let value = line
            .strip_prefix(name)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| self.fail(format!("expected `{name} <value>`")))?;
        value
            .trim()
            .parse()
            .map_err(|_| self.fail(format!("bad value for `{name}`: {value:?}")))
    }
}

struct Section {
    k: usize,
    max_len: usize,
    kind: String,
    layers: Vec<PackedLayer>,
}

fn read_section(r: &mut Reader, header: String) -> Result<Section> {
    let version = header
        .strip_prefix(MAGIC)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| r.fail(format!("missing `{MAGIC}` header")))?;
    if version.trim() != VERSION.to_string() {
        return Err(Error::CacheMismatch {
            field: "version",
            expected: VERSION.to_string(),
            found: version.trim().to_string(),
        });
    }
    let k: usize = r.field("k")?;
    if k < 2 {
        return Err(r.fail(format!("k must be at least 2, got {k}")));
    }
    let max_len: usize = r.field("max_len")?;
    let kind: String = r.field("kind")?;
    let first_len = match kind.as_str() {
        "omega" => 1,
        "sigma_star" => 0,
        _ => return Err(r.fail(format!("unknown table kind {kind:?}"))),
    };
    let records: usize = r.field("records")?;
    let dims = k - 1;
    let layer_count = if first_len == 1 {
        (max_len + 1) / 2
    } else {
        max_len / 2 + 1
    };
    let mut buckets: Vec<HashMap<Vec<u32>, BigUint>> = vec![HashMap::new(); layer_count];
    for _ in 0..records {
        let line = r.require_line()?;
        let mut parts = line.split(' ');
        let (Some(coords), Some(len), Some(count), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(r.fail("expected `coords length count`"));
        };
        let coords: Vec<i64> = coords
            .split(',')
            .map(|c| c.parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| r.fail(format!("malformed coordinates {coords:?}")))?;
        if coords.len() != dims {
            return Err(r.fail(format!("expected {dims} coordinates, got {}", coords.len())));
        }
        let strictly = coords.windows(2).all(|w| w[0] > w[1]) && coords[dims - 1] >= 0;
        if !strictly {
            return Err(r.fail(format!("point {coords:?} is not in the chamber")));
        }
        let s: usize = len
            .parse()
            .map_err(|_| r.fail(format!("malformed length {len:?}")))?;
        if s > max_len || s % 2 != first_len {
            return Err(r.fail(format!("length {s} is not stored in a {kind} table")));
        }
        let value: BigUint = count
            .parse()
            .map_err(|_| r.fail(format!("malformed integer {count:?}")))?;
        let rows: Vec<u32> = coords
            .iter()
            .enumerate()
            .map(|(i, &c)| (c - (dims - 1 - i) as i64) as u32)
            .collect();
        if rows.iter().sum::<u32>() > two_sided_bound(s, max_len) {
            return Err(r.fail(format!("entry {coords:?} at length {s} is outside the table")));
        }
        buckets[s / 2].insert(rows, value);
    }
    let end = r.require_line()?;
    if end.trim() != "end" {
        return Err(r.fail("expected `end` (record count does not match)"));
    }
    let mut layers = Vec::with_capacity(layer_count);
    for (m, mut bucket) in buckets.into_iter().enumerate() {
        let s = first_len + 2 * m;
        let bound = two_sided_bound(s, max_len);
        layers.push(PackedLayer::build(dims, bound, |rows| Ok(bucket.remove(rows)))?);
    }
    Ok(Section {
        k,
        max_len,
        kind,
        layers,
    })
}

/// Reads tables written by [`save_tables`].
pub fn load_tables(path: &Path) -> Result<Tables> {
    let file = File::open(path)?;
    let mut r = Reader {
        path: path.to_path_buf(),
        lines: BufReader::new(file).lines(),
        line: 0,
        offset: 0,
        next_offset: 0,
    };
    let header = r.require_line()?;
    let first = read_section(&mut r, header)?;
    if first.kind != "omega" {
        return Err(r.fail("the first section must be an omega table"));
    }
    let omega = OmegaTable::from_layers(first.k, first.max_len, first.layers);
    let second = loop {
        match r.next_line()? {
            None => break None,
            Some(line) if line.trim().is_empty() => continue,
            Some(line) => break Some(read_section(&mut r, line)?),
        }
    };
    match second {
        None => Ok(Tables::Plain(omega)),
        Some(sec) => {
            if sec.kind != "sigma_star" {
                return Err(r.fail("the second section must be a sigma_star table"));
            }
            if sec.k != omega.k() {
                return Err(Error::CacheMismatch {
                    field: "k",
                    expected: omega.k().to_string(),
                    found: sec.k.to_string(),
                });
            }
            if omega.horizon() < sec.max_len + 1 {
                return Err(r.fail("omega section is too short for the sigma_star section"));
            }
            let sigma = SigmaStarTable::from_layers(sec.k, sec.max_len, sec.layers);
            Ok(Tables::Regular { omega, sigma })
        }
    }
}

/// [`load_tables`] followed by [`Tables::expect`].
pub fn load_tables_for(path: &Path, k: usize, n: usize, regular: bool) -> Result<Tables> {
    let tables = load_tables(path)?;
    tables.expect(k, n, regular)?;
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::ChamberPoint;

    fn same_omega(a: &OmegaTable, b: &OmegaTable) {
        assert_eq!(a.k(), b.k());
        assert_eq!(a.horizon(), b.horizon());
        for (la, lb) in a.layers().iter().zip(b.layers()) {
            let ea: Vec<_> = la.entries().collect();
            let eb: Vec<_> = lb.entries().collect();
            assert_eq!(ea, eb);
        }
    }

    #[test]
    fn plain_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.cache");
        let tables = Tables::build(3, 10, false).unwrap();
        save_tables(&tables, &path).unwrap();
        let back = load_tables_for(&path, 3, 10, false).unwrap();
        match (&tables, &back) {
            (Tables::Plain(a), Tables::Plain(b)) => same_omega(a, b),
            _ => panic!("mode changed"),
        }
        let Tables::Plain(b) = back else { unreachable!() };
        assert_eq!(
            b.get(&ChamberPoint::delta(3), 20).unwrap().to_string(),
            "97566"
        );
    }

    #[test]
    fn regular_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.cache");
        let tables = Tables::build(4, 7, true).unwrap();
        save_tables(&tables, &path).unwrap();
        let back = load_tables_for(&path, 4, 7, true).unwrap();
        let (Tables::Regular { omega: a, sigma: sa }, Tables::Regular { omega: b, sigma: sb }) =
            (&tables, &back)
        else {
            panic!("mode changed")
        };
        same_omega(a, b);
        for (la, lb) in sa.layers().iter().zip(sb.layers()) {
            assert_eq!(la.entries().collect::<Vec<_>>(), lb.entries().collect::<Vec<_>>());
        }
    }

    #[test]
    fn mismatches_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.cache");
        save_tables(&Tables::build(3, 5, false).unwrap(), &path).unwrap();
        assert!(matches!(
            load_tables_for(&path, 4, 5, false),
            Err(Error::CacheMismatch { field: "k", .. })
        ));
        assert!(matches!(
            load_tables_for(&path, 3, 6, false),
            Err(Error::CacheMismatch { field: "n", .. })
        ));
        assert!(matches!(
            load_tables_for(&path, 3, 5, true),
            Err(Error::CacheMismatch { field: "mode", .. })
        ));
    }

    #[test]
    fn truncated_and_malformed_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.cache");
        save_tables(&Tables::build(3, 6, false).unwrap(), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();

        let cut = &text[..text.len() * 2 / 3];
        let cut = &cut[..cut.rfind('\n').unwrap() + 1];
        std::fs::write(&path, cut).unwrap();
        match load_tables(&path) {
            Err(Error::CacheParse { offset, .. }) => assert_eq!(offset, cut.len()),
            other => panic!("unexpected {other:?}"),
        }

        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let first_record = lines.iter().position(|l| l.starts_with("records")).unwrap() + 1;
        lines[first_record].push('x');
        std::fs::write(&path, lines.join("\n")).unwrap();
        assert!(matches!(load_tables(&path), Err(Error::CacheParse { .. })));

        let old = text.replacen("nckp-tab 1", "nckp-tab 2", 1);
        std::fs::write(&path, old).unwrap();
        assert!(matches!(
            load_tables(&path),
            Err(Error::CacheMismatch { field: "version", .. })
        ));
    }
}
