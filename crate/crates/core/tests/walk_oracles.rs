use std::collections::HashSet;

use nckp_core::count::chamber_count;
use nckp_core::testkit::{brute_walk_counts, enum_filtered, enum_walks, Confine};
use nckp_core::{
    decode_braid, decode_partition, encode_partition, is_k_noncrossing, is_m_regular, max_crossing,
    phi_inverse, phi_map, theta, theta_inv, ChamberPoint, OmegaTable, SigmaStarTable, Step, Walk,
    WalkKind,
};

fn max_rows(w: &Walk) -> usize {
    w.shapes().unwrap().iter().map(|s| s.rows().len()).max().unwrap_or(0)
}

#[test]
fn complete_walks_balance_adds_and_removes() {
    for k in 2..=4 {
        for n in 0..=6 {
            for w in enum_walks(k, 2 * n, WalkKind::Partition, false).unwrap() {
                let adds = w.steps().iter().filter(|s| matches!(s, Step::Add(_))).count();
                let removes = w.steps().iter().filter(|s| matches!(s, Step::Remove(_))).count();
                assert_eq!(adds, removes);
            }
        }
    }
}

#[test]
fn decode_is_a_bijection_onto_noncrossing_partitions() {
    for k in 2..=4 {
        for n in 0..=7u32 {
            let walks = enum_walks(k, 2 * n as usize, WalkKind::Partition, false).unwrap();
            let family = enum_filtered(n, k, None).unwrap();
            let mut seen = HashSet::new();
            for w in &walks {
                let p = decode_partition(w).unwrap();
                assert!(is_k_noncrossing(&p, k).unwrap());
                // crossings are counted by the tallest shape on the walk
                assert_eq!(max_crossing(&p).max_crossing, max_rows(w), "{w}");
                assert_eq!(&encode_partition(&p, k).unwrap(), w);
                assert!(seen.insert(p), "duplicate decode for {w}");
            }
            for p in &family {
                let w = encode_partition(p, k).unwrap();
                assert_eq!(&decode_partition(&w).unwrap(), p);
            }
            assert_eq!(seen.len(), family.len());
            let omega = OmegaTable::for_partitions(k, n as usize).unwrap();
            let total = omega.get(&ChamberPoint::delta(k), 2 * n as usize).unwrap();
            assert_eq!(total, walks.len().into());
        }
    }
}

#[test]
fn braid_loops_come_from_add_remove_one_pairs() {
    for k in 2..=4 {
        for m in 0..=7 {
            for w in enum_walks(k, 2 * m, WalkKind::Braid, false).unwrap() {
                let b = decode_braid(&w).unwrap();
                let pair = w
                    .steps()
                    .chunks(2)
                    .any(|c| c == [Step::Add(1), Step::Remove(1)]);
                assert_eq!(b.has_loop(), pair, "{w}");
                assert_eq!(pair, !w.is_loop_free());
                let p = theta_inv(&b).unwrap();
                assert_eq!(theta(&p).unwrap(), b);
                if !pair {
                    assert!(is_m_regular(&p, 2).unwrap(), "{w} -> {p}");
                    assert!(is_k_noncrossing(&p, k).unwrap(), "{w} -> {p}");
                    assert_eq!(max_crossing(&p).max_crossing, max_rows(&w), "{w}");
                }
            }
        }
    }
}

#[test]
fn phi_and_theta_routes_agree() {
    for k in 2..=4 {
        for n in 1..=7 {
            let mut images = HashSet::new();
            for w in enum_walks(k, 2 * n, WalkKind::Partition, false).unwrap() {
                let b = phi_map(&w).unwrap();
                assert_eq!(b.len(), 2 * n - 2);
                b.validate_complete().unwrap();
                let back = phi_inverse(&b).unwrap();
                assert_eq!(back.steps(), &w.steps()[..2 * n - 1]);
                assert_eq!(
                    decode_braid(&b).unwrap(),
                    theta(&decode_partition(&w).unwrap()).unwrap(),
                    "{w}"
                );
                assert!(images.insert(b));
            }
            let braids = enum_walks(k, 2 * n - 2, WalkKind::Braid, false).unwrap();
            assert_eq!(images.len(), braids.len());
        }
    }
}

#[test]
fn brute_force_matches_every_engine() {
    for k in 2..=5 {
        for s in 0..=14 {
            let omega = OmegaTable::build(k, 2 * s + 1).unwrap();
            let brute = brute_walk_counts(k, s, WalkKind::Partition, false, Confine::W).unwrap();
            for (v, c) in &brute {
                assert_eq!(&omega.get(v, s).unwrap(), c, "k={k} v={v} s={s}");
                assert_eq!(&chamber_count(k, v, s, WalkKind::Partition, false).unwrap(), c);
            }
            // points no walk reaches have zero count
            let reached: usize = brute.len();
            let mut stored = 0;
            for v in points_within(k, (s / 2) as u32) {
                if omega.get(&v, s).unwrap() > 0u8.into() {
                    stored += 1;
                }
            }
            assert_eq!(stored, reached, "k={k} s={s}");
        }
    }
}

#[test]
fn loop_free_brute_force_matches_sigma_star() {
    for k in 3..=4 {
        let omega = OmegaTable::build(k, 30).unwrap();
        let sigma = SigmaStarTable::build(&omega, 28).unwrap();
        for s in 0..=14 {
            let brute = brute_walk_counts(k, s, WalkKind::Braid, true, Confine::W).unwrap();
            for (v, c) in &brute {
                assert_eq!(&sigma.get(v, s).unwrap(), c, "k={k} v={v} s={s}");
                assert_eq!(&chamber_count(k, v, s, WalkKind::Braid, true).unwrap(), c);
                if s % 2 == 0 {
                    assert_eq!(&omega.sigma_star_even(v, s / 2).unwrap(), c);
                }
            }
        }
    }
}

#[test]
fn orthant_brute_force_matches_the_orthant_table() {
    for k in 2..=4 {
        let max_len = [0, 0, 14, 12, 10][k];
        let table = nckp_core::count::build_a_table(k, max_len).unwrap();
        for s in 0..=max_len {
            let brute = brute_walk_counts(k, s, WalkKind::Partition, false, Confine::Q).unwrap();
            for (v, c) in &brute {
                assert_eq!(&table.get(v, s).unwrap(), c, "k={k} v={v} s={s}");
            }
        }
    }
}

/// Chamber points whose shape has at most `size` boxes.
fn points_within(k: usize, size: u32) -> Vec<ChamberPoint> {
    let mut out = Vec::new();
    let mut rows = vec![0u32; k - 1];
    fn rec(rows: &mut Vec<u32>, d: usize, left: u32, cap: u32, k: usize, out: &mut Vec<ChamberPoint>) {
        if d == rows.len() {
            let coords: Vec<i64> = rows
                .iter()
                .enumerate()
                .map(|(i, &r)| r as i64 + (k - 2 - i) as i64)
                .collect();
            out.push(ChamberPoint::new(&coords));
            return;
        }
        for r in 0..=left.min(cap) {
            rows[d] = r;
            rec(rows, d + 1, left - r, r, k, out);
        }
        rows[d] = 0;
    }
    rec(&mut rows, 0, size, size, k, &mut out);
    out
}
