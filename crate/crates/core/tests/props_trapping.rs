//! Trapping-set search properties: record bookkeeping against direct
//! recomputation, canonical-key equivalence against brute-force graph
//! isomorphism, closure under graph automorphisms, and the structural
//! guarantees of symmetric-stabilizer records.

use proptest::prelude::*;
use qtrap_core::codes::{circulant_from_spec, gb_construct, hp_construct, CirculantSpec, Side};
use qtrap_core::tanner::TannerGraph;
use qtrap_core::trapping::{
    find_classical_ts, find_symmetric_stabilizers, is_symmetric_stabilizer, record_for, TsClass,
};
use qtrap_core::BitMatrix;
use std::collections::{BTreeSet, HashSet};

/// Brute-force bipartite isomorphism for tiny induced subgraphs: try every
/// VN permutation and compare the CN-support multisets.
fn induced_isomorphic(g: &TannerGraph, vns1: &[u32], vns2: &[u32]) -> bool {
    if vns1.len() != vns2.len() {
        return false;
    }
    let supports = |vns: &[u32]| -> Vec<Vec<usize>> {
        let sub = g.induced_subgraph(vns).unwrap();
        let mut out: Vec<Vec<usize>> = (0..sub.graph.n_cns() as u32)
            .map(|c| {
                sub.graph
                    .cn_neighbors(c)
                    .iter()
                    .map(|&v| v as usize)
                    .collect()
            })
            .collect();
        out.sort();
        out
    };
    let base2 = supports(vns2);
    let n = vns1.len();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let sub1 = g.induced_subgraph(vns1).unwrap();
        let mut remapped: Vec<Vec<usize>> = (0..sub1.graph.n_cns() as u32)
            .map(|c| {
                let mut s: Vec<usize> = sub1
                    .graph
                    .cn_neighbors(c)
                    .iter()
                    .map(|&v| perm[v as usize])
                    .collect();
                s.sort_unstable();
                s
            })
            .collect();
        remapped.sort();
        if remapped == base2 {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn records_restate_their_induced_subgraph(
        (rows, cols, bits) in (4usize..=7, 5usize..=9)
            .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(0u8..=1, r * c))),
    ) {
        let dense: Vec<Vec<u8>> = (0..rows).map(|r| bits[r * cols..(r + 1) * cols].to_vec()).collect();
        let h = BitMatrix::from_dense(&dense).unwrap();
        let g = TannerGraph::from_parity(&h);
        let records = find_classical_ts(&g, 5, 6, None).unwrap();
        for rec in &records {
            prop_assert_eq!(rec.a, rec.vns.len());
            let sub = g.induced_subgraph(&rec.vns).unwrap();
            prop_assert_eq!(rec.b, sub.b());
            prop_assert_eq!(
                &rec.profile,
                &sub.graph.cycle_census(2 * rec.a),
                "profile must be the induced-subgraph census"
            );
            // Records are cycle-bearing by definition.
            prop_assert!(!rec.profile.is_empty());
            // Rebuilding the record from its VN set is idempotent.
            let again = record_for(&g, &rec.vns, TsClass::Classical).unwrap();
            prop_assert_eq!(&again.topo_key, &rec.topo_key);
            prop_assert_eq!(again.b, rec.b);
        }
    }

    #[test]
    fn canonical_keys_agree_with_brute_isomorphism(
        (rows, cols, bits) in (4usize..=6, 5usize..=8)
            .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(0u8..=1, r * c))),
    ) {
        let dense: Vec<Vec<u8>> = (0..rows).map(|r| bits[r * cols..(r + 1) * cols].to_vec()).collect();
        let h = BitMatrix::from_dense(&dense).unwrap();
        let g = TannerGraph::from_parity(&h);
        let records = find_classical_ts(&g, 5, 6, None).unwrap();
        // Compare every pair (including cross-size, where both must differ).
        for (i, r1) in records.iter().enumerate() {
            for r2 in records.iter().skip(i + 1) {
                let same_key = r1.topo_key == r2.topo_key;
                let iso = induced_isomorphic(&g, &r1.vns, &r2.vns);
                prop_assert_eq!(
                    same_key, iso,
                    "key equality and isomorphism disagree for {:?} vs {:?}",
                    r1.vns, r2.vns
                );
            }
        }
    }

    #[test]
    fn symmetric_records_have_zero_odd_checks_and_even_size(
        (r, c, bits) in (2usize..=3, 3usize..=5)
            .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(0u8..=1, r * c))),
    ) {
        let dense: Vec<Vec<u8>> = (0..r).map(|i| bits[i * c..(i + 1) * c].to_vec()).collect();
        let h = BitMatrix::from_dense(&dense).unwrap();
        let code = hp_construct(&h, &h).unwrap();
        for side in [Side::X, Side::Z] {
            let records = find_symmetric_stabilizers(&code, side, 10, 2).unwrap();
            let graph = TannerGraph::from_parity(code.decoding_matrix(side));
            for rec in &records {
                prop_assert_eq!(rec.b, 0, "odd check in symmetric record");
                prop_assert_eq!(rec.a % 2, 0, "odd-size symmetric record");
                prop_assert_eq!(rec.class, TsClass::SymmetricStabilizer);
                // The witness bipartition must exist and exactly cover the set.
                let w = is_symmetric_stabilizer(&graph, &rec.vns).unwrap();
                let w = w.expect("recorded set must re-verify");
                let mut union: Vec<u32> = w.half1.iter().chain(&w.half2).copied().collect();
                union.sort_unstable();
                prop_assert_eq!(union, rec.vns.clone());
                prop_assert_eq!(w.half1.len(), w.half2.len());
            }
        }
    }
}

/// Cyclic-shift closure: the search results on a two-block circulant code
/// are a union of shift orbits, so shifting any record's VN set inside its
/// block yields another record.
#[test]
fn census_is_closed_under_circulant_shift() {
    let l = 31;
    let a = CirculantSpec::new(l, &[0, 2, 11]).unwrap();
    let b = CirculantSpec::new(l, &[0, 5, 17]).unwrap();
    let code = gb_construct(&a, &b).unwrap();
    let g = TannerGraph::from_parity(code.decoding_matrix(Side::X));
    let records = find_classical_ts(&g, 4, 4, Some(2)).unwrap();
    assert!(
        !records.is_empty(),
        "shift-closure test needs a nonempty census"
    );
    let sets: HashSet<BTreeSet<u32>> = records
        .iter()
        .map(|r| r.vns.iter().copied().collect())
        .collect();
    let l = l as u32;
    for rec in &records {
        let shifted: BTreeSet<u32> = rec
            .vns
            .iter()
            .map(|&v| {
                let block = v / l;
                block * l + (v % l + 1) % l
            })
            .collect();
        assert!(
            sets.contains(&shifted),
            "shift of {:?} missing from census",
            rec.vns
        );
    }
}

/// Every weight-4 stabilizer row of the 3x3 toric-layout product passes the
/// symmetric-stabilizer test as a (4,0) set with a perfect two-against-two
/// bipartition.
#[test]
fn toric_layout_stabilizer_rows_are_symmetric_quads() {
    let ring = circulant_from_spec(&CirculantSpec::new(3, &[0, 1]).unwrap());
    let code = hp_construct(&ring, &ring).unwrap();
    assert_eq!((code.n, code.k), (18, 2));
    for side in [Side::X, Side::Z] {
        let stab = code.stabilizer_matrix(side);
        let graph = TannerGraph::from_parity(code.decoding_matrix(side));
        for r in 0..stab.rows() {
            let support: Vec<u32> = stab.row(r).ones().iter().map(|&v| v as u32).collect();
            assert_eq!(support.len(), 4, "row {r} is not weight 4");
            let rec = record_for(&graph, &support, TsClass::SymmetricStabilizer).unwrap();
            assert_eq!((rec.a, rec.b), (4, 0));
            let witness = is_symmetric_stabilizer(&graph, &support).unwrap();
            assert!(witness.is_some(), "row {r} support not symmetric");
        }
    }
}
