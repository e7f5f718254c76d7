//! Temporary exploration harness (deleted before release): prints ground
//! truth for the bicycle-code experiments so the real test suites can pin
//! exact values. Run with: cargo test --test explore -- --ignored --nocapture

use qtrap_core::codes::{gb_construct, CirculantSpec, Side};
use qtrap_core::decoder::{Algorithm, DecoderSpec, LayerPlan, Schedule, SyndromeDecoder};
use qtrap_core::tanner::TannerGraph;
use qtrap_core::trapping::{
    find_classical_ts, find_symmetric_stabilizers, group_census, is_symmetric_stabilizer,
    measure_ts, MeasureMode, TsClass,
};
use qtrap_core::BitVec;
use std::time::Instant;

fn a1() -> qtrap_core::CssCode {
    let a = CirculantSpec::new(127, &[0, 15, 20, 28, 66]).unwrap();
    let b = CirculantSpec::new(127, &[0, 58, 59, 100, 121]).unwrap();
    gb_construct(&a, &b).unwrap()
}

#[test]
#[ignore]
fn a1_params() {
    let t = Instant::now();
    let code = a1();
    println!("build: {:?}", t.elapsed());
    println!("n={} k={}", code.n, code.k);
    println!("rank h_x = {}", code.h_x.rank());
    let g = TannerGraph::from_parity(&code.h_x);
    println!("girth = {:?}", g.girth());
    let vn_degs: std::collections::BTreeSet<usize> =
        (0..g.n_vns() as u32).map(|v| g.vn_degree(v)).collect();
    let cn_degs: std::collections::BTreeSet<usize> =
        (0..g.n_cns() as u32).map(|c| g.cn_degree(c)).collect();
    println!("vn degs {vn_degs:?} cn degs {cn_degs:?}");
    println!("total params time: {:?}", t.elapsed());
}

#[test]
#[ignore]
fn a1_classical_census() {
    let code = a1();
    let g = TannerGraph::from_parity(&code.h_x);
    let t = Instant::now();
    let records = find_classical_ts(&g, 5, 5, Some(2)).unwrap();
    println!("census time: {:?}", t.elapsed());
    println!("records: {}", records.len());
    for row in group_census(&records) {
        println!(
            "  ({},{}) x{}  profile={}  example={:?}",
            row.a, row.b, row.count, row.profile, row.example
        );
    }
    // Block membership of (5,5) records.
    let mut a_block = 0;
    let mut b_block = 0;
    let mut mixed = 0;
    for r in records.iter().filter(|r| r.a == 5 && r.b == 5) {
        if r.vns.iter().all(|&v| v < 127) {
            a_block += 1;
        } else if r.vns.iter().all(|&v| v >= 127) {
            b_block += 1;
        } else {
            mixed += 1;
        }
    }
    println!("(5,5) block split: A={a_block} B={b_block} mixed={mixed}");
}

#[test]
#[ignore]
fn a1_symmetric_rows() {
    let code = a1();
    let t = Instant::now();
    let records = find_symmetric_stabilizers(&code, Side::X, 16, 1).unwrap();
    println!("symm search time: {:?}", t.elapsed());
    println!("records: {}", records.len());
    let mut labels = std::collections::BTreeMap::new();
    *labels.entry((records[0].a, records[0].b)).or_insert(0) += 0;
    for r in &records {
        *labels.entry((r.a, r.b)).or_insert(0usize) += 1;
    }
    println!("labels: {labels:?}");
    // Witness structure of the first record.
    let g = TannerGraph::from_parity(code.decoding_matrix(Side::X));
    let w = is_symmetric_stabilizer(&g, &records[0].vns).unwrap().unwrap();
    println!("half1={:?}\nhalf2={:?}", w.half1, w.half2);
    println!("matching={:?}", w.matching);
    for half in [&w.half1, &w.half2] {
        let sub = g.induced_subgraph(half).unwrap();
        let nodes = sub.graph.n_vns() + sub.graph.n_cns();
        let edges = sub.graph.edge_count();
        println!(
            "half: vns={} cns={} edges={} (tree iff edges=nodes-1={}) odd={}",
            sub.graph.n_vns(),
            sub.graph.n_cns(),
            edges,
            nodes - 1,
            sub.odd_cns.len()
        );
    }
    // Blocks: halves confined to circulant blocks?
    println!(
        "half1 all A-block: {} ; half2 all B-block: {}",
        w.half1.iter().all(|&v| v < 127),
        w.half2.iter().all(|&v| v >= 127)
    );
    println!("profile of record: {}", records[0].profile);
    println!("topo keys all equal: {}", records.iter().all(|r| r.topo_key == records[0].topo_key));
}

#[test]
#[ignore]
fn a1_55_under_gallager_b() {
    let code = a1();
    let g = TannerGraph::from_parity(&code.h_x);
    let records = find_classical_ts(&g, 5, 5, Some(2)).unwrap();
    let rec = records.iter().find(|r| r.a == 5 && r.b == 5).unwrap();
    println!("measuring (5,5) {:?} profile={}", rec.vns, rec.profile);
    let spec = DecoderSpec {
        algorithm: Algorithm::GallagerB,
        max_iters: 20,
        ..DecoderSpec::default()
    };
    let t = Instant::now();
    let report = measure_ts(&g, rec, &spec, MeasureMode::Isolated).unwrap();
    println!("measure time: {:?}", t.elapsed());
    println!(
        "mu={:?} s={} by_weight={:?}",
        report.critical_number, report.strength, report.failing_by_weight
    );
}

#[test]
#[ignore]
fn a1_100_fixture_behavior() {
    let code = a1();
    let records = find_symmetric_stabilizers(&code, Side::X, 16, 1).unwrap();
    let rec = &records[0];
    let g = TannerGraph::from_parity(code.decoding_matrix(Side::X));

    // Flooding min-sum: critical number and weight-6..10 resolution.
    let msa = DecoderSpec {
        algorithm: Algorithm::MinSum,
        max_iters: 20,
        ..DecoderSpec::default()
    };
    let t = Instant::now();
    let report = measure_ts(&g, rec, &msa, MeasureMode::Isolated).unwrap();
    println!("flooding msa measure: {:?}", t.elapsed());
    println!(
        "msa mu={:?} s={} by_weight={:?}",
        report.critical_number, report.strength, report.failing_by_weight
    );

    // Layered (halves) min-sum on the isolated fixture.
    let layered = DecoderSpec {
        algorithm: Algorithm::MinSum,
        schedule: Schedule::ColumnLayered(LayerPlan::Halves),
        max_iters: 20,
        ..DecoderSpec::default()
    };
    let report = measure_ts(&g, rec, &layered, MeasureMode::Isolated).unwrap();
    println!(
        "layered msa mu={:?} s={} by_weight={:?}",
        report.critical_number, report.strength, report.failing_by_weight
    );

    // Inject one half on the isolated subgraph and watch layered decode.
    let sub = g.induced_subgraph(&rec.vns).unwrap();
    let w = is_symmetric_stabilizer(&g, &rec.vns).unwrap().unwrap();
    let local = |ids: &[u32]| -> Vec<usize> {
        ids.iter()
            .map(|&v| sub.vn_ids.binary_search(&v).unwrap())
            .collect()
    };
    let h1 = local(&w.half1);
    let h2 = local(&w.half2);
    println!("local half1={h1:?} half2={h2:?}");
    let e = BitVec::from_support(10, &h1);
    let sigma = sub.graph.syndrome(&e).unwrap();
    let mut spec = layered.clone();
    spec.record_trajectory = true;
    let mut dec = SyndromeDecoder::new(&sub.graph, &spec).unwrap();
    let r = dec.decode(&sigma).unwrap();
    println!(
        "layered on half-1 error: matched={} iters={} e_hat={:?}",
        r.matched,
        r.iters_used,
        r.e_hat.ones()
    );

    // Same under flooding, checking twin symmetry per iteration via the
    // half-swap automorphism of the induced subgraph.
    let auto_pairs = half_swap_automorphism(&sub.graph, &h1, &h2);
    println!("automorphism pairs: {auto_pairs:?}");
    for alg in [Algorithm::GallagerB, Algorithm::MinSum, Algorithm::SumProduct] {
        let spec = DecoderSpec {
            algorithm: alg,
            max_iters: 12,
            record_trajectory: true,
            ..DecoderSpec::default()
        };
        let mut dec = SyndromeDecoder::new(&sub.graph, &spec).unwrap();
        let r = dec.decode(&sigma).unwrap();
        let traj = r.trajectory.as_ref().unwrap();
        let symmetric = traj.iter().all(|e_hat| {
            auto_pairs
                .iter()
                .all(|&(u, v)| e_hat.get(u as usize) == e_hat.get(v as usize))
        });
        println!(
            "{alg:?}: matched={} iters={} twin-symmetric={} final={:?}",
            r.matched,
            r.iters_used,
            symmetric,
            r.e_hat.ones()
        );
    }
}

/// Finds an involutive automorphism of the 10-VN induced subgraph that swaps
/// the two halves, by brute force over degree-compatible bijections.
fn half_swap_automorphism(g: &TannerGraph, h1: &[usize], h2: &[usize]) -> Vec<(u32, u32)> {
    let masks = |relabel: &dyn Fn(u32) -> u32| -> Vec<u64> {
        let mut ms: Vec<u64> = (0..g.n_cns() as u32)
            .map(|c| {
                g.cn_neighbors(c)
                    .iter()
                    .fold(0u64, |m, &v| m | 1 << relabel(v))
            })
            .collect();
        ms.sort_unstable();
        ms
    };
    let id_masks = masks(&|v| v);
    let k = h1.len();
    let mut perm: Vec<usize> = (0..k).collect();
    // Heap's algorithm over h2 orderings.
    let mut c = vec![0usize; k];
    loop {
        // Build the involution map.
        let mut map = vec![u32::MAX; g.n_vns()];
        for i in 0..k {
            map[h1[i]] = h2[perm[i]] as u32;
            map[h2[perm[i]]] = h1[i] as u32;
        }
        if map.iter().all(|&v| v != u32::MAX) {
            let m = masks(&|v| map[v as usize]);
            if m == id_masks {
                return (0..k).map(|i| (h1[i] as u32, h2[perm[i]] as u32)).collect();
            }
        }
        // Next permutation (iterative Heap).
        let mut i = 0;
        loop {
            if i >= k {
                return Vec::new();
            }
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                c[i] += 1;
                break;
            }
            c[i] = 0;
            i += 1;
        }
    }
}

#[test]
#[ignore]
fn discrepancy_sweep() {
    let code = a1();
    let g = TannerGraph::from_parity(&code.h_x);
    let records = find_classical_ts(&g, 5, 5, Some(2)).unwrap();
    let rec_a = records
        .iter()
        .find(|r| r.a == 5 && r.b == 5 && r.vns.iter().all(|&v| v < 127))
        .unwrap();
    let rec_b = records
        .iter()
        .find(|r| r.a == 5 && r.b == 5 && r.vns.iter().all(|&v| v >= 127))
        .unwrap();

    // Gallager-B on the (5,5): isolated vs in-situ, A-block vs B-block.
    for iters in [20, 100] {
        let gb = DecoderSpec {
            algorithm: Algorithm::GallagerB,
            max_iters: iters,
            ..DecoderSpec::default()
        };
        for (name, rec) in [("A", rec_a), ("B", rec_b)] {
            for (mname, mode) in [
                ("isolated", MeasureMode::Isolated),
                ("in_situ", MeasureMode::InSitu),
            ] {
                let rep = measure_ts(&g, rec, &gb, mode).unwrap();
                println!(
                    "gb l={iters} {name}-block {mname}: mu={:?} s={} by_weight={:?}",
                    rep.critical_number, rep.strength, rep.failing_by_weight
                );
            }
        }
    }

    // Min-sum on the (5,5) in-situ: the full-support weight-5 pattern per block.
    for (name, rec) in [("A", rec_a), ("B", rec_b)] {
        let msa = DecoderSpec {
            algorithm: Algorithm::MinSum,
            max_iters: 100,
            ..DecoderSpec::default()
        };
        let rep = measure_ts(&g, rec, &msa, MeasureMode::InSitu).unwrap();
        println!(
            "msa l=100 {name}-block in_situ: mu={:?} s={} by_weight={:?}",
            rep.critical_number, rep.strength, rep.failing_by_weight
        );
    }

    // Flooding min-sum on the isolated (10,0): scale / iteration / quantization sweep.
    let symm = find_symmetric_stabilizers(&code, Side::X, 16, 1).unwrap();
    let srec = &symm[0];
    let sg = TannerGraph::from_parity(code.decoding_matrix(Side::X));
    for scale in [1.0, 0.9, 0.8, 0.75, 0.625, 0.5] {
        for iters in [20, 100] {
            let msa = DecoderSpec {
                algorithm: Algorithm::MinSum,
                max_iters: iters,
                msa_scale: scale,
                ..DecoderSpec::default()
            };
            let rep = measure_ts(&sg, srec, &msa, MeasureMode::Isolated).unwrap();
            println!(
                "msa scale={scale} l={iters} isolated: mu={:?} s={} by_weight={:?}",
                rep.critical_number, rep.strength, rep.failing_by_weight
            );
        }
    }
    for b in [1, 3, 7] {
        let msa = DecoderSpec {
            algorithm: Algorithm::MinSum,
            max_iters: 20,
            quantization: Some(b),
            ..DecoderSpec::default()
        };
        let rep = measure_ts(&sg, srec, &msa, MeasureMode::Isolated).unwrap();
        println!(
            "msa quant B={b} l=20 isolated: mu={:?} s={} by_weight={:?}",
            rep.critical_number, rep.strength, rep.failing_by_weight
        );
    }
    // In-situ flooding min-sum on the (10,0) for reference.
    let msa = DecoderSpec {
        algorithm: Algorithm::MinSum,
        max_iters: 20,
        ..DecoderSpec::default()
    };
    let rep = measure_ts(&sg, srec, &msa, MeasureMode::InSitu).unwrap();
    println!(
        "msa l=20 in_situ: mu={:?} s={} by_weight={:?}",
        rep.critical_number, rep.strength, rep.failing_by_weight
    );
    // Sum-product isolated for reference.
    let spa = DecoderSpec {
        algorithm: Algorithm::SumProduct,
        max_iters: 20,
        ..DecoderSpec::default()
    };
    let rep = measure_ts(&sg, srec, &spa, MeasureMode::Isolated).unwrap();
    println!(
        "spa l=20 isolated: mu={:?} s={} by_weight={:?}",
        rep.critical_number, rep.strength, rep.failing_by_weight
    );
}

#[test]
#[ignore]
fn fig3_trace() {
    // The five-VN fixture: pairs {1,3,4}x{0,2} via weight-2 checks plus one
    // pendant check each on 1, 3, 4; error on {1,3,4} gives an all-one
    // syndrome.
    let checks = vec![
        vec![1, 0],
        vec![1, 2],
        vec![3, 0],
        vec![3, 2],
        vec![4, 0],
        vec![4, 2],
        vec![1],
        vec![3],
        vec![4],
    ];
    let g = TannerGraph::from_check_supports(5, &checks).unwrap();
    let e = BitVec::from_support(5, &[1, 3, 4]);
    let sigma = g.syndrome(&e).unwrap();
    println!("sigma = {:?} (weight {})", sigma.ones(), sigma.weight());
    let spec = DecoderSpec {
        algorithm: Algorithm::GallagerB,
        max_iters: 8,
        record_trajectory: true,
        ..DecoderSpec::default()
    };
    let mut dec = SyndromeDecoder::new(&g, &spec).unwrap();
    let r = dec.decode(&sigma).unwrap();
    println!("matched={} iters={}", r.matched, r.iters_used);
    for (i, e_hat) in r.trajectory.as_ref().unwrap().iter().enumerate() {
        let mut res = e_hat.clone();
        res.xor_assign(&e);
        println!("iter {}: e_hat={:?} residual={:?}", i + 1, e_hat.ones(), res.ones());
    }
    let rec = qtrap_core::trapping::record_for(&g, &[0, 1, 2, 3, 4], TsClass::Classical).unwrap();
    let report = measure_ts(&g, &rec, &spec, MeasureMode::Isolated).unwrap();
    println!(
        "gb mu={:?} s={} patterns={:?} by_weight={:?}",
        report.critical_number,
        report.strength,
        report
            .failing_patterns
            .iter()
            .map(|p| p.ones())
            .collect::<Vec<_>>(),
        report.failing_by_weight
    );
}
