//! Decoder behavior properties: result bookkeeping, determinism, exactness
//! on cycle-free graphs, and estimate symmetry under graph automorphisms
//! that fix the syndrome.

use proptest::prelude::*;
use qtrap_core::decoder::{decode, Algorithm, DecoderSpec, LayerPlan, Schedule};
use qtrap_core::tanner::TannerGraph;
use qtrap_core::{BitMatrix, BitVec};
use rand::prelude::*;
use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

fn spec(alg: Algorithm) -> DecoderSpec {
    DecoderSpec {
        algorithm: alg,
        schedule: Schedule::Flooding,
        max_iters: 30,
        channel_p: 0.02,
        msa_scale: 1.0,
        quantization: None,
        record_trajectory: true,
    }
}

const ALL_ALGS: [Algorithm; 3] = [
    Algorithm::GallagerB,
    Algorithm::MinSum,
    Algorithm::SumProduct,
];

/// Random bipartite tree with `n_vns` variable nodes: nodes are added one
/// at a time, each attached to a uniformly random node of the other kind.
fn random_tree(n_vns: usize, n_cns: usize, seed: u64) -> TannerGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<Vec<u32>> = vec![Vec::new(); n_cns];
    let mut vns_present = 1u32; // VN 0 is the root
    for c in 0..n_cns {
        // Each CN first attaches to an existing VN.
        let v = rng.gen_range(0..vns_present);
        checks[c].push(v);
        // Then any remaining VNs may attach below existing CNs.
        while (vns_present as usize) < n_vns && rng.gen_bool(0.4) {
            checks[rng.gen_range(0..=c)].push(vns_present);
            vns_present += 1;
        }
    }
    while (vns_present as usize) < n_vns {
        checks[rng.gen_range(0..n_cns)].push(vns_present);
        vns_present += 1;
    }
    for c in checks.iter_mut() {
        c.sort_unstable();
        c.dedup();
    }
    TannerGraph::from_check_supports(n_vns, &checks).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn matched_flag_equals_syndrome_recomputation(
        (rows, cols, bits, ebits) in (3usize..=6, 4usize..=8).prop_flat_map(|(r, c)| {
            (
                Just(r),
                Just(c),
                prop::collection::vec(0u8..=1, r * c),
                prop::collection::vec(0u8..=1, c),
            )
        }),
    ) {
        let dense: Vec<Vec<u8>> = (0..rows).map(|r| bits[r * cols..(r + 1) * cols].to_vec()).collect();
        let h = BitMatrix::from_dense(&dense).unwrap();
        let g = TannerGraph::from_parity(&h);
        let e = BitVec::from_bits(&ebits);
        let sigma = g.syndrome(&e).unwrap();
        for alg in ALL_ALGS {
            let result = decode(&g, &sigma, &spec(alg)).unwrap();
            let recomputed = g.syndrome(&result.e_hat).unwrap();
            prop_assert_eq!(result.matched, recomputed == sigma, "{:?}", alg);
            prop_assert!(result.iters_used <= 30);
            // Trajectory bookkeeping: one snapshot per executed iteration,
            // the last being the output (zero-syndrome runs execute none).
            let traj = result.trajectory.as_ref().unwrap();
            prop_assert_eq!(traj.len(), result.iters_used);
            if let Some(last) = traj.last() {
                prop_assert_eq!(last, &result.e_hat);
            } else {
                prop_assert!(result.e_hat.is_zero());
            }
            // Bit-identical rerun.
            let again = decode(&g, &sigma, &spec(alg)).unwrap();
            prop_assert_eq!(again.e_hat, result.e_hat);
            prop_assert_eq!(
                again.trajectory.as_ref().unwrap().len(),
                traj.len()
            );
        }
    }

    #[test]
    fn single_errors_on_trees_decode_exactly(
        seed in any::<u64>(),
        n_vns in 4usize..=10,
        n_cns in 2usize..=6,
        at in any::<prop::sample::Index>(),
    ) {
        let g = random_tree(n_vns, n_cns, seed);
        // A single error at a degree->=2 node is the unique minimum-weight
        // explanation of its syndrome on a tree (two VNs sharing two checks
        // would close a cycle); leaves can be ambiguous twins, so only
        // internal nodes make exact recovery a theorem.
        let internal: Vec<u32> =
            (0..n_vns as u32).filter(|&v| g.vn_degree(v) >= 2).collect();
        prop_assume!(!internal.is_empty());
        let mut e = BitVec::zeros(n_vns);
        e.set(internal[at.index(internal.len())] as usize, true);
        let sigma = g.syndrome(&e).unwrap();
        for alg in ALL_ALGS {
            let result = decode(&g, &sigma, &spec(alg)).unwrap();
            prop_assert!(result.matched, "{:?} failed to match on a tree", alg);
            prop_assert_eq!(
                &result.e_hat, &e,
                "{:?} found a different matching error on a tree", alg
            );
        }
    }
}

/// Duplicating a graph into two disjoint copies creates an automorphism
/// (swap the copies). A syndrome equal on both copies is fixed by the swap,
/// so flooding estimates must stay copy-symmetric at every iteration.
#[test]
fn flooding_estimates_are_symmetric_across_identical_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..20 {
        let rows = rng.gen_range(3..=5);
        let cols = rng.gen_range(4..=7);
        let mut dense = vec![vec![0u8; 2 * cols]; 2 * rows];
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(0.4) {
                    dense[r][c] = 1;
                    dense[rows + r][cols + c] = 1;
                }
            }
        }
        let h = BitMatrix::from_dense(&dense).unwrap();
        let g = TannerGraph::from_parity(&h);
        // Same error pattern injected in both copies.
        let mut e = BitVec::zeros(2 * cols);
        for c in 0..cols {
            if rng.gen_bool(0.3) {
                e.set(c, true);
                e.set(cols + c, true);
            }
        }
        let sigma = g.syndrome(&e).unwrap();
        for alg in ALL_ALGS {
            let result = decode(&g, &sigma, &spec(alg)).unwrap();
            for (it, est) in result
                .trajectory
                .as_ref()
                .unwrap()
                .iter()
                .enumerate()
            {
                for c in 0..cols {
                    assert_eq!(
                        est.get(c),
                        est.get(cols + c),
                        "trial {trial} {alg:?}: asymmetric estimate at iter {it}, column {c}"
                    );
                }
            }
        }
    }
}

#[test]
fn spec_format_parse_roundtrip_covers_all_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..200 {
        let alg = ALL_ALGS[rng.gen_range(0..3)];
        let layers = match rng.gen_range(0..3) {
            0 => LayerPlan::Seq,
            1 => LayerPlan::Halves,
            _ => {
                let n = rng.gen_range(2usize..6) * 2;
                let mut idx: Vec<u32> = (0..n as u32).collect();
                idx.shuffle(&mut rng);
                let cut = rng.gen_range(1..n);
                LayerPlan::Explicit(vec![idx[..cut].to_vec(), idx[cut..].to_vec()])
            }
        };
        let spec = DecoderSpec {
            algorithm: alg,
            schedule: if rng.gen_bool(0.5) {
                Schedule::Flooding
            } else {
                Schedule::ColumnLayered(layers)
            },
            max_iters: rng.gen_range(1..200),
            channel_p: rng.gen_range(0.001..0.49),
            msa_scale: rng.gen_range(0.1..=1.0),
            quantization: if rng.gen_bool(0.5) {
                Some(rng.gen_range(1..12))
            } else {
                None
            },
            record_trajectory: rng.gen_bool(0.5),
        };
        let text = spec.format();
        let back = DecoderSpec::parse(&text).unwrap();
        assert_eq!(back, spec, "roundtrip failed for:\n{text}");
    }
}
