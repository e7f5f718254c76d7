//! Cycle census / girth property tests. The DFS-based census is checked
//! against an independent subset dynamic program that counts Hamiltonian
//! cycles per node subset of the flattened bipartite graph.

use proptest::prelude::*;
use qtrap_core::tanner::TannerGraph;
use qtrap_core::BitMatrix;

/// Counts simple cycles per length in the flattened (VN+CN) graph by subset
/// DP: for each subset, Hamiltonian paths from the subset's minimum node are
/// extended one node at a time; paths whose endpoint closes back to the root
/// count the subset's Hamiltonian cycles (each one twice, once per
/// orientation).
fn subset_dp_cycle_counts(adj: &[Vec<usize>]) -> Vec<u64> {
    let n = adj.len();
    assert!(n <= 20, "subset DP oracle is exponential in node count");
    let mut by_len = vec![0u64; n + 1];
    let full = 1usize << n;
    // dp[mask][v]: simple paths covering exactly `mask`, starting at the
    // minimum node of `mask`, ending at v.
    let mut dp = vec![0u64; full * n];
    for root in 0..n {
        dp[(1 << root) * n + root] = 1;
    }
    for mask in 1..full {
        let root = mask.trailing_zeros() as usize;
        for v in 0..n {
            let paths = dp[mask * n + v];
            if paths == 0 {
                continue;
            }
            if mask.count_ones() >= 3 && adj[v].contains(&root) {
                by_len[mask.count_ones() as usize] += paths;
            }
            for &u in &adj[v] {
                if u > root && mask & (1 << u) == 0 {
                    dp[(mask | 1 << u) * n + u] += paths;
                }
            }
        }
    }
    for c in by_len.iter_mut() {
        *c /= 2; // each cycle was counted in both orientations
    }
    by_len
}

/// Flattens a Tanner graph: nodes 0..n_vns are VNs, then CNs.
fn flat_adjacency(g: &TannerGraph) -> Vec<Vec<usize>> {
    let nv = g.n_vns();
    let mut adj = vec![Vec::new(); nv + g.n_cns()];
    for v in 0..nv as u32 {
        for &c in g.vn_neighbors(v) {
            adj[v as usize].push(nv + c as usize);
            adj[nv + c as usize].push(v as usize);
        }
    }
    adj
}

fn check_census_against_dp(h: &BitMatrix) -> Result<(), TestCaseError> {
    let g = TannerGraph::from_parity(h);
    let nodes = g.n_vns() + g.n_cns();
    let oracle = subset_dp_cycle_counts(&flat_adjacency(&g));
    let census = g.cycle_census(nodes);
    for len in 0..=nodes {
        let want = oracle[len];
        let got = census.count(len);
        prop_assert_eq!(
            got,
            want,
            "cycle count mismatch at length {} (census {:?})",
            len,
            census
        );
        if len % 2 == 1 {
            prop_assert_eq!(want, 0, "odd-length cycle in a bipartite graph");
        }
    }
    // Girth = shortest nonzero length in the full census.
    let expected_girth = (0..=nodes).find(|&l| oracle[l] > 0);
    prop_assert_eq!(g.girth(), expected_girth);
    // The per-cycle listing must agree with the census in aggregate.
    let sets = g.cycle_sets(nodes);
    for len in (4..=nodes).step_by(2) {
        prop_assert_eq!(
            sets.iter().filter(|s| s.len == len).count() as u64,
            oracle[len]
        );
    }
    // And every reported cycle must be a cycle: its VN set induces a
    // subgraph where some closed path of that length exists — verified by
    // re-censusing the induced subgraph.
    for s in sets.iter().take(50) {
        let induced = g.induced_subgraph(&s.vns).unwrap();
        prop_assert!(induced.graph.cycle_census(s.len).count(s.len) > 0);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn census_matches_subset_dp_on_random_graphs(
        (rows, cols, bits) in (2usize..=6, 2usize..=6)
            .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(0u8..=1, r * c))),
    ) {
        let dense: Vec<Vec<u8>> = (0..rows).map(|r| bits[r * cols..(r + 1) * cols].to_vec()).collect();
        let h = BitMatrix::from_dense(&dense).unwrap();
        check_census_against_dp(&h)?;
    }

    #[test]
    fn census_matches_subset_dp_on_denser_graphs(
        bits in prop::collection::vec(0u8..=1, 8 * 8),
    ) {
        // 8x8 with density 1/2: flattened 16-node graphs, the oracle's
        // comfort limit.
        let dense: Vec<Vec<u8>> = (0..8).map(|r| bits[r * 8..(r + 1) * 8].to_vec()).collect();
        let h = BitMatrix::from_dense(&dense).unwrap();
        let g = TannerGraph::from_parity(&h);
        let oracle = subset_dp_cycle_counts(&flat_adjacency(&g));
        let census = g.cycle_census(16);
        for len in 0..=16 {
            prop_assert_eq!(census.count(len), oracle[len]);
        }
    }
}

#[test]
fn census_matches_subset_dp_on_known_shapes() {
    // Complete bipartite 3x3: C(3,2)^2 four-cycles = 9, 6 six-cycles
    // (3!·2!/2 directed hexagons / 2... verified by the DP itself), etc.
    let k33 = BitMatrix::from_dense(&vec![vec![1u8; 3]; 3]).unwrap();
    check_census_against_dp(&k33).unwrap();

    // Length-6 ring: a single 12-cycle and nothing shorter.
    let mut ring = BitMatrix::zeros(6, 6);
    for i in 0..6 {
        ring.set(i, i, true);
        ring.set(i, (i + 1) % 6, true);
    }
    let g = TannerGraph::from_parity(&ring);
    assert_eq!(g.girth(), Some(12));
    assert_eq!(g.cycle_census(12).count(12), 1);
    check_census_against_dp(&ring).unwrap();
}
