//! Randomized search for an 18x24 (3,4)-regular girth-6 parity-check matrix
//! matching the published statistics of the reference [24,6,10] LDPC code:
//! 54 six-cycles, 160 eight-cycles, k=6, d=10, column-graph trapping sets
//! (4,2)=30, (5,1)=10, (5,3)=170 (profile x^6+x^8+x^10) + 15 (profile 3x^8),
//! and row-graph trapping sets (4,4)=4, (5,4)=2+5 by profile. Simulated
//! annealing over degree-preserving double edge swaps that keep the graph
//! simple and 4-cycle-free.
//!
//! The annealing objective uses fast structure counters instead of the
//! general trapping-set search: with girth 6 and the degree-2 check cap,
//! two variable nodes share at most one check, so each target class is a
//! fixed shape in the "link graph" whose vertices are VNs and whose edges
//! are checks of induced degree two. `--selftest` cross-checks the fast
//! counters against the general census on random states.

use anyhow::{bail, Result};
use clap::Parser;
use qtrap_core::alist::save_alist;
use qtrap_core::sim::mix_seed;
use qtrap_core::tanner::TannerGraph;
use qtrap_core::trapping::{find_classical_ts, group_census};
use qtrap_core::BitMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;

const N_VNS: usize = 24;
const N_CNS: usize = 18;
const VN_DEG: usize = 3;
const CN_DEG: usize = 4;
const NO_LINK: u8 = u8::MAX;

#[derive(Parser)]
#[command(about = "Anneal toward the reference [24,6,10] constituent matrix")]
struct Args {
    /// Base RNG seed; chain i of round r uses a mix of (seed, r*chains+i).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Parallel annealing chains.
    #[arg(long, default_value_t = 8)]
    chains: u64,
    /// Proposals per chain before restarting with a fresh seed.
    #[arg(long, default_value_t = 400_000)]
    iters: u64,
    /// Rounds of restarts across all chains.
    #[arg(long, default_value_t = 50)]
    rounds: u64,
    /// Output alist path.
    #[arg(long, default_value = "data/c24.alist")]
    out: PathBuf,
    /// Print progress every this many proposals.
    #[arg(long, default_value_t = 50_000)]
    report_every: u64,
    /// Compare fast counters against the general census on random states.
    #[arg(long, default_value_t = false)]
    selftest: bool,
    /// Time the initialization and one evaluation, then exit.
    #[arg(long, default_value_t = false)]
    bench_eval: bool,
}

#[derive(Clone)]
struct State {
    /// CN -> VN list (unsorted).
    cn_vns: Vec<Vec<u32>>,
    /// CN -> VN membership bitmask.
    cn_mask: Vec<u32>,
    /// VN -> CN list.
    vn_cns: Vec<Vec<u32>>,
}

impl State {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        // Random simple (3,4)-regular bipartite pairing by repeated shuffles,
        // then descend to zero 4-cycles.
        loop {
            let mut vn_slots: Vec<u32> = (0..N_VNS as u32)
                .flat_map(|v| std::iter::repeat(v).take(VN_DEG))
                .collect();
            vn_slots.shuffle(rng);
            let mut cn_vns = vec![Vec::with_capacity(CN_DEG); N_CNS];
            for (i, &v) in vn_slots.iter().enumerate() {
                cn_vns[i / CN_DEG].push(v);
            }
            if cn_vns
                .iter()
                .all(|vs| (1..vs.len()).all(|i| !vs[..i].contains(&vs[i])))
            {
                let mut s = Self::from_cn_vns(cn_vns);
                if s.clear_four_cycles(rng) {
                    return s;
                }
            }
        }
    }

    fn from_cn_vns(cn_vns: Vec<Vec<u32>>) -> Self {
        let cn_mask = cn_vns
            .iter()
            .map(|vs| vs.iter().fold(0u32, |m, &v| m | 1 << v))
            .collect();
        let mut vn_cns = vec![Vec::new(); N_VNS];
        for (c, vs) in cn_vns.iter().enumerate() {
            for &v in vs {
                vn_cns[v as usize].push(c as u32);
            }
        }
        Self {
            cn_vns,
            cn_mask,
            vn_cns,
        }
    }

    fn four_cycle_count(&self) -> u64 {
        let mut n = 0;
        for c1 in 0..N_CNS {
            for c2 in c1 + 1..N_CNS {
                let shared = (self.cn_mask[c1] & self.cn_mask[c2]).count_ones() as u64;
                n += shared * shared.saturating_sub(1) / 2;
            }
        }
        n
    }

    /// Descends on the number of 4-cycles with random double swaps.
    /// Returns false when stuck (caller restarts from a fresh pairing).
    fn clear_four_cycles(&mut self, rng: &mut ChaCha8Rng) -> bool {
        let mut current = self.four_cycle_count();
        let mut stall = 0u32;
        while current > 0 {
            let Some((c1, i1, c2, i2)) = self.propose_swap(rng) else {
                continue;
            };
            self.apply_swap(c1, i1, c2, i2);
            let next = self.four_cycle_count();
            if next <= current {
                stall = if next < current { 0 } else { stall + 1 };
                current = next;
            } else {
                self.apply_swap(c1, i1, c2, i2); // revert
                stall += 1;
            }
            if stall > 50_000 {
                return false;
            }
        }
        true
    }

    /// Picks a degree-preserving double swap keeping the graph simple:
    /// exchanges cn_vns[c1][i1] with cn_vns[c2][i2].
    fn propose_swap(&self, rng: &mut ChaCha8Rng) -> Option<(usize, usize, usize, usize)> {
        for _ in 0..64 {
            let c1 = rng.gen_range(0..N_CNS);
            let c2 = rng.gen_range(0..N_CNS);
            if c1 == c2 {
                continue;
            }
            let i1 = rng.gen_range(0..CN_DEG);
            let i2 = rng.gen_range(0..CN_DEG);
            let v1 = self.cn_vns[c1][i1];
            let v2 = self.cn_vns[c2][i2];
            if v1 == v2
                || self.cn_mask[c1] & (1 << v2) != 0
                || self.cn_mask[c2] & (1 << v1) != 0
            {
                continue;
            }
            return Some((c1, i1, c2, i2));
        }
        None
    }

    fn apply_swap(&mut self, c1: usize, i1: usize, c2: usize, i2: usize) {
        let v1 = self.cn_vns[c1][i1];
        let v2 = self.cn_vns[c2][i2];
        self.cn_vns[c1][i1] = v2;
        self.cn_vns[c2][i2] = v1;
        self.cn_mask[c1] ^= (1 << v1) | (1 << v2);
        self.cn_mask[c2] ^= (1 << v1) | (1 << v2);
        let swap_in = |list: &mut [u32], from: u32, to: u32| {
            let p = list.iter().position(|&c| c == from).unwrap();
            list[p] = to;
        };
        swap_in(&mut self.vn_cns[v1 as usize], c1 as u32, c2 as u32);
        swap_in(&mut self.vn_cns[v2 as usize], c2 as u32, c1 as u32);
    }

    /// Would this swap create a 4-cycle? Checked on the post-swap masks.
    fn swap_creates_four_cycle(&mut self, c1: usize, i1: usize, c2: usize, i2: usize) -> bool {
        self.apply_swap(c1, i1, c2, i2);
        let bad = [c1, c2].iter().any(|&c| {
            (0..N_CNS).any(|other| {
                other != c && (self.cn_mask[c] & self.cn_mask[other]).count_ones() >= 2
            })
        });
        self.apply_swap(c1, i1, c2, i2); // revert
        bad
    }

    fn matrix(&self) -> BitMatrix {
        let rows: Vec<Vec<u8>> = self
            .cn_vns
            .iter()
            .map(|vs| {
                let mut row = vec![0u8; N_VNS];
                for &v in vs {
                    row[v as usize] = 1;
                }
                row
            })
            .collect();
        BitMatrix::from_dense(&rows).expect("well-formed rows")
    }
}

/// The "link graph" of one side: vertices are that side's VNs, edges are
/// opposite-side nodes of induced degree two. With girth >= 6 each vertex
/// pair has at most one link.
struct LinkGraph {
    n: usize,
    adj: Vec<u32>,
    /// link[u * n + v] = opposite-side node id joining u and v, or NO_LINK.
    link: Vec<u8>,
    /// Opposite-side membership masks (for the degree-cap check).
    opp_masks: Vec<u32>,
}

impl LinkGraph {
    /// Builds from opposite-side supports. Every support has size <= 4 and
    /// any two supports share at most one element (no 4-cycles).
    fn build(n: usize, supports: &[Vec<u32>]) -> Self {
        let mut adj = vec![0u32; n];
        let mut link = vec![NO_LINK; n * n];
        for (c, vs) in supports.iter().enumerate() {
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    let (u, v) = (vs[i] as usize, vs[j] as usize);
                    adj[u] |= 1 << v;
                    adj[v] |= 1 << u;
                    link[u * n + v] = c as u8;
                    link[v * n + u] = c as u8;
                }
            }
        }
        let opp_masks = supports
            .iter()
            .map(|vs| vs.iter().fold(0u32, |m, &v| m | 1 << v))
            .collect();
        Self {
            n,
            adj,
            link,
            opp_masks,
        }
    }

    #[inline]
    fn linked(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    #[inline]
    fn link_of(&self, u: usize, v: usize) -> u8 {
        self.link[u * self.n + v]
    }

    /// No opposite-side node may cover three or more subset members.
    fn cap_ok(&self, subset: u32) -> bool {
        self.opp_masks
            .iter()
            .all(|&m| (m & subset).count_ones() <= 2)
    }

    fn bits(mask: u32) -> impl Iterator<Item = usize> {
        std::iter::successors(Some(mask), |&m| Some(m & (m - 1)))
            .take_while(|&m| m != 0)
            .map(|m| m.trailing_zeros() as usize)
    }

    /// Tanner 6- and 8-cycle counts: triangles / quadrilaterals whose links
    /// are pairwise distinct opposite-side nodes.
    fn cycle_counts(&self) -> (u64, u64) {
        let mut c6 = 0;
        for u in 0..self.n {
            for v in Self::bits(self.adj[u] & !((1 << (u + 1)) - 1)) {
                for w in Self::bits(self.adj[u] & self.adj[v] & !((1 << (v + 1)) - 1)) {
                    let (a, b, c) = (self.link_of(u, v), self.link_of(u, w), self.link_of(v, w));
                    if a != b && a != c && b != c {
                        c6 += 1;
                    }
                }
            }
        }
        // A quadrilateral u-w-v-x is determined by its unordered diagonal
        // pair {(u,v),(w,x)}; count each once from the lex-smaller diagonal.
        // Diagonals may or may not be edges (chords do not affect cycles).
        let mut c8 = 0;
        for u in 0..self.n {
            for v in u + 1..self.n {
                let common = self.adj[u] & self.adj[v];
                for w in Self::bits(common) {
                    for x in Self::bits(common & !((1u32 << (w + 1)) - 1)) {
                        if (u, v) < (w, x) {
                            let links = [
                                self.link_of(u, w),
                                self.link_of(u, x),
                                self.link_of(v, w),
                                self.link_of(v, x),
                            ];
                            if distinct(&links) {
                                c8 += 1;
                            }
                        }
                    }
                }
            }
        }
        (c6, c8)
    }

    /// K4-minus-an-edge subgraphs (induced, cap-respecting): the column-side
    /// (4,2) class with cycle profile 2x^6+x^8.
    fn count_k4_minus_e(&self) -> u64 {
        let mut n = 0;
        self.for_each_k4_minus_e(|_, _, _, _| n += 1);
        n
    }

    /// Visits each K4-minus-e as (a, b, c, d): a~b the adjacent degree-3
    /// pair, c<d the non-adjacent degree-2 pair.
    fn for_each_k4_minus_e(&self, mut f: impl FnMut(usize, usize, usize, usize)) {
        for a in 0..self.n {
            for b in Self::bits(self.adj[a] & !((1u32 << (a + 1)) - 1)) {
                let common = self.adj[a] & self.adj[b];
                for c in Self::bits(common) {
                    for d in Self::bits(common & !((1u32 << (c + 1)) - 1)) {
                        if !self.linked(c, d) {
                            let subset = (1 << a) | (1 << b) | (1 << c) | (1 << d);
                            if self.cap_ok(subset) {
                                f(a, b, c, d);
                            }
                        }
                    }
                }
            }
        }
    }

    /// Column-side (5,1) class, profile 2x^6+3x^8+2x^10: K4-minus-e plus a
    /// fifth vertex adjacent to exactly the non-adjacent pair.
    fn count_5_1(&self) -> u64 {
        let mut n = 0;
        self.for_each_k4_minus_e(|a, b, c, d| {
            let ext = self.adj[c] & self.adj[d] & !self.adj[a] & !self.adj[b];
            for e in Self::bits(ext) {
                if e != a && e != b {
                    let subset = (1 << a) | (1 << b) | (1 << c) | (1 << d) | (1 << e);
                    if self.cap_ok(subset) {
                        n += 1;
                    }
                }
            }
        });
        n
    }

    /// Column-side (5,3) "house" topology, profile x^6+x^8+x^10: a triangle
    /// sharing one edge with a quadrilateral.
    fn count_house(&self) -> u64 {
        let mut n = 0;
        for b in 0..self.n {
            for e in Self::bits(self.adj[b] & !((1u32 << (b + 1)) - 1)) {
                for a in Self::bits(self.adj[b] & self.adj[e]) {
                    // c adjacent to b only; d adjacent to e only; c~d.
                    let cs = self.adj[b] & !self.adj[e] & !self.adj[a];
                    let ds = self.adj[e] & !self.adj[b] & !self.adj[a];
                    for c in Self::bits(cs) {
                        if c == a || c == e {
                            continue;
                        }
                        for d in Self::bits(ds & self.adj[c]) {
                            if d == a || d == b {
                                continue;
                            }
                            let subset =
                                (1 << a) | (1 << b) | (1 << c) | (1 << d) | (1 << e);
                            if self.cap_ok(subset) {
                                n += 1;
                            }
                        }
                    }
                }
            }
        }
        n
    }

    /// Column-side (5,3) K_{2,3} topology, profile 3x^8.
    fn count_k23(&self) -> u64 {
        let mut n = 0;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.linked(u, v) {
                    continue;
                }
                let common = self.adj[u] & self.adj[v];
                for w1 in Self::bits(common) {
                    for w2 in Self::bits(common & !((1u32 << (w1 + 1)) - 1) & !self.adj[w1]) {
                        for w3 in Self::bits(
                            common & !((1u32 << (w2 + 1)) - 1) & !self.adj[w1] & !self.adj[w2],
                        ) {
                            let subset =
                                (1 << u) | (1 << v) | (1 << w1) | (1 << w2) | (1 << w3);
                            if self.cap_ok(subset) {
                                n += 1;
                            }
                        }
                    }
                }
            }
        }
        n
    }

    /// Collects all K4 subsets (sorted tuples); the row-side (4,4) class,
    /// profile 4x^6+3x^8.
    fn k4s(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in Self::bits(self.adj[a] & !((1u32 << (a + 1)) - 1)) {
                let common = self.adj[a] & self.adj[b] & !((1u32 << (b + 1)) - 1);
                for c in Self::bits(common) {
                    for d in Self::bits(common & self.adj[c] & !((1u32 << (c + 1)) - 1)) {
                        let subset = (1 << a) | (1 << b) | (1 << c) | (1 << d);
                        if self.cap_ok(subset) {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Row-side (5,4) wheel topology, profile 4x^6+5x^8+4x^10: a hub adjacent
    /// to all four vertices of an induced quadrilateral.
    fn count_wheel(&self) -> u64 {
        let mut twice = 0;
        for h in 0..self.n {
            let nbrs = self.adj[h];
            for a in Self::bits(nbrs) {
                for c in Self::bits(nbrs & !((1u32 << (a + 1)) - 1) & !self.adj[a]) {
                    let bd = nbrs & self.adj[a] & self.adj[c];
                    for b in Self::bits(bd) {
                        for d in Self::bits(bd & !((1u32 << (b + 1)) - 1) & !self.adj[b]) {
                            let subset =
                                (1 << h) | (1 << a) | (1 << b) | (1 << c) | (1 << d);
                            if self.cap_ok(subset) {
                                twice += 1;
                            }
                        }
                    }
                }
            }
        }
        // Each wheel is found once per diagonal of its rim quadrilateral.
        debug_assert!(twice % 2 == 0);
        twice / 2
    }

    /// Row-side (5,4) K4-plus-vertex topology, profile 5x^6+5x^8+2x^10: a K4
    /// with a fifth vertex adjacent to exactly one edge's endpoints.
    fn count_k4_plus_edge_vertex(&self, k4s: &[[usize; 4]]) -> u64 {
        let mut n = 0;
        for k4 in k4s {
            for i in 0..4 {
                for j in i + 1..4 {
                    let (u, v) = (k4[i], k4[j]);
                    let others: Vec<usize> =
                        (0..4).filter(|&t| t != i && t != j).map(|t| k4[t]).collect();
                    let ext = self.adj[u]
                        & self.adj[v]
                        & !self.adj[others[0]]
                        & !self.adj[others[1]];
                    for e in Self::bits(ext) {
                        if !k4.contains(&e) {
                            let subset = (1 << k4[0])
                                | (1 << k4[1])
                                | (1 << k4[2])
                                | (1 << k4[3])
                                | (1 << e);
                            if self.cap_ok(subset) {
                                n += 1;
                            }
                        }
                    }
                }
            }
        }
        n
    }
}

fn distinct(xs: &[u8; 4]) -> bool {
    xs[0] != xs[1]
        && xs[0] != xs[2]
        && xs[0] != xs[3]
        && xs[1] != xs[2]
        && xs[1] != xs[3]
        && xs[2] != xs[3]
}

/// Column supports of the transpose (rows of H indexed by the VN they share).
fn row_side_supports(state: &State) -> Vec<Vec<u32>> {
    state
        .vn_cns
        .iter()
        .map(|cs| cs.to_vec())
        .collect()
}

struct Stats {
    c6: u64,
    c8: u64,
    col: [u64; 4],
    row: [u64; 3],
    k: usize,
    d: usize,
}

impl Stats {
    fn compute(state: &State) -> Self {
        let col_graph = LinkGraph::build(N_VNS, &state.cn_vns);
        let (c6, c8) = col_graph.cycle_counts();
        let col = [
            col_graph.count_k4_minus_e(),
            col_graph.count_5_1(),
            col_graph.count_house(),
            col_graph.count_k23(),
        ];
        let row_graph = LinkGraph::build(N_CNS, &row_side_supports(state));
        let k4s = row_graph.k4s();
        let row = [
            k4s.len() as u64,
            row_graph.count_wheel(),
            row_graph.count_k4_plus_edge_vertex(&k4s),
        ];
        let h = state.matrix();
        let k = N_VNS - h.rank();
        let d = if k == 6 { min_codeword_weight(&h) } else { 0 };
        Self {
            c6,
            c8,
            col,
            row,
            k,
            d,
        }
    }

    fn score(&self) -> u64 {
        let mut s = 0;
        s += 1_000 * self.c6.abs_diff(54);
        s += 100 * self.c8.abs_diff(160);
        for (got, want) in self.col.iter().zip([30u64, 10, 170, 15]) {
            s += 400 * got.abs_diff(want);
        }
        for (got, want) in self.row.iter().zip([4u64, 2, 5]) {
            s += 400 * got.abs_diff(want);
        }
        s += 50_000 * (self.k as u64).abs_diff(6);
        if self.k == 6 {
            s += 15_000 * 10u64.saturating_sub(self.d as u64);
        }
        s
    }

    fn summary(&self) -> String {
        format!(
            "c6={} c8={} col={:?} row={:?} k={} d={}",
            self.c6, self.c8, self.col, self.row, self.k, self.d
        )
    }
}

fn min_codeword_weight(h: &BitMatrix) -> usize {
    let kernel = h.kernel_basis();
    let k = kernel.rows();
    if k == 0 || k > 12 {
        return 0;
    }
    let mut best = usize::MAX;
    for combo in 1u32..1 << k {
        let mut word = qtrap_core::BitVec::zeros(h.cols());
        for i in 0..k {
            if combo >> i & 1 == 1 {
                word.xor_assign(&kernel.row(i));
            }
        }
        best = best.min(word.weight());
    }
    best
}

/// Reference counts from the general trapping-set census (slow path).
fn census_reference(state: &State) -> ([u64; 4], [u64; 3]) {
    let keys_col = [
        (4usize, 2usize, "2x^6+x^8"),
        (5, 1, "2x^6+3x^8+2x^10"),
        (5, 3, "x^6+x^8+x^10"),
        (5, 3, "3x^8"),
    ];
    let keys_row = [
        (4usize, 4usize, "4x^6+3x^8"),
        (5, 4, "4x^6+5x^8+4x^10"),
        (5, 4, "5x^6+5x^8+2x^10"),
    ];
    let g = TannerGraph::from_check_supports(N_VNS, &state.cn_vns).expect("graph");
    let mut col = [0u64; 4];
    for r in group_census(&find_classical_ts(&g, 5, 5, Some(2)).expect("census")) {
        for (i, k) in keys_col.iter().enumerate() {
            if r.a == k.0 && r.b == k.1 && r.profile.poly() == k.2 {
                col[i] += r.count as u64;
            }
        }
    }
    let h = state.matrix();
    let gt = TannerGraph::from_parity(&h.transpose());
    let mut row = [0u64; 3];
    for r in group_census(&find_classical_ts(&gt, 5, 5, Some(2)).expect("census")) {
        for (i, k) in keys_row.iter().enumerate() {
            if r.a == k.0 && r.b == k.1 && r.profile.poly() == k.2 {
                row[i] += r.count as u64;
            }
        }
    }
    (col, row)
}

fn selftest(seed: u64, cases: u64) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let state = State::random(&mut rng);
        let stats = Stats::compute(&state);
        let g = TannerGraph::from_check_supports(N_VNS, &state.cn_vns).expect("graph");
        let prof = g.cycle_census(8);
        let (col, row) = census_reference(&state);
        if (prof.count(6), prof.count(8)) != (stats.c6, stats.c8) {
            bail!(
                "case {case}: cycle mismatch fast=({},{}) census=({},{})",
                stats.c6,
                stats.c8,
                prof.count(6),
                prof.count(8)
            );
        }
        if col != stats.col || row != stats.row {
            bail!(
                "case {case}: census mismatch fast col={:?} row={:?} vs census col={col:?} row={row:?}",
                stats.col,
                stats.row
            );
        }
        eprintln!(
            "case {case}: ok ({} + {:?} / {:?})",
            stats.c6, stats.col, stats.row
        );
    }
    eprintln!("selftest passed ({cases} cases)");
    Ok(())
}

fn verify_final(state: &State) -> Result<BitMatrix> {
    use qtrap_core::codes::hp_construct;
    let stats = Stats::compute(state);
    if stats.score() != 0 {
        bail!("final state does not match targets: {}", stats.summary());
    }
    let (col, row) = census_reference(state);
    if col != [30, 10, 170, 15] || row != [4, 2, 5] {
        bail!("general census disagrees: col={col:?} row={row:?}");
    }
    let h = state.matrix();
    let g = TannerGraph::from_check_supports(N_VNS, &state.cn_vns).expect("graph");
    if g.girth() != Some(6) {
        bail!("girth is {:?}, want 6", g.girth());
    }
    let code = hp_construct(&h, &h)?;
    let hp_graph = TannerGraph::from_parity(&code.h_x);
    let prof = hp_graph.cycle_census(8);
    eprintln!(
        "product: n={} k={} chi6={} chi8={}",
        code.n,
        code.k,
        prof.count(6),
        prof.count(8)
    );
    if (code.n, code.k, prof.count(6), prof.count(8)) != (900, 36, 2268, 14496) {
        bail!("product-level statistics do not match");
    }
    let records = find_classical_ts(&hp_graph, 5, 5, Some(2))?;
    let mut table: Vec<(usize, usize, String, u64)> = Vec::new();
    for r in group_census(&records) {
        table.push((r.a, r.b, r.profile.poly(), r.count as u64));
    }
    eprintln!("product census: {table:?}");
    let expect: &[(usize, usize, &str, u64)] = &[
        (4, 2, "2x^6+x^8", 720),
        (4, 4, "4x^6+3x^8", 72),
        (5, 1, "2x^6+3x^8+2x^10", 240),
        (5, 3, "x^6+x^8+x^10", 4080),
        (5, 3, "3x^8", 360),
        (5, 4, "4x^6+5x^8+4x^10", 36),
        (5, 4, "5x^6+5x^8+2x^10", 90),
        (5, 5, "3x^8", 5184),
    ];
    for &(a, b, poly, want) in expect {
        let got: u64 = table
            .iter()
            .filter(|(ra, rb, rp, _)| *ra == a && *rb == b && rp == poly)
            .map(|(_, _, _, c)| *c)
            .sum();
        if got != want {
            bail!("product census ({a},{b}) {poly}: got {got}, want {want}");
        }
    }
    eprintln!("product census matches the reference table");
    Ok(h)
}

/// Applies `n` random simple, 4-cycle-free swaps (basin-hopping kick).
fn perturb(mut state: State, n: usize, rng: &mut ChaCha8Rng) -> State {
    let mut done = 0;
    let mut attempts = 0;
    while done < n && attempts < 10_000 {
        attempts += 1;
        let Some((c1, i1, c2, i2)) = state.propose_swap(rng) else {
            continue;
        };
        if state.swap_creates_four_cycle(c1, i1, c2, i2) {
            continue;
        }
        state.apply_swap(c1, i1, c2, i2);
        // Keep kicks inside the high-quality basin: undo any swap that
        // breaks the dimension or distance targets (both cheap to check).
        let stats = Stats::compute(&state);
        if stats.k != 6 || stats.d < 10 {
            state.apply_swap(c1, i1, c2, i2);
            continue;
        }
        done += 1;
    }
    state
}

/// All simple, 4-cycle-free edge swaps available from `state`.
fn valid_swaps(state: &mut State) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::with_capacity(2_600);
    for c1 in 0..N_CNS {
        for c2 in c1 + 1..N_CNS {
            for i1 in 0..CN_DEG {
                for i2 in 0..CN_DEG {
                    let v1 = state.cn_vns[c1][i1];
                    let v2 = state.cn_vns[c2][i2];
                    if v1 == v2
                        || state.cn_mask[c1] & (1 << v2) != 0
                        || state.cn_mask[c2] & (1 << v1) != 0
                        || state.swap_creates_four_cycle(c1, i1, c2, i2)
                    {
                        continue;
                    }
                    out.push((c1, i1, c2, i2));
                }
            }
        }
    }
    out
}

/// Steepest descent over the complete swap neighborhood; leaves `state` at
/// the local minimum (or an exact match) and returns its score.
fn full_descent(state: &mut State, stop: &AtomicBool) -> u64 {
    let mut cur = Stats::compute(state).score();
    while cur != 0 && !stop.load(Ordering::Relaxed) {
        let mut best: Option<(u64, (usize, usize, usize, usize))> = None;
        for mv in valid_swaps(state) {
            let (c1, i1, c2, i2) = mv;
            state.apply_swap(c1, i1, c2, i2);
            let s = Stats::compute(state).score();
            state.apply_swap(c1, i1, c2, i2);
            if best.map_or(true, |(bs, _)| s < bs) {
                best = Some((s, mv));
            }
        }
        match best {
            Some((s, (c1, i1, c2, i2))) if s < cur => {
                state.apply_swap(c1, i1, c2, i2);
                cur = s;
            }
            _ => break,
        }
    }
    cur
}

/// Bounded two-swap lookahead from a local minimum: follows each of the
/// `max_first` most promising first swaps with the best single reply.
/// Returns an improvement over `start`'s score when one exists.
fn depth_two(start: &State, max_first: usize, stop: &AtomicBool) -> Option<(u64, State)> {
    let mut state = start.clone();
    let cur = Stats::compute(&state).score();
    let mut firsts: Vec<(u64, (usize, usize, usize, usize))> = Vec::new();
    for mv in valid_swaps(&mut state) {
        let (c1, i1, c2, i2) = mv;
        state.apply_swap(c1, i1, c2, i2);
        firsts.push((Stats::compute(&state).score(), mv));
        state.apply_swap(c1, i1, c2, i2);
    }
    firsts.sort_unstable_by_key(|&(s, _)| s);
    firsts.truncate(max_first);
    let mut best: Option<(u64, State)> = None;
    for &(_, (c1, i1, c2, i2)) in &firsts {
        if stop.load(Ordering::Relaxed) {
            return best;
        }
        let mut child = state.clone();
        child.apply_swap(c1, i1, c2, i2);
        for mv in valid_swaps(&mut child) {
            let (d1, j1, d2, j2) = mv;
            child.apply_swap(d1, j1, d2, j2);
            let s = Stats::compute(&child).score();
            if s < best.as_ref().map_or(cur, |(bs, _)| *bs) {
                best = Some((s, child.clone()));
                if s == 0 {
                    return best;
                }
            }
            child.apply_swap(d1, j1, d2, j2);
        }
    }
    best
}

/// One annealing round. Returns the exact-match state (score 0) if found,
/// plus the best (score, state) seen for cross-round basin hopping.
fn anneal(
    seed: u64,
    iters: u64,
    report_every: u64,
    chain: u64,
    stop: &AtomicBool,
    start: Option<State>,
) -> (Option<State>, Option<(u64, State)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeded = start.is_some();
    let mut state = start.unwrap_or_else(|| State::random(&mut rng));
    let mut current = Stats::compute(&state).score();
    let mut best = current;
    let mut best_state = state.clone();
    let (t0, t1): (f64, f64) = if seeded { (120.0, 4.0) } else { (2_500.0, 30.0) };
    let boost_cap = if seeded { 2.0 } else { 10.0 };
    let mut since_improve = 0u64;
    let mut temp_boost = 1.0f64;
    for it in 0..iters {
        if current == 0 {
            return (Some(state), None);
        }
        if it % 1024 == 0 && stop.load(Ordering::Relaxed) {
            return (None, None);
        }
        let Some((c1, i1, c2, i2)) = state.propose_swap(&mut rng) else {
            continue;
        };
        if state.swap_creates_four_cycle(c1, i1, c2, i2) {
            continue;
        }
        let temp = temp_boost * t0 * (t1 / t0).powf(it as f64 / iters as f64);
        state.apply_swap(c1, i1, c2, i2);
        let next = Stats::compute(&state).score();
        let accept = next <= current
            || rng.gen::<f64>() < (-((next - current) as f64) / temp).exp();
        if accept {
            current = next;
            if current < best {
                best = current;
                best_state = state.clone();
                since_improve = 0;
                temp_boost = 1.0;
            }
        } else {
            state.apply_swap(c1, i1, c2, i2);
        }
        since_improve += 1;
        if since_improve > 25_000 {
            temp_boost = (temp_boost * 2.0).min(boost_cap);
            since_improve = 0;
        }
        if it % report_every == 0 {
            let stats = Stats::compute(&state);
            eprintln!(
                "[chain {chain}{}] it={it} T={temp:.0} score={current} best={best} {}",
                if seeded { "*" } else { "" },
                stats.summary()
            );
        }
    }
    // Endgame: polish the round best with steepest descent, then chase any
    // remaining gap with two-swap lookaheads while they keep paying off.
    let mut polished = best_state.clone();
    let after = full_descent(&mut polished, stop);
    if after < best {
        best = after;
        best_state = polished;
    }
    if best == 0 {
        return (Some(best_state), None);
    }
    if best <= 4_000 {
        eprintln!("[chain {chain}] lookahead from score {best}");
        while !stop.load(Ordering::Relaxed) {
            let Some((s, st)) = depth_two(&best_state, 400, stop) else {
                break;
            };
            if s >= best {
                break;
            }
            best = s;
            best_state = st;
            if best == 0 {
                return (Some(best_state), None);
            }
            let mut p = best_state.clone();
            let after = full_descent(&mut p, stop);
            if after < best {
                best = after;
                best_state = p;
                if best == 0 {
                    return (Some(best_state), None);
                }
            }
            eprintln!("[chain {chain}] lookahead improved to {best}");
        }
    }
    (None, Some((best, best_state)))
}

fn main() -> Result<()> {
    let args = Args::parse();
    if args.selftest {
        return selftest(args.seed, 20);
    }
    if args.bench_eval {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let t = std::time::Instant::now();
        let state = State::random(&mut rng);
        eprintln!("init: {:?}", t.elapsed());
        let t = std::time::Instant::now();
        let n = 1000;
        let mut acc = 0u64;
        for _ in 0..n {
            acc = acc.wrapping_add(Stats::compute(&state).score());
        }
        eprintln!(
            "evaluate: {:?}/call (x{n}, acc {acc})",
            t.elapsed() / n as u32
        );
        let stats = Stats::compute(&state);
        eprintln!("score={} {}", stats.score(), stats.summary());
        return Ok(());
    }

    let stop = AtomicBool::new(false);
    let winner: Mutex<Option<State>> = Mutex::new(None);
    // Best (score, state) across all finished rounds; later rounds restart
    // half their chains from a perturbed copy (basin hopping).
    let global_best: Mutex<Option<(u64, State)>> = Mutex::new(None);
    rayon::ThreadPoolBuilder::new()
        .num_threads(args.chains as usize)
        .build()?
        .install(|| {
            rayon::scope(|scope| {
                for round in 0..args.rounds {
                    for chain in 0..args.chains {
                        let stop = &stop;
                        let winner = &winner;
                        let global_best = &global_best;
                        let seed = mix_seed(args.seed, round * args.chains + chain);
                        let iters = args.iters;
                        let report = args.report_every;
                        scope.spawn(move |_| {
                            if stop.load(Ordering::Relaxed) {
                                return;
                            }
                            let start = if round > 0 && chain % 2 == 1 {
                                let mut rng =
                                    ChaCha8Rng::seed_from_u64(mix_seed(seed, 0xb45));
                                let kicks = 2 + chain as usize / 2;
                                global_best
                                    .lock()
                                    .unwrap()
                                    .as_ref()
                                    .map(|(_, s)| perturb(s.clone(), kicks, &mut rng))
                            } else {
                                None
                            };
                            let (won, round_best) =
                                anneal(seed, iters, report, chain, stop, start);
                            if let Some(state) = won {
                                stop.store(true, Ordering::Relaxed);
                                *winner.lock().unwrap() = Some(state);
                                return;
                            }
                            if let Some((score, state)) = round_best {
                                let mut g = global_best.lock().unwrap();
                                if g.as_ref().map_or(true, |(gs, _)| score < *gs) {
                                    *g = Some((score, state));
                                }
                            }
                        });
                    }
                }
            });
        });

    let Some(state) = winner.into_inner().unwrap() else {
        bail!("no matching matrix found; increase --rounds or --iters");
    };
    let h = verify_final(&state)?;
    if let Some(dir) = args.out.parent() {
        std::fs::create_dir_all(dir)?;
    }
    save_alist(&args.out, &h)?;
    println!("wrote {}", args.out.display());
    Ok(())
}
