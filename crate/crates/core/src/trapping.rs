//! Trapping-set enumeration and decoder stress measurement.
//!
//! A trapping set is labeled `(a, b)`: a variable nodes whose induced
//! subgraph has b odd-degree check nodes. Two searches are provided:
//!
//! - [`find_classical_ts`]: all connected, cycle-containing VN subsets up to
//!   a size bound whose induced subgraph stays within an odd-check budget
//!   (optionally with a check-degree cap). Subsets are found by expanding
//!   simple-cycle seeds through shared check nodes, which covers every such
//!   subset because a connected subgraph containing a cycle can be grown
//!   from that cycle one adjacent VN at a time.
//! - [`find_symmetric_stabilizers`]: low-weight stabilizer-group elements
//!   (XOR combinations of opposite-side check rows) whose support has no
//!   odd check node and splits into two isomorphic halves sharing the same
//!   odd-check neighborhoods — the structures that trap symmetric flooding
//!   decoders on their half-weight degenerate errors.
//!
//! [`measure_ts`] injects every error pattern supported on a record and
//! reports the critical number (smallest failing weight) and strength
//! (number of failing patterns at that weight) against a chosen decoder.

use crate::codes::{CssCode, Side};
use crate::decoder::{DecoderSpec, SyndromeDecoder};
use crate::tanner::{CycleProfile, TannerGraph};
use crate::{BitVec, Error, Result};
use rayon::prelude::*;
use std::collections::HashSet;

/// Which search produced a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TsClass {
    Classical,
    SymmetricStabilizer,
}

impl TsClass {
    pub fn label(self) -> &'static str {
        match self {
            TsClass::Classical => "classical",
            TsClass::SymmetricStabilizer => "symmetric_stabilizer",
        }
    }
}

impl std::fmt::Display for TsClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One trapping set: VN subset, label, induced-cycle profile, and a
/// canonical topology key (equal keys ⇔ isomorphic induced subgraphs).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrappingSetRecord {
    pub vns: Vec<u32>,
    pub a: usize,
    pub b: usize,
    pub profile: CycleProfile,
    pub class: TsClass,
    pub topo_key: String,
}

/// Builds the record for a given VN set (sorted, deduplicated).
pub fn record_for(g: &TannerGraph, vns: &[u32], class: TsClass) -> Result<TrappingSetRecord> {
    let sub = g.induced_subgraph(vns)?;
    let a = sub.vn_ids.len();
    let profile = sub.graph.cycle_census((2 * a).min(12));
    let topo_key = topo_key_of(&sub.graph);
    Ok(TrappingSetRecord {
        a,
        b: sub.b(),
        profile,
        class,
        topo_key,
        vns: sub.vn_ids,
    })
}

// ---------------------------------------------------------------------------
// Canonical topology keys
// ---------------------------------------------------------------------------

/// Canonical key of a small bipartite graph. Exact for ≤ 6 VNs (minimum,
/// over VN relabelings within degree classes, of the sorted CN incidence
/// masks); an iterated neighborhood-refinement hash for 7..=16 VNs. Keys of
/// the two regimes never collide (distinct prefixes).
pub fn topo_key_of(g: &TannerGraph) -> String {
    let a = g.n_vns();
    assert!(a <= 16, "topology keys support at most 16 variable nodes");
    let mut degrees: Vec<usize> = (0..a as u32).map(|v| g.vn_degree(v)).collect();
    degrees.sort_unstable();
    let deg_part = degrees
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(".");
    if a <= 6 {
        let masks = canonical_masks(g);
        let mask_part = masks
            .iter()
            .map(|m| format!("{m:x}"))
            .collect::<Vec<_>>()
            .join(".");
        format!("a{a}:d{deg_part}:c{mask_part}")
    } else {
        format!("a{a}:d{deg_part}:w{:016x}", refinement_hash(g))
    }
}

/// Minimum sorted CN-mask vector over VN permutations within degree classes.
fn canonical_masks(g: &TannerGraph) -> Vec<u64> {
    let a = g.n_vns();
    let mut order: Vec<u32> = (0..a as u32).collect();
    order.sort_by_key(|&v| g.vn_degree(v));
    // Degree-class boundaries in `order`.
    let mut classes = Vec::new();
    let mut start = 0;
    for i in 1..=a {
        if i == a || g.vn_degree(order[i]) != g.vn_degree(order[start]) {
            classes.push((start, i));
            start = i;
        }
    }
    let mut best: Option<Vec<u64>> = None;
    let mut pos = vec![0u32; a];
    permute_within(&mut order, &classes, 0, &mut |perm| {
        for (i, &v) in perm.iter().enumerate() {
            pos[v as usize] = i as u32;
        }
        let mut masks: Vec<u64> = (0..g.n_cns() as u32)
            .map(|c| {
                g.cn_neighbors(c)
                    .iter()
                    .fold(0u64, |m, &v| m | 1 << pos[v as usize])
            })
            .collect();
        masks.sort_unstable();
        if best.as_ref().is_none_or(|b| masks < *b) {
            best = Some(masks);
        }
    });
    best.unwrap_or_default()
}

/// Recursively permutes `order` within each class range, invoking `f` on
/// every arrangement.
fn permute_within(
    order: &mut Vec<u32>,
    classes: &[(usize, usize)],
    class_idx: usize,
    f: &mut impl FnMut(&[u32]),
) {
    if class_idx == classes.len() {
        f(order);
        return;
    }
    let (lo, hi) = classes[class_idx];
    fn heap(order: &mut Vec<u32>, lo: usize, k: usize, rest: &mut dyn FnMut(&mut Vec<u32>)) {
        if k <= 1 {
            rest(order);
            return;
        }
        for i in 0..k {
            heap(order, lo, k - 1, rest);
            if k % 2 == 0 {
                order.swap(lo + i, lo + k - 1);
            } else {
                order.swap(lo, lo + k - 1);
            }
        }
    }
    let mut rest = |order: &mut Vec<u32>| permute_within(order, classes, class_idx + 1, f);
    heap(order, lo, hi - lo, &mut rest);
}

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

fn fnv(h: u64, x: u64) -> u64 {
    let mut h = h;
    for byte in x.to_le_bytes() {
        h = (h ^ byte as u64).wrapping_mul(FNV_PRIME);
    }
    h
}

/// Isomorphism-invariant hash by iterated color refinement on both sides.
fn refinement_hash(g: &TannerGraph) -> u64 {
    let mut vn_color: Vec<u64> = (0..g.n_vns() as u32)
        .map(|v| fnv(FNV_OFFSET, g.vn_degree(v) as u64))
        .collect();
    let mut cn_color: Vec<u64> = (0..g.n_cns() as u32)
        .map(|c| fnv(fnv(FNV_OFFSET, 1), g.cn_degree(c) as u64))
        .collect();
    for _ in 0..4 {
        let new_vn: Vec<u64> = (0..g.n_vns() as u32)
            .map(|v| {
                let mut nbr: Vec<u64> =
                    g.vn_neighbors(v).iter().map(|&c| cn_color[c as usize]).collect();
                nbr.sort_unstable();
                nbr.iter().fold(fnv(FNV_OFFSET, vn_color[v as usize]), |h, &x| fnv(h, x))
            })
            .collect();
        let new_cn: Vec<u64> = (0..g.n_cns() as u32)
            .map(|c| {
                let mut nbr: Vec<u64> =
                    g.cn_neighbors(c).iter().map(|&v| vn_color[v as usize]).collect();
                nbr.sort_unstable();
                nbr.iter().fold(fnv(FNV_OFFSET, cn_color[c as usize]), |h, &x| fnv(h, x))
            })
            .collect();
        vn_color = new_vn;
        cn_color = new_cn;
    }
    let mut all: Vec<u64> = vn_color;
    all.extend(cn_color);
    all.sort_unstable();
    all.iter().fold(FNV_OFFSET, |h, &x| fnv(h, x))
}

// ---------------------------------------------------------------------------
// Classical trapping-set search
// ---------------------------------------------------------------------------

/// Per-thread workspace for the subset expansion.
struct SearchCtx {
    cn_count: Vec<u8>,
    touched: Vec<u32>,
    frontier: Vec<u32>,
}

impl SearchCtx {
    fn new(n_cns: usize) -> Self {
        Self {
            cn_count: vec![0; n_cns],
            touched: Vec::new(),
            frontier: Vec::new(),
        }
    }

    /// Marks a VN set's check degrees; returns (odd count, max degree).
    fn mark(&mut self, g: &TannerGraph, vns: &[u32]) -> (usize, usize) {
        self.touched.clear();
        for &v in vns {
            for &c in g.vn_neighbors(v) {
                if self.cn_count[c as usize] == 0 {
                    self.touched.push(c);
                }
                self.cn_count[c as usize] += 1;
            }
        }
        let mut b = 0;
        let mut max_deg = 0;
        for &c in &self.touched {
            let d = self.cn_count[c as usize] as usize;
            if d % 2 == 1 {
                b += 1;
            }
            max_deg = max_deg.max(d);
        }
        (b, max_deg)
    }

    fn unmark(&mut self) {
        for &c in &self.touched {
            self.cn_count[c as usize] = 0;
        }
    }
}

/// All connected, cycle-containing VN subsets with ≤ `a_max` nodes whose
/// induced subgraph has ≤ `b_max` odd checks (and, when `cn_degree_cap` is
/// set, no check of larger induced degree), as deduplicated records.
pub fn find_classical_ts(
    g: &TannerGraph,
    a_max: usize,
    b_max: usize,
    cn_degree_cap: Option<usize>,
) -> Result<Vec<TrappingSetRecord>> {
    if a_max > 6 {
        return Err(Error::InvalidArgument(format!(
            "subset search supports a_max <= 6, got {a_max}"
        )));
    }
    if a_max < 2 {
        return Ok(Vec::new());
    }
    let gamma = g.max_vn_degree();
    let max_cycle = 2 * a_max;
    let sets: HashSet<Vec<u32>> = (0..g.n_vns() as u32)
        .into_par_iter()
        .map_init(
            || (g.new_cycle_scratch(), SearchCtx::new(g.n_cns())),
            |(cs, ctx), root| {
                let mut local: HashSet<Vec<u32>> = HashSet::new();
                let mut seeds: HashSet<Vec<u32>> = HashSet::new();
                g.cycles_from_root(root, max_cycle, cs, &mut |vns, _| {
                    let mut seed = vns.to_vec();
                    seed.sort_unstable();
                    seeds.insert(seed);
                });
                let mut cur = Vec::with_capacity(a_max);
                for seed in &seeds {
                    cur.clear();
                    cur.extend_from_slice(seed);
                    expand(g, ctx, &mut cur, a_max, b_max, cn_degree_cap, gamma, &mut local);
                }
                local
            },
        )
        .reduce(HashSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    let mut sorted: Vec<Vec<u32>> = sets.into_iter().collect();
    sorted.sort_unstable();
    let mut records = sorted
        .into_par_iter()
        .map(|vns| record_for(g, &vns, TsClass::Classical))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|x, y| {
        (x.a, x.b, &x.topo_key, &x.vns).cmp(&(y.a, y.b, &y.topo_key, &y.vns))
    });
    Ok(records)
}

/// Records the current set if it qualifies, then grows it by VNs sharing a
/// check with it. Pruning: induced check degrees never shrink (degree cap),
/// and one added VN lowers the odd count by at most its degree (odd budget).
#[allow(clippy::too_many_arguments)]
fn expand(
    g: &TannerGraph,
    ctx: &mut SearchCtx,
    cur: &mut Vec<u32>,
    a_max: usize,
    b_max: usize,
    cap: Option<usize>,
    gamma: usize,
    out: &mut HashSet<Vec<u32>>,
) {
    let (b, max_deg) = ctx.mark(g, cur);
    if cap.is_some_and(|cap| max_deg > cap) {
        ctx.unmark();
        return;
    }
    if b <= b_max {
        let mut sorted = cur.clone();
        sorted.sort_unstable();
        out.insert(sorted);
    }
    if cur.len() == a_max || b > b_max + gamma * (a_max - cur.len()) {
        ctx.unmark();
        return;
    }
    ctx.frontier.clear();
    for &c in &ctx.touched {
        for &w in g.cn_neighbors(c) {
            if !cur.contains(&w) {
                ctx.frontier.push(w);
            }
        }
    }
    ctx.frontier.sort_unstable();
    ctx.frontier.dedup();
    let frontier = std::mem::take(&mut ctx.frontier);
    ctx.unmark();
    for &w in &frontier {
        cur.push(w);
        expand(g, ctx, cur, a_max, b_max, cap, gamma, out);
        cur.pop();
    }
    ctx.frontier = frontier;
}

// ---------------------------------------------------------------------------
// Symmetric stabilizer detection
// ---------------------------------------------------------------------------

/// Witness that a VN set satisfies the symmetric-stabilizer conditions:
/// two equal halves with isomorphic induced subgraphs and identical
/// odd-check neighbor sets, plus the VN matching realizing the isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    pub half1: Vec<u32>,
    pub half2: Vec<u32>,
    /// Pairs (v in half1, w in half2) mapped to each other.
    pub matching: Vec<(u32, u32)>,
}

/// Tests whether a VN set is a symmetric stabilizer support on this graph;
/// returns a witness bipartition when one exists. Sets with any odd-degree
/// check in the full induced subgraph (or odd size) fail immediately.
pub fn is_symmetric_stabilizer(g: &TannerGraph, vns: &[u32]) -> Result<Option<Bipartition>> {
    let mut vns = vns.to_vec();
    vns.sort_unstable();
    vns.dedup();
    let a = vns.len();
    if a > 16 {
        return Err(Error::InvalidArgument(format!(
            "bipartition enumeration supports at most 16 variable nodes, got {a}"
        )));
    }
    if a == 0 || a % 2 == 1 {
        return Ok(None);
    }
    let full = g.induced_subgraph(&vns)?;
    if !full.odd_cns.is_empty() {
        return Ok(None);
    }
    let half = a / 2;
    // Pin vns[0] to half 1 so complementary partitions are not retried.
    for mask in 0u32..(1 << a) {
        if mask & 1 == 0 || mask.count_ones() as usize != half {
            continue;
        }
        let (mut t1, mut t2) = (Vec::with_capacity(half), Vec::with_capacity(half));
        for (i, &v) in vns.iter().enumerate() {
            if mask >> i & 1 == 1 {
                t1.push(v);
            } else {
                t2.push(v);
            }
        }
        let s1 = g.induced_subgraph(&t1)?;
        let s2 = g.induced_subgraph(&t2)?;
        if s1.odd_cns != s2.odd_cns {
            continue;
        }
        if let Some(map) = bipartite_isomorphism(&s1.graph, &s2.graph) {
            let matching = map
                .iter()
                .enumerate()
                .map(|(i, &j)| (s1.vn_ids[i], s2.vn_ids[j as usize]))
                .collect();
            return Ok(Some(Bipartition {
                half1: s1.vn_ids,
                half2: s2.vn_ids,
                matching,
            }));
        }
    }
    Ok(None)
}

/// VN bijection g1 → g2 realizing a bipartite graph isomorphism, if any.
/// Backtracking over degree- and common-check-compatible assignments, with
/// a final exact incidence-mask multiset check.
fn bipartite_isomorphism(g1: &TannerGraph, g2: &TannerGraph) -> Option<Vec<u32>> {
    let n = g1.n_vns();
    if n != g2.n_vns() || g1.n_cns() != g2.n_cns() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let degs = |g: &TannerGraph, vn: bool| -> Vec<usize> {
        let count = if vn { g.n_vns() } else { g.n_cns() };
        let mut d: Vec<usize> = (0..count as u32)
            .map(|i| if vn { g.vn_degree(i) } else { g.cn_degree(i) })
            .collect();
        d.sort_unstable();
        d
    };
    if degs(g1, true) != degs(g2, true) || degs(g1, false) != degs(g2, false) {
        return None;
    }
    // Pairwise shared-check counts, a strong backtracking filter.
    let commons = |g: &TannerGraph| -> Vec<Vec<u8>> {
        let n = g.n_vns();
        let mut m = vec![vec![0u8; n]; n];
        for c in 0..g.n_cns() as u32 {
            let nbrs = g.cn_neighbors(c);
            for (i, &u) in nbrs.iter().enumerate() {
                for &v in &nbrs[i + 1..] {
                    m[u as usize][v as usize] += 1;
                    m[v as usize][u as usize] += 1;
                }
            }
        }
        m
    };
    let (c1, c2) = (commons(g1), commons(g2));
    let mut map = vec![u32::MAX; n];
    let mut used = vec![false; n];
    fn assign(
        g1: &TannerGraph,
        g2: &TannerGraph,
        c1: &[Vec<u8>],
        c2: &[Vec<u8>],
        map: &mut Vec<u32>,
        used: &mut Vec<bool>,
        v: usize,
    ) -> bool {
        let n = g1.n_vns();
        if v == n {
            // Exact verification: CN incidence masks must agree as multisets.
            let masks = |g: &TannerGraph, relabel: Option<&[u32]>| -> Vec<u64> {
                let mut ms: Vec<u64> = (0..g.n_cns() as u32)
                    .map(|c| {
                        g.cn_neighbors(c).iter().fold(0u64, |m, &u| {
                            m | 1 << relabel.map_or(u, |r| r[u as usize])
                        })
                    })
                    .collect();
                ms.sort_unstable();
                ms
            };
            return masks(g1, Some(map)) == masks(g2, None);
        }
        for w in 0..n {
            if used[w] || g1.vn_degree(v as u32) != g2.vn_degree(w as u32) {
                continue;
            }
            if (0..v).any(|u| c1[v][u] != c2[w][map[u] as usize]) {
                continue;
            }
            map[v] = w as u32;
            used[w] = true;
            if assign(g1, g2, c1, c2, map, used, v + 1) {
                return true;
            }
            used[w] = false;
            map[v] = u32::MAX;
        }
        false
    }
    assign(g1, g2, &c1, &c2, &mut map, &mut used, 0).then_some(map)
}

/// Enumerates stabilizer-group elements as XORs of ≤ `combo_depth` rows of
/// the opposite-side check matrix, keeps supports of weight ≤ `w_max` that
/// pass [`is_symmetric_stabilizer`] on the decoding graph, and returns them
/// as records.
pub fn find_symmetric_stabilizers(
    code: &CssCode,
    side: Side,
    w_max: usize,
    combo_depth: usize,
) -> Result<Vec<TrappingSetRecord>> {
    if w_max > 16 {
        return Err(Error::InvalidArgument(format!(
            "symmetric stabilizer search supports w_max <= 16, got {w_max}"
        )));
    }
    let stab = code.stabilizer_matrix(side);
    let graph = TannerGraph::from_parity(code.decoding_matrix(side));
    let mut supports: HashSet<Vec<u32>> = HashSet::new();
    let mut acc = BitVec::zeros(code.n);
    collect_combos(stab, combo_depth, 0, &mut acc, w_max, &mut supports);
    let mut sorted: Vec<Vec<u32>> = supports.into_iter().collect();
    sorted.sort_unstable();
    let checked: Vec<(Vec<u32>, bool)> = sorted
        .into_par_iter()
        .map(|vns| {
            let ok = is_symmetric_stabilizer(&graph, &vns).map(|w| w.is_some())?;
            Ok((vns, ok))
        })
        .collect::<Result<_>>()?;
    let mut records = Vec::new();
    for (vns, ok) in checked {
        if ok {
            let rec = record_for(&graph, &vns, TsClass::SymmetricStabilizer)?;
            debug_assert_eq!(rec.b, 0);
            records.push(rec);
        }
    }
    Ok(records)
}

fn collect_combos(
    stab: &crate::BitMatrix,
    depth_left: usize,
    start: usize,
    acc: &mut BitVec,
    w_max: usize,
    out: &mut HashSet<Vec<u32>>,
) {
    let w = acc.weight();
    if w > 0 && w <= w_max {
        out.insert(acc.ones().iter().map(|&v| v as u32).collect());
    }
    if depth_left == 0 {
        return;
    }
    for r in start..stab.rows() {
        let row = stab.row(r);
        acc.xor_assign(&row);
        collect_combos(stab, depth_left - 1, r + 1, acc, w_max, out);
        acc.xor_assign(&row);
    }
}

// ---------------------------------------------------------------------------
// Critical number and strength against a decoder
// ---------------------------------------------------------------------------

/// Whether injected patterns run on the isolated induced subgraph (messages
/// from outside assumed correct) or on the full graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureMode {
    Isolated,
    InSitu,
}

/// Result of exhaustive pattern injection on one record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TsDecoderReport {
    /// Smallest failing weight; `None` when every pattern is decoded.
    pub critical_number: Option<usize>,
    /// Number of failing patterns of the critical weight.
    pub strength: usize,
    /// Failing minimum-weight patterns; bit i addresses sorted `vns[i]`.
    pub failing_patterns: Vec<BitVec>,
    /// Failing pattern count per weight (index = weight, 0..=a).
    pub failing_by_weight: Vec<usize>,
}

/// Injects every nonzero error pattern supported on the record's VNs and
/// decodes its syndrome; a pattern fails when the decoder halts without
/// matching the syndrome.
pub fn measure_ts(
    g: &TannerGraph,
    record: &TrappingSetRecord,
    spec: &DecoderSpec,
    mode: MeasureMode,
) -> Result<TsDecoderReport> {
    let a = record.a;
    if a > 12 {
        return Err(Error::InvalidArgument(format!(
            "exhaustive injection supports a <= 12, got {a}"
        )));
    }
    let sub = g.induced_subgraph(&record.vns)?;
    let (graph, to_global): (&TannerGraph, Option<&[u32]>) = match mode {
        MeasureMode::Isolated => (&sub.graph, None),
        MeasureMode::InSitu => (g, Some(&sub.vn_ids)),
    };
    let mut decoder = SyndromeDecoder::new(graph, spec)?;
    let mut failing_by_weight = vec![0usize; a + 1];
    let mut failing_patterns = Vec::new();
    let mut critical = None;
    for weight in 1..=a {
        for mask in 0u32..(1 << a) {
            if mask.count_ones() as usize != weight {
                continue;
            }
            let mut e = BitVec::zeros(graph.n_vns());
            for i in 0..a {
                if mask >> i & 1 == 1 {
                    let bit = to_global.map_or(i, |ids| ids[i] as usize);
                    e.set(bit, true);
                }
            }
            let sigma = graph.syndrome(&e)?;
            let result = decoder.decode(&sigma)?;
            if !result.matched {
                failing_by_weight[weight] += 1;
                if critical.is_none() {
                    critical = Some(weight);
                }
                if critical == Some(weight) {
                    let mut local = BitVec::zeros(a);
                    for i in 0..a {
                        if mask >> i & 1 == 1 {
                            local.set(i, true);
                        }
                    }
                    failing_patterns.push(local);
                }
            }
        }
    }
    Ok(TsDecoderReport {
        critical_number: critical,
        strength: critical.map_or(0, |w| failing_by_weight[w]),
        failing_patterns,
        failing_by_weight,
    })
}

// ---------------------------------------------------------------------------
// Census aggregation
// ---------------------------------------------------------------------------

/// One aggregated census line: all records sharing (a, b, topology, class).
#[derive(Clone, Debug)]
pub struct CensusRow {
    pub a: usize,
    pub b: usize,
    pub count: usize,
    pub profile: CycleProfile,
    pub class: TsClass,
    pub example: Vec<u32>,
    pub topo_key: String,
}

/// Groups records by (a, b, topology key, class), sorted for stable output.
pub fn group_census(records: &[TrappingSetRecord]) -> Vec<CensusRow> {
    let mut rows: Vec<CensusRow> = Vec::new();
    let mut index: std::collections::BTreeMap<(usize, usize, &str, TsClass), usize> =
        std::collections::BTreeMap::new();
    for rec in records {
        let key = (rec.a, rec.b, rec.topo_key.as_str(), rec.class);
        match index.get(&key) {
            Some(&i) => rows[i].count += 1,
            None => {
                index.insert(key, rows.len());
                rows.push(CensusRow {
                    a: rec.a,
                    b: rec.b,
                    count: 1,
                    profile: rec.profile.clone(),
                    class: rec.class,
                    example: rec.vns.clone(),
                    topo_key: rec.topo_key.clone(),
                });
            }
        }
    }
    rows.sort_by(|x, y| {
        (x.a, x.b, x.profile.poly(), &x.topo_key)
            .cmp(&(y.a, y.b, y.profile.poly(), &y.topo_key))
    });
    rows
}

/// Renders census rows as CSV (no header comments; callers prepend those).
pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from("a,b,count,cycle_profile,class,example_vns\n");
    for r in rows {
        let example = r
            .example
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.a,
            r.b,
            r.count,
            r.profile.poly(),
            r.class.label(),
            example
        ));
    }
    out
}
