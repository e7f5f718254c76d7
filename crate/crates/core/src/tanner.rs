//! Bipartite Tanner-graph view of a parity-check matrix.
//!
//! Variable nodes (VNs) are matrix columns, check nodes (CNs) are rows. The
//! graph offers girth computation, exact simple-cycle enumeration (each cycle
//! counted once, not per rotation or reflection), and induced-subgraph
//! extraction reporting odd-degree check nodes.
//!
//! # Determinism
//! Cycle enumeration shards DFS roots across worker threads; results are
//! reduced by summation (census) or concatenated in root order (collection),
//! so outputs are independent of thread count.

use crate::{BitMatrix, BitVec, Error, Result};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;

/// Counts of simple cycles per (even) length, up to an enumeration bound.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CycleProfile {
    counts: BTreeMap<usize, u64>,
}

impl CycleProfile {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a profile from (length, count) pairs; zero counts are dropped.
    pub fn from_pairs(pairs: &[(usize, u64)]) -> Self {
        let mut counts = BTreeMap::new();
        for &(len, n) in pairs {
            if n > 0 {
                counts.insert(len, n);
            }
        }
        Self { counts }
    }

    fn from_length_indexed(raw: &[u64]) -> Self {
        Self::from_pairs(
            &raw.iter()
                .enumerate()
                .map(|(len, &n)| (len, n))
                .collect::<Vec<_>>(),
        )
    }

    /// Number of cycles of exactly the given length.
    pub fn count(&self, len: usize) -> u64 {
        self.counts.get(&len).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Shortest length present, if any cycle was found within the bound.
    pub fn min_length(&self) -> Option<usize> {
        self.counts.keys().next().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().map(|(&l, &n)| (l, n))
    }

    /// Polynomial rendering, e.g. `4x^6+3x^8`; `0` when no cycles.
    pub fn poly(&self) -> String {
        if self.counts.is_empty() {
            return "0".to_string();
        }
        self.counts
            .iter()
            .map(|(&l, &n)| {
                if n == 1 {
                    format!("x^{l}")
                } else {
                    format!("{n}x^{l}")
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

impl fmt::Display for CycleProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly())
    }
}

/// One simple cycle, reported by its variable-node set (sorted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSet {
    pub len: usize,
    pub vns: Vec<u32>,
}

/// Reusable per-thread workspace for rooted cycle DFS.
pub struct CycleScratch {
    dist_vn: Vec<u32>,
    dist_cn: Vec<u32>,
    on_vn: Vec<bool>,
    on_cn: Vec<bool>,
    path_vns: Vec<u32>,
    path_cns: Vec<u32>,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

/// An induced subgraph over a VN subset plus all their neighboring CNs,
/// re-indexed locally, with the odd-degree CNs reported in global ids.
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: TannerGraph,
    /// Local VN index -> global VN id (sorted ascending).
    pub vn_ids: Vec<u32>,
    /// Local CN index -> global CN id (sorted ascending).
    pub cn_ids: Vec<u32>,
    /// Global ids of CNs with odd degree inside the subgraph.
    pub odd_cns: Vec<u32>,
}

impl InducedSubgraph {
    /// Number of odd-degree check nodes (the `b` in an `(a,b)` label).
    pub fn b(&self) -> usize {
        self.odd_cns.len()
    }
}

/// Bipartite adjacency between variable nodes and check nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    vn_adj: Vec<Vec<u32>>,
    cn_adj: Vec<Vec<u32>>,
}

impl TannerGraph {
    /// Builds the graph of a parity-check matrix (rows = CNs, columns = VNs).
    pub fn from_parity(h: &BitMatrix) -> Self {
        let mut vn_adj = vec![Vec::new(); h.cols()];
        let mut cn_adj = Vec::with_capacity(h.rows());
        for r in 0..h.rows() {
            let support: Vec<u32> = h.row(r).ones().iter().map(|&c| c as u32).collect();
            for &v in &support {
                vn_adj[v as usize].push(r as u32);
            }
            cn_adj.push(support);
        }
        Self { vn_adj, cn_adj }
    }

    /// Builds a graph from explicit check supports (for small fixtures).
    pub fn from_check_supports(n_vns: usize, checks: &[Vec<u32>]) -> Result<Self> {
        let mut vn_adj = vec![Vec::new(); n_vns];
        let mut cn_adj = Vec::with_capacity(checks.len());
        for (c, support) in checks.iter().enumerate() {
            let mut s = support.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "check {c} lists a variable twice"
                )));
            }
            if let Some(&v) = s.last() {
                if v as usize >= n_vns {
                    return Err(Error::InvalidArgument(format!(
                        "check {c} references variable {v} >= {n_vns}"
                    )));
                }
            }
            for &v in &s {
                vn_adj[v as usize].push(c as u32);
            }
            cn_adj.push(s);
        }
        Ok(Self { vn_adj, cn_adj })
    }

    pub fn n_vns(&self) -> usize {
        self.vn_adj.len()
    }

    pub fn n_cns(&self) -> usize {
        self.cn_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.cn_adj.iter().map(Vec::len).sum()
    }

    /// Sorted CN neighbors of a variable node.
    pub fn vn_neighbors(&self, v: u32) -> &[u32] {
        &self.vn_adj[v as usize]
    }

    /// Sorted VN neighbors of a check node.
    pub fn cn_neighbors(&self, c: u32) -> &[u32] {
        &self.cn_adj[c as usize]
    }

    pub fn vn_degree(&self, v: u32) -> usize {
        self.vn_adj[v as usize].len()
    }

    pub fn cn_degree(&self, c: u32) -> usize {
        self.cn_adj[c as usize].len()
    }

    pub fn max_vn_degree(&self) -> usize {
        self.vn_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_cn_degree(&self) -> usize {
        self.cn_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn cn_has_neighbor(&self, c: u32, v: u32) -> bool {
        self.cn_adj[c as usize].binary_search(&v).is_ok()
    }

    /// Reconstructs the parity-check matrix (rows = CNs, columns = VNs).
    pub fn to_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.n_cns(), self.n_vns());
        for (c, support) in self.cn_adj.iter().enumerate() {
            for &v in support {
                m.set(c, v as usize, true);
            }
        }
        m
    }

    /// Check values of an error pattern: bit c = parity of e over N(c).
    pub fn syndrome(&self, e: &BitVec) -> Result<BitVec> {
        if e.len() != self.n_vns() {
            return Err(Error::Dimension(format!(
                "pattern length {} != {} variable nodes",
                e.len(),
                self.n_vns()
            )));
        }
        let mut s = BitVec::zeros(self.n_cns());
        for (c, support) in self.cn_adj.iter().enumerate() {
            let parity = support.iter().filter(|&&v| e.get(v as usize)).count() & 1;
            if parity == 1 {
                s.set(c, true);
            }
        }
        Ok(s)
    }

    /// Shortest cycle length, or `None` for a forest.
    ///
    /// Per-root BFS: every non-tree edge `(u,w)` seen from root r bounds a
    /// cycle of length `dist(u)+dist(w)+1`; the minimum over all VN roots is
    /// exact because every cycle passes through a variable node.
    pub fn girth(&self) -> Option<usize> {
        let (nv, nc) = (self.n_vns(), self.n_cns());
        let mut best = usize::MAX;
        let mut dist = vec![u32::MAX; nv + nc]; // VN v -> v, CN c -> nv + c
        let mut parent = vec![u32::MAX; nv + nc];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..nv as u32 {
            if self.vn_degree(root) < 2 {
                continue; // a degree-<2 node is never on a cycle
            }
            dist.fill(u32::MAX);
            parent.fill(u32::MAX);
            dist[root as usize] = 0;
            queue.clear();
            queue.push_back(root);
            while let Some(node) = queue.pop_front() {
                let d = dist[node as usize] as usize;
                if 2 * d >= best {
                    break; // deeper levels cannot improve the best cycle
                }
                let is_vn = (node as usize) < nv;
                let neighbors = if is_vn {
                    self.vn_neighbors(node)
                } else {
                    self.cn_neighbors(node - nv as u32)
                };
                for &nbr in neighbors {
                    let enc = if is_vn { nbr + nv as u32 } else { nbr };
                    if dist[enc as usize] == u32::MAX {
                        dist[enc as usize] = d as u32 + 1;
                        parent[enc as usize] = node;
                        queue.push_back(enc);
                    } else if parent[node as usize] != enc {
                        best = best.min(d + dist[enc as usize] as usize + 1);
                    }
                }
            }
            if best == 4 {
                break; // bipartite minimum; cannot do better
            }
        }
        (best != usize::MAX).then_some(best)
    }

    pub fn new_cycle_scratch(&self) -> CycleScratch {
        CycleScratch {
            dist_vn: vec![u32::MAX; self.n_vns()],
            dist_cn: vec![u32::MAX; self.n_cns()],
            on_vn: vec![false; self.n_vns()],
            on_cn: vec![false; self.n_cns()],
            path_vns: Vec::new(),
            path_cns: Vec::new(),
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    /// BFS distances from `root`, capped at `max_len` (farther nodes stay MAX).
    fn fill_dists(&self, root: u32, max_len: usize, s: &mut CycleScratch) {
        s.dist_vn.fill(u32::MAX);
        s.dist_cn.fill(u32::MAX);
        s.dist_vn[root as usize] = 0;
        s.frontier.clear();
        s.frontier.push(root);
        let mut depth = 0u32;
        while !s.frontier.is_empty() && (depth as usize) < max_len {
            s.next.clear();
            let from_vns = depth % 2 == 0;
            for &node in &s.frontier {
                let neighbors = if from_vns {
                    self.vn_neighbors(node)
                } else {
                    self.cn_neighbors(node)
                };
                for &nbr in neighbors {
                    let slot = if from_vns {
                        &mut s.dist_cn[nbr as usize]
                    } else {
                        &mut s.dist_vn[nbr as usize]
                    };
                    if *slot == u32::MAX {
                        *slot = depth + 1;
                        s.next.push(nbr);
                    }
                }
            }
            std::mem::swap(&mut s.frontier, &mut s.next);
            depth += 1;
        }
    }

    /// Enumerates every simple cycle of length ≤ `max_len` whose smallest
    /// variable node is `root`, exactly once. The callback receives the
    /// cycle's VNs and CNs in path order (`vns[0] == root`).
    ///
    /// Canonical form: only VNs > root are visited, and a cycle is emitted
    /// only in the traversal direction whose first CN id is smaller than its
    /// closing CN id, so rotations and reflections are never double-counted.
    pub fn cycles_from_root(
        &self,
        root: u32,
        max_len: usize,
        s: &mut CycleScratch,
        on_cycle: &mut dyn FnMut(&[u32], &[u32]),
    ) {
        if max_len < 4 || self.vn_degree(root) < 2 {
            return;
        }
        self.fill_dists(root, max_len, s);
        s.path_vns.clear();
        s.path_cns.clear();
        s.path_vns.push(root);
        s.on_vn[root as usize] = true;
        self.cycle_dfs(root, root, 0, max_len, s, on_cycle);
        s.on_vn[root as usize] = false;
        s.path_vns.pop();
    }

    fn cycle_dfs(
        &self,
        root: u32,
        u: u32,
        edges: usize,
        max_len: usize,
        s: &mut CycleScratch,
        on_cycle: &mut dyn FnMut(&[u32], &[u32]),
    ) {
        let first_cn = s.path_cns.first().copied();
        for i in 0..self.vn_degree(u) {
            let c = self.vn_adj[u as usize][i];
            if s.on_cn[c as usize] {
                continue;
            }
            // Close the cycle through c back to the root.
            if let Some(first) = first_cn {
                if c > first && edges + 2 <= max_len && self.cn_has_neighbor(c, root) {
                    s.path_cns.push(c);
                    on_cycle(&s.path_vns, &s.path_cns);
                    s.path_cns.pop();
                }
            }
            // Extend through c to a further VN (needs ≥2 more edges to close).
            if edges + 4 > max_len
                || edges + 1 + s.dist_cn[c as usize] as usize > max_len
            {
                continue;
            }
            for j in 0..self.cn_degree(c) {
                let w = self.cn_adj[c as usize][j];
                if w <= root
                    || s.on_vn[w as usize]
                    || edges + 2 + s.dist_vn[w as usize] as usize > max_len
                {
                    continue;
                }
                s.on_cn[c as usize] = true;
                s.on_vn[w as usize] = true;
                s.path_cns.push(c);
                s.path_vns.push(w);
                self.cycle_dfs(root, w, edges + 2, max_len, s, on_cycle);
                s.path_vns.pop();
                s.path_cns.pop();
                s.on_vn[w as usize] = false;
                s.on_cn[c as usize] = false;
            }
        }
    }

    /// Exact number of simple cycles per length, for lengths 4..=`max_len`.
    pub fn cycle_census(&self, max_len: usize) -> CycleProfile {
        let raw = (0..self.n_vns() as u32)
            .into_par_iter()
            .map_init(
                || self.new_cycle_scratch(),
                |s, root| {
                    let mut local = vec![0u64; max_len + 1];
                    self.cycles_from_root(root, max_len, s, &mut |vns, _| {
                        local[2 * vns.len()] += 1;
                    });
                    local
                },
            )
            .reduce(
                || vec![0u64; max_len + 1],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        CycleProfile::from_length_indexed(&raw)
    }

    /// Collects every simple cycle of length ≤ `max_len` as a sorted VN set.
    /// Theta-shaped subgraphs can yield several cycles with the same VN set;
    /// no deduplication is applied here.
    pub fn cycle_sets(&self, max_len: usize) -> Vec<CycleSet> {
        (0..self.n_vns() as u32)
            .into_par_iter()
            .map_init(
                || self.new_cycle_scratch(),
                |s, root| {
                    let mut local = Vec::new();
                    self.cycles_from_root(root, max_len, s, &mut |vns, _| {
                        let mut sorted = vns.to_vec();
                        sorted.sort_unstable();
                        local.push(CycleSet {
                            len: 2 * vns.len(),
                            vns: sorted,
                        });
                    });
                    local
                },
            )
            .flatten_iter()
            .collect()
    }

    /// Subgraph induced by a VN subset: those VNs, every CN adjacent to at
    /// least one of them, and all edges in between. Also reports the CNs of
    /// odd subgraph degree.
    pub fn induced_subgraph(&self, vns: &[u32]) -> Result<InducedSubgraph> {
        if vns.is_empty() {
            return Err(Error::InvalidArgument(
                "induced subgraph of an empty variable set".into(),
            ));
        }
        let mut vn_ids = vns.to_vec();
        vn_ids.sort_unstable();
        vn_ids.dedup();
        if let Some(&v) = vn_ids.last() {
            if v as usize >= self.n_vns() {
                return Err(Error::InvalidArgument(format!(
                    "variable node {v} out of range"
                )));
            }
        }
        let mut cn_ids: Vec<u32> = vn_ids
            .iter()
            .flat_map(|&v| self.vn_neighbors(v).iter().copied())
            .collect();
        cn_ids.sort_unstable();
        cn_ids.dedup();
        let local_vn = |v: u32| vn_ids.binary_search(&v).unwrap() as u32;
        let mut checks = Vec::with_capacity(cn_ids.len());
        let mut odd_cns = Vec::new();
        for &c in &cn_ids {
            let support: Vec<u32> = self
                .cn_neighbors(c)
                .iter()
                .filter(|&&v| vn_ids.binary_search(&v).is_ok())
                .map(|&v| local_vn(v))
                .collect();
            if support.len() % 2 == 1 {
                odd_cns.push(c);
            }
            checks.push(support);
        }
        let graph = TannerGraph::from_check_supports(vn_ids.len(), &checks)?;
        Ok(InducedSubgraph {
            graph,
            vn_ids,
            cn_ids,
            odd_cns,
        })
    }
}
