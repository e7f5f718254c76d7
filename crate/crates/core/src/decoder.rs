//! Syndrome-based iterative message-passing decoders.
//!
//! All three algorithms (Gallager-B, min-sum, sum-product) share one engine:
//! check-node messages carry a syndrome sign `(1-2σ_c)`, variable nodes
//! combine a uniform channel value with extrinsic check messages, and the
//! running estimate flips bits with negative marginals. Decoding starts from
//! the all-zero estimate and halts as soon as the recomputed syndrome matches
//! the input, checked after every full iteration.
//!
//! Schedules: `flooding` updates every check then every variable per
//! iteration; `column_layered` sweeps ordered VN layers, giving each layer
//! fresh check messages before its variable update (which breaks the message
//! symmetry that traps flooding schedules on symmetric stabilizer supports).
//!
//! # Determinism
//! A decode call is single-threaded and purely sequential; identical
//! (graph, syndrome, spec) inputs produce bit-identical results including
//! the recorded trajectory.

use crate::{BitMatrix, BitVec, Error, Result, TannerGraph};

/// Saturation bound for log-likelihood magnitudes (keeps atanh finite).
const LLR_CLAMP: f64 = 1.0 - 1e-12;
/// Magnitude carried by a degree-1 check's (extrinsic-free) message.
const CERTAIN: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    GallagerB,
    MinSum,
    SumProduct,
}

impl Algorithm {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gallager_b" | "gallager-b" | "gb" => Ok(Self::GallagerB),
            "min_sum" | "min-sum" | "msa" => Ok(Self::MinSum),
            "sum_product" | "sum-product" | "spa" | "bp" => Ok(Self::SumProduct),
            other => Err(Error::Parse(format!("unknown algorithm {other:?}"))),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Self::GallagerB => "gallager_b",
            Self::MinSum => "min_sum",
            Self::SumProduct => "sum_product",
        }
    }
}

/// How column layers are formed when the schedule is layered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayerPlan {
    /// Every variable node is its own layer, in index order.
    Seq,
    /// Two layers: first half of the VN indices, then the second half.
    Halves,
    /// Caller-supplied ordered layers (must partition all VN indices).
    Explicit(Vec<Vec<u32>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    Flooding,
    ColumnLayered(LayerPlan),
}

/// Full decoder configuration; serializable as key=value text.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoderSpec {
    pub algorithm: Algorithm,
    pub schedule: Schedule,
    pub max_iters: usize,
    /// Channel crossover probability (sets the uniform a-priori value).
    pub channel_p: f64,
    /// Scale factor applied to min-sum check messages.
    pub msa_scale: f64,
    /// Optional symmetric integer message alphabet {-B..B} with saturation.
    pub quantization: Option<u32>,
    /// Record the estimate after every iteration.
    pub record_trajectory: bool,
}

impl Default for DecoderSpec {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::MinSum,
            schedule: Schedule::Flooding,
            max_iters: 20,
            channel_p: 0.01,
            msa_scale: 1.0,
            quantization: None,
            record_trajectory: false,
        }
    }
}

impl DecoderSpec {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be >= 1".into()));
        }
        if !(self.channel_p > 0.0 && self.channel_p < 0.5) {
            return Err(Error::InvalidArgument(format!(
                "channel p must lie in (0, 0.5), got {}",
                self.channel_p
            )));
        }
        if !(self.msa_scale > 0.0 && self.msa_scale <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "msa_scale must lie in (0, 1], got {}",
                self.msa_scale
            )));
        }
        if self.quantization == Some(0) {
            return Err(Error::InvalidArgument(
                "quantization bound must be >= 1".into(),
            ));
        }
        Ok(())
    }

    /// Parses key=value pairs separated by commas or newlines. Keys:
    /// `algorithm` (gallager_b|min_sum|sum_product), `schedule`
    /// (flooding|layered), `layers` (seq|halves, layered only), `max_iters`,
    /// `p`, `msa_scale`, `quant` (integer or none), `trajectory` (bool).
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = Self::default();
        let mut layers: Option<String> = None;
        let mut schedule: Option<String> = None;
        for item in text.split(|ch| ch == ',' || ch == '\n') {
            let item = item.split('#').next().unwrap_or("").trim();
            if item.is_empty() {
                continue;
            }
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("decoder spec: expected key=value, got {item:?}")))?;
            let value = value.trim();
            match key.trim() {
                "algorithm" | "alg" => spec.algorithm = Algorithm::parse(value)?,
                "schedule" | "sched" => schedule = Some(value.to_string()),
                "layers" => layers = Some(value.to_string()),
                "max_iters" | "iters" => {
                    spec.max_iters = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad max_iters {value:?}")))?
                }
                "p" => {
                    spec.channel_p = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad p {value:?}")))?
                }
                "msa_scale" => {
                    spec.msa_scale = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad msa_scale {value:?}")))?
                }
                "quant" => {
                    spec.quantization = match value {
                        "none" => None,
                        v => Some(v.parse().map_err(|_| {
                            Error::Parse(format!("bad quant {v:?}"))
                        })?),
                    }
                }
                "trajectory" => {
                    spec.record_trajectory = value
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad trajectory {value:?}")))?
                }
                other => return Err(Error::Parse(format!("decoder spec: unknown key {other:?}"))),
            }
        }
        spec.schedule = match schedule.as_deref() {
            None | Some("flooding") => {
                if layers.is_some() {
                    return Err(Error::Parse(
                        "decoder spec: layers= requires schedule=layered".into(),
                    ));
                }
                Schedule::Flooding
            }
            Some("layered" | "column_layered") => {
                let plan = match layers.as_deref().unwrap_or("seq") {
                    "seq" => LayerPlan::Seq,
                    "halves" => LayerPlan::Halves,
                    // Explicit layer lists: VN indices separated by spaces,
                    // layers separated by '|', e.g. "0 2|1 3".
                    other if other.contains('|') || other.chars().any(|c| c.is_ascii_digit()) => {
                        let groups = other
                            .split('|')
                            .map(|grp| {
                                grp.split_whitespace()
                                    .map(|t| {
                                        t.parse::<u32>().map_err(|_| {
                                            Error::Parse(format!("bad layer index {t:?}"))
                                        })
                                    })
                                    .collect::<Result<Vec<u32>>>()
                            })
                            .collect::<Result<Vec<Vec<u32>>>>()?;
                        if groups.iter().any(|g| g.is_empty()) {
                            return Err(Error::Parse("empty layer in layers=".into()));
                        }
                        LayerPlan::Explicit(groups)
                    }
                    other => {
                        return Err(Error::Parse(format!("unknown layers value {other:?}")))
                    }
                };
                Schedule::ColumnLayered(plan)
            }
            Some(other) => return Err(Error::Parse(format!("unknown schedule {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Canonical key=value rendering; `parse(format())` round-trips,
    /// including explicit layer lists (`layers=0 2|1 3`).
    pub fn format(&self) -> String {
        let mut parts = vec![format!("algorithm={}", self.algorithm.label())];
        match &self.schedule {
            Schedule::Flooding => parts.push("schedule=flooding".into()),
            Schedule::ColumnLayered(plan) => {
                parts.push("schedule=layered".into());
                parts.push(match plan {
                    LayerPlan::Seq => "layers=seq".into(),
                    LayerPlan::Halves => "layers=halves".into(),
                    LayerPlan::Explicit(groups) => format!(
                        "layers={}",
                        groups
                            .iter()
                            .map(|g| {
                                g.iter()
                                    .map(|v| v.to_string())
                                    .collect::<Vec<_>>()
                                    .join(" ")
                            })
                            .collect::<Vec<_>>()
                            .join("|")
                    ),
                });
            }
        }
        parts.push(format!("max_iters={}", self.max_iters));
        parts.push(format!("p={}", self.channel_p));
        parts.push(format!("msa_scale={}", self.msa_scale));
        parts.push(format!(
            "quant={}",
            self.quantization.map_or("none".into(), |b| b.to_string())
        ));
        parts.push(format!("trajectory={}", self.record_trajectory));
        parts.join(",")
    }
}

/// Outcome of one decode call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub e_hat: BitVec,
    /// True iff the recomputed syndrome of `e_hat` equals the input.
    pub matched: bool,
    /// Full iterations executed (0 when the input syndrome is zero).
    pub iters_used: usize,
    /// Estimate after each executed iteration, when recording was enabled.
    pub trajectory: Option<Vec<BitVec>>,
}

/// Thin wrapper: σ = h·eᵀ over GF(2).
pub fn syndrome(h: &BitMatrix, e: &BitVec) -> Result<BitVec> {
    h.mul_vec(e)
}

/// Reusable decoding engine bound to one graph and spec; buffers are
/// allocated once so repeated decode calls do not allocate.
pub struct SyndromeDecoder<'g> {
    g: &'g TannerGraph,
    spec: DecoderSpec,
    layers: Vec<Vec<u32>>, // empty for flooding
    y: f64,
    cn_offset: Vec<u32>,
    /// Edge ids (CN-major) incident to each VN.
    vn_edges: Vec<Vec<u32>>,
    nu: Vec<f64>,
    mu: Vec<f64>,
    scratch: Vec<f64>,
    e_hat: BitVec,
    sigma_hat: BitVec,
}

impl<'g> SyndromeDecoder<'g> {
    pub fn new(g: &'g TannerGraph, spec: &DecoderSpec) -> Result<Self> {
        spec.validate()?;
        let layers = match &spec.schedule {
            Schedule::Flooding => Vec::new(),
            Schedule::ColumnLayered(plan) => resolve_layers(plan, g.n_vns())?,
        };
        let y = match spec.algorithm {
            Algorithm::GallagerB => 1.0,
            _ => {
                let raw = ((1.0 - spec.channel_p) / spec.channel_p).ln();
                quantize(raw, spec.quantization)
            }
        };
        let mut cn_offset = Vec::with_capacity(g.n_cns() + 1);
        let mut acc = 0u32;
        for c in 0..g.n_cns() as u32 {
            cn_offset.push(acc);
            acc += g.cn_degree(c) as u32;
        }
        cn_offset.push(acc);
        let mut vn_edges = vec![Vec::new(); g.n_vns()];
        for c in 0..g.n_cns() as u32 {
            for (pos, &v) in g.cn_neighbors(c).iter().enumerate() {
                vn_edges[v as usize].push(cn_offset[c as usize] + pos as u32);
            }
        }
        let n_edges = acc as usize;
        let max_deg = g.max_cn_degree().max(1);
        Ok(Self {
            g,
            spec: spec.clone(),
            layers,
            y,
            cn_offset,
            vn_edges,
            nu: vec![0.0; n_edges],
            mu: vec![0.0; n_edges],
            scratch: vec![0.0; 2 * (max_deg + 1)],
            e_hat: BitVec::zeros(g.n_vns()),
            sigma_hat: BitVec::zeros(g.n_cns()),
        })
    }

    pub fn spec(&self) -> &DecoderSpec {
        &self.spec
    }

    /// Runs the configured decoder on one syndrome.
    pub fn decode(&mut self, sigma: &BitVec) -> Result<DecodeResult> {
        if sigma.len() != self.g.n_cns() {
            return Err(Error::Dimension(format!(
                "syndrome length {} != {} check nodes",
                sigma.len(),
                self.g.n_cns()
            )));
        }
        let mut trajectory = self.spec.record_trajectory.then(Vec::new);
        self.e_hat = BitVec::zeros(self.g.n_vns());
        if sigma.is_zero() {
            // The all-zero estimate already matches; nothing to iterate.
            return Ok(DecodeResult {
                e_hat: self.e_hat.clone(),
                matched: true,
                iters_used: 0,
                trajectory,
            });
        }
        self.nu.fill(self.y);
        let mut iters_used = self.spec.max_iters;
        let mut matched = false;
        for iter in 1..=self.spec.max_iters {
            if self.layers.is_empty() {
                self.flooding_iteration(sigma);
            } else {
                self.layered_iteration(sigma);
            }
            if let Some(t) = trajectory.as_mut() {
                t.push(self.e_hat.clone());
            }
            self.recompute_syndrome();
            if self.sigma_hat == *sigma {
                iters_used = iter;
                matched = true;
                break;
            }
        }
        Ok(DecodeResult {
            e_hat: self.e_hat.clone(),
            matched,
            iters_used,
            trajectory,
        })
    }

    /// Check message for edge `pos` of CN `c` from current VN messages,
    /// including the syndrome sign.
    fn cn_message(&self, c: u32, pos: usize, sigma_c: bool) -> f64 {
        let lo = self.cn_offset[c as usize] as usize;
        let hi = self.cn_offset[c as usize + 1] as usize;
        let mut sign = if sigma_c { -1.0 } else { 1.0 };
        match self.spec.algorithm {
            Algorithm::GallagerB => {
                for e in lo..hi {
                    if e != lo + pos && self.nu[e] < 0.0 {
                        sign = -sign;
                    }
                }
                sign
            }
            Algorithm::MinSum => {
                let mut mag = f64::INFINITY;
                for e in lo..hi {
                    if e == lo + pos {
                        continue;
                    }
                    if self.nu[e] < 0.0 {
                        sign = -sign;
                    }
                    mag = mag.min(self.nu[e].abs());
                }
                if mag == f64::INFINITY {
                    mag = CERTAIN;
                }
                quantize(self.spec.msa_scale * sign * mag, self.spec.quantization)
            }
            Algorithm::SumProduct => {
                let mut prod = 1.0;
                for e in lo..hi {
                    if e != lo + pos {
                        prod *= (self.nu[e] / 2.0).tanh();
                    }
                }
                let prod = prod.clamp(-LLR_CLAMP, LLR_CLAMP);
                quantize(sign * 2.0 * prod.atanh(), self.spec.quantization)
            }
        }
    }

    /// VN-to-CN message from the extrinsic sum (channel + other checks).
    fn vn_message(&self, extrinsic_sum: f64) -> f64 {
        match self.spec.algorithm {
            // Hard ±1 message; a tied vote keeps the channel's "no error".
            Algorithm::GallagerB => {
                if extrinsic_sum < 0.0 {
                    -1.0
                } else {
                    1.0
                }
            }
            _ => quantize(extrinsic_sum, self.spec.quantization),
        }
    }

    fn flooding_iteration(&mut self, sigma: &BitVec) {
        // Check pass: all outgoing messages from the current VN messages.
        for c in 0..self.g.n_cns() as u32 {
            let lo = self.cn_offset[c as usize] as usize;
            let deg = self.g.cn_degree(c);
            let sigma_c = sigma.get(c as usize);
            match self.spec.algorithm {
                Algorithm::SumProduct => {
                    // Prefix/suffix tanh products avoid division by ~0.
                    let (pre, suf) = self.scratch.split_at_mut(deg + 1);
                    pre[0] = 1.0;
                    suf[deg] = 1.0;
                    for i in 0..deg {
                        pre[i + 1] = pre[i] * (self.nu[lo + i] / 2.0).tanh();
                        suf[deg - 1 - i] =
                            suf[deg - i] * (self.nu[lo + deg - 1 - i] / 2.0).tanh();
                    }
                    let sign = if sigma_c { -1.0 } else { 1.0 };
                    for i in 0..deg {
                        let prod = (pre[i] * suf[i + 1]).clamp(-LLR_CLAMP, LLR_CLAMP);
                        self.mu[lo + i] =
                            quantize(sign * 2.0 * prod.atanh(), self.spec.quantization);
                    }
                }
                _ => {
                    // Shared sign/min pass for Gallager-B and min-sum.
                    let mut total_sign = if sigma_c { -1.0 } else { 1.0 };
                    let (mut min1, mut min2, mut arg1) = (f64::INFINITY, f64::INFINITY, usize::MAX);
                    for i in 0..deg {
                        let v = self.nu[lo + i];
                        if v < 0.0 {
                            total_sign = -total_sign;
                        }
                        let a = v.abs();
                        if a < min1 {
                            min2 = min1;
                            min1 = a;
                            arg1 = i;
                        } else if a < min2 {
                            min2 = a;
                        }
                    }
                    for i in 0..deg {
                        let self_sign = if self.nu[lo + i] < 0.0 { -1.0 } else { 1.0 };
                        let sign = total_sign * self_sign;
                        self.mu[lo + i] = match self.spec.algorithm {
                            Algorithm::GallagerB => sign,
                            _ => {
                                let mut mag = if i == arg1 { min2 } else { min1 };
                                if mag == f64::INFINITY {
                                    mag = CERTAIN;
                                }
                                quantize(
                                    self.spec.msa_scale * sign * mag,
                                    self.spec.quantization,
                                )
                            }
                        };
                    }
                }
            }
        }
        // Variable pass: decisions and fresh VN messages.
        for v in 0..self.g.n_vns() {
            let total: f64 = self.y + self.vn_edges[v].iter().map(|&e| self.mu[e as usize]).sum::<f64>();
            self.e_hat.set(v, total < 0.0);
            for i in 0..self.vn_edges[v].len() {
                let e = self.vn_edges[v][i] as usize;
                self.nu[e] = self.vn_message(total - self.mu[e]);
            }
        }
    }

    fn layered_iteration(&mut self, sigma: &BitVec) {
        for li in 0..self.layers.len() {
            // Phase 1: fresh check messages for this layer's VNs.
            for vi in 0..self.layers[li].len() {
                let v = self.layers[li][vi];
                for i in 0..self.vn_edges[v as usize].len() {
                    let e = self.vn_edges[v as usize][i];
                    let c = self.edge_cn(e);
                    let pos = (e - self.cn_offset[c as usize]) as usize;
                    self.mu[e as usize] = self.cn_message(c, pos, sigma.get(c as usize));
                }
            }
            // Phase 2: decisions and VN messages for this layer.
            for vi in 0..self.layers[li].len() {
                let v = self.layers[li][vi] as usize;
                let total: f64 =
                    self.y + self.vn_edges[v].iter().map(|&e| self.mu[e as usize]).sum::<f64>();
                self.e_hat.set(v, total < 0.0);
                for i in 0..self.vn_edges[v].len() {
                    let e = self.vn_edges[v][i] as usize;
                    self.nu[e] = self.vn_message(total - self.mu[e]);
                }
            }
        }
    }

    /// CN owning a CN-major edge id (binary search over offsets).
    fn edge_cn(&self, e: u32) -> u32 {
        (self.cn_offset.partition_point(|&o| o <= e) - 1) as u32
    }

    fn recompute_syndrome(&mut self) {
        for c in 0..self.g.n_cns() as u32 {
            let parity = self
                .g
                .cn_neighbors(c)
                .iter()
                .filter(|&&v| self.e_hat.get(v as usize))
                .count()
                & 1;
            self.sigma_hat.set(c as usize, parity == 1);
        }
    }
}

fn resolve_layers(plan: &LayerPlan, n_vns: usize) -> Result<Vec<Vec<u32>>> {
    let layers = match plan {
        LayerPlan::Seq => (0..n_vns as u32).map(|v| vec![v]).collect(),
        LayerPlan::Halves => {
            if n_vns % 2 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "halves layering needs an even VN count, got {n_vns}"
                )));
            }
            vec![
                (0..n_vns as u32 / 2).collect(),
                (n_vns as u32 / 2..n_vns as u32).collect(),
            ]
        }
        LayerPlan::Explicit(layers) => layers.clone(),
    };
    let mut seen = vec![false; n_vns];
    for layer in &layers {
        for &v in layer {
            if (v as usize) >= n_vns || seen[v as usize] {
                return Err(Error::InvalidArgument(format!(
                    "layers must partition the variable nodes (node {v} repeated or out of range)"
                )));
            }
            seen[v as usize] = true;
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::InvalidArgument(
            "layers must cover every variable node".into(),
        ));
    }
    Ok(layers)
}

/// Rounds into the symmetric saturating alphabet {-b..b} when enabled.
fn quantize(x: f64, bound: Option<u32>) -> f64 {
    match bound {
        None => x,
        Some(b) => x.round().clamp(-(b as f64), b as f64),
    }
}

/// One-shot convenience: builds an engine and decodes a single syndrome.
pub fn decode(g: &TannerGraph, sigma: &BitVec, spec: &DecoderSpec) -> Result<DecodeResult> {
    SyndromeDecoder::new(g, spec)?.decode(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_graph() -> TannerGraph {
        // v0 -c0- v1 -c1- v2 (two weight-2 checks).
        TannerGraph::from_check_supports(3, &[vec![0, 1], vec![1, 2]]).unwrap()
    }

    #[test]
    fn zero_syndrome_matches_immediately() {
        let g = chain_graph();
        let spec = DecoderSpec::default();
        let r = decode(&g, &BitVec::zeros(2), &spec).unwrap();
        assert!(r.matched);
        assert_eq!(r.iters_used, 0);
        assert!(r.e_hat.is_zero());
    }

    #[test]
    fn soft_decoders_fix_single_error_on_tree() {
        let g = chain_graph();
        let e = BitVec::from_support(3, &[0]);
        let sigma = g.syndrome(&e).unwrap();
        for alg in [Algorithm::MinSum, Algorithm::SumProduct] {
            let spec = DecoderSpec {
                algorithm: alg,
                max_iters: 10,
                ..DecoderSpec::default()
            };
            let r = decode(&g, &sigma, &spec).unwrap();
            assert!(r.matched, "{alg:?} should match on a tree");
            assert_eq!(r.e_hat, e, "{alg:?} should recover the pattern");
        }
    }

    #[test]
    fn layered_and_flooding_agree_on_tree() {
        let g = chain_graph();
        let e = BitVec::from_support(3, &[2]);
        let sigma = g.syndrome(&e).unwrap();
        for plan in [LayerPlan::Seq, LayerPlan::Explicit(vec![vec![2, 1], vec![0]])] {
            let spec = DecoderSpec {
                schedule: Schedule::ColumnLayered(plan),
                ..DecoderSpec::default()
            };
            let r = decode(&g, &sigma, &spec).unwrap();
            assert!(r.matched);
            assert_eq!(r.e_hat, e);
        }
    }

    #[test]
    fn determinism_including_trajectory() {
        let g = TannerGraph::from_check_supports(
            4,
            &[vec![0, 1, 2], vec![1, 2, 3], vec![0, 2, 3], vec![0, 1, 3]],
        )
        .unwrap();
        let sigma = BitVec::from_bits(&[1, 0, 1, 1]);
        let spec = DecoderSpec {
            record_trajectory: true,
            max_iters: 8,
            ..DecoderSpec::default()
        };
        let a = decode(&g, &sigma, &spec).unwrap();
        let b = decode(&g, &sigma, &spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.trajectory.as_ref().unwrap().len(), a.iters_used.max(1).min(8));
    }

    #[test]
    fn bad_layer_partitions_are_rejected() {
        let g = chain_graph();
        for layers in [vec![vec![0, 1]], vec![vec![0, 1, 2, 2]], vec![vec![0, 1, 5]]] {
            let spec = DecoderSpec {
                schedule: Schedule::ColumnLayered(LayerPlan::Explicit(layers)),
                ..DecoderSpec::default()
            };
            assert!(SyndromeDecoder::new(&g, &spec).is_err());
        }
    }

    #[test]
    fn spec_text_round_trip() {
        let text = "algorithm=min_sum, schedule=layered, layers=halves, max_iters=20, p=0.01";
        let spec = DecoderSpec::parse(text).unwrap();
        assert_eq!(spec.algorithm, Algorithm::MinSum);
        assert_eq!(spec.schedule, Schedule::ColumnLayered(LayerPlan::Halves));
        assert_eq!(spec.max_iters, 20);
        let again = DecoderSpec::parse(&spec.format()).unwrap();
        assert_eq!(spec, again);
        assert!(DecoderSpec::parse("algorithm=zzz").is_err());
        assert!(DecoderSpec::parse("p=0.7").is_err());
        assert!(DecoderSpec::parse("layers=seq").is_err(), "layers without layered schedule");
    }

    #[test]
    fn quantized_messages_stay_in_alphabet() {
        let g = chain_graph();
        // A strong prior (~4.6) saturates at the alphabet bound.
        let sat = DecoderSpec {
            quantization: Some(3),
            channel_p: 0.01,
            ..DecoderSpec::default()
        };
        assert_eq!(SyndromeDecoder::new(&g, &sat).unwrap().y, 3.0);
        // A prior inside the alphabet (ln 4 rounds to 1) leaves headroom for
        // check messages to grow and flip the erroneous bit.
        let spec = DecoderSpec {
            quantization: Some(3),
            channel_p: 0.2,
            ..DecoderSpec::default()
        };
        let mut dec = SyndromeDecoder::new(&g, &spec).unwrap();
        assert_eq!(dec.y, 1.0);
        let e = BitVec::from_support(3, &[0]);
        let sigma = g.syndrome(&e).unwrap();
        let r = dec.decode(&sigma).unwrap();
        assert!(r.matched);
        assert_eq!(r.e_hat, e);
    }
}
