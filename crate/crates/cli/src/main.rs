//! `qtrap`: build CSS quantum LDPC codes, census their trapping sets, and
//! run syndrome-decoding experiments.
//!
//! Exit codes: 0 success, 1 experiment infeasible on the given input,
//! 2 usage or malformed input.

use clap::{ArgGroup, Args, Parser, Subcommand};
use qtrap_core::alist::save_alist;
use qtrap_core::codes::{BuiltCode, CodeSpec, CssCode, Side};
use qtrap_core::decoder::{DecodeResult, DecoderSpec, SyndromeDecoder};
use qtrap_core::sim::{
    fer_csv, fer_sweep, fer_vs_iterations, iter_fer_csv, Classifier, DEFAULT_MIN_FAILURES,
};
use qtrap_core::tanner::TannerGraph;
use qtrap_core::trapping::{
    census_csv, find_classical_ts, find_symmetric_stabilizers, group_census, measure_ts,
    record_for, CensusRow, MeasureMode, TsClass,
};
use qtrap_core::BitVec;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

// ---------------------------------------------------------------------------
// Error handling with the documented exit codes
// ---------------------------------------------------------------------------

enum CliError {
    /// Exit 2: bad flags, malformed spec files, unreadable inputs.
    Usage(String),
    /// Exit 1: well-formed request that cannot run on this input.
    Infeasible(String),
}

impl From<qtrap_core::Error> for CliError {
    fn from(e: qtrap_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn infeasible(msg: impl Into<String>) -> CliError {
    CliError::Infeasible(msg.into())
}

// ---------------------------------------------------------------------------
// Argument groups
// ---------------------------------------------------------------------------

#[derive(Args)]
#[command(group = ArgGroup::new("code_input").required(true).multiple(false))]
struct CodeInput {
    /// Path to a code spec file (key=value lines; see README).
    #[arg(long, group = "code_input")]
    spec: Option<PathBuf>,
    /// Code name resolved against NAME, NAME.code, NAME.alist under both
    /// the working directory and data/.
    #[arg(long, group = "code_input")]
    code: Option<String>,
}

impl CodeInput {
    fn resolve_path(&self) -> CliResult<PathBuf> {
        if let Some(p) = &self.spec {
            return Ok(p.clone());
        }
        let name = self.code.as_ref().expect("clap group guarantees one");
        let candidates = [
            PathBuf::from(name),
            PathBuf::from(format!("{name}.code")),
            PathBuf::from(format!("{name}.alist")),
            PathBuf::from("data").join(format!("{name}.code")),
            PathBuf::from("data").join(format!("{name}.alist")),
            PathBuf::from("data").join(name),
        ];
        candidates
            .iter()
            .find(|p| p.is_file())
            .cloned()
            .ok_or_else(|| {
                usage(format!(
                    "code {name:?} not found (tried {})",
                    candidates
                        .iter()
                        .map(|p| p.display().to_string())
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })
    }

    fn load(&self) -> CliResult<(CodeSpec, PathBuf)> {
        let path = self.resolve_path()?;
        Ok((CodeSpec::load(&path)?, path))
    }

    fn build(&self) -> CliResult<(CodeSpec, PathBuf, BuiltCode)> {
        let (spec, path) = self.load()?;
        let built = spec.build()?;
        Ok((spec, path, built))
    }
}

/// Decoder configuration: optional key=value file, overridden by flags.
#[derive(Args)]
struct DecoderArgs {
    /// Decoder spec file with key=value lines (algorithm, schedule, layers,
    /// max_iters, p, msa_scale, quant, trajectory).
    #[arg(long)]
    decoder_spec: Option<PathBuf>,
    /// Algorithm: gallager_b | min_sum | sum_product.
    #[arg(long)]
    alg: Option<String>,
    /// Schedule: flooding | layered.
    #[arg(long)]
    sched: Option<String>,
    /// Layer plan for layered schedules: seq | halves.
    #[arg(long)]
    layers: Option<String>,
    /// Maximum decoding iterations.
    #[arg(long)]
    iters: Option<usize>,
    /// Channel crossover probability for the a-priori value.
    #[arg(long)]
    channel_p: Option<f64>,
    /// Min-sum check message scale factor in (0, 1].
    #[arg(long)]
    msa_scale: Option<f64>,
    /// Quantize messages to {-B..B}: an integer bound, or "none".
    #[arg(long)]
    quant: Option<String>,
}

impl DecoderArgs {
    /// Resolution order: defaults, then the spec file, then flags.
    fn build(&self) -> CliResult<DecoderSpec> {
        let mut text = String::new();
        if let Some(path) = &self.decoder_spec {
            text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("decoder spec {}: {e}", path.display())))?;
        }
        let overrides: Vec<(&str, Option<String>)> = vec![
            ("algorithm", self.alg.clone()),
            ("schedule", self.sched.clone()),
            ("layers", self.layers.clone()),
            ("max_iters", self.iters.map(|v| v.to_string())),
            ("p", self.channel_p.map(|v| v.to_string())),
            ("msa_scale", self.msa_scale.map(|v| v.to_string())),
            ("quant", self.quant.clone()),
        ];
        for (key, value) in overrides {
            if let Some(value) = value {
                if !text.trim().is_empty() {
                    text.push(',');
                }
                let _ = write!(text, "{key}={value}");
            }
        }
        Ok(DecoderSpec::parse(&text)?)
    }
}

// ---------------------------------------------------------------------------
// CLI surface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "qtrap",
    version,
    about = "CSS quantum LDPC codes: construction, trapping sets, decoding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from its spec, validate it, and write alist files.
    Construct {
        #[command(flatten)]
        code: CodeInput,
        /// Directory receiving <name>_hx.alist/<name>_hz.alist (CSS) or
        /// <name>.alist (classical).
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Print code parameters: n, k, girth, degree ranges, ranks.
    Params {
        #[command(flatten)]
        code: CodeInput,
    },
    /// Exact simple-cycle census of a decoding graph as CSV.
    Cycles {
        #[command(flatten)]
        code: CodeInput,
        #[command(flatten)]
        graph: GraphChoice,
        /// Largest cycle length counted.
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classical-type trapping-set census as CSV.
    Ts {
        #[command(flatten)]
        code: CodeInput,
        #[command(flatten)]
        graph: GraphChoice,
        /// Largest variable-node count a.
        #[arg(long, default_value_t = 5)]
        a_max: usize,
        /// Largest odd-degree-check count b.
        #[arg(long, default_value_t = 5)]
        b_max: usize,
        /// Per-check induced degree cap: an integer, or "none".
        #[arg(long, default_value = "2")]
        cn_cap: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symmetric stabilizer trapping-set census as CSV (CSS codes).
    Symm {
        #[command(flatten)]
        code: CodeInput,
        /// Error side whose decoding graph is searched.
        #[arg(long, default_value = "x")]
        side: String,
        /// Largest stabilizer support weight kept.
        #[arg(long, default_value_t = 10)]
        w_max: usize,
        /// Stabilizer rows combined per candidate (XOR depth).
        #[arg(long, default_value_t = 2)]
        combo_depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive error injection on one trapping-set topology: reports the
    /// critical number (smallest failing weight) and strength.
    MeasureTs {
        #[command(flatten)]
        code: CodeInput,
        #[command(flatten)]
        graph: GraphChoice,
        #[command(flatten)]
        decoder: DecoderArgs,
        /// Which census to search: classical | symmetric.
        #[arg(long, default_value = "classical")]
        class: String,
        /// Variable-node count of the target class.
        #[arg(long)]
        a: Option<usize>,
        /// Odd-degree-check count of the target class.
        #[arg(long)]
        b: Option<usize>,
        /// Cycle profile filter, e.g. "x^6+x^8+x^10".
        #[arg(long)]
        profile: Option<String>,
        /// Explicit variable nodes (comma-separated), bypassing the census.
        #[arg(long)]
        vns: Option<String>,
        /// isolated: decode on the induced subgraph; in_situ: full graph.
        #[arg(long, default_value = "isolated")]
        mode: String,
        /// Census cn cap for class=classical (integer or "none").
        #[arg(long, default_value = "2")]
        cn_cap: String,
        /// w_max for class=symmetric.
        #[arg(long, default_value_t = 10)]
        w_max: usize,
        /// combo_depth for class=symmetric.
        #[arg(long, default_value_t = 2)]
        combo_depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a single syndrome (or the syndrome of a given error).
    Decode {
        #[command(flatten)]
        code: CodeInput,
        #[command(flatten)]
        graph: GraphChoice,
        #[command(flatten)]
        decoder: DecoderArgs,
        /// Error support, comma-separated variable indices; its syndrome is
        /// decoded and the estimate classified.
        #[arg(long, conflicts_with = "syndrome")]
        error: Option<String>,
        /// Syndrome support, comma-separated check indices.
        #[arg(long)]
        syndrome: Option<String>,
        /// Print the estimate after every iteration.
        #[arg(long, default_value_t = false)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo frame-error-rate sweep over crossover probabilities.
    Fer {
        #[command(flatten)]
        code: CodeInput,
        /// Error side: x | z.
        #[arg(long, default_value = "x")]
        side: String,
        #[command(flatten)]
        decoder: DecoderArgs,
        /// Comma-separated crossover probabilities p' (the physical p is
        /// reported as 1.5 p').
        #[arg(long)]
        p: String,
        /// Failures collected per point before moving on.
        #[arg(long, default_value_t = DEFAULT_MIN_FAILURES)]
        min_failures: u64,
        /// Trial cap per point.
        #[arg(long, default_value_t = 1_000_000)]
        max_trials: u64,
        /// Base RNG seed; drawn from OS entropy and logged when omitted.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for trial parallelism (results are identical for
        /// any value).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frame error rate versus iteration count at a fixed crossover.
    FerIter {
        #[command(flatten)]
        code: CodeInput,
        /// Error side: x | z.
        #[arg(long, default_value = "x")]
        side: String,
        #[command(flatten)]
        decoder: DecoderArgs,
        /// Crossover probability p'.
        #[arg(long)]
        p: f64,
        /// Comma-separated iteration checkpoints.
        #[arg(long)]
        iter_grid: String,
        /// Trials (each decoded once at the largest checkpoint).
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Base RNG seed; drawn from OS entropy and logged when omitted.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for trial parallelism.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Which Tanner graph a graph-level subcommand works on: a CSS side's
/// decoding graph, or the column/row graph of a classical matrix.
#[derive(Args)]
struct GraphChoice {
    /// Error side for CSS codes: x | z.
    #[arg(long, default_value = "x")]
    side: String,
    /// Graph of a classical matrix: col (H) | row (H transposed).
    #[arg(long, default_value = "col")]
    graph: String,
}

impl GraphChoice {
    /// Returns the selected graph and a label for output headers.
    fn select(&self, built: &BuiltCode) -> CliResult<(TannerGraph, String)> {
        match built {
            BuiltCode::Css(code) => {
                let side = Side::parse(&self.side)?;
                Ok((
                    TannerGraph::from_parity(code.decoding_matrix(side)),
                    format!("side={side}"),
                ))
            }
            BuiltCode::Classical(h) => match self.graph.as_str() {
                "col" => Ok((TannerGraph::from_parity(h), "graph=col".into())),
                "row" => Ok((
                    TannerGraph::from_parity(&h.transpose()),
                    "graph=row".into(),
                )),
                other => Err(usage(format!("graph must be col or row, got {other:?}"))),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

fn parse_cap(s: &str) -> CliResult<Option<usize>> {
    match s {
        "none" => Ok(None),
        v => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| usage(format!("cap must be an integer or \"none\", got {v:?}"))),
    }
}

fn parse_index_list(s: &str, what: &str) -> CliResult<Vec<u32>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| usage(format!("bad {what} index {t:?}")))
        })
        .collect()
}

fn parse_f64_list(s: &str, what: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("bad {what} value {t:?}")))
        })
        .collect()
}

fn parse_usize_list(s: &str, what: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad {what} value {t:?}")))
        })
        .collect()
}

fn emit(out: &Option<PathBuf>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| usage(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn header<K: AsRef<str>>(pairs: &[(K, String)]) -> String {
    let mut s = String::new();
    for (k, v) in pairs {
        let _ = writeln!(s, "# {}={v}", k.as_ref());
    }
    s
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

/// Runs `f` inside a rayon pool of the requested size (default-sized when
/// `workers` is absent). Seed-indexed trials make results identical either way.
fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            if n == 0 {
                return Err(usage("workers must be >= 1"));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| infeasible(format!("building worker pool: {e}")))
                .map(|pool| pool.install(f))
        }
    }
}

fn require_css(built: BuiltCode, what: &str) -> CliResult<CssCode> {
    match built {
        BuiltCode::Css(code) => Ok(code),
        BuiltCode::Classical(_) => Err(infeasible(format!(
            "{what} needs a CSS code; this spec builds a classical matrix"
        ))),
    }
}

fn graph_girth(g: &TannerGraph) -> String {
    g.girth().map_or("none".into(), |v| v.to_string())
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

fn cmd_construct(code: &CodeInput, out_dir: &Path) -> CliResult<()> {
    let (spec, path, built) = code.build()?;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| usage(format!("creating {}: {e}", out_dir.display())))?;
    eprintln!("loaded {} ({})", spec.name, path.display());
    match built {
        BuiltCode::Css(c) => {
            if !c.validate_sip() {
                return Err(usage("constructed checks do not commute"));
            }
            let hx_path = out_dir.join(format!("{}_hx.alist", spec.name));
            let hz_path = out_dir.join(format!("{}_hz.alist", spec.name));
            save_alist(&hx_path, &c.h_x)?;
            save_alist(&hz_path, &c.h_z)?;
            let girth = graph_girth(&TannerGraph::from_parity(&c.h_x));
            eprintln!("wrote {} and {}", hx_path.display(), hz_path.display());
            println!("n={} k={} girth={}", c.n, c.k, girth);
        }
        BuiltCode::Classical(h) => {
            let out = out_dir.join(format!("{}.alist", spec.name));
            save_alist(&out, &h)?;
            let girth = graph_girth(&TannerGraph::from_parity(&h));
            eprintln!("wrote {}", out.display());
            println!("n={} k={} girth={}", h.cols(), h.cols() - h.rank(), girth);
        }
    }
    Ok(())
}

fn degree_range(counts: impl Iterator<Item = usize>) -> String {
    let mut lo = usize::MAX;
    let mut hi = 0;
    for d in counts {
        lo = lo.min(d);
        hi = hi.max(d);
    }
    if lo == hi {
        lo.to_string()
    } else {
        format!("{lo}..{hi}")
    }
}

fn cmd_params(code: &CodeInput) -> CliResult<()> {
    let (spec, path, built) = code.build()?;
    println!("name={}", spec.name);
    println!("spec_path={}", path.display());
    match built {
        BuiltCode::Css(c) => {
            println!("kind=css");
            println!("n={}", c.n);
            println!("k={}", c.k);
            for (label, h) in [("hx", &c.h_x), ("hz", &c.h_z)] {
                let g = TannerGraph::from_parity(h);
                println!("{label}_rows={}", h.rows());
                println!("{label}_rank={}", h.rank());
                println!("{label}_girth={}", graph_girth(&g));
                println!(
                    "{label}_vn_degree={}",
                    degree_range((0..g.n_vns()).map(|v| g.vn_degree(v as u32)))
                );
                println!(
                    "{label}_cn_degree={}",
                    degree_range((0..g.n_cns()).map(|c| g.cn_degree(c as u32)))
                );
            }
        }
        BuiltCode::Classical(h) => {
            let g = TannerGraph::from_parity(&h);
            println!("kind=classical");
            println!("rows={}", h.rows());
            println!("n={}", h.cols());
            println!("rank={}", h.rank());
            println!("k={}", h.cols() - h.rank());
            println!("girth={}", graph_girth(&g));
            println!(
                "vn_degree={}",
                degree_range((0..g.n_vns()).map(|v| g.vn_degree(v as u32)))
            );
            println!(
                "cn_degree={}",
                degree_range((0..g.n_cns()).map(|c| g.cn_degree(c as u32)))
            );
        }
    }
    Ok(())
}

fn cmd_cycles(
    code: &CodeInput,
    graph: &GraphChoice,
    max_len: usize,
    out: &Option<PathBuf>,
) -> CliResult<()> {
    let (spec, path, built) = code.build()?;
    let (g, label) = graph.select(&built)?;
    let profile = g.cycle_census(max_len);
    let mut body = header(&[
        ("code", spec.name.clone()),
        ("spec_path", path.display().to_string()),
        ("graph", label.clone()),
        ("max_len", max_len.to_string()),
        ("girth", graph_girth(&g)),
    ]);
    body.push_str("length,count\n");
    for (len, count) in profile.iter() {
        let _ = writeln!(body, "{len},{count}");
    }
    emit(out, &body)
}

fn census_header(
    spec: &CodeSpec,
    path: &Path,
    label: &str,
    extra: &[(&str, String)],
) -> Vec<(String, String)> {
    let mut pairs = vec![
        ("code".to_string(), spec.name.clone()),
        ("spec_path".to_string(), path.display().to_string()),
        ("graph".to_string(), label.to_string()),
    ];
    for (k, v) in extra {
        pairs.push((k.to_string(), v.clone()));
    }
    pairs
}

fn cmd_ts(
    code: &CodeInput,
    graph: &GraphChoice,
    a_max: usize,
    b_max: usize,
    cn_cap: &str,
    out: &Option<PathBuf>,
) -> CliResult<()> {
    let (spec, path, built) = code.build()?;
    let (g, label) = graph.select(&built)?;
    let cap = parse_cap(cn_cap)?;
    let records = find_classical_ts(&g, a_max, b_max, cap)?;
    let rows = group_census(&records);
    let mut body = header(&census_header(
        &spec,
        &path,
        &label,
        &[
            ("a_max", a_max.to_string()),
            ("b_max", b_max.to_string()),
            ("cn_cap", cn_cap.to_string()),
        ],
    ));
    let _ = writeln!(body, "# records={}", records.len());
    body.push_str(&census_csv(&rows));
    emit(out, &body)
}

fn cmd_symm(
    code: &CodeInput,
    side: &str,
    w_max: usize,
    combo_depth: usize,
    out: &Option<PathBuf>,
) -> CliResult<()> {
    let (spec, path, built) = code.build()?;
    let css = require_css(built, "symmetric stabilizer census")?;
    let side = Side::parse(side)?;
    let records = find_symmetric_stabilizers(&css, side, w_max, combo_depth)?;
    let rows = group_census(&records);
    let mut body = header(&census_header(
        &spec,
        &path,
        &format!("side={side}"),
        &[
            ("w_max", w_max.to_string()),
            ("combo_depth", combo_depth.to_string()),
        ],
    ));
    let _ = writeln!(body, "# records={}", records.len());
    body.push_str(&census_csv(&rows));
    emit(out, &body)
}

struct MeasureTarget {
    row: CensusRow,
}

fn measure_targets(
    g: &TannerGraph,
    built: &BuiltCode,
    class: &str,
    side_label: &str,
    a: Option<usize>,
    b: Option<usize>,
    profile: Option<&str>,
    vns: Option<&str>,
    cn_cap: Option<usize>,
    w_max: usize,
    combo_depth: usize,
) -> CliResult<Vec<MeasureTarget>> {
    let ts_class = match class {
        "classical" => TsClass::Classical,
        "symmetric" => TsClass::SymmetricStabilizer,
        other => {
            return Err(usage(format!(
                "class must be classical or symmetric, got {other:?}"
            )))
        }
    };
    if let Some(vns) = vns {
        let vns = parse_index_list(vns, "variable")?;
        if vns.is_empty() {
            return Err(usage("--vns must list at least one variable node"));
        }
        let record = record_for(g, &vns, ts_class)?;
        return Ok(group_census(&[record])
            .into_iter()
            .map(|row| MeasureTarget { row })
            .collect());
    }
    let a = a.ok_or_else(|| usage("--a is required unless --vns is given"))?;
    let b = b.ok_or_else(|| usage("--b is required unless --vns is given"))?;
    let records = match class {
        "classical" => find_classical_ts(g, a, b, cn_cap)?,
        _ => {
            let BuiltCode::Css(css) = built else {
                return Err(infeasible(
                    "class=symmetric needs a CSS code; this spec builds a classical matrix",
                ));
            };
            let side = Side::parse(side_label.trim_start_matches("side="))?;
            find_symmetric_stabilizers(css, side, w_max.max(a), combo_depth)?
        }
    };
    let rows: Vec<CensusRow> = group_census(&records)
        .into_iter()
        .filter(|r| r.a == a && r.b == b)
        .filter(|r| profile.map_or(true, |p| r.profile.poly() == p))
        .collect();
    if rows.is_empty() {
        return Err(infeasible(format!(
            "no ({a},{b}) trapping-set class{} found in this graph",
            profile.map_or(String::new(), |p| format!(" with profile {p}"))
        )));
    }
    Ok(rows.into_iter().map(|row| MeasureTarget { row }).collect())
}

#[allow(clippy::too_many_arguments)]
fn cmd_measure_ts(
    code: &CodeInput,
    graph: &GraphChoice,
    decoder: &DecoderArgs,
    class: &str,
    a: Option<usize>,
    b: Option<usize>,
    profile: Option<&str>,
    vns: Option<&str>,
    mode: &str,
    cn_cap: &str,
    w_max: usize,
    combo_depth: usize,
    out: &Option<PathBuf>,
) -> CliResult<()> {
    let (spec, path, built) = code.build()?;
    let (g, label) = graph.select(&built)?;
    let dec = decoder.build()?;
    let mode = match mode {
        "isolated" => MeasureMode::Isolated,
        "in_situ" | "in-situ" => MeasureMode::InSitu,
        other => {
            return Err(usage(format!(
                "mode must be isolated or in_situ, got {other:?}"
            )))
        }
    };
    let cap = parse_cap(cn_cap)?;
    let targets = measure_targets(
        &g, &built, class, &label, a, b, profile, vns, cap, w_max, combo_depth,
    )?;
    let mut body = header(&[
        ("code", spec.name.clone()),
        ("spec_path", path.display().to_string()),
        ("graph", label.clone()),
        ("class", class.to_string()),
        (
            "mode",
            match mode {
                MeasureMode::Isolated => "isolated".to_string(),
                MeasureMode::InSitu => "in_situ".to_string(),
            },
        ),
        ("decoder", dec.format()),
    ]);
    body.push_str(
        "class,a,b,cycle_profile,instances,example_vns,critical_number,strength,failing_by_weight\n",
    );
    for target in &targets {
        let row = &target.row;
        let record = record_for(&g, &row.example, row.class)?;
        let report = measure_ts(&g, &record, &dec, mode)?;
        let mu = report
            .critical_number
            .map_or(String::new(), |v| v.to_string());
        let by_weight = report
            .failing_by_weight
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let example = row
            .example
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            body,
            "{},{},{},{},{},{},{},{},{}",
            row.class.label(),
            row.a,
            row.b,
            row.profile.poly(),
            row.count,
            example,
            mu,
            report.strength,
            by_weight
        );
    }
    emit(out, &body)
}

fn format_support(v: &BitVec) -> String {
    v.ones()
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[allow(clippy::too_many_arguments)]
fn cmd_decode(
    code: &CodeInput,
    graph: &GraphChoice,
    decoder: &DecoderArgs,
    error: Option<&str>,
    syndrome_in: Option<&str>,
    trace: bool,
    out: &Option<PathBuf>,
) -> CliResult<()> {
    let (spec, path, built) = code.build()?;
    let (g, label) = graph.select(&built)?;
    let mut dec = decoder.build()?;
    if trace {
        dec.record_trajectory = true;
    }
    let (sigma, error_vec): (BitVec, Option<BitVec>) = match (error, syndrome_in) {
        (Some(e), None) => {
            let support = parse_index_list(e, "variable")?;
            for &v in &support {
                if v as usize >= g.n_vns() {
                    return Err(usage(format!(
                        "error index {v} out of range (n={})",
                        g.n_vns()
                    )));
                }
            }
            let e = BitVec::from_support(g.n_vns(), &support.iter().map(|&v| v as usize).collect::<Vec<_>>());
            (g.syndrome(&e)?, Some(e))
        }
        (None, Some(s)) => {
            let support = parse_index_list(s, "check")?;
            for &c in &support {
                if c as usize >= g.n_cns() {
                    return Err(usage(format!(
                        "syndrome index {c} out of range (m={})",
                        g.n_cns()
                    )));
                }
            }
            let sigma = BitVec::from_support(
                g.n_cns(),
                &support.iter().map(|&c| c as usize).collect::<Vec<_>>(),
            );
            (sigma, None)
        }
        _ => {
            return Err(usage(
                "decode needs exactly one of --error or --syndrome",
            ))
        }
    };
    let mut engine = SyndromeDecoder::new(&g, &dec)?;
    let result: DecodeResult = engine.decode(&sigma)?;
    let mut body = header(&[
        ("code", spec.name.clone()),
        ("spec_path", path.display().to_string()),
        ("graph", label.clone()),
        ("decoder", dec.format()),
    ]);
    let _ = writeln!(body, "syndrome={}", format_support(&sigma));
    if let Some(e) = &error_vec {
        let _ = writeln!(body, "error={}", format_support(e));
    }
    let _ = writeln!(body, "matched={}", result.matched);
    let _ = writeln!(body, "iters_used={}", result.iters_used);
    let _ = writeln!(body, "e_hat={}", format_support(&result.e_hat));
    if let Some(e) = &error_vec {
        let mut residual = e.clone();
        residual.xor_assign(&result.e_hat);
        let _ = writeln!(body, "residual={}", format_support(&residual));
        if let BuiltCode::Css(css) = &built {
            let side = Side::parse(&graph.side)?;
            let outcome = Classifier::new(css, side).classify_estimate(
                e,
                &result.e_hat,
                result.matched,
                result.iters_used,
            );
            let _ = writeln!(body, "outcome={}", outcome.kind.label());
        }
    }
    if trace {
        if let Some(traj) = &result.trajectory {
            for (i, est) in traj.iter().enumerate() {
                let _ = writeln!(body, "iter_{}={}", i + 1, format_support(est));
            }
        }
    }
    emit(out, &body)
}

#[allow(clippy::too_many_arguments)]
fn cmd_fer(
    code: &CodeInput,
    side: &str,
    decoder: &DecoderArgs,
    p: &str,
    min_failures: u64,
    max_trials: u64,
    seed: Option<u64>,
    workers: Option<usize>,
    out: &Option<PathBuf>,
) -> CliResult<()> {
    let (spec, path, built) = code.build()?;
    let css = require_css(built, "frame-error-rate sweeps")?;
    let side = Side::parse(side)?;
    let dec = decoder.build()?;
    let p_list = parse_f64_list(p, "p")?;
    if p_list.is_empty() {
        return Err(usage("--p must list at least one crossover probability"));
    }
    let seed = resolve_seed(seed);
    eprintln!(
        "fer: code={} side={side} points={} seed={seed} workers={}",
        spec.name,
        p_list.len(),
        workers.map_or("default".into(), |w| w.to_string())
    );
    let points = with_workers(workers, || {
        fer_sweep(&css, side, &dec, &p_list, min_failures, max_trials, seed)
    })?
    .map_err(|e| infeasible(e.to_string()))?;
    let mut body = header(&[
        ("code", spec.name.clone()),
        ("spec_path", path.display().to_string()),
        ("side", side.to_string()),
        ("decoder", dec.format()),
        (
            "p_list",
            p_list
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("min_failures", min_failures.to_string()),
        ("max_trials", max_trials.to_string()),
        ("seed", seed.to_string()),
    ]);
    body.push_str(&fer_csv(&points));
    emit(out, &body)
}

#[allow(clippy::too_many_arguments)]
fn cmd_fer_iter(
    code: &CodeInput,
    side: &str,
    decoder: &DecoderArgs,
    p: f64,
    iter_grid: &str,
    trials: u64,
    seed: Option<u64>,
    workers: Option<usize>,
    out: &Option<PathBuf>,
) -> CliResult<()> {
    let (spec, path, built) = code.build()?;
    let css = require_css(built, "iteration-resolved FER")?;
    let side = Side::parse(side)?;
    let mut dec = decoder.build()?;
    dec.record_trajectory = true;
    let grid = parse_usize_list(iter_grid, "iteration")?;
    let seed = resolve_seed(seed);
    eprintln!(
        "fer-iter: code={} side={side} p'={p} grid={grid:?} trials={trials} seed={seed}",
        spec.name
    );
    let rows = with_workers(workers, || {
        fer_vs_iterations(&css, side, &dec, p, &grid, trials, seed)
    })?
    .map_err(|e| infeasible(e.to_string()))?;
    let mut body = header(&[
        ("code", spec.name.clone()),
        ("spec_path", path.display().to_string()),
        ("side", side.to_string()),
        ("decoder", dec.format()),
        ("p_prime", p.to_string()),
        (
            "iter_grid",
            grid.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("trials", trials.to_string()),
        ("seed", seed.to_string()),
    ]);
    body.push_str(&iter_fer_csv(&rows));
    emit(out, &body)
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Construct { code, out_dir } => cmd_construct(code, out_dir),
        Command::Params { code } => cmd_params(code),
        Command::Cycles {
            code,
            graph,
            max_len,
            out,
        } => cmd_cycles(code, graph, *max_len, out),
        Command::Ts {
            code,
            graph,
            a_max,
            b_max,
            cn_cap,
            out,
        } => cmd_ts(code, graph, *a_max, *b_max, cn_cap, out),
        Command::Symm {
            code,
            side,
            w_max,
            combo_depth,
            out,
        } => cmd_symm(code, side, *w_max, *combo_depth, out),
        Command::MeasureTs {
            code,
            graph,
            decoder,
            class,
            a,
            b,
            profile,
            vns,
            mode,
            cn_cap,
            w_max,
            combo_depth,
            out,
        } => cmd_measure_ts(
            code,
            graph,
            decoder,
            class,
            *a,
            *b,
            profile.as_deref(),
            vns.as_deref(),
            mode,
            cn_cap,
            *w_max,
            *combo_depth,
            out,
        ),
        Command::Decode {
            code,
            graph,
            decoder,
            error,
            syndrome,
            trace,
            out,
        } => cmd_decode(
            code,
            graph,
            decoder,
            error.as_deref(),
            syndrome.as_deref(),
            *trace,
            out,
        ),
        Command::Fer {
            code,
            side,
            decoder,
            p,
            min_failures,
            max_trials,
            seed,
            workers,
            out,
        } => cmd_fer(
            code,
            side,
            decoder,
            p,
            *min_failures,
            *max_trials,
            *seed,
            *workers,
            out,
        ),
        Command::FerIter {
            code,
            side,
            decoder,
            p,
            iter_grid,
            trials,
            seed,
            workers,
            out,
        } => cmd_fer_iter(
            code,
            side,
            decoder,
            *p,
            iter_grid,
            *trials,
            *seed,
            *workers,
            out,
        ),
    }
}

fn main() {
    // Die quietly when stdout is a closed pipe (e.g. `qtrap ... | head`)
    // instead of panicking on the broken-pipe write error.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Infeasible(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(1);
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}
