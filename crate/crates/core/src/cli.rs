//! Command-line front end. [`run`] executes a parsed [`Cli`] and writes the
//! human-readable output to the supplied writer; files are written atomically.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{fmt_num, standard_table, BoundSpec, CriterionTemplate, Quantity};
use crate::correlations::NormTable;
use crate::detect::{
    default_criteria, evaluate, evaluate_table, noise_sweep, sequential_acquire, AcquisitionRecord, DetectionReport,
    Grid, Misalignment, NoiseSweepResult, Schedule,
};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::spec::{read_matrix_file, StateSpec};
use crate::stabilizer::{Graph, StabilizerGroup};
use crate::states::DensityMatrix;

#[derive(Debug, Parser)]
#[command(
    name = "tensornorm",
    version,
    about = "Correlation-tensor norms and frame-free entanglement criteria"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Largest allowed n·log2(d) for dense states.
    #[arg(long, global = true, default_value_t = 14.0)]
    pub dim_cap: f64,

    /// Largest allowed local dimension.
    #[arg(long, global = true, default_value_t = 7)]
    pub max_d: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of every bound applicable to (n, d).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Norm table, C_x values and criterion verdicts for a state.
    Analyze {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        criteria: CriteriaArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// White-noise sweep with per-criterion detection thresholds.
    Sweep {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        criteria: CriteriaArgs,
        /// Mixing weights as start:stop:step.
        #[arg(long, default_value = "0:1:0.01")]
        grid: Grid,
        /// Print the threshold summary as JSON.
        #[arg(long)]
        json: bool,
        /// CSV destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON threshold summary destination.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Directory receiving one two-column `p quantity` file per criterion.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Simulated element-by-element acquisition under unknown local frames.
    Sequential {
        #[command(flatten)]
        state: StateArgs,
        /// Target criterion; defaults to cutoff-bisep-max at x = n/2+1.
        #[arg(long)]
        target: Option<CriterionTemplate>,
        /// Default cutoff for the target when it carries none.
        #[arg(long)]
        x: Option<usize>,
        /// Default rank vector for a dim-vector target.
        #[arg(long, value_delimiter = ',')]
        ranks: Option<Vec<usize>>,
        #[arg(long, default_value = "greedy-expected")]
        schedule: Schedule,
        /// Seed for Haar-random local frames; frames stay aligned when omitted.
        #[arg(long)]
        seed: Option<u64>,
        /// Maximum number of revealed elements.
        #[arg(long)]
        budget: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Graph-state analysis on the stabilizer path (no dense matrices).
    Graph {
        /// Edge list such as 1-2,2-3,3-4,4-1.
        #[arg(long)]
        edges: String,
        /// Number of vertices; defaults to the largest label in the edge list.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        criteria: CriteriaArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Ghz,
    W,
    Ame43,
    Graph,
    Product,
}

/// Exactly one of `--state` or `--kind` selects the input.
#[derive(Debug, Args)]
pub struct StateArgs {
    /// StateSpec JSON or matrix file.
    #[arg(long, conflicts_with = "kind", required_unless_present = "kind")]
    pub state: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Mixing weight with white noise, p·ρ + (1-p)·I/d^n.
    #[arg(long)]
    pub p: Option<f64>,
    /// Edge list for --kind graph.
    #[arg(long)]
    pub edges: Option<String>,
}

#[derive(Debug, Args)]
pub struct CriteriaArgs {
    /// Criterion such as purity-ksep:2, cutoff-bisep-max:3, dim-vector:2,2,3 (repeatable).
    #[arg(long = "criteria", value_name = "TAG")]
    pub criteria: Vec<CriterionTemplate>,
    /// Default cutoff for cutoff criteria without one.
    #[arg(long)]
    pub x: Option<usize>,
    /// Rank vector for dim-vector criteria; also adds dim-vector to the default set.
    #[arg(long, value_delimiter = ',')]
    pub ranks: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Print JSON instead of the human-readable table.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl StateArgs {
    pub fn load(&self, limits: &Limits) -> Result<(String, DensityMatrix)> {
        let (name, rho) = match (&self.state, self.kind) {
            (Some(path), _) => load_state_file(path, limits)?,
            (None, Some(kind)) => {
                let spec = self.inline_spec(kind)?;
                (spec.describe(), spec.build(limits, None)?)
            }
            (None, None) => return Err(Error::InvalidParameter("give --state or --kind".into())),
        };
        match self.p {
            Some(p) => Ok((format!("mix(p={p},{name})"), rho.mix_with_white_noise(p)?)),
            None => Ok((name, rho)),
        }
    }

    fn inline_spec(&self, kind: Kind) -> Result<StateSpec> {
        let need = |v: Option<usize>, flag: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("--kind {kind:?} needs --{flag}").to_lowercase()))
        };
        Ok(match kind {
            Kind::Ghz => StateSpec::Ghz {
                n: need(self.n, "n")?,
                d: self.d.unwrap_or(2),
            },
            Kind::W => StateSpec::W { n: need(self.n, "n")? },
            Kind::Ame43 => StateSpec::Ame43,
            Kind::Graph => {
                let edges = self
                    .edges
                    .as_deref()
                    .ok_or_else(|| Error::InvalidParameter("--kind graph needs --edges".into()))?;
                StateSpec::Graph {
                    adjacency: Graph::parse_edge_list(edges, self.n)?,
                }
            }
            Kind::Product => StateSpec::Product {
                d: self.d.unwrap_or(2),
                n: Some(need(self.n, "n")?),
                levels: None,
            },
        })
    }
}

/// A StateSpec JSON file if the content starts with `{`, otherwise a matrix file.
fn load_state_file(path: &Path, limits: &Limits) -> Result<(String, DensityMatrix)> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let spec = StateSpec::from_json(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let rho = spec.build(limits, path.parent())?;
        Ok((spec.describe(), rho))
    } else {
        Ok((
            format!("matrix-file({})", path.display()),
            read_matrix_file(path, limits)?,
        ))
    }
}

impl CriteriaArgs {
    fn resolve(&self, n: usize, d: usize) -> Result<Vec<BoundSpec>> {
        if self.criteria.is_empty() {
            return default_criteria(n, d, self.ranks.as_deref());
        }
        self.criteria
            .iter()
            .map(|t| t.instantiate(n, d, self.x, self.ranks.as_deref()))
            .collect()
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit_json<T: Serialize>(value: &T, output: &OutputArgs, out: &mut dyn Write) -> Result<bool> {
    let json = to_json(value)?;
    if let Some(path) = &output.out {
        write_atomic(path, json.as_bytes())?;
    }
    if output.json {
        out.write_all(json.as_bytes())?;
    }
    Ok(output.json)
}

fn limits_of(cli: &Cli) -> Limits {
    Limits {
        max_local_dim: cli.max_d,
        max_qubit_equiv: cli.dim_cap,
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let limits = limits_of(cli);
    match &cli.command {
        Command::Bounds { n, d, output } => cmd_bounds(*n, *d, &limits, output, out),
        Command::Analyze {
            state,
            criteria,
            output,
        } => {
            let (name, rho) = state.load(&limits)?;
            let specs = criteria.resolve(rho.n(), rho.d())?;
            let report = evaluate(&name, &rho, &specs)?;
            if !emit_json(&report, output, out)? {
                render_report(&report, out)?;
            }
            Ok(())
        }
        Command::Sweep {
            state,
            criteria,
            grid,
            json,
            out: csv_path,
            summary,
            plot_data,
        } => {
            let (name, rho) = state.load(&limits)?;
            let specs = if criteria.criteria.is_empty() {
                (2..=rho.n())
                    .map(|k| BoundSpec::PurityKsep {
                        n: rho.n(),
                        d: rho.d(),
                        k,
                    })
                    .collect()
            } else {
                criteria.resolve(rho.n(), rho.d())?
            };
            let result = noise_sweep(&name, &rho, &specs, grid)?;
            cmd_sweep_output(
                &result,
                *json,
                csv_path.as_deref(),
                summary.as_deref(),
                plot_data.as_deref(),
                out,
            )
        }
        Command::Sequential {
            state,
            target,
            x,
            ranks,
            schedule,
            seed,
            budget,
            output,
        } => {
            let (_, rho) = state.load(&limits)?;
            let (n, d) = (rho.n(), rho.d());
            let target = match target {
                Some(t) => t.instantiate(n, d, *x, ranks.as_deref())?,
                None => BoundSpec::CutoffBisepMax {
                    n,
                    d,
                    x: x.unwrap_or(n / 2 + 1),
                },
            };
            let misalignment = seed.map_or(Misalignment::Identity, |seed| Misalignment::Haar { seed });
            let record = sequential_acquire(&rho, &target, misalignment, *schedule, *budget)?;
            if !emit_json(&record, output, out)? {
                render_record(&record, out)?;
            }
            Ok(())
        }
        Command::Graph {
            edges,
            n,
            criteria,
            output,
        } => {
            let graph = Graph::parse_edge_list(edges, *n)?;
            let report = graph_report(&graph, criteria)?;
            if !emit_json(&report, output, out)? {
                writeln!(out, "weight enumerator: {:?}", report.weight_enumerator)?;
                render_report(&report.report, out)?;
            }
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
struct BoundRow {
    criterion: String,
    spec: BoundSpec,
    quantity: Quantity,
    value: f64,
    notes: String,
}

fn cmd_bounds(n: usize, d: usize, limits: &Limits, output: &OutputArgs, out: &mut dyn Write) -> Result<()> {
    limits.check_local_dim(d)?;
    let rows: Vec<BoundRow> = standard_table(n, d)?
        .into_iter()
        .map(|b| BoundRow {
            criterion: b.spec.label(),
            quantity: b.spec.quantity(),
            spec: b.spec,
            value: b.value,
            notes: b.notes,
        })
        .collect();
    if emit_json(&rows, output, out)? {
        return Ok(());
    }
    writeln!(out, "bounds for n={n}, d={d} (squared norms)")?;
    writeln!(out, "{:<24} {:<10} {:>12}  notes", "criterion", "quantity", "bound")?;
    for r in &rows {
        writeln!(
            out,
            "{:<24} {:<10} {:>12}  {}",
            r.criterion,
            quantity_label(r.quantity),
            fmt_num(r.value),
            r.notes
        )?;
    }
    Ok(())
}

fn quantity_label(q: Quantity) -> String {
    match q {
        Quantity::FullBody => "full-body".into(),
        Quantity::Cx(x) => format!("C_{x}"),
    }
}

fn render_report(report: &DetectionReport, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "state: {} (n={}, d={})", report.state, report.n, report.d)?;
    render_norms(&report.norms, out)?;
    writeln!(
        out,
        "{:<24} {:<10} {:>12} {:>12}  verdict",
        "criterion", "quantity", "measured", "bound"
    )?;
    for o in &report.outcomes {
        writeln!(
            out,
            "{:<24} {:<10} {:>12} {:>12}  {}",
            o.criterion,
            quantity_label(o.quantity),
            fmt_num(o.measured),
            fmt_num(o.bound),
            o.verdict
        )?;
    }
    if report.claims.is_empty() {
        writeln!(out, "claims: none")?;
    } else {
        writeln!(out, "claims:")?;
        for c in &report.claims {
            writeln!(out, "  {} [{}]", c.text, c.criteria.join(", "))?;
        }
    }
    Ok(())
}

fn render_norms(table: &NormTable, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "squared full-body norms:")?;
    for (alpha, v) in table.iter() {
        writeln!(out, "  {{{alpha}}}  {}", fmt_num(v))?;
    }
    let cx: Vec<String> = (0..=table.n())
        .map(|x| table.cx(x).map(|c| format!("C_{x}={}", fmt_num(c.value))))
        .collect::<Result<_>>()?;
    writeln!(out, "{}", cx.join("  "))?;
    Ok(())
}

fn render_record(record: &AcquisitionRecord, out: &mut dyn Write) -> Result<()> {
    writeln!(
        out,
        "target {} (bound {}), schedule {}, misalignment {}",
        record.target,
        fmt_num(record.bound),
        record.schedule,
        match record.misalignment {
            Misalignment::Identity => "identity".to_string(),
            Misalignment::Haar { seed } => format!("haar(seed={seed})"),
        }
    )?;
    writeln!(
        out,
        "{} after {} revealed elements ({} skipped), lower bound {}",
        record.stop_reason,
        record.len(),
        record.skipped,
        fmt_num(record.final_lower_bound)
    )?;
    Ok(())
}

fn cmd_sweep_output(
    result: &NoiseSweepResult,
    json: bool,
    csv_path: Option<&Path>,
    summary: Option<&Path>,
    plot_data: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    let mut csv = Vec::new();
    result.write_csv(&mut csv)?;
    match csv_path {
        Some(path) => write_atomic(path, &csv)?,
        None if !json => out.write_all(&csv)?,
        None => {}
    }
    let summary_json = to_json(&result.thresholds)?;
    if let Some(path) = summary {
        write_atomic(path, summary_json.as_bytes())?;
    }
    if let Some(dir) = plot_data {
        fs::create_dir_all(dir)?;
        for (i, label) in result.labels.iter().enumerate() {
            let file = dir.join(format!("{}.dat", file_stem(label)));
            write_atomic(&file, result.plot_data(i).as_bytes())?;
        }
    }
    if json {
        out.write_all(summary_json.as_bytes())?;
    } else if csv_path.is_some() {
        for t in &result.thresholds {
            let p = t.threshold.map_or("none".to_string(), |p| format!("{p:.9}"));
            writeln!(out, "{:<24} threshold p* = {p}", t.criterion)?;
        }
    }
    Ok(())
}

fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect::<String>()
        .trim_end_matches('_')
        .to_string()
}

#[derive(Debug, Serialize)]
pub struct GraphReport {
    pub edges: Vec<(usize, usize)>,
    /// Number of stabilizer elements of each weight `0..=n`.
    pub weight_enumerator: Vec<u64>,
    #[serde(flatten)]
    pub report: DetectionReport,
}

pub fn graph_report(graph: &Graph, criteria: &CriteriaArgs) -> Result<GraphReport> {
    let group = StabilizerGroup::from_graph(graph)?;
    let table = group.norm_table()?;
    let specs = criteria.resolve(graph.n(), 2)?;
    let edges: Vec<(usize, usize)> = graph.edges().iter().map(|&(a, b)| (a + 1, b + 1)).collect();
    let name = format!(
        "graph(n={},edges={})",
        graph.n(),
        edges
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(GraphReport {
        edges,
        weight_enumerator: group.weight_enumerator(),
        report: evaluate_table(&name, &table, &specs)?,
    })
}
