//! Command-line explorer for the tiled-machine memory-emulation models.
//!
//! Every subcommand builds a [`Scenario`] the same way: start from the
//! defaults, overlay `--config` if given, then overlay explicit flags. The
//! subcommand then renders one view of the scenario (topology shape, message
//! latency, access latency, slowdown, area, a chart data set, or the full
//! sweep). All numbers come straight from library calls.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tilemem::latency::RouteMode;
use tilemem::scenario::{
    emit_figure, FigureId, MixChoice, OutputFormat, RunReport, RunRow, Scenario, ScenarioError,
};
use tilemem::topology::{NetworkKind, TopologyError, TopologySpec};
use tilemem::workload::InstructionMix;
use tilemem::MemoryError;

const EXIT_CONFIG: u8 = 2;
const EXIT_UNSUPPORTED_SIZE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tilemem",
    version,
    about = "Design-space explorer for tiled machines that emulate one large \
             memory over a switched interconnect"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Switch counts, diameters and mean hop distances per machine size
    Topo(ScenarioArgs),
    /// Zero-load message cost by hop count, in cycles and nanoseconds
    Latency(ScenarioArgs),
    /// Average emulated memory access latency against the flat baseline
    Memlat(ScenarioArgs),
    /// Whole-program slowdown of the emulating machine
    Slowdown(ScenarioArgs),
    /// Silicon area of the chip and memories, with the monolithic comparison
    Area(ScenarioArgs),
    /// One of the prepared chart data sets
    Figure {
        /// fig4, fig6, fig7, fig8, fig10, fig11 or fig12
        id: FigureId,
        #[command(flatten)]
        args: ScenarioArgs,
    },
    /// Full sweep: one row per (size, network, mix point)
    Sweep {
        #[command(flatten)]
        args: ScenarioArgs,
        /// Print the effective config instead of running
        #[arg(long)]
        echo_config: bool,
    },
}

#[derive(Args, Debug, Default)]
struct ScenarioArgs {
    /// Scenario config file; explicit flags override its settings
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Tile counts to evaluate, comma separated
    #[arg(long, value_delimiter = ',')]
    tiles: Vec<u32>,
    /// Networks to evaluate: clos and/or mesh
    #[arg(long, value_delimiter = ',')]
    network: Vec<NetworkKind>,
    /// Switch port count
    #[arg(long)]
    radix: Option<u32>,
    /// Workload: dhrystone, compiler or custom (with --mix-fracs)
    #[arg(long)]
    mix: Option<String>,
    /// Custom mix fractions global,local,other
    #[arg(long, value_delimiter = ',', value_name = "G,L,O")]
    mix_fracs: Option<Vec<f64>>,
    /// Global-access fractions to sweep, local share fixed at 10%
    #[arg(long, value_delimiter = ',')]
    global_frac: Vec<f64>,
    /// Total emulated memory capacity in GB
    #[arg(long)]
    capacity_gb: Option<f64>,
    /// Base seed for Monte Carlo sampling
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo draws per row; 0 stays analytic
    #[arg(long)]
    samples: Option<u64>,
    /// Worker threads; 0 uses the library default
    #[arg(long)]
    jobs: Option<usize>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Write output to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: EXIT_CONFIG,
        }
    }
}

fn topology_exit_code(err: &TopologyError) -> u8 {
    match err {
        TopologyError::ZeroTiles
        | TopologyError::NonDivisible { .. }
        | TopologyError::CapacityExceeded { .. }
        | TopologyError::UnsupportedSize { .. } => EXIT_UNSUPPORTED_SIZE,
        _ => EXIT_CONFIG,
    }
}

impl From<ScenarioError> for CliError {
    fn from(err: ScenarioError) -> Self {
        let code = match &err {
            ScenarioError::Topology(t) => topology_exit_code(t),
            ScenarioError::Memory(MemoryError::Topology(t)) => topology_exit_code(t),
            _ => EXIT_CONFIG,
        };
        CliError {
            message: err.to_string(),
            code,
        }
    }
}

impl ScenarioArgs {
    fn build_scenario(&self) -> Result<Scenario, CliError> {
        let mut s = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::config(format!("cannot read config {}: {e}", path.display()))
                })?;
                Scenario::parse_config(&text)?
            }
            None => Scenario::default(),
        };
        if !self.tiles.is_empty() {
            s.tile_counts = self.tiles.clone();
        }
        if !self.network.is_empty() {
            s.kinds = self.network.clone();
        }
        if let Some(radix) = self.radix {
            s.radix = radix;
        }
        match self.mix.as_deref() {
            None => {}
            Some("dhrystone") => s.mix = MixChoice::Dhrystone,
            Some("compiler") => s.mix = MixChoice::Compiler,
            Some("custom") => {
                let Some(fracs) = &self.mix_fracs else {
                    return Err(CliError::config(
                        "--mix custom needs --mix-fracs GLOBAL,LOCAL,OTHER",
                    ));
                };
                let [global, local, other] = fracs.as_slice() else {
                    return Err(CliError::config(format!(
                        "--mix-fracs needs exactly three values, got {}",
                        fracs.len()
                    )));
                };
                let mix = InstructionMix::new(*global, *local, *other)
                    .map_err(|e| CliError::config(e.to_string()))?;
                s.mix = MixChoice::Custom(mix);
            }
            Some(other) => {
                return Err(CliError::config(format!(
                    "unknown mix '{other}' (expected dhrystone, compiler or custom)"
                )));
            }
        }
        if !self.global_frac.is_empty() {
            s.global_fracs = self.global_frac.clone();
        }
        if let Some(capacity_gb) = self.capacity_gb {
            s.capacity_gb = capacity_gb;
        }
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(samples) = self.samples {
            s.samples = samples;
        }
        if let Some(jobs) = self.jobs {
            s.jobs = jobs;
        }
        if let Some(format) = self.format {
            s.format = format;
        }
        Ok(s)
    }

    fn emit(&self, output: &str) -> Result<(), CliError> {
        match &self.out {
            Some(path) => fs::write(path, output).map_err(|e| CliError {
                message: format!("cannot write {}: {e}", path.display()),
                code: 1,
            }),
            None => {
                print!("{output}");
                Ok(())
            }
        }
    }
}

/// Keeps the first row per (tiles, kind), dropping extra mix points from
/// views that do not depend on the workload.
fn dedup_by_machine(rows: &[RunRow]) -> Vec<&RunRow> {
    let mut seen: Option<(u32, NetworkKind)> = None;
    let mut out = Vec::new();
    for row in rows {
        if seen != Some((row.tiles, row.kind)) {
            out.push(row);
            seen = Some((row.tiles, row.kind));
        }
    }
    out
}

fn json_table(rows: Vec<serde_json::Value>) -> String {
    let mut text =
        serde_json::to_string_pretty(&serde_json::Value::Array(rows)).expect("table serialises");
    text.push('\n');
    text
}

fn topo_view(report: &RunReport, format: OutputFormat) -> String {
    let rows = dedup_by_machine(&report.rows);
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("tiles,kind,switches,diameter_hops,mean_hops\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.tiles, r.kind, r.switches, r.diameter_hops, r.mean_hops
                );
            }
            out
        }
        OutputFormat::Json => json_table(
            rows.iter()
                .map(|r| {
                    serde_json::json!({
                        "tiles": r.tiles,
                        "kind": r.kind.as_str(),
                        "switches": r.switches,
                        "diameter_hops": r.diameter_hops,
                        "mean_hops": r.mean_hops,
                    })
                })
                .collect(),
        ),
    }
}

fn memlat_view(report: &RunReport, format: OutputFormat) -> String {
    let rows = dedup_by_machine(&report.rows);
    match format {
        OutputFormat::Csv => {
            let mut out =
                String::from("tiles,kind,mean_hops,avg_access_ns,sm_access_ns,sampled_access_ns\n");
            for r in rows {
                let sampled = r
                    .sampled_access_ns
                    .map(|v| v.to_string())
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.tiles, r.kind, r.mean_hops, r.avg_access_ns, r.sm_access_ns, sampled
                );
            }
            out
        }
        OutputFormat::Json => json_table(
            rows.iter()
                .map(|r| {
                    serde_json::json!({
                        "tiles": r.tiles,
                        "kind": r.kind.as_str(),
                        "mean_hops": r.mean_hops,
                        "avg_access_ns": r.avg_access_ns,
                        "sm_access_ns": r.sm_access_ns,
                        "sampled_access_ns": r.sampled_access_ns,
                    })
                })
                .collect(),
        ),
    }
}

fn slowdown_view(report: &RunReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("tiles,kind,global_frac,slowdown,worst_case_slowdown\n");
            for r in &report.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.tiles, r.kind, r.global_frac, r.slowdown, r.worst_case_slowdown
                );
            }
            out
        }
        OutputFormat::Json => json_table(
            report
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "tiles": r.tiles,
                        "kind": r.kind.as_str(),
                        "global_frac": r.global_frac,
                        "slowdown": r.slowdown,
                        "worst_case_slowdown": r.worst_case_slowdown,
                    })
                })
                .collect(),
        ),
    }
}

fn area_view(report: &RunReport, format: OutputFormat) -> String {
    let rows = dedup_by_machine(&report.rows);
    match format {
        OutputFormat::Csv => {
            let mut out = String::from(
                "tiles,kind,processor_mm2,peripheral_mm2,switch_mm2,wire_channel_mm2,\
                 interconnect_mm2,processing_mm2,memory_total_mm2,monolithic_dram_mm2,\
                 system_total_mm2,ratio_pm_over_sm\n",
            );
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.tiles,
                    r.kind,
                    r.processor_mm2,
                    r.peripheral_mm2,
                    r.switch_mm2,
                    r.wire_channel_mm2,
                    r.interconnect_mm2,
                    r.processing_mm2,
                    r.memory_total_mm2,
                    r.monolithic_dram_mm2,
                    r.system_total_mm2,
                    r.ratio_pm_over_sm
                );
            }
            out
        }
        OutputFormat::Json => json_table(
            rows.iter()
                .map(|r| {
                    serde_json::json!({
                        "tiles": r.tiles,
                        "kind": r.kind.as_str(),
                        "processor_mm2": r.processor_mm2,
                        "peripheral_mm2": r.peripheral_mm2,
                        "switch_mm2": r.switch_mm2,
                        "wire_channel_mm2": r.wire_channel_mm2,
                        "interconnect_mm2": r.interconnect_mm2,
                        "processing_mm2": r.processing_mm2,
                        "memory_total_mm2": r.memory_total_mm2,
                        "monolithic_dram_mm2": r.monolithic_dram_mm2,
                        "system_total_mm2": r.system_total_mm2,
                        "ratio_pm_over_sm": r.ratio_pm_over_sm,
                    })
                })
                .collect(),
        ),
    }
}

/// Message cost per hop count, from zero to each machine's diameter.
fn latency_view(s: &Scenario) -> Result<String, ScenarioError> {
    s.validate()?;
    let mut rows = Vec::new();
    for &tiles in &s.tile_counts {
        for &kind in &s.kinds {
            let g = TopologySpec::with_radix(kind, tiles, s.radix).build()?;
            for hops in 0..=g.diameter() {
                rows.push((tiles, kind, hops));
            }
        }
    }
    match s.format {
        OutputFormat::Csv => {
            let mut out =
                String::from("tiles,kind,hops,open_cycles,closed_cycles,open_ns,closed_ns\n");
            for (tiles, kind, hops) in rows {
                let _ = writeln!(
                    out,
                    "{tiles},{kind},{hops},{},{},{},{}",
                    s.latency.zero_load_cycles(hops, RouteMode::Open),
                    s.latency.zero_load_cycles(hops, RouteMode::Closed),
                    s.latency.zero_load_ns(hops, RouteMode::Open),
                    s.latency.zero_load_ns(hops, RouteMode::Closed)
                );
            }
            Ok(out)
        }
        OutputFormat::Json => Ok(json_table(
            rows.into_iter()
                .map(|(tiles, kind, hops)| {
                    serde_json::json!({
                        "tiles": tiles,
                        "kind": kind.as_str(),
                        "hops": hops,
                        "open_cycles": s.latency.zero_load_cycles(hops, RouteMode::Open),
                        "closed_cycles": s.latency.zero_load_cycles(hops, RouteMode::Closed),
                        "open_ns": s.latency.zero_load_ns(hops, RouteMode::Open),
                        "closed_ns": s.latency.zero_load_ns(hops, RouteMode::Closed),
                    })
                })
                .collect(),
        )),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Topo(args) => {
            let s = args.build_scenario()?;
            let report = s.run()?;
            args.emit(&topo_view(&report, s.format))
        }
        Command::Latency(args) => {
            let s = args.build_scenario()?;
            args.emit(&latency_view(&s)?)
        }
        Command::Memlat(args) => {
            let s = args.build_scenario()?;
            let report = s.run()?;
            args.emit(&memlat_view(&report, s.format))
        }
        Command::Slowdown(args) => {
            let s = args.build_scenario()?;
            let report = s.run()?;
            args.emit(&slowdown_view(&report, s.format))
        }
        Command::Area(args) => {
            let s = args.build_scenario()?;
            let report = s.run()?;
            args.emit(&area_view(&report, s.format))
        }
        Command::Figure { id, args } => {
            let s = args.build_scenario()?;
            args.emit(&emit_figure(&s, *id)?)
        }
        Command::Sweep { args, echo_config } => {
            let s = args.build_scenario()?;
            if *echo_config {
                s.validate()?;
                args.emit(&s.to_config_string())
            } else {
                args.emit(&s.run()?.render())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
