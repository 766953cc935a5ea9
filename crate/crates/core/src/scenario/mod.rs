//! Declarative experiment runner. One [`Scenario`] names a sweep over
//! machine sizes, networks and workloads; [`Scenario::run`] prices every
//! point and returns a deterministically sorted table that renders to CSV
//! or JSON.
//!
//! A scenario serialises to a flat `key = value` config via
//! [`Scenario::to_config_string`]; parsing the echo back gives an equal
//! scenario, so any run can be reproduced from its own output.

mod figures;
pub use figures::{emit_figure, FigureId};

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::area::{system_area, AreaError, AreaParams, MemoryAreaModel, MemoryLatencyCurve};
use crate::latency::{LatencyParams, RouteMode};
use crate::memory::{AccessModel, MemoryEmulation, MemoryError};
use crate::topology::{NetworkKind, TopologyError, TopologySpec};
use crate::workload::{slowdown, worst_case_slowdown, InstructionMix, MachineModel, WorkloadError};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("no tile counts configured")]
    NoTileCounts,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown figure id '{0}' (known: fig4, fig6, fig7, fig8, fig10, fig11, fig12)")]
    UnknownFigure(String),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Memory(#[from] MemoryError),
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error(transparent)]
    Area(#[from] AreaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!(
                "unknown output format '{other}' (expected csv or json)"
            )),
        }
    }
}

impl std::fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Workload selection: a named preset or explicit fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MixChoice {
    Dhrystone,
    Compiler,
    Custom(InstructionMix),
}

impl MixChoice {
    pub fn resolve(&self) -> InstructionMix {
        match *self {
            MixChoice::Dhrystone => InstructionMix::dhrystone(),
            MixChoice::Compiler => InstructionMix::compiler(),
            MixChoice::Custom(mix) => mix,
        }
    }
}

/// Everything a run depends on. Defaults describe the reference machine:
/// both networks over the {64, 256, 1024, 4096} size ladder, the dhrystone
/// mix, 4 GB of emulated memory and analytic latencies only.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub tile_counts: Vec<u32>,
    pub kinds: Vec<NetworkKind>,
    pub radix: u32,
    pub latency: LatencyParams,
    pub access: AccessModel,
    pub mix: MixChoice,
    /// When non-empty, one row per fraction (local share fixed at 10%)
    /// replaces the single `mix` row.
    pub global_fracs: Vec<f64>,
    pub area: AreaParams,
    pub memory_model: MemoryAreaModel,
    pub capacity_gb: f64,
    pub seed: u64,
    /// Monte Carlo draws per row; zero keeps the run fully analytic.
    pub samples: u64,
    /// Worker threads for the sweep; zero takes the library default.
    pub jobs: usize,
    pub format: OutputFormat,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            tile_counts: vec![64, 256, 1024, 4096],
            kinds: vec![NetworkKind::Clos, NetworkKind::Mesh],
            radix: 32,
            latency: LatencyParams::default(),
            access: AccessModel::default(),
            mix: MixChoice::Dhrystone,
            global_fracs: Vec::new(),
            area: AreaParams::default(),
            memory_model: MemoryAreaModel::default(),
            capacity_gb: 4.0,
            seed: 0,
            samples: 0,
            jobs: 0,
            format: OutputFormat::Csv,
        }
    }
}

/// One sweep point, fully priced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub tiles: u32,
    pub kind: NetworkKind,
    pub global_frac: f64,
    pub switches: u32,
    pub diameter_hops: u32,
    pub mean_hops: f64,
    pub avg_access_ns: f64,
    pub sm_access_ns: f64,
    pub sampled_access_ns: Option<f64>,
    pub slowdown: f64,
    pub worst_case_slowdown: f64,
    pub processor_mm2: f64,
    pub peripheral_mm2: f64,
    pub switch_mm2: f64,
    pub wire_channel_mm2: f64,
    pub interconnect_mm2: f64,
    pub processing_mm2: f64,
    pub memory_total_mm2: f64,
    pub monolithic_dram_mm2: f64,
    pub system_total_mm2: f64,
    pub ratio_pm_over_sm: f64,
}

pub const CSV_HEADER: &str = "tiles,kind,global_frac,switches,diameter_hops,mean_hops,\
avg_access_ns,sm_access_ns,sampled_access_ns,slowdown,worst_case_slowdown,processor_mm2,\
peripheral_mm2,switch_mm2,wire_channel_mm2,interconnect_mm2,processing_mm2,memory_total_mm2,\
monolithic_dram_mm2,system_total_mm2,ratio_pm_over_sm";

impl RunRow {
    fn csv_line(&self) -> String {
        let sampled = match self.sampled_access_ns {
            Some(v) => v.to_string(),
            None => String::new(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.tiles,
            self.kind,
            self.global_frac,
            self.switches,
            self.diameter_hops,
            self.mean_hops,
            self.avg_access_ns,
            self.sm_access_ns,
            sampled,
            self.slowdown,
            self.worst_case_slowdown,
            self.processor_mm2,
            self.peripheral_mm2,
            self.switch_mm2,
            self.wire_channel_mm2,
            self.interconnect_mm2,
            self.processing_mm2,
            self.memory_total_mm2,
            self.monolithic_dram_mm2,
            self.system_total_mm2,
            self.ratio_pm_over_sm,
        )
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "tiles": self.tiles,
            "kind": self.kind.as_str(),
            "global_frac": self.global_frac,
            "switches": self.switches,
            "diameter_hops": self.diameter_hops,
            "mean_hops": self.mean_hops,
            "avg_access_ns": self.avg_access_ns,
            "sm_access_ns": self.sm_access_ns,
            "sampled_access_ns": self.sampled_access_ns,
            "slowdown": self.slowdown,
            "worst_case_slowdown": self.worst_case_slowdown,
            "processor_mm2": self.processor_mm2,
            "peripheral_mm2": self.peripheral_mm2,
            "switch_mm2": self.switch_mm2,
            "wire_channel_mm2": self.wire_channel_mm2,
            "interconnect_mm2": self.interconnect_mm2,
            "processing_mm2": self.processing_mm2,
            "memory_total_mm2": self.memory_total_mm2,
            "monolithic_dram_mm2": self.monolithic_dram_mm2,
            "system_total_mm2": self.system_total_mm2,
            "ratio_pm_over_sm": self.ratio_pm_over_sm,
        })
    }
}

/// Result of a run: the rows plus the config echo that reproduces them.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: String,
    pub format: OutputFormat,
    pub rows: Vec<RunRow>,
}

impl RunReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(128 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        let doc = json!({
            "config": self.config,
            "rows": self.rows.iter().map(RunRow::to_json).collect::<Vec<_>>(),
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serialises");
        text.push('\n');
        text
    }

    /// Renders in the scenario's chosen format.
    pub fn render(&self) -> String {
        match self.format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json_string(),
        }
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-row seed derived from the point identity, not execution order, so
/// parallel and serial sweeps sample identically.
fn point_seed(base: u64, tiles: u32, kind: NetworkKind, global_frac: f64) -> u64 {
    let mut h = splitmix64(base);
    h = splitmix64(h ^ u64::from(tiles));
    h = splitmix64(
        h ^ match kind {
            NetworkKind::Clos => 1,
            NetworkKind::Mesh => 2,
        },
    );
    splitmix64(h ^ global_frac.to_bits())
}

fn parse_scalar<T: FromStr>(line: usize, key: &str, val: &str) -> Result<T, ScenarioError>
where
    T::Err: std::fmt::Display,
{
    val.parse().map_err(|e| ScenarioError::Config {
        line,
        message: format!("{key}: cannot parse '{val}': {e}"),
    })
}

fn parse_list<T: FromStr>(line: usize, key: &str, val: &str) -> Result<Vec<T>, ScenarioError>
where
    T::Err: std::fmt::Display,
{
    val.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_scalar(line, key, t))
        .collect()
}

fn join_list<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.tile_counts.is_empty() {
            return Err(ScenarioError::NoTileCounts);
        }
        if self.kinds.is_empty() {
            return Err(ScenarioError::InvalidParams(
                "no network kinds configured".into(),
            ));
        }
        for &kind in &self.kinds {
            for &tiles in &self.tile_counts {
                TopologySpec::with_radix(kind, tiles, self.radix).validate()?;
            }
        }
        self.latency
            .validate()
            .map_err(ScenarioError::InvalidParams)?;
        self.mix.resolve().validate()?;
        for &f in &self.global_fracs {
            InstructionMix::with_global(f)?;
        }
        self.area.validate()?;
        self.memory_model.validate()?;
        if !(self.capacity_gb.is_finite() && self.capacity_gb > 0.0) {
            return Err(ScenarioError::InvalidParams(format!(
                "capacity_gb must be positive, got {}",
                self.capacity_gb
            )));
        }
        Ok(())
    }

    /// Flat `key = value` echo of this scenario. Values use shortest
    /// round-trip formatting, so parsing the echo recovers equal settings.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let mut kv = |key: &str, value: String| {
            let _ = writeln!(out, "{key} = {value}");
        };
        kv("topology.tiles", join_list(&self.tile_counts));
        kv("topology.kinds", join_list(self.kinds.as_slice()));
        kv("topology.radix", self.radix.to_string());
        kv(
            "latency.tile_switch_cycles",
            self.latency.tile_switch_cycles.to_string(),
        );
        kv(
            "latency.switch_cycles",
            self.latency.switch_cycles.to_string(),
        );
        kv(
            "latency.closed_route_extra_cycles",
            self.latency.closed_route_extra_cycles.to_string(),
        );
        kv(
            "latency.serialisation_cycles",
            self.latency.serialisation_cycles.to_string(),
        );
        kv("latency.link_cycles", self.latency.link_cycles.to_string());
        kv("latency.clock_hz", self.latency.clock_hz.to_string());
        kv(
            "access.local_memory_cycles",
            self.access.local_memory_cycles.to_string(),
        );
        kv(
            "access.controller_overhead_cycles",
            self.access.controller_overhead_cycles.to_string(),
        );
        kv(
            "access.dram_baseline_ns",
            self.access.dram_baseline_ns.to_string(),
        );
        kv("access.route", self.access.route.to_string());
        match self.mix {
            MixChoice::Dhrystone => kv("mix.preset", "dhrystone".into()),
            MixChoice::Compiler => kv("mix.preset", "compiler".into()),
            MixChoice::Custom(m) => {
                kv("mix.global_frac", m.global_frac.to_string());
                kv("mix.local_frac", m.local_frac.to_string());
                kv("mix.other_frac", m.other_frac.to_string());
            }
        }
        if !self.global_fracs.is_empty() {
            kv("sweep.global_fracs", join_list(&self.global_fracs));
        }
        kv("area.processor_mm2", self.area.processor_mm2.to_string());
        kv("area.switch_mm2", self.area.switch_mm2.to_string());
        kv("area.wires_per_link", self.area.wires_per_link.to_string());
        kv("area.wire_pitch_nm", self.area.wire_pitch_nm.to_string());
        kv("area.routing_layers", self.area.routing_layers.to_string());
        kv(
            "area.peripheral_overhead",
            self.area.peripheral_overhead.to_string(),
        );
        kv("area.min_channel_mm", self.area.min_channel_mm.to_string());
        kv(
            "memory_model.fixed_mm2",
            self.memory_model.fixed_mm2.to_string(),
        );
        kv(
            "memory_model.per_mb_mm2",
            self.memory_model.per_mb_mm2.to_string(),
        );
        if let Some(curve) = self.memory_model.latency_curve {
            kv("memory_model.latency_base_ns", curve.base_ns.to_string());
            kv(
                "memory_model.latency_per_log2_mb_ns",
                curve.per_log2_mb_ns.to_string(),
            );
        }
        kv("capacity_gb", self.capacity_gb.to_string());
        kv("seed", self.seed.to_string());
        kv("samples", self.samples.to_string());
        kv("jobs", self.jobs.to_string());
        kv("output.format", self.format.to_string());
        out
    }

    /// Parses the flat config format. `#` starts a comment; blank lines are
    /// skipped; unknown keys and malformed values are reported with their
    /// line number.
    pub fn parse_config(text: &str) -> Result<Scenario, ScenarioError> {
        let mut s = Scenario::default();
        let mut mix_fracs: [Option<(usize, f64)>; 3] = [None, None, None];
        let mut preset_line: Option<usize> = None;
        let mut curve_base: Option<(usize, f64)> = None;
        let mut curve_slope: Option<(usize, f64)> = None;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(ScenarioError::Config {
                    line,
                    message: format!("expected 'key = value', got '{body}'"),
                });
            };
            let key = k.trim();
            let val = v.trim();
            match key {
                "topology.tiles" => s.tile_counts = parse_list(line, key, val)?,
                "topology.kinds" => s.kinds = parse_list(line, key, val)?,
                "topology.radix" => s.radix = parse_scalar(line, key, val)?,
                "latency.tile_switch_cycles" => {
                    s.latency.tile_switch_cycles = parse_scalar(line, key, val)?
                }
                "latency.switch_cycles" => s.latency.switch_cycles = parse_scalar(line, key, val)?,
                "latency.closed_route_extra_cycles" => {
                    s.latency.closed_route_extra_cycles = parse_scalar(line, key, val)?
                }
                "latency.serialisation_cycles" => {
                    s.latency.serialisation_cycles = parse_scalar(line, key, val)?
                }
                "latency.link_cycles" => s.latency.link_cycles = parse_scalar(line, key, val)?,
                "latency.clock_hz" => s.latency.clock_hz = parse_scalar(line, key, val)?,
                "access.local_memory_cycles" => {
                    s.access.local_memory_cycles = parse_scalar(line, key, val)?
                }
                "access.controller_overhead_cycles" => {
                    s.access.controller_overhead_cycles = parse_scalar(line, key, val)?
                }
                "access.dram_baseline_ns" => {
                    s.access.dram_baseline_ns = parse_scalar(line, key, val)?
                }
                "access.route" => s.access.route = parse_scalar::<RouteMode>(line, key, val)?,
                "mix.preset" => {
                    preset_line = Some(line);
                    s.mix = match val.to_ascii_lowercase().as_str() {
                        "dhrystone" => MixChoice::Dhrystone,
                        "compiler" => MixChoice::Compiler,
                        other => {
                            return Err(ScenarioError::Config {
                                line,
                                message: format!(
                                    "unknown mix preset '{other}' (expected dhrystone or compiler)"
                                ),
                            })
                        }
                    };
                }
                "mix.global_frac" => mix_fracs[0] = Some((line, parse_scalar(line, key, val)?)),
                "mix.local_frac" => mix_fracs[1] = Some((line, parse_scalar(line, key, val)?)),
                "mix.other_frac" => mix_fracs[2] = Some((line, parse_scalar(line, key, val)?)),
                "sweep.global_fracs" => s.global_fracs = parse_list(line, key, val)?,
                "area.processor_mm2" => s.area.processor_mm2 = parse_scalar(line, key, val)?,
                "area.switch_mm2" => s.area.switch_mm2 = parse_scalar(line, key, val)?,
                "area.wires_per_link" => s.area.wires_per_link = parse_scalar(line, key, val)?,
                "area.wire_pitch_nm" => s.area.wire_pitch_nm = parse_scalar(line, key, val)?,
                "area.routing_layers" => s.area.routing_layers = parse_scalar(line, key, val)?,
                "area.peripheral_overhead" => {
                    s.area.peripheral_overhead = parse_scalar(line, key, val)?
                }
                "area.min_channel_mm" => s.area.min_channel_mm = parse_scalar(line, key, val)?,
                "memory_model.fixed_mm2" => {
                    s.memory_model.fixed_mm2 = parse_scalar(line, key, val)?
                }
                "memory_model.per_mb_mm2" => {
                    s.memory_model.per_mb_mm2 = parse_scalar(line, key, val)?
                }
                "memory_model.latency_base_ns" => {
                    curve_base = Some((line, parse_scalar(line, key, val)?))
                }
                "memory_model.latency_per_log2_mb_ns" => {
                    curve_slope = Some((line, parse_scalar(line, key, val)?))
                }
                "capacity_gb" => s.capacity_gb = parse_scalar(line, key, val)?,
                "seed" => s.seed = parse_scalar(line, key, val)?,
                "samples" => s.samples = parse_scalar(line, key, val)?,
                "jobs" => s.jobs = parse_scalar(line, key, val)?,
                "output.format" => s.format = parse_scalar::<OutputFormat>(line, key, val)?,
                other => {
                    return Err(ScenarioError::Config {
                        line,
                        message: format!("unknown key '{other}'"),
                    })
                }
            }
        }

        if mix_fracs.iter().any(Option::is_some) {
            if let Some(line) = preset_line {
                return Err(ScenarioError::Config {
                    line,
                    message: "mix.preset conflicts with explicit mix fractions".into(),
                });
            }
            let line = mix_fracs.iter().flatten().next().unwrap().0;
            let [Some((_, g)), Some((_, l)), Some((_, o))] = mix_fracs else {
                return Err(ScenarioError::Config {
                    line,
                    message: "custom mixes need all of mix.global_frac, mix.local_frac \
                              and mix.other_frac"
                        .into(),
                });
            };
            let mix = InstructionMix::new(g, l, o).map_err(|e| ScenarioError::Config {
                line,
                message: e.to_string(),
            })?;
            s.mix = MixChoice::Custom(mix);
        }
        match (curve_base, curve_slope) {
            (Some((_, base_ns)), Some((_, per_log2_mb_ns))) => {
                s.memory_model.latency_curve = Some(MemoryLatencyCurve {
                    base_ns,
                    per_log2_mb_ns,
                });
            }
            (None, None) => {}
            (Some((line, _)), None) | (None, Some((line, _))) => {
                return Err(ScenarioError::Config {
                    line,
                    message: "memory latency curves need both memory_model.latency_base_ns \
                              and memory_model.latency_per_log2_mb_ns"
                        .into(),
                });
            }
        }
        Ok(s)
    }

    fn mix_points(&self) -> Result<Vec<InstructionMix>, ScenarioError> {
        if self.global_fracs.is_empty() {
            return Ok(vec![self.mix.resolve()]);
        }
        self.global_fracs
            .iter()
            .map(|&f| InstructionMix::with_global(f).map_err(ScenarioError::from))
            .collect()
    }

    fn compute_row(
        &self,
        tiles: u32,
        kind: NetworkKind,
        mix: InstructionMix,
    ) -> Result<RunRow, ScenarioError> {
        let g = TopologySpec::with_radix(kind, tiles, self.radix).build()?;
        let em = MemoryEmulation::new(&g, self.latency, self.access)?;
        let pm = MachineModel::parallel_machine(&em, &self.latency, &self.access);
        let sm = MachineModel::sequential_machine(&self.latency, &self.access);
        let sampled_access_ns = if self.samples > 0 {
            let seed = point_seed(self.seed, tiles, kind, mix.global_frac);
            Some(em.sample_access_ns(self.samples, seed)?.mean_ns)
        } else {
            None
        };
        let report = system_area(
            &g,
            self.capacity_gb * 1024.0,
            &self.area,
            &self.memory_model,
        )?;
        let memory = report
            .memory
            .expect("system_area fills the memory comparison");
        Ok(RunRow {
            tiles,
            kind,
            global_frac: mix.global_frac,
            switches: g.switch_count(),
            diameter_hops: g.diameter(),
            mean_hops: g.mean_hops_from(em.controller())?,
            avg_access_ns: em.average_access_ns(),
            sm_access_ns: self.access.sm_access_ns(),
            sampled_access_ns,
            slowdown: slowdown(&mix, &pm, &sm)?,
            worst_case_slowdown: worst_case_slowdown(&pm, &sm),
            processor_mm2: report.processor_mm2,
            peripheral_mm2: report.peripheral_mm2,
            switch_mm2: report.switch_mm2,
            wire_channel_mm2: report.wire_channel_mm2,
            interconnect_mm2: report.interconnect_mm2,
            processing_mm2: report.processing_mm2,
            memory_total_mm2: memory.memory_total_mm2,
            monolithic_dram_mm2: memory.monolithic_dram_mm2,
            system_total_mm2: memory.system_total_mm2,
            ratio_pm_over_sm: memory.ratio_pm_over_sm,
        })
    }

    /// Prices every (tiles, kind, mix) point. Rows are computed in
    /// parallel and sorted by (tiles, kind, global fraction), so the output
    /// does not depend on scheduling.
    pub fn run(&self) -> Result<RunReport, ScenarioError> {
        self.validate()?;
        let mixes = self.mix_points()?;
        let mut points = Vec::new();
        for &tiles in &self.tile_counts {
            for &kind in &self.kinds {
                for &mix in &mixes {
                    points.push((tiles, kind, mix));
                }
            }
        }
        let price = |&(tiles, kind, mix): &(u32, NetworkKind, InstructionMix)| {
            self.compute_row(tiles, kind, mix)
        };
        let rows: Result<Vec<RunRow>, ScenarioError> = if self.jobs == 0 {
            points.par_iter().map(price).collect()
        } else {
            rayon::ThreadPoolBuilder::new()
                .num_threads(self.jobs)
                .build()
                .map_err(|e| ScenarioError::InvalidParams(format!("jobs: {e}")))?
                .install(|| points.par_iter().map(price).collect())
        };
        let mut rows = rows?;
        rows.sort_by(|a, b| {
            a.tiles
                .cmp(&b.tiles)
                .then_with(|| a.kind.as_str().cmp(b.kind.as_str()))
                .then_with(|| {
                    a.global_frac
                        .partial_cmp(&b.global_frac)
                        .expect("fractions were validated finite")
                })
        });
        Ok(RunReport {
            config: self.to_config_string(),
            format: self.format,
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sweep_produces_eight_sorted_rows() {
        let report = Scenario::default().run().unwrap();
        assert_eq!(report.rows.len(), 8);
        let order: Vec<(u32, NetworkKind)> =
            report.rows.iter().map(|r| (r.tiles, r.kind)).collect();
        assert_eq!(
            order,
            vec![
                (64, NetworkKind::Clos),
                (64, NetworkKind::Mesh),
                (256, NetworkKind::Clos),
                (256, NetworkKind::Mesh),
                (1024, NetworkKind::Clos),
                (1024, NetworkKind::Mesh),
                (4096, NetworkKind::Clos),
                (4096, NetworkKind::Mesh),
            ]
        );
        let last_clos = &report.rows[6];
        assert!(
            (last_clos.slowdown - 2.6).abs() < 0.1,
            "{}",
            last_clos.slowdown
        );
        assert_eq!(last_clos.switches, 640);
        assert_eq!(last_clos.diameter_hops, 4);
    }

    #[test]
    fn mesh_rows_report_grid_diameters() {
        let s = Scenario {
            kinds: vec![NetworkKind::Mesh],
            ..Scenario::default()
        };
        let report = s.run().unwrap();
        let diameters: Vec<u32> = report.rows.iter().map(|r| r.diameter_hops).collect();
        assert_eq!(diameters, vec![2, 6, 14, 30]);
        for r in &report.rows {
            assert_eq!(r.switches, r.tiles / 16);
        }
    }

    #[test]
    fn csv_has_the_documented_shape() {
        let report = Scenario::default().run().unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert_eq!(header.split(',').count(), 21);
        assert!(header.starts_with("tiles,kind,global_frac"));
        assert_eq!(lines.count(), 8);
        for line in csv.lines().skip(1) {
            assert_eq!(line.split(',').count(), 21, "ragged row: {line}");
        }
    }

    #[test]
    fn json_document_round_trips_through_serde() {
        let s = Scenario {
            format: OutputFormat::Json,
            tile_counts: vec![64],
            ..Scenario::default()
        };
        let report = s.run().unwrap();
        let doc: serde_json::Value = serde_json::from_str(&report.render()).unwrap();
        assert_eq!(doc["rows"].as_array().unwrap().len(), 2);
        assert_eq!(doc["rows"][0]["kind"], "clos");
        assert_eq!(doc["rows"][0]["tiles"], 64);
        assert!(doc["rows"][0]["sampled_access_ns"].is_null());
        assert_eq!(doc["config"].as_str().unwrap(), report.config);
    }

    #[test]
    fn config_echo_round_trips_to_an_identical_run() {
        let mut s = Scenario {
            tile_counts: vec![64, 256],
            mix: MixChoice::Custom(InstructionMix::new(0.15, 0.05, 0.80).unwrap()),
            samples: 5_000,
            seed: 42,
            ..Scenario::default()
        };
        s.memory_model.latency_curve = Some(MemoryLatencyCurve {
            base_ns: 20.0,
            per_log2_mb_ns: 2.0,
        });
        let echo = s.to_config_string();
        let parsed = Scenario::parse_config(&echo).unwrap();
        assert_eq!(parsed, s);
        assert_eq!(parsed.run().unwrap().render(), s.run().unwrap().render());
    }

    #[test]
    fn parallel_and_serial_runs_render_identically() {
        let serial = Scenario {
            samples: 2_000,
            jobs: 1,
            ..Scenario::default()
        };
        let mut parallel = serial.clone();
        parallel.jobs = 4;
        assert_eq!(
            serial.run().unwrap().render(),
            parallel.run().unwrap().render()
        );
    }

    #[test]
    fn sampled_column_tracks_the_analytic_mean() {
        let s = Scenario {
            tile_counts: vec![4096],
            kinds: vec![NetworkKind::Clos],
            samples: 100_000,
            ..Scenario::default()
        };
        let row = &s.run().unwrap().rows[0];
        let sampled = row.sampled_access_ns.unwrap();
        assert!(
            (sampled - row.avg_access_ns).abs() < 0.5,
            "sampled {sampled} vs analytic {}",
            row.avg_access_ns
        );
    }

    #[test]
    fn global_frac_sweep_replaces_the_preset_row() {
        let s = Scenario {
            tile_counts: vec![256],
            global_fracs: vec![0.3, 0.05],
            ..Scenario::default()
        };
        let report = s.run().unwrap();
        assert_eq!(report.rows.len(), 4);
        let fracs: Vec<f64> = report.rows.iter().map(|r| r.global_frac).collect();
        assert_eq!(fracs, vec![0.05, 0.3, 0.05, 0.3]);
        assert!(report.rows[1].slowdown > report.rows[0].slowdown);
    }

    #[test]
    fn empty_tile_list_is_reported() {
        let s = Scenario::parse_config("topology.tiles =\n").unwrap();
        assert!(s.tile_counts.is_empty());
        let err = s.run().unwrap_err();
        assert!(matches!(err, ScenarioError::NoTileCounts));
        assert!(err.to_string().contains("no tile counts"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Scenario::parse_config("seed = 1\nnot a key value\n").unwrap_err();
        assert!(
            matches!(err, ScenarioError::Config { line: 2, .. }),
            "{err}"
        );

        let err = Scenario::parse_config("\n\nwhat.is.this = 3\n").unwrap_err();
        let ScenarioError::Config { line, message } = err else {
            panic!("wrong error")
        };
        assert_eq!(line, 3);
        assert!(message.contains("unknown key"));

        let err = Scenario::parse_config("topology.tiles = 64,banana\n").unwrap_err();
        assert!(matches!(err, ScenarioError::Config { line: 1, .. }));
    }

    #[test]
    fn comments_and_spacing_are_tolerated() {
        let text = "# comment\n  topology.tiles = 64 , 256  # inline\n\nseed=9\n";
        let s = Scenario::parse_config(text).unwrap();
        assert_eq!(s.tile_counts, vec![64, 256]);
        assert_eq!(s.seed, 9);
    }

    #[test]
    fn partial_custom_mix_is_rejected() {
        let err = Scenario::parse_config("mix.global_frac = 0.2\n").unwrap_err();
        let ScenarioError::Config { message, .. } = err else {
            panic!("wrong error")
        };
        assert!(message.contains("mix.local_frac"));

        let err =
            Scenario::parse_config("mix.preset = compiler\nmix.global_frac = 0.2\n").unwrap_err();
        assert!(err.to_string().contains("conflicts"));
    }

    #[test]
    fn invalid_sizes_surface_as_topology_errors() {
        let s = Scenario {
            tile_counts: vec![80],
            ..Scenario::default()
        };
        assert!(matches!(s.run().unwrap_err(), ScenarioError::Topology(_)));
    }

    #[test]
    fn point_seeds_differ_across_the_sweep() {
        let a = point_seed(0, 64, NetworkKind::Clos, 0.10);
        let b = point_seed(0, 64, NetworkKind::Mesh, 0.10);
        let c = point_seed(0, 256, NetworkKind::Clos, 0.10);
        let d = point_seed(0, 64, NetworkKind::Clos, 0.20);
        let e = point_seed(1, 64, NetworkKind::Clos, 0.10);
        let all = [a, b, c, d, e];
        for (i, x) in all.iter().enumerate() {
            for y in &all[i + 1..] {
                assert_ne!(x, y);
            }
        }
    }
}
