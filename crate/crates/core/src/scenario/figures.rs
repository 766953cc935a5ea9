//! Ready-made chart data sets, one CSV table per figure id.
//!
//! Each id names a view of the design space that is worth plotting on its
//! own: network size and diameter, memory and chip area scaling, emulated
//! access latency against the flat-memory baseline, and slowdown sweeps.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{Scenario, ScenarioError};
use crate::area::layout_area;
use crate::latency::LatencyParams;
use crate::memory::{AccessModel, MemoryEmulation};
use crate::topology::{NetworkKind, SwitchGraph, TopologySpec};
use crate::workload::{slowdown, InstructionMix, MachineModel};

/// Identifier of one emittable chart data set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    /// Switch counts and inter-switch diameters per network size.
    Fig4,
    /// Area of a single memory instance across capacities.
    Fig6,
    /// Total processing-chip area (processors plus interconnect) per network.
    Fig7,
    /// Whole-system area at fixed capacity against one monolithic memory.
    Fig8,
    /// Average emulated access latency with the flat-memory baseline.
    Fig10,
    /// Slowdown for a ladder of global-access fractions, local share 10%.
    Fig11,
    /// Slowdown of the low-global-traffic compiler mix per network.
    Fig12,
}

impl FigureId {
    pub const ALL: [FigureId; 7] = [
        FigureId::Fig4,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig10,
        FigureId::Fig11,
        FigureId::Fig12,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig4 => "fig4",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig10 => "fig10",
            FigureId::Fig11 => "fig11",
            FigureId::Fig12 => "fig12",
        }
    }
}

impl std::fmt::Display for FigureId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_lowercase();
        FigureId::ALL
            .into_iter()
            .find(|id| id.as_str() == wanted)
            .ok_or(ScenarioError::UnknownFigure(wanted))
    }
}

fn build(s: &Scenario, kind: NetworkKind, tiles: u32) -> Result<SwitchGraph, ScenarioError> {
    Ok(TopologySpec::with_radix(kind, tiles, s.radix).build()?)
}

fn machines(
    g: &SwitchGraph,
    lp: &LatencyParams,
    am: &AccessModel,
) -> Result<(MachineModel, MachineModel), ScenarioError> {
    let em = MemoryEmulation::new(g, *lp, *am)?;
    Ok((
        MachineModel::parallel_machine(&em, lp, am),
        MachineModel::sequential_machine(lp, am),
    ))
}

fn emit_sizes(s: &Scenario) -> Result<String, ScenarioError> {
    let mut out =
        String::from("tiles,clos_switches,clos_diameter_hops,mesh_switches,mesh_diameter_hops\n");
    for &tiles in &s.tile_counts {
        let clos = build(s, NetworkKind::Clos, tiles)?;
        let mesh = build(s, NetworkKind::Mesh, tiles)?;
        let _ = writeln!(
            out,
            "{tiles},{},{},{},{}",
            clos.switch_count(),
            clos.diameter(),
            mesh.switch_count(),
            mesh.diameter()
        );
    }
    Ok(out)
}

/// Capacity ladder for the memory curve: 1/16 MB up to 8 GB in octaves.
fn emit_memory_curve(s: &Scenario) -> Result<String, ScenarioError> {
    let mut out = String::from("capacity_mb,area_mm2\n");
    for exp in -4..=13 {
        let mb = 2f64.powi(exp);
        let _ = writeln!(out, "{mb},{}", s.memory_model.memory_area_mm2(mb)?);
    }
    Ok(out)
}

fn emit_processing_totals(s: &Scenario) -> Result<String, ScenarioError> {
    let mut out = String::from("tiles,clos_processing_mm2,mesh_processing_mm2\n");
    for &tiles in &s.tile_counts {
        let clos = layout_area(&build(s, NetworkKind::Clos, tiles)?, &s.area)?;
        let mesh = layout_area(&build(s, NetworkKind::Mesh, tiles)?, &s.area)?;
        let _ = writeln!(
            out,
            "{tiles},{},{}",
            clos.processing_mm2, mesh.processing_mm2
        );
    }
    Ok(out)
}

fn emit_system_totals(s: &Scenario) -> Result<String, ScenarioError> {
    let capacity_mb = s.capacity_gb * 1024.0;
    let mut out = String::from("tiles,clos_system_mm2,mesh_system_mm2,monolithic_dram_mm2\n");
    for &tiles in &s.tile_counts {
        let clos = crate::area::system_area(
            &build(s, NetworkKind::Clos, tiles)?,
            capacity_mb,
            &s.area,
            &s.memory_model,
        )?;
        let mesh = crate::area::system_area(
            &build(s, NetworkKind::Mesh, tiles)?,
            capacity_mb,
            &s.area,
            &s.memory_model,
        )?;
        let get = |r: &crate::area::AreaReport| r.memory.as_ref().unwrap().system_total_mm2;
        let _ = writeln!(
            out,
            "{tiles},{},{},{}",
            get(&clos),
            get(&mesh),
            clos.memory.as_ref().unwrap().monolithic_dram_mm2
        );
    }
    Ok(out)
}

/// Emulated access latency per network with the baseline drawn as its own
/// column, constant across sizes.
fn emit_access_latency(s: &Scenario) -> Result<String, ScenarioError> {
    let mut out = String::from("tiles,clos_access_ns,mesh_access_ns,sm_access_ns\n");
    for &tiles in &s.tile_counts {
        let clos_graph = build(s, NetworkKind::Clos, tiles)?;
        let mesh_graph = build(s, NetworkKind::Mesh, tiles)?;
        let clos = MemoryEmulation::new(&clos_graph, s.latency, s.access)?;
        let mesh = MemoryEmulation::new(&mesh_graph, s.latency, s.access)?;
        let _ = writeln!(
            out,
            "{tiles},{},{},{}",
            clos.average_access_ns(),
            mesh.average_access_ns(),
            s.access.sm_access_ns()
        );
    }
    Ok(out)
}

/// Default global-access fractions for the slowdown sweep.
const SWEEP_FRACS: [f64; 4] = [0.05, 0.10, 0.20, 0.30];

fn emit_slowdown_sweep(s: &Scenario) -> Result<String, ScenarioError> {
    let fracs: Vec<f64> = if s.global_fracs.is_empty() {
        SWEEP_FRACS.to_vec()
    } else {
        s.global_fracs.clone()
    };
    let mut out = String::from("tiles,kind");
    for f in &fracs {
        let _ = write!(out, ",slowdown_global_{f}");
    }
    out.push('\n');
    for &tiles in &s.tile_counts {
        for &kind in &s.kinds {
            let g = build(s, kind, tiles)?;
            let (pm, sm) = machines(&g, &s.latency, &s.access)?;
            let _ = write!(out, "{tiles},{kind}");
            for &f in &fracs {
                let mix = InstructionMix::with_global(f)?;
                let _ = write!(out, ",{}", slowdown(&mix, &pm, &sm)?);
            }
            out.push('\n');
        }
    }
    Ok(out)
}

fn emit_compiler_slowdown(s: &Scenario) -> Result<String, ScenarioError> {
    let mix = InstructionMix::compiler();
    let mut out = String::from("tiles,clos_slowdown,mesh_slowdown\n");
    for &tiles in &s.tile_counts {
        let (cpm, csm) = machines(&build(s, NetworkKind::Clos, tiles)?, &s.latency, &s.access)?;
        let (mpm, msm) = machines(&build(s, NetworkKind::Mesh, tiles)?, &s.latency, &s.access)?;
        let _ = writeln!(
            out,
            "{tiles},{},{}",
            slowdown(&mix, &cpm, &csm)?,
            slowdown(&mix, &mpm, &msm)?
        );
    }
    Ok(out)
}

/// Emits the chart data set `id` as a CSV table using the scenario's sizes
/// and calibration.
pub fn emit_figure(s: &Scenario, id: FigureId) -> Result<String, ScenarioError> {
    s.validate()?;
    match id {
        FigureId::Fig4 => emit_sizes(s),
        FigureId::Fig6 => emit_memory_curve(s),
        FigureId::Fig7 => emit_processing_totals(s),
        FigureId::Fig8 => emit_system_totals(s),
        FigureId::Fig10 => emit_access_latency(s),
        FigureId::Fig11 => emit_slowdown_sweep(s),
        FigureId::Fig12 => emit_compiler_slowdown(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(table: &str, row: usize, col: usize) -> String {
        table
            .lines()
            .nth(row)
            .unwrap()
            .split(',')
            .nth(col)
            .unwrap()
            .to_string()
    }

    #[test]
    fn figure_ids_round_trip_and_reject_garbage() {
        for id in FigureId::ALL {
            assert_eq!(id.as_str().parse::<FigureId>().unwrap(), id);
        }
        assert!(matches!(
            "fig9".parse::<FigureId>(),
            Err(ScenarioError::UnknownFigure(_))
        ));
    }

    #[test]
    fn size_table_lists_switch_counts_and_diameters() {
        let table = emit_figure(&Scenario::default(), FigureId::Fig4).unwrap();
        assert_eq!(
            table.lines().next().unwrap(),
            "tiles,clos_switches,clos_diameter_hops,mesh_switches,mesh_diameter_hops"
        );
        // 4096 tiles: 640 clos switches at diameter 4; 256 mesh switches
        // at diameter 30.
        assert_eq!(table.lines().last().unwrap(), "4096,640,4,256,30");
        assert_eq!(cell(&table, 1, 3), "4");
    }

    #[test]
    fn memory_curve_spans_the_capacity_ladder() {
        let table = emit_figure(&Scenario::default(), FigureId::Fig6).unwrap();
        assert_eq!(table.lines().count(), 19);
        assert_eq!(table.lines().nth(1).unwrap(), "0.0625,0.125");
        assert_eq!(table.lines().last().unwrap(), "8192,3276.9");
    }

    #[test]
    fn latency_table_carries_a_constant_baseline() {
        let table = emit_figure(&Scenario::default(), FigureId::Fig10).unwrap();
        assert_eq!(
            table.lines().next().unwrap(),
            "tiles,clos_access_ns,mesh_access_ns,sm_access_ns"
        );
        for row in 1..=4 {
            assert_eq!(cell(&table, row, 3), "36");
        }
        assert_eq!(cell(&table, 4, 1), "123.609375");
        assert_eq!(cell(&table, 4, 2), "198");
    }

    #[test]
    fn slowdown_sweep_has_one_column_per_fraction() {
        let table = emit_figure(&Scenario::default(), FigureId::Fig11).unwrap();
        assert_eq!(
            table.lines().next().unwrap(),
            "tiles,kind,slowdown_global_0.05,slowdown_global_0.1,slowdown_global_0.2,slowdown_global_0.3"
        );
        assert_eq!(table.lines().count(), 9);
        // More global traffic always slows the run down further.
        for row in 1..=8 {
            let a: f64 = cell(&table, row, 2).parse().unwrap();
            let b: f64 = cell(&table, row, 5).parse().unwrap();
            assert!(b > a);
        }
    }

    #[test]
    fn compiler_table_tracks_the_preset_anchors() {
        let table = emit_figure(&Scenario::default(), FigureId::Fig12).unwrap();
        let clos: f64 = cell(&table, 4, 1).parse().unwrap();
        let mesh: f64 = cell(&table, 4, 2).parse().unwrap();
        assert!((clos - 1.944).abs() < 0.01, "{clos}");
        assert!((mesh - 2.746).abs() < 0.01, "{mesh}");
    }

    #[test]
    fn processing_and_system_tables_agree_with_the_area_model() {
        let s = Scenario::default();
        let proc = emit_figure(&s, FigureId::Fig7).unwrap();
        let clos: f64 = cell(&proc, 4, 1).parse().unwrap();
        assert!((clos - 854.56).abs() < 0.01);
        let sys = emit_figure(&s, FigureId::Fig8).unwrap();
        let mono: f64 = cell(&sys, 4, 3).parse().unwrap();
        assert!((mono - 1638.5).abs() < 1e-9);
        let total: f64 = cell(&sys, 4, 1).parse().unwrap();
        assert!(total / mono <= 2.2);
    }
}
