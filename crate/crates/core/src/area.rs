//! Silicon area models for the processing chip and the memory system.
//!
//! The processing chip carries the processors, the switches and the wiring
//! between them. A mesh is laid out as an array of tile blocks with the
//! switch at a block corner, so its interconnect cost is the switch silicon
//! plus short neighbour bundles. A Clos is laid out as an H-tree: core
//! switches in the centre, each lower stage split four ways around it, with
//! stage groups packed in staggered sets and joined by dedicated wiring
//! channels. Interconnect area is the sum of the group bounding boxes and
//! the channels.
//!
//! Memory area uses an affine per-instance curve (fixed cost plus a linear
//! density term), so splitting one large memory across many tiles pays the
//! fixed cost once per tile. [`system_area`] combines both and compares the
//! result against one monolithic memory of the same total capacity.

use thiserror::Error;

use crate::topology::{NetworkKind, SwitchGraph, SwitchId, SwitchRole};

/// Fine-pitch through-silicon-via density, connections per mm2.
pub const TSV_PER_MM2: f64 = 400.0;

#[derive(Debug, Error, PartialEq)]
pub enum AreaError {
    #[error("memory capacity must be positive, got {mb} MB")]
    NonPositiveCapacity { mb: f64 },
    #[error("area parameter {name} must be positive")]
    NonPositiveParam { name: &'static str },
    #[error("routing layers must be an even count, got {layers}")]
    OddRoutingLayers { layers: u32 },
    #[error("{expected} layout was given a {got} graph")]
    WrongKind {
        expected: NetworkKind,
        got: NetworkKind,
    },
}

/// Process and floorplan parameters of the processing chip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaParams {
    pub processor_mm2: f64,
    pub switch_mm2: f64,
    pub wires_per_link: u32,
    /// Manufactured semi-global wire pitch; routed at twice this pitch.
    pub wire_pitch_nm: f64,
    /// Metal layers available to inter-switch wiring, half per direction.
    pub routing_layers: u32,
    /// Fraction of processor area added for peripheral logic.
    pub peripheral_overhead: f64,
    /// Narrowest dedicated wiring channel that is worth drawing; leaves
    /// room for repeaters and shielding around thin bundles.
    pub min_channel_mm: f64,
}

impl Default for AreaParams {
    fn default() -> Self {
        AreaParams {
            processor_mm2: 0.10,
            switch_mm2: 0.05,
            wires_per_link: 16,
            wire_pitch_nm: 125.0,
            routing_layers: 4,
            peripheral_overhead: 0.20,
            min_channel_mm: 0.075,
        }
    }
}

impl AreaParams {
    pub fn validate(&self) -> Result<(), AreaError> {
        for (name, v) in [
            ("processor_mm2", self.processor_mm2),
            ("switch_mm2", self.switch_mm2),
            ("wire_pitch_nm", self.wire_pitch_nm),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(AreaError::NonPositiveParam { name });
            }
        }
        if self.wires_per_link == 0 {
            return Err(AreaError::NonPositiveParam {
                name: "wires_per_link",
            });
        }
        if self.routing_layers == 0 || !self.routing_layers.is_multiple_of(2) {
            return Err(AreaError::OddRoutingLayers {
                layers: self.routing_layers,
            });
        }
        for (name, v) in [
            ("peripheral_overhead", self.peripheral_overhead),
            ("min_channel_mm", self.min_channel_mm),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(AreaError::NonPositiveParam { name });
            }
        }
        Ok(())
    }

    pub fn switch_side_mm(&self) -> f64 {
        self.switch_mm2.sqrt()
    }

    /// Routed pitch in mm: the manufactured pitch doubled.
    pub fn effective_pitch_mm(&self) -> f64 {
        self.wire_pitch_nm * 2.0 * 1e-6
    }

    /// Processor plus its peripheral share, the logic footprint of one tile.
    pub fn tile_logic_mm2(&self) -> f64 {
        self.processor_mm2 * (1.0 + self.peripheral_overhead)
    }

    /// Placement offset a switch adds to its group in each axis: the width
    /// of its escaping bundles on the layers of one routing direction.
    fn stagger_step_mm(&self, link_mult: u64) -> f64 {
        link_mult as f64 * self.wires_per_link as f64 * self.effective_pitch_mm()
            / (self.routing_layers as f64 / 2.0)
    }

    /// Cross-section of a bundle inside a dedicated channel, where all
    /// routing layers are available.
    fn channel_bundle_mm(&self, link_mult: u64) -> f64 {
        link_mult as f64 * self.wires_per_link as f64 * self.effective_pitch_mm()
            / self.routing_layers as f64
    }

    /// Vertical connections one tile's footprint can host.
    pub fn tsv_budget_per_tile(&self) -> f64 {
        self.tile_logic_mm2() * TSV_PER_MM2
    }
}

/// Per-access latency of a memory instance as a function of capacity,
/// flat below one MB. Informational; no default curve is assumed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryLatencyCurve {
    pub base_ns: f64,
    pub per_log2_mb_ns: f64,
}

impl MemoryLatencyCurve {
    pub fn access_ns(&self, capacity_mb: f64) -> f64 {
        self.base_ns + self.per_log2_mb_ns * capacity_mb.max(1.0).log2()
    }
}

/// Affine area curve for one memory instance: a fixed cost for peripheral
/// circuitry and interconnect plus a linear density term. The fixed term
/// reproduces the flattening of real DRAM area at small capacities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryAreaModel {
    pub fixed_mm2: f64,
    pub per_mb_mm2: f64,
    pub latency_curve: Option<MemoryLatencyCurve>,
}

impl Default for MemoryAreaModel {
    fn default() -> Self {
        MemoryAreaModel {
            fixed_mm2: 0.10,
            per_mb_mm2: 0.40,
            latency_curve: None,
        }
    }
}

impl MemoryAreaModel {
    pub fn validate(&self) -> Result<(), AreaError> {
        for (name, v) in [
            ("fixed_mm2", self.fixed_mm2),
            ("per_mb_mm2", self.per_mb_mm2),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(AreaError::NonPositiveParam { name });
            }
        }
        Ok(())
    }

    /// Area of one memory instance of the given capacity.
    pub fn memory_area_mm2(&self, capacity_mb: f64) -> Result<f64, AreaError> {
        if !(capacity_mb.is_finite() && capacity_mb > 0.0) {
            return Err(AreaError::NonPositiveCapacity { mb: capacity_mb });
        }
        Ok(self.fixed_mm2 + self.per_mb_mm2 * capacity_mb)
    }
}

/// Average contribution of one tile to each processing-chip component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerTileArea {
    pub processor_mm2: f64,
    pub peripheral_mm2: f64,
    pub switch_mm2: f64,
    pub wire_channel_mm2: f64,
}

impl PerTileArea {
    pub fn processing_mm2(&self) -> f64 {
        self.processor_mm2 + self.peripheral_mm2 + self.switch_mm2 + self.wire_channel_mm2
    }
}

/// System totals once per-tile memories are added, against one monolithic
/// memory of the same total capacity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryComparison {
    pub capacity_mb: f64,
    pub memory_total_mm2: f64,
    pub monolithic_dram_mm2: f64,
    pub system_total_mm2: f64,
    pub ratio_pm_over_sm: f64,
}

/// Area breakdown of one machine. `processing_mm2` is exactly the sum of
/// the processor, peripheral, switch and wire-channel parts.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaReport {
    pub kind: NetworkKind,
    pub tiles: u32,
    pub processor_mm2: f64,
    pub peripheral_mm2: f64,
    pub switch_mm2: f64,
    pub wire_channel_mm2: f64,
    pub interconnect_mm2: f64,
    pub processing_mm2: f64,
    pub per_tile: PerTileArea,
    pub memory: Option<MemoryComparison>,
}

impl AreaReport {
    /// Share of the processing chip taken by dedicated wiring channels.
    pub fn wire_fraction(&self) -> f64 {
        self.wire_channel_mm2 / self.processing_mm2
    }
}

fn assemble_report(
    g: &SwitchGraph,
    a: &AreaParams,
    switch_mm2: f64,
    wire_channel_mm2: f64,
) -> AreaReport {
    let p = g.tiles() as f64;
    let processor_mm2 = p * a.processor_mm2;
    let peripheral_mm2 = processor_mm2 * a.peripheral_overhead;
    let interconnect_mm2 = switch_mm2 + wire_channel_mm2;
    let processing_mm2 = processor_mm2 + peripheral_mm2 + interconnect_mm2;
    AreaReport {
        kind: g.kind(),
        tiles: g.tiles(),
        processor_mm2,
        peripheral_mm2,
        switch_mm2,
        wire_channel_mm2,
        interconnect_mm2,
        processing_mm2,
        per_tile: PerTileArea {
            processor_mm2: a.processor_mm2,
            peripheral_mm2: a.processor_mm2 * a.peripheral_overhead,
            switch_mm2: switch_mm2 / p,
            wire_channel_mm2: wire_channel_mm2 / p,
        },
        memory: None,
    }
}

fn stage_rank(role: SwitchRole) -> u32 {
    match role {
        SwitchRole::Edge | SwitchRole::Grid { .. } => 0,
        SwitchRole::Mid => 1,
        SwitchRole::Core => 2,
    }
}

/// Bounding box of `members` packed near-square, each switch offset in both
/// axes by the width of its escaping bundles.
fn group_box_mm2(a: &AreaParams, members: &[u32], inter_mult: &[u64]) -> f64 {
    let n = members.len();
    if n == 0 {
        return 0.0;
    }
    let side = a.switch_side_mm();
    let cols = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(cols);
    let spread: f64 = members
        .iter()
        .map(|&s| a.stagger_step_mm(inter_mult[s as usize]))
        .sum();
    (cols as f64 * side + spread) * (rows as f64 * side + spread)
}

/// Dedicated channel from a child region to its parent group: as wide as
/// the escaping bundle (floored), as long as the child region's side.
fn channel_mm2(a: &AreaParams, uplinks: u64, child_area_mm2: f64) -> f64 {
    let width = a.channel_bundle_mm(uplinks).max(a.min_channel_mm);
    width * child_area_mm2.sqrt()
}

fn chunks_near_equal(ids: &[u32], groups: usize) -> Vec<Vec<u32>> {
    let base = ids.len() / groups;
    let rem = ids.len() % groups;
    let mut out = Vec::with_capacity(groups);
    let mut at = 0;
    for i in 0..groups {
        let take = base + usize::from(i < rem);
        out.push(ids[at..at + take].to_vec());
        at += take;
    }
    out
}

/// H-tree layout cost of a folded-Clos processing chip.
pub fn layout_clos_area(g: &SwitchGraph, a: &AreaParams) -> Result<AreaReport, AreaError> {
    a.validate()?;
    if g.kind() != NetworkKind::Clos {
        return Err(AreaError::WrongKind {
            expected: NetworkKind::Clos,
            got: g.kind(),
        });
    }

    let n = g.switch_count() as usize;
    let mut inter = vec![0u64; n];
    let mut up = vec![0u64; n];
    for l in g.links() {
        let m = l.multiplicity as u64;
        inter[l.a.0 as usize] += m;
        inter[l.b.0 as usize] += m;
        let ra = stage_rank(g.switches()[l.a.0 as usize].role);
        let rb = stage_rank(g.switches()[l.b.0 as usize].role);
        if ra < rb {
            up[l.a.0 as usize] += m;
        } else if rb < ra {
            up[l.b.0 as usize] += m;
        }
    }
    let by_role = |r: SwitchRole| -> Vec<u32> {
        g.switches()
            .iter()
            .filter(|s| s.role == r)
            .map(|s| s.id.0)
            .collect()
    };
    let edges = by_role(SwitchRole::Edge);
    let mids = by_role(SwitchRole::Mid);
    let cores = by_role(SwitchRole::Core);
    let tile_logic = a.tile_logic_mm2();
    let group_tiles = |ids: &[u32]| -> f64 {
        ids.iter()
            .map(|&s| g.tiles_on(SwitchId(s)) as u64)
            .sum::<u64>() as f64
    };
    let group_up = |ids: &[u32]| -> u64 { ids.iter().map(|&s| up[s as usize]).sum() };

    let mut switch_mm2 = 0.0;
    let mut wire_mm2 = 0.0;
    match g.levels() {
        // One switch carries every tile; no inter-switch wiring exists.
        1 => {
            switch_mm2 = group_box_mm2(a, &edges, &inter);
        }
        // Four edge cells around the core group.
        2 => {
            for eg in chunks_near_equal(&edges, 4) {
                let bx = group_box_mm2(a, &eg, &inter);
                let cell = bx + group_tiles(&eg) * tile_logic;
                switch_mm2 += bx;
                wire_mm2 += channel_mm2(a, group_up(&eg), cell);
            }
            switch_mm2 += group_box_mm2(a, &cores, &inter);
        }
        // Four quadrants of four edge cells around a mid group each,
        // quadrants around the core group.
        3 => {
            let egroups = chunks_near_equal(&edges, 16);
            let mgroups = chunks_near_equal(&mids, 4);
            for (q, mg) in mgroups.iter().enumerate() {
                let mut quadrant = 0.0;
                for eg in &egroups[4 * q..4 * q + 4] {
                    let bx = group_box_mm2(a, eg, &inter);
                    let cell = bx + group_tiles(eg) * tile_logic;
                    let ch = channel_mm2(a, group_up(eg), cell);
                    switch_mm2 += bx;
                    wire_mm2 += ch;
                    quadrant += cell + ch;
                }
                let mbx = group_box_mm2(a, mg, &inter);
                switch_mm2 += mbx;
                quadrant += mbx;
                wire_mm2 += channel_mm2(a, group_up(mg), quadrant);
            }
            switch_mm2 += group_box_mm2(a, &cores, &inter);
        }
        levels => unreachable!("clos graphs have 1..=3 levels, got {levels}"),
    }
    Ok(assemble_report(g, a, switch_mm2, wire_mm2))
}

/// Block layout cost of a mesh processing chip: switch silicon plus one
/// neighbour bundle per link at the inter-switch pitch.
pub fn layout_mesh_area(g: &SwitchGraph, a: &AreaParams) -> Result<AreaReport, AreaError> {
    a.validate()?;
    if g.kind() != NetworkKind::Mesh {
        return Err(AreaError::WrongKind {
            expected: NetworkKind::Mesh,
            got: g.kind(),
        });
    }
    let switch_mm2 = g.switch_count() as f64 * a.switch_mm2;
    let block_side = (g.spec().tiles_per_switch as f64 * a.tile_logic_mm2()).sqrt();
    let pitch = block_side + a.switch_side_mm();
    let wire_mm2: f64 = g
        .links()
        .iter()
        .map(|l| a.channel_bundle_mm(l.multiplicity as u64) * pitch)
        .sum();
    Ok(assemble_report(g, a, switch_mm2, wire_mm2))
}

/// Layout cost of the processing chip for either network kind.
pub fn layout_area(g: &SwitchGraph, a: &AreaParams) -> Result<AreaReport, AreaError> {
    match g.kind() {
        NetworkKind::Clos => layout_clos_area(g, a),
        NetworkKind::Mesh => layout_mesh_area(g, a),
    }
}

/// Processing chip plus per-tile memories holding `capacity_mb` in total,
/// compared against one monolithic memory of the same capacity.
pub fn system_area(
    g: &SwitchGraph,
    capacity_mb: f64,
    a: &AreaParams,
    m: &MemoryAreaModel,
) -> Result<AreaReport, AreaError> {
    m.validate()?;
    let mut report = layout_area(g, a)?;
    let p = g.tiles() as f64;
    let memory_total_mm2 = p * m.memory_area_mm2(capacity_mb / p)?;
    let monolithic_dram_mm2 = m.memory_area_mm2(capacity_mb)?;
    let system_total_mm2 = report.processing_mm2 + memory_total_mm2;
    report.memory = Some(MemoryComparison {
        capacity_mb,
        memory_total_mm2,
        monolithic_dram_mm2,
        system_total_mm2,
        ratio_pm_over_sm: system_total_mm2 / monolithic_dram_mm2,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::TopologySpec;
    use proptest::prelude::*;

    fn graph(kind: NetworkKind, tiles: u32) -> SwitchGraph {
        TopologySpec::new(kind, tiles).build().unwrap()
    }

    fn clos_report(tiles: u32) -> AreaReport {
        layout_clos_area(&graph(NetworkKind::Clos, tiles), &AreaParams::default()).unwrap()
    }

    fn mesh_report(tiles: u32) -> AreaReport {
        layout_mesh_area(&graph(NetworkKind::Mesh, tiles), &AreaParams::default()).unwrap()
    }

    #[test]
    fn mesh_64_switch_silicon_is_four_units() {
        let r = mesh_report(64);
        assert_eq!(r.switch_mm2, 0.20);
        assert!(r.wire_channel_mm2 > 0.0);
    }

    #[test]
    fn mesh_per_tile_at_4096_is_processor_dominated() {
        let r = mesh_report(4096);
        assert_eq!(r.per_tile.processor_mm2, 0.10);
        let overhead = r.per_tile.switch_mm2 + r.per_tile.wire_channel_mm2;
        assert!(overhead < 0.01, "switch+wire per tile: {overhead}");
        assert!(
            (0.003..0.004).contains(&overhead),
            "expected ~0.0033, got {overhead}"
        );
    }

    #[test]
    fn totals_equal_the_sum_of_parts_exactly() {
        for r in [
            clos_report(64),
            clos_report(4096),
            mesh_report(256),
            mesh_report(4096),
        ] {
            assert_eq!(
                r.processing_mm2,
                r.processor_mm2 + r.peripheral_mm2 + r.interconnect_mm2
            );
            assert_eq!(r.interconnect_mm2, r.switch_mm2 + r.wire_channel_mm2);
            let per_tile_sum = r.per_tile.processing_mm2() * r.tiles as f64;
            assert!((per_tile_sum - r.processing_mm2).abs() < 1e-9 * r.processing_mm2);
        }
    }

    /// Explicit geometry for the 64-tile Clos: four single-edge cells around
    /// a two-core group, computed here step by step as an oracle.
    #[test]
    fn clos_64_matches_explicit_geometry() {
        let r = clos_report(64);
        let s = 0.05f64.sqrt();
        let edge_box = (s + 0.032) * (s + 0.032);
        let core_box = (2.0 * s + 0.128) * (s + 0.128);
        let cell = edge_box + 16.0 * 0.12;
        let chan = 0.075 * cell.sqrt();
        let ic = 4.0 * edge_box + core_box + 4.0 * chan;
        assert!(
            (r.interconnect_mm2 - ic).abs() < 1e-9,
            "{} vs {}",
            r.interconnect_mm2,
            ic
        );
        assert!((r.switch_mm2 - (4.0 * edge_box + core_box)).abs() < 1e-9);
        assert!((r.wire_channel_mm2 - 4.0 * chan).abs() < 1e-9);
    }

    #[test]
    fn clos_interconnect_across_the_sweep() {
        for (tiles, expected) in [
            (64, 0.886294),
            (256, 3.571651),
            (512, 9.178315),
            (1024, 41.094162),
            (2048, 120.718939),
            (4096, 363.042720),
        ] {
            let got = clos_report(tiles).interconnect_mm2;
            assert!(
                (got - expected).abs() < expected * 1e-3,
                "clos {tiles}: got {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn wire_fractions_match_reported_shares() {
        let f64_frac = clos_report(64).wire_fraction();
        assert!((0.035..0.065).contains(&f64_frac), "64: {f64_frac}");
        let f4096 = clos_report(4096).wire_fraction();
        assert!((0.075..0.105).contains(&f4096), "4096: {f4096}");
    }

    #[test]
    fn clos_processing_exceeds_mesh_by_reported_margins() {
        let r2048 = clos_report(2048).processing_mm2 / mesh_report(2048).processing_mm2;
        assert!((1.3..1.7).contains(&r2048), "2048: {r2048}");
        assert!((r2048 - 1.451).abs() < 0.01);
        let r4096 = clos_report(4096).processing_mm2 / mesh_report(4096).processing_mm2;
        assert!((1.5..1.9).contains(&r4096), "4096: {r4096}");
        assert!((r4096 - 1.692).abs() < 0.01);
    }

    #[test]
    fn interconnect_grows_with_tiles_and_clos_dominates() {
        let sweep = [64, 256, 512, 1024, 2048, 4096];
        let mut last_clos = 0.0;
        let mut last_mesh = 0.0;
        for tiles in sweep {
            let c = clos_report(tiles).interconnect_mm2;
            let m = mesh_report(tiles).interconnect_mm2;
            assert!(c >= last_clos && m >= last_mesh, "shrank at {tiles}");
            assert!(c >= m, "clos below mesh at {tiles}");
            last_clos = c;
            last_mesh = m;
        }
    }

    #[test]
    fn memory_curve_hits_its_anchors() {
        let m = MemoryAreaModel::default();
        assert!((m.memory_area_mm2(1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((m.memory_area_mm2(4096.0).unwrap() - 1638.5).abs() < 1e-9);
        assert!(matches!(
            m.memory_area_mm2(0.0),
            Err(AreaError::NonPositiveCapacity { .. })
        ));
        assert!(m.memory_area_mm2(-1.0).is_err());
    }

    #[test]
    fn fixed_cost_flattens_small_capacities() {
        let m = MemoryAreaModel::default();
        let big = m.memory_area_mm2(0.25).unwrap();
        let small = m.memory_area_mm2(0.125).unwrap();
        let drop = (big - small) / big;
        assert!(drop < 0.30, "halving shrank area by {drop}");
        // Without the floor the halving would shed half the area.
        assert!(small > 0.5 * big);
    }

    #[test]
    fn memory_total_grows_as_memory_is_split_finer() {
        let m = MemoryAreaModel::default();
        let total = |p: u32| p as f64 * m.memory_area_mm2(4096.0 / p as f64).unwrap();
        let mut last = 0.0;
        for p in [1, 64, 256, 1024, 4096] {
            let t = total(p);
            assert!(t > last);
            last = t;
        }
    }

    #[test]
    fn four_gb_system_totals() {
        let a = AreaParams::default();
        let m = MemoryAreaModel::default();
        let clos = system_area(&graph(NetworkKind::Clos, 4096), 4096.0, &a, &m)
            .unwrap()
            .memory
            .unwrap();
        let mesh = system_area(&graph(NetworkKind::Mesh, 4096), 4096.0, &a, &m)
            .unwrap()
            .memory
            .unwrap();
        assert!((clos.monolithic_dram_mm2 - 1638.5).abs() < 1e-9);
        assert!((clos.memory_total_mm2 - 2048.0).abs() < 1e-9);
        assert!(
            (clos.ratio_pm_over_sm - 1.7715).abs() < 1e-3,
            "{}",
            clos.ratio_pm_over_sm
        );
        assert!(clos.ratio_pm_over_sm <= 2.2);
        let diff = (clos.system_total_mm2 - mesh.system_total_mm2) / mesh.system_total_mm2;
        assert!((0.02..0.18).contains(&diff), "clos vs mesh at 4 GB: {diff}");
    }

    #[test]
    fn single_switch_layout_degenerates_cleanly() {
        let r = clos_report(16);
        assert!((r.switch_mm2 - 0.05).abs() < 1e-12);
        assert_eq!(r.wire_channel_mm2, 0.0);
        assert!((r.processing_mm2 - (16.0 * 0.12 + 0.05)).abs() < 1e-12);
    }

    #[test]
    fn odd_sizes_keep_the_accounting_identity() {
        // 96 tiles: unbalanced two-stage; 32 tiles: two quadrants stay empty;
        // 8192 tiles: the largest three-stage instance.
        for tiles in [32, 96, 1536, 8192] {
            let r = clos_report(tiles);
            assert!(r.interconnect_mm2 > 0.0);
            assert_eq!(
                r.processing_mm2,
                r.processor_mm2 + r.peripheral_mm2 + r.interconnect_mm2
            );
        }
    }

    #[test]
    fn layouts_reject_the_wrong_kind() {
        let a = AreaParams::default();
        assert!(matches!(
            layout_clos_area(&graph(NetworkKind::Mesh, 256), &a),
            Err(AreaError::WrongKind { .. })
        ));
        assert!(matches!(
            layout_mesh_area(&graph(NetworkKind::Clos, 256), &a),
            Err(AreaError::WrongKind { .. })
        ));
    }

    #[test]
    fn tsv_budget_covers_a_link_interface() {
        let a = AreaParams::default();
        assert!((a.tsv_budget_per_tile() - 48.0).abs() < 1e-9);
        assert!(a.tsv_budget_per_tile() >= a.wires_per_link as f64);
    }

    #[test]
    fn bad_params_are_rejected() {
        let a = AreaParams {
            routing_layers: 3,
            ..AreaParams::default()
        };
        assert!(matches!(
            a.validate(),
            Err(AreaError::OddRoutingLayers { layers: 3 })
        ));
        let b = AreaParams {
            switch_mm2: 0.0,
            ..AreaParams::default()
        };
        assert!(b.validate().is_err());
    }

    #[test]
    fn latency_curve_is_flat_below_one_mb() {
        let c = MemoryLatencyCurve {
            base_ns: 20.0,
            per_log2_mb_ns: 2.0,
        };
        assert_eq!(c.access_ns(0.25), 20.0);
        assert_eq!(c.access_ns(1.0), 20.0);
        assert!((c.access_ns(1024.0) - 40.0).abs() < 1e-12);
    }

    proptest! {
        /// Splitting any capacity over more instances never saves area.
        #[test]
        fn splitting_never_saves_area(p in 1u32..4096, c in 0.01f64..8192.0) {
            let m = MemoryAreaModel::default();
            let split = p as f64 * m.memory_area_mm2(c / p as f64).unwrap();
            let whole = m.memory_area_mm2(c).unwrap();
            prop_assert!(split >= whole - 1e-9);
        }
    }
}
