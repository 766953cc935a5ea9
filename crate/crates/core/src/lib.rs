//! Design-space models for a tiled many-core machine that emulates one large
//! flat memory over a switched interconnect.
//!
//! The crate answers five questions about such a machine, each in its own
//! module:
//!
//! * [`topology`] builds the interconnect (folded-Clos or 2D mesh of fixed
//!   radix crossbars) and measures hop distances on it.
//! * [`latency`] prices a single message as cycles through switches, links
//!   and serialisation.
//! * [`memory`] combines the two into the round-trip cost of one emulated
//!   memory access, exactly (averaged over the address space) or by sampling.
//! * [`workload`] turns access costs into whole-program slowdowns for
//!   instruction mixes.
//! * [`area`] estimates the silicon cost of the chip and its memories and
//!   compares it against a single-processor machine with monolithic memory.
//!
//! The [`scenario`] module ties them together: a [`Scenario`] describes a
//! sweep, runs it deterministically, and renders tables for plotting.

pub mod area;
pub mod latency;
pub mod memory;
pub mod scenario;
pub mod topology;
pub mod workload;

pub use area::{
    layout_area, layout_clos_area, layout_mesh_area, system_area, AreaError, AreaParams,
    AreaReport, MemoryAreaModel, MemoryComparison, MemoryLatencyCurve, PerTileArea,
};
pub use latency::{LatencyParams, RouteMode};
pub use memory::{AccessModel, LatencySample, MemoryEmulation, MemoryError, MemoryMap};
pub use scenario::{
    emit_figure, FigureId, MixChoice, OutputFormat, RunReport, RunRow, Scenario, ScenarioError,
};
pub use topology::{NetworkKind, SwitchGraph, SwitchId, TileId, TopologyError, TopologySpec};
pub use workload::{
    expected_op_time, slowdown, worst_case_slowdown, InstructionMix, MachineModel, WorkloadError,
};
