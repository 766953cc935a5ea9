//! Emulating one large flat memory with the per-tile memories of the machine.
//!
//! The emulated address space is split into equal contiguous blocks, one per
//! tile. A controller tile accepts each access from the running program,
//! forwards it to the tile holding the address, and relays the reply:
//!
//! ```text
//! program -> controller -> home tile -> (local access) -> controller -> program
//! ```
//!
//! Each of the four message legs pays the zero-load fabric latency for its
//! hop count; the program and controller share a tile, so the first and last
//! legs cross zero inter-switch links. The single-machine baseline it is
//! compared against is one DRAM access at a fixed latency.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::latency::{LatencyParams, RouteMode};
use crate::topology::{NetworkKind, SwitchGraph, SwitchRole, TileId, TopologyError};

#[derive(Debug, Error, PartialEq)]
pub enum MemoryError {
    #[error("address {address} outside the {capacity}-byte emulated memory")]
    OutOfRange { address: u64, capacity: u64 },
    #[error("capacity must be positive")]
    ZeroCapacity,
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// Equal-block partition of the emulated address space over all tiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryMap {
    capacity_bytes: u64,
    tiles: u32,
    block_bytes: u64,
    pub controller_tile: TileId,
}

impl MemoryMap {
    pub fn new(capacity_bytes: u64, tiles: u32) -> Result<Self, MemoryError> {
        if capacity_bytes == 0 {
            return Err(MemoryError::ZeroCapacity);
        }
        Ok(MemoryMap {
            capacity_bytes,
            tiles,
            block_bytes: capacity_bytes.div_ceil(tiles as u64),
            controller_tile: TileId(0),
        })
    }

    pub fn capacity_bytes(&self) -> u64 {
        self.capacity_bytes
    }

    pub fn block_bytes(&self) -> u64 {
        self.block_bytes
    }

    /// Home tile of an emulated address.
    pub fn tile_for_address(&self, address: u64) -> Result<TileId, MemoryError> {
        if address >= self.capacity_bytes {
            return Err(MemoryError::OutOfRange {
                address,
                capacity: self.capacity_bytes,
            });
        }
        Ok(TileId((address / self.block_bytes) as u32))
    }
}

/// Cost model for one emulated access and for the baseline machine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccessModel {
    /// Cycles for the access in the home tile's own memory.
    pub local_memory_cycles: u64,
    /// Controller bookkeeping added once per access.
    pub controller_overhead_cycles: u64,
    /// Single-machine DRAM access used as the comparison baseline (ns).
    pub dram_baseline_ns: f64,
    /// Whether fabric routes are found open or must be opened per message.
    pub route: RouteMode,
}

impl Default for AccessModel {
    fn default() -> Self {
        AccessModel {
            local_memory_cycles: 10,
            controller_overhead_cycles: 0,
            dram_baseline_ns: 36.0,
            route: RouteMode::Closed,
        }
    }
}

impl AccessModel {
    /// The baseline machine performs the access directly in its DRAM.
    pub fn sm_access_ns(&self) -> f64 {
        self.dram_baseline_ns
    }
}

/// Mean and spread of a sampled batch of access latencies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencySample {
    pub samples: u64,
    pub mean_ns: f64,
    pub stddev_ns: f64,
}

/// Picks the controller's home: tile 0 on a Clos (edge switches are
/// interchangeable), the first tile of the central grid switch on a mesh
/// (minimises the expected request distance).
pub fn default_controller_tile(graph: &SwitchGraph) -> TileId {
    match graph.kind() {
        NetworkKind::Clos => TileId(0),
        NetworkKind::Mesh => {
            let (rows, cols) = graph.grid_dims().expect("mesh graphs carry grid dims");
            let (row, col) = ((rows - 1) / 2, (cols - 1) / 2);
            let central = graph
                .switches()
                .iter()
                .find(|s| s.role == SwitchRole::Grid { row, col })
                .expect("central switch exists");
            let t = graph.spec().tiles_per_switch;
            TileId(central.id.0 * t)
        }
    }
}

/// One machine's emulated-memory timing: the graph, fabric parameters and
/// access model with a fixed controller placement.
#[derive(Debug, Clone)]
pub struct MemoryEmulation<'g> {
    graph: &'g SwitchGraph,
    latency: LatencyParams,
    access: AccessModel,
    controller: TileId,
    /// Cycles from controller to each tile's home switch, by tile.
    tile_hops: Vec<u32>,
}

impl<'g> MemoryEmulation<'g> {
    pub fn new(
        graph: &'g SwitchGraph,
        latency: LatencyParams,
        access: AccessModel,
    ) -> Result<Self, MemoryError> {
        Self::with_controller(graph, latency, access, default_controller_tile(graph))
    }

    pub fn with_controller(
        graph: &'g SwitchGraph,
        latency: LatencyParams,
        access: AccessModel,
        controller: TileId,
    ) -> Result<Self, MemoryError> {
        let home = graph.home_switch(controller)?;
        let switch_dist = graph.switch_distances(home);
        let tile_hops = (0..graph.tiles())
            .map(|t| switch_dist[graph.home_switch(TileId(t)).unwrap().0 as usize])
            .collect();
        Ok(MemoryEmulation {
            graph,
            latency,
            access,
            controller,
            tile_hops,
        })
    }

    pub fn controller(&self) -> TileId {
        self.controller
    }

    pub fn graph(&self) -> &SwitchGraph {
        self.graph
    }

    fn access_cycles_for_hops(&self, hops: u32) -> u64 {
        let leg = |h| self.latency.zero_load_cycles(h, self.access.route);
        // program->controller, request, local access, reply, controller->program
        leg(0)
            + leg(hops)
            + self.access.local_memory_cycles
            + leg(hops)
            + leg(0)
            + self.access.controller_overhead_cycles
    }

    /// Latency of one access whose home is `target`, in nanoseconds.
    pub fn access_latency_ns(&self, target: TileId) -> Result<f64, MemoryError> {
        let hops = *self
            .tile_hops
            .get(target.0 as usize)
            .ok_or(TopologyError::UnknownTile(target.0))?;
        Ok(self.latency.cycles_to_ns(self.access_cycles_for_hops(hops)))
    }

    /// Exact expectation of the access latency over a uniformly chosen
    /// target tile.
    pub fn average_access_ns(&self) -> f64 {
        let hist = self
            .graph
            .tile_hop_histogram(self.controller)
            .expect("controller tile is valid");
        let total: u64 = hist.iter().sum();
        let sum: f64 = hist
            .iter()
            .enumerate()
            .map(|(h, &n)| {
                n as f64
                    * self
                        .latency
                        .cycles_to_ns(self.access_cycles_for_hops(h as u32))
            })
            .sum();
        sum / total as f64
    }

    /// Empirical mean and standard deviation over `n` independent uniform
    /// targets. Identical seeds give identical results.
    pub fn sample_access_ns(&self, n: u64, seed: u64) -> Result<LatencySample, MemoryError> {
        if n == 0 {
            return Err(MemoryError::ZeroSamples);
        }
        let per_tile: Vec<f64> = (0..self.graph.tiles())
            .map(|t| self.access_latency_ns(TileId(t)).unwrap())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tiles = self.graph.tiles();
        let mut sum = 0.0f64;
        let mut sum_sq = 0.0f64;
        for _ in 0..n {
            let x = per_tile[rng.random_range(0..tiles) as usize];
            sum += x;
            sum_sq += x * x;
        }
        let mean = sum / n as f64;
        let var = (sum_sq / n as f64 - mean * mean).max(0.0);
        Ok(LatencySample {
            samples: n,
            mean_ns: mean,
            stddev_ns: var.sqrt(),
        })
    }
}
