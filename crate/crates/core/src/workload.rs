//! Instruction-mix workload model and the slowdown of the emulating machine
//! relative to the single-machine baseline.
//!
//! Every executed operation falls in one of three classes: *global* accesses
//! that reach the emulated memory, *local* accesses served by the tile's own
//! memory (the cache-resident working set), and everything else. A machine is
//! summarised by its average cost per class; the expected per-operation time
//! is the mix-weighted dot product, and the slowdown is the ratio of the two
//! machines' expectations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::latency::LatencyParams;
use crate::memory::{AccessModel, MemoryEmulation, MemoryError};
use crate::topology::{SwitchGraph, TileId};

#[derive(Debug, Error, PartialEq)]
pub enum WorkloadError {
    #[error("fraction {name} = {value} is outside [0, 1]")]
    FractionRange { name: &'static str, value: f64 },
    #[error("mix fractions sum to {sum}, not 1")]
    FractionSum { sum: f64 },
    #[error("operation count must be positive")]
    ZeroOps,
    #[error("expected op time of the baseline machine is not positive")]
    DegenerateBaseline,
    #[error(transparent)]
    Memory(#[from] MemoryError),
}

const MIX_SUM_TOLERANCE: f64 = 1e-9;

/// Fractions of executed operations per class; they must sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstructionMix {
    pub global_frac: f64,
    pub local_frac: f64,
    pub other_frac: f64,
}

impl InstructionMix {
    pub fn new(global_frac: f64, local_frac: f64, other_frac: f64) -> Result<Self, WorkloadError> {
        let mix = InstructionMix {
            global_frac,
            local_frac,
            other_frac,
        };
        mix.validate()?;
        Ok(mix)
    }

    /// Dhrystone-style integer benchmark: 10% global, 12% local memory.
    pub fn dhrystone() -> Self {
        InstructionMix {
            global_frac: 0.10,
            local_frac: 0.12,
            other_frac: 0.78,
        }
    }

    /// Compiler-like workload: fewer far references, more cache hits.
    pub fn compiler() -> Self {
        InstructionMix {
            global_frac: 0.05,
            local_frac: 0.21,
            other_frac: 0.74,
        }
    }

    /// Synthetic sweep point: 10% local with a chosen global fraction.
    pub fn with_global(global_frac: f64) -> Result<Self, WorkloadError> {
        InstructionMix::new(global_frac, 0.10, 1.0 - 0.10 - global_frac)
    }

    pub fn validate(&self) -> Result<(), WorkloadError> {
        for (name, value) in [
            ("global", self.global_frac),
            ("local", self.local_frac),
            ("other", self.other_frac),
        ] {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(WorkloadError::FractionRange { name, value });
            }
        }
        let sum = self.global_frac + self.local_frac + self.other_frac;
        if (sum - 1.0).abs() > MIX_SUM_TOLERANCE {
            return Err(WorkloadError::FractionSum { sum });
        }
        Ok(())
    }
}

/// Average per-class operation cost of one machine, in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MachineModel {
    pub global_ns: f64,
    pub local_ns: f64,
    pub other_ns: f64,
}

impl MachineModel {
    /// The emulating machine: global accesses pay the expected emulated
    /// access latency, local ones the tile memory, the rest one cycle.
    pub fn parallel_machine(
        em: &MemoryEmulation<'_>,
        lp: &LatencyParams,
        am: &AccessModel,
    ) -> Self {
        MachineModel {
            global_ns: em.average_access_ns(),
            local_ns: lp.cycles_to_ns(am.local_memory_cycles),
            other_ns: lp.cycles_to_ns(1),
        }
    }

    /// The baseline machine: global accesses go straight to DRAM; local and
    /// other operations cost the same as on the emulating machine.
    pub fn sequential_machine(lp: &LatencyParams, am: &AccessModel) -> Self {
        MachineModel {
            global_ns: am.dram_baseline_ns,
            local_ns: lp.cycles_to_ns(am.local_memory_cycles),
            other_ns: lp.cycles_to_ns(1),
        }
    }
}

/// Mix-weighted expected time of one operation on `machine`.
pub fn expected_op_time(mix: &InstructionMix, machine: &MachineModel) -> f64 {
    mix.global_frac * machine.global_ns
        + mix.local_frac * machine.local_ns
        + mix.other_frac * machine.other_ns
}

/// Expected-time ratio of the emulating machine over the baseline.
pub fn slowdown(
    mix: &InstructionMix,
    pm: &MachineModel,
    sm: &MachineModel,
) -> Result<f64, WorkloadError> {
    mix.validate()?;
    let base = expected_op_time(mix, sm);
    if !(base.is_finite() && base > 0.0) {
        return Err(WorkloadError::DegenerateBaseline);
    }
    Ok(expected_op_time(mix, pm) / base)
}

/// Limit of the slowdown as the mix becomes all global accesses.
pub fn worst_case_slowdown(pm: &MachineModel, sm: &MachineModel) -> f64 {
    pm.global_ns / sm.global_ns
}

/// Runs `ops` operations drawn i.i.d. from the mix on the emulating machine,
/// with global targets uniform over the tiles. Returns total nanoseconds.
/// Identical seeds give identical results.
pub fn simulate_stream(
    mix: &InstructionMix,
    ops: u64,
    seed: u64,
    graph: &SwitchGraph,
    lp: &LatencyParams,
    am: &AccessModel,
) -> Result<f64, WorkloadError> {
    mix.validate()?;
    if ops == 0 {
        return Err(WorkloadError::ZeroOps);
    }
    let em = MemoryEmulation::new(graph, *lp, *am)?;
    let per_tile: Vec<f64> = (0..graph.tiles())
        .map(|t| em.access_latency_ns(TileId(t)).unwrap())
        .collect();
    let local_ns = lp.cycles_to_ns(am.local_memory_cycles);
    let other_ns = lp.cycles_to_ns(1);
    let tiles = graph.tiles();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0f64;
    for _ in 0..ops {
        let class: f64 = rng.random();
        if class < mix.global_frac {
            total += per_tile[rng.random_range(0..tiles) as usize];
        } else if class < mix.global_frac + mix.local_frac {
            total += local_ns;
        } else {
            total += other_ns;
        }
    }
    Ok(total)
}
