//! Zero-load message latency through the switch fabric.
//!
//! A message pays the tile-to-switch boundary twice, a serialisation charge
//! once, a per-switch traversal charge for every switch on the path, and a
//! per-link charge for every inter-switch hop. Routes through a circuit
//! switch are either already open or must be opened by the header, which
//! costs extra at every switch.

/// Whether the circuit along the path is already open for this message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RouteMode {
    Open,
    Closed,
}

impl std::str::FromStr for RouteMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "open" => Ok(RouteMode::Open),
            "closed" => Ok(RouteMode::Closed),
            other => Err(format!(
                "unknown route mode '{other}' (expected open or closed)"
            )),
        }
    }
}

impl RouteMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RouteMode::Open => "open",
            RouteMode::Closed => "closed",
        }
    }
}

impl std::fmt::Display for RouteMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fixed per-component delays, all in switch clock cycles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyParams {
    /// Tile to switch (and switch to tile) boundary crossing.
    pub tile_switch_cycles: u64,
    /// Switch traversal with the route already open.
    pub switch_cycles: u64,
    /// Extra per-switch cost for opening a closed route.
    pub closed_route_extra_cycles: u64,
    /// One-off serialisation of the message onto the fabric.
    pub serialisation_cycles: u64,
    /// Inter-switch link traversal.
    pub link_cycles: u64,
    /// Fabric clock; 1 GHz makes one cycle one nanosecond.
    pub clock_hz: f64,
}

impl Default for LatencyParams {
    fn default() -> Self {
        LatencyParams {
            tile_switch_cycles: 1,
            switch_cycles: 2,
            closed_route_extra_cycles: 5,
            serialisation_cycles: 2,
            link_cycles: 2,
            clock_hz: 1e9,
        }
    }
}

impl LatencyParams {
    /// Cycles for a message crossing `hops` inter-switch links (and therefore
    /// `hops + 1` switches).
    pub fn zero_load_cycles(&self, hops: u32, route: RouteMode) -> u64 {
        let h = hops as u64;
        let per_switch = match route {
            RouteMode::Open => self.switch_cycles,
            RouteMode::Closed => self.switch_cycles + self.closed_route_extra_cycles,
        };
        2 * self.tile_switch_cycles
            + self.serialisation_cycles
            + (h + 1) * per_switch
            + h * self.link_cycles
    }

    pub fn cycles_to_ns(&self, cycles: u64) -> f64 {
        cycles as f64 * 1e9 / self.clock_hz
    }

    pub fn zero_load_ns(&self, hops: u32, route: RouteMode) -> f64 {
        self.cycles_to_ns(self.zero_load_cycles(hops, route))
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.clock_hz.is_finite() && self.clock_hz > 0.0) {
            return Err(format!("clock_hz must be positive, got {}", self.clock_hz));
        }
        Ok(())
    }
}
