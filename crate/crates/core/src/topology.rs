//! Switch-level topology construction and distance queries.
//!
//! Machines are built from fixed-radix crossbar switches with `tiles_per_switch`
//! processor tiles attached to each tile-bearing switch. Two network families
//! are supported:
//!
//! * **Folded Clos** with one, two or three switch stages. A single switch
//!   suffices while the tile count fits its radix. A two-stage network adds a
//!   core stage reached by every edge switch, preserving full bisection
//!   bandwidth when half the radix faces tiles. A three-stage network groups
//!   edge switches into pods of `radix/2`, gives each pod its own middle
//!   stage, and connects middle switch `j` of every pod to core block `j`, so
//!   every core reaches every pod:
//!
//!   ```text
//!        cores        c0   c1   ...         (radix/2 blocks, block j serves
//!                    /  \ /  \               middle index j of every pod)
//!        middles   m0 m1 .. | m0 m1 ..
//!                  |X X X|  |  |X X X|       complete bipartite within a pod
//!        edges     e0 e1 .. | e0 e1 ..
//!                  pod 0      pod 1
//!   ```
//!
//! * **Mesh**: the switches form a near-square grid with single links between
//!   4-neighbours.
//!
//! Tiles are numbered contiguously per switch: tile `i` lives on switch
//! `i / tiles_per_switch`. Hop counts are inter-switch hops only; two tiles on
//! the same switch are zero hops apart.

use std::collections::VecDeque;
use thiserror::Error;

/// Identifies one processor tile. Tiles are dense indices starting at zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TileId(pub u32);

/// Identifies one switch within a built graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwitchId(pub u32);

/// Network family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NetworkKind {
    Clos,
    Mesh,
}

impl NetworkKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NetworkKind::Clos => "clos",
            NetworkKind::Mesh => "mesh",
        }
    }
}

impl std::fmt::Display for NetworkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for NetworkKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "clos" => Ok(NetworkKind::Clos),
            "mesh" => Ok(NetworkKind::Mesh),
            other => Err(format!(
                "unknown network kind '{other}' (expected clos or mesh)"
            )),
        }
    }
}

/// Requested machine shape. `radix` counts switch ports; `tiles_per_switch`
/// of them face tiles on each tile-bearing switch, the rest face other
/// switches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopologySpec {
    pub kind: NetworkKind,
    pub tiles: u32,
    pub radix: u32,
    pub tiles_per_switch: u32,
}

pub const DEFAULT_RADIX: u32 = 32;

impl TopologySpec {
    /// Spec with the default 32-port switch hosting 16 tiles.
    pub fn new(kind: NetworkKind, tiles: u32) -> Self {
        TopologySpec {
            kind,
            tiles,
            radix: DEFAULT_RADIX,
            tiles_per_switch: DEFAULT_RADIX / 2,
        }
    }

    pub fn with_radix(kind: NetworkKind, tiles: u32, radix: u32) -> Self {
        TopologySpec {
            kind,
            tiles,
            radix,
            tiles_per_switch: radix / 2,
        }
    }

    /// Largest tile count the three-stage Clos construction can reach:
    /// `radix` pods of `radix/2` edge switches.
    pub fn clos_capacity(&self) -> u32 {
        self.tiles_per_switch * (self.radix / 2) * self.radix
    }

    pub fn validate(&self) -> Result<(), TopologyError> {
        if self.radix == 0 || !self.radix.is_multiple_of(2) {
            return Err(TopologyError::BadRadix { radix: self.radix });
        }
        if self.tiles_per_switch == 0 || self.tiles_per_switch > self.radix {
            return Err(TopologyError::BadTilesPerSwitch {
                tiles_per_switch: self.tiles_per_switch,
                radix: self.radix,
            });
        }
        if self.tiles == 0 {
            return Err(TopologyError::ZeroTiles);
        }
        if !self.tiles.is_multiple_of(self.tiles_per_switch) {
            return Err(TopologyError::NonDivisible {
                tiles: self.tiles,
                tiles_per_switch: self.tiles_per_switch,
            });
        }
        if self.kind == NetworkKind::Clos && self.tiles > self.clos_capacity() {
            return Err(TopologyError::CapacityExceeded {
                tiles: self.tiles,
                capacity: self.clos_capacity(),
                radix: self.radix,
            });
        }
        Ok(())
    }

    pub fn build(&self) -> Result<SwitchGraph, TopologyError> {
        build_topology(self)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("radix {radix} is not a positive even number")]
    BadRadix { radix: u32 },
    #[error("tiles per switch {tiles_per_switch} must be in 1..={radix}")]
    BadTilesPerSwitch { tiles_per_switch: u32, radix: u32 },
    #[error("tile count must be positive")]
    ZeroTiles,
    #[error("tile count {tiles} is not a multiple of tiles per switch {tiles_per_switch}")]
    NonDivisible { tiles: u32, tiles_per_switch: u32 },
    #[error("{tiles} tiles exceed the radix-{radix} Clos capacity of {capacity}")]
    CapacityExceeded {
        tiles: u32,
        capacity: u32,
        radix: u32,
    },
    #[error("no {kind} construction for {tiles} tiles with radix {radix}: {reason}")]
    UnsupportedSize {
        kind: NetworkKind,
        tiles: u32,
        radix: u32,
        reason: &'static str,
    },
    #[error("tile {0} out of range for this graph")]
    UnknownTile(u32),
}

/// Position a switch occupies in its network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchRole {
    /// Tile-bearing Clos stage (also the sole switch of a one-stage network).
    Edge,
    /// Pod-internal middle stage of a three-stage Clos.
    Mid,
    /// Top stage of a two- or three-stage Clos.
    Core,
    /// Mesh switch at the given grid coordinate.
    Grid { row: u32, col: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Switch {
    pub id: SwitchId,
    pub role: SwitchRole,
}

/// Undirected link bundle between two switches. Parallel links between the
/// same pair are collapsed into one record with a multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Link {
    pub a: SwitchId,
    pub b: SwitchId,
    pub multiplicity: u32,
}

/// A built switch network plus the tile attachment map.
#[derive(Debug, Clone)]
pub struct SwitchGraph {
    spec: TopologySpec,
    switches: Vec<Switch>,
    links: Vec<Link>,
    /// tile index -> home switch
    tile_home: Vec<SwitchId>,
    /// switch index -> attached tile count
    switch_tiles: Vec<u32>,
    /// switch index -> distinct neighbour switch indices
    adjacency: Vec<Vec<u32>>,
    /// Clos stage count (1, 2 or 3); 0 for a mesh
    levels: u8,
    /// mesh grid shape (rows, cols)
    grid: Option<(u32, u32)>,
}

#[derive(Debug, Error, PartialEq)]
pub enum InvariantViolation {
    #[error("switch {switch} uses {used} ports but the radix is {radix}")]
    PortBudget { switch: u32, used: u32, radix: u32 },
    #[error("switch {switch} hosts {tiles} tiles, expected {expected}")]
    TileAttachment {
        switch: u32,
        tiles: u32,
        expected: u32,
    },
    #[error("upward link multiplicity {upward} at the {stage} boundary does not cover the {tiles} tiles below it")]
    BandwidthConservation {
        stage: &'static str,
        upward: u32,
        tiles: u32,
    },
    #[error("mesh switch {switch} has {neighbours} neighbours")]
    MeshDegree { switch: u32, neighbours: usize },
    #[error("mesh link {a}-{b} does not join grid neighbours")]
    MeshLink { a: u32, b: u32 },
    #[error("malformed link table: {0}")]
    Links(String),
}

/// Builds the switch network described by `spec`.
pub fn build_topology(spec: &TopologySpec) -> Result<SwitchGraph, TopologyError> {
    spec.validate()?;
    let mut g = match spec.kind {
        NetworkKind::Clos => build_clos(spec)?,
        NetworkKind::Mesh => build_mesh(spec),
    };
    g.adjacency = build_adjacency(g.switches.len(), &g.links);
    Ok(g)
}

fn build_clos(spec: &TopologySpec) -> Result<SwitchGraph, TopologyError> {
    let p = spec.tiles;
    let k = spec.radix;
    let t = spec.tiles_per_switch;

    if p <= k {
        // One crossbar covers every tile.
        return Ok(SwitchGraph {
            spec: *spec,
            switches: vec![Switch {
                id: SwitchId(0),
                role: SwitchRole::Edge,
            }],
            links: Vec::new(),
            tile_home: vec![SwitchId(0); p as usize],
            switch_tiles: vec![p],
            adjacency: Vec::new(),
            levels: 1,
            grid: None,
        });
    }

    let edges = p / t;
    let uplinks = k - t;
    if uplinks == 0 {
        return Err(TopologyError::UnsupportedSize {
            kind: spec.kind,
            tiles: p,
            radix: k,
            reason: "no ports left for uplinks",
        });
    }

    if p <= t * k {
        build_clos_two_stage(spec, edges, uplinks)
    } else {
        build_clos_three_stage(spec, edges)
    }
}

/// Two stages: every edge switch reaches every core switch. Cores expose
/// exactly `radix` downlinks, so `edges * uplinks` must divide evenly.
fn build_clos_two_stage(
    spec: &TopologySpec,
    edges: u32,
    uplinks: u32,
) -> Result<SwitchGraph, TopologyError> {
    let k = spec.radix;
    let cores = edges * uplinks / k;
    if cores == 0 || cores * k != edges * uplinks {
        return Err(TopologyError::UnsupportedSize {
            kind: spec.kind,
            tiles: spec.tiles,
            radix: k,
            reason: "edge uplinks do not fill a whole number of core switches",
        });
    }

    let mut switches: Vec<Switch> = (0..edges)
        .map(|i| Switch {
            id: SwitchId(i),
            role: SwitchRole::Edge,
        })
        .collect();
    switches.extend((0..cores).map(|i| Switch {
        id: SwitchId(edges + i),
        role: SwitchRole::Core,
    }));

    // Global round robin: consecutive uplinks cycle through the cores, so
    // every core ends up with exactly `radix` downlinks and each edge sees
    // uplinks/cores parallel links per core when that divides evenly.
    let mut mult = vec![0u32; (edges * cores) as usize];
    for e in 0..edges {
        for i in 0..uplinks {
            let c = (e * uplinks + i) % cores;
            mult[(e * cores + c) as usize] += 1;
        }
    }
    let mut links = Vec::new();
    for e in 0..edges {
        for c in 0..cores {
            let m = mult[(e * cores + c) as usize];
            if m > 0 {
                links.push(Link {
                    a: SwitchId(e),
                    b: SwitchId(edges + c),
                    multiplicity: m,
                });
            }
        }
    }

    Ok(finish_clos(spec, switches, links, edges, 2))
}

/// Three stages. Pods hold `radix/2` edge and `radix/2` middle switches wired
/// as a complete bipartite graph. Middle switch `j` of every pod feeds core
/// block `j`; blocks hold `edges/radix` cores, so `edges` must be a multiple
/// of the radix for the blocks to come out whole.
fn build_clos_three_stage(spec: &TopologySpec, edges: u32) -> Result<SwitchGraph, TopologyError> {
    let k = spec.radix;
    let half = k / 2;
    if spec.tiles_per_switch != half {
        return Err(TopologyError::UnsupportedSize {
            kind: spec.kind,
            tiles: spec.tiles,
            radix: k,
            reason: "three-stage pods need tiles_per_switch = radix/2",
        });
    }
    if !edges.is_multiple_of(k) {
        return Err(TopologyError::UnsupportedSize {
            kind: spec.kind,
            tiles: spec.tiles,
            radix: k,
            reason: "edge count must be a multiple of the radix to fill core blocks",
        });
    }

    let pods = edges / half;
    let mids = edges; // radix/2 per pod
    let cores = edges / 2; // edges * (radix/2) uplinks shared radix ways
    let block = edges / k; // cores per middle index

    let mut switches: Vec<Switch> = (0..edges)
        .map(|i| Switch {
            id: SwitchId(i),
            role: SwitchRole::Edge,
        })
        .collect();
    switches.extend((0..mids).map(|i| Switch {
        id: SwitchId(edges + i),
        role: SwitchRole::Mid,
    }));
    switches.extend((0..cores).map(|i| Switch {
        id: SwitchId(edges + mids + i),
        role: SwitchRole::Core,
    }));

    let mut links = Vec::new();
    // Edge -> mid: single link to each middle switch of the pod.
    for e in 0..edges {
        let pod = e / half;
        for j in 0..half {
            links.push(Link {
                a: SwitchId(e),
                b: SwitchId(edges + pod * half + j),
                multiplicity: 1,
            });
        }
    }
    // Mid -> core: middle (pod, j) spreads its radix/2 uplinks round robin
    // over block j, rotated per pod so each core collects exactly `radix`
    // downlinks overall.
    let mut mult = vec![0u32; (mids * block) as usize];
    for pod in 0..pods {
        for j in 0..half {
            let mid = pod * half + j;
            for i in 0..half {
                let c = (pod * half + i) % block;
                mult[(mid * block + c) as usize] += 1;
            }
        }
    }
    for mid in 0..mids {
        let j = mid % half;
        for c in 0..block {
            let m = mult[(mid * block + c) as usize];
            if m > 0 {
                links.push(Link {
                    a: SwitchId(edges + mid),
                    b: SwitchId(edges + mids + j * block + c),
                    multiplicity: m,
                });
            }
        }
    }

    Ok(finish_clos(spec, switches, links, edges, 3))
}

fn finish_clos(
    spec: &TopologySpec,
    switches: Vec<Switch>,
    links: Vec<Link>,
    edges: u32,
    levels: u8,
) -> SwitchGraph {
    let t = spec.tiles_per_switch;
    let tile_home: Vec<SwitchId> = (0..spec.tiles).map(|i| SwitchId(i / t)).collect();
    let mut switch_tiles = vec![0u32; switches.len()];
    for s in 0..edges {
        switch_tiles[s as usize] = t;
    }
    SwitchGraph {
        spec: *spec,
        switches,
        links,
        tile_home,
        switch_tiles,
        adjacency: Vec::new(),
        levels,
        grid: None,
    }
}

fn build_mesh(spec: &TopologySpec) -> SwitchGraph {
    let t = spec.tiles_per_switch;
    let count = spec.tiles / t;
    let rows = (count as f64).sqrt().floor() as u32;
    let rows = rows.max(1);
    let cols = count.div_ceil(rows);

    let switches: Vec<Switch> = (0..count)
        .map(|i| Switch {
            id: SwitchId(i),
            role: SwitchRole::Grid {
                row: i / cols,
                col: i % cols,
            },
        })
        .collect();

    // Row-major numbering; the last row may be short.
    let mut links = Vec::new();
    for i in 0..count {
        let (r, c) = (i / cols, i % cols);
        if c + 1 < cols && i + 1 < count && (i + 1) / cols == r {
            links.push(Link {
                a: SwitchId(i),
                b: SwitchId(i + 1),
                multiplicity: 1,
            });
        }
        if i + cols < count {
            links.push(Link {
                a: SwitchId(i),
                b: SwitchId(i + cols),
                multiplicity: 1,
            });
        }
    }

    let tile_home: Vec<SwitchId> = (0..spec.tiles).map(|i| SwitchId(i / t)).collect();
    let switch_tiles = vec![t; count as usize];
    SwitchGraph {
        spec: *spec,
        switches,
        links,
        tile_home,
        switch_tiles,
        adjacency: Vec::new(),
        levels: 0,
        grid: Some((rows, cols)),
    }
}

fn build_adjacency(n: usize, links: &[Link]) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); n];
    for l in links {
        adj[l.a.0 as usize].push(l.b.0);
        adj[l.b.0 as usize].push(l.a.0);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

impl SwitchGraph {
    pub fn spec(&self) -> &TopologySpec {
        &self.spec
    }

    pub fn kind(&self) -> NetworkKind {
        self.spec.kind
    }

    pub fn tiles(&self) -> u32 {
        self.spec.tiles
    }

    pub fn switches(&self) -> &[Switch] {
        &self.switches
    }

    pub fn switch_count(&self) -> u32 {
        self.switches.len() as u32
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Total link count including parallel links.
    pub fn link_multiplicity_total(&self) -> u32 {
        self.links.iter().map(|l| l.multiplicity).sum()
    }

    /// Clos stage count (1, 2 or 3). Zero for a mesh.
    pub fn levels(&self) -> u8 {
        self.levels
    }

    /// Mesh grid shape as (rows, cols).
    pub fn grid_dims(&self) -> Option<(u32, u32)> {
        self.grid
    }

    pub fn tiles_on(&self, s: SwitchId) -> u32 {
        self.switch_tiles[s.0 as usize]
    }

    pub fn home_switch(&self, tile: TileId) -> Result<SwitchId, TopologyError> {
        self.tile_home
            .get(tile.0 as usize)
            .copied()
            .ok_or(TopologyError::UnknownTile(tile.0))
    }

    /// Inter-switch hop distances from `from` to every switch.
    pub fn switch_distances(&self, from: SwitchId) -> Vec<u32> {
        let n = self.switches.len();
        let mut dist = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        dist[from.0 as usize] = 0;
        queue.push_back(from.0);
        while let Some(s) = queue.pop_front() {
            let d = dist[s as usize];
            for &nb in &self.adjacency[s as usize] {
                if dist[nb as usize] == u32::MAX {
                    dist[nb as usize] = d + 1;
                    queue.push_back(nb);
                }
            }
        }
        dist
    }

    /// Switch hops between the home switches of two tiles.
    pub fn hop_count(&self, s: TileId, d: TileId) -> Result<u32, TopologyError> {
        let a = self.home_switch(s)?;
        let b = self.home_switch(d)?;
        if a == b {
            return Ok(0);
        }
        Ok(self.switch_distances(a)[b.0 as usize])
    }

    /// Number of tiles at each hop distance from `from`'s home switch,
    /// including `from` itself at distance zero.
    pub fn tile_hop_histogram(&self, from: TileId) -> Result<Vec<u64>, TopologyError> {
        let home = self.home_switch(from)?;
        let dist = self.switch_distances(home);
        let mut hist = Vec::new();
        for (s, &d) in dist.iter().enumerate() {
            let tiles = self.switch_tiles[s];
            if tiles == 0 {
                continue;
            }
            let d = d as usize;
            if hist.len() <= d {
                hist.resize(d + 1, 0);
            }
            hist[d] += tiles as u64;
        }
        Ok(hist)
    }

    /// Expected hop count from `from` to a uniformly chosen tile (including
    /// `from` itself at zero hops).
    pub fn mean_hops_from(&self, from: TileId) -> Result<f64, TopologyError> {
        let hist = self.tile_hop_histogram(from)?;
        let total: u64 = hist.iter().sum();
        let weighted: u64 = hist.iter().enumerate().map(|(h, &n)| h as u64 * n).sum();
        Ok(weighted as f64 / total as f64)
    }

    /// Maximum hop count over all tile pairs.
    pub fn diameter(&self) -> u32 {
        let mut best = 0;
        for (s, &tiles) in self.switch_tiles.iter().enumerate() {
            if tiles == 0 {
                continue;
            }
            let dist = self.switch_distances(SwitchId(s as u32));
            for (d, &tiles_d) in self.switch_tiles.iter().enumerate() {
                if tiles_d > 0 && dist[d] != u32::MAX {
                    best = best.max(dist[d]);
                }
            }
        }
        best
    }

    fn stage_rank(role: SwitchRole) -> u32 {
        match role {
            SwitchRole::Edge => 0,
            SwitchRole::Mid => 1,
            SwitchRole::Core => 2,
            SwitchRole::Grid { .. } => 0,
        }
    }

    /// Checks the structural invariants of the built graph: port budgets,
    /// tile attachment, upward bandwidth across Clos stage boundaries and
    /// mesh neighbour constraints.
    pub fn validate(&self) -> Result<(), InvariantViolation> {
        let n = self.switches.len();
        let k = self.spec.radix;
        let t = self.spec.tiles_per_switch;
        let p = self.spec.tiles;

        let mut port_load = self.switch_tiles.clone();
        for l in &self.links {
            let (a, b) = (l.a.0 as usize, l.b.0 as usize);
            if a >= n || b >= n || a == b || l.multiplicity == 0 {
                return Err(InvariantViolation::Links(format!(
                    "link {}-{} x{}",
                    l.a.0, l.b.0, l.multiplicity
                )));
            }
            port_load[a] += l.multiplicity;
            port_load[b] += l.multiplicity;
        }
        for (s, &used) in port_load.iter().enumerate() {
            if used > k {
                return Err(InvariantViolation::PortBudget {
                    switch: s as u32,
                    used,
                    radix: k,
                });
            }
        }

        let attached: u32 = self.switch_tiles.iter().sum();
        if attached != p || self.tile_home.len() != p as usize {
            return Err(InvariantViolation::TileAttachment {
                switch: u32::MAX,
                tiles: attached,
                expected: p,
            });
        }
        for (s, sw) in self.switches.iter().enumerate() {
            let tiles = self.switch_tiles[s];
            let expected = match sw.role {
                // A lone switch hosts the whole machine.
                SwitchRole::Edge if n == 1 => p,
                SwitchRole::Edge | SwitchRole::Grid { .. } => t,
                SwitchRole::Mid | SwitchRole::Core => 0,
            };
            if tiles != expected {
                return Err(InvariantViolation::TileAttachment {
                    switch: s as u32,
                    tiles,
                    expected,
                });
            }
        }

        match self.spec.kind {
            NetworkKind::Clos => self.validate_clos_bandwidth(),
            NetworkKind::Mesh => self.validate_mesh_links(),
        }
    }

    /// Upward link multiplicity at each stage boundary must cover the tiles
    /// below it: equal when edge uplinks match edge tiles (the balanced
    /// radix/2 configuration), never less in any configuration.
    fn validate_clos_bandwidth(&self) -> Result<(), InvariantViolation> {
        if self.levels < 2 {
            return Ok(());
        }
        let p = self.spec.tiles;
        let balanced = self.spec.radix - self.spec.tiles_per_switch == self.spec.tiles_per_switch;
        let mut boundaries: Vec<(&'static str, u32)> = vec![("edge", 0)];
        if self.levels == 3 {
            boundaries.push(("mid", 0));
        }
        for l in &self.links {
            let ra = Self::stage_rank(self.switches[l.a.0 as usize].role);
            let rb = Self::stage_rank(self.switches[l.b.0 as usize].role);
            let low = ra.min(rb) as usize;
            if ra != rb {
                boundaries[low].1 += l.multiplicity;
            }
        }
        for (stage, upward) in boundaries {
            let ok = if balanced { upward == p } else { upward >= p };
            if !ok {
                return Err(InvariantViolation::BandwidthConservation {
                    stage,
                    upward,
                    tiles: p,
                });
            }
        }
        Ok(())
    }

    fn validate_mesh_links(&self) -> Result<(), InvariantViolation> {
        for l in &self.links {
            if l.multiplicity != 1 {
                return Err(InvariantViolation::MeshLink { a: l.a.0, b: l.b.0 });
            }
            let (SwitchRole::Grid { row: ra, col: ca }, SwitchRole::Grid { row: rb, col: cb }) = (
                self.switches[l.a.0 as usize].role,
                self.switches[l.b.0 as usize].role,
            ) else {
                return Err(InvariantViolation::MeshLink { a: l.a.0, b: l.b.0 });
            };
            let dist = ra.abs_diff(rb) + ca.abs_diff(cb);
            if dist != 1 {
                return Err(InvariantViolation::MeshLink { a: l.a.0, b: l.b.0 });
            }
        }
        for (s, list) in self.adjacency.iter().enumerate() {
            if list.len() > 4 {
                return Err(InvariantViolation::MeshDegree {
                    switch: s as u32,
                    neighbours: list.len(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clos(tiles: u32) -> SwitchGraph {
        TopologySpec::new(NetworkKind::Clos, tiles).build().unwrap()
    }

    fn mesh(tiles: u32) -> SwitchGraph {
        TopologySpec::new(NetworkKind::Mesh, tiles).build().unwrap()
    }

    fn count_role(g: &SwitchGraph, role: SwitchRole) -> usize {
        g.switches().iter().filter(|s| s.role == role).count()
    }

    #[test]
    fn sixteen_tiles_fit_one_switch() {
        let g = clos(16);
        assert_eq!(g.switch_count(), 1);
        assert!(g.links().is_empty());
        assert_eq!(g.diameter(), 0);
        assert_eq!(g.mean_hops_from(TileId(3)).unwrap(), 0.0);
    }

    #[test]
    fn sixty_four_tiles_make_four_edges_two_cores() {
        let g = clos(64);
        assert_eq!(g.switch_count(), 6);
        assert_eq!(count_role(&g, SwitchRole::Edge), 4);
        assert_eq!(count_role(&g, SwitchRole::Core), 2);
        // 16 uplinks spread over 2 cores: 8 parallel links each.
        for l in g.links() {
            assert_eq!(l.multiplicity, 8);
        }
        assert_eq!(g.links().len(), 8);
        g.validate().unwrap();
    }

    #[test]
    fn mesh_256_is_a_four_by_four_grid() {
        let g = mesh(256);
        assert_eq!(g.switch_count(), 16);
        assert_eq!(g.grid_dims(), Some((4, 4)));
        for list in &g.adjacency {
            assert!(list.len() >= 2 && list.len() <= 4);
        }
        g.validate().unwrap();
    }

    #[test]
    fn switch_counts_across_the_sweep() {
        // Pod arithmetic: two-stage up to 512 tiles, then pods of 16 edge and
        // 16 mid switches plus edges/2 cores.
        assert_eq!(clos(64).switch_count(), 6);
        assert_eq!(clos(256).switch_count(), 24);
        assert_eq!(clos(1024).switch_count(), 160);
        assert_eq!(clos(4096).switch_count(), 640);
        for p in [64u32, 256, 1024, 4096] {
            assert_eq!(mesh(p).switch_count(), p / 16);
        }
    }

    #[test]
    fn three_stage_structure_at_4096() {
        let g = clos(4096);
        assert_eq!(g.levels(), 3);
        assert_eq!(count_role(&g, SwitchRole::Edge), 256);
        assert_eq!(count_role(&g, SwitchRole::Mid), 256);
        assert_eq!(count_role(&g, SwitchRole::Core), 128);
        g.validate().unwrap();
    }

    #[test]
    fn hop_counts_match_stage_arithmetic() {
        // Same switch: 0. Two-stage cross-edge: up and down again = 2.
        let g = clos(64);
        assert_eq!(g.hop_count(TileId(0), TileId(7)).unwrap(), 0);
        assert_eq!(g.hop_count(TileId(0), TileId(16)).unwrap(), 2);

        // Three-stage: same pod 2 hops via a mid, cross-pod 4 via a core.
        let g = clos(4096);
        assert_eq!(g.hop_count(TileId(0), TileId(15)).unwrap(), 0);
        assert_eq!(g.hop_count(TileId(0), TileId(240)).unwrap(), 2);
        assert_eq!(g.hop_count(TileId(0), TileId(4095)).unwrap(), 4);
    }

    #[test]
    fn mesh_hops_are_manhattan_distance() {
        let g = mesh(256);
        // Tiles 0 (switch 0 = (0,0)) and 255 (switch 15 = (3,3)).
        assert_eq!(g.hop_count(TileId(0), TileId(255)).unwrap(), 6);
        assert_eq!(g.hop_count(TileId(0), TileId(15)).unwrap(), 0);
    }

    #[test]
    fn diameters_across_the_sweep() {
        assert_eq!(clos(64).diameter(), 2);
        assert_eq!(clos(256).diameter(), 2);
        assert_eq!(clos(512).diameter(), 2);
        assert_eq!(clos(1024).diameter(), 4);
        assert_eq!(clos(4096).diameter(), 4);
        let expect = [(64u32, 2u32), (256, 6), (1024, 14), (4096, 30)];
        for (p, d) in expect {
            assert_eq!(mesh(p).diameter(), d, "mesh {p}");
        }
    }

    #[test]
    fn mesh_diameter_equals_grid_radius() {
        for p in [64u32, 256, 512, 1024, 2048, 4096] {
            let g = mesh(p);
            let (r, c) = g.grid_dims().unwrap();
            assert_eq!(g.diameter(), (r - 1) + (c - 1), "mesh {p}");
        }
    }

    #[test]
    fn mean_hops_from_population_counts() {
        // 64 tiles: 16 share the switch, 48 sit two hops away.
        let g = clos(64);
        assert_eq!(g.mean_hops_from(TileId(0)).unwrap(), 1.5);

        // 4096 tiles: 16 at zero, 240 in-pod at two, 3840 cross-pod at four.
        let g = clos(4096);
        let population: [(u32, u32); 3] = [(16, 0), (240, 2), (3840, 4)];
        let expected = population
            .iter()
            .map(|&(tiles, hops)| (tiles * hops) as f64)
            .sum::<f64>()
            / 4096.0;
        assert_eq!(g.mean_hops_from(TileId(0)).unwrap(), expected);
        assert_eq!(
            g.tile_hop_histogram(TileId(0)).unwrap(),
            vec![16, 0, 240, 0, 3840]
        );
    }

    #[test]
    fn clos_mean_hops_identical_across_tiles() {
        // Every tile sits on an edge switch, and edge switches are
        // interchangeable under the construction.
        let g = clos(1024);
        let reference = g.mean_hops_from(TileId(0)).unwrap();
        for tile in (0..1024).step_by(103) {
            assert_eq!(g.mean_hops_from(TileId(tile)).unwrap(), reference);
        }
    }

    #[test]
    fn hop_count_is_symmetric_exhaustively() {
        for g in [clos(256), mesh(256)] {
            let n = g.switch_count();
            let table: Vec<Vec<u32>> = (0..n).map(|s| g.switch_distances(SwitchId(s))).collect();
            for (a, row) in table.iter().enumerate() {
                for (b, &distance) in row.iter().enumerate() {
                    assert_eq!(distance, table[b][a]);
                }
            }
        }
    }

    #[test]
    fn validator_passes_every_supported_size() {
        for p in [
            16u32, 32, 64, 96, 128, 256, 512, 1024, 1536, 2048, 4096, 8192,
        ] {
            clos(p)
                .validate()
                .unwrap_or_else(|e| panic!("clos {p}: {e}"));
        }
        for p in [16u32, 64, 112, 256, 512, 1024, 2048, 4096, 8192] {
            mesh(p)
                .validate()
                .unwrap_or_else(|e| panic!("mesh {p}: {e}"));
        }
    }

    #[test]
    fn port_budget_is_tight_for_balanced_clos() {
        // Balanced two- and three-stage networks use every port on every
        // switch except the lone-switch case.
        for p in [64u32, 256, 512, 1024, 4096] {
            let g = clos(p);
            let mut load = vec![0u32; g.switch_count() as usize];
            for l in g.links() {
                load[l.a.0 as usize] += l.multiplicity;
                load[l.b.0 as usize] += l.multiplicity;
            }
            for s in g.switches() {
                let used = load[s.id.0 as usize] + g.tiles_on(s.id);
                assert_eq!(used, 32, "tiles {p} switch {}", s.id.0);
            }
        }
    }

    #[test]
    fn rejects_invalid_requests() {
        let err = |kind, tiles| TopologySpec::new(kind, tiles).build().unwrap_err();
        assert_eq!(err(NetworkKind::Clos, 0), TopologyError::ZeroTiles);
        assert!(matches!(
            err(NetworkKind::Clos, 40),
            TopologyError::NonDivisible { .. }
        ));
        assert!(matches!(
            err(NetworkKind::Clos, 16384),
            TopologyError::CapacityExceeded { .. }
        ));
        // 80 tiles = 5 edge switches; 5*16 uplinks does not fill whole cores.
        assert!(matches!(
            err(NetworkKind::Clos, 80),
            TopologyError::UnsupportedSize { .. }
        ));
        // 768 tiles = 48 edges: three-stage but not a whole number of core blocks.
        assert!(matches!(
            err(NetworkKind::Clos, 768),
            TopologyError::UnsupportedSize { .. }
        ));
        let bad_radix = TopologySpec {
            radix: 7,
            ..TopologySpec::new(NetworkKind::Clos, 64)
        };
        assert!(matches!(
            bad_radix.build(),
            Err(TopologyError::BadRadix { .. })
        ));
    }

    #[test]
    fn unknown_tile_is_reported() {
        let g = clos(64);
        assert_eq!(
            g.hop_count(TileId(0), TileId(64)).unwrap_err(),
            TopologyError::UnknownTile(64)
        );
    }

    #[test]
    fn capacity_bound_is_reachable() {
        // 32 pods of 256 tiles: the largest radix-32 machine.
        let g = clos(8192);
        assert_eq!(g.levels(), 3);
        assert_eq!(g.switch_count(), 512 + 512 + 256);
        g.validate().unwrap();
    }
}
