//! Brute-force chip-firing on a truncation of the tree.
//!
//! Firing rule: a vertex with at least `k + 1` chips sends one chip to its
//! parent and one to each of its `k` children. The root has no parent; its
//! loop edge returns the chip to itself, so a root fire costs it `k` chips.
//!
//! The tree is truncated one layer below the stable height. That layer must
//! end the game with no chips and no fires; anything else is reported as
//! [`Error::TruncationExceeded`].

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formulas::total_fires;
use crate::numerics::{height_index, Nat, TreeParams};
use crate::sequences::{ser_nat, ser_nats};

/// Largest pile the node-level simulator accepts.
pub const NODE_LEVEL_LIMIT: u64 = 1 << 40;

/// A vertex: `layer` is 1-based (the root is layer 1), `offset` counts
/// vertices on that layer from the left. Children of `(l, o)` are
/// `(l + 1, k*o .. k*o + k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId {
    pub layer: u32,
    pub offset: u64,
}

impl NodeId {
    pub const ROOT: NodeId = NodeId {
        layer: 1,
        offset: 0,
    };

    pub fn parent(self, k: u32) -> Option<NodeId> {
        (self.layer > 1).then(|| NodeId {
            layer: self.layer - 1,
            offset: self.offset / u64::from(k),
        })
    }

    pub fn children(self, k: u32) -> impl Iterator<Item = NodeId> {
        let first = self.offset * u64::from(k);
        let layer = self.layer + 1;
        (0..u64::from(k)).map(move |j| NodeId {
            layer,
            offset: first + j,
        })
    }
}

/// Order in which eligible vertices are fired by [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Shallowest eligible vertex first, leftmost on ties.
    RootFirstBfs,
    /// Eligible vertex holding the most chips, shallowest-leftmost on ties.
    MaxChipsFirst,
    /// Uniformly random eligible vertex from a seeded generator.
    RandomEligible,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::RootFirstBfs,
        Strategy::MaxChipsFirst,
        Strategy::RandomEligible,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::RootFirstBfs => "bfs",
            Strategy::MaxChipsFirst => "max",
            Strategy::RandomEligible => "random",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bfs" | "root-first-bfs" => Ok(Strategy::RootFirstBfs),
            "max" | "max-chips-first" => Ok(Strategy::MaxChipsFirst),
            "random" | "random-eligible" => Ok(Strategy::RandomEligible),
            other => Err(Error::UnknownStrategy(other.to_string())),
        }
    }
}

/// Measured outcome of a simulation, reported per layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimResult {
    /// Chips on each vertex of layer `i + 1` once stable.
    #[serde(serialize_with = "ser_nats")]
    pub stable_chips: Vec<Nat>,
    /// Fires of each vertex of layer `i + 1`.
    #[serde(serialize_with = "ser_nats")]
    pub fires_by_layer: Vec<Nat>,
    #[serde(serialize_with = "ser_nat")]
    pub root_fires: Nat,
    #[serde(serialize_with = "ser_nat")]
    pub total_fires: Nat,
    /// Diagnostic: single fires for [`simulate`], layer-wide fires for
    /// [`simulate_layers`].
    #[serde(serialize_with = "ser_nat")]
    pub steps: Nat,
}

impl SimResult {
    fn empty() -> Self {
        SimResult {
            stable_chips: Vec::new(),
            fires_by_layer: Vec::new(),
            root_fires: Nat::zero(),
            total_fires: Nat::zero(),
            steps: Nat::zero(),
        }
    }

    /// `sum_i k^i fires_by_layer[i]`.
    pub fn weighted_fires(&self, tree: TreeParams) -> Nat {
        let k = tree.k_nat();
        self.fires_by_layer
            .iter()
            .rev()
            .fold(Nat::zero(), |acc, f| acc * &k + f)
    }

    /// Same outcome, ignoring the diagnostic step counter.
    pub fn same_outcome(&self, other: &SimResult) -> bool {
        self.stable_chips == other.stable_chips
            && self.fires_by_layer == other.fires_by_layer
            && self.root_fires == other.root_fires
            && self.total_fires == other.total_fires
    }
}

fn step_budget(chips: &Nat, tree: TreeParams) -> Nat {
    total_fires(chips, tree) * 10u32 + 1_000_000u32
}

/// Sparse node-level state.
#[derive(Debug, Clone)]
pub struct ChipState {
    pub k: u32,
    /// Deepest allocated layer; chips may never move below it.
    pub depth: u32,
    pub chips: BTreeMap<NodeId, u64>,
    pub fires: BTreeMap<NodeId, u64>,
    eligible: BTreeSet<NodeId>,
}

impl ChipState {
    pub fn new(chips: u64, k: u32, depth: u32) -> Self {
        let mut state = ChipState {
            k,
            depth,
            chips: BTreeMap::new(),
            fires: BTreeMap::new(),
            eligible: BTreeSet::new(),
        };
        if chips > 0 {
            state.chips.insert(NodeId::ROOT, chips);
            state.refresh(NodeId::ROOT);
        }
        state
    }

    pub fn chips_at(&self, node: NodeId) -> u64 {
        self.chips.get(&node).copied().unwrap_or(0)
    }

    pub fn total_chips(&self) -> u64 {
        self.chips.values().sum()
    }

    pub fn is_stable(&self) -> bool {
        self.eligible.is_empty()
    }

    fn refresh(&mut self, node: NodeId) {
        if self.chips_at(node) > u64::from(self.k) {
            self.eligible.insert(node);
        } else {
            self.eligible.remove(&node);
        }
    }

    fn add(&mut self, node: NodeId, amount: u64) {
        *self.chips.entry(node).or_insert(0) += amount;
        self.refresh(node);
    }

    /// Fires one vertex holding more than `k` chips.
    pub fn fire(&mut self, node: NodeId) -> Result<()> {
        let k = self.k;
        if self.chips_at(node) <= u64::from(k) {
            return Err(Error::InvalidArgument(format!(
                "vertex {node:?} holds {} chips and cannot fire",
                self.chips_at(node)
            )));
        }
        if node.layer >= self.depth {
            return Err(Error::TruncationExceeded {
                layer: node.layer + 1,
            });
        }
        let held = self.chips.get_mut(&node).expect("checked above");
        *held -= u64::from(k) + 1;
        *self.fires.entry(node).or_insert(0) += 1;
        match node.parent(k) {
            Some(parent) => self.add(parent, 1),
            None => *self.chips.get_mut(&node).expect("root") += 1,
        }
        for child in node.children(k) {
            self.add(child, 1);
        }
        self.refresh(node);
        Ok(())
    }

    fn pick(&self, strategy: Strategy, rng: &mut ChaCha8Rng) -> Option<NodeId> {
        match strategy {
            Strategy::RootFirstBfs => self.eligible.first().copied(),
            Strategy::MaxChipsFirst => self.eligible.iter().copied().max_by(|a, b| {
                self.chips_at(*a)
                    .cmp(&self.chips_at(*b))
                    .then_with(|| b.cmp(a))
            }),
            Strategy::RandomEligible => {
                if self.eligible.is_empty() {
                    None
                } else {
                    let idx = rng.gen_range(0..self.eligible.len());
                    self.eligible.iter().nth(idx).copied()
                }
            }
        }
    }

    /// Collapses node counts to one value per layer `1..=layers`, failing if
    /// two vertices on a layer disagree.
    fn per_layer(&self, map: &BTreeMap<NodeId, u64>, layers: u32) -> Result<Vec<u64>> {
        let k = u64::from(self.k);
        let mut out = Vec::with_capacity(layers as usize);
        let mut width = 1u64;
        for layer in 1..=layers {
            let lo = NodeId { layer, offset: 0 };
            let hi = NodeId {
                layer: layer + 1,
                offset: 0,
            };
            let values: Vec<u64> = map.range(lo..hi).map(|(_, &v)| v).collect();
            let first = values.first().copied().unwrap_or(0);
            let full = values.len() as u64 == width;
            let uniform = values.iter().all(|&v| v == first) && (full || first == 0);
            if !uniform {
                return Err(Error::Asymmetric { layer });
            }
            out.push(first);
            width = width.saturating_mul(k);
        }
        Ok(out)
    }
}

/// Node-level simulation, one vertex fire at a time, under `strategy`.
/// `seed` only matters for [`Strategy::RandomEligible`].
pub fn simulate(chips: &Nat, tree: TreeParams, strategy: Strategy, seed: u64) -> Result<SimResult> {
    if chips.is_zero() {
        return Ok(SimResult::empty());
    }
    let pile = chips
        .to_u64()
        .filter(|&n| n <= NODE_LEVEL_LIMIT)
        .ok_or_else(|| Error::TooLarge {
            n: chips.to_string(),
            limit: NODE_LEVEL_LIMIT,
        })?;
    let height = height_index(chips, tree)? as u32;
    let depth = height + 1;
    let budget = step_budget(chips, tree).to_u64().unwrap_or(u64::MAX);

    let mut state = ChipState::new(pile, tree.k(), depth);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps = 0u64;
    while let Some(node) = state.pick(strategy, &mut rng) {
        if steps >= budget {
            return Err(Error::StepBudget {
                budget: budget.to_string(),
            });
        }
        state.fire(node)?;
        steps += 1;
    }
    assert_eq!(state.total_chips(), pile, "chips are conserved");

    let chips_by_layer = state.per_layer(&state.chips, depth)?;
    let fires_by_layer = state.per_layer(&state.fires, depth)?;
    if chips_by_layer[height as usize] != 0 || fires_by_layer[height as usize] != 0 {
        return Err(Error::TruncationExceeded { layer: depth });
    }
    let fires: Vec<Nat> = fires_by_layer[..height as usize]
        .iter()
        .map(|&f| Nat::from(f))
        .collect();
    let result = SimResult {
        stable_chips: chips_by_layer[..height as usize]
            .iter()
            .map(|&c| Nat::from(c))
            .collect(),
        root_fires: fires[0].clone(),
        fires_by_layer: fires,
        total_fires: Nat::from(state.fires.values().sum::<u64>()),
        steps: Nat::from(steps),
    };
    debug_assert_eq!(result.weighted_fires(tree), result.total_fires);
    Ok(result)
}

/// Layer-symmetric simulation: every vertex on a layer carries the same
/// count, so one representative per layer suffices. Each step fires a whole
/// layer as many times in a row as its current chips allow.
pub fn simulate_layers(chips: &Nat, tree: TreeParams) -> Result<SimResult> {
    if chips.is_zero() {
        return Ok(SimResult::empty());
    }
    let height = height_index(chips, tree)?;
    let depth = height + 1;
    let k = tree.k_nat();
    let k1 = &k + 1u32;
    let budget = step_budget(chips, tree);

    let mut held = vec![Nat::zero(); depth];
    let mut fires = vec![Nat::zero(); depth];
    held[0] = chips.clone();
    let mut steps = Nat::zero();

    loop {
        let mut fired = false;
        for layer in 0..depth {
            // Batch size: how many consecutive fires the layer can make
            // without receiving anything.
            let batch = if layer == 0 {
                if held[0] <= k {
                    continue;
                }
                (&held[0] - 1u32).div_floor(&k)
            } else {
                let b = held[layer].div_floor(&k1);
                if b.is_zero() {
                    continue;
                }
                b
            };
            if layer + 1 == depth {
                return Err(Error::TruncationExceeded {
                    layer: depth as u32 + 1,
                });
            }
            if layer == 0 {
                held[0] -= &k * &batch;
            } else {
                held[layer] -= &k1 * &batch;
                held[layer - 1] += &k * &batch;
            }
            held[layer + 1] += &batch;
            fires[layer] += &batch;
            steps += &batch;
            fired = true;
            if steps > budget {
                return Err(Error::StepBudget {
                    budget: budget.to_string(),
                });
            }
        }
        if !fired {
            break;
        }
    }

    if !held[height].is_zero() || !fires[height].is_zero() {
        return Err(Error::TruncationExceeded {
            layer: depth as u32,
        });
    }
    held.truncate(height);
    fires.truncate(height);
    let mut result = SimResult {
        stable_chips: held,
        root_fires: fires[0].clone(),
        fires_by_layer: fires,
        total_fires: Nat::zero(),
        steps,
    };
    result.total_fires = result.weighted_fires(tree);
    Ok(result)
}
