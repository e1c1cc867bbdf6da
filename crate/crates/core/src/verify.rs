//! Formula-versus-simulation checks for a single `(N, k)` cell.
//!
//! Every route is compared explicitly so a disagreement comes back as a
//! [`Mismatch`] with context instead of tripping an internal assertion.

use std::fmt;

use crate::engine::{simulate, simulate_layers, SimResult, Strategy};
use crate::formulas::{
    a_seq_closed, block_root_fires, block_total_fires, fires_difference, root_fires,
    root_fires_diff_formula, root_fires_diff_rec, root_fires_rec, total_fires,
    total_fires_diff_explicit, total_fires_diff_rec, total_fires_diff_via_a, total_fires_rec,
    vertex_fires, vertex_fires_via_root,
};
use crate::numerics::{stable_config, Nat, TreeParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub chips: u64,
    pub k: u32,
    pub layer: Option<usize>,
    pub check: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} k={}", self.chips, self.k)?;
        if let Some(layer) = self.layer {
            write!(f, " layer={layer}")?;
        }
        write!(
            f,
            ": {} expected {} got {}",
            self.check, self.expected, self.actual
        )
    }
}

impl std::error::Error for Mismatch {}

/// Node-level runs to perform per cell, on top of the layer simulation.
#[derive(Debug, Clone, Default)]
pub struct VerifyPlan {
    pub strategies: Vec<Strategy>,
    pub seeds: Vec<u64>,
}

impl VerifyPlan {
    /// Deterministic strategies run once; the random one once per seed.
    fn runs(&self) -> impl Iterator<Item = (Strategy, u64)> + '_ {
        self.strategies.iter().flat_map(move |&s| {
            let seeds: Vec<u64> = if s == Strategy::RandomEligible {
                self.seeds.clone()
            } else {
                self.seeds.first().copied().into_iter().collect()
            };
            seeds.into_iter().map(move |seed| (s, seed))
        })
    }
}

struct Cell {
    chips: u64,
    k: u32,
}

impl Cell {
    fn expect<T: PartialEq + fmt::Display>(
        &self,
        check: &str,
        layer: Option<usize>,
        expected: &T,
        actual: &T,
    ) -> Result<(), Mismatch> {
        if expected == actual {
            Ok(())
        } else {
            Err(Mismatch {
                chips: self.chips,
                k: self.k,
                layer,
                check: check.to_string(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            })
        }
    }

    fn failed(&self, check: &str, err: impl fmt::Display) -> Mismatch {
        Mismatch {
            chips: self.chips,
            k: self.k,
            layer: None,
            check: check.to_string(),
            expected: "success".into(),
            actual: err.to_string(),
        }
    }
}

/// Checks the closed forms against the layer simulation for one cell.
pub fn check_formulas(chips: u64, tree: TreeParams, sim: &SimResult) -> Result<(), Mismatch> {
    let cell = Cell { chips, k: tree.k() };
    let n = Nat::from(chips);
    let config = stable_config(&n, tree).map_err(|e| cell.failed("stable_config", e))?;
    cell.expect("height", None, &config.height, &sim.stable_chips.len())?;
    for (i, (&c, measured)) in config.chips.iter().zip(&sim.stable_chips).enumerate() {
        cell.expect("stable chips", Some(i), &Nat::from(c), measured)?;
    }
    for (i, measured) in sim.fires_by_layer.iter().enumerate() {
        let closed = vertex_fires(&n, tree, i).map_err(|e| cell.failed("vertex_fires", e))?;
        cell.expect("vertex_fires", Some(i), &closed, measured)?;
        let via = vertex_fires_via_root(&n, tree, i).map_err(|e| cell.failed("via_root", e))?;
        cell.expect("vertex_fires_via_root", Some(i), &closed, &via)?;
        if i + 1 < sim.fires_by_layer.len() {
            let diff = fires_difference(&n, tree, i).map_err(|e| cell.failed("difference", e))?;
            let measured_diff = measured - &sim.fires_by_layer[i + 1];
            cell.expect("fires_difference", Some(i), &diff, &measured_diff)?;
        }
    }
    let root = root_fires(&n, tree);
    cell.expect("root_fires", None, &root, &sim.root_fires)?;
    cell.expect("root_fires_rec", None, &root, &root_fires_rec(&n, tree))?;
    let total = total_fires(&n, tree);
    cell.expect("total_fires", None, &total, &sim.total_fires)?;
    cell.expect("total_fires_rec", None, &total, &total_fires_rec(&n, tree))?;
    Ok(())
}

/// Checks every difference route at `m = chips` against the block sequences.
pub fn check_differences(m: u64, tree: TreeParams) -> Result<(), Mismatch> {
    let cell = Cell {
        chips: m,
        k: tree.k(),
    };
    let m_nat = Nat::from(m);
    let next = &m_nat + 1u32;
    let g0_step = block_root_fires(&next, tree) - block_root_fires(&m_nat, tree);
    let d0 = root_fires_diff_formula(&m_nat, tree);
    cell.expect("root_fires_diff", None, &g0_step, &Nat::from(d0))?;
    cell.expect(
        "root_fires_diff_rec",
        None,
        &d0,
        &root_fires_diff_rec(&m_nat, tree),
    )?;
    let big_g_step = block_total_fires(&next, tree) - block_total_fires(&m_nat, tree);
    cell.expect(
        "total_fires_diff_rec",
        None,
        &big_g_step,
        &total_fires_diff_rec(&m_nat, tree),
    )?;
    cell.expect(
        "total_fires_diff_via_a",
        None,
        &big_g_step,
        &total_fires_diff_via_a(&m_nat, tree),
    )?;
    cell.expect(
        "total_fires_diff_explicit",
        None,
        &big_g_step,
        &total_fires_diff_explicit(&m_nat, tree),
    )?;
    cell.expect("a(d0)", None, &big_g_step, &a_seq_closed(d0 as usize, tree))?;
    Ok(())
}

/// Full check of one cell: layer simulation versus formulas, node-level
/// runs versus the layer simulation, and the difference identities.
pub fn verify_cell(chips: u64, tree: TreeParams, plan: &VerifyPlan) -> Result<(), Mismatch> {
    let cell = Cell { chips, k: tree.k() };
    let n = Nat::from(chips);
    let layers = simulate_layers(&n, tree).map_err(|e| cell.failed("simulate_layers", e))?;
    check_formulas(chips, tree, &layers)?;
    for (strategy, seed) in plan.runs() {
        let nodes = simulate(&n, tree, strategy, seed)
            .map_err(|e| cell.failed(&format!("simulate[{}]", strategy.name()), e))?;
        if !nodes.same_outcome(&layers) {
            return Err(Mismatch {
                chips,
                k: tree.k(),
                layer: None,
                check: format!(
                    "simulate[{} seed={seed}] vs simulate_layers",
                    strategy.name()
                ),
                expected: format!("{:?}", layers.fires_by_layer),
                actual: format!("{:?}", nodes.fires_by_layer),
            });
        }
    }
    check_differences(chips, tree)
}
