use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

pub const MAX_PLAYERS: usize = 16;
const CORE_TOL: f64 = 1e-9;

/// Cooperative game with an explicit value for every coalition. Coalition
/// `S` is the bitmask with bit `i` set for player `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicGame {
    n_players: usize,
    values: Vec<f64>,
}

impl CharacteristicGame {
    pub fn new(n_players: usize, values: Vec<f64>) -> Result<Self> {
        if n_players == 0 || n_players > MAX_PLAYERS {
            return domain(format!("player count must be in 1..={MAX_PLAYERS}, got {n_players}"));
        }
        if values.len() != 1 << n_players {
            return domain(format!("need {} coalition values, got {}", 1 << n_players, values.len()));
        }
        if values[0] != 0.0 {
            return domain("the empty coalition must be worth 0");
        }
        Ok(Self { n_players, values })
    }

    pub fn from_fn(n_players: usize, v: impl Fn(u32) -> f64) -> Result<Self> {
        if n_players == 0 || n_players > MAX_PLAYERS {
            return domain(format!("player count must be in 1..={MAX_PLAYERS}, got {n_players}"));
        }
        Self::new(n_players, (0..1u32 << n_players).map(v).collect())
    }

    /// Only the grand coalition earns anything: `v(N) = total`.
    pub fn grand_coalition_only(n_players: usize, total: f64) -> Result<Self> {
        let full = (1u32 << n_players.min(31)) - 1;
        Self::from_fn(n_players, |s| if s == full { total } else { 0.0 })
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn value(&self, coalition: u32) -> f64 {
        self.values[coalition as usize]
    }
}

/// Payoff allocation to each player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Imputation {
    pub allocations: Vec<f64>,
}

impl Imputation {
    pub fn new(allocations: Vec<f64>) -> Self {
        Self { allocations }
    }
}

/// True iff every coalition gets at least its value and the grand
/// coalition's value is handed out exactly.
pub fn core_check(g: &CharacteristicGame, imp: &Imputation) -> Result<bool> {
    let n = g.n_players();
    if imp.allocations.len() != n {
        return domain(format!("{} allocations for {n} players", imp.allocations.len()));
    }
    let full = (1u32 << n) - 1;
    let share = |s: u32| (0..n).filter(|i| s >> i & 1 == 1).map(|i| imp.allocations[i]).sum::<f64>();
    if (share(full) - g.value(full)).abs() > CORE_TOL {
        return Ok(false);
    }
    Ok((1..full).all(|s| share(s) >= g.value(s) - CORE_TOL))
}

/// Counts core members among the points of the simplex grid with the given
/// resolution, scaled to `v(N)`. Zero hits only suggests an empty core.
pub fn core_grid_probe(g: &CharacteristicGame, steps: usize) -> Result<(usize, usize)> {
    let n = g.n_players();
    if steps == 0 {
        return domain("grid needs at least one step");
    }
    let total = g.value((1u32 << n) - 1);
    let mut hits = 0;
    let mut tried = 0;
    let mut parts = vec![0usize; n];
    fn walk(
        k: usize,
        left: usize,
        parts: &mut [usize],
        visit: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if k + 1 == parts.len() {
            parts[k] = left;
            return visit(parts);
        }
        for x in 0..=left {
            parts[k] = x;
            walk(k + 1, left - x, parts, visit)?;
        }
        Ok(())
    }
    walk(0, steps, &mut parts, &mut |p| {
        tried += 1;
        let alloc = p.iter().map(|&x| total * x as f64 / steps as f64).collect();
        if core_check(g, &Imputation::new(alloc))? {
            hits += 1;
        }
        Ok(())
    })?;
    Ok((hits, tried))
}
