//! The carrier formulation: a capacity-`l` carrier `0^{m₁}1^{m₂}` is swept
//! across the state from left to right, picking up balls and dropping them
//! in empty boxes. At capacity `l ≥ N` the output is exactly one step of the
//! box-ball dynamics. Each drop is an energy site; their number is `E_l`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::matching::{ParenSeq, Token};
use crate::state::BoxBallState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Capacity {
    Finite(usize),
    Unbounded,
}

impl Capacity {
    fn admits(self, ones: usize) -> bool {
        match self {
            Capacity::Finite(l) => ones < l,
            Capacity::Unbounded => true,
        }
    }
}

/// An element `0^{m₁}1^{m₂}` of the capacity-`l` carrier, stored as `m₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Carrier {
    pub capacity: Capacity,
    pub ones: usize,
}

impl Carrier {
    /// The empty carrier `0^l`.
    pub fn empty(capacity: Capacity) -> Self {
        Self { capacity, ones: 0 }
    }

    /// `m₁`, or `None` for an unbounded carrier.
    pub fn zeros(&self) -> Option<usize> {
        match self.capacity {
            Capacity::Finite(l) => Some(l.saturating_sub(self.ones)),
            Capacity::Unbounded => None,
        }
    }

    /// Every element of the capacity-`l` carrier.
    pub fn all(l: usize) -> impl Iterator<Item = Carrier> {
        (0..=l).map(move |ones| Carrier { capacity: Capacity::Finite(l), ones })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub out: u8,
    pub carrier: Carrier,
    /// Set when the carrier drops a ball into an empty box.
    pub bumped: bool,
}

/// The combinatorial R step `carrier ⊗ cell ↦ cell ⊗ carrier`.
///
/// | cell | carrier        | out | carrier after   |
/// |------|----------------|-----|-----------------|
/// | 1    | `m₁ ≥ 1`       | 0   | `m₂ + 1`        |
/// | 1    | full (`m₁ = 0`)| 1   | unchanged       |
/// | 0    | `m₂ ≥ 1`       | 1   | `m₂ - 1`, bump  |
/// | 0    | `m₂ = 0`       | 0   | unchanged       |
pub fn r_step(c: Carrier, b: u8) -> StepOutcome {
    let (out, ones, bumped) = match (b, c.ones) {
        (1, m2) if c.capacity.admits(m2) => (0, m2 + 1, false),
        (1, m2) => (1, m2, false),
        (_, 0) => (0, 0, false),
        (_, m2) => (1, m2 - 1, true),
    };
    StepOutcome { out, carrier: Carrier { ones, ..c }, bumped }
}

/// A carrier update rule, [`r_step`] unless a test swaps it out.
pub type StepRule = fn(Carrier, u8) -> StepOutcome;

/// Result of one carrier sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub state: BoxBallState,
    pub energy: usize,
    /// Absolute positions of the energy sites, increasing.
    pub sites: Vec<i64>,
}

/// Sweeps an empty carrier across `p` and on through trailing empty boxes
/// until the carrier is empty again.
pub fn transfer(p: &BoxBallState, capacity: Capacity) -> Transfer {
    transfer_with(p, capacity, r_step)
}

pub fn transfer_with(p: &BoxBallState, capacity: Capacity, rule: StepRule) -> Transfer {
    let n = p.ball_count();
    let mut carrier = Carrier::empty(capacity);
    let mut out = Vec::with_capacity(p.cells().len() + n);
    let mut sites = Vec::new();
    let mut i = 0usize;
    // A correct rule empties the carrier within N trailing zeros.
    let limit = p.cells().len() + n;
    while i < p.cells().len() || (carrier.ones > 0 && i < limit) {
        let b = p.cells().get(i).copied().unwrap_or(0);
        let step = rule(carrier, b);
        if step.bumped {
            sites.push(p.offset() + i as i64);
        }
        out.push(step.out);
        carrier = step.carrier;
        i += 1;
    }
    Transfer { state: BoxBallState::from_cells(p.offset(), &out), energy: sites.len(), sites }
}

/// `E_l` for `l = 1..=l_max`, their sites, and the stable value `E_∞`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergyReport {
    #[serde(rename = "E")]
    pub values: BTreeMap<usize, usize>,
    pub sites: BTreeMap<usize, Vec<i64>>,
    /// Energy at capacity `N`.
    #[serde(rename = "E_inf")]
    pub infinity: usize,
}

impl EnergyReport {
    /// `E_l`; `E_0 = 0`, and `E_∞` beyond the computed range.
    pub fn e(&self, l: usize) -> usize {
        match l {
            0 => 0,
            _ => self.values.get(&l).copied().unwrap_or(self.infinity),
        }
    }

    /// `E_l - E_{l-1}` for `l = 1..=l_max`.
    pub fn increments(&self) -> Vec<usize> {
        self.values.keys().map(|&l| self.e(l) - self.e(l - 1)).collect()
    }
}

pub fn energy_profile(p: &BoxBallState, l_max: usize) -> EnergyReport {
    energy_profile_with(p, l_max, r_step)
}

pub fn energy_profile_with(p: &BoxBallState, l_max: usize, rule: StepRule) -> EnergyReport {
    let mut report = EnergyReport::default();
    for l in 1..=l_max {
        let t = transfer_with(p, Capacity::Finite(l), rule);
        report.values.insert(l, t.energy);
        report.sites.insert(l, t.sites);
    }
    let n = p.ball_count();
    report.infinity = if n == 0 { 0 } else { transfer_with(p, Capacity::Finite(n), rule).energy };
    report
}

/// Absolute positions of the `)` of every pair of depth at most `l`.
pub fn energy_sites_predicted(seq: &ParenSeq, l: usize) -> Vec<i64> {
    seq.tokens
        .iter()
        .enumerate()
        .filter_map(|(i, t)| match t {
            Token::Close(id) if seq.pair(*id).depth <= l => Some(seq.abs(i)),
            _ => None,
        })
        .collect()
}
