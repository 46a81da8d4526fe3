//! Box-ball states and the ball-by-ball evolution rule.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finitely supported 0/1 sequence on the integers.
///
/// Stored as a trimmed window plus the absolute position of its first cell.
/// Every cell outside the window is empty. A non-empty window always starts
/// and ends with a ball, so two states are equal exactly when they have the
/// same balls at the same absolute positions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BoxBallState {
    offset: i64,
    cells: Vec<u8>,
}

impl BoxBallState {
    /// The vacuum.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a state from raw cells starting at `offset`, trimming empty
    /// cells at both ends. Any non-zero cell counts as a ball.
    pub fn from_cells(offset: i64, cells: &[u8]) -> Self {
        let first = cells.iter().position(|&c| c != 0);
        let last = cells.iter().rposition(|&c| c != 0);
        match (first, last) {
            (Some(a), Some(b)) => Self {
                offset: offset + a as i64,
                cells: cells[a..=b].iter().map(|&c| u8::from(c != 0)).collect(),
            },
            _ => Self::empty(),
        }
    }

    /// Builds a state from absolute ball positions (duplicates are merged).
    pub fn from_positions(positions: &[i64]) -> Self {
        let (Some(&lo), Some(&hi)) = (positions.iter().min(), positions.iter().max()) else {
            return Self::empty();
        };
        let mut cells = vec![0u8; (hi - lo + 1) as usize];
        for &p in positions {
            cells[(p - lo) as usize] = 1;
        }
        Self { offset: lo, cells }
    }

    /// Parses a string of `0`/`1` whose first character sits at `offset`.
    pub fn parse(text: &str, offset: i64) -> Result<Self> {
        let mut cells = Vec::with_capacity(text.len());
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '0' => cells.push(0),
                '1' => cells.push(1),
                other => {
                    return Err(Error::Parse {
                        text: text.to_string(),
                        reason: format!("unexpected character {other:?} at index {i}"),
                    })
                }
            }
        }
        Ok(Self::from_cells(offset, &cells))
    }

    /// Absolute position of the leftmost ball (0 for the vacuum).
    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// The trimmed window, one byte (0 or 1) per cell.
    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of balls `N`.
    pub fn ball_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c == 1).count()
    }

    /// One past the absolute position of the rightmost ball.
    pub fn end(&self) -> i64 {
        self.offset + self.cells.len() as i64
    }

    /// Cell value at an absolute position.
    pub fn cell(&self, pos: i64) -> u8 {
        if pos < self.offset || pos >= self.end() {
            0
        } else {
            self.cells[(pos - self.offset) as usize]
        }
    }

    /// Absolute positions of the balls, left to right.
    pub fn ball_positions(&self) -> Vec<i64> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(i, _)| self.offset + i as i64)
            .collect()
    }

    /// The cells `lo..hi` as a `0`/`1` string.
    pub fn render_range(&self, lo: i64, hi: i64) -> String {
        (lo..hi).map(|p| if self.cell(p) == 1 { '1' } else { '0' }).collect()
    }

    /// The window as a `0`/`1` string, without the offset.
    pub fn window_text(&self) -> String {
        self.render_range(self.offset, self.end())
    }
}

impl fmt::Display for BoxBallState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("0")
        } else {
            write!(f, "{}@{}", self.window_text(), self.offset)
        }
    }
}

impl FromStr for BoxBallState {
    type Err = Error;

    /// Accepts `bits` or `bits@offset`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once('@') {
            None => Self::parse(s, 0),
            Some((bits, off)) => {
                let offset = off.trim().parse::<i64>().map_err(|e| Error::Parse {
                    text: s.to_string(),
                    reason: format!("bad offset: {e}"),
                })?;
                Self::parse(bits, offset)
            }
        }
    }
}

impl From<BoxBallState> for String {
    fn from(s: BoxBallState) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for BoxBallState {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// One step of the box-ball dynamics: for `k = 1..N`, ball `k` (counted left
/// to right in the current state) jumps to the nearest empty box on its right.
pub fn evolve_tts(p: &BoxBallState) -> BoxBallState {
    let n = p.ball_count();
    if n == 0 {
        return BoxBallState::empty();
    }
    // Every ball moves at most N cells past the window.
    let mut buf = p.cells.clone();
    buf.resize(p.cells.len() + n + 1, 0);
    let starts: Vec<usize> = (0..p.cells.len()).filter(|&i| p.cells[i] == 1).collect();
    for i in starts {
        let target = (i + 1..buf.len())
            .find(|&j| buf[j] == 0)
            .expect("padding always leaves an empty box");
        buf[i] = 0;
        buf[target] = 1;
    }
    BoxBallState::from_cells(p.offset, &buf)
}

/// A maximal run of balls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Soliton {
    pub start: i64,
    pub len: usize,
}

/// The soliton content of a state: runs, their length counts `N_k`, and
/// the gaps between consecutive runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolitonProfile {
    pub runs: Vec<Soliton>,
    pub counts: BTreeMap<usize, usize>,
    pub gaps: Vec<usize>,
}

impl SolitonProfile {
    pub fn lengths(&self) -> Vec<usize> {
        self.runs.iter().map(|r| r.len).collect()
    }

    /// `N_k`, zero when absent.
    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// `Σ_k min(l, k) N_k`: the energy of a state made of free solitons.
    pub fn free_energy(&self, l: usize) -> usize {
        self.counts.iter().map(|(&k, &n)| l.min(k) * n).sum()
    }
}

pub fn solitons(p: &BoxBallState) -> SolitonProfile {
    let mut profile = SolitonProfile::default();
    let mut i = 0;
    let cells = p.cells();
    while i < cells.len() {
        if cells[i] == 0 {
            i += 1;
            continue;
        }
        let start = i;
        while i < cells.len() && cells[i] == 1 {
            i += 1;
        }
        if let Some(prev) = profile.runs.last() {
            let prev_end = (prev.start - p.offset()) as usize + prev.len;
            profile.gaps.push(start - prev_end);
        }
        profile.runs.push(Soliton { start: p.offset() + start as i64, len: i - start });
        *profile.counts.entry(i - start).or_insert(0) += 1;
    }
    profile
}

/// Whether the state is made of separated, non-interacting solitons sorted
/// by length (shortest on the left, i.e. an outgoing configuration).
///
/// The gap after a soliton of length `k` must be at least
/// `min(threshold, k)`. A run of `k` balls followed by `k` empty boxes
/// travels freely, so solitons of equal length only need their own length as
/// separation; larger gaps come for free because faster solitons run away.
pub fn is_asymptotic(p: &BoxBallState, threshold: usize) -> bool {
    let profile = solitons(p);
    let sorted = profile.runs.windows(2).all(|w| w[0].len <= w[1].len);
    let separated = profile
        .gaps
        .iter()
        .zip(&profile.runs)
        .all(|(&gap, run)| gap >= threshold.min(run.len));
    sorted && separated
}
