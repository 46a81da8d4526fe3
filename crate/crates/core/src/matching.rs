//! Parenthesis matching of box-ball states.
//!
//! Every ball `1` is matched with an empty box `0` to its right, giving a
//! sequence of `(`, `)` and unmatched `0`. Each pair carries a stack depth:
//! the round in which it is removed when adjacent `1 0` pairs are deleted
//! repeatedly. [`match_rounds`] runs that round-based deletion literally and
//! [`match_stack`] computes the same thing with a single stack pass.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::state::BoxBallState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Token {
    Zero,
    /// Opening parenthesis of the pair with this 1-based id.
    Open(usize),
    /// Closing parenthesis of the pair with this 1-based id.
    Close(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairRecord {
    /// 1-based, numbered by opening position left to right.
    pub pair_id: usize,
    /// Token index of `(`.
    pub open_pos: usize,
    /// Token index of `)`.
    pub close_pos: usize,
    pub depth: usize,
}

impl PairRecord {
    /// Whether `other` sits strictly inside this pair.
    pub fn contains(&self, other: &PairRecord) -> bool {
        self.open_pos < other.open_pos && other.close_pos < self.close_pos
    }

    pub fn is_disjoint(&self, other: &PairRecord) -> bool {
        self.close_pos < other.open_pos || other.close_pos < self.open_pos
    }
}

/// The parenthesis sequence of a state.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParenSeq {
    pub tokens: Vec<Token>,
    /// Indexed by `pair_id - 1`.
    pub pairs: Vec<PairRecord>,
    /// Absolute position of `tokens[0]`.
    pub base_offset: i64,
}

impl ParenSeq {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn pair(&self, id: usize) -> &PairRecord {
        &self.pairs[id - 1]
    }

    /// Absolute position of the token at `idx`.
    pub fn abs(&self, idx: usize) -> i64 {
        self.base_offset + idx as i64
    }

    pub fn max_depth(&self) -> usize {
        self.pairs.iter().map(|p| p.depth).max().unwrap_or(0)
    }

    /// `hist[k - 1]` = number of pairs of depth `k`.
    pub fn depth_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.max_depth()];
        for p in &self.pairs {
            hist[p.depth - 1] += 1;
        }
        hist
    }

    /// Pair ids in the order their `)` appears.
    pub fn close_order(&self) -> Vec<usize> {
        self.tokens
            .iter()
            .filter_map(|t| match t {
                Token::Close(id) => Some(*id),
                _ => None,
            })
            .collect()
    }

    /// 1-based rank of each pair's `)` among all closings, indexed by `pair_id - 1`.
    pub fn close_ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.pairs.len()];
        for (rank, id) in self.close_order().into_iter().enumerate() {
            ranks[id - 1] = rank + 1;
        }
        ranks
    }

    /// Token line, e.g. `( ) 0 ( ( ) )`.
    pub fn render(&self) -> String {
        self.tokens
            .iter()
            .map(|t| match t {
                Token::Zero => "0",
                Token::Open(_) => "(",
                Token::Close(_) => ")",
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Depth line aligned with [`render`](Self::render); `.` under zeros.
    pub fn render_depths(&self) -> String {
        self.tokens
            .iter()
            .map(|t| match t {
                Token::Zero => ".".to_string(),
                Token::Open(id) | Token::Close(id) => depth_glyph(self.pair(*id).depth),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Checks the structural invariants: every id opens once and closes
    /// once, in order, pairs never cross, depths follow the nesting rule.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.pairs.len();
        let mut opens = 0;
        let mut closes = 0;
        for (i, t) in self.tokens.iter().enumerate() {
            match *t {
                Token::Open(id) => {
                    opens += 1;
                    if id == 0 || id > n || self.pair(id).open_pos != i {
                        return Err(format!("bad open token {id} at {i}"));
                    }
                }
                Token::Close(id) => {
                    closes += 1;
                    if id == 0 || id > n || self.pair(id).close_pos != i {
                        return Err(format!("bad close token {id} at {i}"));
                    }
                }
                Token::Zero => {}
            }
        }
        if opens != n || closes != n {
            return Err(format!("{opens} opens, {closes} closes, {n} pairs"));
        }
        for (k, p) in self.pairs.iter().enumerate() {
            if p.pair_id != k + 1 || p.open_pos >= p.close_pos {
                return Err(format!("malformed pair {p:?}"));
            }
        }
        for a in &self.pairs {
            for b in &self.pairs {
                if a.pair_id < b.pair_id && !(a.contains(b) || b.contains(a) || a.is_disjoint(b)) {
                    return Err(format!("pairs {} and {} cross", a.pair_id, b.pair_id));
                }
            }
        }
        for p in &self.pairs {
            let inner = self.directly_nested(p).map(|q| q.depth).max().unwrap_or(0);
            if p.depth != inner + 1 {
                return Err(format!("pair {} has depth {} but inner max {}", p.pair_id, p.depth, inner));
            }
        }
        Ok(())
    }

    /// Pairs nested in `outer` with no pair in between.
    pub fn directly_nested<'a>(&'a self, outer: &'a PairRecord) -> impl Iterator<Item = &'a PairRecord> + 'a {
        self.pairs.iter().filter(move |q| {
            outer.contains(q) && !self.pairs.iter().any(|m| outer.contains(m) && m.contains(q))
        })
    }
}

fn depth_glyph(depth: usize) -> String {
    if depth < 10 {
        depth.to_string()
    } else {
        char::from(b'a' + ((depth - 10) as u8).min(25)).to_string()
    }
}

impl fmt::Display for ParenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// The stack permutation `w(1) … w(N)`: opening parentheses are numbered
/// left to right, and `w` lists those numbers in the order the closing
/// parentheses appear.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StackPermutation {
    pub word: Vec<usize>,
}

impl StackPermutation {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_permutation(&self) -> bool {
        let mut sorted = self.word.clone();
        sorted.sort_unstable();
        sorted.iter().enumerate().all(|(i, &v)| v == i + 1)
    }
}

impl fmt::Display for StackPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.word.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Cells of `p` followed by `padding` empty boxes.
fn padded_cells(p: &BoxBallState, padding: usize) -> Vec<u8> {
    let mut cells = p.cells().to_vec();
    cells.resize(cells.len() + padding, 0);
    cells
}

/// Renumbers raw `(open, close, depth)` triples by opening position and
/// builds the token sequence, dropping unmatched zeros after the last `)`.
fn assemble(base_offset: i64, len: usize, mut raw: Vec<(usize, usize, usize)>) -> ParenSeq {
    if raw.is_empty() {
        return ParenSeq::default();
    }
    raw.sort_unstable();
    let mut tokens = vec![Token::Zero; len];
    let pairs: Vec<PairRecord> = raw
        .into_iter()
        .enumerate()
        .map(|(k, (open_pos, close_pos, depth))| {
            tokens[open_pos] = Token::Open(k + 1);
            tokens[close_pos] = Token::Close(k + 1);
            PairRecord { pair_id: k + 1, open_pos, close_pos, depth }
        })
        .collect();
    let last_close = pairs.iter().map(|p| p.close_pos).max().unwrap_or(0);
    tokens.truncate(last_close + 1);
    ParenSeq { tokens, pairs, base_offset }
}

/// Round-based matching: in round `r`, every `1` immediately followed by a
/// `0` in what is left of the sequence forms a pair of depth `r`, and those
/// pairs are deleted before the next round.
pub fn match_rounds(p: &BoxBallState) -> ParenSeq {
    match_rounds_padded(p, p.ball_count())
}

/// [`match_rounds`] with an explicit number of trailing zeros. Any padding
/// of at least `N` gives the same result.
pub fn match_rounds_padded(p: &BoxBallState, padding: usize) -> ParenSeq {
    let cells = padded_cells(p, padding);
    let mut residual: Vec<usize> = (0..cells.len()).collect();
    let mut raw = Vec::new();
    let mut depth = 0;
    while residual.iter().any(|&i| cells[i] == 1) {
        depth += 1;
        let mut keep = Vec::with_capacity(residual.len());
        let mut i = 0;
        let before = raw.len();
        while i < residual.len() {
            let (a, b) = (residual[i], residual.get(i + 1).copied());
            match b {
                Some(b) if cells[a] == 1 && cells[b] == 0 => {
                    raw.push((a, b, depth));
                    i += 2;
                }
                _ => {
                    keep.push(a);
                    i += 1;
                }
            }
        }
        if raw.len() == before {
            // Not enough padding: the remaining balls can never be matched.
            break;
        }
        residual = keep;
    }
    assemble(p.offset(), cells.len(), raw)
}

/// Stack-based matching: scan left to right, push every `1`, and let every
/// `0` close the most recent unmatched `1`. A pair's depth is one more than
/// the deepest pair directly inside it.
pub fn match_stack(p: &BoxBallState) -> ParenSeq {
    match_stack_padded(p, p.ball_count())
}

pub fn match_stack_padded(p: &BoxBallState, padding: usize) -> ParenSeq {
    let cells = padded_cells(p, padding);
    // (open index, deepest pair seen inside so far)
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut raw = Vec::new();
    for (i, &c) in cells.iter().enumerate() {
        if c == 1 {
            stack.push((i, 0));
        } else if let Some((open, inner)) = stack.pop() {
            let depth = inner + 1;
            raw.push((open, i, depth));
            if let Some(parent) = stack.last_mut() {
                parent.1 = parent.1.max(depth);
            }
        }
    }
    assemble(p.offset(), cells.len(), raw)
}

pub fn stack_permutation(seq: &ParenSeq) -> StackPermutation {
    StackPermutation { word: seq.close_order() }
}
