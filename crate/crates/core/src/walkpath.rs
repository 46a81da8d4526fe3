//! Lattice-path form of a state.
//!
//! Reading the parenthesis sequence from the first `(`, every `(` is an up
//! step and every `)` or `0` is a right step. The walk is implicitly extended
//! by right steps in both directions. One time step of the automaton
//! reflects every balanced block of the walk across the diagonal through the
//! block's first vertex.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matching::{ParenSeq, Token};
use crate::state::BoxBallState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    #[serde(rename = "U")]
    Up,
    #[serde(rename = "R")]
    Right,
}

impl Step {
    fn flipped(self) -> Self {
        match self {
            Step::Up => Step::Right,
            Step::Right => Step::Up,
        }
    }

    fn glyph(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Right => 'R',
        }
    }
}

/// A finite stretch of a walk from `(-∞, 0)` to `(∞, N)`.
///
/// Step `i` sits over the cell at absolute position `anchor_x + i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Walk {
    pub anchor_x: i64,
    pub steps: Vec<Step>,
}

impl Walk {
    pub fn new(anchor_x: i64, steps: Vec<Step>) -> Self {
        Self { anchor_x, steps }
    }

    /// Number of up steps, i.e. the final height.
    pub fn height(&self) -> usize {
        self.steps.iter().filter(|&&s| s == Step::Up).count()
    }

    /// The same walk with its leading and trailing right steps dropped.
    pub fn normalized(&self) -> Walk {
        let Some(first) = self.steps.iter().position(|&s| s == Step::Up) else {
            return Walk::default();
        };
        let last = self.steps.iter().rposition(|&s| s == Step::Up).unwrap_or(first);
        Walk { anchor_x: self.anchor_x + first as i64, steps: self.steps[first..=last].to_vec() }
    }

    /// Equality up to horizontal translation and the implicit right steps.
    pub fn same_shape(&self, other: &Walk) -> bool {
        self.normalized().steps == other.normalized().steps
    }

    /// Plane coordinates of the vertex before step `i`.
    pub fn vertex(&self, i: usize) -> (i64, i64) {
        let ups = self.steps[..i].iter().filter(|&&s| s == Step::Up).count() as i64;
        (self.anchor_x + i as i64 - ups, ups)
    }

    fn padded(&self, right: usize) -> Walk {
        let mut steps = self.steps.clone();
        steps.resize(steps.len() + right, Step::Right);
        Walk { anchor_x: self.anchor_x, steps }
    }

    /// Staircase drawing, top row first: `|` for up steps, `_` for right steps.
    pub fn render(&self) -> String {
        let height = self.height();
        let mut grid = vec![vec![' '; self.steps.len()]; height + 1];
        let mut y = 0;
        for (i, s) in self.steps.iter().enumerate() {
            match s {
                Step::Up => {
                    grid[height - y][i] = '|';
                    y += 1;
                }
                Step::Right => grid[height - y][i] = '_',
            }
        }
        grid.into_iter()
            .map(|row| row.into_iter().collect::<String>().trim_end().to_string())
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.steps.iter().map(|s| s.glyph().to_string()).collect();
        f.write_str(&s.join(" "))
    }
}

impl FromStr for Walk {
    type Err = Error;

    /// `U`/`R` letters, whitespace ignored, anchored at 0.
    fn from_str(s: &str) -> Result<Self> {
        let steps = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'U' | 'u' => Ok(Step::Up),
                'R' | 'r' => Ok(Step::Right),
                other => Err(Error::Parse { text: s.to_string(), reason: format!("unexpected step {other:?}") }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Walk { anchor_x: 0, steps })
    }
}

/// A maximal run of steps from an up step back to the diagonal through its
/// starting vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub start: usize,
    /// Exclusive.
    pub end: usize,
    pub origin: (i64, i64),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPartition {
    pub groups: Vec<Group>,
    /// Right steps outside every group.
    pub singles: Vec<usize>,
}

pub fn to_walk(seq: &ParenSeq) -> Walk {
    let steps = seq
        .tokens
        .iter()
        .map(|t| match t {
            Token::Open(_) => Step::Up,
            Token::Close(_) | Token::Zero => Step::Right,
        })
        .collect();
    Walk { anchor_x: seq.base_offset, steps }
}

pub fn walk_to_state(w: &Walk) -> BoxBallState {
    let cells: Vec<u8> = w.steps.iter().map(|&s| u8::from(s == Step::Up)).collect();
    BoxBallState::from_cells(w.anchor_x, &cells)
}

/// Splits the explicit steps into groups and singles. Fails if a group is
/// still open when the explicit steps run out.
pub fn group_partition(w: &Walk) -> Result<GroupPartition> {
    let mut part = GroupPartition::default();
    let mut i = 0;
    while i < w.steps.len() {
        if w.steps[i] == Step::Right {
            part.singles.push(i);
            i += 1;
            continue;
        }
        let start = i;
        // height above the diagonal through the group's first vertex
        let mut excess = 0i64;
        loop {
            let Some(&s) = w.steps.get(i) else {
                return Err(Error::MalformedWalk { start });
            };
            excess += if s == Step::Up { 1 } else { -1 };
            i += 1;
            if excess == 0 {
                break;
            }
        }
        part.groups.push(Group { start, end: i, origin: w.vertex(start) });
    }
    Ok(part)
}

/// One time step: every group is reflected across its diagonal, which swaps
/// up and right steps in place.
pub fn evolve_reflect(w: &Walk) -> Walk {
    let mut padded = w.padded(w.height());
    let part = group_partition(&padded).expect("padding by the height closes every group");
    for g in &part.groups {
        for s in &mut padded.steps[g.start..g.end] {
            *s = s.flipped();
        }
    }
    padded.normalized()
}

/// Removes both steps of every adjacent `(first, second)` pair, with one
/// implicit right step added on each side of the walk. The result is
/// normalized and anchored at the original cell of its first up step.
fn delete_corners(w: &Walk, first: Step, second: Step) -> Walk {
    let mut padded = Vec::with_capacity(w.steps.len() + 2);
    padded.push(Step::Right);
    padded.extend_from_slice(&w.steps);
    padded.push(Step::Right);
    let mut kept = Vec::with_capacity(padded.len());
    let mut first_up = None;
    let mut i = 0;
    while i < padded.len() {
        if padded[i] == first && padded.get(i + 1) == Some(&second) {
            i += 2;
            continue;
        }
        if padded[i] == Step::Up {
            first_up.get_or_insert(i);
        }
        kept.push(padded[i]);
        i += 1;
    }
    let Some(first_up) = first_up else {
        return Walk::default();
    };
    let normalized = Walk { anchor_x: 0, steps: kept }.normalized();
    Walk { anchor_x: w.anchor_x - 1 + first_up as i64, steps: normalized.steps }
}

/// Deletes every convex corner (up step followed by a right step).
pub fn delete_convex(w: &Walk) -> Walk {
    delete_corners(w, Step::Up, Step::Right)
}

/// Deletes every concave corner (right step followed by an up step).
pub fn delete_concave(w: &Walk) -> Walk {
    delete_corners(w, Step::Right, Step::Up)
}

/// Whether every group consists of parenthesis tokens only, i.e. no
/// unmatched `0` occurs above a group's diagonal.
pub fn groups_are_paren_blocks(seq: &ParenSeq, part: &GroupPartition) -> bool {
    part.groups
        .iter()
        .all(|g| seq.tokens[g.start..g.end].iter().all(|t| !matches!(t, Token::Zero)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::match_stack;
    use crate::state::evolve_tts;

    fn w(s: &str) -> Walk {
        s.parse().unwrap()
    }

    fn example() -> BoxBallState {
        "0010011011".parse().unwrap()
    }

    #[test]
    fn example_walk() {
        let walk = to_walk(&match_stack(&example()));
        assert_eq!(walk.to_string(), "U R R U U R U U R R R");
        assert_eq!(walk.anchor_x, 2);
        assert_eq!(to_walk(&match_stack(&"10".parse().unwrap())), w("UR"));
        assert_eq!(to_walk(&match_stack(&"1100".parse().unwrap())), w("UURR"));
    }

    #[test]
    fn example_groups() {
        let seq = match_stack(&example());
        let part = group_partition(&to_walk(&seq)).unwrap();
        let spans: Vec<(usize, usize)> = part.groups.iter().map(|g| (g.start, g.end)).collect();
        assert_eq!(spans, vec![(0, 2), (3, 11)]);
        assert_eq!(part.singles, vec![2]);
        assert_eq!(part.groups[1].origin, (4, 1));
        assert!(groups_are_paren_blocks(&seq, &part));
    }

    #[test]
    fn small_groups() {
        assert_eq!(group_partition(&w("UR")).unwrap().groups.len(), 1);
        let part = group_partition(&w("UURRUR")).unwrap();
        let spans: Vec<(usize, usize)> = part.groups.iter().map(|g| (g.start, g.end)).collect();
        assert_eq!(spans, vec![(0, 4), (4, 6)]);
        assert_eq!(group_partition(&w("UUR")), Err(Error::MalformedWalk { start: 0 }));
    }

    #[test]
    fn example_reflection() {
        let walk = to_walk(&match_stack(&example()));
        let next = evolve_reflect(&walk);
        assert_eq!(next.to_string(), "U R R R U R R U U U");
        assert_eq!(next.anchor_x, 3);
        let state = walk_to_state(&next);
        assert_eq!(state.render_range(2, 13), "01000100111");
        assert_eq!(state, evolve_tts(&example()));
    }

    #[test]
    fn single_ball_hops() {
        let next = evolve_reflect(&w("UR"));
        assert_eq!(next, Walk::new(1, vec![Step::Up]));
        assert_eq!(walk_to_state(&w("RUR")), BoxBallState::from_positions(&[1]));
    }

    #[test]
    fn reflection_iterates_on_its_own_output() {
        let mut p = example();
        let mut walk = to_walk(&match_stack(&p));
        for _ in 0..10 {
            walk = evolve_reflect(&walk);
            p = evolve_tts(&p);
            assert_eq!(walk_to_state(&walk), p);
        }
    }

    #[test]
    fn state_round_trip() {
        let p = example();
        assert_eq!(walk_to_state(&to_walk(&match_stack(&p))), p);
    }

    #[test]
    fn corner_deletions() {
        assert!(delete_convex(&w("URUR")).steps.is_empty());
        assert!(delete_concave(&w("URUR")).steps.is_empty());
        assert_eq!(delete_convex(&w("UURR")).steps, w("U").steps);
        assert!(delete_convex(&w("UURR")).same_shape(&w("UR")));
        assert!(delete_concave(&w("UURR")).same_shape(&w("UR")));
        let walk = to_walk(&match_stack(&example()));
        assert!(delete_convex(&walk).same_shape(&delete_concave(&walk)));
    }

    #[test]
    fn staircase() {
        assert_eq!(w("UR").render(), " _\n|");
        assert_eq!(w("UUURRR").render(), "   ___\n  |\n |\n|");
    }
}
