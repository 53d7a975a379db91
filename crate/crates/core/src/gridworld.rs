//! Bounded N-dimensional grids with a single rewarded goal cell.
//!
//! Moves that would leave the grid bounce: the agent stays where it is.
//! [`GridSpec::make_2d`] and [`GridSpec::make_3d`] use the classic action
//! order (up, down, left, right, forward, backward with `y` first);
//! [`GridSpec::make_nd`] uses the canonical axis-major order.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Integer coordinates, one per axis. Signed so a tentative move to `-1`
/// is representable before it is validated.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(SmallVec<[i32; 4]>);

impl Position {
    pub fn new(coords: &[i32]) -> Self {
        Position(SmallVec::from_slice(coords))
    }

    pub fn coords(&self) -> &[i32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn l1_distance(&self, other: &Position) -> u64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| (a as i64 - b as i64).unsigned_abs())
            .sum()
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl<const N: usize> From<[i32; N]> for Position {
    fn from(coords: [i32; N]) -> Self {
        Position::new(&coords)
    }
}

impl From<Vec<i32>> for Position {
    fn from(coords: Vec<i32>) -> Self {
        Position(SmallVec::from_vec(coords))
    }
}

impl From<&[i32]> for Position {
    fn from(coords: &[i32]) -> Self {
        Position::new(coords)
    }
}

/// A unit move along one axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub axis: usize,
    /// `+1` or `-1`.
    pub step: i32,
}

impl Move {
    pub const fn new(axis: usize, step: i32) -> Self {
        Move { axis, step }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionOrder {
    /// up (`y+1`), down, left (`x-1`), right, then forward (`z+1`), backward.
    Classic,
    /// `+axis0, -axis0, +axis1, -axis1, ...`
    Canonical,
}

/// Immutable mapping from action index to unit move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionTable {
    moves: Vec<Move>,
    order: ActionOrder,
}

const CLASSIC_2D: [Move; 4] = [
    Move::new(1, 1),
    Move::new(1, -1),
    Move::new(0, -1),
    Move::new(0, 1),
];

const CLASSIC_3D: [Move; 6] = [
    Move::new(1, 1),
    Move::new(1, -1),
    Move::new(0, -1),
    Move::new(0, 1),
    Move::new(2, 1),
    Move::new(2, -1),
];

impl ActionTable {
    pub fn classic_2d() -> Self {
        ActionTable { moves: CLASSIC_2D.to_vec(), order: ActionOrder::Classic }
    }

    pub fn classic_3d() -> Self {
        ActionTable { moves: CLASSIC_3D.to_vec(), order: ActionOrder::Classic }
    }

    pub fn canonical(dim: usize) -> Self {
        let moves = (0..dim)
            .flat_map(|axis| [Move::new(axis, 1), Move::new(axis, -1)])
            .collect();
        ActionTable { moves, order: ActionOrder::Canonical }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn order(&self) -> ActionOrder {
        self.order
    }

    pub fn get(&self, action: usize) -> Option<Move> {
        self.moves.get(action).copied()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// Full displacement vector of `action` in a `dim`-dimensional grid.
    pub fn delta(&self, action: usize, dim: usize) -> Option<Vec<i32>> {
        let mv = self.get(action)?;
        let mut d = vec![0; dim];
        *d.get_mut(mv.axis)? = mv.step;
        Some(d)
    }
}

/// Environment definition: extents, start, goal, actions and rewards.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSpec {
    extents: Vec<u32>,
    start: Position,
    goal: Position,
    actions: ActionTable,
    goal_reward: f64,
    step_reward: f64,
}

impl GridSpec {
    pub fn make_2d(width: u32, height: u32, start: Position, goal: Position) -> Result<Self> {
        Self::build(vec![width, height], start, goal, ActionTable::classic_2d())
    }

    pub fn make_3d(
        width: u32,
        height: u32,
        depth: u32,
        start: Position,
        goal: Position,
    ) -> Result<Self> {
        Self::build(vec![width, height, depth], start, goal, ActionTable::classic_3d())
    }

    pub fn make_nd(extents: Vec<u32>, start: Position, goal: Position) -> Result<Self> {
        let dim = extents.len();
        Self::build(extents, start, goal, ActionTable::canonical(dim))
    }

    /// Uses the classic action order for 2 and 3 axes, canonical otherwise.
    pub fn from_extents(extents: Vec<u32>, start: Position, goal: Position) -> Result<Self> {
        match *extents.as_slice() {
            [w, h] => Self::make_2d(w, h, start, goal),
            [w, h, d] => Self::make_3d(w, h, d, start, goal),
            _ => Self::make_nd(extents, start, goal),
        }
    }

    fn build(extents: Vec<u32>, start: Position, goal: Position, actions: ActionTable) -> Result<Self> {
        if extents.is_empty() {
            return Err(Error::InvalidGrid { detail: "grid needs at least one axis".into() });
        }
        if extents.iter().any(|&e| e == 0 || e > i32::MAX as u32) {
            return Err(Error::InvalidGrid {
                detail: format!("every extent must lie in 1..=2^31-1, got {extents:?}"),
            });
        }
        for (name, p) in [("start", &start), ("goal", &goal)] {
            if p.dim() != extents.len() {
                return Err(Error::InvalidGrid {
                    detail: format!(
                        "{name} {p} has {} coordinates, grid has {} axes",
                        p.dim(),
                        extents.len()
                    ),
                });
            }
            for (axis, (&c, &e)) in p.coords().iter().zip(&extents).enumerate() {
                if c < 0 || c as u32 >= e {
                    return Err(Error::InvalidGrid {
                        detail: format!("{name} coordinate {axis} = {c} outside 0..{e}"),
                    });
                }
            }
        }
        if start == goal {
            return Err(Error::InvalidGrid { detail: format!("start and goal coincide at {start}") });
        }
        Ok(GridSpec { extents, start, goal, actions, goal_reward: 1.0, step_reward: 0.0 })
    }

    pub fn with_rewards(mut self, goal_reward: f64, step_reward: f64) -> Self {
        self.goal_reward = goal_reward;
        self.step_reward = step_reward;
        self
    }

    pub fn dim(&self) -> usize {
        self.extents.len()
    }

    pub fn extents(&self) -> &[u32] {
        &self.extents
    }

    pub fn start(&self) -> &Position {
        &self.start
    }

    pub fn goal(&self) -> &Position {
        &self.goal
    }

    pub fn actions(&self) -> &ActionTable {
        &self.actions
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn goal_reward(&self) -> f64 {
        self.goal_reward
    }

    pub fn step_reward(&self) -> f64 {
        self.step_reward
    }

    /// Number of cells, saturating at `u128::MAX`.
    pub fn cell_count(&self) -> u128 {
        self.extents.iter().fold(1u128, |acc, &e| acc.saturating_mul(e as u128))
    }

    pub fn is_valid_position(&self, p: &Position) -> Result<bool> {
        self.check_dim(p)?;
        Ok(self.in_bounds(p.coords()))
    }

    #[inline]
    fn in_bounds(&self, coords: &[i32]) -> bool {
        coords.iter().zip(&self.extents).all(|(&c, &e)| c >= 0 && (c as u32) < e)
    }

    fn check_dim(&self, p: &Position) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::invalid(format!(
                "position {p} has {} coordinates, grid has {} axes",
                p.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn get_reward(&self, state: &Position) -> f64 {
        if *state == self.goal {
            self.goal_reward
        } else {
            self.step_reward
        }
    }

    pub fn take_action(&self, state: &Position, action: usize) -> Result<Position> {
        self.check_dim(state)?;
        if action >= self.num_actions() {
            return Err(Error::invalid(format!(
                "action {action} out of range 0..{}",
                self.num_actions()
            )));
        }
        Ok(self.step(state, action))
    }

    /// Unchecked transition for the training loop. `state` must be valid and
    /// `action` in range.
    #[inline]
    pub(crate) fn step(&self, state: &Position, action: usize) -> Position {
        let mv = self.actions.moves[action];
        let mut next = state.clone();
        let moved = state.0[mv.axis] + mv.step;
        if moved >= 0 && (moved as u32) < self.extents[mv.axis] {
            next.0[mv.axis] = moved;
        }
        next
    }

    pub fn manhattan_distance(&self) -> u64 {
        self.start.l1_distance(&self.goal)
    }

    /// Row-major index with axis 0 varying fastest.
    pub(crate) fn linear_index(&self, p: &Position) -> usize {
        let mut idx = 0usize;
        for (&c, &e) in p.coords().iter().zip(&self.extents).rev() {
            idx = idx * e as usize + c as usize;
        }
        idx
    }

    pub(crate) fn position_at(&self, mut idx: usize) -> Position {
        let coords: Vec<i32> = self
            .extents
            .iter()
            .map(|&e| {
                let c = idx % e as usize;
                idx /= e as usize;
                c as i32
            })
            .collect();
        Position::from(coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_2d() -> GridSpec {
        GridSpec::make_2d(50, 50, [0, 0].into(), [49, 49].into()).unwrap()
    }

    fn paper_3d() -> GridSpec {
        GridSpec::make_3d(50, 50, 50, [0, 0, 0].into(), [49, 49, 49].into()).unwrap()
    }

    #[test]
    fn action_counts() {
        assert_eq!(paper_2d().num_actions(), 4);
        assert_eq!(paper_3d().num_actions(), 6);
        let g4 = GridSpec::make_nd(vec![10; 4], [0, 0, 0, 0].into(), [9, 9, 9, 9].into()).unwrap();
        assert_eq!(g4.num_actions(), 8);
    }

    #[test]
    fn minimal_grids() {
        GridSpec::make_2d(1, 2, [0, 0].into(), [0, 1].into()).unwrap();
        GridSpec::make_3d(2, 2, 2, [0, 0, 0].into(), [1, 1, 1].into()).unwrap();
    }

    #[test]
    fn rejects_goal_out_of_bounds() {
        let err = GridSpec::make_2d(50, 50, [0, 0].into(), [50, 49].into()).unwrap_err();
        match err {
            Error::InvalidGrid { detail } => {
                assert!(detail.contains("goal coordinate 0 = 50"), "{detail}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_start_equal_goal() {
        let err = GridSpec::make_3d(50, 50, 50, [0, 0, 0].into(), [0, 0, 0].into());
        assert!(matches!(err, Err(Error::InvalidGrid { .. })));
    }

    #[test]
    fn rejects_empty_and_zero_extents() {
        assert!(GridSpec::make_nd(vec![], Position::new(&[]), Position::new(&[])).is_err());
        assert!(GridSpec::make_nd(vec![3, 0], [0, 0].into(), [1, 0].into()).is_err());
        assert!(GridSpec::make_2d(3, 3, [0, 0, 0].into(), [1, 1].into()).is_err());
    }

    #[test]
    fn canonical_order_differs_from_classic() {
        let nd = GridSpec::make_nd(vec![50, 50], [0, 0].into(), [49, 49].into()).unwrap();
        assert_eq!(nd.actions().moves()[0], Move::new(0, 1));
        assert_eq!(nd.actions().moves()[1], Move::new(0, -1));
        assert_eq!(paper_2d().actions().moves()[0], Move::new(1, 1));
        assert_ne!(nd.actions(), paper_2d().actions());
    }

    #[test]
    fn validity() {
        let g = paper_2d();
        assert!(g.is_valid_position(&[0, 0].into()).unwrap());
        assert!(!g.is_valid_position(&[49, 50].into()).unwrap());
        assert!(!paper_3d().is_valid_position(&[0, 0, -1].into()).unwrap());
        assert!(g.is_valid_position(&[0, 0, 0].into()).is_err());
    }

    #[test]
    fn rewards() {
        let g = paper_2d();
        assert_eq!(g.get_reward(&[49, 49].into()), 1.0);
        assert_eq!(g.get_reward(&[0, 0].into()), 0.0);
        assert_eq!(g.get_reward(&[12, 30].into()), 0.0);
        let shaped = paper_2d().with_rewards(10.0, -0.1);
        assert_eq!(shaped.get_reward(&[49, 49].into()), 10.0);
        assert_eq!(shaped.get_reward(&[1, 1].into()), -0.1);
    }

    #[test]
    fn moves_and_bounce() {
        let g = paper_2d();
        assert_eq!(g.take_action(&[5, 5].into(), 0).unwrap(), [5, 6].into());
        assert_eq!(g.take_action(&[0, 0].into(), 1).unwrap(), [0, 0].into());
        assert_eq!(g.take_action(&[0, 0].into(), 2).unwrap(), [0, 0].into());
        assert_eq!(g.take_action(&[49, 3].into(), 3).unwrap(), [49, 3].into());
        assert_eq!(paper_3d().take_action(&[0, 0, 0].into(), 4).unwrap(), [0, 0, 1].into());
        assert!(g.take_action(&[0, 0].into(), 4).is_err());
    }

    #[test]
    fn classic_table_fidelity() {
        let g = paper_2d();
        let mut s: Position = [0, 0].into();
        for a in [3, 0] {
            s = g.take_action(&s, a).unwrap();
        }
        assert_eq!(s, [1, 1].into());

        let g = paper_3d();
        let mut s: Position = [0, 0, 0].into();
        for a in [3, 0, 4] {
            s = g.take_action(&s, a).unwrap();
        }
        assert_eq!(s, [1, 1, 1].into());
    }

    #[test]
    fn delta_vectors() {
        let t = ActionTable::classic_3d();
        assert_eq!(t.delta(2, 3).unwrap(), vec![-1, 0, 0]);
        assert_eq!(t.delta(5, 3).unwrap(), vec![0, 0, -1]);
        assert!(t.delta(6, 3).is_none());
    }

    #[test]
    fn manhattan() {
        assert_eq!(paper_2d().manhattan_distance(), 98);
        assert_eq!(paper_3d().manhattan_distance(), 147);
        let adj = GridSpec::make_2d(3, 3, [1, 1].into(), [1, 2].into()).unwrap();
        assert_eq!(adj.manhattan_distance(), 1);
    }

    #[test]
    fn linear_index_roundtrip() {
        let g = GridSpec::make_3d(3, 4, 5, [0, 0, 0].into(), [2, 3, 4].into()).unwrap();
        for i in 0..60 {
            let p = g.position_at(i);
            assert!(g.is_valid_position(&p).unwrap());
            assert_eq!(g.linear_index(&p), i);
        }
    }

    #[test]
    fn display() {
        assert_eq!(Position::from([3, -1, 7]).to_string(), "(3, -1, 7)");
    }
}
