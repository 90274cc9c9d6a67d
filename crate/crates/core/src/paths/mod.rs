//! Discrete paths of subsurfaces, their lengths, twistedness and splittings,
//! and paths of glued subsurfaces with their decomposition into pieces.

mod glued;
mod splitting;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disk::{DiskError, Subsurface};
use crate::moves::{apply, find_move, ElementaryMove, MoveError};

pub use glued::{
    apply_glued, decompose_path, twisted_concatenation, Decomposition, Family, GluedPath, GluedPathError, GluedStep,
    normal_arcs, NormalArc, Port, Segment,
};
pub use splitting::{
    check_no_splitting, cyclic_obstruction_check, find_splitting, ConstraintEdge, NoSplitting, ObstructionReport,
    SplittingCertificate, SplittingResult, Verdict, OBSTRUCTION_CONSTANT,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("a path needs at least one state")]
    Empty,
    #[error("expected {states} states for {moves} moves")]
    Shape { states: usize, moves: usize },
    #[error("state {0} lives on a different disk")]
    DiskMismatch(usize),
    #[error("move {step} does not replay: {reason}")]
    ReplayFailure { step: usize, reason: String },
    #[error("move {0} leaves the state unchanged")]
    IdentityStep(usize),
    #[error("path is not twisted: the rotated first state differs from the last")]
    NotTwisted,
    #[error(transparent)]
    Disk(#[from] DiskError),
}

impl From<(usize, MoveError)> for PathError {
    fn from((step, e): (usize, MoveError)) -> Self {
        PathError::ReplayFailure { step, reason: e.to_string() }
    }
}

/// A sequence `Ω_{-ℓ}, …, Ω_k` joined by elementary moves.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiscretePath {
    start_index: i64,
    states: Vec<Subsurface>,
    moves: Vec<ElementaryMove>,
    lineage: Vec<Vec<(usize, usize)>>,
}

/// Move counts of a path.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PathMetrics {
    pub length: usize,
    pub eq_length: usize,
    pub twisted: bool,
}

/// On-disk form of a path.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathJson {
    pub states: Vec<Subsurface>,
    pub moves: Vec<ElementaryMove>,
    pub twist: i64,
}

impl DiscretePath {
    /// Validate that every move replays and changes the state.
    pub fn new(states: Vec<Subsurface>, moves: Vec<ElementaryMove>) -> Result<Self, PathError> {
        if states.is_empty() {
            return Err(PathError::Empty);
        }
        if states.len() != moves.len() + 1 {
            return Err(PathError::Shape { states: states.len(), moves: moves.len() });
        }
        let n = states[0].point_count();
        if let Some(i) = states.iter().position(|s| s.point_count() != n) {
            return Err(PathError::DiskMismatch(i));
        }
        let mut lineage = Vec::with_capacity(moves.len());
        for (i, mv) in moves.iter().enumerate() {
            let tr = apply(&states[i], mv).map_err(|e| PathError::from((i, e)))?;
            if tr.result != states[i + 1] {
                return Err(PathError::ReplayFailure { step: i, reason: "result differs from next state".into() });
            }
            if tr.result == states[i] {
                return Err(PathError::IdentityStep(i));
            }
            lineage.push(tr.links);
        }
        Ok(DiscretePath { start_index: 0, states, moves, lineage })
    }

    /// Replay moves from a start state.
    pub fn from_moves(start: Subsurface, moves: Vec<ElementaryMove>) -> Result<Self, PathError> {
        let mut states = vec![start];
        for (i, mv) in moves.iter().enumerate() {
            let next = apply(states.last().expect("nonempty"), mv).map_err(|e| PathError::from((i, e)))?;
            states.push(next.result);
        }
        Self::new(states, moves)
    }

    /// Join consecutive states by any connecting move.
    pub fn from_states(states: Vec<Subsurface>) -> Result<Self, PathError> {
        let mut moves = Vec::new();
        for (i, w) in states.windows(2).enumerate() {
            let mv = find_move(&w[0], &w[1]).ok_or_else(|| PathError::ReplayFailure {
                step: i,
                reason: "no elementary move joins the states".into(),
            })?;
            moves.push(mv);
        }
        Self::new(states, moves)
    }

    pub fn singleton(s: Subsurface) -> Self {
        DiscretePath { start_index: 0, states: vec![s], moves: Vec::new(), lineage: Vec::new() }
    }

    /// Re-index so that the first state is `Ω_{start}`.
    pub fn with_start_index(mut self, start: i64) -> Self {
        self.start_index = start;
        self
    }

    pub fn start_index(&self) -> i64 {
        self.start_index
    }

    pub fn states(&self) -> &[Subsurface] {
        &self.states
    }

    pub fn moves(&self) -> &[ElementaryMove] {
        &self.moves
    }

    /// Per step, `(region before, region after)` links between components.
    pub fn lineage(&self) -> &[Vec<(usize, usize)>] {
        &self.lineage
    }

    pub fn first(&self) -> &Subsurface {
        &self.states[0]
    }

    pub fn last(&self) -> &Subsurface {
        self.states.last().expect("paths are nonempty")
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn point_count(&self) -> u32 {
        self.states[0].point_count()
    }

    /// Append another path starting where this one ends.
    pub fn concat(mut self, other: &DiscretePath) -> Result<Self, PathError> {
        if other.first() != self.last() {
            return Err(PathError::ReplayFailure {
                step: self.moves.len(),
                reason: "paths do not meet".into(),
            });
        }
        self.states.extend(other.states[1..].iter().cloned());
        self.moves.extend(other.moves.iter().cloned());
        self.lineage.extend(other.lineage.iter().cloned());
        Ok(self)
    }

    pub fn to_json(&self, twist: i64) -> PathJson {
        PathJson { states: self.states.clone(), moves: self.moves.clone(), twist }
    }

    pub fn from_json(json: PathJson) -> Result<(Self, i64), PathError> {
        Ok((Self::new(json.states, json.moves)?, json.twist))
    }
}

/// Length, equivalence-class length and twistedness under rotation by `twist`.
pub fn path_metrics(path: &DiscretePath, twist: i64) -> Result<PathMetrics, PathError> {
    let rotated = path.first().rotate(twist)?;
    Ok(PathMetrics {
        length: path.len(),
        eq_length: path.moves.iter().filter(|m| m.kind.is_counted()).count(),
        twisted: rotated == *path.last(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::tests::s1;
    use crate::disk::MarkedDisk;
    use crate::moves::{successors, MoveKind};

    #[test]
    fn metric_examples() {
        let d = MarkedDisk::new(8).unwrap();
        let m = path_metrics(&DiscretePath::singleton(d.empty()), 2).unwrap();
        assert_eq!(m, PathMetrics { length: 0, eq_length: 0, twisted: true });
        assert!(!path_metrics(&DiscretePath::singleton(s1()), 2).unwrap().twisted);
        let (mv, next) = successors(&s1(), 3)
            .moves
            .into_iter()
            .find(|(m, _)| m.kind == MoveKind::Surgery2)
            .unwrap();
        let path = DiscretePath::new(vec![s1(), next], vec![mv]).unwrap();
        assert_eq!(path_metrics(&path, 2).unwrap(), PathMetrics { length: 1, eq_length: 1, twisted: false });
        assert!(matches!(path_metrics(&path, 1), Err(PathError::Disk(DiskError::OddStep(1)))));
    }

    #[test]
    fn rejects_bad_replays() {
        let (mv, next) = successors(&s1(), 3).moves.into_iter().next().unwrap();
        assert!(matches!(
            DiscretePath::new(vec![s1(), s1()], vec![mv.clone()]),
            Err(PathError::ReplayFailure { step: 0, .. })
        ));
        assert!(DiscretePath::new(vec![s1(), next.clone()], vec![mv]).is_ok());
        assert!(DiscretePath::from_states(vec![s1(), next]).is_ok());
        assert_eq!(DiscretePath::new(vec![], vec![]), Err(PathError::Empty));
    }

    #[test]
    fn json_roundtrip() {
        let (mv, next) = successors(&s1(), 3).moves.into_iter().next().unwrap();
        let path = DiscretePath::new(vec![s1(), next], vec![mv]).unwrap();
        let text = serde_json::to_string(&path.to_json(2)).unwrap();
        let (back, twist) = DiscretePath::from_json(serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, path);
        assert_eq!(twist, 2);
    }
}
