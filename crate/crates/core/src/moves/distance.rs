use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{find_move, successors, ElementaryMove};
use crate::disk::Subsurface;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum DistanceMode {
    /// Every move has weight 1.
    Plain,
    /// Only surgeries and boundary surgeries have weight 1.
    EqClass,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Caps {
    pub max_chords: usize,
    /// Stop once the searched radius reaches this value.
    pub max_depth: Option<u32>,
}

impl Caps {
    pub fn chords(max_chords: usize) -> Self {
        Caps { max_chords, max_depth: None }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DistanceResult {
    /// `None` when no path was found within the caps.
    pub value: Option<u32>,
    pub exact: bool,
    pub witness: Option<Vec<ElementaryMove>>,
    pub mode: DistanceMode,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistanceError {
    #[error("input has {chords} chords, above the cap of {cap}")]
    CapTooSmall { chords: usize, cap: usize },
    #[error("inputs live on different disks")]
    DiskMismatch,
}

/// Moves needed to change the chord count from `from` to `to`, each move
/// changing it by at most two.
fn chord_gap(from: usize, to: usize) -> u32 {
    (from.saturating_sub(to) as u32).div_ceil(2)
}

struct Side {
    states: Vec<Subsurface>,
    parent: Vec<usize>,
    depth: Vec<u32>,
    index: HashMap<Subsurface, usize>,
    frontier: Vec<usize>,
    expanded: u32,
    /// Smallest depth of an expanded node that produced a capped successor.
    capped_from: Option<u32>,
}

impl Side {
    fn new(root: &Subsurface) -> Self {
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        Side {
            states: vec![root.clone()],
            parent: vec![usize::MAX],
            depth: vec![0],
            index,
            frontier: vec![0],
            expanded: 0,
            capped_from: None,
        }
    }

    fn path_to_root(&self, mut i: usize) -> Vec<Subsurface> {
        let mut out = vec![self.states[i].clone()];
        while self.parent[i] != usize::MAX {
            i = self.parent[i];
            out.push(self.states[i].clone());
        }
        out
    }

    /// Expand one layer; returns newly discovered node indices.
    fn expand(&mut self, cap: usize) -> Vec<usize> {
        let layer: Vec<(usize, super::Successors)> = self
            .frontier
            .par_iter()
            .map(|&i| (i, successors(&self.states[i], cap)))
            .collect();
        let mut fresh = Vec::new();
        for (i, succ) in layer {
            if succ.capped > 0 && self.capped_from.is_none() {
                self.capped_from = Some(self.depth[i]);
            }
            for (_, y) in succ.moves {
                if self.index.contains_key(&y) {
                    continue;
                }
                let id = self.states.len();
                self.index.insert(y.clone(), id);
                self.states.push(y);
                self.parent.push(i);
                self.depth.push(self.depth[i] + 1);
                fresh.push(id);
            }
        }
        self.expanded += 1;
        self.frontier = fresh.clone();
        fresh
    }

    /// Whether no path shorter than `best` can leave the capped region on this side.
    fn closed_below(&self, best: u32, cap: usize, other_chords: usize) -> bool {
        let exit = 1 + chord_gap(cap + 1, other_chords);
        let via_expanded = self.capped_from.is_none_or(|d| d + exit >= best);
        via_expanded && self.expanded + exit >= best
    }
}

fn witness(states: &[Subsurface]) -> Vec<ElementaryMove> {
    states
        .windows(2)
        .map(|w| find_move(&w[0], &w[1]).expect("consecutive search states are adjacent"))
        .collect()
}

fn check_inputs(a: &Subsurface, b: &Subsurface, caps: Caps) -> Result<(), DistanceError> {
    if a.point_count() != b.point_count() {
        return Err(DistanceError::DiskMismatch);
    }
    for s in [a, b] {
        if s.chord_count() > caps.max_chords {
            return Err(DistanceError::CapTooSmall { chords: s.chord_count(), cap: caps.max_chords });
        }
    }
    Ok(())
}

/// Distance in the move graph restricted to at most `caps.max_chords` chords.
///
/// A plain result is exact when no shorter path can pass through a state above
/// the cap: each move changes the chord count by at most two, so leaving the
/// capped region and returning costs at least that many extra moves.
pub fn distance(
    a: &Subsurface,
    b: &Subsurface,
    mode: DistanceMode,
    caps: Caps,
) -> Result<DistanceResult, DistanceError> {
    check_inputs(a, b, caps)?;
    match mode {
        DistanceMode::Plain => Ok(plain(a, b, caps)),
        DistanceMode::EqClass => Ok(eq_class(a, b, caps)),
    }
}

fn plain(a: &Subsurface, b: &Subsurface, caps: Caps) -> DistanceResult {
    if a == b {
        return DistanceResult { value: Some(0), exact: true, witness: Some(vec![]), mode: DistanceMode::Plain };
    }
    let cap = caps.max_chords;
    let mut fwd = Side::new(a);
    let mut bwd = Side::new(b);
    let mut best: Option<(u32, usize, usize)> = None;
    loop {
        let best_len = best.map_or(u32::MAX, |x| x.0);
        if fwd.expanded + bwd.expanded >= best_len {
            break;
        }
        if caps.max_depth.is_some_and(|m| fwd.expanded + bwd.expanded >= m) {
            break;
        }
        let fwd_turn = match (fwd.frontier.is_empty(), bwd.frontier.is_empty()) {
            (true, _) | (_, true) => break,
            _ => fwd.frontier.len() <= bwd.frontier.len(),
        };
        let (me, other) = if fwd_turn { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        for id in me.expand(cap) {
            if let Some(&j) = other.index.get(&me.states[id]) {
                let len = me.depth[id] + other.depth[j];
                if best.is_none_or(|x| len < x.0) {
                    best = Some(if fwd_turn { (len, id, j) } else { (len, j, id) });
                }
            }
        }
    }
    match best {
        Some((len, i, j)) => {
            let mut states = fwd.path_to_root(i);
            states.reverse();
            states.extend(bwd.path_to_root(j).into_iter().skip(1));
            let exact = fwd.closed_below(len, cap, b.chord_count())
                || bwd.closed_below(len, cap, a.chord_count());
            DistanceResult { value: Some(len), exact, witness: Some(witness(&states)), mode: DistanceMode::Plain }
        }
        None => {
            let exhausted = |s: &Side| s.frontier.is_empty() && s.capped_from.is_none();
            DistanceResult {
                value: None,
                exact: exhausted(&fwd) || exhausted(&bwd),
                witness: None,
                mode: DistanceMode::Plain,
            }
        }
    }
}

fn eq_class(a: &Subsurface, b: &Subsurface, caps: Caps) -> DistanceResult {
    let target = b.hat();
    let mut states = vec![a.clone()];
    let mut index: HashMap<Subsurface, usize> = HashMap::from([(a.clone(), 0)]);
    let mut dist = vec![0u32];
    let mut parent = vec![usize::MAX];
    let mut done = vec![false];
    let mut deque = VecDeque::from([0usize]);
    let mut capped_at: Option<u32> = None;
    let mut found = None;
    while let Some(i) = deque.pop_front() {
        if done[i] {
            continue;
        }
        done[i] = true;
        if states[i].hat() == target {
            found = Some(i);
            break;
        }
        if caps.max_depth.is_some_and(|m| dist[i] >= m) {
            continue;
        }
        let succ = successors(&states[i], caps.max_chords);
        if succ.capped > 0 && capped_at.is_none() {
            capped_at = Some(dist[i]);
        }
        for (mv, y) in succ.moves {
            let w = u32::from(mv.kind.is_counted());
            let nd = dist[i] + w;
            let j = match index.get(&y) {
                Some(&j) => {
                    if done[j] || dist[j] <= nd {
                        continue;
                    }
                    j
                }
                None => {
                    let j = states.len();
                    index.insert(y.clone(), j);
                    states.push(y);
                    dist.push(nd);
                    parent.push(i);
                    done.push(false);
                    j
                }
            };
            dist[j] = nd;
            parent[j] = i;
            if w == 0 {
                deque.push_front(j);
            } else {
                deque.push_back(j);
            }
        }
    }
    let depth_limited = caps.max_depth.is_some();
    match found {
        Some(i) => {
            let mut path = vec![states[i].clone()];
            let mut k = i;
            while parent[k] != usize::MAX {
                k = parent[k];
                path.push(states[k].clone());
            }
            path.reverse();
            let exact = capped_at.is_none_or(|d| d >= dist[i]);
            DistanceResult { value: Some(dist[i]), exact, witness: Some(witness(&path)), mode: DistanceMode::EqClass }
        }
        None => DistanceResult {
            value: None,
            exact: capped_at.is_none() && !depth_limited,
            witness: None,
            mode: DistanceMode::EqClass,
        },
    }
}

/// Sound lower bound on the plain distance from the Lipschitz properties of
/// the adjusted Euler characteristic and of minimal connected pairs.
pub fn certified_lower_bound(a: &Subsurface, b: &Subsurface) -> u32 {
    let chi = (a.adjusted_chi() - b.adjusted_chi()).abs().ceil() as u32;
    let ma = a.m_set();
    let mb = b.m_set();
    let common = ma.intersection(&mb).count();
    let erosion = |m: usize| (m - common).div_ceil(6) as u32;
    chi.max(erosion(ma.len())).max(erosion(mb.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::{canonicalize, MarkedDisk, RawSubsurface};
    use crate::moves::apply;

    fn raw(n: u32, chords: &[((u32, u32), (u32, u32))], x1_in: bool) -> Subsurface {
        canonicalize(&RawSubsurface::new(n, chords, x1_in)).unwrap()
    }

    fn s1() -> Subsurface {
        raw(8, &[((1, 0), (4, 0))], false)
    }

    fn replay(a: &Subsurface, w: &[ElementaryMove]) -> Subsurface {
        w.iter().fold(a.clone(), |s, m| apply(&s, m).unwrap().result)
    }

    #[test]
    fn distance_to_self_is_zero() {
        let r = distance(&s1(), &s1(), DistanceMode::Plain, Caps::chords(3)).unwrap();
        assert_eq!((r.value, r.exact), (Some(0), true));
    }

    #[test]
    fn one_surgery_apart() {
        let t = raw(8, &[((1, 0), (3, 0)), ((3, 1), (4, 0))], false);
        let r = distance(&s1(), &t, DistanceMode::Plain, Caps::chords(3)).unwrap();
        assert_eq!(r.value, Some(1));
        assert!(r.exact);
        assert_eq!(replay(&s1(), r.witness.as_ref().unwrap()), t);
    }

    #[test]
    fn eq_class_ignores_null_components() {
        let with_rect = raw(8, &[((1, 0), (4, 0)), ((5, 0), (8, 1)), ((5, 1), (8, 0))], false);
        assert_eq!(with_rect.hat(), s1());
        let r = distance(&s1(), &with_rect, DistanceMode::EqClass, Caps::chords(3)).unwrap();
        assert_eq!(r.value, Some(0));
        let p = distance(&s1(), &with_rect, DistanceMode::Plain, Caps::chords(3)).unwrap();
        assert_eq!(p.value, Some(1));
    }

    #[test]
    fn witness_replays_for_longer_paths() {
        let d = MarkedDisk::new(6).unwrap();
        let r = distance(&d.empty(), &d.full(), DistanceMode::Plain, Caps::chords(2)).unwrap();
        let v = r.value.unwrap();
        assert!(v >= 1);
        let w = r.witness.unwrap();
        assert_eq!(w.len() as u32, v);
        assert_eq!(replay(&d.empty(), &w), d.full());
        assert!(certified_lower_bound(&d.empty(), &d.full()) <= v);
    }

    #[test]
    fn cap_too_small() {
        assert_eq!(
            distance(&s1(), &s1(), DistanceMode::Plain, Caps::chords(0)),
            Err(DistanceError::CapTooSmall { chords: 1, cap: 0 })
        );
    }

    #[test]
    fn lower_bound_examples() {
        let d = MarkedDisk::new(8).unwrap();
        assert_eq!(certified_lower_bound(&s1(), &s1()), 0);
        assert_eq!(certified_lower_bound(&s1(), &d.empty()), 1);
        assert_eq!(certified_lower_bound(&d.full(), &d.empty()), 2);
    }
}
