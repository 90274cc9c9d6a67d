//! Splitting of twisted paths by integer labels on lineage classes, and the
//! explicit-constant cyclic obstruction.
//!
//! Components of the states are tied together across moves by their lineage
//! links; each resulting class must receive one integer label. Rotating the
//! first state onto the last sends a component labelled `n` to one labelled
//! `n - 1`. A labelling exists iff every cycle of these constraints has zero
//! total weight.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::{DiscretePath, PathError};
use crate::disk::{cyc_point, Subsurface};
use crate::Quarters;

/// `|χ(Ω)| ≤ 2·max(|χ(Ω_even)|, |χ(Ω_odd)|)`; each half moves disjointly from
/// the rotation of the other, so `|χ| ≤ 6·(hat distance)` for it; one move
/// changes hat distance by at most 3. Hence `2·6·3`.
pub const OBSTRUCTION_CONSTANT: i64 = 36;

/// A component: `(state index, region index)`.
pub type Node = (usize, usize);

/// The rotation sends `start` in the first state to `end` in the last state,
/// so the label of `end`'s class is one less than the label of `start`'s.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ConstraintEdge {
    pub start: Node,
    pub end: Node,
}

/// A closed walk of constraints with nonzero total weight.
///
/// Consecutive edges are joined by lineage: the exit node of each traversed
/// edge lies in the same class as the entry node of the next, cyclically.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct NoSplitting {
    /// Edges with traversal direction (`true` = from `start` to `end`).
    pub cycle: Vec<(ConstraintEdge, bool)>,
}

/// Labels on lineage classes satisfying every rotation constraint.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SplittingCertificate {
    pub twist: i64,
    /// Each class as its member components.
    pub classes: Vec<Vec<Node>>,
    pub labels: Vec<i64>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum SplittingResult {
    Splits(SplittingCertificate),
    NoSplitting(NoSplitting),
}

fn inside_nodes(path: &DiscretePath) -> Vec<Node> {
    let mut nodes = Vec::new();
    for (i, s) in path.states().iter().enumerate() {
        for r in s.layout().components() {
            nodes.push((i, r));
        }
    }
    nodes
}

/// Lineage classes as a map from component to class index.
fn lineage_classes(path: &DiscretePath) -> (BTreeMap<Node, usize>, Vec<Vec<Node>>) {
    let nodes = inside_nodes(path);
    let index: BTreeMap<Node, usize> = nodes.iter().enumerate().map(|(k, &n)| (n, k)).collect();
    let mut adj = vec![Vec::new(); nodes.len()];
    for (i, links) in path.lineage().iter().enumerate() {
        for &(a, b) in links {
            let (x, y) = (index[&(i, a)], index[&(i + 1, b)]);
            adj[x].push(y);
            adj[y].push(x);
        }
    }
    let mut class = vec![usize::MAX; nodes.len()];
    let mut classes = Vec::new();
    for s in 0..nodes.len() {
        if class[s] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = Vec::new();
        let mut queue = VecDeque::from([s]);
        class[s] = id;
        while let Some(x) = queue.pop_front() {
            members.push(nodes[x]);
            for &y in &adj[x] {
                if class[y] == usize::MAX {
                    class[y] = id;
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    let of = nodes.iter().enumerate().map(|(k, &n)| (n, class[k])).collect();
    (of, classes)
}

/// Region of `end` that the rotation carries each region of `start` onto.
fn rotation_map(start: &Subsurface, end: &Subsurface, twist: i64) -> Vec<usize> {
    let ls = start.layout();
    let le = end.layout();
    if start.end_count() == 0 {
        return vec![0];
    }
    let n = start.point_count();
    ls.regions
        .iter()
        .map(|r| {
            let t = r.arcs[0];
            let e = start.ends()[t];
            let target = (cyc_point(e.edge as i64 + twist, n), e.slot);
            let t2 = end
                .ends()
                .iter()
                .position(|x| (x.edge, x.slot) == target)
                .expect("rotated endpoint exists in the rotated state");
            le.arc_region[t2]
        })
        .collect()
}

fn constraint_edges(path: &DiscretePath, twist: i64) -> Vec<ConstraintEdge> {
    let last = path.states().len() - 1;
    let map = rotation_map(path.first(), path.last(), twist);
    path.first()
        .layout()
        .components()
        .into_iter()
        .map(|r| ConstraintEdge { start: (0, r), end: (last, map[r]) })
        .collect()
}

/// Decide whether a twisted path splits.
pub fn find_splitting(path: &DiscretePath, twist: i64) -> Result<SplittingResult, PathError> {
    if path.first().rotate(twist)? != *path.last() {
        return Err(PathError::NotTwisted);
    }
    let (class_of, classes) = lineage_classes(path);
    let edges = constraint_edges(path, twist);
    // adjacency over classes: (neighbour, edge index, forward)
    let mut adj = vec![Vec::new(); classes.len()];
    for (k, e) in edges.iter().enumerate() {
        let (a, b) = (class_of[&e.start], class_of[&e.end]);
        adj[a].push((b, k, true));
        adj[b].push((a, k, false));
    }
    let mut label: Vec<Option<i64>> = vec![None; classes.len()];
    let mut parent: Vec<Option<(usize, usize, bool)>> = vec![None; classes.len()];
    for root in 0..classes.len() {
        if label[root].is_some() {
            continue;
        }
        label[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let lx = label[x].expect("queued classes are labelled");
            for &(y, k, forward) in &adj[x] {
                let want = if forward { lx - 1 } else { lx + 1 };
                match label[y] {
                    None => {
                        label[y] = Some(want);
                        parent[y] = Some((x, k, forward));
                        queue.push_back(y);
                    }
                    Some(ly) if ly != want => {
                        return Ok(SplittingResult::NoSplitting(conflict_cycle(
                            &edges, &parent, x, y, k, forward,
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(SplittingResult::Splits(SplittingCertificate {
        twist,
        classes,
        labels: label.into_iter().map(|l| l.expect("all classes labelled")).collect(),
    }))
}

/// Tree path from the root to `x`, as traversed edges.
fn tree_path(edges: &[ConstraintEdge], parent: &[Option<(usize, usize, bool)>], mut x: usize) -> Vec<(ConstraintEdge, bool)> {
    let mut out = Vec::new();
    while let Some((p, k, forward)) = parent[x] {
        out.push((edges[k], forward));
        x = p;
    }
    out.reverse();
    out
}

fn conflict_cycle(
    edges: &[ConstraintEdge],
    parent: &[Option<(usize, usize, bool)>],
    x: usize,
    y: usize,
    k: usize,
    forward: bool,
) -> NoSplitting {
    // root -> x, then x -> y, then y -> root reversed
    let mut cycle = tree_path(edges, parent, x);
    cycle.push((edges[k], forward));
    let back: Vec<_> = tree_path(edges, parent, y).into_iter().rev().map(|(e, f)| (e, !f)).collect();
    cycle.extend(back);
    NoSplitting { cycle }
}

/// Independent check that a reported cycle is a genuine obstruction.
pub fn check_no_splitting(path: &DiscretePath, twist: i64, witness: &NoSplitting) -> bool {
    if witness.cycle.is_empty() {
        return false;
    }
    let last = path.states().len() - 1;
    let first = path.first();
    // each edge must be a rotation correspondence
    for (e, _) in &witness.cycle {
        if e.start.0 != 0 || e.end.0 != last {
            return false;
        }
        let ls = first.layout();
        let le = path.last().layout();
        if !ls.regions.get(e.start.1).is_some_and(|r| r.inside) || !le.regions.get(e.end.1).is_some_and(|r| r.inside) {
            return false;
        }
        let Ok(rotated) = first.from_regions(&[e.start.1]).rotate(twist) else {
            return false;
        };
        if rotated != path.last().from_regions(&[e.end.1]) {
            return false;
        }
    }
    let connected = |a: Node, b: Node| lineage_connected(path, a, b);
    let len = witness.cycle.len();
    let mut weight = 0i64;
    for k in 0..len {
        let (e, forward) = witness.cycle[k];
        let exit = if forward { e.end } else { e.start };
        let (next, next_forward) = witness.cycle[(k + 1) % len];
        let entry = if next_forward { next.start } else { next.end };
        if !connected(exit, entry) {
            return false;
        }
        weight += if forward { -1 } else { 1 };
    }
    weight != 0
}

/// Breadth-first search over raw lineage links.
fn lineage_connected(path: &DiscretePath, a: Node, b: Node) -> bool {
    let mut seen = vec![a];
    let mut queue = VecDeque::from([a]);
    while let Some((i, r)) = queue.pop_front() {
        if (i, r) == b {
            return true;
        }
        let mut visit = |n: Node| {
            if !seen.contains(&n) {
                seen.push(n);
                queue.push_back(n);
            }
        };
        if i < path.lineage().len() {
            for &(x, y) in &path.lineage()[i] {
                if x == r {
                    visit((i + 1, y));
                }
            }
        }
        if i > 0 {
            for &(x, y) in &path.lineage()[i - 1] {
                if y == r {
                    visit((i - 1, x));
                }
            }
        }
    }
    false
}

impl SplittingCertificate {
    fn class_of(&self, node: Node) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&node))
    }

    /// The part of state `i` made of components satisfying `keep(label)`.
    pub fn slice(&self, path: &DiscretePath, i: usize, keep: impl Fn(i64) -> bool) -> Subsurface {
        let s = &path.states()[i];
        let regions: Vec<usize> = s
            .layout()
            .components()
            .into_iter()
            .filter(|&r| self.class_of((i, r)).is_some_and(|c| keep(self.labels[c])))
            .collect();
        s.from_regions(&regions)
    }

    /// `Δ_n` restricted to state `i`.
    pub fn family_slice(&self, path: &DiscretePath, i: usize, n: i64) -> Subsurface {
        self.slice(path, i, |l| l == n)
    }

    /// Labels in use, ascending.
    pub fn label_set(&self) -> Vec<i64> {
        let mut l = self.labels.clone();
        l.sort_unstable();
        l.dedup();
        l
    }

    /// Every rotation constraint holds.
    pub fn verify(&self, path: &DiscretePath) -> bool {
        for e in constraint_edges(path, self.twist) {
            match (self.class_of(e.start), self.class_of(e.end)) {
                (Some(a), Some(b)) if self.labels[b] == self.labels[a] - 1 => {}
                _ => return false,
            }
        }
        true
    }

    /// `g(Ω_even^0) = Ω_odd^1` and `g(Ω_odd^0) = Ω_even^1`.
    pub fn even_odd_holds(&self, path: &DiscretePath) -> bool {
        let last = path.states().len() - 1;
        let even = |l: i64| l.rem_euclid(2) == 0;
        let odd = |l: i64| l.rem_euclid(2) == 1;
        let rot = |s: Subsurface| s.rotate(self.twist).expect("twist validated");
        rot(self.slice(path, 0, even)) == self.slice(path, last, odd)
            && rot(self.slice(path, 0, odd)) == self.slice(path, last, even)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    NoSplitting,
}

/// Outcome of the cyclic obstruction on one path.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub splits: bool,
    pub max_abs_chi: Quarters,
    pub eq_length: usize,
    pub bound: i64,
    pub verdict: Verdict,
    /// For splitting paths: the certificate verified and the even/odd
    /// rotation identities held.
    pub certificate_checked: bool,
    pub splitting: SplittingResult,
}

/// Check `max |χ| ≤ 36·eqLength` on a path twisted by `twist`.
pub fn cyclic_obstruction_check(path: &DiscretePath, twist: i64) -> Result<ObstructionReport, PathError> {
    let splitting = find_splitting(path, twist)?;
    let max_abs_chi = path.states().iter().map(|s| s.adjusted_chi().abs()).max().unwrap_or(Quarters::ZERO);
    let eq_length = path.moves().iter().filter(|m| m.kind.is_counted()).count();
    let bound = OBSTRUCTION_CONSTANT * eq_length as i64;
    let (splits, verdict, certificate_checked) = match &splitting {
        SplittingResult::Splits(cert) => {
            let checked = cert.verify(path) && cert.even_odd_holds(path);
            let ok = max_abs_chi <= Quarters::from_int(bound);
            (true, if ok && checked { Verdict::Pass } else { Verdict::Fail }, checked)
        }
        SplittingResult::NoSplitting(w) => {
            let checked = check_no_splitting(path, twist, w);
            (false, if checked { Verdict::NoSplitting } else { Verdict::Fail }, checked)
        }
    };
    Ok(ObstructionReport { splits, max_abs_chi, eq_length, bound, verdict, certificate_checked, splitting })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::{Gap, MarkedDisk};
    use crate::moves::{apply, ElementaryMove, MoveKind, Position};

    fn d8() -> MarkedDisk {
        MarkedDisk::new(8).unwrap()
    }

    #[test]
    fn empty_splits_full_does_not() {
        let empty = DiscretePath::singleton(d8().empty());
        assert!(matches!(find_splitting(&empty, 2), Ok(SplittingResult::Splits(_))));
        let r = cyclic_obstruction_check(&empty, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let full = DiscretePath::singleton(d8().full());
        let SplittingResult::NoSplitting(w) = find_splitting(&full, 2).unwrap() else {
            panic!("full disk must not split");
        };
        assert!(check_no_splitting(&full, 2, &w));
        assert_eq!(cyclic_obstruction_check(&full, 2).unwrap().verdict, Verdict::NoSplitting);
    }

    #[test]
    fn created_and_destroyed_disk_splits() {
        let e = d8().empty();
        let add = ElementaryMove {
            kind: MoveKind::DiskAdd,
            region: 0,
            positions: vec![Position::Gap(Gap::new(3, 0))],
            split: vec![],
        };
        let mid = apply(&e, &add).unwrap().result;
        let elim = ElementaryMove { kind: MoveKind::DiskElim, region: 1, positions: vec![Position::Chord(0)], split: vec![0] };
        let elim = if apply(&mid, &elim).is_ok() { elim } else { ElementaryMove { region: 0, ..elim } };
        let path = DiscretePath::from_moves(e, vec![add, elim]).unwrap();
        let SplittingResult::Splits(cert) = find_splitting(&path, 2).unwrap() else {
            panic!("must split");
        };
        assert!(cert.verify(&path));
        assert!(cert.even_odd_holds(&path));
    }

    #[test]
    fn not_twisted_is_an_error() {
        let s = crate::disk::tests::s1();
        assert_eq!(find_splitting(&DiscretePath::singleton(s), 2), Err(PathError::NotTwisted));
    }

    #[test]
    fn forged_cycles_are_rejected() {
        let full = DiscretePath::singleton(d8().full());
        let e = ConstraintEdge { start: (0, 0), end: (0, 0) };
        assert!(!check_no_splitting(&full, 2, &NoSplitting { cycle: vec![(e, true), (e, false)] }));
        assert!(!check_no_splitting(&full, 2, &NoSplitting { cycle: vec![] }));
    }
}
