//! The eight elementary moves, their application with component lineage,
//! and exhaustive successor enumeration.

mod distance;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disk::word::Word;
use crate::disk::{Gap, Layout, Subsurface};

pub use distance::{certified_lower_bound, distance, Caps, DistanceError, DistanceMode, DistanceResult};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum MoveKind {
    Surgery1,
    Surgery2,
    BdrySurgery1,
    BdrySurgery2,
    DiskAdd,
    DiskElim,
    NullAdd,
    NullElim,
}

impl MoveKind {
    pub const ALL: [MoveKind; 8] = [
        MoveKind::Surgery1,
        MoveKind::Surgery2,
        MoveKind::BdrySurgery1,
        MoveKind::BdrySurgery2,
        MoveKind::DiskAdd,
        MoveKind::DiskElim,
        MoveKind::NullAdd,
        MoveKind::NullElim,
    ];

    /// Surgeries and boundary surgeries count towards equivalence-class length.
    pub fn is_counted(self) -> bool {
        matches!(
            self,
            MoveKind::Surgery1 | MoveKind::Surgery2 | MoveKind::BdrySurgery1 | MoveKind::BdrySurgery2
        )
    }

    /// Change in chord count.
    pub fn chord_delta(self) -> i32 {
        match self {
            MoveKind::Surgery1 | MoveKind::BdrySurgery2 => 0,
            MoveKind::Surgery2 | MoveKind::DiskAdd => 1,
            MoveKind::BdrySurgery1 | MoveKind::DiskElim => -1,
            MoveKind::NullAdd => 2,
            MoveKind::NullElim => -2,
        }
    }
}

/// A location on the boundary polygon of a region.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Chord(usize),
    Gap(Gap),
    End(usize),
    Point(u32),
}

/// One elementary move with the data locating its arc.
///
/// `split` is used only by disk eliminations: `[0]` removes the chord's side
/// away from `x_1`, `[1]` the side containing `x_1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct ElementaryMove {
    pub kind: MoveKind,
    pub region: usize,
    pub positions: Vec<Position>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub split: Vec<u8>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("region {0} does not exist")]
    NoSuchRegion(usize),
    #[error("move data does not fit its kind: {0}")]
    Malformed(&'static str),
    #[error("position {0:?} is not on the boundary of region {1}")]
    NotInRegion(Position, usize),
    #[error("move precondition fails: {0}")]
    Precondition(&'static str),
}

/// Result of applying a move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub result: Subsurface,
    /// `(old region, new region)` pairs linking components across the move.
    pub links: Vec<(usize, usize)>,
}

fn chord_in(layout: &Layout, region: usize, c: usize) -> Result<(usize, usize), MoveError> {
    if layout.regions[region].chords.contains(&c) {
        Ok(layout.chords[c])
    } else {
        Err(MoveError::NotInRegion(Position::Chord(c), region))
    }
}

fn gap_in(layout: &Layout, region: usize, g: Gap) -> Result<Gap, MoveError> {
    if layout.regions[region].gaps.contains(&g) {
        Ok(g)
    } else {
        Err(MoveError::NotInRegion(Position::Gap(g), region))
    }
}

/// Of the two non-crossing matchings of four sorted positions, the one that
/// avoids the pair `avoid`.
fn repair(mut four: [usize; 4], avoid: (usize, usize)) -> [(usize, usize); 2] {
    four.sort_unstable();
    let [a, b, c, d] = four;
    let norm = |x: usize, y: usize| (x.min(y), x.max(y));
    let avoid = norm(avoid.0, avoid.1);
    if avoid == (a, b) || avoid == (c, d) {
        [(a, d), (b, c)]
    } else {
        [(a, b), (c, d)]
    }
}

/// Apply a move, validating that it is available.
pub fn apply(s: &Subsurface, mv: &ElementaryMove) -> Result<Transition, MoveError> {
    let layout = s.layout();
    let r = mv.region;
    if r >= layout.regions.len() {
        return Err(MoveError::NoSuchRegion(r));
    }
    let mut w = Word::new(s);
    let chord_of_end = &layout.chord_of_end;
    match (mv.kind, mv.positions.as_slice()) {
        (MoveKind::Surgery1, &[Position::Chord(c1), Position::Chord(c2)]) => {
            if c1 == c2 {
                return Err(MoveError::Precondition("surgery needs two distinct chords"));
            }
            let (a, b) = chord_in(&layout, r, c1)?;
            let (c, d) = chord_in(&layout, r, c2)?;
            let pairs = repair([a, b, c, d], (a, b));
            for (x, y) in pairs {
                let id = w.fresh_chord();
                w.set_chord(x, id);
                w.set_chord(y, id);
            }
        }
        (MoveKind::Surgery2, &[Position::Chord(c), Position::Gap(g)]) => {
            let (a, b) = chord_in(&layout, r, c)?;
            gap_in(&layout, r, g)?;
            let (u, v) = (w.fresh_chord(), w.fresh_chord());
            w.insert_at_gap(g, &[u, v]);
            let before_a = (g.edge, g.slot) <= (s.ends()[a].edge, s.ends()[a].slot);
            let after_b = (g.edge, g.slot) > (s.ends()[b].edge, s.ends()[b].slot);
            if before_a || after_b {
                // u v a b or a b u v: nest the pairs
                w.set_chord(a, v);
                w.set_chord(b, u);
            } else {
                w.set_chord(a, u);
                w.set_chord(b, v);
            }
        }
        (MoveKind::BdrySurgery1, &[Position::End(t), Position::End(t2)]) => {
            if t2 != t + 1 || t2 >= s.end_count() {
                return Err(MoveError::Malformed("boundary surgery needs consecutive ends"));
            }
            if layout.arc_region[t] != r {
                return Err(MoveError::NotInRegion(Position::End(t), r));
            }
            if s.arc_point_count(t) != 0 {
                return Err(MoveError::Precondition("ends are separated by a marked point"));
            }
            if chord_of_end[t] == chord_of_end[t2] {
                return Err(MoveError::Precondition("ends belong to one chord"));
            }
            let (pa, pb) = (s.partner(t), s.partner(t2));
            w.remove_end(t);
            w.remove_end(t2);
            let id = w.fresh_chord();
            w.set_chord(pa, id);
            w.set_chord(pb, id);
        }
        (MoveKind::BdrySurgery2, &[Position::End(t), Position::Point(i)]) => {
            if t >= s.end_count() {
                return Err(MoveError::Malformed("no such end"));
            }
            let e = s.ends()[t];
            let m = s.end_count();
            let n = s.point_count();
            let first_after = e.edge == i && e.slot == 0;
            let last_before = i == e.edge % n + 1 && (t + 1 == m || s.ends()[t + 1].edge != e.edge);
            if !(first_after || last_before) {
                return Err(MoveError::Precondition("end is not adjacent to the point"));
            }
            let arc = if first_after { (t + m - 1) % m } else { t };
            if layout.arc_region[arc] != r {
                return Err(MoveError::NotInRegion(Position::Point(i), r));
            }
            w.slide_across(t, i);
        }
        (MoveKind::DiskAdd, &[Position::Gap(g)]) => {
            gap_in(&layout, r, g)?;
            let id = w.fresh_chord();
            w.insert_at_gap(g, &[id, id]);
        }
        (MoveKind::DiskAdd, &[Position::Point(i)]) => {
            if i == 0 || i > s.point_count() {
                return Err(MoveError::Malformed("no such point"));
            }
            if layout.regions[r].points & (1 << (i - 1)) == 0 {
                return Err(MoveError::NotInRegion(Position::Point(i), r));
            }
            let id = w.fresh_chord();
            w.surround_point(i, id);
        }
        (MoveKind::DiskElim, &[Position::Chord(c)]) => {
            let side = match mv.split.as_slice() {
                [0] => false,
                [1] => true,
                _ => return Err(MoveError::Malformed("disk elimination needs split [0] or [1]")),
            };
            let Some(&(a, b)) = layout.chords.get(c) else {
                return Err(MoveError::Malformed("no such chord"));
            };
            let (inner, outer) = layout.chord_sides(c);
            let (region, empty, points) = if side {
                let pts = s.point_count() - s.inner_point_count(a, b);
                (outer, a == 0 && b + 1 == s.end_count(), pts)
            } else {
                (inner, b == a + 1, s.inner_point_count(a, b))
            };
            if region != r {
                return Err(MoveError::NotInRegion(Position::Chord(c), r));
            }
            if !empty || points > 1 {
                return Err(MoveError::Precondition("eliminated side is not an empty disk"));
            }
            w.flip_points(layout.regions[region].points);
            w.remove_end(a);
            w.remove_end(b);
        }
        (MoveKind::NullAdd, &[Position::Gap(g1), Position::Gap(g2)]) => {
            gap_in(&layout, r, g1)?;
            gap_in(&layout, r, g2)?;
            if g1 > g2 {
                return Err(MoveError::Malformed("null addition gaps must be ordered"));
            }
            let (u, v) = (w.fresh_chord(), w.fresh_chord());
            if g1 == g2 {
                w.insert_at_gap(g1, &[u, v, v, u]);
            } else {
                w.insert_at_gap(g1, &[u, v]);
                w.insert_at_gap(g2, &[v, u]);
            }
        }
        (MoveKind::NullElim, &[Position::Chord(c1), Position::Chord(c2)]) => {
            let region = &layout.regions[r];
            if !region.is_empty_rectangle(s) {
                return Err(MoveError::Precondition("region is not an empty rectangle"));
            }
            let mut cs = region.chords.clone();
            cs.sort_unstable();
            if cs != [c1.min(c2), c1.max(c2)] {
                return Err(MoveError::Malformed("chords do not bound the rectangle"));
            }
            for c in cs {
                let (a, b) = layout.chords[c];
                w.remove_end(a);
                w.remove_end(b);
            }
        }
        _ => return Err(MoveError::Malformed("positions do not match move kind")),
    }
    let result = w.finish();
    let links = w.lineage(&result);
    Ok(Transition { result, links })
}

/// Successor states of a subsurface.
#[derive(Clone, Debug, Default)]
pub struct Successors {
    /// One representative move per distinct result, in enumeration order.
    pub moves: Vec<(ElementaryMove, Subsurface)>,
    /// Number of distinct results excluded by the chord cap.
    pub capped: usize,
    /// Largest chord count among excluded results.
    pub max_capped_chords: usize,
}

/// Every move available up to isotopy, in deterministic order.
pub fn candidate_moves(s: &Subsurface) -> Vec<ElementaryMove> {
    let layout = s.layout();
    let mut out = Vec::new();
    let mk = |kind, region, positions: Vec<Position>, split: Vec<u8>| ElementaryMove {
        kind,
        region,
        positions,
        split,
    };
    for (r, region) in layout.regions.iter().enumerate() {
        let mut chords = region.chords.clone();
        chords.sort_unstable();
        chords.dedup();
        for (i, &c1) in chords.iter().enumerate() {
            for &c2 in &chords[i + 1..] {
                out.push(mk(MoveKind::Surgery1, r, vec![Position::Chord(c1), Position::Chord(c2)], vec![]));
            }
        }
        for &c in &chords {
            for &g in &region.gaps {
                out.push(mk(MoveKind::Surgery2, r, vec![Position::Chord(c), Position::Gap(g)], vec![]));
            }
        }
        for &t in &region.arcs {
            let t2 = t + 1;
            if t2 < s.end_count()
                && s.arc_point_count(t) == 0
                && layout.chord_of_end[t] != layout.chord_of_end[t2]
            {
                out.push(mk(MoveKind::BdrySurgery1, r, vec![Position::End(t), Position::End(t2)], vec![]));
            }
        }
        let n = s.point_count();
        let m = s.end_count();
        for &t in &region.arcs {
            // arc t runs from end t to end t+1: the points at its two extremities
            if s.arc_point_count(t) > 0 {
                let e = s.ends()[t].edge;
                out.push(mk(
                    MoveKind::BdrySurgery2,
                    r,
                    vec![Position::End(t), Position::Point(e % n + 1)],
                    vec![],
                ));
                let next = (t + 1) % m;
                out.push(mk(
                    MoveKind::BdrySurgery2,
                    r,
                    vec![Position::End(next), Position::Point(s.ends()[next].edge)],
                    vec![],
                ));
            }
        }
        for &g in &region.gaps {
            out.push(mk(MoveKind::DiskAdd, r, vec![Position::Gap(g)], vec![]));
        }
        for i in 1..=n {
            if region.points & (1 << (i - 1)) != 0 {
                out.push(mk(MoveKind::DiskAdd, r, vec![Position::Point(i)], vec![]));
            }
        }
        for (i, &g1) in region.gaps.iter().enumerate() {
            for &g2 in &region.gaps[i..] {
                let (a, b) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
                out.push(mk(MoveKind::NullAdd, r, vec![Position::Gap(a), Position::Gap(b)], vec![]));
            }
        }
        if region.is_empty_rectangle(s) {
            out.push(mk(
                MoveKind::NullElim,
                r,
                vec![Position::Chord(chords[0]), Position::Chord(chords[1])],
                vec![],
            ));
        }
    }
    for (c, &(a, b)) in layout.chords.iter().enumerate() {
        let (inner, outer) = layout.chord_sides(c);
        if b == a + 1 && s.inner_point_count(a, b) <= 1 {
            out.push(mk(MoveKind::DiskElim, inner, vec![Position::Chord(c)], vec![0]));
        }
        if a == 0 && b + 1 == s.end_count() && s.point_count() - s.inner_point_count(a, b) <= 1 {
            out.push(mk(MoveKind::DiskElim, outer, vec![Position::Chord(c)], vec![1]));
        }
    }
    out
}

/// Distinct successors with at most `max_chords` chords.
pub fn successors(s: &Subsurface, max_chords: usize) -> Successors {
    let mut seen = HashSet::new();
    let mut out = Successors::default();
    for mv in candidate_moves(s) {
        let t = apply(s, &mv).expect("enumerated moves apply");
        if t.result == *s || !seen.insert(t.result.clone()) {
            continue;
        }
        if t.result.chord_count() > max_chords {
            out.capped += 1;
            out.max_capped_chords = out.max_capped_chords.max(t.result.chord_count());
        } else {
            out.moves.push((mv, t.result));
        }
    }
    out
}

/// A move from `from` to `to`, if one exists.
pub fn find_move(from: &Subsurface, to: &Subsurface) -> Option<ElementaryMove> {
    if to.chord_count().abs_diff(from.chord_count()) > 2 {
        return None;
    }
    candidate_moves(from)
        .into_iter()
        .find(|mv| apply(from, mv).map(|t| t.result == *to).unwrap_or(false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disk::{canonicalize, MarkedDisk, RawSubsurface};

    fn raw(n: u32, chords: &[((u32, u32), (u32, u32))], x1_in: bool) -> Subsurface {
        canonicalize(&RawSubsurface::new(n, chords, x1_in)).unwrap()
    }

    fn s1() -> Subsurface {
        raw(8, &[((1, 0), (4, 0))], false)
    }

    #[test]
    fn empty_disk_has_disk_additions_and_no_surgeries() {
        let d = MarkedDisk::new(4).unwrap().empty();
        let succ = successors(&d, 4);
        assert!(succ.moves.iter().all(|(m, _)| !m.kind.is_counted()));
        let bubble = raw(4, &[((1, 0), (1, 1))], false);
        assert!(bubble.layout().regions[0].inside);
        assert!(succ
            .moves
            .iter()
            .any(|(m, r)| m.kind == MoveKind::DiskAdd && *r == bubble));
    }

    #[test]
    fn surgery2_splits_s1_and_boundary_surgery_merges_back() {
        let s = s1();
        let layout = s.layout();
        let inner = layout.arc_region[0];
        assert!(layout.regions[inner].inside);
        let mv = ElementaryMove {
            kind: MoveKind::Surgery2,
            region: inner,
            positions: vec![Position::Chord(0), Position::Gap(Gap::new(3, 0))],
            split: vec![],
        };
        let t = apply(&s, &mv).unwrap();
        assert_eq!(t.result, raw(8, &[((1, 0), (3, 0)), ((3, 1), (4, 0))], false));
        let split = t.result.clone();
        let back = ElementaryMove {
            kind: MoveKind::BdrySurgery1,
            region: split.layout().arc_region[1],
            positions: vec![Position::End(1), Position::End(2)],
            split: vec![],
        };
        assert!(!split.arc_inside(1));
        assert_eq!(apply(&split, &back).unwrap().result, s);
        // the inner component splits into two
        assert_eq!(t.links.len(), 2);
    }

    #[test]
    fn surgery2_outside_the_chord() {
        // cut the outer region of S1 at e_6: x1 stays outside
        let s = s1();
        let outer = s.layout().arc_region[1];
        let mv = ElementaryMove {
            kind: MoveKind::Surgery2,
            region: outer,
            positions: vec![Position::Chord(0), Position::Gap(Gap::new(6, 0))],
            split: vec![],
        };
        let r = apply(&s, &mv).unwrap().result;
        assert_eq!(r, raw(8, &[((1, 0), (6, 1)), ((4, 0), (6, 0))], false));
    }

    #[test]
    fn every_move_has_an_inverse() {
        for s in crate::enumerate::enumerate_subsurfaces(6, 2, false) {
            for (_, t) in successors(&s, 4).moves {
                assert!(find_move(&t, &s).is_some(), "{s:?} -> {t:?} has no inverse");
            }
        }
    }

    #[test]
    fn disk_add_at_x1_flips_it() {
        let d = MarkedDisk::new(6).unwrap().empty();
        let mv = ElementaryMove {
            kind: MoveKind::DiskAdd,
            region: 0,
            positions: vec![Position::Point(1)],
            split: vec![],
        };
        let r = apply(&d, &mv).unwrap().result;
        assert!(r.point_inside(1));
        assert_eq!((2..=6).filter(|&i| r.point_inside(i)).count(), 0);
        assert_eq!(r, raw(6, &[((1, 0), (6, 0))], true));
    }

    #[test]
    fn null_add_then_elim_is_identity() {
        let s = s1();
        let inner = s.layout().arc_region[0];
        let mv = ElementaryMove {
            kind: MoveKind::NullAdd,
            region: inner,
            positions: vec![Position::Gap(Gap::new(2, 0)), Position::Gap(Gap::new(4, 0))],
            split: vec![],
        };
        let t = apply(&s, &mv).unwrap().result;
        assert_eq!(t.chord_count(), 3);
        assert_eq!(t.hat(), s);
        let back = find_move(&t, &s).unwrap();
        assert_eq!(back.kind, MoveKind::NullElim);
    }

    #[test]
    fn invalid_moves_are_rejected() {
        let s = s1();
        let bad = ElementaryMove { kind: MoveKind::NullElim, region: 0, positions: vec![], split: vec![] };
        assert!(apply(&s, &bad).is_err());
        let bad = ElementaryMove {
            kind: MoveKind::DiskElim,
            region: 0,
            positions: vec![Position::Chord(0)],
            split: vec![0],
        };
        assert!(matches!(apply(&s, &bad), Err(MoveError::Precondition(_))));
        assert!(matches!(
            apply(&s, &ElementaryMove { kind: MoveKind::DiskAdd, region: 7, positions: vec![], split: vec![] }),
            Err(MoveError::NoSuchRegion(7))
        ));
    }

    #[test]
    fn move_json_shape() {
        let mv = ElementaryMove {
            kind: MoveKind::Surgery2,
            region: 0,
            positions: vec![Position::Chord(0), Position::Gap(Gap::new(3, 0))],
            split: vec![],
        };
        let v = serde_json::to_value(&mv).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"kind":"Surgery2","region":0,"positions":[{"chord":0},{"gap":{"edge":3,"slot":0}}]})
        );
        let back: ElementaryMove = serde_json::from_value(v).unwrap();
        assert_eq!(back, mv);
    }
}
