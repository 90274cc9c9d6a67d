use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::layout::{bit, cyc};
use super::{DiskError, End, Subsurface};
use crate::Quarters;

/// Edge supports and minimal connected pairs of each component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityProfile {
    pub components: Vec<ComponentPairs>,
    pub all_pairs: BTreeSet<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPairs {
    pub edge_support: Vec<u32>,
    pub pairs: Vec<(u32, u32)>,
}

impl Subsurface {
    /// Rebuild from an arbitrary list of non-crossing chords.
    pub(crate) fn from_chord_list(n: u32, chords: &[(End, End)], x1_in: bool) -> Subsurface {
        let mut tagged: Vec<(End, usize)> = Vec::with_capacity(chords.len() * 2);
        for (c, &(a, b)) in chords.iter().enumerate() {
            tagged.push((a, c));
            tagged.push((b, c));
        }
        tagged.sort_unstable();
        let mut first = vec![usize::MAX; chords.len()];
        let mut partner = vec![0u32; tagged.len()];
        for (pos, &(_, c)) in tagged.iter().enumerate() {
            if first[c] == usize::MAX {
                first[c] = pos;
            } else {
                partner[pos] = first[c] as u32;
                partner[first[c]] = pos as u32;
            }
        }
        let ends = relabel(tagged.iter().map(|t| t.0.edge));
        Subsurface::from_parts(n, ends, partner, x1_in)
    }

    /// Keep only the endpoints flagged in `keep`; the matching restricted to them
    /// must be closed under `partner`.
    pub(crate) fn keep_ends(&self, keep: &[bool], x1_in: bool) -> Subsurface {
        let mut new_index = vec![usize::MAX; self.end_count()];
        let mut edges = Vec::new();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                new_index[i] = edges.len();
                edges.push(self.ends()[i].edge);
            }
        }
        let partner = (0..self.end_count())
            .filter(|&i| keep[i])
            .map(|i| new_index[self.partner(i)] as u32)
            .collect();
        Subsurface::from_parts(self.point_count(), relabel(edges.into_iter()), partner, x1_in)
    }

    /// The closure of the complement.
    pub fn complement(&self) -> Subsurface {
        Subsurface::from_parts(
            self.point_count(),
            self.ends().to_vec(),
            (0..self.end_count()).map(|i| self.partner(i) as u32).collect(),
            !self.x1_in(),
        )
    }

    /// Arcs lying on the small side of chord `(lo, hi)`.
    pub(crate) fn small_side_arcs(&self, lo: usize, hi: usize) -> Vec<usize> {
        let m = self.end_count();
        if self.inner_point_count(lo, hi) <= 1 {
            (lo..hi).collect()
        } else {
            (hi..m).chain(0..lo).collect()
        }
    }

    /// Delete every inessential chord, keeping the color seen from the surviving boundary.
    pub fn essential_part(&self) -> Subsurface {
        let chords = self.chords();
        let dead: Vec<(usize, usize)> =
            chords.iter().copied().filter(|&(a, b)| !self.is_essential_chord(a, b)).collect();
        if dead.is_empty() {
            return self.clone();
        }
        let mut keep = vec![true; self.end_count()];
        for &(a, b) in &dead {
            keep[a] = false;
            keep[b] = false;
        }
        let x1_in = match (0..self.end_count()).rev().find(|&i| keep[i]) {
            Some(last) => self.arc_inside(last),
            None => {
                let mut covered = vec![false; self.end_count()];
                for &(a, b) in &dead {
                    for t in self.small_side_arcs(a, b) {
                        covered[t] = true;
                    }
                }
                match covered.iter().position(|c| !c) {
                    Some(t) => self.arc_inside(t),
                    None => self.x1_in(),
                }
            }
        };
        self.keep_ends(&keep, x1_in)
    }

    /// `#regions in Ω − (2·#chords + #points in Ω)/4` without essentializing.
    pub fn raw_chi(&self) -> Quarters {
        let layout = self.layout();
        let regions = layout.regions.iter().filter(|r| r.inside).count() as i64;
        let points = (1..=self.point_count()).filter(|&i| self.point_inside(i)).count() as i64;
        Quarters(4 * regions - 2 * self.chord_count() as i64 - points)
    }

    /// Adjusted Euler characteristic of the essential part.
    pub fn adjusted_chi(&self) -> Quarters {
        self.essential_part().raw_chi()
    }

    /// Remove one empty rectangle region bounded by two distinct chords.
    pub(crate) fn remove_rectangle(&self, region: usize) -> Subsurface {
        let layout = self.layout();
        let r = &layout.regions[region];
        let mut keep = vec![true; self.end_count()];
        for &c in &r.chords {
            let (a, b) = layout.chords[c];
            keep[a] = false;
            keep[b] = false;
        }
        self.keep_ends(&keep, self.x1_in())
    }

    pub(crate) fn rectangle_regions(&self) -> Vec<usize> {
        let layout = self.layout();
        (0..layout.regions.len()).filter(|&r| layout.regions[r].is_empty_rectangle(self)).collect()
    }

    /// Hat normal form: essential part with empty rectangles eliminated, outermost first.
    pub fn hat(&self) -> Subsurface {
        let mut cur = self.essential_part();
        loop {
            let layout = cur.layout();
            let pick = (0..layout.regions.len())
                .filter(|&r| layout.regions[r].is_empty_rectangle(&cur))
                .min_by_key(|&r| {
                    layout.regions[r].chords.iter().map(|&c| layout.chords[c].0).min().unwrap()
                });
            match pick {
                Some(r) => cur = cur.remove_rectangle(r),
                None => return cur,
            }
        }
    }

    /// Hat normal form with eliminations chosen by `choose(candidates_len)`.
    pub fn hat_with_order(&self, mut choose: impl FnMut(usize) -> usize) -> Subsurface {
        let mut cur = self.essential_part();
        loop {
            let rects = cur.rectangle_regions();
            if rects.is_empty() {
                return cur;
            }
            let r = rects[choose(rects.len()) % rects.len()];
            cur = cur.remove_rectangle(r);
        }
    }

    /// Image under the homeomorphism shifting marked points by `steps`.
    pub fn rotate(&self, steps: i64) -> Result<Subsurface, DiskError> {
        if steps % 2 != 0 {
            return Err(DiskError::OddStep(steps));
        }
        let n = self.point_count();
        let x1_in = self.point_inside(cyc(1 - steps, n));
        let chords: Vec<(End, End)> = self
            .chords()
            .into_iter()
            .map(|(a, b)| {
                let shift = |e: End| End::new(cyc(e.edge as i64 + steps, n), e.slot);
                (shift(self.ends()[a]), shift(self.ends()[b]))
            })
            .collect();
        Ok(Subsurface::from_chord_list(n, &chords, x1_in))
    }

    /// Minimal connected pairs of each component and their union `M(Ω)`.
    pub fn minimal_connected_pairs(&self) -> ConnectivityProfile {
        let n = self.point_count();
        let layout = self.layout();
        let mut components = Vec::new();
        let mut all_pairs = BTreeSet::new();
        for r in layout.regions.iter().filter(|r| r.inside) {
            let pairs = minimal_pairs(n, r.edges);
            all_pairs.extend(pairs.iter().copied());
            components.push(ComponentPairs {
                edge_support: (1..=n).filter(|&e| r.edges & bit(e) != 0).collect(),
                pairs,
            });
        }
        ConnectivityProfile { components, all_pairs }
    }

    /// Set of minimal connected pairs `M(Ω)`.
    pub fn m_set(&self) -> BTreeSet<(u32, u32)> {
        self.minimal_connected_pairs().all_pairs
    }

    /// Sub-surface made of the given components only (region indices of the layout).
    pub fn restrict(&self, components: &[usize]) -> Subsurface {
        let layout = self.layout();
        let chosen: Vec<usize> =
            components.iter().copied().filter(|&r| layout.regions[r].inside).collect();
        self.from_regions(&chosen)
    }

    /// Subsurface whose regions are exactly the listed regions of this diagram,
    /// regardless of their current color. Chords between two chosen or two
    /// unchosen regions disappear.
    pub fn from_regions(&self, regions: &[usize]) -> Subsurface {
        let layout = self.layout();
        let chosen = |r: usize| regions.contains(&r);
        let mut keep = vec![false; self.end_count()];
        for (c, &(a, b)) in layout.chords.iter().enumerate() {
            let (x, y) = layout.chord_sides(c);
            if chosen(x) != chosen(y) {
                keep[a] = true;
                keep[b] = true;
            }
        }
        let x1_region = if self.end_count() == 0 { 0 } else { layout.arc_region[self.end_count() - 1] };
        self.keep_ends(&keep, chosen(x1_region))
    }
}

fn relabel(edges: impl Iterator<Item = u32>) -> Vec<End> {
    let mut out: Vec<End> = Vec::new();
    for e in edges {
        let slot = match out.last() {
            Some(p) if p.edge == e => p.slot + 1,
            _ => 0,
        };
        out.push(End::new(e, slot));
    }
    out
}

pub(crate) fn cyclic_distance(i: u32, j: u32, n: u32) -> u32 {
    let d = i.abs_diff(j);
    d.min(n - d)
}

/// Minimal connected pairs for one component with the given edge support.
///
/// Pairs are unordered in both clauses of the minimality test.
pub(crate) fn minimal_pairs(n: u32, support: u64) -> Vec<(u32, u32)> {
    let connected = |a: u32, b: u32| {
        cyclic_distance(a, b, n) >= 3 && support & bit(a) != 0 && support & bit(b) != 0
    };
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            if !connected(i, j) {
                continue;
            }
            let inner_free = (i + 1..j).all(|k| !connected(i, k) && !connected(k, j));
            let outer_free =
                (1..i).chain(j + 1..=n).all(|k| !connected(k, i) && !connected(j, k));
            if inner_free || outer_free {
                out.push((i, j));
            }
        }
    }
    out
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
    fn complement_examples() {
        let d = MarkedDisk::new(8).unwrap();
        assert_eq!(d.empty().complement(), d.full());
        let c = s1().complement();
        assert!(c.x1_in());
        assert_eq!(c.complement(), s1());
    }

    #[test]
    fn essential_part_examples() {
        assert_eq!(s1().essential_part(), s1());
        let d = MarkedDisk::new(8).unwrap();
        // empty disk cut off on e_2, colored IN, outside OUT
        let bubble = raw(8, &[((2, 0), (2, 1))], false);
        assert!(bubble.layout().regions[0].inside);
        assert_eq!(bubble.essential_part(), d.empty());
        // disk around x_2, IN, rest OUT
        let around = raw(8, &[((1, 0), (2, 0))], false);
        assert!(around.point_inside(2));
        assert_eq!(around.essential_part(), d.empty());
    }

    #[test]
    fn chi_examples() {
        let d = MarkedDisk::new(8).unwrap();
        assert_eq!(d.full().adjusted_chi(), Quarters(-4));
        assert_eq!(d.empty().adjusted_chi(), Quarters::ZERO);
        assert_eq!(s1().adjusted_chi(), Quarters(-1));
        let rect = raw(8, &[((1, 0), (3, 0))], false);
        assert!(rect.point_inside(2) && rect.point_inside(3));
        assert_eq!(rect.adjusted_chi(), Quarters::ZERO);
    }

    #[test]
    fn hat_examples() {
        assert_eq!(s1().hat(), s1());
        let pair = raw(8, &[((1, 0), (4, 1)), ((1, 1), (4, 0))], true);
        assert_eq!(pair.hat(), MarkedDisk::new(8).unwrap().full());
        let rect = raw(8, &[((1, 0), (3, 0))], false);
        assert_eq!(rect.hat(), rect);
    }

    #[test]
    fn rotate_examples() {
        let d = MarkedDisk::new(8).unwrap();
        assert_eq!(d.empty().rotate(2).unwrap(), d.empty());
        let r = s1().rotate(2).unwrap();
        assert_eq!(r, raw(8, &[((3, 0), (6, 0))], false));
        let inside: Vec<u32> = (1..=8).filter(|&i| r.point_inside(i)).collect();
        assert_eq!(inside, vec![4, 5, 6]);
        assert_eq!(s1().rotate(8).unwrap(), s1());
        assert_eq!(s1().rotate(-2).unwrap().rotate(2).unwrap(), s1());
        assert_eq!(s1().rotate(3), Err(DiskError::OddStep(3)));
    }

    #[test]
    fn rotate_moves_x1_membership() {
        let s = raw(8, &[((7, 0), (8, 0))], false);
        assert!(s.point_inside(8));
        let r = s.rotate(2).unwrap();
        assert_eq!(r, raw(8, &[((1, 0), (2, 0))], false));
        assert!(r.point_inside(2));
    }

    #[test]
    fn minimal_pairs_examples() {
        let p = s1().minimal_connected_pairs();
        assert_eq!(p.components.len(), 1);
        assert_eq!(p.components[0].edge_support, vec![1, 2, 3, 4]);
        assert_eq!(p.all_pairs.into_iter().collect::<Vec<_>>(), vec![(1, 4)]);
        let d = MarkedDisk::new(8).unwrap();
        assert!(d.empty().m_set().is_empty());
        let full: Vec<_> = d.full().m_set().into_iter().collect();
        assert_eq!(full, vec![(1, 4), (1, 6), (2, 5), (2, 7), (3, 6), (3, 8), (4, 7), (5, 8)]);
    }

    #[test]
    fn restrict_keeps_chosen_components() {
        // two IN slivers separated by an OUT band
        let s = raw(8, &[((1, 0), (3, 0)), ((5, 0), (7, 0))], false);
        let l = s.layout();
        let comps = l.components();
        assert_eq!(comps.len(), 2);
        let a = s.restrict(&comps[..1]);
        let b = s.restrict(&comps[1..]);
        assert_eq!(a.chord_count(), 1);
        assert_eq!(b.chord_count(), 1);
        assert_eq!(s.restrict(&comps), s);
        assert_eq!(s.restrict(&[]), MarkedDisk::new(8).unwrap().empty());
    }
}
