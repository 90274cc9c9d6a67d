use serde::{Deserialize, Serialize};

use super::Subsurface;

/// An insertion position on the boundary: after the first `slot` endpoints of `edge`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Gap {
    pub edge: u32,
    pub slot: u32,
}

impl Gap {
    pub fn new(edge: u32, slot: u32) -> Self {
        Gap { edge, slot }
    }
}

/// A complementary region of the chord diagram: a polygon whose sides
/// alternate between boundary arcs and chords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    /// Boundary arcs in traversal order; arc `t` runs from endpoint `t` to `t + 1`.
    pub arcs: Vec<usize>,
    /// Chords on the region boundary, as indices into [`Subsurface::chords`].
    pub chords: Vec<usize>,
    pub inside: bool,
    /// Marked points in the region, bit `i - 1` for `x_i`.
    pub points: u64,
    /// Edges the region meets, bit `e - 1` for `e_e`.
    pub edges: u64,
    pub gaps: Vec<Gap>,
}

impl Region {
    pub fn point_count(&self) -> u32 {
        self.points.count_ones()
    }

    /// Two chords and two point-free arcs: an empty rectangle.
    pub fn is_empty_rectangle(&self, s: &Subsurface) -> bool {
        self.arcs.len() == 2
            && self.chords.len() == 2
            && self.chords[0] != self.chords[1]
            && self.arcs.iter().all(|&t| s.arc_point_count(t) == 0)
    }
}

/// Region structure of a subsurface.
#[derive(Clone, Debug)]
pub struct Layout {
    pub regions: Vec<Region>,
    pub arc_region: Vec<usize>,
    pub chords: Vec<(usize, usize)>,
    pub chord_of_end: Vec<usize>,
}

pub(crate) fn bit(i: u32) -> u64 {
    1u64 << (i - 1)
}

pub(crate) fn full_mask(n: u32) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// `i` reduced cyclically into `1..=n`.
pub(crate) fn cyc(i: i64, n: u32) -> u32 {
    ((i - 1).rem_euclid(n as i64) + 1) as u32
}

impl Layout {
    pub fn new(s: &Subsurface) -> Layout {
        let n = s.point_count();
        let m = s.end_count();
        let chords = s.chords();
        let chord_of_end = s.chord_of_end();
        if m == 0 {
            let region = Region {
                arcs: Vec::new(),
                chords: Vec::new(),
                inside: s.x1_in(),
                points: full_mask(n),
                edges: full_mask(n),
                gaps: (1..=n).map(|e| Gap::new(e, 0)).collect(),
            };
            return Layout { regions: vec![region], arc_region: Vec::new(), chords, chord_of_end };
        }
        let mut arc_region = vec![usize::MAX; m];
        let mut regions = Vec::new();
        for start in 0..m {
            if arc_region[start] != usize::MAX {
                continue;
            }
            let id = regions.len();
            let mut region = Region {
                arcs: Vec::new(),
                chords: Vec::new(),
                inside: s.arc_inside(start),
                points: 0,
                edges: 0,
                gaps: Vec::new(),
            };
            let mut t = start;
            loop {
                arc_region[t] = id;
                region.arcs.push(t);
                let (pts, eds) = arc_masks(s, t);
                region.points |= pts;
                region.edges |= eds;
                region.gaps.extend(arc_gaps(s, t));
                let next_end = (t + 1) % m;
                region.chords.push(chord_of_end[next_end]);
                t = s.partner(next_end);
                if t == start {
                    break;
                }
            }
            regions.push(region);
        }
        Layout { regions, arc_region, chords, chord_of_end }
    }

    /// Region holding marked point `x_i`.
    pub fn region_of_point(&self, s: &Subsurface, i: u32) -> usize {
        self.regions.iter().position(|r| r.points & bit(i) != 0).unwrap_or_else(|| {
            panic!("point x_{i} not covered in {s:?}")
        })
    }

    /// Indices of the regions inside the subsurface (its connected components).
    pub fn components(&self) -> Vec<usize> {
        (0..self.regions.len()).filter(|&r| self.regions[r].inside).collect()
    }

    /// Region on the side of chord `c` that does not contain `x_1`, and the other one.
    pub fn chord_sides(&self, c: usize) -> (usize, usize) {
        let (lo, hi) = self.chords[c];
        (self.arc_region[lo], self.arc_region[hi])
    }
}

/// Marked points inside arc `t` and edges it meets.
pub(crate) fn arc_masks(s: &Subsurface, t: usize) -> (u64, u64) {
    let n = s.point_count();
    let a = s.ends()[t].edge;
    let count = s.arc_point_count(t);
    let mut pts = 0;
    let mut eds = bit(a);
    for m in 1..=count {
        pts |= bit(cyc(a as i64 + m as i64, n));
        eds |= bit(cyc(a as i64 + m as i64, n));
    }
    (pts, eds)
}

/// Insertion positions along arc `t`, in boundary order.
pub(crate) fn arc_gaps(s: &Subsurface, t: usize) -> Vec<Gap> {
    let n = s.point_count();
    let start = s.ends()[t];
    let count = s.arc_point_count(t);
    let mut gaps = vec![Gap::new(start.edge, start.slot + 1)];
    for m in 1..=count {
        gaps.push(Gap::new(cyc(start.edge as i64 + m as i64, n), 0));
    }
    gaps
}
