//! The marked disk `(D, P)` and isotopy classes of its subsurfaces.
//!
//! A subsurface is stored as its chord diagram: the chord endpoints listed in
//! counterclockwise order starting just after `x_1`, a perfect non-crossing
//! matching on them, and the membership bit of `x_1`. Every other region
//! color is derived by flipping across chords. Isotopy rel `P` preserves
//! exactly this data, so two subsurfaces are isotopic iff their canonical
//! encodings are equal.

mod layout;
mod ops;
mod svg;
pub(crate) mod word;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub(crate) use layout::bit as point_bit;
pub(crate) use layout::cyc as cyc_point;
pub use layout::{Gap, Layout, Region};
pub use ops::ConnectivityProfile;
pub use svg::render_svg;

/// Largest supported number of marked points (bitmask width).
pub const MAX_POINTS: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiskError {
    #[error("marked point count {0} must be even and at least 2")]
    BadPointCount(u32),
    #[error("marked point count {0} exceeds the supported maximum of {MAX_POINTS}")]
    TooManyPoints(u32),
    #[error("edge {edge} out of range 1..={n}")]
    EdgeOutOfRange { edge: u32, n: u32 },
    #[error("two chord endpoints share edge {edge} slot {slot}")]
    DuplicateEndpoint { edge: u32, slot: u32 },
    #[error("chord matching is crossing")]
    CrossingMatching,
    #[error("chord endpoint placed on marked point x_{0}")]
    EndpointOnMarkedPoint(u32),
    #[error("rotation step {0} is odd")]
    OddStep(i64),
    #[error("subsurfaces live on different disks ({0} vs {1} marked points)")]
    DiskMismatch(u32, u32),
}

/// A closed disk with `N = 2n` marked boundary points `x_1..x_N`.
///
/// Edge `e_i` runs from `x_i` to `x_{i+1}` (indices cyclic).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct MarkedDisk {
    point_count: u32,
}

impl MarkedDisk {
    /// Step of the canonical rotation `g`.
    pub const ROTATION_STEP: i64 = 2;

    pub fn new(point_count: u32) -> Result<Self, DiskError> {
        if point_count < 2 || point_count % 2 != 0 {
            return Err(DiskError::BadPointCount(point_count));
        }
        if point_count > MAX_POINTS {
            return Err(DiskError::TooManyPoints(point_count));
        }
        Ok(MarkedDisk { point_count })
    }

    pub fn point_count(&self) -> u32 {
        self.point_count
    }

    /// The empty subsurface.
    pub fn empty(&self) -> Subsurface {
        Subsurface::bare(self.point_count, false)
    }

    /// The whole disk.
    pub fn full(&self) -> Subsurface {
        Subsurface::bare(self.point_count, true)
    }
}

/// A chord endpoint: `slot` counts counterclockwise within edge `e_edge`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct End {
    pub edge: u32,
    pub slot: u32,
}

impl End {
    pub fn new(edge: u32, slot: u32) -> Self {
        End { edge, slot }
    }
}

/// Canonical isotopy class of a subsurface of a marked disk.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subsurface {
    n: u32,
    ends: Vec<End>,
    partner: Vec<u32>,
    x1_in: bool,
}

/// A chord endpoint as accepted on input: either an edge slot or a marked point.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawEnd {
    Slot([u32; 2]),
    Point { point: u32 },
}

impl From<End> for RawEnd {
    fn from(e: End) -> Self {
        RawEnd::Slot([e.edge, e.slot])
    }
}

/// Unvalidated chord data; the JSON wire format for subsurfaces.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RawSubsurface {
    #[serde(rename = "N")]
    pub n: u32,
    pub chords: Vec<[RawEnd; 2]>,
    pub x1_in: bool,
}

impl RawSubsurface {
    pub fn new(n: u32, chords: &[((u32, u32), (u32, u32))], x1_in: bool) -> Self {
        RawSubsurface {
            n,
            chords: chords
                .iter()
                .map(|&((e1, s1), (e2, s2))| [RawEnd::Slot([e1, s1]), RawEnd::Slot([e2, s2])])
                .collect(),
            x1_in,
        }
    }
}

impl TryFrom<RawSubsurface> for Subsurface {
    type Error = DiskError;
    fn try_from(raw: RawSubsurface) -> Result<Self, DiskError> {
        canonicalize(&raw)
    }
}

impl From<Subsurface> for RawSubsurface {
    fn from(s: Subsurface) -> Self {
        RawSubsurface {
            n: s.n,
            chords: s
                .chords()
                .into_iter()
                .map(|(a, b)| [s.ends[a].into(), s.ends[b].into()])
                .collect(),
            x1_in: s.x1_in,
        }
    }
}

impl Serialize for Subsurface {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        RawSubsurface::from(self.clone()).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Subsurface {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawSubsurface::deserialize(de)?;
        canonicalize(&raw).map_err(serde::de::Error::custom)
    }
}

/// Validate raw chord data and return the canonical representative.
///
/// Slot labels only matter through their order within an edge; they are
/// relabeled to `0..k`.
pub fn canonicalize(raw: &RawSubsurface) -> Result<Subsurface, DiskError> {
    let disk = MarkedDisk::new(raw.n)?;
    let n = disk.point_count();
    let mut tagged: Vec<(u32, u32, usize)> = Vec::with_capacity(raw.chords.len() * 2);
    for (c, chord) in raw.chords.iter().enumerate() {
        for end in chord {
            match *end {
                RawEnd::Point { point } => return Err(DiskError::EndpointOnMarkedPoint(point)),
                RawEnd::Slot([edge, slot]) => {
                    if edge == 0 || edge > n {
                        return Err(DiskError::EdgeOutOfRange { edge, n });
                    }
                    tagged.push((edge, slot, c));
                }
            }
        }
    }
    tagged.sort_unstable();
    for w in tagged.windows(2) {
        if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
            return Err(DiskError::DuplicateEndpoint { edge: w[0].0, slot: w[0].1 });
        }
    }
    let mut first_pos = vec![usize::MAX; raw.chords.len()];
    let mut partner = vec![0u32; tagged.len()];
    for (pos, &(_, _, c)) in tagged.iter().enumerate() {
        if first_pos[c] == usize::MAX {
            first_pos[c] = pos;
        } else {
            partner[pos] = first_pos[c] as u32;
            partner[first_pos[c]] = pos as u32;
        }
    }
    if !is_non_crossing(&partner) {
        return Err(DiskError::CrossingMatching);
    }
    let mut ends = Vec::with_capacity(tagged.len());
    let mut slot = 0;
    for (pos, &(edge, _, _)) in tagged.iter().enumerate() {
        if pos > 0 && tagged[pos - 1].0 == edge {
            slot += 1;
        } else {
            slot = 0;
        }
        ends.push(End { edge, slot });
    }
    Ok(Subsurface { n, ends, partner, x1_in: raw.x1_in })
}

/// Balanced-parenthesis test on a linear matching.
pub(crate) fn is_non_crossing(partner: &[u32]) -> bool {
    let mut stack: Vec<usize> = Vec::new();
    for (i, &p) in partner.iter().enumerate() {
        let p = p as usize;
        if p == i {
            return false;
        }
        if p > i {
            stack.push(i);
        } else if stack.pop() != Some(p) {
            return false;
        }
    }
    stack.is_empty()
}

impl Subsurface {
    fn bare(n: u32, x1_in: bool) -> Self {
        Subsurface { n, ends: Vec::new(), partner: Vec::new(), x1_in }
    }

    /// Build directly from already-canonical parts. Callers guarantee
    /// word order, canonical slots and a non-crossing matching.
    pub(crate) fn from_parts(n: u32, ends: Vec<End>, partner: Vec<u32>, x1_in: bool) -> Self {
        let s = Subsurface { n, ends, partner, x1_in };
        debug_assert!(s.check_canonical(), "non-canonical parts: {s:?}");
        s
    }

    fn check_canonical(&self) -> bool {
        if !is_non_crossing(&self.partner) || self.partner.len() != self.ends.len() {
            return false;
        }
        let mut prev: Option<End> = None;
        for &e in &self.ends {
            if e.edge == 0 || e.edge > self.n {
                return false;
            }
            let expect = match prev {
                Some(p) if p.edge == e.edge => p.slot + 1,
                Some(p) if p.edge > e.edge => return false,
                _ => 0,
            };
            if e.slot != expect {
                return false;
            }
            prev = Some(e);
        }
        true
    }

    pub fn disk(&self) -> MarkedDisk {
        MarkedDisk { point_count: self.n }
    }

    pub fn point_count(&self) -> u32 {
        self.n
    }

    pub fn x1_in(&self) -> bool {
        self.x1_in
    }

    /// Chord endpoints in counterclockwise word order.
    pub fn ends(&self) -> &[End] {
        &self.ends
    }

    pub fn partner(&self, end: usize) -> usize {
        self.partner[end] as usize
    }

    pub fn end_count(&self) -> usize {
        self.ends.len()
    }

    pub fn chord_count(&self) -> usize {
        self.ends.len() / 2
    }

    /// Chords as endpoint-index pairs `(lo, hi)`, ordered by `lo`.
    pub fn chords(&self) -> Vec<(usize, usize)> {
        (0..self.ends.len())
            .filter(|&i| (self.partner[i] as usize) > i)
            .map(|i| (i, self.partner[i] as usize))
            .collect()
    }

    /// Index into [`Subsurface::chords`] for every endpoint.
    pub fn chord_of_end(&self) -> Vec<usize> {
        let mut out = vec![0; self.ends.len()];
        let mut c = 0;
        for i in 0..self.ends.len() {
            let p = self.partner[i] as usize;
            if p > i {
                out[i] = c;
                out[p] = c;
                c += 1;
            }
        }
        out
    }

    /// Membership of the boundary arc that starts at endpoint `t`.
    pub fn arc_inside(&self, t: usize) -> bool {
        self.x1_in ^ (t % 2 == 0)
    }

    /// Membership of marked point `x_i` (1-based).
    pub fn point_inside(&self, i: u32) -> bool {
        let before = self.ends.iter().take_while(|e| e.edge < i).count();
        self.x1_in ^ (before % 2 == 1)
    }

    /// Number of marked points strictly inside the arc from endpoint `t` to `t + 1`.
    pub fn arc_point_count(&self, t: usize) -> u32 {
        let m = self.ends.len();
        let a = self.ends[t].edge;
        let b = self.ends[(t + 1) % m].edge;
        let raw = (b + self.n - a) % self.n;
        if t + 1 == m && raw == 0 {
            // wrap arc with every endpoint on one edge runs the full circle
            self.n
        } else {
            raw
        }
    }

    /// Marked points inside the chord `(lo, hi)` on the side not containing `x_1`.
    pub fn inner_point_count(&self, lo: usize, hi: usize) -> u32 {
        self.ends[hi].edge - self.ends[lo].edge
    }

    /// A chord is essential iff both sides hold at least two marked points.
    pub fn is_essential_chord(&self, lo: usize, hi: usize) -> bool {
        let inner = self.inner_point_count(lo, hi);
        inner >= 2 && self.n - inner >= 2
    }

    pub fn is_essential(&self) -> bool {
        self.chords().into_iter().all(|(a, b)| self.is_essential_chord(a, b))
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("subsurface serializes")
    }
}

impl fmt::Debug for Subsurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subsurface(N={}; ", self.n)?;
        for (a, b) in self.chords() {
            let (ea, eb) = (self.ends[a], self.ends[b]);
            write!(f, "(e{},{})-(e{},{}) ", ea.edge, ea.slot, eb.edge, eb.slot)?;
        }
        write!(f, "x1 {})", if self.x1_in { "IN" } else { "OUT" })
    }
}

impl fmt::Display for Subsurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn s1() -> Subsurface {
        canonicalize(&RawSubsurface::new(8, &[((1, 0), (4, 0))], false)).unwrap()
    }

    #[test]
    fn relabels_slots_in_order() {
        let raw = RawSubsurface::new(8, &[((1, 5), (1, 9))], true);
        let s = canonicalize(&raw).unwrap();
        assert_eq!(s.ends(), &[End::new(1, 0), End::new(1, 1)]);
        assert!(s.x1_in());
    }

    #[test]
    fn canonicalize_is_idempotent_on_example() {
        let raw = RawSubsurface::new(8, &[((3, 7), (1, 2)), ((3, 1), (2, 4))], false);
        let s = canonicalize(&raw).unwrap();
        let again = canonicalize(&RawSubsurface::from(s.clone())).unwrap();
        assert_eq!(s, again);
    }

    #[test]
    fn crossing_is_rejected() {
        let raw = RawSubsurface::new(8, &[((1, 0), (3, 0)), ((2, 0), (4, 0))], false);
        assert_eq!(canonicalize(&raw), Err(DiskError::CrossingMatching));
    }

    #[test]
    fn endpoint_on_marked_point_is_rejected() {
        let raw = RawSubsurface {
            n: 8,
            chords: vec![[RawEnd::Slot([1, 0]), RawEnd::Point { point: 3 }]],
            x1_in: false,
        };
        assert_eq!(canonicalize(&raw), Err(DiskError::EndpointOnMarkedPoint(3)));
    }

    #[test]
    fn rejects_bad_disks_and_edges() {
        assert_eq!(MarkedDisk::new(7), Err(DiskError::BadPointCount(7)));
        assert_eq!(MarkedDisk::new(0), Err(DiskError::BadPointCount(0)));
        let raw = RawSubsurface::new(4, &[((1, 0), (5, 0))], false);
        assert_eq!(canonicalize(&raw), Err(DiskError::EdgeOutOfRange { edge: 5, n: 4 }));
        let raw = RawSubsurface::new(4, &[((1, 0), (1, 0))], false);
        assert!(matches!(canonicalize(&raw), Err(DiskError::DuplicateEndpoint { .. })));
    }

    #[test]
    fn json_round_trip() {
        let s = s1();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"N":8,"chords":[[[1,0],[4,0]]],"x1_in":false}"#);
        let back: Subsurface = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        let loose: Subsurface =
            serde_json::from_str(r#"{"N":8,"chords":[[[4,3],[1,7]]],"x1_in":false}"#).unwrap();
        assert_eq!(loose, s);
    }

    #[test]
    fn point_membership_of_s1() {
        let s = s1();
        let inside: Vec<u32> = (1..=8).filter(|&i| s.point_inside(i)).collect();
        assert_eq!(inside, vec![2, 3, 4]);
    }
}
