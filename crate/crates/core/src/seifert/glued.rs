//! Subsurfaces of `Σ_{p,q}` in normal position with respect to the α arcs,
//! stored piece by piece.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Piece, TorusKnotComplex, UnionFind};
use crate::disk::{Gap, Layout, RawSubsurface, Subsurface};
use crate::{canonicalize, Quarters};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GluedError {
    #[error("expected {expected} pieces, got {got}")]
    PieceCount { expected: usize, got: usize },
    #[error("piece {0} has the wrong number of marked points")]
    DiskMismatch(Piece),
    #[error("piece {0} is not essential")]
    NonMinimalPiece(Piece),
    #[error("traces along alpha({0},{1}) disagree")]
    TraceMismatch(u32, u32),
    #[error("no trace supplied for alpha({0},{1})")]
    MissingTrace(u32, u32),
}

/// Colours of the intervals of `α_{i,j}` cut out by its crossings with the
/// interior boundary, listed in the orientation of the `U` side.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Trace {
    pub arc: (u32, u32),
    pub colors: Vec<bool>,
}

impl Trace {
    pub fn crossings(&self) -> usize {
        self.colors.len() - 1
    }
}

pub(crate) fn ends_on_edge(s: &Subsurface, edge: u32) -> u32 {
    s.ends().iter().filter(|e| e.edge == edge).count() as u32
}

/// Boundary arc containing a gap, or `None` when there are no chords.
pub(crate) fn arc_of_gap(s: &Subsurface, g: Gap) -> Option<usize> {
    let m = s.end_count();
    if m == 0 {
        return None;
    }
    let idx = s.ends().partition_point(|e| (e.edge, e.slot) < (g.edge, g.slot));
    Some((idx + m - 1) % m)
}

pub(crate) fn gap_inside(s: &Subsurface, g: Gap) -> bool {
    match arc_of_gap(s, g) {
        Some(t) => s.arc_inside(t),
        None => s.x1_in(),
    }
}

pub(crate) fn region_of_gap(s: &Subsurface, arc_region: &[usize], g: Gap) -> usize {
    arc_of_gap(s, g).map_or(0, |t| arc_region[t])
}

/// Colours along local α side `k`, in the piece's boundary orientation.
pub(crate) fn side_colors(s: &Subsurface, k: u32) -> Vec<bool> {
    let edge = 2 * k - 1;
    (0..=ends_on_edge(s, edge)).map(|slot| gap_inside(s, Gap::new(edge, slot))).collect()
}

/// A validated glued subsurface.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct GluedSubsurface {
    complex: TorusKnotComplex,
    pieces: Vec<Subsurface>,
    traces: Vec<Trace>,
}

/// Relative adjusted Euler characteristics of the pieces and their sum.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GluedChi {
    pub per_piece: Vec<(Piece, Quarters)>,
    pub total: Quarters,
}

fn induced_trace(cx: &TorusKnotComplex, pieces: &[Subsurface], arc: (u32, u32)) -> (Vec<bool>, Vec<bool>) {
    let u = Piece::U(arc.0);
    let v = Piece::V(arc.1);
    let from_u = side_colors(&pieces[cx.piece_index(u)], cx.arc_side(u, arc));
    let mut from_v = side_colors(&pieces[cx.piece_index(v)], cx.arc_side(v, arc));
    from_v.reverse();
    (from_u, from_v)
}

/// Validate per-piece data against supplied traces.
pub fn make_glued(
    cx: &TorusKnotComplex,
    pieces: Vec<Subsurface>,
    traces: &[Trace],
) -> Result<GluedSubsurface, GluedError> {
    let all = cx.pieces();
    if pieces.len() != all.len() {
        return Err(GluedError::PieceCount { expected: all.len(), got: pieces.len() });
    }
    for (&piece, s) in all.iter().zip(&pieces) {
        if s.point_count() != cx.disk(piece).point_count() {
            return Err(GluedError::DiskMismatch(piece));
        }
        if !s.is_essential() {
            return Err(GluedError::NonMinimalPiece(piece));
        }
    }
    let mut ordered = Vec::new();
    for i in 1..=cx.p() {
        for j in 1..=cx.q() {
            let given = traces
                .iter()
                .find(|t| t.arc == (i, j))
                .ok_or(GluedError::MissingTrace(i, j))?;
            let (from_u, from_v) = induced_trace(cx, &pieces, (i, j));
            if from_u != given.colors || from_v != given.colors {
                return Err(GluedError::TraceMismatch(i, j));
            }
            ordered.push(given.clone());
        }
    }
    Ok(GluedSubsurface { complex: *cx, pieces, traces: ordered })
}

/// Assemble a piece subsurface from chords given as `((edge, slot), (edge, slot))`.
fn piece_from_chords(n: u32, chords: &[((u32, u32), (u32, u32))], x1_in: bool) -> Subsurface {
    canonicalize(&RawSubsurface::new(n, chords, x1_in)).expect("sliver chords never cross")
}

impl GluedSubsurface {
    /// Validate pieces, taking the traces they induce from the `U` sides.
    pub fn from_pieces(cx: &TorusKnotComplex, pieces: Vec<Subsurface>) -> Result<Self, GluedError> {
        if pieces.len() != cx.pieces().len() {
            return Err(GluedError::PieceCount { expected: cx.pieces().len(), got: pieces.len() });
        }
        let mut traces = Vec::new();
        for i in 1..=cx.p() {
            for j in 1..=cx.q() {
                let u = Piece::U(i);
                let idx = cx.piece_index(u);
                if pieces[idx].point_count() != cx.disk(u).point_count() {
                    return Err(GluedError::DiskMismatch(u));
                }
                traces.push(Trace { arc: (i, j), colors: side_colors(&pieces[idx], cx.arc_side(u, (i, j))) });
            }
        }
        make_glued(cx, pieces, &traces)
    }

    pub fn empty(cx: &TorusKnotComplex) -> Self {
        Self::from_cells(cx, &[])
    }

    /// The whole surface.
    pub fn full(cx: &TorusKnotComplex) -> Self {
        Self::from_cells(cx, &cx.pieces())
    }

    /// Union of whole pieces. Where a chosen piece meets an unchosen one, the
    /// α arc is kept inside by a thin band in the unchosen piece.
    pub fn from_cells(cx: &TorusKnotComplex, chosen: &[Piece]) -> Self {
        let pieces = cx
            .pieces()
            .into_iter()
            .map(|piece| {
                let disk = cx.disk(piece);
                if chosen.contains(&piece) {
                    return disk.full();
                }
                let n = disk.point_count();
                let sides = cx.sides(piece);
                let banded: Vec<bool> =
                    (1..=sides).map(|k| chosen.contains(&cx.across(piece, k).0)).collect();
                let chords: Vec<_> = (1..=sides)
                    .filter(|&k| banded[k as usize - 1])
                    .map(|k| {
                        let before = if k == 1 { n } else { 2 * k - 2 };
                        ((before, 1), (2 * k, 0))
                    })
                    .collect();
                piece_from_chords(n, &chords, banded[0])
            })
            .collect();
        Self::from_pieces(cx, pieces).expect("unions of cells are in normal position")
    }

    pub fn complex(&self) -> &TorusKnotComplex {
        &self.complex
    }

    pub fn pieces(&self) -> &[Subsurface] {
        &self.pieces
    }

    pub fn piece(&self, piece: Piece) -> &Subsurface {
        &self.pieces[self.complex.piece_index(piece)]
    }

    pub fn traces(&self) -> &[Trace] {
        &self.traces
    }

    pub fn trace(&self, arc: (u32, u32)) -> &Trace {
        &self.traces[((arc.0 - 1) * self.complex.q() + arc.1 - 1) as usize]
    }

    /// Interior-boundary endpoints on the knot.
    pub fn knot_ends(&self) -> usize {
        self.pieces
            .iter()
            .map(|s| s.ends().iter().filter(|e| e.edge % 2 == 0).count())
            .sum()
    }

    /// `χ(Ω) - |∂̇Ω ∩ ∂Σ|/4` computed on the glued object: every region is a
    /// disk and every inside interval of an α arc glues two of them.
    pub fn direct_chi(&self) -> Quarters {
        let regions: usize =
            self.pieces.iter().map(|s| s.layout().regions.iter().filter(|r| r.inside).count()).sum();
        let segments: usize = self.traces.iter().map(|t| t.colors.iter().filter(|&&c| c).count()).sum();
        Quarters(4 * (regions as i64 - segments as i64) - self.knot_ends() as i64)
    }

    /// Regions of all pieces numbered consecutively, joined across every α
    /// interval. Also returns, per interval, one of the regions it joins.
    fn glued_regions(&self, layouts: &[Layout]) -> (Vec<usize>, UnionFind, Vec<usize>) {
        let cx = &self.complex;
        let mut offset = Vec::new();
        let mut total = 0;
        for l in layouts {
            offset.push(total);
            total += l.regions.len();
        }
        let mut uf = UnionFind::new(total);
        let mut intervals = Vec::new();
        for t in &self.traces {
            let u = Piece::U(t.arc.0);
            let v = Piece::V(t.arc.1);
            let (iu, iv) = (cx.piece_index(u), cx.piece_index(v));
            let eu = 2 * cx.arc_side(u, t.arc) - 1;
            let ev = 2 * cx.arc_side(v, t.arc) - 1;
            let c = t.crossings() as u32;
            for s in 0..=c {
                let ru = offset[iu] + region_of_gap(&self.pieces[iu], &layouts[iu].arc_region, Gap::new(eu, s));
                let rv = offset[iv] + region_of_gap(&self.pieces[iv], &layouts[iv].arc_region, Gap::new(ev, c - s));
                uf.union(ru, rv);
                intervals.push(ru);
            }
        }
        (offset, uf, intervals)
    }

    /// Connected components, via inside α intervals joining piece regions.
    pub fn component_count(&self) -> usize {
        let layouts: Vec<_> = self.pieces.iter().map(|s| s.layout()).collect();
        let (offset, mut uf, _) = self.glued_regions(&layouts);
        let mut roots: Vec<usize> = Vec::new();
        for (k, l) in layouts.iter().enumerate() {
            for r in 0..l.regions.len() {
                if l.regions[r].inside {
                    roots.push(uf.find(offset[k] + r));
                }
            }
        }
        roots.sort_unstable();
        roots.dedup();
        roots.len()
    }

    /// Whether every component of `∂̇Ω` is essential in `Σ`: no region of
    /// `Σ - ∂̇Ω` is a disk bounded by a single boundary component.
    pub fn is_essential_in_surface(&self) -> bool {
        let cx = &self.complex;
        let layouts: Vec<_> = self.pieces.iter().map(|s| s.layout()).collect();
        let (offset, mut uf, intervals) = self.glued_regions(&layouts);
        let mut chord_offset = Vec::new();
        let mut chords = 0;
        for l in &layouts {
            chord_offset.push(chords);
            chords += l.chords.len();
        }
        let mut curves = UnionFind::new(chords);
        let end_at = |k: usize, edge: u32, slot: u32| {
            self.pieces[k].ends().iter().position(|e| e.edge == edge && e.slot == slot).expect("traces match")
        };
        for t in &self.traces {
            let u = Piece::U(t.arc.0);
            let v = Piece::V(t.arc.1);
            let (iu, iv) = (cx.piece_index(u), cx.piece_index(v));
            let eu = 2 * cx.arc_side(u, t.arc) - 1;
            let ev = 2 * cx.arc_side(v, t.arc) - 1;
            let c = t.crossings() as u32;
            for s in 0..c {
                let cu = layouts[iu].chord_of_end[end_at(iu, eu, s)];
                let cv = layouts[iv].chord_of_end[end_at(iv, ev, c - 1 - s)];
                curves.union(chord_offset[iu] + cu, chord_offset[iv] + cv);
            }
        }
        let total = offset.last().map_or(0, |&o| o + layouts.last().map_or(0, |l| l.regions.len()));
        let mut euler = vec![0i64; total];
        let mut bounding: Vec<Vec<usize>> = vec![Vec::new(); total];
        for (k, l) in layouts.iter().enumerate() {
            for (r, region) in l.regions.iter().enumerate() {
                let root = uf.find(offset[k] + r);
                euler[root] += 1;
                bounding[root].extend(region.chords.iter().map(|&c| curves.find(chord_offset[k] + c)));
            }
        }
        for r in intervals {
            euler[uf.find(r)] -= 1;
        }
        (0..total).all(|root| {
            let b = &mut bounding[root];
            b.sort_unstable();
            b.dedup();
            !(euler[root] == 1 && b.len() == 1)
        })
    }

    /// Image under the monodromy.
    pub fn monodromy(&self) -> GluedSubsurface {
        let cx = &self.complex;
        let mut pieces = self.pieces.clone();
        for piece in cx.pieces() {
            let (img, steps) = cx.monodromy_piece(piece);
            pieces[cx.piece_index(img)] =
                self.piece(piece).rotate(steps).expect("monodromy steps are even");
        }
        GluedSubsurface::from_pieces(cx, pieces).expect("monodromy preserves normal position")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("glued subsurfaces serialize")
    }
}

/// Per-piece relative adjusted Euler characteristics and their total.
pub fn glued_chi(omega: &GluedSubsurface) -> GluedChi {
    let per_piece: Vec<(Piece, Quarters)> = omega
        .complex
        .pieces()
        .into_iter()
        .zip(&omega.pieces)
        .map(|(piece, s)| (piece, s.adjusted_chi()))
        .collect();
    let total = per_piece.iter().map(|&(_, q)| q).sum();
    GluedChi { per_piece, total }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::build_complex;

    #[test]
    fn u1_as_glued() {
        let cx = build_complex(2, 3).unwrap();
        let u1 = GluedSubsurface::from_cells(&cx, &[Piece::U(1)]);
        let chi = glued_chi(&u1);
        assert_eq!(chi.per_piece[0], (Piece::U(1), Quarters(-2)));
        assert!(chi.per_piece[1..].iter().all(|&(_, q)| q == Quarters::ZERO));
        assert_eq!(chi.total, Quarters(-2));
        assert_eq!(u1.direct_chi(), chi.total);
        assert_eq!(u1.knot_ends(), 6);
        assert_eq!(u1.component_count(), 1);
    }

    #[test]
    fn whole_surface_and_empty() {
        for (p, q) in [(2, 3), (3, 4), (2, 5)] {
            let cx = build_complex(p, q).unwrap();
            let full = GluedSubsurface::full(&cx);
            assert_eq!(glued_chi(&full).total, Quarters::from_int(cx.euler_characteristic()));
            assert_eq!(full.direct_chi(), glued_chi(&full).total);
            assert_eq!(full.component_count(), 1);
            let empty = GluedSubsurface::empty(&cx);
            assert!(glued_chi(&empty).per_piece.iter().all(|&(_, q)| q == Quarters::ZERO));
            assert_eq!(empty.component_count(), 0);
        }
    }

    #[test]
    fn trace_mismatch_and_non_minimal() {
        let cx = build_complex(2, 3).unwrap();
        let u1 = GluedSubsurface::from_cells(&cx, &[Piece::U(1)]);
        let mut traces = u1.traces().to_vec();
        traces[0].colors = vec![true, false, true];
        assert_eq!(
            make_glued(&cx, u1.pieces().to_vec(), &traces),
            Err(GluedError::TraceMismatch(1, 1))
        );
        let mut pieces = u1.pieces().to_vec();
        pieces[0] = piece_from_chords(6, &[((1, 0), (1, 1))], false);
        assert_eq!(
            make_glued(&cx, pieces, u1.traces()),
            Err(GluedError::NonMinimalPiece(Piece::U(1)))
        );
    }

    #[test]
    fn monodromy_cycles_pieces() {
        let cx = build_complex(2, 3).unwrap();
        let u1 = GluedSubsurface::from_cells(&cx, &[Piece::U(1)]);
        assert_eq!(u1.monodromy(), GluedSubsurface::from_cells(&cx, &[Piece::U(2)]));
        let mut x = u1.clone();
        for _ in 0..6 {
            x = x.monodromy();
            assert_eq!(glued_chi(&x).total, glued_chi(&u1).total);
        }
        assert_eq!(x, u1);
        let e = GluedSubsurface::empty(&cx);
        assert_eq!(e.monodromy(), e);
        let v1 = GluedSubsurface::from_cells(&cx, &[Piece::V(1), Piece::U(2)]);
        assert_eq!(v1.monodromy(), GluedSubsurface::from_cells(&cx, &[Piece::V(2), Piece::U(1)]));
    }
}
