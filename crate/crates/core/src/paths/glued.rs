//! Paths of glued subsurfaces and their decomposition into per-piece paths.
//!
//! A glued move is a surgery along an arc `δ` in normal position with respect
//! to the α arcs. Inside each piece `δ` runs through a single region, so it
//! induces one piece move there: a surgery at a chord end and a null addition
//! where it merely crosses. The result can meet ζ in bigons and half-bigons.
//! Each maximal one is pushed off with free eliminations in the pieces it
//! covers and at most one boundary surgery in the piece beyond.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DiscretePath, PathError};
use crate::disk::{point_bit, End, Gap, Layout, Subsurface};
use crate::moves::{apply, candidate_moves, ElementaryMove, MoveError, MoveKind, Position};
use crate::seifert::glued::{ends_on_edge, region_of_gap};
use crate::seifert::{GluedError, GluedSubsurface, Piece, TorusKnotComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GluedPathError {
    #[error("arc is not in normal position: {0}")]
    NonNormalArc(&'static str),
    #[error("malformed arc: {0}")]
    Malformed(&'static str),
    #[error("piece move failed in {piece}: {error}")]
    Move { piece: Piece, error: MoveError },
    #[error("glued move {0} leaves the state unchanged")]
    IdentityStep(usize),
    #[error("glued move {0} does not replay")]
    ReplayFailure(usize),
    #[error("reassembled pieces after move {0} differ from the glued state")]
    Reassembly(usize),
    #[error(transparent)]
    Glued(#[from] GluedError),
    #[error(transparent)]
    Path(#[from] PathError),
}

/// Where `δ` meets the boundary of a piece region.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Port {
    /// An interior boundary chord of the piece.
    Chord(usize),
    /// A gap on a piece edge; on an odd edge this is an α crossing.
    Gap(Gap),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Segment {
    pub piece: Piece,
    pub from: Port,
    pub to: Port,
}

/// A surgery arc in normal position, one segment per piece it visits.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct NormalArc {
    pub segments: Vec<Segment>,
}

/// Piece moves realizing one glued move.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GluedStep {
    pub piece_moves: Vec<(Piece, ElementaryMove)>,
    /// Bigons and half-bigons removed while re-normalizing.
    pub bigons: usize,
}

impl GluedStep {
    pub fn eq_length(&self) -> usize {
        self.piece_moves.iter().filter(|(_, m)| m.kind.is_counted()).count()
    }
}

fn is_alpha(edge: u32) -> bool {
    edge % 2 == 1
}

fn side_of(edge: u32) -> u32 {
    edge.div_ceil(2)
}

/// Regions of `s` a port borders.
fn port_regions(s: &Subsurface, arc_region: &[usize], chords: &[(usize, usize)], port: Port) -> Result<Vec<usize>, GluedPathError> {
    match port {
        Port::Chord(c) => {
            let &(lo, hi) = chords.get(c).ok_or(GluedPathError::Malformed("no such chord"))?;
            Ok(vec![arc_region[lo], arc_region[hi]])
        }
        Port::Gap(g) => {
            if g.edge == 0 || g.edge > s.point_count() || g.slot > ends_on_edge(s, g.edge) {
                return Err(GluedPathError::Malformed("no such gap"));
            }
            Ok(vec![region_of_gap(s, arc_region, g)])
        }
    }
}

/// A segment from an α gap to the knot gap across the neighbouring vertex
/// with no endpoints in between cuts off a half-bigon.
fn is_half_bigon(s: &Subsurface, a: Gap, b: Gap) -> bool {
    let n = s.point_count();
    let (alpha, knot) = match (is_alpha(a.edge), is_alpha(b.edge)) {
        (true, false) => (a, b),
        (false, true) => (b, a),
        _ => return false,
    };
    let before = if alpha.edge == 1 { n } else { alpha.edge - 1 };
    let after = alpha.edge % n + 1;
    (alpha.slot == 0 && knot.edge == before && knot.slot == ends_on_edge(s, before))
        || (alpha.slot == ends_on_edge(s, alpha.edge) && knot.edge == after && knot.slot == 0)
}

fn piece_move(kind: MoveKind, region: usize, positions: Vec<Position>, split: Vec<u8>) -> ElementaryMove {
    ElementaryMove { kind, region, positions, split }
}

#[derive(Clone)]
struct Working<'a> {
    cx: &'a TorusKnotComplex,
    pieces: Vec<Subsurface>,
    moves: Vec<(Piece, ElementaryMove)>,
    bigons: usize,
}

/// An innermost inessential chord and whether its small side is the inner one.
#[derive(Clone, Copy)]
struct Inessential {
    piece: Piece,
    chord: usize,
    inner: bool,
}

/// Small side of an inessential chord whose side holds no other endpoint.
fn innermost_side(s: &Subsurface, lo: usize, hi: usize) -> Option<bool> {
    if s.is_essential_chord(lo, hi) {
        return None;
    }
    if hi == lo + 1 && s.inner_point_count(lo, hi) <= 1 {
        Some(true)
    } else if lo == 0 && hi + 1 == s.end_count() && s.point_count() - s.inner_point_count(lo, hi) <= 1 {
        Some(false)
    } else {
        None
    }
}

fn disk_elim(layout: &Layout, c: usize, inner: bool) -> ElementaryMove {
    let (lo, hi) = layout.chords[c];
    let region = if inner { layout.arc_region[lo] } else { layout.arc_region[hi] };
    piece_move(MoveKind::DiskElim, region, vec![Position::Chord(c)], vec![u8::from(!inner)])
}

impl Working<'_> {
    fn state(&self, piece: Piece) -> &Subsurface {
        &self.pieces[self.cx.piece_index(piece)]
    }

    fn apply(&mut self, piece: Piece, mv: ElementaryMove) -> Result<(), GluedPathError> {
        let idx = self.cx.piece_index(piece);
        let tr = apply(&self.pieces[idx], &mv).map_err(|error| GluedPathError::Move { piece, error })?;
        self.pieces[idx] = tr.result;
        self.moves.push((piece, mv));
        Ok(())
    }

    fn counted(&self) -> usize {
        self.moves.iter().filter(|(_, m)| m.kind.is_counted()).count()
    }

    fn inessential(&self) -> Vec<Inessential> {
        let mut out = Vec::new();
        for piece in self.cx.pieces() {
            let s = self.state(piece);
            for (chord, (lo, hi)) in s.chords().into_iter().enumerate() {
                if let Some(inner) = innermost_side(s, lo, hi) {
                    out.push(Inessential { piece, chord, inner });
                }
            }
        }
        out
    }

    /// Endpoint index in `piece` at a mirrored α crossing.
    fn far_end(&self, piece: Piece, edge: u32, slot: u32) -> usize {
        self.state(piece)
            .ends()
            .iter()
            .position(|e| e.edge == edge && e.slot == slot)
            .expect("traces match across α")
    }

    /// Remove one maximal bigon, half-bigon or boundary-parallel disk.
    fn eliminate(mut self, x: Inessential) -> Result<Self, GluedPathError> {
        let s = self.state(x.piece).clone();
        let layout = s.layout();
        let (lo, hi) = layout.chords[x.chord];
        let (ea, eb) = (s.ends()[lo], s.ends()[hi]);
        let elim = disk_elim(&layout, x.chord, x.inner);
        self.bigons += 1;
        if ea.edge == eb.edge && !is_alpha(ea.edge) {
            // a disk cut off a knot arc
            self.apply(x.piece, elim)?;
            return Ok(self);
        }
        if ea.edge == eb.edge {
            return self.bigon_chain(x.piece, ea.edge, eb.slot, elim);
        }
        self.half_bigon(x.piece, &s, ea, eb, elim)
    }

    /// A bigon on α edge `edge` whose crossings end at `hi_slot`. Parallel
    /// strips across further α arcs are removed with it; only the piece
    /// where the strip ends pays a boundary surgery.
    fn bigon_chain(mut self, piece: Piece, edge: u32, hi_slot: u32, elim: ElementaryMove) -> Result<Self, GluedPathError> {
        let (mut near, mut near_edge, mut near_hi) = (piece, edge, hi_slot);
        let mut pending = elim;
        loop {
            let count = ends_on_edge(self.state(near), near_edge);
            let (far, k2) = self.cx.across(near, side_of(near_edge));
            let far_edge = 2 * k2 - 1;
            self.apply(near, pending)?;
            let t1 = self.far_end(far, far_edge, count - 1 - near_hi);
            let t2 = t1 + 1;
            let fs = self.state(far).clone();
            let fl = fs.layout();
            let (c1, c2) = (fl.chord_of_end[t1], fl.chord_of_end[t2]);
            if c1 == c2 {
                self.apply(far, disk_elim(&fl, c1, true))?;
                return Ok(self);
            }
            let region = fl.arc_region[t1];
            let (p1, p2) = (fs.partner(t1), fs.partner(t2));
            let strip = fl.regions[region].is_empty_rectangle(&fs) && fs.ends()[p1].edge == fs.ends()[p2].edge;
            if !strip {
                let b1 = piece_move(MoveKind::BdrySurgery1, region, vec![Position::End(t1), Position::End(t2)], vec![]);
                self.apply(far, b1)?;
                return Ok(self);
            }
            let null = piece_move(MoveKind::NullElim, region, vec![Position::Chord(c1), Position::Chord(c2)], vec![]);
            let next_edge = fs.ends()[p1].edge;
            if !is_alpha(next_edge) {
                // the strip ends on the knot: the whole bigon was a disk
                self.apply(far, null)?;
                return Ok(self);
            }
            near_hi = fs.ends()[p1].slot.max(fs.ends()[p2].slot);
            near = far;
            near_edge = next_edge;
            pending = null;
        }
    }

    /// A half-bigon around one vertex of α. When the piece across has the
    /// matching half-bigon around the same vertex the two form a disk.
    fn half_bigon(
        mut self,
        piece: Piece,
        s: &Subsurface,
        ea: End,
        eb: End,
        elim: ElementaryMove,
    ) -> Result<Self, GluedPathError> {
        let alpha_end = if is_alpha(ea.edge) { ea } else { eb };
        let count = ends_on_edge(s, alpha_end.edge);
        let (other, k2) = self.cx.across(piece, side_of(alpha_end.edge));
        let far_edge = 2 * k2 - 1;
        let n = s.point_count();
        let knot_edge = if alpha_end == ea { eb.edge } else { ea.edge };
        let before = if alpha_end.edge == 1 { n } else { alpha_end.edge - 1 };
        let vertex_is_start = knot_edge == before;
        let point = if vertex_is_start { 2 * k2 } else { 2 * k2 - 1 };
        let t = self.far_end(other, far_edge, count - 1 - alpha_end.slot);
        let far = self.state(other).clone();
        let fl = far.layout();
        let fc = fl.chord_of_end[t];
        let (flo, fhi) = fl.chords[fc];
        if let Some(inner) = innermost_side(&far, flo, fhi) {
            let side = if inner { fl.arc_region[flo] } else { fl.arc_region[fhi] };
            if fl.regions[side].points == point_bit(point) {
                self.apply(piece, elim)?;
                self.apply(other, disk_elim(&fl, fc, inner))?;
                return Ok(self);
            }
        }
        let m = far.end_count();
        let e = far.ends()[t];
        let first_after = e.edge == point && e.slot == 0;
        let arc = if first_after { (t + m - 1) % m } else { t };
        let slide =
            piece_move(MoveKind::BdrySurgery2, fl.arc_region[arc], vec![Position::End(t), Position::Point(point)], vec![]);
        self.apply(piece, elim)?;
        self.apply(other, slide)?;
        Ok(self)
    }
}

/// Re-normalize with the fewest counted piece moves, trying every order of
/// eliminations.
fn normalize(start: Working<'_>) -> Result<Working<'_>, GluedPathError> {
    const MAX_STATES: usize = 20_000;
    let mut heap = BinaryHeap::new();
    let mut store = vec![start];
    let mut seen = HashSet::new();
    heap.push(Reverse((0usize, 0usize)));
    while let Some(Reverse((_, i))) = heap.pop() {
        let w = store[i].clone();
        if !seen.insert(w.pieces.clone()) {
            continue;
        }
        let todo = w.inessential();
        if todo.is_empty() {
            return Ok(w);
        }
        for x in todo {
            let next = w.clone().eliminate(x)?;
            if !seen.contains(&next.pieces) {
                heap.push(Reverse((next.counted(), store.len())));
                store.push(next);
            }
        }
        if store.len() > MAX_STATES {
            return Err(GluedPathError::Malformed("re-normalization does not settle"));
        }
    }
    Err(GluedPathError::Malformed("re-normalization does not settle"))
}

/// Apply one glued move.
pub fn apply_glued(omega: &GluedSubsurface, arc: &NormalArc) -> Result<(GluedSubsurface, GluedStep), GluedPathError> {
    let cx = omega.complex();
    let segs = &arc.segments;
    if segs.is_empty() {
        return Err(GluedPathError::Malformed("arc has no segments"));
    }
    for (k, seg) in segs.iter().enumerate() {
        if !cx.contains(seg.piece) {
            return Err(GluedPathError::Malformed("unknown piece"));
        }
        if segs[..k].iter().any(|x| x.piece == seg.piece) {
            return Err(GluedPathError::Malformed("arc visits a piece twice"));
        }
    }
    let terminal = |p: Port| match p {
        Port::Chord(_) => true,
        Port::Gap(g) => !is_alpha(g.edge),
    };
    let (start, end) = (segs[0].from, segs[segs.len() - 1].to);
    if !terminal(start) || !terminal(end) {
        return Err(GluedPathError::Malformed("arc must end on chords or the knot"));
    }
    if !matches!(start, Port::Chord(_)) && !matches!(end, Port::Chord(_)) {
        return Err(GluedPathError::Malformed("arc must start or end on a chord"));
    }
    // consecutive segments meet at mirrored α gaps
    for w in segs.windows(2) {
        let (Port::Gap(out), Port::Gap(inn)) = (w[0].to, w[1].from) else {
            return Err(GluedPathError::Malformed("inner ports must be α gaps"));
        };
        if !is_alpha(out.edge) || !is_alpha(inn.edge) {
            return Err(GluedPathError::Malformed("inner ports must be α gaps"));
        }
        let (other, k2) = cx.across(w[0].piece, side_of(out.edge));
        let count = ends_on_edge(omega.piece(w[0].piece), out.edge);
        if out.slot > count || other != w[1].piece || inn != Gap::new(2 * k2 - 1, count - out.slot) {
            return Err(GluedPathError::Malformed("segments do not meet across an α arc"));
        }
    }
    let mut work = Working { cx, pieces: omega.pieces().to_vec(), moves: Vec::new(), bigons: 0 };
    for seg in segs {
        let s = omega.piece(seg.piece);
        let layout = s.layout();
        let a = port_regions(s, &layout.arc_region, &layout.chords, seg.from)?;
        let b = port_regions(s, &layout.arc_region, &layout.chords, seg.to)?;
        let region = *a.iter().find(|r| b.contains(r)).ok_or(GluedPathError::Malformed("segment leaves its region"))?;
        let mv = match (seg.from, seg.to) {
            (Port::Chord(x), Port::Chord(y)) => {
                if x == y {
                    return Err(GluedPathError::Malformed("surgery arc returns to its chord"));
                }
                piece_move(MoveKind::Surgery1, region, vec![Position::Chord(x), Position::Chord(y)], vec![])
            }
            (Port::Chord(x), Port::Gap(g)) | (Port::Gap(g), Port::Chord(x)) => {
                piece_move(MoveKind::Surgery2, region, vec![Position::Chord(x), Position::Gap(g)], vec![])
            }
            (Port::Gap(g1), Port::Gap(g2)) => {
                if g1.edge == g2.edge && is_alpha(g1.edge) {
                    return Err(GluedPathError::NonNormalArc("segment forms a bigon with α"));
                }
                if is_half_bigon(s, g1, g2) {
                    return Err(GluedPathError::NonNormalArc("segment forms a half-bigon with α"));
                }
                if g1 == g2 {
                    return Err(GluedPathError::Malformed("segment has no length"));
                }
                piece_move(MoveKind::NullAdd, region, vec![Position::Gap(g1.min(g2)), Position::Gap(g1.max(g2))], vec![])
            }
        };
        work.apply(seg.piece, mv)?;
    }
    let work = normalize(work)?;
    let next = GluedSubsurface::from_pieces(cx, work.pieces)?;
    Ok((next, GluedStep { piece_moves: work.moves, bigons: work.bigons }))
}

/// Every candidate arc with at most `max_segments` segments that starts on a
/// chord, in deterministic order. Candidates are not yet checked for
/// normality; [`apply_glued`] does that.
pub fn normal_arcs(omega: &GluedSubsurface, max_segments: usize) -> Vec<NormalArc> {
    struct Ctx<'a> {
        omega: &'a GluedSubsurface,
        max: usize,
        out: Vec<NormalArc>,
    }
    fn extend(ctx: &mut Ctx, piece: Piece, region: usize, from: Port, segs: &mut Vec<Segment>) {
        let cx = ctx.omega.complex();
        let s = ctx.omega.piece(piece);
        let layout = s.layout();
        let r = &layout.regions[region];
        let mut chords = r.chords.clone();
        chords.sort_unstable();
        chords.dedup();
        for c in chords {
            if from != Port::Chord(c) {
                segs.push(Segment { piece, from, to: Port::Chord(c) });
                ctx.out.push(NormalArc { segments: segs.clone() });
                segs.pop();
            }
        }
        for &g in &r.gaps {
            if !is_alpha(g.edge) {
                segs.push(Segment { piece, from, to: Port::Gap(g) });
                ctx.out.push(NormalArc { segments: segs.clone() });
                segs.pop();
                continue;
            }
            if segs.len() + 1 >= ctx.max {
                continue;
            }
            let (other, k2) = cx.across(piece, side_of(g.edge));
            if other == piece || segs.iter().any(|x| x.piece == other) {
                continue;
            }
            let count = ends_on_edge(s, g.edge);
            let entry = Gap::new(2 * k2 - 1, count - g.slot);
            let far = ctx.omega.piece(other);
            let far_region = region_of_gap(far, &far.layout().arc_region, entry);
            segs.push(Segment { piece, from, to: Port::Gap(g) });
            extend(ctx, other, far_region, Port::Gap(entry), segs);
            segs.pop();
        }
    }
    let mut ctx = Ctx { omega, max: max_segments, out: Vec::new() };
    for piece in omega.complex().pieces() {
        let layout = omega.piece(piece).layout();
        for (c, &(lo, hi)) in layout.chords.iter().enumerate() {
            for region in [layout.arc_region[lo], layout.arc_region[hi]] {
                extend(&mut ctx, piece, region, Port::Chord(c), &mut Vec::new());
            }
        }
    }
    ctx.out
}

/// A path of glued subsurfaces.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GluedPath {
    states: Vec<GluedSubsurface>,
    arcs: Vec<NormalArc>,
    steps: Vec<GluedStep>,
}

impl GluedPath {
    /// Replay arcs from a start state.
    pub fn new(start: GluedSubsurface, arcs: Vec<NormalArc>) -> Result<Self, GluedPathError> {
        let mut states = vec![start];
        let mut steps = Vec::new();
        for (i, arc) in arcs.iter().enumerate() {
            let (next, step) = apply_glued(states.last().expect("nonempty"), arc)?;
            if next == states[i] {
                return Err(GluedPathError::IdentityStep(i));
            }
            states.push(next);
            steps.push(step);
        }
        Ok(GluedPath { states, arcs, steps })
    }

    pub fn complex(&self) -> &TorusKnotComplex {
        self.states[0].complex()
    }

    pub fn states(&self) -> &[GluedSubsurface] {
        &self.states
    }

    pub fn arcs(&self) -> &[NormalArc] {
        &self.arcs
    }

    pub fn steps(&self) -> &[GluedStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_twisted(&self) -> bool {
        self.states[0].monodromy() == *self.states.last().expect("nonempty")
    }
}

/// Per-piece discretizations of a glued path.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub pieces: Vec<(Piece, DiscretePath)>,
    pub eq_length_sum: usize,
    /// Counted piece moves contributed by each glued move.
    pub per_step: Vec<usize>,
    /// Bigons removed after each glued move.
    pub bigons: Vec<usize>,
}

impl Decomposition {
    pub fn path(&self, piece: Piece) -> &DiscretePath {
        &self.pieces.iter().find(|(p, _)| *p == piece).expect("every piece has a path").1
    }
}

/// Split a glued path into per-piece paths, checking that each step replays
/// and that the piece states reassemble to the glued states.
pub fn decompose_path(path: &GluedPath) -> Result<Decomposition, GluedPathError> {
    let cx = *path.complex();
    let all = cx.pieces();
    let mut per_piece: Vec<Vec<ElementaryMove>> = vec![Vec::new(); all.len()];
    let mut per_step = Vec::new();
    let mut bigons = Vec::new();
    let mut boundaries: Vec<Vec<usize>> = Vec::new();
    let mut memo = HashMap::new();
    for (i, arc) in path.arcs.iter().enumerate() {
        let (next, step) = apply_glued(&path.states[i], arc)?;
        if next != path.states[i + 1] {
            return Err(GluedPathError::ReplayFailure(i));
        }
        let mut local: Vec<Vec<ElementaryMove>> = vec![Vec::new(); all.len()];
        for (piece, mv) in &step.piece_moves {
            local[cx.piece_index(*piece)].push(mv.clone());
        }
        let mut counted = 0;
        for (k, moves) in local.iter_mut().enumerate() {
            let c = moves.iter().filter(|m| m.kind.is_counted()).count();
            if c >= 2 {
                let key = (path.states[i].pieces()[k].clone(), path.states[i + 1].pieces()[k].clone());
                let better = memo.entry(key).or_insert_with_key(|(a, b)| shortcut(a, b, c)).clone();
                if let Some(better) = better {
                    *moves = better;
                }
            }
            counted += moves.iter().filter(|m| m.kind.is_counted()).count();
            per_piece[k].append(moves);
        }
        per_step.push(counted);
        bigons.push(step.bigons);
        boundaries.push(per_piece.iter().map(Vec::len).collect());
    }
    let mut pieces = Vec::new();
    for (k, &piece) in all.iter().enumerate() {
        let start = path.states[0].pieces()[k].clone();
        pieces.push((piece, DiscretePath::from_moves(start, per_piece[k].clone())?));
    }
    for (i, counts) in boundaries.iter().enumerate() {
        let assembled: Vec<Subsurface> =
            pieces.iter().zip(counts).map(|((_, p), &c)| p.states()[c].clone()).collect();
        let glued = GluedSubsurface::from_pieces(&cx, assembled).map_err(|_| GluedPathError::Reassembly(i))?;
        if glued != path.states[i + 1] {
            return Err(GluedPathError::Reassembly(i));
        }
    }
    Ok(Decomposition { eq_length_sum: per_step.iter().sum(), pieces, per_step, bigons })
}

/// A piece path from `a` to `b` with fewer than `budget` counted moves, using
/// no additions and at most one chord beyond the larger end.
fn shortcut(a: &Subsurface, b: &Subsurface, budget: usize) -> Option<Vec<ElementaryMove>> {
    let cap = a.chord_count().max(b.chord_count()) + 1;
    let mut best: HashMap<Subsurface, usize> = HashMap::from([(a.clone(), 0)]);
    let mut back: HashMap<Subsurface, (Subsurface, ElementaryMove)> = HashMap::new();
    let mut queue = VecDeque::from([(0, a.clone())]);
    while let Some((d, s)) = queue.pop_front() {
        if best[&s] < d {
            continue;
        }
        if s == *b {
            let mut moves = Vec::new();
            let mut cur = s;
            while let Some((prev, mv)) = back.get(&cur) {
                moves.push(mv.clone());
                cur = prev.clone();
            }
            moves.reverse();
            return Some(moves);
        }
        for mv in candidate_moves(&s) {
            if matches!(mv.kind, MoveKind::DiskAdd | MoveKind::NullAdd) {
                continue;
            }
            let w = usize::from(mv.kind.is_counted());
            if d + w >= budget {
                continue;
            }
            let Ok(t) = apply(&s, &mv) else { continue };
            if t.result == s || t.result.chord_count() > cap {
                continue;
            }
            if best.get(&t.result).is_some_and(|&e| e <= d + w) {
                continue;
            }
            best.insert(t.result.clone(), d + w);
            back.insert(t.result.clone(), (s.clone(), mv));
            if w == 0 {
                queue.push_front((d, t.result));
            } else {
                queue.push_back((d + w, t.result));
            }
        }
    }
    None
}

/// Which family of pieces to concatenate.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Family {
    U,
    V,
}

/// For a twisted glued path, concatenate the piece paths `Δ_{U_p}, …, Δ_{U_1}`
/// (or the `V` analogue) into one path on the piece disk. Returns the path
/// and the rotation relating its ends.
pub fn twisted_concatenation(
    path: &GluedPath,
    decomposition: &Decomposition,
    family: Family,
) -> Result<(DiscretePath, i64), GluedPathError> {
    if !path.is_twisted() {
        return Err(PathError::NotTwisted.into());
    }
    let cx = path.complex();
    let (count, make): (u32, fn(u32) -> Piece) = match family {
        Family::U => (cx.p(), Piece::U),
        Family::V => (cx.q(), Piece::V),
    };
    let (_, twist) = cx.monodromy_piece(make(count));
    let mut out = decomposition.path(make(count)).clone();
    for i in (1..count).rev() {
        out = out.concat(decomposition.path(make(i)))?;
    }
    Ok((out, twist))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::build_complex;

    #[test]
    fn empty_path_decomposes_trivially() {
        let cx = build_complex(2, 3).unwrap();
        let path = GluedPath::new(GluedSubsurface::from_cells(&cx, &[Piece::U(1)]), vec![]).unwrap();
        let d = decompose_path(&path).unwrap();
        assert_eq!(d.eq_length_sum, 0);
        assert!(d.pieces.iter().all(|(_, p)| p.is_empty()));
    }

    #[test]
    fn every_arc_from_a_cell_is_bounded() {
        let cx = build_complex(2, 3).unwrap();
        for chosen in [vec![Piece::U(1)], vec![Piece::V(2)], vec![Piece::U(1), Piece::V(1)]] {
            let omega = GluedSubsurface::from_cells(&cx, &chosen);
            let mut applied = 0;
            for arc in normal_arcs(&omega, 3) {
                match apply_glued(&omega, &arc) {
                    Ok((next, step)) => {
                        if next == omega {
                            continue;
                        }
                        applied += 1;
                        assert!(step.eq_length() <= 6, "{arc:?}");
                        let path = GluedPath::new(omega.clone(), vec![arc]).unwrap();
                        let d = decompose_path(&path).unwrap();
                        assert_eq!(d.eq_length_sum, step.eq_length());
                    }
                    Err(e) => assert!(matches!(e, GluedPathError::NonNormalArc(_)), "{e:?} for {arc:?}"),
                }
            }
            assert!(applied > 0);
        }
    }

    #[test]
    fn single_piece_surgery_touches_one_piece() {
        let cx = build_complex(3, 4).unwrap();
        let omega = GluedSubsurface::from_cells(&cx, &[Piece::V(1), Piece::V(2)]);
        let arc = normal_arcs(&omega, 1)
            .into_iter()
            .find(|a| apply_glued(&omega, a).is_ok_and(|(next, _)| next != omega))
            .expect("some surgery stays inside one piece");
        let piece = arc.segments[0].piece;
        let path = GluedPath::new(omega, vec![arc]).unwrap();
        let d = decompose_path(&path).unwrap();
        for (p, sub) in &d.pieces {
            if *p != piece {
                assert!(sub.is_empty());
            }
        }
        assert!(d.eq_length_sum >= 1 && d.eq_length_sum <= 6);
    }
}
