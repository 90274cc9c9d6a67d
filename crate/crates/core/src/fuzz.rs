//! Seeded random generators for glued subsurfaces, glued paths and twisted
//! paths on a single disk. Every instance is drawn from its own
//! `ChaCha8Rng` seeded with `seed + index`, so batches are reproducible and
//! can be generated in parallel.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::disk::{MarkedDisk, Subsurface};
use crate::enumerate::enumerate_subsurfaces;
use crate::moves::{distance, successors, Caps, DistanceMode};
use crate::paths::{apply_glued, normal_arcs, path_metrics, DiscretePath, GluedPath};
use crate::seifert::glued::side_colors;
use crate::seifert::{GluedSubsurface, Piece, TorusKnotComplex};

/// Random number generator for instance `index` of a batch.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64))
}

/// Draws valid glued subsurfaces of one complex.
pub struct GluedSampler {
    cx: TorusKnotComplex,
    u_pool: Vec<Subsurface>,
    v_index: HashMap<Vec<Vec<bool>>, Vec<Subsurface>>,
}

impl GluedSampler {
    /// Pools essential piece subsurfaces with at most `max_chords` chords.
    pub fn new(cx: &TorusKnotComplex, max_chords: usize) -> Self {
        let u_pool = enumerate_subsurfaces(2 * cx.q(), max_chords, true);
        let mut v_index: HashMap<Vec<Vec<bool>>, Vec<Subsurface>> = HashMap::new();
        for s in enumerate_subsurfaces(2 * cx.p(), max_chords, true) {
            let key = (1..=cx.p()).map(|k| side_colors(&s, k)).collect();
            v_index.entry(key).or_default().push(s);
        }
        GluedSampler { cx: *cx, u_pool, v_index }
    }

    pub fn complex(&self) -> &TorusKnotComplex {
        &self.cx
    }

    /// Random `U` pieces completed by `V` pieces with matching traces.
    pub fn try_matched(&self, rng: &mut impl Rng) -> Option<GluedSubsurface> {
        let cx = &self.cx;
        let us: Vec<Subsurface> = (0..cx.p()).map(|_| self.u_pool.choose(rng).cloned()).collect::<Option<_>>()?;
        let mut pieces = us.clone();
        for j in 1..=cx.q() {
            let v = Piece::V(j);
            let key: Vec<Vec<bool>> = (1..=cx.p())
                .map(|k| {
                    let arc = cx.side_arc(v, k);
                    let u = Piece::U(arc.0);
                    let mut colors = side_colors(&us[arc.0 as usize - 1], cx.arc_side(u, arc));
                    colors.reverse();
                    colors
                })
                .collect();
            pieces.push(self.v_index.get(&key)?.choose(rng)?.clone());
        }
        GluedSubsurface::from_pieces(cx, pieces).ok()
    }

    /// A union of cells, possibly followed by a few random glued moves.
    pub fn from_cells_walk(&self, rng: &mut impl Rng, max_moves: usize) -> GluedSubsurface {
        let chosen: Vec<Piece> = self.cx.pieces().into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        let start = GluedSubsurface::from_cells(&self.cx, &chosen);
        let moves = rng.gen_range(0..=max_moves);
        random_glued_path(start, moves, 3, rng).states().last().expect("nonempty").clone()
    }

    /// Matched pieces when a few attempts succeed, otherwise a cell walk.
    pub fn sample(&self, rng: &mut impl Rng) -> GluedSubsurface {
        if rng.gen_bool(0.5) {
            for _ in 0..50 {
                if let Some(g) = self.try_matched(rng) {
                    return g;
                }
            }
        }
        self.from_cells_walk(rng, 3)
    }
}

/// Random walk of up to `len` non-identity glued moves along normal arcs.
pub fn random_glued_path(start: GluedSubsurface, len: usize, max_segments: usize, rng: &mut impl Rng) -> GluedPath {
    let mut current = start.clone();
    let mut arcs = Vec::new();
    for _ in 0..len {
        let mut candidates = normal_arcs(&current, max_segments);
        candidates.shuffle(rng);
        let next = candidates.into_iter().find_map(|arc| match apply_glued(&current, &arc) {
            Ok((next, _)) if next != current => Some((arc, next)),
            _ => None,
        });
        let Some((arc, next)) = next else { break };
        arcs.push(arc);
        current = next;
    }
    GluedPath::new(start, arcs).expect("replaying accepted arcs succeeds")
}

/// Parameters of the twisted path fuzzer.
#[derive(Clone, Copy, Debug)]
pub struct TwistedConfig {
    pub n: u32,
    /// Chord cap for the walk and the closing search.
    pub max_chords: usize,
    /// Chord cap for the start state.
    pub start_chords: usize,
    pub walk: usize,
    pub close_depth: u32,
    pub max_eq_length: usize,
    pub twist: i64,
}

impl Default for TwistedConfig {
    fn default() -> Self {
        TwistedConfig { n: 8, max_chords: 3, start_chords: 2, walk: 3, close_depth: 4, max_eq_length: 4, twist: 2 }
    }
}

/// One attempt: a random walk from a random start, closed by a shortest path
/// to the rotated start. `None` when the attempt is rejected.
pub fn try_twisted_path(cfg: &TwistedConfig, pool: &[Subsurface], rng: &mut impl Rng) -> Option<DiscretePath> {
    let start = pool.choose(rng)?.clone();
    let target = start.rotate(cfg.twist).ok()?;
    let mut moves = Vec::new();
    let mut current = start.clone();
    for _ in 0..rng.gen_range(0..=cfg.walk) {
        let next = successors(&current, cfg.max_chords).moves;
        let (mv, s) = next.choose(rng)?.clone();
        moves.push(mv);
        current = s;
    }
    let caps = Caps { max_chords: cfg.max_chords, max_depth: Some(cfg.close_depth) };
    let closing = distance(&current, &target, DistanceMode::Plain, caps).ok()?.witness?;
    moves.extend(closing);
    let path = DiscretePath::from_moves(start, moves).ok()?;
    let m = path_metrics(&path, cfg.twist).ok()?;
    (m.twisted && m.eq_length <= cfg.max_eq_length).then_some(path)
}

/// Start pool of the twisted path fuzzer.
pub fn twisted_pool(cfg: &TwistedConfig) -> Vec<Subsurface> {
    let disk = MarkedDisk::new(cfg.n).expect("valid disk size");
    let mut pool = enumerate_subsurfaces(disk.point_count(), cfg.start_chords, false);
    pool.retain(|s| s.chord_count() <= cfg.max_chords);
    pool
}

/// Twisted path number `index` of a batch with the number of rejected
/// attempts before it.
pub fn twisted_path_instance(cfg: &TwistedConfig, pool: &[Subsurface], seed: u64, index: usize) -> (DiscretePath, usize) {
    let mut rng = instance_rng(seed, index);
    let mut rejected = 0;
    loop {
        if let Some(p) = try_twisted_path(cfg, pool, &mut rng) {
            return (p, rejected);
        }
        rejected += 1;
    }
}

/// `count` twisted paths, instance `i` drawn from `instance_rng(seed, i)`.
/// Returns each path with the number of rejected attempts before it.
pub fn twisted_paths(cfg: &TwistedConfig, seed: u64, count: usize) -> Vec<(DiscretePath, usize)> {
    let pool = twisted_pool(cfg);
    (0..count).into_par_iter().map(|i| twisted_path_instance(cfg, &pool, seed, i)).collect()
}

/// Glued path number `index` of a batch.
pub fn glued_path_instance(sampler: &GluedSampler, seed: u64, index: usize, max_len: usize) -> GluedPath {
    let mut rng = instance_rng(seed, index);
    let start = sampler.sample(&mut rng);
    let len = rng.gen_range(1..=max_len);
    random_glued_path(start, len, 3, &mut rng)
}

/// `count` glued paths of length at most `max_len` from sampled starts.
pub fn glued_paths(sampler: &GluedSampler, seed: u64, count: usize, max_len: usize) -> Vec<GluedPath> {
    (0..count).into_par_iter().map(|i| glued_path_instance(sampler, seed, i, max_len)).collect()
}

/// Glued subsurface number `index` of a batch.
pub fn glued_subsurface_instance(sampler: &GluedSampler, seed: u64, index: usize) -> GluedSubsurface {
    sampler.sample(&mut instance_rng(seed, index))
}

/// `count` sampled glued subsurfaces.
pub fn glued_subsurfaces(sampler: &GluedSampler, seed: u64, count: usize) -> Vec<GluedSubsurface> {
    (0..count)
        .into_par_iter()
        .map(|i| glued_subsurface_instance(sampler, seed, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::decompose_path;
    use crate::seifert::{build_complex, glued_chi};

    #[test]
    fn matched_samples_are_valid() {
        let cx = build_complex(2, 3).unwrap();
        let sampler = GluedSampler::new(&cx, 2);
        let mut rng = instance_rng(7, 0);
        let found = (0..400).filter_map(|_| sampler.try_matched(&mut rng)).count();
        assert!(found > 0);
        for g in glued_subsurfaces(&sampler, 1, 20) {
            assert_eq!(glued_chi(&g).total, g.direct_chi());
        }
    }

    #[test]
    fn batches_are_deterministic() {
        let cx = build_complex(2, 3).unwrap();
        let sampler = GluedSampler::new(&cx, 2);
        assert_eq!(glued_paths(&sampler, 3, 8, 3), glued_paths(&sampler, 3, 8, 3));
        let cfg = TwistedConfig { walk: 2, ..TwistedConfig::default() };
        assert_eq!(twisted_paths(&cfg, 5, 4), twisted_paths(&cfg, 5, 4));
    }

    #[test]
    fn glued_paths_decompose() {
        let cx = build_complex(2, 3).unwrap();
        let sampler = GluedSampler::new(&cx, 2);
        for path in glued_paths(&sampler, 11, 10, 3) {
            let d = decompose_path(&path).unwrap();
            assert!(d.eq_length_sum <= 6 * path.len());
        }
    }
}
