//! Exhaustive generators for subsurfaces and for combined diagrams of
//! disjoint or nested pairs.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::disk::{canonicalize, End, RawEnd, RawSubsurface, Subsurface};

/// Every way to write `total` as an ordered sum of `parts` nonnegative integers.
pub fn compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    fn rec(left: u32, parts: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in (0..=left).rev() {
            cur.push(v);
            rec(left - v, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        rec(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

/// All non-crossing perfect matchings on `2k` points in a line, as partner arrays.
pub fn non_crossing_matchings(k: usize) -> Vec<Vec<u32>> {
    fn rec(len: usize, offset: u32) -> Vec<Vec<u32>> {
        if len == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        // position 0 pairs with an odd position j
        for j in (1..len).step_by(2) {
            for inner in rec(j - 1, offset + 1) {
                for outer in rec(len - j - 1, offset + j as u32 + 1) {
                    let mut m = Vec::with_capacity(len);
                    m.push(offset + j as u32);
                    m.extend(inner.iter().copied());
                    m.push(offset);
                    m.extend(outer.iter().copied());
                    out.push(m);
                }
            }
        }
        out
    }
    rec(2 * k, 0)
}

fn build(n: u32, counts: &[u32], matching: &[u32], x1_in: bool) -> Subsurface {
    let mut ends = Vec::with_capacity(matching.len());
    for (e, &c) in counts.iter().enumerate() {
        for s in 0..c {
            ends.push(End::new(e as u32 + 1, s));
        }
    }
    Subsurface::from_parts(n, ends, matching.to_vec(), x1_in)
}

/// Chord diagrams (colored with `x_1` outside) with at most `max_chords` chords,
/// in deterministic order.
pub fn enumerate_diagrams(n: u32, max_chords: usize, essential_chords_only: bool) -> Vec<Subsurface> {
    let mut out = Vec::new();
    for k in 0..=max_chords {
        let matchings = non_crossing_matchings(k);
        let comps = compositions(2 * k as u32, n);
        let chunk: Vec<Vec<Subsurface>> = comps
            .par_iter()
            .map(|counts| {
                matchings
                    .iter()
                    .map(|m| build(n, counts, m, false))
                    .filter(|s| !essential_chords_only || s.is_essential())
                    .collect()
            })
            .collect();
        out.extend(chunk.into_iter().flatten());
    }
    out
}

/// Each canonical subsurface with at most `max_chords` chords exactly once,
/// in deterministic order.
pub fn enumerate_subsurfaces(n: u32, max_chords: usize, essential_only: bool) -> Vec<Subsurface> {
    enumerate_diagrams(n, max_chords, essential_only)
        .into_iter()
        .flat_map(|d| {
            let c = d.complement();
            [d, c]
        })
        .collect()
}

/// Independent count by backtracking over boundary words with scrambled slot
/// labels, deduplicated after canonicalization.
pub fn brute_force_classes(n: u32, max_chords: usize, essential_only: bool) -> HashSet<Subsurface> {
    struct St {
        n: u32,
        max_ends: usize,
        ends: Vec<(u32, u32)>,
        stack: Vec<usize>,
        chords: Vec<(usize, usize)>,
        found: HashSet<Subsurface>,
        essential_only: bool,
    }
    fn emit(st: &mut St) {
        let chords: Vec<[RawEnd; 2]> = st
            .chords
            .iter()
            .map(|&(a, b)| {
                let (ea, sa) = st.ends[a];
                let (eb, sb) = st.ends[b];
                [RawEnd::Slot([ea, 3 * sa + 11]), RawEnd::Slot([eb, 3 * sb + 11])]
            })
            .collect();
        for x1_in in [false, true] {
            let raw = RawSubsurface { n: st.n, chords: chords.clone(), x1_in };
            let s = canonicalize(&raw).expect("backtracking produces valid words");
            if !st.essential_only || s.is_essential() {
                st.found.insert(s);
            }
        }
    }
    fn rec(st: &mut St, edge: u32, slot: u32) {
        if edge > st.n {
            if st.stack.is_empty() {
                emit(st);
            }
            return;
        }
        rec(st, edge + 1, 0);
        if st.ends.len() < st.max_ends {
            let idx = st.ends.len();
            st.ends.push((edge, slot));
            if st.stack.len() < st.max_ends - idx {
                st.stack.push(idx);
                rec(st, edge, slot + 1);
                st.stack.pop();
            }
            if let Some(open) = st.stack.pop() {
                st.chords.push((open, idx));
                rec(st, edge, slot + 1);
                st.chords.pop();
                st.stack.push(open);
            }
            st.ends.pop();
        }
    }
    let mut st = St {
        n,
        max_ends: 2 * max_chords,
        ends: Vec::new(),
        stack: Vec::new(),
        chords: Vec::new(),
        found: HashSet::new(),
        essential_only,
    };
    rec(&mut st, 1, 0);
    st.found
}

/// Role of a region in a combined diagram.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Label {
    /// In the first subsurface.
    A,
    /// In neither.
    B,
    /// In the second subsurface.
    C,
}

/// A chord diagram whose regions carry three labels, every chord separating a
/// `B` region from a non-`B` region.
#[derive(Clone, Debug)]
pub struct CombinedDiagram {
    pub diagram: Subsurface,
    pub labels: Vec<Label>,
}

impl CombinedDiagram {
    fn select(&self, pred: impl Fn(Label) -> bool) -> Subsurface {
        let chosen: Vec<usize> = (0..self.labels.len()).filter(|&r| pred(self.labels[r])).collect();
        self.diagram.from_regions(&chosen)
    }

    /// Union of the `A` regions.
    pub fn first(&self) -> Subsurface {
        self.select(|l| l == Label::A)
    }

    /// Union of the `C` regions; disjoint from [`CombinedDiagram::first`].
    pub fn second(&self) -> Subsurface {
        self.select(|l| l == Label::C)
    }

    /// Union of the `A` and `B` regions; contains [`CombinedDiagram::first`].
    pub fn outer(&self) -> Subsurface {
        self.select(|l| l != Label::C)
    }
}

/// All combined diagrams over diagrams with at most `max_chords` chords.
///
/// With `per_side` set, the first and second subsurfaces are each limited to
/// that many chords.
pub fn enumerate_combined(
    n: u32,
    max_chords: usize,
    essential_chords_only: bool,
    per_side: Option<usize>,
) -> Vec<CombinedDiagram> {
    let diagrams = enumerate_diagrams(n, max_chords, essential_chords_only);
    let per: Vec<Vec<CombinedDiagram>> = diagrams
        .par_iter()
        .map(|d| {
            let layout = d.layout();
            let regions = layout.regions.len();
            let mut out = Vec::new();
            for b_parity in [false, true] {
                let free: Vec<usize> =
                    (0..regions).filter(|&r| layout.regions[r].inside != b_parity).collect();
                for mask in 0u64..(1u64 << free.len()) {
                    let mut labels = vec![Label::B; regions];
                    for (bit, &r) in free.iter().enumerate() {
                        labels[r] = if mask >> bit & 1 == 1 { Label::C } else { Label::A };
                    }
                    if let Some(cap) = per_side {
                        let side_chords = |want: Label| {
                            layout
                                .chords
                                .iter()
                                .enumerate()
                                .filter(|&(c, _)| {
                                    let (x, y) = layout.chord_sides(c);
                                    labels[x] == want || labels[y] == want
                                })
                                .count()
                        };
                        if side_chords(Label::A) > cap || side_chords(Label::C) > cap {
                            continue;
                        }
                    }
                    out.push(CombinedDiagram { diagram: d.clone(), labels });
                }
            }
            out
        })
        .collect();
    per.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (0..6).map(|k| non_crossing_matchings(k).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 14, 42]);
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(4, 3).len(), 15);
        assert_eq!(compositions(0, 4), vec![vec![0, 0, 0, 0]]);
    }

    #[test]
    fn small_enumeration_examples() {
        assert_eq!(enumerate_subsurfaces(4, 1, true).len(), 6);
        assert_eq!(enumerate_subsurfaces(2, 3, true).len(), 2);
        assert_eq!(enumerate_subsurfaces(4, 0, false).len(), 2);
    }

    #[test]
    fn matches_brute_force() {
        for n in [2, 4, 6] {
            for k in 0..=3 {
                for ess in [false, true] {
                    let fast = enumerate_subsurfaces(n, k, ess);
                    let set: HashSet<Subsurface> = fast.iter().cloned().collect();
                    assert_eq!(set.len(), fast.len(), "duplicates at N={n} k={k}");
                    assert_eq!(set, brute_force_classes(n, k, ess), "N={n} k={k} ess={ess}");
                }
            }
        }
    }

    #[test]
    fn combined_pairs_are_disjoint_and_nested() {
        for cd in enumerate_combined(6, 2, false, None) {
            let a = cd.first();
            let c = cd.second();
            let outer = cd.outer();
            assert_eq!(outer, c.complement());
            for i in 1..=6 {
                assert!(!(a.point_inside(i) && c.point_inside(i)));
                assert!(!a.point_inside(i) || outer.point_inside(i));
            }
        }
    }
}
