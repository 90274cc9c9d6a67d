//! Editable boundary word used to apply moves and track component lineage.
//!
//! The word lists marked points and chord endpoints in boundary order
//! starting at `x_1`. Removed endpoints stay in place as tombstones so that
//! the old and new diagrams can be overlaid.

use super::layout::Gap;
use super::{End, Subsurface};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Point(u32),
    End { chord: usize },
}

#[derive(Clone, Copy, Debug)]
struct Item {
    kind: Kind,
    old: Option<usize>,
    alive: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct Word<'a> {
    src: &'a Subsurface,
    items: Vec<Item>,
    next_chord: usize,
    flipped: u64,
}

impl<'a> Word<'a> {
    pub(crate) fn new(src: &'a Subsurface) -> Self {
        let chord_of_end = src.chord_of_end();
        let mut items = Vec::with_capacity(src.point_count() as usize + src.end_count());
        let mut t = 0;
        for e in 1..=src.point_count() {
            items.push(Item { kind: Kind::Point(e), old: None, alive: true });
            while t < src.end_count() && src.ends()[t].edge == e {
                items.push(Item {
                    kind: Kind::End { chord: chord_of_end[t] },
                    old: Some(t),
                    alive: true,
                });
                t += 1;
            }
        }
        Word { src, items, next_chord: src.chord_count(), flipped: 0 }
    }

    pub(crate) fn fresh_chord(&mut self) -> usize {
        self.next_chord += 1;
        self.next_chord - 1
    }

    fn point_index(&self, i: u32) -> usize {
        self.items.iter().position(|it| it.kind == Kind::Point(i)).expect("point present")
    }

    fn end_index(&self, old: usize) -> usize {
        self.items.iter().position(|it| it.old == Some(old)).expect("endpoint present")
    }

    /// Word index where new endpoints for `gap` go.
    fn gap_index(&self, gap: Gap) -> usize {
        let mut idx = self.point_index(gap.edge) + 1;
        let mut seen = 0;
        while seen < gap.slot {
            if self.items[idx].old.is_some() {
                seen += 1;
            }
            idx += 1;
        }
        idx
    }

    fn insert(&mut self, idx: usize, chords: &[usize]) {
        let new = chords.iter().map(|&c| Item { kind: Kind::End { chord: c }, old: None, alive: true });
        self.items.splice(idx..idx, new);
    }

    /// Insert fresh endpoints with the given chord ids at a gap, in order.
    pub(crate) fn insert_at_gap(&mut self, gap: Gap, chords: &[usize]) {
        let idx = self.gap_index(gap);
        self.insert(idx, chords);
    }

    /// Insert endpoints immediately before and after marked point `x_i`.
    pub(crate) fn surround_point(&mut self, i: u32, chord: usize) {
        let p = self.point_index(i);
        self.insert(p + 1, &[chord]);
        if p == 0 {
            self.items.push(Item { kind: Kind::End { chord }, old: None, alive: true });
        } else {
            self.insert(p, &[chord]);
        }
        self.flipped ^= 1 << (i - 1);
    }

    pub(crate) fn remove_end(&mut self, old: usize) {
        let idx = self.end_index(old);
        self.items[idx].alive = false;
    }

    pub(crate) fn set_chord(&mut self, old: usize, chord: usize) {
        let idx = self.end_index(old);
        if let Kind::End { chord: c } = &mut self.items[idx].kind {
            *c = chord;
        }
    }

    pub(crate) fn chord_of(&self, old: usize) -> usize {
        match self.items[self.end_index(old)].kind {
            Kind::End { chord } => chord,
            Kind::Point(_) => unreachable!(),
        }
    }

    /// Slide endpoint `old` across the adjacent marked point `x_i`.
    pub(crate) fn slide_across(&mut self, old: usize, i: u32) {
        let chord = self.chord_of(old);
        self.remove_end(old);
        let p = self.point_index(i);
        let e = self.src.ends()[old].edge;
        if e == i {
            // end sits just after x_i and moves to just before it
            if p == 0 {
                self.items.push(Item { kind: Kind::End { chord }, old: None, alive: true });
            } else {
                self.insert(p, &[chord]);
            }
        } else {
            self.insert(p + 1, &[chord]);
        }
        self.flipped ^= 1 << (i - 1);
    }

    pub(crate) fn flip_points(&mut self, mask: u64) {
        self.flipped ^= mask;
    }

    /// Assemble the new canonical subsurface.
    pub(crate) fn finish(&self) -> Subsurface {
        let x1_in = self.src.point_inside(1) ^ (self.flipped & 1 != 0);
        let mut chords: Vec<(Option<End>, Option<End>)> = vec![(None, None); self.next_chord];
        let mut edge = 0;
        let mut slot = 0;
        for it in &self.items {
            match it.kind {
                Kind::Point(i) => {
                    edge = i;
                    slot = 0;
                }
                Kind::End { chord } if it.alive => {
                    let end = End::new(edge, slot);
                    slot += 1;
                    let entry = &mut chords[chord];
                    if entry.0.is_none() {
                        entry.0 = Some(end);
                    } else {
                        debug_assert!(entry.1.is_none(), "chord {chord} has three ends");
                        entry.1 = Some(end);
                    }
                }
                Kind::End { .. } => {}
            }
        }
        let list: Vec<(End, End)> = chords
            .into_iter()
            .filter_map(|c| match c {
                (Some(a), Some(b)) => Some((a, b)),
                (None, None) => None,
                _ => panic!("unpaired endpoint while applying a move"),
            })
            .collect();
        Subsurface::from_chord_list(self.src.point_count(), &list, x1_in)
    }

    /// Pairs `(old component, new component)` of regions sharing a boundary
    /// interval that lies in both subsurfaces. Components are region indices.
    pub(crate) fn lineage(&self, new: &Subsurface) -> Vec<(usize, usize)> {
        let old = self.src;
        let old_layout = old.layout();
        let new_layout = new.layout();
        // new endpoint index of each alive item, in order
        let mut new_idx = vec![None; self.items.len()];
        let mut k = 0;
        for (i, it) in self.items.iter().enumerate() {
            if matches!(it.kind, Kind::End { .. }) && it.alive {
                new_idx[i] = Some(k);
                k += 1;
            }
        }
        debug_assert_eq!(k, new.end_count());
        let mut last_old = (0..self.items.len()).rev().find_map(|i| self.items[i].old);
        let mut last_new = (0..self.items.len()).rev().find_map(|i| new_idx[i]);
        let mut links = Vec::new();
        for i in 0..self.items.len() {
            if let Some(o) = self.items[i].old {
                last_old = Some(o);
            }
            if let Some(n) = new_idx[i] {
                last_new = Some(n);
            }
            let (old_in, old_r) = match last_old {
                Some(t) => (old.arc_inside(t), old_layout.arc_region[t]),
                None => (old.x1_in(), 0),
            };
            let (new_in, new_r) = match last_new {
                Some(t) => (new.arc_inside(t), new_layout.arc_region[t]),
                None => (new.x1_in(), 0),
            };
            if old_in && new_in {
                links.push((old_r, new_r));
            }
        }
        links.sort_unstable();
        links.dedup();
        links
    }
}
