//! The CW model of the Seifert surface `Σ_{p,q}` of the `(p,q)` torus knot.
//!
//! `Σ_{p,q}` is built from disks `U_1..U_p` and `V_1..V_q`, with `U_i` glued
//! to `V_j` along a single arc `α_{i,j}`. Each piece is a marked disk whose
//! marked points are the endpoints of its α arcs: `U_i` carries `2q` points,
//! `V_j` carries `2p`. On every piece the odd edges `e_{2k-1}` are α sides and
//! the even edges `e_{2k}` are arcs of the knot.
//!
//! Local labels are chosen so that the monodromy `f`, which sends `U_i` to
//! `U_{i+1}`, `V_j` to `V_{j+1}` and `α_{i,j}` to `α_{i+1,j+1}`, is the identity
//! on labels except on the wrap-around pieces `U_p -> U_1` and `V_q -> V_1`.

pub(crate) mod glued;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disk::MarkedDisk;

pub use glued::{glued_chi, GluedChi, GluedError, GluedSubsurface, Trace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("p = {0} and q = {1} are not coprime")]
    NotCoprime(u32, u32),
    #[error("p = {0} and q = {1} must both be at least 2")]
    DegenerateParameters(u32, u32),
    #[error("cell {0} does not belong to the complex")]
    UnknownCell(Cell),
}

/// A 2-cell of the complex.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Piece {
    U(u32),
    V(u32),
}

impl fmt::Display for Piece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Piece::U(i) => write!(f, "U{i}"),
            Piece::V(j) => write!(f, "V{j}"),
        }
    }
}

/// A cell permuted by the monodromy.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Cell {
    U(u32),
    V(u32),
    Alpha(u32, u32),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::U(i) => write!(f, "U{i}"),
            Cell::V(j) => write!(f, "V{j}"),
            Cell::Alpha(i, j) => write!(f, "alpha({i},{j})"),
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `i` reduced into `1..=m`.
fn wrap(i: i64, m: u32) -> u32 {
    ((i - 1).rem_euclid(m as i64) + 1) as u32
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&x| self.find(x) == x).count()
    }
}

/// Cell structure of `Σ_{p,q}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct TorusKnotComplex {
    p: u32,
    q: u32,
}

/// Summary table of a built complex.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ComplexSummary {
    pub p: u32,
    pub q: u32,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub boundary_components: usize,
    pub genus: i64,
    pub orbit_lengths: Vec<usize>,
}

impl TorusKnotComplex {
    pub fn new(p: u32, q: u32) -> Result<Self, ComplexError> {
        if p < 2 || q < 2 {
            return Err(ComplexError::DegenerateParameters(p, q));
        }
        if gcd(p, q) != 1 {
            return Err(ComplexError::NotCoprime(p, q));
        }
        Ok(TorusKnotComplex { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Pieces in storage order `U_1..U_p, V_1..V_q`.
    pub fn pieces(&self) -> Vec<Piece> {
        (1..=self.p).map(Piece::U).chain((1..=self.q).map(Piece::V)).collect()
    }

    pub fn piece_index(&self, piece: Piece) -> usize {
        match piece {
            Piece::U(i) => i as usize - 1,
            Piece::V(j) => (self.p + j) as usize - 1,
        }
    }

    pub fn contains(&self, piece: Piece) -> bool {
        match piece {
            Piece::U(i) => (1..=self.p).contains(&i),
            Piece::V(j) => (1..=self.q).contains(&j),
        }
    }

    /// Marked disk model of a piece.
    pub fn disk(&self, piece: Piece) -> MarkedDisk {
        let n = match piece {
            Piece::U(_) => 2 * self.q,
            Piece::V(_) => 2 * self.p,
        };
        MarkedDisk::new(n).expect("piece sizes are even and at least 4")
    }

    /// Number of α sides on the boundary of a piece.
    pub fn sides(&self, piece: Piece) -> u32 {
        match piece {
            Piece::U(_) => self.q,
            Piece::V(_) => self.p,
        }
    }

    /// The arc `α_{i,j}` on local side `k` of a piece.
    pub fn side_arc(&self, piece: Piece, k: u32) -> (u32, u32) {
        match piece {
            Piece::U(i) => (i, wrap(i as i64 + k as i64 - 1, self.q)),
            Piece::V(j) => (wrap(j as i64 + k as i64 - 1, self.p), j),
        }
    }

    /// Local side of `piece` carrying `α_{i,j}`.
    pub fn arc_side(&self, piece: Piece, arc: (u32, u32)) -> u32 {
        let (i, j) = arc;
        match piece {
            Piece::U(u) => {
                debug_assert_eq!(u, i);
                wrap(j as i64 - i as i64 + 1, self.q)
            }
            Piece::V(v) => {
                debug_assert_eq!(v, j);
                wrap(i as i64 - j as i64 + 1, self.p)
            }
        }
    }

    /// The piece across α side `k`, and that side's label over there.
    pub fn across(&self, piece: Piece, k: u32) -> (Piece, u32) {
        let (i, j) = self.side_arc(piece, k);
        match piece {
            Piece::U(_) => (Piece::V(j), self.arc_side(Piece::V(j), (i, j))),
            Piece::V(_) => (Piece::U(i), self.arc_side(Piece::U(i), (i, j))),
        }
    }

    /// Image of a piece under `f` and the rotation, in marked-point steps,
    /// relating local labels.
    pub fn monodromy_piece(&self, piece: Piece) -> (Piece, i64) {
        match piece {
            Piece::U(i) if i == self.p => (Piece::U(1), (2 * self.p % (2 * self.q)) as i64),
            Piece::U(i) => (Piece::U(i + 1), 0),
            Piece::V(j) if j == self.q => (Piece::V(1), (2 * self.q % (2 * self.p)) as i64),
            Piece::V(j) => (Piece::V(j + 1), 0),
        }
    }

    pub fn cells(&self) -> Vec<Cell> {
        let mut cells: Vec<Cell> = (1..=self.p).map(Cell::U).collect();
        cells.extend((1..=self.q).map(Cell::V));
        for i in 1..=self.p {
            for j in 1..=self.q {
                cells.push(Cell::Alpha(i, j));
            }
        }
        cells
    }

    /// The cellular monodromy `f`.
    pub fn monodromy_cell(&self, cell: Cell) -> Result<Cell, ComplexError> {
        let (p, q) = (self.p, self.q);
        match cell {
            Cell::U(i) if (1..=p).contains(&i) => Ok(Cell::U(i % p + 1)),
            Cell::V(j) if (1..=q).contains(&j) => Ok(Cell::V(j % q + 1)),
            Cell::Alpha(i, j) if (1..=p).contains(&i) && (1..=q).contains(&j) => {
                Ok(Cell::Alpha(i % p + 1, j % q + 1))
            }
            _ => Err(ComplexError::UnknownCell(cell)),
        }
    }

    /// Orbits of `f` on cells, each listed from its smallest cell.
    pub fn orbits(&self) -> Vec<Vec<Cell>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in self.cells() {
            if seen.contains(&c) {
                continue;
            }
            let mut orbit = vec![c];
            seen.insert(c);
            let mut x = self.monodromy_cell(c).expect("own cell");
            while x != c {
                seen.insert(x);
                orbit.push(x);
                x = self.monodromy_cell(x).expect("own cell");
            }
            out.push(orbit);
        }
        out
    }

    /// Corner `x_m` of a piece as a flat index.
    fn corner(&self, piece: Piece, m: u32) -> usize {
        let base = match piece {
            Piece::U(i) => (i as usize - 1) * 2 * self.q as usize,
            Piece::V(j) => (self.p * 2 * self.q) as usize + (j as usize - 1) * 2 * self.p as usize,
        };
        base + m as usize - 1
    }

    /// Union-find over piece corners after gluing along the α arcs.
    fn vertex_classes(&self) -> UnionFind {
        let mut uf = UnionFind::new(4 * (self.p * self.q) as usize);
        for i in 1..=self.p {
            for k in 1..=self.q {
                let u = Piece::U(i);
                let (v, k2) = self.across(u, k);
                // orientation-reversing identification of the two sides
                uf.union(self.corner(u, 2 * k - 1), self.corner(v, 2 * k2));
                uf.union(self.corner(u, 2 * k), self.corner(v, 2 * k2 - 1));
            }
        }
        uf
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_classes().classes()
    }

    /// α arcs plus knot arcs.
    pub fn edge_count(&self) -> usize {
        (3 * self.p * self.q) as usize
    }

    pub fn face_count(&self) -> usize {
        (self.p + self.q) as usize
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Boundary circles, traced through the knot arcs.
    pub fn boundary_components(&self) -> usize {
        let mut vertices = self.vertex_classes();
        let mut arcs = Vec::new();
        for piece in self.pieces() {
            let n = 2 * self.sides(piece);
            for k in 1..=self.sides(piece) {
                let a = vertices.find(self.corner(piece, 2 * k));
                let b = vertices.find(self.corner(piece, wrap(2 * k as i64 + 1, n)));
                arcs.push((a, b));
            }
        }
        let mut uf = UnionFind::new(arcs.len());
        for x in 0..arcs.len() {
            for y in x + 1..arcs.len() {
                let (a, b) = arcs[x];
                let (c, d) = arcs[y];
                if a == c || a == d || b == c || b == d {
                    uf.union(x, y);
                }
            }
        }
        uf.classes()
    }

    pub fn genus(&self) -> i64 {
        (2 - self.boundary_components() as i64 - self.euler_characteristic()) / 2
    }

    pub fn summary(&self) -> ComplexSummary {
        let mut orbit_lengths: Vec<usize> = self.orbits().iter().map(Vec::len).collect();
        orbit_lengths.sort_unstable();
        ComplexSummary {
            p: self.p,
            q: self.q,
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            faces: self.face_count(),
            euler_characteristic: self.euler_characteristic(),
            boundary_components: self.boundary_components(),
            genus: self.genus(),
            orbit_lengths,
        }
    }
}

/// Build `Σ_{p,q}`.
pub fn build_complex(p: u32, q: u32) -> Result<TorusKnotComplex, ComplexError> {
    TorusKnotComplex::new(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(build_complex(2, 4), Err(ComplexError::NotCoprime(2, 4)));
        assert_eq!(build_complex(1, 3), Err(ComplexError::DegenerateParameters(1, 3)));
    }

    #[test]
    fn small_invariants() {
        for (p, q, g) in [(2, 3, 1), (3, 4, 3), (5, 6, 10)] {
            let cx = build_complex(p, q).unwrap();
            assert_eq!(cx.euler_characteristic(), (p + q) as i64 - (p * q) as i64);
            assert_eq!(cx.vertex_count(), (2 * p * q) as usize);
            assert_eq!(cx.boundary_components(), 1);
            assert_eq!(cx.genus(), g);
        }
    }

    #[test]
    fn monodromy_examples() {
        let cx = build_complex(2, 3).unwrap();
        assert_eq!(cx.monodromy_cell(Cell::U(1)), Ok(Cell::U(2)));
        assert_eq!(cx.monodromy_cell(Cell::Alpha(2, 3)), Ok(Cell::Alpha(1, 1)));
        assert_eq!(cx.monodromy_cell(Cell::V(4)), Err(ComplexError::UnknownCell(Cell::V(4))));
        for c in cx.cells() {
            let mut x = c;
            for _ in 0..6 {
                x = cx.monodromy_cell(x).unwrap();
            }
            assert_eq!(x, c);
        }
        assert_eq!(cx.summary().orbit_lengths, vec![2, 3, 6]);
    }

    #[test]
    fn side_labels_are_consistent() {
        let cx = build_complex(3, 5).unwrap();
        for piece in cx.pieces() {
            for k in 1..=cx.sides(piece) {
                let (other, k2) = cx.across(piece, k);
                assert_eq!(cx.across(other, k2), (piece, k));
                let arc = cx.side_arc(piece, k);
                let (img, steps) = cx.monodromy_piece(piece);
                let (i, j) = arc;
                let target = (i % cx.p() + 1, j % cx.q() + 1);
                let k_img = wrap(k as i64 + steps / 2, cx.sides(piece));
                assert_eq!(cx.side_arc(img, k_img), target);
            }
        }
    }
}
