//! The twelve doubly periodic source tilings, stored as one translation cell each.
//!
//! Cells are generated from a few representative vertices and edges closed under known
//! symmetries; faces, vertex types, point groups and edge orbits are then derived from
//! the exact embedding rather than tabulated.

pub mod geometry;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{LatticeMatrix, HALF_TURN, HEX_REFLECTION, HEX_ROTATION, SQUARE_REFLECTION, SQUARE_ROTATION};
use crate::unionfind::UnionFind;
use geometry::{angular_cmp, AffineMap, PeriodicGraph, Point, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error("unknown tiling tag {0:?}")]
    UnknownTag(String),
    #[error("operation not defined for tiling {0}")]
    Unsupported(TilingType),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TilingType {
    Triangular,
    Square,
    Hexagonal,
    Trihexagonal,
    Rhombille,
    SnubHexagonal,
    ElongatedTriangular,
    SnubSquare,
    Rhombitrihexagonal,
    TruncatedHexagonal,
    TruncatedTrihexagonal,
    TruncatedSquare,
}

impl TilingType {
    pub const ALL: [TilingType; 12] = [
        TilingType::Triangular,
        TilingType::Square,
        TilingType::Hexagonal,
        TilingType::Trihexagonal,
        TilingType::Rhombille,
        TilingType::SnubHexagonal,
        TilingType::ElongatedTriangular,
        TilingType::SnubSquare,
        TilingType::Rhombitrihexagonal,
        TilingType::TruncatedHexagonal,
        TilingType::TruncatedTrihexagonal,
        TilingType::TruncatedSquare,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            TilingType::Triangular => "3^6",
            TilingType::Square => "4^4",
            TilingType::Hexagonal => "6^3",
            TilingType::Trihexagonal => "3.6.3.6",
            TilingType::Rhombille => "rhombille",
            TilingType::SnubHexagonal => "3^4.6",
            TilingType::ElongatedTriangular => "3^3.4^2",
            TilingType::SnubSquare => "3^2.4.3.4",
            TilingType::Rhombitrihexagonal => "3.4.6.4",
            TilingType::TruncatedHexagonal => "3.12^2",
            TilingType::TruncatedTrihexagonal => "4.6.12",
            TilingType::TruncatedSquare => "4.8^2",
        }
    }

    /// Every edge carries the same edge symbol.
    pub fn is_edge_homogeneous(&self) -> bool {
        matches!(
            self,
            TilingType::Triangular
                | TilingType::Square
                | TilingType::Hexagonal
                | TilingType::Trihexagonal
                | TilingType::Rhombille
        )
    }

    pub fn edge_homogeneous() -> impl Iterator<Item = TilingType> {
        Self::ALL.into_iter().filter(TilingType::is_edge_homogeneous)
    }

    pub fn semi_equivelar() -> impl Iterator<Item = TilingType> {
        Self::ALL.into_iter().filter(|t| !t.is_edge_homogeneous())
    }

    fn square_based(&self) -> bool {
        matches!(self, TilingType::Square | TilingType::SnubSquare | TilingType::TruncatedSquare)
    }
}

impl fmt::Display for TilingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for TilingType {
    type Err = TilingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TilingType::ALL.into_iter().find(|t| t.tag() == s).ok_or_else(|| TilingError::UnknownTag(s.to_string()))
    }
}

impl TryFrom<String> for TilingType {
    type Error = TilingError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<TilingType> for String {
    fn from(t: TilingType) -> Self {
        t.tag().to_string()
    }
}

/// `(face sizes; vertex valences)` of an edge, each pair sorted ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeSymbol {
    pub face_sizes: [usize; 2],
    pub valences: [usize; 2],
}

impl EdgeSymbol {
    pub fn new(face_sizes: [usize; 2], valences: [usize; 2]) -> Self {
        let sort = |[x, y]: [usize; 2]| if x <= y { [x, y] } else { [y, x] };
        EdgeSymbol { face_sizes: sort(face_sizes), valences: sort(valences) }
    }

    /// Odd valence forces equal faces; odd face size forces equal valences.
    pub fn is_consistent(&self) -> bool {
        let [m, l] = self.face_sizes;
        let [u, v] = self.valences;
        (u % 2 == 0 && v % 2 == 0 || m == l) && (m % 2 == 0 && l % 2 == 0 || u == v)
    }
}

impl fmt::Display for EdgeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{},{})", self.face_sizes[0], self.face_sizes[1], self.valences[0], self.valences[1])
    }
}

/// Canonical vertex-type string of a cyclic face-size sequence, e.g. `3^2.4.3.4`.
pub fn vertex_type_string(cycle: &[usize]) -> String {
    let n = cycle.len();
    let mut best: Option<Vec<usize>> = None;
    for start in 0..n {
        for reversed in [false, true] {
            let seq: Vec<usize> =
                (0..n).map(|i| if reversed { cycle[(start + n - i) % n] } else { cycle[(start + i) % n] }).collect();
            if best.as_ref().is_none_or(|b| seq < *b) {
                best = Some(seq);
            }
        }
    }
    let seq = best.unwrap_or_default();
    let mut parts = Vec::new();
    let mut i = 0;
    while i < seq.len() {
        let mut j = i;
        while j < seq.len() && seq[j] == seq[i] {
            j += 1;
        }
        parts.push(if j - i == 1 { seq[i].to_string() } else { format!("{}^{}", seq[i], j - i) });
        i = j;
    }
    parts.join(".")
}

/// `rational + root3·√3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Surd {
    pub rational: Rational,
    pub root3: Rational,
}

impl Surd {
    fn new(rational: Rational, root3: Rational) -> Self {
        Surd { rational, root3 }
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: Rational| *r.numer() as f64 / *r.denom() as f64;
        f(self.rational) + f(self.root3) * 3f64.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellVertex {
    pub id: usize,
    pub position: Point,
    pub vertex_type: String,
}

/// The head endpoint lies in the cell translated by `shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellEdge {
    pub tail: usize,
    pub head: usize,
    pub shift: [i64; 2],
}

/// One side of a face boundary: edge `edge`, traversed head-to-tail when `reversed`,
/// in the copy whose starting vertex sits in the cell translated by `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceDart {
    pub edge: usize,
    pub reversed: bool,
    pub offset: [i64; 2],
}

impl FaceDart {
    /// Translation of the edge copy this dart runs along (the copy's tail cell).
    pub fn edge_translation(&self, edges: &[CellEdge]) -> [i64; 2] {
        if self.reversed {
            let s = edges[self.edge].shift;
            [self.offset[0] - s[0], self.offset[1] - s[1]]
        } else {
            self.offset
        }
    }
}

/// Counter-clockwise boundary walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellFace {
    pub darts: Vec<FaceDart>,
}

/// A symmetry of the tiling modulo translations, with its action on cell edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symmetry {
    pub map: AffineMap,
    pub edge_image: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PeriodicTiling {
    pub kind: TilingType,
    pub cell_vertices: Vec<CellVertex>,
    pub cell_edges: Vec<CellEdge>,
    pub cell_faces: Vec<CellFace>,
    /// Euclidean translation vectors.
    pub basis_a: [Surd; 2],
    pub basis_b: [Surd; 2],
    /// Linear parts of the symmetries, in the translation basis.
    pub point_group: Vec<LatticeMatrix>,
    pub symmetries: Vec<Symmetry>,
    pub plane_edge_orbit_count: usize,
    pub edge_symbol: Option<EdgeSymbol>,
    pub assoc_equivelar: Option<(TilingType, LatticeMatrix)>,
}

impl PeriodicTiling {
    /// Face sizes around each vertex in counter-clockwise order.
    pub fn face_cycles(&self) -> Vec<Vec<usize>> {
        let rotation =
            rotation_system(&self.cell_vertices.iter().map(|v| v.position).collect::<Vec<_>>(), &self.cell_edges);
        let mut face_of = std::collections::HashMap::new();
        for (f, face) in self.cell_faces.iter().enumerate() {
            for d in &face.darts {
                face_of.insert((d.edge, d.reversed), f);
            }
        }
        rotation.iter().map(|darts| darts.iter().map(|d| self.cell_faces[face_of[d]].darts.len()).collect()).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.cell_vertices.len()];
        for e in &self.cell_edges {
            deg[e.tail] += 1;
            deg[e.head] += 1;
        }
        deg
    }

    /// Distinct vertex types, sorted.
    pub fn vertex_types(&self) -> Vec<String> {
        self.cell_vertices.iter().map(|v| v.vertex_type.clone()).collect::<BTreeSet<_>>().into_iter().collect()
    }

    /// Edge symbols of the cell edges.
    pub fn edge_symbols(&self) -> Vec<EdgeSymbol> {
        let deg = self.degrees();
        let mut size_of = std::collections::HashMap::new();
        for face in &self.cell_faces {
            for d in &face.darts {
                size_of.insert((d.edge, d.reversed), face.darts.len());
            }
        }
        self.cell_edges
            .iter()
            .enumerate()
            .map(|(j, e)| EdgeSymbol::new([size_of[&(j, false)], size_of[&(j, true)]], [deg[e.tail], deg[e.head]]))
            .collect()
    }

    /// Number of cell-edge classes under translations and the symmetries whose linear part
    /// lies in `linear_parts`.
    pub fn edge_orbits_under(&self, linear_parts: &[LatticeMatrix]) -> usize {
        let mut uf = UnionFind::new(self.cell_edges.len());
        for s in self.symmetries.iter().filter(|s| linear_parts.contains(&s.map.linear)) {
            for (j, &img) in s.edge_image.iter().enumerate() {
                uf.union(j, img);
            }
        }
        uf.count()
    }

    /// Counts of (vertices, edges, faces) per translation cell.
    pub fn cell_counts(&self) -> (usize, usize, usize) {
        (self.cell_vertices.len(), self.cell_edges.len(), self.cell_faces.len())
    }
}

/// Outgoing darts `(edge, reversed)` at each vertex in counter-clockwise order.
fn rotation_system(positions: &[Point], edges: &[CellEdge]) -> Vec<Vec<(usize, bool)>> {
    let mut out: Vec<Vec<((usize, bool), Point)>> = vec![Vec::new(); positions.len()];
    for (j, e) in edges.iter().enumerate() {
        let head = positions[e.head].shifted(e.shift);
        out[e.tail].push(((j, false), head - positions[e.tail]));
        out[e.head].push(((j, true), positions[e.tail] - head));
    }
    out.into_iter()
        .map(|mut darts| {
            darts.sort_by(|x, y| angular_cmp(x.1, y.1));
            darts.into_iter().map(|(d, _)| d).collect()
        })
        .collect()
}

/// Traces every face as the walk keeping the face on its left.
fn trace_faces(positions: &[Point], edges: &[CellEdge]) -> Vec<CellFace> {
    let rotation = rotation_system(positions, edges);
    let mut slot = std::collections::HashMap::new();
    for (v, darts) in rotation.iter().enumerate() {
        for (i, d) in darts.iter().enumerate() {
            slot.insert(*d, (v, i));
        }
    }
    let head_shift = |(j, rev): (usize, bool)| {
        let s = edges[j].shift;
        if rev {
            [-s[0], -s[1]]
        } else {
            s
        }
    };
    let mut visited = BTreeSet::new();
    let mut faces = Vec::new();
    for j in 0..edges.len() {
        for rev in [false, true] {
            let start = (j, rev);
            if visited.contains(&start) {
                continue;
            }
            let mut darts = Vec::new();
            let mut cur = start;
            let mut offset = [0i64, 0];
            loop {
                visited.insert(cur);
                darts.push(FaceDart { edge: cur.0, reversed: cur.1, offset });
                let s = head_shift(cur);
                offset = [offset[0] + s[0], offset[1] + s[1]];
                let (head, i) = slot[&(cur.0, !cur.1)];
                let deg = rotation[head].len();
                cur = rotation[head][(i + deg - 1) % deg];
                if cur == start {
                    assert_eq!(offset, [0, 0], "face boundary does not close");
                    break;
                }
                assert!(darts.len() <= 4 * edges.len(), "face walk does not terminate");
            }
            faces.push(CellFace { darts });
        }
    }
    faces
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn hex_basis() -> ([Surd; 2], [Surd; 2]) {
    (
        [Surd::new(r(1, 1), r(0, 1)), Surd::new(r(0, 1), r(0, 1))],
        [Surd::new(r(1, 2), r(0, 1)), Surd::new(r(0, 1), r(1, 2))],
    )
}

fn square_basis() -> ([Surd; 2], [Surd; 2]) {
    (
        [Surd::new(r(1, 1), r(0, 1)), Surd::new(r(0, 1), r(0, 1))],
        [Surd::new(r(0, 1), r(0, 1)), Surd::new(r(1, 1), r(0, 1))],
    )
}

fn hex_group() -> Vec<AffineMap> {
    vec![AffineMap::linear(HEX_ROTATION), AffineMap::linear(HEX_REFLECTION)]
}

fn square_group() -> Vec<AffineMap> {
    vec![AffineMap::linear(SQUARE_ROTATION), AffineMap::linear(SQUARE_REFLECTION)]
}

fn seg(p: Point, q: Point) -> (Point, Point) {
    (p, q)
}

/// Vertex positions and edges for one cell of each tiling.
fn cell_graph(t: TilingType) -> PeriodicGraph {
    let o = Point::int(0, 0);
    let third = Point::ratio(1, 3, 1, 3);
    let two_thirds = Point::ratio(2, 3, 2, 3);
    match t {
        TilingType::Triangular => PeriodicGraph::generate(&[o], &[seg(o, Point::int(1, 0))], &hex_group()),
        TilingType::Square => PeriodicGraph::generate(&[o], &[seg(o, Point::int(1, 0))], &square_group()),
        TilingType::Hexagonal => PeriodicGraph::generate(&[third], &[seg(third, two_thirds)], &hex_group()),
        TilingType::Trihexagonal => {
            let a = Point::ratio(1, 2, 0, 1);
            let c = Point::ratio(1, 2, 1, 2);
            PeriodicGraph::generate(&[a], &[seg(a, c)], &hex_group())
        }
        TilingType::Rhombille => PeriodicGraph::generate(&[o, third], &[seg(o, third)], &hex_group()),
        TilingType::SnubHexagonal => snub_hexagonal(),
        TilingType::ElongatedTriangular => {
            let v0 = o;
            let v1 = Point::ratio(-1, 4, 1, 2);
            let edges = [
                seg(v0, v0.shifted([1, 0])),
                seg(v1, v1.shifted([1, 0])),
                seg(v0, v1),
                seg(v1, v0.shifted([0, 1])),
                seg(v1, v0.shifted([-1, 1])),
            ];
            PeriodicGraph::generate(&[v0, v1], &edges, &[])
        }
        TilingType::SnubSquare => {
            let v1 = Point::ratio(1, 5, 3, 10);
            let v2 = v1.transform(&SQUARE_ROTATION.adjugate());
            let v3 = v2.transform(&SQUARE_ROTATION.adjugate());
            let v4 = v3.transform(&SQUARE_ROTATION.adjugate());
            let edges = [
                seg(v1, v2),
                seg(v2, v3),
                seg(v3, v4),
                seg(v4, v1),
                seg(v1, v2.shifted([1, 0])),
                seg(v2.shifted([1, 0]), v3.shifted([1, 1])),
                seg(v3.shifted([1, 1]), v4.shifted([0, 1])),
                seg(v4.shifted([0, 1]), v1),
                seg(v1, v3.shifted([0, 1])),
                seg(v2, v4.shifted([-1, 0])),
            ];
            PeriodicGraph::generate(&[v1, v2, v3, v4], &edges, &[])
        }
        TilingType::Rhombitrihexagonal => {
            let p = Point::ratio(1, 4, 1, 4);
            let q = Point::ratio(2, 4, -1, 4);
            let across = Point::ratio(3, 4, -1, 4);
            PeriodicGraph::generate(&[p], &[seg(p, q), seg(q, across)], &hex_group())
        }
        TilingType::TruncatedHexagonal => {
            let p = Point::ratio(4, 9, 4, 9);
            let p2 = Point::ratio(1, 9, 4, 9);
            let q = Point::ratio(5, 9, 5, 9);
            PeriodicGraph::generate(&[p], &[seg(p, p2), seg(p, q)], &hex_group())
        }
        TilingType::TruncatedTrihexagonal => {
            let (a, b) = (r(1, 3), r(1, 8));
            let p = Point::new(a, b);
            let edges =
                [seg(p, Point::new(b, a)), seg(p, Point::new(a + b, -b)), seg(p, Point::new(r(1, 1) - a - b, b))];
            PeriodicGraph::generate(&[p], &edges, &hex_group())
        }
        TilingType::TruncatedSquare => {
            let p = Point::ratio(1, 4, 0, 1);
            let edges = [seg(p, Point::ratio(0, 1, 1, 4)), seg(p, Point::ratio(3, 4, 0, 1))];
            PeriodicGraph::generate(&[p], &edges, &square_group())
        }
    }
}

/// The triangular lattice with an index-7 sublattice of points removed; every remaining
/// point borders exactly one removed point, which becomes a hexagon centre.
fn snub_hexagonal() -> PeriodicGraph {
    // Coarse basis (2,1), (-1,3) in fine coordinates.
    let coarse = LatticeMatrix::from_columns([2, 1], [-1, 3]);
    let to_coarse = |p: [i64; 2]| {
        let w = coarse.adjugate().apply(p);
        Point::new(Rational::new(w[0], 7), Rational::new(w[1], 7))
    };
    let dirs = [[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]];
    let vertices: Vec<Point> = dirs.iter().map(|&d| to_coarse(d)).collect();
    let mut edges = Vec::new();
    for v in dirs {
        for d in dirs {
            let w = [v[0] + d[0], v[1] + d[1]];
            if !coarse.contains(w) {
                edges.push(seg(to_coarse(v), to_coarse(w)));
            }
        }
    }
    PeriodicGraph::generate(&vertices, &edges, &[])
}

fn basis_for(t: TilingType) -> ([Surd; 2], [Surd; 2]) {
    match t {
        TilingType::ElongatedTriangular => (
            [Surd::new(r(1, 1), r(0, 1)), Surd::new(r(0, 1), r(0, 1))],
            [Surd::new(r(1, 2), r(0, 1)), Surd::new(r(1, 1), r(1, 2))],
        ),
        // Coarse basis (2,1), (-1,3) of the unit triangular lattice.
        TilingType::SnubHexagonal => (
            [Surd::new(r(5, 2), r(0, 1)), Surd::new(r(0, 1), r(1, 2))],
            [Surd::new(r(1, 2), r(0, 1)), Surd::new(r(0, 1), r(3, 2))],
        ),
        t if t.square_based() => square_basis(),
        _ => hex_basis(),
    }
}

/// Builds the cell complex of a tiling; deterministic.
pub fn build_tiling(t: TilingType) -> PeriodicTiling {
    let graph = cell_graph(t);
    let cell_edges: Vec<CellEdge> =
        graph.edges.iter().map(|&(tail, head, shift)| CellEdge { tail, head, shift }).collect();
    let cell_faces = trace_faces(&graph.vertices, &cell_edges);
    let symmetries: Vec<Symmetry> =
        graph.symmetries().into_iter().map(|(map, edge_image)| Symmetry { map, edge_image }).collect();
    let point_group: Vec<LatticeMatrix> =
        symmetries.iter().map(|s| s.map.linear).collect::<BTreeSet<_>>().into_iter().collect();
    let (basis_a, basis_b) = basis_for(t);
    let mut tiling = PeriodicTiling {
        kind: t,
        cell_vertices: graph
            .vertices
            .iter()
            .enumerate()
            .map(|(id, &position)| CellVertex { id, position, vertex_type: String::new() })
            .collect(),
        cell_edges,
        cell_faces,
        basis_a,
        basis_b,
        point_group,
        symmetries,
        plane_edge_orbit_count: 0,
        edge_symbol: None,
        assoc_equivelar: associated_equivelar(t).ok(),
    };
    for (v, cycle) in tiling.face_cycles().into_iter().enumerate() {
        tiling.cell_vertices[v].vertex_type = vertex_type_string(&cycle);
    }
    let symbols: BTreeSet<EdgeSymbol> = tiling.edge_symbols().into_iter().collect();
    if symbols.len() == 1 {
        tiling.edge_symbol = symbols.into_iter().next();
    }
    tiling.plane_edge_orbit_count = if t.is_edge_homogeneous() {
        tiling.edge_orbits_under(&[LatticeMatrix::IDENTITY, HALF_TURN])
    } else {
        tiling.edge_orbits_under(&tiling.point_group.clone())
    };
    tiling
}

/// Dual of an edge-homogeneous tiling.
pub fn dual_tiling(t: TilingType) -> Result<TilingType, TilingError> {
    match t {
        TilingType::Square => Ok(TilingType::Square),
        TilingType::Triangular => Ok(TilingType::Hexagonal),
        TilingType::Hexagonal => Ok(TilingType::Triangular),
        TilingType::Trihexagonal => Ok(TilingType::Rhombille),
        TilingType::Rhombille => Ok(TilingType::Trihexagonal),
        other => Err(TilingError::Unsupported(other)),
    }
}

/// The equivelar tiling sharing the translation lattice of a non-edge-homogeneous tiling,
/// with the matrix expressing this tiling's basis in the equivelar one.
pub fn associated_equivelar(t: TilingType) -> Result<(TilingType, LatticeMatrix), TilingError> {
    match t {
        TilingType::SnubSquare | TilingType::TruncatedSquare => Ok((TilingType::Square, LatticeMatrix::IDENTITY)),
        TilingType::SnubHexagonal
        | TilingType::ElongatedTriangular
        | TilingType::Rhombitrihexagonal
        | TilingType::TruncatedHexagonal
        | TilingType::TruncatedTrihexagonal => Ok((TilingType::Triangular, LatticeMatrix::IDENTITY)),
        other => Err(TilingError::Unsupported(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{d4, d6, generate_group, z6};

    fn expected_counts(t: TilingType) -> (usize, usize, usize) {
        // V from the vertex count per cell; E and F from degree and face-size arithmetic.
        match t {
            TilingType::Triangular => (1, 3, 2),
            TilingType::Square => (1, 2, 1),
            TilingType::Hexagonal => (2, 3, 1),
            TilingType::Trihexagonal => (3, 6, 3),
            TilingType::Rhombille => (3, 6, 3),
            TilingType::SnubHexagonal => (6, 15, 9),
            TilingType::ElongatedTriangular => (2, 5, 3),
            TilingType::SnubSquare => (4, 10, 6),
            TilingType::Rhombitrihexagonal => (6, 12, 6),
            TilingType::TruncatedHexagonal => (6, 9, 3),
            TilingType::TruncatedTrihexagonal => (12, 18, 6),
            TilingType::TruncatedSquare => (4, 6, 2),
        }
    }

    #[test]
    fn tags_roundtrip() {
        for t in TilingType::ALL {
            assert_eq!(t.tag().parse::<TilingType>().unwrap(), t);
        }
        assert!("5^5".parse::<TilingType>().is_err());
        assert_eq!(TilingType::edge_homogeneous().count(), 5);
    }

    #[test]
    fn cell_counts_and_euler() {
        for t in TilingType::ALL {
            let tiling = build_tiling(t);
            let (v, e, f) = tiling.cell_counts();
            assert_eq!((v, e, f), expected_counts(t), "{t}");
            assert_eq!(v + f, e, "{t}");
            assert_eq!(tiling.degrees().iter().sum::<usize>(), 2 * e);
            assert_eq!(tiling.cell_faces.iter().map(|f| f.darts.len()).sum::<usize>(), 2 * e);
        }
    }

    #[test]
    fn vertex_types_match_tags() {
        for t in TilingType::ALL {
            let types = build_tiling(t).vertex_types();
            if t == TilingType::Rhombille {
                assert_eq!(types, vec!["4^3".to_string(), "4^6".to_string()]);
            } else {
                assert_eq!(types, vec![t.tag().to_string()], "{t}");
            }
        }
    }

    #[test]
    fn edge_symbols_of_edge_homogeneous_tilings() {
        let expect = [
            (TilingType::Triangular, ([3, 3], [6, 6])),
            (TilingType::Square, ([4, 4], [4, 4])),
            (TilingType::Hexagonal, ([6, 6], [3, 3])),
            (TilingType::Trihexagonal, ([3, 6], [4, 4])),
            (TilingType::Rhombille, ([4, 4], [3, 6])),
        ];
        for (t, (faces, valences)) in expect {
            let sym = build_tiling(t).edge_symbol.unwrap();
            assert_eq!(sym, EdgeSymbol { face_sizes: faces, valences });
            assert!(sym.is_consistent());
        }
        for t in TilingType::semi_equivelar() {
            assert!(build_tiling(t).edge_symbol.is_none(), "{t}");
        }
    }

    #[test]
    fn point_groups() {
        for t in TilingType::ALL {
            let tiling = build_tiling(t);
            let pg = &tiling.point_group;
            assert!(pg.contains(&HALF_TURN), "{t}");
            assert_eq!(&generate_group(pg), pg, "{t} point group not closed");
            // The cell is primitive: no translation other than the lattice.
            let translations: Vec<_> =
                tiling.symmetries.iter().filter(|s| s.map.linear == LatticeMatrix::IDENTITY).collect();
            assert_eq!(translations.len(), 1, "{t}");
            let expected = match t {
                TilingType::Square | TilingType::SnubSquare | TilingType::TruncatedSquare => d4(),
                TilingType::SnubHexagonal => z6(),
                TilingType::ElongatedTriangular => generate_group(&[HALF_TURN, HEX_REFLECTION]),
                _ => d6(),
            };
            assert_eq!(pg, &expected, "{t}");
        }
    }

    #[test]
    fn plane_edge_orbit_counts() {
        let observed: Vec<(TilingType, usize)> =
            TilingType::ALL.iter().map(|&t| (t, build_tiling(t).plane_edge_orbit_count)).collect();
        let expected = [
            (TilingType::Triangular, 3),
            (TilingType::Square, 2),
            (TilingType::Hexagonal, 3),
            (TilingType::Trihexagonal, 3),
            (TilingType::Rhombille, 3),
            (TilingType::SnubHexagonal, 3),
            (TilingType::ElongatedTriangular, 3),
            (TilingType::SnubSquare, 2),
            (TilingType::Rhombitrihexagonal, 2),
            (TilingType::TruncatedHexagonal, 2),
            (TilingType::TruncatedTrihexagonal, 3),
            (TilingType::TruncatedSquare, 2),
        ];
        assert_eq!(observed, expected);
    }

    #[test]
    fn duals_are_involutive() {
        for t in TilingType::edge_homogeneous() {
            assert_eq!(dual_tiling(dual_tiling(t).unwrap()).unwrap(), t);
        }
        assert_eq!(dual_tiling(TilingType::Square), Ok(TilingType::Square));
        assert_eq!(dual_tiling(TilingType::Triangular), Ok(TilingType::Hexagonal));
        assert!(dual_tiling(TilingType::TruncatedHexagonal).is_err());
    }

    #[test]
    fn associated_equivelar_targets() {
        assert_eq!(associated_equivelar(TilingType::Rhombitrihexagonal).unwrap().0, TilingType::Triangular);
        assert_eq!(associated_equivelar(TilingType::SnubSquare).unwrap().0, TilingType::Square);
        assert_eq!(associated_equivelar(TilingType::TruncatedHexagonal).unwrap().0, TilingType::Triangular);
        for t in TilingType::semi_equivelar() {
            assert_ne!(associated_equivelar(t).unwrap().1.det(), 0);
        }
        for t in TilingType::edge_homogeneous() {
            assert!(associated_equivelar(t).is_err());
        }
    }

    #[test]
    fn vertex_type_canonical_form() {
        assert_eq!(vertex_type_string(&[4, 3, 4, 3, 3]), "3^2.4.3.4");
        assert_eq!(vertex_type_string(&[12, 3, 12]), "3.12^2");
        assert_eq!(vertex_type_string(&[6, 6, 6]), "6^3");
        assert_eq!(vertex_type_string(&[12, 6, 4]), "4.6.12");
    }

    #[test]
    fn build_is_deterministic() {
        for t in TilingType::ALL {
            let a = build_tiling(t);
            let b = build_tiling(t);
            assert_eq!(a.cell_vertices, b.cell_vertices);
            assert_eq!(a.cell_edges, b.cell_edges);
            assert_eq!(a.cell_faces, b.cell_faces);
        }
    }
}
