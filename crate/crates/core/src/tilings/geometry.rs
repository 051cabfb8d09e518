//! Exact rational geometry in translation-basis coordinates.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Ratio;

use crate::lattice::LatticeMatrix;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn ratio(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point { x: Rational::new(xn, xd), y: Rational::new(yn, yd) }
    }

    pub fn int(x: i64, y: i64) -> Self {
        Point { x: Rational::from_integer(x), y: Rational::from_integer(y) }
    }

    pub fn shifted(self, s: [i64; 2]) -> Point {
        self + Point::int(s[0], s[1])
    }

    pub fn floor(self) -> [i64; 2] {
        [self.x.floor().to_integer(), self.y.floor().to_integer()]
    }

    /// Representative in the unit cell `[0,1)²`.
    pub fn frac(self) -> Point {
        let [fx, fy] = self.floor();
        self.shifted([-fx, -fy])
    }

    pub fn transform(self, m: &LatticeMatrix) -> Point {
        Point { x: self.x * m.a + self.y * m.c, y: self.x * m.b + self.y * m.d }
    }
}

impl std::ops::Add for Point {
    type Output = Point;

    fn add(self, o: Point) -> Point {
        Point { x: self.x + o.x, y: self.y + o.y }
    }
}

impl std::ops::Sub for Point {
    type Output = Point;

    fn sub(self, o: Point) -> Point {
        Point { x: self.x - o.x, y: self.y - o.y }
    }
}

/// Counter-clockwise angular order of direction vectors starting from the positive x-axis.
pub fn angular_cmp(u: Point, v: Point) -> Ordering {
    let zero = Rational::from_integer(0);
    let half = |p: Point| if p.y < zero || (p.y == zero && p.x < zero) { 1 } else { 0 };
    half(u).cmp(&half(v)).then_with(|| {
        let cross = u.x * v.y - u.y * v.x;
        zero.cmp(&cross)
    })
}

/// An affine map `p ↦ linear·p + offset` of the plane, read modulo translations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    pub linear: LatticeMatrix,
    pub offset: Point,
}

impl AffineMap {
    pub fn linear(m: LatticeMatrix) -> Self {
        AffineMap { linear: m, offset: Point::int(0, 0) }
    }

    pub fn apply(&self, p: Point) -> Point {
        p.transform(&self.linear) + self.offset
    }
}

/// An undirected segment between two absolute points, normalised modulo translations.
pub fn segment_key(p: Point, q: Point) -> (Point, Point) {
    let norm = |a: Point, b: Point| {
        let [fx, fy] = a.floor();
        (a.shifted([-fx, -fy]), b.shifted([-fx, -fy]))
    };
    norm(p, q).min(norm(q, p))
}

/// Vertex and edge sets of a periodic straight-line graph, reduced to one translation cell.
#[derive(Debug, Clone)]
pub struct PeriodicGraph {
    /// Sorted unit-cell representatives.
    pub vertices: Vec<Point>,
    /// `(tail, head, shift)`: the head lies in the cell translated by `shift`.
    pub edges: Vec<(usize, usize, [i64; 2])>,
}

impl PeriodicGraph {
    /// Closes representative vertices and segments under the given maps and reduces them.
    pub fn generate(vertices: &[Point], segments: &[(Point, Point)], maps: &[AffineMap]) -> Self {
        let mut vset: BTreeSet<Point> = vertices.iter().map(|p| p.frac()).collect();
        let mut queue: Vec<Point> = vset.iter().copied().collect();
        while let Some(p) = queue.pop() {
            for g in maps {
                let q = g.apply(p).frac();
                if vset.insert(q) {
                    queue.push(q);
                }
            }
        }
        let mut eset: BTreeSet<(Point, Point)> = segments.iter().map(|&(p, q)| segment_key(p, q)).collect();
        let mut queue: Vec<(Point, Point)> = eset.iter().copied().collect();
        while let Some((p, q)) = queue.pop() {
            for g in maps {
                let key = segment_key(g.apply(p), g.apply(q));
                if eset.insert(key) {
                    queue.push(key);
                }
            }
        }
        let vertices: Vec<Point> = vset.into_iter().collect();
        let index: BTreeMap<Point, usize> = vertices.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let edges = eset
            .into_iter()
            .map(|(p, q)| {
                let tail = *index.get(&p).unwrap_or_else(|| panic!("segment endpoint {p:?} is not a vertex"));
                let head = *index.get(&q.frac()).unwrap_or_else(|| panic!("segment endpoint {q:?} is not a vertex"));
                (tail, head, q.floor())
            })
            .collect();
        PeriodicGraph { vertices, edges }
    }

    fn edge_lookup(&self) -> HashMap<(Point, Point), usize> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, &(u, v, s))| (segment_key(self.vertices[u], self.vertices[v].shifted(s)), i))
            .collect()
    }

    /// Image of each edge under `map`, or `None` if the map is not a symmetry.
    pub fn edge_permutation(&self, map: &AffineMap) -> Option<Vec<usize>> {
        let vset: BTreeSet<Point> = self.vertices.iter().copied().collect();
        if !self.vertices.iter().all(|p| vset.contains(&map.apply(*p).frac())) {
            return None;
        }
        let lookup = self.edge_lookup();
        self.edges
            .iter()
            .map(|&(u, v, s)| {
                let p = map.apply(self.vertices[u]);
                let q = map.apply(self.vertices[v].shifted(s));
                lookup.get(&segment_key(p, q)).copied()
            })
            .collect()
    }

    /// All affine symmetries modulo translations whose linear part has entries in {-1, 0, 1}.
    pub fn symmetries(&self) -> Vec<(AffineMap, Vec<usize>)> {
        let entries = [-1i64, 0, 1];
        let mut found = Vec::new();
        for &a in &entries {
            for &c in &entries {
                for &b in &entries {
                    for &d in &entries {
                        let linear = LatticeMatrix { a, c, b, d };
                        if !linear.is_unimodular() {
                            continue;
                        }
                        let base = self.vertices[0].transform(&linear);
                        let offsets: BTreeSet<Point> = self.vertices.iter().map(|w| (*w - base).frac()).collect();
                        for offset in offsets {
                            let map = AffineMap { linear, offset };
                            if let Some(perm) = self.edge_permutation(&map) {
                                found.push((map, perm));
                            }
                        }
                    }
                }
            }
        }
        found.sort_by_key(|x| x.0);
        found
    }
}
