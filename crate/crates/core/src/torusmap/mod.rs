//! Finite toroidal maps obtained as quotients of a periodic tiling by a translation lattice.

mod flags;

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use flags::{FlagError, FlagSystem};

use crate::lattice::{hnf, LatticeError, LatticeMatrix};
use crate::tilings::{dual_tiling, vertex_type_string, EdgeSymbol, PeriodicTiling, TilingType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("singular lattice {0}")]
    SingularLattice(LatticeMatrix),
    #[error(transparent)]
    Flags(#[from] FlagError),
    #[error("map is not edge-homogeneous")]
    NotEdgeHomogeneous,
    #[error("malformed map: {0}")]
    Malformed(String),
}

impl From<LatticeError> for MapError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Singular(m) => MapError::SingularLattice(m),
            other => MapError::Malformed(other.to_string()),
        }
    }
}

/// An edge traversed from its first endpoint to its second, or backwards when `reversed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart {
    pub edge: usize,
    pub reversed: bool,
}

/// A cell of the tiling's translation cell together with its residue class modulo the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub cell: usize,
    pub residue: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToroidalMap {
    pub tiling: Option<TilingType>,
    pub lattice: Option<LatticeMatrix>,
    pub num_vertices: usize,
    pub vertex_sites: Option<Vec<Site>>,
    /// Endpoints `[tail, head]`; loops and parallel edges are kept.
    pub edges: Vec<[usize; 2]>,
    /// Oriented boundary walks; every dart occurs in exactly one face.
    pub faces: Vec<Vec<Dart>>,
    pub face_sites: Option<Vec<Site>>,
    pub polyhedral: bool,
}

impl ToroidalMap {
    /// A map without tiling provenance.
    pub fn from_parts(num_vertices: usize, edges: Vec<[usize; 2]>, faces: Vec<Vec<Dart>>) -> Self {
        let mut m = ToroidalMap {
            tiling: None,
            lattice: None,
            num_vertices,
            vertex_sites: None,
            edges,
            faces,
            face_sites: None,
            polyhedral: false,
        };
        m.polyhedral = validate_polyhedral(&m);
        m
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn tail(&self, d: Dart) -> usize {
        self.edges[d.edge][d.reversed as usize]
    }

    pub fn head(&self, d: Dart) -> usize {
        self.edges[d.edge][1 - d.reversed as usize]
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_vertices];
        for &[u, v] in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Canonical vertex-type string at each vertex.
    pub fn vertex_types(&self) -> Result<Vec<String>, MapError> {
        let fs = self.flag_system()?;
        let sizes: Vec<usize> = self.faces.iter().map(Vec::len).collect();
        Ok(fs.face_cycles(&sizes).iter().map(|c| vertex_type_string(c)).collect())
    }

    /// Edge symbol of every edge.
    pub fn edge_symbols(&self) -> Vec<EdgeSymbol> {
        let deg = self.degrees();
        let mut size = HashMap::new();
        for face in &self.faces {
            for d in face {
                size.insert(*d, face.len());
            }
        }
        self.edges
            .iter()
            .enumerate()
            .map(|(e, &[u, v])| {
                let sides = [Dart { edge: e, reversed: false }, Dart { edge: e, reversed: true }];
                EdgeSymbol::new([size[&sides[0]], size[&sides[1]]], [deg[u], deg[v]])
            })
            .collect()
    }
}

/// Builds `tiling / lattice`. Vertices, edges and faces are numbered by
/// `(cell id, residue)` with residues reduced by the lattice's Hermite form.
pub fn quotient(tiling: &PeriodicTiling, lattice: &LatticeMatrix) -> Result<ToroidalMap, MapError> {
    let (h, _) = hnf(lattice)?;
    let n = h.index() as usize;
    let id = |cell: usize, t: [i64; 2]| cell * n + h.residue_index(h.reduce(t));
    let residues: Vec<[i64; 2]> = h.residues().collect();
    let sites = |count: usize| -> Vec<Site> {
        (0..count).flat_map(|cell| residues.iter().map(move |&residue| Site { cell, residue })).collect()
    };
    let mut edges = Vec::with_capacity(tiling.cell_edges.len() * n);
    for e in &tiling.cell_edges {
        for &r in &residues {
            edges.push([id(e.tail, r), id(e.head, [r[0] + e.shift[0], r[1] + e.shift[1]])]);
        }
    }
    let mut faces = Vec::with_capacity(tiling.cell_faces.len() * n);
    for f in &tiling.cell_faces {
        for &r in &residues {
            faces.push(
                f.darts
                    .iter()
                    .map(|d| {
                        let t = d.edge_translation(&tiling.cell_edges);
                        Dart { edge: id(d.edge, [r[0] + t[0], r[1] + t[1]]), reversed: d.reversed }
                    })
                    .collect(),
            );
        }
    }
    let mut m = ToroidalMap {
        tiling: Some(tiling.kind),
        lattice: Some(*lattice),
        num_vertices: tiling.cell_vertices.len() * n,
        vertex_sites: Some(sites(tiling.cell_vertices.len())),
        edges,
        faces,
        face_sites: Some(sites(tiling.cell_faces.len())),
        polyhedral: false,
    };
    m.polyhedral = validate_polyhedral(&m);
    Ok(m)
}

/// No loops, no parallel edges, faces without repeated vertices, and any two faces meet
/// in nothing, one vertex, or one common edge.
pub fn validate_polyhedral(m: &ToroidalMap) -> bool {
    let mut pairs = BTreeSet::new();
    for &[u, v] in &m.edges {
        if u == v || !pairs.insert((u.min(v), u.max(v))) {
            return false;
        }
    }
    let mut face_vertices = Vec::with_capacity(m.faces.len());
    for face in &m.faces {
        let vs: Vec<usize> = face.iter().map(|&d| m.tail(d)).collect();
        if vs.iter().collect::<BTreeSet<_>>().len() != vs.len() {
            return false;
        }
        face_vertices.push(vs);
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); m.num_vertices];
    for (f, vs) in face_vertices.iter().enumerate() {
        for &v in vs {
            incident[v].push(f);
        }
    }
    let mut shared: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (v, faces) in incident.iter().enumerate() {
        for (i, &f) in faces.iter().enumerate() {
            for &g in &faces[i + 1..] {
                shared.entry((f.min(g), f.max(g))).or_default().push(v);
            }
        }
    }
    let face_edges: Vec<BTreeSet<usize>> = m.faces.iter().map(|f| f.iter().map(|d| d.edge).collect()).collect();
    shared.iter().all(|(&(f, g), vs)| match vs.len() {
        1 => true,
        2 => face_edges[f].intersection(&face_edges[g]).any(|&e| {
            let [a, b] = m.edges[e];
            (a == vs[0] && b == vs[1]) || (a == vs[1] && b == vs[0])
        }),
        _ => false,
    })
}

/// The dual map: vertex ids become face ids and vice versa; edge ids are kept.
pub fn dual_map(m: &ToroidalMap) -> Result<ToroidalMap, MapError> {
    let mut d = m.flag_system()?.dual().to_map()?;
    d.tiling = m.tiling.and_then(|t| dual_tiling(t).ok());
    d.lattice = m.lattice;
    d.vertex_sites = m.face_sites.clone();
    d.face_sites = m.vertex_sites.clone();
    Ok(d)
}

/// The common edge symbol of all edges.
pub fn edge_symbol_of(m: &ToroidalMap) -> Result<EdgeSymbol, MapError> {
    let symbols: BTreeSet<EdgeSymbol> = m.edge_symbols().into_iter().collect();
    match symbols.len() {
        1 => Ok(symbols.into_iter().next().expect("one symbol")),
        _ => Err(MapError::NotEdgeHomogeneous),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<[i64; 2]>,
}

/// Serialised map. `face_reversed[k][i]` tells whether edge `faces[k][i]` is walked from its
/// second endpoint to its first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapJson {
    pub tiling: Option<TilingType>,
    pub lattice: Option<LatticeMatrix>,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Vec<usize>>,
    pub face_reversed: Vec<Vec<bool>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_sites: Option<Vec<Site>>,
    pub polyhedral: bool,
}

impl ToroidalMap {
    pub fn to_json(&self) -> MapJson {
        MapJson {
            tiling: self.tiling,
            lattice: self.lattice,
            vertices: (0..self.num_vertices)
                .map(|id| {
                    let site = self.vertex_sites.as_ref().map(|s| s[id]);
                    VertexRecord { id, cell: site.map(|s| s.cell), residue: site.map(|s| s.residue) }
                })
                .collect(),
            edges: self.edges.clone(),
            faces: self.faces.iter().map(|f| f.iter().map(|d| d.edge).collect()).collect(),
            face_reversed: self.faces.iter().map(|f| f.iter().map(|d| d.reversed).collect()).collect(),
            face_sites: self.face_sites.clone(),
            polyhedral: self.polyhedral,
        }
    }

    /// Rebuilds and re-validates a map; the stored polyhedral flag is recomputed.
    pub fn from_json(j: &MapJson) -> Result<Self, MapError> {
        let n = j.vertices.len();
        if j.vertices.iter().enumerate().any(|(i, v)| v.id != i) {
            return Err(MapError::Malformed("vertex ids must be 0..V-1 in order".into()));
        }
        if j.edges.iter().any(|e| e[0] >= n || e[1] >= n) {
            return Err(MapError::Malformed("edge endpoint out of range".into()));
        }
        if j.faces.len() != j.face_reversed.len()
            || j.faces.iter().zip(&j.face_reversed).any(|(f, r)| f.len() != r.len())
        {
            return Err(MapError::Malformed("faces and face_reversed differ in shape".into()));
        }
        let sites: Option<Vec<Site>> =
            j.vertices.iter().map(|v| Some(Site { cell: v.cell?, residue: v.residue? })).collect();
        let faces = j
            .faces
            .iter()
            .zip(&j.face_reversed)
            .map(|(f, r)| f.iter().zip(r).map(|(&edge, &reversed)| Dart { edge, reversed }).collect())
            .collect();
        let mut m = ToroidalMap::from_parts(n, j.edges.clone(), faces);
        m.tiling = j.tiling;
        m.lattice = j.lattice;
        m.vertex_sites = sites;
        m.face_sites = j.face_sites.clone();
        m.flag_system()?;
        Ok(m)
    }

    /// Graphviz rendering of the 1-skeleton.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tormap {\n");
        for v in 0..self.num_vertices {
            let _ = writeln!(out, "  {v};");
        }
        for &[u, v] in &self.edges {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}
