//! Flag systems: the three involutions of a map acting on (vertex, edge, face) flags.
//!
//! Flag `4·e + 2·side + end` sits on edge `e`, on the dart running tail-to-head
//! (`side = 0`) or head-to-tail (`side = 1`), at that dart's start (`end = 0`) or finish
//! (`end = 1`). `s0` swaps ends, `s2` swaps sides and `s1` steps to the neighbouring
//! dart of the same face.

use thiserror::Error;

use super::{Dart, ToroidalMap};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlagError {
    #[error("map is disconnected")]
    Disconnected,
    #[error("dart {0:?} is missing from the face boundaries or used twice")]
    BadFaces(Dart),
    #[error("flag system is not orientable")]
    NonOrientable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagSystem {
    /// `involution[i][f]` is the image of flag `f` under `s_i`.
    pub involution: [Vec<u32>; 3],
    pub vertex: Vec<u32>,
    pub edge: Vec<u32>,
    pub face: Vec<u32>,
    pub num_vertices: usize,
    pub num_faces: usize,
}

impl FlagSystem {
    pub fn len(&self) -> usize {
        self.vertex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.len() / 4
    }

    #[inline]
    pub fn step(&self, i: usize, f: u32) -> u32 {
        self.involution[i][f as usize]
    }

    /// Number of orbits of the subgroup generated by the listed involutions.
    pub fn orbit_count(&self, gens: &[usize]) -> usize {
        self.orbits(gens).1
    }

    /// Orbit label of each flag (numbered by least flag) and the orbit count.
    pub fn orbits(&self, gens: &[usize]) -> (Vec<u32>, usize) {
        let mut uf = UnionFind::new(self.len());
        for &i in gens {
            for (f, &g) in self.involution[i].iter().enumerate() {
                uf.union(f, g as usize);
            }
        }
        let mut next = 0u32;
        let mut roots = vec![u32::MAX; self.len()];
        let label = (0..self.len())
            .map(|f| {
                let r = uf.find(f);
                if roots[r] == u32::MAX {
                    roots[r] = next;
                    next += 1;
                }
                roots[r]
            })
            .collect();
        (label, next as usize)
    }

    pub fn is_connected(&self) -> bool {
        self.is_empty() || self.orbit_count(&[0, 1, 2]) == 1
    }

    /// Fixed-point-free involutions with `s0 s2 = s2 s0`.
    pub fn satisfies_axioms(&self) -> bool {
        let n = self.len() as u32;
        (0..3).all(|i| (0..n).all(|f| self.step(i, f) != f && self.step(i, self.step(i, f)) == f))
            && (0..n).all(|f| self.step(0, self.step(2, f)) == self.step(2, self.step(0, f)))
    }

    /// Swaps the roles of vertices and faces.
    pub fn dual(&self) -> FlagSystem {
        FlagSystem {
            involution: [self.involution[2].clone(), self.involution[1].clone(), self.involution[0].clone()],
            vertex: self.face.clone(),
            edge: self.edge.clone(),
            face: self.vertex.clone(),
            num_vertices: self.num_faces,
            num_faces: self.num_vertices,
        }
    }

    /// Cyclic face sizes around each vertex.
    pub fn face_cycles(&self, face_sizes: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.num_vertices];
        let mut cycles = vec![Vec::new(); self.num_vertices];
        for f in 0..self.len() as u32 {
            let v = self.vertex[f as usize] as usize;
            if seen[v] {
                continue;
            }
            seen[v] = true;
            let mut g = f;
            loop {
                cycles[v].push(face_sizes[self.face[g as usize] as usize]);
                g = self.step(1, self.step(2, g));
                if g == f {
                    break;
                }
            }
        }
        cycles
    }

    /// Rebuilds the map from the flag labels, keeping vertex, edge and face ids; faces are
    /// oriented by a two-colouring of the flag graph.
    pub fn to_map(&self) -> Result<ToroidalMap, FlagError> {
        if !self.is_connected() {
            return Err(FlagError::Disconnected);
        }
        let n = self.len();
        // Two-colour the flag graph; every involution must change colour.
        let mut colour = vec![u8::MAX; n];
        let mut stack = vec![0u32];
        colour[0] = 0;
        while let Some(f) = stack.pop() {
            for i in 0..3 {
                let g = self.step(i, f);
                let want = 1 - colour[f as usize];
                if colour[g as usize] == u8::MAX {
                    colour[g as usize] = want;
                    stack.push(g);
                } else if colour[g as usize] != want {
                    return Err(FlagError::NonOrientable);
                }
            }
        }
        let (vertex_of, edge_of, face_of) = (&self.vertex, &self.edge, &self.face);
        let (num_vertices, num_faces) = (self.num_vertices, self.num_faces);
        // Each flag's position as (edge, side, end) in the rebuilt map.
        let mut position = vec![(0u32, 0u8, 0u8); n];
        let mut first = vec![u32::MAX; n / 4];
        let mut edges = vec![[0usize; 2]; n / 4];
        for f in 0..n as u32 {
            let e = edge_of[f as usize] as usize;
            if first[e] != u32::MAX {
                continue;
            }
            first[e] = f;
            let id = e as u32;
            let sides = [[f, self.step(0, f)], [self.step(2, f), self.step(0, self.step(2, f))]];
            let mut ends = [[0u32; 2]; 2];
            for (side, pair) in sides.iter().enumerate() {
                let (tail, head) = if colour[pair[0] as usize] == 0 { (pair[0], pair[1]) } else { (pair[1], pair[0]) };
                position[tail as usize] = (id, side as u8, 0);
                position[head as usize] = (id, side as u8, 1);
                ends[side] = [tail, head];
            }
            edges[e] = [vertex_of[ends[0][0] as usize] as usize, vertex_of[ends[0][1] as usize] as usize];
        }
        let mut faces = vec![Vec::new(); num_faces];
        let mut done = vec![false; num_faces];
        for f in 0..n as u32 {
            let k = face_of[f as usize] as usize;
            if done[k] || colour[f as usize] != 0 {
                continue;
            }
            done[k] = true;
            let mut g = f;
            loop {
                let (e, side, _) = position[g as usize];
                faces[k].push(Dart { edge: e as usize, reversed: side == 1 });
                g = self.step(1, self.step(0, g));
                if g == f {
                    break;
                }
            }
        }
        Ok(ToroidalMap::from_parts(num_vertices, edges, faces))
    }
}

impl ToroidalMap {
    /// The flag system of this map; fails when the map is disconnected or its face
    /// boundaries do not use every dart exactly once.
    pub fn flag_system(&self) -> Result<FlagSystem, FlagError> {
        let num_edges = self.edges.len();
        let n = 4 * num_edges;
        let flag = |d: Dart, end: usize| (4 * d.edge + 2 * d.reversed as usize + end) as u32;
        let mut s0 = vec![0u32; n];
        let mut s1 = vec![u32::MAX; n];
        let mut s2 = vec![0u32; n];
        let mut vertex = vec![0u32; n];
        let mut edge = vec![0u32; n];
        let mut face = vec![u32::MAX; n];
        for (e, &[u, v]) in self.edges.iter().enumerate() {
            for side in 0..2 {
                for end in 0..2 {
                    let f = 4 * e + 2 * side + end;
                    s0[f] = (4 * e + 2 * side + (1 - end)) as u32;
                    s2[f] = (4 * e + 2 * (1 - side) + (1 - end)) as u32;
                    // side 0 runs u -> v, side 1 runs v -> u.
                    vertex[f] = if (side == 0) == (end == 0) { u as u32 } else { v as u32 };
                    edge[f] = e as u32;
                }
            }
        }
        for (k, darts) in self.faces.iter().enumerate() {
            for (i, &d) in darts.iter().enumerate() {
                let next = darts[(i + 1) % darts.len()];
                if d.edge >= num_edges || next.edge >= num_edges {
                    return Err(FlagError::BadFaces(d));
                }
                let (a, b) = (flag(d, 1), flag(next, 0));
                if face[a as usize] != u32::MAX || s1[a as usize] != u32::MAX || s1[b as usize] != u32::MAX {
                    return Err(FlagError::BadFaces(d));
                }
                if vertex[a as usize] != vertex[b as usize] {
                    return Err(FlagError::BadFaces(next));
                }
                s1[a as usize] = b;
                s1[b as usize] = a;
                face[a as usize] = k as u32;
                face[b as usize] = k as u32;
            }
        }
        if let Some(f) = s1.iter().position(|&x| x == u32::MAX) {
            return Err(FlagError::BadFaces(Dart { edge: f / 4, reversed: (f / 2) % 2 == 1 }));
        }
        let fs = FlagSystem {
            involution: [s0, s1, s2],
            vertex,
            edge,
            face,
            num_vertices: self.num_vertices,
            num_faces: self.faces.len(),
        };
        if !fs.is_connected() {
            return Err(FlagError::Disconnected);
        }
        Ok(fs)
    }
}
