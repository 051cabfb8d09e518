//! Automorphism groups, orbit partitions and isomorphism of maps, computed on flags.
//!
//! An automorphism is fixed by the image of a single base flag, so the group is found
//! by propagating each candidate image along a spanning tree of the flag graph.
//! Candidates are pruned by colour refinement, and only images outside the orbit
//! generated so far are tried, which keeps the generating set small.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::torusmap::{FlagSystem, MapError, ToroidalMap};
use crate::unionfind::UnionFind;

const BATCH: usize = 64;

/// Words whose cycle lengths seed the refinement.
const SEED_WORDS: &[&[usize]] = &[
    &[0, 1],
    &[1, 2],
    &[0, 1, 2],
    &[0, 1, 2, 1],
    &[1, 2, 1, 2, 0],
    &[1, 2, 1, 2, 1, 2, 0],
    &[1, 2, 1, 2, 1, 2, 1, 2, 0],
];

/// A flag permutation commuting with the three involutions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Automorphism {
    pub flag_perm: Vec<u32>,
}

impl Automorphism {
    pub fn compose(&self, then: &Automorphism) -> Automorphism {
        Automorphism { flag_perm: self.flag_perm.iter().map(|&f| then.flag_perm[f as usize]).collect() }
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0u32; self.flag_perm.len()];
        for (f, &g) in self.flag_perm.iter().enumerate() {
            inv[g as usize] = f as u32;
        }
        Automorphism { flag_perm: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.flag_perm.iter().enumerate().all(|(f, &g)| f as u32 == g)
    }
}

fn word_cycle_lengths(fs: &FlagSystem, word: &[usize]) -> Vec<u32> {
    let apply = |f: u32| word.iter().fold(f, |g, &i| fs.step(i, g));
    let mut len = vec![0u32; fs.len()];
    for f in 0..fs.len() as u32 {
        if len[f as usize] != 0 {
            continue;
        }
        let mut cycle = vec![f];
        let mut g = apply(f);
        while g != f {
            cycle.push(g);
            g = apply(g);
        }
        for &g in &cycle {
            len[g as usize] = cycle.len() as u32;
        }
    }
    len
}

/// Stable colouring of the disjoint union of several flag systems. Colour ids are shared
/// across the systems, so equal colours are comparable between them.
pub fn refine_colours(systems: &[&FlagSystem]) -> Vec<Vec<u32>> {
    let mut table: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut colours: Vec<Vec<u32>> = systems
        .iter()
        .map(|fs| {
            let lengths: Vec<Vec<u32>> = SEED_WORDS.iter().map(|w| word_cycle_lengths(fs, w)).collect();
            (0..fs.len())
                .map(|f| {
                    let key: Vec<u32> = lengths.iter().map(|l| l[f]).collect();
                    let next = table.len() as u32;
                    *table.entry(key).or_insert(next)
                })
                .collect()
        })
        .collect();
    let mut classes = table.len();
    loop {
        let mut table: HashMap<[u32; 4], u32> = HashMap::new();
        let next: Vec<Vec<u32>> = systems
            .iter()
            .zip(&colours)
            .map(|(fs, col)| {
                (0..fs.len() as u32)
                    .map(|f| {
                        let key = [
                            col[f as usize],
                            col[fs.step(0, f) as usize],
                            col[fs.step(1, f) as usize],
                            col[fs.step(2, f) as usize],
                        ];
                        let id = table.len() as u32;
                        *table.entry(key).or_insert(id)
                    })
                    .collect()
            })
            .collect();
        colours = next;
        if table.len() == classes {
            return colours;
        }
        classes = table.len();
    }
}

/// Spanning-tree propagation from a base flag of `src` into `dst`.
struct Propagation<'a> {
    src: &'a FlagSystem,
    dst: &'a FlagSystem,
    src_colour: &'a [u32],
    dst_colour: &'a [u32],
    order: Vec<u32>,
    /// `(position of parent in order, involution)` for each entry of `order` after the first.
    via: Vec<(u32, u8)>,
    position: Vec<u32>,
}

impl<'a> Propagation<'a> {
    fn new(src: &'a FlagSystem, dst: &'a FlagSystem, src_colour: &'a [u32], dst_colour: &'a [u32], base: u32) -> Self {
        let n = src.len();
        let mut position = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut via = Vec::with_capacity(n);
        position[base as usize] = 0;
        order.push(base);
        via.push((0, 0));
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            for i in 0..3u8 {
                let y = src.step(i as usize, x);
                if position[y as usize] == u32::MAX {
                    position[y as usize] = order.len() as u32;
                    order.push(y);
                    via.push((head as u32, i));
                }
            }
            head += 1;
        }
        Propagation { src, dst, src_colour, dst_colour, order, via, position }
    }

    /// The unique involution-preserving map sending the base flag to `target`, if any.
    fn extend(&self, target: u32) -> Option<Vec<u32>> {
        let n = self.src.len();
        if self.dst.len() != n {
            return None;
        }
        let mut image = vec![u32::MAX; n];
        image[self.order[0] as usize] = target;
        if self.src_colour[self.order[0] as usize] != self.dst_colour[target as usize] {
            return None;
        }
        for idx in 1..n {
            let x = self.order[idx];
            let (p, i) = self.via[idx];
            let img = self.dst.step(i as usize, image[self.order[p as usize] as usize]);
            if self.dst_colour[img as usize] != self.src_colour[x as usize] {
                return None;
            }
            image[x as usize] = img;
            for k in 0..3 {
                let y = self.src.step(k, x);
                if (self.position[y as usize] as usize) < idx && image[y as usize] != self.dst.step(k, img) {
                    return None;
                }
            }
        }
        Some(image)
    }
}

/// Smallest colour class, represented by its least flag.
fn base_flag(colour: &[u32]) -> u32 {
    let mut size: HashMap<u32, usize> = HashMap::new();
    for &c in colour {
        *size.entry(c).or_default() += 1;
    }
    (0..colour.len() as u32).min_by_key(|&f| (size[&colour[f as usize]], f)).expect("non-empty flag system")
}

/// Automorphism group given by generators and the orbit of a base flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismGroup {
    pub base: u32,
    pub generators: Vec<Automorphism>,
    /// Images of the base flag, sorted; one per group element.
    pub base_orbit: Vec<u32>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.base_orbit.len()
    }
}

fn orbit_of(base: u32, generators: &[Automorphism], n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[base as usize] = true;
    let mut stack = vec![base];
    while let Some(f) = stack.pop() {
        for g in generators {
            let h = g.flag_perm[f as usize];
            if !seen[h as usize] {
                seen[h as usize] = true;
                stack.push(h);
            }
        }
    }
    seen
}

/// Generators of the full automorphism group; output does not depend on the thread count.
pub fn automorphism_group(fs: &FlagSystem) -> AutomorphismGroup {
    let colours = refine_colours(&[fs]);
    let colour = &colours[0];
    let base = base_flag(colour);
    let candidates: Vec<u32> = (0..fs.len() as u32).filter(|&f| colour[f as usize] == colour[base as usize]).collect();
    let search = Propagation::new(fs, fs, colour, colour, base);
    let mut generators: Vec<Automorphism> = Vec::new();
    let mut known = orbit_of(base, &generators, fs.len());
    let mut known_count = 1;
    for batch in candidates.chunks(BATCH) {
        if known_count == candidates.len() {
            break;
        }
        let todo: Vec<u32> = batch.iter().copied().filter(|&t| !known[t as usize]).collect();
        let found: Vec<Option<Vec<u32>>> = todo.par_iter().map(|&t| search.extend(t)).collect();
        for (t, image) in todo.into_iter().zip(found) {
            if let Some(flag_perm) = image {
                if !known[t as usize] {
                    generators.push(Automorphism { flag_perm });
                    known = orbit_of(base, &generators, fs.len());
                    known_count = known.iter().filter(|&&k| k).count();
                }
            }
        }
    }
    let base_orbit = (0..fs.len() as u32).filter(|&f| known[f as usize]).collect();
    AutomorphismGroup { base, generators, base_orbit }
}

/// Every automorphism, ordered by the image of the base flag. Intended for small maps.
pub fn automorphisms(fs: &FlagSystem) -> Vec<Automorphism> {
    let group = automorphism_group(fs);
    let colours = refine_colours(&[fs]);
    let search = Propagation::new(fs, fs, &colours[0], &colours[0], group.base);
    group
        .base_orbit
        .par_iter()
        .map(|&t| Automorphism { flag_perm: search.extend(t).expect("orbit element extends") })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub aut_order: usize,
    pub vertex_orbits: Vec<Vec<usize>>,
    pub edge_orbits: Vec<Vec<usize>>,
    pub face_orbits: Vec<Vec<usize>>,
    pub edge_orbit_count: usize,
}

impl OrbitReport {
    pub fn orbit_counts(&self) -> (usize, usize, usize) {
        (self.vertex_orbits.len(), self.edge_orbits.len(), self.face_orbits.len())
    }
}

/// Orbit partitions of a flag system's vertices, edges and faces under its automorphisms.
pub fn orbit_report(fs: &FlagSystem) -> OrbitReport {
    let group = automorphism_group(fs);
    let mut vertices = UnionFind::new(fs.num_vertices);
    let mut edges = UnionFind::new(fs.num_edges());
    let mut faces = UnionFind::new(fs.num_faces);
    for g in &group.generators {
        for (f, &h) in g.flag_perm.iter().enumerate() {
            vertices.union(fs.vertex[f] as usize, fs.vertex[h as usize] as usize);
            edges.union(fs.edge[f] as usize, fs.edge[h as usize] as usize);
            faces.union(fs.face[f] as usize, fs.face[h as usize] as usize);
        }
    }
    let edge_orbits = edges.classes();
    OrbitReport {
        aut_order: group.order(),
        vertex_orbits: vertices.classes(),
        edge_orbit_count: edge_orbits.len(),
        edge_orbits,
        face_orbits: faces.classes(),
    }
}

/// Orbit report of a map, including the edge-orbit count.
pub fn edge_orbit_count(m: &ToroidalMap) -> Result<OrbitReport, MapError> {
    Ok(orbit_report(&m.flag_system()?))
}

pub fn is_edge_transitive(m: &ToroidalMap) -> Result<bool, MapError> {
    Ok(edge_orbit_count(m)?.edge_orbit_count == 1)
}

/// True when some flag bijection intertwines the involutions of the two maps.
pub fn flags_isomorphic(a: &FlagSystem, b: &FlagSystem) -> bool {
    if a.len() != b.len() || a.num_vertices != b.num_vertices || a.num_faces != b.num_faces {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let colours = refine_colours(&[a, b]);
    let histogram = |c: &[u32]| {
        let mut h = c.to_vec();
        h.sort_unstable();
        h
    };
    if histogram(&colours[0]) != histogram(&colours[1]) {
        return false;
    }
    let base = base_flag(&colours[0]);
    let search = Propagation::new(a, b, &colours[0], &colours[1], base);
    let want = colours[0][base as usize];
    let candidates: Vec<u32> = (0..b.len() as u32).filter(|&f| colours[1][f as usize] == want).collect();
    candidates.par_iter().any(|&t| search.extend(t).is_some())
}

pub fn map_isomorphic(m1: &ToroidalMap, m2: &ToroidalMap) -> Result<bool, MapError> {
    Ok(flags_isomorphic(&m1.flag_system()?, &m2.flag_system()?))
}
