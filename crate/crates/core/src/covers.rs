//! Finite covers of quotient maps.
//!
//! A cover of `tiling / K` is `tiling / L` for a sublattice `L ⊆ K`; it is described by
//! the Hermite form `H` of `L` in the column basis of `K`, so `L = K · H`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    generate_group, hnf, is_invariant, quotient_index, sublattices_of_index, HermiteForm, LatticeMatrix, HALF_TURN,
    HEX_ROTATION, SQUARE_REFLECTION, SQUARE_ROTATION,
};
use crate::symmetry::{edge_orbit_count, map_isomorphic};
use crate::tilings::{build_tiling, PeriodicTiling, TilingType};
use crate::torusmap::{quotient, MapError, ToroidalMap};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("map carries no tiling and lattice provenance")]
    NotAQuotient,
    #[error("no symmetric cover construction for tiling {0}")]
    UnsupportedTiling(TilingType),
    #[error("tiling {0} has no symmetric cover stage {1}")]
    UnsupportedStage(TilingType, usize),
    #[error("no sublattice of {lattice} with index {index} is invariant under the enlarged group")]
    NoInvariantSublattice { lattice: LatticeMatrix, index: i64 },
    #[error("no {k}-orbital cover with at most {max_sheets} sheets")]
    NotFound { k: usize, max_sheets: u64 },
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverDescriptor {
    pub base_lattice: LatticeMatrix,
    /// In the tiling's translation basis.
    pub cover_lattice: LatticeMatrix,
    pub sheets: u64,
    /// The cover lattice in the column basis of the base lattice.
    pub hnf_in_base: HermiteForm,
}

impl CoverDescriptor {
    pub fn new(base_lattice: LatticeMatrix, hnf_in_base: HermiteForm) -> Self {
        CoverDescriptor {
            base_lattice,
            cover_lattice: base_lattice.mul(&hnf_in_base.matrix()),
            sheets: hnf_in_base.index() as u64,
            hnf_in_base,
        }
    }

    /// Descriptor of an arbitrary sublattice of the base lattice.
    pub fn from_sublattice(base_lattice: LatticeMatrix, cover_lattice: LatticeMatrix) -> Result<Self, CoverError> {
        let sheets = quotient_index(&base_lattice, &cover_lattice).map_err(MapError::from)?;
        let inverse = base_lattice.adjugate().mul(&cover_lattice);
        let det = base_lattice.det();
        let in_base = LatticeMatrix { a: inverse.a / det, c: inverse.c / det, b: inverse.b / det, d: inverse.d / det };
        let (hnf_in_base, _) = hnf(&in_base).map_err(MapError::from)?;
        Ok(CoverDescriptor { base_lattice, cover_lattice, sheets: sheets as u64, hnf_in_base })
    }

    pub fn realize(&self, tiling: &PeriodicTiling) -> Result<ToroidalMap, CoverError> {
        Ok(quotient(tiling, &self.cover_lattice)?)
    }
}

/// Tiling and lattice a map was built from.
pub fn provenance(x: &ToroidalMap) -> Result<(TilingType, LatticeMatrix), CoverError> {
    match (x.tiling, x.lattice) {
        (Some(t), Some(k)) => Ok((t, k)),
        _ => Err(CoverError::NotAQuotient),
    }
}

/// One descriptor per sublattice of index `n` of the base lattice, in Hermite-form order.
pub fn covers_of(x: &ToroidalMap, n: u64) -> Result<Vec<CoverDescriptor>, CoverError> {
    let (_, k) = provenance(x)?;
    let mut out: Vec<CoverDescriptor> =
        sublattices_of_index(n).into_iter().map(|h| CoverDescriptor::new(k, h)).collect();
    out.sort_by_key(|c| c.hnf_in_base);
    Ok(out)
}

/// The cover stretching the first lattice generator `n` times.
pub fn stretch_cover(x: &ToroidalMap, n: u64) -> Result<CoverDescriptor, CoverError> {
    let (_, k) = provenance(x)?;
    Ok(CoverDescriptor::new(k, HermiteForm { diag_a: n as i64, sub_b: 0, diag_d: 1 }))
}

/// Cell-level covering projection from `tiling / cover` onto `tiling / base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub vertex: Vec<usize>,
    pub edge: Vec<usize>,
    pub face: Vec<usize>,
}

pub fn projection(
    tiling: &PeriodicTiling,
    cover: &LatticeMatrix,
    base: &LatticeMatrix,
) -> Result<Projection, CoverError> {
    let (hc, _) = hnf(cover).map_err(MapError::from)?;
    let (hb, _) = hnf(base).map_err(MapError::from)?;
    let (nc, nb) = (hc.index() as usize, hb.index() as usize);
    let residues: Vec<[i64; 2]> = hc.residues().collect();
    let project = |cells: usize| -> Vec<usize> {
        (0..cells).flat_map(|cell| residues.iter().map(move |&r| cell * nb + hb.residue_index(hb.reduce(r)))).collect()
    };
    debug_assert_eq!(residues.len(), nc);
    Ok(Projection {
        vertex: project(tiling.cell_vertices.len()),
        edge: project(tiling.cell_edges.len()),
        face: project(tiling.cell_faces.len()),
    })
}

/// Generators of the enlarged point group used at each stage of the symmetric cover.
pub fn enlarged_group_stages(t: TilingType) -> Result<Vec<Vec<LatticeMatrix>>, CoverError> {
    let swap = LatticeMatrix::from_rows([[0, 1], [1, 0]]);
    let axis = LatticeMatrix::from_rows([[1, 1], [0, -1]]);
    Ok(match t {
        TilingType::Triangular
        | TilingType::Hexagonal
        | TilingType::Trihexagonal
        | TilingType::Rhombille
        | TilingType::Square
        | TilingType::Rhombitrihexagonal
        | TilingType::TruncatedHexagonal => vec![vec![HALF_TURN, swap]],
        TilingType::SnubHexagonal => vec![vec![HALF_TURN, HEX_ROTATION]],
        TilingType::ElongatedTriangular => vec![vec![HALF_TURN, LatticeMatrix::from_rows([[-1, -1], [0, 1]])]],
        TilingType::SnubSquare => vec![vec![HALF_TURN, SQUARE_REFLECTION]],
        TilingType::TruncatedTrihexagonal => vec![vec![HALF_TURN, swap], vec![HALF_TURN, swap, axis]],
        TilingType::TruncatedSquare => {
            vec![vec![HALF_TURN, SQUARE_REFLECTION], vec![HALF_TURN, SQUARE_REFLECTION, SQUARE_ROTATION]]
        }
    })
}

/// Edge orbits of the plane tiling under translations and the given enlarged group.
pub fn enlarged_orbit_target(tiling: &PeriodicTiling, generators: &[LatticeMatrix]) -> usize {
    tiling.edge_orbits_under(&generate_group(generators))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetricCover {
    pub descriptor: CoverDescriptor,
    pub stage: usize,
    /// `|det|` of the lattice being covered at this stage.
    pub multiplier: i64,
    pub group: Vec<LatticeMatrix>,
    pub target_orbits: usize,
}

/// Least sublattice of `k` of the given index invariant under every generator.
pub fn invariant_sublattice(k: &LatticeMatrix, index: i64, generators: &[LatticeMatrix]) -> Option<HermiteForm> {
    let mut forms = sublattices_of_index(index as u64);
    forms.sort();
    forms.into_iter().find(|h| {
        let l = k.mul(&h.matrix());
        generators.iter().all(|a| is_invariant(&l, a))
    })
}

/// The orbit-reducing cover: a sublattice of index `m²` (`m = |det K|`) invariant under
/// the enlarged group of the requested stage. Stage 2 applies the rule again to the stage-1
/// cover with the larger group.
pub fn symmetric_cover_stage(x: &ToroidalMap, stage: usize) -> Result<SymmetricCover, CoverError> {
    let (t, k) = provenance(x)?;
    let stages = enlarged_group_stages(t)?;
    if stage == 0 || stage > stages.len() {
        return Err(CoverError::UnsupportedStage(t, stage));
    }
    let tiling = build_tiling(t);
    let mut lattice = k;
    let mut multiplier = 0;
    for group in &stages[..stage] {
        multiplier = lattice.det().abs();
        let index = multiplier * multiplier;
        let h =
            invariant_sublattice(&lattice, index, group).ok_or(CoverError::NoInvariantSublattice { lattice, index })?;
        lattice = lattice.mul(&h.matrix());
    }
    let group = stages[stage - 1].clone();
    Ok(SymmetricCover {
        descriptor: CoverDescriptor::from_sublattice(k, lattice)?,
        stage,
        multiplier,
        target_orbits: enlarged_orbit_target(&tiling, &group),
        group,
    })
}

pub fn symmetric_cover(x: &ToroidalMap) -> Result<SymmetricCover, CoverError> {
    symmetric_cover_stage(x, 1)
}

/// The cover by `m·K`, with `m = |det K|`.
pub fn scaled_cover(x: &ToroidalMap) -> Result<CoverDescriptor, CoverError> {
    let (_, k) = provenance(x)?;
    let m = k.det().abs();
    Ok(CoverDescriptor::new(k, HermiteForm { diag_a: m, sub_b: 0, diag_d: m }))
}

/// A cover with exactly `k` edge orbits and the fewest sheets, least Hermite form first.
pub fn minimal_k_orbital_cover(
    x: &ToroidalMap,
    k: usize,
    max_sheets: u64,
    require_polyhedral: bool,
) -> Result<CoverDescriptor, CoverError> {
    let (t, _) = provenance(x)?;
    let tiling = build_tiling(t);
    for n in 1..=max_sheets {
        let candidates = covers_of(x, n)?;
        let hits: Vec<bool> = candidates
            .par_iter()
            .map(|c| -> Result<bool, CoverError> {
                let m = c.realize(&tiling)?;
                if require_polyhedral && !m.polyhedral {
                    return Ok(false);
                }
                Ok(edge_orbit_count(&m)?.edge_orbit_count == k)
            })
            .collect::<Result<_, _>>()?;
        if let Some(i) = hits.iter().position(|&h| h) {
            return Ok(candidates[i]);
        }
    }
    Err(CoverError::NotFound { k, max_sheets })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverClassification {
    pub paper_classes: Vec<CoverDescriptor>,
    /// Descriptors grouped by isomorphism of the realised maps.
    pub merged_classes: Vec<Vec<CoverDescriptor>>,
}

pub fn classify_covers(x: &ToroidalMap, n: u64) -> Result<CoverClassification, CoverError> {
    let (t, _) = provenance(x)?;
    let tiling = build_tiling(t);
    let paper_classes = covers_of(x, n)?;
    let maps: Vec<ToroidalMap> = paper_classes.par_iter().map(|c| c.realize(&tiling)).collect::<Result<_, _>>()?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..maps.len() {
        let mut placed = false;
        for g in groups.iter_mut() {
            if map_isomorphic(&maps[g[0]], &maps[i])? {
                g.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push(vec![i]);
        }
    }
    let merged_classes = groups.iter().map(|g| g.iter().map(|&i| paper_classes[i]).collect()).collect();
    Ok(CoverClassification { paper_classes, merged_classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{is_sublattice, sigma};
    use crate::symmetry::edge_orbit_count;
    use crate::torusmap::Dart;

    fn q(t: TilingType, rows: [[i64; 2]; 2]) -> ToroidalMap {
        quotient(&build_tiling(t), &LatticeMatrix::from_rows(rows)).unwrap()
    }

    #[test]
    fn covers_of_counts_and_scaling() {
        let x = q(TilingType::Triangular, [[5, 0], [0, 3]]);
        let one = covers_of(&x, 1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].cover_lattice, x.lattice.unwrap());
        assert_eq!(covers_of(&x, 2).unwrap().len(), 3);
        let tiling = build_tiling(TilingType::Triangular);
        for c in covers_of(&x, 3).unwrap() {
            assert!(is_sublattice(&c.cover_lattice, &c.base_lattice));
            assert_eq!(c.sheets as i64 * c.base_lattice.det().abs(), c.cover_lattice.det().abs());
            let y = c.realize(&tiling).unwrap();
            assert_eq!((y.num_vertices, y.num_edges()), (3 * x.num_vertices, 3 * x.num_edges()));
        }
    }

    #[test]
    fn stretch_cover_examples() {
        let x = q(TilingType::Triangular, [[5, 0], [0, 3]]);
        let c = stretch_cover(&x, 4).unwrap();
        assert_eq!(c.cover_lattice, LatticeMatrix::diag(20, 3));
        assert_eq!(c.sheets, 4);
        assert_eq!(c.hnf_in_base, HermiteForm { diag_a: 4, sub_b: 0, diag_d: 1 });
        assert_eq!(stretch_cover(&x, 1).unwrap().cover_lattice, x.lattice.unwrap());
    }

    #[test]
    fn projection_is_a_covering_morphism() {
        let tiling = build_tiling(TilingType::Rhombitrihexagonal);
        let k = LatticeMatrix::from_rows([[2, 0], [1, 1]]);
        let x = quotient(&tiling, &k).unwrap();
        for c in covers_of(&x, 3).unwrap() {
            let y = c.realize(&tiling).unwrap();
            let p = projection(&tiling, &c.cover_lattice, &k).unwrap();
            for (e, &[u, v]) in y.edges.iter().enumerate() {
                assert_eq!(x.edges[p.edge[e]], [p.vertex[u], p.vertex[v]]);
            }
            for (f, darts) in y.faces.iter().enumerate() {
                let image: Vec<Dart> =
                    darts.iter().map(|d| Dart { edge: p.edge[d.edge], reversed: d.reversed }).collect();
                assert_eq!(image, x.faces[p.face[f]]);
            }
            let mut fibre = vec![0; x.num_vertices];
            for &v in &p.vertex {
                fibre[v] += 1;
            }
            assert!(fibre.iter().all(|&s| s == 3));
        }
    }

    #[test]
    fn symmetric_cover_of_unimodular_base_is_trivial() {
        let x = q(TilingType::Triangular, [[2, 1], [1, 1]]);
        let c = symmetric_cover(&x).unwrap();
        assert_eq!(c.descriptor.sheets, 1);
    }

    #[test]
    fn symmetric_cover_small_instances() {
        let x = q(TilingType::Triangular, [[2, 0], [1, 3]]);
        let c = symmetric_cover(&x).unwrap();
        assert_eq!(c.descriptor.sheets, 36);
        assert_eq!(c.target_orbits, 2);
        for a in &c.group {
            assert!(is_invariant(&c.descriptor.cover_lattice, a));
        }
        let y = c.descriptor.realize(&build_tiling(TilingType::Triangular)).unwrap();
        assert!(edge_orbit_count(&y).unwrap().edge_orbit_count <= 2);
        let x = q(TilingType::Square, [[2, 0], [1, 3]]);
        assert_eq!(symmetric_cover(&x).unwrap().descriptor.sheets, 36);
    }

    #[test]
    fn scaled_cover_is_m_times_base() {
        let x = q(TilingType::Triangular, [[5, 0], [0, 3]]);
        let c = scaled_cover(&x).unwrap();
        assert_eq!(c.cover_lattice, LatticeMatrix::diag(75, 45));
        assert_eq!(c.sheets, 225);
    }

    #[test]
    fn minimal_cover_examples() {
        let x = q(TilingType::Square, [[3, 0], [0, 3]]);
        assert_eq!(minimal_k_orbital_cover(&x, 1, 2, true).unwrap().sheets, 1);
        assert!(matches!(minimal_k_orbital_cover(&x, 3, 3, true), Err(CoverError::NotFound { .. })));
        let x = q(TilingType::Triangular, [[5, 0], [0, 3]]);
        let c = minimal_k_orbital_cover(&x, 1, 16, true).unwrap();
        // Exhaustive oracle: no smaller cover is edge-transitive.
        let tiling = build_tiling(TilingType::Triangular);
        for n in 1..c.sheets {
            for d in covers_of(&x, n).unwrap() {
                let y = d.realize(&tiling).unwrap();
                assert!(!y.polyhedral || edge_orbit_count(&y).unwrap().edge_orbit_count != 1);
            }
        }
        let y = c.realize(&tiling).unwrap();
        assert_eq!(edge_orbit_count(&y).unwrap().edge_orbit_count, 1);
    }

    #[test]
    fn classification_examples() {
        let x = q(TilingType::Square, [[3, 0], [0, 3]]);
        let one = classify_covers(&x, 1).unwrap();
        assert_eq!((one.paper_classes.len(), one.merged_classes.len()), (1, 1));
        assert_eq!(classify_covers(&x, 3).unwrap().paper_classes.len() as u64, sigma(3));
        let two = classify_covers(&x, 2).unwrap();
        assert_eq!(two.paper_classes.len(), 3);
        assert!(two.merged_classes.len() <= 3);
        let pair = [LatticeMatrix::diag(6, 3), LatticeMatrix::diag(3, 6)];
        assert!(two.merged_classes.iter().any(|g| pair.iter().all(|l| g.iter().any(|c| c.cover_lattice == *l))));
    }

    #[test]
    fn descriptor_from_sublattice_matches_direct_construction() {
        let k = LatticeMatrix::from_rows([[2, 0], [1, 3]]);
        for h in sublattices_of_index(6) {
            let direct = CoverDescriptor::new(k, h);
            let rebuilt = CoverDescriptor::from_sublattice(k, direct.cover_lattice).unwrap();
            assert_eq!(rebuilt.hnf_in_base, h);
            assert_eq!(rebuilt.sheets, 6);
        }
    }

    #[test]
    fn non_quotient_maps_are_rejected() {
        let mut x = q(TilingType::Square, [[3, 0], [0, 3]]);
        x.tiling = None;
        assert_eq!(covers_of(&x, 2), Err(CoverError::NotAQuotient));
    }
}
