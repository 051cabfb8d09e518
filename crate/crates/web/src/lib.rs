//! Browser bindings. The exported functions return JSON strings; the page in `www/`
//! draws the fundamental domain of a quotient with each edge coloured by its orbit.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use tormap_core::covers::{stretch_cover, symmetric_cover, CoverDescriptor};
use tormap_core::lattice::{hnf, sublattices_of_index, LatticeMatrix};
use tormap_core::symmetry::edge_orbit_count;
use tormap_core::tilings::{build_tiling, PeriodicTiling, TilingType};
use tormap_core::torusmap::quotient;

/// Larger quotients are refused so the page stays responsive.
pub const MAX_CELLS: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub from: [f64; 2],
    pub to: [f64; 2],
    pub edge: usize,
    pub orbit: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct View {
    pub tiling: String,
    pub lattice: LatticeMatrix,
    pub sheets: Option<u64>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub polyhedral: bool,
    pub aut_order: usize,
    pub edge_orbits: usize,
    /// Corners of the drawn fundamental domain, in plane coordinates.
    pub domain: [[f64; 2]; 4],
    pub points: Vec<[f64; 2]>,
    pub segments: Vec<Segment>,
}

fn parse(tag: &str, lattice: &str) -> Result<(TilingType, LatticeMatrix), String> {
    let t: TilingType = tag.parse().map_err(|e| format!("tiling: {e}"))?;
    let m: LatticeMatrix = lattice.parse().map_err(|e| format!("lattice: {e}"))?;
    if m.det() == 0 {
        return Err("lattice: matrix is singular".into());
    }
    if m.det().abs() > MAX_CELLS {
        return Err(format!("lattice: index {} exceeds the display limit {MAX_CELLS}", m.det().abs()));
    }
    Ok((t, m))
}

fn to_plane(tiling: &PeriodicTiling, p: [f64; 2]) -> [f64; 2] {
    let (a, b) = (tiling.basis_a, tiling.basis_b);
    [p[0] * a[0].to_f64() + p[1] * b[0].to_f64(), p[0] * a[1].to_f64() + p[1] * b[1].to_f64()]
}

fn ratio(r: num_rational::Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn render(t: TilingType, lattice: LatticeMatrix, sheets: Option<u64>) -> Result<View, String> {
    let tiling = build_tiling(t);
    let m = quotient(&tiling, &lattice).map_err(|e| e.to_string())?;
    let report = edge_orbit_count(&m).map_err(|e| e.to_string())?;
    let mut orbit_of = vec![0; m.num_edges()];
    for (i, class) in report.edge_orbits.iter().enumerate() {
        for &e in class {
            orbit_of[e] = i;
        }
    }
    let (h, _) = hnf(&lattice).map_err(|e| e.to_string())?;
    let residues: Vec<[i64; 2]> = h.residues().collect();
    let n = residues.len();
    let position = |cell: usize, r: [i64; 2]| {
        let p = tiling.cell_vertices[cell].position;
        to_plane(&tiling, [ratio(p.x) + r[0] as f64, ratio(p.y) + r[1] as f64])
    };
    let points = (0..tiling.cell_vertices.len()).flat_map(|c| residues.iter().map(move |&r| position(c, r))).collect();
    let segments = tiling
        .cell_edges
        .iter()
        .enumerate()
        .flat_map(|(j, e)| residues.iter().enumerate().map(move |(k, &r)| (j, k, e, r)))
        .map(|(j, k, e, r)| Segment {
            from: position(e.tail, r),
            to: position(e.head, [r[0] + e.shift[0], r[1] + e.shift[1]]),
            edge: j * n + k,
            orbit: orbit_of[j * n + k],
        })
        .collect();
    let (a, d) = (h.diag_a as f64, h.diag_d as f64);
    let domain = [[0.0, 0.0], [a, 0.0], [a, d], [0.0, d]].map(|p| to_plane(&tiling, p));
    Ok(View {
        tiling: t.tag().into(),
        lattice,
        sheets,
        vertices: m.num_vertices,
        edges: m.num_edges(),
        faces: m.num_faces(),
        polyhedral: m.polyhedral,
        aut_order: report.aut_order,
        edge_orbits: report.edge_orbit_count,
        domain,
        points,
        segments,
    })
}

pub fn tilings_json() -> String {
    let tags: Vec<&str> = TilingType::ALL.iter().map(|t| t.tag()).collect();
    serde_json::to_string(&tags).expect("serialisable")
}

pub fn sublattices_json(n: u32) -> Result<String, String> {
    if n == 0 || i64::from(n) > MAX_CELLS {
        return Err(format!("n: must be between 1 and {MAX_CELLS}"));
    }
    let forms: Vec<String> = sublattices_of_index(n.into()).iter().map(|h| h.matrix().to_string()).collect();
    Ok(serde_json::to_string(&forms).expect("serialisable"))
}

pub fn quotient_view(tag: &str, lattice: &str) -> Result<View, String> {
    let (t, m) = parse(tag, lattice)?;
    render(t, m, None)
}

/// `kind` is `symmetric` or `stretch`; `n` is the stretch factor and ignored otherwise.
pub fn cover_view(tag: &str, lattice: &str, kind: &str, n: u32) -> Result<View, String> {
    let (t, m) = parse(tag, lattice)?;
    let base = quotient(&build_tiling(t), &m).map_err(|e| e.to_string())?;
    let cover: CoverDescriptor = match kind {
        "symmetric" => symmetric_cover(&base).map_err(|e| e.to_string())?.descriptor,
        "stretch" if n > 0 => stretch_cover(&base, n.into()).map_err(|e| e.to_string())?,
        "stretch" => return Err("n: must be at least 1".into()),
        other => return Err(format!("kind: unknown cover kind {other:?}")),
    };
    if cover.cover_lattice.det().abs() > MAX_CELLS {
        return Err(format!(
            "cover: {} sheets give index {}, above the display limit {MAX_CELLS}",
            cover.sheets,
            cover.cover_lattice.det().abs()
        ));
    }
    render(t, cover.cover_lattice, Some(cover.sheets))
}

fn to_js(view: Result<View, String>) -> Result<String, JsError> {
    view.map(|v| serde_json::to_string(&v).expect("serialisable")).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn tilings() -> String {
    tilings_json()
}

#[wasm_bindgen]
pub fn sublattices(n: u32) -> Result<String, JsError> {
    sublattices_json(n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn quotient_map(tag: &str, lattice: &str) -> Result<String, JsError> {
    to_js(quotient_view(tag, lattice))
}

#[wasm_bindgen]
pub fn cover_map(tag: &str, lattice: &str, kind: &str, n: u32) -> Result<String, JsError> {
    to_js(cover_view(tag, lattice, kind, n))
}
