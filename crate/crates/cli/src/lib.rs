//! Command-line front end. [`run`] parses argv and returns the exit code with the text
//! destined for stdout and stderr, so the binary is a thin wrapper.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use tormap_core::covers::{
    classify_covers, covers_of, minimal_k_orbital_cover, stretch_cover, symmetric_cover_stage, CoverDescriptor,
    CoverError,
};
use tormap_core::lattice::{hnf, sublattices_of_index, HermiteForm, LatticeMatrix};
use tormap_core::report::{reproduce, verify_bound, BoundCheck, Finding, RunReport, Status};
use tormap_core::symmetry::edge_orbit_count;
use tormap_core::tilings::{build_tiling, TilingType};
use tormap_core::torusmap::{dual_map, quotient, MapJson, ToroidalMap};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tormap", version, about = "Toroidal maps from periodic tilings: orbits, covers and bound checks")]
pub struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Reserved; every algorithm is deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Accept non-polyhedral quotients (loops, parallel edges, faces meeting badly).
    #[arg(long, global = true, conflicts_with = "require_polyhedral")]
    pub allow_degenerate: bool,
    /// Record wall time in JSON reports. Output is then no longer byte-identical across runs.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Reject non-polyhedral quotients (the default).
    #[arg(long, global = true)]
    pub require_polyhedral: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tiling catalogue.
    Tilings {
        #[command(subcommand)]
        action: TilingsAction,
    },
    /// Lattice utilities.
    Lattice {
        #[command(subcommand)]
        action: LatticeAction,
    },
    /// Build tiling / lattice and write it as map JSON.
    Quotient {
        #[arg(long)]
        tiling: TilingType,
        /// Matrix a,c,b,d whose columns generate the lattice.
        #[arg(long, allow_hyphen_values = true)]
        lattice: LatticeMatrix,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Automorphism group order and orbit partitions.
    Orbits { map: PathBuf },
    /// Dual map as map JSON.
    Dual {
        map: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// All covers with the given number of sheets.
    Covers {
        #[arg(long)]
        n: u64,
        map: PathBuf,
    },
    /// Covers with the given number of sheets, grouped by isomorphism.
    Classify {
        #[arg(long)]
        n: u64,
        map: PathBuf,
    },
    /// The orbit-reducing cover invariant under the enlarged symmetry group.
    SymmetricCover {
        map: PathBuf,
        #[arg(long, default_value_t = 1)]
        stage: usize,
    },
    /// Fewest-sheet cover with exactly k edge orbits.
    MinimalCover {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_sheets: u64,
        map: PathBuf,
    },
    /// The cover stretching the first lattice generator n times.
    StretchCover {
        #[arg(long)]
        n: u64,
        map: PathBuf,
    },
    /// Sweep all quotients up to an index and check the edge-orbit bounds.
    VerifyBounds {
        /// A tiling tag or `all`.
        #[arg(long)]
        tiling: String,
        #[arg(long)]
        max_index: u64,
    },
    /// Re-run every claim check and print the findings table.
    Reproduce {
        #[arg(long)]
        only: Option<String>,
    },
    /// Export the 1-skeleton.
    Export {
        #[arg(long)]
        format: ExportFormat,
        map: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum TilingsAction {
    List,
}

#[derive(Debug, Subcommand)]
pub enum LatticeAction {
    /// Hermite normal form and the unimodular transform reaching it.
    Hnf {
        #[arg(long, allow_hyphen_values = true)]
        matrix: LatticeMatrix,
    },
    /// Every sublattice of the given index.
    Sublattices(SublatticeArgs),
}

#[derive(Debug, Args)]
pub struct SublatticeArgs {
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Json,
}

/// Exit code plus captured output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(stderr: String) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr }
    }
}

/// One row of cover output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverRow {
    pub lattice: LatticeMatrix,
    pub sheets: u64,
    pub edge_orbits: usize,
    pub polyhedral: bool,
    pub hnf_in_base: HermiteForm,
}

/// One row of `tilings list`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingRow {
    pub tag: String,
    pub vertex_types: Vec<String>,
    pub edge_symbol: Option<String>,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub plane_edge_orbits: usize,
}

/// Skeleton export in JSON form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skeleton {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(flag: &str, msg: impl std::fmt::Display) -> Self {
        Failure { code: EXIT_USAGE, message: format!("{flag}: {msg}") }
    }
}

type Result<T> = std::result::Result<T, Failure>;

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: e.exit_code(), stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Outcome::usage("--threads: must be at least 1\n".into());
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => return Outcome::usage(format!("--threads: {e}\n")),
    };
    match pool.install(|| dispatch(&cli, &argv)) {
        Ok(out) => out,
        Err(f) => Outcome { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

fn read_map(path: &PathBuf) -> Result<ToroidalMap> {
    let flag = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(&flag, e))?;
    let j: MapJson = serde_json::from_str(&text).map_err(|e| Failure::usage(&flag, e))?;
    ToroidalMap::from_json(&j).map_err(|e| Failure::usage(&flag, e))
}

fn write_or_return(out: &Option<PathBuf>, text: String, summary: String) -> Result<Outcome> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::usage("--out", e))?;
            Ok(Outcome::ok(summary))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn cover_error(flag: &str, e: CoverError) -> Failure {
    match e {
        CoverError::NotFound { .. } => Failure { code: EXIT_CLAIM_FAILED, message: e.to_string() },
        other => Failure::usage(flag, other),
    }
}

fn cover_row(m: &ToroidalMap, c: &CoverDescriptor) -> Result<CoverRow> {
    let (t, _) = tormap_core::covers::provenance(m).map_err(|e| cover_error("map", e))?;
    let y = c.realize(&build_tiling(t)).map_err(|e| cover_error("map", e))?;
    let orbits = edge_orbit_count(&y).map_err(|e| Failure::usage("map", e))?;
    Ok(CoverRow {
        lattice: c.cover_lattice,
        sheets: c.sheets,
        edge_orbits: orbits.edge_orbit_count,
        polyhedral: y.polyhedral,
        hnf_in_base: c.hnf_in_base,
    })
}

fn dispatch(cli: &Cli, argv: &[String]) -> Result<Outcome> {
    let started = std::time::Instant::now();
    let stamp = |report: &mut RunReport| {
        if cli.timing {
            report.wall_time_ms = Some(started.elapsed().as_millis() as u64);
        }
    };
    let require_polyhedral = !cli.allow_degenerate;
    match &cli.command {
        Command::Tilings { action: TilingsAction::List } => Ok(Outcome::ok(tilings_list(cli.json))),
        Command::Lattice { action } => lattice_command(action, cli.json),
        Command::Quotient { tiling, lattice, out } => {
            let m = quotient(&build_tiling(*tiling), lattice).map_err(|e| Failure::usage("--lattice", e))?;
            if require_polyhedral && !m.polyhedral {
                return Err(Failure::usage(
                    "--lattice",
                    format!("{tiling} / {lattice} is not polyhedral (pass --allow-degenerate to keep it)"),
                ));
            }
            let summary = format!(
                "{tiling} / {lattice}: V={} E={} F={} polyhedral={}\n",
                m.num_vertices,
                m.num_edges(),
                m.num_faces(),
                m.polyhedral
            );
            write_or_return(out, to_json(&m.to_json()), summary)
        }
        Command::Orbits { map } => {
            let m = read_map(map)?;
            let r = edge_orbit_count(&m).map_err(|e| Failure::usage("map", e))?;
            if cli.json {
                return Ok(Outcome::ok(to_json(&r)));
            }
            let reps = |parts: &Vec<Vec<usize>>| parts.iter().map(|p| p[0].to_string()).collect::<Vec<_>>().join(" ");
            let mut s = String::new();
            let _ = writeln!(s, "aut_order: {}", r.aut_order);
            let _ = writeln!(s, "edge_orbits: {}", r.edge_orbit_count);
            let _ =
                writeln!(s, "vertex_orbits: {}  representatives: {}", r.vertex_orbits.len(), reps(&r.vertex_orbits));
            let _ = writeln!(s, "edge_orbit_representatives: {}", reps(&r.edge_orbits));
            let _ = writeln!(s, "face_orbits: {}  representatives: {}", r.face_orbits.len(), reps(&r.face_orbits));
            Ok(Outcome::ok(s))
        }
        Command::Dual { map, out } => {
            let m = read_map(map)?;
            let d = dual_map(&m).map_err(|e| Failure::usage("map", e))?;
            let summary = format!("dual: V={} E={} F={}\n", d.num_vertices, d.num_edges(), d.num_faces());
            write_or_return(out, to_json(&d.to_json()), summary)
        }
        Command::Covers { n, map } => {
            check_positive("--n", *n)?;
            let m = read_map(map)?;
            let rows = covers_of(&m, *n)
                .map_err(|e| cover_error("map", e))?
                .iter()
                .map(|c| cover_row(&m, c))
                .collect::<Result<Vec<_>>>()?;
            Ok(Outcome::ok(to_json(&rows)))
        }
        Command::Classify { n, map } => {
            check_positive("--n", *n)?;
            let m = read_map(map)?;
            let c = classify_covers(&m, *n).map_err(|e| cover_error("map", e))?;
            let paper = c.paper_classes.iter().map(|d| cover_row(&m, d)).collect::<Result<Vec<_>>>()?;
            let merged = c
                .merged_classes
                .iter()
                .map(|g| g.iter().map(|d| cover_row(&m, d)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(Outcome::ok(to_json(&json!({"paper_classes": paper, "merged_classes": merged}))))
        }
        Command::SymmetricCover { map, stage } => {
            let m = read_map(map)?;
            let c = symmetric_cover_stage(&m, *stage).map_err(|e| cover_error("--stage", e))?;
            let row = cover_row(&m, &c.descriptor)?;
            Ok(Outcome::ok(to_json(&json!({
                "lattice": row.lattice,
                "sheets": row.sheets,
                "edge_orbits": row.edge_orbits,
                "polyhedral": row.polyhedral,
                "hnf_in_base": row.hnf_in_base,
                "stage": c.stage,
                "multiplier": c.multiplier,
                "group": c.group,
                "target_orbits": c.target_orbits,
            }))))
        }
        Command::MinimalCover { k, max_sheets, map } => {
            let m = read_map(map)?;
            let c =
                minimal_k_orbital_cover(&m, *k, *max_sheets, require_polyhedral).map_err(|e| cover_error("--k", e))?;
            Ok(Outcome::ok(to_json(&cover_row(&m, &c)?)))
        }
        Command::StretchCover { n, map } => {
            check_positive("--n", *n)?;
            let m = read_map(map)?;
            let c = stretch_cover(&m, *n).map_err(|e| cover_error("map", e))?;
            Ok(Outcome::ok(to_json(&cover_row(&m, &c)?)))
        }
        Command::VerifyBounds { tiling, max_index } => verify_bounds(tiling, *max_index, cli.json, argv, stamp),
        Command::Reproduce { only } => {
            let findings = reproduce(only.as_deref());
            if findings.is_empty() {
                return Err(Failure::usage("--only", format!("no claim matches {:?}", only.as_deref().unwrap_or(""))));
            }
            let mut report = findings_report(argv, findings);
            stamp(&mut report);
            let code = if report.any_failed() { EXIT_CLAIM_FAILED } else { EXIT_OK };
            let stdout = if cli.json { to_json(&report) } else { findings_table(&report.findings) };
            Ok(Outcome { code, stdout, stderr: String::new() })
        }
        Command::Export { format, map } => {
            let m = read_map(map)?;
            Ok(Outcome::ok(match format {
                ExportFormat::Dot => m.to_dot(),
                ExportFormat::Json => to_json(&Skeleton { vertices: m.num_vertices, edges: m.edges.clone() }),
            }))
        }
    }
}

fn check_positive(flag: &str, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Failure::usage(flag, "must be at least 1"));
    }
    Ok(())
}

fn tilings_list(as_json: bool) -> String {
    let rows: Vec<TilingRow> = TilingType::ALL
        .iter()
        .map(|&t| {
            let tl = build_tiling(t);
            let (v, e, f) = tl.cell_counts();
            TilingRow {
                tag: t.tag().into(),
                vertex_types: tl.vertex_types(),
                edge_symbol: tl.edge_symbol.map(|s| s.to_string()),
                vertices: v,
                edges: e,
                faces: f,
                plane_edge_orbits: tl.plane_edge_orbit_count,
            }
        })
        .collect();
    if as_json {
        return to_json(&rows);
    }
    let mut s = format!(
        "{:<11} {:<12} {:<11} {:>3} {:>3} {:>3} {:>6}\n",
        "tag", "vertex type", "edge symbol", "V", "E", "F", "orbits"
    );
    for r in &rows {
        let _ = writeln!(
            s,
            "{:<11} {:<12} {:<11} {:>3} {:>3} {:>3} {:>6}",
            r.tag,
            r.vertex_types.join("/"),
            r.edge_symbol.as_deref().unwrap_or("-"),
            r.vertices,
            r.edges,
            r.faces,
            r.plane_edge_orbits
        );
    }
    s
}

fn lattice_command(action: &LatticeAction, as_json: bool) -> Result<Outcome> {
    match action {
        LatticeAction::Hnf { matrix } => {
            let (h, u) = hnf(matrix).map_err(|e| Failure::usage("--matrix", e))?;
            Ok(Outcome::ok(if as_json {
                to_json(&json!({"hnf": h.matrix(), "unimodular": u}))
            } else {
                format!("hnf: {}\nunimodular: {}\n", h.matrix(), u)
            }))
        }
        LatticeAction::Sublattices(SublatticeArgs { n }) => {
            check_positive("--n", *n)?;
            let forms = sublattices_of_index(*n);
            Ok(Outcome::ok(if as_json {
                to_json(&forms)
            } else {
                forms.iter().map(|h| format!("{}\n", h.matrix())).collect()
            }))
        }
    }
}

fn verify_bounds(
    tiling: &str,
    max_index: u64,
    as_json: bool,
    argv: &[String],
    stamp: impl Fn(&mut RunReport),
) -> Result<Outcome> {
    check_positive("--max-index", max_index)?;
    let tags: Vec<TilingType> = if tiling == "all" {
        TilingType::ALL.to_vec()
    } else {
        vec![tiling.parse().map_err(|e| Failure::usage("--tiling", e))?]
    };
    let checks: Vec<BoundCheck> = tags.iter().map(|&t| verify_bound(t, max_index)).collect();
    let findings: Vec<Finding> = checks
        .iter()
        .map(|c| Finding {
            claim: format!("bound.{}", c.tiling),
            expected: json!(c.bound),
            observed: json!({"max_orbits": c.max_orbits, "histogram": c.histogram}),
            status: if c.holds() { Status::Pass } else { Status::Fail },
            note: format!("{} polyhedral quotients, index <= {}", c.quotients, max_index),
        })
        .collect();
    let failed = checks.iter().any(|c| !c.holds());
    let stdout = if as_json {
        let mut report = RunReport::new(argv.to_vec(), json!(checks), findings);
        stamp(&mut report);
        to_json(&report)
    } else {
        let mut s = format!(
            "{:<11} {:<12} {:>9} {:>5}  {:<20} {}\n",
            "tiling", "bound", "quotients", "max", "histogram", "status"
        );
        for c in &checks {
            let bound = match c.bound {
                tormap_core::report::Bound::AtMost(b) => format!("<= {b}"),
                tormap_core::report::Bound::Exactly(b) => format!("== {b}"),
            };
            let hist = c.histogram.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" ");
            let _ = writeln!(
                s,
                "{:<11} {:<12} {:>9} {:>5}  {:<20} {}",
                c.tiling.tag(),
                bound,
                c.quotients,
                c.max_orbits,
                hist,
                if c.holds() { "pass" } else { "FAIL" }
            );
        }
        s
    };
    Ok(Outcome { code: if failed { EXIT_CLAIM_FAILED } else { EXIT_OK }, stdout, stderr: String::new() })
}

fn findings_report(argv: &[String], findings: Vec<Finding>) -> RunReport {
    let count = |s: Status| findings.iter().filter(|f| f.status == s).count();
    let results =
        json!({"pass": count(Status::Pass), "fail": count(Status::Fail), "recorded": count(Status::Recorded)});
    RunReport::new(argv.to_vec(), results, findings)
}

fn findings_table(findings: &[Finding]) -> String {
    let mut s = String::new();
    for f in findings {
        let status = match f.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Recorded => "recorded",
        };
        let _ = writeln!(s, "{:<8} {}", status, f.claim);
        let _ = writeln!(s, "         expected: {}", compact(&f.expected));
        let _ = writeln!(s, "         observed: {}", compact(&f.observed));
        if !f.note.is_empty() {
            let _ = writeln!(s, "         note: {}", f.note);
        }
    }
    s
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).unwrap_or_default()
}
