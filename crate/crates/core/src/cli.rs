//! Batch front end: scenario runs with JSON/CSV reports, and surface mesh export.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis;
use crate::catalog::{self, SCENARIO_NAMES};
use crate::error::{Error, Result};
use crate::geometry::{ParamSurface, PlanarRegion, Vec2, Vec3};
use crate::quadrature::{IntegralResult, QuadratureSpec};
use crate::stokes::VerificationReport;

/// Report output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parameter(format!("unknown format `{other}`"))),
        }
    }
}

/// Options of the `run` command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Scenario name or `all`.
    pub scenario: String,
    pub delta: f64,
    pub quadrature: QuadratureSpec,
    pub tolerance: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: "all".into(),
            delta: catalog::DEFAULT_DELTA,
            quadrature: QuadratureSpec::default(),
            tolerance: None,
            output: None,
            format: Format::Json,
        }
    }
}

/// Rounds to 15 significant decimal digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideRecord {
    pub value: f64,
    pub error_estimate: f64,
}

/// One serialized scenario report. Field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub name: String,
    pub parameters: BTreeMap<String, f64>,
    pub lhs: Option<SideRecord>,
    pub rhs: Option<SideRecord>,
    pub abs_diff: Option<f64>,
    pub tolerance: f64,
    pub expected: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

impl From<&VerificationReport<f64>> for ReportRecord {
    fn from(r: &VerificationReport<f64>) -> Self {
        let side = |s: &Option<IntegralResult<f64>>| {
            s.map(|s| SideRecord {
                value: round15(s.value),
                error_estimate: round15(s.error_estimate),
            })
        };
        Self {
            name: r.scenario_name.clone(),
            parameters: r
                .parameters
                .iter()
                .map(|(k, v)| (k.clone(), round15(*v)))
                .collect(),
            lhs: side(&r.lhs),
            rhs: side(&r.rhs),
            abs_diff: r.abs_diff.map(round15),
            tolerance: round15(r.tolerance),
            expected: r.expected.map(round15),
            pass: r.pass,
            error: r.error.clone(),
        }
    }
}

pub fn to_json(records: &[ReportRecord]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("report serialization");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<Vec<ReportRecord>> {
    serde_json::from_str(text).map_err(|e| Error::Parameter(format!("malformed report: {e}")))
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    name: String,
    lhs_value: Option<f64>,
    lhs_error_estimate: Option<f64>,
    rhs_value: Option<f64>,
    rhs_error_estimate: Option<f64>,
    abs_diff: Option<f64>,
    tolerance: f64,
    expected: Option<f64>,
    pass: bool,
    error: Option<String>,
    /// `key=value` pairs joined by `;`.
    parameters: String,
}

pub fn to_csv(records: &[ReportRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        let params: Vec<String> = r
            .parameters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        w.serialize(CsvRow {
            name: r.name.clone(),
            lhs_value: r.lhs.map(|s| s.value),
            lhs_error_estimate: r.lhs.map(|s| s.error_estimate),
            rhs_value: r.rhs.map(|s| s.value),
            rhs_error_estimate: r.rhs.map(|s| s.error_estimate),
            abs_diff: r.abs_diff,
            tolerance: r.tolerance,
            expected: r.expected,
            pass: r.pass,
            error: r.error.clone(),
            parameters: params.join(";"),
        })
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn from_csv(text: &str) -> Result<Vec<ReportRecord>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in rd.deserialize::<CsvRow>() {
        let row = row.map_err(|e| Error::Parameter(format!("malformed csv report: {e}")))?;
        let mut parameters = BTreeMap::new();
        for kv in row.parameters.split(';').filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("malformed parameter `{kv}`")))?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::Parameter(format!("malformed parameter `{kv}`")))?;
            parameters.insert(k.to_string(), v);
        }
        let side = |v: Option<f64>, e: Option<f64>| match (v, e) {
            (Some(value), Some(error_estimate)) => Some(SideRecord {
                value,
                error_estimate,
            }),
            _ => None,
        };
        out.push(ReportRecord {
            name: row.name,
            parameters,
            lhs: side(row.lhs_value, row.lhs_error_estimate),
            rhs: side(row.rhs_value, row.rhs_error_estimate),
            abs_diff: row.abs_diff,
            tolerance: row.tolerance,
            expected: row.expected,
            pass: row.pass,
            error: row.error,
        });
    }
    Ok(out)
}

/// Runs the configured scenarios in registry order. Unknown names and invalid
/// parameters are errors; failing identities are reports with `pass = false`.
pub fn run_reports(config: &RunConfig) -> Result<Vec<VerificationReport<f64>>> {
    config.quadrature.validate()?;
    let names: Vec<&str> = if config.scenario == "all" {
        SCENARIO_NAMES.to_vec()
    } else if SCENARIO_NAMES.contains(&config.scenario.as_str()) {
        vec![config.scenario.as_str()]
    } else {
        return Err(Error::UnknownScenario(config.scenario.clone()));
    };
    let mut scenarios = Vec::with_capacity(names.len());
    for name in names {
        let mut sc = catalog::scenario(name, config.delta)?;
        if let Some(tol) = config.tolerance {
            sc = sc.with_tolerance(tol);
        }
        scenarios.push(sc);
    }
    Ok(scenarios
        .iter()
        .map(|s| s.run(&config.quadrature))
        .collect())
}

/// Process exit status of `run`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    AllPassed = 0,
    SomeFailed = 1,
    Usage = 2,
}

/// Runs, writes the report file (or stdout) and returns the exit status.
pub fn run(config: &RunConfig) -> (ExitStatus, Result<Vec<ReportRecord>>) {
    let reports = match run_reports(config) {
        Ok(r) => r,
        Err(e) => return (ExitStatus::Usage, Err(e)),
    };
    let records: Vec<ReportRecord> = reports.iter().map(ReportRecord::from).collect();
    let text = match config.format {
        Format::Json => Ok(to_json(&records)),
        Format::Csv => to_csv(&records),
    };
    let written = text.and_then(|t| match &config.output {
        Some(path) => fs::write(path, t).map_err(Error::from),
        None => std::io::stdout()
            .write_all(t.as_bytes())
            .map_err(Error::from),
    });
    if let Err(e) = written {
        return (ExitStatus::SomeFailed, Err(e));
    }
    let status = if records.iter().all(|r| r.pass) {
        ExitStatus::AllPassed
    } else {
        ExitStatus::SomeFailed
    };
    (status, Ok(records))
}

/// Indexed triangle mesh.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TriangleMesh {
    pub vertices: Vec<Vec3<f64>>,
    /// Zero-based vertex indices.
    pub faces: Vec<[usize; 3]>,
}

impl TriangleMesh {
    /// Plain-text polygon format: `v x y z` lines, then `f i j k` lines with 1-based indices.
    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        for v in &self.vertices {
            writeln!(w, "v {} {} {}", v.x, v.y, v.z)?;
        }
        for f in &self.faces {
            writeln!(w, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
        Ok(())
    }
}

/// Samples `s` on a row-major `(nu + 1) x (nv + 1)` grid over the rectangle `d` (vertex
/// `i * (nv + 1) + j` sits at the `i`-th `u` and `j`-th `v` node), two triangles per
/// cell, and scales `z` by `z_stretch`.
pub fn grid_mesh(
    s: &ParamSurface<f64>,
    d: &PlanarRegion<f64>,
    nu: usize,
    nv: usize,
    z_stretch: f64,
) -> Result<TriangleMesh> {
    if nu < 2 || nv < 2 {
        return Err(Error::Parameter(format!(
            "mesh resolution must be at least 2, got {nu} x {nv}"
        )));
    }
    let PlanarRegion::Rectangle { u, v } = d else {
        return Err(Error::Parameter(
            "meshes are exported over rectangles only".into(),
        ));
    };
    let mut mesh = TriangleMesh::default();
    for i in 0..=nu {
        let pu = if i == nu {
            u.1
        } else {
            u.0 + (u.1 - u.0) * i as f64 / nu as f64
        };
        for j in 0..=nv {
            let pv = if j == nv {
                v.1
            } else {
                v.0 + (v.1 - v.0) * j as f64 / nv as f64
            };
            let mut x = s.eval(Vec2::new(pu, pv))?;
            x.z *= z_stretch;
            mesh.vertices.push(x);
        }
    }
    let id = |i: usize, j: usize| i * (nv + 1) + j;
    for i in 0..nu {
        for j in 0..nv {
            let (a, b, c, e) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            mesh.faces.push([a, b, c]);
            mesh.faces.push([a, c, e]);
        }
    }
    Ok(mesh)
}

/// Options of the `mesh` command.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshConfig {
    /// `moebius` or `spanning`.
    pub surface: String,
    pub delta: f64,
    pub nu: usize,
    pub nv: usize,
    pub z_stretch: f64,
    pub output: PathBuf,
}

/// Builds the named mesh. The spanning surface gets its two z-axis crossings appended
/// as isolated vertices (stretched like the rest).
pub fn build_mesh(config: &MeshConfig) -> Result<TriangleMesh> {
    match config.surface.as_str() {
        "moebius" => {
            let (s, d) = catalog::moebius(config.delta)?;
            grid_mesh(&s, &d, config.nu, config.nv, config.z_stretch)
        }
        "spanning" => {
            let (s, d) = catalog::spanning_surface(config.delta)?;
            let mut mesh = grid_mesh(&s, &d, config.nu, config.nv, config.z_stretch)?;
            for mut p in analysis::z_axis_intersections(config.delta, 1e-12)? {
                p.z *= config.z_stretch;
                mesh.vertices.push(p);
            }
            Ok(mesh)
        }
        other => Err(Error::Parameter(format!(
            "unknown surface `{other}` (expected moebius or spanning)"
        ))),
    }
}

/// Writes the mesh of `config` to `config.output`.
pub fn export_mesh(config: &MeshConfig) -> Result<TriangleMesh> {
    let mesh = build_mesh(config)?;
    write_mesh(&mesh, &config.output)?;
    Ok(mesh)
}

pub fn write_mesh(mesh: &TriangleMesh, path: &Path) -> Result<()> {
    let file = fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    mesh.write_to(&mut w)?;
    w.flush()?;
    Ok(())
}
