//! CSV ingestion and export.
use std::collections::HashMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use frameforge_core::congruence::GridShape;
use frameforge_core::electromagnetic::ElectricField;
use frameforge_core::fd::{DerivConfig, LineStencil, MIN_POINTS};
use frameforge_core::frenet::{arclength_resample, CurveSpec, FrameSet};
use frameforge_core::metric::norm;
use frameforge_core::space_form::contains;
use frameforge_core::{AmbientVector, SpaceForm};

use crate::error::{CliError, Result};

/// Points farther than this from the quadric are rejected instead of reprojected.
pub const INGEST_TOL: f64 = 1e-6;
/// Relative speed or spacing error that triggers arc-length resampling.
pub const UNIFORM_TOL: f64 = 1e-6;

const CURVE_HEADER: [&str; 5] = ["s", "x0", "x1", "x2", "x3"];
const CONGRUENCE_HEADER: [&str; 7] = ["i", "j", "k", "x0", "x1", "x2", "x3"];
const FIELD_HEADER: [&str; 9] = ["i", "j", "k", "E1_s", "E3_s", "E1_xi", "E3_xi", "E1_eta", "E3_eta"];

fn input_err(path: &Path, msg: impl Into<String>) -> CliError {
    CliError::Input { path: path.into(), msg: msg.into() }
}

fn reader(path: &Path, text: &str, header: &[&str]) -> Result<csv::Reader<std::io::Cursor<Vec<u8>>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(std::io::Cursor::new(text.as_bytes().to_vec()));
    let got: Vec<String> = rdr.headers().map_err(|e| input_err(path, e.to_string()))?.iter().map(String::from).collect();
    if got != header {
        return Err(input_err(path, format!("expected header '{}', found '{}'", header.join(","), got.join(","))));
    }
    Ok(rdr)
}

fn parse_row(path: &Path, rec: &csv::StringRecord, width: usize, row: usize) -> Result<Vec<f64>> {
    if rec.len() != width {
        return Err(input_err(path, format!("row {row}: expected {width} fields, found {}", rec.len())));
    }
    rec.iter()
        .map(|f| {
            f.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| input_err(path, format!("row {row}: '{f}' is not a finite number")))
        })
        .collect()
}

fn on_form(path: &Path, form: &SpaceForm, x: [f64; 4], row: usize) -> Result<AmbientVector> {
    let p = form.vector(x);
    if !contains(&p, form, INGEST_TOL) {
        return Err(input_err(path, format!("row {row}: point is not on the space form")));
    }
    form.project(&p).map_err(|e| input_err(path, format!("row {row}: {e}")))
}

/// Reads `s,x0,x1,x2,x3`. Returns the curve and whether it had to be resampled.
pub fn read_curve(path: &Path, form: SpaceForm) -> Result<(CurveSpec, bool)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = reader(path, &text, &CURVE_HEADER)?;
    let mut s = Vec::new();
    let mut pts = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let row = n + 1;
        let rec = rec.map_err(|e| input_err(path, format!("row {row}: {e}")))?;
        let v = parse_row(path, &rec, 5, row)?;
        if let Some(&prev) = s.last() {
            if !(v[0] > prev) {
                return Err(input_err(path, format!("row {row}: s must increase strictly")));
            }
        }
        s.push(v[0]);
        pts.push(on_form(path, &form, [v[1], v[2], v[3], v[4]], row)?);
    }
    if pts.len() < MIN_POINTS {
        return Err(input_err(path, format!("need at least {MIN_POINTS} rows, found {}", pts.len())));
    }
    let n = pts.len();
    let h = (s[n - 1] - s[0]) / (n - 1) as f64;
    let uneven = s.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > UNIFORM_TOL * h);
    let st = LineStencil::new(n, h, 1, DerivConfig::default())?;
    let raw: Vec<[f64; 4]> = pts.iter().map(|p| p.x).collect();
    let off_speed = (0..n).any(|i| (norm(&form.vector(st.at4(i, |k| raw[k]))) - 1.0).abs() > UNIFORM_TOL);
    if uneven || off_speed {
        let (h, pts) = arclength_resample(&form, &pts)?;
        return Ok((CurveSpec::Sampled { form, s0: s[0], h, points: pts }, true));
    }
    Ok((CurveSpec::Sampled { form, s0: s[0], h, points: pts }, false))
}

/// Reads a congruence CSV with its `# hs=.. hxi=.. heta=.. q=.. c=..` preamble.
pub fn read_congruence(path: &Path) -> Result<(SpaceForm, GridShape, Vec<[f64; 4]>)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let (first, rest) = text.split_once('\n').ok_or_else(|| input_err(path, "missing preamble line"))?;
    let meta = first.trim().strip_prefix('#').ok_or_else(|| input_err(path, "first line must start with '#'"))?;
    let mut kv = HashMap::new();
    for tok in meta.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(|| input_err(path, format!("malformed preamble token '{tok}'")))?;
        let v: f64 = v.parse().map_err(|_| input_err(path, format!("preamble value '{v}' is not a number")))?;
        kv.insert(k.to_string(), v);
    }
    let get = |k: &str| kv.get(k).copied().ok_or_else(|| input_err(path, format!("preamble is missing '{k}'")));
    let steps = [get("hs")?, get("hxi")?, get("heta")?];
    let (q, c) = (get("q")?, get("c")?);
    if q.fract() != 0.0 || !(0.0..=2.0).contains(&q) || (c != 1.0 && c != -1.0) {
        return Err(input_err(path, "preamble needs integer q in 0..=2 and c = ±1"));
    }
    let form = SpaceForm::new(q as u8, c as i8).map_err(|e| input_err(path, e.to_string()))?;

    let mut rdr = reader(path, rest, &CONGRUENCE_HEADER)?;
    let mut rows = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let row = n + 1;
        let rec = rec.map_err(|e| input_err(path, format!("row {row}: {e}")))?;
        let v = parse_row(path, &rec, 7, row)?;
        let idx = [v[0], v[1], v[2]];
        if idx.iter().any(|x| x.fract() != 0.0 || *x < 0.0) {
            return Err(input_err(path, format!("row {row}: indices must be non-negative integers")));
        }
        let p = on_form(path, &form, [v[3], v[4], v[5], v[6]], row)?;
        rows.push((idx.map(|x| x as usize), p.x, row));
    }
    let dims = [0, 1, 2].map(|a| rows.iter().map(|r| r.0[a] + 1).max().unwrap_or(0));
    let shape = GridShape::new(dims, steps).map_err(|e| input_err(path, e.to_string()))?;
    let mut pts = vec![None; shape.len()];
    for (idx, x, row) in rows {
        let p = shape.index(idx[0], idx[1], idx[2]);
        if pts[p].replace(x).is_some() {
            return Err(input_err(path, format!("row {row}: duplicate grid index {idx:?}")));
        }
    }
    let pts: Option<Vec<[f64; 4]>> = pts.into_iter().collect();
    let pts = pts.ok_or_else(|| input_err(path, format!("grid {dims:?} is not completely filled")))?;
    Ok((form, shape, pts))
}

/// Reads an electric field over an existing grid.
pub fn read_field(path: &Path, shape: &GridShape) -> Result<ElectricField> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = reader(path, &text, &FIELD_HEADER)?;
    let mut e = ElectricField::zeros(shape.len());
    let mut seen = vec![false; shape.len()];
    for (n, rec) in rdr.records().enumerate() {
        let row = n + 1;
        let rec = rec.map_err(|e| input_err(path, format!("row {row}: {e}")))?;
        let v = parse_row(path, &rec, 9, row)?;
        let idx = [v[0], v[1], v[2]];
        if idx.iter().zip(shape.dims).any(|(x, d)| x.fract() != 0.0 || *x < 0.0 || *x as usize >= d) {
            return Err(input_err(path, format!("row {row}: index outside the grid {:?}", shape.dims)));
        }
        let p = shape.index(v[0] as usize, v[1] as usize, v[2] as usize);
        if std::mem::replace(&mut seen[p], true) {
            return Err(input_err(path, format!("row {row}: duplicate grid index")));
        }
        for d in 0..3 {
            e.e1[d][p] = v[3 + 2 * d];
            e.e3[d][p] = v[4 + 2 * d];
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(input_err(path, "field does not cover the whole grid"));
    }
    Ok(e)
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    let f = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(f))
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    CliError::io(path, std::io::Error::other(e))
}

pub fn write_trace(path: &Path, frames: &FrameSet, s0: f64) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["s", "kappa", "tau", "eps1", "eps2", "eps3"]).map_err(|e| csv_err(path, e))?;
    for (i, f) in frames.samples.iter().enumerate() {
        let s = s0 + i as f64 * frames.h;
        let row = [s.to_string(), f.kappa.to_string(), f.tau.to_string()]
            .into_iter()
            .chain(f.eps.iter().map(|e| e.to_string()));
        w.write_record(row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_curve(path: &Path, s: &[f64], pts: &[[f64; 4]]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(CURVE_HEADER).map_err(|e| csv_err(path, e))?;
    for (s, p) in s.iter().zip(pts) {
        w.write_record(std::iter::once(s).chain(p).map(|v| v.to_string())).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_congruence(path: &Path, form: &SpaceForm, shape: &GridShape, pts: &[[f64; 4]]) -> Result<()> {
    let mut f = File::create(path).map_err(|e| CliError::io(path, e))?;
    let [hs, hxi, heta] = shape.steps;
    writeln!(f, "# hs={hs} hxi={hxi} heta={heta} q={} c={}", form.q(), form.c()).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(CONGRUENCE_HEADER).map_err(|e| csv_err(path, e))?;
    for (p, x) in pts.iter().enumerate() {
        let ijk = shape.coords(p).map(|v| v.to_string());
        w.write_record(ijk.into_iter().chain(x.iter().map(|v| v.to_string()))).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_field(path: &Path, shape: &GridShape, e: &ElectricField) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(FIELD_HEADER).map_err(|e| csv_err(path, e))?;
    for p in 0..shape.len() {
        let ijk = shape.coords(p).map(|v| v.to_string());
        let vals = (0..3).flat_map(|d| [e.e1[d][p], e.e3[d][p]]).map(|v| v.to_string());
        w.write_record(ijk.into_iter().chain(vals)).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}
