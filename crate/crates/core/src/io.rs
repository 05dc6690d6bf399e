//! File formats: filament, field and measure CSVs and the field manifest.
//!
//! - filaments: header `z,f1_x,f1_y,…,fn_x,fn_y`, one row per z-node;
//! - field slice: header `node,x,y,re,im`, one row per interior grid node;
//! - measure: header `x,y,weight`;
//! - field manifest: JSON with the domain, spacing, ε, `h_ε` and the slice files.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{build_grid, DomainSpec};
use crate::error::{Error, Result};
use crate::fields::ComplexField2D;
use crate::point::Point2;
use crate::reduced::FilamentConfiguration;
use crate::vortex::AtomicMeasure;

fn malformed(path: &Path, reason: impl Into<String>) -> Error {
    Error::Malformed {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn parse_rows<R: Read>(input: R, path: &Path, header: Option<&[&str]>) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let head: Vec<String> = rdr
        .headers()
        .map_err(|e| malformed(path, e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if let Some(h) = header {
        if head != h {
            return Err(malformed(path, format!("expected header {}, got {}", h.join(","), head.join(","))));
        }
    }
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| malformed(path, e.to_string()))?;
        if rec.len() != head.len() {
            return Err(malformed(path, format!("row {} has {} columns", line + 1, rec.len())));
        }
        let row = rec
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| malformed(path, format!("row {}: {e}", line + 1)))?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(malformed(path, format!("row {}: non-finite value", line + 1)));
        }
        rows.push(row);
    }
    Ok((head, rows))
}

pub fn write_filaments<W: Write>(out: W, f: &FilamentConfiguration) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut head = vec!["z".to_owned()];
    for i in 1..=f.n() {
        head.push(format!("f{i}_x"));
        head.push(format!("f{i}_y"));
    }
    w.write_record(&head)?;
    for k in 0..f.nodes() {
        let mut row = vec![format!("{:.17e}", f.z(k))];
        for p in f.node(k) {
            row.push(format!("{:.17e}", p.x));
            row.push(format!("{:.17e}", p.y));
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_filaments<R: Read>(input: R, path: &Path) -> Result<FilamentConfiguration> {
    let (head, rows) = parse_rows(input, path, None)?;
    if head.len() < 3 || head.len() % 2 == 0 || head[0] != "z" {
        return Err(malformed(path, "header must be z,f1_x,f1_y,…"));
    }
    let n = (head.len() - 1) / 2;
    for i in 0..n {
        if head[1 + 2 * i] != format!("f{}_x", i + 1) || head[2 + 2 * i] != format!("f{}_y", i + 1) {
            return Err(malformed(path, format!("unexpected column names for filament {}", i + 1)));
        }
    }
    if rows.len() < 3 {
        return Err(malformed(path, "need at least 3 z-nodes"));
    }
    let height = rows[rows.len() - 1][0];
    let dz = height / (rows.len() - 1) as f64;
    if !(height > 0.0) {
        return Err(malformed(path, "z must increase from 0"));
    }
    for (k, r) in rows.iter().enumerate() {
        if (r[0] - k as f64 * dz).abs() > 1e-9 * height {
            return Err(malformed(path, format!("z-nodes must be uniform from 0; row {} has z = {}", k + 1, r[0])));
        }
    }
    let positions = rows
        .iter()
        .flat_map(|r| (0..n).map(move |i| Point2::new(r[1 + 2 * i], r[2 + 2 * i])))
        .collect();
    FilamentConfiguration::new(n, height, positions)
}

pub fn save_filaments(path: &Path, f: &FilamentConfiguration) -> Result<()> {
    write_filaments(create(path)?, f)
}

pub fn load_filaments(path: &Path) -> Result<FilamentConfiguration> {
    read_filaments(BufReader::new(File::open(path)?), path)
}

pub fn write_field<W: Write>(out: W, w: &ComplexField2D) -> Result<()> {
    let mut wr = csv::Writer::from_writer(out);
    wr.write_record(["node", "x", "y", "re", "im"])?;
    for (k, (p, u)) in w.grid().points().zip(w.values()).enumerate() {
        wr.write_record([
            k.to_string(),
            format!("{:.17e}", p.x),
            format!("{:.17e}", p.y),
            format!("{:.17e}", u.re),
            format!("{:.17e}", u.im),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

/// Describes stored field slices; slice paths are relative to the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldManifest {
    pub domain: DomainSpec,
    pub spacing: f64,
    pub epsilon: f64,
    pub h_eps: Option<f64>,
    /// z of each slice, when the slices come from a 3D field.
    pub z: Option<Vec<f64>>,
    pub slices: Vec<PathBuf>,
}

/// Writes `fields` as `slice_XXXX.csv` files and `manifest.json` into `dir`.
pub fn save_field_slices(
    dir: &Path,
    fields: &[ComplexField2D],
    h_eps: Option<f64>,
    z: Option<Vec<f64>>,
) -> Result<PathBuf> {
    let first = fields
        .first()
        .ok_or_else(|| Error::Config("no field slices to write".into()))?;
    std::fs::create_dir_all(dir)?;
    let mut slices = Vec::with_capacity(fields.len());
    for (k, f) in fields.iter().enumerate() {
        let name = PathBuf::from(format!("slice_{k:04}.csv"));
        write_field(create(&dir.join(&name))?, f)?;
        slices.push(name);
    }
    let manifest = FieldManifest {
        domain: *first.grid().domain(),
        spacing: first.grid().spacing(),
        epsilon: first.epsilon(),
        h_eps,
        z,
        slices,
    };
    let path = dir.join("manifest.json");
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, &manifest)?;
    out.flush()?;
    Ok(path)
}

/// Loads every slice listed in a manifest.
pub fn load_field_slices(manifest_path: &Path) -> Result<(FieldManifest, Vec<ComplexField2D>)> {
    let text = std::fs::read_to_string(manifest_path)?;
    let manifest: FieldManifest =
        serde_json::from_str(&text).map_err(|e| malformed(manifest_path, e.to_string()))?;
    let grid = Arc::new(
        build_grid(&manifest.domain, manifest.spacing).map_err(|e| malformed(manifest_path, e.to_string()))?,
    );
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let mut fields = Vec::with_capacity(manifest.slices.len());
    for rel in &manifest.slices {
        let path = base.join(rel);
        let (_, rows) = parse_rows(
            BufReader::new(File::open(&path).map_err(|e| malformed(&path, e.to_string()))?),
            &path,
            Some(&["node", "x", "y", "re", "im"]),
        )?;
        if rows.len() != grid.len() {
            return Err(malformed(&path, format!("expected {} nodes, got {}", grid.len(), rows.len())));
        }
        let tol = 1e-9 * manifest.spacing;
        let mut values = Vec::with_capacity(rows.len());
        for (k, r) in rows.iter().enumerate() {
            let p = grid.point(k);
            if r[0] != k as f64 || (r[1] - p.x).abs() > tol || (r[2] - p.y).abs() > tol {
                return Err(malformed(&path, format!("row {} does not match grid node {k}", k + 1)));
            }
            values.push(Complex64::new(r[3], r[4]));
        }
        fields.push(
            ComplexField2D::new(grid.clone(), values, manifest.epsilon)
                .map_err(|e| malformed(manifest_path, e.to_string()))?,
        );
    }
    Ok((manifest, fields))
}

pub fn write_measure<W: Write>(out: W, mu: &AtomicMeasure) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "y", "weight"])?;
    for (p, m) in &mu.atoms {
        w.write_record([format!("{:.17e}", p.x), format!("{:.17e}", p.y), format!("{:.17e}", m)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_measure<R: Read>(input: R, path: &Path) -> Result<AtomicMeasure> {
    let (_, rows) = parse_rows(input, path, Some(&["x", "y", "weight"]))?;
    AtomicMeasure::new(rows.iter().map(|r| (Point2::new(r[0], r[1]), r[2])).collect())
        .map_err(|e| malformed(path, e.to_string()))
}

pub fn save_measure(path: &Path, mu: &AtomicMeasure) -> Result<()> {
    write_measure(create(path)?, mu)
}

pub fn load_measure(path: &Path) -> Result<AtomicMeasure> {
    read_measure(BufReader::new(File::open(path)?), path)
}

/// Pretty JSON to a file, creating parent directories.
pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// Writes bytes produced by `fill` to a file, creating parent directories.
pub fn save_with(path: &Path, fill: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let mut out = create(path)?;
    fill(&mut out)?;
    out.flush()?;
    Ok(())
}
