use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Grid;

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<PathBuf> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(path.to_path_buf())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Header plus string rows; numbers are formatted by the caller.
pub fn write_rows(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

pub fn write_records<T: Serialize>(path: &Path, rows: &[T]) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

/// Shortest round-trip representation, so equal values always print the same bytes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn coord_names(grid: &Grid) -> Vec<String> {
    if grid.is_radial() {
        return vec!["r".into()];
    }
    ["x", "y", "z"][..grid.coord_dim()].iter().map(|s| s.to_string()).collect()
}

/// `node, coords..., columns...` with one value per node in each column.
pub fn write_nodal(path: &Path, grid: &Grid, columns: &[(&str, &[f64])]) -> Result<PathBuf> {
    let mut header = vec!["node".to_string()];
    header.extend(coord_names(grid));
    header.extend(columns.iter().map(|(n, _)| n.to_string()));
    let rows: Vec<Vec<String>> = (0..grid.len())
        .map(|i| {
            let mut r = vec![i.to_string()];
            r.extend(grid.coords(i).iter().map(|&x| num(x)));
            r.extend(columns.iter().map(|(_, v)| num(v[i])));
            r
        })
        .collect();
    write_rows(path, &header, &rows)
}
