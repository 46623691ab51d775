//! Sampled grids, polynomial coefficients and key-value reports on disk.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use anyhow::{bail, Context, Result};
use curvepipe::{DiscPoly, DiscVector};

/// Fixed decimal format with 17 significant digits; `-0` prints as `0`.
pub fn num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

/// Polar product grid: `n` radii at half offsets `(i + 1/2) / n`, so the
/// axis is never a sample, times `2n` angles from 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscGrid {
    pub n: usize,
}

impl DiscGrid {
    pub fn radii(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| (i as f64 + 0.5) / self.n as f64)
            .collect()
    }

    pub fn angles(&self) -> Vec<f64> {
        let m = 2 * self.n;
        (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect()
    }

    /// `(s3, s2, z2, z3)`, radius-major.
    pub fn points(&self) -> Vec<(f64, f64, f64, f64)> {
        let angles = self.angles();
        self.radii()
            .into_iter()
            .flat_map(|s3| {
                angles
                    .iter()
                    .map(move |&s2| (s3, s2, s3 * s2.cos(), s3 * s2.sin()))
            })
            .collect()
    }
}

pub enum Field<'a> {
    Scalar(&'a DiscPoly<f64>),
    Vector(&'a DiscVector<f64>),
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))
}

/// `s3,s2,z2,z3,value` rows, or `...,v2,v3` for vector fields.
pub fn write_field(path: &Path, grid: DiscGrid, field: &Field) -> Result<()> {
    let mut w = writer(path)?;
    match field {
        Field::Scalar(_) => w.write_record(["s3", "s2", "z2", "z3", "value"])?,
        Field::Vector(_) => w.write_record(["s3", "s2", "z2", "z3", "v2", "v3"])?,
    }
    for (s3, s2, z2, z3) in grid.points() {
        let mut row = vec![num(s3), num(s2), num(z2), num(z3)];
        match field {
            Field::Scalar(p) => row.push(num(p.eval_f64(z2, z3))),
            Field::Vector(v) => {
                let (a, b) = v.eval_f64(z2, z3);
                row.push(num(a));
                row.push(num(b));
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `field,component,m,n,coefficient` for every monomial `z2^m z3^n`.
pub fn write_coefficients(path: &Path, entries: &[(&str, &str, &DiscPoly<f64>)]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["field", "component", "m", "n", "coefficient"])?;
    for (field, component, poly) in entries {
        for ((m, n), c) in poly.terms() {
            w.write_record([
                field.to_string(),
                component.to_string(),
                m.to_string(),
                n.to_string(),
                num(*c),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_coefficients`], keyed by `(field, component)`.
pub fn read_coefficients(path: &Path) -> Result<BTreeMap<(String, String), DiscPoly<f64>>> {
    let mut rdr =
        csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out: BTreeMap<(String, String), DiscPoly<f64>> = BTreeMap::new();
    for row in rdr.records() {
        let row = row?;
        if row.len() != 5 {
            bail!("{}: expected 5 columns, got {}", path.display(), row.len());
        }
        let m: u32 = row[2].parse()?;
        let n: u32 = row[3].parse()?;
        let c: f64 = row[4].parse()?;
        out.entry((row[0].to_string(), row[1].to_string()))
            .or_insert_with(DiscPoly::zero)
            .add_term(m, n, c);
    }
    Ok(out)
}

/// Numeric rows of a delimited file with a header.
pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr =
        csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let header = rdr.headers()?.iter().map(str::to_string).collect();
    let rows = rdr
        .records()
        .map(|r| -> Result<Vec<f64>> { Ok(r?.iter().map(str::parse).collect::<Result<_, _>>()?) })
        .collect::<Result<_>>()?;
    Ok((header, rows))
}

pub fn write_table(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| num(*v)))?;
    }
    w.flush()?;
    Ok(())
}

/// Ordered `key = value` lines.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Report {
    pub entries: Vec<(String, String)>,
}

impl Report {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn push_num(&mut self, key: impl Into<String>, value: f64) {
        self.push(key, num(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_string())
            .with_context(|| format!("writing {}", path.display()))
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}
