//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::Path;

use sqrtwell::PhysParams;

/// Reference spectra: `(V0, levels from the ground state up)`.
pub const TABLE_1: [(f64, &[f64]); 4] = [
    (4.0, &[-2.168051138, -0.4166327432, -0.02946950533]),
    (
        6.0,
        &[-4.338949251, -1.120668116, -0.2384895435, -0.00552717659],
    ),
    (
        10.0,
        &[
            -9.973668269,
            -3.249038689,
            -1.146332147,
            -0.3060888017,
            -0.02016478163,
        ],
    ),
    (
        15.0,
        &[
            -18.84341927,
            -6.947785749,
            -3.007062709,
            -1.227239451,
            -0.3819693937,
            -0.04351527517,
        ],
    ),
];

pub fn well(v0: f64) -> PhysParams {
    PhysParams::new(1.0, 1.0, v0, 2.0).unwrap()
}

/// A CSV file written by the command line tool.
#[derive(Debug)]
pub struct CsvFile {
    pub extras: HashMap<String, String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl CsvFile {
    pub fn read(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut lines = text.lines();
        let first = lines.next().ok_or("empty file")?;
        if !first.starts_with("# sqrtwell ") {
            return Err(format!("missing provenance line, got {first:?}"));
        }
        let mut extras = HashMap::new();
        let mut header = None;
        let mut rows = Vec::new();
        for line in lines {
            if let Some(kv) = line.strip_prefix("# ") {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| format!("bad comment {line:?}"))?;
                extras.insert(k.to_string(), v.to_string());
            } else if header.is_none() {
                header = Some(line.split(',').map(str::to_string).collect::<Vec<_>>());
            } else {
                let row = line
                    .split(',')
                    .map(|c| {
                        if c.is_empty() {
                            Ok(None)
                        } else {
                            c.parse::<f64>().map(Some)
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| format!("bad row {line:?}: {e}"))?;
                rows.push(row);
            }
        }
        let header = header.ok_or("missing header")?;
        if let Some(r) = rows.iter().find(|r| r.len() != header.len()) {
            return Err(format!(
                "row width {} differs from header width {}",
                r.len(),
                header.len()
            ));
        }
        Ok(Self {
            extras,
            header,
            rows,
        })
    }

    pub fn column(&self, name: &str) -> Result<Vec<Option<f64>>, String> {
        let i = self
            .header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| format!("no column {name} in {:?}", self.header))?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }

    /// A column that must be fully populated.
    pub fn values(&self, name: &str) -> Result<Vec<f64>, String> {
        self.column(name)?
            .into_iter()
            .map(|v| v.ok_or_else(|| format!("missing value in column {name}")))
            .collect()
    }

    pub fn extra_list(&self, key: &str) -> Result<Vec<f64>, String> {
        let v = self
            .extras
            .get(key)
            .ok_or_else(|| format!("no extra {key}"))?;
        if v.is_empty() {
            return Ok(Vec::new());
        }
        v.split(';')
            .map(|x| {
                x.parse::<f64>()
                    .map_err(|e| format!("bad {key} entry {x:?}: {e}"))
            })
            .collect()
    }
}

/// Number of strict sign changes, ignoring exact zeros and gaps.
pub fn sign_changes(values: &[Option<f64>]) -> usize {
    let signs: Vec<f64> = values
        .iter()
        .flatten()
        .filter(|v| **v != 0.0)
        .map(|v| v.signum())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

pub fn run_cli(args: &[&str]) -> i32 {
    let mut v = vec!["sqrtwell".to_string()];
    v.extend(args.iter().map(|s| s.to_string()));
    sqrtwell::cli::run(v)
}
