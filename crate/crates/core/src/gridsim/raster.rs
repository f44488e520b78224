use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{CellClass, GridMap};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "x_m,y_m,pr_reg_dbm,pr_rogue_dbm,class";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RasterFormat {
    Pgm,
    Csv,
}

impl std::str::FromStr for RasterFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pgm" => Ok(RasterFormat::Pgm),
            "csv" => Ok(RasterFormat::Csv),
            _ => Err(Error::Config(format!("unknown raster format '{s}'"))),
        }
    }
}

/// Binary PGM (P5, maxval 255), north row first.
pub fn write_pgm<W: Write>(m: &GridMap, mut w: W) -> std::io::Result<()> {
    write!(w, "P5\n{} {}\n255\n", m.nx, m.ny)?;
    let mut row = vec![0u8; m.nx];
    for j in (0..m.ny).rev() {
        for (i, px) in row.iter_mut().enumerate() {
            *px = m.cell(i, j).class.gray();
        }
        w.write_all(&row)?;
    }
    w.flush()
}

/// One line per cell in storage order. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_csv<W: Write>(m: &GridMap, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for ((x, y), c) in m.centers() {
        writeln!(
            w,
            "{x},{y},{},{},{}",
            c.pr_reg_dbm,
            c.pr_rogue_dbm,
            c.class.name()
        )?;
    }
    w.flush()
}

pub fn write_raster(m: &GridMap, path: impl AsRef<Path>, format: RasterFormat) -> Result<()> {
    let path = path.as_ref();
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let w = BufWriter::new(f);
    match format {
        RasterFormat::Pgm => write_pgm(m, w),
        RasterFormat::Csv => write_csv(m, w),
    }
    .map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvCell {
    pub x_m: f64,
    pub y_m: f64,
    pub pr_reg_dbm: f64,
    pub pr_rogue_dbm: f64,
    pub class: CellClass,
}

pub fn read_csv<R: Read>(r: R) -> Result<Vec<CsvCell>> {
    let mut out = Vec::new();
    for (n, line) in BufReader::new(r).lines().enumerate() {
        let line = line.map_err(|e| Error::io("<raster csv>", e))?;
        let lineno = n + 1;
        if n == 0 {
            if line.trim() != CSV_HEADER {
                return Err(Error::RasterParse {
                    line: lineno,
                    msg: format!("expected header '{CSV_HEADER}'"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::RasterParse {
                line: lineno,
                msg: format!("expected 5 fields, got {}", fields.len()),
            });
        }
        let num = |s: &str| {
            s.parse::<f64>().map_err(|e| Error::RasterParse {
                line: lineno,
                msg: format!("bad number '{s}': {e}"),
            })
        };
        out.push(CsvCell {
            x_m: num(fields[0])?,
            y_m: num(fields[1])?,
            pr_reg_dbm: num(fields[2])?,
            pr_rogue_dbm: num(fields[3])?,
            class: CellClass::from_name(fields[4]).ok_or_else(|| Error::RasterParse {
                line: lineno,
                msg: format!("unknown class '{}'", fields[4]),
            })?,
        });
    }
    Ok(out)
}
