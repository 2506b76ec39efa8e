//! Multivariate time series container and its on-disk formats.
//!
//! CSV layout: header `t,y_1,...,y_p`, one row per time index `t = 1..n`.
//!
//! Binary layout (all little-endian): 4-byte magic `WER1`, `p` as `u32`,
//! `n` as `u64`, then `p * n` `f64` values in row-major order (component
//! by component).

use std::io::{BufRead, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fmtnum::Num;
use crate::matrix::Matrix;

pub const BINARY_MAGIC: [u8; 4] = *b"WER1";
pub const BINARY_HEADER_LEN: usize = 16;

/// `p x n` observations: rows are components, columns are time.
#[derive(Debug, Clone, PartialEq)]
pub struct MultivariateSeries {
    values: Matrix,
}

impl MultivariateSeries {
    pub fn new(values: Matrix) -> Result<Self> {
        if !values.is_finite() {
            return Err(Error::param("series", "contains non-finite values"));
        }
        Ok(MultivariateSeries { values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn zeros(p: usize, n: usize) -> Self {
        MultivariateSeries {
            values: Matrix::zeros(p, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.values.rows()
    }

    pub fn len(&self) -> usize {
        self.values.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.values.cols() == 0
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn into_matrix(self) -> Matrix {
        self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.values.row(i)
    }

    /// Running sums along time: turns increments into a path.
    pub fn cumulative_sum(&self) -> MultivariateSeries {
        let mut values = self.values.clone();
        for i in 0..values.rows() {
            let mut acc = 0.0;
            for x in values.row_mut(i) {
                acc += *x;
                *x = acc;
            }
        }
        MultivariateSeries { values }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = BufWriter::new(out);
        write!(w, "t")?;
        for i in 1..=self.dim() {
            write!(w, ",y_{i}")?;
        }
        writeln!(w)?;
        for t in 0..self.len() {
            write!(w, "{}", t + 1)?;
            for i in 0..self.dim() {
                write!(w, ",{}", Num(self.values[(i, t)]))?;
            }
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty CSV".into()))??;
        let p = header.split(',').count().saturating_sub(1);
        if p == 0 || !header.starts_with('t') {
            return Err(Error::Format(format!("unexpected CSV header `{header}`")));
        }
        let mut columns: Vec<Vec<f64>> = vec![Vec::new(); p];
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != p + 1 {
                return Err(Error::Format(format!(
                    "line {}: expected {} fields, found {}",
                    lineno + 2,
                    p + 1,
                    fields.len()
                )));
            }
            for (col, field) in columns.iter_mut().zip(&fields[1..]) {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::Format(format!("line {}: cannot parse `{field}`", lineno + 2))
                })?;
                col.push(v);
            }
        }
        Self::from_rows(&columns)
    }

    pub fn write_binary<W: Write>(&self, out: W) -> Result<()> {
        let mut w = BufWriter::new(out);
        let p =
            u32::try_from(self.dim()).map_err(|_| Error::Format("dimension exceeds u32".into()))?;
        w.write_all(&BINARY_MAGIC)?;
        w.write_all(&p.to_le_bytes())?;
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        for x in self.values.as_slice() {
            w.write_all(&x.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut header = [0u8; BINARY_HEADER_LEN];
        input.read_exact(&mut header)?;
        if header[..4] != BINARY_MAGIC {
            return Err(Error::Format("bad magic; not a series file".into()));
        }
        let p = u32::from_le_bytes(header[4..8].try_into().expect("4 bytes")) as usize;
        let n = u64::from_le_bytes(header[8..16].try_into().expect("8 bytes")) as usize;
        let mut bytes = Vec::new();
        input.read_to_end(&mut bytes)?;
        if bytes.len() != p * n * 8 {
            return Err(Error::Format(format!(
                "payload holds {} bytes, header promises {}",
                bytes.len(),
                p * n * 8
            )));
        }
        let data = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Self::new(Matrix::from_vec(p, n, data)?)
    }

    /// Reads a series, choosing the format by extension (`.csv` or binary).
    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        if path
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
        {
            Self::read_csv(std::io::BufReader::new(file))
        } else {
            Self::read_binary(std::io::BufReader::new(file))
        }
    }
}
