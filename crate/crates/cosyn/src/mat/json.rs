//! The shared matrix wire format.
//!
//! ```json
//! {"dim": N, "data": [[[re, im], ... N entries] ... N rows]}
//! ```
//!
//! Row-major, square only. Parsers reject non-square, ragged, or non-finite
//! data and unknown fields.

use serde::{Deserialize, Serialize};

use super::{c64, Mat, MatError, MatResult};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatWire {
    dim: usize,
    data: Vec<Vec<[f64; 2]>>,
}

impl Mat {
    /// Serialize a square matrix to the shared JSON format.
    pub fn to_json_string(&self) -> String {
        assert!(self.is_square(), "matrix file format is square-only");
        let n = self.dim();
        let data = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let z = self[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        serde_json::to_string(&MatWire { dim: n, data }).expect("matrix serialization")
    }

    /// Parse the shared JSON format, validating shape and finiteness.
    pub fn from_json_str(s: &str) -> MatResult<Mat> {
        let wire: MatWire = serde_json::from_str(s).map_err(|e| MatError::Parse(e.to_string()))?;
        if wire.dim == 0 {
            return Err(MatError::Parse("dim must be positive".into()));
        }
        if wire.data.len() != wire.dim {
            return Err(MatError::Parse(format!(
                "expected {} rows, got {}",
                wire.dim,
                wire.data.len()
            )));
        }
        let mut entries = Vec::with_capacity(wire.dim * wire.dim);
        for (i, row) in wire.data.iter().enumerate() {
            if row.len() != wire.dim {
                return Err(MatError::Parse(format!(
                    "row {} has {} entries, expected {} (ragged data)",
                    i,
                    row.len(),
                    wire.dim
                )));
            }
            for &[re, im] in row {
                if !re.is_finite() || !im.is_finite() {
                    return Err(MatError::Parse(format!("non-finite entry in row {i}")));
                }
                entries.push(c64(re, im));
            }
        }
        Mat::new(wire.dim, wire.dim, entries)
    }
}
