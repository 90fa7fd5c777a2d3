//! Text formats: matrix and sample ingestion, JSON documents.
//!
//! All indices are 1-based here, 0-based everywhere else in the crate.

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::decomposition::{count_po, LatticeDecomposition, PoStatement};
use crate::directed::SemFactorization;
use crate::error::{Error, Result};
use crate::gram::{GramMatrix, SemCoefficients, Tolerances};
use crate::lattice::{LatticeComputation, NeighborhoodLattice};
use crate::pcg::Pcg;
use crate::subset::Subset;

#[derive(Deserialize)]
struct MatrixDoc {
    d: usize,
    sigma: Vec<Vec<f64>>,
}

fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, line)| {
            line.split(',')
                .map(|cell| {
                    cell.trim().parse::<f64>().map_err(|e| {
                        Error::Parse(format!("line {}: {:?}: {e}", n + 1, cell.trim()))
                    })
                })
                .collect()
        })
        .collect()
}

/// Reads a matrix from CSV (one row per line) or from a JSON object
/// `{"d": d, "sigma": [[...], ...]}` and validates it.
pub fn parse_matrix(text: &str, tol: Tolerances) -> Result<GramMatrix> {
    let rows = if text.trim_start().starts_with('{') {
        let doc: MatrixDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.sigma.len() != doc.d {
            return Err(Error::DimensionMismatch {
                expected: doc.d,
                found: doc.sigma.len(),
            });
        }
        doc.sigma
    } else {
        parse_rows(text)?
    };
    GramMatrix::validate(&rows, tol)
}

/// Reads observations from CSV, one observation per line.
pub fn parse_samples(text: &str) -> Result<Vec<Vec<f64>>> {
    parse_rows(text)
}

/// Parses a comma-separated list of 1-based indices; the empty string is `∅`.
pub fn parse_set(text: &str, d: usize) -> Result<Subset> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Subset::EMPTY);
    }
    let indices = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("{:?}: {e}", t.trim())))
        })
        .collect::<Result<Vec<_>>>()?;
    Subset::from_one_based(&indices, d).map_err(|bad| Error::IndexOutOfRange {
        index: bad.wrapping_sub(1),
        d,
    })
}

/// Parses a 1-based index into a 0-based one.
pub fn parse_index(text: &str, d: usize) -> Result<usize> {
    let v: usize = text
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("{:?}: {e}", text.trim())))?;
    if v == 0 || v > d {
        return Err(Error::IndexOutOfRange {
            index: v.wrapping_sub(1),
            d,
        });
    }
    Ok(v - 1)
}

/// CSV text with shortest round-trip float formatting.
pub fn matrix_to_csv(g: &GramMatrix) -> String {
    let mut out = String::new();
    for row in g.rows() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn matrix_json(g: &GramMatrix) -> Value {
    json!({ "d": g.d(), "sigma": g.rows() })
}

pub fn coefficients_json(c: &SemCoefficients) -> Value {
    let mut values = Map::new();
    for k in c.conditioning_set {
        values.insert((k + 1).to_string(), json!(c.values[k]));
    }
    json!({
        "node": c.node + 1,
        "set": c.conditioning_set.to_one_based(),
        "values": values,
        "support": c.support.to_one_based(),
    })
}

pub fn interval_json(l: &NeighborhoodLattice) -> Value {
    json!({ "m": l.min_set.to_one_based(), "M": l.max_set.to_one_based() })
}

pub fn lattice_json(c: &LatticeComputation) -> Value {
    json!({
        "node": c.lattice.node + 1,
        "m": c.lattice.min_set.to_one_based(),
        "M": c.lattice.max_set.to_one_based(),
        "size": c.lattice.size(),
        "projections": c.projections,
    })
}

pub fn decomposition_json(dec: &LatticeDecomposition) -> Value {
    let intervals: Vec<Value> = dec.intervals.iter().map(interval_json).collect();
    json!({
        "node": dec.node + 1,
        "K": dec.len(),
        "intervals": intervals,
        "po_count": count_po(dec) as u64,
    })
}

pub fn po_json(st: &PoStatement) -> Value {
    json!({ "j": st.j + 1, "i": st.i + 1, "T": st.t.to_one_based() })
}

fn pairs_json(pairs: &[(usize, usize)]) -> Vec<[usize; 2]> {
    pairs.iter().map(|&(a, b)| [a + 1, b + 1]).collect()
}

pub fn graph_json(p: &Pcg) -> Value {
    json!({ "d": p.d(), "edges": pairs_json(&p.edges()) })
}

pub fn factorization_json(f: &SemFactorization) -> Value {
    let d = f.d;
    let b: Vec<Vec<f64>> = (0..d).map(|r| f.b[r * d..(r + 1) * d].to_vec()).collect();
    json!({
        "perm": f.perm.iter().map(|v| v + 1).collect::<Vec<_>>(),
        "B": b,
        "D": f.diag,
        "edges": pairs_json(&f.edges()),
    })
}
