//! Interchange formats: the network and lattice JSON documents, significant
//! digit rounding for reports, line-geometry export, the ratio report and
//! the flat key-value tool configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::families::FamilyKind;
use crate::graph::{QuotientEdge, QuotientGraph};
use crate::lattice::Lattice;
use crate::network::{CellRange, PeriodicNetwork};
use crate::scalar::Scalar;

pub const DEFAULT_PRECISION: usize = 17;
pub const MIN_PRECISION: usize = 6;
pub const MAX_PRECISION: usize = 17;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDocument {
    pub tail: usize,
    pub head: usize,
    pub shift: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// `{"dimension", "generators", "vertices", "edges"}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub dimension: usize,
    pub generators: Vec<Vec<f64>>,
    pub vertices: Vec<Vec<f64>>,
    pub edges: Vec<EdgeDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDocument {
    pub dimension: usize,
    pub generators: Vec<Vec<f64>>,
}

fn to_f64_rows<T: Scalar>(rows: &[Vec<T>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| r.iter().map(|v| v.as_f64()).collect()).collect()
}

fn from_f64_rows<T: Scalar>(rows: &[Vec<f64>]) -> Vec<Vec<T>> {
    rows.iter().map(|r| r.iter().map(|&v| T::lit(v)).collect()).collect()
}

fn check_dimension(what: &str, dimension: usize, rows: &[Vec<f64>], count: Option<usize>) -> Result<()> {
    if let Some(c) = count {
        if rows.len() != c {
            return Err(Error::DimensionMismatch(format!(
                "{} {what} in dimension {dimension}",
                rows.len()
            )));
        }
    }
    if rows.iter().any(|r| r.len() != dimension) {
        return Err(Error::DimensionMismatch(format!(
            "{what} must have {dimension} coordinates"
        )));
    }
    Ok(())
}

impl LatticeDocument {
    pub fn from_lattice<T: Scalar>(lattice: &Lattice<T>) -> Self {
        LatticeDocument {
            dimension: lattice.dimension(),
            generators: to_f64_rows(lattice.generators()),
        }
    }

    pub fn to_lattice<T: Scalar>(&self) -> Result<Lattice<T>> {
        check_dimension("generators", self.dimension, &self.generators, Some(self.dimension))?;
        Lattice::new(from_f64_rows(&self.generators))
    }
}

impl NetworkDocument {
    pub fn from_network<T: Scalar>(net: &PeriodicNetwork<T>) -> Self {
        NetworkDocument {
            dimension: net.dimension(),
            generators: to_f64_rows(net.lattice().generators()),
            vertices: to_f64_rows(net.positions()),
            edges: net
                .graph()
                .edges()
                .iter()
                .map(|e| EdgeDocument {
                    tail: e.tail,
                    head: e.head,
                    shift: e.shift.clone(),
                    label: e.label.clone(),
                })
                .collect(),
        }
    }

    pub fn to_network<T: Scalar>(&self) -> Result<PeriodicNetwork<T>> {
        let n = self.dimension;
        check_dimension("generators", n, &self.generators, Some(n))?;
        check_dimension("vertices", n, &self.vertices, None)?;
        let edges = self
            .edges
            .iter()
            .map(|e| QuotientEdge {
                tail: e.tail,
                head: e.head,
                shift: e.shift.clone(),
                label: e.label.clone(),
            })
            .collect();
        let graph = QuotientGraph::new(self.vertices.len(), n, edges)?;
        let lattice = Lattice::new(from_f64_rows(&self.generators))?;
        PeriodicNetwork::new(graph, from_f64_rows(&self.vertices), lattice)
    }
}

pub fn check_precision(digits: usize) -> Result<usize> {
    if (MIN_PRECISION..=MAX_PRECISION).contains(&digits) {
        Ok(digits)
    } else {
        Err(Error::invalid(format!(
            "precision {digits} must lie in [{MIN_PRECISION}, {MAX_PRECISION}]"
        )))
    }
}

/// Rounds to `digits` significant decimal digits. With 17 digits every
/// `f64` is reproduced exactly.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses")
}

/// Applies [`round_significant`] to every non-integer number in a JSON tree.
pub fn round_json(value: &mut Value, digits: usize) {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            if let Some(r) = serde_json::Number::from_f64(round_significant(x, digits)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|v| round_json(v, digits)),
        Value::Object(map) => map.values_mut().for_each(|v| round_json(v, digits)),
        _ => {}
    }
}

/// Serializes, rounds floats to `digits` significant digits and pretty-prints
/// with a trailing newline.
pub fn to_json_string<S: Serialize>(value: &S, digits: usize) -> Result<String> {
    let digits = check_precision(digits)?;
    let mut tree = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    round_json(&mut tree, digits);
    let mut text = serde_json::to_string_pretty(&tree).map_err(|e| Error::Parse(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn network_to_json<T: Scalar>(net: &PeriodicNetwork<T>, digits: usize) -> Result<String> {
    to_json_string(&NetworkDocument::from_network(net), digits)
}

pub fn network_from_json<T: Scalar>(text: &str) -> Result<PeriodicNetwork<T>> {
    let doc: NetworkDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_network()
}

pub fn lattice_to_json<T: Scalar>(lattice: &Lattice<T>, digits: usize) -> Result<String> {
    to_json_string(&LatticeDocument::from_lattice(lattice), digits)
}

pub fn lattice_from_json<T: Scalar>(text: &str) -> Result<Lattice<T>> {
    let doc: LatticeDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.to_lattice()
}

/// Line geometry of the lifted network over `range`: two `v` records per
/// segment (endpoints are not shared) followed by one `l` record per
/// segment, cell-major then edge order. Planar networks are placed at z = 0.
pub fn export_obj<T: Scalar>(net: &PeriodicNetwork<T>, range: &CellRange, digits: usize) -> Result<String> {
    let digits = check_precision(digits)?;
    let n = net.dimension();
    if n != 2 && n != 3 {
        return Err(Error::invalid(format!("cannot export a network of dimension {n}")));
    }
    let segments = net.lift_tile(range)?;
    let coord = |p: &[T], k: usize| {
        if k < n {
            round_significant(p[k].as_f64(), digits)
        } else {
            0.0
        }
    };
    let mut out = String::new();
    for s in &segments {
        for p in [&s.start, &s.end] {
            writeln!(out, "v {} {} {}", coord(p, 0), coord(p, 1), coord(p, 2)).expect("write to string");
        }
    }
    for i in 0..segments.len() {
        writeln!(out, "l {} {}", 2 * i + 1, 2 * i + 2).expect("write to string");
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioBounds<T> {
    pub hexagonal: T,
    pub ths: T,
    pub srs: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport<T> {
    pub dimension: usize,
    pub length: T,
    pub volume: T,
    pub ratio: T,
    pub bounds: RatioBounds<T>,
    /// `ratio − bound` for each bound.
    pub margins: RatioBounds<T>,
    /// `srs` in dimension 3 (`ths` when the quotient is D₁□D₂), `hexagonal`
    /// in dimension 2.
    pub applicable_bound: String,
    pub margin: T,
}

pub fn report_ratio<T: Scalar>(net: &PeriodicNetwork<T>) -> Result<RatioReport<T>> {
    let ratio = net.ratio()?;
    let bounds = RatioBounds {
        hexagonal: FamilyKind::Hexagonal.ratio_bound::<T>(),
        ths: FamilyKind::Ths.ratio_bound::<T>(),
        srs: FamilyKind::Srs.ratio_bound::<T>(),
    };
    let applicable = match (net.dimension(), FamilyKind::recognize(net.graph())) {
        (2, _) => FamilyKind::Hexagonal,
        (_, Some(FamilyKind::Ths)) => FamilyKind::Ths,
        _ => FamilyKind::Srs,
    };
    Ok(RatioReport {
        dimension: net.dimension(),
        length: net.length(),
        volume: net.volume(),
        ratio,
        margins: RatioBounds {
            hexagonal: ratio - bounds.hexagonal,
            ths: ratio - bounds.ths,
            srs: ratio - bounds.srs,
        },
        bounds,
        applicable_bound: applicable.name().to_string(),
        margin: ratio - applicable.ratio_bound::<T>(),
    })
}

/// Settings read from a flat `key = value` file: `seed`, `precision` and
/// any number of `tol.<name>` entries. `#` starts a comment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolConfig {
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub output_precision: usize,
}

impl Default for ToolConfig {
    fn default() -> Self {
        ToolConfig {
            seed: 0,
            tolerances: BTreeMap::new(),
            output_precision: DEFAULT_PRECISION,
        }
    }
}

impl ToolConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = ToolConfig::default();
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::Parse(format!("line {}: {msg}", number + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "seed" => {
                    config.seed = value.parse().map_err(|_| at(format!("bad seed `{value}`")))?;
                }
                "precision" | "output_precision" => {
                    let p = value.parse().map_err(|_| at(format!("bad precision `{value}`")))?;
                    config.output_precision = check_precision(p).map_err(|e| at(e.to_string()))?;
                }
                _ => {
                    let name = key
                        .strip_prefix("tol.")
                        .or_else(|| key.strip_prefix("tolerance."))
                        .filter(|n| !n.is_empty())
                        .ok_or_else(|| at(format!("unknown key `{key}`")))?;
                    let tol: f64 = value.parse().map_err(|_| at(format!("bad tolerance `{value}`")))?;
                    if !(tol > 0.0 && tol.is_finite()) {
                        return Err(at(format!("tolerance `{key}` must be positive")));
                    }
                    config.tolerances.insert(name.to_string(), tol);
                }
            }
        }
        Ok(config)
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}
