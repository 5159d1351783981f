//! Text formats: fans with named conewise linear functions, polytopes, and exact matrices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Poly, Scalar};
use crate::fan::{ConewiseFunction, Fan, Polytope, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDoc {
    Named(String),
    Quadratic { sqrt: u32 },
}

impl FieldDoc {
    fn radicand(&self) -> Result<Option<u32>> {
        match self {
            FieldDoc::Named(s) if s == "Q" => Ok(None),
            FieldDoc::Named(s) => Err(Error::Parse(format!("unknown field '{s}'"))),
            FieldDoc::Quadratic { sqrt } => Ok(Some(*sqrt)),
        }
    }
}

/// A scalar written either as a JSON integer or as text like `-3/2` or `1/2+1/3*sqrt2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarDoc {
    Int(i64),
    Text(String),
}

impl ScalarDoc {
    fn value(&self, d: Option<u32>) -> Result<Scalar> {
        match self {
            ScalarDoc::Int(k) => Ok(Scalar::int(*k)),
            ScalarDoc::Text(t) => Scalar::parse(t, d),
        }
    }

    fn of(s: &Scalar) -> ScalarDoc {
        ScalarDoc::Text(s.to_string())
    }
}

fn row(r: &[ScalarDoc], d: Option<u32>, len: usize, what: &str) -> Result<Vector> {
    if r.len() != len {
        return Err(Error::Parse(format!("{what} has {} entries, expected {len}", r.len())));
    }
    r.iter().map(|x| x.value(d)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanFile {
    pub field: FieldDoc,
    pub dim: usize,
    pub rays: Vec<Vec<ScalarDoc>>,
    pub cones: Vec<Vec<usize>>,
    /// Named conewise linear functions: one coefficient row per entry of `cones`.
    #[serde(default)]
    pub functions: BTreeMap<String, Vec<Vec<ScalarDoc>>>,
}

/// A parsed fan with its named functions.
#[derive(Clone, Debug)]
pub struct FanInput {
    pub fan: Fan,
    pub functions: BTreeMap<String, ConewiseFunction>,
}

impl FanInput {
    pub fn function(&self, name: &str) -> Result<&ConewiseFunction> {
        self.functions
            .get(name)
            .ok_or_else(|| Error::Parse(format!("no function named '{name}' in the fan file")))
    }
}

pub fn parse_fan(text: &str) -> Result<FanInput> {
    let doc: FanFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let d = doc.field.radicand()?;
    let rays = doc.rays.iter().enumerate().map(|(i, r)| row(r, d, doc.dim, &format!("ray {i}"))).collect::<Result<_>>()?;
    if let Some(bad) = doc.cones.iter().flatten().find(|&&i| i >= doc.rays.len()) {
        return Err(Error::Parse(format!("cone refers to missing ray {bad}")));
    }
    let fan = Fan::new(doc.dim, rays, doc.cones.clone())?;
    if fan.field().radicand() != d && fan.field().radicand().is_some() {
        return Err(Error::Parse("ray coordinates leave the declared field".into()));
    }
    let mut functions = BTreeMap::new();
    for (name, rows) in &doc.functions {
        if rows.len() != doc.cones.len() {
            return Err(Error::Parse(format!("function '{name}' needs one row per listed cone")));
        }
        let mut pieces = BTreeMap::new();
        for (c, r) in doc.cones.iter().zip(rows) {
            let mut key = c.clone();
            key.sort_unstable();
            pieces.insert(key, Poly::linear(&row(r, d, doc.dim, &format!("function '{name}'"))?));
        }
        let f = ConewiseFunction::on_fan(&fan, pieces).map_err(|e| Error::Parse(format!("function '{name}': {e}")))?;
        functions.insert(name.clone(), f);
    }
    Ok(FanInput { fan, functions })
}

/// Write a fan (maximal cones only) with conewise linear functions.
pub fn fan_to_file(fan: &Fan, functions: &BTreeMap<String, ConewiseFunction>) -> FanFile {
    let field = match fan.field().radicand() {
        None => FieldDoc::Named("Q".into()),
        Some(d) => FieldDoc::Quadratic { sqrt: d },
    };
    let cones: Vec<Vec<usize>> = fan.maximal().iter().map(|&m| fan.cone(m).rays.clone()).collect();
    let functions = functions
        .iter()
        .map(|(name, f)| {
            let rows = cones.iter().map(|c| f.linear_coeffs(c).iter().map(ScalarDoc::of).collect()).collect();
            (name.clone(), rows)
        })
        .collect();
    FanFile {
        field,
        dim: fan.dim(),
        rays: fan.rays().iter().map(|r| r.iter().map(ScalarDoc::of).collect()).collect(),
        cones,
        functions,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub field: FieldDoc,
    pub dim: usize,
    #[serde(default)]
    pub vertices: Vec<Vec<ScalarDoc>>,
    /// Facet normals with support numbers `<normal, y> <= support`, used when no vertices
    /// are given.
    #[serde(default)]
    pub normals: Vec<Vec<ScalarDoc>>,
    #[serde(default)]
    pub supports: Vec<ScalarDoc>,
}

pub fn parse_polytope(text: &str) -> Result<Polytope> {
    let doc: PolytopeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let d = doc.field.radicand()?;
    if !doc.vertices.is_empty() {
        let vs = doc.vertices.iter().enumerate().map(|(i, r)| row(r, d, doc.dim, &format!("vertex {i}"))).collect::<Result<_>>()?;
        return Polytope::from_vertices(vs);
    }
    if doc.normals.is_empty() {
        return Err(Error::Parse("polytope needs vertices or normals with supports".into()));
    }
    let ns = doc.normals.iter().enumerate().map(|(i, r)| row(r, d, doc.dim, &format!("normal {i}"))).collect::<Result<_>>()?;
    let hs = doc.supports.iter().map(|x| x.value(d)).collect::<Result<_>>()?;
    Polytope::from_inequalities(ns, hs)
}

/// Exact matrix with explicit shape, entries as canonical strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Scalar>>,
}

impl MatrixDoc {
    pub fn of(m: &Matrix) -> MatrixDoc {
        MatrixDoc { rows: m.nrows(), cols: m.ncols(), entries: m.to_rows() }
    }

    pub fn matrix(&self) -> Result<Matrix> {
        if self.entries.len() != self.rows || self.entries.iter().any(|r| r.len() != self.cols) {
            return Err(Error::Parse("matrix entries do not match the declared shape".into()));
        }
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (i, r) in self.entries.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }
}
