//! Lefschetz operators on intersection cohomology and the exact certificates for hard
//! Lefschetz and Hodge-Riemann.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Scalar};
use crate::fan::{is_strictly_convex, ConewiseFunction, Fan};
use crate::pairing::PairingMatrix;
use crate::sheaf::{module_multiply, IHSpace, MinimalSheaf};

/// Multiplication by a strictly convex `l` on IH, one matrix per degree. `matrices[j]` maps
/// IH^{2j} to IH^{2j+2}; columns are coordinates of the source basis.
#[derive(Clone, Debug)]
pub struct LefschetzAction {
    pub l: ConewiseFunction,
    pub n: usize,
    pub dims: Vec<usize>,
    pub matrices: Vec<Matrix>,
}

impl LefschetzAction {
    /// Matrix of `l^k` from IH^{2j}.
    pub fn power(&self, j: usize, k: usize) -> Matrix {
        let mut m = Matrix::identity(self.dim(j));
        for i in j..j + k {
            m = self.step(i).mul(&m);
        }
        m
    }

    fn dim(&self, j: usize) -> usize {
        self.dims.get(j).copied().unwrap_or(0)
    }

    fn step(&self, j: usize) -> Matrix {
        match self.matrices.get(j) {
            Some(m) => m.clone(),
            None => Matrix::zeros(0, self.dim(j)),
        }
    }
}

pub fn lefschetz_action(sheaf: &MinimalSheaf, l: &ConewiseFunction, space: &IHSpace) -> Result<LefschetzAction> {
    let fan = sheaf.fan();
    if !fan.is_complete() {
        return Err(Error::Precondition("Lefschetz operators are only considered on complete fans".into()));
    }
    if space.relative {
        return Err(Error::Precondition("expected absolute intersection cohomology".into()));
    }
    if l.is_zero() {
        return Err(Error::Precondition("l = 0 is not strictly convex".into()));
    }
    if l.doubled_degree() != Some(2) || !l.is_piecewise_linear() {
        return Err(Error::Precondition("l must be conewise linear".into()));
    }
    if let Err((s, t)) = is_strictly_convex(l, fan) {
        return Err(Error::Precondition(format!("l is not strictly convex (cones {s:?} and {t:?})")));
    }
    let n = space.n;
    let mut matrices = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let rows = if j < n { space.dims[j + 1] } else { 0 };
        let mut cols = Vec::with_capacity(space.dims[j]);
        for a in &space.lifts[j] {
            let la = module_multiply(sheaf, l, a)?;
            let c = if j < n { space.coords(&la)? } else { Vec::new() };
            cols.push(c);
        }
        matrices.push(Matrix::from_cols(rows, cols));
    }
    Ok(LefschetzAction { l: l.clone(), n, dims: space.dims.clone(), matrices })
}

/// The map `l^k: IH^{n-k} -> IH^{n+k}` (degrees in the doubled grading).
#[derive(Clone, Debug, Serialize)]
pub struct HLStep {
    pub k: usize,
    pub rows: usize,
    pub cols: usize,
    pub det: Option<Scalar>,
}

impl HLStep {
    pub fn passes(&self) -> bool {
        self.rows == self.cols && self.det.as_ref().is_some_and(|d| !d.is_zero())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HLCertificate {
    pub steps: Vec<HLStep>,
    pub unimodal: bool,
    pub passed: bool,
}

/// Degrees `k >= 0` for which IH^{n-k} can be nonzero, from the top down.
fn parities(n: usize) -> impl Iterator<Item = usize> {
    (0..=n).rev().filter(move |k| (n - k).is_multiple_of(2))
}

pub fn check_hl(action: &LefschetzAction) -> HLCertificate {
    let n = action.n;
    let steps: Vec<HLStep> = parities(n)
        .filter(|&k| k >= 1)
        .map(|k| {
            let m = action.power((n - k) / 2, k);
            let det = m.is_square().then(|| if m.nrows() == 0 { Scalar::one() } else { m.det() });
            HLStep { k, rows: m.nrows(), cols: m.ncols(), det }
        })
        .collect();
    let half = &action.dims[..=n / 2];
    let unimodal = half.windows(2).all(|w| w[0] <= w[1]);
    let passed = unimodal && steps.iter().all(HLStep::passes);
    HLCertificate { steps, unimodal, passed }
}

/// Kernel of `l^{k+1}` on IH^{n-k}, as coordinate vectors. Empty unless `n - k` is even.
pub fn primitive_basis(action: &LefschetzAction, k: usize) -> Vec<Vec<Scalar>> {
    let n = action.n;
    if k > n || (n - k) % 2 == 1 {
        return Vec::new();
    }
    action.power((n - k) / 2, k + 1).kernel()
}

#[derive(Clone, Debug, Serialize)]
pub struct HRBlock {
    pub k: usize,
    pub prim_dim: usize,
    /// Primitive basis as coordinate vectors in IH^{n-k}.
    pub basis: Vec<Vec<Scalar>>,
    pub gram: Vec<Vec<Scalar>>,
    pub pivots: Vec<Scalar>,
    pub positive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HRCertificate {
    pub blocks: Vec<HRBlock>,
    /// The primitive dimensions add back up to every `ih` entry.
    pub decomposition_consistent: bool,
    /// `(l a, b) = (a, l b)` on all basis pairs.
    pub self_adjoint: bool,
    pub passed: bool,
}

/// Gram matrices of `(-1)^{(n-k)/2} (a, l^k a)` on the primitive parts, with the pairing
/// given between IH and itself (the fan being complete).
pub fn check_hr(action: &LefschetzAction, pairing: &PairingMatrix) -> Result<HRCertificate> {
    let n = action.n;
    if pairing.blocks.len() != n + 1 {
        return Err(Error::Precondition("pairing blocks do not match the dimension".into()));
    }
    for (j, b) in pairing.blocks.iter().enumerate() {
        if b.nrows() != action.dims[j] || b.ncols() != action.dims[n - j] {
            return Err(Error::Precondition(format!("pairing block {j} has the wrong shape")));
        }
    }
    let mut blocks = Vec::new();
    let mut prim = vec![0; n + 1];
    for k in parities(n) {
        let j = (n - k) / 2;
        let basis = primitive_basis(action, k);
        prim[j] = basis.len();
        let p = Matrix::from_cols(action.dims[j], basis.clone());
        let form = pairing.blocks[j].mul(&action.power(j, k));
        let sign = if j.is_multiple_of(2) { Scalar::one() } else { Scalar::int(-1) };
        let gram = p.transpose().mul(&form).mul(&p).scale(&sign);
        let pivots = if gram.nrows() == 0 { Vec::new() } else { gram.symmetric_pivots() };
        let positive = gram.nrows() == 0 || gram.is_positive_definite();
        blocks.push(HRBlock { k, prim_dim: p.ncols(), basis, gram: gram.to_rows(), pivots, positive });
    }
    let decomposition_consistent = (0..=n).all(|j| {
        let total: usize = (0..=j.min(n - j)).map(|i| prim[i]).sum();
        total == action.dims[j]
    });
    let self_adjoint = (0..n).all(|j| {
        let left = action.step(j).transpose().mul(&pairing.blocks[j + 1]);
        let right = pairing.blocks[j].mul(&action.step(n - j - 1));
        left == right
    });
    let passed = decomposition_consistent && self_adjoint && blocks.iter().all(|b| b.positive);
    Ok(HRCertificate { blocks, decomposition_consistent, self_adjoint, passed })
}

/// `l1(x) + l2(y)` on `product_fan(a, b)`.
pub fn product_function(a: &Fan, b: &Fan, la: &ConewiseFunction, lb: &ConewiseFunction) -> ConewiseFunction {
    let n = a.dim() + b.dim();
    let off = a.rays().len();
    let mut pieces = BTreeMap::new();
    for &x in a.maximal() {
        for &y in b.maximal() {
            let mut r = a.cone(x).rays.clone();
            r.extend(b.cone(y).rays.iter().map(|i| i + off));
            let p = &la.on(a, x).embed(n, 0) + &lb.on(b, y).embed(n, a.dim());
            pieces.insert(r, p);
        }
    }
    ConewiseFunction::new(n, pieces)
}
