use std::collections::BTreeMap;

use itertools::Itertools;

use super::geometry::Vector;
use super::structure::{ConeId, Fan};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, Scalar};

/// Piecewise polynomial function: one ambient polynomial per maximal cone, keyed by the
/// cone's ray list so it can be moved between fans sharing a ray table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConewiseFunction {
    nvars: usize,
    pieces: BTreeMap<Vec<usize>, Poly>,
}

impl ConewiseFunction {
    pub fn new(nvars: usize, pieces: BTreeMap<Vec<usize>, Poly>) -> Self {
        ConewiseFunction { nvars, pieces }
    }

    /// Build from per-maximal-cone polynomials, checking compatibility on shared faces.
    pub fn on_fan(fan: &Fan, pieces: BTreeMap<Vec<usize>, Poly>) -> Result<Self> {
        let f = ConewiseFunction { nvars: fan.dim(), pieces };
        for &m in fan.maximal() {
            if !f.pieces.contains_key(&fan.cone(m).rays) {
                return Err(Error::Precondition(format!("function undefined on cone {:?}", fan.cone(m).rays)));
            }
        }
        if let Some((a, b)) = f.incompatibility(fan) {
            return Err(Error::Precondition(format!("function pieces on {a:?} and {b:?} disagree on their common face")));
        }
        Ok(f)
    }

    /// The same global polynomial on every maximal cone.
    pub fn global(fan: &Fan, p: &Poly) -> Self {
        let pieces = fan.maximal().iter().map(|&m| (fan.cone(m).rays.clone(), p.clone())).collect();
        ConewiseFunction { nvars: fan.dim(), pieces }
    }

    pub fn constant(fan: &Fan, c: Scalar) -> Self {
        Self::global(fan, &Poly::constant(fan.dim(), c))
    }

    /// Piecewise linear function with prescribed values on the rays of a simplicial fan.
    pub fn from_ray_values(fan: &Fan, values: &[Scalar]) -> Result<Self> {
        let mut pieces = BTreeMap::new();
        for &m in fan.maximal() {
            let c = fan.cone(m);
            if !c.is_simplicial() || c.dim != fan.dim() {
                return Err(Error::Precondition("ray values determine a function only on full simplicial cones".into()));
            }
            let rows: Vec<Vec<Scalar>> = c.rays.iter().map(|&r| fan.ray(r).clone()).collect();
            let rhs: Vec<Scalar> = c.rays.iter().map(|&r| values[r].clone()).collect();
            let coeffs = crate::exactalg::Matrix::from_rows(rows)
                .solve(&rhs)
                .ok_or_else(|| Error::Internal("singular simplicial cone".into()))?;
            pieces.insert(c.rays.clone(), Poly::linear(&coeffs));
        }
        Ok(ConewiseFunction { nvars: fan.dim(), pieces })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn pieces(&self) -> &BTreeMap<Vec<usize>, Poly> {
        &self.pieces
    }

    pub fn piece(&self, rays: &[usize]) -> Option<&Poly> {
        self.pieces.get(rays)
    }

    /// Piece on a maximal cone of `fan`.
    pub fn on(&self, fan: &Fan, id: ConeId) -> &Poly {
        self.pieces.get(&fan.cone(id).rays).expect("function defined on every maximal cone")
    }

    /// First pair of maximal cones whose pieces disagree on the common face.
    pub fn incompatibility(&self, fan: &Fan) -> Option<(Vec<usize>, Vec<usize>)> {
        for (&a, &b) in fan.maximal().iter().tuple_combinations() {
            let (ca, cb) = (fan.cone(a), fan.cone(b));
            let common: Vec<usize> = ca.rays.iter().filter(|r| cb.rays.contains(r)).copied().collect();
            let Some(t) = fan.id_of(&common) else { continue };
            let (pa, pb) = (self.pieces.get(&ca.rays), self.pieces.get(&cb.rays));
            let (Some(pa), Some(pb)) = (pa, pb) else { continue };
            if fan.restrict_ambient(pa, t) != fan.restrict_ambient(pb, t) {
                return Some((ca.rays.clone(), cb.rays.clone()));
            }
        }
        None
    }

    pub fn is_compatible(&self, fan: &Fan) -> bool {
        self.incompatibility(fan).is_none()
    }

    /// Common degree in the doubled grading, when homogeneous (zero has any degree).
    pub fn is_zero(&self) -> bool {
        self.pieces.values().all(Poly::is_zero)
    }

    pub fn doubled_degree(&self) -> Option<u32> {
        let mut deg = None;
        for p in self.pieces.values() {
            if p.is_zero() {
                continue;
            }
            if !p.is_homogeneous() {
                return None;
            }
            let d = p.doubled_degree();
            if deg.is_some() && deg != d {
                return None;
            }
            deg = d;
        }
        deg.or(Some(0))
    }

    fn zip_with(&self, o: &Self, f: impl Fn(&Poly, &Poly) -> Poly) -> Self {
        let pieces = self
            .pieces
            .iter()
            .filter_map(|(k, p)| o.pieces.get(k).map(|q| (k.clone(), f(p, q))))
            .collect();
        ConewiseFunction { nvars: self.nvars, pieces }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip_with(o, |p, q| p + q)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip_with(o, |p, q| p - q)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.zip_with(o, |p, q| p * q)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ConewiseFunction { nvars: self.nvars, pieces: self.pieces.iter().map(|(k, p)| (k.clone(), p.scale(c))).collect() }
    }

    pub fn mul_poly(&self, g: &Poly) -> Self {
        ConewiseFunction { nvars: self.nvars, pieces: self.pieces.iter().map(|(k, p)| (k.clone(), p * g)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        ConewiseFunction { nvars: self.nvars, pieces: self.pieces.iter().map(|(c, p)| (c.clone(), p.pow(k))).collect() }
    }

    /// Restrict to the maximal cones of a subfan sharing the ray table.
    pub fn restrict_to(&self, sub: &Fan) -> Result<Self> {
        let mut pieces = BTreeMap::new();
        for &m in sub.maximal() {
            let rays = &sub.cone(m).rays;
            let p = self
                .pieces
                .get(rays)
                .ok_or_else(|| Error::Precondition(format!("function undefined on {rays:?}")))?;
            pieces.insert(rays.clone(), p.clone());
        }
        Ok(ConewiseFunction { nvars: self.nvars, pieces })
    }

    /// Pull back along a subdivision given by `coarse_of` (fine maximal ray list -> coarse
    /// maximal ray list).
    pub fn pull_back(&self, fine: &Fan, coarse_of: impl Fn(ConeId) -> Vec<usize>) -> Result<Self> {
        let mut pieces = BTreeMap::new();
        for &m in fine.maximal() {
            let key = coarse_of(m);
            let p = self
                .pieces
                .get(&key)
                .ok_or_else(|| Error::Precondition(format!("function undefined on {key:?}")))?;
            pieces.insert(fine.cone(m).rays.clone(), p.clone());
        }
        Ok(ConewiseFunction { nvars: self.nvars, pieces })
    }

    /// Is the function linear on every piece (doubled degree 2 or zero)?
    pub fn is_piecewise_linear(&self) -> bool {
        self.pieces.values().all(|p| p.is_zero() || (p.is_homogeneous() && p.degree() == Some(1)))
    }

    /// Coefficient vector of a linear piece.
    pub fn linear_coeffs(&self, rays: &[usize]) -> Vector {
        let p = &self.pieces[rays];
        (0..self.nvars).map(|i| p.coeff(&crate::exactalg::Monomial::var(self.nvars, i))).collect()
    }
}

/// Strict convexity of a piecewise linear `l` on a purely full-dimensional fan: for all
/// distinct maximal `s`, `t`, `l_t - l_s` is nonnegative on the rays of `t` and positive at
/// the sum of those rays. Returns the first violating pair otherwise.
pub fn is_strictly_convex(l: &ConewiseFunction, fan: &Fan) -> std::result::Result<(), (Vec<usize>, Vec<usize>)> {
    for &t in fan.maximal() {
        let lt = l.on(fan, t);
        let point = fan.interior_point(t);
        for &s in fan.maximal() {
            if s == t {
                continue;
            }
            let g = lt - l.on(fan, s);
            let on_rays = fan.cone(t).rays.iter().all(|&r| !g.eval(fan.ray(r)).is_negative());
            if !on_rays || !g.eval(&point).is_positive() {
                return Err((fan.cone(s).rays.clone(), fan.cone(t).rays.clone()));
            }
        }
    }
    Ok(())
}
