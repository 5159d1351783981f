use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::{ratfn_sum_reduce, Matrix, Poly, RationalFn, Scalar};
use crate::fan::{ConeId, ConewiseFunction, Fan, Vector};
use crate::sheaf::{MinimalSheaf, Section};

/// Facet forms of a simplicial full-dimensional cone: the basis dual to its rays (so each
/// is nonnegative on the cone) and the factor `|det|` making their wedge `+-` the standard
/// volume form.
pub fn facet_forms(fan: &Fan, s: ConeId) -> Result<(Vec<Vector>, Scalar)> {
    let c = fan.cone(s);
    if !c.is_simplicial() || c.dim != fan.dim() {
        return Err(Error::Precondition(format!("cone {:?} is not simplicial and full-dimensional", c.rays)));
    }
    let rows: Vec<Vector> = c.rays.iter().map(|&r| fan.ray(r).clone()).collect();
    let m = Matrix::from_rows(rows);
    let det = m.det();
    // columns of the inverse pair with the rays to the identity
    let inv = m.inverse().ok_or_else(|| Error::Internal("singular simplicial cone".into()))?;
    let forms = (0..fan.dim()).map(|i| inv.col(i)).collect();
    Ok((forms, det.abs()))
}

/// Product of the normalized facet forms.
pub fn facet_form_product(fan: &Fan, s: ConeId) -> Result<Poly> {
    let (forms, c) = facet_forms(fan, s)?;
    Ok(forms.iter().fold(Poly::constant(fan.dim(), c), |acc, w| &acc * &Poly::linear(w)))
}

/// The function equal to the facet form product on `s` and zero elsewhere.
pub fn thom_function(fan: &Fan, s: ConeId) -> Result<ConewiseFunction> {
    let f = facet_form_product(fan, s)?;
    let pieces = fan
        .maximal()
        .iter()
        .map(|&m| (fan.cone(m).rays.clone(), if m == s { f.clone() } else { Poly::zero(fan.dim()) }))
        .collect();
    Ok(ConewiseFunction::new(fan.dim(), pieces))
}

/// `sum f_s / F_s` over the full-dimensional maximal cones, as a reduced fraction.
pub fn zeta_rational(fan: &Fan, f: &ConewiseFunction) -> Result<RationalFn> {
    let mut terms = Vec::new();
    for &m in fan.maximal() {
        if fan.cone(m).dim != fan.dim() {
            continue;
        }
        let Some(p) = f.piece(&fan.cone(m).rays) else { continue };
        if p.is_zero() {
            continue;
        }
        let (forms, c) = facet_forms(fan, m)?;
        let den = forms.iter().map(|w| Poly::linear(w)).collect();
        terms.push(RationalFn::new(p.scale(&c.inv()), den));
    }
    if terms.is_empty() {
        return Ok(RationalFn::from_poly(Poly::zero(fan.dim())));
    }
    Ok(ratfn_sum_reduce(&terms))
}

/// The Brion functional. Fails when the fraction does not reduce to a polynomial.
pub fn brion_zeta(fan: &Fan, f: &ConewiseFunction) -> Result<Poly> {
    let r = zeta_rational(fan, f)?;
    r.as_poly()
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("zeta leaves a nonzero remainder: {r}")))
}

/// Value of the Brion functional on a function of degree exactly `2n`, where it is a
/// constant. Evaluated at two points off every facet hyperplane; the two values must agree.
pub fn zeta_constant(fan: &Fan, f: &ConewiseFunction) -> Result<Scalar> {
    let n = fan.dim();
    let mut data = Vec::new();
    for &m in fan.maximal() {
        if fan.cone(m).dim != n {
            continue;
        }
        let Some(p) = f.piece(&fan.cone(m).rays) else { continue };
        if p.is_zero() {
            continue;
        }
        if p.degree() != Some(n as u32) || !p.is_homogeneous() {
            return Err(Error::Precondition("zeta_constant needs a function of top degree".into()));
        }
        let (forms, c) = facet_forms(fan, m)?;
        data.push((p.clone(), forms, c));
    }
    let mut values = Vec::new();
    let mut k = 2i64;
    while values.len() < 2 {
        let v: Vector = (0..n).map(|i| Scalar::int(k.pow(i as u32))).collect();
        k += 1;
        let dens: Vec<Scalar> = data
            .iter()
            .map(|(_, forms, c)| forms.iter().fold(c.clone(), |acc, w| &acc * &crate::fan::geometry::dot(w, &v)))
            .collect();
        if dens.iter().any(Scalar::is_zero) {
            continue;
        }
        let total: Scalar = data.iter().zip(&dens).map(|((p, _, _), d)| &p.eval(&v) / d).sum();
        values.push(total);
    }
    if values[0] != values[1] {
        return Err(Error::Precondition("zeta of the function is not constant".into()));
    }
    Ok(values.swap_remove(0))
}

/// Value at the origin of the stalk generator of a rank-one stalk.
fn generator_value(sheaf: &MinimalSheaf, m: ConeId) -> Scalar {
    sheaf.restriction(m, sheaf.fan().origin())[0][0].constant_term()
}

/// Read a section of the sheaf of a simplicial fan as a conewise polynomial.
pub fn as_conewise(sheaf: &MinimalSheaf, s: &Section) -> Result<ConewiseFunction> {
    let fan = sheaf.fan();
    let mut pieces = BTreeMap::new();
    for (&m, v) in &s.values {
        let c = fan.cone(m);
        if sheaf.rank(m) != 1 || c.dim != fan.dim() {
            return Err(Error::Precondition("conewise reading needs full-dimensional simplicial cones".into()));
        }
        pieces.insert(c.rays.clone(), v[0].scale(&generator_value(sheaf, m)));
    }
    Ok(ConewiseFunction::new(fan.dim(), pieces))
}

/// Inverse of `as_conewise`.
pub fn from_conewise(sheaf: &MinimalSheaf, f: &ConewiseFunction) -> Result<Section> {
    let fan = sheaf.fan();
    let deg = f.doubled_degree().ok_or_else(|| Error::Precondition("function is not homogeneous".into()))?;
    let mut s = Section::zero(deg);
    for (rays, p) in f.pieces() {
        let m = fan.id_of(rays).ok_or_else(|| Error::Precondition(format!("{rays:?} is not a cone")))?;
        if sheaf.rank(m) != 1 || fan.cone(m).dim != fan.dim() {
            return Err(Error::Precondition("conewise reading needs full-dimensional simplicial cones".into()));
        }
        s.values.insert(m, vec![p.scale(&generator_value(sheaf, m).inv())]);
    }
    Ok(s)
}
