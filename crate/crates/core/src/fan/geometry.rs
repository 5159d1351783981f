//! Small exact linear-geometry helpers shared by cones, fans and polytopes.

use itertools::Itertools;

use crate::exactalg::{Echelon, Scalar, SparseVec};

pub type Vector = Vec<Scalar>;

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Scalar], c: &Scalar) -> Vector {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

/// Positive rescaling making the first nonzero coordinate equal to +1 or -1.
pub fn normalize_direction(v: &[Scalar]) -> Vector {
    match v.iter().find(|c| !c.is_zero()) {
        None => v.to_vec(),
        Some(c) => scale(v, &c.abs().inv()),
    }
}

/// Reduced row echelon basis of the span of `vectors` with its pivot columns.
pub fn rref(vectors: &[Vector]) -> (Vec<Vector>, Vec<usize>) {
    let len = vectors.first().map(Vec::len).unwrap_or(0);
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(&SparseVec::from_dense(v));
    }
    let rows = e.reduced_rows();
    let pivots = rows.iter().map(|(p, _)| *p).collect();
    (rows.into_iter().map(|(_, r)| r.to_dense(len)).collect(), pivots)
}

pub fn rank(vectors: &[Vector]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(&SparseVec::from_dense(v));
    }
    e.rank()
}

/// Basis of `{w : w . v = 0 for all v}` in ambient dimension `n`.
pub fn orthogonal_complement(vectors: &[Vector], n: usize) -> Vec<Vector> {
    let rows: Vec<SparseVec> = vectors.iter().map(|v| SparseVec::from_dense(v)).collect();
    crate::exactalg::kernel_of_rows(&rows, n).iter().map(|k| k.to_dense(n)).collect()
}

/// Coordinates of `v` in an rref basis (the entries of `v` at the pivots); `None` if `v` is
/// not in the span.
pub fn coords_in(basis: &[Vector], pivots: &[usize], v: &[Scalar]) -> Option<Vector> {
    let c: Vector = pivots.iter().map(|&p| v[p].clone()).collect();
    let mut back = vec![Scalar::zero(); v.len()];
    for (ci, b) in c.iter().zip(basis) {
        for (x, y) in back.iter_mut().zip(b) {
            *x += &(ci * y);
        }
    }
    (back.as_slice() == v).then_some(c)
}

/// Feasibility of `a . x >= b` for all constraints, by Fourier-Motzkin elimination.
pub fn fm_feasible(mut cons: Vec<(Vector, Scalar)>, nvars: usize) -> bool {
    for var in (0..nvars).rev() {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for (a, b) in cons {
            match a[var].signum() {
                1 => pos.push((a, b)),
                -1 => neg.push((a, b)),
                _ => rest.push((a, b)),
            }
        }
        for (ap, bp) in &pos {
            for (aq, bq) in &neg {
                let cp = -&aq[var];
                let cq = ap[var].clone();
                let a: Vector = ap.iter().zip(aq).map(|(x, y)| &(x * &cp) + &(y * &cq)).collect();
                let b = &(bp * &cp) + &(bq * &cq);
                rest.push((a, b));
            }
        }
        cons = dedupe(rest);
    }
    cons.iter().all(|(_, b)| !b.is_positive())
}

fn dedupe(cons: Vec<(Vector, Scalar)>) -> Vec<(Vector, Scalar)> {
    let mut out: Vec<(Vector, Scalar)> = Vec::new();
    for (a, b) in cons {
        let (a, b) = match a.iter().find(|c| !c.is_zero()) {
            Some(c) => {
                let s = c.abs().inv();
                (scale(&a, &s), &b * &s)
            }
            None => (a, b),
        };
        if let Some(e) = out.iter_mut().find(|(x, _)| *x == a) {
            if b > e.1 {
                e.1 = b;
            }
        } else {
            out.push((a, b));
        }
    }
    out
}

/// Facets of the cone spanned by `rays` (given in coordinates of a basis of their span, so
/// the cone is full-dimensional there). Returns, per facet, the indices (into `rays`) lying on
/// it and an inward normal. Errors describe non-pointed cones or non-extreme rays.
pub fn cone_facets(rays: &[Vector]) -> Result<Vec<(Vec<usize>, Vector)>, String> {
    let k = rays.first().map(Vec::len).unwrap_or(0);
    if k == 0 {
        return Ok(Vec::new());
    }
    if k == 1 {
        if rays.len() != 1 {
            return Err("one-dimensional cone with more than one ray is not pointed".into());
        }
        let s = Scalar::int(rays[0][0].signum() as i64);
        return Ok(vec![(Vec::new(), vec![s])]);
    }
    let mut facets: Vec<(Vec<usize>, Vector)> = Vec::new();
    for subset in (0..rays.len()).combinations(k - 1) {
        let vs: Vec<Vector> = subset.iter().map(|&i| rays[i].clone()).collect();
        if rank(&vs) != k - 1 {
            continue;
        }
        let w = orthogonal_complement(&vs, k).remove(0);
        let vals: Vec<Scalar> = rays.iter().map(|r| dot(&w, r)).collect();
        let has_pos = vals.iter().any(Scalar::is_positive);
        let has_neg = vals.iter().any(Scalar::is_negative);
        if has_pos && has_neg {
            continue;
        }
        let w = if has_neg { scale(&w, &Scalar::int(-1)) } else { w };
        let on: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_zero()).collect();
        if !facets.iter().any(|(f, _)| *f == on) {
            facets.push((on, w));
        }
    }
    let normals: Vec<Vector> = facets.iter().map(|(_, w)| w.clone()).collect();
    if rank(&normals) != k {
        return Err("cone is not pointed".into());
    }
    for i in 0..rays.len() {
        let through: Vec<Vector> =
            facets.iter().filter(|(f, _)| f.contains(&i)).map(|(_, w)| w.clone()).collect();
        if rank(&through) != k - 1 {
            return Err("a listed ray is not extreme".into());
        }
    }
    facets.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(facets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn square_cone_has_four_facets() {
        let rays = vec![v(&[1, 1, 1]), v(&[1, -1, 1]), v(&[1, 1, -1]), v(&[1, -1, -1])];
        let f = cone_facets(&rays).unwrap();
        assert_eq!(f.len(), 4);
        assert!(f.iter().all(|(on, _)| on.len() == 2));
    }

    #[test]
    fn half_plane_is_not_pointed() {
        let rays = vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])];
        assert!(cone_facets(&rays).is_err());
    }

    #[test]
    fn interior_ray_is_not_extreme() {
        let rays = vec![v(&[1, 0]), v(&[1, 1]), v(&[0, 1])];
        assert!(cone_facets(&rays).is_err());
    }

    #[test]
    fn fourier_motzkin() {
        // x >= 1, -x >= 1 infeasible; x >= 1, y - x >= 0 feasible
        assert!(!fm_feasible(vec![(v(&[1]), Scalar::one()), (v(&[-1]), Scalar::one())], 1));
        assert!(fm_feasible(vec![(v(&[1, 0]), Scalar::one()), (v(&[-1, 1]), Scalar::zero())], 2));
    }
}
