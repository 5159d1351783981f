use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::geometry::{self, Vector};
use crate::error::{Error, Result};
use crate::exactalg::{Poly, Scalar};

pub type ConeId = usize;

/// Scalar field of a fan: the rationals or a real quadratic extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Sqrt(u32),
}

impl Field {
    pub fn radicand(&self) -> Option<u32> {
        match self {
            Field::Rational => None,
            Field::Sqrt(d) => Some(*d),
        }
    }

    /// Field containing all given scalars; errors on mixed radicands.
    pub fn of<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Result<Field> {
        let mut d = 0;
        for x in xs {
            let e = x.radicand();
            if e != 0 {
                if d != 0 && d != e {
                    return Err(Error::Parse(format!("mixed fields sqrt{d} and sqrt{e}")));
                }
                d = e;
            }
        }
        Ok(if d == 0 { Field::Rational } else { Field::Sqrt(d) })
    }
}

/// How a fan was produced. Drives the constructive quasi-convexity whitelist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Given,
    /// `[St(sigma)]` inside a parent fan.
    StarClosure { parent_complete: bool, center: Vec<usize> },
    /// Product of two fans; the flag records whether both factors were quasi-convex.
    Product { factors_quasi_convex: bool },
    Subfan,
}

#[derive(Clone, Debug)]
pub struct Cone {
    pub id: ConeId,
    /// Sorted indices into the fan's ray table.
    pub rays: Vec<usize>,
    pub dim: usize,
    /// Reduced echelon basis of the linear span, with pivot columns.
    pub basis: Vec<Vector>,
    pub pivots: Vec<usize>,
    pub facets: Vec<ConeId>,
    /// Inward normal of each facet, in this cone's span coordinates.
    pub facet_normals: Vec<Vector>,
    /// All faces including the cone itself and the origin, sorted.
    pub faces: Vec<ConeId>,
}

impl Cone {
    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }
}

#[derive(Clone, Debug)]
pub struct Fan {
    dim: usize,
    field: Field,
    rays: Vec<Vector>,
    cones: Vec<Cone>,
    index: BTreeMap<Vec<usize>, ConeId>,
    maximal: Vec<ConeId>,
    cofaces: Vec<Vec<ConeId>>,
    complete: bool,
    pure: bool,
    boundary: Vec<ConeId>,
    provenance: Provenance,
}

struct RawCone {
    rays: Vec<usize>,
    dim: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
    facets: Vec<(Vec<usize>, Vector)>,
}

fn analyse(rays: &[Vector], idx: &[usize]) -> Result<RawCone> {
    let vecs: Vec<Vector> = idx.iter().map(|&i| rays[i].clone()).collect();
    let (basis, pivots) = if vecs.is_empty() { (Vec::new(), Vec::new()) } else { geometry::rref(&vecs) };
    let local: Vec<Vector> = vecs
        .iter()
        .map(|v| geometry::coords_in(&basis, &pivots, v).expect("ray lies in its own span"))
        .collect();
    let facets = geometry::cone_facets(&local).map_err(|e| Error::InvalidFan(format!("cone {idx:?}: {e}")))?;
    let facets = facets
        .into_iter()
        .map(|(on, w)| (on.into_iter().map(|i| idx[i]).collect(), w))
        .collect();
    Ok(RawCone { rays: idx.to_vec(), dim: basis.len(), basis, pivots, facets })
}

impl Fan {
    /// Validate a fan given by rays and (possibly redundant) maximal cones. Rays are rescaled
    /// by positive factors so that their first nonzero coordinate is +1 or -1; their order is
    /// kept.
    pub fn new(dim: usize, rays: Vec<Vector>, cones: Vec<Vec<usize>>) -> Result<Fan> {
        Self::build(dim, rays, cones, true, Provenance::Given)
    }

    pub(crate) fn build(
        dim: usize,
        rays: Vec<Vector>,
        cones: Vec<Vec<usize>>,
        check_intersections: bool,
        provenance: Provenance,
    ) -> Result<Fan> {
        if dim == 0 {
            return Err(Error::InvalidFan("ambient dimension must be positive".into()));
        }
        let mut normed = Vec::with_capacity(rays.len());
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::InvalidFan(format!("ray {i} has {} coordinates, expected {dim}", r.len())));
            }
            if geometry::is_zero(r) {
                return Err(Error::InvalidFan(format!("ray {i} is zero")));
            }
            let n = geometry::normalize_direction(r);
            if let Some(j) = normed.iter().position(|m: &Vector| *m == n) {
                return Err(Error::InvalidFan(format!("duplicate rays {j} and {i}")));
            }
            normed.push(n);
        }
        let field = Field::of(normed.iter().flatten())?;
        let mut listed: Vec<Vec<usize>> = Vec::new();
        for c in cones {
            let mut c = c;
            c.sort_unstable();
            if c.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidFan(format!("cone {c:?} repeats a ray")));
            }
            if let Some(&bad) = c.iter().find(|&&i| i >= normed.len()) {
                return Err(Error::InvalidFan(format!("cone refers to missing ray {bad}")));
            }
            if !listed.contains(&c) {
                listed.push(c);
            }
        }
        // face closure
        let mut raw: BTreeMap<Vec<usize>, RawCone> = BTreeMap::new();
        let mut stack: Vec<Vec<usize>> = listed.clone();
        stack.push(Vec::new());
        while let Some(c) = stack.pop() {
            if raw.contains_key(&c) {
                continue;
            }
            let rc = analyse(&normed, &c)?;
            for (f, _) in &rc.facets {
                if !raw.contains_key(f) {
                    stack.push(f.clone());
                }
            }
            raw.insert(c, rc);
        }
        // listed cones that are faces of other listed cones are not maximal
        let mut is_face_of_other: BTreeSet<Vec<usize>> = BTreeSet::new();
        for rc in raw.values() {
            for (f, _) in &rc.facets {
                is_face_of_other.insert(f.clone());
            }
        }
        let maximal_sets: Vec<Vec<usize>> = listed.iter().filter(|c| !is_face_of_other.contains(*c)).cloned().collect();
        if check_intersections {
            for (a, b) in maximal_sets.iter().tuple_combinations() {
                if !intersection_is_common_face(&normed, a, b, dim) {
                    return Err(Error::InvalidFan(format!("intersection not a face: cones {a:?} and {b:?}")));
                }
            }
        }
        // deterministic ids: by (dim, ray list)
        let mut order: Vec<&RawCone> = raw.values().collect();
        order.sort_by(|x, y| (x.dim, &x.rays).cmp(&(y.dim, &y.rays)));
        let index: BTreeMap<Vec<usize>, ConeId> = order.iter().enumerate().map(|(i, c)| (c.rays.clone(), i)).collect();
        let mut cones: Vec<Cone> = order
            .iter()
            .enumerate()
            .map(|(id, rc)| Cone {
                id,
                rays: rc.rays.clone(),
                dim: rc.dim,
                basis: rc.basis.clone(),
                pivots: rc.pivots.clone(),
                facets: rc.facets.iter().map(|(f, _)| index[f]).collect(),
                facet_normals: rc.facets.iter().map(|(_, w)| w.clone()).collect(),
                faces: Vec::new(),
            })
            .collect();
        for id in 0..cones.len() {
            let mut faces: BTreeSet<ConeId> = BTreeSet::new();
            let mut st = vec![id];
            while let Some(c) = st.pop() {
                if faces.insert(c) {
                    st.extend(cones[c].facets.iter().copied());
                }
            }
            cones[id].faces = faces.into_iter().collect();
        }
        let mut cofaces = vec![Vec::new(); cones.len()];
        for c in &cones {
            for &f in &c.faces {
                cofaces[f].push(c.id);
            }
        }
        let maximal: Vec<ConeId> = maximal_sets.iter().map(|c| index[c]).sorted().collect();
        let pure = maximal.iter().all(|&m| cones[m].dim == dim);
        let mut fan = Fan {
            dim,
            field,
            rays: normed,
            cones,
            index,
            maximal,
            cofaces,
            complete: false,
            pure,
            boundary: Vec::new(),
            provenance,
        };
        fan.boundary = fan.compute_boundary();
        fan.complete = fan.completeness_certificate();
        Ok(fan)
    }

    fn compute_boundary(&self) -> Vec<ConeId> {
        if !self.pure {
            return Vec::new();
        }
        let mut set = BTreeSet::new();
        for c in self.cones.iter().filter(|c| c.dim + 1 == self.dim) {
            let n = self.cofaces[c.id].iter().filter(|&&m| self.cones[m].dim == self.dim).count();
            if n == 1 {
                set.extend(c.faces.iter().copied());
            }
        }
        set.into_iter().collect()
    }

    fn completeness_certificate(&self) -> bool {
        if !self.pure || self.maximal.is_empty() {
            return false;
        }
        for c in self.cones.iter().filter(|c| c.dim + 1 == self.dim) {
            let n = self.cofaces[c.id].iter().filter(|&&m| self.cones[m].dim == self.dim).count();
            if n != 2 {
                return false;
            }
        }
        sample_directions(self.dim).iter().all(|v| self.maximal.iter().any(|&m| self.contains_point(m, v)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &Vector {
        &self.rays[i]
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn cone(&self, id: ConeId) -> &Cone {
        &self.cones[id]
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn id_of(&self, rays: &[usize]) -> Option<ConeId> {
        let mut r = rays.to_vec();
        r.sort_unstable();
        self.index.get(&r).copied()
    }

    pub fn origin(&self) -> ConeId {
        0
    }

    pub fn maximal(&self) -> &[ConeId] {
        &self.maximal
    }

    /// Cones containing `id` (including itself).
    pub fn cofaces(&self, id: ConeId) -> &[ConeId] {
        &self.cofaces[id]
    }

    pub fn cones_of_dim(&self, k: usize) -> impl Iterator<Item = &Cone> {
        self.cones.iter().filter(move |c| c.dim == k)
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    pub fn boundary(&self) -> &[ConeId] {
        &self.boundary
    }

    pub fn is_boundary(&self, id: ConeId) -> bool {
        self.boundary.binary_search(&id).is_ok()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub(crate) fn set_provenance(&mut self, p: Provenance) {
        self.provenance = p;
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(Cone::is_simplicial)
    }

    /// Maximal cones as ray lists.
    pub fn maximal_ray_sets(&self) -> Vec<Vec<usize>> {
        self.maximal.iter().map(|&m| self.cones[m].rays.clone()).collect()
    }

    pub fn interior_point(&self, id: ConeId) -> Vector {
        let mut p = vec![Scalar::zero(); self.dim];
        for &r in &self.cones[id].rays {
            p = geometry::add(&p, &self.rays[r]);
        }
        p
    }

    /// Parameters of `v` in the span coordinates of cone `id`, if `v` lies in its span.
    pub fn span_coords(&self, id: ConeId, v: &[Scalar]) -> Option<Vector> {
        let c = &self.cones[id];
        if c.dim == 0 {
            return geometry::is_zero(v).then(Vec::new);
        }
        geometry::coords_in(&c.basis, &c.pivots, v)
    }

    pub fn contains_point(&self, id: ConeId, v: &[Scalar]) -> bool {
        match self.span_coords(id, v) {
            None => false,
            Some(t) => self.cones[id].facet_normals.iter().all(|w| !geometry::dot(w, &t).is_negative()),
        }
    }

    pub fn relative_interior_contains(&self, id: ConeId, v: &[Scalar]) -> bool {
        match self.span_coords(id, v) {
            None => false,
            Some(t) => self.cones[id].facet_normals.iter().all(|w| geometry::dot(w, &t).is_positive()),
        }
    }

    /// Smallest cone containing `v`, if any.
    pub fn locate(&self, v: &[Scalar]) -> Option<ConeId> {
        self.cones.iter().find(|c| self.contains_point(c.id, v)).map(|c| c.id)
    }

    /// Linear forms expressing the span coordinates of cone `from` on the span of its face
    /// `to`: row `i` gives coordinate `i` of `from` in terms of the coordinates of `to`.
    pub fn restriction_forms(&self, from: ConeId, to: ConeId) -> Vec<Vector> {
        let (f, t) = (&self.cones[from], &self.cones[to]);
        f.pivots.iter().map(|&p| t.basis.iter().map(|b| b[p].clone()).collect()).collect()
    }

    /// Ambient linear forms restricted to the span of a cone.
    pub fn ambient_forms(&self, to: ConeId) -> Vec<Vector> {
        let t = &self.cones[to];
        (0..self.dim).map(|i| t.basis.iter().map(|b| b[i].clone()).collect()).collect()
    }

    /// Restrict a polynomial in span coordinates of `from` to its face `to`.
    pub fn restrict(&self, p: &Poly, from: ConeId, to: ConeId) -> Poly {
        if from == to {
            return p.clone();
        }
        p.substitute_linear(&self.restriction_forms(from, to), self.cones[to].dim)
    }

    /// Restrict an ambient polynomial to the span of a cone.
    pub fn restrict_ambient(&self, p: &Poly, to: ConeId) -> Poly {
        p.substitute_linear(&self.ambient_forms(to), self.cones[to].dim)
    }

    /// Inward facet forms of a full-dimensional cone as ambient linear forms.
    pub fn ambient_facet_normals(&self, id: ConeId) -> Vec<Vector> {
        let c = &self.cones[id];
        assert_eq!(c.dim, self.dim, "facet forms requested for a lower-dimensional cone");
        c.facet_normals.iter().map(|w| w.iter().enumerate().fold(vec![Scalar::zero(); self.dim], |mut acc, (i, wi)| {
            acc[c.pivots[i]] = &acc[c.pivots[i]] + wi;
            acc
        })).collect()
    }

    /// Subfan on the same ray table given by maximal cones (ray lists).
    pub fn subfan(&self, maximal: &[Vec<usize>]) -> Result<Fan> {
        for m in maximal {
            if self.id_of(m).is_none() {
                return Err(Error::Precondition(format!("{m:?} is not a cone of the fan")));
            }
        }
        Fan::build(self.dim, self.rays.clone(), maximal.to_vec(), false, Provenance::Subfan)
    }

    /// Does this fan share the ray table prefix of `other`, so ray indices agree?
    pub fn shares_rays_with(&self, other: &Fan) -> bool {
        let n = self.rays.len().min(other.rays.len());
        self.dim == other.dim && self.rays[..n] == other.rays[..n]
    }

    /// Is `other` (sharing the ray table) a subfan of this fan?
    pub fn contains_fan(&self, other: &Fan) -> bool {
        self.shares_rays_with(other) && other.cones.iter().all(|c| self.id_of(&c.rays).is_some())
    }
}

/// The common rays of `a` and `b` span their intersection exactly when some linear form
/// vanishes on the common rays, is positive on the other rays of `a` and negative on the
/// other rays of `b`.
fn intersection_is_common_face(rays: &[Vector], a: &[usize], b: &[usize], n: usize) -> bool {
    let common: Vec<usize> = a.iter().filter(|i| b.contains(i)).copied().collect();
    let cvecs: Vec<Vector> = common.iter().map(|&i| rays[i].clone()).collect();
    let params = if cvecs.is_empty() {
        (0..n)
            .map(|i| {
                let mut e = vec![Scalar::zero(); n];
                e[i] = Scalar::one();
                e
            })
            .collect()
    } else {
        geometry::orthogonal_complement(&cvecs, n)
    };
    let m = params.len();
    let mut cons = Vec::new();
    for &i in a.iter().filter(|i| !common.contains(i)) {
        let coeff: Vector = params.iter().map(|p| geometry::dot(p, &rays[i])).collect();
        cons.push((coeff, Scalar::one()));
    }
    for &i in b.iter().filter(|i| !common.contains(i)) {
        let coeff: Vector = params.iter().map(|p| -geometry::dot(p, &rays[i])).collect();
        cons.push((coeff, Scalar::one()));
    }
    geometry::fm_feasible(cons, m)
}

/// Deterministic direction sample for the completeness certificate.
pub fn sample_directions(n: usize) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for signs in (0..n).map(|_| vec![-1i64, 0, 1]).multi_cartesian_product() {
        if signs.iter().all(|&s| s == 0) {
            continue;
        }
        out.push(signs.iter().map(|&s| Scalar::int(s)).collect());
    }
    for shift in 0..n {
        out.push((0..n).map(|i| Scalar::int(((i + shift) % n) as i64 * 2 - 3)).collect());
        out.push((0..n).map(|i| Scalar::ratio(((i * 7 + shift * 3) % 5) as i64 - 2, 3)).collect());
    }
    out.retain(|v| !geometry::is_zero(v));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn line_fan() {
        let f = Fan::new(1, vec![v(&[1]), v(&[-1])], vec![vec![0], vec![1]]).unwrap();
        assert_eq!(f.num_cones(), 3);
        assert!(f.is_complete());
        assert!(f.boundary().is_empty());
    }

    #[test]
    fn quadrant_fan() {
        let f = Fan::new(
            2,
            vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, 0]), v(&[0, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap();
        assert_eq!(f.num_cones(), 9);
        assert!(f.is_complete() && f.is_simplicial());
    }

    #[test]
    fn overlapping_cones_are_rejected() {
        let err = Fan::new(2, vec![v(&[1, 0]), v(&[1, 1]), v(&[0, 1]), v(&[1, 2])], vec![vec![0, 2], vec![1, 3]])
            .unwrap_err();
        assert!(err.to_string().contains("intersection not a face"));
    }

    #[test]
    fn half_plane_fan_is_not_complete() {
        let f = Fan::new(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[0, -1])], vec![vec![0, 1], vec![0, 2]]).unwrap();
        assert!(!f.is_complete());
        assert_eq!(f.boundary().len(), 3);
    }
}
