use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::conewise::ConewiseFunction;
use super::geometry::{self, Vector};
use super::structure::Fan;
use crate::error::{Error, Result};
use crate::exactalg::{Poly, Scalar};

#[derive(Clone, Debug)]
pub struct Facet {
    /// Outer normal.
    pub normal: Vector,
    /// Support number `max over P of <normal, y>`.
    pub support: Scalar,
    /// Indices of the vertices on the facet.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: Vec<usize>,
    /// Affine dimension; -1 for the empty face.
    pub dim: i32,
    /// Facets containing the face.
    pub facets: Vec<usize>,
}

/// Full-dimensional convex polytope with its facets and face lattice.
#[derive(Clone, Debug)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Facet>,
    faces: Vec<Face>,
}

fn affine_rank(points: &[&Vector]) -> i32 {
    match points.split_first() {
        None => -1,
        Some((p0, rest)) => {
            let diffs: Vec<Vector> = rest.iter().map(|p| geometry::sub(p, p0)).collect();
            if diffs.is_empty() {
                0
            } else {
                geometry::rank(&diffs) as i32
            }
        }
    }
}

impl Polytope {
    /// Polytope from its vertices; facets are found by enumeration and ordered by their
    /// normalized outer normal, largest first.
    pub fn from_vertices(vertices: Vec<Vector>) -> Result<Polytope> {
        let n = vertices.first().map(Vec::len).ok_or_else(|| Error::Precondition("polytope without vertices".into()))?;
        if vertices.iter().any(|v| v.len() != n) {
            return Err(Error::Parse("vertices of different lengths".into()));
        }
        let refs: Vec<&Vector> = vertices.iter().collect();
        if affine_rank(&refs) != n as i32 {
            return Err(Error::Precondition("polytope is not full-dimensional".into()));
        }
        let mut facets: Vec<Facet> = Vec::new();
        for subset in (0..vertices.len()).combinations(n) {
            let p0 = &vertices[subset[0]];
            let diffs: Vec<Vector> = subset[1..].iter().map(|&i| geometry::sub(&vertices[i], p0)).collect();
            if n > 1 && geometry::rank(&diffs) != n - 1 {
                continue;
            }
            let w = if n == 1 { vec![Scalar::one()] } else { geometry::orthogonal_complement(&diffs, n).remove(0) };
            let h = geometry::dot(&w, p0);
            let vals: Vec<Scalar> = vertices.iter().map(|v| &geometry::dot(&w, v) - &h).collect();
            let pos = vals.iter().any(Scalar::is_positive);
            let neg = vals.iter().any(Scalar::is_negative);
            if pos && neg {
                continue;
            }
            let w = geometry::normalize_direction(&if pos { geometry::scale(&w, &Scalar::int(-1)) } else { w });
            if facets.iter().any(|f| f.normal == w) {
                continue;
            }
            let support = geometry::dot(&w, p0);
            let on = (0..vertices.len()).filter(|&i| geometry::dot(&w, &vertices[i]) == support).collect();
            facets.push(Facet { normal: w, support, vertices: on });
        }
        facets.sort_by(|a, b| b.normal.cmp(&a.normal));
        Self::assemble(n, vertices, facets)
    }

    /// Polytope `{y : <normal_i, y> <= support_i}` keeping the given facet order and scaling.
    pub fn from_inequalities(normals: Vec<Vector>, supports: Vec<Scalar>) -> Result<Polytope> {
        let n = normals.first().map(Vec::len).ok_or_else(|| Error::Precondition("no inequalities".into()))?;
        if normals.len() != supports.len() {
            return Err(Error::Parse("normals and support numbers differ in count".into()));
        }
        let mut vertices: Vec<Vector> = Vec::new();
        for subset in (0..normals.len()).combinations(n) {
            let rows: Vec<Vector> = subset.iter().map(|&i| normals[i].clone()).collect();
            let m = crate::exactalg::Matrix::from_rows(rows);
            if m.rank() != n {
                continue;
            }
            let rhs: Vec<Scalar> = subset.iter().map(|&i| supports[i].clone()).collect();
            let Some(y) = m.solve(&rhs) else { continue };
            let ok = normals.iter().zip(&supports).all(|(w, h)| geometry::dot(w, &y) <= *h);
            if ok && !vertices.contains(&y) {
                vertices.push(y);
            }
        }
        vertices.sort();
        let p = Self::from_vertices(vertices)?;
        // reorder and rescale facets to match the given inequalities
        let mut facets = Vec::new();
        for (w, h) in normals.iter().zip(&supports) {
            let dir = geometry::normalize_direction(w);
            let f = p
                .facets
                .iter()
                .find(|f| f.normal == dir)
                .ok_or_else(|| Error::Precondition("an inequality does not define a facet".into()))?;
            let on = f.vertices.clone();
            let support = h.clone();
            facets.push(Facet { normal: w.clone(), support, vertices: on });
        }
        if facets.len() != p.facets.len() {
            return Err(Error::Precondition("inequalities do not match the facets".into()));
        }
        Self::assemble(n, p.vertices, facets)
    }

    fn assemble(dim: usize, vertices: Vec<Vector>, facets: Vec<Facet>) -> Result<Polytope> {
        // each vertex must be extreme: facets through it have normals of full rank
        for (i, _) in vertices.iter().enumerate() {
            let normals: Vec<Vector> = facets.iter().filter(|f| f.vertices.contains(&i)).map(|f| f.normal.clone()).collect();
            if geometry::rank(&normals) != dim {
                return Err(Error::Precondition(format!("point {i} is not a vertex")));
            }
        }
        // faces: intersections of facet vertex sets
        let all: Vec<usize> = (0..vertices.len()).collect();
        let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
        sets.insert(all);
        let mut frontier: Vec<Vec<usize>> = facets.iter().map(|f| f.vertices.clone()).collect();
        while let Some(s) = frontier.pop() {
            if !sets.insert(s.clone()) {
                continue;
            }
            for f in &facets {
                let t: Vec<usize> = s.iter().filter(|v| f.vertices.contains(v)).copied().collect();
                if !sets.contains(&t) {
                    frontier.push(t);
                }
            }
        }
        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|s| {
                let pts: Vec<&Vector> = s.iter().map(|&i| &vertices[i]).collect();
                let dim = affine_rank(&pts);
                let fs = (0..facets.len()).filter(|&j| s.iter().all(|v| facets[j].vertices.contains(v))).collect();
                Face { vertices: s, dim, facets: fs }
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
        Ok(Polytope { dim, vertices, facets, faces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn is_simple(&self) -> bool {
        (0..self.vertices.len()).all(|v| self.facets.iter().filter(|f| f.vertices.contains(&v)).count() == self.dim)
    }

    /// Facets through vertex `v`.
    pub fn vertex_facets(&self, v: usize) -> Vec<usize> {
        (0..self.facets.len()).filter(|&j| self.facets[j].vertices.contains(&v)).collect()
    }

    /// Number of faces of each dimension `-1..=n`.
    pub fn f_vector(&self) -> Vec<usize> {
        (-1..=self.dim as i32).map(|d| self.faces.iter().filter(|f| f.dim == d).count()).collect()
    }

    /// Euclidean volume by triangulation.
    pub fn volume(&self) -> Scalar {
        volume_of(self.dim, &self.vertices, &self.faces)
    }

    /// Outer normal fan with the support function. Ray `i` is the direction of facet `i`.
    pub fn normal_fan(&self) -> Result<(Fan, ConewiseFunction)> {
        let rays: Vec<Vector> = self.facets.iter().map(|f| f.normal.clone()).collect();
        let cones: Vec<Vec<usize>> = (0..self.vertices.len()).map(|v| self.vertex_facets(v)).collect();
        let fan = Fan::new(self.dim, rays, cones.clone())?;
        let mut pieces = BTreeMap::new();
        for (v, c) in cones.into_iter().enumerate() {
            pieces.insert(c, Poly::linear(&self.vertices[v]));
        }
        let h = ConewiseFunction::on_fan(&fan, pieces)?;
        Ok((fan, h))
    }

    /// Face lattice and cone poset anti-isomorphic, rank by rank.
    pub fn check_anti_isomorphic(&self, fan: &Fan) -> bool {
        let f = self.f_vector();
        (0..=self.dim).all(|k| {
            let faces_k = f[k + 1];
            let cones = fan.cones_of_dim(self.dim - k).count();
            faces_k == cones
        }) && fan.cones_of_dim(0).count() == 1
    }
}

/// Volume of a polytope from vertex coordinates and its face lattice, by recursive coning
/// from the smallest vertex of each face.
pub fn volume_of(dim: usize, vertices: &[Vector], faces: &[Face]) -> Scalar {
    let top = faces.iter().find(|f| f.dim == dim as i32).expect("polytope face");
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    triangulate(top, faces, &mut Vec::new(), &mut simplices);
    let mut total = Scalar::zero();
    for s in simplices {
        let p0 = &vertices[s[0]];
        let rows: Vec<Vector> = s[1..].iter().map(|&i| geometry::sub(&vertices[i], p0)).collect();
        total += &crate::exactalg::Matrix::from_rows(rows).det().abs();
    }
    &total / &crate::exactalg::factorial(dim)
}

fn triangulate(face: &Face, faces: &[Face], apex: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if face.dim == 0 {
        let mut s = apex.clone();
        s.push(face.vertices[0]);
        out.push(s);
        return;
    }
    let v0 = face.vertices[0];
    apex.push(v0);
    for sub in faces.iter().filter(|g| {
        g.dim == face.dim - 1 && !g.vertices.contains(&v0) && g.vertices.iter().all(|v| face.vertices.contains(v))
    }) {
        triangulate(sub, faces, apex, out);
    }
    apex.pop();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn square() {
        let p = Polytope::from_vertices(vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).unwrap();
        assert_eq!(p.facets().len(), 4);
        assert_eq!(p.f_vector(), vec![1, 4, 4, 1]);
        assert_eq!(p.volume(), Scalar::one());
        assert!(p.is_simple());
        let (fan, h) = p.normal_fan().unwrap();
        assert!(fan.is_complete());
        assert!(p.check_anti_isomorphic(&fan));
        assert!(super::super::conewise::is_strictly_convex(&h, &fan).is_ok());
    }

    #[test]
    fn octahedron_normal_fan_has_square_cones() {
        let p = Polytope::from_vertices(vec![
            v(&[1, 0, 0]),
            v(&[-1, 0, 0]),
            v(&[0, 1, 0]),
            v(&[0, -1, 0]),
            v(&[0, 0, 1]),
            v(&[0, 0, -1]),
        ])
        .unwrap();
        assert_eq!(p.volume(), Scalar::ratio(4, 3));
        let (fan, _) = p.normal_fan().unwrap();
        assert_eq!(fan.maximal().len(), 6);
        assert!(fan.maximal().iter().all(|&m| fan.cone(m).rays.len() == 4));
        assert!(fan.is_complete());
    }

    #[test]
    fn inequalities_keep_order() {
        let p = Polytope::from_inequalities(
            vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, 0]), v(&[0, -1])],
            vec![Scalar::one(), Scalar::one(), Scalar::zero(), Scalar::zero()],
        )
        .unwrap();
        assert_eq!(p.facets()[2].normal, v(&[-1, 0]));
        assert_eq!(p.volume(), Scalar::one());
    }
}
