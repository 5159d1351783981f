use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::{graded, Poly, Scalar};
use crate::fan::{ConeId, Fan};

use super::sections::{Section, SectionSpace};

/// The minimal sheaf on a fan, presented stalk by stalk.
///
/// Degrees are doubled throughout: a linear form has degree 2. The stalk at a cone `s` is the
/// free module over polynomials on the span of `s` (in that cone's span coordinates) with one
/// generator per entry of `gens[s]`. For every proper face `t` of `s`, the restriction of
/// generator `g` of `s` is the vector `restr[(s, t)][g]` of polynomials over the generators of
/// `t`.
#[derive(Clone, Debug)]
pub struct MinimalSheaf {
    fan: Fan,
    gens: Vec<Vec<u32>>,
    restr: BTreeMap<(ConeId, ConeId), Vec<Vec<Poly>>>,
}

impl MinimalSheaf {
    pub fn build(fan: &Fan) -> Result<MinimalSheaf> {
        let mut sheaf = MinimalSheaf { fan: fan.clone(), gens: vec![Vec::new(); fan.num_cones()], restr: BTreeMap::new() };
        sheaf.gens[fan.origin()] = vec![0];
        // cone ids are sorted by dimension, so every face is done before its cofaces
        for s in 0..fan.num_cones() {
            if s == fan.origin() {
                continue;
            }
            sheaf.build_stalk(s)?;
        }
        Ok(sheaf)
    }

    fn build_stalk(&mut self, s: ConeId) -> Result<()> {
        let cone = self.fan.cone(s).clone();
        let k = cone.dim as u32;
        let facets = cone.facets.clone();
        let mut gens = Vec::new();
        let mut images: Vec<Section> = Vec::new();
        let mut prev: Option<SectionSpace> = None;
        for d in (0..=2 * k).step_by(2) {
            let space = SectionSpace::over(self, &facets, d, &[]);
            let sub = match &prev {
                Some(p) => p.ambient_multiples(self, &space),
                None => Vec::new(),
            };
            let chosen = graded::residue_basis(&space.basis, &sub);
            if !chosen.is_empty() && d >= k {
                return Err(Error::Internal(format!(
                    "stalk at cone {:?} acquired a generator in degree {d}; the degree bound failed",
                    cone.rays
                )));
            }
            for i in chosen {
                gens.push(d);
                images.push(space.section_of(self, &space.basis[i]));
            }
            prev = Some(space);
        }
        self.gens[s] = gens;
        let mut facet_rows: BTreeMap<ConeId, Vec<Vec<Poly>>> = BTreeMap::new();
        for &t in &facets {
            facet_rows.insert(t, images.iter().map(|im| im.values[&t].clone()).collect());
        }
        // faces of lower dimension: go through a facet containing them
        for &t in cone.faces.iter().filter(|&&t| t != s) {
            let rows = if let Some(r) = facet_rows.get(&t) {
                r.clone()
            } else {
                let f = *facets
                    .iter()
                    .find(|&&f| self.fan.cone(f).faces.binary_search(&t).is_ok())
                    .expect("every proper face lies in a facet");
                facet_rows[&f].iter().map(|v| self.push_vector(f, v, t)).collect()
            };
            self.restr.insert((s, t), rows);
        }
        Ok(())
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Doubled generator degrees of the stalk at `s`.
    pub fn generators(&self, s: ConeId) -> &[u32] {
        &self.gens[s]
    }

    pub fn rank(&self, s: ConeId) -> usize {
        self.gens[s].len()
    }

    /// Restriction matrix from `s` to its face `t` (rows: generators of `s`).
    pub fn restriction(&self, s: ConeId, t: ConeId) -> Vec<Vec<Poly>> {
        if s == t {
            let d = self.fan.cone(s).dim;
            let r = self.gens[s].len();
            return (0..r)
                .map(|i| (0..r).map(|j| if i == j { Poly::one(d) } else { Poly::zero(d) }).collect())
                .collect();
        }
        self.restr[&(s, t)].clone()
    }

    /// Push a stalk element at `s` (coordinates over its generators) to the face `t`.
    pub fn push_vector(&self, s: ConeId, v: &[Poly], t: ConeId) -> Vec<Poly> {
        if s == t {
            return v.to_vec();
        }
        let rows = &self.restr[&(s, t)];
        let dt = self.fan.cone(t).dim;
        let mut out = vec![Poly::zero(dt); self.gens[t].len()];
        for (coef, row) in v.iter().zip(rows) {
            if coef.is_zero() {
                continue;
            }
            let c = self.fan.restrict(coef, s, t);
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = &*o + &(&c * r);
                }
            }
        }
        out
    }

    /// Re-check the defining property at every cone: the generators map onto a basis of the
    /// residue of the boundary sections, in each degree up to twice the cone dimension.
    pub fn verify(&self) -> Result<()> {
        if self.gens[self.fan.origin()] != [0] {
            return Err(Error::Internal("stalk at the origin is not one-dimensional".into()));
        }
        for c in self.fan.cones().iter().filter(|c| c.dim > 0) {
            let k = c.dim as u32;
            if c.is_simplicial() && self.gens[c.id] != [0] {
                return Err(Error::Internal(format!("simplicial cone {:?} has stalk {:?}", c.rays, self.gens[c.id])));
            }
            if self.gens[c.id].iter().any(|&g| g >= k) {
                return Err(Error::Internal(format!("cone {:?} has a generator in degree >= its dimension", c.rays)));
            }
            let mut prev: Option<SectionSpace> = None;
            for d in (0..=2 * k).step_by(2) {
                let space = SectionSpace::over(self, &c.facets, d, &[]);
                let mut sub = match &prev {
                    Some(p) => p.ambient_multiples(self, &space),
                    None => Vec::new(),
                };
                let expected = self.gens[c.id].iter().filter(|&&g| g == d).count();
                let before = graded::residue_basis(&sub, &[]).len();
                for (g, &gd) in self.gens[c.id].iter().enumerate() {
                    if gd != d {
                        continue;
                    }
                    let mut sec = Section::zero(d);
                    for &t in &c.facets {
                        sec.values.insert(t, self.restr[&(c.id, t)][g].clone());
                    }
                    sub.push(space.layout.flatten(&sec));
                }
                let after = graded::residue_basis(&sub, &[]).len();
                let total = graded::residue_basis(&space.basis, &[]).len();
                if after - before != expected || after != total {
                    return Err(Error::Internal(format!("residue map at cone {:?} is not an isomorphism in degree {d}", c.rays)));
                }
                prev = Some(space);
            }
        }
        Ok(())
    }

    /// Unit section `1` over the given maximal cones.
    pub fn unit_section(&self, cones: &[ConeId]) -> Section {
        let mut s = Section::zero(0);
        for &m in cones {
            let d = self.fan.cone(m).dim;
            let mut v = vec![Poly::zero(d); self.gens[m].len()];
            // the degree-zero generator restricts to 1 at the origin
            let idx = self.gens[m].iter().position(|&g| g == 0).expect("degree-zero generator");
            let at_origin = &self.restriction(m, self.fan.origin())[idx][0];
            let c = at_origin.constant_term();
            v[idx] = Poly::constant(d, c.inv());
            s.values.insert(m, v);
        }
        s
    }
}

/// Ambient linear coordinate `x_i` restricted to cone `t`.
pub(crate) fn coordinate_on(fan: &Fan, i: usize, t: ConeId) -> Poly {
    let n = fan.dim();
    let mut row = vec![Scalar::zero(); n];
    row[i] = Scalar::one();
    fan.restrict_ambient(&Poly::linear(&row), t)
}
