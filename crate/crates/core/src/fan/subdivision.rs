use std::collections::{BTreeMap, BTreeSet};

use super::conewise::{is_strictly_convex, ConewiseFunction};
use super::geometry::{self, Vector};
use super::structure::{ConeId, Fan, Provenance};
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Poly, Scalar};

/// The star `St(s)`, its closure, `dSt(s)` and `Link(s)`, as sorted cone id lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarLink {
    pub star: Vec<ConeId>,
    pub closed_star: Vec<ConeId>,
    pub star_boundary: Vec<ConeId>,
    pub link: Vec<ConeId>,
}

/// `Link(o)` is returned empty: the boundary of the star of the origin is empty.
pub fn star_link(fan: &Fan, s: ConeId) -> StarLink {
    let star: Vec<ConeId> = fan.cofaces(s).to_vec();
    let mut closed: BTreeSet<ConeId> = BTreeSet::new();
    for &c in &star {
        closed.extend(fan.cone(c).faces.iter().copied());
    }
    let star_set: BTreeSet<ConeId> = star.iter().copied().collect();
    let star_boundary: Vec<ConeId> = closed.iter().filter(|c| !star_set.contains(c)).copied().collect();
    let srays = &fan.cone(s).rays;
    let link = star_boundary
        .iter()
        .filter(|&&c| fan.cone(c).rays.iter().all(|r| !srays.contains(r)))
        .copied()
        .collect();
    StarLink { star, closed_star: closed.into_iter().collect(), star_boundary, link }
}

/// The subfan `[St(s)]` on the same ray table.
pub fn star_closure(fan: &Fan, s: ConeId) -> Result<Fan> {
    let maximal: Vec<Vec<usize>> = fan
        .cofaces(s)
        .iter()
        .filter(|&&c| fan.maximal().contains(&c))
        .map(|&c| fan.cone(c).rays.clone())
        .collect();
    let mut sub = fan.subfan(&maximal)?;
    sub.set_provenance(Provenance::StarClosure { parent_complete: fan.is_complete(), center: fan.cone(s).rays.clone() });
    Ok(sub)
}

/// A subdivision `fine -> coarse` with the map sending each fine cone to the smallest coarse
/// cone containing it. The fine fan extends the coarse ray table.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub fine: Fan,
    pub coarse: Fan,
    pub map: Vec<ConeId>,
}

impl Subdivision {
    pub fn new(fine: Fan, coarse: Fan) -> Result<Subdivision> {
        if !fine.shares_rays_with(&coarse) {
            return Err(Error::Precondition("subdivision must extend the ray table".into()));
        }
        let mut map = Vec::with_capacity(fine.num_cones());
        for c in fine.cones() {
            let p = fine.interior_point(c.id);
            let target = coarse
                .locate(&p)
                .ok_or_else(|| Error::Precondition(format!("cone {:?} lies outside the coarse support", c.rays)))?;
            map.push(target);
        }
        // every coarse maximal cone must be covered by full-dimensional pieces of the same dim
        Ok(Subdivision { fine, coarse, map })
    }

    pub fn identity(fan: &Fan) -> Subdivision {
        Subdivision { fine: fan.clone(), coarse: fan.clone(), map: (0..fan.num_cones()).collect() }
    }

    /// Fine cones of dimension `dim s` lying in coarse cone `s`.
    pub fn pieces_of(&self, s: ConeId) -> Vec<ConeId> {
        let d = self.coarse.cone(s).dim;
        (0..self.fine.num_cones()).filter(|&t| self.map[t] == s && self.fine.cone(t).dim == d).collect()
    }

    /// Fine cones lying in the closed coarse cone `s` (all dimensions).
    pub fn preimage_closed(&self, s: ConeId) -> Vec<ConeId> {
        let faces = &self.coarse.cone(s).faces;
        (0..self.fine.num_cones()).filter(|&t| faces.binary_search(&self.map[t]).is_ok()).collect()
    }

    pub fn compose(&self, outer: &Subdivision) -> Result<Subdivision> {
        // self: A -> B, outer: B -> C  gives A -> C
        Subdivision::new(self.fine.clone(), outer.coarse.clone())
    }
}

/// Star subdivision of `fan` at cone `s` with new ray `rho` in the relative interior of `s`.
pub fn star_subdivision(fan: &Fan, s: ConeId, rho: &[Scalar]) -> Result<Subdivision> {
    let sc = fan.cone(s);
    if sc.dim <= 1 {
        return Err(Error::Precondition("star subdivision needs a cone of dimension at least 2".into()));
    }
    if !fan.relative_interior_contains(s, rho) {
        return Err(Error::Precondition("new ray is not interior to the cone".into()));
    }
    let mut rays = fan.rays().to_vec();
    rays.push(geometry::normalize_direction(rho));
    let new_ray = rays.len() - 1;
    let mut maximal: Vec<Vec<usize>> = Vec::new();
    let star: BTreeSet<ConeId> = fan.cofaces(s).iter().copied().collect();
    for &m in fan.maximal() {
        if !star.contains(&m) {
            maximal.push(fan.cone(m).rays.clone());
            continue;
        }
        for &f in &fan.cone(m).facets {
            if star.contains(&f) {
                continue;
            }
            let mut r = fan.cone(f).rays.clone();
            r.push(new_ray);
            maximal.push(r);
        }
    }
    // every face of a star cone avoiding s lies in a facet avoiding s
    let fine = Fan::build(fan.dim(), rays, maximal, true, Provenance::Subfan)?;
    Subdivision::new(fine, fan.clone())
}

/// Cones with no free edge.
pub fn deficient_cones(fan: &Fan) -> Vec<ConeId> {
    fan.cones()
        .iter()
        .filter(|c| c.dim >= 2)
        .filter(|c| {
            !c.rays.iter().any(|r| {
                c.facets.iter().any(|&f| {
                    let fr = &fan.cone(f).rays;
                    !fr.contains(r) && fr.len() + 1 == c.rays.len()
                })
            })
        })
        .map(|c| c.id)
        .collect()
}

/// Face closure of the deficient cones; empty exactly for simplicial fans.
pub fn singular_subfan(fan: &Fan) -> Vec<ConeId> {
    let mut set = BTreeSet::new();
    for c in deficient_cones(fan) {
        set.extend(fan.cone(c).faces.iter().copied());
    }
    set.into_iter().collect()
}

/// Deficient cone of largest dimension, lowest id among ties.
fn next_deficient(fan: &Fan) -> Option<ConeId> {
    let d = deficient_cones(fan);
    let top = d.iter().map(|&c| fan.cone(c).dim).max()?;
    d.into_iter().find(|&c| fan.cone(c).dim == top)
}

/// How to pick the new ray of a star subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RayChoice {
    /// Sum of the cone's rays.
    Barycentric,
    /// `sum (i+1) * r_i` over the cone's rays in order.
    Weighted,
}

fn new_ray(fan: &Fan, s: ConeId, choice: RayChoice) -> Vector {
    let mut p = vec![Scalar::zero(); fan.dim()];
    for (i, &r) in fan.cone(s).rays.iter().enumerate() {
        let w = match choice {
            RayChoice::Barycentric => Scalar::one(),
            RayChoice::Weighted => Scalar::int(i as i64 + 1),
        };
        p = geometry::add(&p, &geometry::scale(fan.ray(r), &w));
    }
    p
}

/// One step of a desingularization.
#[derive(Clone, Debug)]
pub struct DesingStep {
    pub cone: Vec<usize>,
    pub ray: Vector,
    pub epsilon: Option<Scalar>,
    pub fan: Fan,
}

/// Result of repeated star subdivisions down to a simplicial fan.
#[derive(Clone, Debug)]
pub struct Desingularization {
    pub steps: Vec<DesingStep>,
    pub subdivision: Subdivision,
    pub function: Option<ConewiseFunction>,
}

/// Star-subdivide until simplicial, without tracking a convex function.
pub fn simplicial_refinement(fan: &Fan, choice: RayChoice) -> Result<Desingularization> {
    run_desingularize(fan, None, choice)
}

/// Star-subdivide until simplicial while keeping a strictly convex function.
pub fn desingularize(fan: &Fan, l: &ConewiseFunction) -> Result<Desingularization> {
    if let Err((a, b)) = is_strictly_convex(l, fan) {
        return Err(Error::Precondition(format!("function is not strictly convex (cones {a:?}, {b:?})")));
    }
    run_desingularize(fan, Some(l), RayChoice::Barycentric)
}

fn run_desingularize(fan: &Fan, l: Option<&ConewiseFunction>, choice: RayChoice) -> Result<Desingularization> {
    let mut current = fan.clone();
    let mut func = l.cloned();
    let mut steps = Vec::new();
    let mut deficient = deficient_cones(&current).len();
    while let Some(s) = next_deficient(&current) {
        let rho = new_ray(&current, s, choice);
        let sub = star_subdivision(&current, s, &rho)?;
        let after = deficient_cones(&sub.fine).len();
        if after >= deficient {
            return Err(Error::Internal("desingularization did not reduce the deficient cones".into()));
        }
        deficient = after;
        let mut eps_used = None;
        if let Some(lf) = &func {
            let (next, eps) = lift_convex(&sub, lf)?;
            func = Some(next);
            eps_used = Some(eps);
        }
        steps.push(DesingStep { cone: current.cone(s).rays.clone(), ray: rho, epsilon: eps_used, fan: sub.fine.clone() });
        current = sub.fine;
    }
    let subdivision = Subdivision::new(current, fan.clone())?;
    Ok(Desingularization { steps, subdivision, function: func })
}

/// `l + eps * lt` where `lt` vanishes off the new star and is -1 at the new ray; `eps`
/// starts at one and is halved until strict convexity holds.
fn lift_convex(sub: &Subdivision, l: &ConewiseFunction) -> Result<(ConewiseFunction, Scalar)> {
    let fine = &sub.fine;
    let n = fine.dim();
    let rho = fine.rays().len() - 1;
    let base = l.pull_back(fine, |m| sub.coarse.cone(sub.map[m]).rays.clone())?;
    let mut bump = BTreeMap::new();
    for &m in fine.maximal() {
        let c = fine.cone(m);
        let p = if c.rays.contains(&rho) {
            // vanish on the other rays, -1 at rho
            let others: Vec<Vector> = c.rays.iter().filter(|&&r| r != rho).map(|&r| fine.ray(r).clone()).collect();
            let mut rows = others.clone();
            rows.push(fine.ray(rho).clone());
            let mut rhs = vec![Scalar::zero(); others.len()];
            rhs.push(Scalar::int(-1));
            let coeffs = Matrix::from_rows(rows)
                .solve(&rhs)
                .ok_or_else(|| Error::Internal("inconsistent bump function".into()))?;
            Poly::linear(&coeffs)
        } else {
            Poly::zero(n)
        };
        bump.insert(c.rays.clone(), p);
    }
    let bump = ConewiseFunction::new(n, bump);
    let mut eps = Scalar::one();
    for _ in 0..64 {
        let cand = base.add(&bump.scale(&eps));
        if is_strictly_convex(&cand, fine).is_ok() {
            return Ok((cand, eps));
        }
        eps = &eps * &Scalar::ratio(1, 2);
    }
    Err(Error::Internal("no admissible epsilon found".into()))
}

/// Product fan with block-embedded rays: first the rays of `a`, then those of `b`.
pub fn product_fan(a: &Fan, b: &Fan) -> Result<Fan> {
    let n = a.dim() + b.dim();
    let mut rays = Vec::new();
    for r in a.rays() {
        let mut v = r.clone();
        v.extend(vec![Scalar::zero(); b.dim()]);
        rays.push(v);
    }
    for r in b.rays() {
        let mut v = vec![Scalar::zero(); a.dim()];
        v.extend(r.iter().cloned());
        rays.push(v);
    }
    let off = a.rays().len();
    let mut maximal = Vec::new();
    for &x in a.maximal() {
        for &y in b.maximal() {
            let mut c = a.cone(x).rays.clone();
            c.extend(b.cone(y).rays.iter().map(|r| r + off));
            maximal.push(c);
        }
    }
    let mut f = Fan::build(n, rays, maximal, false, Provenance::Subfan)?;
    let qc = constructively_quasi_convex(a) && constructively_quasi_convex(b);
    f.set_provenance(Provenance::Product { factors_quasi_convex: qc });
    Ok(f)
}

/// Product cone id of `x` in `a` and `y` in `b` inside `product_fan(a, b)`.
pub fn product_cone(a: &Fan, b: &Fan, prod: &Fan, x: ConeId, y: ConeId) -> ConeId {
    let off = a.rays().len();
    let mut r = a.cone(x).rays.clone();
    r.extend(b.cone(y).rays.iter().map(|i| i + off));
    prod.id_of(&r).expect("product cone exists")
}

/// Checks `[St(s)] = { t1 + t2 : t1 face of s, t2 in Link(s) }` by enumeration.
pub fn local_product_check(fan: &Fan, s: ConeId) -> bool {
    if fan.cone(s).dim == 0 {
        return true;
    }
    let sl = star_link(fan, s);
    let lhs: BTreeSet<ConeId> = sl.closed_star.iter().copied().collect();
    let mut rhs = BTreeSet::new();
    for &t1 in &fan.cone(s).faces {
        for &t2 in &sl.link {
            let mut union: Vec<usize> = fan.cone(t1).rays.clone();
            union.extend(fan.cone(t2).rays.iter().copied());
            union.sort_unstable();
            union.dedup();
            match minkowski_cone(fan, &union) {
                Some(c) => {
                    rhs.insert(c);
                }
                None => return false,
            }
        }
    }
    lhs == rhs
}

/// The fan cone equal to the cone spanned by the given rays, if any.
fn minkowski_cone(fan: &Fan, rays: &[usize]) -> Option<ConeId> {
    fan.cones().iter().find(|c| {
        c.rays.iter().all(|r| rays.contains(r)) && rays.iter().all(|&r| fan.contains_point(c.id, fan.ray(r)))
    })
    .map(|c| c.id)
}

/// Complete fans, closed stars in complete fans and products of such.
pub fn constructively_quasi_convex(fan: &Fan) -> bool {
    fan.is_complete()
        || matches!(fan.provenance(), Provenance::StarClosure { parent_complete: true, .. })
        || matches!(fan.provenance(), Provenance::Product { factors_quasi_convex: true })
}
