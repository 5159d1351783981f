use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exactalg::{kernel_of_rows, monomials, Monomial, Poly, Scalar, SparseVec};
use crate::fan::{ConeId, ConewiseFunction, Fan};

use super::minimal::{coordinate_on, MinimalSheaf};

/// A homogeneous section of the minimal sheaf over a face-closed subfan, stored on the
/// subfan's maximal cones as coordinates over the stalk generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    /// Doubled degree.
    pub degree: u32,
    pub values: BTreeMap<ConeId, Vec<Poly>>,
}

impl Section {
    pub fn zero(degree: u32) -> Section {
        Section { degree, values: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.iter().all(Poly::is_zero))
    }

    pub fn cones(&self) -> Vec<ConeId> {
        self.values.keys().copied().collect()
    }

    pub fn add(&self, o: &Section) -> Section {
        let mut out = self.clone();
        for (k, v) in &o.values {
            match out.values.get_mut(k) {
                Some(w) => {
                    for (a, b) in w.iter_mut().zip(v) {
                        *a = &*a + b;
                    }
                }
                None => {
                    out.values.insert(*k, v.clone());
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Section {
        Section {
            degree: self.degree,
            values: self.values.iter().map(|(k, v)| (*k, v.iter().map(|p| p.scale(c)).collect())).collect(),
        }
    }

    /// Linear combination `sum c_i s_i` of sections of a common degree.
    pub fn combination(degree: u32, terms: &[(Scalar, &Section)]) -> Section {
        let mut out = Section::zero(degree);
        for (c, s) in terms {
            if !c.is_zero() {
                out = out.add(&s.scale(c));
            }
        }
        out
    }

    /// Value at any face `t` of a cone of the domain.
    pub fn value_at(&self, sheaf: &MinimalSheaf, t: ConeId) -> Option<Vec<Poly>> {
        let fan = sheaf.fan();
        let (&m, v) = self.values.iter().find(|(&m, _)| fan.cone(m).faces.binary_search(&t).is_ok())?;
        Some(sheaf.push_vector(m, v, t))
    }

    /// Multiply by an ambient polynomial (restricted to each cone).
    pub fn mul_ambient(&self, fan: &Fan, p: &Poly) -> Section {
        let deg = p.doubled_degree().unwrap_or(0);
        let values = self
            .values
            .iter()
            .map(|(&m, v)| {
                let q = fan.restrict_ambient(p, m);
                (m, v.iter().map(|x| x * &q).collect())
            })
            .collect();
        Section { degree: self.degree + deg, values }
    }

    /// Restrict to the maximal cones of a smaller face-closed domain.
    pub fn restrict_to(&self, sheaf: &MinimalSheaf, cones: &[ConeId]) -> Result<Section> {
        let mut values = BTreeMap::new();
        for &t in cones {
            let v = self
                .value_at(sheaf, t)
                .ok_or_else(|| Error::Precondition(format!("cone {t} lies outside the section's domain")))?;
            values.insert(t, v);
        }
        Ok(Section { degree: self.degree, values })
    }

    /// Move a section to another fan sharing the ray table, matching cones by their rays.
    /// Both sheaves must present the shared stalks identically.
    pub fn transport(&self, from: &Fan, to: &Fan) -> Result<Section> {
        let mut values = BTreeMap::new();
        for (&m, v) in &self.values {
            let rays = &from.cone(m).rays;
            let id = to.id_of(rays).ok_or_else(|| Error::Precondition(format!("cone {rays:?} missing in target fan")))?;
            values.insert(id, v.clone());
        }
        Ok(Section { degree: self.degree, values })
    }

    /// Extend by zero to further maximal cones.
    pub fn extend_by_zero(&self, sheaf: &MinimalSheaf, cones: &[ConeId]) -> Section {
        let mut out = self.clone();
        for &m in cones {
            out.values.entry(m).or_insert_with(|| {
                let d = sheaf.fan().cone(m).dim;
                vec![Poly::zero(d); sheaf.rank(m)]
            });
        }
        out
    }
}

/// Multiply a section by a homogeneous conewise polynomial on the same fan.
pub fn module_multiply(sheaf: &MinimalSheaf, f: &ConewiseFunction, s: &Section) -> Result<Section> {
    let fan = sheaf.fan();
    if f.nvars() != fan.dim() {
        return Err(Error::Precondition("function and sheaf live on different fans".into()));
    }
    let deg = f.doubled_degree().ok_or_else(|| Error::Precondition("function is not homogeneous".into()))?;
    let mut values = BTreeMap::new();
    for (&m, v) in &s.values {
        let host = fan
            .cofaces(m)
            .iter()
            .find(|c| fan.maximal().contains(c))
            .ok_or_else(|| Error::Internal("cone without a maximal coface".into()))?;
        let piece = f
            .piece(&fan.cone(*host).rays)
            .ok_or_else(|| Error::Precondition(format!("function undefined on {:?}", fan.cone(*host).rays)))?;
        let q = fan.restrict_ambient(piece, m);
        values.insert(m, v.iter().map(|x| x * &q).collect());
    }
    Ok(Section { degree: s.degree + deg, values })
}

/// Coordinates for sections of one degree over a fixed list of cones: one block of
/// monomial coefficients per (cone, generator).
#[derive(Clone, Debug)]
pub struct Layout {
    pub cones: Vec<ConeId>,
    pub degree: u32,
    blocks: Vec<Block>,
    len: usize,
}

#[derive(Clone, Debug)]
struct Block {
    cone: ConeId,
    gen: usize,
    nvars: usize,
    monos: Vec<Monomial>,
    offset: usize,
}

impl Layout {
    pub fn new(sheaf: &MinimalSheaf, cones: &[ConeId], degree: u32) -> Layout {
        let mut blocks = Vec::new();
        let mut offset = 0;
        for &c in cones {
            let nvars = sheaf.fan().cone(c).dim;
            for (g, &gd) in sheaf.generators(c).iter().enumerate() {
                let monos = if gd <= degree { monomials(nvars, (degree - gd) / 2) } else { Vec::new() };
                let len = monos.len();
                blocks.push(Block { cone: c, gen: g, nvars, monos, offset });
                offset += len;
            }
        }
        Layout { cones: cones.to_vec(), degree, blocks, len: offset }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn flatten(&self, s: &Section) -> SparseVec {
        let mut pairs = Vec::new();
        for b in &self.blocks {
            let Some(v) = s.values.get(&b.cone) else { continue };
            let p = &v[b.gen];
            for (j, m) in b.monos.iter().enumerate() {
                let c = p.coeff(m);
                if !c.is_zero() {
                    pairs.push((b.offset + j, c));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }

    pub fn section(&self, sheaf: &MinimalSheaf, v: &SparseVec) -> Section {
        let mut values: BTreeMap<ConeId, Vec<Poly>> = BTreeMap::new();
        for &c in &self.cones {
            let d = sheaf.fan().cone(c).dim;
            values.insert(c, vec![Poly::zero(d); sheaf.rank(c)]);
        }
        for b in &self.blocks {
            let terms: Vec<(Monomial, Scalar)> =
                b.monos.iter().enumerate().map(|(j, m)| (m.clone(), v.get(b.offset + j))).filter(|(_, c)| !c.is_zero()).collect();
            values.get_mut(&b.cone).unwrap()[b.gen] = Poly::from_terms(b.nvars, terms);
        }
        Section { degree: self.degree, values }
    }

    fn unit(&self, block: usize, j: usize, sheaf: &MinimalSheaf) -> Vec<Poly> {
        let b = &self.blocks[block];
        let mut v = vec![Poly::zero(b.nvars); sheaf.rank(b.cone)];
        v[b.gen] = Poly::monomial(b.nvars, b.monos[j].clone(), Scalar::one());
        v
    }
}

/// Local coordinates of a stalk element at `t` in a fixed degree.
fn local_coords(sheaf: &MinimalSheaf, t: ConeId, degree: u32, v: &[Poly]) -> Vec<(usize, Scalar)> {
    let nvars = sheaf.fan().cone(t).dim;
    let mut out = Vec::new();
    let mut offset = 0;
    for (g, &gd) in sheaf.generators(t).iter().enumerate() {
        if gd > degree {
            continue;
        }
        let monos = monomials(nvars, (degree - gd) / 2);
        for (j, m) in monos.iter().enumerate() {
            let c = v[g].coeff(m);
            if !c.is_zero() {
                out.push((offset + j, c));
            }
        }
        offset += monos.len();
    }
    out
}

/// A basis of the sections of one degree over a face-closed domain, optionally required to
/// vanish on some cones.
#[derive(Clone, Debug)]
pub struct SectionSpace {
    pub layout: Layout,
    pub basis: Vec<SparseVec>,
}

impl SectionSpace {
    /// Sections over the subfan with maximal cones `cones`, vanishing on the cones `vanish`.
    pub fn over(sheaf: &MinimalSheaf, cones: &[ConeId], degree: u32, vanish: &[ConeId]) -> SectionSpace {
        let fan = sheaf.fan();
        let layout = Layout::new(sheaf, cones, degree);
        // conditions indexed by (reference pair, local coordinate)
        let mut rows: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        let mut next_group = 0usize;
        let push_images = |group: usize, cone: ConeId, t: ConeId, sign: &Scalar, rows: &mut BTreeMap<(usize, usize), Vec<(usize, Scalar)>>| {
            for (bi, b) in layout.blocks.iter().enumerate().filter(|(_, b)| b.cone == cone) {
                for j in 0..b.monos.len() {
                    let img = sheaf.push_vector(cone, &layout.unit(bi, j, sheaf), t);
                    for (r, c) in local_coords(sheaf, t, degree, &img) {
                        rows.entry((group, r)).or_default().push((b.offset + j, &c * sign));
                    }
                }
            }
        };
        // compatibility on pairwise intersections
        let mut meets: BTreeMap<ConeId, Vec<ConeId>> = BTreeMap::new();
        for (i, &a) in cones.iter().enumerate() {
            for &b in &cones[i + 1..] {
                let ra = &fan.cone(a).rays;
                let common: Vec<usize> = ra.iter().filter(|r| fan.cone(b).rays.contains(r)).copied().collect();
                let t = fan.id_of(&common).expect("intersection of cones is a cone");
                let e = meets.entry(t).or_default();
                for c in [a, b] {
                    if !e.contains(&c) {
                        e.push(c);
                    }
                }
            }
        }
        let one = Scalar::one();
        let minus = Scalar::int(-1);
        for (&t, hosts) in &meets {
            let reference = hosts[0];
            for &h in &hosts[1..] {
                push_images(next_group, reference, t, &one, &mut rows);
                push_images(next_group, h, t, &minus, &mut rows);
                next_group += 1;
            }
        }
        let vanish: BTreeSet<ConeId> = vanish.iter().copied().collect();
        for &t in &vanish {
            if let Some(&h) = cones.iter().find(|&&m| fan.cone(m).faces.binary_search(&t).is_ok()) {
                push_images(next_group, h, t, &one, &mut rows);
                next_group += 1;
            }
        }
        let rows: Vec<SparseVec> = rows.into_values().map(SparseVec::from_pairs).collect();
        let basis = kernel_of_rows(&rows, layout.len());
        SectionSpace { layout, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> u32 {
        self.layout.degree
    }

    pub fn section_of(&self, sheaf: &MinimalSheaf, v: &SparseVec) -> Section {
        self.layout.section(sheaf, v)
    }

    pub fn sections(&self, sheaf: &MinimalSheaf) -> Vec<Section> {
        self.basis.iter().map(|b| self.layout.section(sheaf, b)).collect()
    }

    /// `x_i * b` for every basis element `b` and ambient coordinate `x_i`, flattened in the
    /// layout of `target` (two degrees higher, same cones).
    pub fn ambient_multiples(&self, sheaf: &MinimalSheaf, target: &SectionSpace) -> Vec<SparseVec> {
        let fan = sheaf.fan();
        let coords: BTreeMap<(usize, ConeId), Poly> = (0..fan.dim())
            .flat_map(|i| self.layout.cones.iter().map(move |&c| (i, c)))
            .map(|(i, c)| ((i, c), coordinate_on(fan, i, c)))
            .collect();
        let mut out = Vec::new();
        for b in &self.basis {
            let s = self.layout.section(sheaf, b);
            for i in 0..fan.dim() {
                let values = s
                    .values
                    .iter()
                    .map(|(&c, v)| (c, v.iter().map(|p| p * &coords[&(i, c)]).collect()))
                    .collect();
                let prod = Section { degree: s.degree + 2, values };
                let f = target.layout.flatten(&prod);
                if !f.is_zero() {
                    out.push(f);
                }
            }
        }
        out
    }
}

/// Basis of the sections of each doubled degree `0, 2, .., cutoff` over a face-closed
/// domain given by its maximal cones.
pub fn sections_over(sheaf: &MinimalSheaf, cones: &[ConeId], cutoff: i64) -> Result<Vec<Vec<Section>>> {
    if cutoff < 0 {
        return Err(Error::Precondition("negative degree cutoff".into()));
    }
    Ok((0..=cutoff as u32)
        .step_by(2)
        .map(|d| SectionSpace::over(sheaf, cones, d, &[]).sections(sheaf))
        .collect())
}

/// Sections over the whole (purely full-dimensional) fan vanishing on its boundary.
pub fn sections_with_support(sheaf: &MinimalSheaf, cutoff: i64) -> Result<Vec<Vec<Section>>> {
    if cutoff < 0 {
        return Err(Error::Precondition("negative degree cutoff".into()));
    }
    let fan = sheaf.fan();
    let bd = boundary_facets(fan);
    Ok((0..=cutoff as u32)
        .step_by(2)
        .map(|d| SectionSpace::over(sheaf, fan.maximal(), d, &bd).sections(sheaf))
        .collect())
}

/// Boundary cones of codimension one.
pub fn boundary_facets(fan: &Fan) -> Vec<ConeId> {
    fan.boundary().iter().copied().filter(|&c| fan.cone(c).dim + 1 == fan.dim()).collect()
}
