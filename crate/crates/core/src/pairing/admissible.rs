use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Poly};
use crate::fan::{ConeId, Subdivision};
use crate::sheaf::{Layout, MinimalSheaf, Section, SectionSpace};

/// Split embedding of the minimal sheaf of a fan into the push-forward of the minimal sheaf
/// of a subdivision. `images[s][g]` is the image of generator `g` of the stalk at coarse cone
/// `s`: a section of the fine sheaf over the fine cones of dimension `dim s` inside `s`.
#[derive(Clone, Debug)]
pub struct AdmissibleMorphism {
    pub subdivision: Subdivision,
    pub coarse: MinimalSheaf,
    pub fine: MinimalSheaf,
    images: Vec<Vec<Section>>,
}

impl AdmissibleMorphism {
    pub fn build(subdivision: Subdivision, coarse: MinimalSheaf, fine: MinimalSheaf) -> Result<AdmissibleMorphism> {
        let mut images: Vec<Vec<Section>> = vec![Vec::new(); coarse.fan().num_cones()];
        let origin_fine = fine.fan().origin();
        let mut id = Section::zero(0);
        id.values.insert(origin_fine, vec![Poly::one(0)]);
        images[coarse.fan().origin()] = vec![id];
        let mut alpha = AdmissibleMorphism { subdivision, coarse, fine, images: Vec::new() };
        for s in 0..alpha.coarse.fan().num_cones() {
            if s == alpha.coarse.fan().origin() {
                continue;
            }
            let gens = alpha.coarse.generators(s).to_vec();
            let mut out = Vec::new();
            for (g, &d) in gens.iter().enumerate() {
                out.push(alpha.lift_generator(&images, s, g, d)?);
            }
            images[s] = out;
        }
        alpha.images = images;
        Ok(alpha)
    }

    /// Boundary datum of a generator pushed through the images on the facets, then lifted
    /// over the pieces of `s`.
    fn lift_generator(&self, images: &[Vec<Section>], s: ConeId, g: usize, d: u32) -> Result<Section> {
        let cf = self.coarse.fan();
        let pieces = self.subdivision.pieces_of(s);
        let mut targets: Vec<ConeId> = Vec::new();
        let mut datum = Section::zero(d);
        for &t in &cf.cone(s).facets {
            let row = &self.coarse.restriction(s, t)[g];
            for p in self.subdivision.pieces_of(t) {
                targets.push(p);
                let dim = self.fine.fan().cone(p).dim;
                let mut v = vec![Poly::zero(dim); self.fine.rank(p)];
                for (h, coef) in row.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    // same span, same reduced coordinates
                    for (x, y) in v.iter_mut().zip(&images[t][h].values[&p]) {
                        *x = &*x + &(coef * y);
                    }
                }
                datum.values.insert(p, v);
            }
        }
        let space = SectionSpace::over(&self.fine, &pieces, d, &[]);
        let bl = Layout::new(&self.fine, &targets, d);
        let cols: Vec<Vec<_>> = space
            .sections(&self.fine)
            .iter()
            .map(|b| b.restrict_to(&self.fine, &targets).map(|r| bl.flatten(&r).to_dense(bl.len())))
            .collect::<Result<_>>()?;
        let rhs = bl.flatten(&datum).to_dense(bl.len());
        let coeffs = if cols.is_empty() {
            if rhs.iter().all(|c| c.is_zero()) {
                Vec::new()
            } else {
                return Err(Error::Internal("no sections to lift a generator".into()));
            }
        } else {
            Matrix::from_cols(bl.len(), cols)
                .solve(&rhs)
                .ok_or_else(|| Error::Internal(format!("generator of cone {:?} does not lift", cf.cone(s).rays)))?
        };
        let v = crate::exactalg::SparseVec::from_pairs(
            coeffs.iter().enumerate().flat_map(|(i, c)| space.basis[i].scale(c).entries().to_vec()),
        );
        Ok(space.section_of(&self.fine, &v))
    }

    pub fn image(&self, s: ConeId, g: usize) -> &Section {
        &self.images[s][g]
    }

    /// Push a section of the coarse sheaf to the fine sheaf.
    pub fn apply(&self, a: &Section) -> Result<Section> {
        let mut out = Section::zero(a.degree);
        for (&c, v) in &a.values {
            for p in self.subdivision.pieces_of(c) {
                let dim = self.fine.fan().cone(p).dim;
                let mut w = vec![Poly::zero(dim); self.fine.rank(p)];
                for (g, coef) in v.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    for (x, y) in w.iter_mut().zip(&self.images[c][g].values[&p]) {
                        *x = &*x + &(coef * y);
                    }
                }
                out.values.insert(p, w);
            }
        }
        Ok(out)
    }

    /// Restriction compatibility of every generator image, and injectivity on sections of
    /// the given domain in each degree up to `cutoff` (a left inverse exists exactly then).
    pub fn verify(&self, cutoff: u32) -> Result<()> {
        let cf = self.coarse.fan();
        for s in 0..cf.num_cones() {
            for (g, img) in self.images[s].iter().enumerate() {
                for &t in &cf.cone(s).facets {
                    let row = &self.coarse.restriction(s, t)[g];
                    let mut coarse_vals = Section::zero(img.degree);
                    coarse_vals.values.insert(t, row.clone());
                    let expected = self.apply(&coarse_vals)?;
                    let got = img.restrict_to(&self.fine, &expected.cones())?;
                    if got != expected {
                        return Err(Error::Internal(format!("image does not commute with restriction at {:?}", cf.cone(s).rays)));
                    }
                }
            }
        }
        for d in (0..=cutoff).step_by(2) {
            let space = SectionSpace::over(&self.coarse, cf.maximal(), d, &[]);
            let fine_cones: Vec<ConeId> = cf.maximal().iter().flat_map(|&m| self.subdivision.pieces_of(m)).collect();
            let fl = Layout::new(&self.fine, &fine_cones, d);
            let mut ech = crate::exactalg::Echelon::new();
            let mut rank = 0;
            for b in space.sections(&self.coarse) {
                if ech.insert(&fl.flatten(&self.apply(&b)?)).is_some() {
                    rank += 1;
                }
            }
            if rank != space.dim() {
                return Err(Error::Internal(format!("admissible morphism is not injective in degree {d}")));
            }
        }
        Ok(())
    }
}
