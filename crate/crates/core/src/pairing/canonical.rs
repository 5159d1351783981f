use crate::error::{Error, Result};
use crate::exactalg::{factorial, Matrix, Poly, RationalFn, Scalar};
use crate::fan::{simplicial_refinement, RayChoice, Subdivision};
use crate::sheaf::{IHSpace, MinimalSheaf, Section};

use super::admissible::AdmissibleMorphism;
use super::zeta::{as_conewise, brion_zeta, zeta_constant, zeta_rational};

/// Everything needed to evaluate the canonical pairing of a quasi-convex fan: a simplicial
/// subdivision with an admissible morphism into it.
#[derive(Clone, Debug)]
pub struct PairingContext {
    pub alpha: AdmissibleMorphism,
}

impl PairingContext {
    /// Subdivide with the given ray rule (no subdivision if already simplicial).
    pub fn new(sheaf: &MinimalSheaf, choice: RayChoice) -> Result<PairingContext> {
        let fan = sheaf.fan();
        if fan.is_simplicial() {
            let alpha = AdmissibleMorphism::build(Subdivision::identity(fan), sheaf.clone(), sheaf.clone())?;
            return Ok(PairingContext { alpha });
        }
        let des = simplicial_refinement(fan, choice)?;
        Self::with_subdivision(sheaf, des.subdivision)
    }

    pub fn with_subdivision(sheaf: &MinimalSheaf, sub: Subdivision) -> Result<PairingContext> {
        if !sub.fine.is_simplicial() {
            return Err(Error::Precondition("pairing needs a simplicial subdivision".into()));
        }
        let fine = MinimalSheaf::build(&sub.fine)?;
        let alpha = AdmissibleMorphism::build(sub, sheaf.clone(), fine)?;
        Ok(PairingContext { alpha })
    }

    pub fn sheaf(&self) -> &MinimalSheaf {
        &self.alpha.coarse
    }

    fn n(&self) -> usize {
        self.alpha.coarse.fan().dim()
    }

    fn product(&self, a: &Section, b: &Section) -> Result<crate::fan::ConewiseFunction> {
        let fa = as_conewise(&self.alpha.fine, &self.alpha.apply(a)?)?;
        let fb = as_conewise(&self.alpha.fine, &self.alpha.apply(b)?)?;
        Ok(fa.mul(&fb))
    }

    /// `[a, b]` for `b` supported in the interior: `n!` times zeta of the product of the
    /// images in the simplicial subdivision.
    pub fn pairing(&self, a: &Section, b: &Section) -> Result<Poly> {
        let f = self.product(a, b)?;
        Ok(brion_zeta(self.alpha.fine.fan(), &f)?.scale(&factorial(self.n())))
    }

    /// Degree-zero value of the pairing for complementary degrees, zero otherwise.
    pub fn pairing_constant(&self, a: &Section, b: &Section) -> Result<Scalar> {
        let n = self.n() as u32;
        if a.degree + b.degree != 2 * n {
            return Ok(Scalar::zero());
        }
        let f = self.product(a, b)?;
        Ok(&zeta_constant(self.alpha.fine.fan(), &f)? * &factorial(self.n()))
    }

    /// `{a, b}`, the fraction-valued pairing on all sections.
    pub fn local(&self, a: &Section, b: &Section) -> Result<RationalFn> {
        let f = self.product(a, b)?;
        Ok(zeta_rational(self.alpha.fine.fan(), &f)?.scale(&factorial(self.n())))
    }
}

/// Pairing matrices between absolute IH (rows) and relative IH (columns): block `j` pairs
/// degree `2j` with degree `2n - 2j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingMatrix {
    pub blocks: Vec<Matrix>,
}

impl PairingMatrix {
    pub fn is_nondegenerate(&self) -> bool {
        self.blocks.iter().all(|m| m.is_square() && (m.nrows() == 0 || !m.det().is_zero()))
    }

    /// All blocks assembled into one matrix over the full graded bases.
    pub fn full(&self, abs_dims: &[usize], rel_dims: &[usize]) -> Matrix {
        let (na, nr): (usize, usize) = (abs_dims.iter().sum(), rel_dims.iter().sum());
        let mut m = Matrix::zeros(na, nr);
        let n = abs_dims.len() - 1;
        let offs = |dims: &[usize], j: usize| dims[..j].iter().sum::<usize>();
        for (j, b) in self.blocks.iter().enumerate() {
            let (r0, c0) = (offs(abs_dims, j), offs(rel_dims, n - j));
            for r in 0..b.nrows() {
                for c in 0..b.ncols() {
                    m.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
        }
        m
    }
}

pub fn ih_pairing_matrix(ctx: &PairingContext, abs: &IHSpace, rel: &IHSpace) -> Result<PairingMatrix> {
    let n = abs.n;
    let mut blocks = Vec::new();
    for j in 0..=n {
        let rows = &abs.lifts[j];
        let cols = &rel.lifts[n - j];
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (r, a) in rows.iter().enumerate() {
            for (c, b) in cols.iter().enumerate() {
                m.set(r, c, ctx.pairing_constant(a, b)?);
            }
        }
        blocks.push(m);
    }
    Ok(PairingMatrix { blocks })
}

/// Pairing blocks with a barycentric subdivision; used by the freeness certificate.
pub fn pairing_blocks(sheaf: &MinimalSheaf, abs: &IHSpace, rel: &IHSpace) -> Result<Vec<Matrix>> {
    let ctx = PairingContext::new(sheaf, RayChoice::Barycentric)?;
    Ok(ih_pairing_matrix(&ctx, abs, rel)?.blocks)
}
