use crate::error::{Error, Result};
use crate::exactalg::{binomial, graded, Echelon, Scalar, SparseVec};
use crate::fan::{constructively_quasi_convex, product_fan, Fan, Provenance};

use super::minimal::MinimalSheaf;
use super::sections::{boundary_facets, Section, SectionSpace};

/// Intersection cohomology `Gamma / A+ Gamma` (or its interior-supported variant) with a
/// lifted section basis per even degree.
#[derive(Clone, Debug)]
pub struct IHSpace {
    pub relative: bool,
    pub n: usize,
    /// `dims[j]` is the dimension in doubled degree `2j`, for `j = 0..=n`.
    pub dims: Vec<usize>,
    pub lifts: Vec<Vec<Section>>,
    spaces: Vec<SectionSpace>,
    reducers: Vec<Echelon>,
}

impl IHSpace {
    /// Coordinates of the class of a section of degree `2j` in the lifted basis.
    pub fn coords(&self, s: &Section) -> Result<Vec<Scalar>> {
        if s.degree % 2 == 1 {
            return Err(Error::Precondition("odd degree".into()));
        }
        let j = (s.degree / 2) as usize;
        if j > self.n {
            return Ok(Vec::new());
        }
        let v = self.spaces[j].layout.flatten(s);
        let (res, tag) = self.reducers[j].reduce_tagged(&v);
        if !res.is_zero() {
            return Err(Error::Internal("element is not a section of the expected module".into()));
        }
        Ok(tag)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Basis of the section space in degree `2j`.
    pub fn space(&self, j: usize) -> &SectionSpace {
        &self.spaces[j]
    }
}

/// Absolute or relative intersection cohomology of the sheaf's whole fan, which must be
/// certified quasi-convex.
pub fn ih(sheaf: &MinimalSheaf, relative: bool) -> Result<IHSpace> {
    let cert = quasiconvex_certificate(sheaf)?;
    if !cert.accepted {
        return Err(Error::Precondition(format!("fan is not certified quasi-convex: {}", cert.reason)));
    }
    ih_unchecked(sheaf, relative)
}

pub(crate) fn ih_unchecked(sheaf: &MinimalSheaf, relative: bool) -> Result<IHSpace> {
    let fan = sheaf.fan();
    let n = fan.dim();
    let vanish = if relative { boundary_facets(fan) } else { Vec::new() };
    let mut dims = Vec::new();
    let mut lifts = Vec::new();
    let mut spaces: Vec<SectionSpace> = Vec::new();
    let mut reducers = Vec::new();
    for j in 0..=n + 1 {
        let space = SectionSpace::over(sheaf, fan.maximal(), 2 * j as u32, &vanish);
        let sub = match spaces.last() {
            Some(p) => p.ambient_multiples(sheaf, &space),
            None => Vec::new(),
        };
        let chosen = graded::residue_basis(&space.basis, &sub);
        if j == n + 1 {
            if !chosen.is_empty() {
                return Err(Error::Internal("intersection cohomology above the top degree".into()));
            }
            break;
        }
        let mut ech = Echelon::with_tags(chosen.len());
        for v in &sub {
            ech.insert(v);
        }
        for (r, &i) in chosen.iter().enumerate() {
            let mut tag = vec![Scalar::zero(); chosen.len()];
            tag[r] = Scalar::one();
            ech.insert_tagged(&space.basis[i], tag);
        }
        dims.push(chosen.len());
        lifts.push(chosen.iter().map(|&i| space.section_of(sheaf, &space.basis[i])).collect());
        reducers.push(ech);
        spaces.push(space);
    }
    Ok(IHSpace { relative, n, dims, lifts, spaces, reducers })
}

/// Outcome of the quasi-convexity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub accepted: bool,
    pub reason: String,
}

/// Accepts complete fans, closed stars in complete fans and products of certified fans;
/// otherwise runs a numeric freeness test (Hilbert series of the sections against the free
/// module on the residue, plus a nondegenerate pairing between absolute and relative IH).
pub fn quasiconvex_certificate(sheaf: &MinimalSheaf) -> Result<Certificate> {
    let fan = sheaf.fan();
    if !fan.is_pure() {
        return Ok(Certificate { accepted: false, reason: "fan is not purely full-dimensional".into() });
    }
    if fan.is_complete() {
        return Ok(Certificate { accepted: true, reason: "complete".into() });
    }
    if let Provenance::StarClosure { parent_complete: true, .. } = fan.provenance() {
        return Ok(Certificate { accepted: true, reason: "closed star in a complete fan".into() });
    }
    if constructively_quasi_convex(fan) {
        return Ok(Certificate { accepted: true, reason: "product of certified fans".into() });
    }
    let abs = ih_unchecked(sheaf, false)?;
    if let Some(j) = hilbert_mismatch(sheaf, &abs) {
        return Ok(Certificate { accepted: false, reason: format!("sections are not free (degree {})", 2 * j) });
    }
    let rel = ih_unchecked(sheaf, true)?;
    match crate::pairing::pairing_blocks(sheaf, &abs, &rel) {
        Ok(blocks) if blocks.iter().all(|m| m.is_square() && !m.det().is_zero()) => {
            Ok(Certificate { accepted: true, reason: "numeric freeness and duality".into() })
        }
        Ok(_) => Ok(Certificate { accepted: false, reason: "pairing is degenerate".into() }),
        Err(e) => Ok(Certificate { accepted: false, reason: format!("pairing failed: {e}") }),
    }
}

/// First degree where `dim Gamma` differs from the free module generated by the residue.
fn hilbert_mismatch(sheaf: &MinimalSheaf, abs: &IHSpace) -> Option<usize> {
    let n = abs.n as u64;
    for j in 0..=abs.n + 1 {
        let actual = if j <= abs.n {
            abs.spaces[j].dim()
        } else {
            SectionSpace::over(sheaf, sheaf.fan().maximal(), 2 * j as u32, &[]).dim()
        };
        let expected: u64 = (0..=j.min(abs.n)).map(|i| abs.dims[i] as u64 * binomial((j - i) as u64 + n - 1, n - 1)).sum();
        if actual as u64 != expected {
            return Some(j);
        }
    }
    None
}

pub fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethReport {
    pub ih_product: Vec<usize>,
    pub ih_convolution: Vec<usize>,
    pub rel_product: Vec<usize>,
    pub rel_convolution: Vec<usize>,
    pub holds: bool,
}

/// Compare IH of a product fan with the convolution of the factors' IH, absolute and
/// relative.
pub fn kunneth_check(a: &Fan, b: &Fan) -> Result<KunnethReport> {
    let la = MinimalSheaf::build(a)?;
    let lb = MinimalSheaf::build(b)?;
    let prod = product_fan(a, b)?;
    let lp = MinimalSheaf::build(&prod)?;
    let (ia, ib, ip) = (ih(&la, false)?, ih(&lb, false)?, ih(&lp, false)?);
    let (ra, rb, rp) = (ih(&la, true)?, ih(&lb, true)?, ih(&lp, true)?);
    let ih_convolution = convolve(&ia.dims, &ib.dims);
    let rel_convolution = convolve(&ra.dims, &rb.dims);
    let holds = ih_convolution == ip.dims && rel_convolution == rp.dims;
    Ok(KunnethReport { ih_product: ip.dims, ih_convolution, rel_product: rp.dims, rel_convolution, holds })
}

/// Flattened sections as sparse vectors in the degree-`2j` layout.
pub fn flatten_all(space: &SectionSpace, sections: &[Section]) -> Vec<SparseVec> {
    sections.iter().map(|s| space.layout.flatten(s)).collect()
}
