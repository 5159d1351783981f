use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactalg::{binomial, factorial, Matrix, Poly, RationalFn, Scalar};
use crate::fan::{product_fan, star_closure, star_link, ConeId, ConewiseFunction, Fan, RayChoice, Vector};
use crate::sheaf::{ih, IHSpace, MinimalSheaf, Section};

use super::canonical::{ih_pairing_matrix, PairingContext, PairingMatrix};
use super::zeta::{as_conewise, from_conewise, zeta_constant};

/// Pairing matrices from two different simplicial subdivisions.
pub fn subdivision_invariance(sheaf: &MinimalSheaf) -> Result<(PairingMatrix, PairingMatrix)> {
    let abs = ih(sheaf, false)?;
    let rel = ih(sheaf, true)?;
    let c1 = PairingContext::new(sheaf, RayChoice::Barycentric)?;
    let c2 = PairingContext::new(sheaf, RayChoice::Weighted)?;
    Ok((ih_pairing_matrix(&c1, &abs, &rel)?, ih_pairing_matrix(&c2, &abs, &rel)?))
}

/// Do two sheaves present the stalks of their common cones identically?
pub fn same_presentation(a: &MinimalSheaf, b: &MinimalSheaf) -> bool {
    let (fa, fb) = (a.fan(), b.fan());
    for c in fb.cones() {
        let Some(ca) = fa.id_of(&c.rays) else { return false };
        if a.generators(ca) != b.generators(c.id) {
            return false;
        }
        for &t in &c.faces {
            let ta = fa.id_of(&fb.cone(t).rays).expect("faces are shared");
            if a.restriction(ca, ta) != b.restriction(c.id, t) {
                return false;
            }
        }
    }
    true
}

/// Both sides of `[r(a), b]_D = [a, s(b)]_S` for all lifted basis pairs of complementary
/// degree, where `D` is a subfan of `S` (sharing the ray table).
pub fn adjointness(big: &MinimalSheaf, small: &MinimalSheaf) -> Result<(Matrix, Matrix)> {
    let (fs, fd) = (big.fan(), small.fan());
    if !fs.contains_fan(fd) || !same_presentation(big, small) {
        return Err(Error::Precondition("subfan sheaf does not match the ambient sheaf".into()));
    }
    let abs_s = ih(big, false)?;
    let rel_d = ih(small, true)?;
    let cs = PairingContext::new(big, RayChoice::Barycentric)?;
    let cd = PairingContext::new(small, RayChoice::Barycentric)?;
    let rows: Vec<&Section> = abs_s.lifts.iter().flatten().collect();
    let cols: Vec<&Section> = rel_d.lifts.iter().flatten().collect();
    let small_in_big: Vec<ConeId> = fd.maximal().iter().map(|&m| fs.id_of(&fd.cone(m).rays).unwrap()).collect();
    let mut lhs = Matrix::zeros(rows.len(), cols.len());
    let mut rhs = Matrix::zeros(rows.len(), cols.len());
    for (i, a) in rows.iter().enumerate() {
        let ra = a.restrict_to(big, &small_in_big)?.transport(fs, fd)?;
        for (j, b) in cols.iter().enumerate() {
            let sb = b.transport(fd, fs)?.extend_by_zero(big, fs.maximal());
            lhs.set(i, j, cd.pairing_constant(&ra, b)?);
            rhs.set(i, j, cs.pairing_constant(a, &sb)?);
        }
    }
    Ok((lhs, rhs))
}

/// Full pairing matrix of a complete fan on its own lifted basis.
pub fn complete_pairing(sheaf: &MinimalSheaf) -> Result<(IHSpace, Matrix)> {
    if !sheaf.fan().is_complete() {
        return Err(Error::Precondition("fan is not complete".into()));
    }
    let abs = ih(sheaf, false)?;
    let ctx = PairingContext::new(sheaf, RayChoice::Barycentric)?;
    let m = ih_pairing_matrix(&ctx, &abs, &abs)?.full(&abs.dims, &abs.dims);
    Ok((abs, m))
}

/// Pairings `[a, b]` in the complete fan of interior-supported sections of two closed stars
/// without a common maximal cone, extended by zero. Every value should vanish.
pub fn disjoint_support_values(sheaf: &MinimalSheaf, s1: ConeId, s2: ConeId) -> Result<Vec<Poly>> {
    let fan = sheaf.fan();
    let d1 = star_closure(fan, s1)?;
    let d2 = star_closure(fan, s2)?;
    let m1 = d1.maximal_ray_sets();
    if d2.maximal_ray_sets().iter().any(|m| m1.contains(m)) {
        return Err(Error::Precondition("the stars share a maximal cone".into()));
    }
    let ctx = PairingContext::new(sheaf, RayChoice::Barycentric)?;
    let mut lifted = Vec::new();
    for d in [&d1, &d2] {
        let l = MinimalSheaf::build(d)?;
        let rel = ih(&l, true)?;
        let secs: Vec<Section> = rel
            .lifts
            .iter()
            .flatten()
            .map(|s| Ok(s.transport(d, fan)?.extend_by_zero(sheaf, fan.maximal())))
            .collect::<Result<_>>()?;
        lifted.push(secs);
    }
    let mut out = Vec::new();
    for a in &lifted[0] {
        for b in &lifted[1] {
            out.push(ctx.pairing(a, b)?);
        }
    }
    Ok(out)
}

/// Projection along a ray: linear forms giving coordinates on the quotient, and the factor
/// by which the induced quotient volume form differs from the standard one.
fn quotient_coordinates(ray: &[Scalar]) -> (Vec<Vector>, Scalar) {
    let n = ray.len();
    let k = ray.iter().position(|c| !c.is_zero()).expect("nonzero ray");
    let mut forms = Vec::new();
    for i in (0..n).filter(|&i| i != k) {
        let mut row = vec![Scalar::zero(); n];
        row[i] = Scalar::one();
        row[k] = -(&ray[i] / &ray[k]);
        forms.push(row);
    }
    (forms, ray[k].abs())
}

/// Local-global comparison in a complete simplicial fan at a ray `r`: the projected complete
/// fan, the matrix `n (a_i, b_j)` on it, the matrix `(a_i, psi b_j)` on the closed star, and
/// the matrices of multiplication by `psi` from absolute to relative IH of the star.
#[derive(Clone, Debug)]
pub struct LocalGlobalReport {
    pub projected: Fan,
    pub lhs: Vec<Matrix>,
    pub rhs: Vec<Matrix>,
    pub psi_maps: Vec<Matrix>,
}

impl LocalGlobalReport {
    pub fn identity_holds(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn psi_bijective(&self) -> bool {
        self.psi_maps.iter().all(|m| m.is_square() && (m.nrows() == 0 || !m.det().is_zero()))
    }
}

pub fn local_global_check(fan: &Fan, ray: usize) -> Result<LocalGlobalReport> {
    let n = fan.dim();
    if n < 2 {
        return Err(Error::Precondition("local-global comparison needs dimension at least two".into()));
    }
    if !fan.is_complete() || !fan.is_simplicial() {
        return Err(Error::Precondition("local-global comparison runs on complete simplicial fans".into()));
    }
    let rho = fan.id_of(&[ray]).ok_or_else(|| Error::Precondition("not a ray of the fan".into()))?;
    let delta = star_closure(fan, rho)?;
    let sl = star_link(fan, rho);
    let link_max: Vec<ConeId> = sl.link.iter().copied().filter(|&c| fan.cone(c).dim + 1 == n).collect();
    let link_rays: Vec<usize> = {
        let mut v: Vec<usize> = link_max.iter().flat_map(|&c| fan.cone(c).rays.clone()).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let rv = fan.ray(ray).clone();
    let (forms, scale) = quotient_coordinates(&rv);
    let proj = |u: &Vector| -> Vector { forms.iter().map(|f| crate::fan::geometry::dot(f, u)).collect() };
    let prays: Vec<Vector> = link_rays.iter().map(|&r| proj(fan.ray(r))).collect();
    let pos = |r: usize| link_rays.iter().position(|&x| x == r).unwrap();
    let pcones: Vec<Vec<usize>> = link_max.iter().map(|&c| fan.cone(c).rays.iter().map(|&r| pos(r)).collect()).collect();
    let projected = Fan::new(n - 1, prays, pcones)?;
    let lp = MinimalSheaf::build(&projected)?;
    let ip = ih(&lp, false)?;
    // x_k / r_k is one on the ray; psi restricted to each star cone vanishes on its link facet
    let ld = MinimalSheaf::build(&delta)?;
    let mut psi = BTreeMap::new();
    let mut link_of: BTreeMap<Vec<usize>, ConeId> = BTreeMap::new();
    for &m in delta.maximal() {
        let rays = delta.cone(m).rays.clone();
        let others: Vec<usize> = rays.iter().copied().filter(|&r| r != ray).collect();
        let mut rows: Vec<Vector> = others.iter().map(|&r| fan.ray(r).clone()).collect();
        rows.push(rv.clone());
        let mut rhs = vec![Scalar::zero(); n - 1];
        rhs.push(Scalar::one());
        let coeffs = Matrix::from_rows(rows).solve(&rhs).ok_or_else(|| Error::Internal("degenerate star cone".into()))?;
        psi.insert(rays.clone(), Poly::linear(&coeffs));
        let pc: Vec<usize> = others.iter().map(|&r| pos(r)).collect();
        link_of.insert(rays, projected.id_of(&pc).ok_or_else(|| Error::Internal("link cone missing".into()))?);
    }
    let psi = ConewiseFunction::new(n, psi);
    let pull = |g: &ConewiseFunction| -> ConewiseFunction {
        let pieces = link_of
            .iter()
            .map(|(rays, &pc)| {
                let p = g.piece(&projected.cone(pc).rays).cloned().unwrap_or_else(|| Poly::zero(n - 1));
                (rays.clone(), p.substitute_linear(&forms, n))
            })
            .collect();
        ConewiseFunction::new(n, pieces)
    };
    let nf = Scalar::int(n as i64);
    let fact_n = factorial(n);
    let fact_m = factorial(n - 1);
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..n {
        let rows = &ip.lifts[j];
        let cols = &ip.lifts[n - 1 - j];
        let mut l = Matrix::zeros(rows.len(), cols.len());
        let mut r = Matrix::zeros(rows.len(), cols.len());
        for (i, a) in rows.iter().enumerate() {
            let fa = as_conewise(&lp, a)?;
            for (c, b) in cols.iter().enumerate() {
                let fb = as_conewise(&lp, b)?;
                let zbar = &zeta_constant(&projected, &fa.mul(&fb))? / &scale;
                l.set(i, c, &(&nf * &fact_m) * &zbar);
                let prod = pull(&fa).mul(&pull(&fb)).mul(&psi);
                r.set(i, c, &fact_n * &zeta_constant(&delta, &prod)?);
            }
        }
        lhs.push(l);
        rhs.push(r);
    }
    // multiplication by psi on IH of the star
    let abs = ih(&ld, false)?;
    let rel = ih(&ld, true)?;
    let mut psi_maps = Vec::new();
    for j in 0..n {
        let cols: Vec<Vec<Scalar>> = abs.lifts[j]
            .iter()
            .map(|a| {
                let f = as_conewise(&ld, a)?.mul(&psi);
                rel.coords(&from_conewise(&ld, &f)?)
            })
            .collect::<Result<_>>()?;
        psi_maps.push(Matrix::from_cols(rel.dims[j + 1], cols));
    }
    Ok(LocalGlobalReport { projected, lhs, rhs, psi_maps })
}

/// Sign comparison between the closed stars of `ray` and of its negative in a complete
/// simplicial fan: pairs `({a,b}_-, {g(a),g(b)}_+)` over section bases up to `cutoff`.
pub fn sign_flip_values(fan: &Fan, ray: usize, neg: usize, cutoff: u32) -> Result<Vec<(RationalFn, RationalFn)>> {
    if !fan.is_simplicial() || !fan.is_complete() {
        return Err(Error::Precondition("sign comparison runs on complete simplicial fans".into()));
    }
    let sum = crate::fan::geometry::add(fan.ray(ray), fan.ray(neg));
    if !crate::fan::geometry::is_zero(&sum) {
        return Err(Error::Precondition("rays are not opposite".into()));
    }
    let plus = star_closure(fan, fan.id_of(&[ray]).unwrap())?;
    let minus = star_closure(fan, fan.id_of(&[neg]).unwrap())?;
    let (lp, lm) = (MinimalSheaf::build(&plus)?, MinimalSheaf::build(&minus)?);
    let (cp, cm) = (PairingContext::new(&lp, RayChoice::Barycentric)?, PairingContext::new(&lm, RayChoice::Barycentric)?);
    // gamma copies the piece on neg + s to ray + s
    let gamma = |f: &ConewiseFunction| -> Result<ConewiseFunction> {
        let mut pieces = BTreeMap::new();
        for (rays, p) in f.pieces() {
            let mut r: Vec<usize> = rays.iter().map(|&x| if x == neg { ray } else { x }).collect();
            r.sort_unstable();
            if plus.id_of(&r).is_none() {
                return Err(Error::Precondition("stars are not mirror images".into()));
            }
            pieces.insert(r, p.clone());
        }
        ConewiseFunction::on_fan(&plus, pieces)
    };
    let mut basis = Vec::new();
    for d in (0..=cutoff).step_by(2) {
        let space = crate::sheaf::SectionSpace::over(&lm, minus.maximal(), d, &[]);
        basis.extend(space.sections(&lm));
    }
    let mut out = Vec::new();
    for a in &basis {
        for b in &basis {
            let left = cm.local(a, b)?;
            let ga = from_conewise(&lp, &gamma(&as_conewise(&lm, a)?)?)?;
            let gb = from_conewise(&lp, &gamma(&as_conewise(&lm, b)?)?)?;
            let right = cp.local(&ga, &gb)?;
            out.push((left, right));
        }
    }
    Ok(out)
}

/// Pairing matrices for a product of complete simplicial fans on the product basis.
#[derive(Clone, Debug)]
pub struct KunnethPairing {
    pub factor_zeta: (Matrix, Matrix),
    pub product_zeta: Matrix,
    pub factor_pairing: (Matrix, Matrix),
    pub product_pairing: Matrix,
    pub binomial: u64,
    pub product_basis_rank: usize,
    pub product_ih_dim: usize,
}

impl KunnethPairing {
    /// The zeta-normalized matrix is the tensor product, the `n!`-normalized one is the
    /// binomial multiple of it, and the product basis really is a basis.
    pub fn holds(&self) -> bool {
        let kz = self.factor_zeta.0.kronecker(&self.factor_zeta.1);
        let kp = self.factor_pairing.0.kronecker(&self.factor_pairing.1).scale(&Scalar::int(self.binomial as i64));
        self.product_zeta == kz && self.product_pairing == kp && self.product_basis_rank == self.product_ih_dim
    }
}

pub fn kunneth_pairing(a: &Fan, b: &Fan) -> Result<KunnethPairing> {
    for f in [a, b] {
        if !f.is_complete() || !f.is_simplicial() {
            return Err(Error::Precondition("tensor comparison runs on complete simplicial factors".into()));
        }
    }
    let prod = product_fan(a, b)?;
    let (la, lb, lp) = (MinimalSheaf::build(a)?, MinimalSheaf::build(b)?, MinimalSheaf::build(&prod)?);
    let (ia, ib, ip) = (ih(&la, false)?, ih(&lb, false)?, ih(&lp, false)?);
    let fa: Vec<ConewiseFunction> = ia.lifts.iter().flatten().map(|s| as_conewise(&la, s)).collect::<Result<_>>()?;
    let fb: Vec<ConewiseFunction> = ib.lifts.iter().flatten().map(|s| as_conewise(&lb, s)).collect::<Result<_>>()?;
    let deg = |f: &ConewiseFunction| f.doubled_degree().unwrap_or(0);
    let zmat = |fan: &Fan, fs: &[ConewiseFunction]| -> Result<Matrix> {
        let n = fan.dim() as u32;
        let mut m = Matrix::zeros(fs.len(), fs.len());
        for (i, x) in fs.iter().enumerate() {
            for (j, y) in fs.iter().enumerate() {
                if deg(x) + deg(y) == 2 * n {
                    m.set(i, j, zeta_constant(fan, &x.mul(y))?);
                }
            }
        }
        Ok(m)
    };
    let za = zmat(a, &fa)?;
    let zb = zmat(b, &fb)?;
    // product basis f_i(x) g_j(y)
    let off = a.rays().len();
    let n = prod.dim();
    let mut pf = Vec::new();
    for x in &fa {
        for y in &fb {
            let mut pieces = BTreeMap::new();
            for (ra, pa) in x.pieces() {
                for (rb, pb) in y.pieces() {
                    let mut r = ra.clone();
                    r.extend(rb.iter().map(|i| i + off));
                    pieces.insert(r, &pa.embed(n, 0) * &pb.embed(n, a.dim()));
                }
            }
            pf.push(ConewiseFunction::new(n, pieces));
        }
    }
    let zp = zmat(&prod, &pf)?;
    let mut ech = crate::exactalg::Echelon::new();
    let mut rank = 0;
    for f in &pf {
        let c = ip.coords(&from_conewise(&lp, f)?)?;
        // place coordinates in a global index by degree
        let j = (deg(f) / 2) as usize;
        let off: usize = ip.dims[..j].iter().sum();
        let v = crate::exactalg::SparseVec::from_pairs(c.into_iter().enumerate().map(|(i, x)| (off + i, x)));
        if ech.insert(&v).is_some() {
            rank += 1;
        }
    }
    let scale = |m: &Matrix, k: usize| m.scale(&factorial(k));
    Ok(KunnethPairing {
        factor_pairing: (scale(&za, a.dim()), scale(&zb, b.dim())),
        product_pairing: scale(&zp, n),
        factor_zeta: (za, zb),
        product_zeta: zp,
        binomial: binomial(n as u64, a.dim() as u64),
        product_basis_rank: rank,
        product_ih_dim: ip.total_dim(),
    })
}
