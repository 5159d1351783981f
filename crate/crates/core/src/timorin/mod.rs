//! Volume polynomial and polytope algebra of a simple polytope, its Lefschetz operator, and
//! the comparison with conewise polynomials on the normal fan.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{binomial, factorial, monomials, Echelon, Matrix, Monomial, Poly, Scalar, SparseVec};
use crate::fan::geometry::dot;
use crate::fan::{ConewiseFunction, Fan, Polytope, Vector};
use crate::pairing::zeta_constant;
use crate::sheaf::{ih, MinimalSheaf};

const MAX_HALVINGS: usize = 20;

/// `Vol` as a homogeneous polynomial in the support numbers `H_1..H_m` of the facets, valid
/// on the open set of support numbers keeping the combinatorial type.
#[derive(Clone, Debug)]
pub struct VolumePolynomial {
    pub polytope: Polytope,
    pub m: usize,
    pub n: usize,
    pub normals: Vec<Vector>,
    pub base: Vec<Scalar>,
    pub vol: Poly,
    pub seed: u64,
}

fn vertex_facets(p: &Polytope) -> Vec<Vec<usize>> {
    (0..p.vertices().len()).map(|v| p.vertex_facets(v)).collect()
}

/// Vertices for support numbers `h`, or `None` when the incidences change.
fn vertices_for(p: &Polytope, incid: &[Vec<usize>], h: &[Scalar]) -> Option<Vec<Vector>> {
    let normals: Vec<&Vector> = p.facets().iter().map(|f| &f.normal).collect();
    let mut out = Vec::with_capacity(incid.len());
    for fs in incid {
        let rows = fs.iter().map(|&i| normals[i].clone()).collect();
        let rhs: Vec<Scalar> = fs.iter().map(|&i| h[i].clone()).collect();
        let y = Matrix::from_rows(rows).solve(&rhs)?;
        let strict = (0..normals.len()).filter(|j| !fs.contains(j)).all(|j| dot(normals[j], &y) < h[j]);
        if !strict {
            return None;
        }
        out.push(y);
    }
    Some(out)
}

fn monomial_value(m: &Monomial, x: &[Scalar]) -> Scalar {
    m.0.iter().zip(x).fold(Scalar::one(), |acc, (&e, v)| &acc * &v.pow(e))
}

fn random_offset(rng: &mut ChaCha8Rng, radius: &Scalar) -> Scalar {
    // a coarse grid keeps the interpolation system small in bit size
    &Scalar::ratio(rng.gen_range(-4..=4), 4) * radius
}

/// Interpolate the volume polynomial from volumes of nearby polytopes of the same type.
pub fn volume_polynomial(p: &Polytope, seed: u64) -> Result<VolumePolynomial> {
    if !p.is_simple() {
        return Err(Error::Precondition("volume polynomial needs a simple polytope".into()));
    }
    let n = p.dim();
    let m = p.facets().len();
    let incid = vertex_facets(p);
    let base: Vec<Scalar> = p.facets().iter().map(|f| f.support.clone()).collect();
    let slack = incid
        .iter()
        .zip(p.vertices())
        .flat_map(|(fs, y)| {
            (0..m).filter(|j| !fs.contains(j)).map(|j| &base[j] - &dot(&p.facets()[j].normal, y)).collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_else(Scalar::one);
    let monos = monomials(m, n as u32);
    let count = binomial((m + n - 1) as u64, n as u64) as usize;
    debug_assert_eq!(count, monos.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut radius = &slack / &Scalar::int(4);
    for _ in 0..=MAX_HALVINGS {
        let mut rows = Vec::with_capacity(count);
        let mut rhs = Vec::with_capacity(count);
        let mut left_type = false;
        while rows.len() < count {
            let h: Vec<Scalar> = base.iter().map(|b| b + &random_offset(&mut rng, &radius)).collect();
            let Some(verts) = vertices_for(p, &incid, &h) else {
                left_type = true;
                break;
            };
            rows.push(monos.iter().map(|mo| monomial_value(mo, &h)).collect::<Vec<_>>());
            rhs.push(crate::fan::polytope::volume_of(n, &verts, p.faces()));
        }
        if left_type {
            radius = &radius / &Scalar::int(2);
            continue;
        }
        // generic samples almost always give an invertible system; draw again otherwise
        let Some(coeffs) = Matrix::from_rows(rows).solve(&rhs) else { continue };
        let vol = Poly::from_terms(m, monos.iter().cloned().zip(coeffs));
        let normals = p.facets().iter().map(|f| f.normal.clone()).collect();
        let v = VolumePolynomial { polytope: p.clone(), m, n, normals, base, vol, seed };
        v.verify()?;
        return Ok(v);
    }
    Err(Error::Precondition("no sampling radius keeps the combinatorial type".into()))
}

impl VolumePolynomial {
    /// Volume at the base point and translation invariance `sum_i xi_i(a) d_i Vol = 0`.
    pub fn verify(&self) -> Result<()> {
        if self.vol.eval(&self.base) != self.polytope.volume() {
            return Err(Error::Internal("interpolated volume disagrees at the base point".into()));
        }
        for a in 0..self.n {
            let op: Vec<Scalar> = self.normals.iter().map(|w| w[a].clone()).collect();
            if !self.vol.apply_operator(&Poly::linear(&op)).is_zero() {
                return Err(Error::Internal("volume polynomial is not translation invariant".into()));
            }
        }
        Ok(())
    }

    /// `L_P = sum_i H_i(P) d_i` as an operator polynomial.
    pub fn lefschetz_operator(&self) -> Poly {
        Poly::linear(&self.base)
    }
}

fn diff(p: &Poly, alpha: &Monomial) -> Poly {
    p.apply_operator(&Poly::monomial(p.nvars(), alpha.clone(), Scalar::one()))
}

fn facet_monomial(m: usize, facets: &[usize]) -> Monomial {
    let mut e = vec![0u32; m];
    for &i in facets {
        e[i] += 1;
    }
    Monomial(e)
}

/// `A_k` realized as the span of `d^alpha Vol`, `|alpha| = k`, with a basis of differential
/// monomials.
#[derive(Clone, Debug)]
pub struct PolytopeAlgebra {
    pub volume: VolumePolynomial,
    pub dims: Vec<usize>,
    pub basis: Vec<Vec<Monomial>>,
    images: Vec<Vec<Poly>>,
    reducers: Vec<Echelon>,
    /// Number of facet sets with empty intersection whose monomial was checked to vanish.
    pub relations_checked: usize,
}

impl PolytopeAlgebra {
    fn flatten(&self, k: usize, p: &Poly) -> SparseVec {
        let monos = monomials(self.volume.m, (self.volume.n - k) as u32);
        SparseVec::from_dense(&p.coords(&monos))
    }

    /// Coordinates in the basis of `A_k` of the class whose image on `Vol` is `p`.
    pub fn coords(&self, k: usize, p: &Poly) -> Result<Vec<Scalar>> {
        let (res, tag) = self.reducers[k].reduce_tagged(&self.flatten(k, p));
        if !res.is_zero() {
            return Err(Error::Internal("polynomial is not a derivative of the volume".into()));
        }
        Ok(tag)
    }

    pub fn image(&self, k: usize, r: usize) -> &Poly {
        &self.images[k][r]
    }

    /// `(a, b)_T = a b Vol` on the bases of `A_k` and `A_{n-k}`.
    pub fn pairing(&self, k: usize) -> Matrix {
        let n = self.volume.n;
        let mut out = Matrix::zeros(self.dims[k], self.dims[n - k]);
        for (r, a) in self.basis[k].iter().enumerate() {
            for (s, q) in self.images[n - k].iter().enumerate() {
                out.set(r, s, diff(q, a).constant_term());
            }
        }
        out
    }

    /// Whether `D_S` kills the volume for the facet set `S`.
    pub fn kills(&self, facets: &[usize]) -> bool {
        diff(&self.volume.vol, &facet_monomial(self.volume.m, facets)).is_zero()
    }
}

pub fn polytope_algebra(volume: &VolumePolynomial) -> Result<PolytopeAlgebra> {
    let (m, n) = (volume.m, volume.n);
    let mut dims = Vec::new();
    let mut basis = Vec::new();
    let mut images = Vec::new();
    let mut reducers = Vec::new();
    for k in 0..=n {
        let target = monomials(m, (n - k) as u32);
        let mut plain = Echelon::new();
        let mut chosen = Vec::new();
        let mut imgs = Vec::new();
        for alpha in monomials(m, k as u32) {
            let q = diff(&volume.vol, &alpha);
            if plain.insert(&SparseVec::from_dense(&q.coords(&target))).is_some() {
                chosen.push(alpha);
                imgs.push(q);
            }
        }
        let mut tagged = Echelon::with_tags(chosen.len());
        for (r, q) in imgs.iter().enumerate() {
            let mut tag = vec![Scalar::zero(); chosen.len()];
            tag[r] = Scalar::one();
            tagged.insert_tagged(&SparseVec::from_dense(&q.coords(&target)), tag);
        }
        dims.push(chosen.len());
        basis.push(chosen);
        images.push(imgs);
        reducers.push(tagged);
    }
    let mut alg = PolytopeAlgebra { volume: volume.clone(), dims, basis, images, reducers, relations_checked: 0 };
    let incid = vertex_facets(&volume.polytope);
    for size in 2..=n {
        for s in (0..m).combinations(size) {
            let meets = incid.iter().any(|fs| s.iter().all(|i| fs.contains(i)));
            if meets {
                continue;
            }
            if !alg.kills(&s) {
                return Err(Error::Internal(format!("facets {s:?} do not meet but their monomial survives")));
            }
            alg.relations_checked += 1;
        }
    }
    Ok(alg)
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexBasis {
    pub t: Vector,
    pub seed: u64,
    /// Number of down edges at each vertex.
    pub indices: Vec<usize>,
    /// Facets of the face `F(p)` spanned by the down edges at each vertex.
    pub faces: Vec<Vec<usize>>,
    /// Number of vertices of each index.
    pub counts: Vec<usize>,
    /// The monomials of index `k` are a basis of `A_{n-k}` for every `k`.
    pub is_basis: bool,
}

fn generic_functional(p: &Polytope, t: Option<Vector>, seed: u64) -> Result<Vector> {
    let injective = |t: &Vector| {
        let vals: Vec<Scalar> = p.vertices().iter().map(|v| dot(t, v)).collect();
        vals.iter().all_unique()
    };
    if let Some(t) = t {
        if injective(&t) {
            return Ok(t);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let t: Vector = (0..p.dim()).map(|_| Scalar::int(rng.gen_range(-50..=50))).collect();
        if injective(&t) {
            return Ok(t);
        }
    }
    Err(Error::Precondition("no generic linear functional found".into()))
}

/// Vertex monomials `D_{F(p)}` for a generic height `t` (a given `t` is replaced by a seeded
/// random one when it ties on two vertices).
pub fn vertex_basis(alg: &PolytopeAlgebra, t: Option<Vector>, seed: u64) -> Result<VertexBasis> {
    let p = &alg.volume.polytope;
    let n = p.dim();
    let t = generic_functional(p, t, seed)?;
    let height: Vec<Scalar> = p.vertices().iter().map(|v| dot(&t, v)).collect();
    let edges: Vec<_> = p.faces().iter().filter(|f| f.dim == 1).collect();
    let mut indices = Vec::new();
    let mut faces = Vec::new();
    for v in 0..p.vertices().len() {
        let mut fs = p.vertex_facets(v);
        let mut index = 0;
        for e in edges.iter().filter(|e| e.vertices.contains(&v)) {
            let w = if e.vertices[0] == v { e.vertices[1] } else { e.vertices[0] };
            if height[w] < height[v] {
                index += 1;
                fs.retain(|i| e.facets.contains(i));
            }
        }
        indices.push(index);
        faces.push(fs);
    }
    let counts: Vec<usize> = (0..=n).map(|k| indices.iter().filter(|&&i| i == k).count()).collect();
    let mut is_basis = true;
    for k in 0..=n {
        let mut ech = Echelon::new();
        let mut rank = 0;
        for (v, fs) in faces.iter().enumerate() {
            if indices[v] != k {
                continue;
            }
            let q = diff(&alg.volume.vol, &facet_monomial(alg.volume.m, fs));
            if ech.insert(&alg.flatten(n - k, &q)).is_some() {
                rank += 1;
            }
        }
        is_basis &= rank == counts[k] && rank == alg.dims[n - k];
    }
    Ok(VertexBasis { t, seed, indices, faces, counts, is_basis })
}

#[derive(Clone, Debug, Serialize)]
pub struct LPBlock {
    pub i: usize,
    pub det: Scalar,
    pub prim_dim: usize,
    pub gram: Vec<Vec<Scalar>>,
    pub pivots: Vec<Scalar>,
    pub positive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LPReport {
    pub blocks: Vec<LPBlock>,
    pub top_value: Scalar,
    pub expected: Scalar,
    pub passed: bool,
}

fn apply_power(p: &Poly, op: &Poly, k: usize) -> Poly {
    (0..k).fold(p.clone(), |acc, _| acc.apply_operator(op))
}

/// Hard Lefschetz and Hodge-Riemann for `L_P` on `A(P)`, and `L_P^n Vol = n! Vol(P)`.
pub fn lefschetz_lp_check(alg: &PolytopeAlgebra) -> Result<LPReport> {
    let n = alg.volume.n;
    let l = alg.volume.lefschetz_operator();
    let mut blocks = Vec::new();
    for i in 0..=n / 2 {
        let power = n - 2 * i;
        let mut cols = Vec::new();
        let mut kcols = Vec::new();
        for q in &alg.images[i] {
            let lq = apply_power(q, &l, power);
            cols.push(alg.coords(n - i, &lq)?);
            if i >= 1 {
                kcols.push(alg.coords(n - i + 1, &lq.apply_operator(&l))?);
            }
        }
        let hl = Matrix::from_cols(alg.dims[n - i], cols.clone());
        let det = if hl.nrows() == 0 { Scalar::one() } else { hl.det() };
        let prim = if i == 0 {
            Matrix::identity(alg.dims[0]).to_rows()
        } else {
            Matrix::from_cols(alg.dims[n - i + 1], kcols).kernel()
        };
        let sign = if i % 2 == 0 { Scalar::one() } else { Scalar::int(-1) };
        let mut g = Matrix::zeros(alg.dims[i], alg.dims[i]);
        for (r, a) in alg.basis[i].iter().enumerate() {
            for (s, q) in alg.images[i].iter().enumerate() {
                let lq = apply_power(q, &l, power);
                g.set(r, s, &diff(&lq, a).constant_term() * &sign);
            }
        }
        let pm = Matrix::from_cols(alg.dims[i], prim);
        let gram = pm.transpose().mul(&g).mul(&pm);
        let pivots = if gram.nrows() == 0 { Vec::new() } else { gram.symmetric_pivots() };
        let positive = gram.nrows() == 0 || gram.is_positive_definite();
        blocks.push(LPBlock { i, det, prim_dim: pm.ncols(), gram: gram.to_rows(), pivots, positive });
    }
    let top_value = apply_power(&alg.volume.vol, &l, n).constant_term();
    let expected = &factorial(n) * &alg.volume.polytope.volume();
    let passed = top_value == expected && blocks.iter().all(|b| !b.det.is_zero() && b.positive);
    Ok(LPReport { blocks, top_value, expected, passed })
}

#[derive(Clone, Debug, Serialize)]
pub struct BetaReport {
    pub translations_vanish: bool,
    pub empty_faces_vanish: bool,
    pub lefschetz_is_support_function: bool,
    pub dims_algebra: Vec<usize>,
    pub dims_fan: Vec<usize>,
    pub algebra_pairing: Vec<Vec<Vec<Scalar>>>,
    pub fan_pairing: Vec<Vec<Vec<Scalar>>>,
    pub pairings_equal: bool,
    pub passed: bool,
}

/// The conewise linear function equal to one at the facet normal `xi_i` and zero on the
/// other rays.
fn indicator(fan: &Fan, normals: &[Vector], i: usize) -> Result<ConewiseFunction> {
    let xi = &normals[i];
    let k = xi.iter().position(|c| !c.is_zero()).ok_or_else(|| Error::Internal("zero normal".into()))?;
    let mut values = vec![Scalar::zero(); fan.rays().len()];
    values[i] = &fan.ray(i)[k] / &xi[k];
    ConewiseFunction::from_ray_values(fan, &values)
}

fn beta(fan: &Fan, lambdas: &[ConewiseFunction], alpha: &Monomial) -> ConewiseFunction {
    alpha
        .0
        .iter()
        .enumerate()
        .fold(ConewiseFunction::constant(fan, Scalar::one()), |acc, (i, &e)| acc.mul(&lambdas[i].pow(e)))
}

fn is_zero_function(f: &ConewiseFunction) -> bool {
    f.pieces().values().all(Poly::is_zero)
}

/// Compare `A(P)` with conewise polynomials on the normal fan through `d_i -> lambda_i`.
pub fn beta_compare(alg: &PolytopeAlgebra) -> Result<BetaReport> {
    let p = &alg.volume.polytope;
    let n = p.dim();
    let normals = &alg.volume.normals;
    let (fan, support) = p.normal_fan()?;
    if !fan.is_simplicial() {
        return Err(Error::Precondition("normal fan is not simplicial".into()));
    }
    let lambdas: Vec<ConewiseFunction> = (0..alg.volume.m).map(|i| indicator(&fan, normals, i)).collect::<Result<_>>()?;
    let translations_vanish = (0..n).all(|a| {
        let f = (0..alg.volume.m).fold(ConewiseFunction::constant(&fan, Scalar::zero()), |acc, i| {
            acc.add(&lambdas[i].scale(&normals[i][a]))
        });
        f == ConewiseFunction::global(&fan, &Poly::var(n, a))
    });
    let incid = vertex_facets(p);
    let empty_faces_vanish = (2..=n).all(|size| {
        (0..alg.volume.m).combinations(size).all(|s| {
            incid.iter().any(|fs| s.iter().all(|i| fs.contains(i)))
                || is_zero_function(&beta(&fan, &lambdas, &facet_monomial(alg.volume.m, &s)))
        })
    });
    let lp = (0..alg.volume.m).fold(ConewiseFunction::constant(&fan, Scalar::zero()), |acc, i| {
        acc.add(&lambdas[i].scale(&alg.volume.base[i]))
    });
    let lefschetz_is_support_function = lp == support;
    let sheaf = MinimalSheaf::build(&fan)?;
    let dims_fan = ih(&sheaf, false)?.dims;
    let mut algebra_pairing = Vec::new();
    let mut fan_pairing = Vec::new();
    for k in 0..=n {
        algebra_pairing.push(alg.pairing(k).to_rows());
        let mut b = Matrix::zeros(alg.dims[k], alg.dims[n - k]);
        for (r, x) in alg.basis[k].iter().enumerate() {
            for (s, y) in alg.basis[n - k].iter().enumerate() {
                let f = beta(&fan, &lambdas, x).mul(&beta(&fan, &lambdas, y));
                b.set(r, s, zeta_constant(&fan, &f)?);
            }
        }
        fan_pairing.push(b.to_rows());
    }
    let pairings_equal = algebra_pairing == fan_pairing;
    let passed = translations_vanish
        && empty_faces_vanish
        && lefschetz_is_support_function
        && alg.dims == dims_fan
        && pairings_equal;
    Ok(BetaReport {
        translations_vanish,
        empty_faces_vanish,
        lefschetz_is_support_function,
        dims_algebra: alg.dims.clone(),
        dims_fan,
        algebra_pairing,
        fan_pairing,
        pairings_equal,
        passed,
    })
}
