//! Acceptance criteria, run in order. Each prints a single PASS/FAIL line; any failure
//! makes the binary exit nonzero. Every comparison is exact.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{anyhow, ensure, Context, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};

use fanih::exactalg::{Matrix, Scalar};
use fanih::fan::{
    product_fan, simplicial_refinement, star_closure, ConewiseFunction, Fan, Polytope, RayChoice,
};
use fanih::hvec::{generalized_h, FaceLattice};
use fanih::io::{parse_fan, parse_polytope, FanInput};
use fanih::lefschetz::{check_hl, check_hr, lefschetz_action, primitive_basis, product_function, HLCertificate, HRCertificate};
use fanih::pairing::{
    adjointness, complete_pairing, disjoint_support_values, ih_pairing_matrix, kunneth_pairing, local_global_check,
    subdivision_invariance, thom_function, zeta_constant, PairingContext, PairingMatrix,
};
use fanih::sheaf::{ih, kunneth_check, MinimalSheaf};
use fanih::timorin::{beta_compare, lefschetz_lp_check, polytope_algebra, vertex_basis, volume_polynomial};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn read(name: &str) -> Result<String> {
    std::fs::read_to_string(fixture(name)).with_context(|| format!("reading {name}"))
}

fn load_fan(name: &str) -> Result<FanInput> {
    Ok(parse_fan(&read(name)?)?)
}

fn load_polytope(name: &str) -> Result<Polytope> {
    Ok(parse_polytope(&read(name)?)?)
}

fn only_function(input: &FanInput) -> Result<&ConewiseFunction> {
    ensure!(input.functions.len() == 1, "expected exactly one function");
    Ok(input.functions.values().next().unwrap())
}

/// h-vector of the cone poset of the normal fan, read off the polytope's own face lattice.
fn h_of_normal_fan(p: &Polytope) -> Result<Vec<usize>> {
    let h = generalized_h(&FaceLattice::of_polytope(p)?.dual()?);
    h.into_iter().map(|x| usize::try_from(x).map_err(|_| anyhow!("negative h entry {x}"))).collect()
}

fn factorial(n: usize) -> Scalar {
    (1..=n as i64).fold(Scalar::one(), |acc, k| &acc * &Scalar::int(k))
}

struct Certified {
    dims: Vec<usize>,
    hl: HLCertificate,
    hr: HRCertificate,
    pairing: PairingMatrix,
    prim_top: Vec<Vec<Scalar>>,
}

fn certify(fan: &Fan, l: &ConewiseFunction) -> Result<Certified> {
    let sh = MinimalSheaf::build(fan)?;
    let abs = ih(&sh, false)?;
    let act = lefschetz_action(&sh, l, &abs)?;
    let hl = check_hl(&act);
    let ctx = PairingContext::new(&sh, RayChoice::Barycentric)?;
    let pairing = ih_pairing_matrix(&ctx, &abs, &abs)?;
    let hr = check_hr(&act, &pairing)?;
    let n = abs.n;
    let prim_top = if n % 2 == 0 { primitive_basis(&act, 0) } else { Vec::new() };
    Ok(Certified { dims: abs.dims.clone(), hl, hr, pairing, prim_top })
}

// ---------------------------------------------------------------------------------------

fn c1() -> Result<String> {
    let names = [
        "segment.json",
        "polygon-3.json",
        "polygon-4.json",
        "polygon-5.json",
        "polygon-6.json",
        "polygon-7.json",
        "unit-cube.json",
        "octahedron.json",
        "pyramid.json",
    ];
    let mut out = Vec::new();
    for name in names {
        let p = load_polytope(name)?;
        let t = Instant::now();
        let (fan, _) = p.normal_fan()?;
        let dims = ih(&MinimalSheaf::build(&fan)?, false)?.dims;
        let el = t.elapsed();
        let h = h_of_normal_fan(&p)?;
        ensure!(dims == h, "{name}: ih {dims:?} but h {h:?}");
        ensure!(el < Duration::from_secs(30), "{name}: took {el:?}");
        out.push(format!("{}={:?}", name.trim_end_matches(".json"), dims));
    }
    Ok(out.join(" "))
}

// Boundary-residue oracle: conewise polynomials on the 2-faces of a 3-cone, degree by
// degree, modulo what linear forms generate from one degree lower.

type Q = BigRational;

fn rref(mut rows: Vec<Vec<Q>>, ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Q::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..ncols {
                    let d = rows[r][k].clone() * f.clone();
                    rows[i][k] = rows[i][k].clone() - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn nullspace(rows: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let (red, pivots) = rref(rows, ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); ncols];
            v[free] = Q::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

fn cross(a: &[Q], b: &[Q]) -> Vec<Q> {
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |s, (x, y)| s + x.clone() * y.clone())
}

/// Doubled degrees of the residue of boundary sections of a 3-cone with the given rays.
fn boundary_residue_degrees(rays: &[Vec<Q>], max_deg: usize) -> Vec<u32> {
    let m = rays.len();
    let mut faces = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let nrm = cross(&rays[a], &rays[b]);
            let signs: BTreeSet<bool> =
                (0..m).filter(|&c| c != a && c != b).map(|c| dot(&nrm, &rays[c]) > Q::zero()).collect();
            let flat = (0..m).filter(|&c| c != a && c != b).any(|c| dot(&nrm, &rays[c]).is_zero());
            if signs.len() == 1 && !flat {
                faces.push((a, b));
            }
        }
    }
    // Sections of degree d: coefficient of u_a^i u_b^(d-i) on face (a, b) at f*(d+1)+i.
    let sections = |d: usize| -> Vec<Vec<Q>> {
        let nv = faces.len() * (d + 1);
        let mut cons = Vec::new();
        for c in 0..m {
            let at: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter_map(|(f, &(a, b))| {
                    if a == c {
                        Some(f * (d + 1) + d)
                    } else if b == c {
                        Some(f * (d + 1))
                    } else {
                        None
                    }
                })
                .collect();
            for w in at.windows(2) {
                let mut row = vec![Q::zero(); nv];
                row[w[0]] = Q::one();
                row[w[1]] = -Q::one();
                cons.push(row);
            }
        }
        nullspace(cons, nv)
    };
    let mut degs = Vec::new();
    let mut prev: Vec<Vec<Q>> = Vec::new();
    for d in 0..=max_deg {
        let gamma = sections(d);
        let mut images = Vec::new();
        for s in &prev {
            for k in 0..3 {
                let mut v = vec![Q::zero(); faces.len() * (d + 1)];
                for (f, &(a, b)) in faces.iter().enumerate() {
                    let (alpha, beta) = (&rays[a][k], &rays[b][k]);
                    for i in 0..d {
                        let c = &s[f * d + i];
                        v[f * (d + 1) + i + 1] += alpha.clone() * c.clone();
                        v[f * (d + 1) + i] += beta.clone() * c.clone();
                    }
                }
                images.push(v);
            }
        }
        let rank = rref(images, faces.len() * (d + 1)).1.len();
        for _ in 0..gamma.len() - rank {
            degs.push(2 * d as u32);
        }
        prev = gamma;
    }
    degs
}

fn c2() -> Result<String> {
    let text = read("cube-face-fan.json")?;
    let doc: serde_json::Value = serde_json::from_str(&text)?;
    let rays: Vec<Vec<Q>> = doc["rays"]
        .as_array()
        .context("rays")?
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|x| Q::from_str(x.as_str().unwrap()).unwrap()).collect())
        .collect();
    let cones: Vec<Vec<usize>> = serde_json::from_value(doc["cones"].clone())?;
    let fan = parse_fan(&text)?.fan;
    let sh = MinimalSheaf::build(&fan)?;
    let mut checked = 0;
    for cone in &cones {
        if cone.len() != 4 {
            continue;
        }
        let id = fan.id_of(cone).context("cone missing from the fan")?;
        let local: Vec<Vec<Q>> = cone.iter().map(|&r| rays[r].clone()).collect();
        let oracle = boundary_residue_degrees(&local, 3);
        let mut got = sh.generators(id).to_vec();
        got.sort_unstable();
        ensure!(got == oracle, "cone {cone:?}: stalk {got:?}, oracle {oracle:?}");
        ensure!(got == vec![0, 2], "cone {cone:?}: stalk {got:?}");
        checked += 1;
    }
    ensure!(checked == 6, "expected 6 square cones, found {checked}");
    let unit = |i: usize| (0..3).map(|k| if k == i { Q::one() } else { Q::zero() }).collect::<Vec<Q>>();
    let control = boundary_residue_degrees(&[unit(0), unit(1), unit(2)], 3);
    ensure!(control == vec![0], "oracle gives {control:?} on a simplicial cone");
    Ok(format!("{checked} square cones, generator degrees {{0,2}} on each"))
}

fn c3() -> Result<String> {
    let t = Instant::now();
    let input = load_fan("perturbed-cube-face-fan.json")?;
    let fan = &input.fan;
    ensure!(fan.field().radicand() == Some(2), "fixture is not over Q(sqrt2)");
    ensure!(fan.rays().iter().flatten().any(|x| x.to_rational().is_none()), "no irrational ray coordinate");
    let cert = certify(fan, only_function(&input)?)?;
    let same_lattice = h_of_normal_fan(&load_polytope("octahedron.json")?)?;
    let own_lattice: Vec<usize> = generalized_h(&FaceLattice::of_fan(fan)?).into_iter().map(|x| x as usize).collect();
    ensure!(cert.dims == own_lattice && cert.dims == same_lattice, "ih {:?}, h {own_lattice:?}", cert.dims);
    ensure!(cert.hl.passed && cert.hr.passed, "certificates failed");
    let el = t.elapsed();
    ensure!(el < Duration::from_secs(120), "took {el:?}");
    Ok(format!("ih={:?} (toric h of the same lattice), HL and HR pass", cert.dims))
}

const HL_FANS: [&str; 4] = ["square-fan.json", "orthant-fan.json", "cube-face-fan.json", "pyramid-fan.json"];

fn c4() -> Result<String> {
    let mut out = Vec::new();
    for name in HL_FANS {
        let input = load_fan(name)?;
        let c = certify(&input.fan, only_function(&input)?)?;
        ensure!(!c.hl.steps.is_empty(), "{name}: no HL steps");
        for s in &c.hl.steps {
            ensure!(s.passes(), "{name}: l^{} is {}x{} with det {:?}", s.k, s.rows, s.cols, s.det);
        }
        ensure!(c.hl.unimodal, "{name}: ih {:?} is not unimodal", c.dims);
        ensure!(c.hl.passed, "{name}: certificate rejected");
        let dets: Vec<String> = c.hl.steps.iter().map(|s| s.det.as_ref().unwrap().to_string()).collect();
        out.push(format!("{} dets [{}]", name.trim_end_matches(".json"), dets.join(",")));
    }
    Ok(out.join("; "))
}

fn c5() -> Result<String> {
    let mut out = Vec::new();
    for name in HL_FANS {
        let input = load_fan(name)?;
        let c = certify(&input.fan, only_function(&input)?)?;
        for b in &c.hr.blocks {
            ensure!(b.pivots.iter().all(Scalar::is_positive), "{name}: k={} pivots {:?}", b.k, b.pivots);
            ensure!(b.positive, "{name}: k={} not positive definite", b.k);
        }
        ensure!(c.hr.decomposition_consistent && c.hr.self_adjoint && c.hr.passed, "{name}: certificate rejected");
        if name == "square-fan.json" {
            ensure!(c.prim_top.len() == 1, "quadrant fan: Prim IH^2 has dim {}", c.prim_top.len());
            let p = Matrix::from_cols(c.dims[1], c.prim_top.clone());
            let aa = p.transpose().mul(&c.pairing.blocks[1]).mul(&p);
            let v = aa.get(0, 0);
            ensure!(v.is_negative(), "quadrant fan: (a,a) = {v}");
            out.push(format!("square (a,a)={v}"));
        }
        out.push(format!("{} ok", name.trim_end_matches(".json")));
    }
    Ok(out.join("; "))
}

fn c6() -> Result<String> {
    let simplicial = [
        "segment-fan.json",
        "polygon-3-fan.json",
        "polygon-4-fan.json",
        "polygon-5-fan.json",
        "polygon-6-fan.json",
        "polygon-7-fan.json",
        "square-fan.json",
        "cube-fan.json",
        "orthant-fan.json",
        "product-segment-segment.json",
        "product-segment-square.json",
    ];
    let mut cones = 0;
    for name in simplicial {
        let fan = load_fan(name)?.fan;
        ensure!(fan.is_simplicial(), "{name} is not simplicial");
        for &m in fan.maximal() {
            let z = zeta_constant(&fan, &thom_function(&fan, m)?)?;
            ensure!(z == Scalar::one(), "{name}: zeta(phi) = {z} on cone {:?}", fan.cone(m).rays);
            cones += 1;
        }
    }
    let mut vols = Vec::new();
    for (name, expected) in [("segment-fan.json", 2), ("square-fan.json", 2), ("cube-fan.json", 6)] {
        let input = load_fan(name)?;
        let n = input.fan.dim();
        let z = zeta_constant(&input.fan, &only_function(&input)?.pow(n as u32))?;
        ensure!(z == Scalar::int(expected), "{name}: zeta(H^{n}) = {z}");
        vols.push(format!("{}:{z}", name.trim_end_matches("-fan.json")));
    }
    for name in ["simplex-2.json", "simplex-3.json"] {
        let p = load_polytope(name)?;
        let n = p.dim();
        let (fan, h) = p.normal_fan()?;
        let z = zeta_constant(&fan, &h.pow(n as u32))?;
        let expected = &factorial(n) * &p.volume();
        ensure!(z == expected && z == Scalar::one(), "{name}: zeta(H^{n}) = {z}, n!Vol = {expected}");
        vols.push(format!("{}:{z}", name.trim_end_matches(".json")));
    }
    Ok(format!("zeta(phi)=1 on {cones} cones; zeta(H^n) {}", vols.join(" ")))
}

fn ray_set(fan: &Fan) -> BTreeSet<Vec<Scalar>> {
    fan.rays().iter().cloned().collect()
}

fn c7() -> Result<String> {
    let cube = load_fan("cube-face-fan.json")?.fan;
    let sh = MinimalSheaf::build(&cube)?;
    let f1 = simplicial_refinement(&cube, RayChoice::Barycentric)?.subdivision.fine;
    let f2 = simplicial_refinement(&cube, RayChoice::Weighted)?.subdivision.fine;
    ensure!(ray_set(&f1) != ray_set(&f2), "the two refinements coincide");
    let (a, b) = subdivision_invariance(&sh)?;
    ensure!(a == b, "pairings differ between refinements");
    ensure!(a.is_nondegenerate(), "pairing is degenerate");

    let square = load_fan("square-fan.json")?.fan;
    let mut stars = 0;
    for fan in [&square, &cube] {
        let big = MinimalSheaf::build(fan)?;
        let rays: Vec<usize> = if fan.dim() == 2 { (0..fan.rays().len()).collect() } else { vec![0] };
        for r in rays {
            let star = star_closure(fan, fan.id_of(&[r]).context("ray cone")?)?;
            let (l, rr) = adjointness(&big, &MinimalSheaf::build(&star)?)?;
            ensure!(l == rr, "adjointness fails on the star of ray {r}");
            stars += 1;
        }
    }

    for name in ["square-fan.json", "cube-face-fan.json", "pyramid-fan.json", "perturbed-cube-face-fan.json"] {
        let (_, m) = complete_pairing(&MinimalSheaf::build(&load_fan(name)?.fan)?)?;
        ensure!(m == m.transpose(), "{name}: pairing is not symmetric");
    }

    let mut vanishing = 0;
    for fan in [&square, &cube] {
        let sh = MinimalSheaf::build(fan)?;
        let max = fan.maximal();
        let (s1, s2) = max
            .iter()
            .flat_map(|&x| max.iter().map(move |&y| (x, y)))
            .find(|&(x, y)| fan.cone(x).rays.iter().all(|r| !fan.cone(y).rays.contains(r)))
            .context("no disjoint pair of maximal cones")?;
        let vals = disjoint_support_values(&sh, s1, s2)?;
        ensure!(!vals.is_empty() && vals.iter().all(|p| p.is_zero()), "nonzero pairing of disjoint supports");
        vanishing += vals.len();
    }
    Ok(format!(
        "refinements with {} and {} rays agree; adjoint on {stars} stars; 4 symmetric; {vanishing} disjoint pairings vanish",
        f1.rays().len(),
        f2.rays().len()
    ))
}

fn c8() -> Result<String> {
    let square = load_fan("square-fan.json")?.fan;
    let fine = simplicial_refinement(&load_fan("cube-face-fan.json")?.fan, RayChoice::Barycentric)?.subdivision.fine;
    let mut entries = 0;
    let mut count = 0;
    for fan in [&square, &fine] {
        for r in 0..fan.rays().len() {
            let rep = local_global_check(fan, r)?;
            ensure!(rep.identity_holds(), "identity fails at ray {r} of a {}-dim fan", fan.dim());
            ensure!(rep.psi_bijective(), "psi is not bijective at ray {r}");
            entries += rep.lhs.iter().map(|m| m.nrows() * m.ncols()).sum::<usize>();
            count += 1;
        }
    }
    Ok(format!("{count} rays, {entries} entries equal, psi bijective"))
}

fn c9() -> Result<String> {
    let line = load_fan("segment-fan.json")?;
    let quad = load_fan("square-fan.json")?;
    let mut out = Vec::new();
    for (a, b, expected) in [(&line, &line, vec![1, 2, 1]), (&line, &quad, vec![1, 3, 3, 1])] {
        let k = kunneth_check(&a.fan, &b.fan)?;
        ensure!(k.holds && k.ih_product == expected, "ih {:?} vs {:?}", k.ih_product, k.ih_convolution);
        let p = kunneth_pairing(&a.fan, &b.fan)?;
        ensure!(p.holds(), "pairing is not the tensor product");
        let prod = product_fan(&a.fan, &b.fan)?;
        let l = product_function(&a.fan, &b.fan, only_function(a)?, only_function(b)?);
        let c = certify(&prod, &l)?;
        ensure!(c.dims == expected, "product ih {:?}", c.dims);
        ensure!(c.hl.passed && c.hr.passed, "HL/HR fail on the product");
        out.push(format!("{:?}", k.ih_product));
    }
    Ok(format!("products {}; tensor pairing; HL/HR with l1+l2", out.join(" ")))
}

fn c10() -> Result<String> {
    let mut out = Vec::new();
    for (name, top) in [
        ("segment.json", 1),
        ("unit-square.json", 2),
        ("unit-cube.json", 6),
        ("simplex-2.json", 1),
        ("simplex-3.json", 1),
    ] {
        let p = load_polytope(name)?;
        let vol = volume_polynomial(&p, 0)?;
        vol.verify()?;
        let alg = polytope_algebra(&vol)?;
        let h = h_of_normal_fan(&p)?;
        ensure!(alg.dims == h, "{name}: dim A = {:?}, h = {h:?}", alg.dims);
        let vb = vertex_basis(&alg, None, 0)?;
        ensure!(vb.counts == alg.dims && vb.is_basis, "{name}: vertex counts {:?}", vb.counts);
        let lp = lefschetz_lp_check(&alg)?;
        let expected = &factorial(p.dim()) * &p.volume();
        ensure!(lp.top_value == Scalar::int(top) && lp.top_value == expected, "{name}: L^n Vol = {}", lp.top_value);
        ensure!(lp.passed, "{name}: Lefschetz check failed");
        let beta = beta_compare(&alg)?;
        ensure!(beta.algebra_pairing == beta.fan_pairing && beta.pairings_equal, "{name}: pairings differ");
        ensure!(beta.passed, "{name}: comparison with the fan failed");
        out.push(format!("{}:{:?}/{}", name.trim_end_matches(".json"), alg.dims, lp.top_value));
    }
    Ok(out.join(" "))
}

fn c11(started: Instant) -> Result<String> {
    let f = |n: &str| fixture(n).to_string_lossy().into_owned();
    let runs: Vec<Vec<String>> = vec![
        vec!["ih".into(), f("cube-face-fan.json")],
        vec!["hvector".into(), "--polytope".into(), f("octahedron.json")],
        vec!["check-hl".into(), f("pyramid-fan.json"), "--lefschetz".into(), "H".into()],
        vec!["check-hr".into(), f("perturbed-cube-face-fan.json"), "--lefschetz".into(), "H".into()],
        vec!["zeta".into(), f("cube-face-fan.json"), "--function".into(), "Hoctahedron".into(), "--power".into(), "3".into()],
        vec!["pairing".into(), f("cube-face-fan.json")],
        vec!["subdivide".into(), f("cube-face-fan.json"), "--function".into(), "Hoctahedron".into()],
        vec!["volume-poly".into(), "--polytope".into(), f("unit-cube.json"), "--seed".into(), "5".into()],
        vec!["polytope-algebra".into(), "--polytope".into(), f("unit-square.json")],
        vec!["kunneth".into(), f("segment-fan.json"), f("square-fan.json"), "--lefschetz".into(), "H,Hsquare".into()],
        vec!["local-global".into(), f("square-fan.json")],
    ];
    let mut saved = None;
    for args in &runs {
        let argv = || std::iter::once("fanih".to_string()).chain(args.iter().cloned());
        let first = fanih::cli::run(argv());
        let second = fanih::cli::run(argv());
        ensure!(first.0 == 0, "{}: exit {} ({})", args[0], first.0, first.2.trim());
        ensure!(first == second, "{}: reports differ between runs", args[0]);
        if args[0] == "check-hr" {
            saved = Some(first.1);
        }
    }
    let path = std::env::temp_dir().join(format!("fanih-acceptance-{}.json", std::process::id()));
    std::fs::write(&path, saved.context("no check-hr report")?)?;
    let verified = fanih::cli::run(["fanih".to_string(), "verify".into(), path.to_string_lossy().into_owned()]);
    let _ = std::fs::remove_file(&path);
    ensure!(verified.0 == 0, "stored report does not verify: {}", verified.2.trim());
    let total = started.elapsed();
    ensure!(total < Duration::from_secs(600), "suite took {total:?}");
    Ok(format!("{} commands byte-identical across runs; suite {:.1}s", runs.len(), total.as_secs_f64()))
}

type Check = Box<dyn Fn() -> Result<String>>;

fn main() {
    let started = Instant::now();
    let criteria: Vec<(&str, Check)> = vec![
        ("ih equals the toric h-vector", Box::new(c1)),
        ("square-cone stalks match the boundary residue", Box::new(c2)),
        ("fan over Q(sqrt2)", Box::new(c3)),
        ("Hard Lefschetz certificates", Box::new(c4)),
        ("Hodge-Riemann certificates", Box::new(c5)),
        ("zeta identities", Box::new(c6)),
        ("pairing compatibilities", Box::new(c7)),
        ("local-global identity", Box::new(c8)),
        ("Kunneth", Box::new(c9)),
        ("polytope algebra", Box::new(c10)),
        ("determinism", Box::new(move || c11(started))),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err(anyhow!("panicked")));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS criterion {} ({title}): {detail} [{secs:.1}s]", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {} ({title}): {e:#} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
