//! Command surface: each subcommand reads fixture files, runs one computation and returns a
//! deterministic JSON report.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Scalar};
use crate::fan::{desingularize, simplicial_refinement, ConewiseFunction, Fan, RayChoice};
use crate::hvec::{compare_ih, generalized_h, simplicial_h, FaceLattice};
use crate::io::{fan_to_file, parse_fan, parse_polytope, FanInput, MatrixDoc};
use crate::lefschetz::{check_hl, check_hr, lefschetz_action, product_function, LefschetzAction};
use crate::pairing::{
    brion_zeta, ih_pairing_matrix, kunneth_pairing, local_global_check, sign_flip_values, PairingContext,
};
use crate::sheaf::{ih, kunneth_check, quasiconvex_certificate, MinimalSheaf};
use crate::timorin::{beta_compare, lefschetz_lp_check, polytope_algebra, vertex_basis, volume_polynomial};

#[derive(Parser, Debug)]
#[command(name = "fanih", version, about = "Exact intersection cohomology of fans")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// IH dimensions, compared with the generalized h-vector when the fan is complete.
    Ih {
        fan: PathBuf,
        #[arg(long)]
        relative: bool,
    },
    /// Generalized h-vector of a complete fan's cone poset or of a polytope.
    Hvector {
        fan: Option<PathBuf>,
        #[arg(long)]
        polytope: Option<PathBuf>,
    },
    /// Hard Lefschetz certificate for a named strictly convex function.
    CheckHl {
        fan: PathBuf,
        #[arg(long)]
        lefschetz: String,
    },
    /// Hodge-Riemann certificate for a named strictly convex function.
    CheckHr {
        fan: PathBuf,
        #[arg(long)]
        lefschetz: String,
    },
    /// Brion functional of a power of a named function.
    Zeta {
        fan: PathBuf,
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 1)]
        power: u32,
    },
    /// Pairing matrices between absolute and relative IH.
    Pairing {
        fan: PathBuf,
        #[arg(long)]
        degree_cutoff: Option<u32>,
    },
    /// Simplicial subdivision, keeping a named function strictly convex when given.
    Subdivide {
        fan: PathBuf,
        #[arg(long)]
        function: Option<String>,
        #[arg(long)]
        degree_cutoff: Option<u32>,
    },
    /// Volume polynomial of a simple polytope.
    VolumePoly {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Polytope algebra, vertex basis, Lefschetz checks and the comparison with the fan.
    PolytopeAlgebra {
        #[arg(long)]
        polytope: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// IH of a product against the factors; with function names, HL/HR for `l1 + l2`.
    Kunneth {
        fan: PathBuf,
        other: PathBuf,
        /// `NAME` in both files, or `NAME1,NAME2`.
        #[arg(long)]
        lefschetz: Option<String>,
    },
    /// Local-global identity at every ray of a complete simplicial fan.
    LocalGlobal {
        fan: PathBuf,
        #[arg(long)]
        degree_cutoff: Option<u32>,
    },
    /// Re-check the arithmetic stored in a report.
    Verify { report: PathBuf },
}

/// A report and whether its checks passed.
#[derive(Clone, Debug)]
pub struct Report {
    pub doc: Value,
    pub passed: bool,
}

impl Report {
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.doc).expect("json");
        s.push('\n');
        s
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn name_of(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn load_fan(path: &Path) -> Result<FanInput> {
    parse_fan(&read(path)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn matrices(ms: &[Matrix]) -> Value {
    to_value(&ms.iter().map(MatrixDoc::of).collect::<Vec<_>>())
}

fn header(command: &str, inputs: &[&Path]) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("inputs".into(), json!(inputs.iter().map(|p| name_of(p)).collect::<Vec<_>>()));
    m.insert("tool".into(), json!({ "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") }));
    m
}

fn finish(mut m: serde_json::Map<String, Value>, passed: bool) -> Report {
    m.insert("passed".into(), json!(passed));
    Report { doc: Value::Object(m), passed }
}

fn stalk_degrees(sheaf: &MinimalSheaf) -> Value {
    let fan = sheaf.fan();
    let m: BTreeMap<String, Vec<u32>> = fan
        .maximal()
        .iter()
        .map(|&c| (format!("{:?}", fan.cone(c).rays), sheaf.generators(c).to_vec()))
        .collect();
    to_value(&m)
}

fn action_for(input: &FanInput, name: &str) -> Result<(MinimalSheaf, crate::sheaf::IHSpace, LefschetzAction)> {
    let sheaf = MinimalSheaf::build(&input.fan)?;
    let abs = ih(&sheaf, false)?;
    let act = lefschetz_action(&sheaf, input.function(name)?, &abs)?;
    Ok((sheaf, abs, act))
}

fn hl_hr_report(m: &mut serde_json::Map<String, Value>, sheaf: &MinimalSheaf, abs: &crate::sheaf::IHSpace, act: &LefschetzAction, hr: bool) -> Result<bool> {
    let hl = check_hl(act);
    m.insert("ih".into(), json!(abs.dims));
    m.insert("matrices".into(), matrices(&act.matrices));
    m.insert("hl".into(), to_value(&hl));
    if !hr {
        return Ok(hl.passed);
    }
    let ctx = PairingContext::new(sheaf, RayChoice::Barycentric)?;
    let pm = ih_pairing_matrix(&ctx, abs, abs)?;
    let cert = check_hr(act, &pm)?;
    m.insert("pairing_blocks".into(), matrices(&pm.blocks));
    m.insert("hr".into(), to_value(&cert));
    Ok(hl.passed && cert.passed)
}

/// Pull a function on the coarse fan back to a subdivision.
fn pull_back(sub: &crate::fan::Subdivision, f: &ConewiseFunction) -> ConewiseFunction {
    let mut pieces = BTreeMap::new();
    for &m in sub.coarse.maximal() {
        let p = f.on(&sub.coarse, m).clone();
        for piece in sub.pieces_of(m) {
            pieces.insert(sub.fine.cone(piece).rays.clone(), p.clone());
        }
    }
    ConewiseFunction::new(sub.fine.dim(), pieces)
}

pub fn execute(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Ih { fan, relative } => {
            let input = load_fan(fan)?;
            let sheaf = MinimalSheaf::build(&input.fan)?;
            sheaf.verify()?;
            let mut m = header("ih", &[fan]);
            let cert = quasiconvex_certificate(&sheaf)?;
            m.insert("certificate".into(), json!({ "accepted": cert.accepted, "reason": cert.reason }));
            let space = ih(&sheaf, *relative)?;
            m.insert("relative".into(), json!(relative));
            m.insert("ih".into(), json!(space.dims));
            m.insert("stalk_degrees".into(), stalk_degrees(&sheaf));
            let mut passed = true;
            if input.fan.is_complete() && !relative {
                let cmp = compare_ih(&input.fan, &space.dims)?;
                passed = cmp.matches;
                m.insert("oracle".into(), to_value(&cmp));
            }
            Ok(finish(m, passed))
        }
        Command::Hvector { fan, polytope } => {
            let mut m;
            let passed;
            match (fan, polytope) {
                (Some(f), None) => {
                    let input = load_fan(f)?;
                    let lat = FaceLattice::of_fan(&input.fan)?;
                    let h = generalized_h(&lat);
                    m = header("hvector", &[f]);
                    passed = h.iter().eq(h.iter().rev());
                    m.insert("h".into(), json!(h));
                    m.insert("f".into(), json!(lat.f_vector()));
                }
                (None, Some(p)) => {
                    let poly = parse_polytope(&read(p)?)?;
                    let lat = FaceLattice::of_polytope(&poly)?;
                    let dual = lat.dual()?;
                    let h = generalized_h(&lat);
                    let hd = generalized_h(&dual);
                    m = header("hvector", &[p]);
                    let mut ok = h.iter().eq(h.iter().rev()) && hd.iter().eq(hd.iter().rev());
                    if poly.is_simple() {
                        // the polar of a simple polytope is simplicial
                        let mut f = vec![1];
                        f.extend(dual.f_vector().iter().take(poly.dim()));
                        let sh = simplicial_h(&f);
                        ok &= sh == hd;
                        m.insert("simplicial_h_of_polar".into(), json!(sh));
                    }
                    passed = ok;
                    m.insert("h".into(), json!(h));
                    m.insert("h_normal_fan".into(), json!(hd));
                    m.insert("f".into(), json!(lat.f_vector()));
                }
                _ => return Err(Error::Parse("give either a fan file or --polytope".into())),
            }
            Ok(finish(m, passed))
        }
        Command::CheckHl { fan, lefschetz } => {
            let input = load_fan(fan)?;
            let (sheaf, abs, act) = action_for(&input, lefschetz)?;
            let mut m = header("check-hl", &[fan]);
            m.insert("lefschetz".into(), json!(lefschetz));
            let passed = hl_hr_report(&mut m, &sheaf, &abs, &act, false)?;
            Ok(finish(m, passed))
        }
        Command::CheckHr { fan, lefschetz } => {
            let input = load_fan(fan)?;
            let (sheaf, abs, act) = action_for(&input, lefschetz)?;
            let mut m = header("check-hr", &[fan]);
            m.insert("lefschetz".into(), json!(lefschetz));
            let passed = hl_hr_report(&mut m, &sheaf, &abs, &act, true)?;
            Ok(finish(m, passed))
        }
        Command::Zeta { fan, function, power } => {
            let input = load_fan(fan)?;
            let f = input.function(function)?.pow(*power);
            let value = if input.fan.is_simplicial() {
                brion_zeta(&input.fan, &f)?
            } else {
                let sub = simplicial_refinement(&input.fan, RayChoice::Barycentric)?.subdivision;
                brion_zeta(&sub.fine, &pull_back(&sub, &f))?
            };
            let mut m = header("zeta", &[fan]);
            m.insert("function".into(), json!(function));
            m.insert("power".into(), json!(power));
            m.insert("value".into(), json!(value.to_string()));
            Ok(finish(m, true))
        }
        Command::Pairing { fan, degree_cutoff } => {
            let input = load_fan(fan)?;
            let sheaf = MinimalSheaf::build(&input.fan)?;
            let abs = ih(&sheaf, false)?;
            let rel = ih(&sheaf, true)?;
            let ctx = PairingContext::new(&sheaf, RayChoice::Barycentric)?;
            ctx.alpha.verify(degree_cutoff.unwrap_or(2 * input.fan.dim() as u32))?;
            let pm = ih_pairing_matrix(&ctx, &abs, &rel)?;
            let mut m = header("pairing", &[fan]);
            m.insert("ih".into(), json!(abs.dims));
            m.insert("ih_relative".into(), json!(rel.dims));
            m.insert("blocks".into(), matrices(&pm.blocks));
            let dets: Vec<Scalar> = pm.blocks.iter().map(|b| if b.is_square() && b.nrows() > 0 { b.det() } else { Scalar::zero() }).collect();
            m.insert("determinants".into(), to_value(&dets));
            let passed = pm.is_nondegenerate();
            m.insert("nondegenerate".into(), json!(passed));
            Ok(finish(m, passed))
        }
        Command::Subdivide { fan, function, degree_cutoff } => {
            let input = load_fan(fan)?;
            let des = match function {
                Some(name) => desingularize(&input.fan, input.function(name)?)?,
                None => simplicial_refinement(&input.fan, RayChoice::Barycentric)?,
            };
            let fine = &des.subdivision.fine;
            let sheaf = MinimalSheaf::build(&input.fan)?;
            let ctx = PairingContext::with_subdivision(&sheaf, des.subdivision.clone())?;
            ctx.alpha.verify(degree_cutoff.unwrap_or(2 * input.fan.dim() as u32))?;
            let mut fns = BTreeMap::new();
            if let (Some(name), Some(f)) = (function, &des.function) {
                fns.insert(name.clone(), f.clone());
            }
            let steps: Vec<Value> = des
                .steps
                .iter()
                .map(|s| json!({ "cone": s.cone, "ray": to_value(&s.ray), "epsilon": s.epsilon.as_ref().map(|e| e.to_string()) }))
                .collect();
            let mut m = header("subdivide", &[fan]);
            m.insert("steps".into(), json!(steps));
            m.insert("fan".into(), to_value(&fan_to_file(fine, &fns)));
            Ok(finish(m, fine.is_simplicial()))
        }
        Command::VolumePoly { polytope, seed } => {
            let p = parse_polytope(&read(polytope)?)?;
            let v = volume_polynomial(&p, *seed)?;
            let mut m = header("volume-poly", &[polytope]);
            m.insert("seed".into(), json!(seed));
            m.insert("support_numbers".into(), to_value(&v.base));
            m.insert("volume".into(), json!(p.volume().to_string()));
            m.insert("polynomial".into(), json!(v.vol.to_string()));
            Ok(finish(m, true))
        }
        Command::PolytopeAlgebra { polytope, seed } => {
            let p = parse_polytope(&read(polytope)?)?;
            let v = volume_polynomial(&p, *seed)?;
            let alg = polytope_algebra(&v)?;
            let h = generalized_h(&FaceLattice::of_polytope(&p)?.dual()?);
            let vb = vertex_basis(&alg, None, *seed)?;
            let lp = lefschetz_lp_check(&alg)?;
            let beta = beta_compare(&alg)?;
            let dims_match = alg.dims.iter().map(|&d| d as i64).eq(h.iter().copied());
            let mut m = header("polytope-algebra", &[polytope]);
            m.insert("seed".into(), json!(seed));
            m.insert("dims".into(), json!(alg.dims));
            m.insert("h".into(), json!(h));
            m.insert("relations_checked".into(), json!(alg.relations_checked));
            // Dimension bookkeeping only; generation of the relation ideal is not proved.
            let gen = if dims_match { "consistent with" } else { "inconsistent with" };
            m.insert("ideal_generation".into(), json!(format!("{gen} the face-ring relations")));
            m.insert("vertex_basis".into(), to_value(&vb));
            m.insert("lefschetz".into(), to_value(&lp));
            m.insert("beta".into(), to_value(&beta));
            let passed = dims_match && vb.is_basis && lp.passed && beta.passed;
            Ok(finish(m, passed))
        }
        Command::Kunneth { fan, other, lefschetz } => {
            let a = load_fan(fan)?;
            let b = load_fan(other)?;
            let rep = kunneth_check(&a.fan, &b.fan)?;
            let mut m = header("kunneth", &[fan, other]);
            m.insert("ih_product".into(), json!(rep.ih_product));
            m.insert("ih_convolution".into(), json!(rep.ih_convolution));
            m.insert("relative_product".into(), json!(rep.rel_product));
            m.insert("relative_convolution".into(), json!(rep.rel_convolution));
            let mut passed = rep.holds;
            let simple = |f: &Fan| f.is_complete() && f.is_simplicial();
            if simple(&a.fan) && simple(&b.fan) {
                let kp = kunneth_pairing(&a.fan, &b.fan)?;
                m.insert("pairing_product".into(), to_value(&MatrixDoc::of(&kp.product_pairing)));
                m.insert("pairing_binomial".into(), json!(kp.binomial));
                m.insert("pairing_tensor".into(), json!(kp.holds()));
                passed &= kp.holds();
            }
            if let Some(name) = lefschetz {
                let prod = crate::fan::product_fan(&a.fan, &b.fan)?;
                let (na, nb) = name.split_once(',').unwrap_or((name, name));
                let l = product_function(&a.fan, &b.fan, a.function(na)?, b.function(nb)?);
                let sheaf = MinimalSheaf::build(&prod)?;
                let abs = ih(&sheaf, false)?;
                let act = lefschetz_action(&sheaf, &l, &abs)?;
                let mut sub = serde_json::Map::new();
                passed &= hl_hr_report(&mut sub, &sheaf, &abs, &act, true)?;
                m.insert("product_lefschetz".into(), Value::Object(sub));
            }
            Ok(finish(m, passed))
        }
        Command::LocalGlobal { fan, degree_cutoff } => {
            let input = load_fan(fan)?;
            let f = &input.fan;
            let mut m = header("local-global", &[fan]);
            let mut rays = Vec::new();
            let mut passed = true;
            for r in 0..f.rays().len() {
                let rep = local_global_check(f, r)?;
                let ok = rep.identity_holds() && rep.psi_bijective();
                passed &= ok;
                rays.push(json!({
                    "ray": r,
                    "lhs": matrices(&rep.lhs),
                    "rhs": matrices(&rep.rhs),
                    "identity": rep.identity_holds(),
                    "psi_bijective": rep.psi_bijective(),
                }));
            }
            m.insert("rays".into(), json!(rays));
            let mut flips = Vec::new();
            for r in 0..f.rays().len() {
                let neg: Vec<Scalar> = f.ray(r).iter().map(|x| -x).collect();
                let Some(s) = f.rays().iter().position(|x| *x == neg) else { continue };
                if s < r {
                    continue;
                }
                let vals = sign_flip_values(f, r, s, degree_cutoff.unwrap_or(2))?;
                let ok = vals.iter().all(|(l, rr)| *l == rr.scale(&Scalar::int(-1)));
                passed &= ok;
                flips.push(json!({ "rays": [r, s], "pairs": vals.len(), "opposite_sign": ok }));
            }
            m.insert("sign_flips".into(), json!(flips));
            Ok(finish(m, passed))
        }
        Command::Verify { report } => {
            let doc: Value = serde_json::from_str(&read(report)?).map_err(|e| Error::Parse(e.to_string()))?;
            let checked = verify_report(&doc)?;
            let mut m = header("verify", &[report]);
            m.insert("checked".into(), json!(checked));
            Ok(finish(m, true))
        }
    }
}

fn field<'a>(doc: &'a Value, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| Error::Parse(format!("report lacks '{key}'")))
}

fn parse_json<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
}

fn matrices_of(v: &Value) -> Result<Vec<Matrix>> {
    parse_json::<Vec<MatrixDoc>>(v)?.iter().map(MatrixDoc::matrix).collect()
}

fn power(ms: &[Matrix], dims: &[usize], j: usize, k: usize) -> Matrix {
    let mut m = Matrix::identity(dims[j]);
    for i in j..j + k {
        m = match ms.get(i) {
            Some(s) => s.mul(&m),
            None => Matrix::zeros(0, m.ncols()),
        };
    }
    m
}

fn falsified(what: &str) -> Error {
    Error::Falsified(format!("stored {what} does not match its recomputation"))
}

/// Recompute the certificate arithmetic stored in a report. Returns what was checked.
pub fn verify_report(doc: &Value) -> Result<Vec<String>> {
    let command = field(doc, "command")?.as_str().unwrap_or_default().to_string();
    let mut checked = Vec::new();
    let lef = |doc: &Value, checked: &mut Vec<String>| -> Result<(Vec<Matrix>, Vec<usize>)> {
        let dims: Vec<usize> = parse_json(field(doc, "ih")?)?;
        let ms = matrices_of(field(doc, "matrices")?)?;
        let n = dims.len() - 1;
        let hl = field(doc, "hl")?;
        let steps = field(hl, "steps")?.as_array().cloned().unwrap_or_default();
        for s in steps {
            let k: usize = parse_json(field(&s, "k")?)?;
            let p = power(&ms, &dims, (n - k) / 2, k);
            let det: Option<Scalar> = parse_json(field(&s, "det")?)?;
            let expect = p.is_square().then(|| if p.nrows() == 0 { Scalar::one() } else { p.det() });
            if det != expect {
                return Err(falsified("Lefschetz determinant"));
            }
            if parse_json::<bool>(field(hl, "passed")?)? && !det.as_ref().is_some_and(|d| !d.is_zero()) {
                return Err(falsified("Lefschetz verdict"));
            }
            checked.push(format!("hl k={k}"));
        }
        Ok((ms, dims))
    };
    match command.as_str() {
        "check-hl" => {
            lef(doc, &mut checked)?;
        }
        "check-hr" => {
            let (ms, dims) = lef(doc, &mut checked)?;
            let n = dims.len() - 1;
            let blocks = matrices_of(field(doc, "pairing_blocks")?)?;
            let hr = field(doc, "hr")?;
            for b in field(hr, "blocks")?.as_array().cloned().unwrap_or_default() {
                let k: usize = parse_json(field(&b, "k")?)?;
                let j = (n - k) / 2;
                let basis: Vec<Vec<Scalar>> = parse_json(field(&b, "basis")?)?;
                if !power(&ms, &dims, j, k + 1).mul(&Matrix::from_cols(dims[j], basis.clone())).to_rows().iter().flatten().all(Scalar::is_zero) {
                    return Err(falsified("primitive basis"));
                }
                let p = Matrix::from_cols(dims[j], basis);
                let sign = if j.is_multiple_of(2) { Scalar::one() } else { Scalar::int(-1) };
                let gram = p.transpose().mul(&blocks[j]).mul(&power(&ms, &dims, j, k)).mul(&p).scale(&sign);
                let stored: Vec<Vec<Scalar>> = parse_json(field(&b, "gram")?)?;
                if gram.to_rows() != stored && !(gram.nrows() == 0 && stored.is_empty()) {
                    return Err(falsified("Gram matrix"));
                }
                let pivots: Vec<Scalar> = parse_json(field(&b, "pivots")?)?;
                let expect = if gram.nrows() == 0 { Vec::new() } else { gram.symmetric_pivots() };
                if pivots != expect {
                    return Err(falsified("pivot sequence"));
                }
                let positive: bool = parse_json(field(&b, "positive")?)?;
                if positive != (gram.nrows() == 0 || gram.is_positive_definite()) {
                    return Err(falsified("positivity verdict"));
                }
                checked.push(format!("hr k={k}"));
            }
        }
        "pairing" => {
            let blocks = matrices_of(field(doc, "blocks")?)?;
            let dets: Vec<Scalar> = parse_json(field(doc, "determinants")?)?;
            for (j, (b, d)) in blocks.iter().zip(&dets).enumerate() {
                let e = if b.is_square() && b.nrows() > 0 { b.det() } else { Scalar::zero() };
                if e != *d {
                    return Err(falsified("pairing determinant"));
                }
                checked.push(format!("pairing block {j}"));
            }
        }
        "ih" => {
            if let Some(o) = doc.get("oracle") {
                let ihv: Vec<i64> = parse_json(field(o, "ih")?)?;
                let h: Vec<i64> = parse_json(field(o, "h")?)?;
                if parse_json::<bool>(field(o, "matches")?)? != (ihv == h) {
                    return Err(falsified("oracle verdict"));
                }
                checked.push("oracle".into());
            }
        }
        other => return Err(Error::Precondition(format!("no stored certificate to verify for '{other}'"))),
    }
    Ok(checked)
}

/// Run with command line arguments; returns the exit status and what to print on stdout and
/// stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => return (2, String::new(), e.to_string()),
        Err(e) => return (0, e.to_string(), String::new()),
    };
    match execute(&cli.command) {
        Ok(r) => (if r.passed { 0 } else { 4 }, r.render(), String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("{e}\n")),
    }
}
