use fanih::exactalg::Scalar;
use fanih::fan::{Polytope, RayChoice, Vector};
use fanih::lefschetz::{check_hl, check_hr, lefschetz_action, primitive_basis};
use fanih::pairing::{ih_pairing_matrix, PairingContext};
use fanih::sheaf::{ih, MinimalSheaf};

fn v(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| Scalar::int(x)).collect()
}

fn run(verts: Vec<Vector>) -> (Vec<usize>, bool, bool, Vec<usize>) {
    let (fan, h) = Polytope::from_vertices(verts).unwrap().normal_fan().unwrap();
    let sh = MinimalSheaf::build(&fan).unwrap();
    let abs = ih(&sh, false).unwrap();
    let act = lefschetz_action(&sh, &h, &abs).unwrap();
    let hl = check_hl(&act);
    let ctx = PairingContext::new(&sh, RayChoice::Barycentric).unwrap();
    let pm = ih_pairing_matrix(&ctx, &abs, &abs).unwrap();
    let hr = check_hr(&act, &pm).unwrap();
    let prim = hr.blocks.iter().map(|b| b.prim_dim).collect();
    (abs.dims.clone(), hl.passed, hr.passed, prim)
}

#[test]
fn square() {
    let (d, hl, hr, prim) = run(vec![v(&[0, 0]), v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]);
    assert_eq!(d, vec![1, 2, 1]);
    assert!(hl && hr);
    assert_eq!(prim, vec![1, 1]);
}

#[test]
fn octahedron_and_pyramid() {
    let mut oct = Vec::new();
    for i in 0..3 {
        for s in [1, -1] {
            let mut p = vec![0; 3];
            p[i] = s;
            oct.push(v(&p));
        }
    }
    let (d, hl, hr, _) = run(oct);
    assert_eq!(d, vec![1, 5, 5, 1]);
    assert!(hl && hr);
    let pyr = vec![v(&[1, 1, 0]), v(&[1, -1, 0]), v(&[-1, 1, 0]), v(&[-1, -1, 0]), v(&[0, 0, 1])];
    let (d, hl, hr, _) = run(pyr);
    assert_eq!(d, vec![1, 2, 2, 1]);
    assert!(hl && hr);
}

#[test]
fn segment_primitive() {
    let (fan, h) = Polytope::from_vertices(vec![v(&[-1]), v(&[1])]).unwrap().normal_fan().unwrap();
    let sh = MinimalSheaf::build(&fan).unwrap();
    let abs = ih(&sh, false).unwrap();
    let act = lefschetz_action(&sh, &h, &abs).unwrap();
    assert!(!act.matrices[0].get(0, 0).is_zero());
    assert_eq!(primitive_basis(&act, 1).len(), 1);
}
