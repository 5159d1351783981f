use fanih::exactalg::Scalar;
use fanih::fan::{Fan, Polytope, Vector};
use fanih::pairing::{ih_pairing_matrix, thom_function, zeta_constant, PairingContext};
use fanih::fan::RayChoice;
use fanih::sheaf::{ih, MinimalSheaf};

fn v(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| Scalar::int(x)).collect()
}

fn quadrant() -> Fan {
    Fan::new(2, vec![v(&[1, 0]), v(&[0, 1])], vec![vec![0, 1]]).unwrap()
}

fn octahedron_normal_fan() -> Fan {
    let mut verts = Vec::new();
    for i in 0..3 {
        for s in [1, -1] {
            let mut p = vec![0; 3];
            p[i] = s;
            verts.push(v(&p));
        }
    }
    Polytope::from_vertices(verts).unwrap().normal_fan().unwrap().0
}

fn polygon_fan(m: i64) -> Fan {
    let verts: Vec<Vector> = (0..m).map(|k| v(&[k, k * k])).collect();
    Polytope::from_vertices(verts).unwrap().normal_fan().unwrap().0
}

#[test]
fn quadrant_ih() {
    let sh = MinimalSheaf::build(&quadrant()).unwrap();
    sh.verify().unwrap();
    assert_eq!(ih(&sh, false).unwrap().dims, vec![1, 0, 0]);
    assert_eq!(ih(&sh, true).unwrap().dims, vec![0, 0, 1]);
}

#[test]
fn polygon_ih() {
    for m in 3..=6 {
        let sh = MinimalSheaf::build(&polygon_fan(m)).unwrap();
        assert_eq!(ih(&sh, false).unwrap().dims, vec![1, m as usize - 2, 1], "m = {m}");
    }
}

#[test]
fn octahedron_fan_stalks_and_ih() {
    let fan = octahedron_normal_fan();
    let sh = MinimalSheaf::build(&fan).unwrap();
    sh.verify().unwrap();
    for &m in fan.maximal() {
        let mut g = sh.generators(m).to_vec();
        g.sort();
        assert_eq!(g, vec![0, 2]);
    }
    assert_eq!(ih(&sh, false).unwrap().dims, vec![1, 5, 5, 1]);
}

#[test]
fn thom_functions_have_zeta_one() {
    let fan = polygon_fan(5);
    let ctx = PairingContext::new(&MinimalSheaf::build(&fan).unwrap(), RayChoice::Barycentric).unwrap();
    let fine = ctx.alpha.fine.fan();
    for &m in fine.maximal() {
        assert_eq!(zeta_constant(fine, &thom_function(fine, m).unwrap()).unwrap(), Scalar::one());
    }
}

#[test]
fn pairing_nondegenerate_on_octahedron_fan() {
    let fan = octahedron_normal_fan();
    let sh = MinimalSheaf::build(&fan).unwrap();
    let ctx = PairingContext::new(&sh, RayChoice::Barycentric).unwrap();
    let abs = ih(&sh, false).unwrap();
    let rel = ih(&sh, true).unwrap();
    let pm = ih_pairing_matrix(&ctx, &abs, &rel).unwrap();
    assert!(pm.is_nondegenerate());
}
