use fanih::exactalg::{Poly, Scalar};
use fanih::fan::{Polytope, Vector};
use fanih::timorin::{beta_compare, lefschetz_lp_check, polytope_algebra, vertex_basis, volume_polynomial};

fn v(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| Scalar::int(x)).collect()
}

#[test]
fn square_in_h_form() {
    let p = Polytope::from_inequalities(
        vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, 0]), v(&[0, -1])],
        vec![Scalar::one(), Scalar::one(), Scalar::zero(), Scalar::zero()],
    )
    .unwrap();
    let vp = volume_polynomial(&p, 7).unwrap();
    let h = |i| Poly::var(4, i);
    assert_eq!(vp.vol, &(&h(0) + &h(2)) * &(&h(1) + &h(3)));
    let alg = polytope_algebra(&vp).unwrap();
    assert_eq!(alg.dims, vec![1, 2, 1]);
    let vb = vertex_basis(&alg, Some(v(&[1, 2])), 0).unwrap();
    assert_eq!(vb.counts, vec![1, 2, 1]);
    assert!(vb.is_basis);
    let lp = lefschetz_lp_check(&alg).unwrap();
    assert_eq!(lp.top_value, Scalar::int(2));
    assert!(lp.passed);
    assert!(beta_compare(&alg).unwrap().passed);
}

#[test]
fn cube_and_simplex() {
    let mut cube = Vec::new();
    for b in 0..8 {
        cube.push(v(&[b & 1, (b >> 1) & 1, (b >> 2) & 1]));
    }
    let alg = polytope_algebra(&volume_polynomial(&Polytope::from_vertices(cube).unwrap(), 1).unwrap()).unwrap();
    assert_eq!(alg.dims, vec![1, 3, 3, 1]);
    let lp = lefschetz_lp_check(&alg).unwrap();
    assert_eq!(lp.top_value, Scalar::int(6));
    assert!(lp.passed);
    assert!(vertex_basis(&alg, None, 3).unwrap().is_basis);
    assert!(beta_compare(&alg).unwrap().passed);
    let simplex = Polytope::from_vertices(vec![v(&[0, 0, 0]), v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
    let alg = polytope_algebra(&volume_polynomial(&simplex, 1).unwrap()).unwrap();
    assert_eq!(alg.dims, vec![1, 1, 1, 1]);
    assert!(lefschetz_lp_check(&alg).unwrap().passed);
    assert!(beta_compare(&alg).unwrap().passed);
}
