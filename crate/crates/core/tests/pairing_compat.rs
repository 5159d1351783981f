use fanih::exactalg::Scalar;
use fanih::fan::{simplicial_refinement, star_closure, Fan, Polytope, RayChoice, Vector};
use fanih::pairing::{
    adjointness, complete_pairing, disjoint_support_values, kunneth_pairing, local_global_check, sign_flip_values,
    subdivision_invariance,
};
use fanih::sheaf::MinimalSheaf;

fn v(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| Scalar::int(x)).collect()
}

fn square_fan() -> Fan {
    Fan::new(2, vec![v(&[1, 0]), v(&[0, 1]), v(&[-1, 0]), v(&[0, -1])], vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap()
}

fn line() -> Fan {
    Fan::new(1, vec![v(&[1]), v(&[-1])], vec![vec![0], vec![1]]).unwrap()
}

fn octahedron_fan() -> Fan {
    let mut oct = Vec::new();
    for i in 0..3 {
        for s in [1, -1] {
            let mut p = vec![0; 3];
            p[i] = s;
            oct.push(v(&p));
        }
    }
    Polytope::from_vertices(oct).unwrap().normal_fan().unwrap().0
}

#[test]
fn two_subdivisions_agree() {
    let sh = MinimalSheaf::build(&octahedron_fan()).unwrap();
    let (a, b) = subdivision_invariance(&sh).unwrap();
    assert_eq!(a, b);
    assert!(a.is_nondegenerate());
}

#[test]
fn symmetric_on_complete() {
    let (_, m) = complete_pairing(&MinimalSheaf::build(&octahedron_fan()).unwrap()).unwrap();
    assert_eq!(m, m.transpose());
}

#[test]
fn adjoint_on_star() {
    let fan = square_fan();
    let big = MinimalSheaf::build(&fan).unwrap();
    let star = star_closure(&fan, fan.id_of(&[0]).unwrap()).unwrap();
    let small = MinimalSheaf::build(&star).unwrap();
    let (l, r) = adjointness(&big, &small).unwrap();
    assert_eq!(l, r);
}

#[test]
fn disjoint_stars_pair_to_zero() {
    let fan = square_fan();
    let sh = MinimalSheaf::build(&fan).unwrap();
    let s1 = fan.id_of(&[0, 1]).unwrap();
    let s2 = fan.id_of(&[2, 3]).unwrap();
    let vals = disjoint_support_values(&sh, s1, s2).unwrap();
    assert!(!vals.is_empty());
    assert!(vals.iter().all(|p| p.is_zero()));
}

#[test]
fn local_global_square_and_refined_octahedron() {
    for r in 0..4 {
        let rep = local_global_check(&square_fan(), r).unwrap();
        assert!(rep.identity_holds(), "ray {r}");
        assert!(rep.psi_bijective());
    }
    let fine = simplicial_refinement(&octahedron_fan(), RayChoice::Barycentric).unwrap().subdivision.fine;
    for r in [0, fine.rays().len() - 1] {
        let rep = local_global_check(&fine, r).unwrap();
        assert!(rep.identity_holds(), "ray {r}");
        assert!(rep.psi_bijective());
    }
}

#[test]
fn sign_flip_on_square() {
    let vals = sign_flip_values(&square_fan(), 1, 3, 2).unwrap();
    assert!(!vals.is_empty());
    for (l, r) in vals {
        assert_eq!(l, r.scale(&Scalar::int(-1)));
    }
}

#[test]
fn kunneth_tensor() {
    let k = kunneth_pairing(&line(), &line()).unwrap();
    assert!(k.holds());
    let k = kunneth_pairing(&line(), &square_fan()).unwrap();
    assert!(k.holds());
}
