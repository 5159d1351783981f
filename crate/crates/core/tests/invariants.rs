use std::collections::BTreeSet;

use proptest::prelude::*;

use fanih::exactalg::{Matrix, Poly, Scalar};
use fanih::fan::{ConewiseFunction, Polytope, RayChoice, Vector};
use fanih::hvec::{generalized_h, FaceLattice};
use fanih::lefschetz::{check_hl, check_hr, lefschetz_action};
use fanih::pairing::{complete_pairing, ih_pairing_matrix, thom_function, zeta_constant, PairingContext};
use fanih::sheaf::{ih, MinimalSheaf};
use fanih::timorin::{lefschetz_lp_check, polytope_algebra, vertex_basis, volume_polynomial};

fn v(xs: &[i64]) -> Vector {
    xs.iter().map(|&x| Scalar::int(x)).collect()
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..20, 1i64..8, -20i64..20, 1i64..8).prop_map(|(a, b, c, d)| {
        &Scalar::ratio(a, b) + &(&Scalar::ratio(c, d) * &Scalar::sqrt(2))
    })
}

fn poly3() -> impl Strategy<Value = Poly> {
    proptest::collection::vec((0u8..3, 0u8..3, 0u8..3, -5i64..5), 0..5).prop_map(|terms| {
        let mut p = Poly::zero(3);
        for (a, b, c, k) in terms {
            let m = Poly::var(3, 0).pow(a as u32);
            let m = &m * &Poly::var(3, 1).pow(b as u32);
            let m = &m * &Poly::var(3, 2).pow(c as u32);
            p = &p + &m.scale(&Scalar::int(k));
        }
        p
    })
}

/// Vertices on a parabola are in convex position; optionally stretched by sqrt 2.
fn polygon() -> impl Strategy<Value = Vec<Vector>> {
    (proptest::collection::btree_set(-6i64..7, 3..=6), any::<bool>()).prop_map(|(xs, irrational): (BTreeSet<i64>, bool)| {
        let s = if irrational { Scalar::sqrt(2) } else { Scalar::one() };
        xs.into_iter().map(|x| vec![&Scalar::int(x) * &s, Scalar::int(x * x)]).collect()
    })
}

/// Points on the moment curve span a simplicial 3-polytope whose normal fan is not simplicial.
fn cyclic3() -> impl Strategy<Value = Vec<Vector>> {
    proptest::collection::btree_set(-3i64..4, 5..=6)
        .prop_map(|ts: BTreeSet<i64>| ts.into_iter().map(|t| v(&[t, t * t, t * t * t])).collect())
}

fn h_of(p: &Polytope) -> Vec<usize> {
    generalized_h(&FaceLattice::of_polytope(p).unwrap().dual().unwrap()).into_iter().map(|x| x as usize).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv()).is_one());
        }
        let diff = &a - &b;
        prop_assert_eq!(diff.signum(), a.cmp(&b) as i32);
        prop_assert_eq!(Scalar::parse(&a.to_string(), Some(2)).unwrap(), a);
    }

    #[test]
    fn poly_ring_axioms(p in poly3(), q in poly3(), r in poly3(), x in proptest::collection::vec(-4i64..5, 3)) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        let pt = v(&x);
        prop_assert_eq!((&p * &q).eval(&pt), &p.eval(&pt) * &q.eval(&pt));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fraction_free_solve_agrees(n in 9usize..12, seed in proptest::collection::vec(-9i64..10, 144 + 12)) {
        let rows: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| Scalar::int(seed[i * 12 + j])).collect()).collect();
        let a = Matrix::from_rows(rows.clone());
        let b: Vec<Scalar> = (0..n).map(|i| Scalar::int(seed[144 + i])).collect();
        prop_assume!(!a.det().is_zero());
        let x = a.solve(&b).unwrap();
        prop_assert_eq!(a.mul_vec(&x), b.clone());
        // One extra zero column takes the echelon path.
        let wide = Matrix::from_rows(rows.into_iter().map(|mut r| { r.push(Scalar::zero()); r }).collect());
        let y = wide.solve(&b).unwrap();
        prop_assert_eq!(&y[..n], &x[..]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn polygon_fans(verts in polygon(), lin in proptest::collection::vec(-3i64..4, 2)) {
        let m = verts.len();
        let p = Polytope::from_vertices(verts).unwrap();
        let (fan, h) = p.normal_fan().unwrap();
        let sh = MinimalSheaf::build(&fan).unwrap();
        sh.verify().unwrap();
        let abs = ih(&sh, false).unwrap();
        prop_assert_eq!(&abs.dims, &vec![1, m - 2, 1]);
        prop_assert_eq!(&abs.dims, &h_of(&p));

        let act = lefschetz_action(&sh, &h, &abs).unwrap();
        prop_assert!(check_hl(&act).passed);
        let ctx = PairingContext::new(&sh, RayChoice::Barycentric).unwrap();
        let pm = ih_pairing_matrix(&ctx, &abs, &abs).unwrap();
        prop_assert!(check_hr(&act, &pm).unwrap().passed);

        // A global linear function acts as zero on IH.
        let shifted = h.add(&ConewiseFunction::global(&fan, &Poly::linear(&v(&lin))));
        let act2 = lefschetz_action(&sh, &shifted, &abs).unwrap();
        prop_assert_eq!(&act.matrices, &act2.matrices);

        for &c in fan.maximal() {
            prop_assert_eq!(zeta_constant(&fan, &thom_function(&fan, c).unwrap()).unwrap(), Scalar::one());
        }
        prop_assert_eq!(zeta_constant(&fan, &h.pow(2)).unwrap(), &Scalar::int(2) * &p.volume());
        let (_, full) = complete_pairing(&sh).unwrap();
        prop_assert_eq!(full.transpose(), full);
    }

    #[test]
    fn polygon_algebras(verts in polygon(), seed in 0u64..1000) {
        let m = verts.len();
        let p = Polytope::from_vertices(verts).unwrap();
        let vol = volume_polynomial(&p, seed).unwrap();
        vol.verify().unwrap();
        let alg = polytope_algebra(&vol).unwrap();
        prop_assert_eq!(&alg.dims, &vec![1, m - 2, 1]);
        let vb = vertex_basis(&alg, None, seed).unwrap();
        prop_assert!(vb.is_basis);
        prop_assert_eq!(&vb.counts, &alg.dims);
        let lp = lefschetz_lp_check(&alg).unwrap();
        prop_assert!(lp.passed);
        prop_assert_eq!(lp.top_value, &Scalar::int(2) * &p.volume());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn nonsimplicial_normal_fans(verts in cyclic3()) {
        let p = Polytope::from_vertices(verts).unwrap();
        let (fan, h) = p.normal_fan().unwrap();
        let sh = MinimalSheaf::build(&fan).unwrap();
        sh.verify().unwrap();
        let abs = ih(&sh, false).unwrap();
        let expected = h_of(&p);
        prop_assert_eq!(&abs.dims, &expected);
        let rev: Vec<usize> = expected.iter().rev().copied().collect();
        prop_assert_eq!(&expected, &rev);
        let act = lefschetz_action(&sh, &h, &abs).unwrap();
        prop_assert!(check_hl(&act).passed);
    }
}
