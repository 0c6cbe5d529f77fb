use std::sync::Arc;

use iterroot::constructions::{
    boundary_square_approx, extend_to_square, interval_even_root_obstruction, kill_square_root, kuhn_cells,
    lp_denseness_check, strip_rotation_example, strip_target, verify_no_root_certificate, BoundaryOptions,
    IntervalVerdict, KillOptions,
};
use iterroot::geometry::{kuhn_triangulation, BoundingBox};
use iterroot::pl::{Evaluable, ExprMap};
use iterroot::rational::{q, Rational};
use iterroot::{PlMap, Point};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p1(x: Rational) -> Point {
    Point::new(vec![x])
}

/// `g` on the grid of step 1/3 with grid-valued images, and `g∘g` built
/// exactly on the grid of step 1/18 (fine enough to hold every breakpoint).
fn random_square(images: &[i64]) -> (PlMap, PlMap) {
    let g = PlMap::interpolate(Arc::new(kuhn_triangulation(1, 3)), images.iter().map(|&i| p1(q(i, 3))).collect()).unwrap();
    let fine = Arc::new(kuhn_triangulation(1, 18));
    let gg = fine.vertices().iter().map(|x| g.evaluate(&g.evaluate(x).unwrap()).unwrap()).collect();
    (g.clone(), PlMap::interpolate(fine, gg).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn squares_are_never_obstructed(images in prop::collection::vec(0i64..=3, 4)) {
        let (g, f) = random_square(&images);
        for i in 0..=36 {
            let x = p1(q(i, 36));
            prop_assert_eq!(f.evaluate(&x).unwrap(), g.evaluate(&g.evaluate(&x).unwrap()).unwrap());
        }
        let verdict = interval_even_root_obstruction(&f).unwrap();
        prop_assert!(!verdict.is_obstruction(), "{:?}", verdict);
    }

    #[test]
    fn obstructions_come_with_rootless_induced_maps(images in prop::collection::vec(0i64..=6, 4)) {
        let f = PlMap::interpolate(Arc::new(kuhn_triangulation(1, 3)), images.iter().map(|&i| p1(q(i, 6))).collect()).unwrap();
        if let IntervalVerdict::NoEvenOrderRoots { analysis, induced } = interval_even_root_obstruction(&f).unwrap() {
            prop_assert!(analysis.invariant);
            prop_assert!(!induced.cycle_type().has_nth_root(2));
        }
    }

    #[test]
    fn strip_identities(num in 1i64..50, x in 0i64..=100) {
        let eps = q(num, 101);
        let (g, ex) = strip_rotation_example(&eps).unwrap();
        prop_assert_eq!(&ex.sup, &(eps / Rational::from_integer(2.into())));
        let p = Point::new(vec![q(x, 100), q(1, 2)]);
        prop_assert_eq!(g.g(&g.g(&p)), strip_target(&p));
    }

    #[test]
    fn extension_squares_back(cells in prop::collection::btree_set((0usize..2, 0usize..4), 1..5),
                              imgs in prop::collection::vec(prop::collection::vec(0i64..=4, 2), 25),
                              seed in any::<u64>()) {
        let cells: Vec<Vec<usize>> = cells.into_iter().map(|(i, j)| vec![i, j]).collect();
        let k = Arc::new(kuhn_cells(2, 4, &cells));
        let images = (0..k.vertices().len()).map(|v| Point::from_ints(&imgs[v], 4)).collect();
        let f = PlMap::interpolate(Arc::clone(&k), images).unwrap();
        let b = BoundingBox { lo: Point::from_ints(&[5, 5], 8), hi: Point::from_ints(&[1, 1], 1) };
        let ext = extend_to_square(&f, &b).unwrap();
        let g = &ext.g;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..20).map(|_| {
            let s = k.facet_simplex(rng.gen_range(0..k.facets().len()));
            let w: Vec<i64> = (0..3).map(|_| rng.gen_range(1..50)).collect();
            let t: i64 = w.iter().sum();
            s.point_at(&w.iter().map(|&a| q(a, t)).collect::<Vec<_>>())
        });
        for x in k.vertices().iter().cloned().chain(samples) {
            prop_assert_eq!(g.evaluate(&g.evaluate(&x).unwrap()).unwrap(), f.evaluate(&x).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn interval_kill_certificates_verify(seed in any::<u64>(), slope in 2i64..5) {
        let h = ExprMap::parse(&format!("x1/{slope} + 1/8"), 1).unwrap();
        let cfg = iterroot::geometry::PerturbConfig { seed, ..Default::default() };
        let a = iterroot::constructions::approximate_pl(&h, &h.modulus(), &q(1, 10), 1, &cfg).unwrap();
        let out = kill_square_root(&a.f0, &q(1, 50), &KillOptions::default()).unwrap();
        prop_assert!(verify_no_root_certificate(&out.f, &out.certificate));
        prop_assert!(out.f.sup_distance_vertices(&out.f0_refined).unwrap() <= q(1, 50));
    }

    #[test]
    fn boundary_roots_keep_sigma0(a in 0i64..=4) {
        // h(x) = x - a·x(1-x)/8 fixes 0.
        let h = ExprMap::parse(&format!("x1 - {a}*x1*(1 - x1)/8"), 1).unwrap();
        let res = boundary_square_approx(&h, &h.modulus(), &p1(q(0, 1)), &q(1, 4), &BoundaryOptions { grid_step: q(1, 1024), max_depth: 20 }).unwrap();
        prop_assert!(res.bound.bound < q(1, 4));
        let s = &res.g.sigma0;
        for i in 0..=100 {
            let x = s.point_at(&[q(i, 100), q(100 - i, 100)]);
            prop_assert!(s.contains(&res.g.eval(&res.g.eval(&x).unwrap()).unwrap()));
        }
    }

    #[test]
    fn lp_numeric_stays_below_bound(imgs in prop::collection::vec(0i64..=4, 3), e in 2i64..6) {
        let f = PlMap::interpolate(Arc::new(kuhn_triangulation(1, 2)), imgs.iter().map(|&i| p1(q(i, 4))).collect()).unwrap();
        let c = lp_denseness_check(&f, &q(1, e), 1).unwrap();
        prop_assert!(c.numeric <= iterroot::rational::to_f64(&c.bound) + 1e-6);
    }
}
