use iterroot::geometry::{
    barycentric_subdivision, is_geometrically_independent, iterated_subdivision, kuhn_triangulation, perturb_generic,
    simplices_intersect, simplices_intersect_lp, IndependenceScope, PerturbConfig,
};
use iterroot::rational::q;
use iterroot::{Point, Simplex, SimplicialComplex};
use proptest::prelude::*;

fn grid_point(m: usize, den: i64) -> impl Strategy<Value = Point> {
    prop::collection::vec(0..=den, m).prop_map(move |c| Point::from_ints(&c, den))
}

fn triangle() -> impl Strategy<Value = Simplex> {
    prop::collection::vec(grid_point(2, 6), 3).prop_filter_map("degenerate", |v| Simplex::new(v).ok())
}

/// Open faces of the complex holding `x`, found by brute force over all simplices.
fn open_faces_containing(k: &SimplicialComplex, x: &Point) -> usize {
    k.all_simplices()
        .iter()
        .filter(|idx| k.simplex(idx).barycentric_coordinates(x).is_some_and(|c| c.is_interior()))
        .count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn locate_finds_the_unique_open_face((m, x) in (1usize..=3).prop_flat_map(|m| (Just(m), grid_point(m, 12)))) {
        let k = kuhn_triangulation(m, 3);
        let face = k.locate(&x).unwrap();
        prop_assert!(k.simplex(&face).barycentric_coordinates(&x).unwrap().is_interior());
        prop_assert_eq!(open_faces_containing(&k, &x), 1);
    }

    #[test]
    fn elimination_agrees_with_lp(a in triangle(), b in triangle()) {
        let fm = simplices_intersect(&a, &b);
        let lp = simplices_intersect_lp(&a, &b);
        prop_assert_eq!(fm.is_some(), lp.is_some());
        if let Some(w) = fm {
            prop_assert!(a.contains(&w) && b.contains(&w));
        }
    }

    #[test]
    fn perturbation_stays_close_and_independent(seed in any::<u64>(), pts in prop::collection::vec(grid_point(2, 4), 3..7)) {
        let radii = vec![q(1, 100); pts.len()];
        let tuples: Vec<Vec<usize>> = (2..pts.len()).map(|i| vec![i - 2, i - 1, i]).collect();
        let cfg = PerturbConfig { seed, ..Default::default() };
        let out = perturb_generic(&pts, &radii, &[], None, &IndependenceScope::Tuples(tuples.clone()), &cfg).unwrap();
        for (p, y) in pts.iter().zip(&out) {
            prop_assert!(p.dist_inf(y) < q(1, 100));
        }
        for t in tuples {
            let sel: Vec<Point> = t.iter().map(|&i| out[i].clone()).collect();
            prop_assert!(is_geometrically_independent(&sel).unwrap());
        }
        let again = perturb_generic(&pts, &radii, &[], None, &IndependenceScope::All, &cfg).unwrap();
        prop_assert_eq!(again.len(), out.len());
    }

    #[test]
    fn vertex_insertion_keeps_volume(s in triangle(), w in prop::collection::vec(1i64..20, 3)) {
        let total: i64 = w.iter().sum();
        let z = s.point_at(&w.iter().map(|&a| q(a, total)).collect::<Vec<_>>());
        let k = iterroot::geometry::insert_vertex(&s, &z).unwrap();
        prop_assert_eq!(k.volume(), s.volume());
        prop_assert_eq!(k.facets().len(), 3);
        k.validate().unwrap();
    }
}

#[test]
fn subdivision_shrinks_mesh_and_keeps_volume() {
    for m in 1..=3 {
        let k = kuhn_triangulation(m, 1);
        let mut cur = k.clone();
        let ratio = q(m as i64, m as i64 + 1);
        let mut bound = k.mesh().unwrap();
        for _ in 0..3 {
            let next = barycentric_subdivision(&cur);
            bound *= &ratio;
            assert!(next.mesh().unwrap() <= bound);
            assert!(next.mesh().unwrap() < cur.mesh().unwrap());
            assert_eq!(next.volume(), k.volume());
            cur = next;
        }
        assert_eq!(cur, iterated_subdivision(&k, 3));
    }
}

#[test]
fn complex_json_round_trip() {
    let k = kuhn_triangulation(2, 2);
    let s = serde_json::to_string(&k).unwrap();
    assert_eq!(serde_json::from_str::<SimplicialComplex>(&s).unwrap(), k);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["vertices"][1], serde_json::json!(["0", "1/2"]));
}
