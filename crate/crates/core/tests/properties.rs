use proptest::prelude::*;

use markoff_lab::conics::{brute_force_conic_count, classify_and_count, closed_form_total, ConicParams};
use markoff_lab::delta::{build_assignment, build_assignment_with, delta_values, verify_certificate};
use markoff_lab::enumeration::enumerate_solutions;
use markoff_lab::field::{chi, sqrt_mod};
use markoff_lab::obstruction::{class_label, degenerate_label, obstruction_characters};
use markoff_lab::orbits::compute_orbits;
use markoff_lab::special::{conic_points, dihedral_generators, orbit_sizes_under, scaling_commutes_00m3};
use markoff_lab::surface::{Coord, SurfaceParams, Triple, PERMUTATIONS};
use markoff_lab::Prime;

const SMALL: [u64; 10] = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const LARGE: [u64; 6] = [101, 997, 7919, 65_537, 1_000_003, 2_147_483_647];

fn small_prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(SMALL.to_vec()).prop_map(|p| Prime::new(p).unwrap())
}

fn any_prime() -> impl Strategy<Value = Prime> {
    prop::sample::select([SMALL.as_slice(), LARGE.as_slice()].concat()).prop_map(|p| Prime::new(p).unwrap())
}

fn params() -> impl Strategy<Value = SurfaceParams> {
    (small_prime(), [any::<i64>(), any::<i64>(), any::<i64>()])
        .prop_map(|(p, a)| SurfaceParams::new(p, a.map(|v| v % 1000)))
}

fn coord() -> impl Strategy<Value = Coord> {
    prop::sample::select(Coord::ALL.to_vec())
}

/// Parameters together with a point picked from the solution set.
fn params_and_point() -> impl Strategy<Value = (SurfaceParams, Triple)> {
    (params(), any::<prop::sample::Index>()).prop_map(|(sp, ix)| {
        let sol = enumerate_solutions(&sp).unwrap();
        let x = sol.points()[ix.index(sol.len())];
        (sp, x)
    })
}

fn special_params() -> impl Strategy<Value = SurfaceParams> {
    (small_prime(), coord(), any::<bool>(), any::<i64>())
        .prop_map(|(p, i, plus, alpha)| {
            let sg = if plus { p.one() } else { -p.one() };
            let alpha = p.elem(alpha % 1000);
            let mut a = [p.zero(); 3];
            a[i.idx()] = sg * 2;
            a[i.next().idx()] = alpha;
            a[i.prev().idx()] = alpha * sg;
            SurfaceParams::from_elements(a)
        })
        .prop_filter("s != 0", |sp| !sp.s().is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn chi_is_multiplicative(p in any_prime(), a in any::<i64>(), b in any::<i64>()) {
        let (x, y) = (p.elem(a), p.elem(b));
        prop_assert_eq!(chi(x * y), chi(x) * chi(y));
    }

    #[test]
    fn sqrt_squares_back(p in any_prime(), a in any::<i64>()) {
        let x = p.elem(a);
        match sqrt_mod(x) {
            Some(r) => {
                prop_assert!(chi(x) >= 0);
                for v in r.to_vec() {
                    prop_assert_eq!(v * v, x);
                }
            }
            None => prop_assert_eq!(chi(x), -1),
        }
    }

    #[test]
    fn inverses(p in any_prime(), a in any::<i64>()) {
        let x = p.elem(a);
        match x.inv() {
            Some(y) => prop_assert_eq!(x * y, p.one()),
            None => prop_assert!(x.is_zero()),
        }
    }

    #[test]
    fn moves_are_involutions_preserving_the_surface((sp, x) in params_and_point(), i in coord()) {
        let y = sp.apply_move(&x, i);
        prop_assert!(sp.on_surface(&y));
        prop_assert_eq!(sp.apply_move(&y, i), x);
        prop_assert_eq!(x.get(i) + y.get(i), sp.vieta_sum(&x, i));
        prop_assert_eq!(x.get(i) * y.get(i), sp.vieta_product(&x, i));
        prop_assert!(sp.u_move_equivariance(&x, i));
    }

    #[test]
    fn rescaling_commutes_with_moves((sp, x) in params_and_point(), i in coord(), t in 1i64..1000) {
        let t = sp.prime().elem(t);
        prop_assume!(!t.is_zero());
        let (sp2, y) = sp.rescale(&x, t).unwrap();
        prop_assert!(sp2.on_surface(&y));
        let (_, moved) = sp.rescale(&sp.apply_move(&x, i), t).unwrap();
        prop_assert_eq!(sp2.apply_move(&y, i), moved);
    }

    #[test]
    fn permutations_are_equivariant((sp, x) in params_and_point(), k in 0usize..6) {
        let perm = PERMUTATIONS[k];
        let (sq, y) = (sp.permute(perm), x.permute(perm));
        prop_assert!(sq.on_surface(&y));
        prop_assert_eq!(sq.s(), sp.s());
    }

    #[test]
    fn conic_classification_matches_brute_force(p in small_prime(), v in [0i64..40, 0i64..40, 0i64..40, 0i64..40]) {
        let c = ConicParams::new(p, v[0], v[1], v[2], v[3]);
        prop_assert_eq!(classify_and_count(&c).unwrap().1, brute_force_conic_count(&c));
    }

    #[test]
    fn delta_point_and_edge_identities((sp, x) in params_and_point(), i in coord()) {
        prop_assume!(!sp.s().is_zero() && x.zero_coords().next().is_none());
        let d = delta_values(&sp, &x).unwrap();
        prop_assert_eq!(d[0] + d[1] + d[2], sp.s());
        let y = sp.apply_move(&x, i);
        if y.zero_coords().next().is_none() {
            let e = delta_values(&sp, &y).unwrap();
            prop_assert_eq!(d[i.idx()] + e[i.idx()], sp.s());
        }
    }

    #[test]
    fn obstruction_labels_are_closed((sp, x) in (special_params(), any::<prop::sample::Index>()).prop_map(|(sp, ix)| {
        let sol = enumerate_solutions(&sp).unwrap();
        (sp, sol.points()[ix.index(sol.len())])
    }), i in coord()) {
        let y = sp.apply_move(&x, i);
        let form = sp.special_form().unwrap();
        if form.is_degenerate() {
            let (l, m) = (degenerate_label(&sp, &x).unwrap(), degenerate_label(&sp, &y).unwrap());
            prop_assert_eq!(l.0.iter().product::<i8>(), 1);
            prop_assert_eq!(l, m);
        } else {
            let (c1, c2) = obstruction_characters(&sp, &x).unwrap();
            prop_assert_ne!(c1 * c2, -1);
            let (l, m) = (class_label(&sp, &x).unwrap(), class_label(&sp, &y).unwrap());
            prop_assert!((l.in_non_neg() && m.in_non_neg()) || (l.in_non_pos() && m.in_non_pos()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn orbits_partition_the_solutions(sp in params()) {
        prop_assume!(!sp.s().is_zero());
        let part = compute_orbits(enumerate_solutions(&sp).unwrap());
        for (k, mv) in part.moves().iter().enumerate() {
            for &j in mv {
                prop_assert_eq!(part.component_id()[k], part.component_id()[j as usize]);
            }
        }
        let sum: u64 = part.sizes().iter().sum();
        prop_assert_eq!(sum, part.total());
        prop_assert_eq!(part.total(), closed_form_total(&sp).unwrap());
    }

    #[test]
    fn certificate_ignores_start_values(sp in params(), shift in any::<u64>()) {
        prop_assume!(sp.classify().divisibility_applies());
        let part = compute_orbits(enumerate_solutions(&sp).unwrap());
        let mut k = shift;
        let asg = build_assignment_with(&part, |_| { k = k.wrapping_mul(6364136223846793005).wrapping_add(1); sp.prime().elem((k >> 33) as i64) }).unwrap();
        let rep = verify_certificate(&part, &asg).unwrap();
        prop_assert!(rep.passed());
        let base = verify_certificate(&part, &build_assignment(&part).unwrap()).unwrap();
        prop_assert_eq!(rep.orbits.len(), base.orbits.len());
    }

    #[test]
    fn scaling_and_reflections_on_00m3(p in prop::sample::select(vec![7u64, 11, 13, 17, 19, 23, 29, 31, 41, 61, 89])) {
        let p = Prime::new(p).unwrap();
        prop_assert!(scaling_commutes_00m3(p));
        let (m1, m2) = dihedral_generators(p);
        let rho = m2.mul(&m1);
        let pts = conic_points(p, p.zero());
        // every reflection m1 rho^k is fixed-point free on the cone minus the origin
        let mut r = markoff_lab::special::Mat2::identity(p);
        for _ in 0..(2 * p.get() + 2) {
            let refl = m1.mul(&r);
            prop_assert!(pts.iter().all(|&v| refl.apply(v) != v));
            r = rho.mul(&r);
        }
        let sizes = orbit_sizes_under(&pts, &[&|v: &(_, _)| m1.apply(*v), &|v: &(_, _)| m2.apply(*v)]);
        prop_assert_eq!(sizes.iter().sum::<u64>(), pts.len() as u64);
    }
}
