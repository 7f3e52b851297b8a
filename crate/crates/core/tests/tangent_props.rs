mod common;

use common::*;
use luka_core::geometry::{AffineFn, Point, Polyhedron};
use luka_core::tangent::{certify_outgoing, cone_contains, tangent_cone_polyhedral};
use luka_core::{ClosedSetDescription, Rat, RegionUnion};
use proptest::prelude::*;

fn arb_region() -> impl Strategy<Value = RegionUnion> {
    let member = proptest::collection::vec((arb_direction(2), -6i64..=6, 1i64..=3, any::<bool>()), 0..3).prop_map(|hs| {
        let mut p = Polyhedron::cube(2);
        for (c, num, den, eq) in hs {
            let h = AffineFn::new(Rat::new(num, den), c);
            p = if eq { p.with_equality(&h) } else { p.with(h) };
        }
        p
    });
    proptest::collection::vec(member, 1..3).prop_map(|ms| RegionUnion::new(2, ms))
}

proptest! {
    #[test]
    fn cones_shrink(x in arb_point(2, 8), u in arb_direction(2), y in arb_point(2, 64), m in 1u64..8) {
        if cone_contains(&x, &u, m + 1, &y).unwrap() {
            prop_assert!(cone_contains(&x, &u, m, &y).unwrap());
        }
    }

    #[test]
    fn cones_ignore_positive_scaling(x in arb_point(2, 8), u in arb_direction(2), y in arb_point(2, 64), m in 1u64..6, c in 1i64..9, d in 1i64..9) {
        let cu: Point = u.iter().map(|v| v * &Rat::new(c, d)).collect();
        prop_assert_eq!(cone_contains(&x, &u, m, &y).unwrap(), cone_contains(&x, &cu, m, &y).unwrap());
    }

    #[test]
    fn polyhedral_sets_have_no_outgoing_generators(region in arb_region()) {
        let set = ClosedSetDescription::Polyhedral(region.clone());
        for x in region.members().iter().flat_map(Polyhedron::vertices) {
            for u in tangent_cone_polyhedral(&region, &x).unwrap() {
                for k in [1u32, 4, 10] {
                    let lambda = Rat::pow2_neg(k);
                    let end: Point = x.iter().zip(&u).map(|(a, b)| a + &(&lambda * b)).collect();
                    if !luka_core::geometry::in_unit_cube(&end) {
                        continue;
                    }
                    // Small enough that the segment stays in a member containing x.
                    let inside = region.members().iter().any(|p| p.contains(&x) && p.contains(&end));
                    if inside {
                        prop_assert!(!certify_outgoing(&set, &x, &u, &lambda).unwrap());
                    }
                }
            }
        }
    }
}
