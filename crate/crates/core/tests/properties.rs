use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tanfree::codes;
use tanfree::conic::{Conic, PointClass};
use tanfree::linalg;
use tanfree::search::{self, SearchOptions};
use tanfree::tangency;
use tanfree::{Fe, Field, Plane, PointSet};

const ORDERS: [u32; 8] = [3, 4, 5, 7, 8, 9, 11, 13];
const ODD: [u32; 6] = [3, 5, 7, 9, 11, 13];

fn random_set(q: u32, bits: &[bool]) -> PointSet {
    let pl = Plane::with_order(q).unwrap();
    let idx: Vec<u32> = (0..pl.n() as u32).filter(|&i| bits[i as usize % bits.len()]).collect();
    PointSet::from_indices(&pl, &idx)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn frobenius_is_an_automorphism(qi in 0usize..8, a in 0u32..1000, b in 0u32..1000) {
        let f = Field::with_order(ORDERS[qi]).unwrap();
        let (a, b) = (Fe(a % f.q()), Fe(b % f.q()));
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
        prop_assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
        let mut x = a;
        for _ in 0..f.h() {
            x = f.frobenius(x);
        }
        prop_assert_eq!(x, a);
    }

    #[test]
    fn squares_are_half(qi in 0usize..6) {
        let f = Field::with_order(ODD[qi]).unwrap();
        let sq = f.nonzero().filter(|&x| f.is_nonzero_square(x)).count();
        prop_assert_eq!(sq, (f.q() as usize - 1) / 2);
    }

    #[test]
    fn spectrum_identities(qi in 0usize..8, bits in prop::collection::vec(any::<bool>(), 1..64)) {
        let s = random_set(ORDERS[qi], &bits);
        let sp = tangency::spectrum(&s);
        prop_assert!(sp.satisfies_identities(ORDERS[qi], s.len()));
        prop_assert_eq!(tangency::is_tangent_free(&s), sp.get(1) == 0);
    }

    #[test]
    fn projective_images_of_the_conic(qi in 0usize..6, seed in any::<u64>()) {
        // transitivity smoke test: every image has the same census and the
        // same point classes as the canonical conic, transported
        let pl = Plane::with_order(ODD[qi]).unwrap();
        let f = pl.field();
        let c = Conic::canonical(&pl).unwrap();
        let m = linalg::random_invertible(f, &mut ChaCha8Rng::seed_from_u64(seed));
        let d = c.transformed(&m).unwrap();
        prop_assert_eq!(c.line_census(), d.line_census());
        for p in pl.points() {
            let image = pl.point(linalg::mat_apply(f, &m, pl.coords(p))).unwrap();
            prop_assert_eq!(c.classify_point(p), d.classify_point(image));
            prop_assert_eq!(d.classify_point(image), d.classify_point_by_character(image));
        }
    }

    #[test]
    fn interior_points_have_no_tangents(qi in 1usize..6) {
        let pl = Plane::with_order(ODD[qi]).unwrap();
        let c = Conic::canonical(&pl).unwrap();
        prop_assert!(tangency::is_set_without_tangents(&c.points_of_class(PointClass::Interior)));
    }

    #[test]
    fn peeling_gives_the_maximal_stopping_subset(qi in 0usize..4, bits in prop::collection::vec(any::<bool>(), 1..64), seed in any::<u64>()) {
        let s = random_set(ORDERS[qi], &bits);
        let r = codes::peel_decode(&s);
        prop_assert!(r.is_subset(&s));
        prop_assert!(tangency::is_tangent_free(&r));
        prop_assert_eq!(&r, &codes::maximal_stopping_subset(&s));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(&r, &codes::peel_decode_shuffled(&s, &mut rng));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn search_is_independent_of_workers(workers in 1usize..5) {
        let pl = Plane::with_order(5).unwrap();
        let one = search::min_tangent_free(&pl, 12, &SearchOptions::workers(1)).unwrap();
        let many = search::min_tangent_free(&pl, 12, &SearchOptions::workers(workers)).unwrap();
        prop_assert_eq!(one.witness, many.witness);
        prop_assert_eq!(one.nodes_expanded, many.nodes_expanded);
    }
}

#[test]
fn stopping_sets_are_tangent_free_sets_q4() {
    let r = codes::stopping_equivalence_check(&Plane::with_order(4).unwrap(), 0, 0);
    assert!(r.exhaustive);
    assert_eq!(r.tested, 1 << 21);
    assert_eq!(r.mismatches, 0);
}

#[test]
fn stopping_sets_sampled_q5() {
    let r = codes::stopping_equivalence_check(&Plane::with_order(5).unwrap(), 2000, 3);
    assert!(!r.exhaustive);
    assert_eq!(r.mismatches, 0);
    assert!(r.stopping_sets > 0);
}
