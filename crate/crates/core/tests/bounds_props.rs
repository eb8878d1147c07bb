use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use zplus::bounds::{char_poly, reinflate, sturm_real_roots, theorem_bound_report, BoundsError};
use zplus::enumerate::{enumerate_rings, CatalogEntry, Cap};
use zplus::fpdim::element_fpdim;
use zplus::RingElement;

fn catalog() -> &'static [CatalogEntry] {
    static RINGS: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    RINGS.get_or_init(|| {
        let mut rings = enumerate_rings(2, Cap { max_fpdim: Some(20), max_constant: None }, 0).unwrap().rings;
        rings.extend(enumerate_rings(3, Cap { max_fpdim: Some(12), max_constant: Some(2) }, 0).unwrap().rings);
        rings
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_generators_satisfy_the_theorem(pick in any::<prop::sample::Index>(), coeffs in proptest::collection::vec(0i64..4, 3)) {
        let rings = catalog();
        let e = pick.get(rings);
        let r = e.ring.rank();
        let x = RingElement::new(coeffs[..r].iter().map(|&c| BigInt::from(c)).collect());
        match theorem_bound_report(&e.ring, &x) {
            Ok(rep) => {
                prop_assert_eq!(&rep.d, &element_fpdim(&e.dimension, &x));
                prop_assert_eq!(reinflate(&rep.q, &rep.d), rep.chi.clone());
                prop_assert_eq!(rep.chi.clone(), char_poly(&e.ring, &x).unwrap());
                prop_assert!(rep.q_at_d > BigInt::from(0) && rep.q_at_d.is_multiple_of(&rep.n));
                prop_assert_eq!(&rep.multiplier_m * &rep.n, rep.q_at_d.clone());
                prop_assert!(rep.all_ok());
                prop_assert!(2 * rep.s < r);
                // Q = χ/(z − d) with d real, so its complex pairs are those of χ.
                prop_assert_eq!(rep.s, (r - sturm_real_roots(&rep.chi).with_multiplicity) / 2);
            }
            Err(BoundsError::Precondition(_)) => {
                prop_assert_eq!(e.ring.is_zplus_generator(&x).unwrap(), None);
            }
            Err(other) => prop_assert!(false, "{}", other),
        }
    }
}

#[test]
fn cyclic_group_five() {
    let ring = zplus::RingPresentation::cyclic_group(5);
    let rep = theorem_bound_report(&ring, &RingElement::basis(5, 1)).unwrap();
    assert_eq!(rep.d, BigInt::from(1));
    assert_eq!(rep.n, BigInt::from(5));
    assert_eq!(rep.q_at_d, BigInt::from(5));
    assert_eq!(rep.s, 2);
}
