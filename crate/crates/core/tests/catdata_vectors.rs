use num_bigint::BigInt;
use zplus::catdata::{catdata_report, parse_catdata, CatData, Flags, LowboVerdict, P1Status};
use zplus::RingPresentation;

/// Rep A₅ in characteristic 5: simples 1, 3, 5 with projective covers of
/// dimensions 5, 10, 5.
const A5_CHAR5: &str = r#"{
  "ring": {
    "rank": 3,
    "labels": ["1", "X3", "X5"],
    "constants": [
      [[1,0,0],[0,1,0],[0,0,1]],
      [[0,1,0],[1,1,1],[1,3,1]],
      [[0,0,1],[1,3,1],[3,4,2]]
    ]
  },
  "proj_dims": [5, 10, 5],
  "cartan": [[2,1,0],[1,3,0],[0,0,1]],
  "char": 5
}"#;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[test]
fn a5_in_characteristic_five() {
    let cat = parse_catdata(A5_CHAR5).unwrap();
    let report = catdata_report(&cat).unwrap();
    assert_eq!(report.dimension.d, big(&[1, 3, 5]));
    assert_eq!(report.dimension.p, big(&[1, 2, 1]));
    assert_eq!(report.dimension.fpdim_a, BigInt::from(12));
    assert_eq!(report.prop_gcd.big_d, BigInt::from(5));
    assert_eq!(report.prop_gcd.fpdim_c, BigInt::from(60));
    let st: Vec<P1Status> = report.p1.iter().map(|e| e.status).collect();
    assert_eq!(st, [P1Status::NonProjective, P1Status::NonProjective, P1Status::Projective]);
    assert!(report.detbound.is_none() && report.rank2.is_none());
    assert_eq!(report.lowbo, LowboVerdict::NotApplicable);
    assert!(report.consistent);
}

#[test]
fn changing_a_projective_dimension_is_caught() {
    let text = A5_CHAR5.replace("[5, 10, 5]", "[5, 10, 6]");
    let cat = parse_catdata(&text).unwrap();
    assert!(catdata_report(&cat).is_err());
}

/// Semisimple data: Cartan matrix the identity and `P_i = X_i`.
fn semisimple(ring: RingPresentation) -> CatData {
    let data = zplus::fpdim::fpdim_ring(&ring).unwrap();
    let r = ring.rank();
    let proj_dims: Vec<u64> = data.d.iter().map(|x| u64::try_from(x).unwrap()).collect();
    let cartan = (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect();
    CatData { ring, proj_dims, cartan, char_q: 0, flags: Flags::default() }
}

#[test]
fn semisimple_categories_have_every_simple_projective() {
    let s3 = RingPresentation::with_default_labels(
        3,
        vec![1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 1, 1, 1],
    )
    .unwrap();
    for ring in [RingPresentation::cyclic_group(2), RingPresentation::cyclic_group(5), s3] {
        let report = catdata_report(&semisimple(ring)).unwrap();
        assert_eq!(report.prop_gcd.big_d, BigInt::from(1));
        assert_eq!(report.prop_gcd.fpdim_c, report.dimension.fpdim_a);
        assert!(report.p1.iter().all(|e| e.status == P1Status::Projective));
    }
}
