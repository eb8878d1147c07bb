use nalgebra::DMatrix;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use zplus::enumerate::{enumerate_rings, Cap};
use zplus::fpdim::{fp_dimension_vector, fpdim_ring, left_perron_vector, FpdimError};
use zplus::{RingElement, RingPresentation};

fn float_matrix(ring: &RingPresentation, x: &RingElement) -> DMatrix<f64> {
    let m = ring.mult_matrix(x).unwrap();
    let r = ring.rank();
    DMatrix::from_fn(r, r, |j, k| m[(j, k)].to_f64().unwrap())
}

fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Left Perron vector of `M`, scaled so its smallest entry is 1.
fn float_left_vector(m: &DMatrix<f64>) -> Vec<f64> {
    let t = m.transpose();
    let mut v = vec![1.0; m.nrows()];
    for _ in 0..2000 {
        let w: Vec<f64> = (0..v.len()).map(|i| (0..v.len()).map(|k| t[(i, k)] * v[k]).sum()).collect();
        let s: f64 = w.iter().sum();
        v = w.iter().map(|x| x / s).collect();
    }
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    v.iter().map(|x| x / min).collect()
}

fn check_against_floats(ring: &RingPresentation) {
    let data = fpdim_ring(ring).unwrap();
    let r = ring.rank();
    for i in 0..r {
        let rho = spectral_radius(&float_matrix(ring, &RingElement::basis(r, i)));
        let d = data.d[i].to_f64().unwrap();
        assert!((rho - d).abs() <= 1e-6 * d, "N_{i} of {ring:?}: {rho} vs {d}");
    }
    let m = float_matrix(ring, &RingElement::all_ones(r));
    let p = float_left_vector(&m);
    let pmin = data.p.iter().min().unwrap().to_f64().unwrap();
    for (exact, float) in data.p.iter().zip(&p) {
        let scaled = exact.to_f64().unwrap() / pmin;
        assert!((scaled - float).abs() <= 1e-6 * scaled, "p of {ring:?}: {:?} vs {p:?}", data.p);
    }
    let fp: i64 = data.p.iter().zip(&data.d).map(|(a, b)| (a * b).to_i64().unwrap()).sum();
    assert_eq!(data.fpdim_a.to_i64().unwrap(), fp);
}

#[test]
fn catalog_rings_match_floating_eigenvectors() {
    let rank2 = enumerate_rings(2, Cap { max_fpdim: Some(30), max_constant: None }, 0).unwrap();
    let rank3 = enumerate_rings(3, Cap { max_fpdim: Some(12), max_constant: Some(3) }, 0).unwrap();
    assert!(!rank3.rings.is_empty());
    for e in rank2.rings.iter().chain(&rank3.rings) {
        check_against_floats(&e.ring);
        assert_eq!(fpdim_ring(&e.ring).unwrap(), e.dimension);
    }
}

#[test]
fn fibonacci_like_rings_are_refused_with_brackets() {
    for (a, b) in [(1u64, 1u64), (1, 3), (2, 1), (3, 1), (5, 5)] {
        let ring = RingPresentation::rank2(a, b);
        let Err(FpdimError::NonIntegral(cert)) = fp_dimension_vector(&ring) else {
            panic!("X² = {a}X + {b} should not be integral");
        };
        let d = (a as f64 + ((a * a + 4 * b) as f64).sqrt()) / 2.0;
        assert!(cert.witness_estimate.contains(d));
        assert!(!cert.witness_estimate.contains_integer());
        // Σ N_i = mult_matrix(1 + X) has Perron root 1 + d.
        assert!(cert.perron_estimate.contains(1.0 + d));
        assert!(!cert.perron_estimate.contains_integer());
    }
}

proptest! {
    #[test]
    fn random_integral_rank_two_rings(d in 1u64..200, a_frac in 0.0f64..1.0) {
        let a = ((d as f64) * a_frac) as u64 % d;
        let ring = RingPresentation::rank2(a, d * (d - a));
        check_against_floats(&ring);
        let data = fpdim_ring(&ring).unwrap();
        prop_assert_eq!(left_perron_vector(&ring, &data.d).unwrap(), data.p);
    }
}
