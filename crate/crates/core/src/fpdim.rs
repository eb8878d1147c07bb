//! Frobenius–Perron dimensions of integral Z₊-rings.
//!
//! The dimension vector `d` is found numerically and then checked exactly;
//! nothing numeric is trusted. The left vector `p` is solved exactly from
//! the linear system it satisfies once `d` is known.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::json::serialize_big_vec;
use crate::linalg::{nullspace, Matrix};
use crate::poly::{rational_to_f64, IntPolynomial};
use crate::ring::{RingElement, RingPresentation};

/// Fixed-point precision of the power iteration, in bits.
const PRECISION: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionData {
    #[serde(serialize_with = "serialize_big_vec")]
    pub d: Vec<BigInt>,
    #[serde(serialize_with = "serialize_big_vec")]
    pub p: Vec<BigInt>,
    #[serde(rename = "fpdim", serialize_with = "crate::json::serialize_big")]
    pub fpdim_a: BigInt,
    pub integral: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralityStatus {
    Integral,
    NonIntegral,
}

/// Closed rational interval, reported both exactly and as decimals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Bracket {
    pub fn contains_integer(&self) -> bool {
        self.lo.ceil() <= self.hi.floor()
    }

    pub fn contains(&self, x: f64) -> bool {
        rational_to_f64(&self.lo) <= x && x <= rational_to_f64(&self.hi)
    }
}

impl Serialize for Bracket {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Bracket", 4)?;
        st.serialize_field("lo", &rational_to_f64(&self.lo))?;
        st.serialize_field("hi", &rational_to_f64(&self.hi))?;
        st.serialize_field("lo_exact", &self.lo.to_string())?;
        st.serialize_field("hi_exact", &self.hi.to_string())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntegralityCertificate {
    pub status: IntegralityStatus,
    /// Perron root of `Σ_i N_i`.
    pub perron_estimate: Bracket,
    /// A basis element whose dimension is not an integer.
    pub witness_i: usize,
    /// Bracket for `d_{witness_i}`.
    pub witness_estimate: Bracket,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpdimError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("ring is not integral: d_{} is not an integer", .0.witness_i)]
    NonIntegral(Box<IntegralityCertificate>),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Integer FP dimension vector, or a certificate that one does not exist.
pub fn fp_dimension_vector(ring: &RingPresentation) -> Result<Vec<BigInt>, FpdimError> {
    let report = ring.validate();
    if let Some(v) = report.first_violation {
        return Err(FpdimError::Precondition(format!("ring is not a valid transitive unital Z+-ring ({v})")));
    }
    dimension_vector_of_valid(ring)
}

/// As [`fp_dimension_vector`] for a ring already known to be valid.
pub(crate) fn dimension_vector_of_valid(ring: &RingPresentation) -> Result<Vec<BigInt>, FpdimError> {
    if let Some(d) = power_candidate(ring) {
        if verify_dimension(ring, &d) {
            return Ok(d);
        }
    }
    exact_dimension_vector(ring)
}

/// `d_u = 1`, `d_i ≥ 1` and `d_i d_j = Σ_k N_{ij}^k d_k`.
pub fn verify_dimension(ring: &RingPresentation, d: &[BigInt]) -> bool {
    let r = ring.rank();
    if d.len() != r || !d[ring.unit()].is_one() || d.iter().any(|x| x < &BigInt::one()) {
        return false;
    }
    (0..r).all(|i| {
        (0..r).all(|j| {
            let rhs: BigInt = (0..r).map(|k| &d[k] * ring.n(i, j, k)).sum();
            &d[i] * &d[j] == rhs
        })
    })
}

/// Power iteration in fixed point by repeated squaring of
/// `M = mult_matrix(Σ b_i)`. `M` contains the identity and is irreducible,
/// so it is primitive and `M^n` tends to a multiple of `d pᵀ`; column `u`
/// read with `d_u = 1` gives the candidate.
fn power_candidate(ring: &RingPresentation) -> Option<Vec<BigInt>> {
    let r = ring.rank();
    let u = ring.unit();
    let m = ring.mult_matrix(&RingElement::all_ones(r)).ok()?;
    let max = m.max_abs_entry().to_f64().unwrap_or(f64::MAX);
    let cap = ((10 * r) as f64 * (max + 2.0).log2()).ceil().max(8.0) as usize;
    let scale = BigInt::one() << PRECISION;
    let tolerance: BigInt = &scale / BigInt::from(10u64).pow(20);
    let mut a = m;
    let mut prev: Option<Vec<BigInt>> = None;
    for _ in 0..cap {
        a = rescale(&a.mul(&a));
        let pivot = &a[(u, u)];
        if pivot.is_zero() {
            return None;
        }
        let v: Vec<BigInt> = (0..r).map(|i| (&a[(i, u)] << PRECISION) / pivot).collect();
        let done = prev
            .as_ref()
            .is_some_and(|p| p.iter().zip(&v).all(|(x, y)| (x - y).abs() < tolerance));
        prev = Some(v);
        if done {
            break;
        }
    }
    let half = BigInt::one() << (PRECISION - 1);
    prev.map(|v| v.into_iter().map(|x| (x + &half) >> PRECISION).collect())
}

/// Drops low bits so the largest entry keeps `PRECISION + 16` bits.
fn rescale(a: &Matrix) -> Matrix {
    let bits = a.max_abs_entry().bits();
    let keep = u64::from(PRECISION) + 16;
    if bits <= keep {
        return a.clone();
    }
    let shift = bits - keep;
    Matrix::from_rows(a.to_rows().into_iter().map(|row| row.into_iter().map(|x| x >> shift).collect()).collect())
}

/// Exact route: `d_i` is the Perron root of `N_i`, the largest real root of
/// its characteristic polynomial. Either every one is an integer or some
/// basis element witnesses non-integrality.
fn exact_dimension_vector(ring: &RingPresentation) -> Result<Vec<BigInt>, FpdimError> {
    exact_route(ring)?.map_err(|(i, chi)| FpdimError::NonIntegral(Box::new(certificate(ring, i, &chi))))
}

/// The exact decision alone; a non-integral ring yields its witness index
/// and characteristic polynomial.
fn exact_route(ring: &RingPresentation) -> Result<Result<Vec<BigInt>, (usize, IntPolynomial)>, FpdimError> {
    let r = ring.rank();
    let mut d = Vec::with_capacity(r);
    for i in 0..r {
        let chi = basis_charpoly(ring, i);
        let top = chi
            .largest_real_root()
            .ok_or_else(|| FpdimError::Invariant(format!("N_{i} has no real eigenvalue")))?;
        if !top.exact {
            return Ok(Err((i, chi)));
        }
        d.push(top.ceil);
    }
    if verify_dimension(ring, &d) {
        Ok(Ok(d))
    } else {
        Err(FpdimError::Invariant(format!("Perron roots {d:?} of the N_i do not form a dimension vector")))
    }
}

/// Dimension data of a valid ring, or `None` if it is not integral. No
/// certificate is built, which is what makes it cheap for the enumerator.
pub(crate) fn integral_data_of_valid(ring: &RingPresentation) -> Result<Option<DimensionData>, FpdimError> {
    let d = match power_candidate(ring).filter(|d| verify_dimension(ring, d)) {
        Some(d) => d,
        None => match exact_route(ring)? {
            Ok(d) => d,
            Err(_) => return Ok(None),
        },
    };
    assemble(ring, d).map(Some)
}

fn basis_charpoly(ring: &RingPresentation, i: usize) -> IntPolynomial {
    let m = ring.mult_matrix(&RingElement::basis(ring.rank(), i)).expect("basis element has ring length");
    IntPolynomial::new(m.charpoly())
}

fn bracket_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 24)
}

fn certificate(ring: &RingPresentation, witness: usize, chi: &IntPolynomial) -> IntegralityCertificate {
    let width = bracket_width();
    let (lo, hi) = chi.largest_root_bracket(&width).expect("witness has a largest root");
    let total = ring.mult_matrix(&RingElement::all_ones(ring.rank())).expect("all-ones has ring length");
    let (plo, phi) = IntPolynomial::new(total.charpoly())
        .largest_root_bracket(&width)
        .expect("Σ N_i has a Perron root");
    IntegralityCertificate {
        status: IntegralityStatus::NonIntegral,
        perron_estimate: Bracket { lo: plo, hi: phi },
        witness_i: witness,
        witness_estimate: Bracket { lo, hi },
    }
}

/// Positive coprime `p` with `p N_i = d_i p` for all `i`.
pub fn left_perron_vector(ring: &RingPresentation, d: &[BigInt]) -> Result<Vec<BigInt>, FpdimError> {
    let r = ring.rank();
    if d.len() != r {
        return Err(FpdimError::Precondition(format!("d has length {} but rank is {r}", d.len())));
    }
    // Row (i, k) of the stacked system: Σ_j p_j (N_{ij}^k − d_i δ_{jk}) = 0.
    let mut rows = Vec::with_capacity(r * r);
    for i in 0..r {
        for k in 0..r {
            rows.push(
                (0..r)
                    .map(|j| {
                        let n = BigInt::from(ring.n(i, j, k));
                        if j == k {
                            n - &d[i]
                        } else {
                            n
                        }
                    })
                    .collect(),
            );
        }
    }
    let mut basis = nullspace(&Matrix::from_rows(rows));
    if basis.len() != 1 {
        return Err(FpdimError::Invariant(format!(
            "left eigenvector space has dimension {}, expected 1",
            basis.len()
        )));
    }
    let mut p = basis.pop().expect("one basis vector");
    if p.iter().any(Signed::is_negative) {
        p.iter_mut().for_each(|x| *x = -&*x);
    }
    if let Some(i) = p.iter().position(|x| !x.is_positive()) {
        return Err(FpdimError::Invariant(format!("left eigenvector has p_{i} = {} ≤ 0", p[i])));
    }
    Ok(p)
}

pub fn fpdim_ring(ring: &RingPresentation) -> Result<DimensionData, FpdimError> {
    let d = fp_dimension_vector(ring)?;
    assemble(ring, d)
}

pub(crate) fn fpdim_of_valid(ring: &RingPresentation) -> Result<DimensionData, FpdimError> {
    let d = dimension_vector_of_valid(ring)?;
    assemble(ring, d)
}

fn assemble(ring: &RingPresentation, d: Vec<BigInt>) -> Result<DimensionData, FpdimError> {
    let p = left_perron_vector(ring, &d)?;
    let fpdim_a = p.iter().zip(&d).map(|(a, b)| a * b).sum();
    Ok(DimensionData { d, p, fpdim_a, integral: true })
}

/// FPdim of an element: `Σ x_i d_i`.
pub fn element_fpdim(data: &DimensionData, x: &RingElement) -> BigInt {
    x.coords.iter().zip(&data.d).map(|(a, b)| a * b).sum()
}

/// A failure of `d_j p_k ≥ N_{ji}^k p_i`; `i = u` is the `p_k ≥ p_u / d_k` case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EasyboundViolation {
    pub j: usize,
    pub i: usize,
    pub k: usize,
}

pub fn check_easybound(ring: &RingPresentation, data: &DimensionData) -> Vec<EasyboundViolation> {
    let r = ring.rank();
    let (d, p) = (&data.d, &data.p);
    let mut out = Vec::new();
    for j in 0..r {
        for i in 0..r {
            for k in 0..r {
                if &d[j] * &p[k] < &p[i] * ring.n(j, i, k) {
                    out.push(EasyboundViolation { j, i, k });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn x_squared_is_four() {
        let ring = RingPresentation::rank2(0, 4);
        let data = fpdim_ring(&ring).unwrap();
        assert_eq!(data.d, big(&[1, 2]));
        assert_eq!(data.p, big(&[2, 1]));
        assert_eq!(data.fpdim_a, BigInt::from(4));
        assert!(check_easybound(&ring, &data).is_empty());
    }

    #[test]
    fn cyclic_groups_have_unit_dimensions() {
        for n in 1..=6 {
            let data = fpdim_ring(&RingPresentation::cyclic_group(n)).unwrap();
            assert_eq!(data.d, vec![BigInt::one(); n]);
            assert_eq!(data.p, vec![BigInt::one(); n]);
            assert_eq!(data.fpdim_a, BigInt::from(n));
        }
    }

    #[test]
    fn rank_two_formula_examples() {
        let data = fpdim_ring(&RingPresentation::rank2(1, 2)).unwrap();
        assert_eq!((data.d.clone(), data.p.clone()), (big(&[1, 2]), big(&[1, 1])));
        assert_eq!(data.fpdim_a, BigInt::from(3));
        let ring = RingPresentation::rank2(2, 3);
        let data = fpdim_ring(&ring).unwrap();
        assert_eq!(data.d, big(&[1, 3]));
        assert_eq!(data.p, big(&[1, 1]));
        assert_eq!(data.fpdim_a, BigInt::from(4));
        assert!(check_easybound(&ring, &data).is_empty());
    }

    #[test]
    fn golden_ratio_is_certified_non_integral() {
        let ring = RingPresentation::rank2(1, 1);
        let Err(FpdimError::NonIntegral(cert)) = fp_dimension_vector(&ring) else {
            panic!("expected a non-integrality certificate");
        };
        assert_eq!(cert.status, IntegralityStatus::NonIntegral);
        assert_eq!(cert.witness_i, 1);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(cert.witness_estimate.contains(golden));
        assert!(cert.witness_estimate.lo > BigRational::new(161.into(), 100.into()));
        assert!(cert.witness_estimate.hi < BigRational::new(162.into(), 100.into()));
        // Σ N_i = [[1,1],[1,2]] has Perron root φ² = φ + 1.
        assert!(cert.perron_estimate.contains(golden + 1.0));
        assert!(!cert.perron_estimate.contains_integer());
        assert!(!cert.witness_estimate.contains_integer());
    }

    #[test]
    fn exact_route_agrees_with_power_iteration() {
        for (a, b) in [(0, 4), (1, 2), (2, 3), (3, 4), (0, 1), (5, 6)] {
            let ring = RingPresentation::rank2(a, b);
            assert_eq!(exact_dimension_vector(&ring).unwrap(), power_candidate(&ring).unwrap(), "{a} {b}");
        }
    }

    #[test]
    fn non_transitive_is_a_precondition_error() {
        let ring = RingPresentation::with_default_labels(2, vec![1, 0, 0, 1, 0, 1, 0, 1]).unwrap();
        assert!(matches!(fp_dimension_vector(&ring), Err(FpdimError::Precondition(_))));
    }

    #[test]
    fn p_is_d_for_rep_s3() {
        // Rep S₃: 1, sign ε, standard V; εV = V, V² = 1 + ε + V.
        let mut t = vec![0u64; 27];
        let mut set = |i: usize, j: usize, k: usize, v: u64| t[(i * 3 + j) * 3 + k] = v;
        for j in 0..3 {
            set(0, j, j, 1);
            set(j, 0, j, 1);
        }
        set(1, 1, 0, 1);
        set(1, 2, 2, 1);
        set(2, 1, 2, 1);
        set(2, 2, 0, 1);
        set(2, 2, 1, 1);
        set(2, 2, 2, 1);
        let ring = RingPresentation::with_default_labels(3, t).unwrap();
        let data = fpdim_ring(&ring).unwrap();
        assert_eq!(data.d, big(&[1, 1, 2]));
        assert_eq!(data.p, data.d);
        assert_eq!(data.fpdim_a, BigInt::from(6));
    }

    #[test]
    fn verify_rejects_wrong_vectors() {
        let ring = RingPresentation::rank2(0, 4);
        assert!(!verify_dimension(&ring, &big(&[1, 3])));
        assert!(!verify_dimension(&ring, &big(&[2, 4])));
        assert!(!verify_dimension(&ring, &big(&[1])));
    }
}
