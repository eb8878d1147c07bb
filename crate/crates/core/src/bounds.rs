//! Divisibility and eigenvalue bounds for a Z₊-generator of an integral ring.
//!
//! For a generator `b` with `d = FPdim(b)`, `N = FPdim(A)` and
//! `Q = χ_b / (z − d)`, the number `Q(d)` is a positive multiple of `N`,
//! which forces `d` to be large relative to `N^{1/(r-1)}`. The rational
//! exponents are cleared by raising both sides to the power `r − 1`, so every
//! check here is an integer comparison.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::fpdim::{element_fpdim, fpdim_ring, DimensionData, FpdimError};
use crate::json::serialize_big;
use crate::poly::{IntPolynomial, RealRootCount};
use crate::ring::{RingElement, RingError, RingPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Fpdim(#[from] FpdimError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub chi: IntPolynomial,
    #[serde(rename = "Q")]
    pub q: IntPolynomial,
    #[serde(serialize_with = "serialize_big")]
    pub d: BigInt,
    #[serde(rename = "N", serialize_with = "serialize_big")]
    pub n: BigInt,
    #[serde(rename = "Q_at_d", serialize_with = "serialize_big")]
    pub q_at_d: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub multiplier_m: BigInt,
    pub s: usize,
    pub ineq_ii_ok: bool,
    pub ineq_iii_ok: bool,
    pub weak_ok: bool,
    pub generator_witness: usize,
}

impl BoundReport {
    pub fn all_ok(&self) -> bool {
        self.ineq_ii_ok && self.ineq_iii_ok && self.weak_ok
    }
}

/// `det(z·I − mult_matrix(x))`.
pub fn char_poly(ring: &RingPresentation, x: &RingElement) -> Result<IntPolynomial, RingError> {
    Ok(IntPolynomial::new(ring.mult_matrix(x)?.charpoly()))
}

/// `Q = χ / (z − d)` and `Q(d)`, for a simple root `d` with `Q(d) > 0`.
pub fn deflate_and_eval(chi: &IntPolynomial, d: &BigInt) -> Result<(IntPolynomial, BigInt), BoundsError> {
    let (q, rem) = chi.synthetic_division(d);
    if !rem.is_zero() {
        return Err(BoundsError::Precondition(format!("{d} is not a root of {chi}")));
    }
    let q_at_d = q.eval(d);
    if q_at_d.is_zero() {
        return Err(BoundsError::Precondition(format!("{d} is a multiple root of {chi}")));
    }
    if q_at_d.is_negative() {
        return Err(BoundsError::Precondition(format!("Q({d}) = {q_at_d} is negative, so {d} is not the Perron root")));
    }
    Ok((q, q_at_d))
}

pub fn sturm_real_roots(poly: &IntPolynomial) -> RealRootCount {
    poly.real_roots()
}

pub fn theorem_bound_report(ring: &RingPresentation, x: &RingElement) -> Result<BoundReport, BoundsError> {
    let data = fpdim_ring(ring)?;
    theorem_bound_report_with(ring, &data, x)
}

/// As [`theorem_bound_report`] with dimension data already computed.
pub fn theorem_bound_report_with(
    ring: &RingPresentation,
    data: &DimensionData,
    x: &RingElement,
) -> Result<BoundReport, BoundsError> {
    if !x.is_nonnegative() {
        return Err(BoundsError::Precondition(
            "element has a negative coordinate; the bound only concerns Z+-combinations".into(),
        ));
    }
    let witness = ring
        .is_zplus_generator(x)?
        .ok_or_else(|| BoundsError::Precondition("element is not a Z+-generator".into()))?;
    let r = ring.rank();
    let d = element_fpdim(data, x);
    let n = data.fpdim_a.clone();
    let chi = char_poly(ring, x)?;
    let (q, q_at_d) = deflate_and_eval(&chi, &d)?;
    if !(&q_at_d % &n).is_zero() {
        return Err(BoundsError::Invariant(format!("N = {n} does not divide Q(d) = {q_at_d}")));
    }
    let multiplier_m = &q_at_d / &n;
    let s = q.complex_pairs();
    if 2 * s > r - 1 {
        return Err(BoundsError::Invariant(format!("{s} complex pairs for a polynomial of degree {}", r - 1)));
    }
    let (ineq_ii_ok, ineq_iii_ok, weak_ok) = inequalities(r, s, &d, &n);
    Ok(BoundReport { chi, q, d, n, q_at_d, multiplier_m, s, ineq_ii_ok, ineq_iii_ok, weak_ok, generator_witness: witness })
}

/// The three eigenvalue inequalities with exponents cleared:
/// `d^{r−1} r^{r−1−s} ≥ N (r−s−1)^{r−1−s}`, `d^{r−1} r^c ≥ N c^c` with
/// `c = ⌈(r−1)/2⌉`, and `(2d)^{r−1} ≥ N`. Rank one is vacuous.
pub fn inequalities(r: usize, s: usize, d: &BigInt, n: &BigInt) -> (bool, bool, bool) {
    if r <= 1 {
        return (true, true, true);
    }
    let e = r - 1;
    let pow = |b: &BigInt, k: usize| num_traits::pow(b.clone(), k);
    let big_r = BigInt::from(r);
    let d_e = pow(d, e);
    let t = e - s;
    let ii = &d_e * pow(&big_r, t) >= n * pow(&BigInt::from(r - s - 1), t);
    let c = e.div_ceil(2);
    let iii = &d_e * pow(&big_r, c) >= n * pow(&BigInt::from(c), c);
    let weak = pow(&(d * 2), e) >= *n;
    (ii, iii, weak)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub element: String,
    #[serde(serialize_with = "crate::json::serialize_big_vec")]
    pub coords: Vec<BigInt>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

/// Reports for every basis element and for `Σ b_i`; non-generators are
/// listed as skipped. Invariant failures are returned as errors.
pub fn generator_sweep(ring: &RingPresentation, data: &DimensionData) -> Result<Vec<SweepEntry>, BoundsError> {
    let r = ring.rank();
    let mut candidates: Vec<(String, RingElement)> =
        (0..r).map(|i| (ring.labels()[i].clone(), RingElement::basis(r, i))).collect();
    candidates.push(("sum".into(), RingElement::all_ones(r)));
    candidates
        .into_iter()
        .map(|(element, x)| {
            let coords = x.coords.clone();
            match theorem_bound_report_with(ring, data, &x) {
                Ok(report) => Ok(SweepEntry { element, coords, report: Some(report), skipped: None }),
                Err(BoundsError::Precondition(why)) => Ok(SweepEntry { element, coords, report: None, skipped: Some(why) }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// `(z − d) Q`, used to check a deflation reconstructs `χ`.
pub fn reinflate(q: &IntPolynomial, d: &BigInt) -> IntPolynomial {
    q.mul(&IntPolynomial::new(vec![-d.clone(), BigInt::one()]))
}
