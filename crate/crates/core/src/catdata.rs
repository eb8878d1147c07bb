//! Checks on user-supplied category data: projective dimensions, the Cartan
//! matrix and a few yes/no hypotheses layered over an integral ring.
//!
//! Nothing here constructs a category. The data are hypotheses and the checks
//! are necessary conditions they must meet.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::is_prime;
use crate::fpdim::{fpdim_ring, DimensionData, FpdimError};
use crate::json::{serialize_big, FormatError, RingFile};
use crate::linalg::Matrix;
use crate::rank2::{feasibility_report, solve_rank2, FeasibilityInput, Rank2Error, Rank2Report};
use crate::ring::RingPresentation;

/// Tri-state hypotheses: `None` means unknown, and checks that need an
/// unknown hypothesis report "not applicable".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pointed: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id_iso_double_dual: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hopf: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_nontrivial_invertibles: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ext1_unit_vanishes: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatData {
    pub ring: RingPresentation,
    pub proj_dims: Vec<u64>,
    /// `C_{ij} = [P_i : X_j]`.
    pub cartan: Vec<Vec<u64>>,
    pub char_q: u64,
    pub flags: Flags,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatDataFile {
    pub ring: RingFile,
    pub proj_dims: Vec<u64>,
    pub cartan: Vec<Vec<u64>>,
    #[serde(rename = "char", default)]
    pub char_q: u64,
    #[serde(default)]
    pub flags: Flags,
}

#[derive(Debug, Error)]
pub enum CatDataError {
    #[error("inconsistent category data: {0}")]
    Data(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Fpdim(#[from] FpdimError),
    #[error(transparent)]
    Rank2(#[from] Rank2Error),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl CatDataFile {
    pub fn to_catdata(&self) -> Result<CatData, CatDataError> {
        let ring = self.ring.to_ring().map_err(FormatError::Ring)?;
        Ok(CatData { ring, proj_dims: self.proj_dims.clone(), cartan: self.cartan.clone(), char_q: self.char_q, flags: self.flags })
    }
}

pub fn parse_catdata(text: &str) -> Result<CatData, CatDataError> {
    let file: CatDataFile = serde_json::from_str(text).map_err(FormatError::Json)?;
    file.to_catdata()
}

impl CatData {
    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    /// `FPdim(C) = Σ_i dim P_i · d_i`.
    pub fn fpdim_c(&self, data: &DimensionData) -> BigInt {
        self.proj_dims.iter().zip(&data.d).map(|(&p, d)| d * p).sum()
    }

    pub fn cartan_matrix(&self) -> Matrix {
        Matrix::from_rows(self.cartan.iter().map(|row| row.iter().map(|&c| BigInt::from(c)).collect()).collect())
    }

    /// Shapes, `dim P_i = Σ_j C_{ij} d_j`, `dim P_i ≥ d_i`, and the
    /// characteristic.
    pub fn check_consistency(&self, data: &DimensionData) -> Result<(), CatDataError> {
        let r = self.rank();
        let bad = |m: String| Err(CatDataError::Data(m));
        if self.proj_dims.len() != r {
            return bad(format!("{} projective dimensions for rank {r}", self.proj_dims.len()));
        }
        if self.cartan.len() != r || self.cartan.iter().any(|row| row.len() != r) {
            return bad(format!("Cartan matrix must be {r}×{r}"));
        }
        if self.char_q != 0 && !is_prime(self.char_q) {
            return bad(format!("characteristic {} is neither 0 nor prime", self.char_q));
        }
        for i in 0..r {
            let p = BigInt::from(self.proj_dims[i]);
            let from_cartan: BigInt = self.cartan[i].iter().zip(&data.d).map(|(&c, d)| d * c).sum();
            if p != from_cartan {
                return bad(format!("dim P_{i} = {p} but Σ_j C_{i}j d_j = {from_cartan}"));
            }
            if p < data.d[i] {
                return bad(format!("dim P_{i} = {p} is smaller than d_{i} = {}", data.d[i]));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdCheck {
    #[serde(rename = "D", serialize_with = "serialize_big")]
    pub big_d: BigInt,
    #[serde(rename = "fpdimC", serialize_with = "serialize_big")]
    pub fpdim_c: BigInt,
    pub ok: bool,
}

/// `FPdim(C) = D · FPdim(A)` with `D = gcd(dim P_i)`.
pub fn check_prop_gcd(cat: &CatData, data: &DimensionData) -> Result<GcdCheck, CatDataError> {
    cat.check_consistency(data)?;
    let big_d = cat.proj_dims.iter().fold(BigInt::zero(), |g, &p| g.gcd(&BigInt::from(p)));
    let fpdim_c = cat.fpdim_c(data);
    let ok = fpdim_c == &big_d * &data.fpdim_a;
    Ok(GcdCheck { big_d, fpdim_c, ok })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum P1Status {
    Projective,
    NonProjective,
    Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct P1Entry {
    pub index: usize,
    pub status: P1Status,
    #[serde(rename = "pD", serialize_with = "serialize_big")]
    pub p_times_d: BigInt,
    #[serde(serialize_with = "serialize_big")]
    pub d: BigInt,
}

/// `p_i D ≥ d_i`, with equality exactly for projective simples and
/// `p_i D ≥ 2 d_i` otherwise.
pub fn check_prop_p1(data: &DimensionData, big_d: &BigInt) -> Vec<P1Entry> {
    data.p
        .iter()
        .zip(&data.d)
        .enumerate()
        .map(|(index, (p, d))| {
            let pd = p * big_d;
            let status = if &pd == d {
                P1Status::Projective
            } else if pd >= d * 2 {
                P1Status::NonProjective
            } else {
                P1Status::Violation
            };
            P1Entry { index, status, p_times_d: pd, d: d.clone() }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DetboundCheck {
    #[serde(serialize_with = "serialize_big")]
    pub det: BigInt,
    /// `4 d² |det C|`.
    #[serde(serialize_with = "serialize_big")]
    pub lhs: BigInt,
    /// `FPdim(C)²`.
    #[serde(serialize_with = "serialize_big")]
    pub rhs: BigInt,
    pub ok: bool,
}

/// `4 d² |det C| ≤ FPdim(C)²` for rank two, `d` the dimension of the
/// non-unit simple.
pub fn check_detbound(cat: &CatData, data: &DimensionData) -> Result<DetboundCheck, CatDataError> {
    if cat.rank() != 2 {
        return Err(CatDataError::Precondition(format!("detbound needs rank 2, got {}", cat.rank())));
    }
    cat.check_consistency(data)?;
    let d = &data.d[1 - cat.ring.unit()];
    let det = cat.cartan_matrix().determinant();
    let lhs = d * d * 4 * det.abs();
    let f = cat.fpdim_c(data);
    let rhs = &f * &f;
    Ok(DetboundCheck { ok: lhs <= rhs, det, lhs, rhs })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowboVerdict {
    Excluded,
    NotExcluded,
    NotApplicable,
}

/// Without nontrivial invertibles and with `Ext¹(1,1) = 0`, a non-semisimple
/// integral category has `FPdim ≥ 8r + 3`, and `≥ 32` in rank two.
pub fn check_lowbo(r: usize, fpdim_c: &BigInt, no_nontrivial_invertibles: Option<bool>, ext1_unit_vanishes: Option<bool>) -> LowboVerdict {
    if no_nontrivial_invertibles != Some(true) || ext1_unit_vanishes != Some(true) {
        return LowboVerdict::NotApplicable;
    }
    let mut bound = BigInt::from(8 * r + 3);
    if r == 2 {
        bound = BigInt::from(32);
    }
    if fpdim_c < &bound {
        LowboVerdict::Excluded
    } else {
        LowboVerdict::NotExcluded
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatReport {
    pub dimension: DimensionData,
    pub prop_gcd: GcdCheck,
    pub p1: Vec<P1Entry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detbound: Option<DetboundCheck>,
    pub lowbo: LowboVerdict,
    /// Rank-two constraints evaluated at the candidate `FPdim(C)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank2: Option<Rank2Report>,
    pub consistent: bool,
}

pub fn catdata_report(cat: &CatData) -> Result<CatReport, CatDataError> {
    let data = fpdim_ring(&cat.ring)?;
    let prop_gcd = check_prop_gcd(cat, &data)?;
    let p1 = check_prop_p1(&data, &prop_gcd.big_d);
    let detbound = (cat.rank() == 2).then(|| check_detbound(cat, &data)).transpose()?;
    let lowbo = check_lowbo(cat.rank(), &prop_gcd.fpdim_c, cat.flags.no_nontrivial_invertibles, cat.flags.ext1_unit_vanishes);
    let rank2 = if cat.rank() == 2 {
        let (u, x) = (cat.ring.unit(), 1 - cat.ring.unit());
        let ring2 = solve_rank2(cat.ring.n(x, x, x), cat.ring.n(x, x, u))?;
        let f: u64 = prop_gcd
            .fpdim_c
            .clone()
            .try_into()
            .map_err(|_| CatDataError::Precondition("FPdim(C) exceeds 64 bits".into()))?;
        let input = FeasibilityInput { char_q: Some(cat.char_q), flags: cat.flags, candidate_fpdim_c: Some(f) };
        Some(feasibility_report(&ring2, &input)?)
    } else {
        None
    };
    let consistent = prop_gcd.ok
        && p1.iter().all(|e| e.status != P1Status::Violation)
        && detbound.as_ref().is_none_or(|c| c.ok)
        && lowbo != LowboVerdict::Excluded
        && rank2.as_ref().is_none_or(|r| r.verdict == crate::rank2::Feasibility::Consistent);
    Ok(CatReport { dimension: data, prop_gcd, p1, detbound, lowbo, rank2, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat(ring: RingPresentation, proj: &[u64], cartan: &[&[u64]], char_q: u64) -> CatData {
        CatData { ring, proj_dims: proj.to_vec(), cartan: cartan.iter().map(|r| r.to_vec()).collect(), char_q, flags: Flags::default() }
    }

    fn dims(c: &CatData) -> DimensionData {
        fpdim_ring(&c.ring).unwrap()
    }

    fn thirty_two() -> CatData {
        cat(RingPresentation::rank2(2, 3), &[8, 8], &[&[2, 2], &[2, 2]], 0)
    }

    fn rep_s3_char2() -> CatData {
        cat(RingPresentation::rank2(1, 2), &[2, 2], &[&[2, 0], &[0, 1]], 2)
    }

    #[test]
    fn gcd_examples() {
        let c = thirty_two();
        let g = check_prop_gcd(&c, &dims(&c)).unwrap();
        assert_eq!((g.big_d, g.fpdim_c, g.ok), (8.into(), 32.into(), true));
        let sweedler = cat(RingPresentation::cyclic_group(2), &[2, 2], &[&[1, 1], &[1, 1]], 0);
        let g = check_prop_gcd(&sweedler, &dims(&sweedler)).unwrap();
        assert_eq!((g.big_d, g.fpdim_c, g.ok), (2.into(), 4.into(), true));
        let c = rep_s3_char2();
        let g = check_prop_gcd(&c, &dims(&c)).unwrap();
        assert_eq!((g.big_d, g.fpdim_c, g.ok), (2.into(), 6.into(), true));
    }

    #[test]
    fn p1_examples() {
        let c = rep_s3_char2();
        let st: Vec<P1Status> = check_prop_p1(&dims(&c), &2.into()).iter().map(|e| e.status).collect();
        assert_eq!(st, [P1Status::NonProjective, P1Status::Projective]);
        let c = thirty_two();
        let st: Vec<P1Status> = check_prop_p1(&dims(&c), &8.into()).iter().map(|e| e.status).collect();
        assert_eq!(st, [P1Status::NonProjective; 2]);
        let data = fpdim_ring(&RingPresentation::rank2(2, 3)).unwrap();
        assert_eq!(check_prop_p1(&data, &2.into())[1].status, P1Status::Violation);
    }

    #[test]
    fn detbound_examples() {
        let c = thirty_two();
        let r = check_detbound(&c, &dims(&c)).unwrap();
        assert!(r.ok);
        assert_eq!(r.det, BigInt::zero());
        let c = rep_s3_char2();
        let r = check_detbound(&c, &dims(&c)).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone(), r.ok), (32.into(), 36.into(), true));
        let rank3 = cat(RingPresentation::cyclic_group(3), &[1, 1, 1], &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]], 0);
        assert!(matches!(check_detbound(&rank3, &dims(&rank3)), Err(CatDataError::Precondition(_))));
    }

    #[test]
    fn lowbo_examples() {
        let t = Some(true);
        assert_eq!(check_lowbo(4, &34.into(), t, t), LowboVerdict::Excluded);
        assert_eq!(check_lowbo(4, &35.into(), t, t), LowboVerdict::NotExcluded);
        assert_eq!(check_lowbo(2, &32.into(), t, t), LowboVerdict::NotExcluded);
        assert_eq!(check_lowbo(2, &31.into(), t, t), LowboVerdict::Excluded);
        assert_eq!(check_lowbo(3, &27.into(), t, t), LowboVerdict::NotExcluded);
        assert_eq!(check_lowbo(3, &26.into(), t, None), LowboVerdict::NotApplicable);
    }

    #[test]
    fn inconsistent_data_is_rejected() {
        let c = cat(RingPresentation::rank2(2, 3), &[8, 9], &[&[2, 2], &[2, 2]], 0);
        assert!(matches!(check_prop_gcd(&c, &dims(&c)), Err(CatDataError::Data(_))));
        let c = cat(RingPresentation::rank2(2, 3), &[8, 8], &[&[2, 2]], 0);
        assert!(matches!(check_prop_gcd(&c, &dims(&c)), Err(CatDataError::Data(_))));
        let c = cat(RingPresentation::rank2(2, 3), &[8, 8], &[&[2, 2], &[2, 2]], 4);
        assert!(matches!(check_prop_gcd(&c, &dims(&c)), Err(CatDataError::Data(_))));
    }

    #[test]
    fn catdata_file_round_trip() {
        let text = r#"{"ring": {"rank": 2, "constants": [[[1,0],[0,1]],[[0,1],[2,1]]]},
            "proj_dims": [2, 2], "cartan": [[2,0],[0,1]], "char": 2, "flags": {"hopf": false}}"#;
        let c = parse_catdata(text).unwrap();
        assert_eq!(c.proj_dims, [2, 2]);
        assert_eq!(c.flags.hopf, Some(false));
        let rep = catdata_report(&c).unwrap();
        assert!(rep.consistent, "{rep:?}");
    }
}
