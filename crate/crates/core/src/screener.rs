//! Screening primes `p` for (quasi-)Hopf algebras of dimension `p` that are
//! not commutative and cocommutative.
//!
//! Integer checks are exact. The only floating check is the one through
//! `φ`, and it reports "inconclusive" inside a relative band of `1e-9`
//! around its threshold instead of guessing.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::is_prime;
use crate::json::sig15;

/// Relative band around a floating threshold treated as undecidable.
pub const FLOAT_BAND: f64 = 1e-9;
pub const LAMBERT_TOLERANCE: f64 = 1e-12;
/// Smallest prime dimension not excluded for quasi-Hopf algebras.
pub const QUASI_HOPF_THRESHOLD: u64 = 37;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScreenError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("inconsistent dimension profile: {0}")]
    Data(String),
}

/// Principal branch of the Lambert W function on `x > 0`.
pub fn lambert_w(x: f64) -> Result<f64, ScreenError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(ScreenError::Domain(format!("lambert_w needs a finite x > 0, got {x}")));
    }
    let mut w = x.ln_1p();
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        // Iterate to rounding level; LAMBERT_TOLERANCE is the promised bound.
        if f.abs() <= 4.0 * f64::EPSILON * x {
            break;
        }
        // Halley step.
        let fp = ew * (w + 1.0);
        let step = f / (fp - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if step.abs() <= f64::EPSILON * w.abs() {
            break;
        }
    }
    Ok(w)
}

/// `φ(x) = 2^{−2/3} exp(W(2^{13/3} ln x) / 2)`.
pub fn phi(x: f64) -> Result<f64, ScreenError> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(ScreenError::Domain(format!("phi needs a finite x > 1, got {x}")));
    }
    let w = lambert_w(2f64.powf(13.0 / 3.0) * x.ln())?;
    Ok(2f64.powf(-2.0 / 3.0) * (w / 2.0).exp())
}

/// The large-`x` approximation `2√2 (ln x / ln ln x)^{1/2}` of `φ`.
pub fn phi_asymptote(x: f64) -> f64 {
    2.0 * 2f64.sqrt() * (x.ln() / x.ln().ln()).sqrt()
}

/// Lower bound `2^{−2/3} p^{1/(r−1)}` for the smallest nontrivial simple.
pub fn d_min(p: u64, r: usize) -> f64 {
    2f64.powf(-2.0 / 3.0) * (p as f64).powf(1.0 / (r as f64 - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// The inequality excluding the algebra holds.
    Fires,
    DoesNotFire,
    Inconclusive,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Relation that makes the check fire.
    pub relation: String,
    pub exact: bool,
    /// Absolute error bound on `rhs`; zero for exact checks.
    pub error_bound: f64,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl Check {
    fn exact(name: &str, lhs: u128, rhs: u128, relation: &str, fires: bool, note: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            lhs: lhs as f64,
            rhs: rhs as f64,
            relation: relation.into(),
            exact: true,
            error_bound: 0.0,
            outcome: if fires { Outcome::Fires } else { Outcome::DoesNotFire },
            note: note.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Excluded,
    NotExcluded,
    InconclusiveAtTolerance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub r: usize,
    pub d_min: f64,
    /// A few ulps of `powf`.
    pub d_min_error_bound: f64,
    /// Some nontrivial simple is isomorphic to its double dual.
    pub self_double_dual_guaranteed: bool,
    /// Hopf case only: `p/(q+2) ≤ d_min(r)`, which rules out rank `r` when a
    /// nontrivial self-double-dual simple exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_excludes: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScreenReport {
    pub p: u64,
    pub q: u64,
    pub kind: &'static str,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    /// Smallest relative slack among floating checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    pub rank_table: Vec<RankRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quasi_hopf: Option<Box<ScreenReport>>,
}

fn verdict_of(checks: &[Check]) -> Verdict {
    if checks.iter().any(|c| c.outcome == Outcome::Fires) {
        Verdict::Excluded
    } else if checks.iter().any(|c| c.outcome == Outcome::Inconclusive) {
        Verdict::InconclusiveAtTolerance
    } else {
        Verdict::NotExcluded
    }
}

/// Largest `r` whose `d_min(r)` still exceeds 2, so that it forces
/// `d ≥ 3` beyond what integrality gives.
fn informative_rank_cap(p: u64) -> usize {
    let mut r = 4;
    while d_min(p, r + 1) > 2.0 {
        r += 1;
    }
    r
}

/// Largest `r` with `4(q+2)²(r − 1) ≤ p²`; higher ranks are ruled out.
fn rankbound_cap(p: u64, q: u64) -> usize {
    let lhs = 4 * u128::from(q + 2).pow(2);
    (u128::from(p).pow(2) / lhs + 1).min(usize::MAX as u128) as usize
}

fn five_sim_hint(r: usize) -> bool {
    !(r >= 9 && (r - 1).is_multiple_of(4))
}

fn rank_table(p: u64, r_cap: usize, hopf_q: Option<u64>) -> Vec<RankRow> {
    (4..=r_cap)
        .map(|r| {
            let dm = d_min(p, r);
            RankRow {
                r,
                d_min: sig15(dm),
                d_min_error_bound: sig15(8.0 * f64::EPSILON * dm),
                self_double_dual_guaranteed: five_sim_hint(r),
                inner_excludes: hopf_q.map(|q| (p as f64) / ((q + 2) as f64) <= dm),
            }
        })
        .collect()
}

fn check_prime_above_two(p: u64) -> Result<(), ScreenError> {
    if !is_prime(p) {
        return Err(ScreenError::Domain(format!("{p} is not prime")));
    }
    if p == 2 {
        return Err(ScreenError::Domain("p must be an odd prime".into()));
    }
    Ok(())
}

/// Quasi-Hopf algebras of prime dimension `p < 37` are pointed.
pub fn screen_quasi_hopf(p: u64, r_cap: Option<usize>) -> Result<ScreenReport, ScreenError> {
    check_prime_above_two(p)?;
    let fourob = Check::exact(
        "fourob",
        u128::from(p),
        u128::from(QUASI_HOPF_THRESHOLD),
        "<",
        p < QUASI_HOPF_THRESHOLD,
        "at least 4 simples and FPdim ≥ 8r + 3 force p ≥ 37",
    );
    let checks = vec![fourob];
    let cap = r_cap.unwrap_or_else(|| informative_rank_cap(p));
    Ok(ScreenReport {
        p,
        q: 0,
        kind: "quasi_hopf",
        verdict: verdict_of(&checks),
        checks,
        margin: None,
        rank_table: rank_table(p, cap, None),
        quasi_hopf: None,
    })
}

/// Hopf algebras of prime dimension `p` in characteristic `q`.
///
/// `q = 0` runs only the quasi-Hopf screen. `q = 2` and `q = p` are settled
/// by the known classification and reported as excluded.
pub fn screen_hopf(p: u64, q: u64, r_cap: Option<usize>) -> Result<ScreenReport, ScreenError> {
    check_prime_above_two(p)?;
    if q != 0 && !is_prime(q) {
        return Err(ScreenError::Domain(format!("characteristic {q} is neither 0 nor prime")));
    }
    let quasi = screen_quasi_hopf(p, r_cap)?;
    if q == 0 {
        return Ok(ScreenReport { kind: "hopf", quasi_hopf: Some(Box::new(quasi.clone())), ..quasi });
    }
    let mut checks = Vec::new();
    if q == 2 || q == p {
        checks.push(Check {
            name: "known_classification".into(),
            lhs: q as f64,
            rhs: p as f64,
            relation: if q == 2 { "q = 2" } else { "q = p" }.into(),
            exact: true,
            error_bound: 0.0,
            outcome: Outcome::Fires,
            note: "Hopf algebras of prime dimension are classified when q = 2 or q = p".into(),
        });
    } else {
        // Exact form of the 9/2 bound: excluded iff 3p ≤ 14(q+2).
        let (l, r) = (3 * u128::from(p), 14 * u128::from(q + 2));
        checks.push(Check::exact("nine_halves", l, r, "<=", l <= r, "3p ≤ 14(q+2)"));
        let phi_check = phi_threshold_check(p, q)?;
        checks.push(phi_check);
    }
    checks.push(Check { name: "quasi_hopf".into(), ..quasi.checks[0].clone() });
    let margin = checks.iter().filter(|c| !c.exact).map(|c| sig15(((c.lhs - c.rhs) / c.rhs).abs())).reduce(f64::min);
    let hopf_cap = rankbound_cap(p, q).max(4);
    let cap = r_cap.unwrap_or_else(|| informative_rank_cap(p).min(hopf_cap));
    Ok(ScreenReport {
        p,
        q,
        kind: "hopf",
        verdict: verdict_of(&checks),
        checks,
        margin,
        rank_table: rank_table(p, cap, Some(q)),
        quasi_hopf: Some(Box::new(quasi)),
    })
}

/// Fires when `p/(q+2) ≤ min(9, φ(p))`. Comparisons against 9 are exact;
/// comparisons against `φ(p)` use the inconclusive band.
fn phi_threshold_check(p: u64, q: u64) -> Result<Check, ScreenError> {
    let t = p as f64 / (q + 2) as f64;
    let ph = phi(p as f64)?;
    let lower = (ph * (1.0 - FLOAT_BAND)).min(9.0);
    let upper = (ph * (1.0 + FLOAT_BAND)).min(9.0);
    let nine_exact = 9 * u128::from(q + 2);
    let le = |bound: f64| {
        if bound == 9.0 {
            u128::from(p) <= nine_exact
        } else {
            t <= bound
        }
    };
    let gt = |bound: f64| {
        if bound == 9.0 {
            u128::from(p) > nine_exact
        } else {
            t > bound
        }
    };
    let outcome = if le(lower) {
        Outcome::Fires
    } else if gt(upper) {
        Outcome::DoesNotFire
    } else {
        Outcome::Inconclusive
    };
    Ok(Check {
        name: "phi_threshold".into(),
        lhs: sig15(t),
        rhs: sig15(ph.min(9.0)),
        relation: "<=".into(),
        exact: false,
        error_bound: sig15(FLOAT_BAND * ph.min(9.0)),
        outcome,
        note: format!("p/(q+2) ≤ min(9, φ(p)) with φ(p) = {}", sig15(ph)),
    })
}

/// Hopf (or, for `q = 0`, quasi-Hopf) screen over every odd prime in
/// `lo..=hi`, in increasing order.
pub fn screen_range(lo: u64, hi: u64, q: u64, r_cap: Option<usize>) -> Result<Vec<ScreenReport>, ScreenError> {
    if q != 0 && !is_prime(q) {
        return Err(ScreenError::Domain(format!("characteristic {q} is neither 0 nor prime")));
    }
    let primes: Vec<u64> = (lo.max(3)..=hi).filter(|&n| is_prime(n)).collect();
    primes.into_par_iter().map(|p| screen_hopf(p, q, r_cap)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionProfile {
    pub dims: Vec<u64>,
    pub proj_dims: Vec<u64>,
    pub self_double_dual: Vec<bool>,
    pub q: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileViolation {
    pub constraint: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub detail: String,
}

/// Constraints on simple and projective dimensions of a non-semisimple Hopf
/// algebra of prime dimension `p` in characteristic `q`. Checks that use
/// `q` run only for `q > 2`. Returns the violated constraints.
pub fn check_profile(profile: &DimensionProfile, p: u64) -> Result<Vec<ProfileViolation>, ScreenError> {
    let DimensionProfile { dims, proj_dims, self_double_dual: sdd, q } = profile;
    let r = dims.len();
    let data = |m: String| Err(ScreenError::Data(m));
    if proj_dims.len() != r || sdd.len() != r || r == 0 {
        return data("dims, proj_dims and self_double_dual must have the same nonzero length".into());
    }
    if !is_prime(p) {
        return data(format!("{p} is not prime"));
    }
    if dims.iter().chain(proj_dims).any(|&x| x == 0) {
        return data("dimensions must be positive".into());
    }
    if dims[0] != 1 || !sdd[0] {
        return data("index 0 must be the unit: d_0 = 1 and self-double-dual".into());
    }
    let total: u128 = dims.iter().zip(proj_dims).map(|(&d, &pd)| u128::from(d) * u128::from(pd)).sum();
    if total != u128::from(p) {
        return data(format!("Σ p_j d_j = {total}, not {p}"));
    }
    // The double dual is an involution, so non-fixed simples come in pairs
    // with equal dimensions.
    let mut unpaired: Vec<(u64, u64)> = (0..r).filter(|&j| !sdd[j]).map(|j| (dims[j], proj_dims[j])).collect();
    unpaired.sort_unstable();
    if unpaired.len() % 2 == 1 || unpaired.chunks(2).any(|c| c[0] != c[1]) {
        return data("simples that are not self-double-dual must pair up with equal (d, p)".into());
    }

    let mut out = Vec::new();
    let mut violate = |constraint, index, detail: String| out.push(ProfileViolation { constraint, index, detail });
    let odd = |x: u64| x % 2 == 1;
    let qq = u128::from(q + 2);
    let use_q = *q > 2;

    // (i)
    if !(0..r).any(|i| sdd[i] && odd(dims[i]) && odd(proj_dims[i])) {
        violate("i", None, "no self-double-dual simple has p_i and d_i both odd".into());
    }
    if (1..r).any(|j| sdd[j]) && !(1..r).any(|i| sdd[i] && odd(proj_dims[i])) {
        violate("i", None, "a nontrivial self-double-dual simple exists but none has odd p_i".into());
    }
    // (ii)
    if use_q {
        for i in (0..r).filter(|&i| sdd[i] && odd(proj_dims[i])) {
            if u128::from(proj_dims[i]) < qq {
                violate("ii", Some(i), format!("p_{i} = {} < q + 2 = {qq}", proj_dims[i]));
            }
        }
    }
    // (iii), (iv) for the self-double-dual odd-p_i index of largest d_i.
    let d_star = *dims.iter().max().expect("nonempty");
    let chosen = (0..r).filter(|&i| sdd[i] && odd(proj_dims[i])).max_by_key(|&i| (dims[i], std::cmp::Reverse(i)));
    if let (true, Some(i)) = (use_q, chosen) {
        let di = u128::from(dims[i]);
        let ds = u128::from(d_star);
        let pp = u128::from(p);
        // p ≥ (q+2)(d_i + Σ_{k≠i} max(d_i d_k / d_*, 1) / d_i), times d_i d_*.
        let sum: u128 = (0..r).filter(|&k| k != i).map(|k| (di * u128::from(dims[k])).max(ds)).sum();
        if pp * di * ds < qq * (di * di * ds + sum) {
            violate("iii", Some(i), format!("p·d_i·d_* = {} < (q+2)(d_i² d_* + Σ max(d_i d_k, d_*)) = {}", pp * di * ds, qq * (di * di * ds + sum)));
        }
        if di == ds {
            let rest: u128 = (0..r).filter(|&k| k != i).map(|k| u128::from(dims[k])).sum();
            if pp * di < qq * (di * di + rest) {
                violate("iv", Some(i), format!("p·d_i = {} < (q+2)(d_i² + Σ_{{k≠i}} d_k) = {}", pp * di, qq * (di * di + rest)));
            }
            let two_r = 2 * r as u128;
            if two_r >= 3 && pp * di < qq * (di * di + two_r - 3) {
                violate("iv", Some(i), format!("p·d_i = {} < (q+2)(d_i² + 2r − 3) = {}", pp * di, qq * (di * di + two_r - 3)));
            }
        } else {
            let rr = r as u128;
            if rr >= 2 && pp * di < qq * (di * di + di + rr - 2) {
                violate("iv", Some(i), format!("p·d_i = {} < (q+2)(d_i² + d_i + r − 2) = {}", pp * di, qq * (di * di + di + rr - 2)));
            }
        }
    }
    // (v): p² ≥ 4(q+2)²(r−1).
    if use_q && u128::from(p).pow(2) < 4 * qq * qq * (r as u128 - 1) {
        violate("v", None, format!("p² = {} < 4(q+2)²(r−1) = {}", u128::from(p).pow(2), 4 * qq * qq * (r as u128 - 1)));
    }
    // (vi): a self-double-dual simple of dimension 2 cannot occur.
    for i in (0..r).filter(|&i| sdd[i] && dims[i] == 2) {
        violate("vi", Some(i), format!("d_{i} = 2 for a self-double-dual simple"));
    }
    Ok(out)
}
