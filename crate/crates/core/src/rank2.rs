//! Rank two: the ring `X² = aX + b` and the constraints a finite tensor
//! category categorifying it must satisfy.
//!
//! Here `d = FPdim(X)`, `p = (d − a, 1)` and `N = FPdim(A) = 2d − a`. A
//! candidate category dimension `F` is always supplied by the caller; the
//! ring alone never determines it.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{exact_prime_part, factorize, is_prime, log_exact, perfect_sqrt, prime_divisors};
use crate::catdata::Flags;
use crate::fpdim::Bracket;
use crate::poly::IntPolynomial;
use crate::ring::RingPresentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Rank2Ring {
    pub a: u64,
    pub b: u64,
    pub d: u64,
    pub p0: u64,
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rank2Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("X^2 = {a}X + {b} is not integral: discriminant {disc} is not a square")]
    NonIntegral { a: u64, b: u64, disc: u128, bracket: Box<Bracket> },
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

impl Rank2Ring {
    pub fn ring(&self) -> RingPresentation {
        RingPresentation::rank2(self.a, self.b)
    }

    /// `N − 1 ≥ d ≥ N/2`.
    pub fn l1_ok(&self) -> bool {
        self.n > self.d && 2 * self.d >= self.n
    }
}

/// Integral solution of `d² = ad + b`.
pub fn solve_rank2(a: u64, b: u64) -> Result<Rank2Ring, Rank2Error> {
    if b == 0 {
        return Err(Rank2Error::Input("b must be at least 1 for a transitive ring".into()));
    }
    let disc = u128::from(a) * u128::from(a) + 4 * u128::from(b);
    let Some(root) = perfect_sqrt(disc) else {
        let chi = IntPolynomial::new(vec![-BigInt::from(b), -BigInt::from(a), BigInt::from(1)]);
        let width = BigRational::new(1.into(), BigInt::from(1) << 24);
        let (lo, hi) = chi.largest_root_bracket(&width).expect("z² − az − b has a positive root");
        return Err(Rank2Error::NonIntegral { a, b, disc, bracket: Box::new(Bracket { lo, hi }) });
    };
    // root ≡ a (mod 2) because disc ≡ a² (mod 4).
    let d = u64::try_from((u128::from(a) + root) / 2).map_err(|_| Rank2Error::Overflow(format!("d for a={a}, b={b}")))?;
    let n = (2 * u128::from(d) - u128::from(a))
        .try_into()
        .map_err(|_| Rank2Error::Overflow(format!("N for a={a}, b={b}")))?;
    Ok(Rank2Ring { a, b, d, p0: d - a, n })
}

/// Ring with nontrivial dimension `d` and `N = 2d − a`, i.e. `b = d(d − a)`.
pub fn from_d_and_a(d: u64, a: u64) -> Result<Rank2Ring, Rank2Error> {
    if d == 0 || a >= d {
        return Err(Rank2Error::Input(format!("need 0 ≤ a < d, got d={d}, a={a}")));
    }
    let b = d
        .checked_mul(d - a)
        .ok_or_else(|| Rank2Error::Overflow(format!("b = d(d−a) for d={d}, a={a}")))?;
    solve_rank2(a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MinimalClass {
    pub p_char: u64,
    pub r_exp: u32,
    pub s_exp: u32,
    #[serde(rename = "D")]
    pub big_d: u64,
    pub fpdim_c: u64,
    #[serde(rename = "dimP0")]
    pub dim_p0: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Minimality {
    /// Data forced on a minimal category (X projective).
    Class(MinimalClass),
    /// X cannot be projective in this characteristic.
    Impossible,
    /// `d = 1`: the classification is only stated for `d > 1`.
    NotApplicable,
}

/// For `d = q^r` and `d − a = q^s`: `D = q^r`, `FPdim(C) = q^{r+s}(q^{r−s}+1)`
/// and `dim P₀ = b = q^{r+s}`.
pub fn classify_minimal(ring: &Rank2Ring, char_q: u64) -> Result<Minimality, Rank2Error> {
    if !is_prime(char_q) {
        return Err(Rank2Error::Input(format!("characteristic {char_q} is not prime")));
    }
    if ring.d == 1 {
        return Ok(Minimality::NotApplicable);
    }
    let (Some(r), Some(s)) = (log_exact(ring.d, char_q), log_exact(ring.p0, char_q)) else {
        return Ok(Minimality::Impossible);
    };
    if s > r {
        return Ok(Minimality::Impossible);
    }
    let overflow = || Rank2Error::Overflow(format!("minimal data for d={}, q={char_q}", ring.d));
    let pow = |e: u32| char_q.checked_pow(e).ok_or_else(overflow);
    let dim_p0 = pow(r + s)?;
    let fpdim_c = dim_p0.checked_mul(pow(r - s)? + 1).ok_or_else(overflow)?;
    Ok(Minimality::Class(MinimalClass { p_char: char_q, r_exp: r, s_exp: s, big_d: ring.d, fpdim_c, dim_p0 }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FermatVerdict {
    pub p: u64,
    pub n: u64,
    pub admissible: bool,
    /// Forced data when admissible: characteristic 2 and `X² = (p−2)X + (p−1)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forced: Option<Rank2Ring>,
}

/// A minimal category of dimension `pn > 2` with `p > n` prime forces `p`
/// to be a Fermat prime `n + 1`.
pub fn fermat_filter(p: u64, n: u64) -> Result<FermatVerdict, Rank2Error> {
    if !is_prime(p) {
        return Err(Rank2Error::Input(format!("{p} is not prime")));
    }
    if p <= n || u128::from(p) * u128::from(n) <= 2 {
        return Err(Rank2Error::Input(format!("need p > n and pn > 2, got p={p}, n={n}")));
    }
    let admissible = n == p - 1 && n.is_power_of_two();
    let forced = if admissible { Some(from_d_and_a(p - 1, p - 2)?) } else { None };
    Ok(FermatVerdict { p, n, admissible, forced })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "primes", rename_all = "snake_case")]
pub enum CharConstraints {
    Primes(Vec<u64>),
    /// Only stated for `a = 1`.
    NotApplicable,
}

/// For `X² = X + d(d−1)`: the characteristic divides `d(d−1)`, and `d` for
/// Hopf algebras.
pub fn char_constraints(ring: &Rank2Ring, hopf: bool) -> CharConstraints {
    if ring.a != 1 {
        return CharConstraints::NotApplicable;
    }
    let primes = if hopf {
        prime_divisors(ring.d)
    } else {
        let mut ps = prime_divisors(ring.d);
        ps.extend(prime_divisors(ring.d - 1));
        ps.sort_unstable();
        ps
    };
    CharConstraints::Primes(primes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClauseStatus {
    Satisfied,
    Violated,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub status: ClauseStatus,
    pub note: String,
}

impl Clause {
    fn new(status: ClauseStatus, note: impl Into<String>) -> Self {
        Self { status, note: note.into() }
    }

    fn check(ok: bool, note: impl Into<String>) -> Self {
        Self::new(if ok { ClauseStatus::Satisfied } else { ClauseStatus::Violated }, note)
    }

    fn not_applicable(note: impl Into<String>) -> Self {
        Self::new(ClauseStatus::NotApplicable, note)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjeCheck {
    #[serde(flatten)]
    pub clause: Clause,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub big_d: Option<u64>,
    pub x_projective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LargeCharCheck {
    #[serde(flatten)]
    pub clause: Clause,
    /// `F / N²` when it is an integer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop32Check {
    #[serde(flatten)]
    pub clause: Clause,
    pub s_free: u64,
    pub n: u64,
    pub ell: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateChecks {
    pub fpdim_c: u64,
    pub proje: ProjeCheck,
    pub minimal: Clause,
    pub largechar: LargeCharCheck,
    pub prop32: Prop32Check,
    /// `F = p·n` with `p` prime and `p > n`, when such a split exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_split: Option<(u64, u64)>,
    pub fermat: Clause,
    pub c3: Clause,
    pub p4: Clause,
}

impl CandidateChecks {
    pub fn clauses(&self) -> [(&'static str, &Clause); 7] {
        [
            ("proje", &self.proje.clause),
            ("minimal", &self.minimal),
            ("largechar", &self.largechar.clause),
            ("prop32", &self.prop32.clause),
            ("fermat", &self.fermat),
            ("c3", &self.c3),
            ("p4", &self.p4),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Feasibility {
    Consistent,
    Excluded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rank2Report {
    #[serde(flatten)]
    pub ring: Rank2Ring,
    pub l1_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char_q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_class: Option<Minimality>,
    pub char_constraints: CharConstraints,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub candidate: Option<CandidateChecks>,
    pub verdict: Feasibility,
    pub violated: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FeasibilityInput {
    /// `Some(0)` for characteristic zero, `None` when unknown.
    pub char_q: Option<u64>,
    pub flags: Flags,
    pub candidate_fpdim_c: Option<u64>,
}

pub fn feasibility_report(ring: &Rank2Ring, input: &FeasibilityInput) -> Result<Rank2Report, Rank2Error> {
    if let Some(q) = input.char_q {
        if q != 0 && !is_prime(q) {
            return Err(Rank2Error::Input(format!("characteristic {q} is neither 0 nor prime")));
        }
    }
    let minimal_class = match input.char_q {
        Some(q) if q != 0 => Some(classify_minimal(ring, q)?),
        _ => None,
    };
    let hopf = input.flags.hopf == Some(true);
    let candidate = input.candidate_fpdim_c.map(|f| candidate_checks(ring, input, minimal_class, f)).transpose()?;
    let l1_ok = ring.l1_ok();
    let mut violated: Vec<String> = Vec::new();
    if !l1_ok {
        violated.push("l1".into());
    }
    let char_constraints = char_constraints(ring, hopf);
    if let (CharConstraints::Primes(ps), Some(q)) = (&char_constraints, input.char_q) {
        if !ps.contains(&q) {
            violated.push("chardiv".into());
        }
    }
    if let Some(c) = &candidate {
        violated.extend(c.clauses().iter().filter(|(_, cl)| cl.status == ClauseStatus::Violated).map(|(n, _)| n.to_string()));
    }
    let verdict = if violated.is_empty() { Feasibility::Consistent } else { Feasibility::Excluded };
    Ok(Rank2Report { ring: *ring, l1_ok, char_q: input.char_q, minimal_class, char_constraints, candidate, verdict, violated })
}

fn candidate_checks(
    ring: &Rank2Ring,
    input: &FeasibilityInput,
    minimal_class: Option<Minimality>,
    f: u64,
) -> Result<CandidateChecks, Rank2Error> {
    let (d, n_a) = (ring.d, ring.n);
    let flags = &input.flags;

    // FPdim(C) = D·N with D ≥ d; D = d exactly when X is projective, else D ≥ 2d.
    let big_d = f.is_multiple_of(n_a).then(|| f / n_a);
    let x_projective = big_d == Some(d);
    let proje = ProjeCheck {
        clause: match big_d {
            None => Clause::check(false, format!("N = {n_a} does not divide {f}")),
            Some(dd) => Clause::check(
                dd == d || dd >= 2 * d,
                format!("D = {dd}, need D = d = {d} (X projective) or D ≥ 2d = {}", 2 * d),
            ),
        },
        big_d,
        x_projective,
    };

    let minimal = if !x_projective {
        Clause::not_applicable("X is not projective")
    } else if d == 1 {
        Clause::not_applicable("d = 1")
    } else {
        match (input.char_q, minimal_class) {
            (Some(0), _) => Clause::check(false, "a minimal category with d > 1 needs positive characteristic"),
            (_, Some(Minimality::Class(c))) => {
                Clause::check(c.fpdim_c == f, format!("minimal data force FPdim(C) = {}", c.fpdim_c))
            }
            (_, Some(Minimality::Impossible)) => Clause::check(false, "d and d − a are not compatible powers of the characteristic"),
            _ => Clause::not_applicable("characteristic unknown"),
        }
    };

    // Large characteristic: 4d²q > F², exact.
    let large = match input.char_q {
        Some(0) => Some(true),
        Some(q) => Some(4 * u128::from(d) * u128::from(d) * u128::from(q) > u128::from(f) * u128::from(f)),
        None => None,
    };
    let hypotheses = match (flags.pointed, flags.id_iso_double_dual, large) {
        (Some(false), Some(true), Some(true)) => Ok(()),
        (Some(true), _, _) => Err("category is pointed"),
        (_, Some(false), _) => Err("Id is not isomorphic to ** as an additive functor"),
        (_, _, Some(false)) => Err("characteristic is not large"),
        _ => Err("hypotheses unknown"),
    };
    let n_sq = u128::from(n_a) * u128::from(n_a);
    let m = (u128::from(f) % n_sq == 0).then(|| (u128::from(f) / n_sq) as u64);
    let largechar = LargeCharCheck {
        clause: match hypotheses {
            Ok(()) => Clause::check(m.is_some_and(|m| m > 1), format!("need FPdim(C) = m·N² with m > 1, N² = {n_sq}")),
            Err(why) => Clause::not_applicable(why),
        },
        m,
    };

    let s_free = exact_prime_part(f);
    let n32 = f / s_free;
    let ell = n_a;
    let ell_sq = u128::from(ell) * u128::from(ell);
    let m32 = (u128::from(n32) % ell_sq == 0).then(|| (u128::from(n32) / ell_sq) as u64);
    let prop32 = Prop32Check {
        clause: match hypotheses {
            Ok(()) => Clause::check(
                m32.is_some_and(|m| m >= 2) && ell >= 4,
                format!("need n = {n32} = m·ℓ² with m ≥ 2 and ℓ = {ell} ≥ 4"),
            ),
            Err(why) => Clause::not_applicable(why),
        },
        s_free,
        n: n32,
        ell,
        m: m32,
    };

    let prime_split = factorize(f).last().map(|&(p, _)| (p, f / p)).filter(|&(p, n)| p > n);
    let (fermat, c3) = match prime_split {
        None => (Clause::not_applicable("no split F = p·n with p prime > n"), Clause::not_applicable("no split F = p·n with p prime > n")),
        Some((p, n)) if x_projective => {
            let fermat = if u128::from(p) * u128::from(n) <= 2 {
                Clause::not_applicable("pn ≤ 2")
            } else {
                let v = fermat_filter(p, n)?;
                let matches = v.forced.is_some_and(|r| r.a == ring.a && r.b == ring.b);
                let char_ok = input.char_q.is_none_or(|q| q == 2);
                Clause::check(
                    v.admissible && matches && char_ok,
                    format!("minimal with F = {p}·{n} forces a Fermat prime p = n + 1, X² = (p−2)X + (p−1), char 2"),
                )
            };
            (fermat, Clause::not_applicable("category is minimal"))
        }
        Some((p, n)) => (
            Clause::not_applicable("category is not minimal"),
            Clause::check(n % n_a == 0, format!("non-minimal with F = {p}·{n} needs N = {n_a} to divide {n}")),
        ),
    };

    // n ≤ 3 for the split with the largest prime.
    let p4 = match factorize(f).last().map(|&(p, _)| (p, f / p)) {
        Some((p, n)) if n <= 3 => {
            if f == 2 {
                Clause::not_applicable("FPdim(C) = 2 is semisimple")
            } else {
                let pointed = d == 1 && n == 2;
                let six = f == 6 && x_projective && ring.a == 1 && ring.b == 2 && input.char_q.is_none_or(|q| q == 2);
                Clause::check(pointed || six, format!("F = {p}·{n}: need n = 2 and pointed, or F = 6 minimal with X² = X + 2 in char 2"))
            }
        }
        _ => Clause::not_applicable("F is not p·n with p prime and n ≤ 3"),
    };

    Ok(CandidateChecks { fpdim_c: f, proje, minimal, largechar, prop32, prime_split, fermat, c3, p4 })
}

/// All integral rings with `N ≤ max_n`, by `d` ascending and then `N`
/// ascending (so `a` descending).
pub fn enumerate_rank2(max_n: u64) -> Result<Vec<Rank2Ring>, Rank2Error> {
    if max_n < 2 {
        return Err(Rank2Error::Input(format!("max_N must be at least 2, got {max_n}")));
    }
    let mut out = Vec::new();
    // N = 2d − a ≥ d + 1, so d < max_N.
    for d in 1..max_n {
        for a in (0..d).rev() {
            if 2 * d - a > max_n {
                break;
            }
            out.push(from_d_and_a(d, a)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_examples() {
        let r = solve_rank2(1, 2).unwrap();
        assert_eq!((r.d, r.n, r.p0), (2, 3, 1));
        let r = solve_rank2(0, 4).unwrap();
        assert_eq!((r.d, r.n, r.p0), (2, 4, 2));
        assert!(r.l1_ok());
        let Err(Rank2Error::NonIntegral { disc, bracket, .. }) = solve_rank2(1, 1) else {
            panic!("golden ratio should be non-integral");
        };
        assert_eq!(disc, 5);
        assert!(bracket.contains((1.0 + 5f64.sqrt()) / 2.0));
        assert!(solve_rank2(3, 0).is_err());
    }

    #[test]
    fn minimal_classification() {
        let Minimality::Class(c) = classify_minimal(&solve_rank2(2, 3).unwrap(), 3).unwrap() else { panic!() };
        assert_eq!((c.r_exp, c.s_exp, c.big_d, c.fpdim_c, c.dim_p0), (1, 0, 3, 12, 3));
        let Minimality::Class(c) = classify_minimal(&solve_rank2(3, 4).unwrap(), 2).unwrap() else { panic!() };
        assert_eq!((c.r_exp, c.s_exp, c.fpdim_c), (2, 0, 20));
        assert_eq!(classify_minimal(&solve_rank2(1, 2).unwrap(), 3).unwrap(), Minimality::Impossible);
        assert_eq!(classify_minimal(&solve_rank2(0, 1).unwrap(), 2).unwrap(), Minimality::NotApplicable);
        assert!(classify_minimal(&solve_rank2(1, 2).unwrap(), 4).is_err());
    }

    #[test]
    fn fermat_examples() {
        let v = fermat_filter(5, 4).unwrap();
        assert!(v.admissible);
        let forced = v.forced.unwrap();
        assert_eq!((forced.a, forced.b), (3, 4));
        assert!(!fermat_filter(7, 6).unwrap().admissible);
        assert!(fermat_filter(17, 16).unwrap().admissible);
        assert!(fermat_filter(6, 5).is_err());
        assert!(fermat_filter(5, 7).is_err());
    }

    #[test]
    fn char_constraint_examples() {
        let r = solve_rank2(1, 2).unwrap();
        assert_eq!(char_constraints(&r, false), CharConstraints::Primes(vec![2]));
        let r = solve_rank2(1, 6).unwrap();
        assert_eq!(char_constraints(&r, true), CharConstraints::Primes(vec![3]));
        assert_eq!(char_constraints(&r, false), CharConstraints::Primes(vec![2, 3]));
        assert_eq!(char_constraints(&solve_rank2(0, 4).unwrap(), false), CharConstraints::NotApplicable);
    }

    fn large_char_input(f: u64) -> FeasibilityInput {
        FeasibilityInput {
            char_q: Some(0),
            flags: Flags { pointed: Some(false), id_iso_double_dual: Some(true), ..Flags::default() },
            candidate_fpdim_c: Some(f),
        }
    }

    #[test]
    fn thirty_two_dimensional_example() {
        let rep = feasibility_report(&solve_rank2(2, 3).unwrap(), &large_char_input(32)).unwrap();
        let c = rep.candidate.as_ref().unwrap();
        assert_eq!(c.largechar.m, Some(2));
        assert_eq!(c.largechar.clause.status, ClauseStatus::Satisfied);
        assert_eq!(c.prop32.clause.status, ClauseStatus::Satisfied);
        assert_eq!((c.prop32.n, c.prop32.ell, c.prop32.m), (32, 4, Some(2)));
        assert_eq!(c.proje.big_d, Some(8));
        assert_eq!(rep.verdict, Feasibility::Consistent, "{:?}", rep.violated);
    }

    #[test]
    fn m_equal_one_is_rejected() {
        let rep = feasibility_report(&solve_rank2(0, 4).unwrap(), &large_char_input(16)).unwrap();
        let c = rep.candidate.as_ref().unwrap();
        assert_eq!(c.largechar.m, Some(1));
        assert_eq!(c.largechar.clause.status, ClauseStatus::Violated);
        assert_eq!(rep.verdict, Feasibility::Excluded);
    }

    #[test]
    fn dimension_six_takes_the_minimal_branch() {
        let input = FeasibilityInput { char_q: Some(2), candidate_fpdim_c: Some(6), ..Default::default() };
        let rep = feasibility_report(&solve_rank2(1, 2).unwrap(), &input).unwrap();
        let c = rep.candidate.as_ref().unwrap();
        assert!(c.proje.x_projective);
        assert_eq!(c.prime_split, Some((3, 2)));
        assert_eq!(c.p4.status, ClauseStatus::Satisfied);
        assert_eq!(c.fermat.status, ClauseStatus::Satisfied);
        assert_eq!(rep.verdict, Feasibility::Consistent, "{:?}", rep.violated);
        // In characteristic 3 the same data are excluded.
        let input = FeasibilityInput { char_q: Some(3), ..input };
        assert_eq!(feasibility_report(&solve_rank2(1, 2).unwrap(), &input).unwrap().verdict, Feasibility::Excluded);
    }

    #[test]
    fn enumeration_examples() {
        let small: Vec<(u64, u64)> = enumerate_rank2(4).unwrap().iter().map(|r| (r.d, r.a)).collect();
        assert_eq!(small, [(1, 0), (2, 1), (2, 0), (3, 2)]);
        assert_eq!(enumerate_rank2(2).unwrap().len(), 1);
        assert_eq!(enumerate_rank2(10).unwrap().len(), 25);
        assert!(enumerate_rank2(1).is_err());
    }
}
