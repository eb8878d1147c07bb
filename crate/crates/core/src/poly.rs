//! Integer polynomials, Sturm chains and exact real-root bracketing.
//!
//! Coefficients are stored in ascending order of degree. All root counting is
//! exact: evaluation at rational points is done on the homogenized numerator,
//! and remainder sequences are kept in `Z[z]` by pseudo-division rescaled by a
//! positive factor, which preserves every sign the Sturm theorem relies on.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::linalg::make_primitive;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl Serialize for IntPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::json::serialize_big_vec(&self.coeffs, s)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

/// Real roots counted without and with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RealRootCount {
    pub distinct: usize,
    pub with_multiplicity: usize,
}

/// Location of the largest real root `ρ`: `ρ ∈ (ceil - 1, ceil]`, and
/// `exact` tells whether `ρ = ceil`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LargestRoot {
    pub ceil: BigInt,
    pub exact: bool,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![BigInt::one()] }
    }

    /// `(z - a)^n`.
    pub fn linear_power(a: &BigInt, n: usize) -> Self {
        let lin = Self::new(vec![-a.clone(), BigInt::one()]);
        (0..n).fold(Self::one(), |acc, _| acc.mul(&lin))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * z + c)
    }

    /// Sign of `p(num/den)` for `den > 0`.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let (num, den) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        // Σ c_i num^i den^{n-i}, Horner in num with den powers accumulated.
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * num + c * &den_pow;
            if i > 0 {
                den_pow *= den;
            }
        }
        sign(&acc)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_default();
        Self::new((0..n).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Division by `(z - a)`: returns quotient and remainder `p(a)`.
    pub fn synthetic_division(&self, a: &BigInt) -> (Self, BigInt) {
        if self.is_zero() {
            return (Self::zero(), BigInt::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![BigInt::zero(); n - 1];
        let mut carry = BigInt::zero();
        for i in (0..n).rev() {
            let v = &self.coeffs[i] + &carry * a;
            if i == 0 {
                return (Self::new(q), v);
            }
            q[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Content-free associate with positive leading coefficient.
    pub fn primitive(&self) -> Self {
        let mut c = self.coeffs.clone();
        make_primitive(&mut c);
        if c.last().is_some_and(Signed::is_negative) {
            c.iter_mut().for_each(|x| *x = -&*x);
        }
        Self::new(c)
    }

    /// A positive multiple of the remainder of `self` by `divisor` over `Q`,
    /// kept in `Z[z]`.
    pub fn positive_pseudo_rem(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let db = divisor.degree();
        let lb = divisor.leading();
        let mut r = self.clone();
        let mut steps = 0u32;
        while !r.is_zero() && r.degree() >= db {
            let shift = r.degree() - db;
            let lr = r.leading();
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lb).collect();
            for (i, c) in divisor.coeffs.iter().enumerate() {
                next[i + shift] -= &lr * c;
            }
            r = Self::new(next);
            steps += 1;
        }
        // r = lb^steps · rem; flip if that factor is negative.
        if lb.is_negative() && steps % 2 == 1 {
            r = r.neg();
        }
        let mut c = r.coeffs;
        make_primitive(&mut c);
        Self::new(c)
    }

    /// Exact division in `Z[z]`, `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let db = divisor.degree();
        let lb = divisor.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.degree() - db + 1];
        for shift in (0..q.len()).rev() {
            let lead = &r[shift + db];
            let (c, rem) = lead.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                r[i + shift] -= &c * d;
            }
            q[shift] = c;
        }
        r.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    /// Greatest common divisor up to a constant factor, returned primitive.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.positive_pseudo_rem(&b);
            a = b;
            b = r;
        }
        a.primitive()
    }

    pub fn square_free_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.primitive().div_exact(&g).expect("gcd divides the polynomial")
    }

    /// Sturm chain `p, p', -rem(p, p'), …` up to positive factors.
    pub fn sturm_chain(&self) -> Vec<Self> {
        let mut chain = vec![self.clone()];
        if self.degree() == 0 {
            return chain;
        }
        chain.push(self.derivative());
        loop {
            let n = chain.len();
            let r = chain[n - 2].positive_pseudo_rem(&chain[n - 1]);
            if r.is_zero() {
                return chain;
            }
            chain.push(r.neg());
        }
    }

    /// Number of distinct real roots.
    pub fn distinct_real_roots(&self) -> usize {
        assert!(!self.is_zero(), "root count of the zero polynomial");
        if self.degree() == 0 {
            return 0;
        }
        let chain = self.square_free_part().sturm_chain();
        variations_at_neg_infinity(&chain) - variations_at_pos_infinity(&chain)
    }

    /// Distinct and multiplicity-weighted real root counts. If `G_0 = p` and
    /// `G_{t+1} = gcd(G_t, G_t')`, then `G_t` has every root of multiplicity
    /// `m > t` with multiplicity `m - t`, so the weighted count is
    /// `Σ_t #distinct real roots of G_t`.
    pub fn real_roots(&self) -> RealRootCount {
        let distinct = self.distinct_real_roots();
        let mut total = 0;
        let mut g = self.primitive();
        while g.degree() > 0 {
            total += g.distinct_real_roots();
            g = g.gcd(&g.derivative());
        }
        RealRootCount { distinct, with_multiplicity: total }
    }

    /// Roots with positive imaginary part, with multiplicity.
    pub fn complex_pairs(&self) -> usize {
        (self.degree() - self.real_roots().with_multiplicity) / 2
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots_in(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let chain = self.square_free_part().sturm_chain();
        count_in(&chain, lo, hi)
    }

    /// Integer bound `B` with every real root in `(-B, B)`.
    pub fn root_bound(&self) -> BigInt {
        let lead = self.leading().abs();
        let max = self.coeffs[..self.degree()].iter().map(|c| c.abs()).max().unwrap_or_default();
        // Cauchy: |z| < 1 + max|c_i| / |c_n|
        BigInt::one() + max.div_ceil(&lead) + BigInt::one()
    }

    /// Largest real root, located to the integer interval containing it.
    pub fn largest_real_root(&self) -> Option<LargestRoot> {
        if self.is_zero() || self.degree() == 0 {
            return None;
        }
        let chain = self.square_free_part().sturm_chain();
        let bound = self.root_bound();
        let hi = BigRational::from_integer(bound.clone());
        let above = |n: &BigInt| count_in(&chain, &BigRational::from_integer(n.clone()), &hi);
        let mut lo = -bound.clone();
        if above(&lo) == 0 {
            return None;
        }
        // Invariant: count(lo, B] ≥ 1, count(top, B] = 0.
        let mut top = bound;
        while &top - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &top).div_floor(&BigInt::from(2));
            if above(&mid) == 0 {
                top = mid;
            } else {
                lo = mid;
            }
        }
        let exact = self.eval(&top).is_zero();
        Some(LargestRoot { ceil: top, exact })
    }

    /// Interval `(lo, hi]` of width at most `width` containing the largest
    /// real root and no larger one. When the root is not an integer the
    /// closed interval is also shrunk until it holds no integer.
    pub fn largest_root_bracket(&self, width: &BigRational) -> Option<(BigRational, BigRational)> {
        let top = self.largest_real_root()?;
        let one = BigRational::one();
        let mut hi = BigRational::from_integer(top.ceil.clone());
        let mut lo = &hi - &one;
        if top.exact {
            return Some((lo, hi));
        }
        let chain = self.square_free_part().sturm_chain();
        let bound = BigRational::from_integer(self.root_bound());
        let two = BigRational::from_integer(BigInt::from(2));
        let holds_integer = |lo: &BigRational, hi: &BigRational| lo.ceil() <= hi.floor();
        while &(&hi - &lo) > width || holds_integer(&lo, &hi) {
            let mid = (&lo + &hi) / &two;
            if count_in(&chain, &mid, &bound) == 0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some((lo, hi))
    }

    /// Shrinks an interval `(lo, hi]` holding exactly one root of `self`
    /// until its width is at most `width`.
    pub fn refine_root(&self, mut lo: BigRational, mut hi: BigRational, width: &BigRational) -> (BigRational, BigRational) {
        let chain = self.square_free_part().sturm_chain();
        debug_assert_eq!(count_in(&chain, &lo, &hi), 1);
        let two = BigRational::from_integer(BigInt::from(2));
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / &two;
            if count_in(&chain, &lo, &mid) == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        (lo, hi)
    }
}

fn sign(x: &BigInt) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn count_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn variations_at_pos_infinity(chain: &[IntPolynomial]) -> usize {
    count_variations(chain.iter().map(|p| sign(&p.leading())))
}

fn variations_at_neg_infinity(chain: &[IntPolynomial]) -> usize {
    count_variations(chain.iter().map(|p| {
        let s = sign(&p.leading());
        if p.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }))
}

fn variations_at(chain: &[IntPolynomial], x: &BigRational) -> usize {
    count_variations(chain.iter().map(|p| p.sign_at(x)))
}

fn count_in(chain: &[IntPolynomial], lo: &BigRational, hi: &BigRational) -> usize {
    variations_at(chain, lo).saturating_sub(variations_at(chain, hi))
}

/// Rational interval as a pair of decimals, for reports.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
