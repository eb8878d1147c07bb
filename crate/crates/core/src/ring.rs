//! Z₊-rings given by structure constants.
//!
//! A ring of rank `r` has basis `b_0, …, b_{r-1}` and products
//! `b_i b_j = Σ_k N_{ij}^k b_k` with nonnegative integer constants. One basis
//! element is the unit. Constants are stored flat, indexed `(i * r + j) * r + k`.
//!
//! Multiplication matrices follow a single convention throughout the crate:
//! for an element `x`, entry `(j, k)` of [`RingPresentation::mult_matrix`] is
//! `Σ_i x_i N_{ij}^k`, the coefficient of `b_k` in `x · b_j`. With `d` the
//! FP dimension column vector and `p` the left Perron row vector this gives
//! `M d = FPdim(x) d` and `p M = FPdim(x) p`. Row vectors transform as
//! `v ↦ v M` under left multiplication by `x`, so
//! `mult_matrix(x·y) = mult_matrix(y) · mult_matrix(x)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;

/// Permutation search for canonical forms is exhaustive over the non-unit
/// basis, so it is only offered up to this rank.
pub const MAX_CANONICAL_RANK: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("malformed ring data: {0}")]
    Shape(String),
    #[error("element has length {found}, ring rank is {rank}")]
    ElementLength { rank: usize, found: usize },
    #[error("element has a negative coordinate at index {0}")]
    NegativeCoordinate(usize),
    #[error("canonical form is only computed up to rank {MAX_CANONICAL_RANK} (got {0})")]
    CanonicalRank(usize),
}

/// Structure constants of a unital Z₊-ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingPresentation {
    rank: usize,
    labels: Vec<String>,
    unit: usize,
    constants: Vec<u64>,
}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingPresentation")
            .field("rank", &self.rank)
            .field("unit", &self.unit)
            .field("constants", &self.constants)
            .finish()
    }
}

/// An element `Σ m_i b_i` with integer coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub coords: Vec<BigInt>,
}

impl RingElement {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self { coords }
    }

    pub fn from_u64(coords: &[u64]) -> Self {
        Self { coords: coords.iter().map(|&c| BigInt::from(c)).collect() }
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut coords = vec![BigInt::zero(); rank];
        coords[i] = BigInt::from(1);
        Self { coords }
    }

    pub fn all_ones(rank: usize) -> Self {
        Self { coords: vec![BigInt::from(1); rank] }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        RingElement {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Unit,
    Associativity,
    Transitivity,
}

/// First lexicographic failure of an axiom check. `indices` holds `(j, k)`
/// for the unit and transitivity laws and `(i, j, k, l)` for associativity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub indices: Vec<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        let axiom = match self.axiom {
            Axiom::Unit => "unit law",
            Axiom::Associativity => "associativity",
            Axiom::Transitivity => "transitivity",
        };
        write!(f, "{axiom} fails at ({})", idx.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub unit_ok: bool,
    pub assoc_ok: bool,
    pub transitive_ok: bool,
    pub first_violation: Option<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.unit_ok && self.assoc_ok && self.transitive_ok
    }
}

impl RingPresentation {
    /// Builds a ring from nested constants indexed `[i][j][k]`. Only the shape
    /// is checked here; the axioms are checked by [`RingPresentation::validate`].
    pub fn new(
        labels: Vec<String>,
        unit: usize,
        constants: &[Vec<Vec<u64>>],
    ) -> Result<Self, RingError> {
        let rank = constants.len();
        if rank == 0 {
            return Err(RingError::Shape("rank must be positive".into()));
        }
        let mut flat = Vec::with_capacity(rank * rank * rank);
        for (i, plane) in constants.iter().enumerate() {
            if plane.len() != rank {
                return Err(RingError::Shape(format!(
                    "constants[{i}] has {} rows, expected {rank}",
                    plane.len()
                )));
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != rank {
                    return Err(RingError::Shape(format!(
                        "constants[{i}][{j}] has {} entries, expected {rank}",
                        row.len()
                    )));
                }
                flat.extend_from_slice(row);
            }
        }
        Self::from_flat(labels, unit, rank, flat)
    }

    pub fn from_flat(
        labels: Vec<String>,
        unit: usize,
        rank: usize,
        constants: Vec<u64>,
    ) -> Result<Self, RingError> {
        if rank == 0 {
            return Err(RingError::Shape("rank must be positive".into()));
        }
        if constants.len() != rank * rank * rank {
            return Err(RingError::Shape(format!(
                "expected {} constants for rank {rank}, got {}",
                rank * rank * rank,
                constants.len()
            )));
        }
        if labels.len() != rank {
            return Err(RingError::Shape(format!(
                "expected {rank} labels, got {}",
                labels.len()
            )));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(RingError::Shape("labels must be distinct".into()));
        }
        if unit >= rank {
            return Err(RingError::Shape(format!("unit index {unit} out of range for rank {rank}")));
        }
        Ok(Self { rank, labels, unit, constants })
    }

    /// Default labels `1, b1, b2, …` with the unit at index 0.
    pub fn with_default_labels(rank: usize, constants: Vec<u64>) -> Result<Self, RingError> {
        Self::from_flat(default_labels(rank), 0, rank, constants)
    }

    /// Group ring of the cyclic group of order `n`, basis `g^0, …, g^{n-1}`.
    pub fn cyclic_group(n: usize) -> Self {
        let mut c = vec![0u64; n * n * n];
        for i in 0..n {
            for j in 0..n {
                c[(i * n + j) * n + (i + j) % n] = 1;
            }
        }
        let labels = (0..n).map(|i| if i == 0 { "1".to_string() } else { format!("g{i}") }).collect();
        Self::from_flat(labels, 0, n, c).expect("cyclic group ring is well formed")
    }

    /// Rank-2 ring with basis `1, X` and `X² = aX + b`.
    pub fn rank2(a: u64, b: u64) -> Self {
        let c = vec![1, 0, 0, 1, 0, 1, b, a];
        Self::from_flat(vec!["1".into(), "X".into()], 0, 2, c).expect("rank-2 ring is well formed")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn constants(&self) -> &[u64] {
        &self.constants
    }

    /// `N_{ij}^k`.
    #[inline]
    pub fn n(&self, i: usize, j: usize, k: usize) -> u64 {
        self.constants[(i * self.rank + j) * self.rank + k]
    }

    pub fn nested_constants(&self) -> Vec<Vec<Vec<u64>>> {
        let r = self.rank;
        (0..r)
            .map(|i| (0..r).map(|j| (0..r).map(|k| self.n(i, j, k)).collect()).collect())
            .collect()
    }

    pub fn max_constant(&self) -> u64 {
        self.constants.iter().copied().max().unwrap_or(0)
    }

    pub fn validate(&self) -> ValidationReport {
        let unit = self.first_unit_violation();
        let assoc = self.first_assoc_violation();
        let trans = self.first_transitivity_violation();
        ValidationReport {
            unit_ok: unit.is_none(),
            assoc_ok: assoc.is_none(),
            transitive_ok: trans.is_none(),
            first_violation: unit.or(assoc).or(trans),
        }
    }

    fn first_unit_violation(&self) -> Option<Violation> {
        let u = self.unit;
        for j in 0..self.rank {
            for k in 0..self.rank {
                let expected = u64::from(j == k);
                if self.n(u, j, k) != expected || self.n(j, u, k) != expected {
                    return Some(Violation { axiom: Axiom::Unit, indices: vec![j, k] });
                }
            }
        }
        None
    }

    fn first_assoc_violation(&self) -> Option<Violation> {
        let r = self.rank;
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let mut lhs: u128 = 0;
                        let mut rhs: u128 = 0;
                        for m in 0..r {
                            lhs += u128::from(self.n(i, j, m)) * u128::from(self.n(m, k, l));
                            rhs += u128::from(self.n(j, k, m)) * u128::from(self.n(i, m, l));
                        }
                        if lhs != rhs {
                            return Some(Violation {
                                axiom: Axiom::Associativity,
                                indices: vec![i, j, k, l],
                            });
                        }
                    }
                }
            }
        }
        None
    }

    /// For each `(j, k)` some `i` with `N_{ij}^k > 0`.
    fn first_transitivity_violation(&self) -> Option<Violation> {
        let r = self.rank;
        for j in 0..r {
            for k in 0..r {
                if (0..r).all(|i| self.n(i, j, k) == 0) {
                    return Some(Violation { axiom: Axiom::Transitivity, indices: vec![j, k] });
                }
            }
        }
        None
    }

    /// Two-sided variant: additionally, for each `(j, k)` some `i` with
    /// `N_{ji}^k > 0`.
    pub fn is_two_sided_transitive(&self) -> bool {
        let r = self.rank;
        self.first_transitivity_violation().is_none()
            && (0..r).all(|j| (0..r).all(|k| (0..r).any(|i| self.n(j, i, k) > 0)))
    }

    fn check_len(&self, x: &RingElement) -> Result<(), RingError> {
        if x.len() != self.rank {
            return Err(RingError::ElementLength { rank: self.rank, found: x.len() });
        }
        Ok(())
    }

    pub fn unit_element(&self) -> RingElement {
        RingElement::basis(self.rank, self.unit)
    }

    pub fn multiply(&self, x: &RingElement, y: &RingElement) -> Result<RingElement, RingError> {
        self.check_len(x)?;
        self.check_len(y)?;
        let r = self.rank;
        let mut out = vec![BigInt::zero(); r];
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let xy = xi * yj;
                for (k, slot) in out.iter_mut().enumerate() {
                    let c = self.n(i, j, k);
                    if c != 0 {
                        *slot += &xy * c;
                    }
                }
            }
        }
        Ok(RingElement::new(out))
    }

    /// Entry `(j, k)` is `Σ_i x_i N_{ij}^k`; see the module docs.
    pub fn mult_matrix(&self, x: &RingElement) -> Result<Matrix, RingError> {
        self.check_len(x)?;
        let r = self.rank;
        let mut m = Matrix::zeros(r, r);
        for (i, xi) in x.coords.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..r {
                for k in 0..r {
                    let c = self.n(i, j, k);
                    if c != 0 {
                        m[(j, k)] += xi * c;
                    }
                }
            }
        }
        Ok(m)
    }

    /// Whether `1 + x + … + xⁿ` has full positive support for some `n`,
    /// returning the least such `n`.
    ///
    /// With nonnegative coefficients the support of `1 + x + … + x^{n+1}` is
    /// `{u} ∪ supp(x)·S_n`, where `S_n` is the support at step `n`. The
    /// sequence is increasing, so it either fills up or stalls within `r`
    /// steps.
    pub fn is_zplus_generator(&self, x: &RingElement) -> Result<Option<usize>, RingError> {
        self.check_len(x)?;
        if let Some(i) = x.coords.iter().position(|c| c.is_negative()) {
            return Err(RingError::NegativeCoordinate(i));
        }
        let r = self.rank;
        let gens: Vec<usize> = (0..r).filter(|&i| !x.coords[i].is_zero()).collect();
        let mut support = vec![false; r];
        support[self.unit] = true;
        let mut n = 0;
        loop {
            if support.iter().all(|&s| s) {
                return Ok(Some(n));
            }
            let mut next = vec![false; r];
            next[self.unit] = true;
            for &i in &gens {
                for j in (0..r).filter(|&j| support[j]) {
                    for (k, slot) in next.iter_mut().enumerate() {
                        if self.n(i, j, k) > 0 {
                            *slot = true;
                        }
                    }
                }
            }
            if next == support {
                return Ok(None);
            }
            support = next;
            n += 1;
        }
    }

    /// Relabels the basis: new index `a` is old index `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> RingPresentation {
        let r = self.rank;
        let mut c = vec![0u64; r * r * r];
        for a in 0..r {
            for b in 0..r {
                for k in 0..r {
                    c[(a * r + b) * r + k] = self.n(perm[a], perm[b], perm[k]);
                }
            }
        }
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        let unit = perm.iter().position(|&p| p == self.unit).expect("perm is a permutation");
        RingPresentation { rank: r, labels, unit, constants: c }
    }

    /// Canonical form: unit moved to index 0, then the relabeling of the
    /// remaining basis with the lexicographically least flattened constant
    /// tensor. Ties keep the earliest permutation in lexicographic order.
    pub fn canonical(&self) -> Result<RingPresentation, RingError> {
        if self.rank > MAX_CANONICAL_RANK {
            return Err(RingError::CanonicalRank(self.rank));
        }
        let rest: Vec<usize> = (0..self.rank).filter(|&i| i != self.unit).collect();
        let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
        for_each_permutation(&rest, |tail| {
            let mut perm = Vec::with_capacity(self.rank);
            perm.push(self.unit);
            perm.extend_from_slice(tail);
            let flat = permuted_constants(self, &perm);
            if best.as_ref().is_none_or(|(b, _)| flat < *b) {
                best = Some((flat, perm));
            }
        });
        let (_, perm) = best.expect("at least one permutation");
        Ok(self.permuted(&perm))
    }
}

pub(crate) fn default_labels(rank: usize) -> Vec<String> {
    (0..rank).map(|i| if i == 0 { "1".to_string() } else { format!("b{i}") }).collect()
}

fn permuted_constants(ring: &RingPresentation, perm: &[usize]) -> Vec<u64> {
    let r = ring.rank;
    let mut c = Vec::with_capacity(r * r * r);
    for a in 0..r {
        for b in 0..r {
            for k in 0..r {
                c.push(ring.n(perm[a], perm[b], perm[k]));
            }
        }
    }
    c
}

/// Visits permutations of `items` in lexicographic order of positions.
pub(crate) fn for_each_permutation(items: &[usize], mut f: impl FnMut(&[usize])) {
    fn rec(pool: &mut Vec<usize>, acc: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if pool.is_empty() {
            f(acc);
            return;
        }
        for idx in 0..pool.len() {
            let v = pool.remove(idx);
            acc.push(v);
            rec(pool, acc, f);
            acc.pop();
            pool.insert(idx, v);
        }
    }
    let mut pool = items.to_vec();
    rec(&mut pool, &mut Vec::new(), &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(v: &[i64]) -> RingElement {
        RingElement::new(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn x_squared_four_is_valid() {
        let ring = RingPresentation::rank2(0, 4);
        assert!(ring.validate().is_valid());
    }

    #[test]
    fn cyclic_three_is_valid() {
        assert!(RingPresentation::cyclic_group(3).validate().is_valid());
    }

    #[test]
    fn empty_square_breaks_transitivity_at_one_zero() {
        let ring = RingPresentation::rank2(0, 0);
        let report = ring.validate();
        assert!(report.unit_ok && report.assoc_ok);
        assert!(!report.transitive_ok);
        assert_eq!(
            report.first_violation,
            Some(Violation { axiom: Axiom::Transitivity, indices: vec![1, 0] })
        );
    }

    #[test]
    fn wrong_shape_is_a_shape_error() {
        let bad = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1]]];
        let err = RingPresentation::new(default_labels(2), 0, &bad).unwrap_err();
        assert!(matches!(err, RingError::Shape(_)));
        let err = RingPresentation::from_flat(default_labels(2), 0, 2, vec![0; 7]).unwrap_err();
        assert!(matches!(err, RingError::Shape(_)));
        let err = RingPresentation::from_flat(default_labels(2), 2, 2, vec![0; 8]).unwrap_err();
        assert!(matches!(err, RingError::Shape(_)));
    }

    #[test]
    fn broken_unit_is_reported_first() {
        // N_{01}^0 = 1 breaks the unit law at (1, 0).
        let ring =
            RingPresentation::with_default_labels(2, vec![1, 0, 1, 1, 0, 1, 4, 0]).unwrap();
        let report = ring.validate();
        assert!(!report.unit_ok);
        assert_eq!(report.first_violation.unwrap().axiom, Axiom::Unit);
    }

    #[test]
    fn non_associative_constants_are_caught() {
        // (XX)Y = Y but X(XY) = X.
        let r = 3;
        let mut c = vec![0u64; 27];
        let set = |c: &mut Vec<u64>, i: usize, j: usize, k: usize, v: u64| c[(i * r + j) * r + k] = v;
        for j in 0..3 {
            set(&mut c, 0, j, j, 1);
            set(&mut c, j, 0, j, 1);
        }
        set(&mut c, 1, 1, 2, 1); // X² = Y
        set(&mut c, 1, 2, 0, 1); // XY = 1
        set(&mut c, 2, 1, 1, 1); // YX = X
        set(&mut c, 2, 2, 2, 1); // Y² = Y
        let ring = RingPresentation::with_default_labels(3, c).unwrap();
        let report = ring.validate();
        assert!(!report.assoc_ok);
        assert_eq!(report.first_violation.unwrap().axiom, Axiom::Associativity);
    }

    #[test]
    fn multiply_examples() {
        let ring = RingPresentation::rank2(0, 4);
        assert_eq!(ring.multiply(&el(&[0, 1]), &el(&[0, 1])).unwrap(), el(&[4, 0]));
        let ring = RingPresentation::rank2(1, 2);
        assert_eq!(ring.multiply(&el(&[0, 1]), &el(&[0, 1])).unwrap(), el(&[2, 1]));
        let y = el(&[3, 5]);
        assert_eq!(ring.multiply(&ring.unit_element(), &y).unwrap(), y);
        assert!(matches!(
            ring.multiply(&el(&[1]), &y),
            Err(RingError::ElementLength { rank: 2, found: 1 })
        ));
    }

    #[test]
    fn mult_matrix_examples() {
        let ring = RingPresentation::rank2(0, 4);
        let m = ring.mult_matrix(&el(&[0, 1])).unwrap();
        assert_eq!(m, Matrix::from_i64(&[&[0, 1], &[4, 0]]));
        // N_1 d = 2 d with d = (1, 2).
        assert_eq!(m.mul_vec(&[BigInt::from(1), BigInt::from(2)]), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(ring.mult_matrix(&ring.unit_element()).unwrap(), Matrix::identity(2));
        let ring = RingPresentation::rank2(2, 3);
        assert_eq!(ring.mult_matrix(&el(&[0, 1])).unwrap(), Matrix::from_i64(&[&[0, 1], &[3, 2]]));
    }

    #[test]
    fn generator_examples() {
        let ring = RingPresentation::rank2(0, 4);
        assert_eq!(ring.is_zplus_generator(&el(&[0, 1])).unwrap(), Some(1));
        assert_eq!(ring.is_zplus_generator(&el(&[1, 0])).unwrap(), None);
        let z3 = RingPresentation::cyclic_group(3);
        assert_eq!(z3.is_zplus_generator(&el(&[0, 1, 0])).unwrap(), Some(2));
        assert_eq!(z3.is_zplus_generator(&el(&[1, 0, 0])).unwrap(), None);
        assert!(matches!(
            z3.is_zplus_generator(&el(&[0, -1, 1])),
            Err(RingError::NegativeCoordinate(1))
        ));
    }

    #[test]
    fn two_sided_transitivity_is_separate() {
        assert!(RingPresentation::cyclic_group(4).is_two_sided_transitive());
        assert!(RingPresentation::rank2(2, 3).is_two_sided_transitive());
    }

    #[test]
    fn canonical_moves_unit_first_and_is_idempotent() {
        let z3 = RingPresentation::cyclic_group(3);
        // Put the unit at index 2.
        let moved = z3.permuted(&[1, 2, 0]);
        assert_eq!(moved.unit(), 2);
        let canon = moved.canonical().unwrap();
        assert_eq!(canon.unit(), 0);
        assert_eq!(canon.canonical().unwrap(), canon);
        assert_eq!(canon.constants(), z3.canonical().unwrap().constants());
    }

    #[test]
    fn permutations_visit_all_orders() {
        let mut seen = Vec::new();
        for_each_permutation(&[1, 2, 3], |p| seen.push(p.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![1, 2, 3]);
        assert_eq!(seen[5], vec![3, 2, 1]);
    }
}
