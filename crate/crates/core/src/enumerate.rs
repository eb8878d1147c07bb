//! Exhaustive search for transitive unital integral Z₊-rings of rank ≤ 3.
//!
//! The unit is basis element 0, so the free constants are `N_{ij}^k` with
//! `i, j ≥ 1`. They are assigned in flat order by a depth-first search.
//! Each associativity identity is checked once its last free constant is
//! set, and a branch is cut as soon as a certified lower bound for the
//! Perron root of `Σ N_i` (that is, `Σ d_i ≤ FPdim(A)`) exceeds the cap.
//! Raising a constant never lowers that root, so the loop over a constant
//! stops at the first value that exceeds it.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::{generator_sweep, BoundsError};
use crate::fpdim::{check_easybound, fpdim_of_valid, integral_data_of_valid, DimensionData};
use crate::json::{BigJson, RingFile};
use crate::ring::{RingError, RingPresentation};

pub const MAX_ENUMERATION_RANK: usize = 3;

#[derive(Debug, Error)]
pub enum EnumerateError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("catalog I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("catalog line {line}: {source}")]
    Parse { line: usize, source: serde_json::Error },
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cap {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_fpdim: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_constant: Option<u64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Metadata {
    /// Free constants, the largest range and the product of the ranges.
    pub free_constants: usize,
    pub constant_bound: u64,
    pub search_space: f64,
    pub nodes: u64,
    pub pruned_associativity: u64,
    pub pruned_perron: u64,
    pub rejected_row_sum: u64,
    pub leaves: u64,
    pub rejected_transitivity: u64,
    pub rejected_non_integral: u64,
    pub rejected_fpdim: u64,
    pub accepted: u64,
    pub duplicates: u64,
}

impl Metadata {
    fn merge(&mut self, o: &Metadata) {
        self.nodes += o.nodes;
        self.pruned_associativity += o.pruned_associativity;
        self.pruned_perron += o.pruned_perron;
        self.rejected_row_sum += o.rejected_row_sum;
        self.leaves += o.leaves;
        self.rejected_transitivity += o.rejected_transitivity;
        self.rejected_non_integral += o.rejected_non_integral;
        self.rejected_fpdim += o.rejected_fpdim;
        self.accepted += o.accepted;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub ring: RingPresentation,
    pub dimension: DimensionData,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    pub rank: usize,
    pub cap: Cap,
    pub rings: Vec<CatalogEntry>,
    pub metadata: Metadata,
}

struct Search {
    r: usize,
    cap_fpdim: Option<f64>,
    /// Upper bound for each free constant, and for each row sum `Σ_k N_{ij}^k`.
    slot_bound: Vec<u64>,
    row_bound: Vec<u64>,
    /// Flat positions of the free constants in assignment order.
    vars: Vec<usize>,
    /// Associativity instances `(i, j, k, l)` to check once variable `t` is set.
    instances_at: Vec<Vec<[usize; 4]>>,
    /// Row `(i, j)` of each variable, as an index into the row-sum table.
    row_of: Vec<usize>,
}

impl Search {
    fn new(r: usize, cap: Cap) -> Self {
        let vars: Vec<usize> = (1..r)
            .flat_map(|i| (1..r).flat_map(move |j| (0..r).map(move |k| (i * r + j) * r + k)))
            .collect();
        let var_index = |pos: usize| vars.iter().position(|&v| v == pos);
        let mut instances_at = vec![Vec::new(); vars.len()];
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    for l in 0..r {
                        let mut last: Option<usize> = None;
                        for m in 0..r {
                            for pos in [(i * r + j) * r + m, (m * r + k) * r + l, (j * r + k) * r + m, (i * r + m) * r + l] {
                                if let Some(t) = var_index(pos) {
                                    last = Some(last.map_or(t, |x: usize| x.max(t)));
                                }
                            }
                        }
                        if let Some(t) = last {
                            instances_at[t].push([i, j, k, l]);
                        }
                    }
                }
            }
        }
        let row_of: Vec<usize> = vars.iter().map(|&pos| pos / r).collect();
        // Every d_k ≥ 1 and Σ d_k ≤ FPdim(A), so d_i ≤ F − (r − 1) and
        // d_i + d_j ≤ F − (r − 2) for i ≠ j. From Σ_k N_{ij}^k d_k = d_i d_j:
        // the row sum is at most d_i d_j and N_{ij}^i ≤ d_j.
        let f = cap.max_fpdim;
        let single = f.map(|f| f.saturating_sub(r as u64 - 1));
        let pair = |i: usize, j: usize| {
            f.map(|f| {
                if i == j {
                    f.saturating_sub(r as u64 - 1).pow(2)
                } else {
                    let s = f.saturating_sub(r as u64 - 2);
                    (s / 2) * (s - s / 2)
                }
            })
        };
        let row_bound: Vec<u64> = (0..r * r).map(|ij| pair(ij / r, ij % r).unwrap_or(u64::MAX)).collect();
        let slot_bound: Vec<u64> = vars
            .iter()
            .map(|&pos| {
                let (i, j, k) = (pos / (r * r), (pos / r) % r, pos % r);
                let from_f = if k == i || k == j { single } else { pair(i, j) };
                match (cap.max_constant, from_f) {
                    (Some(c), Some(b)) => c.min(b),
                    (Some(c), None) => c,
                    (None, Some(b)) => b,
                    (None, None) => unreachable!("a cap is required"),
                }
            })
            .collect();
        Search { r, cap_fpdim: cap.max_fpdim.map(|f| f as f64), slot_bound, row_bound, vars, instances_at, row_of }
    }

    fn initial_tensor(&self) -> Vec<u64> {
        let r = self.r;
        let mut t = vec![0u64; r * r * r];
        for j in 0..r {
            t[(j) * r + j] = 1; // N_{0j}^j
            t[(j * r) * r + j] = 1; // N_{j0}^j
        }
        t
    }

    fn assoc_ok(&self, t: &[u64], [i, j, k, l]: [usize; 4]) -> bool {
        let r = self.r;
        let n = |a: usize, b: usize, c: usize| u128::from(t[(a * r + b) * r + c]);
        let lhs: u128 = (0..r).map(|m| n(i, j, m) * n(m, k, l)).sum();
        let rhs: u128 = (0..r).map(|m| n(j, k, m) * n(i, m, l)).sum();
        lhs == rhs
    }

    /// Certified lower bound for the Perron root of `M_{jk} = Σ_i N_{ij}^k`
    /// by Collatz–Wielandt: `ρ ≥ min_j (Mv)_j / v_j` for any positive `v`.
    fn perron_exceeds_cap(&self, t: &[u64]) -> bool {
        let Some(cap) = self.cap_fpdim else { return false };
        let r = self.r;
        let mut m = vec![0f64; r * r];
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    m[j * r + k] += t[(i * r + j) * r + k] as f64;
                }
            }
        }
        let limit = cap * (1.0 + 1e-9);
        let mut v = vec![1f64; r];
        let mut w = vec![0f64; r];
        for _ in 0..60 {
            let mut lower = f64::INFINITY;
            let mut top = 0f64;
            for j in 0..r {
                w[j] = (0..r).map(|k| m[j * r + k] * v[k]).sum();
                lower = lower.min(w[j] / v[j]);
                top = top.max(w[j]);
            }
            if lower > limit {
                return true;
            }
            for j in 0..r {
                v[j] = w[j] / top;
            }
        }
        false
    }

    fn dfs(&self, t: &mut Vec<u64>, pos: usize, rows: &mut Vec<u64>, meta: &mut Metadata, out: &mut Vec<Vec<u64>>) {
        if pos == self.vars.len() {
            meta.leaves += 1;
            out.push(t.clone());
            return;
        }
        let slot = self.vars[pos];
        let row = self.row_of[pos];
        for v in 0..=self.slot_bound[pos] {
            meta.nodes += 1;
            if rows[row] + v > self.row_bound[row] {
                meta.rejected_row_sum += 1;
                break;
            }
            t[slot] = v;
            if v > 0 && self.perron_exceeds_cap(t) {
                meta.pruned_perron += 1;
                break;
            }
            if !self.instances_at[pos].iter().all(|&inst| self.assoc_ok(t, inst)) {
                meta.pruned_associativity += 1;
                continue;
            }
            rows[row] += v;
            self.dfs(t, pos + 1, rows, meta, out);
            rows[row] -= v;
        }
        t[slot] = 0;
    }

    /// Runs the subtree with the first free constant fixed to `v0`.
    fn subtree(&self, v0: u64) -> (Vec<Vec<u64>>, Metadata) {
        let mut meta = Metadata::default();
        let mut out = Vec::new();
        let mut t = self.initial_tensor();
        let mut rows = vec![0u64; self.r * self.r];
        meta.nodes += 1;
        let (slot, row) = (self.vars[0], self.row_of[0]);
        if v0 > self.row_bound[row] {
            meta.rejected_row_sum += 1;
            return (out, meta);
        }
        t[slot] = v0;
        if v0 > 0 && self.perron_exceeds_cap(&t) {
            meta.pruned_perron += 1;
            return (out, meta);
        }
        if !self.instances_at[0].iter().all(|&inst| self.assoc_ok(&t, inst)) {
            meta.pruned_associativity += 1;
            return (out, meta);
        }
        rows[row] = v0;
        self.dfs(&mut t, 1, &mut rows, &mut meta, &mut out);
        (out, meta)
    }
}

/// All transitive unital integral rings of the given rank within `cap`, one
/// per relabeling class, sorted by canonical flat tensor. `jobs = 0` uses
/// the default thread pool.
pub fn enumerate_rings(rank: usize, cap: Cap, jobs: usize) -> Result<Catalog, EnumerateError> {
    if !(2..=MAX_ENUMERATION_RANK).contains(&rank) {
        return Err(EnumerateError::Unsupported(format!("enumeration supports ranks 2 to {MAX_ENUMERATION_RANK}, got {rank}")));
    }
    if cap.max_fpdim.is_none() && cap.max_constant.is_none() {
        return Err(EnumerateError::Unsupported("at least one of max_fpdim and max_constant is required".into()));
    }
    let search = Search::new(rank, cap);
    let first_values: Vec<u64> = (0..=search.slot_bound[0]).collect();
    let run = || -> Vec<(Vec<Vec<u64>>, Metadata)> { first_values.par_iter().map(|&v| search.subtree(v)).collect() };
    let parts = if jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| EnumerateError::Invariant(format!("thread pool: {e}")))?
            .install(run)
    };

    let mut meta = Metadata {
        free_constants: search.vars.len(),
        constant_bound: search.slot_bound.iter().copied().max().unwrap_or(0),
        search_space: search.slot_bound.iter().map(|&b| (b + 1) as f64).product(),
        ..Metadata::default()
    };
    let mut leaves = Vec::new();
    for (tensors, m) in parts {
        meta.merge(&m);
        leaves.extend(tensors);
    }

    let finish = |t: Vec<u64>| -> Result<Option<(Vec<u64>, CatalogEntry)>, EnumerateError> {
        let ring = RingPresentation::with_default_labels(rank, t)?;
        let report = ring.validate();
        if !report.unit_ok || !report.assoc_ok {
            return Err(EnumerateError::Invariant(format!("search produced an invalid ring {ring:?}")));
        }
        if !report.transitive_ok {
            return Ok(None);
        }
        let dimension = match integral_data_of_valid(&ring) {
            Ok(Some(d)) => d,
            Ok(None) => return Ok(Some((Vec::new(), placeholder(&ring)))),
            Err(e) => return Err(EnumerateError::Invariant(e.to_string())),
        };
        let canon = ring.canonical()?;
        Ok(Some((canon.constants().to_vec(), CatalogEntry { ring: canon, dimension })))
    };
    let finished: Vec<Option<(Vec<u64>, CatalogEntry)>> = leaves.into_par_iter().map(finish).collect::<Result<_, _>>()?;

    let mut seen = BTreeSet::new();
    let mut rings = Vec::new();
    for item in finished {
        let Some((key, entry)) = item else {
            meta.rejected_transitivity += 1;
            continue;
        };
        if key.is_empty() {
            meta.rejected_non_integral += 1;
            continue;
        }
        if cap.max_fpdim.is_some_and(|f| entry.dimension.fpdim_a > BigInt::from(f)) {
            meta.rejected_fpdim += 1;
            continue;
        }
        meta.accepted += 1;
        if seen.insert(key.clone()) {
            rings.push((key, entry));
        } else {
            meta.duplicates += 1;
        }
    }
    rings.sort_by(|a, b| a.0.cmp(&b.0));
    // Dimension data for the canonical relabeling.
    let rings = rings
        .into_iter()
        .map(|(_, e)| -> Result<CatalogEntry, EnumerateError> {
            let dimension = fpdim_of_valid(&e.ring).map_err(|err| EnumerateError::Invariant(err.to_string()))?;
            Ok(CatalogEntry { ring: e.ring, dimension })
        })
        .collect::<Result<_, _>>()?;
    Ok(Catalog { rank, cap, rings, metadata: meta })
}

fn placeholder(ring: &RingPresentation) -> CatalogEntry {
    CatalogEntry {
        ring: ring.clone(),
        dimension: DimensionData { d: Vec::new(), p: Vec::new(), fpdim_a: BigInt::default(), integral: false },
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CatalogLine {
    ring: RingFile,
    dimension: DimensionLine,
}

#[derive(Debug, Serialize, Deserialize)]
struct DimensionLine {
    d: Vec<BigJson>,
    p: Vec<BigJson>,
    fpdim: BigJson,
    integral: bool,
}

/// One JSON object per line: `{"ring": …, "dimension": {"d", "p", "fpdim", "integral"}}`.
pub fn write_jsonl<W: Write>(catalog: &Catalog, mut w: W) -> std::io::Result<()> {
    for e in &catalog.rings {
        let line = CatalogLine {
            ring: RingFile::from(&e.ring),
            dimension: DimensionLine {
                d: e.dimension.d.iter().cloned().map(BigJson).collect(),
                p: e.dimension.p.iter().cloned().map(BigJson).collect(),
                fpdim: BigJson(e.dimension.fpdim_a.clone()),
                integral: e.dimension.integral,
            },
        };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<CatalogEntry>, EnumerateError> {
    let mut out = Vec::new();
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: CatalogLine = serde_json::from_str(&line).map_err(|source| EnumerateError::Parse { line: n + 1, source })?;
        let ring = parsed.ring.to_ring()?;
        let dl = parsed.dimension;
        let dimension = DimensionData {
            d: dl.d.into_iter().map(|x| x.0).collect(),
            p: dl.p.into_iter().map(|x| x.0).collect(),
            fpdim_a: dl.fpdim.0,
            integral: dl.integral,
        };
        out.push(CatalogEntry { ring, dimension });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogViolation {
    pub ring_index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    pub property: String,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CatalogVerification {
    pub rings_checked: usize,
    pub generators_checked: usize,
    pub violations: Vec<CatalogViolation>,
}

impl CatalogVerification {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every property that must hold on an integral ring: stored dimension data
/// match a fresh computation, `N | Q(d)` and the eigenvalue bounds for each
/// basis generator and `Σ b_i`, the easy bound, and `FPdim(A) ≥ Σ d_i`.
pub fn verify_catalog(entries: &[CatalogEntry]) -> CatalogVerification {
    let per_ring: Vec<(usize, Vec<CatalogViolation>)> = entries.par_iter().enumerate().map(|(idx, e)| verify_entry(idx, e)).collect();
    let mut out = CatalogVerification { rings_checked: entries.len(), ..Default::default() };
    for (gens, vs) in per_ring {
        out.generators_checked += gens;
        out.violations.extend(vs);
    }
    out
}

fn verify_entry(idx: usize, e: &CatalogEntry) -> (usize, Vec<CatalogViolation>) {
    let mut vs = Vec::new();
    let mut push = |element: Option<String>, property: &str, detail: String| {
        vs.push(CatalogViolation { ring_index: idx, element, property: property.into(), detail })
    };
    let ring = &e.ring;
    if let Some(v) = ring.validate().first_violation {
        push(None, "valid", v.to_string());
        return (0, vs);
    }
    let data = match fpdim_of_valid(ring) {
        Ok(d) => d,
        Err(err) => {
            push(None, "integral", err.to_string());
            return (0, vs);
        }
    };
    if data != e.dimension {
        push(None, "dimension_data", "stored dimension data differ from a fresh computation".into());
    }
    for v in check_easybound(ring, &data) {
        push(None, "easybound", format!("d_{} p_{} < N_{{{}{}}}^{} p_{}", v.j, v.k, v.j, v.i, v.k, v.i));
    }
    let sum_d: BigInt = data.d.iter().sum();
    if data.fpdim_a < sum_d {
        push(None, "fpdim_ge_sum_d", format!("FPdim(A) = {} < Σ d_i = {sum_d}", data.fpdim_a));
    }
    let mut gens = 0;
    match generator_sweep(ring, &data) {
        Ok(sweep) => {
            for entry in sweep {
                let Some(rep) = entry.report else { continue };
                gens += 1;
                for (ok, name) in [(rep.ineq_ii_ok, "bound_ii"), (rep.ineq_iii_ok, "bound_iii"), (rep.weak_ok, "bound_weak")] {
                    if !ok {
                        push(Some(entry.element.clone()), name, format!("d = {}, N = {}, s = {}", rep.d, rep.n, rep.s));
                    }
                }
            }
        }
        Err(BoundsError::Invariant(msg)) => push(None, "divisibility", msg),
        Err(err) => push(None, "bounds", err.to_string()),
    }
    (gens, vs)
}
