use std::collections::BTreeSet;

use zplus::enumerate::{enumerate_rings, read_jsonl, verify_catalog, write_jsonl, Cap};
use zplus::RingPresentation;

const R: usize = 3;

fn at(t: &[u64], i: usize, j: usize, k: usize) -> u64 {
    t[(i * R + j) * R + k]
}

fn associative(t: &[u64]) -> bool {
    (0..R).all(|i| {
        (0..R).all(|j| {
            (0..R).all(|k| {
                (0..R).all(|l| {
                    let lhs: u64 = (0..R).map(|m| at(t, i, j, m) * at(t, m, k, l)).sum();
                    let rhs: u64 = (0..R).map(|m| at(t, j, k, m) * at(t, i, m, l)).sum();
                    lhs == rhs
                })
            })
        })
    })
}

fn transitive(t: &[u64]) -> bool {
    (0..R).all(|j| (0..R).all(|k| (0..R).any(|i| at(t, i, j, k) > 0)))
}

/// Right and left Perron vectors of `Σ N_i` by power iteration in floats.
fn perron(t: &[u64], left: bool) -> Vec<f64> {
    let m = |j: usize, k: usize| -> f64 { (0..R).map(|i| at(t, i, j, k) as f64).sum() };
    let mut v = vec![1.0; R];
    for _ in 0..500 {
        let w: Vec<f64> = (0..R)
            .map(|a| (0..R).map(|b| if left { m(b, a) } else { m(a, b) } * v[b]).sum())
            .collect();
        let s: f64 = w.iter().sum();
        v = w.iter().map(|x| x / s).collect();
    }
    v
}

/// FPdim(A) if the ring is integral.
fn integral_fpdim(t: &[u64]) -> Option<u64> {
    let v = perron(t, false);
    let d: Vec<u64> = v.iter().map(|x| (x / v[0]).round() as u64).collect();
    let ok = (0..R).all(|i| (0..R).all(|j| d[i] * d[j] == (0..R).map(|k| at(t, i, j, k) * d[k]).sum::<u64>()));
    if !ok || d[0] != 1 {
        return None;
    }
    let w = perron(t, true);
    let ratios: Vec<f64> = w.iter().map(|x| x / w[0]).collect();
    let scale = (1..=1000u64)
        .find(|&s| ratios.iter().all(|r| ((r * s as f64) - (r * s as f64).round()).abs() < 1e-6))
        .expect("left vector is rational");
    let p: Vec<u64> = ratios.iter().map(|r| (r * scale as f64).round() as u64).collect();
    let g = p.iter().fold(0, |a, &b| num_integer::gcd(a, b));
    Some(p.iter().zip(&d).map(|(a, b)| a / g * b).sum())
}

fn swapped(t: &[u64]) -> Vec<u64> {
    let s = |x: usize| [0, 2, 1][x];
    let mut out = vec![0; t.len()];
    for i in 0..R {
        for j in 0..R {
            for k in 0..R {
                out[(i * R + j) * R + k] = at(t, s(i), s(j), s(k));
            }
        }
    }
    out
}

fn brute_force(max_constant: u64, max_fpdim: u64) -> BTreeSet<Vec<u64>> {
    let free: Vec<usize> = (1..R).flat_map(|i| (1..R).flat_map(move |j| (0..R).map(move |k| (i * R + j) * R + k))).collect();
    let base = max_constant + 1;
    let mut found = BTreeSet::new();
    for code in 0..base.pow(free.len() as u32) {
        let mut t = vec![0u64; R * R * R];
        for x in 0..R {
            t[x * R + x] = 1;
            t[(x * R) * R + x] = 1;
        }
        let mut c = code;
        for &pos in &free {
            t[pos] = c % base;
            c /= base;
        }
        if !associative(&t) || !transitive(&t) {
            continue;
        }
        if integral_fpdim(&t).is_some_and(|f| f <= max_fpdim) {
            let s = swapped(&t);
            found.insert(if s < t { s } else { t });
        }
    }
    found
}

#[test]
fn rank_three_matches_exhaustive_scan() {
    for (c, f) in [(1, 6), (1, 12), (2, 12)] {
        let oracle = brute_force(c, f);
        let cat = enumerate_rings(3, Cap { max_fpdim: Some(f), max_constant: Some(c) }, 0).unwrap();
        let got: BTreeSet<Vec<u64>> = cat.rings.iter().map(|e| e.ring.constants().to_vec()).collect();
        assert_eq!(got.len(), cat.rings.len());
        assert_eq!(got, oracle, "max_constant {c}, max_fpdim {f}");
    }
    // Z/3 and Rep S₃.
    assert_eq!(brute_force(1, 6).len(), 2);
}

#[test]
fn relabelings_collapse_and_catalog_round_trips() {
    let cat = enumerate_rings(3, Cap { max_fpdim: Some(12), max_constant: Some(2) }, 2).unwrap();
    for e in &cat.rings {
        let other = RingPresentation::with_default_labels(3, swapped(e.ring.constants())).unwrap();
        assert_eq!(other.canonical().unwrap().constants(), e.ring.constants());
        assert_eq!(e.ring.canonical().unwrap(), e.ring);
    }
    let mut buf = Vec::new();
    write_jsonl(&cat, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf.clone()).unwrap().lines().count(), cat.rings.len());
    let back = read_jsonl(buf.as_slice()).unwrap();
    assert_eq!(back, cat.rings);
    assert!(verify_catalog(&back).ok());
}
