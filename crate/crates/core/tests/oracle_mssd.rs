//! Brute-force oracle for the enumeration engine: filter every one of the
//! |R|^|R| image tables by the defining identities, with no pruning or
//! propagation, and require the solution set to match the backtracking
//! search byte-for-byte.
//!
//! The full 8^8 scan over the order-8 fixture runs in seconds with the
//! early-exit pair ordering below; its counts are committed as golden
//! constants at the bottom.

use skewsemi::maps::{enumerate_automorphisms, RingMap};
use skewsemi::ring::{Ring, TableRing};
use skewsemi::search::{enumerate_generalized, enumerate_mssd, SearchConfig};

fn ring(lit: &str) -> Ring {
    Ring::new(lit.parse().unwrap()).unwrap()
}

/// All (x, y, xy) triples, low indices first so that odometer scans fail on
/// slow-changing digits as early as possible.
fn pair_schedule(t: &TableRing) -> Vec<(usize, usize, usize)> {
    let n = t.order();
    let mut pairs = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            pairs.push((x, y, t.mul(x, y)));
        }
    }
    pairs.sort_by_key(|&(x, y, _)| x.max(y));
    pairs
}

/// Filters every image table by the three skew-semi-derivation clauses.
fn oracle_mssd_tables(t: &TableRing, g: &[usize], alpha: &[usize]) -> Vec<Vec<usize>> {
    let n = t.order();
    let pairs = pair_schedule(t);
    let mut d = vec![0usize; n];
    let mut out = Vec::new();
    'next: loop {
        for &(x, y, p) in &pairs {
            let rhs1 = t.add(t.mul(d[x], g[y]), t.mul(alpha[x], d[y]));
            if d[p] != rhs1 {
                if !advance(&mut d, n) {
                    break 'next;
                }
                continue 'next;
            }
            let rhs2 = t.add(t.mul(d[x], alpha[y]), t.mul(g[x], d[y]));
            if d[p] != rhs2 {
                if !advance(&mut d, n) {
                    break 'next;
                }
                continue 'next;
            }
        }
        if (0..n).all(|x| d[g[x]] == g[d[x]]) && d[t.zero()] == t.zero() {
            out.push(d.clone());
        }
        if !advance(&mut d, n) {
            break;
        }
    }
    out.sort();
    out
}

/// Filters every image table by the generalized clauses for a fixed d.
fn oracle_generalized_tables(
    t: &TableRing,
    g: &[usize],
    alpha: &[usize],
    d: &[usize],
) -> Vec<Vec<usize>> {
    let n = t.order();
    let pairs = pair_schedule(t);
    let mut f = vec![0usize; n];
    let mut out = Vec::new();
    'next: loop {
        for &(x, y, p) in &pairs {
            let rhs1 = t.add(t.mul(f[x], g[y]), t.mul(alpha[x], d[y]));
            if f[p] != rhs1 {
                if !advance(&mut f, n) {
                    break 'next;
                }
                continue 'next;
            }
            let rhs2 = t.add(t.mul(d[x], alpha[y]), t.mul(g[x], f[y]));
            if f[p] != rhs2 {
                if !advance(&mut f, n) {
                    break 'next;
                }
                continue 'next;
            }
        }
        if (0..n).all(|x| f[g[x]] == g[f[x]]) && f[t.zero()] == t.zero() {
            out.push(f.clone());
        }
        if !advance(&mut f, n) {
            break;
        }
    }
    out.sort();
    out
}

/// Base-n odometer increment; false when the table space is exhausted.
fn advance(d: &mut [usize], n: usize) -> bool {
    for digit in d.iter_mut().rev() {
        *digit += 1;
        if *digit < n {
            return true;
        }
        *digit = 0;
    }
    false
}

fn search_images(r: &Ring, g: &RingMap, alpha: &RingMap) -> Vec<Vec<usize>> {
    let cfg = SearchConfig::new(r.spec().clone());
    let report = enumerate_mssd(r, g, alpha, &cfg, None).unwrap();
    assert!(!report.partial);
    report.maps_found.into_iter().map(|m| m.images).collect()
}

#[test]
fn order_8_identity_pair_matches_brute_force() {
    let r = ring("ut2:zn:2");
    let t = r.table().unwrap();
    let id: Vec<usize> = (0..8).collect();
    let oracle = oracle_mssd_tables(t, &id, &id);
    let found = search_images(&r, &RingMap::identity(&r), &RingMap::identity(&r));
    assert_eq!(found, oracle);
    assert_eq!(oracle.len(), GOLDEN_UT2_IDENTITY_COUNT);
}

#[test]
fn order_8_twisted_alpha_matches_brute_force() {
    let r = ring("ut2:zn:2");
    let t = r.table().unwrap();
    let id: Vec<usize> = (0..8).collect();
    let autos = enumerate_automorphisms(&r).unwrap();
    let twisted = autos
        .iter()
        .find(|a| a.images().unwrap() != id.as_slice())
        .expect("the non-identity automorphism");
    let oracle = oracle_mssd_tables(t, &id, twisted.images().unwrap());
    let found = search_images(&r, &RingMap::identity(&r), twisted);
    assert_eq!(found, oracle);
    assert_eq!(oracle.len(), GOLDEN_UT2_TWISTED_COUNT);
}

#[test]
fn order_4_oracle_equivalence_over_all_automorphism_pairs() {
    let r = ring("prod(zn:2,zn:2)");
    let t = r.table().unwrap();
    let autos = enumerate_automorphisms(&r).unwrap();
    for g in &autos {
        for alpha in &autos {
            let oracle = oracle_mssd_tables(t, g.images().unwrap(), alpha.images().unwrap());
            let found = search_images(&r, g, alpha);
            assert_eq!(found, oracle, "g={} alpha={}", g.describe(), alpha.describe());
        }
    }
}

#[test]
fn order_8_generalized_search_matches_brute_force() {
    let r = ring("ut2:zn:2");
    let t = r.table().unwrap();
    let id: Vec<usize> = (0..8).collect();
    let zero = vec![t.zero(); 8];
    let oracle = oracle_generalized_tables(t, &id, &id, &zero);
    let d = RingMap::zero(&r);
    let cfg = SearchConfig::new(r.spec().clone());
    let report = enumerate_generalized(
        &r,
        &d,
        &RingMap::identity(&r),
        &RingMap::identity(&r),
        &cfg,
        None,
    )
    .unwrap();
    assert!(!report.partial);
    let found: Vec<Vec<usize>> = report.maps_found.into_iter().map(|m| m.images).collect();
    assert_eq!(found, oracle);
    assert_eq!(oracle.len(), GOLDEN_UT2_GENERALIZED_ZERO_D_COUNT);
}

// Golden counts, frozen from the one-shot brute-force scans above.
const GOLDEN_UT2_IDENTITY_COUNT: usize = 4;
const GOLDEN_UT2_TWISTED_COUNT: usize = 4;
const GOLDEN_UT2_GENERALIZED_ZERO_D_COUNT: usize = 2;
