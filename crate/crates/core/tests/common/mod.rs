//! Deterministic spec catalogs shared by the integration and acceptance
//! tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use pncc::{CartesianSpec, Elem, Field};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FIELD_ORDERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];
pub const MAX_LENGTH: usize = 400;
/// Orders up to this bound are enumerated exhaustively.
pub const EXHAUSTIVE_MAX_ORDER: u64 = 5;
pub const SAMPLES_PER_CELL: usize = 25;

pub fn field(q: u64) -> Arc<Field> {
    Arc::new(Field::of_order(q).unwrap())
}

pub fn f25() -> CartesianSpec {
    CartesianSpec::subfield_tower(field(25), &[5, 5, 25]).unwrap()
}

pub fn subgroup_gf7() -> CartesianSpec {
    CartesianSpec::from_encodings(field(7), &[vec![0, 1], vec![0, 1, 2, 4], vec![0, 1, 2, 4]])
        .unwrap()
}

pub fn config_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn subgroup_of(field: &Field, gens: &[Elem]) -> BTreeSet<Elem> {
    let mut group = BTreeSet::from([Elem::ONE]);
    loop {
        let next: BTreeSet<Elem> = group
            .iter()
            .flat_map(|&a| gens.iter().map(move |&g| field.mul(a, g)))
            .chain(group.iter().copied())
            .collect();
        if next.len() == group.len() {
            return group;
        }
        group = next;
    }
}

/// Cosets of `group` in the multiplicative group, each as a sorted list,
/// the subgroup itself excluded, in order of smallest element.
fn other_cosets(field: &Field, group: &BTreeSet<Elem>) -> Vec<Vec<Elem>> {
    let mut covered = group.clone();
    let mut out = Vec::new();
    for x in field.elements().filter(|x| !x.is_zero()) {
        if covered.contains(&x) {
            continue;
        }
        let coset: Vec<Elem> = group.iter().map(|&h| field.mul(h, x)).collect();
        covered.extend(coset.iter().copied());
        out.push(coset);
    }
    out
}

/// Every admissible next set after `prev`: `{0}`, the group generated by
/// `prev`, and any union of its other cosets. Each contains `prev`.
fn successors(field: &Field, prev: &[Elem]) -> Vec<Vec<Elem>> {
    let gens: Vec<Elem> = prev.iter().copied().filter(|x| !x.is_zero()).collect();
    let group = subgroup_of(field, &gens);
    let cosets = other_cosets(field, &group);
    (0u64..1 << cosets.len())
        .map(|mask| {
            let mut set: BTreeSet<Elem> = group.clone();
            set.insert(Elem::ZERO);
            for (i, c) in cosets.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    set.extend(c.iter().copied());
                }
            }
            set.into_iter().collect()
        })
        .collect()
}

fn spec_from(field: &Arc<Field>, tail: &[Vec<Elem>]) -> CartesianSpec {
    let mut sets = vec![vec![Elem::ZERO, Elem::ONE]];
    sets.extend(tail.iter().cloned());
    CartesianSpec::new(field.clone(), sets).unwrap()
}

fn length(tail: &[Vec<Elem>]) -> usize {
    (0..tail.len())
        .map(|i| tail[i..].iter().map(Vec::len).product::<usize>())
        .sum::<usize>()
        + 1
}

/// All chains `A_1, ..., A_n` with `{0, 1} ⊆ A_1` and each `A_j` closed
/// under multiplication by `A_{j-1}`, with `A_0 = {0, 1}`. Since the points
/// do not depend on `A_0` and scaling fixes `1 ∈ A_j`, these represent every
/// valid spec of the field up to scaling.
fn exhaustive(field: &Arc<Field>, n: usize) -> Vec<CartesianSpec> {
    let others: Vec<Elem> = field.elements().filter(|x| x.encoding() > 1).collect();
    let firsts: Vec<Vec<Elem>> = (0u64..1 << others.len())
        .map(|mask| {
            let mut set = vec![Elem::ZERO, Elem::ONE];
            set.extend((0..others.len()).filter(|i| mask >> i & 1 == 1).map(|i| others[i]));
            set
        })
        .collect();
    let mut chains: Vec<Vec<Vec<Elem>>> = firsts.into_iter().map(|a| vec![a]).collect();
    for _ in 1..n {
        chains = chains
            .into_iter()
            .flat_map(|chain| {
                successors(field, chain.last().unwrap())
                    .into_iter()
                    .map(move |s| {
                        let mut c = chain.clone();
                        c.push(s);
                        c
                    })
            })
            .collect();
    }
    chains
        .into_iter()
        .filter(|c| length(c) <= MAX_LENGTH)
        .map(|c| spec_from(field, &c))
        .collect()
}

fn sampled(field: &Arc<Field>, n: usize, count: usize, seed: u64) -> Vec<CartesianSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let others: Vec<Elem> = field.elements().filter(|x| x.encoding() > 1).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..count * 50 {
        if out.len() == count {
            break;
        }
        let density: f64 = [0.15, 0.4, 0.8][rng.gen_range(0..3)];
        let mut first = vec![Elem::ZERO, Elem::ONE];
        first.extend(others.iter().copied().filter(|_| rng.gen_bool(density)));
        first.sort();
        let mut chain = vec![first];
        while chain.len() < n {
            let options = successors(field, chain.last().unwrap());
            chain.push(options.choose(&mut rng).unwrap().clone());
        }
        if length(&chain) <= MAX_LENGTH && seen.insert(chain.clone()) {
            out.push(spec_from(field, &chain));
        }
    }
    out
}

/// Valid nested specs over fields of order at most 16, `n <= 3`, length at
/// most 400: every one up to scaling for small fields, a seeded sample for
/// the rest.
pub fn nested_catalog() -> Vec<CartesianSpec> {
    let mut out = Vec::new();
    for q in FIELD_ORDERS {
        let f = field(q);
        for n in 1..=3 {
            if q <= EXHAUSTIVE_MAX_ORDER {
                out.extend(exhaustive(&f, n));
            } else {
                out.extend(sampled(&f, n, SAMPLES_PER_CELL, q * 100 + n as u64));
            }
        }
    }
    out
}

/// Products of subfields `K_0 ⊆ ... ⊆ K_n`.
pub fn product_of_fields_catalog() -> Vec<CartesianSpec> {
    let towers: &[(u64, &[u32])] = &[
        (2, &[2, 2]),
        (3, &[3, 3]),
        (4, &[4, 4]),
        (5, &[5, 5]),
        (7, &[7, 7]),
        (2, &[2, 2, 2]),
        (3, &[3, 3, 3]),
        (2, &[2, 2, 2, 2]),
        (4, &[2, 4]),
        (4, &[2, 2, 4]),
        (4, &[2, 4, 4]),
        (8, &[2, 8]),
        (8, &[2, 2, 8]),
        (9, &[3, 9]),
        (16, &[4, 16]),
        (16, &[2, 4, 16]),
    ];
    towers
        .iter()
        .map(|&(q, orders)| CartesianSpec::subfield_tower(field(q), orders).unwrap())
        .collect()
}

/// Affine products `A_1 x ... x A_n` over fields of order at most 8 with at
/// most 256 points: full products and seeded random subsets.
pub fn affine_catalog() -> Vec<(Arc<Field>, Vec<Vec<Elem>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    let shapes: &[(u64, &[usize])] = &[
        (2, &[2, 2]),
        (2, &[2, 2, 2]),
        (2, &[2, 2, 2, 2]),
        (3, &[3, 3]),
        (3, &[2, 3]),
        (3, &[2, 2, 3]),
        (4, &[4, 4]),
        (4, &[2, 3, 4]),
        (4, &[3, 4]),
        (5, &[5, 5]),
        (5, &[2, 4, 5]),
        (5, &[3, 3, 3]),
        (7, &[7, 7]),
        (7, &[3, 5]),
        (7, &[2, 4, 6]),
        (8, &[8, 8]),
        (8, &[2, 8]),
        (8, &[3, 5, 7]),
        (4, &[4, 4, 4, 4]),
    ];
    for &(q, sizes) in shapes {
        let f = field(q);
        let all: Vec<Elem> = f.elements().collect();
        let sets = sizes
            .iter()
            .map(|&k| {
                let mut s: Vec<Elem> = all.choose_multiple(&mut rng, k).copied().collect();
                s.sort();
                s
            })
            .collect();
        out.push((f, sets));
    }
    out
}
