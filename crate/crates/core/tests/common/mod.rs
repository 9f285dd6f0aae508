//! Random instance generators shared by the integration suites.
#![allow(dead_code)]

use polymethod::{check_hypotheses, CnInstance, Grid, Polynomial, Ring};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random exponent vector with total degree at most `max_deg`.
pub fn random_monomial<R: Rng>(rng: &mut R, arity: usize, max_deg: u32) -> Vec<u32> {
    let deg = rng.gen_range(0..=max_deg);
    let mut e = vec![0u32; arity];
    for _ in 0..deg {
        e[rng.gen_range(0..arity)] += 1;
    }
    e
}

/// Random polynomial with up to `max_terms` terms of total degree at most
/// `max_deg`. May be zero.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    ring: Ring,
    arity: usize,
    max_deg: u32,
    max_terms: usize,
) -> Polynomial {
    let n_terms = rng.gen_range(0..=max_terms);
    let m = ring.modulus() as i64;
    let terms: Vec<(Vec<u32>, i64)> = (0..n_terms)
        .map(|_| (random_monomial(rng, arity, max_deg), rng.gen_range(0..m)))
        .collect();
    Polynomial::from_terms(ring, arity, terms).unwrap()
}

/// Random `size`-element subset of `Z_m`, as residues.
pub fn random_subset<R: Rng>(rng: &mut R, m: u64, size: usize) -> Vec<u64> {
    let mut all: Vec<u64> = (0..m).collect();
    all.shuffle(rng);
    all.truncate(size);
    all.sort_unstable();
    all
}

/// `prod_{a in set} (x_var - a)`.
pub fn vanishing_factor(ring: Ring, arity: usize, var: usize, set: &[u64]) -> Polynomial {
    let mut p = Polynomial::constant(ring, arity, ring.one()).unwrap();
    for &a in set {
        let lin = Polynomial::linear(ring, arity, var, ring.from_u64(a)).unwrap();
        p = p.mul(&lin).unwrap();
    }
    p
}

pub fn grid(ring: Ring, sets: &[Vec<u64>]) -> Grid {
    Grid::new(ring, sets.to_vec()).unwrap()
}

/// All exponent vectors `k` with `sum k = total` and `k_i <= caps[i]`.
pub fn exponent_vectors(caps: &[u32], total: u32) -> Vec<Vec<u32>> {
    fn go(caps: &[u32], total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if caps.is_empty() {
            if total == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for k in 0..=caps[0].min(total) {
            prefix.push(k);
            go(&caps[1..], total - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(caps, total, &mut Vec::new(), &mut out);
    out
}

/// Exact integer binomial by multiplicative formula (independent of the
/// in-ring Pascal recurrence).
pub fn binom_exact(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

pub fn mask_to_vec(mask: u64) -> Vec<u64> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Random instance satisfying every hypothesis: prime modulus, arity <= 3,
/// coordinate sets of size <= 5 and total degree <= 5.
pub fn random_cn_instance<R: Rng>(rng: &mut R) -> CnInstance {
    let moduli = [2u64, 3, 5, 7, 13];
    loop {
        let m = moduli[rng.gen_range(0..moduli.len())];
        let ring = Ring::new(m).unwrap();
        let n = rng.gen_range(1..=3);
        let max_size = m.min(5) as u32;
        let k: Vec<u32> = (0..n).map(|_| rng.gen_range(0..max_size)).collect();
        let deg: u32 = k.iter().sum();
        if deg > 5 {
            continue;
        }
        let sets: Vec<Vec<u64>> = k
            .iter()
            .map(|&ki| {
                let size = rng.gen_range(ki + 1..=max_size) as usize;
                random_subset(rng, m, size)
            })
            .collect();
        let lead = rng.gen_range(1..m as i64);
        let mut terms = vec![(k.clone(), lead)];
        for _ in 0..rng.gen_range(0..=6) {
            terms.push((random_monomial(rng, n, deg), rng.gen_range(0..m as i64)));
        }
        let p = Polynomial::from_terms(ring, n, terms).unwrap();
        let inst = CnInstance::new(p, k, grid(ring, &sets)).unwrap();
        if check_hypotheses(&inst).overall {
            return inst;
        }
    }
}
