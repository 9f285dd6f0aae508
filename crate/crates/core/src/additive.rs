//! Restricted sumsets over `Z_p` and the Erdős–Heilbronn lower bound
//! `|{a + b : a in A, b in B, a != b}| >= min(p, |A| + |B| - 3)`.
//!
//! Besides direct verification this module carries both halves of the
//! polynomial proof: the covering argument when `|A| + |B| - 3 >= p`
//! ([`verify_full_sumset`]) and the Nullstellensatz argument on
//! `Q(x, y) = (x - y) * prod_{d in D} (x + y - d)` ([`cn_witness_for_eh`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::nullstellensatz::{find_witness, CnError, CnInstance, Grid, Witness};
use crate::poly::{PolyError, Polynomial};
use crate::ring::{binom_mod, is_prime, Element, Ring, RingError};

/// Largest prime accepted for exhaustive sweeps.
pub const MAX_EXHAUSTIVE_PRIME: u64 = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdditiveError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("set {name} is empty")]
    EmptySet { name: &'static str },
    #[error("set {name} contains {value} more than once")]
    DuplicateElement { name: &'static str, value: u64 },
    #[error("set {name} contains {value}, which is not a residue mod {p}")]
    ResidueOutOfRange {
        name: &'static str,
        value: u64,
        p: u64,
    },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no usable top coefficient of Q is nonzero (|D| = {d_size}, p = {p})")]
    HypothesesViolated { d_size: usize, p: u64 },
    #[error("sweep policy: {0}")]
    Policy(String),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cn(#[from] CnError),
}

fn prime_ring(p: u64) -> Result<Ring, AdditiveError> {
    let ring = Ring::new(p).map_err(|_| AdditiveError::NotPrime(p))?;
    if !ring.is_prime() {
        return Err(AdditiveError::NotPrime(p));
    }
    Ok(ring)
}

/// Validates residues and returns them as sorted ring elements.
fn element_set(
    ring: Ring,
    name: &'static str,
    values: &[u64],
    allow_empty: bool,
) -> Result<Vec<Element>, AdditiveError> {
    if values.is_empty() && !allow_empty {
        return Err(AdditiveError::EmptySet { name });
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(AdditiveError::DuplicateElement { name, value: w[0] });
    }
    sorted
        .into_iter()
        .map(|v| {
            if v >= ring.modulus() {
                Err(AdditiveError::ResidueOutOfRange {
                    name,
                    value: v,
                    p: ring.modulus(),
                })
            } else {
                Ok(ring.from_u64(v))
            }
        })
        .collect()
}

fn residues(set: &[Element]) -> Vec<u64> {
    set.iter().map(Element::residue).collect()
}

/// A prime `p` with two nonempty subsets `A`, `B` of `Z_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumsetInstance {
    ring: Ring,
    a: Vec<Element>,
    b: Vec<Element>,
}

impl SumsetInstance {
    pub fn new(p: u64, a: &[u64], b: &[u64]) -> Result<Self, AdditiveError> {
        let ring = prime_ring(p)?;
        Ok(Self {
            ring,
            a: element_set(ring, "A", a, false)?,
            b: element_set(ring, "B", b, false)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.ring.modulus()
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn a(&self) -> &[Element] {
        &self.a
    }

    pub fn b(&self) -> &[Element] {
        &self.b
    }

    fn swapped(&self) -> Self {
        Self {
            ring: self.ring,
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }
}

/// `{a + b mod p : a in A, b in B, a != b}`, ascending.
pub fn restricted_sumset(inst: &SumsetInstance) -> Vec<Element> {
    let p = inst.p() as usize;
    let mut hit = vec![false; p];
    for &a in &inst.a {
        for &b in &inst.b {
            if a != b {
                hit[a.try_add(b).expect("same ring").residue() as usize] = true;
            }
        }
    }
    hit.iter()
        .enumerate()
        .filter(|(_, &h)| h)
        .map(|(g, _)| inst.ring.from_u64(g as u64))
        .collect()
}

/// `min(p, |A| + |B| - 3)`; non-positive values make the bound vacuous.
pub fn eh_bound(size_a: usize, size_b: usize, p: u64) -> i64 {
    (p as i64).min(size_a as i64 + size_b as i64 - 3)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EhReport {
    pub c: Vec<Element>,
    pub c_size: usize,
    pub bound: i64,
    pub holds: bool,
}

pub fn verify_eh(inst: &SumsetInstance) -> EhReport {
    let c = restricted_sumset(inst);
    let bound = eh_bound(inst.a.len(), inst.b.len(), inst.p());
    let c_size = c.len();
    EhReport {
        c,
        c_size,
        bound,
        holds: c_size as i64 >= bound,
    }
}

/// How `g` is written as `a + b` with `a != b` in the covering argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Representation {
    pub g: Element,
    pub a: Element,
    pub b: Element,
    pub common: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FullSumsetReport {
    pub holds: bool,
    pub representations: Vec<Representation>,
    /// Values of `g` for which the construction failed (empty when `holds`).
    pub failures: Vec<Element>,
}

/// The covering argument for `|A| + |B| - 3 >= p`, `p` odd: for each `g`,
/// `A` and `g - B` share at least two elements, so one of them differs
/// from `g / 2` and gives `g = a + b` with `a != b`.
///
/// The result is cross-checked against the enumerated restricted sumset.
pub fn verify_full_sumset(inst: &SumsetInstance) -> Result<FullSumsetReport, AdditiveError> {
    let p = inst.p();
    if p == 2 {
        return Err(AdditiveError::PreconditionViolated(
            "the covering argument needs an odd prime".into(),
        ));
    }
    let threshold = inst.a.len() as i64 + inst.b.len() as i64 - 3;
    if threshold < p as i64 {
        return Err(AdditiveError::PreconditionViolated(format!(
            "|A| + |B| - 3 = {threshold} < p = {p}"
        )));
    }
    let ring = inst.ring;
    let half = ring.element(2).inverse().expect("p odd");
    let mut in_b = vec![false; p as usize];
    for b in &inst.b {
        in_b[b.residue() as usize] = true;
    }

    let mut representations = Vec::with_capacity(p as usize);
    let mut failures = Vec::new();
    for g in ring.elements() {
        let common: Vec<Element> = inst
            .a
            .iter()
            .copied()
            .filter(|&a| in_b[g.try_sub(a).unwrap().residue() as usize])
            .collect();
        let g_half = g.try_mul(half).unwrap();
        let pick = if common.len() >= 2 {
            common.iter().copied().find(|&a| a != g_half)
        } else {
            None
        };
        match pick {
            Some(a) => {
                let b = g.try_sub(a).unwrap();
                if !in_b[b.residue() as usize] || a == b || a.try_add(b).unwrap() != g {
                    return Err(AdditiveError::InternalContradiction(format!(
                        "representation {a} + {b} of {g} is invalid"
                    )));
                }
                representations.push(Representation {
                    g,
                    a,
                    b,
                    common: common.len(),
                });
            }
            None => failures.push(g),
        }
    }

    let holds = failures.is_empty();
    let enumerated = restricted_sumset(inst).len() as u64 == p;
    if holds != enumerated {
        return Err(AdditiveError::InternalContradiction(format!(
            "covering argument says {holds}, enumeration says {enumerated}"
        )));
    }
    Ok(FullSumsetReport {
        holds,
        representations,
        failures,
    })
}

/// `D`, `P = prod_{d in D} (x + y - d)` and `Q = (x - y) * P` over `Z_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofPolynomials {
    pub d: Vec<Element>,
    pub p_poly: Polynomial,
    pub q_poly: Polynomial,
}

pub fn build_proof_polynomials(p: u64, d: &[u64]) -> Result<ProofPolynomials, AdditiveError> {
    let ring = prime_ring(p)?;
    let d = element_set(ring, "D", d, true)?;
    proof_polynomials(ring, d)
}

fn proof_polynomials(ring: Ring, d: Vec<Element>) -> Result<ProofPolynomials, AdditiveError> {
    let x = Polynomial::var(ring, 2, 0)?;
    let y = Polynomial::var(ring, 2, 1)?;
    let sum = x.add(&y)?;
    let mut p_poly = Polynomial::constant(ring, 2, ring.one())?;
    for &di in &d {
        let factor = sum.sub(&Polynomial::constant(ring, 2, di)?)?;
        p_poly = p_poly.mul(&factor)?;
    }
    let q_poly = p_poly.mul(&x.sub(&y)?)?;
    Ok(ProofPolynomials { d, p_poly, q_poly })
}

/// Coefficient of `x^i y^{|D|+1-i}` in `Q`: `C(|D|, i-1) - C(|D|, i)`,
/// with `C(n, -1) = 0`.
pub fn q_top_coefficient(d_size: u64, i: u64, p: Ring) -> Element {
    let lower = if i == 0 {
        p.zero()
    } else {
        binom_mod(d_size, i - 1, p)
    };
    lower.try_sub(binom_mod(d_size, i, p)).expect("same ring")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EhWitness {
    pub a: Element,
    pub b: Element,
    /// Exponents `(k_1, k_2)` used for the Nullstellensatz instance.
    pub k: [u32; 2],
    pub witness: Witness,
}

/// Runs the Nullstellensatz on `Q` over `A x B` to produce `a in A`,
/// `b in B` with `a != b` and `a + b` outside `D`.
///
/// Requires `|D| = |A| + |B| - 4` and `|A| + |B| - 3 <= p`. The exponent
/// pair `(|A|-1, |B|-2)` is preferred; `(|A|-2, |B|-1)` is the fallback.
pub fn cn_witness_for_eh(
    p: u64,
    a: &[u64],
    b: &[u64],
    d: &[u64],
) -> Result<EhWitness, AdditiveError> {
    let inst = SumsetInstance::new(p, a, b)?;
    let ring = inst.ring;
    let d = element_set(ring, "D", d, true)?;
    let (na, nb) = (inst.a.len(), inst.b.len());
    if na + nb < 4 || d.len() != na + nb - 4 {
        return Err(AdditiveError::PreconditionViolated(format!(
            "|D| = {} but |A| + |B| - 4 = {}",
            d.len(),
            na as i64 + nb as i64 - 4
        )));
    }
    if (na + nb - 3) as u64 > p {
        return Err(AdditiveError::PreconditionViolated(format!(
            "|A| + |B| - 3 = {} exceeds p = {p}",
            na + nb - 3
        )));
    }

    let d_size = d.len() as u64;
    let k = if nb >= 2 && !q_top_coefficient(d_size, na as u64 - 1, ring).is_zero() {
        [na as u32 - 1, nb as u32 - 2]
    } else if na >= 2 && !q_top_coefficient(d_size, na as u64 - 2, ring).is_zero() {
        [na as u32 - 2, nb as u32 - 1]
    } else {
        return Err(AdditiveError::HypothesesViolated { d_size: d.len(), p });
    };

    let proof = proof_polynomials(ring, d)?;
    let grid = Grid::from_elements(ring, vec![inst.a.clone(), inst.b.clone()])?;
    let cn = CnInstance::new(proof.q_poly, k.to_vec(), grid)?;
    let witness = find_witness(&cn)?;
    let (wa, wb) = (witness.point[0], witness.point[1]);
    let s = wa.try_add(wb)?;
    if wa == wb || proof.d.contains(&s) {
        return Err(AdditiveError::InternalContradiction(format!(
            "witness ({wa}, {wb}) has a == b or a + b in D"
        )));
    }
    Ok(EhWitness {
        a: wa,
        b: wb,
        k,
        witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub c_size: usize,
    pub bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub p: u64,
    pub mode: &'static str,
    pub pairs: u64,
    /// Pairs with a positive bound met with equality.
    pub tight: u64,
    pub violations: Vec<Violation>,
}

/// Restricted sumset of two subsets of `Z_p` (`p <= 63`) encoded as bit
/// masks, bit `i` standing for residue `i`.
pub fn restricted_sumset_mask(a: u64, b: u64, p: u32) -> u64 {
    debug_assert!(p <= 63);
    let full = (1u64 << p) - 1;
    let mut c = 0;
    let mut rest = a;
    while rest != 0 {
        let s = rest.trailing_zeros();
        rest &= rest - 1;
        let shifted = b & !(1u64 << s);
        c |= ((shifted << s) | (shifted >> (p - s))) & full;
    }
    c
}

fn mask_to_vec(mask: u64) -> Vec<u64> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

#[derive(Default)]
struct Tally {
    pairs: u64,
    tight: u64,
    violations: Vec<Violation>,
}

impl Tally {
    fn record(&mut self, c_size: usize, bound: i64, a: impl FnOnce() -> (Vec<u64>, Vec<u64>)) {
        self.pairs += 1;
        if bound > 0 && c_size as i64 == bound {
            self.tight += 1;
        }
        if (c_size as i64) < bound {
            let (a, b) = a();
            self.violations.push(Violation {
                a,
                b,
                c_size,
                bound,
            });
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.pairs += other.pairs;
        self.tight += other.tight;
        self.violations.extend(other.violations);
        self
    }
}

fn exhaustive_row(p: u64, a: u64) -> Tally {
    let n = 1u64 << p;
    let size_a = a.count_ones() as usize;
    let mut t = Tally::default();
    for b in 1..n {
        let c = restricted_sumset_mask(a, b, p as u32).count_ones() as usize;
        let bound = eh_bound(size_a, b.count_ones() as usize, p);
        t.record(c, bound, || (mask_to_vec(a), mask_to_vec(b)));
    }
    t
}

fn sample_subset(rng: &mut ChaCha8Rng, p: u64) -> Vec<u64> {
    if p <= 63 {
        let mask = rng.gen_range(1..(1u64 << p));
        return mask_to_vec(mask);
    }
    loop {
        let s: Vec<u64> = (0..p).filter(|_| rng.gen::<bool>()).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

/// Checks the bound over many `(A, B)` pairs for each prime.
///
/// Exhaustive mode enumerates all nonempty subset pairs with bit masks
/// (primes up to [`MAX_EXHAUSTIVE_PRIME`]). Sampled mode draws uniform
/// nonempty subsets from a ChaCha8 stream keyed by `(seed, p)` and checks
/// each with [`verify_eh`]. Reports are identical with or without
/// `parallel`.
pub fn eh_sweep(
    primes: &[u64],
    mode: SweepMode,
    parallel: bool,
) -> Result<Vec<SweepReport>, AdditiveError> {
    for &p in primes {
        if !is_prime(p) {
            return Err(AdditiveError::NotPrime(p));
        }
        if mode == SweepMode::Exhaustive && p > MAX_EXHAUSTIVE_PRIME {
            return Err(AdditiveError::Policy(format!(
                "exhaustive sweeps are limited to p <= {MAX_EXHAUSTIVE_PRIME}, got {p}"
            )));
        }
    }
    primes
        .iter()
        .map(|&p| match mode {
            SweepMode::Exhaustive => Ok(sweep_exhaustive(p, parallel)),
            SweepMode::Sampled { count, seed } => sweep_sampled(p, count, seed, parallel),
        })
        .collect()
}

fn sweep_exhaustive(p: u64, parallel: bool) -> SweepReport {
    let n = 1u64 << p;
    let tally = if parallel {
        let rows: Vec<Tally> = (1..n)
            .into_par_iter()
            .map(|a| exhaustive_row(p, a))
            .collect();
        rows.into_iter().fold(Tally::default(), Tally::merge)
    } else {
        (1..n)
            .map(|a| exhaustive_row(p, a))
            .fold(Tally::default(), Tally::merge)
    };
    SweepReport {
        p,
        mode: "exhaustive",
        pairs: tally.pairs,
        tight: tally.tight,
        violations: tally.violations,
    }
}

fn sweep_sampled(
    p: u64,
    count: u64,
    seed: u64,
    parallel: bool,
) -> Result<SweepReport, AdditiveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p);
    let mut instances = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let a = sample_subset(&mut rng, p);
        let b = sample_subset(&mut rng, p);
        instances.push(SumsetInstance::new(p, &a, &b)?);
    }
    let check = |inst: &SumsetInstance| {
        let r = verify_eh(inst);
        let mut t = Tally::default();
        t.record(r.c_size, r.bound, || (residues(&inst.a), residues(&inst.b)));
        t
    };
    let tallies: Vec<Tally> = if parallel {
        instances.par_iter().map(check).collect()
    } else {
        instances.iter().map(check).collect()
    };
    let tally = tallies.into_iter().fold(Tally::default(), Tally::merge);
    Ok(SweepReport {
        p,
        mode: "sampled",
        pairs: tally.pairs,
        tight: tally.tight,
        violations: tally.violations,
    })
}

/// `restricted_sumset(A, B) == restricted_sumset(B, A)`.
pub fn is_symmetric(inst: &SumsetInstance) -> bool {
    restricted_sumset(inst) == restricted_sumset(&inst.swapped())
}
