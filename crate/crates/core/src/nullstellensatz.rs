//! Constructive Combinatorial Nullstellensatz.
//!
//! Given `P` of total degree `k_1 + ... + k_n` whose coefficient on
//! `x_1^{k_1} ... x_n^{k_n}` is nonzero, and a grid `A_1 x ... x A_n` with
//! `|A_i| > k_i`, [`find_witness`] locates a grid point where `P` does not
//! vanish. It follows the inductive argument directly: pin one variable to
//! `a`, scan that slice, and if the slice vanishes divide by `x_i - a` and
//! recurse on the quotient over the grid with `a` removed.

use serde::Serialize;
use thiserror::Error;

use crate::poly::{PolyError, Polynomial};
use crate::ring::{Element, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnError {
    #[error("A_{var} is empty")]
    EmptySet { var: usize },
    #[error("A_{var} contains {value} more than once")]
    DuplicateElement { var: usize, value: u64 },
    #[error("A_{var} contains {value}, which is not a residue mod {modulus}")]
    ResidueOutOfRange {
        var: usize,
        value: u64,
        modulus: u64,
    },
    #[error("grid needs at least one coordinate set")]
    EmptyGrid,
    #[error("shape mismatch: expected {expected} coordinates, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("grid is over Z_{grid} but the polynomial is over Z_{poly}")]
    RingMismatch { poly: u64, grid: u64 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("hypotheses violated: {0}")]
    HypothesesViolated(HypothesisReport),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
}

/// Finite coordinate sets `A_1, ..., A_n`, each sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    ring: Ring,
    sets: Vec<Vec<Element>>,
    zero_divisor_safe: bool,
}

impl Grid {
    /// Builds a grid from residues, which must already lie in `[0, m)`.
    pub fn new(ring: Ring, sets: Vec<Vec<u64>>) -> Result<Self, CnError> {
        let mut elements = Vec::with_capacity(sets.len());
        for (var, set) in sets.into_iter().enumerate() {
            let mut els = Vec::with_capacity(set.len());
            for v in set {
                if v >= ring.modulus() {
                    return Err(CnError::ResidueOutOfRange {
                        var,
                        value: v,
                        modulus: ring.modulus(),
                    });
                }
                els.push(ring.from_u64(v));
            }
            elements.push(els);
        }
        Self::from_elements(ring, elements)
    }

    pub fn from_elements(ring: Ring, mut sets: Vec<Vec<Element>>) -> Result<Self, CnError> {
        if sets.is_empty() {
            return Err(CnError::EmptyGrid);
        }
        for (var, set) in sets.iter_mut().enumerate() {
            if set.is_empty() {
                return Err(CnError::EmptySet { var });
            }
            for x in set.iter() {
                if x.ring() != ring {
                    return Err(CnError::RingMismatch {
                        poly: ring.modulus(),
                        grid: x.ring().modulus(),
                    });
                }
            }
            set.sort_by_key(Element::residue);
            if let Some(w) = set.windows(2).find(|w| w[0] == w[1]) {
                return Err(CnError::DuplicateElement {
                    var,
                    value: w[0].residue(),
                });
            }
        }
        let zero_divisor_safe = ring.is_prime() || sets.iter().all(|s| differences_are_safe(s));
        Ok(Self {
            ring,
            sets,
            zero_divisor_safe,
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn arity(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<Element>] {
        &self.sets
    }

    /// Whether no two distinct elements of any `A_i` differ by a zero
    /// divisor. Always true over a prime modulus.
    pub fn is_zero_divisor_safe(&self) -> bool {
        self.zero_divisor_safe
    }

    pub fn num_points(&self) -> u128 {
        self.sets.iter().map(|s| s.len() as u128).product()
    }

    pub fn contains(&self, point: &[Element]) -> bool {
        point.len() == self.sets.len() && point.iter().zip(&self.sets).all(|(x, s)| s.contains(x))
    }

    /// Lexicographically first point (smallest element of every set).
    pub fn first_point(&self) -> Vec<Element> {
        self.sets.iter().map(|s| s[0]).collect()
    }

    /// The same grid with `a` removed from `A_var`.
    fn without(&self, var: usize, a: Element) -> Grid {
        let mut sets = self.sets.clone();
        sets[var].retain(|&x| x != a);
        Grid {
            ring: self.ring,
            sets,
            zero_divisor_safe: self.zero_divisor_safe,
        }
    }
}

fn differences_are_safe(set: &[Element]) -> bool {
    set.iter().enumerate().all(|(i, &a)| {
        set[i + 1..]
            .iter()
            .all(|&b| !a.try_sub(b).expect("same ring").is_zero_divisor())
    })
}

/// Visits every point of `sets` in lexicographic order (last coordinate
/// fastest) and returns the first one accepted by `pred`.
fn find_point<F>(sets: &[&[Element]], mut pred: F) -> Option<Vec<Element>>
where
    F: FnMut(&[Element]) -> bool,
{
    let mut idx = vec![0usize; sets.len()];
    let mut point: Vec<Element> = sets.iter().map(|s| s[0]).collect();
    loop {
        if pred(&point) {
            return Some(point);
        }
        let mut pos = sets.len();
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < sets[pos].len() {
                point[pos] = sets[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            point[pos] = sets[pos][0];
        }
    }
}

/// A polynomial together with a target exponent vector and a grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnInstance {
    poly: Polynomial,
    k: Vec<u32>,
    grid: Grid,
}

impl CnInstance {
    pub fn new(poly: Polynomial, k: Vec<u32>, grid: Grid) -> Result<Self, CnError> {
        if k.len() != poly.arity() {
            return Err(CnError::ShapeMismatch {
                expected: poly.arity(),
                found: k.len(),
            });
        }
        check_shape(&poly, &grid)?;
        Ok(Self { poly, k, grid })
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
}

fn check_shape(poly: &Polynomial, grid: &Grid) -> Result<(), CnError> {
    if grid.arity() != poly.arity() {
        return Err(CnError::ShapeMismatch {
            expected: poly.arity(),
            found: grid.arity(),
        });
    }
    if grid.ring() != poly.ring() {
        return Err(CnError::RingMismatch {
            poly: poly.ring().modulus(),
            grid: grid.ring().modulus(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HypothesisReport {
    pub degree_ok: bool,
    pub coefficient_ok: bool,
    pub sizes_ok: bool,
    pub ring_ok: bool,
    pub overall: bool,
}

impl std::fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "degree_ok={} coefficient_ok={} sizes_ok={} ring_ok={}",
            self.degree_ok, self.coefficient_ok, self.sizes_ok, self.ring_ok
        )
    }
}

pub fn check_hypotheses(inst: &CnInstance) -> HypothesisReport {
    let k_sum: u64 = inst.k.iter().map(|&k| k as u64).sum();
    let degree_ok = inst.poly.total_degree() == Some(k_sum);
    let coefficient_ok = !inst
        .poly
        .coefficient(&inst.k)
        .expect("instance shape checked at construction")
        .is_zero();
    let sizes_ok = inst
        .grid
        .sets
        .iter()
        .zip(&inst.k)
        .all(|(s, &k)| s.len() as u64 > k as u64);
    let ring_ok = inst.grid.is_zero_divisor_safe();
    HypothesisReport {
        degree_ok,
        coefficient_ok,
        sizes_ok,
        ring_ok,
        overall: degree_ok && coefficient_ok && sizes_ok && ring_ok,
    }
}

/// One division step: `x_var` was pinned to `pinned`, the slice vanished,
/// and the search continued on the quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PinStep {
    pub var: usize,
    pub pinned: Element,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub point: Vec<Element>,
    pub value: Element,
    pub recursion_depth: usize,
    pub trace: Vec<PinStep>,
}

/// Finds a grid point where `P` is nonzero by the inductive construction.
///
/// The variable pinned at each level is the first `i` with `k_i > 0` and
/// it is pinned to the smallest element of `A_i`; slices are scanned in
/// lexicographic order, so the result is deterministic.
pub fn find_witness(inst: &CnInstance) -> Result<Witness, CnError> {
    let report = check_hypotheses(inst);
    if !report.overall {
        return Err(CnError::HypothesesViolated(report));
    }
    let mut trace = Vec::new();
    let point = descend(&inst.poly, &inst.k, &inst.grid, &mut trace)?;
    let value = inst.poly.evaluate(&point)?;
    if value.is_zero() || !inst.grid.contains(&point) {
        return Err(CnError::InternalContradiction(format!(
            "returned point {point:?} is not a nonvanishing grid point"
        )));
    }
    Ok(Witness {
        point,
        value,
        recursion_depth: trace.len(),
        trace,
    })
}

fn descend(
    p: &Polynomial,
    k: &[u32],
    grid: &Grid,
    trace: &mut Vec<PinStep>,
) -> Result<Vec<Element>, CnError> {
    debug_assert!(
        check_hypotheses(&CnInstance {
            poly: p.clone(),
            k: k.to_vec(),
            grid: grid.clone(),
        })
        .overall
    );

    let Some(var) = k.iter().position(|&ki| ki > 0) else {
        // Degree zero: P is the nonzero constant on x^0.
        let point = grid.first_point();
        if p.evaluate(&point)?.is_zero() {
            return Err(CnError::InternalContradiction(
                "degree-zero polynomial vanishes".into(),
            ));
        }
        return Ok(point);
    };
    let a = grid.sets[var][0];

    let pinned = [a];
    let slice: Vec<&[Element]> = grid
        .sets
        .iter()
        .enumerate()
        .map(|(j, s)| if j == var { &pinned[..] } else { s.as_slice() })
        .collect();
    let mut eval_err = None;
    let hit = find_point(&slice, |x| match p.evaluate(x) {
        Ok(v) => !v.is_zero(),
        Err(e) => {
            eval_err = Some(e);
            true
        }
    });
    if let Some(e) = eval_err {
        return Err(e.into());
    }
    if let Some(point) = hit {
        return Ok(point);
    }

    // P vanishes on the slice x_var = a, so the remainder (free of x_var)
    // vanishes on the whole residual grid and P = (x_var - a) * Q there.
    let division = p.divide_by_linear(var, a)?;
    trace.push(PinStep { var, pinned: a });
    let mut k_next = k.to_vec();
    k_next[var] -= 1;
    let point = descend(&division.quotient, &k_next, &grid.without(var, a), trace)?;

    if p.evaluate(&point)?.is_zero() {
        return Err(CnError::InternalContradiction(format!(
            "quotient witness {point:?} is a zero of P after dividing by x_{var} - {a}"
        )));
    }
    Ok(point)
}

/// Lexicographically first grid point where `p` is nonzero, or `None` if
/// `p` vanishes on the whole grid.
pub fn brute_force_witness(p: &Polynomial, grid: &Grid) -> Result<Option<Witness>, CnError> {
    check_shape(p, grid)?;
    let sets: Vec<&[Element]> = grid.sets.iter().map(Vec::as_slice).collect();
    let point = find_point(&sets, |x| !p.evaluate(x).expect("shape checked").is_zero());
    Ok(point.map(|point| Witness {
        value: p.evaluate(&point).expect("shape checked"),
        point,
        recursion_depth: 0,
        trace: Vec::new(),
    }))
}

pub fn vanishes_on_grid(p: &Polynomial, grid: &Grid) -> Result<bool, CnError> {
    Ok(brute_force_witness(p, grid)?.is_none())
}
