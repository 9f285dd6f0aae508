//! Sparse multivariate polynomials over [`Ring`].
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic. Zero coefficients are never stored, so structural
//! equality coincides with equality of polynomials.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ring::{Element, Ring, RingError};

pub use parse::{parse_polynomial, parse_polynomial_auto};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials need at least one variable")]
    ZeroArity,
    #[error("shape mismatch: expected {expected} variables, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("variable index {index} out of range for arity {arity}")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable `{name}` at offset {offset}")]
    UnknownVariable { name: String, offset: usize },
}

/// Exponent vector `x_1^{e_1} ... x_n^{e_n}`.
///
/// Ordered graded-lexicographically: total degree first, then the
/// exponent vectors lexicographically (so `x^2 > x*y > y^2 > x`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for Monomial {
    fn from(v: Vec<u32>) -> Self {
        Monomial(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: Ring,
    arity: usize,
    terms: BTreeMap<Monomial, u64>,
}

/// Result of dividing `P` by the monic linear factor `x_var - point`:
/// `P = (x_var - point) * quotient + remainder`, with `remainder` free of
/// `x_var`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionResult {
    pub quotient: Polynomial,
    pub remainder: Polynomial,
    pub var: usize,
    pub point: Element,
}

impl Polynomial {
    pub fn zero(ring: Ring, arity: usize) -> Result<Self, PolyError> {
        if arity == 0 {
            return Err(PolyError::ZeroArity);
        }
        Ok(Self {
            ring,
            arity,
            terms: BTreeMap::new(),
        })
    }

    pub fn constant(ring: Ring, arity: usize, c: Element) -> Result<Self, PolyError> {
        let mut p = Self::zero(ring, arity)?;
        check_ring(ring, c)?;
        p.accumulate(Monomial::one(arity), c.residue());
        Ok(p)
    }

    /// The variable `x_index` (0-based).
    pub fn var(ring: Ring, arity: usize, index: usize) -> Result<Self, PolyError> {
        let mut p = Self::zero(ring, arity)?;
        if index >= arity {
            return Err(PolyError::VariableOutOfRange { index, arity });
        }
        let mut e = vec![0; arity];
        e[index] = 1;
        p.accumulate(Monomial(e), 1);
        Ok(p)
    }

    /// `x_index - a`.
    pub fn linear(ring: Ring, arity: usize, index: usize, a: Element) -> Result<Self, PolyError> {
        let x = Self::var(ring, arity, index)?;
        let c = Self::constant(ring, arity, a)?;
        x.sub(&c)
    }

    /// Builds a polynomial from `(exponents, integer coefficient)` pairs;
    /// coefficients are reduced and like terms combined.
    pub fn from_terms<I>(ring: Ring, arity: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, i64)>,
    {
        let mut p = Self::zero(ring, arity)?;
        for (exps, c) in terms {
            if exps.len() != arity {
                return Err(PolyError::ShapeMismatch {
                    expected: arity,
                    found: exps.len(),
                });
            }
            p.accumulate(Monomial(exps), ring.element(c).residue());
        }
        Ok(p)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Element)> + '_ {
        self.terms
            .iter()
            .rev()
            .map(move |(m, &c)| (m, self.ring.from_u64(c)))
    }

    /// Maximum total degree over the stored terms; `None` for the zero
    /// polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        // Graded order: the last key has the largest total degree.
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    /// Degree in `x_var`; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Result<Option<u32>, PolyError> {
        self.check_var(var)?;
        Ok(self.terms.keys().map(|m| m.0[var]).max())
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Result<Element, PolyError> {
        self.check_len(exponents.len())?;
        let c = self
            .terms
            .get(&Monomial(exponents.to_vec()))
            .copied()
            .unwrap_or(0);
        Ok(self.ring.from_u64(c))
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.accumulate(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            ring: self.ring,
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, &c)| (m.clone(), self.ring.neg_raw(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = Polynomial {
            ring: self.ring,
            arity: self.arity,
            terms: BTreeMap::new(),
        };
        for (m1, &c1) in &self.terms {
            for (m2, &c2) in &other.terms {
                out.accumulate(m1.mul(m2), self.ring.mul_raw(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: Element) -> Result<Polynomial, PolyError> {
        check_ring(self.ring, c)?;
        let mut out = Polynomial {
            ring: self.ring,
            arity: self.arity,
            terms: BTreeMap::new(),
        };
        for (m, &coef) in &self.terms {
            out.accumulate(m.clone(), self.ring.mul_raw(coef, c.residue()));
        }
        Ok(out)
    }

    pub fn pow(&self, mut exp: u32) -> Polynomial {
        let mut result = Polynomial {
            ring: self.ring,
            arity: self.arity,
            terms: BTreeMap::new(),
        };
        result.accumulate(Monomial::one(self.arity), 1);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.mul(&base).expect("same shape");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("same shape");
            }
        }
        result
    }

    /// Evaluates at `point`, term by term with square-and-multiply powers.
    pub fn evaluate(&self, point: &[Element]) -> Result<Element, PolyError> {
        self.check_len(point.len())?;
        for &x in point {
            check_ring(self.ring, x)?;
        }
        let r = self.ring;
        let mut acc = 0;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = r.mul_raw(t, r.pow_raw(x.residue(), e as u64));
                }
            }
            acc = r.add_raw(acc, t);
        }
        Ok(r.from_u64(acc))
    }

    /// Long division by the monic factor `x_var - a`.
    ///
    /// `P` is viewed as a univariate polynomial in `x_var` whose
    /// coefficients are polynomials in the other variables, and Horner's
    /// scheme runs over those coefficient polynomials from the top degree
    /// down.
    pub fn divide_by_linear(&self, var: usize, a: Element) -> Result<DivisionResult, PolyError> {
        self.check_var(var)?;
        check_ring(self.ring, a)?;
        let r = self.ring;

        // x_var-degree -> coefficient polynomial (x_var exponent zeroed)
        let mut slices: BTreeMap<u32, BTreeMap<Monomial, u64>> = BTreeMap::new();
        for (m, &c) in &self.terms {
            let d = m.0[var];
            let mut rest = m.clone();
            rest.0[var] = 0;
            slices.entry(d).or_default().insert(rest, c);
        }

        let top = slices.keys().next_back().copied().unwrap_or(0);
        let mut quotient = Polynomial::zero(r, self.arity)?;
        let mut carry: BTreeMap<Monomial, u64> = BTreeMap::new();
        // carry_{j} = c_j + a * carry_{j+1}; quotient gets carry_j * x^{j-1}
        for j in (1..=top).rev() {
            carry = horner_step(r, &carry, a.residue(), slices.get(&j));
            for (rest, &c) in &carry {
                let mut m = rest.clone();
                m.0[var] = j - 1;
                quotient.accumulate(m, c);
            }
        }
        let rem_terms = horner_step(r, &carry, a.residue(), slices.get(&0));
        let remainder = Polynomial {
            ring: r,
            arity: self.arity,
            terms: rem_terms,
        };
        Ok(DivisionResult {
            quotient,
            remainder,
            var,
            point: a,
        })
    }

    /// Adds `c * m`, pruning the term if it cancels.
    fn accumulate(&mut self, m: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = self.ring.add_raw(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_len(&self, len: usize) -> Result<(), PolyError> {
        if len != self.arity {
            return Err(PolyError::ShapeMismatch {
                expected: self.arity,
                found: len,
            });
        }
        Ok(())
    }

    fn check_var(&self, var: usize) -> Result<(), PolyError> {
        if var >= self.arity {
            return Err(PolyError::VariableOutOfRange {
                index: var,
                arity: self.arity,
            });
        }
        Ok(())
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch {
                left: self.ring.modulus(),
                right: other.ring.modulus(),
            }
            .into());
        }
        self.check_len(other.arity)
    }
}

fn check_ring(ring: Ring, x: Element) -> Result<(), PolyError> {
    if x.ring() != ring {
        return Err(RingError::RingMismatch {
            left: ring.modulus(),
            right: x.ring().modulus(),
        }
        .into());
    }
    Ok(())
}

fn horner_step(
    r: Ring,
    carry: &BTreeMap<Monomial, u64>,
    a: u64,
    coeff: Option<&BTreeMap<Monomial, u64>>,
) -> BTreeMap<Monomial, u64> {
    let mut next: BTreeMap<Monomial, u64> = BTreeMap::new();
    if a != 0 {
        for (m, &c) in carry {
            let v = r.mul_raw(c, a);
            if v != 0 {
                next.insert(m.clone(), v);
            }
        }
    }
    if let Some(coeff) = coeff {
        for (m, &c) in coeff {
            let e = next.entry(m.clone()).or_insert(0);
            *e = r.add_raw(*e, c);
        }
        next.retain(|_, c| *c != 0);
    }
    next
}

/// `x, y, z` for up to three variables, `x1, ..., xn` beyond that.
pub fn default_var_names(arity: usize) -> Vec<String> {
    match arity {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        3 => vec!["x".into(), "y".into(), "z".into()],
        n => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

/// Canonical text: graded-lex descending terms, residues in `[0, m)`,
/// unit coefficients omitted on nonconstant terms, `"0"` for zero.
pub fn format_polynomial<S: AsRef<str>>(p: &Polynomial, vars: &[S]) -> Result<String, PolyError> {
    p.check_len(vars.len())?;
    if p.is_zero() {
        return Ok("0".to_string());
    }
    let mut parts = Vec::with_capacity(p.terms.len());
    for (m, c) in p.terms() {
        let mut factors = Vec::new();
        for (name, &e) in vars.iter().zip(m.exponents()) {
            match e {
                0 => {}
                1 => factors.push(name.as_ref().to_string()),
                _ => factors.push(format!("{}^{}", name.as_ref(), e)),
            }
        }
        let term = if factors.is_empty() {
            c.to_string()
        } else if c.residue() == 1 {
            factors.join("*")
        } else {
            format!("{}*{}", c, factors.join("*"))
        };
        parts.push(term);
    }
    Ok(parts.join(" + "))
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_var_names(self.arity);
        f.write_str(&format_polynomial(self, &names).map_err(|_| fmt::Error)?)
    }
}
