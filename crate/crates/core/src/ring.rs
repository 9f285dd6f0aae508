//! Residue rings `Z_m` with canonical representatives in `[0, m)`.
//!
//! A [`Ring`] is a small `Copy` value (modulus plus a cached primality
//! flag). [`Element`] carries its ring so mixed-modulus arithmetic can be
//! detected instead of silently producing garbage.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest modulus accepted by [`Ring::new`].
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid modulus {0}: must satisfy 2 <= m <= 2^31")]
    InvalidModulus(u64),
    #[error("ring mismatch: Z_{left} vs Z_{right}")]
    RingMismatch { left: u64, right: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ring {
    modulus: u64,
    is_prime: bool,
}

impl Ring {
    pub fn new(modulus: u64) -> Result<Self, RingError> {
        if !(2..=MAX_MODULUS).contains(&modulus) {
            return Err(RingError::InvalidModulus(modulus));
        }
        Ok(Self {
            modulus,
            is_prime: is_prime(modulus),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_prime(&self) -> bool {
        self.is_prime
    }

    pub fn zero(&self) -> Element {
        Element {
            residue: 0,
            ring: *self,
        }
    }

    pub fn one(&self) -> Element {
        Element {
            residue: 1,
            ring: *self,
        }
    }

    /// Reduces an arbitrary signed integer into the ring.
    pub fn element(&self, value: i64) -> Element {
        let m = self.modulus as i128;
        let residue = (value as i128).rem_euclid(m) as u64;
        Element {
            residue,
            ring: *self,
        }
    }

    pub fn from_u64(&self, value: u64) -> Element {
        Element {
            residue: value % self.modulus,
            ring: *self,
        }
    }

    /// All elements `0, 1, ..., m-1` in ascending order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.modulus).map(move |r| Element {
            residue: r,
            ring: *self,
        })
    }

    // Raw residue arithmetic. Callers guarantee inputs are already reduced.

    #[inline]
    pub(crate) fn add_raw(&self, x: u64, y: u64) -> u64 {
        let s = x + y;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, x: u64, y: u64) -> u64 {
        if x >= y {
            x - y
        } else {
            x + self.modulus - y
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, x: u64) -> u64 {
        if x == 0 {
            0
        } else {
            self.modulus - x
        }
    }

    #[inline]
    pub(crate) fn mul_raw(&self, x: u64, y: u64) -> u64 {
        // m <= 2^31, so the product fits in u64.
        (x * y) % self.modulus
    }

    pub(crate) fn pow_raw(&self, base: u64, mut exp: u64) -> u64 {
        let mut result = 1 % self.modulus;
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul_raw(result, b);
            }
            b = self.mul_raw(b, b);
            exp >>= 1;
        }
        result
    }

    fn check(&self, x: &Element) -> Result<(), RingError> {
        if x.ring != *self {
            return Err(RingError::RingMismatch {
                left: self.modulus,
                right: x.ring.modulus,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.modulus)
    }
}

/// Trial division up to `sqrt(n)`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A residue class of some [`Ring`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Element {
    residue: u64,
    ring: Ring,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

impl Element {
    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.residue == 0
    }

    pub fn try_add(self, other: Element) -> Result<Element, RingError> {
        self.ring.check(&other)?;
        Ok(self.with(self.ring.add_raw(self.residue, other.residue)))
    }

    pub fn try_sub(self, other: Element) -> Result<Element, RingError> {
        self.ring.check(&other)?;
        Ok(self.with(self.ring.sub_raw(self.residue, other.residue)))
    }

    pub fn try_mul(self, other: Element) -> Result<Element, RingError> {
        self.ring.check(&other)?;
        Ok(self.with(self.ring.mul_raw(self.residue, other.residue)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Element {
        self.with(self.ring.neg_raw(self.residue))
    }

    pub fn pow(self, exp: u64) -> Element {
        self.with(self.ring.pow_raw(self.residue, exp))
    }

    /// Multiplicative inverse, if the residue is a unit.
    pub fn inverse(self) -> Option<Element> {
        let m = self.ring.modulus as i64;
        let (mut old_r, mut r) = (self.residue as i64, m);
        let (mut old_s, mut s) = (1i64, 0i64);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        if old_r != 1 {
            return None;
        }
        Some(self.ring.element(old_s))
    }

    /// True iff `self` is nonzero and `self * y == 0` for some nonzero `y`.
    ///
    /// Zero is *not* reported as a zero divisor: the check is applied to
    /// differences of distinct grid coordinates, which are never zero.
    pub fn is_zero_divisor(&self) -> bool {
        self.residue != 0 && gcd(self.residue, self.ring.modulus) > 1
    }

    fn with(self, residue: u64) -> Element {
        Element {
            residue,
            ring: self.ring,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.residue)
    }
}

/// Applies `op` to `x` and `y` (`y` is ignored for [`ArithOp::Neg`]).
pub fn arith(op: ArithOp, x: Element, y: Element) -> Result<Element, RingError> {
    match op {
        ArithOp::Add => x.try_add(y),
        ArithOp::Sub => x.try_sub(y),
        ArithOp::Mul => x.try_mul(y),
        ArithOp::Neg => {
            x.ring.check(&y)?;
            Ok(x.neg())
        }
    }
}

/// `C(n, k)` reduced into `ring`, computed with Pascal's rule entirely in
/// the ring, so it is valid for composite moduli and never overflows.
/// Returns zero when `k > n`.
pub fn binom_mod(n: u64, k: u64, ring: Ring) -> Element {
    if k > n {
        return ring.zero();
    }
    let k = k.min(n - k) as usize;
    // row[j] = C(row_index, j) for j <= k
    let mut row = vec![0u64; k + 1];
    row[0] = 1 % ring.modulus;
    for i in 1..=n {
        let top = (i as usize).min(k);
        for j in (1..=top).rev() {
            row[j] = ring.add_raw(row[j], row[j - 1]);
        }
    }
    ring.from_u64(row[k])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_ring_examples() {
        let r7 = Ring::new(7).unwrap();
        assert_eq!(r7.modulus(), 7);
        assert!(r7.is_prime());
        assert!(!Ring::new(6).unwrap().is_prime());
        assert_eq!(Ring::new(1), Err(RingError::InvalidModulus(1)));
        assert_eq!(Ring::new(0), Err(RingError::InvalidModulus(0)));
        assert!(Ring::new(MAX_MODULUS + 1).is_err());
        assert!(Ring::new(2_147_483_647).unwrap().is_prime());
    }

    #[test]
    fn arith_examples() {
        let r7 = Ring::new(7).unwrap();
        let r6 = Ring::new(6).unwrap();
        let r5 = Ring::new(5).unwrap();
        assert_eq!(
            arith(ArithOp::Add, r7.element(3), r7.element(5)).unwrap(),
            r7.element(1)
        );
        assert_eq!(
            arith(ArithOp::Mul, r6.element(2), r6.element(3)).unwrap(),
            r6.zero()
        );
        assert_eq!(
            arith(ArithOp::Neg, r5.zero(), r5.zero()).unwrap(),
            r5.zero()
        );
        assert_eq!(
            arith(ArithOp::Sub, r5.element(1), r5.element(3)).unwrap(),
            r5.element(3)
        );
        assert_eq!(
            arith(ArithOp::Add, r5.element(1), r7.element(1)),
            Err(RingError::RingMismatch { left: 5, right: 7 })
        );
    }

    #[test]
    fn element_reduces_negatives() {
        let r5 = Ring::new(5).unwrap();
        assert_eq!(r5.element(-1).residue(), 4);
        assert_eq!(r5.element(-10).residue(), 0);
        assert_eq!(
            r5.element(i64::MIN).residue(),
            (i64::MIN as i128).rem_euclid(5) as u64
        );
    }

    #[test]
    fn zero_divisor_examples() {
        let r6 = Ring::new(6).unwrap();
        let r7 = Ring::new(7).unwrap();
        assert!(r6.element(2).is_zero_divisor());
        assert!(!r7.element(3).is_zero_divisor());
        assert!(!r6.element(5).is_zero_divisor());
        assert!(!r6.zero().is_zero_divisor());
    }

    #[test]
    fn zero_divisor_matches_scan() {
        for m in 2..=30 {
            let r = Ring::new(m).unwrap();
            for x in r.elements() {
                let scan = r
                    .elements()
                    .any(|y| !y.is_zero() && x.try_mul(y).unwrap().is_zero());
                let expected = scan && !x.is_zero();
                assert_eq!(x.is_zero_divisor(), expected, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn inverse_exists_for_units() {
        for m in 2..=30 {
            let r = Ring::new(m).unwrap();
            for x in r.elements() {
                match x.inverse() {
                    Some(inv) => assert_eq!(x.try_mul(inv).unwrap(), r.one()),
                    None => assert!(x.is_zero() || x.is_zero_divisor()),
                }
            }
        }
    }

    #[test]
    fn ring_axioms_exhaustive() {
        for m in 2..=12 {
            let r = Ring::new(m).unwrap();
            for x in r.elements() {
                for y in r.elements() {
                    assert_eq!(x.try_add(y), y.try_add(x));
                    assert_eq!(x.try_mul(y), y.try_mul(x));
                    assert_eq!(x.try_add(y.neg()), x.try_sub(y));
                    for z in r.elements() {
                        let xy = x.try_add(y).unwrap();
                        assert_eq!(xy.try_add(z), x.try_add(y.try_add(z).unwrap()));
                        let xy = x.try_mul(y).unwrap();
                        assert_eq!(xy.try_mul(z), x.try_mul(y.try_mul(z).unwrap()));
                        let lhs = x.try_mul(y.try_add(z).unwrap()).unwrap();
                        let rhs = x
                            .try_mul(y)
                            .unwrap()
                            .try_add(x.try_mul(z).unwrap())
                            .unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn binom_examples() {
        let r5 = Ring::new(5).unwrap();
        let r2 = Ring::new(2).unwrap();
        assert_eq!(binom_mod(3, 2, r5).residue(), 3);
        assert_eq!(binom_mod(4, 2, r2).residue(), 0);
        for n in 0..10 {
            assert_eq!(binom_mod(n, 0, r5), r5.one());
        }
        assert_eq!(binom_mod(3, 4, r5), r5.zero());
    }

    #[test]
    fn binom_matches_integer_pascal() {
        // Oracle: exact integer Pascal triangle.
        let mut tri: Vec<Vec<u128>> = vec![vec![1]];
        for n in 1..=20usize {
            let prev = &tri[n - 1];
            let mut row = vec![1u128; n + 1];
            for k in 1..n {
                row[k] = prev[k - 1] + prev[k];
            }
            tri.push(row);
        }
        for m in 2..=13 {
            let r = Ring::new(m).unwrap();
            for n in 0..=20u64 {
                for k in 0..=n {
                    let exact = tri[n as usize][k as usize];
                    assert_eq!(binom_mod(n, k, r).residue() as u128, exact % m as u128);
                    assert_eq!(binom_mod(n, k, r), binom_mod(n, n - k, r));
                }
            }
        }
    }

    #[test]
    fn binom_large_n_no_overflow() {
        let r = Ring::new(1_000_003).unwrap();
        // Lucas: C(p, 1) == 0 mod p
        assert!(binom_mod(1_000_003, 1, r).is_zero());
        assert_eq!(binom_mod(5000, 1, r).residue(), 5000);
    }

    #[test]
    fn trial_division_primality() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }
}
