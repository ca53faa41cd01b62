//! Exact elements of `Q[pi][E2h, E4, E6]`.
//!
//! `E2h` is the completed (almost-holomorphic) second Eisenstein series, `E4`
//! and `E6` the normalized holomorphic ones. The transcendental `pi` is kept as
//! a formal variable so that every coefficient is an exact rational.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::RingError;

/// Exponent vector of a monomial `pi^pi * E2h^e2 * E4^e4 * E6^e6`.
///
/// The derived ordering is lexicographic on `(pi, e2, e4, e6)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub pi: u32,
    pub e2: u32,
    pub e4: u32,
    pub e6: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { pi: 0, e2: 0, e4: 0, e6: 0 };

    pub fn new(pi: u32, e2: u32, e4: u32, e6: u32) -> Self {
        Monomial { pi, e2, e4, e6 }
    }

    /// Modular weight `2*e2 + 4*e4 + 6*e6`.
    pub fn weight(&self) -> u32 {
        2 * self.e2 + 4 * self.e4 + 6 * self.e6
    }

    fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            pi: self.pi + other.pi,
            e2: self.e2 + other.e2,
            e4: self.e4 + other.e4,
            e6: self.e6 + other.e6,
        }
    }
}

/// A finite sum of rational multiples of monomials, stored canonically:
/// sorted by monomial, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RingElement {
    terms: BTreeMap<Monomial, BigRational>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        RingElement { terms }
    }

    /// `num/den * pi^pi * E2h^e2 * E4^e4 * E6^e6`; panics if `den == 0`.
    pub fn mono(num: i64, den: i64, pi: u32, e2: u32, e4: u32, e6: u32) -> Self {
        Self::term(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            Monomial::new(pi, e2, e4, e6),
        )
    }

    pub fn pi_pow(n: u32) -> Self {
        Self::term(BigRational::one(), Monomial::new(n, 0, 0, 0))
    }

    pub fn e2h() -> Self {
        Self::term(BigRational::one(), Monomial::new(0, 1, 0, 0))
    }

    pub fn e4() -> Self {
        Self::term(BigRational::one(), Monomial::new(0, 0, 1, 0))
    }

    pub fn e6() -> Self {
        Self::term(BigRational::one(), Monomial::new(0, 0, 0, 1))
    }

    /// Builds an element from arbitrary `(coefficient, monomial)` pairs,
    /// merging duplicates.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, Monomial)>,
    {
        let mut out = RingElement::zero();
        for (c, m) in iter {
            out.add_term(m, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return RingElement::zero();
        }
        RingElement {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = RingElement::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `Some(w)` if every term has weight `w` and `pi`-exponent `w`.
    /// Zero is reported as `None`; use [`is_weight_matched`](Self::is_weight_matched)
    /// for a check that treats zero as vacuously homogeneous.
    pub fn matched_weight(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let w = first.weight();
        if first.pi != w {
            return None;
        }
        it.all(|m| m.weight() == w && m.pi == w).then_some(w)
    }

    pub fn is_weight_matched(&self, w: u32) -> bool {
        self.terms.keys().all(|m| m.weight() == w && m.pi == w)
    }

    /// The derivation `d/dY`, acting as `(3/pi^2) d/dE2h`.
    pub fn partial_y(&self) -> Result<RingElement, RingError> {
        let mut out = RingElement::zero();
        for (m, c) in &self.terms {
            if m.e2 == 0 {
                continue;
            }
            if m.pi < 2 {
                return Err(RingError::NotWeightMatched(*m));
            }
            let factor = BigRational::from_integer(BigInt::from(3u64 * m.e2 as u64));
            out.add_term(
                Monomial { pi: m.pi - 2, e2: m.e2 - 1, ..*m },
                c * factor,
            );
        }
        Ok(out)
    }
}

impl Add<&RingElement> for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(mut self, rhs: RingElement) -> RingElement {
        self += &rhs;
        self
    }
}

impl AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, rhs: &RingElement) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl AddAssign for RingElement {
    fn add_assign(&mut self, rhs: RingElement) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&RingElement> for RingElement {
    fn sub_assign(&mut self, rhs: &RingElement) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl Sub<&RingElement> for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(mut self, rhs: RingElement) -> RingElement {
        self -= &rhs;
        self
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

impl Mul<&RingElement> for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, rhs: RingElement) -> RingElement {
        &self * &rhs
    }
}

impl fmt::Display for RingElement {
    /// Canonical plain text, see [`super::format::to_text`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::format::to_text(self))
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn rational_is_negative(q: &BigRational) -> bool {
    q.is_negative()
}
