//! Independent residue oracle: truncated Laurent series in one variable `z`
//! with ring coefficients, z-bar carrying terms kept apart, and direct
//! residue extraction. Shares no code with the residual combinatorics.
//!
//! A z-bar term `(d, b)` stands for `c * Y^b * z^d * zbar^b` where `Y` is an
//! opaque constant; it is only ever carried along and then discarded, since
//! `Res_{z=0}(zbar^b f(z) dz) = 0`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::qmodring::{factorial, loop_value, RingElement, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("series known only up to z^{have}, residue needs z^-1")]
    InsufficientPrecision { have: i64 },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("decoration {0} is below -1")]
    Decoration(i32),
    #[error("residue needs at least one edge between the two vertices")]
    NoJoiningEdge,
}

/// A propagator evaluated at a shifted argument: `d^dec P(z_w - z_x)` when
/// `reversed` is false and `d^dec P(z_x - z_w)` when it is true.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PropSymbol {
    pub dec: i32,
    pub tag: u32,
    pub reversed: bool,
}

/// Polynomial in [`PropSymbol`]s with ring coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SymPoly {
    terms: BTreeMap<Vec<PropSymbol>, RingElement>,
}

impl SymPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: RingElement) -> Self {
        Self::term(Vec::new(), c)
    }

    pub fn rational(q: BigRational) -> Self {
        Self::constant(RingElement::constant(q))
    }

    pub fn term(mut symbols: Vec<PropSymbol>, c: RingElement) -> Self {
        symbols.sort_unstable();
        let mut out = Self::zero();
        if !c.is_zero() {
            out.terms.insert(symbols, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<PropSymbol>, &RingElement)> {
        self.terms.iter()
    }

    /// The coefficient of the empty symbol product.
    pub fn scalar_part(&self) -> RingElement {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, k: Vec<PropSymbol>, c: RingElement) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.scale(q));
        }
        out
    }
}

impl Add for &SymPoly {
    type Output = SymPoly;
    fn add(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let mut k = ka.clone();
                k.extend_from_slice(kb);
                k.sort_unstable();
                out.add_term(k, ca * cb);
            }
        }
        out
    }
}

/// Truncated Laurent series in `z` plus z-bar carrying terms.
///
/// Coefficients are exact for every degree `<= precision`; `valuation` is a
/// lower bound for the degrees that may be nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    valuation: i64,
    precision: i64,
    hol: BTreeMap<i64, SymPoly>,
    zbar: BTreeMap<(i64, u32), SymPoly>,
}

impl BiSeries {
    pub fn new(valuation: i64, precision: i64) -> Self {
        BiSeries {
            valuation,
            precision,
            hol: BTreeMap::new(),
            zbar: BTreeMap::new(),
        }
    }

    /// The constant series 1, exact to any order.
    pub fn one(precision: i64) -> Self {
        let mut s = Self::new(0, precision);
        s.set(0, SymPoly::rational(BigRational::one()));
        s
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn set(&mut self, deg: i64, c: SymPoly) {
        assert!(deg >= self.valuation, "degree below valuation");
        if deg > self.precision {
            return;
        }
        if c.is_zero() {
            self.hol.remove(&deg);
        } else {
            self.hol.insert(deg, c);
        }
    }

    pub fn set_zbar(&mut self, deg: i64, zbar_deg: u32, c: SymPoly) {
        assert!(zbar_deg >= 1);
        if deg > self.precision {
            return;
        }
        if c.is_zero() {
            self.zbar.remove(&(deg, zbar_deg));
        } else {
            self.zbar.insert((deg, zbar_deg), c);
        }
    }

    pub fn coefficient(&self, deg: i64) -> SymPoly {
        self.hol.get(&deg).cloned().unwrap_or_default()
    }

    pub fn zbar_terms(&self) -> impl Iterator<Item = (&(i64, u32), &SymPoly)> {
        self.zbar.iter()
    }

    pub fn add(&self, rhs: &BiSeries) -> BiSeries {
        let mut out = BiSeries::new(self.valuation.min(rhs.valuation), self.precision.min(rhs.precision));
        for src in [self, rhs] {
            for (&d, c) in &src.hol {
                if d <= out.precision {
                    let s = &out.coefficient(d) + c;
                    out.set(d, s);
                }
            }
            for (&(d, b), c) in &src.zbar {
                if d <= out.precision {
                    let s = &out.zbar.get(&(d, b)).cloned().unwrap_or_default() + c;
                    out.set_zbar(d, b, s);
                }
            }
        }
        out
    }

    pub fn mul(&self, rhs: &BiSeries) -> BiSeries {
        let precision = (self.precision + rhs.valuation).min(rhs.precision + self.valuation);
        let mut out = BiSeries::new(self.valuation + rhs.valuation, precision);
        let mut hol: BTreeMap<i64, SymPoly> = BTreeMap::new();
        let mut zbar: BTreeMap<(i64, u32), SymPoly> = BTreeMap::new();
        let lhs_all = self.all_terms();
        let rhs_all = rhs.all_terms();
        for &((da, ba), ca) in &lhs_all {
            for &((db, bb), cb) in &rhs_all {
                let d = da + db;
                if d > precision {
                    continue;
                }
                let p = ca * cb;
                if ba + bb == 0 {
                    let e = hol.entry(d).or_default();
                    *e = &*e + &p;
                } else {
                    let e = zbar.entry((d, ba + bb)).or_default();
                    *e = &*e + &p;
                }
            }
        }
        for (d, c) in hol {
            out.set(d, c);
        }
        for ((d, b), c) in zbar {
            out.set_zbar(d, b, c);
        }
        out
    }

    fn all_terms(&self) -> Vec<((i64, u32), &SymPoly)> {
        self.hol
            .iter()
            .map(|(&d, c)| ((d, 0u32), c))
            .chain(self.zbar.iter().map(|(&k, c)| (k, c)))
            .collect()
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> BiSeries {
        BiSeries {
            valuation: self.valuation + k,
            precision: self.precision + k,
            hol: self.hol.iter().map(|(&d, c)| (d + k, c.clone())).collect(),
            zbar: self.zbar.iter().map(|(&(d, b), c)| ((d + k, b), c.clone())).collect(),
        }
    }

    /// The series of `f(-z)`.
    pub fn negate_argument(&self) -> BiSeries {
        let sign = |e: i64| if e.rem_euclid(2) == 0 { BigRational::one() } else { -BigRational::one() };
        BiSeries {
            valuation: self.valuation,
            precision: self.precision,
            hol: self.hol.iter().map(|(&d, c)| (d, c.scale(&sign(d)))).collect(),
            zbar: self
                .zbar
                .iter()
                .map(|(&(d, b), c)| ((d, b), c.scale(&sign(d + b as i64))))
                .collect(),
        }
    }

    /// `d/dz` with `zbar` held fixed.
    pub fn derivative(&self) -> BiSeries {
        let mut out = BiSeries::new(self.valuation - 1, self.precision - 1);
        for (&d, c) in &self.hol {
            if d != 0 {
                out.set(d - 1, c.scale(&BigRational::from_integer(BigInt::from(d))));
            }
        }
        for (&(d, b), c) in &self.zbar {
            if d != 0 {
                out.set_zbar(d - 1, b, c.scale(&BigRational::from_integer(BigInt::from(d))));
            }
        }
        out
    }

    pub fn negate(&self) -> BiSeries {
        let m = -BigRational::one();
        BiSeries {
            valuation: self.valuation,
            precision: self.precision,
            hol: self.hol.iter().map(|(&d, c)| (d, c.scale(&m))).collect(),
            zbar: self.zbar.iter().map(|(&k, c)| (k, c.scale(&m))).collect(),
        }
    }

    /// The `z^-1` coefficient of the holomorphic part; z-bar terms contribute
    /// nothing.
    pub fn residue(&self) -> Result<SymPoly, OracleError> {
        if self.precision < -1 {
            return Err(OracleError::InsufficientPrecision { have: self.precision });
        }
        Ok(self.coefficient(-1))
    }
}

fn ring_q(n: BigInt, d: BigInt) -> SymPoly {
    SymPoly::rational(BigRational::new(n, d))
}

/// `-Zhat(z) = -1/z + sum_{k>=0} W_{k-1}/k! z^k - Y zbar`: the propagator of
/// a decoration -1 edge.
pub fn series_zhat(truncation: i64) -> Result<BiSeries, OracleError> {
    let mut s = BiSeries::new(-1, truncation);
    s.set(-1, SymPoly::rational(-BigRational::one()));
    for k in 0..=truncation.max(-1) {
        let w = loop_value(k as i32 - 1)?;
        s.set(k, SymPoly::constant(w).scale(&BigRational::new(BigInt::one(), factorial(k as u32))));
    }
    s.set_zbar(0, 1, SymPoly::rational(-BigRational::one()));
    Ok(s)
}

/// `d^n P(z) = (-1)^n (n+1)!/z^{n+2} + sum_{k>=0} W_{n+k}/k! z^k`.
pub fn series_phat_deriv(n: u32, truncation: i64) -> Result<BiSeries, OracleError> {
    let lead = -(n as i64 + 2);
    let mut s = BiSeries::new(lead, truncation);
    let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    s.set(lead, ring_q(sign * factorial(n + 1), BigInt::one()));
    for k in 0..=truncation.max(-1) {
        let w = loop_value((n as i64 + k) as i32)?;
        s.set(k, SymPoly::constant(w).scale(&BigRational::new(BigInt::one(), factorial(k as u32))));
    }
    Ok(s)
}

/// Propagator series of an edge of decoration `n` (`n >= -1`) at argument `z`.
pub fn series_propagator(n: i32, truncation: i64) -> Result<BiSeries, OracleError> {
    match n {
        -1 => series_zhat(truncation),
        n if n >= 0 => series_phat_deriv(n as u32, truncation),
        n => Err(OracleError::Decoration(n)),
    }
}

/// Taylor expansion in `z` of an edge between the moving vertex and a third
/// vertex `x` once `z_v = z_w + z`.
///
/// With `reversed == false` the edge is `v -> x` and the coefficient of `z^u`
/// is `d^{m+u} P(z_w - z_x) / u!`; with `reversed == true` the edge is
/// `x -> v` and the coefficient is `(-1)^u d^{m+u} P(z_x - z_w) / u!`. A
/// decoration -1 edge also carries a constant z-bar term.
pub fn series_shift_expand(m: i32, tag: u32, reversed: bool, truncation: i64) -> Result<BiSeries, OracleError> {
    if m < -1 {
        return Err(OracleError::Decoration(m));
    }
    let mut s = BiSeries::new(0, truncation);
    for u in 0..=truncation.max(-1) {
        let mut c = BigRational::new(BigInt::one(), factorial(u as u32));
        if reversed && u % 2 == 1 {
            c = -c;
        }
        let sym = PropSymbol {
            dec: m + u as i32,
            tag,
            reversed,
        };
        s.set(u, SymPoly::term(vec![sym], RingElement::constant(c)));
    }
    if m == -1 {
        let c = if reversed { BigRational::one() } else { -BigRational::one() };
        s.set_zbar(0, 1, SymPoly::rational(c));
    }
    Ok(s)
}

/// An edge at the moving vertex `v`, for [`oracle_residue_2vertex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleEdge {
    pub dec: i32,
    /// The edge points into `v` (`v` is its tail).
    pub into_v: bool,
}

/// `Res_{z=0}(z^k * prod_{v-w edges} propagator * prod_{other edges}
/// expansion)`, z-bar terms dropped. Other edge `i` gets tag `i`.
pub fn oracle_residue_2vertex(between: &[OracleEdge], others: &[OracleEdge], k: i64) -> Result<SymPoly, OracleError> {
    if between.is_empty() {
        return Err(OracleError::NoJoiningEdge);
    }
    let singular: i64 = between.iter().map(|e| e.dec as i64 + 2).sum::<i64>() - k;
    let truncation = singular.max(0) + 2;
    let mut product = BiSeries::one(truncation);
    for e in between {
        let s = series_propagator(e.dec, truncation)?;
        let s = if e.into_v { s.negate_argument() } else { s };
        product = product.mul(&s);
    }
    for (i, e) in others.iter().enumerate() {
        product = product.mul(&series_shift_expand(e.dec, i as u32, e.into_v, truncation)?);
    }
    product.shift(k).residue()
}

/// `W` of the banana with the given decorations as `Res_{z=0}(prod d^{n_i}P
/// * Zhat dz)`.
pub fn oracle_evaluate_banana(decorations: &[u32]) -> Result<RingElement, OracleError> {
    if decorations.is_empty() {
        return Err(OracleError::NoJoiningEdge);
    }
    let singular: i64 = decorations.iter().map(|&n| n as i64 + 2).sum::<i64>() + 1;
    let truncation = singular + 2;
    let mut product = series_zhat(truncation)?.negate();
    for &n in decorations {
        product = product.mul(&series_phat_deriv(n, truncation)?);
    }
    Ok(product.residue()?.scalar_part())
}
