//! Bernoulli numbers, even zeta values, Eisenstein series and loop values.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ring::{Monomial, RingElement};
use super::RingError;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli number `B_n` with `B_1 = -1/2`, from `sum_{k<=n} C(n+1,k) B_k = 0`.
pub fn bernoulli(n: u32) -> BigRational {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]));
    let mut table = cache.lock().expect("bernoulli cache poisoned");
    while table.len() <= n as usize {
        let m = table.len() as u64;
        let mut sum = BigRational::zero();
        for (k, b) in table.iter().enumerate() {
            sum += BigRational::from_integer(binomial(m + 1, k as u64)) * b;
        }
        let next = -sum / BigRational::from_integer(BigInt::from(m + 1));
        table.push(next);
    }
    table[n as usize].clone()
}

/// `zeta(s)` for even `s >= 2`, as a rational multiple of `pi^s`.
pub fn zeta_even(s: u32) -> Result<RingElement, RingError> {
    if s == 0 || s % 2 == 1 {
        return Err(RingError::InvalidZetaArgument(s));
    }
    let n = s / 2;
    // (-1)^(n+1) B_{2n} (2 pi)^{2n} / (2 (2n)!)
    let sign = if n % 2 == 1 { rat(1) } else { rat(-1) };
    let two_pow = BigRational::from_integer(BigInt::from(2).pow(s));
    let q = sign * bernoulli(s) * two_pow
        / BigRational::from_integer(BigInt::from(2) * factorial(s));
    Ok(RingElement::term(q, Monomial::new(s, 0, 0, 0)))
}

fn divisor_power_sum(n: u64, p: u32) -> BigInt {
    let mut acc = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(p);
            let e = n / d;
            if e != d {
                acc += BigInt::from(e).pow(p);
            }
        }
        d += 1;
    }
    acc
}

/// First `n_terms` coefficients of the normalized Eisenstein series
/// `E_k = 1 - (2k/B_k) sum_{n>=1} sigma_{k-1}(n) q^n`.
pub fn q_expansion(k: u32, n_terms: usize) -> Result<Vec<BigRational>, RingError> {
    if k < 2 || k % 2 == 1 {
        return Err(RingError::InvalidEisensteinWeight(k));
    }
    if n_terms == 0 {
        return Ok(Vec::new());
    }
    let factor = -rat(2 * k as i64) / bernoulli(k);
    let mut out = Vec::with_capacity(n_terms);
    out.push(BigRational::one());
    for n in 1..n_terms as u64 {
        out.push(&factor * BigRational::from_integer(divisor_power_sum(n, k - 1)));
    }
    Ok(out)
}

fn series_mul(a: &[BigRational], b: &[BigRational], len: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Monomials `E4^a E6^b` with `4a + 6b = k`, ordered by increasing `b`.
fn weight_basis(k: u32) -> Vec<(u32, u32)> {
    (0..=k / 6)
        .filter(|b| (k - 6 * b) % 4 == 0)
        .map(|b| ((k - 6 * b) / 4, b))
        .collect()
}

/// q-expansion of `E4^a E6^b` truncated to `len` coefficients.
fn basis_expansion(a: u32, b: u32, len: usize) -> Vec<BigRational> {
    let e4 = q_expansion(4, len).expect("weight 4 valid");
    let e6 = q_expansion(6, len).expect("weight 6 valid");
    let mut acc = vec![BigRational::zero(); len];
    acc[0] = BigRational::one();
    for _ in 0..a {
        acc = series_mul(&acc, &e4, len);
    }
    for _ in 0..b {
        acc = series_mul(&acc, &e6, len);
    }
    acc
}

/// Solves `sum_j x_j * columns[j] = rhs` exactly. Every row is used, so an
/// over-determined system doubles as a consistency check.
fn solve_exact(columns: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(cols);
    for c in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][c].is_zero()) else {
            return None;
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][c].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..=cols {
                    let delta = &f * &m[pivot_row][j];
                    m[r][j] -= delta;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&r| m[r][cols].clone()).collect())
}

/// `E_k` written in the `E4`/`E6` polynomial basis (no `pi` factors).
pub fn reduce_ek(k: u32) -> Result<RingElement, RingError> {
    if k < 4 || k % 2 == 1 {
        return Err(RingError::InvalidEisensteinWeight(k));
    }
    static CACHE: OnceLock<Mutex<HashMap<u32, RingElement>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("reduce_ek cache poisoned").get(&k) {
        return Ok(hit.clone());
    }
    let basis = weight_basis(k);
    let len = basis.len() + 2;
    let columns: Vec<_> = basis.iter().map(|&(a, b)| basis_expansion(a, b, len)).collect();
    let target = q_expansion(k, len)?;
    let solution = solve_exact(&columns, &target).ok_or(RingError::InconsistentReduction(k))?;
    let out = RingElement::from_terms(
        basis
            .iter()
            .zip(solution)
            .map(|(&(a, b), c)| (c, Monomial::new(0, 0, a, b))),
    );
    cache
        .lock()
        .expect("reduce_ek cache poisoned")
        .insert(k, out.clone());
    Ok(out)
}

/// Lattice sum `G_k = 2 zeta(k) E_k` for even `k >= 4`.
pub fn eisenstein_g(k: u32) -> Result<RingElement, RingError> {
    if k < 4 || k % 2 == 1 {
        return Err(RingError::InvalidEisensteinWeight(k));
    }
    Ok(zeta_even(k)?.scale(&rat(2)) * reduce_ek(k)?)
}

/// Regularized value `W_k` of a loop with decoration `k`.
///
/// `W_{-1} = 0`, `W_0 = (pi^2/3) E2h`, `W_k = 0` for odd `k`, and
/// `W_k = (k+1)! G_{k+2}` otherwise.
pub fn loop_value(k: i32) -> Result<RingElement, RingError> {
    if k < -1 {
        return Err(RingError::InvalidLoopDecoration(k));
    }
    if k == -1 || k.is_odd() {
        return Ok(RingElement::zero());
    }
    if k == 0 {
        return Ok(RingElement::mono(1, 3, 2, 1, 0, 0));
    }
    static CACHE: OnceLock<Mutex<HashMap<i32, RingElement>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("loop cache poisoned").get(&k) {
        return Ok(hit.clone());
    }
    let g = eisenstein_g(k as u32 + 2)?;
    let out = g.scale(&BigRational::from_integer(factorial(k as u32 + 1)));
    cache
        .lock()
        .expect("loop cache poisoned")
        .insert(k, out.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Akiyama-Tanigawa; yields B_1 = +1/2, so only even indices are compared.
    fn bernoulli_akiyama_tanigawa(n: usize) -> BigRational {
        let mut a: Vec<BigRational> = (0..=n).map(|m| q(1, m as i64 + 1)).collect();
        for m in 0..=n {
            a[m] = q(1, m as i64 + 1);
            for j in (1..=m).rev() {
                a[j - 1] = rat(j as i64) * (&a[j - 1] - &a[j]);
            }
        }
        a[0].clone()
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), rat(1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(12), q(-691, 2730));
        assert_eq!(bernoulli(7), rat(0));
        for n in (2..30).step_by(2) {
            assert_eq!(bernoulli(n as u32), bernoulli_akiyama_tanigawa(n), "B_{n}");
        }
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_even(2).unwrap(), RingElement::mono(1, 6, 2, 0, 0, 0));
        assert_eq!(zeta_even(4).unwrap(), RingElement::mono(1, 90, 4, 0, 0, 0));
        assert_eq!(zeta_even(6).unwrap(), RingElement::mono(1, 945, 6, 0, 0, 0));
        assert!(zeta_even(3).is_err());
        assert!(zeta_even(0).is_err());
    }

    #[test]
    fn q_expansions() {
        assert_eq!(q_expansion(4, 3).unwrap(), vec![rat(1), rat(240), rat(2160)]);
        assert_eq!(q_expansion(6, 2).unwrap(), vec![rat(1), rat(-504)]);
        assert_eq!(q_expansion(10, 1).unwrap(), vec![rat(1)]);
        assert!(q_expansion(5, 3).is_err());
    }

    #[test]
    fn reductions() {
        assert_eq!(reduce_ek(4).unwrap(), RingElement::e4());
        assert_eq!(reduce_ek(6).unwrap(), RingElement::e6());
        assert_eq!(reduce_ek(8).unwrap(), RingElement::e4().pow(2));
        assert_eq!(reduce_ek(10).unwrap(), RingElement::e4() * RingElement::e6());
        let e12 = RingElement::mono(441, 691, 0, 0, 3, 0) + RingElement::mono(250, 691, 0, 0, 0, 2);
        assert_eq!(reduce_ek(12).unwrap(), e12);
    }

    #[test]
    fn reductions_match_longer_expansions() {
        for k in (4..=40).step_by(2) {
            let red = reduce_ek(k).unwrap();
            let n = 2 * weight_basis(k).len() + 2;
            let mut lhs = vec![BigRational::zero(); n];
            for (m, c) in red.terms() {
                let col = basis_expansion(m.e4, m.e6, n);
                for (i, v) in col.into_iter().enumerate() {
                    lhs[i] += c * v;
                }
            }
            assert_eq!(lhs, q_expansion(k, n).unwrap(), "E_{k}");
        }
    }

    #[test]
    fn eisenstein_lattice_sums() {
        assert_eq!(eisenstein_g(4).unwrap(), RingElement::mono(1, 45, 4, 0, 1, 0));
        assert_eq!(eisenstein_g(6).unwrap(), RingElement::mono(2, 945, 6, 0, 0, 1));
        assert_eq!(eisenstein_g(8).unwrap(), RingElement::mono(1, 4725, 8, 0, 2, 0));
        assert!(eisenstein_g(5).is_err());
    }

    #[test]
    fn g_constant_term_is_twice_zeta() {
        // The E-polynomial has constant q-term 1, so G_k's pi-part is 2 zeta(k).
        for k in (4..=20).step_by(2) {
            let red = reduce_ek(k).unwrap();
            let const_term: BigRational = red.terms().map(|(_, c)| c.clone()).sum();
            assert_eq!(const_term, rat(1), "E_{k} constant term");
            let two_zeta = zeta_even(k).unwrap().scale(&rat(2));
            let g = eisenstein_g(k).unwrap();
            let g_const: BigRational = g.terms().map(|(_, c)| c.clone()).sum();
            assert_eq!(g_const, two_zeta.terms().next().unwrap().1.clone());
        }
    }

    #[test]
    fn loop_values() {
        assert_eq!(loop_value(0).unwrap(), RingElement::mono(1, 3, 2, 1, 0, 0));
        assert_eq!(loop_value(2).unwrap(), RingElement::mono(2, 15, 4, 0, 1, 0));
        assert_eq!(loop_value(4).unwrap(), RingElement::mono(16, 63, 6, 0, 0, 1));
        assert!(loop_value(3).unwrap().is_zero());
        assert!(loop_value(-1).unwrap().is_zero());
        assert!(loop_value(-2).is_err());
        for k in (0..=24).step_by(2) {
            assert!(loop_value(k).unwrap().is_weight_matched(k as u32 + 2));
        }
    }
}
