//! Text, JSON and LaTeX forms of [`RingElement`].
//!
//! Text form: `(-1/9)*pi^4*E2h^2 + (1/9)*pi^4*E4`, terms in descending
//! monomial order, every coefficient parenthesized, zero written as `0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use super::ring::rational_to_string;
use super::ring::{rational_is_negative, Monomial, RingElement};
use super::RingError;

pub fn to_text(x: &RingElement) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = x
        .terms()
        .rev()
        .map(|(m, c)| {
            let mut s = format!("({})", rational_to_string(c));
            for (name, e) in [("pi", m.pi), ("E2h", m.e2), ("E4", m.e4), ("E6", m.e6)] {
                match e {
                    0 => {}
                    1 => {
                        s.push('*');
                        s.push_str(name);
                    }
                    _ => s.push_str(&format!("*{name}^{e}")),
                }
            }
            s
        })
        .collect();
    parts.join(" + ")
}

pub fn to_latex(x: &RingElement) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in x.terms().rev().enumerate() {
        let neg = rational_is_negative(c);
        let abs = if neg { -c.clone() } else { c.clone() };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let is_unit_monomial = *m == Monomial::ONE;
        if !abs.is_one() || is_unit_monomial {
            if abs.denom().is_one() {
                out.push_str(&abs.numer().to_string());
            } else {
                out.push_str(&format!("\\frac{{{}}}{{{}}}", abs.numer(), abs.denom()));
            }
        }
        for (name, e) in [
            ("\\pi", m.pi),
            ("\\widehat{E}_2", m.e2),
            ("E_4", m.e4),
            ("E_6", m.e6),
        ] {
            match e {
                0 => {}
                1 => out.push_str(name),
                _ => out.push_str(&format!("{name}^{{{e}}}")),
            }
        }
    }
    out
}

pub fn parse_rational(s: &str) -> Result<BigRational, RingError> {
    let bad = || RingError::Parse(format!("invalid rational `{s}`"));
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

fn split_top_level_plus(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_term(s: &str) -> Result<(BigRational, Monomial), RingError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RingError::Parse("empty term".into()));
    }
    let (coeff, rest) = if let Some(inner) = s.strip_prefix('(') {
        let close = inner
            .find(')')
            .ok_or_else(|| RingError::Parse(format!("unbalanced parenthesis in `{s}`")))?;
        let rest = inner[close + 1..].trim();
        let rest = match rest.strip_prefix('*') {
            Some(r) => r,
            None if rest.is_empty() => rest,
            None => return Err(RingError::Parse(format!("expected `*` in `{s}`"))),
        };
        (parse_rational(&inner[..close])?, rest)
    } else if s.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
        let end = s.find('*').unwrap_or(s.len());
        let rest = if end < s.len() { &s[end + 1..] } else { "" };
        (parse_rational(&s[..end])?, rest)
    } else {
        (BigRational::one(), s)
    };
    let mut m = Monomial::ONE;
    if rest.trim().is_empty() {
        return Ok((coeff, m));
    }
    for factor in rest.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => (
                n.trim(),
                e.trim()
                    .parse::<u32>()
                    .map_err(|_| RingError::Parse(format!("invalid exponent in `{factor}`")))?,
            ),
            None => (factor, 1),
        };
        match name {
            "pi" => m.pi += exp,
            "E2h" => m.e2 += exp,
            "E4" => m.e4 += exp,
            "E6" => m.e6 += exp,
            other => return Err(RingError::Parse(format!("unknown symbol `{other}`"))),
        }
    }
    Ok((coeff, m))
}

/// Parses the text form. Accepts the canonical output of [`to_text`] plus
/// looser spacing, unparenthesized coefficients and repeated factors.
pub fn parse_text(s: &str) -> Result<RingElement, RingError> {
    let s = s.trim();
    if s == "0" {
        return Ok(RingElement::zero());
    }
    let terms = split_top_level_plus(s)
        .into_iter()
        .map(parse_term)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RingElement::from_terms(terms))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub pi: u32,
    #[serde(rename = "E2h")]
    pub e2h: u32,
    #[serde(rename = "E4")]
    pub e4: u32,
    #[serde(rename = "E6")]
    pub e6: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonRing {
    pub terms: Vec<JsonTerm>,
}

impl From<&RingElement> for JsonRing {
    fn from(x: &RingElement) -> Self {
        JsonRing {
            terms: x
                .terms()
                .rev()
                .map(|(m, c)| JsonTerm {
                    coeff: rational_to_string(c),
                    pi: m.pi,
                    e2h: m.e2,
                    e4: m.e4,
                    e6: m.e6,
                })
                .collect(),
        }
    }
}

impl TryFrom<&JsonRing> for RingElement {
    type Error = RingError;
    fn try_from(j: &JsonRing) -> Result<Self, RingError> {
        let terms = j
            .terms
            .iter()
            .map(|t| {
                Ok((
                    parse_rational(&t.coeff)?,
                    Monomial::new(t.pi, t.e2h, t.e4, t.e6),
                ))
            })
            .collect::<Result<Vec<_>, RingError>>()?;
        Ok(RingElement::from_terms(terms))
    }
}

pub fn to_json(x: &RingElement) -> String {
    serde_json::to_string(&JsonRing::from(x)).expect("ring JSON serialization")
}

pub fn parse_json(s: &str) -> Result<RingElement, RingError> {
    let j: JsonRing = serde_json::from_str(s).map_err(|e| RingError::Parse(e.to_string()))?;
    RingElement::try_from(&j)
}
