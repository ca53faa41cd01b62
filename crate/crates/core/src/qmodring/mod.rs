//! The graded ring `Q[pi][E2h, E4, E6]` of almost-holomorphic modular forms
//! with rational coefficients, plus the constants needed to populate it.

mod constants;
pub mod format;
mod ring;

pub use constants::{bernoulli, eisenstein_g, loop_value, q_expansion, reduce_ek, zeta_even};
#[cfg(test)]
pub(crate) use constants::binomial;
pub(crate) use constants::factorial;
pub use ring::{Monomial, RingElement};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("term {0:?} carries E2h but too few powers of pi to differentiate")]
    NotWeightMatched(Monomial),
    #[error("zeta argument must be even and at least 2, got {0}")]
    InvalidZetaArgument(u32),
    #[error("Eisenstein weight {0} is not supported here")]
    InvalidEisensteinWeight(u32),
    #[error("loop decoration must be at least -1, got {0}")]
    InvalidLoopDecoration(i32),
    #[error("q-expansion system for E_{0} is inconsistent")]
    InconsistentReduction(u32),
    #[error("ring parse error: {0}")]
    Parse(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_weighted() -> impl Strategy<Value = RingElement> {
        prop::collection::vec(((-20i64..20), (1i64..10), 0u32..4, 0u32..3, 0u32..2), 0..5).prop_map(
            |ts| {
                ts.into_iter()
                    .map(|(n, d, a, b, c)| {
                        let m = Monomial::new(0, a, b, c);
                        RingElement::mono(n, d, m.weight() + 2, a, b, c)
                    })
                    .fold(RingElement::zero(), |acc, t| acc + t)
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_weighted(), b in arb_weighted(), c in arb_weighted()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn partial_y_is_a_derivation(a in arb_weighted(), b in arb_weighted()) {
            let lhs = (&a * &b).partial_y().unwrap();
            let rhs = &a * &b.partial_y().unwrap() + &b * &a.partial_y().unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn partial_y_lowers_matched_weight(e2 in 0u32..4, e4 in 0u32..3, e6 in 0u32..3, n in 1i64..30) {
            let m = Monomial::new(0, e2, e4, e6);
            let w = m.weight();
            let x = RingElement::mono(n, 7, w, e2, e4, e6);
            let d = x.partial_y().unwrap();
            if e2 == 0 {
                prop_assert!(d.is_zero());
            } else {
                prop_assert!(d.is_weight_matched(w - 2));
            }
        }
    }
}
