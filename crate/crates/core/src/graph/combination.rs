use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::DecoratedGraph;

/// Finite formal linear combination of decorated graphs with rational
/// coefficients. Keys are canonical graphs; zero coefficients are pruned.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphCombination {
    terms: BTreeMap<DecoratedGraph, BigRational>,
}

impl GraphCombination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(g: DecoratedGraph) -> Self {
        Self::term(BigRational::one(), g)
    }

    pub fn term(c: BigRational, g: DecoratedGraph) -> Self {
        let mut out = Self::new();
        out.add_term(c, g);
        out
    }

    pub fn add_term(&mut self, c: BigRational, g: DecoratedGraph) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&g) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&g);
                }
            }
            None => {
                self.terms.insert(g, c);
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DecoratedGraph, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &DecoratedGraph) -> BigRational {
        self.terms.get(g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::new();
        }
        GraphCombination {
            terms: self.terms.iter().map(|(g, x)| (g.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Applies a linear map graph-by-graph.
    pub fn map_linear<F, E>(&self, mut f: F) -> Result<Self, E>
    where
        F: FnMut(&DecoratedGraph) -> Result<GraphCombination, E>,
    {
        let mut out = Self::new();
        for (g, c) in &self.terms {
            out += f(g)?.scale(c);
        }
        Ok(out)
    }
}

impl AddAssign<GraphCombination> for GraphCombination {
    fn add_assign(&mut self, rhs: GraphCombination) {
        for (g, c) in rhs.terms {
            self.add_term(c, g);
        }
    }
}

impl AddAssign<&GraphCombination> for GraphCombination {
    fn add_assign(&mut self, rhs: &GraphCombination) {
        for (g, c) in &rhs.terms {
            self.add_term(c.clone(), g.clone());
        }
    }
}

impl Add for GraphCombination {
    type Output = GraphCombination;
    fn add(mut self, rhs: GraphCombination) -> GraphCombination {
        self += rhs;
        self
    }
}

impl FromIterator<(BigRational, DecoratedGraph)> for GraphCombination {
    fn from_iter<I: IntoIterator<Item = (BigRational, DecoratedGraph)>>(iter: I) -> Self {
        let mut out = Self::new();
        for (c, g) in iter {
            out.add_term(c, g);
        }
        out
    }
}
