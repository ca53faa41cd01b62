//! Assignments, collapse coefficients, shifted residual graphs and the graph
//! operators `delta`, `delta_bar_v` and a right inverse of `delta_bar_v`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{DecoratedGraph, Edge, Element, GraphCombination, GraphError, Label, Loop};
use crate::qmodring::factorial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResidualError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("cannot collapse vertex `{0}` into itself")]
    SameVertex(String),
    #[error("collapsed edge set is empty")]
    EmptySubset,
    #[error("edge {0} does not join the collapsed pair")]
    NotBetween(usize),
    #[error("assignment does not cover exactly the remaining edges at the collapsed vertex")]
    AssignmentDomain,
}

/// Compositions of `total` into `len` ordered nonnegative parts, in
/// colexicographic order starting from `[total, 0, ..., 0]`.
#[derive(Debug, Clone)]
pub struct Compositions {
    current: Option<Vec<u32>>,
}

impl Compositions {
    pub fn new(len: usize, total: u32) -> Self {
        let current = match len {
            0 if total == 0 => Some(Vec::new()),
            0 => None,
            _ => {
                let mut v = vec![0; len];
                v[0] = total;
                Some(v)
            }
        };
        Compositions { current }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let len = out.len();
        if let Some(i) = out.iter().position(|&x| x > 0).filter(|&i| i + 1 < len) {
            let mut next = out.clone();
            let t = next[i];
            next[i] = 0;
            next[0] = t - 1;
            next[i + 1] += 1;
            self.current = Some(next);
        }
        Some(out)
    }
}

/// An element of `P(A, m)`: values attached to an ordered list of edge
/// indices, summing to `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub targets: Vec<usize>,
    pub values: Vec<u32>,
}

impl Assignment {
    pub fn total(&self) -> u32 {
        self.values.iter().sum()
    }

    pub fn get(&self, edge: usize) -> Option<u32> {
        self.targets.iter().position(|&e| e == edge).map(|i| self.values[i])
    }
}

/// Enumerates `P(targets, total)` in colexicographic order.
pub fn enumerate_assignments(targets: &[usize], total: u32) -> impl Iterator<Item = Assignment> + '_ {
    Compositions::new(targets.len(), total).map(move |values| Assignment {
        targets: targets.to_vec(),
        values,
    })
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Local structure of `v` relative to `w`.
struct Star {
    /// `E_{v,w}`.
    between: Vec<usize>,
    /// `E_v \ E_w`.
    others: Vec<usize>,
    /// Parity of `omega(E_v^- ∩ E_{v,w})`.
    base_parity: i64,
}

fn star(g: &DecoratedGraph, v: &Label, w: &Label) -> Result<Star, ResidualError> {
    if v == w {
        return Err(ResidualError::SameVertex(v.to_string()));
    }
    let inc = g.incidence(v)?;
    if !g.has_vertex(w) {
        return Err(GraphError::UnknownVertex(w.to_string()).into());
    }
    let edges = g.edges();
    let mut between = Vec::new();
    let mut others = Vec::new();
    let mut base_parity = 0;
    for i in inc.edges() {
        let e = &edges[i];
        if e.touches(w) {
            between.push(i);
            if &e.tail == v {
                base_parity += e.weight();
            }
        } else {
            others.push(i);
        }
    }
    Ok(Star {
        between,
        others,
        base_parity,
    })
}

fn coefficient_from(g: &DecoratedGraph, v: &Label, st: &Star, subset: &[usize], u: &Assignment) -> BigRational {
    let edges = g.edges();
    let mut parity = st.base_parity;
    let mut num = BigInt::one();
    for &i in subset {
        parity += edges[i].weight();
        num *= factorial((edges[i].dec + 1) as u32);
    }
    let mut den = BigInt::one();
    for (&i, &x) in u.targets.iter().zip(&u.values) {
        den *= factorial(x);
        if &edges[i].tail == v && st.others.contains(&i) {
            parity += x as i64;
        }
    }
    let c = BigRational::new(num, den);
    if parity.rem_euclid(2) == 1 {
        -c
    } else {
        c
    }
}

/// The collapse coefficient `C_{A,u}` for collapsing `v` into `w`.
///
/// `subset` must be a nonempty set of edges joining `v` and `w`, and `u` must
/// assign to exactly the other edges at `v`.
pub fn collapse_coefficient(
    g: &DecoratedGraph,
    v: &Label,
    w: &Label,
    subset: &[usize],
    u: &Assignment,
) -> Result<BigRational, ResidualError> {
    let st = star(g, v, w)?;
    if subset.is_empty() {
        return Err(ResidualError::EmptySubset);
    }
    if let Some(&bad) = subset.iter().find(|i| !st.between.contains(i)) {
        return Err(ResidualError::NotBetween(bad));
    }
    let mut rest: Vec<usize> = st
        .between
        .iter()
        .chain(&st.others)
        .copied()
        .filter(|i| !subset.contains(i))
        .collect();
    rest.sort_unstable();
    let mut dom = u.targets.clone();
    dom.sort_unstable();
    if dom != rest || u.targets.len() != u.values.len() {
        return Err(ResidualError::AssignmentDomain);
    }
    Ok(coefficient_from(g, v, &st, subset, u))
}

/// One `(A, u)` stratum of a shifted residual graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualTerm {
    pub subset: Vec<usize>,
    pub assignment: Assignment,
    pub coefficient: BigRational,
    pub quotient: DecoratedGraph,
}

/// `(Gamma/A, n+u)`: `v` is merged into `w`. Returns `None` when an edge of
/// `E_{v,w} \ A` would become a loop of decoration -1 (its value is 0).
fn quotient(g: &DecoratedGraph, v: &Label, w: &Label, subset: &[usize], u: &Assignment) -> Option<DecoratedGraph> {
    let vertices: Vec<Label> = g.vertices().iter().filter(|x| *x != v).cloned().collect();
    let mut edges = Vec::with_capacity(g.edges().len());
    let mut loops: Vec<Loop> = Vec::with_capacity(g.loops().len() + u.targets.len());
    for (i, e) in g.edges().iter().enumerate() {
        if subset.contains(&i) {
            continue;
        }
        if !e.touches(v) {
            edges.push(e.clone());
            continue;
        }
        let dec = e.dec + u.get(i).expect("assignment covers E_v \\ A") as i32;
        let other = e.other(v).expect("edge touches v");
        if other == w {
            if dec < 0 {
                return None;
            }
            loops.push(Loop::new(w.clone(), dec as u32));
        } else if &e.head == v {
            edges.push(Edge::new(w.clone(), other.clone(), dec));
        } else {
            edges.push(Edge::new(other.clone(), w.clone(), dec));
        }
    }
    for l in g.loops() {
        if &l.vertex == v {
            loops.push(Loop::new(w.clone(), l.dec));
        } else {
            loops.push(l.clone());
        }
    }
    Some(DecoratedGraph::from_parts_unchecked(vertices, edges, loops))
}

/// Visits every nonzero stratum of `Res_w^{(v)}[k](g)`.
///
/// Strata whose quotient would carry a loop of decoration -1 are skipped,
/// since `W_{-1} = 0`.
pub fn for_each_residual_term<F>(
    g: &DecoratedGraph,
    v: &Label,
    w: &Label,
    k: i64,
    mut visit: F,
) -> Result<(), ResidualError>
where
    F: FnMut(&[usize], &Assignment, BigRational, DecoratedGraph),
{
    let st = star(g, v, w)?;
    let n = st.between.len();
    if n == 0 {
        return Ok(());
    }
    for mask in 1u64..(1u64 << n) {
        let subset: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| st.between[b]).collect();
        let omega: i64 = subset.iter().map(|&i| g.edges()[i].weight()).sum();
        let total = omega - 1 - k;
        if total < 0 {
            continue;
        }
        let mut targets: Vec<usize> = st
            .between
            .iter()
            .chain(&st.others)
            .copied()
            .filter(|i| !subset.contains(i))
            .collect();
        targets.sort_unstable();
        for u in enumerate_assignments(&targets, total as u32) {
            if let Some(q) = quotient(g, v, w, &subset, &u) {
                let c = coefficient_from(g, v, &st, &subset, &u);
                visit(&subset, &u, c, q);
            }
        }
    }
    Ok(())
}

/// All nonzero strata of `Res_w^{(v)}[k](g)`, for auditing.
pub fn residual_terms(g: &DecoratedGraph, v: &Label, w: &Label, k: i64) -> Result<Vec<ResidualTerm>, ResidualError> {
    let mut out = Vec::new();
    for_each_residual_term(g, v, w, k, |subset, u, coefficient, quotient| {
        out.push(ResidualTerm {
            subset: subset.to_vec(),
            assignment: u.clone(),
            coefficient,
            quotient,
        })
    })?;
    Ok(out)
}

/// `Res_w^{(v)}[k](g)`: `v` collapsing into `w` with shift `k`.
pub fn residual_graph(g: &DecoratedGraph, v: &Label, w: &Label, k: i64) -> Result<GraphCombination, ResidualError> {
    let mut out = GraphCombination::new();
    for_each_residual_term(g, v, w, k, |_, _, c, q| out.add_term(c, q))?;
    Ok(out)
}

/// The anomaly operator: deletion of decoration-0 edges and loops, minus half
/// the 1-shifted residual graphs over ordered pairs of distinct vertices.
pub fn delta(g: &DecoratedGraph) -> GraphCombination {
    let mut out = GraphCombination::new();
    for (i, e) in g.edges().iter().enumerate() {
        if e.dec == 0 {
            out.add_term(BigRational::one(), g.delete(Element::Edge(i)).expect("edge exists"));
        }
    }
    for (i, l) in g.loops().iter().enumerate() {
        if l.dec == 0 {
            out.add_term(BigRational::one(), g.delete(Element::Loop(i)).expect("loop exists"));
        }
    }
    let minus_half = BigRational::new(BigInt::from(-1), BigInt::from(2));
    for v in g.vertices() {
        for w in g.neighbors(v) {
            let res = residual_graph(g, v, &w, 1).expect("vertices exist and differ");
            out += res.scale(&minus_half);
        }
    }
    out
}

/// `delta_bar_v`: signed deletion of decoration -1 edges at `v`, `+` when
/// `v` is the head and `-` when it is the tail.
pub fn delta_bar(g: &DecoratedGraph, v: &Label) -> Result<GraphCombination, ResidualError> {
    let inc = g.incidence(v)?;
    let mut out = GraphCombination::new();
    for (indices, sign) in [(&inc.plus, 1), (&inc.minus, -1)] {
        for &i in indices {
            if g.edges()[i].dec == -1 {
                out.add_term(int(sign), g.delete(Element::Edge(i))?);
            }
        }
    }
    Ok(out)
}

/// Linear extension of [`delta_bar`].
pub fn delta_bar_combination(x: &GraphCombination, v: &Label) -> Result<GraphCombination, ResidualError> {
    x.map_linear(|g| delta_bar(g, v))
}

/// A combination `gamma` with `delta_bar(gamma, v) = g` exactly.
///
/// Writing `g = T^l f` with `T` a decoration -1 edge `v -> w` and `f` free of
/// such edges, `gamma = sum_{k>=1} (-1)^{k-1} T^{l+k} / ((l+1)...(l+k)) *
/// delta_bar_v^{k-1} f`. The sum stops once the iterated `delta_bar_v` has
/// removed every remaining -1 edge at `v`.
pub fn delta_bar_inverse(g: &DecoratedGraph, v: &Label, w: &Label) -> Result<GraphCombination, ResidualError> {
    if v == w {
        return Err(ResidualError::SameVertex(v.to_string()));
    }
    g.incidence(v)?;
    if !g.has_vertex(w) {
        return Err(GraphError::UnknownVertex(w.to_string()).into());
    }
    let t = Edge::new(v.clone(), w.clone(), -1);
    let l = g.edges().iter().filter(|e| **e == t).count();
    let f_edges: Vec<Edge> = g.edges().iter().filter(|e| **e != t).cloned().collect();
    let f = DecoratedGraph::from_parts_unchecked(g.vertices().to_vec(), f_edges, g.loops().to_vec());

    let mut out = GraphCombination::new();
    let mut current = GraphCombination::single(f);
    let mut coeff = BigRational::one();
    let mut k = 1usize;
    while !current.is_empty() {
        coeff /= int((l + k) as i64);
        if k > 1 {
            coeff = -coeff;
        }
        for (h, c) in current.iter() {
            out.add_term(c * &coeff, h.with_edges(&t, l + k)?);
        }
        current = delta_bar_combination(&current, v)?;
        k += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmodring::binomial;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn graph(edges: &[(&str, &str, i32)], loops: &[(&str, u32)]) -> DecoratedGraph {
        DecoratedGraph::from_edges(
            edges.iter().map(|&(h, t, d)| Edge::new(h, t, d)).collect(),
            loops.iter().map(|&(v, d)| Loop::new(v, d)).collect(),
        )
        .unwrap()
    }

    fn lbl(s: &str) -> Label {
        Label::new(s)
    }

    #[test]
    fn compositions_colex() {
        let all: Vec<Vec<u32>> = Compositions::new(2, 1).collect();
        assert_eq!(all, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(Compositions::new(1, 3).collect::<Vec<_>>(), vec![vec![3]]);
        let three: Vec<Vec<u32>> = Compositions::new(3, 2).collect();
        assert_eq!(
            three,
            vec![vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 2]]
        );
        assert_eq!(Compositions::new(0, 0).count(), 1);
        assert_eq!(Compositions::new(0, 2).count(), 0);
    }

    #[test]
    fn composition_counts_match_stars_and_bars() {
        for len in 1..=5usize {
            for m in 0..=8u32 {
                let all: Vec<Vec<u32>> = Compositions::new(len, m).collect();
                let expected = binomial(m as u64 + len as u64 - 1, len as u64 - 1);
                assert_eq!(BigInt::from(all.len()), expected);
                // brute force: every vector in [0, m]^len with the right sum, once
                let mut brute = 0usize;
                let mut digits = vec![0u32; len];
                loop {
                    if digits.iter().sum::<u32>() == m {
                        brute += 1;
                        assert!(all.contains(&digits));
                    }
                    let mut i = 0;
                    while i < len && digits[i] == m {
                        digits[i] = 0;
                        i += 1;
                    }
                    if i == len {
                        break;
                    }
                    digits[i] += 1;
                }
                assert_eq!(brute, all.len());
            }
        }
    }

    #[test]
    fn collapse_coefficients_of_lifted_banana() {
        // edges v->w with decorations -1, 0, 0
        let g = graph(&[("v", "w", -1), ("v", "w", 0), ("v", "w", 0)], &[]);
        let (v, w) = (lbl("v"), lbl("w"));
        let minus_one = 0; // canonical order puts dec -1 first
        assert_eq!(g.edges()[minus_one].dec, -1);
        // A = {0 edge}, u = 1 on the -1 edge
        let u = Assignment { targets: vec![0, 2], values: vec![1, 0] };
        assert_eq!(collapse_coefficient(&g, &v, &w, &[1], &u).unwrap(), q(1, 1));
        // A = {-1 edge, 0 edge}, u = 2 on the survivor
        let u = Assignment { targets: vec![2], values: vec![2] };
        assert_eq!(collapse_coefficient(&g, &v, &w, &[0, 1], &u).unwrap(), q(-1, 2));
        // A = both 0 edges, u = 3 on the -1 edge
        let u = Assignment { targets: vec![0], values: vec![3] };
        assert_eq!(collapse_coefficient(&g, &v, &w, &[1, 2], &u).unwrap(), q(1, 6));
        // A = {-1 edge}, u = 0
        let u = Assignment { targets: vec![1, 2], values: vec![0, 0] };
        assert_eq!(collapse_coefficient(&g, &v, &w, &[0], &u).unwrap(), q(-1, 1));
    }

    #[test]
    fn collapse_coefficient_errors() {
        let g = graph(&[("v", "w", 0), ("v", "x", 0)], &[]);
        let (v, w) = (lbl("v"), lbl("w"));
        let u = Assignment { targets: vec![1], values: vec![0] };
        assert_eq!(collapse_coefficient(&g, &v, &w, &[], &u), Err(ResidualError::EmptySubset));
        assert_eq!(collapse_coefficient(&g, &v, &w, &[1], &u), Err(ResidualError::NotBetween(1)));
        let bad = Assignment { targets: vec![0], values: vec![0] };
        assert_eq!(collapse_coefficient(&g, &v, &w, &[0], &bad), Err(ResidualError::AssignmentDomain));
        assert!(matches!(collapse_coefficient(&g, &v, &v, &[0], &u), Err(ResidualError::SameVertex(_))));
    }

    #[test]
    fn tail_edges_to_other_vertices_carry_u_sign() {
        // x -> v edge picks up (-1)^u
        let g = graph(&[("v", "w", 0), ("v", "w", 0), ("x", "v", 0)], &[]);
        let (v, w) = (lbl("v"), lbl("w"));
        let x_edge = g.edges().iter().position(|e| e.head.as_str() == "x").unwrap();
        let u = Assignment { targets: vec![1, x_edge], values: vec![0, 1] };
        assert_eq!(collapse_coefficient(&g, &v, &w, &[0], &u).unwrap(), q(-1, 1));
    }

    #[test]
    fn one_shifted_residual_of_two_banana() {
        let g = graph(&[("v", "w", 0), ("v", "w", 0)], &[]);
        let r = residual_graph(&g, &lbl("v"), &lbl("w"), 1).unwrap();
        let expected = GraphCombination::term(q(2, 1), graph(&[], &[("w", 0)]));
        assert_eq!(r, expected);
        let r = residual_graph(&g, &lbl("w"), &lbl("v"), 1).unwrap();
        assert_eq!(r, GraphCombination::term(q(2, 1), graph(&[], &[("v", 0)])));
    }

    #[test]
    fn one_shifted_residual_of_three_banana() {
        let g = graph(&[("v", "w", 0), ("v", "w", 0), ("v", "w", 0)], &[]);
        let r = residual_graph(&g, &lbl("v"), &lbl("w"), 1).unwrap();
        assert_eq!(r.coefficient(&graph(&[], &[("w", 0), ("w", 0)])), q(3, 1));
        // the |A| = 2 stratum: three choices, each 1!1!/2!
        assert_eq!(r.coefficient(&graph(&[], &[("w", 2)])), q(3, 2));
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn residual_without_joining_edges_is_empty() {
        let g = graph(&[("v", "x", 0), ("w", "x", 0)], &[]);
        assert!(residual_graph(&g, &lbl("v"), &lbl("w"), 0).unwrap().is_empty());
        assert!(residual_graph(&g, &lbl("v"), &lbl("v"), 0).is_err());
    }

    #[test]
    fn quotient_moves_edges_and_loops() {
        let g = graph(&[("v", "w", 0), ("v", "x", 1), ("y", "v", 2)], &[("v", 4)]);
        let terms = residual_terms(&g, &lbl("v"), &lbl("w"), 1).unwrap();
        // omega(A) - 2 = 0, so u = 0 everywhere
        assert_eq!(terms.len(), 1);
        let expected = DecoratedGraph::from_parts(
            vec![lbl("w"), lbl("x"), lbl("y")],
            vec![Edge::new("w", "x", 1), Edge::new("y", "w", 2)],
            vec![Loop::new("w", 4)],
        )
        .unwrap();
        assert_eq!(terms[0].quotient, expected);
        assert_eq!(terms[0].coefficient, q(1, 1));
    }

    #[test]
    fn delta_of_two_banana() {
        let g = graph(&[("v", "w", 0), ("v", "w", 0)], &[]);
        let d = delta(&g);
        let mut expected = GraphCombination::term(q(2, 1), graph(&[("v", "w", 0)], &[]));
        expected.add_term(q(-1, 1), graph(&[], &[("w", 0)]));
        expected.add_term(q(-1, 1), graph(&[], &[("v", 0)]));
        assert_eq!(d, expected);
    }

    #[test]
    fn delta_of_bare_vertex_is_empty() {
        let g = DecoratedGraph::from_parts(vec![lbl("v")], vec![], vec![]).unwrap();
        assert!(delta(&g).is_empty());
        assert!(delta(&DecoratedGraph::empty()).is_empty());
    }

    #[test]
    fn delta_bar_signs() {
        let head = graph(&[("v", "w", -1), ("v", "w", 0)], &[]);
        assert_eq!(
            delta_bar(&head, &lbl("v")).unwrap(),
            GraphCombination::single(graph(&[("v", "w", 0)], &[]))
        );
        let tail = graph(&[("w", "v", -1), ("v", "w", 0)], &[]);
        assert_eq!(
            delta_bar(&tail, &lbl("v")).unwrap(),
            GraphCombination::term(q(-1, 1), graph(&[("v", "w", 0)], &[]))
        );
        assert!(delta_bar(&graph(&[("v", "w", 0)], &[]), &lbl("v")).unwrap().is_empty());
        assert!(delta_bar(&head, &lbl("z")).is_err());
    }

    #[test]
    fn delta_bar_inverse_of_banana() {
        let g = graph(&[("v", "w", 0), ("v", "w", 0)], &[]);
        let gamma = delta_bar_inverse(&g, &lbl("v"), &lbl("w")).unwrap();
        let lifted = graph(&[("v", "w", -1), ("v", "w", 0), ("v", "w", 0)], &[]);
        assert_eq!(gamma, GraphCombination::single(lifted));
        assert_eq!(delta_bar_combination(&gamma, &lbl("v")).unwrap(), GraphCombination::single(g));
    }

    #[test]
    fn delta_bar_inverse_with_existing_minus_one_edges() {
        let g = graph(
            &[("v", "w", -1), ("w", "v", -1), ("x", "v", -1), ("v", "x", 0), ("v", "w", 2)],
            &[("v", 0)],
        );
        let gamma = delta_bar_inverse(&g, &lbl("v"), &lbl("w")).unwrap();
        assert!(gamma.len() > 1);
        assert_eq!(delta_bar_combination(&gamma, &lbl("v")).unwrap(), GraphCombination::single(g.clone()));
        let gamma = delta_bar_inverse(&g, &lbl("v"), &lbl("x")).unwrap();
        assert_eq!(delta_bar_combination(&gamma, &lbl("v")).unwrap(), GraphCombination::single(g));
    }

    fn arb_graph() -> impl Strategy<Value = DecoratedGraph> {
        let names = ["a", "b", "c", "d"];
        (
            prop::collection::vec((0usize..4, 1usize..4, -1i32..4), 0..7),
            prop::collection::vec((0usize..4, 0u32..3), 0..3),
        )
            .prop_map(move |(es, ls)| {
                let edges = es
                    .into_iter()
                    .map(|(h, off, d)| Edge::new(names[h], names[(h + off) % 4], d))
                    .collect();
                let loops = ls.into_iter().map(|(v, d)| Loop::new(names[v], d)).collect();
                DecoratedGraph::from_parts(names.iter().map(|s| lbl(s)).collect::<Vec<_>>(), edges, loops).unwrap()
            })
    }

    proptest! {
        #[test]
        fn delta_bar_inverse_round_trip(g in arb_graph(), vi in 0usize..4, off in 1usize..4) {
            let names = ["a", "b", "c", "d"];
            let v = lbl(names[vi]);
            let w = lbl(names[(vi + off) % 4]);
            let gamma = delta_bar_inverse(&g, &v, &w).unwrap();
            prop_assert_eq!(delta_bar_combination(&gamma, &v).unwrap(), GraphCombination::single(g));
        }
    }
}
