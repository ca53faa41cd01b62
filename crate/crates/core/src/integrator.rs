//! Evaluation `W: V(G) -> Q[pi][E2h, E4, E6]` by iterated vertex elimination.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::graph::format::{combination_to_json, to_json as graph_to_json};
use crate::graph::{DecoratedGraph, Edge, GraphCombination, GraphError, Label, Loop};
use crate::qmodring::format::{rational_to_string, to_json as ring_to_json};
use crate::qmodring::{factorial, loop_value, RingElement, RingError};
use crate::residual::{self, enumerate_assignments, ResidualError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Residual(#[from] ResidualError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("cannot integrate out the only vertex `{0}`")]
    LastVertex(String),
    #[error("the anomaly equation needs decorations >= 0, found an edge with decoration -1")]
    MinusOneDecoration,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("a banana needs at least one edge")]
    EmptyBanana,
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn loop_product(loops: &[Loop]) -> RingElement {
    let mut acc = RingElement::one();
    for l in loops {
        let w = loop_value(l.dec as i32).expect("loop decorations are >= 0");
        if w.is_zero() {
            return RingElement::zero();
        }
        acc = &acc * &w;
    }
    acc
}

/// `int dz_v`: the combination on `|V| - 1` vertices whose value equals the
/// value of `g`.
///
/// Uses `-sum_{x in N(v)} Res_x^{(v)}[0]` applied to `delta_bar_inverse(g, v,
/// lift)`. A vertex without edges integrates to 1, its loops moving to the
/// lowest remaining vertex. `lift` defaults to the lowest neighbor.
pub fn integrate_vertex(g: &DecoratedGraph, v: &Label, lift: Option<&Label>) -> Result<GraphCombination, EvalError> {
    let neighbors = g.neighbors(v);
    g.incidence(v)?;
    if neighbors.is_empty() {
        let target = g
            .vertices()
            .iter()
            .find(|x| *x != v)
            .ok_or_else(|| EvalError::LastVertex(v.to_string()))?
            .clone();
        let vertices: Vec<Label> = g.vertices().iter().filter(|x| *x != v).cloned().collect();
        let loops = g
            .loops()
            .iter()
            .map(|l| if &l.vertex == v { Loop::new(target.clone(), l.dec) } else { l.clone() })
            .collect();
        let h = DecoratedGraph::from_parts(vertices, g.edges().to_vec(), loops)?;
        return Ok(GraphCombination::single(h));
    }
    let lift = lift.unwrap_or(&neighbors[0]);
    let gamma = residual::delta_bar_inverse(g, v, lift)?;
    let minus_one = rational(-1);
    let mut out = GraphCombination::new();
    for (h, c) in gamma.iter() {
        let scale = c * &minus_one;
        for x in h.neighbors(v) {
            residual::for_each_residual_term(h, v, &x, 0, |_, _, coeff, q| out.add_term(&coeff * &scale, q))?;
        }
    }
    Ok(out)
}

/// Which vertex to eliminate next.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum VertexOrder {
    /// Fewest incident edges, ties broken by the lowest label.
    #[default]
    FewestEdges,
    /// First label of the list still carrying edges; falls back to
    /// `FewestEdges` when none of them does.
    Priority(Vec<Label>),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Strategy {
    pub order: VertexOrder,
    /// The lift neighbor is `N(v)[neighbor_rank mod |N(v)|]`.
    pub neighbor_rank: usize,
}

impl Strategy {
    fn pick_vertex(&self, g: &DecoratedGraph) -> Label {
        if let VertexOrder::Priority(list) = &self.order {
            if let Some(v) = list.iter().find(|v| g.has_vertex(v) && g.degree(v) > 0) {
                return v.clone();
            }
        }
        g.vertices()
            .iter()
            .filter(|v| g.degree(v) > 0)
            .min_by_key(|v| (g.degree(v), (*v).clone()))
            .expect("graph has edges")
            .clone()
    }

    fn pick_lift(&self, g: &DecoratedGraph, v: &Label) -> Label {
        let n = g.neighbors(v);
        n[self.neighbor_rank % n.len()].clone()
    }
}

/// Memoizing evaluator for a fixed [`Strategy`].
#[derive(Debug, Default)]
pub struct Evaluator {
    strategy: Strategy,
    memo: HashMap<DecoratedGraph, RingElement>,
}

impl Evaluator {
    pub fn new(strategy: Strategy) -> Self {
        Evaluator {
            strategy,
            memo: HashMap::new(),
        }
    }

    pub fn evaluate(&mut self, g: &DecoratedGraph) -> RingElement {
        let loops = loop_product(g.loops());
        if loops.is_zero() {
            return loops;
        }
        let touched: BTreeSet<Label> = g.edges().iter().flat_map(|e| [e.head.clone(), e.tail.clone()]).collect();
        if touched.is_empty() {
            return loops;
        }
        if touched.iter().any(|v| g.degree(v) == 1) {
            return RingElement::zero();
        }
        let bare = DecoratedGraph::from_parts_unchecked(touched.into_iter().collect(), g.edges().to_vec(), vec![]);
        let rest = self.evaluate_loopless(&bare);
        &loops * &rest
    }

    pub fn evaluate_combination(&mut self, x: &GraphCombination) -> RingElement {
        let mut acc = RingElement::zero();
        for (g, c) in x.iter() {
            acc += self.evaluate(g).scale(c);
        }
        acc
    }

    /// `g` has no loops, no isolated vertices and no dangling vertices.
    fn evaluate_loopless(&mut self, g: &DecoratedGraph) -> RingElement {
        if let Some(hit) = self.memo.get(g) {
            return hit.clone();
        }
        let components = g.components();
        let value = if components.len() > 1 {
            let mut acc = RingElement::one();
            for c in &components {
                let part = g.induced(c);
                acc = &acc * &self.evaluate_loopless(&part);
                if acc.is_zero() {
                    break;
                }
            }
            acc
        } else {
            let v = self.strategy.pick_vertex(g);
            let lift = self.strategy.pick_lift(g, &v);
            let next = integrate_vertex(g, &v, Some(&lift)).expect("vertex has neighbors");
            self.evaluate_combination(&next)
        };
        self.memo.insert(g.clone(), value.clone());
        value
    }
}

/// `W(g)` with the default strategy.
pub fn evaluate(g: &DecoratedGraph) -> RingElement {
    Evaluator::default().evaluate(g)
}

/// Linear extension of [`evaluate`].
pub fn evaluate_combination(x: &GraphCombination) -> RingElement {
    Evaluator::default().evaluate_combination(x)
}

/// `W` of the 2-vertex banana with the given decorations, by the closed
/// formula over the lifted edge set `E` (the decorations plus one -1 edge):
/// `-sum_{A} (-1)^{omega(A)} sum_{u in P(E\A, omega(A)-1)} prod_A (n+1)! /
/// prod u! * prod_{E\A} W_{n+u}` over nonempty proper `A`.
pub fn banana_closed_form(decorations: &[u32]) -> Result<RingElement, EvalError> {
    if decorations.is_empty() {
        return Err(EvalError::EmptyBanana);
    }
    let mut lifted: Vec<i32> = vec![-1];
    lifted.extend(decorations.iter().map(|&d| d as i32));
    let n = lifted.len();
    let mut total = RingElement::zero();
    for mask in 1u64..((1u64 << n) - 1) {
        let inside: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).collect();
        let outside: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 0).collect();
        let omega: i64 = inside.iter().map(|&i| lifted[i] as i64 + 2).sum();
        let mut num = BigInt::one();
        for &i in &inside {
            num *= factorial((lifted[i] + 1) as u32);
        }
        let sign = if omega % 2 == 0 { 1 } else { -1 };
        for u in enumerate_assignments(&outside, (omega - 1) as u32) {
            let mut term = RingElement::one();
            let mut den = BigInt::one();
            for (&i, &x) in u.targets.iter().zip(&u.values) {
                den *= factorial(x);
                term = &term * &loop_value(lifted[i] + x as i32)?;
            }
            if term.is_zero() {
                continue;
            }
            total += term.scale(&(BigRational::new(num.clone(), den) * rational(sign)));
        }
    }
    Ok(-total)
}

/// Both sides of `d_Y W(g) = W(delta g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnomalyReport {
    pub lhs: RingElement,
    pub rhs: RingElement,
    pub equal: bool,
}

pub fn check_anomaly(g: &DecoratedGraph) -> Result<AnomalyReport, EvalError> {
    if g.edges().iter().any(|e| e.dec < 0) {
        return Err(EvalError::MinusOneDecoration);
    }
    let mut ev = Evaluator::default();
    let lhs = ev.evaluate(g).partial_y()?;
    let rhs = ev.evaluate_combination(&residual::delta(g));
    let equal = lhs == rhs;
    Ok(AnomalyReport { lhs, rhs, equal })
}

/// `d_Y W(g) = sum_e (W(g \ e) - W(g / e))` for loopless simple graphs with
/// all decorations 0.
pub fn check_simple_anomaly(g: &DecoratedGraph) -> Result<bool, EvalError> {
    if !g.loops().is_empty() {
        return Err(EvalError::Hypothesis("graph has loops".into()));
    }
    if g.edges().iter().any(|e| e.dec != 0) {
        return Err(EvalError::Hypothesis("some edge decoration is not 0".into()));
    }
    for (i, e) in g.edges().iter().enumerate() {
        if g.edges_between(&e.head, &e.tail).len() > 1 {
            return Err(EvalError::Hypothesis(format!("multiple edges join {} and {}", e.head, e.tail)));
        }
        debug_assert!(i < g.edges().len());
    }
    let mut ev = Evaluator::default();
    let lhs = ev.evaluate(g).partial_y()?;
    let mut rhs = RingElement::zero();
    for (i, e) in g.edges().iter().enumerate() {
        rhs += ev.evaluate(&g.delete(crate::graph::Element::Edge(i))?);
        // the single A = {e} stratum with u = 0, sign dropped
        let contracted = residual::residual_graph(g, &e.tail, &e.head, 1)?;
        debug_assert_eq!(contracted.len(), 1);
        for (q, _) in contracted.iter() {
            rhs -= &ev.evaluate(q);
        }
    }
    Ok(lhs == rhs)
}

/// One elimination of one term of the running combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub level: usize,
    pub graph: DecoratedGraph,
    pub coefficient: BigRational,
    pub vertex: Label,
    pub lift: Option<Label>,
    pub lifted: GraphCombination,
    pub strata: Vec<TraceStratum>,
    pub result: GraphCombination,
}

/// One `(A, u, C_{A,u}, quotient)` tuple of a 0-shifted residual graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStratum {
    pub source: DecoratedGraph,
    pub neighbor: Label,
    pub subset: Vec<usize>,
    pub assignment: Vec<u32>,
    pub targets: Vec<usize>,
    pub coefficient: BigRational,
    pub quotient: DecoratedGraph,
}

/// Audit record of a level-by-level elimination without shortcuts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EliminationTrace {
    pub steps: Vec<TraceStep>,
    /// Terminal graphs on at most one vertex.
    pub final_terms: GraphCombination,
}

#[derive(Serialize)]
struct StratumLine<'a> {
    source: serde_json::Value,
    neighbor: &'a str,
    subset: &'a [usize],
    targets: &'a [usize],
    assignment: &'a [u32],
    coeff: String,
    quotient: serde_json::Value,
}

impl EliminationTrace {
    /// Sum over terminal graphs of coefficient times loop values.
    pub fn replay(&self) -> RingElement {
        let mut acc = RingElement::zero();
        for (g, c) in self.final_terms.iter() {
            acc += loop_product(g.loops()).scale(c);
        }
        acc
    }

    /// One JSON object per elimination step, then a final summary line.
    pub fn to_json_lines(&self) -> String {
        let parse = |s: String| serde_json::from_str::<serde_json::Value>(&s).expect("valid JSON");
        let mut out = String::new();
        for s in &self.steps {
            let strata: Vec<serde_json::Value> = s
                .strata
                .iter()
                .map(|t| {
                    serde_json::to_value(StratumLine {
                        source: parse(graph_to_json(&t.source)),
                        neighbor: t.neighbor.as_str(),
                        subset: &t.subset,
                        targets: &t.targets,
                        assignment: &t.assignment,
                        coeff: rational_to_string(&t.coefficient),
                        quotient: parse(graph_to_json(&t.quotient)),
                    })
                    .expect("stratum JSON")
                })
                .collect();
            let line = json!({
                "level": s.level,
                "graph": parse(graph_to_json(&s.graph)),
                "coeff": rational_to_string(&s.coefficient),
                "vertex": s.vertex.as_str(),
                "lift": s.lift.as_ref().map(|l| l.as_str()),
                "lifted": parse(combination_to_json(&s.lifted)),
                "strata": strata,
                "result": parse(combination_to_json(&s.result)),
            });
            out.push_str(&line.to_string());
            out.push('\n');
        }
        let last = json!({
            "final": parse(combination_to_json(&self.final_terms)),
            "value": parse(ring_to_json(&self.replay())),
        });
        out.push_str(&last.to_string());
        out.push('\n');
        out
    }
}

/// Evaluates `g` by plain level-synchronous elimination (default vertex
/// choice, lowest lift neighbor, no shortcuts) and records every step.
pub fn evaluate_traced(g: &DecoratedGraph) -> Result<(RingElement, EliminationTrace), EvalError> {
    let strategy = Strategy::default();
    let mut trace = EliminationTrace::default();
    let mut current = GraphCombination::single(g.clone());
    let mut level = 0;
    loop {
        let mut next = GraphCombination::new();
        let mut progressed = false;
        for (h, c) in current.iter() {
            if h.vertices().len() <= 1 {
                trace.final_terms.add_term(c.clone(), h.clone());
                continue;
            }
            progressed = true;
            let v = if h.edges().is_empty() {
                h.vertices()[0].clone()
            } else {
                strategy.pick_vertex(h)
            };
            let (lift, lifted, strata) = if h.degree(&v) == 0 {
                (None, GraphCombination::single(h.clone()), Vec::new())
            } else {
                let lift = strategy.pick_lift(h, &v);
                let lifted = residual::delta_bar_inverse(h, &v, &lift)?;
                let mut strata = Vec::new();
                for (src, _) in lifted.iter() {
                    for x in src.neighbors(&v) {
                        for t in residual::residual_terms(src, &v, &x, 0)? {
                            strata.push(TraceStratum {
                                source: src.clone(),
                                neighbor: x.clone(),
                                subset: t.subset,
                                targets: t.assignment.targets,
                                assignment: t.assignment.values,
                                coefficient: t.coefficient,
                                quotient: t.quotient,
                            });
                        }
                    }
                }
                (Some(lift), lifted, strata)
            };
            let result = integrate_vertex(h, &v, lift.as_ref())?;
            next += result.scale(c);
            trace.steps.push(TraceStep {
                level,
                graph: h.clone(),
                coefficient: c.clone(),
                vertex: v,
                lift,
                lifted,
                strata,
                result,
            });
        }
        if !progressed {
            break;
        }
        // terminal terms were already moved to final_terms
        current = next;
        level += 1;
    }
    let value = trace.replay();
    Ok((value, trace))
}

/// Convenience for building bananas `v -> w`.
pub fn banana(decorations: &[i32]) -> DecoratedGraph {
    DecoratedGraph::from_edges(decorations.iter().map(|&d| Edge::new("v", "w", d)).collect(), vec![])
        .expect("banana edges are valid")
}
