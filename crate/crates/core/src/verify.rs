//! Seeded random corpora and the invariant suites run by `ellgraph verify`
//! and the acceptance tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{format, DecoratedGraph, Edge, Element, GraphCombination, Label, Loop};
use crate::integrator::{
    banana, banana_closed_form, check_anomaly, evaluate, integrate_vertex, Evaluator, Strategy, VertexOrder,
};
use crate::oracle::{oracle_evaluate_banana, oracle_residue_2vertex, OracleEdge, PropSymbol, SymPoly};
use crate::qmodring::{loop_value, RingElement};
use crate::residual::{delta_bar_combination, delta_bar_inverse, residual_graph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusConfig {
    pub seed: u64,
    pub count: usize,
    pub max_vertices: usize,
    pub max_weight: i64,
    pub max_dec: u32,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            seed: 0,
            count: 200,
            max_vertices: 4,
            max_weight: 12,
            max_dec: 4,
        }
    }
}

fn vertex_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("v{i}")
    }
}

/// A random graph with `n` vertices, nonnegative decorations and total
/// weight at most `max_weight`. Every vertex is touched by some edge.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, max_weight: i64, max_dec: u32) -> DecoratedGraph {
    assert!(n >= 2);
    let names: Vec<Label> = (0..n).map(|i| Label::new(&vertex_name(i))).collect();
    let mut edges = Vec::new();
    let mut loops = Vec::new();
    let mut budget = max_weight;
    let pick_dec = |rng: &mut R, budget: i64| -> Option<i32> {
        let cap = (budget - 2).min(max_dec as i64);
        (cap >= 0).then(|| rng.gen_range(0..=cap) as i32)
    };
    // a random spanning path keeps most graphs connected
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for pair in order.windows(2) {
        let Some(d) = pick_dec(rng, budget) else { break };
        let (h, t) = if rng.gen_bool(0.5) { (pair[0], pair[1]) } else { (pair[1], pair[0]) };
        edges.push(Edge::new(names[h].clone(), names[t].clone(), d));
        budget -= d as i64 + 2;
    }
    let extra = rng.gen_range(0..=3);
    for _ in 0..extra {
        let Some(d) = pick_dec(rng, budget) else { break };
        if rng.gen_ratio(1, 5) {
            let v = rng.gen_range(0..n);
            loops.push(Loop::new(names[v].clone(), d as u32));
        } else {
            let h = rng.gen_range(0..n);
            let t = (h + rng.gen_range(1..n)) % n;
            edges.push(Edge::new(names[h].clone(), names[t].clone(), d));
        }
        budget -= d as i64 + 2;
    }
    DecoratedGraph::from_parts(names, edges, loops).expect("generated graph is valid")
}

/// `cfg.count` graphs with 2 to `cfg.max_vertices` vertices. Graphs with a
/// dangling vertex are mostly rejected since they evaluate to 0 trivially.
pub fn random_corpus(cfg: &CorpusConfig) -> Vec<DecoratedGraph> {
    corpus_with_sizes(cfg, 2)
}

/// Like [`random_corpus`] but with at least `min_vertices` vertices.
pub fn corpus_with_sizes(cfg: &CorpusConfig, min_vertices: usize) -> Vec<DecoratedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let lo = min_vertices.max(2);
    let hi = cfg.max_vertices.max(lo);
    let mut out = Vec::with_capacity(cfg.count);
    while out.len() < cfg.count {
        let n = rng.gen_range(lo..=hi);
        let g = random_graph(&mut rng, n, cfg.max_weight, cfg.max_dec);
        if has_dangling_vertex(&g) && !rng.gen_ratio(1, 10) {
            continue;
        }
        out.push(g);
    }
    out
}

pub fn has_dangling_vertex(g: &DecoratedGraph) -> bool {
    g.vertices().iter().any(|v| g.degree(v) == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn permutations(items: &[Label]) -> Vec<Vec<Label>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head.clone());
            out.push(tail);
        }
    }
    out
}

/// Every vertex order (as a priority list) combined with every lift rank up
/// to the maximal degree gives the same value.
pub fn order_independence(corpus: &[DecoratedGraph]) -> SuiteReport {
    let mut r = SuiteReport::new("order-independence");
    for g in corpus {
        let base = evaluate(g);
        let ranks = g.vertices().iter().map(|v| g.neighbors(v).len()).max().unwrap_or(1).max(1);
        for order in permutations(g.vertices()) {
            for rank in 0..ranks {
                let strategy = Strategy {
                    order: VertexOrder::Priority(order.clone()),
                    neighbor_rank: rank,
                };
                let got = Evaluator::new(strategy).evaluate(g);
                r.check(got == base, || {
                    format!("{}: order {:?} rank {rank} gives {got}, default {base}", format::to_inline(g), order)
                });
            }
        }
    }
    r
}

/// At every graph reachable by elimination, every (vertex, lift) choice
/// yields a combination of the same value. By induction on the number of
/// vertices this covers every elimination path, including paths that change
/// the lift rule from one step to the next.
pub fn choice_independence(corpus: &[DecoratedGraph]) -> SuiteReport {
    let mut r = SuiteReport::new("choice-independence");
    let mut ev = Evaluator::default();
    let mut seen = std::collections::HashSet::new();
    let mut stack: Vec<DecoratedGraph> = corpus.to_vec();
    while let Some(g) = stack.pop() {
        if !seen.insert(g.clone()) {
            continue;
        }
        let base = ev.evaluate(&g);
        for v in g.vertices() {
            for w in g.neighbors(v) {
                let next = match integrate_vertex(&g, v, Some(&w)) {
                    Ok(x) => x,
                    Err(e) => {
                        r.check(false, || format!("{}: eliminating {v}: {e}", format::to_inline(&g)));
                        continue;
                    }
                };
                let got = ev.evaluate_combination(&next);
                r.check(got == base, || {
                    format!("{}: eliminating {v} lifted to {w} gives {got}, expected {base}", format::to_inline(&g))
                });
                stack.extend(next.iter().map(|(h, _)| h.clone()).filter(|h| !h.edges().is_empty()));
            }
        }
    }
    r
}

pub fn homogeneity(corpus: &[DecoratedGraph]) -> SuiteReport {
    let mut r = SuiteReport::new("weight-homogeneity");
    for g in corpus {
        let value = evaluate(g);
        let w = g.total_weight();
        r.check(w >= 0 && value.is_weight_matched(w as u32), || {
            format!("{}: {value} is not homogeneous of weight {w}", format::to_inline(g))
        });
    }
    r
}

pub fn anomaly(corpus: &[DecoratedGraph]) -> SuiteReport {
    let mut r = SuiteReport::new("anomaly");
    for g in corpus {
        match check_anomaly(g) {
            Ok(rep) => r.check(rep.equal, || {
                format!("{}: d_Y W = {}, W(delta) = {}", format::to_inline(g), rep.lhs, rep.rhs)
            }),
            Err(e) => r.check(false, || format!("{}: {e}", format::to_inline(g))),
        }
    }
    r
}

pub fn parity(corpus: &[DecoratedGraph]) -> SuiteReport {
    let mut r = SuiteReport::new("parity");
    for g in corpus {
        let base = evaluate(g);
        for (i, e) in g.edges().iter().enumerate() {
            let got = evaluate(&g.reverse(Element::Edge(i)).expect("edge exists"));
            let expected = if e.dec % 2 == 0 { base.clone() } else { -&base };
            r.check(got == expected, || format!("{}: reversing edge {i} gives {got}", format::to_inline(g)));
        }
    }
    r
}

/// `delta_bar_v(delta_bar_inverse(g, v, w)) = g` for every vertex `v` and
/// every neighbor `w`, on the corpus and on the corpus with one edge at `v`
/// turned into a -1 edge.
pub fn round_trip(corpus: &[DecoratedGraph]) -> SuiteReport {
    let mut r = SuiteReport::new("round-trip");
    for g in corpus {
        let mut variants = vec![g.clone()];
        if let Some(e) = g.edges().first() {
            let mut edges = g.edges().to_vec();
            edges[0] = Edge::new(e.head.clone(), e.tail.clone(), -1);
            variants.push(DecoratedGraph::from_parts(g.vertices().to_vec(), edges, g.loops().to_vec()).unwrap());
        }
        for h in &variants {
            for v in h.vertices() {
                for w in h.neighbors(v) {
                    let ok = delta_bar_inverse(h, v, &w)
                        .and_then(|x| delta_bar_combination(&x, v))
                        .map(|back| back == GraphCombination::single(h.clone()))
                        .unwrap_or(false);
                    r.check(ok, || format!("{}: round trip at {v} lifting to {w}", format::to_inline(h)));
                }
            }
        }
    }
    r
}

/// A pendant vertex kills the value, both through the shortcut and through
/// an explicit elimination of the pendant vertex.
pub fn dangling(corpus: &[DecoratedGraph], seed: u64) -> SuiteReport {
    let mut r = SuiteReport::new("dangling");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for g in corpus {
        let anchor = g.vertices()[rng.gen_range(0..g.vertices().len())].clone();
        let p = Label::new("pendant");
        let d = rng.gen_range(0..=3);
        let e = if rng.gen_bool(0.5) {
            Edge::new(p.clone(), anchor.clone(), d)
        } else {
            Edge::new(anchor.clone(), p.clone(), d)
        };
        let mut vertices = g.vertices().to_vec();
        vertices.push(p.clone());
        let mut edges = g.edges().to_vec();
        edges.push(e);
        let h = DecoratedGraph::from_parts(vertices, edges, g.loops().to_vec()).unwrap();
        r.check(evaluate(&h).is_zero(), || format!("{}: shortcut", format::to_inline(&h)));
        let explicit = integrate_vertex(&h, &p, None)
            .map(|x| Evaluator::default().evaluate_combination(&x))
            .map(|x| x.is_zero())
            .unwrap_or(false);
        r.check(explicit, || format!("{}: eliminating the pendant vertex", format::to_inline(&h)));
    }
    r
}

pub fn multiplicativity(corpus: &[DecoratedGraph]) -> SuiteReport {
    let mut r = SuiteReport::new("multiplicativity");
    for pair in corpus.chunks(2) {
        if let [a, b] = pair {
            let (u, _) = a.union(b);
            let got = evaluate(&u);
            r.check(got == &evaluate(a) * &evaluate(b), || {
                format!("{} with {}", format::to_inline(a), format::to_inline(b))
            });
        }
    }
    r
}

/// `evaluate`, `banana_closed_form` and the series oracle agree on every
/// banana with at most `max_edges` edges and decorations at most `max_dec`.
pub fn banana_agreement(max_edges: usize, max_dec: u32) -> SuiteReport {
    let mut r = SuiteReport::new("banana-agreement");
    for len in 1..=max_edges {
        for decs in nondecreasing(len, max_dec) {
            let signed: Vec<i32> = decs.iter().map(|&d| d as i32).collect();
            let a = evaluate(&banana(&signed));
            let b = banana_closed_form(&decs).ok();
            let c = oracle_evaluate_banana(&decs).ok();
            r.check(b.as_ref() == Some(&a) && c.as_ref() == Some(&a), || {
                format!("banana {decs:?}: evaluate {a}, closed form {b:?}, oracle {c:?}")
            });
        }
    }
    r
}

/// Decoration multisets: bananas are symmetric in their edges.
fn nondecreasing(len: usize, max: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in nondecreasing(len - 1, max) {
        let lo = rest.last().copied().unwrap_or(0);
        for d in lo..=max {
            let mut x = rest.clone();
            x.push(d);
            out.push(x);
        }
    }
    out
}

/// The residual graph of a 2-vertex star, read as a polynomial in shifted
/// propagators: loops at `w` become loop values, an edge between `w` and
/// `x<i>` becomes the symbol with tag `i`.
pub fn residual_as_sympoly(x: &GraphCombination, w: &Label) -> SymPoly {
    let mut out = SymPoly::zero();
    for (q, c) in x.iter() {
        let mut value = RingElement::constant(c.clone());
        for l in q.loops() {
            value = &value * &loop_value(l.dec as i32).expect("loop decorations are nonnegative");
        }
        let mut symbols = Vec::new();
        for e in q.edges() {
            let (other, reversed) = if &e.head == w { (&e.tail, false) } else { (&e.head, true) };
            let tag: u32 = other.as_str().trim_start_matches('x').parse().expect("other vertices are x<i>");
            symbols.push(PropSymbol { dec: e.dec, tag, reversed });
        }
        out = &out + &SymPoly::term(symbols, value);
    }
    out
}

/// The 2-vertex star described by oracle edges: `v`, `w`, and one vertex
/// `x<i>` per other edge.
pub fn star_graph(between: &[OracleEdge], others: &[OracleEdge]) -> DecoratedGraph {
    let (v, w) = (Label::new("v"), Label::new("w"));
    let mut vertices = vec![v.clone(), w.clone()];
    let mut edges = Vec::new();
    for e in between {
        edges.push(if e.into_v {
            Edge::new(w.clone(), v.clone(), e.dec)
        } else {
            Edge::new(v.clone(), w.clone(), e.dec)
        });
    }
    for (i, e) in others.iter().enumerate() {
        let x = Label::new(&format!("x{i}"));
        vertices.push(x.clone());
        edges.push(if e.into_v {
            Edge::new(x, v.clone(), e.dec)
        } else {
            Edge::new(v.clone(), x, e.dec)
        });
    }
    DecoratedGraph::from_parts(vertices, edges, vec![]).expect("star graph is valid")
}

/// Compares `Res_w^{(v)}[k]` against the series oracle for one star.
pub fn oracle_matches(between: &[OracleEdge], others: &[OracleEdge], k: i64) -> Result<bool, String> {
    let g = star_graph(between, others);
    let res = residual_graph(&g, &"v".into(), &"w".into(), k).map_err(|e| e.to_string())?;
    let oracle = oracle_residue_2vertex(between, others, k).map_err(|e| e.to_string())?;
    Ok(residual_as_sympoly(&res, &"w".into()) == oracle)
}

/// Random stars (1 to 3 joining edges, up to 2 other edges, decorations
/// -1..=max_dec, both orientations, `k` in {0, 1}) against the oracle.
pub fn oracle_equivalence(seed: u64, count: usize, max_dec: u32) -> SuiteReport {
    let mut r = SuiteReport::new("oracle-equivalence");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0c1e);
    let edge = |rng: &mut ChaCha8Rng| OracleEdge {
        dec: rng.gen_range(-1..=max_dec as i32),
        into_v: rng.gen_bool(0.5),
    };
    for _ in 0..count {
        let between: Vec<OracleEdge> = (0..rng.gen_range(1..=3)).map(|_| edge(&mut rng)).collect();
        let others: Vec<OracleEdge> = (0..rng.gen_range(0..=2)).map(|_| edge(&mut rng)).collect();
        let k = rng.gen_range(0..=1);
        let ok = oracle_matches(&between, &others, k);
        r.check(ok == Ok(true), || format!("between {between:?}, others {others:?}, k = {k}: {ok:?}"));
    }
    r
}

/// The full battery used by `ellgraph verify`.
pub fn run_all(cfg: &CorpusConfig) -> Vec<SuiteReport> {
    let corpus = random_corpus(cfg);
    let small: Vec<DecoratedGraph> = corpus.iter().take(cfg.count.min(50)).cloned().collect();
    vec![
        order_independence(&small),
        choice_independence(&small),
        homogeneity(&corpus),
        oracle_equivalence(cfg.seed, 200, cfg.max_dec),
        banana_agreement(cfg.max_vertices.min(4), cfg.max_dec),
        round_trip(&corpus),
        parity(&corpus),
        anomaly(&corpus),
        dangling(&small, cfg.seed),
        multiplicativity(&small),
    ]
}
