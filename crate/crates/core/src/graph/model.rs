use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::GraphError;

/// Vertex label. Cheap to clone; ordered by string content.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(s: &str) -> Self {
        Label(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label(Arc::from(s))
    }
}

/// Directed edge carrying the propagator `d^dec P(z_head - z_tail)`.
/// Decoration `-1` stands for the antiderivative propagator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub head: Label,
    pub tail: Label,
    pub dec: i32,
}

impl Edge {
    pub fn new(head: impl Into<Label>, tail: impl Into<Label>, dec: i32) -> Self {
        Edge {
            head: head.into(),
            tail: tail.into(),
            dec,
        }
    }

    pub fn touches(&self, v: &Label) -> bool {
        &self.head == v || &self.tail == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(&self, v: &Label) -> Option<&Label> {
        if &self.head == v {
            Some(&self.tail)
        } else if &self.tail == v {
            Some(&self.head)
        } else {
            None
        }
    }

    /// `n_e + 2`.
    pub fn weight(&self) -> i64 {
        self.dec as i64 + 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loop {
    pub vertex: Label,
    pub dec: u32,
}

impl Loop {
    pub fn new(vertex: impl Into<Label>, dec: u32) -> Self {
        Loop {
            vertex: vertex.into(),
            dec,
        }
    }

    pub fn weight(&self) -> i64 {
        self.dec as i64 + 2
    }
}

/// Reference to one edge or loop of a graph, by index into the canonical lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Edge(usize),
    Loop(usize),
}

/// Edges and loops incident to a vertex, as indices into the graph's lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Incidence {
    /// Edges whose head is the vertex.
    pub plus: Vec<usize>,
    /// Edges whose tail is the vertex.
    pub minus: Vec<usize>,
    pub loops: Vec<usize>,
}

impl Incidence {
    /// `E_v = E_v^+ ∪ E_v^-`, sorted.
    pub fn edges(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.plus.iter().chain(&self.minus).copied().collect();
        all.sort_unstable();
        all
    }
}

/// A decorated multigraph in canonical form: vertices sorted, edges sorted by
/// `(head, tail, dec)`, loops sorted by `(vertex, dec)`.
///
/// Two graphs are equal exactly when their canonical forms coincide; vertex
/// labels are significant and no isomorphism quotient is taken.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecoratedGraph {
    vertices: Vec<Label>,
    edges: Vec<Edge>,
    loops: Vec<Loop>,
}

impl DecoratedGraph {
    pub fn empty() -> Self {
        DecoratedGraph::default()
    }

    /// Validates and canonicalizes. Every endpoint must be listed in `vertices`.
    pub fn from_parts(
        vertices: impl IntoIterator<Item = Label>,
        edges: Vec<Edge>,
        loops: Vec<Loop>,
    ) -> Result<Self, GraphError> {
        let vertex_set: BTreeSet<Label> = vertices.into_iter().collect();
        for e in &edges {
            if e.head == e.tail {
                return Err(GraphError::SelfEdge(e.head.to_string()));
            }
            if e.dec < -1 {
                return Err(GraphError::EdgeDecoration(e.dec as i64));
            }
            for end in [&e.head, &e.tail] {
                if !vertex_set.contains(end) {
                    return Err(GraphError::UnknownVertex(end.to_string()));
                }
            }
        }
        for l in &loops {
            if !vertex_set.contains(&l.vertex) {
                return Err(GraphError::UnknownVertex(l.vertex.to_string()));
            }
        }
        Ok(Self::from_parts_unchecked(
            vertex_set.into_iter().collect(),
            edges,
            loops,
        ))
    }

    /// Like [`from_parts`](Self::from_parts), declaring every endpoint as a vertex.
    pub fn from_edges(edges: Vec<Edge>, loops: Vec<Loop>) -> Result<Self, GraphError> {
        let vertices: Vec<Label> = edges
            .iter()
            .flat_map(|e| [e.head.clone(), e.tail.clone()])
            .chain(loops.iter().map(|l| l.vertex.clone()))
            .collect();
        Self::from_parts(vertices, edges, loops)
    }

    /// Internal constructor: inputs are trusted to be valid; `vertices` must
    /// already be sorted and deduplicated.
    pub(crate) fn from_parts_unchecked(
        vertices: Vec<Label>,
        mut edges: Vec<Edge>,
        mut loops: Vec<Loop>,
    ) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        edges.sort_unstable();
        loops.sort_unstable();
        DecoratedGraph {
            vertices,
            edges,
            loops,
        }
    }

    /// Canonical representative. Construction already canonicalizes, so this
    /// is the identity on valid graphs.
    pub fn canonicalize(&self) -> Self {
        self.clone()
    }

    pub fn vertices(&self) -> &[Label] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    pub fn has_vertex(&self, v: &Label) -> bool {
        self.vertices.binary_search(v).is_ok()
    }

    fn require_vertex(&self, v: &Label) -> Result<(), GraphError> {
        if self.has_vertex(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v.to_string()))
        }
    }

    pub fn incidence(&self, v: &Label) -> Result<Incidence, GraphError> {
        self.require_vertex(v)?;
        let mut inc = Incidence::default();
        for (i, e) in self.edges.iter().enumerate() {
            if &e.head == v {
                inc.plus.push(i);
            } else if &e.tail == v {
                inc.minus.push(i);
            }
        }
        inc.loops = self
            .loops
            .iter()
            .enumerate()
            .filter(|(_, l)| &l.vertex == v)
            .map(|(i, _)| i)
            .collect();
        Ok(inc)
    }

    /// Number of edges (not loops) at `v`.
    pub fn degree(&self, v: &Label) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Indices of the edges joining `v` and `w`, in either direction.
    pub fn edges_between(&self, v: &Label, w: &Label) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| (&e.head == v && &e.tail == w) || (&e.head == w && &e.tail == v))
            .map(|(i, _)| i)
            .collect()
    }

    /// `N(v)`: vertices sharing at least one edge with `v`, sorted.
    pub fn neighbors(&self, v: &Label) -> Vec<Label> {
        let set: BTreeSet<&Label> = self.edges.iter().filter_map(|e| e.other(v)).collect();
        set.into_iter().cloned().collect()
    }

    /// `omega(A) = sum (n_e + 2)`.
    pub fn weight(&self, subset: &[Element]) -> Result<i64, GraphError> {
        subset.iter().try_fold(0i64, |acc, el| {
            let w = match *el {
                Element::Edge(i) => self.edges.get(i).map(Edge::weight),
                Element::Loop(i) => self.loops.get(i).map(Loop::weight),
            };
            w.map(|w| acc + w).ok_or(GraphError::UnknownElement(*el))
        })
    }

    /// Weight of all edges and loops; the modular weight of `W(g)`.
    pub fn total_weight(&self) -> i64 {
        self.edges.iter().map(Edge::weight).sum::<i64>()
            + self.loops.iter().map(Loop::weight).sum::<i64>()
    }

    pub fn reverse_edge(&self, index: usize) -> Result<Self, GraphError> {
        let e = self
            .edges
            .get(index)
            .ok_or(GraphError::UnknownElement(Element::Edge(index)))?;
        let mut edges = self.edges.clone();
        edges[index] = Edge {
            head: e.tail.clone(),
            tail: e.head.clone(),
            dec: e.dec,
        };
        Ok(Self::from_parts_unchecked(
            self.vertices.clone(),
            edges,
            self.loops.clone(),
        ))
    }

    /// Edge reversal addressed through [`Element`]; loops have no direction.
    pub fn reverse(&self, el: Element) -> Result<Self, GraphError> {
        match el {
            Element::Edge(i) => self.reverse_edge(i),
            Element::Loop(_) => Err(GraphError::LoopHasNoDirection),
        }
    }

    /// `Γ \ e`; vertices are kept.
    pub fn delete(&self, el: Element) -> Result<Self, GraphError> {
        let mut edges = self.edges.clone();
        let mut loops = self.loops.clone();
        match el {
            Element::Edge(i) if i < edges.len() => {
                edges.remove(i);
            }
            Element::Loop(i) if i < loops.len() => {
                loops.remove(i);
            }
            _ => return Err(GraphError::UnknownElement(el)),
        }
        Ok(DecoratedGraph {
            vertices: self.vertices.clone(),
            edges,
            loops,
        })
    }

    pub fn without_loops(&self) -> Self {
        DecoratedGraph {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            loops: Vec::new(),
        }
    }

    /// Adds `count` copies of an edge between existing vertices.
    pub fn with_edges(&self, edge: &Edge, count: usize) -> Result<Self, GraphError> {
        if edge.head == edge.tail {
            return Err(GraphError::SelfEdge(edge.head.to_string()));
        }
        if edge.dec < -1 {
            return Err(GraphError::EdgeDecoration(edge.dec as i64));
        }
        self.require_vertex(&edge.head)?;
        self.require_vertex(&edge.tail)?;
        let mut edges = self.edges.clone();
        edges.extend(std::iter::repeat_n(edge.clone(), count));
        Ok(Self::from_parts_unchecked(
            self.vertices.clone(),
            edges,
            self.loops.clone(),
        ))
    }

    /// Restriction to a vertex subset (edges must not leave it).
    pub(crate) fn induced(&self, keep: &BTreeSet<Label>) -> Self {
        DecoratedGraph {
            vertices: self.vertices.iter().filter(|v| keep.contains(*v)).cloned().collect(),
            edges: self
                .edges
                .iter()
                .filter(|e| keep.contains(&e.head))
                .cloned()
                .collect(),
            loops: self
                .loops
                .iter()
                .filter(|l| keep.contains(&l.vertex))
                .cloned()
                .collect(),
        }
    }

    /// Vertex sets of connected components (edges only), in label order.
    pub fn components(&self) -> Vec<BTreeSet<Label>> {
        let index: BTreeMap<&Label, usize> =
            self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.edges {
            let a = find(&mut parent, index[&e.head]);
            let b = find(&mut parent, index[&e.tail]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, BTreeSet<Label>> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().insert(v.clone());
        }
        groups.into_values().collect()
    }

    /// Disjoint union. Colliding labels of `other` are renamed by appending
    /// `'` until unique; the renaming (old, new) is returned.
    pub fn union(&self, other: &DecoratedGraph) -> (Self, Vec<(Label, Label)>) {
        let mut taken: BTreeSet<Label> = self.vertices.iter().cloned().collect();
        let mut renames = BTreeMap::new();
        for v in &other.vertices {
            if taken.contains(v) {
                let mut candidate = format!("{v}'");
                while taken.contains(candidate.as_str())
                    || other.vertices.iter().any(|u| u.as_str() == candidate)
                {
                    candidate.push('\'');
                }
                let new = Label::from(candidate);
                taken.insert(new.clone());
                renames.insert(v.clone(), new);
            } else {
                taken.insert(v.clone());
            }
        }
        let map = |v: &Label| renames.get(v).cloned().unwrap_or_else(|| v.clone());
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            head: map(&e.head),
            tail: map(&e.tail),
            dec: e.dec,
        }));
        let mut loops = self.loops.clone();
        loops.extend(other.loops.iter().map(|l| Loop {
            vertex: map(&l.vertex),
            dec: l.dec,
        }));
        let g = Self::from_parts_unchecked(taken.into_iter().collect(), edges, loops);
        (g, renames.into_iter().collect())
    }

    /// Union that refuses to rename.
    pub fn union_strict(&self, other: &DecoratedGraph) -> Result<Self, GraphError> {
        if let Some(v) = other.vertices.iter().find(|v| self.has_vertex(v)) {
            return Err(GraphError::LabelCollision(v.to_string()));
        }
        Ok(self.union(other).0)
    }
}

impl Borrow<str> for Label {
    fn borrow(&self) -> &str {
        &self.0
    }
}
