//! Power graphs and directed power graphs restricted to finite windows.
//!
//! A [`WindowGraph`] stores one adjacency bit row per vertex (and an arc row
//! when directed). Rows are built independently and collected in vertex
//! order, so parallel and sequential construction give identical graphs.
//!
//! Exact statements about the infinite graph only survive truncation when
//! every witness they need lies inside the window. Callers that test
//! asymptotic properties (S-set growth, connectivity of out-neighbourhoods)
//! must pick windows with enough room; statements that are closed under
//! taking induced subgraphs (arc consistency, the in/out separation) hold in
//! every window.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use num_integer::Integer;

use crate::arith::divisors_u64;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::groups::{arc_unchecked, related_unchecked, Element, GroupDescriptor};
use crate::window::{build_window, Window, WindowSpec};

/// A finite induced subgraph of a (directed) power graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowGraph {
    group: GroupDescriptor,
    spec: WindowSpec,
    vertices: Vec<Element>,
    index: HashMap<Element, usize>,
    adj: Vec<FixedBitSet>,
    arcs: Option<Vec<FixedBitSet>>,
}

impl WindowGraph {
    /// A graph with no vertices.
    pub fn empty(group: GroupDescriptor) -> Self {
        Self {
            group,
            spec: WindowSpec::Custom,
            vertices: Vec::new(),
            index: HashMap::new(),
            adj: Vec::new(),
            arcs: None,
        }
    }

    /// Assembles a graph from explicit parts, checking the structural invariants:
    /// no loops, and when arcs are given, edges are exactly the arcs with direction forgotten.
    pub fn from_parts(
        group: GroupDescriptor,
        spec: WindowSpec,
        vertices: Vec<Element>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        arcs: Option<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        let n = vertices.len();
        let index: HashMap<Element, usize> =
            vertices.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        if index.len() != n {
            return Err(Error::Parse("duplicate vertex".into()));
        }
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::Parse(format!("invalid edge ({u}, {v})")));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        let arcs = match arcs {
            None => None,
            Some(list) => {
                let mut rows = vec![FixedBitSet::with_capacity(n); n];
                let mut implied = vec![FixedBitSet::with_capacity(n); n];
                for (u, v) in list {
                    if u >= n || v >= n || u == v {
                        return Err(Error::Parse(format!("invalid arc ({u}, {v})")));
                    }
                    rows[u].insert(v);
                    implied[u].insert(v);
                    implied[v].insert(u);
                }
                if implied != adj {
                    return Err(Error::Parse("arcs and edges disagree".into()));
                }
                Some(rows)
            }
        };
        Ok(Self { group, spec, vertices, index, adj, arcs })
    }

    fn build(window: &Window, directed: bool, exec: Exec) -> Self {
        let g = window.group();
        let vs = window.elements();
        let n = vs.len();
        let rows: Vec<FixedBitSet> = exec.map_range(n, |i| {
            let mut row = FixedBitSet::with_capacity(n);
            for (j, y) in vs.iter().enumerate() {
                if i != j && arc_unchecked(g, &vs[i], y) {
                    row.insert(j);
                }
            }
            row
        });
        let mut adj = rows.clone();
        for (i, row) in rows.iter().enumerate() {
            for j in row.ones() {
                adj[j].insert(i);
            }
        }
        let index = vs.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        Self {
            group: g.clone(),
            spec: window.spec().clone(),
            vertices: vs.to_vec(),
            index,
            adj,
            arcs: directed.then_some(rows),
        }
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn spec(&self) -> &WindowSpec {
        &self.spec
    }

    pub fn vertices(&self) -> &[Element] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Element {
        &self.vertices[i]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, x: &Element) -> Option<usize> {
        self.index.get(x).copied()
    }

    /// Index of `x`, or an error naming the missing vertex.
    pub fn require(&self, x: &Element) -> Result<usize> {
        self.index_of(x).ok_or_else(|| Error::UnknownVertex(x.to_string()))
    }

    pub fn is_directed(&self) -> bool {
        self.arcs.is_some()
    }

    /// Drops arc directions.
    pub fn to_undirected(&self) -> Self {
        Self { arcs: None, ..self.clone() }
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    /// Whether `(u, v)` is an arc. Undirected graphs have no arcs.
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.as_ref().is_some_and(|rows| rows[u].contains(v))
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].ones()
    }

    pub fn adjacency_row(&self, u: usize) -> &FixedBitSet {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count_ones(..)
    }

    /// `N[u]`, the neighbourhood of `u` together with `u` itself.
    pub fn closed_neighborhood(&self, u: usize) -> FixedBitSet {
        let mut row = self.adj[u].clone();
        row.insert(u);
        row
    }

    /// Undirected edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|u| self.adj[u].ones().filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Arcs in lexicographic order, or `None` for undirected graphs.
    pub fn arcs(&self) -> Option<Vec<(usize, usize)>> {
        self.arcs.as_ref().map(|rows| {
            rows.iter()
                .enumerate()
                .flat_map(|(u, row)| row.ones().map(move |v| (u, v)))
                .collect()
        })
    }

    pub fn out_neighbors(&self, u: usize) -> Result<Vec<usize>> {
        let rows = self.arcs.as_ref().ok_or(Error::Undirected)?;
        Ok(rows[u].ones().collect())
    }

    pub fn in_neighbors(&self, u: usize) -> Result<Vec<usize>> {
        let rows = self.arcs.as_ref().ok_or(Error::Undirected)?;
        Ok((0..self.len()).filter(|&v| rows[v].contains(u)).collect())
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.adj[u].is_clear()).collect()
    }

    /// `S_{a,b} ∩ W` read off the graph alone: `N[b] \ N[a]`.
    pub fn s_set(&self, a: usize, b: usize) -> FixedBitSet {
        let mut s = self.closed_neighborhood(b);
        s.difference_with(&self.closed_neighborhood(a));
        s
    }

    pub fn s_set_size(&self, a: usize, b: usize) -> usize {
        let na = self.closed_neighborhood(a);
        let mut nb = self.closed_neighborhood(b);
        nb.difference_with(&na);
        nb.count_ones(..)
    }
}

/// The undirected power graph on `window`.
pub fn power_graph(window: &Window) -> WindowGraph {
    power_graph_with(window, Exec::default())
}

pub fn power_graph_with(window: &Window, exec: Exec) -> WindowGraph {
    WindowGraph::build(window, false, exec)
}

/// The directed power graph on `window`: arcs `(x, y)`, `x ≠ y`, with `y = n·x`.
pub fn directed_power_graph(window: &Window) -> WindowGraph {
    directed_power_graph_with(window, Exec::default())
}

pub fn directed_power_graph_with(window: &Window, exec: Exec) -> WindowGraph {
    WindowGraph::build(window, true, exec)
}

/// Power graph of the cyclic group of order `k`.
pub fn finite_cyclic_power_graph(k: u64) -> Result<WindowGraph> {
    if k == 0 {
        return Err(Error::NonPositive);
    }
    let w = build_window(&GroupDescriptor::FiniteCyclic(k), &WindowSpec::All)?;
    Ok(power_graph(&w))
}

/// `S_{a,b} ∩ W = {c ∈ W : c ~ b, c ≁ a}` by element arithmetic, `~` reflexive.
pub fn s_set_window(window: &Window, a: &Element, b: &Element) -> Result<Vec<Element>> {
    let g = window.group();
    for x in [a, b] {
        if !window.contains(x) {
            return Err(Error::UnknownVertex(x.to_string()));
        }
    }
    if a == b {
        return Err(Error::SameVertex);
    }
    if !related_unchecked(g, a, b) {
        return Err(Error::NotAdjacent);
    }
    Ok(window
        .elements()
        .iter()
        .filter(|c| related_unchecked(g, c, b) && !related_unchecked(g, c, a))
        .cloned()
        .collect())
}

/// An infinite S-set in ℤ: `{k·b : gcd(k, m) = 1, |k| > 1}` where `a = m·b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfiniteFamily {
    pub base: i64,
    pub modulus: i64,
    pub witness: i64,
}

impl InfiniteFamily {
    /// Whether `c` belongs to the described family.
    pub fn contains(&self, c: i64) -> bool {
        if c % self.base != 0 {
            return false;
        }
        let k = c / self.base;
        k.abs() > 1 && k.gcd(&self.modulus) == 1
    }
}

impl fmt::Display for InfiniteFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{k*{} : gcd(k, {}) = 1, |k| > 1}}, witness {}",
            self.base, self.modulus, self.witness
        )
    }
}

/// Exact S-set in ℤ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SSetResult {
    Finite(BTreeSet<i64>),
    Infinite(InfiniteFamily),
}

impl SSetResult {
    pub fn is_finite(&self) -> bool {
        matches!(self, SSetResult::Finite(_))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SSetResult::Finite(s) if s.is_empty())
    }
}

impl fmt::Display for SSetResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SSetResult::Finite(s) => {
                let items: Vec<String> = s.iter().map(ToString::to_string).collect();
                write!(f, "finite {{{}}}", items.join(", "))
            }
            SSetResult::Infinite(fam) => write!(f, "infinite {fam}"),
        }
    }
}

/// Exact `S_{a,b}` in ℤ for an adjacent pair.
///
/// When `a | b` the set consists of divisors of `b` unrelated to `a`, which is
/// finite. Otherwise `b | a` strictly and the set contains every `k·b` with `k`
/// coprime to `a/b`, `|k| > 1`.
pub fn s_set_exact_z(a: i64, b: i64) -> Result<SSetResult> {
    if a == b {
        return Err(Error::SameVertex);
    }
    if a == 0 || b == 0 || (b % a != 0 && a % b != 0) {
        return Err(Error::NotAdjacent);
    }
    if b % a == 0 {
        let divs = divisors_u64(b.unsigned_abs());
        let set = divs
            .iter()
            .flat_map(|&d| {
                let d = d as i64;
                [d, -d]
            })
            .filter(|&c| a % c != 0 && c % a != 0)
            .collect();
        Ok(SSetResult::Finite(set))
    } else {
        let m = (a / b).abs();
        let k = (2..).find(|k: &i64| k.gcd(&m) == 1).expect("coprime k exists");
        Ok(SSetResult::Infinite(InfiniteFamily {
            base: b,
            modulus: m,
            witness: k * b,
        }))
    }
}

fn bfs_components(n: usize, mut linked: impl FnMut(usize, usize) -> bool, members: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for &start in members {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in members {
                if !seen[v] && linked(u, v) {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Connected components of the complement graph induced on `N(x)`.
pub fn neighborhood_complement_split(graph: &WindowGraph, x: usize) -> Result<Vec<Vec<usize>>> {
    let nbrs: Vec<usize> = graph.neighbors(x).collect();
    if nbrs.is_empty() {
        return Err(Error::IsolatedVertex);
    }
    Ok(bfs_components(
        graph.len(),
        |u, v| u != v && !graph.is_adjacent(u, v),
        &nbrs,
    ))
}

/// Connected components of the complement graph induced on `members`.
pub fn complement_components(graph: &WindowGraph, members: &[usize]) -> Vec<Vec<usize>> {
    bfs_components(graph.len(), |u, v| u != v && !graph.is_adjacent(u, v), members)
}

/// Connected components, each sorted, ordered by smallest vertex.
pub fn components(graph: &WindowGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; graph.len()];
    let mut out = Vec::new();
    for start in 0..graph.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in graph.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Largest graph accepted by [`automorphism_orbits`].
pub const MAX_BRUTE_FORCE_VERTICES: usize = 10;

/// Orbits of the automorphism group of the underlying undirected graph, by
/// exhaustive search over vertex permutations (at most 10 vertices).
pub fn automorphism_orbits(graph: &WindowGraph) -> Result<Vec<Vec<usize>>> {
    let n = graph.len();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(Error::BruteForceBound(n));
    }
    let mut orbit_of: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let degrees: Vec<usize> = (0..n).map(|u| graph.degree(u)).collect();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];

    // Depth-first over partial permutations; a branch is cut as soon as the
    // images of the assigned vertices stop preserving adjacency.
    fn extend(
        i: usize,
        graph: &WindowGraph,
        degrees: &[usize],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        found: &mut dyn FnMut(&[usize]),
    ) {
        let n = perm.len();
        if i == n {
            found(perm);
            return;
        }
        for img in 0..n {
            if used[img] || degrees[img] != degrees[i] {
                continue;
            }
            if (0..i).any(|j| graph.is_adjacent(i, j) != graph.is_adjacent(img, perm[j])) {
                continue;
            }
            perm[i] = img;
            used[img] = true;
            extend(i + 1, graph, degrees, perm, used, found);
            used[img] = false;
        }
        perm[i] = usize::MAX;
    }

    let mut record = |p: &[usize]| {
        for (i, &img) in p.iter().enumerate() {
            let (a, b) = (find(&mut orbit_of, i), find(&mut orbit_of, img));
            if a != b {
                orbit_of[a.max(b)] = a.min(b);
            }
        }
    };
    extend(0, graph, &degrees, &mut perm, &mut used, &mut record);

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for v in 0..n {
        let r = find(&mut orbit_of, v);
        let k = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[k].push(v);
    }
    Ok(groups)
}
