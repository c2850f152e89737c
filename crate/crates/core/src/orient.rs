//! Recovering arc directions from the undirected power graph, and checking
//! whether vertex maps preserve or reverse arcs.
//!
//! In ℤ an edge `{a, b}` with `a ≠ ±b` points `a → b` exactly when `S_{a,b}`
//! is finite and `S_{b,a}` infinite, and `S_{a,b} = S_{b,a} = ∅` exactly for
//! inverse pairs. On a window the infinite side is truncated, so
//! [`classify_edge_window`] only commits when the two sides are separated by
//! `margin`. [`recover_orientation`] then spreads committed directions along
//! forced pairs: if `a – b – c` with `a`, `c` non-adjacent, transitivity of
//! the arc relation forces both edges to point into `b` or both out of it.
//! Forcing uses induced non-adjacency, which a window never changes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::arith::ReducedRational;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graphs::{components, s_set_exact_z, SSetResult, WindowGraph};
use crate::groups::{Element, GroupDescriptor};
use crate::heights::{g_p, swap_prime_exponents};
use crate::window::{build_window, Window, WindowSpec};

/// Direction verdict for an edge `{a, b}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    InversePair,
    /// `a → b` only.
    Forward,
    /// `b → a` only.
    Backward,
    Undetermined,
}

impl Verdict {
    pub fn flipped(self) -> Self {
        match self {
            Verdict::Forward => Verdict::Backward,
            Verdict::Backward => Verdict::Forward,
            v => v,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Verdict::InversePair => "INVERSE",
            Verdict::Forward => "FORWARD",
            Verdict::Backward => "BACKWARD",
            Verdict::Undetermined => "UNDETERMINED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Verdict {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "INVERSE" => Ok(Verdict::InversePair),
            "FORWARD" => Ok(Verdict::Forward),
            "BACKWARD" => Ok(Verdict::Backward),
            "UNDETERMINED" => Ok(Verdict::Undetermined),
            _ => Err(Error::Parse(format!("unknown verdict {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    /// Sizes of `S_{a,b} ∩ W` and `S_{b,a} ∩ W`.
    Window { s_ab: usize, s_ba: usize },
    Exact { s_ab: SSetResult, s_ba: SSetResult },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClassification {
    pub verdict: Verdict,
    pub evidence: Evidence,
}

/// Classifies an edge of `P(ℤ)` from the exact S-sets.
pub fn classify_edge_exact_z(a: i64, b: i64) -> Result<EdgeClassification> {
    let s_ab = s_set_exact_z(a, b)?;
    let s_ba = s_set_exact_z(b, a)?;
    let verdict = match (&s_ab, &s_ba) {
        _ if s_ab.is_empty() && s_ba.is_empty() => Verdict::InversePair,
        (SSetResult::Finite(_), SSetResult::Infinite(_)) => Verdict::Forward,
        (SSetResult::Infinite(_), SSetResult::Finite(_)) => Verdict::Backward,
        _ => Verdict::Undetermined,
    };
    Ok(EdgeClassification {
        verdict,
        evidence: Evidence::Exact { s_ab, s_ba },
    })
}

fn verdict_from_sizes(s_ab: usize, s_ba: usize, margin: usize) -> Verdict {
    if s_ab == 0 && s_ba == 0 {
        Verdict::InversePair
    } else if s_ab <= margin && s_ba > margin {
        Verdict::Forward
    } else if s_ba <= margin && s_ab > margin {
        Verdict::Backward
    } else {
        Verdict::Undetermined
    }
}

/// Classifies an edge using only the adjacency structure of `graph`.
pub fn classify_edge_window(graph: &WindowGraph, a: usize, b: usize, margin: usize) -> Result<EdgeClassification> {
    if a == b || !graph.is_adjacent(a, b) {
        return Err(Error::NotAdjacent);
    }
    let s_ab = graph.s_set_size(a, b);
    let s_ba = graph.s_set_size(b, a);
    Ok(EdgeClassification {
        verdict: verdict_from_sizes(s_ab, s_ba, margin),
        evidence: Evidence::Window { s_ab, s_ba },
    })
}

/// Whether an edge verdict came straight from its own S-sets or from forcing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Direct,
    Propagated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub u: Element,
    pub v: Element,
    pub verdict: Verdict,
    pub s_uv: usize,
    pub s_vu: usize,
    pub source: Source,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerdictCounts {
    pub inverse: usize,
    pub forward: usize,
    pub backward: usize,
    pub undetermined: usize,
}

/// Per-edge verdicts on the core of a window, with optional ground-truth comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientationReport {
    pub edges: Vec<EdgeRecord>,
    /// Edges whose verdict disagrees with the ground truth (undetermined edges included).
    /// `None` when no ground truth was supplied.
    pub mismatches: Option<Vec<(Element, Element)>>,
    /// Forcing classes whose direct verdicts disagreed.
    pub conflicts: usize,
}

impl OrientationReport {
    pub fn counts(&self) -> VerdictCounts {
        let mut c = VerdictCounts::default();
        for e in &self.edges {
            match e.verdict {
                Verdict::InversePair => c.inverse += 1,
                Verdict::Forward => c.forward += 1,
                Verdict::Backward => c.backward += 1,
                Verdict::Undetermined => c.undetermined += 1,
            }
        }
        c
    }

    pub fn propagated(&self) -> usize {
        self.edges.iter().filter(|e| e.source == Source::Propagated).count()
    }

    /// Line-oriented text: one `u v VERDICT |S_uv| |S_vu|` line per edge, then a summary block.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&format!("{} {} {} {} {}\n", e.u, e.v, e.verdict, e.s_uv, e.s_vu));
        }
        let c = self.counts();
        out.push_str("# summary\n");
        out.push_str(&format!("edges {}\n", self.edges.len()));
        out.push_str(&format!("inverse {}\n", c.inverse));
        out.push_str(&format!("forward {}\n", c.forward));
        out.push_str(&format!("backward {}\n", c.backward));
        out.push_str(&format!("undetermined {}\n", c.undetermined));
        out.push_str(&format!("propagated {}\n", self.propagated()));
        out.push_str(&format!("conflicts {}\n", self.conflicts));
        match &self.mismatches {
            Some(m) => out.push_str(&format!("mismatches {}\n", m.len())),
            None => out.push_str("mismatches n/a\n"),
        }
        out
    }
}

/// Summary block of a serialized [`OrientationReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportSummary {
    pub edges: usize,
    pub counts: VerdictCounts,
    pub propagated: usize,
    pub conflicts: usize,
    pub mismatches: Option<usize>,
    /// Edge lines as `(u, v, verdict)` label triples.
    pub lines: Vec<(String, String, Verdict)>,
}

impl ReportSummary {
    /// Parses the text produced by [`OrientationReport::to_text`].
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |l: &str| Error::Parse(format!("malformed report line {l:?}"));
        let mut lines = Vec::new();
        let mut fields: HashMap<String, String> = HashMap::new();
        let mut in_summary = false;
        for line in text.lines() {
            if line.trim().is_empty() {
                continue;
            }
            if line == "# summary" {
                in_summary = true;
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if in_summary {
                let [k, v] = parts[..] else { return Err(bad(line)) };
                fields.insert(k.to_string(), v.to_string());
            } else {
                let [u, v, verdict, s1, s2] = parts[..] else { return Err(bad(line)) };
                s1.parse::<usize>().map_err(|_| bad(line))?;
                s2.parse::<usize>().map_err(|_| bad(line))?;
                lines.push((u.to_string(), v.to_string(), verdict.parse()?));
            }
        }
        let get = |k: &str| -> Result<usize> {
            fields
                .get(k)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Parse(format!("missing summary field {k}")))
        };
        let summary = Self {
            edges: get("edges")?,
            counts: VerdictCounts {
                inverse: get("inverse")?,
                forward: get("forward")?,
                backward: get("backward")?,
                undetermined: get("undetermined")?,
            },
            propagated: get("propagated")?,
            conflicts: get("conflicts")?,
            mismatches: match fields.get("mismatches").map(String::as_str) {
                Some("n/a") => None,
                Some(v) => Some(v.parse().map_err(|_| Error::Parse("bad mismatches".into()))?),
                None => return Err(Error::Parse("missing summary field mismatches".into())),
            },
            lines,
        };
        if summary.lines.len() != summary.edges {
            return Err(Error::Parse("edge count disagrees with summary".into()));
        }
        Ok(summary)
    }
}

/// Union-find over edge variables with parity: `x_e ⊕ x_f = parity`.
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            parity: vec![false; n],
        }
    }

    /// Root of `x` and the parity of `x` relative to it.
    fn find(&mut self, x: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut r = x;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // Compress, accumulating parity from the root down.
        let mut acc = false;
        for &node in path.iter().rev() {
            acc ^= self.parity[node];
            self.parity[node] = acc;
            self.parent[node] = r;
        }
        (r, if path.is_empty() { false } else { self.parity[x] })
    }

    /// Records `x ⊕ y = p`; returns false if that contradicts earlier constraints.
    fn union(&mut self, x: usize, y: usize, p: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == p;
        }
        self.parent[ry] = rx;
        self.parity[ry] = px ^ py ^ p;
        true
    }
}

/// Recovers arc directions on the core of an undirected window using only its edges.
///
/// Vertices whose [`Element::magnitude`] is at most `core_bound` form the core;
/// every core edge is reported. Element values select the core and label the
/// output but never enter the classification. When `ground_truth` (the
/// directed window on the same vertices) is given, disagreements are listed.
pub fn recover_orientation(
    graph: &WindowGraph,
    margin: usize,
    core_bound: u64,
    ground_truth: Option<&WindowGraph>,
) -> Result<OrientationReport> {
    recover_orientation_with(graph, margin, core_bound, ground_truth, Exec::default())
}

pub fn recover_orientation_with(
    graph: &WindowGraph,
    margin: usize,
    core_bound: u64,
    ground_truth: Option<&WindowGraph>,
    exec: Exec,
) -> Result<OrientationReport> {
    let n = graph.len();
    let closed: Vec<FixedBitSet> = exec.map_range(n, |u| graph.closed_neighborhood(u));

    // Twin classes: equal closed neighbourhoods, i.e. both S-sets empty.
    let mut class_of = vec![usize::MAX; n];
    let mut reps: Vec<usize> = Vec::new();
    {
        let mut by_nbhd: HashMap<Vec<usize>, usize> = HashMap::new();
        for u in 0..n {
            if graph.degree(u) == 0 {
                continue;
            }
            let key: Vec<usize> = closed[u].ones().collect();
            let id = *by_nbhd.entry(key).or_insert_with(|| {
                reps.push(u);
                reps.len() - 1
            });
            class_of[u] = id;
        }
    }
    let k = reps.len();
    let class_adj = |a: usize, b: usize| a != b && graph.is_adjacent(reps[a], reps[b]);

    // Quotient edges (a < b) and their variable ids; x_e means a → b.
    let mut edge_id: HashMap<(usize, usize), usize> = HashMap::new();
    let class_nbrs: Vec<Vec<usize>> = (0..k)
        .map(|a| (0..k).filter(|&b| class_adj(a, b)).collect())
        .collect();
    for a in 0..k {
        for &b in &class_nbrs[a] {
            if a < b {
                let id = edge_id.len();
                edge_id.insert((a, b), id);
            }
        }
    }
    // Literal for "a → b": (variable, negated).
    let lit = |a: usize, b: usize| -> (usize, bool) {
        if a < b {
            (edge_id[&(a, b)], false)
        } else {
            (edge_id[&(b, a)], true)
        }
    };

    // Forcing: a – b – c with a ≁ c gives [a → b] = [c → b].
    let constraints: Vec<Vec<(usize, usize, bool)>> = exec.map_range(k, |b| {
        let nb = &class_nbrs[b];
        let mut out = Vec::new();
        for (i, &a) in nb.iter().enumerate() {
            for &c in &nb[i + 1..] {
                if !class_adj(a, c) {
                    let (ea, na) = lit(a, b);
                    let (ec, nc) = lit(c, b);
                    out.push((ea, ec, na ^ nc));
                }
            }
        }
        out
    });
    let mut uf = ParityUnionFind::new(edge_id.len());
    let mut inconsistent_forcing = false;
    for (x, y, p) in constraints.into_iter().flatten() {
        if !uf.union(x, y, p) {
            inconsistent_forcing = true;
        }
    }

    // Direct verdicts on core edges.
    let is_core: Vec<bool> = graph
        .vertices()
        .iter()
        .map(|x| x.magnitude() <= BigInt::from(core_bound))
        .collect();
    let core_edges: Vec<(usize, usize)> = graph
        .edges()
        .into_iter()
        .filter(|&(u, v)| is_core[u] && is_core[v])
        .collect();
    let direct: Vec<(usize, usize, Verdict)> = exec.map_slice(&core_edges, |&(u, v)| {
        let s_uv = graph.s_set_size(u, v);
        let s_vu = graph.s_set_size(v, u);
        (s_uv, s_vu, verdict_from_sizes(s_uv, s_vu, margin))
    });

    #[derive(Clone, Copy, PartialEq)]
    enum RootValue {
        Unknown,
        Known(bool),
        Conflict,
    }
    let mut root_value: HashMap<usize, RootValue> = HashMap::new();
    let mut oriented_literal = |u: usize, v: usize, verdict: Verdict| -> Option<(usize, bool)> {
        let (cu, cv) = (class_of[u], class_of[v]);
        if cu == cv {
            return None;
        }
        let (e, neg) = lit(cu, cv);
        let (root, par) = uf.find(e);
        // value of x_root implied by "u → v" (Forward) or "v → u" (Backward).
        let u_to_v = verdict == Verdict::Forward;
        Some((root, u_to_v ^ neg ^ par))
    };
    let mut seeds = Vec::new();
    for (&(u, v), &(_, _, verdict)) in core_edges.iter().zip(&direct) {
        if matches!(verdict, Verdict::Forward | Verdict::Backward) {
            if let Some(seed) = oriented_literal(u, v, verdict) {
                seeds.push(seed);
            }
        }
    }
    for (root, value) in seeds {
        let slot = root_value.entry(root).or_insert(RootValue::Unknown);
        *slot = match *slot {
            RootValue::Unknown => RootValue::Known(value),
            RootValue::Known(v) if v == value => RootValue::Known(v),
            _ => RootValue::Conflict,
        };
    }
    let mut conflicts = root_value.values().filter(|v| **v == RootValue::Conflict).count();
    if inconsistent_forcing {
        conflicts += 1;
    }

    let mut edges = Vec::with_capacity(core_edges.len());
    for (&(u, v), &(s_uv, s_vu, direct_verdict)) in core_edges.iter().zip(&direct) {
        let verdict = if class_of[u] == class_of[v] {
            Verdict::InversePair
        } else {
            let (e, neg) = lit(class_of[u], class_of[v]);
            let (root, par) = uf.find(e);
            match root_value.get(&root).copied().unwrap_or(RootValue::Unknown) {
                RootValue::Known(x_root) if !inconsistent_forcing => {
                    // x_e = x_root ⊕ par; "u → v" = x_e ⊕ neg.
                    if x_root ^ par ^ neg {
                        Verdict::Forward
                    } else {
                        Verdict::Backward
                    }
                }
                _ => Verdict::Undetermined,
            }
        };
        let source = if verdict == direct_verdict || verdict == Verdict::Undetermined {
            Source::Direct
        } else {
            Source::Propagated
        };
        edges.push(EdgeRecord {
            u: graph.vertex(u).clone(),
            v: graph.vertex(v).clone(),
            verdict,
            s_uv,
            s_vu,
            source,
        });
    }

    let mismatches = match ground_truth {
        None => None,
        Some(truth) => {
            if !truth.is_directed() {
                return Err(Error::Undirected);
            }
            let mut out = Vec::new();
            for e in &edges {
                let tu = truth.require(&e.u)?;
                let tv = truth.require(&e.v)?;
                let expected = match (truth.has_arc(tu, tv), truth.has_arc(tv, tu)) {
                    (true, true) => Verdict::InversePair,
                    (true, false) => Verdict::Forward,
                    (false, true) => Verdict::Backward,
                    (false, false) => Verdict::Undetermined,
                };
                if expected != e.verdict {
                    out.push((e.u.clone(), e.v.clone()));
                }
            }
            Some(out)
        }
    };

    Ok(OrientationReport {
        edges,
        mismatches,
        conflicts,
    })
}

/// `φ_a(x) = a²/x`, with `φ_a(0) = 0`. An involution of ℚ reversing every arc.
pub fn involution_phi(a: &ReducedRational, x: &ReducedRational) -> ReducedRational {
    if x.is_zero() {
        return ReducedRational::zero();
    }
    (a * a).checked_div(x).expect("x nonzero")
}

/// `seed ∪ φ_a(seed)`: the smallest window containing `seed` closed under `φ_a`.
pub fn involution_closed_window(a: &ReducedRational, seed: &Window) -> Result<Window> {
    if a.is_zero() {
        return Err(Error::Parse("phi requires a nonzero parameter".into()));
    }
    let mut elements = seed.elements().to_vec();
    for x in seed.elements() {
        let Element::Rat(r) = x else {
            return Err(Error::Unsupported {
                op: "involution_closed_window",
                group: seed.group().to_string(),
            });
        };
        elements.push(Element::Rat(involution_phi(a, r)));
    }
    Window::from_elements(seed.group().clone(), elements)
}

/// Matching windows of `G_p` and `G_q` for the prime-swap isomorphism.
///
/// The source is the `G_p` window with numerator bound `num` and denominator
/// bound `den`. The target consists of every `y ∈ G_q` with denominator `q^k`,
/// `p^k ≤ den`, whose numerator maps back (under the transposition) into
/// `[-num, num]`; it is enumerated directly from those bounds.
pub fn prime_swap_windows(p: u64, q: u64, num: u64, den: u64) -> Result<(Window, Window)> {
    let source = build_window(&GroupDescriptor::Unitary(g_p(p)?), &WindowSpec::Fractions { num, den })?;
    if p == q {
        return Err(Error::SamePrime);
    }
    let target_group = GroupDescriptor::Unitary(g_p(q)?);
    let (lo, hi) = (p.min(q), p.max(q));
    let mut e = 0u32;
    while lo.checked_pow(e + 1).is_some_and(|v| v <= num) {
        e += 1;
    }
    let big = |v: u64| BigInt::from(v);
    let bound_num = big(num) * num_traits::pow(big(hi), e as usize);
    let bound_den = num_traits::pow(big(lo), e as usize);
    let bound = ((&bound_num + &bound_den - BigInt::one()) / &bound_den)
        .to_i64()
        .ok_or_else(|| Error::TooLarge(bound_num.to_string()))?;

    let mut elements = Vec::new();
    let mut pk = 1u64;
    let mut qk = 1i64;
    loop {
        for m in -bound..=bound {
            if qk > 1 && m % (q as i64) == 0 {
                continue;
            }
            let numer = ReducedRational::from(m);
            let back = swap_prime_exponents(p, q, &numer);
            if back.numer().magnitude() <= &num_bigint::BigUint::from(num) {
                elements.push(Element::Rat(ReducedRational::new(m, qk)?));
            }
        }
        match pk.checked_mul(p) {
            Some(next) if next <= den => {
                pk = next;
                qk = qk
                    .checked_mul(q as i64)
                    .ok_or_else(|| Error::TooLarge(format!("{q}^k")))?;
            }
            _ => break,
        }
    }
    let target = Window::from_elements(target_group, elements)?;
    Ok((source, target))
}

/// A vertex map from one window graph into another.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMap {
    images: Vec<Option<usize>>,
    labels: Vec<Element>,
    unmapped: Vec<Option<String>>,
}

impl VertexMap {
    /// Evaluates `f` on every vertex of `from`, locating each image in `to`.
    /// Images that fail to compute or fall outside `to` are recorded as unmapped.
    pub fn from_fn(from: &WindowGraph, to: &WindowGraph, f: impl Fn(&Element) -> Result<Element>) -> Self {
        let mut images = Vec::with_capacity(from.len());
        let mut unmapped = Vec::with_capacity(from.len());
        for x in from.vertices() {
            match f(x) {
                Ok(y) => match to.index_of(&y) {
                    Some(j) => {
                        images.push(Some(j));
                        unmapped.push(None);
                    }
                    None => {
                        images.push(None);
                        unmapped.push(Some(y.to_string()));
                    }
                },
                Err(e) => {
                    images.push(None);
                    unmapped.push(Some(e.to_string()));
                }
            }
        }
        Self {
            images,
            labels: to.vertices().to_vec(),
            unmapped,
        }
    }

    pub fn image(&self, i: usize) -> Option<usize> {
        self.images[i]
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

/// Whether a map should carry arcs forwards or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Preserve,
    Reverse,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "preserve" => Ok(Mode::Preserve),
            "reverse" => Ok(Mode::Reverse),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// First reason a map fails to be a directed isomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    Unmapped { vertex: Element, detail: String },
    NotInjective { first: Element, second: Element },
    NotSurjective { missed: Element },
    Arc { x: Element, y: Element, source_arc: bool, image_arc: bool },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counterexample::Unmapped { vertex, detail } => {
                write!(f, "vertex {vertex} has no image in the target ({detail})")
            }
            Counterexample::NotInjective { first, second } => {
                write!(f, "vertices {first} and {second} have the same image")
            }
            Counterexample::NotSurjective { missed } => write!(f, "target vertex {missed} is not hit"),
            Counterexample::Arc { x, y, source_arc, image_arc } => write!(
                f,
                "pair ({x}, {y}): arc in source = {source_arc}, required arc in target = {image_arc}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoCheck {
    pub holds: bool,
    pub checked_pairs: usize,
    pub counterexample: Option<Counterexample>,
}

fn bijection_failure(map: &VertexMap, d1: &WindowGraph, d2: &WindowGraph) -> Option<Counterexample> {
    let mut preimage: Vec<Option<usize>> = vec![None; d2.len()];
    for i in 0..map.len() {
        match map.images[i] {
            None => {
                return Some(Counterexample::Unmapped {
                    vertex: d1.vertex(i).clone(),
                    detail: map.unmapped[i].clone().unwrap_or_default(),
                })
            }
            Some(j) => {
                if let Some(prev) = preimage[j] {
                    return Some(Counterexample::NotInjective {
                        first: d1.vertex(prev).clone(),
                        second: d1.vertex(i).clone(),
                    });
                }
                preimage[j] = Some(i);
            }
        }
    }
    preimage
        .iter()
        .position(Option::is_none)
        .map(|j| Counterexample::NotSurjective { missed: map.labels[j].clone() })
}

/// Checks that `map` is a bijection onto `d2`'s vertices carrying arcs per `mode`.
pub fn verify_digraph_isomorphism(map: &VertexMap, d1: &WindowGraph, d2: &WindowGraph, mode: Mode) -> IsoCheck {
    verify_digraph_isomorphism_with(map, d1, d2, mode, Exec::default())
}

pub fn verify_digraph_isomorphism_with(
    map: &VertexMap,
    d1: &WindowGraph,
    d2: &WindowGraph,
    mode: Mode,
    exec: Exec,
) -> IsoCheck {
    if let Some(c) = bijection_failure(map, d1, d2) {
        return IsoCheck {
            holds: false,
            checked_pairs: 0,
            counterexample: Some(c),
        };
    }
    let n = d1.len();
    let img = |i: usize| map.images[i].expect("bijection checked");
    let rows: Vec<Option<usize>> = exec.map_range(n, |x| {
        (0..n).find(|&y| {
            let (fx, fy) = (img(x), img(y));
            let target = match mode {
                Mode::Preserve => d2.has_arc(fx, fy),
                Mode::Reverse => d2.has_arc(fy, fx),
            };
            d1.has_arc(x, y) != target
        })
    });
    let counterexample = rows.iter().enumerate().find_map(|(x, y)| {
        y.map(|y| {
            let source_arc = d1.has_arc(x, y);
            Counterexample::Arc {
                x: d1.vertex(x).clone(),
                y: d1.vertex(y).clone(),
                source_arc,
                image_arc: !source_arc,
            }
        })
    });
    IsoCheck {
        holds: counterexample.is_none(),
        checked_pairs: n * n,
        counterexample,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComponentVerdict {
    Preserves,
    Reverses,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecision {
    pub vertices: Vec<usize>,
    pub verdict: ComponentVerdict,
    /// Strict (one-way) arcs inside the component that voted.
    pub strict_arcs: usize,
}

/// For each component of `d1` minus the identity, whether `map` carries every
/// strict arc forwards, backwards, or neither.
///
/// Inverse pairs are arcs in both directions and are compatible with either
/// mode, so they do not vote. A component with no strict arc reports `Preserves`.
pub fn decide_preserve_or_reverse(map: &VertexMap, d1: &WindowGraph, d2: &WindowGraph) -> Result<Vec<ComponentDecision>> {
    if !d1.is_directed() || !d2.is_directed() {
        return Err(Error::Undirected);
    }
    if let Some(c) = bijection_failure(map, d1, d2) {
        return Err(Error::NotIsomorphism(c.to_string()));
    }
    let n = d1.len();
    let img = |i: usize| map.images[i].expect("bijection checked");
    for x in 0..n {
        for y in (x + 1)..n {
            if d1.is_adjacent(x, y) != d2.is_adjacent(img(x), img(y)) {
                return Err(Error::NotIsomorphism(format!(
                    "adjacency of {} and {} is not preserved",
                    d1.vertex(x),
                    d1.vertex(y)
                )));
            }
        }
    }
    let identity = d1.index_of(&d1.group().identity());
    let mut out = Vec::new();
    for comp in components(d1) {
        let comp: Vec<usize> = comp.into_iter().filter(|&v| Some(v) != identity).collect();
        if comp.is_empty() {
            continue;
        }
        let mut preserves = true;
        let mut reverses = true;
        let mut strict = 0;
        for &x in &comp {
            for &y in &comp {
                if d1.has_arc(x, y) && !d1.has_arc(y, x) {
                    strict += 1;
                    let (fx, fy) = (img(x), img(y));
                    preserves &= d2.has_arc(fx, fy) && !d2.has_arc(fy, fx);
                    reverses &= d2.has_arc(fy, fx) && !d2.has_arc(fx, fy);
                }
            }
        }
        let verdict = if preserves {
            ComponentVerdict::Preserves
        } else if reverses {
            ComponentVerdict::Reverses
        } else {
            ComponentVerdict::Neither
        };
        out.push(ComponentDecision {
            vertices: comp,
            verdict,
            strict_arcs: strict,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{directed_power_graph, power_graph};
    use crate::heights::prime_swap_iso;

    fn z_window(n: u64) -> Window {
        build_window(&GroupDescriptor::Z, &WindowSpec::Bound(n)).unwrap()
    }

    fn r(n: i64, d: i64) -> ReducedRational {
        ReducedRational::new(n, d).unwrap()
    }

    #[test]
    fn exact_classification_examples() {
        assert_eq!(classify_edge_exact_z(5, -5).unwrap().verdict, Verdict::InversePair);
        assert_eq!(classify_edge_exact_z(2, 12).unwrap().verdict, Verdict::Forward);
        assert_eq!(classify_edge_exact_z(12, 2).unwrap().verdict, Verdict::Backward);
        let c = classify_edge_exact_z(2, 12).unwrap();
        let Evidence::Exact { s_ab, .. } = c.evidence else { panic!() };
        assert_eq!(s_ab, SSetResult::Finite([3, -3].into()));
        assert_eq!(classify_edge_exact_z(2, 3), Err(Error::NotAdjacent));
    }

    #[test]
    fn window_classification_examples() {
        let g = power_graph(&z_window(100));
        let at = |x: i64| g.index_of(&Element::int(x)).unwrap();
        let c = classify_edge_window(&g, at(2), at(4), 8).unwrap();
        assert_eq!(c.verdict, Verdict::Forward);
        assert_eq!(c.evidence, Evidence::Window { s_ab: 0, s_ba: 48 });
        for margin in [0, 1, 8, 50] {
            assert_eq!(classify_edge_window(&g, at(7), at(-7), margin).unwrap().verdict, Verdict::InversePair);
        }
        // Near the boundary both sides can be small; just record the verdict.
        let near = classify_edge_window(&g, at(48), at(96), 2).unwrap();
        assert!(matches!(near.evidence, Evidence::Window { .. }));
        assert_eq!(classify_edge_window(&g, at(2), at(3), 8), Err(Error::NotAdjacent));
    }

    #[test]
    fn recovery_examples() {
        let w = z_window(100);
        let g = power_graph(&w);
        let d = directed_power_graph(&w);
        let report = recover_orientation(&g, 8, 33, Some(&d)).unwrap();
        assert_eq!(report.mismatches.as_ref().unwrap().len(), 0);
        assert_eq!(report.counts().undetermined, 0);
        let e39 = report
            .edges
            .iter()
            .find(|e| e.u == Element::int(3) && e.v == Element::int(9))
            .unwrap();
        assert_eq!(e39.verdict, Verdict::Forward);
        assert_eq!(e39.s_uv, 0);

        let w1 = z_window(1);
        let report = recover_orientation(&power_graph(&w1), 8, 1, Some(&directed_power_graph(&w1))).unwrap();
        assert_eq!(report.edges.len(), 1);
        assert_eq!(report.edges[0].verdict, Verdict::InversePair);
    }

    #[test]
    fn report_text_round_trip() {
        let w = z_window(20);
        let report = recover_orientation(&power_graph(&w), 4, 6, Some(&directed_power_graph(&w))).unwrap();
        let text = report.to_text();
        let parsed = ReportSummary::parse(&text).unwrap();
        assert_eq!(parsed.edges, report.edges.len());
        assert_eq!(parsed.counts, report.counts());
        assert_eq!(parsed.mismatches, Some(report.mismatches.unwrap().len()));
        assert!(text.ends_with('\n'));
        assert!(ReportSummary::parse("1 2 FORWARD x 3\n").is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(involution_phi(&r(2, 1), &r(4, 1)), r(1, 1));
        assert_eq!(involution_phi(&r(5, 7), &r(0, 1)), r(0, 1));
        assert_eq!(involution_phi(&r(3, 1), &r(3, 1)), r(3, 1));
        for x in [r(1, 3), r(-7, 2), r(9, 4)] {
            let a = r(3, 2);
            assert_eq!(involution_phi(&a, &involution_phi(&a, &x)), x);
        }
    }

    fn phi_setup(a: ReducedRational) -> (WindowGraph, VertexMap) {
        let seed = build_window(&GroupDescriptor::Q, &WindowSpec::Fractions { num: 6, den: 6 }).unwrap();
        let w = involution_closed_window(&a, &seed).unwrap();
        let d = directed_power_graph(&w);
        let map = VertexMap::from_fn(&d, &d, |x| Ok(Element::Rat(involution_phi(&a, x.as_rational().unwrap()))));
        (d, map)
    }

    #[test]
    fn phi_reverses_arcs() {
        let (d, map) = phi_setup(r(2, 1));
        let decisions = decide_preserve_or_reverse(&map, &d, &d).unwrap();
        assert!(!decisions.is_empty());
        assert!(decisions.iter().all(|c| c.verdict == ComponentVerdict::Reverses));
        assert!(verify_digraph_isomorphism(&map, &d, &d, Mode::Reverse).holds);
        let fwd = verify_digraph_isomorphism(&map, &d, &d, Mode::Preserve);
        assert!(!fwd.holds);
        assert!(matches!(fwd.counterexample, Some(Counterexample::Arc { .. })));
    }

    #[test]
    fn identity_preserves() {
        let d = directed_power_graph(&z_window(12));
        let map = VertexMap::from_fn(&d, &d, |x| Ok(x.clone()));
        let decisions = decide_preserve_or_reverse(&map, &d, &d).unwrap();
        assert_eq!(decisions.len(), 1);
        assert_eq!(decisions[0].verdict, ComponentVerdict::Preserves);
    }

    #[test]
    fn prime_swap_preserves() {
        let (src, dst) = prime_swap_windows(2, 3, 20, 8).unwrap();
        let (d1, d2) = (directed_power_graph(&src), directed_power_graph(&dst));
        let map = VertexMap::from_fn(&d1, &d2, |x| Ok(Element::Rat(prime_swap_iso(2, 3, x.as_rational().unwrap())?)));
        assert!(decide_preserve_or_reverse(&map, &d1, &d2)
            .unwrap()
            .iter()
            .all(|c| c.verdict == ComponentVerdict::Preserves));
        assert!(verify_digraph_isomorphism(&map, &d1, &d2, Mode::Preserve).holds);
    }

    #[test]
    fn non_isomorphisms_are_caught() {
        let d = directed_power_graph(&z_window(6));
        let swap = |x: &Element| {
            Ok(match x.as_int().and_then(|n| n.to_i64()) {
                Some(1) => Element::int(2),
                Some(2) => Element::int(1),
                _ => x.clone(),
            })
        };
        let map = VertexMap::from_fn(&d, &d, swap);
        let check = verify_digraph_isomorphism(&map, &d, &d, Mode::Preserve);
        assert!(!check.holds);
        assert!(matches!(check.counterexample, Some(Counterexample::Arc { .. })));
        assert!(matches!(decide_preserve_or_reverse(&map, &d, &d), Err(Error::NotIsomorphism(_))));

        let shift = VertexMap::from_fn(&d, &d, |x| Ok(Element::Int(x.as_int().unwrap() + 1)));
        let check = verify_digraph_isomorphism(&shift, &d, &d, Mode::Preserve);
        assert!(matches!(check.counterexample, Some(Counterexample::Unmapped { .. })));

        let collapse = VertexMap::from_fn(&d, &d, |_| Ok(Element::int(0)));
        let check = verify_digraph_isomorphism(&collapse, &d, &d, Mode::Preserve);
        assert!(matches!(check.counterexample, Some(Counterexample::NotInjective { .. })));
    }

    #[test]
    fn prime_swap_target_matches_image() {
        let (src, dst) = prime_swap_windows(2, 3, 30, 16).unwrap();
        let mut image: Vec<Element> = src
            .elements()
            .iter()
            .map(|x| Element::Rat(prime_swap_iso(2, 3, x.as_rational().unwrap()).unwrap()))
            .collect();
        image.sort();
        assert_eq!(image, dst.elements());
        let (src, dst) = prime_swap_windows(5, 2, 30, 25).unwrap();
        assert_eq!(src.len(), dst.len());
    }
}
