//! Text formats for window graphs.
//!
//! TSV: a header `# group=<descriptor> window=<spec> mode=<undirected|directed>`
//! followed by one `u<TAB>v` line per edge (or arc) in canonical vertex order.
//! DOT: a `graph`/`digraph` with quoted labels; inverse-pair arcs are drawn once
//! with `dir=both`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graphs::WindowGraph;
use crate::groups::{Element, GroupDescriptor};
use crate::window::{build_window, WindowSpec};

pub fn mode_name(graph: &WindowGraph) -> &'static str {
    if graph.is_directed() {
        "directed"
    } else {
        "undirected"
    }
}

pub fn emit_tsv(graph: &WindowGraph) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# group={} window={} mode={}",
        graph.group(),
        graph.spec(),
        mode_name(graph)
    )
    .unwrap();
    let pairs = graph.arcs().unwrap_or_else(|| graph.edges());
    for (u, v) in pairs {
        writeln!(out, "{}\t{}", graph.vertex(u), graph.vertex(v)).unwrap();
    }
    out
}

/// Parses TSV produced by [`emit_tsv`].
///
/// For named windows the vertex set is rebuilt from the header, so isolated
/// vertices survive the round trip. Custom windows keep the vertices that
/// appear on edge lines plus the identity.
pub fn parse_tsv(text: &str) -> Result<WindowGraph> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty TSV".into()))?;
    let rest = header
        .strip_prefix("# ")
        .ok_or_else(|| Error::Parse(format!("bad TSV header {header:?}")))?;
    let mut group = None;
    let mut spec = None;
    let mut directed = None;
    for field in rest.split_whitespace() {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header field {field:?}")))?;
        match k {
            "group" => group = Some(v.parse::<GroupDescriptor>()?),
            "window" => spec = Some(v.parse::<WindowSpec>()?),
            "mode" => {
                directed = Some(match v {
                    "directed" => true,
                    "undirected" => false,
                    _ => return Err(Error::Parse(format!("bad mode {v:?}"))),
                })
            }
            _ => return Err(Error::Parse(format!("unknown header field {k:?}"))),
        }
    }
    let missing = |f: &str| Error::Parse(format!("TSV header lacks {f}"));
    let group = group.ok_or_else(|| missing("group"))?;
    let spec = spec.ok_or_else(|| missing("window"))?;
    let directed = directed.ok_or_else(|| missing("mode"))?;

    let mut pairs: Vec<(Element, Element)> = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let (u, v) = line
            .split_once('\t')
            .ok_or_else(|| Error::Parse(format!("bad TSV line {line:?}")))?;
        pairs.push((group.parse_element(u)?, group.parse_element(v)?));
    }

    let vertices: Vec<Element> = match spec {
        WindowSpec::Custom => {
            let mut vs: Vec<Element> = pairs
                .iter()
                .flat_map(|(u, v)| [u.clone(), v.clone()])
                .chain(std::iter::once(group.identity()))
                .collect();
            vs.sort();
            vs.dedup();
            vs
        }
        ref s => build_window(&group, s)?.elements().to_vec(),
    };
    let pos = |x: &Element| {
        vertices
            .binary_search(x)
            .map_err(|_| Error::UnknownVertex(x.to_string()))
    };
    let indexed: Vec<(usize, usize)> = pairs
        .iter()
        .map(|(u, v)| Ok((pos(u)?, pos(v)?)))
        .collect::<Result<_>>()?;
    let arcs = directed.then(|| indexed.clone());
    WindowGraph::from_parts(group, spec, vertices, indexed, arcs)
}

fn quote(x: &Element) -> String {
    format!("\"{x}\"")
}

/// Deterministic DOT text.
pub fn emit_dot(graph: &WindowGraph) -> String {
    let mut out = String::new();
    writeln!(out, "// group={} window={}", graph.group(), graph.spec()).unwrap();
    let directed = graph.is_directed();
    writeln!(out, "{} power {{", if directed { "digraph" } else { "graph" }).unwrap();
    for x in graph.vertices() {
        writeln!(out, "  {};", quote(x)).unwrap();
    }
    if directed {
        for (u, v) in graph.arcs().expect("directed") {
            let both = graph.has_arc(v, u);
            if both && v < u {
                continue;
            }
            let attr = if both { " [dir=both]" } else { "" };
            writeln!(out, "  {} -> {}{};", quote(graph.vertex(u)), quote(graph.vertex(v)), attr).unwrap();
        }
    } else {
        for (u, v) in graph.edges() {
            writeln!(out, "  {} -- {};", quote(graph.vertex(u)), quote(graph.vertex(v))).unwrap();
        }
    }
    out.push_str("}\n");
    out
}
