//! SVG rendering of emitted DOT.
//!
//! With `NDVIZ_LAYOUT` pointing at a GraphViz-compatible `dot` binary the
//! layout is delegated to it; otherwise a small layered layout is used:
//! states ranked left to right by breadth-first distance from the start
//! state and ordered by name within a rank. Either way every state group
//! carries `data-state` and every edge group `data-edge`, so clients can
//! recolor without laying out again.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use thiserror::Error;

use super::dot::{parse_dot, DotError, DotGraph};
use super::START_OUTLINE;

pub const LAYOUT_ENV: &str = "NDVIZ_LAYOUT";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Layout {
    Builtin,
    /// Program invoked as `program -Tsvg` with DOT on stdin.
    External(PathBuf),
}

impl Layout {
    /// The program named by `NDVIZ_LAYOUT`, if set, else the built-in layout.
    pub fn detect() -> Layout {
        match std::env::var_os(LAYOUT_ENV) {
            Some(p) if !p.is_empty() => Layout::External(p.into()),
            _ => Layout::Builtin,
        }
    }
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Dot(#[from] DotError),
    #[error("could not run layout tool {program}: {source}")]
    Spawn {
        program: String,
        source: std::io::Error,
    },
    #[error("layout tool {program} failed ({status}): {stderr}")]
    Tool {
        program: String,
        status: String,
        stderr: String,
    },
}

pub fn render_svg(dot: &str) -> Result<String, RenderError> {
    render_svg_with(dot, &Layout::detect())
}

pub fn render_svg_with(dot: &str, layout: &Layout) -> Result<String, RenderError> {
    let graph = parse_dot(dot)?;
    match layout {
        Layout::Builtin => Ok(builtin(&graph)),
        Layout::External(program) => external(dot, &graph, program),
    }
}

fn external(dot: &str, graph: &DotGraph, program: &PathBuf) -> Result<String, RenderError> {
    let name = program.display().to_string();
    let spawn_err = |source| RenderError::Spawn {
        program: name.clone(),
        source,
    };
    let mut child = Command::new(program)
        .arg("-Tsvg")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(spawn_err)?;
    if let Some(mut stdin) = child.stdin.take() {
        // A tool that exits without reading stdin surfaces through its status.
        let _ = stdin.write_all(dot.as_bytes());
    }
    let out = child.wait_with_output().map_err(spawn_err)?;
    if !out.status.success() {
        return Err(RenderError::Tool {
            program: name,
            status: out.status.to_string(),
            stderr: String::from_utf8_lossy(&out.stderr).trim().to_string(),
        });
    }
    Ok(tag_groups(&String::from_utf8_lossy(&out.stdout), graph))
}

/// Adds `data-state` / `data-edge` to `<g id="...">` elements whose ids
/// came from our DOT `id` attributes.
fn tag_groups(svg: &str, graph: &DotGraph) -> String {
    let mut states = HashMap::new();
    for n in &graph.nodes {
        if let Some(id) = n.attrs.get("id") {
            states.insert(id.clone(), n.name.clone());
        }
    }
    let mut edges = HashMap::new();
    for e in &graph.edges {
        if let Some(id) = e.attrs.get("id") {
            edges.insert(id.clone(), format!("{}->{}", e.from, e.to));
        }
    }
    const OPEN: &str = "<g id=\"";
    let mut out = String::with_capacity(svg.len() + 64 * states.len());
    let mut rest = svg;
    while let Some(at) = rest.find(OPEN) {
        let value_start = at + OPEN.len();
        let Some(len) = rest[value_start..].find('"') else {
            break;
        };
        let value_end = value_start + len + 1;
        out.push_str(&rest[..value_end]);
        let id = unescape(&rest[value_start..value_start + len]);
        if let Some(state) = states.get(&id) {
            let _ = write!(out, " data-state=\"{}\"", xml(state));
        } else if let Some(edge) = edges.get(&id) {
            let _ = write!(out, " data-edge=\"{}\"", xml(edge));
        }
        rest = &rest[value_end..];
    }
    out.push_str(rest);
    out
}

fn unescape(s: &str) -> String {
    s.replace("&#45;", "-")
        .replace("&#39;", "'")
        .replace("&quot;", "\"")
        .replace("&lt;", "<")
        .replace("&gt;", ">")
        .replace("&amp;", "&")
}

fn xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

const RADIUS: f64 = 22.0;
const RANK_GAP: f64 = 150.0;
const ROW_GAP: f64 = 110.0;
const MARGIN: f64 = 70.0;

#[derive(Clone, Copy)]
struct Pt {
    x: f64,
    y: f64,
}

fn rank_nodes(g: &DotGraph) -> BTreeMap<usize, Vec<usize>> {
    let index: HashMap<&str, usize> = g
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.name.as_str(), i))
        .collect();
    let start = g
        .nodes
        .iter()
        .position(|n| n.attrs.get("color").map(String::as_str) == Some(START_OUTLINE))
        .unwrap_or(0);
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); g.nodes.len()];
    for e in &g.edges {
        adj[index[e.from.as_str()]].insert(index[e.to.as_str()]);
    }
    let mut rank: Vec<Option<usize>> = vec![None; g.nodes.len()];
    let mut queue = VecDeque::new();
    if !g.nodes.is_empty() {
        rank[start] = Some(0);
        queue.push_back(start);
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if rank[v].is_none() {
                rank[v] = Some(rank[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }
    let unreached = rank.iter().flatten().max().map_or(0, |m| m + 1);
    let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, r) in rank.iter().enumerate() {
        ranks.entry(r.unwrap_or(unreached)).or_default().push(i);
    }
    for members in ranks.values_mut() {
        members.sort_by(|&a, &b| g.nodes[a].name.cmp(&g.nodes[b].name));
    }
    ranks
}

/// `#RRGGBB;0.5:#RRGGBB` style color lists.
fn color_list(spec: &str) -> Vec<&str> {
    spec.split(':')
        .map(|c| c.split(';').next().unwrap_or(c))
        .filter(|c| !c.is_empty())
        .collect()
}

fn fmt_num(v: f64) -> String {
    let r = (v * 10.0).round() / 10.0;
    if r.fract() == 0.0 {
        format!("{}", r as i64)
    } else {
        format!("{r:.1}")
    }
}

fn builtin(g: &DotGraph) -> String {
    let ranks = rank_nodes(g);
    let mut pos = vec![Pt { x: 0.0, y: 0.0 }; g.nodes.len()];
    let mut rank_of = vec![0usize; g.nodes.len()];
    let tallest = ranks.values().map(Vec::len).max().unwrap_or(1);
    for (col, (r, members)) in ranks.iter().enumerate() {
        let offset = (tallest - members.len()) as f64 * ROW_GAP / 2.0;
        for (row, &i) in members.iter().enumerate() {
            pos[i] = Pt {
                x: MARGIN + col as f64 * RANK_GAP,
                y: MARGIN + offset + row as f64 * ROW_GAP,
            };
            rank_of[i] = *r;
        }
    }
    let width = MARGIN * 2.0 + (ranks.len().max(1) - 1) as f64 * RANK_GAP;
    let height = MARGIN * 2.0 + (tallest - 1) as f64 * ROW_GAP;

    let index: HashMap<&str, usize> = g
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.name.as_str(), i))
        .collect();
    let pairs: BTreeSet<(usize, usize)> = g
        .edges
        .iter()
        .map(|e| (index[e.from.as_str()], index[e.to.as_str()]))
        .collect();

    let mut markers = BTreeSet::from(["#000000".to_string()]);
    for e in &g.edges {
        for c in color_list(g.edge_attr(e, "color").unwrap_or("#000000")) {
            markers.insert(c.to_string());
        }
    }

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = fmt_num(width),
        h = fmt_num(height)
    );
    s.push_str("<defs>\n");
    for c in &markers {
        let _ = writeln!(
            s,
            r#"<marker id="arrow-{id}" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="8" markerHeight="8" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="{c}"/></marker>"#,
            id = c.trim_start_matches('#'),
            c = xml(c)
        );
    }
    s.push_str("</defs>\n");
    let _ = writeln!(
        s,
        r#"<g class="graph" font-family="Helvetica,Arial,sans-serif" font-size="14">"#
    );

    for e in &g.edges {
        let (a, b) = (index[e.from.as_str()], index[e.to.as_str()]);
        let id = g.edge_attr(e, "id").map(str::to_string).unwrap_or_default();
        let label = g.edge_attr(e, "label").unwrap_or("");
        let mut colors = color_list(g.edge_attr(e, "color").unwrap_or(""));
        if colors.is_empty() {
            colors.push("#000000");
        }
        let width: f64 = g
            .edge_attr(e, "penwidth")
            .and_then(|w| w.parse().ok())
            .unwrap_or(1.0);
        let dashed = g.edge_attr(e, "style").is_some_and(|st| st.contains("dashed"));
        let font = g.edge_attr(e, "fontcolor").unwrap_or(colors[0]);

        let (p0, ctrl, p1, label_at) = if a == b {
            let c = pos[a];
            (
                Pt { x: c.x - 10.0, y: c.y - RADIUS + 2.0 },
                Pt { x: c.x, y: c.y - RADIUS - 70.0 },
                Pt { x: c.x + 10.0, y: c.y - RADIUS + 2.0 },
                Pt { x: c.x, y: c.y - RADIUS - 42.0 },
            )
        } else {
            let (pa, pb) = (pos[a], pos[b]);
            let (dx, dy) = (pb.x - pa.x, pb.y - pa.y);
            let len = (dx * dx + dy * dy).sqrt().max(1.0);
            let (nx, ny) = (-dy / len, dx / len);
            let backward = rank_of[b] <= rank_of[a];
            let bend = if pairs.contains(&(b, a)) || backward {
                30.0 + if backward && rank_of[a] != rank_of[b] { 0.2 * len } else { 0.0 }
            } else {
                0.0
            };
            let mid = Pt {
                x: (pa.x + pb.x) / 2.0 + nx * bend,
                y: (pa.y + pb.y) / 2.0 + ny * bend,
            };
            let toward = |from: Pt, to: Pt| {
                let (ux, uy) = (to.x - from.x, to.y - from.y);
                let l = (ux * ux + uy * uy).sqrt().max(1.0);
                Pt {
                    x: from.x + ux / l * RADIUS,
                    y: from.y + uy / l * RADIUS,
                }
            };
            let (p0, p1) = (toward(pa, mid), toward(pb, mid));
            let at = Pt {
                x: 0.25 * p0.x + 0.5 * mid.x + 0.25 * p1.x,
                y: 0.25 * p0.y + 0.5 * mid.y + 0.25 * p1.y - 6.0,
            };
            (p0, mid, p1, at)
        };

        let (from, to) = (&e.from, &e.to);
        let _ = writeln!(
            s,
            r#"<g class="edge" id="{}" data-edge="{}">"#,
            xml(&id),
            xml(&format!("{from}->{to}"))
        );
        let _ = writeln!(s, "<title>{}</title>", xml(&format!("{from}->{to}")));
        for (k, color) in colors.iter().enumerate() {
            let shift = (k as f64 - (colors.len() - 1) as f64 / 2.0) * (width + 1.0);
            let _ = writeln!(
                s,
                r#"<path d="M{},{} Q{},{} {},{}" fill="none" stroke="{}" stroke-width="{}"{} marker-end="url(#arrow-{})"/>"#,
                fmt_num(p0.x),
                fmt_num(p0.y + shift),
                fmt_num(ctrl.x),
                fmt_num(ctrl.y + shift),
                fmt_num(p1.x),
                fmt_num(p1.y + shift),
                xml(color),
                fmt_num(width),
                if dashed { r#" stroke-dasharray="5,3""# } else { "" },
                color.trim_start_matches('#')
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" fill="{}">{}</text>"#,
            fmt_num(label_at.x),
            fmt_num(label_at.y),
            xml(font),
            xml(label)
        );
        s.push_str("</g>\n");
    }

    for (i, n) in g.nodes.iter().enumerate() {
        let p = pos[i];
        let id = g.node_attr(n, "id").map(str::to_string).unwrap_or_default();
        let stroke = g.node_attr(n, "color").unwrap_or("#000000");
        let width = g.node_attr(n, "penwidth").unwrap_or("1");
        let style = g.node_attr(n, "style").unwrap_or("");
        let double = g.node_attr(n, "shape") == Some("doublecircle");
        let fills = color_list(g.node_attr(n, "fillcolor").unwrap_or(""));
        let dash = if style.contains("dashed") {
            r#" stroke-dasharray="5,3""#
        } else {
            ""
        };
        let _ = writeln!(
            s,
            r#"<g class="node" id="{}" data-state="{}">"#,
            xml(&id),
            xml(&n.name)
        );
        let _ = writeln!(s, "<title>{}</title>", xml(&n.name));
        let (x, y, r) = (fmt_num(p.x), fmt_num(p.y), fmt_num(RADIUS));
        if style.contains("wedged") && fills.len() >= 2 {
            // Left half first color, right half second.
            let (top, bottom) = (fmt_num(p.y - RADIUS), fmt_num(p.y + RADIUS));
            let _ = writeln!(
                s,
                r#"<path class="fill" d="M{x},{top} A{r},{r} 0 0,0 {x},{bottom} Z" fill="{}"/>"#,
                xml(fills[0])
            );
            let _ = writeln!(
                s,
                r#"<path class="fill" d="M{x},{top} A{r},{r} 0 0,1 {x},{bottom} Z" fill="{}"/>"#,
                xml(fills[1])
            );
        }
        let fill = if style.contains("filled") {
            fills.first().copied().unwrap_or("#D3D3D3")
        } else {
            "none"
        };
        let _ = writeln!(
            s,
            r#"<circle cx="{x}" cy="{y}" r="{r}" fill="{}" stroke="{}" stroke-width="{}"{dash}/>"#,
            xml(fill),
            xml(stroke),
            xml(width)
        );
        if double {
            let _ = writeln!(
                s,
                r#"<circle cx="{x}" cy="{y}" r="{}" fill="none" stroke="{}" stroke-width="{}"{dash}/>"#,
                fmt_num(RADIUS - 4.0),
                xml(stroke),
                xml(width)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#,
            fmt_num(p.y + 5.0),
            xml(g.node_attr(n, "label").unwrap_or(&n.name))
        );
        s.push_str("</g>\n");
    }
    s.push_str("</g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_external_groups() {
        let g = parse_dot(r#"digraph { "S" [id="state-S"]; "S" -> "A" [id="edge-S-A"]; }"#).unwrap();
        let svg = r#"<svg><g id="state&#45;S" class="node"></g><g id="edge&#45;S&#45;A" class="edge"></g><g id="graph0"></g></svg>"#;
        let tagged = tag_groups(svg, &g);
        assert!(tagged.contains(r#"<g id="state&#45;S" data-state="S" class="node">"#), "{tagged}");
        assert!(tagged.contains(r#"data-edge="S-&gt;A""#), "{tagged}");
        assert!(tagged.contains(r#"<g id="graph0">"#));
    }

    #[test]
    fn color_lists() {
        assert_eq!(color_list("#22AA22;0.5:#CC0000"), ["#22AA22", "#CC0000"]);
        assert_eq!(color_list("#006400"), ["#006400"]);
    }
}
