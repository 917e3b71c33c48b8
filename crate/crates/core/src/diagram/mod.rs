//! Transition diagrams in DOT, optionally colored for one frame, and an SVG
//! renderer with a built-in layered layout.

mod dot;
mod svg;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::frames::{Frame, HighlightColor, NodeColor};
use crate::machine::{Machine, Rule, StateName, Symbol};

pub use dot::{parse_dot, DotEdge, DotError, DotGraph, DotNode};
pub use svg::{render_svg, render_svg_with, Layout, RenderError, LAYOUT_ENV};

pub const GREEN: &str = "#228B22";
pub const DARK_GREEN: &str = "#006400";
pub const VIOLET: &str = "#7F00FF";
pub const GOLD: &str = "#DAA520";
pub const INV_RED: &str = "#CC0000";
pub const INV_GREEN: &str = "#22AA22";
pub const START_OUTLINE: &str = "#008000";

pub fn highlight_hex(c: HighlightColor) -> &'static str {
    match c {
        HighlightColor::Green => GREEN,
        HighlightColor::DarkGreen => DARK_GREEN,
        HighlightColor::Violet => VIOLET,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DiagramSpec<'a> {
    pub machine: &'a Machine,
    pub frame: Option<&'a Frame>,
}

impl<'a> DiagramSpec<'a> {
    pub fn new(machine: &'a Machine) -> Self {
        DiagramSpec {
            machine,
            frame: None,
        }
    }

    pub fn with_frame(machine: &'a Machine, frame: &'a Frame) -> Self {
        DiagramSpec {
            machine,
            frame: Some(frame),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("frame decorates state '{0}', which the machine does not have")]
    UnknownState(StateName),
    #[error("frame does not decorate state '{0}'")]
    MissingState(StateName),
    #[error("frame highlights rule {rule} but the machine has {count} rules")]
    UnknownRule { rule: usize, count: usize },
}

/// Element id of a state in DOT and SVG output.
pub fn state_id(state: &StateName) -> String {
    format!("state-{state}")
}

/// Element id of the merged edge between two states.
pub fn edge_id(src: &StateName, dst: &StateName) -> String {
    format!("edge-{src}-{dst}")
}

fn seq(items: &[Symbol]) -> String {
    if items.is_empty() {
        "ε".to_string()
    } else {
        items.iter().map(Symbol::as_str).collect::<Vec<_>>().join(" ")
    }
}

/// `a` for NFA rules, `a, pop → push` for PDA rules, with ε for nothing.
pub fn rule_label(rule: &Rule) -> String {
    let read = rule.read().map_or("ε", Symbol::as_str);
    match rule {
        Rule::Nfa(_) => read.to_string(),
        Rule::Pda(p) => format!("{read}, {} → {}", seq(&p.pop), seq(&p.push)),
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn check_frame(machine: &Machine, frame: &Frame) -> Result<(), DiagramError> {
    for state in frame.node_decorations.keys() {
        if !machine.has_state(state) {
            return Err(DiagramError::UnknownState(state.clone()));
        }
    }
    for state in machine.states() {
        if !frame.node_decorations.contains_key(state) {
            return Err(DiagramError::MissingState(state.clone()));
        }
    }
    let count = machine.rules().len();
    if let Some(h) = frame.highlighted_edges.iter().find(|h| h.rule >= count) {
        return Err(DiagramError::UnknownRule {
            rule: h.rule,
            count,
        });
    }
    Ok(())
}

/// Deterministic DOT for the machine. States are emitted in machine order,
/// edges by (source, destination) in machine state order; parallel rules
/// share one edge with comma-joined labels.
pub fn emit_dot(spec: DiagramSpec<'_>) -> Result<String, DiagramError> {
    let m = spec.machine;
    if let Some(frame) = spec.frame {
        check_frame(m, frame)?;
    }
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(&m.kind().to_string()));
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle fontname=\"Helvetica\"];\n");
    out.push_str("  edge [fontname=\"Helvetica\"];\n");

    for state in m.states() {
        let mut attrs = vec![format!("id={}", quote(&state_id(state)))];
        if m.is_final(state) {
            attrs.push("shape=doublecircle".into());
        }
        if state == m.start() {
            attrs.push(format!("color={}", quote(START_OUTLINE)));
            attrs.push("penwidth=2".into());
        }
        let mut styles = Vec::new();
        if m.dead_state() == Some(state) {
            styles.push("dashed");
        }
        let decoration = spec.frame.map_or(NodeColor::None, |f| f.decoration(state));
        match decoration {
            NodeColor::None => {}
            NodeColor::InvBicolor => {
                styles.push("wedged");
                attrs.push(format!("fillcolor={}", quote(&format!("{INV_GREEN};0.5:{INV_RED}"))));
            }
            c => {
                styles.push("filled");
                let hex = match c {
                    NodeColor::Gold => GOLD,
                    NodeColor::InvGreen => INV_GREEN,
                    _ => INV_RED,
                };
                attrs.push(format!("fillcolor={}", quote(hex)));
            }
        }
        if !styles.is_empty() {
            attrs.push(format!("style={}", quote(&styles.join(","))));
        }
        let _ = writeln!(out, "  {} [{}];", quote(state.as_str()), attrs.join(" "));
    }

    let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, rule) in m.rules().iter().enumerate() {
        let src = m.state_index(rule.src()).expect("validated machine");
        let dst = m.state_index(rule.dst()).expect("validated machine");
        groups.entry((src, dst)).or_default().push(i);
    }
    for ((src, dst), rules) in groups {
        let (src, dst) = (&m.states()[src], &m.states()[dst]);
        let label = rules
            .iter()
            .map(|&i| rule_label(&m.rules()[i]))
            .collect::<Vec<_>>()
            .join(", ");
        let mut attrs = vec![
            format!("id={}", quote(&edge_id(src, dst))),
            format!("label={}", quote(&label)),
        ];
        if rules.iter().all(|&i| m.is_synthetic(i)) {
            attrs.push("style=dashed".into());
        }
        if let Some(frame) = spec.frame {
            let mut colors: Vec<HighlightColor> =
                rules.iter().filter_map(|&i| frame.highlight(i)).collect();
            colors.sort_by(|a, b| b.cmp(a));
            colors.dedup();
            if let Some(&top) = colors.first() {
                // Several colors on one merged edge draw as parallel strokes,
                // strongest first.
                let list: Vec<&str> = colors.iter().map(|&c| highlight_hex(c)).collect();
                attrs.push(format!("color={}", quote(&list.join(":"))));
                attrs.push(format!("fontcolor={}", quote(highlight_hex(top))));
                attrs.push(format!(
                    "penwidth={}",
                    if top == HighlightColor::DarkGreen { 3 } else { 2 }
                ));
            }
        }
        let _ = writeln!(
            out,
            "  {} -> {} [{}];",
            quote(src.as_str()),
            quote(dst.as_str()),
            attrs.join(" ")
        );
    }
    out.push_str("}\n");
    Ok(out)
}
