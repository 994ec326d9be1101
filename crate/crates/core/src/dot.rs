//! DOT export for frames, models and extension lattices.
//!
//! Frames render with cover edges and a double-circled root; models label
//! nodes with their bit-strings; lattices render as Hasse diagrams with
//! nullary nodes filled.

use crate::frames::Frame;
use crate::logics::ExtensionLattice;
use crate::models::Model;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\\\""))
}

pub fn frame_dot(name: &str, frame: &Frame) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph {} {{\n", quote(name)));
    out.push_str("  rankdir=BT;\n");
    for w in 0..frame.len() {
        let shape = if w == frame.root() {
            " [shape=doublecircle]"
        } else {
            " [shape=circle]"
        };
        out.push_str(&format!("  {}{};\n", quote(frame.name_of(w)), shape));
    }
    for &(a, b) in frame.covers() {
        out.push_str(&format!(
            "  {} -> {};\n",
            quote(frame.name_of(a)),
            quote(frame.name_of(b))
        ));
    }
    out.push_str("}\n");
    out
}

pub fn model_dot(name: &str, model: &Model) -> String {
    let frame = model.frame();
    let mut out = String::new();
    out.push_str(&format!("digraph {} {{\n", quote(name)));
    out.push_str("  rankdir=BT;\n");
    for w in 0..frame.len() {
        let shape = if w == frame.root() {
            "doublecircle"
        } else {
            "circle"
        };
        out.push_str(&format!(
            "  {} [shape={shape} label={}];\n",
            quote(frame.name_of(w)),
            quote(&format!("{}:{}", frame.name_of(w), model.bits_of(w))),
        ));
    }
    for &(a, b) in frame.covers() {
        out.push_str(&format!(
            "  {} -> {};\n",
            quote(frame.name_of(a)),
            quote(frame.name_of(b))
        ));
    }
    out.push_str("}\n");
    out
}

/// Hasse diagram of an extension lattice; `labels` names each node and
/// `nullary` marks the filled ones.
pub fn lattice_dot(name: &str, lattice: &ExtensionLattice, labels: &[String], nullary: &[bool]) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph {} {{\n", quote(name)));
    out.push_str("  rankdir=BT;\n");
    for node in 0..lattice.len() {
        let style = if nullary[node] {
            " style=filled fillcolor=gray70"
        } else {
            ""
        };
        out.push_str(&format!(
            "  n{node} [shape=box label={}{}];\n",
            quote(&labels[node]),
            style
        ));
    }
    for (a, b) in lattice.covers() {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}
