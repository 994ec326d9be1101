//! Text formats for frames, models, node maps and logic specs.
//!
//! Frame blocks:  `frame <name> { nodes: a, b; root: a; order: a<b; }`
//! Model blocks:  `model <name> over <frame> vars <n> { a: 01; b: 11; }`
//! Node maps:     `map { a -> u; b -> v; }`
//! Logic specs:   `logic <name> { frames: G3, F2; }`
//!
//! Order lists covers only; the closure is implied. Model bit-strings read
//! left to right as x1, x2, ...

use crate::frames::{Frame, FrameError};
use crate::models::{Model, ModelError};
use crate::morphisms::NodeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TextError {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown frame `{0}`")]
    UnknownFrame(String),
}

fn syntax(msg: impl Into<String>) -> TextError {
    TextError::Syntax(msg.into())
}

/// Strips `#`-to-end-of-line comments.
fn strip_comments(src: &str) -> String {
    src.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Splits `name { body }` blocks introduced by the given keyword.
fn blocks(src: &str, keyword: &str) -> Result<Vec<(String, String)>, TextError> {
    let mut out = Vec::new();
    let mut rest = src;
    while let Some(at) = rest.find(keyword) {
        // Keyword must be a whole word.
        let before = &rest[..at];
        let tail = &rest[at + keyword.len()..];
        if before
            .chars()
            .last()
            .is_some_and(|c| c.is_alphanumeric() || c == '_')
            || tail
                .chars()
                .next()
                .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == ':')
        {
            rest = &rest[at + keyword.len()..];
            continue;
        }
        let after = tail;
        let open = after
            .find('{')
            .ok_or_else(|| syntax(format!("`{keyword}` without `{{`")))?;
        let header = after[..open].trim().to_string();
        let close = after[open + 1..]
            .find('}')
            .ok_or_else(|| syntax(format!("`{keyword}` without `}}`")))?;
        let body = after[open + 1..open + 1 + close].to_string();
        out.push((header, body));
        rest = &after[open + 1 + close + 1..];
    }
    Ok(out)
}

fn body_fields(body: &str) -> Vec<(String, String)> {
    body.split(';')
        .filter_map(|item| {
            let item = item.trim();
            if item.is_empty() {
                return None;
            }
            let (k, v) = item.split_once(':')?;
            Some((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

/// Parses every `frame` block in the source.
pub fn parse_frames(src: &str) -> Result<Vec<(String, Frame)>, TextError> {
    let src = strip_comments(src);
    let mut out = Vec::new();
    for (name, body) in blocks(&src, "frame")? {
        if name.is_empty() {
            return Err(syntax("frame block without a name"));
        }
        let mut nodes: Vec<String> = Vec::new();
        let mut root = String::new();
        let mut covers: Vec<(String, String)> = Vec::new();
        for (key, value) in body_fields(&body) {
            match key.as_str() {
                "nodes" => {
                    nodes = value
                        .split(',')
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect()
                }
                "root" => root = value,
                "order" => {
                    for pair in value.split(',') {
                        let pair = pair.trim();
                        if pair.is_empty() {
                            continue;
                        }
                        let (a, b) = pair
                            .split_once('<')
                            .ok_or_else(|| syntax(format!("bad order pair `{pair}`")))?;
                        covers.push((a.trim().to_string(), b.trim().to_string()));
                    }
                }
                other => return Err(syntax(format!("unknown frame field `{other}`"))),
            }
        }
        if root.is_empty() {
            return Err(syntax(format!("frame `{name}` has no root")));
        }
        let frame = Frame::build(&nodes, &covers, &root)?;
        out.push((name, frame));
    }
    Ok(out)
}

pub fn parse_frame(src: &str) -> Result<(String, Frame), TextError> {
    let mut all = parse_frames(src)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        n => Err(syntax(format!("expected exactly one frame block, found {n}"))),
    }
}

/// Renders a frame in the block format.
pub fn format_frame(name: &str, frame: &Frame) -> String {
    let nodes = frame.names().join(", ");
    let order = frame
        .covers()
        .iter()
        .map(|&(a, b)| format!("{}<{}", frame.name_of(a), frame.name_of(b)))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "frame {name} {{ nodes: {nodes}; root: {}; order: {order}; }}",
        frame.name_of(frame.root())
    )
}

/// Parses a model block, resolving its frame through the given lookup.
pub fn parse_model(
    src: &str,
    resolve: impl Fn(&str) -> Option<Arc<Frame>>,
) -> Result<(String, Model), TextError> {
    let src = strip_comments(src);
    let mut found = blocks(&src, "model")?;
    if found.len() != 1 {
        return Err(syntax(format!(
            "expected exactly one model block, found {}",
            found.len()
        )));
    }
    let (header, body) = found.pop().unwrap();
    // Header: `<name> over <frame> vars <n>`
    let words: Vec<&str> = header.split_whitespace().collect();
    let (name, frame_name, nvars) = match words.as_slice() {
        [name, "over", frame, "vars", n] => (name.to_string(), frame.to_string(), *n),
        _ => {
            return Err(syntax(format!(
                "bad model header `{header}`, expected `<name> over <frame> vars <n>`"
            )))
        }
    };
    let nvars: u32 = nvars
        .parse()
        .map_err(|_| syntax(format!("bad vars count `{nvars}`")))?;
    let frame =
        resolve(&frame_name).ok_or_else(|| TextError::UnknownFrame(frame_name.clone()))?;
    let mut vals = vec![u32::MAX; frame.len()];
    for (node, bits) in body_fields(&body) {
        let w = frame.node(&node)?;
        if bits.len() != nvars as usize || !bits.chars().all(|c| c == '0' || c == '1') {
            return Err(syntax(format!(
                "bad bit-string `{bits}` for node `{node}` (expected {nvars} bits)"
            )));
        }
        // Leftmost printed symbol is x1, i.e. bit 0.
        let mut v = 0u32;
        for (i, c) in bits.chars().enumerate() {
            if c == '1' {
                v |= 1 << i;
            }
        }
        vals[w] = v;
    }
    for (w, &v) in vals.iter().enumerate() {
        if v == u32::MAX {
            return Err(syntax(format!(
                "node `{}` has no valuation",
                frame.name_of(w)
            )));
        }
    }
    let model = Model::build(frame, nvars, vals)?;
    Ok((name, model))
}

pub fn format_model(name: &str, frame_name: &str, model: &Model) -> String {
    let body = (0..model.len())
        .map(|w| format!("{}: {}", model.frame().name_of(w), model.bits_of(w)))
        .collect::<Vec<_>>()
        .join("; ");
    format!(
        "model {name} over {frame_name} vars {} {{ {body}; }}",
        model.nvars()
    )
}

/// Parses `map { a -> u; b -> v; }` against explicit source/target frames.
pub fn parse_node_map(src: &str, from: &Frame, to: &Frame) -> Result<NodeMap, TextError> {
    let src = strip_comments(src);
    let mut found = blocks(&src, "map")?;
    if found.len() != 1 {
        return Err(syntax("expected exactly one map block"));
    }
    let (_, body) = found.pop().unwrap();
    let mut map = vec![usize::MAX; from.len()];
    for item in body.split(';') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (a, b) = item
            .split_once("->")
            .ok_or_else(|| syntax(format!("bad map entry `{item}`")))?;
        map[from.node(a.trim())?] = to.node(b.trim())?;
    }
    for (w, &t) in map.iter().enumerate() {
        if t == usize::MAX {
            return Err(syntax(format!("node `{}` unmapped", from.name_of(w))));
        }
    }
    Ok(NodeMap::new(map))
}

/// Parses `logic <name> { frames: A, B; }` returning the frame name list.
pub fn parse_logic_spec(src: &str) -> Result<(String, Vec<String>), TextError> {
    let src = strip_comments(src);
    let mut found = blocks(&src, "logic")?;
    if found.len() != 1 {
        return Err(syntax("expected exactly one logic block"));
    }
    let (name, body) = found.pop().unwrap();
    if name.is_empty() {
        return Err(syntax("logic block without a name"));
    }
    let mut frames = Vec::new();
    for (key, value) in body_fields(&body) {
        if key != "frames" {
            return Err(syntax(format!("unknown logic field `{key}`")));
        }
        frames.extend(
            value
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty()),
        );
    }
    if frames.is_empty() {
        return Err(syntax(format!("logic `{name}` lists no frames")));
    }
    Ok((name, frames))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_round_trip() {
        let src = "frame G3 { nodes: r, a, b, t; root: r; order: r<a, r<b, b<t; }";
        let (name, frame) = parse_frame(src).unwrap();
        assert_eq!(name, "G3");
        assert_eq!(frame.len(), 4);
        let printed = format_frame(&name, &frame);
        let (name2, frame2) = parse_frame(&printed).unwrap();
        assert_eq!(name2, "G3");
        assert!(frame.isomorphic(&frame2));
    }

    #[test]
    fn model_bits_convention() {
        let (_, frame) = parse_frame("frame L2 { nodes: a, b; root: a; order: a<b; }").unwrap();
        let frame = Arc::new(frame);
        let src = "model m over L2 vars 2 { a: 00; b: 10; }";
        let (_, model) = parse_model(src, |n| (n == "L2").then(|| frame.clone())).unwrap();
        // "10" means x1 true, x2 false.
        assert!(model.holds_var(1, 1));
        assert!(!model.holds_var(1, 2));
        let printed = format_model("m", "L2", &model);
        let (_, model2) = parse_model(&printed, |n| (n == "L2").then(|| frame.clone())).unwrap();
        assert_eq!(model.vals(), model2.vals());
    }

    #[test]
    fn node_map_parse() {
        let (_, f2) =
            parse_frame("frame F2 { nodes: r, a, b; root: r; order: r<a, r<b; }").unwrap();
        let (_, l2) = parse_frame("frame L2 { nodes: u, v; root: u; order: u<v; }").unwrap();
        let map = parse_node_map("map { r -> u; a -> v; b -> v; }", &f2, &l2).unwrap();
        assert_eq!(map.as_slice(), &[0, 1, 1]);
    }

    #[test]
    fn logic_spec_parse() {
        let (name, frames) = parse_logic_spec("logic mix { frames: G3, F2; }").unwrap();
        assert_eq!(name, "mix");
        assert_eq!(frames, vec!["G3".to_string(), "F2".to_string()]);
    }

    #[test]
    fn comments_are_stripped() {
        let src = "# catalog entry\nframe L1 { nodes: a; root: a; order: ; } # one point";
        let (_, frame) = parse_frame(src).unwrap();
        assert_eq!(frame.len(), 1);
    }
}
