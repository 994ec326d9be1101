//! The named frame catalog.
//!
//! Fixed frames ship as a data file embedded at build time; more can be
//! loaded from user files at run time. Chains `L<d>`, forks `F<n>` and
//! rhombuses `R<n>` are parametric and generated on demand, with the
//! degenerate cases F0 = R0 = L1, F1 = L2 and R1 = L3 (a fork with a top).

use crate::frames::{Frame, FrameError};
use crate::text;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

const CATALOG_DATA: &str = include_str!("../data/catalog.frames");

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown frame name `{0}`")]
    UnknownName(String),
    #[error("bad size parameter for `{family}`: {msg}")]
    BadParameter { family: String, msg: String },
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// Resolves catalog names to frames.
pub struct Catalog {
    named: BTreeMap<String, Arc<Frame>>,
}

impl Catalog {
    /// The built-in catalog.
    pub fn standard() -> Catalog {
        let mut named = BTreeMap::new();
        for (name, frame) in
            text::parse_frames(CATALOG_DATA).expect("embedded catalog data parses")
        {
            named.insert(name, Arc::new(frame));
        }
        Catalog { named }
    }

    /// Adds or replaces frames parsed from extra frame blocks.
    pub fn extend_from_text(&mut self, src: &str) -> Result<Vec<String>, text::TextError> {
        let mut added = Vec::new();
        for (name, frame) in text::parse_frames(src)? {
            self.named.insert(name.clone(), Arc::new(frame));
            added.push(name);
        }
        Ok(added)
    }

    pub fn names(&self) -> Vec<String> {
        self.named.keys().cloned().collect()
    }

    /// Looks a name up, recognizing the parametric families `L<d>`, `F<n>`,
    /// `R<n>` alongside the fixed names.
    pub fn lookup(&self, name: &str) -> Result<Arc<Frame>, CatalogError> {
        if let Some(f) = self.named.get(name) {
            return Ok(f.clone());
        }
        if let Some((family, n)) = parse_parametric(name) {
            return self.parametric(family, n);
        }
        Err(CatalogError::UnknownName(name.to_string()))
    }

    /// Builds `L<d>`, `F<n>` or `R<n>` from the size parameter.
    pub fn parametric(&self, family: char, n: u32) -> Result<Arc<Frame>, CatalogError> {
        let bad = |msg: &str| CatalogError::BadParameter {
            family: family.to_string(),
            msg: msg.to_string(),
        };
        match family {
            'L' => {
                if n < 1 {
                    return Err(bad("chains need d >= 1"));
                }
                Ok(Arc::new(chain(n)?))
            }
            'F' => match n {
                0 => Ok(Arc::new(chain(1)?)),
                1 => Ok(Arc::new(chain(2)?)),
                _ => Ok(Arc::new(fork(n)?)),
            },
            'R' => match n {
                0 => Ok(Arc::new(chain(1)?)),
                1 => Ok(Arc::new(chain(3)?)),
                _ => Ok(Arc::new(rhombus(n)?)),
            },
            _ => Err(bad("unknown family")),
        }
    }
}

/// Reverse lookup from canonical frame forms to preferred display names.
/// Later insertions win, so parametric names shadow the C-aliases (C1 shows
/// as F3) and R2plus shadows Y1.
pub struct Namer {
    map: BTreeMap<Vec<u8>, String>,
}

impl Namer {
    pub fn new(cat: &Catalog) -> Namer {
        let mut map = BTreeMap::new();
        let priority = |name: &str| -> u8 {
            match name.chars().next() {
                Some('C') => 0,
                _ if name == "Y1" => 1,
                Some('Y') => 2,
                _ if name == "G3L2" || name == "G3F2" => 3,
                Some('G') => 4,
                _ => 5,
            }
        };
        let mut entries: Vec<(u8, String, Arc<Frame>)> = cat
            .named
            .iter()
            .map(|(n, f)| (priority(n), n.clone(), f.clone()))
            .collect();
        entries.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        for (_, name, frame) in entries {
            map.insert(frame.canonical_form(), name);
        }
        for d in 1..=9u32 {
            if let Ok(f) = cat.parametric('L', d) {
                map.insert(f.canonical_form(), format!("L{d}"));
            }
        }
        for n in 2..=8u32 {
            if let Ok(f) = cat.parametric('F', n) {
                map.insert(f.canonical_form(), format!("F{n}"));
            }
            if let Ok(f) = cat.parametric('R', n) {
                map.insert(f.canonical_form(), format!("R{n}"));
            }
        }
        Namer { map }
    }

    /// Preferred name of a frame, or a size-and-digest fallback.
    pub fn name(&self, f: &Frame) -> String {
        let canon = f.canonical_form();
        self.map
            .get(&canon)
            .cloned()
            .unwrap_or_else(|| format!("anon{}[{}]", f.len(), crate::morphisms::digest(&canon)))
    }
}

/// One-off display name against a catalog.
pub fn display_name(cat: &Catalog, f: &Frame) -> String {
    Namer::new(cat).name(f)
}

fn parse_parametric(name: &str) -> Option<(char, u32)> {
    let mut chars = name.chars();
    let head = chars.next()?;
    if !matches!(head, 'L' | 'F' | 'R') {
        return None;
    }
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((head, digits.parse().ok()?))
}

/// Chain with `d` nodes, root at the bottom.
pub fn chain(d: u32) -> Result<Frame, FrameError> {
    let names: Vec<String> = (1..=d).map(|i| format!("w{i}")).collect();
    let covers: Vec<(usize, usize)> = (1..d as usize).map(|i| (i - 1, i)).collect();
    Frame::from_covers(names, covers, 0)
}

/// Root below `n` incomparable maximal points.
pub fn fork(n: u32) -> Result<Frame, FrameError> {
    let mut names = vec!["r".to_string()];
    names.extend((1..=n).map(|i| format!("m{i}")));
    let covers: Vec<(usize, usize)> = (1..=n as usize).map(|i| (0, i)).collect();
    Frame::from_covers(names, covers, 0)
}

/// Fork with a top point: root, `n` middles, one top.
pub fn rhombus(n: u32) -> Result<Frame, FrameError> {
    let mut names = vec!["r".to_string()];
    names.extend((1..=n).map(|i| format!("m{i}")));
    names.push("t".to_string());
    let top = n as usize + 1;
    let mut covers: Vec<(usize, usize)> = (1..=n as usize).map(|i| (0, i)).collect();
    covers.extend((1..=n as usize).map(|i| (i, top)));
    Frame::from_covers(names, covers, 0)
}
