//! Finite rooted posets.
//!
//! A frame stores its nodes, the cover relation it was built from and the
//! reflexive-transitive closure of that relation. The closure is represented
//! as one successor bitmask per node, which keeps the order checks used by
//! the model machinery branch-free. Frames are immutable after construction.

use std::sync::Arc;
use thiserror::Error;

/// Hard cap on node count so a node set fits one machine word.
pub const NODE_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("cycle through node `{0}`: order is not antisymmetric")]
    Cycle(String),
    #[error("node `{0}` is not reachable from the root")]
    NotRooted(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("frame would have {0} nodes, cap is {NODE_CAP}")]
    SizeCapExceeded(usize),
    #[error("frame must have at least one node")]
    Empty,
}

/// Finite rooted partial order.
#[derive(Debug, Clone)]
pub struct Frame {
    names: Vec<String>,
    /// `up[w]` has bit `u` set iff `w <= u` (reflexive-transitive closure).
    up: Vec<u64>,
    covers: Vec<(usize, usize)>,
    root: usize,
    depths: Vec<u32>,
}

impl Frame {
    /// Builds a frame from node identifiers, cover pairs and a root.
    /// The reflexive-transitive closure is computed here; antisymmetry and
    /// rootedness are verified.
    pub fn build(
        nodes: &[impl AsRef<str>],
        covers: &[(impl AsRef<str>, impl AsRef<str>)],
        root: &str,
    ) -> Result<Frame, FrameError> {
        if nodes.is_empty() {
            return Err(FrameError::Empty);
        }
        if nodes.len() > NODE_CAP {
            return Err(FrameError::SizeCapExceeded(nodes.len()));
        }
        let names: Vec<String> = nodes.iter().map(|n| n.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(FrameError::DuplicateNode(n.clone()));
            }
        }
        let index = |name: &str| -> Result<usize, FrameError> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| FrameError::UnknownNode(name.to_string()))
        };
        let root = index(root)?;
        let mut cover_idx = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            cover_idx.push((index(a.as_ref())?, index(b.as_ref())?));
        }
        Self::from_covers(names, cover_idx, root)
    }

    /// Builds from already-resolved node indices.
    pub fn from_covers(
        names: Vec<String>,
        covers: Vec<(usize, usize)>,
        root: usize,
    ) -> Result<Frame, FrameError> {
        let n = names.len();
        if n == 0 {
            return Err(FrameError::Empty);
        }
        if n > NODE_CAP {
            return Err(FrameError::SizeCapExceeded(n));
        }
        let mut up = vec![0u64; n];
        for (w, bits) in up.iter_mut().enumerate() {
            *bits = 1 << w;
        }
        for &(a, b) in &covers {
            up[a] |= 1 << b;
        }
        // Warshall closure over the bitmask rows.
        for mid in 0..n {
            for w in 0..n {
                if up[w] >> mid & 1 == 1 {
                    up[w] |= up[mid];
                }
            }
        }
        for w in 0..n {
            for u in 0..n {
                if w != u && up[w] >> u & 1 == 1 && up[u] >> w & 1 == 1 {
                    return Err(FrameError::Cycle(names[w].clone()));
                }
            }
        }
        let reach = up[root];
        for w in 0..n {
            if reach >> w & 1 == 0 {
                return Err(FrameError::NotRooted(names[w].clone()));
            }
        }
        let mut frame = Frame {
            names,
            up,
            covers,
            root,
            depths: Vec::new(),
        };
        frame.recompute_covers();
        frame.depths = frame.compute_depths();
        Ok(frame)
    }

    /// Rebuilds the cover list from the closure (used after quotients and
    /// subframe extraction, where input covers may contain transitive pairs).
    fn recompute_covers(&mut self) {
        let n = self.len();
        let mut covers = Vec::new();
        for w in 0..n {
            for u in 0..n {
                if w == u || self.up[w] >> u & 1 == 0 {
                    continue;
                }
                // u covers w iff nothing sits strictly between.
                let between = self.up[w] & !(1 << w) & !(1 << u);
                let strictly_between = (0..n)
                    .any(|v| between >> v & 1 == 1 && self.up[v] >> u & 1 == 1 && v != u);
                if !strictly_between {
                    covers.push((w, u));
                }
            }
        }
        covers.sort_unstable();
        self.covers = covers;
    }

    fn compute_depths(&self) -> Vec<u32> {
        let n = self.len();
        let mut depth = vec![0u32; n];
        // Process nodes in order of shrinking up-sets: maximal elements first.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&w| self.up[w].count_ones());
        for &w in &order {
            let succ = self.strict_up(w);
            if succ == 0 {
                depth[w] = 1;
            } else {
                depth[w] = 1 + (0..n)
                    .filter(|&u| succ >> u & 1 == 1)
                    .map(|u| depth[u])
                    .max()
                    .unwrap();
            }
        }
        depth
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name_of(&self, w: usize) -> &str {
        &self.names[w]
    }

    pub fn node(&self, name: &str) -> Result<usize, FrameError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| FrameError::UnknownNode(name.to_string()))
    }

    /// `w <= u` in the partial order.
    pub fn leq(&self, w: usize, u: usize) -> bool {
        self.up[w] >> u & 1 == 1
    }

    /// Bitmask of `{u : w <= u}` including `w` itself.
    pub fn up_mask(&self, w: usize) -> u64 {
        self.up[w]
    }

    /// Bitmask of strict successors of `w`.
    pub fn strict_up(&self, w: usize) -> u64 {
        self.up[w] & !(1 << w)
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn is_maximal(&self, w: usize) -> bool {
        self.strict_up(w) == 0
    }

    /// Depth of `w`: 1 for maximal elements, else one more than the deepest
    /// strict successor.
    pub fn depth_at(&self, w: usize) -> u32 {
        self.depths[w]
    }

    /// Depth of the frame, i.e. depth at the root.
    pub fn depth(&self) -> u32 {
        self.depths[self.root]
    }

    /// The subframe generated by `w`: all nodes above `w`, rooted at `w`.
    pub fn generated_subframe(&self, w: usize) -> Frame {
        let mask = self.up[w];
        let kept: Vec<usize> = (0..self.len()).filter(|&u| mask >> u & 1 == 1).collect();
        let names = kept.iter().map(|&u| self.names[u].clone()).collect();
        let renum = |u: usize| kept.iter().position(|&x| x == u).unwrap();
        let covers = self
            .covers
            .iter()
            .filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1)
            .map(|&(a, b)| (renum(a), renum(b)))
            .collect();
        Frame::from_covers(names, covers, renum(w)).expect("generated subframe is a rooted poset")
    }

    /// Vertical join: `self` on the bottom, `upper` on top; every node of
    /// `self` lies below every node of `upper`. Node names are prefixed to
    /// keep the copies disjoint. The root is the lower frame's root.
    pub fn join(&self, upper: &Frame) -> Result<Frame, FrameError> {
        let total = self.len() + upper.len();
        if total > NODE_CAP {
            return Err(FrameError::SizeCapExceeded(total));
        }
        let mut names: Vec<String> = self.names.iter().map(|n| format!("l.{n}")).collect();
        names.extend(upper.names.iter().map(|n| format!("u.{n}")));
        let mut covers: Vec<(usize, usize)> = self.covers.clone();
        let off = self.len();
        covers.extend(upper.covers.iter().map(|&(a, b)| (a + off, b + off)));
        // Maximal elements of the lower frame sit under the upper root; the
        // remaining cross pairs follow by transitivity.
        for w in 0..self.len() {
            if self.is_maximal(w) {
                covers.push((w, upper.root + off));
            }
        }
        Frame::from_covers(names, covers, self.root)
    }

    /// Canonical byte encoding of the frame up to isomorphism.
    pub fn canonical_form(&self) -> Vec<u8> {
        crate::morphisms::canonical_frame_form(self)
    }

    pub fn isomorphic(&self, other: &Frame) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    pub fn into_arc(self) -> Arc<Frame> {
        Arc::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g3() -> Frame {
        Frame::build(&["r", "a", "b", "t"], &[("r", "a"), ("r", "b"), ("b", "t")], "r").unwrap()
    }

    #[test]
    fn one_point_frame() {
        let none: &[(&str, &str)] = &[];
        let f = Frame::build(&["a"], none, "a").unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.depth(), 1);
    }

    #[test]
    fn build_g3_shape() {
        let f = g3();
        assert_eq!(f.depth(), 3);
        assert!(f.leq(0, 3));
        assert!(!f.leq(1, 3));
        assert_eq!(f.depth_at(f.node("b").unwrap()), 2);
    }

    #[test]
    fn cycle_is_rejected() {
        let err = Frame::build(&["a", "b"], &[("a", "b"), ("b", "a")], "a").unwrap_err();
        assert!(matches!(err, FrameError::Cycle(_)));
    }

    #[test]
    fn unrooted_is_rejected() {
        let none: &[(&str, &str)] = &[];
        let err = Frame::build(&["a", "b"], none, "a").unwrap_err();
        assert!(matches!(err, FrameError::NotRooted(_)));
    }

    #[test]
    fn unknown_cover_node() {
        let err = Frame::build(&["a"], &[("a", "z")], "a").unwrap_err();
        assert!(matches!(err, FrameError::UnknownNode(_)));
    }

    #[test]
    fn generated_subframe_of_root_is_whole() {
        let f = g3();
        let g = f.generated_subframe(f.root());
        assert!(f.isomorphic(&g));
    }

    #[test]
    fn generated_subframe_of_middle_is_chain() {
        let f = g3();
        let b = f.node("b").unwrap();
        let g = f.generated_subframe(b);
        assert_eq!(g.len(), 2);
        assert_eq!(g.depth(), 2);
    }

    #[test]
    fn generated_subframe_idempotent() {
        let f = g3();
        for w in 0..f.len() {
            let g = f.generated_subframe(w);
            let h = g.generated_subframe(g.root());
            assert!(g.isomorphic(&h));
        }
    }

    #[test]
    fn depth_strictly_antitone_with_realizing_successor() {
        let f = g3();
        for w in 0..f.len() {
            for u in 0..f.len() {
                if w != u && f.leq(w, u) {
                    assert!(f.depth_at(w) > f.depth_at(u));
                }
            }
            if !f.is_maximal(w) {
                let realized = (0..f.len())
                    .any(|u| u != w && f.leq(w, u) && f.depth_at(u) + 1 == f.depth_at(w));
                assert!(realized, "some successor realizes depth - 1");
            }
        }
        assert_eq!(
            f.depth(),
            (0..f.len()).map(|w| f.depth_at(w)).max().unwrap()
        );
    }

    #[test]
    fn join_of_points_is_chain() {
        let none: &[(&str, &str)] = &[];
        let p = Frame::build(&["a"], none, "a").unwrap();
        let j = p.join(&p).unwrap();
        assert_eq!(j.len(), 2);
        assert_eq!(j.depth(), 2);
        assert_eq!(j.root(), 0);
    }
}
