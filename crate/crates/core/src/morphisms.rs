//! p-morphisms, bisimulations, quotients and canonical forms.
//!
//! Reduction works by partition refinement: start from blocks of equal
//! valuation and split until every block has a uniform view of the blocks
//! above it. The coarsest stable partition is the greatest bisimulation
//! (checked against the generated-submodel characterization in tests), and
//! its quotient is the p-irreducible reduct.

use crate::frames::{Frame, FrameError};
use crate::models::{Model, ModelError};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphError {
    #[error("models have widths {0} and {1}")]
    WidthMismatch(u32, u32),
    #[error("partition is not a bisimulation: nodes `{0}` and `{1}` disagree")]
    NotABisimulation(String, String),
    #[error("map is not total: node `{0}` unassigned")]
    PartialMap(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Total node mapping between two frames, stored by node index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeMap {
    map: Vec<usize>,
}

impl NodeMap {
    pub fn new(map: Vec<usize>) -> NodeMap {
        NodeMap { map }
    }

    pub fn apply(&self, w: usize) -> usize {
        self.map[w]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_onto(&self, target_len: usize) -> bool {
        let mut hit = vec![false; target_len];
        for &t in &self.map {
            hit[t] = true;
        }
        hit.into_iter().all(|b| b)
    }

    /// `self` after `first`: applies `first`, then `self`.
    pub fn compose_after(&self, first: &NodeMap) -> NodeMap {
        NodeMap {
            map: first.map.iter().map(|&w| self.map[w]).collect(),
        }
    }
}

/// Disjoint blocks covering a node set; block ids are dense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_block_of(block_of: Vec<usize>) -> Partition {
        let nblocks = block_of.iter().max().map_or(0, |&b| b + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (w, &b) in block_of.iter().enumerate() {
            blocks[b].push(w);
        }
        assert!(blocks.iter().all(|b| !b.is_empty()), "block ids must be dense");
        Partition { block_of, blocks }
    }

    /// Builds from explicit blocks over `n` nodes; must be a partition.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Option<Partition> {
        let mut block_of = vec![usize::MAX; n];
        for (b, members) in blocks.iter().enumerate() {
            if members.is_empty() {
                return None;
            }
            for &w in members {
                if w >= n || block_of[w] != usize::MAX {
                    return None;
                }
                block_of[w] = b;
            }
        }
        if block_of.iter().any(|&b| b == usize::MAX) {
            return None;
        }
        Some(Partition::from_block_of(block_of))
    }

    pub fn block_of(&self, w: usize) -> usize {
        self.block_of[w]
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.block_of.len()
    }
}

/// Frame- or model-level check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Frame,
    Model,
}

/// Checks the p-morphism conditions for `map`: order preservation, the
/// back condition, root preservation and surjectivity; at model level also
/// valuation preservation.
pub fn check_p_morphism(
    src: &Model,
    dst: &Model,
    map: &NodeMap,
    level: Level,
) -> Result<bool, MorphError> {
    if level == Level::Model && src.nvars() != dst.nvars() {
        return Err(MorphError::WidthMismatch(src.nvars(), dst.nvars()));
    }
    Ok(check_frame_p_morphism(src.frame(), dst.frame(), map)
        && (level == Level::Frame
            || (0..src.len()).all(|w| src.val(w) == dst.val(map.apply(w)))))
}

pub fn check_frame_p_morphism(src: &Frame, dst: &Frame, map: &NodeMap) -> bool {
    if map.as_slice().len() != src.len() || !map.is_onto(dst.len()) {
        return false;
    }
    if map.apply(src.root()) != dst.root() {
        return false;
    }
    for w in 0..src.len() {
        for v in 0..src.len() {
            if src.leq(w, v) && !dst.leq(map.apply(w), map.apply(v)) {
                return false;
            }
        }
        // Back condition: everything above the image is hit from above w.
        for a in 0..dst.len() {
            if dst.leq(map.apply(w), a)
                && !(0..src.len()).any(|v| src.leq(w, v) && map.apply(v) == a)
            {
                return false;
            }
        }
    }
    true
}

/// Greatest bisimulation of a model, as the coarsest partition that starts
/// from valuation classes and is stable under the block-successor view.
pub fn greatest_bisimulation(model: &Model) -> Partition {
    let n = model.len();
    let mut block_of: Vec<usize> = {
        let mut keys: Vec<u32> = model.vals().to_vec();
        keys.sort_unstable();
        keys.dedup();
        (0..n)
            .map(|w| keys.binary_search(&model.val(w)).unwrap())
            .collect()
    };
    loop {
        let mut sig: Vec<(usize, Vec<usize>)> = Vec::with_capacity(n);
        for w in 0..n {
            let mut succ: BTreeSet<usize> = BTreeSet::new();
            for u in 0..n {
                if model.frame().leq(w, u) {
                    succ.insert(block_of[u]);
                }
            }
            sig.push((block_of[w], succ.into_iter().collect()));
        }
        let mut ids: BTreeMap<&(usize, Vec<usize>), usize> = BTreeMap::new();
        for s in &sig {
            let next = ids.len();
            ids.entry(s).or_insert(next);
        }
        let new_block_of: Vec<usize> = (0..n).map(|w| ids[&sig[w]]).collect();
        let stable = {
            // Same partition iff the refinement did not split anything.
            let old = Partition::from_block_of(block_of.clone());
            let new = Partition::from_block_of(new_block_of.clone());
            old.len() == new.len()
        };
        block_of = new_block_of;
        if stable {
            break;
        }
    }
    Partition::from_block_of(block_of)
}

/// Validates that `p` is an equivalence bisimulation of `model`: blocks have
/// uniform valuations and satisfy the back-and-forth condition.
pub fn validate_bisimulation(model: &Model, p: &Partition) -> Result<(), MorphError> {
    let witness = |w: usize, v: usize| {
        MorphError::NotABisimulation(
            model.frame().name_of(w).to_string(),
            model.frame().name_of(v).to_string(),
        )
    };
    for block in p.blocks() {
        for &w in block {
            for &v in block {
                if model.val(w) != model.val(v) {
                    return Err(witness(w, v));
                }
                // Forth: every successor block of w is reachable from v.
                for wp in 0..model.len() {
                    if !model.frame().leq(w, wp) {
                        continue;
                    }
                    let ok = (0..model.len())
                        .any(|vp| model.frame().leq(v, vp) && p.block_of(vp) == p.block_of(wp));
                    if !ok {
                        return Err(witness(w, v));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Quotient by an equivalence bisimulation; returns the quotient model and
/// the canonical map, which is a model p-morphism.
pub fn quotient(model: &Model, p: &Partition) -> Result<(Model, NodeMap), MorphError> {
    validate_bisimulation(model, p)?;
    let nb = p.len();
    // Quotient order: [w] <= [v] iff some members are ordered.
    let mut leq = vec![vec![false; nb]; nb];
    for w in 0..model.len() {
        for v in 0..model.len() {
            if model.frame().leq(w, v) {
                leq[p.block_of(w)][p.block_of(v)] = true;
            }
        }
    }
    let names: Vec<String> = p
        .blocks()
        .iter()
        .map(|b| model.frame().name_of(b[0]).to_string())
        .collect();
    let mut covers = Vec::new();
    for (a, row) in leq.iter().enumerate() {
        for (b, &is_leq) in row.iter().enumerate() {
            if a != b && is_leq {
                covers.push((a, b));
            }
        }
    }
    let frame = Frame::from_covers(names, covers, p.block_of(model.frame().root()))?;
    let vals = p.blocks().iter().map(|b| model.val(b[0])).collect();
    let q = Model::build(Arc::new(frame), model.nvars(), vals)?;
    let map = NodeMap::new(model.frame().names().iter().enumerate().map(|(w, _)| p.block_of(w)).collect());
    debug_assert!(check_p_morphism(model, &q, &map, Level::Model).unwrap());
    Ok((q, map))
}

/// Reduces a model to its p-irreducible reduct (unique up to isomorphism).
pub fn reduce(model: &Model) -> (Model, NodeMap) {
    let p = greatest_bisimulation(model);
    quotient(model, &p).expect("greatest bisimulation quotient always exists")
}

/// Canonical byte encoding: equal iff the models are isomorphic.
pub fn canonical_form(model: &Model) -> Vec<u8> {
    canonical_encoding(model.frame(), Some(model.vals()), model.nvars())
}

pub fn canonical_frame_form(frame: &Frame) -> Vec<u8> {
    canonical_encoding(frame, None, 0)
}

/// Theory equivalence: identical canonical reducts.
pub fn equivalent(a: &Model, b: &Model) -> Result<bool, MorphError> {
    if a.nvars() != b.nvars() {
        return Err(MorphError::WidthMismatch(a.nvars(), b.nvars()));
    }
    Ok(canonical_form(&reduce(a).0) == canonical_form(&reduce(b).0))
}

/// Searches for a model p-morphism from `src` onto `dst`, root to root.
/// When `dst` is p-irreducible the result is the unique one.
pub fn find_p_morphism(src: &Model, dst: &Model) -> Result<Option<NodeMap>, MorphError> {
    if src.nvars() != dst.nvars() {
        return Err(MorphError::WidthMismatch(src.nvars(), dst.nvars()));
    }
    let n = src.len();
    let mut assign = vec![usize::MAX; n];
    assign[src.root()] = dst.root();
    if src.val(src.root()) != dst.val(dst.root()) {
        return Ok(None);
    }
    // Assign nodes in order of shrinking up-sets so predecessors come first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&w| std::cmp::Reverse(src.frame().up_mask(w).count_ones()));
    debug_assert_eq!(order[0], {
        let mut o = order.clone();
        o.sort_by_key(|&w| std::cmp::Reverse(src.frame().up_mask(w).count_ones()));
        o[0]
    });
    fn rec(src: &Model, dst: &Model, order: &[usize], at: usize, assign: &mut Vec<usize>) -> bool {
        if at == order.len() {
            let map = NodeMap::new(assign.clone());
            return check_p_morphism(src, dst, &map, Level::Model).unwrap_or(false);
        }
        let w = order[at];
        if assign[w] != usize::MAX {
            return rec(src, dst, order, at + 1, assign);
        }
        for t in 0..dst.len() {
            if src.val(w) != dst.val(t) {
                continue;
            }
            // Order preservation against already-assigned nodes, both ways.
            let ok = (0..src.len()).all(|v| {
                assign[v] == usize::MAX
                    || ((!src.frame().leq(v, w) || dst.frame().leq(assign[v], t))
                        && (!src.frame().leq(w, v) || dst.frame().leq(t, assign[v])))
            });
            if !ok {
                continue;
            }
            assign[w] = t;
            if rec(src, dst, order, at + 1, assign) {
                return true;
            }
            assign[w] = usize::MAX;
        }
        false
    }
    if rec(src, dst, &order, 0, &mut assign) {
        Ok(Some(NodeMap::new(assign)))
    } else {
        Ok(None)
    }
}

/// Collapses the clusters of a finite pre-order into a poset frame; the
/// canonical map onto the quotient is returned alongside.
pub fn collapse_preorder(
    names: &[String],
    edges: &[(usize, usize)],
    root: usize,
) -> Result<(Frame, NodeMap), FrameError> {
    let n = names.len();
    let mut reach = vec![0u64; n];
    for (w, r) in reach.iter_mut().enumerate() {
        *r = 1 << w;
    }
    for &(a, b) in edges {
        if a >= n {
            return Err(FrameError::UnknownNode(format!("#{a}")));
        }
        if b >= n {
            return Err(FrameError::UnknownNode(format!("#{b}")));
        }
        reach[a] |= 1 << b;
    }
    for mid in 0..n {
        for w in 0..n {
            if reach[w] >> mid & 1 == 1 {
                reach[w] |= reach[mid];
            }
        }
    }
    // Clusters: mutual reachability.
    let mut cluster_of = vec![usize::MAX; n];
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for w in 0..n {
        if cluster_of[w] != usize::MAX {
            continue;
        }
        let id = clusters.len();
        let members: Vec<usize> = (0..n)
            .filter(|&v| reach[w] >> v & 1 == 1 && reach[v] >> w & 1 == 1)
            .collect();
        for &v in &members {
            cluster_of[v] = id;
        }
        clusters.push(members);
    }
    let cluster_names: Vec<String> = clusters.iter().map(|c| names[c[0]].clone()).collect();
    let mut covers = Vec::new();
    for w in 0..n {
        for v in 0..n {
            if reach[w] >> v & 1 == 1 && cluster_of[w] != cluster_of[v] {
                covers.push((cluster_of[w], cluster_of[v]));
            }
        }
    }
    let frame = Frame::from_covers(cluster_names, covers, cluster_of[root])?;
    Ok((frame, NodeMap::new(cluster_of)))
}

/// Canonical encoding over (frame, optional valuation). Nodes are first
/// refined by iso-invariant colors, then all color-respecting orderings are
/// tried and the lexicographically least encoding wins.
fn canonical_encoding(frame: &Frame, vals: Option<&[u32]>, nvars: u32) -> Vec<u8> {
    let n = frame.len();
    let val = |w: usize| vals.map_or(0, |v| v[w]);
    // Initial color: (depth, valuation); refine by cover-successor colors.
    let mut color: Vec<u64> = (0..n)
        .map(|w| ((frame.depth_at(w) as u64) << 32) | val(w) as u64)
        .collect();
    loop {
        let mut sig: Vec<(u64, Vec<u64>)> = Vec::with_capacity(n);
        for w in 0..n {
            let mut succ: Vec<u64> = (0..n)
                .filter(|&u| u != w && frame.leq(w, u))
                .map(|u| color[u])
                .collect();
            succ.sort_unstable();
            sig.push((color[w], succ));
        }
        // Number the distinct signatures in sorted order so the ids are
        // isomorphism-invariant.
        let distinct: BTreeSet<&(u64, Vec<u64>)> = sig.iter().collect();
        let ids: BTreeMap<&(u64, Vec<u64>), u64> = distinct
            .into_iter()
            .enumerate()
            .map(|(i, s)| (s, i as u64))
            .collect();
        let new: Vec<u64> = (0..n).map(|w| ids[&sig[w]]).collect();
        let classes_before = {
            let mut c = color.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        let classes_after = {
            let mut c = new.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        color = new;
        if classes_after == classes_before {
            break;
        }
    }
    // Group nodes by color; classes ordered by color id.
    let mut by_class: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for w in 0..n {
        by_class.entry(color[w]).or_default().push(w);
    }
    let class_list: Vec<Vec<usize>> = by_class.into_values().collect();
    // Class payloads that any ordering must reproduce identically.
    let mut best: Option<Vec<u8>> = None;
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    fn emit(frame: &Frame, vals: Option<&[u32]>, nvars: u32, perm: &[usize]) -> Vec<u8> {
        let n = perm.len();
        let mut out = Vec::with_capacity(2 + n * 6);
        out.push(n as u8);
        out.push(nvars as u8);
        let pos_of = {
            let mut p = vec![0usize; n];
            for (pos, &w) in perm.iter().enumerate() {
                p[w] = pos;
            }
            p
        };
        out.push(pos_of[frame.root()] as u8);
        for &w in perm {
            let v = vals.map_or(0, |vv| vv[w]);
            out.extend_from_slice(&v.to_le_bytes());
            let mut row = 0u64;
            for (pos, &u) in perm.iter().enumerate() {
                if frame.leq(w, u) {
                    row |= 1 << pos;
                }
            }
            out.extend_from_slice(&row.to_le_bytes());
        }
        out
    }
    fn rec(
        frame: &Frame,
        vals: Option<&[u32]>,
        nvars: u32,
        classes: &[Vec<usize>],
        at: usize,
        used: &mut Vec<bool>,
        perm: &mut Vec<usize>,
        best: &mut Option<Vec<u8>>,
    ) {
        if at == classes.len() {
            let enc = emit(frame, vals, nvars, perm);
            if best.as_ref().is_none_or(|b| enc < *b) {
                *best = Some(enc);
            }
            return;
        }
        let class = &classes[at];
        // All orderings within the class.
        fn perms(
            frame: &Frame,
            vals: Option<&[u32]>,
            nvars: u32,
            classes: &[Vec<usize>],
            at: usize,
            class: &[usize],
            used: &mut Vec<bool>,
            perm: &mut Vec<usize>,
            best: &mut Option<Vec<u8>>,
        ) {
            if perm.len() == classes[..=at].iter().map(|c| c.len()).sum::<usize>() {
                rec(frame, vals, nvars, classes, at + 1, used, perm, best);
                return;
            }
            for &w in class {
                if used[w] {
                    continue;
                }
                used[w] = true;
                perm.push(w);
                perms(frame, vals, nvars, classes, at, class, used, perm, best);
                perm.pop();
                used[w] = false;
            }
        }
        perms(frame, vals, nvars, classes, at, class, used, perm, best);
    }
    let mut used = vec![false; n];
    rec(frame, vals, nvars, &class_list, 0, &mut used, &mut perm, &mut best);
    best.unwrap()
}

/// Short hex digest of a canonical form, for certificate files and CLI
/// output.
pub fn digest(encoding: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(encoding);
    let out = hasher.finalize();
    out[..8].iter().map(|b| format!("{b:02x}")).collect()
}
