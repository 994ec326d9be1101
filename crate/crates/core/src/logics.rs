//! Logics as sm-closed finite frame families.
//!
//! `sm` closes a family under generated subframes and p-morphic images;
//! images are found by exhausting equivalence partitions and keeping those
//! whose canonical map satisfies the frame p-morphism conditions. A logic is
//! compared, extended and queried entirely through this closure.
//!
//! For each width n the logic carries its semantic class table: the finite
//! list of p-irreducible n-models over the closure up to isomorphism, the
//! generated-submodel structure between them, and the theory order. The
//! table is the substrate for theoremhood, characters and everything in the
//! unification module.

use crate::formulas::Formula;
use crate::frames::{Frame, FrameError};
use crate::models::{self, Model, ModelError};
use crate::morphisms;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, Clone)]
pub enum LogicError {
    #[error("sm-closure exceeded {0} frames")]
    SizeCapExceeded(usize),
    #[error("frame `{0}` has {1} nodes; image search caps at {2}")]
    FrameTooLarge(String, usize, usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error("character algebra exceeded {0} elements")]
    CharacterGuard(usize),
    #[error("extension lattice over {0} frames exceeds the {1}-frame guard")]
    LatticeGuard(usize, usize),
    #[error("models have widths {0} and {1}")]
    WidthMismatch(u32, u32),
    #[error("model frame is not in the closure")]
    OutsideClosure,
}

/// Tunable guard values.
#[derive(Debug, Clone)]
pub struct Limits {
    /// Maximum number of frames an sm-closure may reach.
    pub closure_cap: usize,
    /// Maximum node count for the partition search behind p-morphic images.
    pub image_node_cap: usize,
    /// Raw labeling estimate guard for model enumeration.
    pub enumeration_guard: u128,
    /// Element cap for the character algebra.
    pub character_cap: usize,
    /// Frame-count guard for extension lattices.
    pub lattice_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            closure_cap: 64,
            image_node_cap: 10,
            enumeration_guard: 1_000_000,
            character_cap: 100_000,
            lattice_cap: 16,
        }
    }
}

/// All proper p-morphic image frames of `f` (up to isomorphism), found by
/// checking every equivalence partition of the node set.
pub fn frame_quotients(f: &Frame, limits: &Limits) -> Result<Vec<Frame>, LogicError> {
    let n = f.len();
    if n > limits.image_node_cap {
        return Err(LogicError::FrameTooLarge(
            f.name_of(f.root()).to_string(),
            n,
            limits.image_node_cap,
        ));
    }
    let mut out: Vec<Frame> = Vec::new();
    let mut seen: BTreeMap<Vec<u8>, ()> = BTreeMap::new();
    // Restricted-growth strings enumerate set partitions.
    let mut rgs = vec![0usize; n];
    loop {
        let nb = rgs.iter().max().copied().unwrap_or(0) + 1;
        if nb < n {
            if let Some(q) = try_quotient_frame(f, &rgs, nb) {
                let canon = q.canonical_form();
                if seen.insert(canon, ()).is_none() {
                    out.push(q);
                }
            }
        }
        // Advance the RGS.
        let mut i = n;
        loop {
            if i == 1 {
                return Ok(out);
            }
            i -= 1;
            let maxp = rgs[..i].iter().max().copied().unwrap_or(0);
            if rgs[i] <= maxp {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
            rgs[i] = 0;
        }
    }
}

fn try_quotient_frame(f: &Frame, block_of: &[usize], nb: usize) -> Option<Frame> {
    let n = f.len();
    // Quotient order: [w] <= [v] iff some members are ordered.
    let mut leq = vec![vec![false; nb]; nb];
    for w in 0..n {
        for v in 0..n {
            if f.leq(w, v) {
                leq[block_of[w]][block_of[v]] = true;
            }
        }
    }
    // Transitive closure of the quotient relation.
    for m in 0..nb {
        for a in 0..nb {
            if leq[a][m] {
                for b in 0..nb {
                    if leq[m][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
    }
    // Antisymmetry.
    for a in 0..nb {
        for b in 0..nb {
            if a != b && leq[a][b] && leq[b][a] {
                return None;
            }
        }
    }
    // Back condition for the canonical map.
    for w in 0..n {
        for b in 0..nb {
            if leq[block_of[w]][b]
                && !(0..n).any(|v| f.leq(w, v) && block_of[v] == b)
            {
                return None;
            }
        }
    }
    let names: Vec<String> = (0..nb)
        .map(|b| {
            let rep = (0..n).find(|&w| block_of[w] == b).unwrap();
            f.name_of(rep).to_string()
        })
        .collect();
    let mut covers = Vec::new();
    for (a, row) in leq.iter().enumerate() {
        for (b, &is) in row.iter().enumerate() {
            if a != b && is {
                covers.push((a, b));
            }
        }
    }
    Frame::from_covers(names, covers, block_of[f.root()]).ok()
}

/// Least class containing the frames and closed under generated subframes
/// and p-morphic images; deduplicated by canonical form and sorted by
/// (size, canonical form) for determinism.
pub fn sm_closure(frames: &[Arc<Frame>], limits: &Limits) -> Result<Vec<Arc<Frame>>, LogicError> {
    let mut by_canon: BTreeMap<Vec<u8>, Arc<Frame>> = BTreeMap::new();
    let mut work: Vec<Arc<Frame>> = Vec::new();
    for f in frames {
        if by_canon.insert(f.canonical_form(), f.clone()).is_none() {
            work.push(f.clone());
        }
    }
    while let Some(f) = work.pop() {
        if by_canon.len() > limits.closure_cap {
            return Err(LogicError::SizeCapExceeded(limits.closure_cap));
        }
        let mut fresh: Vec<Frame> = Vec::new();
        for w in 0..f.len() {
            if w != f.root() {
                fresh.push(f.generated_subframe(w));
            }
        }
        fresh.extend(frame_quotients(&f, limits)?);
        for g in fresh {
            let canon = g.canonical_form();
            if !by_canon.contains_key(&canon) {
                let g = Arc::new(g);
                by_canon.insert(canon, g.clone());
                work.push(g);
            }
        }
    }
    let mut out: Vec<Arc<Frame>> = by_canon.into_values().collect();
    out.sort_by(|a, b| {
        (a.len(), std::cmp::Reverse(a.depth()), a.canonical_form())
            .cmp(&(b.len(), std::cmp::Reverse(b.depth()), b.canonical_form()))
    });
    Ok(out)
}

/// Dynamically sized bitset over class indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bits {
    words: Vec<u64>,
}

impl Bits {
    pub fn empty(n: usize) -> Bits {
        Bits {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Bits {
        let mut b = Bits::empty(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &Bits) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect(&self, other: &Bits) -> Bits {
        Bits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &Bits) -> Bits {
        Bits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn subset_of(&self, other: &Bits) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(wi, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b))
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// The finite class table of p-irreducible n-models over a closure.
pub struct SemanticClasses {
    pub nvars: u32,
    /// Canonical representatives, sorted by canonical encoding.
    pub models: Vec<Model>,
    canon_index: HashMap<Vec<u8>, usize>,
    /// `sub_class[c][w]` is the class of the submodel of `models[c]`
    /// generated by node `w`.
    pub sub_class: Vec<Vec<usize>>,
    /// `up[c]` contains d iff Th(c) is included in Th(d), i.e. d is the
    /// class of some generated submodel of c.
    pub up: Vec<Bits>,
    /// Valid assignment order for the search walks: every class appears
    /// after its proper subclasses, and deeper classes are scheduled as
    /// soon as their up-sets complete so their constraints fire early.
    pub search_order: Vec<usize>,
}

impl SemanticClasses {
    fn build(closure: &[Arc<Frame>], nvars: u32, limits: &Limits) -> Result<SemanticClasses, LogicError> {
        let mut models =
            models::enumerate_models(closure, nvars, true, limits.enumeration_guard)?;
        models.sort_by_key(morphisms::canonical_form);
        let canon_index: HashMap<Vec<u8>, usize> = models
            .iter()
            .enumerate()
            .map(|(i, m)| (morphisms::canonical_form(m), i))
            .collect();
        let n = models.len();
        let mut sub_class = Vec::with_capacity(n);
        let mut up = Vec::with_capacity(n);
        for m in &models {
            let mut per_node = Vec::with_capacity(m.len());
            let mut mask = Bits::empty(n);
            for w in 0..m.len() {
                let sub = m.generated_submodel(w);
                // Generated submodels of p-irreducible models are again
                // p-irreducible, so a plain canonical lookup suffices.
                let canon = morphisms::canonical_form(&sub);
                let class = *canon_index
                    .get(&canon)
                    .expect("generated submodel of an enumerated class is enumerated");
                per_node.push(class);
                mask.set(class);
            }
            sub_class.push(per_node);
            up.push(mask);
        }
        let search_order = interleaved_order(&models, &up);
        Ok(SemanticClasses {
            nvars,
            models,
            canon_index,
            sub_class,
            up,
            search_order,
        })
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    /// Class of an arbitrary model over the closure (reduces first).
    pub fn class_of(&self, m: &Model) -> Result<usize, LogicError> {
        let (red, _) = morphisms::reduce(m);
        self.canon_index
            .get(&morphisms::canonical_form(&red))
            .copied()
            .ok_or(LogicError::OutsideClosure)
    }

    /// Class of a model already known to be p-irreducible.
    pub fn class_of_irreducible(&self, m: &Model) -> Result<usize, LogicError> {
        self.canon_index
            .get(&morphisms::canonical_form(m))
            .copied()
            .ok_or(LogicError::OutsideClosure)
    }

    /// Theory order between classes: Th(c) included in Th(d).
    pub fn th_leq_class(&self, c: usize, d: usize) -> bool {
        self.up[c].get(d)
    }
}

/// Greedy schedule: a class becomes available once all its proper
/// subclasses are placed; among available classes the deepest goes first,
/// and fresh shallow classes are picked by how quickly they unlock a deep
/// one. This keeps constrained classes adjacent to their dependencies in
/// the search walks instead of letting unconstrained siblings multiply.
fn interleaved_order(models: &[Model], up: &[Bits]) -> Vec<usize> {
    let n = models.len();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let available: Vec<usize> = (0..n)
            .filter(|&c| !placed[c])
            .filter(|&c| up[c].iter_ones().all(|d| d == c || placed[d]))
            .collect();
        let deep = available
            .iter()
            .copied()
            .filter(|&c| models[c].frame().depth() > 1)
            .max_by_key(|&c| (models[c].frame().depth(), std::cmp::Reverse(c)));
        let pick = match deep {
            Some(c) => c,
            None => {
                // All available classes are shallow; take the one that
                // brings some blocked class closest to availability.
                let missing = |c: usize| -> usize {
                    (0..n)
                        .filter(|&d| !placed[d] && d != c && up[d].get(c))
                        .map(|d| {
                            up[d]
                                .iter_ones()
                                .filter(|&e| e != d && e != c && !placed[e])
                                .count()
                        })
                        .min()
                        .unwrap_or(usize::MAX)
                };
                available
                    .iter()
                    .copied()
                    .min_by_key(|&c| (missing(c), c))
                    .expect("some class is always available")
            }
        };
        placed[pick] = true;
        order.push(pick);
    }
    order
}

/// The character table: one formula per class, true in exactly the models
/// whose theories extend that class's theory.
pub struct CharacterTable {
    pub formulas: Vec<Arc<Formula>>,
}

impl CharacterTable {
    /// Builds characters by the two-formula recursion on the class order.
    ///
    /// The classes at a fixed width form a finite Kripke model themselves:
    /// points are classes, the order is theory inclusion, the valuation is
    /// the root valuation, and forcing at a class coincides with forcing at
    /// the root of its model. On that model a class is pinned down by its
    /// valuation together with its immediate successors, and the recursion
    ///
    ///   φ_C = (positives of C) ∧ ((missing vars ∨ ψ's of successors) →
    ///          ⋁ φ's of successors)
    ///   ψ_C = φ_C → ⋁ φ's of successors
    ///
    /// makes φ_C define the principal up-set of C. The construction is
    /// verified against the table after building; if that ever failed, the
    /// exhaustive subalgebra closure below is used instead.
    fn build(classes: &SemanticClasses, limits: &Limits) -> Result<CharacterTable, LogicError> {
        if let Some(table) = CharacterTable::build_recursive(classes) {
            return Ok(table);
        }
        CharacterTable::build_by_closure(classes, limits)
    }

    fn build_recursive(classes: &SemanticClasses) -> Option<CharacterTable> {
        let n = classes.len();
        let nvars = classes.nvars;
        // Immediate successors in the theory order.
        let imm: Vec<Vec<usize>> = (0..n)
            .map(|c| {
                let ups: Vec<usize> = classes.up[c].iter_ones().filter(|&d| d != c).collect();
                ups.iter()
                    .copied()
                    .filter(|&d| {
                        !ups.iter()
                            .any(|&e| e != d && classes.up[e].get(d) && !classes.up[d].get(e))
                    })
                    .collect()
            })
            .collect();
        // Process from the top of the order down.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&c| classes.up[c].count());
        let mut phi: Vec<Option<Arc<Formula>>> = vec![None; n];
        let mut psi: Vec<Option<Arc<Formula>>> = vec![None; n];
        for &c in &order {
            let v = classes.models[c].val(classes.models[c].root());
            let positives = Formula::big_and(
                (1..=nvars)
                    .filter(|i| v >> (i - 1) & 1 == 1)
                    .map(Formula::var)
                    .collect(),
            );
            if imm[c].is_empty() {
                let negatives = Formula::big_and(
                    (1..=nvars)
                        .filter(|i| v >> (i - 1) & 1 == 0)
                        .map(|i| Formula::neg(Formula::var(i)))
                        .collect(),
                );
                let f = Formula::and(positives, negatives);
                psi[c] = Some(Formula::neg(f.clone()));
                phi[c] = Some(f);
            } else {
                let succ_phi =
                    Formula::big_or(imm[c].iter().map(|&e| phi[e].clone().unwrap()).collect());
                let succ_psi =
                    Formula::big_or(imm[c].iter().map(|&e| psi[e].clone().unwrap()).collect());
                let missing = Formula::big_or(
                    (1..=nvars)
                        .filter(|i| v >> (i - 1) & 1 == 0)
                        .map(Formula::var)
                        .collect(),
                );
                let f = Formula::and(
                    positives,
                    Formula::imp(Formula::or(missing, succ_psi), succ_phi.clone()),
                );
                psi[c] = Some(Formula::imp(f.clone(), succ_phi));
                phi[c] = Some(f);
            }
        }
        let formulas: Vec<Arc<Formula>> = phi.into_iter().map(|f| f.unwrap()).collect();
        // Verify the defining property classwise before accepting.
        for c in 0..n {
            for (d, model) in classes.models.iter().enumerate() {
                let forced = model.forces(&formulas[c]).ok()?;
                if forced != classes.up[c].get(d) {
                    return None;
                }
            }
        }
        Some(CharacterTable { formulas })
    }

    /// Exhaustive fallback: close the definable up-sets under the Heyting
    /// operations, witnessing each by a formula, until every principal
    /// up-set is reached.
    fn build_by_closure(
        classes: &SemanticClasses,
        limits: &Limits,
    ) -> Result<CharacterTable, LogicError> {
        let n = classes.len();
        let mut elems: Vec<(Bits, Arc<Formula>)> = Vec::new();
        let mut index: HashMap<Bits, usize> = HashMap::new();
        let principals: Vec<Bits> = (0..n).map(|c| classes.up[c].clone()).collect();
        let mut missing: usize = {
            let distinct: std::collections::BTreeSet<&Bits> = principals.iter().collect();
            distinct.len()
        };
        let push = |set: Bits,
                        f: Arc<Formula>,
                        elems: &mut Vec<(Bits, Arc<Formula>)>,
                        index: &mut HashMap<Bits, usize>,
                        missing: &mut usize| {
            if index.contains_key(&set) {
                return;
            }
            if principals.contains(&set) {
                *missing -= 1;
            }
            index.insert(set.clone(), elems.len());
            elems.push((set, f));
        };
        push(
            Bits::empty(n),
            Formula::bot(),
            &mut elems,
            &mut index,
            &mut missing,
        );
        push(
            Bits::full(n),
            Formula::top(),
            &mut elems,
            &mut index,
            &mut missing,
        );
        for i in 1..=classes.nvars {
            let mut set = Bits::empty(n);
            for (c, m) in classes.models.iter().enumerate() {
                if m.holds_var(m.root(), i) {
                    set.set(c);
                }
            }
            push(set, Formula::var(i), &mut elems, &mut index, &mut missing);
        }
        let imp = |u: &Bits, v: &Bits| {
            let mut out = Bits::empty(n);
            for c in 0..n {
                if classes.up[c].intersect(u).subset_of(v) {
                    out.set(c);
                }
            }
            out
        };
        // Pairwise closure: each element meets everything before it.
        let mut i = 0;
        'outer: while i < elems.len() && missing > 0 {
            if elems.len() > limits.character_cap {
                return Err(LogicError::CharacterGuard(limits.character_cap));
            }
            for j in 0..=i {
                let (si, fi) = elems[i].clone();
                let (sj, fj) = elems[j].clone();
                push(
                    si.intersect(&sj),
                    Formula::and(fi.clone(), fj.clone()),
                    &mut elems,
                    &mut index,
                    &mut missing,
                );
                push(
                    si.union(&sj),
                    Formula::or(fi.clone(), fj.clone()),
                    &mut elems,
                    &mut index,
                    &mut missing,
                );
                push(
                    imp(&si, &sj),
                    Formula::imp(fi.clone(), fj.clone()),
                    &mut elems,
                    &mut index,
                    &mut missing,
                );
                push(
                    imp(&sj, &si),
                    Formula::imp(fj, fi),
                    &mut elems,
                    &mut index,
                    &mut missing,
                );
                if missing == 0 {
                    break 'outer;
                }
            }
            i += 1;
        }
        if missing > 0 {
            return Err(LogicError::CharacterGuard(limits.character_cap));
        }
        let mut formulas = Vec::with_capacity(n);
        for principal in &principals {
            let f = elems[index[principal]].1.clone();
            formulas.push(f);
        }
        Ok(CharacterTable { formulas })
    }
}

/// A logic given by a finite frame family, carried as its sm-closure.
pub struct LogicSpec {
    generators: Vec<Arc<Frame>>,
    closure: Vec<Arc<Frame>>,
    closure_canon: Vec<Vec<u8>>,
    limits: Limits,
    classes: Mutex<BTreeMap<u32, Arc<SemanticClasses>>>,
    characters: Mutex<BTreeMap<u32, Arc<CharacterTable>>>,
}

impl LogicSpec {
    pub fn new(generators: Vec<Arc<Frame>>) -> Result<LogicSpec, LogicError> {
        LogicSpec::with_limits(generators, Limits::default())
    }

    pub fn with_limits(generators: Vec<Arc<Frame>>, limits: Limits) -> Result<LogicSpec, LogicError> {
        let closure = sm_closure(&generators, &limits)?;
        let closure_canon = closure.iter().map(|f| f.canonical_form()).collect();
        Ok(LogicSpec {
            generators,
            closure,
            closure_canon,
            limits,
            classes: Mutex::new(BTreeMap::new()),
            characters: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn generators(&self) -> &[Arc<Frame>] {
        &self.generators
    }

    pub fn closure(&self) -> &[Arc<Frame>] {
        &self.closure
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    /// The class table at width `n`, computed once per logic.
    pub fn classes(&self, n: u32) -> Result<Arc<SemanticClasses>, LogicError> {
        if let Some(hit) = self.classes.lock().unwrap().get(&n) {
            return Ok(hit.clone());
        }
        let built = Arc::new(SemanticClasses::build(&self.closure, n, &self.limits)?);
        self.classes.lock().unwrap().insert(n, built.clone());
        Ok(built)
    }

    /// The character table at width `n`.
    pub fn characters(&self, n: u32) -> Result<Arc<CharacterTable>, LogicError> {
        if let Some(hit) = self.characters.lock().unwrap().get(&n) {
            return Ok(hit.clone());
        }
        let classes = self.classes(n)?;
        let built = Arc::new(CharacterTable::build(&classes, &self.limits)?);
        self.characters.lock().unwrap().insert(n, built.clone());
        Ok(built)
    }

    /// Character of a model over the closure.
    pub fn character(&self, m: &Model) -> Result<Arc<Formula>, LogicError> {
        let classes = self.classes(m.nvars())?;
        let c = classes.class_of(m)?;
        Ok(self.characters(m.nvars())?.formulas[c].clone())
    }

    /// Theoremhood: forced at the root of every p-irreducible model over
    /// the closure at the formula's width.
    pub fn is_theorem(&self, f: &Arc<Formula>) -> Result<bool, LogicError> {
        let n = f.max_var();
        let classes = self.classes(n)?;
        for m in &classes.models {
            if !m.forces(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Theory order between two models over the closure: Th(m) ⊆ Th(n),
    /// equivalently n is equivalent to some generated submodel of m.
    pub fn th_leq(&self, m: &Model, n: &Model) -> Result<bool, LogicError> {
        if m.nvars() != n.nvars() {
            return Err(LogicError::WidthMismatch(m.nvars(), n.nvars()));
        }
        let classes = self.classes(m.nvars())?;
        Ok(classes.th_leq_class(classes.class_of(m)?, classes.class_of(n)?))
    }

    /// Frame omission: `g` is a frame of this logic iff it sits in the
    /// closure up to isomorphism.
    pub fn omits(&self, g: &Frame) -> bool {
        let canon = g.canonical_form();
        !self.closure_canon.contains(&canon)
    }

    /// `self` is included in `other` iff `other`'s closure is contained in
    /// `self`'s.
    pub fn leq(&self, other: &LogicSpec) -> bool {
        other
            .closure_canon
            .iter()
            .all(|c| self.closure_canon.contains(c))
    }

    pub fn logic_eq(&self, other: &LogicSpec) -> bool {
        self.leq(other) && other.leq(self)
    }

    /// The single-frame logics of closure members, each paired with its
    /// frame; pairwise distinct because closure members are non-isomorphic.
    pub fn h_complete_extensions(&self) -> Result<Vec<(Arc<Frame>, LogicSpec)>, LogicError> {
        let mut out = Vec::new();
        for f in &self.closure {
            out.push((
                f.clone(),
                LogicSpec::with_limits(vec![f.clone()], self.limits.clone())?,
            ));
        }
        Ok(out)
    }

    /// All consistent extensions as closure subsets, deduplicated by the
    /// logic they determine. Node i of the result indexes `self.closure()`.
    pub fn extension_lattice(&self) -> Result<ExtensionLattice, LogicError> {
        let k = self.closure.len();
        if k > self.limits.lattice_cap {
            return Err(LogicError::LatticeGuard(k, self.limits.lattice_cap));
        }
        // sm mask per closure frame.
        let mut sm_of: Vec<u64> = Vec::with_capacity(k);
        for f in &self.closure {
            let sub = sm_closure(std::slice::from_ref(f), &self.limits)?;
            let mut mask = 0u64;
            for g in sub {
                let canon = g.canonical_form();
                let idx = self
                    .closure_canon
                    .iter()
                    .position(|c| *c == canon)
                    .expect("closure is sm-closed");
                mask |= 1 << idx;
            }
            sm_of.push(mask);
        }
        let mut seen: BTreeMap<u64, ()> = BTreeMap::new();
        for subset in 1u64..(1 << k) {
            let mut mask = 0u64;
            for i in 0..k {
                if subset >> i & 1 == 1 {
                    mask |= sm_of[i];
                }
            }
            seen.entry(mask).or_insert(());
        }
        let nodes: Vec<u64> = seen.into_keys().collect();
        Ok(ExtensionLattice {
            base: self.closure.clone(),
            sm_of,
            nodes,
        })
    }
}

/// The lattice of consistent extensions of a logic, as closure masks.
pub struct ExtensionLattice {
    /// The base logic's closure frames; bit i of a mask refers to `base[i]`.
    pub base: Vec<Arc<Frame>>,
    /// Per base frame, the mask of its own sm-closure.
    pub sm_of: Vec<u64>,
    /// Distinct logics, one mask each, ascending.
    pub nodes: Vec<u64>,
}

impl ExtensionLattice {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Logic inclusion: node `a` included in node `b` iff mask(b) ⊆ mask(a).
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.nodes[b] & !self.nodes[a] == 0
    }

    /// Indices of the generator frames of a node: the mask's maximal frames
    /// under the relation "g lies in sm(h)".
    pub fn generators(&self, node: usize) -> Vec<usize> {
        let mask = self.nodes[node];
        (0..self.base.len())
            .filter(|&i| mask >> i & 1 == 1)
            .filter(|&i| {
                !(0..self.base.len()).any(|j| {
                    j != i && mask >> j & 1 == 1 && self.sm_of[j] >> i & 1 == 1
                })
            })
            .collect()
    }

    /// Hasse cover pairs (a, b): a strictly included in b with nothing
    /// strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let lt = |a: usize, b: usize| a != b && self.leq(a, b);
        let mut out = Vec::new();
        for a in 0..self.len() {
            for b in 0..self.len() {
                if lt(a, b) && !(0..self.len()).any(|m| lt(a, m) && lt(m, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// True when the node's closure mask contains the given base frame.
    pub fn node_contains(&self, node: usize, base_index: usize) -> bool {
        self.nodes[node] >> base_index & 1 == 1
    }
}
