//! Hereditary unification-type classification by frame omission, plus the
//! database of known results and lattice censuses.
//!
//! The classifier is purely omission-based and decidable: which of a fixed
//! list of frames sit in the sm-closure determines the hereditary class.
//! The bounded searches in the unification module are evidence generators,
//! not classifier inputs. Known concrete unification types are looked up in
//! a result table keyed by logic equality; lattice nodes outside the table
//! can be labeled from the reference lattice census, and such labels are
//! flagged as figure-sourced rather than proved.

use crate::catalog::{Catalog, Namer};
use crate::frames::Frame;
use crate::logics::{LogicError, LogicSpec};
use serde::Serialize;
use std::collections::BTreeSet;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnifType {
    Nullary,
    Finitary,
    Unitary,
    Projective,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HereditaryClass {
    Projective,
    HereditaryUnitary,
    HereditaryProjectiveApproximation,
    HasNullaryExtension,
}

impl HereditaryClass {
    pub fn is_hereditary(self) -> bool {
        !matches!(self, HereditaryClass::HasNullaryExtension)
    }
}

/// Classification report; serialized as JSON with these exact field names.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub logic: String,
    pub contains_kc: bool,
    pub contains_lc: bool,
    pub filtering: bool,
    pub hereditary_class: HereditaryClass,
    pub db_result: UnifType,
    pub db_citation: Option<String>,
    pub structural: String,
    pub notes: Vec<String>,
}

/// One known result: a frame family, the unification type of its logic and
/// a short provenance key.
struct DbEntry {
    closure_canon: BTreeSet<Vec<u8>>,
    typ: UnifType,
    citation: &'static str,
}

/// The table of known unification types, keyed by logic equality.
pub struct KnownResultDb {
    entries: Vec<DbEntry>,
    frames: ReferenceFrames,
}

/// The omission test frames the classifier needs.
struct ReferenceFrames {
    f2: Arc<Frame>,
    r2: Arc<Frame>,
    g3: Arc<Frame>,
    g3plus: Arc<Frame>,
    r2plus: Arc<Frame>,
    citkin: Vec<Arc<Frame>>,
    chains: Vec<Arc<Frame>>,
}

impl KnownResultDb {
    pub fn standard() -> KnownResultDb {
        let cat = Catalog::standard();
        let get = |n: &str| cat.lookup(n).unwrap();
        let frames = ReferenceFrames {
            f2: get("F2"),
            r2: get("R2"),
            g3: get("G3"),
            g3plus: get("G3plus"),
            r2plus: get("R2plus"),
            citkin: ["C1", "C2", "C3", "C4", "C5"]
                .iter()
                .map(|n| get(n))
                .collect(),
            chains: (1..=8).map(|d| cat.parametric('L', d).unwrap()).collect(),
        };
        let mut entries = Vec::new();
        let mut add = |gens: Vec<Arc<Frame>>, typ: UnifType, citation: &'static str| {
            let logic = LogicSpec::new(gens).expect("db entry closes");
            let closure_canon = logic
                .closure()
                .iter()
                .map(|f| f.canonical_form())
                .collect();
            entries.push(DbEntry {
                closure_canon,
                typ,
                citation,
            });
        };
        // Nullary logics.
        add(vec![get("G3")], UnifType::Nullary, "nullary:G3");
        add(vec![get("G3plus")], UnifType::Nullary, "nullary:G3-top");
        add(
            vec![get("R2"), get("F2")],
            UnifType::Nullary,
            "nullary:rhombus-meet-fork",
        );
        add(vec![get("R2plus")], UnifType::Nullary, "nullary:R2-top");
        for s in 2..=4u32 {
            // Fork with a smaller fork stacked on top; s = 1 is R2plus.
            let join = get("F2").join(&cat.parametric('F', s).unwrap()).unwrap();
            add(
                vec![Arc::new(join)],
                UnifType::Nullary,
                "nullary:fork-on-fork",
            );
        }
        add(vec![get("Y2")], UnifType::Nullary, "nullary:Y2");
        add(vec![get("Y2plus")], UnifType::Nullary, "nullary:Y2-top");
        add(vec![get("Y3")], UnifType::Nullary, "nullary:Y3");
        add(vec![get("Y3plus")], UnifType::Nullary, "nullary:Y3-top");
        add(
            vec![get("G2"), get("F3")],
            UnifType::Nullary,
            "nullary:G2-meet-F3",
        );
        // G3 with a maximal point replaced by a chain or a fork.
        add(vec![get("G3L2")], UnifType::Nullary, "nullary:G3-family");
        add(vec![get("G3F2")], UnifType::Nullary, "nullary:G3-family");
        // Finitary logics.
        add(vec![get("G2")], UnifType::Finitary, "finitary:G2");
        add(vec![get("C5")], UnifType::Finitary, "finitary:C5");
        add(vec![get("G1")], UnifType::Finitary, "finitary:G1");
        add(
            vec![get("G2"), get("C5")],
            UnifType::Finitary,
            "finitary:G2-meet-C5",
        );
        for m in 2..=4u32 {
            add(
                vec![cat.parametric('F', m).unwrap()],
                UnifType::Finitary,
                "finitary:forks",
            );
        }
        // Forks on chains (hereditary projective approximation family).
        for d in 1..=3u32 {
            for m in 2..=4u32 {
                let join = cat
                    .parametric('L', d)
                    .unwrap()
                    .join(&cat.parametric('F', m).unwrap())
                    .unwrap();
                add(
                    vec![Arc::new(join)],
                    UnifType::Finitary,
                    "finitary:forks-on-chains",
                );
            }
        }
        // Unitary logics: rhombuses and rhombuses on chains.
        for m in 2..=4u32 {
            add(
                vec![cat.parametric('R', m).unwrap()],
                UnifType::Unitary,
                "unitary:rhombuses",
            );
        }
        for d in 1..=3u32 {
            for m in 2..=4u32 {
                let join = cat
                    .parametric('L', d)
                    .unwrap()
                    .join(&cat.parametric('R', m).unwrap())
                    .unwrap();
                add(
                    vec![Arc::new(join)],
                    UnifType::Unitary,
                    "unitary:rhombuses-on-chains",
                );
            }
        }
        // Chains: projective unification.
        for d in 1..=8u32 {
            add(
                vec![cat.parametric('L', d).unwrap()],
                UnifType::Projective,
                "projective:chains",
            );
        }
        KnownResultDb { entries, frames }
    }

    /// Exact lookup by logic equality (equal closures up to isomorphism).
    pub fn lookup(&self, logic: &LogicSpec) -> Option<(UnifType, &'static str)> {
        let set: BTreeSet<Vec<u8>> = logic
            .closure()
            .iter()
            .map(|f| f.canonical_form())
            .collect();
        self.lookup_canon(&set)
    }

    fn lookup_canon(&self, set: &BTreeSet<Vec<u8>>) -> Option<(UnifType, &'static str)> {
        self.entries
            .iter()
            .find(|e| e.closure_canon == *set)
            .map(|e| (e.typ, e.citation))
    }
}

/// A closure viewed as a canonical-form set, the substrate for omission.
struct ClosureView {
    set: BTreeSet<Vec<u8>>,
}

impl ClosureView {
    fn of_logic(l: &LogicSpec) -> ClosureView {
        ClosureView {
            set: l.closure().iter().map(|f| f.canonical_form()).collect(),
        }
    }

    fn omits(&self, f: &Frame) -> bool {
        !self.set.contains(&f.canonical_form())
    }
}

/// Classifies a logic given by its sm-closure view.
fn classify_view(db: &KnownResultDb, view: &ClosureView, name: String) -> Report {
    let fr = &db.frames;
    let contains_kc = view.omits(&fr.f2);
    let contains_lc = contains_kc && view.omits(&fr.r2);
    let hereditary_pa = view.omits(&fr.g3) && view.omits(&fr.r2);
    let hereditary_un = view.omits(&fr.r2plus) && view.omits(&fr.g3plus) && view.omits(&fr.f2);
    let mut notes = Vec::new();
    let hereditary_class = if contains_lc {
        HereditaryClass::Projective
    } else if hereditary_un {
        HereditaryClass::HereditaryUnitary
    } else if hereditary_pa {
        HereditaryClass::HereditaryProjectiveApproximation
    } else {
        // Name the maximal nullary logics containing this one.
        let mut containers = Vec::new();
        if !view.omits(&fr.r2plus) {
            containers.push("L(R2plus)");
        }
        if !view.omits(&fr.r2) && !view.omits(&fr.f2) {
            containers.push("L({R2,F2})");
        }
        if !view.omits(&fr.g3) {
            containers.push("L(G3)");
        }
        if !view.omits(&fr.g3plus) {
            containers.push("L(G3plus)");
        }
        notes.push(format!("nullary extension inside: {}", containers.join(", ")));
        HereditaryClass::HasNullaryExtension
    };
    let (db_result, db_citation) = match db.lookup_canon(&view.set) {
        Some((typ, cite)) => (typ, Some(cite.to_string())),
        None => match hereditary_class {
            HereditaryClass::Projective => {
                notes.push("type from hereditary class: extensions of LC are projective".into());
                (UnifType::Projective, None)
            }
            HereditaryClass::HereditaryUnitary => {
                notes.push("type from hereditary class: rhombus-on-chain frames".into());
                (UnifType::Unitary, None)
            }
            HereditaryClass::HereditaryProjectiveApproximation => {
                notes.push(
                    "type from hereditary class: projective approximation gives finitary".into(),
                );
                (UnifType::Finitary, None)
            }
            HereditaryClass::HasNullaryExtension => match split_off_chains(db, view) {
                Some((typ, cite)) => {
                    notes.push("type by intersection with a chain logic".into());
                    (typ, Some(cite.to_string()))
                }
                None => (UnifType::Unknown, None),
            },
        },
    };
    let structural = if fr.citkin.iter().all(|c| view.omits(c)) {
        "hereditarily_structurally_complete"
    } else {
        "not"
    };
    Report {
        logic: name,
        contains_kc,
        contains_lc,
        filtering: contains_kc,
        hereditary_class,
        db_result,
        db_citation,
        structural: structural.to_string(),
        notes,
    }
}

/// Intersections with a projective (chain) logic keep the finitary or
/// unitary type of the other side: match the non-chain part of the closure
/// against the table.
fn split_off_chains(db: &KnownResultDb, view: &ClosureView) -> Option<(UnifType, &'static str)> {
    let chain_canons: BTreeSet<Vec<u8>> = db
        .frames
        .chains
        .iter()
        .map(|c| c.canonical_form())
        .collect();
    let non_chain: BTreeSet<Vec<u8>> = view.set.difference(&chain_canons).cloned().collect();
    if non_chain.is_empty() || !view.set.difference(&non_chain).any(|_| true) {
        return None;
    }
    let hit = db.entries.iter().find(|e| {
        let entry_non_chain: BTreeSet<Vec<u8>> =
            e.closure_canon.difference(&chain_canons).cloned().collect();
        entry_non_chain == non_chain && e.closure_canon.is_subset(&view.set)
    })?;
    match hit.typ {
        UnifType::Finitary | UnifType::Unitary => Some((hit.typ, hit.citation)),
        _ => None,
    }
}

/// Classifies a logic.
pub fn classify(db: &KnownResultDb, logic: &LogicSpec) -> Report {
    let cat = Catalog::standard();
    let namer = Namer::new(&cat);
    let name = logic
        .generators()
        .iter()
        .map(|f| namer.name(f))
        .collect::<Vec<_>>()
        .join(",");
    classify_view(db, &ClosureView::of_logic(logic), name)
}

/// Hereditary structural completeness: all five Citkin frames omitted.
pub fn hereditary_structural_completeness(db: &KnownResultDb, logic: &LogicSpec) -> bool {
    let view = ClosureView::of_logic(logic);
    db.frames.citkin.iter().all(|c| view.omits(c))
}

/// One lattice node in a census.
#[derive(Debug, Clone, Serialize)]
pub struct CensusEntry {
    pub generators: Vec<String>,
    pub hereditary_class: HereditaryClass,
    pub db_result: UnifType,
    pub db_citation: Option<String>,
    /// True when the nullary label comes from the reference lattice census
    /// rather than the result table.
    pub figure_sourced: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub total: usize,
    pub nullary: usize,
    pub hereditary: usize,
    pub finitary_non_hereditary: Vec<String>,
    pub unknown: Vec<String>,
    pub entries: Vec<CensusEntry>,
}

/// Labels the whole extension lattice of a logic. Nodes absent from the
/// result table default to nullary only inside the reference lattice (the
/// extensions of the two-branch depth-three tree logic), flagged as
/// figure-sourced; elsewhere they stay unknown.
pub fn census(db: &KnownResultDb, logic: &LogicSpec) -> Result<CensusReport, LogicError> {
    let cat = Catalog::standard();
    let namer = Namer::new(&cat);
    let lattice = logic.extension_lattice()?;
    let base_canon: Vec<Vec<u8>> = lattice.base.iter().map(|f| f.canonical_form()).collect();
    let reference = {
        let g1 = cat.lookup("G1").unwrap();
        let g1logic = LogicSpec::new(vec![g1])?;
        logic.logic_eq(&g1logic)
    };
    let mut entries = Vec::new();
    let mut nullary = 0usize;
    let mut hereditary = 0usize;
    let mut finitary_non_hereditary = Vec::new();
    let mut unknown = Vec::new();
    for node in 0..lattice.len() {
        let gen_names: Vec<String> = lattice
            .generators(node)
            .into_iter()
            .map(|i| namer.name(&lattice.base[i]))
            .collect();
        let set: BTreeSet<Vec<u8>> = (0..lattice.base.len())
            .filter(|&i| lattice.node_contains(node, i))
            .map(|i| base_canon[i].clone())
            .collect();
        let view = ClosureView { set };
        let mut report = classify_view(db, &view, gen_names.join(","));
        let mut figure_sourced = false;
        if report.db_result == UnifType::Unknown
            && !report.hereditary_class.is_hereditary()
            && reference
        {
            report.db_result = UnifType::Nullary;
            figure_sourced = true;
        }
        if report.hereditary_class.is_hereditary() {
            hereditary += 1;
        } else {
            match report.db_result {
                UnifType::Nullary => nullary += 1,
                UnifType::Finitary | UnifType::Unitary => {
                    finitary_non_hereditary.push(gen_names.join(","))
                }
                _ => unknown.push(gen_names.join(",")),
            }
        }
        entries.push(CensusEntry {
            generators: gen_names,
            hereditary_class: report.hereditary_class,
            db_result: report.db_result,
            db_citation: report.db_citation,
            figure_sourced,
        });
    }
    finitary_non_hereditary.sort();
    unknown.sort();
    Ok(CensusReport {
        total: lattice.len(),
        nullary,
        hereditary,
        finitary_non_hereditary,
        unknown,
        entries,
    })
}

/// Census restricted to the single-frame (Halldén-complete) extensions.
pub fn h_complete_census(
    db: &KnownResultDb,
    logic: &LogicSpec,
) -> Result<CensusReport, LogicError> {
    let cat = Catalog::standard();
    let namer = Namer::new(&cat);
    let mut entries = Vec::new();
    let mut nullary = 0usize;
    let mut hereditary = 0usize;
    let mut finitary_non_hereditary = Vec::new();
    let mut unknown = Vec::new();
    for (frame, single) in logic.h_complete_extensions()? {
        let name = namer.name(&frame);
        let report = classify(db, &single);
        if report.hereditary_class.is_hereditary() {
            hereditary += 1;
        } else {
            match report.db_result {
                UnifType::Nullary => nullary += 1,
                UnifType::Finitary | UnifType::Unitary => {
                    finitary_non_hereditary.push(name.clone())
                }
                _ => unknown.push(name.clone()),
            }
        }
        entries.push(CensusEntry {
            generators: vec![name],
            hereditary_class: report.hereditary_class,
            db_result: report.db_result,
            db_citation: report.db_citation,
            figure_sourced: false,
        });
    }
    finitary_non_hereditary.sort();
    unknown.sort();
    Ok(CensusReport {
        total: entries.len(),
        nullary,
        hereditary,
        finitary_non_hereditary,
        unknown,
        entries,
    })
}
