//! Named verification scenarios, shared between the CLI and the acceptance
//! suite. Each scenario reruns a published desk-scale computation and
//! reports pass/fail with witnesses.

use crate::catalog::{Catalog, Namer};
use crate::classifier::{self, KnownResultDb, UnifType};
use crate::formulas::{parse_formula, parse_substitution, Substitution};
use crate::logics::LogicSpec;
use crate::models::Model;
use crate::morphisms;
use crate::unification::{
    self, Refutation, SearchOutcome, SearchParams,
};
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("scenario inconclusive: search budget exhausted")]
    Inconclusive,
    #[error(transparent)]
    Logic(#[from] crate::logics::LogicError),
    #[error(transparent)]
    Unif(#[from] unification::UnifError),
    #[error(transparent)]
    Model(#[from] crate::models::ModelError),
    #[error(transparent)]
    Morph(#[from] crate::morphisms::MorphError),
}

#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub name: String,
    pub pass: bool,
    pub details: Vec<String>,
}

impl ScenarioReport {
    fn new(name: &str) -> ScenarioReport {
        ScenarioReport {
            name: name.to_string(),
            pass: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.details
            .push(format!("{} {}", if ok { "ok:" } else { "FAIL:" }, what));
        self.pass &= ok;
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}: {}",
            self.name,
            if self.pass { "pass" } else { "fail" }
        );
        for d in &self.details {
            let _ = writeln!(out, "  {d}");
        }
        out
    }
}

pub const SCENARIOS: &[&str] = &[
    "figure-ki",
    "figure-ti",
    "f6m",
    "l7",
    "l8i-retraction",
    "uu-example",
    "kost-examples",
    "filtering-join",
];

pub fn run_scenario(
    name: &str,
    m_override: Option<u32>,
    params: SearchParams,
) -> Result<ScenarioReport, VerifyError> {
    match name {
        "figure-ki" => figure_ki(),
        "figure-ti" => figure_ti(),
        "f6m" => f6m(m_override.unwrap_or(1), params),
        "l7" => l7(m_override.unwrap_or(2), params),
        "l8i-retraction" => l8i_retraction(params),
        "uu-example" => uu_example(params),
        "kost-examples" => kost_examples(),
        "filtering-join" => filtering_join_scenario(params),
        other => Err(VerifyError::UnknownScenario(other.to_string())),
    }
}

fn catalog_logic(names: &[&str]) -> Result<LogicSpec, VerifyError> {
    let cat = Catalog::standard();
    let frames = names
        .iter()
        .map(|n| cat.lookup(n).expect("catalog name"))
        .collect();
    Ok(LogicSpec::new(frames)?)
}

/// The expected inclusion covers among the fourteen single-frame
/// extensions of the G1 logic; pairs are (smaller logic, larger logic).
pub fn ki_expected_edges() -> Vec<(&'static str, &'static str)> {
    vec![
        ("G1", "G3F2"),
        ("G1", "C5"),
        ("G3F2", "G3L2"),
        ("G3F2", "G2"),
        ("G3F2", "Y2"),
        ("C5", "Y2"),
        ("C5", "Y3"),
        ("G3L2", "G3"),
        ("G3L2", "R2"),
        ("G2", "G3"),
        ("G2", "plusF2"),
        ("Y2", "plusF2"),
        ("Y2", "R2"),
        ("Y3", "plusF2"),
        ("Y3", "R2"),
        ("G3", "F2"),
        ("G3", "L3"),
        ("plusF2", "F2"),
        ("plusF2", "L3"),
        ("R2", "L3"),
        ("F2", "L2"),
        ("L3", "L2"),
        ("L2", "L1"),
    ]
}

fn figure_ki() -> Result<ScenarioReport, VerifyError> {
    let mut rep = ScenarioReport::new("figure-ki");
    let cat = Catalog::standard();
    let namer = Namer::new(&cat);
    let l = catalog_logic(&["G1"])?;
    let db = KnownResultDb::standard();
    let exts = l.h_complete_extensions()?;
    rep.check(exts.len() == 14, format!("14 logics (got {})", exts.len()));
    // Pairwise distinct.
    let mut distinct = true;
    for i in 0..exts.len() {
        for j in i + 1..exts.len() {
            if exts[i].1.logic_eq(&exts[j].1) {
                distinct = false;
            }
        }
    }
    rep.check(distinct, "pairwise distinct");
    // Cover relations match the diagram.
    let names: Vec<String> = exts.iter().map(|(f, _)| namer.name(f)).collect();
    let lt = |a: usize, b: usize| a != b && exts[a].1.leq(&exts[b].1);
    let mut covers = Vec::new();
    for a in 0..exts.len() {
        for b in 0..exts.len() {
            if lt(a, b) && !(0..exts.len()).any(|m| lt(a, m) && lt(m, b)) {
                covers.push((names[a].clone(), names[b].clone()));
            }
        }
    }
    covers.sort();
    let mut expected: Vec<(String, String)> = ki_expected_edges()
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    expected.sort();
    rep.check(
        covers == expected,
        format!("Hasse edges match the diagram ({} edges)", covers.len()),
    );
    // Nullary labels.
    let census = classifier::h_complete_census(&db, &l)?;
    let mut nullary: Vec<String> = census
        .entries
        .iter()
        .filter(|e| e.db_result == UnifType::Nullary)
        .map(|e| e.generators.join(","))
        .collect();
    nullary.sort();
    rep.check(
        nullary == ["G3", "G3F2", "G3L2", "Y2", "Y3"],
        format!("5 nullary: {}", nullary.join(" ")),
    );
    Ok(rep)
}

fn figure_ti() -> Result<ScenarioReport, VerifyError> {
    let mut rep = ScenarioReport::new("figure-ti");
    let l = catalog_logic(&["G1"])?;
    let db = KnownResultDb::standard();
    let census = classifier::census(&db, &l)?;
    rep.check(
        census.total == 42,
        format!("42 consistent logics (got {})", census.total),
    );
    rep.check(
        census.nullary == 31,
        format!("31 nullary (got {})", census.nullary),
    );
    rep.check(
        census.hereditary == 7,
        format!("7 hereditary finitary (got {})", census.hereditary),
    );
    let mut fin = census.finitary_non_hereditary.clone();
    fin.sort();
    rep.check(
        fin == ["C5", "G1", "G2", "G2,C5"],
        format!("4 finitary non-hereditary: {}", fin.join("; ")),
    );
    rep.check(census.unknown.is_empty(), "no unknown labels");
    Ok(rep)
}

/// The k-variable substitution whose models have no bounded-width
/// certificate over the logic of the two-branch frame: true on a point iff
/// some variable holds somewhere above and every variable is decided.
pub fn f6m_sigma(k: u32) -> Substitution {
    let vars: Vec<String> = (1..=k).map(|i| format!("x{i}")).collect();
    let mut text = format!("vars {k}; x1 := ~~({})", vars.join(" | "));
    for v in &vars {
        text.push_str(&format!(" & (~~{v} | ~{v})"));
    }
    parse_substitution(&text).expect("builds")
}

fn f6m(m: u32, params: SearchParams) -> Result<ScenarioReport, VerifyError> {
    let mut rep = ScenarioReport::new("f6m");
    let l = catalog_logic(&["G3"])?;
    let sigma = f6m_sigma(2);
    match unification::refute_finitary_at(&l, &sigma, m, params)? {
        Refutation::Refuted => rep.check(true, format!("no certificate at m={m} (exhaustive)")),
        Refutation::CertificateFound(_) => rep.check(false, format!("certificate found at m={m}")),
        Refutation::Inconclusive => return Err(VerifyError::Inconclusive),
    }
    Ok(rep)
}

/// The two-variable substitution over the meet of the rhombus and fork
/// logics: x1 says every variable is decided, x2 says no variable is
/// undecidedly forced.
pub fn l7_sigma(k: u32) -> Substitution {
    let decided: Vec<String> = (1..=k).map(|i| format!("(~x{i} | ~~x{i})")).collect();
    let stable: Vec<String> = (1..=k).map(|i| format!("(~~x{i} -> x{i})")).collect();
    parse_substitution(&format!(
        "vars {k}; x1 := {}; x2 := {}",
        decided.join(" & "),
        stable.join(" & ")
    ))
    .expect("builds")
}

fn l7(m: u32, params: SearchParams) -> Result<ScenarioReport, VerifyError> {
    let mut rep = ScenarioReport::new("l7");
    let l = catalog_logic(&["R2", "F2"])?;
    let sigma = l7_sigma(3);
    match unification::refute_finitary_at(&l, &sigma, m, params)? {
        Refutation::Refuted => rep.check(true, format!("no certificate at m={m} (exhaustive)")),
        Refutation::CertificateFound(_) => rep.check(false, format!("certificate found at m={m}")),
        Refutation::Inconclusive => return Err(VerifyError::Inconclusive),
    }
    Ok(rep)
}

/// The one-variable substitution over the logic of G2 with no retraction.
pub fn l8i_sigma() -> Substitution {
    parse_substitution("vars 2; x1 := ~~x1 & (x2 | (x2 -> x1 | ~x1))").expect("builds")
}

fn l8i_retraction(params: SearchParams) -> Result<ScenarioReport, VerifyError> {
    let mut rep = ScenarioReport::new("l8i-retraction");
    let l = catalog_logic(&["G2"])?;
    let sigma = l8i_sigma();
    match unification::find_retraction(&l, &sigma, params)? {
        SearchOutcome::Exhausted => rep.check(true, "no retraction (exhaustive)"),
        SearchOutcome::Found(_) => rep.check(false, "retraction found"),
        SearchOutcome::OutOfBudget => return Err(VerifyError::Inconclusive),
    }
    // The σ-model classes are the four expected shapes.
    let h = unification::to_semantic(&l, &sigma)?;
    let sc = unification::sigma_classes(&l, &h)?;
    let classes = l.classes(1)?;
    let mut shapes: Vec<String> = sc
        .set
        .iter()
        .map(|&d| {
            let m = &classes.models[d];
            (0..m.len())
                .map(|w| m.bits_of(w))
                .collect::<Vec<_>>()
                .join("")
        })
        .collect();
    shapes.sort();
    rep.check(
        shapes == ["0", "001", "01", "1"],
        format!("σ-model classes are the four shapes: {}", shapes.join(" ")),
    );
    Ok(rep)
}

/// The worked mgu example: A and its three unifiers.
pub fn uu_data() -> (Arc<crate::formulas::Formula>, [Substitution; 3]) {
    let a = parse_formula("x1 | x2 | (~x1 & ~x2)").expect("parses");
    let e1 = parse_substitution("vars 2; x1 := true; x2 := x2").expect("parses");
    let e2 = parse_substitution("vars 2; x1 := x1; x2 := true").expect("parses");
    let e3 = parse_substitution("vars 2; x1 := false; x2 := false").expect("parses");
    (a, [e1, e2, e3])
}

fn uu_example(params: SearchParams) -> Result<ScenarioReport, VerifyError> {
    let mut rep = ScenarioReport::new("uu-example");
    let l = catalog_logic(&["R2"])?;
    let (a, eps) = uu_data();
    // (a) all three unify A.
    for (i, e) in eps.iter().enumerate() {
        rep.check(
            unification::is_unifier(&l, e, &a)?,
            format!("ε{} unifies A", i + 1),
        );
    }
    // (b) no two-variable unifier of A is more general than all three.
    // A unifier's images land on A-model classes only.
    let sems: Vec<_> = eps
        .iter()
        .map(|e| unification::to_semantic(&l, e))
        .collect::<Result<_, _>>()?;
    let classes2 = l.classes(2)?;
    let a_classes: Vec<bool> = classes2
        .models
        .iter()
        .map(|m| m.forces(&a).unwrap_or(false))
        .collect();
    let witness = unification::enumerate_sem_substs(
        &l,
        2,
        2,
        params,
        &|_, d| a_classes[d],
        &|h| {
            let beats_all = sems.iter().all(|s| {
                matches!(
                    unification::more_general_sem(&l, h, s, params),
                    Ok(SearchOutcome::Found(_))
                )
            });
            if beats_all {
                Some(h.clone())
            } else {
                None
            }
        },
    )?;
    match witness {
        SearchOutcome::Exhausted => rep.check(
            true,
            "no two-variable unifier of A dominates ε1, ε2 and ε3 (exhaustive)",
        ),
        SearchOutcome::Found(_) => {
            rep.check(false, "a two-variable unifier dominates all three")
        }
        SearchOutcome::OutOfBudget => return Err(VerifyError::Inconclusive),
    }
    // (c) filtering joins give a common generalization with new variables:
    // joining ε1 and ε2 takes three variables, folding in ε3 a fourth.
    let mu12 = unification::filtering_join(&l, &eps[0], &eps[1], None)?;
    rep.check(
        mu12.target == 3,
        format!("join of ε1, ε2 lives in {} variables", mu12.target),
    );
    for (i, e) in [&eps[0], &eps[1]].into_iter().enumerate() {
        rep.check(
            unification::more_general(&l, &mu12, e, params)?.found(),
            format!("join of ε1, ε2 is more general than ε{}", i + 1),
        );
    }
    let mu = unification::filtering_join(&l, &mu12, &eps[2], None)?;
    rep.check(
        unification::is_unifier(&l, &mu, &a)?,
        "the iterated join unifies A",
    );
    for (i, e) in eps.iter().enumerate() {
        rep.check(
            unification::more_general(&l, &mu, e, params)?.found(),
            format!("iterated join is more general than ε{}", i + 1),
        );
    }
    Ok(rep)
}

fn kost_examples() -> Result<ScenarioReport, VerifyError> {
    let mut rep = ScenarioReport::new("kost-examples");
    // First counterexample: σ(x1) = x2 | (x2 -> (x1 | ~x1)) over the
    // three-chain logic.
    {
        let l = catalog_logic(&["L3"])?;
        let sigma = parse_substitution("vars 2; x1 := x2 | (x2 -> (x1 | ~x1))").expect("parses");
        // Raw σ-models per frame size.
        let mut l2_raw = std::collections::BTreeSet::new();
        let mut l3_raw = std::collections::BTreeSet::new();
        for frame in l.closure() {
            for vals in crate::models::monotone_valuations(frame, 2) {
                let m = Model::build(frame.clone(), 2, vals)?;
                let sm = unification::sigma_model(&sigma, &m)?;
                match frame.len() {
                    2 => {
                        l2_raw.insert(sm.vals().to_vec());
                    }
                    3 => {
                        l3_raw.insert(sm.vals().to_vec());
                    }
                    _ => {}
                }
            }
        }
        rep.check(
            l3_raw.contains(&vec![0, 1, 1]),
            "the (0,1,1) three-chain pattern arises as a σ-model",
        );
        rep.check(
            !l2_raw.contains(&vec![0, 1]),
            "no two-chain σ-model has the (0,1) pattern",
        );
        // Yet (0,1) is equivalent to the reduct of the (0,1,1) σ-model.
        let l3f = l.closure().iter().find(|f| f.len() == 3).unwrap().clone();
        let l2f = l.closure().iter().find(|f| f.len() == 2).unwrap().clone();
        let chain = Model::build(l3f, 1, vec![0, 1, 1])?;
        let two = Model::build(l2f, 1, vec![0, 1])?;
        rep.check(
            morphisms::equivalent(&chain, &two)?,
            "the (0,1) two-chain is equivalent to a σ-model",
        );
    }
    // Second counterexample: σ(x) = ~~x | ~x over the fork logic.
    {
        let l = catalog_logic(&["F2"])?;
        let sigma = parse_substitution("vars 1; x1 := ~~x1 | ~x1").expect("parses");
        let mut l2_raw = std::collections::BTreeSet::new();
        let mut f2_raw = std::collections::BTreeSet::new();
        for frame in l.closure() {
            for vals in crate::models::monotone_valuations(frame, 1) {
                let m = Model::build(frame.clone(), 1, vals)?;
                let sm = unification::sigma_model(&sigma, &m)?;
                match frame.len() {
                    2 => {
                        l2_raw.insert(sm.vals().to_vec());
                    }
                    3 => {
                        f2_raw.insert(sm.vals().to_vec());
                    }
                    _ => {}
                }
            }
        }
        rep.check(
            f2_raw.contains(&vec![0, 1, 1]),
            "the fork σ-model (0; 1, 1) arises",
        );
        rep.check(
            !l2_raw.contains(&vec![0, 1]),
            "no two-chain σ-model has the (0,1) pattern",
        );
        let f2f = l.closure().iter().find(|f| f.len() == 3).unwrap().clone();
        let l2f = l.closure().iter().find(|f| f.len() == 2).unwrap().clone();
        let fork = Model::build(f2f, 1, vec![0, 1, 1])?;
        let two = Model::build(l2f, 1, vec![0, 1])?;
        rep.check(
            morphisms::equivalent(&fork, &two)?,
            "the (0,1) two-chain is equivalent to the fork σ-model",
        );
    }
    Ok(rep)
}

fn filtering_join_scenario(params: SearchParams) -> Result<ScenarioReport, VerifyError> {
    let mut rep = ScenarioReport::new("filtering-join");
    let (_, eps) = uu_data();
    let l = catalog_logic(&["R2"])?;
    let mu = unification::filtering_join(&l, &eps[0], &eps[1], None)?;
    rep.check(mu.target == 3, "join introduces one fresh variable");
    rep.check(
        unification::more_general(&l, &mu, &eps[0], params)?.found(),
        "more general than the left input",
    );
    rep.check(
        unification::more_general(&l, &mu, &eps[1], params)?.found(),
        "more general than the right input",
    );
    let fork_logic = catalog_logic(&["F2"])?;
    rep.check(
        matches!(
            unification::filtering_join(&fork_logic, &eps[0], &eps[1], None),
            Err(unification::UnifError::NotFiltering)
        ),
        "rejected over a logic without the weak excluded middle",
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kost_scenario_passes() {
        let rep = kost_examples().unwrap();
        assert!(rep.pass, "{}", rep.render());
    }

    #[test]
    fn filtering_join_scenario_passes() {
        let rep = filtering_join_scenario(SearchParams::default()).unwrap();
        assert!(rep.pass, "{}", rep.render());
    }

    #[test]
    fn unknown_scenario_errors() {
        assert!(matches!(
            run_scenario("nope", None, SearchParams::default()),
            Err(VerifyError::UnknownScenario(_))
        ));
    }
}
