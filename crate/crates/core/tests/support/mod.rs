//! Shared generators and law suites for the property tests.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use ultab_core::catalog::Catalog;
use ultab_core::formulas::{Formula, Substitution};
use ultab_core::logics::LogicSpec;
use ultab_core::models::{monotone_valuations, Model};
use ultab_core::morphisms::{self, Level};
use ultab_core::unification::{self, SearchParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Frame pools for randomized suites, by admissible width.
pub fn logic_pool(max_n: u32) -> Vec<LogicSpec> {
    let cat = Catalog::standard();
    let mk = |names: &[&str]| {
        LogicSpec::new(names.iter().map(|n| cat.lookup(n).unwrap()).collect()).unwrap()
    };
    let mut pool = vec![mk(&["L3"]), mk(&["F2"]), mk(&["R2"]), mk(&["G3"]), mk(&["plusF2"])];
    if max_n <= 2 {
        pool.push(mk(&["F3"]));
        pool.push(mk(&["G3plus"]));
        pool.push(mk(&["R2", "F2"]));
        pool.push(mk(&["Y2"]));
        pool.push(mk(&["C5"]));
    }
    pool
}

/// Random monotone model over a random closure frame.
pub fn random_model(rng: &mut ChaCha8Rng, logic: &LogicSpec, n: u32) -> Model {
    let frame = logic.closure().choose(rng).unwrap().clone();
    let all = monotone_valuations(&frame, n);
    let vals = all.choose(rng).unwrap().clone();
    Model::build(frame, n, vals).unwrap()
}

/// Random formula of bounded depth over n variables.
pub fn random_formula(rng: &mut ChaCha8Rng, n: u32, depth: u32) -> Arc<Formula> {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..=n) {
            0 => {
                if rng.gen_bool(0.5) {
                    Formula::bot()
                } else {
                    Formula::top()
                }
            }
            i => Formula::var(i),
        };
    }
    let a = random_formula(rng, n, depth - 1);
    let b = random_formula(rng, n, depth - 1);
    match rng.gen_range(0..4) {
        0 => Formula::imp(a, b),
        1 => Formula::or(a, b),
        2 => Formula::and(a, b),
        _ => Formula::neg(a),
    }
}

/// Random substitution n -> Fm^k with images of bounded depth.
pub fn random_subst(rng: &mut ChaCha8Rng, n: u32, k: u32, depth: u32) -> Substitution {
    let images = (0..n).map(|_| random_formula(rng, k, depth)).collect();
    Substitution::new(n, k, images)
}

/// The named substitutions exercised across the σ-model suites.
pub fn named_substs() -> Vec<(u32, Substitution)> {
    use ultab_core::formulas::parse_substitution as p;
    vec![
        (2, p("vars 2; x1 := x2 | (x2 -> (x1 | ~x1))").unwrap()),
        (1, p("vars 1; x1 := ~~x1 | ~x1").unwrap()),
        (2, p("vars 2; x1 := ~~x1 & (x2 | (x2 -> x1 | ~x1))").unwrap()),
        (2, p("vars 2; x1 := ~~(x1 | x2) & (~~x1 | ~x1) & (~~x2 | ~x2)").unwrap()),
        (2, p("vars 2; x1 := true; x2 := x2").unwrap()),
        (2, p("vars 2; x1 := false; x2 := false").unwrap()),
    ]
}

/// Lemma-style suite: forcing is invariant under p-morphisms (reductions).
pub fn suite_pm0_forcing_invariance(cases: usize) {
    let mut rng = rng(11);
    let pools = [logic_pool(3), logic_pool(2)];
    for case in 0..cases {
        let n = [1u32, 2, 3][case % 3];
        let pool = if n <= 2 { &pools[1] } else { &pools[0] };
        let logic = pool.choose(&mut rng).unwrap();
        let m = random_model(&mut rng, logic, n);
        let (red, map) = morphisms::reduce(&m);
        assert!(
            morphisms::check_p_morphism(&m, &red, &map, Level::Model).unwrap(),
            "reduction map is a p-morphism"
        );
        let a = random_formula(&mut rng, n, 4);
        for w in 0..m.len() {
            assert_eq!(
                m.forces_at(w, &a).unwrap(),
                red.forces_at(map.apply(w), &a).unwrap(),
                "forcing transfers along the reduction (case {case})"
            );
        }
    }
}

/// Persistence: once forced, forced upward.
pub fn suite_pmm_persistence(cases: usize) {
    let mut rng = rng(13);
    let pools = [logic_pool(3), logic_pool(2)];
    for case in 0..cases {
        let n = [1u32, 2, 3][case % 3];
        let pool = if n <= 2 { &pools[1] } else { &pools[0] };
        let logic = pool.choose(&mut rng).unwrap();
        let m = random_model(&mut rng, logic, n);
        let a = random_formula(&mut rng, n, 4);
        let truth = m.truth_set(&a).unwrap();
        for u in 0..m.len() {
            if truth >> u & 1 == 0 {
                continue;
            }
            for w in 0..m.len() {
                if m.frame().leq(u, w) {
                    assert!(truth >> w & 1 == 1, "persistence (case {case})");
                }
            }
        }
    }
}

/// Theory order: structural comparison agrees with formula transfer, and
/// characters separate when it fails.
pub fn suite_pat_order(cases: usize) {
    let mut rng = rng(17);
    let pool = logic_pool(2);
    for case in 0..cases {
        let n = 1 + (case % 2) as u32;
        let logic = pool.choose(&mut rng).unwrap();
        let m = random_model(&mut rng, logic, n);
        let nn = random_model(&mut rng, logic, n);
        let leq = logic.th_leq(&m, &nn).unwrap();
        if leq {
            for _ in 0..20 {
                let a = random_formula(&mut rng, n, 3);
                if m.forces(&a).unwrap() {
                    assert!(nn.forces(&a).unwrap(), "theory inclusion transfers (case {case})");
                }
            }
        } else {
            let delta = logic.character(&m).unwrap();
            assert!(m.forces(&delta).unwrap(), "model forces its own character");
            assert!(
                !nn.forces(&delta).unwrap(),
                "character separates when theory inclusion fails (case {case})"
            );
        }
    }
}

/// Equivalence is equivalent to mutual theory inclusion and to a common
/// p-morphic image.
pub fn suite_lf3i_equivalence(cases: usize) {
    let mut rng = rng(19);
    let pool = logic_pool(2);
    for case in 0..cases {
        let n = 1 + (case % 2) as u32;
        let logic = pool.choose(&mut rng).unwrap();
        let m = random_model(&mut rng, logic, n);
        let nn = random_model(&mut rng, logic, n);
        let equiv = morphisms::equivalent(&m, &nn).unwrap();
        let both = logic.th_leq(&m, &nn).unwrap() && logic.th_leq(&nn, &m).unwrap();
        assert_eq!(equiv, both, "equivalence is mutual inclusion (case {case})");
        let (red_n, _) = morphisms::reduce(&nn);
        let common = morphisms::find_p_morphism(&m, &red_n).unwrap();
        assert_eq!(
            equiv,
            common.is_some(),
            "equivalence matches reachability of the common reduct (case {case})"
        );
    }
}

/// Reduction is idempotent, unique up to isomorphism, and preserves
/// irreducibility of generated submodels.
pub fn suite_irr_uniqueness(cases: usize) {
    let mut rng = rng(23);
    let pools = [logic_pool(3), logic_pool(2)];
    for case in 0..cases {
        let n = [1u32, 2, 3][case % 3];
        let pool = if n <= 2 { &pools[1] } else { &pools[0] };
        let logic = pool.choose(&mut rng).unwrap();
        let m = random_model(&mut rng, logic, n);
        let (r1, _) = morphisms::reduce(&m);
        let (r2, _) = morphisms::reduce(&r1);
        assert_eq!(
            morphisms::canonical_form(&r1),
            morphisms::canonical_form(&r2),
            "reduce is idempotent (case {case})"
        );
        // Uniqueness under relabeling: a shuffled copy reduces to the same
        // canonical reduct.
        let shuffled = {
            let frame = m.frame();
            let mut perm: Vec<usize> = (0..m.len()).collect();
            perm.shuffle(&mut rng);
            let names: Vec<String> = perm.iter().map(|&w| frame.name_of(w).to_string()).collect();
            let covers: Vec<(usize, usize)> = frame
                .covers()
                .iter()
                .map(|&(a, b)| {
                    (
                        perm.iter().position(|&w| w == a).unwrap(),
                        perm.iter().position(|&w| w == b).unwrap(),
                    )
                })
                .collect();
            let root = perm.iter().position(|&w| w == frame.root()).unwrap();
            let f2 = ultab_core::frames::Frame::from_covers(names, covers, root).unwrap();
            let vals = perm.iter().map(|&w| m.val(w)).collect();
            Model::build(Arc::new(f2), n, vals).unwrap()
        };
        let (r3, _) = morphisms::reduce(&shuffled);
        assert_eq!(
            morphisms::canonical_form(&r1),
            morphisms::canonical_form(&r3),
            "reducts of isomorphic models coincide (case {case})"
        );
        // Generated submodels of the reduct are again irreducible.
        for w in 0..r1.len() {
            let sub = r1.generated_submodel(w);
            let (sub_red, _) = morphisms::reduce(&sub);
            assert_eq!(sub.len(), sub_red.len(), "submodels stay irreducible (case {case})");
        }
        // Refinement cross-check: the greatest bisimulation relates exactly
        // the nodes with equivalent generated submodels.
        let p = morphisms::greatest_bisimulation(&m);
        for w in 0..m.len() {
            for v in 0..m.len() {
                let same = p.block_of(w) == p.block_of(v);
                let equiv = morphisms::equivalent(
                    &m.generated_submodel(w),
                    &m.generated_submodel(v),
                )
                .unwrap();
                assert_eq!(same, equiv, "refinement matches submodel equivalence (case {case})");
            }
        }
    }
}

/// Character contract, exhaustively over small closures.
pub fn suite_character_contract() {
    let cat = Catalog::standard();
    let small = [
        "L1", "L2", "L3", "L4", "L5", "F2", "F3", "R2", "G3", "plusF2", "plusR2", "R2plus",
        "Y2", "Y3", "G3L2", "G3plus",
    ];
    for name in small {
        let frame = cat.lookup(name).unwrap();
        assert!(frame.len() <= 5, "{name} fits the small-frame gate");
        let logic = LogicSpec::new(vec![frame]).unwrap();
        for n in 1..=2u32 {
            let classes = logic.classes(n).unwrap();
            let chars = logic.characters(n).unwrap();
            for (c, delta) in chars.formulas.iter().enumerate() {
                for f in logic.closure() {
                    for vals in monotone_valuations(f, n) {
                        let model = Model::build(f.clone(), n, vals).unwrap();
                        let forced = model.forces(delta).unwrap();
                        let d = classes.class_of(&model).unwrap();
                        assert_eq!(
                            forced,
                            classes.th_leq_class(c, d),
                            "character contract over {name}, n={n}, class {c}"
                        );
                    }
                }
            }
        }
    }
}

/// σ-images commute with generated submodels and with p-morphisms, and
/// p-morphism composition stays p-morphic.
pub fn suite_sigma_commutation(cases: usize) {
    let mut rng = rng(29);
    let pool = logic_pool(2);
    let named = named_substs();
    for case in 0..cases {
        let logic = pool.choose(&mut rng).unwrap();
        let (k, sigma) = if case % 3 == 0 {
            let (k, s) = named.choose(&mut rng).unwrap().clone();
            (k, s)
        } else {
            let k = 1 + (case % 2) as u32;
            (k, random_subst(&mut rng, 1 + (case as u32 % 2), k, 3))
        };
        let m = random_model(&mut rng, logic, k);
        let sm = unification::sigma_model(&sigma, &m).unwrap();
        // Commutation with generated submodels, up to equivalence.
        for w in 0..m.len() {
            let lhs = unification::sigma_model(&sigma, &m.generated_submodel(w)).unwrap();
            let rhs = sm.generated_submodel(w);
            assert!(
                morphisms::equivalent(&lhs, &rhs).unwrap(),
                "σ commutes with generated submodels (case {case})"
            );
        }
        // The reduction map of M is also a p-morphism of the σ-images,
        // with equal valuations along the same node map.
        let (red, map) = morphisms::reduce(&m);
        let sm_red = unification::sigma_model(&sigma, &red).unwrap();
        assert!(
            morphisms::check_p_morphism(&sm, &sm_red, &map, Level::Model).unwrap(),
            "σ-image of a reduction map is a p-morphism (case {case})"
        );
        // Composition closure: follow with the reduction of the σ-image.
        let (_, map2) = morphisms::reduce(&sm_red);
        let composed = map2.compose_after(&map);
        let (sm_red_red, _) = morphisms::reduce(&sm_red);
        assert!(
            morphisms::check_p_morphism(&sm, &sm_red_red, &composed, Level::Model).unwrap(),
            "composition of p-morphisms is a p-morphism (case {case})"
        );
    }
}

/// The two unifier checks agree.
pub fn suite_n1i_dual_check(cases: usize) {
    let mut rng = rng(31);
    let pool = logic_pool(2);
    for case in 0..cases {
        let logic = pool.choose(&mut rng).unwrap();
        let n = 1 + (case % 2) as u32;
        let k = 1 + (case % 2) as u32;
        let sigma = random_subst(&mut rng, n, k, 3);
        let a = random_formula(&mut rng, n, 3);
        let syntactic = logic.is_theorem(&sigma.apply(&a)).unwrap();
        let classes = logic.classes(k).unwrap();
        let semantic = classes.models.iter().all(|m| {
            unification::sigma_model(&sigma, m)
                .unwrap()
                .forces(&a)
                .unwrap()
        });
        assert_eq!(syntactic, semantic, "unifier checks agree (case {case})");
    }
}

/// Idempotence characterizes projective unifiers of the strongest unified
/// formula.
pub fn suite_n7_iff_n5(cases: usize) {
    let mut rng = rng(37);
    let pool = logic_pool(2);
    for case in 0..cases {
        let logic = pool.choose(&mut rng).unwrap();
        let n = 1 + (case % 2) as u32;
        let eps = random_subst(&mut rng, n, n, 2);
        let a_eps = unification::strongest_unified(logic, &eps).unwrap();
        let idem = unification::subst_equal(
            logic,
            &Substitution::compose(&eps, &eps),
            &eps,
        )
        .unwrap();
        let projective = unification::is_projective_unifier(logic, &eps, &a_eps).unwrap();
        assert_eq!(idem, projective, "idempotence matches projectivity (case {case})");
    }
}

/// Projective unifiers absorb into any unifier of the same formula.
pub fn suite_proj_absorption(cases: usize) {
    let mut rng = rng(41);
    let pool = logic_pool(2);
    for case in 0..cases {
        let logic = pool.choose(&mut rng).unwrap();
        // A defines a fresh variable by a formula in the others; the
        // by-definition substitution is a projective unifier.
        let j = 1 + (case as u32 % 2);
        let body = random_formula(&mut rng, j, 2);
        let z = j + 1;
        let a = Formula::iff(body.clone(), Formula::var(z));
        let mut images: Vec<Arc<Formula>> = (1..=z).map(Formula::var).collect();
        images[(z - 1) as usize] = body;
        let eps = Substitution::new(z, z, images);
        assert!(
            unification::is_projective_unifier(logic, &eps, &a).unwrap(),
            "by-definition unifier is projective (case {case})"
        );
        // Any unifier of A: post-compose a random substitution.
        let alpha = random_subst(&mut rng, z, 2, 2);
        let sigma = Substitution::compose(&alpha, &eps);
        assert!(
            unification::is_unifier(logic, &sigma, &a).unwrap(),
            "post-composed substitution unifies (case {case})"
        );
        let absorbed = unification::subst_equal(
            logic,
            &Substitution::compose(&sigma, &eps),
            &sigma,
        )
        .unwrap();
        assert!(absorbed, "projective unifier absorbs (case {case})");
    }
}

/// A semantic generality witness realizes to a syntactic factor: when the
/// search says τ ≼ σ with witness F, the substitution ν read off F through
/// the characters satisfies ν∘τ =_L σ.
pub fn suite_witness_realization(cases: usize) {
    let mut rng = rng(47);
    let pool = logic_pool(2);
    let params = SearchParams::default();
    let mut confirmed = 0usize;
    for case in 0..cases {
        let logic = pool.choose(&mut rng).unwrap();
        let n = 1 + (case % 2) as u32;
        let tau = random_subst(&mut rng, n, 2, 2);
        // Build σ below τ by composing with a random factor, so the search
        // has something to find.
        let nu0 = random_subst(&mut rng, 2, 2, 2);
        let sigma = Substitution::compose(&nu0, &tau);
        let found = unification::more_general(logic, &tau, &sigma, params).unwrap();
        let witness = match found {
            unification::SearchOutcome::Found(w) => w,
            _ => panic!("composition witnesses its own generality (case {case})"),
        };
        let nu = unification::realize(logic, &witness).unwrap();
        let composed = Substitution::compose(&nu, &tau);
        assert!(
            unification::subst_equal(logic, &composed, &sigma).unwrap(),
            "realized witness factors σ through τ (case {case})"
        );
        confirmed += 1;
    }
    assert_eq!(confirmed, cases);
}

/// The generality pre-order is reflexive and transitive on a corpus.
pub fn suite_more_general_preorder(cases: usize) {
    let mut rng = rng(43);
    let pool = logic_pool(2);
    let params = SearchParams::default();
    for case in 0..cases {
        let logic = pool.choose(&mut rng).unwrap();
        let n = 1 + (case % 2) as u32;
        let sigma = random_subst(&mut rng, n, 1 + (case as u32 % 2), 2);
        assert!(
            unification::more_general(logic, &sigma, &sigma, params)
                .unwrap()
                .found(),
            "reflexive (case {case})"
        );
        // Transitivity: build tau ≼ sigma by precomposition, rho ≼ tau
        // likewise, then check rho ≼ sigma.
        let alpha = random_subst(&mut rng, sigma.target, 2, 2);
        let tau = sigma.clone();
        let sigma2 = Substitution::compose(&alpha, &sigma);
        if unification::more_general(logic, &tau, &sigma2, params)
            .unwrap()
            .found()
        {
            let beta = random_subst(&mut rng, sigma2.target, 1, 2);
            let sigma3 = Substitution::compose(&beta, &sigma2);
            if unification::more_general(logic, &sigma2, &sigma3, params)
                .unwrap()
                .found()
            {
                assert!(
                    unification::more_general(logic, &tau, &sigma3, params)
                        .unwrap()
                        .found(),
                    "transitive (case {case})"
                );
            }
        }
    }
}
