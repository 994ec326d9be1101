//! Randomized law suites (with exhaustive small cases where stated).
//! Seeds are fixed, so failures reproduce.

mod support;

#[test]
fn forcing_invariant_under_p_morphisms() {
    support::suite_pm0_forcing_invariance(500);
}

#[test]
fn forcing_is_persistent() {
    support::suite_pmm_persistence(500);
}

#[test]
fn theory_order_matches_formula_transfer() {
    support::suite_pat_order(500);
}

#[test]
fn equivalence_is_mutual_inclusion_and_common_reduct() {
    support::suite_lf3i_equivalence(500);
}

#[test]
fn reduction_unique_and_idempotent() {
    support::suite_irr_uniqueness(500);
}

#[test]
fn character_contract_exhaustive_small() {
    support::suite_character_contract();
}

#[test]
fn sigma_images_commute() {
    support::suite_sigma_commutation(500);
}

#[test]
fn unifier_checks_agree() {
    support::suite_n1i_dual_check(500);
}

#[test]
fn idempotent_iff_projective_for_strongest_unified() {
    support::suite_n7_iff_n5(500);
}

#[test]
fn projective_unifiers_absorb() {
    support::suite_proj_absorption(500);
}

#[test]
fn generality_preorder_laws() {
    support::suite_more_general_preorder(200);
}

#[test]
fn semantic_witnesses_realize_to_syntactic_factors() {
    support::suite_witness_realization(200);
}
