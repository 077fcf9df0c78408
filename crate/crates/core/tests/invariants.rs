mod props;

fn run(name: &str) {
    let (_, suite) = props::SUITES.iter().find(|(n, _)| *n == name).expect("known suite");
    suite();
}

#[test]
fn method_one_is_independent_of_alpha0() {
    run("method_one_is_independent_of_alpha0");
}

#[test]
fn residual_is_conjugate_symmetric() {
    run("residual_is_conjugate_symmetric");
}

#[test]
fn methods_agree() {
    run("methods_agree");
}

#[test]
fn winding_is_additive() {
    run("winding_is_additive");
}

#[test]
fn phi_satisfies_cauchy_riemann() {
    run("phi_satisfies_cauchy_riemann");
}

#[test]
fn phi_is_conjugate_symmetric_for_real_potentials() {
    run("phi_is_conjugate_symmetric_for_real_potentials");
}

#[test]
fn scaled_solution_obeys_its_bound() {
    run("scaled_solution_obeys_its_bound");
}

#[test]
fn builtin_support_is_convex() {
    run("builtin_support_is_convex");
}

#[test]
fn mixture_support_is_subharmonic() {
    run("mixture_support_is_subharmonic");
}

#[test]
fn grid_refinement_keeps_rejections() {
    run("grid_refinement_keeps_rejections");
}

#[test]
fn builtins_are_conjugate_symmetric() {
    run("builtins_are_conjugate_symmetric");
}

#[test]
fn parsed_expressions_match_builtins() {
    run("parsed_expressions_match_builtins");
}

#[test]
fn even_norm_is_reflection_invariant() {
    run("even_norm_is_reflection_invariant");
}

#[test]
fn kernel_derivative_matches_differences() {
    run("kernel_derivative_matches_differences");
}

#[test]
fn kernel_is_conjugate_symmetric() {
    run("kernel_is_conjugate_symmetric");
}

#[test]
fn nystrom_entries_satisfy_cauchy_riemann() {
    run("nystrom_entries_satisfy_cauchy_riemann");
}

#[test]
fn nystrom_matrix_is_symmetric() {
    run("nystrom_matrix_is_symmetric");
}

#[test]
fn refined_roots_are_fresh_and_conjugate_closed() {
    run("refined_roots_are_fresh_and_conjugate_closed");
}
