use std::sync::OnceLock;

use proptest::prelude::*;
use resonance_core::bounds::{convexity_defect, RegionBound};
use resonance_core::locator::{scan, MethodTag, Rect, ScanOptions};
use resonance_core::method_one::{self, MethodOneOptions};
use resonance_core::perturbation::{build_a, build_a_truncated, greens_function, greens_function_dz};
use resonance_core::whole_line::{f_tilde_bound, phi};
use resonance_core::{locator, BoundaryCondition, Complex64, Domain, Error, Potential, Problem};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn nested_regions() -> &'static [RegionBound; 4] {
    static REGIONS: OnceLock<[RegionBound; 4]> = OnceLock::new();
    REGIONS.get_or_init(|| {
        let p = Potential::gaussian_well(c(2.0, 1.0));
        [
            RegionBound::half_planes(&p, 8, 1e-10).unwrap(),
            RegionBound::half_planes(&p, 16, 1e-10).unwrap(),
            RegionBound::ray_ball(&p, 8, 1e-10).unwrap(),
            RegionBound::ray_ball(&p, 16, 1e-10).unwrap(),
        ]
    })
}

fn gaussian_problem(neumann: bool) -> Problem {
    let bc = if neumann { BoundaryCondition::neumann() } else { BoundaryCondition::dirichlet() };
    Problem::half_line(Potential::gaussian(), bc)
}

proptest! {
    #![proptest_config(cases(100))]

    fn method_one_is_independent_of_alpha0(
        re in 0.4f64..2.5, im in -1.0f64..2.5, dre in -0.8f64..0.8, dim in -0.8f64..0.8, neumann in any::<bool>()
    ) {
        let p = gaussian_problem(neumann);
        let z = c(re, im);
        let base = method_one::residual(&p, z, &MethodOneOptions { alpha0: Some(z) });
        let other = method_one::residual(&p, z, &MethodOneOptions { alpha0: Some(z + c(dre, dim)) });
        match (base, other) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).norm() <= 1e-8 * (1.0 + a.norm()), "{} vs {}", a, b),
            (_, Err(Error::RiccatiPole { .. } | Error::SmallDenominator(_))) => {}
            (a, b) => prop_assert!(false, "{:?} {:?}", a, b),
        }
    }

    fn residual_is_conjugate_symmetric(re in 0.3f64..2.5, im in -2.0f64..2.0, neumann in any::<bool>()) {
        let p = gaussian_problem(neumann);
        let z = c(re, im);
        let a = locator::residual(&p, MethodTag::MethodOne, z).unwrap();
        let b = locator::residual(&p, MethodTag::MethodOne, z.conj()).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-9 * (1.0 + a.norm()));
    }

    fn methods_agree(re in 0.4f64..2.5, im in -1.5f64..2.5, neumann in any::<bool>()) {
        let p = gaussian_problem(neumann);
        let z = c(re, im);
        let a = locator::residual(&p, MethodTag::MethodOne, z).unwrap();
        let b = locator::residual(&p, MethodTag::MethodTwo, z).unwrap();
        prop_assert!((a - b).norm() <= 1e-8 * (1.0 + a.norm()), "{} vs {}", a, b);
    }
}

proptest! {
    #![proptest_config(cases(100))]

    fn winding_is_additive(
        zeros in proptest::collection::vec((0.2f64..3.8, -1.8f64..1.8), 0..6),
        depth in 1usize..4
    ) {
        let zs: Vec<Complex64> = zeros.iter().map(|&(a, b)| c(a, b)).collect();
        let f = |z: Complex64| Ok(zs.iter().fold(c(1.0, 0.0), |acc, r| acc * (z - r)) * (0.3 * z).exp());
        let rect = Rect::new((0.1, 3.9), (-1.9, 1.9)).unwrap();
        let rep = match scan(f, &rect, &ScanOptions { depth, ..Default::default() }) {
            Ok(r) => r,
            Err(Error::ZeroOnContour(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(rep.winding, zs.len() as i64);
        for (parent, kids) in &rep.splits {
            prop_assert_eq!(*parent, kids.iter().sum::<i64>());
        }
    }

    fn phi_satisfies_cauchy_riemann(re in 0.3f64..3.0, im in -3.0f64..3.0, depth in 0.5f64..5.0, dim in -2.0f64..2.0) {
        let p = Problem::whole_line(Potential::gaussian_well(c(depth, dim)));
        let z = c(re, im);
        let f = |w: Complex64| phi(&p, w).unwrap().phi;
        let d = |step: Complex64| {
            let h = 0.02 * step;
            (8.0 * (f(z + h) - f(z - h)) - (f(z + 2.0 * h) - f(z - 2.0 * h))) / (12.0 * 0.02)
        };
        let (dx, dy) = (d(c(1.0, 0.0)), d(c(0.0, 1.0)));
        prop_assert!((dy - c(0.0, 1.0) * dx).norm() <= 1e-7 * dx.norm().max(1.0), "{} {}", dx, dy);
    }

    fn phi_is_conjugate_symmetric_for_real_potentials(re in 0.2f64..3.0, im in -3.0f64..3.0, depth in -3.0f64..5.0) {
        let p = Problem::whole_line(Potential::gaussian_well(c(depth, 0.0)));
        let z = c(re, im);
        let a = phi(&p, z).unwrap().phi;
        let b = phi(&p, z.conj()).unwrap().phi;
        prop_assert!((a.conj() - b).norm() <= 1e-10 * (1.0 + a.norm()));
    }

    fn scaled_solution_obeys_its_bound(
        w1 in -3.0f64..3.0, w2 in -3.0f64..3.0, s1 in 0.3f64..3.0, s2 in 0.3f64..3.0, arg in -1.5f64..1.5, excess in 0.05f64..4.0
    ) {
        let pot = Potential::gaussian_sum(vec![(c(w1, 0.0), s1), (c(w2, 0.0), s2)]);
        let l1 = pot.l1_norm(Domain::WholeLine, 1e-12).unwrap();
        let z = Complex64::from_polar(l1 + excess, arg);
        let e = phi(&Problem::whole_line(pot), z).unwrap();
        let bound = f_tilde_bound(z, l1).unwrap();
        prop_assert!(e.f_tilde_sup <= bound * (1.0 + 1e-9), "{} > {}", e.f_tilde_sup, bound);
    }
}

proptest! {
    #![proptest_config(cases(100))]

    fn builtin_support_is_convex(which in 0usize..4, param in 0.0f64..1.0, t1 in 0.0f64..1.2, gap in 0.02f64..0.15) {
        let p = match which {
            0 => Potential::gaussian(),
            1 => Potential::gaussian_well(c(0.5 + 4.0 * param, 0.0)),
            2 => Potential::modified_gaussian(2.0 + 18.0 * param),
            _ => Potential::perturbed_gaussian(1e-3 * param),
        };
        let a: Vec<f64> = [t1, t1 + gap, t1 + 2.0 * gap].iter().map(|&t| p.ray_sup_a(t, 1e-10).unwrap()).collect();
        let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        prop_assert!(convexity_defect(&a) <= 1e-8 * scale, "{:?}", a);
    }

    fn mixture_support_is_subharmonic(w in 0.2f64..4.0, s in 0.3f64..3.0, t1 in 0.0f64..1.2, gap in 0.05f64..0.1) {
        // r² a(θ) is subharmonic in the sector, which is a + a'' ≥ 0
        let p = Potential::gaussian_sum(vec![(c(w, 0.0), s), (c(-0.5 * w, 0.0), 2.0 * s)]);
        let a: Vec<f64> = [t1, t1 + gap, t1 + 2.0 * gap].iter().map(|&t| p.ray_sup_a(t, 1e-12).unwrap()).collect();
        let second = (a[0] + a[2] - 2.0 * a[1]) / (gap * gap);
        // the central difference of a sine is biased low by gap²/12
        prop_assert!(second + a[1] * (1.0 + gap * gap / 12.0) >= -1e-6 * (1.0 + a[1].abs()), "{:?}", a);
    }

    fn grid_refinement_keeps_rejections(re in -3.0f64..3.0, im in -3.0f64..1.0) {
        let [hp8, hp16, rb8, rb16] = nested_regions();
        let l = c(re, im);
        prop_assert!(hp8.contains(l, 1e-9) || !hp16.contains(l, 1e-9));
        prop_assert!(rb8.contains(l, 1e-9) || !rb16.contains(l, 1e-9));
    }
}

proptest! {
    #![proptest_config(cases(200))]

    fn builtins_are_conjugate_symmetric(re in -4.0f64..4.0, im in -4.0f64..4.0, which in 0usize..5) {
        let p = match which {
            0 => Potential::gaussian(),
            1 => Potential::modified_gaussian(10.0),
            2 => Potential::rittby(1.6),
            3 => Potential::perturbed_gaussian(1e-3),
            _ => Potential::gaussian_sum(vec![(c(2.0, 0.0), 1.0), (c(-3.0, 0.0), 2.0)]),
        };
        let w = c(re, im);
        if let (Ok(a), Ok(b)) = (p.eval(w), p.eval(w.conj())) {
            prop_assert!((a.conj() - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }

    fn parsed_expressions_match_builtins(x in -6.0f64..6.0, b in 1.0f64..20.0) {
        let g = Potential::parse_expression("-exp(-x^2)").unwrap();
        prop_assert!((g.eval_real(x) - Potential::gaussian().eval_real(x)).norm() <= 1e-15);
        let m = Potential::parse_expression(&format!("x^2*exp(-x^2/{b:?}^2)")).unwrap();
        let v = Potential::modified_gaussian(b).eval_real(x);
        prop_assert!((m.eval_real(x) - v).norm() <= 1e-13 * (1.0 + v.norm()));
    }

    fn even_norm_is_reflection_invariant(w1 in -3.0f64..3.0, s1 in 0.2f64..3.0, w2 in -3.0f64..3.0, s2 in 0.2f64..3.0) {
        let p = Potential::gaussian_sum(vec![(c(w1, 0.0), s1), (c(w2, 0.0), s2)]);
        let whole = p.l1_norm(Domain::WholeLine, 1e-11).unwrap();
        let half = p.l1_norm(Domain::HalfLine, 1e-11).unwrap();
        prop_assert!((whole - 2.0 * half).abs() <= 1e-9);
    }

    fn kernel_derivative_matches_differences(x in 0.0f64..5.0, y in 0.0f64..5.0, re in 0.3f64..3.0, im in -3.0f64..3.0, a in -2.0f64..2.0, bb in -2.0f64..2.0) {
        prop_assume!(a.abs() + bb.abs() > 0.1);
        let bc = BoundaryCondition::new(a, bb).unwrap();
        let z = c(re, im);
        prop_assume!((bb * z - a).norm() > 0.2);
        let h = 1e-5;
        let g = |w: Complex64| greens_function(Some(&bc), x, y, w).unwrap();
        let fd = (g(z + h) - g(z - h)) / (2.0 * h);
        let exact = greens_function_dz(Some(&bc), x, y, z).unwrap();
        prop_assert!((fd - exact).norm() <= 1e-7 * exact.norm().max(1e-3), "{} vs {}", fd, exact);
    }

    fn kernel_is_conjugate_symmetric(x in 0.0f64..5.0, y in 0.0f64..5.0, re in 0.3f64..3.0, im in -3.0f64..3.0, a in -2.0f64..2.0, bb in -2.0f64..2.0) {
        prop_assume!(a.abs() + bb.abs() > 0.1);
        let bc = BoundaryCondition::new(a, bb).unwrap();
        let z = c(re, im);
        prop_assume!((bb * z - a).norm() > 0.2);
        let g = greens_function(Some(&bc), x, y, z).unwrap();
        let gc = greens_function(Some(&bc), x, y, z.conj()).unwrap();
        prop_assert!((g.conj() - gc).norm() <= 1e-13 * (1.0 + g.norm()));
    }
}

proptest! {
    #![proptest_config(cases(100))]

    fn nystrom_entries_satisfy_cauchy_riemann(re in 0.4f64..2.0, im in -1.5f64..1.5, i in 0usize..24, j in 0usize..24) {
        let p = gaussian_problem(false);
        let z = c(re, im);
        let h = 1e-5;
        let entry = |w: Complex64| build_a_truncated(&p, w, 24, 8.0).unwrap();
        let (xp, xm) = (entry(z + h), entry(z - h));
        let (yp, ym) = (entry(z + c(0.0, h)), entry(z - c(0.0, h)));
        let dx = (xp.matrix[(i, j)] - xm.matrix[(i, j)]) / (2.0 * h);
        let dy = (yp.matrix[(i, j)] - ym.matrix[(i, j)]) / (2.0 * h);
        let centre = entry(z);
        let scale = dx.norm() + centre.matrix[(i, j)].norm();
        prop_assert!((dy - c(0.0, 1.0) * dx).norm() <= 1e-7 * scale, "{} {}", dx, dy);
        prop_assert!((dx - centre.derivative[(i, j)]).norm() <= 1e-7 * scale);
    }

    fn nystrom_matrix_is_symmetric(re in 0.3f64..2.5, im in -2.0f64..2.0, neumann in any::<bool>()) {
        let op = build_a(&gaussian_problem(neumann), c(re, im), 30).unwrap();
        prop_assert!((op.matrix.clone() - op.matrix.transpose()).norm() <= 1e-14 * op.matrix.norm());
    }
}

proptest! {
    #![proptest_config(cases(100))]

    fn refined_roots_are_fresh_and_conjugate_closed(depth in 1.0f64..4.0, offset in -0.05f64..0.05) {
        // whole-line Gaussian wells have a real bound state; approach it from off the axis
        let p = Problem::whole_line(Potential::gaussian_well(c(depth, 0.0)));
        let opts = locator::RefineOptions::default();
        let guess = c(0.9 * depth.sqrt(), 0.2 + offset);
        let r = match locator::solve(&p, MethodTag::Phi, guess, &opts) {
            Ok(r) => r,
            Err(Error::Escaped(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let fresh = locator::residual(&p, MethodTag::Phi, r.z).unwrap().norm();
        prop_assert!(fresh <= opts.tol_res);
        let mirrored = locator::solve(&p, MethodTag::Phi, guess.conj(), &opts).unwrap();
        prop_assert!((mirrored.z - r.z.conj()).norm() <= 1e-8 * (1.0 + r.z.norm()));
    }
}

/// Every property suite by name; each panics on a counterexample.
pub const SUITES: &[(&str, fn())] = &[
    ("method_one_is_independent_of_alpha0", method_one_is_independent_of_alpha0),
    ("residual_is_conjugate_symmetric", residual_is_conjugate_symmetric),
    ("methods_agree", methods_agree),
    ("winding_is_additive", winding_is_additive),
    ("phi_satisfies_cauchy_riemann", phi_satisfies_cauchy_riemann),
    ("phi_is_conjugate_symmetric_for_real_potentials", phi_is_conjugate_symmetric_for_real_potentials),
    ("scaled_solution_obeys_its_bound", scaled_solution_obeys_its_bound),
    ("builtin_support_is_convex", builtin_support_is_convex),
    ("mixture_support_is_subharmonic", mixture_support_is_subharmonic),
    ("grid_refinement_keeps_rejections", grid_refinement_keeps_rejections),
    ("builtins_are_conjugate_symmetric", builtins_are_conjugate_symmetric),
    ("parsed_expressions_match_builtins", parsed_expressions_match_builtins),
    ("even_norm_is_reflection_invariant", even_norm_is_reflection_invariant),
    ("kernel_derivative_matches_differences", kernel_derivative_matches_differences),
    ("kernel_is_conjugate_symmetric", kernel_is_conjugate_symmetric),
    ("nystrom_entries_satisfy_cauchy_riemann", nystrom_entries_satisfy_cauchy_riemann),
    ("nystrom_matrix_is_symmetric", nystrom_matrix_is_symmetric),
    ("refined_roots_are_fresh_and_conjugate_closed", refined_roots_are_fresh_and_conjugate_closed),
];
