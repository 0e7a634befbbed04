mod common;

use common::*;
use fraclap::analysis::{l2_apriori_certificate, level_rhs, weak_formulation_certificate};
use fraclap::grid::{build_grid, compact_subset};
use fraclap::nonlinearity::{Density, HForm, HSpec, MeasureSpec, SourceSpec};
use fraclap::operator::{assemble_operator, bilinear_form, getoor_constant, smallest_eigenvalue};
use fraclap::solver::*;
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn linear_solve_recovers_getoor_profile() {
    let s = 0.25;
    let g = build_grid(-1.0, 1.0, 256).unwrap();
    let op = assemble_operator(&g, s).unwrap();
    let rhs = DVector::from_element(g.len(), getoor_constant(s).unwrap());
    let sol = solve_regularized_weighted(&op, &rhs, 0.5, 0.0, &SolverOptions::default()).unwrap();
    let exact = profile(&g, |x| (1.0 - x * x).powf(s));
    let m = g.len();
    let worst = (2..m - 2)
        .map(|i| (sol.values[i] / exact[i] - 1.0).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-2, "{worst}");
}

#[test]
fn singular_solve_matches_picard_oracle() {
    let g = build_grid(-1.0, 1.0, 128).unwrap();
    let op = assemble_operator(&g, 0.25).unwrap();
    let zero = DVector::zeros(g.len());
    let newton = solve_regularized(&op, &zero, 0.5, 1e-12).unwrap();
    assert!(newton.residual_norm <= 1e-12);

    // oracle: w <- L^{-1} w^{-q}
    let chol = op.cholesky();
    let mut w = chol.solve(&DVector::from_element(g.len(), 1.0));
    for _ in 0..500 {
        let next = chol.solve(&w.map(|x| x.powf(-0.5)));
        let gap = (&next - &w).amax();
        w = next;
        if gap < 1e-14 {
            break;
        }
    }
    assert!(max_abs_diff(&w, &newton.values) < 1e-8);
}

#[test]
fn solution_is_monotone_in_data() {
    let g = build_grid(-1.0, 1.0, 64).unwrap();
    let op = assemble_operator(&g, 0.25).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let g1 = DVector::from_fn(g.len(), |_, _| rng.gen_range(0.0..2.0));
        let g2 = g1.map(|v| v + rng.gen_range(0.0..1.0));
        let w1 = solve_regularized(&op, &g1, 0.5, 1e-11).unwrap();
        let w2 = solve_regularized(&op, &g2, 0.5, 1e-11).unwrap();
        assert!((&w2.values - &w1.values).min() >= -1e-10);
    }
}

#[test]
fn negative_data_is_rejected() {
    let g = build_grid(-1.0, 1.0, 16).unwrap();
    let op = assemble_operator(&g, 0.25).unwrap();
    let mut data = DVector::zeros(g.len());
    data[2] = -1.0;
    assert!(solve_regularized(&op, &data, 0.5, 1e-10).is_err());
}

#[test]
fn constant_h_decouples_the_fixed_point_map() {
    let (mut p, op) = canonical_l1(64);
    p.h_spec = HSpec {
        form: HForm::Constant,
        ..HSpec::canonical(0.5, 2.0)
    };
    p.mu_spec = MeasureSpec::zero();
    let a = fixed_point_map(&p, 3, &DVector::zeros(op.dim()), &op, 1e-11).unwrap();
    let b = fixed_point_map(&p, 3, &DVector::from_element(op.dim(), 5.0), &op, 1e-11).unwrap();
    assert!(max_abs_diff(&a.values, &b.values) < 1e-12);
}

#[test]
fn fixed_point_map_is_positive_and_bounded() {
    let (p, op) = canonical_dirac(64);
    let lambda1 = smallest_eigenvalue(&op, 1e-10).unwrap().lambda1;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 4;
    let bound = phi_l2_bound(&p, n, lambda1).unwrap();
    for _ in 0..10 {
        let v = DVector::from_fn(op.dim(), |_, _| rng.gen_range(0.0..10.0));
        let w = fixed_point_map(&p, n, &v, &op, 1e-10).unwrap();
        assert!(w.values.min() > 0.0);
        assert!(p.grid.h * w.values.norm_squared() <= bound);
    }
}

#[test]
fn picard_over_phi_contracts_on_canonical_dirac_spec() {
    let (p, op) = canonical_dirac(64);
    let (_, gaps) = picard_over_phi(&p, 4, &op, 1e-12, 200).unwrap();
    // observed contraction after the first step
    for pair in gaps[1..].windows(2) {
        assert!(pair[1] < pair[0], "{gaps:?}");
    }
}

#[test]
fn newton_matches_picard_over_phi() {
    let (p, op) = canonical_dirac(128);
    let newton = solve_approximant(&p, 1, &op, 1e-11).unwrap();
    let (picard, _) = picard_over_phi(&p, 1, &op, 1e-13, 200).unwrap();
    assert!(max_abs_diff(&newton.values, &picard.values) <= 1e-8);
}

#[test]
fn approximant_without_data_is_the_regularized_solution() {
    let (mut p, op) = canonical_l1(64);
    p.mu_spec = MeasureSpec::zero();
    p.f_spec = SourceSpec::constant(0.0);
    let w = solve_approximant(&p, 5, &op, 1e-11).unwrap();
    let r = solve_regularized(&op, &DVector::zeros(op.dim()), 0.5, 1e-11).unwrap();
    assert!(max_abs_diff(&w.values, &r.values) < 1e-10);
}

#[test]
fn approximants_stay_above_interior_lower_bound() {
    let (p, op) = canonical_l1(128);
    let v1 = solve_lower_barrier(&p, 1, &op, 1e-11).unwrap();
    let subset = compact_subset(&p.grid, 0.25).unwrap();
    let ck = subset.indices.iter().map(|&i| v1.values[i]).fold(f64::INFINITY, f64::min);
    assert!(ck > 0.0);
    for n in [1, 4, 16] {
        let w = solve_approximant(&p, n, &op, 1e-10).unwrap();
        for &i in &subset.indices {
            assert!(w.values[i] >= ck);
        }
    }
}

#[test]
fn comparison_certificate_on_canonical_spec() {
    let (p, op) = canonical_dirac(128);
    for n in [1, 2, 4] {
        let c = comparison_certificate(&p, n, &op, 0.25, 1e-10).unwrap();
        assert!(c.pass, "{c:?}");
        assert!(c.get("min_w_minus_v") >= -1e-9);
        assert!(c.get("min_vnext_minus_v") >= -1e-9);
    }
}

#[test]
fn comparison_degenerates_without_source() {
    let (mut p, op) = canonical_l1(64);
    p.f_spec = SourceSpec::constant(0.0);
    let c = comparison_certificate(&p, 2, &op, 0.25, 1e-10).unwrap();
    assert!(c.pass);
    assert_eq!(c.get("c_k"), 0.0);
}

#[test]
fn symmetric_data_gives_symmetric_solution() {
    let (p, op) = canonical_dirac(64);
    let w = solve_approximant(&p, 2, &op, 1e-11).unwrap();
    let m = op.dim();
    for i in 0..m {
        assert!((w.values[i] - w.values[m - 1 - i]).abs() < 1e-10);
    }
}

#[test]
fn l1_ladder_is_monotone_and_cauchy() {
    let mu = MeasureSpec::L1Density {
        density: Density::BoundarySingular {
            amplitude: 1.0,
            beta: 0.6,
        },
    };
    let (p, op) = problem(128, mu);
    let rep = approximation_limit(&p, &[1, 2, 4, 8, 16, 32], &op, 1e-10).unwrap();
    assert!(rep.monotone_min.unwrap() >= -1e-9);
    // gaps only collapse once n exceeds the largest nodal density value
    let last = *rep.gaps.last().unwrap();
    assert!(last < 1e-2 * rep.gaps[0], "{:?}", rep.gaps);
}

#[test]
fn idle_truncations_leave_the_ladder_constant() {
    let mu = MeasureSpec::L1Density {
        density: Density::Constant { value: 2.0 },
    };
    let (mut p, op) = problem(64, mu);
    p.f_spec = SourceSpec::constant(0.0);
    let rep = approximation_limit(&p, &[2, 4, 8], &op, 1e-11).unwrap();
    assert!(rep.gaps.iter().all(|&g| g < 1e-10), "{:?}", rep.gaps);
}

#[test]
fn dirac_ladder_has_no_monotone_assertion() {
    let (p, op) = canonical_dirac(64);
    let rep = approximation_limit(&p, &[1, 2, 4, 8], &op, 1e-10).unwrap();
    assert!(rep.monotone_min.is_none());
    assert!(rep.last().values.min() > 0.0);
}

#[test]
fn solutions_satisfy_weak_form_and_l2_bound() {
    let (p, op) = canonical_l1(128);
    let lambda1 = smallest_eigenvalue(&op, 1e-10).unwrap().lambda1;
    for n in [1, 4, 16] {
        let w = solve_approximant(&p, n, &op, 1e-10).unwrap();
        assert!(w.residual_norm <= 1e-10);
        let c = weak_formulation_certificate(&w.values, w.level, &p, &op, 1e-10, 5).unwrap();
        assert!(c.pass, "{c:?}");
        assert!(l2_apriori_certificate(&w.values, &op, lambda1).unwrap().pass);
        // discrete weak form against every nodal test vector
        let rhs = level_rhs(&w.values, w.level, &p).unwrap();
        for i in [0, 40, 126] {
            let mut e = DVector::zeros(op.dim());
            e[i] = 1.0;
            let r = bilinear_form(&op, &w.values, &e).unwrap() - p.grid.h * rhs[i];
            assert!(r.abs() <= 1e-10);
        }
    }
}

#[test]
fn limit_level_solves_untruncated_problem() {
    let (p, op) = canonical_l1(128);
    let u = solve_limit(&p, &op, &SolverOptions::default()).unwrap();
    assert_eq!(u.level, Level::Limit);
    assert!(u.residual_norm <= 1e-10);
    let w32 = solve_approximant(&p, 32, &op, 1e-10).unwrap();
    let w64 = solve_approximant(&p, 64, &op, 1e-10).unwrap();
    // approximants approach the limit from below
    assert!((&u.values - &w64.values).min() >= -1e-9);
    assert!(max_abs_diff(&u.values, &w64.values) < max_abs_diff(&u.values, &w32.values));
}

#[test]
fn continuation_trace_ends_at_zero_shift() {
    let (p, op) = canonical_l1(64);
    let w = solve_approximant(&p, 2, &op, 1e-10).unwrap();
    let trace = &w.continuation_trace;
    assert_eq!(trace[0].0, 1.0);
    assert_eq!(trace.last().unwrap().0, 0.0);
    assert!(trace[trace.len() - 2].0 <= 1e-12 * w.values.max() * 2.0);
}
