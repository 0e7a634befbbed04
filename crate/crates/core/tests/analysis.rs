mod common;

use common::*;
use fraclap::analysis::*;
use fraclap::grid::build_grid;
use fraclap::nonlinearity::{Density, MeasureSpec, SourceSpec};
use fraclap::operator::assemble_operator;
use fraclap::solver::{solve_approximant, solve_limit, SolverOptions};
use nalgebra::DVector;

#[test]
fn lp_norm_examples() {
    let g = build_grid(-1.0, 1.0, 4).unwrap();
    let one = DVector::from_element(3, 1.0);
    assert!((lp_norm(&one, 1.0, &g).unwrap() - 1.5).abs() < 1e-15);
    assert!((lp_norm(&one, 2.0, &g).unwrap() - 1.5f64.sqrt()).abs() < 1e-15);
    assert!(lp_norm(&one, 0.5, &g).is_err());
    assert!(lp_norm(&DVector::zeros(4), 2.0, &g).is_err());
}

#[test]
fn distribution_and_marcinkiewicz_examples() {
    let g = build_grid(0.0, 1.0, 4).unwrap();
    let u = DVector::from_vec(vec![1.0, 3.0, 2.0]);
    assert_eq!(distribution_function(&u, 2.0, &g).unwrap(), 0.5);
    assert_eq!(distribution_function(&u, 4.0, &g).unwrap(), 0.0);
    assert!(distribution_function(&u, 0.0, &g).is_err());
    // levels 3, 2, 1 with measures 1/4, 1/2, 3/4
    let want = [3.0 * 0.25f64.sqrt(), 2.0 * 0.5f64.sqrt(), 0.75f64.sqrt()]
        .into_iter()
        .fold(0.0, f64::max);
    assert!((marcinkiewicz_norm(&u, 2.0, &g).unwrap() - want).abs() < 1e-15);
}

/// Midpoint rule over D_Omega for the piecewise-linear interpolant.
fn brute_seminorm_sq(u: &DVector<f64>, s1: f64, a: f64, b: f64, m: usize) -> f64 {
    let n = u.len() + 1;
    let h = (b - a) / n as f64;
    let eval = |x: f64| {
        let t = (x - a) / h;
        let k = (t.floor() as usize).min(n - 1);
        let left = if k == 0 { 0.0 } else { u[k - 1] };
        let right = if k + 1 == n { 0.0 } else { u[k] };
        left + (right - left) * (t - k as f64)
    };
    let dx = (b - a) / m as f64;
    let xs: Vec<f64> = (0..m).map(|i| a + (i as f64 + 0.5) * dx).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| eval(x)).collect();
    let sig = 2.0 * s1;
    let mut inner = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                inner += (vs[i] - vs[j]).powi(2) * (xs[i] - xs[j]).abs().powf(-1.0 - sig);
            }
        }
    }
    let outer: f64 = (0..m)
        .map(|i| vs[i] * vs[i] * ((xs[i] - a).powf(-sig) + (b - xs[i]).powf(-sig)) / sig)
        .sum();
    inner * dx * dx + 2.0 * outer * dx
}

#[test]
fn gagliardo_seminorm_of_a_hat_matches_brute_force() {
    let g = build_grid(-1.0, 1.0, 8).unwrap();
    let mut hat = DVector::zeros(g.len());
    hat[3] = 1.0;
    for s1 in [0.125, 0.25] {
        let got = gagliardo_seminorm(&hat, s1, 2.0, &g).unwrap().powi(2);
        let want = brute_seminorm_sq(&hat, s1, -1.0, 1.0, 4000);
        assert!((got / want - 1.0).abs() < 2e-2, "s1 = {s1}: {got} vs {want}");
    }
}

#[test]
fn gagliardo_seminorm_is_homogeneous() {
    let g = build_grid(-1.0, 1.0, 32).unwrap();
    let u = profile(&g, |x| (1.0 - x * x) * (1.0 + x));
    let a = gagliardo_seminorm(&u, 0.3, 2.0, &g).unwrap();
    let b = gagliardo_seminorm(&(&u * -3.0), 0.3, 2.0, &g).unwrap();
    assert!((b - 3.0 * a).abs() < 1e-12 * b);
    assert!(gagliardo_seminorm(&u, 1.0, 2.0, &g).is_err());
}

#[test]
fn energy_certificates_on_canonical_solution() {
    let (p, op) = canonical_l1(128);
    let w = solve_approximant(&p, 8, &op, 1e-10).unwrap();
    let ks = [1.0, 2.0, 4.0, 8.0, 16.0];
    let c = energy_growth_certificate(&w.values, &op, &ks).unwrap();
    assert!(c.pass, "{c:?}");
    assert!(truncation_energy_certificate(&w.values, &op, &ks).unwrap().pass);
}

#[test]
fn energy_growth_rejects_degenerate_input() {
    let (_, op) = canonical_l1(16);
    let w = DVector::from_element(op.dim(), 1.0);
    assert!(energy_growth_certificate(&w, &op, &[1.0, 2.0, 4.0]).is_err());
    assert!(energy_growth_certificate(&-w, &op, &[1.0, 2.0, 4.0, 20.0]).is_err());
}

#[test]
fn energy_is_constant_when_truncation_is_idle() {
    let (_, op) = canonical_l1(64);
    let w = profile(&op.grid, |x| 1.0 - x * x);
    let c = energy_growth_certificate(&w, &op, &[2.0, 4.0, 8.0, 16.0, 32.0]).unwrap();
    assert!(c.pass, "{c:?}");
    assert_eq!(c.get("e(2)"), c.get("e(32)"));
}

#[test]
fn tail_exponent_examples() {
    let g = build_grid(-1.0, 1.0, 64).unwrap();
    // bounded solution: the distribution function vanishes above the max
    let w = profile(&g, |x| 1.0 - x * x);
    let c = tail_exponent_certificate(&w, &g, 0.25, &[0.5, 2.0, 4.0]).unwrap();
    assert!(c.pass);
    assert_eq!(c.get("target_exponent"), 2.0);
    assert_eq!(c.get("critical_exponent_2s_star"), 4.0);
    assert!(matches!(
        tail_exponent_certificate(&w, &g, 0.5, &[0.5, 2.0, 4.0]),
        Err(fraclap::Error::Regime(_))
    ));
}

#[test]
fn tail_exponent_rejects_a_heavy_tail() {
    // |x|^{-0.9} has omega(|w| > k) ~ k^{-1.1}, well short of exponent 2
    let g = build_grid(-1.0, 1.0, 4096).unwrap();
    let w = profile(&g, |x| x.abs().max(1e-6).powf(-0.9));
    let c = tail_exponent_certificate(&w, &g, 0.25, &[2.0, 4.0, 8.0, 16.0]).unwrap();
    assert!(!c.pass, "{c:?}");
}

#[test]
fn envelope_of_exact_powers() {
    let g = build_grid(-1.0, 1.0, 128).unwrap();
    let s = 0.25;
    let pure = DVector::from_iterator(g.len(), g.delta.iter().map(|d| d.powf(s)));
    let c = boundary_envelope_certificate(&pure, &g, s, 2).unwrap();
    assert!((c.get("k1") - 1.0).abs() < 1e-12 && (c.get("k2") - 1.0).abs() < 1e-12);

    let getoor = profile(&g, |x| (1.0 - x * x).powf(s));
    let c = boundary_envelope_certificate(&getoor, &g, s, 2).unwrap();
    assert!(c.pass);
    assert!(c.get("ratio") <= 2f64.powf(s) + 1e-9);
    assert!(boundary_envelope_certificate(&getoor, &g, s, 0).is_err());
}

#[test]
fn entropy_residual_examples() {
    let (p, op) = canonical_l1(128);
    let u = solve_limit(&p, &op, &SolverOptions::default()).unwrap().values;
    assert_eq!(entropy_residual(&u, &u, 1.0, &p, &op).unwrap(), 0.0);
    // phi = 0 with k above max u tests against u itself
    let r = entropy_residual(&u, &DVector::zeros(op.dim()), 1e3, &p, &op).unwrap();
    assert!(r.abs() < 1e-9, "{r}");
    let c = entropy_certificate(&u, &p, &op, 20, 7).unwrap();
    assert!(c.pass, "{c:?}");
}

#[test]
fn entropy_detects_a_wrong_solution() {
    let (p, op) = canonical_l1(128);
    let u = solve_limit(&p, &op, &SolverOptions::default()).unwrap().values;
    let bad = u.map(|x| x * 1.05);
    assert!(!entropy_certificate(&bad, &p, &op, 20, 7).unwrap().pass);
}

#[test]
fn uniqueness_gap_examples() {
    let (_, op) = canonical_l1(32);
    let u = profile(&op.grid, |x| 1.0 - x * x);
    assert_eq!(uniqueness_gap(&u, &u, 1.0, &op).unwrap(), 0.0);
    let v = &u * 2.0;
    let g = uniqueness_gap(&u, &v, 10.0, &op).unwrap();
    assert!(g > 0.0);
    // once k caps the difference, the gap is that of a truncated function
    assert!(uniqueness_gap(&u, &v, 0.1, &op).unwrap() < g);
}

#[test]
fn weak_formulation_flags_perturbed_solution() {
    let (p, op) = canonical_dirac(128);
    let w = solve_approximant(&p, 4, &op, 1e-10).unwrap();
    assert!(weak_formulation_certificate(&w.values, w.level, &p, &op, 1e-10, 3).unwrap().pass);
    let bumped = w.values.map(|x| x + 1e-3);
    assert!(!weak_formulation_certificate(&bumped, w.level, &p, &op, 1e-10, 3).unwrap().pass);
}

#[test]
fn hardy_sobolev_on_smooth_tests() {
    let g = build_grid(-1.0, 1.0, 128).unwrap();
    let phis = seeded_tests(10, 6, 11);
    let c = hardy_sobolev_certificate(&phis, 0.25, 0.5, &g).unwrap();
    assert!(c.pass, "{c:?}");
    assert!(hardy_sobolev_certificate(&phis, 0.75, 1.0, &g).is_err());
}

#[test]
fn hardy_sobolev_ratio_of_a_hat_is_finite() {
    let g = build_grid(-1.0, 1.0, 16).unwrap();
    let mut hat = DVector::zeros(g.len());
    hat[7] = 1.0;
    let sq = 0.125;
    let weighted: f64 = g.h * hat.iter().zip(&g.delta).map(|(x, d)| x * x / d.powf(2.0 * sq)).sum::<f64>();
    let semi = gagliardo_seminorm(&hat, sq, 2.0, &g).unwrap();
    assert!((weighted / (semi * semi)).is_finite());
}

#[test]
fn norm_report_collects_every_requested_norm() {
    let g = build_grid(-1.0, 1.0, 32).unwrap();
    let u = profile(&g, |x| 1.0 - x * x);
    let rep = norm_report(&u, &g, &[1.0, 2.0], &[(0.25, 2.0)], &[2.0]).unwrap();
    assert_eq!(rep.lp.len(), 2);
    assert_eq!(rep.gagliardo.len(), 1);
    assert_eq!(rep.marcinkiewicz.len(), 1);
}

#[test]
fn singular_boundary_source_is_accepted() {
    let mu = MeasureSpec::L1Density {
        density: Density::Constant { value: 0.5 },
    };
    let (mut p, op) = problem(64, mu);
    p.f_spec = SourceSpec {
        kind: fraclap::nonlinearity::SourceKind::BoundarySingular,
        amplitude: 1.0,
        beta: 0.5,
    };
    let w = solve_approximant(&p, 4, &op, 1e-10).unwrap();
    assert!(w.values.min() > 0.0);
    let _ = assemble_operator(&p.grid, 0.25).unwrap();
}
