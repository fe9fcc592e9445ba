use std::sync::Arc;

use rand::Rng;
use twistred::lie::{AlgebraVector, DiagramAutomorphism, Family, SimpleLieAlgebra};
use twistred::linalg::{c, expm, frobenius, unitarity_defect, CMat};
use twistred::projection::GroupTwist;
use twistred::sample::{random_algebra_vector, random_group_element, rng_from_seed, SeededRng};
use twistred::ym::*;
use twistred::Error;

fn bridge(family: Family, rank: usize, order: usize) -> YmBridge {
    let alg = Arc::new(SimpleLieAlgebra::build(family, rank).unwrap());
    let gamma = Arc::new(if order == 1 {
        DiagramAutomorphism::identity(&alg)
    } else {
        DiagramAutomorphism::standard(&alg, order).unwrap()
    });
    YmBridge::new(alg, gamma)
}

fn random_marks(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    loop {
        let mut m: Vec<f64> = (0..n).map(|_| rng.random_range(0.02..0.98)).collect();
        m.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if m.windows(2).all(|w| w[1] - w[0] > 0.03) {
            return m;
        }
    }
}

/// Random feasible input: charges whose slice image has no `𝒦`-part.
fn random_input(
    b: &YmBridge,
    rng: &mut SeededRng,
    n: usize,
) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>, Vec<f64>) {
    let marks = random_marks(rng, n);
    let space = b.space_for(&marks).unwrap();
    let alg = b.algebra();
    let raw = space.product_from_fn(|_| random_algebra_vector(alg, rng, 1.0));
    let xi = space.project_k_perp(&raw).unwrap();
    let charges = (0..n)
        .map(|k| {
            (xi.component(k) * space.coupling().lambda(k))
                .iter()
                .cloned()
                .collect()
        })
        .collect();
    let chi = space.alcove().sample(rng, 6, 0.1);
    let fixed = space.alcove().fixed_basis();
    let z = nalgebra::DVector::from_fn(fixed.ncols(), |_, _| rng.random_range(-1.0..1.0));
    let p = (fixed * z).iter().cloned().collect();
    (marks, chi, charges, p)
}

fn su_matrix(alg: &SimpleLieAlgebra, rng: &mut SeededRng, scale: f64) -> CMat {
    alg.to_matrix(&random_algebra_vector(alg, rng, scale))
}

#[test]
fn zero_charges_give_constant_cartan_field() {
    let b = bridge(Family::A, 2, 1);
    let marks = vec![0.2, 0.5, 0.9];
    let p = vec![0.3, -0.4];
    let chi = b.space_for(&marks).unwrap().alcove().base_point().to_vec();
    let cfg = b
        .solve_slice(&chi, &marks, &vec![vec![0.0; 8]; 3], &p)
        .unwrap();
    assert!(b.jump_residual(&cfg).unwrap() < 1e-14);
    for e in &cfg.plus_limits {
        assert!((e[0] - p[0]).abs() < 1e-12 && (e[1] - p[1]).abs() < 1e-12);
        assert!(e[2..].iter().all(|v| v.abs() < 1e-12));
    }
    let energy = b.field_energy(&cfg).unwrap();
    assert!((energy - (p[0] * p[0] + p[1] * p[1])).abs() < 1e-12);
    assert!(b.theta_pairing_check(&cfg).unwrap() < 1e-14);
}

#[test]
fn jump_conditions_and_componentwise_form() {
    let mut rng = rng_from_seed(21);
    for (fam, rank, order, n) in [
        (Family::A, 1, 1, 3),
        (Family::A, 2, 1, 2),
        (Family::A, 2, 2, 3),
        (Family::C, 2, 1, 2),
        (Family::D, 4, 3, 2),
    ] {
        let b = bridge(fam, rank, order);
        for _ in 0..5 {
            let (marks, chi, charges, p) = random_input(&b, &mut rng, n);
            let cfg = b.solve_slice(&chi, &marks, &charges, &p).unwrap();
            assert!(
                b.jump_residual(&cfg).unwrap() < 1e-10,
                "{fam:?}{rank} γ^{order}"
            );
            let data = b.correspondence(&cfg).unwrap();
            assert!(b.componentwise_residual(&data) < 1e-10);
            // slice data round trip
            for (a, q) in data.point.p.iter().zip(&p) {
                assert!((a - q).abs() < 1e-10);
            }
            let again = b
                .solve_slice(&data.point.q, &marks, &charges, &data.point.p)
                .unwrap();
            for (x, y) in again
                .plus_limits
                .iter()
                .flatten()
                .zip(cfg.plus_limits.iter().flatten())
            {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn infeasible_charges_are_rejected() {
    let b = bridge(Family::A, 1, 1);
    let marks = vec![0.3, 0.7];
    let chi = b.space_for(&marks).unwrap().alcove().base_point().to_vec();
    let charges = vec![vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]];
    let e = b.solve_slice(&chi, &marks, &charges, &[0.0]).unwrap_err();
    assert!(matches!(e, Error::ConstraintInfeasible(_)));
    assert!(b.solve_slice(&chi, &[0.7, 0.3], &charges, &[0.0]).is_err());
}

#[test]
fn energy_equality_exact_and_by_quadrature() {
    let mut rng = rng_from_seed(22);
    let b = bridge(Family::A, 2, 1);
    for _ in 0..5 {
        let (marks, chi, charges, p) = random_input(&b, &mut rng, 3);
        let cfg = b.solve_slice(&chi, &marks, &charges, &p).unwrap();
        let data = b.correspondence(&cfg).unwrap();
        let jj = data.j.inner_lambda(&data.j, &data.coupling);
        let energy = b.field_energy(&cfg).unwrap();
        assert!((energy - jj).abs() < 1e-12 * (1.0 + jj));
        // finite side: 2·H of the free particle equals 2·H_S
        let space = b.space_for(&marks).unwrap();
        let hs = space.h_s_operator_form(&data.point).unwrap();
        assert!((energy - 2.0 * hs).abs() < 1e-10 * (1.0 + energy));
        // Gauss–Legendre quadrature of ∫⟨E, E⟩ over each interval
        let nodes = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683,
            0.0,
            0.538_469_310_105_683,
            0.906_179_845_938_664,
        ];
        let weights = [
            0.236_926_885_056_189,
            0.478_628_670_499_366,
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
        ];
        let mut edges = vec![marks[2] - 1.0];
        edges.extend(&marks);
        let mut quad = 0.0;
        for k in 0..3 {
            let (lo, hi) = (edges[k], edges[k + 1]);
            let sub = 200;
            for s in 0..sub {
                let (a, bb) = (
                    lo + (hi - lo) * s as f64 / sub as f64,
                    lo + (hi - lo) * (s + 1) as f64 / sub as f64,
                );
                for (t, w) in nodes.iter().zip(&weights) {
                    let x = 0.5 * (a + bb) + 0.5 * (bb - a) * t;
                    let e = b.electric_field(&cfg, x).unwrap();
                    quad += 0.5 * (bb - a) * w * e.norm_squared();
                }
            }
        }
        assert!(
            (quad - energy).abs() < 1e-10 * (1.0 + energy),
            "{quad} vs {energy}"
        );
    }
}

#[test]
fn electric_field_is_quasi_periodic_and_jumps_by_charge() {
    let mut rng = rng_from_seed(23);
    let b = bridge(Family::A, 2, 2);
    let (marks, chi, charges, p) = random_input(&b, &mut rng, 2);
    let cfg = b.solve_slice(&chi, &marks, &charges, &p).unwrap();
    for x in [0.05, 0.4, 0.77] {
        let e0 = b.electric_field(&cfg, x).unwrap();
        let e1 = b.electric_field(&cfg, x + 1.0).unwrap();
        assert!((e1 - b.tau(&e0)).norm() < 1e-12);
    }
    for (k, &m) in marks.iter().enumerate() {
        let jump =
            b.electric_field(&cfg, m + 1e-12).unwrap() - b.electric_field(&cfg, m - 1e-12).unwrap();
        let zeta = AlgebraVector::from_vec(charges[k].clone());
        assert!((jump + zeta).norm() < 1e-9);
    }
}

#[test]
fn theta_pairing_identity() {
    let mut rng = rng_from_seed(24);
    let b = bridge(Family::A, 3, 2);
    for _ in 0..5 {
        let (marks, chi, charges, p) = random_input(&b, &mut rng, 3);
        let cfg = b.solve_slice(&chi, &marks, &charges, &p).unwrap();
        assert!(b.theta_pairing_check(&cfg).unwrap() < 1e-10);
        // jointly rescaled marks: new λ, same identity
        let squeezed: Vec<f64> = marks.iter().map(|m| 0.5 * m + 0.2).collect();
        let cfg2 = b.solve_slice(&chi, &squeezed, &charges, &p).unwrap();
        assert!(b.theta_pairing_check(&cfg2).unwrap() < 1e-10);
    }
}

#[test]
fn field_config_json_round_trip() {
    let mut rng = rng_from_seed(25);
    let b = bridge(Family::A, 1, 1);
    let (marks, chi, charges, p) = random_input(&b, &mut rng, 2);
    let cfg = b.solve_slice(&chi, &marks, &charges, &p).unwrap();
    let s = serde_json::to_string(&cfg).unwrap();
    let back: FieldConfig = serde_json::from_str(&s).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn wilson_line_closed_forms() {
    let alg = SimpleLieAlgebra::build(Family::A, 2).unwrap();
    let xs: Vec<f64> = (0..=8).map(|i| 0.25 * i as f64).collect();
    let zero = ConnectionSample::constant(CMat::zeros(3, 3), GroupTwist::Identity);
    let line = wilson_line(&zero, &xs, WilsonTolerance::default()).unwrap();
    assert!(line
        .ys
        .iter()
        .all(|y| frobenius(&(y - CMat::identity(3, 3))) < 1e-14));

    let mut rng = rng_from_seed(26);
    let chi = su_matrix(&alg, &mut rng, 1.5);
    let a = ConnectionSample::constant(chi.clone(), GroupTwist::Identity);
    let line = wilson_line(&a, &xs, WilsonTolerance::default()).unwrap();
    for (x, y) in xs.iter().zip(&line.ys) {
        assert!(frobenius(&(y - expm(&(&chi * c(*x))))) < 1e-10);
        assert!(unitarity_defect(y) < 1e-9);
    }
}

#[test]
fn wilson_line_piecewise_constant_product() {
    let alg = SimpleLieAlgebra::build(Family::A, 1).unwrap();
    let mut rng = rng_from_seed(27);
    for _ in 0..5 {
        let breaks = vec![0.2, 0.45, 0.8];
        let values: Vec<CMat> = (0..4).map(|_| su_matrix(&alg, &mut rng, 3.0)).collect();
        let a = ConnectionSample::piecewise_constant(
            breaks.clone(),
            values.clone(),
            GroupTwist::Identity,
        )
        .unwrap();
        let line = wilson_line(&a, &[1.0], WilsonTolerance::default()).unwrap();
        let mut edges = vec![0.0];
        edges.extend(&breaks);
        edges.push(1.0);
        let mut expect = CMat::identity(2, 2);
        for k in 0..4 {
            expect *= expm(&(&values[k] * c(edges[k + 1] - edges[k])));
        }
        assert!(frobenius(&(&line.ys[0] - expect)) < 1e-10);
    }
}

#[test]
fn wilson_line_meets_requested_tolerance() {
    let alg = SimpleLieAlgebra::build(Family::A, 1).unwrap();
    let mut rng = rng_from_seed(28);
    let (p, q) = (
        su_matrix(&alg, &mut rng, 1.0),
        su_matrix(&alg, &mut rng, 1.0),
    );
    let f = move |x: f64| &p * c((3.0 * x).cos()) + &q * c(x * x);
    let a = ConnectionSample::from_fn(f, GroupTwist::Identity);
    let reference = wilson_line(
        &a,
        &[1.0],
        WilsonTolerance {
            tol: 1e-15,
            min_step: 1e-12,
            unitarity: 1e-9,
        },
    )
    .unwrap()
    .ys[0]
        .clone();
    let loose = |tol| {
        wilson_line(
            &a,
            &[1.0],
            WilsonTolerance {
                tol,
                min_step: 1e-12,
                unitarity: 1e-9,
            },
        )
        .unwrap()
        .ys[0]
            .clone()
    };
    let e1 = frobenius(&(loose(1e-8) - &reference));
    assert!(e1 < 1e-7, "{e1}");
}

#[test]
fn wilson_line_quasi_monodromy() {
    let alg = SimpleLieAlgebra::build(Family::A, 2).unwrap();
    let mut rng = rng_from_seed(29);
    for twist in [GroupTwist::Identity, GroupTwist::Conjugation] {
        let (p, q) = (
            su_matrix(&alg, &mut rng, 1.0),
            su_matrix(&alg, &mut rng, 1.0),
        );
        let pieces: Vec<Arc<dyn Fn(f64) -> CMat + Send + Sync>> = vec![
            Arc::new({
                let p = p.clone();
                move |x: f64| &p * c((5.0 * x).sin())
            }),
            Arc::new(move |x: f64| &q * c(1.0 + x)),
        ];
        let a = ConnectionSample::new(vec![0.4], pieces, twist).unwrap();
        let xs = [0.1, 0.3, 0.6, 0.9, 1.0, 1.1, 1.3, 1.6, 1.9];
        let line = wilson_line(&a, &xs, WilsonTolerance::default()).unwrap();
        let y1 = &line.ys[4];
        for i in 0..4 {
            let lhs = &line.ys[5 + i];
            let rhs = y1 * twist.apply(&line.ys[i]);
            assert!(frobenius(&(lhs - rhs)) < 1e-9, "{twist:?}");
        }
    }
}

#[test]
fn wilson_line_gauge_covariance() {
    let alg = SimpleLieAlgebra::build(Family::A, 1).unwrap();
    let mut rng = rng_from_seed(30);
    let p = su_matrix(&alg, &mut rng, 1.0);
    let v = su_matrix(&alg, &mut rng, 1.0);
    let g0 = random_group_element(&alg, &mut rng, 1.0);
    // periodic gauge g(x) = g0 e^{sin(2πx) V}; A^g = gAg⁻¹ − g′g⁻¹
    let tau = 2.0 * std::f64::consts::PI;
    let a_fn = {
        let p = p.clone();
        move |x: f64| &p * c(1.0 + x)
    };
    let g = {
        let (g0, v) = (g0.clone(), v.clone());
        move |x: f64| &g0 * expm(&(&v * c((tau * x).sin())))
    };
    let a = ConnectionSample::from_fn(a_fn.clone(), GroupTwist::Identity);
    let ag = ConnectionSample::from_fn(
        {
            let (g, v, g0) = (g.clone(), v.clone(), g0.clone());
            move |x: f64| {
                let gx = g(x);
                let dg = &g0 * &v * expm(&(&v * c((tau * x).sin()))) * c(tau * (tau * x).cos());
                &gx * a_fn(x) * gx.adjoint() - dg * gx.adjoint()
            }
        },
        GroupTwist::Identity,
    );
    let y = wilson_line(&a, &[1.0], WilsonTolerance::default())
        .unwrap()
        .ys[0]
        .clone();
    let yg = wilson_line(&ag, &[1.0], WilsonTolerance::default())
        .unwrap()
        .ys[0]
        .clone();
    assert!(frobenius(&(yg - &g0 * y * g0.adjoint())) < 1e-9);
}

#[test]
fn gauge_to_constant_properties() {
    let alg = Arc::new(SimpleLieAlgebra::build(Family::A, 1).unwrap());
    let mut rng = rng_from_seed(31);
    // already constant in the alcove
    let chi = vec![1.3];
    let chi_m = alg.to_matrix(&alg.cartan_element(&chi));
    let fixing = gauge_to_constant(
        alg.clone(),
        &ConnectionSample::constant(chi_m, GroupTwist::Identity),
        &[0.3, 0.7],
        WilsonTolerance::default(),
    )
    .unwrap();
    assert!((fixing.chi[0] - 1.3).abs() < 1e-10);
    for gx in &fixing.gauge {
        for i in 0..2 {
            for j in 0..2 {
                if i != j {
                    assert!(gx[(i, j)].norm() < 1e-9);
                }
            }
        }
    }

    // random smooth connection
    let (p, q) = (
        su_matrix(&alg, &mut rng, 1.5),
        su_matrix(&alg, &mut rng, 1.5),
    );
    let f = {
        let (p, q) = (p.clone(), q.clone());
        move |x: f64| &p * c((4.0 * x).cos()) + &q * c(x)
    };
    let a = ConnectionSample::from_fn(f.clone(), GroupTwist::Identity);
    let h = 1e-5;
    let xs: Vec<f64> = [0.2, 0.5, 0.8]
        .iter()
        .flat_map(|&x| [x - h, x, x + h])
        .collect();
    let fix = gauge_to_constant(alg.clone(), &a, &xs, WilsonTolerance::default()).unwrap();
    for i in 0..3 {
        let (gm, g, gp) = (
            &fix.gauge[3 * i],
            &fix.gauge[3 * i + 1],
            &fix.gauge[3 * i + 2],
        );
        let dg = (gp - gm) * c(0.5 / h);
        let lhs = g * f(xs[3 * i + 1]) * g.adjoint() - dg * g.adjoint();
        assert!(frobenius(&(lhs - &fix.chi_matrix)) < 1e-8);
    }
    // quasi-periodicity g(x + 1) = g(x)
    let per = gauge_to_constant(alg.clone(), &a, &[0.3, 1.3], WilsonTolerance::default()).unwrap();
    assert!(frobenius(&(&per.gauge[0] - &per.gauge[1])) < 1e-9);

    // gauge-transformed connection has the same alcove χ
    let v = su_matrix(&alg, &mut rng, 1.0);
    let g0 = random_group_element(&alg, &mut rng, 1.0);
    let tau = 2.0 * std::f64::consts::PI;
    let ag = ConnectionSample::from_fn(
        move |x: f64| {
            let gx = &g0 * expm(&(&v * c((tau * x).sin())));
            let dg = &g0 * &v * expm(&(&v * c((tau * x).sin()))) * c(tau * (tau * x).cos());
            &gx * f(x) * gx.adjoint() - dg * gx.adjoint()
        },
        GroupTwist::Identity,
    );
    let fix2 = gauge_to_constant(alg.clone(), &ag, &[0.5], WilsonTolerance::default()).unwrap();
    assert!((fix2.chi[0] - fix.chi[0]).abs() < 1e-9);

    let tw = ConnectionSample::constant(CMat::zeros(2, 2), GroupTwist::Conjugation);
    assert!(matches!(
        gauge_to_constant(alg, &tw, &[0.5], WilsonTolerance::default()),
        Err(Error::Unsupported(_))
    ));
}
