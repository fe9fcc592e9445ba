use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use twistred::lie::{DiagramAutomorphism, Family, SimpleLieAlgebra};
use twistred::linalg::CMat;
use twistred::product::{CouplingVector, ProductSpace};
use twistred::quantum::*;
use twistred::sample::rng_from_seed;
use twistred::Error;

fn lattice(family: Family, rank: usize) -> WeightLattice {
    WeightLattice::new(&SimpleLieAlgebra::build(family, rank).unwrap()).unwrap()
}

fn w(labels: &[i64]) -> WeightVector {
    WeightVector::new(labels.to_vec())
}

fn dual_coxeter(family: Family, r: usize) -> f64 {
    match family {
        Family::A => (r + 1) as f64,
        Family::B => (2 * r - 1) as f64,
        Family::C => (r + 1) as f64,
        Family::D => (2 * r - 2) as f64,
        Family::G2 => 4.0,
    }
}

const ALGEBRAS: [(Family, usize); 9] = [
    (Family::A, 1),
    (Family::A, 2),
    (Family::A, 3),
    (Family::B, 2),
    (Family::B, 3),
    (Family::C, 3),
    (Family::D, 4),
    (Family::G2, 2),
    (Family::A, 4),
];

#[test]
fn gram_matrix_is_symmetric_and_roots_sum_to_twice_delta() {
    for (f, r) in ALGEBRAS {
        let l = lattice(f, r);
        let g = l.gram();
        assert!((g - g.transpose()).amax() < 1e-14, "{f}{r}");
        let mut two_delta = vec![0i64; r];
        for a in l.positive_roots() {
            for j in 0..r {
                two_delta[j] += a[j];
            }
        }
        assert_eq!(two_delta, vec![2; r]);
        // Long roots have squared length 2.
        let longest = l
            .positive_roots()
            .map(|a| l.inner(a, a))
            .fold(0.0, f64::max);
        assert!((longest - 2.0).abs() < 1e-12);
    }
}

#[test]
fn weyl_dimensions_of_fundamental_representations() {
    let cases: Vec<((Family, usize), Vec<u64>)> = vec![
        ((Family::A, 2), vec![3, 3]),
        ((Family::A, 3), vec![4, 4, 6]),
        ((Family::B, 2), vec![4, 5]),
        ((Family::B, 3), vec![7, 8, 21]),
        ((Family::C, 3), vec![6, 14, 14]),
        ((Family::D, 4), vec![8, 8, 8, 28]),
        ((Family::G2, 2), vec![7, 14]),
    ];
    for ((f, r), mut expected) in cases {
        let l = lattice(f, r);
        let mut dims: Vec<u64> = (0..r)
            .map(|i| {
                let mut labels = vec![0; r];
                labels[i] = 1;
                l.dimension(&w(&labels)).unwrap()
            })
            .collect();
        dims.sort();
        expected.sort();
        assert_eq!(dims, expected, "{f}{r}");
    }
}

#[test]
fn multiplicities_sum_to_weyl_dimension() {
    for (f, r) in ALGEBRAS {
        let l = lattice(f, r);
        let mut rng = rng_from_seed(11);
        for _ in 0..6 {
            let labels: Vec<i64> = (0..r).map(|_| rng.random_range(0..3)).collect();
            let wt = w(&labels);
            let m = l.multiplicities(&wt).unwrap();
            let total: u64 = m.values().sum();
            assert_eq!(total, l.dimension(&wt).unwrap(), "{f}{r} {labels:?}");
            // Weyl-group invariance of the character.
            for (mu, k) in &m {
                let (dom, _) = l.to_dominant(mu);
                assert_eq!(m.get(&dom), Some(k));
            }
        }
    }
}

/// `Sym^a(C³) ⊗ Sym^b(C³*)` character minus `Sym^{a−1} ⊗ Sym^{b−1}`.
fn su3_character(a: i64, b: i64) -> BTreeMap<Vec<i64>, i64> {
    let e = [[1i64, 0], [-1, 1], [0, -1]];
    let sym = |n: i64, sign: i64| -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        for i in 0..=n {
            for j in 0..=(n - i) {
                let k = n - i - j;
                out.push(
                    (0..2)
                        .map(|c| sign * (i * e[0][c] + j * e[1][c] + k * e[2][c]))
                        .collect(),
                );
            }
        }
        out
    };
    let mut ch = BTreeMap::new();
    for (n1, n2, s) in [(a, b, 1), (a - 1, b - 1, -1)] {
        if n1 < 0 || n2 < 0 {
            continue;
        }
        for x in sym(n1, 1) {
            for y in sym(n2, -1) {
                *ch.entry(vec![x[0] + y[0], x[1] + y[1]]).or_insert(0) += s;
            }
        }
    }
    ch.retain(|_, v| *v != 0);
    ch
}

#[test]
fn su3_multiplicities_match_tensor_construction() {
    let l = lattice(Family::A, 2);
    for a in 0..5 {
        for b in 0..5 {
            let lib: BTreeMap<Vec<i64>, i64> = l
                .multiplicities(&w(&[a, b]))
                .unwrap()
                .into_iter()
                .map(|(k, v)| (k, v as i64))
                .collect();
            assert_eq!(lib, su3_character(a, b), "({a},{b})");
        }
    }
}

/// Spin-`j` matrices, `j = m/2`.
fn spin(m: usize) -> [CMat; 3] {
    let j = m as f64 / 2.0;
    let d = m + 1;
    let mut jp = CMat::zeros(d, d);
    let mut jz = CMat::zeros(d, d);
    for a in 0..d {
        let mz = j - a as f64;
        jz[(a, a)] = mz.into();
        if a > 0 {
            jp[(a - 1, a)] = (j * (j + 1.0) - mz * (mz + 1.0)).sqrt().into();
        }
    }
    let jm = jp.adjoint();
    [
        (&jp + &jm) * Complex64::new(0.5, 0.0),
        (&jp - &jm) * Complex64::new(0.0, -0.5),
        jz,
    ]
}

#[test]
fn su2_casimir_matches_brute_force() {
    let l = lattice(Family::A, 1);
    for m in 0..=20usize {
        // T_a = iσ_a/√2 is −tr-orthonormal and acts as i√2·J_a.
        let s = spin(m);
        let mut cas = CMat::zeros(m + 1, m + 1);
        for a in 0..3 {
            let t = &s[a] * Complex64::new(0.0, 2f64.sqrt());
            cas += &t * &t;
        }
        let v = casimir_value(&l, &[w(&[m as i64])], &[1.0]).unwrap();
        let expected = -(m as f64) * (m as f64 + 2.0) / 2.0;
        assert!((v - expected).abs() < 1e-12);
        let resid = (&cas - CMat::identity(m + 1, m + 1) * Complex64::new(v, 0.0)).camax();
        assert!(resid < 1e-12, "m = {m}: {resid}");
    }
}

#[test]
fn casimir_matches_defining_and_adjoint_representations() {
    for (f, r) in ALGEBRAS {
        let alg = SimpleLieAlgebra::build(f, r).unwrap();
        let l = WeightLattice::new(&alg).unwrap();
        // Adjoint: highest root.
        let theta: Vec<i64> = alg.positive_roots()[alg.highest_root()]
            .weight_coords
            .iter()
            .map(|&x| x as i64)
            .collect();
        let d = alg.dim();
        let mut cas = twistred::linalg::RMat::zeros(d, d);
        for a in 0..d {
            cas += alg.ad_basis(a) * alg.ad_basis(a);
        }
        let v = casimir_value(&l, &[w(&theta)], &[1.0]).unwrap();
        assert!((v + 2.0 * dual_coxeter(f, r)).abs() < 1e-12, "{f}{r}");
        let resid = (cas - twistred::linalg::RMat::identity(d, d) * v).amax();
        assert!(resid < 1e-12, "{f}{r} adjoint {resid}");
        if f == Family::A {
            let n = r + 1;
            let mut cm = CMat::zeros(n, n);
            for a in 0..d {
                cm += alg.basis_matrix(a) * alg.basis_matrix(a);
            }
            let mut fund = vec![0; r];
            fund[0] = 1;
            let v = casimir_value(&l, &[w(&fund)], &[1.0]).unwrap();
            let resid = (cm - CMat::identity(n, n) * Complex64::new(v, 0.0)).camax();
            assert!(resid < 1e-12, "{f}{r} defining {resid}");
        }
    }
}

#[test]
fn casimir_is_additive_monotone_and_rejects_non_dominant() {
    let l = lattice(Family::A, 2);
    assert_eq!(
        casimir_value(&l, &[w(&[0, 0]), w(&[0, 0])], &[2.0, 2.0]).unwrap(),
        0.0
    );
    let a = casimir_value(&l, &[w(&[1, 2])], &[3.0]).unwrap();
    let b = casimir_value(&l, &[w(&[0, 1])], &[1.5]).unwrap();
    let ab = casimir_value(&l, &[w(&[1, 2]), w(&[0, 1])], &[3.0, 1.5]).unwrap();
    assert!((a + b - ab).abs() < 1e-14);
    for x in 0..5 {
        for y in 0..5 {
            let v = casimir_value(&l, &[w(&[x, y])], &[1.0]).unwrap();
            assert!(casimir_value(&l, &[w(&[x + 1, y])], &[1.0]).unwrap() < v);
            assert!(casimir_value(&l, &[w(&[x, y + 1])], &[1.0]).unwrap() < v);
        }
    }
    assert!(matches!(
        casimir_value(&l, &[w(&[-1, 0])], &[1.0]),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn weyl_constant_values() {
    assert!((weyl_constant(&lattice(Family::A, 1)) + 0.25).abs() < 1e-14);
    assert!((weyl_constant(&lattice(Family::A, 2)) + 1.0).abs() < 1e-14);
    // Freudenthal–de Vries: (δ,δ) = h∨·dim/12.
    for (f, r) in ALGEBRAS {
        let alg = SimpleLieAlgebra::build(f, r).unwrap();
        let expected = -0.5 * dual_coxeter(f, r) * alg.dim() as f64 / 12.0;
        assert!(
            (weyl_constant(&WeightLattice::new(&alg).unwrap()) - expected).abs() < 1e-12,
            "{f}{r}"
        );
    }
}

/// Invariants in a triple product of su(2) irreps: zero-weight count minus
/// weight-2 count.
fn su2_singlets_by_counting(a: i64, b: i64, c: i64) -> u64 {
    let mut count = [0i64; 2];
    for x in (-a..=a).step_by(2) {
        for y in (-b..=b).step_by(2) {
            for z in (-c..=c).step_by(2) {
                match x + y + z {
                    0 => count[0] += 1,
                    2 => count[1] += 1,
                    _ => {}
                }
            }
        }
    }
    (count[0] - count[1]) as u64
}

#[test]
fn su2_triangle_rule_matches_weight_counting() {
    let l = lattice(Family::A, 1);
    for a in 0..=20 {
        for b in 0..=20 {
            for c in 0..=20 {
                let s = l.singlet_dimension(&w(&[a]), &w(&[b]), &w(&[c])).unwrap();
                assert_eq!(s, su2_singlets_by_counting(a, b, c), "({a},{b},{c})");
            }
        }
    }
    assert_eq!(
        l.singlet_dimension(&w(&[1]), &w(&[1]), &w(&[2])).unwrap(),
        1
    );
    assert_eq!(
        l.singlet_dimension(&w(&[1]), &w(&[1]), &w(&[1])).unwrap(),
        0
    );
    // The general path agrees with the closed form.
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                let rs = l.tensor_multiplicity(&w(&[a]), &w(&[b]), &w(&[c])).unwrap();
                assert_eq!(rs, su2_singlets_by_counting(a, b, c));
            }
        }
    }
}

/// Invariants via the Weyl alternating sum over the product character:
/// `Σ_w ε(w)·mult(wδ − δ)`.
fn su3_singlets_by_characters(ws: [[i64; 2]; 3]) -> i64 {
    let mut prod: BTreeMap<Vec<i64>, i64> = BTreeMap::from([(vec![0, 0], 1)]);
    for x in ws {
        let ch = su3_character(x[0], x[1]);
        let mut next = BTreeMap::new();
        for (p, m) in &prod {
            for (q, n) in &ch {
                *next.entry(vec![p[0] + q[0], p[1] + q[1]]).or_insert(0) += m * n;
            }
        }
        prod = next;
    }
    // W-orbit of δ = (1,1) with signs, minus δ.
    let shifted = [
        ([0, 0], 1),
        ([-2, 1], -1),
        ([1, -2], -1),
        ([-3, 0], 1),
        ([0, -3], 1),
        ([-2, -2], -1),
    ];
    shifted
        .iter()
        .map(|(mu, s)| s * prod.get(&mu.to_vec()).copied().unwrap_or(0))
        .sum()
}

#[test]
fn su3_singlets_match_character_oracle() {
    let l = lattice(Family::A, 2);
    let mut rng = rng_from_seed(5);
    for _ in 0..60 {
        let ws: [[i64; 2]; 3] =
            std::array::from_fn(|_| [rng.random_range(0..4), rng.random_range(0..4)]);
        let s = l
            .singlet_dimension(&w(&ws[0]), &w(&ws[1]), &w(&ws[2]))
            .unwrap();
        assert_eq!(s as i64, su3_singlets_by_characters(ws), "{ws:?}");
    }
    // ν = 0: singlet iff the first two are contragredient.
    for a in 0..4 {
        for b in 0..4 {
            let s = l
                .singlet_dimension(&w(&[b, a]), &w(&[a, b]), &w(&[0, 0]))
                .unwrap();
            assert_eq!(s, 1);
            let t = l
                .singlet_dimension(&w(&[a, b]), &w(&[a, b]), &w(&[0, 0]))
                .unwrap();
            assert_eq!(t, u64::from(a == b));
        }
    }
    assert_eq!(
        l.singlet_dimension(&w(&[1, 1]), &w(&[1, 1]), &w(&[1, 1]))
            .unwrap(),
        2
    );
}

#[test]
fn contragredient_and_twist_composition() {
    let a3 = lattice(Family::A, 3);
    assert_eq!(a3.contragredient(&w(&[1, 2, 3])), w(&[3, 2, 1]));
    let d4 = lattice(Family::D, 4);
    assert_eq!(d4.contragredient(&w(&[1, 2, 3, 4])), w(&[1, 2, 3, 4]));
    let b2 = lattice(Family::B, 2);
    assert_eq!(b2.contragredient(&w(&[2, 5])), w(&[2, 5]));
    assert_eq!(w(&[1, 2, 3]).compose(&[2, 1, 0]), w(&[3, 2, 1]));
}

#[test]
fn spinless_levels_follow_closed_form() {
    let l = lattice(Family::A, 1);
    let levels = enumerate_levels(&l, &[0], &[1.0], &[w(&[0])], 10.0).unwrap();
    let energies: Vec<f64> = levels.iter().map(|x| x.energy).collect();
    let expected: Vec<f64> = (0..6).map(|m| (m * (m + 2)) as f64 / 4.0).collect();
    assert_eq!(energies.len(), expected.len());
    for (a, b) in energies.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-14);
    }
    assert!(levels.iter().all(|x| x.multiplicity == 1));
    assert!(enumerate_levels(&l, &[0], &[1.0], &[w(&[0])], -0.5)
        .unwrap()
        .is_empty());
}

#[test]
fn two_site_chain_forces_equal_weights() {
    let l = lattice(Family::A, 1);
    let levels = enumerate_levels(&l, &[0], &[2.0, 2.0], &[w(&[0]), w(&[0])], 6.0).unwrap();
    for lv in &levels {
        assert_eq!(lv.weights[0], lv.weights[1]);
        let m = lv.weights[0].labels[0] as f64;
        assert!((lv.energy - m * (m + 2.0) / 4.0).abs() < 1e-14);
    }
    assert_eq!(levels.len(), 5);
}

#[test]
fn su2_chain_matches_brute_force() {
    let l = lattice(Family::A, 1);
    let mut rng = rng_from_seed(3);
    for _ in 0..5 {
        let n = rng.random_range(1..4usize);
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
        let lambdas = CouplingVector::normalized(&weights)
            .unwrap()
            .lambdas()
            .to_vec();
        let nu: Vec<i64> = (0..n).map(|_| rng.random_range(0..3)).collect();
        let cutoff = 4.0;
        let levels = enumerate_levels(
            &l,
            &[0],
            &lambdas,
            &nu.iter().map(|&v| w(&[v])).collect::<Vec<_>>(),
            cutoff,
        )
        .unwrap();
        let mut brute = Vec::new();
        let mut idx = vec![0i64; n];
        loop {
            let e: f64 = idx
                .iter()
                .zip(&lambdas)
                .map(|(&m, l)| (m * (m + 2)) as f64 / (4.0 * l))
                .sum();
            let mut mult = 1;
            for k in 0..n {
                mult *= su2_singlets_by_counting(idx[(k + 1) % n], idx[k], nu[k]);
            }
            if e <= cutoff && mult > 0 {
                brute.push((idx.clone(), mult));
            }
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] <= 40 {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        brute.sort();
        let mut got: Vec<(Vec<i64>, u64)> = levels
            .iter()
            .map(|lv| {
                (
                    lv.weights.iter().map(|x| x.labels[0]).collect(),
                    lv.multiplicity,
                )
            })
            .collect();
        got.sort();
        assert_eq!(got, brute);
        assert!(levels.windows(2).all(|p| p[0].energy <= p[1].energy));
    }
}

#[test]
fn levels_are_stable_under_cyclic_relabeling() {
    let l = lattice(Family::A, 2);
    let lambdas = CouplingVector::normalized(&[1.0, 2.0, 1.5])
        .unwrap()
        .lambdas()
        .to_vec();
    let nu = vec![w(&[1, 0]), w(&[0, 1]), w(&[1, 1])];
    let summary = |lv: &[SpectralLevel]| -> Vec<(i64, u64)> {
        let mut v: Vec<(i64, u64)> = lv
            .iter()
            .map(|x| ((x.energy * 1e9).round() as i64, x.multiplicity))
            .collect();
        v.sort();
        v
    };
    let base = enumerate_levels(&l, &[0, 1], &lambdas, &nu, 3.0).unwrap();
    assert!(!base.is_empty());
    let rot_l = vec![lambdas[1], lambdas[2], lambdas[0]];
    let rot_n = vec![nu[1].clone(), nu[2].clone(), nu[0].clone()];
    let rotated = enumerate_levels(&l, &[0, 1], &rot_l, &rot_n, 3.0).unwrap();
    assert_eq!(summary(&base), summary(&rotated));
}

#[test]
fn twisted_single_site_keeps_self_dual_weights() {
    let l = lattice(Family::A, 2);
    let levels = enumerate_levels(&l, &[1, 0], &[1.0], &[w(&[0, 0])], 8.0).unwrap();
    assert!(!levels.is_empty());
    assert!(levels
        .iter()
        .all(|lv| lv.weights[0].labels[0] == lv.weights[0].labels[1]));
    let plain = enumerate_levels(&l, &[0, 1], &[1.0], &[w(&[0, 0])], 8.0).unwrap();
    assert!(plain.len() > levels.len());
}

fn su2_space(lambdas_from: &[f64]) -> ProductSpace {
    let alg = Arc::new(SimpleLieAlgebra::build(Family::A, 1).unwrap());
    let gamma = Arc::new(DiagramAutomorphism::identity(&alg));
    ProductSpace::new(
        alg,
        gamma,
        CouplingVector::normalized(lambdas_from).unwrap(),
    )
    .unwrap()
}

#[test]
fn spin_potential_is_hermitian_and_positive() {
    let mut rng = rng_from_seed(21);
    for n in 1..4usize {
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
        let space = su2_space(&weights);
        for _ in 0..5 {
            let q = space.alcove().sample(&mut rng, 20, 0.9);
            let nu: Vec<u32> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let pot = spin_potential_matrix(&space, &q, &nu).unwrap();
            let h = &pot.matrix;
            assert_eq!(h.nrows(), pot.basis.len());
            if h.nrows() == 0 {
                assert!(nu.iter().sum::<u32>() % 2 == 1);
                continue;
            }
            assert!((h - h.adjoint()).camax() < 1e-10);
            let ev = h.clone().symmetric_eigenvalues();
            assert!(ev.min() >= -1e-10, "{ev}");
            assert!(pot.basis.iter().all(|b| b.iter().sum::<i64>() == 0));
        }
    }
}

#[test]
fn spin_potential_trivial_and_single_site_profiles() {
    let space = su2_space(&[1.0]);
    let alg = space.algebra();
    for nu in [0u32, 2, 4] {
        for q0 in [0.4, 1.3, 2.9, 5.5] {
            let q = vec![q0 / alg.root_covector(0)[0]];
            let pot = spin_potential_matrix(&space, &q, &[nu]).unwrap();
            assert_eq!(pot.matrix.shape(), (1, 1));
            let j = nu as f64 / 2.0;
            let theta = alg.root_angle(0, &q);
            let expected = j * (j + 1.0) / (4.0 * (theta / 2.0).sin().powi(2));
            assert!(
                (pot.matrix[(0, 0)].re - expected).abs() < 1e-10 * (1.0 + expected),
                "ν={nu} q={q0}"
            );
        }
    }
    let odd = spin_potential_matrix(&space, &[1.0], &[1]).unwrap();
    assert_eq!(odd.matrix.shape(), (0, 0));
}

#[test]
fn spin_potential_rejects_unsupported_inputs() {
    let alg = Arc::new(SimpleLieAlgebra::build(Family::A, 2).unwrap());
    let gamma = Arc::new(DiagramAutomorphism::identity(&alg));
    let space = ProductSpace::new(alg, gamma, CouplingVector::normalized(&[1.0]).unwrap()).unwrap();
    let q = space.alcove().base_point().to_vec();
    assert!(matches!(
        spin_potential_matrix(&space, &q, &[0]),
        Err(Error::Unsupported(_))
    ));
    let s2 = su2_space(&[1.0, 1.0]);
    assert!(matches!(
        spin_potential_matrix(&s2, &[1.0], &[0]),
        Err(Error::DimensionMismatch { .. })
    ));
    assert!(matches!(
        spin_potential_matrix(&s2, &[1.0], &[40, 40]),
        Err(Error::CutoffExceeded(_))
    ));
}
