//! Peter–Weyl spectrum of the reduced quantum Hamiltonian.
//!
//! Weights are stored in fundamental-weight coordinates (Dynkin labels). The
//! bilinear form on weights is the one dual to `κ`, normalized so that long
//! roots have squared length 2; for `su(n)` this agrees with `κ = tr`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{Family, SimpleLieAlgebra};
use crate::linalg::{CMat, RMat};
use crate::product::ProductSpace;

/// Largest weight system expanded by the Racah–Speiser path.
pub const MAX_WEIGHT_SPACE: u64 = 250_000;
/// Largest number of weight tuples visited by [`enumerate_levels`].
pub const MAX_TUPLES: usize = 2_000_000;
/// Largest tensor-product dimension accepted by [`spin_potential_matrix`].
pub const MAX_SPIN_DIM: usize = 1024;

/// A dominant integral weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector {
    pub labels: Vec<i64>,
}

impl WeightVector {
    pub fn new(labels: Vec<i64>) -> Self {
        WeightVector { labels }
    }
    pub fn zero(rank: usize) -> Self {
        WeightVector {
            labels: vec![0; rank],
        }
    }
    pub fn is_dominant(&self) -> bool {
        self.labels.iter().all(|&l| l >= 0)
    }
    pub fn is_zero(&self) -> bool {
        self.labels.iter().all(|&l| l == 0)
    }
    /// `Λ∘γ′` for the diagram permutation `perm`.
    pub fn compose(&self, perm: &[usize]) -> Self {
        WeightVector {
            labels: perm.iter().map(|&p| self.labels[p]).collect(),
        }
    }
    pub fn label_string(&self) -> String {
        let s: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        s.join(" ")
    }
}

/// Weight-lattice data of a simple algebra.
#[derive(Debug, Clone)]
pub struct WeightLattice {
    family: Family,
    rank: usize,
    /// `cartan[i][j] = ⟨α_i∨, α_j⟩`.
    cartan: Vec<Vec<i64>>,
    /// Half squared root lengths; 1 for long roots.
    half_len: Vec<f64>,
    /// Gram matrix of fundamental weights.
    gram: RMat,
    /// Positive roots: (simple coordinates, Dynkin labels).
    roots: Vec<(Vec<i64>, Vec<i64>)>,
}

impl WeightLattice {
    pub fn new(alg: &SimpleLieAlgebra) -> Result<Self> {
        let r = alg.rank();
        let cartan: Vec<Vec<i64>> = alg
            .cartan_matrix()
            .iter()
            .map(|row| row.iter().map(|&a| a as i64).collect())
            .collect();

        // Symmetrize: (α_i, α_j) = A_ij·D_i.
        let mut half_len = vec![0.0; r];
        half_len[0] = 1.0;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for j in 0..r {
                if j != i && cartan[i][j] != 0 && half_len[j] == 0.0 {
                    half_len[j] = half_len[i] * cartan[i][j] as f64 / cartan[j][i] as f64;
                    stack.push(j);
                }
            }
        }
        let top = half_len.iter().cloned().fold(0.0, f64::max);
        half_len.iter_mut().for_each(|d| *d /= top);

        let a = RMat::from_fn(r, r, |i, j| cartan[i][j] as f64);
        let inv = a
            .try_inverse()
            .ok_or_else(|| Error::Numerical("singular Cartan matrix".into()))?;
        // (ω_i, ω_k) = (A⁻¹)_{ik}·D_i
        let gram = RMat::from_fn(r, r, |i, k| inv[(i, k)] * half_len[i]);

        let roots = alg
            .positive_roots()
            .iter()
            .map(|p| {
                (
                    p.simple_coords.iter().map(|&c| c as i64).collect(),
                    p.weight_coords.iter().map(|&c| c as i64).collect(),
                )
            })
            .collect();
        Ok(WeightLattice {
            family: alg.family(),
            rank: r,
            cartan,
            half_len,
            gram,
            roots,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn family(&self) -> Family {
        self.family
    }
    pub fn gram(&self) -> &RMat {
        &self.gram
    }
    pub fn half_lengths(&self) -> &[f64] {
        &self.half_len
    }
    /// Positive roots in Dynkin labels.
    pub fn positive_roots(&self) -> impl Iterator<Item = &[i64]> {
        self.roots.iter().map(|(_, w)| w.as_slice())
    }

    /// `δ` as Dynkin labels (all ones).
    pub fn weyl_vector(&self) -> WeightVector {
        WeightVector {
            labels: vec![1; self.rank],
        }
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rank {
            for k in 0..self.rank {
                s += a[i] as f64 * self.gram[(i, k)] * b[k] as f64;
            }
        }
        s
    }

    fn check(&self, w: &WeightVector) -> Result<()> {
        if w.labels.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: w.labels.len(),
            });
        }
        if !w.is_dominant() {
            return Err(Error::InvalidInput(format!(
                "weight ({}) is not dominant",
                w.label_string()
            )));
        }
        Ok(())
    }

    /// `(Λ, Λ + 2δ)`.
    pub fn casimir_form(&self, w: &WeightVector) -> f64 {
        let shifted: Vec<i64> = w.labels.iter().map(|l| l + 2).collect();
        self.inner(&w.labels, &shifted)
    }

    /// Weyl dimension formula.
    pub fn dimension(&self, w: &WeightVector) -> Result<u64> {
        self.check(w)?;
        let mut d = 1.0;
        for (simple, _) in &self.roots {
            // (μ, α) = Σ_j c_j μ_j D_j for α = Σ c_j α_j
            let pair = |mu: &dyn Fn(usize) -> f64| -> f64 {
                (0..self.rank)
                    .map(|j| simple[j] as f64 * mu(j) * self.half_len[j])
                    .sum()
            };
            d *= pair(&|j| w.labels[j] as f64 + 1.0) / pair(&|_| 1.0);
        }
        Ok(d.round() as u64)
    }

    /// Reflects a weight into the dominant chamber. Returns the dominant
    /// representative and the parity of the Weyl element used.
    pub fn to_dominant(&self, w: &[i64]) -> (Vec<i64>, bool) {
        let mut mu = w.to_vec();
        let mut odd = false;
        while let Some(i) = mu.iter().position(|&m| m < 0) {
            let mi = mu[i];
            for j in 0..self.rank {
                mu[j] -= mi * self.cartan[j][i];
            }
            odd = !odd;
        }
        (mu, odd)
    }

    /// `Λ* = −w₀Λ`.
    pub fn contragredient(&self, w: &WeightVector) -> WeightVector {
        let neg: Vec<i64> = w.labels.iter().map(|l| -l).collect();
        WeightVector {
            labels: self.to_dominant(&neg).0,
        }
    }

    /// Weight multiplicities of `V_Λ` by Freudenthal's recursion.
    pub fn multiplicities(&self, w: &WeightVector) -> Result<BTreeMap<Vec<i64>, u64>> {
        let dim = self.dimension(w)?;
        if dim > MAX_WEIGHT_SPACE {
            return Err(Error::CutoffExceeded(format!(
                "representation ({}) has dimension {dim} > {MAX_WEIGHT_SPACE}",
                w.label_string()
            )));
        }
        let r = self.rank;
        let delta = vec![1i64; r];
        let top: Vec<i64> = w.labels.iter().map(|l| l + 1).collect();
        let norm_top = self.inner(&top, &top);

        let mut mult: HashMap<Vec<i64>, u64> = HashMap::new();
        mult.insert(w.labels.clone(), 1);
        let mut layer = vec![w.labels.clone()];
        let mut total = 1u64;
        let mut depth = 0i64;
        while !layer.is_empty() && total < dim {
            depth += 1;
            let mut candidates: Vec<Vec<i64>> = Vec::new();
            for mu in &layer {
                for i in 0..r {
                    let nu: Vec<i64> = (0..r).map(|j| mu[j] - self.cartan[j][i]).collect();
                    candidates.push(nu);
                }
            }
            candidates.sort();
            candidates.dedup();
            let mut next = Vec::new();
            for mu in candidates {
                if mult.contains_key(&mu) {
                    continue;
                }
                let shifted: Vec<i64> = mu.iter().zip(&delta).map(|(a, b)| a + b).collect();
                let denom = norm_top - self.inner(&shifted, &shifted);
                if denom <= 1e-9 {
                    continue;
                }
                let mut num = 0.0;
                for (simple, alpha) in &self.roots {
                    let height: i64 = simple.iter().sum();
                    let mut k = 1;
                    while k * height <= depth {
                        let up: Vec<i64> = (0..r).map(|j| mu[j] + k * alpha[j]).collect();
                        if let Some(&m) = mult.get(&up) {
                            num += m as f64 * self.inner(&up, alpha);
                        }
                        k += 1;
                    }
                }
                let m = (2.0 * num / denom).round();
                if m >= 1.0 {
                    mult.insert(mu.clone(), m as u64);
                    total += m as u64;
                    next.push(mu);
                }
            }
            layer = next;
        }
        if total != dim {
            return Err(Error::Numerical(format!(
                "weight multiplicities of ({}) sum to {total}, expected {dim}",
                w.label_string()
            )));
        }
        Ok(mult.into_iter().collect())
    }

    /// Multiplicity of `V_c` in `V_a ⊗ V_b` (Racah–Speiser).
    pub fn tensor_multiplicity(
        &self,
        a: &WeightVector,
        b: &WeightVector,
        c: &WeightVector,
    ) -> Result<u64> {
        self.check(a)?;
        self.check(c)?;
        let weights = self.multiplicities(b)?;
        let mut count: i64 = 0;
        for (mu, m) in &weights {
            let nu: Vec<i64> = (0..self.rank).map(|j| a.labels[j] + mu[j] + 1).collect();
            let (dom, odd) = self.to_dominant(&nu);
            if dom.iter().any(|&l| l == 0) {
                continue;
            }
            if dom.iter().zip(&c.labels).all(|(d, cl)| d - 1 == *cl) {
                count += if odd { -(*m as i64) } else { *m as i64 };
            }
        }
        if count < 0 {
            return Err(Error::Numerical(format!(
                "negative tensor multiplicity {count}"
            )));
        }
        Ok(count as u64)
    }

    /// `dim (V_a ⊗ V_b ⊗ V_c)^G`.
    pub fn singlet_dimension(
        &self,
        a: &WeightVector,
        b: &WeightVector,
        c: &WeightVector,
    ) -> Result<u64> {
        for w in [a, b, c] {
            self.check(w)?;
        }
        if self.family == Family::A && self.rank == 1 {
            let (x, y, z) = (a.labels[0], b.labels[0], c.labels[0]);
            return Ok(u64::from(
                (x - y).abs() <= z && z <= x + y && (x + y + z) % 2 == 0,
            ));
        }
        // Expand the smallest factor's weight system.
        let mut ws = [a, b, c];
        let dims: Vec<u64> = ws
            .iter()
            .map(|w| self.dimension(w))
            .collect::<Result<_>>()?;
        let smallest = (0..3).min_by_key(|&i| (dims[i], i)).unwrap_or(0);
        ws.swap(1, smallest);
        let target = self.contragredient(ws[2]);
        self.tensor_multiplicity(ws[0], ws[1], &target)
    }

    /// All dominant `Λ` with `(Λ, Λ+2δ) ≤ bound`, in label order.
    pub fn dominant_below(&self, bound: f64) -> Result<Vec<WeightVector>> {
        let mut out = Vec::new();
        if bound < 0.0 {
            return Ok(out);
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![vec![0i64; self.rank]];
        seen.insert(stack[0].clone());
        while let Some(w) = stack.pop() {
            out.push(WeightVector::new(w.clone()));
            if out.len() > MAX_TUPLES {
                return Err(Error::CutoffExceeded(format!(
                    "more than {MAX_TUPLES} weights below {bound}"
                )));
            }
            for i in 0..self.rank {
                let mut n = w.clone();
                n[i] += 1;
                let v = WeightVector::new(n.clone());
                if self.casimir_form(&v) <= bound + 1e-12 && seen.insert(n.clone()) {
                    stack.push(n);
                }
            }
        }
        out.sort();
        Ok(out)
    }
}

/// `−Σ_k λ_k⁻¹ (Λ_k + 2δ, Λ_k)`.
pub fn casimir_value(
    lattice: &WeightLattice,
    weights: &[WeightVector],
    lambdas: &[f64],
) -> Result<f64> {
    if weights.len() != lambdas.len() {
        return Err(Error::DimensionMismatch {
            expected: lambdas.len(),
            got: weights.len(),
        });
    }
    let mut s = 0.0;
    for (w, l) in weights.iter().zip(lambdas) {
        lattice.check(w)?;
        s -= lattice.casimir_form(w) / l;
    }
    Ok(s)
}

/// `𝒞 = −½(δ, δ)`.
pub fn weyl_constant(lattice: &WeightLattice) -> f64 {
    let d = lattice.weyl_vector();
    -0.5 * lattice.inner(&d.labels, &d.labels)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralLevel {
    pub weights: Vec<WeightVector>,
    /// `−½C₂`.
    pub energy: f64,
    pub multiplicity: u64,
}

/// Levels with energy at most `cutoff`, sorted by energy then labels.
pub fn enumerate_levels(
    lattice: &WeightLattice,
    gamma_perm: &[usize],
    lambdas: &[f64],
    nu: &[WeightVector],
    cutoff: f64,
) -> Result<Vec<SpectralLevel>> {
    let n = lambdas.len();
    if n == 0 || nu.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n.max(1),
            got: nu.len(),
        });
    }
    if gamma_perm.len() != lattice.rank {
        return Err(Error::DimensionMismatch {
            expected: lattice.rank,
            got: gamma_perm.len(),
        });
    }
    for w in nu {
        lattice.check(w)?;
    }
    if !cutoff.is_finite() {
        return Err(Error::InvalidInput("energy cutoff must be finite".into()));
    }
    // Per-factor candidates with their energies ½λ_k⁻¹(Λ, Λ+2δ).
    let mut cands: Vec<Vec<(WeightVector, f64)>> = Vec::with_capacity(n);
    for &l in lambdas {
        let list = lattice.dominant_below(2.0 * l * cutoff)?;
        let mut with_e: Vec<(WeightVector, f64)> = list
            .into_iter()
            .map(|w| {
                let e = 0.5 * lattice.casimir_form(&w) / l;
                (w, e)
            })
            .collect();
        // Ascending energy, so exceeding the cutoff ends the scan of a factor.
        with_e.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        cands.push(with_e);
    }
    let mut min_rest = vec![0.0; n + 1];
    for k in (0..n).rev() {
        let m = cands[k].iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        min_rest[k] = min_rest[k + 1] + if m.is_finite() { m } else { 0.0 };
    }
    if cands.iter().any(|c| c.is_empty()) {
        return Ok(Vec::new());
    }

    let mut cache: HashMap<(WeightVector, WeightVector, WeightVector), u64> = HashMap::new();
    let mut singlet = |a: &WeightVector, b: &WeightVector, c: &WeightVector| -> Result<u64> {
        let key = (a.clone(), b.clone(), c.clone());
        if let Some(&v) = cache.get(&key) {
            return Ok(v);
        }
        let v = lattice.singlet_dimension(a, b, c)?;
        cache.insert(key, v);
        Ok(v)
    };

    let mut levels = Vec::new();
    let mut visited = 0usize;
    let mut idx = vec![0usize; n];
    let mut depth = 0usize;
    let mut energy = vec![0.0; n + 1];
    // Iterative depth-first product with energy pruning.
    loop {
        if idx[depth] >= cands[depth].len()
            || energy[depth] + cands[depth][idx[depth]].1 + min_rest[depth + 1] > cutoff + 1e-12
        {
            if depth == 0 {
                break;
            }
            depth -= 1;
            idx[depth] += 1;
            continue;
        }
        energy[depth + 1] = energy[depth] + cands[depth][idx[depth]].1;
        if depth + 1 < n {
            depth += 1;
            idx[depth] = 0;
            continue;
        }
        visited += 1;
        if visited > MAX_TUPLES {
            return Err(Error::CutoffExceeded(format!(
                "more than {MAX_TUPLES} weight tuples below {cutoff}"
            )));
        }
        let ws: Vec<WeightVector> = (0..n).map(|k| cands[k][idx[k]].0.clone()).collect();
        let mut mult = 1u64;
        for k in 0..n {
            let left = if k + 1 < n {
                lattice.contragredient(&ws[k + 1])
            } else {
                lattice.contragredient(&ws[0]).compose(gamma_perm)
            };
            mult *= singlet(&left, &ws[k], &nu[k])?;
            if mult == 0 {
                break;
            }
        }
        if mult > 0 {
            levels.push(SpectralLevel {
                weights: ws,
                energy: energy[n],
                multiplicity: mult,
            });
        }
        idx[depth] += 1;
    }
    levels.sort_by(|a, b| {
        a.energy
            .total_cmp(&b.energy)
            .then_with(|| a.weights.cmp(&b.weights))
    });
    Ok(levels)
}

/// Spin matrices `(J_x, J_y, J_z)` of the `su(2)` irrep with Dynkin label `m`,
/// basis ordered by decreasing weight.
pub fn spin_matrices(m: usize) -> [CMat; 3] {
    let j = m as f64 / 2.0;
    let d = m + 1;
    let mut jp = CMat::zeros(d, d);
    let mut jz = CMat::zeros(d, d);
    for a in 0..d {
        let mz = j - a as f64;
        jz[(a, a)] = Complex64::new(mz, 0.0);
        if a > 0 {
            jp[(a - 1, a)] = Complex64::new((j * (j + 1.0) - mz * (mz + 1.0)).sqrt(), 0.0);
        }
    }
    let jm = jp.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let jx = (&jp + &jm) * half;
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    [jx, jy, jz]
}

/// `ρ_m(X)` for `X ∈ su(2)` given as a 2×2 anti-Hermitian matrix.
fn su2_rep(x: &CMat, spins: &[CMat; 3]) -> CMat {
    let i = Complex64::i();
    let sigma = [
        CMat::from_row_slice(2, 2, &[0.0.into(), 1.0.into(), 1.0.into(), 0.0.into()]),
        CMat::from_row_slice(2, 2, &[0.0.into(), -i, i, 0.0.into()]),
        CMat::from_row_slice(2, 2, &[1.0.into(), 0.0.into(), 0.0.into(), (-1.0).into()]),
    ];
    let d = spins[0].nrows();
    let mut out = CMat::zeros(d, d);
    for a in 0..3 {
        let xa = i * (x * &sigma[a]).trace();
        out += &spins[a] * (-i * xa);
    }
    out
}

/// The spin potential on the `K`-invariant subspace of `V_ν = ⊗_k V_{ν_k}`.
#[derive(Debug, Clone)]
pub struct SpinPotential {
    /// Basis of `V_ν^K`: per-factor weights (Dynkin, from `ν_k` down to `−ν_k`).
    pub basis: Vec<Vec<i64>>,
    pub matrix: CMat,
}

/// Assembles `½Σ G^{ab} F_a F_b` on `V_ν^K` for `su(2)`, `γ = id`, where
/// `F_a = iρ_ν(T_a)` over a λ-orthonormal basis of `𝒦⊥` and `G = (𝒰ᵀ𝒰)⁻¹`.
pub fn spin_potential_matrix(space: &ProductSpace, q: &[f64], nu: &[u32]) -> Result<SpinPotential> {
    let alg = space.algebra();
    if alg.family() != Family::A || alg.rank() != 1 {
        return Err(Error::Unsupported(
            "spin potential is implemented for su(2) only".into(),
        ));
    }
    if !space.gamma().is_identity() {
        return Err(Error::Unsupported(
            "spin potential requires the identity twist".into(),
        ));
    }
    let n = space.n();
    if nu.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: nu.len(),
        });
    }
    let dims: Vec<usize> = nu.iter().map(|&v| v as usize + 1).collect();
    let total: usize = dims.iter().product();
    if total > MAX_SPIN_DIM {
        return Err(Error::CutoffExceeded(format!(
            "dim V_ν = {total} > {MAX_SPIN_DIM}"
        )));
    }
    let u = space.u_operator(q)?;
    let g = u
        .tr_mul(&u)
        .try_inverse()
        .ok_or_else(|| Error::Numerical("𝒰ᵀ𝒰 is singular".into()))?;

    // Product basis states with zero total weight.
    let mut basis = Vec::new();
    let mut cols = Vec::new();
    for s in 0..total {
        let mut rest = s;
        let mut ws = vec![0i64; n];
        for k in (0..n).rev() {
            let a = rest % dims[k];
            rest /= dims[k];
            ws[k] = nu[k] as i64 - 2 * a as i64;
        }
        if ws.iter().sum::<i64>() == 0 {
            basis.push(ws);
            cols.push(s);
        }
    }
    let d0 = cols.len();
    if d0 == 0 {
        return Ok(SpinPotential {
            basis,
            matrix: CMat::zeros(0, 0),
        });
    }

    let spins: Vec<[CMat; 3]> = nu.iter().map(|&v| spin_matrices(v as usize)).collect();
    let kp = space.k_perp_basis();
    let dim = space.dim();
    // B_a = ρ(T_a)·P restricted to the invariant columns.
    let mut b_mats = Vec::with_capacity(kp.ncols());
    for a in 0..kp.ncols() {
        let reps: Vec<CMat> = (0..n)
            .map(|k| {
                let x: crate::lie::AlgebraVector =
                    kp.view((k * dim, a), (dim, 1)).column(0).into_owned();
                su2_rep(&alg.to_matrix(&x), &spins[k])
            })
            .collect();
        let mut b = CMat::zeros(total, d0);
        for (c, &s) in cols.iter().enumerate() {
            // Digits of the basis state.
            let mut digits = vec![0usize; n];
            let mut rest = s;
            for k in (0..n).rev() {
                digits[k] = rest % dims[k];
                rest /= dims[k];
            }
            for k in 0..n {
                let stride: usize = dims[k + 1..].iter().product();
                let base = s - digits[k] * stride;
                for row in 0..dims[k] {
                    let v = reps[k][(row, digits[k])];
                    if v != Complex64::new(0.0, 0.0) {
                        b[(base + row * stride, c)] += v;
                    }
                }
            }
        }
        b_mats.push(b);
    }
    let mut h = CMat::zeros(d0, d0);
    for a in 0..b_mats.len() {
        for bb in 0..b_mats.len() {
            let coef = 0.5 * g[(a, bb)];
            if coef != 0.0 {
                h += b_mats[a].adjoint() * &b_mats[bb] * Complex64::new(coef, 0.0);
            }
        }
    }
    // Symmetrize away rounding.
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(SpinPotential { basis, matrix: h })
}
