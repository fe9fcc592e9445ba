//! Small dense linear-algebra helpers shared by the other modules.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type RMat = DMatrix<f64>;
pub type RVec = DVector<f64>;
pub type CMat = DMatrix<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix.
///
/// nalgebra's `symmetric_eigen` returns NaN on some sparse inputs, such as
/// `[[0, A], [Aᵀ, 0]]` with `A` mostly zero, so this goes through faer.
pub fn symmetric_eigen(m: &RMat) -> (RVec, RMat) {
    let n = m.nrows();
    if n == 0 {
        return (RVec::zeros(0), RMat::zeros(0, 0));
    }
    let f = faer::Mat::<f64>::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let eig = f.self_adjoint_eigen(faer::Side::Lower).expect("symmetric eigendecomposition");
    let (s, u) = (eig.S(), eig.U());
    (RVec::from_fn(n, |i, _| s[i]), RMat::from_fn(n, n, |i, j| u[(i, j)]))
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Commutator `[a, b] = ab - ba`.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn trace(a: &CMat) -> Complex64 {
    a.diagonal().iter().sum()
}

/// `tr(a b)` without forming the product.
pub fn trace_product(a: &CMat, b: &CMat) -> Complex64 {
    let n = a.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Distance of a square matrix from unitarity, `‖u†u − 1‖_F`.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.nrows();
    frobenius(&(u.adjoint() * u - CMat::identity(n, n)))
}

/// Matrix exponential of a complex square matrix.
pub fn expm(a: &CMat) -> CMat {
    a.clone().exp()
}

/// Orthonormalize the columns of `v` with respect to `⟨x, y⟩ = Σ w_i x_i y_i`.
///
/// Columns that become numerically dependent (norm below `tol` after
/// projection) are dropped. Two passes of modified Gram–Schmidt.
pub fn orthonormalize_weighted(v: &RMat, w: &[f64], tol: f64) -> RMat {
    let n = v.nrows();
    let mut out: Vec<RVec> = Vec::new();
    for j in 0..v.ncols() {
        let mut x = v.column(j).into_owned();
        for _ in 0..2 {
            for b in &out {
                let p = weighted_dot(b, &x, w);
                x.axpy(-p, b, 1.0);
            }
        }
        let nrm = weighted_dot(&x, &x, w).sqrt();
        if nrm > tol {
            out.push(x / nrm);
        }
    }
    if out.is_empty() {
        return RMat::zeros(n, 0);
    }
    RMat::from_columns(&out)
}

pub fn weighted_dot(a: &RVec, b: &RVec, w: &[f64]) -> f64 {
    a.iter()
        .zip(b.iter())
        .zip(w.iter())
        .map(|((x, y), wi)| wi * x * y)
        .sum()
}

/// Singular triplets with `σ > threshold`, from the symmetric eigenproblem of
/// `[[0, A], [Aᵀ, 0]]`, whose eigenvalues are `±σ_i` (plus zeros). This gives
/// singular values to absolute accuracy of order `ε‖A‖`.
pub struct SingularTriplets {
    pub sigma: Vec<f64>,
    pub u: RMat,
    pub v: RMat,
    pub largest: f64,
}

pub fn singular_triplets(m: &RMat, threshold: impl Fn(f64) -> f64) -> SingularTriplets {
    let (r, c) = (m.nrows(), m.ncols());
    let mut big = RMat::zeros(r + c, r + c);
    big.view_mut((0, r), (r, c)).copy_from(m);
    big.view_mut((r, 0), (c, r)).copy_from(&m.transpose());
    let (vals, vecs) = symmetric_eigen(&big);
    let largest = vals.iter().cloned().fold(0.0, f64::max);
    let cut = threshold(largest);
    let mut idx: Vec<usize> = (0..r + c).filter(|&i| vals[i] > cut).collect();
    idx.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());
    let k = idx.len();
    let s2 = std::f64::consts::SQRT_2;
    let u = RMat::from_fn(r, k, |a, j| vecs[(a, idx[j])] * s2);
    let v = RMat::from_fn(c, k, |a, j| vecs[(r + a, idx[j])] * s2);
    SingularTriplets {
        sigma: idx.iter().map(|&i| vals[i]).collect(),
        u,
        v,
        largest,
    }
}

/// Numerical rank: singular values above `rel_tol · max(σ_max, 1)`.
pub fn rank(m: &RMat, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    singular_triplets(m, |s| rel_tol * s.max(1.0)).sigma.len()
}

/// Orthonormal complement (Euclidean) of the column span of an orthonormal `v`.
fn complement(v: &RMat, n: usize) -> RMat {
    let p = RMat::identity(n, n) - v * v.transpose();
    let (vals, vecs) = symmetric_eigen(&p);
    let cols: Vec<RVec> = (0..n)
        .filter(|&i| vals[i] > 0.5)
        .map(|i| vecs.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        RMat::zeros(n, 0)
    } else {
        RMat::from_columns(&cols)
    }
}

/// Orthonormal basis (Euclidean) of the null space of `m`: the complement of
/// the right singular vectors with singular value at least `tol`.
pub fn null_space(m: &RMat, tol: f64) -> RMat {
    let t = singular_triplets(m, |_| tol);
    complement(&t.v, m.ncols())
}

/// Orthonormal basis (Euclidean) of the column space of `m`.
pub fn range_space(m: &RMat, rel_tol: f64) -> RMat {
    singular_triplets(m, |s| rel_tol * s.max(1.0)).u
}

/// Sine of the largest principal angle between two subspaces given by
/// Euclidean-orthonormal column bases. Returns 1 when the dimensions differ.
pub fn subspace_angle(a: &RMat, b: &RMat) -> f64 {
    if a.ncols() != b.ncols() {
        return 1.0;
    }
    if a.ncols() == 0 {
        return 0.0;
    }
    let resid = b - a * (a.transpose() * b);
    let g = resid.transpose() * &resid;
    symmetric_eigen(&g)
        .0
        .iter()
        .cloned()
        .fold(0.0, f64::max)
        .max(0.0)
        .sqrt()
}

/// Anti-Hermitian, traceless part of a square matrix.
pub fn su_part(m: &CMat) -> CMat {
    let n = m.nrows();
    let mut a = (m - m.adjoint()) * c(0.5);
    let tr = trace(&a) / c(n as f64);
    for i in 0..n {
        a[(i, i)] -= tr;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighted_gram_schmidt_is_orthonormal() {
        let v = RMat::from_row_slice(3, 3, &[1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.0]);
        let w = [1.0, 2.0, 3.0];
        let q = orthonormalize_weighted(&v, &w, 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                let d = weighted_dot(&q.column(i).into_owned(), &q.column(j).into_owned(), &w);
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn null_space_of_rank_one() {
        let m = RMat::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        assert_eq!(null_space(&m, 1e-8).ncols(), 2);
        assert_eq!(rank(&m, 1e-10), 1);
    }

    #[test]
    fn singular_triplets_reconstruct() {
        let m = RMat::from_fn(5, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let t = singular_triplets(&m, |s| 1e-12 * s);
        let recon = &t.u * RMat::from_diagonal(&RVec::from_vec(t.sigma.clone())) * t.v.transpose();
        assert!((recon - &m).norm() < 1e-12);
        assert_eq!(rank(&m, 1e-10), t.sigma.len());
        let ns = null_space(&m, 1e-10);
        assert_eq!(ns.ncols(), 4 - t.sigma.len());
        assert!((&m * ns).norm() < 1e-12);
    }

    #[test]
    fn expm_of_rotation_generator() {
        let mut a = CMat::zeros(2, 2);
        a[(0, 1)] = c(-1.0);
        a[(1, 0)] = c(1.0);
        let e = expm(&(a * c(std::f64::consts::FRAC_PI_2)));
        assert!((e[(1, 0)].re - 1.0).abs() < 1e-12);
        assert!(e[(0, 0)].norm() < 1e-12);
    }
}
