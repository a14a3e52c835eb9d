//! Small shared linear-algebra helpers over dense real and complex matrices.
//!
//! Everything here is a thin layer on nalgebra: type aliases, Hermitian
//! checks, operator norms, Kronecker products, spectral functions, and
//! seeded random sampling used by the solver and the see-saw optimizer.

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;
use rand::Rng;

/// Dense real matrix.
pub type RMat = DMatrix<f64>;
/// Dense real vector.
pub type RVec = DVector<f64>;
/// Dense complex matrix.
pub type CMat = DMatrix<Complex64>;
/// Dense complex vector.
pub type CVec = DVector<Complex64>;

/// Complex zero.
pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
/// Complex one.
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `‖a − a†‖` in Frobenius norm, as a Hermiticity defect.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    (a - a.adjoint()).norm()
}

/// Largest entry modulus of a complex matrix (sup norm over entries).
pub fn cmax_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Operator (spectral) norm of a complex matrix via singular values.
pub fn op_norm(a: &CMat) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.singular_values().max()
}

/// Operator norm of a real symmetric matrix via its eigenvalues.
pub fn op_norm_sym(a: &RMat) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    a.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(0.0, |acc, &l| acc.max(l.abs()))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
///
/// Returns `(eigenvalues, eigenvectors)` with eigenvectors as matrix columns
/// in the order of the eigenvalues.
pub fn hermitian_eigen_desc(a: &CMat) -> (Vec<f64>, CMat) {
    let d = a.nrows();
    let se = a.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| {
        se.eigenvalues[j]
            .partial_cmp(&se.eigenvalues[i])
            .expect("eigenvalues are finite")
    });
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(d, d);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &se.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Spectral sign function of a Hermitian matrix: eigenvalues are replaced by
/// `+1` when nonnegative and `−1` otherwise, so the result is a Hermitian
/// involution.
pub fn spectral_sign(a: &CMat) -> CMat {
    let (vals, vecs) = hermitian_eigen_desc(a);
    let signs = CMat::from_diagonal(&CVec::from_iterator(
        vals.len(),
        vals.iter()
            .map(|&l| Complex64::new(if l >= 0.0 { 1.0 } else { -1.0 }, 0.0)),
    ));
    &vecs * signs * vecs.adjoint()
}

/// Kronecker product of complex matrices.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Complex identity matrix.
pub fn ceye(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// Unitary polar factor of a square complex matrix, via SVD.
///
/// For `a = u·p` with `p ⪰ 0`, returns `u = w·vᴴ` from the singular value
/// decomposition `a = w·σ·vᴴ`.
pub fn polar_unitary(a: &CMat) -> CMat {
    let svd = a.clone().svd(true, true);
    let w = svd.u.expect("svd requested u");
    let vt = svd.v_t.expect("svd requested v_t");
    w * vt
}

/// Standard normal sample via Box–Muller, driven by any seeded RNG.
pub fn sample_normal<R: Rng>(rng: &mut R) -> f64 {
    loop {
        let u1: f64 = rng.gen::<f64>();
        if u1 > f64::MIN_POSITIVE {
            let u2: f64 = rng.gen::<f64>();
            return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        }
    }
}

/// Random real unit vector with normally distributed direction.
pub fn random_unit_vector<R: Rng>(rng: &mut R, dim: usize) -> RVec {
    loop {
        let v = RVec::from_fn(dim, |_, _| sample_normal(rng));
        let n = v.norm();
        if n > 1e-12 {
            return v / n;
        }
    }
}

/// Random complex unit vector.
pub fn random_unit_cvector<R: Rng>(rng: &mut R, dim: usize) -> CVec {
    loop {
        let v = CVec::from_fn(dim, |_, _| {
            Complex64::new(sample_normal(rng), sample_normal(rng))
        });
        let n = v.norm();
        if n > 1e-12 {
            return v / Complex64::new(n, 0.0);
        }
    }
}

/// Random Hermitian matrix with operator norm scaled to `norm`.
pub fn random_hermitian<R: Rng>(rng: &mut R, dim: usize, norm: f64) -> CMat {
    let raw = CMat::from_fn(dim, dim, |_, _| {
        Complex64::new(sample_normal(rng), sample_normal(rng))
    });
    let h = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
    let n = op_norm(&h);
    if n > 1e-300 {
        h * Complex64::new(norm / n, 0.0)
    } else {
        h
    }
}

/// Haar-ish random unitary: polar factor of a Ginibre matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| {
        Complex64::new(sample_normal(rng), sample_normal(rng))
    });
    polar_unitary(&g)
}
