//! Dense complex linear algebra: Schatten norms, fidelity, trace distance,
//! partial trace and Kronecker products.
//!
//! Distances follow the unnormalized convention `D(ρ, σ) = ‖ρ − σ‖₁`, so trace
//! distances live in `[0, 2]`. Many references divide by two; this crate never does.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;

use crate::error::{dim_err, Error, Result};
use crate::scalar::{real, Real};

/// Dense complex matrix, the numeric carrier for every operator in the crate.
pub type ComplexMatrix<T = f64> = DMatrix<Complex<T>>;
/// Dense complex column vector.
pub type ComplexVector<T = f64> = DVector<Complex<T>>;

/// Max entrywise deviation from Hermiticity accepted for density operators.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Min eigenvalue slack accepted for positive semidefiniteness.
pub const PSD_TOL: f64 = 1e-9;
/// Singular values below this are treated as exact zeros in `|M|`.
pub const SINGULAR_ZERO: f64 = 1e-12;

/// Builds a matrix from row-major entries, rejecting wrong lengths and non-finite values.
pub fn from_row_major<T: Real>(
    rows: usize,
    cols: usize,
    entries: Vec<Complex<T>>,
) -> Result<ComplexMatrix<T>> {
    if rows == 0 || cols == 0 {
        return dim_err("matrix dimensions must be positive");
    }
    if entries.len() != rows * cols {
        return dim_err(format!(
            "expected {} entries for a {rows}x{cols} matrix, got {}",
            rows * cols,
            entries.len()
        ));
    }
    let m = DMatrix::from_row_slice(rows, cols, &entries);
    if !is_finite(&m) {
        return Err(Error::Parameter("matrix has non-finite entries".into()));
    }
    Ok(m)
}

pub fn is_finite<T: Real>(m: &ComplexMatrix<T>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn identity<T: Real>(d: usize) -> ComplexMatrix<T> {
    DMatrix::identity(d, d)
}

/// Diagonal matrix with the given complex diagonal.
pub fn diag<T: Real>(entries: &[Complex<T>]) -> ComplexMatrix<T> {
    DMatrix::from_diagonal(&DVector::from_column_slice(entries))
}

/// Diagonal matrix with the given real diagonal.
pub fn diag_real<T: Real>(entries: &[T]) -> ComplexMatrix<T> {
    let v: Vec<Complex<T>> = entries.iter().map(|&x| real(x)).collect();
    diag(&v)
}

pub fn trace<T: Real>(m: &ComplexMatrix<T>) -> Complex<T> {
    m.diagonal().iter().fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
}

/// Hilbert–Schmidt inner product `Tr(A† B)`.
pub fn hs_inner<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Complex<T> {
    a.iter()
        .zip(b.iter())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

pub fn frobenius_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    m.iter()
        .fold(T::zero(), |acc, z| acc + z.re * z.re + z.im * z.im)
        .sqrt()
}

/// Largest entrywise modulus of `M − M†`.
pub fn hermitian_deviation<T: Real>(m: &ComplexMatrix<T>) -> T {
    if !m.is_square() {
        return T::max_value().unwrap_or_else(T::one);
    }
    let n = m.nrows();
    let mut dev = T::zero();
    for i in 0..n {
        for j in i..n {
            let d = (m[(i, j)] - m[(j, i)].conj()).modulus();
            if d > dev {
                dev = d;
            }
        }
    }
    dev
}

/// `(M + M†) / 2`.
pub fn hermitian_part<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    (m + m.adjoint()).scale(T::lit(0.5))
}

fn require_square<T: Real>(m: &ComplexMatrix<T>, what: &str) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        dim_err(format!("{what} requires a square matrix, got {}x{}", m.nrows(), m.ncols()))
    }
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues sorted decreasingly.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    /// Column `k` is the eigenvector for `values[k]`.
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn min(&self) -> T {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn max(&self) -> T {
        self.values[0]
    }

    /// Rebuilds `Σ f(λ_k) v_k v_k†`.
    pub fn map(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.vectors.nrows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == T::zero() {
                continue;
            }
            let v = self.vectors.column(k);
            out += (&v * v.adjoint()).scale(w);
        }
        out
    }
}

/// Eigen-decomposition of the Hermitian part of `m`.
pub fn eigh<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    require_square(m, "eigendecomposition")?;
    let h = hermitian_part(m);
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(h.nrows(), order.len(), |i, j| {
        eig.eigenvectors[(i, order[j])]
    });
    Ok(HermitianEigen { values, vectors })
}

/// Thin singular value decomposition `M = U diag(σ) V†`, singular values sorted decreasingly.
#[derive(Debug, Clone)]
pub struct Svd<T: Real> {
    pub u: ComplexMatrix<T>,
    pub singular_values: Vec<T>,
    pub v: ComplexMatrix<T>,
}

pub fn svd<T: Real>(m: &ComplexMatrix<T>) -> Svd<T> {
    let s = m.clone().svd(true, true);
    let u = s.u.expect("left singular vectors requested");
    let v = s.v_t.expect("right singular vectors requested").adjoint();
    let mut order: Vec<usize> = (0..s.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        s.singular_values[b]
            .partial_cmp(&s.singular_values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Svd {
        u: ComplexMatrix::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]),
        singular_values: order.iter().map(|&k| s.singular_values[k]).collect(),
        v: ComplexMatrix::from_fn(v.nrows(), order.len(), |i, j| v[(i, order[j])]),
    }
}

pub fn singular_values<T: Real>(m: &ComplexMatrix<T>) -> Vec<T> {
    let mut s: Vec<T> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// `|M| = √(M†M)` via the singular value decomposition.
pub fn matrix_abs<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    require_square(m, "matrix_abs")?;
    let s = svd(m);
    let zero = T::tol(SINGULAR_ZERO);
    let n = m.ncols();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &sigma) in s.singular_values.iter().enumerate() {
        if sigma <= zero {
            continue;
        }
        let v = s.v.column(k);
        out += (&v * v.adjoint()).scale(sigma);
    }
    Ok(out)
}

/// Unitary polar factor `U V†` of a square matrix.
pub fn polar_unitary<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    require_square(m, "polar decomposition")?;
    let s = svd(m);
    Ok(&s.u * s.v.adjoint())
}

/// Schatten `p`-norm; `p = f64::INFINITY` gives the operator norm.
pub fn schatten_norm<T: Real>(m: &ComplexMatrix<T>, p: f64) -> Result<T> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Parameter(format!("Schatten index must be >= 1, got {p}")));
    }
    let s = singular_values(m);
    if p.is_infinite() {
        return Ok(s.first().copied().unwrap_or_else(T::zero));
    }
    if p == 1.0 {
        return Ok(s.iter().fold(T::zero(), |a, &x| a + x));
    }
    let pt = T::lit(p);
    let top = match s.first() {
        Some(&t) if t > T::zero() => t,
        _ => return Ok(T::zero()),
    };
    // scale by the largest value to keep large p from overflowing
    let sum = s.iter().fold(T::zero(), |a, &x| a + (x / top).powf(pt));
    Ok(top * sum.powf(T::one() / pt))
}

pub fn trace_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    singular_values(m).iter().fold(T::zero(), |a, &x| a + x)
}

pub fn operator_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    singular_values(m).first().copied().unwrap_or_else(T::zero)
}

/// PSD square root of the Hermitian part of `m`, negative eigenvalues clamped to zero.
pub fn psd_sqrt<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let e = eigh(m)?;
    Ok(e.map(|x| if x > T::zero() { x.sqrt() } else { T::zero() }))
}

/// True iff `m` is Hermitian within `tol` and its least eigenvalue is `≥ −tol`.
pub fn psd_check<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<bool> {
    require_square(m, "psd_check")?;
    if hermitian_deviation(m) > tol {
        return Ok(false);
    }
    Ok(eigh(m)?.min() >= -tol)
}

/// Kronecker product with `(A⊗B)(x⊗y) = Ax ⊗ By`; row index `a·dim_b + b`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.kronecker(b)
}

pub fn kron_vec<T: Real>(a: &ComplexVector<T>, b: &ComplexVector<T>) -> ComplexVector<T> {
    a.kronecker(b)
}

/// Which tensor factor survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

/// Partial trace of an operator on `A ⊗ B`.
pub fn partial_trace<T: Real>(
    m: &ComplexMatrix<T>,
    dim_a: usize,
    dim_b: usize,
    keep: Keep,
) -> Result<ComplexMatrix<T>> {
    let n = dim_a * dim_b;
    if m.nrows() != n || m.ncols() != n {
        return dim_err(format!(
            "partial trace over {dim_a}x{dim_b} needs a {n}x{n} operator, got {}x{}",
            m.nrows(),
            m.ncols()
        ));
    }
    let zero = Complex::new(T::zero(), T::zero());
    Ok(match keep {
        Keep::A => ComplexMatrix::from_fn(dim_a, dim_a, |i, j| {
            (0..dim_b).fold(zero, |acc, b| acc + m[(i * dim_b + b, j * dim_b + b)])
        }),
        Keep::B => ComplexMatrix::from_fn(dim_b, dim_b, |i, j| {
            (0..dim_a).fold(zero, |acc, a| acc + m[(a * dim_b + i, a * dim_b + j)])
        }),
    })
}

/// Unit-trace positive semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T: Real = f64> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityOperator<T> {
    /// Validates Hermiticity (1e-10), eigenvalues (≥ −1e-9) and unit trace (1e-10).
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        require_square(&matrix, "density operator")?;
        if !is_finite(&matrix) {
            return Err(Error::Parameter("density operator has non-finite entries".into()));
        }
        let herm = hermitian_deviation(&matrix);
        if herm > T::tol(HERMITIAN_TOL) {
            return Err(Error::Structure(format!(
                "density operator not Hermitian (deviation {})",
                herm.as_f64()
            )));
        }
        let tr = trace(&matrix);
        if (tr.re - T::one()).abs() > T::tol(HERMITIAN_TOL) || tr.im.abs() > T::tol(HERMITIAN_TOL) {
            return Err(Error::Structure(format!(
                "density operator trace is {}",
                tr.re.as_f64()
            )));
        }
        let min = eigh(&matrix)?.min();
        if min < -T::tol(PSD_TOL) {
            return Err(Error::Structure(format!(
                "density operator has negative eigenvalue {}",
                min.as_f64()
            )));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn pure(psi: &ComplexVector<T>) -> Result<Self> {
        let norm2 = psi.iter().fold(T::zero(), |a, z| a + z.modulus_squared());
        if !(norm2 > T::zero()) {
            return Err(Error::Parameter("pure state vector is zero".into()));
        }
        let m = (psi * psi.adjoint()).unscale(norm2);
        Self::new(hermitian_part(&m))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: identity::<T>(dim).unscale(T::lit(dim as f64)),
        }
    }

    /// `|k⟩⟨k|`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(k, k)] = real(T::one());
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }
}

fn same_dim<T: Real>(a: &DensityOperator<T>, b: &DensityOperator<T>) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        dim_err(format!("states of dimension {} and {}", a.dim(), b.dim()))
    }
}

/// `D(ρ, σ) = ‖ρ − σ‖₁ ∈ [0, 2]` (no factor ½).
pub fn trace_distance<T: Real>(rho: &DensityOperator<T>, sigma: &DensityOperator<T>) -> Result<T> {
    same_dim(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let e = eigh(&diff)?;
    Ok(e.values.iter().fold(T::zero(), |a, x| a + x.abs()))
}

/// `F(ρ, σ) = Tr √(√ρ σ √ρ) = ‖√ρ √σ‖₁ ∈ [0, 1]`.
pub fn fidelity<T: Real>(rho: &DensityOperator<T>, sigma: &DensityOperator<T>) -> Result<T> {
    same_dim(rho, sigma)?;
    let a = psd_sqrt(rho.matrix())?;
    let b = psd_sqrt(sigma.matrix())?;
    let f = trace_norm(&(a * b));
    Ok(if f > T::one() { T::one() } else { f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    fn mat_close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) {
        assert_eq!(a.shape(), b.shape());
        let d = (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(d <= tol, "max deviation {d}\n{a}\n{b}");
    }

    #[test]
    fn abs_examples() {
        let i3 = identity::<f64>(3);
        mat_close(&matrix_abs(&i3).unwrap(), &i3, 1e-12);
        let m = diag(&[c(-2.0, 0.0), c(0.0, 3.0)]);
        mat_close(&matrix_abs(&m).unwrap(), &diag_real(&[2.0, 3.0]), 1e-12);
        let nil = from_row_major(2, 2, vec![c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]).unwrap();
        mat_close(&matrix_abs(&nil).unwrap(), &diag_real(&[0.0, 1.0]), 1e-12);
        assert!(matches!(
            matrix_abs(&ComplexMatrix::<f64>::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn schatten_examples() {
        close(schatten_norm(&identity::<f64>(5), 1.0).unwrap(), 5.0, 1e-12);
        let m = diag_real(&[3.0, 4.0]);
        close(schatten_norm(&m, 2.0).unwrap(), 5.0, 1e-12);
        close(schatten_norm(&m, f64::INFINITY).unwrap(), 4.0, 1e-12);
        assert!(matches!(schatten_norm(&m, 0.5), Err(Error::Parameter(_))));
    }

    #[test]
    fn trace_distance_examples() {
        let z0 = DensityOperator::<f64>::basis(2, 0);
        let z1 = DensityOperator::<f64>::basis(2, 1);
        let mixed = DensityOperator::<f64>::maximally_mixed(2);
        close(trace_distance(&z0, &z0).unwrap(), 0.0, 1e-14);
        close(trace_distance(&z0, &z1).unwrap(), 2.0, 1e-14);
        close(trace_distance(&z0, &mixed).unwrap(), 1.0, 1e-14);
        let three = DensityOperator::<f64>::maximally_mixed(3);
        assert!(matches!(trace_distance(&z0, &three), Err(Error::Dimension(_))));
    }

    #[test]
    fn fidelity_examples() {
        let z0 = DensityOperator::<f64>::basis(2, 0);
        let z1 = DensityOperator::<f64>::basis(2, 1);
        let mixed = DensityOperator::<f64>::maximally_mixed(2);
        close(fidelity(&z0, &z0).unwrap(), 1.0, 1e-12);
        close(fidelity(&z0, &z1).unwrap(), 0.0, 1e-12);
        close(fidelity(&z0, &mixed).unwrap(), 0.5f64.sqrt(), 1e-12);
    }

    #[test]
    fn partial_trace_examples() {
        // Tr_B |α⟩⟨α| = I for the unnormalized maximally entangled vector
        let d = 3;
        let mut alpha = ComplexVector::<f64>::zeros(d * d);
        for k in 0..d {
            alpha[k * d + k] = c(1.0, 0.0);
        }
        let aa = &alpha * alpha.adjoint();
        mat_close(&partial_trace(&aa, d, d, Keep::A).unwrap(), &identity(d), 1e-14);
        let i4 = identity::<f64>(4);
        mat_close(
            &partial_trace(&i4, 2, 2, Keep::A).unwrap(),
            &identity::<f64>(2).scale(2.0),
            1e-14,
        );
        assert!(partial_trace(&i4, 2, 3, Keep::B).is_err());
    }

    #[test]
    fn kron_examples() {
        mat_close(&kron(&identity(2), &identity(3)), &identity(6), 0.0);
        mat_close(
            &kron(&diag_real(&[1.0, 2.0]), &identity(2)),
            &diag_real(&[1.0, 1.0, 2.0, 2.0]),
            0.0,
        );
    }

    #[test]
    fn psd_examples() {
        assert!(psd_check(&identity::<f64>(4), 1e-9).unwrap());
        assert!(!psd_check(&diag_real(&[1.0, -0.5]), 1e-9).unwrap());
        let ones = ComplexMatrix::<f64>::from_element(2, 2, c(1.0, 0.0));
        assert!(psd_check(&ones, 1e-9).unwrap());
        assert!(psd_check(&ComplexMatrix::<f64>::zeros(2, 3), 1e-9).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityOperator::new(diag_real(&[0.5, 0.6])).is_err());
        assert!(DensityOperator::new(diag_real(&[1.5, -0.5])).is_err());
        let nonherm = from_row_major::<f64>(2, 2, vec![c(0.5, 0.), c(0.1, 0.), c(0., 0.), c(0.5, 0.)]).unwrap();
        assert!(DensityOperator::new(nonherm).is_err());
        assert!(from_row_major::<f64>(2, 2, vec![c::<f64>(f64::NAN, 0.0); 4]).is_err());
        assert!(from_row_major::<f64>(2, 2, vec![c::<f64>(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn single_precision_path() {
        let m = diag_real::<f32>(&[3.0, 4.0]);
        assert!((schatten_norm(&m, 2.0).unwrap() - 5.0).abs() < 1e-5);
        let z0 = DensityOperator::<f32>::basis(2, 0);
        let mixed = DensityOperator::<f32>::maximally_mixed(2);
        assert!((trace_distance(&z0, &mixed).unwrap() - 1.0).abs() < 1e-5);
        assert!((fidelity(&z0, &mixed).unwrap() - 0.5f32.sqrt()).abs() < 1e-5);
    }
}
