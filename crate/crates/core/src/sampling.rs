//! Random matrices, states and channels for multi-start searches and property tests.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::channels::KrausChannel;
use crate::matcore::{self, ComplexMatrix, ComplexVector, DensityOperator};
use crate::scalar::{cis, Real};

pub fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re), T::lit(im))
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix<T> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn gaussian_vector<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector<T> {
    ComplexVector::from_fn(n, |_, _| gaussian(rng))
}

/// Uniformly random unit vector.
pub fn unit_vector<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector<T> {
    let v = gaussian_vector::<T, R>(n, rng);
    let norm = v.iter().fold(T::zero(), |a, z| a + z.modulus_squared()).sqrt();
    v.unscale(norm)
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase correction).
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix<T> {
    let qr = ginibre::<T, R>(d, d, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..d {
        let rjj = r[(j, j)];
        let m = rjj.modulus();
        if m > T::zero() {
            let phase = rjj.unscale(m);
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Uniformly random phase `e^{iθ}`.
pub fn phase<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    cis(T::lit(theta))
}

/// Uniform point in the closed unit disk.
pub fn unit_disk<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let r: f64 = rng.random::<f64>().sqrt();
    phase::<T, R>(rng).scale(T::lit(r))
}

/// Random mixed state `W W† / Tr(W W†)` with `W` a `d × rank` Ginibre matrix.
pub fn density<T: Real, R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> DensityOperator<T> {
    let w = ginibre::<T, R>(d, rank.max(1), rng);
    let m = &w * w.adjoint();
    let tr = matcore::trace(&m).re;
    DensityOperator::new(matcore::hermitian_part(&m.unscale(tr))).expect("Wishart state is valid")
}

pub fn pure_state<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityOperator<T> {
    DensityOperator::pure(&unit_vector::<T, R>(d, rng)).expect("unit vector")
}

/// Random trace-preserving channel from a Ginibre isometry with `n_kraus` blocks.
pub fn channel<T: Real, R: Rng + ?Sized>(
    dim_in: usize,
    dim_out: usize,
    n_kraus: usize,
    rng: &mut R,
) -> KrausChannel<T> {
    assert!(
        n_kraus * dim_out >= dim_in,
        "a trace-preserving channel needs n_kraus · dim_out ≥ dim_in"
    );
    let g = ginibre::<T, R>(n_kraus * dim_out, dim_in, rng);
    let q = g.qr().q();
    let kraus = (0..n_kraus)
        .map(|k| q.view((k * dim_out, 0), (dim_out, dim_in)).into_owned())
        .collect();
    KrausChannel::new(kraus).expect("isometry blocks form a channel")
}

/// Random mixture of `n` Haar unitaries with Dirichlet-like weights.
pub fn mixed_unitary<T: Real, R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> KrausChannel<T> {
    let w: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = w.iter().sum();
    let kraus = w
        .iter()
        .map(|&wk| haar_unitary::<T, R>(d, rng).scale(T::lit((wk / total).sqrt())))
        .collect();
    KrausChannel::new(kraus).expect("mixture of unitaries is a channel")
}

/// Random correlation matrix: Gram matrix of `d` random unit vectors in `C^rank`.
pub fn correlation_matrix<T: Real, R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> ComplexMatrix<T> {
    let vecs: Vec<ComplexVector<T>> = (0..d).map(|_| unit_vector(rank.max(1), rng)).collect();
    ComplexMatrix::from_fn(d, d, |i, j| vecs[i].dotc(&vecs[j]))
}
