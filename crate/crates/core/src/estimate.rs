//! Multi-start ascent estimators for induced norms of linear maps.
//!
//! These are lower estimates (every reported value is attained by an explicit
//! input) used to cross-check the semidefinite programs. Each alternating step
//! is monotone non-decreasing in the objective.

use rand::Rng;

use crate::channels::LinearMap;
use crate::error::Result;
use crate::matcore::{self, eigh, polar_unitary, svd, ComplexMatrix};
use crate::sampling;
use crate::scalar::Real;

/// Iteration controls shared by the estimators.
#[derive(Debug, Clone, Copy)]
pub struct AscentOptions {
    pub starts: usize,
    pub max_iter: usize,
    /// Stop a run once an iteration improves the objective by less than this.
    pub tol: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self {
            starts: 24,
            max_iter: 500,
            tol: 1e-13,
        }
    }
}

/// `max_{‖u‖=‖v‖=1} ‖Φ(uv†)‖₁`, which equals the induced trace norm `‖Φ‖₁`.
pub fn induced_trace_norm<T: Real, M: LinearMap<T>, R: Rng + ?Sized>(
    map: &M,
    opts: AscentOptions,
    rng: &mut R,
) -> Result<T> {
    let d = map.dim_in();
    let mut best = T::zero();
    for _ in 0..opts.starts {
        let mut u = sampling::unit_vector::<T, R>(d, rng);
        let mut v = sampling::unit_vector::<T, R>(d, rng);
        let mut last = -T::one();
        for _ in 0..opts.max_iter {
            let y = map.apply(&(&u * v.adjoint()))?;
            let val = matcore::trace_norm(&y);
            if val - last <= T::tol(opts.tol) {
                last = if val > last { val } else { last };
                break;
            }
            last = val;
            let q = polar_unitary(&y)?;
            // Re Tr(Q† Φ(uv†)) = Re v† B u with B = Φ†(Q)†
            let b = map.apply_adjoint(&q)?.adjoint();
            let s = svd(&b);
            u = s.v.column(0).into_owned();
            v = s.u.column(0).into_owned();
        }
        if last > best {
            best = last;
        }
    }
    Ok(best)
}

/// `max_{U unitary} ‖Ψ(U)‖_∞`, which equals the induced operator norm `‖Ψ‖_∞`.
pub fn induced_operator_norm<T: Real, M: LinearMap<T>, R: Rng + ?Sized>(
    map: &M,
    opts: AscentOptions,
    rng: &mut R,
) -> Result<T> {
    let d = map.dim_in();
    let mut best = T::zero();
    for _ in 0..opts.starts {
        let mut u = sampling::haar_unitary::<T, R>(d, rng);
        let mut last = -T::one();
        for _ in 0..opts.max_iter {
            let y = map.apply(&u)?;
            let s = svd(&y);
            let val = s.singular_values[0];
            if val - last <= T::tol(opts.tol) {
                last = if val > last { val } else { last };
                break;
            }
            last = val;
            let top = &s.u.column(0) * s.v.column(0).adjoint();
            u = polar_unitary(&map.apply_adjoint(&top)?)?;
        }
        if last > best {
            best = last;
        }
    }
    Ok(best)
}

/// `max ‖Φ(X)‖_∞` over `0 ⪯ X ⪯ I`, for completely positive `Φ`.
pub fn operator_norm_on_psd_contractions<T: Real, M: LinearMap<T>, R: Rng + ?Sized>(
    map: &M,
    opts: AscentOptions,
    rng: &mut R,
) -> Result<T> {
    let d = map.dim_in();
    let mut best = T::zero();
    for _ in 0..opts.starts {
        // random spectral projection as the starting contraction
        let h = matcore::hermitian_part(&sampling::ginibre::<T, R>(d, d, rng));
        let mut x = positive_projection(&h)?;
        let mut last = -T::one();
        for _ in 0..opts.max_iter {
            let y = map.apply(&x)?;
            let e = eigh(&y)?;
            let val = matcore::operator_norm(&y);
            if val - last <= T::tol(opts.tol) {
                last = if val > last { val } else { last };
                break;
            }
            last = val;
            let top = e.vectors.column(0);
            let g = map.apply_adjoint(&(&top * top.adjoint()))?;
            x = positive_projection(&g)?;
        }
        if last > best {
            best = last;
        }
    }
    Ok(best)
}

/// `max_{|u⟩ on H⊗H} ‖(Φ ⊗ I_d)(|u⟩⟨u|)‖₁`, the diamond norm of a
/// Hermiticity-preserving map when the ancilla matches the input dimension.
pub fn stabilized_trace_norm<T: Real, M: LinearMap<T>, R: Rng + ?Sized>(
    map: &M,
    opts: AscentOptions,
    rng: &mut R,
) -> Result<T> {
    let d = map.dim_in();
    let mut best = T::zero();
    for _ in 0..opts.starts {
        let mut u = sampling::unit_vector::<T, R>(d * d, rng);
        let mut last = -T::one();
        for _ in 0..opts.max_iter {
            let y = map.apply_with_ancilla(&(&u * u.adjoint()), d)?;
            let val = matcore::trace_norm(&y);
            if val - last <= T::tol(opts.tol) {
                last = if val > last { val } else { last };
                break;
            }
            last = val;
            let q = polar_unitary(&y)?;
            let g = map.apply_adjoint_with_ancilla(&q, d)?;
            u = eigh(&g)?.vectors.column(0).into_owned();
        }
        if last > best {
            best = last;
        }
    }
    Ok(best)
}

/// Projection onto the span of eigenvectors with non-negative eigenvalues.
pub fn positive_projection<T: Real>(h: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let e = eigh(h)?;
    Ok(e.map(|x| if x >= T::zero() { T::one() } else { T::zero() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{ChannelDifference, KrausChannel};
    use crate::matcore::diag_real;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_vs_phase_flip_norms() {
        let diff = ChannelDifference::new(
            KrausChannel::<f64>::identity(2),
            KrausChannel::unitary(diag_real(&[1.0, -1.0])).unwrap(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let opts = AscentOptions::default();
        let one = induced_trace_norm(&diff, opts, &mut rng).unwrap();
        let dia = stabilized_trace_norm(&diff, opts, &mut rng).unwrap();
        assert!((one - 2.0).abs() < 1e-9, "{one}");
        assert!((dia - 2.0).abs() < 1e-9, "{dia}");
    }

    #[test]
    fn cp_norm_is_norm_of_image_of_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ch = sampling::channel::<f64, _>(3, 3, 2, &mut rng);
        let est = operator_norm_on_psd_contractions(&ch, AscentOptions::default(), &mut rng).unwrap();
        let exact = matcore::operator_norm(&ch.apply(&matcore::identity(3)).unwrap());
        assert!((est - exact).abs() < 1e-6, "{est} vs {exact}");
    }
}
