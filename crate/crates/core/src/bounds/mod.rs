//! Lower and upper bounds on the distance from a channel to the mixed-unitary
//! channels, and the operational quantities around them.

pub mod birkhoff;
pub mod cphi;
pub mod discrimination;
pub mod lambda;

use serde::Serialize;

pub use birkhoff::{birkhoff_decompose, majorize_check, t_transform_chain, uhlmann_mixture, UhlmannMixture};
pub use cphi::{c_phi, c_phi_with, unitary_in_span, CPhiOptions, CPhiResult};
pub use discrimination::{fixed_input_distance, helstrom_measurement, succ_probability, Helstrom};
pub use lambda::{lambda_distance_upper, lambda_distance_upper_with, LambdaBound, LambdaOptions};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::schur::{is_schur_map, SchurMatrix};

/// Schur-ness tolerance on Choi entries used before extending a bound to tensor powers.
pub const SCHUR_TOL: f64 = 1e-9;
/// Slack allowed between the reported lower and upper bound.
pub const SANDWICH_SLACK: f64 = 1e-6;

/// `C_Φ` as a lower bound on the distance from `Ψ ⊗ Φ^{⊗n}` to the mixed-unitary channels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TensorBound {
    pub value: f64,
    pub n: usize,
    /// Dimension of the Schur factor `Ψ`; 1 means no factor.
    pub schur_factor_dim: usize,
    pub phi_is_schur: bool,
}

/// Lower bound for `Ψ ⊗ Φ^{⊗n}` with `Ψ` any Schur channel of dimension `schur_factor_dim`.
///
/// The bound does not depend on `n` or `Ψ`, so nothing is computed on the
/// tensor product. For `n > 1` the factors `Φ` play the role of Schur
/// factors and must be Schur themselves.
pub fn tensor_bound_report(phi: &KrausChannel, schur_factor_dim: usize, n: usize) -> Result<TensorBound> {
    tensor_bound_from(phi, &c_phi(phi)?, schur_factor_dim, n)
}

pub fn tensor_bound_from(phi: &KrausChannel, cphi: &CPhiResult, schur_factor_dim: usize, n: usize) -> Result<TensorBound> {
    if n == 0 || schur_factor_dim == 0 {
        return Err(Error::Parameter("n and the Schur factor dimension must be positive".into()));
    }
    let phi_is_schur = phi.is_square() && is_schur_map(phi, SCHUR_TOL);
    if n > 1 && !phi_is_schur {
        return Err(Error::Precondition(
            "the bound extends to tensor powers only for Schur channels".into(),
        ));
    }
    Ok(TensorBound {
        value: cphi.value,
        n,
        schur_factor_dim,
        phi_is_schur,
    })
}

fn pairs(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    m.row_iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Minimizer {
    /// Coefficients in the orthonormal Kraus-span basis, as `[re, im]`.
    pub coeffs: Vec<[f64; 2]>,
    pub l: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MixtureReport {
    pub weights: Vec<f64>,
    pub phases: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Sandwich {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub c_phi_starts: usize,
    pub c_phi_best_start: usize,
    pub c_phi_iterations: usize,
    pub c_phi_evaluations: usize,
    pub lambda_rounds: usize,
    pub lambda_atoms: usize,
    pub lambda_converged: bool,
    pub sdp_iterations: usize,
    pub budget: usize,
    pub seed: u64,
    pub sandwich_slack: f64,
    pub price_tol: f64,
    pub sdp_gap_tol: f64,
}

/// Both sides of `½ D(Φ, Λ_d) ≤ D(Φ, Conv U) ≤ D(Φ, Λ_d)` for a Schur channel.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub channel_id: String,
    pub dim: usize,
    /// Lower bound on the distance to the mixed-unitary channels.
    pub c_phi: f64,
    pub minimizer: Minimizer,
    /// Certified `D(Φ, Λ_d)` upper bound, attained by `mixture`.
    pub lambda_upper: f64,
    /// Lagrangian lower bound on `D(Φ, Λ_d)`.
    pub lambda_lower: f64,
    /// `max(c_phi, ½ lambda_lower)`.
    pub conv_u_lower: f64,
    pub sandwich: Sandwich,
    pub mixture: MixtureReport,
    pub diagnostics: Diagnostics,
}

/// Options for [`sandwich_report_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichOptions {
    pub cphi: CPhiOptions,
    pub lambda: LambdaOptions,
}

impl Default for SandwichOptions {
    fn default() -> Self {
        Self {
            cphi: CPhiOptions::default(),
            lambda: LambdaOptions::default(),
        }
    }
}

pub fn sandwich_report(s: &SchurMatrix<f64>, channel_id: &str) -> Result<BoundReport> {
    sandwich_report_with(s, channel_id, &SandwichOptions::default())
}

pub fn sandwich_report_with(s: &SchurMatrix<f64>, channel_id: &str, opts: &SandwichOptions) -> Result<BoundReport> {
    if !s.is_channel() {
        return Err(Error::Precondition("input is not a Schur channel".into()));
    }
    let ch = s.to_kraus()?;
    let cphi = c_phi_with(&ch, &opts.cphi)?;
    let lam = lambda_distance_upper_with(s, &opts.lambda)?;
    let lower = cphi.value.max(0.5 * lam.lower);
    if lower > lam.value + SANDWICH_SLACK {
        return Err(Error::Numerical(format!(
            "lower bound {lower:.9e} exceeds upper bound {:.9e}",
            lam.value
        )));
    }
    Ok(BoundReport {
        channel_id: channel_id.to_string(),
        dim: s.dim(),
        c_phi: cphi.value,
        minimizer: Minimizer {
            coeffs: cphi.coeffs.iter().map(|z| [z.re, z.im]).collect(),
            l: pairs(&cphi.l),
        },
        lambda_upper: lam.value,
        lambda_lower: lam.lower,
        conv_u_lower: lower,
        sandwich: Sandwich {
            lower,
            upper: lam.value,
        },
        mixture: MixtureReport {
            weights: lam.mixture.weights().to_vec(),
            phases: lam
                .mixture
                .phases()
                .iter()
                .map(|u| u.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        },
        diagnostics: Diagnostics {
            c_phi_starts: cphi.starts,
            c_phi_best_start: cphi.best_start,
            c_phi_iterations: cphi.iterations,
            c_phi_evaluations: cphi.evaluations,
            lambda_rounds: lam.rounds,
            lambda_atoms: lam.atoms,
            lambda_converged: lam.converged,
            sdp_iterations: lam.sdp_iterations,
            budget: opts.lambda.budget,
            seed: opts.lambda.seed,
            sandwich_slack: SANDWICH_SLACK,
            price_tol: opts.lambda.price_tol,
            sdp_gap_tol: crate::sdp::SdpOptions::default().gap_tol,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{diag, identity};
    use num_complex::Complex64;

    #[test]
    fn identity_sandwich_is_zero() {
        let r = sandwich_report(&SchurMatrix::ones(3), "id").unwrap();
        assert!(r.sandwich.lower < 1e-9 && r.sandwich.upper < 1e-6, "{:?}", r.sandwich);
    }

    #[test]
    fn tensor_bound_needs_schur_for_powers() {
        let phi = KrausChannel::dephasing(2);
        let one = tensor_bound_report(&phi, 1, 1).unwrap();
        let three = tensor_bound_report(&phi, 2, 3).unwrap();
        assert_eq!(one.value, three.value);
        assert!(three.phi_is_schur);
        let h = ComplexMatrix::from_element(2, 2, Complex64::new(0.5f64.sqrt(), 0.0));
        let mut h = h;
        h[(1, 1)] = -h[(1, 1)];
        let not_schur = KrausChannel::unitary(h).unwrap();
        assert!(tensor_bound_report(&not_schur, 1, 1).is_ok());
        assert!(matches!(tensor_bound_report(&not_schur, 1, 2), Err(Error::Precondition(_))));
        assert!(tensor_bound_report(&phi, 1, 0).is_err());
    }

    #[test]
    fn schur_precondition() {
        let s = SchurMatrix::new(identity::<f64>(2).scale(2.0)).unwrap();
        assert!(sandwich_report(&s, "x").is_err());
        let z = diag(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        assert!(is_schur_map(&KrausChannel::unitary(z).unwrap(), SCHUR_TOL));
    }
}
