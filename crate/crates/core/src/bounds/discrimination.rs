//! Two-hypothesis discrimination of states and of channels at a fixed input.

use crate::channels::LinearMap;
use crate::error::{Error, Result};
use crate::matcore::{eigh, trace, trace_distance, ComplexMatrix, DensityOperator};

/// Optimal success probability `½ + D/4` for trace distance `D ∈ [0, 2]`.
pub fn succ_probability(d: f64) -> Result<f64> {
    if !(-1e-12..=2.0 + 1e-12).contains(&d) {
        return Err(Error::Parameter(format!("trace distance {d} outside [0, 2]")));
    }
    Ok(0.5 + d.clamp(0.0, 2.0) / 4.0)
}

#[derive(Debug, Clone)]
pub struct Helstrom {
    pub e0: ComplexMatrix,
    pub e1: ComplexMatrix,
    /// `½ + ¼‖ρ₀ − ρ₁‖₁`.
    pub p_succ: f64,
    /// `½(Tr ρ₀E₀ + Tr ρ₁E₁)` evaluated for the returned measurement.
    pub achieved: f64,
}

/// Projector onto the non-negative eigenspace of `ρ₀ − ρ₁` and its complement.
pub fn helstrom_measurement(rho0: &DensityOperator, rho1: &DensityOperator) -> Result<Helstrom> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::Dimension(format!(
            "states of dimension {} and {}",
            rho0.dim(),
            rho1.dim()
        )));
    }
    let d = rho0.dim();
    let diff = rho0.matrix() - rho1.matrix();
    let e0 = eigh(&diff)?.map(|x| if x >= 0.0 { 1.0 } else { 0.0 });
    let e1 = ComplexMatrix::identity(d, d) - &e0;
    let achieved = 0.5 * (trace(&(rho0.matrix() * &e0)).re + trace(&(rho1.matrix() * &e1)).re);
    let p_succ = succ_probability(trace_distance(rho0, rho1)?)?;
    Ok(Helstrom {
        e0,
        e1,
        p_succ,
        achieved,
    })
}

/// `‖Φ₀(ρ) − Φ₁(ρ)‖₁`, the distance available without an ancilla at input `ρ`.
pub fn fixed_input_distance<A, B>(a: &A, b: &B, rho: &DensityOperator) -> Result<f64>
where
    A: LinearMap<f64>,
    B: LinearMap<f64>,
{
    if a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out() {
        return Err(Error::Dimension("maps have different shapes".into()));
    }
    if rho.dim() != a.dim_in() {
        return Err(Error::Dimension("input state does not match the maps".into()));
    }
    let diff = a.apply(rho.matrix())? - b.apply(rho.matrix())?;
    Ok(eigh(&crate::matcore::hermitian_part(&diff))?
        .values
        .iter()
        .map(|x| x.abs())
        .sum())
}
