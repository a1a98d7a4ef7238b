//! Upper bounds on the distance from a Schur channel to `Λ_d`, the mixtures
//! of diagonal unitary channels.
//!
//! For a finite family of phase vectors `u_k` the best weights solve one
//! semidefinite program: the diamond norm of the Schur multiplier
//! `S − Σ_k w_k u_k u_k†` is its completely bounded norm, which has a
//! semidefinite characterization. The family grows by column generation:
//! the program's multipliers price a candidate `u` at `u†Hu + y₀`, and a
//! coordinate descent over unit-modulus vectors looks for negative prices.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diamond::{mixture_fit, schur_multiplier_norm, MixtureFit};
use crate::error::{Error, Result};
use crate::matcore::{eigh, ComplexMatrix, ComplexVector};
use crate::sampling;
use crate::schur::{mixture_to_schur, split_contraction, DiagonalUnitaryMixture, SchurMatrix};

/// Column-generation controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaOptions {
    /// Maximum number of pricing rounds.
    pub budget: usize,
    pub seed: u64,
    /// Random phase vectors in the initial family.
    pub random_seeds: usize,
    /// Random restarts of the pricing descent per round.
    pub pricing_starts: usize,
    /// New phase vectors admitted per round.
    pub max_new_per_round: usize,
    /// Prices above `−price_tol` count as non-negative.
    pub price_tol: f64,
    /// Components with smaller weight are dropped from the reported mixture.
    pub prune: f64,
}

impl Default for LambdaOptions {
    fn default() -> Self {
        Self {
            budget: 50,
            seed: 0,
            random_seeds: 8,
            pricing_starts: 8,
            max_new_per_round: 8,
            price_tol: 1e-9,
            prune: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LambdaBound {
    /// `‖Φ_S − Φ_mixture‖_⋄`, recomputed for the reported mixture.
    pub value: f64,
    pub mixture: DiagonalUnitaryMixture<f64>,
    /// Lagrangian lower bound on `D(Φ_S, Λ_d)` from the last round's multipliers.
    pub lower: f64,
    pub rounds: usize,
    pub atoms: usize,
    /// Whether pricing found no improving phase vector before the budget ran out.
    pub converged: bool,
    pub sdp_iterations: usize,
}

fn phase_of(z: Complex64) -> Complex64 {
    let n = z.norm();
    if n > 1e-14 {
        z / n
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Fixes the irrelevant global phase: `u_0 = 1`.
fn canonical(mut u: ComplexVector) -> ComplexVector {
    let p = phase_of(u[0]).conj();
    u *= p;
    u.iter_mut().for_each(|z| *z = phase_of(*z));
    u
}

fn seeds(s: &ComplexMatrix, opts: &LambdaOptions) -> Result<Vec<ComplexVector>> {
    let d = s.nrows();
    let one = Complex64::new(1.0, 0.0);
    let mut out = vec![ComplexVector::from_element(d, one)];
    if d <= 7 {
        for mask in 1..(1usize << (d - 1)) {
            out.push(ComplexVector::from_fn(d, |i, _| {
                if i > 0 && mask >> (i - 1) & 1 == 1 {
                    -one
                } else {
                    one
                }
            }));
        }
    }
    // rows of S rounded to phases: u_i = 1, u_j = conj(phase(s_ij))
    for i in 0..d {
        out.push(ComplexVector::from_fn(d, |j, _| if j == i { one } else { phase_of(s[(i, j)]).conj() }));
    }
    for k in 0..d.min(3) {
        let e = eigh(s)?;
        out.push(e.vectors.column(k).map(phase_of));
    }
    if d == 2 {
        // s_01 = (v + w)/2 is realized exactly by (1, v̄) and (1, w̄)
        let (v, w) = split_contraction(s[(0, 1)])?;
        out.push(ComplexVector::from_vec(vec![one, v.conj()]));
        out.push(ComplexVector::from_vec(vec![one, w.conj()]));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5EED);
    for _ in 0..opts.random_seeds {
        out.push(ComplexVector::from_fn(d, |_, _| sampling::phase::<f64, _>(&mut rng)));
    }
    Ok(dedup(out.into_iter().map(canonical).collect(), &[]))
}

fn dedup(cands: Vec<ComplexVector>, existing: &[ComplexVector]) -> Vec<ComplexVector> {
    let mut out: Vec<ComplexVector> = Vec::new();
    for u in cands {
        let dup = existing
            .iter()
            .chain(out.iter())
            .any(|v| (v - &u).iter().all(|z| z.norm() < 1e-8));
        if !dup {
            out.push(u);
        }
    }
    out
}

/// Coordinate descent on `u†Hu` over unit-modulus `u`.
fn price_descent(h: &ComplexMatrix, mut u: ComplexVector) -> ComplexVector {
    let d = u.len();
    for _ in 0..500 {
        let mut changed = false;
        for i in 0..d {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    s += h[(i, j)] * u[j];
                }
            }
            if s.norm() < 1e-15 {
                continue;
            }
            let next = -s / s.norm();
            if (next - u[i]).norm() > 1e-13 {
                u[i] = next;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    canonical(u)
}

fn price(fit: &MixtureFit, atoms: &[ComplexVector], rng: &mut ChaCha8Rng, opts: &LambdaOptions) -> Result<Vec<ComplexVector>> {
    let h = &fit.pricing;
    let d = h.nrows();
    let mut starts: Vec<ComplexVector> = atoms
        .iter()
        .zip(&fit.weights)
        .filter(|(_, &w)| w > 1e-8)
        .map(|(u, _)| u.clone())
        .collect();
    let e = eigh(h)?;
    starts.push(e.vectors.column(d - 1).map(phase_of));
    for _ in 0..opts.pricing_starts {
        starts.push(ComplexVector::from_fn(d, |_, _| sampling::phase::<f64, _>(&mut *rng)));
    }
    let mut found: Vec<(f64, ComplexVector)> = starts
        .into_iter()
        .map(|s| price_descent(h, s))
        .map(|u| (fit.reduced_cost(&u), u))
        .filter(|(c, _)| *c < -opts.price_tol)
        .collect();
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    let fresh = dedup(found.into_iter().map(|(_, u)| u).collect(), atoms);
    Ok(fresh.into_iter().take(opts.max_new_per_round).collect())
}

/// Certified upper bound on `D(Φ_S, Λ_d)` with the mixture attaining it.
pub fn lambda_distance_upper(s: &SchurMatrix<f64>, budget: usize) -> Result<LambdaBound> {
    lambda_distance_upper_with(
        s,
        &LambdaOptions {
            budget,
            ..LambdaOptions::default()
        },
    )
}

pub fn lambda_distance_upper_with(s: &SchurMatrix<f64>, opts: &LambdaOptions) -> Result<LambdaBound> {
    if opts.budget == 0 {
        return Err(Error::Parameter("iteration budget must be positive".into()));
    }
    if !s.is_channel() {
        return Err(Error::Precondition("input is not a Schur channel".into()));
    }
    let sm = s.matrix();
    let d = s.dim();
    let mut atoms = seeds(sm, opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sdp_iterations = 0;
    let mut rounds = 0;
    let mut converged = false;
    let mut fit = mixture_fit(sm, &atoms)?;
    sdp_iterations += fit.info.iterations;
    while rounds < opts.budget {
        rounds += 1;
        let fresh = price(&fit, &atoms, &mut rng, opts)?;
        if fresh.is_empty() {
            converged = true;
            break;
        }
        // keep the active part of the family bounded
        let keep: Vec<ComplexVector> = atoms
            .iter()
            .zip(&fit.weights)
            .filter(|(_, &w)| w > 1e-12)
            .map(|(u, _)| u.clone())
            .collect();
        atoms = if keep.len() + fresh.len() < atoms.len() / 2 { keep } else { atoms };
        atoms.extend(fresh);
        fit = mixture_fit(sm, &atoms)?;
        sdp_iterations += fit.info.iterations;
    }

    // Lagrangian bound: shifting the multiplier of Σw = 1 by min(0, d·λmin(H) + y₀)
    // makes the multipliers feasible for every phase vector.
    let lam_min = eigh(&fit.pricing)?.min();
    let lower = (-fit.info.dual_value + (d as f64 * lam_min + fit.offset).min(0.0)).max(0.0);

    let mut pairs: Vec<(f64, ComplexVector)> = fit
        .weights
        .iter()
        .copied()
        .zip(atoms.iter().cloned())
        .filter(|(w, _)| *w > opts.prune)
        .collect();
    if pairs.is_empty() {
        return Err(Error::Numerical("mixture weights vanished".into()));
    }
    let total: f64 = pairs.iter().map(|p| p.0).sum();
    pairs.iter_mut().for_each(|p| p.0 /= total);
    let (weights, phases): (Vec<f64>, Vec<ComplexVector>) = pairs.into_iter().unzip();
    let mixture = DiagonalUnitaryMixture::new(weights, phases)?;
    let residual = sm - mixture_to_schur(&mixture).matrix();
    let norm = schur_multiplier_norm(&residual)?;
    sdp_iterations += norm.info.iterations;
    Ok(LambdaBound {
        value: norm.value,
        atoms: mixture.len(),
        mixture,
        lower: lower.min(norm.value),
        rounds,
        converged,
        sdp_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::identity;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_channel_is_in_lambda() {
        let r = lambda_distance_upper(&SchurMatrix::ones(3), 5).unwrap();
        assert!(r.value < 1e-6, "{}", r.value);
    }

    #[test]
    fn qubit_schur_channels_are_in_lambda() {
        for a in [c(0.3, 0.4), c(0.0, 0.0), c(-0.9, 0.1), c(0.6, -0.8)] {
            let s = SchurMatrix::channel(ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), a, a.conj(), c(1., 0.)])).unwrap();
            let r = lambda_distance_upper(&s, 5).unwrap();
            assert!(r.value <= 1e-5, "{a}: {}", r.value);
        }
    }

    #[test]
    fn dephasing_is_in_lambda() {
        let s = SchurMatrix::channel(identity(4)).unwrap();
        let r = lambda_distance_upper(&s, 10).unwrap();
        assert!(r.value <= 1e-5, "{}", r.value);
        assert!(r.lower <= r.value);
    }

    #[test]
    fn budget_zero_rejected() {
        assert!(lambda_distance_upper(&SchurMatrix::ones(2), 0).is_err());
        let not_channel = SchurMatrix::new(identity::<f64>(2).scale(2.0)).unwrap();
        assert!(lambda_distance_upper(&not_channel, 3).is_err());
    }
}
