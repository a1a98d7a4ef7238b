//! `C_Φ = min_{L ∈ K(Φ)} Tr(|L| − I)²/d` and unitary detection in the Kraus span.
//!
//! Writing `Tr(|L| − I)² = ‖L‖² − 2 Tr|L| + d` and `Tr|L| = max_U Re Tr(U†L)`
//! turns the problem into `min ‖L − U‖²/d` over `L ∈ K(Φ)` and unitary `U`,
//! so `C_Φ` is the squared Hilbert–Schmidt distance from the span to the
//! unitary group, divided by `d`. Each run alternates `U ← polar(L)` and
//! `L ← P_K(U)`, which is a projected gradient step and never increases the
//! objective, then polishes with a coordinate pattern search.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::matcore::{hs_inner, polar_unitary, singular_values, ComplexMatrix};
use crate::sampling;

/// Multi-start controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CPhiOptions {
    /// Random starts drawn from the sphere `‖L‖_F² = d`, in addition to the
    /// basis directions and the projection of the identity.
    pub starts: usize,
    pub max_iter: usize,
    /// Stop a run when an alternation step lowers the objective by less than this.
    pub tol: f64,
    pub polish: bool,
    pub seed: u64,
}

impl Default for CPhiOptions {
    fn default() -> Self {
        Self {
            starts: 32,
            max_iter: 20_000,
            tol: 1e-16,
            polish: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CPhiResult {
    pub value: f64,
    /// Minimizer `L = Σ_i λ_i B_i`.
    pub l: ComplexMatrix,
    /// Coefficients `λ_i`, first nonzero entry real and positive.
    pub coeffs: Vec<Complex64>,
    /// Orthonormal basis `B_i` of `K(Φ)`.
    pub basis: Vec<ComplexMatrix>,
    pub starts: usize,
    pub best_start: usize,
    pub iterations: usize,
    pub evaluations: usize,
}

impl CPhiResult {
    /// Polar unitary of the minimizer when `value ≤ tol` and it is unitary within `√tol`.
    pub fn unitary(&self, tol: f64) -> Option<ComplexMatrix> {
        if self.value > tol {
            return None;
        }
        let u = polar_unitary(&self.l).ok()?;
        let d = u.nrows();
        let dev = (u.adjoint() * &u - ComplexMatrix::identity(d, d))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if dev > tol.sqrt() {
            return None;
        }
        Some(normalize_phase(u))
    }
}

/// Multiplies by a global phase making the first nonzero entry of the first column real positive.
pub fn normalize_phase(mut u: ComplexMatrix) -> ComplexMatrix {
    if let Some(z) = u.column(0).iter().copied().find(|z| z.norm() > 1e-12) {
        let ph = z.conj() / z.norm();
        u *= ph;
    }
    u
}

fn normalize_coeffs(c: &mut [Complex64]) {
    if let Some(z) = c.iter().copied().find(|z| z.norm() > 1e-12) {
        let ph = z.conj() / z.norm();
        for x in c.iter_mut() {
            *x *= ph;
        }
    }
}

fn lex_cmp(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

struct Span<'a> {
    basis: &'a [ComplexMatrix],
    d: usize,
}

impl Span<'_> {
    fn combine(&self, c: &[Complex64]) -> ComplexMatrix {
        let mut l = ComplexMatrix::zeros(self.d, self.d);
        for (b, &z) in self.basis.iter().zip(c) {
            l += b * z;
        }
        l
    }

    fn project(&self, u: &ComplexMatrix) -> Vec<Complex64> {
        self.basis.iter().map(|b| hs_inner(b, u)).collect()
    }

    fn objective(&self, c: &[Complex64]) -> f64 {
        singular_values(&self.combine(c))
            .iter()
            .map(|s| (s - 1.0).powi(2))
            .sum::<f64>()
            / self.d as f64
    }
}

struct Run {
    value: f64,
    coeffs: Vec<Complex64>,
    iterations: usize,
    evaluations: usize,
}

fn descend(span: &Span, start: Vec<Complex64>, opts: &CPhiOptions) -> Result<Run> {
    let mut c = start;
    let mut value = span.objective(&c);
    let mut iterations = 0;
    let mut evaluations = 1;
    for _ in 0..opts.max_iter {
        let u = polar_unitary(&span.combine(&c))?;
        let next = span.project(&u);
        let v = span.objective(&next);
        evaluations += 1;
        iterations += 1;
        if v > value {
            break;
        }
        let done = value - v <= opts.tol;
        c = next;
        value = v;
        if done {
            break;
        }
    }
    if opts.polish {
        let (v, n) = pattern_search(span, &mut c, value);
        value = v;
        evaluations += n;
    }
    Ok(Run {
        value,
        coeffs: c,
        iterations,
        evaluations,
    })
}

/// Compass search over the real and imaginary parts of the coefficients.
fn pattern_search(span: &Span, c: &mut [Complex64], mut value: f64) -> (f64, usize) {
    let mut step = 1e-3;
    let mut evals = 0;
    while step > 1e-10 && evals < 20_000 {
        let mut improved = false;
        for k in 0..c.len() {
            for dir in [
                Complex64::new(step, 0.0),
                Complex64::new(-step, 0.0),
                Complex64::new(0.0, step),
                Complex64::new(0.0, -step),
            ] {
                c[k] += dir;
                let v = span.objective(c);
                evals += 1;
                if v < value {
                    value = v;
                    improved = true;
                } else {
                    c[k] -= dir;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (value, evals)
}

/// Minimizes `Tr(|L| − I)²/d` over the Kraus operator space of a square channel.
pub fn c_phi(ch: &KrausChannel) -> Result<CPhiResult> {
    c_phi_with(ch, &CPhiOptions::default())
}

pub fn c_phi_with(ch: &KrausChannel, opts: &CPhiOptions) -> Result<CPhiResult> {
    if !ch.is_square() {
        return Err(Error::Dimension("C_Φ needs equal input and output dimensions".into()));
    }
    let basis = ch.kraus_space_basis();
    if basis.is_empty() {
        return Err(Error::Parameter("Kraus operator space is {0}".into()));
    }
    let d = ch.kraus()[0].nrows();
    let k = basis.len();
    let span = Span { basis: &basis, d };
    let radius = (d as f64).sqrt();

    let mut starts: Vec<Vec<Complex64>> = Vec::with_capacity(opts.starts + k + 1);
    starts.push(span.project(&ComplexMatrix::identity(d, d)));
    for i in 0..k {
        let mut e = vec![Complex64::new(0.0, 0.0); k];
        e[i] = Complex64::new(radius, 0.0);
        starts.push(e);
    }
    for s in 0..opts.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(s as u64));
        let v = sampling::unit_vector::<f64, _>(k, &mut rng);
        starts.push(v.iter().map(|z| z * radius).collect());
    }

    let runs: Vec<Run> = starts
        .into_par_iter()
        .map(|s| descend(&span, s, opts))
        .collect::<Result<_>>()?;

    let iterations = runs.iter().map(|r| r.iterations).sum();
    let evaluations = runs.iter().map(|r| r.evaluations).sum();
    let n_starts = runs.len();
    let mut normalized: Vec<(usize, f64, Vec<Complex64>)> = runs
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            normalize_coeffs(&mut r.coeffs);
            (i, r.value, r.coeffs)
        })
        .collect();
    let min = normalized.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    normalized.retain(|r| r.1 <= min + 1e-12);
    normalized.sort_by(|a, b| lex_cmp(&a.2, &b.2).then(a.0.cmp(&b.0)));
    let (best_start, _, coeffs) = normalized.swap_remove(0);
    let l = span.combine(&coeffs);
    let value = span.objective(&coeffs);
    Ok(CPhiResult {
        value,
        l,
        coeffs,
        basis,
        starts: n_starts,
        best_start,
        iterations,
        evaluations,
    })
}

/// A unitary in the Kraus span, found when `C_Φ ≤ tol`.
pub fn unitary_in_span(ch: &KrausChannel, tol: f64) -> Result<Option<ComplexMatrix>> {
    Ok(c_phi(ch)?.unitary(tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{diag, diag_real};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example1() -> KrausChannel {
        let r = 0.5f64.sqrt();
        KrausChannel::new(vec![
            diag(&[c(1., 0.), c(0., 0.), c(r, 0.), c(r, 0.)]),
            diag(&[c(0., 0.), c(1., 0.), c(r, 0.), c(0., -r)]),
        ])
        .unwrap()
    }

    #[test]
    fn identity_has_zero() {
        let r = c_phi(&KrausChannel::identity(3)).unwrap();
        assert!(r.value < 1e-12);
        let u = r.unitary(1e-8).unwrap();
        assert!((&u - ComplexMatrix::identity(3, 3)).iter().all(|z| z.norm() < 1e-8));
    }

    #[test]
    fn phase_flip_unitary_recovered() {
        let z = diag_real(&[1.0, -1.0]);
        let ch = KrausChannel::unitary(z.clone()).unwrap();
        let u = unitary_in_span(&ch, 1e-8).unwrap().unwrap();
        assert!((&u - &z).iter().all(|e| e.norm() < 1e-8));
    }

    #[test]
    fn example1_value() {
        let r = c_phi(&example1()).unwrap();
        assert!(r.value > 0.01, "{}", r.value);
        assert!((r.value - 0.017_358_17).abs() < 1e-6, "{}", r.value);
        assert!(r.unitary(1e-4).is_none());
        assert!((r.value - span_value(&r)).abs() < 1e-12);
    }

    fn span_value(r: &CPhiResult) -> f64 {
        let d = r.l.nrows() as f64;
        singular_values(&r.l).iter().map(|s| (s - 1.0).powi(2)).sum::<f64>() / d
    }

    #[test]
    fn deterministic_and_seeded() {
        let a = c_phi(&example1()).unwrap();
        let b = c_phi(&example1()).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.coeffs, b.coeffs);
        assert!(a.coeffs[0].im == 0.0 && a.coeffs[0].re >= 0.0);
    }

    #[test]
    fn rejects_rectangular() {
        let ch = KrausChannel::new(vec![ComplexMatrix::from_element(2, 3, c(0.5, 0.0))]).unwrap();
        assert!(c_phi(&ch).is_err());
    }
}
