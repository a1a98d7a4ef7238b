//! Majorization, Birkhoff decomposition of doubly stochastic matrices and the
//! mixed-unitary reproduction of a unital channel's output at one input.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bounds::cphi::normalize_phase;
use crate::channels::{KrausChannel, LinearMap};
use crate::error::{Error, Result};
use crate::matcore::{eigh, hermitian_part, ComplexMatrix, DensityOperator};

/// Tolerance on partial sums in [`majorize_check`].
pub const MAJORIZE_TOL: f64 = 1e-10;

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `x ≺ y`: every partial sum of the decreasingly sorted `x` is at most that of `y`.
pub fn majorize_check(x: &[f64], y: &[f64]) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!("vectors of length {} and {}", x.len(), y.len())));
    }
    let (sx, sy): (f64, f64) = (x.iter().sum(), y.iter().sum());
    if (sx - sy).abs() > 1e-9 {
        return Err(Error::Parameter(format!("sums differ: {sx} vs {sy}")));
    }
    let (x, y) = (sorted_desc(x), sorted_desc(y));
    let (mut px, mut py) = (0.0, 0.0);
    for (a, b) in x.iter().zip(&y) {
        px += a;
        py += b;
        if px > py + MAJORIZE_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Doubly stochastic `D` with `x = D y` for decreasingly sorted `x ≺ y`,
/// built as a product of at most `d − 1` T-transforms `λI + (1 − λ)Q_{jk}`.
pub fn t_transform_chain(x: &[f64], y: &[f64]) -> Result<DMatrix<f64>> {
    let d = x.len();
    if y.len() != d {
        return Err(Error::Dimension("vectors differ in length".into()));
    }
    if !majorize_check(x, y)? {
        return Err(Error::Precondition("x is not majorized by y".into()));
    }
    let eps = 1e-14 * (1.0 + y.iter().map(|v| v.abs()).fold(0.0, f64::max));
    let mut cur = y.to_vec();
    let mut dmat = DMatrix::<f64>::identity(d, d);
    for _ in 0..d {
        let Some(j) = (0..d).rev().find(|&j| cur[j] > x[j] + eps) else {
            break;
        };
        let Some(k) = (j + 1..d).find(|&k| cur[k] < x[k] - eps) else {
            break;
        };
        let delta = (cur[j] - x[j]).min(x[k] - cur[k]);
        let lambda = 1.0 - delta / (cur[j] - cur[k]);
        let mut t = DMatrix::<f64>::identity(d, d);
        t[(j, j)] = lambda;
        t[(k, k)] = lambda;
        t[(j, k)] = 1.0 - lambda;
        t[(k, j)] = 1.0 - lambda;
        let (a, b) = (cur[j], cur[k]);
        cur[j] = lambda * a + (1.0 - lambda) * b;
        cur[k] = (1.0 - lambda) * a + lambda * b;
        dmat = t * dmat;
    }
    Ok(dmat)
}

/// Permutation `π` as the matrix with `P[i, π(i)] = 1`.
pub fn permutation_matrix(perm: &[usize]) -> DMatrix<f64> {
    let d = perm.len();
    let mut p = DMatrix::zeros(d, d);
    for (i, &j) in perm.iter().enumerate() {
        p[(i, j)] = 1.0;
    }
    p
}

/// Perfect matching of rows to columns inside `allowed`, by augmenting paths.
fn perfect_matching(d: usize, allowed: &dyn Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    fn augment(
        i: usize,
        d: usize,
        allowed: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        col_of: &mut [Option<usize>],
    ) -> bool {
        for j in 0..d {
            if allowed(i, j) && !seen[j] {
                seen[j] = true;
                if col_of[j].is_none_or(|r| augment(r, d, allowed, seen, col_of)) {
                    col_of[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let mut col_of: Vec<Option<usize>> = vec![None; d];
    for i in 0..d {
        let mut seen = vec![false; d];
        if !augment(i, d, allowed, &mut seen, &mut col_of) {
            return None;
        }
    }
    let mut perm = vec![0; d];
    for (j, r) in col_of.iter().enumerate() {
        perm[r.expect("every column matched")] = j;
    }
    Some(perm)
}

/// Removes terms until at most `(d − 1)² + 1` remain, keeping `Σ w_k P_k` fixed.
fn caratheodory(terms: &mut Vec<(f64, Vec<usize>)>, d: usize) {
    let limit = (d - 1) * (d - 1) + 1;
    while terms.len() > limit {
        let k = terms.len();
        // columns [vec(P_k); 1]
        let a = DMatrix::from_fn(d * d + 1, k, |r, c| {
            if r == d * d {
                1.0
            } else {
                let (i, j) = (r / d, r % d);
                if terms[c].1[i] == j {
                    1.0
                } else {
                    0.0
                }
            }
        });
        let e = (a.transpose() * &a).symmetric_eigen();
        let ev: &nalgebra::DVector<f64> = &e.eigenvalues;
        let idx = (0..k).min_by(|&p, &q| ev[p].total_cmp(&ev[q])).unwrap();
        let mut v: Vec<f64> = e.eigenvectors.column(idx).iter().copied().collect();
        if v.iter().all(|x| *x <= 1e-14) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let (mut t, mut drop) = (f64::INFINITY, 0);
        for (c, &vc) in v.iter().enumerate() {
            if vc > 1e-14 && terms[c].0 / vc < t {
                t = terms[c].0 / vc;
                drop = c;
            }
        }
        for (c, &vc) in v.iter().enumerate() {
            terms[c].0 -= t * vc;
        }
        terms.remove(drop);
        terms.retain(|term| term.0 > 1e-15);
    }
}

/// Writes a doubly stochastic matrix as `Σ_k w_k P_k`.
///
/// Each step takes the perfect matching on the positive support whose
/// smallest matched entry is largest and subtracts that entry, zeroing at
/// least one position.
pub fn birkhoff_decompose(m: &DMatrix<f64>) -> Result<Vec<(f64, Vec<usize>)>> {
    let d = m.nrows();
    if d == 0 || m.ncols() != d {
        return Err(Error::Dimension("doubly stochastic matrix must be square and non-empty".into()));
    }
    if m.iter().any(|&x| !(x >= -1e-10)) {
        return Err(Error::Parameter("negative entry in doubly stochastic matrix".into()));
    }
    for i in 0..d {
        let (r, c) = (m.row(i).sum(), m.column(i).sum());
        if (r - 1.0).abs() > 1e-9 || (c - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!("row/column {i} sums to {r}/{c}")));
        }
    }
    let mut rest = m.map(|x| x.max(0.0));
    let mut terms: Vec<(f64, Vec<usize>)> = Vec::new();
    let zero = 1e-13;
    while rest.iter().any(|&x| x > zero) && terms.len() <= d * d {
        let mut levels: Vec<f64> = rest.iter().copied().filter(|&x| x > zero).collect();
        levels.sort_by(|a, b| b.total_cmp(a));
        levels.dedup();
        // largest threshold whose support still admits a perfect matching
        let (mut lo, mut hi) = (0usize, levels.len() - 1);
        let matching_at = |t: f64| perfect_matching(d, &|i, j| rest[(i, j)] >= t);
        if matching_at(levels[hi]).is_none() {
            let mass: f64 = rest.iter().sum();
            if mass > 1e-8 {
                return Err(Error::Precondition(format!(
                    "no perfect matching on the support (remaining mass {mass:.3e}); input is not doubly stochastic"
                )));
            }
            break;
        }
        while lo < hi {
            let mid = (lo + hi) / 2;
            if matching_at(levels[mid]).is_some() {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let perm = matching_at(levels[lo]).expect("threshold admits a matching");
        let w = perm.iter().enumerate().map(|(i, &j)| rest[(i, j)]).fold(f64::INFINITY, f64::min);
        for (i, &j) in perm.iter().enumerate() {
            rest[(i, j)] -= w;
        }
        terms.push((w, perm));
    }
    caratheodory(&mut terms, d);
    let total: f64 = terms.iter().map(|t| t.0).sum();
    terms.iter_mut().for_each(|t| t.0 /= total);
    Ok(terms)
}

/// `Φ(ρ) = Σ_k p_k U_k ρ U_k†` for a unital channel at a fixed input.
#[derive(Debug, Clone)]
pub struct UhlmannMixture {
    pub weights: Vec<f64>,
    pub unitaries: Vec<ComplexMatrix>,
    /// Doubly stochastic matrix mapping the spectrum of `ρ` to that of `Φ(ρ)`.
    pub doubly_stochastic: DMatrix<f64>,
}

impl UhlmannMixture {
    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(x.nrows(), x.ncols());
        for (&p, u) in self.weights.iter().zip(&self.unitaries) {
            out += (u * x * u.adjoint()).scale(p);
        }
        out
    }

    /// The mixture as a mixed-unitary channel.
    pub fn to_channel(&self) -> Result<KrausChannel> {
        KrausChannel::new(
            self.weights
                .iter()
                .zip(&self.unitaries)
                .map(|(&p, u)| u.scale(p.sqrt()))
                .collect(),
        )
    }
}

/// Mixed-unitary channel agreeing with the unital channel `ch` on `ρ`.
///
/// Spectra are sorted decreasingly; with `ρ = W Diag(y) W†`,
/// `Φ(ρ) = V Diag(x) V†` and `D = Σ_k p_k P_k` from [`t_transform_chain`] and
/// [`birkhoff_decompose`], the unitaries are `U_k = V P_k W†`.
pub fn uhlmann_mixture(ch: &KrausChannel, rho: &DensityOperator) -> Result<UhlmannMixture> {
    if !(ch.is_tp() && ch.is_unital()) {
        return Err(Error::Precondition("channel must be unital and trace preserving".into()));
    }
    if ch.dim_in() != rho.dim() || !ch.is_square() {
        return Err(Error::Dimension("state does not match the channel".into()));
    }
    let out = hermitian_part(&ch.apply(rho.matrix())?);
    let ey = eigh(rho.matrix())?;
    let ex = eigh(&out)?;
    if !majorize_check(&ex.values, &ey.values)? {
        return Err(Error::Precondition(
            "output spectrum is not majorized by the input spectrum".into(),
        ));
    }
    let dmat = t_transform_chain(&ex.values, &ey.values)?;
    let terms = birkhoff_decompose(&dmat)?;
    let w_adj = ey.vectors.adjoint();
    let unitaries = terms
        .iter()
        .map(|(_, perm)| {
            let p = permutation_matrix(perm).map(|x| Complex64::new(x, 0.0));
            normalize_phase(&ex.vectors * p * &w_adj)
        })
        .collect();
    Ok(UhlmannMixture {
        weights: terms.iter().map(|t| t.0).collect(),
        unitaries,
        doubly_stochastic: dmat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::identity;

    fn recon(terms: &[(f64, Vec<usize>)], d: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(d, d);
        for (w, p) in terms {
            m += permutation_matrix(p) * *w;
        }
        m
    }

    #[test]
    fn majorize_examples() {
        assert!(majorize_check(&[0.5, 0.5], &[1.0, 0.0]).unwrap());
        assert!(!majorize_check(&[1.0, 0.0], &[0.5, 0.5]).unwrap());
        assert!(majorize_check(&[0.2, 0.3, 0.5], &[0.5, 0.2, 0.3]).unwrap());
        assert!(majorize_check(&[1.0], &[0.5]).is_err());
    }

    #[test]
    fn birkhoff_examples() {
        let p = permutation_matrix(&[2, 0, 1]);
        let t = birkhoff_decompose(&p).unwrap();
        assert_eq!(t, vec![(1.0, vec![2, 0, 1])]);
        let half = DMatrix::from_element(2, 2, 0.5);
        let t = birkhoff_decompose(&half).unwrap();
        assert_eq!(t.len(), 2);
        assert!((recon(&t, 2) - &half).amax() < 1e-12);
        assert!(birkhoff_decompose(&DMatrix::from_element(2, 2, 0.4)).is_err());
    }

    #[test]
    fn t_transform_example() {
        let d = t_transform_chain(&[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert!((d - DMatrix::from_element(2, 2, 0.5)).amax() < 1e-15);
        let d = t_transform_chain(&[0.5, 0.3, 0.2], &[0.5, 0.3, 0.2]).unwrap();
        assert_eq!(d, DMatrix::identity(3, 3));
    }

    #[test]
    fn uhlmann_examples() {
        let rho = DensityOperator::new(ComplexMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.7, 0.), Complex64::new(0.1, 0.2),
            Complex64::new(0.1, -0.2), Complex64::new(0.3, 0.),
        ])).unwrap();
        let m = uhlmann_mixture(&KrausChannel::identity(2), &rho).unwrap();
        assert_eq!(m.weights.len(), 1);
        assert!((&m.unitaries[0] - identity::<f64>(2)).iter().all(|z| z.norm() < 1e-12));

        let plus = DensityOperator::new(ComplexMatrix::from_element(2, 2, Complex64::new(0.5, 0.))).unwrap();
        let m = uhlmann_mixture(&KrausChannel::dephasing(2), &plus).unwrap();
        assert!((&m.doubly_stochastic - DMatrix::from_element(2, 2, 0.5)).amax() < 1e-12);
        assert_eq!(m.weights.len(), 2);
        let out = m.apply(plus.matrix());
        assert!((out - identity::<f64>(2).scale(0.5)).iter().all(|z| z.norm() < 1e-12));

        let amp = KrausChannel::new(vec![ComplexMatrix::from_row_slice(2, 2, &[
            Complex64::new(1., 0.), Complex64::new(0., 0.), Complex64::new(0., 0.), Complex64::new(0.5, 0.),
        ]), ComplexMatrix::from_row_slice(2, 2, &[
            Complex64::new(0., 0.), Complex64::new(0.75f64.sqrt(), 0.), Complex64::new(0., 0.), Complex64::new(0., 0.),
        ])]).unwrap();
        assert!(uhlmann_mixture(&amp, &plus).is_err());
    }
}
