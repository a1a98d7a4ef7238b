//! Schur multipliers `X ↦ S ∘ X`, Schur channels, the diagonal-unitary twirl
//! and mixtures of diagonal unitary channels.
//!
//! A Schur multiplier is a channel iff `S` is positive semidefinite with unit
//! diagonal; it is then automatically unital. Multipliers that are not
//! channels (differences, twirls of non-CP maps) are carried as pairs of
//! diagonal Kraus lists, see [`SchurMultiplier`].

use nalgebra::ComplexField;
use num_complex::Complex;

use crate::channels::{ChoiMatrix, KrausChannel, LinearMap};
use crate::error::{dim_err, Error, Result};
use crate::matcore::{self, eigh, psd_check, ComplexMatrix, ComplexVector, PSD_TOL};
use crate::scalar::{cis, real, Real};

/// Tolerance on `|s_kk − 1|` for the Schur channel designation.
pub const UNIT_DIAGONAL_TOL: f64 = 1e-10;
/// Eigenvalues below this fraction of the largest are dropped when factoring `S`.
pub const RANK_REL_TOL: f64 = 1e-10;
/// Tolerance for probability vectors and unit-modulus phases of mixtures.
pub const MIXTURE_TOL: f64 = 1e-12;

/// Square matrix defining the Schur multiplier `Φ_S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurMatrix<T: Real = f64> {
    s: ComplexMatrix<T>,
}

impl<T: Real> SchurMatrix<T> {
    pub fn new(s: ComplexMatrix<T>) -> Result<Self> {
        if !s.is_square() {
            return dim_err(format!("Schur matrix must be square, got {}x{}", s.nrows(), s.ncols()));
        }
        if !matcore::is_finite(&s) {
            return Err(Error::Parameter("Schur matrix has non-finite entries".into()));
        }
        Ok(Self { s })
    }

    /// Like [`SchurMatrix::new`] but requires a Schur channel.
    pub fn channel(s: ComplexMatrix<T>) -> Result<Self> {
        let m = Self::new(s)?;
        if !m.is_channel() {
            return Err(Error::Structure(
                "Schur matrix is not positive semidefinite with unit diagonal".into(),
            ));
        }
        Ok(m)
    }

    /// All-ones matrix, the identity channel.
    pub fn ones(d: usize) -> Self {
        Self {
            s: ComplexMatrix::from_element(d, d, real(T::one())),
        }
    }

    pub fn dim(&self) -> usize {
        self.s.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.s
    }

    /// Entrywise product `S ∘ X`.
    pub fn apply(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if x.shape() != self.s.shape() {
            return dim_err(format!(
                "Schur multiplier of dimension {} applied to a {}x{} matrix",
                self.dim(),
                x.nrows(),
                x.ncols()
            ));
        }
        Ok(self.s.component_mul(x))
    }

    pub fn is_psd(&self) -> bool {
        psd_check(&self.s, T::tol(PSD_TOL)).unwrap_or(false)
    }

    pub fn has_unit_diagonal(&self) -> bool {
        let tol = T::tol(UNIT_DIAGONAL_TOL);
        self.s
            .diagonal()
            .iter()
            .all(|z| (z.re - T::one()).abs() <= tol && z.im.abs() <= tol)
    }

    /// PSD within 1e-9 and unit diagonal within 1e-10.
    pub fn is_channel(&self) -> bool {
        self.has_unit_diagonal() && self.is_psd()
    }

    /// Diagonal Kraus operators `Diag(a_k)` with `S = Σ_k a_k a_k†`, one per
    /// retained eigenvalue.
    pub fn to_kraus(&self) -> Result<KrausChannel<T>> {
        if !self.is_psd() {
            return Err(Error::Structure(
                "Schur matrix is not positive semidefinite; no Kraus form".into(),
            ));
        }
        let e = eigh(&self.s)?;
        let cutoff = e.max() * T::tol(RANK_REL_TOL);
        let mut kraus = Vec::new();
        for (k, &lam) in e.values.iter().enumerate() {
            if lam <= cutoff || lam <= T::zero() {
                continue;
            }
            let a: Vec<Complex<T>> = e.vectors.column(k).iter().map(|z| z.scale(lam.sqrt())).collect();
            kraus.push(matcore::diag(&a));
        }
        if kraus.is_empty() {
            kraus.push(ComplexMatrix::zeros(self.dim(), self.dim()));
        }
        KrausChannel::new(kraus)
    }

    /// Choi matrix `Σ_ij s_ij |i⟩⟨j| ⊗ |i⟩⟨j|` (output factor first).
    pub fn choi(&self) -> ChoiMatrix<T> {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                m[(i * d + i, j * d + j)] = self.s[(i, j)];
            }
        }
        ChoiMatrix {
            dim_in: d,
            dim_out: d,
            matrix: m,
        }
    }

    /// `Φ_S ⊗ Φ_T = Φ_{S⊗T}`.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            s: matcore::kron(&self.s, &other.s),
        }
    }

    /// Gram vectors with `s_kj = ⟨ξ_k|η_j⟩`.
    ///
    /// With `psd = true` the columns of `√S` are returned for both families
    /// (unit vectors when `S` has unit diagonal). With `psd = false` a balanced
    /// singular-value factorization is returned; it reproduces `S` but makes
    /// no attempt to minimize `max‖ξ‖·max‖η‖`.
    pub fn gram_factorize(&self, psd: bool) -> Result<GramFactors<T>> {
        let d = self.dim();
        if psd {
            if !self.is_psd() {
                return Err(Error::Structure("Gram factorization requested for non-PSD matrix".into()));
            }
            let r = matcore::psd_sqrt(&self.s)?;
            let xi: Vec<ComplexVector<T>> = (0..d).map(|k| r.column(k).into_owned()).collect();
            Ok(GramFactors {
                eta: xi.clone(),
                xi,
            })
        } else {
            let s = matcore::svd(&self.s);
            let mut xi = Vec::with_capacity(d);
            let mut eta = Vec::with_capacity(d);
            for k in 0..d {
                xi.push(ComplexVector::from_fn(d, |l, _| {
                    s.u[(k, l)].conj().scale(s.singular_values[l].sqrt())
                }));
                eta.push(ComplexVector::from_fn(d, |l, _| {
                    s.v[(k, l)].conj().scale(s.singular_values[l].sqrt())
                }));
            }
            Ok(GramFactors { xi, eta })
        }
    }
}

impl<T: Real> LinearMap<T> for SchurMatrix<T> {
    fn dim_in(&self) -> usize {
        self.dim()
    }

    fn dim_out(&self) -> usize {
        self.dim()
    }

    fn apply(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        SchurMatrix::apply(self, x)
    }

    fn apply_adjoint(&self, y: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if y.shape() != self.s.shape() {
            return dim_err("Schur adjoint applied to a matrix of the wrong size");
        }
        Ok(self.s.map(|z| z.conj()).component_mul(y))
    }
}

/// Vectors realizing `s_kj = ⟨ξ_k|η_j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramFactors<T: Real = f64> {
    pub xi: Vec<ComplexVector<T>>,
    pub eta: Vec<ComplexVector<T>>,
}

impl<T: Real> GramFactors<T> {
    /// Rebuilds the matrix `[⟨ξ_k|η_j⟩]`.
    pub fn gram(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.xi.len(), self.eta.len(), |k, j| self.xi[k].dotc(&self.eta[j]))
    }

    /// `max_k ‖ξ_k‖ · max_j ‖η_j‖`, an upper bound on the multiplier norm of `Φ_S`.
    pub fn norm_bound(&self) -> T {
        let max_norm = |vs: &[ComplexVector<T>]| {
            vs.iter()
                .map(|v| v.iter().fold(T::zero(), |a, z| a + z.modulus_squared()).sqrt())
                .fold(T::zero(), |a, b| if b > a { b } else { a })
        };
        max_norm(&self.xi) * max_norm(&self.eta)
    }

    /// Checks a user-supplied factorization against `S` entrywise.
    pub fn verify(&self, s: &SchurMatrix<T>, tol: T) -> bool {
        if self.xi.len() != s.dim() || self.eta.len() != s.dim() {
            return false;
        }
        let g = self.gram();
        (&g - s.matrix()).iter().all(|z| z.modulus() <= tol)
    }
}

/// Schur multiplier `X ↦ Σ_k Diag(e_k) X Diag(f_k)†` kept as its diagonal Kraus pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurMultiplier<T: Real = f64> {
    pub left: Vec<ComplexVector<T>>,
    pub right: Vec<ComplexVector<T>>,
}

impl<T: Real> SchurMultiplier<T> {
    /// `s_ij = Σ_k e_k[i] f_k[j]^*`.
    pub fn matrix(&self) -> SchurMatrix<T> {
        let d = self.left.first().map_or(0, |v| v.len());
        let mut s = ComplexMatrix::zeros(d, d);
        for (e, f) in self.left.iter().zip(&self.right) {
            s += e * f.adjoint();
        }
        SchurMatrix { s }
    }

    /// True when every left vector equals its right partner, so the map is CP.
    pub fn is_symmetric_pair(&self) -> bool {
        self.left == self.right
    }
}

/// Average of `U† Φ(U · V) V†` over independent Haar-random diagonal unitaries.
///
/// The integral collapses to keeping the diagonals of the Kraus operators:
/// `s'_ij = Σ_k (A_k)_ii (A_k)_jj^*`.
pub fn twirl<T: Real>(ch: &KrausChannel<T>) -> Result<SchurMultiplier<T>> {
    if !ch.is_square() {
        return dim_err("twirl requires a channel with equal input and output dimension");
    }
    let diags: Vec<ComplexVector<T>> = ch.kraus().iter().map(|a| a.diagonal()).collect();
    Ok(SchurMultiplier {
        left: diags.clone(),
        right: diags,
    })
}

/// True iff the channel is a Schur multiplier, decided by comparing its Choi
/// matrix with that of its twirl.
pub fn is_schur_map<T: Real>(ch: &KrausChannel<T>, tol: T) -> bool {
    let Ok(t) = twirl(ch) else { return false };
    let a = ch.choi().matrix;
    let b = t.matrix().choi().matrix;
    (&a - &b).iter().all(|z| z.modulus() <= tol)
}

/// Writes a contraction `|a| ≤ 1` as the midpoint of two unit-modulus numbers.
///
/// Returns `(e^{i(φ+θ)}, e^{i(φ−θ)})` with `φ = arg a` (`arg 0 = 0`) and
/// `θ = arccos |a|`.
pub fn split_contraction<T: Real>(a: Complex<T>) -> Result<(Complex<T>, Complex<T>)> {
    let m = a.modulus();
    if m > T::one() + T::tol(1e-12) {
        return Err(Error::Domain(format!("|a| = {} exceeds 1", m.as_f64())));
    }
    let m = if m > T::one() { T::one() } else { m };
    let phi = if m == T::zero() { T::zero() } else { a.im.atan2(a.re) };
    let theta = m.acos();
    Ok((cis(phi + theta), cis(phi - theta)))
}

/// Element of `Λ_d`: the Schur channel `Σ_k p_k U_k · U_k†` with diagonal unitaries `U_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalUnitaryMixture<T: Real = f64> {
    weights: Vec<T>,
    phases: Vec<ComplexVector<T>>,
}

impl<T: Real> DiagonalUnitaryMixture<T> {
    pub fn new(weights: Vec<T>, phases: Vec<ComplexVector<T>>) -> Result<Self> {
        let dim = check_probability_and_shapes(&weights, &phases)?;
        let tol = T::tol(MIXTURE_TOL);
        for u in &phases {
            if u.iter().any(|z| (z.modulus() - T::one()).abs() > tol) {
                return Err(Error::Parameter("phase entries must have unit modulus".into()));
            }
        }
        let _ = dim;
        Ok(Self { weights, phases })
    }

    /// Single diagonal unitary with weight one.
    pub fn pure(phases: ComplexVector<T>) -> Result<Self> {
        Self::new(vec![T::one()], vec![phases])
    }

    pub fn dim(&self) -> usize {
        self.phases[0].len()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn phases(&self) -> &[ComplexVector<T>] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Kraus form `{√p_k Diag(u_k)}`.
    pub fn to_kraus(&self) -> KrausChannel<T> {
        let kraus = self
            .weights
            .iter()
            .zip(&self.phases)
            .map(|(&p, u)| matcore::diag(u.as_slice()).scale(p.sqrt()))
            .collect();
        KrausChannel::new(kraus).expect("mixture components share a dimension")
    }

    /// Drops components whose weight is at most `cutoff` and renormalizes.
    pub fn pruned(&self, cutoff: T) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|&k| self.weights[k] > cutoff).collect();
        if keep.is_empty() {
            return self.clone();
        }
        let total = keep.iter().fold(T::zero(), |a, &k| a + self.weights[k]);
        Self {
            weights: keep.iter().map(|&k| self.weights[k] / total).collect(),
            phases: keep.iter().map(|&k| self.phases[k].clone()).collect(),
        }
    }
}

fn check_probability_and_shapes<T: Real>(weights: &[T], vecs: &[ComplexVector<T>]) -> Result<usize> {
    if weights.is_empty() || weights.len() != vecs.len() {
        return Err(Error::Parameter(format!(
            "{} weights for {} components",
            weights.len(),
            vecs.len()
        )));
    }
    let tol = T::tol(MIXTURE_TOL);
    if weights.iter().any(|&w| !(w >= -tol)) {
        return Err(Error::Parameter("weights must be non-negative".into()));
    }
    let total = weights.iter().fold(T::zero(), |a, &w| a + w);
    if (total - T::one()).abs() > tol {
        return Err(Error::Parameter(format!("weights sum to {}", total.as_f64())));
    }
    let dim = vecs[0].len();
    if dim == 0 || vecs.iter().any(|v| v.len() != dim) {
        return dim_err("mixture components have inconsistent dimensions");
    }
    Ok(dim)
}

/// Replaces each diagonal contraction `A_k` by the diagonal unitaries `V_k`,
/// `W_k` with `A_k = (V_k + W_k)/2`, each carrying weight `p_k/2`.
///
/// The output lists `V_1, W_1, V_2, W_2, …`.
pub fn mixture_from_twirl<T: Real>(
    components: &[(T, ComplexVector<T>)],
) -> Result<DiagonalUnitaryMixture<T>> {
    let weights: Vec<T> = components.iter().map(|c| c.0).collect();
    let vecs: Vec<ComplexVector<T>> = components.iter().map(|c| c.1.clone()).collect();
    check_probability_and_shapes(&weights, &vecs)?;
    let half = T::lit(0.5);
    let mut out_w = Vec::with_capacity(2 * components.len());
    let mut out_p = Vec::with_capacity(2 * components.len());
    for (p, a) in components {
        let mut v = a.clone();
        let mut w = a.clone();
        for (i, &z) in a.iter().enumerate() {
            let (vi, wi) = split_contraction(z)?;
            v[i] = vi;
            w[i] = wi;
        }
        out_w.push(*p * half);
        out_p.push(v);
        out_w.push(*p * half);
        out_p.push(w);
    }
    DiagonalUnitaryMixture::new(out_w, out_p)
}

/// `s_ij = Σ_k p_k u_i^{(k)} (u_j^{(k)})^*`.
pub fn mixture_to_schur<T: Real>(m: &DiagonalUnitaryMixture<T>) -> SchurMatrix<T> {
    let d = m.dim();
    let mut s = ComplexMatrix::zeros(d, d);
    for (&p, u) in m.weights.iter().zip(&m.phases) {
        s += (u * u.adjoint()).scale(p);
    }
    SchurMatrix { s }
}

/// Schur matrix `Σ_k p_k a_k a_k†` of a weighted family of diagonal contractions.
pub fn contraction_schur<T: Real>(components: &[(T, ComplexVector<T>)]) -> Result<SchurMatrix<T>> {
    let d = components
        .first()
        .map(|c| c.1.len())
        .ok_or_else(|| Error::Parameter("no components".into()))?;
    let mut s = ComplexMatrix::zeros(d, d);
    for (p, a) in components {
        if a.len() != d {
            return dim_err("contraction vectors have inconsistent dimensions");
        }
        s += (a * a.adjoint()).scale(*p);
    }
    Ok(SchurMatrix { s })
}

/// Restricts every diagonal unitary of a mixture on `C^m ⊗ C^d` to block
/// `block` (zero-based), giving a mixture on `C^d` with unchanged weights.
pub fn compress_block<T: Real>(
    m: &DiagonalUnitaryMixture<T>,
    block: usize,
    d: usize,
) -> Result<DiagonalUnitaryMixture<T>> {
    if d == 0 || m.dim() % d != 0 {
        return dim_err(format!("dimension {} is not a multiple of {d}", m.dim()));
    }
    let blocks = m.dim() / d;
    if block >= blocks {
        return Err(Error::Parameter(format!("block {block} out of range 0..{blocks}")));
    }
    let phases = m
        .phases
        .iter()
        .map(|u| u.rows(block * d, d).into_owned())
        .collect();
    DiagonalUnitaryMixture::new(m.weights.clone(), phases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{diag, diag_real, identity};
    use crate::scalar::c;

    fn max_dev(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn cv(entries: &[(f64, f64)]) -> ComplexVector {
        ComplexVector::from_iterator(entries.len(), entries.iter().map(|&(r, i)| c(r, i)))
    }

    #[test]
    fn apply_examples() {
        let x = ComplexMatrix::from_row_slice(2, 2, &[c(1., 2.), c(3., -1.), c(0.5, 0.), c(4., 4.)]);
        assert_eq!(SchurMatrix::ones(2).apply(&x).unwrap(), x);
        let id = SchurMatrix::new(identity(2)).unwrap();
        assert_eq!(id.apply(&x).unwrap(), diag(&[x[(0, 0)], x[(1, 1)]]));
        let zz = SchurMatrix::new(ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(-1., 0.), c(-1., 0.), c(1., 0.)])).unwrap();
        let z = diag_real(&[1.0, -1.0]);
        assert!(max_dev(&zz.apply(&x).unwrap(), &(&z * &x * z.adjoint())) < 1e-15);
        assert!(zz.apply(&identity(3)).is_err());
    }

    #[test]
    fn kraus_examples() {
        let k = SchurMatrix::<f64>::ones(3).to_kraus().unwrap();
        assert_eq!(k.kraus().len(), 1);
        let j = k.choi().matrix;
        assert!(max_dev(&j, &KrausChannel::identity(3).choi().matrix) < 1e-12);

        let k = SchurMatrix::new(identity::<f64>(3)).unwrap().to_kraus().unwrap();
        assert_eq!(k.kraus().len(), 3);
        assert!(max_dev(&k.choi().matrix, &KrausChannel::dephasing(3).choi().matrix) < 1e-12);

        let bad = SchurMatrix::new(ComplexMatrix::<f64>::from_row_slice(2, 2, &[c(1., 0.), c(2., 0.), c(2., 0.), c(1., 0.)])).unwrap();
        assert!(matches!(bad.to_kraus(), Err(Error::Structure(_))));
    }

    #[test]
    fn channel_designation() {
        assert!(SchurMatrix::<f64>::ones(4).is_channel());
        let not_psd = ComplexMatrix::<f64>::from_row_slice(2, 2, &[c(1., 0.), c(2., 0.), c(2., 0.), c(1., 0.)]);
        assert!(!SchurMatrix::new(not_psd).unwrap().is_channel());
        let bad_diag = ComplexMatrix::<f64>::from_row_slice(2, 2, &[c(1., 0.), c(0.5, 0.), c(0.5, 0.), c(0.9, 0.)]);
        assert!(!SchurMatrix::new(bad_diag.clone()).unwrap().is_channel());
        assert!(SchurMatrix::channel(bad_diag).is_err());
    }

    #[test]
    fn twirl_examples() {
        let z = KrausChannel::unitary(diag_real(&[1.0, -1.0])).unwrap();
        let s = twirl(&z).unwrap().matrix();
        let expect = ComplexMatrix::from_row_slice(2, 2, &[c(1., 0.), c(-1., 0.), c(-1., 0.), c(1., 0.)]);
        assert!(max_dev(s.matrix(), &expect) < 1e-15);

        let r = 0.5f64.sqrt();
        let h = KrausChannel::unitary(ComplexMatrix::from_row_slice(2, 2, &[c(r, 0.), c(r, 0.), c(r, 0.), c(-r, 0.)])).unwrap();
        let s = twirl(&h).unwrap().matrix();
        assert!(max_dev(s.matrix(), &expect.scale(0.5)) < 1e-15);

        // Schur channels are fixed points
        let g = ComplexMatrix::from_row_slice(3, 3, &[
            c(1., 0.), c(0.3, 0.2), c(0., -0.5),
            c(0.3, -0.2), c(1., 0.), c(0.1, 0.),
            c(0., 0.5), c(0.1, 0.), c(1., 0.),
        ]);
        let sm = SchurMatrix::channel(g).unwrap();
        let back = twirl(&sm.to_kraus().unwrap()).unwrap().matrix();
        assert!(max_dev(back.matrix(), sm.matrix()) < 1e-12);
        assert!(is_schur_map(&sm.to_kraus().unwrap(), 1e-10));
        assert!(!is_schur_map(&h, 1e-10));
    }

    #[test]
    fn split_examples() {
        let (v, w) = split_contraction(c::<f64>(1.0, 0.0)).unwrap();
        assert!((v - c(1., 0.)).norm() < 1e-15 && (w - c(1., 0.)).norm() < 1e-15);
        let (v, w) = split_contraction(c::<f64>(0.0, 0.0)).unwrap();
        assert!((v - c(0., 1.)).norm() < 1e-15 && (w - c(0., -1.)).norm() < 1e-15);
        let (v, w) = split_contraction(c::<f64>(0.5, 0.0)).unwrap();
        let third = std::f64::consts::FRAC_PI_3;
        assert!((v - c(third.cos(), third.sin())).norm() < 1e-15);
        assert!((w - c(third.cos(), -third.sin())).norm() < 1e-15);
        assert!(split_contraction(c::<f64>(1.0 + 1e-13, 0.0)).is_ok());
        assert!(matches!(split_contraction(c::<f64>(0.8, 0.7)), Err(Error::Domain(_))));
    }

    #[test]
    fn mixture_from_twirl_examples() {
        let u = cv(&[(1., 0.), (0., 1.), (-1., 0.)]);
        let m = mixture_from_twirl(&[(1.0, u.clone())]).unwrap();
        assert_eq!(m.weights(), &[0.5, 0.5]);
        for p in m.phases() {
            assert!((p - &u).iter().all(|z| z.norm() < 1e-15));
        }
        let m = mixture_from_twirl(&[(1.0, cv(&[(0., 0.)]))]).unwrap();
        assert!((m.phases()[0][0] - c(0., 1.)).norm() < 1e-15);
        assert!((m.phases()[1][0] - c(0., -1.)).norm() < 1e-15);
        assert!(mixture_from_twirl(&[(0.7, u.clone())]).is_err());
        assert!(mixture_from_twirl(&[(1.0, cv(&[(2., 0.)]))]).is_err());
    }

    #[test]
    fn mixture_to_schur_examples() {
        let one = cv(&[(1., 0.), (1., 0.)]);
        let s = mixture_to_schur(&DiagonalUnitaryMixture::pure(one.clone()).unwrap());
        assert!(max_dev(s.matrix(), SchurMatrix::<f64>::ones(2).matrix()) < 1e-15);
        let m = DiagonalUnitaryMixture::new(vec![0.5, 0.5], vec![one, cv(&[(1., 0.), (-1., 0.)])]).unwrap();
        let s = mixture_to_schur(&m);
        assert!(max_dev(s.matrix(), &identity(2)) < 1e-15);
        assert!(s.is_channel());
        assert!(DiagonalUnitaryMixture::new(vec![1.0], vec![cv(&[(0.5, 0.)])]).is_err());
        assert!(DiagonalUnitaryMixture::new(vec![0.6, 0.6], vec![cv(&[(1., 0.)]), cv(&[(1., 0.)])]).is_err());
    }

    #[test]
    fn compress_examples() {
        let u = cv(&[(1., 0.), (0., 1.)]);
        let v = cv(&[(1., 0.), (-1., 0.), (0., -1.)]);
        let uv = crate::matcore::kron_vec(&u, &v);
        let m = DiagonalUnitaryMixture::pure(uv).unwrap();
        let b1 = compress_block(&m, 1, 3).unwrap();
        assert!((&b1.phases()[0] - v.scale(1.0).map(|z| z * c(0., 1.))).iter().all(|z| z.norm() < 1e-15));
        let same = compress_block(&m, 0, 6).unwrap();
        assert_eq!(same, m);
        assert!(compress_block(&m, 2, 3).is_err());
        assert!(compress_block(&m, 0, 4).is_err());
    }

    #[test]
    fn gram_examples() {
        let g = SchurMatrix::new(identity::<f64>(3)).unwrap().gram_factorize(true).unwrap();
        assert!(max_dev(&g.gram(), &identity(3)) < 1e-14);
        let g = SchurMatrix::<f64>::ones(3).gram_factorize(true).unwrap();
        for k in 0..3 {
            assert!((&g.xi[k] - &g.xi[0]).iter().all(|z| z.norm() < 1e-12));
            assert!((g.xi[k].norm() - 1.0).abs() < 1e-12);
        }
        let diff = ComplexMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let sm = SchurMatrix::new(diff).unwrap();
        assert!(sm.gram_factorize(true).is_err());
        let g = sm.gram_factorize(false).unwrap();
        assert!(g.verify(&sm, 1e-12));
        assert!((g.norm_bound() - 1.0).abs() < 1e-12);
    }
}
