//! Quantum channels in Kraus form, Choi matrices, adjoints and tensor products.
//!
//! Channels are compared through their Choi matrices, never through Kraus
//! lists, since Kraus representations are not unique.

use num_complex::Complex;

use crate::error::{dim_err, Error, Result};
use crate::matcore::{
    self, eigh, hs_inner, identity, kron, partial_trace, ComplexMatrix, ComplexVector,
    DensityOperator, Keep,
};
use crate::scalar::{real, Real};

/// Tolerance on `‖Σ A†A − I‖_∞` and `‖Σ AA† − I‖_∞` for the TP / unital flags.
pub const CHANNEL_TOL: f64 = 1e-9;
/// Residual norm below which Gram–Schmidt drops a Kraus operator as dependent.
pub const BASIS_DROP_TOL: f64 = 1e-10;
/// Singular-value threshold for Schmidt rank decisions.
pub const SCHMIDT_TOL: f64 = 1e-10;

/// Trace-preservation and unitality of a Kraus list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validation<T: Real = f64> {
    pub tp: bool,
    pub unital: bool,
    /// `‖Σ A_k†A_k − I‖_∞`
    pub defect_tp: T,
    /// `‖Σ A_kA_k† − I‖_∞`
    pub defect_unital: T,
}

/// Linear map on matrices with a computable adjoint (Hilbert–Schmidt duality).
pub trait LinearMap<T: Real> {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    /// `X ↦ Φ(X)` for a `dim_in × dim_in` input.
    fn apply(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>>;
    /// `Y ↦ Φ†(Y)` for a `dim_out × dim_out` input.
    fn apply_adjoint(&self, y: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>>;

    /// `(Φ ⊗ I_m)(X)` for `X` on `H_in ⊗ C^m`.
    fn apply_with_ancilla(&self, x: &ComplexMatrix<T>, m: usize) -> Result<ComplexMatrix<T>> {
        let (din, dout) = (self.dim_in(), self.dim_out());
        if x.nrows() != din * m || x.ncols() != din * m {
            return dim_err(format!("expected a {0}x{0} operator", din * m));
        }
        let mut out = ComplexMatrix::zeros(dout * m, dout * m);
        for a in 0..m {
            for b in 0..m {
                let block = ComplexMatrix::from_fn(din, din, |i, j| x[(i * m + a, j * m + b)]);
                let y = self.apply(&block)?;
                for i in 0..dout {
                    for j in 0..dout {
                        out[(i * m + a, j * m + b)] += y[(i, j)];
                    }
                }
            }
        }
        Ok(out)
    }

    /// `(Φ† ⊗ I_m)(Y)` for `Y` on `H_out ⊗ C^m`.
    fn apply_adjoint_with_ancilla(
        &self,
        y: &ComplexMatrix<T>,
        m: usize,
    ) -> Result<ComplexMatrix<T>> {
        let (din, dout) = (self.dim_in(), self.dim_out());
        if y.nrows() != dout * m || y.ncols() != dout * m {
            return dim_err(format!("expected a {0}x{0} operator", dout * m));
        }
        let mut out = ComplexMatrix::zeros(din * m, din * m);
        for a in 0..m {
            for b in 0..m {
                let block = ComplexMatrix::from_fn(dout, dout, |i, j| y[(i * m + a, j * m + b)]);
                let x = self.apply_adjoint(&block)?;
                for i in 0..din {
                    for j in 0..din {
                        out[(i * m + a, j * m + b)] += x[(i, j)];
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Completely positive map `X ↦ Σ_k A_k X A_k†` with cached validation flags.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T: Real = f64> {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix<T>>,
    validation: Validation<T>,
}

/// Computes the TP and unital defects of a Kraus list.
pub fn validate<T: Real>(kraus: &[ComplexMatrix<T>]) -> Result<Validation<T>> {
    let first = kraus
        .first()
        .ok_or_else(|| Error::Parameter("empty Kraus list".into()))?;
    let (dout, din) = first.shape();
    let mut tp = -identity::<T>(din);
    let mut un = -identity::<T>(dout);
    for a in kraus {
        if a.shape() != (dout, din) {
            return dim_err("Kraus operators have differing shapes");
        }
        tp += a.adjoint() * a;
        un += a * a.adjoint();
    }
    let defect_tp = matcore::operator_norm(&tp);
    let defect_unital = matcore::operator_norm(&un);
    let tol = T::tol(CHANNEL_TOL);
    Ok(Validation {
        tp: defect_tp <= tol,
        unital: defect_unital <= tol,
        defect_tp,
        defect_unital,
    })
}

impl<T: Real> KrausChannel<T> {
    pub fn new(kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let validation = validate(&kraus)?;
        if !kraus.iter().all(matcore::is_finite) {
            return Err(Error::Parameter("Kraus operator has non-finite entries".into()));
        }
        let (dim_out, dim_in) = kraus[0].shape();
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
            validation,
        })
    }

    /// Like [`KrausChannel::new`] but fails unless the map is trace preserving.
    pub fn new_tp(kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let ch = Self::new(kraus)?;
        if !ch.validation.tp {
            return Err(Error::Precondition(format!(
                "Kraus operators are not trace preserving (defect {})",
                ch.validation.defect_tp.as_f64()
            )));
        }
        Ok(ch)
    }

    pub fn identity(d: usize) -> Self {
        Self::new(vec![identity(d)]).expect("identity is a channel")
    }

    /// `X ↦ U X U†`.
    pub fn unitary(u: ComplexMatrix<T>) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Completely dephasing channel, Kraus `{|k⟩⟨k|}`.
    pub fn dephasing(d: usize) -> Self {
        let kraus = (0..d)
            .map(|k| {
                let mut m = ComplexMatrix::zeros(d, d);
                m[(k, k)] = real(T::one());
                m
            })
            .collect();
        Self::new(kraus).expect("dephasing is a channel")
    }

    /// Completely depolarizing channel `X ↦ Tr(X) I/d`, Kraus `{|i⟩⟨j|/√d}`.
    pub fn depolarizing(d: usize) -> Self {
        let s = T::one() / T::lit(d as f64).sqrt();
        let mut kraus = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut m = ComplexMatrix::zeros(d, d);
                m[(i, j)] = real(s);
                kraus.push(m);
            }
        }
        Self::new(kraus).expect("depolarizing is a channel")
    }

    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    pub fn validation(&self) -> Validation<T> {
        self.validation
    }

    pub fn is_tp(&self) -> bool {
        self.validation.tp
    }

    pub fn is_unital(&self) -> bool {
        self.validation.unital
    }

    pub fn is_square(&self) -> bool {
        self.dim_in == self.dim_out
    }

    /// Unnormalized Choi matrix `(Φ ⊗ I)(|α⟩⟨α|)`, `|α⟩ = Σ_k |k⟩|k⟩`.
    ///
    /// The output factor comes first: entry `(o·d_in + i, o'·d_in + i')` is
    /// `⟨o|Φ(|i⟩⟨i'|)|o'⟩`. For a TP map the trace is `d_in`.
    pub fn choi(&self) -> ChoiMatrix<T> {
        let n = self.dim_in * self.dim_out;
        let mut m = ComplexMatrix::zeros(n, n);
        for a in &self.kraus {
            // (A ⊗ I)|α⟩ is the row-major vectorization of A
            let v = ComplexVector::from_iterator(n, a.transpose().iter().copied());
            m += &v * v.adjoint();
        }
        ChoiMatrix {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            matrix: m,
        }
    }

    /// Kraus `{A_k†}`; the TP and unital flags trade places.
    pub fn adjoint(&self) -> Self {
        let kraus = self.kraus.iter().map(|a| a.adjoint()).collect();
        Self {
            dim_in: self.dim_out,
            dim_out: self.dim_in,
            kraus,
            validation: Validation {
                tp: self.validation.unital,
                unital: self.validation.tp,
                defect_tp: self.validation.defect_unital,
                defect_unital: self.validation.defect_tp,
            },
        }
    }

    /// `Φ ⊗ Ψ` with Kraus `{A_i ⊗ B_j}` in lexicographic `(i, j)` order.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(kron(a, b));
            }
        }
        let validation = validate(&kraus).expect("tensor of valid Kraus lists");
        Self {
            dim_in: self.dim_in * other.dim_in,
            dim_out: self.dim_out * other.dim_out,
            kraus,
            validation: Validation {
                tp: self.validation.tp && other.validation.tp,
                unital: self.validation.unital && other.validation.unital,
                ..validation
            },
        }
    }

    /// Hilbert–Schmidt orthonormal basis of the Kraus operator space `span{A_k}`.
    pub fn kraus_space_basis(&self) -> Vec<ComplexMatrix<T>> {
        orthonormal_basis(&self.kraus, T::tol(BASIS_DROP_TOL))
    }

    /// `(I ⊗ Φ)(ρ)` for a pure bipartite `ρ` on `H ⊗ H` of full Schmidt rank.
    ///
    /// The reference factor comes first in both input and output.
    pub fn generalized_choi(&self, rho: &DensityOperator<T>) -> Result<ComplexMatrix<T>> {
        let d = self.dim_in;
        if rho.dim() != d * d {
            return dim_err(format!("expected a state on {d}x{d}, got dimension {}", rho.dim()));
        }
        let e = eigh(rho.matrix())?;
        if (e.max() - T::one()).abs() > T::tol(1e-9) {
            return Err(Error::Precondition("input state is not pure".into()));
        }
        let scale = e.max().sqrt();
        // Ψ[a, b] = ψ[a·d + b]
        let psi = ComplexMatrix::from_fn(d, d, |a, b| e.vectors[(a * d + b, 0)] * scale);
        let rank = matcore::singular_values(&psi)
            .iter()
            .filter(|&&s| s > T::tol(SCHMIDT_TOL))
            .count();
        if rank < d {
            return Err(Error::Precondition(format!(
                "Schmidt rank {rank} is below the full rank {d}"
            )));
        }
        let n = d * self.dim_out;
        let mut out = ComplexMatrix::zeros(n, n);
        for a in &self.kraus {
            let w = &psi * a.transpose();
            let v = ComplexVector::from_iterator(n, w.transpose().iter().copied());
            out += &v * v.adjoint();
        }
        Ok(out)
    }
}

impl<T: Real> LinearMap<T> for KrausChannel<T> {
    fn dim_in(&self) -> usize {
        self.dim_in
    }

    fn dim_out(&self) -> usize {
        self.dim_out
    }

    fn apply(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if x.shape() != (self.dim_in, self.dim_in) {
            return dim_err(format!(
                "channel input must be {0}x{0}, got {1}x{2}",
                self.dim_in,
                x.nrows(),
                x.ncols()
            ));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for a in &self.kraus {
            out += a * x * a.adjoint();
        }
        Ok(out)
    }

    fn apply_adjoint(&self, y: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if y.shape() != (self.dim_out, self.dim_out) {
            return dim_err(format!("adjoint input must be {0}x{0}", self.dim_out));
        }
        let mut out = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for a in &self.kraus {
            out += a.adjoint() * y * a;
        }
        Ok(out)
    }
}

/// Modified Gram–Schmidt (two passes) with a residual drop tolerance.
pub fn orthonormal_basis<T: Real>(ops: &[ComplexMatrix<T>], drop_tol: T) -> Vec<ComplexMatrix<T>> {
    let mut basis: Vec<ComplexMatrix<T>> = Vec::new();
    for op in ops {
        let mut r = op.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = hs_inner(b, &r);
                r -= b * c;
            }
        }
        let n = matcore::frobenius_norm(&r);
        if n > drop_tol {
            basis.push(r.unscale(n));
        }
    }
    basis
}

/// Choi matrix together with the dimensions needed to interpret it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix<T: Real = f64> {
    pub dim_in: usize,
    pub dim_out: usize,
    pub matrix: ComplexMatrix<T>,
}

impl<T: Real> ChoiMatrix<T> {
    /// Choi matrix of the difference of two maps with matching shapes.
    pub fn difference(a: &Self, b: &Self) -> Result<Self> {
        if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out) {
            return dim_err("Choi matrices of maps with different shapes");
        }
        Ok(Self {
            dim_in: a.dim_in,
            dim_out: a.dim_out,
            matrix: &a.matrix - &b.matrix,
        })
    }

    /// Divides by `d_in`, the choice matching the normalized maximally entangled input.
    pub fn normalized(&self) -> ComplexMatrix<T> {
        self.matrix.unscale(T::lit(self.dim_in as f64))
    }

    /// Traces out the output factor; equals `I_{d_in}` for trace-preserving maps.
    pub fn reduce_output(&self) -> ComplexMatrix<T> {
        partial_trace(&self.matrix, self.dim_out, self.dim_in, Keep::B)
            .expect("Choi matrix has consistent dimensions")
    }

    pub fn is_psd(&self, tol: T) -> bool {
        matcore::psd_check(&self.matrix, tol).unwrap_or(false)
    }
}

/// Formal difference `Φ₀ − Φ₁` of two channels with matching shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelDifference<T: Real = f64> {
    pub plus: KrausChannel<T>,
    pub minus: KrausChannel<T>,
}

impl<T: Real> ChannelDifference<T> {
    pub fn new(plus: KrausChannel<T>, minus: KrausChannel<T>) -> Result<Self> {
        if (plus.dim_in, plus.dim_out) != (minus.dim_in, minus.dim_out) {
            return dim_err(format!(
                "channels of shape {}->{} and {}->{}",
                plus.dim_in, plus.dim_out, minus.dim_in, minus.dim_out
            ));
        }
        Ok(Self { plus, minus })
    }

    pub fn choi(&self) -> ChoiMatrix<T> {
        ChoiMatrix::difference(&self.plus.choi(), &self.minus.choi())
            .expect("shapes checked on construction")
    }
}

impl<T: Real> LinearMap<T> for ChannelDifference<T> {
    fn dim_in(&self) -> usize {
        self.plus.dim_in
    }

    fn dim_out(&self) -> usize {
        self.plus.dim_out
    }

    fn apply(&self, x: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        Ok(self.plus.apply(x)? - self.minus.apply(x)?)
    }

    fn apply_adjoint(&self, y: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        Ok(self.plus.apply_adjoint(y)? - self.minus.apply_adjoint(y)?)
    }
}

/// Swaps the tensor factors of an operator on `A ⊗ B`, returning one on `B ⊗ A`.
pub fn swap_factors<T: Real>(m: &ComplexMatrix<T>, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix<T>> {
    let n = dim_a * dim_b;
    if m.shape() != (n, n) {
        return dim_err(format!("expected a {n}x{n} operator"));
    }
    let idx = |r: usize| {
        let (a, b) = (r / dim_b, r % dim_b);
        b * dim_a + a
    };
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            out[(idx(r), idx(c))] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Unnormalized maximally entangled vector `Σ_k |k⟩|k⟩`.
pub fn max_entangled<T: Real>(d: usize) -> ComplexVector<T> {
    let mut v = ComplexVector::zeros(d * d);
    for k in 0..d {
        v[k * d + k] = Complex::new(T::one(), T::zero());
    }
    v
}
