//! Semidefinite formulations: the diamond distance between channels, its
//! dual certificate, the trace norm as a program over `0 ⪯ P ⪯ I`, and the
//! completely bounded norm of a Schur multiplier.

use num_complex::Complex64;

use crate::channels::{ChoiMatrix, KrausChannel};
use crate::error::{Error, Result};
use crate::matcore::{
    eigh, hermitian_deviation, hermitian_part, identity, kron, partial_trace, psd_sqrt, trace, trace_norm,
    ComplexMatrix, ComplexVector, DensityOperator, Keep,
};
use crate::schur::GramFactors;
use crate::sdp::{self, Constraint, SdpOptions, SdpProblem, SdpSolution, SdpStart, SdpStatus};

/// Tolerance on the trace-preservation of diamond-distance inputs.
pub const TP_TOL: f64 = 1e-9;

/// Iteration summary carried by every SDP-backed result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveInfo {
    pub status: SdpStatus,
    pub iterations: usize,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub primal_residual: f64,
}

impl SolveInfo {
    fn of(s: &SdpSolution) -> Self {
        Self {
            status: s.status,
            iterations: s.iterations,
            primal_value: s.primal_value,
            dual_value: s.dual_value,
            gap: s.gap,
            primal_residual: s.primal_residual,
        }
    }
}

fn require_optimal(s: &SdpSolution, what: &str) -> Result<()> {
    if s.status == SdpStatus::Optimal {
        Ok(())
    } else {
        Err(Error::Solver(format!(
            "{what}: solver finished with status {} after {} iterations (gap {:.2e}, residual {:.2e})",
            s.status, s.iterations, s.gap, s.primal_residual
        )))
    }
}

/// Adds `Re` and `Im` equality constraints for every entry of the upper triangle.
fn entrywise(n: usize, mut f: impl FnMut(usize, usize, usize)) {
    for r in 0..n {
        for c in r..n {
            f(0, r, c);
            if r != c {
                f(1, r, c);
            }
        }
    }
}

/// The largest-eigenvalue-clamped, renormalized state nearest to `m`.
fn to_state(m: &ComplexMatrix) -> Result<DensityOperator> {
    let e = eigh(&hermitian_part(m))?;
    let p = e.map(|x| x.max(0.0));
    let tr = trace(&p).re;
    if !(tr > 0.0) {
        return Err(Error::Numerical("witness state has no positive part".into()));
    }
    DensityOperator::new(hermitian_part(&p.unscale(tr)))
}

/// Optimal value and witnesses of the diamond-distance program.
#[derive(Debug, Clone)]
pub struct DiamondResult {
    pub value: f64,
    /// Input state attaining the value.
    pub rho: DensityOperator,
    /// Optimal `X` with `0 ⪯ X ⪯ I_out ⊗ ρ`.
    pub x: ComplexMatrix,
    /// Multiplier matrix of the constraint `X ⪯ I ⊗ ρ`, halved: `Z ⪰ J`, `Z ⪰ 0`.
    pub dual_z: ComplexMatrix,
    /// `‖(I ⊗ √ρ) J (I ⊗ √ρ)‖₁`, attained by the purification of `rho`.
    pub lower: f64,
    /// `2 ‖Tr_out Z‖_∞` for `dual_z` shifted by a multiple of the identity
    /// until it is exactly feasible.
    pub upper: f64,
    pub info: SolveInfo,
}

fn check_pair(a: &KrausChannel, b: &KrausChannel) -> Result<()> {
    let (da, db) = (&a.kraus()[0], &b.kraus()[0]);
    if da.shape() != db.shape() {
        return Err(Error::Dimension(format!(
            "channels map {}→{} and {}→{}",
            da.ncols(),
            da.nrows(),
            db.ncols(),
            db.nrows()
        )));
    }
    for (ch, name) in [(a, "first"), (b, "second")] {
        let v = ch.validation();
        if v.defect_tp > TP_TOL {
            return Err(Error::Precondition(format!(
                "{name} channel is not trace preserving (defect {:.3e})",
                v.defect_tp
            )));
        }
    }
    Ok(())
}

/// `‖a − b‖_⋄` for trace-preserving `a`, `b`.
///
/// Solves `max 2⟨J, X⟩` over `0 ⪯ X ⪯ I_out ⊗ ρ`, `Tr ρ = 1`, where `J` is the
/// unnormalized Choi matrix of `a − b` (output factor first, so `ρ` lives on
/// the second factor). Because `Tr_out J = 0` the factor 2 converts the
/// positive-part maximum into the full trace norm.
pub fn diamond_distance(a: &KrausChannel, b: &KrausChannel) -> Result<DiamondResult> {
    check_pair(a, b)?;
    let j = ChoiMatrix::difference(&a.choi(), &b.choi())?;
    diamond_of_choi(&j)
}

/// Runs the diamond program on a Choi matrix whose output-reduced part vanishes.
pub fn diamond_of_choi(j: &ChoiMatrix) -> Result<DiamondResult> {
    let (din, dout) = (j.dim_in, j.dim_out);
    let n = din * dout;
    // blocks: X, slack S = I ⊗ ρ − X, ρ
    let mut p = SdpProblem::new(vec![n, n, din]);
    p.set_objective(0, hermitian_part(&j.matrix).scale(2.0));
    entrywise(n, |part, r, c| {
        let mut a = Constraint::new().part(part, 0, r, c, 1.0).part(part, 1, r, c, 1.0);
        let (or, ir) = (r / din, r % din);
        let (oc, ic) = (c / din, c % din);
        if or == oc {
            a = a.part(part, 2, ir, ic, -1.0);
        }
        p.add_constraint(a, 0.0);
    });
    p.add_constraint(Constraint::new().trace(2, din, 1.0), 1.0);

    let half = identity::<f64>(n).unscale(2.0 * din as f64);
    let start = SdpStart {
        x: Some(vec![half.clone(), half, identity::<f64>(din).unscale(din as f64)]),
        ..SdpStart::default()
    };
    let sol = sdp::solve_with(&p, &SdpOptions::default(), &start)?;
    require_optimal(&sol, "diamond distance")?;
    let value = sol.primal_value.clamp(0.0, 2.0);
    let rho = to_state(&sol.x[2])?;
    let root = kron(&identity::<f64>(dout), &psd_sqrt(rho.matrix())?);
    let lower = trace_norm(&hermitian_part(&(&root * &j.matrix * &root)));
    let dual_z = hermitian_part(&sol.z[1]).unscale(2.0);
    let (_, upper) = shifted_certificate(j, &dual_z)?;
    Ok(DiamondResult {
        value,
        rho,
        x: hermitian_part(&sol.x[0]),
        dual_z,
        lower,
        upper,
        info: SolveInfo::of(&sol),
    })
}

/// Identity shift making `z` feasible, and the resulting bound.
fn shifted_certificate(j: &ChoiMatrix, z: &ComplexMatrix) -> Result<(f64, f64)> {
    let shift = [-eigh(&hermitian_part(&(z - &j.matrix)))?.min(), -eigh(z)?.min(), 0.0]
        .into_iter()
        .fold(f64::MIN, f64::max);
    let n = z.nrows();
    let reduced = partial_trace(&(z + identity::<f64>(n).scale(shift)), j.dim_out, j.dim_in, Keep::B)?;
    Ok((shift, 2.0 * eigh(&hermitian_part(&reduced))?.max()))
}

/// Dual-feasible upper bound `2 ‖Tr_out Z‖_∞` with `Z ⪰ J`, `Z ⪰ 0`.
#[derive(Debug, Clone)]
pub struct DiamondCertificate {
    pub value: f64,
    pub z: ComplexMatrix,
    /// Multiple of the identity added to the solver's multipliers to make `Z` exactly feasible.
    pub shift: f64,
    pub primal_value: f64,
}

impl DiamondCertificate {
    /// Recomputes the bound from `z` after checking both semidefinite constraints.
    pub fn check(&self, j: &ChoiMatrix, tol: f64) -> Result<f64> {
        certificate_value(j, &self.z, tol)
    }
}

fn certificate_value(j: &ChoiMatrix, z: &ComplexMatrix, tol: f64) -> Result<f64> {
    let min_gap = eigh(&hermitian_part(&(z - &j.matrix)))?.min();
    let min_z = eigh(&hermitian_part(z))?.min();
    if min_gap < -tol || min_z < -tol {
        return Err(Error::Precondition(format!(
            "certificate infeasible: λmin(Z − J) = {min_gap:.3e}, λmin(Z) = {min_z:.3e}"
        )));
    }
    let reduced = partial_trace(z, j.dim_out, j.dim_in, Keep::B)?;
    Ok(2.0 * eigh(&hermitian_part(&reduced))?.max())
}

/// Upper bound on `‖a − b‖_⋄` from the dual of the diamond program, made
/// exactly feasible by an identity shift and evaluated independently.
pub fn diamond_upper_certificate(a: &KrausChannel, b: &KrausChannel) -> Result<DiamondCertificate> {
    check_pair(a, b)?;
    let j = ChoiMatrix::difference(&a.choi(), &b.choi())?;
    let res = diamond_of_choi(&j)?;
    let (shift, value) = shifted_certificate(&j, &res.dual_z)?;
    let n = res.dual_z.nrows();
    let z = &res.dual_z + identity::<f64>(n).scale(shift);
    Ok(DiamondCertificate {
        value,
        z,
        shift,
        primal_value: res.value,
    })
}

/// `‖Y‖₁ = max 2 Tr(P Y)` over `0 ⪯ P ⪯ I` for traceless Hermitian `Y`.
#[derive(Debug, Clone)]
pub struct TraceNormResult {
    pub value: f64,
    /// Spectral projection read off the optimal `P` (eigenvalues above ½).
    pub p: ComplexMatrix,
    pub info: SolveInfo,
}

pub fn trace_norm_max(y: &ComplexMatrix) -> Result<TraceNormResult> {
    if !y.is_square() {
        return Err(Error::Dimension("trace_norm_max needs a square matrix".into()));
    }
    if hermitian_deviation(y) > 1e-10 {
        return Err(Error::Parameter("trace_norm_max needs a Hermitian matrix".into()));
    }
    if trace(y).norm() > 1e-10 {
        return Err(Error::Parameter("trace_norm_max needs a traceless matrix".into()));
    }
    let n = y.nrows();
    let mut p = SdpProblem::new(vec![n, n]);
    p.set_objective(0, hermitian_part(y).scale(2.0));
    entrywise(n, |part, r, c| {
        let a = Constraint::new().part(part, 0, r, c, 1.0).part(part, 1, r, c, 1.0);
        p.add_constraint(a, if part == 0 && r == c { 1.0 } else { 0.0 });
    });
    let half = identity::<f64>(n).unscale(2.0);
    let start = SdpStart {
        x: Some(vec![half.clone(), half]),
        ..SdpStart::default()
    };
    let sol = sdp::solve_with(&p, &SdpOptions::default(), &start)?;
    require_optimal(&sol, "trace norm")?;
    let proj = eigh(&hermitian_part(&sol.x[0]))?.map(|x| if x > 0.5 { 1.0 } else { 0.0 });
    Ok(TraceNormResult {
        value: sol.primal_value.max(0.0),
        p: proj,
        info: SolveInfo::of(&sol),
    })
}

/// Completely bounded norm of `X ↦ R ∘ X` with a Gram witness.
#[derive(Debug, Clone)]
pub struct SchurNormResult {
    pub value: f64,
    /// Vectors with `r_kj = ⟨ξ_k|η_j⟩` and `‖ξ_k‖² = ‖η_j‖² = value`.
    pub factors: GramFactors<f64>,
    pub info: SolveInfo,
}

/// Fit of `S` by the mixture `Σ_k w_k u_k u_k†` of the supplied phase vectors.
#[derive(Debug, Clone)]
pub struct MixtureFit {
    /// `‖Φ_S − Σ_k w_k Φ_{u_k u_k†}‖_⋄` at the returned weights.
    pub value: f64,
    pub weights: Vec<f64>,
    /// Hermitian part of the multipliers on `Y₁₂ + Σ w_k G_k = S`.
    pub pricing: ComplexMatrix,
    /// Multiplier of `Σ_k w_k = 1`.
    pub offset: f64,
    pub info: SolveInfo,
}

impl MixtureFit {
    /// Reduced cost `u† H u + offset` of a candidate phase vector; negative
    /// values identify vectors that can lower the optimum.
    pub fn reduced_cost(&self, u: &ComplexVector) -> f64 {
        (u.adjoint() * &self.pricing * u)[(0, 0)].re + self.offset
    }
}

struct SchurProgram {
    problem: SdpProblem,
    start: SdpStart,
    d: usize,
}

/// `min t` over `[[P, R], [R†, Q]] ⪰ 0`, `P_ii = Q_ii = t`, where
/// `R = S − Σ_k w_k u_k u_k†` and the weights form a probability vector
/// (omitted when `atoms` is empty).
fn schur_program(s: &ComplexMatrix, atoms: &[ComplexVector]) -> SchurProgram {
    let d = s.nrows();
    let k = atoms.len();
    let mut blocks = vec![2 * d, 1];
    blocks.extend(std::iter::repeat_n(1, k));
    let mut p = SdpProblem::new(blocks);
    p.add_objective(&Constraint::new().re(1, 0, 0, -1.0));
    for i in 0..2 * d {
        p.add_constraint(Constraint::new().re(0, i, i, 1.0).re(1, 0, 0, -1.0), 0.0);
    }
    let grams: Vec<ComplexMatrix> = atoms.iter().map(|u| u * u.adjoint()).collect();
    for i in 0..d {
        for j in 0..d {
            for part in 0..2 {
                let mut a = Constraint::new().part(part, 0, i, d + j, 1.0);
                for (kk, g) in grams.iter().enumerate() {
                    let coef = if part == 0 { g[(i, j)].re } else { g[(i, j)].im };
                    if coef != 0.0 {
                        a = a.re(2 + kk, 0, 0, coef);
                    }
                }
                let rhs = if part == 0 { s[(i, j)].re } else { s[(i, j)].im };
                p.add_constraint(a, rhs);
            }
        }
    }
    let w0 = if k > 0 { 1.0 / k as f64 } else { 0.0 };
    if k > 0 {
        let mut a = Constraint::new();
        for kk in 0..k {
            a = a.re(2 + kk, 0, 0, 1.0);
        }
        p.add_constraint(a, 1.0);
    }
    // strictly feasible start: uniform weights and t above ‖R‖
    let mut r = s.clone();
    for g in &grams {
        r -= g.scale(w0);
    }
    let t0 = crate::matcore::operator_norm(&r) + 1.0;
    let mut y = identity::<f64>(2 * d).scale(t0);
    y.view_mut((0, d), (d, d)).copy_from(&r);
    y.view_mut((d, 0), (d, d)).copy_from(&r.adjoint());
    let mut x = vec![y, ComplexMatrix::from_element(1, 1, Complex64::new(t0, 0.0))];
    x.extend(std::iter::repeat_n(ComplexMatrix::from_element(1, 1, Complex64::new(w0, 0.0)), k));
    SchurProgram {
        problem: p,
        start: SdpStart {
            x: Some(x),
            ..SdpStart::default()
        },
        d,
    }
}

fn factors_from(y: &ComplexMatrix, d: usize) -> Result<GramFactors<f64>> {
    let root = psd_sqrt(&hermitian_part(y))?;
    Ok(GramFactors {
        xi: (0..d).map(|k| root.column(k).into_owned()).collect(),
        eta: (0..d).map(|k| root.column(d + k).into_owned()).collect(),
    })
}

fn require_square(m: &ComplexMatrix, what: &str) -> Result<()> {
    if m.is_square() && m.nrows() > 0 {
        Ok(())
    } else {
        Err(Error::Dimension(format!("{what} needs a non-empty square matrix")))
    }
}

/// `‖Φ_R‖_cb`, which coincides with the diamond, trace and operator norms of
/// the Schur multiplier `Φ_R`.
pub fn schur_multiplier_norm(r: &ComplexMatrix) -> Result<SchurNormResult> {
    require_square(r, "schur_multiplier_norm")?;
    let prog = schur_program(r, &[]);
    let sol = sdp::solve_with(&prog.problem, &SdpOptions::default(), &prog.start)?;
    require_optimal(&sol, "Schur multiplier norm")?;
    Ok(SchurNormResult {
        value: sol.primal_value.abs(),
        factors: factors_from(&sol.x[0], prog.d)?,
        info: SolveInfo::of(&sol),
    })
}

/// Best mixture of the given diagonal phase vectors in the diamond distance
/// to the Schur channel `Φ_S`.
pub fn mixture_fit(s: &ComplexMatrix, atoms: &[ComplexVector]) -> Result<MixtureFit> {
    require_square(s, "mixture_fit")?;
    if atoms.is_empty() {
        return Err(Error::Parameter("mixture_fit needs at least one phase vector".into()));
    }
    let d = s.nrows();
    if atoms.iter().any(|u| u.len() != d) {
        return Err(Error::Dimension("phase vectors do not match the Schur matrix".into()));
    }
    let prog = schur_program(s, atoms);
    let sol = sdp::solve_with(&prog.problem, &SdpOptions::default(), &prog.start)?;
    require_optimal(&sol, "mixture fit")?;
    let base = 2 * d;
    let ymat = ComplexMatrix::from_fn(d, d, |i, j| {
        let idx = base + 2 * (i * d + j);
        Complex64::new(sol.y[idx], sol.y[idx + 1])
    });
    let pricing = hermitian_part(&ymat);
    let offset = sol.y[base + 2 * d * d];
    let weights = (0..atoms.len()).map(|k| sol.x[2 + k][(0, 0)].re.max(0.0)).collect();
    Ok(MixtureFit {
        value: (-sol.primal_value).max(0.0),
        weights,
        pricing,
        offset,
        info: SolveInfo::of(&sol),
    })
}
