//! Primal-dual interior-point solver for small semidefinite programs over
//! complex Hermitian blocks.
//!
//! Primal: maximize `⟨C, X⟩` subject to `⟨A_i, X⟩ = b_i`, `X ⪰ 0`.
//! Dual: minimize `bᵀy` subject to `Z = Σ y_i A_i − C ⪰ 0`.
//!
//! `⟨A, X⟩ = Re Tr(A X)` summed over blocks. Iterations use Nesterov–Todd
//! scaling with a Mehrotra predictor-corrector and separate primal and dual
//! step lengths. Constraint matrices are stored as sparse entry lists; the
//! objective and all iterates are dense.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{eigh, hermitian_part, svd, ComplexMatrix};

/// Tolerance on Hermiticity of supplied coefficient matrices.
pub const COEFF_HERMITIAN_TOL: f64 = 1e-12;

/// Outcome of [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    /// Iterates diverged, signalling an infeasible primal or dual.
    Infeasible,
    MaxIterations,
    /// Step lengths collapsed before the tolerances were met.
    Stalled,
}

impl fmt::Display for SdpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SdpStatus::Optimal => "optimal",
            SdpStatus::Infeasible => "infeasible",
            SdpStatus::MaxIterations => "max_iterations",
            SdpStatus::Stalled => "stalled",
        })
    }
}

/// Sparse Hermitian linear functional on the block variable.
///
/// Terms are accumulated with [`Constraint::re`], [`Constraint::im`] and
/// [`Constraint::dense`]; only the stored matrix entries matter, so the same
/// type also describes an objective.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Constraint {
    entries: BTreeMap<(usize, usize, usize), Complex64>,
}

impl Constraint {
    pub fn new() -> Self {
        Self::default()
    }

    fn add(&mut self, block: usize, r: usize, c: usize, v: Complex64) {
        *self.entries.entry((block, r, c)).or_insert(Complex64::new(0.0, 0.0)) += v;
    }

    /// Adds `w · Re X_b[r, c]`.
    pub fn re(mut self, block: usize, r: usize, c: usize, w: f64) -> Self {
        if r == c {
            self.add(block, r, r, Complex64::new(w, 0.0));
        } else {
            self.add(block, r, c, Complex64::new(w / 2.0, 0.0));
            self.add(block, c, r, Complex64::new(w / 2.0, 0.0));
        }
        self
    }

    /// Adds `w · Im X_b[r, c]`; zero on the diagonal.
    pub fn im(mut self, block: usize, r: usize, c: usize, w: f64) -> Self {
        if r != c {
            self.add(block, r, c, Complex64::new(0.0, w / 2.0));
            self.add(block, c, r, Complex64::new(0.0, -w / 2.0));
        }
        self
    }

    /// Adds `w · Re X_b[r, c]` for `part = 0` or `w · Im X_b[r, c]` for `part = 1`.
    pub fn part(self, part: usize, block: usize, r: usize, c: usize, w: f64) -> Self {
        if part == 0 {
            self.re(block, r, c, w)
        } else {
            self.im(block, r, c, w)
        }
    }

    /// Adds `w · Tr X_b` for a block of dimension `n`.
    pub fn trace(mut self, block: usize, n: usize, w: f64) -> Self {
        for k in 0..n {
            self.add(block, k, k, Complex64::new(w, 0.0));
        }
        self
    }

    /// Adds `⟨H, X_b⟩` for a Hermitian `H`.
    pub fn dense(mut self, block: usize, h: &ComplexMatrix) -> Self {
        for r in 0..h.nrows() {
            for c in 0..h.ncols() {
                if h[(r, c)] != Complex64::new(0.0, 0.0) {
                    self.add(block, r, c, h[(r, c)]);
                }
            }
        }
        self
    }

    pub fn is_empty(&self) -> bool {
        self.entries.values().all(|v| v.norm() == 0.0)
    }
}

/// Semidefinite program in the primal form above.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    blocks: Vec<usize>,
    objective: Vec<ComplexMatrix>,
    constraints: Vec<Constraint>,
    rhs: Vec<f64>,
}

impl SdpProblem {
    pub fn new(blocks: Vec<usize>) -> Self {
        let objective = blocks.iter().map(|&n| ComplexMatrix::zeros(n, n)).collect();
        Self {
            blocks,
            objective,
            constraints: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Sets the objective coefficient of one block (Hermitian).
    pub fn set_objective(&mut self, block: usize, c: ComplexMatrix) {
        self.objective[block] = c;
    }

    /// Adds a functional to the objective.
    pub fn add_objective(&mut self, f: &Constraint) {
        for (&(b, r, c), &v) in &f.entries {
            self.objective[b][(r, c)] += v;
        }
    }

    pub fn add_constraint(&mut self, a: Constraint, b: f64) {
        self.constraints.push(a);
        self.rhs.push(b);
    }

    fn check(&self) -> Result<()> {
        for (k, (&n, c)) in self.blocks.iter().zip(&self.objective).enumerate() {
            if n == 0 {
                return Err(Error::Dimension(format!("block {k} has dimension 0")));
            }
            if c.shape() != (n, n) {
                return Err(Error::Dimension(format!("objective block {k} has wrong shape")));
            }
            if (c - c.adjoint()).iter().any(|z| z.norm() > COEFF_HERMITIAN_TOL) {
                return Err(Error::Parameter(format!("objective block {k} is not Hermitian")));
            }
        }
        let size: usize = self.blocks.iter().map(|n| n * n).sum();
        if self.constraints.len() > size {
            return Err(Error::Parameter(format!(
                "{} constraints exceed the {size} real degrees of freedom",
                self.constraints.len()
            )));
        }
        for (i, a) in self.constraints.iter().enumerate() {
            for (&(b, r, c), &v) in &a.entries {
                if b >= self.blocks.len() || r >= self.blocks[b] || c >= self.blocks[b] {
                    return Err(Error::Dimension(format!("constraint {i} indexes outside its block")));
                }
                let mirror = a.entries.get(&(b, c, r)).copied().unwrap_or_default();
                if (v - mirror.conj()).norm() > COEFF_HERMITIAN_TOL {
                    return Err(Error::Parameter(format!("constraint {i} is not Hermitian")));
                }
            }
            if !self.rhs[i].is_finite() {
                return Err(Error::Parameter(format!("constraint {i} has a non-finite right-hand side")));
            }
        }
        Ok(())
    }

    /// Writes the assembled program as text: a header, then per block the
    /// objective and every constraint restricted to that block, each as
    /// row-major `re im` pairs.
    pub fn write_debug<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "sdp maximize")?;
        writeln!(
            w,
            "blocks {}",
            self.blocks.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(" ")
        )?;
        writeln!(w, "constraints {}", self.constraints.len())?;
        writeln!(w, "rhs {}", self.rhs.iter().map(|b| format!("{b:e}")).collect::<Vec<_>>().join(" "))?;
        let dense = |w: &mut W, m: &ComplexMatrix| -> io::Result<()> {
            for r in 0..m.nrows() {
                let row: Vec<String> = (0..m.ncols())
                    .map(|c| format!("{:e} {:e}", m[(r, c)].re, m[(r, c)].im))
                    .collect();
                writeln!(w, "{}", row.join(" "))?;
            }
            Ok(())
        };
        for (k, &n) in self.blocks.iter().enumerate() {
            writeln!(w, "[block {k}]")?;
            writeln!(w, "objective")?;
            dense(&mut w, &self.objective[k])?;
            for (i, a) in self.constraints.iter().enumerate() {
                let mut m = ComplexMatrix::zeros(n, n);
                let mut any = false;
                for (&(b, r, c), &v) in &a.entries {
                    if b == k {
                        m[(r, c)] = v;
                        any = true;
                    }
                }
                if any {
                    writeln!(w, "constraint {i}")?;
                    dense(&mut w, &m)?;
                }
            }
        }
        Ok(())
    }
}

/// Solver controls.
#[derive(Debug, Clone)]
pub struct SdpOptions {
    pub max_iterations: usize,
    /// Target for `|primal − dual| / (1 + |primal|)` and for `⟨X, Z⟩`.
    pub gap_tol: f64,
    /// Target for the relative primal and dual residuals.
    pub feas_tol: f64,
    /// Fraction of the step to the boundary of the cone.
    pub step_fraction: f64,
    /// Accuracy accepted as optimal when progress stalls.
    pub fallback_gap_tol: f64,
    pub fallback_feas_tol: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            gap_tol: 1e-10,
            feas_tol: 1e-10,
            step_fraction: 0.98,
            fallback_gap_tol: 1e-6,
            fallback_feas_tol: 1e-7,
        }
    }
}

/// Starting point; any block left `None` starts at the identity.
#[derive(Debug, Clone, Default)]
pub struct SdpStart {
    pub x: Option<Vec<ComplexMatrix>>,
    pub z: Option<Vec<ComplexMatrix>>,
    pub y: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub primal_value: f64,
    pub dual_value: f64,
    /// `|primal − dual| / (1 + |primal|)`.
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub x: Vec<ComplexMatrix>,
    /// Dual slack `Σ y_i A_i − C`.
    pub z: Vec<ComplexMatrix>,
    pub y: Vec<f64>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }
}

type Blocks = Vec<ComplexMatrix>;

struct Sparse {
    /// Per block: (constraint index, entries inside the block).
    by_block: Vec<Vec<(usize, Vec<(usize, usize, Complex64)>)>>,
    m: usize,
}

impl Sparse {
    fn new(p: &SdpProblem) -> Self {
        let mut by_block: Vec<Vec<(usize, Vec<(usize, usize, Complex64)>)>> = vec![Vec::new(); p.blocks.len()];
        for (i, a) in p.constraints.iter().enumerate() {
            let mut per: BTreeMap<usize, Vec<(usize, usize, Complex64)>> = BTreeMap::new();
            for (&(b, r, c), &v) in &a.entries {
                if v.norm() != 0.0 {
                    per.entry(b).or_default().push((r, c, v));
                }
            }
            for (b, e) in per {
                by_block[b].push((i, e));
            }
        }
        Self {
            by_block,
            m: p.constraints.len(),
        }
    }

    fn apply(&self, x: &Blocks) -> DVector<f64> {
        let mut out = DVector::zeros(self.m);
        for (b, list) in self.by_block.iter().enumerate() {
            for (i, e) in list {
                out[*i] += e.iter().map(|&(r, c, v)| (v * x[b][(c, r)]).re).sum::<f64>();
            }
        }
        out
    }

    fn adjoint(&self, y: &DVector<f64>, sizes: &[usize]) -> Blocks {
        let mut out: Blocks = sizes.iter().map(|&n| ComplexMatrix::zeros(n, n)).collect();
        for (b, list) in self.by_block.iter().enumerate() {
            for (i, e) in list {
                for &(r, c, v) in e {
                    out[b][(r, c)] += v * y[*i];
                }
            }
        }
        out
    }

    /// `M_ij = ⟨A_i, W A_j W⟩`.
    fn schur_complement(&self, w: &Blocks) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.m, self.m);
        for (b, list) in self.by_block.iter().enumerate() {
            let wb = &w[b];
            let n = wb.nrows();
            for (j, ej) in list {
                let mut g = ComplexMatrix::zeros(n, n);
                for &(r, c, v) in ej {
                    // g += v · W[:, r] W[c, :]
                    for q in 0..n {
                        let t = v * wb[(c, q)];
                        if t.norm() == 0.0 {
                            continue;
                        }
                        for p in 0..n {
                            g[(p, q)] += wb[(p, r)] * t;
                        }
                    }
                }
                for (i, ei) in list {
                    if i < j {
                        continue;
                    }
                    let s: f64 = ei.iter().map(|&(r, c, v)| (v * g[(c, r)]).re).sum();
                    m[(*i, *j)] += s;
                }
            }
        }
        for i in 0..self.m {
            for j in 0..i {
                m[(j, i)] = m[(i, j)];
            }
        }
        m
    }
}

fn inner(a: &Blocks, b: &Blocks) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y.iter()).map(|(p, q)| (p.conj() * q).re).sum::<f64>())
        .sum()
}

fn norm(a: &Blocks) -> f64 {
    inner(a, a).sqrt()
}

fn axpy(a: &Blocks, alpha: f64, b: &Blocks) -> Blocks {
    a.iter().zip(b).map(|(x, y)| x + y.scale(alpha)).collect()
}

fn sub(a: &Blocks, b: &Blocks) -> Blocks {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Factor `L` with `X = L L†`, by Cholesky or, near the boundary, by a
/// clamped eigendecomposition.
fn factor(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    if let Some(ch) = x.clone().cholesky() {
        return Ok(ch.l());
    }
    let e = eigh(&hermitian_part(x))?;
    let floor = e.max().abs().max(1.0) * 1e-300;
    let mut l = e.vectors.clone();
    for (k, &v) in e.values.iter().enumerate() {
        let s = v.max(floor).sqrt();
        for r in 0..l.nrows() {
            l[(r, k)] *= s;
        }
    }
    Ok(l)
}

/// Nesterov–Todd scaling of one block: `R† Z R = R⁻¹ X R⁻† = Diag(λ)`.
struct Scaling {
    r: ComplexMatrix,
    w: ComplexMatrix,
    lambda: Vec<f64>,
}

fn nt_scaling(x: &ComplexMatrix, z: &ComplexMatrix) -> Result<Scaling> {
    let lx = factor(x)?;
    let lz = factor(z)?;
    let s = svd(&(lz.adjoint() * &lx));
    let lambda = s.singular_values.clone();
    if lambda.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::Numerical("degenerate scaling point".into()));
    }
    let mut r = &lx * &s.v;
    for (k, &l) in lambda.iter().enumerate() {
        let f = 1.0 / l.sqrt();
        for i in 0..r.nrows() {
            r[(i, k)] *= f;
        }
    }
    let w = &r * r.adjoint();
    Ok(Scaling { r, w, lambda })
}

/// Largest `α ≤ cap` keeping `Diag(λ) + α D ⪰ 0`.
fn max_step(lambda: &[f64], d: &ComplexMatrix, cap: f64) -> Result<f64> {
    let n = lambda.len();
    let s: Vec<f64> = lambda.iter().map(|l| 1.0 / l.sqrt()).collect();
    let g = ComplexMatrix::from_fn(n, n, |i, j| d[(i, j)] * (s[i] * s[j]));
    let e = eigh(&hermitian_part(&g))?;
    let min = e.min();
    Ok(if min < 0.0 { cap.min(-1.0 / min) } else { cap })
}

struct Direction {
    dx: Blocks,
    dz: Blocks,
    dy: DVector<f64>,
    /// Scaled directions `R⁻¹ ΔX R⁻†` and `R† ΔZ R`.
    dx_s: Blocks,
    dz_s: Blocks,
}

/// Solves the Newton system given the scaled complementarity right-hand side.
#[allow(clippy::too_many_arguments)]
fn direction(
    sp: &Sparse,
    sizes: &[usize],
    scal: &[Scaling],
    chol: &nalgebra::Cholesky<f64, nalgebra::Dyn>,
    schur: &DMatrix<f64>,
    rp: &DVector<f64>,
    rd: &Blocks,
    rc: &Blocks,
) -> Direction {
    // T_ij = 2 rc_ij / (λ_i + λ_j)
    let t: Blocks = scal
        .iter()
        .zip(rc)
        .map(|(s, r)| {
            let n = s.lambda.len();
            ComplexMatrix::from_fn(n, n, |i, j| r[(i, j)] * (2.0 / (s.lambda[i] + s.lambda[j])))
        })
        .collect();
    let rtr: Blocks = scal.iter().zip(&t).map(|(s, t)| &s.r * t * s.r.adjoint()).collect();
    let wrw: Blocks = scal.iter().zip(rd).map(|(s, r)| &s.w * r * &s.w).collect();
    let rhs = rp - sp.apply(&sub(&rtr, &wrw));
    let mut dy = chol.solve(&rhs);
    let resid = &rhs - schur * &dy;
    dy += chol.solve(&resid);
    let aty = sp.adjoint(&dy, sizes);
    let dz: Blocks = rd.iter().zip(&aty).map(|(r, a)| hermitian_part(&(r - a))).collect();
    let dx: Blocks = rtr
        .iter()
        .zip(scal.iter().zip(&dz))
        .map(|(rt, (s, dz))| hermitian_part(&(rt - &s.w * dz * &s.w)))
        .collect();
    let dz_s: Blocks = scal.iter().zip(&dz).map(|(s, dz)| s.r.adjoint() * dz * &s.r).collect();
    let dx_s: Blocks = t.iter().zip(&dz_s).map(|(t, d)| hermitian_part(&(t - d))).collect();
    Direction { dx, dz, dy, dx_s, dz_s }
}

fn steps(scal: &[Scaling], dir: &Direction, cap: f64) -> Result<(f64, f64)> {
    let mut ap = cap;
    let mut ad = cap;
    for (k, s) in scal.iter().enumerate() {
        ap = ap.min(max_step(&s.lambda, &dir.dx_s[k], cap)?);
        ad = ad.min(max_step(&s.lambda, &dir.dz_s[k], cap)?);
    }
    Ok((ap, ad))
}

fn cholesky_with_shift(m: &DMatrix<f64>) -> Result<nalgebra::Cholesky<f64, nalgebra::Dyn>> {
    if let Some(c) = m.clone().cholesky() {
        return Ok(c);
    }
    let scale = (0..m.nrows()).map(|i| m[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    let mut shift = scale * 1e-14;
    for _ in 0..8 {
        let mut s = m.clone();
        for i in 0..s.nrows() {
            s[(i, i)] += shift;
        }
        if let Some(c) = s.cholesky() {
            return Ok(c);
        }
        shift *= 100.0;
    }
    Err(Error::Numerical("Schur complement is not positive definite".into()))
}

/// Solves with default options and the identity start.
pub fn solve(p: &SdpProblem) -> Result<SdpSolution> {
    solve_with(p, &SdpOptions::default(), &SdpStart::default())
}

pub fn solve_with(p: &SdpProblem, opts: &SdpOptions, start: &SdpStart) -> Result<SdpSolution> {
    p.check()?;
    let sizes = &p.blocks;
    let sp = Sparse::new(p);
    let m = sp.m;
    let nu: f64 = sizes.iter().sum::<usize>() as f64;
    // internal minimization of ⟨−C, X⟩
    let c: Blocks = p.objective.iter().map(|c| -hermitian_part(c)).collect();
    let b = DVector::from_column_slice(&p.rhs);
    let eye: Blocks = sizes.iter().map(|&n| ComplexMatrix::identity(n, n)).collect();
    let mut x = start.x.clone().unwrap_or_else(|| eye.clone());
    let mut z = start.z.clone().unwrap_or_else(|| eye.clone());
    let mut y = start.y.clone().map(DVector::from_vec).unwrap_or_else(|| DVector::zeros(m));
    if x.len() != sizes.len() || z.len() != sizes.len() || y.len() != m {
        return Err(Error::Dimension("starting point does not match the block structure".into()));
    }
    let norm_b = b.norm();
    let norm_c = norm(&c);

    let mut status = SdpStatus::MaxIterations;
    let mut iterations = 0;
    let mut stalls = 0;
    let mut since_best = 0;
    let mut report = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut best: Option<(f64, Blocks, Blocks, DVector<f64>, (f64, f64, f64, f64, f64))> = None;
    for iter in 0..=opts.max_iterations {
        iterations = iter;
        let rp = &b - sp.apply(&x);
        let aty = sp.adjoint(&y, sizes);
        let rd: Blocks = c
            .iter()
            .zip(z.iter().zip(&aty))
            .map(|(c, (z, a))| c - z - a)
            .collect();
        let pobj = -inner(&c, &x);
        let dobj = -b.dot(&y);
        let xz = inner(&x, &z);
        let mu = xz / nu;
        let pres = rp.norm() / (1.0 + norm_b);
        let dres = norm(&rd) / (1.0 + norm_c);
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs());
        report = (pobj, dobj, gap, pres, dres);
        let merit = gap.max(xz.max(0.0) / (1.0 + pobj.abs())).max(pres).max(dres);
        if xz >= 0.0 && best.as_ref().is_none_or(|b| merit < b.0) {
            best = Some((merit, x.clone(), z.clone(), y.clone(), report));
            since_best = 0;
        } else {
            since_best += 1;
        }
        let best_merit = best.as_ref().map_or(f64::INFINITY, |b| b.0);
        if (best_merit <= opts.fallback_feas_tol && since_best >= 5) || since_best >= 30 {
            status = SdpStatus::Stalled;
            break;
        }

        if !(pobj.is_finite() && dobj.is_finite() && mu.is_finite()) {
            status = SdpStatus::Infeasible;
            break;
        }
        let scale = 1.0 + pobj.abs();
        if gap <= opts.gap_tol && xz <= opts.gap_tol * scale && pres <= opts.feas_tol && dres <= opts.feas_tol {
            status = SdpStatus::Optimal;
            break;
        }
        if norm(&x) > 1e12 || y.amax() > 1e12 || norm(&z) > 1e14 {
            status = SdpStatus::Infeasible;
            break;
        }
        if iter == opts.max_iterations {
            break;
        }

        let attempt = (|| -> Result<(Direction, f64, f64)> {
            let scal: Vec<Scaling> = x.iter().zip(&z).map(|(x, z)| nt_scaling(x, z)).collect::<Result<_>>()?;
            let w: Blocks = scal.iter().map(|s| s.w.clone()).collect();
            let schur = sp.schur_complement(&w);
            let chol = cholesky_with_shift(&schur)?;

            // predictor: r_c = −Λ²
            let rc_aff: Blocks = scal
                .iter()
                .map(|s| {
                    let n = s.lambda.len();
                    ComplexMatrix::from_fn(n, n, |i, j| {
                        if i == j {
                            Complex64::new(-s.lambda[i] * s.lambda[i], 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                })
                .collect();
            let aff = direction(&sp, sizes, &scal, &chol, &schur, &rp, &rd, &rc_aff);
            let (ap, ad) = steps(&scal, &aff, 1.0)?;
            let mu_aff = inner(&axpy(&x, ap, &aff.dx), &axpy(&z, ad, &aff.dz)) / nu;
            let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

            // corrector: r_c = σμI − Λ² − (ΔX̃ ∘ ΔZ̃)
            let rc: Blocks = scal
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    let a = &aff.dx_s[k];
                    let d = &aff.dz_s[k];
                    let jordan = (a * d + d * a).scale(0.5);
                    let n = s.lambda.len();
                    ComplexMatrix::from_fn(n, n, |i, j| {
                        let base = if i == j { sigma * mu - s.lambda[i] * s.lambda[i] } else { 0.0 };
                        Complex64::new(base, 0.0) - jordan[(i, j)]
                    })
                })
                .collect();
            let dir = direction(&sp, sizes, &scal, &chol, &schur, &rp, &rd, &rc);
            let (ap, ad) = steps(&scal, &dir, f64::INFINITY)?;
            Ok((dir, (opts.step_fraction * ap).min(1.0), (opts.step_fraction * ad).min(1.0)))
        })();

        let (dir, ap, ad) = match attempt {
            Ok(v) => v,
            Err(_) => {
                status = SdpStatus::Stalled;
                break;
            }
        };
        if ap < 1e-10 && ad < 1e-10 {
            stalls += 1;
            if stalls >= 3 {
                status = SdpStatus::Stalled;
                break;
            }
        } else {
            stalls = 0;
        }
        x = axpy(&x, ap, &dir.dx).iter().map(hermitian_part).collect();
        z = axpy(&z, ad, &dir.dz).iter().map(hermitian_part).collect();
        y += dir.dy.scale(ad);
    }

    if matches!(status, SdpStatus::Stalled | SdpStatus::MaxIterations) {
        if let Some((_, bx, bz, by, brep)) = best {
            x = bx;
            z = bz;
            y = by;
            report = brep;
        }
    }
    let (pobj, dobj, gap, pres, dres) = report;
    if matches!(status, SdpStatus::Stalled | SdpStatus::MaxIterations)
        && gap <= opts.fallback_gap_tol
        && pres <= opts.fallback_feas_tol
        && dres <= opts.fallback_feas_tol
    {
        status = SdpStatus::Optimal;
    }
    // dual slack in the maximization convention: Σ y'_i A_i − C with y' = −y
    Ok(SdpSolution {
        status,
        primal_value: pobj,
        dual_value: dobj,
        gap,
        primal_residual: pres,
        dual_residual: dres,
        iterations,
        x,
        z,
        y: y.iter().map(|v| -v).collect(),
    })
}
