//! Implicit Euler time stepping of the two-field consolidation system.
//!
//! Each step solves the monolithic saddle-point system
//!
//! ```text
//! [ A    B^T            ] [U^n]   [ f^n                                ]
//! [ B   -(tau A_p + C)  ] [P^n] = [ B U^{n-1} - C P^{n-1} + tau G^n    ]
//! ```
//!
//! with `C` the pressure stabilization block.  For `tau > 0` and a drained
//! boundary the matrix is symmetric quasidefinite, so the unpivoted LDL^T
//! factorization exists under any symmetric permutation; the factorization
//! is computed once and reused for every step.
//!
//! Initial data comes either from the zero state or from a stabilized
//! Stokes solve (the incompressible-limit response to the instantaneous
//! load).  In the unstabilized bubble-enriched case the Stokes matrix has a
//! zero (2,2) block; the bubbles are then eliminated element by element,
//! which produces an equivalent quasidefinite system, and are recovered
//! afterwards.

use std::time::Instant;

use crate::assembly::{BiotSystem, DisplacementSpace, MeshData};
use crate::error::{Error, Result};
use crate::linalg::{CsrMatrix, DenseMatrix, FactorizedSystem};

/// The named discretization pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    /// Equal-order linear displacement and pressure (needs stabilization).
    P1P1,
    /// Bubble-enriched linear displacement with linear pressure, 2D.
    Mini,
    /// The 1D analogue of the bubble enrichment: hierarchical quadratic
    /// displacement with linear pressure.
    TaylorHood1D,
}

impl SchemeKind {
    pub fn space(self) -> DisplacementSpace {
        match self {
            SchemeKind::P1P1 => DisplacementSpace::P1,
            SchemeKind::Mini | SchemeKind::TaylorHood1D => DisplacementSpace::P1Bubble,
        }
    }

    /// The stabilization parameter at which the 1D pressure step operator
    /// lumps to a diagonal mass plus the flow Laplacian.
    pub fn default_epsilon(self) -> f64 {
        match self {
            SchemeKind::P1P1 => 0.25,
            SchemeKind::Mini | SchemeKind::TaylorHood1D => 1.0 / 6.0,
        }
    }

    /// Whether this pair is defined on meshes of the given dimension.
    pub fn supports_dimension(self, dim: usize) -> bool {
        match self {
            SchemeKind::P1P1 => dim == 1 || dim == 2,
            SchemeKind::Mini => dim == 2,
            SchemeKind::TaylorHood1D => dim == 1,
        }
    }
}

/// How the t = 0 state is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialCondition {
    /// Start from the zero state.
    ZeroDiv,
    /// Solve the stabilized Stokes system with the static load:
    /// `[[A, B^T], [B, -C]] (U0; P0) = (f; 0)`.
    StabilizedStokes,
}

/// Uniform time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeParams {
    pub tau: f64,
    pub n_steps: usize,
}

impl TimeParams {
    pub fn new(tau: f64, n_steps: usize) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::invalid(format!("time step must be positive, got {tau}")));
        }
        Ok(TimeParams { tau, n_steps })
    }
}

/// Assemble the monolithic implicit-Euler step matrix
/// `[[A, B^T], [B, -(tau A_p + C_stab)]]` over the reduced unknowns,
/// displacement block first.
pub fn monolithic_step_matrix(system: &BiotSystem, tau: f64) -> Result<CsrMatrix> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!("time step must be nonnegative, got {tau}")));
    }
    let n_u = system.n_u();
    let n_p = system.n_p();
    let n = n_u + n_p;
    let mut triplets = Vec::new();
    for (r, c, v) in system.a.iter() {
        triplets.push((r, c, v));
    }
    for (r, c, v) in system.b.iter() {
        triplets.push((n_u + r, c, v));
        triplets.push((c, n_u + r, v));
    }
    for (r, c, v) in system.a_p.iter() {
        triplets.push((n_u + r, n_u + c, -tau * v));
    }
    for (r, c, v) in system.c_stab.iter() {
        triplets.push((n_u + r, n_u + c, -v));
    }
    CsrMatrix::from_triplets(n, n, &triplets)
}

/// One factorized implicit-Euler step operator.
pub struct StepSolver<'a> {
    system: &'a BiotSystem,
    tau: f64,
    factorized: FactorizedSystem,
    /// Wall-clock seconds spent forming and factorizing the step matrix.
    pub factor_seconds: f64,
}

impl<'a> StepSolver<'a> {
    pub fn new(system: &'a BiotSystem, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::invalid(format!("time step must be positive, got {tau}")));
        }
        let start = Instant::now();
        let matrix = monolithic_step_matrix(system, tau)?;
        let factorized = FactorizedSystem::new(matrix)?;
        let factor_seconds = start.elapsed().as_secs_f64();
        Ok(StepSolver { system, tau, factorized, factor_seconds })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Inertia (positive, negative eigenvalue counts) of the factorized
    /// step matrix; a quasidefinite step matrix gives `(n_u, n_p)`.
    pub fn inertia(&self) -> (usize, usize) {
        self.factorized.inertia()
    }

    /// Advance one step from `(u_prev, p_prev)` under the mechanical load
    /// `rhs_u` and the integrated fluid source `source_p` (the vector of
    /// source functionals `(g, l_k)` at the new time level, reduced).
    pub fn step(
        &self,
        u_prev: &[f64],
        p_prev: &[f64],
        rhs_u: &[f64],
        source_p: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let n_u = self.system.n_u();
        let n_p = self.system.n_p();
        assert_eq!(u_prev.len(), n_u);
        assert_eq!(p_prev.len(), n_p);
        assert_eq!(rhs_u.len(), n_u);
        assert_eq!(source_p.len(), n_p);
        let mut rhs = Vec::with_capacity(n_u + n_p);
        rhs.extend_from_slice(rhs_u);
        let bu = self.system.b.spmv(u_prev);
        let cp = self.system.c_stab.spmv(p_prev);
        for k in 0..n_p {
            rhs.push(bu[k] - cp[k] + self.tau * source_p[k]);
        }
        let x = self.factorized.solve(&rhs)?;
        Ok((x[..n_u].to_vec(), x[n_u..].to_vec()))
    }
}

/// Compute the t = 0 state for the given policy.  `rhs_u` is the static
/// mechanical load at t = 0 (usually `system.load_u`).
pub fn initial_state(
    system: &BiotSystem,
    ic: InitialCondition,
    rhs_u: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n_u = system.n_u();
    let n_p = system.n_p();
    assert_eq!(rhs_u.len(), n_u);
    match ic {
        InitialCondition::ZeroDiv => Ok((vec![0.0; n_u], vec![0.0; n_p])),
        InitialCondition::StabilizedStokes => {
            if system.c_stab.max_abs() == 0.0 {
                if system.space == DisplacementSpace::P1Bubble {
                    return stokes_via_bubble_elimination(system, rhs_u);
                }
                // The equal-order pair without stabilization has no stable
                // Stokes limit; depending on mesh parity the matrix is
                // either exactly singular or invertible onto checkerboard
                // garbage, so reject it outright.
                return Err(Error::invalid(
                    "the unstabilized equal-order pair has a singular (unstable) Stokes \
                     limit; use epsilon > 0 or the bubble-enriched space",
                ));
            }
            let matrix = monolithic_step_matrix(system, 0.0)?;
            let factorized = FactorizedSystem::new(matrix)?;
            let mut rhs = rhs_u.to_vec();
            rhs.extend(std::iter::repeat(0.0).take(n_p));
            let x = factorized.solve(&rhs)?;
            Ok((x[..n_u].to_vec(), x[n_u..].to_vec()))
        }
    }
}

/// Stokes solve for the bubble-enriched pair without stabilization: the
/// bubble DOFs are condensed out element by element, the reduced
/// vertex/pressure saddle system `[[A_l, B_l^T], [B_l, -S]]` (quasidefinite
/// because the condensation S is positive definite once a drained boundary
/// removes the constant pressure) is solved, and the bubbles are recovered
/// from `A_b u_b = f_b - B_b^T p`.
fn stokes_via_bubble_elimination(
    system: &BiotSystem,
    rhs_u: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = system.mesh.dim();
    let ne = system.mesh.n_elements();
    let n_u = system.n_u();
    let n_p = system.n_p();
    let nb = d * ne;
    let nl = n_u - nb;

    // Per-element bubble blocks of the reduced elasticity matrix (the
    // reduced numbering keeps bubbles contiguous at the tail, one d-block
    // per element).
    let mut a_b: Vec<DenseMatrix> = Vec::with_capacity(ne);
    for t in 0..ne {
        let mut block = DenseMatrix::zeros(d, d);
        for i in 0..d {
            let (cols, vals) = system.a.row(nl + d * t + i);
            for (&c, &v) in cols.iter().zip(vals) {
                assert!(c >= nl + d * t && c < nl + d * (t + 1));
                block[(i, c - nl - d * t)] = v;
            }
        }
        a_b.push(block);
    }

    // Vertex-vertex elasticity and the split divergence columns.
    let mut t_al = Vec::new();
    for (r, c, v) in system.a.iter() {
        if r < nl && c < nl {
            t_al.push((r, c, v));
        }
    }
    let mut t_bl = Vec::new();
    let mut b_b_cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nb];
    for (r, c, v) in system.b.iter() {
        if c < nl {
            t_bl.push((r, c, v));
        } else {
            b_b_cols[c - nl].push((r, v));
        }
    }

    // Condensation S = B_b A_b^{-1} B_b^T, assembled per element, and the
    // load correction B_b A_b^{-1} f_b.
    let mut t_s = Vec::new();
    let mut load_corr = vec![0.0; n_p];
    let mut f_b_solved: Vec<Vec<f64>> = Vec::with_capacity(ne);
    for t in 0..ne {
        // Pressure rows touched by this element's bubble columns.
        let mut rows: Vec<usize> = Vec::new();
        for i in 0..d {
            for &(r, _) in &b_b_cols[d * t + i] {
                if !rows.contains(&r) {
                    rows.push(r);
                }
            }
        }
        rows.sort_unstable();
        let mut g = DenseMatrix::zeros(d, rows.len());
        for i in 0..d {
            for &(r, v) in &b_b_cols[d * t + i] {
                let k = rows.iter().position(|&x| x == r).unwrap();
                g[(i, k)] = v;
            }
        }
        let ainv_g = a_b[t].solve(&g)?;
        let s = g.transpose().matmul(&ainv_g);
        for (j, &rj) in rows.iter().enumerate() {
            for (k, &rk) in rows.iter().enumerate() {
                t_s.push((rj, rk, s[(j, k)]));
            }
        }
        let mut f_b = DenseMatrix::zeros(d, 1);
        for i in 0..d {
            f_b[(i, 0)] = rhs_u[nl + d * t + i];
        }
        let y = a_b[t].solve(&f_b)?;
        f_b_solved.push((0..d).map(|i| y[(i, 0)]).collect());
        for (k, &rk) in rows.iter().enumerate() {
            let mut acc = 0.0;
            for i in 0..d {
                acc += g[(i, k)] * y[(i, 0)];
            }
            load_corr[rk] += acc;
        }
    }

    let n = nl + n_p;
    let mut triplets = t_al;
    for &(r, c, v) in &t_bl {
        triplets.push((nl + r, c, v));
        triplets.push((c, nl + r, v));
    }
    for &(r, c, v) in &t_s {
        triplets.push((nl + r, nl + c, -v));
    }
    let matrix = CsrMatrix::from_triplets(n, n, &triplets)?;
    let factorized = FactorizedSystem::new(matrix)?;
    let mut rhs: Vec<f64> = rhs_u[..nl].to_vec();
    for k in 0..n_p {
        rhs.push(-load_corr[k]);
    }
    let x = factorized.solve(&rhs)?;
    let p: Vec<f64> = x[nl..].to_vec();

    // Recover bubbles: u_b = A_b^{-1} (f_b - B_b^T p).
    let mut u = vec![0.0; n_u];
    u[..nl].copy_from_slice(&x[..nl]);
    for t in 0..ne {
        let mut rhs_b = DenseMatrix::zeros(d, 1);
        for i in 0..d {
            let mut btp = 0.0;
            for &(r, v) in &b_b_cols[d * t + i] {
                btp += v * p[r];
            }
            rhs_b[(i, 0)] = rhs_u[nl + d * t + i] - btp;
        }
        let y = a_b[t].solve(&rhs_b)?;
        for i in 0..d {
            u[nl + d * t + i] = y[(i, 0)];
        }
    }
    let _ = f_b_solved;
    Ok((u, p))
}

/// A computed trajectory: state at t_0 = 0 and after each step.
#[derive(Debug, Clone)]
pub struct SolutionHistory {
    pub times: Vec<f64>,
    /// Reduced displacement vectors, one per entry of `times`.
    pub displacements: Vec<Vec<f64>>,
    /// Reduced pressure vectors, one per entry of `times`.
    pub pressures: Vec<Vec<f64>>,
    /// Wall-clock seconds per time step (excluding the factorization).
    pub step_seconds: Vec<f64>,
    /// Wall-clock seconds spent factorizing the step matrix.
    pub factor_seconds: f64,
}

impl SolutionHistory {
    pub fn final_pressure(&self) -> &[f64] {
        self.pressures.last().expect("history is never empty")
    }

    pub fn final_displacement(&self) -> &[f64] {
        self.displacements.last().expect("history is never empty")
    }
}

/// Integrated fluid source over time: produces the full-length vector of
/// functionals `(g(t), l_k)` at a given time, or `None` for no source.
pub type SourceFn<'s> = Option<&'s dyn Fn(f64) -> Vec<f64>>;

/// Run the implicit Euler scheme: build the initial state, factor the step
/// matrix once, and advance `time.n_steps` steps under the system's static
/// mechanical load and the optional fluid source.
pub fn run(
    system: &BiotSystem,
    time: TimeParams,
    ic: InitialCondition,
    source: SourceFn,
) -> Result<SolutionHistory> {
    let (u0, p0) = initial_state(system, ic, &system.load_u)?;
    let solver = StepSolver::new(system, time.tau)?;
    let mut history = SolutionHistory {
        times: vec![0.0],
        displacements: vec![u0],
        pressures: vec![p0],
        step_seconds: Vec::with_capacity(time.n_steps),
        factor_seconds: solver.factor_seconds,
    };
    let zero_source = vec![0.0; system.n_p()];
    for n in 1..=time.n_steps {
        let t = n as f64 * time.tau;
        let start = Instant::now();
        let source_p = match source {
            Some(f) => {
                let full = f(t);
                assert_eq!(full.len(), system.mesh.n_pressure());
                system.p_map.reduce_vec(&full)
            }
            None => zero_source.clone(),
        };
        let (u, p) = solver.step(
            history.displacements.last().unwrap(),
            history.pressures.last().unwrap(),
            &system.load_u,
            &source_p,
        )?;
        history.step_seconds.push(start.elapsed().as_secs_f64());
        history.times.push(t);
        history.displacements.push(u);
        history.pressures.push(p);
    }
    Ok(history)
}

/// Closed-form pressure Schur blocks of the 1D column system.
///
/// Eliminating the displacement from the step system leaves
/// `(C + A_eps + tau A_p) P^n = B A^{-1} f^n - B U^{n-1} + A_eps P^{n-1}
/// + tau G^n`, where `C = B A^{-1} B^T` splits into a vertex part `C_l`
/// with the assembled element form `(h_T / (4 E_T)) * ones` and, for the
/// bubble-enriched space, the condensation `C_b = sum_T h_T^2/(12 E_T) L_T`.
#[derive(Debug, Clone)]
pub struct ColumnSchur {
    /// Vertex-displacement Schur complement `B_l A_l^{-1} B_l^T`.
    pub c_l: CsrMatrix,
    /// Bubble condensation (zero matrix for the plain P1 pair).
    pub c_b: CsrMatrix,
    /// Pressure stabilization block.
    pub a_eps: CsrMatrix,
    /// Full pressure step matrix `C_l + C_b + A_eps + tau A_p`.
    pub step_matrix: CsrMatrix,
}

/// Build the closed-form 1D Schur blocks of a column system.
pub fn column_schur(system: &BiotSystem, tau: f64) -> Result<ColumnSchur> {
    let MeshData::Interval(mesh) = &system.mesh else {
        return Err(Error::invalid("pressure Schur diagnostics require a 1D column system"));
    };
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!("time step must be nonnegative, got {tau}")));
    }
    let n_p = system.mesh.n_pressure();
    let mut t_cl = Vec::new();
    let mut t_cb = Vec::new();
    for t in 0..mesh.n_elements() {
        let h = mesh.element_size(t);
        let e = system.material.axial_modulus(t);
        let verts = [t, t + 1];
        // C_l element: (h / (4 E)) * ones(2, 2).
        for &j in &verts {
            for &k in &verts {
                t_cl.push((j, k, h / (4.0 * e)));
            }
        }
        // C_b element: (h^2 / (12 E)) L_T = (h / (12 E)) [[1,-1],[-1,1]].
        if system.space == DisplacementSpace::P1Bubble {
            let w = h / (12.0 * e);
            t_cb.push((t, t, w));
            t_cb.push((t, t + 1, -w));
            t_cb.push((t + 1, t, -w));
            t_cb.push((t + 1, t + 1, w));
        }
    }
    let full_cl = CsrMatrix::from_triplets(n_p, n_p, &t_cl)?;
    let full_cb = CsrMatrix::from_triplets(n_p, n_p, &t_cb)?;
    let c_l = crate::assembly::reduce_matrix(&full_cl, &system.p_map, &system.p_map)?;
    let c_b = crate::assembly::reduce_matrix(&full_cb, &system.p_map, &system.p_map)?;
    let a_eps = system.c_stab.clone();
    let step_matrix = c_l
        .add_scaled(1.0, &c_b)
        .add_scaled(1.0, &a_eps)
        .add_scaled(tau, &system.a_p);
    Ok(ColumnSchur { c_l, c_b, a_eps, step_matrix })
}
