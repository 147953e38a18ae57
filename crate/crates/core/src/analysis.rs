//! Monotonicity auditing, spectral diagnostics, and error norms.
//!
//! The pressure step matrix of the 1D column is an M-matrix (hence the
//! scheme is monotone) exactly when every element satisfies
//! `h_T^2 / (c K_T E_T) <= tau`, with `c = 4` for the equal-order pair and
//! `c = 6` for the bubble-enriched one.  This module checks the sign
//! structure directly, evaluates the restriction, scores oscillations in
//! sampled profiles, brackets the generalized eigenvalues of the bubble
//! condensation against `h^2 L`, and computes the error norms used by the
//! convergence studies.

use crate::assembly::{BiotSystem, DisplacementSpace, MaterialField, MeshData};
use crate::error::{Error, Result};
use crate::linalg::{dot, CsrMatrix, DenseMatrix};
use crate::quadrature::{bary_to_xy, gauss_1d_3, triangle_degree5};

/// Sign-structure audit of a square matrix.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MonotonicityReport {
    /// Off-diagonal entries exceeding the relative tolerance.
    pub positive_offdiag_count: usize,
    /// The offending `(row, col, value)` triples.
    pub violating_entries: Vec<(usize, usize, f64)>,
    /// `max_T h_T^2 / (c K_T E_T) - tau`; positive means the monotonicity
    /// restriction fails.  Filled by the audit driver, not by
    /// [`m_matrix_check`].
    pub restriction_margin: Option<f64>,
    /// Sign-change count of a sampled profile beyond the reference.
    /// Filled by the audit driver.
    pub oscillation_score: Option<usize>,
}

/// List all strictly positive off-diagonal entries above
/// `tol * max|entry|` (an M-matrix has none).
pub fn m_matrix_check(matrix: &CsrMatrix, tol: f64) -> Result<MonotonicityReport> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::invalid("sign audit requires a square matrix"));
    }
    let scale = matrix.max_abs();
    let threshold = tol * scale;
    let mut violating = Vec::new();
    for (r, c, v) in matrix.iter() {
        if r != c && v > threshold {
            violating.push((r, c, v));
        }
    }
    Ok(MonotonicityReport {
        positive_offdiag_count: violating.len(),
        violating_entries: violating,
        restriction_margin: None,
        oscillation_score: None,
    })
}

/// The constant `c` in the restriction `h^2 < c E K tau`: 4 for the
/// equal-order pair, 6 for the bubble-enriched one.
pub fn monotonicity_constant(space: DisplacementSpace) -> f64 {
    match space {
        DisplacementSpace::P1 => 4.0,
        DisplacementSpace::P1Bubble => 6.0,
    }
}

/// Minimal time step for a monotone 1D scheme:
/// `max_T h_T^2 / (c K_T E_T)` with E the axial modulus.  Only the 1D
/// column theory provides this bound; 2D meshes are rejected.
pub fn restriction_threshold(
    mesh: &MeshData,
    material: &MaterialField,
    space: DisplacementSpace,
) -> Result<f64> {
    let MeshData::Interval(interval) = mesh else {
        return Err(Error::unsupported(
            "no monotonicity restriction is derived for 2D meshes; only sign audits apply",
        ));
    };
    if material.n_elements() != interval.n_elements() {
        return Err(Error::invalid("material and mesh element counts differ"));
    }
    let c = monotonicity_constant(space);
    let mut worst: f64 = 0.0;
    for t in 0..interval.n_elements() {
        let h = interval.element_size(t);
        let k = material.permeability(t);
        let e = material.axial_modulus(t);
        if !(k > 0.0) {
            return Err(Error::invalid(format!(
                "restriction threshold needs positive permeability, K[{t}] = {k}"
            )));
        }
        worst = worst.max(h * h / (c * k * e));
    }
    Ok(worst)
}

/// Outcome of checking the restriction at a given time step.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct RestrictionCheck {
    /// Minimal monotone time step `max_T h_T^2 / (c K_T E_T)`.
    pub threshold_tau: f64,
    /// `threshold_tau - tau`; positive means the restriction fails.
    pub margin: f64,
    /// Whether the restriction holds (up to 1e-9 relative slack, so a mesh
    /// sized exactly at the bound counts as satisfied).
    pub satisfied: bool,
    /// Whether the check sits within 1e-9 relative of the boundary.
    pub marginal: bool,
}

/// Evaluate the 1D restriction `h^2 <= c E K tau` element by element.
pub fn restriction_check(
    mesh: &MeshData,
    material: &MaterialField,
    space: DisplacementSpace,
    tau: f64,
) -> Result<RestrictionCheck> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!("time step must be positive, got {tau}")));
    }
    let threshold_tau = restriction_threshold(mesh, material, space)?;
    let margin = threshold_tau - tau;
    Ok(RestrictionCheck {
        threshold_tau,
        margin,
        satisfied: threshold_tau <= tau * (1.0 + 1e-9),
        marginal: margin.abs() <= 1e-9 * tau,
    })
}

/// Number of uniform subintervals needed on a column of the given length
/// for the restriction to hold at time step `tau`:
/// the smallest n with (length/n)^2 <= c E K tau, i.e.
/// `ceil(length / sqrt(c E K tau))` with 1e-9 relative slack so that
/// exact-integer thresholds are not pushed up by roundoff.
pub fn required_uniform_elements(
    length: f64,
    young: f64,
    permeability: f64,
    tau: f64,
    space: DisplacementSpace,
) -> Result<usize> {
    for (name, v) in [
        ("length", length),
        ("Young's modulus", young),
        ("permeability", permeability),
        ("time step", tau),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let c = monotonicity_constant(space);
    let x = length / (c * young * permeability * tau).sqrt();
    Ok((x * (1.0 - 1e-9)).ceil() as usize)
}

/// Count the sign changes of first differences along a sampled profile,
/// ignoring differences below a noise floor of 1e-8 of the profile range,
/// and subtract the reference count of the analytic solution (floored at
/// zero).  A monotone profile scores zero against a monotone reference.
pub fn oscillation_score(profile: &[f64], reference_sign_changes: usize) -> Result<usize> {
    if profile.len() < 3 {
        return Err(Error::invalid(format!(
            "oscillation scoring needs at least 3 samples, got {}",
            profile.len()
        )));
    }
    let lo = profile.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = profile.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let floor = 1e-8 * (hi - lo);
    let mut changes = 0usize;
    let mut last_sign = 0i8;
    for w in profile.windows(2) {
        let d = w[1] - w[0];
        if d.abs() <= floor {
            continue;
        }
        let sign: i8 = if d > 0.0 { 1 } else { -1 };
        if last_sign != 0 && sign != last_sign {
            changes += 1;
        }
        last_sign = sign;
    }
    Ok(changes.saturating_sub(reference_sign_changes))
}

/// Largest excursion of the profile outside `[lo, hi]` (zero when the
/// profile stays inside).
pub fn max_overshoot(profile: &[f64], lo: f64, hi: f64) -> f64 {
    let mut worst = 0.0f64;
    for &v in profile {
        if v > hi {
            worst = worst.max(v - hi);
        }
        if v < lo {
            worst = worst.max(lo - v);
        }
    }
    worst
}

/// Generalized eigenvalue bracket of one element's condensation pencil.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ElementBracket {
    pub theta_min: f64,
    pub theta_max: f64,
}

/// Eigenvalue brackets of the pencil `(S_{b,T}, h_T^2 L_T)` restricted to
/// the complement of constants, per element and globally.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SpectralReport {
    pub global_min: f64,
    pub global_max: f64,
    /// `global_max / global_min`.
    pub ratio: f64,
    pub per_element: Vec<ElementBracket>,
}

/// Compute the spectral bracket of the bubble condensation against the
/// scaled P1 stiffness on every element.  Both matrices annihilate
/// constants, so the pencil is evaluated on an orthonormal basis of the
/// complement; in 1D the two bounds coincide at `1 / (12 (2 mu + lambda))`.
pub fn spectral_equivalence_report(
    mesh: &MeshData,
    material: &MaterialField,
) -> Result<SpectralReport> {
    if material.n_elements() != mesh.n_elements() {
        return Err(Error::invalid("material and mesh element counts differ"));
    }
    let mut per_element = Vec::with_capacity(mesh.n_elements());
    let mut global_min = f64::INFINITY;
    let mut global_max = 0.0f64;
    for t in 0..mesh.n_elements() {
        let geom = mesh.geometry(t)?;
        let (lambda, mu) = material.lame(t);
        let s = crate::local_elements::bubble_schur(&geom, lambda, mu)?;
        let h2 = mesh.element_diameter(t).powi(2);
        let bracket = match mesh.dim() {
            1 => {
                // One-dimensional complement of constants: q = (1,-1)/sqrt 2.
                let q = [std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2];
                let num = quad_form(&s, &q, &q);
                let den = h2 * quad_form(&geom.p1_stiffness, &q, &q);
                let theta = num / den;
                ElementBracket { theta_min: theta, theta_max: theta }
            }
            _ => {
                let r2 = 0.5f64.sqrt();
                let r6 = (1.0 / 6.0f64).sqrt();
                let q1 = [r2, -r2, 0.0];
                let q2 = [r6, r6, -2.0 * r6];
                let s00 = quad_form(&s, &q1, &q1);
                let s01 = quad_form(&s, &q1, &q2);
                let s11 = quad_form(&s, &q2, &q2);
                let l00 = h2 * quad_form(&geom.p1_stiffness, &q1, &q1);
                let l01 = h2 * quad_form(&geom.p1_stiffness, &q1, &q2);
                let l11 = h2 * quad_form(&geom.p1_stiffness, &q2, &q2);
                // det(S - theta L) = 0: a theta^2 - b theta + c = 0.
                let a = l00 * l11 - l01 * l01;
                let b = s00 * l11 + s11 * l00 - 2.0 * s01 * l01;
                let c = s00 * s11 - s01 * s01;
                let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
                ElementBracket {
                    theta_min: (b - disc) / (2.0 * a),
                    theta_max: (b + disc) / (2.0 * a),
                }
            }
        };
        global_min = global_min.min(bracket.theta_min);
        global_max = global_max.max(bracket.theta_max);
        per_element.push(bracket);
    }
    Ok(SpectralReport { global_min, global_max, ratio: global_max / global_min, per_element })
}

fn quad_form(m: &DenseMatrix, x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            acc += x[i] * m[(i, j)] * y[j];
        }
    }
    acc
}

/// Error norms of a computed state.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct ErrorNorms {
    /// `|| p - p_h ||_{L2}`.
    pub l2_pressure: f64,
    /// `(|| p - p_h ||^2 + tau sum_T K_T || grad(p - p_h) ||_T^2)^{1/2}`,
    /// the pressure energy norm of the convergence tables.
    pub energy_pressure: f64,
    /// Discrete scheme norm of the numeric pair itself:
    /// `(u' A u + tau p' A_p p + p' C_stab p)^{1/2}`.
    pub tau_h_norm: f64,
}

/// Compute pressure error norms against an exact solution and the discrete
/// scheme norm of the pair.  `u` and `p` are the reduced vectors;
/// coordinates reach the closures as slices of length `dim`.  Quadrature is
/// exact through degree 5, comfortably covering the degree-4 products of
/// the interpolated error.
pub fn error_norms(
    system: &BiotSystem,
    u: &[f64],
    p: &[f64],
    exact_p: &dyn Fn(&[f64]) -> f64,
    exact_grad_p: &dyn Fn(&[f64]) -> Vec<f64>,
    tau: f64,
) -> Result<ErrorNorms> {
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::invalid(format!("time step must be nonnegative, got {tau}")));
    }
    let nodal = system.expand_pressure(p);
    let mut l2_sq = 0.0;
    let mut grad_sq = 0.0;
    match &system.mesh {
        MeshData::Interval(mesh) => {
            for t in 0..mesh.n_elements() {
                let (a, b) = (mesh.nodes()[t], mesh.nodes()[t + 1]);
                let h = b - a;
                let (pa, pb) = (nodal[t], nodal[t + 1]);
                let grad_num = (pb - pa) / h;
                let k = system.material.permeability(t);
                for q in gauss_1d_3() {
                    let x = a + q.x * h;
                    let val_num = pa * (1.0 - q.x) + pb * q.x;
                    let e = val_num - exact_p(&[x]);
                    let ge = grad_num - exact_grad_p(&[x])[0];
                    l2_sq += q.w * h * e * e;
                    grad_sq += q.w * h * k * ge * ge;
                }
            }
        }
        MeshData::Tri(mesh) => {
            for t in 0..mesh.n_triangles() {
                let verts = mesh.triangles()[t];
                let coords = mesh.triangle_coords(t);
                let geom = crate::local_elements::triangle_geometry(&coords)?;
                let area = geom.measure;
                let scale = area.sqrt();
                let vals = [nodal[verts[0]], nodal[verts[1]], nodal[verts[2]]];
                let mut grad_num = [0.0f64; 2];
                for a in 0..3 {
                    for x in 0..2 {
                        grad_num[x] += vals[a] * geom.lambda_gradients[(x, a)] / scale;
                    }
                }
                let k = system.material.permeability(t);
                for q in triangle_degree5() {
                    let xy = bary_to_xy(q.bary, &coords);
                    let val_num =
                        vals[0] * q.bary[0] + vals[1] * q.bary[1] + vals[2] * q.bary[2];
                    let e = val_num - exact_p(&xy);
                    let g = exact_grad_p(&xy);
                    let gex = (grad_num[0] - g[0], grad_num[1] - g[1]);
                    l2_sq += q.w * area * e * e;
                    grad_sq += q.w * area * k * (gex.0 * gex.0 + gex.1 * gex.1);
                }
            }
        }
    }
    let tau_h_sq = dot(u, &system.a.spmv(u))
        + tau * dot(p, &system.a_p.spmv(p))
        + dot(p, &system.c_stab.spmv(p));
    Ok(ErrorNorms {
        l2_pressure: l2_sq.sqrt(),
        energy_pressure: (l2_sq + tau * grad_sq).sqrt(),
        tau_h_norm: tau_h_sq.max(0.0).sqrt(),
    })
}
