//! Reference problems and their analytic solutions.
//!
//! Four consolidation scenarios exercise the solvers end to end: the
//! uniformly loaded draining column (whose pressure obeys a heat equation
//! with an exact Fourier series), a column with a low-permeability middle
//! layer, the classic rectangular specimen squeezed between rigid plates
//! (with its tangent-equation series solution), and a unit square driven by
//! an oscillating point source.  Builders return a ready-to-run [`Scenario`]
//! bundling the assembled system, time grid, initial-condition policy,
//! sampling line, and analytic reference where one exists.

use crate::assembly::{
    BcSpec, BiotSystem, ColumnBc, DisplacementSpace, MaterialField, MeshData, RectBc, SideBc,
    StabWeight,
};
use crate::error::{Error, Result};
use crate::mesh::{IntervalMesh, TriMesh};
use crate::solver::{run, InitialCondition, SolutionHistory, TimeParams};

/// Drained-column pressure at position `x` and time `t > 0`:
/// the Fourier series of the heat equation `p_t = E K p_xx` on `(0, H)`
/// with `p(0) = 0`, `p_x(H) = 0`, and the uniform start value `|sigma0|`.
/// Terms are dropped once their exponential factor falls below 1e-14.
pub fn terzaghi_pressure(
    x: f64,
    t: f64,
    young: f64,
    permeability: f64,
    length: f64,
    sigma0: f64,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("series requires t > 0, got {t}")));
    }
    if !(0.0..=length).contains(&x) {
        return Err(Error::invalid(format!("position {x} outside the column [0, {length}]")));
    }
    for (name, v) in [("Young's modulus", young), ("permeability", permeability), ("length", length)]
    {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("{name} must be positive, got {v}")));
        }
    }
    let p0 = sigma0.abs();
    let pi = std::f64::consts::PI;
    let decay_rate = pi * pi * young * permeability * t / (4.0 * length * length);
    let mut sum = 0.0;
    let mut k = 0u64;
    loop {
        let m = (2 * k + 1) as f64;
        let factor = (-m * m * decay_rate).exp();
        if factor < 1e-14 {
            break;
        }
        sum += 4.0 * p0 / (m * pi) * (m * pi * x / (2.0 * length)).sin() * factor;
        k += 1;
    }
    Ok(sum)
}

/// Spatial derivative of [`terzaghi_pressure`], truncated consistently.
pub fn terzaghi_pressure_gradient(
    x: f64,
    t: f64,
    young: f64,
    permeability: f64,
    length: f64,
    sigma0: f64,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("series requires t > 0, got {t}")));
    }
    let p0 = sigma0.abs();
    let pi = std::f64::consts::PI;
    let decay_rate = pi * pi * young * permeability * t / (4.0 * length * length);
    let mut sum = 0.0;
    let mut k = 0u64;
    loop {
        let m = (2 * k + 1) as f64;
        let factor = (-m * m * decay_rate).exp();
        if factor < 1e-14 {
            break;
        }
        sum += 2.0 * p0 / length * (m * pi * x / (2.0 * length)).cos() * factor;
        k += 1;
    }
    Ok(sum)
}

/// Material and series data of the squeezed rectangular specimen.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MandelParams {
    /// Half-width a (the drained faces sit at x = +-a).
    pub half_width: f64,
    /// Half-height b.
    pub half_height: f64,
    /// Total vertical force on the plate.
    pub force: f64,
    /// Skempton coefficient (1 for incompressible constituents).
    pub skempton: f64,
    pub poisson: f64,
    pub undrained_poisson: f64,
    pub young: f64,
    pub permeability: f64,
    /// Consolidation coefficient `K (lambda + 2 mu)`.
    pub consolidation: f64,
    /// Instantaneous uniform pressure `B (1 + nu_u) F / (3 a)`.
    pub p0: f64,
    /// Ascending positive roots of `tan alpha = ((1 - nu)/(nu_u - nu)) alpha`.
    pub roots: Vec<f64>,
}

impl MandelParams {
    /// Assemble the parameter set for incompressible constituents
    /// (Skempton coefficient 1) and precompute `n_roots` series roots.
    pub fn new(
        young: f64,
        poisson: f64,
        permeability: f64,
        force: f64,
        half_width: f64,
        half_height: f64,
        n_roots: usize,
    ) -> Result<Self> {
        let probe = MaterialField::uniform(1, young, poisson, permeability)?;
        let (lambda, mu) = probe.lame(0);
        let skempton = 1.0;
        let undrained_poisson =
            (3.0 * poisson + skempton * (1.0 - 2.0 * poisson)) / (3.0 - skempton * (1.0 - 2.0 * poisson));
        let consolidation = permeability * (lambda + 2.0 * mu);
        let p0 = skempton * (1.0 + undrained_poisson) * force / (3.0 * half_width);
        let roots = mandel_roots(poisson, undrained_poisson, n_roots)?;
        Ok(MandelParams {
            half_width,
            half_height,
            force,
            skempton,
            poisson,
            undrained_poisson,
            young,
            permeability,
            consolidation,
            p0,
            roots,
        })
    }

    /// The standard configuration used throughout: E = 1e4, nu = 0,
    /// K = 1e-6, F = 1 on a unit quarter domain.
    pub fn standard(n_roots: usize) -> Result<Self> {
        Self::new(1e4, 0.0, 1e-6, 1.0, 1.0, 1.0, n_roots)
    }

    /// Series pressure using all precomputed roots (adaptive truncation).
    pub fn pressure(&self, x: f64, t: f64) -> Result<f64> {
        mandel_pressure(self, x, t, self.roots.len())
    }

    /// Series pressure x-derivative using all precomputed roots.
    pub fn pressure_gradient(&self, x: f64, t: f64) -> Result<f64> {
        mandel_pressure_gradient(self, x, t, self.roots.len())
    }
}

/// First `count` positive roots of `tan alpha = c alpha` with
/// `c = (1 - nu)/(nu_u - nu) > 1`: the k-th root (0-based) lies in
/// `(k pi, k pi + pi/2)`.  Bisection on the well-conditioned form
/// `sin alpha - c alpha cos alpha` followed by a Newton polish.
pub fn mandel_roots(nu: f64, nu_u: f64, count: usize) -> Result<Vec<f64>> {
    if !(nu_u > nu) {
        return Err(Error::invalid(format!(
            "undrained Poisson ratio {nu_u} must exceed the drained one {nu}"
        )));
    }
    let c = (1.0 - nu) / (nu_u - nu);
    if !(c > 1.0) || !c.is_finite() {
        return Err(Error::invalid(format!("root equation slope must exceed 1, got {c}")));
    }
    let g = |alpha: f64| alpha.sin() - c * alpha * alpha.cos();
    let dg = |alpha: f64| (1.0 - c) * alpha.cos() + c * alpha * alpha.sin();
    let pi = std::f64::consts::PI;
    let mut roots = Vec::with_capacity(count);
    for k in 0..count {
        let mut lo = k as f64 * pi + 1e-12;
        let mut hi = k as f64 * pi + pi / 2.0 - 1e-12;
        let (mut glo, ghi) = (g(lo), g(hi));
        if k == 0 {
            // g(0+) ~ alpha (1 - c) < 0 already, but evaluate robustly.
            lo = 1e-8;
            glo = g(lo);
        }
        if glo.signum() == ghi.signum() {
            return Err(Error::invalid(format!(
                "root bracketing failed in interval {k}: g({lo}) = {glo}, g({hi}) = {ghi}"
            )));
        }
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            let gm = g(mid);
            if gm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if gm.signum() == glo.signum() {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        let mut alpha = 0.5 * (lo + hi);
        for _ in 0..4 {
            let step = g(alpha) / dg(alpha);
            let next = alpha - step;
            if next > k as f64 * pi && next < k as f64 * pi + pi / 2.0 {
                alpha = next;
            }
        }
        if let Some(&prev) = roots.last() {
            if alpha <= prev {
                return Err(Error::invalid(format!(
                    "roots failed to increase at index {k}: {alpha} after {prev}"
                )));
            }
        }
        roots.push(alpha);
    }
    Ok(roots)
}

fn mandel_coefficient(alpha: f64) -> f64 {
    alpha.sin() / (alpha - alpha.sin() * alpha.cos())
}

/// Series pressure `2 p0 sum_n coef_n (cos(alpha_n x / a) - cos alpha_n)
/// exp(-alpha_n^2 c t / a^2)`, truncated adaptively once the term bound
/// drops below `1e-14 p0`; errors when `t <= 0` or the available roots are
/// exhausted before convergence.
pub fn mandel_pressure(params: &MandelParams, x: f64, t: f64, n_terms: usize) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("series requires t > 0, got {t}")));
    }
    let a = params.half_width;
    if x.abs() > a * (1.0 + 1e-12) {
        return Err(Error::invalid(format!("position {x} outside the specimen [-{a}, {a}]")));
    }
    let tol = 1e-14 * params.p0.max(f64::MIN_POSITIVE);
    let mut sum = 0.0;
    let limit = n_terms.min(params.roots.len());
    for (n, &alpha) in params.roots[..limit].iter().enumerate() {
        let coef = mandel_coefficient(alpha);
        let decay = (-alpha * alpha * params.consolidation * t / (a * a)).exp();
        let bound = 2.0 * params.p0 * coef.abs() * 2.0 * decay;
        sum += coef * ((alpha * x / a).cos() - alpha.cos()) * decay;
        if bound < tol {
            return Ok(2.0 * params.p0 * sum);
        }
        if n + 1 == limit {
            return Err(Error::invalid(format!(
                "series not converged after {limit} roots (bound {bound:.3e}); \
                 precompute more roots or request a later time"
            )));
        }
    }
    Err(Error::invalid("no series roots available"))
}

/// Fixed-length partial sum of the pressure series (no convergence
/// requirement); used to probe the small-time limit.
pub fn mandel_pressure_truncated(params: &MandelParams, x: f64, t: f64, n_terms: usize) -> f64 {
    let a = params.half_width;
    let limit = n_terms.min(params.roots.len());
    let mut sum = 0.0;
    for &alpha in &params.roots[..limit] {
        let coef = mandel_coefficient(alpha);
        let decay = (-alpha * alpha * params.consolidation * t / (a * a)).exp();
        sum += coef * ((alpha * x / a).cos() - alpha.cos()) * decay;
    }
    2.0 * params.p0 * sum
}

/// x-derivative of the series pressure, truncated adaptively.
pub fn mandel_pressure_gradient(
    params: &MandelParams,
    x: f64,
    t: f64,
    n_terms: usize,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("series requires t > 0, got {t}")));
    }
    let a = params.half_width;
    let tol = 1e-14 * params.p0.max(f64::MIN_POSITIVE) * (1.0f64).max(1.0 / a);
    let mut sum = 0.0;
    let limit = n_terms.min(params.roots.len());
    for (n, &alpha) in params.roots[..limit].iter().enumerate() {
        let coef = mandel_coefficient(alpha);
        let decay = (-alpha * alpha * params.consolidation * t / (a * a)).exp();
        let bound = 2.0 * params.p0 * coef.abs() * (alpha / a) * decay;
        sum += coef * (-(alpha / a) * (alpha * x / a).sin()) * decay;
        if bound < tol {
            return Ok(2.0 * params.p0 * sum);
        }
        if n + 1 == limit {
            return Err(Error::invalid(format!(
                "gradient series not converged after {limit} roots (bound {bound:.3e})"
            )));
        }
    }
    Err(Error::invalid("no series roots available"))
}

/// An oscillating fluid point source `f(t) = 2 beta sin(beta t)` applied at
/// one mesh vertex.  In the extraction-positive sign convention of the flow
/// equation an injection enters the discrete right-hand side with a minus
/// sign, which is what makes the medium expand (pressure rise) during the
/// positive source phase.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PointSource {
    pub vertex: usize,
    pub beta: f64,
}

impl PointSource {
    /// Full-length vector of source functionals at time `t`.
    pub fn functional(&self, n_pressure: usize, t: f64) -> Vec<f64> {
        let mut v = vec![0.0; n_pressure];
        v[self.vertex] = -2.0 * self.beta * (self.beta * t).sin();
        v
    }
}

/// Closed-form reference solutions attachable to a scenario.
#[derive(Debug, Clone)]
pub enum AnalyticSolution {
    Column { young: f64, permeability: f64, length: f64, sigma0: f64 },
    Mandel(MandelParams),
}

impl AnalyticSolution {
    /// Pressure at 1D position `x` (the along-line coordinate) and time `t`.
    pub fn pressure(&self, x: f64, t: f64) -> Result<f64> {
        match self {
            AnalyticSolution::Column { young, permeability, length, sigma0 } => {
                terzaghi_pressure(x, t, *young, *permeability, *length, *sigma0)
            }
            AnalyticSolution::Mandel(p) => p.pressure(x, t),
        }
    }

    /// Along-line pressure derivative.
    pub fn pressure_gradient(&self, x: f64, t: f64) -> Result<f64> {
        match self {
            AnalyticSolution::Column { young, permeability, length, sigma0 } => {
                terzaghi_pressure_gradient(x, t, *young, *permeability, *length, *sigma0)
            }
            AnalyticSolution::Mandel(p) => p.pressure_gradient(x, t),
        }
    }
}

/// Discretization choice shared by all builders.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeSpec {
    pub space: DisplacementSpace,
    pub epsilon: f64,
    pub stab_weight: StabWeight,
}

impl SchemeSpec {
    /// Equal-order pair with the lumping stabilization 1/4, Young-scaled.
    pub fn p1_stabilized() -> Self {
        SchemeSpec { space: DisplacementSpace::P1, epsilon: 0.25, stab_weight: StabWeight::Youngs }
    }

    pub fn p1_unstabilized() -> Self {
        SchemeSpec { space: DisplacementSpace::P1, epsilon: 0.0, stab_weight: StabWeight::Youngs }
    }

    /// Bubble-enriched pair with the lumping stabilization 1/6.
    pub fn bubble_stabilized() -> Self {
        SchemeSpec {
            space: DisplacementSpace::P1Bubble,
            epsilon: 1.0 / 6.0,
            stab_weight: StabWeight::Youngs,
        }
    }

    pub fn bubble_unstabilized() -> Self {
        SchemeSpec {
            space: DisplacementSpace::P1Bubble,
            epsilon: 0.0,
            stab_weight: StabWeight::Youngs,
        }
    }
}

/// A fully prepared benchmark run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub system: BiotSystem,
    pub time: TimeParams,
    pub initial_condition: InitialCondition,
    pub source: Option<PointSource>,
    /// Vertex indices along the sampling line, in coordinate order.
    pub sample_vertices: Vec<usize>,
    /// The varying coordinate of each sample vertex.
    pub sample_coordinates: Vec<f64>,
    /// Sign changes of the analytic profile along the sampling line.
    pub reference_sign_changes: usize,
    pub analytic: Option<AnalyticSolution>,
    /// Physical pressure range along the line, when known a priori.
    pub overshoot_bounds: Option<(f64, f64)>,
}

impl Scenario {
    /// Extract the sampled profile from a full-length vertex pressure
    /// vector.
    pub fn sampled_profile(&self, full_pressure: &[f64]) -> Vec<f64> {
        self.sample_vertices.iter().map(|&v| full_pressure[v]).collect()
    }

    /// Run the scenario's time stepping.
    pub fn run(&self) -> Result<SolutionHistory> {
        match self.source {
            Some(src) => {
                let n = self.system.mesh.n_pressure();
                let f = move |t: f64| src.functional(n, t);
                run(&self.system, self.time, self.initial_condition, Some(&f))
            }
            None => run(&self.system, self.time, self.initial_condition, None),
        }
    }
}

/// Draining-column configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnConfig {
    pub n_elements: usize,
    pub young: f64,
    pub permeability: f64,
    pub length: f64,
    pub sigma0: f64,
}

impl Default for ColumnConfig {
    fn default() -> Self {
        ColumnConfig { n_elements: 32, young: 1.0, permeability: 1e-6, length: 1.0, sigma0: -1.0 }
    }
}

/// Build the draining column: top drained and loaded, bottom clamped and
/// sealed, uniform material.
pub fn build_column_scenario(
    cfg: &ColumnConfig,
    scheme: &SchemeSpec,
    time: TimeParams,
) -> Result<Scenario> {
    let mesh = MeshData::Interval(IntervalMesh::uniform(cfg.n_elements, cfg.length)?);
    let material = MaterialField::uniform(cfg.n_elements, cfg.young, 0.0, cfg.permeability)?;
    let system = BiotSystem::build(
        mesh,
        material,
        scheme.space,
        scheme.epsilon,
        scheme.stab_weight,
        BcSpec::Column(ColumnBc { sigma0: cfg.sigma0 }),
    )?;
    let MeshData::Interval(interval) = &system.mesh else { unreachable!() };
    let sample_vertices: Vec<usize> = (0..interval.n_nodes()).collect();
    let sample_coordinates = interval.nodes().to_vec();
    Ok(Scenario {
        name: "column".into(),
        system,
        time,
        initial_condition: InitialCondition::ZeroDiv,
        source: None,
        sample_vertices,
        sample_coordinates,
        reference_sign_changes: 0,
        analytic: Some(AnalyticSolution::Column {
            young: cfg.young,
            permeability: cfg.permeability,
            length: cfg.length,
            sigma0: cfg.sigma0,
        }),
        overshoot_bounds: Some((0.0, cfg.sigma0.abs())),
    })
}

/// Layered-column configuration: a low-permeability band between two
/// conductive layers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayeredConfig {
    pub n_elements: usize,
    pub young: f64,
    pub outer_permeability: f64,
    pub inner_permeability: f64,
    /// The low-permeability band occupies `[band_lo, band_hi]`.
    pub band_lo: f64,
    pub band_hi: f64,
    pub length: f64,
    pub sigma0: f64,
}

impl Default for LayeredConfig {
    fn default() -> Self {
        LayeredConfig {
            n_elements: 32,
            young: 1.0,
            outer_permeability: 1.0,
            inner_permeability: 1e-8,
            band_lo: 0.25,
            band_hi: 0.75,
            length: 1.0,
            sigma0: -1.0,
        }
    }
}

/// Build the layered column.  The band boundaries must coincide with mesh
/// nodes; an unresolved interface is an error rather than a silently
/// smeared jump.
pub fn build_layered_scenario(
    cfg: &LayeredConfig,
    scheme: &SchemeSpec,
    time: TimeParams,
) -> Result<Scenario> {
    if !(0.0 < cfg.band_lo && cfg.band_lo < cfg.band_hi && cfg.band_hi < cfg.length) {
        return Err(Error::invalid(format!(
            "band [{}, {}] must lie strictly inside (0, {})",
            cfg.band_lo, cfg.band_hi, cfg.length
        )));
    }
    let interval = IntervalMesh::uniform(cfg.n_elements, cfg.length)?;
    let tol = 1e-9 * cfg.length;
    for boundary in [cfg.band_lo, cfg.band_hi] {
        if !interval.nodes().iter().any(|&x| (x - boundary).abs() <= tol) {
            return Err(Error::invalid(format!(
                "layer interface at {boundary} is not resolved by the {}-element mesh",
                cfg.n_elements
            )));
        }
    }
    let permeability: Vec<f64> = (0..cfg.n_elements)
        .map(|t| {
            let mid = 0.5 * (interval.nodes()[t] + interval.nodes()[t + 1]);
            if mid >= cfg.band_lo && mid <= cfg.band_hi {
                cfg.inner_permeability
            } else {
                cfg.outer_permeability
            }
        })
        .collect();
    let material = MaterialField::new(
        vec![cfg.young; cfg.n_elements],
        vec![0.0; cfg.n_elements],
        permeability,
    )?;
    let mesh = MeshData::Interval(interval);
    let system = BiotSystem::build(
        mesh,
        material,
        scheme.space,
        scheme.epsilon,
        scheme.stab_weight,
        BcSpec::Column(ColumnBc { sigma0: cfg.sigma0 }),
    )?;
    let MeshData::Interval(interval) = &system.mesh else { unreachable!() };
    let sample_vertices: Vec<usize> = (0..interval.n_nodes()).collect();
    let sample_coordinates = interval.nodes().to_vec();
    Ok(Scenario {
        name: "layered".into(),
        system,
        time,
        initial_condition: InitialCondition::ZeroDiv,
        source: None,
        sample_vertices,
        sample_coordinates,
        reference_sign_changes: 0,
        analytic: None,
        overshoot_bounds: Some((0.0, cfg.sigma0.abs())),
    })
}

/// Squeezed-specimen grid configuration (quarter domain, fixed physics:
/// E = 1e4, nu = 0, K = 1e-6, F = 1, a = b = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MandelConfig {
    pub nx: usize,
    pub ny: usize,
    pub n_roots: usize,
}

impl Default for MandelConfig {
    fn default() -> Self {
        MandelConfig { nx: 32, ny: 32, n_roots: 200 }
    }
}

/// Build the quarter-domain squeezed specimen: symmetry planes at x = 0
/// and y = 0, the face x = a drained and traction-free, and a rigid
/// frictionless plate on top realized by tying all top vertical DOFs to a
/// single unknown that carries the total force -F.
pub fn build_mandel_scenario(
    cfg: &MandelConfig,
    scheme: &SchemeSpec,
    time: TimeParams,
) -> Result<Scenario> {
    let params = MandelParams::standard(cfg.n_roots)?;
    let a = params.half_width;
    let b = params.half_height;
    let mesh = MeshData::Tri(TriMesh::structured(cfg.nx, cfg.ny, a, b)?);
    let material =
        MaterialField::uniform(mesh.n_elements(), params.young, params.poisson, params.permeability)?;
    let bc = RectBc {
        left: SideBc { fix_ux: true, ..Default::default() },
        bottom: SideBc { fix_uy: true, ..Default::default() },
        right: SideBc { drained: true, ..Default::default() },
        top: SideBc {
            tie_component: Some(1),
            tie_force: -params.force,
            ..Default::default()
        },
    };
    let system = BiotSystem::build(
        mesh,
        material,
        scheme.space,
        scheme.epsilon,
        scheme.stab_weight,
        BcSpec::Rect(bc),
    )?;
    let MeshData::Tri(tri) = &system.mesh else { unreachable!() };
    let (sample_vertices, sample_coordinates) = horizontal_line(tri, b / 2.0);
    Ok(Scenario {
        name: "mandel".into(),
        system,
        time,
        initial_condition: InitialCondition::StabilizedStokes,
        source: None,
        sample_vertices,
        sample_coordinates,
        reference_sign_changes: 0,
        analytic: Some(AnalyticSolution::Mandel(params)),
        overshoot_bounds: None,
    })
}

/// Oscillating-point-source configuration on the unit square; the
/// permeability is overridable (the sign-structure experiments lower it to
/// 1e-6).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarryMercerConfig {
    pub nx: usize,
    pub ny: usize,
    pub permeability: f64,
}

impl Default for BarryMercerConfig {
    fn default() -> Self {
        BarryMercerConfig { nx: 32, ny: 32, permeability: 1e-2 }
    }
}

/// Build the point-source square: all sides drained with zero tangential
/// displacement, and the source `2 beta sin(beta t)` at the vertex nearest
/// (1/4, 1/4), with `beta = (lambda + 2 mu) K / (a b)`.  Times are usually
/// quoted normalized as `beta t`.
pub fn build_barry_mercer_scenario(
    cfg: &BarryMercerConfig,
    scheme: &SchemeSpec,
    time: TimeParams,
) -> Result<Scenario> {
    let (a, b) = (1.0, 1.0);
    let young = 1e5;
    let poisson = 0.1;
    let mesh = MeshData::Tri(TriMesh::structured(cfg.nx, cfg.ny, a, b)?);
    let material = MaterialField::uniform(mesh.n_elements(), young, poisson, cfg.permeability)?;
    let (lambda, mu) = material.lame(0);
    let beta = (lambda + 2.0 * mu) * cfg.permeability / (a * b);
    // Tangential displacement vanishes on every side: the vertical
    // component on left/right, the horizontal one on bottom/top.
    let bc = RectBc {
        left: SideBc { fix_uy: true, drained: true, ..Default::default() },
        right: SideBc { fix_uy: true, drained: true, ..Default::default() },
        bottom: SideBc { fix_ux: true, drained: true, ..Default::default() },
        top: SideBc { fix_ux: true, drained: true, ..Default::default() },
    };
    let system = BiotSystem::build(
        mesh,
        material,
        scheme.space,
        scheme.epsilon,
        scheme.stab_weight,
        BcSpec::Rect(bc),
    )?;
    let MeshData::Tri(tri) = &system.mesh else { unreachable!() };
    let source_vertex = tri.nearest_vertex([a / 4.0, b / 4.0]);
    let (sample_vertices, sample_coordinates) = horizontal_line(tri, b / 4.0);
    Ok(Scenario {
        name: "barry_mercer".into(),
        system,
        time,
        initial_condition: InitialCondition::ZeroDiv,
        source: Some(PointSource { vertex: source_vertex, beta }),
        sample_vertices,
        sample_coordinates,
        // The pressure rises to a single interior peak at the source
        // abscissa and falls back to the drained sides: one sign change.
        reference_sign_changes: 1,
        analytic: None,
        overshoot_bounds: None,
    })
}

/// Vertices of the mesh row whose y-coordinate is closest to `y`, sorted
/// by x, with their x-coordinates.
pub fn horizontal_line(mesh: &TriMesh, y: f64) -> (Vec<usize>, Vec<f64>) {
    // Collect distinct y-levels with a tolerance keyed to the mesh extent.
    let mut ys: Vec<f64> = mesh.vertices().iter().map(|v| v[1]).collect();
    ys.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let extent = (ys.last().unwrap() - ys.first().unwrap()).max(1.0);
    let tol = 1e-9 * extent;
    let mut levels: Vec<f64> = Vec::new();
    for &v in &ys {
        if levels.last().map_or(true, |&l| (v - l).abs() > tol) {
            levels.push(v);
        }
    }
    let target = levels
        .iter()
        .cloned()
        .min_by(|a, b| (a - y).abs().partial_cmp(&(b - y).abs()).unwrap())
        .unwrap();
    let mut row: Vec<(usize, f64)> = mesh
        .vertices()
        .iter()
        .enumerate()
        .filter(|(_, v)| (v[1] - target).abs() <= tol)
        .map(|(i, v)| (i, v[0]))
        .collect();
    row.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    (row.iter().map(|r| r.0).collect(), row.iter().map(|r| r.1).collect())
}
