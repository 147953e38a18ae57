//! Per-simplex geometry and element kernels.
//!
//! Everything an element contributes is expressed through two objects: the
//! scaled barycentric gradient matrix `Lambda = sqrt(|T|) (grad l_1, ...,
//! grad l_{d+1})` (a d x (d+1) matrix whose columns sum to zero) and the P1
//! stiffness `L_T = Lambda^T Lambda`.  The cubic/quadratic element bubble
//! `phi_T = alpha_d prod_i l_i` (normalized to 1 at the barycenter) yields
//! closed-form stiffness, divergence-coupling and static-condensation
//! matrices; the condensation matrix `S_{b,T} = G^T A_b^{-1} G` has the
//! closed form `sigma L_T (I + beta L_T)^{-1}`, evaluated here by a small
//! dense solve instead of forming `A_b^{-1}`.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Geometry of a d-simplex (d = 1 or 2) with the quantities every element
/// kernel is built from.
#[derive(Debug, Clone)]
pub struct SimplexGeometry {
    /// Spatial dimension d.
    pub dim: usize,
    /// Length (d=1) or area (d=2); always positive.
    pub measure: f64,
    /// `sqrt(measure) * (grad l_1, ..., grad l_{d+1})`, shape d x (d+1).
    pub lambda_gradients: DenseMatrix,
    /// P1 stiffness `L_T = Lambda^T Lambda`, shape (d+1) x (d+1).
    pub p1_stiffness: DenseMatrix,
}

/// Geometry of the interval [a, b].
pub fn interval_geometry(a: f64, b: f64) -> Result<SimplexGeometry> {
    let h = b - a;
    let scale = a.abs().max(b.abs()).max(1.0);
    if !(h > 1e-14 * scale) {
        return Err(Error::invalid(format!("degenerate interval [{a}, {b}]")));
    }
    let s = h.sqrt();
    let lambda_gradients = DenseMatrix::from_rows(&[&[-s / h, s / h]]);
    let p1_stiffness = lambda_gradients.transpose().matmul(&lambda_gradients);
    Ok(SimplexGeometry { dim: 1, measure: h, lambda_gradients, p1_stiffness })
}

/// Geometry of the triangle with the given (counterclockwise) corners.
pub fn triangle_geometry(corners: &[[f64; 2]; 3]) -> Result<SimplexGeometry> {
    let [p0, p1, p2] = *corners;
    let signed_area =
        0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
    let scale = corners
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0_f64, |m, c| m.max(c.abs()))
        .max(1.0);
    if !(signed_area > 1e-14 * scale * scale) {
        return Err(Error::invalid(format!(
            "degenerate or clockwise triangle (signed area {signed_area})"
        )));
    }
    let area = signed_area;
    // grad l_i = (rotated opposite edge) / (2 |T|); the edge opposite corner
    // i runs from corner i+1 to corner i+2.
    let mut g = DenseMatrix::zeros(2, 3);
    let s = area.sqrt();
    for i in 0..3 {
        let a = corners[(i + 1) % 3];
        let b = corners[(i + 2) % 3];
        let e = [b[0] - a[0], b[1] - a[1]];
        g[(0, i)] = s * -e[1] / (2.0 * area);
        g[(1, i)] = s * e[0] / (2.0 * area);
    }
    let p1_stiffness = g.transpose().matmul(&g);
    Ok(SimplexGeometry { dim: 2, measure: area, lambda_gradients: g, p1_stiffness })
}

impl SimplexGeometry {
    /// Bubble normalization `alpha_d = (d+1)^(d+1)` (value 1 at barycenter).
    pub fn bubble_alpha(&self) -> f64 {
        match self.dim {
            1 => 4.0,
            2 => 27.0,
            _ => unreachable!("only d = 1, 2 supported"),
        }
    }

    /// Trace of the P1 stiffness.
    pub fn stiffness_trace(&self) -> f64 {
        (0..self.dim + 1).map(|i| self.p1_stiffness[(i, i)]).sum()
    }
}

/// Dimension-dependent bubble constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleConstants {
    /// `eta_d = 2^(d-1) d! / (3d)!`: the bubble-gradient product integral
    /// scale (1/6 in 1D, 1/180 in 2D).
    pub eta: f64,
    /// `c_d = d! (3d)! / (2^(d-1) ((2d+1)!)^2)`: the condensation scale
    /// (1/6 in 1D, 1/20 in 2D).
    pub c: f64,
    /// `d! / (2d+1)!`: the bubble mean value `integral(phi)/(alpha |T|)`.
    pub mean: f64,
}

/// Constants for dimension `dim` (1 or 2).
pub fn bubble_constants(dim: usize) -> BubbleConstants {
    let fact = |m: u64| (1..=m).product::<u64>() as f64;
    let d = dim as u64;
    let two_pow = (1u64 << (d - 1)) as f64;
    BubbleConstants {
        eta: two_pow * fact(d) / fact(3 * d),
        c: fact(d) * fact(3 * d) / (two_pow * fact(2 * d + 1) * fact(2 * d + 1)),
        mean: fact(d) / fact(2 * d + 1),
    }
}

/// Exact integral of the barycentric monomial `prod_i l_i^powers[i]` over a
/// simplex of the given measure and dimension.
pub fn barycentric_monomial_integral(measure: f64, dim: usize, powers: &[u32]) -> f64 {
    assert_eq!(powers.len(), dim + 1);
    let fact = |m: u64| (1..=m).product::<u64>() as f64;
    let total: u32 = powers.iter().sum();
    let num: f64 = powers.iter().map(|&p| fact(p as u64)).product();
    measure * num * fact(dim as u64) / fact(total as u64 + dim as u64)
}

/// Bubble-bubble elasticity block
/// `A_{b,T} = alpha^2 eta_d (mu tr(L_T) I + (lambda + mu) Lambda Lambda^T)`,
/// a d x d matrix acting on the vector bubble coefficients.
pub fn bubble_stiffness(geom: &SimplexGeometry, lambda: f64, mu: f64) -> Result<DenseMatrix> {
    if !(mu > 0.0) || lambda < 0.0 {
        return Err(Error::invalid(format!(
            "bubble stiffness needs mu > 0 and lambda >= 0, got mu={mu}, lambda={lambda}"
        )));
    }
    let consts = bubble_constants(geom.dim);
    let alpha = geom.bubble_alpha();
    let lam_gram = geom.lambda_gradients.matmul(&geom.lambda_gradients.transpose());
    let tr = geom.stiffness_trace();
    let mut out = DenseMatrix::identity(geom.dim);
    out.scale(mu * tr);
    let mut out = out.add_scaled(lambda + mu, &lam_gram);
    out.scale(alpha * alpha * consts.eta);
    out.symmetrize();
    Ok(out)
}

/// Bubble-pressure divergence coupling
/// `G_{b,T} = alpha sqrt(|T|) (d! / (2d+1)!) Lambda`, shape d x (d+1); the
/// (i, k) entry is `-(div(phi e_i), l_k)` integrated over the element.
pub fn bubble_divergence(geom: &SimplexGeometry) -> DenseMatrix {
    let consts = bubble_constants(geom.dim);
    let mut out = geom.lambda_gradients.clone();
    out.scale(geom.bubble_alpha() * geom.measure.sqrt() * consts.mean);
    out
}

/// Static condensation of the bubble block onto the pressure space:
/// `S_{b,T} = G^T A_b^{-1} G = sigma L_T (I + beta L_T)^{-1}` with
/// `sigma = c_d |T| / (mu tr L_T)` and `beta = (lambda + mu)/(mu tr L_T)`.
/// Symmetric positive semidefinite with kernel spanned by the constants.
pub fn bubble_schur(geom: &SimplexGeometry, lambda: f64, mu: f64) -> Result<DenseMatrix> {
    if !(mu > 0.0) || lambda < 0.0 {
        return Err(Error::invalid(format!(
            "bubble condensation needs mu > 0 and lambda >= 0, got mu={mu}, lambda={lambda}"
        )));
    }
    let consts = bubble_constants(geom.dim);
    let tr = geom.stiffness_trace();
    let sigma = consts.c * geom.measure / (mu * tr);
    let beta = (lambda + mu) / (mu * tr);
    let n = geom.dim + 1;
    let system = DenseMatrix::identity(n).add_scaled(beta, &geom.p1_stiffness);
    let mut s = system.solve(&geom.p1_stiffness)?;
    s.scale(sigma);
    // L and (I + beta L)^{-1} commute, so S is symmetric up to the roundoff
    // of the pivoted solve; restore exact symmetry.
    s.symmetrize();
    Ok(s)
}

/// Vector P1 elasticity element matrix for `2 mu (eps(u), eps(v)) +
/// lambda (div u, div v)`.  DOF ordering is vertex-major, component-minor:
/// index = vertex * d + component.  Shape d(d+1) x d(d+1).
pub fn p1_vector_elasticity(geom: &SimplexGeometry, lambda: f64, mu: f64) -> DenseMatrix {
    let d = geom.dim;
    let nv = d + 1;
    let lam = &geom.lambda_gradients;
    let l = &geom.p1_stiffness;
    let mut out = DenseMatrix::zeros(d * nv, d * nv);
    for a in 0..nv {
        for i in 0..d {
            let row = a * d + i;
            for b in 0..nv {
                for j in 0..d {
                    let col = b * d + j;
                    if col < row {
                        continue;
                    }
                    let kron = if i == j { l[(a, b)] } else { 0.0 };
                    let v = mu * (kron + lam[(j, a)] * lam[(i, b)])
                        + lambda * lam[(i, a)] * lam[(j, b)];
                    out[(row, col)] = v;
                    out[(col, row)] = v;
                }
            }
        }
    }
    out
}

/// P1 divergence coupling: the (k, a*d+i) entry is `-(div(l_a e_i), l_k)`
/// = `-Lambda[i, a] sqrt(|T|) / (d+1)`.  Shape (d+1) x d(d+1).
pub fn p1_divergence(geom: &SimplexGeometry) -> DenseMatrix {
    let d = geom.dim;
    let nv = d + 1;
    let factor = geom.measure.sqrt() / nv as f64;
    let mut out = DenseMatrix::zeros(nv, d * nv);
    for k in 0..nv {
        for a in 0..nv {
            for i in 0..d {
                out[(k, a * d + i)] = -geom.lambda_gradients[(i, a)] * factor;
            }
        }
    }
    out
}

/// Exact P1 mass element matrix: `(l_j, l_k) = |T| (1 + delta_jk) /
/// ((d+1)(d+2))`.
pub fn p1_mass(geom: &SimplexGeometry) -> DenseMatrix {
    let nv = geom.dim + 1;
    let base = geom.measure / ((nv * (nv + 1)) as f64);
    let mut out = DenseMatrix::zeros(nv, nv);
    for j in 0..nv {
        for k in 0..nv {
            out[(j, k)] = base * if j == k { 2.0 } else { 1.0 };
        }
    }
    out
}
