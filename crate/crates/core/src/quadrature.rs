//! Fixed quadrature rules on the reference interval, triangle and edge.
//!
//! Weights are normalized to sum to one, so an integral over a cell is
//! `measure * sum_i w_i f(x_i)`.  The triangle rule is the classic 7-point
//! degree-5 rule, enough for products of bubble-function gradients
//! (degree 4) and for the error norms.

/// Quadrature node on the reference interval [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct QuadPoint1d {
    /// Position in [0, 1].
    pub x: f64,
    /// Weight; weights of a rule sum to 1.
    pub w: f64,
}

/// Two-point Gauss rule on [0, 1] (exact through degree 3).
pub fn gauss_1d_2() -> [QuadPoint1d; 2] {
    let d = 0.5 / 3.0_f64.sqrt();
    [QuadPoint1d { x: 0.5 - d, w: 0.5 }, QuadPoint1d { x: 0.5 + d, w: 0.5 }]
}

/// Three-point Gauss rule on [0, 1] (exact through degree 5).
pub fn gauss_1d_3() -> [QuadPoint1d; 3] {
    let d = 0.5 * (3.0_f64 / 5.0).sqrt();
    [
        QuadPoint1d { x: 0.5 - d, w: 5.0 / 18.0 },
        QuadPoint1d { x: 0.5, w: 8.0 / 18.0 },
        QuadPoint1d { x: 0.5 + d, w: 5.0 / 18.0 },
    ]
}

/// Quadrature node on the reference triangle in barycentric coordinates.
#[derive(Debug, Clone, Copy)]
pub struct TriQuadPoint {
    /// Barycentric coordinates (sum to 1).
    pub bary: [f64; 3],
    /// Weight; weights of a rule sum to 1.
    pub w: f64,
}

/// Seven-point degree-5 rule on the triangle.
pub fn triangle_degree5() -> [TriQuadPoint; 7] {
    let s15 = 15.0_f64.sqrt();
    let a = (6.0 - s15) / 21.0;
    let b = (6.0 + s15) / 21.0;
    let wa = (155.0 - s15) / 1200.0;
    let wb = (155.0 + s15) / 1200.0;
    [
        TriQuadPoint { bary: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], w: 9.0 / 40.0 },
        TriQuadPoint { bary: [a, a, 1.0 - 2.0 * a], w: wa },
        TriQuadPoint { bary: [a, 1.0 - 2.0 * a, a], w: wa },
        TriQuadPoint { bary: [1.0 - 2.0 * a, a, a], w: wa },
        TriQuadPoint { bary: [b, b, 1.0 - 2.0 * b], w: wb },
        TriQuadPoint { bary: [b, 1.0 - 2.0 * b, b], w: wb },
        TriQuadPoint { bary: [1.0 - 2.0 * b, b, b], w: wb },
    ]
}

/// Map a barycentric point to physical coordinates on a triangle.
pub fn bary_to_xy(bary: [f64; 3], corners: &[[f64; 2]; 3]) -> [f64; 2] {
    [
        bary[0] * corners[0][0] + bary[1] * corners[1][0] + bary[2] * corners[2][0],
        bary[0] * corners[0][1] + bary[1] * corners[1][1] + bary[2] * corners[2][1],
    ]
}
