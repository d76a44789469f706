//! 2D affine matrices in PDF row-vector convention: `[a b c d e f]` maps
//! `(x, y)` to `(a*x + c*y + e, b*x + d*y + f)`.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix(pub [f64; 6]);

impl Default for Matrix {
    fn default() -> Self {
        Matrix::IDENTITY
    }
}

impl Matrix {
    pub const IDENTITY: Matrix = Matrix([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);

    pub fn translate(tx: f64, ty: f64) -> Matrix {
        Matrix([1.0, 0.0, 0.0, 1.0, tx, ty])
    }

    /// `self` applied first, then `other`.
    pub fn then(&self, other: &Matrix) -> Matrix {
        let [a, b, c, d, e, f] = self.0;
        let [a2, b2, c2, d2, e2, f2] = other.0;
        Matrix([
            a * a2 + b * c2,
            a * b2 + b * d2,
            c * a2 + d * c2,
            c * b2 + d * d2,
            e * a2 + f * c2 + e2,
            e * b2 + f * d2 + f2,
        ])
    }

    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        let [a, b, c, d, e, f] = self.0;
        (a * x + c * y + e, b * x + d * y + f)
    }

    /// True when the matrix only scales (positively) and translates.
    pub fn is_upright(&self) -> bool {
        let [a, b, c, d, _, _] = self.0;
        b.abs() < 1e-9 && c.abs() < 1e-9 && a > 0.0 && d > 0.0
    }

    /// No rotation or skew, scale of either sign.
    pub fn is_axis_aligned(&self) -> bool {
        self.0[1].abs() < 1e-9 && self.0[2].abs() < 1e-9
    }

    /// Geometric mean scale factor, used for line widths.
    pub fn mean_scale(&self) -> f64 {
        let [a, b, c, d, _, _] = self.0;
        (a * d - b * c).abs().sqrt()
    }
}
