//! Cyclic tridiagonal matrices.

use alloc::vec;
use alloc::vec::Vec;

/// Row `i` holds `lower[i]` at column `i-1`, `diag[i]` at `i` and
/// `upper[i]` at `i+1`, indices taken mod `n`.
#[derive(Debug, Clone)]
pub(crate) struct CyclicTridiag {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl CyclicTridiag {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn mul_vec(&self, x: &[f64], out: &mut [f64]) {
        let n = self.len();
        for i in 0..n {
            let left = x[(i + n - 1) % n];
            let right = x[(i + 1) % n];
            out[i] = self.lower[i] * left + self.diag[i] * x[i] + self.upper[i] * right;
        }
    }

    /// Infinity norm.
    pub fn norm_inf(&self) -> f64 {
        (0..self.len())
            .map(|i| self.lower[i].abs() + self.diag[i].abs() + self.upper[i].abs())
            .fold(0.0, f64::max)
    }

    pub fn transpose(&self) -> Self {
        let n = self.len();
        Self {
            lower: (0..n).map(|i| self.upper[(i + n - 1) % n]).collect(),
            diag: self.diag.clone(),
            upper: (0..n).map(|i| self.lower[(i + 1) % n]).collect(),
        }
    }

    /// `shift * I - self`.
    pub fn shifted_negation(&self, shift: f64) -> Self {
        Self {
            lower: self.lower.iter().map(|v| -v).collect(),
            diag: self.diag.iter().map(|v| shift - v).collect(),
            upper: self.upper.iter().map(|v| -v).collect(),
        }
    }

    /// Factorises the matrix by bordering the last row and column around a
    /// plain tridiagonal block. For a nonsingular M-matrix every step of a
    /// solve with a nonnegative right-hand side only adds nonnegative terms,
    /// so positivity of the solution survives rounding.
    ///
    /// Returns `None` if a pivot is not positive. Requires `n >= 3`.
    pub fn factor(&self) -> Option<CyclicFactor> {
        let n = self.len();
        debug_assert!(n >= 3);
        let m = n - 1;
        let mut pivots = vec![0.0; m];
        pivots[0] = self.diag[0];
        for i in 1..m {
            pivots[i] = self.diag[i] - self.lower[i] * self.upper[i - 1] / pivots[i - 1];
        }
        if pivots.iter().any(|p| !(*p > 0.0)) {
            return None;
        }
        let mut f = CyclicFactor {
            lower: self.lower[..m].to_vec(),
            upper: self.upper[..m].to_vec(),
            pivots,
            border: vec![0.0; m],
            corner_row: (self.upper[m], self.lower[m]),
            schur: 0.0,
        };
        // T y = c with c the last column restricted to the first m rows
        let mut c = vec![0.0; m];
        c[0] = self.lower[0];
        c[m - 1] += self.upper[m - 1];
        f.solve_block(&mut c);
        let r_dot_y = f.corner_row.0 * c[0] + f.corner_row.1 * c[m - 1];
        f.schur = self.diag[m] - r_dot_y;
        f.border = c;
        if !(f.schur > 0.0) {
            return None;
        }
        Some(f)
    }
}

pub(crate) struct CyclicFactor {
    lower: Vec<f64>,
    upper: Vec<f64>,
    pivots: Vec<f64>,
    border: Vec<f64>,
    // entries of the last row at columns 0 and n-2
    corner_row: (f64, f64),
    schur: f64,
}

impl CyclicFactor {
    fn solve_block(&self, b: &mut [f64]) {
        let m = self.pivots.len();
        for i in 1..m {
            b[i] -= self.lower[i] * b[i - 1] / self.pivots[i - 1];
        }
        b[m - 1] /= self.pivots[m - 1];
        for i in (0..m - 1).rev() {
            b[i] = (b[i] - self.upper[i] * b[i + 1]) / self.pivots[i];
        }
    }

    /// Solves in place.
    pub fn solve(&self, b: &mut [f64]) {
        let m = self.pivots.len();
        let last = b[m];
        self.solve_block(&mut b[..m]);
        let x_last = (last - self.corner_row.0 * b[0] - self.corner_row.1 * b[m - 1]) / self.schur;
        for (bi, yi) in b[..m].iter_mut().zip(&self.border) {
            *bi -= x_last * yi;
        }
        b[m] = x_last;
    }
}
