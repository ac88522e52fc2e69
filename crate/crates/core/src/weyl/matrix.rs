use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::{json, Value};

/// An operator truncated to the span of `e_0..e_cutoff`, `e_n = zⁿ/√n!`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    inner: DMatrix<Complex64>,
}

impl FockMatrix {
    pub fn zeros(cutoff: usize) -> Self {
        FockMatrix { inner: DMatrix::zeros(cutoff + 1, cutoff + 1) }
    }

    pub fn identity(cutoff: usize) -> Self {
        FockMatrix { inner: DMatrix::identity(cutoff + 1, cutoff + 1) }
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        FockMatrix { inner: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries)) }
    }

    pub fn from_matrix(inner: DMatrix<Complex64>) -> Self {
        assert!(inner.is_square(), "Fock matrices are square");
        FockMatrix { inner }
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn cutoff(&self) -> usize {
        self.inner.nrows() - 1
    }

    pub fn dimension(&self) -> usize {
        self.inner.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    pub(crate) fn add_entry(&mut self, row: usize, col: usize, value: Complex64) {
        self.inner[(row, col)] += value;
    }

    pub fn mul(&self, other: &FockMatrix) -> FockMatrix {
        FockMatrix { inner: &self.inner * &other.inner }
    }

    pub fn add(&self, other: &FockMatrix) -> FockMatrix {
        FockMatrix { inner: &self.inner + &other.inner }
    }

    pub fn scale(&self, c: Complex64) -> FockMatrix {
        FockMatrix { inner: &self.inner * c }
    }

    pub fn adjoint(&self) -> FockMatrix {
        FockMatrix { inner: self.inner.adjoint() }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let v = nalgebra::DVector::from_column_slice(v);
        (&self.inner * v).iter().copied().collect()
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.inner.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &FockMatrix, tol: f64) -> bool {
        self.inner.shape() == other.inner.shape() && self.inner.iter().zip(other.inner.iter()).all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    /// Row-major `[[[re, im], ...], ...]`.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.dimension())
            .map(|r| Value::Array((0..self.dimension()).map(|c| json!([self.entry(r, c).re, self.entry(r, c).im])).collect()))
            .collect();
        Value::Array(rows)
    }
}

/// `exp(t·M)` by scaling and squaring with a truncated Taylor series.
pub fn matrix_exp(m: &FockMatrix, t: f64) -> FockMatrix {
    let scaled = m.scale(Complex64::new(t, 0.0));
    let norm = scaled.norm_inf();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let x = scaled.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));

    // ‖x‖ ≤ 1/2, so the Taylor tail after k terms is below 2·(1/2)^k/k!
    let mut sum = FockMatrix::identity(m.cutoff());
    let mut term = FockMatrix::identity(m.cutoff());
    for k in 1..=30 {
        term = term.mul(&x).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.norm_inf() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_zero_is_identity() {
        let z = FockMatrix::zeros(5);
        assert!(matrix_exp(&z, 3.0).approx_eq(&FockMatrix::identity(5), 0.0));
    }

    #[test]
    fn diagonal_exponential() {
        let c = 8;
        let t = 0.7;
        let diag: Vec<_> = (0..=c).map(|k| Complex64::new(0.0, -(k as f64))).collect();
        let e = matrix_exp(&FockMatrix::diagonal(&diag), t);
        for k in 0..=c {
            let expected = Complex64::from_polar(1.0, -(k as f64) * t);
            assert!((e.entry(k, k) - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn agrees_with_nalgebra_exponential() {
        let c = 6;
        let mut m = FockMatrix::zeros(c);
        for r in 0..=c {
            for col in 0..=c {
                m.add_entry(r, col, Complex64::new(((r * 3 + col) % 5) as f64 * 0.3 - 0.6, (r as f64 - col as f64) * 0.1));
            }
        }
        let ours = matrix_exp(&m, 1.3);
        let reference = FockMatrix::from_matrix((m.as_matrix() * Complex64::new(1.3, 0.0)).exp());
        assert!(ours.approx_eq(&reference, 1e-10));
    }
}
