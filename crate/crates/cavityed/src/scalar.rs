//! Scalar abstraction over the two state-vector fields.
//!
//! Length-gauge Hamiltonians are real symmetric; Coulomb-gauge Hamiltonians
//! pick up purely imaginary momentum couplings and need complex amplitudes.
//! The solver and operator kernels are generic over this trait with exactly
//! two instantiations, `f64` and `Complex64`.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::linop::Amplitudes;

pub trait Scalar: ComplexField<RealField = f64> + Copy + Send + Sync + 'static {
    const IS_COMPLEX: bool;
    const ZERO: Self;
    const ONE: Self;

    fn from_re(x: f64) -> Self {
        <Self as ComplexField>::from_real(x)
    }

    /// Real part.
    fn re(self) -> f64;

    /// Complex conjugate.
    fn conj(self) -> Self;

    /// |self|^2 as a real number.
    fn abs_sq(self) -> f64;

    /// self * x for real x.
    fn scale_re(self, x: f64) -> Self;

    /// self * (i*x) for real x. Only reachable for complex amplitudes.
    fn mul_i_re(self, x: f64) -> Self;

    /// Draw a uniform component in [-0.5, 0.5) (both parts for complex).
    fn sample_start(rng: &mut ChaCha8Rng) -> Self;

    /// Eigendecomposition of a small Hermitian matrix, eigenvalues ascending.
    fn hermitian_eigen(mat: &DMatrix<Self>) -> (DVector<f64>, DMatrix<Self>);

    /// Wrap a raw vector into the field-tagged amplitude storage.
    fn wrap_amplitudes(v: Vec<Self>) -> Amplitudes;
}

fn sort_eigen<S: Scalar>(values: DVector<f64>, vectors: DMatrix<S>) -> (DVector<f64>, DMatrix<S>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let sorted_values = DVector::from_iterator(values.len(), order.iter().map(|&i| values[i]));
    let mut sorted_vectors = DMatrix::zeros(vectors.nrows(), vectors.ncols());
    for (dst, &src) in order.iter().enumerate() {
        sorted_vectors.set_column(dst, &vectors.column(src));
    }
    (sorted_values, sorted_vectors)
}

impl Scalar for f64 {
    const IS_COMPLEX: bool = false;
    const ZERO: f64 = 0.0;
    const ONE: f64 = 1.0;

    fn re(self) -> f64 {
        self
    }

    fn conj(self) -> f64 {
        self
    }

    fn abs_sq(self) -> f64 {
        self * self
    }

    fn scale_re(self, x: f64) -> f64 {
        self * x
    }

    fn mul_i_re(self, _x: f64) -> f64 {
        panic!("imaginary operator band applied to a real state vector");
    }

    fn sample_start(rng: &mut ChaCha8Rng) -> f64 {
        rng.random::<f64>() - 0.5
    }

    fn hermitian_eigen(mat: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
        let eig = mat.clone().symmetric_eigen();
        sort_eigen(eig.eigenvalues, eig.eigenvectors)
    }

    fn wrap_amplitudes(v: Vec<f64>) -> Amplitudes {
        Amplitudes::Real(v)
    }
}

impl Scalar for Complex64 {
    const IS_COMPLEX: bool = true;
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);
    const ONE: Complex64 = Complex64::new(1.0, 0.0);

    fn re(self) -> f64 {
        self.re
    }

    fn conj(self) -> Complex64 {
        Complex64::new(self.re, -self.im)
    }

    fn abs_sq(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    fn scale_re(self, x: f64) -> Complex64 {
        Complex64::new(self.re * x, self.im * x)
    }

    fn mul_i_re(self, x: f64) -> Complex64 {
        // (a + ib) * ix = -bx + iax
        Complex64::new(-self.im * x, self.re * x)
    }

    fn sample_start(rng: &mut ChaCha8Rng) -> Complex64 {
        let re = rng.random::<f64>() - 0.5;
        let im = rng.random::<f64>() - 0.5;
        Complex64::new(re, im)
    }

    fn hermitian_eigen(mat: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
        let eig = mat.clone().symmetric_eigen();
        sort_eigen(eig.eigenvalues, eig.eigenvectors)
    }

    fn wrap_amplitudes(v: Vec<Complex64>) -> Amplitudes {
        Amplitudes::Complex(v)
    }
}
