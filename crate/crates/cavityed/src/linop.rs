//! Kronecker-structured Hermitian operators and composite-index state
//! vectors.
//!
//! An operator is an ordered list of terms `coeff * (P (x) M)` where `P` is
//! a small dense Hermitian matrix on the photon index and `M` is a banded
//! Hermitian factor on the flattened matter index (nucleus x electron, with
//! the electron index fastest). The composite state index is
//! `(i_ph * N_X + i_X) * N_x + i_x`. Application never materializes the
//! full matrix; each term touches the vector through strided band
//! contractions. Parallel passes write disjoint output slices and all
//! reductions run in a fixed chunk order, so results are bit-stable for a
//! given configuration.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Deterministic reduction chunk (entries); partial sums are combined in
/// fixed chunk order regardless of thread count.
const CHUNK: usize = 1 << 14;

/// Amplitude field of the state vectors an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarField {
    Real,
    Complex,
}

/// Subsystem dimensions in fixed order [photon, nucleus (optional),
/// electron (optional)]. The pinned-dipole model has no matter grid at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub n_fock: usize,
    pub n_nucleus: Option<usize>,
    pub n_electron: Option<usize>,
}

impl Dims {
    pub fn matter_dim(&self) -> usize {
        self.n_nucleus.unwrap_or(1) * self.n_electron.unwrap_or(1)
    }

    pub fn total(&self) -> usize {
        self.n_fock * self.matter_dim()
    }

    /// Composite index of (photon, nucleus, electron) indices.
    pub fn index(&self, i_ph: usize, i_nuc: usize, i_el: usize) -> usize {
        let n_el = self.n_electron.unwrap_or(1);
        (i_ph * self.n_nucleus.unwrap_or(1) + i_nuc) * n_el + i_el
    }
}

/// Hermitian factor on the flattened matter index, stored as a real
/// diagonal plus real symmetric bands plus purely imaginary antisymmetric
/// bands. Hermiticity is guaranteed by construction: only one triangle is
/// stored and mirrored on application.
#[derive(Debug, Clone, Default)]
pub struct Factor {
    dim: usize,
    diag: Option<Vec<f64>>,
    /// (offset k >= 1, values v): M[i, i+k] = M[i+k, i] = v[i].
    sym_bands: Vec<(usize, Vec<f64>)>,
    /// (offset k >= 1, values v): M[i, i+k] = -i v[i], M[i+k, i] = +i v[i].
    anti_bands: Vec<(usize, Vec<f64>)>,
}

impl Factor {
    pub fn diagonal(diag: Vec<f64>) -> Self {
        Factor {
            dim: diag.len(),
            diag: Some(diag),
            sym_bands: Vec::new(),
            anti_bands: Vec::new(),
        }
    }

    pub fn new(
        dim: usize,
        diag: Option<Vec<f64>>,
        sym_bands: Vec<(usize, Vec<f64>)>,
        anti_bands: Vec<(usize, Vec<f64>)>,
    ) -> Result<Self> {
        if let Some(d) = &diag {
            if d.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: d.len(),
                });
            }
        }
        for (k, v) in sym_bands.iter().chain(anti_bands.iter()) {
            if *k == 0 || *k >= dim {
                return Err(Error::InvalidParameter(format!(
                    "band offset {k} out of range for dimension {dim}"
                )));
            }
            if v.len() != dim - k {
                return Err(Error::DimensionMismatch {
                    expected: dim - k,
                    actual: v.len(),
                });
            }
        }
        Ok(Factor {
            dim,
            diag,
            sym_bands,
            anti_bands,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_real(&self) -> bool {
        self.anti_bands.is_empty()
    }

    pub fn diagonal_part(&self) -> Option<&[f64]> {
        self.diag.as_deref()
    }

    fn is_diagonal_only(&self) -> bool {
        self.sym_bands.is_empty() && self.anti_bands.is_empty()
    }

    /// y += c * M x on one matter block.
    fn apply_block<S: Scalar>(&self, c: f64, x: &[S], y: &mut [S]) {
        if let Some(d) = &self.diag {
            for j in 0..self.dim {
                y[j] += x[j].scale_re(c * d[j]);
            }
        }
        for (k, v) in &self.sym_bands {
            for j in 0..self.dim - k {
                y[j] += x[j + k].scale_re(c * v[j]);
                y[j + k] += x[j].scale_re(c * v[j]);
            }
        }
        for (k, v) in &self.anti_bands {
            for j in 0..self.dim - k {
                y[j] += x[j + k].mul_i_re(-c * v[j]);
                y[j + k] += x[j].mul_i_re(c * v[j]);
            }
        }
    }

    /// Same contraction split into passes with disjoint output ranges so a
    /// single large block can still run in parallel.
    fn apply_block_par<S: Scalar>(&self, c: f64, x: &[S], y: &mut [S]) {
        if let Some(d) = &self.diag {
            y.par_chunks_mut(CHUNK)
                .zip(x.par_chunks(CHUNK).zip(d.par_chunks(CHUNK)))
                .for_each(|(yc, (xc, dc))| {
                    for j in 0..yc.len() {
                        yc[j] += xc[j].scale_re(c * dc[j]);
                    }
                });
        }
        for (k, v) in &self.sym_bands {
            // Pass 1: y[j] += c v[j] x[j+k] for j < dim-k.
            y[..self.dim - k]
                .par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(ci, yc)| {
                    let base = ci * CHUNK;
                    for (jj, yj) in yc.iter_mut().enumerate() {
                        let j = base + jj;
                        *yj += x[j + k].scale_re(c * v[j]);
                    }
                });
            // Pass 2: y[j+k] += c v[j] x[j].
            y[*k..]
                .par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(ci, yc)| {
                    let base = ci * CHUNK;
                    for (jj, yj) in yc.iter_mut().enumerate() {
                        let j = base + jj;
                        *yj += x[j].scale_re(c * v[j]);
                    }
                });
        }
        for (k, v) in &self.anti_bands {
            y[..self.dim - k]
                .par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(ci, yc)| {
                    let base = ci * CHUNK;
                    for (jj, yj) in yc.iter_mut().enumerate() {
                        let j = base + jj;
                        *yj += x[j + k].mul_i_re(-c * v[j]);
                    }
                });
            y[*k..]
                .par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(ci, yc)| {
                    let base = ci * CHUNK;
                    for (jj, yj) in yc.iter_mut().enumerate() {
                        let j = base + jj;
                        *yj += x[j].mul_i_re(c * v[j]);
                    }
                });
        }
    }

    /// Dense image of the factor; the imaginary bands force a complex
    /// scalar.
    pub fn to_dense<S: Scalar>(&self) -> Result<DMatrix<S>> {
        if !self.is_real() && !S::IS_COMPLEX {
            return Err(Error::Config(
                "factor with imaginary bands needs complex scalars".into(),
            ));
        }
        let mut m = DMatrix::<S>::zeros(self.dim, self.dim);
        if let Some(d) = &self.diag {
            for j in 0..self.dim {
                m[(j, j)] = S::from_re(d[j]);
            }
        }
        for (k, v) in &self.sym_bands {
            for j in 0..self.dim - k {
                m[(j, j + k)] += S::from_re(v[j]);
                m[(j + k, j)] += S::from_re(v[j]);
            }
        }
        for (k, v) in &self.anti_bands {
            for j in 0..self.dim - k {
                m[(j, j + k)] += S::ONE.mul_i_re(-v[j]);
                m[(j + k, j)] += S::ONE.mul_i_re(v[j]);
            }
        }
        Ok(m)
    }
}

/// One Kronecker term `coeff * (photon (x) matter)`. `None` stands for the
/// identity on that subsystem.
#[derive(Debug, Clone)]
pub struct KronTerm {
    pub coeff: f64,
    pub photon: Option<DMatrix<f64>>,
    pub matter: Option<Factor>,
}

/// Hermitian operator as an ordered sum of Kronecker terms, applied
/// matrix-free.
#[derive(Debug, Clone)]
pub struct TensorOperator {
    field: ScalarField,
    dims: Dims,
    terms: Vec<KronTerm>,
}

impl TensorOperator {
    pub fn new(dims: Dims, field: ScalarField, terms: Vec<KronTerm>) -> Result<Self> {
        let n_ph = dims.n_fock;
        let n_m = dims.matter_dim();
        for term in &terms {
            if let Some(p) = &term.photon {
                if p.nrows() != n_ph || p.ncols() != n_ph {
                    return Err(Error::DimensionMismatch {
                        expected: n_ph,
                        actual: p.nrows(),
                    });
                }
            }
            if let Some(m) = &term.matter {
                if m.dim() != n_m {
                    return Err(Error::DimensionMismatch {
                        expected: n_m,
                        actual: m.dim(),
                    });
                }
                if field == ScalarField::Real && !m.is_real() {
                    return Err(Error::Config(
                        "real-field operator contains imaginary matter bands".into(),
                    ));
                }
            }
        }
        Ok(TensorOperator { field, dims, terms })
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn terms(&self) -> &[KronTerm] {
        &self.terms
    }

    pub fn total_dim(&self) -> usize {
        self.dims.total()
    }

    /// out = H psi.
    pub fn apply<S: Scalar>(&self, psi: &[S], out: &mut [S]) -> Result<()> {
        let n = self.total_dim();
        if psi.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: psi.len(),
            });
        }
        if out.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: out.len(),
            });
        }
        out.fill(S::ZERO);
        let n_ph = self.dims.n_fock;
        let n_m = self.dims.matter_dim();
        let mut scratch: Option<Vec<S>> = None;
        for term in &self.terms {
            match (&term.photon, &term.matter) {
                (None, None) => {
                    let c = term.coeff;
                    out.par_chunks_mut(CHUNK)
                        .zip(psi.par_chunks(CHUNK))
                        .for_each(|(yc, xc)| {
                            for j in 0..yc.len() {
                                yc[j] += xc[j].scale_re(c);
                            }
                        });
                }
                (None, Some(m)) => {
                    if n_ph > 1 {
                        out.par_chunks_mut(n_m)
                            .zip(psi.par_chunks(n_m))
                            .for_each(|(yb, xb)| m.apply_block(term.coeff, xb, yb));
                    } else {
                        m.apply_block_par(term.coeff, psi, out);
                    }
                }
                (Some(p), None) => {
                    photon_pass(p, term.coeff, None, n_m, psi, out);
                }
                (Some(p), Some(m)) if m.is_diagonal_only() => {
                    photon_pass(p, term.coeff, m.diagonal_part(), n_m, psi, out);
                }
                (Some(p), Some(m)) => {
                    let buf = scratch.get_or_insert_with(|| vec![S::ZERO; n]);
                    buf.fill(S::ZERO);
                    buf.par_chunks_mut(n_m)
                        .zip(psi.par_chunks(n_m))
                        .for_each(|(yb, xb)| m.apply_block(1.0, xb, yb));
                    photon_pass(p, term.coeff, None, n_m, buf, out);
                }
            }
        }
        Ok(())
    }

    pub fn apply_alloc<S: Scalar>(&self, psi: &[S]) -> Result<Vec<S>> {
        let mut out = vec![S::ZERO; self.total_dim()];
        self.apply(psi, &mut out)?;
        Ok(out)
    }

    /// Real expectation value `<psi| H |psi>` of the Hermitian operator.
    pub fn expectation<S: Scalar>(&self, psi: &[S]) -> Result<f64> {
        let h_psi = self.apply_alloc(psi)?;
        Ok(dot(psi, &h_psi).re())
    }

    /// Explicit dense materialization built directly from the Kronecker
    /// factors (independent of the strided application kernel). Guarded to
    /// small dimensions.
    pub fn to_dense<S: Scalar>(&self) -> Result<DMatrix<S>> {
        let n = self.total_dim();
        if n > 4096 {
            return Err(Error::InvalidParameter(format!(
                "dense materialization limited to dimension 4096, got {n}"
            )));
        }
        let n_ph = self.dims.n_fock;
        let n_m = self.dims.matter_dim();
        let mut h = DMatrix::<S>::zeros(n, n);
        let eye_m = DMatrix::<S>::identity(n_m, n_m);
        for term in &self.terms {
            let m_dense: DMatrix<S> = match &term.matter {
                Some(m) => m.to_dense()?,
                None => eye_m.clone(),
            };
            for ip in 0..n_ph {
                for jp in 0..n_ph {
                    let pv = match &term.photon {
                        Some(p) => p[(ip, jp)],
                        None => {
                            if ip == jp {
                                1.0
                            } else {
                                0.0
                            }
                        }
                    };
                    if pv == 0.0 {
                        continue;
                    }
                    let c = term.coeff * pv;
                    for a in 0..n_m {
                        for b in 0..n_m {
                            let v = m_dense[(a, b)];
                            if v != S::ZERO {
                                h[(ip * n_m + a, jp * n_m + b)] += v.scale_re(c);
                            }
                        }
                    }
                }
            }
        }
        Ok(h)
    }
}

/// out += c * (P (x) D) psi where P is the small photon matrix and D an
/// optional matter diagonal (identity when absent). Writes are disjoint per
/// output photon row; the inner loops run in a fixed order.
fn photon_pass<S: Scalar>(
    p: &DMatrix<f64>,
    coeff: f64,
    matter_diag: Option<&[f64]>,
    n_m: usize,
    psi: &[S],
    out: &mut [S],
) {
    out.par_chunks_mut(n_m).enumerate().for_each(|(ip, yb)| {
        for jp in 0..p.ncols() {
            let pv = p[(ip, jp)];
            if pv == 0.0 {
                continue;
            }
            let c = coeff * pv;
            let xb = &psi[jp * n_m..(jp + 1) * n_m];
            match matter_diag {
                None => {
                    for j in 0..n_m {
                        yb[j] += xb[j].scale_re(c);
                    }
                }
                Some(d) => {
                    for j in 0..n_m {
                        yb[j] += xb[j].scale_re(c * d[j]);
                    }
                }
            }
        }
    });
}

/// `<a, b>` with conjugation on the left argument; partial sums are taken
/// per fixed-size chunk and combined sequentially for bit-stable results.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    let partials: Vec<S> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(ac, bc)| {
            let mut s = S::ZERO;
            for j in 0..ac.len() {
                s += ac[j].conj() * bc[j];
            }
            s
        })
        .collect();
    let mut total = S::ZERO;
    for p in partials {
        total += p;
    }
    total
}

pub fn norm<S: Scalar>(a: &[S]) -> f64 {
    let partials: Vec<f64> = a
        .par_chunks(CHUNK)
        .map(|ac| {
            let mut s = 0.0;
            for v in ac {
                s += v.abs_sq();
            }
            s
        })
        .collect();
    partials.iter().sum::<f64>().sqrt()
}

/// y += alpha * x.
pub fn axpy<S: Scalar>(alpha: S, x: &[S], y: &mut [S]) {
    y.par_chunks_mut(CHUNK)
        .zip(x.par_chunks(CHUNK))
        .for_each(|(yc, xc)| {
            for j in 0..yc.len() {
                yc[j] += alpha * xc[j];
            }
        });
}

pub fn scale_in_place<S: Scalar>(x: &mut [S], alpha: f64) {
    x.par_chunks_mut(CHUNK).for_each(|xc| {
        for v in xc {
            *v = v.scale_re(alpha);
        }
    });
}

/// State-vector amplitudes in the field demanded by the operator.
#[derive(Debug, Clone)]
pub enum Amplitudes {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Amplitudes {
    pub fn len(&self) -> usize {
        match self {
            Amplitudes::Real(v) => v.len(),
            Amplitudes::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn norm(&self) -> f64 {
        match self {
            Amplitudes::Real(v) => norm(v),
            Amplitudes::Complex(v) => norm(v),
        }
    }

    /// |amplitude|^2 at a composite index.
    pub fn prob(&self, idx: usize) -> f64 {
        match self {
            Amplitudes::Real(v) => v[idx] * v[idx],
            Amplitudes::Complex(v) => v[idx].norm_sqr(),
        }
    }
}

/// Dense state vector over the composite index.
#[derive(Debug, Clone)]
pub struct WaveFunction {
    pub dims: Dims,
    pub amplitudes: Amplitudes,
}

impl WaveFunction {
    pub fn new(dims: Dims, amplitudes: Amplitudes) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                actual: amplitudes.len(),
            });
        }
        Ok(WaveFunction { dims, amplitudes })
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<psi| Op |psi>` for a Hermitian operator on matching dimensions.
    pub fn expectation(&self, op: &TensorOperator) -> Result<f64> {
        if op.dims() != self.dims {
            return Err(Error::Config(
                "operator and state dimensions do not match".into(),
            ));
        }
        match &self.amplitudes {
            Amplitudes::Real(v) => op.expectation(v),
            Amplitudes::Complex(v) => op.expectation(v),
        }
    }
}

/// Result of an eigenpair computation.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Ascending eigenvalues, hartree.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<WaveFunction>,
    /// Explicit ||H psi - E psi|| per pair.
    pub residual_norms: Vec<f64>,
    /// Number of operator applications performed.
    pub iterations: usize,
    /// Per-pair convergence to the requested tolerance. A partial result is
    /// flagged here, never silent.
    pub converged: Vec<bool>,
    /// Diagnostics attached after solving (Fock truncation adequacy).
    pub truncation_warnings: Vec<String>,
    /// Lowest Ritz value at each convergence check, for monotonicity
    /// diagnostics.
    pub lowest_ritz_trace: Vec<f64>,
}

impl SpectrumResult {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }
}
