//! Dense Hermitian matrices, a cyclic Jacobi eigensolver, and sorted spectra.
//!
//! Matrix-valued operator families are discretized into [`DenseHermitian`]
//! samples; everything downstream only consumes the ascending eigenvalue
//! list carried by [`Spectrum`].

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Global tolerance deciding whether an eigenvalue counts as zero.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-9;

/// Relative tolerance of the Hermitian symmetry check.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Jacobi sweeps stop once the off-diagonal Frobenius norm drops below this
/// multiple of the matrix norm.
pub const JACOBI_OFF_TOL: f64 = 1e-13;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseHermitian {
    /// Builds a matrix from row-major entries, rejecting non-Hermitian input.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("matrix entries must be finite".into()));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tol = HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE);
        for i in 0..dim {
            for j in i..dim {
                let defect = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                if defect > tol {
                    return Err(Error::NonHermitianInput { row: i, col: j, defect });
                }
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let dim = values.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &v) in values.iter().enumerate() {
            entries[i * dim + i] = Complex64::new(v, 0.0);
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(1 - s) * self + s * other`, used for piecewise-linear matrix paths.
    pub fn lerp(&self, other: &Self, s: f64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::InvalidArgument("cannot interpolate matrices of different size".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * (1.0 - s) + b * s)
            .collect();
        Ok(Self { dim: self.dim, entries })
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let dim = self.dim + other.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                entries[i * dim + j] = self.get(i, j);
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                entries[(self.dim + i) * dim + self.dim + j] = other.get(i, j);
            }
        }
        Self { dim, entries }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// `M v` for a column vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| {
                self.entries[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumSource {
    Matrix,
    LatticeTruncation,
}

/// Ascending eigenvalue list, repeated entries for multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    source: SpectrumSource,
}

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<f64>, source: SpectrumSource) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Self { eigenvalues, source }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn source(&self) -> SpectrumSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Number of eigenvalues in the half-open window `[lo, hi)`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        let start = self.eigenvalues.partition_point(|&x| x < lo);
        let end = self.eigenvalues.partition_point(|&x| x < hi);
        end.saturating_sub(start)
    }

    /// Distance from `x` to the nearest eigenvalue (infinite when empty).
    pub fn distance_to(&self, x: f64) -> f64 {
        let i = self.eigenvalues.partition_point(|&e| e < x);
        let mut best = f64::INFINITY;
        if i < self.eigenvalues.len() {
            best = best.min((self.eigenvalues[i] - x).abs());
        }
        if i > 0 {
            best = best.min((x - self.eigenvalues[i - 1]).abs());
        }
        best
    }
}

#[derive(Debug, Clone)]
pub struct Eigh {
    pub spectrum: Spectrum,
    /// Orthonormal eigenvectors, `vectors[k]` belongs to `spectrum.eigenvalues()[k]`.
    pub vectors: Vec<Vec<Complex64>>,
}

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn eigh(m: &DenseHermitian) -> Eigh {
    let n = m.dim;
    let mut a = m.entries.clone();
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let norm = m.frobenius_norm();
    let threshold = JACOBI_OFF_TOL * norm;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a, n) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|r| v[r * n + k]).collect())
        .collect();
    Eigh {
        spectrum: Spectrum { eigenvalues, source: SpectrumSource::Matrix },
        vectors,
    }
}

/// Eigenvalues only.
pub fn eigvalsh(m: &DenseHermitian) -> Spectrum {
    eigh(m).spectrum
}

fn off_diagonal_norm(a: &[Complex64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

// Annihilates a[p][q] with U = diag(1, e^{-i phi}) * [[c, s], [-s, c]].
fn rotate(a: &mut [Complex64], v: &mut [Complex64], n: usize, p: usize, q: usize) {
    let g = a[p * n + q];
    let abs_g = g.norm();
    if abs_g == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    if abs_g < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[p * n + q] = Complex64::new(0.0, 0.0);
        a[q * n + p] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = g / abs_g;
    let theta = (aqq - app) / (2.0 * abs_g);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e_minus = phase.conj();

    for r in 0..n {
        let ap = a[r * n + p];
        let aq = a[r * n + q];
        a[r * n + p] = ap * c - aq * e_minus * s;
        a[r * n + q] = ap * s + aq * e_minus * c;
    }
    for col in 0..n {
        let ap = a[p * n + col];
        let aq = a[q * n + col];
        a[p * n + col] = ap * c - aq * phase * s;
        a[q * n + col] = ap * s + aq * phase * c;
    }
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
    a[p * n + p] = Complex64::new(app - t * abs_g, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * abs_g, 0.0);

    for r in 0..n {
        let vp = v[r * n + p];
        let vq = v[r * n + q];
        v[r * n + p] = vp * c - vq * e_minus * s;
        v[r * n + q] = vp * s + vq * e_minus * c;
    }
}

/// Number of eigenvalues with `|lambda| <= tol`.
pub fn kernel_dimension(s: &Spectrum, tol: f64) -> usize {
    s.eigenvalues.iter().filter(|x| x.abs() <= tol).count()
}
