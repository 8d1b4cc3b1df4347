//! Dense complex matrix primitives: commutators, the Hilbert-Schmidt inner
//! product, numerical rank over real coordinates, and the skew-Hermitian
//! matrix exponential. Everything else in the crate is built on these.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Dense n x n complex matrix, the universal carrier type.
pub type CMat = DMatrix<Complex64>;
/// Dense complex vector.
pub type CVec = DVector<Complex64>;

pub const I: Complex64 = Complex64::new(0.0, 1.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative tolerance for accepting an input as skew-Hermitian.
pub const SKEW_VALIDATION_TOL: f64 = 1e-8;

/// Rank threshold factor; `QCA_RANK_TOL` overrides it (expert-only knob).
pub fn rank_tol_factor() -> f64 {
    std::env::var("QCA_RANK_TOL")
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|t| t.is_finite() && *t > 0.0)
        .unwrap_or(1e-9)
}

pub fn frob(x: &CMat) -> f64 {
    x.norm()
}

fn check_same_square(x: &CMat, y: &CMat) -> Result<()> {
    if !x.is_square() || !y.is_square() || x.nrows() != y.nrows() {
        return Err(Error::Shape(format!(
            "expected equal square matrices, got {}x{} and {}x{}",
            x.nrows(),
            x.ncols(),
            y.nrows(),
            y.ncols()
        )));
    }
    Ok(())
}

/// Commutator XY - YX.
pub fn bracket(x: &CMat, y: &CMat) -> Result<CMat> {
    check_same_square(x, y)?;
    Ok(x * y - y * x)
}

/// Hilbert-Schmidt real inner product Re tr(X* Y).
pub fn hs_inner(x: &CMat, y: &CMat) -> Result<f64> {
    check_same_square(x, y)?;
    let mut acc = 0.0;
    for (a, b) in x.iter().zip(y.iter()) {
        acc += a.re * b.re + a.im * b.im;
    }
    Ok(acc)
}

/// Skew-Hermitian part (X - X*)/2.
pub fn skew_project(x: &CMat) -> CMat {
    (x - x.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Accepts X as skew-Hermitian iff ||X + X*|| <= 1e-8 (1 + ||X||), then
/// returns the projected matrix.
pub fn validate_skew(x: &CMat) -> Result<CMat> {
    if !x.is_square() {
        return Err(Error::Shape(format!(
            "expected a square matrix, got {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    let dev = (x + x.adjoint()).norm();
    if dev > SKEW_VALIDATION_TOL * (1.0 + frob(x)) {
        return Err(Error::Validation(format!(
            "matrix is not skew-Hermitian: ||X + X*|| = {dev:.3e}"
        )));
    }
    Ok(skew_project(x))
}

/// Flattens a complex matrix to its 2 r c real coordinates. `hs_inner`
/// equals the Euclidean dot product of these vectors.
pub fn flatten_real(x: &CMat) -> Vec<f64> {
    let mut v = Vec::with_capacity(2 * x.len());
    for e in x.iter() {
        v.push(e.re);
        v.push(e.im);
    }
    v
}

/// Rank of the real span of the given matrices under `hs_inner`, via the
/// singular values of the stacked real-coordinate matrix.
pub fn numerical_rank(mats: &[CMat]) -> Result<usize> {
    let first = mats
        .first()
        .ok_or_else(|| Error::Precondition("numerical_rank needs a nonempty list".into()))?;
    let (r, c) = (first.nrows(), first.ncols());
    for m in mats {
        if m.nrows() != r || m.ncols() != c {
            return Err(Error::Shape("mixed matrix dimensions in rank input".into()));
        }
    }
    let cols = 2 * r * c;
    let data: Vec<f64> = mats.iter().flat_map(flatten_real).collect();
    let stacked = DMatrix::<f64>::from_row_slice(mats.len(), cols, &data);
    Ok(real_rank(&stacked))
}

/// Rank of a real matrix with the scale-invariant threshold
/// sigma > max(nrows, ncols) * sigma_max * tol.
pub fn real_rank(a: &DMatrix<f64>) -> usize {
    let sv = a.clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    let thresh = a.nrows().max(a.ncols()) as f64 * smax * rank_tol_factor();
    sv.iter().filter(|&&s| s > thresh).count()
}

/// Orthonormal basis of the null space of a real matrix (columns of V past
/// the numerical rank). Requires nrows >= ncols so the thin SVD is complete.
pub fn real_nullspace(a: &DMatrix<f64>) -> Vec<DVector<f64>> {
    assert!(a.nrows() >= a.ncols(), "nullspace needs nrows >= ncols");
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("SVD with V requested");
    let sv = &svd.singular_values;
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let thresh = a.nrows().max(a.ncols()) as f64 * smax * rank_tol_factor();
    let mut out = Vec::new();
    for i in 0..v_t.nrows() {
        if sv[i] <= thresh || smax == 0.0 {
            out.push(v_t.row(i).transpose());
        }
    }
    out
}

/// exp(S) for skew-Hermitian S, via Hermitian eigendecomposition of -iS.
/// Exact for this class and keeps the result unitary.
pub fn expm_skew(s: &CMat) -> Result<CMat> {
    let s = validate_skew(s)?;
    let h = &s * (-I);
    let eig = nalgebra::SymmetricEigen::new(h);
    let phases = CVec::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| (I * l).exp()),
    );
    let v = eig.eigenvectors;
    Ok(&v * CMat::from_diagonal(&phases) * v.adjoint())
}

/// Haar-distributed random unitary: QR of a complex Gaussian matrix with the
/// R diagonal phase-normalized. Deterministic per seed.
pub fn haar_random_unitary(n: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_random_unitary_with(n, &mut rng)
}

pub fn haar_random_unitary_with(n: usize, rng: &mut impl rand::Rng) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im) / 2f64.sqrt()
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Random skew-Hermitian matrix with Gaussian coordinates, for tests and
/// randomized property checks.
pub fn random_skew_hermitian(n: usize, rng: &mut impl rand::Rng) -> CMat {
    let g = CMat::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    skew_project(&g)
}

/// Unit vector on the complex sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: CVec,
}

impl StateVector {
    pub fn new(amplitudes: CVec) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Precondition("state vector must be nonempty".into()));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Validation(format!(
                "state vector norm {norm} is not 1 within 1e-10"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state |k> in dimension n.
    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = CVec::zeros(n);
        v[k] = ONE;
        Self { amplitudes: v }
    }

    pub fn n(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    /// |<self|other>|.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm()
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: CMat,
}

impl DensityMatrix {
    pub fn new(matrix: CMat) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Shape("density matrix must be square".into()));
        }
        let herm_dev = (&matrix - matrix.adjoint()).norm();
        if herm_dev > 1e-9 {
            return Err(Error::Validation(format!(
                "density matrix is not Hermitian: deviation {herm_dev:.3e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(Error::Validation(format!("density matrix trace {tr} is not 1")));
        }
        let herm = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = nalgebra::SymmetricEigen::new(herm);
        if eig.eigenvalues.iter().any(|&l| l < -1e-10) {
            return Err(Error::Validation(
                "density matrix has a negative eigenvalue beyond 1e-10".into(),
            ));
        }
        Ok(Self { matrix })
    }

    /// diag(1, 0, ..., 0), the pure-state reference matrix.
    pub fn pure_reference(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        m[(0, 0)] = ONE;
        Self { matrix: m }
    }

    /// I/n, the completely random ensemble.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: CMat::identity(n, n) * Complex64::new(1.0 / n as f64, 0.0),
        }
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let v = psi.amplitudes();
        Self {
            matrix: v * v.adjoint(),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = nalgebra::SymmetricEigen::new(self.matrix.clone());
        let mut ev: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }
}
