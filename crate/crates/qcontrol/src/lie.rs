//! Real Lie subalgebras of u(n): bracket closure from generators, centralizer
//! dimensions, scalar-direction detection and invariant bilinear forms.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{
    bracket, flatten_real, frob, hs_inner, numerical_rank, rank_tol_factor, real_nullspace,
    validate_skew, CMat, DensityMatrix, I,
};

/// Residual acceptance threshold for new basis directions.
const NEW_DIRECTION_TOL: f64 = 1e-9;

/// Orthonormal real basis of a subspace of u(n).
#[derive(Debug, Clone)]
pub struct LieBasis {
    n: usize,
    elements: Vec<CMat>,
    closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormSymmetry {
    Symmetric,
    Antisymmetric,
}

/// A complex bilinear form M with X M + M X^T = 0 for every basis element X.
#[derive(Debug, Clone)]
pub struct BilinearForm {
    pub n: usize,
    pub matrix: CMat,
    pub symmetry: FormSymmetry,
    pub nondegenerate: bool,
}

/// Removes the components of `x` along the orthonormal `basis`, twice
/// (classical Gram-Schmidt repeated to keep the residual trustworthy).
fn orthogonalize(basis: &[CMat], x: &CMat) -> CMat {
    let mut r = x.clone();
    for _ in 0..2 {
        for e in basis {
            let c = hs_inner(e, &r).expect("dimensions match");
            r -= e * Complex64::new(c, 0.0);
        }
    }
    r
}

impl LieBasis {
    /// Orthonormal basis of the real span of the given skew-Hermitian
    /// matrices; no closure verification.
    pub fn from_span(mats: &[CMat]) -> Result<Self> {
        let first = mats
            .first()
            .ok_or_else(|| Error::Precondition("empty generating set".into()))?;
        let n = first.nrows();
        let mut elements: Vec<CMat> = Vec::new();
        for m in mats {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::Shape("mixed dimensions in generating set".into()));
            }
            let s = validate_skew(m)?;
            let r = orthogonalize(&elements, &s);
            let rn = frob(&r);
            if rn > NEW_DIRECTION_TOL * (1.0 + frob(&s)) {
                elements.push(r * Complex64::new(1.0 / rn, 0.0));
            }
        }
        if elements.is_empty() {
            return Err(Error::Precondition(
                "generating set spans only the zero matrix".into(),
            ));
        }
        Ok(Self {
            n,
            elements,
            closed: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMat] {
        &self.elements
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Residual of x after projection onto the span.
    pub fn projection_residual(&self, x: &CMat) -> f64 {
        frob(&orthogonalize(&self.elements, x))
    }

    /// True iff every basis element has trace 0 within tolerance.
    pub fn is_traceless(&self) -> bool {
        self.elements
            .iter()
            .all(|e| e.trace().norm() <= 1e-8 * (1.0 + frob(e)))
    }

    /// Basis of the traceless parts, dropping the scalar direction if present.
    pub fn without_scalar_direction(&self) -> Result<Self> {
        let n = self.n as f64;
        let id = CMat::identity(self.n, self.n);
        let parts: Vec<CMat> = self
            .elements
            .iter()
            .map(|e| e - &id * (e.trace() / Complex64::new(n, 0.0)))
            .collect();
        Self::from_span(&parts)
    }
}

/// Smallest real Lie algebra containing the generators, as an orthonormal
/// basis. Breadth-first over bracket pairs; terminates at dim n^2.
pub fn lie_closure(generators: &[CMat]) -> Result<LieBasis> {
    let mut basis = LieBasis::from_span(generators)?;
    let n = basis.n;
    let full = n * n;

    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for i in 0..basis.dim() {
        for j in 0..i {
            queue.push_back((i, j));
        }
    }

    while let Some((i, j)) = queue.pop_front() {
        if basis.dim() >= full {
            break;
        }
        let br = bracket(&basis.elements[i], &basis.elements[j])?;
        let r = orthogonalize(&basis.elements, &br);
        let rn = frob(&r);
        if rn > NEW_DIRECTION_TOL * (1.0 + frob(&br)) {
            let k = basis.dim();
            basis.elements.push(r * Complex64::new(1.0 / rn, 0.0));
            for j in 0..k {
                queue.push_back((k, j));
            }
        }
    }

    basis.closed = true;
    Ok(basis)
}

/// dim of the centralizer of iD in u(n): sum of squared eigenvalue
/// multiplicities. Near-degenerate spectra (gaps inside (1e-8, 1e-6)) are
/// refused as ill-conditioned.
pub fn centralizer_in_full(d: &DensityMatrix) -> Result<usize> {
    let ev = d.eigenvalues();
    let mut dims = 0usize;
    let mut mult = 1usize;
    for w in ev.windows(2) {
        let gap = w[1] - w[0];
        if gap > 1e-8 && gap < 1e-6 {
            return Err(Error::Conditioning(format!(
                "eigenvalue gap {gap:.3e} is too close to the clustering threshold"
            )));
        }
        if gap <= 1e-8 {
            mult += 1;
        } else {
            dims += mult * mult;
            mult = 1;
        }
    }
    dims += mult * mult;
    Ok(dims)
}

/// dim(L ∩ C_D): kernel dimension of X -> [X, D] restricted to span(L).
pub fn centralizer_intersection_dim(l: &LieBasis, d: &DensityMatrix) -> Result<usize> {
    if l.n() != d.n() {
        return Err(Error::Shape(format!(
            "basis dimension {} does not match density dimension {}",
            l.n(),
            d.n()
        )));
    }
    let images: Vec<CMat> = l
        .elements()
        .iter()
        .map(|e| bracket(e, d.matrix()))
        .collect::<Result<_>>()?;
    let rank = numerical_rank(&images)?;
    Ok(l.dim() - rank)
}

/// True iff span{iI} is contained in span(L).
pub fn contains_scalar(l: &LieBasis) -> bool {
    let scalar = CMat::identity(l.n(), l.n()) * I;
    l.projection_residual(&scalar) <= 1e-8 * (1.0 + frob(&scalar))
}

/// Basis of the space of complex bilinear forms M in the chosen symmetry
/// class with X M + M X^T = 0 for every basis element X. Each solution is
/// normalized and flagged nondegenerate iff M has full numerical rank.
pub fn find_invariant_form(l: &LieBasis, symmetry: FormSymmetry) -> Vec<BilinearForm> {
    let n = l.n();
    let params = form_parameter_matrices(n, symmetry);
    if params.is_empty() {
        return Vec::new();
    }
    let rows = l.dim() * 2 * n * n;
    let cols = params.len();
    let mut a = DMatrix::<f64>::zeros(rows, cols);
    for (j, p) in params.iter().enumerate() {
        let mut row = 0;
        for x in l.elements() {
            let img = x * p + p * x.transpose();
            for v in flatten_real(&img) {
                a[(row, j)] = v;
                row += 1;
            }
        }
    }
    let null = real_nullspace(&a);
    null.iter()
        .map(|coeffs| {
            let mut m = CMat::zeros(n, n);
            for (j, p) in params.iter().enumerate() {
                m += p * Complex64::new(coeffs[j], 0.0);
            }
            let norm = frob(&m);
            if norm > 0.0 {
                m /= Complex64::new(norm, 0.0);
            }
            let sv = m.clone().singular_values();
            let smax = sv.iter().cloned().fold(0.0, f64::max);
            let thresh = n as f64 * smax * rank_tol_factor();
            let nondegenerate = smax > 0.0 && sv.iter().all(|&s| s > thresh);
            BilinearForm {
                n,
                matrix: m,
                symmetry,
                nondegenerate,
            }
        })
        .collect()
}

/// Real parameter matrices for the symmetry class: each complex parameter
/// contributes the matrix and i times it.
fn form_parameter_matrices(n: usize, symmetry: FormSymmetry) -> Vec<CMat> {
    let mut out = Vec::new();
    let mut push_both = |m: CMat| {
        out.push(m.clone() * I);
        out.push(m);
    };
    match symmetry {
        FormSymmetry::Symmetric => {
            for j in 0..n {
                for k in j..n {
                    let mut m = CMat::zeros(n, n);
                    m[(j, k)] += Complex64::new(1.0, 0.0);
                    m[(k, j)] += Complex64::new(1.0, 0.0);
                    push_both(m);
                }
            }
        }
        FormSymmetry::Antisymmetric => {
            for j in 0..n {
                for k in (j + 1)..n {
                    let mut m = CMat::zeros(n, n);
                    m[(j, k)] = Complex64::new(1.0, 0.0);
                    m[(k, j)] = Complex64::new(-1.0, 0.0);
                    push_both(m);
                }
            }
        }
    }
    out
}

/// Basis {U e_i U*}. Keeps orthonormality, dimension, and the closure flag.
pub fn conjugate_basis(l: &LieBasis, u: &CMat) -> Result<LieBasis> {
    if u.nrows() != l.n() || u.ncols() != l.n() {
        return Err(Error::Shape("conjugating matrix has wrong dimension".into()));
    }
    let dev = (u.adjoint() * u - CMat::identity(l.n(), l.n())).norm();
    if dev > 1e-8 {
        return Err(Error::Validation(format!(
            "conjugating matrix is not unitary: ||U*U - I|| = {dev:.3e}"
        )));
    }
    let elements = l
        .elements()
        .iter()
        .map(|e| u * e * u.adjoint())
        .collect();
    Ok(LieBasis {
        n: l.n(),
        elements,
        closed: l.closed,
    })
}
