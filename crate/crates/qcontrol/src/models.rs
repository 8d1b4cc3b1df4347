//! Builtin generators: spin systems, the block-form rank-10 algebra, the
//! orbit-obstruction construction, and standard u(n), su(n), sp(k) bases.
//!
//! Conventions fixed once: spin-1/2 operators are sigma/2 and a Hamiltonian H
//! enters the dynamics as the skew-Hermitian drift iH.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::analysis::SystemModel;
use crate::error::{Error, Result};
use crate::lie::{lie_closure, LieBasis};
use crate::matcore::{haar_random_unitary_with, CMat, DensityMatrix, CVec, I, ONE, ZERO};

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// Orthonormal basis of u(n), dimension n^2.
pub fn u_basis(n: usize) -> LieBasis {
    let mut mats = Vec::new();
    for j in 0..n {
        let mut m = CMat::zeros(n, n);
        m[(j, j)] = I;
        mats.push(m);
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let mut a = CMat::zeros(n, n);
            a[(j, k)] = ONE;
            a[(k, j)] = -ONE;
            mats.push(a);
            let mut s = CMat::zeros(n, n);
            s[(j, k)] = I;
            s[(k, j)] = I;
            mats.push(s);
        }
    }
    LieBasis::from_span(&mats).expect("u(n) generators are valid")
}

/// Orthonormal basis of su(n), dimension n^2 - 1.
pub fn su_basis(n: usize) -> LieBasis {
    let mut mats = Vec::new();
    for j in 0..(n - 1) {
        let mut m = CMat::zeros(n, n);
        m[(j, j)] = I;
        m[(j + 1, j + 1)] = -I;
        mats.push(m);
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let mut a = CMat::zeros(n, n);
            a[(j, k)] = ONE;
            a[(k, j)] = -ONE;
            mats.push(a);
            let mut s = CMat::zeros(n, n);
            s[(j, k)] = I;
            s[(k, j)] = I;
            mats.push(s);
        }
    }
    LieBasis::from_span(&mats).expect("su(n) generators are valid")
}

/// Single spin-1/2 in a static z field with x and y drive.
pub fn single_spin(omega: f64) -> SystemModel {
    let half = Complex64::new(0.5, 0.0);
    let drift = pauli_z() * (I * Complex64::new(omega, 0.0)) * half;
    let controls = vec![pauli_x() * I * half, pauli_y() * I * half];
    SystemModel::new(drift, controls, "single-spin").expect("builtin model is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    Ising,
    Isotropic,
}

/// Two interacting spin-1/2 particles in an external field, with per-spin
/// gyromagnetic factors. The field components in x, y, z are the controls.
pub fn two_spin(j: f64, gamma1: f64, gamma2: f64, coupling: Coupling) -> Result<SystemModel> {
    if j == 0.0 {
        return Err(Error::Parameter("two-spin coupling J must be nonzero".into()));
    }
    let id = CMat::identity(2, 2);
    let quarter = Complex64::new(j / 4.0, 0.0);
    let drift = match coupling {
        Coupling::Ising => pauli_z().kronecker(&pauli_z()) * I * quarter,
        Coupling::Isotropic => {
            (pauli_x().kronecker(&pauli_x())
                + pauli_y().kronecker(&pauli_y())
                + pauli_z().kronecker(&pauli_z()))
                * I
                * quarter
        }
    };
    let g1 = Complex64::new(gamma1, 0.0);
    let g2 = Complex64::new(gamma2, 0.0);
    let half = Complex64::new(0.5, 0.0);
    let controls = [pauli_x(), pauli_y(), pauli_z()]
        .iter()
        .map(|s| (s.kronecker(&id) * g1 + id.kronecker(s) * g2) * I * half)
        .collect();
    SystemModel::new(drift, controls, "two-spin")
}

/// F = [[L+Z, T+C], [-conj(T)+conj(C), -L+Z^T]] with 2x2 blocks.
fn block_form(l: &CMat, z: &CMat, t: &CMat, c: &CMat) -> CMat {
    let mut f = CMat::zeros(4, 4);
    let tl = l + z;
    let tr = t + c;
    let bl = -t.map(|e| e.conj()) + c.map(|e| e.conj());
    let br = -l + z.transpose();
    for r in 0..2 {
        for s in 0..2 {
            f[(r, s)] = tl[(r, s)];
            f[(r, s + 2)] = tr[(r, s)];
            f[(r + 2, s)] = bl[(r, s)];
            f[(r + 2, s + 2)] = br[(r, s)];
        }
    }
    f
}

/// The rank-10 block-form subalgebra of u(4): L diagonal purely imaginary,
/// T diagonal, Z skew-Hermitian and C antisymmetric with zero diagonal.
pub fn example_sp2_basis() -> LieBasis {
    let z2 = CMat::zeros(2, 2);
    let mut gens = Vec::new();
    // L: 2 real parameters
    for j in 0..2 {
        let mut l = CMat::zeros(2, 2);
        l[(j, j)] = I;
        gens.push(block_form(&l, &z2, &z2, &z2));
    }
    // T: 2 complex parameters
    for j in 0..2 {
        for scale in [ONE, I] {
            let mut t = CMat::zeros(2, 2);
            t[(j, j)] = scale;
            gens.push(block_form(&z2, &z2, &t, &z2));
        }
    }
    // Z: 1 complex parameter, z21 = -conj(z12)
    for scale in [ONE, I] {
        let mut z = CMat::zeros(2, 2);
        z[(0, 1)] = scale;
        z[(1, 0)] = -scale.conj();
        gens.push(block_form(&z2, &z, &z2, &z2));
    }
    // C: 1 complex parameter, antisymmetric
    for scale in [ONE, I] {
        let mut c = CMat::zeros(2, 2);
        c[(0, 1)] = scale;
        c[(1, 0)] = -scale;
        gens.push(block_form(&z2, &z2, &z2, &c));
    }
    lie_closure(&gens).expect("block-form generators are valid")
}

/// The standard antisymmetric form J = [[0, I_{n/2}], [-I_{n/2}, 0]].
pub fn standard_j(n: usize) -> CMat {
    assert!(n % 2 == 0);
    let k = n / 2;
    let mut j = CMat::zeros(n, n);
    for i in 0..k {
        j[(i, i + k)] = ONE;
        j[(i + k, i)] = -ONE;
    }
    j
}

/// Orthonormal basis of sp(k) inside u(2k): X J + J X^T = 0. Dimension
/// k(2k+1).
pub fn standard_sp_basis(k: usize) -> LieBasis {
    assert!(k >= 1);
    let n = 2 * k;
    let mut gens: Vec<CMat> = Vec::new();
    let embed = |a: &CMat, b: &CMat| {
        // X = [[A, B], [-conj(B), conj(A)]] with A in u(k), B symmetric
        let mut x = CMat::zeros(n, n);
        for r in 0..k {
            for s in 0..k {
                x[(r, s)] = a[(r, s)];
                x[(r, s + k)] = b[(r, s)];
                x[(r + k, s)] = -b[(r, s)].conj();
                x[(r + k, s + k)] = a[(r, s)].conj();
            }
        }
        x
    };
    let zk = CMat::zeros(k, k);
    for e in u_basis(k).elements() {
        gens.push(embed(e, &zk));
    }
    for j in 0..k {
        for l in j..k {
            for scale in [ONE, I] {
                let mut b = CMat::zeros(k, k);
                b[(j, l)] += scale;
                b[(l, j)] += scale;
                gens.push(embed(&zk, &b));
            }
        }
    }
    lie_closure(&gens).expect("sp(k) generators are valid")
}

/// The rank-2 density matrix D = (|v><v| + |w><w|)/2 with w = (-v2; v1),
/// which commutes with J, together with a witness D' that does not satisfy
/// D' J = J conj(D').
pub fn example_orbit_pair(
    n: usize,
    v: &[f64],
    seed: u64,
) -> Result<(DensityMatrix, DensityMatrix, CMat)> {
    if n % 2 != 0 || n <= 2 {
        return Err(Error::Parameter(format!(
            "orbit construction needs even n > 2, got {n}"
        )));
    }
    if v.len() != n {
        return Err(Error::Parameter("v must have length n".into()));
    }
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::Parameter("v must be a real unit vector".into()));
    }
    let k = n / 2;
    let vv = CVec::from_iterator(n, v.iter().map(|&x| Complex64::new(x, 0.0)));
    let mut w = CVec::zeros(n);
    for i in 0..k {
        w[i] = -vv[i + k];
        w[i + k] = vv[i];
    }
    let half = Complex64::new(0.5, 0.0);
    let d = DensityMatrix::new((&vv * vv.adjoint() + &w * w.adjoint()) * half)?;
    let j = standard_j(n);

    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let u = haar_random_unitary_with(n, &mut rng);
        let vp = u.column(0).into_owned();
        let wp = u.column(1).into_owned();
        let dp_mat = (&vp * vp.adjoint() + &wp * wp.adjoint()) * half;
        let mismatch = (&dp_mat * &j - &j * dp_mat.map(|e| e.conj())).norm();
        if mismatch > 1e-3 {
            let dp = DensityMatrix::new(dp_mat)?;
            return Ok((d, dp, j));
        }
    }
    Err(Error::Validation(
        "failed to sample a witness D' within 100 attempts".into(),
    ))
}

/// Swap of the two tensor factors on C^2 x C^2.
pub fn swap_gate() -> CMat {
    let mut s = CMat::zeros(4, 4);
    s[(0, 0)] = ONE;
    s[(1, 2)] = ONE;
    s[(2, 1)] = ONE;
    s[(3, 3)] = ONE;
    s
}

/// Diagonal eigenvalue helper for tests and fixtures.
pub fn diag_density(entries: &[f64]) -> Result<DensityMatrix> {
    let v = DVector::from_iterator(entries.len(), entries.iter().map(|&x| Complex64::new(x, 0.0)));
    DensityMatrix::new(CMat::from_diagonal(&v))
}
