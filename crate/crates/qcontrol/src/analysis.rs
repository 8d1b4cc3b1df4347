//! Controllability decision procedures: operator, pure-state,
//! equivalent-state and density-matrix verdicts, the orbit-equality test,
//! realification, and the small-time obstruction report.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{
    centralizer_in_full, centralizer_intersection_dim, contains_scalar, find_invariant_form,
    lie_closure, FormSymmetry, LieBasis,
};
use crate::matcore::{validate_skew, CMat, DensityMatrix, StateVector};

/// Bilinear control system: skew-Hermitian drift A and controls B_1..B_m.
#[derive(Debug, Clone)]
pub struct SystemModel {
    n: usize,
    drift: CMat,
    controls: Vec<CMat>,
    label: String,
}

impl SystemModel {
    pub fn new(drift: CMat, controls: Vec<CMat>, label: impl Into<String>) -> Result<Self> {
        let drift = validate_skew(&drift)?;
        let n = drift.nrows();
        if controls.is_empty() {
            return Err(Error::Precondition("at least one control is required".into()));
        }
        let controls = controls
            .iter()
            .map(|b| {
                if b.nrows() != n || b.ncols() != n {
                    return Err(Error::Shape(format!(
                        "control is {}x{}, drift is {n}x{n}",
                        b.nrows(),
                        b.ncols()
                    )));
                }
                validate_skew(b)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            drift,
            controls,
            label: label.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn drift(&self) -> &CMat {
        &self.drift
    }

    pub fn controls(&self) -> &[CMat] {
        &self.controls
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> Vec<CMat> {
        let mut g = vec![self.drift.clone()];
        g.extend(self.controls.iter().cloned());
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OcFlavor {
    SpecialUnitary,
    Unitary,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "su(n)")]
    SuN,
    #[serde(rename = "u(n)")]
    UN,
    #[serde(rename = "sp-conjugate")]
    SpConjugate,
    #[serde(rename = "sp-conjugate-plus-scalar")]
    SpConjugatePlusScalar,
    #[serde(rename = "not-transitive")]
    NotTransitive,
    #[serde(rename = "transitive-unclassified")]
    TransitiveUnclassified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Obstruction {
    BNotTransitive,
    BTransitive,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub dim_l: usize,
    pub dim_b: usize,
    pub traceless: bool,
    pub contains_scalar: bool,
    pub oc: bool,
    pub oc_flavor: OcFlavor,
    pub psc: bool,
    pub esc: bool,
    pub dmc: bool,
    pub classification: Classification,
    pub small_time_obstruction: Obstruction,
    pub diagnostics: Vec<String>,
}

/// Operator controllability: L = u(n) or L = su(n).
pub fn test_oc(l: &LieBasis) -> (bool, OcFlavor) {
    let n = l.n();
    if l.dim() == n * n {
        (true, OcFlavor::Unitary)
    } else if l.dim() == n * n - 1 && l.is_traceless() {
        (true, OcFlavor::SpecialUnitary)
    } else {
        (false, OcFlavor::None)
    }
}

/// Pure-state controllability: dim L - dim(L ∩ C_D) = 2n - 2 with
/// D = diag(1, 0, ..., 0).
pub fn test_psc(l: &LieBasis) -> bool {
    let d = DensityMatrix::pure_reference(l.n());
    let inter = centralizer_intersection_dim(l, &d).expect("dimensions match by construction");
    l.dim() - inter == 2 * l.n() - 2
}

/// Equivalent-state controllability coincides with pure-state
/// controllability.
pub fn test_esc(l: &LieBasis) -> bool {
    test_psc(l)
}

/// Density-matrix controllability coincides with operator controllability.
pub fn test_dmc(l: &LieBasis) -> bool {
    test_oc(l).0
}

/// Orbit equality for a given density matrix:
/// n^2 - dim C_D = dim L - dim(L ∩ C_D).
pub fn orbit_equality(l: &LieBasis, d: &DensityMatrix) -> Result<bool> {
    let full = centralizer_in_full(d)?;
    let inter = centralizer_intersection_dim(l, d)?;
    Ok(l.n() * l.n() - full == l.dim() - inter)
}

/// Transitivity decision table on the closed algebra.
pub fn classify(l: &LieBasis) -> (Classification, Vec<String>) {
    let n = l.n();
    let dim = l.dim();
    let mut notes = Vec::new();
    if dim == n * n {
        return (Classification::UN, notes);
    }
    if dim == n * n - 1 && l.is_traceless() {
        return (Classification::SuN, notes);
    }
    let psc = test_psc(l);
    if psc && n % 2 == 0 {
        let k = n / 2;
        let sp_dim = k * (2 * k + 1);
        let scalar = contains_scalar(l);
        if dim == sp_dim || (dim == sp_dim + 1 && scalar) {
            let candidate = if scalar {
                l.without_scalar_direction().ok()
            } else {
                None
            };
            let target = candidate.as_ref().unwrap_or(l);
            let has_form = find_invariant_form(target, FormSymmetry::Antisymmetric)
                .iter()
                .any(|f| f.nondegenerate);
            if has_form {
                return if scalar && dim == sp_dim + 1 {
                    (Classification::SpConjugatePlusScalar, notes)
                } else {
                    (Classification::SpConjugate, notes)
                };
            }
        }
    }
    if !psc {
        (Classification::NotTransitive, notes)
    } else {
        notes.push(
            "transitive, unclassified: dimensions or invariant-form search did not match any \
             known transitive class; this indicates a numerical rank failure"
                .into(),
        );
        (Classification::TransitiveUnclassified, notes)
    }
}

/// Real 2n x 2n image [[R, -Y], [Y, R]] of X = R + iY, returned with complex
/// entry type for uniformity. Bracket homomorphism; unitaries map into
/// SO(2n).
pub fn realify(x: &CMat) -> CMat {
    let n = x.nrows();
    let mut out = CMat::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let e = x[(r, c)];
            out[(r, c)] = Complex64::new(e.re, 0.0);
            out[(r + n, c + n)] = Complex64::new(e.re, 0.0);
            out[(r, c + n)] = Complex64::new(-e.im, 0.0);
            out[(r + n, c)] = Complex64::new(e.im, 0.0);
        }
    }
    out
}

/// (Re psi; Im psi) on the real sphere S^{2n-1}.
pub fn realify_state(psi: &StateVector) -> DVector<f64> {
    let n = psi.n();
    DVector::from_fn(2 * n, |i, _| {
        if i < n {
            psi.amplitudes()[i].re
        } else {
            psi.amplitudes()[i - n].im
        }
    })
}

/// Obstruction to state transfer in arbitrarily small time, from the
/// drift-free algebra generated by the controls alone.
pub fn small_time_report(model: &SystemModel) -> Result<(Obstruction, Vec<String>)> {
    let b = lie_closure(model.controls())?;
    let mut notes = Vec::new();
    let psc_b = test_psc(&b);
    let label = if psc_b {
        notes.push(format!(
            "drift-free algebra (dim {}) is transitive on the sphere; no small-time obstruction \
             from this test",
            b.dim()
        ));
        Obstruction::BTransitive
    } else {
        notes.push(format!(
            "drift-free algebra (dim {}) is not transitive: state transfer in arbitrarily small \
             time would require it to sit inside a transitive proper subalgebra",
            b.dim()
        ));
        let (class, _) = classify(&b);
        if class == Classification::SpConjugate {
            notes.push(
                "hypothesis decidable: an sp(n/2)-conjugate algebra is maximal in su(n), so it \
                 lies in no transitive proper subalgebra"
                    .into(),
            );
        } else if model.n() == 4
            && b.dim() == 6
            && find_invariant_form(&b, FormSymmetry::Symmetric)
                .iter()
                .any(|f| f.nondegenerate)
        {
            notes.push(
                "hypothesis decidable: the dim-6 algebra preserves a nondegenerate symmetric \
                 form (so(4)-conjugate in su(4)), which lies in no transitive proper subalgebra"
                    .into(),
            );
        } else {
            notes.push(
                "hypothesis 'not contained in any transitive proper subalgebra' is reported, \
                 not auto-verified; obstruction verdict is conditional on it"
                    .into(),
            );
        }
        Obstruction::BNotTransitive
    };
    Ok((label, notes))
}

/// Full controllability report for a system.
pub fn analyze(model: &SystemModel) -> Result<AnalysisReport> {
    let l = lie_closure(&model.generators())?;
    let b = lie_closure(model.controls())?;
    let (oc, oc_flavor) = test_oc(&l);
    let psc = test_psc(&l);
    let esc = test_esc(&l);
    let dmc = test_dmc(&l);
    let (classification, mut diagnostics) = classify(&l);
    let (small_time_obstruction, st_notes) = small_time_report(model)?;
    diagnostics.extend(st_notes);
    diagnostics.push("esc mirrors psc; dmc mirrors oc (equivalent notions)".into());

    if dmc != oc || esc != psc || (oc && !psc) {
        return Err(Error::Conditioning(
            "implication diagram violated (dmc=oc, esc=psc, oc=>psc); numerical rank is not \
             trustworthy for this input"
                .into(),
        ));
    }

    Ok(AnalysisReport {
        dim_l: l.dim(),
        dim_b: b.dim(),
        traceless: l.is_traceless(),
        contains_scalar: contains_scalar(&l),
        oc,
        oc_flavor,
        psc,
        esc,
        dmc,
        classification,
        small_time_obstruction,
        diagnostics,
    })
}

/// Report for a system after a change of basis; used by invariance tests.
pub fn analyze_conjugated(model: &SystemModel, u: &CMat) -> Result<AnalysisReport> {
    let drift = u * model.drift() * u.adjoint();
    let controls = model
        .controls()
        .iter()
        .map(|b| u * b * u.adjoint())
        .collect();
    analyze(&SystemModel::new(drift, controls, model.label())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{
        bracket, frob, haar_random_unitary, random_skew_hermitian, I, ONE, ZERO,
    };
    use crate::models::{
        example_sp2_basis, pauli_z, single_spin, standard_sp_basis, su_basis, two_spin, u_basis,
        Coupling,
    };
    use nalgebra::DVector;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn oc_examples() {
        assert_eq!(test_oc(&su_basis(4)), (true, OcFlavor::SpecialUnitary));
        assert_eq!(test_oc(&u_basis(2)), (true, OcFlavor::Unitary));
        assert_eq!(test_oc(&example_sp2_basis()), (false, OcFlavor::None));
    }

    #[test]
    fn psc_examples() {
        assert!(test_psc(&example_sp2_basis())); // 10 - 4 = 6 = 2n-2
        assert!(test_psc(&su_basis(4))); // 15 - 9 = 6
        let abelian = LieBasis::from_span(&[CMat::from_diagonal(&DVector::from_vec(vec![
            I, -I, ZERO, ZERO,
        ]))])
        .unwrap();
        assert!(!test_psc(&abelian));
        for n in 2..=8 {
            assert!(test_psc(&su_basis(n)), "su({n}) must pass the criterion");
        }
    }

    #[test]
    fn esc_equals_psc_and_dmc_equals_oc() {
        for l in [su_basis(2), su_basis(3), example_sp2_basis(), standard_sp_basis(2)] {
            assert_eq!(test_esc(&l), test_psc(&l));
            assert_eq!(test_dmc(&l), test_oc(&l).0);
        }
        assert!(test_esc(&su_basis(2))); // 3 - 1 = 2 = 2n-2
        assert!(!test_dmc(&standard_sp_basis(2)));
        assert!(test_dmc(&u_basis(3)));
    }

    #[test]
    fn orbit_equality_examples() {
        // completely random ensemble: both sides zero for every L
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            let gens: Vec<CMat> = (0..2).map(|_| random_skew_hermitian(4, &mut rng)).collect();
            let l = lie_closure(&gens).unwrap();
            let mixed = DensityMatrix::maximally_mixed(4);
            assert!(orbit_equality(&l, &mixed).unwrap());
        }

        // full algebra gives equality for any density matrix
        for n in [3usize, 4] {
            let l = su_basis(n);
            for seed in 0..5u64 {
                let u = haar_random_unitary(n, seed);
                let mut entries: Vec<f64> = (0..n).map(|i| (i + 1) as f64).collect();
                let total: f64 = entries.iter().sum();
                entries.iter_mut().for_each(|e| *e /= total);
                let diag = CMat::from_diagonal(&DVector::from_iterator(
                    n,
                    entries.iter().map(|&x| Complex64::new(x, 0.0)),
                ));
                let d = DensityMatrix::new(&u * diag * u.adjoint()).unwrap();
                assert!(orbit_equality(&l, &d).unwrap());
            }
        }

        // the sp(2) orbit of the commuting D is strictly smaller
        let mut v = vec![0.0; 4];
        v[0] = 1.0;
        let (d, _, _) = crate::models::example_orbit_pair(4, &v, 3).unwrap();
        assert!(!orbit_equality(&standard_sp_basis(2), &d).unwrap());
    }

    #[test]
    fn orbit_equality_matches_psc_for_pure_reference() {
        // for L inside su(n) the two integer conditions coincide
        for l in [su_basis(3), su_basis(4), standard_sp_basis(2), example_sp2_basis()] {
            let d = DensityMatrix::pure_reference(l.n());
            assert_eq!(orbit_equality(&l, &d).unwrap(), test_psc(&l));
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&example_sp2_basis()).0, Classification::SpConjugate);
        assert_eq!(classify(&su_basis(4)).0, Classification::SuN);
        assert_eq!(classify(&u_basis(3)).0, Classification::UN);
        assert_eq!(classify(&standard_sp_basis(2)).0, Classification::SpConjugate);

        let m = two_spin(1.0, 1.0, 1.1, Coupling::Ising).unwrap();
        let b = lie_closure(m.controls()).unwrap();
        assert_eq!(classify(&b).0, Classification::NotTransitive);
    }

    #[test]
    fn classify_sp_plus_scalar() {
        let sp2 = standard_sp_basis(2);
        let mut gens: Vec<CMat> = sp2.elements().to_vec();
        gens.push(CMat::identity(4, 4) * I);
        let l = lie_closure(&gens).unwrap();
        assert_eq!(l.dim(), 11);
        assert_eq!(classify(&l).0, Classification::SpConjugatePlusScalar);
    }

    #[test]
    fn realify_examples() {
        let n = 3;
        let id = CMat::identity(n, n);
        assert!(frob(&(realify(&id) - CMat::identity(2 * n, 2 * n))) < 1e-14);

        // realify(iI) = [[0, -I], [I, 0]]
        let got = realify(&(id * I));
        let j = crate::models::standard_j(2 * n);
        assert!(frob(&(got + j)) < 1e-14);

        let u = haar_random_unitary(4, 2);
        let ru = realify(&u);
        assert!(frob(&(ru.transpose() * &ru - CMat::identity(8, 8))) < 1e-10);
    }

    #[test]
    fn realify_bracket_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let x = random_skew_hermitian(3, &mut rng);
            let z = random_skew_hermitian(3, &mut rng);
            let lhs = realify(&bracket(&x, &z).unwrap());
            let rhs = bracket(&realify(&x), &realify(&z)).unwrap();
            assert!(frob(&(lhs - rhs)) < 1e-10);
        }
    }

    #[test]
    fn realify_state_equivariance() {
        let psi = StateVector::new(nalgebra::DVector::from_vec(vec![ONE, ZERO])).unwrap();
        assert_eq!(realify_state(&psi).as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        let psi_i = StateVector::new(nalgebra::DVector::from_vec(vec![I, ZERO])).unwrap();
        assert_eq!(realify_state(&psi_i).as_slice(), &[0.0, 0.0, 1.0, 0.0]);

        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let x = random_skew_hermitian(3, &mut rng);
            let u = haar_random_unitary_from(&mut rng, 3);
            let psi = StateVector::new(u.column(0).into_owned()).unwrap();
            let lhs = realify(&x)
                * realify_state(&psi).map(|v| Complex64::new(v, 0.0));
            let img = &x * psi.amplitudes();
            let n = 3;
            let rhs = nalgebra::DVector::from_fn(2 * n, |i, _| {
                if i < n {
                    Complex64::new(img[i].re, 0.0)
                } else {
                    Complex64::new(img[i - n].im, 0.0)
                }
            });
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    fn haar_random_unitary_from(rng: &mut ChaCha8Rng, n: usize) -> CMat {
        crate::matcore::haar_random_unitary_with(n, rng)
    }

    #[test]
    fn small_time_examples() {
        let m = two_spin(1.0, 1.0, 1.1, Coupling::Ising).unwrap();
        let (label, notes) = small_time_report(&m).unwrap();
        assert_eq!(label, Obstruction::BNotTransitive);
        assert!(notes.iter().any(|s| s.contains("decidable")));

        // controls that generate su(2) on their own
        let m = single_spin(1.0);
        let (label, _) = small_time_report(&m).unwrap();
        assert_eq!(label, Obstruction::BTransitive);

        // single sigma_x control: dim B = 1
        let half = Complex64::new(0.5, 0.0);
        let m = SystemModel::new(
            pauli_z() * I * half,
            vec![crate::models::pauli_x() * I * half],
            "one-control",
        )
        .unwrap();
        let (label, _) = small_time_report(&m).unwrap();
        assert_eq!(label, Obstruction::BNotTransitive);
    }

    #[test]
    fn analyze_two_spin() {
        let m = two_spin(1.0, 1.0, 1.1, Coupling::Ising).unwrap();
        let r = analyze(&m).unwrap();
        assert_eq!(r.dim_l, 15);
        assert_eq!(r.dim_b, 6);
        assert!(r.oc && r.psc && r.esc && r.dmc);
        assert_eq!(r.oc_flavor, OcFlavor::SpecialUnitary);
        assert_eq!(r.classification, Classification::SuN);
        assert_eq!(r.small_time_obstruction, Obstruction::BNotTransitive);
    }

    #[test]
    fn analyze_trivial_and_sp_models() {
        let z = pauli_z() * I;
        let m = SystemModel::new(CMat::zeros(2, 2), vec![z], "phase-only").unwrap();
        let r = analyze(&m).unwrap();
        assert_eq!(r.dim_l, 1);
        assert!(!r.oc && !r.psc && !r.esc && !r.dmc);
        assert_eq!(r.classification, Classification::NotTransitive);

        // generators spanning the block-form algebra
        let basis = example_sp2_basis();
        let m = SystemModel::new(
            basis.elements()[0].clone(),
            basis.elements()[1..].to_vec(),
            "example-sp2",
        )
        .unwrap();
        let r = analyze(&m).unwrap();
        assert!(!r.oc && r.psc);
        assert_eq!(r.classification, Classification::SpConjugate);
    }

    #[test]
    fn analyze_invariant_under_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for n in [2usize, 3] {
            for _ in 0..10 {
                let gens: Vec<CMat> =
                    (0..2).map(|_| random_skew_hermitian(n, &mut rng)).collect();
                let m = SystemModel::new(gens[0].clone(), gens[1..].to_vec(), "rand").unwrap();
                let r = analyze(&m).unwrap();
                let u = haar_random_unitary_from(&mut rng, n);
                let rc = analyze_conjugated(&m, &u).unwrap();
                assert_eq!(r.dim_l, rc.dim_l);
                assert_eq!(r.oc, rc.oc);
                assert_eq!(r.psc, rc.psc);
                assert_eq!(r.classification, rc.classification);
            }
        }
    }

    #[test]
    fn orbit_equality_true_whenever_oc() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for n in [2usize, 3, 4] {
            let l = u_basis(n);
            assert!(test_oc(&l).0);
            for seed in 0..3u64 {
                let u = haar_random_unitary(n, seed + 100);
                let mut entries: Vec<f64> =
                    (0..n).map(|_| rand::Rng::random_range(&mut rng, 0.05..1.0)).collect();
                let total: f64 = entries.iter().sum();
                entries.iter_mut().for_each(|e| *e /= total);
                let diag = CMat::from_diagonal(&DVector::from_iterator(
                    n,
                    entries.iter().map(|&x| Complex64::new(x, 0.0)),
                ));
                let d = DensityMatrix::new(&u * diag * u.adjoint()).unwrap();
                assert!(orbit_equality(&l, &d).unwrap());
            }
        }
    }
}
