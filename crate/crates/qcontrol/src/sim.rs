//! Time-domain propagation under piecewise-constant controls. Each segment
//! is propagated exactly via the skew-Hermitian matrix exponential, so the
//! only error source is floating-point rounding.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::SystemModel;
use crate::error::{Error, Result};
use crate::matcore::{expm_skew, CMat, StateVector};

/// Probe defaults: controls are unconstrained physically, these bound the
/// random search only.
pub const DEFAULT_U_MAX: f64 = 10.0;
pub const DEFAULT_T_MAX: f64 = 1.0;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Segment {
    pub dt: f64,
    pub u: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PulseSequence {
    pub segments: Vec<Segment>,
}

impl PulseSequence {
    pub fn validate(&self, m: usize) -> Result<()> {
        for s in &self.segments {
            if !(s.dt > 0.0) || !s.dt.is_finite() {
                return Err(Error::Parameter(format!("segment duration {} must be > 0", s.dt)));
            }
            if s.u.len() != m {
                return Err(Error::Shape(format!(
                    "segment has {} amplitudes, system has {m} controls",
                    s.u.len()
                )));
            }
            if s.u.iter().any(|a| !a.is_finite()) {
                return Err(Error::Parameter("segment amplitude is not finite".into()));
            }
        }
        Ok(())
    }
}

/// Ordered product of segment propagators, later segments on the left;
/// X(0) = I.
pub fn propagate_operator(model: &SystemModel, pulses: &PulseSequence) -> Result<CMat> {
    pulses.validate(model.controls().len())?;
    let n = model.n();
    let mut x = CMat::identity(n, n);
    for seg in &pulses.segments {
        let mut h = model.drift().clone();
        for (b, &a) in model.controls().iter().zip(seg.u.iter()) {
            h += b * Complex64::new(a, 0.0);
        }
        let step = expm_skew(&(h * Complex64::new(seg.dt, 0.0)))?;
        x = step * x;
    }
    Ok(x)
}

/// X(t) |psi_0>.
pub fn propagate_state(
    model: &SystemModel,
    pulses: &PulseSequence,
    psi0: &StateVector,
) -> Result<StateVector> {
    if psi0.n() != model.n() {
        return Err(Error::Shape(format!(
            "state dimension {} does not match system dimension {}",
            psi0.n(),
            model.n()
        )));
    }
    let x = propagate_operator(model, pulses)?;
    let out = &x * psi0.amplitudes();
    // unitary propagation; renormalization would mask a bug
    StateVector::new(out)
}

/// Best fidelity |<target|psi_out>| over random pulse sequences starting from
/// e_1, including the zero-segment baseline. Per-trial RNG streams are
/// derived from (seed, trial), so the result is deterministic and
/// order-independent.
pub fn random_reach_probe(
    model: &SystemModel,
    target: &StateVector,
    trials: usize,
    segments_per_trial: usize,
    seed: u64,
) -> Result<f64> {
    if trials < 1 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    if target.n() != model.n() {
        return Err(Error::Shape("target dimension mismatch".into()));
    }
    let start = StateVector::basis(model.n(), 0);
    let m = model.controls().len();
    let mut best = target.fidelity(&start);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64 + 1);
        let segments = (0..segments_per_trial)
            .map(|_| Segment {
                dt: rng.random_range(f64::EPSILON..=DEFAULT_T_MAX),
                u: (0..m)
                    .map(|_| rng.random_range(-DEFAULT_U_MAX..=DEFAULT_U_MAX))
                    .collect(),
            })
            .collect();
        let psi = propagate_state(model, &PulseSequence { segments }, &start)?;
        best = best.max(target.fidelity(&psi));
    }
    Ok(best)
}

/// Match up to a global phase: |<target|psi_out>| = 1 within 1e-9. Returns
/// the phase (0 when there is no match).
pub fn equivalent_state_check(psi_out: &StateVector, target: &StateVector) -> Result<(bool, f64)> {
    if psi_out.n() != target.n() {
        return Err(Error::Shape("state dimension mismatch".into()));
    }
    let c = target.amplitudes().dotc(psi_out.amplitudes());
    let matched = (c.norm() - 1.0).abs() <= 1e-9;
    let phase = if matched { c.arg() } else { 0.0 };
    Ok((matched, phase))
}
