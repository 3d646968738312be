//! Time-domain readout physics: two-level quantum beats, Ramsey calibration
//! of the conditional delays and the joint-readout decoding of the fluxon
//! position.
//!
//! Qubits are decoherence-free and π/2 pulses are instantaneous; only the
//! free-evolution phase accrues.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::effective::TwoLevelModel;
use crate::units::phase_advance;
use crate::{Error, Result};

/// Well the fluxon starts in for [`beats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Initial {
    Left,
    Right,
}

/// Occupation probabilities of the two wells over time.
#[derive(Debug, Clone, PartialEq)]
pub struct BeatsTrace {
    pub times: Vec<f64>,
    pub p_left: Vec<f64>,
    pub p_right: Vec<f64>,
}

/// Closed-form evolution of `(Δ/2)σˣ + (ε/2)σᶻ` from a localized state,
/// sampled at `0, dt, 2dt, … ≤ t_max` (ns).
pub fn beats(m: &TwoLevelModel, t_max: f64, dt: f64, initial: Initial) -> Result<BeatsTrace> {
    if !(dt > 0.0 && t_max > 0.0 && dt.is_finite() && t_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("need positive dt and t_max, got {dt} and {t_max}")));
    }
    let gap = m.gap();
    let amplitude = if gap > 0.0 { (m.delta / gap).powi(2) } else { 0.0 };
    let steps = (t_max / dt + 1e-9).floor() as usize;
    let mut trace = BeatsTrace { times: Vec::new(), p_left: Vec::new(), p_right: Vec::new() };
    for i in 0..=steps {
        let t = i as f64 * dt;
        let moved = amplitude * (0.5 * phase_advance(gap, t)).sin().powi(2);
        let stay = 1.0 - moved;
        let (l, r) = match initial {
            Initial::Left => (stay, moved),
            Initial::Right => (moved, stay),
        };
        trace.times.push(t);
        trace.p_left.push(l);
        trace.p_right.push(r);
    }
    Ok(trace)
}

/// Conditional delay `T = n/δ = (n + 1/2)/(δ + J)` for one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayCalibration {
    pub n: u64,
    /// `T` in ns.
    pub delay: f64,
    pub detuning: f64,
    pub jz: f64,
    /// `|T(δ + J) − (n + 1/2)| / (n + 1/2)`.
    pub residual: f64,
}

/// Default relative tolerance on the second equality of the delay condition.
pub const DELAY_TOLERANCE: f64 = 1e-9;

/// Smallest `n ≥ 1` whose delay `n/δ` also makes the shifted branch advance
/// by a half-integer number of cycles. Exact when `δ = 2nJ`.
pub fn calibrate_delay(jz: f64, detuning: f64, tol: f64) -> Result<DelayCalibration> {
    if !(jz > 0.0 && detuning > 0.0 && jz.is_finite() && detuning.is_finite()) {
        return Err(Error::InvalidArgument(format!("need positive jz and detuning, got {jz} and {detuning}")));
    }
    // n·J/δ = 1/2 fixes n; only the nearest integer can qualify.
    let n = (detuning / (2.0 * jz)).round().max(1.0) as u64;
    let delay = n as f64 / detuning;
    let half = n as f64 + 0.5;
    let residual = (delay * (detuning + jz) - half).abs() / half;
    if residual > tol {
        return Err(Error::NoCommensurateDelay { n, residual });
    }
    Ok(DelayCalibration { n, delay, detuning, jz, residual })
}

/// Delays for both readout qubits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RamseyCalibration {
    pub f: DelayCalibration,
    pub m: DelayCalibration,
}

impl RamseyCalibration {
    pub fn new(jz_f: f64, jz_m: f64, detuning_f: f64, detuning_m: f64) -> Result<Self> {
        Ok(RamseyCalibration {
            f: calibrate_delay(jz_f, detuning_f, DELAY_TOLERANCE)?,
            m: calibrate_delay(jz_m, detuning_m, DELAY_TOLERANCE)?,
        })
    }

    /// Detunings `δ = 2J` for both qubits, which give `n = 1`.
    pub fn at_double_shift(jz_f: f64, jz_m: f64) -> Result<Self> {
        Self::new(jz_f, jz_m, 2.0 * jz_f, 2.0 * jz_m)
    }
}

/// Excited-state population after the Ramsey pair, `sin²(π(δ + shift)Δt)`,
/// with `shift = jz` when the fluxon shifts this qubit.
///
/// The phase convention puts an unshifted qubit back in `|0⟩` at every
/// multiple of `1/δ`, so zero delay leaves the qubit in `|0⟩`.
pub fn ramsey_fringe(detuning: f64, jz: f64, shifted: bool, delays: &[f64]) -> Vec<f64> {
    let f = detuning + if shifted { jz } else { 0.0 };
    delays.iter().map(|&t| (0.5 * phase_advance(f, t)).sin().powi(2)).collect()
}

/// Fluxon cell, or `Invalid` for a readout no single fluxon can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Position {
    Left,
    Center,
    Right,
    Invalid,
}

impl Position {
    pub const CELLS: [Position; 3] = [Position::Left, Position::Center, Position::Right];

    /// Whether the fluxon here shifts qubit `f` and qubit `m`.
    pub fn shifts(self) -> (bool, bool) {
        match self {
            Position::Right => (true, false),
            Position::Left => (false, true),
            _ => (false, false),
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Position::Left => "L",
            Position::Center => "C",
            Position::Right => "R",
            Position::Invalid => "invalid",
        })
    }
}

/// Joint readout `(f, m)` to position: `(0,0) → C`, `(1,0) → R`, `(0,1) → L`.
pub fn decode_position(f: bool, m: bool) -> Position {
    match (f, m) {
        (false, false) => Position::Center,
        (true, false) => Position::Right,
        (false, true) => Position::Left,
        (true, true) => Position::Invalid,
    }
}

/// Everything [`run_protocol`] needs besides the true position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolScenario {
    pub calibration: RamseyCalibration,
    /// Independent probability of flipping each measured bit.
    pub flip_noise: f64,
}

/// Shot statistics of one protocol run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolOutcome {
    pub shots: u64,
    /// Counts of `(f, m)` readouts at index `2f + m`.
    pub histogram: [u64; 4],
    /// Decoded counts in the order L, C, R, invalid.
    pub decoded: [u64; 4],
    pub correct: u64,
}

impl ProtocolOutcome {
    pub fn accuracy(&self) -> f64 {
        self.correct as f64 / self.shots as f64
    }
}

/// Shots per random stream; stream `k` serves shots `k·SHOT_CHUNK ..`.
pub const SHOT_CHUNK: u64 = 1024;

/// Samples `shots` joint readouts for a fluxon at `truth`.
///
/// Each qubit reads `1` with the Ramsey population at its calibrated delay,
/// then flips with probability `flip_noise`. Shot `s` draws from ChaCha8
/// stream `s / SHOT_CHUNK` of `seed`, so chunks can be generated
/// independently and the result is reproducible bit for bit.
pub fn run_protocol(sc: &ProtocolScenario, truth: Position, shots: u64, seed: u64) -> Result<ProtocolOutcome> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&sc.flip_noise) {
        return Err(Error::InvalidArgument(format!("flip noise {} outside [0, 1]", sc.flip_noise)));
    }
    if truth == Position::Invalid {
        return Err(Error::InvalidArgument("true position must be a cell".into()));
    }
    let (sf, sm) = truth.shifts();
    let c = &sc.calibration;
    let pf = ramsey_fringe(c.f.detuning, c.f.jz, sf, &[c.f.delay])[0];
    let pm = ramsey_fringe(c.m.detuning, c.m.jz, sm, &[c.m.delay])[0];
    let mut out = ProtocolOutcome { shots, histogram: [0; 4], decoded: [0; 4], correct: 0 };
    let mut done = 0;
    let mut stream = 0;
    while done < shots {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let n = SHOT_CHUNK.min(shots - done);
        for _ in 0..n {
            let mut bit = |p: f64| {
                let b = rng.random::<f64>() < p;
                b ^ (rng.random::<f64>() < sc.flip_noise)
            };
            let f = bit(pf);
            let m = bit(pm);
            out.histogram[2 * usize::from(f) + usize::from(m)] += 1;
            let pos = decode_position(f, m);
            out.decoded[pos as usize] += 1;
            if pos == truth {
                out.correct += 1;
            }
        }
        done += n;
        stream += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CircuitParams;
    use crate::effective::two_level_fit;

    fn model(delta: f64, eps: f64) -> TwoLevelModel {
        TwoLevelModel { delta, epsilon: eps, flux_offset: 0.0, phi_delta_ref: 1.0 }
    }

    #[test]
    fn resonant_half_period_transfers_fully() {
        let d = 0.146;
        let t = beats(&model(d, 0.0), 1.0 / (2.0 * d), 1.0 / (2.0 * d), Initial::Left).unwrap();
        assert_eq!(t.p_right[0], 0.0);
        assert!((t.p_right[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn detuned_amplitude() {
        let d = 0.1;
        let t = beats(&model(d, 3.0 * d), 100.0, 0.01, Initial::Left).unwrap();
        let peak = t.p_right.iter().cloned().fold(0.0, f64::max);
        assert!((peak - 0.1).abs() < 1e-6);
        for (l, r) in t.p_left.iter().zip(&t.p_right) {
            assert!((l + r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn beats_reject_bad_steps() {
        assert!(beats(&model(0.1, 0.0), 1.0, 0.0, Initial::Left).is_err());
        let p = CircuitParams::two_cell(2.0, 0.5, 0.15).unwrap();
        let m = two_level_fit(&p, 1.0, 0.1, 0.4).unwrap();
        let t = beats(&m, 10.0, 0.5, Initial::Right).unwrap();
        assert_eq!(t.p_left[0], 0.0);
        assert_eq!(t.times.len(), 21);
    }

    #[test]
    fn delay_at_double_shift() {
        let c = calibrate_delay(0.0073, 0.0146, DELAY_TOLERANCE).unwrap();
        assert_eq!(c.n, 1);
        assert!((c.delay - 1.0 / 0.0146).abs() < 1e-9);
        assert!((c.delay - 68.49).abs() < 0.01);
        let c = calibrate_delay(0.0061, 0.0122, DELAY_TOLERANCE).unwrap();
        assert!((c.delay - 81.97).abs() < 0.01);
    }

    #[test]
    fn higher_index_and_incommensurate() {
        let c = calibrate_delay(0.001, 0.006, DELAY_TOLERANCE).unwrap();
        assert_eq!(c.n, 3);
        assert!(matches!(calibrate_delay(0.001, 0.0065, DELAY_TOLERANCE), Err(Error::NoCommensurateDelay { .. })));
        assert!(calibrate_delay(0.0, 0.01, DELAY_TOLERANCE).is_err());
    }

    #[test]
    fn fringe_endpoints() {
        let c = calibrate_delay(0.0073, 0.0146, DELAY_TOLERANCE).unwrap();
        let off = ramsey_fringe(c.detuning, c.jz, false, &[0.0, c.delay]);
        let on = ramsey_fringe(c.detuning, c.jz, true, &[c.delay]);
        assert_eq!(off[0], 0.0);
        assert!(off[1] < 1e-20);
        assert!((on[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decode_is_inverse_of_shifts() {
        for p in Position::CELLS {
            let (f, m) = p.shifts();
            assert_eq!(decode_position(f, m), p);
        }
        assert_eq!(decode_position(true, true), Position::Invalid);
    }

    #[test]
    fn seeded_runs_repeat() {
        let sc = ProtocolScenario {
            calibration: RamseyCalibration::at_double_shift(0.0073, 0.0061).unwrap(),
            flip_noise: 0.1,
        };
        let a = run_protocol(&sc, Position::Right, 5000, 42).unwrap();
        let b = run_protocol(&sc, Position::Right, 5000, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, run_protocol(&sc, Position::Right, 5000, 43).unwrap());
    }
}
