//! Delayed reaction-diffusion system descriptions.
//!
//! A system is `u_t - D u_xx = f(u, u_delayed)` with one discrete delay per
//! component. The reaction is supplied as an evaluator plus a declared
//! quasimonotone split; the split is sampled, not proved.

use crate::error::{CoreError, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// Reaction evaluator: `f(u, u_delayed, out)`. Must be pure.
pub type ReactionFn = Arc<dyn Fn(&[f64], &[f64], &mut [f64]) + Send + Sync>;

/// Declared monotonicity of each component's off-diagonal dependencies.
///
/// For component `i`, `inc_now[i]`/`dec_now[i]` partition the other
/// instantaneous arguments and `inc_delayed[i]`/`dec_delayed[i]` partition
/// all delayed arguments. Arguments a component does not depend on belong
/// in the `inc` sets by convention.
#[derive(Debug, Clone, Serialize)]
pub struct QuasimonotoneSplit {
    pub inc_now: Vec<Vec<usize>>,
    pub dec_now: Vec<Vec<usize>>,
    pub inc_delayed: Vec<Vec<usize>>,
    pub dec_delayed: Vec<Vec<usize>>,
}

impl QuasimonotoneSplit {
    /// All off-diagonal dependencies nondecreasing.
    pub fn ordered(n: usize) -> Self {
        QuasimonotoneSplit {
            inc_now: (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect(),
            dec_now: vec![Vec::new(); n],
            inc_delayed: (0..n).map(|_| (0..n).collect()).collect(),
            dec_delayed: vec![Vec::new(); n],
        }
    }

    pub fn is_ordered(&self) -> bool {
        self.dec_now.iter().all(|s| s.is_empty())
            && self.dec_delayed.iter().all(|s| s.is_empty())
    }

    /// Checks the partition cardinalities for dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let lens_ok = self.inc_now.len() == n
            && self.dec_now.len() == n
            && self.inc_delayed.len() == n
            && self.dec_delayed.len() == n;
        if !lens_ok {
            return Err(CoreError::Structural(
                "split has wrong number of components".into(),
            ));
        }
        for i in 0..n {
            let mut now: Vec<usize> = self.inc_now[i]
                .iter()
                .chain(&self.dec_now[i])
                .copied()
                .collect();
            now.sort_unstable();
            let expected: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            if now != expected {
                return Err(CoreError::Structural(format!(
                    "instantaneous split of component {} is not a partition of the off-diagonal indices",
                    i
                )));
            }
            let mut delayed: Vec<usize> = self.inc_delayed[i]
                .iter()
                .chain(&self.dec_delayed[i])
                .copied()
                .collect();
            delayed.sort_unstable();
            if delayed != (0..n).collect::<Vec<_>>() {
                return Err(CoreError::Structural(format!(
                    "delayed split of component {} is not a partition",
                    i
                )));
            }
        }
        Ok(())
    }
}

/// Full description of one delayed reaction-diffusion system.
#[derive(Clone)]
pub struct SystemSpec {
    pub n: usize,
    pub diffusion: Vec<f64>,
    pub delays: Vec<f64>,
    pub reaction: ReactionFn,
    pub split: QuasimonotoneSplit,
    pub zero_state: Vec<f64>,
    pub k_state: Vec<f64>,
    pub lipschitz: Vec<f64>,
}

impl fmt::Debug for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemSpec")
            .field("n", &self.n)
            .field("diffusion", &self.diffusion)
            .field("delays", &self.delays)
            .field("k_state", &self.k_state)
            .field("lipschitz", &self.lipschitz)
            .finish_non_exhaustive()
    }
}

impl SystemSpec {
    /// Structural checks: dimensions agree, parameters in range.
    pub fn check_structure(&self) -> Result<()> {
        let n = self.n;
        if n == 0 {
            return Err(CoreError::parameter("n", "must be at least 1"));
        }
        for (name, v) in [
            ("diffusion", &self.diffusion),
            ("delays", &self.delays),
            ("zero_state", &self.zero_state),
            ("k_state", &self.k_state),
            ("lipschitz", &self.lipschitz),
        ] {
            if v.len() != n {
                return Err(CoreError::Structural(format!(
                    "{} has length {}, expected {}",
                    name,
                    v.len(),
                    n
                )));
            }
        }
        if self.diffusion.iter().any(|&d| !(d > 0.0)) {
            return Err(CoreError::parameter("diffusion", "all d_i must be > 0"));
        }
        if self.delays.iter().any(|&t| !(t >= 0.0)) {
            return Err(CoreError::parameter("delays", "all tau_i must be >= 0"));
        }
        if self.lipschitz.iter().any(|&b| !(b > 0.0)) {
            return Err(CoreError::parameter("lipschitz", "all beta_i must be > 0"));
        }
        if self
            .k_state
            .iter()
            .zip(&self.zero_state)
            .any(|(&k, &z)| !(k > z))
        {
            return Err(CoreError::parameter("k_state", "K must exceed the zero state"));
        }
        self.split.validate(n)?;
        let out = self.eval_reaction(&self.zero_state, &self.zero_state);
        if out.len() != n {
            return Err(CoreError::Structural(format!(
                "reaction returned {} components, expected {}",
                out.len(),
                n
            )));
        }
        Ok(())
    }

    pub fn eval_reaction(&self, u: &[f64], u_delayed: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        (self.reaction)(u, u_delayed, &mut out);
        out
    }

    pub fn eval_reaction_into(&self, u: &[f64], u_delayed: &[f64], out: &mut [f64]) {
        (self.reaction)(u, u_delayed, out);
    }

    pub fn max_delay(&self) -> f64 {
        self.delays.iter().cloned().fold(0.0, f64::max)
    }
}

/// Equilibrium and split diagnostics for one system.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub residual_at_zero: Vec<f64>,
    pub residual_at_k: Vec<f64>,
    pub split_valid: bool,
    pub ordered: bool,
    pub pass: bool,
}

/// Checks the standing equilibrium hypothesis `f(0) = f(K) = 0` and the
/// split partition structure.
pub fn validate_system(spec: &SystemSpec, tol_eq: f64) -> Result<ValidationReport> {
    spec.check_structure()?;
    let f0 = spec.eval_reaction(&spec.zero_state, &spec.zero_state);
    let fk = spec.eval_reaction(&spec.k_state, &spec.k_state);
    let residual_at_zero: Vec<f64> = f0.iter().map(|v| v.abs()).collect();
    let residual_at_k: Vec<f64> = fk.iter().map(|v| v.abs()).collect();
    let split_valid = spec.split.validate(spec.n).is_ok();
    let pass = split_valid
        && residual_at_zero.iter().all(|&r| r <= tol_eq)
        && residual_at_k.iter().all(|&r| r <= tol_eq);
    Ok(ValidationReport {
        residual_at_zero,
        residual_at_k,
        split_valid,
        ordered: spec.split.is_ordered(),
        pass,
    })
}

/// One sampled contradiction between the declared split and the reaction.
#[derive(Debug, Clone, Serialize)]
pub struct SplitViolation {
    pub component: usize,
    pub argument: usize,
    pub delayed: bool,
    /// Sign the split declares: +1 nondecreasing, -1 nonincreasing.
    pub declared_sign: i8,
    pub observed_difference: f64,
    pub at_state: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    pub samples: usize,
    pub violations: Vec<SplitViolation>,
    pub lipschitz_warnings: Vec<usize>,
    pub pass: bool,
}

/// Samples partial differences of each `f_i` in each off-diagonal argument
/// at random states in the box and flags signs that contradict the split.
/// Differences below `tol_mono` in magnitude are consistent with either sign.
pub fn check_quasimonotone(
    spec: &SystemSpec,
    sample_count: usize,
    rng_seed: u64,
) -> Result<MonotonicityReport> {
    spec.check_structure()?;
    if sample_count == 0 {
        return Err(CoreError::parameter("sample_count", "must be >= 1"));
    }
    let tol_mono = 1e-10;
    let k_max = spec.k_state.iter().cloned().fold(0.0, f64::max);
    let h_fd = 1e-6 * k_max;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let n = spec.n;
    let mut violations = Vec::new();
    let mut lipschitz_defect = vec![0.0f64; n];

    for _ in 0..sample_count {
        let u: Vec<f64> = (0..n).map(|i| rng.gen::<f64>() * spec.k_state[i]).collect();
        let ud: Vec<f64> = (0..n).map(|i| rng.gen::<f64>() * spec.k_state[i]).collect();
        let base = spec.eval_reaction(&u, &ud);

        let mut probe = |i: usize, j: usize, delayed: bool, declared_sign: i8| {
            let mut u2 = u.clone();
            let mut ud2 = ud.clone();
            let slot = if delayed { &mut ud2[j] } else { &mut u2[j] };
            let step = h_fd.min(spec.k_state[j] - *slot).max(0.0);
            if step == 0.0 {
                return;
            }
            *slot += step;
            let bumped = spec.eval_reaction(&u2, &ud2);
            let diff = bumped[i] - base[i];
            lipschitz_defect[i] = lipschitz_defect[i].max(diff.abs() / step);
            if diff.abs() > tol_mono && (diff * declared_sign as f64) < 0.0 {
                violations.push(SplitViolation {
                    component: i,
                    argument: j,
                    delayed,
                    declared_sign,
                    observed_difference: diff,
                    at_state: u.clone(),
                });
            }
        };

        for i in 0..n {
            for &j in &spec.split.inc_now[i] {
                probe(i, j, false, 1);
            }
            for &j in &spec.split.dec_now[i] {
                probe(i, j, false, -1);
            }
            for &j in &spec.split.inc_delayed[i] {
                probe(i, j, true, 1);
            }
            for &j in &spec.split.dec_delayed[i] {
                probe(i, j, true, -1);
            }
        }
    }

    let lipschitz_warnings: Vec<usize> = (0..n)
        .filter(|&i| lipschitz_defect[i] > spec.lipschitz[i] * (1.0 + 1e-6))
        .collect();
    let pass = violations.is_empty();
    Ok(MonotonicityReport {
        samples: sample_count,
        violations,
        lipschitz_warnings,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Scalar logistic system, no delay dependence.
    pub fn logistic() -> SystemSpec {
        SystemSpec {
            n: 1,
            diffusion: vec![1.0],
            delays: vec![0.0],
            reaction: Arc::new(|u, _ud, out| {
                out[0] = u[0] * (1.0 - u[0]);
            }),
            split: QuasimonotoneSplit::ordered(1),
            zero_state: vec![0.0],
            k_state: vec![1.0],
            lipschitz: vec![1.0],
        }
    }

    #[test]
    fn logistic_passes_equilibrium_check() {
        let report = validate_system(&logistic(), 1e-12).unwrap();
        assert!(report.pass);
        assert_eq!(report.residual_at_zero, vec![0.0]);
        assert_eq!(report.residual_at_k, vec![0.0]);
        assert!(report.ordered);
    }

    #[test]
    fn scalar_split_check_is_vacuous() {
        // n = 1 has no off-diagonal instantaneous arguments; the delayed
        // argument is the component itself and the logistic ignores it.
        let report = check_quasimonotone(&logistic(), 50, 7).unwrap();
        assert!(report.pass);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn wrong_declared_sign_is_flagged() {
        let mut spec = logistic();
        spec.n = 2;
        spec.diffusion = vec![1.0, 1.0];
        spec.delays = vec![0.0, 0.0];
        spec.zero_state = vec![0.0, 0.0];
        spec.k_state = vec![1.0, 1.0];
        spec.lipschitz = vec![3.0, 3.0];
        // f_1 strictly increasing in u_2, but declared nonincreasing.
        spec.reaction = Arc::new(|u, _ud, out| {
            out[0] = u[1] - u[0];
            out[1] = u[0] * (1.0 - u[1]) - u[1] * (1.0 - u[1]);
        });
        let mut split = QuasimonotoneSplit::ordered(2);
        split.inc_now[0].clear();
        split.dec_now[0] = vec![1];
        spec.split = split;
        // This reaction does not vanish at K, so only run the split probe.
        let report = check_quasimonotone(&spec, 200, 42).unwrap();
        assert!(!report.pass);
        assert!(report
            .violations
            .iter()
            .all(|v| v.component == 0 && v.argument == 1 && !v.delayed));
    }

    #[test]
    fn structural_errors_are_reported() {
        let mut spec = logistic();
        spec.diffusion = vec![-1.0];
        assert!(matches!(
            validate_system(&spec, 1e-12),
            Err(CoreError::Parameter { .. })
        ));

        let mut spec = logistic();
        spec.reaction = Arc::new(|_u, _ud, _out| {});
        // evaluator writes nothing; output length still matches, so this is
        // fine structurally. A genuinely wrong arity cannot be expressed with
        // the slice interface, so check a length mismatch elsewhere instead.
        assert!(spec.check_structure().is_ok());

        let mut spec = logistic();
        spec.k_state = vec![0.0];
        assert!(spec.check_structure().is_err());
    }
}
