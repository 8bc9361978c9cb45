use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalError {
    #[error("signal breakpoint times must be finite, non-negative and strictly increasing")]
    BadTimes,
    #[error("signal quality must be finite")]
    BadQuality,
}

/// Piecewise-linear signal quality over time, `q ∈ [0, 1]`.
///
/// Before the first breakpoint the first value holds, after the last the
/// last value holds. An empty profile is a perfect signal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct SignalProfile {
    points: Vec<(f64, f64)>,
}

impl Default for SignalProfile {
    fn default() -> Self {
        SignalProfile::constant(1.0)
    }
}

impl SignalProfile {
    pub fn constant(q: f64) -> Self {
        SignalProfile { points: vec![(0.0, q.clamp(0.0, 1.0))] }
    }

    /// Builds a profile from `(t_ms, q)` breakpoints; qualities are clamped to `[0, 1]`.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, SignalError> {
        if points.iter().any(|&(_, q)| !q.is_finite()) {
            return Err(SignalError::BadQuality);
        }
        let times_ok = points.iter().all(|&(t, _)| t.is_finite() && t >= 0.0)
            && points.windows(2).all(|w| w[0].0 < w[1].0);
        if !times_ok {
            return Err(SignalError::BadTimes);
        }
        Ok(SignalProfile { points: points.into_iter().map(|(t, q)| (t, q.clamp(0.0, 1.0))).collect() })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn quality_at(&self, t_ms: f64) -> f64 {
        let p = &self.points;
        match p.len() {
            0 => 1.0,
            _ if t_ms <= p[0].0 => p[0].1,
            n if t_ms >= p[n - 1].0 => p[n - 1].1,
            _ => {
                let i = p.partition_point(|&(t, _)| t <= t_ms);
                let (t0, q0) = p[i - 1];
                let (t1, q1) = p[i];
                q0 + (q1 - q0) * (t_ms - t0) / (t1 - t0)
            }
        }
    }

    /// Time average of the quality over `[from_ms, to_ms]`.
    pub fn mean_over(&self, from_ms: f64, to_ms: f64) -> f64 {
        if to_ms <= from_ms {
            return self.quality_at(from_ms);
        }
        let mut cuts = vec![from_ms];
        cuts.extend(self.points.iter().map(|&(t, _)| t).filter(|&t| t > from_ms && t < to_ms));
        cuts.push(to_ms);
        let area: f64 = cuts
            .windows(2)
            .map(|w| 0.5 * (self.quality_at(w[0]) + self.quality_at(w[1])) * (w[1] - w[0]))
            .sum();
        area / (to_ms - from_ms)
    }
}

impl TryFrom<Vec<(f64, f64)>> for SignalProfile {
    type Error = SignalError;
    fn try_from(points: Vec<(f64, f64)>) -> Result<Self, Self::Error> {
        SignalProfile::new(points)
    }
}

impl From<SignalProfile> for Vec<(f64, f64)> {
    fn from(p: SignalProfile) -> Self {
        p.points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_and_holds_ends() {
        let s = SignalProfile::new(vec![(100.0, 1.0), (200.0, 0.5)]).unwrap();
        assert_eq!(s.quality_at(0.0), 1.0);
        assert_eq!(s.quality_at(150.0), 0.75);
        assert_eq!(s.quality_at(1e9), 0.5);
    }

    #[test]
    fn clamps_quality() {
        let s = SignalProfile::new(vec![(0.0, 1.7), (10.0, -0.2)]).unwrap();
        assert_eq!(s.quality_at(0.0), 1.0);
        assert_eq!(s.quality_at(10.0), 0.0);
    }

    #[test]
    fn rejects_unordered_times() {
        assert_eq!(SignalProfile::new(vec![(5.0, 1.0), (5.0, 0.2)]), Err(SignalError::BadTimes));
    }

    #[test]
    fn mean_of_linear_ramp() {
        let s = SignalProfile::new(vec![(0.0, 0.0), (100.0, 1.0)]).unwrap();
        assert!((s.mean_over(0.0, 100.0) - 0.5).abs() < 1e-12);
        assert!((s.mean_over(0.0, 200.0) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn serde_as_pairs() {
        let s: SignalProfile = serde_json::from_str("[[0, 0.9], [50, 0.3]]").unwrap();
        assert!((s.quality_at(25.0) - 0.6).abs() < 1e-12);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[[0.0,0.9],[50.0,0.3]]");
    }
}
