//! Rigid-body state and control-surface vectors.

use nalgebra::SVector;

/// Nine-state rigid-body state in wind/body axes.
///
/// Translational motion is carried in wind axes (airspeed, sideslip, angle of
/// attack), attitude as Euler angles, and angular rate in body axes. All
/// angles are radians, rates rad/s, airspeed m/s.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RigidBodyState {
    /// True airspeed, m/s.
    pub airspeed: f64,
    /// Sideslip angle, rad.
    pub sideslip: f64,
    /// Angle of attack, rad.
    pub alpha: f64,
    /// Roll attitude, rad.
    pub roll: f64,
    /// Pitch attitude, rad.
    pub pitch: f64,
    /// Yaw attitude, rad.
    pub yaw: f64,
    /// Body roll rate, rad/s.
    pub roll_rate: f64,
    /// Body pitch rate, rad/s.
    pub pitch_rate: f64,
    /// Body yaw rate, rad/s.
    pub yaw_rate: f64,
}

/// Canonical ordering of the nine states used by vector conversions and by
/// the nonlinear integrator: V, beta, alpha, phi, theta, psi, p, q, r.
pub const STATE_LABELS: [&str; 9] = [
    "airspeed",
    "sideslip",
    "alpha",
    "roll",
    "pitch",
    "yaw",
    "roll_rate",
    "pitch_rate",
    "yaw_rate",
];

impl RigidBodyState {
    /// Packs the state into a vector in the canonical ordering.
    pub fn to_vector(&self) -> SVector<f64, 9> {
        SVector::<f64, 9>::from([
            self.airspeed,
            self.sideslip,
            self.alpha,
            self.roll,
            self.pitch,
            self.yaw,
            self.roll_rate,
            self.pitch_rate,
            self.yaw_rate,
        ])
    }

    /// Unpacks a vector in the canonical ordering.
    pub fn from_vector(v: &SVector<f64, 9>) -> Self {
        Self {
            airspeed: v[0],
            sideslip: v[1],
            alpha: v[2],
            roll: v[3],
            pitch: v[4],
            yaw: v[5],
            roll_rate: v[6],
            pitch_rate: v[7],
            yaw_rate: v[8],
        }
    }
}

/// Control-surface deflections, rad. Positive senses follow the usual
/// right-hand conventions (elevator trailing edge down, etc.).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlSurfaces {
    /// Aileron deflection, rad.
    pub aileron: f64,
    /// Elevator deflection, rad.
    pub elevator: f64,
    /// Rudder deflection, rad.
    pub rudder: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_round_trip() {
        let state = RigidBodyState {
            airspeed: 20.0,
            sideslip: 0.01,
            alpha: -0.007,
            roll: 0.1,
            pitch: -0.08,
            yaw: 0.5,
            roll_rate: 0.2,
            pitch_rate: -0.3,
            yaw_rate: 0.04,
        };
        let round = RigidBodyState::from_vector(&state.to_vector());
        assert_eq!(state, round);
    }
}
