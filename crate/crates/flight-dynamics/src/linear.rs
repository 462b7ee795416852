//! Small-perturbation LTI models of the decoupled longitudinal and lateral
//! dynamics, with a parameter map locating every free derivative inside the
//! matrices.
//!
//! The matrices are affine in the free derivatives: each [`ParameterEntry`]
//! records the slot and linear scale through which one named derivative
//! enters, so estimation and experiment-design code can move parameters
//! without rebuilding the model from scratch. Gravity and kinematic entries
//! are never in the map.

use nalgebra::DMatrix;

use crate::derivatives::DimensionalDerivatives;
use crate::error::DynamicsError;
use crate::trim::TrimCondition;

/// Which matrix a parameter entry points into.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixSlot {
    A,
    B,
}

/// Location and linear scale of one free derivative inside (A, B):
/// `matrix[row, col] = scale * parameter + fixed offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterEntry {
    pub name: String,
    /// Nominal parameter value the model was built with.
    pub value: f64,
    pub matrix: MatrixSlot,
    pub row: usize,
    pub col: usize,
    pub scale: f64,
}

/// Role of a state or input variable, used to attach the right envelope
/// bounds and to keep deflection states out of the measurement set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariableKind {
    /// Rigid-body perturbation state.
    BodyState,
    /// Control-surface deflection carried as a state after rate augmentation.
    DeflectionState,
    /// Control-surface deflection commanded directly as an input.
    ControlInput,
    /// Control-surface deflection rate input of the augmented model.
    RateInput,
}

/// Convention used for the gravity and kinematic coupling slots of the
/// 4-state models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KinematicCoupling {
    /// Linearization about the actual trim attitude: gravity slots carry the
    /// trim pitch angle and the sideslip row keeps the angle-of-attack and
    /// side-force rate couplings. This is the flavor estimation and
    /// experiment design run on.
    #[default]
    AtTrim,
    /// Classic wings-level textbook simplification: kinematic couplings
    /// evaluated at zero pitch attitude, the side-force rate terms dropped
    /// from the sideslip row, and the gravity projection dropped from the
    /// angle-of-attack row. Use this flavor for handbook-style modal
    /// characteristics; its parameter map omits the yaw-rate side-force
    /// derivative because that slot collapses to the pure kinematic -1.
    LevelFlightClassic,
}

/// State-space model with parameter map. Outputs are the states themselves;
/// measurement selection is a downstream concern.
#[derive(Debug, Clone, PartialEq)]
pub struct LtiModel {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub state_names: Vec<String>,
    pub input_names: Vec<String>,
    pub state_kinds: Vec<VariableKind>,
    pub input_kinds: Vec<VariableKind>,
    pub parameter_map: Vec<ParameterEntry>,
}

impl LtiModel {
    /// Number of states.
    pub fn state_count(&self) -> usize {
        self.a.nrows()
    }

    /// Number of inputs.
    pub fn input_count(&self) -> usize {
        self.b.ncols()
    }

    /// Distinct parameter names in map order.
    pub fn parameter_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = Vec::new();
        for entry in &self.parameter_map {
            if !names.contains(&entry.name.as_str()) {
                names.push(&entry.name);
            }
        }
        names
    }

    /// Nominal value of a mapped parameter.
    pub fn parameter_value(&self, name: &str) -> Result<f64, DynamicsError> {
        self.parameter_map
            .iter()
            .find(|e| e.name == name)
            .map(|e| e.value)
            .ok_or_else(|| DynamicsError::UnknownParameter {
                name: name.to_string(),
            })
    }

    /// Moves one mapped parameter to a new value, updating every slot it
    /// occupies through its affine scale.
    pub fn set_parameter(&mut self, name: &str, value: f64) -> Result<(), DynamicsError> {
        let mut found = false;
        for entry in &mut self.parameter_map {
            if entry.name == name {
                let delta = entry.scale * (value - entry.value);
                match entry.matrix {
                    MatrixSlot::A => self.a[(entry.row, entry.col)] += delta,
                    MatrixSlot::B => self.b[(entry.row, entry.col)] += delta,
                }
                entry.value = value;
                found = true;
            }
        }
        if found {
            Ok(())
        } else {
            Err(DynamicsError::UnknownParameter {
                name: name.to_string(),
            })
        }
    }

    /// Index of a state by name.
    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|s| s == name)
    }
}

/// Builds the 4-state longitudinal model: states (airspeed, alpha, pitch,
/// pitch_rate), input (elevator).
///
/// Layout: force rows carry the dimensional derivatives, the pitch row is the
/// pure kinematic `theta_dot = q`, and the moment row the pitch-moment
/// derivatives. The gravity slots are `-g*cos(theta_e)` in the airspeed row
/// and `-g*sin(theta_e)/V_e` in the angle-of-attack row (every entry of that
/// row is per unit airspeed).
pub fn build_longitudinal_lti(
    derivs: &DimensionalDerivatives,
    trim: &TrimCondition,
    gravity: f64,
    coupling: KinematicCoupling,
) -> LtiModel {
    let lon = &derivs.longitudinal;
    let v = trim.airspeed;
    let (grav_v, grav_alpha) = match coupling {
        KinematicCoupling::AtTrim => (
            -gravity * trim.pitch.cos(),
            -gravity * trim.pitch.sin() / v,
        ),
        KinematicCoupling::LevelFlightClassic => (-gravity, 0.0),
    };

    let a = DMatrix::from_row_slice(
        4,
        4,
        &[
            lon.x_v, lon.x_alpha, grav_v, lon.x_q, //
            lon.z_v, lon.z_alpha_over_v, grav_alpha, lon.z_q, //
            0.0, 0.0, 0.0, 1.0, //
            lon.m_v, lon.m_alpha, 0.0, lon.m_q,
        ],
    );
    let b = DMatrix::from_row_slice(4, 1, &[lon.x_elevator, lon.z_elevator_over_v, 0.0, lon.m_elevator]);

    let entry = |name: &str, value: f64, matrix: MatrixSlot, row: usize, col: usize| ParameterEntry {
        name: name.to_string(),
        value,
        matrix,
        row,
        col,
        scale: 1.0,
    };
    let parameter_map = vec![
        entry("X_V", lon.x_v, MatrixSlot::A, 0, 0),
        entry("X_alpha", lon.x_alpha, MatrixSlot::A, 0, 1),
        entry("X_q", lon.x_q, MatrixSlot::A, 0, 3),
        entry("X_deltae", lon.x_elevator, MatrixSlot::B, 0, 0),
        entry("Z_V", lon.z_v, MatrixSlot::A, 1, 0),
        entry("Z_alpha_over_V", lon.z_alpha_over_v, MatrixSlot::A, 1, 1),
        entry("Z_q", lon.z_q, MatrixSlot::A, 1, 3),
        entry("Z_deltae_over_V", lon.z_elevator_over_v, MatrixSlot::B, 1, 0),
        entry("M_alpha", lon.m_alpha, MatrixSlot::A, 3, 1),
        entry("M_q", lon.m_q, MatrixSlot::A, 3, 3),
        entry("M_deltae", lon.m_elevator, MatrixSlot::B, 3, 0),
    ];

    LtiModel {
        a,
        b,
        state_names: vec![
            "airspeed".into(),
            "alpha".into(),
            "pitch".into(),
            "pitch_rate".into(),
        ],
        input_names: vec!["elevator".into()],
        state_kinds: vec![VariableKind::BodyState; 4],
        input_kinds: vec![VariableKind::ControlInput],
        parameter_map,
    }
}

/// Builds the 4-state lateral model: states (sideslip, roll, roll_rate,
/// yaw_rate), inputs (aileron, rudder). Heading is dropped.
///
/// The sideslip row is written per unit airspeed, so its gravity slot is
/// `g*cos(theta_e)/V_e` and the angular-rate slots combine the side-force
/// derivatives with the kinematic projections of the trim angle of attack.
pub fn build_lateral_lti(
    derivs: &DimensionalDerivatives,
    trim: &TrimCondition,
    gravity: f64,
    coupling: KinematicCoupling,
) -> LtiModel {
    let lat = &derivs.lateral;
    let v = trim.airspeed;
    let (grav_slot, p_slot, r_slot, tan_slot) = match coupling {
        KinematicCoupling::AtTrim => (
            gravity * trim.pitch.cos() / v,
            lat.y_p / v + trim.alpha.sin(),
            lat.y_r / v - trim.alpha.cos(),
            trim.pitch.tan(),
        ),
        KinematicCoupling::LevelFlightClassic => (gravity / v, 0.0, -1.0, 0.0),
    };

    let a = DMatrix::from_row_slice(
        4,
        4,
        &[
            lat.y_beta_over_v, grav_slot, p_slot, r_slot, //
            0.0, 0.0, 1.0, tan_slot, //
            lat.l_beta, 0.0, lat.l_p, lat.l_r, //
            lat.n_beta, 0.0, lat.n_p, lat.n_r,
        ],
    );
    let b = DMatrix::from_row_slice(
        4,
        2,
        &[
            lat.y_aileron_over_v, lat.y_rudder_over_v, //
            0.0, 0.0, //
            lat.l_aileron, lat.l_rudder, //
            lat.n_aileron, lat.n_rudder,
        ],
    );

    let entry = |name: &str, value: f64, matrix: MatrixSlot, row: usize, col: usize, scale: f64| {
        ParameterEntry {
            name: name.to_string(),
            value,
            matrix,
            row,
            col,
            scale,
        }
    };
    let mut parameter_map = vec![entry(
        "Y_beta_over_V",
        lat.y_beta_over_v,
        MatrixSlot::A,
        0,
        0,
        1.0,
    )];
    // In the classic flavor the yaw-rate slot is the pure kinematic -1 and
    // carries no derivative.
    if coupling == KinematicCoupling::AtTrim {
        parameter_map.push(entry("Y_r", lat.y_r, MatrixSlot::A, 0, 3, 1.0 / v));
    }
    parameter_map.extend([
        entry("Y_deltaa_over_V", lat.y_aileron_over_v, MatrixSlot::B, 0, 0, 1.0),
        entry("Y_deltar_over_V", lat.y_rudder_over_v, MatrixSlot::B, 0, 1, 1.0),
        entry("Lb_prime", lat.l_beta, MatrixSlot::A, 2, 0, 1.0),
        entry("Lp_prime", lat.l_p, MatrixSlot::A, 2, 2, 1.0),
        entry("Lr_prime", lat.l_r, MatrixSlot::A, 2, 3, 1.0),
        entry("Lda_prime", lat.l_aileron, MatrixSlot::B, 2, 0, 1.0),
        entry("Ldr_prime", lat.l_rudder, MatrixSlot::B, 2, 1, 1.0),
        entry("Nb_prime", lat.n_beta, MatrixSlot::A, 3, 0, 1.0),
        entry("Np_prime", lat.n_p, MatrixSlot::A, 3, 2, 1.0),
        entry("Nr_prime", lat.n_r, MatrixSlot::A, 3, 3, 1.0),
        entry("Nda_prime", lat.n_aileron, MatrixSlot::B, 3, 0, 1.0),
        entry("Ndr_prime", lat.n_rudder, MatrixSlot::B, 3, 1, 1.0),
    ]);

    LtiModel {
        a,
        b,
        state_names: vec![
            "sideslip".into(),
            "roll".into(),
            "roll_rate".into(),
            "yaw_rate".into(),
        ],
        input_names: vec!["aileron".into(), "rudder".into()],
        state_kinds: vec![VariableKind::BodyState; 4],
        input_kinds: vec![VariableKind::ControlInput; 2],
        parameter_map,
    }
}

/// Augments a model with actuator-rate inputs: every control deflection
/// becomes an integrator state and the new inputs are the deflection rates.
///
/// The parameter map is re-pointed: former B-matrix slots become A-matrix
/// slots in the new deflection-state columns. Deflection states keep their
/// surface name and are tagged [`VariableKind::DeflectionState`] so bounds
/// and measurement selection treat them correctly.
pub fn augment_actuator_rate(model: &LtiModel) -> LtiModel {
    let n = model.state_count();
    let m = model.input_count();
    let total = n + m;

    let mut a = DMatrix::<f64>::zeros(total, total);
    a.view_mut((0, 0), (n, n)).copy_from(&model.a);
    a.view_mut((0, n), (n, m)).copy_from(&model.b);
    let mut b = DMatrix::<f64>::zeros(total, m);
    b.view_mut((n, 0), (m, m))
        .copy_from(&DMatrix::<f64>::identity(m, m));

    let mut state_names = model.state_names.clone();
    state_names.extend(model.input_names.iter().cloned());
    let input_names: Vec<String> = model
        .input_names
        .iter()
        .map(|name| format!("{name}_rate"))
        .collect();

    let mut state_kinds = model.state_kinds.clone();
    state_kinds.extend(std::iter::repeat(VariableKind::DeflectionState).take(m));
    let input_kinds = vec![VariableKind::RateInput; m];

    let parameter_map = model
        .parameter_map
        .iter()
        .map(|entry| {
            let mut entry = entry.clone();
            if entry.matrix == MatrixSlot::B {
                entry.matrix = MatrixSlot::A;
                entry.col += n;
            }
            entry
        })
        .collect();

    LtiModel {
        a,
        b,
        state_names,
        input_names,
        state_kinds,
        input_kinds,
        parameter_map,
    }
}
