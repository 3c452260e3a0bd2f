//! JSON state files:
//!
//! ```json
//! { "shape": [m, n], "kind": "pure" | "mixed", "data": [[re, im], ...] }
//! ```
//!
//! Pure states list `m*n` amplitudes; mixed states list the `(m n)^2`
//! matrix entries in row-major order.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{DensityMatrix, PureState};
use crate::error::{QcError, Result};
use crate::matrix::{BipartiteShape, ComplexMatrix};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub shape: [usize; 2],
    pub kind: StateKind,
    pub data: Vec<[f64; 2]>,
}

#[derive(Debug, Clone)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn shape(&self) -> BipartiteShape {
        match self {
            State::Pure(p) => p.shape(),
            State::Mixed(r) => r.shape().expect("state files always carry a shape"),
        }
    }

    /// Pure states are promoted to their projector.
    pub fn into_density(self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.projector(),
            State::Mixed(r) => r,
        }
    }
}

impl StateFile {
    /// Parses JSON; syntax and schema errors report line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QcError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file serializes")
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let s = psi.shape();
        StateFile {
            shape: [s.dim_a(), s.dim_b()],
            kind: StateKind::Pure,
            data: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        let s = rho.require_shape()?;
        let m = rho.matrix();
        let d = m.nrows();
        let data = (0..d)
            .flat_map(|r| (0..d).map(move |c| (r, c)))
            .map(|(r, c)| [m[(r, c)].re, m[(r, c)].im])
            .collect();
        Ok(StateFile {
            shape: [s.dim_a(), s.dim_b()],
            kind: StateKind::Mixed,
            data,
        })
    }

    /// Validates the payload and builds the state. Pure amplitudes must
    /// already be normalized.
    pub fn into_state(self) -> Result<State> {
        let shape = BipartiteShape::new(self.shape[0], self.shape[1])
            .map_err(|e| QcError::Parse(format!("field `shape`: {e}")))?;
        let d = shape.total();
        let expected = match self.kind {
            StateKind::Pure => d,
            StateKind::Mixed => d * d,
        };
        if self.data.len() != expected {
            return Err(QcError::Parse(format!(
                "field `data`: {:?} state of shape {shape} needs {expected} entries, found {}",
                self.kind,
                self.data.len()
            )));
        }
        if let Some(i) = self
            .data
            .iter()
            .position(|[re, im]| !re.is_finite() || !im.is_finite())
        {
            return Err(QcError::Parse(format!(
                "field `data`: entry {i} is not finite"
            )));
        }
        let entries = self.data.iter().map(|&[re, im]| C64::new(re, im));
        match self.kind {
            StateKind::Pure => Ok(State::Pure(PureState::new(
                DVector::from_iterator(d, entries),
                shape,
            )?)),
            StateKind::Mixed => {
                let m = ComplexMatrix::from_row_iterator(d, d, entries);
                Ok(State::Mixed(DensityMatrix::bipartite(m, shape)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{isotropic_state, maximally_entangled};

    #[test]
    fn parses_bell_state() {
        let text = r#"{"shape": [2, 2], "kind": "pure",
            "data": [[0.7071067811865476, 0], [0, 0], [0, 0], [0.7071067811865476, 0]]}"#;
        let state = StateFile::from_json(text).unwrap().into_state().unwrap();
        match state {
            State::Pure(p) => assert_eq!(p.shape(), BipartiteShape::new(2, 2).unwrap()),
            State::Mixed(_) => panic!("expected pure"),
        }
    }

    #[test]
    fn round_trips_both_kinds() {
        let psi = maximally_entangled(3).unwrap();
        let back = StateFile::from_json(&StateFile::from_pure(&psi).to_json())
            .unwrap()
            .into_state()
            .unwrap();
        assert!(matches!(back, State::Pure(p) if p == psi));

        let rho = isotropic_state(0.9, 3).unwrap();
        let file = StateFile::from_density(&rho).unwrap();
        assert_eq!(file.data.len(), 81);
        let back = StateFile::from_json(&file.to_json())
            .unwrap()
            .into_state()
            .unwrap();
        assert!(matches!(back, State::Mixed(r) if r.matrix() == rho.matrix()));
    }

    #[test]
    fn diagnostics() {
        let err = StateFile::from_json("{\"shape\": [2, 2],\n \"kind\": \"puree\", \"data\": []}")
            .unwrap_err();
        assert!(
            matches!(&err, QcError::Parse(m) if m.contains("line 2")),
            "{err}"
        );

        let err = StateFile::from_json(r#"{"shape": [2, 2], "kind": "pure", "data": [[1, 0]]}"#)
            .unwrap()
            .into_state()
            .unwrap_err();
        assert!(
            matches!(&err, QcError::Parse(m) if m.contains("`data`")),
            "{err}"
        );

        let err = StateFile::from_json(r#"{"shape": [0, 2], "kind": "pure", "data": []}"#)
            .unwrap()
            .into_state()
            .unwrap_err();
        assert!(
            matches!(&err, QcError::Parse(m) if m.contains("`shape`")),
            "{err}"
        );

        let err =
            StateFile::from_json(r#"{"shape": [1, 2], "kind": "pure", "data": [[1, 0], [1, 0]]}"#)
                .unwrap()
                .into_state()
                .unwrap_err();
        assert!(matches!(err, QcError::NotNormalized { .. }));

        assert!(
            StateFile::from_json(r#"{"shape": [1, 1], "kind": "pure", "data": [], "x": 1}"#)
                .is_err()
        );
    }
}
