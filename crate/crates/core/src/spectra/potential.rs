use std::fmt;

use serde_json::{json, Value};

use crate::discretizer::Grid;
use crate::error::SpectrumError;

/// External potential `V(x)`, in energy units.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum PotentialProfile {
    #[default]
    Zero,
    Constant { v0: f64 },
    /// `½ k (x − x0)²`.
    Harmonic { k: f64, x0: f64 },
    /// `F x`.
    Linear { slope: f64 },
    /// One value per interior grid point.
    Sampled { name: String, values: Vec<f64> },
}

impl fmt::Display for PotentialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialProfile::Zero => f.write_str("zero"),
            PotentialProfile::Constant { v0 } => write!(f, "constant(v0={v0})"),
            PotentialProfile::Harmonic { k, x0 } => write!(f, "harmonic(k={k},x0={x0})"),
            PotentialProfile::Linear { slope } => write!(f, "linear(slope={slope})"),
            PotentialProfile::Sampled { name, values } => write!(f, "{name}[{}]", values.len()),
        }
    }
}

impl PotentialProfile {
    pub const NAMES: [&'static str; 4] = ["zero", "constant", "harmonic", "linear"];

    /// Built-in potential from `key=value` pairs; missing keys default to
    /// `v0 = 0`, `k = 1`, `x0 = 0`, `slope = 1`.
    pub fn from_name(name: &str, params: &[(String, f64)]) -> Result<Self, SpectrumError> {
        let name = name.trim().to_ascii_lowercase();
        let allowed: &[&str] = match name.as_str() {
            "zero" | "none" => &[],
            "constant" => &["v0"],
            "harmonic" => &["k", "x0"],
            "linear" => &["slope"],
            _ => {
                return Err(SpectrumError::InvalidPotential {
                    name,
                    reason: format!("unknown potential; expected one of {:?}", Self::NAMES),
                })
            }
        };
        for (k, v) in params {
            if !allowed.contains(&k.as_str()) {
                return Err(SpectrumError::InvalidPotential {
                    name,
                    reason: format!("unknown parameter {k:?}; expected {allowed:?}"),
                });
            }
            if !v.is_finite() {
                return Err(SpectrumError::InvalidPotential {
                    name,
                    reason: format!("{k} = {v} is not finite"),
                });
            }
        }
        let get = |key: &str, default: f64| {
            params
                .iter()
                .rev()
                .find(|(k, _)| k == key)
                .map_or(default, |(_, v)| *v)
        };
        Ok(match name.as_str() {
            "zero" | "none" => PotentialProfile::Zero,
            "constant" => PotentialProfile::Constant { v0: get("v0", 0.0) },
            "harmonic" => PotentialProfile::Harmonic {
                k: get("k", 1.0),
                x0: get("x0", 0.0),
            },
            _ => PotentialProfile::Linear {
                slope: get("slope", 1.0),
            },
        })
    }

    pub fn name(&self) -> &str {
        match self {
            PotentialProfile::Zero => "zero",
            PotentialProfile::Constant { .. } => "constant",
            PotentialProfile::Harmonic { .. } => "harmonic",
            PotentialProfile::Linear { .. } => "linear",
            PotentialProfile::Sampled { name, .. } => name,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            PotentialProfile::Zero => json!({"name": "zero"}),
            PotentialProfile::Constant { v0 } => json!({"name": "constant", "v0": v0}),
            PotentialProfile::Harmonic { k, x0 } => json!({"name": "harmonic", "k": k, "x0": x0}),
            PotentialProfile::Linear { slope } => json!({"name": "linear", "slope": slope}),
            PotentialProfile::Sampled { name, values } => {
                json!({"name": name, "points": values.len()})
            }
        }
    }

    /// `V` on the interior points of `grid`.
    pub fn sample(&self, grid: &Grid<f64>) -> Result<Vec<f64>, SpectrumError> {
        let xs = grid.points();
        let values: Vec<f64> = match self {
            PotentialProfile::Zero => vec![0.0; xs.len()],
            PotentialProfile::Constant { v0 } => vec![*v0; xs.len()],
            PotentialProfile::Harmonic { k, x0 } => {
                xs.iter().map(|x| 0.5 * k * (x - x0) * (x - x0)).collect()
            }
            PotentialProfile::Linear { slope } => xs.iter().map(|x| slope * x).collect(),
            PotentialProfile::Sampled { values, .. } => {
                if values.len() != xs.len() {
                    return Err(SpectrumError::GridMismatch {
                        expected: xs.len(),
                        got: values.len(),
                    });
                }
                values.clone()
            }
        };
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(SpectrumError::InvalidPotential {
                name: self.name().to_string(),
                reason: format!("value {v} at grid point {i} is not finite"),
            });
        }
        Ok(values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_on_interior_points() {
        let g = Grid::new(0.0, 4.0, 3).unwrap();
        let v = PotentialProfile::Harmonic { k: 2.0, x0: 1.0 };
        assert_eq!(v.sample(&g).unwrap(), vec![0.0, 1.0, 4.0]);
        let bad = PotentialProfile::Sampled {
            name: "table".into(),
            values: vec![1.0, 2.0],
        };
        assert_eq!(
            bad.sample(&g),
            Err(SpectrumError::GridMismatch { expected: 3, got: 2 })
        );
        let nan = PotentialProfile::Constant { v0: f64::NAN };
        assert!(matches!(nan.sample(&g), Err(SpectrumError::InvalidPotential { .. })));
    }

    #[test]
    fn from_name() {
        let v = PotentialProfile::from_name("Harmonic", &[("k".into(), 4.0)]).unwrap();
        assert_eq!(v, PotentialProfile::Harmonic { k: 4.0, x0: 0.0 });
        assert!(PotentialProfile::from_name("well", &[]).is_err());
        assert!(PotentialProfile::from_name("linear", &[("k".into(), 1.0)]).is_err());
    }
}
