use serde::de::{self, DeserializeOwned, Deserializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error("field `{field}` is not finite")]
    NonFinite { field: &'static str },
    #[error("grid needs at least two nodes, got {0}")]
    TooFewNodes(usize),
    #[error("grid has {nodes} nodes but {values} values")]
    LengthMismatch { nodes: usize, values: usize },
    #[error("grid nodes must span [0, 1]: first = {first}, last = {last}")]
    NotSpanning { first: f64, last: f64 },
    #[error("grid nodes not strictly increasing at index {index}")]
    Unsorted { index: usize },
    #[error("poly_in_x needs at least one coefficient")]
    EmptyCoefficients,
}

/// Real potential `q(x)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Potential {
    Constant {
        c: f64,
    },
    /// Piecewise-linear interpolation of `values` at `nodes`.
    Grid {
        nodes: Vec<f64>,
        values: Vec<f64>,
    },
    /// `amplitude * cos(2π * frequency * x)`.
    Cosine {
        amplitude: f64,
        frequency: f64,
    },
    /// `Σ coeffs[k] * x^k`.
    PolyInX {
        coeffs: Vec<f64>,
    },
}

// Deserialized by hand: the derived internally tagged form buffers its
// content and reports errors without the offending field.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantParams {
    c: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridParams {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CosineParams {
    amplitude: f64,
    frequency: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyParams {
    coeffs: Vec<f64>,
}

fn params<T: DeserializeOwned>(body: serde_json::Value) -> Result<T, String> {
    serde_path_to_error::deserialize(body).map_err(|e| match e.path().to_string().as_str() {
        "." => e.inner().to_string(),
        path => format!("{path}: {}", e.inner()),
    })
}

impl<'de> Deserialize<'de> for Potential {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let mut map = serde_json::Map::deserialize(deserializer)?;
        let kind = match map.remove("kind") {
            Some(serde_json::Value::String(k)) => k,
            Some(other) => {
                return Err(de::Error::custom(format!(
                    "kind: expected a string, found {other}"
                )))
            }
            None => return Err(de::Error::missing_field("kind")),
        };
        let body = serde_json::Value::Object(map);
        let parsed = match kind.as_str() {
            "constant" => params::<ConstantParams>(body).map(|p| Potential::Constant { c: p.c }),
            "grid" => params::<GridParams>(body).map(|p| Potential::Grid {
                nodes: p.nodes,
                values: p.values,
            }),
            "cosine" => params::<CosineParams>(body).map(|p| Potential::Cosine {
                amplitude: p.amplitude,
                frequency: p.frequency,
            }),
            "poly_in_x" => params::<PolyParams>(body).map(|p| Potential::PolyInX { coeffs: p.coeffs }),
            other => Err(format!(
                "kind: unknown kind `{other}`, expected one of `constant`, `grid`, `cosine`, `poly_in_x`"
            )),
        };
        parsed.map_err(de::Error::custom)
    }
}

const SIMPSON_POINTS: usize = 2001;
const SAMPLE_POINTS: usize = 4001;

impl Potential {
    pub fn zero() -> Self {
        Potential::Constant { c: 0.0 }
    }

    pub fn validate(&self) -> Result<(), PotentialError> {
        match self {
            Potential::Constant { c } => finite("c", *c),
            Potential::Cosine {
                amplitude,
                frequency,
            } => {
                finite("amplitude", *amplitude)?;
                finite("frequency", *frequency)
            }
            Potential::PolyInX { coeffs } => {
                if coeffs.is_empty() {
                    return Err(PotentialError::EmptyCoefficients);
                }
                coeffs.iter().try_for_each(|&c| finite("coeffs", c))
            }
            Potential::Grid { nodes, values } => {
                if nodes.len() != values.len() {
                    return Err(PotentialError::LengthMismatch {
                        nodes: nodes.len(),
                        values: values.len(),
                    });
                }
                if nodes.len() < 2 {
                    return Err(PotentialError::TooFewNodes(nodes.len()));
                }
                nodes.iter().try_for_each(|&x| finite("nodes", x))?;
                values.iter().try_for_each(|&v| finite("values", v))?;
                if let Some(index) = (1..nodes.len()).find(|&i| nodes[i] <= nodes[i - 1]) {
                    return Err(PotentialError::Unsorted { index });
                }
                let (first, last) = (nodes[0], nodes[nodes.len() - 1]);
                if first != 0.0 || last != 1.0 {
                    return Err(PotentialError::NotSpanning { first, last });
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Potential::Constant { c } => *c,
            Potential::Cosine {
                amplitude,
                frequency,
            } => amplitude * (2.0 * std::f64::consts::PI * frequency * x).cos(),
            Potential::PolyInX { coeffs } => coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c),
            Potential::Grid { nodes, values } => {
                let j = nodes.partition_point(|&n| n <= x).clamp(1, nodes.len() - 1);
                let (x0, x1) = (nodes[j - 1], nodes[j]);
                let t = (x - x0) / (x1 - x0);
                values[j - 1] + t * (values[j] - values[j - 1])
            }
        }
    }

    /// `∫₀¹ q dx` by composite Simpson on a 2001-point grid.
    pub fn mean(&self) -> f64 {
        let n = SIMPSON_POINTS - 1;
        let h = 1.0 / n as f64;
        let mut sum = self.eval(0.0) + self.eval(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * self.eval(i as f64 * h);
        }
        sum * h / 3.0
    }

    /// Lower and upper bounds of `q` on `[0, 1]`.
    ///
    /// Exact for constant, grid and cosine kinds; sampled for polynomials.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Potential::Constant { c } => (*c, *c),
            Potential::Cosine {
                amplitude,
                frequency,
            } => {
                if *frequency == 0.0 {
                    (*amplitude, *amplitude)
                } else if frequency.abs() >= 0.5 {
                    (-amplitude.abs(), amplitude.abs())
                } else {
                    self.sampled_bounds()
                }
            }
            Potential::Grid { values, .. } => values
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                    (lo.min(v), hi.max(v))
                }),
            Potential::PolyInX { .. } => self.sampled_bounds(),
        }
    }

    fn sampled_bounds(&self) -> (f64, f64) {
        let n = SAMPLE_POINTS - 1;
        (0..=n)
            .map(|i| self.eval(i as f64 / n as f64))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Total variation `∫₀¹ |q'| dx`.
    pub fn total_variation(&self) -> f64 {
        match self {
            Potential::Constant { .. } => 0.0,
            Potential::Grid { values, .. } => values.windows(2).map(|w| (w[1] - w[0]).abs()).sum(),
            _ => {
                let n = SAMPLE_POINTS - 1;
                let samples: Vec<f64> = (0..=n).map(|i| self.eval(i as f64 / n as f64)).collect();
                samples.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Potential::Constant { .. } => true,
            Potential::Grid { values, .. } => values.iter().all(|&v| v == values[0]),
            Potential::Cosine {
                amplitude,
                frequency,
            } => *amplitude == 0.0 || *frequency == 0.0,
            Potential::PolyInX { coeffs } => coeffs.iter().skip(1).all(|&c| c == 0.0),
        }
    }

    /// `q + c`, when the kind can represent it (cosine cannot).
    pub fn shifted(&self, c: f64) -> Option<Potential> {
        match self {
            Potential::Constant { c: c0 } => Some(Potential::Constant { c: c0 + c }),
            Potential::Grid { nodes, values } => Some(Potential::Grid {
                nodes: nodes.clone(),
                values: values.iter().map(|v| v + c).collect(),
            }),
            Potential::PolyInX { coeffs } => {
                let mut coeffs = coeffs.clone();
                coeffs[0] += c;
                Some(Potential::PolyInX { coeffs })
            }
            Potential::Cosine { .. } => None,
        }
    }

    /// Points where `q` may lose smoothness; the integrator restarts there.
    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        match self {
            Potential::Grid { nodes, .. } => nodes.clone(),
            _ => vec![0.0, 1.0],
        }
    }

    /// Piecewise-linear sampling of `self` at `n + 1` equispaced nodes.
    pub fn sample_to_grid(&self, n: usize) -> Potential {
        let nodes: Vec<f64> = (0..=n)
            .map(|i| if i == n { 1.0 } else { i as f64 / n as f64 })
            .collect();
        let values = nodes.iter().map(|&x| self.eval(x)).collect();
        Potential::Grid { nodes, values }
    }
}

fn finite(field: &'static str, v: f64) -> Result<(), PotentialError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(PotentialError::NonFinite { field })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_interpolates_linearly() {
        let q = Potential::Grid {
            nodes: vec![0.0, 0.5, 1.0],
            values: vec![0.0, 2.0, 1.0],
        };
        q.validate().unwrap();
        assert_eq!(q.eval(0.25), 1.0);
        assert_eq!(q.eval(0.75), 1.5);
        assert_eq!(q.eval(1.0), 1.0);
        assert_eq!(q.bounds(), (0.0, 2.0));
        assert_eq!(q.total_variation(), 3.0);
        // Kinks sit on even Simpson nodes, so the rule is exact here.
        assert!((q.mean() - 1.25).abs() < 1e-14);
    }

    #[test]
    fn grid_validation_names_the_index() {
        let q = Potential::Grid {
            nodes: vec![0.0, 0.6, 0.4, 1.0],
            values: vec![0.0; 4],
        };
        assert_eq!(q.validate(), Err(PotentialError::Unsorted { index: 2 }));
        let q = Potential::Grid {
            nodes: vec![0.1, 1.0],
            values: vec![0.0; 2],
        };
        assert!(matches!(
            q.validate(),
            Err(PotentialError::NotSpanning { .. })
        ));
    }

    #[test]
    fn cosine_mean_vanishes() {
        let q = Potential::Cosine {
            amplitude: 1.0,
            frequency: 1.0,
        };
        assert!(q.mean().abs() < 1e-14);
        assert_eq!(q.bounds(), (-1.0, 1.0));
    }

    #[test]
    fn poly_mean_is_exact_for_cubics() {
        let q = Potential::PolyInX {
            coeffs: vec![1.0, 2.0, 3.0, 4.0],
        };
        assert!((q.mean() - 4.0).abs() < 1e-13);
    }
}
