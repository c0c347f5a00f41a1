//! Scenario files: one `key = value` per line, `#` starts a comment, complex
//! numbers written `re+imi`. Presets `fig1` … `fig7` are stored in the same
//! format.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use crate::analysis::{GridScale, GridSpec};
use crate::correlators::{closed_form, SystemKind};
use crate::error::{Error, Result};
use crate::geometry::{
    invariants_of, triple_product, realize, AlphaSector, InvariantSet, PolProducts, RealizedFrame,
};
use crate::matrix_io::parse_complex;
use crate::oracle::correlation_oracle;
use crate::spin_ops::OperatorKind;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError {
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "`{}` (line {}): {}", self.field, line, self.message),
            None => write!(f, "`{}`: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ScenarioError {}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub system: SystemKind,
    pub operators: Vec<OperatorKind>,
    pub invariants: InvariantSet,
    /// Present when the scenario was given as concrete vectors.
    pub frame: Option<RealizedFrame>,
    pub grid: GridSpec,
    pub find_extrema: bool,
    pub asymptote: bool,
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str) -> std::result::Result<Self, ScenarioError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ScenarioError {
                    field: line.to_string(),
                    line: Some(i + 1),
                    message: "expected `key = value`".into(),
                });
            };
            let key = key.trim().to_string();
            if map.insert(key.clone(), (i + 1, value.trim().to_string())).is_some() {
                return Err(ScenarioError {
                    field: key,
                    line: Some(i + 1),
                    message: "duplicate key".into(),
                });
            }
        }
        Ok(Self { map })
    }

    fn err(&self, field: &str, message: impl Into<String>) -> ScenarioError {
        ScenarioError {
            field: field.to_string(),
            line: self.map.get(field).map(|e| e.0),
            message: message.into(),
        }
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|e| e.1.as_str())
    }

    fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn real(&self, key: &str) -> std::result::Result<Option<f64>, ScenarioError> {
        self.raw(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| self.err(key, format!("`{v}` is not a finite number")))
            })
            .transpose()
    }

    fn req_real(&self, key: &str) -> std::result::Result<f64, ScenarioError> {
        self.real(key)?.ok_or_else(|| self.err(key, "missing"))
    }

    fn complex(&self, key: &str) -> std::result::Result<Option<Complex64>, ScenarioError> {
        self.raw(key)
            .map(|v| parse_complex(v).ok_or_else(|| self.err(key, format!("`{v}` is not a complex number"))))
            .transpose()
    }

    fn req_complex(&self, key: &str) -> std::result::Result<Complex64, ScenarioError> {
        self.complex(key)?.ok_or_else(|| self.err(key, "missing"))
    }

    fn flag(&self, key: &str) -> std::result::Result<bool, ScenarioError> {
        match self.raw(key) {
            None => Ok(false),
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(v) => Err(self.err(key, format!("`{v}` is not a boolean"))),
        }
    }

    fn vector(&self, key: &str) -> std::result::Result<Option<Vector3<Complex64>>, ScenarioError> {
        let Some(v) = self.raw(key) else { return Ok(None) };
        let parts: Vec<Complex64> = v
            .split(',')
            .map(|t| parse_complex(t).ok_or_else(|| self.err(key, format!("bad component `{}`", t.trim()))))
            .collect::<std::result::Result<_, _>>()?;
        if parts.len() != 3 {
            return Err(self.err(key, format!("expected 3 components, found {}", parts.len())));
        }
        Ok(Some(Vector3::from_column_slice(&parts)))
    }

    fn unit_vector(&self, key: &str) -> std::result::Result<Vector3<f64>, ScenarioError> {
        let v = self.vector(key)?.ok_or_else(|| self.err(key, "missing"))?;
        if v.iter().any(|z| z.im != 0.0) {
            return Err(self.err(key, "measurement directions must be real"));
        }
        let v = v.map(|z| z.re);
        let len = v.norm();
        if (len - 1.0).abs() > 1e-9 {
            return Err(self.err(key, format!("|{key}| = {len}, expected a unit vector")));
        }
        Ok(v / len)
    }
}

const KNOWN_KEYS: &[&str] = &[
    "name", "system", "operators", "ab", "an", "bn", "n_ab", "a_pol", "b_pol", "n_pol",
    "pol_norm_sq", "a_alpha", "b_alpha", "n_alpha", "alpha_norm_sq", "alpha_beta_conj",
    "alpha_ab", "a_alpha_n", "b_alpha_n", "vec_a", "vec_b", "vec_n", "vec_pol", "vec_alpha",
    "x_min", "x_max", "steps", "scale", "find_extrema", "asymptote",
];

const VECTOR_KEYS: &[&str] = &["vec_a", "vec_b", "vec_n", "vec_pol", "vec_alpha"];
const SCALAR_KEYS: &[&str] = &[
    "ab", "an", "bn", "n_ab", "a_pol", "b_pol", "n_pol", "pol_norm_sq", "a_alpha", "b_alpha",
    "n_alpha", "alpha_norm_sq", "alpha_beta_conj", "alpha_ab", "a_alpha_n", "b_alpha_n",
];

fn field_error(e: Error) -> ScenarioError {
    match e {
        Error::InvalidInvariant { field, reason } => ScenarioError {
            field: field.to_string(),
            line: None,
            message: reason,
        },
        other => ScenarioError {
            field: "scenario".into(),
            line: None,
            message: other.to_string(),
        },
    }
}

pub fn parse(text: &str) -> std::result::Result<Scenario, ScenarioError> {
    let e = Entries::parse(text)?;
    if let Some(key) = e.map.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(e.err(key, "unknown key"));
    }

    let system_tag = e.raw("system").ok_or_else(|| e.err("system", "missing"))?;
    let system = SystemKind::from_tag(system_tag).ok_or_else(|| {
        e.err(
            "system",
            format!("`{system_tag}` is not one of fermion_vector, boson_tensor_beta, boson_tensor_general"),
        )
    })?;

    let operators = match e.raw("operators") {
        None => vec![OperatorKind::NewtonWigner, OperatorKind::CenterOfMass],
        Some(list) => {
            let mut ops = Vec::new();
            for tag in list.split(',').map(str::trim) {
                let op = match tag {
                    "nw" => OperatorKind::NewtonWigner,
                    "cm" => OperatorKind::CenterOfMass,
                    other => return Err(e.err("operators", format!("unknown operator `{other}`"))),
                };
                if !ops.contains(&op) {
                    ops.push(op);
                }
            }
            ops.sort_by_key(|op| op.tag() != "nw");
            ops
        }
    };

    let uses_vectors = VECTOR_KEYS.iter().any(|k| e.has(k));
    if uses_vectors {
        if let Some(k) = SCALAR_KEYS.iter().find(|k| e.has(k)) {
            return Err(e.err(k, "cannot mix invariants with concrete vectors"));
        }
    }

    let (invariants, frame) = if uses_vectors {
        let a = e.unit_vector("vec_a")?;
        let b = e.unit_vector("vec_b")?;
        let n = e.unit_vector("vec_n")?;
        let pol = e.vector("vec_pol")?.ok_or_else(|| e.err("vec_pol", "missing"))?;
        let alpha = e.vector("vec_alpha")?;
        if alpha.is_some() && system != SystemKind::BosonTensorGeneral {
            return Err(e.err("vec_alpha", "only boson_tensor_general has an α sector"));
        }
        if system == SystemKind::BosonTensorGeneral && alpha.is_none() {
            return Err(e.err("vec_alpha", "missing"));
        }
        let frame = RealizedFrame::new(a, b, n, pol, alpha).map_err(field_error)?;
        let inv = invariants_of(&frame);
        inv.check_ranges().map_err(field_error)?;
        (inv, Some(frame))
    } else {
        let (ab, an, bn) = (e.req_real("ab")?, e.req_real("an")?, e.req_real("bn")?);
        let pol = PolProducts {
            a: e.req_complex("a_pol")?,
            b: e.req_complex("b_pol")?,
            n: e.req_complex("n_pol")?,
            norm_sq: e.real("pol_norm_sq")?.unwrap_or(1.0),
        };
        let alpha = if system == SystemKind::BosonTensorGeneral {
            Some(AlphaSector {
                products: PolProducts {
                    a: e.req_complex("a_alpha")?,
                    b: e.req_complex("b_alpha")?,
                    n: e.req_complex("n_alpha")?,
                    norm_sq: e.req_real("alpha_norm_sq")?,
                },
                alpha_beta_conj: e.req_complex("alpha_beta_conj")?,
                alpha_ab: e.req_complex("alpha_ab")?,
                a_alpha_n: e.req_complex("a_alpha_n")?,
                b_alpha_n: e.req_complex("b_alpha_n")?,
            })
        } else {
            if let Some(k) = SCALAR_KEYS[8..].iter().find(|k| e.has(k)) {
                return Err(e.err(k, "only boson_tensor_general has an α sector"));
            }
            None
        };
        let n_ab = match e.real("n_ab")? {
            Some(v) => v,
            None => triple_product(ab, an, bn),
        };
        let inv = InvariantSet { ab, an, bn, n_ab, pol, alpha };
        inv.check_ranges().map_err(|err| {
            let mut se = field_error(err);
            se.line = e.map.get(&se.field).map(|x| x.0);
            se
        })?;
        (inv, None)
    };

    if system == SystemKind::BosonTensorBeta && !invariants.pol.is_real() {
        return Err(e.err(
            if uses_vectors { "vec_pol" } else { "a_pol" },
            "β must be real for boson_tensor_beta; use boson_tensor_general for complex polarizations",
        ));
    }

    let defaults = GridSpec::default();
    let scale = match e.raw("scale") {
        None | Some("linear") => GridScale::Linear,
        Some("log") => GridScale::Log,
        Some(v) => return Err(e.err("scale", format!("`{v}` is not linear or log"))),
    };
    let steps = match e.raw("steps") {
        None => defaults.steps,
        Some(v) => v.parse().map_err(|_| e.err("steps", format!("`{v}` is not a count")))?,
    };
    let grid = GridSpec {
        x_min: e.real("x_min")?.unwrap_or(defaults.x_min),
        x_max: e.real("x_max")?.unwrap_or(defaults.x_max),
        steps,
        scale,
    };
    grid.points().map_err(|err| e.err("x_max", err.to_string()))?;

    Ok(Scenario {
        name: e.raw("name").unwrap_or("scenario").to_string(),
        system,
        operators,
        invariants,
        frame,
        grid,
        find_extrema: e.flag("find_extrema")?,
        asymptote: e.flag("asymptote")?,
    })
}

pub const PRESET_NAMES: [&str; 7] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"];

/// Caption configurations, real unit polarization vector.
pub fn preset_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig1" => "name = fig1\nsystem = fermion_vector\nab = 0.70710678118654752\nan = 1\nbn = 0.70710678118654752\na_pol = 0.5\nb_pol = -0.08\nn_pol = 0.5\n",
        "fig2" => "name = fig2\nsystem = fermion_vector\nab = -0.5\nan = 1\nbn = -0.5\na_pol = -0.97\nb_pol = 0.48\nn_pol = -0.97\n",
        "fig3" => "name = fig3\nsystem = fermion_vector\nab = 0.25\nan = 0.5\nbn = 0.5\na_pol = 0.61237243569579452\nb_pol = 0.61237243569579452\nn_pol = 0\n",
        "fig4" => "name = fig4\nsystem = boson_tensor_beta\n# decimal comma in the source caption read as 0.79\nab = -0.90\nan = -0.5\nbn = 0.5\na_pol = -0.79\nb_pol = 0.97\nn_pol = 0.70710678118654752\n",
        "fig5" => "name = fig5\nsystem = boson_tensor_beta\nab = 0\nan = 0.5\nbn = 0.86602540378443865\na_pol = 1\nb_pol = 0\nn_pol = 0.5\n",
        "fig6" => "name = fig6\nsystem = boson_tensor_beta\nab = 0.86602540378443865\nan = 0.5\nbn = 0\na_pol = -0.43301270189221932\nb_pol = -0.5\nn_pol = 0\n",
        "fig7" => "name = fig7\nsystem = boson_tensor_beta\nab = -0.5\nan = 0.5\nbn = 0.5\na_pol = 1\nb_pol = -0.5\nn_pol = 0.5\n",
        _ => return None,
    })
}

pub fn preset(name: &str) -> Option<Scenario> {
    preset_text(name).map(|t| parse(t).expect("built-in presets parse"))
}

/// How a scenario curve is evaluated.
#[derive(Clone, Debug)]
pub enum Evaluator {
    ClosedForm {
        system: SystemKind,
        operator: OperatorKind,
        invariants: InvariantSet,
    },
    /// No closed form exists; the brute-force construction is used.
    Oracle {
        system: SystemKind,
        operator: OperatorKind,
        frame: RealizedFrame,
    },
}

impl Evaluator {
    pub fn for_scenario(s: &Scenario, operator: OperatorKind) -> Result<Self> {
        if s.system.has_closed_form(operator) {
            return Ok(Self::ClosedForm {
                system: s.system,
                operator,
                invariants: s.invariants,
            });
        }
        let frame = match &s.frame {
            Some(f) => f.clone(),
            None => realize(&s.invariants)?,
        };
        Ok(Self::Oracle {
            system: s.system,
            operator,
            frame,
        })
    }

    pub fn is_oracle(&self) -> bool {
        matches!(self, Self::Oracle { .. })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Self::ClosedForm {
                system,
                operator,
                invariants,
            } => closed_form(*system, *operator, x, invariants),
            Self::Oracle {
                system,
                operator,
                frame,
            } => correlation_oracle(*system, frame, x, *operator),
        }
    }
}
