use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::controller::{AdaptiveController, ClosedLoopState, ControllerConfig};
use crate::error::{Error, Result};
use crate::plant::{plant_by_name, PureFeedbackPlant};
use crate::sim::SimConfig;

/// Initial conditions. Omitted estimates start at zero and omitted filter
/// states start on their targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialConfig {
    pub x: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_hat: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_f: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub plant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    pub sim: SimConfig,
    pub initial: InitialConfig,
    pub controller: ControllerConfig,
}

/// Grid spacing used to check the reference against its bounds.
const REFERENCE_GRID: f64 = 1e-3;

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_toml_string()?).map_err(|e| Error::io(path, e))
    }

    pub fn plant(&self) -> Result<Box<dyn PureFeedbackPlant>> {
        plant_by_name(&self.plant)
    }

    pub fn controller(&self) -> Result<AdaptiveController> {
        AdaptiveController::new(self.controller.clone())
    }

    pub fn a_hat0(&self) -> Vec<f64> {
        self.initial
            .a_hat
            .clone()
            .unwrap_or_else(|| vec![0.0; self.controller.order()])
    }

    /// The full closed-loop initial state.
    pub fn initial_state(&self, controller: &AdaptiveController) -> Result<ClosedLoopState> {
        let a_hat = self.a_hat0();
        match &self.initial.alpha_f {
            Some(af) => Ok(ClosedLoopState {
                x: self.initial.x.clone(),
                alpha_f: af.clone(),
                a_hat,
            }),
            None => controller.initial_state(&self.initial.x, &a_hat, 0.0),
        }
    }

    /// Checks bound positivity, the initial state against its bounds and the
    /// reference against the first state's bounds over the horizon.
    pub fn validate(&self) -> Result<()> {
        let plant = self.plant()?;
        let controller = self.controller()?;
        self.sim.validate()?;
        let n = controller.order();
        if plant.order() != n {
            return Err(Error::Config(format!(
                "plant `{}` has order {}, controller has {n} steps",
                self.plant,
                plant.order()
            )));
        }
        let dims = [
            ("initial.x", Some(self.initial.x.len()), n),
            ("initial.a_hat", self.initial.a_hat.as_ref().map(Vec::len), n),
            ("initial.alpha_f", self.initial.alpha_f.as_ref().map(Vec::len), n - 1),
        ];
        for (name, got, expected) in dims {
            if let Some(got) = got.filter(|g| *g != expected) {
                return Err(Error::Config(format!("{name} has {got} entries, expected {expected}")));
            }
        }
        for (i, (x, s)) in self.initial.x.iter().zip(&self.controller.steps).enumerate() {
            if !(s.bounds.margin(*x, 0.0) > 0.0) {
                let (lower, upper) = s.bounds.interval(0.0);
                return Err(Error::ConstraintViolated { x: *x, lower, upper }.at_step(i + 1));
            }
        }
        if self.a_hat0().iter().any(|a| !(*a >= 0.0)) {
            return Err(Error::Config("initial.a_hat must be >= 0".into()));
        }
        let step = REFERENCE_GRID.min(self.sim.dt);
        self.controller
            .reference
            .validate_within(&self.controller.steps[0].bounds, self.sim.horizon, step)
    }

    /// Sets the scalar at a dotted path such as `controller.filters.0.lambda`
    /// or `sim.dt`, then revalidates.
    pub fn set_param(&self, path: &str, value: f64) -> Result<Self> {
        let mut doc = toml::Value::try_from(self).map_err(|e| Error::Config(e.to_string()))?;
        let mut slot = &mut doc;
        for key in path.split('.') {
            slot = match slot {
                toml::Value::Table(t) => t.get_mut(key),
                toml::Value::Array(a) => key.parse::<usize>().ok().and_then(|i| a.get_mut(i)),
                _ => None,
            }
            .ok_or_else(|| Error::Config(format!("no field `{key}` in path `{path}`")))?;
        }
        *slot = match slot {
            toml::Value::Float(_) => toml::Value::Float(value),
            toml::Value::Integer(_) if value.fract() == 0.0 => toml::Value::Integer(value as i64),
            toml::Value::Integer(_) => {
                return Err(Error::Config(format!("`{path}` is an integer, got {value}")));
            }
            _ => return Err(Error::Config(format!("`{path}` is not a numeric field"))),
        };
        let text = toml::to_string(&doc).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_toml_str(&text)
    }

    /// `key=value` lines for every scalar in the config, keys in dotted form.
    pub fn flattened(&self) -> Result<Vec<(String, String)>> {
        let doc = toml::Value::try_from(self).map_err(|e| Error::Config(e.to_string()))?;
        let mut out = Vec::new();
        flatten("config", &doc, &mut out);
        Ok(out)
    }
}

fn flatten(prefix: &str, v: &toml::Value, out: &mut Vec<(String, String)>) {
    match v {
        toml::Value::Table(t) => {
            for (k, v) in t {
                flatten(&format!("{prefix}.{k}"), v, out);
            }
        }
        toml::Value::Array(a) if a.iter().all(|x| !x.is_table() && !x.is_array()) => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            out.push((prefix.to_string(), format!("[{}]", items.join(","))));
        }
        toml::Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn scalar(v: &toml::Value) -> String {
    match v {
        toml::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
