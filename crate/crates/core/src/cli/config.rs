//! Run configuration (TOML) and the built-in presets.
//!
//! ```toml
//! epsilon = 1.0
//! lambda = 2.0
//! a = 1.0
//! c = 1.0
//! # b = 1.63     optional; derived from the constraint when absent
//! outputs = ["potential", "spectrum", "states", "diagnostics"]
//!
//! [model]
//! kind = "morse"          # or "free-particle" (kappa), or "custom"
//! gamma = 1.0
//! gamma0 = 4.0
//!
//! [grid]                  # optional for free-particle and morse
//! x_min = -2.6
//! x_max = 32.2
//! n = 2001
//! ```
//!
//! A custom model takes either `expression = "..."` (see [`super::expr`]) with
//! an explicit `[grid]`, or `samples = "file"` holding two columns `x, V` on a
//! uniform grid, from which the grid is inferred.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ermakov::{solve_constraint, ErmakovParams};
use crate::error::{Error, Result};
use crate::numerics::{Grid1D, GridFunction};
use crate::seeds::{free_particle_grid, MorseParams};
use crate::spectral::DIMENSION_CAP;

use super::expr;

pub const PRESETS: [&str; 4] = ["fig1", "fig1-shifted", "fig3", "fig3-alt"];
/// Tolerance for a user-supplied `b`, relative to `max(4ac, 1)`.
pub const USER_CONSTRAINT_TOL: f64 = 1e-8;
pub const DEFAULT_POINTS: usize = 2001;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Model {
    FreeParticle {
        kappa: f64,
    },
    Morse {
        gamma: f64,
        gamma0: f64,
    },
    Custom {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expression: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Potential,
    Spectrum,
    States,
    Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

fn all_outputs() -> Vec<Output> {
    vec![Output::Potential, Output::Spectrum, Output::States, Output::Diagnostics]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub epsilon: f64,
    pub lambda: f64,
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    pub c: f64,
    #[serde(default = "all_outputs")]
    pub outputs: Vec<Output>,
    /// Free-form note copied into the summary.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub model: Model,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
}

/// Potential and grid resolved from a validated config.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub grid: Grid1D,
    pub v0: GridFunction,
    pub morse: Option<MorseParams>,
    /// `W0` when known before building seeds.
    pub w0: Option<f64>,
    pub continuum: f64,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        // sample files are relative to the config file
        if let Model::Custom { samples: Some(p), .. } = &mut cfg.model {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }

    fn check_finite(&self) -> Result<()> {
        let mut fields = vec![("epsilon", self.epsilon), ("lambda", self.lambda), ("a", self.a), ("c", self.c)];
        if let Some(b) = self.b {
            fields.push(("b", b));
        }
        match self.model {
            Model::FreeParticle { kappa } => fields.push(("kappa", kappa)),
            Model::Morse { gamma, gamma0 } => fields.extend([("gamma", gamma), ("gamma0", gamma0)]),
            Model::Custom { .. } => {}
        }
        if let Some(g) = self.grid {
            fields.extend([("x_min", g.x_min), ("x_max", g.x_max)]);
        }
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite, got {v}")));
            }
        }
        if !(self.a > 0.0 && self.c > 0.0) {
            return Err(Error::Config(format!("a and c must be positive, got a={}, c={}", self.a, self.c)));
        }
        Ok(())
    }

    fn config_grid(&self, default: impl FnOnce() -> Result<Grid1D>) -> Result<Grid1D> {
        let g = match self.grid {
            Some(g) => Grid1D::new(g.x_min, g.x_max, g.n),
            None => default(),
        }
        .map_err(|e| Error::Config(e.to_string()))?;
        if g.len() - 2 > DIMENSION_CAP {
            return Err(Error::Config(format!(
                "grid has {} points; at most {} are supported",
                g.len(),
                DIMENSION_CAP + 2
            )));
        }
        Ok(g)
    }

    /// Validates the config and samples `V0`. Constraint problems that can be
    /// decided before building seeds are reported here.
    pub fn resolve(&self) -> Result<Resolved> {
        self.check_finite()?;
        let cfg_err = |e: Error| Error::Config(e.to_string());
        let resolved = match &self.model {
            Model::FreeParticle { kappa } => {
                let kappa = *kappa;
                if !(kappa > 0.0) {
                    return Err(Error::Config(format!("kappa must be positive, got {kappa}")));
                }
                let eps = -0.25 * kappa * kappa;
                if (self.epsilon - eps).abs() > 1e-12 * eps.abs() {
                    return Err(Error::Config(format!(
                        "free-particle seeds fix epsilon = -kappa^2/4 = {eps}, got {}",
                        self.epsilon
                    )));
                }
                let grid = self.config_grid(|| free_particle_grid(kappa, DEFAULT_POINTS))?;
                Resolved {
                    grid,
                    v0: GridFunction::from_real_fn(grid, |_| 0.0)?,
                    morse: None,
                    w0: Some(kappa),
                    continuum: 0.0,
                }
            }
            Model::Morse { gamma, gamma0 } => {
                let p = MorseParams::new(*gamma, *gamma0).map_err(cfg_err)?;
                if !(self.epsilon < p.gamma0()) {
                    return Err(Error::Config(format!(
                        "epsilon = {} must lie below Gamma0 = {}",
                        self.epsilon,
                        p.gamma0()
                    )));
                }
                let grid = self.config_grid(|| p.default_grid(self.epsilon, DEFAULT_POINTS))?;
                Resolved {
                    grid,
                    v0: GridFunction::from_real_fn(grid, |x| p.potential(x))?,
                    morse: Some(p),
                    w0: Some(2.0 * (p.gamma0() - self.epsilon).sqrt()),
                    continuum: p.gamma0(),
                }
            }
            Model::Custom { expression, samples } => {
                let (grid, v0) = match (expression, samples) {
                    (Some(src), None) => {
                        let e = expr::parse(src)?;
                        if self.grid.is_none() {
                            return Err(Error::Config("a custom expression needs a [grid] section".into()));
                        }
                        let grid = self.config_grid(|| unreachable!("grid given"))?;
                        let v = GridFunction::from_real_fn(grid, |x| e.eval(x))
                            .map_err(|_| Error::Config("potential expression is not finite on the grid".into()))?;
                        (grid, v)
                    }
                    (None, Some(path)) => {
                        let (grid, v) = read_samples(path)?;
                        if let Some(g) = self.grid {
                            if Grid1D::new(g.x_min, g.x_max, g.n).ok() != Some(grid) {
                                return Err(Error::Config("[grid] disagrees with the sample file".into()));
                            }
                        }
                        self.config_grid(|| Ok(grid))?;
                        (grid, v)
                    }
                    _ => {
                        return Err(Error::Config(
                            "a custom model needs exactly one of `expression` or `samples`".into(),
                        ))
                    }
                };
                let n = grid.len();
                let continuum = v0.values()[0].re.min(v0.values()[n - 1].re);
                Resolved { grid, v0, morse: None, w0: None, continuum }
            }
        };
        if let Some(w0) = resolved.w0 {
            self.params(w0)?;
        }
        Ok(resolved)
    }

    /// `{a, b, c, lambda}` with `b` derived from, or checked against, the constraint.
    pub fn params(&self, w0: f64) -> Result<ErmakovParams> {
        let b = match self.b {
            Some(b) => {
                let p = ErmakovParams { a: self.a, b, c: self.c, lambda: self.lambda };
                p.check_constraint(w0, USER_CONSTRAINT_TOL).map_err(|_| {
                    Error::Config(format!(
                        "constraint b^2 - 4ac = -4 lambda^2 / w0^2 violated: b^2 - 4ac = {:e}, -4 lambda^2 / w0^2 = {:e} (w0 = {w0:e})",
                        b * b - 4.0 * self.a * self.c,
                        -4.0 * (self.lambda / w0).powi(2)
                    ))
                })?;
                b
            }
            None => solve_constraint(self.a, self.c, self.lambda, w0, false).map_err(|e| match e {
                Error::ConstraintInfeasible { ac, bound } => Error::Config(format!(
                    "constraint b^2 - 4ac = -4 lambda^2 / w0^2 is infeasible: ac = {ac:e} < lambda^2 / w0^2 = {bound:e} (w0 = {w0:e})"
                )),
                other => Error::Config(other.to_string()),
            })?,
        };
        Ok(ErmakovParams { a: self.a, b, c: self.c, lambda: self.lambda })
    }
}

/// Reads a two-column `x, V` file (comma or whitespace separated, `#` comments,
/// optional header line) on a uniform grid.
pub fn read_samples(path: &Path) -> Result<(Grid1D, GridFunction)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        let parsed: Option<(f64, f64)> = match cols.as_slice() {
            [x, v] => x.parse().ok().zip(v.parse().ok()),
            _ => None,
        };
        match parsed {
            Some((x, v)) => {
                xs.push(x);
                vs.push(v);
            }
            None if xs.is_empty() && lineno == 0 => continue,
            None => {
                return Err(Error::Config(format!("{}:{}: expected two numbers", path.display(), lineno + 1)))
            }
        }
    }
    let n = xs.len();
    let grid = Grid1D::new(*xs.first().unwrap_or(&0.0), *xs.last().unwrap_or(&0.0), n)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let h = grid.spacing();
    for (i, &x) in xs.iter().enumerate() {
        if (x - grid.x(i)).abs() > 1e-9 * h.max(x.abs()) {
            return Err(Error::Config(format!("{}: samples are not uniformly spaced", path.display())));
        }
    }
    let v0 = GridFunction::from_real(grid, &vs).map_err(|e| Error::Config(e.to_string()))?;
    Ok((grid, v0))
}

/// Built-in parameter sets for the free-particle and Morse families.
pub fn preset(name: &str) -> Result<RunConfig> {
    let fp_grid = free_particle_grid(1.0, DEFAULT_POINTS)?;
    let fp = |a: f64, b: Option<f64>, note: &str| RunConfig {
        epsilon: -0.25,
        lambda: 1.0,
        a,
        b,
        c: 1.0,
        outputs: all_outputs(),
        note: Some(note.to_string()),
        model: Model::FreeParticle { kappa: 1.0 },
        grid: Some(GridSpec { x_min: fp_grid.x_min(), x_max: fp_grid.x_max(), n: DEFAULT_POINTS }),
    };
    let morse = MorseParams::new(1.0, 4.0)?;
    let mg = morse.default_grid(1.0, DEFAULT_POINTS)?;
    let mo = |c: f64, b: Option<f64>, note: &str| RunConfig {
        epsilon: 1.0,
        lambda: 2.0,
        a: 1.0,
        b,
        c,
        outputs: all_outputs(),
        note: Some(note.to_string()),
        model: Model::Morse { gamma: 1.0, gamma0: 4.0 },
        grid: Some(GridSpec { x_min: mg.x_min(), x_max: mg.x_max(), n: DEFAULT_POINTS }),
    };
    match name {
        "fig1" => Ok(fp(1.0, Some(0.0), "free particle, kappa = lambda = 1, a = c = 1, b = 0")),
        "fig1-shifted" => Ok(fp(
            1.5,
            None,
            "free particle, kappa = lambda = 1, a = 1.5, c = 1; b is not given for this curve and is \
             derived from the constraint (b = sqrt(2)); a != c moves the centre of alpha^2 to x0 = ln(a/c)/2",
        )),
        "fig3" => Ok(mo(1.0, None, "Morse, gamma = 1, Gamma0 = 4, epsilon = 1, lambda = 2, a = c = 1, b from the constraint")),
        "fig3-alt" => Ok(mo(1.0 / 3.0, Some(0.0), "Morse, gamma = 1, Gamma0 = 4, epsilon = 1, lambda = 2, a = 1, c = 1/3, b = 0")),
        other => Err(Error::Config(format!(
            "unknown preset '{other}'; expected one of {}",
            PRESETS.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip() {
        for name in PRESETS {
            let cfg = preset(name).unwrap();
            let text = cfg.to_toml().unwrap();
            assert_eq!(RunConfig::from_toml(&text).unwrap(), cfg, "{name}\n{text}");
            cfg.resolve().unwrap();
        }
    }

    #[test]
    fn preset_values() {
        let alt = preset("fig3-alt").unwrap();
        assert_eq!(alt.c, 1.0 / 3.0);
        assert_eq!(alt.b, Some(0.0));
        let w0 = 2.0 * 3f64.sqrt();
        assert!(alt.params(w0).is_ok());
        let f1 = preset("fig1").unwrap();
        assert_eq!(f1.lambda, 1.0);
        assert_eq!(f1.model, Model::FreeParticle { kappa: 1.0 });
        assert!(preset("fig2").is_err());
    }

    #[test]
    fn infeasible_constraint_is_config_error() {
        let mut cfg = preset("fig1").unwrap();
        cfg.a = 0.5;
        cfg.c = 0.5;
        cfg.b = None;
        match cfg.resolve() {
            Err(Error::Config(msg)) => assert!(msg.contains("infeasible"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn violated_constraint_names_relation() {
        let mut cfg = preset("fig3").unwrap();
        cfg.b = Some(0.1);
        match cfg.resolve() {
            Err(Error::Config(msg)) => assert!(msg.contains("b^2 - 4ac"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parses_minimal_custom() {
        let cfg = RunConfig::from_toml(
            r#"
            epsilon = -1.0
            lambda = 0.5
            a = 1.0
            c = 1.0
            [model]
            kind = "custom"
            expression = "x^2"
            [grid]
            x_min = -8.0
            x_max = 8.0
            n = 801
            "#,
        )
        .unwrap();
        assert_eq!(cfg.outputs.len(), 4);
        let r = cfg.resolve().unwrap();
        assert_eq!(r.continuum, 64.0);
        assert!(r.w0.is_none());
    }

    #[test]
    fn rejects_bad_configs() {
        let base = preset("fig1").unwrap().to_toml().unwrap();
        assert!(RunConfig::from_toml(&base.replace("lambda = 1.0", "lambda = nan")).unwrap().resolve().is_err());
        assert!(RunConfig::from_toml(&base.replace("epsilon = -0.25", "epsilon = 0.3")).unwrap().resolve().is_err());
        assert!(RunConfig::from_toml(&format!("bogus = 1\n{base}")).is_err());
        assert!(RunConfig::from_toml("epsilon = 1").is_err());
    }

    #[test]
    fn sample_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("v.csv");
        let mut s = String::from("x,V\n");
        for i in 0..101 {
            let x = -5.0 + 0.1 * i as f64;
            s.push_str(&format!("{x},{}\n", x * x));
        }
        std::fs::write(&p, &s).unwrap();
        let (g, v) = read_samples(&p).unwrap();
        assert_eq!(g.len(), 101);
        assert!((v.values()[100].re - 25.0).abs() < 1e-9);
        std::fs::write(&p, "0 1\n1 2\n3 4\n").unwrap();
        assert!(read_samples(&p).is_err());
    }
}
