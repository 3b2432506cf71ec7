use std::path::{Path, PathBuf};
use std::sync::Arc;

use cosetcx::algebra::FieldSpec;
use cosetcx::geometry::Limits;
use cosetcx::matgroup::{projected_order_log10, ElParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Spectral bounds and eigenvalue shapes.
    pub tol: f64,
    /// Projection identities k^2 = k* = k.
    pub proj_tol: f64,
    /// Norm identities between walk and group-algebra norms.
    pub norm_tol: f64,
    /// |epsilon - lambda2|.
    pub eq_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol: 1e-9, proj_tol: 1e-12, norm_tol: 1e-9, eq_tol: 1e-8 }
    }
}

/// Parameters of one run. Read from a `key = value` file and `--set`
/// overrides; see [`RunConfig::KEYS`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u32,
    pub k: u32,
    /// Monic reduction polynomial, low degree first.
    pub poly: Option<Vec<u32>>,
    pub n: usize,
    pub s: usize,
    /// Largest group materialised as a table.
    pub cap: u64,
    /// Largest group whose order may be counted without a table.
    pub count_cap: u64,
    pub tolerances: Tolerances,
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
    /// Truncation s' for the covering check; defaults to s - 1.
    pub target: Option<usize>,
    pub samples: usize,
    /// Count the ambient group when it is too large to tabulate.
    pub count_ambient: bool,
    /// Skip every check that needs the ambient group at this s.
    pub link_only: bool,
    pub direct_mu: bool,
    pub target_lambda: Option<f64>,
    /// Largest link group handed to the group-algebra audit.
    pub ortho_max: usize,
    /// Faces sampled per type in the link isomorphism audit.
    pub link_samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 2,
            k: 1,
            poly: None,
            n: 2,
            s: 2,
            cap: 2_000_000,
            count_cap: 50_000_000,
            tolerances: Tolerances::default(),
            seed: 1,
            out: PathBuf::from("out"),
            target: None,
            samples: 10_000,
            count_ambient: false,
            link_only: false,
            direct_mu: true,
            target_lambda: None,
            ortho_max: 4096,
            link_samples: 4,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::InvalidConfig(format!("cannot parse {key} = {value:?}")))
}

fn parse_opt<T: std::str::FromStr>(key: &str, value: &str) -> Result<Option<T>, CliError> {
    match value {
        "" | "none" => Ok(None),
        v => parse(key, v).map(Some),
    }
}

impl RunConfig {
    pub const KEYS: &'static [&'static str] = &[
        "p",
        "k",
        "poly",
        "n",
        "s",
        "cap",
        "count_cap",
        "tol",
        "proj_tol",
        "norm_tol",
        "eq_tol",
        "seed",
        "out",
        "target",
        "samples",
        "count_ambient",
        "link_only",
        "direct_mu",
        "target_lambda",
        "ortho_max",
        "link_samples",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key.trim() {
            "p" => self.p = parse(key, value)?,
            "k" => self.k = parse(key, value)?,
            "poly" => {
                self.poly = match value {
                    "" | "none" => None,
                    v => Some(v.split(',').map(|c| parse(key, c.trim())).collect::<Result<_, _>>()?),
                }
            }
            "n" => self.n = parse(key, value)?,
            "s" => self.s = parse(key, value)?,
            "cap" => self.cap = parse(key, value)?,
            "count_cap" => self.count_cap = parse(key, value)?,
            "tol" => self.tolerances.tol = parse(key, value)?,
            "proj_tol" => self.tolerances.proj_tol = parse(key, value)?,
            "norm_tol" => self.tolerances.norm_tol = parse(key, value)?,
            "eq_tol" => self.tolerances.eq_tol = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "target" => self.target = parse_opt(key, value)?,
            "samples" => self.samples = parse(key, value)?,
            "count_ambient" => self.count_ambient = parse(key, value)?,
            "link_only" => self.link_only = parse(key, value)?,
            "direct_mu" => self.direct_mu = parse(key, value)?,
            "target_lambda" => self.target_lambda = parse_opt(key, value)?,
            "ortho_max" => self.ortho_max = parse(key, value)?,
            "link_samples" => self.link_samples = parse(key, value)?,
            other => return Err(CliError::InvalidConfig(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| CliError::InvalidConfig(format!("line {}: expected key = value", no + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, kv: &str) -> Result<(), CliError> {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::InvalidConfig(format!("override {kv:?} is not key=value")))?;
        self.set(k, v)
    }

    pub fn load(file: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            cfg.apply_text(&text)?;
        }
        for o in overrides {
            cfg.apply_override(o)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::InvalidConfig(m));
        if self.n < 2 {
            return bad(format!("n = {} but n >= 2 is required", self.n));
        }
        if self.s < 1 {
            return bad("s must be at least 1".into());
        }
        if self.cap < 1 || self.count_cap < 1 {
            return bad("caps must be at least 1".into());
        }
        if self.k < 1 || self.p < 2 {
            return bad(format!("q = {}^{} is not a field order", self.p, self.k));
        }
        if let Some(t) = self.target {
            if t == 0 || t > self.s {
                return bad(format!("target = {t} must lie in 1..={}", self.s));
            }
        }
        let tol = self.tolerances;
        if [tol.tol, tol.proj_tol, tol.norm_tol, tol.eq_tol].iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return bad("tolerances must be positive".into());
        }
        self.field()?;
        Ok(())
    }

    pub fn field(&self) -> Result<FieldSpec, CliError> {
        FieldSpec::new(self.p, self.k, self.poly.as_deref()).map_err(|e| CliError::InvalidConfig(e.to_string()))
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.k)
    }

    pub fn limits(&self) -> Limits {
        Limits { cap: self.count_cap, table_cap: self.cap }
    }

    /// log10 of |SL_{n+1}(F_q[t]/(t^s))| for truncation `s`.
    pub fn projected_log10(&self, s: usize) -> f64 {
        projected_order_log10(self.q(), self.n, s)
    }

    /// The ambient group at truncation `s` fits under `cap`.
    pub fn fits(&self, s: usize, cap: u64) -> bool {
        self.projected_log10(s) <= (cap as f64).log10() + 1e-12
    }

    /// Fails with `CapExceeded` before anything is allocated when the
    /// ambient group is projected to exceed `cap`.
    pub fn guard(&self, cap: u64) -> Result<(), CliError> {
        if self.fits(self.s, cap) {
            Ok(())
        } else {
            Err(CliError::CapExceeded { cap, projected_log10: self.projected_log10(self.s) })
        }
    }

    pub fn params_at(&self, s: usize) -> Result<ElParams, CliError> {
        Ok(ElParams::new(Arc::new(self.field()?), self.n, s)?)
    }

    pub fn params(&self) -> Result<ElParams, CliError> {
        self.params_at(self.s)
    }

    /// Largest truncation s' <= s whose ambient group can be tabulated.
    pub fn tabulated_s(&self) -> Option<usize> {
        (1..=self.s).rev().find(|&s| self.fits(s, self.cap))
    }
}
