use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::numerics::{OdeSpec, QuadratureSpec};
use crate::scattering::ScatteringCuts;
use crate::spacetime::{BlackHole, Extremality};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Schwarzschild,
    #[value(name = "reissner-nordstrom")]
    ReissnerNordstrom,
}

impl Family {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "schwarzschild" => Ok(Family::Schwarzschild),
            "reissner-nordstrom" | "rn" => Ok(Family::ReissnerNordstrom),
            other => Err(Error::InvalidParameter(format!("unknown family `{other}`"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Schwarzschild => "schwarzschild",
            Family::ReissnerNordstrom => "reissner-nordstrom",
        })
    }
}

/// Named parameter sets for the four figures: `G = 1`, `GM = 2`, `l = 1`,
/// with `Q = 0` for the uncharged potential and `Q = 1` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

impl Preset {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Preset::Fig1),
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            other => Err(Error::InvalidParameter(format!("unknown preset `{other}`"))),
        }
    }

    fn charge(self) -> f64 {
        match self {
            Preset::Fig1 => 0.0,
            Preset::Fig2 | Preset::Fig3 | Preset::Fig4 => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OmegaGrid {
    /// `count` points from `start` to `stop` inclusive.
    Range {
        start: f64,
        stop: f64,
        count: usize,
    },
    List(Vec<f64>),
}

impl OmegaGrid {
    /// `start:stop:count` or a comma-separated list.
    pub fn parse(s: &str) -> Result<Self> {
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::InvalidParameter(format!(
                    "ω grid must be start:stop:count, got `{s}`"
                )));
            }
            Ok(OmegaGrid::Range {
                start: parse_f64("ω start", parts[0])?,
                stop: parse_f64("ω stop", parts[1])?,
                count: parse_usize("ω count", parts[2])?,
            })
        } else {
            let values = s
                .split(',')
                .map(|v| parse_f64("ω", v))
                .collect::<Result<Vec<_>>>()?;
            Ok(OmegaGrid::List(values))
        }
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        let values = match self {
            OmegaGrid::Range { start, stop, count } => {
                if *count == 0 {
                    return Err(Error::InvalidParameter("ω grid count must be at least 1".into()));
                }
                if !(stop >= start) {
                    return Err(Error::InvalidParameter(format!(
                        "ω grid stop {stop} lies below start {start}"
                    )));
                }
                linspace(*start, *stop, *count)
            }
            OmegaGrid::List(values) => {
                if values.is_empty() {
                    return Err(Error::InvalidParameter("ω list is empty".into()));
                }
                if values.windows(2).any(|w| w[1] < w[0]) {
                    return Err(Error::InvalidParameter("ω list must be sorted".into()));
                }
                values.clone()
            }
        };
        if values.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidParameter("ω values must be positive".into()));
        }
        Ok(values)
    }
}

impl fmt::Display for OmegaGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaGrid::Range { start, stop, count } => write!(f, "{start}:{stop}:{count}"),
            OmegaGrid::List(values) => {
                let text: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                f.write_str(&text.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl RGrid {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidParameter(format!(
                "r grid must be min:max:count, got `{s}`"
            )));
        }
        Ok(Self {
            min: parse_f64("r min", parts[0])?,
            max: parse_f64("r max", parts[1])?,
            count: parse_usize("r count", parts[2])?,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidParameter(format!(
                "r grid needs at least 2 points, got {}",
                self.count
            )));
        }
        if !(self.min > 0.0 && self.max > self.min && self.max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "r grid needs 0 < min < max, got {}:{}",
                self.min, self.max
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.count)
    }
}

impl fmt::Display for RGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)
    }
}

/// Optional settings from one source (config file or command line).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub preset: Option<Preset>,
    pub family: Option<Family>,
    pub g: Option<f64>,
    pub m: Option<f64>,
    pub q: Option<f64>,
    pub l: Option<u32>,
    pub omega: Option<OmegaGrid>,
    pub r_grid: Option<RGrid>,
    pub out: Option<PathBuf>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub eps_horizon: Option<f64>,
    pub r_far: Option<f64>,
}

impl Overrides {
    /// Flat `key=value` text; blank lines and `#` comments are skipped.
    pub fn parse_config(text: &str) -> Result<Self> {
        let mut out = Overrides::default();
        for (number, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("config line {}: expected key=value", number + 1))
            })?;
            let value = value.trim();
            match key.trim().replace('-', "_").as_str() {
                "preset" => out.preset = Some(Preset::parse(value)?),
                "family" => out.family = Some(Family::parse(value)?),
                "g" => out.g = Some(parse_f64("g", value)?),
                "m" => out.m = Some(parse_f64("m", value)?),
                "q" => out.q = Some(parse_f64("q", value)?),
                "l" => out.l = Some(parse_u32("l", value)?),
                "omega" => out.omega = Some(OmegaGrid::parse(value)?),
                "r_grid" => out.r_grid = Some(RGrid::parse(value)?),
                "out" => out.out = Some(PathBuf::from(value)),
                "rel_tol" => out.rel_tol = Some(parse_f64("rel_tol", value)?),
                "abs_tol" => out.abs_tol = Some(parse_f64("abs_tol", value)?),
                "eps_horizon" => out.eps_horizon = Some(parse_f64("eps_horizon", value)?),
                "r_far" => out.r_far = Some(parse_f64("r_far", value)?),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "config line {}: unknown key `{other}`",
                        number + 1
                    )))
                }
            }
        }
        Ok(out)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|err| {
            Error::InvalidParameter(format!("cannot read config {}: {err}", path.display()))
        })?;
        Self::parse_config(&text)
    }
}

/// Effective settings after layering defaults, preset, config file and flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Option<Family>,
    pub g: f64,
    pub m: f64,
    pub q: f64,
    pub l: u32,
    pub omega: OmegaGrid,
    pub r_grid: Option<RGrid>,
    pub out: Option<PathBuf>,
    pub rel_tol: f64,
    pub abs_tol: Option<f64>,
    pub eps_horizon: f64,
    pub r_far: Option<f64>,
    pub preset: Option<Preset>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            family: None,
            g: 1.0,
            m: 2.0,
            q: 1.0,
            l: 1,
            omega: OmegaGrid::Range {
                start: 0.1,
                stop: 2.0,
                count: 50,
            },
            r_grid: None,
            out: None,
            rel_tol: 1e-10,
            abs_tol: None,
            eps_horizon: ScatteringCuts::default().eps_horizon,
            r_far: None,
            preset: None,
        }
    }
}

impl RunConfig {
    /// Defaults, then the preset (flag preset wins over file preset), then
    /// file values, then flag values.
    pub fn layered(file: &Overrides, flags: &Overrides) -> Self {
        let mut config = RunConfig::default();
        if let Some(preset) = flags.preset.or(file.preset) {
            config.apply_preset(preset);
        }
        config.apply(file);
        config.apply(flags);
        config
    }

    fn apply_preset(&mut self, preset: Preset) {
        *self = RunConfig {
            g: 1.0,
            m: 2.0,
            q: preset.charge(),
            l: 1,
            preset: Some(preset),
            ..RunConfig::default()
        };
    }

    fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.family {
            self.family = Some(v);
        }
        if let Some(v) = o.g {
            self.g = v;
        }
        if let Some(v) = o.m {
            self.m = v;
        }
        if let Some(v) = o.q {
            self.q = v;
        } else if o.family == Some(Family::Schwarzschild) {
            self.q = 0.0;
        }
        if let Some(v) = o.l {
            self.l = v;
        }
        if let Some(v) = &o.omega {
            self.omega = v.clone();
        }
        if let Some(v) = o.r_grid {
            self.r_grid = Some(v);
        }
        if let Some(v) = &o.out {
            self.out = Some(v.clone());
        }
        if let Some(v) = o.rel_tol {
            self.rel_tol = v;
        }
        if let Some(v) = o.abs_tol {
            self.abs_tol = Some(v);
        }
        if let Some(v) = o.eps_horizon {
            self.eps_horizon = v;
        }
        if let Some(v) = o.r_far {
            self.r_far = Some(v);
        }
    }

    pub fn black_hole(&self) -> Result<BlackHole> {
        if self.family == Some(Family::Schwarzschild) && self.q != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "family schwarzschild requires q = 0, got q = {}",
                self.q
            )));
        }
        BlackHole::new(self.g, self.m, self.q)
    }

    /// Black hole restricted to the sub-extremal class.
    pub fn sub_extremal_hole(&self) -> Result<BlackHole> {
        let bh = self.black_hole()?;
        if bh.class() != Extremality::SubExtremal {
            return Err(Error::NotSubExtremal(bh.class()));
        }
        Ok(bh)
    }

    pub fn validate_numerics(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if let Some(abs_tol) = self.abs_tol {
            if !(abs_tol > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "abs_tol must be positive, got {abs_tol}"
                )));
            }
        }
        if !(self.eps_horizon > 0.0 && self.eps_horizon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "eps_horizon must lie in (0, 1), got {}",
                self.eps_horizon
            )));
        }
        if let Some(r_grid) = &self.r_grid {
            r_grid.validate()?;
        }
        Ok(())
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        let mut spec = QuadratureSpec::default().with_rel_tol(self.rel_tol);
        if let Some(abs_tol) = self.abs_tol {
            spec.abs_tol = abs_tol;
        }
        spec
    }

    pub fn ode_spec(&self) -> OdeSpec {
        let mut spec = OdeSpec::default().with_rel_tol(self.rel_tol);
        if let Some(abs_tol) = self.abs_tol {
            spec.abs_tol = abs_tol;
        }
        spec
    }

    pub fn cuts(&self) -> ScatteringCuts {
        ScatteringCuts {
            eps_horizon: self.eps_horizon,
            r_far: self.r_far,
        }
    }

    /// `key=value` pairs for the CSV header comment.
    pub fn header(&self, command: &str) -> String {
        let family = self.family.map(|f| f.to_string()).unwrap_or_else(|| {
            if self.q == 0.0 {
                Family::Schwarzschild.to_string()
            } else {
                Family::ReissnerNordstrom.to_string()
            }
        });
        let mut parts = vec![
            format!("command={command}"),
            format!("family={family}"),
            format!("g={}", self.g),
            format!("m={}", self.m),
            format!("q={}", self.q),
            format!("l={}", self.l),
        ];
        match command {
            "potential" | "tortoise" => {
                if let Some(grid) = &self.r_grid {
                    parts.push(format!("r_grid={grid}"));
                }
            }
            _ => parts.push(format!("omega={}", self.omega)),
        }
        parts.push(format!("rel_tol={:e}", self.rel_tol));
        if let Some(abs_tol) = self.abs_tol {
            parts.push(format!("abs_tol={abs_tol:e}"));
        }
        if command == "verify" {
            parts.push(format!("eps_horizon={:e}", self.eps_horizon));
            if let Some(r_far) = self.r_far {
                parts.push(format!("r_far={r_far}"));
            }
        }
        if let Some(preset) = self.preset {
            parts.push(format!("preset={}", format!("{preset:?}").to_lowercase()));
        }
        format!("# {}", parts.join(" "))
    }
}

fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let last = (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                stop
            } else {
                start + (stop - start) * (i as f64 / last)
            }
        })
        .collect()
}

fn parse_f64(what: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{what}: `{s}` is not a number")))
}

fn parse_usize(what: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{what}: `{s}` is not a count")))
}

fn parse_u32(what: &str, s: &str) -> Result<u32> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{what}: `{s}` is not a non-negative integer")))
}
