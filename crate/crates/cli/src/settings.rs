//! Experiment kinds, layered settings and their validation.
//!
//! Settings come from three layers: per-experiment defaults, a TOML file
//! with flat `[section]` key-value tables, and command-line flags. Later
//! layers win. Every value is parsed from text, so a TOML array and a
//! comma-separated flag are interchangeable.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use ghz_adiabatic::dynamics::{ScheduleKind, StartState};
use ghz_adiabatic::metrology::{BudgetVariant, OffsetPolicy};

use crate::grid::{parse_grid, parse_sizes};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "GHZ_ADIABATIC_OUT";
pub const DEFAULT_OUT_DIR: &str = "results";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Overlap,
    GapScaling,
    ScanTa,
    UncertaintySweep,
    Limits,
    DephasingWindow,
    TimeBudget,
    BoundsCheck,
    SzReadout,
    /// Locally optimal ramp time against `N`.
    RampOptima,
    /// Averaged index `p` against `N` at the optimal ramp times.
    IndexScaling,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Overlap => "overlap",
            Experiment::GapScaling => "gap-scaling",
            Experiment::ScanTa => "scan-ta",
            Experiment::UncertaintySweep => "uncertainty-sweep",
            Experiment::Limits => "limits",
            Experiment::DephasingWindow => "dephasing-window",
            Experiment::TimeBudget => "time-budget",
            Experiment::BoundsCheck => "bounds-check",
            Experiment::SzReadout => "sz-readout",
            Experiment::RampOptima => "ramp-optima",
            Experiment::IndexScaling => "index-scaling",
        }
    }

    fn needs_even_n(self) -> bool {
        !matches!(
            self,
            Experiment::Limits | Experiment::TimeBudget | Experiment::DephasingWindow
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig8,
}

impl Figure {
    pub const ALL: [Figure; 7] = [
        Figure::Fig1,
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
        Figure::Fig8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Fig8 => "fig8",
        }
    }

    pub fn experiment(self) -> Experiment {
        match self {
            Figure::Fig1 => Experiment::Overlap,
            Figure::Fig2 => Experiment::DephasingWindow,
            Figure::Fig3 => Experiment::ScanTa,
            Figure::Fig4 | Figure::Fig8 => Experiment::UncertaintySweep,
            Figure::Fig5 => Experiment::RampOptima,
            Figure::Fig6 => Experiment::IndexScaling,
        }
    }

    fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Figure::Fig1 => &[("N", "10,50,100")],
            Figure::Fig2 => &[("gamma_c", "0.01,0.03,0.05"), ("n_max", "400")],
            Figure::Fig3 => &[("N", "10"), ("Ta", "1:300:1")],
            Figure::Fig4 => &[("N", "10"), ("Ta", "150")],
            Figure::Fig5 | Figure::Fig6 => &[("N", "10:100:10")],
            Figure::Fig8 => &[("N", "20,30,40,50")],
        }
    }
}

/// An experiment as selected by a subcommand or a config `kind`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Plain(Experiment),
    Figure(Figure),
}

impl Kind {
    pub fn experiment(self) -> Experiment {
        match self {
            Kind::Plain(e) => e,
            Kind::Figure(f) => f.experiment(),
        }
    }

    /// Stem of the main CSV file.
    pub fn stem(self) -> String {
        match self {
            Kind::Plain(e) => e.name().replace('-', "_"),
            Kind::Figure(f) => f.name().to_string(),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Plain(e) => f.write_str(e.name()),
            Kind::Figure(g) => f.write_str(g.name()),
        }
    }
}

impl FromStr for Kind {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        use Experiment::*;
        let plain = [
            Overlap,
            GapScaling,
            ScanTa,
            UncertaintySweep,
            Limits,
            DephasingWindow,
            TimeBudget,
            BoundsCheck,
            SzReadout,
        ];
        if let Some(e) = plain.into_iter().find(|e| e.name() == s) {
            return Ok(Kind::Plain(e));
        }
        if let Some(f) = Figure::ALL.into_iter().find(|f| f.name() == s) {
            return Ok(Kind::Figure(f));
        }
        bail!("unknown experiment kind `{s}`")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegratorChoice {
    /// Second-order midpoint stepping with step doubling to convergence.
    Midpoint,
    /// Fourth-order stepping with step doubling to convergence.
    FourthOrder,
    /// Fourth-order stepping at a fixed step count, no convergence check.
    FourthOrderFixed,
}

/// `(key, section, flag)` for every recognized setting.
pub const KEYS: &[(&str, &str, &str)] = &[
    ("kind", "experiment", "--kind"),
    ("N", "model", "--N"),
    ("h0x_over_JN", "model", "--h0x-over-JN"),
    ("start", "model", "--start"),
    ("schedule", "model", "--schedule"),
    ("Ta", "schedule", "--Ta"),
    ("tint_grid", "schedule", "--tint-grid"),
    ("hx_grid", "schedule", "--hx-grid"),
    ("integrator", "schedule", "--integrator"),
    ("gamma_c", "metrology", "--gamma-c"),
    ("gamma", "metrology", "--gamma"),
    ("M", "metrology", "--M"),
    ("T_int", "metrology", "--T-int"),
    ("T", "metrology", "--T"),
    ("T_prep", "metrology", "--T-prep"),
    ("epsilon", "metrology", "--epsilon"),
    ("C", "metrology", "--C"),
    ("C_tilde", "metrology", "--C-tilde"),
    ("variant", "metrology", "--variant"),
    ("offset", "metrology", "--offset"),
    ("fd_step", "metrology", "--fd-step"),
    ("alpha", "metrology", "--alpha"),
    ("hz_grid", "metrology", "--hz-grid"),
    ("probability", "metrology", "--probability"),
    ("count", "metrology", "--count"),
    ("n_max", "metrology", "--n-max"),
    ("out", "output", "--out"),
    ("seed", "run", "--seed"),
];

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub kind: Option<Kind>,
    pub n: Option<Vec<usize>>,
    pub h0x_over_jn: Option<f64>,
    pub start: Option<StartState>,
    pub schedule: Option<ScheduleKind>,
    /// Ramp times, units of `(2JN²)^{-1}`.
    pub ta: Option<Vec<f64>>,
    /// Sensing times, units of `(2JN²)^{-1}`.
    pub tint_grid: Option<Vec<f64>>,
    /// Transverse fields, units of `JN`.
    pub hx_grid: Option<Vec<f64>>,
    pub integrator: Option<IntegratorChoice>,
    pub gamma_c: Option<Vec<f64>>,
    pub gamma: Option<f64>,
    pub shots: Option<f64>,
    pub t_int: Option<f64>,
    pub t_total: Option<f64>,
    pub t_prep: Option<f64>,
    pub epsilon: Option<f64>,
    pub c: Option<f64>,
    pub c_tilde: Option<f64>,
    pub variant: Option<BudgetVariant>,
    pub offset: Option<OffsetPolicy>,
    pub fd_step: Option<f64>,
    pub alpha: Option<f64>,
    /// Longitudinal fields, units of `JN`.
    pub hz_grid: Option<Vec<f64>>,
    pub probability: Option<f64>,
    pub count: Option<usize>,
    pub n_max: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

fn number(text: &str) -> Result<f64> {
    let t = text.trim();
    let v = match t {
        "pi" => std::f64::consts::PI,
        "pi/2" => std::f64::consts::FRAC_PI_2,
        _ => t
            .parse::<f64>()
            .map_err(|_| anyhow!("`{t}` is not a number"))?,
    };
    if !v.is_finite() {
        bail!("`{t}` is not finite");
    }
    Ok(v)
}

fn integer<T: FromStr>(text: &str) -> Result<T> {
    text.trim()
        .parse::<T>()
        .map_err(|_| anyhow!("`{}` is not a nonnegative integer", text.trim()))
}

impl Settings {
    /// Parses `text` into the setting named `key`.
    pub fn set(&mut self, key: &str, text: &str) -> Result<()> {
        match key {
            "kind" => self.kind = Some(text.trim().parse()?),
            "N" => self.n = Some(parse_sizes(text)?),
            "h0x_over_JN" => self.h0x_over_jn = Some(number(text)?),
            "start" => {
                self.start = Some(match text.trim() {
                    "projected" => StartState::StrongFieldProjected,
                    "ground" => StartState::GroundState,
                    t => bail!("start must be `projected` or `ground`, got `{t}`"),
                })
            }
            "schedule" => {
                self.schedule = Some(match text.trim() {
                    "cosine-sine" => ScheduleKind::CosineSine,
                    "linear" => ScheduleKind::Linear,
                    t => bail!("schedule must be `cosine-sine` or `linear`, got `{t}`"),
                })
            }
            "Ta" => self.ta = Some(parse_grid(text)?),
            "tint_grid" => self.tint_grid = Some(parse_grid(text)?),
            "hx_grid" => self.hx_grid = Some(parse_grid(text)?),
            "integrator" => {
                self.integrator = Some(match text.trim() {
                    "midpoint" => IntegratorChoice::Midpoint,
                    "cf4" => IntegratorChoice::FourthOrder,
                    "cf4-fixed" => IntegratorChoice::FourthOrderFixed,
                    t => bail!("integrator must be `midpoint`, `cf4` or `cf4-fixed`, got `{t}`"),
                })
            }
            "gamma_c" => self.gamma_c = Some(parse_grid(text)?),
            "gamma" => self.gamma = Some(number(text)?),
            "M" => self.shots = Some(number(text)?),
            "T_int" => self.t_int = Some(number(text)?),
            "T" => self.t_total = Some(number(text)?),
            "T_prep" => self.t_prep = Some(number(text)?),
            "epsilon" => self.epsilon = Some(number(text)?),
            "C" => self.c = Some(number(text)?),
            "C_tilde" => self.c_tilde = Some(number(text)?),
            "variant" => {
                self.variant = Some(match text.trim() {
                    "averaged" => BudgetVariant::Averaged,
                    "single-shot" => BudgetVariant::SingleShot,
                    t => bail!("variant must be `averaged` or `single-shot`, got `{t}`"),
                })
            }
            "offset" => {
                self.offset = Some(match text.trim() {
                    "smallest" => OffsetPolicy::SmallestBranch,
                    t => OffsetPolicy::FixedTotal(number(t)?),
                })
            }
            "fd_step" => self.fd_step = Some(number(text)?),
            "alpha" => self.alpha = Some(number(text)?),
            "hz_grid" => self.hz_grid = Some(parse_grid(text)?),
            "probability" => self.probability = Some(number(text)?),
            "count" => self.count = Some(integer(text)?),
            "n_max" => self.n_max = Some(integer(text)?),
            "out" => self.out = Some(PathBuf::from(text.trim())),
            "seed" => self.seed = Some(integer(text)?),
            _ => bail!("unknown setting `{key}`"),
        }
        Ok(())
    }

    /// Values in `other` replace those in `self`.
    pub fn merge(mut self, other: Settings) -> Settings {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            kind,
            n,
            h0x_over_jn,
            start,
            schedule,
            ta,
            tint_grid,
            hx_grid,
            integrator,
            gamma_c,
            gamma,
            shots,
            t_int,
            t_total,
            t_prep,
            epsilon,
            c,
            c_tilde,
            variant,
            offset,
            fd_step,
            alpha,
            hz_grid,
            probability,
            count,
            n_max,
            out,
            seed
        );
        self
    }

    /// Built-in defaults for `kind`.
    pub fn defaults(kind: Kind) -> Settings {
        let mut s = Settings::default();
        let mut put = |k: &str, v: &str| s.set(k, v).expect("built-in default parses");
        match kind.experiment() {
            Experiment::Overlap => {
                put("N", "10,50,100");
                put("hx_grid", "0:3:0.01");
            }
            Experiment::GapScaling => {
                put("N", "10:100:10");
                put("hx_grid", "0:3:0.01");
            }
            Experiment::ScanTa => put("Ta", "1:300:1"),
            Experiment::UncertaintySweep | Experiment::IndexScaling => {
                put("tint_grid", "1:199:2");
                put("offset", "pi/2");
                put("fd_step", "1e-10");
            }
            Experiment::RampOptima => {}
            Experiment::Limits => {}
            Experiment::DephasingWindow => {
                put("gamma_c", "0.01,0.03,0.05");
                put("n_max", "1000");
            }
            Experiment::TimeBudget => put("variant", "averaged"),
            Experiment::BoundsCheck => {
                put("N", "10");
                put("tint_grid", "1,10,100");
                put("count", "10000");
            }
            Experiment::SzReadout => {
                put("N", "10");
                put("tint_grid", "1");
                put("hz_grid", "0:1.5:0.01");
                put("alpha", "0");
                put("M", "1");
                put("fd_step", "1e-6");
            }
        }
        if matches!(
            kind.experiment(),
            Experiment::ScanTa
                | Experiment::UncertaintySweep
                | Experiment::RampOptima
                | Experiment::IndexScaling
        ) {
            put("N", "10");
            put("schedule", "cosine-sine");
            put("start", "projected");
            put(
                "integrator",
                if kind.experiment() == Experiment::RampOptima {
                    "cf4-fixed"
                } else {
                    "cf4"
                },
            );
        }
        if let Kind::Figure(f) = kind {
            for (k, v) in f.defaults() {
                put(k, v);
            }
        }
        s
    }

    /// `h_0/JN`: 1 for the projected start, 2 when starting from the ground
    /// state at finite field.
    pub fn initial_field(&self) -> f64 {
        self.h0x_over_jn.unwrap_or(match self.start {
            Some(StartState::GroundState) => 2.0,
            _ => 1.0,
        })
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| {
            std::env::var_os(OUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
        })
    }
}

fn toml_text(value: &toml::Value) -> Result<String> {
    Ok(match value {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => format!("{f:?}"),
        toml::Value::Array(items) => items
            .iter()
            .map(toml_text)
            .collect::<Result<Vec<_>>>()?
            .join(","),
        other => bail!("unsupported value type {}", other.type_str()),
    })
}

/// Parses config text. Every problem is returned as a diagnostic; the
/// settings hold whatever parsed cleanly.
pub fn parse_config(text: &str) -> (Settings, Vec<String>) {
    let mut settings = Settings::default();
    let mut problems = Vec::new();
    let table: toml::Table = match text.parse() {
        Ok(t) => t,
        Err(e) => {
            let msg = e.to_string();
            problems.push(format!(
                "malformed config: {}",
                msg.lines().next().unwrap_or("parse error").trim()
            ));
            return (settings, problems);
        }
    };
    for (section, body) in &table {
        let Some(body) = body.as_table() else {
            problems.push(format!(
                "top-level key `{section}` must sit inside a [section]"
            ));
            continue;
        };
        for (key, value) in body {
            match KEYS.iter().find(|(k, _, _)| k == key) {
                None => problems.push(format!("unknown key `{key}` in [{section}]")),
                Some((_, home, _)) if home != section => problems.push(format!(
                    "key `{key}` belongs in [{home}], found in [{section}]"
                )),
                Some(_) => {
                    if let Err(e) = toml_text(value).and_then(|t| settings.set(key, &t)) {
                        problems.push(format!("[{section}] {key}: {e}"));
                    }
                }
            }
        }
    }
    (settings, problems)
}

pub fn load_config(path: &Path) -> Result<(Settings, Vec<String>)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    Ok(parse_config(&text))
}

fn flag(key: &str) -> &'static str {
    KEYS.iter()
        .find(|(k, _, _)| *k == key)
        .map_or("", |(_, _, f)| f)
}

fn missing(out: &mut Vec<String>, kind: Kind, key: &str, present: bool) {
    if !present {
        let section = KEYS
            .iter()
            .find(|(k, _, _)| *k == key)
            .map_or("", |(_, s, _)| s);
        out.push(format!(
            "missing `{key}`: required by {kind} (set {} or [{section}] {key})",
            flag(key)
        ));
    }
}

fn all_positive(out: &mut Vec<String>, key: &str, values: &Option<Vec<f64>>, allow_zero: bool) {
    if let Some(v) = values {
        if v.is_empty() {
            out.push(format!("`{key}` is empty"));
        } else if let Some(bad) = v
            .iter()
            .find(|&&x| if allow_zero { x < 0.0 } else { x <= 0.0 })
        {
            let need = if allow_zero {
                "nonnegative"
            } else {
                "positive"
            };
            out.push(format!("`{key}` values must be {need}, got {bad}"));
        }
    }
}

/// Every missing or inconsistent field for `kind`. An empty list means the
/// settings are runnable.
pub fn validate_config(kind: Kind, s: &Settings) -> Vec<String> {
    use Experiment::*;
    let exp = kind.experiment();
    let mut out = Vec::new();

    let needs_n = exp != DephasingWindow || s.gamma.is_some();
    match &s.n {
        None => missing(&mut out, kind, "N", !needs_n),
        Some(ns) if ns.is_empty() => out.push("`N` is empty".into()),
        Some(ns) => {
            for &n in ns {
                if exp.needs_even_n() && (n < 2 || n % 2 == 1) {
                    out.push(format!("N must be even and at least 2 (got {n})"));
                } else if n == 0 {
                    out.push("N must be at least 1 (got 0)".into());
                }
            }
        }
    }
    if let Some(h) = s.h0x_over_jn {
        if !(h > 0.0) {
            out.push(format!("h0x_over_JN must be positive, got {h}"));
        }
    }
    if let Some(p) = s.probability {
        if !(0.0..1.0).contains(&p) {
            out.push(format!("probability must lie in [0, 1), got {p}"));
        }
    }
    if let Some(m) = s.shots {
        if !(m >= 1.0) {
            out.push(format!("M must be at least 1, got {m}"));
        }
    }
    if let Some(step) = s.fd_step {
        if !(step > 0.0) {
            out.push(format!("fd_step must be positive, got {step}"));
        }
    }

    match exp {
        Overlap => {
            missing(&mut out, kind, "hx_grid", s.hx_grid.is_some());
            all_positive(&mut out, "hx_grid", &s.hx_grid, true);
        }
        GapScaling => {
            if s.n.as_ref().is_some_and(|n| n.len() < 2) {
                out.push("gap-scaling needs at least two values of N for a fit".into());
            }
            missing(&mut out, kind, "hx_grid", s.hx_grid.is_some());
            all_positive(&mut out, "hx_grid", &s.hx_grid, true);
            if s.hx_grid.as_ref().is_some_and(|g| g.len() < 2) {
                out.push("`hx_grid` needs at least two points to bracket the minimum".into());
            }
        }
        ScanTa => {
            missing(&mut out, kind, "Ta", s.ta.is_some());
            all_positive(&mut out, "Ta", &s.ta, false);
        }
        UncertaintySweep | IndexScaling => {
            missing(&mut out, kind, "tint_grid", s.tint_grid.is_some());
            all_positive(&mut out, "tint_grid", &s.tint_grid, false);
            all_positive(&mut out, "Ta", &s.ta, false);
            if let (Some(ta), Some(n)) = (&s.ta, &s.n) {
                if ta.len() != 1 && ta.len() != n.len() {
                    out.push(format!(
                        "`Ta` lists {} values for {} values of N; give one or one per N",
                        ta.len(),
                        n.len()
                    ));
                }
            }
            if let Some(OffsetPolicy::FixedTotal(h)) = s.offset {
                if !(h > 0.0) {
                    out.push(format!("offset must be positive or `smallest`, got {h}"));
                }
            }
            missing(&mut out, kind, "offset", s.offset.is_some());
            let paper_protocol = s.schedule != Some(ScheduleKind::Linear)
                && s.start != Some(StartState::GroundState);
            if s.ta.is_none() && !paper_protocol {
                out.push(format!(
                    "missing `Ta`: {kind} locates the optimal ramp time only for the cosine-sine schedule with the projected start"
                ));
            }
            missing(&mut out, kind, "fd_step", s.fd_step.is_some());
        }
        RampOptima => {
            all_positive(&mut out, "Ta", &s.ta, false);
            if s.ta.as_ref().is_some_and(|t| t.len() < 3) {
                out.push("`Ta` needs at least three points to locate a local maximum".into());
            }
            if s.schedule == Some(ScheduleKind::Linear) || s.start == Some(StartState::GroundState)
            {
                out.push(format!(
                    "{kind} supports only the cosine-sine schedule with the projected start"
                ));
            }
        }
        Limits => {
            missing(&mut out, kind, "M", s.shots.is_some());
            missing(&mut out, kind, "T_int", s.t_int.is_some());
            for (key, v) in [("T_int", s.t_int), ("T", s.t_total)] {
                if let Some(v) = v {
                    if !(v > 0.0) {
                        out.push(format!("{key} must be positive, got {v}"));
                    }
                }
            }
        }
        DephasingWindow => {
            missing(&mut out, kind, "gamma_c", s.gamma_c.is_some());
            all_positive(&mut out, "gamma_c", &s.gamma_c, true);
            missing(&mut out, kind, "n_max", s.n_max.is_some());
            if s.n_max.is_some_and(|n| n < 2) {
                out.push("n_max must be at least 2".into());
            }
            if let Some(g) = s.gamma {
                if !(g >= 0.0) {
                    out.push(format!("gamma must be nonnegative, got {g}"));
                }
                missing(&mut out, kind, "T", s.t_total.is_some());
            }
        }
        TimeBudget => {
            missing(&mut out, kind, "epsilon", s.epsilon.is_some());
            missing(&mut out, kind, "C", s.c.is_some());
            if s.variant != Some(ghz_adiabatic::metrology::BudgetVariant::SingleShot) {
                missing(&mut out, kind, "C_tilde", s.c_tilde.is_some());
            }
            if let Some(e) = s.epsilon {
                if !(0.0..=0.5).contains(&e) {
                    out.push(format!("epsilon = {e} violates 0 ≤ ε ≤ 1/2 (the sensing time must not outgrow the total time)"));
                }
            }
            for (key, v) in [("C", s.c), ("C_tilde", s.c_tilde)] {
                if let Some(v) = v {
                    if !(v > 0.0) {
                        out.push(format!("{key} must be positive, got {v}"));
                    }
                }
            }
        }
        BoundsCheck => {
            missing(&mut out, kind, "seed", s.seed.is_some());
            missing(&mut out, kind, "tint_grid", s.tint_grid.is_some());
            all_positive(&mut out, "tint_grid", &s.tint_grid, false);
            if s.count == Some(0) {
                out.push("count must be at least 1".into());
            }
        }
        SzReadout => {
            missing(&mut out, kind, "tint_grid", s.tint_grid.is_some());
            all_positive(&mut out, "tint_grid", &s.tint_grid, false);
            missing(&mut out, kind, "hz_grid", s.hz_grid.is_some());
            all_positive(&mut out, "hz_grid", &s.hz_grid, true);
        }
    }
    out
}
