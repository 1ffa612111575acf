//! Run configuration: command-line flags override an optional TOML config
//! file, which overrides built-in defaults.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Deserialize;

use qes_core::families::{FamilyError, HyperbolicFamily, OscillatorFamily};
use qes_core::susy::{build_pair, GeneratingFunction, SuperpotentialPair, SusyError, ZeroClass};
use qes_core::wavefun::recommended_half_width;
use qes_core::{parse, ExprAst, Grid, GridError};

use crate::CliError;

/// Default free factorization energy for type-1 runs with no `--eps`.
pub const DEFAULT_TYPE1_EPS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

/// Raw options as collected from flags; `None` means "not given".
#[derive(Debug, Default, Clone)]
pub struct RawOptions {
    pub family: Option<String>,
    pub wplus: Option<String>,
    pub m: Option<usize>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    pub big_a: Option<f64>,
    pub big_b: Option<f64>,
    pub eps: Option<f64>,
    pub x0: Option<f64>,
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub n: Option<usize>,
    pub tol_eig: Option<f64>,
    pub tol_res: Option<f64>,
    pub tol_oracle: Option<f64>,
    pub targets: Option<Vec<f64>>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
}

/// The same options as read from a TOML config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    pub family: Option<String>,
    pub wplus: Option<String>,
    pub m: Option<usize>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub alpha: Option<f64>,
    pub c: Option<f64>,
    #[serde(rename = "A")]
    pub big_a: Option<f64>,
    #[serde(rename = "B")]
    pub big_b: Option<f64>,
    pub eps: Option<f64>,
    pub x0: Option<f64>,
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub n: Option<usize>,
    pub tol_eig: Option<f64>,
    pub tol_res: Option<f64>,
    pub tol_oracle: Option<f64>,
    pub targets: Option<Vec<f64>>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
}

pub fn load_file(path: &Path) -> Result<FileOptions, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config file {path:?}: {e}")))?;
    toml::from_str(&text)
        .map_err(|e| CliError::config(format!("cannot parse config file {path:?}: {e}")))
}

/// Overlay flags on top of file options.
pub fn merge(mut flags: RawOptions, file: FileOptions) -> Result<RawOptions, CliError> {
    flags.family = flags.family.or(file.family);
    flags.wplus = flags.wplus.or(file.wplus);
    flags.m = flags.m.or(file.m);
    flags.a = flags.a.or(file.a);
    flags.b = flags.b.or(file.b);
    flags.alpha = flags.alpha.or(file.alpha);
    flags.c = flags.c.or(file.c);
    flags.big_a = flags.big_a.or(file.big_a);
    flags.big_b = flags.big_b.or(file.big_b);
    flags.eps = flags.eps.or(file.eps);
    flags.x0 = flags.x0.or(file.x0);
    flags.xmin = flags.xmin.or(file.xmin);
    flags.xmax = flags.xmax.or(file.xmax);
    flags.n = flags.n.or(file.n);
    flags.tol_eig = flags.tol_eig.or(file.tol_eig);
    flags.tol_res = flags.tol_res.or(file.tol_res);
    flags.tol_oracle = flags.tol_oracle.or(file.tol_oracle);
    flags.targets = flags.targets.or(file.targets);
    if flags.format.is_none() {
        flags.format = match file.format.as_deref() {
            None => None,
            Some(s) => Some(s.parse().map_err(CliError::config)?),
        };
    }
    flags.out = flags.out.or(file.out);
    Ok(flags)
}

/// Which worked family a run uses, when it uses one.
#[derive(Debug, Clone)]
pub enum FamilyKind {
    Oscillator(OscillatorFamily),
    Hyperbolic(HyperbolicFamily),
}

/// A fully resolved run: the constructed pair plus everything commands need.
pub struct Run {
    pub pair: SuperpotentialPair,
    pub family: Option<FamilyKind>,
    pub expression: Option<String>,
    pub x0: f64,
    pub grid: Grid,
    pub tol_eig: f64,
    pub tol_res: f64,
    pub tol_oracle: f64,
    pub targets: Vec<f64>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

fn family_err(e: FamilyError) -> CliError {
    CliError::config(e.to_string())
}

fn susy_config_err(e: SusyError) -> CliError {
    match e {
        SusyError::Eval(inner) => CliError::numerical(inner.to_string()),
        other => CliError::config(other.to_string()),
    }
}

/// Resolve a run from merged options. `default_n` differs per command.
pub fn resolve(opts: &RawOptions, default_n: usize) -> Result<Run, CliError> {
    let (pair, family, expression, x0, base_half) = build_source(opts)?;

    let n = opts.n.unwrap_or(default_n);
    let (xmin, xmax) = match (opts.xmin, opts.xmax) {
        (Some(lo), Some(hi)) => (lo, hi),
        (None, None) => {
            let half = recommended_half_width(&pair, base_half)
                .map_err(|e| CliError::numerical(format!("cannot pick a default domain: {e}")))?;
            (x0 - half, x0 + half)
        }
        _ => {
            return Err(CliError::config(
                "give both --xmin and --xmax, or neither".into(),
            ));
        }
    };
    let grid = Grid::new(xmin, xmax, n).map_err(|e: GridError| CliError::config(e.to_string()))?;

    let eps = pair.eps();
    let targets = opts.targets.clone().unwrap_or_else(|| vec![0.0, eps]);

    Ok(Run {
        pair,
        family,
        expression,
        x0,
        grid,
        tol_eig: opts.tol_eig.unwrap_or(5e-4),
        tol_res: opts.tol_res.unwrap_or(1e-6),
        tol_oracle: opts.tol_oracle.unwrap_or(1e-10),
        targets,
        format: opts.format.unwrap_or(OutputFormat::Csv),
        out: opts.out.clone(),
    })
}

type Source = (
    SuperpotentialPair,
    Option<FamilyKind>,
    Option<String>,
    f64,
    f64,
);

fn build_source(opts: &RawOptions) -> Result<Source, CliError> {
    match (&opts.family, &opts.wplus) {
        (Some(_), Some(_)) => Err(CliError::config(
            "--family and --wplus are mutually exclusive".into(),
        )),
        (None, None) => Err(CliError::config(
            "select a run with --family {oscillator|hyperbolic} or --wplus EXPR".into(),
        )),
        (Some(name), None) => match name.as_str() {
            "oscillator" => build_oscillator(opts),
            "hyperbolic" => build_hyperbolic(opts),
            other => Err(CliError::config(format!(
                "unknown family `{other}` (expected oscillator or hyperbolic)"
            ))),
        },
        (None, Some(src)) => build_expression(opts, src),
    }
}

fn build_oscillator(opts: &RawOptions) -> Result<Source, CliError> {
    let m = opts.m.ok_or_else(|| {
        CliError::config("the oscillator family needs --m (0 for the shifted oscillator)".into())
    })?;
    let fam = if m == 0 {
        let alpha = opts
            .alpha
            .ok_or_else(|| CliError::config("m = 0 needs --alpha".into()))?;
        let c = opts.c.unwrap_or(0.0);
        if opts.a.is_some() || opts.b.is_some() {
            return Err(CliError::config(
                "m = 0 is parameterized by --alpha/--c (a = 2, b = -2c are derived)".into(),
            ));
        }
        let fam = OscillatorFamily::pt_oscillator(alpha, c).map_err(family_err)?;
        if let Some(eps) = opts.eps {
            if (eps - fam.eps()).abs() > 1e-12 * fam.eps() {
                return Err(CliError::config(format!(
                    "m = 0 fixes eps = 4 alpha = {}, got --eps {eps}",
                    fam.eps()
                )));
            }
        }
        fam
    } else {
        let a = opts
            .a
            .ok_or_else(|| CliError::config("oscillator m >= 1 needs --a".into()))?;
        let b = opts
            .b
            .ok_or_else(|| CliError::config("oscillator m >= 1 needs --b".into()))?;
        OscillatorFamily::new(m, a, b).map_err(family_err)?
    };
    let gen = fam.as_generating_function().map_err(susy_config_err)?;
    // m >= 1 zeros are type 2: build_pair validates --eps against the forced value.
    let eps_choice = if m == 0 { Some(fam.eps()) } else { opts.eps };
    let pair = build_pair(gen, eps_choice).map_err(susy_config_err)?;
    Ok((pair, Some(FamilyKind::Oscillator(fam)), None, 0.0, 8.0))
}

fn build_hyperbolic(opts: &RawOptions) -> Result<Source, CliError> {
    let big_a = opts
        .big_a
        .ok_or_else(|| CliError::config("the hyperbolic family needs --A".into()))?;
    let alpha = opts
        .alpha
        .ok_or_else(|| CliError::config("the hyperbolic family needs --alpha".into()))?;
    let big_b = opts
        .big_b
        .ok_or_else(|| CliError::config("the hyperbolic family needs --B (0 allowed)".into()))?;
    let eps = if big_b == 0.0 {
        opts.eps
    } else {
        Some(opts.eps.unwrap_or(DEFAULT_TYPE1_EPS))
    };
    let fam = HyperbolicFamily::new(big_a, alpha, big_b, eps).map_err(family_err)?;
    let gen = fam.as_generating_function().map_err(susy_config_err)?;
    let pair = build_pair(gen, Some(fam.eps())).map_err(susy_config_err)?;
    let base_half = 6.0 / alpha;
    Ok((
        pair,
        Some(FamilyKind::Hyperbolic(fam)),
        None,
        0.0,
        base_half,
    ))
}

fn build_expression(opts: &RawOptions, src: &str) -> Result<Source, CliError> {
    let ast: ExprAst = parse(src).map_err(|e| CliError::config(e.to_string()))?;
    let x0 = opts.x0.unwrap_or(0.0);
    let gen = GeneratingFunction::new(Arc::new(ast), x0).map_err(susy_config_err)?;
    let eps_choice = match qes_core::susy::classify_zero(&gen).map_err(susy_config_err)? {
        ZeroClass::Type1 { .. } => Some(opts.eps.unwrap_or(DEFAULT_TYPE1_EPS)),
        ZeroClass::Type2 { .. } => opts.eps,
    };
    let pair = build_pair(gen, eps_choice).map_err(susy_config_err)?;
    Ok((pair, None, Some(src.to_owned()), x0, 8.0))
}
