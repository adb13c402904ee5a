//! Configuration-driven orchestration: parse a JSON run configuration,
//! dispatch to the library operations, and emit a deterministic JSON report
//! plus optional CSV curve data.
//!
//! Determinism contract: for identical (config, seed) the serialized report
//! is byte-identical. Anything non-reproducible (wall time) goes to stderr,
//! never into the report.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::classify::{classify, Verdict};
use crate::error::{Error, Result};
use crate::hankel::{
    default_kernel_points, default_sample_pairs, gram_matrix, strict_positivity_report,
    verify_symbol, GramSource, StrictnessVerdict,
};
use crate::measure::{builtin_measure, carleson_ratio_check, CarlesonMeasure, MeasureJson};
use crate::numerics::{integrate_halfline, ComplexMatrix, QuadratureSpec};
use crate::pick::{kappa_bound_check, pick_boundary};
use crate::simulator::{quadruple_checks, Grid};
use crate::symbol::{
    beta_symbol, builtin_symbol, example_beta_closed, example_projection,
    example_projection_spec, ProjectionSpec, Symbol,
};

pub const SCHEMA: &str = "hankel-symbol-lab/1";

fn config_err(path: &str, message: impl Into<String>) -> Error {
    Error::ConfigError {
        path: path.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Integrals,
    Pick,
    Symbol,
    VerifySymbol,
    Gram,
    Positivity,
    Classify,
    ExampleT,
    Simulate,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Integrals => "integrals",
            Command::Pick => "pick",
            Command::Symbol => "symbol",
            Command::VerifySymbol => "verify-symbol",
            Command::Gram => "gram",
            Command::Positivity => "positivity",
            Command::Classify => "classify",
            Command::ExampleT => "example-t",
            Command::Simulate => "simulate",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolSpec {
    pub name: String,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(default)]
    pub dim: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct SimGridSpec {
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub x_max: Option<f64>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub t_list: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct GridsSpec {
    #[serde(default)]
    pub x_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub gram_points: Option<usize>,
    #[serde(default)]
    pub simulator: Option<SimGridSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub measure: Option<MeasureJson>,
    #[serde(default)]
    pub symbol: Option<SymbolSpec>,
    /// Real projection matrix, row-major.
    #[serde(default)]
    pub projection: Option<Vec<Vec<f64>>>,
    /// Real coupling matrix for the off-diagonal block, row-major.
    #[serde(default, rename = "C")]
    pub coupling: Option<Vec<Vec<f64>>>,
    /// Family parameter for `example-t`.
    #[serde(default)]
    pub t: Option<f64>,
    #[serde(default)]
    pub grids: GridsSpec,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub quadrature: Option<QuadratureSpec>,
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(s)
            .map_err(|e| config_err("<config>", e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        for (key, &value) in &self.tolerances {
            if !(value > 0.0) {
                return Err(config_err(
                    &format!("tolerances.{key}"),
                    format!("tolerance must be positive, got {value}"),
                ));
            }
        }
        if let Some(spec) = &self.quadrature {
            spec.validate()?;
        }
        match self.command {
            Command::Pick | Command::VerifySymbol | Command::Positivity => {
                if self.measure.is_none() {
                    return Err(config_err(
                        "measure",
                        format!("required for command {}", self.command.as_str()),
                    ));
                }
            }
            Command::Gram => {
                if self.measure.is_none() && self.symbol.is_none() {
                    return Err(config_err(
                        "measure|symbol",
                        "gram needs a measure or a symbol source",
                    ));
                }
            }
            Command::Simulate | Command::Classify => {
                if self.symbol.is_none() {
                    return Err(config_err(
                        "symbol",
                        format!("required for command {}", self.command.as_str()),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    fn tol(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }

    fn quad(&self) -> QuadratureSpec {
        self.quadrature.unwrap_or_default()
    }

    /// Symmetric log-spaced default grid, |x| ∈ [10⁻³, 10³].
    fn x_grid(&self) -> Vec<f64> {
        if let Some(g) = &self.grids.x_grid {
            return g.clone();
        }
        let mut grid = Vec::new();
        for k in 0..=12 {
            let x = 10f64.powf(-3.0 + 0.5 * k as f64);
            grid.push(-x);
            grid.push(x);
        }
        grid.sort_by(f64::total_cmp);
        grid
    }

    fn build_measure(&self) -> Result<Option<CarlesonMeasure>> {
        match &self.measure {
            None => Ok(None),
            Some(json) => {
                if let Some(handle) = &json.density {
                    if json.atoms.is_empty() {
                        // Builtin handles go through the registry so config
                        // shorthand and library constructor agree.
                        return Ok(Some(builtin_measure(
                            &handle.name,
                            &handle.params,
                            json.dim,
                        )?));
                    }
                }
                Ok(Some(CarlesonMeasure::from_json(json)?))
            }
        }
    }

    fn build_symbol(&self, mu: Option<&CarlesonMeasure>) -> Result<Symbol> {
        let spec = self
            .symbol
            .as_ref()
            .ok_or_else(|| config_err("symbol", "missing symbol specification"))?;
        if spec.name == "beta" {
            let mu = mu.ok_or_else(|| {
                config_err("measure", "symbol \"beta\" needs a measure")
            })?;
            let ps = self.build_projection_spec(mu.dim())?;
            return beta_symbol(mu, &ps, &self.quad());
        }
        let dim = spec.dim.unwrap_or_else(|| mu.map_or(1, |m| m.dim()));
        builtin_symbol(&spec.name, &spec.params, dim)
    }

    fn real_matrix(rows: &[Vec<f64>], path: &str) -> Result<ComplexMatrix> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(config_err(path, "matrix must be square"));
        }
        Ok(ComplexMatrix::from_real_rows(rows))
    }

    fn build_projection(&self, dim: usize) -> Result<ComplexMatrix> {
        match &self.projection {
            Some(rows) => Self::real_matrix(rows, "projection"),
            None if dim == 4 => Ok(example_projection()),
            None => Err(config_err("projection", "required for this command")),
        }
    }

    fn build_projection_spec(&self, dim: usize) -> Result<ProjectionSpec> {
        match (&self.projection, &self.coupling) {
            (Some(p_rows), Some(c_rows)) => ProjectionSpec::new(
                Self::real_matrix(p_rows, "projection")?,
                Self::real_matrix(c_rows, "C")?,
            ),
            (None, None) if dim == 4 => {
                let t = self.t.unwrap_or(0.5);
                example_projection_spec(t)
            }
            _ => Err(config_err(
                "projection|C",
                "beta symbol needs both a projection and a coupling matrix",
            )),
        }
    }
}

/// One verdict line in a report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub threshold: f64,
    /// "max" — pass iff value ≤ threshold; "min" — pass iff value ≥ threshold.
    pub sense: &'static str,
}

impl Check {
    fn upper(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            pass: value <= threshold,
            value,
            threshold,
            sense: "max",
        }
    }

    fn lower(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            pass: value >= threshold,
            value,
            threshold,
            sense: "min",
        }
    }

    fn boolean(name: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            pass,
            value: if pass { 1.0 } else { 0.0 },
            threshold: 1.0,
            sense: "min",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub results: Value,
}

impl Report {
    fn new(command: Command, seed: u64, checks: Vec<Check>, results: Value) -> Self {
        Self {
            schema: SCHEMA,
            command: command.as_str(),
            version: env!("CARGO_PKG_VERSION"),
            seed,
            pass: checks.iter().all(|c| c.pass),
            checks,
            results,
        }
    }

    pub fn to_json_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("report is serializable");
        bytes.push(b'\n');
        bytes
    }
}

/// A named CSV artifact produced by a run.
#[derive(Debug, Clone)]
pub struct CsvFile {
    pub name: String,
    pub content: String,
}

/// Runs a configuration. Numeric check failures are embedded in the report
/// (pass = false); hard errors (bad config, non-convergent quadrature) are
/// returned as Err.
pub fn run(config: &RunConfig) -> Result<(Report, Vec<CsvFile>)> {
    config.validate()?;
    match config.command {
        Command::Integrals => run_integrals(config),
        Command::Pick => run_pick(config),
        Command::Symbol => run_symbol(config),
        Command::VerifySymbol => run_verify_symbol(config),
        Command::Gram => run_gram(config),
        Command::Positivity => run_positivity(config),
        Command::Classify => run_classify(config),
        Command::ExampleT => run_example_t(config),
        Command::Simulate => run_simulate(config),
    }
}

fn fmt_c(c: Complex64) -> String {
    format!("{:.17e},{:.17e}", c.re, c.im)
}

// ---------------------------------------------------------------------------
// integrals

/// The eight closed-form half-line integral identities used throughout the
/// boundary-value computations, as (name, integrand(λ, x), closed form(x)).
type Integrand = fn(f64, f64) -> f64;
type Closed = fn(f64) -> f64;

pub fn integral_identities() -> Vec<(&'static str, Integrand, Closed)> {
    use std::f64::consts::FRAC_2_PI;
    vec![
        (
            "a",
            (|lam, x| FRAC_2_PI * x / (x * x + lam * lam)) as Integrand,
            (|_x| 1.0) as Closed,
        ),
        (
            "b",
            |lam, x| FRAC_2_PI * x / (x * x + lam * lam) / (1.0 + lam * lam),
            |x| 1.0 / (1.0 + x),
        ),
        (
            "c",
            |lam, x| FRAC_2_PI * x / (x * x + lam * lam) * lam * lam / (1.0 + lam * lam),
            |x| x / (1.0 + x),
        ),
        (
            "d",
            |lam, x| {
                FRAC_2_PI
                    * (lam / (x * x + lam * lam) - lam / (1.0 + lam * lam))
                    * lam
                    / (1.0 + lam * lam)
            },
            |x| 1.0 / (1.0 + x) - 0.5,
        ),
        (
            "e",
            |lam, x| FRAC_2_PI * (lam - 1.0) / (lam.sqrt() * (x * x + lam * lam)),
            |x| (2.0 * x).sqrt() * (x - 1.0) / (x * x),
        ),
        (
            "f",
            |lam, x| {
                FRAC_2_PI * lam / (x * x + lam * lam) * lam.sqrt() * (lam - 1.0)
                    / (1.0 + lam * lam)
            },
            |x| std::f64::consts::SQRT_2 * x.sqrt() / (1.0 + x),
        ),
        (
            "g",
            |lam, x| {
                FRAC_2_PI
                    * (lam / (x * x + lam * lam) - lam / (1.0 + lam * lam))
                    * lam.sqrt()
                    * (lam - 1.0)
                    / (1.0 + lam * lam)
            },
            |x| std::f64::consts::SQRT_2 * (x.sqrt() / (1.0 + x) - 0.5),
        ),
        (
            "h",
            |lam, x| lam * (x * x - 1.0) / ((lam * lam + x * x) * (lam * lam + 1.0)),
            |x| x.ln(),
        ),
    ]
}

fn run_integrals(config: &RunConfig) -> Result<(Report, Vec<CsvFile>)> {
    let spec = config.quad();
    let tol = config.tol("integrals_rel_tol", 1e-8);
    let xs = [0.25, 0.5, 1.0, 2.0, 4.0];
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for (name, integrand, closed) in integral_identities() {
        for &x in &xs {
            let numeric = integrate_halfline(
                &|lam: f64| ComplexMatrix::scalar(Complex64::new(integrand(lam, x), 0.0)),
                &spec,
            )?
            .get(0, 0)
            .re;
            let exact = closed(x);
            let err = (numeric - exact).abs() / exact.abs().max(1.0);
            checks.push(Check::upper(format!("identity_{name}_x_{x}"), err, tol));
            rows.push(json!({
                "identity": name,
                "x": x,
                "numeric": numeric,
                "closed_form": exact,
                "relative_error": err,
            }));
        }
    }
    let report = Report::new(
        Command::Integrals,
        config.seed(),
        checks,
        json!({ "identities": rows }),
    );
    Ok((report, Vec::new()))
}

// ---------------------------------------------------------------------------
// pick

fn run_pick(config: &RunConfig) -> Result<(Report, Vec<CsvFile>)> {
    let mu = config.build_measure()?.expect("validated");
    let spec = config.quad();
    let sym_tol = config.tol("symmetry_tol", 1e-9);
    let grid = config.x_grid();
    let positive: Vec<f64> = grid.iter().copied().filter(|&x| x > 0.0).collect();

    let d = mu.dim();
    let mut csv = String::new();
    csv.push_str("x");
    for part in ["r", "i"] {
        for j in 0..d {
            for k in 0..d {
                csv.push_str(&format!(",{part}_{j}{k}_re,{part}_{j}{k}_im"));
            }
        }
    }
    csv.push('\n');

    let mut even_defect = 0.0f64;
    let mut odd_defect = 0.0f64;
    let mut min_signed_eig = f64::INFINITY;
    for &x in &grid {
        if x == 0.0 {
            continue;
        }
        let (r, i) = pick_boundary(&mu, x, &spec)?;
        let (r_neg, i_neg) = pick_boundary(&mu, -x, &spec)?;
        even_defect = even_defect.max(r.sub(&r_neg).max_abs());
        odd_defect = odd_defect.max(i.add(&i_neg).max_abs());
        let signed = i.scale_re(x.signum());
        let spectrum = crate::numerics::hermitian_spectrum(
            &signed.add(&signed.adjoint()).scale_re(0.5),
        )?;
        min_signed_eig = min_signed_eig.min(*spectrum.first().expect("d ≥ 1"));

        csv.push_str(&format!("{x:.17e}"));
        for m in [&r, &i] {
            for j in 0..d {
                for k in 0..d {
                    csv.push_str(&format!(",{}", fmt_c(m.get(j, k))));
                }
            }
        }
        csv.push('\n');
    }

    let bound = kappa_bound_check(&mu, 1.0, &positive, &spec)?;
    let checks = vec![
        Check::upper("boundary_real_part_even", even_defect, sym_tol),
        Check::upper("boundary_imag_part_odd", odd_defect, sym_tol),
        Check::lower("signed_imag_part_psd_min_eig", min_signed_eig, -sym_tol),
        Check::upper("i_norm_ratio_bound", bound.max_i_ratio, 1.0 + 1e-8),
        Check::upper("r_norm_ratio_bound", bound.max_r_ratio, 1.0 + 1e-8),
    ];
    let report = Report::new(
        Command::Pick,
        config.seed(),
        checks,
        json!({
            "measure": mu.to_json(),
            "grid_points": grid.len(),
            "kappa_bound": bound,
        }),
    );
    Ok((
        report,
        vec![CsvFile {
            name: "pick.csv".into(),
            content: csv,
        }],
    ))
}

// ---------------------------------------------------------------------------
// symbol

fn run_symbol(config: &RunConfig) -> Result<(Report, Vec<CsvFile>)> {
    let mu = config.build_measure()?;
    let mut h = config.build_symbol(mu.as_ref())?;
    let grid = config.x_grid();
    let tol = config.tol("symbol_check_tol", 1e-9);

    let unitary = h.check_unitary(&grid, tol)?;
    let sharp = h.check_sharp_fixed(&grid, tol)?;
    let flat = h.check_flat_fixed(&grid, tol)?;

    let d = h.dim();
    let mut csv = String::from("x");
    for j in 0..d {
        for k in 0..d {
            csv.push_str(&format!(",h_{j}{k}_re,h_{j}{k}_im"));
        }
    }
    csv.push('\n');
    for &x in &grid {
        if x == 0.0 {
            continue;
        }
        let m = h.eval(x)?;
        csv.push_str(&format!("{x:.17e}"));
        for j in 0..d {
            for k in 0..d {
                csv.push_str(&format!(",{}", fmt_c(m.get(j, k))));
            }
        }
        csv.push('\n');
    }

    let checks = vec![
        Check::boolean("unitary_on_grid", unitary.passed()),
        Check::boolean("sharp_fixed_on_grid", sharp.passed()),
        Check::boolean("flat_fixed_on_grid", flat.passed()),
    ];
    let report = Report::new(
        Command::Symbol,
        config.seed(),
        checks,
        json!({
            "symbol": h.name(),
            "dim": d,
            "flags": h.flags(),
        }),
    );
    Ok((
        report,
        vec![CsvFile {
            name: "symbol.csv".into(),
            content: csv,
        }],
    ))
}

// ---------------------------------------------------------------------------
// verify-symbol

fn run_verify_symbol(config: &RunConfig) -> Result<(Report, Vec<CsvFile>)> {
    let mu = config.build_measure()?.expect("validated");
    let h = config.build_symbol(Some(&mu))?;
    let spec = config.quad();
    let tol = config.tol("verify_tol", 1e-6);
    let pairs = default_sample_pairs(mu.dim(), 12);
    let worst = verify_symbol(&mu, &h, &pairs, &spec)?;
    let checks = vec![Check::upper("hankel_form_match", worst, tol)];
    let report = Report::new(
        Command::VerifySymbol,
        config.seed(),
        checks,
        json!({
            "measure": mu.to_json(),
            "symbol": h.name(),
            "sample_pairs": pairs.len(),
            "worst_defect": worst,
        }),
    );
    Ok((report, Vec::new()))
}

// ---------------------------------------------------------------------------
// gram

fn run_gram(config: &RunConfig) -> Result<(Report, Vec<CsvFile>)> {
    let mu = config.build_measure()?;
    let spec = config.quad();
    let tol = config.tol("gram_psd_tol", 1e-9);
    let (report_json, gram, dim, label) = if let Some(m) = &mu {
        let points = default_kernel_points(m.dim(), config.grids.gram_points.unwrap_or(6));
        let g = gram_matrix(&GramSource::Measure(m), &points, &spec)?;
        (json!({"measure": m.to_json()}), g, m.dim(), "measure")
    } else {
        let h = config.build_symbol(None)?;
        let points = default_kernel_points(h.dim(), config.grids.gram_points.unwrap_or(6));
        let g = gram_matrix(&GramSource::Symbol(&h), &points, &spec)?;
        (json!({"symbol": h.name()}), g, h.dim(), "symbol")
    };
    let checks = vec![Check::lower("gram_min_eig", gram.min_eig, -tol)];
    let mut results = report_json;
    results["source"] = json!(label);
    results["dim"] = json!(dim);
    results["gram"] = serde_json::to_value(&gram).expect("serializable");
    let report = Report::new(Command::Gram, config.seed(), checks, results);
    Ok((report, Vec::new()))
}

// ---------------------------------------------------------------------------
// positivity

fn positivity_grid() -> Vec<f64> {
    // 64 log-spaced density sample points in [10⁻³, 10³].
    (0..64)
        .map(|k| 10f64.powf(-3.0 + 6.0 * k as f64 / 63.0))
        .collect()
}

fn run_positivity(config: &RunConfig) -> Result<(Report, Vec<CsvFile>)> {
    let mu = config.build_measure()?.expect("validated");
    let spec = config.quad();
    let report_inner = strict_positivity_report(&mu, &positivity_grid(), &spec)?;
    let decided = report_inner.verdict != StrictnessVerdict::Inconclusive;
    let checks = vec![Check::boolean("verdict_decided", decided)];
    let report = Report::new(
        Command::Positivity,
        config.seed(),
        checks,
        json!({
            "measure": mu.to_json(),
            "strictness": report_inner,
        }),
    );
    Ok((report, Vec::new()))
}

// ---------------------------------------------------------------------------
// classify

fn run_classify(config: &RunConfig) -> Result<(Report, Vec<CsvFile>)> {
    let mu = config.build_measure()?;
    let h = config.build_symbol(mu.as_ref())?;
    let p = config.build_projection(h.dim())?;
    let spec = config.quad();
    let tol = config.tol("classify_tol", 1e-8);
    let grid = config.x_grid();
    let classification = classify(&h, &p, mu.as_ref(), &grid, tol, &spec)?;
    let checks = vec![Check::boolean(
        "symbol_valid",
        classification.verdict != Verdict::InvalidSymbol,
    )];
    let report = Report::new(
        Command::Classify,
        config.seed(),
        checks,
        json!({
            "symbol": h.name(),
            "classification": classification,
        }),
    );
    Ok((report, Vec::new()))
}

// ---------------------------------------------------------------------------
// simulate

fn sim_params(config: &RunConfig) -> (usize, f64, usize, Vec<f64>) {
    let s = config.grids.simulator.clone().unwrap_or_default();
    (
        s.n.unwrap_or(2048),
        s.x_max.unwrap_or(32.0),
        s.trials.unwrap_or(50),
        s.t_list.unwrap_or_else(|| vec![0.5, 1.0, 2.0, 4.0]),
    )
}

fn run_simulate(config: &RunConfig) -> Result<(Report, Vec<CsvFile>)> {
    let mu = config.build_measure()?;
    let h = config.build_symbol(mu.as_ref())?;
    let (n, x_max, trials, t_list) = sim_params(config);
    let grid = Grid::new(n, x_max)?;
    let exact_tol = config.tol("sim_exact_tol", 1e-12);
    let rp_tol = config.tol("sim_rp_tol", 1e-6);

    let report_inner = quadruple_checks(&h, &t_list, grid, trials, config.seed())?;
    let mut csv = String::from("t,max_escaped_ratio\n");
    for (t, v) in &report_inner.outgoing_decay {
        csv.push_str(&format!("{t:.17e},{v:.17e}\n"));
    }

    let checks = vec![
        Check::upper("group_law_residual", report_inner.group_law_residual, exact_tol),
        Check::upper(
            "commutation_residual",
            report_inner.commutation_residual,
            exact_tol,
        ),
        Check::upper(
            "involution_residual",
            report_inner.involution_residual,
            exact_tol,
        ),
        Check::lower(
            "reflection_positivity_min",
            report_inner.reflection_positivity_min,
            -rp_tol,
        ),
        Check::boolean(
            "outgoing_monotone_trend",
            report_inner.outgoing_monotone_trend,
        ),
    ];
    let report = Report::new(
        Command::Simulate,
        config.seed(),
        checks,
        json!({
            "symbol": h.name(),
            "quadruple": report_inner,
        }),
    );
    Ok((
        report,
        vec![CsvFile {
            name: "decay.csv".into(),
            content: csv,
        }],
    ))
}

// ---------------------------------------------------------------------------
// example-t

fn run_example_t(config: &RunConfig) -> Result<(Report, Vec<CsvFile>)> {
    let t = config.t.unwrap_or(0.5);
    if !(0.0..=1.0).contains(&t) {
        return Err(config_err("t", format!("t = {t} must lie in [0, 1]")));
    }
    let spec = config.quad();
    let mut checks = Vec::new();
    let mut results = serde_json::Map::new();
    results.insert("t".into(), json!(t));

    let mu = builtin_measure("example_t", &[t], 4)?;

    // 1. Density positivity scan.
    let strictness = strict_positivity_report(&mu, &positivity_grid(), &spec)?;
    checks.push(Check::boolean(
        "density_certified_positive",
        strictness.verdict == StrictnessVerdict::CertifiedPositiveAtResolution,
    ));
    results.insert("strictness".into(), json!(strictness));

    // 2. Carleson ratios stay finite on a spread of scales.
    let ratios = carleson_ratio_check(&mu, &[0.1, 1.0, 10.0], &spec)?;
    let worst_ratio = ratios.max_ratio_low.max(ratios.max_ratio_high);
    checks.push(Check::upper(
        "carleson_ratio_finite",
        worst_ratio,
        config.tol("carleson_ratio_cap", 1e3),
    ));
    results.insert("carleson_ratios".into(), json!(ratios));

    // 3. β from quadrature matches the closed form.
    let ps = example_projection_spec(t)?;
    let beta_quad = beta_symbol(&mu, &ps, &spec)?;
    let mut beta_diff = 0.0f64;
    for &x in &[-2.0, -0.5, 0.5, 2.0] {
        let diff = beta_quad
            .eval(x)?
            .sub(&example_beta_closed(t, x))
            .max_abs();
        beta_diff = beta_diff.max(diff);
    }
    checks.push(Check::upper(
        "beta_quadrature_vs_closed",
        beta_diff,
        config.tol("beta_match_tol", 1e-7),
    ));

    // 4. Closed form is exactly unitary.
    let mut closed = builtin_symbol("example_beta_closed", &[t], 4)?;
    let grid = config.x_grid();
    let unitary = closed.check_unitary(&grid, config.tol("symbol_check_tol", 1e-10))?;
    checks.push(Check::boolean("closed_beta_unitary", unitary.passed()));
    let sharp = closed.check_sharp_fixed(&grid, 1e-10)?;
    let flat = closed.check_flat_fixed(&grid, 1e-10)?;
    checks.push(Check::boolean("closed_beta_sharp_fixed", sharp.passed()));
    checks.push(Check::boolean("closed_beta_flat_fixed", flat.passed()));

    // 5. The closed form is a symbol of H_μ.
    let pairs = default_sample_pairs(4, 12);
    let worst = verify_symbol(&mu, &closed, &pairs, &spec)?;
    checks.push(Check::upper(
        "hankel_form_match",
        worst,
        config.tol("verify_tol", 1e-6),
    ));
    results.insert("verify_symbol_defect".into(), json!(worst));

    // 6. Gram positivity of the measure form.
    let points = default_kernel_points(4, config.grids.gram_points.unwrap_or(6));
    let gram = gram_matrix(&GramSource::Measure(&mu), &points, &spec)?;
    checks.push(Check::lower(
        "gram_min_eig",
        gram.min_eig,
        -config.tol("gram_psd_tol", 1e-9),
    ));
    results.insert("gram".into(), json!(gram));

    // 7. Classification: borchers exactly at t = 1, standard below.
    let classification = classify(
        &closed,
        &example_projection(),
        Some(&mu),
        &grid,
        config.tol("classify_tol", 1e-8),
        &spec,
    )?;
    let expected = if t == 1.0 {
        Verdict::Borchers
    } else {
        Verdict::Standard
    };
    checks.push(Check::boolean(
        "classification_expected",
        classification.verdict == expected,
    ));
    results.insert("classification".into(), json!(classification));

    // 8. Discretized quadruple residuals.
    let (n, x_max, trials, t_list) = {
        let s = config.grids.simulator.clone().unwrap_or_default();
        (
            s.n.unwrap_or(1024),
            s.x_max.unwrap_or(32.0),
            s.trials.unwrap_or(24),
            s.t_list.unwrap_or_else(|| vec![0.5, 1.0, 2.0]),
        )
    };
    let sim = quadruple_checks(&closed, &t_list, Grid::new(n, x_max)?, trials, config.seed())?;
    checks.push(Check::upper(
        "sim_exact_identities",
        sim.group_law_residual
            .max(sim.commutation_residual)
            .max(sim.involution_residual),
        config.tol("sim_exact_tol", 1e-12),
    ));
    checks.push(Check::lower(
        "sim_reflection_positivity_min",
        sim.reflection_positivity_min,
        -config.tol("sim_rp_tol", 1e-6),
    ));
    let mut csv = String::from("t,max_escaped_ratio\n");
    for (tt, v) in &sim.outgoing_decay {
        csv.push_str(&format!("{tt:.17e},{v:.17e}\n"));
    }
    results.insert("quadruple".into(), json!(sim));

    let report = Report::new(
        Command::ExampleT,
        config.seed(),
        checks,
        Value::Object(results),
    );
    Ok((
        report,
        vec![CsvFile {
            name: "decay.csv".into(),
            content: csv,
        }],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> RunConfig {
        RunConfig::from_json_str(json).unwrap()
    }

    #[test]
    fn integrals_all_pass() {
        let (report, _) = run(&cfg(r#"{"command": "integrals"}"#)).unwrap();
        assert!(report.pass, "{:?}", report.checks);
        assert_eq!(report.checks.len(), 40);
    }

    #[test]
    fn missing_measure_is_config_error() {
        let config = RunConfig::from_json_str(r#"{"command": "pick"}"#);
        assert!(matches!(config, Err(Error::ConfigError { .. })));
    }

    #[test]
    fn bad_tolerance_rejected() {
        let config = RunConfig::from_json_str(
            r#"{"command": "integrals", "tolerances": {"integrals_rel_tol": -1.0}}"#,
        );
        assert!(config.is_err());
    }

    #[test]
    fn gram_lebesgue2_passes() {
        let (report, _) = run(&cfg(
            r#"{"command": "gram",
                "measure": {"dim": 1, "density": {"name": "lebesgue2", "params": []}}}"#,
        ))
        .unwrap();
        assert!(report.pass, "{:?}", report.checks);
    }

    #[test]
    fn simulate_i_sgn_passes() {
        let (report, csv) = run(&cfg(
            r#"{"command": "simulate",
                "symbol": {"name": "i_sgn", "dim": 1},
                "grids": {"simulator": {"n": 512, "x_max": 16.0, "trials": 8,
                                        "t_list": [0.5, 1.0]}}}"#,
        ))
        .unwrap();
        assert!(report.pass, "{:?}", report.checks);
        assert!(csv[0].content.starts_with("t,"));
    }

    #[test]
    fn reports_are_deterministic() {
        let config = cfg(
            r#"{"command": "simulate",
                "symbol": {"name": "i_sgn", "dim": 1},
                "grids": {"simulator": {"n": 256, "x_max": 16.0, "trials": 4,
                                        "t_list": [1.0]}}}"#,
        );
        let (a, _) = run(&config).unwrap();
        let (b, _) = run(&config).unwrap();
        assert_eq!(a.to_json_bytes(), b.to_json_bytes());
    }
}
