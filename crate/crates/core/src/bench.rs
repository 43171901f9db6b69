//! Experiment configuration and sweep orchestration.
//!
//! A configuration is a flat `key = value` file (lists comma-separated,
//! `#` comments) that command-line flags can override. Sweeps evaluate every
//! cell of the factorial grid on the rayon pool and emit rows sorted by cell
//! key, so the CSV body depends only on the configuration.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::battery::{sphere_signal, torus_function};
use crate::error::{Error, Result};
use crate::recovery::{recover_sphere, recover_torus, RecoveryOptions, RecoveryReport, Setting};
use crate::sampler::{derive_seed, RNG_NAME};
use crate::sphere::{build_quadrature, compute_rl, sphere_norms, verify_sphere_fr_bound, SphereFrCheck, C0};
use crate::torus::{
    compute_rn, default_refinement, estimate_norms, verify_decay, verify_fr_bound, verify_l2_lower_bound,
    verify_riemann_lemma, FrCheck,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    Fr,
    Recover,
    RnVsLogn,
    Decay,
    Lemmas,
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepMode::Fr => "fr",
            SweepMode::Recover => "recover",
            SweepMode::RnVsLogn => "rn_vs_logn",
            SweepMode::Decay => "decay",
            SweepMode::Lemmas => "lemmas",
        })
    }
}

impl FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fr" => Ok(SweepMode::Fr),
            "recover" => Ok(SweepMode::Recover),
            "rn_vs_logn" => Ok(SweepMode::RnVsLogn),
            "decay" => Ok(SweepMode::Decay),
            "lemmas" => Ok(SweepMode::Lemmas),
            other => Err(Error::Config(format!("unknown sweep mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub setting: Setting,
    pub functions: Vec<String>,
    /// N values on the torus, L values on the sphere.
    pub sizes: Vec<usize>,
    pub eps: Vec<f64>,
    pub c_univ: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub mode: SweepMode,
    pub q_max: u64,
    pub allow_uncertified: bool,
    /// Explicit sample sizes replacing the formula (recover mode).
    pub sample_sizes: Vec<usize>,
    /// Largest N at which rn_vs_logn also measures FR(g).
    pub fr_max_n: usize,
    /// Constraint radius overriding ε‖truth‖₂ (recover mode).
    pub radius: Option<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            setting: Setting::Torus,
            functions: Vec::new(),
            sizes: Vec::new(),
            eps: vec![0.1],
            c_univ: vec![1.0],
            trials: 1,
            seed: 0,
            out: None,
            mode: SweepMode::Fr,
            q_max: RecoveryOptions::default().q_max,
            allow_uncertified: false,
            sample_sizes: Vec::new(),
            fr_max_n: 4096,
            radius: None,
        }
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Config(format!("{key}: cannot parse {s:?}"))))
        .collect()
}

fn parse_one<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Config(format!("{key}: cannot parse {value:?}")))
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    /// Parses `key = value` lines on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "setting" => self.setting = value.parse()?,
            "fn" => self.functions = parse_list(key, value)?,
            "n" | "l" | "sizes" => self.sizes = parse_list(key, value)?,
            "eps" => self.eps = parse_list(key, value)?,
            "c_univ" => self.c_univ = parse_list(key, value)?,
            "trials" => self.trials = parse_one(key, value)?,
            "seed" => self.seed = parse_one(key, value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            "mode" => self.mode = value.parse()?,
            "q_max" => self.q_max = parse_one(key, value)?,
            "allow_uncertified" => self.allow_uncertified = parse_one(key, value)?,
            "sample_sizes" => self.sample_sizes = parse_list(key, value)?,
            "fr_max_n" => self.fr_max_n = parse_one(key, value)?,
            "radius" => self.radius = Some(parse_one(key, value)?),
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.functions.is_empty() {
            return Err(Error::Config("fn list is empty".into()));
        }
        if self.sizes.is_empty() {
            return Err(Error::Config("size list (n / l) is empty".into()));
        }
        if self.eps.is_empty() || self.c_univ.is_empty() {
            return Err(Error::Config("eps and c_univ lists must be non-empty".into()));
        }
        if let Some(e) = self.eps.iter().find(|&&e| !(e > 0.0 && e < 0.5)) {
            return Err(Error::Config(format!("eps {e} outside (0, 1/2)")));
        }
        if let Some(c) = self.c_univ.iter().find(|&&c| !(c > 0.0 && c.is_finite())) {
            return Err(Error::Config(format!("c_univ {c} must be positive")));
        }
        if let Some(r) = self.radius.filter(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(Error::Config(format!("radius {r} must be non-negative")));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        Ok(())
    }

    /// Canonical `key=value` listing; `out` is excluded since it does not affect results.
    pub fn canonical(&self) -> String {
        let mut map = BTreeMap::new();
        map.insert("allow_uncertified", self.allow_uncertified.to_string());
        map.insert("c_univ", join(&self.c_univ));
        map.insert("eps", join(&self.eps));
        map.insert("fn", self.functions.join(","));
        map.insert("fr_max_n", self.fr_max_n.to_string());
        map.insert("mode", self.mode.to_string());
        map.insert("q_max", self.q_max.to_string());
        map.insert("radius", self.radius.map_or(String::new(), |r| r.to_string()));
        map.insert("sample_sizes", join(&self.sample_sizes));
        map.insert("seed", self.seed.to_string());
        map.insert("setting", self.setting.to_string());
        map.insert("sizes", join(&self.sizes));
        map.insert("trials", self.trials.to_string());
        map.into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }

    /// First 16 hex digits of the SHA-256 of [`ExperimentConfig::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Least-squares slope and intercept of `ys` on `xs`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Degenerate("need at least two points to fit a line".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Degenerate("abscissae are all equal".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Fitted growth of `r` and FR against `ln N` (or `ln L`) for one function.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub function: String,
    pub slope: f64,
    /// `16π² C2/L2` on the torus, `C₀ C2/L2` on the sphere.
    pub expected: f64,
    /// Exponent p in FR ≈ c (ln N)^p, when FR was measured at two or more sizes.
    pub fr_exponent: Option<f64>,
}

impl SlopeFit {
    pub fn ratio(&self) -> f64 {
        self.slope / self.expected
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutput {
    pub header: String,
    pub rows: Vec<String>,
    pub fits: Vec<SlopeFit>,
    pub config_hash: String,
    pub failures: usize,
}

impl SweepOutput {
    /// CSV text: comment line with hash, seed and generator, header, rows, then fit comments.
    pub fn to_csv(&self, cfg: &ExperimentConfig) -> String {
        let mut out = format!(
            "# config_hash={} seed={} rng={} mode={} setting={}\n",
            self.config_hash, cfg.seed, RNG_NAME, cfg.mode, cfg.setting
        );
        out.push_str(&self.header);
        out.push('\n');
        for row in &self.rows {
            out.push_str(row);
            out.push('\n');
        }
        for fit in &self.fits {
            out.push_str(&format!(
                "# fit fn={} slope={:.17e} expected={:.17e} ratio={:.6} fr_exponent={}\n",
                fit.function,
                fit.slope,
                fit.expected,
                fit.ratio(),
                fit.fr_exponent.map_or("NA".to_string(), |p| format!("{p:.6}"))
            ));
        }
        out
    }
}

fn status_of(err: &Error) -> String {
    format!("\"{}\"", err.to_string().replace('"', "'"))
}

/// Blank row body with the given number of columns after the leading size column.
fn blank(size: usize, columns: usize) -> String {
    let mut s = size.to_string();
    for _ in 1..columns {
        s.push(',');
    }
    s
}

fn header_len(header: &str) -> usize {
    header.split(',').count()
}

fn fr_row(cfg: &ExperimentConfig, name: &str, size: usize) -> Result<String> {
    match cfg.setting {
        Setting::Torus => Ok(verify_fr_bound(&torus_function(name)?, size)?.csv_row()),
        Setting::Sphere => Ok(verify_sphere_fr_bound(&sphere_signal(name, size)?)?.csv_row()),
    }
}

/// Runs the configured sweep.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let hash = cfg.hash();
    let mut sizes = cfg.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut functions = cfg.functions.clone();
    functions.sort();
    functions.dedup();
    for name in &functions {
        match cfg.setting {
            Setting::Torus => torus_function(name).map(|_| ())?,
            Setting::Sphere => sphere_signal(name, sizes[sizes.len() - 1]).map(|_| ())?,
        }
    }
    match cfg.mode {
        SweepMode::Fr => sweep_fr(cfg, &functions, &sizes, hash),
        SweepMode::Recover => sweep_recover(cfg, &functions, &sizes, hash),
        SweepMode::RnVsLogn => sweep_rn(cfg, &functions, &sizes, hash),
        SweepMode::Decay | SweepMode::Lemmas => sweep_lemmas(cfg, &functions, &sizes, hash),
    }
}

fn sweep_fr(cfg: &ExperimentConfig, functions: &[String], sizes: &[usize], hash: String) -> Result<SweepOutput> {
    let base = match cfg.setting {
        Setting::Torus => FrCheck::CSV_HEADER,
        Setting::Sphere => SphereFrCheck::CSV_HEADER,
    };
    let cells: Vec<(&String, usize)> = functions.iter().flat_map(|f| sizes.iter().map(move |&s| (f, s))).collect();
    let results: Vec<Result<String>> = cells.par_iter().map(|&(f, s)| fr_row(cfg, f, s)).collect();
    let mut rows = Vec::with_capacity(cells.len());
    let mut failures = 0;
    for ((f, s), res) in cells.iter().zip(results) {
        let (body, status) = match res {
            Ok(body) => (body, "ok".to_string()),
            Err(e) => {
                failures += 1;
                (blank(*s, header_len(base)), status_of(&e))
            }
        };
        rows.push(format!("{f},{body},{},{hash},{status}", cfg.seed));
    }
    Ok(SweepOutput { header: format!("fn,{base},seed,config_hash,status"), rows, fits: Vec::new(), config_hash: hash, failures })
}

#[derive(Clone, Copy)]
struct RecoverCell<'a> {
    function: &'a str,
    size: usize,
    eps: f64,
    c_univ: f64,
    sample: Option<usize>,
    trial: usize,
}

fn sweep_recover(cfg: &ExperimentConfig, functions: &[String], sizes: &[usize], hash: String) -> Result<SweepOutput> {
    let mut eps = cfg.eps.clone();
    eps.sort_by(f64::total_cmp);
    let mut c_univ = cfg.c_univ.clone();
    c_univ.sort_by(f64::total_cmp);
    let samples: Vec<Option<usize>> = if cfg.sample_sizes.is_empty() {
        vec![None]
    } else {
        let mut s = cfg.sample_sizes.clone();
        s.sort_unstable();
        s.into_iter().map(Some).collect()
    };
    let mut cells = Vec::new();
    for f in functions {
        for &size in sizes {
            for &e in &eps {
                for &c in &c_univ {
                    for &sample in &samples {
                        for trial in 0..cfg.trials {
                            cells.push(RecoverCell { function: f, size, eps: e, c_univ: c, sample, trial });
                        }
                    }
                }
            }
        }
    }
    let results: Vec<Result<RecoveryReport>> = cells.par_iter().map(|cell| run_recover_cell(cfg, cell)).collect();
    let base = RecoveryReport::CSV_HEADER;
    let mut rows = Vec::with_capacity(cells.len());
    let mut failures = 0;
    for (cell, res) in cells.iter().zip(results) {
        let seed = derive_seed(cfg.seed, cell.trial as u64);
        let row = match res {
            Ok(rep) => format!("{},{},{},{hash},ok", rep.csv_row(), cell.function, rep.provenance),
            Err(e) => {
                failures += 1;
                let mut cols = vec![String::new(); header_len(base)];
                cols[0] = cfg.setting.to_string();
                cols[1] = cell.size.to_string();
                cols[2] = cell.eps.to_string();
                cols[3] = format!("{:e}", cell.c_univ);
                cols[4] = seed.to_string();
                format!("{},{},,{hash},{}", cols.join(","), cell.function, status_of(&e))
            }
        };
        rows.push(row);
    }
    Ok(SweepOutput {
        header: format!("{base},fn,provenance,config_hash,status"),
        rows,
        fits: Vec::new(),
        config_hash: hash,
        failures,
    })
}

fn run_recover_cell(cfg: &ExperimentConfig, cell: &RecoverCell<'_>) -> Result<RecoveryReport> {
    let seed = derive_seed(cfg.seed, cell.trial as u64);
    let opts = RecoveryOptions {
        allow_uncertified: cfg.allow_uncertified,
        sample_size: cell.sample,
        q_max: cfg.q_max,
        radius: cfg.radius,
        ..Default::default()
    };
    match cfg.setting {
        Setting::Torus => recover_torus(&torus_function(cell.function)?, cell.size, cell.eps, seed, cell.c_univ, &opts),
        Setting::Sphere => recover_sphere(&sphere_signal(cell.function, cell.size)?, cell.eps, seed, cell.c_univ, &opts),
    }
}

struct RnPoint {
    size: usize,
    a: f64,
    b: f64,
    c: f64,
    r: f64,
    expected_slope: f64,
    fr: Option<f64>,
}

fn rn_point(cfg: &ExperimentConfig, name: &str, size: usize) -> Result<RnPoint> {
    match cfg.setting {
        Setting::Torus => {
            let f = torus_function(name)?;
            let norms = estimate_norms(&f, default_refinement(size.min(cfg.fr_max_n)))?;
            let rep = compute_rn(&norms, size)?;
            let fr = if size <= cfg.fr_max_n { Some(verify_fr_bound(&f, size)?.fr_measured) } else { None };
            Ok(RnPoint {
                size,
                a: rep.a,
                b: rep.b,
                c: rep.c,
                r: rep.r,
                expected_slope: 16.0 * PI * PI * norms.c2 / norms.l2,
                fr,
            })
        }
        Setting::Sphere => {
            let signal = sphere_signal(name, size)?;
            let norms = sphere_norms(&signal);
            let rep = compute_rl(&norms, size)?;
            Ok(RnPoint {
                size,
                a: rep.a,
                b: rep.b,
                c: rep.c,
                r: rep.r,
                expected_slope: C0 * norms.c2 / norms.l2,
                fr: Some(signal.fourier_ratio()?),
            })
        }
    }
}

fn sweep_rn(cfg: &ExperimentConfig, functions: &[String], sizes: &[usize], hash: String) -> Result<SweepOutput> {
    let cells: Vec<(&String, usize)> = functions.iter().flat_map(|f| sizes.iter().map(move |&s| (f, s))).collect();
    let results: Vec<Result<RnPoint>> = cells.par_iter().map(|&(f, s)| rn_point(cfg, f, s)).collect();
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    let mut failures = 0;
    let mut by_fn: BTreeMap<&str, Vec<RnPoint>> = BTreeMap::new();
    for ((f, s), res) in cells.iter().zip(results) {
        match res {
            Ok(p) => {
                rows.push(format!(
                    "{f},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{},{hash},ok",
                    p.size,
                    (p.size as f64).ln(),
                    p.a,
                    p.b,
                    p.c,
                    p.r,
                    p.fr.map_or(String::new(), |v| format!("{v:.17e}")),
                    cfg.seed
                ));
                by_fn.entry(f.as_str()).or_default().push(p);
            }
            Err(e) => {
                failures += 1;
                rows.push(format!("{f},{s},,,,,,,{},{hash},{}", cfg.seed, status_of(&e)));
            }
        }
    }
    for (name, points) in by_fn {
        if points.len() < 2 {
            continue;
        }
        // Norms and hence the expected slope depend on the size only on the sphere
        // (through the expansion degree); the largest size is reported.
        let xs: Vec<f64> = points.iter().map(|p| (p.size as f64).ln()).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.r).collect();
        let (slope, _) = fit_line(&xs, &ys)?;
        let measured: Vec<(f64, f64)> =
            points.iter().filter_map(|p| p.fr.map(|fr| ((p.size as f64).ln().ln(), fr.ln()))).collect();
        let fr_exponent = if measured.len() >= 2 {
            let (lx, ly): (Vec<f64>, Vec<f64>) = measured.into_iter().unzip();
            fit_line(&lx, &ly).ok().map(|(s, _)| s)
        } else {
            None
        };
        fits.push(SlopeFit {
            function: name.to_string(),
            slope,
            expected: points[points.len() - 1].expected_slope,
            fr_exponent,
        });
    }
    Ok(SweepOutput {
        header: "fn,N_or_L,ln_size,A,B,C,r,fr_measured,seed,config_hash,status".into(),
        rows,
        fits,
        config_hash: hash,
        failures,
    })
}

fn sweep_lemmas(cfg: &ExperimentConfig, functions: &[String], sizes: &[usize], hash: String) -> Result<SweepOutput> {
    if cfg.setting != Setting::Torus {
        return Err(Error::Config(format!("{} mode is defined on the torus only", cfg.mode)));
    }
    let cells: Vec<(&String, usize)> = functions.iter().flat_map(|f| sizes.iter().map(move |&s| (f, s))).collect();
    let decay = cfg.mode == SweepMode::Decay;
    let header = if decay {
        "fn,N,worst_ratio,limit,pass,frequency_sum,frequency_sum_within_estimate,certified,provenance"
    } else {
        "fn,N,riemann_lhs,riemann_rhs,riemann_pass,energy,energy_lower,energy_pass,certified,certified_pass"
    };
    let results: Vec<Result<String>> = cells
        .par_iter()
        .map(|&(name, n)| {
            let f = torus_function(name)?;
            if decay {
                let d = verify_decay(&f, n)?;
                Ok(format!(
                    "{:.17e},{:.17e},{},{:.17e},{},{},{}",
                    d.worst_ratio, d.limit, d.pass, d.frequency_sum, d.frequency_sum_within_estimate, d.certified, d.provenance
                ))
            } else {
                let r = verify_riemann_lemma(&f, n)?;
                let l = verify_l2_lower_bound(&f, n)?;
                Ok(format!(
                    "{:.17e},{:.17e},{},{:.17e},{:.17e},{},{},{}",
                    r.lhs,
                    r.rhs,
                    r.pass,
                    l.energy,
                    l.lower,
                    l.pass,
                    l.certified,
                    l.certified_pass.map_or("NA".to_string(), |b| b.to_string())
                ))
            }
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = 0;
    for ((f, n), res) in cells.iter().zip(results) {
        match res {
            Ok(body) => rows.push(format!("{f},{n},{body},{},{hash},ok", cfg.seed)),
            Err(e) => {
                failures += 1;
                let empty = ",".repeat(header_len(header) - 3);
                rows.push(format!("{f},{n}{empty},{},{hash},{}", cfg.seed, status_of(&e)));
            }
        }
    }
    Ok(SweepOutput {
        header: format!("{header},seed,config_hash,status"),
        rows,
        fits: Vec::new(),
        config_hash: hash,
        failures,
    })
}

/// Exactness check of the product quadrature at one bandwidth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureCheck {
    pub bandwidth: usize,
    pub nodes: usize,
    /// `max |G − I|` for the Gram matrix of V_L under the rule.
    pub gram_error: f64,
    /// Worst relative analysis∘synthesis error over the random signals.
    pub round_trip_error: f64,
    pub signals: usize,
}

impl QuadratureCheck {
    pub const CSV_HEADER: &'static str = "L,nodes,gram_error,round_trip_error,signals";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.17e},{:.17e},{}",
            self.bandwidth, self.nodes, self.gram_error, self.round_trip_error, self.signals
        )
    }
}

/// Gram matrix and round-trip check of [`build_quadrature`] on `signals` random
/// signals with i.i.d. uniform coefficients in [−1, 1].
pub fn quadrature_check(bandwidth: usize, signals: usize, seed: u64) -> Result<QuadratureCheck> {
    use crate::sphere::{analyze, real_sh_all, synthesize, SphericalSignal};
    use rand::Rng;

    let rule = build_quadrature(bandwidth)?;
    let d = (bandwidth + 1) * (bandwidth + 1);
    // Rows scaled by √w, so the Gram matrix is BᵀB.
    let rows: Vec<Vec<f64>> = rule
        .nodes()
        .par_iter()
        .zip(rule.weights())
        .map(|(&p, &w)| real_sh_all(bandwidth, p).into_iter().map(|y| y * w.sqrt()).collect())
        .collect();
    let b = nalgebra::DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]);
    let gram = b.tr_mul(&b);
    let gram_error = (gram - nalgebra::DMatrix::<f64>::identity(d, d)).amax();
    let round_trip_error = (0..signals)
        .into_par_iter()
        .map(|k| -> Result<f64> {
            let mut rng = crate::sampler::rng_from_seed(derive_seed(seed, k as u64));
            let coeffs: Vec<f64> = (0..d).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let signal = SphericalSignal::new(bandwidth, coeffs)?;
            let back = analyze(&synthesize(&signal, rule.nodes()), &rule, bandwidth)?;
            let diff: f64 = back
                .coefficients()
                .iter()
                .zip(signal.coefficients())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            Ok(diff / signal.l2_norm())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(QuadratureCheck { bandwidth, nodes: rule.len(), gram_error, round_trip_error, signals })
}
