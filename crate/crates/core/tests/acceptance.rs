//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails. Sweep CSVs are written under the cargo target tmpdir.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use fratio::battery::{torus_function, SPHERE_NAMES, TORUS_NAMES};
use fratio::bench::{quadrature_check, run_sweep, ExperimentConfig, SweepMode, SweepOutput};
use fratio::recovery::Setting;
use fratio::sampler::{derive_seed, draw_subset, rng_from_seed};
use fratio::solver::{
    check_kkt, materialize, oracle_solve, solve_bpdn, DenseOperator, MeasurementOperator, SolverConfig,
    SubsampledDft,
};
use fratio::spectral::{best_s_truncation, fourier_ratio, SpectralDomain, SpectralVector, C64};
use fratio::sphere::{sphere_norms, BASIS_CONVENTION, C0};
use fratio::torus::{default_refinement, estimate_norms};

const MASTER_SEED: u64 = 20_240_601;
const EPS: f64 = 0.1;
const BUDGET: f64 = 11.47 * EPS;
const TRIALS: usize = 20;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn csv_dir() -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    fs::create_dir_all(&dir).expect("create csv dir");
    dir
}

/// Parsed CSV body: header columns plus rows, comment lines dropped.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn from(output: &SweepOutput) -> Self {
        Self {
            header: output.header.split(',').map(String::from).collect(),
            rows: output.rows.iter().map(|r| r.split(',').map(String::from).collect()).collect(),
        }
    }

    fn col(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("missing column {name}"))
    }

    fn f64(&self, row: &[String], name: &str) -> f64 {
        row[self.col(name)].parse().unwrap_or(f64::NAN)
    }

    fn str<'a>(&self, row: &'a [String], name: &str) -> &'a str {
        &row[self.col(name)]
    }

    fn ok_rows(&self) -> impl Iterator<Item = &Vec<String>> {
        let status = self.col("status");
        self.rows.iter().filter(move |r| r[status] == "ok")
    }
}

fn config(setting: Setting, mode: SweepMode, functions: &[&str], sizes: &[usize]) -> ExperimentConfig {
    ExperimentConfig {
        setting,
        mode,
        functions: functions.iter().map(|s| s.to_string()).collect(),
        sizes: sizes.to_vec(),
        seed: MASTER_SEED,
        ..Default::default()
    }
}

fn certification_threshold(name: &str) -> usize {
    let f = torus_function(name).unwrap();
    match f.analytic() {
        Some(norms) => norms.certification_threshold(),
        None => estimate_norms(&f, default_refinement(64)).unwrap().certification_threshold(),
    }
}

/// Every sweep of the acceptance run, keyed by a file stem.
fn acceptance_configs() -> Vec<(String, ExperimentConfig)> {
    let mut out = Vec::new();

    for name in TORUS_NAMES {
        let t = certification_threshold(name);
        let sizes: Vec<usize> = [t, 2 * t, 4 * t].into_iter().filter(|&n| n <= 4096).collect();
        if sizes.is_empty() {
            continue;
        }
        out.push((format!("fr_torus_{name}"), config(Setting::Torus, SweepMode::Fr, &[name], &sizes)));
    }

    let mut rn = config(Setting::Torus, SweepMode::RnVsLogn, &TORUS_NAMES, &(6..=13).map(|k| 1 << k).collect::<Vec<_>>());
    rn.fr_max_n = 1024;
    out.push(("rn_vs_logn_torus".into(), rn));
    out.push((
        "rn_vs_logn_sphere".into(),
        config(Setting::Sphere, SweepMode::RnVsLogn, &SPHERE_NAMES, &[4, 8, 16, 32]),
    ));

    out.push(("lemmas".into(), config(Setting::Torus, SweepMode::Lemmas, &TORUS_NAMES, &[8, 16, 64, 256])));
    out.push(("decay".into(), config(Setting::Torus, SweepMode::Decay, &TORUS_NAMES, &[8, 16, 64, 256])));

    out.push(("fr_sphere".into(), config(Setting::Sphere, SweepMode::Fr, &SPHERE_NAMES, &[4, 8, 16])));

    let mut torus_rec = config(Setting::Torus, SweepMode::Recover, &["cc_half"], &[64]);
    torus_rec.eps = vec![EPS];
    torus_rec.c_univ = (-12..=0).map(|k| 10f64.powi(k)).chain([8.0]).collect();
    torus_rec.trials = TRIALS;
    torus_rec.allow_uncertified = true;
    out.push(("recover_torus".into(), torus_rec));

    let mut ladder = config(Setting::Torus, SweepMode::Recover, &["cc_half"], &[64]);
    ladder.eps = vec![EPS];
    ladder.sample_sizes = vec![128, 256, 512, 1024];
    ladder.trials = TRIALS;
    ladder.allow_uncertified = true;
    out.push(("recover_torus_ladder".into(), ladder));

    let mut sphere_rec = config(Setting::Sphere, SweepMode::Recover, &["five_coef"], &[8]);
    sphere_rec.eps = vec![EPS];
    sphere_rec.c_univ = (-9..=0).map(|k| 10f64.powi(k)).chain([8.0]).collect();
    sphere_rec.trials = TRIALS;
    sphere_rec.q_max = 20_000;
    out.push(("recover_sphere".into(), sphere_rec));

    out
}

struct Sweep {
    stem: String,
    output: SweepOutput,
    text: String,
    elapsed: Duration,
}

struct SweepRun {
    sweeps: Vec<Sweep>,
}

impl SweepRun {
    fn get(&self, stem: &str) -> &SweepOutput {
        &self.sweeps.iter().find(|s| s.stem == stem).unwrap_or_else(|| panic!("no sweep {stem}")).output
    }

    fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a SweepOutput> + 'a {
        self.sweeps.iter().filter(move |s| s.stem.starts_with(prefix)).map(|s| &s.output)
    }

    /// Wall time of the sweeps whose stem starts with any of `prefixes`.
    fn elapsed(&self, prefixes: &[&str]) -> Duration {
        self.sweeps.iter().filter(|s| prefixes.iter().any(|p| s.stem.starts_with(p))).map(|s| s.elapsed).sum()
    }
}

fn run_all(tag: &str) -> SweepRun {
    let dir = csv_dir();
    let mut sweeps = Vec::new();
    for (stem, cfg) in acceptance_configs() {
        let start = Instant::now();
        let output = run_sweep(&cfg).unwrap_or_else(|e| panic!("{stem}: {e}"));
        let elapsed = start.elapsed();
        let text = output.to_csv(&cfg);
        fs::write(dir.join(format!("{stem}.{tag}.csv")), &text).expect("write csv");
        sweeps.push(Sweep { stem, output, text, elapsed });
    }
    SweepRun { sweeps }
}

fn criterion_1(run: &SweepRun) -> Outcome {
    let mut cells = 0;
    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    for output in run.with_prefix("fr_torus_") {
        let t = Table::from(output);
        for row in &t.rows {
            cells += 1;
            let slack = t.f64(row, "slack");
            let certified = t.str(row, "certified") == "true";
            worst = worst.max(t.f64(row, "fr_measured") / t.f64(row, "r"));
            if t.str(row, "status") != "ok" || !certified || !(slack >= 0.0) {
                violations.push(format!("{}@N={}", row[0], row[1]));
            }
        }
    }
    Outcome::new(
        cells >= 12 && violations.is_empty(),
        format!("{cells} certified (f, N) cells, max FR/r_N = {worst:.3e}, violations {violations:?}"),
    )
}

fn criterion_2(run: &SweepRun) -> Outcome {
    let out = run.get("rn_vs_logn_torus");
    let Some(constant) = out.fits.iter().find(|f| f.function == "const1") else {
        return Outcome::new(false, "no fit for const1");
    };
    let slope_ratio = constant.slope / (16.0 * PI * PI);
    let mut worst_exponent = f64::NEG_INFINITY;
    let mut missing = Vec::new();
    for fit in &out.fits {
        match fit.fr_exponent {
            Some(p) => worst_exponent = worst_exponent.max(p),
            None => missing.push(fit.function.clone()),
        }
    }
    let sphere: Vec<String> = run
        .get("rn_vs_logn_sphere")
        .fits
        .iter()
        .map(|f| format!("{}:{:.2}", f.function, f.ratio()))
        .collect();
    Outcome::new(
        (slope_ratio - 1.0).abs() <= 0.05 && worst_exponent <= 1.1 && missing.is_empty() && out.failures == 0,
        format!(
            "const1 slope/16π² = {slope_ratio:.4}, max FR exponent on ln N = {worst_exponent:.3} over {} functions; \
             sphere slope/(C0·C2/L2) {sphere:?}",
            out.fits.len()
        ),
    )
}

fn criterion_3(run: &SweepRun) -> Outcome {
    let lemmas = Table::from(run.get("lemmas"));
    let mut bad = Vec::new();
    for row in &lemmas.rows {
        let ok = lemmas.str(row, "status") == "ok"
            && lemmas.str(row, "riemann_pass") == "true"
            && lemmas.str(row, "energy_pass") == "true"
            && lemmas.str(row, "certified_pass") != "false";
        if !ok {
            bad.push(format!("lemma {}@N={}", row[0], row[1]));
        }
    }
    let decay = Table::from(run.get("decay"));
    let mut certified = 0;
    let mut worst = 0.0f64;
    for row in &decay.rows {
        if decay.str(row, "status") != "ok" {
            bad.push(format!("decay {}@N={}", row[0], row[1]));
            continue;
        }
        if decay.str(row, "certified") == "true" {
            certified += 1;
            let ratio = decay.f64(row, "worst_ratio");
            worst = worst.max(ratio);
            if !(ratio <= 4.0 * PI * PI) {
                bad.push(format!("decay {}@N={}", row[0], row[1]));
            }
        }
    }
    Outcome::new(
        bad.is_empty() && lemmas.rows.len() == TORUS_NAMES.len() * 4,
        format!(
            "{} lemma cells, {certified} certified decay cells with max ratio {worst:.3e} (limit 4π²), failures {bad:?}",
            lemmas.rows.len()
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut worst_gram = 0.0f64;
    let mut worst_trip = 0.0f64;
    for (i, l) in [2usize, 4, 8, 16, 32].into_iter().enumerate() {
        match quadrature_check(l, 20, derive_seed(MASTER_SEED, 100 + i as u64)) {
            Ok(q) => {
                worst_gram = worst_gram.max(q.gram_error);
                worst_trip = worst_trip.max(q.round_trip_error);
            }
            Err(e) => return Outcome::new(false, format!("L={l}: {e}")),
        }
    }
    Outcome::new(
        worst_gram <= 1e-10 && worst_trip <= 1e-10,
        format!("max |G − I| = {worst_gram:.2e}, max round-trip error = {worst_trip:.2e}"),
    )
}

fn criterion_5(run: &SweepRun) -> Outcome {
    let t = Table::from(run.get("fr_sphere"));
    let signals: std::collections::BTreeSet<&str> = t.rows.iter().map(|r| r[0].as_str()).collect();
    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    for row in &t.rows {
        let slack = t.f64(row, "slack");
        worst = worst.max(t.f64(row, "fr_measured") / t.f64(row, "r"));
        if t.str(row, "status") != "ok" || !(slack >= 0.0) {
            let l: usize = row[1].parse().unwrap();
            let signal = fratio::battery::sphere_signal(&row[0], l).unwrap();
            let norms = sphere_norms(&signal);
            violations.push(format!(
                "{}@L={l}: basis {BASIS_CONVENTION}, C0 = {C0:.6}, L2 = {:.6e}, C2 = {:.6e}, ∫f = {:.6e}, slack {slack:.3e}",
                row[0], norms.l2, norms.c2, norms.integral
            ));
        }
    }
    Outcome::new(
        signals.len() >= 8 && violations.is_empty(),
        format!("{} signals × L ∈ {{4, 8, 16}}, max FR/r_L = {worst:.3e}, violations {violations:?}", signals.len()),
    )
}

fn has_parallel_columns(matrix: &DMatrix<C64>) -> bool {
    let n = matrix.ncols();
    (0..n).any(|i| {
        (i + 1..n).any(|j| {
            let (a, b) = (matrix.column(i), matrix.column(j));
            a.dotc(&b).norm() >= (1.0 - 1e-9) * a.norm() * b.norm()
        })
    })
}

fn random_instance(index: u64) -> (DMatrix<C64>, Vec<C64>, f64) {
    let mut rng = rng_from_seed(derive_seed(MASTER_SEED, 1_000 + index));
    let (matrix, n) = if index % 4 == 3 {
        // Subsampled 2-D DFT on ℤ_side².
        let side = rng.random_range(3..=8usize);
        let n = side * side;
        let k = rng.random_range(n / 4..=3 * n / 4).max(2);
        // Aliased frequencies give identical columns and a non-unique minimizer;
        // redraw until the columns are pairwise independent.
        let matrix = loop {
            let set = draw_subset(side, 2, k, rng.random()).unwrap();
            let matrix = materialize(&SubsampledDft::new(&set).unwrap());
            if !has_parallel_columns(&matrix) {
                break matrix;
            }
        };
        (matrix, n)
    } else {
        let n = rng.random_range(8..=64usize);
        let m = rng.random_range((n / 4).max(3)..=n);
        let scale = 1.0 / (m as f64).sqrt();
        let matrix =
            DMatrix::from_fn(m, n, |_, _| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * scale);
        (matrix, n)
    };
    let k = rng.random_range(1..=(matrix.nrows() / 3).max(1));
    let mut truth = vec![C64::new(0.0, 0.0); n];
    for _ in 0..k {
        let i = rng.random_range(0..n);
        truth[i] = C64::from_polar(0.5 + rng.random::<f64>(), 2.0 * PI * rng.random::<f64>());
    }
    let y: Vec<C64> = (&matrix * nalgebra::DVector::from_column_slice(&truth)).iter().copied().collect();
    let ynorm = y.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let delta = ynorm * [0.0, 0.001, 0.01, 0.05, 0.2][(index % 5) as usize];
    (matrix, y, delta)
}

fn criterion_6() -> Outcome {
    let mut worst_diff = 0.0f64;
    let mut worst_kkt = 0.0f64;
    let mut worst_obj = 0.0f64;
    let mut failures = Vec::new();
    for index in 0..100u64 {
        let (matrix, y, delta) = random_instance(index);
        let oracle = match oracle_solve(&matrix, &y, delta) {
            Ok(a) => a,
            Err(e) => {
                failures.push(format!("#{index} oracle: {e}"));
                continue;
            }
        };
        let op = DenseOperator::new(matrix);
        let rep = match solve_bpdn(&op, &y, &SolverConfig::new(delta).unwrap()) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("#{index} solver: {e}"));
                continue;
            }
        };
        let diff = rep.coefficients.iter().zip(&oracle).fold(0.0f64, |a, (p, q)| a.max((p - q).norm()));
        let oracle_obj: f64 = oracle.iter().map(|c| c.norm()).sum();
        let kkt = check_kkt(&op, &y, delta, &rep.coefficients).map(|k| k.residual).unwrap_or(f64::INFINITY);
        worst_diff = worst_diff.max(diff);
        worst_kkt = worst_kkt.max(kkt);
        worst_obj = worst_obj.max((rep.objective - oracle_obj).abs());
        if !(diff <= 1e-6 && kkt <= 1e-6 && rep.converged) {
            failures.push(format!(
                "#{index} ({}×{}, δ={delta:.2e}): diff {diff:.2e}, kkt {kkt:.2e}, converged {}",
                op.rows(),
                op.cols(),
                rep.converged
            ));
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "100 instances, max coefficient diff {worst_diff:.2e}, max KKT residual {worst_kkt:.2e}, \
             max objective diff {worst_obj:.2e}, failures {failures:?}"
        ),
    )
}

fn success_by_c(t: &Table) -> Vec<(f64, usize, usize, usize)> {
    let mut cells: std::collections::BTreeMap<u64, (f64, usize, usize, usize)> = Default::default();
    for row in &t.rows {
        let c = t.f64(row, "C_univ");
        let entry = cells.entry(c.to_bits()).or_insert((c, 0, 0, 0));
        if t.str(row, "status") == "ok" {
            entry.1 += 1;
            if t.f64(row, "rel_error") <= BUDGET {
                entry.2 += 1;
            }
            entry.3 = entry.3.max(t.f64(row, "sample_size") as usize);
        }
    }
    let mut v: Vec<_> = cells.into_values().collect();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    v
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn criterion_7(run: &SweepRun) -> Outcome {
    let t = Table::from(run.get("recover_torus"));
    let cells = success_by_c(&t);
    let needed = (0.95 * TRIALS as f64).ceil() as usize;
    let winner = cells.iter().find(|(c, ok, good, q)| *c <= 8.0 && *ok == TRIALS && *good >= needed && *q <= 64 * 64);

    let ladder = Table::from(run.get("recover_torus_ladder"));
    let mut by_size: std::collections::BTreeMap<usize, Vec<f64>> = Default::default();
    for row in ladder.ok_rows() {
        by_size.entry(ladder.f64(row, "sample_size") as usize).or_default().push(ladder.f64(row, "rel_error"));
    }
    let medians: Vec<(usize, f64)> = by_size.into_iter().map(|(k, v)| (k, median(v))).collect();
    let inversions = medians.windows(2).filter(|w| w[1].1 > w[0].1).count();
    let ladder_ok = medians.len() == 4 && inversions <= 1;

    let summary: Vec<String> = cells.iter().map(|(c, _, good, q)| format!("C={c:e}:|X|={q}:{good}/{TRIALS}")).collect();
    let ladder_summary: Vec<String> = medians.iter().map(|(k, m)| format!("{k}:{m:.4}")).collect();
    Outcome::new(
        winner.is_some() && ladder_ok,
        format!(
            "cc_half on ℤ_64², ε = 0.1, budget {BUDGET}: smallest passing C_univ {}; ladder {summary:?}; \
             median error by |X| {ladder_summary:?} ({inversions} inversions)",
            winner.map_or("none".to_string(), |w| format!("{:e}", w.0))
        ),
    )
}

fn criterion_8(run: &SweepRun) -> Outcome {
    let t = Table::from(run.get("recover_sphere"));
    let cells = success_by_c(&t);
    let needed = (0.95 * TRIALS as f64).ceil() as usize;
    let winner = cells.iter().find(|(c, ok, good, _)| *c <= 8.0 && *ok == TRIALS && *good >= needed);
    let refused = t.rows.iter().filter(|r| t.str(r, "status") != "ok").count();
    let summary: Vec<String> = cells
        .iter()
        .filter(|(_, ok, _, _)| *ok > 0)
        .map(|(c, _, good, q)| format!("C={c:e}:q={q}:{good}/{TRIALS}"))
        .collect();
    Outcome::new(
        winner.is_some(),
        format!(
            "five_coef in V_8, ε = 0.1: smallest passing C_univ {}; {summary:?}; {refused} cells above q_max refused",
            winner.map_or("none".to_string(), |w| format!("{:e}", w.0))
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = rng_from_seed(derive_seed(MASTER_SEED, 9));
    let mut worst = 0.0f64;
    let (mut checked, mut proper) = (0, 0);
    for trial in 0..1000 {
        let (dims, side) =
            if trial % 2 == 0 { (2, rng.random_range(8..=48usize)) } else { (1, rng.random_range(64..=4096usize)) };
        let len = side.pow(dims as u32);
        // Steep power laws and sparse spikes over a small floor keep S = ⌈FR²/ε²⌉
        // below the length, so the tail bound is not met trivially.
        let decay = [1.0, 1.5, 2.0, 3.0][trial % 4];
        let sparse = trial % 3 == 0;
        let mut order: Vec<usize> = (0..len).collect();
        order.shuffle(&mut rng);
        let mut coeffs = vec![C64::new(0.0, 0.0); len];
        for (rank, &i) in order.iter().enumerate() {
            let mag = if sparse {
                if rank < 8 { 0.5 + rng.random::<f64>() } else { 1e-4 * rng.random::<f64>() }
            } else {
                (0.5 + rng.random::<f64>()) * ((rank + 1) as f64).powf(-decay)
            };
            coeffs[i] = C64::from_polar(mag, 2.0 * PI * rng.random::<f64>());
        }
        let spec = SpectralVector::new(SpectralDomain::Torus { dims, side }, coeffs).unwrap();
        let fr = fourier_ratio(&spec).unwrap();
        for eps in [0.05, 0.1, 0.25] {
            let s = ((fr * fr / (eps * eps)).ceil() as usize).min(len);
            let (_, tail) = best_s_truncation(&spec, s).unwrap();
            worst = worst.max(tail / eps);
            checked += 1;
            if s < len {
                proper += 1;
            }
        }
    }
    Outcome::new(
        worst <= 1.0 && checked == 3000 && proper >= 1500,
        format!("{checked} (spectrum, ε) pairs, {proper} with S below the length, max tail/ε = {worst:.4}"),
    )
}

fn criterion_10(first: &SweepRun) -> Outcome {
    // Second pass on a single worker: identical bytes show the output does not depend on scheduling.
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let second = pool.install(|| run_all("rerun"));
    let mut differing = Vec::new();
    for (a, b) in first.sweeps.iter().zip(&second.sweeps) {
        if a.text != b.text {
            differing.push(a.stem.clone());
        }
    }
    Outcome::new(
        differing.is_empty() && first.sweeps.len() == second.sweeps.len(),
        format!("{} sweep CSVs compared, differing {differing:?}", first.sweeps.len()),
    )
}

fn report(number: usize, title: &str, limit: Option<Duration>, elapsed: Duration, outcome: Outcome) -> bool {
    let within = limit.is_none_or(|l| elapsed <= l);
    let pass = outcome.pass && within;
    let limit_text = limit.map_or(String::new(), |l| format!(" / limit {:.0} s", l.as_secs_f64()));
    println!(
        "criterion {number:>2} {}: {title}: {} [{:.1} s{limit_text}]",
        if pass { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64()
    );
    pass
}

/// Runs `f`, returning its outcome and its own wall time plus `sweeps`.
fn timed(sweeps: Duration, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let outcome = f();
    (outcome, sweeps + start.elapsed())
}

/// Criteria that read the shared sweep CSVs.
const NEEDS_SWEEPS: [usize; 7] = [1, 2, 3, 5, 7, 8, 10];

fn main() -> ExitCode {
    // Optional positional arguments select criteria, e.g. `cargo test --test acceptance -- 4 9`.
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let wants = |k: usize| selected.is_empty() || selected.contains(&k);
    let run = if NEEDS_SWEEPS.iter().any(|&k| wants(k)) {
        let start = Instant::now();
        let run = run_all("run");
        println!("acceptance sweeps: {} CSVs in {:.1} s", run.sweeps.len(), start.elapsed().as_secs_f64());
        run
    } else {
        SweepRun { sweeps: Vec::new() }
    };
    let secs = |s| Some(Duration::from_secs(s));
    let mut all = true;

    type Check<'a> = Box<dyn FnOnce() -> (Outcome, Duration) + 'a>;
    let checks: Vec<(usize, &str, Option<Duration>, Check)> = vec![
        (1, "Fourier-ratio bound on the torus", secs(60), Box::new(|| timed(run.elapsed(&["fr_torus_"]), || criterion_1(&run)))),
        (2, "logarithmic growth of r_N", None, Box::new(|| timed(run.elapsed(&["rn_vs_logn_"]), || criterion_2(&run)))),
        (3, "Riemann, L² lower bound and decay", None, Box::new(|| timed(run.elapsed(&["lemmas", "decay"]), || criterion_3(&run)))),
        (4, "quadrature exactness", secs(30), Box::new(|| timed(Duration::ZERO, criterion_4))),
        (5, "Fourier-ratio bound on the sphere", None, Box::new(|| timed(run.elapsed(&["fr_sphere"]), || criterion_5(&run)))),
        (6, "solver against oracle", secs(120), Box::new(|| timed(Duration::ZERO, criterion_6))),
        (7, "torus recovery within 11.47ε", secs(600), Box::new(|| timed(run.elapsed(&["recover_torus"]), || criterion_7(&run)))),
        (8, "sphere recovery within 11.47ε", secs(300), Box::new(|| timed(run.elapsed(&["recover_sphere"]), || criterion_8(&run)))),
        (9, "best-S truncation tail", secs(10), Box::new(|| timed(Duration::ZERO, criterion_9))),
        (10, "reproducible sweep CSVs", None, Box::new(|| timed(Duration::ZERO, || criterion_10(&run)))),
    ];
    for (number, title, limit, check) in checks {
        if wants(number) {
            let (outcome, elapsed) = check();
            all &= report(number, title, limit, elapsed, outcome);
        }
    }

    if all {
        println!("acceptance: all selected criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
