//! Benchmark runs over the generated families, CSV output, and the fits
//! used to tell exponential from polynomial growth.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families;
use crate::program::Program;
use crate::tableau::{proof_length, solve, EngineConfig, ExtensionSet, Heuristic, Outcome};

/// First line of every CSV written by [`records_to_csv`].
pub const CSV_VERSION: &str = "# aspt-bench v1";
pub const CSV_COLUMNS: &str =
    "family,n,preset,seed,p,trial,result,decisions,entries,lookahead_probes,proof_length,wall_millis";

/// Percentages swept for `addred-php`.
pub const ADDRED_PERCENTS: [usize; 9] = [50, 100, 150, 200, 250, 300, 350, 400, 450];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Php,
    Cphp,
    Ephp,
    PhpLoops,
    AddredPhp,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Php, Family::Cphp, Family::Ephp, Family::PhpLoops, Family::AddredPhp];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Php => "php",
            Family::Cphp => "cphp",
            Family::Ephp => "ephp",
            Family::PhpLoops => "php-loops",
            Family::AddredPhp => "addred-php",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Family::ALL.into_iter().find(|f| f.as_str() == s)
    }

    /// The plain family member; `addred-php` yields the base pigeonhole program.
    pub fn generate(self, n: usize) -> Result<Program> {
        match self {
            Family::Php | Family::AddredPhp => families::gen_php(n),
            Family::Cphp => families::gen_cphp(n),
            Family::Ephp => families::gen_ephp(n),
            Family::PhpLoops => families::gen_php_selfloops(n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchResult {
    Sat,
    Unsat,
    /// Censored: the per-instance time limit hit.
    Timeout,
}

impl BenchResult {
    pub fn as_str(self) -> &'static str {
        match self {
            BenchResult::Sat => "SAT",
            BenchResult::Unsat => "UNSAT",
            BenchResult::Timeout => "TIMEOUT",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub family: Family,
    pub n: usize,
    pub preset: String,
    pub seed: u64,
    /// Redundancy percentage and trial index, for `addred-php` only.
    pub p: Option<usize>,
    pub trial: Option<usize>,
    pub result: BenchResult,
    pub decisions: u64,
    pub entries: u64,
    pub lookahead_probes: u64,
    pub proof_length: Option<usize>,
    pub wall_millis: f64,
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub family: Family,
    pub min: usize,
    pub max: usize,
    pub config: EngineConfig,
    /// Trials per percentage for `addred-php`; ignored otherwise.
    pub repeats: usize,
    pub seed: u64,
    pub timeout: Duration,
    /// Worker threads; 0 picks the rayon default.
    pub threads: usize,
}

impl BenchSpec {
    pub fn new(family: Family, min: usize, max: usize, config: EngineConfig) -> Self {
        BenchSpec { family, min, max, config, repeats: 15, seed: 0, timeout: Duration::from_secs(60), threads: 0 }
    }
}

struct Instance {
    n: usize,
    p: Option<usize>,
    trial: Option<usize>,
    seed: u64,
}

/// Seed of an `addred-php` trial, fixed by the base seed, `p` and the trial.
pub fn trial_seed(base: u64, p: usize, trial: usize) -> u64 {
    base.wrapping_mul(1_000_003).wrapping_add((p as u64) * 1000 + trial as u64)
}

fn config_label(c: &EngineConfig) -> String {
    let mut s = c.preset.as_str().to_string();
    if c.lookahead {
        s.push_str("+la");
    }
    match c.heuristic {
        Heuristic::Lex => {}
        Heuristic::Moms => s.push_str("+moms"),
        Heuristic::Random(_) => s.push_str("+random"),
    }
    s
}

/// Runs every instance described by `spec`; instances run in parallel, each with
/// its own engine, and records come back in instance order.
pub fn bench_run(spec: &BenchSpec) -> Result<Vec<BenchRecord>> {
    if spec.min < 1 || spec.min > spec.max {
        return Err(Error::Input(format!("bad size range {}..{}", spec.min, spec.max)));
    }
    let mut instances = Vec::new();
    for n in spec.min..=spec.max {
        if spec.family == Family::AddredPhp {
            for p in ADDRED_PERCENTS {
                for t in 0..spec.repeats {
                    instances.push(Instance { n, p: Some(p), trial: Some(t), seed: trial_seed(spec.seed, p, t) });
                }
            }
        } else {
            instances.push(Instance { n, p: None, trial: None, seed: spec.seed });
        }
    }
    let run = || instances.par_iter().map(|inst| run_instance(spec, inst)).collect::<Result<Vec<_>>>();
    if spec.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(spec.threads)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?
            .install(run)
    } else {
        run()
    }
}

fn run_instance(spec: &BenchSpec, inst: &Instance) -> Result<BenchRecord> {
    let base = spec.family.generate(inst.n)?;
    let program = match inst.p {
        Some(p) => families::add_random_redundancy(&base, inst.n, p, inst.seed)?,
        None => base,
    };
    let mut config = spec.config.clone().with_time_limit(Some(spec.timeout));
    if let Heuristic::Random(_) = config.heuristic {
        config = config.with_heuristic(Heuristic::Random(inst.seed));
    }
    let t = Instant::now();
    let sol = solve(&program, &ExtensionSet::new(), &config)?;
    let wall_millis = t.elapsed().as_secs_f64() * 1000.0;
    let (result, proof_len) = match &sol.outcome {
        Outcome::Sat { .. } => (BenchResult::Sat, None),
        Outcome::Unsat { proof } => (BenchResult::Unsat, proof.as_ref().map(proof_length)),
        Outcome::Unknown => (BenchResult::Timeout, None),
    };
    Ok(BenchRecord {
        family: spec.family,
        n: inst.n,
        preset: config_label(&spec.config),
        seed: inst.seed,
        p: inst.p,
        trial: inst.trial,
        result,
        decisions: sol.stats.decisions,
        entries: sol.stats.entries,
        lookahead_probes: sol.stats.lookahead_probes,
        proof_length: proof_len,
        wall_millis,
    })
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

pub fn records_to_csv(records: &[BenchRecord]) -> String {
    let mut out = format!("{CSV_VERSION}\n{CSV_COLUMNS}\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{:.3}",
            r.family.as_str(),
            r.n,
            r.preset,
            r.seed,
            opt(&r.p),
            opt(&r.trial),
            r.result.as_str(),
            r.decisions,
            r.entries,
            r.lookahead_probes,
            opt(&r.proof_length),
            r.wall_millis
        )
        .unwrap();
    }
    out
}

/// Least-squares line `y = slope·x + intercept` with its R².
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// `None` with fewer than two points or no spread in `x`.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<Fit> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum();
    let r2 = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Some(Fit { slope, intercept, r2 })
}

/// Slope of `ln y` against `ln x`.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> Option<Fit> {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.max(1.0).ln()).collect();
    fit_line(&lx, &ly)
}

/// Slope of `ln y` against `x`.
pub fn loglinear_fit(xs: &[f64], ys: &[f64]) -> Option<Fit> {
    let ly: Vec<f64> = ys.iter().map(|y| y.max(1.0).ln()).collect();
    fit_line(xs, &ly)
}

/// Growth of decisions and proof lengths over `n`. A quantity is flagged
/// exponential when `ln y ~ n` fits at least as well as `ln y ~ ln n`, and
/// polynomial otherwise.
#[derive(Clone, Debug, Default)]
pub struct ScalingReport {
    pub decisions_loglinear: Option<Fit>,
    pub decisions_loglog: Option<Fit>,
    pub decisions_exponential: Option<bool>,
    pub proof_loglinear: Option<Fit>,
    pub proof_loglog: Option<Fit>,
    pub proof_polynomial: Option<bool>,
}

pub fn scaling_report(records: &[BenchRecord]) -> ScalingReport {
    let solved: Vec<&BenchRecord> = records.iter().filter(|r| r.result != BenchResult::Timeout && r.p.is_none()).collect();
    let xs: Vec<f64> = solved.iter().map(|r| r.n as f64).collect();
    let dec: Vec<f64> = solved.iter().map(|r| r.decisions as f64).collect();
    let mut rep = ScalingReport {
        decisions_loglinear: loglinear_fit(&xs, &dec),
        decisions_loglog: loglog_fit(&xs, &dec),
        ..Default::default()
    };
    if let (Some(a), Some(b)) = (rep.decisions_loglinear, rep.decisions_loglog) {
        rep.decisions_exponential = Some(dec.iter().any(|&d| d > 0.0) && a.r2 >= b.r2);
    }
    let with_proof: Vec<(f64, f64)> =
        solved.iter().filter_map(|r| r.proof_length.map(|l| (r.n as f64, l as f64))).collect();
    let (px, py): (Vec<f64>, Vec<f64>) = with_proof.into_iter().unzip();
    rep.proof_loglinear = loglinear_fit(&px, &py);
    rep.proof_loglog = loglog_fit(&px, &py);
    if let (Some(a), Some(b)) = (rep.proof_loglinear, rep.proof_loglog) {
        rep.proof_polynomial = Some(b.r2 >= a.r2);
    }
    rep
}

impl ScalingReport {
    pub fn text(&self) -> String {
        let fit = |f: &Option<Fit>| match f {
            Some(f) => format!("slope {:.3}, R² {:.3}", f.slope, f.r2),
            None => "n/a".to_string(),
        };
        let flag = |b: Option<bool>| b.map_or("n/a", |b| if b { "yes" } else { "no" });
        format!(
            "decisions: ln-linear {}; ln-ln {}; exponential: {}\nproof length: ln-linear {}; ln-ln {}; polynomial: {}\n",
            fit(&self.decisions_loglinear),
            fit(&self.decisions_loglog),
            flag(self.decisions_exponential),
            fit(&self.proof_loglinear),
            fit(&self.proof_loglog),
            flag(self.proof_polynomial)
        )
    }
}

/// Median, minimum and maximum per redundancy percentage.
#[derive(Clone, Debug, PartialEq)]
pub struct AddredRow {
    pub n: usize,
    pub p: usize,
    pub trials: usize,
    pub censored: usize,
    pub decisions: [f64; 3],
    pub millis: [f64; 3],
}

fn med_min_max(mut v: Vec<f64>) -> [f64; 3] {
    if v.is_empty() {
        return [f64::NAN; 3];
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let k = v.len();
    let med = if k % 2 == 1 { v[k / 2] } else { (v[k / 2 - 1] + v[k / 2]) / 2.0 };
    [med, v[0], v[k - 1]]
}

/// Summary over trials; censored trials are counted but excluded from the
/// statistics.
pub fn addred_summary(records: &[BenchRecord]) -> Vec<AddredRow> {
    let mut keys: Vec<(usize, usize)> = records.iter().filter_map(|r| r.p.map(|p| (r.n, p))).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(n, p)| {
            let rows: Vec<&BenchRecord> = records.iter().filter(|r| r.n == n && r.p == Some(p)).collect();
            let done: Vec<&&BenchRecord> = rows.iter().filter(|r| r.result != BenchResult::Timeout).collect();
            AddredRow {
                n,
                p,
                trials: rows.len(),
                censored: rows.len() - done.len(),
                decisions: med_min_max(done.iter().map(|r| r.decisions as f64).collect()),
                millis: med_min_max(done.iter().map(|r| r.wall_millis).collect()),
            }
        })
        .collect()
}

pub fn addred_csv(rows: &[AddredRow]) -> String {
    let mut out = format!(
        "{CSV_VERSION} addred-summary\nn,p,trials,censored,decisions_median,decisions_min,decisions_max,millis_median,millis_min,millis_max\n"
    );
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.3},{:.3},{:.3}",
            r.n, r.p, r.trials, r.censored, r.decisions[0], r.decisions[1], r.decisions[2], r.millis[0], r.millis[1], r.millis[2]
        )
        .unwrap();
    }
    out
}

/// Whitespace-separated columns with a `#` header, one row per record or
/// summary row; readable by gnuplot and numpy alike.
pub fn plot_data(records: &[BenchRecord]) -> String {
    let summary = addred_summary(records);
    if !summary.is_empty() {
        let mut out = String::from("# p decisions_median decisions_min decisions_max millis_median millis_min millis_max\n");
        for r in &summary {
            writeln!(
                out,
                "{} {} {} {} {:.3} {:.3} {:.3}",
                r.p, r.decisions[0], r.decisions[1], r.decisions[2], r.millis[0], r.millis[1], r.millis[2]
            )
            .unwrap();
        }
        return out;
    }
    let mut out = String::from("# n decisions proof_length wall_millis\n");
    for r in records {
        let pl = r.proof_length.map_or("nan".to_string(), |l| l.to_string());
        if r.result == BenchResult::Timeout {
            writeln!(out, "{} nan {pl} nan", r.n).unwrap();
        } else {
            writeln!(out, "{} {} {pl} {:.3}", r.n, r.decisions, r.wall_millis).unwrap();
        }
    }
    out
}
