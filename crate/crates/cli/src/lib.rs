//! Command-line front end for `supercong-core`: suite runs, single sums,
//! Bernoulli numbers, the odd-`n` ratio scan and a JSONL result cache.
//!
//! [`run`] is the whole program minus process exit, so tests can drive it
//! in-process with captured output.

pub mod args;
pub mod cache;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{CommandFactory, Parser};
use serde_json::json;
use supercong_core::bernoulli::{bernoulli_exact, bernoulli_mod};
use supercong_core::sums::{DirectEngine, Limits, MhsQuery, Strategy, SumEngine};
use supercong_core::verifier::{
    conjecture_scan_with, run_check_with, scan_calibration, suite_specs, CheckId, CheckResult, CheckSpec, ScanValue,
    SuiteOptions, Verdict,
};
use supercong_core::Error;

use args::{
    BernoulliArgs, CacheAction, CacheArgs, CacheOpt, Cli, Command, ComputeArgs, MethodArg, ScanArgs, SimpleFormat,
    VerifyArgs,
};
use cache::{CachedEngine, CACHE_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Exit status of a finished suite: any failed check gives 1; otherwise an
/// error from a size limit gives 3 and any other error 1. Rejections count
/// as failures only under `strict_hypotheses`.
pub fn exit_code(results: &[CheckResult], strict_hypotheses: bool) -> i32 {
    if results.iter().any(CheckResult::failed) {
        return EXIT_FAILURE;
    }
    let errors: Vec<&Error> = results.iter().filter_map(CheckResult::error).collect();
    if errors.iter().any(|e| e.is_resource_limit()) {
        return EXIT_RESOURCE;
    }
    if !errors.is_empty() || (strict_hypotheses && results.iter().any(CheckResult::rejected)) {
        return EXIT_FAILURE;
    }
    EXIT_OK
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::NotPrime(_) | Error::ZeroExponent => EXIT_USAGE,
        e if e.is_resource_limit() => EXIT_RESOURCE,
        _ => EXIT_FAILURE,
    }
}

/// Runs `specs` on a pool of `threads` scoped workers and returns the results
/// in the order of `specs`. With `fail_fast`, workers stop taking new specs
/// once any check fails, so only the executed checks are returned.
pub fn run_specs(
    specs: &[CheckSpec],
    engine: &(dyn SumEngine + Sync),
    threads: usize,
    fail_fast: bool,
) -> Vec<CheckResult> {
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let done = Mutex::new(Vec::with_capacity(specs.len()));
    std::thread::scope(|scope| {
        for _ in 0..threads.clamp(1, specs.len().max(1)) {
            scope.spawn(|| loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(spec) = specs.get(i) else { break };
                let result = run_check_with(spec, engine);
                if fail_fast && result.failed() {
                    stop.store(true, Ordering::Relaxed);
                }
                done.lock().expect("result lock").push((i, result));
            });
        }
    });
    let mut done = done.into_inner().expect("result lock");
    done.sort_by_key(|(i, _)| *i);
    done.into_iter().map(|(_, r)| r).collect()
}

fn cache_path(opt: &CacheOpt) -> Option<PathBuf> {
    opt.cache_path
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
}

/// Either a cache-backed engine or a plain one.
enum Engine {
    Direct(DirectEngine),
    Cached(CachedEngine),
}

impl Engine {
    fn new(opt: &CacheOpt, err: &mut dyn Write) -> Self {
        match cache_path(opt) {
            Some(path) => {
                let engine = CachedEngine::open(path, Limits::default());
                for w in engine.warnings() {
                    let _ = writeln!(err, "warning: {w}");
                }
                Engine::Cached(engine)
            }
            None => Engine::Direct(DirectEngine::default()),
        }
    }

    fn get(&self) -> &(dyn SumEngine + Sync) {
        match self {
            Engine::Direct(e) => e,
            Engine::Cached(e) => e,
        }
    }

    /// Reports write failures that happened after open.
    fn finish(&self, already: usize, err: &mut dyn Write) {
        if let Engine::Cached(e) = self {
            for w in e.warnings().into_iter().skip(already) {
                let _ = writeln!(err, "warning: {w}");
            }
        }
    }

    fn warning_count(&self) -> usize {
        match self {
            Engine::Cached(e) => e.warnings().len(),
            Engine::Direct(_) => 0,
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let mut text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                if !text.contains("Usage:") {
                    text = format!("{text}\n{}\n", Cli::command().render_usage());
                }
                let _ = write!(err, "{text}");
            }
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let outcome = match cli.command {
        Command::Verify(a) => verify(&a, out, err),
        Command::Compute(a) => compute(&a, out, err),
        Command::Bernoulli(a) => bernoulli(&a, out),
        Command::Scan(a) => scan(&a, out, err),
        Command::Cache(a) => cache_cmd(&a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            error_code(&e)
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Usage(format!("i/o error: {e}"))
}

fn verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let ids: Vec<CheckId> = if a.ids.is_empty() {
        CheckId::ALL.to_vec()
    } else {
        a.ids.clone()
    };
    let opts = SuiteOptions {
        n: a.n.clone(),
        k: a.k.clone(),
    };
    let specs = suite_specs(&ids, &a.primes, &a.r, &opts);
    let threads = a
        .threads
        .map(|t| t as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let engine = Engine::new(&a.cache, err);
    let seen = engine.warning_count();
    let results = run_specs(&specs, engine.get(), threads, a.fail_fast);
    engine.finish(seen, err);
    out.write_all(report::render(&results, a.format, !a.no_timings).as_bytes())
        .map_err(io_err)?;
    for r in &results {
        if let Verdict::Errored(e) = &r.verdict {
            let _ = writeln!(err, "error: {} p={}: {e}", r.spec.id, r.spec.params.p);
        }
    }
    Ok(exit_code(&results, a.strict_hypotheses))
}

fn compute(a: &ComputeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let mut q = MhsQuery::harmonic(a.n, a.k, a.p, a.r)?;
    if let Some(m) = a.m {
        q = q.with_modulus(m)?;
    }
    let strategy = match a.method {
        MethodArg::Auto => Strategy::Auto,
        MethodArg::Bruteforce => Strategy::BruteForce,
        MethodArg::Convolution => Strategy::Convolution,
    };
    let engine = Engine::new(&a.cache, err);
    let seen = engine.warning_count();
    let (res, cached) = match &engine {
        Engine::Cached(c) => c.lookup_or_compute(&q, strategy)?,
        Engine::Direct(d) => (d.mhs(&q, strategy)?, false),
    };
    engine.finish(seen, err);
    let modulus = res.residue.modulus().to_string();
    let text = match a.format {
        SimpleFormat::Text => format!(
            "S_{}^({})({}^{}) = {} (mod {modulus})  method={} terms={}{}\n",
            a.n,
            a.k,
            a.p,
            a.r,
            res.residue,
            res.method,
            res.term_count,
            if cached { " cached" } else { "" }
        ),
        SimpleFormat::Json => {
            let v = json!({
                "n": a.n,
                "k": a.k,
                "p": a.p,
                "r": a.r,
                "m": q.m(),
                "modulus": modulus,
                "residue": res.residue.to_string(),
                "method": res.method.as_str(),
                "term_count": res.term_count.to_string(),
                "cached": cached,
                "elapsed_ms": (res.elapsed.as_secs_f64() * 1e6).round() / 1e3,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("serializes"))
        }
    };
    out.write_all(text.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn bernoulli(a: &BernoulliArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let text = match &a.modulus {
        Some(m) => bernoulli_mod(a.n, m)?.to_string(),
        None => bernoulli_exact(a.n)?.to_string(),
    };
    writeln!(out, "{text}").map_err(io_err)?;
    Ok(EXIT_OK)
}

fn scan(a: &ScanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let engine = Engine::new(&a.cache, err);
    let seen = engine.warning_count();
    // validate arguments before spending time on calibration
    conjecture_scan_with(a.n, &[], a.r, engine.get())?;
    let calibration = scan_calibration(&a.primes, a.r, engine.get())?;
    let rows = conjecture_scan_with(a.n, &a.primes, a.r, engine.get())?;
    engine.finish(seen, err);
    let calibrated = !calibration.is_empty() && calibration.iter().all(|c| c.ok);
    let text = match a.format {
        SimpleFormat::Text => {
            let mut s = String::new();
            for c in &calibration {
                let ratio = c.row.ratio().expect("calibration rows carry a ratio");
                s.push_str(&format!(
                    "calibration n={} p={} r={} ratio={} expected={} {}\n",
                    c.row.n,
                    c.row.p,
                    c.row.r,
                    ratio,
                    c.expected,
                    if c.ok { "ok" } else { "MISMATCH" }
                ));
            }
            if calibrated {
                for row in &rows {
                    match &row.value {
                        ScanValue::Ratio { sum, ratio } => s.push_str(&format!(
                            "n={} p={} r={} sum={} ratio={}\n",
                            row.n, row.p, row.r, sum, ratio
                        )),
                        ScanValue::Unavailable(why) => {
                            s.push_str(&format!("n={} p={} r={} unavailable: {why}\n", row.n, row.p, row.r))
                        }
                    }
                }
            }
            s
        }
        SimpleFormat::Json => {
            let cal: Vec<_> = calibration
                .iter()
                .map(|c| {
                    json!({
                        "n": c.row.n,
                        "p": c.row.p,
                        "r": c.row.r,
                        "ratio": c.row.ratio().map(ToString::to_string),
                        "expected": c.expected.to_string(),
                        "ok": c.ok,
                    })
                })
                .collect();
            let data: Vec<_> = if calibrated {
                rows.iter()
                    .map(|row| match &row.value {
                        ScanValue::Ratio { sum, ratio } => json!({
                            "n": row.n, "p": row.p, "r": row.r,
                            "sum": sum.to_string(), "ratio": ratio.to_string(), "note": null,
                        }),
                        ScanValue::Unavailable(why) => json!({
                            "n": row.n, "p": row.p, "r": row.r,
                            "sum": null, "ratio": null, "note": why,
                        }),
                    })
                    .collect()
            } else {
                Vec::new()
            };
            let v = json!({ "calibration": cal, "rows": data });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("serializes"))
        }
    };
    out.write_all(text.as_bytes()).map_err(io_err)?;
    if calibration.is_empty() {
        let _ = writeln!(
            err,
            "error: no prime in the list admits a calibration row (need p > 5 with B_(p-3), B_(p-5) prime to p)"
        );
        return Ok(EXIT_FAILURE);
    }
    if !calibrated {
        let _ = writeln!(err, "error: calibration mismatch; scan data withheld");
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

fn cache_cmd(a: &CacheArgs, out: &mut dyn Write) -> Result<i32, Error> {
    let Some(path) = cache_path(&a.cache) else {
        return Err(Error::Usage(format!(
            "no cache file: pass --cache-path or set {CACHE_ENV}"
        )));
    };
    match a.action {
        CacheAction::Stats => {
            let st = cache::stats(&path).map_err(io_err)?;
            writeln!(
                out,
                "path: {}\nexists: {}\nbytes: {}\nrecords: {}\nstale: {}\ncorrupt: {}",
                st.path.display(),
                st.exists,
                st.bytes,
                st.records,
                st.stale,
                st.corrupt
            )
            .map_err(io_err)?;
        }
        CacheAction::Clear => {
            let removed = cache::clear(&path).map_err(io_err)?;
            let verb = if removed { "removed" } else { "no cache at" };
            writeln!(out, "{verb} {}", path.display()).map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::time::Duration;
    use supercong_core::verifier::Params;

    fn synthetic(verdict: Verdict) -> CheckResult {
        CheckResult {
            spec: CheckSpec::new(CheckId::MAIN, Params::prime(7).with_r(2)),
            lhs: None,
            rhs: None,
            modulus: None,
            verdict,
            lhs_method: None,
            elapsed: Duration::ZERO,
        }
    }

    fn verdict_strategy() -> impl proptest::strategy::Strategy<Value = Verdict> {
        prop_oneof![
            Just(Verdict::Pass),
            Just(Verdict::Fail),
            Just(Verdict::Rejected("hypothesis".into())),
            Just(Verdict::Errored(Error::PolynomialLength { needed: 10, limit: 1 })),
            Just(Verdict::Errored(Error::IllPosed("x".into()))),
        ]
    }

    proptest! {
        #[test]
        fn exit_code_contract(verdicts in proptest::collection::vec(verdict_strategy(), 0..12), strict in any::<bool>()) {
            let results: Vec<CheckResult> = verdicts.iter().cloned().map(synthetic).collect();
            let code = exit_code(&results, strict);
            let any_fail = verdicts.contains(&Verdict::Fail);
            let any_rejected = verdicts.iter().any(|v| matches!(v, Verdict::Rejected(_)));
            let any_limit = verdicts.iter().any(|v| matches!(v, Verdict::Errored(e) if e.is_resource_limit()));
            let any_error = verdicts.iter().any(|v| matches!(v, Verdict::Errored(_)));
            let expected = if any_fail {
                EXIT_FAILURE
            } else if any_limit {
                EXIT_RESOURCE
            } else if any_error || (strict && any_rejected) {
                EXIT_FAILURE
            } else {
                EXIT_OK
            };
            prop_assert_eq!(code, expected);
            prop_assert_eq!(code == EXIT_OK, verdicts.iter().all(|v| *v == Verdict::Pass || (!strict && matches!(v, Verdict::Rejected(_)))));
        }
    }

    #[test]
    fn pool_preserves_order() {
        let specs = suite_specs(
            &[CheckId::ZHAO1, CheckId::WANG_PP],
            &[5, 7, 11],
            &[1, 2],
            &SuiteOptions::default(),
        );
        let engine = DirectEngine::default();
        let one = run_specs(&specs, &engine, 1, false);
        let many = run_specs(&specs, &engine, 4, false);
        let key = |rs: &[CheckResult]| rs.iter().map(|r| (r.spec.clone(), r.lhs.clone())).collect::<Vec<_>>();
        assert_eq!(key(&one), key(&many));
        assert_eq!(one.len(), specs.len());
    }
}
