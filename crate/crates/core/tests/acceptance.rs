//! The ten acceptance criteria, one line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dagger_core::config::RunConfig;
use dagger_core::selftest::{run_selftest, run_suite, SuiteReport};

const NORM_AXIOM_BUDGET: Duration = Duration::from_secs(60);

fn line(id: u32, name: &str, pass: bool, detail: &str) -> bool {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {name:<18} {verdict}  {detail}");
    pass
}

fn suite_line(report: &SuiteReport, extra: &str) -> bool {
    let mut detail = format!("{}/{} instances{extra}", report.passed, report.instances);
    for f in &report.failures {
        detail.push_str(&format!("\n      {f}"));
    }
    line(report.id, report.name, report.pass, &detail)
}

fn serialized(threads: usize, cfg: &RunConfig) -> String {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| serde_json::to_string_pretty(&run_selftest(cfg)).unwrap())
}

fn main() -> ExitCode {
    let cfg = RunConfig { seed: 7, ..RunConfig::default() };
    let mut ok = true;
    for id in 1..=9 {
        let start = Instant::now();
        let report = run_suite(&cfg, id);
        let elapsed = start.elapsed();
        let extra = format!(", {:.1}s", elapsed.as_secs_f64());
        let pass = suite_line(&report, &extra);
        ok &= pass;
        if id == 1 && elapsed >= NORM_AXIOM_BUDGET {
            ok &= line(1, "norm-axioms", false, "over the 60 s budget");
        }
    }
    let max_threads = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let single = serialized(1, &cfg);
    let parallel = serialized(max_threads, &cfg);
    ok &= line(
        10,
        "determinism",
        single == parallel,
        &format!("selftest --seed 7 on 1 and {max_threads} threads, {} bytes", single.len()),
    );
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
