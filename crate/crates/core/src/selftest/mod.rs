//! The deterministic property suite.
//!
//! Every instance draws from its own ChaCha stream keyed by `(seed, suite,
//! instance)`, instances run in parallel and results are collected in
//! index order, so a report depends only on the configuration.

mod gen;
mod oracle;
mod suites;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::scalars::BanachRing;
use suites::Check;

pub use oracle::{closest_vector, IntLattice};

pub const SCHEMA_VERSION: u32 = 1;
const MAX_LISTED_FAILURES: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub id: u32,
    pub name: &'static str,
    pub property: &'static str,
    pub instances: usize,
    pub passed: usize,
    /// The first few failures, in instance order.
    pub failures: Vec<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub all_passed: bool,
}

struct Tally {
    instances: usize,
    passed: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            instances: 0,
            passed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, label: &str, checks: Vec<Check>) {
        for (i, c) in checks.into_iter().enumerate() {
            self.instances += 1;
            match c {
                Ok(()) => self.passed += 1,
                Err(msg) if self.failures.len() < MAX_LISTED_FAILURES => {
                    self.failures.push(format!("{label} #{i}: {msg}"))
                }
                Err(_) => {}
            }
        }
    }

    fn finish(self, id: u32, name: &'static str, property: &'static str) -> SuiteReport {
        SuiteReport {
            id,
            name,
            property,
            pass: self.instances > 0 && self.passed == self.instances,
            instances: self.instances,
            passed: self.passed,
            failures: self.failures,
        }
    }
}

/// Runs `count` instances of part `part` of suite `id` in parallel.
fn batch<F>(cfg: &RunConfig, id: u32, part: u64, count: usize, f: F) -> Vec<Check>
where
    F: Fn(&mut ChaCha8Rng) -> Check + Sync,
{
    (0..count as u64)
        .into_par_iter()
        .map(|i| f(&mut cfg.rng(id as u64, part << 24 | i)))
        .collect()
}

pub const NORM_AXIOM_INSTANCES: usize = 1000;
pub const COFINALITY_INSTANCES: usize = 200;
pub const LAURENT_INSTANCES: usize = 200;
pub const RESIDUE_INSTANCES: usize = 100;
pub const SPECTRUM_INSTANCES: usize = 50;
pub const ADJUNCTION_INSTANCES: usize = 500;
pub const PI_TENSOR_DRAWS: usize = 3;
pub const BASE_CHANGE_INSTANCES: usize = 50;

pub const SUITE_IDS: [u32; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

fn koszul_rings() -> Vec<BanachRing> {
    vec![BanachRing::padic(5).unwrap(), BanachRing::rationals()]
}

/// Runs one suite; `id` ranges over [`SUITE_IDS`].
pub fn run_suite(cfg: &RunConfig, id: u32) -> SuiteReport {
    let mut t = Tally::new();
    match id {
        1 => {
            t.record("vector", batch(cfg, id, 0, NORM_AXIOM_INSTANCES, suites::vector_norm_axioms));
            t.record("tensor", batch(cfg, id, 1, NORM_AXIOM_INSTANCES, suites::tensor_norm_axioms));
            t.record("series", batch(cfg, id, 2, NORM_AXIOM_INSTANCES, suites::series_norm_axioms));
            t.finish(id, "norm-axioms", "triangle, strong triangle and homogeneity of every norm")
        }
        2 => {
            t.record("series", batch(cfg, id, 0, COFINALITY_INSTANCES, suites::cofinality));
            t.finish(id, "cofinality", "S-norm at (1,1) at most 2 times the T-norm at (2,3) over Q_p")
        }
        3 => {
            t.record("worked", vec![suites::laurent_worked_instance()]);
            t.record("random", batch(cfg, id, 0, LAURENT_INSTANCES, suites::laurent_recursion));
            t.finish(id, "laurent-recursion", "(gX - 1) is inverted by the coefficient recursion and injective")
        }
        4 => {
            for ring in koszul_rings() {
                let cases = suites::koszul_instances(&ring);
                let checks = cases.par_iter().map(|(_, spec)| suites::koszul(&ring, spec)).collect();
                t.record(&ring.to_string(), checks);
            }
            t.finish(id, "koszul", "degree -1 Koszul homology vanishes at D = 6, 8, 10")
        }
        5 => {
            let checks = koszul_rings()
                .par_iter()
                .enumerate()
                .map(|(k, ring)| suites::mayer_vietoris_cover(ring, &mut cfg.rng(id as u64, k as u64)))
                .collect();
            t.record("disk-annulus", checks);
            t.finish(id, "mayer-vietoris", "disk and annulus glue to the unit disc exactly at D = 8")
        }
        6 => {
            t.record("lattice", batch(cfg, id, 0, RESIDUE_INSTANCES, suites::residue_norm_oracle));
            t.finish(id, "residue-norm", "residue norm equals exhaustive closest-vector search")
        }
        7 => {
            let (bound, grid) = (cfg.prime_bound, cfg.eps_grid);
            t.record("1+X", vec![suites::spectrum_one_plus_x(bound, grid)]);
            t.record(
                "random",
                batch(cfg, id, 0, SPECTRUM_INSTANCES, |rng| suites::spectrum_random(rng, bound, grid)),
            );
            t.finish(id, "spectrum", "sup over the spectrum sits on the Archimedean fiber and below the powers")
        }
        8 => {
            t.record("adjunction", batch(cfg, id, 0, ADJUNCTION_INSTANCES, suites::adjunction));
            let pairs: Vec<(usize, usize)> = (0..=3).flat_map(|a| (0..=3).map(move |b| (a, b))).collect();
            for (k, &(a, b)) in pairs.iter().enumerate() {
                let checks = batch(cfg, id, 1 + k as u64, PI_TENSOR_DRAWS, |rng| suites::pi_tensor(rng, a, b));
                t.record(&format!("tensor ({a},{b})"), checks);
            }
            t.finish(id, "pi-adjunction", "sum and max sources give equal operator norms; pi commutes with tensor")
        }
        9 => {
            t.record("2X", vec![suites::base_change_example()]);
            t.record("random", batch(cfg, id, 0, BASE_CHANGE_INSTANCES, suites::base_change_instance));
            t.finish(id, "base-change", "presentations over Z move to Q_2 and Q generator by generator")
        }
        10 => determinism(cfg, &property_suites(cfg)),
        _ => panic!("no suite {id}"),
    }
}

fn property_suites(cfg: &RunConfig) -> Vec<SuiteReport> {
    SUITE_IDS[..9].iter().map(|&id| run_suite(cfg, id)).collect()
}

/// Reruns suites 1–9 on a single thread and compares with `reference`.
fn determinism(cfg: &RunConfig, reference: &[SuiteReport]) -> SuiteReport {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map(|pool| pool.install(|| property_suites(cfg)));
    let check = match single {
        Ok(serial) if serial == reference => Ok(()),
        Ok(_) => Err("single-threaded run differs".to_string()),
        Err(e) => Err(format!("thread pool: {e}")),
    };
    let mut t = Tally::new();
    t.record("rerun", vec![check]);
    t.finish(10, "determinism", "reports agree between one thread and the full pool")
}

/// Suites 1–9 followed by the determinism check.
pub fn run_selftest(cfg: &RunConfig) -> SelftestReport {
    let mut suites = property_suites(cfg);
    suites.push(determinism(cfg, &suites));
    let all_passed = suites.iter().all(|s| s.pass);
    SelftestReport {
        schema_version: SCHEMA_VERSION,
        config: cfg.clone(),
        suites,
        all_passed,
    }
}

