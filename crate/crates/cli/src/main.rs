//! `dagger`: batch frontend for dagger-core.
//!
//! Every command prints one JSON report. Exit status: 0 on success, 2 when
//! a check produces a witness or a violation, 1 on bad input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use dagger_core::config::{RunConfig, DEFAULT_EPS_GRID, DEFAULT_PRIME_BOUND, DEFAULT_SEED};
use dagger_core::localization::{koszul_h_check, mayer_vietoris, present_localization, KoszulVerdict};
use dagger_core::nonarch::pi_check;
use dagger_core::normed::NormFlavor;
use dagger_core::scalars::{format_rational, parse_rational};
use dagger_core::selftest::{run_selftest, SCHEMA_VERSION};
use dagger_core::series::{norm_s, norm_t, DEFAULT_DEGREE};
use dagger_core::spectrum::{global_sup, shilov_check, spectral_via_powers, ShilovVerdict};
use dagger_core::tensor::{tensor_norm_certified, tensor_norm_upper};
use dagger_core::wire::{
    parse, AlgebraJson, AlgebraMapJson, ModuleJson, SeriesFile, SpecJson, TensorElementJson,
};
use dagger_core::{BanachRing, PolyRadius, RingKind, TruncatedSeries};

#[derive(Parser, Debug)]
#[command(name = "dagger", version, about = "Exact checks for normed modules and overconvergent series")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every randomized check.
    #[arg(long, global = true, env = "DAGGER_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Truncation degree D.
    #[arg(long, global = true, env = "DAGGER_DEGREE", default_value_t = DEFAULT_DEGREE)]
    degree: u32,
    /// Largest prime visited in the spectrum.
    #[arg(long, global = true, env = "DAGGER_PRIME_BOUND", default_value_t = DEFAULT_PRIME_BOUND)]
    prime_bound: u64,
    /// Number of exponents ε = k/N per place.
    #[arg(long, global = true, env = "DAGGER_EPS_GRID", default_value_t = DEFAULT_EPS_GRID)]
    eps_grid: u32,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlavorArg {
    Sum,
    Max,
}

impl From<FlavorArg> for NormFlavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Sum => NormFlavor::Sum,
            FlavorArg::Max => NormFlavor::Max,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// S- and T-norms of a series.
    Norm {
        #[arg(long)]
        series: PathBuf,
        /// Polyradius, comma separated; one value is used for every variable.
        #[arg(long, default_value = "1")]
        rho: String,
        /// Ring when the file names none: integers, integers-trivial,
        /// rationals or padic:P.
        #[arg(long, default_value = "integers")]
        ring: String,
    },
    /// Projective tensor norm of an element of M ⊗ N.
    Tensor {
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        element: PathBuf,
        #[arg(long, default_value_t = 10)]
        coeff_bound: u32,
        #[arg(long, default_value_t = 2)]
        term_bound: u32,
    },
    /// Presentation of a localization.
    Localize {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Degree −1 Koszul homology of a one-variable localization.
    Koszul {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        /// Target algebra with the images of the variables; the algebra
        /// itself when omitted.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Exactness of the gluing sequence for a Weierstrass and a Laurent piece.
    MvCheck {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        v1: PathBuf,
        #[arg(long)]
        v2: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Fiber sups over the places of ℤ and the powers bound.
    Spectrum {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value = "1")]
        rho: String,
        #[arg(long, default_value_t = 8)]
        powers: u32,
    },
    /// Whether the sup is attained on the Archimedean fiber.
    Shilov {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value = "1")]
        rho: String,
    },
    /// Sum versus max sources on random maps, and π against tensor products.
    PiCheck {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// The full property suite.
    Selftest,
}

type Outcome = Result<(Value, bool), String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn lib<T>(r: dagger_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Like [`lib`], naming the file the offending value came from.
fn at<T>(path: &Path, r: dagger_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("{}: {e}", path.display()))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn parse_ring(s: &str) -> Result<BanachRing, String> {
    match s {
        "integers" => Ok(BanachRing::integers()),
        "integers-trivial" | "integers_trivial" => Ok(BanachRing::integers_trivial()),
        "rationals" => Ok(BanachRing::rationals()),
        _ => {
            let p = s
                .strip_prefix("padic:")
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| format!("unknown ring `{s}`"))?;
            lib(BanachRing::new(RingKind::RationalsPadic { p }))
        }
    }
}

fn parse_rho(s: &str, n: usize) -> Result<PolyRadius, String> {
    let parts = s
        .split(',')
        .map(|x| parse_rational(x.trim()).map_err(|e| format!("--rho: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let parts = if parts.len() == 1 && n != 1 { vec![parts[0].clone(); n] } else { parts };
    lib(PolyRadius::new(parts))
}

fn load_series(path: &Path, default_ring: &BanachRing) -> Result<TruncatedSeries, String> {
    let file: SeriesFile = load(path)?;
    file.to_series(default_ring).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cmd: &Command, cfg: &RunConfig) -> Outcome {
    match cmd {
        Command::Norm { series, rho, ring } => {
            let f = load_series(series, &parse_ring(ring)?)?;
            let rho = parse_rho(rho, f.nvars())?;
            let s = lib(norm_s(&f, &rho))?;
            let t = lib(norm_t(&f, &rho))?;
            Ok((json!({"ring": f.ring(), "S": s, "T": t}), true))
        }
        Command::Tensor { flavor, left, right, element, coeff_bound, term_bound } => {
            let m = at(left, load::<ModuleJson>(left)?.to_module())?;
            let n = at(right, load::<ModuleJson>(right)?.to_module())?;
            let x = at(element, load::<TensorElementJson>(element)?.to_element(&m, &n))?;
            let flavor = NormFlavor::from(*flavor);
            let certified = lib(tensor_norm_certified(&x, flavor, *coeff_bound, *term_bound))?;
            let stored = format_rational(&tensor_norm_upper(&x, flavor));
            Ok((json!({"flavor": flavor, "representation": stored, "norm": certified}), true))
        }
        Command::Localize { algebra, spec } => {
            let a = at(algebra, load::<AlgebraJson>(algebra)?.to_presentation())?;
            let spec = at(spec, load::<SpecJson>(spec)?.to_spec(a.ring()))?;
            let b = lib(present_localization(&a, &spec))?;
            Ok((json!({"added_variables": spec.added_vars(), "algebra": AlgebraJson::from_presentation(&b)}), true))
        }
        Command::Koszul { algebra, spec, map } => {
            let a = at(algebra, load::<AlgebraJson>(algebra)?.to_presentation())?;
            let spec = at(spec, load::<SpecJson>(spec)?.to_spec(a.ring()))?;
            let (b, images) = match map {
                Some(path) => at(path, load::<AlgebraMapJson>(path)?.to_parts())?,
                None => {
                    let n = a.nvars();
                    (a.clone(), (0..n).map(|i| dagger_core::poly::Poly::var(n, i)).collect())
                }
            };
            let verdict = lib(koszul_h_check(&a, &spec, &b, &images, cfg.degree))?;
            let ok = matches!(verdict, KoszulVerdict::DerivedConcentratedDegree0 { .. });
            Ok((
                json!({"property": "degree -1 homology of the Koszul complex after base change", "result": verdict}),
                ok,
            ))
        }
        Command::MvCheck { algebra, v1, v2, samples } => {
            let a = at(algebra, load::<AlgebraJson>(algebra)?.to_presentation())?;
            let v1 = at(v1, load::<SpecJson>(v1)?.to_spec(a.ring()))?;
            let v2 = at(v2, load::<SpecJson>(v2)?.to_spec(a.ring()))?;
            let mut rng = cfg.rng(0, 0);
            let report = lib(mayer_vietoris(&a, &v1, &v2, cfg.degree, *samples, &mut rng))?;
            let ok = report.exact;
            Ok((json!({"property": "exactness of 0 → A → A_V1 × A_V2 → A_V12 → 0", "result": report}), ok))
        }
        Command::Spectrum { series, rho, powers } => {
            let f = load_series(series, &BanachRing::integers())?;
            let rho = parse_rho(rho, f.nvars())?;
            let global = lib(global_sup(&f, &rho, cfg.prime_bound, cfg.eps_grid))?;
            let powers = lib(spectral_via_powers(&f, &rho, *powers))?;
            Ok((json!({"global_sup": global, "powers": powers}), true))
        }
        Command::Shilov { series, rho } => {
            let f = load_series(series, &BanachRing::integers())?;
            let rho = parse_rho(rho, f.nvars())?;
            let report = lib(shilov_check(&f, &rho, cfg.prime_bound, cfg.eps_grid))?;
            let ok = !matches!(report.verdict, ShilovVerdict::Violation { .. });
            Ok((json!({"property": "the sup over the spectrum is attained on the Archimedean fiber", "result": report}), ok))
        }
        Command::PiCheck { module, samples } => {
            let m = at(module, load::<ModuleJson>(module)?.to_module())?;
            let report = lib(pi_check(&m, *samples, &mut cfg.rng(0, 0)))?;
            let ok = report.confirmed;
            Ok((
                json!({"property": "equal operator norms from sum and max sources; π commutes with tensor", "result": report}),
                ok,
            ))
        }
        Command::Selftest => {
            let report = run_selftest(cfg);
            let ok = report.all_passed;
            Ok((to_value(&report), ok))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Norm { .. } => "norm",
        Command::Tensor { .. } => "tensor",
        Command::Localize { .. } => "localize",
        Command::Koszul { .. } => "koszul",
        Command::MvCheck { .. } => "mv-check",
        Command::Spectrum { .. } => "spectrum",
        Command::Shilov { .. } => "shilov",
        Command::PiCheck { .. } => "pi-check",
        Command::Selftest => "selftest",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let g = &cli.global;
    let cfg = RunConfig {
        seed: g.seed,
        degree: g.degree,
        prime_bound: g.prime_bound,
        eps_grid: g.eps_grid,
        output: g.json_out.clone(),
        verbosity: g.verbose,
    };
    let name = command_name(&cli.command);
    if cfg.verbosity > 0 {
        eprintln!("dagger {name}: seed {}, degree {}", cfg.seed, cfg.degree);
    }
    let (report, ok) = match run(&cli.command, &cfg) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let envelope = json!({
        "schema_version": SCHEMA_VERSION,
        "command": name,
        "seed": cfg.seed,
        "status": if ok { "ok" } else { "witness" },
        "report": report,
    });
    let text = serde_json::to_string_pretty(&envelope).expect("reports serialize");
    println!("{text}");
    if let Some(path) = &cfg.output {
        if let Err(e) = fs::write(path, format!("{text}\n")) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
