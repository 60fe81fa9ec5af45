//! Command-line front end. Flags override the JSON config, which overrides
//! the built-in defaults.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::ecurve::{load_or_build, ReductionType, TraceCache, DEFAULT_AP_DEGREE};
use crate::error::{Error, Result};
use crate::famstats::{
    class_main_term, class_sizes, ell_density, family_records, family_report, with_workers, FamilyReport, TestFunction,
};
use crate::fqpoly::Poly;
use crate::lfunction::{spectral, twist_lpoly};
use crate::verify::run_suites;

#[derive(Parser, Debug)]
#[command(
    name = "twistlab",
    version,
    about = "L-polynomials and family statistics for twists of E/F_q(t)"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default, Clone)]
pub struct GlobalArgs {
    /// JSON run configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Coefficients of A, ascending, e.g. "0,1" for t
    #[arg(long = "a", global = true)]
    pub a: Option<String>,
    #[arg(long = "b", global = true)]
    pub b: Option<String>,
    #[arg(long = "cache-dir", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true)]
    pub format: Option<OutputFormat>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Conductor and reduction types
    Conductor,
    /// Build or load the cached a_P table
    ApTable {
        #[arg(long = "max-deg")]
        max_deg: Option<usize>,
    },
    /// L-polynomial of a single twist
    Lpoly {
        #[arg(long)]
        twist: String,
    },
    /// Family trace averages
    Traces(FamilyArgs),
    /// One-level density against the orthogonal reference
    Density(FamilyArgs),
    /// Rank histogram and sign split
    Ranks(FamilyArgs),
    /// Class sizes against the main term
    Sizes(FamilyArgs),
    /// Order-l family against the unitary reference
    Ell {
        #[arg(long)]
        order: Option<u32>,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Identity battery
    Verify {
        /// Comma-separated subset of suites
        #[arg(long, value_delimiter = ',')]
        suites: Vec<String>,
    },
    /// Write all family reports into a directory
    Stats {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        ell: Option<u32>,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
}

#[derive(Args, Debug, Default, Clone)]
pub struct FamilyArgs {
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Residue class modulo the finite conductor, ascending coefficients
    #[arg(long)]
    pub class: Option<String>,
    #[arg(long)]
    pub nu: Option<f64>,
    /// Allow support beyond the proven range
    #[arg(long)]
    pub explore: bool,
}

fn merged_config(global: &GlobalArgs, family: Option<&FamilyArgs>, command: &str) -> Result<RunConfig> {
    let mut cfg = match &global.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.command = Some(command.to_string());
    if let Some(p) = global.p {
        cfg.p = p;
    }
    if let Some(a) = &global.a {
        cfg.a = a.clone();
    }
    if let Some(b) = &global.b {
        cfg.b = b.clone();
    }
    if let Some(d) = &global.cache_dir {
        cfg.cache_dir = Some(d.clone());
    }
    if let Some(w) = global.workers {
        cfg.workers = w;
    }
    if let Some(f) = global.format {
        cfg.format = f;
    }
    if let Some(fa) = family {
        if let Some(n) = fa.n {
            cfg.n = n;
        }
        if let Some(k) = fa.n_max {
            cfg.n_max = k;
        }
        if let Some(c) = &fa.class {
            cfg.class = Some(c.clone());
        }
        if let Some(nu) = fa.nu {
            cfg.nu = nu;
        }
    }
    Ok(cfg)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn test_function(cfg: &RunConfig, explore: bool, limit: f64) -> Result<TestFunction> {
    if explore {
        eprintln!("warning: support nu = {} is outside the proven range", cfg.nu);
        Ok(TestFunction::unchecked(cfg.nu))
    } else {
        TestFunction::new(cfg.nu, limit)
    }
}

#[derive(Serialize)]
struct ConductorReport<'a> {
    p: u32,
    a: String,
    b: String,
    finite_conductor: String,
    mult_part: String,
    f_inf: u32,
    deg_conductor: usize,
    bad_primes: &'a [crate::ecurve::BadPrime],
}

fn kind_name(k: ReductionType) -> &'static str {
    match k {
        ReductionType::Good => "good",
        ReductionType::MultSplit => "split multiplicative",
        ReductionType::MultNonsplit => "nonsplit multiplicative",
        ReductionType::Additive => "additive",
    }
}

fn traces_csv(report: &FamilyReport) -> String {
    let mut s = String::from("n,trace_average\n");
    for (n, t) in report.traces.iter().enumerate() {
        let _ = writeln!(s, "{n},{t}");
    }
    s
}

fn ranks_csv(report: &FamilyReport) -> String {
    let mut s = String::from("rank,count\n");
    for (r, c) in &report.ranks.histogram {
        let _ = writeln!(s, "{r},{c}");
    }
    s
}

fn sizes_csv(cache: &TraceCache, cfg: &RunConfig) -> Result<(String, String)> {
    let curve = cache.curve();
    let sizes = class_sizes(curve, cfg.n)?;
    let main = class_main_term(&curve.finite_conductor, cfg.n)?;
    let mut csv = String::from("class,enumerated,main_term,relative_deviation\n");
    let mut worst = 0.0f64;
    for (c, &s) in &sizes {
        let dev = (s as f64 - main).abs() / main;
        worst = worst.max(dev);
        let _ = writeln!(csv, "\"{c}\",{s},{main},{dev}");
    }
    let json = serde_json::json!({
        "schema": 1,
        "N": cfg.n,
        "classes": sizes.len(),
        "family_size": sizes.values().sum::<usize>(),
        "main_term": main,
        "max_relative_deviation": worst,
        "sizes": sizes.iter().map(|(c, s)| (c.to_string(), *s)).collect::<std::collections::BTreeMap<_, _>>(),
    });
    Ok((csv, to_json(&json)))
}

/// Run one parsed command and return what it prints on stdout.
pub fn execute(cli: &Cli) -> Result<String> {
    let g = &cli.global;
    let (name, fam) = match &cli.command {
        Command::Conductor => ("conductor", None),
        Command::ApTable { .. } => ("ap-table", None),
        Command::Lpoly { .. } => ("lpoly", None),
        Command::Traces(f) => ("traces", Some(f)),
        Command::Density(f) => ("density", Some(f)),
        Command::Ranks(f) => ("ranks", Some(f)),
        Command::Sizes(f) => ("sizes", Some(f)),
        Command::Ell { family, .. } => ("ell", Some(family)),
        Command::Verify { .. } => ("verify", None),
        Command::Stats { family, .. } => ("stats", Some(family)),
    };
    let mut cfg = merged_config(g, fam, name)?;
    if let Command::Ell { order: Some(l), .. } = &cli.command {
        cfg.ell = Some(*l);
    }
    if let Command::Stats { ell: Some(l), .. } = &cli.command {
        cfg.ell = Some(*l);
    }
    let curve = cfg.curve()?;
    let cache = TraceCache::new(curve.clone());
    let cache_dir = cfg.resolved_cache_dir();
    let explore = fam.is_some_and(|f| f.explore);
    let csv = cfg.format == OutputFormat::Csv;

    with_workers(cfg.workers, || -> Result<String> {
        match &cli.command {
            Command::Conductor => {
                if csv {
                    let mut s = String::from("prime,reduction,exponent\n");
                    for bp in &curve.bad_primes {
                        let _ = writeln!(s, "\"{}\",{},{}", bp.prime, kind_name(bp.kind), bp.exponent);
                    }
                    let _ = writeln!(s, "infinity,additive,{}", curve.f_inf);
                    return Ok(s);
                }
                Ok(to_json(&ConductorReport {
                    p: curve.p(),
                    a: curve.a.to_string(),
                    b: curve.b.to_string(),
                    finite_conductor: curve.finite_conductor.to_string(),
                    mult_part: curve.mult_part.to_string(),
                    f_inf: curve.f_inf,
                    deg_conductor: curve.deg_conductor,
                    bad_primes: &curve.bad_primes,
                }))
            }
            Command::ApTable { max_deg } => {
                let k = max_deg.unwrap_or(DEFAULT_AP_DEGREE);
                let table = load_or_build(&cache, &cache_dir, k)?;
                table.check_hasse(&curve)?;
                let path = crate::ecurve::cache_path(&cache_dir, &curve, k);
                Ok(to_json(&serde_json::json!({
                    "path": path.display().to_string(),
                    "max_degree": k,
                    "primes": table.entries.len(),
                    "hasse": "ok",
                })))
            }
            Command::Lpoly { twist } => {
                let d = Poly::parse(curve.p(), twist)?;
                let l = twist_lpoly(&cache, &d)?;
                let sd = spectral(&l)?;
                if csv {
                    return Ok(l.dump_line(&d, sd.rank) + "\n");
                }
                Ok(to_json(&serde_json::json!({
                    "twist": d.to_string(),
                    "lpoly": l,
                    "spectral": sd,
                    "dump": l.dump_line(&d, sd.rank),
                })))
            }
            Command::Traces(_) | Command::Density(_) | Command::Ranks(_) => {
                let class = cfg.class_poly()?;
                let records = family_records(&cache, cfg.n, class.as_ref())?;
                let phi = match &cli.command {
                    Command::Density(_) => Some(test_function(&cfg, explore, 1.0)?),
                    _ => None,
                };
                let report = family_report(&curve, &records, cfg.n, class.as_ref(), cfg.n_max, phi.as_ref());
                Ok(match (&cli.command, csv) {
                    (Command::Traces(_), true) => traces_csv(&report),
                    (Command::Ranks(_), true) => ranks_csv(&report),
                    (Command::Traces(_), false) => to_json(&serde_json::json!({
                        "schema": 1, "N": cfg.n, "class": report.class, "m": report.m,
                        "family_size": report.family_size, "traces": report.traces,
                    })),
                    (Command::Ranks(_), false) => to_json(
                        &serde_json::json!({"schema": 1, "N": cfg.n, "class": report.class, "ranks": report.ranks}),
                    ),
                    (_, true) => {
                        let d = report.density.as_ref().expect("density requested");
                        format!(
                            "nu,m,empirical,reference,deviation\n{},{},{},{},{}\n",
                            d.nu, d.m, d.empirical, d.reference, d.deviation
                        )
                    }
                    (_, false) => to_json(&serde_json::json!({
                        "schema": 1, "N": cfg.n, "class": report.class, "family_size": report.family_size,
                        "density": report.density,
                    })),
                })
            }
            Command::Sizes(_) => {
                let (csv_text, json) = sizes_csv(&cache, &cfg)?;
                Ok(if csv { csv_text } else { json })
            }
            Command::Ell { .. } => {
                let ell = cfg.ell.ok_or_else(|| Error::Config("--order is required".into()))?;
                let phi = test_function(&cfg, explore, 0.5)?;
                let m = curve.twist_degree(cfg.n);
                let table = load_or_build(&cache, &cache_dir, m.max(1))?;
                let report = ell_density(&curve, &table, ell, cfg.n, &phi, cfg.n_max)?;
                if csv {
                    let mut s = String::from("n,re,im\n");
                    for (k, (re, im)) in report.traces.iter().enumerate() {
                        let _ = writeln!(s, "{},{re},{im}", k + 1);
                    }
                    return Ok(s);
                }
                Ok(to_json(&serde_json::json!({"schema": 1, "report": report})))
            }
            Command::Verify { suites } => {
                let results = run_suites(&cache, &cache_dir, suites);
                let mut out = String::new();
                for r in &results {
                    out.push_str(&serde_json::to_string(r).expect("result serializes"));
                    out.push('\n');
                }
                let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
                if failed.is_empty() {
                    Ok(out)
                } else {
                    print!("{out}");
                    if failed.iter().any(|r| r.code == Some("CacheCorrupt")) {
                        Err(Error::CacheCorrupt(format!("{} suite(s) failed", failed.len())))
                    } else {
                        Err(Error::SuiteFailure(failed.len()))
                    }
                }
            }
            Command::Stats { out, .. } => write_stats(&cache, &cfg, &cache_dir, out, explore),
        }
    })
}

fn write_stats(cache: &TraceCache, cfg: &RunConfig, cache_dir: &Path, out: &Path, explore: bool) -> Result<String> {
    let curve = cache.curve();
    std::fs::create_dir_all(out)?;
    let mut written = Vec::new();
    let mut put = |name: &str, text: String| -> Result<()> {
        let path = out.join(name);
        std::fs::write(&path, text)?;
        written.push(path.display().to_string());
        Ok(())
    };
    if let Some(ell) = cfg.ell {
        let phi = test_function(cfg, explore, 0.5)?;
        let table = load_or_build(cache, cache_dir, curve.twist_degree(cfg.n).max(1))?;
        let report = ell_density(curve, &table, ell, cfg.n, &phi, cfg.n_max)?;
        let mut csv = String::from("n,re,im\n");
        for (k, (re, im)) in report.traces.iter().enumerate() {
            let _ = writeln!(csv, "{},{re},{im}", k + 1);
        }
        put("ell_traces.csv", csv)?;
        put(
            "ell_report.json",
            to_json(&serde_json::json!({"schema": 1, "report": report})),
        )?;
    } else {
        let phi = test_function(cfg, explore, 1.0)?;
        let class = cfg.class_poly()?;
        let records = family_records(cache, cfg.n, class.as_ref())?;
        let report = family_report(curve, &records, cfg.n, class.as_ref(), cfg.n_max, Some(&phi));
        put("traces.csv", traces_csv(&report))?;
        put("ranks.csv", ranks_csv(&report))?;
        put("report.json", to_json(&report))?;
        if class.is_none() {
            let (csv, json) = sizes_csv(cache, cfg)?;
            put("sizes.csv", csv)?;
            put("sizes.json", json)?;
        }
    }
    Ok(to_json(&serde_json::json!({ "written": written })))
}

/// Parse `std::env::args`, run, print, and return the exit status.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.code(), e.to_string().replace('\n', " "));
            e.exit_code()
        }
    }
}
