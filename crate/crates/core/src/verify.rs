//! Identity battery run by `verify`. Every suite runs even when another
//! fails; each reports its own outcome.

use std::path::Path;

use serde::Serialize;

use crate::characters::{char_l_poly, duality_residual, gauss_sum, QuadChar};
use crate::ecurve::{load_or_build, TraceCache, DEFAULT_AP_DEGREE};
use crate::error::{Error, Result};
use crate::famstats::{class_sizes, family, family_records, rank_report};
use crate::fqpoly::Poly;
use crate::lfunction::{euler_l, twist_lpoly};

pub const SUITES: &[&str] = &[
    "degree",
    "rh",
    "functional",
    "explicit",
    "oracle",
    "dirichlet",
    "duality",
    "hasse",
    "sizes",
    "signs",
];

/// Desk-scale family degree used by the battery.
pub const VERIFY_DEGREE: usize = 3;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub passed: bool,
    pub detail: String,
    pub code: Option<&'static str>,
}

fn check(ok: bool, msg: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvariantViolated(msg.into()))
    }
}

fn squarefree_monics(p: u32, max_deg: usize) -> impl Iterator<Item = Poly> {
    (1..=max_deg).flat_map(move |d| {
        (0..(p as u64).pow(d as u32))
            .map(move |i| Poly::monic_from_index(p, d, i))
            .filter(|f| f.is_squarefree().unwrap_or(false))
    })
}

fn run_one(name: &str, cache: &TraceCache, cache_dir: &Path) -> Result<String> {
    let curve = cache.curve();
    let q = curve.p();
    match name {
        "degree" | "rh" | "functional" | "explicit" => {
            let mut count = 0;
            let mut worst = 0.0f64;
            for n in 1..=VERIFY_DEGREE {
                for r in family_records(cache, n, None)? {
                    count += 1;
                    let m = curve.twist_degree(n);
                    match name {
                        "degree" => check(r.lpoly.degree() == m, format!("degree of twist by {}", r.d))?,
                        "rh" => worst = worst.max(r.spectral.rh_error),
                        "functional" => {
                            check(
                                r.lpoly.satisfies_functional_equation(),
                                format!("functional equation at {}", r.d),
                            )?;
                            check(
                                (r.spectral.rank % 2 == 0) == (r.spectral.eps == 1),
                                format!("parity at {}", r.d),
                            )?;
                        }
                        _ => {
                            let p = r.lpoly.inverse_root_power_sums(3);
                            for (i, pn) in p.iter().enumerate() {
                                let k = i as i32 + 1;
                                let from_sums = *pn as f64 / (q as f64).powi(k);
                                let from_roots: f64 = r.spectral.angles.iter().map(|t| (k as f64 * t).cos()).sum();
                                worst = worst.max((from_sums - from_roots).abs());
                            }
                        }
                    }
                }
            }
            match name {
                "rh" => check(worst <= 1e-8, format!("RH error {worst:e}"))?,
                "explicit" => check(worst <= 1e-6, format!("explicit formula error {worst:e}"))?,
                _ => {}
            }
            Ok(format!("{count} twists, worst {worst:.2e}"))
        }
        "oracle" => {
            let table = load_or_build(cache, cache_dir, DEFAULT_AP_DEGREE)?;
            let mut count = 0;
            for n in 1..=2 {
                for d in family(curve, n, None)? {
                    check(
                        euler_l(curve, &table, &d)? == twist_lpoly(cache, &d)?,
                        format!("routes differ at {d}"),
                    )?;
                    count += 1;
                }
            }
            Ok(format!("{count} twists agree"))
        }
        "hasse" => {
            let table = load_or_build(cache, cache_dir, DEFAULT_AP_DEGREE)?;
            table.check_hasse(curve)?;
            Ok(format!("{} primes", table.entries.len()))
        }
        "dirichlet" | "duality" => {
            let mut count = 0;
            let mut worst = 0.0f64;
            for f in squarefree_monics(q, 3) {
                let chi = QuadChar::new(f.clone())?;
                if name == "dirichlet" {
                    let l = char_l_poly(&chi)?;
                    let expected = f.deg() - 1 - l.lambda;
                    check(l.degree == expected, format!("degree at {f}"))?;
                    worst = worst.max(l.rh_error(q));
                } else {
                    let g = gauss_sum(&chi)?;
                    worst = worst.max(g.omega_mismatch());
                    let scale = (q as f64).powi(f.deg() as i32);
                    for j in 0..f.deg() + 2 {
                        worst = worst.max(duality_residual(&chi, &g, j) / scale);
                    }
                }
                count += 1;
            }
            check(worst <= 1e-8, format!("worst residual {worst:e}"))?;
            Ok(format!("{count} characters, worst {worst:.2e}"))
        }
        "sizes" => {
            let sizes = class_sizes(curve, VERIFY_DEGREE)?;
            let total: usize = sizes.values().sum();
            let all = family(curve, VERIFY_DEGREE, None)?.len();
            check(total == all, format!("classes sum to {total}, family has {all}"))?;
            Ok(format!("{} classes, {all} twists", sizes.len()))
        }
        "signs" => {
            let mut detail = Vec::new();
            for n in 1..=VERIFY_DEGREE {
                let recs = family_records(cache, n, None)?;
                let rr = rank_report(curve, &recs);
                check(rr.plus + rr.minus == recs.len(), "sign split does not partition")?;
                for (deg, ks) in &rr.sign_constants {
                    check(
                        ks.len() == 1,
                        format!("sign constant not unique in degree {deg}: {ks:?}"),
                    )?;
                    detail.push(format!("{deg}:{}", ks[0]));
                }
            }
            Ok(format!("constants {}", detail.join(" ")))
        }
        other => Err(Error::Config(format!("unknown suite {other:?}"))),
    }
}

/// Run the named suites (all when `names` is empty), in the order given.
pub fn run_suites(cache: &TraceCache, cache_dir: &Path, names: &[String]) -> Vec<SuiteResult> {
    let selected: Vec<String> = if names.is_empty() {
        SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        names.to_vec()
    };
    selected
        .into_iter()
        .map(|suite| match run_one(&suite, cache, cache_dir) {
            Ok(detail) => SuiteResult {
                suite,
                passed: true,
                detail,
                code: None,
            },
            Err(e) => SuiteResult {
                suite,
                passed: false,
                detail: e.to_string(),
                code: Some(e.code()),
            },
        })
        .collect()
}
