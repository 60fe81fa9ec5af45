//! Statistics over twist families: trace averages, one-level density, rank
//! and sign distributions, family sizes and the prime-sum diagnostics.
//!
//! All per-twist work is pure and runs in parallel; results are collected in
//! lexicographic order of the conductor and reduced sequentially, so every
//! aggregate is bit-reproducible regardless of the worker count.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::characters::{jacobi, EllChar};
use crate::ecurve::{ApTable, CurveData, TraceCache};
use crate::error::{Error, Result};
use crate::fqpoly::{iter_family, Poly, PrimeIndex};
use crate::lfunction::{ell_l, spectral, twist_lpoly, LPolynomial, SignCalibration, SpectralData};

/// Fejer test function: `phi(x) = (sin(pi nu x) / (pi nu x))^2` with
/// `phi_hat(y) = (1/nu)(1 - |y|/nu)` on `[-nu, nu]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TestFunction {
    pub nu: f64,
}

impl TestFunction {
    /// Support in `(0, limit]`; wider support is refused.
    pub fn new(nu: f64, limit: f64) -> Result<Self> {
        if !(nu > 0.0 && nu <= limit) {
            return Err(Error::SupportTooWide { nu, limit });
        }
        Ok(TestFunction { nu })
    }

    /// No support check, for exploration beyond the proven range.
    pub fn unchecked(nu: f64) -> Self {
        TestFunction { nu }
    }

    pub fn phi_hat(&self, y: f64) -> f64 {
        let a = y.abs();
        if a >= self.nu {
            0.0
        } else {
            (1.0 - a / self.nu) / self.nu
        }
    }

    pub fn phi(&self, x: f64) -> f64 {
        let z = PI * self.nu * x;
        if z.abs() < 1e-8 {
            1.0
        } else {
            (z.sin() / z).powi(2)
        }
    }

    /// Fourier modes `0 < n < nu M` that carry weight.
    pub fn modes(&self, m: usize) -> impl Iterator<Item = usize> + '_ {
        let m_f = m as f64;
        (1..).take_while(move |&n| (n as f64) < self.nu * m_f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Orthogonal,
    Unitary,
}

/// Haar average of `Z_phi` over `O(M)` or `U(M)`:
/// `phi_hat(0) + (1/M) sum_{n != 0} phi_hat(n/M) eta_n` with `eta_n = 1` for
/// even `n` and 0 for odd `n` (orthogonal), or just `phi_hat(0)` (unitary).
pub fn rmt_reference(m: usize, phi: &TestFunction, symmetry: Symmetry) -> f64 {
    let base = phi.phi_hat(0.0);
    match symmetry {
        Symmetry::Unitary => base,
        Symmetry::Orthogonal => {
            let sum: f64 = phi
                .modes(m)
                .filter(|n| n % 2 == 0)
                .map(|n| 2.0 * phi.phi_hat(n as f64 / m as f64))
                .sum();
            base + sum / m as f64
        }
    }
}

/// One twist of a quadratic family.
#[derive(Clone, Debug, Serialize)]
pub struct TwistRecord {
    #[serde(serialize_with = "crate::ecurve::ser_poly")]
    pub d: Poly,
    pub lpoly: LPolynomial,
    pub spectral: SpectralData,
}

/// Run `f` on a pool with `workers` threads (`0` = all cores).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}

/// The family `H_{N,C}` (or `H_N^*`) modulo the finite conductor.
pub fn family(curve: &CurveData, n: usize, class: Option<&Poly>) -> Result<Vec<Poly>> {
    Ok(iter_family(n, &curve.finite_conductor, class)?.collect())
}

/// L-polynomial and spectral data for every twist in the family.
pub fn family_records(cache: &TraceCache, n: usize, class: Option<&Poly>) -> Result<Vec<TwistRecord>> {
    let ds = family(cache.curve(), n, class)?;
    twist_records(cache, &ds)
}

pub fn twist_records(cache: &TraceCache, ds: &[Poly]) -> Result<Vec<TwistRecord>> {
    // warm the shared trace tables outside the parallel section
    if let Some(d) = ds.first() {
        let m = crate::lfunction::twist_degree(cache.curve(), d);
        for k in 1..=(m.div_ceil(2) + 1).min(m) {
            cache.traces(k)?;
        }
    }
    ds.par_iter()
        .map(|d| {
            let lpoly = twist_lpoly(cache, d)?;
            let spectral = spectral(&lpoly)?;
            Ok(TwistRecord {
                d: d.clone(),
                lpoly,
                spectral,
            })
        })
        .collect()
}

/// `<tr Theta^n>` over the records, from the exact inverse-root power sums:
/// `tr Theta_D^n = p_n(D) / q^n`. `n = 0` gives `M`.
pub fn trace_average(records: &[TwistRecord], n: usize) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    if n == 0 {
        return records[0].lpoly.degree() as f64;
    }
    let q = records[0].lpoly.q as f64;
    let total: i128 = records
        .iter()
        .map(|r| *r.lpoly.inverse_root_power_sums(n).last().expect("n >= 1"))
        .sum();
    total as f64 / (records.len() as f64 * q.powi(n as i32))
}

/// Density of a family and its random-matrix reference.
#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub nu: f64,
    pub m: usize,
    pub empirical: f64,
    pub empirical_imag: f64,
    pub reference: f64,
    pub deviation: f64,
}

/// `<Z_phi> = phi_hat(0) + (1/M) sum_{0 < |n| < nu M} phi_hat(n/M) <tr Theta^n>`,
/// negative `n` by conjugation.
pub fn one_level_density(records: &[TwistRecord], phi: &TestFunction) -> DensityReport {
    let m = records.first().map_or(0, |r| r.lpoly.degree());
    let mut z = Complex64::new(phi.phi_hat(0.0), 0.0);
    for n in phi.modes(m) {
        let tr = Complex64::new(trace_average(records, n), 0.0);
        z += (tr + tr.conj()) * (phi.phi_hat(n as f64 / m as f64) / m as f64);
    }
    let reference = rmt_reference(m, phi, Symmetry::Orthogonal);
    DensityReport {
        nu: phi.nu,
        m,
        empirical: z.re,
        empirical_imag: z.im,
        reference,
        deviation: (z.re - reference).abs(),
    }
}

/// Trigamma `psi_1(z) = sum_{k >= 0} 1/(z + k)^2` for `z > 0`.
fn trigamma(mut z: f64) -> f64 {
    let mut acc = 0.0;
    while z < 20.0 {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    let z2 = z * z;
    acc + 1.0 / z + 1.0 / (2.0 * z2) + 1.0 / (6.0 * z2 * z) - 1.0 / (30.0 * z2 * z2 * z)
        + 1.0 / (42.0 * z2 * z2 * z2 * z)
}

/// Default truncation for the direct route.
pub const DIRECT_TRUNCATION: i64 = 2000;

/// `Z_phi(Theta) = sum_j sum_k phi(M (theta_j / 2 pi - k))` summed directly
/// over `|k| <= k_max`; the rest of the lattice sum is added in closed form.
///
/// Writing `phi(x) = (1 - cos(2 pi nu x)) / (2 (pi nu x)^2)`, the
/// non-oscillating half of the tail is a pair of trigamma values; the
/// oscillating half is also exact when `nu M` is an integer and is
/// `O(k_max^{-2})` otherwise.
pub fn z_phi_direct(angles: &[f64], m: usize, phi: &TestFunction, k_max: i64) -> f64 {
    let mf = m as f64;
    let a = phi.nu * mf;
    let integral_a = (a - a.round()).abs() < 1e-12;
    let c = 1.0 / (2.0 * (PI * a).powi(2));
    angles
        .iter()
        .map(|&theta| {
            let x = theta / (2.0 * PI);
            let mut s = 0.0;
            for k in -k_max..=k_max {
                s += phi.phi(mf * (x - k as f64));
            }
            // sum_{|k| > K} 1/(x - k)^2
            let t2 = trigamma(k_max as f64 + 1.0 - x) + trigamma(k_max as f64 + 1.0 + x);
            let osc = if integral_a { (2.0 * PI * a * x).cos() * t2 } else { 0.0 };
            s + c * (t2 - osc)
        })
        .sum()
}

/// Ranks, signs and the sign-formula check.
#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub family_size: usize,
    pub histogram: BTreeMap<usize, usize>,
    pub average_rank: f64,
    pub fraction_rank0: f64,
    pub fraction_rank1: f64,
    pub plus: usize,
    pub minus: usize,
    /// Twists whose rank parity contradicts the sign.
    pub parity_violations: usize,
    /// Distinct values of `eps_D chi_{M_E}(D)` per degree.
    pub sign_constants: BTreeMap<usize, Vec<i64>>,
}

pub fn rank_report(curve: &CurveData, records: &[TwistRecord]) -> RankReport {
    let mut histogram = BTreeMap::new();
    let (mut plus, mut minus, mut violations) = (0, 0, 0);
    let mut sign_constants: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    let mut rank_sum = 0usize;
    for r in records {
        let sd = &r.spectral;
        *histogram.entry(sd.rank).or_insert(0) += 1;
        rank_sum += sd.rank;
        if sd.eps == 1 {
            plus += 1;
        } else {
            minus += 1;
        }
        if (sd.rank % 2 == 0) != (sd.eps == 1) {
            violations += 1;
        }
        let k = sd.eps * jacobi(&r.d, &curve.mult_part) as i64;
        let v = sign_constants.entry(r.d.deg()).or_default();
        if !v.contains(&k) {
            v.push(k);
            v.sort();
        }
    }
    let n = records.len().max(1) as f64;
    RankReport {
        family_size: records.len(),
        average_rank: rank_sum as f64 / n,
        fraction_rank0: *histogram.get(&0).unwrap_or(&0) as f64 / n,
        fraction_rank1: *histogram.get(&1).unwrap_or(&0) as f64 / n,
        histogram,
        plus,
        minus,
        parity_violations: violations,
        sign_constants,
    }
}

/// Calibrate the sign formula on the first twist of each degree.
pub fn calibrate_signs(curve: &CurveData, records: &[TwistRecord]) -> SignCalibration {
    let mut cal = SignCalibration::default();
    for r in records {
        cal.calibrate(curve, &r.d, r.spectral.eps);
    }
    cal
}

/// `|(F_p[t]/(F))^*|`.
pub fn unit_count(f: &Poly) -> Result<u128> {
    let q = f.p() as u128;
    Ok(f.factor()?
        .iter()
        .map(|(pr, e)| {
            let qd = q.pow(pr.deg() as u32);
            (qd - 1) * qd.pow(e - 1)
        })
        .product())
}

/// Expected size of one invertible class of `H_N` modulo `F`:
/// `q^N (1 - 1/q) prod_{Q | F} (1 + q^{-deg Q})^{-1} / |(F_q[t]/(F))^*|`.
pub fn class_main_term(f: &Poly, n: usize) -> Result<f64> {
    let q = f.p() as f64;
    let euler: f64 = f
        .factor()?
        .iter()
        .map(|(pr, _)| 1.0 / (1.0 + q.powi(-(pr.deg() as i32))))
        .product();
    Ok(q.powi(n as i32) * (1.0 - 1.0 / q) * euler / unit_count(f)? as f64)
}

#[derive(Clone, Debug, Serialize)]
pub struct SizeReport {
    #[serde(serialize_with = "crate::ecurve::ser_poly")]
    pub class: Poly,
    pub enumerated: usize,
    pub main_term: f64,
    pub relative_deviation: f64,
}

pub fn size_check(curve: &CurveData, n: usize, class: &Poly) -> Result<SizeReport> {
    let enumerated = iter_family(n, &curve.finite_conductor, Some(class))?.count();
    let main_term = class_main_term(&curve.finite_conductor, n)?;
    Ok(SizeReport {
        class: class.rem(&curve.finite_conductor)?,
        enumerated,
        main_term,
        relative_deviation: (enumerated as f64 - main_term).abs() / main_term,
    })
}

/// Invertible residues modulo `f`, as polynomials of degree `< deg f`.
pub fn invertible_classes(f: &Poly) -> Vec<Poly> {
    let p = f.p();
    let n = f.deg();
    (1..(p as u64).pow(n as u32))
        .map(|i| Poly::from_index(p, n, i))
        .filter(|c| c.is_coprime(f))
        .collect()
}

/// Sizes of every invertible class at degree `n`, in one pass.
pub fn class_sizes(curve: &CurveData, n: usize) -> Result<BTreeMap<Poly, usize>> {
    let f = &curve.finite_conductor;
    let mut sizes: BTreeMap<Poly, usize> = invertible_classes(f).into_iter().map(|c| (c, 0)).collect();
    for d in iter_family(n, f, None)? {
        *sizes.get_mut(&d.rem(f)?).expect("invertible class") += 1;
    }
    Ok(sizes)
}

/// `| sum_{D in H_{N,C}} 1_{(D, P) = 1} - |H_{N,C}| |`, the number of class
/// members divisible by `P`.
pub fn char_square_check(curve: &CurveData, n: usize, class: &Poly, prime: &Poly) -> Result<usize> {
    Ok(iter_family(n, &curve.finite_conductor, Some(class))?
        .filter(|d| !d.is_coprime(prime))
        .count())
}

/// `S(N, n) / q^{n + N}` with
/// `S(N, n) = sum_{D in H_N^*} sum_{deg P = n} (alpha_P + conj alpha_P) chi_D(P)`,
/// the inner sum taken over the points of exact degree `n` in the fiber sums.
pub fn hypothesis_m_diag(cache: &TraceCache, big_n: usize, n: usize) -> Result<f64> {
    let curve = cache.curve();
    let ds = family(curve, big_n, None)?;
    let field = cache.field(n)?;
    let traces = cache.traces(n)?;
    let p = curve.p();
    let exact: Vec<crate::ffield::FieldElem> = field.elements().filter(|&x| field.orbit_len(x) == n).collect();
    let per_twist: Vec<i64> = ds
        .par_iter()
        .map(|d| {
            let mut acc = 0i64;
            for &x in &exact {
                let t = traces[x.0 as usize] as i64;
                if t != 0 {
                    acc += field.quad_char(field.eval_poly(d, x)) as i64 * t;
                }
            }
            let flip = (n * d.deg() * ((p as usize - 1) / 2)) % 2 == 1;
            // each prime has n roots; a_P = -T_n(root)
            let s = if flip { acc } else { -acc };
            s / n as i64
        })
        .collect();
    let total: i64 = per_twist.iter().sum();
    Ok(total as f64 / (p as f64).powi((n + big_n) as i32))
}

/// All primitive order-`ell` characters whose conductor has degree `n` and
/// is coprime to the finite conductor, one per exponent vector.
pub fn ell_family(curve: &CurveData, ell: u32, n: usize) -> Result<Vec<EllChar>> {
    let p = curve.p();
    if !(p - 1).is_multiple_of(ell) || ell < 2 {
        return Err(Error::OrderNotDividing {
            ell,
            group_order: p as u64 - 1,
        });
    }
    let primes = PrimeIndex::new(p);
    let mut out = Vec::new();
    for f in iter_family(n, &curve.finite_conductor, None)? {
        let factors: Vec<Poly> = f.factor()?.into_iter().map(|(q, _)| q).collect();
        debug_assert!(factors.iter().all(|q| primes.degree(q.deg()).contains(q)));
        let k = factors.len() as u32;
        let combos = (ell - 1).pow(k);
        for mut code in 0..combos {
            let parts = factors
                .iter()
                .map(|q| {
                    let e = code % (ell - 1) + 1;
                    code /= ell - 1;
                    (q.clone(), e)
                })
                .collect();
            out.push(EllChar::new(p, ell, parts)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct EllReport {
    pub ell: u32,
    pub n: usize,
    pub m: usize,
    pub family_size: usize,
    /// `<tr Theta^k>` for `k = 1..`, real and imaginary parts.
    pub traces: Vec<(f64, f64)>,
    pub density: DensityReport,
    pub rh_error: f64,
}

/// Unitary-family statistics of the order-`ell` twists.
pub fn ell_density(
    curve: &CurveData,
    table: &ApTable,
    ell: u32,
    n: usize,
    phi: &TestFunction,
    n_traces: usize,
) -> Result<EllReport> {
    if phi.nu > 0.5 {
        return Err(Error::SupportTooWide { nu: phi.nu, limit: 0.5 });
    }
    let chars = ell_family(curve, ell, n)?;
    let m = curve.twist_degree(n);
    let q = curve.p() as f64;
    let k_max = n_traces.max(phi.modes(m).last().unwrap_or(0));
    let per_char: Vec<(Vec<Complex64>, f64)> = chars
        .par_iter()
        .map(|chi| {
            let l = ell_l(curve, table, chi)?;
            let (_, rh) = l.spectrum()?;
            let p = l.inverse_root_power_sums(k_max);
            let tr: Vec<Complex64> = p.iter().enumerate().map(|(i, s)| s / q.powi(i as i32 + 1)).collect();
            Ok((tr, rh))
        })
        .collect::<Result<Vec<_>>>()?;
    let size = per_char.len().max(1) as f64;
    let mut avg = vec![Complex64::new(0.0, 0.0); k_max];
    let mut rh_error = 0.0f64;
    for (tr, rh) in &per_char {
        for (a, t) in avg.iter_mut().zip(tr) {
            *a += t;
        }
        rh_error = rh_error.max(*rh);
    }
    for a in avg.iter_mut() {
        *a /= size;
    }
    let mut z = Complex64::new(phi.phi_hat(0.0), 0.0);
    for k in phi.modes(m) {
        let t = avg[k - 1];
        z += (t + t.conj()) * (phi.phi_hat(k as f64 / m as f64) / m as f64);
    }
    let reference = rmt_reference(m, phi, Symmetry::Unitary);
    Ok(EllReport {
        ell,
        n,
        m,
        family_size: per_char.len(),
        traces: avg.iter().take(n_traces).map(|t| (t.re, t.im)).collect(),
        density: DensityReport {
            nu: phi.nu,
            m,
            empirical: z.re,
            empirical_imag: z.im,
            reference,
            deviation: (z.re - reference).abs(),
        },
        rh_error,
    })
}

/// Aggregate report for one quadratic family.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub schema: u32,
    pub n: usize,
    pub class: Option<String>,
    pub m: usize,
    pub family_size: usize,
    pub traces: Vec<f64>,
    pub density: Option<DensityReport>,
    pub ranks: RankReport,
}

pub fn family_report(
    curve: &CurveData,
    records: &[TwistRecord],
    n: usize,
    class: Option<&Poly>,
    n_max: usize,
    phi: Option<&TestFunction>,
) -> FamilyReport {
    FamilyReport {
        schema: 1,
        n,
        class: class.map(|c| c.to_string()),
        m: curve.twist_degree(n),
        family_size: records.len(),
        traces: (0..=n_max).map(|k| trace_average(records, k)).collect(),
        density: phi.map(|f| one_level_density(records, f)),
        ranks: rank_report(curve, records),
    }
}
