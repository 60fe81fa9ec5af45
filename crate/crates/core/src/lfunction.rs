//! Twisted L-polynomials `L(E (x) chi, u)`.
//!
//! Two independent routes produce the same integer polynomial for a
//! quadratic twist `chi_D`:
//!
//! * [`euler_l`] multiplies the local factors of the a_P table as truncated
//!   power series;
//! * [`newton_assemble`] turns the fiber power sums of [`fiber_power_sums`]
//!   into coefficients through Newton's identities and completes the upper
//!   half with the functional equation.
//!
//! Conventions: `L(u) = prod_j (1 - gamma_j u)` with `gamma_j = q e^{i theta_j}`,
//! and `S_n = -sum_j gamma_j^n` is the prime-side power sum, so that Newton's
//! identities read `k c_k = sum_{i=1}^k S_i c_{k-i}`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::characters::{jacobi, Character, EllChar};
use crate::ecurve::{ApTable, CurveData, ReductionType, TraceCache};
use crate::error::{Error, Result};
use crate::ffield::LOG_ZERO;
use crate::fqpoly::Poly;
use crate::roots::{aberth, int_roots, IntPoly};

/// Exact L-polynomial of a quadratic twist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPolynomial {
    pub q: u32,
    /// `c_0 .. c_M`
    pub coeffs: Vec<i64>,
}

impl LPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_M / q^M`, which the functional equation forces to be `+-1`.
    pub fn sign(&self) -> i64 {
        let m = self.degree();
        let qm = (self.q as i128).pow(m as u32);
        (self.coeffs[m] as i128 / qm) as i64
    }

    /// `c_{M-j} = eps q^{M-2j} c_j` for all `j`, checked exactly.
    pub fn satisfies_functional_equation(&self) -> bool {
        let m = self.degree();
        let eps = self.sign() as i128;
        if eps.abs() != 1 {
            return false;
        }
        let q = self.q as i128;
        (0..=m / 2).all(|j| self.coeffs[m - j] as i128 == eps * q.pow((m - 2 * j) as u32) * self.coeffs[j] as i128)
    }

    /// Power sums `p_n = sum_j gamma_j^n` of the inverse roots for
    /// `n = 1..=n_max`, exactly, by Newton's identities run backwards.
    pub fn inverse_root_power_sums(&self, n_max: usize) -> Vec<i128> {
        let m = self.degree();
        let c = |k: usize| if k <= m { self.coeffs[k] as i128 } else { 0 };
        // p_n = -n c_n - sum_{i=1}^{n-1} p_i c_{n-i}
        let mut p: Vec<i128> = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let mut s = -(n as i128) * c(n);
            for i in 1..n {
                s -= p[i - 1] * c(n - i);
            }
            p.push(s);
        }
        p
    }

    /// Text dump line `<D> ; <c_0,...,c_M> ; <rank> ; <eps>`.
    pub fn dump_line(&self, d: &Poly, rank: usize) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{d} ; {} ; {rank} ; {}", cs.join(","), self.sign())
    }
}

/// Spectral data of a twisted L-polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralData {
    /// `theta_1 <= ... <= theta_M` in `[0, 2 pi)`.
    pub angles: Vec<f64>,
    /// Multiplicity of the zero at `u = 1/q`.
    pub rank: usize,
    /// Multiplicity of the zero at `u = -1/q` (angle `pi`).
    pub pi_multiplicity: usize,
    pub eps: i64,
    pub det_re: f64,
    pub det_im: f64,
    /// `max | |root| q - 1 |`.
    pub rh_error: f64,
}

impl SpectralData {
    pub fn det(&self) -> Complex64 {
        Complex64::new(self.det_re, self.det_im)
    }
}

fn divide_linear(c: &[i128], r: i128) -> Option<Vec<i128>> {
    // c(u) = (1 - r u) b(u)
    let m = c.len() - 1;
    let mut b = Vec::with_capacity(m);
    let mut prev = 0i128;
    for &cj in c.iter().take(m) {
        let bj = cj + r * prev;
        b.push(bj);
        prev = bj;
    }
    (c[m] + r * prev == 0).then_some(b)
}

/// Rank by exact division by `(1 - q u)`, the angle-`pi` factor by exact
/// division by `(1 + q u)`, and the rest numerically on the squarefree parts.
pub fn spectral(l: &LPolynomial) -> Result<SpectralData> {
    let q = l.q as i128;
    let mut c: Vec<i128> = l.coeffs.iter().map(|&x| x as i128).collect();
    let mut rank = 0;
    while c.len() > 1 {
        match divide_linear(&c, q) {
            Some(b) => {
                c = b;
                rank += 1;
            }
            None => break,
        }
    }
    let mut pi_mult = 0;
    while c.len() > 1 {
        match divide_linear(&c, -q) {
            Some(b) => {
                c = b;
                pi_mult += 1;
            }
            None => break,
        }
    }
    let mut angles = vec![0.0; rank];
    angles.extend(std::iter::repeat_n(PI, pi_mult));
    let mut rh_error = 0.0f64;
    if c.len() > 1 {
        for (v, mult) in int_roots(&IntPoly::from_i128(&c), l.q as f64)? {
            rh_error = rh_error.max((v.norm() - 1.0).abs());
            // e^{i theta} = 1 / (q u0) = 1 / v
            let theta = (-v.arg()).rem_euclid(TAU);
            angles.extend(std::iter::repeat_n(theta, mult as usize));
        }
    }
    angles.sort_by(f64::total_cmp);
    let det: Complex64 = angles.iter().map(|&t| Complex64::from_polar(1.0, t)).product();
    Ok(SpectralData {
        angles,
        rank,
        pi_multiplicity: pi_mult,
        eps: l.sign(),
        det_re: det.re,
        det_im: det.im,
        rh_error,
    })
}

/// Degree of the twisted L-function for the conductor `d` (`d = 1` gives the
/// untwisted curve).
pub fn twist_degree(curve: &CurveData, d: &Poly) -> usize {
    match d.deg() {
        0 => curve.base_degree(),
        n => curve.twist_degree(n),
    }
}

fn check_coprime(curve: &CurveData, d: &Poly) -> Result<()> {
    if !d.is_coprime(&curve.finite_conductor) {
        return Err(Error::NonCoprimeConductor);
    }
    Ok(())
}

/// Divide a truncated power series (constant term 1) by a polynomial with
/// constant term 1, in place.
fn series_divide(series: &mut [i128], f: &[(usize, i128)]) {
    for j in 0..series.len() {
        let mut s = series[j];
        for &(i, fi) in f {
            if i <= j {
                s -= fi * series[j - i];
            }
        }
        series[j] = s;
    }
}

/// Fill `c_{k+1} .. c_M` from `c_0 .. c_k` by the functional equation,
/// determining the sign from the overlap.
fn complete_by_functional_equation(known: &[i128], m: usize, q: i128) -> Result<Vec<i128>> {
    let k = known.len() - 1;
    if k >= m {
        return Ok(known[..=m].to_vec());
    }
    let pairs: Vec<usize> = (m.saturating_sub(k)..=m / 2).collect();
    let fits = |eps: i128| {
        pairs
            .iter()
            .all(|&j| known[m - j] == eps * q.pow((m - 2 * j) as u32) * known[j])
    };
    let (plus, minus) = (fits(1), fits(-1));
    let eps = match (plus, minus) {
        (true, true) => return Err(Error::AmbiguousSign(k)),
        (false, false) => return Err(Error::InconsistentSign),
        (true, false) => 1,
        (false, true) => -1,
    };
    let mut c = known.to_vec();
    for idx in (k + 1)..=m {
        let j = m - idx;
        c.push(eps * q.pow((m - 2 * j) as u32) * c[j]);
    }
    Ok(c)
}

fn to_lpoly(q: u32, c: Vec<i128>) -> Result<LPolynomial> {
    let coeffs = c
        .into_iter()
        .map(|x| i64::try_from(x).map_err(|_| Error::Config("coefficient overflow".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(LPolynomial { q, coeffs })
}

/// The Euler product over the a_P table.
///
/// Local factors are `(1 - chi a_P u^d + chi^2 q^d u^{2d})^{-1}` at good
/// primes and `(1 - chi a_P u^d)^{-1}` at bad ones. With a table of degree
/// `K >= M + 1` the product gives every coefficient and the coefficient at
/// `M + 1` is checked to vanish; with `ceil(M/2) + 1 <= K <= M` the upper
/// coefficients come from the functional equation, whose sign is read from
/// the overlap.
pub fn euler_l(curve: &CurveData, table: &ApTable, d: &Poly) -> Result<LPolynomial> {
    check_coprime(curve, d)?;
    let m = twist_degree(curve, d);
    let q = curve.p() as i128;
    let k = (m + 1).min(table.max_degree);
    if k < m.div_ceil(2) + 1 && k < m {
        return Err(Error::InsufficientApTable {
            needed: m.div_ceil(2) + 1,
            have: table.max_degree,
        });
    }
    let mut series = vec![0i128; k + 1];
    series[0] = 1;
    for (prime, &ap) in table.entries.iter() {
        let deg = prime.deg();
        if deg > k {
            continue;
        }
        let chi = jacobi(prime, d) as i128;
        if chi == 0 {
            continue;
        }
        let ap = ap as i128;
        let local: Vec<(usize, i128)> = match curve.reduction_type(prime) {
            ReductionType::Good => vec![(deg, -chi * ap), (2 * deg, q.pow(deg as u32))],
            _ => vec![(deg, -chi * ap)],
        };
        series_divide(&mut series, &local);
    }
    if k == m + 1 {
        if series[m + 1] != 0 {
            return Err(Error::NonVanishingTail {
                index: m + 1,
                degree: m,
            });
        }
        series.truncate(m + 1);
        return to_lpoly(curve.p(), series);
    }
    let c = complete_by_functional_equation(&series, m, q)?;
    to_lpoly(curve.p(), c)
}

/// `S_n` for `n = 1..=n_max` by summing over the fibers of `E` over
/// F_{p^n}:
///
/// `S_n = -s_n * sum_{t0} chi(D(t0)) T_n(t0)`, `s_n = (-1)^{n deg D (p-1)/2}`.
///
/// The sign `s_n` converts `(D / P)` into `chi_D(P) = (P / D)` by quadratic
/// reciprocity; it is 1 whenever `p = 1 mod 4`. Multiplicative and additive
/// fibers need no special case: there `-T_n(t0)` already equals `+-1` or 0.
pub fn fiber_power_sums(cache: &TraceCache, d: &Poly, n_max: usize) -> Result<Vec<i64>> {
    check_coprime(cache.curve(), d)?;
    (1..=n_max).map(|n| fiber_power_sum(cache, d, n)).collect()
}

/// A single `S_n`; see [`fiber_power_sums`].
pub fn fiber_power_sum(cache: &TraceCache, d: &Poly, n: usize) -> Result<i64> {
    let field = cache.field(n)?;
    let traces = cache.traces(n)?;
    let p = cache.curve().p();
    let mut acc = 0i64;
    if field.has_tables() {
        let ld: Vec<u32> = d.coeffs().iter().map(|&c| field.log_raw(field.from_base(c))).collect();
        for x in field.elements() {
            let t = traces[x.0 as usize];
            if t == 0 {
                continue;
            }
            let lx = field.log_raw(x);
            let mut v = LOG_ZERO;
            for &c in ld.iter().rev() {
                v = field.log_add(field.log_mul(v, lx), c);
            }
            if v != LOG_ZERO {
                acc += if v.is_multiple_of(2) { t as i64 } else { -(t as i64) };
            }
        }
    } else {
        for x in field.elements() {
            let t = traces[x.0 as usize];
            if t != 0 {
                acc += field.quad_char(field.eval_poly(d, x)) as i64 * t as i64;
            }
        }
    }
    let flip = (n * d.deg() * ((p as usize - 1) / 2)) % 2 == 1;
    Ok(if flip { acc } else { -acc })
}

/// Newton's identities `k c_k = sum_{i=1}^k S_i c_{k-i}` for `k <= len(S)`,
/// then the functional equation for the rest.
pub fn newton_assemble(s: &[i64], m: usize, q: u32) -> Result<LPolynomial> {
    let k = s.len().min(m);
    if k < m && k < m.div_ceil(2) + 1 {
        return Err(Error::InsufficientApTable {
            needed: m.div_ceil(2) + 1,
            have: s.len(),
        });
    }
    let mut c = vec![1i128];
    for n in 1..=k {
        let mut acc = 0i128;
        for i in 1..=n {
            acc += s[i - 1] as i128 * c[n - i];
        }
        if acc % n as i128 != 0 {
            return Err(Error::NonIntegralNewton(n));
        }
        c.push(acc / n as i128);
    }
    let c = complete_by_functional_equation(&c, m, q as i128)?;
    to_lpoly(q, c)
}

/// `L(E (x) chi_D, u)` by fiber sums and Newton's identities, starting from
/// `ceil(M/2) + 1` power sums and adding more while the sign is ambiguous.
pub fn twist_lpoly(cache: &TraceCache, d: &Poly) -> Result<LPolynomial> {
    check_coprime(cache.curve(), d)?;
    let m = twist_degree(cache.curve(), d);
    let q = cache.curve().p();
    let mut k = (m.div_ceil(2) + 1).min(m);
    let mut s = fiber_power_sums(cache, d, k)?;
    loop {
        match newton_assemble(&s, m, q) {
            Err(Error::AmbiguousSign(_)) if k < m => {
                k += 1;
                s.push(fiber_power_sum(cache, d, k)?);
            }
            other => return other,
        }
    }
}

/// Per-degree sign constants `kappa_N = eps_D chi_{M_E}(D)`, calibrated from
/// one spectral computation per degree.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SignCalibration {
    pub constants: BTreeMap<usize, i64>,
}

impl SignCalibration {
    pub fn calibrate(&mut self, curve: &CurveData, d: &Poly, eps: i64) {
        let chi = jacobi(d, &curve.mult_part) as i64;
        self.constants.entry(d.deg()).or_insert(eps * chi);
    }

    /// Predicted sign `kappa_{deg D} chi_{M_E}(D)`.
    pub fn eps_formula(&self, curve: &CurveData, d: &Poly) -> Result<i64> {
        let kappa = self.constants.get(&d.deg()).ok_or(Error::CalibrationMissing(d.deg()))?;
        Ok(kappa * jacobi(d, &curve.mult_part) as i64)
    }
}

/// Complex L-polynomial of an order-l twist.
#[derive(Clone, Debug)]
pub struct ComplexLPolynomial {
    pub q: u32,
    pub coeffs: Vec<Complex64>,
}

impl ComplexLPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `p_n = sum gamma^n` for `n = 1..=n_max`, by Newton's identities.
    pub fn inverse_root_power_sums(&self, n_max: usize) -> Vec<Complex64> {
        let c = |k: usize| self.coeffs.get(k).copied().unwrap_or_default();
        let mut p: Vec<Complex64> = Vec::with_capacity(n_max);
        for k in 1..=n_max {
            let mut v = -c(k) * k as f64;
            for i in 1..k {
                v -= p[i - 1] * c(k - i);
            }
            p.push(v);
        }
        p
    }

    /// Roots in `v = q u`, angles `theta = -arg v` sorted, and the RH error.
    pub fn spectrum(&self) -> Result<(Vec<f64>, f64)> {
        let q = self.q as f64;
        let scaled: Vec<Complex64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c / q.powi(j as i32))
            .collect();
        let roots = aberth(&scaled)?;
        let rh = roots.iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max);
        let mut angles: Vec<f64> = roots.iter().map(|v| (-v.arg()).rem_euclid(TAU)).collect();
        angles.sort_by(f64::total_cmp);
        Ok((angles, rh))
    }
}

/// `L(E (x) chi, u)` for an order-l character from the a_P table:
/// `S_n = sum_{d | n} sum_{deg P = n/d} (n/d) (alpha_P^d + conj(alpha_P)^d) chi(P)^d`
/// with good-prime power traces from `s_k = a s_{k-1} - q^{deg P} s_{k-2}` and
/// `a_P^d` at bad primes; all `M` power sums are used.
pub fn ell_l(curve: &CurveData, table: &ApTable, chi: &EllChar) -> Result<ComplexLPolynomial> {
    if !chi.conductor().is_coprime(&curve.finite_conductor) {
        return Err(Error::NonCoprimeConductor);
    }
    let m = twist_degree(curve, chi.conductor());
    if table.max_degree < m {
        return Err(Error::InsufficientApTable {
            needed: m,
            have: table.max_degree,
        });
    }
    let q = curve.p() as i128;
    let ell = chi.order();
    let mut s = vec![Complex64::new(0.0, 0.0); m + 1];
    for (prime, &ap) in table.entries.iter() {
        let deg = prime.deg();
        if deg > m {
            continue;
        }
        let Some(idx) = chi.index(prime) else { continue };
        let kmax = m / deg;
        // power traces tr_k = alpha^k + conj(alpha)^k
        let mut tr = vec![0i128; kmax + 1];
        let good = curve.reduction_type(prime) == ReductionType::Good;
        let qd = q.pow(deg as u32);
        tr[0] = 2;
        for k in 1..=kmax {
            tr[k] = if good {
                if k == 1 {
                    ap as i128
                } else {
                    ap as i128 * tr[k - 1] - qd * tr[k - 2]
                }
            } else {
                (ap as i128).pow(k as u32)
            };
        }
        for k in 1..=kmax {
            let z = crate::characters::root_of_unity(idx * k as u32 % ell, ell);
            s[k * deg] += z * (deg as f64 * tr[k] as f64);
        }
    }
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for n in 1..=m {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 1..=n {
            acc += s[i] * c[n - i];
        }
        c.push(acc / n as f64);
    }
    Ok(ComplexLPolynomial {
        q: curve.p(),
        coeffs: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecurve::{build_ap_table, build_curve};

    fn p5(c: &[i64]) -> Poly {
        Poly::from_i64(5, c)
    }

    fn e0_cache() -> TraceCache {
        TraceCache::new(build_curve(p5(&[0, 1]), p5(&[1])).unwrap())
    }

    #[test]
    fn newton_trivial_cases() {
        assert_eq!(newton_assemble(&[], 0, 5).unwrap().coeffs, vec![1]);
        let l = newton_assemble(&[-5], 1, 5).unwrap();
        assert_eq!(l.coeffs, vec![1, -5]);
        let sd = spectral(&l).unwrap();
        assert_eq!((sd.rank, sd.eps), (1, -1));
        let sq = LPolynomial {
            q: 5,
            coeffs: vec![1, -10, 25],
        };
        let sd = spectral(&sq).unwrap();
        assert_eq!((sd.rank, sd.eps), (2, 1));
    }

    #[test]
    fn untwisted_e0() {
        let cache = e0_cache();
        let one = Poly::one(5);
        assert_eq!(fiber_power_sums(&cache, &one, 1).unwrap(), vec![-5]);
        let l = twist_lpoly(&cache, &one).unwrap();
        assert_eq!(l.coeffs, vec![1, -5]);
        let table = build_ap_table(&cache, 3).unwrap();
        assert_eq!(euler_l(cache.curve(), &table, &one).unwrap(), l);
    }

    #[test]
    fn twist_by_t_has_degree_three() {
        let cache = e0_cache();
        let table = build_ap_table(&cache, 4).unwrap();
        let d = Poly::t(5);
        let a = euler_l(cache.curve(), &table, &d).unwrap();
        let b = twist_lpoly(&cache, &d).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree(), 3);
        assert!(a.satisfies_functional_equation());
        let sd = spectral(&a).unwrap();
        assert!(sd.rh_error < 1e-8);
        assert_eq!(sd.rank.is_multiple_of(2), sd.eps == 1);
    }

    #[test]
    fn rejects_conductor_sharing_a_factor() {
        let cache = e0_cache();
        let d = p5(&[2, 1]);
        assert_eq!(twist_lpoly(&cache, &d).err(), Some(Error::NonCoprimeConductor));
    }

    #[test]
    fn ambiguous_overlap_is_reported() {
        // all-zero overlap: L = 1 + 0 u + ... cannot fix the sign
        assert_eq!(
            complete_by_functional_equation(&[1, 0, 0], 3, 5).err(),
            Some(Error::AmbiguousSign(2))
        );
        assert_eq!(
            complete_by_functional_equation(&[1, 1, 7], 3, 5).err(),
            Some(Error::InconsistentSign)
        );
    }

    #[test]
    fn power_sums_round_trip() {
        let cache = e0_cache();
        let d = p5(&[1, 1, 1]);
        let l = twist_lpoly(&cache, &d).unwrap();
        let s = fiber_power_sums(&cache, &d, 4).unwrap();
        let p = l.inverse_root_power_sums(4);
        for n in 0..4 {
            assert_eq!(p[n], -(s[n] as i128));
        }
    }
}
