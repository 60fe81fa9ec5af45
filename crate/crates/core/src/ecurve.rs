//! The curve `E: y^2 = x^3 + A x + B` over F_p(t): reduction types, the
//! conductor (with the place at infinity) and the table of Frobenius traces.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldSpec, FieldTable, FieldTower, LOG_ZERO};
use crate::fqpoly::{residue_map, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReductionType {
    Good,
    MultSplit,
    MultNonsplit,
    Additive,
}

impl ReductionType {
    pub fn conductor_exponent(self) -> u32 {
        match self {
            ReductionType::Good => 0,
            ReductionType::MultSplit | ReductionType::MultNonsplit => 1,
            ReductionType::Additive => 2,
        }
    }

    pub fn is_multiplicative(self) -> bool {
        matches!(self, ReductionType::MultSplit | ReductionType::MultNonsplit)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadPrime {
    #[serde(serialize_with = "ser_poly")]
    pub prime: Poly,
    pub kind: ReductionType,
    pub exponent: u32,
}

/// Valuations of the minimal model at `s = 1/t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InfinityData {
    pub k: usize,
    pub v_a: usize,
    pub v_b: Option<usize>,
    pub v_delta: usize,
}

pub(crate) fn ser_poly<S: serde::Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

#[derive(Clone, Debug)]
pub struct CurveData {
    pub spec: FieldSpec,
    pub a: Poly,
    pub b: Poly,
    /// `-16 (4 A^3 + 27 B^2)`
    pub delta: Poly,
    /// `-48 A`
    pub c4: Poly,
    pub bad_primes: Vec<BadPrime>,
    pub finite_conductor: Poly,
    /// Product of the multiplicative primes, `M_E`.
    pub mult_part: Poly,
    pub f_inf: u32,
    pub infinity: InfinityData,
    /// `deg(finite_conductor) + f_inf`
    pub deg_conductor: usize,
}

fn valuation(f: &Poly, prime: &Poly) -> usize {
    if f.is_zero() {
        return usize::MAX;
    }
    let mut v = 0;
    let mut g = f.clone();
    loop {
        let (q, r) = g.divrem(prime).expect("nonzero prime");
        if !r.is_zero() {
            return v;
        }
        g = q;
        v += 1;
    }
}

/// Validate the standing hypotheses and compute the reduction data.
pub fn build_curve(a: Poly, b: Poly) -> Result<CurveData> {
    let spec = FieldSpec::new(a.p() as u64)?;
    let p = spec.p();
    if a.is_zero() {
        return Err(Error::ZeroJInvariant);
    }
    let delta = a.pow(3).scale(4).add(&b.pow(2).scale(27)).scale(p - 16 % p);
    if delta.is_zero() {
        return Err(Error::SingularCurve);
    }
    let c4 = a.scale(p - 48 % p);

    let mut bad_primes = Vec::new();
    for (prime, _) in delta.factor()? {
        if valuation(&a, &prime) >= 4 && valuation(&b, &prime) >= 6 {
            return Err(Error::NonMinimalModel(prime.to_string()));
        }
        let kind = classify_finite(&prime, &a, &b, &c4)?;
        bad_primes.push(BadPrime {
            exponent: kind.conductor_exponent(),
            prime,
            kind,
        });
    }
    let finite_conductor = bad_primes
        .iter()
        .fold(Poly::one(p), |acc, bp| acc.mul(&bp.prime.pow(bp.exponent)));
    let mult_part = bad_primes
        .iter()
        .filter(|bp| bp.kind.is_multiplicative())
        .fold(Poly::one(p), |acc, bp| acc.mul(&bp.prime));
    if mult_part.is_one() {
        return Err(Error::NoMultiplicativePrime);
    }

    // y^2 = x^3 + A(1/s) x + B(1/s), scaled by s^{4k}, s^{6k}
    let da = a.deg();
    let db = b.degree();
    let k = da.div_ceil(4).max(db.map_or(0, |d| d.div_ceil(6)));
    let infinity = InfinityData {
        k,
        v_a: 4 * k - da,
        v_b: db.map(|d| 6 * k - d),
        v_delta: 12 * k - delta.deg(),
    };
    // p >= 5: good iff v(delta) = 0, multiplicative iff additionally v(c4) = 0
    if infinity.v_delta == 0 || infinity.v_a == 0 {
        return Err(Error::NotAdditiveAtInfinity);
    }
    let f_inf = 2;
    Ok(CurveData {
        spec,
        deg_conductor: finite_conductor.deg() + f_inf as usize,
        a,
        b,
        delta,
        c4,
        bad_primes,
        finite_conductor,
        mult_part,
        f_inf,
        infinity,
    })
}

/// Classification at a prime dividing the discriminant.
fn classify_finite(prime: &Poly, a: &Poly, b: &Poly, c4: &Poly) -> Result<ReductionType> {
    if prime.divides(c4) {
        return Ok(ReductionType::Additive);
    }
    // double root alpha = -3b/(2a), simple root beta = -2 alpha, so
    // alpha - beta = -9b/(2a); the node is split iff this is a square
    let field = crate::ffield::build_extension(FieldSpec::new(prime.p() as u64)?, prime.deg())?;
    let rm = residue_map(prime, &field)?;
    let (ar, br) = (rm.map(a), rm.map(b));
    let num = field.mul(field.from_base((prime.p() - 9 % prime.p()) % prime.p()), br);
    let den = field.mul(field.from_base(2), ar);
    let diff = field.mul(num, field.inv(den)?);
    Ok(if field.quad_char(diff) == 1 {
        ReductionType::MultSplit
    } else {
        ReductionType::MultNonsplit
    })
}

impl CurveData {
    pub fn p(&self) -> u32 {
        self.spec.p()
    }

    pub fn reduction_type(&self, prime: &Poly) -> ReductionType {
        self.bad_primes
            .iter()
            .find(|bp| bp.prime == *prime)
            .map_or(ReductionType::Good, |bp| bp.kind)
    }

    /// Degree of `L(E (x) chi, u)` for a twist conductor of degree `n`.
    pub fn twist_degree(&self, n: usize) -> usize {
        (2 * n + self.deg_conductor).saturating_sub(4)
    }

    /// Degree of the untwisted `L(E, u)`.
    pub fn base_degree(&self) -> usize {
        self.deg_conductor.saturating_sub(4)
    }
}

/// `T(a, b) = sum_x chi(x^3 + a x + b)` over a field, by the quadratic
/// character.
pub fn cubic_char_sum(field: &FieldTable, a: FieldElem, b: FieldElem) -> i64 {
    field
        .elements()
        .map(|x| {
            let v = field.add(field.mul(x, field.add(field.mul(x, x), a)), b);
            field.quad_char(v) as i64
        })
        .sum()
}

/// `#E(F)` including the point at infinity, by counting square roots.
pub fn point_count(field: &FieldTable, a: FieldElem, b: FieldElem) -> u64 {
    let mut roots = vec![0u32; field.size() as usize];
    for y in field.elements() {
        roots[field.mul(y, y).0 as usize] += 1;
    }
    1 + field
        .elements()
        .map(|x| {
            let v = field.add(field.mul(x, field.add(field.mul(x, x), a)), b);
            roots[v.0 as usize] as u64
        })
        .sum::<u64>()
}

/// `a_P` for the prime `P`, using a field table of degree `deg P`.
///
/// For good `P` the point count and the character sum are both evaluated and
/// must agree; bad primes follow the reduction type.
pub fn a_p(curve: &CurveData, prime: &Poly, field: &FieldTable) -> Result<i64> {
    let rm = residue_map(prime, field)?;
    match curve.reduction_type(prime) {
        ReductionType::Good => {
            let (a, b) = (rm.map(&curve.a), rm.map(&curve.b));
            let by_count = field.size() as i64 + 1 - point_count(field, a, b) as i64;
            let by_char = -cubic_char_sum(field, a, b);
            assert_eq!(by_count, by_char, "point count and character sum disagree");
            Ok(by_char)
        }
        ReductionType::MultSplit => Ok(1),
        ReductionType::MultNonsplit => Ok(-1),
        ReductionType::Additive => Ok(0),
    }
}

/// Per-degree tables `T_n(t0) = sum_{x in F_{p^n}} chi(x^3 + A(t0) x + B(t0))`
/// indexed by `t0 in F_{p^n}`.
///
/// This is the central precomputation: `T_n` is built once per `(curve, n)`
/// and every twist then costs a single pass over `F_{p^n}` instead of a
/// double loop. `T_n` is constant on Frobenius orbits, so only orbit
/// representatives are summed. The same tables give `a_P = -T_d(root of P)`
/// for every prime, good or bad.
#[derive(Debug)]
pub struct TraceCache {
    curve: CurveData,
    tower: FieldTower,
    traces: Mutex<BTreeMap<usize, Arc<Vec<i32>>>>,
}

impl TraceCache {
    pub fn new(curve: CurveData) -> Self {
        let tower = FieldTower::new(curve.spec);
        TraceCache::with_tower(curve, tower)
    }

    pub fn with_tower(curve: CurveData, tower: FieldTower) -> Self {
        TraceCache {
            curve,
            tower,
            traces: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn curve(&self) -> &CurveData {
        &self.curve
    }

    pub fn field(&self, n: usize) -> Result<Arc<FieldTable>> {
        self.tower.get(n)
    }

    pub fn traces(&self, n: usize) -> Result<Arc<Vec<i32>>> {
        if let Some(t) = self.traces.lock().expect("trace lock").get(&n) {
            return Ok(Arc::clone(t));
        }
        let field = self.tower.get(n)?;
        let t = Arc::new(compute_traces(&self.curve, &field));
        let mut guard = self.traces.lock().expect("trace lock");
        Ok(Arc::clone(guard.entry(n).or_insert(t)))
    }
}

fn compute_traces(curve: &CurveData, field: &FieldTable) -> Vec<i32> {
    let size = field.size() as usize;
    // orbit representatives: least element of each Frobenius orbit
    let reps: Vec<FieldElem> = field
        .elements()
        .filter(|&x| {
            let mut y = field.frobenius(x);
            while y != x {
                if y < x {
                    return false;
                }
                y = field.frobenius(y);
            }
            true
        })
        .collect();
    let sums: Vec<i32> = if field.has_tables() {
        let n = field.size() - 1;
        let lx: Vec<u32> = field.elements().map(|x| field.log_raw(x)).collect();
        let l3: Vec<u32> = lx
            .iter()
            .map(|&l| {
                if l == LOG_ZERO {
                    LOG_ZERO
                } else {
                    (3 * l as u64 % n) as u32
                }
            })
            .collect();
        reps.par_iter()
            .map(|&t0| {
                let la = field.log_raw(field.eval_poly(&curve.a, t0));
                let lb = field.log_raw(field.eval_poly(&curve.b, t0));
                let mut s = 0i32;
                for (i, &l) in lx.iter().enumerate() {
                    let v = field.log_add(field.log_add(l3[i], field.log_mul(la, l)), lb);
                    if v != LOG_ZERO {
                        s += if v.is_multiple_of(2) { 1 } else { -1 };
                    }
                }
                s
            })
            .collect()
    } else {
        reps.par_iter()
            .map(|&t0| {
                let a = field.eval_poly(&curve.a, t0);
                let b = field.eval_poly(&curve.b, t0);
                cubic_char_sum(field, a, b) as i32
            })
            .collect()
    };
    let mut out = vec![0i32; size];
    for (&x, &s) in reps.iter().zip(&sums) {
        let mut y = x;
        loop {
            out[y.0 as usize] = s;
            y = field.frobenius(y);
            if y == x {
                break;
            }
        }
    }
    out
}

/// Frobenius traces `a_P` for every prime of degree `<= max_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApTable {
    pub p: u32,
    pub a: Poly,
    pub b: Poly,
    pub max_degree: usize,
    pub entries: BTreeMap<Poly, i64>,
}

/// Default maximum prime degree for the a_P table.
pub const DEFAULT_AP_DEGREE: usize = 6;

/// Build the table from orbit representatives: every prime of degree `d` is
/// the minimal polynomial of `d` conjugate elements of F_{p^d}.
pub fn build_ap_table(cache: &TraceCache, max_degree: usize) -> Result<ApTable> {
    let curve = cache.curve();
    let mut entries = BTreeMap::new();
    for d in 1..=max_degree {
        let field = cache.field(d)?;
        let traces = cache.traces(d)?;
        let primes: Vec<(Poly, i64)> = field
            .elements()
            .collect::<Vec<_>>()
            .par_iter()
            .filter_map(|&x| {
                let mut y = field.frobenius(x);
                let mut len = 1;
                while y != x {
                    if y < x {
                        return None;
                    }
                    y = field.frobenius(y);
                    len += 1;
                }
                (len == d).then(|| (field.min_poly(x), -(traces[x.0 as usize] as i64)))
            })
            .collect();
        entries.extend(primes);
    }
    let table = ApTable {
        p: curve.p(),
        a: curve.a.clone(),
        b: curve.b.clone(),
        max_degree,
        entries,
    };
    table.check_hasse(curve)?;
    Ok(table)
}

impl ApTable {
    pub fn get(&self, prime: &Poly) -> Option<i64> {
        self.entries.get(prime).copied()
    }

    pub fn of_degree(&self, d: usize) -> impl Iterator<Item = (&Poly, i64)> {
        self.entries
            .iter()
            .filter(move |(k, _)| k.deg() == d)
            .map(|(k, &v)| (k, v))
    }

    /// Hasse bound for good primes and `a_P in {+-1}` / `0` for bad ones.
    pub fn check_hasse(&self, curve: &CurveData) -> Result<()> {
        for (prime, &ap) in &self.entries {
            let ok = match curve.reduction_type(prime) {
                ReductionType::Good => {
                    let bound = 4 * (self.p as u128).pow(prime.deg() as u32);
                    (ap as i128 * ap as i128) as u128 <= bound
                }
                ReductionType::MultSplit => ap == 1,
                ReductionType::MultNonsplit => ap == -1,
                ReductionType::Additive => ap == 0,
            };
            if !ok {
                return Err(Error::CacheCorrupt(format!("a_P = {ap} violates the bound at {prime}")));
            }
        }
        Ok(())
    }

    fn body(&self) -> String {
        let mut s = String::new();
        for (prime, ap) in &self.entries {
            let _ = writeln!(s, "{prime} {ap}");
        }
        s
    }

    /// Plain-text cache file; deterministic.
    pub fn to_text(&self) -> String {
        let body = self.body();
        let checksum = hex::encode(Sha256::digest(body.as_bytes()));
        format!(
            "p={}\nA={}\nB={}\nmaxdeg={}\nchecksum={}\n{}",
            self.p, self.a, self.b, self.max_degree, checksum, body
        )
    }

    pub fn from_text(text: &str) -> Result<ApTable> {
        let corrupt = |m: &str| Error::CacheCorrupt(m.to_string());
        let mut lines = text.split_inclusive('\n');
        let mut header = |key: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| corrupt("truncated header"))?;
            line.trim_end_matches('\n')
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('='))
                .map(str::to_string)
                .ok_or_else(|| corrupt(&format!("expected header {key}")))
        };
        let p: u32 = header("p")?.parse().map_err(|_| corrupt("bad p"))?;
        let a = Poly::parse(p, &header("A")?).map_err(|_| corrupt("bad A"))?;
        let b = Poly::parse(p, &header("B")?).map_err(|_| corrupt("bad B"))?;
        let max_degree: usize = header("maxdeg")?.parse().map_err(|_| corrupt("bad maxdeg"))?;
        let checksum = header("checksum")?;
        let body: String = lines.collect();
        if hex::encode(Sha256::digest(body.as_bytes())) != checksum {
            return Err(corrupt("checksum mismatch"));
        }
        let mut entries = BTreeMap::new();
        for line in body.lines() {
            let (poly, ap) = line.split_once(' ').ok_or_else(|| corrupt("bad body line"))?;
            let prime = Poly::parse(p, poly).map_err(|_| corrupt("bad prime"))?;
            let ap: i64 = ap.parse().map_err(|_| corrupt("bad a_P"))?;
            entries.insert(prime, ap);
        }
        Ok(ApTable {
            p,
            a,
            b,
            max_degree,
            entries,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<ApTable> {
        let text = std::fs::read_to_string(path)?;
        ApTable::from_text(&text)
    }
}

/// Content-addressed cache file name for `(p, A, B, maxdeg)`.
pub fn cache_path(dir: &Path, curve: &CurveData, max_degree: usize) -> PathBuf {
    let key = format!("v1|{}|{}|{}|{}", curve.p(), curve.a, curve.b, max_degree);
    let digest = hex::encode(Sha256::digest(key.as_bytes()));
    dir.join(format!("ap-{}.txt", &digest[..16]))
}

/// Load the cached table, or build and persist it when absent. A present but
/// damaged file is reported, not silently replaced.
pub fn load_or_build(cache: &TraceCache, dir: &Path, max_degree: usize) -> Result<ApTable> {
    let path = cache_path(dir, cache.curve(), max_degree);
    if path.exists() {
        let table = ApTable::load(&path)?;
        let c = cache.curve();
        if table.p != c.p() || table.a != c.a || table.b != c.b || table.max_degree != max_degree {
            return Err(Error::CacheCorrupt(format!(
                "{} belongs to another curve",
                path.display()
            )));
        }
        table.check_hasse(c)?;
        return Ok(table);
    }
    let table = build_ap_table(cache, max_degree)?;
    std::fs::create_dir_all(dir)?;
    table.write(&path)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::build_extension;

    fn p5(c: &[i64]) -> Poly {
        Poly::from_i64(5, c)
    }

    pub(crate) fn e0() -> CurveData {
        build_curve(p5(&[0, 1]), p5(&[1])).unwrap()
    }

    #[test]
    fn e0_reduction_data() {
        let c = e0();
        assert_eq!(c.delta, p5(&[3, 0, 0, 1]));
        assert_eq!(c.c4, p5(&[0, 2]));
        assert_eq!(c.finite_conductor, p5(&[3, 0, 0, 1]));
        assert_eq!(c.mult_part, p5(&[3, 0, 0, 1]));
        assert_eq!(c.f_inf, 2);
        assert_eq!(c.deg_conductor, 5);
        assert_eq!(
            c.infinity,
            InfinityData {
                k: 1,
                v_a: 3,
                v_b: Some(6),
                v_delta: 9
            }
        );
        assert_eq!(c.reduction_type(&Poly::t(5)), ReductionType::Good);
        assert!(c.bad_primes.iter().all(|bp| bp.kind.is_multiplicative()));
        assert_eq!(c.base_degree(), 1);
        assert_eq!(c.twist_degree(1), 3);
    }

    #[test]
    fn rejected_curves() {
        assert_eq!(build_curve(Poly::zero(5), p5(&[1])).err(), Some(Error::ZeroJInvariant));
        // A = -3c^2, B = 2c^3 with c = t
        let singular = build_curve(p5(&[0, 0, -3]), p5(&[0, 0, 0, 2]));
        assert_eq!(singular.err(), Some(Error::SingularCurve));
        let nonmin = build_curve(p5(&[0, 0, 0, 0, 1]), p5(&[0, 0, 0, 0, 0, 0, 1]));
        assert!(matches!(nonmin, Err(Error::NonMinimalModel(_))));
        assert_eq!(
            build_curve(p5(&[1]), p5(&[1])).err(),
            Some(Error::NoMultiplicativePrime)
        );
        // deg A = 4: v(A'') = 0 at infinity
        assert_eq!(
            build_curve(p5(&[0, 1, 0, 0, 1]), p5(&[1])).err(),
            Some(Error::NotAdditiveAtInfinity)
        );
    }

    #[test]
    fn a_p_at_t_is_zero() {
        let c = e0();
        let f = build_extension(c.spec, 1).unwrap();
        assert_eq!(point_count(&f, FieldElem(0), FieldElem(1)), 6);
        assert_eq!(a_p(&c, &Poly::t(5), &f).unwrap(), 0);
    }

    #[test]
    fn split_rule_matches_singular_fiber_count() {
        let c = e0();
        for bp in &c.bad_primes {
            let f = build_extension(c.spec, bp.prime.deg()).unwrap();
            let rm = residue_map(&bp.prime, &f).unwrap();
            let n = point_count(&f, rm.map(&c.a), rm.map(&c.b)) as i64;
            let expect = match bp.kind {
                ReductionType::MultSplit => f.size() as i64,
                ReductionType::MultNonsplit => f.size() as i64 + 2,
                _ => unreachable!(),
            };
            assert_eq!(n, expect);
            assert_eq!(a_p(&c, &bp.prime, &f).unwrap(), f.size() as i64 + 1 - n);
        }
    }

    #[test]
    fn traces_over_f5() {
        let cache = TraceCache::new(e0());
        assert_eq!(*cache.traces(1).unwrap(), vec![0, 3, 1, -1, 2]);
    }

    #[test]
    fn table_agrees_with_direct_a_p() {
        let cache = TraceCache::new(e0());
        let table = build_ap_table(&cache, 3).unwrap();
        assert_eq!(table.of_degree(1).count(), 5);
        assert_eq!(table.of_degree(3).count(), 40);
        for d in 1..=3 {
            let f = build_extension(cache.curve().spec, d).unwrap();
            for (prime, ap) in table.of_degree(d) {
                assert_eq!(a_p(cache.curve(), prime, &f).unwrap(), ap);
            }
        }
    }

    #[test]
    fn cache_round_trip_and_corruption() {
        let cache = TraceCache::new(e0());
        let table = build_ap_table(&cache, 2).unwrap();
        let text = table.to_text();
        assert_eq!(ApTable::from_text(&text).unwrap(), table);
        assert_eq!(ApTable::from_text(&text).unwrap().to_text(), text);
        let broken = text.replacen("\n1,1 ", "\n1,1 9", 1);
        assert!(matches!(ApTable::from_text(&broken), Err(Error::CacheCorrupt(_))));
    }
}
