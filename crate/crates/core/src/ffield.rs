//! Finite fields F_p and F_{p^d}.
//!
//! Elements of F_{p^d} = F_p[t]/(m) are stored as dense indices: the residue
//! `c_0 + c_1 t + ... + c_{d-1} t^{d-1}` has index `sum c_i p^i`. Zero is index
//! 0, one is index 1, and the prime subfield is the index range `0..p`.
//!
//! Small fields (up to [`FieldBudget::table_limit`] elements) carry discrete
//! log, antilog and Zech tables, so multiplication and character evaluation
//! are table lookups and sums can be formed without leaving the log domain.
//! Larger fields fall back to polynomial arithmetic modulo `m`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fqpoly::{pow_mod, prime_factors, Poly};

/// Sentinel "logarithm" of zero in the log domain.
pub const LOG_ZERO: u32 = u32::MAX;

/// Base prime field characteristic, validated to be a prime `p >= 5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self> {
        if p < 5 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        Ok(FieldSpec { p: p as u32 })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Size limits for field construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldBudget {
    /// Largest field that gets log/exp/Zech tables.
    pub table_limit: u64,
    /// Largest field handled at all (direct polynomial arithmetic).
    pub direct_limit: u64,
}

impl Default for FieldBudget {
    fn default() -> Self {
        FieldBudget {
            table_limit: 1 << 22,
            direct_limit: 1 << 40,
        }
    }
}

/// An element of some [`FieldTable`], by dense index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(pub u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct LogTables {
    log: Vec<u32>,
    exp: Vec<u32>,
    zech: Vec<u32>,
}

/// Arithmetic in F_{p^d}. Immutable after construction.
#[derive(Debug)]
pub struct FieldTable {
    spec: FieldSpec,
    degree: usize,
    modulus: Poly,
    size: u64,
    generator: FieldElem,
    base_root: u32,
    base_log: Vec<u32>,
    norm_exp: u64,
    pow_p: Vec<u64>,
    tables: Option<LogTables>,
}

/// Build F_{p^d} with the default budget.
pub fn build_extension(spec: FieldSpec, d: usize) -> Result<FieldTable> {
    build_extension_with(spec, d, FieldBudget::default())
}

/// Build F_{p^d}. The modulus is the lexicographically least monic
/// irreducible of degree `d`, so tables are identical across runs.
pub fn build_extension_with(spec: FieldSpec, d: usize, budget: FieldBudget) -> Result<FieldTable> {
    let p = spec.p;
    if d == 0 {
        return Err(Error::ConstantInput);
    }
    let size = (p as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    if size > budget.direct_limit as u128 {
        return Err(Error::BudgetExceeded {
            what: "field size",
            requested: size,
            limit: budget.direct_limit as u128,
        });
    }
    let size = size as u64;
    let modulus = least_irreducible(p, d)?;
    let pow_p: Vec<u64> = (0..=d).map(|i| (p as u64).pow(i as u32)).collect();

    let base_root = (2..p).find(|&g| is_primitive_mod(g, p)).expect("F_p^* is cyclic");
    let mut base_log = vec![LOG_ZERO; p as usize];
    let mut x = 1u64;
    for k in 0..p - 1 {
        base_log[x as usize] = k;
        x = x * base_root as u64 % p as u64;
    }

    let mut f = FieldTable {
        spec,
        degree: d,
        modulus,
        size,
        generator: FieldElem::ONE,
        base_root,
        base_log,
        norm_exp: (size - 1) / (p as u64 - 1),
        pow_p,
        tables: None,
    };
    let order_factors = prime_factors(size - 1);
    f.generator = (2..size)
        .map(FieldElem)
        .find(|&g| {
            order_factors
                .iter()
                .all(|&r| f.pow_direct(g, (size - 1) / r) != FieldElem::ONE)
        })
        .ok_or(Error::NoIrreducibleFound(d))?;
    if size <= budget.table_limit {
        f.tables = Some(f.make_tables());
    }
    Ok(f)
}

fn is_primitive_mod(g: u32, p: u32) -> bool {
    prime_factors(p as u64 - 1)
        .iter()
        .all(|&r| pow_mod(g as u64, (p as u64 - 1) / r, p) != 1)
}

fn least_irreducible(p: u32, d: usize) -> Result<Poly> {
    if d == 1 {
        return Ok(Poly::t(p));
    }
    let count = (p as u64).pow(d as u32);
    (0..count)
        .map(|i| Poly::monic_from_index(p, d, i))
        .find(|f| f.is_irreducible().unwrap_or(false))
        .ok_or(Error::NoIrreducibleFound(d))
}

impl FieldTable {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Number of elements, `p^d`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn generator(&self) -> FieldElem {
        self.generator
    }

    /// Least primitive root of F_p; fixes the embedding of the l-th roots of
    /// unity used by [`FieldTable::ell_char`].
    pub fn base_root(&self) -> u32 {
        self.base_root
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.size).map(FieldElem)
    }

    /// Embed an element of the prime field.
    pub fn from_base(&self, c: u32) -> FieldElem {
        FieldElem((c % self.spec.p) as u64)
    }

    /// The prime-field value of `x`, if `x` lies in F_p.
    pub fn to_base(&self, x: FieldElem) -> Option<u32> {
        (x.0 < self.spec.p as u64).then_some(x.0 as u32)
    }

    /// The class of `t`, i.e. the chosen root of the modulus.
    pub fn t(&self) -> FieldElem {
        if self.degree == 1 {
            // F_p[t]/(t): the residue of t is 0
            FieldElem::ZERO
        } else {
            FieldElem(self.spec.p as u64)
        }
    }

    fn digits(&self, x: u64) -> Vec<u32> {
        let p = self.spec.p as u64;
        let mut v = Vec::with_capacity(self.degree);
        let mut x = x;
        for _ in 0..self.degree {
            v.push((x % p) as u32);
            x /= p;
        }
        v
    }

    fn digits_to_index(&self, v: &[u32]) -> u64 {
        v.iter().rev().fold(0u64, |acc, &c| acc * self.spec.p as u64 + c as u64)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.degree == 1 {
            return FieldElem((a.0 + b.0) % self.spec.p as u64);
        }
        let p = self.spec.p as u64;
        let (mut x, mut y, mut r) = (a.0, b.0, 0u64);
        for i in 0..self.degree {
            let c = (x % p + y % p) % p;
            r += c * self.pow_p[i];
            x /= p;
            y /= p;
        }
        FieldElem(r)
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.spec.p as u64;
        let mut x = a.0;
        let mut r = 0u64;
        for i in 0..self.degree {
            r += ((p - x % p) % p) * self.pow_p[i];
            x /= p;
        }
        FieldElem(r)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    fn mul_direct(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.is_zero() || b.is_zero() {
            return FieldElem::ZERO;
        }
        let p = self.spec.p as u64;
        if self.degree == 1 {
            return FieldElem(a.0 * b.0 % p);
        }
        let d = self.degree;
        let x = self.digits(a.0);
        let y = self.digits(b.0);
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        let m = self.modulus.coeffs();
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            // t^k = -sum_{i<d} m_i t^{k-d+i}
            for i in 0..d {
                prod[k - d + i] = (prod[k - d + i] + c * (p - m[i] as u64)) % p;
            }
        }
        let v: Vec<u32> = prod[..d].iter().map(|&c| c as u32).collect();
        FieldElem(self.digits_to_index(&v))
    }

    fn pow_direct(&self, x: FieldElem, mut e: u64) -> FieldElem {
        let mut base = x;
        let mut r = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_direct(r, base);
            }
            base = self.mul_direct(base, base);
            e >>= 1;
        }
        r
    }

    fn make_tables(&self) -> LogTables {
        let n = (self.size - 1) as usize;
        let mut log = vec![LOG_ZERO; self.size as usize];
        let mut exp = vec![0u32; n];
        let mut cur = FieldElem::ONE;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = cur.0 as u32;
            log[cur.0 as usize] = k as u32;
            cur = self.mul_direct(cur, self.generator);
        }
        debug_assert_eq!(cur, FieldElem::ONE);
        // zech[k] = log(1 + g^k)
        let zech = exp
            .iter()
            .map(|&e| {
                let s = self.add(FieldElem(e as u64), FieldElem::ONE);
                log[s.0 as usize]
            })
            .collect();
        LogTables { log, exp, zech }
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => {
                if a.is_zero() || b.is_zero() {
                    return FieldElem::ZERO;
                }
                let n = self.size - 1;
                let k = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % n;
                FieldElem(t.exp[k as usize] as u64)
            }
            None => self.mul_direct(a, b),
        }
    }

    pub fn pow(&self, x: FieldElem, e: u64) -> FieldElem {
        match &self.tables {
            Some(t) => {
                if x.is_zero() {
                    return if e == 0 { FieldElem::ONE } else { FieldElem::ZERO };
                }
                let n = (self.size - 1) as u128;
                let k = (t.log[x.0 as usize] as u128 * e as u128) % n;
                FieldElem(t.exp[k as usize] as u64)
            }
            None => self.pow_direct(x, e),
        }
    }

    pub fn inv(&self, x: FieldElem) -> Result<FieldElem> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(x, self.size - 2))
    }

    /// Discrete logarithm to the base [`FieldTable::generator`].
    pub fn log(&self, x: FieldElem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.log[x.0 as usize] as u64),
            None => {
                // only reached for explicitly requested large-field logs
                let mut cur = FieldElem::ONE;
                for k in 0..self.size - 1 {
                    if cur == x {
                        return Some(k);
                    }
                    cur = self.mul_direct(cur, self.generator);
                }
                None
            }
        }
    }

    pub fn exp(&self, k: u64) -> FieldElem {
        let k = k % (self.size - 1);
        match &self.tables {
            Some(t) => FieldElem(t.exp[k as usize] as u64),
            None => self.pow_direct(self.generator, k),
        }
    }

    /// Logarithm with zero mapped to [`LOG_ZERO`]; tables required.
    #[inline]
    pub fn log_raw(&self, x: FieldElem) -> u32 {
        self.tables.as_ref().expect("log tables").log[x.0 as usize]
    }

    /// Sum of two elements given by their logarithms, via Zech logarithms:
    /// `g^a + g^b = g^a (1 + g^{b-a})`. Tables required.
    #[inline]
    pub fn log_add(&self, a: u32, b: u32) -> u32 {
        if a == LOG_ZERO {
            return b;
        }
        if b == LOG_ZERO {
            return a;
        }
        let n = (self.size - 1) as u32;
        let t = self.tables.as_ref().expect("log tables");
        let diff = if b >= a { b - a } else { b + n - a };
        let z = t.zech[diff as usize];
        if z == LOG_ZERO {
            return LOG_ZERO;
        }
        let s = a as u64 + z as u64;
        (s % n as u64) as u32
    }

    /// Product in the log domain.
    #[inline]
    pub fn log_mul(&self, a: u32, b: u32) -> u32 {
        if a == LOG_ZERO || b == LOG_ZERO {
            return LOG_ZERO;
        }
        ((a as u64 + b as u64) % (self.size - 1)) as u32
    }

    /// Quadratic character: 0 at zero, +1 on squares, -1 otherwise.
    pub fn quad_char(&self, x: FieldElem) -> i32 {
        if x.is_zero() {
            return 0;
        }
        match &self.tables {
            // the generator is a non-square, so squares have even logs
            Some(t) => {
                if t.log[x.0 as usize] % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            None => {
                if self.pow_direct(x, (self.size - 1) / 2) == FieldElem::ONE {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// The norm `N(x) = x^{(p^d-1)/(p-1)}` to the prime field.
    pub fn norm(&self, x: FieldElem) -> u32 {
        self.to_base(self.pow(x, self.norm_exp))
            .expect("norm lies in the prime field")
    }

    /// Order-l character index: for nonzero `x` returns `i` in `0..l` with
    /// `x^{(p^d-1)/l} = zeta^i`, where `zeta = g1^{(p-1)/l}` for the least
    /// primitive root `g1` of F_p; `zeta` is identified with `exp(2 pi i / l)`.
    /// Returns `None` at zero. Only `l | p - 1` is supported.
    pub fn ell_char(&self, x: FieldElem, ell: u32) -> Result<Option<u32>> {
        let p = self.spec.p;
        if ell == 0 || !(p - 1).is_multiple_of(ell) {
            return Err(Error::OrderNotDividing {
                ell,
                group_order: p as u64 - 1,
            });
        }
        if x.is_zero() {
            return Ok(None);
        }
        // x^{(Q-1)/l} = N(x)^{(p-1)/l}
        let n = self.norm(x);
        Ok(Some(self.base_log[n as usize] % ell))
    }

    /// Frobenius `x -> x^p`.
    pub fn frobenius(&self, x: FieldElem) -> FieldElem {
        self.pow(x, self.spec.p as u64)
    }

    /// Evaluate a polynomial over F_p at `x`.
    pub fn eval_poly(&self, f: &Poly, x: FieldElem) -> FieldElem {
        f.coeffs()
            .iter()
            .rev()
            .fold(FieldElem::ZERO, |acc, &c| self.add(self.mul(acc, x), self.from_base(c)))
    }

    /// Size of the Frobenius orbit of `x`, i.e. the degree of its minimal
    /// polynomial over F_p.
    pub fn orbit_len(&self, x: FieldElem) -> usize {
        let mut y = self.frobenius(x);
        let mut k = 1;
        while y != x {
            y = self.frobenius(y);
            k += 1;
        }
        k
    }

    /// Minimal polynomial of `x` over F_p, `prod (t - x^{p^i})` over its
    /// Frobenius orbit.
    pub fn min_poly(&self, x: FieldElem) -> Poly {
        let mut coeffs = vec![FieldElem::ONE];
        let mut y = x;
        loop {
            // multiply by (t - y)
            let mut next = vec![FieldElem::ZERO; coeffs.len() + 1];
            for (i, &c) in coeffs.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.sub(next[i], self.mul(c, y));
            }
            coeffs = next;
            y = self.frobenius(y);
            if y == x {
                break;
            }
        }
        let base: Vec<u32> = coeffs
            .iter()
            .map(|&c| self.to_base(c).expect("minimal polynomial over F_p"))
            .collect();
        Poly::new(self.spec.p, base)
    }
}

/// Lazily built tables F_{p^d} for several `d`, shared across threads.
#[derive(Debug)]
pub struct FieldTower {
    spec: FieldSpec,
    budget: FieldBudget,
    fields: Mutex<BTreeMap<usize, Arc<FieldTable>>>,
}

impl FieldTower {
    pub fn new(spec: FieldSpec) -> Self {
        FieldTower::with_budget(spec, FieldBudget::default())
    }

    pub fn with_budget(spec: FieldSpec, budget: FieldBudget) -> Self {
        FieldTower {
            spec,
            budget,
            fields: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn get(&self, d: usize) -> Result<Arc<FieldTable>> {
        if let Some(f) = self.fields.lock().expect("tower lock").get(&d) {
            return Ok(Arc::clone(f));
        }
        let f = Arc::new(build_extension_with(self.spec, d, self.budget)?);
        let mut guard = self.fields.lock().expect("tower lock");
        Ok(Arc::clone(guard.entry(d).or_insert(f)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5(d: usize) -> FieldTable {
        build_extension(FieldSpec::new(5).unwrap(), d).unwrap()
    }

    #[test]
    fn rejects_small_or_composite_p() {
        for p in [0, 1, 2, 3, 4, 9, 25] {
            assert_eq!(FieldSpec::new(p), Err(Error::InvalidCharacteristic(p)));
        }
    }

    #[test]
    fn prime_field_is_base_case() {
        let f = f5(1);
        assert_eq!(f.size(), 5);
        assert_eq!(f.modulus(), &Poly::t(5));
        assert_eq!(f.generator(), FieldElem(2));
        assert_eq!(f.mul(FieldElem(3), FieldElem(4)), FieldElem(2));
    }

    #[test]
    fn quadratic_extension_uses_least_modulus() {
        let f = f5(2);
        assert_eq!(f.modulus(), &Poly::new(5, vec![2, 0, 1]));
        // t^2 = -2 in the built field
        let t = f.t();
        assert_eq!(f.mul(t, t), f.from_base(3));
    }

    #[test]
    fn cubic_extension_round_trips_logs() {
        let f = f5(3);
        assert_eq!(f.size(), 125);
        for x in 1..125 {
            let x = FieldElem(x);
            let l = f.log(x).unwrap();
            assert_eq!(f.exp(l), x);
            assert_eq!(f.log(f.exp(l)), Some(l));
        }
    }

    #[test]
    fn quad_char_examples_and_census() {
        let f = f5(1);
        assert_eq!(f.quad_char(FieldElem(4)), 1);
        assert_eq!(f.quad_char(FieldElem(2)), -1);
        assert_eq!(f.quad_char(FieldElem::ZERO), 0);
        for d in 1..=3 {
            let f = f5(d);
            let squares = f.elements().filter(|&x| f.quad_char(x) == 1).count() as u64;
            assert_eq!(squares, (f.size() - 1) / 2);
        }
    }

    #[test]
    fn ell_char_examples() {
        let f = build_extension(FieldSpec::new(7).unwrap(), 1).unwrap();
        assert_eq!(f.base_root(), 3);
        assert_eq!(f.ell_char(FieldElem(1), 3).unwrap(), Some(0));
        assert_eq!(f.ell_char(FieldElem(0), 3).unwrap(), None);
        // 2^2 = 4 = (3^2)^2, so 2 has index 2
        assert_eq!(f.ell_char(FieldElem(2), 3).unwrap(), Some(2));
        assert!(matches!(
            f.ell_char(FieldElem(2), 5),
            Err(Error::OrderNotDividing { ell: 5, .. })
        ));
    }

    #[test]
    fn direct_arithmetic_matches_tables() {
        let spec = FieldSpec::new(5).unwrap();
        let small = FieldBudget {
            table_limit: 1,
            ..FieldBudget::default()
        };
        let direct = build_extension_with(spec, 3, small).unwrap();
        let tabled = f5(3);
        assert!(!direct.has_tables());
        assert_eq!(direct.generator(), tabled.generator());
        for a in (0..125).step_by(7) {
            for b in (0..125).step_by(11) {
                let (a, b) = (FieldElem(a), FieldElem(b));
                assert_eq!(direct.mul(a, b), tabled.mul(a, b));
            }
            let a = FieldElem(a);
            assert_eq!(direct.quad_char(a), tabled.quad_char(a));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let spec = FieldSpec::new(5).unwrap();
        let tight = FieldBudget {
            table_limit: 1 << 10,
            direct_limit: 1 << 12,
        };
        assert!(matches!(
            build_extension_with(spec, 6, tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn frobenius_fixes_exactly_prime_field() {
        for d in 1..=3 {
            let f = f5(d);
            let fixed = f.elements().filter(|&x| f.frobenius(x) == x).count();
            assert_eq!(fixed, 5);
        }
    }

    #[test]
    fn zech_addition_matches_direct() {
        let f = f5(2);
        for a in f.elements() {
            for b in f.elements() {
                let s = f.log_add(f.log_raw(a), f.log_raw(b));
                assert_eq!(s, f.log_raw(f.add(a, b)));
            }
        }
    }

    #[test]
    fn min_poly_is_irreducible_and_vanishes() {
        let f = f5(4);
        for x in [FieldElem(5), FieldElem(77), FieldElem(301)] {
            let m = f.min_poly(x);
            assert_eq!(m.deg(), f.orbit_len(x));
            assert!(m.is_irreducible().unwrap());
            assert!(f.eval_poly(&m, x).is_zero());
        }
    }
}
