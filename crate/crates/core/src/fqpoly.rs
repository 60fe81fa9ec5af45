//! The polynomial ring F_p[t].
//!
//! [`Poly`] is a dense polynomial with ascending coefficients and no trailing
//! zeros. Besides ring arithmetic this module provides the predicates and
//! enumerations the twist families are built from: squarefree and
//! irreducibility tests, monic primes of a given degree in lexicographic
//! order, and the streams `H_{N,C}` / `H_N^*` of squarefree twist conductors.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::ffield::{FieldElem, FieldTable};

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a as u64, (p - 2) as u64, p)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u32) -> u32 {
    let m = p as u64;
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u32
}

/// Dense polynomial over F_p, coefficients ascending.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    p: u32,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(p: u32, coeffs: Vec<u32>) -> Self {
        let mut f = Poly {
            p,
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        };
        f.trim();
        f
    }

    /// Build from signed integers, reducing each modulo p.
    pub fn from_i64(p: u32, coeffs: &[i64]) -> Self {
        let m = p as i64;
        Poly::new(p, coeffs.iter().map(|&c| c.rem_euclid(m) as u32).collect())
    }

    pub fn zero(p: u32) -> Self {
        Poly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        Poly { p, coeffs: vec![1] }
    }

    pub fn constant(p: u32, c: u32) -> Self {
        Poly::new(p, vec![c])
    }

    /// The indeterminate `t`.
    pub fn t(p: u32) -> Self {
        Poly { p, coeffs: vec![0, 1] }
    }

    /// `t - a`, the monic linear prime vanishing at `a`.
    pub fn linear(p: u32, a: u32) -> Self {
        Poly::new(p, vec![(p - a % p) % p, 1])
    }

    /// The monic polynomial of degree `degree` whose lower coefficients are
    /// the base-p digits of `index` (digit `i` is the coefficient of `t^i`).
    /// Increasing `index` walks the monics of that degree in lexicographic
    /// order.
    pub fn monic_from_index(p: u32, degree: usize, mut index: u64) -> Self {
        let mut coeffs = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            coeffs.push((index % p as u64) as u32);
            index /= p as u64;
        }
        coeffs.push(1);
        Poly { p, coeffs }
    }

    /// Inverse of [`Poly::monic_from_index`] for monic input.
    pub fn monic_index(&self) -> u64 {
        let d = self.coeffs.len().saturating_sub(1);
        self.coeffs[..d]
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p as u64 + c as u64)
    }

    /// Dense index of a polynomial of degree `< width`, digit `i` being the
    /// coefficient of `t^i`.
    pub fn from_index(p: u32, width: usize, mut index: u64) -> Self {
        let mut coeffs = Vec::with_capacity(width);
        for _ in 0..width {
            coeffs.push((index % p as u64) as u32);
            index /= p as u64;
        }
        Poly::new(p, coeffs)
    }

    fn trim(&mut self) {
        while let Some(&0) = self.coeffs.last() {
            self.coeffs.pop();
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; for callers that have
    /// already excluded zero.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn scale(&self, c: u32) -> Poly {
        let p = self.p as u64;
        Poly::new(
            self.p,
            self.coeffs.iter().map(|&a| (a as u64 * c as u64 % p) as u32).collect(),
        )
    }

    /// Divide by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    pub fn neg(&self) -> Poly {
        Poly::new(self.p, self.coeffs.iter().map(|&a| (self.p - a) % self.p).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n).map(|i| (self.coeff(i) + other.coeff(i)) % self.p).collect();
        Poly::new(self.p, v)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|i| (self.coeff(i) + self.p - other.coeff(i)) % self.p)
            .collect();
        Poly::new(self.p, v)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.p);
        }
        let p = self.p as u64;
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        Poly::new(self.p, acc.into_iter().map(|c| c as u32).collect())
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut r = Poly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        r
    }

    /// Euclidean division: `self = q * b + r` with `deg r < deg b`.
    pub fn divrem(&self, b: &Poly) -> Result<(Poly, Poly)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p as u64;
        let db = b.coeffs.len() - 1;
        if self.coeffs.len() <= db {
            return Ok((Poly::zero(self.p), self.clone()));
        }
        let inv = inv_mod(b.leading(), self.p) as u64;
        let mut r: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        let mut q = vec![0u32; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db] * inv % p;
            q[k] = c as u32;
            if c == 0 {
                continue;
            }
            for (i, &bc) in b.coeffs.iter().enumerate() {
                r[k + i] = (r[k + i] + p * p - c * bc as u64) % p;
            }
        }
        r.truncate(db);
        Ok((
            Poly::new(self.p, q),
            Poly::new(self.p, r.into_iter().map(|c| c as u32).collect()),
        ))
    }

    pub fn rem(&self, b: &Poly) -> Result<Poly> {
        Ok(self.divrem(b)?.1)
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub(crate) fn div_exact(&self, b: &Poly) -> Poly {
        let (q, r) = self.divrem(b).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, f: &Poly) -> bool {
        !self.is_zero() && f.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn is_coprime(&self, other: &Poly) -> bool {
        self.gcd(other).map(|g| g.is_one()).unwrap_or(false)
    }

    pub fn derivative(&self) -> Poly {
        let p = self.p as u64;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ((i as u64 % p) * c as u64 % p) as u32)
            .collect();
        Poly::new(self.p, v)
    }

    /// Value at a point of the prime field.
    pub fn eval(&self, x: u32) -> u32 {
        let p = self.p as u64;
        self.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p) as u32
    }

    /// `true` iff no prime divides `self` twice.
    ///
    /// When the derivative vanishes identically, `self = g(t^p)` is a p-th
    /// power and hence not squarefree unless constant.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        if self.is_constant() {
            return Ok(true);
        }
        let d = self.derivative();
        if d.is_zero() {
            return Ok(false);
        }
        Ok(self.gcd(&d)?.is_one())
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m).expect("nonzero modulus")
    }

    pub fn powmod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m).expect("nonzero modulus");
        let mut r = Poly::one(self.p).rem(m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                r = r.mulmod(&base, m);
            }
            base = base.mulmod(&base, m);
            e >>= 1;
        }
        r
    }

    /// Rabin's test: `t^{p^d} = t mod f` and `gcd(t^{p^{d/r}} - t, f) = 1`
    /// for every prime `r | d`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let d = match self.degree() {
            None => return Err(Error::ZeroInput),
            Some(0) => return Err(Error::ConstantInput),
            Some(d) => d,
        };
        if d == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let t = Poly::t(self.p);
        // frob[k] = t^{p^k} mod f
        let mut frob = Vec::with_capacity(d + 1);
        frob.push(t.rem(&f)?);
        for k in 1..=d {
            let prev: &Poly = &frob[k - 1];
            frob.push(prev.powmod(self.p as u128, &f));
        }
        if frob[d] != t.rem(&f)? {
            return Ok(false);
        }
        for r in prime_factors(d as u64) {
            let h = frob[d / r as usize].sub(&t);
            if !f.gcd(&h)?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Squarefree decomposition `f = c * prod g_i^{m_i}` with monic pairwise
    /// coprime squarefree `g_i`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Poly, u32)>> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let f = self.monic();
        let mut out = Vec::new();
        sff(&f, 1, &mut out);
        Ok(out)
    }

    /// Complete factorization into monic primes with multiplicities, sorted
    /// in lexicographic order. Intended for the small degrees used here.
    pub fn factor(&self) -> Result<Vec<(Poly, u32)>> {
        let mut out: BTreeMap<Poly, u32> = BTreeMap::new();
        for (g, m) in self.squarefree_decomposition()? {
            for (h, d) in distinct_degree(&g) {
                for prime in equal_degree(&h, d) {
                    *out.entry(prime).or_insert(0) += m;
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Parse the comma-separated ascending text form, e.g. `"1,0,3"` for
    /// `3t^2 + 1`. Negative entries are reduced modulo p.
    pub fn parse(p: u32, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::PolyParse(s.to_string()));
        }
        let coeffs = s
            .split(',')
            .map(|tok| tok.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::PolyParse(s.to_string()))?;
        Ok(Poly::from_i64(p, &coeffs))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mobius(mut n: u64) -> i64 {
    let mut k = 0;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            k += 1;
        }
        d += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of monic irreducibles of degree `d` over F_q:
/// `(1/d) * sum_{e | d} mu(e) q^{d/e}`.
pub fn necklace_count(q: u64, d: usize) -> u64 {
    let d64 = d as u64;
    let total: i128 = (1..=d64)
        .filter(|e| d64.is_multiple_of(*e))
        .map(|e| mobius(e) as i128 * (q as i128).pow((d64 / e) as u32))
        .sum();
    (total / d as i128) as u64
}

fn sff(f: &Poly, scale: u32, out: &mut Vec<(Poly, u32)>) {
    let p = f.p;
    if f.is_constant() {
        return;
    }
    let fd = f.derivative();
    let mut c = f.gcd(&fd).expect("f nonzero");
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c).expect("w nonzero");
        let fac = w.div_exact(&y);
        if !fac.is_one() {
            out.push((fac, i * scale));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if !c.is_one() {
        // c = g(t^p); over F_p the p-th root just thins the exponents.
        let root: Vec<u32> = c.coeffs.iter().step_by(p as usize).copied().collect();
        sff(&Poly::new(p, root), scale * p, out);
    }
}

/// Splits a squarefree monic polynomial into products of its prime factors
/// of equal degree: returns `(product, degree)` pairs.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let t = Poly::t(p);
    let mut h = t.rem(&rest).expect("nonzero");
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.powmod(p as u128, &rest);
        let g = rest.gcd(&h.sub(&t)).expect("nonzero");
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest).expect("nonzero");
            out.push((g, d));
        }
        d += 1;
    }
    if !rest.is_constant() {
        let d = rest.deg();
        out.push((rest, d));
    }
    out
}

/// Cantor-Zassenhaus splitting with a deterministic sequence of trial
/// polynomials.
fn equal_degree(f: &Poly, d: usize) -> Vec<Poly> {
    if f.deg() == d {
        return vec![f.clone()];
    }
    let p = f.p;
    let exp = ((p as u128).pow(d as u32) - 1) / 2;
    let n = f.deg();
    let mut idx = p as u64;
    loop {
        let a = Poly::from_index(p, n, idx);
        idx += 1;
        if a.is_constant() {
            continue;
        }
        let b = a.powmod(exp, f).sub(&Poly::one(p));
        if b.is_zero() {
            continue;
        }
        let g = f.gcd(&b).expect("nonzero");
        if !g.is_one() && g.deg() < n {
            let mut out = equal_degree(&g, d);
            out.extend(equal_degree(&f.div_exact(&g), d));
            out.sort();
            return out;
        }
    }
}

/// Monic irreducibles of degree `d`, in lexicographic order.
pub fn iter_primes(p: u32, d: usize) -> impl Iterator<Item = Poly> {
    let count = (p as u64).pow(d as u32);
    (0..count)
        .map(move |i| Poly::monic_from_index(p, d, i))
        .filter(|f| f.is_irreducible().unwrap_or(false))
}

/// Lazily built, shared lists of the monic primes of each degree.
#[derive(Debug)]
pub struct PrimeIndex {
    p: u32,
    by_degree: Mutex<BTreeMap<usize, Arc<Vec<Poly>>>>,
}

impl PrimeIndex {
    pub fn new(p: u32) -> Self {
        PrimeIndex {
            p,
            by_degree: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self, d: usize) -> Arc<Vec<Poly>> {
        if let Some(v) = self.by_degree.lock().expect("prime index lock").get(&d) {
            return Arc::clone(v);
        }
        let list = Arc::new(iter_primes(self.p, d).collect::<Vec<_>>());
        let mut guard = self.by_degree.lock().expect("prime index lock");
        Arc::clone(guard.entry(d).or_insert(list))
    }
}

/// Stream over the squarefree monic `D` of degree `N` coprime to a modulus,
/// optionally restricted to one residue class. Iterates in lexicographic
/// order and can be split into disjoint lexicographic ranges.
#[derive(Clone, Debug)]
pub struct FamilyIter {
    p: u32,
    degree: usize,
    modulus: Poly,
    class: Option<Poly>,
    next: u64,
    end: u64,
}

/// The family `H_{N,C}` (or `H_N^*` when `class` is `None`).
pub fn iter_family(degree: usize, modulus: &Poly, class: Option<&Poly>) -> Result<FamilyIter> {
    let p = modulus.p;
    if modulus.is_zero() {
        return Err(Error::ZeroInput);
    }
    if degree == 0 {
        return Err(Error::ConstantInput);
    }
    let class = match class {
        Some(c) => {
            let c = c.rem(modulus)?;
            if !modulus.is_constant() && !c.is_coprime(modulus) {
                return Err(Error::NonCoprimeClass);
            }
            Some(c)
        }
        None => None,
    };
    Ok(FamilyIter {
        p,
        degree,
        modulus: modulus.monic(),
        class,
        next: 0,
        end: (p as u64).pow(degree as u32),
    })
}

impl FamilyIter {
    /// Partition the remaining range into at most `parts` contiguous pieces.
    pub fn split(&self, parts: usize) -> Vec<FamilyIter> {
        let parts = parts.max(1) as u64;
        let len = self.end - self.next;
        let step = len.div_ceil(parts).max(1);
        let mut out = Vec::new();
        let mut start = self.next;
        while start < self.end {
            let end = (start + step).min(self.end);
            out.push(FamilyIter {
                next: start,
                end,
                ..self.clone()
            });
            start = end;
        }
        out
    }

    fn accepts(&self, d: &Poly) -> bool {
        if !self.modulus.is_constant() {
            match &self.class {
                Some(c) => {
                    if d.rem(&self.modulus).expect("nonzero") != *c {
                        return false;
                    }
                }
                None => {
                    if !d.is_coprime(&self.modulus) {
                        return false;
                    }
                }
            }
        }
        d.is_squarefree().unwrap_or(false)
    }
}

impl Iterator for FamilyIter {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        while self.next < self.end {
            let d = Poly::monic_from_index(self.p, self.degree, self.next);
            self.next += 1;
            if self.accepts(&d) {
                return Some(d);
            }
        }
        None
    }
}

/// Reduction map `F_p[t] -> F_p[t]/(P)`, realized inside a field table of
/// degree `deg P` by sending `t` to the least root of `P`.
#[derive(Clone, Copy, Debug)]
pub struct ResidueMap<'a> {
    table: &'a FieldTable,
    root: FieldElem,
}

pub fn residue_map<'a>(prime: &Poly, table: &'a FieldTable) -> Result<ResidueMap<'a>> {
    let d = prime.degree().ok_or(Error::ZeroInput)?;
    if d != table.degree() {
        return Err(Error::DegreeMismatch {
            expected: table.degree(),
            found: d,
        });
    }
    let root = table
        .elements()
        .find(|&x| table.eval_poly(prime, x).is_zero())
        .ok_or_else(|| Error::NotIrreducible(prime.to_string()))?;
    Ok(ResidueMap { table, root })
}

impl<'a> ResidueMap<'a> {
    pub fn root(&self) -> FieldElem {
        self.root
    }

    pub fn table(&self) -> &'a FieldTable {
        self.table
    }

    pub fn map(&self, f: &Poly) -> FieldElem {
        self.table.eval_poly(f, self.root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5(c: &[i64]) -> Poly {
        Poly::from_i64(5, c)
    }

    #[test]
    fn divrem_examples() {
        let (q, r) = p5(&[1, 0, 1]).divrem(&Poly::t(5)).unwrap();
        assert_eq!((q, r), (Poly::t(5), Poly::one(5)));
        let f = p5(&[3, 2, 0, 4]);
        assert_eq!(f.divrem(&f).unwrap(), (Poly::one(5), Poly::zero(5)));
        let (_, r) = p5(&[3, 0, 0, 1]).divrem(&p5(&[-1, 1])).unwrap();
        assert_eq!(r, Poly::constant(5, 4));
        assert_eq!(f.divrem(&Poly::zero(5)), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p5(&[-1, 0, 1]).gcd(&p5(&[-1, 1])).unwrap(), p5(&[-1, 1]));
        assert_eq!(p5(&[2, 0, 3]).gcd(&Poly::zero(5)).unwrap(), p5(&[4, 0, 1]));
        assert!(p5(&[3, 0, 0, 1]).gcd(&Poly::t(5)).unwrap().is_one());
        assert_eq!(Poly::zero(5).gcd(&Poly::zero(5)), Err(Error::BothZero));
    }

    #[test]
    fn squarefree_examples() {
        assert!(!p5(&[0, 0, 1]).is_squarefree().unwrap());
        assert!(p5(&[3, 0, 0, 1]).is_squarefree().unwrap());
        assert!(Poly::constant(5, 3).is_squarefree().unwrap());
        // t^5 + 1 = (t + 1)^5 has zero derivative
        assert!(!p5(&[1, 0, 0, 0, 0, 1]).is_squarefree().unwrap());
        assert_eq!(Poly::zero(5).is_squarefree(), Err(Error::ZeroInput));
    }

    #[test]
    fn irreducible_examples() {
        assert!(Poly::t(5).is_irreducible().unwrap());
        assert!(p5(&[2, 0, 1]).is_irreducible().unwrap());
        assert!(!p5(&[-1, 0, 1]).is_irreducible().unwrap());
        assert_eq!(Poly::one(5).is_irreducible(), Err(Error::ConstantInput));
    }

    #[test]
    fn prime_counts_match_necklace_formula() {
        let linear: Vec<Poly> = iter_primes(5, 1).collect();
        assert_eq!(linear, (0..5).map(|a| p5(&[a, 1])).collect::<Vec<_>>());
        assert_eq!(iter_primes(5, 2).count(), 10);
        assert_eq!(iter_primes(5, 3).count(), 40);
        for d in 1..=4 {
            assert_eq!(iter_primes(5, d).count() as u64, necklace_count(5, d));
        }
    }

    #[test]
    fn family_small_cases() {
        let one = Poly::one(5);
        assert_eq!(iter_family(1, &one, None).unwrap().count(), 5);
        assert_eq!(iter_family(2, &one, None).unwrap().count(), 20);
        let m = p5(&[3, 0, 0, 1]);
        assert_eq!(
            iter_family(2, &m, Some(&p5(&[2, 1]))).err(),
            Some(Error::NonCoprimeClass)
        );
    }

    #[test]
    fn family_split_covers_range_in_order() {
        let it = iter_family(3, &p5(&[3, 0, 0, 1]), None).unwrap();
        let whole: Vec<Poly> = it.clone().collect();
        let pieces: Vec<Poly> = it.split(7).into_iter().flatten().collect();
        assert_eq!(whole, pieces);
        assert!(whole.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn factor_recovers_product() {
        let f = p5(&[3, 0, 0, 1]);
        let fac = f.factor().unwrap();
        assert_eq!(fac, vec![(p5(&[2, 1]), 1), (p5(&[4, 3, 1]), 1)]);
        let g = p5(&[0, 1])
            .pow(3)
            .mul(&p5(&[2, 0, 1]).pow(2))
            .mul(&p5(&[1, 0, 0, 0, 0, 1]));
        let fac = g.factor().unwrap();
        let back = fac.iter().fold(Poly::one(5), |acc, (q, m)| acc.mul(&q.pow(*m)));
        assert_eq!(back, g);
        assert!(fac.iter().all(|(q, _)| q.is_irreducible().unwrap()));
    }

    #[test]
    fn text_form_round_trips() {
        let f = Poly::parse(5, "1,0,3").unwrap();
        assert_eq!(f, p5(&[1, 0, 3]));
        assert_eq!(f.to_string(), "1,0,3");
        assert_eq!(Poly::parse(5, "-1, 1").unwrap(), p5(&[4, 1]));
        assert_eq!(Poly::zero(5).to_string(), "0");
        assert!(Poly::parse(5, "1,x").is_err());
    }

    #[test]
    fn lexicographic_order() {
        let mut v = vec![p5(&[0, 0, 1]), p5(&[4, 1]), p5(&[1, 1]), p5(&[4, 0, 1]), p5(&[3, 1, 1])];
        v.sort();
        assert_eq!(
            v,
            vec![p5(&[1, 1]), p5(&[4, 1]), p5(&[0, 0, 1]), p5(&[4, 0, 1]), p5(&[3, 1, 1])]
        );
    }
}
