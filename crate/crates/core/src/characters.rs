//! Dirichlet characters on F_p[t]: the quadratic symbols `chi_D` and
//! order-l residue symbols, their L-polynomials, Gauss sums and root numbers.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fqpoly::{inv_mod, pow_mod, Poly};
use crate::roots::{aberth, int_roots, IntPoly};

/// Legendre symbol of a prime-field element.
pub fn legendre(a: u32, p: u32) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a as u64, (p as u64 - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// `(-1)^{deg a * deg b * (p-1)/2}`, the sign in quadratic reciprocity.
fn reciprocity_sign(p: u32, da: usize, db: usize) -> i32 {
    if (da * db) % 2 == 1 && (p - 1) / 2 % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Jacobi symbol `(f / d)` for monic `d`, by Euclidean descent.
///
/// Uses `(c / d) = legendre(c)^{deg d}` for constants and, for monic coprime
/// `a`, `b`: `(a / b) = (b / a) (-1)^{deg a deg b (p-1)/2}`.
pub fn jacobi(f: &Poly, d: &Poly) -> i32 {
    let p = d.p();
    let mut b = d.clone();
    let mut a = f.rem(&b).expect("nonzero modulus");
    let mut result = 1;
    loop {
        if b.is_one() {
            return result;
        }
        if a.is_zero() {
            return 0;
        }
        let c = a.leading();
        if c != 1 {
            let l = legendre(c, p);
            if b.deg() % 2 == 1 {
                result *= l;
            }
            a = a.scale(inv_mod(c, p));
        }
        if a.is_one() {
            return result;
        }
        result *= reciprocity_sign(p, a.deg(), b.deg());
        let r = b.rem(&a).expect("nonzero");
        b = a;
        a = r;
    }
}

/// Slow reference: `(f mod P)^{(p^d - 1)/2} mod P` for each prime `P | d`.
pub fn jacobi_slow(f: &Poly, d: &Poly) -> i32 {
    let p = d.p();
    let mut result = 1;
    for (prime, mult) in d.factor().expect("nonzero") {
        let e = ((p as u128).pow(prime.deg() as u32) - 1) / 2;
        let r = f.powmod(e, &prime);
        let s: i32 = if r.is_zero() {
            0
        } else if r.is_one() {
            1
        } else {
            -1
        };
        result *= s.pow(mult);
    }
    result
}

/// Parity of a Dirichlet character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// A Dirichlet character of finite order with values in the l-th roots of
/// unity, described by a discrete index.
pub trait Character: Sync {
    fn p(&self) -> u32;
    fn conductor(&self) -> &Poly;
    fn order(&self) -> u32;
    /// `Some(k)` when `chi(f) = exp(2 pi i k / order)`, `None` when `chi(f) = 0`.
    fn index(&self, f: &Poly) -> Option<u32>;

    fn value(&self, f: &Poly) -> Complex64 {
        match self.index(f) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => root_of_unity(k, self.order()),
        }
    }

    /// Index on the constant `a`; constants are never zero divisors.
    fn const_index(&self, a: u32) -> u32 {
        self.index(&Poly::constant(self.p(), a)).expect("unit")
    }

    /// Even iff trivial on F_p^*.
    fn parity(&self) -> Parity {
        let p = self.p();
        if (1..p).all(|a| self.const_index(a) == 0) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

pub fn root_of_unity(k: u32, order: u32) -> Complex64 {
    match (k % order) * 4 {
        0 => Complex64::new(1.0, 0.0),
        x if x == 2 * order => Complex64::new(-1.0, 0.0),
        _ => Complex64::from_polar(1.0, TAU * k as f64 / order as f64),
    }
}

/// The quadratic character `chi_D(f) = (f / D)` of a monic squarefree `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadChar {
    d: Poly,
}

impl QuadChar {
    pub fn new(d: Poly) -> Result<Self> {
        if d.is_zero() || !d.is_monic() || !d.is_squarefree()? {
            return Err(Error::BadConductor(d.to_string()));
        }
        Ok(QuadChar { d })
    }

    pub fn eval(&self, f: &Poly) -> i32 {
        jacobi(f, &self.d)
    }
}

impl Character for QuadChar {
    fn p(&self) -> u32 {
        self.d.p()
    }

    fn conductor(&self) -> &Poly {
        &self.d
    }

    fn order(&self) -> u32 {
        2
    }

    fn index(&self, f: &Poly) -> Option<u32> {
        match self.eval(f) {
            0 => None,
            1 => Some(0),
            _ => Some(1),
        }
    }

    fn parity(&self) -> Parity {
        // chi_D(a) = legendre(a)^{deg D}
        if self.d.deg().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Order-l character `prod_Q (f / Q)_l^{i_Q}` with `l | p - 1`.
///
/// The l-th power residue symbol `(f / Q)_l` is the root of unity
/// `(f mod Q)^{(p^{deg Q} - 1)/l}`, which lies in F_p; it is mapped to
/// `exp(2 pi i k / l)` through `zeta = g1^{(p-1)/l}` for the least
/// primitive root `g1`, the same embedding as `FieldTable::ell_char`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllChar {
    ell: u32,
    conductor: Poly,
    parts: Vec<(Poly, u32)>,
    zeta_powers: Vec<u32>,
}

impl EllChar {
    /// `parts` lists distinct monic primes with exponents in `1..ell`.
    pub fn new(p: u32, ell: u32, mut parts: Vec<(Poly, u32)>) -> Result<Self> {
        if ell < 2 || !(p - 1).is_multiple_of(ell) {
            return Err(Error::OrderNotDividing {
                ell,
                group_order: p as u64 - 1,
            });
        }
        parts.sort();
        let mut conductor = Poly::one(p);
        for (i, (q, e)) in parts.iter().enumerate() {
            let bad = *e == 0
                || *e >= ell
                || !q.is_monic()
                || !q.is_irreducible().unwrap_or(false)
                || (i > 0 && parts[i - 1].0 == *q);
            if bad {
                return Err(Error::BadConductor(q.to_string()));
            }
            conductor = conductor.mul(q);
        }
        let g1 = (2..p)
            .find(|&g| {
                crate::fqpoly::prime_factors(p as u64 - 1)
                    .iter()
                    .all(|&r| pow_mod(g as u64, (p as u64 - 1) / r, p) != 1)
            })
            .expect("primitive root");
        let zeta = pow_mod(g1 as u64, ((p - 1) / ell) as u64, p);
        let zeta_powers = (0..ell).map(|k| pow_mod(zeta as u64, k as u64, p)).collect();
        Ok(EllChar {
            ell,
            conductor,
            parts,
            zeta_powers,
        })
    }

    pub fn parts(&self) -> &[(Poly, u32)] {
        &self.parts
    }

    /// The complex conjugate character.
    pub fn conj(&self) -> EllChar {
        let parts = self.parts.iter().map(|(q, e)| (q.clone(), self.ell - e)).collect();
        EllChar { parts, ..self.clone() }
    }

    /// Residue symbol index of `f` at a single prime `q`.
    pub fn symbol(&self, f: &Poly, q: &Poly) -> Option<u32> {
        let p = q.p();
        let e = ((p as u128).pow(q.deg() as u32) - 1) / self.ell as u128;
        let r = f.powmod(e, q);
        if r.is_zero() {
            return None;
        }
        let c = r.coeff(0);
        debug_assert!(r.is_constant());
        Some(
            self.zeta_powers
                .iter()
                .position(|&z| z == c)
                .expect("l-th root of unity") as u32,
        )
    }
}

impl Character for EllChar {
    fn p(&self) -> u32 {
        self.conductor.p()
    }

    fn conductor(&self) -> &Poly {
        &self.conductor
    }

    fn order(&self) -> u32 {
        self.ell
    }

    fn index(&self, f: &Poly) -> Option<u32> {
        let mut k = 0;
        for (q, e) in &self.parts {
            k += self.symbol(f, q)? * e;
        }
        Some(k % self.ell)
    }
}

/// L-polynomial of a primitive character of conductor F.
#[derive(Clone, Debug)]
pub struct DirichletLPoly {
    /// `c_h = sum_{deg D = h, monic} chi(D)`, `h = 0..deg F - 1`.
    pub coeffs: Vec<Complex64>,
    /// Exact coefficients when the character is quadratic.
    pub int_coeffs: Option<Vec<i64>>,
    /// Number of zeros on `|u| = q^{-1/2}`.
    pub degree: usize,
    /// Order of the forced zero at `u = 1`.
    pub lambda: usize,
    pub parity: Parity,
    /// `L(u) / (1 - u)^lambda`.
    pub reduced: Vec<Complex64>,
    /// Roots of the reduced polynomial in `u`.
    pub roots: Vec<Complex64>,
    /// Angles with inverse roots `q^{1/2} e^{i theta}`, in `[0, 2 pi)`.
    pub angles: Vec<f64>,
}

impl DirichletLPoly {
    /// `max | |root| q^{1/2} - 1 |` over the roots away from `u = 1`.
    pub fn rh_error(&self, q: u32) -> f64 {
        let s = (q as f64).sqrt();
        self.roots
            .iter()
            .map(|r| (r.norm() * s - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Root number from the root product, `prod -e^{i theta_j}`, read off as
    /// the top coefficient of the reduced polynomial over `q^{M/2}`.
    pub fn omega(&self, q: u32) -> Complex64 {
        let m = self.degree;
        self.reduced[m] / (q as f64).powf(m as f64 / 2.0)
    }
}

fn monics(p: u32, h: usize) -> impl Iterator<Item = Poly> {
    (0..(p as u64).pow(h as u32)).map(move |i| Poly::monic_from_index(p, h, i))
}

/// `sum_{D monic, deg D = h} chi(D)` as a multiset of indices.
fn monic_index_counts<C: Character + ?Sized>(chi: &C, h: usize) -> Vec<i64> {
    let mut counts = vec![0i64; chi.order() as usize];
    for d in monics(chi.p(), h) {
        if let Some(k) = chi.index(&d) {
            counts[k as usize] += 1;
        }
    }
    counts
}

fn counts_to_complex(counts: &[i64]) -> Complex64 {
    let order = counts.len() as u32;
    counts
        .iter()
        .enumerate()
        .map(|(k, &c)| root_of_unity(k as u32, order) * c as f64)
        .sum()
}

/// Coefficients `sum_{B in M_j} chi(B)` for `j = 0..=h_max`.
pub fn monic_sums<C: Character + ?Sized>(chi: &C, h_max: usize) -> Vec<Complex64> {
    (0..=h_max)
        .map(|h| counts_to_complex(&monic_index_counts(chi, h)))
        .collect()
}

/// The L-polynomial `sum_h (sum_{D in M_h} chi(D)) u^h` by direct enumeration.
///
/// The vanishing of the coefficient at `h = deg F` is checked, not assumed.
pub fn char_l_poly<C: Character + ?Sized>(chi: &C) -> Result<DirichletLPoly> {
    let f = chi.conductor();
    let n = f.degree().ok_or(Error::TrivialConductor)?;
    if n == 0 {
        return Err(Error::TrivialConductor);
    }
    let p = chi.p();
    let counts: Vec<Vec<i64>> = (0..=n).map(|h| monic_index_counts(chi, h)).collect();
    let tail = counts_to_complex(&counts[n]);
    if tail.norm() > 1e-9 {
        return Err(Error::NonVanishingTail {
            index: n,
            degree: n - 1,
        });
    }
    let coeffs: Vec<Complex64> = counts[..n].iter().map(|c| counts_to_complex(c)).collect();
    let int_coeffs = (chi.order() == 2).then(|| counts[..n].iter().map(|c| c[0] - c[1]).collect::<Vec<i64>>());
    let parity = chi.parity();
    let lambda = usize::from(parity == Parity::Even);
    let degree = n - 1 - lambda;

    // divide by (1 - u) when even: b_j = sum_{i <= j} c_i
    let reduced: Vec<Complex64> = if lambda == 1 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut b: Vec<Complex64> = coeffs
            .iter()
            .map(|&c| {
                acc += c;
                acc
            })
            .collect();
        b.truncate(degree + 1);
        b
    } else {
        coeffs.clone()
    };

    let sq = (p as f64).sqrt();
    let roots: Vec<Complex64> = match &int_coeffs {
        Some(ic) if degree > 0 => {
            let mut r: Vec<i128> = Vec::with_capacity(degree + 1);
            let mut acc = 0i128;
            for &c in ic.iter() {
                if lambda == 1 {
                    acc += c as i128;
                    r.push(acc);
                } else {
                    r.push(c as i128);
                }
            }
            r.truncate(degree + 1);
            // roots in v = q u of the polynomial in u; |u| = q^{-1/2} maps to
            // |v| = q^{1/2}, so rescale by q^{1/2} afterwards
            int_roots(&IntPoly::from_i128(&r), sq)?
                .into_iter()
                .flat_map(|(z, m)| std::iter::repeat_n(z / sq, m as usize))
                .collect()
        }
        _ => {
            let scaled: Vec<Complex64> = reduced.iter().enumerate().map(|(j, c)| c / sq.powi(j as i32)).collect();
            aberth(&scaled)?.into_iter().map(|z| z / sq).collect()
        }
    };
    let mut angles: Vec<f64> = roots.iter().map(|z| (-(z * sq).arg()).rem_euclid(TAU)).collect();
    angles.sort_by(f64::total_cmp);
    Ok(DirichletLPoly {
        coeffs,
        int_coeffs,
        degree,
        lambda,
        parity,
        reduced,
        roots,
        angles,
    })
}

/// `t^{-1}` Laurent coefficient of `a / f` at infinity, by expanding `1/f` as
/// a power series in `1/t`.
pub fn laurent_a1(a: &Poly, f: &Poly) -> Result<u32> {
    let n = f.degree().ok_or(Error::ZeroDenominator)?;
    let p = f.p() as i64;
    let da = match a.degree() {
        None => return Ok(0),
        Some(d) => d,
    };
    if da + 1 < n {
        return Ok(0);
    }
    // 1/f = t^{-n} sum_k s_k t^{-k}
    let len = da + 2 - n;
    let inv_lead = inv_mod(f.leading(), f.p()) as i64;
    let mut s = vec![0i64; len];
    for k in 0..len {
        let mut acc = if k == 0 { 1 } else { 0 };
        for i in 1..=k.min(n) {
            acc -= f.coeff(n - i) as i64 * s[k - i];
        }
        s[k] = (acc.rem_euclid(p) * inv_lead).rem_euclid(p);
    }
    // coefficient of t^{-1}: j - n - k = -1
    let mut a1 = 0i64;
    for j in (n - 1)..=da {
        a1 += a.coeff(j) as i64 * s[j + 1 - n];
    }
    Ok(a1.rem_euclid(p) as u32)
}

/// Hayes' additive character `e_q(a / f) = exp(2 pi i a_1 / p)`.
pub fn e_q(a: &Poly, f: &Poly) -> Result<Complex64> {
    let a1 = laurent_a1(a, f)?;
    Ok(root_of_unity(a1, f.p()))
}

/// Gauss sum data of a primitive character.
#[derive(Clone, Debug)]
pub struct GaussData {
    pub g: Complex64,
    pub tau: Complex64,
    /// Root number from the Gauss sum.
    pub omega: Complex64,
    /// Root number from the L-polynomial's roots.
    pub omega_roots: Complex64,
    pub parity: Parity,
    /// `sigma_chi(k)` for `k = 0..deg F`.
    pub sigma: Vec<f64>,
}

impl GaussData {
    pub fn omega_mismatch(&self) -> f64 {
        (self.omega - self.omega_roots).norm()
    }
}

/// Default cap on `deg F` for Gauss sums (the sum has `p^{deg F}` terms).
pub const GAUSS_DEGREE_BUDGET: usize = 6;

pub fn sigma_table(parity: Parity, q: u32, len: usize) -> Vec<f64> {
    (0..len)
        .map(|k| match (parity, k) {
            (Parity::Odd, 0) => (q as f64).sqrt(),
            (Parity::Odd, _) => 0.0,
            (Parity::Even, 0) => -1.0,
            (Parity::Even, _) => q as f64 - 1.0,
        })
        .collect()
}

/// `G(chi) = sum_{deg A < deg F} chi(A) e_q(A/F)`, `tau(chi)`, and `omega`
/// computed both from `G` and from the root product.
pub fn gauss_sum<C: Character + ?Sized>(chi: &C) -> Result<GaussData> {
    gauss_sum_with(chi, GAUSS_DEGREE_BUDGET)
}

pub fn gauss_sum_with<C: Character + ?Sized>(chi: &C, max_degree: usize) -> Result<GaussData> {
    let f = chi.conductor();
    let n = f.degree().ok_or(Error::TrivialConductor)?;
    if n == 0 {
        return Err(Error::TrivialConductor);
    }
    let p = chi.p();
    if n > max_degree {
        return Err(Error::BudgetExceeded {
            what: "Gauss sum terms",
            requested: (p as u128).pow(n as u32),
            limit: (p as u128).pow(max_degree as u32),
        });
    }
    let mut g = Complex64::new(0.0, 0.0);
    for i in 1..(p as u64).pow(n as u32) {
        let a = Poly::from_index(p, n, i);
        let v = chi.value(&a);
        if v.norm() > 0.0 {
            g += v * e_q(&a, f)?;
        }
    }
    let tau: Complex64 = (1..p)
        .map(|a| root_of_unity(chi.const_index(a), chi.order()) * root_of_unity(a, p))
        .sum();
    let lp = char_l_poly(chi)?;
    let q = p as f64;
    let omega = match lp.parity {
        Parity::Odd => g / (tau * q.powf((n as f64 - 1.0) / 2.0)),
        Parity::Even => g / q.powf(n as f64 / 2.0),
    };
    Ok(GaussData {
        g,
        tau,
        omega,
        omega_roots: lp.omega(p),
        parity: lp.parity,
        sigma: sigma_table(lp.parity, p, n),
    })
}

/// Absolute difference between the two sides of the duality identity
///
/// `sum_{B in M_j} chi(B) = omega q^{j - deg F/2} sum_k sigma(k) sum_{B in M_{deg F - 1 - j - k}} conj(chi)(B)`
///
/// with `omega` taken from the Gauss sum.
pub fn duality_residual<C: Character + ?Sized>(chi: &C, gauss: &GaussData, j: usize) -> f64 {
    let n = chi.conductor().deg();
    let q = chi.p() as f64;
    let sums = monic_sums(chi, n.max(j));
    let lhs = sums[j];
    if j >= n {
        return lhs.norm();
    }
    let mut rhs = Complex64::new(0.0, 0.0);
    for k in 0..=(n - 1 - j) {
        rhs += gauss.sigma[k] * sums[n - 1 - j - k].conj();
    }
    rhs *= gauss.omega * q.powf(j as f64 - n as f64 / 2.0);
    (lhs - rhs).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5(c: &[i64]) -> Poly {
        Poly::from_i64(5, c)
    }

    #[test]
    fn quad_eval_examples() {
        let chi = QuadChar::new(Poly::t(5)).unwrap();
        assert_eq!(chi.eval(&p5(&[2, 1])), -1);
        assert_eq!(chi.eval(&p5(&[0, 3])), 0);
        assert!(QuadChar::new(p5(&[0, 0, 1])).is_err());
    }

    #[test]
    fn fast_symbol_matches_slow_on_grid() {
        let ds = [p5(&[3, 0, 0, 1]), p5(&[1, 2, 0, 1]), p5(&[2, 0, 1]), p5(&[0, 1, 1])];
        for d in &ds {
            for i in 0..625 {
                let f = Poly::from_index(5, 4, i);
                assert_eq!(jacobi(&f, d), jacobi_slow(&f, d), "f={f} d={d}");
            }
        }
    }

    #[test]
    fn ell_eval_examples() {
        let chi = EllChar::new(7, 3, vec![(Poly::t(7), 1)]).unwrap();
        assert_eq!(chi.index(&Poly::one(7)), Some(0));
        assert_eq!(chi.index(&Poly::from_i64(7, &[0, 2])), None);
        // 3^2 = 2 = zeta, zeta = 3^{(7-1)/3} = 2
        assert_eq!(chi.index(&Poly::from_i64(7, &[3, 1])), Some(1));
        assert_eq!(chi.parity(), Parity::Odd);
        assert!(EllChar::new(5, 3, vec![(Poly::t(5), 1)]).is_err());
    }

    #[test]
    fn l_poly_degree_one_conductor_is_trivial() {
        let lp = char_l_poly(&QuadChar::new(Poly::t(5)).unwrap()).unwrap();
        assert_eq!(lp.degree, 0);
        assert_eq!(lp.int_coeffs, Some(vec![1]));
        assert!(char_l_poly(&QuadChar::new(Poly::one(5)).unwrap()).is_err());
    }

    #[test]
    fn even_character_has_forced_zero() {
        let lp = char_l_poly(
            &QuadChar::new(p5(&[1, 0, 1, 0, 1])).unwrap_or_else(|_| QuadChar::new(p5(&[2, 0, 0, 1, 1])).unwrap()),
        )
        .unwrap();
        assert_eq!(lp.parity, Parity::Even);
        let at_one: Complex64 = lp.coeffs.iter().sum();
        assert!(at_one.norm() < 1e-12);
        assert!(lp.rh_error(5) < 1e-9);
    }

    #[test]
    fn e_q_examples() {
        let e = |a: &[i64], f: &[i64]| e_q(&p5(a), &p5(f)).unwrap();
        assert!((e(&[1], &[0, 1]) - root_of_unity(1, 5)).norm() < 1e-15);
        assert!((e(&[1], &[0, 0, 1]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((e(&[2, 1], &[0, 1]) - root_of_unity(2, 5)).norm() < 1e-15);
        assert_eq!(e_q(&p5(&[1]), &Poly::zero(5)), Err(Error::ZeroDenominator));
    }

    #[test]
    fn laurent_coefficient_matches_remainder_formula() {
        // a_1 = (A mod F)_{deg F - 1} / lc(F)
        for fi in [7u64, 31, 140, 312] {
            let f = Poly::from_index(5, 4, fi);
            if f.deg() == 0 {
                continue;
            }
            for ai in 0..400 {
                let a = Poly::from_index(5, 4, ai);
                let r = a.rem(&f).unwrap();
                let expect = r.coeff(f.deg() - 1) as u64 * inv_mod(f.leading(), 5) as u64 % 5;
                assert_eq!(laurent_a1(&a, &f).unwrap() as u64, expect);
            }
        }
    }

    #[test]
    fn quadratic_gauss_sum_of_t() {
        let gd = gauss_sum(&QuadChar::new(Poly::t(5)).unwrap()).unwrap();
        assert!((gd.g.norm() - 5f64.sqrt()).abs() < 1e-12);
        assert!((gd.omega - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        assert_eq!(gd.sigma[0], 5f64.sqrt());
    }

    #[test]
    fn duality_for_degree_two_quadratic() {
        let chi = QuadChar::new(p5(&[2, 0, 1])).unwrap();
        let gd = gauss_sum(&chi).unwrap();
        assert_eq!(gd.parity, Parity::Even);
        assert_eq!(gd.sigma, vec![-1.0, 4.0]);
        for j in 0..3 {
            assert!(duality_residual(&chi, &gd, j) < 1e-8);
        }
    }

    #[test]
    fn cubic_duality_and_omega() {
        let q = Poly::from_i64(7, &[1, 0, 1]);
        assert!(q.is_irreducible().unwrap());
        for e in 1..3 {
            let chi = EllChar::new(7, 3, vec![(q.clone(), e)]).unwrap();
            let gd = gauss_sum(&chi).unwrap();
            assert!(gd.omega_mismatch() < 1e-9);
            assert!((gd.omega.norm() - 1.0).abs() < 1e-9);
            for j in 0..3 {
                assert!(duality_residual(&chi, &gd, j) < 1e-8);
            }
        }
    }
}
