//! Polynomial root finding.
//!
//! Integer polynomials are first split into squarefree parts exactly (Musser's
//! algorithm over Z with primitive pseudo-remainder gcds), so the numerical
//! stage only ever sees simple roots. Roots are then located with the
//! Aberth-Ehrlich iteration and polished by Newton steps.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly(c)
    }

    pub fn from_i128(c: &[i128]) -> Self {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn lead(&self) -> &BigInt {
        self.0.last().expect("nonzero polynomial")
    }

    fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        IntPoly(self.0.iter().map(|c| c / &g).collect())
    }

    /// Pseudo-remainder of `self` by `b`.
    fn prem(&self, b: &IntPoly) -> IntPoly {
        let db = b.0.len() - 1;
        let mut r = self.0.clone();
        let lb = b.lead().clone();
        while r.len() > db && !r.is_empty() {
            let lr = r.last().expect("nonempty").clone();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (i, bc) in b.0.iter().enumerate() {
                r[shift + i] -= &lr * bc;
            }
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        IntPoly(r)
    }

    fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Exact quotient by a primitive divisor known to divide `self` over Q.
    fn div_exact(&self, b: &IntPoly) -> IntPoly {
        let db = b.0.len() - 1;
        if self.0.len() <= db {
            return IntPoly(vec![BigInt::one()]);
        }
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); r.len() - db];
        let lb = b.lead();
        for k in (0..q.len()).rev() {
            let (c, rem) = r[k + db].div_rem(lb);
            debug_assert!(rem.is_zero(), "inexact integer division");
            for (i, bc) in b.0.iter().enumerate() {
                r[k + i] -= &c * bc;
            }
            q[k] = c;
        }
        IntPoly::new(q)
    }

    /// Squarefree decomposition: pairs `(a_i, i)` with `self = c * prod a_i^i`,
    /// each `a_i` primitive, squarefree and nonconstant.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.primitive();
        let mut g = f.gcd(&f.derivative());
        let mut r = f.div_exact(&g);
        let mut i = 1;
        while r.degree().unwrap_or(0) > 0 {
            let h = r.gcd(&g);
            let a = r.div_exact(&h);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            g = g.div_exact(&h);
            r = h;
            i += 1;
        }
        out
    }
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

const MAX_ITER: usize = 2000;

/// All complex roots of a polynomial with ascending coefficients.
///
/// Converges quadratically to simple roots; repeated roots are still found
/// but only to roughly half the working precision.
pub fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    // roots at the origin are exact
    let zeros = c.iter().take_while(|x| x.norm() == 0.0).count();
    let c = &c[zeros..];
    let m = c.len() - 1;
    let mut out = vec![Complex64::zero(); zeros];
    if m == 0 {
        return Ok(out);
    }
    let lead = c[m];
    let radius = (0..m)
        .map(|k| (c[k] / lead).norm().powf(1.0 / (m - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..m)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / m as f64 + 0.4))
        .collect();
    let mut converged = false;
    let mut last_step = f64::INFINITY;
    for _ in 0..MAX_ITER {
        let mut worst = 0.0f64;
        for k in 0..m {
            let (p, dp) = horner(c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..m)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::zero()
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let w = ratio / (Complex64::one() - ratio * repulsion);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        last_step = worst;
        if worst < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged && last_step > 1e-7 {
        return Err(Error::RootFinderNonConvergence(n));
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(c, *zk);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *zk -= step;
        }
    }
    out.extend(z);
    Ok(out)
}

/// Roots of an integer polynomial in the variable `v = scale * u`, with
/// multiplicities. The squarefree split is exact, so each factor handed to
/// [`aberth`] has simple roots.
pub fn int_roots(f: &IntPoly, scale: f64) -> Result<Vec<(Complex64, u32)>> {
    let mut out = Vec::new();
    for (a, mult) in f.squarefree_decomposition() {
        let lead = a.lead().to_f64().expect("finite");
        let scaled: Vec<Complex64> = a
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, c)| {
                // normalize by the leading term to keep magnitudes near 1
                let v = c.to_f64().expect("finite") / lead * scale.powi((a.0.len() - 1 - j) as i32);
                Complex64::new(v, 0.0)
            })
            .collect();
        for r in aberth(&scaled)? {
            out.push((r, mult));
        }
    }
    Ok(out)
}
