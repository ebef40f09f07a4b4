//! Exact rational helpers: dyadic base-2 logarithms, interval enclosures for
//! `ln` and `exp`, and an exact comparator for expressions of the form
//! `sum_i a_i * ln(x_i)  <=>  c` with rational `a_i`, `x_i`, `c`.
//!
//! The comparator clears denominators and reduces the question to comparing
//! an exact rational against an integer power of `e`; since `e^k` is
//! irrational for nonzero integer `k`, interval refinement always separates
//! the two sides unless the exponent collapses to zero, in which case the
//! comparison is a plain rational one. No floating point is involved.

use crate::Rat;
use num::bigint::{BigInt, BigUint};
use num::{One, Signed, Zero};
use std::cmp::Ordering;

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_usize(v: usize) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// `base^exp` for integer exponents of either sign (`base != 0` when `exp < 0`).
pub fn rat_pow(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num::pow::pow(base.clone(), exp as usize)
    } else {
        num::pow::pow(base.clone(), (-exp) as usize).recip()
    }
}

pub fn floor_to_isize(r: &Rat) -> isize {
    let f = r.floor();
    let i = f.to_integer();
    use num::ToPrimitive;
    i.to_isize().expect("floor out of isize range")
}

/// Truncated base-2 logarithm of a positive integer with `frac_bits`
/// fractional bits; exact for powers of two. Deterministic on all platforms.
pub fn log2_approx(x: &BigUint, frac_bits: u32) -> Rat {
    assert!(!x.is_zero(), "log2 of zero");
    let k = x.bits() - 1; // floor(log2 x)
    const P: u64 = 96;
    // mantissa m in [2^P, 2^(P+1)), truncating
    let mut m: BigUint = (x << P) >> k;
    let two_p1: BigUint = BigUint::one() << (P + 1);
    let mut frac = BigUint::zero();
    for _ in 0..frac_bits {
        frac <<= 1u32;
        m = (&m * &m) >> P;
        if m >= two_p1 {
            m >>= 1u32;
            frac += 1u32;
        }
    }
    Rat::from_integer(BigInt::from(k))
        + Rat::new(BigInt::from(frac), BigInt::from(BigUint::one() << frac_bits))
}

/// Convenience: `log2_approx` of a `u128` with 64 fractional bits.
pub fn log2_u128(x: u128) -> Rat {
    log2_approx(&BigUint::from(x), 64)
}

#[derive(Debug, Clone)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    fn point(v: Rat) -> Self {
        Interval { lo: v.clone(), hi: v }
    }
    fn width(&self) -> Rat {
        &self.hi - &self.lo
    }
    fn mul(&self, other: &Interval) -> Interval {
        // both operands nonnegative in every use below
        Interval { lo: &self.lo * &other.lo, hi: &self.hi * &other.hi }
    }
    fn recip(&self) -> Interval {
        Interval { lo: self.hi.clone().recip(), hi: self.lo.clone().recip() }
    }
}

/// Enclosure of `e` via its Taylor series with `terms` terms.
fn e_interval(terms: usize) -> Interval {
    let mut sum = Rat::zero();
    let mut term = Rat::one();
    for j in 1..=terms {
        sum += &term;
        term /= rat_usize(j);
    }
    // remaining tail is < 2 * next term
    let hi = &sum + &term * rat_int(2);
    Interval { lo: sum, hi }
}

/// Enclosure of `exp(x)` for rational `x >= 0`.
pub fn exp_interval(x: &Rat, terms: usize) -> Interval {
    assert!(!x.is_negative());
    let k_rat = x.floor();
    let frac = x - &k_rat;
    use num::ToPrimitive;
    let k = k_rat.to_integer().to_usize().expect("exp argument too large");
    let e = e_interval(terms.max(20));
    let mut ipow = Interval::point(Rat::one());
    for _ in 0..k {
        ipow = ipow.mul(&e);
    }
    // Taylor for exp(frac), frac in [0,1): tail < 2*term
    let mut sum = Rat::zero();
    let mut term = Rat::one();
    for j in 1..=terms.max(20) {
        sum += &term;
        term = term * &frac / rat_usize(j);
    }
    let fr = Interval { lo: sum.clone(), hi: &sum + &term * rat_int(2) };
    ipow.mul(&fr)
}

/// Enclosure of `exp(x)` for any rational `x`.
pub fn exp_interval_signed(x: &Rat, terms: usize) -> Interval {
    if x.is_negative() {
        exp_interval(&-x.clone(), terms).recip()
    } else {
        exp_interval(x, terms)
    }
}

/// Compare `sum_i coeff_i * ln(arg_i)` against the rational `c` exactly.
/// Every `arg_i` must be positive.
pub fn cmp_lnsum(terms: &[(Rat, Rat)], c: &Rat) -> Ordering {
    for (_, arg) in terms {
        assert!(arg.is_positive(), "ln argument must be positive");
    }
    // common denominator q of all coefficients
    let mut q = BigInt::one();
    for (coeff, _) in terms {
        q = num::integer::lcm(q, coeff.denom().clone());
    }
    // R = prod arg_i^(coeff_i * q), an exact rational
    let mut r = Rat::one();
    for (coeff, arg) in terms {
        let e = (coeff * Rat::from(q.clone())).to_integer();
        r *= rat_pow_big(arg, &e);
    }
    // compare (1/q) ln R vs c  <=>  R vs e^(q c)  <=>  R^v vs e^u
    let qc = c * Rat::from(q);
    let u = qc.numer().clone();
    let v = qc.denom().clone();
    let z = rat_pow_big(&r, &v);
    if u.is_zero() {
        return z.cmp(&Rat::one());
    }
    // interval refinement; equality is impossible here
    use num::ToPrimitive;
    let u_abs = u.abs().to_usize().expect("exponent too large for comparison");
    let neg = u.is_negative();
    let mut terms_n = 24 + 2 * u_abs;
    for _ in 0..24 {
        let mut enc = exp_interval(&Rat::from(BigInt::from(u_abs)), terms_n);
        if neg {
            enc = enc.recip();
        }
        if z < enc.lo {
            return Ordering::Less;
        }
        if z > enc.hi {
            return Ordering::Greater;
        }
        terms_n *= 2;
    }
    panic!("cmp_lnsum failed to separate; sides may be equal non-trivially");
}

fn rat_pow_big(base: &Rat, exp: &BigInt) -> Rat {
    use num::ToPrimitive;
    let e = exp.abs().to_u64().expect("exponent too large");
    let mut acc = Rat::one();
    let mut b = base.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    if exp.is_negative() {
        acc.recip()
    } else {
        acc
    }
}

/// `a * ln(x) >= c`, decided exactly.
pub fn ge_ln(a: &Rat, x: &Rat, c: &Rat) -> bool {
    cmp_lnsum(&[(a.clone(), x.clone())], c) != Ordering::Less
}

/// `w > ln(l)` for integers, decided exactly (`l >= 1`).
pub fn gt_ln_of(w: u64, l: u64) -> bool {
    if l <= 1 {
        return true;
    }
    cmp_lnsum(&[(Rat::one(), rat_int(l as i64))], &rat_int(w as i64)) == Ordering::Less
}

/// Lossy conversion for display and reports only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Two-sided concentration bound `2 exp(-dev^2 / (2 mu + dev))`, returned as
/// a rational approximation with interval width below 10^-30 (exact 2 when
/// `dev = 0`). Reports usually clamp it to 1.
pub fn chernoff_bound(mu: &Rat, dev: &Rat) -> Rat {
    assert!(!mu.is_negative() && !dev.is_negative());
    if dev.is_zero() {
        return rat_int(2);
    }
    let x = dev * dev / (rat_int(2) * mu + dev);
    let tol = rat_pow(&rat(1, 10), 30);
    let mut terms = 24usize;
    loop {
        let enc = exp_interval_signed(&-x.clone(), terms);
        if enc.width() < tol {
            // 2 * midpoint of exp(-x)
            return enc.lo + enc.hi;
        }
        terms *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_exact_on_powers_of_two() {
        assert_eq!(log2_u128(1), rat_int(0));
        assert_eq!(log2_u128(1024), rat_int(10));
        assert_eq!(log2_u128(1 << 20), rat_int(20));
    }

    #[test]
    fn log2_monotone_and_close() {
        let a = log2_u128(7);
        assert!(a > rat(28, 10) && a < rat(281, 100));
        assert!(log2_u128(9) > log2_u128(8));
    }

    #[test]
    fn lnsum_basic() {
        // 4 ln 2 >= 2  (ln 16 = 2.77..)
        assert_eq!(cmp_lnsum(&[(rat_int(4), rat_int(2))], &rat_int(2)), Ordering::Greater);
        // ln 4 == 2 ln 2 -> difference vs 0 is equal
        assert_eq!(
            cmp_lnsum(&[(rat_int(1), rat_int(4)), (rat_int(-2), rat_int(2))], &rat_int(0)),
            Ordering::Equal
        );
        // ln 2 < 1
        assert_eq!(cmp_lnsum(&[(rat_int(1), rat_int(2))], &rat_int(1)), Ordering::Less);
    }

    #[test]
    fn gt_ln_small_cases() {
        assert!(gt_ln_of(3, 20)); // ln 20 = 2.99..
        assert!(!gt_ln_of(3, 21)); // ln 21 = 3.04..
        assert!(gt_ln_of(1, 1));
    }

    #[test]
    fn chernoff_values() {
        assert_eq!(chernoff_bound(&rat_int(50), &rat_int(0)), rat_int(2));
        // mu=50, dev=30: 2 exp(-900/130)
        let v = chernoff_bound(&rat_int(50), &rat_int(30));
        let expected = 2.0 * (-900.0f64 / 130.0).exp();
        let got = rat_to_f64(&v);
        assert!((got - expected).abs() < 1e-12);
        // monotone decreasing in dev
        let mut prev = chernoff_bound(&rat_int(10), &rat_int(0));
        for d in 1..20 {
            let cur = chernoff_bound(&rat_int(10), &rat_int(d));
            assert!(cur < prev);
            prev = cur;
        }
    }
}
