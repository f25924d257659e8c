//! Small numeric toolkit: exact binomials, compensated sums and a
//! double-double type for the alternating sums that cancel badly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Exact binomial coefficient. Panics on overflow, which cannot happen for n <= 120.
pub fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflow")
            / (i as u128 + 1);
    }
    acc
}

/// Binomial coefficient as an arbitrary precision integer.
pub fn binom_big(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Neumaier compensated sum.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unevaluated sum `hi + lo` with |lo| <= ulp(hi)/2, roughly 32 significant digits.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact for any u128 below 2^106.
    pub fn from_u128(x: u128) -> Self {
        let hi = x as f64;
        let diff = x as i128 - hi as i128;
        let (h, l) = quick_two_sum(hi, diff as f64);
        Dd { hi: h, lo: l }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Dd::from_f64(hi);
        }
        let rest = r - BigRational::from_float(hi).unwrap_or_else(BigRational::zero);
        let lo = rest.to_f64().unwrap_or(0.0);
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    fn ldexp(self, k: i32) -> Self {
        let s = 2f64.powi(k);
        Dd { hi: self.hi * s, lo: self.lo * s }
    }

    fn sqr(self) -> Self {
        let (p, e) = two_prod(self.hi, self.hi);
        let e = e + 2.0 * self.hi * self.lo;
        let (h, l) = quick_two_sum(p, e);
        Dd { hi: h, lo: l }
    }

    pub fn recip(self) -> Self {
        Dd::ONE / self
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return if self.hi == 0.0 { Dd::ZERO } else { Dd::from_f64(f64::NAN) };
        }
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let corr = (self - Dd::from_f64(ax).sqr()).hi * (x * 0.5);
        let (h, l) = two_sum(ax, corr);
        Dd { hi: h, lo: l }
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.7 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ONE;
        }
        let k = (self.hi / LN2.hi).round();
        // r in [-ln2/2, ln2/2], scaled down so the series converges in a few terms
        let r = (self - LN2 * k).ldexp(-10);
        let mut term = r;
        let mut s = r;
        let mut i = 2.0;
        loop {
            term = term * r / i;
            s += term;
            if term.hi.abs() <= 1e-36 * s.hi.abs().max(1e-300) || i > 30.0 {
                break;
            }
            i += 1.0;
        }
        // undo the scaling on expm1: e^{2x} - 1 = (e^x - 1)(e^x + 1)
        for _ in 0..10 {
            s = s * (s + 2.0);
        }
        (s + 1.0).ldexp(k as i32)
    }

    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::from_f64(if self.hi == 0.0 { f64::NEG_INFINITY } else { f64::NAN });
        }
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - 1.0;
        }
        y
    }

    pub fn powf(self, alpha: f64) -> Self {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        (self.ln() * alpha).exp()
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::from_f64(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (h, l) = quick_two_sum(s1, s2 + t2);
        Dd { hi: h, lo: l }
    }
}

impl Add<f64> for Dd {
    type Output = Dd;
    fn add(self, b: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, b);
        let (h, l) = quick_two_sum(s1, s2 + self.lo);
        Dd { hi: h, lo: l }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Sub<f64> for Dd {
    type Output = Dd;
    fn sub(self, b: f64) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        Dd { hi: h, lo: l }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (h, l) = quick_two_sum(p, e + self.lo * b);
        Dd { hi: h, lo: l }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        Dd { hi: h, lo: l } + q3
    }
}

impl Div<f64> for Dd {
    type Output = Dd;
    fn div(self, b: f64) -> Dd {
        self / Dd::from_f64(b)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}

impl SubAssign for Dd {
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: Dd, hi: f64, lo: f64, rel: f64) {
        let err = ((x - Dd::new(hi, lo)).to_f64() / hi).abs();
        assert!(err < rel, "{x:?} vs {hi:e} {lo:e}: rel err {err:e}");
    }

    // reference values from 50-digit arithmetic
    #[test]
    fn transcendental_reference_values() {
        close(Dd::from_f64(2.0).ln(), std::f64::consts::LN_2, 2.3190468138462996e-17, 1e-30);
        close(Dd::from_f64(27.0).ln(), 3.295836866004329, -5.009431212501459e-17, 1e-30);
        let x = Dd::ONE + Dd::from_f64(13.0) / Dd::from_f64(0.7);
        // 0.7 is not exact in binary; only compare to the f64-level reference
        assert!((x.ln().to_f64() - 2.9740707767728116).abs() < 1e-15);
        close(Dd::from_f64(-3.7).exp(), 0.02472352647033939, -3.725242127087014e-19, 1e-15);
        close(Dd::from_f64(3.0).sqrt(), 1.7320508075688772, 1.0035084221806903e-16, 1e-30);
        close(Dd::from_f64(26.0).powf(0.3), 2.657614620905154, -9.412460496936611e-17, 1e-16);
    }

    #[test]
    fn exp_of_exact_arguments() {
        close(Dd::from_f64(25.5).exp(), 118716009132.16965, 3.7484041480402334e-06, 1e-30);
        close(Dd::from_f64(-1e-5).exp(), 0.9999900000499998, 5.731074148809041e-18, 1e-16);
        close(LN2.exp(), 2.0, 0.0, 1e-30);
    }

    #[test]
    fn exact_binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom_big(26, 13), BigInt::from(10_400_600u64));
        let big = binom(100, 50);
        let d = Dd::from_u128(big);
        assert_eq!((d.hi as i128 + d.lo as i128) as u128, big);
    }

    #[test]
    fn rational_conversion_keeps_second_word() {
        let third = BigRational::new(1.into(), 3.into());
        let x = Dd::from_rational(&third) * 3.0;
        assert!((x - Dd::ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        assert_eq!(neumaier_sum([1.0, 1e100, 1.0, -1e100]), 2.0);
    }
}
