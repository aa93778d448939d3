//! Outward-rounded rational intervals.
//!
//! An [`Interval`] is a pair of exact rationals `lo <= hi` enclosing a real
//! number. Arithmetic is exact; [`Interval::round`] trims endpoints to a
//! dyadic value with a given number of significant bits, always widening.
//! Irrational constants come from integer root bracketing (`x^{1/q}`) and
//! alternating-free series with explicit remainder bounds (`e`, `ln`).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

pub fn rational(n: impl Into<BigInt>, d: impl Into<BigInt>) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// `floor(log2 |x|)` up to one unit, from bit lengths.
fn approx_log2(x: &BigRational) -> i64 {
    x.numer().bits() as i64 - x.denom().bits() as i64
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn exact(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Interval::exact(int(n))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Certified ordering, or `None` when the intervals overlap without both
    /// being the same point.
    pub fn compare(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::from_int(1);
        }
        if !self.lo.is_negative() {
            return Interval {
                lo: Pow::pow(&self.lo, e),
                hi: Pow::pow(&self.hi, e),
            };
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = &acc * self;
        }
        acc
    }

    /// Widens both endpoints to dyadic rationals with about `bits`
    /// significant bits.
    pub fn round(&self, bits: u32) -> Interval {
        if self.is_exact() && self.lo.is_integer() {
            return self.clone();
        }
        let scale_for = |x: &BigRational| -> i64 {
            if x.is_zero() {
                0
            } else {
                bits as i64 - approx_log2(x)
            }
        };
        let k = scale_for(&self.lo).max(scale_for(&self.hi));
        let (mul, div) = if k >= 0 {
            (int(pow2(k as u64)), int(1))
        } else {
            (int(1), int(pow2((-k) as u64)))
        };
        let lo = (&self.lo * &mul / &div).floor() * &div / &mul;
        let hi = (&self.hi * &mul / &div).ceil() * &div / &mul;
        Interval { lo, hi }
    }

    /// `[lo, hi]` rendered with `digits` decimals, rounded outward; exact
    /// integers and exact short fractions are shown as such.
    pub fn display(&self, digits: usize) -> String {
        if self.is_exact() {
            if self.lo.is_integer() {
                return self.lo.to_integer().to_string();
            }
            return format!("{}/{}", self.lo.numer(), self.lo.denom());
        }
        format!("[{}, {}]", decimal(&self.lo, digits, false), decimal(&self.hi, digits, true))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(6))
    }
}

impl Add<&Interval> for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl Sub<&Interval> for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl Mul<&Interval> for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        if !self.lo.is_negative() && !o.lo.is_negative() {
            return Interval {
                lo: &self.lo * &o.lo,
                hi: &self.hi * &o.hi,
            };
        }
        let products = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

impl Div<&Interval> for &Interval {
    type Output = Interval;
    /// Panics if the divisor contains zero.
    fn div(self, o: &Interval) -> Interval {
        assert!(
            o.lo.is_positive() || o.hi.is_negative(),
            "interval division by an interval containing zero"
        );
        let inv = Interval {
            lo: o.hi.recip(),
            hi: o.lo.recip(),
        };
        self * &inv
    }
}

/// Decimal expansion of `x` with `digits` fractional digits, truncated
/// toward `-∞` (or `+∞` when `round_up`).
pub fn decimal(x: &BigRational, digits: usize, round_up: bool) -> String {
    let scale = int(BigInt::from(10u32).pow(digits as u32));
    let scaled = x * &scale;
    let n = if round_up { scaled.ceil() } else { scaled.floor() }.to_integer();
    let neg = n.sign() == Sign::Minus;
    let s = n.abs().to_string();
    let s = if s.len() <= digits {
        format!("{}{}", "0".repeat(digits + 1 - s.len()), s)
    } else {
        s
    };
    let (int_part, frac) = s.split_at(s.len() - digits);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(int_part);
    if digits > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// Enclosure of `x^{1/q}` for `x >= 0`, exact when `x` is a perfect `q`-th
/// power. Relative width about `2^{-bits}`.
pub fn root(x: &BigRational, q: u32, bits: u32) -> Interval {
    assert!(q >= 1, "root index must be positive");
    assert!(!x.is_negative(), "root of a negative number");
    if q == 1 || x.is_zero() {
        return Interval::exact(x.clone());
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    let rn = n.nth_root(q);
    let rd = d.nth_root(q);
    if Pow::pow(&rn, q) == *n && Pow::pow(&rd, q) == *d {
        return Interval::exact(BigRational::new(rn.into(), rd.into()));
    }
    // Result has about (bits(n) - bits(d)) / q integer bits; add enough
    // fractional bits for `bits` significant ones.
    let int_bits = (n.bits() as i64 - d.bits() as i64) / q as i64;
    let k = (bits as i64 - int_bits + 2).max(0) as u64;
    let scaled: BigUint = (n << (k * q as u64)) / d;
    let r = scaled.nth_root(q);
    let denom = int(pow2(k));
    let lo = int(BigInt::from(r.clone())) / &denom;
    let hi = int(BigInt::from(r + 1u32)) / &denom;
    Interval { lo, hi }
}

/// Enclosure of `x^{p/q}` for `x >= 0`.
pub fn pow_frac(x: &BigRational, p: u32, q: u32, bits: u32) -> Interval {
    root(&Pow::pow(x, p), q, bits)
}

/// Enclosure of Euler's number: partial sums of `Σ 1/k!` with the tail
/// bounded by `1/(K! K)`.
pub fn e(bits: u32) -> Interval {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut k: u64 = 0;
    let target = int(pow2(bits as u64 + 2));
    let mut fact = BigInt::one();
    loop {
        sum += &term;
        k += 1;
        fact *= k;
        term = BigRational::new(BigInt::one(), fact.clone());
        // Tail after summing terms 0..k-1 is below 1/((k-1)! (k-1)) <= 2/k!.
        if int(fact.clone()) > target {
            break;
        }
    }
    let tail = BigRational::new(BigInt::from(2), fact);
    Interval::new(sum.clone(), sum + tail).round(bits + 8)
}

/// `2 atanh(t) = ln((1+t)/(1-t))` for `0 <= t_lo <= t_hi <= 1/2`, enclosed by
/// truncating the odd power series and bounding the geometric tail.
fn two_atanh(t: &Interval, bits: u32) -> Interval {
    assert!(!t.lo.is_negative() && t.hi <= rational(1, 2));
    // Tail ratio t² <= 1/4 gives two bits per term.
    let terms = bits / 2 + 4;
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    let t2 = t.pow(2);
    let mut p = t.clone();
    for k in 0..terms {
        let denom = int(2 * k as i64 + 1);
        lo += &p.lo / &denom;
        hi += &p.hi / &denom;
        p = (&p * &t2).round(bits + 16);
    }
    // Remaining terms: Σ_{k>=K} t^{2k+1}/(2k+1) <= t^{2K+1} / ((2K+1)(1 - t²)).
    let one = BigRational::one();
    let tail = &p.hi / (int(2 * terms as i64 + 1) * (&one - &t2.hi));
    hi += tail;
    let two = int(2);
    Interval::new(lo * &two, hi * &two).round(bits + 8)
}

/// Enclosure of `ln(x)` for rational `x` in `[1, 3]`.
fn ln_small(x: &BigRational, bits: u32) -> Interval {
    let one = BigRational::one();
    assert!(x >= &one && x <= &int(3));
    let t = (x - &one) / (x + &one);
    two_atanh(&Interval::exact(t), bits)
}

pub fn ln2(bits: u32) -> Interval {
    ln_small(&int(2), bits)
}

/// Enclosure of `ln(x)` for `x` within `[1, 3]`.
pub fn ln(x: &Interval, bits: u32) -> Interval {
    Interval::new(ln_small(&x.lo, bits).lo, ln_small(&x.hi, bits).hi)
}

/// Enclosure of `log2(n)` for a positive integer.
pub fn log2_int(n: &BigUint, bits: u32) -> Interval {
    assert!(!n.is_zero(), "log of zero");
    let e = n.bits() - 1;
    let mantissa = BigRational::new(BigInt::from(n.clone()), pow2(e));
    if mantissa.is_one() {
        return Interval::from_int(e);
    }
    // log2(n) = e + ln(mantissa) / ln 2, mantissa in (1, 2).
    let mantissa = Interval::exact(mantissa).round(bits + 16);
    let frac = (&ln(&mantissa, bits + 8) / &ln2(bits + 8)).round(bits + 4);
    let frac = Interval::new(frac.lo.max(BigRational::zero()), frac.hi.min(BigRational::one()));
    (&Interval::from_int(e) + &frac).round(bits)
}
