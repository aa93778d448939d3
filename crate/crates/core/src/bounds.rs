//! Rigorous checks of the numeric facts behind the upper- and lower-bound
//! arguments.
//!
//! Comparisons first try exact rational arithmetic. When an irrational power
//! is involved the two sides are enclosed in intervals, and precision is
//! doubled from 64 bits until the comparison is certified or the precision
//! cap is reached, in which case the verdict is `undecided`.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial_big;
use crate::error::{Error, Result};

pub mod interval;

pub use interval::Interval;
use interval::{decimal, int, log2_int, root};

pub const DEFAULT_PRECISION_CAP: u32 = 4096;
const START_BITS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// `lhs - rhs` (or `rhs - lhs` for upper-bound statements): a fraction
    /// when exact, otherwise a certified lower bound in decimal.
    pub margin: String,
    pub bits: u32,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub m: u64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent_ratio: Option<String>,
}

impl BoundsReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Holds)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Check groups selectable from the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CheckKind {
    Probability,
    Expectation,
    Case1,
    XSize,
    LowerBound,
    Exponent,
}

impl CheckKind {
    pub const ALL: [CheckKind; 6] = [
        CheckKind::Probability,
        CheckKind::Expectation,
        CheckKind::Case1,
        CheckKind::XSize,
        CheckKind::LowerBound,
        CheckKind::Exponent,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "probability" => CheckKind::Probability,
            "expectation" => CheckKind::Expectation,
            "case1" => CheckKind::Case1,
            "x_size" | "x-size" => CheckKind::XSize,
            "lower_bound" | "lower-bound" => CheckKind::LowerBound,
            "exponent" => CheckKind::Exponent,
            other => return Err(Error::params(format!("unknown check `{other}`"))),
        })
    }
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn bigr(n: &BigUint) -> BigRational {
    int(BigInt::from(n.clone()))
}

/// `p/q` without reduction, so natural denominators survive in reports.
fn raw_fraction(num: &BigInt, den: &BigInt) -> String {
    if den.is_one() {
        num.to_string()
    } else {
        format!("{num}/{den}")
    }
}

fn require_m(m: u64) -> Result<()> {
    if m < 2 {
        return Err(Error::params(format!("m must be at least 2, got {m}")));
    }
    Ok(())
}

/// `|S2| = 4^m m^{3m+1}`.
pub fn s2_size(m: u64) -> BigUint {
    Pow::pow(&big(4), m) * Pow::pow(&big(m), 3 * m + 1)
}

/// `n1 = 25 m^9`.
pub fn n1_size(m: u64) -> BigUint {
    big(25) * Pow::pow(&big(m), 9u32)
}

/// `n2 = 2 C(n1, m) m²`.
pub fn n2_size(m: u64) -> BigUint {
    big(2) * binomial_big(&n1_size(m), m) * big(m * m)
}

fn exact_check(name: &str, lhs: (BigInt, BigInt), rhs: (BigInt, BigInt), want: Ordering, strict: bool) -> Check {
    let l = BigRational::new(lhs.0.clone(), lhs.1.clone());
    let r = BigRational::new(rhs.0.clone(), rhs.1.clone());
    let ord = l.cmp(&r);
    let holds = ord == want || (!strict && ord == Ordering::Equal);
    // Margin over the common (unreduced) denominator.
    let den = &lhs.1 * &rhs.1 / num_integer::Integer::gcd(&lhs.1, &rhs.1);
    let ln = &lhs.0 * (&den / &lhs.1);
    let rn = &rhs.0 * (&den / &rhs.1);
    let diff = if want == Ordering::Less { rn - ln } else { ln - rn };
    Check {
        name: name.to_owned(),
        status: if holds { Status::Holds } else { Status::Fails },
        margin: raw_fraction(&diff, &den),
        bits: 0,
        lhs: raw_fraction(&lhs.0, &lhs.1),
        rhs: raw_fraction(&rhs.0, &rhs.1),
    }
}

/// Refines `sides(bits)` until `lhs > rhs` (or `>=` when not strict) is
/// decided.
fn interval_check(name: &str, strict: bool, cap: u32, sides: impl Fn(u32) -> (Interval, Interval)) -> Check {
    let mut bits = START_BITS;
    loop {
        let (lhs, rhs) = sides(bits);
        let verdict = match lhs.compare(&rhs) {
            Some(Ordering::Greater) => Some(Status::Holds),
            Some(Ordering::Less) => Some(Status::Fails),
            Some(Ordering::Equal) => Some(if strict { Status::Fails } else { Status::Holds }),
            None => None,
        };
        if verdict.is_some() || bits >= cap {
            let diff = &lhs - &rhs;
            let margin = if diff.is_exact() {
                diff.display(6)
            } else {
                decimal(diff.lo(), 6, false)
            };
            return Check {
                name: name.to_owned(),
                status: verdict.unwrap_or(Status::Undecided),
                margin,
                bits,
                lhs: lhs.display(6),
                rhs: rhs.display(6),
            };
        }
        bits = (bits * 2).min(cap);
    }
}

/// Union bound on a repeated color in the sampled tuple:
/// `C(4m⁴+m, 2)(m-1)/(25m⁹) <= 1/2`, with the intermediate step
/// `C(4m⁴+m, 2) <= (5m⁴)²/2` and the final `(5m⁴)²/2 · (m-1)/(25m⁹) <= 1/2`.
pub fn verify_probability_bound(m: u64) -> Result<Vec<Check>> {
    require_m(m)?;
    let t = big(4) * Pow::pow(&big(m), 4u32) + big(m);
    let pairs = BigInt::from(binomial_big(&t, 2));
    let n1 = BigInt::from(n1_size(m));
    let mm1 = BigInt::from(m - 1);
    let half = (BigInt::one(), BigInt::from(2));
    let m4 = BigInt::from(m).pow(4u32);
    let five_m4_sq = BigInt::from(25) * &m4 * &m4;
    Ok(vec![
        exact_check(
            "probability_union_bound",
            (&pairs * &mm1, n1.clone()),
            half.clone(),
            Ordering::Less,
            false,
        ),
        exact_check(
            "probability_pair_count",
            (pairs, BigInt::one()),
            if (&five_m4_sq % 2u32).is_zero() {
                (&five_m4_sq / 2u32, BigInt::one())
            } else {
                (five_m4_sq.clone(), BigInt::from(2))
            },
            Ordering::Less,
            false,
        ),
        exact_check(
            "probability_final_step",
            (&five_m4_sq * &mm1, BigInt::from(2) * &n1),
            half,
            Ordering::Less,
            false,
        ),
    ])
}

/// `(1/2) C(25m⁹, m) m² >= 4^m m^{3m+1}`.
pub fn verify_expectation_bound(m: u64) -> Result<Check> {
    require_m(m)?;
    let lhs = BigInt::from(binomial_big(&n1_size(m), m) * big(m * m));
    let rhs = BigInt::from(s2_size(m));
    Ok(exact_check(
        "expectation",
        (lhs, BigInt::from(2)),
        (rhs, BigInt::one()),
        Ordering::Greater,
        false,
    ))
}

/// `(c · s2^{m-1})^{1/m}`, i.e. `c^{1/m} s2^{1-1/m}` as one radical so that
/// exact cases stay exact.
fn radical(c: &BigUint, s2: &BigUint, m: u64, bits: u32) -> Interval {
    let inner = c * Pow::pow(s2, (m - 1) as u32);
    root(&bigr(&inner), m as u32, bits)
}

/// Both sides of the Case-1 edge-count inequality at `|M1| = 4m⁴`,
/// `|S2| = 4^m m^{3m+1}`:
/// `8 m^{1/m} m⁴ |S2|^{1-1/m}` versus
/// `(m-1)^{1/m} (4m⁴-m+1) |S2|^{1-1/m} + (m-1)|S2|`.
pub fn case1_sides(m: u64, bits: u32) -> (Interval, Interval) {
    let s2 = s2_size(m);
    let m4 = Pow::pow(&big(m), 4u32);
    let lhs = &Interval::exact(bigr(&(big(8) * &m4))) * &radical(&big(m), &s2, m, bits);
    let coeff = big(4) * &m4 - big(m) + big(1);
    let first = &Interval::exact(bigr(&coeff)) * &radical(&big(m - 1), &s2, m, bits);
    let rhs = &first + &Interval::exact(bigr(&(big(m - 1) * &s2)));
    (lhs, rhs)
}

pub fn verify_case1_inequality(m: u64, cap: u32) -> Result<Vec<Check>> {
    require_m(m)?;
    let s2 = s2_size(m);
    let m4 = Pow::pow(&big(m), 4u32);
    let total = interval_check("case1_total", true, cap, |bits| case1_sides(m, bits));
    let first = interval_check("case1_first_summand", true, cap, |bits| {
        let lhs = &Interval::exact(bigr(&(big(4) * &m4))) * &radical(&big(m), &s2, m, bits);
        let coeff = big(4) * &m4 - big(m) + big(1);
        let rhs = &Interval::exact(bigr(&coeff)) * &radical(&big(m - 1), &s2, m, bits);
        (lhs, rhs)
    });
    // Second summand: 4 · 4^{m-1} m^{3m+2} = m |S2| against (m-1)|S2|.
    let second = exact_check(
        "case1_second_summand",
        (BigInt::from(big(4) * Pow::pow(&big(4), m - 1) * Pow::pow(&big(m), 3 * m + 2)), BigInt::one()),
        (BigInt::from(big(m - 1) * &s2), BigInt::one()),
        Ordering::Greater,
        true,
    );
    // The split of the left side relies on 4 m^{1/m} m⁴ |S2|^{1-1/m} = m|S2|,
    // which is (m |S2|^{m-1})^{1/m} · 4m⁴ = m|S2|, i.e. m |S2|^{m-1} (4m⁴)^m =
    // m^m |S2|^m. Checked as an exact integer identity.
    let split_l = big(m) * Pow::pow(&s2, (m - 1) as u32) * Pow::pow(&(big(4) * &m4), m);
    let split_r = Pow::pow(&big(m), m) * Pow::pow(&s2, m);
    let split = Check {
        name: "case1_split_identity".into(),
        status: if split_l == split_r { Status::Holds } else { Status::Fails },
        margin: "0".into(),
        bits: 0,
        lhs: format!("2^{} (approx)", split_l.bits()),
        rhs: format!("2^{} (approx)", split_r.bits()),
    };
    Ok(vec![total, first, second, split])
}

/// `4^m m^{3m+1} = (4m³)^m · m`, so `|S2|^{1/m} / (4 m^{2+1/m}) = m` exactly.
pub fn verify_x_size_identity(m: u64) -> Result<Check> {
    require_m(m)?;
    let lhs = s2_size(m);
    let rhs = Pow::pow(&(big(4) * Pow::pow(&big(m), 3u32)), m) * big(m);
    let short = |x: &BigUint| {
        let s = x.to_string();
        if s.len() > 40 {
            format!("{}...({} digits)", &s[..12], s.len())
        } else {
            s
        }
    };
    Ok(Check {
        name: "x_size_identity".into(),
        status: if lhs == rhs { Status::Holds } else { Status::Fails },
        margin: if lhs >= rhs {
            (&lhs - &rhs).to_string()
        } else {
            format!("-{}", &rhs - &lhs)
        },
        bits: 0,
        lhs: short(&lhs),
        rhs: short(&rhs),
    })
}

/// Enclosure of the Kővári–Sós–Turán bound
/// `(m-1)^{1/m} (s1-m+1) s2^{1-1/m} + (m-1) s2`, refined until its width is
/// below one (or exact).
pub fn kst_bound(s1: u64, s2: u64, m: u64) -> Result<Interval> {
    if m < 1 || s1 < m || s2 < m {
        return Err(Error::params(format!("kst_bound needs s1, s2 >= m >= 1 (got {s1}, {s2}, {m})")));
    }
    let mut bits = START_BITS;
    loop {
        let rad = radical(&big(m - 1), &big(s2), m, bits);
        let b = &(&Interval::from_int(s1 - m + 1) * &rad) + &Interval::from_int((m - 1) * s2);
        if b.is_exact() || b.width() < BigRational::one() || bits >= DEFAULT_PRECISION_CAP {
            return Ok(b);
        }
        bits *= 2;
    }
}

/// Whether `edges` exceeds the KST bound: `Some(true)` certified above,
/// `Some(false)` certified at or below, `None` when undecidable.
pub fn exceeds_kst_bound(edges: u64, s1: u64, s2: u64, m: u64) -> Result<Option<bool>> {
    let mut bits = START_BITS;
    let e = Interval::from_int(edges);
    loop {
        let rad = radical(&big(m - 1), &big(s2), m, bits);
        let b = &(&Interval::from_int(s1 - m + 1) * &rad) + &Interval::from_int((m - 1) * s2);
        match e.compare(&b) {
            Some(Ordering::Greater) => return Ok(Some(true)),
            Some(_) => return Ok(Some(false)),
            None if bits >= DEFAULT_PRECISION_CAP => return Ok(None),
            None => bits *= 2,
        }
    }
}

/// Enclosure of `m (m²-1)^{(m-1)/2} / (3^{1/(2m)} e)`.
pub fn lower_bound_value(m: u64, bits: u32) -> Result<Interval> {
    require_m(m)?;
    let q = big(m * m - 1);
    let powered = if (m - 1).is_multiple_of(2) {
        Interval::exact(bigr(&Pow::pow(&q, ((m - 1) / 2) as u32)))
    } else {
        root(&bigr(&Pow::pow(&q, (m - 1) as u32)), 2, bits)
    };
    let num = &Interval::from_int(m) * &powered;
    let den = &root(&int(3), (2 * m) as u32, bits) * &interval::e(bits);
    Ok((&num / &den).round(bits))
}

/// `3 (e n/m)^{2m} (m²-1)^{-(m²-m)}` for an interval `n`.
fn expectation_budget(n: &Interval, m: u64, bits: u32) -> Interval {
    let base = &(&interval::e(bits) * n) / &Interval::from_int(m);
    let num = &Interval::from_int(3) * &base.round(bits).pow((2 * m) as u32);
    let den = Interval::exact(bigr(&Pow::pow(&big(m * m - 1), (m * m - m) as u32)));
    &num / &den
}

/// The closed form is the root of `3 (en/m)^{2m} (m²-1)^{-(m²-m)} = 1`:
/// the budget is below one just under the enclosure and above one just over
/// it. Integer `n` below the bound (when `n >= 1` exists) are checked too.
pub fn verify_lower_bound_derivation(m: u64, cap: u32) -> Result<Check> {
    require_m(m)?;
    let mut bits = START_BITS;
    let one = Interval::from_int(1);
    loop {
        let star = lower_bound_value(m, bits)?;
        // Widen by a relative 2^{-bits/2} so the bracket dominates the
        // evaluation error of the budget itself.
        let slack = interval::rational(1, BigInt::one() << (bits / 2));
        let below = Interval::exact(star.lo() * (BigRational::one() - &slack));
        let above = Interval::exact(star.hi() * (BigRational::one() + &slack));
        let g_below = expectation_budget(&below, m, bits);
        let g_above = expectation_budget(&above, m, bits);
        let mut ok = g_below.compare(&one) == Some(Ordering::Less) && g_above.compare(&one) == Some(Ordering::Greater);
        let floor_n = star.lo().floor().to_integer();
        if ok && floor_n >= BigInt::one() && BigRational::from_integer(floor_n.clone()) < *star.lo() {
            ok &= expectation_budget(&Interval::exact(BigRational::from_integer(floor_n)), m, bits).compare(&one)
                == Some(Ordering::Less);
        }
        let ceil_n = star.hi().ceil();
        let g_ceil = expectation_budget(&Interval::exact(ceil_n), m, bits);
        ok &= g_ceil.compare(&one) == Some(Ordering::Greater);
        if ok || bits >= cap {
            return Ok(Check {
                name: "lower_bound_derivation".into(),
                status: if ok { Status::Holds } else { Status::Undecided },
                margin: decimal(&(g_ceil.lo() - BigRational::one()), 6, false),
                bits,
                lhs: star.display(6),
                rhs: "1".into(),
            });
        }
        bits = (bits * 2).min(cap);
    }
}

/// `log2(n2(m)) / (8 m log2 m)`.
pub fn exponent_ratio(m: u64, bits: u32) -> Result<Interval> {
    require_m(m)?;
    let num = log2_int(&n2_size(m), bits);
    let den = &Interval::from_int(8 * m) * &log2_int(&big(m), bits);
    Ok((&num / &den).round(bits))
}

pub fn exponent_ratio_f64(m: u64) -> Result<f64> {
    let r = exponent_ratio(m, START_BITS)?;
    Ok(r.midpoint().to_f64().unwrap_or(f64::NAN))
}

/// All selected checks for one `m`.
pub fn verify_all(m: u64, kinds: &[CheckKind], cap: u32) -> Result<BoundsReport> {
    require_m(m)?;
    let mut checks = Vec::new();
    let mut ratio = None;
    for kind in CheckKind::ALL.iter().filter(|k| kinds.contains(k)) {
        match kind {
            CheckKind::Probability => checks.extend(verify_probability_bound(m)?),
            CheckKind::Expectation => checks.push(verify_expectation_bound(m)?),
            CheckKind::Case1 => checks.extend(verify_case1_inequality(m, cap)?),
            CheckKind::XSize => checks.push(verify_x_size_identity(m)?),
            CheckKind::LowerBound => checks.push(verify_lower_bound_derivation(m, cap)?),
            CheckKind::Exponent => ratio = Some(exponent_ratio(m, START_BITS)?.display(6)),
        }
    }
    Ok(BoundsReport {
        m,
        checks,
        exponent_ratio: ratio,
    })
}

/// [`verify_all`] over a range of `m`, in parallel, results in order.
pub fn verify_range(ms: std::ops::RangeInclusive<u64>, kinds: &[CheckKind], cap: u32) -> Result<Vec<BoundsReport>> {
    let ms: Vec<u64> = ms.collect();
    ms.par_iter().map(|&m| verify_all(m, kinds, cap)).collect()
}

/// Certifies `ratio(ms[i+1]) < ratio(ms[i])` for consecutive entries.
pub fn exponent_ratio_decreasing(ms: &[u64]) -> Result<bool> {
    let ratios: Vec<Interval> = ms.iter().map(|&m| exponent_ratio(m, 128)).collect::<Result<_>>()?;
    Ok(ratios.windows(2).all(|w| w[1].compare(&w[0]) == Some(Ordering::Less)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use interval::rational;

    #[test]
    fn probability_m2() {
        let c = verify_probability_bound(2).unwrap();
        assert_eq!(c[0].status, Status::Holds);
        assert_eq!(c[0].lhs, "2145/12800");
        assert_eq!(c[0].margin, "4255/12800");
        assert_eq!(c[1].lhs, "2145");
        assert_eq!(c[1].rhs, "3200");
        assert_eq!(c[1].status, Status::Holds);
        assert!(c.iter().all(|c| c.status == Status::Holds));
    }

    #[test]
    fn probability_m3() {
        let c = verify_probability_bound(3).unwrap();
        // Tuple length 4·3⁴ + 3 = 327, C(327, 2) = 53301; 25·3⁹ = 492075.
        assert_eq!(c[0].lhs, "106602/492075");
        let v: f64 = 106602.0 / 492075.0;
        assert!((v - 0.2166).abs() < 1e-4);
        assert_eq!(c[0].status, Status::Holds);
    }

    #[test]
    fn expectation_small_m() {
        let c = verify_expectation_bound(2).unwrap();
        assert_eq!(c.lhs, "327654400/2");
        assert_eq!(c.rhs, "2048");
        assert_eq!(c.status, Status::Holds);
        assert_eq!(verify_expectation_bound(3).unwrap().status, Status::Holds);
        let t = std::time::Instant::now();
        assert_eq!(verify_expectation_bound(12).unwrap().status, Status::Holds);
        assert!(t.elapsed().as_secs_f64() < 1.0);
    }

    #[test]
    fn case1_m2_values() {
        let (lhs, rhs) = case1_sides(2, 64);
        assert_eq!(lhs, Interval::from_int(8192));
        assert!(rhs.lo() > &int(4898) && rhs.hi() < &int(4900));
        let checks = verify_case1_inequality(2, DEFAULT_PRECISION_CAP).unwrap();
        assert!(checks.iter().all(|c| c.status == Status::Holds), "{checks:?}");
    }

    #[test]
    fn s2_power_identity() {
        // (4² · 2⁷)^{1/2} = 2^{5.5}: 2048 is not a square but 2·2048 is.
        assert_eq!(s2_size(2), big(2048));
        assert!(!root(&int(2048), 2, 64).is_exact());
        assert_eq!(root(&int(4096), 2, 64), Interval::from_int(64));
    }

    #[test]
    fn x_size_examples() {
        for m in [2, 3, 10] {
            assert_eq!(verify_x_size_identity(m).unwrap().status, Status::Holds);
        }
        assert_eq!(verify_x_size_identity(3).unwrap().lhs, "3779136");
    }

    #[test]
    fn kst_examples() {
        assert_eq!(kst_bound(5, 7, 1).unwrap(), Interval::from_int(0));
        assert_eq!(kst_bound(4, 4, 2).unwrap(), Interval::from_int(10));
        let b = kst_bound(20, 20, 2).unwrap();
        assert!(b.lo() > &rational(1049, 10) && b.hi() < &int(105));
        assert!(b.width() < BigRational::one());
        // Perfect-square s2 at m = 2 is exactly rational.
        let b = kst_bound(9, 25, 2).unwrap();
        assert_eq!(b, Interval::from_int(8 * 5 + 25));
        assert!(kst_bound(1, 5, 2).is_err());
        assert_eq!(exceeds_kst_bound(105, 20, 20, 2).unwrap(), Some(true));
        assert_eq!(exceeds_kst_bound(104, 20, 20, 2).unwrap(), Some(false));
        assert_eq!(exceeds_kst_bound(10, 4, 4, 2).unwrap(), Some(false));
        assert_eq!(exceeds_kst_bound(11, 4, 4, 2).unwrap(), Some(true));
    }

    #[test]
    fn lower_bound_values() {
        let v2 = lower_bound_value(2, 64).unwrap();
        assert!(v2.lo() > &rational(96, 100) && v2.hi() < &rational(97, 100));
        let v3 = lower_bound_value(3, 64).unwrap();
        assert!(v3.lo() > &rational(73, 10) && v3.hi() < &rational(74, 10));
        for m in [2, 3, 5] {
            let c = verify_lower_bound_derivation(m, DEFAULT_PRECISION_CAP).unwrap();
            assert_eq!(c.status, Status::Holds, "{c:?}");
        }
    }

    #[test]
    fn exponent_ratio_trend() {
        let r10 = exponent_ratio_f64(10).unwrap();
        assert!(r10 > 1.2 && r10 < 1.3, "{r10}");
        let r100 = exponent_ratio_f64(100).unwrap();
        assert!((r100 - 1.0).abs() < (r10 - 1.0).abs());
        let r2 = exponent_ratio(2, 64).unwrap();
        assert!(r2.is_positive());
        assert!(exponent_ratio_decreasing(&[8, 16, 32, 64, 128]).unwrap());
    }

    #[test]
    fn refinement_never_flips_a_side() {
        // Enclosures at higher precision nest inside lower-precision ones.
        for m in [2u64, 3, 7] {
            let mut prev: Option<Interval> = None;
            for bits in [64, 128, 256] {
                let (l, _) = case1_sides(m, bits);
                if let Some(p) = &prev {
                    assert!(p.lo() <= l.hi() && l.lo() <= p.hi());
                }
                prev = Some(l);
            }
        }
    }

    #[test]
    fn rejects_small_m() {
        assert!(verify_probability_bound(1).is_err());
        assert!(verify_all(1, &CheckKind::ALL, 4096).is_err());
    }
}
