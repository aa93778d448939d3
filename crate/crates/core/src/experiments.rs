//! Canonical copies under uniformly random colorings: exact expectations,
//! Monte-Carlo estimates, and searches for colorings with no canonical copy
//! at all (each one certifies that `K_{n,n}` is too small to force one).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::CanonicalPattern;
use crate::combinatorics::binomial_big;
use crate::error::{Error, Result};
use crate::generators::{instantiate, ColoringSource, ColoringSpec};
use crate::oracle::{count_canonical_bicliques, PatternCounts};
use crate::prf;

const TRIAL_DOMAIN: u64 = 0x7472_6961;
const SEARCH_DOMAIN: u64 = 0x7a65_726f;

/// Exact expected counts of canonical `K_{m,m}` copies in a uniform
/// `q`-coloring of `K_{n,n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectationTable {
    pub n: u64,
    pub m: u64,
    pub q: u64,
    pub monochromatic: BigRational,
    pub left: BigRational,
    pub right: BigRational,
    pub rainbow: BigRational,
}

impl ExpectationTable {
    pub fn get(&self, p: CanonicalPattern) -> &BigRational {
        match p {
            CanonicalPattern::Monochromatic => &self.monochromatic,
            CanonicalPattern::LeftColored => &self.left,
            CanonicalPattern::RightColored => &self.right,
            CanonicalPattern::Rainbow => &self.rainbow,
        }
    }
}

/// `q (q-1) ⋯ (q-k+1)`; zero when `k > q`.
fn falling(q: u64, k: u64) -> BigUint {
    if k > q {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(q - i))
}

pub fn expected_counts_exact(n: u64, m: u64, q: u64) -> Result<ExpectationTable> {
    if m < 1 || n < m || q < 1 {
        return Err(Error::params(format!("need n >= m >= 1 and q >= 1 (got n={n}, m={m}, q={q})")));
    }
    let copies = BigInt::from(Pow::pow(&binomial_big(&BigUint::from(n), m), 2u32));
    let cells = m * m;
    let q_cells = BigInt::from(Pow::pow(&BigUint::from(q), cells));
    let ratio = |num: BigUint| BigRational::new(&copies * BigInt::from(num), q_cells.clone());
    let line = ratio(falling(q, m));
    Ok(ExpectationTable {
        n,
        m,
        q,
        monochromatic: ratio(BigUint::from(q)),
        left: line.clone(),
        right: line,
        rainbow: ratio(falling(q, cells)),
    })
}

/// Exact integer totals over a batch of trials.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Totals {
    pub trials: u64,
    pub sum: [u128; 4],
    pub sum_sq: [u128; 4],
}

impl Totals {
    fn from_counts(c: &PatternCounts) -> Self {
        let mut t = Totals {
            trials: 1,
            ..Totals::default()
        };
        for (i, p) in CanonicalPattern::ALL.iter().enumerate() {
            let v = c.get(*p) as u128;
            t.sum[i] = v;
            t.sum_sq[i] = v * v;
        }
        t
    }

    fn merge(mut self, o: Totals) -> Totals {
        self.trials += o.trials;
        for i in 0..4 {
            self.sum[i] += o.sum[i];
            self.sum_sq[i] += o.sum_sq[i];
        }
        self
    }

    pub fn mean(&self, p: CanonicalPattern) -> f64 {
        self.sum[index(p)] as f64 / self.trials as f64
    }

    /// Standard error of the mean; `None` for fewer than two trials.
    pub fn stderr(&self, p: CanonicalPattern) -> Option<f64> {
        let t = self.trials as u128;
        if t < 2 {
            return None;
        }
        let i = index(p);
        // (t Σx² - (Σx)²) / (t² (t - 1)), computed exactly up to the division.
        let num = t * self.sum_sq[i] - self.sum[i] * self.sum[i];
        Some((num as f64 / (t as f64 * t as f64 * (t - 1) as f64)).sqrt())
    }
}

fn index(p: CanonicalPattern) -> usize {
    CanonicalPattern::ALL.iter().position(|&x| x == p).unwrap()
}

fn random_coloring(n: u64, q: u64, seed: u64) -> Result<(ColoringSpec, ColoringSource)> {
    let spec = ColoringSpec::new("uniform_random", n as usize, n as usize).param("q", q).seed(seed);
    let src = instantiate(&spec)?;
    Ok((spec, src))
}

/// Counts canonical copies in `trials` independent uniform colorings; trial
/// `t` uses seed `split(seed, ·, t)`.
pub fn run_trials(n: u64, m: u64, q: u64, trials: u64, seed: u64, work_cap: u128) -> Result<Totals> {
    if trials == 0 {
        return Err(Error::params("trials must be at least 1"));
    }
    if m < 1 || n < m || q < 1 {
        return Err(Error::params(format!("need n >= m >= 1 and q >= 1 (got n={n}, m={m}, q={q})")));
    }
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let (_, src) = random_coloring(n, q, prf::split(seed, TRIAL_DOMAIN, t))?;
            Ok(Totals::from_counts(&count_canonical_bicliques(&src, m as usize, work_cap)?))
        })
        .try_reduce(Totals::default, |a, b| Ok(a.merge(b)))
}

/// True when `src` has no canonical `K_{m,m}` of any pattern.
pub fn certify_zero_copy(src: &ColoringSource, m: usize, work_cap: u128) -> Result<bool> {
    Ok(count_canonical_bicliques(src, m, work_cap)?.is_zero())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCopySearch {
    pub certificate: Option<ColoringSpec>,
    /// Attempts examined up to and including the certificate.
    pub attempts: u64,
}

/// The first of `attempts` random `q`-colorings of `K_{n,n}` without a
/// canonical `K_{m,m}`, as a reproducible spec.
pub fn zero_copy_search(n: u64, m: u64, q: u64, attempts: u64, seed: u64, work_cap: u128) -> Result<ZeroCopySearch> {
    if m < 1 || n < m || q < 1 {
        return Err(Error::params(format!("need n >= m >= 1 and q >= 1 (got n={n}, m={m}, q={q})")));
    }
    let found = (0..attempts)
        .into_par_iter()
        .map(|i| -> Result<Option<(u64, ColoringSpec)>> {
            let (spec, src) = random_coloring(n, q, prf::split(seed, SEARCH_DOMAIN, i))?;
            Ok(certify_zero_copy(&src, m as usize, work_cap)?.then_some((i, spec)))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    match found {
        Some(Ok(Some((i, spec)))) => Ok(ZeroCopySearch {
            certificate: Some(spec),
            attempts: i + 1,
        }),
        Some(Err(e)) => Err(e),
        _ => Ok(ZeroCopySearch {
            certificate: None,
            attempts,
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroCopyReport {
    pub attempts: u64,
    pub certificate: Option<ColoringSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub n: u64,
    pub m: u64,
    pub q: u64,
    pub trials: u64,
    pub exact: BTreeMap<String, String>,
    pub empirical: BTreeMap<String, f64>,
    pub stderr: BTreeMap<String, Option<f64>>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub zero_copy: Option<ZeroCopyReport>,
}

impl ExperimentReport {
    pub fn new(table: &ExpectationTable, totals: &Totals, seed: u64) -> Self {
        let mut r = ExperimentReport {
            n: table.n,
            m: table.m,
            q: table.q,
            trials: totals.trials,
            exact: BTreeMap::new(),
            empirical: BTreeMap::new(),
            stderr: BTreeMap::new(),
            seed,
            zero_copy: None,
        };
        for p in CanonicalPattern::ALL {
            r.exact.insert(p.name().into(), table.get(p).to_string());
            r.empirical.insert(p.name().into(), totals.mean(p));
            r.stderr.insert(p.name().into(), totals.stderr(p));
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{ColorId, Grid};
    use crate::oracle::DEFAULT_WORK_CAP;
    use CanonicalPattern::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_examples() {
        let t = expected_counts_exact(4, 2, 3).unwrap();
        assert_eq!(t.monochromatic, r(4, 3));
        assert_eq!(t.left, r(8, 3));
        assert_eq!(t.right, t.left);
        assert_eq!(t.rainbow, r(0, 1));
        assert_eq!(expected_counts_exact(2, 2, 2).unwrap().monochromatic, r(1, 8));
        assert!(expected_counts_exact(1, 2, 3).is_err());
        assert!(expected_counts_exact(3, 2, 0).is_err());
    }

    /// Average of the oracle counts over every `q`-coloring of `K_{n,n}`.
    fn exhaustive_average(n: usize, m: usize, q: u64) -> [BigRational; 4] {
        let cells = n * n;
        let total = q.pow(cells as u32);
        let mut sums = [0u128; 4];
        for code in 0..total {
            let mut c = code;
            let colors = (0..cells)
                .map(|_| {
                    let v = c % q;
                    c /= q;
                    ColorId(v)
                })
                .collect();
            let src = ColoringSource::dense(Grid::new(n, n, colors).unwrap());
            let counts = count_canonical_bicliques(&src, m, DEFAULT_WORK_CAP).unwrap();
            for p in CanonicalPattern::ALL {
                sums[index(p)] += counts.get(p) as u128;
            }
        }
        sums.map(|s| BigRational::new(BigInt::from(s), BigInt::from(total)))
    }

    #[test]
    fn exact_equals_exhaustive_average() {
        for (n, m, q) in [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 1, 3), (3, 3, 2)] {
            let t = expected_counts_exact(n as u64, m as u64, q).unwrap();
            let avg = exhaustive_average(n, m, q);
            for p in CanonicalPattern::ALL {
                assert_eq!(&avg[index(p)], t.get(p), "{p:?} at n={n}, m={m}, q={q}");
            }
        }
        // Two of the sixteen 2-colorings of K_{2,2} are monochromatic.
        assert_eq!(exhaustive_average(2, 2, 2)[0], r(2, 16));
    }

    #[test]
    fn table_symmetry_and_rainbow_zero() {
        for (n, m, q) in [(5, 2, 3), (6, 3, 8), (9, 3, 20), (4, 2, 4)] {
            let t = expected_counts_exact(n, m, q).unwrap();
            assert_eq!(t.left, t.right);
            assert_eq!(t.rainbow.is_zero(), q < m * m);
        }
    }

    #[test]
    fn trials_are_deterministic_and_single_color_is_exact() {
        let a = run_trials(4, 2, 3, 300, 9, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(a, run_trials(4, 2, 3, 300, 9, DEFAULT_WORK_CAP).unwrap());
        assert_ne!(a, run_trials(4, 2, 3, 300, 10, DEFAULT_WORK_CAP).unwrap());
        let one = run_trials(4, 2, 1, 50, 1, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(one.mean(Monochromatic), 36.0);
        assert_eq!(one.stderr(Monochromatic), Some(0.0));
        assert!(run_trials(4, 2, 3, 0, 1, DEFAULT_WORK_CAP).is_err());
    }

    #[test]
    fn trials_track_expectation() {
        let t = run_trials(4, 2, 3, 20_000, 1, DEFAULT_WORK_CAP).unwrap();
        let exact = expected_counts_exact(4, 2, 3).unwrap();
        for (p, num) in [(Monochromatic, 4), (LeftColored, 8), (RightColored, 8)] {
            assert_eq!(exact.get(p), &r(num, 3));
            let v = num as f64 / 3.0;
            let se = t.stderr(p).unwrap();
            assert!((t.mean(p) - v).abs() <= 4.0 * se, "{p:?}: {} vs {v} (se {se})", t.mean(p));
        }
        assert_eq!(t.mean(Rainbow), 0.0);
    }

    #[test]
    fn two_by_two_certificate() {
        let src = ColoringSource::dense(Grid::from_rows(vec![vec![1, 2], vec![2, 1]]).unwrap());
        assert!(certify_zero_copy(&src, 2, DEFAULT_WORK_CAP).unwrap());
        let s = zero_copy_search(2, 2, 3, 50, 4, DEFAULT_WORK_CAP).unwrap();
        let spec = s.certificate.clone().unwrap();
        let again = instantiate(&spec).unwrap();
        assert!(certify_zero_copy(&again, 2, DEFAULT_WORK_CAP).unwrap());
        assert_eq!(s, zero_copy_search(2, 2, 3, 50, 4, DEFAULT_WORK_CAP).unwrap());
    }

    #[test]
    fn certificates_vanish_for_large_hosts() {
        let s = zero_copy_search(12, 2, 3, 20, 1, DEFAULT_WORK_CAP).unwrap();
        assert_eq!(s.certificate, None);
        assert_eq!(s.attempts, 20);
    }

    #[test]
    fn report_shape() {
        let table = expected_counts_exact(4, 2, 3).unwrap();
        let totals = run_trials(4, 2, 3, 10, 2, DEFAULT_WORK_CAP).unwrap();
        let report = ExperimentReport::new(&table, &totals, 2);
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["exact"]["monochromatic"], "4/3");
        assert_eq!(v["exact"]["rainbow"], "0");
        assert!(v["empirical"]["left"].is_number());
        assert!(v.get("zero_copy").is_none());
        let back: ExperimentReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }
}
