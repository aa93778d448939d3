//! Constructive search for a canonical `K_{m,m}` following the upper-bound
//! argument: a pigeonhole branch over right vertices that color an `m`-set
//! monochromatically, random sampling of a rainbow core `(S1, S2)`, then
//! either a popular-color Kővári–Sós–Turán extraction (left-colored copy) or
//! a greedy maximal rainbow set (rainbow copy).
//!
//! Full-size parameters are far beyond desk scale, so [`Mode::BestEffort`]
//! accepts any dimensions and reports unmet guarantees as typed failures.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, interval};
use crate::canonical::{classify_grid, restrict, verify_witness};
use crate::canonical::{CanonicalPattern, ColorId, SingletonPattern, Witness};
use crate::combinatorics::{binomial, BitSet};
use crate::error::{Error, Result};
use crate::generators::ColoringSource;
use crate::oracle::{find_canonical_singleton_set, DEFAULT_WORK_CAP};
use crate::prf;

const SCAN_CHUNK: usize = 1024;
const SAMPLING_DOMAIN: u64 = 0x5a4d_504c;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Strict,
    BestEffort,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Mode::Strict),
            "best-effort" | "best_effort" => Ok(Mode::BestEffort),
            other => Err(Error::params(format!("unknown mode `{other}`"))),
        }
    }
}

/// Popularity threshold for a left vertex's most frequent color into `S2`.
#[derive(Clone, Debug, PartialEq)]
pub enum Threshold {
    /// `2 m^{1/m} |S2|^{1-1/m}`, evaluated at the size of the sampled `S2`.
    Formula,
    Exact(BigRational),
}

#[derive(Clone, Debug)]
pub struct PipelineParams {
    pub m: usize,
    /// Required host dimensions (checked in strict mode).
    pub n1: BigUint,
    pub n2: BigUint,
    pub tuple_len: usize,
    pub s2_target: BigUint,
    pub threshold: Threshold,
    pub pigeonhole_quota: usize,
    pub max_sampling_retries: u32,
    pub seed: u64,
    pub mode: Mode,
    pub work_cap: u128,
}

/// Full-size parameters: `n1 = 25m⁹`, `n2 = 2 C(n1, m) m²`, tuples of
/// `4m⁴ + m`, `|S2| = 4^m m^{3m+1}`, quota `m²`.
pub fn default_params(m: usize) -> Result<PipelineParams> {
    if m < 2 {
        return Err(Error::params(format!("m must be at least 2, got {m}")));
    }
    let mm = m as u64;
    let tuple_len = 4 * m.checked_pow(4).ok_or_else(|| Error::params("m too large"))? + m;
    Ok(PipelineParams {
        m,
        n1: bounds::n1_size(mm),
        n2: bounds::n2_size(mm),
        tuple_len,
        s2_target: bounds::s2_size(mm),
        threshold: Threshold::Formula,
        pigeonhole_quota: m * m,
        max_sampling_retries: 64,
        seed: 0,
        mode: Mode::Strict,
        work_cap: DEFAULT_WORK_CAP,
    })
}

impl PipelineParams {
    /// Reduced-scale parameters for an `n1 × n2` host: tuples of `3m`, and
    /// `S2` capped at half the candidate right vertices.
    pub fn best_effort(m: usize, n1: usize, n2: usize, seed: u64) -> Result<Self> {
        let mut p = default_params(m)?;
        p.n1 = BigUint::from(n1);
        p.n2 = BigUint::from(n2);
        p.tuple_len = 3 * m;
        p.seed = seed;
        p.mode = Mode::BestEffort;
        Ok(p)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.m;
        if m < 2 {
            return Err(Error::params(format!("m must be at least 2, got {m}")));
        }
        let er1 = (m - 1) * (m - 1) + 1;
        if self.pigeonhole_quota < er1 {
            return Err(Error::params(format!(
                "pigeonhole quota {} is below (m-1)^2 + 1 = {er1}",
                self.pigeonhole_quota
            )));
        }
        if self.tuple_len < 2 * m {
            return Err(Error::params(format!("tuple_len {} is below 2m = {}", self.tuple_len, 2 * m)));
        }
        if self.max_sampling_retries == 0 {
            return Err(Error::params("max_sampling_retries must be positive"));
        }
        if self.s2_target < BigUint::from(m) {
            return Err(Error::params(format!("s2_target must be at least m = {m}")));
        }
        if let Threshold::Exact(t) = &self.threshold {
            if t <= &BigRational::from_integer(0.into()) {
                return Err(Error::params("popularity threshold must be positive"));
            }
        }
        Ok(())
    }

    /// Minimum `|M1|` for the popular-color case.
    pub fn case1_cutoff(&self) -> usize {
        self.m.max(self.tuple_len.saturating_sub(self.m))
    }

    /// `|S2|` actually demanded from `candidates` right vertices.
    pub fn effective_s2_target(&self, candidates: usize) -> usize {
        let fixed = self.s2_target.to_usize().unwrap_or(usize::MAX);
        match self.mode {
            Mode::Strict => fixed,
            Mode::BestEffort => fixed.min(self.m.max(candidates.div_ceil(2))),
        }
    }
}

fn check_b(src: &ColoringSource, b: usize) -> Result<()> {
    if b >= src.n2() {
        return Err(Error::Dimension(format!("right vertex {b} outside 0..{}", src.n2())));
    }
    Ok(())
}

/// `Δ_b` as a list indexed by left vertex.
pub fn induced_coloring(src: &ColoringSource, b: usize) -> Result<Vec<ColorId>> {
    check_b(src, b)?;
    Ok(src.column(b))
}

/// The `m` smallest members of the earliest-starting color class of size at
/// least `m`.
fn mono_mset(colors: &[ColorId], m: usize) -> Option<Vec<usize>> {
    let mut counts: HashMap<ColorId, usize> = HashMap::new();
    for &c in colors {
        *counts.entry(c).or_default() += 1;
    }
    let first = colors.iter().position(|c| counts[c] >= m)?;
    let color = colors[first];
    Some(
        colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == color)
            .map(|(i, _)| i)
            .take(m)
            .collect(),
    )
}

/// A monochromatic `m`-set of `Δ_b`, if any (see [`mono_mset`] for the
/// choice).
pub fn mono_mset_of(src: &ColoringSource, b: usize, m: usize) -> Result<Option<Vec<usize>>> {
    check_b(src, b)?;
    Ok(mono_mset(&src.column(b), m))
}

/// Result of streaming right vertices for the pigeonhole branch.
#[derive(Clone, Debug, Default)]
pub struct PigeonholeScan {
    pub witness: Option<Witness>,
    pub scanned: usize,
    /// Right vertices without any monochromatic `m`-set (only complete when
    /// the scan ran to the end).
    pub candidates: Vec<usize>,
    pub mono_columns: usize,
    pub distinct_msets: usize,
}

pub fn pigeonhole_scan(src: &ColoringSource, m: usize, quota: usize, work_cap: u128) -> Result<PigeonholeScan> {
    if m == 0 || m > src.n1() {
        return Err(Error::Dimension(format!("m = {m} does not fit n1 = {}", src.n1())));
    }
    if quota < (m - 1) * (m - 1) + 1 {
        return Err(Error::params(format!("quota {quota} is below (m-1)^2 + 1")));
    }
    let n1 = src.n1() as u128;
    let mut out = PigeonholeScan::default();
    let mut hits: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    let mut start = 0;
    while start < src.n2() {
        let end = (start + SCAN_CHUNK).min(src.n2());
        if end as u128 * n1 > work_cap {
            return Err(Error::WorkCap {
                required: n1 * src.n2() as u128,
                cap: work_cap,
            });
        }
        let found: Vec<Option<Vec<usize>>> = (start..end)
            .into_par_iter()
            .map(|b| mono_mset(&src.column(b), m))
            .collect();
        for (b, set) in (start..end).zip(found) {
            out.scanned = b + 1;
            let Some(set) = set else {
                out.candidates.push(b);
                continue;
            };
            out.mono_columns += 1;
            let list = hits.entry(set.clone()).or_default();
            list.push(b);
            if list.len() == quota {
                let t1 = set;
                let bs = list.clone();
                let colors: Vec<ColorId> = bs.iter().map(|&b| src.query(t1[0], b)).collect();
                let (chosen, kind) = find_canonical_singleton_set(&colors, m)?
                    .ok_or_else(|| Error::Internal("pigeonhole quota reached without a canonical subset".into()))?;
                let pattern = match kind {
                    SingletonPattern::Constant | SingletonPattern::Both => CanonicalPattern::Monochromatic,
                    _ => CanonicalPattern::RightColored,
                };
                let right: Vec<usize> = chosen.iter().map(|&i| bs[i]).collect();
                out.distinct_msets = hits.len();
                out.witness = Some(checked(src, Witness::new(t1, right, pattern))?);
                return Ok(out);
            }
        }
        start = end;
    }
    out.distinct_msets = hits.len();
    Ok(out)
}

/// The pigeonhole branch alone: a monochromatic or right-colored witness
/// once some `m`-set is colored monochromatically by `quota` right vertices.
pub fn pigeonhole_branch(src: &ColoringSource, m: usize, quota: usize) -> Result<Option<Witness>> {
    Ok(pigeonhole_scan(src, m, quota, DEFAULT_WORK_CAP)?.witness)
}

fn checked(src: &ColoringSource, w: Witness) -> Result<Witness> {
    if verify_witness(src, &w)? {
        Ok(w)
    } else {
        Err(Error::Internal(format!("produced witness does not verify: {w:?}")))
    }
}

fn injective_on(src: &ColoringSource, b: usize, left: &[usize]) -> bool {
    let mut colors: Vec<ColorId> = left.iter().map(|&a| src.query(a, b)).collect();
    colors.sort_unstable();
    colors.windows(2).all(|w| w[0] != w[1])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RainbowCore {
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sampling {
    pub core: Option<RainbowCore>,
    pub target: usize,
    /// Rainbow right vertices found by each attempt.
    pub counts: Vec<u64>,
}

impl Sampling {
    pub fn best(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }
}

/// The `attempt`-th sampled tuple: `tuple_len` independent uniform left
/// vertices.
pub fn sample_tuple(n1: usize, tuple_len: usize, seed: u64, attempt: u32) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(prf::split(seed, SAMPLING_DOMAIN, attempt as u64));
    (0..tuple_len).map(|_| rng.random_range(0..n1)).collect()
}

/// Right vertices among `candidates` that color `tuple` injectively, in
/// candidate order. A tuple with a repeated vertex is rainbow for none.
pub fn rainbow_columns(src: &ColoringSource, candidates: &[usize], tuple: &[usize]) -> Vec<usize> {
    let mut sorted = tuple.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Vec::new();
    }
    candidates.par_iter().copied().filter(|&b| injective_on(src, b, tuple)).collect()
}

/// Samples tuples until one is rainbow for at least the effective `|S2|`
/// target of the candidates; `S2` is the first that many in index order.
pub fn sample_rainbow_core(src: &ColoringSource, candidates: &[usize], p: &PipelineParams) -> Result<Sampling> {
    if candidates.is_empty() {
        return Err(Error::params("rainbow-core sampling needs at least one candidate right vertex"));
    }
    if p.tuple_len > src.n1() {
        return Err(Error::params(format!("tuple_len {} exceeds n1 = {}", p.tuple_len, src.n1())));
    }
    let target = p.effective_s2_target(candidates.len());
    let mut counts = Vec::new();
    for attempt in 0..p.max_sampling_retries {
        let tuple = sample_tuple(src.n1(), p.tuple_len, p.seed, attempt);
        let rainbow = rainbow_columns(src, candidates, &tuple);
        counts.push(rainbow.len() as u64);
        if rainbow.len() >= target {
            return Ok(Sampling {
                core: Some(RainbowCore {
                    s1: tuple,
                    s2: rainbow[..target].to_vec(),
                }),
                target,
                counts,
            });
        }
    }
    Ok(Sampling {
        core: None,
        target,
        counts,
    })
}

/// `freq >= τ`, decided exactly. For the formula threshold this is
/// `freq^m >= 2^m m |S2|^{m-1}`.
pub fn meets_threshold(freq: u64, threshold: &Threshold, m: usize, s2: usize) -> bool {
    match threshold {
        Threshold::Formula => {
            let lhs = Pow::pow(&BigUint::from(freq), m);
            let rhs = Pow::pow(&BigUint::from(2u32), m) * BigUint::from(m) * Pow::pow(&BigUint::from(s2), m - 1);
            lhs >= rhs
        }
        Threshold::Exact(t) => BigRational::from_integer(freq.into()) >= *t,
    }
}

/// Decimal rendering of the threshold used for `|S2| = s2`.
pub fn threshold_display(threshold: &Threshold, m: usize, s2: usize) -> String {
    match threshold {
        Threshold::Formula => {
            let inner = BigUint::from(m) * Pow::pow(&BigUint::from(s2), m - 1);
            let r = interval::root(&BigRational::from_integer(inner.into()), m as u32, 64);
            (&interval::Interval::from_int(2) * &r).display(6)
        }
        Threshold::Exact(t) => interval::Interval::exact(t.clone()).display(6),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PopularitySplit {
    /// Popular vertices with their popular color, in `S1` order.
    pub m1: Vec<(usize, ColorId)>,
    pub m1_prime: Vec<usize>,
}

/// Splits `S1` by whether a vertex's most frequent color into `S2` (ties to
/// the smaller color) reaches the threshold.
pub fn popularity_split(
    src: &ColoringSource,
    s1: &[usize],
    s2: &[usize],
    m: usize,
    threshold: &Threshold,
) -> Result<PopularitySplit> {
    if let Threshold::Exact(t) = threshold {
        if t <= &BigRational::from_integer(0.into()) {
            return Err(Error::params("popularity threshold must be positive"));
        }
    }
    let tallies: Vec<(ColorId, u64)> = s1
        .par_iter()
        .map(|&a| {
            let mut freq: HashMap<ColorId, u64> = HashMap::new();
            for &b in s2 {
                *freq.entry(src.query(a, b)).or_default() += 1;
            }
            freq.into_iter()
                .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)))
                .unwrap_or((ColorId(0), 0))
        })
        .collect();
    let mut split = PopularitySplit {
        m1: Vec::new(),
        m1_prime: Vec::new(),
    };
    for (&a, &(color, freq)) in s1.iter().zip(&tallies) {
        if freq > 0 && meets_threshold(freq, threshold, m, s2.len()) {
            split.m1.push((a, color));
        } else {
            split.m1_prime.push(a);
        }
    }
    Ok(split)
}

/// First `m`-subset (colex over positions of the smaller side) whose common
/// neighbourhood has at least `m` vertices, paired with its `m` first common
/// neighbours. Returns `(left part, right part)` as vertex ids.
pub fn kst_extract<F>(
    left: &[usize],
    right: &[usize],
    adj: F,
    m: usize,
    work_cap: u128,
) -> Result<Option<(Vec<usize>, Vec<usize>)>>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    if m == 0 {
        return Err(Error::params("m must be at least 1"));
    }
    if left.len() < m || right.len() < m {
        return Ok(None);
    }
    let swap = right.len() < left.len();
    let (small, large) = if swap { (right, left) } else { (left, right) };
    let subsets = binomial(small.len() as u64, m as u64).unwrap_or(u128::MAX);
    if subsets > work_cap {
        return Err(Error::WorkCap {
            required: subsets,
            cap: work_cap,
        });
    }
    let neighbours: Vec<BitSet> = small
        .par_iter()
        .map(|&u| {
            let mut set = BitSet::new(large.len());
            for (j, &v) in large.iter().enumerate() {
                let hit = if swap { adj(v, u) } else { adj(u, v) };
                if hit {
                    set.insert(j);
                }
            }
            set
        })
        .collect();
    let full = BitSet::prefix(large.len(), large.len());
    let found = (m - 1..small.len())
        .into_par_iter()
        .find_map_first(|top| {
            let common = full.intersect(&neighbours[top]);
            if common.count() < m {
                return None;
            }
            let mut chosen = vec![top];
            dense_subset(&neighbours, top, m - 1, &common, m, &mut chosen).map(|common| (chosen, common))
        });
    let Some((mut chosen, common)) = found else {
        return Ok(None);
    };
    chosen.sort_unstable();
    let a: Vec<usize> = chosen.iter().map(|&i| small[i]).collect();
    let b: Vec<usize> = common.iter().take(m).map(|j| large[j]).collect();
    Ok(Some(if swap { (b, a) } else { (a, b) }))
}

/// Extends `chosen` by `need` positions below `bound`, largest first and in
/// increasing order at each level, keeping the common neighbourhood at size
/// `m` or more. The first success is the colex-first subset.
fn dense_subset(
    neighbours: &[BitSet],
    bound: usize,
    need: usize,
    common: &BitSet,
    m: usize,
    chosen: &mut Vec<usize>,
) -> Option<BitSet> {
    if need == 0 {
        return Some(common.clone());
    }
    for e in need - 1..bound {
        let next = common.intersect(&neighbours[e]);
        if next.count() < m {
            continue;
        }
        chosen.push(e);
        if let Some(done) = dense_subset(neighbours, e, need - 1, &next, m, chosen) {
            return Some(done);
        }
        chosen.pop();
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case1 {
    pub witness: Option<Witness>,
    pub edges_kept: u64,
}

/// Keeps only edges from popular vertices in their popular color and
/// extracts a `K_{m,m}`; rainbow columns force the result to be
/// left-colored.
pub fn case1(src: &ColoringSource, m1: &[(usize, ColorId)], s2: &[usize], m: usize, work_cap: u128) -> Result<Case1> {
    if m1.len() < m {
        return Err(Error::params(format!("case 1 needs at least m = {m} popular vertices")));
    }
    let popular: HashMap<usize, ColorId> = m1.iter().copied().collect();
    let left: Vec<usize> = m1.iter().map(|&(a, _)| a).collect();
    let adj = |a: usize, b: usize| src.query(a, b) == popular[&a];
    let edges_kept = left
        .par_iter()
        .map(|&a| s2.iter().filter(|&&b| adj(a, b)).count() as u64)
        .sum();
    let Some((r1, r2)) = kst_extract(&left, s2, adj, m, work_cap)? else {
        return Ok(Case1 {
            witness: None,
            edges_kept,
        });
    };
    let grid = restrict(src, &r1, &r2)?;
    if !classify_grid(&grid)?.contains(CanonicalPattern::LeftColored) {
        return Err(Error::Internal(format!(
            "popular-color biclique on {r1:?} x {r2:?} is not left-colored"
        )));
    }
    let witness = checked(src, Witness::new(r1, r2, CanonicalPattern::LeftColored))?;
    Ok(Case1 {
        witness: Some(witness),
        edges_kept,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case2 {
    /// The greedy rainbow set, in index order.
    pub x: Vec<usize>,
    pub witness: Option<Witness>,
}

/// Greedy maximal `X ⊆ S2` (in the given order) with `M1' × X` rainbow.
pub fn case2_max_rainbow(src: &ColoringSource, m1_prime: &[usize], s2: &[usize]) -> Result<Case2> {
    let m = m1_prime.len();
    if m == 0 {
        return Err(Error::params("case 2 needs a nonempty left set"));
    }
    let mut used: HashSet<ColorId> = HashSet::new();
    let mut x = Vec::new();
    for &b in s2 {
        let colors: Vec<ColorId> = m1_prime.iter().map(|&a| src.query(a, b)).collect();
        let mut own: HashSet<ColorId> = HashSet::with_capacity(m);
        if colors.iter().all(|c| !used.contains(c) && own.insert(*c)) {
            used.extend(colors);
            x.push(b);
        }
    }
    let witness = if x.len() >= m {
        Some(checked(
            src,
            Witness::new(m1_prime.to_vec(), x[..m].to_vec(), CanonicalPattern::Rainbow),
        )?)
    } else {
        None
    };
    Ok(Case2 { x, witness })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Pigeonhole,
    Case1,
    Case2,
    Failure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    PreconditionUnmet,
    SamplingExhausted,
    KstExtractionFailed,
    WorkCap,
    RainbowSetTooSmall,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Stat {
    Int(u64),
    Text(String),
    List(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub branch: Branch,
    pub witness: Option<Witness>,
    pub failure_reason: Option<FailureReason>,
    pub stats: BTreeMap<String, Stat>,
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

struct Recorder {
    stats: BTreeMap<String, Stat>,
}

impl Recorder {
    fn int(&mut self, key: &str, v: impl TryInto<u64>) {
        self.stats.insert(key.into(), Stat::Int(v.try_into().unwrap_or(u64::MAX)));
    }

    fn text(&mut self, key: &str, v: impl ToString) {
        self.stats.insert(key.into(), Stat::Text(v.to_string()));
    }

    fn done(self, branch: Branch, witness: Option<Witness>) -> PipelineReport {
        PipelineReport {
            branch,
            witness,
            failure_reason: None,
            stats: self.stats,
        }
    }

    fn fail(mut self, reason: FailureReason, detail: impl ToString) -> PipelineReport {
        self.text("failure_detail", detail);
        PipelineReport {
            branch: Branch::Failure,
            witness: None,
            failure_reason: Some(reason),
            stats: self.stats,
        }
    }
}

/// Runs every stage and reports the outcome. Invalid parameters are errors;
/// unmet guarantees become failure reports.
pub fn run_pipeline(src: &ColoringSource, p: &PipelineParams) -> Result<PipelineReport> {
    p.validate()?;
    let m = p.m;
    if m > src.n1() || m > src.n2() {
        return Err(Error::Dimension(format!(
            "m = {m} exceeds the host {}x{}",
            src.n1(),
            src.n2()
        )));
    }
    let mut rec = Recorder { stats: BTreeMap::new() };
    rec.text("mode", if p.mode == Mode::Strict { "strict" } else { "best_effort" });
    rec.int("m", m);
    rec.int("n1", src.n1());
    rec.int("n2", src.n2());
    rec.int("pigeonhole_quota", p.pigeonhole_quota);
    rec.int("tuple_len", p.tuple_len);

    if p.mode == Mode::Strict {
        if BigUint::from(src.n1()) < p.n1 || BigUint::from(src.n2()) < p.n2 {
            return Ok(rec.fail(
                FailureReason::PreconditionUnmet,
                format!("strict mode needs a host of at least {} x {}", p.n1, p.n2),
            ));
        }
        let full = default_params(m)?;
        if p.tuple_len != full.tuple_len || p.s2_target != full.s2_target {
            return Ok(rec.fail(
                FailureReason::PreconditionUnmet,
                "strict mode uses the full tuple length and rainbow-core size",
            ));
        }
    }

    let scan = match pigeonhole_scan(src, m, p.pigeonhole_quota, p.work_cap) {
        Ok(scan) => scan,
        Err(e @ Error::WorkCap { .. }) => return Ok(rec.fail(FailureReason::WorkCap, e)),
        Err(e) => return Err(e),
    };
    rec.int("b_scanned", scan.scanned);
    rec.int("mono_columns", scan.mono_columns);
    rec.int("distinct_mono_msets", scan.distinct_msets);
    if let Some(w) = scan.witness {
        return Ok(rec.done(Branch::Pigeonhole, Some(w)));
    }
    rec.int("candidates", scan.candidates.len());
    if scan.candidates.is_empty() {
        return Ok(rec.fail(FailureReason::PreconditionUnmet, "no right vertex lacks a monochromatic m-set"));
    }
    if p.tuple_len > src.n1() {
        return Ok(rec.fail(
            FailureReason::PreconditionUnmet,
            format!("tuple_len {} exceeds n1 = {}", p.tuple_len, src.n1()),
        ));
    }
    let sampling_work = scan.candidates.len() as u128 * p.tuple_len as u128 * p.max_sampling_retries as u128;
    if sampling_work > p.work_cap {
        return Ok(rec.fail(
            FailureReason::WorkCap,
            Error::WorkCap {
                required: sampling_work,
                cap: p.work_cap,
            },
        ));
    }

    let sampling = sample_rainbow_core(src, &scan.candidates, p)?;
    rec.int("s2_target", sampling.target);
    rec.int("sampling_attempts", sampling.counts.len());
    rec.int("best_rainbow_count", sampling.best());
    rec.stats.insert("rainbow_counts".into(), Stat::List(sampling.counts.clone()));
    let Some(core) = sampling.core else {
        return Ok(rec.fail(
            FailureReason::SamplingExhausted,
            format!("best attempt found {} of {} rainbow columns", sampling.best(), sampling.target),
        ));
    };
    let s2_len = core.s2.len();
    rec.text("popularity_threshold", threshold_display(&p.threshold, m, s2_len));

    let split = popularity_split(src, &core.s1, &core.s2, m, &p.threshold)?;
    rec.int("m1_size", split.m1.len());
    rec.int("m1_prime_size", split.m1_prime.len());
    let cutoff = p.case1_cutoff();
    rec.int("case1_cutoff", cutoff);

    if split.m1.len() >= cutoff {
        let kept = match p.mode {
            Mode::Strict => &split.m1[..cutoff],
            Mode::BestEffort => &split.m1[..],
        };
        rec.int("case1_vertices", kept.len());
        if let Ok(b) = bounds::kst_bound(kept.len() as u64, s2_len as u64, m as u64) {
            rec.text("case1_kst_bound", b.display(6));
        }
        let outcome = match case1(src, kept, &core.s2, m, p.work_cap) {
            Ok(o) => o,
            Err(e @ Error::WorkCap { .. }) => return Ok(rec.fail(FailureReason::WorkCap, e)),
            Err(e) => return Err(e),
        };
        rec.int("case1_edges_kept", outcome.edges_kept);
        return Ok(match outcome.witness {
            Some(w) => rec.done(Branch::Case1, Some(w)),
            None => rec.fail(FailureReason::KstExtractionFailed, "popular-edge graph has no K_{m,m}"),
        });
    }

    let m1_prime = &split.m1_prime[..m];
    let outcome = case2_max_rainbow(src, m1_prime, &core.s2)?;
    rec.int("x_size", outcome.x.len());
    Ok(match outcome.witness {
        Some(w) => rec.done(Branch::Case2, Some(w)),
        None => rec.fail(
            FailureReason::RainbowSetTooSmall,
            format!("maximal rainbow set has {} < m right vertices", outcome.x.len()),
        ),
    })
}

impl PipelineParams {
    /// Overrides the popularity threshold with an exact value.
    pub fn with_threshold(mut self, t: BigRational) -> Self {
        self.threshold = Threshold::Exact(t);
        self
    }
}
