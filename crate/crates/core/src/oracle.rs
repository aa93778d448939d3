//! Exhaustive ground truth: canonical `K_{m,m}` search and counting, the
//! canonical pigeonhole problem on points, and certification of
//! `ER_1(m) = (m-1)² + 1`.
//!
//! Left `m`-sets are enumerated in colex order. For a fixed left set the
//! right side is not enumerated naively: columns are grouped by their color
//! signature on the left set, which decides the monochromatic, left- and
//! right-colored patterns directly. Rainbow copies are `m`-cliques in the
//! graph of color-disjoint injective columns.

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{CanonicalPattern, ColorId, PatternSet, SingletonPattern, Witness};
use crate::combinatorics::{binomial, colex_cmp, colex_unrank, next_colex, BitSet};
use crate::error::{Error, Result};
use crate::generators::{er1_extremal, ColoringSource};

/// Default cap on elementary checks, `C(n1, m) * C(n2, m)`.
pub const DEFAULT_WORK_CAP: u128 = 1_000_000_000;

/// Left sets handed to one rayon task.
const CHUNK: u128 = 256;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternCounts {
    pub monochromatic: u64,
    pub left: u64,
    pub right: u64,
    pub rainbow: u64,
}

impl PatternCounts {
    pub fn get(&self, p: CanonicalPattern) -> u64 {
        match p {
            CanonicalPattern::Monochromatic => self.monochromatic,
            CanonicalPattern::LeftColored => self.left,
            CanonicalPattern::RightColored => self.right,
            CanonicalPattern::Rainbow => self.rainbow,
        }
    }

    pub fn total(&self) -> u64 {
        self.monochromatic + self.left + self.right + self.rainbow
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }

    fn add(self, o: PatternCounts) -> PatternCounts {
        PatternCounts {
            monochromatic: self.monochromatic + o.monochromatic,
            left: self.left + o.left,
            right: self.right + o.right,
            rainbow: self.rainbow + o.rainbow,
        }
    }
}

/// Total elementary checks for an `m`-search on `src`.
pub fn enumeration_size(n1: usize, n2: usize, m: usize) -> Option<u128> {
    binomial(n1 as u64, m as u64)?.checked_mul(binomial(n2 as u64, m as u64)?)
}

fn check_search(src: &ColoringSource, m: usize, cap: u128) -> Result<u128> {
    if m == 0 || m > src.n1().min(src.n2()) {
        return Err(Error::Dimension(format!(
            "m = {m} must lie in 1..={}",
            src.n1().min(src.n2())
        )));
    }
    let required = enumeration_size(src.n1(), src.n2(), m).unwrap_or(u128::MAX);
    if required > cap {
        return Err(Error::WorkCap { required, cap });
    }
    Ok(binomial(src.n1() as u64, m as u64).unwrap())
}

/// Column signatures of `src` restricted to one left set.
struct Columns {
    m: usize,
    n2: usize,
    cells: Vec<ColorId>,
    constant: Vec<bool>,
    injective: Vec<bool>,
}

impl Columns {
    fn new(src: &ColoringSource, left: &[usize]) -> Self {
        let m = left.len();
        let n2 = src.n2();
        let mut cells = Vec::with_capacity(m * n2);
        for b in 0..n2 {
            for &a in left {
                cells.push(src.query(a, b));
            }
        }
        let mut constant = Vec::with_capacity(n2);
        let mut injective = Vec::with_capacity(n2);
        let mut scratch = Vec::with_capacity(m);
        for b in 0..n2 {
            let col = &cells[b * m..(b + 1) * m];
            constant.push(col.iter().all(|&c| c == col[0]));
            scratch.clear();
            scratch.extend_from_slice(col);
            scratch.sort_unstable();
            injective.push(scratch.windows(2).all(|w| w[0] != w[1]));
        }
        Columns {
            m,
            n2,
            cells,
            constant,
            injective,
        }
    }

    fn col(&self, b: usize) -> &[ColorId] {
        &self.cells[b * self.m..(b + 1) * self.m]
    }

    /// Columns grouped by identical signature, each group in increasing order.
    fn groups(&self) -> Vec<Vec<usize>> {
        let mut index: HashMap<&[ColorId], usize> = HashMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for b in 0..self.n2 {
            let g = *index.entry(self.col(b)).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(b);
        }
        groups
    }

    /// Compatibility graph on injective columns: `b ~ b'` iff their color
    /// sets are disjoint. Non-injective columns have no neighbors and are
    /// excluded from the vertex mask.
    fn rainbow_graph(&self) -> (BitSet, Vec<BitSet>) {
        let mut vertices = BitSet::new(self.n2);
        let mut sorted: Vec<Vec<ColorId>> = Vec::with_capacity(self.n2);
        for b in 0..self.n2 {
            let mut v = self.col(b).to_vec();
            v.sort_unstable();
            sorted.push(v);
            if self.injective[b] {
                vertices.insert(b);
            }
        }
        let mut adj = vec![BitSet::new(self.n2); self.n2];
        for b in vertices.iter() {
            for b2 in vertices.iter().take_while(|&x| x < b) {
                if disjoint_sorted(&sorted[b], &sorted[b2]) {
                    adj[b].insert(b2);
                    adj[b2].insert(b);
                }
            }
        }
        (vertices, adj)
    }
}

fn disjoint_sorted(a: &[ColorId], b: &[ColorId]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => return false,
        }
    }
    true
}

/// Colex-first `k`-clique inside `cand`.
fn first_clique(k: usize, cand: &BitSet, adj: &[BitSet]) -> Option<Vec<usize>> {
    if k == 0 {
        return Some(Vec::new());
    }
    for t in cand.iter() {
        if k == 1 {
            return Some(vec![t]);
        }
        let sub = cand.intersect_below(&adj[t], t);
        if sub.count() + 1 < k {
            continue;
        }
        if let Some(mut s) = first_clique(k - 1, &sub, adj) {
            s.push(t);
            return Some(s);
        }
    }
    None
}

fn count_cliques(k: usize, cand: &BitSet, adj: &[BitSet]) -> u64 {
    match k {
        0 => 1,
        1 => cand.count() as u64,
        _ => cand
            .iter()
            .map(|t| {
                let sub = cand.intersect_below(&adj[t], t);
                if sub.count() + 1 < k {
                    0
                } else {
                    count_cliques(k - 1, &sub, adj)
                }
            })
            .sum(),
    }
}

/// Colex-first right set realizing an allowed pattern for this left set.
fn best_for_left(cols: &Columns, allow: PatternSet) -> Option<(Vec<usize>, CanonicalPattern)> {
    let m = cols.m;
    let mut best: Option<(Vec<usize>, CanonicalPattern)> = None;
    let mut offer = |set: Vec<usize>, p: CanonicalPattern| {
        let better = match &best {
            None => true,
            Some((b, bp)) => match colex_cmp(&set, b) {
                Ordering::Less => true,
                Ordering::Equal => p < *bp,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((set, p));
        }
    };

    let want_mono = allow.contains(CanonicalPattern::Monochromatic);
    let want_left = allow.contains(CanonicalPattern::LeftColored);
    if want_mono || want_left {
        for g in cols.groups() {
            if g.len() < m {
                continue;
            }
            let b = g[0];
            if want_mono && cols.constant[b] {
                offer(g[..m].to_vec(), CanonicalPattern::Monochromatic);
            }
            if want_left && cols.injective[b] {
                offer(g[..m].to_vec(), CanonicalPattern::LeftColored);
            }
        }
    }

    if allow.contains(CanonicalPattern::RightColored) {
        // First occurrences of the first m distinct constant colors; this is
        // the colex-minimal valid set.
        let mut seen = Vec::with_capacity(m);
        let mut set = Vec::with_capacity(m);
        for b in (0..cols.n2).filter(|&b| cols.constant[b]) {
            let c = cols.col(b)[0];
            if !seen.contains(&c) {
                seen.push(c);
                set.push(b);
                if set.len() == m {
                    break;
                }
            }
        }
        if set.len() == m {
            offer(set, CanonicalPattern::RightColored);
        }
    }

    if allow.contains(CanonicalPattern::Rainbow) {
        let (vertices, adj) = cols.rainbow_graph();
        if let Some(set) = first_clique(m, &vertices, &adj) {
            offer(set, CanonicalPattern::Rainbow);
        }
    }
    best
}

fn counts_for_left(cols: &Columns) -> PatternCounts {
    let m = cols.m as u64;
    let mut out = PatternCounts::default();
    for g in cols.groups() {
        let ways = binomial(g.len() as u64, m).unwrap() as u64;
        if cols.constant[g[0]] {
            out.monochromatic += ways;
        }
        if cols.injective[g[0]] {
            out.left += ways;
        }
    }
    // Right-colored: choose m constant columns with distinct colors, i.e. the
    // elementary symmetric polynomial e_m of the color-class sizes.
    let mut class_sizes: HashMap<ColorId, u64> = HashMap::new();
    for b in (0..cols.n2).filter(|&b| cols.constant[b]) {
        *class_sizes.entry(cols.col(b)[0]).or_default() += 1;
    }
    let mut e = vec![0u64; cols.m + 1];
    e[0] = 1;
    for s in class_sizes.values() {
        for k in (1..=cols.m).rev() {
            e[k] += e[k - 1] * s;
        }
    }
    out.right = e[cols.m];
    let (vertices, adj) = cols.rainbow_graph();
    out.rainbow = count_cliques(cols.m, &vertices, &adj);
    out
}

/// Visits the left sets with colex ranks in `[start, end)`.
fn for_left_sets<T>(
    n1: usize,
    m: usize,
    start: u128,
    end: u128,
    mut f: impl FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    let mut set = colex_unrank(start, m);
    let mut rank = start;
    while rank < end {
        if let Some(t) = f(&set) {
            return Some(t);
        }
        rank += 1;
        if rank < end && !next_colex(&mut set, n1) {
            break;
        }
    }
    None
}

/// The first witness, in colex order of `(A, B)`, whose pattern lies in
/// `allow`. For `m = 1` ties between patterns resolve in the order
/// monochromatic, left, right, rainbow.
pub fn find_canonical_biclique(
    src: &ColoringSource,
    m: usize,
    allow: PatternSet,
    work_cap: u128,
) -> Result<Option<Witness>> {
    let lefts = check_search(src, m, work_cap)?;
    if allow.is_empty() {
        return Ok(None);
    }
    let chunks = lefts.div_ceil(CHUNK);
    let found = (0..chunks).into_par_iter().find_map_first(|c| {
        let start = c * CHUNK;
        let end = (start + CHUNK).min(lefts);
        for_left_sets(src.n1(), m, start, end, |left| {
            let cols = Columns::new(src, left);
            best_for_left(&cols, allow).map(|(right, p)| Witness::new(left.to_vec(), right, p))
        })
    });
    Ok(found)
}

/// Exact pattern counts over all `C(n1, m) * C(n2, m)` sub-bicliques.
pub fn count_canonical_bicliques(src: &ColoringSource, m: usize, work_cap: u128) -> Result<PatternCounts> {
    let lefts = check_search(src, m, work_cap)?;
    let chunks = lefts.div_ceil(CHUNK);
    let total = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(lefts);
            let mut acc = PatternCounts::default();
            for_left_sets::<()>(src.n1(), m, start, end, |left| {
                acc = acc.add(counts_for_left(&Columns::new(src, left)));
                None
            });
            acc
        })
        .reduce(PatternCounts::default, PatternCounts::add);
    Ok(total)
}

/// Canonical pigeonhole on points: a constant `m`-subset (preferred) or an
/// injective one.
///
/// Constant: the earliest-appearing color class of size at least `m`,
/// truncated to its first `m` indices. Injective: the first index of each of
/// the first `m` distinct colors.
pub fn find_canonical_singleton_set(
    colors: &[ColorId],
    m: usize,
) -> Result<Option<(Vec<usize>, SingletonPattern)>> {
    if m == 0 {
        return Err(Error::params("m must be at least 1"));
    }
    let mut classes: Vec<(ColorId, Vec<usize>)> = Vec::new();
    let mut index: HashMap<ColorId, usize> = HashMap::new();
    for (i, &c) in colors.iter().enumerate() {
        let k = *index.entry(c).or_insert_with(|| {
            classes.push((c, Vec::new()));
            classes.len() - 1
        });
        classes[k].1.push(i);
    }
    if let Some((_, members)) = classes.iter().find(|(_, v)| v.len() >= m) {
        return Ok(Some((members[..m].to_vec(), SingletonPattern::Constant)));
    }
    if classes.len() >= m {
        let firsts = classes[..m].iter().map(|(_, v)| v[0]).collect();
        return Ok(Some((firsts, SingletonPattern::Injective)));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Er1Report {
    pub m: usize,
    /// `(m-1)² + 1`.
    pub n: usize,
    pub lower_certified: bool,
    pub upper_certified: bool,
    /// Class-size profiles enumerated (parts <= m-1, at most m-1 parts).
    pub profiles: u64,
    pub max_profile_total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partitions_checked: Option<u64>,
    pub method: String,
}

/// Enumerates non-increasing part sequences with parts in `1..=max_part` and at
/// most `max_parts` parts; returns (count including the empty profile, max
/// total).
fn bounded_profiles(max_part: usize, max_parts: usize) -> (u64, usize) {
    fn rec(max_part: usize, parts_left: usize, total: usize, count: &mut u64, best: &mut usize) {
        *count += 1;
        *best = (*best).max(total);
        if parts_left == 0 {
            return;
        }
        for p in 1..=max_part {
            rec(p, parts_left - 1, total + p, count, best);
        }
    }
    let (mut count, mut best) = (0, 0);
    rec(max_part, max_parts, 0, &mut count, &mut best);
    (count, best)
}

/// Calls `f` on every set partition of `0..n`, encoded as a restricted
/// growth string. Returns the number of partitions visited, stopping early
/// if `f` returns `false`.
pub fn for_each_set_partition(n: usize, mut f: impl FnMut(&[usize]) -> bool) -> u64 {
    if n == 0 {
        f(&[]);
        return 1;
    }
    let mut a = vec![0usize; n];
    // max[i] = max(a[0..i]).
    let mut max = vec![0usize; n];
    let mut visited = 0u64;
    loop {
        visited += 1;
        if !f(&a) {
            return visited;
        }
        let mut i = n - 1;
        loop {
            if i == 0 {
                return visited;
            }
            if a[i] <= max[i] {
                a[i] += 1;
                let top = max[i].max(a[i]);
                for j in i + 1..n {
                    a[j] = 0;
                    max[j] = top;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Largest `m` for which set-partition exhaustion is run by default:
/// `Bell(10) = 115975` partitions at `m = 4`.
pub const DEFAULT_EXHAUSTIVE_UP_TO: usize = 4;

pub fn er1_verify(m: usize, exhaustive_up_to: usize) -> Result<Er1Report> {
    if m < 2 {
        return Err(Error::params(format!("er1_verify needs m >= 2, got {m}")));
    }
    let n = (m - 1) * (m - 1) + 1;
    let lower_certified = find_canonical_singleton_set(&er1_extremal(m)?, m)?.is_none();

    let (profiles, max_total) = bounded_profiles(m - 1, m - 1);
    let profile_ok = max_total == (m - 1) * (m - 1) && max_total < n;

    let mut method = format!("profile bound ({profiles} profiles, max total {max_total})");
    let mut partitions_checked = None;
    let mut upper_certified = profile_ok;
    if m <= exhaustive_up_to {
        let mut all_found = true;
        let mut colors = vec![ColorId(0); n];
        let visited = for_each_set_partition(n, |rgs| {
            for (c, &k) in colors.iter_mut().zip(rgs) {
                *c = ColorId(k as u64);
            }
            let ok = matches!(find_canonical_singleton_set(&colors, m), Ok(Some(_)));
            all_found &= ok;
            ok
        });
        upper_certified &= all_found;
        partitions_checked = Some(visited);
        method = format!("set-partition exhaustion ({visited} partitions) + {method}");
    }
    Ok(Er1Report {
        m,
        n,
        lower_certified,
        upper_certified,
        profiles,
        max_profile_total: max_total,
        partitions_checked,
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{classify_grid, restrict, verify_witness, Grid};
    use crate::combinatorics::colex_subsets;
    use crate::generators::{instantiate, ColoringSpec, Family};
    use proptest::prelude::*;

    use CanonicalPattern::*;

    const CAP: u128 = DEFAULT_WORK_CAP;

    fn fam(n1: usize, n2: usize, f: Family) -> ColoringSource {
        ColoringSource::family(n1, n2, f).unwrap()
    }

    /// Double loop over (A, B) in colex order with full classification.
    fn reference_find(src: &ColoringSource, m: usize, allow: PatternSet) -> Option<Witness> {
        for a in colex_subsets(src.n1(), m) {
            for b in colex_subsets(src.n2(), m) {
                let set = classify_grid(&restrict(src, &a, &b).unwrap()).unwrap().intersection(allow);
                if let Some(p) = set.iter().next() {
                    return Some(Witness::new(a, b, p));
                }
            }
        }
        None
    }

    fn reference_count(src: &ColoringSource, m: usize) -> PatternCounts {
        let mut c = PatternCounts::default();
        for a in colex_subsets(src.n1(), m) {
            for b in colex_subsets(src.n2(), m) {
                let set = classify_grid(&restrict(src, &a, &b).unwrap()).unwrap();
                c.monochromatic += set.contains(Monochromatic) as u64;
                c.left += set.contains(LeftColored) as u64;
                c.right += set.contains(RightColored) as u64;
                c.rainbow += set.contains(Rainbow) as u64;
            }
        }
        c
    }

    #[test]
    fn find_examples() {
        let ones = fam(3, 3, Family::Monochromatic { color: 1 });
        assert_eq!(
            find_canonical_biclique(&ones, 2, PatternSet::ALL, CAP).unwrap(),
            Some(Witness::new(vec![0, 1], vec![0, 1], Monochromatic))
        );
        let rainbow = fam(3, 3, Family::Rainbow);
        assert_eq!(find_canonical_biclique(&rainbow, 2, PatternSet::only(Monochromatic), CAP).unwrap(), None);
    }

    #[test]
    fn find_matches_double_loop_on_seeded_instance() {
        let src = fam(5, 5, Family::UniformRandom { q: 3, seed: 17 });
        let got = find_canonical_biclique(&src, 2, PatternSet::ALL, CAP).unwrap();
        assert!(got.is_some());
        assert_eq!(got, reference_find(&src, 2, PatternSet::ALL));
        assert!(verify_witness(&src, got.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn count_examples() {
        let ones = fam(3, 3, Family::Monochromatic { color: 1 });
        assert_eq!(
            count_canonical_bicliques(&ones, 2, CAP).unwrap(),
            PatternCounts { monochromatic: 9, ..Default::default() }
        );
        let left = fam(3, 3, Family::LeftLexical);
        assert_eq!(count_canonical_bicliques(&left, 2, CAP).unwrap(), PatternCounts { left: 9, ..Default::default() });
        let rainbow = fam(4, 4, Family::Rainbow);
        assert_eq!(
            count_canonical_bicliques(&rainbow, 2, CAP).unwrap(),
            PatternCounts { rainbow: 36, ..Default::default() }
        );
        // m = 1 counts every edge under every pattern.
        let c = count_canonical_bicliques(&fam(3, 4, Family::UniformRandom { q: 2, seed: 1 }), 1, CAP).unwrap();
        assert_eq!(c, PatternCounts { monochromatic: 12, left: 12, right: 12, rainbow: 12 });
    }

    #[test]
    fn certificate_grid_has_no_copies() {
        let src = ColoringSource::dense(Grid::from_rows(vec![vec![1u64, 2], vec![2, 1]]).unwrap());
        assert_eq!(find_canonical_biclique(&src, 2, PatternSet::ALL, CAP).unwrap(), None);
        assert!(count_canonical_bicliques(&src, 2, CAP).unwrap().is_zero());
    }

    #[test]
    fn work_cap_and_dimension_errors() {
        let src = fam(50, 50, Family::Rainbow);
        match find_canonical_biclique(&src, 3, PatternSet::ALL, 1000) {
            Err(Error::WorkCap { required, cap: 1000 }) => assert_eq!(required, 19600 * 19600),
            other => panic!("{other:?}"),
        }
        assert!(matches!(count_canonical_bicliques(&src, 51, CAP), Err(Error::Dimension(_))));
        assert!(matches!(count_canonical_bicliques(&src, 0, CAP), Err(Error::Dimension(_))));
    }

    #[test]
    fn planting_strictly_increases_count() {
        let base = ColoringSpec::new("uniform_random", 6, 6).param("q", 40).seed(11);
        let before = count_canonical_bicliques(&instantiate(&base).unwrap(), 3, CAP).unwrap();
        for p in CanonicalPattern::ALL {
            let planted = ColoringSpec::new("planted", 6, 6)
                .param("base", serde_json::to_value(&base).unwrap())
                .param("pattern", p.name())
                .param("left", vec![1, 3, 5])
                .param("right", vec![0, 2, 4]);
            let src = instantiate(&planted).unwrap();
            let after = count_canonical_bicliques(&src, 3, CAP).unwrap();
            assert!(after.get(p) > before.get(p), "{p}: {before:?} -> {after:?}");
            let w = find_canonical_biclique(&src, 3, PatternSet::only(p), CAP).unwrap().unwrap();
            assert!(verify_witness(&src, &w).unwrap());
        }
    }

    #[test]
    fn singleton_examples() {
        let ids = |v: &[u64]| v.iter().map(|&x| ColorId(x)).collect::<Vec<_>>();
        assert_eq!(
            find_canonical_singleton_set(&ids(&[1, 1, 2, 2]), 2).unwrap(),
            Some((vec![0, 1], SingletonPattern::Constant))
        );
        assert_eq!(
            find_canonical_singleton_set(&ids(&[1, 2, 3]), 3).unwrap(),
            Some((vec![0, 1, 2], SingletonPattern::Injective))
        );
        assert_eq!(find_canonical_singleton_set(&er1_extremal(3).unwrap(), 3).unwrap(), None);
        assert_eq!(
            find_canonical_singleton_set(&ids(&[5, 3, 5, 3, 3]), 3).unwrap(),
            Some((vec![1, 3, 4], SingletonPattern::Constant))
        );
        assert_eq!(
            find_canonical_singleton_set(&ids(&[4, 4, 7, 9]), 3).unwrap(),
            Some((vec![0, 2, 3], SingletonPattern::Injective))
        );
        assert!(find_canonical_singleton_set(&ids(&[1]), 0).is_err());
    }

    #[test]
    fn set_partitions_are_bell_numbers() {
        let bell = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(for_each_set_partition(n, |_| true), b, "Bell({n})");
        }
    }

    #[test]
    fn er1_examples() {
        let r = er1_verify(2, 4).unwrap();
        assert!(r.lower_certified && r.upper_certified);
        assert_eq!(r.max_profile_total, 1);

        let r = er1_verify(3, 4).unwrap();
        assert!(r.lower_certified && r.upper_certified);
        assert_eq!(r.partitions_checked, Some(52));
        assert_eq!(r.method, "set-partition exhaustion (52 partitions) + profile bound (6 profiles, max total 4)");

        let r = er1_verify(10, 4).unwrap();
        assert!(r.lower_certified && r.upper_certified);
        assert_eq!(r.max_profile_total, 81);
        assert_eq!(r.partitions_checked, None);
        assert!(r.method.starts_with("profile bound"));
        assert!(er1_verify(1, 4).is_err());
    }

    #[test]
    fn one_point_short_has_a_bad_coloring() {
        // (m-1)² points admit the extremal coloring; (m-1)²+1 never do. Check
        // the first statement by brute force over set partitions too.
        let m = 3;
        let mut bad = 0;
        let mut colors = vec![ColorId(0); 4];
        for_each_set_partition(4, |rgs| {
            for (c, &k) in colors.iter_mut().zip(rgs) {
                *c = ColorId(k as u64);
            }
            if find_canonical_singleton_set(&colors, m).unwrap().is_none() {
                bad += 1;
            }
            true
        });
        assert!(bad > 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn find_and_count_match_brute_force(
            n1 in 2usize..6, n2 in 2usize..6, m in 1usize..4, q in 1u64..6, seed in any::<u64>(),
            allow_bits in 1u8..16,
        ) {
            prop_assume!(m <= n1.min(n2));
            let src = fam(n1, n2, Family::UniformRandom { q, seed });
            let allow: PatternSet = CanonicalPattern::ALL.into_iter()
                .enumerate().filter(|(i, _)| allow_bits >> i & 1 == 1).map(|(_, p)| p).collect();
            let got = find_canonical_biclique(&src, m, allow, CAP).unwrap();
            prop_assert_eq!(&got, &reference_find(&src, m, allow));
            let counts = count_canonical_bicliques(&src, m, CAP).unwrap();
            prop_assert_eq!(counts, reference_count(&src, m));
            let any_allowed = allow.iter().any(|p| counts.get(p) > 0);
            prop_assert_eq!(got.is_some(), any_allowed);
            if let Some(w) = got {
                prop_assert!(verify_witness(&src, &w).unwrap());
            }
        }

        #[test]
        fn rainbow_heavy_instances(n in 4usize..8, q in 6u64..30, seed in any::<u64>()) {
            let src = fam(n, n, Family::UniformRandom { q, seed });
            prop_assert_eq!(count_canonical_bicliques(&src, 2, CAP).unwrap(), reference_count(&src, 2));
            prop_assert_eq!(
                find_canonical_biclique(&src, 2, PatternSet::only(Rainbow), CAP).unwrap(),
                reference_find(&src, 2, PatternSet::only(Rainbow))
            );
        }

        #[test]
        fn thread_count_does_not_change_results(seed in any::<u64>()) {
            let src = fam(30, 12, Family::UniformRandom { q: 4, seed });
            let run = |threads| {
                rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
                    (find_canonical_biclique(&src, 2, PatternSet::ALL, CAP).unwrap(),
                     count_canonical_bicliques(&src, 2, CAP).unwrap())
                })
            };
            prop_assert_eq!(run(1), run(4));
        }

        #[test]
        fn random_witnesses_agree_with_edge_pair_definition(
            seed in any::<u64>(), picks in prop::collection::vec(0usize..6, 6), q in 1u64..5,
        ) {
            let src = fam(6, 6, Family::UniformRandom { q, seed });
            let mut left: Vec<usize> = picks[..3].to_vec();
            let mut right: Vec<usize> = picks[3..].to_vec();
            left.sort(); left.dedup(); right.sort(); right.dedup();
            let m = left.len().min(right.len());
            left.truncate(m); right.truncate(m);
            for p in CanonicalPattern::ALL {
                let w = Witness::new(left.clone(), right.clone(), p);
                let expected = (0..m * m).all(|e1| (0..m * m).all(|e2| {
                    let (a1, b1, a2, b2) = (left[e1 / m], right[e1 % m], left[e2 / m], right[e2 % m]);
                    let same = src.query(a1, b1) == src.query(a2, b2);
                    same == match p {
                        Monochromatic => true,
                        LeftColored => a1 == a2,
                        RightColored => b1 == b2,
                        Rainbow => a1 == a2 && b1 == b2,
                    }
                }));
                prop_assert_eq!(verify_witness(&src, &w).unwrap(), expected);
            }
        }
    }
}
