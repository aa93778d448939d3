//! Coloring sources: dense matrices and seeded procedural families.
//!
//! Every procedural family is random-access. Randomized families derive each
//! edge color from [`prf::edge`] (counter mode), so a query never depends on
//! which edges were queried before or on which thread asks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::canonical::{CanonicalPattern, ColorId, Grid};
use crate::error::{Error, Result};
use crate::prf;

pub mod io;

/// Default cap on `n1 * n2` for [`materialize`].
pub const DEFAULT_CELL_CAP: u128 = 100_000_000;

/// Planted sub-grids draw their colors from `PLANT_BASE..`, above every
/// color a built-in family emits at realistic sizes.
pub const PLANT_BASE: u64 = 1 << 62;

/// `(x, y) ↦ (x + y)(x + y + 1)/2 + y`, the Cantor pairing bijection.
pub fn pair_encode(x: u64, y: u64) -> Option<u64> {
    let s = x.checked_add(y)?;
    let tri = if s % 2 == 0 {
        (s / 2).checked_mul(s.checked_add(1)?)?
    } else {
        s.checked_mul(s.div_ceil(2))?
    };
    tri.checked_add(y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Palette {
    /// Column `b` uses the colors `b*n1 .. (b+1)*n1`; no color repeats
    /// anywhere in the coloring.
    Disjoint,
    /// Every column permutes the shared pool `0..n1`; three columns in four
    /// use the identity, so vertex `a` has the popular color `a`.
    Shared,
}

impl FromStr for Palette {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "disjoint" => Ok(Palette::Disjoint),
            "shared" => Ok(Palette::Shared),
            other => Err(Error::params(format!("unknown palette `{other}`"))),
        }
    }
}

/// A resolved procedural family.
#[derive(Clone, Debug)]
pub enum Family {
    Monochromatic { color: u64 },
    /// `Δ(a, b) = a`.
    LeftLexical,
    /// `Δ(a, b) = b`.
    RightLexical,
    /// `Δ(a, b) = a * n2 + b`.
    Rainbow,
    /// Independent uniform colors in `0..q`.
    UniformRandom { q: u64, seed: u64 },
    /// `Δ(a, b) = pair(a / r, b / s)`.
    Block { r: usize, s: usize },
    PerVertexRainbow { seed: u64, palette: Palette },
    Planted(Planted),
}

/// A base coloring with one canonical `m × m` sub-grid overwritten.
#[derive(Clone, Debug)]
pub struct Planted {
    base: Arc<ColoringSource>,
    pattern: CanonicalPattern,
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Planted {
    pub fn new(
        base: ColoringSource,
        pattern: CanonicalPattern,
        mut left: Vec<usize>,
        mut right: Vec<usize>,
    ) -> Result<Self> {
        left.sort_unstable();
        right.sort_unstable();
        if left.is_empty() || left.len() != right.len() {
            return Err(Error::params("planted witness needs two equal non-empty vertex lists"));
        }
        if left.windows(2).any(|w| w[0] == w[1]) || right.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::params("planted vertex lists must be distinct"));
        }
        if *left.last().unwrap() >= base.n1() || *right.last().unwrap() >= base.n2() {
            return Err(Error::params("planted vertices out of range"));
        }
        Ok(Planted {
            base: Arc::new(base),
            pattern,
            left,
            right,
        })
    }

    pub fn pattern(&self) -> CanonicalPattern {
        self.pattern
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    fn color(&self, a: usize, b: usize) -> ColorId {
        match (self.left.binary_search(&a), self.right.binary_search(&b)) {
            (Ok(i), Ok(j)) => {
                let m = self.left.len() as u64;
                let off = match self.pattern {
                    CanonicalPattern::Monochromatic => 0,
                    CanonicalPattern::LeftColored => i as u64,
                    CanonicalPattern::RightColored => j as u64,
                    CanonicalPattern::Rainbow => i as u64 * m + j as u64,
                };
                ColorId(PLANT_BASE + off)
            }
            _ => self.base.query(a, b),
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Dense(Arc<[ColorId]>),
    Family(Family),
}

/// An edge coloring of `K_{n1,n2}`, queryable by `(left, right)` pair.
#[derive(Clone, Debug)]
pub struct ColoringSource {
    n1: usize,
    n2: usize,
    kind: Kind,
    spec: Option<ColoringSpec>,
}

impl ColoringSource {
    pub fn dense(grid: Grid) -> Self {
        ColoringSource {
            n1: grid.rows(),
            n2: grid.cols(),
            kind: Kind::Dense(grid.as_slice().into()),
            spec: None,
        }
    }

    /// Builds a family source directly, validating its parameters.
    pub fn family(n1: usize, n2: usize, family: Family) -> Result<Self> {
        if n1 == 0 || n2 == 0 {
            return Err(Error::params(format!("dimensions must be positive, got {n1}x{n2}")));
        }
        match &family {
            Family::UniformRandom { q, .. } if *q < 1 => {
                return Err(Error::params("uniform_random needs q >= 1"))
            }
            Family::Block { r, s } => {
                if *r < 1 || *s < 1 {
                    return Err(Error::params("block sizes r, s must be >= 1"));
                }
                if *r > n1 {
                    return Err(Error::params(format!("block r = {r} exceeds n1 = {n1}")));
                }
                if *s > n2 {
                    return Err(Error::params(format!("block s = {s} exceeds n2 = {n2}")));
                }
            }
            Family::Rainbow | Family::PerVertexRainbow { palette: Palette::Disjoint, .. } => {
                if (n1 as u128) * (n2 as u128) > PLANT_BASE as u128 {
                    return Err(Error::params("dimensions too large for distinct 64-bit colors"));
                }
            }
            Family::Planted(p)
                if (p.base.n1 != n1 || p.base.n2 != n2) => {
                    return Err(Error::params("planted base dimensions differ from host"));
                }
            _ => {}
        }
        Ok(ColoringSource {
            n1,
            n2,
            kind: Kind::Family(family),
            spec: None,
        })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    /// The spec this source was instantiated from, if any.
    pub fn spec(&self) -> Option<&ColoringSpec> {
        self.spec.as_ref()
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.kind, Kind::Dense(_))
    }

    /// Color of edge `(a, b)`. Panics when out of range; callers validate
    /// indices at their API boundary.
    #[inline]
    pub fn query(&self, a: usize, b: usize) -> ColorId {
        assert!(a < self.n1 && b < self.n2, "edge ({a}, {b}) outside {}x{}", self.n1, self.n2);
        match &self.kind {
            Kind::Dense(cells) => cells[a * self.n2 + b],
            Kind::Family(f) => match f {
                Family::Monochromatic { color } => ColorId(*color),
                Family::LeftLexical => ColorId(a as u64),
                Family::RightLexical => ColorId(b as u64),
                Family::Rainbow => ColorId((a * self.n2 + b) as u64),
                Family::UniformRandom { q, seed } => ColorId(prf::edge(*seed, a, b) % q),
                Family::Block { r, s } => ColorId(
                    pair_encode((a / r) as u64, (b / s) as u64).expect("block pair code fits u64"),
                ),
                Family::PerVertexRainbow { seed, palette } => {
                    let n1 = self.n1 as u64;
                    match palette {
                        Palette::Disjoint => {
                            let off = prf::prf(*seed, &[1, b as u64]) % n1;
                            ColorId(b as u64 * n1 + (a as u64 + off) % n1)
                        }
                        Palette::Shared => {
                            let shift = if n1 > 1 && prf::prf(*seed, &[2, b as u64]).is_multiple_of(4) {
                                1 + prf::prf(*seed, &[3, b as u64]) % (n1 - 1)
                            } else {
                                0
                            };
                            ColorId((a as u64 + shift) % n1)
                        }
                    }
                }
                Family::Planted(p) => p.color(a, b),
            },
        }
    }

    /// The coloring `Δ_b` that right vertex `b` induces on the left side.
    pub fn column(&self, b: usize) -> Vec<ColorId> {
        (0..self.n1).map(|a| self.query(a, b)).collect()
    }
}

/// Serializable description of a procedural coloring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoringSpec {
    pub family: String,
    pub n1: usize,
    pub n2: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: BTreeMap<String, Value>,
}

impl ColoringSpec {
    pub fn new(family: impl Into<String>, n1: usize, n2: usize) -> Self {
        ColoringSpec {
            family: family.into(),
            n1,
            n2,
            seed: None,
            params: BTreeMap::new(),
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }

    /// Whether instantiation consumes the seed.
    pub fn is_randomized(&self) -> bool {
        match self.family.as_str() {
            "uniform_random" | "per_vertex_rainbow" => true,
            "planted" => self
                .params
                .get("base")
                .and_then(|b| serde_json::from_value::<ColoringSpec>(b.clone()).ok())
                .is_some_and(|b| b.is_randomized()),
            _ => false,
        }
    }
}

impl fmt::Display for ColoringSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

pub const FAMILIES: [&str; 8] = [
    "monochromatic",
    "left_lexical",
    "right_lexical",
    "rainbow",
    "uniform_random",
    "block",
    "per_vertex_rainbow",
    "planted",
];

struct Params<'a> {
    family: &'a str,
    map: &'a BTreeMap<String, Value>,
}

impl Params<'_> {
    fn allow(&self, keys: &[&str]) -> Result<()> {
        for k in self.map.keys() {
            if !keys.contains(&k.as_str()) {
                return Err(Error::params(format!("{}: unexpected parameter `{k}`", self.family)));
            }
        }
        Ok(())
    }

    fn uint(&self, key: &str) -> Result<Option<u64>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(Some).ok_or_else(|| {
                Error::params(format!("{}: `{key}` must be a non-negative integer", self.family))
            }),
        }
    }

    fn required_uint(&self, key: &str) -> Result<u64> {
        self.uint(key)?
            .ok_or_else(|| Error::params(format!("{}: missing parameter `{key}`", self.family)))
    }

    fn str(&self, key: &str) -> Result<Option<&str>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_str()
                .map(Some)
                .ok_or_else(|| Error::params(format!("{}: `{key}` must be a string", self.family))),
        }
    }

    fn index_list(&self, key: &str) -> Result<Option<Vec<usize>>> {
        match self.map.get(key) {
            None => Ok(None),
            Some(v) => serde_json::from_value(v.clone()).map(Some).map_err(|_| {
                Error::params(format!("{}: `{key}` must be a list of indices", self.family))
            }),
        }
    }
}

fn require_seed(spec: &ColoringSpec) -> Result<u64> {
    spec.seed
        .ok_or_else(|| Error::params(format!("{}: randomized family requires a seed", spec.family)))
}

fn to_usize(v: u64, what: &str) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::params(format!("{what} out of range")))
}

/// Resolves a spec through the family registry.
pub fn instantiate(spec: &ColoringSpec) -> Result<ColoringSource> {
    let p = Params {
        family: &spec.family,
        map: &spec.params,
    };
    let family = match spec.family.as_str() {
        "monochromatic" => {
            p.allow(&["c"])?;
            Family::Monochromatic {
                color: p.uint("c")?.unwrap_or(0),
            }
        }
        "left_lexical" => {
            p.allow(&[])?;
            Family::LeftLexical
        }
        "right_lexical" => {
            p.allow(&[])?;
            Family::RightLexical
        }
        "rainbow" => {
            p.allow(&[])?;
            Family::Rainbow
        }
        "uniform_random" => {
            p.allow(&["q"])?;
            Family::UniformRandom {
                q: p.required_uint("q")?,
                seed: require_seed(spec)?,
            }
        }
        "block" => {
            p.allow(&["r", "s"])?;
            let r = to_usize(p.required_uint("r")?, "r")?;
            if r == 0 || r > spec.n1 {
                return Err(Error::params(format!("block: r = {r} must lie in 1..={}", spec.n1)));
            }
            Family::Block {
                r,
                s: to_usize(p.required_uint("s")?, "s")?,
            }
        }
        "per_vertex_rainbow" => {
            p.allow(&["palette"])?;
            Family::PerVertexRainbow {
                seed: require_seed(spec)?,
                palette: p.str("palette")?.unwrap_or("disjoint").parse()?,
            }
        }
        "planted" => {
            p.allow(&["base", "pattern", "m", "left", "right"])?;
            let base_spec: ColoringSpec = match spec.params.get("base") {
                Some(v) => serde_json::from_value(v.clone())
                    .map_err(|e| Error::params(format!("planted: bad base spec: {e}")))?,
                None => return Err(Error::params("planted: missing parameter `base`")),
            };
            if base_spec.n1 != spec.n1 || base_spec.n2 != spec.n2 {
                return Err(Error::params("planted: base dimensions differ from host"));
            }
            let base = instantiate(&base_spec)?;
            let pattern: CanonicalPattern = p
                .str("pattern")?
                .ok_or_else(|| Error::params("planted: missing parameter `pattern`"))?
                .parse()?;
            let left = p.index_list("left")?;
            let right = p.index_list("right")?;
            let m = match (p.uint("m")?, &left) {
                (Some(m), _) => to_usize(m, "m")?,
                (None, Some(l)) => l.len(),
                (None, None) => return Err(Error::params("planted: need `m` or explicit `left`")),
            };
            let left = left.unwrap_or_else(|| (0..m).collect());
            let right = right.unwrap_or_else(|| (0..m).collect());
            if left.len() != m || right.len() != m {
                return Err(Error::params("planted: vertex lists must have length m"));
            }
            Family::Planted(Planted::new(base, pattern, left, right)?)
        }
        other => return Err(Error::UnknownFamily(other.to_owned())),
    };
    let mut src = ColoringSource::family(spec.n1, spec.n2, family)?;
    src.spec = Some(spec.clone());
    Ok(src)
}

/// Dense `n1 × n2` grid of the source, refusing more than `cap` cells.
pub fn materialize(src: &ColoringSource, cap: u128) -> Result<Grid> {
    let required = src.n1 as u128 * src.n2 as u128;
    if required > cap {
        return Err(Error::SizeCap {
            required,
            allowed: cap,
        });
    }
    if let Kind::Dense(cells) = &src.kind {
        return Grid::new(src.n1, src.n2, cells.to_vec());
    }
    let mut colors = Vec::with_capacity(required as usize);
    for a in 0..src.n1 {
        for b in 0..src.n2 {
            colors.push(src.query(a, b));
        }
    }
    Grid::new(src.n1, src.n2, colors)
}

/// `(m-1)²` points in `m-1` classes of size `m-1`: point `i` gets color
/// `i / (m-1)`. No `m` points are constant or pairwise distinct.
pub fn er1_extremal(m: usize) -> Result<Vec<ColorId>> {
    if m < 2 {
        return Err(Error::params(format!("er1_extremal needs m >= 2, got {m}")));
    }
    let k = m - 1;
    Ok((0..k * k).map(|i| ColorId((i / k) as u64)).collect())
}
