//! Canonical color patterns of `K_{m,m}` and the classification everything
//! else is judged against.
//!
//! A copy of `K_{m,m}` on `A × B` is
//!
//! * **monochromatic** if every edge has the same color,
//! * **left-colored** if `Δ(a1, b1) = Δ(a2, b2)` exactly when `a1 = a2`
//!   (rows constant, row colors pairwise distinct),
//! * **right-colored** if equality holds exactly when `b1 = b2`,
//! * **rainbow** if all `m²` edge colors are pairwise distinct.
//!
//! For `m = 1` all four conditions hold vacuously.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::ColoringSource;

/// Opaque color label. Only equality is meaningful.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(pub u64);

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for ColorId {
    fn from(v: u64) -> Self {
        ColorId(v)
    }
}

/// Row-major matrix of colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    rows: usize,
    cols: usize,
    colors: Vec<ColorId>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize, colors: Vec<ColorId>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("grid must be non-empty, got {rows}x{cols}")));
        }
        if colors.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} grid needs {} entries, got {}",
                rows * cols,
                colors.len()
            )));
        }
        Ok(Grid { rows, cols, colors })
    }

    /// Builds a grid from nested rows; all rows must have the same length.
    pub fn from_rows<R, C>(rows: R) -> Result<Self>
    where
        R: IntoIterator<Item = C>,
        C: IntoIterator<Item = u64>,
    {
        let mut colors = Vec::new();
        let mut n_rows = 0;
        let mut n_cols = None;
        for row in rows {
            let before = colors.len();
            colors.extend(row.into_iter().map(ColorId));
            let len = colors.len() - before;
            match n_cols {
                None => n_cols = Some(len),
                Some(c) if c != len => {
                    return Err(Error::Dimension(format!(
                        "row {n_rows} has {len} entries, expected {c}"
                    )))
                }
                _ => {}
            }
            n_rows += 1;
        }
        Grid::new(n_rows, n_cols.unwrap_or(0), colors)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> ColorId {
        self.colors[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[ColorId] {
        &self.colors[row * self.cols..(row + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn transpose(&self) -> Grid {
        let mut colors = Vec::with_capacity(self.colors.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                colors.push(self.get(r, c));
            }
        }
        Grid {
            rows: self.cols,
            cols: self.rows,
            colors,
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|c| c.0).collect())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CanonicalPattern {
    #[serde(rename = "monochromatic")]
    Monochromatic,
    #[serde(rename = "left")]
    LeftColored,
    #[serde(rename = "right")]
    RightColored,
    #[serde(rename = "rainbow")]
    Rainbow,
}

impl CanonicalPattern {
    pub const ALL: [CanonicalPattern; 4] = [
        CanonicalPattern::Monochromatic,
        CanonicalPattern::LeftColored,
        CanonicalPattern::RightColored,
        CanonicalPattern::Rainbow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CanonicalPattern::Monochromatic => "monochromatic",
            CanonicalPattern::LeftColored => "left",
            CanonicalPattern::RightColored => "right",
            CanonicalPattern::Rainbow => "rainbow",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for CanonicalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CanonicalPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monochromatic" | "mono" => Ok(CanonicalPattern::Monochromatic),
            "left" => Ok(CanonicalPattern::LeftColored),
            "right" => Ok(CanonicalPattern::RightColored),
            "rainbow" => Ok(CanonicalPattern::Rainbow),
            other => Err(Error::params(format!("unknown pattern `{other}`"))),
        }
    }
}

/// A subset of the four canonical patterns.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PatternSet(u8);

impl PatternSet {
    pub const EMPTY: PatternSet = PatternSet(0);
    pub const ALL: PatternSet = PatternSet(0b1111);

    pub fn only(p: CanonicalPattern) -> Self {
        PatternSet(p.bit())
    }

    pub fn insert(&mut self, p: CanonicalPattern) {
        self.0 |= p.bit();
    }

    pub fn with(mut self, p: CanonicalPattern) -> Self {
        self.insert(p);
        self
    }

    pub fn contains(self, p: CanonicalPattern) -> bool {
        self.0 & p.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn intersection(self, other: PatternSet) -> PatternSet {
        PatternSet(self.0 & other.0)
    }

    /// Members in the fixed order monochromatic, left, right, rainbow.
    pub fn iter(self) -> impl Iterator<Item = CanonicalPattern> {
        CanonicalPattern::ALL.into_iter().filter(move |p| self.contains(*p))
    }

    /// Parses a comma-separated list such as `"left,rainbow"`; `"all"` is
    /// accepted as shorthand.
    pub fn parse_list(s: &str) -> Result<Self> {
        if s.trim() == "all" {
            return Ok(PatternSet::ALL);
        }
        let mut set = PatternSet::EMPTY;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            set.insert(part.parse()?);
        }
        if set.is_empty() {
            return Err(Error::params("empty pattern list"));
        }
        Ok(set)
    }
}

impl FromIterator<CanonicalPattern> for PatternSet {
    fn from_iter<I: IntoIterator<Item = CanonicalPattern>>(iter: I) -> Self {
        let mut set = PatternSet::EMPTY;
        for p in iter {
            set.insert(p);
        }
        set
    }
}

impl fmt::Debug for PatternSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for PatternSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for PatternSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<CanonicalPattern>::deserialize(d)?;
        Ok(v.into_iter().collect())
    }
}

/// An explicit canonically colored `K_{m,m}` inside a host coloring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub pattern: CanonicalPattern,
    #[serde(rename = "left")]
    pub left_set: Vec<usize>,
    #[serde(rename = "right")]
    pub right_set: Vec<usize>,
}

impl Witness {
    /// Sorts both vertex lists.
    pub fn new(mut left_set: Vec<usize>, mut right_set: Vec<usize>, pattern: CanonicalPattern) -> Self {
        left_set.sort_unstable();
        right_set.sort_unstable();
        Witness {
            pattern,
            left_set,
            right_set,
        }
    }

    pub fn m(&self) -> usize {
        self.left_set.len()
    }
}

fn all_equal(xs: impl IntoIterator<Item = ColorId>) -> bool {
    let mut it = xs.into_iter();
    match it.next() {
        None => true,
        Some(first) => it.all(|c| c == first),
    }
}

fn all_distinct(xs: impl IntoIterator<Item = ColorId>) -> bool {
    let mut seen = HashSet::new();
    xs.into_iter().all(|c| seen.insert(c))
}

/// Which canonical patterns a square grid realizes.
pub fn classify_grid(g: &Grid) -> Result<PatternSet> {
    if g.rows != g.cols {
        return Err(Error::Dimension(format!(
            "classification needs a square grid, got {}x{}",
            g.rows, g.cols
        )));
    }
    let m = g.rows;
    let mut set = PatternSet::EMPTY;

    if all_equal(g.colors.iter().copied()) {
        set.insert(CanonicalPattern::Monochromatic);
    }
    let rows_constant = (0..m).all(|r| all_equal(g.row(r).iter().copied()));
    if rows_constant && all_distinct((0..m).map(|r| g.get(r, 0))) {
        set.insert(CanonicalPattern::LeftColored);
    }
    let cols_constant = (0..m).all(|c| all_equal((0..m).map(|r| g.get(r, c))));
    if cols_constant && all_distinct((0..m).map(|c| g.get(0, c))) {
        set.insert(CanonicalPattern::RightColored);
    }
    if all_distinct(g.colors.iter().copied()) {
        set.insert(CanonicalPattern::Rainbow);
    }
    Ok(set)
}

/// Grid of `Δ(A[i], B[j])`, preserving the order of `A` and `B`.
pub fn restrict(src: &ColoringSource, left: &[usize], right: &[usize]) -> Result<Grid> {
    check_vertex_list(left, src.n1(), "left")?;
    check_vertex_list(right, src.n2(), "right")?;
    let mut colors = Vec::with_capacity(left.len() * right.len());
    for &a in left {
        for &b in right {
            colors.push(src.query(a, b));
        }
    }
    Grid::new(left.len(), right.len(), colors)
}

fn check_vertex_list(list: &[usize], bound: usize, side: &'static str) -> Result<()> {
    if list.is_empty() {
        return Err(Error::Dimension(format!("{side} vertex list is empty")));
    }
    let mut seen = HashSet::with_capacity(list.len());
    for &v in list {
        if v >= bound {
            return Err(Error::Dimension(format!(
                "{side} vertex {v} out of range (side has {bound} vertices)"
            )));
        }
        if !seen.insert(v) {
            return Err(Error::DuplicateIndex { side, index: v });
        }
    }
    Ok(())
}

/// `true` iff the witness's sub-biclique realizes its stated pattern.
/// Malformed witnesses (out of range, duplicate, unequal sides) are errors.
pub fn verify_witness(src: &ColoringSource, w: &Witness) -> Result<bool> {
    if w.left_set.len() != w.right_set.len() {
        return Err(Error::Dimension(format!(
            "witness sides differ: {} left vs {} right",
            w.left_set.len(),
            w.right_set.len()
        )));
    }
    let grid = restrict(src, &w.left_set, &w.right_set)?;
    Ok(classify_grid(&grid)?.contains(w.pattern))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SingletonPattern {
    Constant,
    Injective,
    Both,
    Neither,
}

/// Canonical pattern of a coloring of points.
pub fn classify_singletons(colors: &[ColorId]) -> Result<SingletonPattern> {
    if colors.is_empty() {
        return Err(Error::Dimension("cannot classify an empty color list".into()));
    }
    if colors.len() == 1 {
        return Ok(SingletonPattern::Both);
    }
    Ok(if all_equal(colors.iter().copied()) {
        SingletonPattern::Constant
    } else if all_distinct(colors.iter().copied()) {
        SingletonPattern::Injective
    } else {
        SingletonPattern::Neither
    })
}
