//! Permutations on `1..=d`, cycle types and stabilizer chains.
//!
//! Points are 1-indexed in every public constructor, accessor and text
//! format; storage is 0-indexed. Products are taken left to right:
//! `compose(p, q)` applies `p` first and then `q`, so the image of a point
//! `i` is `q(p(i))`. This is the convention of right actions on cosets and
//! is used for every product in this crate.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images do not form a bijection of 1..={0}")]
    NotBijective(usize),
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("empty generator list")]
    NoGenerators,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// A bijection of `{1, ..., d}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from 1-indexed images: entry `i - 1` is the
    /// image of point `i`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let degree = images.len();
        if images.iter().any(|&v| v == 0 || v > degree) {
            return Err(PermError::NotBijective(degree));
        }
        Self::from_images0(images.iter().map(|&v| v - 1).collect())
    }

    /// Builds a permutation from 0-indexed images.
    pub fn from_images0(images: Vec<usize>) -> Result<Self, PermError> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &v in &images {
            if v >= degree || seen[v] {
                return Err(PermError::NotBijective(degree));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from 1-indexed cycles.
    /// Points not mentioned are fixed.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p == 0 || p > degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if used[p - 1] {
                    return Err(PermError::NotBijective(degree));
                }
                used[p - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                if next == 0 || next > degree {
                    return Err(PermError::PointOutOfRange {
                        point: next,
                        degree,
                    });
                }
                images[p - 1] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// Parses cycle notation such as `"(1,10)(2,4)"` on `degree` points.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let cycles = parse_cycle_list(text)?;
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-indexed point `point`.
    pub fn image(&self, point: usize) -> usize {
        self.images[point - 1] + 1
    }

    /// 0-indexed image table.
    pub fn images0(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub(crate) fn at(&self, point0: usize) -> usize {
        self.images[point0]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Self, PermError> {
        compose(self, other)
    }

    pub(crate) fn then_unchecked(&self, other: &Permutation) -> Self {
        Permutation {
            images: self.images.iter().map(|&v| other.images[v]).collect(),
        }
    }

    /// Conjugate `c^-1 * self * c`, i.e. the relabelling of `self` by `c`.
    pub fn conjugate_by(&self, c: &Permutation) -> Result<Self, PermError> {
        compose(&compose(&c.inverse(), self)?, c)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.then_unchecked(&base);
            }
            base = base.then_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    /// Cycles as 0-indexed point lists, each starting at its smallest point,
    /// ordered by that point. Fixed points are included.
    pub(crate) fn cycles0(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycles in 1-indexed form, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.cycles0()
            .into_iter()
            .map(|c| c.into_iter().map(|p| p + 1).collect())
            .collect()
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles0().len()
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &v)| *i == v)
            .count()
    }

    /// Cycle notation without fixed points; the identity renders as `()`.
    pub fn to_cycle_string(&self) -> String {
        let mut s = String::new();
        for cycle in self.cycles() {
            if cycle.len() < 2 {
                continue;
            }
            s.push('(');
            let parts: Vec<String> = cycle.iter().map(|p| p.to_string()).collect();
            s.push_str(&parts.join(","));
            s.push(')');
        }
        if s.is_empty() {
            s.push_str("()");
        }
        s
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [deg {}]", self.to_cycle_string(), self.degree())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

/// Product "apply `p` first, then `q`".
pub fn compose(p: &Permutation, q: &Permutation) -> Result<Permutation, PermError> {
    if p.degree() != q.degree() {
        return Err(PermError::DegreeMismatch(p.degree(), q.degree()));
    }
    Ok(p.then_unchecked(q))
}

/// Parses `"(1,2,3)(4,5)"` into 1-indexed cycles. Whitespace is ignored and
/// `"()"` denotes the empty product.
pub fn parse_cycle_list(text: &str) -> Result<Vec<Vec<usize>>, PermError> {
    let err = |column: usize, message: &str| PermError::Parse {
        column,
        message: message.to_string(),
    };
    let chars: Vec<(usize, char)> = text
        .chars()
        .enumerate()
        .map(|(i, c)| (i + 1, c))
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    let end_column = text.chars().count() + 1;
    let mut cycles = Vec::new();
    let mut i = 0;
    if chars.is_empty() {
        return Err(err(1, "empty input"));
    }
    while i < chars.len() {
        let (col, c) = chars[i];
        if c != '(' {
            return Err(err(col, "expected '('"));
        }
        i += 1;
        let mut cycle = Vec::new();
        loop {
            let Some(&(col, c)) = chars.get(i) else {
                return Err(err(end_column, "unterminated cycle"));
            };
            if c == ')' {
                if !cycle.is_empty() && chars[i - 1].1 == ',' {
                    return Err(err(col, "expected a point"));
                }
                i += 1;
                break;
            }
            if c == ',' {
                if cycle.is_empty() {
                    return Err(err(col, "expected a point"));
                }
                i += 1;
                continue;
            }
            if !c.is_ascii_digit() {
                return Err(err(col, "unexpected character"));
            }
            if !cycle.is_empty() && chars[i - 1].1 != ',' {
                return Err(err(col, "expected ',' or ')'"));
            }
            let start_col = col;
            let mut value: usize = 0;
            let mut last_col = col - 1;
            while let Some(&(dcol, d)) = chars.get(i) {
                if dcol != last_col + 1 {
                    break;
                }
                last_col = dcol;
                match d.to_digit(10) {
                    Some(v) => {
                        value = value
                            .checked_mul(10)
                            .and_then(|x| x.checked_add(v as usize))
                            .ok_or_else(|| err(start_col, "point too large"))?;
                        i += 1;
                    }
                    None => break,
                }
            }
            if value == 0 {
                return Err(err(start_col, "points start at 1"));
            }
            cycle.push(value);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
    }
    Ok(cycles)
}

/// Multiset of positive integers stored in non-increasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// `value^count`.
    pub fn uniform(value: usize, count: usize) -> Self {
        Partition::new(vec![value; count])
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `(value, multiplicity)` pairs in increasing order of value.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in self.parts.iter().rev() {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Exponent form, largest part first, e.g. `4,1^2`.
    pub fn to_exponent_string(&self) -> String {
        self.multiplicities()
            .into_iter()
            .rev()
            .map(|(v, m)| {
                if m == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{m}")
                }
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn is_uniform(&self, value: usize) -> bool {
        self.parts.iter().all(|&p| p == value)
    }
}

impl fmt::Display for Partition {
    /// Comma-separated parts, descending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self)
    }
}

impl FromStr for Partition {
    type Err = PermError;

    /// Accepts plain lists (`6,6,3,3`) and exponent form (`3^4,6^4`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = Vec::new();
        let mut column = 1;
        for item in s.split(',') {
            let trimmed = item.trim();
            let bad = || PermError::Parse {
                column,
                message: format!("bad partition item '{trimmed}'"),
            };
            let (value, count) = match trimmed.split_once('^') {
                Some((v, m)) => (
                    v.trim().parse::<usize>().map_err(|_| bad())?,
                    m.trim().parse::<usize>().map_err(|_| bad())?,
                ),
                None => (trimmed.parse::<usize>().map_err(|_| bad())?, 1),
            };
            if value == 0 {
                return Err(bad());
            }
            parts.extend(std::iter::repeat_n(value, count));
            column += item.chars().count() + 1;
        }
        Ok(Partition::new(parts))
    }
}

/// Multiset of cycle lengths, fixed points included as parts of size 1.
pub fn cycle_type(p: &Permutation) -> Partition {
    Partition::new(p.cycles0().iter().map(|c| c.len()).collect())
}

fn common_degree(gens: &[Permutation]) -> Result<usize, PermError> {
    let first = gens.first().ok_or(PermError::NoGenerators)?;
    let d = first.degree();
    for g in gens {
        if g.degree() != d {
            return Err(PermError::DegreeMismatch(d, g.degree()));
        }
    }
    Ok(d)
}

/// Orbit of a 0-indexed point under the group generated by `gens`.
pub(crate) fn orbit0(gens: &[Permutation], degree: usize, start: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    let mut out = vec![start];
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.at(p);
            if !seen[q] {
                seen[q] = true;
                out.push(q);
                queue.push_back(q);
            }
        }
    }
    out
}

/// True iff the orbit of point 1 under `gens` is all of `1..=degree`.
pub fn is_transitive(gens: &[Permutation], degree: usize) -> Result<bool, PermError> {
    for g in gens {
        if g.degree() != degree {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
    }
    if degree == 0 {
        return Ok(true);
    }
    Ok(orbit0(gens, degree, 0).len() == degree)
}

#[derive(Debug, Clone)]
struct Level {
    base: usize,
    generators: Vec<Permutation>,
    /// `transversal[b]` maps the base point to `b`, when `b` is in the orbit.
    transversal: Vec<Option<Permutation>>,
    orbit: Vec<usize>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        transversal[base] = Some(Permutation::identity(degree));
        Level {
            base,
            generators: Vec::new(),
            transversal,
            orbit: vec![base],
        }
    }
}

/// Deterministic Schreier–Sims stabilizer chain.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(gens: &[Permutation]) -> Result<Self, PermError> {
        Self::with_base_prefix(gens, &[])
    }

    /// Builds a chain whose base starts with the given 1-indexed points.
    pub fn with_base_prefix(gens: &[Permutation], prefix: &[usize]) -> Result<Self, PermError> {
        let degree = common_degree(gens)?;
        let mut chain = StabilizerChain {
            degree,
            levels: Vec::new(),
        };
        for &p in prefix {
            if p == 0 || p > degree {
                return Err(PermError::PointOutOfRange { point: p, degree });
            }
            chain.levels.push(Level::new(p - 1, degree));
        }
        for g in gens {
            let (residue, level) = chain.sift(g.clone(), 0);
            if !residue.is_identity() {
                chain.add_generator(0, level, residue);
            }
        }
        Ok(chain)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Base points, 1-indexed.
    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base + 1).collect()
    }

    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Generators stored at each level, outermost first.
    pub fn level_generators(&self) -> Vec<&[Permutation]> {
        self.levels
            .iter()
            .map(|l| l.generators.as_slice())
            .collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, level) = self.sift(g.clone(), 0);
        level == self.levels.len() && residue.is_identity()
    }

    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let b = g.at(level.base);
            match &level.transversal[b] {
                Some(u) => g = g.then_unchecked(&u.inverse()),
                None => return (g, i),
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    /// Adds `g` to the strong generators of levels `lo..=hi`. `g` fixes the
    /// base points before `hi` and is not in the group described by the
    /// levels from `hi` on; a new level is opened when `hi` is past the end.
    fn add_generator(&mut self, lo: usize, hi: usize, g: Permutation) {
        if hi == self.levels.len() {
            let moved = (0..self.degree)
                .find(|&p| g.at(p) != p)
                .expect("non-identity residue moves a point");
            self.levels.push(Level::new(moved, self.degree));
        }
        for level in &mut self.levels[lo..=hi] {
            level.generators.push(g.clone());
        }
        for index in (lo..=hi).rev() {
            self.close_level(index);
        }
    }

    /// Extends the orbit of level `index` by its newest generator and sifts
    /// every Schreier generator that involves it or a new orbit point.
    fn close_level(&mut self, index: usize) {
        let new_gen = self.levels[index].generators.len() - 1;
        let mut pending: VecDeque<(usize, usize)> = self.levels[index]
            .orbit
            .iter()
            .map(|&b| (b, new_gen))
            .collect();
        while let Some((b, s)) = pending.pop_front() {
            let level = &self.levels[index];
            let gen = &level.generators[s];
            let u_b = level.transversal[b].as_ref().expect("orbit point");
            let image = gen.at(b);
            let product = u_b.then_unchecked(gen);
            match &level.transversal[image] {
                None => {
                    let level = &mut self.levels[index];
                    level.transversal[image] = Some(product);
                    level.orbit.push(image);
                    for k in 0..level.generators.len() {
                        pending.push_back((image, k));
                    }
                }
                Some(u_image) => {
                    let schreier = product.then_unchecked(&u_image.inverse());
                    if schreier.is_identity() {
                        continue;
                    }
                    let (residue, hit) = self.sift(schreier, index + 1);
                    if !residue.is_identity() {
                        self.add_generator(index + 1, hit, residue);
                    }
                }
            }
        }
    }

    /// Checks the structural invariants: every stored generator fixes all
    /// earlier base points and every transversal element maps the base
    /// point to its orbit point.
    pub fn check_invariants(&self) -> bool {
        for (i, level) in self.levels.iter().enumerate() {
            for g in &level.generators {
                if self.levels[..i].iter().any(|l| g.at(l.base) != l.base) {
                    return false;
                }
            }
            for &b in &level.orbit {
                match &level.transversal[b] {
                    Some(u) if u.at(level.base) == b => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

/// Exact order of the group generated by `gens`.
pub fn group_order(gens: &[Permutation]) -> Result<BigUint, PermError> {
    Ok(StabilizerChain::new(gens)?.order())
}

/// Order of the stabilizer of a 1-indexed `point` in `<gens>`.
pub fn point_stabilizer_order(gens: &[Permutation], point: usize) -> Result<BigUint, PermError> {
    let chain = StabilizerChain::with_base_prefix(gens, &[point])?;
    let first = chain.transversal_sizes()[0];
    Ok(chain.order() / BigUint::from(first))
}
