//! Words in `x` (order 2) and `y` (order 3), their 2x2 matrices, their
//! action on cosets, and Reidemeister-Schreier free generators.

use std::collections::VecDeque;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::dessin::{is_torsion_free_profile, Constellation};
use crate::perm::{group_order, point_stabilizer_order, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error("word parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("matrix is not unimodular: {0}")]
    NotUnimodular(String),
    #[error("modulus must be at least 2")]
    BadModulus,
    #[error("constellation has elliptic points; the subgroup is not free")]
    Elliptic,
    #[error("degree mismatch between word action and constellation")]
    Degree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    X,
    XInv,
    Y,
    YInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::X => Letter::XInv,
            Letter::XInv => Letter::X,
            Letter::Y => Letter::YInv,
            Letter::YInv => Letter::Y,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Letter::X => "x",
            Letter::XInv => "x^-1",
            Letter::Y => "y",
            Letter::YInv => "y^-1",
        }
    }
}

/// A word over `x, y` and their inverses, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GroupWord { letters }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Normal form in the free product of C2 and C3: syllables alternate
    /// between `x` and one of `y`, `y^-1`.
    pub fn normal_form(&self) -> Self {
        // Stack of syllables: (is_x, exponent mod 2 or 3).
        let mut stack: Vec<(bool, u8)> = Vec::new();
        for l in &self.letters {
            let (is_x, e) = match l {
                Letter::X | Letter::XInv => (true, 1u8),
                Letter::Y => (false, 1),
                Letter::YInv => (false, 2),
            };
            match stack.last_mut() {
                Some((top_x, top_e)) if *top_x == is_x => {
                    let m = if is_x { 2 } else { 3 };
                    *top_e = (*top_e + e) % m;
                    if *top_e == 0 {
                        stack.pop();
                    }
                }
                _ => stack.push((is_x, e)),
            }
        }
        let letters = stack
            .into_iter()
            .map(|(is_x, e)| match (is_x, e) {
                (true, _) => Letter::X,
                (false, 1) => Letter::Y,
                _ => Letter::YInv,
            })
            .collect();
        GroupWord { letters }
    }

    /// No `x` next to `x`, no `y*y*y`, no letter next to its inverse.
    pub fn is_reduced(&self) -> bool {
        let is_x = |l: &Letter| matches!(l, Letter::X | Letter::XInv);
        self.letters
            .windows(2)
            .all(|w| !(is_x(&w[0]) && is_x(&w[1])) && w[0] != w[1].inverse())
            && self
                .letters
                .windows(3)
                .all(|w| !(w[0] == w[1] && w[1] == w[2]))
    }
}

impl Mul for &GroupWord {
    type Output = GroupWord;
    fn mul(self, rhs: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        GroupWord { letters }
    }
}

impl fmt::Display for GroupWord {
    /// `y*x*y^-1`; the empty word is `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<&str> = self.letters.iter().map(|l| l.as_str()).collect();
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for GroupWord {
    type Err = ModularError;

    /// Parses `*`-separated factors `x`, `y`, `x^k`, `y^-1`, or `1`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |column: usize, message: &str| ModularError::Parse {
            column,
            message: message.to_string(),
        };
        let mut letters = Vec::new();
        let mut column = 1;
        for factor in text.split('*') {
            let lead = factor.len() - factor.trim_start().len();
            let at = column + lead;
            let item = factor.trim();
            column += factor.len() + 1;
            if item == "1" && text.trim() == "1" {
                break;
            }
            let (base, exp) = match item.split_once('^') {
                Some((b, e)) => {
                    let e: i64 = e
                        .trim()
                        .parse()
                        .map_err(|_| err(at + b.len() + 1, "bad exponent"))?;
                    (b.trim(), e)
                }
                None => (item, 1),
            };
            let (pos, neg) = match base {
                "x" => (Letter::X, Letter::XInv),
                "y" => (Letter::Y, Letter::YInv),
                "" => return Err(err(at, "expected a letter")),
                _ => return Err(err(at, "expected 'x' or 'y'")),
            };
            let l = if exp < 0 { neg } else { pos };
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(GroupWord { letters })
    }
}

/// 2x2 integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Clone + Integer + Signed> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    /// `[[0,-1],[1,0]]`, also called `S`.
    pub fn x() -> Self {
        Self::new(T::zero(), -T::one(), T::one(), T::zero())
    }

    /// `[[0,-1],[1,1]]`.
    pub fn y() -> Self {
        Self::new(T::zero(), -T::one(), T::one(), T::one())
    }

    /// `[[1,1],[0,1]]`.
    pub fn t() -> Self {
        Self::new(T::one(), T::one(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().is_one()
    }

    pub fn neg(&self) -> Self {
        Self::new(
            -self.a.clone(),
            -self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse(&self) -> Self {
        Self::new(
            self.d.clone(),
            -self.b.clone(),
            -self.c.clone(),
            self.a.clone(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        Self::new(
            a.clone() * o.a.clone() + b.clone() * o.c.clone(),
            a.clone() * o.b.clone() + b.clone() * o.d.clone(),
            c.clone() * o.a.clone() + d.clone() * o.c.clone(),
            c.clone() * o.b.clone() + d.clone() * o.d.clone(),
        )
    }

    /// Representative of `{A, -A}` with `c > 0`, or `c = 0` and `a > 0`.
    pub fn canonical(&self) -> Self {
        let flip = self.c.is_negative() || (self.c.is_zero() && self.a.is_negative());
        if flip {
            self.neg()
        } else {
            self.clone()
        }
    }
}

impl<T: fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

pub type Matrix2 = Mat2<BigInt>;

/// Equality in PSL(2, Z).
pub fn psl_equal(a: &Matrix2, b: &Matrix2) -> Result<bool, ModularError> {
    for m in [a, b] {
        if !m.is_unimodular() {
            return Err(ModularError::NotUnimodular(m.to_string()));
        }
    }
    Ok(a.canonical() == b.canonical())
}

fn letter_matrix(l: Letter) -> Matrix2 {
    match l {
        Letter::X => Matrix2::x(),
        Letter::XInv => Matrix2::x().inverse(),
        Letter::Y => Matrix2::y(),
        Letter::YInv => Matrix2::y().inverse(),
    }
}

/// Product of the letter matrices, sign-normalized.
pub fn word_to_matrix(w: &GroupWord) -> Matrix2 {
    w.letters
        .iter()
        .fold(Matrix2::identity(), |acc, &l| acc.mul(&letter_matrix(l)))
        .canonical()
}

/// Residues of a matrix and of its negative modulo `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModReport {
    pub modulus: BigInt,
    pub residue: Matrix2,
    pub negated: Matrix2,
    /// Either residue is the identity, i.e. the matrix is `+-I` mod `m`.
    pub congruent_to_identity: bool,
}

pub fn matrix_mod(a: &Matrix2, m: &BigInt) -> Result<ModReport, ModularError> {
    if m < &BigInt::from(2) {
        return Err(ModularError::BadModulus);
    }
    let reduce = |x: &Matrix2| {
        Matrix2::new(
            x.a.mod_floor(m),
            x.b.mod_floor(m),
            x.c.mod_floor(m),
            x.d.mod_floor(m),
        )
    };
    let canon = a.canonical();
    let residue = reduce(&canon);
    let negated = reduce(&canon.neg());
    let id = Matrix2::identity();
    Ok(ModReport {
        modulus: m.clone(),
        congruent_to_identity: residue == id || negated == id,
        residue,
        negated,
    })
}

/// Permutation of the cosets induced by `w`: `x` acts as the involution,
/// `y` as the product of 3-cycles, letters applied left to right.
pub fn word_action(w: &GroupWord, c: &Constellation) -> Permutation {
    let x = c.x_action();
    let y = c.y_action();
    let (xi, yi) = (x.inverse(), y.inverse());
    let mut images: Vec<usize> = (0..c.degree()).collect();
    for l in &w.letters {
        let g = match l {
            Letter::X => x,
            Letter::XInv => &xi,
            Letter::Y => y,
            Letter::YInv => &yi,
        };
        for p in images.iter_mut() {
            *p = g.at(*p);
        }
    }
    Permutation::from_images0(images).expect("composition of permutations")
}

/// Free generators of the subgroup fixing coset 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupGenerators {
    pub words: Vec<GroupWord>,
    pub matrices: Vec<Matrix2>,
    pub basepoint: usize,
}

impl SubgroupGenerators {
    pub fn rank(&self) -> usize {
        self.words.len()
    }
}

/// Reidemeister-Schreier over a breadth-first spanning tree of the coset
/// graph rooted at coset 1 (x-edges first, then y, then y^-1, lower labels
/// first). Schreier generators on tree edges are trivial; of each
/// remaining x-pair one is kept, and each y-triangle loses its last
/// nontrivial generator.
pub fn subgroup_generators(c: &Constellation) -> Result<SubgroupGenerators, ModularError> {
    if !is_torsion_free_profile(c) {
        return Err(ModularError::Elliptic);
    }
    let d = c.degree();
    let x = c.x_action();
    let y = c.y_action();
    let yi = y.inverse();

    let mut tree: Vec<Option<GroupWord>> = vec![None; d];
    tree[0] = Some(GroupWord::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        let base = tree[p].clone().expect("visited");
        for (perm, letter) in [(x, Letter::X), (y, Letter::Y), (&yi, Letter::YInv)] {
            let q = perm.at(p);
            if tree[q].is_none() {
                tree[q] = Some(&base * &GroupWord::new(vec![letter]));
                queue.push_back(q);
            }
        }
    }
    let tree: Vec<GroupWord> = tree.into_iter().map(|w| w.expect("transitive")).collect();

    let schreier = |p: usize, letter: Letter, perm: &Permutation| -> GroupWord {
        let q = perm.at(p);
        (&(&tree[p] * &GroupWord::new(vec![letter])) * &tree[q].inverse()).normal_form()
    };
    let gx: Vec<GroupWord> = (0..d).map(|p| schreier(p, Letter::X, x)).collect();
    let gy: Vec<GroupWord> = (0..d).map(|p| schreier(p, Letter::Y, y)).collect();

    let mut keep_x = vec![false; d];
    for p in 0..d {
        let q = x.at(p);
        keep_x[p] = p < q && !gx[p].is_empty();
    }
    let mut keep_y: Vec<bool> = gy.iter().map(|w| !w.is_empty()).collect();
    for p in 0..d {
        let (p1, p2) = (y.at(p), y.at(y.at(p)));
        if p < p1 && p < p2 {
            if let Some(&last) = [p2, p1, p].iter().find(|&&i| keep_y[i]) {
                keep_y[last] = false;
            }
        }
    }

    let mut words = Vec::new();
    for p in 0..d {
        if keep_x[p] {
            words.push(gx[p].clone());
        }
        if keep_y[p] {
            words.push(gy[p].clone());
        }
    }
    let matrices = words.iter().map(word_to_matrix).collect();
    Ok(SubgroupGenerators {
        words,
        matrices,
        basepoint: 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    /// Word at this (0-based) index moves coset 1.
    MovesBasepoint(usize),
    /// Matrix at this index has determinant other than 1.
    NotUnimodular(usize),
    /// The words generate a proper subgroup of the stabilizer.
    StabilizerOrder {
        generated: BigUint,
        expected: BigUint,
    },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::MovesBasepoint(i) => write!(f, "generator {} moves coset 1", i + 1),
            VerifyFailure::NotUnimodular(i) => write!(f, "matrix {} is not unimodular", i + 1),
            VerifyFailure::StabilizerOrder {
                generated,
                expected,
            } => write!(
                f,
                "words generate a group of order {generated}, stabilizer has order {expected}"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub generated_order: BigUint,
    pub stabilizer_order: BigUint,
    pub cartographic_order: BigUint,
    pub failures: Vec<VerifyFailure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every word fixes coset 1, that the word actions generate
/// the full stabilizer of 1 in the cartographic group, and that every
/// matrix is unimodular.
pub fn verify_generators(
    g: &SubgroupGenerators,
    c: &Constellation,
) -> Result<VerificationReport, ModularError> {
    let d = c.degree();
    let mut failures = Vec::new();
    let actions: Vec<Permutation> = g.words.iter().map(|w| word_action(w, c)).collect();
    for (i, a) in actions.iter().enumerate() {
        if a.at(0) != 0 {
            failures.push(VerifyFailure::MovesBasepoint(i));
        }
    }
    let gens = [c.sigma0().clone(), c.sigma1().clone()];
    let cartographic = group_order(&gens).map_err(|_| ModularError::Degree)?;
    let stabilizer = point_stabilizer_order(&gens, 1).map_err(|_| ModularError::Degree)?;
    let generated = if actions.is_empty() {
        BigUint::one()
    } else {
        group_order(&actions).map_err(|_| ModularError::Degree)?
    };
    if generated != stabilizer {
        failures.push(VerifyFailure::StabilizerOrder {
            generated: generated.clone(),
            expected: stabilizer.clone(),
        });
    }
    for (i, m) in g.matrices.iter().enumerate() {
        if !m.is_unimodular() {
            failures.push(VerifyFailure::NotUnimodular(i));
        }
    }
    debug_assert_eq!(&stabilizer * BigUint::from(d), cartographic);
    Ok(VerificationReport {
        generated_order: generated,
        stabilizer_order: stabilizer,
        cartographic_order: cartographic,
        failures,
    })
}
