//! Coxeter groups with exact normal forms.
//!
//! Three backends cover the groups we care about:
//!
//! * crystallographic systems, given by an integral generalised Cartan matrix;
//!   elements are the integer matrices of their action on simple-root
//!   coordinates (finite and affine Weyl groups),
//! * dihedral groups `I2(m)`, `m` finite or infinite, stored as alternating
//!   words with the longest element collapsed to one canonical value,
//! * universal Coxeter groups, all `m_st = inf`, stored as their unique
//!   reduced word.
//!
//! Lengths are maintained incrementally by the descent test, never recomputed.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use indexmap::IndexSet;

use crate::{Error, Result};

/// A simple reflection, as a 0-based index. Text forms use 1-based names.
pub type Generator = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Default cap on the number of elements produced by one enumeration.
pub const DEFAULT_MAX_ELEMENTS: usize = 1_000_000;
/// Default cap on the number of reduced words returned for one element.
pub const DEFAULT_MAX_REDUCED_WORDS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_elements: usize,
    pub max_reduced_words: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_elements: DEFAULT_MAX_ELEMENTS,
            max_reduced_words: DEFAULT_MAX_REDUCED_WORDS,
        }
    }
}

/// How the system was specified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    /// Generalised Cartan matrix `a[i][j] = <alpha_i^vee, alpha_j>`, row-major.
    Cartan { rank: usize, matrix: Vec<i64> },
    /// Dihedral group of order `2m`; `None` is the infinite dihedral group.
    Dihedral { order: Option<u32> },
    Universal { rank: usize },
}

/// An element of a Coxeter group.
///
/// Ordering compares length first, so sorted collections list elements from
/// short to long.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    length: u32,
    repr: Repr,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    /// Action on simple-root coordinates and its inverse, both row-major.
    /// Column `j` of `fwd` holds `w(alpha_j)`.
    Matrix { fwd: Box<[i64]>, inv: Box<[i64]> },
    /// Alternating word `start, 1 - start, ...` of length `length`. The
    /// identity and the longest element always use `start = 0`.
    Dihedral { start: u8 },
    /// The unique reduced word.
    Word(Box<[u8]>),
}

impl GroupElement {
    pub fn length(&self) -> usize {
        self.length as usize
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }
}

pub struct CoxeterSystem {
    label: String,
    descriptor: Descriptor,
    rank: usize,
    limits: Limits,
    bruhat_memo: RwLock<HashMap<(GroupElement, GroupElement), bool>>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("label", &self.label)
            .field("descriptor", &self.descriptor)
            .finish()
    }
}

impl fmt::Display for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl FromStr for CoxeterSystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CoxeterSystem::parse(s)
    }
}

fn check_cartan(rank: usize, a: &[i64]) -> Result<()> {
    if rank == 0 {
        return Err(Error::InvalidCartan("rank must be positive".into()));
    }
    if a.len() != rank * rank {
        return Err(Error::InvalidCartan(format!(
            "expected {} entries, got {}",
            rank * rank,
            a.len()
        )));
    }
    for i in 0..rank {
        if a[i * rank + i] != 2 {
            return Err(Error::InvalidCartan(format!("diagonal entry {} is not 2", i + 1)));
        }
        for j in 0..rank {
            if i == j {
                continue;
            }
            let (aij, aji) = (a[i * rank + j], a[j * rank + i]);
            if aij > 0 {
                return Err(Error::InvalidCartan(format!(
                    "off-diagonal entry ({}, {}) is positive",
                    i + 1,
                    j + 1
                )));
            }
            if (aij == 0) != (aji == 0) {
                return Err(Error::InvalidCartan(format!(
                    "entries ({}, {}) and ({}, {}) must vanish together",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    Ok(())
}

fn chain(rank: usize) -> Vec<i64> {
    let mut a = vec![0; rank * rank];
    for i in 0..rank {
        a[i * rank + i] = 2;
        if i + 1 < rank {
            a[i * rank + i + 1] = -1;
            a[(i + 1) * rank + i] = -1;
        }
    }
    a
}

fn link(a: &mut [i64], rank: usize, i: usize, j: usize, aij: i64, aji: i64) {
    a[i * rank + j] = aij;
    a[j * rank + i] = aji;
}

fn finite_cartan(kind: char, n: usize) -> Option<Vec<i64>> {
    let mut a = match kind {
        'A' if n >= 1 => chain(n),
        'B' | 'C' if n >= 2 => chain(n),
        'D' if n >= 4 => chain(n),
        'E' if (6..=8).contains(&n) => vec![0; n * n],
        'F' if n == 4 => chain(4),
        'G' if n == 2 => chain(2),
        _ => return None,
    };
    match kind {
        // alpha_n short.
        'B' => link(&mut a, n, n - 2, n - 1, -1, -2),
        'C' => link(&mut a, n, n - 2, n - 1, -2, -1),
        'D' => {
            link(&mut a, n, n - 2, n - 1, 0, 0);
            link(&mut a, n, n - 3, n - 1, -1, -1);
        }
        'E' => {
            // 1-3-4-5-...-n with 2 attached to 4.
            for i in 0..n {
                a[i * n + i] = 2;
            }
            link(&mut a, n, 0, 2, -1, -1);
            link(&mut a, n, 1, 3, -1, -1);
            for i in 2..n - 1 {
                link(&mut a, n, i, i + 1, -1, -1);
            }
        }
        'F' => link(&mut a, n, 1, 2, -1, -2),
        'G' => link(&mut a, n, 0, 1, -1, -3),
        _ => {}
    }
    Some(a)
}

/// Affine types: the extra node is the last generator.
fn affine_cartan(kind: char, n: usize) -> Option<Vec<i64>> {
    let rank = n + 1;
    let mut a = vec![0; rank * rank];
    let fin = match kind {
        'A' if n >= 1 => finite_cartan('A', n)?,
        'B' if n >= 3 => finite_cartan('B', n)?,
        'C' if n >= 2 => finite_cartan('C', n)?,
        'D' if n >= 4 => finite_cartan('D', n)?,
        'G' if n == 2 => finite_cartan('G', 2)?,
        _ => return None,
    };
    for i in 0..n {
        for j in 0..n {
            a[i * rank + j] = fin[i * n + j];
        }
    }
    a[n * rank + n] = 2;
    match kind {
        'A' if n == 1 => link(&mut a, rank, 0, 1, -2, -2),
        'A' => {
            link(&mut a, rank, n, 0, -1, -1);
            link(&mut a, rank, n, n - 1, -1, -1);
        }
        'B' | 'D' => link(&mut a, rank, n, 1, -1, -1),
        'C' => link(&mut a, rank, n, 0, -1, -2),
        'G' => link(&mut a, rank, n, 1, -1, -1),
        _ => unreachable!(),
    }
    Some(a)
}

impl CoxeterSystem {
    /// Parses a group descriptor: `A3`, `B2`, `D4`, `E8`, `F4`, `G2`, affine
    /// types with a `t` (`At2`, `Ct3`), `I2(7)`, `I2(inf)` and `U3`.
    pub fn parse(descriptor: &str) -> Result<Self> {
        let s = descriptor.trim();
        let bad = || Error::Parse(format!("unrecognised group descriptor {s:?}"));
        if let Some(rest) = s.strip_prefix("I2(") {
            let inner = rest.strip_suffix(')').ok_or_else(bad)?;
            let order = if inner == "inf" {
                None
            } else {
                let m: u32 = inner.parse().map_err(|_| bad())?;
                if m < 2 {
                    return Err(Error::Parse(format!("dihedral order must be >= 2, got {m}")));
                }
                Some(m)
            };
            return Ok(Self::dihedral(order));
        }
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        let (affine, digits) = match rest.strip_prefix('t') {
            Some(d) => (true, d),
            None => (false, rest),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let n: usize = digits.parse().map_err(|_| bad())?;
        if kind == 'U' && !affine {
            if n == 0 {
                return Err(bad());
            }
            return Ok(Self::universal(n));
        }
        let matrix = if affine {
            affine_cartan(kind, n)
        } else {
            finite_cartan(kind, n)
        }
        .ok_or_else(bad)?;
        let rank = if affine { n + 1 } else { n };
        Self::from_cartan(s, rank, matrix)
    }

    /// Builds a crystallographic system from a generalised Cartan matrix,
    /// given row-major with `a[i][j] = <alpha_i^vee, alpha_j>`.
    pub fn from_cartan(label: &str, rank: usize, matrix: Vec<i64>) -> Result<Self> {
        check_cartan(rank, &matrix)?;
        Ok(Self::new(label.to_string(), Descriptor::Cartan { rank, matrix }, rank))
    }

    pub fn dihedral(order: Option<u32>) -> Self {
        let label = match order {
            Some(m) => format!("I2({m})"),
            None => "I2(inf)".to_string(),
        };
        Self::new(label, Descriptor::Dihedral { order }, 2)
    }

    pub fn universal(rank: usize) -> Self {
        assert!(rank >= 1, "universal Coxeter group needs rank >= 1");
        Self::new(format!("U{rank}"), Descriptor::Universal { rank }, rank)
    }

    fn new(label: String, descriptor: Descriptor, rank: usize) -> Self {
        CoxeterSystem {
            label,
            descriptor,
            rank,
            limits: Limits::default(),
            bruhat_memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> {
        0..self.rank
    }

    pub fn is_crystallographic(&self) -> bool {
        matches!(self.descriptor, Descriptor::Cartan { .. })
    }

    pub fn is_dihedral(&self) -> bool {
        matches!(self.descriptor, Descriptor::Dihedral { .. })
    }

    pub fn is_universal(&self) -> bool {
        matches!(self.descriptor, Descriptor::Universal { .. })
    }

    /// The Cartan matrix, row-major, for crystallographic systems.
    pub fn cartan(&self) -> Option<&[i64]> {
        match &self.descriptor {
            Descriptor::Cartan { matrix, .. } => Some(matrix),
            _ => None,
        }
    }

    /// Order of `st`; `None` means infinite.
    pub fn coxeter_order(&self, s: Generator, t: Generator) -> Option<u32> {
        if s == t {
            return Some(1);
        }
        match &self.descriptor {
            Descriptor::Cartan { rank, matrix } => {
                match matrix[s * rank + t] * matrix[t * rank + s] {
                    0 => Some(2),
                    1 => Some(3),
                    2 => Some(4),
                    3 => Some(6),
                    _ => None,
                }
            }
            Descriptor::Dihedral { order } => *order,
            Descriptor::Universal { .. } => None,
        }
    }

    pub fn check_generator(&self, s: Generator) -> Result<()> {
        if s < self.rank {
            Ok(())
        } else {
            Err(Error::BadGenerator {
                generator: s + 1,
                rank: self.rank,
            })
        }
    }

    pub fn identity(&self) -> GroupElement {
        let repr = match &self.descriptor {
            Descriptor::Cartan { rank, .. } => {
                let mut m = vec![0; rank * rank];
                for i in 0..*rank {
                    m[i * rank + i] = 1;
                }
                let m: Box<[i64]> = m.into();
                Repr::Matrix {
                    fwd: m.clone(),
                    inv: m,
                }
            }
            Descriptor::Dihedral { .. } => Repr::Dihedral { start: 0 },
            Descriptor::Universal { .. } => Repr::Word(Box::new([])),
        };
        GroupElement { length: 0, repr }
    }

    pub fn generator(&self, s: Generator) -> GroupElement {
        self.mul_gen(&self.identity(), s, Side::Right)
    }

    /// Whether `s` is a descent of `w` on the given side (`ws < w` for
    /// `Side::Right`, `sw < w` for `Side::Left`).
    pub fn is_descent(&self, w: &GroupElement, s: Generator, side: Side) -> bool {
        match (&w.repr, &self.descriptor) {
            (Repr::Matrix { fwd, inv }, Descriptor::Cartan { rank, .. }) => {
                let m = match side {
                    Side::Right => fwd,
                    Side::Left => inv,
                };
                // Columns are roots, so sign-coherent; the first nonzero entry decides.
                (0..*rank)
                    .map(|r| m[r * rank + s])
                    .find(|&x| x != 0)
                    .is_some_and(|x| x < 0)
            }
            (Repr::Dihedral { start }, Descriptor::Dihedral { order }) => {
                let k = w.length;
                if k == 0 {
                    return false;
                }
                if Some(k) == *order {
                    return true;
                }
                let letter = match side {
                    Side::Left => *start,
                    Side::Right => dihedral_last(*start, k),
                };
                letter as usize == s
            }
            (Repr::Word(word), Descriptor::Universal { .. }) => {
                let letter = match side {
                    Side::Left => word.first(),
                    Side::Right => word.last(),
                };
                letter.is_some_and(|&l| l as usize == s)
            }
            _ => panic!("group element does not belong to {}", self.label),
        }
    }

    pub fn descents(&self, w: &GroupElement, side: Side) -> BTreeSet<Generator> {
        self.generators().filter(|&s| self.is_descent(w, s, side)).collect()
    }

    /// Length together with left and right descent sets.
    pub fn length_and_descents(
        &self,
        w: &GroupElement,
    ) -> (usize, BTreeSet<Generator>, BTreeSet<Generator>) {
        (w.length(), self.descents(w, Side::Left), self.descents(w, Side::Right))
    }

    /// `ws` (right) or `sw` (left).
    pub fn mul_gen(&self, w: &GroupElement, s: Generator, side: Side) -> GroupElement {
        assert!(s < self.rank, "generator {} out of range for {}", s + 1, self.label);
        let down = self.is_descent(w, s, side);
        let length = if down { w.length - 1 } else { w.length + 1 };
        let repr = match (&w.repr, &self.descriptor) {
            (Repr::Matrix { fwd, inv }, Descriptor::Cartan { rank, matrix }) => {
                let n = *rank;
                let row = &matrix[s * n..(s + 1) * n];
                let mut fwd = fwd.clone();
                let mut inv = inv.clone();
                match side {
                    Side::Right => {
                        // M_w M_s: col_j -= a_sj col_s ; M_s M_w^-1: row_s -= sum_k a_sk row_k
                        column_reflect(&mut fwd, n, s, row);
                        row_reflect(&mut inv, n, s, row);
                    }
                    Side::Left => {
                        row_reflect(&mut fwd, n, s, row);
                        column_reflect(&mut inv, n, s, row);
                    }
                }
                Repr::Matrix { fwd, inv }
            }
            (Repr::Dihedral { start }, Descriptor::Dihedral { order }) => {
                let s8 = s as u8;
                let k = w.length;
                let start = if k == 0 {
                    s8
                } else if Some(k) == *order {
                    let m = k;
                    match side {
                        Side::Right => {
                            if m % 2 == 1 {
                                s8
                            } else {
                                1 - s8
                            }
                        }
                        Side::Left => 1 - s8,
                    }
                } else {
                    match (side, down) {
                        (Side::Right, _) => *start,
                        (Side::Left, true) => 1 - *start,
                        (Side::Left, false) => s8,
                    }
                };
                let start = if length == 0 || Some(length) == *order {
                    0
                } else {
                    start
                };
                Repr::Dihedral { start }
            }
            (Repr::Word(word), Descriptor::Universal { .. }) => {
                let mut v = word.to_vec();
                match (side, down) {
                    (Side::Right, true) => {
                        v.pop();
                    }
                    (Side::Right, false) => v.push(s as u8),
                    (Side::Left, true) => {
                        v.remove(0);
                    }
                    (Side::Left, false) => v.insert(0, s as u8),
                }
                Repr::Word(v.into())
            }
            _ => panic!("group element does not belong to {}", self.label),
        };
        GroupElement { length, repr }
    }

    pub fn inverse(&self, w: &GroupElement) -> GroupElement {
        let repr = match &w.repr {
            Repr::Matrix { fwd, inv } => Repr::Matrix {
                fwd: inv.clone(),
                inv: fwd.clone(),
            },
            Repr::Dihedral { start } => {
                let k = w.length;
                let fixed = k == 0 || Some(k) == self.dihedral_order();
                Repr::Dihedral {
                    start: if fixed { 0 } else { dihedral_last(*start, k) },
                }
            }
            Repr::Word(word) => Repr::Word(word.iter().rev().copied().collect()),
        };
        GroupElement {
            length: w.length,
            repr,
        }
    }

    fn dihedral_order(&self) -> Option<u32> {
        match self.descriptor {
            Descriptor::Dihedral { order } => order,
            _ => None,
        }
    }

    /// Product of a word of generators (not necessarily reduced).
    pub fn element_from_word(&self, word: &[Generator]) -> Result<GroupElement> {
        let mut w = self.identity();
        for &s in word {
            self.check_generator(s)?;
            w = self.mul_gen(&w, s, Side::Right);
        }
        Ok(w)
    }

    /// Group product `xy`.
    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        self.lex_reduced_word(y)
            .into_iter()
            .fold(x.clone(), |w, s| self.mul_gen(&w, s, Side::Right))
    }

    /// Lexicographically least reduced word.
    pub fn lex_reduced_word(&self, w: &GroupElement) -> Vec<Generator> {
        let mut word = Vec::with_capacity(w.length());
        let mut cur = w.clone();
        while !cur.is_identity() {
            let s = self
                .generators()
                .find(|&s| self.is_descent(&cur, s, Side::Left))
                .expect("nontrivial element has a left descent");
            word.push(s);
            cur = self.mul_gen(&cur, s, Side::Left);
        }
        word
    }

    /// Smallest right descent, if any.
    pub fn first_right_descent(&self, w: &GroupElement) -> Option<Generator> {
        self.generators().find(|&s| self.is_descent(w, s, Side::Right))
    }

    /// Bruhat order by the lifting recursion, memoised per system.
    pub fn bruhat_leq(&self, x: &GroupElement, y: &GroupElement) -> bool {
        let key = (x.clone(), y.clone());
        if let Some(&r) = self.bruhat_memo.read().unwrap().get(&key) {
            return r;
        }
        let (mut x, mut y) = key.clone();
        let result = loop {
            if x.length > y.length {
                break false;
            }
            if x.length == y.length {
                break x == y;
            }
            if x.is_identity() {
                break true;
            }
            let s = self.first_right_descent(&y).expect("y is not the identity");
            if self.is_descent(&x, s, Side::Right) {
                x = self.mul_gen(&x, s, Side::Right);
            }
            y = self.mul_gen(&y, s, Side::Right);
        };
        self.bruhat_memo.write().unwrap().insert(key, result);
        result
    }

    /// Breadth-first enumeration of all elements of length at most
    /// `max_len`, grouped by length.
    pub fn enumerate_elements(&self, max_len: usize) -> Result<Vec<Vec<GroupElement>>> {
        let cap = self.limits.max_elements;
        let mut strata = vec![vec![self.identity()]];
        let mut total = 1usize;
        while strata.len() <= max_len {
            let mut next = IndexSet::new();
            for w in strata.last().unwrap() {
                for s in self.generators() {
                    if !self.is_descent(w, s, Side::Right) {
                        next.insert(self.mul_gen(w, s, Side::Right));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            total += next.len();
            if total > cap {
                return Err(Error::ResourceLimit {
                    what: "group elements",
                    limit: cap,
                });
            }
            strata.push(next.into_iter().collect());
        }
        Ok(strata)
    }

    /// All elements of length at most `max_len`, shortest first.
    pub fn elements_up_to(&self, max_len: usize) -> Result<Vec<GroupElement>> {
        Ok(self.enumerate_elements(max_len)?.into_iter().flatten().collect())
    }

    /// All reduced words of `w`, sorted lexicographically.
    pub fn reduced_words(&self, w: &GroupElement) -> Result<Vec<Vec<Generator>>> {
        let mut memo: HashMap<GroupElement, Vec<Vec<Generator>>> = HashMap::new();
        let words = self.reduced_words_rec(w, &mut memo)?;
        let mut words = words.clone();
        words.sort();
        Ok(words)
    }

    fn reduced_words_rec<'m>(
        &self,
        w: &GroupElement,
        memo: &'m mut HashMap<GroupElement, Vec<Vec<Generator>>>,
    ) -> Result<&'m Vec<Vec<Generator>>> {
        if !memo.contains_key(w) {
            let words = if w.is_identity() {
                vec![vec![]]
            } else {
                let mut words = Vec::new();
                for s in self.descents(w, Side::Right) {
                    let ws = self.mul_gen(w, s, Side::Right);
                    for prefix in self.reduced_words_rec(&ws, memo)? {
                        let mut word = prefix.clone();
                        word.push(s);
                        words.push(word);
                    }
                    if words.len() > self.limits.max_reduced_words {
                        return Err(Error::ResourceLimit {
                            what: "reduced words",
                            limit: self.limits.max_reduced_words,
                        });
                    }
                }
                words
            };
            memo.insert(w.clone(), words);
        }
        Ok(&memo[w])
    }

    /// Space-separated 1-based lex-least reduced word, `e` for the identity.
    pub fn format_element(&self, w: &GroupElement) -> String {
        format_word(&self.lex_reduced_word(w))
    }

    /// Parses a space-separated word of 1-based generator names.
    pub fn parse_word(&self, s: &str) -> Result<Vec<Generator>> {
        let word = parse_word(s)?;
        for &g in &word {
            self.check_generator(g)?;
        }
        Ok(word)
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        self.element_from_word(&self.parse_word(s)?)
    }
}

/// Formats a word of 0-based generators as 1-based names.
pub fn format_word(word: &[Generator]) -> String {
    if word.is_empty() {
        return "e".to_string();
    }
    word.iter()
        .map(|s| (s + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Parses `"1 2 1"` into `[0, 1, 0]`; `"e"` and the empty string are the
/// empty word.
pub fn parse_word(s: &str) -> Result<Vec<Generator>> {
    let s = s.trim();
    if s.is_empty() || s == "e" {
        return Ok(vec![]);
    }
    s.split_whitespace()
        .map(|tok| match tok.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(Error::Parse(format!("bad generator name {tok:?}"))),
        })
        .collect()
}

fn dihedral_last(start: u8, len: u32) -> u8 {
    if len % 2 == 1 {
        start
    } else {
        1 - start
    }
}

// m <- m * M_s, with column j of M_s equal to e_j - a_sj e_s.
fn column_reflect(m: &mut [i64], n: usize, s: usize, row: &[i64]) {
    for r in 0..n {
        let pivot = m[r * n + s];
        if pivot == 0 {
            continue;
        }
        for (j, &a) in row.iter().enumerate() {
            m[r * n + j] -= a * pivot;
        }
    }
}

// m <- M_s * m: only row s changes.
fn row_reflect(m: &mut [i64], n: usize, s: usize, row: &[i64]) {
    for c in 0..n {
        let mut acc = 0;
        for (k, &a) in row.iter().enumerate() {
            acc += a * m[k * n + c];
        }
        m[s * n + c] -= acc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(s: &str) -> CoxeterSystem {
        CoxeterSystem::parse(s).unwrap()
    }

    fn el(sys: &CoxeterSystem, w: &str) -> GroupElement {
        sys.parse_element(w).unwrap()
    }

    #[test]
    fn identity_times_generator() {
        let a2 = sys("A2");
        let s = a2.mul_gen(&a2.identity(), 0, Side::Right);
        assert_eq!(s.length(), 1);
        assert_eq!(a2.format_element(&s), "1");
        assert!(a2.mul_gen(&s, 0, Side::Right).is_identity());
    }

    #[test]
    fn braid_relation_in_a2() {
        let a2 = sys("A2");
        let x = el(&a2, "1 2 1");
        let y = el(&a2, "2 1 2");
        assert_eq!(x, y);
        assert_eq!(x.length(), 3);
    }

    #[test]
    fn descents() {
        let a2 = sys("A2");
        let (l, left, right) = a2.length_and_descents(&a2.identity());
        assert_eq!((l, left.len(), right.len()), (0, 0, 0));
        let w0 = el(&a2, "1 2 1");
        let (l, left, right) = a2.length_and_descents(&w0);
        assert_eq!(l, 3);
        assert_eq!(left, BTreeSet::from([0, 1]));
        assert_eq!(right, BTreeSet::from([0, 1]));
        let (l, left, right) = a2.length_and_descents(&el(&a2, "1 2"));
        assert_eq!((l, left, right), (2, BTreeSet::from([0]), BTreeSet::from([1])));
    }

    #[test]
    fn bruhat_examples() {
        let a2 = sys("A2");
        for w in a2.elements_up_to(3).unwrap() {
            assert!(a2.bruhat_leq(&a2.identity(), &w));
        }
        assert!(a2.bruhat_leq(&el(&a2, "1"), &el(&a2, "1 2")));
        assert!(!a2.bruhat_leq(&el(&a2, "1 2"), &el(&a2, "2 1")));
        assert!(!a2.bruhat_leq(&el(&a2, "2 1"), &el(&a2, "1 2")));
    }

    #[test]
    fn enumeration_counts() {
        let profile = |s: &str, n| -> Vec<usize> {
            sys(s).enumerate_elements(n).unwrap().iter().map(Vec::len).collect()
        };
        assert_eq!(profile("A2", 3), vec![1, 2, 2, 1]);
        assert_eq!(profile("U2", 3), vec![1, 2, 2, 2]);
        assert_eq!(profile("I2(4)", 4).iter().sum::<usize>(), 8);
        assert_eq!(profile("A3", 10).iter().sum::<usize>(), 24);
        assert_eq!(profile("B3", 20).iter().sum::<usize>(), 48);
        assert_eq!(profile("D4", 20).iter().sum::<usize>(), 192);
        assert_eq!(profile("G2", 20).iter().sum::<usize>(), 12);
        assert_eq!(profile("F4", 30).iter().sum::<usize>(), 1152);
        assert_eq!(profile("E6", 40).iter().sum::<usize>(), 51840);
        // Poincare series (1 + t + t^2) / (1 - t)^2.
        assert_eq!(profile("At2", 4), vec![1, 3, 6, 9, 12]);
        assert_eq!(profile("I2(inf)", 3), vec![1, 2, 2, 2]);
    }

    #[test]
    fn enumeration_cap() {
        let u3 = sys("U3").with_limits(Limits {
            max_elements: 10,
            ..Limits::default()
        });
        assert!(matches!(
            u3.enumerate_elements(5),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn reduced_word_sets() {
        let a2 = sys("A2");
        assert_eq!(a2.reduced_words(&a2.identity()).unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(
            a2.reduced_words(&el(&a2, "1 2 1")).unwrap(),
            vec![vec![0, 1, 0], vec![1, 0, 1]]
        );
        assert_eq!(a2.reduced_words(&el(&a2, "1 2")).unwrap(), vec![vec![0, 1]]);
        let a3 = sys("A3");
        let w0 = el(&a3, "1 2 1 3 2 1");
        assert_eq!(a3.reduced_words(&w0).unwrap().len(), 16);
    }

    #[test]
    fn reduced_word_cap() {
        let a3 = sys("A3").with_limits(Limits {
            max_reduced_words: 5,
            ..Limits::default()
        });
        let w0 = el(&a3, "1 2 1 3 2 1");
        assert!(a3.reduced_words(&w0).is_err());
    }

    #[test]
    fn dihedral_longest_is_canonical() {
        for m in 2..=8u32 {
            let g = CoxeterSystem::dihedral(Some(m));
            let a: Vec<_> = (0..m as usize).map(|i| i % 2).collect();
            let b: Vec<_> = (0..m as usize).map(|i| 1 - i % 2).collect();
            let x = g.element_from_word(&a).unwrap();
            assert_eq!(x, g.element_from_word(&b).unwrap());
            assert_eq!(x.length(), m as usize);
            assert_eq!(g.descents(&x, Side::Left).len(), 2);
        }
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!(sys("At2").rank(), 3);
        assert_eq!(sys("I2(7)").coxeter_order(0, 1), Some(7));
        assert_eq!(sys("I2(inf)").coxeter_order(0, 1), None);
        assert_eq!(sys("U3").rank(), 3);
        assert_eq!(sys("B2").coxeter_order(0, 1), Some(4));
        assert_eq!(sys("G2").coxeter_order(0, 1), Some(6));
        assert_eq!(sys("At1").coxeter_order(0, 1), None);
        for bad in ["", "X3", "A0", "I2(1)", "I2(x)", "Ut2", "D3", "A", "A3x"] {
            assert!(CoxeterSystem::parse(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn invalid_cartan_rejected() {
        assert!(CoxeterSystem::from_cartan("x", 2, vec![2, -1, 0, 2]).is_err());
        assert!(CoxeterSystem::from_cartan("x", 2, vec![2, 1, 1, 2]).is_err());
        assert!(CoxeterSystem::from_cartan("x", 2, vec![1, -1, -1, 2]).is_err());
        assert!(CoxeterSystem::from_cartan("x", 2, vec![2, -1, -1, 2]).is_ok());
    }

    #[test]
    fn word_text_form() {
        let a3 = sys("A3");
        assert_eq!(a3.format_element(&a3.identity()), "e");
        assert_eq!(a3.format_element(&el(&a3, "2 1 3 2")), "2 1 3 2");
        assert_eq!(a3.format_element(&el(&a3, "2 3 1 2")), "2 1 3 2");
        assert!(a3.parse_word("4").is_err());
        assert!(a3.parse_word("0").is_err());
    }
}
