//! Subexpressions, Deodhar's defect and the decategorified light-leaves
//! identities.
//!
//! For an expression `y = (s_1, ..., s_m)` and a 01-word `e`, the prefix
//! products are `w_i = s_1^{e_1} ... s_i^{e_i}`; position `i` is decorated
//! `U` when `w_{i-1} s_i > w_{i-1}` and `D` otherwise. The defect counts `U0`
//! positions minus `D0` positions. Summed over all `e` expressing `x`,
//! `v^defect` gives the graded dimension of the light-leaves space attached to
//! `(x, y)`, which is the `h_x` coefficient of `b_{s_1} ... b_{s_m}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;

use crate::coxeter::{format_word, CoxeterSystem, Generator, GroupElement, Side};
use crate::hecke::{pairing, Basis, HeckeAlgebra, HeckeElement};
use crate::laurent::Laurent;
use crate::scalar::Coefficient;
use crate::{Error, Result};

/// Longest expression whose subexpressions may be enumerated by default.
pub const DEFAULT_MAX_SUBEXPR_LEN: usize = 24;
/// Hard bound from the `u32` bit encoding.
pub const MAX_BITS: usize = 32;

/// A word in the generators together with its reducedness.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Expression {
    letters: Vec<Generator>,
    product: GroupElement,
}

impl Expression {
    pub fn new(sys: &CoxeterSystem, letters: Vec<Generator>) -> Result<Self> {
        let product = sys.element_from_word(&letters)?;
        Ok(Expression { letters, product })
    }

    pub fn parse(sys: &CoxeterSystem, s: &str) -> Result<Self> {
        Self::new(sys, sys.parse_word(s)?)
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn product(&self) -> &GroupElement {
        &self.product
    }

    pub fn is_reduced(&self) -> bool {
        self.product.length() == self.letters.len()
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_word(&self.letters))
    }
}

/// A 01-word of length at most 32. Position 0 is the most significant bit,
/// so numeric order on `word` is lexicographic order on the bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    word: u32,
    len: u8,
}

impl Bits {
    pub fn new(word: u32, len: usize) -> Self {
        assert!(len <= MAX_BITS);
        let mask = if len == 32 { u32::MAX } else { (1u32 << len) - 1 };
        Bits {
            word: word & mask,
            len: len as u8,
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(0, len)
    }

    pub fn ones(len: usize) -> Self {
        Self::new(u32::MAX, len)
    }

    pub fn from_slice(bits: &[bool]) -> Self {
        let word = bits.iter().fold(0u32, |acc, &b| (acc << 1) | b as u32);
        Self::new(word, bits.len())
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn word(&self) -> u32 {
        self.word
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len());
        (self.word >> (self.len() - 1 - i)) & 1 == 1
    }

    pub fn with(&self, i: usize, bit: bool) -> Self {
        let m = 1u32 << (self.len() - 1 - i);
        let word = if bit { self.word | m } else { self.word & !m };
        Bits { word, len: self.len }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len()).map(|i| self.get(i))
    }

    pub fn count_ones(&self) -> u32 {
        self.word.count_ones()
    }

    /// All `2^len` words in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = Bits> {
        assert!(len < MAX_BITS);
        (0..1u32 << len).map(move |w| Bits::new(w, len))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Bits {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("bad bit string {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.len() > MAX_BITS {
            return Err(Error::Parse(format!("bit string {s:?} longer than {MAX_BITS}")));
        }
        Ok(Bits::from_slice(&bits))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decoration {
    U0,
    U1,
    D0,
    D1,
}

impl Decoration {
    pub fn new(up: bool, bit: bool) -> Self {
        match (up, bit) {
            (true, false) => Decoration::U0,
            (true, true) => Decoration::U1,
            (false, false) => Decoration::D0,
            (false, true) => Decoration::D1,
        }
    }

    pub fn is_up(self) -> bool {
        matches!(self, Decoration::U0 | Decoration::U1)
    }

    /// Contribution to the defect.
    pub fn defect(self) -> i32 {
        match self {
            Decoration::U0 => 1,
            Decoration::D0 => -1,
            _ => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decoration::U0 => "U0",
            Decoration::U1 => "U1",
            Decoration::D0 => "D0",
            Decoration::D1 => "D1",
        }
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Formats decorations as `"U1 D0"`.
pub fn format_decorations(d: &[Decoration]) -> String {
    d.iter().map(|d| d.as_str()).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedSubexpr {
    pub bits: Bits,
    pub decorations: Vec<Decoration>,
    /// `w_1, ..., w_m`.
    pub prefixes: Vec<GroupElement>,
    pub expressed: GroupElement,
    pub defect: i32,
}

/// Decorates the subexpression `e` of `ybar`.
pub fn decorate(sys: &CoxeterSystem, ybar: &Expression, e: Bits) -> Result<DecoratedSubexpr> {
    if e.len() != ybar.len() {
        return Err(Error::LengthMismatch {
            expected: ybar.len(),
            found: e.len(),
        });
    }
    let mut w = sys.identity();
    let mut decorations = Vec::with_capacity(e.len());
    let mut prefixes = Vec::with_capacity(e.len());
    let mut defect = 0;
    for (i, &s) in ybar.letters().iter().enumerate() {
        let up = !sys.is_descent(&w, s, Side::Right);
        let bit = e.get(i);
        let d = Decoration::new(up, bit);
        defect += d.defect();
        decorations.push(d);
        if bit {
            w = sys.mul_gen(&w, s, Side::Right);
        }
        prefixes.push(w.clone());
    }
    Ok(DecoratedSubexpr {
        bits: e,
        decorations,
        prefixes,
        expressed: w,
        defect,
    })
}

/// Streaming enumeration of subexpressions in lexicographic bit order,
/// optionally restricted to those expressing a target element. Branches that
/// can no longer reach the target's length are pruned.
pub struct Subexpressions<'a> {
    sys: &'a CoxeterSystem,
    letters: &'a [Generator],
    target: Option<GroupElement>,
    // w_0 .. w_m
    prefix: Vec<GroupElement>,
    decorations: Vec<Decoration>,
    defect: Vec<i32>,
    bits: Vec<bool>,
    state: IterState,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum IterState {
    Fresh,
    AtLeaf,
    Done,
}

pub fn enumerate_subexpr<'a>(
    sys: &'a CoxeterSystem,
    ybar: &'a Expression,
    target: Option<&GroupElement>,
    max_len: usize,
) -> Result<Subexpressions<'a>> {
    let cap = max_len.min(MAX_BITS);
    if ybar.len() > cap {
        return Err(Error::ResourceLimit {
            what: "expression length for subexpression enumeration",
            limit: cap,
        });
    }
    let m = ybar.len();
    Ok(Subexpressions {
        sys,
        letters: ybar.letters(),
        target: target.cloned(),
        prefix: vec![sys.identity(); m + 1],
        decorations: vec![Decoration::U0; m],
        defect: vec![0; m + 1],
        bits: vec![false; m],
        state: IterState::Fresh,
    })
}

impl Subexpressions<'_> {
    /// Sets position `i` and reports whether the target is still reachable.
    fn place(&mut self, i: usize, bit: bool) -> bool {
        let s = self.letters[i];
        let w = &self.prefix[i];
        let up = !self.sys.is_descent(w, s, Side::Right);
        let d = Decoration::new(up, bit);
        let next = if bit {
            self.sys.mul_gen(w, s, Side::Right)
        } else {
            w.clone()
        };
        self.bits[i] = bit;
        self.decorations[i] = d;
        self.defect[i + 1] = self.defect[i] + d.defect();
        let remaining = self.letters.len() - i - 1;
        let ok = match &self.target {
            None => true,
            Some(x) => {
                let gap = (next.length() as i64 - x.length() as i64).unsigned_abs() as usize;
                gap <= remaining && (remaining > 0 || &next == x)
            }
        };
        self.prefix[i + 1] = next;
        ok
    }

    /// Depth-first search from position `i` trying `bit` first; returns true
    /// when a complete admissible word has been placed.
    fn search(&mut self, mut i: usize, mut bit: bool) -> bool {
        let m = self.letters.len();
        loop {
            if self.place(i, bit) {
                if i + 1 == m {
                    return true;
                }
                i += 1;
                bit = false;
                continue;
            }
            loop {
                if !bit {
                    bit = true;
                    break;
                }
                if i == 0 {
                    return false;
                }
                i -= 1;
                bit = self.bits[i];
            }
        }
    }

    fn current(&self) -> DecoratedSubexpr {
        let m = self.letters.len();
        DecoratedSubexpr {
            bits: Bits::from_slice(&self.bits),
            decorations: self.decorations.clone(),
            prefixes: self.prefix[1..].to_vec(),
            expressed: self.prefix[m].clone(),
            defect: self.defect[m],
        }
    }
}

impl Iterator for Subexpressions<'_> {
    type Item = DecoratedSubexpr;

    fn next(&mut self) -> Option<DecoratedSubexpr> {
        let m = self.letters.len();
        let found = match self.state {
            IterState::Done => return None,
            IterState::Fresh if m == 0 => {
                self.state = IterState::Done;
                let ok = self.target.as_ref().is_none_or(|x| x.is_identity());
                return ok.then(|| self.current());
            }
            IterState::Fresh => self.search(0, false),
            IterState::AtLeaf => {
                // Advance past the current leaf.
                let mut i = m - 1;
                loop {
                    if !self.bits[i] {
                        break self.search(i, true);
                    }
                    if i == 0 {
                        break false;
                    }
                    i -= 1;
                }
            }
        };
        if found {
            self.state = IterState::AtLeaf;
            Some(self.current())
        } else {
            self.state = IterState::Done;
            None
        }
    }
}

/// `b_{s_1} ... b_{s_m}` in the standard basis: the character of the
/// Bott-Samelson bimodule.
pub fn bs_character<C: Coefficient>(alg: &HeckeAlgebra<C>, ybar: &Expression) -> HeckeElement<C> {
    alg.b_product(ybar.letters())
}

/// `sum_e v^{df(e)} h_{y^e}` over every subexpression.
pub fn defect_sum<C: Coefficient>(
    sys: &CoxeterSystem,
    ybar: &Expression,
    max_len: usize,
) -> Result<HeckeElement<C>> {
    let mut out = HeckeElement::zero();
    for e in enumerate_subexpr(sys, ybar, None, max_len)? {
        out.add_term(e.expressed, Laurent::v_pow(e.defect));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy<C> {
    pub element: GroupElement,
    pub character: Laurent<C>,
    pub defect_sum: Laurent<C>,
}

#[derive(Clone, Debug)]
pub struct DeodharReport<C> {
    pub expression: Expression,
    pub character: HeckeElement<C>,
    pub discrepancies: Vec<Discrepancy<C>>,
}

impl<C> DeodharReport<C> {
    pub fn holds(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Compares the character with the defect generating function coefficient
/// by coefficient.
pub fn verify_deodhar_identity<C: Coefficient>(
    alg: &HeckeAlgebra<C>,
    ybar: &Expression,
    max_len: usize,
) -> Result<DeodharReport<C>> {
    let character = bs_character(alg, ybar);
    let sum: HeckeElement<C> = defect_sum(alg.system(), ybar, max_len)?;
    let mut support: Vec<&GroupElement> = character.support().chain(sum.support()).collect();
    support.sort();
    support.dedup();
    let discrepancies = support
        .into_iter()
        .filter_map(|x| {
            let (a, b) = (character.coeff(x), sum.coeff(x));
            (a != b).then(|| Discrepancy {
                element: x.clone(),
                character: a,
                defect_sum: b,
            })
        })
        .collect();
    Ok(DeodharReport {
        expression: ybar.clone(),
        character,
        discrepancies,
    })
}

/// Every word of length at most `max_len` over the generators, shortest
/// first, lexicographic within a length.
pub fn all_words(rank: usize, max_len: usize) -> Vec<Vec<Generator>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * rank);
        for w in &layer {
            for s in 0..rank {
                let mut w2: Vec<Generator> = w.clone();
                w2.push(s);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Clone, Debug)]
pub struct IdentitySweep<C> {
    pub expressions_checked: usize,
    pub failures: Vec<DeodharReport<C>>,
}

/// Checks the defect identity for every expression of length at most
/// `max_len`, in parallel. Failures are reported in word order.
pub fn identity_sweep<C: Coefficient>(
    alg: &HeckeAlgebra<C>,
    max_len: usize,
) -> Result<IdentitySweep<C>> {
    let sys = alg.system();
    let words = all_words(sys.rank(), max_len);
    let reports = words
        .par_iter()
        .map(|w| {
            let ybar = Expression::new(sys, w.clone())?;
            verify_deodhar_identity(alg, &ybar, MAX_BITS)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IdentitySweep {
        expressions_checked: reports.len(),
        failures: reports.into_iter().filter(|r| !r.holds()).collect(),
    })
}

/// Graded dimension of the light-leaves space for `(x, ybar)`:
/// `sum_{e expressing x} v^{df(e)}`. Cross-checked against the `h_x`
/// coefficient of the Bott-Samelson character.
pub fn gdim_d<C: Coefficient>(
    alg: &HeckeAlgebra<C>,
    x: &GroupElement,
    ybar: &Expression,
    max_len: usize,
) -> Result<Laurent<C>> {
    let sum: Laurent<C> = enumerate_subexpr(alg.system(), ybar, Some(x), max_len)?
        .map(|e| Laurent::v_pow(e.defect))
        .sum();
    let expected = bs_character(alg, ybar).coeff(x);
    if sum != expected {
        return Err(Error::Internal(format!(
            "defect sum {sum} disagrees with character coefficient {expected}"
        )));
    }
    Ok(sum)
}

/// Per-degree data of the subset-selection problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeClass {
    /// Subexpressions expressing `x` with this defect.
    pub available: usize,
    /// Coefficient of `v^defect` in `h_{x,y}`.
    pub required: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetCensus {
    pub table: BTreeMap<i32, DegreeClass>,
    /// Number of subsets whose defect generating function is `h_{x,y}`.
    pub count: BigUint,
    /// Exactly one solution (every class is taken entirely or not at all).
    pub forced: bool,
    /// Lexicographically least solution.
    pub witness: Vec<Bits>,
}

/// Counts from per-degree availability and requirement.
pub fn census_from_table(table: &BTreeMap<i32, DegreeClass>) -> Result<(BigUint, bool)> {
    let mut count = BigUint::one();
    let mut forced = true;
    for (&degree, class) in table {
        let n = class.available as u64;
        let c = class.required;
        if c > n {
            return Err(Error::Infeasible {
                degree,
                required: c,
                available: class.available,
            });
        }
        count *= num_integer::binomial(BigUint::from(n), BigUint::from(c));
        forced &= c == 0 || c == n;
    }
    Ok((count, forced))
}

/// Census of subsets `X` of the subexpressions of `ybar` expressing `x` with
/// `sum_{e in X} v^{df(e)} = h_{x,y}`.
pub fn subset_solutions<C: Coefficient>(
    alg: &HeckeAlgebra<C>,
    x: &GroupElement,
    ybar: &Expression,
    max_len: usize,
) -> Result<SubsetCensus> {
    if !ybar.is_reduced() {
        return Err(Error::Precondition(format!(
            "expression {ybar} is not reduced"
        )));
    }
    let h = alg.kl_poly(x, ybar.product())?.h;
    let mut classes: BTreeMap<i32, Vec<Bits>> = BTreeMap::new();
    for e in enumerate_subexpr(alg.system(), ybar, Some(x), max_len)? {
        classes.entry(e.defect).or_default().push(e.bits);
    }
    let mut table = BTreeMap::new();
    for (d, members) in &classes {
        table.insert(
            *d,
            DegreeClass {
                available: members.len(),
                required: 0,
            },
        );
    }
    for (d, c) in h.terms() {
        let required = c.to_u64().ok_or_else(|| {
            Error::Internal(format!("KL coefficient {c} at degree {d} is not a natural number"))
        })?;
        table
            .entry(d)
            .or_insert(DegreeClass {
                available: 0,
                required: 0,
            })
            .required = required;
    }
    let (count, forced) = census_from_table(&table)?;
    let mut witness: Vec<Bits> = table
        .iter()
        .flat_map(|(d, class)| {
            classes
                .get(d)
                .into_iter()
                .flat_map(move |m| m.iter().take(class.required as usize).copied())
        })
        .collect();
    witness.sort();
    Ok(SubsetCensus {
        table,
        count,
        forced,
        witness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub rationally_smooth: bool,
    pub dihedral: bool,
    pub universal: bool,
}

/// `rationally_smooth` iff `h_{x,y} = v^{l(y)-l(x)}`.
pub fn classify<C: Coefficient>(
    alg: &HeckeAlgebra<C>,
    x: &GroupElement,
    y: &GroupElement,
) -> Result<Classification> {
    let h = alg.kl_poly(x, y)?.h;
    let gap = y.length() as i32 - x.length() as i32;
    let sys = alg.system();
    Ok(Classification {
        rationally_smooth: gap >= 0 && h == Laurent::v_pow(gap),
        dihedral: sys.is_dihedral(),
        universal: sys.is_universal(),
    })
}

/// Graded rank of `Hom(M, N)` from the characters: `(ch M, bar(ch N))`.
pub fn hom_gdim<C: Coefficient>(
    alg: &HeckeAlgebra<C>,
    ch_m: &HeckeElement<C>,
    ch_n: &HeckeElement<C>,
) -> Laurent<C> {
    pairing(ch_m, &alg.bar(ch_n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaHomReport<C> {
    pub x: GroupElement,
    pub s: Generator,
    /// Degree 0 part of `(b_x b_s, b_xs)`, degree -1 part of
    /// `(b_xs b_s, b_xs)`, degree 1 part of `(b_xs, b_x)`.
    pub dims: [C; 3],
}

impl<C: Coefficient> LemmaHomReport<C> {
    pub fn holds(&self) -> bool {
        self.dims.iter().all(One::is_one)
    }
}

/// The three one-dimensionality computations for `x < xs`.
pub fn verify_lemma_hom<C: Coefficient>(
    alg: &HeckeAlgebra<C>,
    x: &GroupElement,
    s: Generator,
) -> Result<LemmaHomReport<C>> {
    let sys = alg.system();
    sys.check_generator(s)?;
    if sys.is_descent(x, s, Side::Right) {
        return Err(Error::Precondition(format!(
            "{} is a right descent of {}",
            s + 1,
            sys.format_element(x)
        )));
    }
    let xs = sys.mul_gen(x, s, Side::Right);
    let bx = alg.kl_basis(x)?;
    let bxs = alg.kl_basis(&xs)?;
    let bx_bs = alg.mul_std_gen(&bx, s, Basis::KazhdanLusztig);
    let bxs_bs = alg.mul_std_gen(&bxs, s, Basis::KazhdanLusztig);
    let first = hom_gdim(alg, &bx_bs, &bxs).coeff(0);
    let second = hom_gdim(alg, &bxs_bs, &bxs).coeff(-1);
    let third = hom_gdim(alg, &bxs, &bx).coeff(1);
    Ok(LemmaHomReport {
        x: x.clone(),
        s,
        dims: [first, second, third],
    })
}
