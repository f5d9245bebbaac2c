//! Bott-Samelson bimodules over the polynomial ring of a crystallographic
//! realisation.
//!
//! `R` is the polynomial ring in the simple roots `a1, ..., an` (each of
//! degree 2) and `s_i` acts by `s_i(a_j) = a_j - a[i][j] a_i`. For each
//! generator we fix `delta_s = a_s / 2`, so `d_s(delta_s) = 1` and
//! `R = R^s + delta_s R^s`. The Bott-Samelson bimodule of `(s_1, ..., s_m)`
//! is then free as a right `R`-module on the `2^m` tensors
//! `delta_1^{b_1} (x) ... (x) delta_m^{b_m} (x) 1`, the basis tensor `b`
//! sitting in degree `2 |b| - m`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::coxeter::{CoxeterSystem, Generator};
use crate::deodhar::{decorate, Bits, Decoration, Expression};
use crate::laurent::Laurent;
use crate::scalar::{Coefficient, Field};
use crate::{Error, Result};

/// Default cap on the length of a materialised Bott-Samelson bimodule.
pub const DEFAULT_MAX_BS_LEN: usize = 10;

/// Exponent vector, ordered by total degree and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars].into())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e.into())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse multivariate polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct MPoly<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> MPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::term(nvars, Monomial::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(nvars, Monomial::var(nvars, i), F::one())
    }

    pub fn term(nvars: usize, m: Monomial, c: F) -> Self {
        assert_eq!(m.0.len(), nvars);
        let mut p = Self::zero(nvars);
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, F)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars);
            p.add_term(Monomial(e.into()), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> + '_ {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(F::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.nvars);
        for (m, d) in &self.terms {
            out.add_term(m.clone(), d.clone() * c.clone());
        }
        out
    }

    /// Degree in the grading where every variable has degree 2; `None` for
    /// zero or inhomogeneous polynomials.
    pub fn degree(&self) -> Option<i64> {
        let mut degs = self.terms.keys().map(|m| 2 * m.total_degree() as i64);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().map(|m| 2 * m.total_degree() as i64).max()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Exact division by the variable `i`, `None` if some term is not
    /// divisible.
    pub fn divide_by_var(&self, i: usize) -> Option<Self> {
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                return None;
            }
            let mut e = m.0.to_vec();
            e[i] -= 1;
            out.terms.insert(Monomial(e.into()), c.clone());
        }
        Some(out)
    }

    /// Substitutes `a_j -> images[j]` (a ring endomorphism).
    pub fn substitute(&self, images: &[MPoly<F>]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let mut out = Self::zero(self.nvars);
        let mut powers: Vec<Vec<MPoly<F>>> = images.iter().map(|p| vec![Self::one(p.nvars), p.clone()]).collect();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(self.nvars, c.clone());
            for (j, &k) in m.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[j].len() <= k as usize {
                    let next = powers[j].last().unwrap() * &images[j];
                    powers[j].push(next);
                }
                acc = &acc * &powers[j][k as usize];
            }
            out = &out + &acc;
        }
        out
    }
}

impl<F: Field> fmt::Display for MPoly<F> {
    /// Terms `c·a1^k1a2^k2` in decreasing monomial order, joined by `" + "`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            let vars: String = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, k)| format!("a{}^{}", i + 1, k))
                .collect();
            if !vars.is_empty() {
                write!(f, "·{vars}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> Add<&MPoly<F>> for &MPoly<F> {
    type Output = MPoly<F>;
    fn add(self, rhs: &MPoly<F>) -> MPoly<F> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<F: Field> Sub<&MPoly<F>> for &MPoly<F> {
    type Output = MPoly<F>;
    fn sub(self, rhs: &MPoly<F>) -> MPoly<F> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<F: Field> Mul<&MPoly<F>> for &MPoly<F> {
    type Output = MPoly<F>;
    fn mul(self, rhs: &MPoly<F>) -> MPoly<F> {
        let mut out = MPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(m.mul(n), c.clone() * d.clone());
            }
        }
        out
    }
}

impl<F: Field> Neg for &MPoly<F> {
    type Output = MPoly<F>;
    fn neg(self) -> MPoly<F> {
        self.scale(&-F::one())
    }
}

/// The polynomial ring of a crystallographic system with its `W`-action,
/// Demazure operators and the chosen `delta_s`.
#[derive(Clone, Debug)]
pub struct Realisation<F> {
    rank: usize,
    cartan: Vec<i64>,
    // reflections[s][j] = s(a_j)
    reflections: Vec<Vec<MPoly<F>>>,
}

impl<F: Field> Realisation<F> {
    pub fn new(sys: &CoxeterSystem) -> Result<Self> {
        let cartan = sys
            .cartan()
            .ok_or(Error::NotCrystallographic("polynomial realisation"))?
            .to_vec();
        let n = sys.rank();
        let reflections = (0..n)
            .map(|s| {
                (0..n)
                    .map(|j| {
                        let a = cartan[s * n + j];
                        &MPoly::var(n, j) - &MPoly::var(n, s).scale(&F::from_i64(a))
                    })
                    .collect()
            })
            .collect();
        Ok(Realisation {
            rank: n,
            cartan,
            reflections,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `<alpha_s^vee, alpha_t>`.
    pub fn cartan_entry(&self, s: Generator, t: Generator) -> i64 {
        self.cartan[s * self.rank + t]
    }

    pub fn root(&self, s: Generator) -> MPoly<F> {
        MPoly::var(self.rank, s)
    }

    /// `delta_s = alpha_s / 2`.
    pub fn delta(&self, s: Generator) -> MPoly<F> {
        self.root(s).scale(&(F::one() / F::from_i64(2)))
    }

    pub fn zero(&self) -> MPoly<F> {
        MPoly::zero(self.rank)
    }

    pub fn one(&self) -> MPoly<F> {
        MPoly::one(self.rank)
    }

    pub fn reflect(&self, s: Generator, f: &MPoly<F>) -> MPoly<F> {
        f.substitute(&self.reflections[s])
    }

    /// `d_s(f) = (f - s(f)) / alpha_s`.
    pub fn demazure(&self, s: Generator, f: &MPoly<F>) -> Result<MPoly<F>> {
        let diff = f - &self.reflect(s, f);
        diff.divide_by_var(s).ok_or_else(|| {
            Error::Internal(format!("f - s(f) not divisible by a{} for f = {f}", s + 1))
        })
    }

    /// `f = f_0 + delta_s d_s(f)` with both `f_0` and `d_s(f)` `s`-invariant.
    pub fn split(&self, s: Generator, f: &MPoly<F>) -> Result<(MPoly<F>, MPoly<F>)> {
        let d = self.demazure(s, f)?;
        let f0 = f - &(&self.delta(s) * &d);
        Ok((f0, d))
    }
}

/// A right basis element's degree: `2 |b| - m`.
pub fn basis_degree(b: Bits) -> i64 {
    2 * b.count_ones() as i64 - b.len() as i64
}

/// The Bott-Samelson bimodule of an expression, as a free right module.
#[derive(Clone, Debug)]
pub struct BsModule<F> {
    ring: Arc<Realisation<F>>,
    letters: Vec<Generator>,
}

/// Materialises `B_ybar` and returns it with its graded rank.
pub fn build_bs<F: Field, C: Coefficient>(
    sys: &CoxeterSystem,
    ybar: &Expression,
    max_len: usize,
) -> Result<(BsModule<F>, Laurent<C>)> {
    let ring = Arc::new(Realisation::new(sys)?);
    let module = BsModule::new(ring, ybar, max_len)?;
    let grk = module.graded_rank();
    Ok((module, grk))
}

impl<F: Field> BsModule<F> {
    pub fn new(ring: Arc<Realisation<F>>, ybar: &Expression, max_len: usize) -> Result<Self> {
        if ybar.len() > max_len {
            return Err(Error::ResourceLimit {
                what: "Bott-Samelson expression length",
                limit: max_len,
            });
        }
        Ok(BsModule {
            ring,
            letters: ybar.letters().to_vec(),
        })
    }

    pub fn ring(&self) -> &Realisation<F> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn basis(&self) -> impl Iterator<Item = Bits> {
        Bits::all(self.len())
    }

    /// `sum_b v^{deg b}`, which is `(v + v^-1)^m`.
    pub fn graded_rank<C: Coefficient>(&self) -> Laurent<C> {
        Laurent::from_terms(self.basis().map(|b| (basis_degree(b) as i32, C::one())))
    }

    pub fn zero(&self) -> BsElement<F> {
        BsElement {
            len: self.len(),
            coords: BTreeMap::new(),
        }
    }

    /// `c_bot = 1 (x) 1 (x) ... (x) 1`.
    pub fn c_bot(&self) -> BsElement<F> {
        self.basis_element(Bits::zeros(self.len()), self.ring.one())
    }

    /// The basis tensor `b` with right coefficient `g`.
    pub fn basis_element(&self, b: Bits, g: MPoly<F>) -> BsElement<F> {
        assert_eq!(b.len(), self.len());
        let mut x = self.zero();
        x.add_coord(b, g);
        x
    }

    /// Left action of `f`, pushing it through each tensor slot with
    /// `p (x) - = p_0 (x) - + delta (x) d(p) -`.
    pub fn left_act(&self, f: &MPoly<F>, x: &BsElement<F>) -> Result<BsElement<F>> {
        let mut out = self.zero();
        let mut pushed = Vec::new();
        for (&b, g) in &x.coords {
            pushed.clear();
            self.push(f.clone(), 0, b, &mut pushed)?;
            for (b2, p) in pushed.drain(..) {
                out.add_coord(b2, &p * g);
            }
        }
        Ok(out)
    }

    fn push(&self, f: MPoly<F>, i: usize, b: Bits, out: &mut Vec<(Bits, MPoly<F>)>) -> Result<()> {
        if i == self.len() {
            out.push((b, f));
            return Ok(());
        }
        let s = self.letters[i];
        let p = if b.get(i) {
            &f * &self.ring.delta(s)
        } else {
            f
        };
        let (p0, dp) = self.ring.split(s, &p)?;
        if !p0.is_zero() {
            self.push(p0, i + 1, b.with(i, false), out)?;
        }
        if !dp.is_zero() {
            self.push(dp, i + 1, b.with(i, true), out)?;
        }
        Ok(())
    }

    /// `m_{s_1} (x) ... (x) m_{s_m}`: multiplies all tensor slots together.
    pub fn m_chain_eval(&self, x: &BsElement<F>) -> MPoly<F> {
        let mut total = self.ring.zero();
        for (&b, g) in &x.coords {
            let mut term = g.clone();
            for (i, &s) in self.letters.iter().enumerate() {
                if b.get(i) {
                    term = &term * &self.ring.delta(s);
                }
            }
            total = &total + &term;
        }
        total
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementDegree {
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

/// An element `sum_b (basis tensor b) g_b` of a Bott-Samelson bimodule.
#[derive(Clone, Debug, PartialEq)]
pub struct BsElement<F> {
    len: usize,
    coords: BTreeMap<Bits, MPoly<F>>,
}

impl<F: Field> BsElement<F> {
    pub fn coord(&self, b: Bits) -> Option<&MPoly<F>> {
        self.coords.get(&b)
    }

    pub fn coords(&self) -> impl Iterator<Item = (&Bits, &MPoly<F>)> + '_ {
        self.coords.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn add_coord(&mut self, b: Bits, g: MPoly<F>) {
        if g.is_zero() {
            return;
        }
        let sum = match self.coords.remove(&b) {
            Some(old) => &old + &g,
            None => g,
        };
        if !sum.is_zero() {
            self.coords.insert(b, sum);
        }
    }

    pub fn right_act(&self, g: &MPoly<F>) -> Self {
        let mut out = BsElement {
            len: self.len,
            coords: BTreeMap::new(),
        };
        for (&b, h) in &self.coords {
            out.add_coord(b, h * g);
        }
        out
    }

    pub fn degree(&self) -> ElementDegree {
        let mut seen = None;
        for (&b, g) in &self.coords {
            let Some(d) = g.degree() else {
                return ElementDegree::Inhomogeneous;
            };
            let total = basis_degree(b) + d;
            match seen {
                None => seen = Some(total),
                Some(prev) if prev != total => return ElementDegree::Inhomogeneous,
                _ => {}
            }
        }
        seen.map_or(ElementDegree::Zero, ElementDegree::Homogeneous)
    }
}

impl<F: Field> Add<&BsElement<F>> for &BsElement<F> {
    type Output = BsElement<F>;
    fn add(self, rhs: &BsElement<F>) -> BsElement<F> {
        assert_eq!(self.len, rhs.len);
        let mut out = self.clone();
        for (&b, g) in &rhs.coords {
            out.add_coord(b, g.clone());
        }
        out
    }
}

impl<F: Field> fmt::Display for BsElement<F> {
    /// One `bits: poly` line per nonzero coordinate.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return f.write_str("0");
        }
        let lines: Vec<String> = self.coords.iter().map(|(b, g)| format!("{b}: {g}")).collect();
        f.write_str(&lines.join("\n"))
    }
}

/// Degree shift of one step of the light-leaf construction.
pub fn step_degree(d: Decoration) -> i32 {
    match d {
        // f (x) m_s
        Decoration::U0 => 1,
        // alpha_{x,s}
        Decoration::U1 => 0,
        // beta_{xs,s}
        Decoration::D0 => -1,
        // gamma_{xs,s} after beta_{xs,s}
        Decoration::D1 => -1 + 1,
    }
}

/// Total degree of the light leaf attached to `e`, accumulated step by step.
pub fn cll_degree(sys: &CoxeterSystem, ybar: &Expression, e: Bits) -> Result<i32> {
    let dec = decorate(sys, ybar, e)?;
    let total: i32 = dec.decorations.iter().map(|&d| step_degree(d)).sum();
    if total != dec.defect {
        return Err(Error::Internal(format!(
            "light leaf degree {total} differs from defect {}",
            dec.defect
        )));
    }
    Ok(total)
}
