//! The Hecke algebra of a Coxeter system over `Z[v, v^-1]`.
//!
//! Conventions: `h_x h_s = h_{xs}` if `xs > x` and `(v^-1 - v) h_x + h_{xs}`
//! otherwise; `b_s = h_s + v h_e`; the KL basis `b_x` is bar invariant with
//! `b_x in h_x + sum_y vZ[v] h_y`; `h_{y,x}` is the coefficient of `h_y` in
//! `b_x`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::coxeter::{CoxeterSystem, Generator, GroupElement, Side};
use crate::laurent::Laurent;
use crate::scalar::Coefficient;
use crate::{Error, Result};

/// Default cap on the support of a single KL basis element.
pub const DEFAULT_MAX_INTERVAL: usize = 200_000;

/// Which element of the algebra a generator stands for in a product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// `h_s`
    Standard,
    /// `b_s = h_s + v h_e`
    KazhdanLusztig,
}

/// A finite sum `sum_x c_x h_x`. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HeckeElement<C> {
    terms: BTreeMap<GroupElement, Laurent<C>>,
}

impl<C: Coefficient> Default for HeckeElement<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> HeckeElement<C> {
    pub fn zero() -> Self {
        HeckeElement {
            terms: BTreeMap::new(),
        }
    }

    /// The standard basis element `h_x`.
    pub fn basis(x: GroupElement) -> Self {
        Self::term(x, Laurent::one())
    }

    pub fn term(x: GroupElement, c: Laurent<C>) -> Self {
        let mut h = Self::zero();
        h.add_term(x, c);
        h
    }

    pub fn from_terms<I: IntoIterator<Item = (GroupElement, Laurent<C>)>>(terms: I) -> Self {
        let mut h = Self::zero();
        for (x, c) in terms {
            h.add_term(x, c);
        }
        h
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x: &GroupElement) -> Laurent<C> {
        self.terms.get(x).cloned().unwrap_or_else(Laurent::zero)
    }

    pub fn get(&self, x: &GroupElement) -> Option<&Laurent<C>> {
        self.terms.get(x)
    }

    /// Terms in increasing order of length.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&GroupElement, &Laurent<C>)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> + '_ {
        self.terms.keys()
    }

    /// A longest element of the support.
    pub fn top(&self) -> Option<(&GroupElement, &Laurent<C>)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, x: GroupElement, c: Laurent<C>) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(x) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Laurent<C>) {
        for (x, d) in &other.terms {
            self.add_term(x.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Laurent<C>) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Applies `v -> v^-1` to the coefficients only.
    pub fn bar_coefficients(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(x, c)| (x.clone(), c.bar())))
    }
}

impl<C: Coefficient> std::ops::Add<&HeckeElement<C>> for &HeckeElement<C> {
    type Output = HeckeElement<C>;
    fn add(self, rhs: &HeckeElement<C>) -> HeckeElement<C> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Laurent::one());
        out
    }
}

impl<C: Coefficient> std::ops::Sub<&HeckeElement<C>> for &HeckeElement<C> {
    type Output = HeckeElement<C>;
    fn sub(self, rhs: &HeckeElement<C>) -> HeckeElement<C> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Laurent::one());
        out
    }
}

/// The bilinear form with `(h_x, h_y) = delta_{x,y}`.
pub fn pairing<C: Coefficient>(a: &HeckeElement<C>, b: &HeckeElement<C>) -> Laurent<C> {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut acc = Laurent::zero();
    for (x, c) in &small.terms {
        if let Some(d) = large.terms.get(x) {
            acc += &(c * d);
        }
    }
    acc
}

/// KL polynomial data for a pair `(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KlPoly<C> {
    /// `h_{x,y}`, coefficient of `h_x` in `b_y`.
    pub h: Laurent<C>,
    /// Classical polynomial in `q`, with `h_{x,y}(v) = v^{l(y)-l(x)} p(v^-2)`.
    pub p: Laurent<C>,
    /// Coefficient of `v` in `h`.
    pub mu: C,
}

/// Hecke algebra of a fixed system with memoised bar involution and KL basis.
///
/// Caches are guarded by read-write locks, so one algebra may be shared
/// across worker threads.
pub struct HeckeAlgebra<C> {
    sys: Arc<CoxeterSystem>,
    max_interval: usize,
    bar_memo: RwLock<HashMap<GroupElement, Arc<HeckeElement<C>>>>,
    kl_memo: RwLock<HashMap<GroupElement, Arc<HeckeElement<C>>>>,
}

impl<C: Coefficient> HeckeAlgebra<C> {
    pub fn new(sys: Arc<CoxeterSystem>) -> Self {
        HeckeAlgebra {
            sys,
            max_interval: DEFAULT_MAX_INTERVAL,
            bar_memo: RwLock::new(HashMap::new()),
            kl_memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_max_interval(mut self, cap: usize) -> Self {
        self.max_interval = cap;
        self
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn system_arc(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn h(&self, x: &GroupElement) -> HeckeElement<C> {
        HeckeElement::basis(x.clone())
    }

    pub fn h_e(&self) -> HeckeElement<C> {
        HeckeElement::basis(self.sys.identity())
    }

    /// `b_s = h_s + v h_e`.
    pub fn b_s(&self, s: Generator) -> HeckeElement<C> {
        let mut b = HeckeElement::basis(self.sys.generator(s));
        b.add_term(self.sys.identity(), Laurent::v_pow(1));
        b
    }

    /// Right multiplication by `h_s` or `b_s`.
    pub fn mul_std_gen(&self, h: &HeckeElement<C>, s: Generator, basis: Basis) -> HeckeElement<C> {
        self.mul_gen_side(h, s, basis, Side::Right)
    }

    /// Left multiplication by `h_s` or `b_s`.
    pub fn left_mul_gen(&self, h: &HeckeElement<C>, s: Generator, basis: Basis) -> HeckeElement<C> {
        self.mul_gen_side(h, s, basis, Side::Left)
    }

    fn mul_gen_side(
        &self,
        h: &HeckeElement<C>,
        s: Generator,
        basis: Basis,
        side: Side,
    ) -> HeckeElement<C> {
        let v = Laurent::<C>::v_pow(1);
        let vinv = Laurent::<C>::v_pow(-1);
        let quad = &vinv - &v;
        let mut out = HeckeElement::zero();
        for (x, c) in h.iter() {
            let xs = self.sys.mul_gen(x, s, side);
            let down = self.sys.is_descent(x, s, side);
            out.add_term(xs, c.clone());
            let own = match (basis, down) {
                (Basis::Standard, false) => continue,
                (Basis::Standard, true) => &quad,
                (Basis::KazhdanLusztig, false) => &v,
                (Basis::KazhdanLusztig, true) => &vinv,
            };
            out.add_term(x.clone(), c * own);
        }
        out
    }

    /// Product of two arbitrary elements.
    pub fn mul(&self, a: &HeckeElement<C>, b: &HeckeElement<C>) -> HeckeElement<C> {
        let mut out = HeckeElement::zero();
        for (y, c) in b.iter() {
            let mut acc = a.clone();
            for s in self.sys.lex_reduced_word(y) {
                acc = self.mul_std_gen(&acc, s, Basis::Standard);
            }
            out.add_scaled(&acc, c);
        }
        out
    }

    /// `b_{s_1} b_{s_2} ... b_{s_m}` in the standard basis.
    pub fn b_product(&self, word: &[Generator]) -> HeckeElement<C> {
        word.iter()
            .fold(self.h_e(), |acc, &s| self.mul_std_gen(&acc, s, Basis::KazhdanLusztig))
    }

    /// `bar(h_x) = (h_{x^-1})^-1`, built along a reduced word from
    /// `bar(h_s) = h_s + (v - v^-1) h_e`.
    pub fn bar_standard(&self, x: &GroupElement) -> Arc<HeckeElement<C>> {
        if let Some(b) = self.bar_memo.read().unwrap().get(x) {
            return b.clone();
        }
        let value = match self.sys.first_right_descent(x) {
            None => HeckeElement::basis(x.clone()),
            Some(s) => {
                let xs = self.sys.mul_gen(x, s, Side::Right);
                let prev = self.bar_standard(&xs);
                let mut out = self.mul_std_gen(&prev, s, Basis::Standard);
                let corr = &Laurent::v_pow(1) - &Laurent::v_pow(-1);
                out.add_scaled(&prev, &corr);
                out
            }
        };
        let value = Arc::new(value);
        self.bar_memo
            .write()
            .unwrap()
            .insert(x.clone(), value.clone());
        value
    }

    /// The bar involution, a ring morphism with `v -> v^-1`.
    pub fn bar(&self, h: &HeckeElement<C>) -> HeckeElement<C> {
        let mut out = HeckeElement::zero();
        for (x, c) in h.iter() {
            out.add_scaled(&self.bar_standard(x), &c.bar());
        }
        out
    }

    /// The Kazhdan-Lusztig basis element `b_x`.
    ///
    /// Recursion on length: with `s` the smallest right descent of `x`,
    /// `b_{xs} b_s` is bar invariant with top term `h_x`; subtracting
    /// bar-invariant multiples of lower `b_z` (longest offender first) leaves
    /// every other coefficient in `vZ[v]`.
    pub fn kl_basis(&self, x: &GroupElement) -> Result<Arc<HeckeElement<C>>> {
        if let Some(b) = self.kl_memo.read().unwrap().get(x) {
            return Ok(b.clone());
        }
        let value = match self.sys.first_right_descent(x) {
            None => self.h_e(),
            Some(s) => {
                let xs = self.sys.mul_gen(x, s, Side::Right);
                let prev = self.kl_basis(&xs)?;
                let product = self.mul_std_gen(&prev, s, Basis::KazhdanLusztig);
                self.reduce_to_kl(product, x)?
            }
        };
        if value.len() > self.max_interval {
            return Err(Error::ResourceLimit {
                what: "Bruhat interval size",
                limit: self.max_interval,
            });
        }
        let value = Arc::new(value);
        self.kl_memo
            .write()
            .unwrap()
            .insert(x.clone(), value.clone());
        Ok(value)
    }

    /// Subtracts lower KL elements from a bar-invariant `h` with top `h_x`
    /// until it satisfies the degree condition.
    fn reduce_to_kl(&self, mut h: HeckeElement<C>, x: &GroupElement) -> Result<HeckeElement<C>> {
        loop {
            let offender = h
                .iter()
                .rev()
                .find(|(z, c)| *z != x && !c.in_v_poly())
                .map(|(z, c)| (z.clone(), c.clone()));
            let Some((z, c)) = offender else {
                break;
            };
            if z.length() >= x.length() {
                return Err(Error::Internal(format!(
                    "KL recursion produced a term of length {} above h_x",
                    z.length()
                )));
            }
            // Bar-invariant part carried by the non-positive exponents.
            let low = c.filter_exponents(|e| e <= 0);
            let strictly_neg = c.filter_exponents(|e| e < 0);
            let q = &low + &strictly_neg.bar();
            let bz = self.kl_basis(&z)?;
            h.add_scaled(&bz, &-q);
        }
        Ok(h)
    }

    /// `(h_{x,y}, p_{x,y}, mu(x,y))`.
    pub fn kl_poly(&self, x: &GroupElement, y: &GroupElement) -> Result<KlPoly<C>> {
        let h = self.kl_basis(y)?.coeff(x);
        let gap = y.length() as i32 - x.length() as i32;
        let mut p_terms = Vec::new();
        for (e, c) in h.terms() {
            let twice_k = gap - e;
            if twice_k < 0 || twice_k % 2 != 0 {
                return Err(Error::Internal(format!(
                    "KL polynomial has exponent {e} incompatible with length gap {gap}"
                )));
            }
            p_terms.push((twice_k / 2, c.clone()));
        }
        let mu = h.coeff(1);
        Ok(KlPoly {
            h,
            p: Laurent::from_terms(p_terms),
            mu,
        })
    }

    /// Expresses `h` in the KL basis: returns `m` with `h = sum_z m_z b_z`.
    pub fn to_kl_basis(&self, h: &HeckeElement<C>) -> Result<HeckeElement<C>> {
        let mut rest = h.clone();
        let mut out = HeckeElement::zero();
        while let Some((z, c)) = rest.top().map(|(z, c)| (z.clone(), c.clone())) {
            let bz = self.kl_basis(&z)?;
            rest.add_scaled(&bz, &-c.clone());
            out.add_term(z, c);
        }
        Ok(out)
    }

    /// Snapshot of the KL memo table, sorted by element.
    pub fn kl_table(&self) -> Vec<(GroupElement, Arc<HeckeElement<C>>)> {
        let mut rows: Vec<_> = self
            .kl_memo
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        rows
    }

    /// Seeds the KL memo table (e.g. from a cache file).
    pub fn insert_kl(&self, x: GroupElement, b: HeckeElement<C>) {
        self.kl_memo.write().unwrap().insert(x, Arc::new(b));
    }

    pub fn clear_kl(&self) {
        self.kl_memo.write().unwrap().clear();
    }

    /// Text form: `word=poly` pairs joined by `"; "`, longest first, ties in
    /// lexicographic word order.
    pub fn format_element(&self, h: &HeckeElement<C>) -> String {
        if h.is_zero() {
            return "0".to_string();
        }
        let mut rows: Vec<(usize, Vec<Generator>, &Laurent<C>)> = h
            .iter()
            .map(|(x, c)| (x.length(), self.sys.lex_reduced_word(x), c))
            .collect();
        rows.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        rows.iter()
            .map(|(_, w, c)| format!("{}={}", crate::coxeter::format_word(w), c))
            .collect::<Vec<_>>()
            .join("; ")
    }

    pub fn parse_element(&self, s: &str) -> Result<HeckeElement<C>> {
        let s = s.trim();
        let mut h = HeckeElement::zero();
        if s == "0" || s.is_empty() {
            return Ok(h);
        }
        for part in s.split(';') {
            let (word, poly) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad Hecke term {part:?}")))?;
            let x = self.sys.parse_element(word)?;
            h.add_term(x, poly.parse()?);
        }
        Ok(h)
    }
}

impl<C: Coefficient> fmt::Debug for HeckeAlgebra<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeckeAlgebra")
            .field("system", &self.sys.label())
            .finish()
    }
}
