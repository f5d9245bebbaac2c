//! Laurent polynomials in `v` with exact coefficients.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::scalar::Coefficient;
use crate::{Error, Result};

/// `sum_i coeffs[i] v^(low + i)`, stored densely over the window between the
/// lowest and highest nonzero exponent. The zero polynomial has no
/// coefficients and `low == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent<C> {
    low: i32,
    coeffs: Vec<C>,
}

impl<C: Coefficient> Laurent<C> {
    pub fn zero() -> Self {
        Laurent {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    /// `c v^exp`.
    pub fn monomial(c: C, exp: i32) -> Self {
        Self::from_coeffs(exp, vec![c])
    }

    /// `v^exp`.
    pub fn v_pow(exp: i32) -> Self {
        Self::monomial(C::one(), exp)
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_coeffs(low: i32, coeffs: Vec<C>) -> Self {
        let mut p = Laurent { low, coeffs };
        p.normalize();
        p
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add.
    pub fn from_terms<I: IntoIterator<Item = (i32, C)>>(terms: I) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let (Some(lo), Some(hi)) = (
            terms.iter().map(|t| t.0).min(),
            terms.iter().map(|t| t.0).max(),
        ) else {
            return Self::zero();
        };
        let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            let slot = &mut coeffs[(e - lo) as usize];
            *slot = slot.clone() + c;
        }
        Self::from_coeffs(lo, coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low_exponent(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high_exponent(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    /// The raw coefficient window, lowest exponent first.
    pub fn coefficients(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `v^k`.
    pub fn coeff(&self, k: i32) -> C {
        let i = k as i64 - self.low as i64;
        if i < 0 || i >= self.coeffs.len() as i64 {
            C::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Nonzero terms as `(exponent, coefficient)`, increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &C)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i32, c))
    }

    /// `v -> v^-1`.
    pub fn bar(&self) -> Self {
        match self.high_exponent() {
            None => Self::zero(),
            Some(hi) => Laurent {
                low: -hi,
                coeffs: self.coeffs.iter().rev().cloned().collect(),
            },
        }
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Laurent {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_coeffs(self.low, self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter_exponents(&self, keep: impl Fn(i32) -> bool) -> Self {
        Self::from_terms(self.terms().filter(|(e, _)| keep(*e)).map(|(e, c)| (e, c.clone())))
    }

    /// In `Z_{>=0}[v]`: no negative exponents, no negative coefficients.
    pub fn is_nonneg_poly(&self) -> bool {
        self.low_exponent().is_none_or(|lo| lo >= 0) && self.has_nonneg_coeffs()
    }

    pub fn has_nonneg_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// In `vZ[v]`.
    pub fn in_v_poly(&self) -> bool {
        self.low_exponent().is_none_or(|lo| lo >= 1)
    }

    /// In `1 + vZ[v]`.
    pub fn in_one_plus_v_poly(&self) -> bool {
        (self.clone() - Self::one()).in_v_poly()
    }

    /// Invariant under [`Laurent::bar`].
    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Sum of coefficients, i.e. the value at `v = 1`.
    pub fn eval_one(&self) -> C {
        self.coeffs.iter().cloned().fold(C::zero(), |a, b| a + b)
    }

    /// Compact text form `low:c0,c1,...`; zero is `0`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let body: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{}:{}", self.low, body.join(","))
    }

    /// Human-readable form such as `v^-2 + 2 + v^2`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = mag.is_one();
            match (e, unit) {
                (0, _) => out.push_str(&mag.to_string()),
                (1, true) => out.push('v'),
                (1, false) => out.push_str(&format!("{mag}v")),
                (_, true) => out.push_str(&format!("v^{e}")),
                (_, false) => out.push_str(&format!("{mag}v^{e}")),
            }
        }
        out
    }
}

impl<C: Coefficient> fmt::Display for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<C: Coefficient> FromStr for Laurent<C> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let bad = || Error::Parse(format!("bad Laurent polynomial {s:?}"));
        let (low, body) = s.split_once(':').ok_or_else(bad)?;
        let low: i32 = low.trim().parse().map_err(|_| bad())?;
        let coeffs = body
            .split(',')
            .map(|t| C::from_str_radix(t.trim(), 10).map_err(|_| bad()))
            .collect::<Result<Vec<C>>>()?;
        Ok(Self::from_coeffs(low, coeffs))
    }
}

impl<C: Coefficient> Default for Laurent<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> From<C> for Laurent<C> {
    fn from(c: C) -> Self {
        Self::constant(c)
    }
}

fn combine<C: Coefficient>(a: &Laurent<C>, b: &Laurent<C>, negate_b: bool) -> Laurent<C> {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if negate_b { -b.clone() } else { b.clone() };
    }
    let lo = a.low.min(b.low);
    let hi = a.high_exponent().unwrap().max(b.high_exponent().unwrap());
    let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
    for (i, c) in a.coeffs.iter().enumerate() {
        coeffs[(a.low - lo) as usize + i] = c.clone();
    }
    for (i, c) in b.coeffs.iter().enumerate() {
        let slot = &mut coeffs[(b.low - lo) as usize + i];
        *slot = if negate_b {
            slot.clone() - c.clone()
        } else {
            slot.clone() + c.clone()
        };
    }
    Laurent::from_coeffs(lo, coeffs)
}

impl<C: Coefficient> Add<&Laurent<C>> for &Laurent<C> {
    type Output = Laurent<C>;
    fn add(self, rhs: &Laurent<C>) -> Laurent<C> {
        combine(self, rhs, false)
    }
}

impl<C: Coefficient> Sub<&Laurent<C>> for &Laurent<C> {
    type Output = Laurent<C>;
    fn sub(self, rhs: &Laurent<C>) -> Laurent<C> {
        combine(self, rhs, true)
    }
}

impl<C: Coefficient> Mul<&Laurent<C>> for &Laurent<C> {
    type Output = Laurent<C>;
    fn mul(self, rhs: &Laurent<C>) -> Laurent<C> {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Laurent::from_coeffs(self.low + rhs.low, coeffs)
    }
}

impl<C: Coefficient> Neg for Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        Laurent {
            low: self.low,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<C: Coefficient> Neg for &Laurent<C> {
    type Output = Laurent<C>;
    fn neg(self) -> Laurent<C> {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<C: Coefficient> $tr<Laurent<C>> for Laurent<C> {
            type Output = Laurent<C>;
            fn $method(self, rhs: Laurent<C>) -> Laurent<C> {
                (&self).$method(&rhs)
            }
        }
        impl<C: Coefficient> $tr<&Laurent<C>> for Laurent<C> {
            type Output = Laurent<C>;
            fn $method(self, rhs: &Laurent<C>) -> Laurent<C> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coefficient> AddAssign<&Laurent<C>> for Laurent<C> {
    fn add_assign(&mut self, rhs: &Laurent<C>) {
        *self = combine(self, rhs, false);
    }
}

impl<C: Coefficient> SubAssign<&Laurent<C>> for Laurent<C> {
    fn sub_assign(&mut self, rhs: &Laurent<C>) {
        *self = combine(self, rhs, true);
    }
}

impl<C: Coefficient> Zero for Laurent<C> {
    fn zero() -> Self {
        Laurent::zero()
    }
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
}

impl<C: Coefficient> One for Laurent<C> {
    fn one() -> Self {
        Laurent::one()
    }
}

impl<C: Coefficient> std::iter::Sum for Laurent<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Laurent::zero(), |a, b| a + b)
    }
}
