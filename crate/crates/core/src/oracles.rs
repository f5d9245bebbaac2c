//! Slow reference algorithms, independent of the production code paths.
//! Only used to cross-check results in tests.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::coxeter::{CoxeterSystem, GroupElement, Side};
use crate::hecke::HeckeElement;
use crate::laurent::Laurent;
use crate::{Error, Result};

type L = Laurent<BigInt>;

/// All elements obtained by deleting letters from the lexicographically
/// least reduced word of `y`, i.e. the Bruhat ideal below `y`.
pub fn subword_ideal(sys: &CoxeterSystem, y: &GroupElement) -> HashSet<GroupElement> {
    let word = sys.lex_reduced_word(y);
    let mut out = HashSet::new();
    for mask in 0u64..(1u64 << word.len()) {
        let mut w = sys.identity();
        for (i, &s) in word.iter().enumerate() {
            if mask >> i & 1 == 1 {
                w = sys.mul_gen(&w, s, Side::Right);
            }
        }
        out.insert(w);
    }
    out
}

/// Subword criterion for the Bruhat order.
pub fn subword_leq(sys: &CoxeterSystem, x: &GroupElement, y: &GroupElement) -> bool {
    subword_ideal(sys, y).contains(x)
}

/// Lengths of every word of length `<= max_len` reduced to canonical form,
/// grouped by length, computed by brute force over all words.
pub fn brute_force_length_profile(sys: &CoxeterSystem, max_len: usize) -> Vec<usize> {
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut frontier = vec![sys.identity()];
    seen.insert(sys.identity());
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for s in sys.generators() {
                let ws = sys.mul_gen(w, s, Side::Right);
                if seen.insert(ws.clone()) {
                    next.push(ws);
                }
            }
        }
        frontier = next;
    }
    let mut profile = vec![0; max_len + 1];
    for w in seen {
        if w.length() <= max_len {
            profile[w.length()] += 1;
        }
    }
    profile
}

/// Coefficients `r_{y,z}` of `bar(h_z) = sum_y r_{y,z} h_y`, from the
/// classical R-polynomial recursion.
struct RTable<'a> {
    sys: &'a CoxeterSystem,
    memo: HashMap<(GroupElement, GroupElement), L>,
}

impl RTable<'_> {
    fn get(&mut self, y: &GroupElement, z: &GroupElement) -> L {
        if z.is_identity() {
            return if y.is_identity() { L::one() } else { L::zero() };
        }
        if y.length() > z.length() {
            return L::zero();
        }
        let key = (y.clone(), z.clone());
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let s = self
            .sys
            .generators()
            .find(|&s| self.sys.is_descent(z, s, Side::Right))
            .expect("nonidentity element has a descent");
        let zs = self.sys.mul_gen(z, s, Side::Right);
        let ys = self.sys.mul_gen(y, s, Side::Right);
        let r = if ys.length() < y.length() {
            self.get(&ys, &zs)
        } else {
            let v_minus = L::from_terms([(1, BigInt::one()), (-1, -BigInt::one())]);
            self.get(&ys, &zs) + v_minus * self.get(y, &zs)
        };
        self.memo.insert(key, r.clone());
        r
    }
}

/// `b_x` obtained by solving the bar-invariance system
/// `h_{y,x} - bar(h_{y,x}) = sum_{y < z <= x} bar(h_{z,x}) r_{y,z}` top-down
/// over the Bruhat interval, keeping the part of positive degree.
pub fn kl_element_triangular(sys: &CoxeterSystem, x: &GroupElement) -> Result<HeckeElement<BigInt>> {
    let mut interval: Vec<GroupElement> = subword_ideal(sys, x).into_iter().collect();
    interval.sort();
    interval.reverse();
    let mut r = RTable {
        sys,
        memo: HashMap::new(),
    };
    let mut h: BTreeMap<GroupElement, L> = BTreeMap::new();
    for (i, y) in interval.iter().enumerate() {
        if y == x {
            h.insert(y.clone(), L::one());
            continue;
        }
        let mut rhs = L::zero();
        for z in &interval[..i] {
            if z.length() <= y.length() {
                continue;
            }
            let hz = &h[z];
            if hz.is_zero() {
                continue;
            }
            rhs = rhs + hz.bar() * r.get(y, z);
        }
        let positive = rhs.filter_exponents(|k| k > 0);
        if positive.clone() - positive.bar() != rhs {
            return Err(Error::Internal(format!(
                "bar-invariance system inconsistent at {}",
                sys.format_element(y)
            )));
        }
        h.insert(y.clone(), positive);
    }
    Ok(HeckeElement::from_terms(h))
}

/// Number of subsets of `defects` whose generating function is exactly `h`,
/// by enumerating all `2^n` subsets.
pub fn brute_force_subset_count(defects: &[i32], h: &L) -> u64 {
    let n = defects.len();
    assert!(n <= 24, "brute force limited to 24 subexpressions");
    let lo = defects.iter().copied().chain(h.low_exponent()).min().unwrap_or(0);
    let hi = defects.iter().copied().chain(h.high_exponent()).max().unwrap_or(0);
    let width = (hi - lo + 1) as usize;
    let mut target = vec![0i64; width];
    for (k, c) in h.terms() {
        match c.to_i64() {
            Some(c) => target[(k - lo) as usize] = c,
            None => return 0,
        }
    }
    let mut count = 0;
    let mut tally = vec![0i64; width];
    for mask in 0u32..(1u32 << n) {
        tally.iter_mut().for_each(|t| *t = 0);
        for (i, &d) in defects.iter().enumerate() {
            if mask >> i & 1 == 1 {
                tally[(d - lo) as usize] += 1;
            }
        }
        if tally == target {
            count += 1;
        }
    }
    count
}
