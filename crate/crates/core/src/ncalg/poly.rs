use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalars::Coefficient;

/// Index of a generator in its presentation's declared order.
pub type GenId = usize;

/// A finite sequence of generator indices. The empty word is the unit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<GenId>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: GenId) -> Self {
        Word(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[GenId] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Occurrences of `pattern` as a contiguous subword, by start position.
    pub fn find_all(&self, pattern: &[GenId]) -> Vec<usize> {
        if pattern.is_empty() || pattern.len() > self.len() {
            return Vec::new();
        }
        self.0
            .windows(pattern.len())
            .enumerate()
            .filter(|(_, w)| *w == pattern)
            .map(|(i, _)| i)
            .collect()
    }

    /// `self[..at] ++ insert ++ self[at + removed..]`.
    pub fn splice(&self, at: usize, removed: usize, insert: &[GenId]) -> Word {
        let mut v = Vec::with_capacity(self.len() - removed + insert.len());
        v.extend_from_slice(&self.0[..at]);
        v.extend_from_slice(insert);
        v.extend_from_slice(&self.0[at + removed..]);
        Word(v)
    }

    /// Renumbers letters through `f`.
    pub fn map(&self, f: impl Fn(GenId) -> GenId) -> Word {
        Word(self.0.iter().map(|&g| f(g)).collect())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<GenId>> for Word {
    fn from(v: Vec<GenId>) -> Self {
        Word(v)
    }
}

/// Finite linear combination of words with coefficients in `C`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NcPolynomial<C> {
    terms: BTreeMap<Word, C>,
}

impl<C: Coefficient> Default for NcPolynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> NcPolynomial<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::term(C::one(), Word::empty())
    }

    pub fn term(c: C, w: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn word(w: Word) -> Self {
        Self::term(C::one(), w)
    }

    pub fn letter(g: GenId) -> Self {
        Self::word(Word::letter(g))
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Word::empty())
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, C)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, x)| (w.clone(), c.clone() * x.clone())))
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> NcPolynomial<D> {
        NcPolynomial::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }

    pub fn map_words(&self, f: impl Fn(&Word) -> Word) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, c)| (f(w), c.clone())))
    }

    /// Largest number of letters over all terms; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }
}

impl<C: Coefficient> Add for NcPolynomial<C> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (w, c) in rhs.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl<C: Coefficient> Add<&NcPolynomial<C>> for &NcPolynomial<C> {
    type Output = NcPolynomial<C>;

    fn add(self, rhs: &NcPolynomial<C>) -> NcPolynomial<C> {
        self.clone() + rhs.clone()
    }
}

impl<C: Coefficient> Neg for NcPolynomial<C> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect(),
        }
    }
}

impl<C: Coefficient> Sub for NcPolynomial<C> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coefficient> Sub<&NcPolynomial<C>> for &NcPolynomial<C> {
    type Output = NcPolynomial<C>;

    fn sub(self, rhs: &NcPolynomial<C>) -> NcPolynomial<C> {
        self.clone() - rhs.clone()
    }
}

/// Free (unreduced) product: words concatenate.
impl<C: Coefficient> Mul<&NcPolynomial<C>> for &NcPolynomial<C> {
    type Output = NcPolynomial<C>;

    fn mul(self, rhs: &NcPolynomial<C>) -> NcPolynomial<C> {
        let mut out = NcPolynomial::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                out.add_term(wa.concat(wb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> Mul for NcPolynomial<C> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Coefficient> Zero for NcPolynomial<C> {
    fn zero() -> Self {
        NcPolynomial::zero()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coefficient> One for NcPolynomial<C> {
    fn one() -> Self {
        NcPolynomial::one()
    }
}

impl<C: fmt::Debug> fmt::Debug for NcPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}
