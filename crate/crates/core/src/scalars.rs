//! Exact coefficient arithmetic.
//!
//! Coefficients of the symbolic engine are Laurent polynomials in a formal
//! positive unit `q = e^{2s}` with Gaussian-rational coefficients. Every
//! deformation constant that shows up in the relations (`t = q^-4`,
//! `e^{±2s} = q^{±1}`, factors of `i`) lives in this ring, so all symbolic
//! checks are exact.
//!
//! The ring structure is expressed through [`StarRing`] / [`Coefficient`] so
//! that the noncommutative layer can be instantiated over any exact
//! coefficient type (plain Gaussian rationals, or the Laurent ring [`Scalar`]).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact complex rational `re + i·im`.
pub type GaussianRational = Complex<BigRational>;

/// Laurent polynomial in `q` over Gaussian rationals.
pub type Scalar = Laurent<GaussianRational>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalarError {
    #[error("evaluation of q^{exponent} at s = {s} overflows double precision")]
    Overflow { exponent: i64, s: f64 },
    #[error("non-finite deformation parameter s = {0}")]
    NonFinite(f64),
}

/// A commutative ring with an involutive automorphism.
pub trait StarRing:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn star(&self) -> Self;
}

/// Coefficient ring for noncommutative polynomials.
pub trait Coefficient: StarRing {
    /// Multiplicative inverse when `self` is a unit of the ring.
    fn unit_inverse(&self) -> Option<Self>;
}

/// Rendering hints used when a coefficient is printed in front of a word.
pub trait CoeffRender: Coefficient + fmt::Display {
    /// Needs parentheses when juxtaposed with a word.
    fn is_compound(&self) -> bool;
    /// Printed with a leading minus sign (so sums can use ` - `).
    fn is_negative(&self) -> bool;
}

impl StarRing for BigRational {
    fn star(&self) -> Self {
        self.clone()
    }
}

impl Coefficient for BigRational {
    fn unit_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl<T> StarRing for Complex<T>
where
    T: Clone + PartialEq + fmt::Debug + num_traits::Num + Neg<Output = T>,
{
    fn star(&self) -> Self {
        self.conj()
    }
}

impl<T> Coefficient for Complex<T>
where
    T: Clone + PartialEq + fmt::Debug + num_traits::Num + Neg<Output = T>,
{
    fn unit_inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.inv())
    }
}

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact Gaussian rational `re + i·im`.
pub fn gaussian(re: BigRational, im: BigRational) -> GaussianRational {
    Complex::new(re, im)
}

/// The imaginary unit as a Gaussian rational.
pub fn imaginary_unit() -> GaussianRational {
    Complex::new(BigRational::zero(), BigRational::one())
}

/// Finite sum `Σ c_k q^k` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent<C> {
    terms: BTreeMap<i64, C>,
}

impl<C: Coefficient> Laurent<C> {
    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: C, exponent: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        Self { terms }
    }

    /// `q^k`.
    pub fn q_pow(exponent: i64) -> Self {
        Self::monomial(C::one(), exponent)
    }

    /// The deformation constant `t = q^-4` (i.e. `t = e^{-8s}`).
    pub fn t() -> Self {
        Self::q_pow(-4)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c);
        }
        out
    }

    pub fn add_term(&mut self, exponent: i64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exponent) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(exponent, sum);
                }
            }
            None => {
                self.terms.insert(exponent, c);
            }
        }
    }

    pub fn coeff(&self, exponent: i64) -> C {
        self.terms.get(&exponent).cloned().unwrap_or_else(C::zero)
    }

    /// Iterates `(k, c_k)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Single nonzero term `c q^k`, if `self` is one.
    pub fn as_monomial(&self) -> Option<(i64, &C)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, c)| (*k, c))
        } else {
            None
        }
    }

    /// Specialization `q ↦ 1`: the sum of all coefficients, as a constant.
    pub fn at_unit(&self) -> Self {
        let mut total = C::zero();
        for c in self.terms.values() {
            total = total + c.clone();
        }
        Self::constant(total)
    }

    /// Scales every exponent by `factor` (substitution `q ↦ q^factor`).
    pub fn substitute_power(&self, factor: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, c)| (k * factor, c.clone())))
    }
}

impl<C: Coefficient> Zero for Laurent<C> {
    fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coefficient> One for Laurent<C> {
    fn one() -> Self {
        Self::constant(C::one())
    }
}

impl<C: Coefficient> Add for Laurent<C> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl<C: Coefficient> Add<&Laurent<C>> for &Laurent<C> {
    type Output = Laurent<C>;

    fn add(self, rhs: &Laurent<C>) -> Laurent<C> {
        self.clone() + rhs.clone()
    }
}

impl<C: Coefficient> AddAssign for Laurent<C> {
    fn add_assign(&mut self, rhs: Self) {
        for (k, c) in rhs.terms {
            self.add_term(k, c);
        }
    }
}

impl<C: Coefficient> Neg for Laurent<C> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl<C: Coefficient> Sub for Laurent<C> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coefficient> Sub<&Laurent<C>> for &Laurent<C> {
    type Output = Laurent<C>;

    fn sub(self, rhs: &Laurent<C>) -> Laurent<C> {
        self.clone() - rhs.clone()
    }
}

impl<C: Coefficient> Mul<&Laurent<C>> for &Laurent<C> {
    type Output = Laurent<C>;

    fn mul(self, rhs: &Laurent<C>) -> Laurent<C> {
        let mut out = Laurent::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(ka + kb, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coefficient> Mul for Laurent<C> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl<C: Coefficient> StarRing for Laurent<C> {
    /// Coefficient-wise conjugation; `q` is real and therefore fixed.
    fn star(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (*k, c.star())).collect(),
        }
    }
}

impl<C: Coefficient> Coefficient for Laurent<C> {
    /// Only monomials `c q^k` with `c` a unit are invertible.
    fn unit_inverse(&self) -> Option<Self> {
        let (k, c) = self.as_monomial()?;
        Some(Self::monomial(c.unit_inverse()?, -k))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::constant(gaussian(BigRational::from_integer(n.into()), BigRational::zero()))
    }
}

impl From<GaussianRational> for Scalar {
    fn from(c: GaussianRational) -> Self {
        Scalar::constant(c)
    }
}

impl Scalar {
    /// `Σ c_k e^{2sk}` in floating point.
    ///
    /// Overflow of any exponential (or of the accumulated sum) is reported
    /// instead of saturating to infinity.
    pub fn eval<F: Float + FromPrimitive>(&self, s: F) -> Result<Complex<F>, ScalarError> {
        let s64 = s.to_f64().unwrap_or(f64::NAN);
        if !s.is_finite() {
            return Err(ScalarError::NonFinite(s64));
        }
        let two = F::one() + F::one();
        let mut total = Complex::new(F::zero(), F::zero());
        for (&k, c) in &self.terms {
            let scale = (two * s * F::from_i64(k).unwrap()).exp();
            let re = F::from_f64(c.re.to_f64().unwrap_or(f64::NAN)).unwrap();
            let im = F::from_f64(c.im.to_f64().unwrap_or(f64::NAN)).unwrap();
            let term = Complex::new(re * scale, im * scale);
            if !scale.is_finite() || !term.re.is_finite() || !term.im.is_finite() {
                return Err(ScalarError::Overflow { exponent: k, s: s64 });
            }
            total = total + term;
        }
        if !total.re.is_finite() || !total.im.is_finite() {
            let exponent = self.terms.keys().map(|k| k.abs()).max().unwrap_or(0);
            return Err(ScalarError::Overflow { exponent, s: s64 });
        }
        Ok(total)
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Renders a Gaussian rational in the DSL coefficient syntax.
pub struct DisplayGaussian<'a>(pub &'a GaussianRational);

impl fmt::Display for DisplayGaussian<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        match (c.re.is_zero(), c.im.is_zero()) {
            (_, true) => fmt_rational(&c.re, f),
            (true, false) => {
                if c.im.is_one() {
                    write!(f, "i")
                } else if (-c.im.clone()).is_one() {
                    write!(f, "-i")
                } else {
                    fmt_rational(&c.im, f)?;
                    write!(f, " i")
                }
            }
            (false, false) => {
                write!(f, "(")?;
                fmt_rational(&c.re, f)?;
                if Signed::is_negative(&c.im) {
                    write!(f, " - ")?;
                    let abs = c.im.abs();
                    if !abs.is_one() {
                        fmt_rational(&abs, f)?;
                        write!(f, " ")?;
                    }
                } else {
                    write!(f, " + ")?;
                    if !c.im.is_one() {
                        fmt_rational(&c.im, f)?;
                        write!(f, " ")?;
                    }
                }
                write!(f, "i)")
            }
        }
    }
}

fn fmt_q_power(k: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match k {
        1 => write!(f, "q"),
        _ => write!(f, "q^{k}"),
    }
}

/// Writes `c q^k` without a leading sign decision (the caller handles `+`).
fn fmt_scalar_term(k: i64, c: &GaussianRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if k == 0 {
        return write!(f, "{}", DisplayGaussian(c));
    }
    if c.is_one() {
        return fmt_q_power(k, f);
    }
    if (-c.clone()).is_one() {
        write!(f, "-")?;
        return fmt_q_power(k, f);
    }
    write!(f, "{} ", DisplayGaussian(c))?;
    fmt_q_power(k, f)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            fmt_scalar_term(*k, c, f)?;
        }
        Ok(())
    }
}

impl<C: fmt::Debug> fmt::Debug for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl CoeffRender for Scalar {
    fn is_compound(&self) -> bool {
        self.num_terms() > 1
    }

    fn is_negative(&self) -> bool {
        self.is_negative_real_monomial()
    }
}

impl CoeffRender for BigRational {
    fn is_compound(&self) -> bool {
        false
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Scalar {
    /// True when the scalar is a single real rational coefficient times `q^k`.
    pub fn is_real_monomial(&self) -> bool {
        self.as_monomial().is_some_and(|(_, c)| c.im.is_zero())
    }

    /// Negative real monomial, used by renderers to emit ` - ` separators.
    pub fn is_negative_real_monomial(&self) -> bool {
        self.as_monomial()
            .is_some_and(|(_, c)| c.im.is_zero() && Signed::is_negative(&c.re))
    }
}
