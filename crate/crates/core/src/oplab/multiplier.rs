//! Closed-form multipliers `f(x, y)`.
//!
//! A multiplier is kept as a finite sum of monomials
//!
//! ```text
//! c · exp(l_x x + l_y y) · Π_j (1 + λ_j exp(b_j · (x, y)))^(k_j / 4)
//! ```
//!
//! with complex `c`, complex exponent `l`, and real "bases" `1 + λ e^{b·z}`
//! (`λ > 0`) raised to quarter-integer powers. Sums are brought over common
//! base powers and like exponentials are merged, so an identity whose two
//! sides agree as closed forms cancels to the zero multiplier without any
//! sampling. When floating-point constants on the two sides differ in the
//! last bits the cancellation is incomplete and the leftover is measured by
//! evaluation.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultiplierError {
    #[error("square root or negative power of a multiplier that is not a single positive monomial or binomial: {0}")]
    NotFactorable(String),
    #[error("power {0} would leave the quarter-integer exponent lattice")]
    Exponent(String),
}

/// Total-order key of a float: bitwise, with `-0.0` identified with `0.0`.
fn fkey<F: Float>(x: F) -> (i8, i16, u64) {
    if x.is_zero() {
        (0, 0, 0)
    } else {
        let (m, e, s) = x.integer_decode();
        (s, e, m)
    }
}

type Key4 = [(i8, i16, u64); 4];
type Key3 = [(i8, i16, u64); 3];

/// `1 + λ exp(b_x x + b_y y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Base<F> {
    pub lambda: F,
    pub bx: F,
    pub by: F,
}

impl<F: Float> Base<F> {
    fn key(&self) -> Key3 {
        [fkey(self.lambda), fkey(self.bx), fkey(self.by)]
    }

    fn eval(&self, x: F, y: F) -> F {
        F::one() + self.lambda * (self.bx * x + self.by * y).exp()
    }

    fn shifted(&self, vx: F, vy: F) -> Self {
        Base {
            lambda: self.lambda * (-(self.bx * vx + self.by * vy)).exp(),
            ..*self
        }
    }
}

/// Exponent `l_x x + l_y y` with complex coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent<F> {
    pub lx: Complex<F>,
    pub ly: Complex<F>,
}

impl<F: Float> Exponent<F> {
    fn zero() -> Self {
        Self {
            lx: Complex::zero(),
            ly: Complex::zero(),
        }
    }

    fn key(&self) -> Key4 {
        [fkey(self.lx.re), fkey(self.lx.im), fkey(self.ly.re), fkey(self.ly.im)]
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            lx: self.lx + o.lx,
            ly: self.ly + o.ly,
        }
    }

    fn scale(&self, k: F) -> Self {
        Self {
            lx: self.lx * k,
            ly: self.ly * k,
        }
    }

    fn at(&self, x: F, y: F) -> Complex<F> {
        self.lx * x + self.ly * y
    }

    fn is_real(&self) -> bool {
        self.lx.im.is_zero() && self.ly.im.is_zero()
    }
}

/// Exponential part and base powers of a monomial; base powers in
/// quarters, sorted by base key, zero powers removed.
#[derive(Clone, Debug, PartialEq)]
struct Mono<F> {
    exp: Exponent<F>,
    bases: Vec<(Base<F>, i32)>,
}

type MonoKey = (Key4, Vec<(Key3, i32)>);

impl<F: Float> Mono<F> {
    fn key(&self) -> MonoKey {
        (
            self.exp.key(),
            self.bases.iter().map(|(b, k)| (b.key(), *k)).collect(),
        )
    }

    fn mul(&self, o: &Self) -> Self {
        let mut bases: BTreeMap<Key3, (Base<F>, i32)> = BTreeMap::new();
        for (b, k) in self.bases.iter().chain(&o.bases) {
            bases.entry(b.key()).or_insert((*b, 0)).1 += k;
        }
        Mono {
            exp: self.exp.add(&o.exp),
            bases: bases.into_values().filter(|(_, k)| *k != 0).collect(),
        }
    }
}

/// A closed-form multiplier in canonical sum-of-monomials form.
#[derive(Clone, PartialEq)]
pub struct Multiplier<F> {
    terms: Vec<(Mono<F>, Complex<F>)>,
}

impl<F: Float> fmt::Debug for Multiplier<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let r = |v: F| v.to_f64().unwrap_or(f64::NAN);
            let c2 = |v: Complex<F>| (r(v.re), r(v.im));
            write!(f, "{:?} exp({:?} x + {:?} y)", c2(*c), c2(m.exp.lx), c2(m.exp.ly))?;
            for (b, k) in &m.bases {
                write!(f, " (1 + {:?} exp({:?} x + {:?} y))^({}/4)", r(b.lambda), r(b.bx), r(b.by), k)?;
            }
        }
        Ok(())
    }
}

fn binomial<F: Float + FromPrimitive>(n: u32, k: u32) -> F {
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * u64::from(n - i) / u64::from(i + 1);
    }
    F::from_u64(acc).expect("small binomial")
}

impl<F: Float + FromPrimitive> Multiplier<F> {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn constant(c: Complex<F>) -> Self {
        Self::from_terms(vec![(
            Mono {
                exp: Exponent::zero(),
                bases: Vec::new(),
            },
            c,
        )])
    }

    pub fn real(c: F) -> Self {
        Self::constant(Complex::new(c, F::zero()))
    }

    pub fn one() -> Self {
        Self::real(F::one())
    }

    /// `exp(l_x x + l_y y)`.
    pub fn exp(lx: Complex<F>, ly: Complex<F>) -> Self {
        Self::from_terms(vec![(
            Mono {
                exp: Exponent { lx, ly },
                bases: Vec::new(),
            },
            Complex::new(F::one(), F::zero()),
        )])
    }

    /// `exp(a x + b y)` with real coefficients.
    pub fn exp_real(a: F, b: F) -> Self {
        Self::exp(Complex::new(a, F::zero()), Complex::new(b, F::zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Merges like terms after lifting every term to common base powers.
    fn from_terms(raw: Vec<(Mono<F>, Complex<F>)>) -> Self {
        // Group by the fractional part of each base power; within a group
        // bring all terms to the minimal power of every base and expand the
        // remaining non-negative integer powers.
        type Signature = Vec<(Key3, i32)>;
        type Terms<F> = Vec<(Mono<F>, Complex<F>)>;
        let mut groups: BTreeMap<Signature, Terms<F>> = BTreeMap::new();
        for (m, c) in raw {
            if c.is_zero() {
                continue;
            }
            let sig: Signature = m
                .bases
                .iter()
                .map(|(b, k)| (b.key(), k.rem_euclid(4)))
                .filter(|(_, r)| *r != 0)
                .collect();
            groups.entry(sig).or_default().push((m, c));
        }
        let mut out: BTreeMap<MonoKey, (Mono<F>, Complex<F>)> = BTreeMap::new();
        for (_, terms) in groups {
            let mut all_bases: BTreeMap<Key3, (Base<F>, i32)> = BTreeMap::new();
            for (m, _) in &terms {
                for (b, _) in &m.bases {
                    all_bases.entry(b.key()).or_insert((*b, 0));
                }
            }
            for (key, (_, min)) in all_bases.iter_mut() {
                *min = terms
                    .iter()
                    .map(|(m, _)| {
                        m.bases
                            .iter()
                            .find(|(b, _)| b.key() == *key)
                            .map_or(0, |(_, k)| *k)
                    })
                    .min()
                    .unwrap_or(0);
            }
            let common: Vec<(Base<F>, i32)> = all_bases
                .values()
                .copied()
                .filter(|(_, k)| *k != 0)
                .collect();
            let mut poly: BTreeMap<Key4, (Exponent<F>, Complex<F>)> = BTreeMap::new();
            for (m, c) in terms {
                let mut expanded = vec![(m.exp, c)];
                for (key, (base, min)) in &all_bases {
                    let k = m
                        .bases
                        .iter()
                        .find(|(b, _)| b.key() == *key)
                        .map_or(0, |(_, k)| *k);
                    let lift = (k - min) / 4;
                    if lift == 0 {
                        continue;
                    }
                    let step = Exponent {
                        lx: Complex::new(base.bx, F::zero()),
                        ly: Complex::new(base.by, F::zero()),
                    };
                    let mut next = Vec::new();
                    for (e, cc) in expanded {
                        for j in 0..=lift as u32 {
                            let coeff = binomial::<F>(lift as u32, j) * base.lambda.powi(j as i32);
                            let exp = e.add(&step.scale(F::from_u32(j).expect("small")));
                            next.push((exp, cc * coeff));
                        }
                    }
                    expanded = next;
                }
                for (e, cc) in expanded {
                    let entry = poly.entry(e.key()).or_insert((e, Complex::zero()));
                    entry.1 = entry.1 + cc;
                }
            }
            for (_, (e, c)) in poly {
                if c.is_zero() {
                    continue;
                }
                let m = Mono {
                    exp: e,
                    bases: common.clone(),
                };
                let entry = out.entry(m.key()).or_insert((m, Complex::zero()));
                entry.1 = entry.1 + c;
            }
        }
        Self {
            terms: out.into_values().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&o.terms).cloned().collect())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -*c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut raw = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                raw.push((ma.mul(mb), *ca * *cb));
            }
        }
        Self::from_terms(raw)
    }

    pub fn scale(&self, k: Complex<F>) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), *c * k)).collect())
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| {
                    (
                        Mono {
                            exp: Exponent {
                                lx: m.exp.lx.conj(),
                                ly: m.exp.ly.conj(),
                            },
                            bases: m.bases.clone(),
                        },
                        c.conj(),
                    )
                })
                .collect(),
        )
    }

    /// `(x, y) ↦ f(x - vx, y - vy)`.
    pub fn shift(&self, vx: F, vy: F) -> Self {
        let v = Complex::new;
        Self::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let phase = (-(m.exp.lx * v(vx, F::zero()) + m.exp.ly * v(vy, F::zero()))).exp();
                    let bases = m.bases.iter().map(|(b, k)| (b.shifted(vx, vy), *k)).collect();
                    (
                        Mono {
                            exp: m.exp,
                            bases,
                        },
                        *c * phase,
                    )
                })
                .collect(),
        )
    }

    /// `f^(k/4)` for a multiplier that is one monomial with positive
    /// coefficient, or one positive binomial `c0 e^{l0} + c1 e^{l1}` times
    /// common base powers. Integer `k/4 >= 0` is always allowed.
    pub fn pow_quarter(&self, k: i32) -> Result<Self, MultiplierError> {
        if k >= 0 && k % 4 == 0 {
            let mut out = Self::one();
            for _ in 0..k / 4 {
                out = out.mul(self);
            }
            return Ok(out);
        }
        let describe = || format!("{self:?}");
        let bases = match self.terms.first() {
            Some((m, _)) => m.bases.clone(),
            None => return Err(MultiplierError::NotFactorable(describe())),
        };
        if self.terms.iter().any(|(m, _)| m.bases != bases) {
            return Err(MultiplierError::NotFactorable(describe()));
        }
        let r = F::from_i32(k).expect("small") / F::from_i32(4).expect("small");
        let positive = |c: &Complex<F>| c.im.is_zero() && c.re > F::zero();
        let mut new_bases: BTreeMap<Key3, (Base<F>, i32)> = BTreeMap::new();
        for (b, e) in &bases {
            let prod = e * k;
            if prod % 4 != 0 {
                return Err(MultiplierError::Exponent(describe()));
            }
            new_bases.insert(b.key(), (*b, prod / 4));
        }
        let (lead_exp, lead_c) = match self.terms.as_slice() {
            [(m, c)] => {
                if k % 4 != 0 && !positive(c) {
                    return Err(MultiplierError::NotFactorable(describe()));
                }
                (m.exp, *c)
            }
            [(m0, c0), (m1, c1)] => {
                if !(positive(c0) && positive(c1) && m0.exp.is_real() && m1.exp.is_real()) {
                    return Err(MultiplierError::NotFactorable(describe()));
                }
                // Factor out the term with the smaller exponent so the new
                // base grows in the positive direction.
                let small_first = (m0.exp.lx.re, m0.exp.ly.re) <= (m1.exp.lx.re, m1.exp.ly.re);
                let ((ma, ca), (mb, cb)) = if small_first {
                    ((m0, c0), (m1, c1))
                } else {
                    ((m1, c1), (m0, c0))
                };
                let base = Base {
                    lambda: cb.re / ca.re,
                    bx: mb.exp.lx.re - ma.exp.lx.re,
                    by: mb.exp.ly.re - ma.exp.ly.re,
                };
                let entry = new_bases.entry(base.key()).or_insert((base, 0));
                entry.1 += k;
                (ma.exp, *ca)
            }
            _ => return Err(MultiplierError::NotFactorable(describe())),
        };
        let coeff = if positive(&lead_c) {
            Complex::new(lead_c.re.powf(r), F::zero())
        } else {
            lead_c.powf(r)
        };
        let mono = Mono {
            exp: lead_exp.scale(r),
            bases: new_bases.into_values().filter(|(_, e)| *e != 0).collect(),
        };
        Ok(Self::from_terms(vec![(mono, coeff)]))
    }

    pub fn sqrt(&self) -> Result<Self, MultiplierError> {
        self.pow_quarter(2)
    }

    pub fn recip(&self) -> Result<Self, MultiplierError> {
        self.pow_quarter(-4)
    }

    pub fn div(&self, o: &Self) -> Result<Self, MultiplierError> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn eval(&self, x: F, y: F) -> Complex<F> {
        let mut acc = Complex::zero();
        for (m, c) in &self.terms {
            let mut v = *c * m.exp.at(x, y).exp();
            for (b, k) in &m.bases {
                let base = b.eval(x, y);
                let p = match *k {
                    -4 => base.recip(),
                    -2 => base.sqrt().recip(),
                    2 => base.sqrt(),
                    4 => base,
                    _ => base.powf(F::from_i32(*k).expect("small") / F::from_i32(4).expect("small")),
                };
                v = v * p;
            }
            acc = acc + v;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Multiplier<f64>;

    #[test]
    fn one_minus_ztransform_modulus_cancels_structurally() {
        let s = 0.7;
        let f2 = M::exp_real(2.0, 0.0);
        let base = M::one().add(&f2.scale(Complex::new(s * s, 0.0)));
        let z2 = f2.scale(Complex::new(s * s, 0.0)).mul(&base.recip().unwrap());
        let defect = M::one().sub(&z2);
        assert_eq!(defect, base.recip().unwrap());
        assert_eq!(defect.sqrt().unwrap().mul(&defect.sqrt().unwrap()), defect);
    }

    #[test]
    fn shift_and_conjugate() {
        let f = M::exp(Complex::new(0.0, 1.0), Complex::zero());
        assert_eq!(f.conj(), M::exp(Complex::new(0.0, -1.0), Complex::zero()));
        let g = M::exp_real(1.0, 0.0).shift(0.0, 3.0);
        assert_eq!(g, M::exp_real(1.0, 0.0));
        let h = M::exp_real(1.0, 0.0).shift(2.0, 0.0);
        assert!((h.eval(0.5, 0.0).re - (-1.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn product_over_common_denominator() {
        let a = M::one().add(&M::exp_real(2.0, 0.0));
        let b = M::one().add(&M::exp_real(0.0, 2.0));
        let ga = M::exp_real(2.0, 0.0).mul(&a.recip().unwrap());
        let gb = M::exp_real(0.0, 2.0).mul(&b.recip().unwrap());
        let lhs = M::one().sub(&ga).mul(&M::one().sub(&gb)).add(&ga.mul(&gb));
        let rhs = M::one()
            .add(&M::exp_real(2.0, 2.0))
            .mul(&a.recip().unwrap())
            .mul(&b.recip().unwrap());
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn sqrt_requires_positive_factorable_input() {
        let m = M::one().add(&M::exp_real(1.0, 0.0)).add(&M::exp_real(0.0, 1.0));
        assert!(m.sqrt().is_err());
        assert!(M::real(-1.0).sqrt().is_err());
        assert!(M::real(4.0).sqrt().unwrap() == M::real(2.0));
    }

    #[test]
    fn evaluation_matches_closed_form() {
        let s = 1.3;
        let base = M::one().add(&M::exp_real(2.0, 0.0).scale(Complex::new(s * s, 0.0)));
        let z = M::exp_real(1.0, 0.0).scale(Complex::new(s, 0.0)).mul(&base.sqrt().unwrap().recip().unwrap());
        let x = 0.4f64;
        let expected = s * x.exp() / (1.0 + s * s * (2.0 * x).exp()).sqrt();
        assert!((z.eval(x, -1.0).re - expected).abs() < 1e-15);
    }
}
