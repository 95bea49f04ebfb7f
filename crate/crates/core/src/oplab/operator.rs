//! Finite sums of shift-multiplier atoms `M_f T_v` acting on functions of
//! `(x, y)` by `(M_f T_v φ)(x, y) = f(x, y) φ(x - v_x, y - v_y)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::multiplier::{Multiplier, MultiplierError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("z-transform needs a diagonal modulus, but A*A has {0} shift atoms")]
    NonDiagonalModulus(usize),
    #[error(transparent)]
    Multiplier(#[from] MultiplierError),
}

type ShiftKey = [(i8, i16, u64); 2];

fn shift_key<F: Float>(vx: F, vy: F) -> ShiftKey {
    let k = |x: F| {
        if x.is_zero() {
            (0, 0, 0)
        } else {
            let (m, e, s) = x.integer_decode();
            (s, e, m)
        }
    };
    [k(vx), k(vy)]
}

/// One atom `M_f T_(vx, vy)`.
#[derive(Clone, PartialEq)]
pub struct Atom<F> {
    pub vx: F,
    pub vy: F,
    pub multiplier: Multiplier<F>,
}

/// A finite sum of atoms, grouped by shift and free of zero multipliers.
#[derive(Clone, PartialEq)]
pub struct ShiftMultiplierOperator<F> {
    atoms: BTreeMap<ShiftKey, Atom<F>>,
}

impl<F: Float> fmt::Debug for Atom<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |v: F| v.to_f64().unwrap_or(f64::NAN);
        write!(f, "M[{:?}] T({}, {})", self.multiplier, r(self.vx), r(self.vy))
    }
}

impl<F: Float> fmt::Debug for ShiftMultiplierOperator<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.atoms.values()).finish()
    }
}

impl<F: Float + FromPrimitive> ShiftMultiplierOperator<F> {
    pub fn zero() -> Self {
        Self {
            atoms: BTreeMap::new(),
        }
    }

    pub fn atom(multiplier: Multiplier<F>, vx: F, vy: F) -> Self {
        let mut op = Self::zero();
        op.push(Atom { vx, vy, multiplier });
        op
    }

    pub fn multiplication(multiplier: Multiplier<F>) -> Self {
        Self::atom(multiplier, F::zero(), F::zero())
    }

    pub fn translation(vx: F, vy: F) -> Self {
        Self::atom(Multiplier::one(), vx, vy)
    }

    pub fn identity() -> Self {
        Self::multiplication(Multiplier::one())
    }

    fn push(&mut self, atom: Atom<F>) {
        let key = shift_key(atom.vx, atom.vy);
        let merged = match self.atoms.remove(&key) {
            Some(old) => Atom {
                multiplier: old.multiplier.add(&atom.multiplier),
                ..old
            },
            None => atom,
        };
        if !merged.multiplier.is_zero() {
            self.atoms.insert(key, merged);
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom<F>> {
        self.atoms.values()
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// The multiplier at shift `(vx, vy)`, if that bucket is present.
    pub fn multiplier_at(&self, vx: F, vy: F) -> Option<&Multiplier<F>> {
        self.atoms.get(&shift_key(vx, vy)).map(|a| &a.multiplier)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for a in other.atoms.values() {
            out.push(a.clone());
        }
        out
    }

    pub fn scale(&self, k: Complex<F>) -> Self {
        let mut out = Self::zero();
        for a in self.atoms.values() {
            out.push(Atom {
                multiplier: a.multiplier.scale(k),
                ..a.clone()
            });
        }
        out
    }

    pub fn scale_real(&self, k: F) -> Self {
        self.scale(Complex::new(k, F::zero()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_real(-F::one()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for a in self.atoms.values() {
            for b in other.atoms.values() {
                out.push(Atom {
                    vx: a.vx + b.vx,
                    vy: a.vy + b.vy,
                    multiplier: a.multiplier.mul(&b.multiplier.shift(a.vx, a.vy)),
                });
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for a in self.atoms.values() {
            out.push(Atom {
                vx: -a.vx,
                vy: -a.vy,
                multiplier: a.multiplier.conj().shift(-a.vx, -a.vy),
            });
        }
        out
    }

    /// `f(A)` for a diagonal operator `A = M_g`: applies `pow_quarter` to `g`.
    fn diagonal_power(&self, quarters: i32) -> Result<Self, OperatorError> {
        match self.atoms.len() {
            0 => Ok(Self::zero()),
            1 => {
                let a = self.atoms.values().next().expect("one atom");
                if !(a.vx.is_zero() && a.vy.is_zero()) {
                    return Err(OperatorError::NonDiagonalModulus(1));
                }
                Ok(Self::multiplication(a.multiplier.pow_quarter(quarters)?))
            }
            n => Err(OperatorError::NonDiagonalModulus(n)),
        }
    }

    /// Square root of a diagonal positive operator.
    pub fn sqrt_diagonal(&self) -> Result<Self, OperatorError> {
        self.diagonal_power(2)
    }

    /// `z_s(A) = s A (1 + s² A*A)^(-1/2)`.
    pub fn z_transform(&self, s: F) -> Result<Self, OperatorError> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let modulus = self.adjoint().compose(self);
        let n = modulus.num_atoms();
        if n != 1 || modulus.multiplier_at(F::zero(), F::zero()).is_none() {
            return Err(OperatorError::NonDiagonalModulus(n));
        }
        let inner = Self::identity().add(&modulus.scale_real(s * s));
        Ok(self.scale_real(s).compose(&inner.diagonal_power(-2)?))
    }

    /// `(Aφ)(x, y)` for a closed-form `φ`.
    pub fn apply_at<G: Fn(F, F) -> Complex<F>>(&self, phi: &G, x: F, y: F) -> Complex<F> {
        self.atoms
            .values()
            .fold(Complex::new(F::zero(), F::zero()), |acc, a| {
                acc + a.multiplier.eval(x, y) * phi(x - a.vx, y - a.vy)
            })
    }
}

/// Seeded uniform points in the square `[-half_width, half_width]²`.
pub fn sample_box<F: Float + FromPrimitive>(samples: usize, seed: u64, half_width: F) -> Vec<(F, F)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = half_width.to_f64().expect("finite width");
    (0..samples)
        .map(|_| {
            let x = rng.gen_range(-h..=h);
            let y = rng.gen_range(-h..=h);
            (F::from_f64(x).expect("finite"), F::from_f64(y).expect("finite"))
        })
        .collect()
}

/// Largest pointwise deviation between two operators.
///
/// Both sides are subtracted atom by atom; if every bucket cancels in closed
/// form the result is exactly zero. Otherwise each remaining bucket is
/// evaluated at the sample points, so a bucket present on one side only
/// contributes the magnitude of its multiplier.
pub fn op_equal<F: Float + FromPrimitive>(
    a: &ShiftMultiplierOperator<F>,
    b: &ShiftMultiplierOperator<F>,
    points: &[(F, F)],
) -> F {
    let diff = a.sub(b);
    let mut worst = F::zero();
    for atom in diff.atoms() {
        for &(x, y) in points {
            let v = atom.multiplier.eval(x, y).norm();
            if v.is_nan() || v > worst {
                worst = if v.is_nan() { F::infinity() } else { v };
            }
        }
    }
    worst
}
