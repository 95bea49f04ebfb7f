//! The bicharacter 2-cocycle on `C` and the scalar identities built from it.
//!
//! With `B(z1, z2) = Im(z1 conj(z2))` (real bilinear, antisymmetric):
//!
//! * `psi(z1, z2) = exp(-i s B(z1, z2))`
//! * `psi_tilde(z1, z2) = conj(psi(-z1, -z2))`
//! * `psi_star(z1, z2) = conj(psi(z1, -z1 - z2))`
//! * `psi_sub(g, g') = psi(g', g)`, the one-variable family `Ψ_g`
//! * `omega(z) = exp(-i s/2 Im(z^2))`
//!
//! All functions are generic over the floating type. Identity checks draw
//! seeded samples uniformly from a disk and report the largest residual.

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Deformation parameter `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CocycleParams<F> {
    pub s: F,
}

impl<F: Float> CocycleParams<F> {
    pub fn new(s: F) -> Self {
        Self { s }
    }
}

fn bilinear<F: Float>(z1: Complex<F>, z2: Complex<F>) -> F {
    (z1 * z2.conj()).im
}

fn phase<F: Float>(theta: F) -> Complex<F> {
    Complex::new(theta.cos(), theta.sin())
}

pub fn psi<F: Float>(p: CocycleParams<F>, z1: Complex<F>, z2: Complex<F>) -> Complex<F> {
    phase(-p.s * bilinear(z1, z2))
}

pub fn psi_tilde<F: Float>(p: CocycleParams<F>, z1: Complex<F>, z2: Complex<F>) -> Complex<F> {
    psi(p, -z1, -z2).conj()
}

pub fn psi_star<F: Float>(p: CocycleParams<F>, z1: Complex<F>, z2: Complex<F>) -> Complex<F> {
    psi(p, z1, -z1 - z2).conj()
}

/// `Ψ_g(g') = Ψ(g', g)`.
pub fn psi_sub<F: Float>(p: CocycleParams<F>, g: Complex<F>, gp: Complex<F>) -> Complex<F> {
    psi(p, gp, g)
}

/// `Ψ̃_g(g') = Ψ̃(g', g)`.
pub fn psi_tilde_sub<F: Float>(p: CocycleParams<F>, g: Complex<F>, gp: Complex<F>) -> Complex<F> {
    psi_tilde(p, gp, g)
}

pub fn omega<F: Float>(p: CocycleParams<F>, z: Complex<F>) -> Complex<F> {
    let two = F::one() + F::one();
    phase(-p.s / two * (z * z).im)
}

/// Largest residual of a sampled identity, with the data needed to
/// reproduce it.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub identity: String,
    pub s: f64,
    pub samples: usize,
    pub seed: u64,
    pub radius: f64,
    pub max_residual: f64,
}

impl IdentityReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_residual < tol
    }
}

/// Sample points uniform in the disk of the given radius.
pub struct DiskSampler {
    rng: ChaCha8Rng,
    radius: f64,
}

impl DiskSampler {
    pub fn new(seed: u64, radius: f64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            radius,
        }
    }

    pub fn point<F: Float + FromPrimitive>(&mut self) -> Complex<F> {
        let r = self.radius * self.rng.gen::<f64>().sqrt();
        let theta = std::f64::consts::TAU * self.rng.gen::<f64>();
        Complex::new(
            F::from_f64(r * theta.cos()).expect("representable"),
            F::from_f64(r * theta.sin()).expect("representable"),
        )
    }
}

/// Default sampling radius for identity checks.
pub const DEFAULT_RADIUS: f64 = 2.0;

fn sampled<F, const N: usize>(
    identity: &str,
    p: CocycleParams<F>,
    samples: usize,
    seed: u64,
    radius: f64,
    mut residual: impl FnMut([Complex<F>; N]) -> F,
) -> IdentityReport
where
    F: Float + FromPrimitive,
{
    let mut sampler = DiskSampler::new(seed, radius);
    let mut worst = F::zero();
    for _ in 0..samples {
        let pts: [Complex<F>; N] = std::array::from_fn(|_| sampler.point());
        let r = residual(pts);
        if r > worst || r.is_nan() {
            worst = r;
        }
    }
    IdentityReport {
        identity: identity.to_string(),
        s: p.s.to_f64().unwrap_or(f64::NAN),
        samples,
        seed,
        radius,
        max_residual: worst.to_f64().unwrap_or(f64::NAN),
    }
}

/// `f(a,b) f(a+b,c) = f(b,c) f(a,b+c)` for `f = psi`.
pub fn check_cocycle_psi<F: Float + FromPrimitive>(
    p: CocycleParams<F>,
    samples: usize,
    seed: u64,
    radius: f64,
) -> IdentityReport {
    sampled("2-cocycle identity for psi", p, samples, seed, radius, |[a, b, c]| {
        (psi(p, a, b) * psi(p, a + b, c) - psi(p, b, c) * psi(p, a, b + c)).norm()
    })
}

/// `f(a,b) f(a+b,c) = f(b,c) f(a,b+c)` for `f = psi_tilde`.
pub fn check_cocycle_psi_tilde<F: Float + FromPrimitive>(
    p: CocycleParams<F>,
    samples: usize,
    seed: u64,
    radius: f64,
) -> IdentityReport {
    sampled("2-cocycle identity for psi_tilde", p, samples, seed, radius, |[a, b, c]| {
        (psi_tilde(p, a, b) * psi_tilde(p, a + b, c) - psi_tilde(p, b, c) * psi_tilde(p, a, b + c))
            .norm()
    })
}

/// Right-hand side of the shift identity for `psi_star` as printed:
/// `Ψ*(x,y) Ψ_u(x) Ψ̃_v(y) Ψ(-x-y,-v) conj Ψ(u,-x-y)`.
pub fn sumup_rhs<F: Float>(
    p: CocycleParams<F>,
    x: Complex<F>,
    y: Complex<F>,
    u: Complex<F>,
    v: Complex<F>,
) -> Complex<F> {
    psi_star(p, x, y)
        * psi_sub(p, u, x)
        * psi_tilde_sub(p, v, y)
        * psi(p, -x - y, -v)
        * psi(p, u, -x - y).conj()
}

/// `Ψ*(x+u, y+v) = Ψ*(x,y) Ψ_u(x) Ψ̃_v(y) Ψ(-x-y,-v) conj Ψ(u,-x-y)`,
/// exactly as stated. The two sides differ by the phase `Ψ*(u, v)`, so
/// this residual is nonzero for `s != 0`.
pub fn check_sumup_literal<F: Float + FromPrimitive>(
    p: CocycleParams<F>,
    samples: usize,
    seed: u64,
    radius: f64,
) -> IdentityReport {
    sampled("psi_star shift identity (as stated)", p, samples, seed, radius, |[x, y, u, v]| {
        (psi_star(p, x + u, y + v) - sumup_rhs(p, x, y, u, v)).norm()
    })
}

/// The shift identity with the missing factor restored:
/// `Ψ*(x+u, y+v) = Ψ*(x,y) Ψ*(u,v) Ψ_u(x) Ψ̃_v(y) Ψ(-x-y,-v) conj Ψ(u,-x-y)`.
pub fn check_sumup_corrected<F: Float + FromPrimitive>(
    p: CocycleParams<F>,
    samples: usize,
    seed: u64,
    radius: f64,
) -> IdentityReport {
    sampled("psi_star shift identity (with psi_star(u,v))", p, samples, seed, radius, |[x, y, u, v]| {
        (psi_star(p, x + u, y + v) - psi_star(p, u, v) * sumup_rhs(p, x, y, u, v)).norm()
    })
}

/// `Ω(z+w) = Ω(z) Ω(w) exp(-i s Im(z w))`.
pub fn check_omega_identity<F: Float + FromPrimitive>(
    p: CocycleParams<F>,
    samples: usize,
    seed: u64,
    radius: f64,
) -> IdentityReport {
    sampled("omega identity", p, samples, seed, radius, |[z, w]| {
        (omega(p, z + w) - omega(p, z) * omega(p, w) * phase(-p.s * (z * w).im)).norm()
    })
}

/// `max | |f| - 1 |` over `psi`, `psi_tilde`, `psi_star` and `omega`.
pub fn check_unimodular<F: Float + FromPrimitive>(
    p: CocycleParams<F>,
    samples: usize,
    seed: u64,
    radius: f64,
) -> IdentityReport {
    sampled("unimodularity", p, samples, seed, radius, |[a, b]| {
        [psi(p, a, b), psi_tilde(p, a, b), psi_star(p, a, b), omega(p, a)]
            .iter()
            .map(|c| (c.norm() - F::one()).abs())
            .fold(F::zero(), F::max)
    })
}

/// `psi(z1 + z1', z2) = psi(z1, z2) psi(z1', z2)`.
pub fn check_bicharacter<F: Float + FromPrimitive>(
    p: CocycleParams<F>,
    samples: usize,
    seed: u64,
    radius: f64,
) -> IdentityReport {
    sampled("bicharacter in the first slot", p, samples, seed, radius, |[a, ap, b]| {
        (psi(p, a + ap, b) - psi(p, a, b) * psi(p, ap, b)).norm()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;
    const S: f64 = 0.7;

    fn p(s: f64) -> CocycleParams<f64> {
        CocycleParams::new(s)
    }

    fn close(a: C, b: C) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn psi_values() {
        let z = C::new(0.3, -1.2);
        assert!(close(psi(p(S), z, z), C::new(1.0, 0.0)));
        assert!(close(psi(p(S), C::new(1.0, 0.0), C::i()), phase(S)));
        assert!(close(psi(p(0.0), z, C::new(2.0, 5.0)), C::new(1.0, 0.0)));
    }

    #[test]
    fn psi_tilde_values() {
        let z = C::new(0.3, -1.2);
        assert!(close(psi_tilde(p(S), z, z), C::new(1.0, 0.0)));
        assert!(close(psi_tilde(p(S), C::new(1.0, 0.0), C::i()), phase(-S)));
        assert!(close(psi_tilde(p(0.0), z, C::i()), C::new(1.0, 0.0)));
        assert!(close(psi_tilde(p(S), z, C::i()), psi(p(S), z, C::i()).conj()));
    }

    #[test]
    fn psi_star_values() {
        let z = C::new(0.3, -1.2);
        assert!(close(psi_star(p(S), C::new(0.0, 0.0), z), C::new(1.0, 0.0)));
        assert!(close(psi_star(p(S), z, -z), C::new(1.0, 0.0)));
        // conj psi(1, -1-i) = conj exp(-i s Im(1 * (-1+i))) = e^{is}.
        assert!(close(psi_star(p(S), C::new(1.0, 0.0), C::i()), phase(S)));
    }

    #[test]
    fn omega_values() {
        assert!(close(omega(p(S), C::new(-2.5, 0.0)), C::new(1.0, 0.0)));
        assert!(close(omega(p(S), C::new(1.0, 1.0)), phase(-S)));
        assert!(close(omega(p(0.0), C::new(0.4, 3.0)), C::new(1.0, 0.0)));
    }

    #[test]
    fn cocycle_identity_examples() {
        assert_eq!(check_cocycle_psi(p(0.0), 100, 1, 2.0).max_residual, 0.0);
        assert!(check_cocycle_psi(p(0.7), 10_000, 1, 1.0).max_residual < 1e-12);
        assert!(check_cocycle_psi_tilde(p(0.7), 10_000, 1, 1.0).max_residual < 1e-12);
        let (a, b, c) = (C::new(1.0, 0.0), C::i(), C::new(1.0, -1.0));
        let pp = p(0.7);
        let r = (psi(pp, a, b) * psi(pp, a + b, c) - psi(pp, b, c) * psi(pp, a, b + c)).norm();
        assert!(r < 1e-15);
    }

    #[test]
    fn sumup_trivial_cases() {
        let pp = p(0.3);
        let (x, y) = (C::new(0.4, 1.1), C::new(-0.7, 0.2));
        let zero = C::new(0.0, 0.0);
        assert!(close(psi_star(pp, x, y), sumup_rhs(pp, x, y, zero, zero)));
        assert_eq!(check_sumup_literal(p(0.0), 100, 3, 2.0).max_residual, 0.0);
    }

    #[test]
    fn sumup_as_stated_misses_a_phase() {
        let pp = p(0.3);
        let (x, y, u, v) = (C::new(0.4, 1.1), C::new(-0.7, 0.2), C::new(1.0, 0.0), C::i());
        let ratio = psi_star(pp, x + u, y + v) / sumup_rhs(pp, x, y, u, v);
        assert!(close(ratio, psi_star(pp, u, v)));
        assert!(!close(ratio, C::new(1.0, 0.0)));
        assert!(check_sumup_literal(pp, 1000, 3, 2.0).max_residual > 1e-3);
        assert!(check_sumup_corrected(pp, 10_000, 3, 2.0).max_residual < 1e-12);
    }

    #[test]
    fn omega_identity_examples() {
        let pp = p(1.1);
        let z = C::new(0.3, 0.9);
        let zero = C::new(0.0, 0.0);
        assert!(close(omega(pp, z + zero), omega(pp, z) * omega(pp, zero)));
        let (a, b) = (C::new(0.5, 0.0), C::new(-1.5, 0.0));
        assert_eq!(omega(pp, a + b), omega(pp, a) * omega(pp, b) * phase(-1.1 * (a * b).im));
        assert!(check_omega_identity(pp, 10_000, 9, 2.0).max_residual < 1e-12);
    }

    #[test]
    fn unimodular_and_bicharacter() {
        assert!(check_unimodular(p(2.0), 10_000, 4, 2.0).max_residual < 1e-15);
        assert!(check_bicharacter(p(2.0), 10_000, 4, 2.0).max_residual < 1e-13);
    }

    #[test]
    fn single_precision_instantiation() {
        let pp = CocycleParams::new(0.7f32);
        let r = check_cocycle_psi(pp, 1000, 1, 2.0).max_residual;
        assert!(r < 1e-5, "{r}");
        assert!(r > 0.0);
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let a = check_omega_identity(p(0.7), 500, 42, 2.0);
        let b = check_omega_identity(p(0.7), 500, 42, 2.0);
        assert_eq!(a, b);
    }
}
