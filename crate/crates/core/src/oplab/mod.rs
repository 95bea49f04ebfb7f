//! A concrete function-space model of a pair of normal operators `R, S`
//! with `RS = p² SR` and `RS* = q² S*R`, and numerical checks of the
//! identities relating their z-transforms.
//!
//! Operators act on functions of `(x, y)`:
//!
//! ```text
//! R = M_{e^x} T_(0, c),   S = M_{e^y} T_(a, 0),   a = ln(p/q),  c = -ln(pq)
//! ```
//!
//! Then `R*R = RR* = M_{e^{2x}}` and `S*S = SS* = M_{e^{2y}}`, while
//! `RS / SR = e^{a-c} = p²` and `RS* / S*R = e^{-a-c} = q²`. Unless
//! `p = 1`, no finite-dimensional representation exists: the relation
//! `RS = p² SR` forces the spectrum of `|R|` to be invariant under scaling
//! by `p`. Every expression below stays inside the algebra of
//! shift-multiplier atoms because the moduli are multiplication operators.
//!
//! The z-transform is `z_s(T) = sT (1 + s² T*T)^(-1/2)`.

pub mod multiplier;
pub mod operator;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive};

pub use multiplier::{Base, Exponent, Multiplier, MultiplierError};
pub use operator::{op_equal, sample_box, Atom, OperatorError, ShiftMultiplierOperator};

use crate::dsl;

/// Default half width of the sampling square.
pub const DEFAULT_HALF_WIDTH: f64 = 4.0;
/// Default number of sample points.
pub const DEFAULT_SAMPLES: usize = 1000;
/// Default tolerance on residuals.
pub const DEFAULT_TOL: f64 = 1e-12;

/// How the commutation labels `(λ, μ)` of a pair map to `(p, q)`.
///
/// `Plain` reads a `(λ, μ)`-commuting pair as `RS = λ SR`, so `p = √λ`.
/// `Squared` reads the labels as `(p, q)` themselves, so `RS = λ² SR`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PqConvention {
    #[default]
    Plain,
    Squared,
}

impl PqConvention {
    /// `(p, q)` for a pair labelled `(λ, μ)`.
    pub fn pq_from_labels<F: Float>(self, lambda: F, mu: F) -> (F, F) {
        match self {
            PqConvention::Plain => (lambda.sqrt(), mu.sqrt()),
            PqConvention::Squared => (lambda, mu),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PqConvention::Plain => "plain",
            PqConvention::Squared => "squared",
        }
    }
}

/// The operators `R, S` for given `p, q > 0`.
#[derive(Clone)]
pub struct PqModel<F> {
    pub p: F,
    pub q: F,
    pub a: F,
    pub c: F,
    pub r: ShiftMultiplierOperator<F>,
    pub s: ShiftMultiplierOperator<F>,
}

/// Builds the model; `p` and `q` must be positive.
pub fn build_pq_pair<F: Float + FromPrimitive>(p: F, q: F) -> PqModel<F> {
    assert!(p > F::zero() && q > F::zero(), "p and q must be positive");
    let a = (p / q).ln();
    let c = -(p * q).ln();
    let r = ShiftMultiplierOperator::atom(Multiplier::exp_real(F::one(), F::zero()), F::zero(), c);
    let s = ShiftMultiplierOperator::atom(Multiplier::exp_real(F::zero(), F::one()), a, F::zero());
    PqModel { p, q, a, c, r, s }
}

/// One checked identity.
#[derive(Clone, Debug, PartialEq)]
pub struct OpCheck {
    pub identity: String,
    pub residual: f64,
}

impl OpCheck {
    pub fn passed(&self, tol: f64) -> bool {
        self.residual < tol
    }
}

/// Residuals of one family of identities in one model.
#[derive(Clone, Debug, PartialEq)]
pub struct OpReport {
    pub check: String,
    pub p: f64,
    pub q: f64,
    pub samples: usize,
    pub seed: u64,
    pub half_width: f64,
    pub items: Vec<OpCheck>,
}

impl OpReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.items.iter().all(|i| i.passed(tol))
    }

    pub fn max_residual(&self) -> f64 {
        self.items.iter().map(|i| i.residual).fold(0.0, f64::max)
    }
}

/// Sampling parameters shared by the checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sampling {
    pub samples: usize,
    pub seed: u64,
    pub half_width: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: 0,
            half_width: DEFAULT_HALF_WIDTH,
        }
    }
}

impl Sampling {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            ..Self::default()
        }
    }

    fn points<F: Float + FromPrimitive>(&self) -> Vec<(F, F)> {
        sample_box(self.samples, self.seed, F::from_f64(self.half_width).expect("finite"))
    }
}

type Op<F> = ShiftMultiplierOperator<F>;

fn to_f64<F: Float>(x: F) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

struct Checker<F> {
    points: Vec<(F, F)>,
    items: Vec<OpCheck>,
}

impl<F: Float + FromPrimitive> Checker<F> {
    fn new(sampling: &Sampling) -> Self {
        Self {
            points: sampling.points(),
            items: Vec::new(),
        }
    }

    fn equal(&mut self, identity: &str, lhs: &Op<F>, rhs: &Op<F>) {
        let residual = to_f64(op_equal(lhs, rhs, &self.points));
        self.items.push(OpCheck {
            identity: identity.to_string(),
            residual,
        });
    }

    fn finish(self, check: &str, model: &PqModel<F>, sampling: &Sampling) -> OpReport {
        OpReport {
            check: check.to_string(),
            p: to_f64(model.p),
            q: to_f64(model.q),
            samples: sampling.samples,
            seed: sampling.seed,
            half_width: sampling.half_width,
            items: self.items,
        }
    }
}

/// z-transforms used throughout; the model guarantees diagonal moduli.
struct Transforms<F> {
    zr: Op<F>,
    zs: Op<F>,
    zr_q_over_p: Op<F>,
    zr_p_over_q: Op<F>,
    zs_pq: Op<F>,
}

impl<F: Float + FromPrimitive> PqModel<F> {
    fn transforms(&self) -> Transforms<F> {
        let z = |op: &Op<F>, s: F| op.z_transform(s).expect("model operators have diagonal moduli");
        let one = F::one();
        Transforms {
            zr: z(&self.r, one),
            zs: z(&self.s, one),
            zr_q_over_p: z(&self.r, self.q / self.p),
            zr_p_over_q: z(&self.r, self.p / self.q),
            zs_pq: z(&self.s, self.p * self.q),
        }
    }
}

/// `(1 - A*A)^(1/2)` for a contraction with diagonal modulus.
fn defect<F: Float + FromPrimitive>(a: &Op<F>) -> Op<F> {
    Op::identity()
        .sub(&a.adjoint().compose(a))
        .sqrt_diagonal()
        .expect("contraction with diagonal modulus")
}

/// `(1 - AA*)^(1/2)`.
fn co_defect<F: Float + FromPrimitive>(a: &Op<F>) -> Op<F> {
    Op::identity()
        .sub(&a.compose(&a.adjoint()))
        .sqrt_diagonal()
        .expect("contraction with diagonal co-modulus")
}

/// The two defining identities of the pair:
/// `z(R) z(S*) = z_{pq}(S*) z_{q/p}(R)` and
/// `z_{q/p}(R) z(S) = z_{pq}(S) z(R)`.
pub fn check_def_mu2<F: Float + FromPrimitive>(model: &PqModel<F>, sampling: &Sampling) -> OpReport {
    let t = model.transforms();
    let s_star = model.s.adjoint();
    let z = |op: &Op<F>, s: F| op.z_transform(s).expect("diagonal modulus");
    let zs_star = z(&s_star, F::one());
    let zs_star_pq = z(&s_star, model.p * model.q);
    let mut ck = Checker::new(sampling);
    ck.equal(
        "z(R) z(S*) = z_pq(S*) z_q/p(R)",
        &t.zr.compose(&zs_star),
        &zs_star_pq.compose(&t.zr_q_over_p),
    );
    ck.equal(
        "z_q/p(R) z(S) = z_pq(S) z(R)",
        &t.zr_q_over_p.compose(&t.zs),
        &t.zs_pq.compose(&t.zr),
    );
    ck.finish("def_mu2", model, sampling)
}

/// The 2×2 matrix of operators
///
/// ```text
/// [ (1 - z_{p/q}(R)* z_{p/q}(R))^(1/2) (1 - z(S)* z(S))^(1/2)    -z(S)* z(R)* ]
/// [ z(R) z(S)        (1 - z(R)* z(R))^(1/2) (1 - z_{pq}(S)* z_{pq}(S))^(1/2) ]
/// ```
pub fn build_q<F: Float + FromPrimitive>(model: &PqModel<F>) -> [[Op<F>; 2]; 2] {
    let t = model.transforms();
    let q11 = defect(&t.zr_p_over_q).compose(&defect(&t.zs));
    let q12 = t.zs.adjoint().compose(&t.zr.adjoint()).scale_real(-F::one());
    let q21 = t.zr.compose(&t.zs);
    let q22 = defect(&t.zr).compose(&defect(&t.zs_pq));
    [[q11, q12], [q21, q22]]
}

/// `(1 + λ|R|²|S|²) / ((1 + λ|R|²)(1 + μ|S|²))` with `|R|² = e^{2x}`,
/// `|S|² = e^{2y}` and `λμ` in the product term.
fn closed_form<F: Float + FromPrimitive>(lambda: F, mu: F) -> Op<F> {
    let r2 = Multiplier::exp_real(F::one() + F::one(), F::zero());
    let s2 = Multiplier::exp_real(F::zero(), F::one() + F::one());
    let k = |v: F| Complex::new(v, F::zero());
    let one = Multiplier::one();
    let num = one.add(&r2.mul(&s2).scale(k(lambda * mu)));
    let den_r = one.add(&r2.scale(k(lambda))).recip().expect("positive binomial");
    let den_s = one.add(&s2.scale(k(mu))).recip().expect("positive binomial");
    Op::multiplication(num.mul(&den_r).mul(&den_s))
}

/// Entries of `QQ*` against their expected values.
///
/// The off-diagonal entries must vanish. The diagonal entries are compared
/// with `(1 + |R|²|S|²) / ((1 + |R|²)(1 + |S|²))`, and also with the
/// rescaled forms in which `|R|²` carries the factor `(p/q)²` in the
/// (1,1) entry and `|S|²` carries `(pq)²` in the (2,2) entry. The two
/// intertwining relations used to cancel the off-diagonal terms are checked
/// as well, each in the order that makes both sides act with the same
/// shift.
pub fn check_qqstar<F: Float + FromPrimitive>(model: &PqModel<F>, sampling: &Sampling) -> OpReport {
    let q = build_q(model);
    let t = model.transforms();
    let adj = |a: &Op<F>| a.adjoint();
    let e = |i: usize, j: usize| {
        q[i][0]
            .compose(&adj(&q[j][0]))
            .add(&q[i][1].compose(&adj(&q[j][1])))
    };
    let zero = Op::zero();
    let one = F::one();
    let pq = model.p * model.q;
    let p_over_q = model.p / model.q;
    let mut ck = Checker::new(sampling);
    ck.equal("(QQ*)_12 = 0", &e(0, 1), &zero);
    ck.equal("(QQ*)_21 = 0", &e(1, 0), &zero);
    ck.equal(
        "(QQ*)_11 = (1+|R|^2|S|^2)/((1+|R|^2)(1+|S|^2))",
        &e(0, 0),
        &closed_form(one, one),
    );
    ck.equal(
        "(QQ*)_22 = (1+|R|^2|S|^2)/((1+|R|^2)(1+|S|^2))",
        &e(1, 1),
        &closed_form(one, one),
    );
    ck.equal(
        "(QQ*)_11 = (1+(p/q)^2|R|^2|S|^2)/((1+(p/q)^2|R|^2)(1+|S|^2))",
        &e(0, 0),
        &closed_form(p_over_q * p_over_q, one),
    );
    ck.equal(
        "(QQ*)_22 = (1+(pq)^2|R|^2|S|^2)/((1+|R|^2)(1+(pq)^2|S|^2))",
        &e(1, 1),
        &closed_form(one, pq * pq),
    );
    ck.equal(
        "(1-z(S)*z(S))^1/2 z(R)* = z(R)* (1-z_pq(S)z_pq(S)*)^1/2",
        &defect(&t.zs).compose(&adj(&t.zr)),
        &adj(&t.zr).compose(&co_defect(&t.zs_pq)),
    );
    ck.equal(
        "(1-z_p/q(R)*z_p/q(R))^1/2 z(S)* = z(S)* (1-z(R)z(R)*)^1/2",
        &defect(&t.zr_p_over_q).compose(&adj(&t.zs)),
        &adj(&t.zs).compose(&co_defect(&t.zr)),
    );
    ck.equal(
        "z(S)* (1-z(R)z(R)*)^1/2 = z(S)* (1-z_p/q(R)*z_p/q(R))^1/2",
        &adj(&t.zs).compose(&co_defect(&t.zr)),
        &adj(&t.zs).compose(&defect(&t.zr_p_over_q)),
    );
    ck.finish("qqstar", model, sampling)
}

/// Gaussian test vector `exp(-(x² + y²)/2)`.
pub fn gaussian_bump<F: Float>(x: F, y: F) -> Complex<F> {
    let two = F::one() + F::one();
    Complex::new((-(x * x + y * y) / two).exp(), F::zero())
}

/// The commutation relations of the pair and the two product identities
/// `RS (1 - z(R)*z(R))^(1/2) (1 - z(S)*z(S))^(1/2) = (p/q) z_{q/p}(R) z(S)`
/// and `SR (1 - z(R)*z(R))^(1/2) (1 - z(S)*z(S))^(1/2) = (1/(pq)) z_{pq}(S) z(R)`,
/// plus `(RS - p² SR)` applied to a Gaussian bump.
pub fn check_twrs<F: Float + FromPrimitive>(model: &PqModel<F>, sampling: &Sampling) -> OpReport {
    let t = model.transforms();
    let (r, s) = (&model.r, &model.s);
    let (p, q) = (model.p, model.q);
    let s_star = s.adjoint();
    let rs = r.compose(s);
    let sr = s.compose(r);
    let mut ck = Checker::new(sampling);
    ck.equal("RS = p^2 SR", &rs, &sr.scale_real(p * p));
    ck.equal("RS* = q^2 S*R", &r.compose(&s_star), &s_star.compose(r).scale_real(q * q));
    let d = defect(&t.zr).compose(&defect(&t.zs));
    ck.equal(
        "RS (1-z(R)*z(R))^1/2 (1-z(S)*z(S))^1/2 = (p/q) z_q/p(R) z(S)",
        &rs.compose(&d),
        &t.zr_q_over_p.compose(&t.zs).scale_real(p / q),
    );
    ck.equal(
        "SR (1-z(R)*z(R))^1/2 (1-z(S)*z(S))^1/2 = (1/pq) z_pq(S) z(R)",
        &sr.compose(&d),
        &t.zs_pq.compose(&t.zr).scale_real(F::one() / (p * q)),
    );
    let diff = rs.sub(&sr.scale_real(p * p));
    let worst = ck
        .points
        .iter()
        .map(|&(x, y)| to_f64(diff.apply_at(&gaussian_bump, x, y).norm()))
        .fold(0.0, f64::max);
    ck.items.push(OpCheck {
        identity: "(RS - p^2 SR) gaussian = 0".to_string(),
        residual: worst,
    });
    ck.finish("twrs", model, sampling)
}

/// `A*A = AA*` for `R`, `S`, `z(R)`, `z(S)`, and `|z_s(A)| < 1` on the
/// sample points for every z-transform in use (reported as the amount by
/// which the largest modulus reaches 1, or 0).
pub fn check_normality<F: Float + FromPrimitive>(model: &PqModel<F>, sampling: &Sampling) -> OpReport {
    let t = model.transforms();
    let mut ck = Checker::new(sampling);
    for (name, a) in [("R", &model.r), ("S", &model.s), ("z(R)", &t.zr), ("z(S)", &t.zs)] {
        ck.equal(
            &format!("{name}* {name} = {name} {name}*"),
            &a.adjoint().compose(a),
            &a.compose(&a.adjoint()),
        );
    }
    for (name, a) in [
        ("z(R)", &t.zr),
        ("z(S)", &t.zs),
        ("z_q/p(R)", &t.zr_q_over_p),
        ("z_p/q(R)", &t.zr_p_over_q),
        ("z_pq(S)", &t.zs_pq),
    ] {
        let largest = a
            .atoms()
            .flat_map(|atom| ck.points.iter().map(move |&(x, y)| atom.multiplier.eval(x, y).norm()))
            .fold(F::zero(), F::max);
        let excess = if largest < F::one() {
            0.0
        } else {
            to_f64(largest)
        };
        ck.items.push(OpCheck {
            identity: format!("|{name}| < 1"),
            residual: excess,
        });
    }
    ck.finish("normality", model, sampling)
}

/// Compares the model with the symbolic Minkowski relations
/// `x w = κ w x` and `x w' = κ' w' x` read off from the builtin normal
/// forms, evaluated at `q = e^{2s}`.
///
/// The pair `(x, w)` is labelled `(t^-1, t)` with `t = q^-4`; the model is
/// built from those labels through `convention`, and `RS` is compared with
/// `κ SR` and `RS*` with `κ' S*R`.
pub fn check_cross_layer<F: Float + FromPrimitive>(
    s: F,
    convention: PqConvention,
    sampling: &Sampling,
) -> OpReport {
    let minkowski = dsl::builtin("minkowski").expect("builtin minkowski");
    let m = minkowski.algebra("minkowski").expect("minkowski algebra");
    let swap_constant = |expr: &str| -> Complex<F> {
        // `w x` normalizes to `k x w`, so `x w = k^-1 w x`.
        let poly = dsl::parse_poly(expr, m).expect("expression parses");
        let nf = m.normalize(&poly).expect("normalizes");
        let (_, k) = nf.terms().next().expect("single term");
        let k = k.eval::<F>(s).expect("Laurent polynomial evaluates");
        Complex::new(F::one(), F::zero()) / k
    };
    let kappa = swap_constant("w x");
    let kappa_star = swap_constant("w' x");
    let eight = F::from_u8(8).expect("small");
    let t = (-eight * s).exp();
    let (p, q) = convention.pq_from_labels(t.recip(), t);
    let model = build_pq_pair(p, q);
    let (r, sop) = (&model.r, &model.s);
    let s_star = sop.adjoint();
    let mut ck = Checker::new(sampling);
    ck.equal("x w = q^4 w x (R S = k S R)", &r.compose(sop), &sop.compose(r).scale(kappa));
    ck.equal(
        "x w* = q^-4 w* x (R S* = k' S* R)",
        &r.compose(&s_star),
        &s_star.compose(r).scale(kappa_star),
    );
    let mut report = ck.finish("cross_layer", &model, sampling);
    report.check = format!("cross_layer[s={}, {}]", to_f64(s), convention.name());
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts() -> Sampling {
        Sampling::new(200, 7)
    }

    #[test]
    fn model_parameters() {
        let m = build_pq_pair(2.0f64, 3.0);
        assert!((m.a - (2.0f64 / 3.0).ln()).abs() < 1e-15);
        assert!((m.c + 6.0f64.ln()).abs() < 1e-15);
        let m = build_pq_pair(1.0f64, 1.0);
        assert_eq!((m.a, m.c.abs()), (0.0, 0.0));
        assert_eq!(m.r.compose(&m.s), m.s.compose(&m.r));
    }

    #[test]
    fn compose_r_s_has_one_atom() {
        let m = build_pq_pair(2.0f64, 3.0);
        let rs = m.r.compose(&m.s);
        let f = rs.multiplier_at(m.a, m.c).expect("atom at (a, c)");
        assert!((f.eval(0.5, 0.25).re - (0.75 - m.c).exp()).abs() < 1e-12);
    }

    #[test]
    fn adjoint_of_r() {
        let m = build_pq_pair(2.0f64, 3.0);
        let ra = m.r.adjoint();
        assert_eq!(ra, Op::atom(Multiplier::exp_real(1.0, 0.0), 0.0, -m.c));
        assert_eq!(m.s.adjoint().adjoint(), m.s);
    }

    #[test]
    fn z_transform_of_r() {
        let m = build_pq_pair(2.0f64, 3.0);
        let z = m.r.z_transform(1.0).unwrap();
        let f = z.multiplier_at(0.0, m.c).unwrap();
        assert!((f.eval(0.0, 1.3).re - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn q_entries_at_origin() {
        let m = build_pq_pair(1.0f64, 1.0);
        let q = build_q(&m);
        let q11 = q[0][0].multiplier_at(0.0, 0.0).unwrap();
        assert!((q11.eval(0.0, 0.0).re - 0.5).abs() < 1e-15);
        let t = m.transforms();
        assert_eq!(q[1][0], t.zr.compose(&t.zs));
        let qq11 = q[0][0]
            .compose(&q[0][0].adjoint())
            .add(&q[0][1].compose(&q[0][1].adjoint()));
        assert!((qq11.multiplier_at(0.0, 0.0).unwrap().eval(0.0, 0.0).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unit_parameters_give_exact_zeros() {
        let m = build_pq_pair(1.0f64, 1.0);
        for report in [
            check_def_mu2(&m, &pts()),
            check_qqstar(&m, &pts()),
            check_twrs(&m, &pts()),
            check_normality(&m, &pts()),
        ] {
            for item in &report.items {
                assert_eq!(item.residual, 0.0, "{}: {}", report.check, item.identity);
            }
        }
    }

    #[test]
    fn normality_is_exact_for_general_parameters() {
        let m = build_pq_pair(2.0f64, 3.0);
        let report = check_normality(&m, &pts());
        for item in &report.items {
            assert_eq!(item.residual, 0.0, "{}", item.identity);
        }
    }

    #[test]
    fn rs_against_sr_scaled() {
        let m = build_pq_pair(2.0f64, 3.0);
        let pts = pts().points::<f64>();
        let r = op_equal(&m.r.compose(&m.s), &m.s.compose(&m.r).scale_real(4.0), &pts);
        assert!(r < 1e-12, "{r}");
        assert!(op_equal(&m.r, &m.s, &pts) > 1.0);
    }
}
