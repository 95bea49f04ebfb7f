//! The five verification suites.

use std::fmt;

use qmink::coact::{
    check_coaction_identity, check_coassociativity, classical_limit_compare, SymbolicReport,
};
use qmink::cocycle::{self, CocycleParams, IdentityReport, DEFAULT_RADIUS};
use qmink::dsl::{self, Document};
use qmink::ncalg::{Strategy, Word};
use qmink::oplab::{self, PqConvention, Sampling};
use qmink::{Mor, Poly, Pres};
use rand::{Rng, SeedableRng};

use crate::report::{Check, Inputs, Report};

/// Deformation parameters used when none are given.
pub const DEFAULT_S: [f64; 3] = [0.3, 0.7, 1.1];
/// Operator-model parameters used when none are given.
pub const DEFAULT_PQ: [(f64, f64); 3] = [(1.0, 1.0), (2.0, 3.0), (0.5, std::f64::consts::E)];
/// Random words per algebra in the dual-strategy check.
pub const DEFAULT_WORDS: usize = 1000;
/// Longest random word in the dual-strategy check.
pub const MAX_WORD_LEN: usize = 8;
/// Sample count of the cocycle suite.
pub const DEFAULT_COCYCLE_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteError(pub String);

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SuiteError {}

fn err(e: impl fmt::Display) -> SuiteError {
    SuiteError(e.to_string())
}

/// Parameters shared by every suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol: f64,
    pub s: Vec<f64>,
    pub pq: Vec<(f64, f64)>,
    pub pq_convention: PqConvention,
    pub algebras: Vec<String>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: None,
            tol: oplab::DEFAULT_TOL,
            s: DEFAULT_S.to_vec(),
            pq: DEFAULT_PQ.to_vec(),
            pq_convention: PqConvention::Plain,
            algebras: Vec::new(),
        }
    }
}

fn symbolic_checks(prefix: &str, report: &SymbolicReport) -> Vec<Check> {
    report
        .items
        .iter()
        .map(|r| Check::symbolic(format!("{prefix}: {}", r.label), r.residual.clone(), r.is_zero))
        .collect()
}

fn coaction_document() -> Document {
    dsl::builtin("coaction").expect("builtin coaction document")
}

/// Termination, local confluence, star closure and dual-strategy
/// agreement for each named algebra of `doc`.
pub fn presentation(doc: &Document, opts: &Options) -> Result<Report, SuiteError> {
    let names: Vec<String> = if opts.algebras.is_empty() {
        doc.algebras.iter().filter(|a| a.legs() == 1).map(|a| a.name().to_string()).collect()
    } else {
        opts.algebras.clone()
    };
    let words = opts.samples.unwrap_or(DEFAULT_WORDS);
    let mut checks = Vec::new();
    for name in &names {
        let p = doc
            .algebra(name)
            .ok_or_else(|| SuiteError(format!("unknown algebra `{name}`")))?;
        checks.push(Check::flag(format!("{name}: star closed"), p.is_star_closed(), None));
        let term = p.check_termination();
        let detail = (!term.passed()).then(|| {
            term.violations.iter().map(|(_, r)| r.as_str()).collect::<Vec<_>>().join("; ")
        });
        checks.push(Check::flag(
            format!("{name}: every rule decreases ({} rules)", term.rules_checked),
            term.passed(),
            detail,
        ));
        let pairs = p.check_local_confluence().map_err(err)?;
        if pairs.is_empty() {
            checks.push(Check::flag(format!("{name}: all critical pairs resolve"), true, None));
        }
        for pair in &pairs {
            checks.push(Check::symbolic(
                format!("{name}: critical pair at {}", p.render_word(&pair.overlap)),
                p.render(&(pair.left.clone() - pair.right.clone())),
                false,
            ));
        }
        let disagreement = dual_strategy(p, words, opts.seed).map_err(err)?;
        checks.push(Check::flag(
            format!("{name}: leftmost and random reduction agree on {words} words"),
            disagreement.is_none(),
            disagreement.map(|w| format!("first disagreement on `{w}`")),
        ));
    }
    let inputs = Inputs {
        algebras: names,
        seed: Some(opts.seed),
        samples: Some(words),
        ..Inputs::default()
    };
    Ok(Report::new("presentation", inputs, checks))
}

/// First random word whose two reductions differ, rendered.
fn dual_strategy(p: &Pres, words: usize, seed: u64) -> Result<Option<String>, qmink::ncalg::NcError> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = p.num_generators();
    for i in 0..words {
        let len = rng.gen_range(0..=MAX_WORD_LEN);
        let w = Word((0..len).map(|_| rng.gen_range(0..n)).collect());
        let input = Poly::word(w);
        let left = p.normalize_with(&input, Strategy::Leftmost)?;
        let random = p.normalize_with(&input, Strategy::Random(seed.wrapping_add(i as u64)))?;
        if left != random {
            return Ok(Some(p.render(&input)));
        }
    }
    Ok(None)
}

fn morphism<'a>(doc: &'a Document, name: &str) -> Result<&'a Mor, SuiteError> {
    doc.morphism(name).ok_or_else(|| SuiteError(format!("unknown morphism `{name}`")))
}

/// Comultiplication: relations, coassociativity, star equivariance and
/// the classical limit.
pub fn hopf(doc: &Document) -> Result<Report, SuiteError> {
    let delta = morphism(doc, "delta")?;
    let classical = dsl::builtin("classical").expect("builtin classical document");
    let mut checks = Vec::new();
    checks.extend(symbolic_checks("delta preserves", &delta.check_relations_preserved().map_err(err)?));
    checks.extend(symbolic_checks("coassociativity", &check_coassociativity(delta).map_err(err)?));
    checks.extend(symbolic_checks("delta star", &delta.check_star_equivariance().map_err(err)?));
    let limit = classical_limit_compare(delta, morphism(&classical, "delta")?).map_err(err)?;
    checks.extend(symbolic_checks("delta at q = 1", &limit));
    let inputs = Inputs {
        algebras: vec![delta.domain().name().to_string()],
        morphisms: vec![delta.name().to_string()],
        ..Inputs::default()
    };
    Ok(Report::new("hopf", inputs, checks))
}

/// Coaction: relations, coaction identity, star equivariance and the
/// classical limit.
pub fn coaction(doc: &Document) -> Result<Report, SuiteError> {
    let dh = morphism(doc, "delta_h")?;
    let delta = morphism(doc, "delta")?;
    let classical = dsl::builtin("classical").expect("builtin classical document");
    let mut checks = Vec::new();
    checks.extend(symbolic_checks("delta_h preserves", &dh.check_relations_preserved().map_err(err)?));
    checks.extend(symbolic_checks("coaction identity", &check_coaction_identity(dh, delta).map_err(err)?));
    checks.extend(symbolic_checks("delta_h star", &dh.check_star_equivariance().map_err(err)?));
    let limit = classical_limit_compare(dh, morphism(&classical, "delta_h")?).map_err(err)?;
    checks.extend(symbolic_checks("delta_h at q = 1", &limit));
    let inputs = Inputs {
        algebras: vec![dh.domain().name().to_string(), delta.domain().name().to_string()],
        morphisms: vec![dh.name().to_string(), delta.name().to_string()],
        ..Inputs::default()
    };
    Ok(Report::new("coaction", inputs, checks))
}

/// Scalar identities of the bicharacter cocycle for every `s`.
pub fn cocycle(opts: &Options) -> Report {
    let samples = opts.samples.unwrap_or(DEFAULT_COCYCLE_SAMPLES);
    type CheckFn = fn(CocycleParams<f64>, usize, u64, f64) -> IdentityReport;
    let fns: [CheckFn; 7] = [
        cocycle::check_cocycle_psi,
        cocycle::check_cocycle_psi_tilde,
        cocycle::check_sumup_literal,
        cocycle::check_sumup_corrected,
        cocycle::check_omega_identity,
        cocycle::check_unimodular,
        cocycle::check_bicharacter,
    ];
    let mut checks = Vec::new();
    for &s in &opts.s {
        for f in fns {
            let r = f(CocycleParams::new(s), samples, opts.seed, DEFAULT_RADIUS);
            checks.push(Check::numeric(format!("s={s}: {}", r.identity), r.max_residual, opts.tol));
        }
    }
    let inputs = Inputs {
        seed: Some(opts.seed),
        samples: Some(samples),
        s: opts.s.clone(),
        tol: Some(opts.tol),
        ..Inputs::default()
    };
    Report::new("cocycle", inputs, checks)
}

/// Operator-model identities for every `(p, q)`, and the cross-layer
/// comparison for every `s`.
pub fn pq(opts: &Options) -> Report {
    let sampling = Sampling::new(opts.samples.unwrap_or(oplab::DEFAULT_SAMPLES), opts.seed);
    let mut checks = Vec::new();
    for &(p, q) in &opts.pq {
        let model = oplab::build_pq_pair(p, q);
        for r in [
            oplab::check_def_mu2(&model, &sampling),
            oplab::check_qqstar(&model, &sampling),
            oplab::check_twrs(&model, &sampling),
            oplab::check_normality(&model, &sampling),
        ] {
            for item in &r.items {
                checks.push(Check::numeric(
                    format!("(p,q)=({p},{q}) {}: {}", r.check, item.identity),
                    item.residual,
                    opts.tol,
                ));
            }
        }
    }
    for &s in &opts.s {
        let r = oplab::check_cross_layer(s, opts.pq_convention, &sampling);
        for item in &r.items {
            checks.push(Check::numeric(format!("{}: {}", r.check, item.identity), item.residual, opts.tol));
        }
    }
    let inputs = Inputs {
        seed: Some(opts.seed),
        samples: Some(sampling.samples),
        s: opts.s.clone(),
        pq: opts.pq.iter().map(|&(p, q)| [p, q]).collect(),
        tol: Some(opts.tol),
        pq_convention: Some(opts.pq_convention.name().to_string()),
        ..Inputs::default()
    };
    Report::new("pq", inputs, checks)
}

/// All five suites on the builtin documents, run concurrently and
/// returned in a fixed order.
pub fn report_all(opts: &Options) -> Result<Vec<Report>, SuiteError> {
    let doc = coaction_document();
    let presentation_opts = Options {
        algebras: vec!["lorentz".into(), "minkowski".into()],
        ..opts.clone()
    };
    std::thread::scope(|scope| {
        let a = scope.spawn(|| presentation(&doc, &presentation_opts));
        let b = scope.spawn(|| hopf(&doc));
        let c = scope.spawn(|| coaction(&doc));
        let d = scope.spawn(|| Ok(cocycle(opts)));
        let e = scope.spawn(|| Ok(pq(opts)));
        let join = |h: std::thread::ScopedJoinHandle<'_, _>| h.join().expect("suite thread");
        Ok(vec![join(a)?, join(b)?, join(c)?, join(d)?, join(e)?])
    })
}
