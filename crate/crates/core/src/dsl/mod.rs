//! The `.qalg` presentation language.
//!
//! ```text
//! file     ::= block*
//! block    ::= "algebra" NAME "{" decl* "}"
//!            | "algebra" NAME "=" NAME ("*" NAME)* ";"
//!            | "morphism" NAME ":" algexpr "->" algexpr "{" (ID "->" poly ";")* "}"
//! algexpr  ::= NAME ("*" NAME)*
//! decl     ::= "gen" ID* ";"            generators with distinct adjoints ID'
//!            | "selfadjoint" ID* ";"
//!            | "heavy" ID* ";"          letters counted first by the term order
//!            | "weight" ID "=" "[" INT ("," INT)* "]" ";"
//!            | "rel" poly "=" poly ";"  oriented by the term order
//!            | "rule" word "->" poly ";" explicit orientation, must decrease
//! poly     ::= ["-"] term (("+" | "-") ["-"] term)*
//! term     ::= factor (["*"] factor | "|")*
//! factor   ::= (NUMBER | "i" | "q" | "t" | ID | "(" poly ")") ["^" ["-"] INT]
//! ```
//!
//! Generators are ordered as declared (unstarred and self-adjoint first,
//! then the adjoints in the same order); that order drives the inversion
//! count of the term order. `q` is the formal deformation unit and
//! `t = q^-4`. In a tensor product `|` moves to the next leg and `1` stands
//! for an empty leg. `#` and `//` start comments.
//!
//! Every algebra is closed under the involution after parsing, and its rules
//! are checked to decrease the term order.

mod lexer;
mod parser;

use std::fmt::Write as _;

use thiserror::Error;

pub use parser::{parse, parse_poly, RESERVED};

use crate::coact::Morphism;
use crate::{Pres, Scalar};

/// A diagnostic with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct DslError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl DslError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            col,
            message: message.into(),
        }
    }
}

/// Algebras and morphisms of a parsed file, in source order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Document {
    pub algebras: Vec<Pres>,
    pub morphisms: Vec<Morphism<Scalar>>,
}

impl Document {
    pub fn algebra(&self, name: &str) -> Option<&Pres> {
        self.algebras.iter().find(|a| a.name() == name)
    }

    pub fn morphism(&self, name: &str) -> Option<&Morphism<Scalar>> {
        self.morphisms.iter().find(|m| m.name() == name)
    }
}

/// Error for [`builtin`] with an unknown name.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown builtin `{0}` (expected one of: lorentz, minkowski, coaction, classical)")]
pub struct UnknownBuiltin(pub String);

pub const LORENTZ_SRC: &str = include_str!("../../data/lorentz.qalg");
pub const MINKOWSKI_SRC: &str = include_str!("../../data/minkowski.qalg");
pub const COACTION_SRC: &str = include_str!("../../data/coaction.qalg");
pub const CLASSICAL_SRC: &str = include_str!("../../data/classical.qalg");

/// Source text of a builtin. `coaction` includes the two algebras it
/// refers to.
pub fn builtin_source(name: &str) -> Result<String, UnknownBuiltin> {
    Ok(match name {
        "lorentz" => LORENTZ_SRC.to_string(),
        "minkowski" => MINKOWSKI_SRC.to_string(),
        "coaction" => format!("{LORENTZ_SRC}\n{MINKOWSKI_SRC}\n{COACTION_SRC}"),
        "classical" => CLASSICAL_SRC.to_string(),
        other => return Err(UnknownBuiltin(other.to_string())),
    })
}

/// Parses a builtin document.
pub fn builtin(name: &str) -> Result<Document, UnknownBuiltin> {
    let src = builtin_source(name)?;
    Ok(parse(&src).unwrap_or_else(|e| panic!("builtin `{name}` failed to parse: {e}")))
}

fn idlist(out: &mut String, kw: &str, names: &[&str]) {
    if !names.is_empty() {
        let _ = writeln!(out, "  {kw} {};", names.join(" "));
    }
}

/// Canonical text of one presentation. Generators appear as runs of `gen` /
/// `selfadjoint` declarations in declared order; every rule is written out
/// with its orientation.
pub fn serialize_presentation(p: &Pres) -> String {
    let mut out = String::new();
    if !p.factors().is_empty() {
        let _ = writeln!(out, "algebra {} = {};", p.name(), p.factors().join(" * "));
        return out;
    }
    if p.num_generators() == 0 && p.rules().is_empty() {
        let _ = writeln!(out, "algebra {} {{}}", p.name());
        return out;
    }
    let _ = writeln!(out, "algebra {} {{", p.name());
    let mut run: Vec<&str> = Vec::new();
    let mut run_sa = false;
    for g in p.primary_generators() {
        let gen = p.generator(g);
        let sa = gen.is_self_adjoint(g);
        if !run.is_empty() && sa != run_sa {
            idlist(&mut out, if run_sa { "selfadjoint" } else { "gen" }, &run);
            run.clear();
        }
        run_sa = sa;
        run.push(&gen.name);
    }
    idlist(&mut out, if run_sa { "selfadjoint" } else { "gen" }, &run);
    let heavy: Vec<&str> = (0..p.num_generators())
        .filter(|&g| p.is_heavy(g))
        .map(|g| p.generator(g).name.as_str())
        .collect();
    idlist(&mut out, "heavy", &heavy);
    for g in p.primary_generators() {
        let gen = p.generator(g);
        if let Some(w) = &gen.weight {
            let ws: Vec<String> = w.iter().map(i64::to_string).collect();
            let _ = writeln!(out, "  weight {} = [{}];", gen.name, ws.join(", "));
        }
    }
    for r in p.rules() {
        let _ = writeln!(out, "  rule {};", p.render_rule(r));
    }
    out.push_str("}\n");
    out
}

fn algebra_ref(p: &Pres, doc: &Document) -> String {
    if doc.algebra(p.name()).is_some() || p.factors().is_empty() {
        p.name().to_string()
    } else {
        p.factors().join(" * ")
    }
}

/// Canonical text of one morphism; algebra names are resolved against `doc`
/// (tensor products not declared there are written as `A * B`).
pub fn serialize_morphism(m: &Morphism<Scalar>, doc: &Document) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "morphism {} : {} -> {} {{",
        m.name(),
        algebra_ref(m.domain(), doc),
        algebra_ref(m.codomain(), doc)
    );
    for g in m.domain().primary_generators() {
        let _ = writeln!(
            out,
            "  {} -> {};",
            m.domain().generator(g).name,
            m.codomain().render(m.image(g))
        );
    }
    out.push_str("}\n");
    out
}

/// Canonical text of a document: algebras, then morphisms, blank-line
/// separated.
pub fn serialize(doc: &Document) -> String {
    let blocks: Vec<String> = doc
        .algebras
        .iter()
        .map(serialize_presentation)
        .chain(doc.morphisms.iter().map(|m| serialize_morphism(m, doc)))
        .collect();
    blocks.join("\n")
}
