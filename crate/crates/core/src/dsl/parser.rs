use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};

use super::lexer::{lex, Tok, Token};
use super::{Document, DslError};
use crate::coact::Morphism;
use crate::ncalg::{tensor, NcError, Presentation, PresentationBuilder, RewriteRule};
use crate::scalars::{gaussian, imaginary_unit, Coefficient, Scalar};
use crate::{Poly, Pres};

/// Names reserved for scalars inside polynomials.
pub const RESERVED: [&str; 3] = ["i", "q", "t"];

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &'a Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> &'a Token {
        let t = &self.toks[self.pos];
        if !matches!(t.tok, Tok::Eof) {
            self.pos += 1;
        }
        t
    }

    fn err_at(t: &Token, msg: impl Into<String>) -> DslError {
        DslError::new(t.line, t.col, msg)
    }

    fn describe(t: &Token) -> String {
        match &t.tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Arrow => "`->`".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), DslError> {
        let t = self.bump();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(Self::err_at(t, format!("expected `{c}`, found {}", Self::describe(t))))
        }
    }

    fn expect_arrow(&mut self) -> Result<(), DslError> {
        let t = self.bump();
        if t.tok == Tok::Arrow {
            Ok(())
        } else {
            Err(Self::err_at(t, format!("expected `->`, found {}", Self::describe(t))))
        }
    }

    fn ident(&mut self) -> Result<(&'a Token, String), DslError> {
        let t = self.bump();
        match &t.tok {
            Tok::Ident(s) => Ok((t, s.clone())),
            _ => Err(Self::err_at(t, format!("expected a name, found {}", Self::describe(t)))),
        }
    }

    /// `id id ... ;`
    fn idlist(&mut self) -> Result<Vec<(&'a Token, String)>, DslError> {
        let mut out = Vec::new();
        while !self.is_sym(';') {
            out.push(self.ident()?);
        }
        self.expect_sym(';')?;
        Ok(out)
    }

    fn integer(&mut self) -> Result<i64, DslError> {
        let neg = if self.is_sym('-') {
            self.bump();
            true
        } else {
            false
        };
        let t = self.bump();
        match &t.tok {
            Tok::Number(n) if n.is_integer() => {
                let v = n.to_integer().to_i64().ok_or_else(|| Self::err_at(t, "integer out of range"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(Self::err_at(t, format!("expected an integer, found {}", Self::describe(t)))),
        }
    }

    fn skip_statement(&mut self) -> Result<(), DslError> {
        loop {
            let t = self.bump();
            match t.tok {
                Tok::Sym(';') => return Ok(()),
                Tok::Eof | Tok::Sym('}') => {
                    return Err(Self::err_at(t, "statement is missing its terminating `;`"))
                }
                _ => {}
            }
        }
    }

    // ---- polynomials -------------------------------------------------

    /// `['-'] term (('+' | '-') ['-'] term)*`
    fn poly(&mut self, pres: &Pres, leg: usize) -> Result<Poly, DslError> {
        let mut acc = self.signed_term(pres, leg)?;
        loop {
            if self.is_sym('+') {
                self.bump();
                acc = acc + self.signed_term(pres, leg)?;
            } else if self.is_sym('-') {
                self.bump();
                acc = acc - self.signed_term(pres, leg)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn signed_term(&mut self, pres: &Pres, leg: usize) -> Result<Poly, DslError> {
        if self.is_sym('-') {
            self.bump();
            return Ok(-self.signed_term(pres, leg)?);
        }
        self.term(pres, leg)
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek().tok, Tok::Ident(_) | Tok::Number(_) | Tok::Sym('(') | Tok::Sym('|'))
    }

    /// Juxtaposed (or `*`-separated) factors; `|` moves to the next leg.
    fn term(&mut self, pres: &Pres, start_leg: usize) -> Result<Poly, DslError> {
        let mut leg = start_leg;
        if !self.starts_factor() {
            let t = self.peek();
            return Err(Self::err_at(t, format!("expected a term, found {}", Self::describe(t))));
        }
        let mut acc = Poly::one();
        let mut first = true;
        loop {
            if self.is_sym('|') {
                let t = self.bump();
                leg += 1;
                if leg >= pres.legs() {
                    return Err(Self::err_at(
                        t,
                        format!("`{}` has {} tensor leg(s)", pres.name(), pres.legs()),
                    ));
                }
                first = false;
                continue;
            }
            if self.is_sym('*') && !first {
                self.bump();
            } else if !self.starts_factor() {
                return Ok(acc);
            }
            let f = self.factor(pres, leg)?;
            acc = &acc * &f;
            first = false;
        }
    }

    fn factor(&mut self, pres: &Pres, leg: usize) -> Result<Poly, DslError> {
        let t = self.bump();
        let (base, scalar) = match &t.tok {
            Tok::Number(n) => (
                Poly::constant(Scalar::from(gaussian(n.clone(), Zero::zero()))),
                true,
            ),
            Tok::Sym('(') => {
                let inner = self.poly(pres, leg)?;
                self.expect_sym(')')?;
                let scalar = inner.terms().all(|(w, _)| w.is_empty());
                (inner, scalar)
            }
            Tok::Ident(s) if s == "i" => (Poly::constant(Scalar::from(imaginary_unit())), true),
            Tok::Ident(s) if s == "q" => (Poly::constant(Scalar::q_pow(1)), true),
            Tok::Ident(s) if s == "t" => (Poly::constant(Scalar::t()), true),
            Tok::Ident(s) => {
                let g = pres.find(s, leg).ok_or_else(|| {
                    let where_ = if pres.legs() > 1 {
                        format!(" on leg {leg}")
                    } else {
                        String::new()
                    };
                    Self::err_at(t, format!("unknown generator `{s}` in `{}`{where_}", pres.name()))
                })?;
                (Poly::letter(g), false)
            }
            _ => return Err(Self::err_at(t, format!("expected a term, found {}", Self::describe(t)))),
        };
        if !self.is_sym('^') {
            return Ok(base);
        }
        let caret = self.bump();
        let e = self.integer()?;
        if e >= 0 {
            let mut out = Poly::one();
            for _ in 0..e {
                out = &out * &base;
            }
            return Ok(out);
        }
        let inv = scalar
            .then(|| base.coeff(&crate::ncalg::Word::empty()))
            .and_then(|c| c.unit_inverse())
            .ok_or_else(|| Self::err_at(caret, "negative powers are allowed only for invertible scalars"))?;
        let mut out = Poly::one();
        for _ in 0..(-e) {
            out = out.scale(&inv);
        }
        Ok(out)
    }

    // ---- blocks ------------------------------------------------------

    fn algebra_name_expr(&mut self, doc: &Document) -> Result<Pres, DslError> {
        let (t, name) = self.ident()?;
        let mut acc = doc
            .algebra(&name)
            .cloned()
            .ok_or_else(|| Self::err_at(t, format!("unknown algebra `{name}`")))?;
        while self.is_sym('*') {
            self.bump();
            let (t, name) = self.ident()?;
            let next = doc
                .algebra(&name)
                .ok_or_else(|| Self::err_at(t, format!("unknown algebra `{name}`")))?;
            acc = tensor(&acc, next);
        }
        Ok(acc)
    }

    fn algebra(&mut self, doc: &Document) -> Result<Pres, DslError> {
        let (name_tok, name) = self.ident()?;
        if doc.algebra(&name).is_some() {
            return Err(Self::err_at(name_tok, format!("algebra `{name}` defined twice")));
        }
        if self.is_sym('=') {
            self.bump();
            let mut p = self.algebra_name_expr(doc)?;
            self.expect_sym(';')?;
            p.set_name(name);
            return Ok(p);
        }
        self.expect_sym('{')?;
        let mut builder = PresentationBuilder::new(name.clone());
        let mut heavy: Vec<(&Token, String)> = Vec::new();
        let mut weights: Vec<(&Token, String, Vec<i64>)> = Vec::new();
        let mut relations: Vec<(bool, usize)> = Vec::new();
        let mut declared: BTreeMap<String, &Token> = BTreeMap::new();
        while !self.is_sym('}') {
            let (kw_tok, kw) = self.ident()?;
            match kw.as_str() {
                "gen" | "selfadjoint" => {
                    for (t, id) in self.idlist()? {
                        if id.ends_with('\'') {
                            return Err(Self::err_at(t, "declare the unstarred name; its adjoint is implied"));
                        }
                        if RESERVED.contains(&id.as_str()) {
                            return Err(Self::err_at(t, format!("`{id}` is reserved for scalars")));
                        }
                        if declared.insert(id.clone(), t).is_some() {
                            return Err(Self::err_at(t, format!("generator `{id}` declared twice")));
                        }
                        builder = if kw == "gen" {
                            builder.generator(&id)
                        } else {
                            builder.self_adjoint(&id)
                        };
                    }
                }
                "heavy" => heavy.extend(self.idlist()?),
                "weight" => {
                    let (t, id) = self.ident()?;
                    self.expect_sym('=')?;
                    self.expect_sym('[')?;
                    let mut v = Vec::new();
                    while !self.is_sym(']') {
                        v.push(self.integer()?);
                        if self.is_sym(',') {
                            self.bump();
                        }
                    }
                    self.expect_sym(']')?;
                    self.expect_sym(';')?;
                    weights.push((t, id, v));
                }
                "rel" | "rule" => {
                    relations.push((kw == "rule", self.pos));
                    self.skip_statement()?;
                }
                other => {
                    return Err(Self::err_at(
                        kw_tok,
                        format!("unknown declaration `{other}` (expected gen, selfadjoint, heavy, weight, rel or rule)"),
                    ))
                }
            }
        }
        let close = self.bump();
        for (_, id) in &heavy {
            builder = builder.heavy(id);
        }
        for (_, id, w) in &weights {
            builder = builder.weight(id, w.clone());
        }
        let mut pres: Pres = builder.build().map_err(|e| {
            let culprit = match &e {
                NcError::UnknownGenerator(n) | NcError::InvalidWeight(n) => heavy
                    .iter()
                    .map(|(t, id)| (*t, id))
                    .chain(weights.iter().map(|(t, id, _)| (*t, id)))
                    .find(|(_, id)| *id == n)
                    .map(|(t, _)| t),
                _ => None,
            };
            Self::err_at(culprit.unwrap_or(name_tok), e.to_string())
        })?;
        for (t, id, _) in &weights {
            if id.ends_with('\'') {
                return Err(Self::err_at(t, "give the weight of the unstarred generator"));
            }
        }
        let saved = self.pos;
        for (explicit, at) in relations {
            self.pos = at;
            let start = self.peek();
            let lhs = self.poly(&pres, 0)?;
            if explicit {
                self.expect_arrow()?;
                let rhs = self.poly(&pres, 0)?;
                let mut terms = lhs.terms();
                let word = match (terms.next(), terms.next()) {
                    (Some((w, c)), None) if c.is_one() && !w.is_empty() => w.clone(),
                    _ => return Err(Self::err_at(start, "left side of a rule must be a single word")),
                };
                pres.push_rule(RewriteRule::new(word, rhs))
                    .map_err(|e| Self::err_at(start, e.to_string()))?;
            } else {
                self.expect_sym('=')?;
                let rhs = self.poly(&pres, 0)?;
                pres.add_relation(&(lhs - rhs))
                    .map_err(|e| Self::err_at(start, e.to_string()))?;
            }
            self.expect_sym(';')?;
        }
        self.pos = saved;
        let closed = pres.star_closure().map_err(|e| Self::err_at(close, e.to_string()))?;
        let report = closed.check_termination();
        if let Some((_, rule)) = report.violations.first() {
            return Err(Self::err_at(close, NcError::NotDecreasing(rule.clone()).to_string()));
        }
        Ok(closed)
    }

    fn morphism(&mut self, doc: &Document) -> Result<Morphism<Scalar>, DslError> {
        let (name_tok, name) = self.ident()?;
        if doc.morphism(&name).is_some() {
            return Err(Self::err_at(name_tok, format!("morphism `{name}` defined twice")));
        }
        self.expect_sym(':')?;
        let domain = self.algebra_name_expr(doc)?;
        self.expect_arrow()?;
        let codomain = self.algebra_name_expr(doc)?;
        self.expect_sym('{')?;
        let mut images = BTreeMap::new();
        while !self.is_sym('}') {
            let (t, id) = self.ident()?;
            let g = domain
                .find(&id, 0)
                .ok_or_else(|| Self::err_at(t, format!("unknown generator `{id}` in `{}`", domain.name())))?;
            if domain.generator(g).starred {
                return Err(Self::err_at(t, "images of starred generators follow from the involution"));
            }
            self.expect_arrow()?;
            let img = self.poly(&codomain, 0)?;
            self.expect_sym(';')?;
            if images.insert(g, img).is_some() {
                return Err(Self::err_at(t, format!("image of `{id}` given twice")));
            }
        }
        self.bump();
        Morphism::new(name, domain, codomain, images).map_err(|e| Self::err_at(name_tok, e.to_string()))
    }

    fn document(&mut self) -> Result<Document, DslError> {
        let mut doc = Document::default();
        loop {
            let t = self.peek();
            match &t.tok {
                Tok::Eof => return Ok(doc),
                Tok::Ident(kw) if kw == "algebra" => {
                    self.bump();
                    let a = self.algebra(&doc)?;
                    doc.algebras.push(a);
                }
                Tok::Ident(kw) if kw == "morphism" => {
                    self.bump();
                    let m = self.morphism(&doc)?;
                    doc.morphisms.push(m);
                }
                _ => {
                    return Err(Self::err_at(
                        t,
                        format!("expected `algebra` or `morphism`, found {}", Self::describe(t)),
                    ))
                }
            }
        }
    }
}

/// Parses a `.qalg` document.
pub fn parse(src: &str) -> Result<Document, DslError> {
    let toks = lex(src)?;
    Parser { toks: &toks, pos: 0 }.document()
}

/// Parses a polynomial over `pres` (not normalized).
pub fn parse_poly(expr: &str, pres: &Presentation<Scalar>) -> Result<Poly, DslError> {
    let toks = lex(expr)?;
    let mut p = Parser { toks: &toks, pos: 0 };
    let out = p.poly(pres, 0)?;
    let t = p.peek();
    if t.tok != Tok::Eof {
        return Err(Parser::err_at(t, format!("unexpected {} after expression", Parser::describe(t))));
    }
    Ok(out)
}
