//! Generator-defined *-homomorphisms between presented algebras and the
//! identities checked on them: relation preservation, star equivariance,
//! commuting squares (coassociativity, coaction identity) and comparison
//! with the undeformed morphism at `q = 1`.
//!
//! A [`Morphism`] stores images of the unstarred generators only. Images of
//! starred generators are the adjoints of their partners' images, so a
//! morphism can never be specified inconsistently with the involution.
//! Equality of images is decided through normal forms; this is sound because
//! the builtin codomains are certified terminating and locally confluent.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ncalg::{embed, tensor, GenId, NcError, NcPolynomial, Presentation, Word};
use crate::scalars::{CoeffRender, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoactError {
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error("morphism `{morphism}` gives no image for generator `{generator}`")]
    MissingImage { morphism: String, generator: String },
    #[error("morphism `{morphism}` assigns an image to starred generator `{generator}`; starred images follow from the involution")]
    StarredImage { morphism: String, generator: String },
    #[error("presentations `{left}` and `{right}` have different generators")]
    Mismatch { left: String, right: String },
}

/// Which tensor leg a morphism acts on in [`leg_extend`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `m ⊗ id`
    Left,
    /// `id ⊗ m`
    Right,
}

/// A *-homomorphism given on generators.
#[derive(Clone, Debug)]
pub struct Morphism<C> {
    name: String,
    domain: Presentation<C>,
    codomain: Presentation<C>,
    /// Normalized image of every domain generator, starred ones included.
    images: Vec<NcPolynomial<C>>,
}

impl<C: CoeffRender> PartialEq for Morphism<C> {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.domain == other.domain
            && self.codomain == other.codomain
            && self.images == other.images
    }
}

/// One generator- or relation-level comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    /// What was compared (a generator name or a rendered rule).
    pub label: String,
    /// Rendered normal form of the difference; `"0"` on success.
    pub residual: String,
    pub is_zero: bool,
}

/// Outcome of an exact symbolic check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicReport {
    pub check: String,
    pub items: Vec<Residual>,
}

impl SymbolicReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|r| r.is_zero)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.items.iter().filter(|r| !r.is_zero)
    }
}

fn residual<C: CoeffRender>(
    pres: &Presentation<C>,
    label: String,
    diff: &NcPolynomial<C>,
) -> Residual {
    Residual {
        label,
        residual: pres.render(diff),
        is_zero: diff.is_zero(),
    }
}

impl<C: CoeffRender> Morphism<C> {
    /// Builds a morphism from images of the unstarred (including
    /// self-adjoint) generators of `domain`.
    pub fn new(
        name: impl Into<String>,
        domain: Presentation<C>,
        codomain: Presentation<C>,
        primary_images: BTreeMap<GenId, NcPolynomial<C>>,
    ) -> Result<Self, CoactError> {
        let name = name.into();
        let mut images: Vec<Option<NcPolynomial<C>>> = vec![None; domain.num_generators()];
        for (g, img) in primary_images {
            let gen = domain.generator(g);
            if gen.starred {
                return Err(CoactError::StarredImage {
                    morphism: name,
                    generator: gen.name.clone(),
                });
            }
            images[g] = Some(codomain.normalize(&img)?);
        }
        for g in domain.primary_generators().collect::<Vec<_>>() {
            let Some(img) = images[g].clone() else {
                return Err(CoactError::MissingImage {
                    morphism: name,
                    generator: domain.generator(g).name.clone(),
                });
            };
            let partner = domain.star_of(g);
            if partner != g {
                images[partner] = Some(codomain.star_normalized(&img)?);
            }
        }
        let images = images.into_iter().map(|i| i.expect("every generator assigned")).collect();
        Ok(Self {
            name,
            domain,
            codomain,
            images,
        })
    }

    /// The identity morphism of `pres`.
    pub fn identity(pres: &Presentation<C>) -> Self {
        let images = (0..pres.num_generators()).map(NcPolynomial::letter).collect();
        Self {
            name: "id".to_string(),
            domain: pres.clone(),
            codomain: pres.clone(),
            images,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn domain(&self) -> &Presentation<C> {
        &self.domain
    }

    pub fn codomain(&self) -> &Presentation<C> {
        &self.codomain
    }

    /// Normalized image of a single generator.
    pub fn image(&self, g: GenId) -> &NcPolynomial<C> {
        &self.images[g]
    }

    /// Linear, multiplicative extension of the generator images, normalized
    /// in the codomain.
    pub fn apply(&self, p: &NcPolynomial<C>) -> Result<NcPolynomial<C>, CoactError> {
        let mut out = NcPolynomial::zero();
        for (w, c) in p.terms() {
            let mut acc = NcPolynomial::constant(c.clone());
            for &g in w.letters() {
                acc = self.codomain.normalize(&(&acc * &self.images[g]))?;
            }
            out = out + acc;
        }
        Ok(out)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Morphism<C>) -> Result<Morphism<C>, CoactError> {
        if !self.codomain.same_generators(&next.domain) {
            return Err(CoactError::Mismatch {
                left: self.codomain.name().to_string(),
                right: next.domain.name().to_string(),
            });
        }
        let images = self
            .images
            .iter()
            .map(|img| next.apply(img))
            .collect::<Result<_, _>>()?;
        Ok(Morphism {
            name: format!("{}.{}", next.name, self.name),
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            images,
        })
    }

    /// For every rule `lhs -> rhs` of the domain, the normal form of
    /// `m(lhs) - m(rhs)` in the codomain.
    pub fn check_relations_preserved(&self) -> Result<SymbolicReport, CoactError> {
        let mut items = Vec::new();
        for rule in self.domain.rules() {
            let diff = self.apply(&rule.relation())?;
            items.push(residual(&self.codomain, self.domain.render_rule(rule), &diff));
        }
        Ok(SymbolicReport {
            check: format!("relations preserved by {}", self.name),
            items,
        })
    }

    /// `m(g*) = m(g)*` for every generator `g`.
    pub fn check_star_equivariance(&self) -> Result<SymbolicReport, CoactError> {
        let mut items = Vec::new();
        for g in 0..self.domain.num_generators() {
            let lhs = self.apply(&NcPolynomial::letter(self.domain.star_of(g)))?;
            let rhs = self.codomain.star_normalized(&self.images[g])?;
            let diff = lhs - rhs;
            items.push(residual(&self.codomain, self.domain.generator(g).name.clone(), &diff));
        }
        Ok(SymbolicReport {
            check: format!("star equivariance of {}", self.name),
            items,
        })
    }
}

/// Extends `m: A -> B` to `A ⊗ other -> B ⊗ other` (`Side::Left`) or
/// `other ⊗ A -> other ⊗ B` (`Side::Right`), acting as the identity on the
/// `other` factor.
pub fn leg_extend<C: CoeffRender>(
    m: &Morphism<C>,
    side: Side,
    other: &Presentation<C>,
) -> Result<Morphism<C>, CoactError> {
    let (domain, codomain) = match side {
        Side::Left => (tensor(&m.domain, other), tensor(&m.codomain, other)),
        Side::Right => (tensor(other, &m.domain), tensor(other, &m.codomain)),
    };
    let na = m.domain.num_generators();
    let nb = m.codomain.num_generators();
    let no = other.num_generators();
    let images = match side {
        Side::Left => m
            .images
            .iter()
            .cloned()
            .chain((0..no).map(|g| NcPolynomial::letter(nb + g)))
            .collect(),
        Side::Right => (0..no)
            .map(NcPolynomial::letter)
            .chain((0..na).map(|g| embed(&m.images[g], no)))
            .collect(),
    };
    let name = match side {
        Side::Left => format!("({} x id)", m.name),
        Side::Right => format!("(id x {})", m.name),
    };
    // Images of a normalized polynomial stay normal after the shift: the
    // tensor inherits each factor's rules leg by leg.
    Ok(Morphism {
        name,
        domain,
        codomain,
        images,
    })
}

/// Compares two morphisms with the same domain and codomain on the listed
/// domain generators (all generators when `gens` is empty).
pub fn check_commuting_square<C: CoeffRender>(
    path_a: &Morphism<C>,
    path_b: &Morphism<C>,
    gens: &[GenId],
) -> Result<SymbolicReport, CoactError> {
    for (l, r) in [
        (&path_a.domain, &path_b.domain),
        (&path_a.codomain, &path_b.codomain),
    ] {
        if !l.same_generators(r) {
            return Err(CoactError::Mismatch {
                left: l.name().to_string(),
                right: r.name().to_string(),
            });
        }
    }
    let all: Vec<GenId>;
    let gens = if gens.is_empty() {
        all = (0..path_a.domain.num_generators()).collect();
        &all[..]
    } else {
        gens
    };
    let mut items = Vec::new();
    for &g in gens {
        let diff = path_a.codomain.normalize(&(&path_a.images[g] - &path_b.images[g]))?;
        items.push(residual(
            &path_a.codomain,
            path_a.domain.generator(g).name.clone(),
            &diff,
        ));
    }
    Ok(SymbolicReport {
        check: format!("{} = {}", path_a.name, path_b.name),
        items,
    })
}

/// `(Δ ⊗ id)Δ = (id ⊗ Δ)Δ` on the unstarred generators of a
/// comultiplication `Δ: A -> A ⊗ A`.
pub fn check_coassociativity<C: CoeffRender>(
    delta: &Morphism<C>,
) -> Result<SymbolicReport, CoactError> {
    let a = &delta.domain;
    let left = delta.then(&leg_extend(delta, Side::Left, a)?)?;
    let right = delta.then(&leg_extend(delta, Side::Right, a)?)?;
    let gens: Vec<GenId> = a.primary_generators().collect();
    let mut report = check_commuting_square(&left, &right, &gens)?;
    report.check = format!("coassociativity of {}", delta.name);
    Ok(report)
}

/// `(Δ_B ⊗ id)Δ_B = (id ⊗ Δ)Δ_B` on the unstarred generators of a right
/// coaction `Δ_B: B -> B ⊗ A` of a comultiplication `Δ: A -> A ⊗ A`.
pub fn check_coaction_identity<C: CoeffRender>(
    coaction: &Morphism<C>,
    delta: &Morphism<C>,
) -> Result<SymbolicReport, CoactError> {
    let b = &coaction.domain;
    let a = &delta.domain;
    let left = coaction.then(&leg_extend(coaction, Side::Left, a)?)?;
    let right = coaction.then(&leg_extend(delta, Side::Right, b)?)?;
    let gens: Vec<GenId> = b.primary_generators().collect();
    let mut report = check_commuting_square(&left, &right, &gens)?;
    report.check = format!("coaction identity for {} over {}", coaction.name, delta.name);
    Ok(report)
}

/// Carries a word of `from` to `to` by matching generator name and leg.
fn transport_word(from: &Presentation<Scalar>, to: &Presentation<Scalar>, w: &Word) -> Result<Word, CoactError> {
    w.letters()
        .iter()
        .map(|&g| {
            let gen = from.generator(g);
            to.find(&gen.name, gen.leg).ok_or_else(|| {
                CoactError::Nc(NcError::UnknownGenerator(format!("{} (leg {})", gen.name, gen.leg)))
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Word)
}

/// Specializes `q = 1` in every image of `m`, carries the result into the
/// codomain of `reference` (generators matched by name and leg), normalizes
/// there and compares with the reference images.
pub fn classical_limit_compare(
    m: &Morphism<Scalar>,
    reference: &Morphism<Scalar>,
) -> Result<SymbolicReport, CoactError> {
    let target = &reference.codomain;
    let mut items = Vec::new();
    for g in m.domain.primary_generators() {
        let gen = m.domain.generator(g);
        let rg = reference.domain.find(&gen.name, gen.leg).ok_or_else(|| {
            CoactError::Nc(NcError::UnknownGenerator(gen.name.clone()))
        })?;
        let mut moved = NcPolynomial::zero();
        for (w, c) in m.images[g].terms() {
            moved.add_term(transport_word(&m.codomain, target, w)?, c.at_unit());
        }
        let moved = target.normalize(&moved)?;
        let diff = target.normalize(&(moved - reference.images[rg].clone()))?;
        items.push(residual(target, gen.name.clone(), &diff));
    }
    Ok(SymbolicReport {
        check: format!("{} at q = 1 against {}", m.name, reference.name),
        items,
    })
}
