use super::poly::{GenId, NcPolynomial, Word};
use super::presentation::{Generator, Presentation, RewriteRule, TermOrder};
use crate::scalars::Coefficient;

impl<C: Coefficient> Presentation<C> {
    /// Factor names as they appear in a tensor product.
    fn factor_names(&self) -> Vec<String> {
        if self.factors().is_empty() {
            vec![self.name().to_string()]
        } else {
            self.factors().to_vec()
        }
    }
}

/// Tensor product of two presentations.
///
/// Generators of `right` are renumbered after those of `left` and moved to
/// legs following the legs of `left`. Relations inside each leg are
/// inherited; letters of different legs commute with factor 1, oriented so
/// that lower legs sort first. The product is associative on the nose:
/// `tensor(tensor(a, b), c)` and `tensor(a, tensor(b, c))` have identical
/// generators and rule sets.
pub fn tensor<C: Coefficient>(left: &Presentation<C>, right: &Presentation<C>) -> Presentation<C> {
    let offset = left.num_generators();
    let leg_offset = left.legs();
    let mut generators: Vec<Generator> = left.generators().to_vec();
    generators.extend(right.generators().iter().map(|g| Generator {
        name: g.name.clone(),
        star: g.star + offset,
        leg: g.leg + leg_offset,
        starred: g.starred,
        weight: g.weight.clone(),
    }));
    let heavy = (0..offset)
        .map(|g| left.is_heavy(g))
        .chain((0..right.num_generators()).map(|g| right.is_heavy(g)))
        .collect();
    let shift = |g: GenId| g + offset;
    let mut rules: Vec<RewriteRule<C>> = Vec::new();
    let mut all_rules: Vec<RewriteRule<C>> = left.rules().to_vec();
    all_rules.extend(right.rules().iter().map(|r| RewriteRule {
        lhs: r.lhs.map(shift),
        rhs: r.rhs.map_words(|w| w.map(shift)),
    }));
    // Within-leg rules grouped by leg, then every cross-leg swap regenerated:
    // this keeps the product associative on the nose.
    let leg_of = |r: &RewriteRule<C>| {
        let mut legs = r.lhs.letters().iter().map(|&g| generators[g].leg);
        let first = legs.next()?;
        legs.all(|l| l == first).then_some(first)
    };
    let total_legs = leg_offset + right.legs();
    for leg in 0..total_legs {
        rules.extend(all_rules.iter().filter(|r| leg_of(r) == Some(leg)).cloned());
    }
    for (hi, gh) in generators.iter().enumerate() {
        for (lo, gl) in generators.iter().enumerate() {
            if gh.leg > gl.leg {
                rules.push(RewriteRule::new(
                    Word(vec![hi, lo]),
                    NcPolynomial::word(Word(vec![lo, hi])),
                ));
            }
        }
    }
    let mut factors = left.factor_names();
    factors.extend(right.factor_names());
    let name = factors.join("*");
    let mut out = Presentation::from_generators(name, generators)
        .expect("tensor of valid presentations has a valid star structure");
    out.set_parts(TermOrder::new(heavy), rules, total_legs, factors);
    out.set_star_closed(left.is_star_closed() && right.is_star_closed());
    out
}

/// Re-indexes a polynomial of `factor` into leg position `first_gen` of a
/// tensor product (generator `g` becomes `g + first_gen`).
pub fn embed<C: Coefficient>(p: &NcPolynomial<C>, first_gen: GenId) -> NcPolynomial<C> {
    p.map_words(|w| w.map(|g| g + first_gen))
}
