use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{GenId, NcPolynomial, Word};
use super::NcError;
use crate::scalars::{CoeffRender, Coefficient};

/// Default bound on the number of single-step reductions in one normalization.
pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

/// A generator of a presented *-algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    /// Display name; the starred member of a pair carries a trailing `'`.
    pub name: String,
    /// Index of the star partner (itself for self-adjoint generators).
    pub star: GenId,
    /// Tensor factor this generator lives in.
    pub leg: usize,
    /// True for the primed member of a non-self-adjoint pair.
    pub starred: bool,
    /// Holomorphic/antiholomorphic exponent pairs under the scaling action.
    pub weight: Option<Vec<i64>>,
}

impl Generator {
    pub fn is_self_adjoint(&self, id: GenId) -> bool {
        self.star == id
    }
}

/// Swaps every (holomorphic, antiholomorphic) pair; this is the weight of the
/// adjoint.
pub fn conjugate_weight(w: &[i64]) -> Vec<i64> {
    w.chunks(2)
        .flat_map(|c| if c.len() == 2 { vec![c[1], c[0]] } else { c.to_vec() })
        .collect()
}

/// Oriented relation `lhs → rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule<C> {
    pub lhs: Word,
    pub rhs: NcPolynomial<C>,
}

impl<C: Coefficient> RewriteRule<C> {
    pub fn new(lhs: Word, rhs: NcPolynomial<C>) -> Self {
        Self { lhs, rhs }
    }

    /// `lhs − rhs`, the relation this rule encodes.
    pub fn relation(&self) -> NcPolynomial<C> {
        NcPolynomial::word(self.lhs.clone()) - self.rhs.clone()
    }
}

/// Comparison key: (heavy-degree, inversions, length, lexicographic).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderKey {
    pub heavy: usize,
    pub inversions: usize,
    pub len: usize,
    pub word: Word,
}

/// Well-order on words used to orient relations.
///
/// Heavy letters are counted first, so rules that trade a product of heavy
/// letters for lighter ones (the determinant relation) decrease. Inversions
/// are counted against the declared generator order, so commutation rules
/// that sort letters decrease.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    heavy: Vec<bool>,
}

impl TermOrder {
    pub fn new(heavy: Vec<bool>) -> Self {
        Self { heavy }
    }

    pub fn is_heavy(&self, g: GenId) -> bool {
        self.heavy.get(g).copied().unwrap_or(false)
    }

    pub fn key(&self, w: &Word) -> OrderKey {
        let letters = w.letters();
        let heavy = letters.iter().filter(|&&g| self.is_heavy(g)).count();
        let mut inversions = 0;
        for i in 0..letters.len() {
            for j in i + 1..letters.len() {
                if letters[i] > letters[j] {
                    inversions += 1;
                }
            }
        }
        OrderKey {
            heavy,
            inversions,
            len: letters.len(),
            word: w.clone(),
        }
    }

    pub fn cmp(&self, a: &Word, b: &Word) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    /// Largest word of `p` in this order.
    pub fn leading<'a, C>(&self, p: &'a NcPolynomial<C>) -> Option<(&'a Word, &'a C)>
    where
        C: Coefficient,
    {
        p.terms().max_by(|(a, _), (b, _)| self.cmp(a, b))
    }
}

/// How `normalize` picks the next redex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Leftmost redex of the lexicographically smallest pending word.
    Leftmost,
    /// Uniformly random pending word and redex, from a seeded generator.
    Random(u64),
}

/// Generators, oriented rules and a term order.
#[derive(Clone, Debug)]
pub struct Presentation<C> {
    name: String,
    generators: Vec<Generator>,
    rules: Vec<RewriteRule<C>>,
    order: TermOrder,
    legs: usize,
    factors: Vec<String>,
    star_closed: bool,
    step_limit: usize,
    pair_index: HashMap<(GenId, GenId), usize>,
    other_index: HashMap<GenId, Vec<usize>>,
}

impl<C: Coefficient> PartialEq for Presentation<C> {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.generators == other.generators
            && self.rules == other.rules
            && self.order == other.order
            && self.legs == other.legs
            && self.factors == other.factors
    }
}

/// Incremental construction of a [`Presentation`].
///
/// Unstarred and self-adjoint generators are numbered in declaration order;
/// the starred partners follow, in the same order.
#[derive(Clone, Debug, Default)]
pub struct PresentationBuilder {
    name: String,
    decls: Vec<(String, bool)>,
    heavy: Vec<String>,
    weights: Vec<(String, Vec<i64>)>,
}

impl PresentationBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Default::default()
        }
    }

    /// Declares a generator together with its (distinct) adjoint `name'`.
    pub fn generator(mut self, name: &str) -> Self {
        self.decls.push((name.to_string(), false));
        self
    }

    pub fn self_adjoint(mut self, name: &str) -> Self {
        self.decls.push((name.to_string(), true));
        self
    }

    /// Marks a generator as heavy for the term order. Accepts primed names.
    pub fn heavy(mut self, name: &str) -> Self {
        self.heavy.push(name.to_string());
        self
    }

    pub fn weight(mut self, name: &str, weight: Vec<i64>) -> Self {
        self.weights.push((name.to_string(), weight));
        self
    }

    pub fn build<C: Coefficient>(self) -> Result<Presentation<C>, NcError> {
        let mut generators = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (name, _) in &self.decls {
            if !seen.insert(name.clone()) {
                return Err(NcError::DuplicateGenerator(name.clone()));
            }
        }
        let starred_count = self.decls.iter().filter(|(_, sa)| !sa).count();
        let unstarred = self.decls.len();
        let mut next_star = unstarred;
        let mut partner_of = Vec::new();
        for (i, (name, self_adjoint)) in self.decls.iter().enumerate() {
            let star = if *self_adjoint {
                i
            } else {
                next_star += 1;
                next_star - 1
            };
            partner_of.push(star);
            generators.push(Generator {
                name: name.clone(),
                star,
                leg: 0,
                starred: false,
                weight: None,
            });
        }
        for (i, (name, self_adjoint)) in self.decls.iter().enumerate() {
            if !self_adjoint {
                generators.push(Generator {
                    name: format!("{name}'"),
                    star: i,
                    leg: 0,
                    starred: true,
                    weight: None,
                });
            }
        }
        debug_assert_eq!(generators.len(), unstarred + starred_count);
        let mut pres = Presentation::from_generators(self.name, generators)?;
        for (name, w) in self.weights {
            pres.set_weight(&name, w)?;
        }
        for name in self.heavy {
            let g = pres.find(&name, 0).ok_or(NcError::UnknownGenerator(name))?;
            pres.order.heavy[g] = true;
        }
        Ok(pres)
    }
}

impl<C: Coefficient> Presentation<C> {
    pub fn builder(name: impl Into<String>) -> PresentationBuilder {
        PresentationBuilder::new(name)
    }

    /// Presentation with the given generators and no rules. Star partners
    /// must form an involution.
    pub fn from_generators(
        name: impl Into<String>,
        generators: Vec<Generator>,
    ) -> Result<Self, NcError> {
        let n = generators.len();
        for (i, g) in generators.iter().enumerate() {
            if g.star >= n || generators[g.star].star != i {
                return Err(NcError::InvalidStar(g.name.clone()));
            }
        }
        let legs = generators.iter().map(|g| g.leg + 1).max().unwrap_or(1);
        Ok(Self {
            name: name.into(),
            order: TermOrder::new(vec![false; n]),
            generators,
            rules: Vec::new(),
            legs,
            factors: Vec::new(),
            star_closed: true,
            step_limit: DEFAULT_STEP_LIMIT,
            pair_index: HashMap::new(),
            other_index: HashMap::new(),
        })
    }

    pub(crate) fn set_parts(
        &mut self,
        order: TermOrder,
        rules: Vec<RewriteRule<C>>,
        legs: usize,
        factors: Vec<String>,
    ) {
        self.order = order;
        self.legs = legs;
        self.factors = factors;
        self.rules.clear();
        self.pair_index.clear();
        self.other_index.clear();
        for r in rules {
            self.push_rule_unchecked(r);
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, g: GenId) -> &Generator {
        &self.generators[g]
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn rules(&self) -> &[RewriteRule<C>] {
        &self.rules
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    /// Number of tensor legs (1 for an untensored algebra).
    pub fn legs(&self) -> usize {
        self.legs
    }

    /// Names of the tensor factors, empty for an untensored algebra.
    pub fn factors(&self) -> &[String] {
        &self.factors
    }

    pub fn is_star_closed(&self) -> bool {
        self.star_closed
    }

    pub(crate) fn set_star_closed(&mut self, flag: bool) {
        self.star_closed = flag;
    }

    pub fn step_limit(&self) -> usize {
        self.step_limit
    }

    pub fn set_step_limit(&mut self, limit: usize) {
        self.step_limit = limit;
    }

    pub fn find(&self, name: &str, leg: usize) -> Option<GenId> {
        self.generators
            .iter()
            .position(|g| g.name == name && g.leg == leg)
    }

    pub fn star_of(&self, g: GenId) -> GenId {
        self.generators[g].star
    }

    pub fn is_heavy(&self, g: GenId) -> bool {
        self.order.is_heavy(g)
    }

    pub(crate) fn set_weight(&mut self, name: &str, weight: Vec<i64>) -> Result<(), NcError> {
        let g = self
            .find(name, 0)
            .ok_or_else(|| NcError::UnknownGenerator(name.to_string()))?;
        if !weight.len().is_multiple_of(2) {
            return Err(NcError::InvalidWeight(name.to_string()));
        }
        let partner = self.generators[g].star;
        let conj = conjugate_weight(&weight);
        if partner == g && conj != weight {
            return Err(NcError::InvalidWeight(name.to_string()));
        }
        self.generators[partner].weight = Some(conj);
        self.generators[g].weight = Some(weight);
        Ok(())
    }

    /// Appends a rule without checking that it decreases the term order.
    /// Use [`Presentation::check_termination`] to audit the result.
    pub fn push_rule_unchecked(&mut self, rule: RewriteRule<C>) -> usize {
        let idx = self.rules.len();
        let l = rule.lhs.letters();
        if l.len() == 2 {
            self.pair_index.entry((l[0], l[1])).or_insert(idx);
        } else if let Some(&first) = l.first() {
            self.other_index.entry(first).or_default().push(idx);
        }
        self.rules.push(rule);
        self.star_closed = false;
        idx
    }

    /// Appends a rule after checking that every word of the right-hand side
    /// is strictly smaller than the left-hand side.
    pub fn push_rule(&mut self, rule: RewriteRule<C>) -> Result<usize, NcError>
    where
        C: CoeffRender,
    {
        if !self.rule_decreases(&rule) {
            return Err(NcError::NotDecreasing(self.render_rule(&rule)));
        }
        Ok(self.push_rule_unchecked(rule))
    }

    pub fn rule_decreases(&self, rule: &RewriteRule<C>) -> bool {
        !rule.lhs.is_empty()
            && rule
                .rhs
                .terms()
                .all(|(w, _)| self.order.cmp(w, &rule.lhs) == Ordering::Less)
    }

    /// Orients the relation `p = 0` by solving for its leading word.
    pub fn orient(&self, p: &NcPolynomial<C>) -> Result<RewriteRule<C>, NcError>
    where
        C: CoeffRender,
    {
        let (lead, c) = self.order.leading(p).ok_or(NcError::TrivialRelation)?;
        if lead.is_empty() {
            return Err(NcError::Unorientable(format!(
                "{} = 0 (inconsistent: constant leading term)",
                self.render(p)
            )));
        }
        let inv = c
            .unit_inverse()
            .ok_or_else(|| NcError::Unorientable(format!("{} = 0", self.render(p))))?;
        let mut rest = p.clone();
        rest.add_term(lead.clone(), -c.clone());
        Ok(RewriteRule::new(lead.clone(), -rest.scale(&inv)))
    }

    /// Orients `p = 0` and appends the rule.
    pub fn add_relation(&mut self, p: &NcPolynomial<C>) -> Result<usize, NcError>
    where
        C: CoeffRender,
    {
        let rule = self.orient(p)?;
        Ok(self.push_rule_unchecked(rule))
    }

    /// All `(position, rule)` redexes in `w`.
    pub fn redexes(&self, w: &Word) -> Vec<(usize, usize)> {
        let l = w.letters();
        let mut out = Vec::new();
        for i in 0..l.len() {
            if i + 1 < l.len() {
                if let Some(&r) = self.pair_index.get(&(l[i], l[i + 1])) {
                    out.push((i, r));
                }
            }
            if let Some(rs) = self.other_index.get(&l[i]) {
                for &r in rs {
                    let lhs = self.rules[r].lhs.letters();
                    if l[i..].starts_with(lhs) {
                        out.push((i, r));
                    }
                }
            }
        }
        out
    }

    fn first_redex(&self, w: &Word) -> Option<(usize, usize)> {
        let l = w.letters();
        for i in 0..l.len() {
            if i + 1 < l.len() {
                if let Some(&r) = self.pair_index.get(&(l[i], l[i + 1])) {
                    return Some((i, r));
                }
            }
            if let Some(rs) = self.other_index.get(&l[i]) {
                for &r in rs {
                    if l[i..].starts_with(self.rules[r].lhs.letters()) {
                        return Some((i, r));
                    }
                }
            }
        }
        None
    }

    pub fn is_normal(&self, w: &Word) -> bool {
        self.first_redex(w).is_none()
    }

    /// Normal form under the rule set, leftmost strategy.
    pub fn normalize(&self, p: &NcPolynomial<C>) -> Result<NcPolynomial<C>, NcError> {
        self.normalize_with(p, Strategy::Leftmost)
    }

    pub fn normalize_with(
        &self,
        p: &NcPolynomial<C>,
        strategy: Strategy,
    ) -> Result<NcPolynomial<C>, NcError> {
        let mut rng = match strategy {
            Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            Strategy::Leftmost => None,
        };
        let mut pending: BTreeMap<Word, C> = BTreeMap::new();
        for (w, c) in p.terms() {
            pending.insert(w.clone(), c.clone());
        }
        let mut done = NcPolynomial::zero();
        let mut steps = 0usize;
        loop {
            let (w, c) = match rng.as_mut() {
                None => match pending.pop_first() {
                    Some(x) => x,
                    None => break,
                },
                Some(rng) => {
                    if pending.is_empty() {
                        break;
                    }
                    let k = rng.gen_range(0..pending.len());
                    let key = pending.keys().nth(k).cloned().unwrap();
                    let c = pending.remove(&key).unwrap();
                    (key, c)
                }
            };
            let redex = match rng.as_mut() {
                None => self.first_redex(&w),
                Some(rng) => {
                    let all = self.redexes(&w);
                    if all.is_empty() {
                        None
                    } else {
                        Some(all[rng.gen_range(0..all.len())])
                    }
                }
            };
            let Some((pos, r)) = redex else {
                done.add_term(w, c);
                continue;
            };
            steps += 1;
            if steps > self.step_limit {
                return Err(NcError::StepLimit(self.step_limit));
            }
            let rule = &self.rules[r];
            for (rw, rc) in rule.rhs.terms() {
                let nw = w.splice(pos, rule.lhs.len(), rw.letters());
                let nc = c.clone() * rc.clone();
                add_pending(&mut pending, nw, nc);
            }
        }
        Ok(done)
    }

    /// Anti-multiplicative involution: reverses words, maps letters to their
    /// partners and conjugates coefficients. No reduction is applied.
    pub fn star(&self, p: &NcPolynomial<C>) -> NcPolynomial<C> {
        NcPolynomial::from_terms(p.terms().map(|(w, c)| {
            let letters = w.letters().iter().rev().map(|&g| self.generators[g].star);
            (Word(letters.collect()), c.star())
        }))
    }

    /// Normal form of `star(p)`.
    pub fn star_normalized(&self, p: &NcPolynomial<C>) -> Result<NcPolynomial<C>, NcError> {
        self.normalize(&self.star(p))
    }

    /// Generator ids grouped by leg, in declared order.
    pub fn generators_on_leg(&self, leg: usize) -> impl Iterator<Item = GenId> + '_ {
        self.generators
            .iter()
            .enumerate()
            .filter(move |(_, g)| g.leg == leg)
            .map(|(i, _)| i)
    }

    /// Unstarred generators (self-adjoint ones included): the generators on
    /// which a morphism is specified.
    pub fn primary_generators(&self) -> impl Iterator<Item = GenId> + '_ {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.starred)
            .map(|(i, _)| i)
    }

    /// Same generator list (names, legs, partners) as `other`.
    pub fn same_generators(&self, other: &Self) -> bool {
        self.generators.len() == other.generators.len()
            && self
                .generators
                .iter()
                .zip(&other.generators)
                .all(|(a, b)| a.name == b.name && a.leg == b.leg && a.star == b.star)
    }
}

fn add_pending<C: Coefficient>(pending: &mut BTreeMap<Word, C>, w: Word, c: C) {
    if c.is_zero() {
        return;
    }
    match pending.remove(&w) {
        Some(old) => {
            let sum = old + c;
            if !sum.is_zero() {
                pending.insert(w, sum);
            }
        }
        None => {
            pending.insert(w, c);
        }
    }
}

impl<C: CoeffRender> Presentation<C> {
    /// Space-separated letters; tensor words group letters by leg with ` | `
    /// between legs and `1` for an empty leg.
    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        if self.legs <= 1 {
            return w
                .letters()
                .iter()
                .map(|&g| self.generators[g].name.as_str())
                .collect::<Vec<_>>()
                .join(" ");
        }
        let mut legs: Vec<Vec<&str>> = vec![Vec::new(); self.legs];
        for &g in w.letters() {
            let gen = &self.generators[g];
            legs[gen.leg].push(gen.name.as_str());
        }
        legs.iter()
            .map(|l| if l.is_empty() { "1".to_string() } else { l.join(" ") })
            .collect::<Vec<_>>()
            .join(" | ")
    }

    fn render_term(&self, w: &Word, c: &C, out: &mut String) {
        if w.is_empty() {
            let _ = write!(out, "{c}");
        } else if c.is_one() {
            out.push_str(&self.render_word(w));
        } else if (-c.clone()).is_one() {
            out.push('-');
            out.push_str(&self.render_word(w));
        } else if c.is_compound() {
            let _ = write!(out, "({c}) {}", self.render_word(w));
        } else {
            let _ = write!(out, "{c} {}", self.render_word(w));
        }
    }

    /// Polynomial in the DSL syntax; terms by increasing length, then
    /// lexicographically by generator order.
    pub fn render(&self, p: &NcPolynomial<C>) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = p.terms().collect();
        terms.sort_by(|(a, _), (b, _)| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut out = String::new();
        for (i, (w, c)) in terms.into_iter().enumerate() {
            if c.is_negative() {
                out.push_str(if i == 0 { "-" } else { " - " });
                self.render_term(w, &-c.clone(), &mut out);
            } else {
                if i > 0 {
                    out.push_str(" + ");
                }
                self.render_term(w, c, &mut out);
            }
        }
        out
    }

    pub fn render_rule(&self, r: &RewriteRule<C>) -> String {
        format!("{} -> {}", self.render_word(&r.lhs), self.render(&r.rhs))
    }
}
