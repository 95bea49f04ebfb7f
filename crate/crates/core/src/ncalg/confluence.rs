//! Termination audit, star closure, critical pairs and completion.

use super::poly::{NcPolynomial, Word};
use super::presentation::{Presentation, RewriteRule};
use super::NcError;
use crate::scalars::CoeffRender;

/// Rules whose right-hand side is not strictly below the left-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminationReport {
    pub rules_checked: usize,
    /// `(rule index, rendered rule)` for every violation.
    pub violations: Vec<(usize, String)>,
}

impl TerminationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An overlap of two left-hand sides whose two one-step reductions were
/// carried to normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair<C> {
    pub rules: (usize, usize),
    pub overlap: Word,
    pub left: NcPolynomial<C>,
    pub right: NcPolynomial<C>,
}

impl<C: CoeffRender> CriticalPair<C> {
    pub fn is_resolved(&self) -> bool {
        self.left == self.right
    }

    pub fn difference(&self) -> NcPolynomial<C> {
        &self.left - &self.right
    }
}

/// Outcome of [`Presentation::complete`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionReport {
    /// Rendered rules added, in order.
    pub added: Vec<String>,
    pub locally_confluent: bool,
    /// True when `max_new_rules` stopped the procedure early.
    pub limit_reached: bool,
}

impl<C: CoeffRender> Presentation<C> {
    /// Confirms every rule strictly decreases the term order.
    pub fn check_termination(&self) -> TerminationReport {
        let violations = self
            .rules()
            .iter()
            .enumerate()
            .filter(|(_, r)| !self.rule_decreases(r))
            .map(|(i, r)| (i, self.render_rule(r)))
            .collect();
        TerminationReport {
            rules_checked: self.rules().len(),
            violations,
        }
    }

    /// Relations whose adjoint does not yet reduce to zero.
    fn star_obligations(&self) -> Result<Vec<NcPolynomial<C>>, NcError> {
        let mut out = Vec::new();
        for r in self.rules() {
            let image = self.normalize(&self.star(&r.relation()))?;
            if !image.is_zero() {
                out.push(image);
            }
        }
        Ok(out)
    }

    /// True if the adjoint of every relation normalizes to zero.
    pub fn verify_star_closed(&self) -> Result<bool, NcError> {
        Ok(self.star_obligations()?.is_empty())
    }

    /// Adds oriented adjoints of the relations until the rule set is stable
    /// under the involution.
    pub fn star_closure(&self) -> Result<Self, NcError> {
        let mut out = self.clone();
        loop {
            let pending = out.star_obligations()?;
            if pending.is_empty() {
                break;
            }
            for p in pending {
                // An earlier addition in this pass may already cover it.
                let residual = out.normalize(&p)?;
                if residual.is_zero() {
                    continue;
                }
                let rule = out.orient(&residual)?;
                if !out.rule_decreases(&rule) {
                    return Err(NcError::NotDecreasing(out.render_rule(&rule)));
                }
                out.push_rule_unchecked(rule);
            }
        }
        out.set_star_closed(true);
        Ok(out)
    }

    /// Every overlap between two left-hand sides, each side reduced to
    /// normal form.
    pub fn critical_pairs(&self) -> Result<Vec<CriticalPair<C>>, NcError> {
        let rules = self.rules();
        let mut out = Vec::new();
        for (i, r1) in rules.iter().enumerate() {
            for (j, r2) in rules.iter().enumerate() {
                for cp in overlaps(r1, r2) {
                    let left = self.normalize(&cp.left)?;
                    let right = self.normalize(&cp.right)?;
                    out.push(CriticalPair {
                        rules: (i, j),
                        overlap: cp.overlap,
                        left,
                        right,
                    });
                }
            }
        }
        Ok(out)
    }

    /// Critical pairs whose two normal forms differ.
    pub fn check_local_confluence(&self) -> Result<Vec<CriticalPair<C>>, NcError> {
        Ok(self
            .critical_pairs()?
            .into_iter()
            .filter(|cp| !cp.is_resolved())
            .collect())
    }

    /// Orients unresolved critical pairs (and, for star-closed input, missing
    /// adjoint relations) as new rules until the system is locally confluent
    /// or `max_new_rules` rules have been added. Missing adjoints are
    /// tried first.
    pub fn complete(&self, max_new_rules: usize) -> Result<(Self, CompletionReport), NcError> {
        let mut out = self.clone();
        let mut added = Vec::new();
        let with_star = self.is_star_closed() || self.verify_star_closed()?;
        loop {
            let mut candidates: Vec<NcPolynomial<C>> = if with_star {
                out.star_obligations()?
            } else {
                Vec::new()
            };
            candidates.extend(
                out.check_local_confluence()?
                    .iter()
                    .map(CriticalPair::difference),
            );
            if candidates.is_empty() {
                out.set_star_closed(with_star);
                return Ok((
                    out,
                    CompletionReport {
                        added,
                        locally_confluent: true,
                        limit_reached: false,
                    },
                ));
            }
            let mut progressed = false;
            for p in candidates {
                if added.len() >= max_new_rules {
                    return Ok((
                        out,
                        CompletionReport {
                            added,
                            locally_confluent: false,
                            limit_reached: true,
                        },
                    ));
                }
                let residual = out.normalize(&p)?;
                if residual.is_zero() {
                    continue;
                }
                let rule = out.orient(&residual)?;
                added.push(out.render_rule(&rule));
                out.push_rule_unchecked(rule);
                progressed = true;
            }
            if !progressed {
                let locally_confluent = out.check_local_confluence()?.is_empty();
                return Ok((
                    out,
                    CompletionReport {
                        added,
                        locally_confluent,
                        limit_reached: false,
                    },
                ));
            }
        }
    }
}

struct RawOverlap<C> {
    overlap: Word,
    left: NcPolynomial<C>,
    right: NcPolynomial<C>,
}

/// Overlaps of `r1.lhs` followed by `r2.lhs` (proper suffix/prefix), and
/// occurrences of `r2.lhs` strictly inside `r1.lhs`.
fn overlaps<C: CoeffRender>(r1: &RewriteRule<C>, r2: &RewriteRule<C>) -> Vec<RawOverlap<C>> {
    let l1 = r1.lhs.letters();
    let l2 = r2.lhs.letters();
    let mut out = Vec::new();
    for k in 1..l1.len().min(l2.len()) {
        if l1[l1.len() - k..] == l2[..k] {
            let overlap = Word(l1.iter().chain(&l2[k..]).copied().collect());
            let tail = NcPolynomial::word(Word(l2[k..].to_vec()));
            let head = NcPolynomial::word(Word(l1[..l1.len() - k].to_vec()));
            out.push(RawOverlap {
                overlap,
                left: &r1.rhs * &tail,
                right: &head * &r2.rhs,
            });
        }
    }
    if l2.len() < l1.len() || (l2.len() == l1.len() && !std::ptr::eq(r1, r2) && l1 == l2) {
        for pos in r1.lhs.find_all(l2) {
            if l2.len() == l1.len() && pos != 0 {
                continue;
            }
            let head = NcPolynomial::word(Word(l1[..pos].to_vec()));
            let tail = NcPolynomial::word(Word(l1[pos + l2.len()..].to_vec()));
            out.push(RawOverlap {
                overlap: r1.lhs.clone(),
                left: r1.rhs.clone(),
                right: &(&head * &r2.rhs) * &tail,
            });
        }
    }
    out
}
