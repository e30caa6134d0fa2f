//! Recursive insertion of a candidate into the result set.
//!
//! Members are visited in insertion order and the first member that blocks
//! or absorbs the candidate decides. Set membership after a recursive call
//! is tested by description equality.

use crate::data::{cover, Dataset, Description};
use crate::error::{Error, Result};
use crate::stats::{models_differ, BaselineMode, ScoredSubgroup};

use super::algebra::{is_in, merge, root};
use super::SubgroupSet;

/// One decision taken while inserting a candidate. `depth` is the
/// recursion level, 0 for the top-level call.
#[derive(Clone, Debug, PartialEq)]
pub enum UpdateEvent {
    /// Candidate is not exceptional at the run's level.
    Rejected {
        depth: usize,
        candidate: Description,
    },
    /// Member has a different model or disjoint attributes.
    Skipped {
        depth: usize,
        candidate: Description,
        member: Description,
    },
    /// Candidate is subsumed by a member with a similar model.
    Absorbed {
        depth: usize,
        candidate: Description,
        member: Description,
    },
    /// Member is subsumed by the candidate and is tried for replacement.
    Replacing {
        depth: usize,
        candidate: Description,
        member: Description,
    },
    /// Generalizations of candidate and member are tried.
    Generalizing {
        depth: usize,
        candidate: Description,
        member: Description,
        root: Option<Description>,
        merge: Option<Description>,
    },
    /// The generalizations did not settle the candidate; the scan goes on.
    GeneralizationDiscarded {
        depth: usize,
        candidate: Description,
        member: Description,
    },
    /// A generalization replaced the candidate.
    Generalized {
        depth: usize,
        candidate: Description,
        member: Description,
    },
    Appended {
        depth: usize,
        candidate: Description,
    },
}

struct Updater<'a> {
    dataset: &'a Dataset,
    alpha: f64,
    baseline: BaselineMode,
    max_depth: usize,
    trace: Vec<UpdateEvent>,
    /// Candidates of the calls currently on the recursion stack.
    path: Vec<Description>,
}

impl Updater<'_> {
    fn differ(&self, a: &ScoredSubgroup, b: &ScoredSubgroup) -> bool {
        models_differ(a.extent(), b.extent(), self.alpha, self.dataset)
    }

    fn scored(&self, description: Description) -> ScoredSubgroup {
        ScoredSubgroup::from_subgroup(
            cover(&description, self.dataset),
            self.baseline,
            self.dataset,
        )
    }

    fn insert(
        &mut self,
        new: &ScoredSubgroup,
        members: &[ScoredSubgroup],
        depth: usize,
    ) -> Result<Vec<ScoredSubgroup>> {
        if depth > self.max_depth {
            return Err(Error::RecursionLimit(self.max_depth));
        }
        self.path.push(new.description().clone());
        let out = self.insert_inner(new, members, depth);
        self.path.pop();
        out
    }

    fn insert_inner(
        &mut self,
        new: &ScoredSubgroup,
        members: &[ScoredSubgroup],
        depth: usize,
    ) -> Result<Vec<ScoredSubgroup>> {
        let cand = new.description().clone();
        if new.score.p_value > self.alpha {
            self.trace.push(UpdateEvent::Rejected {
                depth,
                candidate: cand,
            });
            return Ok(members.to_vec());
        }
        for (idx, member) in members.iter().enumerate() {
            let mdesc = member.description().clone();
            let disjoint = cand.attributes().is_disjoint(&mdesc.attributes());
            if disjoint || self.differ(new, member) {
                self.trace.push(UpdateEvent::Skipped {
                    depth,
                    candidate: cand.clone(),
                    member: mdesc,
                });
                continue;
            }
            if is_in(&cand, &mdesc) {
                self.trace.push(UpdateEvent::Absorbed {
                    depth,
                    candidate: cand,
                    member: mdesc,
                });
                return Ok(members.to_vec());
            }
            if is_in(&mdesc, &cand) {
                self.trace.push(UpdateEvent::Replacing {
                    depth,
                    candidate: cand.clone(),
                    member: mdesc,
                });
                let mut rest = members.to_vec();
                rest.remove(idx);
                let updated = self.insert(new, &rest, depth + 1)?;
                return Ok(if contains(&updated, &cand) {
                    updated
                } else {
                    members.to_vec()
                });
            }

            // a generalization already being inserted further up the stack
            // would re-enter that call and never terminate
            let fresh = |d: &Description| !self.path.contains(d);
            let r = root(&cand, &mdesc).filter(fresh);
            let m = merge(&cand, &mdesc).filter(fresh);
            self.trace.push(UpdateEvent::Generalizing {
                depth,
                candidate: cand.clone(),
                member: mdesc.clone(),
                root: r.clone(),
                merge: m.clone(),
            });
            if r.is_none() && m.is_none() {
                continue;
            }
            let g_r = r.map(|d| self.scored(d));
            let g_m = m.map(|d| self.scored(d));
            let mut updated = members.to_vec();
            if let Some(g) = &g_r {
                updated = self.insert(g, &updated, depth + 1)?;
            }
            if let Some(g) = &g_m {
                updated = self.insert(g, &updated, depth + 1)?;
            }
            let kept_r = g_r.filter(|g| contains(&updated, g.description()));
            let kept_m = g_m.filter(|g| contains(&updated, g.description()));
            let settle = match (&kept_r, &kept_m) {
                (None, None) => false,
                (Some(g), None) | (None, Some(g)) => !self.differ(g, new),
                (Some(gr), Some(gm)) => !(self.differ(new, gr) && self.differ(new, gm)),
            };
            if settle {
                self.trace.push(UpdateEvent::Generalized {
                    depth,
                    candidate: cand,
                    member: mdesc,
                });
                return Ok(updated);
            }
            self.trace.push(UpdateEvent::GeneralizationDiscarded {
                depth,
                candidate: cand.clone(),
                member: mdesc,
            });
        }
        self.trace.push(UpdateEvent::Appended {
            depth,
            candidate: cand,
        });
        let mut out = members.to_vec();
        out.push(new.clone());
        Ok(out)
    }
}

fn contains(members: &[ScoredSubgroup], description: &Description) -> bool {
    members.iter().any(|m| m.description() == description)
}

/// Offers `candidate` to `set` and returns the updated set plus the
/// decisions taken. Fails only if recursion exceeds `|items| + |set| + 1`
/// levels.
pub fn update_set_traced(
    candidate: &ScoredSubgroup,
    set: &SubgroupSet,
    dataset: &Dataset,
) -> Result<(SubgroupSet, Vec<UpdateEvent>)> {
    let mut updater = Updater {
        dataset,
        alpha: set.alpha,
        baseline: set.baseline,
        max_depth: dataset.n_items() + set.members.len() + 1,
        trace: Vec::new(),
        path: Vec::new(),
    };
    let members = updater.insert(candidate, &set.members, 0)?;
    let out = SubgroupSet {
        members,
        alpha: set.alpha,
        baseline: set.baseline,
    };
    Ok((out, updater.trace))
}

pub fn update_set(
    candidate: &ScoredSubgroup,
    set: &SubgroupSet,
    dataset: &Dataset,
) -> Result<SubgroupSet> {
    update_set_traced(candidate, set, dataset).map(|(s, _)| s)
}
