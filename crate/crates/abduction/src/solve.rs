//! Decision queries over abduction instances: existence, verification,
//! relevance, necessity, dispensability, and enumeration of minimal
//! explanations under any [`PreferenceOrder`].
//!
//! Searches run over hypothesis subsets, shrunk by two sound preprocessing
//! rules computed once per solver:
//!
//! * a manifestation that is a hypothesis with no positive occurrence in
//!   the theory must belong to every explanation (forced);
//! * a hypothesis inconsistent with the theory plus the forced set belongs
//!   to no explanation (excluded).
//!
//! Reduced instances produced by the transformations force almost all of
//! their indicator variables this way, which keeps queries on them
//! tractable. Caps bound the number of candidate subsets and collected
//! explanations; exceeding a cap is reported, never silently truncated.

use std::collections::BTreeMap;
use std::fmt;

use crate::instance::{Explanation, Instance, VarId, VarSet};
use crate::oracle::canonical_sort;
use crate::order::{Comparison, OrderKind, PreferenceOrder};
use crate::sat;

/// Search budgets.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    /// Most explanations an enumeration may collect.
    pub max_explanations: usize,
    /// Most candidate subsets a search may examine.
    pub max_subsets: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_explanations: 10_000, max_subsets: 1 << 20 }
    }
}

/// Work counters reported with every answer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub engine_calls: u64,
    pub subsets_examined: u64,
}

/// Answer to a yes/no query, with an optional certifying explanation.
///
/// A witness accompanies `true` answers to existence and relevance (a
/// solution, resp. a minimal solution containing the variable) and `false`
/// answers to necessity (a minimal solution omitting the variable).
#[derive(Clone, Debug)]
pub struct QueryResult {
    pub answer: bool,
    pub witness: Option<Explanation>,
    pub stats: Stats,
}

/// Result of enumerating minimal explanations. `complete` is false when a
/// cap stopped the enumeration early; the listing is then a valid prefix.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub explanations: Vec<Explanation>,
    pub complete: bool,
    pub stats: Stats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    NotHypotheses { var: VarId },
    NotDefiniteHorn,
    CapExceeded { subsets_examined: u64 },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::NotHypotheses { var } => {
                write!(f, "variable {var} is not a hypothesis of the instance")
            }
            SolveError::NotDefiniteHorn => write!(f, "theory is not definite Horn"),
            SolveError::CapExceeded { subsets_examined } => {
                write!(f, "search cap exceeded after {subsets_examined} candidate subsets")
            }
        }
    }
}

impl std::error::Error for SolveError {}

/// Variable-level query kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Relevant,
    Necessary,
    Dispensable,
}

struct SearchSpace {
    /// Subset of every explanation.
    forced: VarSet,
    /// Hypotheses that may still be chosen freely.
    free: Vec<VarId>,
    /// Proven `SOL = {}` during preprocessing.
    no_solutions: bool,
}

/// Query engine bound to one instance. Solution membership is memoized
/// across queries, so answering several queries on one solver is cheap.
pub struct Solver<'a> {
    inst: &'a Instance,
    caps: Caps,
    memo: BTreeMap<Vec<VarId>, bool>,
    space: Option<SearchSpace>,
    stats: Stats,
}

impl<'a> Solver<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        Solver { inst, caps: Caps::default(), memo: BTreeMap::new(), space: None, stats: Stats::default() }
    }

    pub fn with_caps(inst: &'a Instance, caps: Caps) -> Self {
        Solver { caps, ..Solver::new(inst) }
    }

    pub fn instance(&self) -> &Instance {
        self.inst
    }

    fn snapshot(&self) -> Stats {
        self.stats
    }

    fn delta(&self, before: Stats) -> Stats {
        Stats {
            engine_calls: self.stats.engine_calls - before.engine_calls,
            subsets_examined: self.stats.subsets_examined - before.subsets_examined,
        }
    }

    fn consistent(&mut self, assumptions: &VarSet) -> bool {
        self.stats.engine_calls += 1;
        sat::is_consistent(self.inst.theory(), assumptions)
    }

    fn entails_m(&mut self, assumptions: &VarSet) -> bool {
        self.stats.engine_calls += 1;
        sat::entails(self.inst.theory(), assumptions, self.inst.manifestations())
    }

    /// Membership in SOL: consistent with the theory and entails every
    /// manifestation. Sets with non-hypothesis members are never solutions.
    ///
    /// Definite Horn theories route through forward chaining: they are
    /// consistent with any hypothesis set, and entailment is containment in
    /// the least model.
    pub fn is_solution(&mut self, candidate: &Explanation) -> bool {
        if !candidate.is_subset(self.inst.hypotheses()) {
            return false;
        }
        if let Some(&known) = self.memo.get(candidate.as_slice()) {
            return known;
        }
        let answer = if self.inst.theory().is_definite_horn() {
            self.stats.engine_calls += 1;
            let model = sat::forward_chain(self.inst.theory(), candidate)
                .expect("flagged definite Horn");
            self.inst.manifestations().is_subset(&model)
        } else {
            self.consistent(candidate) && self.entails_m(candidate)
        };
        self.memo.insert(candidate.as_slice().to_vec(), answer);
        answer
    }

    fn build_space(&mut self) -> SearchSpace {
        let inst = self.inst;
        let hyps = inst.hypotheses().clone();
        let theory = inst.theory();

        // A manifestation with no positive occurrence in the theory can only
        // be entailed by assuming it; if it is not even a hypothesis, there
        // is no explanation at all.
        let mut forced = VarSet::new();
        for m in inst.manifestations().iter() {
            if !theory.has_positive_occurrence(m) {
                if hyps.contains(m) {
                    forced.insert(m);
                } else {
                    return SearchSpace { forced, free: Vec::new(), no_solutions: true };
                }
            }
        }
        if !self.consistent(&forced) {
            return SearchSpace { forced, free: Vec::new(), no_solutions: true };
        }
        let mut free = Vec::new();
        for h in hyps.iter() {
            if forced.contains(h) {
                continue;
            }
            if self.consistent(&forced.with(h)) {
                free.push(h);
            }
        }
        SearchSpace { forced, free, no_solutions: false }
    }

    fn space(&mut self) -> &SearchSpace {
        if self.space.is_none() {
            let s = self.build_space();
            self.space = Some(s);
        }
        self.space.as_ref().unwrap()
    }

    /// Walk candidates `forced + (k-subset of free)` for `k` in
    /// `min_extra..=max_extra`, by size then lexicographically. The visitor
    /// returns `true` to stop. `Ok(true)` means the walk was stopped,
    /// `Err` that the subset cap was hit first.
    fn walk_candidates(
        &mut self,
        min_extra: usize,
        max_extra: usize,
        mut visit: impl FnMut(&mut Self, &VarSet) -> bool,
    ) -> Result<bool, SolveError> {
        let (forced, free) = {
            let s = self.space();
            (s.forced.clone(), s.free.clone())
        };
        let n = free.len();
        for k in min_extra..=max_extra.min(n) {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                self.stats.subsets_examined += 1;
                if self.stats.subsets_examined > self.caps.max_subsets {
                    return Err(SolveError::CapExceeded {
                        subsets_examined: self.stats.subsets_examined,
                    });
                }
                let mut cand = forced.clone();
                for &i in &idx {
                    cand.insert(free[i]);
                }
                if visit(self, &cand) {
                    return Ok(true);
                }
                // next k-combination in lexicographic order
                if k == 0 {
                    break;
                }
                let mut i = k;
                loop {
                    if i == 0 {
                        break;
                    }
                    i -= 1;
                    if idx[i] != i + n - k {
                        idx[i] += 1;
                        for j in i + 1..k {
                            idx[j] = idx[j - 1] + 1;
                        }
                        break;
                    }
                    if i == 0 {
                        idx.clear();
                        break;
                    }
                }
                if idx.is_empty() {
                    break;
                }
            }
        }
        Ok(false)
    }

    /// Is SOL nonempty? Ordering-independent.
    ///
    /// When the whole hypothesis set is consistent with the theory a single
    /// entailment check decides (entailment is monotone, consistency
    /// inherits downward); otherwise the reduced subset search runs.
    pub fn exists(&mut self) -> Result<QueryResult, SolveError> {
        let before = self.snapshot();
        let all = self.inst.hypotheses().clone();
        if self.consistent(&all) {
            let answer = self.entails_m(&all);
            return Ok(QueryResult {
                answer,
                witness: answer.then_some(all),
                stats: self.delta(before),
            });
        }
        if self.space().no_solutions {
            return Ok(QueryResult { answer: false, witness: None, stats: self.delta(before) });
        }
        let free_len = self.space().free.len();
        let mut witness = None;
        self.walk_candidates(0, free_len, |solver, cand| {
            if solver.is_solution(cand) {
                witness = Some(cand.clone());
                true
            } else {
                false
            }
        })?;
        Ok(QueryResult { answer: witness.is_some(), witness, stats: self.delta(before) })
    }

    /// All minimal explanations under `order`, canonically sorted.
    pub fn enumerate_minimal(
        &mut self,
        order: &dyn PreferenceOrder,
    ) -> Result<Enumeration, SolveError> {
        let before = self.snapshot();
        if self.space().no_solutions {
            return Ok(Enumeration {
                explanations: Vec::new(),
                complete: true,
                stats: self.delta(before),
            });
        }
        let free_len = self.space().free.len();
        let max_expl = self.caps.max_explanations;
        let mut complete = true;
        let mut found: Vec<Explanation> = Vec::new();

        match order.kind() {
            OrderKind::Universal => {
                let walk = self.walk_candidates(0, free_len, |solver, cand| {
                    if solver.is_solution(cand) {
                        found.push(cand.clone());
                        if found.len() >= max_expl {
                            return true;
                        }
                    }
                    false
                });
                complete = finish(walk, &found, max_expl)?;
            }
            OrderKind::SubsetPreference => {
                // size-ascending search with superset blocking: a solution
                // none of whose found minimal solutions is a proper subset
                // is itself minimal
                let walk = self.walk_candidates(0, free_len, |solver, cand| {
                    if found.iter().any(|m| m.is_proper_subset(cand)) {
                        return false;
                    }
                    if solver.is_solution(cand) {
                        found.push(cand.clone());
                        if found.len() >= max_expl {
                            return true;
                        }
                    }
                    false
                });
                complete = finish(walk, &found, max_expl)?;
            }
            OrderKind::CardinalityPreference => {
                // level search: the first size with a solution is the level
                // of all minimal explanations
                let mut first_size: Option<usize> = None;
                let walk = self.walk_candidates(0, free_len, |solver, cand| {
                    if let Some(sz) = first_size {
                        if cand.len() > sz {
                            return true;
                        }
                    }
                    if solver.is_solution(cand) {
                        first_size = Some(cand.len());
                        found.push(cand.clone());
                        if found.len() >= max_expl {
                            return true;
                        }
                    }
                    false
                });
                complete = finish(walk, &found, max_expl)?;
            }
            OrderKind::Penalization => {
                // collect candidates, then scan them in weight order and
                // stop once past the first weight level with a solution
                let mut cands: Vec<(u64, VarSet)> = Vec::new();
                let walk = self.walk_candidates(0, free_len, |solver, cand| {
                    let w = solver
                        .inst
                        .weight_of(cand)
                        .expect("penalization bound to weighted instance");
                    cands.push((w, cand.clone()));
                    false
                });
                if walk.is_err() {
                    complete = false;
                }
                cands.sort_by(|a, b| (a.0, a.1.as_slice()).cmp(&(b.0, b.1.as_slice())));
                let mut best: Option<u64> = None;
                for (w, cand) in cands {
                    if let Some(bw) = best {
                        if w > bw {
                            break;
                        }
                    }
                    if self.is_solution(&cand) {
                        best = Some(w);
                        found.push(cand);
                        if found.len() >= max_expl {
                            complete = false;
                            break;
                        }
                    }
                }
            }
            OrderKind::SubsetPrioritization | OrderKind::CardinalityPrioritization => {
                // collect the full solution set, then filter by pairwise
                // comparison
                let mut all: Vec<Explanation> = Vec::new();
                let walk = self.walk_candidates(0, free_len, |solver, cand| {
                    if solver.is_solution(cand) {
                        all.push(cand.clone());
                        if all.len() >= max_expl {
                            return true;
                        }
                    }
                    false
                });
                complete = finish(walk, &all, max_expl)?;
                found = all
                    .iter()
                    .filter(|s| !all.iter().any(|t| order.strictly_better(t, s)))
                    .cloned()
                    .collect();
            }
        }

        canonical_sort(&mut found);
        Ok(Enumeration { explanations: found, complete, stats: self.delta(before) })
    }

    /// Is `candidate` a minimal solution under `order`?
    ///
    /// Membership is checked first; minimality then uses the cheapest
    /// sound check for the ordering: nothing for the universal ordering,
    /// single-element deletions for subset preference (the sandwich
    /// property makes this complete), a bounded-cardinality search for
    /// cardinality preference, and a search of the strictly-better region
    /// for the prioritized and penalized orderings.
    pub fn verify_minimal(
        &mut self,
        order: &dyn PreferenceOrder,
        candidate: &Explanation,
    ) -> Result<QueryResult, SolveError> {
        let before = self.snapshot();
        if let Some(v) = candidate.iter().find(|v| !self.inst.hypotheses().contains(*v)) {
            return Err(SolveError::NotHypotheses { var: v });
        }
        if !self.is_solution(candidate) {
            return Ok(QueryResult { answer: false, witness: None, stats: self.delta(before) });
        }
        let beaten: Option<Explanation> = match order.kind() {
            OrderKind::Universal => None,
            OrderKind::SubsetPreference => {
                // candidate minus one element stays consistent, so a single
                // entailment call decides whether it is a smaller solution
                let mut hit = None;
                for h in candidate.iter() {
                    let smaller = candidate.without(h);
                    if self.entails_m(&smaller) {
                        hit = Some(smaller);
                        break;
                    }
                }
                hit
            }
            OrderKind::CardinalityPreference => {
                let forced_len = self.space().forced.len();
                if candidate.len() <= forced_len {
                    // every solution contains the forced set, so nothing
                    // smaller than the candidate can be one
                    None
                } else {
                    let limit = candidate.len() - 1 - forced_len;
                    let mut hit = None;
                    self.walk_candidates(0, limit, |solver, cand| {
                        if solver.is_solution(cand) {
                            hit = Some(cand.clone());
                            true
                        } else {
                            false
                        }
                    })?;
                    hit
                }
            }
            _ => {
                let free_len = self.space().free.len();
                let mut hit = None;
                self.walk_candidates(0, free_len, |solver, cand| {
                    if order.compare(cand, candidate) == Comparison::StrictlyBetter
                        && solver.is_solution(cand)
                    {
                        hit = Some(cand.clone());
                        true
                    } else {
                        false
                    }
                })?;
                hit
            }
        };
        Ok(QueryResult {
            answer: beaten.is_none(),
            witness: Some(beaten.unwrap_or_else(|| candidate.clone())),
            stats: self.delta(before),
        })
    }

    /// Relevance, necessity, or dispensability of a hypothesis under an
    /// ordering. Dispensability is the negation of necessity.
    pub fn query_variable(
        &mut self,
        order: &dyn PreferenceOrder,
        kind: QueryKind,
        h: VarId,
    ) -> Result<QueryResult, SolveError> {
        if !self.inst.hypotheses().contains(h) {
            return Err(SolveError::NotHypotheses { var: h });
        }
        let before = self.snapshot();
        match kind {
            QueryKind::Relevant => {
                // an incomplete minimal listing can contain entries a
                // missing solution would beat, so only a complete one
                // decides anything
                let minimal = self.enumerate_minimal(order)?;
                if !minimal.complete {
                    return Err(SolveError::CapExceeded {
                        subsets_examined: self.stats.subsets_examined,
                    });
                }
                let witness = minimal.explanations.iter().find(|s| s.contains(h)).cloned();
                Ok(QueryResult { answer: witness.is_some(), witness, stats: self.delta(before) })
            }
            QueryKind::Necessary => {
                let minimal = self.enumerate_minimal(order)?;
                if !minimal.complete {
                    return Err(SolveError::CapExceeded {
                        subsets_examined: self.stats.subsets_examined,
                    });
                }
                if minimal.explanations.is_empty() {
                    return Ok(QueryResult {
                        answer: false,
                        witness: None,
                        stats: self.delta(before),
                    });
                }
                let counterexample =
                    minimal.explanations.iter().find(|s| !s.contains(h)).cloned();
                Ok(QueryResult {
                    answer: counterexample.is_none(),
                    witness: counterexample,
                    stats: self.delta(before),
                })
            }
            QueryKind::Dispensable => {
                let necessary = self.query_variable(order, QueryKind::Necessary, h)?;
                Ok(QueryResult {
                    answer: !necessary.answer,
                    witness: necessary.witness,
                    stats: self.delta(before),
                })
            }
        }
    }

    /// Polynomial existence check for definite Horn theories: definite Horn
    /// clauses are always consistent with hypothesis sets, so SOL is
    /// nonempty iff chaining forward from all of H reaches every
    /// manifestation.
    pub fn dh_exists(&mut self) -> Result<QueryResult, SolveError> {
        let before = self.snapshot();
        let chain = self.chain(&self.inst.hypotheses().clone())?;
        let answer = self.inst.manifestations().is_subset(&chain);
        Ok(QueryResult {
            answer,
            witness: answer.then(|| self.inst.hypotheses().clone()),
            stats: self.delta(before),
        })
    }

    /// Polynomial subset-preference necessity for definite Horn theories:
    /// `h` is necessary iff explanations exist and chaining from `H \ {h}`
    /// misses some manifestation. On a `false` answer with solutions
    /// present, the witness is a minimal solution omitting `h`, found by
    /// greedy shrinking.
    pub fn dh_subset_necessary(&mut self, h: VarId) -> Result<QueryResult, SolveError> {
        if !self.inst.hypotheses().contains(h) {
            return Err(SolveError::NotHypotheses { var: h });
        }
        let before = self.snapshot();
        let exists = {
            let chain = self.chain(&self.inst.hypotheses().clone())?;
            self.inst.manifestations().is_subset(&chain)
        };
        if !exists {
            return Ok(QueryResult { answer: false, witness: None, stats: self.delta(before) });
        }
        let without = self.inst.hypotheses().without(h);
        let chain = self.chain(&without)?;
        let answer = !self.inst.manifestations().is_subset(&chain);
        let witness = if answer {
            None
        } else {
            let mut w = without;
            loop {
                let mut shrunk = false;
                for v in w.iter().collect::<Vec<_>>() {
                    let try_set = w.without(v);
                    let c = self.chain(&try_set)?;
                    if self.inst.manifestations().is_subset(&c) {
                        w = try_set;
                        shrunk = true;
                        break;
                    }
                }
                if !shrunk {
                    break;
                }
            }
            Some(w)
        };
        Ok(QueryResult { answer, witness, stats: self.delta(before) })
    }

    fn chain(&mut self, assumptions: &VarSet) -> Result<VarSet, SolveError> {
        self.stats.engine_calls += 1;
        sat::forward_chain(self.inst.theory(), assumptions)
            .map_err(|_| SolveError::NotDefiniteHorn)
    }
}

fn finish(
    walk: Result<bool, SolveError>,
    found: &[Explanation],
    max_expl: usize,
) -> Result<bool, SolveError> {
    match walk {
        Ok(_) => Ok(found.len() < max_expl),
        Err(SolveError::CapExceeded { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}
