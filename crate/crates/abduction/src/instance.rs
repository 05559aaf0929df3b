//! Core domain types: variables, clauses, theories, and abduction instances.
//!
//! An abduction instance is a triple `<H, M, T>`: a set of hypothesis
//! variables `H` (optionally partitioned into priority classes and optionally
//! weighted), a set of manifestation variables `M`, and a clausal theory `T`.
//! An explanation is a subset of `H` that is consistent with `T` and entails
//! every manifestation.
//!
//! All values are immutable after validation, so they can be shared freely
//! across threads.

use std::collections::BTreeMap;
use std::fmt;

/// Variable identifier. Valid ids run from 1 to `Instance::num_vars()`.
pub type VarId = u32;

/// A sorted, duplicate-free set of variables.
///
/// This one representation is used for hypothesis classes, manifestation
/// sets, and explanations.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarSet(Vec<VarId>);

impl VarSet {
    pub fn new() -> Self {
        VarSet(Vec::new())
    }

    pub fn from_vec(mut vars: Vec<VarId>) -> Self {
        vars.sort_unstable();
        vars.dedup();
        VarSet(vars)
    }

    pub fn singleton(v: VarId) -> Self {
        VarSet(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VarId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[VarId] {
        &self.0
    }

    pub fn insert(&mut self, v: VarId) {
        if let Err(pos) = self.0.binary_search(&v) {
            self.0.insert(pos, v);
        }
    }

    pub fn remove(&mut self, v: VarId) {
        if let Ok(pos) = self.0.binary_search(&v) {
            self.0.remove(pos);
        }
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    pub fn is_proper_subset(&self, other: &VarSet) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        VarSet::from_vec(out)
    }

    pub fn intersection(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.iter().copied().filter(|v| other.contains(*v)).collect())
    }

    pub fn difference(&self, other: &VarSet) -> VarSet {
        VarSet(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn without(&self, v: VarId) -> VarSet {
        let mut out = self.clone();
        out.remove(v);
        out
    }

    pub fn with(&self, v: VarId) -> VarSet {
        let mut out = self.clone();
        out.insert(v);
        out
    }

    /// All subsets, in (size, lexicographic) order. Only sensible for small
    /// sets; panics above 20 elements.
    pub fn subsets(&self) -> Vec<VarSet> {
        assert!(self.len() <= 20, "subset enumeration limited to 20 elements");
        let vars = &self.0;
        let mut out: Vec<VarSet> = (0u32..(1 << vars.len()))
            .map(|mask| {
                vars.iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| *v)
                    .collect()
            })
            .collect();
        out.sort_by(|a: &VarSet, b: &VarSet| (a.len(), &a.0).cmp(&(b.len(), &b.0)));
        out
    }
}

impl FromIterator<VarId> for VarSet {
    fn from_iter<I: IntoIterator<Item = VarId>>(iter: I) -> Self {
        VarSet::from_vec(iter.into_iter().collect())
    }
}

impl fmt::Display for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// An explanation is a set of hypothesis variables.
pub type Explanation = VarSet;

/// A literal: a variable with a polarity.
///
/// The derived order puts the positive literal of a variable before the
/// negative one, and lower variable ids first; clause canonicalization
/// relies on this.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: VarId,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: VarId) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: VarId) -> Self {
        Literal { var, negated: true }
    }

    /// Encode as a DIMACS-style signed integer.
    pub fn code(&self) -> i64 {
        if self.negated {
            -(self.var as i64)
        } else {
            self.var as i64
        }
    }

    pub fn from_code(code: i64) -> Option<Literal> {
        if code == 0 || code.unsigned_abs() > VarId::MAX as u64 {
            return None;
        }
        Some(Literal { var: code.unsigned_abs() as VarId, negated: code < 0 })
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// A disjunction of literals in canonical form: sorted, duplicate-free.
///
/// Tautological clauses (containing both `x` and `not x`) are representable;
/// instance extension deliberately introduces them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Build a clause from literals, sorting and removing duplicates.
    pub fn new(mut literals: Vec<Literal>) -> Self {
        literals.sort_unstable();
        literals.dedup();
        Clause { literals }
    }

    /// Build from DIMACS-style signed codes. `None` if any code is zero.
    pub fn from_codes(codes: &[i64]) -> Option<Self> {
        let lits: Option<Vec<Literal>> = codes.iter().map(|&c| Literal::from_code(c)).collect();
        lits.map(Clause::new)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Number of distinct variables in the clause.
    pub fn num_vars(&self) -> usize {
        let mut n = 0;
        let mut last = None;
        for lit in &self.literals {
            if last != Some(lit.var) {
                n += 1;
                last = Some(lit.var);
            }
        }
        n
    }

    /// True when some variable occurs in both polarities.
    pub fn is_tautology(&self) -> bool {
        self.literals.windows(2).any(|w| w[0].var == w[1].var)
    }

    pub fn num_positive(&self) -> usize {
        self.literals.iter().filter(|l| !l.negated).count()
    }

    pub fn vars(&self) -> VarSet {
        self.literals.iter().map(|l| l.var).collect()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literals.binary_search(&lit).is_ok()
    }
}

// Clauses sort by length first, then lexicographically on their canonical
// literal sequence. Clause universes and serialized theories depend on this
// order being stable.
impl PartialOrd for Clause {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Clause {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.literals.len(), &self.literals).cmp(&(other.literals.len(), &other.literals))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for lit in &self.literals {
            write!(f, "{} ", lit.code())?;
        }
        write!(f, "0")
    }
}

/// A set of clauses with derived dialect flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Theory {
    clauses: Vec<Clause>,
    is_3cnf: bool,
    is_horn: bool,
    is_definite_horn: bool,
}

impl Theory {
    /// Canonicalize (sort clauses, drop duplicates) and compute dialect flags.
    pub fn new(mut clauses: Vec<Clause>) -> Self {
        clauses.sort();
        clauses.dedup();
        let is_3cnf = clauses.iter().all(|c| c.num_vars() <= 3);
        let is_horn = clauses.iter().all(|c| c.num_positive() <= 1);
        let is_definite_horn = clauses.iter().all(|c| c.num_positive() == 1);
        Theory { clauses, is_3cnf, is_horn, is_definite_horn }
    }

    pub fn empty() -> Self {
        Theory::new(Vec::new())
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Every clause mentions at most 3 distinct variables.
    pub fn is_3cnf(&self) -> bool {
        self.is_3cnf
    }

    /// Every clause has at most one positive literal.
    pub fn is_horn(&self) -> bool {
        self.is_horn
    }

    /// Every clause has exactly one positive literal.
    pub fn is_definite_horn(&self) -> bool {
        self.is_definite_horn
    }

    pub fn contains(&self, clause: &Clause) -> bool {
        self.clauses.binary_search(clause).is_ok()
    }

    /// All variables occurring in some clause.
    pub fn vars(&self) -> VarSet {
        self.clauses
            .iter()
            .flat_map(|c| c.literals().iter().map(|l| l.var))
            .collect()
    }

    /// True when `var` occurs positively in some clause.
    pub fn has_positive_occurrence(&self, var: VarId) -> bool {
        self.clauses.iter().any(|c| c.contains(Literal::pos(var)))
    }
}

/// Validation failures for raw instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceError {
    NoClasses,
    OverlappingClasses { var: VarId },
    VarOutOfRange { var: VarId, num_vars: u32 },
    UnusedVar { var: VarId },
    ManifestationNotInTheory { var: VarId },
    NonpositiveWeight { var: VarId },
    WeightForNonHypothesis { var: VarId },
    MissingWeight { var: VarId },
    CandidateNotHypotheses { var: VarId },
}

impl fmt::Display for InstanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceError::NoClasses => write!(f, "instance has no hypothesis class"),
            InstanceError::OverlappingClasses { var } => {
                write!(f, "variable {var} appears in more than one hypothesis class")
            }
            InstanceError::VarOutOfRange { var, num_vars } => {
                write!(f, "variable {var} out of range 1..={num_vars}")
            }
            InstanceError::UnusedVar { var } => {
                write!(f, "variable {var} is declared but occurs neither in H nor in the theory")
            }
            InstanceError::ManifestationNotInTheory { var } => {
                write!(f, "manifestation variable {var} does not occur in the theory")
            }
            InstanceError::NonpositiveWeight { var } => {
                write!(f, "weight of variable {var} must be at least 1")
            }
            InstanceError::WeightForNonHypothesis { var } => {
                write!(f, "weight given for non-hypothesis variable {var}")
            }
            InstanceError::MissingWeight { var } => {
                write!(f, "hypothesis {var} has no weight while other weights are present")
            }
            InstanceError::CandidateNotHypotheses { var } => {
                write!(f, "candidate member {var} is not a hypothesis")
            }
        }
    }
}

impl std::error::Error for InstanceError {}

/// A validated abduction instance.
///
/// Hypotheses are held as an ordered list of disjoint priority classes
/// `H_1 .. H_m` (class 1 most likely, class m least likely); `m = 1` is the
/// unprioritized case. The optional `candidate` field carries the `H_a`
/// component of verification-shaped instances. Optional per-hypothesis
/// weights support the penalization ordering.
///
/// Equality ignores display names: two instances with the same numeric
/// structure are equal even if their variables are labelled differently.
#[derive(Clone, Debug)]
pub struct Instance {
    num_vars: u32,
    names: Vec<Option<String>>,
    classes: Vec<VarSet>,
    hypotheses: VarSet,
    manifestations: VarSet,
    theory: Theory,
    weights: Option<BTreeMap<VarId, u64>>,
    candidate: Option<VarSet>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars
            && self.classes == other.classes
            && self.manifestations == other.manifestations
            && self.theory == other.theory
            && self.weights == other.weights
            && self.candidate == other.candidate
    }
}

impl Eq for Instance {}

impl Instance {
    /// Validate a raw instance description.
    ///
    /// Rejects out-of-range or unused variable ids, overlapping classes,
    /// manifestations absent from the theory, partial or nonpositive
    /// weights, and candidates that are not hypothesis subsets.
    pub fn new(
        num_vars: u32,
        names: Vec<Option<String>>,
        classes: Vec<VarSet>,
        manifestations: VarSet,
        theory: Theory,
        weights: Option<BTreeMap<VarId, u64>>,
        candidate: Option<VarSet>,
    ) -> Result<Instance, InstanceError> {
        if classes.is_empty() {
            return Err(InstanceError::NoClasses);
        }
        let mut hypotheses = VarSet::new();
        for class in &classes {
            for v in class.iter() {
                if hypotheses.contains(v) {
                    return Err(InstanceError::OverlappingClasses { var: v });
                }
                hypotheses.insert(v);
            }
        }
        let theory_vars = theory.vars();
        let check_range = |v: VarId| -> Result<(), InstanceError> {
            if v == 0 || v > num_vars {
                Err(InstanceError::VarOutOfRange { var: v, num_vars })
            } else {
                Ok(())
            }
        };
        for v in hypotheses.iter() {
            check_range(v)?;
        }
        for v in theory_vars.iter() {
            check_range(v)?;
        }
        for v in manifestations.iter() {
            check_range(v)?;
            if !theory_vars.contains(v) {
                return Err(InstanceError::ManifestationNotInTheory { var: v });
            }
        }
        // Ids must be dense: every declared variable is a hypothesis or
        // occurs in the theory, otherwise serialization would lose it.
        for v in 1..=num_vars {
            if !hypotheses.contains(v) && !theory_vars.contains(v) {
                return Err(InstanceError::UnusedVar { var: v });
            }
        }
        if let Some(w) = &weights {
            for (&v, &weight) in w {
                if !hypotheses.contains(v) {
                    return Err(InstanceError::WeightForNonHypothesis { var: v });
                }
                if weight == 0 {
                    return Err(InstanceError::NonpositiveWeight { var: v });
                }
            }
            for v in hypotheses.iter() {
                if !w.contains_key(&v) {
                    return Err(InstanceError::MissingWeight { var: v });
                }
            }
        }
        if let Some(cand) = &candidate {
            for v in cand.iter() {
                if !hypotheses.contains(v) {
                    return Err(InstanceError::CandidateNotHypotheses { var: v });
                }
            }
        }
        let mut names = names;
        names.resize(num_vars as usize, None);
        Ok(Instance {
            num_vars,
            names,
            classes,
            hypotheses,
            manifestations,
            theory,
            weights,
            candidate,
        })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Display name of a variable, if one was given.
    pub fn name(&self, v: VarId) -> Option<&str> {
        self.names.get(v as usize - 1).and_then(|n| n.as_deref())
    }

    /// Display name when present, otherwise the numeric id.
    pub fn label(&self, v: VarId) -> String {
        match self.name(v) {
            Some(n) => n.to_string(),
            None => v.to_string(),
        }
    }

    /// Resolve a token to a variable: a known display name, or a numeric id.
    pub fn resolve(&self, token: &str) -> Option<VarId> {
        for (i, n) in self.names.iter().enumerate() {
            if n.as_deref() == Some(token) {
                return Some(i as VarId + 1);
            }
        }
        token
            .parse::<VarId>()
            .ok()
            .filter(|v| *v >= 1 && *v <= self.num_vars)
    }

    /// The priority classes `H_1 .. H_m`.
    pub fn classes(&self) -> &[VarSet] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn is_prioritized(&self) -> bool {
        self.classes.len() > 1
    }

    /// The full hypothesis set `H`.
    pub fn hypotheses(&self) -> &VarSet {
        &self.hypotheses
    }

    pub fn manifestations(&self) -> &VarSet {
        &self.manifestations
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn weights(&self) -> Option<&BTreeMap<VarId, u64>> {
        self.weights.as_ref()
    }

    pub fn candidate(&self) -> Option<&VarSet> {
        self.candidate.as_ref()
    }

    /// Theory variables that are not hypotheses (the `X` alphabet).
    pub fn extra_vars(&self) -> VarSet {
        self.theory.vars().difference(&self.hypotheses)
    }

    /// Replace the manifestation set, revalidating.
    pub fn with_manifestations(&self, manifestations: VarSet) -> Result<Instance, InstanceError> {
        Instance::new(
            self.num_vars,
            self.names.clone(),
            self.classes.clone(),
            manifestations,
            self.theory.clone(),
            self.weights.clone(),
            self.candidate.clone(),
        )
    }

    /// Replace the candidate, revalidating.
    pub fn with_candidate(&self, candidate: Option<VarSet>) -> Result<Instance, InstanceError> {
        Instance::new(
            self.num_vars,
            self.names.clone(),
            self.classes.clone(),
            self.manifestations.clone(),
            self.theory.clone(),
            self.weights.clone(),
            candidate,
        )
    }

    /// Total penalty weight of an explanation. Requires weights.
    pub fn weight_of(&self, set: &VarSet) -> Option<u64> {
        let w = self.weights.as_ref()?;
        let mut total = 0u64;
        for v in set.iter() {
            total += *w.get(&v)?;
        }
        Some(total)
    }
}

/// Incremental construction of instances; used by the parser, the
/// transformations, and the test generators.
#[derive(Clone, Debug, Default)]
pub struct InstanceBuilder {
    names: Vec<Option<String>>,
    classes: Vec<VarSet>,
    manifestations: VarSet,
    clauses: Vec<Clause>,
    weights: Option<BTreeMap<VarId, u64>>,
    candidate: Option<VarSet>,
}

impl InstanceBuilder {
    pub fn new() -> Self {
        InstanceBuilder::default()
    }

    /// Allocate the next variable id.
    pub fn fresh_var(&mut self, name: Option<&str>) -> VarId {
        self.names.push(name.map(|s| s.to_string()));
        self.names.len() as VarId
    }

    /// Allocate a variable named by `base`, falling back to `base1`,
    /// `base2`, ... when the name is already taken.
    pub fn fresh_named(&mut self, base: &str) -> VarId {
        let taken: Vec<&str> = self.names.iter().filter_map(|n| n.as_deref()).collect();
        let mut candidate = base.to_string();
        let mut k = 0usize;
        while taken.contains(&candidate.as_str()) {
            k += 1;
            candidate = format!("{base}{k}");
        }
        self.names.push(Some(candidate));
        self.names.len() as VarId
    }

    pub fn num_vars(&self) -> u32 {
        self.names.len() as u32
    }

    pub fn push_class(&mut self, class: VarSet) -> &mut Self {
        self.classes.push(class);
        self
    }

    pub fn replace_classes(&mut self, classes: Vec<VarSet>) -> &mut Self {
        self.classes = classes;
        self
    }

    pub fn set_manifestations(&mut self, m: VarSet) -> &mut Self {
        self.manifestations = m;
        self
    }

    pub fn push_clause(&mut self, clause: Clause) -> &mut Self {
        self.clauses.push(clause);
        self
    }

    /// Add a clause given as DIMACS-style codes; panics on a zero code.
    pub fn clause_codes(&mut self, codes: &[i64]) -> &mut Self {
        self.clauses.push(Clause::from_codes(codes).expect("nonzero literal codes"));
        self
    }

    pub fn set_weight(&mut self, var: VarId, weight: u64) -> &mut Self {
        self.weights.get_or_insert_with(BTreeMap::new).insert(var, weight);
        self
    }

    pub fn set_candidate(&mut self, candidate: Option<VarSet>) -> &mut Self {
        self.candidate = candidate;
        self
    }

    pub fn build(self) -> Result<Instance, InstanceError> {
        let classes = if self.classes.is_empty() { vec![VarSet::new()] } else { self.classes };
        Instance::new(
            self.names.len() as u32,
            self.names,
            classes,
            self.manifestations,
            Theory::new(self.clauses),
            self.weights,
            self.candidate,
        )
    }
}

/// The running TeX troubleshooting example: hypotheses a, p, t, v, a single
/// manifestation f, and the theory {a->f, p->f, t->f, v->f, not(p and t)}.
///
/// Mostly used by tests and documentation.
pub fn tex_example() -> Instance {
    let mut b = InstanceBuilder::new();
    let a = b.fresh_var(Some("a"));
    let p = b.fresh_var(Some("p"));
    let t = b.fresh_var(Some("t"));
    let v = b.fresh_var(Some("v"));
    let f = b.fresh_var(Some("f"));
    b.push_class(VarSet::from_vec(vec![a, p, t, v]));
    b.set_manifestations(VarSet::singleton(f));
    b.clause_codes(&[-(a as i64), f as i64]);
    b.clause_codes(&[-(p as i64), f as i64]);
    b.clause_codes(&[-(t as i64), f as i64]);
    b.clause_codes(&[-(v as i64), f as i64]);
    b.clause_codes(&[-(p as i64), -(t as i64)]);
    b.build().expect("tex example is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(vars: &[VarId]) -> VarSet {
        VarSet::from_vec(vars.to_vec())
    }

    #[test]
    fn tex_example_is_accepted_and_classified() {
        let inst = tex_example();
        assert_eq!(inst.num_vars(), 5);
        assert_eq!(inst.hypotheses(), &vs(&[1, 2, 3, 4]));
        assert!(inst.theory().is_3cnf());
        assert!(inst.theory().is_horn());
        assert!(!inst.theory().is_definite_horn());
        assert_eq!(inst.resolve("p"), Some(2));
        assert_eq!(inst.resolve("5"), Some(5));
        assert_eq!(inst.resolve("zz"), None);
    }

    #[test]
    fn overlapping_classes_rejected() {
        let mut b = InstanceBuilder::new();
        let p = b.fresh_var(Some("p"));
        let v = b.fresh_var(Some("v"));
        b.push_class(vs(&[p, v]));
        b.push_class(vs(&[v]));
        b.clause_codes(&[p as i64, v as i64]);
        assert_eq!(b.build().unwrap_err(), InstanceError::OverlappingClasses { var: v });
    }

    #[test]
    fn manifestation_must_occur_in_theory() {
        let mut b = InstanceBuilder::new();
        let h = b.fresh_var(Some("h"));
        let g = b.fresh_var(Some("g"));
        b.push_class(vs(&[h]));
        b.set_manifestations(vs(&[g]));
        b.clause_codes(&[h as i64, -(g as i64)]);
        assert!(b.build().is_ok());

        let mut b = InstanceBuilder::new();
        let h = b.fresh_var(Some("h"));
        let g = b.fresh_var(Some("g"));
        b.push_class(vs(&[h, g]));
        b.set_manifestations(vs(&[g]));
        b.clause_codes(&[h as i64]);
        assert_eq!(
            b.build().unwrap_err(),
            InstanceError::ManifestationNotInTheory { var: g }
        );
    }

    #[test]
    fn zero_weight_rejected() {
        let mut b = InstanceBuilder::new();
        let h = b.fresh_var(None);
        b.push_class(vs(&[h]));
        b.clause_codes(&[h as i64]);
        b.set_weight(h, 0);
        assert_eq!(b.build().unwrap_err(), InstanceError::NonpositiveWeight { var: h });
    }

    #[test]
    fn partial_weights_rejected() {
        let mut b = InstanceBuilder::new();
        let h1 = b.fresh_var(None);
        let h2 = b.fresh_var(None);
        b.push_class(vs(&[h1, h2]));
        b.clause_codes(&[h1 as i64, h2 as i64]);
        b.set_weight(h1, 2);
        assert_eq!(b.build().unwrap_err(), InstanceError::MissingWeight { var: h2 });
    }

    #[test]
    fn candidate_must_be_hypotheses() {
        let mut b = InstanceBuilder::new();
        let h = b.fresh_var(None);
        let x = b.fresh_var(None);
        b.push_class(vs(&[h]));
        b.clause_codes(&[h as i64, x as i64]);
        b.set_candidate(Some(vs(&[x])));
        assert_eq!(b.build().unwrap_err(), InstanceError::CandidateNotHypotheses { var: x });
    }

    #[test]
    fn unused_variable_rejected() {
        let names = vec![None, None];
        let classes = vec![VarSet::singleton(1)];
        let theory = Theory::new(vec![Clause::from_codes(&[1]).unwrap()]);
        let err = Instance::new(2, names, classes, VarSet::new(), theory, None, None);
        assert_eq!(err.unwrap_err(), InstanceError::UnusedVar { var: 2 });
    }

    #[test]
    fn clause_canonical_form() {
        let c = Clause::from_codes(&[5, -2, 5, -2]).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.literals(), &[Literal::neg(2), Literal::pos(5)]);
        assert!(!c.is_tautology());
        let t = Clause::from_codes(&[3, -3]).unwrap();
        assert!(t.is_tautology());
        assert_eq!(t.num_vars(), 1);
    }

    #[test]
    fn clause_order_is_length_then_lex() {
        let a = Clause::from_codes(&[1]).unwrap();
        let b = Clause::from_codes(&[-1]).unwrap();
        let c = Clause::from_codes(&[1, 2]).unwrap();
        let d = Clause::from_codes(&[-1, 2]).unwrap();
        let mut v = vec![d.clone(), c.clone(), b.clone(), a.clone()];
        v.sort();
        assert_eq!(v, vec![a, b, c, d]);
    }

    #[test]
    fn theory_flags() {
        let t = Theory::new(vec![
            Clause::from_codes(&[1, 2, 3, 4]).unwrap(),
        ]);
        assert!(!t.is_3cnf());
        assert!(!t.is_horn());
        let t = Theory::new(vec![Clause::from_codes(&[-1, 2]).unwrap()]);
        assert!(t.is_3cnf() && t.is_horn() && t.is_definite_horn());
    }

    #[test]
    fn instances_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Instance>();
        assert_send_sync::<Theory>();
        assert_send_sync::<VarSet>();
    }

    #[test]
    fn instance_equality_ignores_names() {
        let a = tex_example();
        let mut b = InstanceBuilder::new();
        for _ in 0..5 {
            b.fresh_var(None);
        }
        b.push_class(vs(&[1, 2, 3, 4]));
        b.set_manifestations(vs(&[5]));
        b.clause_codes(&[-1, 5]);
        b.clause_codes(&[-2, 5]);
        b.clause_codes(&[-3, 5]);
        b.clause_codes(&[-4, 5]);
        b.clause_codes(&[-2, -3]);
        let b = b.build().unwrap();
        assert_eq!(a, b);
    }
}
