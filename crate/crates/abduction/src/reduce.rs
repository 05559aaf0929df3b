//! Instance transformations and the machinery for checking that their
//! fixed parts depend only on instance size.
//!
//! The central construction maps an instance `<H, M, T>` to one whose
//! hypothesis set and theory are determined by the clause universe over the
//! instance's variables alone: every universe clause `g_i` gets a pair of
//! fresh indicator hypotheses `c_i`, `d_i`, the theory becomes
//! `{not c_i or not d_i} + {c_i -> g_i}`, and the manifestations force
//! `c_i` exactly for the clauses of `T` (and `d_i` for the rest). Solutions
//! of the transformed instance are the original solutions with that forced
//! indicator set adjoined.
//!
//! Around it sit the padding transformation (fresh hypotheses and
//! tautologies to equalize the size parameters), their composition, the
//! classification / representative / extension functions, the
//! first-of-first query shift for prioritized instances, the definite-Horn
//! replication, and an executable representative-equivalence check.

use std::collections::BTreeMap;
use std::fmt;

use crate::instance::{
    Clause, Instance, InstanceBuilder, InstanceError, Literal, VarId, VarSet,
};
use crate::order::{self, OrderError, OrderKind};
use crate::solve::{SolveError, Solver};

/// Clause-universe dialects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    /// All non-tautological clauses of 1..=3 distinct variables.
    General,
    /// The subset with at most one positive literal.
    Horn,
    /// The subset with exactly one positive literal.
    DefiniteHorn,
}

/// The canonically ordered set of all clauses of length up to three over a
/// variable set, restricted to a dialect. Clause indices are reproducible
/// across runs: position `i` always holds the same clause for the same
/// variable set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseUniverse {
    pub dialect: Dialect,
    pub vars: VarSet,
    pub clauses: Vec<Clause>,
}

impl ClauseUniverse {
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Position of a clause in the universe.
    pub fn index_of(&self, clause: &Clause) -> Option<usize> {
        self.clauses.binary_search(clause).ok()
    }
}

/// Build the clause universe over `vars`: every clause on 1..=3 distinct
/// variables, no tautologies, filtered by dialect.
pub fn pi(vars: &VarSet, dialect: Dialect) -> ClauseUniverse {
    let ids: Vec<VarId> = vars.iter().collect();
    let n = ids.len();
    let mut clauses = Vec::new();
    let mut emit = |chosen: &[VarId]| {
        let k = chosen.len();
        for polarity in 0u32..(1 << k) {
            let lits: Vec<Literal> = chosen
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    if polarity & (1 << i) != 0 {
                        Literal::neg(v)
                    } else {
                        Literal::pos(v)
                    }
                })
                .collect();
            let clause = Clause::new(lits);
            let keep = match dialect {
                Dialect::General => true,
                Dialect::Horn => clause.num_positive() <= 1,
                Dialect::DefiniteHorn => clause.num_positive() == 1,
            };
            if keep {
                clauses.push(clause);
            }
        }
    };
    for a in 0..n {
        emit(&[ids[a]]);
        for b in a + 1..n {
            emit(&[ids[a], ids[b]]);
            for c in b + 1..n {
                emit(&[ids[a], ids[b], ids[c]]);
            }
        }
    }
    clauses.sort();
    clauses.dedup();
    ClauseUniverse { dialect, vars: vars.clone(), clauses }
}

/// Transformation variants: the verification variant also maps the
/// candidate explanation, the prioritized variant keeps the class
/// structure (fresh hypotheses go to the first class).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Verify,
    Prio,
}

impl Variant {
    /// The natural variant for an instance: prioritized when it has more
    /// than one class, verification-shaped when it carries a candidate.
    pub fn for_instance(inst: &Instance) -> Variant {
        if inst.num_classes() > 1 {
            Variant::Prio
        } else if inst.candidate().is_some() {
            Variant::Verify
        } else {
            Variant::Plain
        }
    }
}

/// Shapes of representative instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReprShape {
    Plain,
    /// Plain plus an empty candidate explanation.
    Verify,
    /// `c` priority classes of `c` hypotheses each.
    Prio,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReduceError {
    ClauseOutsideUniverse { clause: String },
    WeightsUnsupported,
    NeedsCandidate,
    NeedsPrioVariant,
    PrioritizedUnsupported,
    NotDefiniteHorn,
    ClassBelowInstance { requested: u32, class: u32 },
    ZeroClass,
    NotAHypothesis { var: VarId },
    MissingOption { option: &'static str },
    NoHypotheses,
    Instance(InstanceError),
    Solve(SolveError),
    Order(OrderError),
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::ClauseOutsideUniverse { clause } => {
                write!(f, "theory clause `{clause}` has more than 3 distinct variables")
            }
            ReduceError::WeightsUnsupported => {
                write!(f, "weighted instances are not supported by this transformation")
            }
            ReduceError::NeedsCandidate => {
                write!(f, "verification variant requires a candidate explanation")
            }
            ReduceError::NeedsPrioVariant => {
                write!(f, "prioritized instance requires the prioritized variant")
            }
            ReduceError::PrioritizedUnsupported => {
                write!(f, "prioritized instances are not supported by this transformation")
            }
            ReduceError::NotDefiniteHorn => write!(f, "theory is not definite Horn"),
            ReduceError::ClassBelowInstance { requested, class } => {
                write!(f, "target size {requested} is below the instance's class {class}")
            }
            ReduceError::ZeroClass => write!(f, "representative instances need class at least 1"),
            ReduceError::NotAHypothesis { var } => {
                write!(f, "variable {var} is not a hypothesis")
            }
            ReduceError::MissingOption { option } => write!(f, "missing option {option}"),
            ReduceError::NoHypotheses => write!(f, "instance has no hypotheses"),
            ReduceError::Instance(e) => write!(f, "transformed instance invalid: {e}"),
            ReduceError::Solve(e) => write!(f, "{e}"),
            ReduceError::Order(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ReduceError {}

impl From<InstanceError> for ReduceError {
    fn from(e: InstanceError) -> Self {
        ReduceError::Instance(e)
    }
}

impl From<SolveError> for ReduceError {
    fn from(e: SolveError) -> Self {
        ReduceError::Solve(e)
    }
}

impl From<OrderError> for ReduceError {
    fn from(e: OrderError) -> Self {
        ReduceError::Order(e)
    }
}

/// A transformed instance together with the bookkeeping needed to relate
/// its solutions to the input's: the input-to-output variable map, the
/// indicator variables per universe clause, the forced indicator set, and
/// any fresh role variables.
#[derive(Clone, Debug)]
pub struct ReductionRecord {
    pub output: Instance,
    /// Input variable id to output variable id.
    pub var_map: BTreeMap<VarId, VarId>,
    /// `c_i` per universe clause, aligned with `universe.clauses`.
    pub c_index: Vec<VarId>,
    /// `d_i` per universe clause.
    pub d_index: Vec<VarId>,
    /// Replica ids per universe clause (definite-Horn replication).
    pub replicas: Vec<Vec<VarId>>,
    /// Indicator variables every solution of the output must contain.
    pub forced: VarSet,
    /// Fresh variables by role name (`t`, `s`, `u`, `v`, padding).
    pub roles: BTreeMap<String, VarId>,
    pub universe: Option<ClauseUniverse>,
}

impl ReductionRecord {
    fn plain(output: Instance, var_map: BTreeMap<VarId, VarId>) -> Self {
        ReductionRecord {
            output,
            var_map,
            c_index: Vec::new(),
            d_index: Vec::new(),
            replicas: Vec::new(),
            forced: VarSet::new(),
            roles: BTreeMap::new(),
            universe: None,
        }
    }

    /// Map an input-side variable set to output ids.
    pub fn map_set(&self, set: &VarSet) -> VarSet {
        set.iter().map(|v| *self.var_map.get(&v).expect("input variable in map")).collect()
    }

    /// Map an input-side explanation and adjoin the forced indicators: the
    /// shape of the output's solutions.
    pub fn lift(&self, set: &VarSet) -> VarSet {
        self.map_set(set).union(&self.forced)
    }
}

fn identity_map(inst: &Instance) -> BTreeMap<VarId, VarId> {
    (1..=inst.num_vars()).map(|v| (v, v)).collect()
}

/// The classification function: the size class of an instance.
///
/// Plain instances measure `max(|H|, |Var(T) \ H|)`; prioritized instances
/// also count the number of classes and each class's size.
pub fn class_of(inst: &Instance) -> u32 {
    let extra = inst.extra_vars().len() as u32;
    if inst.num_classes() <= 1 {
        (inst.hypotheses().len() as u32).max(extra)
    } else {
        let m = inst.num_classes() as u32;
        let biggest = inst.classes().iter().map(|c| c.len() as u32).max().unwrap_or(0);
        m.max(biggest).max(extra)
    }
}

/// The representative function: the canonical instance of a size class.
/// Its theory is the full clause universe, so it depends on nothing but
/// `c`; `class_of(repr_instance(c, shape)) == c`.
pub fn repr_instance(c: u32, shape: ReprShape) -> Result<Instance, ReduceError> {
    if c == 0 {
        return Err(ReduceError::ZeroClass);
    }
    let mut b = InstanceBuilder::new();
    match shape {
        ReprShape::Plain | ReprShape::Verify => {
            let hyps: VarSet = (0..c).map(|i| b.fresh_var(Some(&format!("h{}", i + 1)))).collect();
            for i in 0..c {
                b.fresh_var(Some(&format!("x{}", i + 1)));
            }
            b.push_class(hyps);
        }
        ReprShape::Prio => {
            let mut classes = Vec::new();
            for i in 1..=c {
                let class: VarSet =
                    (1..=c).map(|j| b.fresh_var(Some(&format!("h{i}_{j}")))).collect();
                classes.push(class);
            }
            for i in 0..c {
                b.fresh_var(Some(&format!("x{}", i + 1)));
            }
            for class in classes {
                b.push_class(class);
            }
        }
    }
    let all_vars: VarSet = (1..=b.num_vars()).collect();
    for clause in pi(&all_vars, Dialect::General).clauses {
        b.push_clause(clause);
    }
    if shape == ReprShape::Verify {
        b.set_candidate(Some(VarSet::new()));
    }
    Ok(b.build()?)
}

/// The extension function: pad an instance to a larger size class by adding
/// tautologies over fresh variables. Solutions are untouched.
pub fn exte(inst: &Instance, n: u32) -> Result<Instance, ReduceError> {
    let class = class_of(inst);
    if n < class {
        return Err(ReduceError::ClassBelowInstance { requested: n, class });
    }
    let r = inst.extra_vars().len() as u32;
    let mut b = builder_from(inst);
    for i in r..n {
        let v = b.fresh_named(&format!("x{}", i + 1));
        b.clause_codes(&[v as i64, -(v as i64)]);
    }
    Ok(b.build()?)
}

/// Copy an instance into a builder, keeping ids and names.
fn builder_from(inst: &Instance) -> InstanceBuilder {
    let mut b = InstanceBuilder::new();
    for v in 1..=inst.num_vars() {
        b.fresh_var(inst.name(v));
    }
    for class in inst.classes() {
        b.push_class(class.clone());
    }
    b.set_manifestations(inst.manifestations().clone());
    for clause in inst.theory().clauses() {
        b.push_clause(clause.clone());
    }
    if let Some(w) = inst.weights() {
        for (&v, &weight) in w {
            b.set_weight(v, weight);
        }
    }
    b.set_candidate(inst.candidate().cloned());
    b
}

fn reject_weights(inst: &Instance) -> Result<(), ReduceError> {
    if inst.weights().is_some() {
        Err(ReduceError::WeightsUnsupported)
    } else {
        Ok(())
    }
}

fn check_variant(inst: &Instance, variant: Variant) -> Result<(), ReduceError> {
    match variant {
        Variant::Plain | Variant::Verify => {
            if inst.num_classes() > 1 {
                return Err(ReduceError::NeedsPrioVariant);
            }
            if variant == Variant::Verify && inst.candidate().is_none() {
                return Err(ReduceError::NeedsCandidate);
            }
        }
        Variant::Prio => {}
    }
    Ok(())
}

/// The indicator-variable transformation.
///
/// Renumbers the instance canonically (hypotheses class by class, then the
/// remaining theory variables), builds the general clause universe over all
/// variables, and produces:
///
/// * hypotheses: the originals plus `c_i` and `d_i` per universe clause
///   (into the first class for the prioritized variant);
/// * manifestations: the originals plus `c_i` for clauses of the input
///   theory and `d_i` for the rest (tautological input clauses are skipped:
///   they constrain nothing and fall outside the universe);
/// * theory: `{not c_i or not d_i}` and `{c_i -> g_i}` over the whole
///   universe, nothing else.
///
/// The output's hypothesis partition and theory depend only on the class
/// sizes and variable counts of the input, never on its clauses; the
/// clauses move entirely into the manifestation choice.
pub fn transform_f(inst: &Instance, variant: Variant) -> Result<ReductionRecord, ReduceError> {
    reject_weights(inst)?;
    check_variant(inst, variant)?;
    for clause in inst.theory().clauses() {
        if !clause.is_tautology() && (clause.num_vars() > 3 || clause.is_empty()) {
            return Err(ReduceError::ClauseOutsideUniverse { clause: clause.to_string() });
        }
    }

    // canonical renumbering: hypotheses class by class, then extra vars
    let mut var_map: BTreeMap<VarId, VarId> = BTreeMap::new();
    let mut b = InstanceBuilder::new();
    let prio = variant == Variant::Prio;
    for (ci, class) in inst.classes().iter().enumerate() {
        for (j, v) in class.iter().enumerate() {
            let name = if prio {
                format!("h{}_{}", ci + 1, j + 1)
            } else {
                format!("h{}", var_map.len() + 1)
            };
            let nv = b.fresh_var(Some(&name));
            var_map.insert(v, nv);
        }
    }
    let n = var_map.len() as u32;
    for (i, v) in inst.extra_vars().iter().enumerate() {
        let nv = b.fresh_var(Some(&format!("x{}", i + 1)));
        var_map.insert(v, nv);
    }

    let all_vars: VarSet = (1..=b.num_vars()).collect();
    let universe = pi(&all_vars, Dialect::General);
    let k = universe.len();
    let c_index: Vec<VarId> =
        (0..k).map(|i| b.fresh_var(Some(&format!("c{}", i + 1)))).collect();
    let d_index: Vec<VarId> =
        (0..k).map(|i| b.fresh_var(Some(&format!("d{}", i + 1)))).collect();

    // renumbered image of the input theory, tautologies dropped
    let mapped_theory: Vec<Clause> = inst
        .theory()
        .clauses()
        .iter()
        .filter(|c| !c.is_tautology())
        .map(|c| {
            Clause::new(
                c.literals()
                    .iter()
                    .map(|l| Literal { var: var_map[&l.var], negated: l.negated })
                    .collect(),
            )
        })
        .collect();

    let mut forced = VarSet::new();
    for (i, gamma) in universe.clauses.iter().enumerate() {
        if mapped_theory.contains(gamma) {
            forced.insert(c_index[i]);
        } else {
            forced.insert(d_index[i]);
        }
        b.push_clause(Clause::new(vec![Literal::neg(c_index[i]), Literal::neg(d_index[i])]));
        let mut impl_lits = vec![Literal::neg(c_index[i])];
        impl_lits.extend_from_slice(gamma.literals());
        b.push_clause(Clause::new(impl_lits));
    }

    // classes: indicators join the (first) class
    let indicator_set: VarSet =
        c_index.iter().chain(d_index.iter()).copied().collect();
    let mapped_class = |class: &VarSet| -> VarSet { class.iter().map(|v| var_map[&v]).collect() };
    if prio {
        for (ci, class) in inst.classes().iter().enumerate() {
            let mapped = mapped_class(class);
            b.push_class(if ci == 0 { mapped.union(&indicator_set) } else { mapped });
        }
    } else {
        let mapped: VarSet = (1..=n).collect();
        b.push_class(mapped.union(&indicator_set));
    }

    let mapped_m: VarSet = inst.manifestations().iter().map(|v| var_map[&v]).collect();
    b.set_manifestations(mapped_m.union(&forced));

    match variant {
        Variant::Plain => {}
        Variant::Verify | Variant::Prio => {
            if let Some(cand) = inst.candidate() {
                let mapped: VarSet = cand.iter().map(|v| var_map[&v]).collect();
                b.set_candidate(Some(mapped.union(&forced)));
            }
        }
    }

    let output = b.build()?;
    Ok(ReductionRecord {
        output,
        var_map,
        c_index,
        d_index,
        replicas: Vec::new(),
        forced,
        roles: BTreeMap::new(),
        universe: Some(universe),
    })
}

fn gc_record(inst: &Instance, c: u32, variant: Variant) -> Result<ReductionRecord, ReduceError> {
    reject_weights(inst)?;
    check_variant(inst, variant)?;
    let class = class_of(inst);
    if c < class {
        return Err(ReduceError::ClassBelowInstance { requested: c, class });
    }
    let mut b = builder_from(inst);
    // rebuild classes from scratch with padding
    let mut roles = BTreeMap::new();
    let prio = variant == Variant::Prio;
    let mut new_classes: Vec<VarSet> = Vec::new();
    if prio {
        // every class grows to c hypotheses, and full classes are appended
        // until there are c classes
        for (ci, class) in inst.classes().iter().enumerate() {
            let mut grown = class.clone();
            for j in class.len() as u32..c {
                let v = b.fresh_named(&format!("h{}_{}", ci + 1, j + 1));
                roles.insert(format!("pad-h{}_{}", ci + 1, j + 1), v);
                grown.insert(v);
            }
            new_classes.push(grown);
        }
        for ci in inst.num_classes() as u32..c {
            let mut fresh = VarSet::new();
            for j in 0..c {
                let v = b.fresh_named(&format!("h{}_{}", ci + 1, j + 1));
                roles.insert(format!("pad-h{}_{}", ci + 1, j + 1), v);
                fresh.insert(v);
            }
            new_classes.push(fresh);
        }
    } else {
        let mut grown = inst.hypotheses().clone();
        for j in inst.hypotheses().len() as u32..c {
            let v = b.fresh_named(&format!("h{}", j + 1));
            roles.insert(format!("pad-h{}", j + 1), v);
            grown.insert(v);
        }
        new_classes.push(grown);
    }
    // tautology padding so that exactly c theory variables are not
    // hypotheses
    let r = inst.extra_vars().len() as u32;
    for i in r..c {
        let v = b.fresh_named(&format!("x{}", i + 1));
        roles.insert(format!("pad-x{}", i + 1), v);
        b.clause_codes(&[v as i64, -(v as i64)]);
    }

    b.replace_classes(new_classes);
    let output = b.build()?;
    let var_map = identity_map(inst);
    let mut rec = ReductionRecord::plain(output, var_map);
    rec.roles = roles;
    Ok(rec)
}

/// The padding transformation: fresh hypotheses (never mentioned by the
/// theory) and fresh tautology variables until every size parameter equals
/// `c`. Solutions of the output are the input's solutions with any subset
/// of the padding hypotheses adjoined; under irredundant orderings the
/// minimal solutions are exactly preserved.
pub fn transform_gc(inst: &Instance, c: u32, variant: Variant) -> Result<Instance, ReduceError> {
    Ok(gc_record(inst, c, variant)?.output)
}

/// The composed reduction: pad to the instance's class, then apply the
/// indicator transformation. Everything in the output except the
/// manifestation set (and candidate contents) depends only on
/// `class_of(inst)`.
pub fn transform_i(inst: &Instance, variant: Variant) -> Result<ReductionRecord, ReduceError> {
    let c = class_of(inst);
    let padded = gc_record(inst, c, variant)?;
    let reduced = transform_f(&padded.output, variant)?;
    let var_map: BTreeMap<VarId, VarId> =
        (1..=inst.num_vars()).map(|v| (v, reduced.var_map[&v])).collect();
    Ok(ReductionRecord { var_map, ..reduced })
}

/// The first-of-first shift for prioritized instances.
///
/// Adds a new most-likely class `{t, s}`, two fresh manifestations `u, v`,
/// and the clauses `target -> u`, `t -> v`, `s -> u`, `s -> v`. The target
/// hypothesis is relevant (resp. necessary) in the input iff `t` is in the
/// output, for meaningful irredundant orderings.
pub fn transform_first_of_first(
    inst: &Instance,
    target: VarId,
) -> Result<ReductionRecord, ReduceError> {
    reject_weights(inst)?;
    if !inst.hypotheses().contains(target) {
        return Err(ReduceError::NotAHypothesis { var: target });
    }
    let mut b = builder_from(inst);
    let t = b.fresh_named("t");
    let s = b.fresh_named("s");
    let u = b.fresh_named("u");
    let v = b.fresh_named("v");
    let mut classes = vec![VarSet::from_vec(vec![t, s])];
    classes.extend(inst.classes().iter().cloned());
    b.replace_classes(classes);
    b.set_manifestations(inst.manifestations().union(&VarSet::from_vec(vec![u, v])));
    b.clause_codes(&[-(target as i64), u as i64]);
    b.clause_codes(&[-(t as i64), v as i64]);
    b.clause_codes(&[-(s as i64), u as i64]);
    b.clause_codes(&[-(s as i64), v as i64]);
    let output = b.build()?;
    let mut rec = ReductionRecord::plain(output, identity_map(inst));
    rec.roles =
        [("t", t), ("s", s), ("u", u), ("v", v)].map(|(k, v)| (k.to_string(), v)).into();
    Ok(rec)
}

/// The definite-Horn replication.
///
/// Each clause of the definite-Horn universe over the instance's variables
/// gets `|H| + 1` replica hypotheses `c^j_i`; the theory clause becomes
/// `g_i or not c^1_i or ... or not c^{n+1}_i`, and the replicas of the
/// input's own clauses join the manifestations. With fewer than `n + 1`
/// replicas assumed, a universe clause contributes nothing, so explanations
/// and their cardinality-minimality correspond: `S` is a (minimal)
/// explanation of the input iff `S + {c^j_i | g_i in T}` is one of the
/// output, provided the input has explanations at all.
pub fn transform_dh_replicate(inst: &Instance) -> Result<ReductionRecord, ReduceError> {
    reject_weights(inst)?;
    if inst.num_classes() > 1 {
        return Err(ReduceError::PrioritizedUnsupported);
    }
    if !inst.theory().is_definite_horn() {
        return Err(ReduceError::NotDefiniteHorn);
    }
    for clause in inst.theory().clauses() {
        if !clause.is_tautology() && clause.num_vars() > 3 {
            return Err(ReduceError::ClauseOutsideUniverse { clause: clause.to_string() });
        }
    }
    let n = inst.hypotheses().len() as u32;
    let all_vars: VarSet = (1..=inst.num_vars()).collect();
    let universe = pi(&all_vars, Dialect::DefiniteHorn);

    let mut b = InstanceBuilder::new();
    for v in 1..=inst.num_vars() {
        b.fresh_var(inst.name(v));
    }
    let mut replicas: Vec<Vec<VarId>> = Vec::with_capacity(universe.len());
    for i in 0..universe.len() {
        let mut row = Vec::with_capacity(n as usize + 1);
        for j in 0..=n {
            row.push(b.fresh_named(&format!("c{}_{}", i + 1, j + 1)));
        }
        replicas.push(row);
    }

    let mut forced = VarSet::new();
    for (i, gamma) in universe.clauses.iter().enumerate() {
        let mut lits = gamma.literals().to_vec();
        lits.extend(replicas[i].iter().map(|&c| Literal::neg(c)));
        b.push_clause(Clause::new(lits));
        if inst.theory().contains(gamma) {
            for &c in &replicas[i] {
                forced.insert(c);
            }
        }
    }
    let hyps: VarSet =
        inst.hypotheses().iter().chain(replicas.iter().flatten().copied()).collect();
    b.push_class(hyps);
    b.set_manifestations(inst.manifestations().union(&forced));
    b.set_candidate(inst.candidate().cloned());
    let output = b.build()?;
    Ok(ReductionRecord {
        output,
        var_map: identity_map(inst),
        c_index: Vec::new(),
        d_index: Vec::new(),
        replicas,
        forced,
        roles: BTreeMap::new(),
        universe: Some(universe),
    })
}

/// Everything of an instance that is known before the query arrives: the
/// hypothesis partition and the theory. Manifestations are emptied and the
/// candidate dropped, so two fixed parts can be compared directly.
pub fn fixed_part(inst: &Instance) -> Instance {
    inst.with_manifestations(VarSet::new())
        .and_then(|i| i.with_candidate(None))
        .expect("shrinking the varying part keeps the instance valid")
}

/// A reduction from the abduction problem to itself, as used by the
/// representative-equivalence check.
pub trait InstanceReduction: Sync {
    fn name(&self) -> &'static str;
    /// Shape of the representative instances this reduction pairs with.
    fn repr_shape(&self) -> ReprShape;
    fn reduce(&self, inst: &Instance) -> Result<ReductionRecord, ReduceError>;
}

/// The composed reduction, in any of its three variants.
pub struct ReductionI {
    pub variant: Variant,
}

impl InstanceReduction for ReductionI {
    fn name(&self) -> &'static str {
        match self.variant {
            Variant::Plain => "i",
            Variant::Verify => "i-verify",
            Variant::Prio => "i-prio",
        }
    }

    fn repr_shape(&self) -> ReprShape {
        match self.variant {
            Variant::Plain => ReprShape::Plain,
            Variant::Verify => ReprShape::Verify,
            Variant::Prio => ReprShape::Prio,
        }
    }

    fn reduce(&self, inst: &Instance) -> Result<ReductionRecord, ReduceError> {
        transform_i(inst, self.variant)
    }
}

/// The identity reduction. Its fixed part depends on the whole instance,
/// not just its class, so it fails representative equivalence; it exists as
/// the negative control for the checker.
pub struct IdentityReduction;

impl InstanceReduction for IdentityReduction {
    fn name(&self) -> &'static str {
        "identity"
    }

    fn repr_shape(&self) -> ReprShape {
        ReprShape::Plain
    }

    fn reduce(&self, inst: &Instance) -> Result<ReductionRecord, ReduceError> {
        Ok(ReductionRecord::plain(inst.clone(), identity_map(inst)))
    }
}

pub fn reduction_registry() -> &'static [&'static dyn InstanceReduction] {
    static REDUCTIONS: [&dyn InstanceReduction; 4] = [
        &ReductionI { variant: Variant::Plain },
        &ReductionI { variant: Variant::Verify },
        &ReductionI { variant: Variant::Prio },
        &IdentityReduction,
    ];
    &REDUCTIONS
}

/// Decision problems parameterized by an ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Exists,
    Verify,
    Relevant,
    Necessary,
}

/// Outcome of a representative-equivalence check.
#[derive(Clone, Debug)]
pub struct EquivReport {
    pub pass: bool,
    pub transcript: Vec<String>,
}

fn answer_problem(
    problem: Problem,
    kind: OrderKind,
    inst: &Instance,
) -> Result<bool, ReduceError> {
    let order = order::bind(kind, inst)?;
    let mut solver = Solver::new(inst);
    Ok(match problem {
        Problem::Exists => solver.exists()?.answer,
        Problem::Verify => {
            let candidate = inst.candidate().cloned().unwrap_or_default();
            solver.verify_minimal(order.as_ref(), &candidate)?.answer
        }
        Problem::Relevant | Problem::Necessary => {
            let first = inst
                .classes()
                .first()
                .and_then(|c| c.iter().next())
                .ok_or(ReduceError::NoHypotheses)?;
            let kind = if problem == Problem::Relevant {
                crate::solve::QueryKind::Relevant
            } else {
                crate::solve::QueryKind::Necessary
            };
            solver.query_variable(order.as_ref(), kind, first)?.answer
        }
    })
}

/// Check representative equivalence of a reduction on one instance: the
/// answer to `problem` on the reduced instance must not change when the
/// reduced fixed part is replaced by the one computed from the
/// representative instance of the same class, keeping the varying part
/// (manifestations and candidate).
pub fn check_representative_equivalence(
    reduction: &dyn InstanceReduction,
    problem: Problem,
    kind: OrderKind,
    inst: &Instance,
) -> Result<EquivReport, ReduceError> {
    let mut transcript = Vec::new();
    let class = class_of(inst);
    transcript.push(format!("reduction {}, class {}", reduction.name(), class));
    let reduced = reduction.reduce(inst)?;
    let repr = repr_instance(class, reduction.repr_shape())?;
    let reduced_repr = reduction.reduce(&repr)?;

    let assembled = reduced_repr
        .output
        .with_manifestations(reduced.output.manifestations().clone())
        .and_then(|i| i.with_candidate(reduced.output.candidate().cloned()));
    let assembled = match assembled {
        Ok(inst) => inst,
        Err(e) => {
            transcript.push(format!(
                "varying part does not fit the representative fixed part: {e}"
            ));
            return Ok(EquivReport { pass: false, transcript });
        }
    };

    let direct = answer_problem(problem, kind, &reduced.output)?;
    let via_repr = answer_problem(problem, kind, &assembled)?;
    transcript.push(format!(
        "{:?} on reduced instance: {direct}; on representative fixed part with same varying part: {via_repr}",
        problem
    ));
    Ok(EquivReport { pass: direct == via_repr, transcript })
}

/// Options accepted by the named transformations.
#[derive(Clone, Copy, Debug, Default)]
pub struct TransformOptions {
    /// Target size for the padding transformation.
    pub c: Option<u32>,
    /// Target hypothesis for the first-of-first shift.
    pub target: Option<VarId>,
}

/// A named transformation, selectable at run time.
pub trait Transform: Sync {
    fn name(&self) -> &'static str;
    fn apply(&self, inst: &Instance, opts: &TransformOptions)
    -> Result<ReductionRecord, ReduceError>;
}

struct FTransform;
struct GcTransform;
struct ITransform;
struct FirstOfFirstTransform;
struct DhReplicateTransform;

impl Transform for FTransform {
    fn name(&self) -> &'static str {
        "f"
    }

    fn apply(&self, inst: &Instance, _: &TransformOptions) -> Result<ReductionRecord, ReduceError> {
        transform_f(inst, Variant::for_instance(inst))
    }
}

impl Transform for GcTransform {
    fn name(&self) -> &'static str {
        "gc"
    }

    fn apply(
        &self,
        inst: &Instance,
        opts: &TransformOptions,
    ) -> Result<ReductionRecord, ReduceError> {
        let c = opts.c.ok_or(ReduceError::MissingOption { option: "--c" })?;
        gc_record(inst, c, Variant::for_instance(inst))
    }
}

impl Transform for ITransform {
    fn name(&self) -> &'static str {
        "i"
    }

    fn apply(&self, inst: &Instance, _: &TransformOptions) -> Result<ReductionRecord, ReduceError> {
        transform_i(inst, Variant::for_instance(inst))
    }
}

impl Transform for FirstOfFirstTransform {
    fn name(&self) -> &'static str {
        "first-of-first"
    }

    fn apply(
        &self,
        inst: &Instance,
        opts: &TransformOptions,
    ) -> Result<ReductionRecord, ReduceError> {
        let target = opts.target.ok_or(ReduceError::MissingOption { option: "--var" })?;
        transform_first_of_first(inst, target)
    }
}

impl Transform for DhReplicateTransform {
    fn name(&self) -> &'static str {
        "dh-replicate"
    }

    fn apply(&self, inst: &Instance, _: &TransformOptions) -> Result<ReductionRecord, ReduceError> {
        transform_dh_replicate(inst)
    }
}

/// All named transformations.
pub fn transform_registry() -> &'static [&'static dyn Transform] {
    static TRANSFORMS: [&dyn Transform; 5] = [
        &FTransform,
        &GcTransform,
        &ITransform,
        &FirstOfFirstTransform,
        &DhReplicateTransform,
    ];
    &TRANSFORMS
}

pub fn transform_by_name(name: &str) -> Option<&'static dyn Transform> {
    transform_registry().iter().copied().find(|t| t.name() == name)
}
