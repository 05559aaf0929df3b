//! Preference orderings over explanations.
//!
//! Each ordering is a strategy implementing [`PreferenceOrder`]; the
//! [`registry`] lists every variant under the name used on the command line,
//! and [`bind`] instantiates one for a concrete instance (pulling in the
//! priority classes or weights it needs).
//!
//! Six orderings are provided:
//!
//! * `none`        - the universal relation (no preference),
//! * `subset`      - set inclusion,
//! * `card`        - cardinality,
//! * `prio-subset` - class-by-class inclusion, least likely class first,
//! * `prio-card`   - class-by-class cardinality, least likely class first,
//! * `penalty`     - total hypothesis weight.
//!
//! The strict part of an ordering is `A <= B and not B <= A`; with the
//! universal ordering the strict part is empty, so every solution is
//! minimal.

use std::collections::BTreeMap;
use std::fmt;

use crate::instance::{Explanation, Instance, VarId, VarSet};

/// Outcome of comparing two explanations under an ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    StrictlyBetter,
    StrictlyWorse,
    Equivalent,
    Incomparable,
}

impl Comparison {
    pub fn flip(self) -> Comparison {
        match self {
            Comparison::StrictlyBetter => Comparison::StrictlyWorse,
            Comparison::StrictlyWorse => Comparison::StrictlyBetter,
            other => other,
        }
    }
}

/// The ordering variants, by identity only; see [`bind`] for instantiation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Universal,
    SubsetPreference,
    CardinalityPreference,
    SubsetPrioritization,
    CardinalityPrioritization,
    Penalization,
}

impl OrderKind {
    pub fn cli_name(self) -> &'static str {
        match self {
            OrderKind::Universal => "none",
            OrderKind::SubsetPreference => "subset",
            OrderKind::CardinalityPreference => "card",
            OrderKind::SubsetPrioritization => "prio-subset",
            OrderKind::CardinalityPrioritization => "prio-card",
            OrderKind::Penalization => "penalty",
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.cli_name())
    }
}

/// Errors raised when an ordering cannot be bound to an instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderError {
    MissingWeights,
    UnknownOrdering(String),
}

impl fmt::Display for OrderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderError::MissingWeights => {
                write!(f, "penalization requires per-hypothesis weights")
            }
            OrderError::UnknownOrdering(name) => write!(f, "unknown ordering `{name}`"),
        }
    }
}

impl std::error::Error for OrderError {}

/// A plausibility ordering over explanations.
///
/// `le(a, b)` decides the non-strict relation "a is at least as plausible
/// as b". Everything else derives from it.
pub trait PreferenceOrder {
    fn kind(&self) -> OrderKind;

    /// The non-strict relation: `a` is at least as plausible as `b`.
    fn le(&self, a: &Explanation, b: &Explanation) -> bool;

    fn compare(&self, a: &Explanation, b: &Explanation) -> Comparison {
        match (self.le(a, b), self.le(b, a)) {
            (true, true) => Comparison::Equivalent,
            (true, false) => Comparison::StrictlyBetter,
            (false, true) => Comparison::StrictlyWorse,
            (false, false) => Comparison::Incomparable,
        }
    }

    /// The strict part: `a` strictly more plausible than `b`.
    fn strictly_better(&self, a: &Explanation, b: &Explanation) -> bool {
        self.le(a, b) && !self.le(b, a)
    }
}

/// No preference: every pair of explanations is equivalent.
pub struct Universal;

impl PreferenceOrder for Universal {
    fn kind(&self) -> OrderKind {
        OrderKind::Universal
    }

    fn le(&self, _a: &Explanation, _b: &Explanation) -> bool {
        true
    }
}

/// Set-inclusion preference: `A <= B` iff `A` is a subset of `B`.
pub struct SubsetPreference;

impl PreferenceOrder for SubsetPreference {
    fn kind(&self) -> OrderKind {
        OrderKind::SubsetPreference
    }

    fn le(&self, a: &Explanation, b: &Explanation) -> bool {
        a.is_subset(b)
    }
}

/// Cardinality preference: `A <= B` iff `|A| <= |B|`.
pub struct CardinalityPreference;

impl PreferenceOrder for CardinalityPreference {
    fn kind(&self) -> OrderKind {
        OrderKind::CardinalityPreference
    }

    fn le(&self, a: &Explanation, b: &Explanation) -> bool {
        a.len() <= b.len()
    }
}

/// Prioritized set inclusion.
///
/// Explanations are compared class by class starting from the least likely
/// class `H_m`; at the first class where the intersections differ, the one
/// whose intersection is a proper subset wins. Equal intersections
/// everywhere means equal explanations.
pub struct SubsetPrioritization {
    classes: Vec<VarSet>,
}

impl SubsetPrioritization {
    pub fn new(classes: Vec<VarSet>) -> Self {
        SubsetPrioritization { classes }
    }
}

impl PreferenceOrder for SubsetPrioritization {
    fn kind(&self) -> OrderKind {
        OrderKind::SubsetPrioritization
    }

    fn le(&self, a: &Explanation, b: &Explanation) -> bool {
        for class in self.classes.iter().rev() {
            let ai = a.intersection(class);
            let bi = b.intersection(class);
            if ai != bi {
                return ai.is_subset(&bi);
            }
        }
        true
    }
}

/// Prioritized cardinality: lexicographic comparison of the per-class
/// counts `(|A ∩ H_m|, ..., |A ∩ H_1|)`, least likely class most
/// significant.
pub struct CardinalityPrioritization {
    classes: Vec<VarSet>,
}

impl CardinalityPrioritization {
    pub fn new(classes: Vec<VarSet>) -> Self {
        CardinalityPrioritization { classes }
    }
}

impl PreferenceOrder for CardinalityPrioritization {
    fn kind(&self) -> OrderKind {
        OrderKind::CardinalityPrioritization
    }

    fn le(&self, a: &Explanation, b: &Explanation) -> bool {
        for class in self.classes.iter().rev() {
            let ai = a.intersection(class).len();
            let bi = b.intersection(class).len();
            if ai != bi {
                return ai < bi;
            }
        }
        true
    }
}

/// Penalization: compare total hypothesis weight. Variables absent from the
/// weight map count zero; instance validation guarantees total maps with
/// weights of at least 1.
pub struct Penalization {
    weights: BTreeMap<VarId, u64>,
}

impl Penalization {
    pub fn new(weights: BTreeMap<VarId, u64>) -> Self {
        Penalization { weights }
    }

    fn total(&self, set: &VarSet) -> u64 {
        set.iter().map(|v| self.weights.get(&v).copied().unwrap_or(0)).sum()
    }
}

impl PreferenceOrder for Penalization {
    fn kind(&self) -> OrderKind {
        OrderKind::Penalization
    }

    fn le(&self, a: &Explanation, b: &Explanation) -> bool {
        self.total(a) <= self.total(b)
    }
}

/// All ordering variants with their command-line names.
pub fn registry() -> &'static [(&'static str, OrderKind)] {
    &[
        ("none", OrderKind::Universal),
        ("subset", OrderKind::SubsetPreference),
        ("card", OrderKind::CardinalityPreference),
        ("prio-subset", OrderKind::SubsetPrioritization),
        ("prio-card", OrderKind::CardinalityPrioritization),
        ("penalty", OrderKind::Penalization),
    ]
}

/// Look an ordering up by its command-line name.
pub fn by_name(name: &str) -> Result<OrderKind, OrderError> {
    registry()
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, k)| *k)
        .ok_or_else(|| OrderError::UnknownOrdering(name.to_string()))
}

/// Instantiate an ordering for an instance, pulling the classes or weights
/// it needs. Fails when penalization is requested without weights.
pub fn bind(kind: OrderKind, inst: &Instance) -> Result<Box<dyn PreferenceOrder>, OrderError> {
    Ok(match kind {
        OrderKind::Universal => Box::new(Universal),
        OrderKind::SubsetPreference => Box::new(SubsetPreference),
        OrderKind::CardinalityPreference => Box::new(CardinalityPreference),
        OrderKind::SubsetPrioritization => {
            Box::new(SubsetPrioritization::new(inst.classes().to_vec()))
        }
        OrderKind::CardinalityPrioritization => {
            Box::new(CardinalityPrioritization::new(inst.classes().to_vec()))
        }
        OrderKind::Penalization => {
            let weights = inst.weights().ok_or(OrderError::MissingWeights)?;
            Box::new(Penalization::new(weights.clone()))
        }
    })
}

/// Compare two explanations of an instance under an ordering variant.
pub fn compare(
    kind: OrderKind,
    a: &Explanation,
    b: &Explanation,
    inst: &Instance,
) -> Result<Comparison, OrderError> {
    Ok(bind(kind, inst)?.compare(a, b))
}

/// A counterexample found while checking an ordering property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyWitness {
    pub left: VarSet,
    pub right: VarSet,
    /// The adjoined variable, for meaningfulness failures.
    pub adjoined: Option<VarId>,
    pub got: Comparison,
    pub expected: Option<Comparison>,
}

/// Result of checking one ordering property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub pass: bool,
    pub witness: Option<PropertyWitness>,
    pub cases_checked: u64,
}

/// Results for the two ordering properties used by the reduction lemmas.
#[derive(Clone, Debug)]
pub struct OrderingProperties {
    pub meaningful: PropertyCheck,
    pub irredundant: PropertyCheck,
}

fn subsets_of(universe: &VarSet) -> Vec<VarSet> {
    universe.subsets()
}

/// Check that an ordering is meaningful (comparison is invariant under
/// adjoining the same fresh variable to both sides) and irredundant (a
/// proper subset is strictly preferred) over a finite universe.
///
/// The check is exhaustive when the number of cases fits in `budget`;
/// otherwise deterministically seeded sampling of `budget` cases is used.
/// Panics if `budget` is zero.
pub fn check_ordering_properties(
    order: &dyn PreferenceOrder,
    universe: &VarSet,
    budget: u64,
) -> OrderingProperties {
    assert!(budget >= 1, "budget must be at least 1");
    let n = universe.len() as u32;
    let exhaustive = n <= 12 && 4u64.saturating_pow(n).saturating_mul(n as u64 + 1) <= budget;
    let subsets = subsets_of(universe);

    let mut meaningful = PropertyCheck { pass: true, witness: None, cases_checked: 0 };
    let mut irredundant = PropertyCheck { pass: true, witness: None, cases_checked: 0 };

    let check_meaningful = |a: &VarSet, b: &VarSet, h: VarId, m: &mut PropertyCheck| {
        if !m.pass {
            return;
        }
        m.cases_checked += 1;
        let base = order.compare(a, b);
        let lifted = order.compare(&a.with(h), &b.with(h));
        if base != lifted {
            m.pass = false;
            m.witness = Some(PropertyWitness {
                left: a.clone(),
                right: b.clone(),
                adjoined: Some(h),
                got: lifted,
                expected: Some(base),
            });
        }
    };
    let check_irredundant = |a: &VarSet, b: &VarSet, m: &mut PropertyCheck| {
        if !m.pass {
            return;
        }
        if !a.is_proper_subset(b) {
            return;
        }
        m.cases_checked += 1;
        let got = order.compare(a, b);
        if got != Comparison::StrictlyBetter {
            m.pass = false;
            m.witness = Some(PropertyWitness {
                left: a.clone(),
                right: b.clone(),
                adjoined: None,
                got,
                expected: Some(Comparison::StrictlyBetter),
            });
        }
    };

    if exhaustive {
        for a in &subsets {
            for b in &subsets {
                for h in universe.iter() {
                    if !a.contains(h) && !b.contains(h) {
                        check_meaningful(a, b, h, &mut meaningful);
                    }
                }
                check_irredundant(a, b, &mut irredundant);
            }
        }
    } else {
        let mut rng = crate::oracle::Rng::new(0x0a11_ce5e);
        let vars: Vec<VarId> = universe.iter().collect();
        let rand_subset = |rng: &mut crate::oracle::Rng| -> VarSet {
            vars.iter().copied().filter(|_| rng.next_u64() & 1 == 1).collect()
        };
        for _ in 0..budget {
            let a = rand_subset(&mut rng);
            let b = rand_subset(&mut rng);
            let outside: Vec<VarId> =
                vars.iter().copied().filter(|v| !a.contains(*v) && !b.contains(*v)).collect();
            if let Some(&h) = outside.first() {
                check_meaningful(&a, &b, h, &mut meaningful);
            }
            let sup = a.union(&b);
            if a.is_proper_subset(&sup) {
                check_irredundant(&a, &sup, &mut irredundant);
            }
        }
    }

    OrderingProperties { meaningful, irredundant }
}
