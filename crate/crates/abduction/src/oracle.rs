//! Brute-force reference implementation.
//!
//! The oracle decides explanation membership by truth-table evaluation and
//! enumerates all explanations by explicit subset enumeration, so its
//! answers never depend on the search engine it certifies. Instances must
//! stay within the caps (20 theory variables, 2^16 hypothesis subsets).
//!
//! A deterministic, seeded instance generator lives here too; every
//! randomized suite in the repository draws from it so runs are reproducible
//! bit for bit.

use std::fmt;

use crate::instance::{Clause, Explanation, Instance, InstanceBuilder, VarId, VarSet};
use crate::order::PreferenceOrder;

/// Hard limit on truth-table width.
pub const MAX_TABLE_VARS: u32 = 20;

/// Default cap on enumerated hypothesis subsets.
pub const DEFAULT_SUBSET_CAP: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    TooManyVariables { num_vars: u32 },
    SubsetCapExceeded { hypotheses: usize, cap: u64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooManyVariables { num_vars } => {
                write!(f, "oracle limited to {MAX_TABLE_VARS} variables, instance has {num_vars}")
            }
            OracleError::SubsetCapExceeded { hypotheses, cap } => {
                write!(f, "2^{hypotheses} hypothesis subsets exceed the oracle cap {cap}")
            }
        }
    }
}

impl std::error::Error for OracleError {}

/// Full listing of an instance's solutions, with counters.
#[derive(Clone, Debug)]
pub struct OracleReport {
    /// Every explanation, in (size, lexicographic) order.
    pub solutions: Vec<Explanation>,
    /// Minimal explanations under the requested ordering, same order.
    pub minimal: Vec<Explanation>,
    /// Hypothesis subsets examined.
    pub subsets_examined: u64,
    /// Truth-table rows evaluated.
    pub rows_evaluated: u64,
}

/// Sort explanations by cardinality, then lexicographically.
pub fn canonical_sort(sets: &mut [Explanation]) -> &mut [Explanation] {
    sets.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
    sets
}

struct ClauseMasks {
    pos: u32,
    neg: u32,
}

/// Brute-force oracle for one instance. Construction enumerates the full
/// solution set once; queries read from the cached listing.
pub struct Oracle {
    hypotheses: Vec<VarId>,
    solutions: Vec<Explanation>,
    subsets_examined: u64,
    rows_evaluated: u64,
}

impl Oracle {
    pub fn with_cap(inst: &Instance, cap: u64) -> Result<Oracle, OracleError> {
        let num_vars = inst.num_vars();
        if num_vars > MAX_TABLE_VARS {
            return Err(OracleError::TooManyVariables { num_vars });
        }
        let hypotheses: Vec<VarId> = inst.hypotheses().iter().collect();
        if hypotheses.len() >= 63 || (1u64 << hypotheses.len()) > cap {
            return Err(OracleError::SubsetCapExceeded { hypotheses: hypotheses.len(), cap });
        }

        let masks: Vec<ClauseMasks> = inst
            .theory()
            .clauses()
            .iter()
            .map(|c| {
                let mut pos = 0u32;
                let mut neg = 0u32;
                for lit in c.literals() {
                    let bit = 1u32 << (lit.var - 1);
                    if lit.negated {
                        neg |= bit;
                    } else {
                        pos |= bit;
                    }
                }
                ClauseMasks { pos, neg }
            })
            .collect();
        let m_mask: u32 =
            inst.manifestations().iter().fold(0, |acc, v| acc | (1u32 << (v - 1)));

        let mut solutions = Vec::new();
        let mut rows_evaluated = 0u64;
        let rows: u64 = 1u64 << num_vars;
        let n = hypotheses.len();
        for subset in 0u64..(1u64 << n) {
            let mut s_mask = 0u32;
            for (i, h) in hypotheses.iter().enumerate() {
                if subset & (1 << i) != 0 {
                    s_mask |= 1u32 << (h - 1);
                }
            }
            // One sweep over all assignments: consistency needs a model of
            // T with all of S true; entailment needs every such model to
            // satisfy all of M.
            let mut consistent = false;
            let mut entails = true;
            for row in 0..rows {
                rows_evaluated += 1;
                let a = row as u32;
                if a & s_mask != s_mask {
                    continue;
                }
                let sat = masks.iter().all(|c| (c.pos & a) != 0 || (c.neg & !a) != 0);
                if sat {
                    consistent = true;
                    if a & m_mask != m_mask {
                        entails = false;
                        break;
                    }
                }
            }
            if consistent && entails {
                let set: VarSet = hypotheses
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| subset & (1 << i) != 0)
                    .map(|(_, v)| *v)
                    .collect();
                solutions.push(set);
            }
        }
        canonical_sort(&mut solutions);
        Ok(Oracle {
            hypotheses,
            solutions,
            subsets_examined: 1u64 << n,
            rows_evaluated,
        })
    }

    pub fn new(inst: &Instance) -> Result<Oracle, OracleError> {
        Oracle::with_cap(inst, DEFAULT_SUBSET_CAP)
    }

    /// The full solution set SOL, canonically ordered.
    pub fn solutions(&self) -> &[Explanation] {
        &self.solutions
    }

    pub fn exists(&self) -> bool {
        !self.solutions.is_empty()
    }

    pub fn is_solution(&self, candidate: &Explanation) -> bool {
        self.solutions.iter().any(|s| s == candidate)
    }

    /// The minimal solutions under `order`: members of SOL that no other
    /// member strictly beats.
    pub fn minimal(&self, order: &dyn PreferenceOrder) -> Vec<Explanation> {
        let mut out: Vec<Explanation> = self
            .solutions
            .iter()
            .filter(|s| !self.solutions.iter().any(|t| order.strictly_better(t, s)))
            .cloned()
            .collect();
        canonical_sort(&mut out);
        out
    }

    pub fn verify_minimal(&self, order: &dyn PreferenceOrder, candidate: &Explanation) -> bool {
        self.is_solution(candidate)
            && !self.solutions.iter().any(|t| order.strictly_better(t, candidate))
    }

    pub fn relevant(&self, order: &dyn PreferenceOrder, h: VarId) -> bool {
        self.minimal(order).iter().any(|s| s.contains(h))
    }

    pub fn necessary(&self, order: &dyn PreferenceOrder, h: VarId) -> bool {
        self.exists() && self.minimal(order).iter().all(|s| s.contains(h))
    }

    pub fn dispensable(&self, order: &dyn PreferenceOrder, h: VarId) -> bool {
        !self.necessary(order, h)
    }

    pub fn report(&self, order: &dyn PreferenceOrder) -> OracleReport {
        OracleReport {
            solutions: self.solutions.clone(),
            minimal: self.minimal(order),
            subsets_examined: self.subsets_examined,
            rows_evaluated: self.rows_evaluated,
        }
    }

    pub fn hypotheses(&self) -> &[VarId] {
        &self.hypotheses
    }

    pub fn subsets_examined(&self) -> u64 {
        self.subsets_examined
    }
}

/// Enumerate SOL by brute force. Fails when `2^|H|` exceeds `cap` or the
/// variable count exceeds the truth-table limit.
pub fn brute_solutions(inst: &Instance, cap: u64) -> Result<OracleReport, OracleError> {
    let oracle = Oracle::with_cap(inst, cap)?;
    Ok(OracleReport {
        solutions: oracle.solutions.clone(),
        minimal: oracle.solutions.clone(),
        subsets_examined: oracle.subsets_examined,
        rows_evaluated: oracle.rows_evaluated,
    })
}

/// Enumerate the minimal solutions under `order` by brute force.
pub fn brute_minimal(
    inst: &Instance,
    order: &dyn PreferenceOrder,
    cap: u64,
) -> Result<OracleReport, OracleError> {
    let oracle = Oracle::with_cap(inst, cap)?;
    Ok(oracle.report(order))
}

/// splitmix64: tiny deterministic generator for the seeded suites.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound`. `bound` must be nonzero.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    pub fn range(&mut self, lo: u64, hi_inclusive: u64) -> u64 {
        lo + self.below(hi_inclusive - lo + 1)
    }

    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }
}

/// Shape of the theories produced by the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenDialect {
    /// Arbitrary clauses of 1..=3 distinct variables.
    Any,
    /// Definite Horn clauses (one positive head, up to two negative body
    /// literals).
    DefiniteHorn,
}

/// Knobs for the seeded instance generator.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_hypotheses: u32,
    pub max_extra_vars: u32,
    pub max_clauses: u32,
    /// Number of priority classes (hypotheses are split randomly).
    pub classes: u32,
    /// Attach weights in 1..=4 to every hypothesis.
    pub weights: bool,
    pub dialect: GenDialect,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_hypotheses: 6,
            max_extra_vars: 2,
            max_clauses: 12,
            classes: 1,
            weights: false,
            dialect: GenDialect::Any,
        }
    }
}

/// Generate a random valid instance.
///
/// Every variable is used: hypotheses go in classes, and clauses are
/// resampled until each non-hypothesis variable occurs in the theory.
/// Manifestations are drawn from the theory's variables.
pub fn gen_instance(rng: &mut Rng, cfg: &GenConfig) -> Instance {
    loop {
        let n_h = rng.range(1, cfg.max_hypotheses as u64) as u32;
        let n_x = rng.range(1, cfg.max_extra_vars.max(1) as u64) as u32;
        let total = n_h + n_x;
        let mut b = InstanceBuilder::new();
        for i in 1..=n_h {
            b.fresh_var(Some(&format!("h{i}")));
        }
        for i in 1..=n_x {
            b.fresh_var(Some(&format!("x{i}")));
        }

        // split hypotheses into the requested number of classes
        let m = cfg.classes.min(n_h).max(1);
        let mut classes: Vec<VarSet> = vec![VarSet::new(); m as usize];
        for h in 1..=n_h {
            classes[rng.below(m as u64) as usize].insert(h);
        }
        // ensure no class is empty by reseating from the largest
        for i in 0..classes.len() {
            if classes[i].is_empty() {
                let donor = (0..classes.len())
                    .max_by_key(|j| classes[*j].len())
                    .expect("at least one class");
                if classes[donor].len() <= 1 {
                    continue;
                }
                let v = classes[donor].iter().next().unwrap();
                classes[donor].remove(v);
                classes[i].insert(v);
            }
        }
        classes.retain(|c| !c.is_empty());
        for c in classes {
            b.push_class(c);
        }

        let n_clauses = rng.range(1, cfg.max_clauses as u64) as u32;
        let mut clauses: Vec<Clause> = Vec::new();
        for _ in 0..n_clauses {
            let clause = match cfg.dialect {
                GenDialect::Any => {
                    let width = rng.range(1, 3).min(total as u64);
                    let mut lits = Vec::new();
                    let mut used = VarSet::new();
                    while (lits.len() as u64) < width {
                        let v = rng.range(1, total as u64) as VarId;
                        if used.contains(v) {
                            continue;
                        }
                        used.insert(v);
                        let code = if rng.chance(1, 2) { v as i64 } else { -(v as i64) };
                        lits.push(code);
                    }
                    Clause::from_codes(&lits).unwrap()
                }
                GenDialect::DefiniteHorn => {
                    let head = rng.range(1, total as u64) as VarId;
                    let body_len = rng.range(0, 2.min(total as u64 - 1));
                    let mut used = VarSet::singleton(head);
                    let mut lits = vec![head as i64];
                    while (lits.len() as u64) < body_len + 1 {
                        let v = rng.range(1, total as u64) as VarId;
                        if used.contains(v) {
                            continue;
                        }
                        used.insert(v);
                        lits.push(-(v as i64));
                    }
                    Clause::from_codes(&lits).unwrap()
                }
            };
            clauses.push(clause);
        }

        let theory_vars: VarSet =
            clauses.iter().flat_map(|c| c.literals().iter().map(|l| l.var)).collect();
        // every extra variable must occur in the theory; retry otherwise
        if (n_h + 1..=total).any(|v| !theory_vars.contains(v)) {
            continue;
        }
        for c in &clauses {
            b.push_clause(c.clone());
        }

        let pool: Vec<VarId> = theory_vars.iter().collect();
        let n_m = rng.range(1, pool.len().min(3) as u64);
        let mut m_set = VarSet::new();
        for _ in 0..n_m {
            m_set.insert(*rng.pick(&pool));
        }
        b.set_manifestations(m_set);

        if cfg.weights {
            for h in 1..=n_h {
                b.set_weight(h, rng.range(1, 4));
            }
        }

        match b.build() {
            Ok(inst) => return inst,
            Err(_) => continue,
        }
    }
}
