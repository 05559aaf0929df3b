//! Decision procedures for clausal theories: satisfiability under
//! assumption sets, entailment of manifestation sets, and least-model
//! computation for definite Horn theories.
//!
//! The search is a complete backtracking procedure with unit propagation.
//! Branching always picks the lowest-numbered unassigned variable of an
//! unsatisfied clause and tries `true` first, so satisfying witnesses are
//! reproducible. Tautological clauses constrain nothing and are skipped at
//! load time.

use std::fmt;

use crate::instance::{Clause, Literal, Theory, VarId, VarSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatError {
    NotDefiniteHorn,
}

impl fmt::Display for SatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatError::NotDefiniteHorn => write!(f, "theory is not definite Horn"),
        }
    }
}

impl std::error::Error for SatError {}

/// A (possibly partial) truth assignment. Unassigned variables are
/// unconstrained: any completion satisfies the formula the witness was
/// produced for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    fn new(num_vars: u32) -> Self {
        Assignment { values: vec![None; num_vars as usize] }
    }

    pub fn value(&self, var: VarId) -> Option<bool> {
        self.values.get(var as usize - 1).copied().flatten()
    }

    pub fn num_vars(&self) -> u32 {
        self.values.len() as u32
    }

    /// True variables of the assignment.
    pub fn true_vars(&self) -> VarSet {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == Some(true))
            .map(|(i, _)| i as VarId + 1)
            .collect()
    }

    /// Does the assignment satisfy the clause? Unassigned counts as
    /// satisfying only if the clause is a tautology over assigned values.
    pub fn satisfies_clause(&self, clause: &Clause) -> bool {
        clause.literals().iter().any(|l| self.value(l.var) == Some(!l.negated))
    }

    pub fn satisfies_theory(&self, theory: &Theory) -> bool {
        theory.clauses().iter().all(|c| c.is_tautology() || self.satisfies_clause(c))
    }
}

struct Search {
    clauses: Vec<Vec<Literal>>,
    assign: Vec<Option<bool>>,
    satisfied: Vec<bool>,
    open_clauses: usize,
    trail: Vec<Trail>,
    has_empty_clause: bool,
}

enum Trail {
    Assigned(VarId),
    Satisfied(usize),
}

enum Propagation {
    Done,
    Conflict,
}

impl Search {
    fn new(num_vars: u32, clauses: Vec<Vec<Literal>>) -> Self {
        let has_empty_clause = clauses.iter().any(|c| c.is_empty());
        let n = clauses.len();
        Search {
            clauses,
            assign: vec![None; num_vars as usize],
            satisfied: vec![false; n],
            open_clauses: n,
            trail: Vec::new(),
            has_empty_clause,
        }
    }

    fn value(&self, var: VarId) -> Option<bool> {
        self.assign[var as usize - 1]
    }

    fn set(&mut self, var: VarId, value: bool) {
        self.assign[var as usize - 1] = Some(value);
        self.trail.push(Trail::Assigned(var));
    }

    fn mark_satisfied(&mut self, ci: usize) {
        self.satisfied[ci] = true;
        self.open_clauses -= 1;
        self.trail.push(Trail::Satisfied(ci));
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Trail::Assigned(v) => self.assign[v as usize - 1] = None,
                Trail::Satisfied(ci) => {
                    self.satisfied[ci] = false;
                    self.open_clauses += 1;
                }
            }
        }
    }

    /// Repeatedly satisfy-check and unit-propagate until fixpoint.
    fn propagate(&mut self) -> Propagation {
        loop {
            let mut changed = false;
            for ci in 0..self.clauses.len() {
                if self.satisfied[ci] {
                    continue;
                }
                let mut unit: Option<Literal> = None;
                let mut n_unassigned = 0;
                let mut sat = false;
                for lit in &self.clauses[ci] {
                    match self.value(lit.var) {
                        Some(v) if v == !lit.negated => {
                            sat = true;
                            break;
                        }
                        Some(_) => {}
                        None => {
                            n_unassigned += 1;
                            unit = Some(*lit);
                        }
                    }
                }
                if sat {
                    self.mark_satisfied(ci);
                    changed = true;
                    continue;
                }
                match n_unassigned {
                    0 => return Propagation::Conflict,
                    1 => {
                        let lit = unit.unwrap();
                        self.set(lit.var, !lit.negated);
                        self.mark_satisfied(ci);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Propagation::Done;
            }
        }
    }

    /// Lowest unassigned variable occurring in an open clause.
    fn branch_var(&self) -> Option<VarId> {
        let mut best: Option<VarId> = None;
        for (ci, clause) in self.clauses.iter().enumerate() {
            if self.satisfied[ci] {
                continue;
            }
            for lit in clause {
                if self.value(lit.var).is_none() {
                    best = Some(best.map_or(lit.var, |b| b.min(lit.var)));
                }
            }
        }
        best
    }

    fn solve(&mut self) -> bool {
        if self.has_empty_clause {
            return false;
        }
        let mark = self.trail.len();
        match self.propagate() {
            Propagation::Conflict => {
                self.undo_to(mark);
                return false;
            }
            Propagation::Done => {}
        }
        if self.open_clauses == 0 {
            return true;
        }
        let var = self.branch_var().expect("open clause has an unassigned literal");
        for value in [true, false] {
            let sub = self.trail.len();
            self.set(var, value);
            if self.solve() {
                return true;
            }
            self.undo_to(sub);
        }
        self.undo_to(mark);
        false
    }
}

/// Satisfiability of an arbitrary clause list under unit assumptions.
/// Returns a witness assignment on success.
pub fn solve_clauses(
    num_vars: u32,
    clauses: &[Clause],
    assumptions: &[Literal],
) -> Option<Assignment> {
    let mut db: Vec<Vec<Literal>> = clauses
        .iter()
        .filter(|c| !c.is_tautology())
        .map(|c| c.literals().to_vec())
        .collect();
    for lit in assumptions {
        db.push(vec![*lit]);
    }
    let bound = num_vars
        .max(assumptions.iter().map(|l| l.var).max().unwrap_or(0))
        .max(clauses.iter().flat_map(|c| c.literals()).map(|l| l.var).max().unwrap_or(0));
    let mut search = Search::new(bound, db);
    if search.solve() {
        let mut a = Assignment::new(bound);
        a.values.copy_from_slice(&search.assign);
        Some(a)
    } else {
        None
    }
}

/// Is the theory together with the assumption set satisfiable?
/// The witness, when present, satisfies every clause and every assumption.
pub fn consistency_witness(theory: &Theory, assumptions: &VarSet) -> Option<Assignment> {
    let units: Vec<Literal> = assumptions.iter().map(Literal::pos).collect();
    solve_clauses(0, theory.clauses(), &units)
}

pub fn is_consistent(theory: &Theory, assumptions: &VarSet) -> bool {
    consistency_witness(theory, assumptions).is_some()
}

/// Does `theory + assumptions` entail every goal variable?
///
/// Decided with a single refutation: the conjunction of goals is entailed
/// iff adding the clause `not g1 or ... or not gk` is unsatisfiable. An
/// empty goal set is trivially entailed.
pub fn entails(theory: &Theory, assumptions: &VarSet, goals: &VarSet) -> bool {
    if goals.is_empty() {
        return true;
    }
    let mut clauses = theory.clauses().to_vec();
    clauses.push(Clause::new(goals.iter().map(Literal::neg).collect()));
    let units: Vec<Literal> = assumptions.iter().map(Literal::pos).collect();
    solve_clauses(0, &clauses, &units).is_none()
}

/// Least model of a definite Horn theory under a set of assumed atoms:
/// the fixpoint of firing every rule whose body is already derived.
pub fn forward_chain(theory: &Theory, assumptions: &VarSet) -> Result<VarSet, SatError> {
    if !theory.is_definite_horn() {
        return Err(SatError::NotDefiniteHorn);
    }
    let mut derived = assumptions.clone();
    loop {
        let mut changed = false;
        for clause in theory.clauses() {
            let head = clause
                .literals()
                .iter()
                .find(|l| !l.negated)
                .expect("definite Horn clause has a head");
            if derived.contains(head.var) {
                continue;
            }
            let body_done = clause
                .literals()
                .iter()
                .filter(|l| l.negated)
                .all(|l| derived.contains(l.var));
            if body_done {
                derived.insert(head.var);
                changed = true;
            }
        }
        if !changed {
            return Ok(derived);
        }
    }
}

/// Dialect flags of a theory, as one value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TheoryDialect {
    pub is_3cnf: bool,
    pub is_horn: bool,
    pub is_definite_horn: bool,
}

pub fn classify_theory(theory: &Theory) -> TheoryDialect {
    TheoryDialect {
        is_3cnf: theory.is_3cnf(),
        is_horn: theory.is_horn(),
        is_definite_horn: theory.is_definite_horn(),
    }
}
