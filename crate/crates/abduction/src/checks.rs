//! Runnable solution-correspondence checks.
//!
//! Each check takes one instance, applies a transformation, and verifies
//! the transformation's solution correspondence against the brute-force
//! oracle (input side) and the search engine (transformed side, where the
//! oracle's caps no longer reach). They back the `check` subcommand and the
//! acceptance suite.

use std::fmt;

use crate::instance::{Instance, VarId, VarSet};
use crate::oracle::{Oracle, OracleError, Rng};
use crate::order::{self, OrderError, OrderKind};
use crate::reduce::{
    self, check_representative_equivalence, Problem, ReduceError, ReductionI,
    Variant,
};
use crate::solve::{SolveError, Solver};

#[derive(Clone, Debug)]
pub enum CheckError {
    Oracle(OracleError),
    Reduce(ReduceError),
    Solve(SolveError),
    Order(OrderError),
}

impl CheckError {
    /// True when the failure is a resource cap, not an inapplicable check.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            CheckError::Oracle(_) | CheckError::Solve(SolveError::CapExceeded { .. })
        )
    }
}

impl fmt::Display for CheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckError::Oracle(e) => write!(f, "{e}"),
            CheckError::Reduce(e) => write!(f, "{e}"),
            CheckError::Solve(e) => write!(f, "{e}"),
            CheckError::Order(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CheckError {}

impl From<OracleError> for CheckError {
    fn from(e: OracleError) -> Self {
        CheckError::Oracle(e)
    }
}

impl From<ReduceError> for CheckError {
    fn from(e: ReduceError) -> Self {
        CheckError::Reduce(e)
    }
}

impl From<SolveError> for CheckError {
    fn from(e: SolveError) -> Self {
        CheckError::Solve(e)
    }
}

impl From<OrderError> for CheckError {
    fn from(e: OrderError) -> Self {
        CheckError::Order(e)
    }
}

/// Outcome of a check: overall verdict plus a line-oriented transcript.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub pass: bool,
    pub lines: Vec<String>,
}

impl CheckReport {
    fn new() -> Self {
        CheckReport { pass: true, lines: Vec::new() }
    }

    fn note(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn fail(&mut self, line: impl Into<String>) {
        self.pass = false;
        self.lines.push(line.into());
    }
}

/// A named correspondence check.
pub trait LemmaCheck: Sync {
    fn name(&self) -> &'static str;
    fn run(&self, inst: &Instance) -> Result<CheckReport, CheckError>;
}

/// Random subset of `vars`, each element kept with probability 1/2.
fn random_subset(rng: &mut Rng, vars: &[VarId]) -> VarSet {
    vars.iter().copied().filter(|_| rng.chance(1, 2)).collect()
}

/// The indicator-transformation correspondence: `S` solves the input iff
/// `S` plus the forced indicator set solves the output, and no other
/// indicator choice yields a solution.
struct BasicCheck;

impl LemmaCheck for BasicCheck {
    fn name(&self) -> &'static str {
        "basic"
    }

    fn run(&self, inst: &Instance) -> Result<CheckReport, CheckError> {
        let mut report = CheckReport::new();
        let rec = reduce::transform_f(inst, Variant::for_instance(inst))?;
        let oracle = Oracle::new(inst)?;
        let mut solver = Solver::new(&rec.output);
        let subsets = inst.hypotheses().subsets();
        for s in &subsets {
            let lifted = rec.lift(s);
            if oracle.is_solution(s) != solver.is_solution(&lifted) {
                report.fail(format!("membership differs for {s} vs {lifted}"));
            }
        }
        report.note(format!("checked {} hypothesis subsets", subsets.len()));

        let indicators: Vec<VarId> =
            rec.c_index.iter().chain(rec.d_index.iter()).copied().collect();
        let mut rng = Rng::new(0xba51c);
        let mut sampled = 0;
        while sampled < 100 {
            let q = random_subset(&mut rng, &indicators);
            if q == rec.forced {
                continue;
            }
            sampled += 1;
            for s in &subsets {
                let candidate = rec.map_set(s).union(&q);
                if solver.is_solution(&candidate) {
                    report.fail(format!(
                        "non-canonical indicator choice yields a solution: {candidate}"
                    ));
                }
            }
        }
        report.note("100 non-canonical indicator subsets are non-solutions".to_string());
        Ok(report)
    }
}

/// The padding correspondence: solutions of the padded instance are the
/// input's solutions with any subset of the padding hypotheses adjoined,
/// and minimal solutions under irredundant orderings are untouched.
struct AddAssumptionsCheck;

impl LemmaCheck for AddAssumptionsCheck {
    fn name(&self) -> &'static str {
        "add-assumptions"
    }

    fn run(&self, inst: &Instance) -> Result<CheckReport, CheckError> {
        let mut report = CheckReport::new();
        let oracle = Oracle::new(inst)?;
        let variant = Variant::for_instance(inst);
        let class = reduce::class_of(inst);
        let targets: Vec<u32> =
            if variant == Variant::Prio { vec![class] } else { vec![class, class + 2] };
        for c in targets {
            let padded = reduce::transform_gc(inst, c, variant)?;
            let pads = padded.hypotheses().difference(inst.hypotheses());
            let mut solver = Solver::new(&padded);
            let uni = order::bind(OrderKind::Universal, &padded)?;
            let all = solver.enumerate_minimal(uni.as_ref())?;
            if !all.complete {
                return Err(CheckError::Solve(SolveError::CapExceeded {
                    subsets_examined: all.stats.subsets_examined,
                }));
            }
            let mut expected: Vec<VarSet> = Vec::new();
            for s in oracle.solutions() {
                for p in pads.subsets() {
                    expected.push(s.union(&p));
                }
            }
            crate::oracle::canonical_sort(&mut expected);
            if all.explanations != expected {
                report.fail(format!(
                    "padded solution set differs at c={c}: {} found, {} expected",
                    all.explanations.len(),
                    expected.len()
                ));
            } else {
                report.note(format!(
                    "c={c}: |SOL| = {} = {} * 2^{}",
                    all.explanations.len(),
                    oracle.solutions().len(),
                    pads.len()
                ));
            }
            // irredundant orderings keep the minimal solutions untouched;
            // the prioritized ones are bound to each side's own classes
            let mut kinds = vec![OrderKind::SubsetPreference, OrderKind::CardinalityPreference];
            if variant == Variant::Prio {
                kinds.push(OrderKind::SubsetPrioritization);
                kinds.push(OrderKind::CardinalityPrioritization);
            }
            for kind in kinds {
                let o_in = order::bind(kind, inst)?;
                let o_out = order::bind(kind, &padded)?;
                let min_in = oracle.minimal(o_in.as_ref());
                let min_out = solver.enumerate_minimal(o_out.as_ref())?;
                if min_out.explanations != min_in {
                    report.fail(format!("minimal solutions differ at c={c} under {kind}"));
                }
            }
        }
        Ok(report)
    }
}

/// The ordered variant of the indicator correspondence: minimality under
/// subset and cardinality preference transfers between `S` and its lifted
/// image.
struct BasicOrderCheck;

impl LemmaCheck for BasicOrderCheck {
    fn name(&self) -> &'static str {
        "basic-order"
    }

    fn run(&self, inst: &Instance) -> Result<CheckReport, CheckError> {
        let mut report = CheckReport::new();
        let rec = reduce::transform_f(inst, Variant::for_instance(inst))?;
        let oracle = Oracle::new(inst)?;
        let mut solver = Solver::new(&rec.output);
        let subsets = inst.hypotheses().subsets();
        for s in &subsets {
            let lifted = rec.lift(s);
            if oracle.is_solution(s) != solver.is_solution(&lifted) {
                report.fail(format!("membership differs for {s}"));
                continue;
            }
            if !oracle.is_solution(s) {
                continue;
            }
            for kind in [OrderKind::SubsetPreference, OrderKind::CardinalityPreference] {
                let o_in = order::bind(kind, inst)?;
                let o_out = order::bind(kind, &rec.output)?;
                let min_in = oracle.verify_minimal(o_in.as_ref(), s);
                let min_out = solver.verify_minimal(o_out.as_ref(), &lifted)?.answer;
                if min_in != min_out {
                    report.fail(format!(
                        "{kind} minimality differs for {s}: input {min_in}, output {min_out}"
                    ));
                }
            }
        }
        report.note(format!("minimality checked on {} subsets", subsets.len()));

        let indicators: Vec<VarId> =
            rec.c_index.iter().chain(rec.d_index.iter()).copied().collect();
        let mut rng = Rng::new(0x0bd8);
        let mut sampled = 0;
        while sampled < 30 {
            let q = random_subset(&mut rng, &indicators);
            if q == rec.forced {
                continue;
            }
            sampled += 1;
            for s in &subsets {
                if solver.is_solution(&rec.map_set(s).union(&q)) {
                    report.fail("sampled indicator subset yields a solution".to_string());
                }
            }
        }
        Ok(report)
    }
}

/// The first-of-first equivalence: the target hypothesis is relevant
/// (necessary) in the input iff the fresh `t` variable is relevant
/// (necessary) in the shifted instance, under both prioritizations.
struct FirstOfFirstCheck;

impl LemmaCheck for FirstOfFirstCheck {
    fn name(&self) -> &'static str {
        "first-of-first"
    }

    fn run(&self, inst: &Instance) -> Result<CheckReport, CheckError> {
        let mut report = CheckReport::new();
        let oracle = Oracle::new(inst)?;
        let targets: Vec<VarId> = inst.hypotheses().iter().collect();
        for &target in &targets {
            let rec = reduce::transform_first_of_first(inst, target)?;
            let out_oracle = Oracle::new(&rec.output)?;
            let t_role = rec.roles["t"];
            for kind in [OrderKind::SubsetPrioritization, OrderKind::CardinalityPrioritization] {
                let o_in = order::bind(kind, inst)?;
                let o_out = order::bind(kind, &rec.output)?;
                let checks = [
                    ("relevant", oracle.relevant(o_in.as_ref(), target),
                     out_oracle.relevant(o_out.as_ref(), t_role)),
                    ("necessary", oracle.necessary(o_in.as_ref(), target),
                     out_oracle.necessary(o_out.as_ref(), t_role)),
                ];
                for (what, input_answer, output_answer) in checks {
                    if input_answer != output_answer {
                        report.fail(format!(
                            "{what} of {} under {kind}: input {input_answer}, shifted {output_answer}",
                            inst.label(target)
                        ));
                    }
                }
            }
        }
        report.note(format!("checked {} targets", targets.len()));
        Ok(report)
    }
}

/// The definite-Horn replication correspondence: membership and
/// cardinality-minimality transfer between `S` and `S` plus the replicas of
/// the input's clauses, and up to `|H|` stray replicas never matter.
struct DhReplicateCheck;

impl LemmaCheck for DhReplicateCheck {
    fn name(&self) -> &'static str {
        "dh-replicate"
    }

    fn run(&self, inst: &Instance) -> Result<CheckReport, CheckError> {
        let mut report = CheckReport::new();
        let rec = reduce::transform_dh_replicate(inst)?;
        let oracle = Oracle::new(inst)?;
        let mut solver = Solver::new(&rec.output);
        let card_in = order::bind(OrderKind::CardinalityPreference, inst)?;
        let card_out = order::bind(OrderKind::CardinalityPreference, &rec.output)?;
        let subsets = inst.hypotheses().subsets();
        for s in &subsets {
            let lifted = rec.lift(s);
            if oracle.is_solution(s) != solver.is_solution(&lifted) {
                report.fail(format!("membership differs for {s}"));
                continue;
            }
        }
        if oracle.exists() {
            for s in oracle.solutions() {
                let lifted = rec.lift(s);
                let min_in = oracle.verify_minimal(card_in.as_ref(), s);
                let min_out = solver.verify_minimal(card_out.as_ref(), &lifted)?.answer;
                if min_in != min_out {
                    report.fail(format!(
                        "size minimality differs for {s}: input {min_in}, output {min_out}"
                    ));
                }
            }
        }
        // up to |H| stray replicas can join any solution
        let n = inst.hypotheses().len();
        let strays: Vec<VarId> = rec
            .replicas
            .iter()
            .flatten()
            .copied()
            .filter(|c| !rec.forced.contains(*c))
            .collect();
        let mut rng = Rng::new(0xd4);
        if !strays.is_empty() {
            for s in oracle.solutions().iter().take(4) {
                for _ in 0..5 {
                    let mut extra = VarSet::new();
                    while extra.len() < n.min(strays.len()) {
                        extra.insert(*rng.pick(&strays));
                    }
                    if !solver.is_solution(&rec.lift(s).union(&extra)) {
                        report.fail(format!("stray replicas broke a solution for {s}"));
                    }
                }
            }
        }
        report.note(format!("checked {} subsets", subsets.len()));
        Ok(report)
    }
}

/// Representative equivalence of the composed reduction, on existence and
/// verification.
struct ReprEquivalenceCheck;

impl LemmaCheck for ReprEquivalenceCheck {
    fn name(&self) -> &'static str {
        "repr-equivalence"
    }

    fn run(&self, inst: &Instance) -> Result<CheckReport, CheckError> {
        let mut report = CheckReport::new();
        let prio = inst.num_classes() > 1;
        let exists_reduction =
            ReductionI { variant: if prio { Variant::Prio } else { Variant::Plain } };
        let verify_reduction =
            ReductionI { variant: if prio { Variant::Prio } else { Variant::Verify } };
        let with_candidate = if inst.candidate().is_some() {
            inst.clone()
        } else {
            inst.with_candidate(Some(VarSet::new())).map_err(ReduceError::Instance)?
        };
        let legs = [
            (Problem::Exists, inst, &exists_reduction),
            (Problem::Verify, &with_candidate, &verify_reduction),
        ];
        for (problem, instance, reduction) in legs {
            let r = check_representative_equivalence(
                reduction,
                problem,
                OrderKind::Universal,
                instance,
            )?;
            for line in &r.transcript {
                report.note(line.clone());
            }
            if !r.pass {
                report.fail(format!("{problem:?} answer changes on the representative"));
            }
        }
        Ok(report)
    }
}

/// All checks, under the names used by the `check` subcommand.
pub fn registry() -> &'static [&'static dyn LemmaCheck] {
    static CHECKS: [&dyn LemmaCheck; 6] = [
        &BasicCheck,
        &AddAssumptionsCheck,
        &BasicOrderCheck,
        &FirstOfFirstCheck,
        &DhReplicateCheck,
        &ReprEquivalenceCheck,
    ];
    &CHECKS
}

pub fn by_name(name: &str) -> Option<&'static dyn LemmaCheck> {
    registry().iter().copied().find(|c| c.name() == name)
}
