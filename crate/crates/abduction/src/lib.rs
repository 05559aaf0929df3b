//! Propositional abduction engine.
//!
//! Decides existence, verification, relevance, necessity, and
//! dispensability of explanations under six preference orderings, and
//! implements the instance transformations whose solution correspondences
//! make preprocessing claims executable: the clause-universe construction,
//! the classification / representative / extension functions, the
//! indicator-variable and padding transformations with their verification
//! and prioritized variants, the first-of-first prioritized query shift,
//! and the definite-Horn replication.
//!
//! A brute-force oracle over explicit truth tables certifies everything the
//! search engine answers; the `checks` module packages the solution
//! correspondence lemmas as runnable checks.
//!
//! ```
//! use abduction::instance::{InstanceBuilder, VarSet};
//! use abduction::order::{self, OrderKind};
//! use abduction::solve::{QueryKind, Solver};
//!
//! // two possible causes for one observation, one cause ruled out
//! let mut b = InstanceBuilder::new();
//! let rain = b.fresh_var(Some("rain"));
//! let sprinkler = b.fresh_var(Some("sprinkler"));
//! let wet = b.fresh_var(Some("wet"));
//! b.push_class(VarSet::from_vec(vec![rain, sprinkler]));
//! b.set_manifestations(VarSet::singleton(wet));
//! b.clause_codes(&[-(rain as i64), wet as i64]);      // rain -> wet
//! b.clause_codes(&[-(sprinkler as i64), wet as i64]); // sprinkler -> wet
//! b.clause_codes(&[-(sprinkler as i64)]);             // the sprinkler is off
//! let instance = b.build()?;
//!
//! let mut solver = Solver::new(&instance);
//! let subset = order::bind(OrderKind::SubsetPreference, &instance)?;
//! let minimal = solver.enumerate_minimal(subset.as_ref())?;
//! assert_eq!(minimal.explanations, vec![VarSet::singleton(rain)]);
//!
//! let necessary = solver.query_variable(subset.as_ref(), QueryKind::Necessary, rain)?;
//! assert!(necessary.answer);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod checks;
pub mod instance;
pub mod oracle;
pub mod order;
pub mod reduce;
pub mod sat;
pub mod solve;

pub use instance::{
    Clause, Explanation, Instance, InstanceBuilder, InstanceError, Literal, Theory, VarId, VarSet,
};
pub use order::{Comparison, OrderKind, PreferenceOrder};
pub use solve::{Caps, Enumeration, QueryKind, QueryResult, Solver, Stats};
