//! Walk through the bundled troubleshooting instance: four possible causes
//! for a failing document build, one pair of causes mutually exclusive.
//!
//! Run with:
//! ```bash
//! cargo run --example troubleshoot
//! ```

use abduction::instance::tex_example;
use abduction::oracle::Oracle;
use abduction::order::{self, OrderKind};
use abduction::reduce::{self, Variant};
use abduction::solve::{QueryKind, Solver};

fn show(inst: &abduction::instance::Instance, sets: &[abduction::instance::VarSet]) -> String {
    let mut parts = Vec::new();
    for s in sets {
        let labels: Vec<String> = s.iter().map(|v| inst.label(v)).collect();
        parts.push(format!("{{{}}}", labels.join(",")));
    }
    parts.join(" ")
}

fn main() {
    let inst = tex_example();
    println!("hypotheses: a p t v  manifestation: f");
    println!("theory: a->f, p->f, t->f, v->f, not(p and t)\n");

    let oracle = Oracle::new(&inst).unwrap();
    println!("all {} explanations:", oracle.solutions().len());
    println!("  {}\n", show(&inst, oracle.solutions()));

    let mut solver = Solver::new(&inst);
    for kind in [
        OrderKind::SubsetPreference,
        OrderKind::CardinalityPreference,
    ] {
        let o = order::bind(kind, &inst).unwrap();
        let minimal = solver.enumerate_minimal(o.as_ref()).unwrap();
        println!("minimal under {kind}: {}", show(&inst, &minimal.explanations));
    }

    let card = order::bind(OrderKind::CardinalityPreference, &inst).unwrap();
    for h in inst.hypotheses().iter() {
        let r = solver.query_variable(card.as_ref(), QueryKind::Relevant, h).unwrap();
        let n = solver.query_variable(card.as_ref(), QueryKind::Necessary, h).unwrap();
        println!(
            "{}: relevant {}, necessary {}",
            inst.label(h),
            r.answer,
            n.answer
        );
    }

    // compile the fixed part away: after the composed reduction, the
    // hypothesis set and theory depend only on the instance's size class
    let rec = reduce::transform_i(&inst, Variant::Plain).unwrap();
    println!(
        "\ncomposed reduction: {} variables, {} clauses, {} forced indicators",
        rec.output.num_vars(),
        rec.output.theory().len(),
        rec.forced.len()
    );
    let mut reduced_solver = Solver::new(&rec.output);
    println!(
        "existence preserved: {}",
        reduced_solver.exists().unwrap().answer
    );
}
