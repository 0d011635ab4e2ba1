//! Random runs of generated systems with the invariant checks shared by the
//! property tests and the acceptance report.

use klaimdb::net::no_rep;
use klaimdb::semantics::{enumerate_transitions, run};
use klaimdb::typesys::{check_net_with, collect_schemas};
use klaimdb::{check_system, render, CanonicalNet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gen::Gen;

#[derive(Debug, Default, Clone, Copy)]
pub struct Outcome {
    pub steps: usize,
    pub reached_err: bool,
    pub no_rep_violations: usize,
}

/// Generates a well-typed system from `seed` and takes up to `max_steps`
/// random transitions, re-checking the net after each one. `Err` reports
/// a generator or subject-reduction failure.
pub fn well_typed_run(seed: u64, max_steps: usize) -> Result<Outcome, String> {
    let sys = Gen::new(seed).well_typed_system();
    if let Err(e) = check_system(&sys) {
        return Err(format!("seed {seed}: generated system is ill-typed: {}\n{}", e[0], render(&sys)));
    }
    let (nabla, _) = collect_schemas(&sys);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cn = CanonicalNet::canonicalize(&sys.net);
    let mut out = Outcome::default();
    for _ in 0..max_steps {
        let mut ts = enumerate_transitions(&cn, &sys);
        if ts.is_empty() {
            break;
        }
        let t = ts.swap_remove(rng.gen_range(0..ts.len()));
        out.steps += 1;
        if no_rep(&cn.lid()) && !no_rep(&t.next.lid()) {
            out.no_rep_violations += 1;
        }
        if !t.next.ok() {
            out.reached_err = true;
            break;
        }
        if let Err(e) = check_net_with(&nabla, &sys.procedures, &t.next.to_net()) {
            return Err(format!("seed {seed}: ill-typed after {}: {}", t.label, e[0]));
        }
        cn = t.next;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
pub struct Control {
    pub rejected: bool,
    pub reached_err: bool,
    pub no_rep_violations: usize,
}

/// Generates an ill-typed system from `seed`, checks that the checker
/// rejects it and runs it without checking.
pub fn control_run(seed: u64, max_steps: usize) -> Control {
    let sys = Gen::new(seed).ill_typed_control();
    let rejected = check_system(&sys).is_err();
    let trace = run(&sys, seed, max_steps);
    let mut no_rep_violations = 0;
    let mut prev = &trace.initial;
    for s in &trace.steps {
        if no_rep(&prev.lid()) && !no_rep(&s.state.lid()) {
            no_rep_violations += 1;
        }
        prev = &s.state;
    }
    Control { rejected, reached_err: !trace.final_state().ok(), no_rep_violations }
}
