//! Small-step execution of nets: enumeration of enabled transitions,
//! seeded random runs and bounded exhaustive exploration.

mod explore;
mod step;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use explore::{explore, explore_from, Exploration};

use crate::net::{no_rep, CanonicalNet, Item};
use crate::syntax::ast::{Loc, System};
use step::Stepper;

/// Names of the transition rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Ins,
    Del,
    Sel,
    Upd,
    Agr,
    Crt,
    Drp,
    Evl,
    ForTt,
    ForFf,
    SeqTt,
    SeqFf,
    Call,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Ins => "INS",
            Rule::Del => "DEL",
            Rule::Sel => "SEL",
            Rule::Upd => "UPD",
            Rule::Agr => "AGR",
            Rule::Crt => "CRT",
            Rule::Drp => "DRP",
            Rule::Evl => "EVL",
            Rule::ForTt => "FOR_TT",
            Rule::ForFf => "FOR_FF",
            Rule::SeqTt => "SEQ_TT",
            Rule::SeqFf => "SEQ_FF",
            Rule::Call => "CALL",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Describes one transition. `rule` is the rule for the action or loop
/// step itself; `seq` records the outermost sequencing rule it was lifted
/// through, if any.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TransitionLabel {
    pub rule: Rule,
    pub seq: Option<Rule>,
    pub actor: Loc,
    pub detail: String,
    /// The step produced `ERR`.
    pub error: bool,
}

impl fmt::Display for TransitionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.rule, self.actor, self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct Transition {
    pub label: TransitionLabel,
    pub next: CanonicalNet,
}

/// Every transition enabled in `cn`, in a deterministic order.
pub fn enumerate_transitions(cn: &CanonicalNet, sys: &System) -> Vec<Transition> {
    if cn.err {
        return Vec::new();
    }
    let stepper = Stepper { net: cn, sys };
    let mut out = Vec::new();
    let before = no_rep(&cn.lid());
    for located in cn.items.support() {
        let Item::Proc(p) = &located.item else { continue };
        for s in stepper.steps(p) {
            let (label, next) = step::apply(cn, located, s);
            debug_assert!(
                !before || no_rep(&next.lid()),
                "table identifiers repeated at a locality after {label}"
            );
            out.push(Transition { label, next });
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("transition {index} requested but only {available} are enabled")]
pub struct StepIndexError {
    pub index: usize,
    pub available: usize,
}

/// Takes the `index`-th enabled transition.
pub fn step_interactive(cn: &CanonicalNet, sys: &System, index: usize) -> Result<Transition, StepIndexError> {
    let mut ts = enumerate_transitions(cn, sys);
    if index >= ts.len() {
        return Err(StepIndexError { index, available: ts.len() });
    }
    Ok(ts.swap_remove(index))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Terminal {
    Quiescent,
    Err,
    StepLimit,
}

impl Terminal {
    pub fn name(self) -> &'static str {
        match self {
            Terminal::Quiescent => "quiescent",
            Terminal::Err => "err",
            Terminal::StepLimit => "step-limit",
        }
    }
}

#[derive(Clone, Debug)]
pub struct TraceStep {
    pub label: TransitionLabel,
    pub state: CanonicalNet,
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub initial: CanonicalNet,
    pub steps: Vec<TraceStep>,
    pub terminal: Terminal,
}

impl Trace {
    pub fn final_state(&self) -> &CanonicalNet {
        self.steps.last().map_or(&self.initial, |s| &s.state)
    }

    /// The last state that is not `ERR`.
    pub fn last_ok_state(&self) -> &CanonicalNet {
        self.steps.iter().rev().map(|s| &s.state).find(|s| s.ok()).unwrap_or(&self.initial)
    }
}

/// Runs from `initial` choosing uniformly among enabled transitions with a
/// seeded generator, until quiescence, `ERR` or `max_steps`.
pub fn run_from(initial: CanonicalNet, sys: &System, seed: u64, max_steps: usize) -> Trace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut current = initial.clone();
    let terminal = loop {
        if !current.ok() {
            break Terminal::Err;
        }
        let mut ts = enumerate_transitions(&current, sys);
        if ts.is_empty() {
            break Terminal::Quiescent;
        }
        if steps.len() >= max_steps {
            break Terminal::StepLimit;
        }
        let i = rng.gen_range(0..ts.len());
        let t = ts.swap_remove(i);
        current = t.next.clone();
        steps.push(TraceStep { label: t.label, state: t.next });
    };
    Trace { initial, steps, terminal }
}

/// Runs the net of `sys`.
pub fn run(sys: &System, seed: u64, max_steps: usize) -> Trace {
    run_from(CanonicalNet::canonicalize(&sys.net), sys, seed, max_steps)
}
