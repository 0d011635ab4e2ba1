use std::collections::{HashMap, VecDeque};

use super::{enumerate_transitions, TransitionLabel};
use crate::net::CanonicalNet;
use crate::syntax::ast::System;

/// Result of a bounded breadth-first exploration. States are identified up
/// to renaming of restricted localities.
#[derive(Clone, Debug, Default)]
pub struct Exploration {
    pub states: Vec<CanonicalNet>,
    pub edges: Vec<(usize, usize, TransitionLabel)>,
    /// Indices of states with no enabled transitions (excluding `ERR`).
    pub quiescent: Vec<usize>,
    pub err_reachable: bool,
    /// Exploration stopped because the state bound was reached.
    pub bound_hit: bool,
}

pub fn explore(sys: &System, bound: usize) -> Exploration {
    explore_from(CanonicalNet::canonicalize(&sys.net), sys, bound)
}

pub fn explore_from(initial: CanonicalNet, sys: &System, bound: usize) -> Exploration {
    let mut ex = Exploration::default();
    let mut index: HashMap<CanonicalNet, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    index.insert(initial.alpha_key(), 0);
    ex.err_reachable = !initial.ok();
    ex.states.push(initial);
    queue.push_back(0);
    while let Some(i) = queue.pop_front() {
        if !ex.states[i].ok() {
            continue;
        }
        let ts = enumerate_transitions(&ex.states[i], sys);
        if ts.is_empty() {
            ex.quiescent.push(i);
            continue;
        }
        for t in ts {
            let key = t.next.alpha_key();
            let j = match index.get(&key) {
                Some(&j) => j,
                None => {
                    if ex.states.len() >= bound {
                        ex.bound_hit = true;
                        continue;
                    }
                    let j = ex.states.len();
                    index.insert(key, j);
                    ex.err_reachable |= !t.next.ok();
                    ex.states.push(t.next);
                    queue.push_back(j);
                    j
                }
            };
            ex.edges.push((i, j, t.label));
        }
    }
    ex.quiescent.sort_unstable();
    ex
}
