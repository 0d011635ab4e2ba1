//! Free and bound names.

use std::collections::BTreeSet;

use super::ast::*;

pub type Names = BTreeSet<String>;

/// Free variables of an expression (data and locality variables).
pub fn free_vars_expr(e: &Expr, out: &mut Names) {
    match &e.kind {
        ExprKind::DataVar(x) | ExprKind::LocVar(x) => {
            out.insert(x.clone());
        }
        ExprKind::Concat(a, b) | ExprKind::Arith(_, a, b) => {
            free_vars_expr(a, out);
            free_vars_expr(b, out);
        }
        ExprKind::MultisetLit(items) => items.iter().for_each(|e| free_vars_expr(e, out)),
        _ => {}
    }
}

pub fn free_vars_pred(p: &Pred, out: &mut Names) {
    match &p.kind {
        PredKind::True => {}
        PredKind::Cmp(_, a, b) | PredKind::Member(a, b) | PredKind::Subset(a, b) => {
            free_vars_expr(a, out);
            free_vars_expr(b, out);
        }
        PredKind::Not(q) => free_vars_pred(q, out),
        PredKind::And(q, r) => {
            free_vars_pred(q, out);
            free_vars_pred(r, out);
        }
    }
}

pub fn free_vars_tuple(t: &Tuple, out: &mut Names) {
    t.0.iter().for_each(|e| free_vars_expr(e, out));
}

fn loc_term(l: &LocTerm, out: &mut Names) {
    if let LocTerm::Var(u) = l {
        out.insert(u.clone());
    }
}

fn table_ref(t: &TableRef, out: &mut Names) {
    match t {
        TableRef::ByName { loc, .. } => loc_term(loc, out),
        TableRef::ByVar(v) => {
            out.insert(v.clone());
        }
        TableRef::Literal(_) => {}
    }
}

/// Adds the free names of `inner` minus `bound` to `out`.
fn scoped<'a>(bound: impl IntoIterator<Item = &'a str>, out: &mut Names, inner: impl FnOnce(&mut Names)) {
    let mut local = Names::new();
    inner(&mut local);
    for b in bound {
        local.remove(b);
    }
    out.extend(local);
}

/// Free names of an action, not counting its continuation.
pub fn free_vars_action(a: &Action, out: &mut Names) {
    match &a.kind {
        ActionKind::Insert { tuple, loc, .. } => {
            free_vars_tuple(tuple, out);
            loc_term(loc, out);
        }
        ActionKind::Delete { template, pred, loc, .. } | ActionKind::Aggr { template, pred, loc, .. } => {
            loc_term(loc, out);
            scoped(template.names(), out, |o| free_vars_pred(pred, o));
        }
        ActionKind::Update { template, pred, tuple, loc, .. } => {
            loc_term(loc, out);
            scoped(template.names(), out, |o| {
                free_vars_pred(pred, o);
                free_vars_tuple(tuple, o);
            });
        }
        ActionKind::Select { tables, template, pred, tuple, .. } => {
            tables.iter().for_each(|t| table_ref(t, out));
            scoped(template.names(), out, |o| {
                free_vars_pred(pred, o);
                free_vars_tuple(tuple, o);
            });
        }
        ActionKind::Create { loc, .. } | ActionKind::Drop { loc, .. } => loc_term(loc, out),
        ActionKind::Eval { process, loc } => {
            free_vars_process(process, out);
            loc_term(loc, out);
        }
    }
}

/// `fv(P)`: free data, locality and table variables.
pub fn free_vars_process(p: &Process, out: &mut Names) {
    match p {
        Process::Nil => {}
        Process::Prefix(a, cont) => {
            free_vars_action(a, out);
            let binders = crate::values::subst::continuation_binders(a);
            scoped(binders, out, |o| free_vars_process(cont, o));
        }
        Process::Call { args, .. } => args.iter().for_each(|e| free_vars_expr(e, out)),
        Process::Foreach { table, template, pred, body, .. } => {
            table_ref(table, out);
            scoped(template.names(), out, |o| {
                free_vars_pred(pred, o);
                free_vars_process(body, o);
            });
        }
        Process::Seq(p, q) => {
            free_vars_process(p, out);
            free_vars_process(q, out);
        }
    }
}

pub fn free_vars(p: &Process) -> Names {
    let mut out = Names::new();
    free_vars_process(p, &mut out);
    out
}

pub fn free_vars_net(n: &Net) -> Names {
    let mut out = Names::new();
    visit_processes(n, &mut |p| free_vars_process(p, &mut out));
    out
}

/// Calls `f` on every process located in `n`.
pub fn visit_processes<'a>(n: &'a Net, f: &mut impl FnMut(&'a Process)) {
    fn comp<'a>(c: &'a Component, f: &mut impl FnMut(&'a Process)) {
        match c {
            Component::Proc(p) => f(p),
            Component::Tab(..) => {}
            Component::Par(a, b) => {
                comp(a, f);
                comp(b, f);
            }
        }
    }
    match n {
        Net::Nil | Net::Err => {}
        Net::Par(a, b) => {
            visit_processes(a, f);
            visit_processes(b, f);
        }
        Net::Restrict(_, m) => visit_processes(m, f),
        Net::Node(_, c) => comp(c, f),
    }
}

/// All names bound anywhere in `p` (template fields, table variables).
pub fn bound_vars(p: &Process) -> Names {
    let mut out = Names::new();
    bound_into(p, &mut out);
    out
}

fn bound_into(p: &Process, out: &mut Names) {
    match p {
        Process::Nil | Process::Call { .. } => {}
        Process::Prefix(a, cont) => {
            match &a.kind {
                ActionKind::Delete { template, .. } | ActionKind::Update { template, .. } => {
                    out.extend(template.names().map(String::from))
                }
                ActionKind::Select { template, bind, .. } => {
                    out.extend(template.names().map(String::from));
                    out.insert(bind.clone());
                }
                ActionKind::Aggr { template, bind, .. } => {
                    out.extend(template.names().map(String::from));
                    out.extend(bind.names().map(String::from));
                }
                ActionKind::Eval { process, .. } => bound_into(process, out),
                _ => {}
            }
            bound_into(cont, out);
        }
        Process::Foreach { template, body, .. } => {
            out.extend(template.names().map(String::from));
            bound_into(body, out);
        }
        Process::Seq(p, q) => {
            bound_into(p, out);
            bound_into(q, out);
        }
    }
}

/// Free locality names of a net: node sites and locality literals not
/// under a restriction of the same name.
pub fn free_locs(n: &Net) -> BTreeSet<Loc> {
    let mut out = BTreeSet::new();
    free_locs_into(n, &mut out);
    out
}

fn free_locs_into(n: &Net, out: &mut BTreeSet<Loc>) {
    match n {
        Net::Nil | Net::Err => {}
        Net::Par(a, b) => {
            free_locs_into(a, out);
            free_locs_into(b, out);
        }
        Net::Restrict(l, m) => {
            let mut inner = BTreeSet::new();
            free_locs_into(m, &mut inner);
            inner.remove(l);
            out.extend(inner);
        }
        Net::Node(l, c) => {
            out.insert(l.clone());
            component_locs(c, out);
        }
    }
}

fn component_locs(c: &Component, out: &mut BTreeSet<Loc>) {
    match c {
        Component::Proc(p) => process_locs(p, out),
        Component::Tab(t, _) => table_locs(t, out),
        Component::Par(a, b) => {
            component_locs(a, out);
            component_locs(b, out);
        }
    }
}

fn table_locs(t: &Table, out: &mut BTreeSet<Loc>) {
    for row in t.rows.support() {
        for v in &row.0 {
            value_locs(v, out);
        }
    }
}

fn value_locs(v: &crate::values::Value, out: &mut BTreeSet<Loc>) {
    use crate::values::Value;
    match v {
        Value::Loc(l) => {
            out.insert(l.clone());
        }
        Value::Set(items) => items.support().for_each(|x| value_locs(x, out)),
        _ => {}
    }
}

fn expr_locs(e: &Expr, out: &mut BTreeSet<Loc>) {
    match &e.kind {
        ExprKind::LocLit(l) => {
            out.insert(l.clone());
        }
        ExprKind::Concat(a, b) | ExprKind::Arith(_, a, b) => {
            expr_locs(a, out);
            expr_locs(b, out);
        }
        ExprKind::MultisetLit(items) => items.iter().for_each(|e| expr_locs(e, out)),
        _ => {}
    }
}

fn pred_locs(p: &Pred, out: &mut BTreeSet<Loc>) {
    match &p.kind {
        PredKind::True => {}
        PredKind::Cmp(_, a, b) | PredKind::Member(a, b) | PredKind::Subset(a, b) => {
            expr_locs(a, out);
            expr_locs(b, out);
        }
        PredKind::Not(q) => pred_locs(q, out),
        PredKind::And(q, r) => {
            pred_locs(q, out);
            pred_locs(r, out);
        }
    }
}

fn term_locs(l: &LocTerm, out: &mut BTreeSet<Loc>) {
    if let LocTerm::Lit(l) = l {
        out.insert(l.clone());
    }
}

fn ref_locs(t: &TableRef, out: &mut BTreeSet<Loc>) {
    match t {
        TableRef::ByName { loc, .. } => term_locs(loc, out),
        TableRef::ByVar(_) => {}
        TableRef::Literal(t) => table_locs(t, out),
    }
}

/// Every locality literal occurring in a process.
pub fn process_locs(p: &Process, out: &mut BTreeSet<Loc>) {
    match p {
        Process::Nil => {}
        Process::Prefix(a, cont) => {
            match &a.kind {
                ActionKind::Insert { tuple, loc, .. } => {
                    tuple.0.iter().for_each(|e| expr_locs(e, out));
                    term_locs(loc, out);
                }
                ActionKind::Delete { pred, loc, .. } | ActionKind::Aggr { pred, loc, .. } => {
                    pred_locs(pred, out);
                    term_locs(loc, out);
                }
                ActionKind::Update { pred, tuple, loc, .. } => {
                    pred_locs(pred, out);
                    tuple.0.iter().for_each(|e| expr_locs(e, out));
                    term_locs(loc, out);
                }
                ActionKind::Select { tables, pred, tuple, .. } => {
                    tables.iter().for_each(|t| ref_locs(t, out));
                    pred_locs(pred, out);
                    tuple.0.iter().for_each(|e| expr_locs(e, out));
                }
                ActionKind::Create { loc, .. } | ActionKind::Drop { loc, .. } => term_locs(loc, out),
                ActionKind::Eval { process, loc } => {
                    process_locs(process, out);
                    term_locs(loc, out);
                }
            }
            process_locs(cont, out);
        }
        Process::Call { args, .. } => args.iter().for_each(|e| expr_locs(e, out)),
        Process::Foreach { table, pred, body, .. } => {
            ref_locs(table, out);
            pred_locs(pred, out);
            process_locs(body, out);
        }
        Process::Seq(p, q) => {
            process_locs(p, out);
            process_locs(q, out);
        }
    }
}
