//! Post-parse passes: locality-variable resolution and renaming of bound
//! names apart.

use std::collections::{HashMap, HashSet};

use super::ast::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BinderKind {
    Data,
    Loc,
    Table,
}

/// Callbacks for a scope-aware mutable traversal.
pub(crate) trait ScopeVisitor {
    fn bind(&mut self, name: &mut String, kind: BinderKind);
    fn unbind(&mut self, n: usize);
    fn var(&mut self, kind: &mut ExprKind);
    fn loc_var(&mut self, name: &mut String);
    fn table_var(&mut self, name: &mut String);
}

fn walk_expr(e: &mut Expr, v: &mut impl ScopeVisitor) {
    match &mut e.kind {
        ExprKind::DataVar(_) | ExprKind::LocVar(_) => v.var(&mut e.kind),
        ExprKind::Concat(a, b) | ExprKind::Arith(_, a, b) => {
            walk_expr(a, v);
            walk_expr(b, v);
        }
        ExprKind::MultisetLit(items) => items.iter_mut().for_each(|e| walk_expr(e, v)),
        _ => {}
    }
}

fn walk_pred(p: &mut Pred, v: &mut impl ScopeVisitor) {
    match &mut p.kind {
        PredKind::True => {}
        PredKind::Cmp(_, a, b) | PredKind::Member(a, b) | PredKind::Subset(a, b) => {
            walk_expr(a, v);
            walk_expr(b, v);
        }
        PredKind::Not(q) => walk_pred(q, v),
        PredKind::And(q, r) => {
            walk_pred(q, v);
            walk_pred(r, v);
        }
    }
}

fn walk_tuple(t: &mut Tuple, v: &mut impl ScopeVisitor) {
    t.0.iter_mut().for_each(|e| walk_expr(e, v));
}

fn walk_loc(l: &mut LocTerm, v: &mut impl ScopeVisitor) {
    if let LocTerm::Var(u) = l {
        v.loc_var(u);
    }
}

fn walk_ref(t: &mut TableRef, v: &mut impl ScopeVisitor) {
    match t {
        TableRef::ByName { loc, .. } => walk_loc(loc, v),
        TableRef::ByVar(name) => v.table_var(name),
        TableRef::Literal(_) => {}
    }
}

fn bind_template(t: &mut Template, v: &mut impl ScopeVisitor) -> usize {
    for f in &mut t.0 {
        match f {
            Field::Data(x) => v.bind(x, BinderKind::Data),
            Field::Loc(u) => v.bind(u, BinderKind::Loc),
        }
    }
    t.arity()
}

/// Walks an action and leaves its continuation binders bound; returns how
/// many the caller must unbind after the continuation.
fn walk_action(a: &mut Action, v: &mut impl ScopeVisitor) -> usize {
    match &mut a.kind {
        ActionKind::Insert { tuple, loc, .. } => {
            walk_tuple(tuple, v);
            walk_loc(loc, v);
            0
        }
        ActionKind::Delete { template, pred, loc, .. } => {
            walk_loc(loc, v);
            let n = bind_template(template, v);
            walk_pred(pred, v);
            v.unbind(n);
            0
        }
        ActionKind::Select { tables, template, pred, tuple, bind } => {
            tables.iter_mut().for_each(|t| walk_ref(t, v));
            let n = bind_template(template, v);
            walk_pred(pred, v);
            walk_tuple(tuple, v);
            v.unbind(n);
            v.bind(bind, BinderKind::Table);
            1
        }
        ActionKind::Update { template, pred, tuple, loc, .. } => {
            walk_loc(loc, v);
            let n = bind_template(template, v);
            walk_pred(pred, v);
            walk_tuple(tuple, v);
            v.unbind(n);
            0
        }
        ActionKind::Aggr { template, pred, bind, loc, .. } => {
            walk_loc(loc, v);
            let n = bind_template(template, v);
            walk_pred(pred, v);
            v.unbind(n);
            bind_template(bind, v)
        }
        ActionKind::Create { loc, .. } | ActionKind::Drop { loc, .. } => {
            walk_loc(loc, v);
            0
        }
        ActionKind::Eval { process, loc } => {
            walk_loc(loc, v);
            walk_process(process, v);
            0
        }
    }
}

pub(crate) fn walk_process(p: &mut Process, v: &mut impl ScopeVisitor) {
    match p {
        Process::Nil => {}
        Process::Prefix(a, cont) => {
            let n = walk_action(a, v);
            walk_process(cont, v);
            v.unbind(n);
        }
        Process::Call { args, .. } => args.iter_mut().for_each(|e| walk_expr(e, v)),
        Process::Foreach { table, template, pred, body, .. } => {
            walk_ref(table, v);
            let n = bind_template(template, v);
            walk_pred(pred, v);
            walk_process(body, v);
            v.unbind(n);
        }
        Process::Seq(p, q) => {
            walk_process(p, v);
            walk_process(q, v);
        }
    }
}

fn walk_procedure(d: &mut ProcDef, v: &mut impl ScopeVisitor) {
    for p in &mut d.params {
        let kind = if p.ty == MType::LOC { BinderKind::Loc } else { BinderKind::Data };
        v.bind(&mut p.name, kind);
    }
    walk_process(&mut d.body, v);
    v.unbind(d.params.len());
}

fn walk_net(n: &mut Net, v: &mut impl ScopeVisitor) {
    fn comp(c: &mut Component, v: &mut impl ScopeVisitor) {
        match c {
            Component::Proc(p) => walk_process(p, v),
            Component::Tab(..) => {}
            Component::Par(a, b) => {
                comp(a, v);
                comp(b, v);
            }
        }
    }
    match n {
        Net::Nil | Net::Err => {}
        Net::Par(a, b) => {
            walk_net(a, v);
            walk_net(b, v);
        }
        Net::Restrict(_, m) => walk_net(m, v),
        Net::Node(_, c) => comp(c, v),
    }
}

pub(crate) fn walk_system(sys: &mut System, v: &mut impl ScopeVisitor) {
    for d in &mut sys.procedures {
        walk_procedure(d, v);
    }
    walk_net(&mut sys.net, v);
}

/// Turns variable occurrences bound by `!@u` binders or `Loc` parameters
/// into locality variables.
#[derive(Default)]
struct LocResolver {
    scope: Vec<(String, BinderKind)>,
}

impl ScopeVisitor for LocResolver {
    fn bind(&mut self, name: &mut String, kind: BinderKind) {
        self.scope.push((name.clone(), kind));
    }
    fn unbind(&mut self, n: usize) {
        self.scope.truncate(self.scope.len() - n);
    }
    fn var(&mut self, kind: &mut ExprKind) {
        let (ExprKind::DataVar(x) | ExprKind::LocVar(x)) = kind else { return };
        let is_loc = self.scope.iter().rev().find(|(n, _)| n == x).map(|(_, k)| *k == BinderKind::Loc);
        if let Some(is_loc) = is_loc {
            let name = std::mem::take(x);
            *kind = if is_loc { ExprKind::LocVar(name) } else { ExprKind::DataVar(name) };
        }
    }
    fn loc_var(&mut self, _: &mut String) {}
    fn table_var(&mut self, _: &mut String) {}
}

pub fn resolve_locality_vars(sys: &mut System) {
    walk_system(sys, &mut LocResolver::default());
}

pub fn resolve_locality_vars_in(p: &mut Process) {
    walk_process(p, &mut LocResolver::default());
}

/// Collects every identifier used as a variable or binder.
#[derive(Default)]
struct NameCollector {
    names: HashSet<String>,
}

impl ScopeVisitor for NameCollector {
    fn bind(&mut self, name: &mut String, _: BinderKind) {
        self.names.insert(name.clone());
    }
    fn unbind(&mut self, _: usize) {}
    fn var(&mut self, kind: &mut ExprKind) {
        if let ExprKind::DataVar(x) | ExprKind::LocVar(x) = kind {
            self.names.insert(x.clone());
        }
    }
    fn loc_var(&mut self, name: &mut String) {
        self.names.insert(name.clone());
    }
    fn table_var(&mut self, name: &mut String) {
        self.names.insert(name.clone());
    }
}

/// Gives every binder a globally distinct name. A binder keeps its name
/// the first time it is seen; later binders of the same name become
/// `base#k` for the least unused `k`.
struct Renamer {
    taken: HashSet<String>,
    claimed: HashSet<String>,
    scope: Vec<(String, String)>,
    counters: HashMap<String, u64>,
}

impl Renamer {
    fn lookup(&self, name: &str) -> Option<&str> {
        self.scope.iter().rev().find(|(orig, _)| orig == name).map(|(_, new)| new.as_str())
    }

    fn fresh(&mut self, name: &str) -> String {
        let base = name.split('#').next().unwrap_or(name).to_string();
        let k = self.counters.entry(base.clone()).or_insert(0);
        loop {
            *k += 1;
            let candidate = format!("{base}#{k}");
            if !self.taken.contains(&candidate) && !self.claimed.contains(&candidate) {
                return candidate;
            }
        }
    }
}

impl ScopeVisitor for Renamer {
    fn bind(&mut self, name: &mut String, _: BinderKind) {
        let original = name.clone();
        if !self.claimed.insert(original.clone()) {
            let fresh = self.fresh(&original);
            self.claimed.insert(fresh.clone());
            *name = fresh;
        }
        self.scope.push((original, name.clone()));
    }
    fn unbind(&mut self, n: usize) {
        self.scope.truncate(self.scope.len() - n);
    }
    fn var(&mut self, kind: &mut ExprKind) {
        if let ExprKind::DataVar(x) | ExprKind::LocVar(x) = kind {
            if let Some(new) = self.lookup(x) {
                *x = new.to_string();
            }
        }
    }
    fn loc_var(&mut self, name: &mut String) {
        if let Some(new) = self.lookup(name) {
            *name = new.to_string();
        }
    }
    fn table_var(&mut self, name: &mut String) {
        self.loc_var(name)
    }
}

/// Renames bound names apart. Systems whose binders are already distinct
/// are left unchanged.
pub fn rename_apart(sys: &mut System) {
    let mut collector = NameCollector::default();
    walk_system(sys, &mut collector);
    let mut r = Renamer {
        taken: collector.names,
        claimed: HashSet::new(),
        scope: Vec::new(),
        counters: HashMap::new(),
    };
    walk_system(sys, &mut r);
}
