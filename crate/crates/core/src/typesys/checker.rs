//! Typing of actions, processes, components, nets and whole systems.

use std::collections::HashMap;

use super::rules::*;
use super::{SType, SchemaMap, TypeEnv, TypeError, TypeErrorKind as K};
use crate::syntax::ast::*;
use crate::syntax::render;
use crate::values::aggr_signature;

/// Checks nets and processes against a fixed `∇` and procedure table,
/// collecting every error instead of stopping at the first.
pub struct Checker<'a> {
    pub nabla: SchemaMap,
    procedures: HashMap<&'a str, &'a ProcDef>,
    pub errors: Vec<TypeError>,
}

type Bindings = Vec<(String, SType)>;

impl<'a> Checker<'a> {
    pub fn new(nabla: SchemaMap, procedures: &'a [ProcDef]) -> Self {
        let procedures = procedures.iter().map(|d| (d.name.as_str(), d)).collect();
        Checker { nabla, procedures, errors: Vec::new() }
    }

    fn report<T>(&mut self, r: Result<T, TypeError>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.errors.push(e);
                None
            }
        }
    }

    fn fits(&mut self, got: &Schema, want: &Schema, span: Span, what: &str) -> Option<()> {
        if got.fits(want) {
            Some(())
        } else {
            self.report(Err(TypeError::new(
                span,
                if got.arity() == want.arity() { K::Mismatch } else { K::Arity },
                format!("{what} has type {} but the table expects {}", render(got), render(want)),
            )))
        }
    }

    /// Checks `pred` and the optional `tuple` under `env` extended with the
    /// template bindings; returns the tuple's type.
    fn in_template_scope(
        &mut self,
        env: &mut TypeEnv,
        bindings: Bindings,
        pred: &Pred,
        tuple: Option<&Tuple>,
    ) -> Option<Option<Schema>> {
        let mark = env.mark();
        env.extend(bindings);
        let p = self.report(type_pred(env, pred));
        let t = tuple.map(|t| self.report(type_tuple(env, t)));
        env.reset(mark);
        p?;
        match t {
            None => Some(None),
            Some(t) => Some(Some(t?)),
        }
    }

    /// `Γ, ∇ ⊢ a ▷ Γ'`. `None` when the action is ill-typed.
    pub fn check_action(&mut self, env: &mut TypeEnv, a: &Action) -> Option<Bindings> {
        let span = a.span;
        match &a.kind {
            ActionKind::Insert { tid, tuple, loc } => {
                let l = self.report(type_loc(env, loc, span));
                let sk = self.report(schema_of(&self.nabla, tid, span));
                let t = self.report(type_tuple(env, tuple));
                let (_, sk, t) = (l?, sk?, t?);
                self.fits(&t, &sk, span, "inserted tuple")?;
                Some(Vec::new())
            }
            ActionKind::Delete { tid, template, pred, loc } => {
                let l = self.report(type_loc(env, loc, span));
                let sk = self.report(schema_of(&self.nabla, tid, span))?;
                let g = self.report(type_template(&sk, template, span))?;
                self.in_template_scope(env, g, pred, None)?;
                l?;
                Some(Vec::new())
            }
            ActionKind::Update { tid, template, pred, tuple, loc } => {
                let l = self.report(type_loc(env, loc, span));
                let sk = self.report(schema_of(&self.nabla, tid, span))?;
                let g = self.report(type_template(&sk, template, span))?;
                let t = self.in_template_scope(env, g, pred, Some(tuple))?.expect("tuple");
                self.fits(&t, &sk, span, "updated tuple")?;
                l?;
                Some(Vec::new())
            }
            ActionKind::Select { tables, template, pred, tuple, bind } => {
                let mut cols = Vec::new();
                let mut ok = true;
                for tb in tables {
                    match self.report(type_table(env, &self.nabla, tb, span)) {
                        Some(sk) => cols.extend(sk.0),
                        None => ok = false,
                    }
                }
                if !ok {
                    return None;
                }
                let joined = Schema(cols);
                let g = self.report(type_template(&joined, template, span))?;
                let t = self.in_template_scope(env, g, pred, Some(tuple))?.expect("tuple");
                Some(vec![(bind.clone(), SType::Table(t))])
            }
            ActionKind::Aggr { tid, template, pred, func, bind, loc } => {
                let l = self.report(type_loc(env, loc, span));
                let sk = self.report(schema_of(&self.nabla, tid, span))?;
                let g = self.report(type_template(&sk, template, span))?;
                self.in_template_scope(env, g, pred, None)?;
                let Some(out) = aggr_signature(*func, &sk) else {
                    return self.report(Err(TypeError::new(
                        span,
                        K::Aggregator,
                        format!("{} cannot be applied to rows of {}", render(func), render(&sk)),
                    )));
                };
                let g2 = self.report(type_template(&out, bind, span))?;
                l?;
                Some(g2)
            }
            ActionKind::Create { tid, loc, schema } => {
                let l = self.report(type_loc(env, loc, span));
                let sk = self.report(schema_of(&self.nabla, tid, span))?;
                if sk != *schema {
                    self.report::<()>(Err(TypeError::new(
                        span,
                        K::SchemaConflict,
                        format!("table `{tid}` created as {} but its schema is {}", render(schema), render(&sk)),
                    )))?;
                }
                l?;
                Some(Vec::new())
            }
            ActionKind::Drop { loc, .. } => {
                self.report(type_loc(env, loc, span))?;
                Some(Vec::new())
            }
            ActionKind::Eval { process, loc } => {
                let l = self.report(type_loc(env, loc, span));
                self.check_process(env, process);
                l?;
                Some(Vec::new())
            }
        }
    }

    pub fn check_process(&mut self, env: &mut TypeEnv, p: &Process) {
        match p {
            Process::Nil => {}
            Process::Prefix(a, cont) => {
                // Continuations of failed binding actions are skipped to
                // avoid cascades of unbound-variable errors.
                let binds_names = matches!(a.kind, ActionKind::Select { .. } | ActionKind::Aggr { .. });
                match self.check_action(env, a) {
                    Some(g) => {
                        let mark = env.mark();
                        env.extend(g);
                        self.check_process(env, cont);
                        env.reset(mark);
                    }
                    None if !binds_names => self.check_process(env, cont),
                    None => {}
                }
            }
            Process::Call { name, args, span } => self.check_call(env, name, args, *span),
            Process::Foreach { table, template, pred, order, body, span } => {
                let Some(sk) = self.report(type_table(env, &self.nabla, table, *span)) else { return };
                if let OrderSpec::Asc(c) | OrderSpec::Desc(c) = order {
                    if *c > sk.arity() {
                        self.report::<()>(Err(TypeError::new(
                            *span,
                            K::Order,
                            format!("order column {c} exceeds the {} columns of {}", sk.arity(), render(&sk)),
                        )));
                    }
                }
                let Some(g) = self.report(type_template(&sk, template, *span)) else { return };
                let mark = env.mark();
                env.extend(g);
                self.report(type_pred(env, pred));
                self.check_process(env, body);
                env.reset(mark);
            }
            Process::Seq(p, q) => {
                self.check_process(env, p);
                self.check_process(env, q);
            }
        }
    }

    fn check_call(&mut self, env: &TypeEnv, name: &str, args: &[Expr], span: Span) {
        let Some(def) = self.procedures.get(name).copied() else {
            self.report::<()>(Err(TypeError::new(span, K::UnknownProcedure, format!("unknown procedure `{name}`"))));
            return;
        };
        if def.params.len() != args.len() {
            self.report::<()>(Err(TypeError::new(
                span,
                K::Arity,
                format!("`{name}` takes {} arguments, {} given", def.params.len(), args.len()),
            )));
            return;
        }
        for (arg, param) in args.iter().zip(&def.params) {
            if let Some(t) = self.report(type_expr(env, arg)) {
                if !t.fits(param.ty) {
                    self.report::<()>(Err(TypeError::new(
                        arg.span,
                        K::ArgumentMismatch,
                        format!("argument `{}` of `{name}` expects {}, found {}", param.name, render(&param.ty), render(&t)),
                    )));
                }
            }
        }
    }

    pub fn check_component(&mut self, c: &Component) {
        match c {
            Component::Proc(p) => self.check_process(&mut TypeEnv::new(), p),
            Component::Tab(t, span) => {
                if t.iface.tid.is_none() {
                    self.report::<()>(Err(TypeError::new(*span, K::UnknownTable, "anonymous table in a net")));
                } else {
                    self.report(type_table_literal(&self.nabla, t, *span));
                }
            }
            Component::Par(a, b) => {
                self.check_component(a);
                self.check_component(b);
            }
        }
    }

    pub fn check_net(&mut self, n: &Net) {
        match n {
            Net::Nil => {}
            Net::Err => {
                self.report::<()>(Err(TypeError::new(Span::default(), K::ErrNet, "the error net has no type")));
            }
            Net::Par(a, b) => {
                self.check_net(a);
                self.check_net(b);
            }
            Net::Restrict(_, m) => self.check_net(m),
            Net::Node(_, c) => self.check_component(c),
        }
    }

    pub fn check_procedure(&mut self, def: &ProcDef) {
        let mut env = TypeEnv::new();
        for p in &def.params {
            env.bind(&p.name, SType::Data(p.ty));
        }
        self.check_process(&mut env, &def.body);
    }
}

/// Collects `∇` from schema declarations, table literals and create
/// actions. Conflicting definitions are reported.
pub fn collect_schemas(sys: &System) -> (SchemaMap, Vec<TypeError>) {
    let mut b = SchemaCollector::default();
    for d in &sys.schemas {
        b.add(&d.tid, &d.schema, d.span);
    }
    for d in &sys.procedures {
        b.process(&d.body);
    }
    b.net(&sys.net);
    (b.nabla, b.errors)
}

#[derive(Default)]
struct SchemaCollector {
    nabla: SchemaMap,
    errors: Vec<TypeError>,
}

impl SchemaCollector {
    fn add(&mut self, tid: &TableId, sk: &Schema, span: Span) {
        match self.nabla.get(tid) {
            None => {
                self.nabla.insert(tid.clone(), sk.clone());
            }
            Some(prev) if prev == sk => {}
            Some(prev) => self.errors.push(TypeError::new(
                span,
                K::SchemaConflict,
                format!("table `{tid}` given schema {} but already has {}", render(sk), render(prev)),
            )),
        }
    }

    fn table(&mut self, t: &Table, span: Span) {
        if let Some(tid) = &t.iface.tid {
            self.add(tid, &t.iface.schema, span);
        }
    }

    fn table_ref(&mut self, r: &TableRef, span: Span) {
        if let TableRef::Literal(t) = r {
            self.table(t, span);
        }
    }

    fn process(&mut self, p: &Process) {
        match p {
            Process::Nil | Process::Call { .. } => {}
            Process::Prefix(a, cont) => {
                match &a.kind {
                    ActionKind::Create { tid, schema, .. } => self.add(tid, schema, a.span),
                    ActionKind::Select { tables, .. } => tables.iter().for_each(|t| self.table_ref(t, a.span)),
                    ActionKind::Eval { process, .. } => self.process(process),
                    _ => {}
                }
                self.process(cont);
            }
            Process::Foreach { table, body, span, .. } => {
                self.table_ref(table, *span);
                self.process(body);
            }
            Process::Seq(p, q) => {
                self.process(p);
                self.process(q);
            }
        }
    }

    fn component(&mut self, c: &Component) {
        match c {
            Component::Proc(p) => self.process(p),
            Component::Tab(t, span) => self.table(t, *span),
            Component::Par(a, b) => {
                self.component(a);
                self.component(b);
            }
        }
    }

    fn net(&mut self, n: &Net) {
        match n {
            Net::Nil | Net::Err => {}
            Net::Par(a, b) => {
                self.net(a);
                self.net(b);
            }
            Net::Restrict(_, m) => self.net(m),
            Net::Node(_, c) => self.component(c),
        }
    }
}

/// Type-checks a whole system: `∇` consistency, every procedure body once
/// under its parameters, then the net under the empty environment.
pub fn check_system(sys: &System) -> Result<(), Vec<TypeError>> {
    let (nabla, mut errors) = collect_schemas(sys);
    let mut seen = HashMap::new();
    for d in &sys.procedures {
        if seen.insert(d.name.as_str(), ()).is_some() {
            errors.push(TypeError::new(d.span, K::DuplicateProcedure, format!("procedure `{}` defined twice", d.name)));
        }
    }
    let mut c = Checker::new(nabla, &sys.procedures);
    for d in &sys.procedures {
        c.check_procedure(d);
    }
    c.check_net(&sys.net);
    errors.extend(c.errors);
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// Re-checks a net against a previously computed `∇`, as used when a
/// running system is re-typed after a step.
pub fn check_net_with(nabla: &SchemaMap, procedures: &[ProcDef], net: &Net) -> Result<(), Vec<TypeError>> {
    let mut c = Checker::new(nabla.clone(), procedures);
    c.check_net(net);
    if c.errors.is_empty() {
        Ok(())
    } else {
        Err(c.errors)
    }
}
