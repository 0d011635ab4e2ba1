//! Pattern matching of rows against templates and capture-avoiding
//! substitution.

use std::collections::BTreeMap;

use super::{EvalErr, EvalOutcome, Value, ValueTuple};
use crate::syntax::ast::{
    Action, ActionKind, Expr, ExprKind, Field, LocTerm, Pred, PredKind, Process, Table, TableRef,
    Template, Tuple,
};

/// What a name is bound to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Binding {
    Value(Value),
    Table(Table),
}

/// A finite map from variable names to values or tables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst {
    bindings: BTreeMap<String, Binding>,
}

impl Subst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value(name: impl Into<String>, v: Value) -> Self {
        let mut s = Self::new();
        s.bind_value(name, v);
        s
    }

    pub fn table(name: impl Into<String>, t: Table) -> Self {
        let mut s = Self::new();
        s.bindings.insert(name.into(), Binding::Table(t));
        s
    }

    pub fn bind_value(&mut self, name: impl Into<String>, v: Value) {
        self.bindings.insert(name.into(), Binding::Value(v));
    }

    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.bindings.get(name)
    }

    pub fn value_of(&self, name: &str) -> Option<&Value> {
        match self.bindings.get(name) {
            Some(Binding::Value(v)) => Some(v),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.bindings.keys().map(String::as_str)
    }

    /// Sequential composition `σ1 σ2`; domains are disjoint for linear
    /// templates, later bindings win otherwise.
    pub fn compose(mut self, other: Subst) -> Subst {
        self.bindings.extend(other.bindings);
        self
    }

    /// `self` without the names in `names`.
    fn without<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> std::borrow::Cow<'_, Subst> {
        let mut names = names.into_iter().filter(|n| self.bindings.contains_key(*n)).peekable();
        if names.peek().is_none() {
            return std::borrow::Cow::Borrowed(self);
        }
        let mut s = self.clone();
        for n in names {
            s.bindings.remove(n);
        }
        std::borrow::Cow::Owned(s)
    }
}

/// `et / T`: binds every field of the template or fails.
pub fn match_tuple(et: &ValueTuple, template: &Template) -> EvalOutcome<Subst> {
    if et.arity() != template.arity() {
        return Err(EvalErr);
    }
    let mut sigma = Subst::new();
    for (v, w) in et.0.iter().zip(&template.0) {
        match (v, w) {
            (Value::Loc(_), Field::Data(_)) => return Err(EvalErr),
            (Value::Loc(_), Field::Loc(u)) => sigma.bind_value(u.clone(), v.clone()),
            (_, Field::Loc(_)) => return Err(EvalErr),
            (_, Field::Data(x)) => sigma.bind_value(x.clone(), v.clone()),
        }
    }
    Ok(sigma)
}

/// Types that substitutions can be applied to.
pub trait Substitute {
    fn subst(&self, sigma: &Subst) -> Self;
}

impl Substitute for Expr {
    fn subst(&self, sigma: &Subst) -> Expr {
        if sigma.is_empty() {
            return self.clone();
        }
        let kind = match &self.kind {
            ExprKind::DataVar(x) | ExprKind::LocVar(x) => match sigma.value_of(x) {
                Some(v) => return Expr { span: self.span, ..v.to_expr() },
                None => self.kind.clone(),
            },
            ExprKind::Concat(a, b) => ExprKind::Concat(Box::new(a.subst(sigma)), Box::new(b.subst(sigma))),
            ExprKind::Arith(op, a, b) => {
                ExprKind::Arith(*op, Box::new(a.subst(sigma)), Box::new(b.subst(sigma)))
            }
            ExprKind::MultisetLit(items) => {
                ExprKind::MultisetLit(items.iter().map(|e| e.subst(sigma)).collect())
            }
            k => k.clone(),
        };
        Expr { kind, span: self.span }
    }
}

impl Substitute for Pred {
    fn subst(&self, sigma: &Subst) -> Pred {
        let kind = match &self.kind {
            PredKind::True => PredKind::True,
            PredKind::Cmp(op, a, b) => PredKind::Cmp(*op, a.subst(sigma), b.subst(sigma)),
            PredKind::Member(a, b) => PredKind::Member(a.subst(sigma), b.subst(sigma)),
            PredKind::Subset(a, b) => PredKind::Subset(a.subst(sigma), b.subst(sigma)),
            PredKind::Not(p) => PredKind::Not(Box::new(p.subst(sigma))),
            PredKind::And(p, q) => PredKind::And(Box::new(p.subst(sigma)), Box::new(q.subst(sigma))),
        };
        Pred { kind, span: self.span }
    }
}

impl Substitute for Tuple {
    fn subst(&self, sigma: &Subst) -> Tuple {
        Tuple(self.0.iter().map(|e| e.subst(sigma)).collect())
    }
}

impl Substitute for LocTerm {
    fn subst(&self, sigma: &Subst) -> LocTerm {
        match self {
            LocTerm::Var(u) => match sigma.value_of(u) {
                Some(Value::Loc(l)) => LocTerm::Lit(l.clone()),
                _ => self.clone(),
            },
            lit => lit.clone(),
        }
    }
}

impl Substitute for TableRef {
    fn subst(&self, sigma: &Subst) -> TableRef {
        match self {
            TableRef::ByName { tid, loc } => TableRef::ByName { tid: tid.clone(), loc: loc.subst(sigma) },
            TableRef::ByVar(v) => match sigma.get(v) {
                Some(Binding::Table(t)) => TableRef::Literal(t.clone()),
                _ => self.clone(),
            },
            lit => lit.clone(),
        }
    }
}

impl Substitute for Action {
    fn subst(&self, sigma: &Subst) -> Action {
        let kind = match &self.kind {
            ActionKind::Insert { tid, tuple, loc } => ActionKind::Insert {
                tid: tid.clone(),
                tuple: tuple.subst(sigma),
                loc: loc.subst(sigma),
            },
            ActionKind::Delete { tid, template, pred, loc } => {
                let inner = sigma.without(template.names());
                ActionKind::Delete {
                    tid: tid.clone(),
                    template: template.clone(),
                    pred: pred.subst(&inner),
                    loc: loc.subst(sigma),
                }
            }
            ActionKind::Select { tables, template, pred, tuple, bind } => {
                let inner = sigma.without(template.names());
                ActionKind::Select {
                    tables: tables.iter().map(|t| t.subst(sigma)).collect(),
                    template: template.clone(),
                    pred: pred.subst(&inner),
                    tuple: tuple.subst(&inner),
                    bind: bind.clone(),
                }
            }
            ActionKind::Update { tid, template, pred, tuple, loc } => {
                let inner = sigma.without(template.names());
                ActionKind::Update {
                    tid: tid.clone(),
                    template: template.clone(),
                    pred: pred.subst(&inner),
                    tuple: tuple.subst(&inner),
                    loc: loc.subst(sigma),
                }
            }
            ActionKind::Aggr { tid, template, pred, func, bind, loc } => {
                let inner = sigma.without(template.names());
                ActionKind::Aggr {
                    tid: tid.clone(),
                    template: template.clone(),
                    pred: pred.subst(&inner),
                    func: *func,
                    bind: bind.clone(),
                    loc: loc.subst(sigma),
                }
            }
            ActionKind::Create { tid, loc, schema } => {
                ActionKind::Create { tid: tid.clone(), loc: loc.subst(sigma), schema: schema.clone() }
            }
            ActionKind::Drop { tid, loc } => ActionKind::Drop { tid: tid.clone(), loc: loc.subst(sigma) },
            ActionKind::Eval { process, loc } => {
                ActionKind::Eval { process: Box::new(process.subst(sigma)), loc: loc.subst(sigma) }
            }
        };
        Action { kind, span: self.span }
    }
}

/// Names an action binds in its continuation.
pub fn continuation_binders(a: &Action) -> Vec<&str> {
    match &a.kind {
        ActionKind::Select { bind, .. } => vec![bind.as_str()],
        ActionKind::Aggr { bind, .. } => bind.names().collect(),
        _ => Vec::new(),
    }
}

impl Substitute for Process {
    fn subst(&self, sigma: &Subst) -> Process {
        if sigma.is_empty() {
            return self.clone();
        }
        match self {
            Process::Nil => Process::Nil,
            Process::Prefix(a, p) => {
                let inner = sigma.without(continuation_binders(a));
                Process::Prefix(Box::new(a.subst(sigma)), Box::new(p.subst(&inner)))
            }
            Process::Call { name, args, span } => Process::Call {
                name: name.clone(),
                args: args.iter().map(|e| e.subst(sigma)).collect(),
                span: *span,
            },
            Process::Foreach { table, template, pred, order, body, span } => {
                let inner = sigma.without(template.names());
                Process::Foreach {
                    table: table.subst(sigma),
                    template: template.clone(),
                    pred: pred.subst(&inner),
                    order: *order,
                    body: Box::new(body.subst(&inner)),
                    span: *span,
                }
            }
            Process::Seq(p, q) => Process::Seq(Box::new(p.subst(sigma)), Box::new(q.subst(sigma))),
        }
    }
}
