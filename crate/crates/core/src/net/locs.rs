//! Renaming of locality literals.

use crate::syntax::ast::*;
use crate::values::{Value, ValueTuple};

/// Applies a renaming to every locality literal in a term.
pub trait MapLocs {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> Self;
}

impl MapLocs for Loc {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> Loc {
        f(self)
    }
}

impl MapLocs for Value {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> Value {
        match self {
            Value::Loc(l) => Value::Loc(f(l)),
            Value::Set(items) => Value::Set(items.map(|v| v.map_locs(f))),
            v => v.clone(),
        }
    }
}

impl MapLocs for ValueTuple {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> ValueTuple {
        ValueTuple(self.0.iter().map(|v| v.map_locs(f)).collect())
    }
}

impl MapLocs for Table {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> Table {
        Table { iface: self.iface.clone(), rows: self.rows.map(|r| r.map_locs(f)) }
    }
}

impl MapLocs for Expr {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> Expr {
        let kind = match &self.kind {
            ExprKind::LocLit(l) => ExprKind::LocLit(f(l)),
            ExprKind::Concat(a, b) => ExprKind::Concat(Box::new(a.map_locs(f)), Box::new(b.map_locs(f))),
            ExprKind::Arith(op, a, b) => ExprKind::Arith(*op, Box::new(a.map_locs(f)), Box::new(b.map_locs(f))),
            ExprKind::MultisetLit(items) => ExprKind::MultisetLit(items.iter().map(|e| e.map_locs(f)).collect()),
            k => k.clone(),
        };
        Expr { kind, span: self.span }
    }
}

impl MapLocs for Pred {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> Pred {
        let kind = match &self.kind {
            PredKind::True => PredKind::True,
            PredKind::Cmp(op, a, b) => PredKind::Cmp(*op, a.map_locs(f), b.map_locs(f)),
            PredKind::Member(a, b) => PredKind::Member(a.map_locs(f), b.map_locs(f)),
            PredKind::Subset(a, b) => PredKind::Subset(a.map_locs(f), b.map_locs(f)),
            PredKind::Not(p) => PredKind::Not(Box::new(p.map_locs(f))),
            PredKind::And(p, q) => PredKind::And(Box::new(p.map_locs(f)), Box::new(q.map_locs(f))),
        };
        Pred { kind, span: self.span }
    }
}

impl MapLocs for Tuple {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> Tuple {
        Tuple(self.0.iter().map(|e| e.map_locs(f)).collect())
    }
}

impl MapLocs for LocTerm {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> LocTerm {
        match self {
            LocTerm::Lit(l) => LocTerm::Lit(f(l)),
            v => v.clone(),
        }
    }
}

impl MapLocs for TableRef {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> TableRef {
        match self {
            TableRef::ByName { tid, loc } => TableRef::ByName { tid: tid.clone(), loc: loc.map_locs(f) },
            TableRef::ByVar(v) => TableRef::ByVar(v.clone()),
            TableRef::Literal(t) => TableRef::Literal(t.map_locs(f)),
        }
    }
}

impl MapLocs for Action {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> Action {
        let kind = match &self.kind {
            ActionKind::Insert { tid, tuple, loc } => {
                ActionKind::Insert { tid: tid.clone(), tuple: tuple.map_locs(f), loc: loc.map_locs(f) }
            }
            ActionKind::Delete { tid, template, pred, loc } => ActionKind::Delete {
                tid: tid.clone(),
                template: template.clone(),
                pred: pred.map_locs(f),
                loc: loc.map_locs(f),
            },
            ActionKind::Select { tables, template, pred, tuple, bind } => ActionKind::Select {
                tables: tables.iter().map(|t| t.map_locs(f)).collect(),
                template: template.clone(),
                pred: pred.map_locs(f),
                tuple: tuple.map_locs(f),
                bind: bind.clone(),
            },
            ActionKind::Update { tid, template, pred, tuple, loc } => ActionKind::Update {
                tid: tid.clone(),
                template: template.clone(),
                pred: pred.map_locs(f),
                tuple: tuple.map_locs(f),
                loc: loc.map_locs(f),
            },
            ActionKind::Aggr { tid, template, pred, func, bind, loc } => ActionKind::Aggr {
                tid: tid.clone(),
                template: template.clone(),
                pred: pred.map_locs(f),
                func: *func,
                bind: bind.clone(),
                loc: loc.map_locs(f),
            },
            ActionKind::Create { tid, loc, schema } => {
                ActionKind::Create { tid: tid.clone(), loc: loc.map_locs(f), schema: schema.clone() }
            }
            ActionKind::Drop { tid, loc } => ActionKind::Drop { tid: tid.clone(), loc: loc.map_locs(f) },
            ActionKind::Eval { process, loc } => {
                ActionKind::Eval { process: Box::new(process.map_locs(f)), loc: loc.map_locs(f) }
            }
        };
        Action { kind, span: self.span }
    }
}

impl MapLocs for Process {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> Process {
        match self {
            Process::Nil => Process::Nil,
            Process::Prefix(a, p) => Process::Prefix(Box::new(a.map_locs(f)), Box::new(p.map_locs(f))),
            Process::Call { name, args, span } => Process::Call {
                name: name.clone(),
                args: args.iter().map(|e| e.map_locs(f)).collect(),
                span: *span,
            },
            Process::Foreach { table, template, pred, order, body, span } => Process::Foreach {
                table: table.map_locs(f),
                template: template.clone(),
                pred: pred.map_locs(f),
                order: *order,
                body: Box::new(body.map_locs(f)),
                span: *span,
            },
            Process::Seq(p, q) => Process::Seq(Box::new(p.map_locs(f)), Box::new(q.map_locs(f))),
        }
    }
}

impl MapLocs for Component {
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> Component {
        match self {
            Component::Proc(p) => Component::Proc(p.map_locs(f)),
            Component::Tab(t, s) => Component::Tab(t.map_locs(f), *s),
            Component::Par(a, b) => Component::Par(Box::new(a.map_locs(f)), Box::new(b.map_locs(f))),
        }
    }
}

impl MapLocs for Net {
    /// Renames free occurrences only: names bound by an inner restriction
    /// are left alone.
    fn map_locs(&self, f: &dyn Fn(&Loc) -> Loc) -> Net {
        match self {
            Net::Nil => Net::Nil,
            Net::Err => Net::Err,
            Net::Par(a, b) => Net::par(a.map_locs(f), b.map_locs(f)),
            Net::Restrict(l, m) => {
                let bound = l.clone();
                let g = move |x: &Loc| if *x == bound { x.clone() } else { f(x) };
                Net::Restrict(l.clone(), Box::new(m.map_locs(&g)))
            }
            Net::Node(l, c) => Net::Node(f(l), c.map_locs(f)),
        }
    }
}

/// Replaces `from` by `to` everywhere in `x`.
pub fn rename_loc<T: MapLocs>(x: &T, from: &Loc, to: &Loc) -> T {
    x.map_locs(&|l| if l == from { to.clone() } else { l.clone() })
}
