//! Pretty-printer producing source text that parses back to the same tree.

use std::fmt::Write;

use super::ast::*;

/// Renders a node as `.kdb` source.
pub fn render<T: Render + ?Sized>(node: &T) -> String {
    let mut out = String::new();
    node.render_into(&mut out);
    out
}

/// Double-quoted string literal with escapes.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub trait Render {
    fn render_into(&self, out: &mut String);
}

fn sep<T: Render>(out: &mut String, items: &[T]) {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        x.render_into(out);
    }
}

impl<T: Render + ?Sized> Render for &T {
    fn render_into(&self, out: &mut String) {
        (**self).render_into(out)
    }
}

impl<T: Render + ?Sized> Render for Box<T> {
    fn render_into(&self, out: &mut String) {
        (**self).render_into(out)
    }
}

impl Render for BaseType {
    fn render_into(&self, out: &mut String) {
        out.push_str(match self {
            BaseType::Int => "Int",
            BaseType::String => "String",
            BaseType::Id => "Id",
            BaseType::Loc => "Loc",
        })
    }
}

impl Render for MType {
    fn render_into(&self, out: &mut String) {
        match self {
            MType::Base(b) => b.render_into(out),
            MType::MSet(b) => {
                out.push('{');
                b.render_into(out);
                out.push('}');
            }
            MType::AnySet => out.push_str("{}"),
        }
    }
}

impl Render for Schema {
    fn render_into(&self, out: &mut String) {
        out.push('(');
        sep(out, &self.0);
        out.push(')');
    }
}

impl Render for Expr {
    fn render_into(&self, out: &mut String) {
        let child = |out: &mut String, e: &Expr| {
            if matches!(e.kind, ExprKind::Concat(..) | ExprKind::Arith(..)) {
                out.push('(');
                e.render_into(out);
                out.push(')');
            } else {
                e.render_into(out);
            }
        };
        match &self.kind {
            ExprKind::IntLit(n) => {
                let _ = write!(out, "{n}");
            }
            ExprKind::StrLit(s) => out.push_str(&quote(s)),
            ExprKind::TidLit(t) => out.push_str(&t.0),
            ExprKind::LocLit(l) => {
                let _ = write!(out, "{l}");
            }
            ExprKind::DataVar(x) | ExprKind::LocVar(x) => out.push_str(x),
            ExprKind::Concat(a, b) => {
                child(out, a);
                out.push_str(" ++ ");
                child(out, b);
            }
            ExprKind::Arith(op, a, b) => {
                child(out, a);
                out.push_str(match op {
                    ArithOp::Add => " + ",
                    ArithOp::Sub => " - ",
                    ArithOp::Mul => " * ",
                    ArithOp::Div => " / ",
                });
                child(out, b);
            }
            ExprKind::MultisetLit(items) => {
                out.push('{');
                sep(out, items);
                out.push('}');
            }
        }
    }
}

impl Render for Pred {
    fn render_into(&self, out: &mut String) {
        match &self.kind {
            PredKind::True => out.push_str("true"),
            PredKind::Cmp(op, a, b) => {
                a.render_into(out);
                out.push_str(match op {
                    CmpOp::Eq => " = ",
                    CmpOp::Ne => " != ",
                    CmpOp::Lt => " < ",
                    CmpOp::Le => " <= ",
                    CmpOp::Gt => " > ",
                    CmpOp::Ge => " >= ",
                });
                b.render_into(out);
            }
            PredKind::Member(a, b) => {
                a.render_into(out);
                out.push_str(" in ");
                b.render_into(out);
            }
            PredKind::Subset(a, b) => {
                a.render_into(out);
                out.push_str(" subset ");
                b.render_into(out);
            }
            PredKind::Not(p) => {
                out.push_str("not ");
                paren_if(out, p, matches!(p.kind, PredKind::And(..)));
            }
            PredKind::And(p, q) => {
                p.render_into(out);
                out.push_str(" and ");
                paren_if(out, q, matches!(q.kind, PredKind::And(..)));
            }
        }
    }
}

fn paren_if<T: Render + ?Sized>(out: &mut String, x: &T, cond: bool) {
    if cond {
        out.push('(');
    }
    x.render_into(out);
    if cond {
        out.push(')');
    }
}

impl Render for Tuple {
    fn render_into(&self, out: &mut String) {
        out.push('(');
        sep(out, &self.0);
        out.push(')');
    }
}

impl Render for Field {
    fn render_into(&self, out: &mut String) {
        match self {
            Field::Data(x) => {
                out.push('!');
                out.push_str(x);
            }
            Field::Loc(u) => {
                out.push_str("!@");
                out.push_str(u);
            }
        }
    }
}

impl Render for Template {
    fn render_into(&self, out: &mut String) {
        out.push('(');
        sep(out, &self.0);
        out.push(')');
    }
}

impl Render for LocTerm {
    fn render_into(&self, out: &mut String) {
        match self {
            LocTerm::Lit(l) => {
                let _ = write!(out, "{l}");
            }
            LocTerm::Var(u) => out.push_str(u),
        }
    }
}

impl Render for Table {
    fn render_into(&self, out: &mut String) {
        out.push_str("table ");
        match &self.iface.tid {
            Some(t) => out.push_str(&t.0),
            None => out.push('_'),
        }
        out.push_str(" : ");
        self.iface.schema.render_into(out);
        out.push_str(" = {");
        for (i, row) in self.rows.expanded().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "{row}");
        }
        out.push('}');
    }
}

impl Render for TableRef {
    fn render_into(&self, out: &mut String) {
        match self {
            TableRef::ByName { tid, loc } => {
                out.push_str(&tid.0);
                out.push('@');
                loc.render_into(out);
            }
            TableRef::ByVar(v) => out.push_str(v),
            TableRef::Literal(t) => t.render_into(out),
        }
    }
}

impl Render for AggrFn {
    fn render_into(&self, out: &mut String) {
        let _ = match self {
            AggrFn::Sum(c) => write!(out, "sum({c})"),
            AggrFn::Avg(c) => write!(out, "avg({c})"),
            AggrFn::Count => write!(out, "count"),
            AggrFn::Min(c) => write!(out, "min({c})"),
            AggrFn::Max(c) => write!(out, "max({c})"),
        };
    }
}

impl Render for OrderSpec {
    fn render_into(&self, out: &mut String) {
        let _ = match self {
            OrderSpec::Unordered => write!(out, "{{}}"),
            OrderSpec::Asc(c) => write!(out, "asc({c})"),
            OrderSpec::Desc(c) => write!(out, "desc({c})"),
            OrderSpec::Lex => write!(out, "lex"),
        };
    }
}

fn target(out: &mut String, tid: &TableId, loc: &LocTerm) {
    out.push_str(&tid.0);
    out.push('@');
    loc.render_into(out);
}

impl Render for Action {
    fn render_into(&self, out: &mut String) {
        match &self.kind {
            ActionKind::Insert { tid, tuple, loc } => {
                out.push_str("insert(");
                target(out, tid, loc);
                out.push_str(", ");
                tuple.render_into(out);
            }
            ActionKind::Delete { tid, template, pred, loc } => {
                out.push_str("delete(");
                target(out, tid, loc);
                out.push_str(", ");
                template.render_into(out);
                out.push_str(", ");
                pred.render_into(out);
            }
            ActionKind::Select { tables, template, pred, tuple, bind } => {
                out.push_str("select([");
                sep(out, tables);
                out.push_str("], ");
                template.render_into(out);
                out.push_str(", ");
                pred.render_into(out);
                out.push_str(", ");
                tuple.render_into(out);
                out.push_str(", !");
                out.push_str(bind);
            }
            ActionKind::Update { tid, template, pred, tuple, loc } => {
                out.push_str("update(");
                target(out, tid, loc);
                out.push_str(", ");
                template.render_into(out);
                out.push_str(", ");
                pred.render_into(out);
                out.push_str(", ");
                tuple.render_into(out);
            }
            ActionKind::Aggr { tid, template, pred, func, bind, loc } => {
                out.push_str("aggr(");
                target(out, tid, loc);
                out.push_str(", ");
                template.render_into(out);
                out.push_str(", ");
                pred.render_into(out);
                out.push_str(", ");
                func.render_into(out);
                out.push_str(", ");
                bind.render_into(out);
            }
            ActionKind::Create { tid, loc, schema } => {
                out.push_str("create(");
                target(out, tid, loc);
                out.push_str(", ");
                schema.render_into(out);
            }
            ActionKind::Drop { tid, loc } => {
                out.push_str("drop(");
                target(out, tid, loc);
            }
            ActionKind::Eval { process, loc } => {
                out.push_str("eval(");
                process.render_into(out);
                out.push_str(")@");
                loc.render_into(out);
                return;
            }
        }
        out.push(')');
    }
}

impl Render for Process {
    fn render_into(&self, out: &mut String) {
        match self {
            Process::Nil => out.push_str("nil"),
            Process::Prefix(a, p) => {
                a.render_into(out);
                out.push_str(" . ");
                paren_if(out, p, matches!(**p, Process::Seq(..)));
            }
            Process::Call { name, args, .. } => {
                out.push_str(name);
                out.push('(');
                sep(out, args);
                out.push(')');
            }
            Process::Foreach { table, template, pred, order, body, .. } => {
                out.push_str("foreach(");
                table.render_into(out);
                out.push_str(", ");
                template.render_into(out);
                out.push_str(", ");
                pred.render_into(out);
                out.push_str(", ");
                order.render_into(out);
                out.push_str(") { ");
                body.render_into(out);
                out.push_str(" }");
            }
            Process::Seq(p, q) => {
                p.render_into(out);
                out.push_str("; ");
                paren_if(out, q, matches!(**q, Process::Seq(..)));
            }
        }
    }
}

impl Render for Component {
    fn render_into(&self, out: &mut String) {
        match self {
            Component::Proc(p) => paren_if(out, p, false),
            Component::Tab(t, _) => t.render_into(out),
            Component::Par(a, b) => {
                a.render_into(out);
                out.push_str(" | ");
                paren_if(out, b, matches!(**b, Component::Par(..)));
            }
        }
    }
}

impl Render for Net {
    fn render_into(&self, out: &mut String) {
        match self {
            Net::Nil => out.push_str("nil"),
            Net::Err => out.push_str("ERR"),
            Net::Par(a, b) => {
                a.render_into(out);
                out.push_str(" || ");
                paren_if(out, b, matches!(**b, Net::Par(..)));
            }
            Net::Restrict(l, n) => {
                let _ = write!(out, "(new {l}) ");
                paren_if(out, n, matches!(**n, Net::Par(..)));
            }
            Net::Node(l, c) => {
                let _ = write!(out, "{l} :: ");
                c.render_into(out);
            }
        }
    }
}

impl Render for System {
    fn render_into(&self, out: &mut String) {
        for d in &self.schemas {
            out.push_str("schema ");
            out.push_str(&d.tid.0);
            out.push_str(" : ");
            d.schema.render_into(out);
            out.push('\n');
        }
        if !self.procedures.is_empty() {
            out.push_str("let\n");
            for p in &self.procedures {
                out.push_str("  ");
                out.push_str(&p.name);
                out.push('(');
                for (i, param) in p.params.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&param.name);
                    out.push_str(": ");
                    param.ty.render_into(out);
                }
                out.push_str(") := ");
                p.body.render_into(out);
                out.push('\n');
            }
            out.push_str("in\n");
        }
        self.net.render_into(out);
        out.push('\n');
    }
}
