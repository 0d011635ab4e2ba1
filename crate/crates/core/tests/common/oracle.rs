//! A naive reference interpreter for small nets.
//!
//! It shares only the syntax tree and value types with the library. The
//! evaluator, matcher, substitution, free-variable test, projection typing
//! and aggregators below are written from the rule premises directly, and
//! the state space is searched by brute force over sorted vectors.
//!
//! Where the rules leave a case open, this follows the same documented
//! choices as the engine: ERR for an undefined projection, ERR for an
//! aggregator that does not apply even over an empty table, FOR_TT chooses
//! among the minimal matching rows, a leading `nil` of a sequence is
//! dropped, and creation over an existing table is a no-op step.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use klaimdb::net::{CanonicalNet, Item};
use klaimdb::syntax::ast::*;
use klaimdb::values::{Multiset, Value, ValueTuple};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A state up to structural congruence: sorted tables and processes, or
/// the error net.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Key {
    Err,
    Net { tables: Vec<(Loc, Table)>, procs: Vec<(Loc, Process)> },
}

impl Key {
    pub fn of_engine(cn: &CanonicalNet) -> Key {
        if !cn.ok() {
            return Key::Err;
        }
        assert!(cn.restricted.is_empty(), "oracle nets have no restrictions");
        let mut tables = Vec::new();
        let mut procs = Vec::new();
        for x in cn.items.expanded() {
            match &x.item {
                Item::Table(t) => tables.push((x.loc.clone(), t.clone())),
                Item::Proc(p) => procs.push((x.loc.clone(), p.clone())),
            }
        }
        tables.sort();
        procs.sort();
        Key::Net { tables, procs }
    }
}

#[derive(Clone, Debug)]
struct State {
    tables: Vec<(Loc, Table)>,
    procs: Vec<(Loc, Process)>,
}

impl State {
    fn key(&self) -> Key {
        let mut tables = self.tables.clone();
        let mut procs: Vec<_> = self.procs.iter().filter(|(_, p)| *p != Process::Nil).cloned().collect();
        tables.sort();
        procs.sort();
        Key::Net { tables, procs }
    }
}

// ---- evaluation ------------------------------------------------------

fn kind(v: &Value) -> Option<u8> {
    match v {
        Value::Int(_) => Some(0),
        Value::Str(_) => Some(1),
        Value::Tid(_) => Some(2),
        Value::Loc(_) => Some(3),
        Value::Set(_) => None,
    }
}

fn ev(e: &Expr) -> Option<Value> {
    Some(match &e.kind {
        ExprKind::IntLit(n) => Value::Int(n.clone()),
        ExprKind::StrLit(s) => Value::Str(s.clone()),
        ExprKind::TidLit(t) => Value::Tid(t.clone()),
        ExprKind::LocLit(l) => Value::Loc(l.clone()),
        ExprKind::DataVar(_) | ExprKind::LocVar(_) => return None,
        ExprKind::Concat(a, b) => match (ev(a)?, ev(b)?) {
            (Value::Str(x), Value::Str(y)) => Value::Str(x + &y),
            _ => return None,
        },
        ExprKind::Arith(op, a, b) => {
            let (Value::Int(x), Value::Int(y)) = (ev(a)?, ev(b)?) else { return None };
            Value::Int(match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x - y,
                ArithOp::Mul => x * y,
                ArithOp::Div if y == BigInt::from(0) => BigInt::from(0),
                ArithOp::Div => x / y,
            })
        }
        ExprKind::MultisetLit(items) => {
            let vs: Vec<Value> = items.iter().map(ev).collect::<Option<_>>()?;
            let ks: BTreeSet<Option<u8>> = vs.iter().map(kind).collect();
            if ks.contains(&None) || ks.len() > 1 {
                return None;
            }
            Value::Set(vs.into_iter().collect())
        }
    })
}

fn ev_pred(p: &Pred) -> Option<bool> {
    match &p.kind {
        PredKind::True => Some(true),
        PredKind::Cmp(op, a, b) => {
            let (x, y) = (ev(a)?, ev(b)?);
            let (kx, ky) = (kind(&x)?, kind(&y)?);
            if kx != ky {
                return None;
            }
            let ordered = kx <= 1;
            Some(match op {
                CmpOp::Eq => x == y,
                CmpOp::Ne => x != y,
                _ if !ordered => return None,
                CmpOp::Lt => x < y,
                CmpOp::Le => x <= y,
                CmpOp::Gt => x > y,
                CmpOp::Ge => x >= y,
            })
        }
        PredKind::Member(a, b) => {
            let x = ev(a)?;
            let k = kind(&x)?;
            let Value::Set(s) = ev(b)? else { return None };
            if s.support().any(|v| kind(v) != Some(k)) {
                return None;
            }
            Some(s.contains(&x))
        }
        PredKind::Subset(a, b) => {
            let (Value::Set(x), Value::Set(y)) = (ev(a)?, ev(b)?) else { return None };
            let kx: BTreeSet<_> = x.support().map(kind).collect();
            let ky: BTreeSet<_> = y.support().map(kind).collect();
            if !kx.is_empty() && !ky.is_empty() && kx != ky {
                return None;
            }
            let sub = x.support().all(|v| x.count(v) <= y.count(v));
            Some(sub && x.len() < y.len())
        }
        PredKind::Not(q) => ev_pred(q).map(|b| !b),
        PredKind::And(q, r) => {
            let (a, b) = (ev_pred(q), ev_pred(r));
            Some(a? && b?)
        }
    }
}

fn ev_tuple(t: &Tuple) -> Option<ValueTuple> {
    t.0.iter().map(ev).collect::<Option<Vec<_>>>().map(ValueTuple)
}

fn inhabits(v: &Value, ty: MType) -> bool {
    match (v, ty) {
        (Value::Int(_), MType::Base(BaseType::Int)) => true,
        (Value::Str(_), MType::Base(BaseType::String)) => true,
        (Value::Tid(_), MType::Base(BaseType::Id)) => true,
        (Value::Loc(_), MType::Base(BaseType::Loc)) => true,
        (Value::Set(s), MType::MSet(b)) => s.support().all(|x| inhabits(x, MType::Base(b))),
        (Value::Set(s), MType::AnySet) => s.is_empty(),
        _ => false,
    }
}

fn fits(row: &ValueTuple, sk: &Schema) -> bool {
    row.0.len() == sk.0.len() && row.0.iter().zip(&sk.0).all(|(v, t)| inhabits(v, *t))
}

fn template_fits(t: &Template, sk: &Schema) -> bool {
    t.0.len() == sk.0.len()
        && t.0.iter().zip(&sk.0).all(|(f, ty)| matches!(f, Field::Loc(_)) == (*ty == MType::LOC))
}

#[derive(Clone, Debug)]
enum Bound {
    Val(Value),
    Tab(Table),
}

type Sigma = BTreeMap<String, Bound>;

fn matching(row: &ValueTuple, t: &Template) -> Option<Sigma> {
    if row.0.len() != t.0.len() {
        return None;
    }
    let mut s = Sigma::new();
    for (v, f) in row.0.iter().zip(&t.0) {
        let is_loc = matches!(v, Value::Loc(_));
        match f {
            Field::Loc(u) if is_loc => s.insert(u.clone(), Bound::Val(v.clone())),
            Field::Data(x) if !is_loc => s.insert(x.clone(), Bound::Val(v.clone())),
            _ => return None,
        };
    }
    Some(s)
}

// ---- substitution and free variables ---------------------------------

fn without<'a>(s: &Sigma, names: impl IntoIterator<Item = &'a str>) -> Sigma {
    let mut s = s.clone();
    for n in names {
        s.remove(n);
    }
    s
}

fn sub_e(e: &Expr, s: &Sigma) -> Expr {
    let kind = match &e.kind {
        ExprKind::DataVar(x) | ExprKind::LocVar(x) => match s.get(x) {
            Some(Bound::Val(v)) => return v.to_expr(),
            _ => e.kind.clone(),
        },
        ExprKind::Concat(a, b) => ExprKind::Concat(Box::new(sub_e(a, s)), Box::new(sub_e(b, s))),
        ExprKind::Arith(op, a, b) => ExprKind::Arith(*op, Box::new(sub_e(a, s)), Box::new(sub_e(b, s))),
        ExprKind::MultisetLit(xs) => ExprKind::MultisetLit(xs.iter().map(|x| sub_e(x, s)).collect()),
        k => k.clone(),
    };
    Expr { kind, span: e.span }
}

fn sub_p(p: &Pred, s: &Sigma) -> Pred {
    let kind = match &p.kind {
        PredKind::True => PredKind::True,
        PredKind::Cmp(op, a, b) => PredKind::Cmp(*op, sub_e(a, s), sub_e(b, s)),
        PredKind::Member(a, b) => PredKind::Member(sub_e(a, s), sub_e(b, s)),
        PredKind::Subset(a, b) => PredKind::Subset(sub_e(a, s), sub_e(b, s)),
        PredKind::Not(q) => PredKind::Not(Box::new(sub_p(q, s))),
        PredKind::And(q, r) => PredKind::And(Box::new(sub_p(q, s)), Box::new(sub_p(r, s))),
    };
    Pred { kind, span: p.span }
}

fn sub_t(t: &Tuple, s: &Sigma) -> Tuple {
    Tuple(t.0.iter().map(|e| sub_e(e, s)).collect())
}

fn sub_l(l: &LocTerm, s: &Sigma) -> LocTerm {
    match l {
        LocTerm::Var(u) => match s.get(u) {
            Some(Bound::Val(Value::Loc(l))) => LocTerm::Lit(l.clone()),
            _ => l.clone(),
        },
        lit => lit.clone(),
    }
}

fn sub_tb(r: &TableRef, s: &Sigma) -> TableRef {
    match r {
        TableRef::ByVar(v) => match s.get(v) {
            Some(Bound::Tab(t)) => TableRef::Literal(t.clone()),
            _ => r.clone(),
        },
        TableRef::ByName { tid, loc } => TableRef::ByName { tid: tid.clone(), loc: sub_l(loc, s) },
        lit => lit.clone(),
    }
}

fn sub_proc(p: &Process, s: &Sigma) -> Process {
    if s.is_empty() {
        return p.clone();
    }
    match p {
        Process::Nil => Process::Nil,
        Process::Seq(a, b) => Process::seq(sub_proc(a, s), sub_proc(b, s)),
        Process::Call { name, args, span } => {
            Process::Call { name: name.clone(), args: args.iter().map(|e| sub_e(e, s)).collect(), span: *span }
        }
        Process::Foreach { table, template, pred, order, body, span } => {
            let inner = without(s, template.names());
            Process::Foreach {
                table: sub_tb(table, s),
                template: template.clone(),
                pred: sub_p(pred, &inner),
                order: *order,
                body: Box::new(sub_proc(body, &inner)),
                span: *span,
            }
        }
        Process::Prefix(a, k) => {
            let (kind, bound): (ActionKind, Vec<&str>) = match &a.kind {
                ActionKind::Insert { tid, tuple, loc } => {
                    (ActionKind::Insert { tid: tid.clone(), tuple: sub_t(tuple, s), loc: sub_l(loc, s) }, vec![])
                }
                ActionKind::Delete { tid, template, pred, loc } => {
                    let inner = without(s, template.names());
                    let kind = ActionKind::Delete {
                        tid: tid.clone(),
                        template: template.clone(),
                        pred: sub_p(pred, &inner),
                        loc: sub_l(loc, s),
                    };
                    (kind, vec![])
                }
                ActionKind::Update { tid, template, pred, tuple, loc } => {
                    let inner = without(s, template.names());
                    let kind = ActionKind::Update {
                        tid: tid.clone(),
                        template: template.clone(),
                        pred: sub_p(pred, &inner),
                        tuple: sub_t(tuple, &inner),
                        loc: sub_l(loc, s),
                    };
                    (kind, vec![])
                }
                ActionKind::Select { tables, template, pred, tuple, bind } => {
                    let inner = without(s, template.names());
                    let kind = ActionKind::Select {
                        tables: tables.iter().map(|t| sub_tb(t, s)).collect(),
                        template: template.clone(),
                        pred: sub_p(pred, &inner),
                        tuple: sub_t(tuple, &inner),
                        bind: bind.clone(),
                    };
                    (kind, vec![bind.as_str()])
                }
                ActionKind::Aggr { tid, template, pred, func, bind, loc } => {
                    let inner = without(s, template.names());
                    let kind = ActionKind::Aggr {
                        tid: tid.clone(),
                        template: template.clone(),
                        pred: sub_p(pred, &inner),
                        func: *func,
                        bind: bind.clone(),
                        loc: sub_l(loc, s),
                    };
                    (kind, bind.names().collect())
                }
                ActionKind::Create { tid, loc, schema } => {
                    (ActionKind::Create { tid: tid.clone(), loc: sub_l(loc, s), schema: schema.clone() }, vec![])
                }
                ActionKind::Drop { tid, loc } => (ActionKind::Drop { tid: tid.clone(), loc: sub_l(loc, s) }, vec![]),
                ActionKind::Eval { process, loc } => {
                    (ActionKind::Eval { process: Box::new(sub_proc(process, s)), loc: sub_l(loc, s) }, vec![])
                }
            };
            let cont = sub_proc(k, &without(s, bound));
            Process::prefix(Action { kind, span: a.span }, cont)
        }
    }
}

fn closed_e(e: &Expr, bound: &BTreeSet<String>) -> bool {
    match &e.kind {
        ExprKind::DataVar(x) | ExprKind::LocVar(x) => bound.contains(x),
        ExprKind::Concat(a, b) | ExprKind::Arith(_, a, b) => closed_e(a, bound) && closed_e(b, bound),
        ExprKind::MultisetLit(xs) => xs.iter().all(|x| closed_e(x, bound)),
        _ => true,
    }
}

fn closed_pred(p: &Pred, bound: &BTreeSet<String>) -> bool {
    match &p.kind {
        PredKind::True => true,
        PredKind::Cmp(_, a, b) | PredKind::Member(a, b) | PredKind::Subset(a, b) => {
            closed_e(a, bound) && closed_e(b, bound)
        }
        PredKind::Not(q) => closed_pred(q, bound),
        PredKind::And(q, r) => closed_pred(q, bound) && closed_pred(r, bound),
    }
}

fn closed_loc(l: &LocTerm, bound: &BTreeSet<String>) -> bool {
    match l {
        LocTerm::Var(u) => bound.contains(u),
        LocTerm::Lit(_) => true,
    }
}

fn with_names<'a>(bound: &BTreeSet<String>, names: impl IntoIterator<Item = &'a str>) -> BTreeSet<String> {
    let mut b = bound.clone();
    b.extend(names.into_iter().map(String::from));
    b
}

fn closed(p: &Process, bound: &BTreeSet<String>) -> bool {
    match p {
        Process::Nil => true,
        Process::Seq(a, b) => closed(a, bound) && closed(b, bound),
        Process::Call { args, .. } => args.iter().all(|e| closed_e(e, bound)),
        Process::Foreach { table, template, pred, body, .. } => {
            let ok_table = match table {
                TableRef::ByVar(v) => bound.contains(v),
                TableRef::ByName { loc, .. } => closed_loc(loc, bound),
                TableRef::Literal(_) => true,
            };
            let inner = with_names(bound, template.names());
            ok_table && closed_pred(pred, &inner) && closed(body, &inner)
        }
        Process::Prefix(a, k) => match &a.kind {
            ActionKind::Insert { tuple, loc, .. } => {
                tuple.0.iter().all(|e| closed_e(e, bound)) && closed_loc(loc, bound) && closed(k, bound)
            }
            ActionKind::Delete { template, pred, loc, .. } => {
                closed_pred(pred, &with_names(bound, template.names())) && closed_loc(loc, bound) && closed(k, bound)
            }
            ActionKind::Update { template, pred, tuple, loc, .. } => {
                let inner = with_names(bound, template.names());
                closed_pred(pred, &inner)
                    && tuple.0.iter().all(|e| closed_e(e, &inner))
                    && closed_loc(loc, bound)
                    && closed(k, bound)
            }
            ActionKind::Select { tables, template, pred, tuple, bind } => {
                let inner = with_names(bound, template.names());
                tables.iter().all(|t| match t {
                    TableRef::ByVar(v) => bound.contains(v),
                    TableRef::ByName { loc, .. } => closed_loc(loc, bound),
                    TableRef::Literal(_) => true,
                }) && closed_pred(pred, &inner)
                    && tuple.0.iter().all(|e| closed_e(e, &inner))
                    && closed(k, &with_names(bound, [bind.as_str()]))
            }
            ActionKind::Aggr { template, pred, bind, loc, .. } => {
                closed_pred(pred, &with_names(bound, template.names()))
                    && closed_loc(loc, bound)
                    && closed(k, &with_names(bound, bind.names()))
            }
            ActionKind::Create { loc, .. } | ActionKind::Drop { loc, .. } => closed_loc(loc, bound) && closed(k, bound),
            ActionKind::Eval { process, loc } => closed(process, bound) && closed_loc(loc, bound) && closed(k, bound),
        },
    }
}

// ---- projection typing -----------------------------------------------

fn ty_e(e: &Expr, env: &BTreeMap<&str, MType>) -> Option<MType> {
    Some(match &e.kind {
        ExprKind::IntLit(_) => MType::INT,
        ExprKind::StrLit(_) => MType::STRING,
        ExprKind::TidLit(_) => MType::ID,
        ExprKind::LocLit(_) => MType::LOC,
        ExprKind::DataVar(x) => match env.get(x.as_str()) {
            Some(t) if *t != MType::LOC => *t,
            _ => return None,
        },
        ExprKind::LocVar(u) => match env.get(u.as_str()) {
            Some(t) if *t == MType::LOC => MType::LOC,
            _ => return None,
        },
        ExprKind::Concat(a, b) => {
            (ty_e(a, env)? == MType::STRING && ty_e(b, env)? == MType::STRING).then_some(MType::STRING)?
        }
        ExprKind::Arith(_, a, b) => (ty_e(a, env)? == MType::INT && ty_e(b, env)? == MType::INT).then_some(MType::INT)?,
        ExprKind::MultisetLit(xs) => {
            let mut k = None;
            for x in xs {
                let MType::Base(b) = ty_e(x, env)? else { return None };
                if k.is_some_and(|k| k != b) {
                    return None;
                }
                k = Some(b);
            }
            k.map_or(MType::AnySet, MType::MSet)
        }
    })
}

fn projection(sk: &Schema, t: &Template, tuple: &Tuple) -> Option<Schema> {
    if sk.0.len() != t.0.len() {
        return None;
    }
    let env: BTreeMap<&str, MType> = t.names().zip(sk.0.iter().copied()).collect();
    tuple.0.iter().map(|e| ty_e(e, &env)).collect::<Option<Vec<_>>>().map(Schema)
}

// ---- aggregation -----------------------------------------------------

fn aggregate(f: AggrFn, sk: &Schema, rows: &[ValueTuple]) -> Option<BigInt> {
    let col = |c: usize| -> Option<Vec<BigInt>> {
        if sk.0.get(c.wrapping_sub(1)) != Some(&MType::INT) {
            return None;
        }
        rows.iter()
            .map(|r| match &r.0[c - 1] {
                Value::Int(n) => Some(n.clone()),
                _ => None,
            })
            .collect()
    };
    Some(match f {
        AggrFn::Count => BigInt::from(rows.len()),
        AggrFn::Sum(c) => col(c)?.into_iter().sum(),
        AggrFn::Avg(c) => {
            let xs = col(c)?;
            if xs.is_empty() {
                BigInt::from(0)
            } else {
                let n = BigInt::from(xs.len());
                xs.into_iter().sum::<BigInt>().div_floor(&n)
            }
        }
        AggrFn::Min(c) => col(c)?.into_iter().min().unwrap_or_default(),
        AggrFn::Max(c) => col(c)?.into_iter().max().unwrap_or_default(),
    })
}

// ---- steps -----------------------------------------------------------

enum Change {
    Nothing,
    SetTable(usize, Table),
    AddTable(Loc, Table),
    DropTable(usize),
    Spawn(Loc, Process),
}

type Outcome = Option<(Process, Change)>;

fn rows_of(t: &Table) -> Vec<ValueTuple> {
    t.rows.expanded().cloned().collect()
}

fn targets<'a>(st: &'a State, loc: &LocTerm, tid: &TableId) -> Vec<(usize, &'a Table)> {
    let LocTerm::Lit(l) = loc else { return Vec::new() };
    st.tables
        .iter()
        .enumerate()
        .filter(|(_, (m, t))| m == l && t.iface.tid.as_ref() == Some(tid))
        .map(|(i, (_, t))| (i, t))
        .collect()
}

fn table_with(t: &Table, rows: Vec<ValueTuple>) -> Table {
    Table { iface: t.iface.clone(), rows: rows.into_iter().collect() }
}

fn action_steps(st: &State, a: &Action, k: &Process) -> Vec<Outcome> {
    match &a.kind {
        ActionKind::Insert { tid, tuple, loc } => targets(st, loc, tid)
            .into_iter()
            .map(|(i, t)| {
                let row = ev_tuple(tuple)?;
                if !fits(&row, &t.iface.schema) {
                    return None;
                }
                let mut rows = rows_of(t);
                rows.push(row);
                Some((k.clone(), Change::SetTable(i, table_with(t, rows))))
            })
            .collect(),
        ActionKind::Delete { tid, template, pred, loc } => targets(st, loc, tid)
            .into_iter()
            .map(|(i, t)| {
                if !template_fits(template, &t.iface.schema) {
                    return None;
                }
                let mut kept = Vec::new();
                for row in rows_of(t) {
                    let s = matching(&row, template)?;
                    if !ev_pred(&sub_p(pred, &s))? {
                        kept.push(row);
                    }
                }
                Some((k.clone(), Change::SetTable(i, table_with(t, kept))))
            })
            .collect(),
        ActionKind::Update { tid, template, pred, tuple, loc } => targets(st, loc, tid)
            .into_iter()
            .map(|(i, t)| {
                let sk = &t.iface.schema;
                if !template_fits(template, sk) {
                    return None;
                }
                let mut out = Vec::new();
                for row in rows_of(t) {
                    let s = matching(&row, template)?;
                    let holds = ev_pred(&sub_p(pred, &s))?;
                    let new = ev_tuple(&sub_t(tuple, &s))?;
                    if holds {
                        if !fits(&new, sk) {
                            return None;
                        }
                        out.push(new);
                    } else {
                        out.push(row);
                    }
                }
                Some((k.clone(), Change::SetTable(i, table_with(t, out))))
            })
            .collect(),
        ActionKind::Select { tables, template, pred, tuple, bind } => {
            let mut options: Vec<Vec<Table>> = Vec::new();
            for r in tables {
                let found: Vec<Table> = match r {
                    TableRef::ByName { tid, loc } => targets(st, loc, tid).into_iter().map(|(_, t)| t.clone()).collect(),
                    TableRef::Literal(t) => vec![t.clone()],
                    TableRef::ByVar(_) => Vec::new(),
                };
                if found.is_empty() {
                    return Vec::new();
                }
                options.push(found);
            }
            let mut combos: Vec<Vec<Table>> = vec![vec![]];
            for opts in &options {
                let mut next = Vec::new();
                for c in &combos {
                    for t in opts {
                        let mut c = c.clone();
                        c.push(t.clone());
                        next.push(c);
                    }
                }
                combos = next;
            }
            combos.into_iter().map(|combo| select_from(&combo, template, pred, tuple, bind, k)).collect()
        }
        ActionKind::Aggr { tid, template, pred, func, bind, loc } => targets(st, loc, tid)
            .into_iter()
            .map(|(_, t)| {
                let sk = &t.iface.schema;
                if !template_fits(template, sk) {
                    return None;
                }
                let mut chosen = Vec::new();
                for row in rows_of(t) {
                    let s = matching(&row, template)?;
                    if ev_pred(&sub_p(pred, &s))? {
                        chosen.push(row);
                    }
                }
                let v = aggregate(*func, sk, &chosen)?;
                let s = matching(&ValueTuple(vec![Value::Int(v)]), bind)?;
                Some((sub_proc(k, &s), Change::Nothing))
            })
            .collect(),
        ActionKind::Create { tid, loc, schema } => {
            let LocTerm::Lit(l) = loc else { return Vec::new() };
            let exists = st.tables.iter().any(|(m, t)| m == l && t.iface.tid.as_ref() == Some(tid));
            if exists {
                vec![Some((k.clone(), Change::Nothing))]
            } else {
                let t = Table { iface: Interface { tid: Some(tid.clone()), schema: schema.clone() }, rows: Multiset::new() };
                vec![Some((k.clone(), Change::AddTable(l.clone(), t)))]
            }
        }
        ActionKind::Drop { tid, loc } => {
            targets(st, loc, tid).into_iter().map(|(i, _)| Some((k.clone(), Change::DropTable(i)))).collect()
        }
        ActionKind::Eval { process, loc } => {
            let LocTerm::Lit(l) = loc else { return Vec::new() };
            if !closed(process, &BTreeSet::new()) {
                return Vec::new();
            }
            vec![Some((k.clone(), Change::Spawn(l.clone(), (**process).clone())))]
        }
    }
}

fn select_from(combo: &[Table], template: &Template, pred: &Pred, tuple: &Tuple, bind: &str, k: &Process) -> Outcome {
    let joined = Schema(combo.iter().flat_map(|t| t.iface.schema.0.clone()).collect());
    if !template_fits(template, &joined) {
        return None;
    }
    let mut product: Vec<Vec<Value>> = vec![vec![]];
    for t in combo {
        let mut next = Vec::new();
        for prefix in &product {
            for row in rows_of(t) {
                let mut r = prefix.clone();
                r.extend(row.0);
                next.push(r);
            }
        }
        product = next;
    }
    let mut out = Vec::new();
    for row in product {
        let s = matching(&ValueTuple(row), template)?;
        let holds = ev_pred(&sub_p(pred, &s))?;
        let v = ev_tuple(&sub_t(tuple, &s))?;
        if holds {
            out.push(v);
        }
    }
    let schema = projection(&joined, template, tuple)?;
    let result = Table { iface: Interface { tid: None, schema }, rows: out.into_iter().collect() };
    let s: Sigma = [(bind.to_string(), Bound::Tab(result))].into_iter().collect();
    Some((sub_proc(k, &s), Change::Nothing))
}

fn minimal_rows(rows: &[ValueTuple], order: OrderSpec) -> Vec<ValueTuple> {
    let distinct: BTreeSet<ValueTuple> = rows.iter().cloned().collect();
    let distinct: Vec<ValueTuple> = distinct.into_iter().collect();
    match order {
        OrderSpec::Unordered => distinct,
        OrderSpec::Lex => distinct.into_iter().take(1).collect(),
        OrderSpec::Asc(c) | OrderSpec::Desc(c) => {
            let key = |r: &ValueTuple| r.0[c - 1].clone();
            let best = if matches!(order, OrderSpec::Asc(_)) {
                distinct.iter().map(key).min()
            } else {
                distinct.iter().map(key).max()
            };
            distinct.into_iter().filter(|r| Some(key(r)) == best).collect()
        }
    }
}

fn then(p: Process, q: Process) -> Process {
    if p == Process::Nil {
        q
    } else {
        Process::seq(p, q)
    }
}

fn proc_steps(st: &State, p: &Process) -> Vec<Outcome> {
    match p {
        Process::Nil | Process::Call { .. } => Vec::new(),
        Process::Prefix(a, k) => action_steps(st, a, k),
        Process::Seq(a, b) => proc_steps(st, a)
            .into_iter()
            .map(|o| o.map(|(r, c)| (then(r, (**b).clone()), c)))
            .collect(),
        Process::Foreach { table, template, pred, order, body, span } => {
            let TableRef::Literal(t) = table else { return Vec::new() };
            let mut sat = Vec::new();
            let mut broken = false;
            for row in rows_of(t) {
                match matching(&row, template).and_then(|s| ev_pred(&sub_p(pred, &s)).map(|b| (b, s))) {
                    Some((true, s)) => sat.push((row, s)),
                    Some((false, _)) => {}
                    None => broken = true,
                }
            }
            if sat.is_empty() {
                return vec![if broken { None } else { Some((Process::Nil, Change::Nothing)) }];
            }
            let rows: Vec<ValueTuple> = sat.iter().map(|(r, _)| r.clone()).collect();
            minimal_rows(&rows, *order)
                .into_iter()
                .map(|t0| {
                    let s = &sat.iter().find(|(r, _)| *r == t0).expect("chosen row").1;
                    let mut rest = rows_of(t);
                    let at = rest.iter().position(|r| *r == t0).expect("row present");
                    rest.remove(at);
                    let again = Process::Foreach {
                        table: TableRef::Literal(table_with(t, rest)),
                        template: template.clone(),
                        pred: pred.clone(),
                        order: *order,
                        body: body.clone(),
                        span: *span,
                    };
                    Some((then(sub_proc(body, s), again), Change::Nothing))
                })
                .collect()
        }
    }
}

fn successors(st: &State) -> Vec<Option<State>> {
    let mut out = Vec::new();
    for (i, (l, p)) in st.procs.iter().enumerate() {
        for o in proc_steps(st, p) {
            out.push(o.map(|(residual, change)| {
                let mut next = st.clone();
                next.procs[i].1 = residual;
                match change {
                    Change::Nothing => {}
                    Change::SetTable(j, t) => next.tables[j].1 = t,
                    Change::AddTable(m, t) => next.tables.push((m, t)),
                    Change::DropTable(j) => {
                        next.tables.remove(j);
                    }
                    Change::Spawn(m, q) => next.procs.push((m, q)),
                }
                let _ = l;
                next
            }));
        }
    }
    out
}

fn flatten(n: &Net, st: &mut State) {
    match n {
        Net::Nil => {}
        Net::Par(a, b) => {
            flatten(a, st);
            flatten(b, st);
        }
        Net::Node(l, c) => component(l, c, st),
        Net::Err | Net::Restrict(..) => panic!("outside the oracle fragment"),
    }
}

fn component(l: &Loc, c: &Component, st: &mut State) {
    match c {
        Component::Proc(p) => st.procs.push((l.clone(), p.clone())),
        Component::Tab(t, _) => st.tables.push((l.clone(), t.clone())),
        Component::Par(a, b) => {
            component(l, a, st);
            component(l, b, st);
        }
    }
}

/// All states reachable from the net of `sys`, by brute force.
pub fn naive_reachable(sys: &System, bound: usize) -> BTreeSet<Key> {
    let mut init = State { tables: Vec::new(), procs: Vec::new() };
    flatten(&sys.net, &mut init);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(init.key());
    queue.push_back(init);
    while let Some(st) = queue.pop_front() {
        assert!(seen.len() <= bound, "oracle state bound exceeded");
        for next in successors(&st) {
            match next {
                None => {
                    seen.insert(Key::Err);
                }
                Some(n) => {
                    if seen.insert(n.key()) {
                        queue.push_back(n);
                    }
                }
            }
        }
    }
    seen
}

// ---- fragment generator ----------------------------------------------

const SCHEMAS: &[&[MType]] = &[&[MType::INT], &[MType::INT, MType::STRING], &[MType::STRING]];

/// A net with at most two localities, two tables of at most three rows and
/// processes of at most two actions. About one action in eight is
/// ill-formed so that error transitions are exercised.
pub fn small_system(seed: u64) -> System {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let locs: Vec<Loc> = (0..rng.gen_range(1..=2)).map(|i| Loc::new(format!("l{i}"))).collect();
    let tids = [TableId::new("T"), TableId::new("U")];
    let schemas: Vec<Schema> = tids.iter().map(|_| Schema(SCHEMAS.choose(&mut rng).unwrap().to_vec())).collect();
    let mut parts: Vec<Net> = Vec::new();
    let ntables = rng.gen_range(1..=3);
    let mut placed = BTreeSet::new();
    for _ in 0..ntables {
        let l = locs.choose(&mut rng).unwrap().clone();
        let i = rng.gen_range(0..2);
        if placed.len() == 2 || !placed.insert((l.clone(), i)) {
            continue;
        }
        let mut rows = Multiset::new();
        for _ in 0..rng.gen_range(0..=3) {
            rows.insert(ValueTuple(schemas[i].0.iter().map(|t| small_value(&mut rng, *t)).collect()));
        }
        let t = Table { iface: Interface { tid: Some(tids[i].clone()), schema: schemas[i].clone() }, rows };
        parts.push(Net::node(l, Component::Tab(t, Span::default())));
    }
    let mut fresh = 0;
    for _ in 0..rng.gen_range(1..=2) {
        let l = locs.choose(&mut rng).unwrap().clone();
        let p = small_process(&mut rng, &locs, &tids, &schemas, &mut fresh, 2);
        parts.push(Net::node(l, Component::Proc(p)));
    }
    let mut net = parts.remove(0);
    for p in parts {
        net = Net::par(net, p);
    }
    System { schemas: Vec::new(), procedures: Vec::new(), net }
}

fn small_value(rng: &mut ChaCha8Rng, t: MType) -> Value {
    if t == MType::INT {
        Value::int(rng.gen_range(0..3))
    } else {
        Value::str(*["a", "b"].choose(rng).unwrap())
    }
}

fn small_expr(rng: &mut ChaCha8Rng, t: MType, vars: &[(String, MType)]) -> Expr {
    let candidates: Vec<&String> = vars.iter().filter(|(_, u)| *u == t).map(|(n, _)| n).collect();
    let base = if !candidates.is_empty() && rng.gen_bool(0.5) {
        Expr::var(candidates.choose(rng).unwrap().as_str())
    } else {
        small_value(rng, t).to_expr()
    };
    if rng.gen_bool(0.25) {
        let other = small_value(rng, t).to_expr();
        let kind = if t == MType::INT {
            ExprKind::Arith(ArithOp::Add, Box::new(base), Box::new(other))
        } else {
            ExprKind::Concat(Box::new(base), Box::new(other))
        };
        return Expr::new(kind);
    }
    base
}

fn small_pred(rng: &mut ChaCha8Rng, vars: &[(String, MType)]) -> Pred {
    match rng.gen_range(0..4) {
        0 => Pred::tt(),
        1 => {
            let t = *[MType::INT, MType::STRING].choose(rng).unwrap();
            let op = *[CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Ge].choose(rng).unwrap();
            Pred::new(PredKind::Cmp(op, small_expr(rng, t, vars), small_expr(rng, t, vars)))
        }
        2 => Pred::new(PredKind::Not(Box::new(small_pred(rng, vars)))),
        _ => {
            let t = *[MType::INT, MType::STRING].choose(rng).unwrap();
            let cmp = Pred::new(PredKind::Cmp(CmpOp::Eq, small_expr(rng, t, vars), small_expr(rng, t, vars)));
            Pred::new(PredKind::And(Box::new(cmp), Box::new(small_pred(rng, vars))))
        }
    }
}

fn small_template(sk: &Schema, fresh: &mut usize) -> (Template, Vec<(String, MType)>) {
    let names: Vec<String> = sk
        .0
        .iter()
        .map(|_| {
            *fresh += 1;
            format!("v{fresh}")
        })
        .collect();
    let vars = names.iter().cloned().zip(sk.0.iter().copied()).collect();
    (Template(names.into_iter().map(Field::Data).collect()), vars)
}

/// Breaks an otherwise well-formed tuple with probability 1/8.
fn maybe_break(rng: &mut ChaCha8Rng, mut t: Tuple) -> Tuple {
    if rng.gen_ratio(1, 8) {
        if rng.gen_bool(0.5) {
            t.0.push(Expr::int(0));
        } else {
            t.0[0] = Expr::new(ExprKind::Arith(ArithOp::Add, Box::new(Expr::str("a")), Box::new(Expr::int(1))));
        }
    }
    t
}

fn small_process(
    rng: &mut ChaCha8Rng,
    locs: &[Loc],
    tids: &[TableId],
    schemas: &[Schema],
    fresh: &mut usize,
    actions: usize,
) -> Process {
    if actions >= 2 && rng.gen_ratio(1, 5) {
        let p = small_process(rng, locs, tids, schemas, fresh, 1);
        let q = small_process(rng, locs, tids, schemas, fresh, 1);
        return Process::seq(p, q);
    }
    if actions >= 2 && rng.gen_ratio(1, 5) {
        let i = rng.gen_range(0..2);
        let sk = schemas[i].clone();
        let mut rows = Multiset::new();
        for _ in 0..rng.gen_range(0..=2) {
            rows.insert(ValueTuple(sk.0.iter().map(|t| small_value(rng, *t)).collect()));
        }
        let t = Table { iface: Interface { tid: Some(tids[i].clone()), schema: sk.clone() }, rows };
        let (template, vars) = small_template(&sk, fresh);
        let pred = small_pred(rng, &vars);
        let order = *[OrderSpec::Unordered, OrderSpec::Lex, OrderSpec::Asc(1), OrderSpec::Desc(1)].choose(rng).unwrap();
        let j = rng.gen_range(0..2);
        let target = &schemas[j];
        let tuple = Tuple(target.0.iter().map(|ty| small_expr(rng, *ty, &vars)).collect());
        let loc = LocTerm::Lit(locs.choose(rng).unwrap().clone());
        let body = Process::prefix(Action::new(ActionKind::Insert { tid: tids[j].clone(), tuple, loc }), Process::Nil);
        return Process::Foreach {
            table: TableRef::Literal(t),
            template,
            pred,
            order,
            body: Box::new(body),
            span: Span::default(),
        };
    }
    let mut vars: Vec<(String, MType)> = Vec::new();
    let mut acts = Vec::new();
    for _ in 0..rng.gen_range(1..=actions) {
        let i = rng.gen_range(0..2);
        let (tid, sk) = (tids[i].clone(), schemas[i].clone());
        let loc = LocTerm::Lit(locs.choose(rng).unwrap().clone());
        let kind = match rng.gen_range(0..9) {
            0 | 1 => {
                let tuple = Tuple(sk.0.iter().map(|t| small_expr(rng, *t, &vars)).collect());
                ActionKind::Insert { tid, tuple: maybe_break(rng, tuple), loc }
            }
            2 => {
                let (template, tv) = small_template(&sk, fresh);
                let all: Vec<_> = vars.iter().cloned().chain(tv).collect();
                ActionKind::Delete { tid, template, pred: small_pred(rng, &all), loc }
            }
            3 => {
                let (template, tv) = small_template(&sk, fresh);
                let all: Vec<_> = vars.iter().cloned().chain(tv).collect();
                let pred = small_pred(rng, &all);
                let tuple = Tuple(sk.0.iter().map(|t| small_expr(rng, *t, &all)).collect());
                ActionKind::Update { tid, template, pred, tuple: maybe_break(rng, tuple), loc }
            }
            4 => {
                let n = if rng.gen_ratio(1, 4) { 2 } else { 1 };
                let mut tables = Vec::new();
                let mut joined = Vec::new();
                for _ in 0..n {
                    let k = rng.gen_range(0..2);
                    joined.extend(schemas[k].0.iter().copied());
                    let l = LocTerm::Lit(locs.choose(rng).unwrap().clone());
                    tables.push(TableRef::ByName { tid: tids[k].clone(), loc: l });
                }
                let (template, tv) = small_template(&Schema(joined), fresh);
                let all: Vec<_> = vars.iter().cloned().chain(tv.clone()).collect();
                let pred = small_pred(rng, &all);
                let (name, ty) = tv.choose(rng).unwrap().clone();
                let second = small_expr(rng, ty, &all);
                let tuple = maybe_break(rng, Tuple(vec![Expr::var(name), second]));
                *fresh += 1;
                ActionKind::Select { tables, template, pred, tuple, bind: format!("tb{fresh}") }
            }
            5 => {
                let (template, tv) = small_template(&sk, fresh);
                let all: Vec<_> = vars.iter().cloned().chain(tv).collect();
                let func = *[AggrFn::Count, AggrFn::Sum(1), AggrFn::Max(1), AggrFn::Avg(2)].choose(rng).unwrap();
                *fresh += 1;
                let r = format!("r{fresh}");
                vars.push((r.clone(), MType::INT));
                let pred = small_pred(rng, &all);
                ActionKind::Aggr { tid, template, pred, func, bind: Template(vec![Field::Data(r)]), loc }
            }
            6 => ActionKind::Create { tid, loc, schema: sk },
            7 => ActionKind::Drop { tid, loc },
            _ => {
                let tuple = Tuple(sk.0.iter().map(|t| small_expr(rng, *t, &vars)).collect());
                let inner = Process::prefix(Action::new(ActionKind::Insert { tid, tuple, loc: loc.clone() }), Process::Nil);
                ActionKind::Eval { process: Box::new(inner), loc }
            }
        };
        acts.push(Action::new(kind));
    }
    acts.into_iter().rev().fold(Process::Nil, |k, a| Process::prefix(a, k))
}
