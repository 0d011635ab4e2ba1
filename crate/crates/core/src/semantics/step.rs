//! Enabled steps of a single located process.

use super::{Rule, TransitionLabel};
use crate::net::{CanonicalNet, Located};
use crate::syntax::ast::*;
use crate::syntax::render;
use crate::syntax::vars::free_vars;
use crate::values::{
    aggr_signature, apply_aggr, eval_pred, eval_tuple, join_rows, join_schemas, match_tuple, minimal,
    project_schema, well_sorted_template, well_sorted_tuple, EvalErr, Multiset, Subst, Substitute, ValueTuple,
};

/// What a step does to the rest of the net.
#[derive(Clone, Debug)]
pub(crate) enum Effect {
    None,
    Error,
    Replace { loc: Loc, old: Table, new: Table },
    Create { loc: Loc, table: Table },
    Drop { loc: Loc, table: Table },
    Spawn { loc: Loc, process: Process },
}

#[derive(Clone, Debug)]
pub(crate) struct Step {
    pub rule: Rule,
    pub seq: Option<Rule>,
    pub detail: String,
    pub residual: Process,
    pub effect: Effect,
}

impl Step {
    fn new(rule: Rule, detail: String, residual: Process, effect: Effect) -> Self {
        Step { rule, seq: None, detail, residual, effect }
    }

    fn error(rule: Rule, detail: String) -> Self {
        Step::new(rule, detail, Process::Nil, Effect::Error)
    }
}

/// Applies `step` taken by `actor`, producing the successor net.
pub(crate) fn apply(cn: &CanonicalNet, actor: &Located, step: Step) -> (TransitionLabel, CanonicalNet) {
    let label = TransitionLabel {
        rule: step.rule,
        seq: step.seq,
        actor: actor.loc.clone(),
        detail: step.detail,
        error: matches!(step.effect, Effect::Error),
    };
    if label.error {
        return (label, CanonicalNet::error());
    }
    let mut next = cn.clone();
    let removed = next.items.remove_one(actor);
    debug_assert!(removed, "acting process must be present");
    match step.effect {
        Effect::None | Effect::Error => {}
        Effect::Replace { loc, old, new } => {
            let ok = next.items.remove_one(&Located::table(loc.clone(), old));
            debug_assert!(ok, "replaced table must be present");
            next.items.insert(Located::table(loc, new));
        }
        Effect::Create { loc, table } => next.items.insert(Located::table(loc, table)),
        Effect::Drop { loc, table } => {
            let ok = next.items.remove_one(&Located::table(loc, table));
            debug_assert!(ok, "dropped table must be present");
        }
        Effect::Spawn { loc, process } => next.add_process(loc, process),
    }
    next.add_process(actor.loc.clone(), step.residual);
    (label, next)
}

pub(crate) struct Stepper<'a> {
    pub net: &'a CanonicalNet,
    pub sys: &'a System,
}

/// Outcome of evaluating a predicate on one row.
enum RowTest {
    Holds(Subst),
    Fails,
    Error,
}

fn test_row(row: &ValueTuple, template: &Template, pred: &Pred) -> RowTest {
    let Ok(sigma) = match_tuple(row, template) else { return RowTest::Error };
    match eval_pred(&pred.subst(&sigma)) {
        Ok(true) => RowTest::Holds(sigma),
        Ok(false) => RowTest::Fails,
        Err(EvalErr) => RowTest::Error,
    }
}

fn target_name(tid: &TableId, l: &Loc) -> String {
    format!("{tid}@{l}")
}

impl<'a> Stepper<'a> {
    pub fn steps(&self, p: &Process) -> Vec<Step> {
        match p {
            Process::Nil => Vec::new(),
            Process::Prefix(a, cont) => self.action(a, cont),
            Process::Call { name, args, .. } => self.call(name, args).into_iter().collect(),
            Process::Foreach { table, template, pred, order, body, span } => {
                self.foreach(table, template, pred, *order, body, *span)
            }
            Process::Seq(first, second) => self
                .steps(first)
                .into_iter()
                .map(|mut s| {
                    let done = s.residual.is_nil();
                    s.seq = Some(if done { Rule::SeqFf } else { Rule::SeqTt });
                    s.residual = Process::then(std::mem::replace(&mut s.residual, Process::Nil), (**second).clone());
                    s
                })
                .collect(),
        }
    }

    fn tables_at(&self, loc: &LocTerm, tid: &TableId) -> Vec<(&'a Loc, &'a Table)> {
        let Some(l) = loc.as_lit() else { return Vec::new() };
        self.net
            .items
            .support()
            .filter(|x| x.loc == *l)
            .filter_map(|x| match &x.item {
                crate::net::Item::Table(t) if t.iface.tid.as_ref() == Some(tid) => Some((&x.loc, t)),
                _ => None,
            })
            .collect()
    }

    fn action(&self, a: &Action, cont: &Process) -> Vec<Step> {
        match &a.kind {
            ActionKind::Insert { tid, tuple, loc } => self
                .tables_at(loc, tid)
                .into_iter()
                .map(|(l, t)| {
                    let name = target_name(tid, l);
                    match eval_tuple(tuple) {
                        Ok(row) if well_sorted_tuple(&row, &t.iface.schema) => {
                            let mut new = t.clone();
                            new.rows.insert(row.clone());
                            let effect = Effect::Replace { loc: l.clone(), old: t.clone(), new };
                            Step::new(Rule::Ins, format!("insert {row} into {name}"), cont.clone(), effect)
                        }
                        Ok(row) => Step::error(
                            Rule::Ins,
                            format!("row {row} does not fit {} of {name}", render(&t.iface.schema)),
                        ),
                        Err(_) => Step::error(Rule::Ins, format!("tuple {} does not evaluate", render(tuple))),
                    }
                })
                .collect(),
            ActionKind::Delete { tid, template, pred, loc } => self
                .tables_at(loc, tid)
                .into_iter()
                .map(|(l, t)| self.delete(l, t, tid, template, pred, cont))
                .collect(),
            ActionKind::Update { tid, template, pred, tuple, loc } => self
                .tables_at(loc, tid)
                .into_iter()
                .map(|(l, t)| self.update(l, t, tid, template, pred, tuple, cont))
                .collect(),
            ActionKind::Aggr { tid, template, pred, func, bind, loc } => self
                .tables_at(loc, tid)
                .into_iter()
                .map(|(l, t)| self.aggr(l, t, tid, template, pred, *func, bind, cont))
                .collect(),
            ActionKind::Select { tables, template, pred, tuple, bind } => {
                self.select(tables, template, pred, tuple, bind, cont)
            }
            ActionKind::Create { tid, loc, schema } => {
                let Some(l) = loc.as_lit() else { return Vec::new() };
                let name = target_name(tid, l);
                if self.net.lid().contains(&(l.clone(), tid.clone())) {
                    return vec![Step::new(Rule::Crt, format!("{name} exists, creation skipped"), cont.clone(), Effect::None)];
                }
                let table = Table {
                    iface: Interface { tid: Some(tid.clone()), schema: schema.clone() },
                    rows: Multiset::new(),
                };
                vec![Step::new(Rule::Crt, format!("create {name}"), cont.clone(), Effect::Create { loc: l.clone(), table })]
            }
            ActionKind::Drop { tid, loc } => self
                .tables_at(loc, tid)
                .into_iter()
                .map(|(l, t)| {
                    let effect = Effect::Drop { loc: l.clone(), table: t.clone() };
                    Step::new(Rule::Drp, format!("drop {}", target_name(tid, l)), cont.clone(), effect)
                })
                .collect(),
            ActionKind::Eval { process, loc } => {
                let Some(l) = loc.as_lit() else { return Vec::new() };
                if !free_vars(process).is_empty() {
                    return Vec::new();
                }
                let effect = Effect::Spawn { loc: l.clone(), process: (**process).clone() };
                vec![Step::new(Rule::Evl, format!("spawn at {l}"), cont.clone(), effect)]
            }
        }
    }

    fn delete(&self, l: &Loc, t: &Table, tid: &TableId, template: &Template, pred: &Pred, cont: &Process) -> Step {
        let name = target_name(tid, l);
        if !well_sorted_template(template, &t.iface.schema) {
            return Step::error(Rule::Del, format!("template does not fit {name}"));
        }
        let mut kept = Multiset::new();
        let mut removed = 0;
        for (row, &n) in t.rows.iter() {
            match test_row(row, template, pred) {
                RowTest::Holds(_) => removed += n,
                RowTest::Fails => kept.insert_n(row.clone(), n),
                RowTest::Error => return Step::error(Rule::Del, format!("predicate fails to evaluate on {row}")),
            }
        }
        let new = Table { iface: t.iface.clone(), rows: kept };
        let effect = Effect::Replace { loc: l.clone(), old: t.clone(), new };
        Step::new(Rule::Del, format!("delete {removed} rows from {name}"), cont.clone(), effect)
    }

    #[allow(clippy::too_many_arguments)]
    fn update(
        &self,
        l: &Loc,
        t: &Table,
        tid: &TableId,
        template: &Template,
        pred: &Pred,
        tuple: &Tuple,
        cont: &Process,
    ) -> Step {
        let name = target_name(tid, l);
        let sk = &t.iface.schema;
        if !well_sorted_template(template, sk) {
            return Step::error(Rule::Upd, format!("template does not fit {name}"));
        }
        let mut rows = Multiset::new();
        let mut changed = 0;
        for (row, &n) in t.rows.iter() {
            let Ok(sigma) = match_tuple(row, template) else {
                return Step::error(Rule::Upd, format!("row {row} does not match the template"));
            };
            let holds = eval_pred(&pred.subst(&sigma));
            let Ok(new_row) = eval_tuple(&tuple.subst(&sigma)) else {
                return Step::error(Rule::Upd, format!("new tuple fails to evaluate on {row}"));
            };
            match holds {
                Err(_) => return Step::error(Rule::Upd, format!("predicate fails to evaluate on {row}")),
                Ok(true) if !well_sorted_tuple(&new_row, sk) => {
                    return Step::error(Rule::Upd, format!("updated row {new_row} does not fit {}", render(sk)))
                }
                Ok(true) => {
                    changed += n;
                    rows.insert_n(new_row, n);
                }
                Ok(false) => rows.insert_n(row.clone(), n),
            }
        }
        let new = Table { iface: t.iface.clone(), rows };
        let effect = Effect::Replace { loc: l.clone(), old: t.clone(), new };
        Step::new(Rule::Upd, format!("update {changed} rows of {name}"), cont.clone(), effect)
    }

    #[allow(clippy::too_many_arguments)]
    fn aggr(
        &self,
        l: &Loc,
        t: &Table,
        tid: &TableId,
        template: &Template,
        pred: &Pred,
        func: AggrFn,
        bind: &Template,
        cont: &Process,
    ) -> Step {
        let name = target_name(tid, l);
        let sk = &t.iface.schema;
        if !well_sorted_template(template, sk) {
            return Step::error(Rule::Agr, format!("template does not fit {name}"));
        }
        let Some(out) = aggr_signature(func, sk) else {
            return Step::error(Rule::Agr, format!("{} does not apply to {}", render(&func), render(sk)));
        };
        if !well_sorted_template(bind, &out) {
            return Step::error(Rule::Agr, format!("result template does not fit {}", render(&out)));
        }
        let mut selected = Multiset::new();
        for (row, &n) in t.rows.iter() {
            match test_row(row, template, pred) {
                RowTest::Holds(_) => selected.insert_n(row.clone(), n),
                RowTest::Fails => {}
                RowTest::Error => return Step::error(Rule::Agr, format!("predicate fails to evaluate on {row}")),
            }
        }
        let Some(result) = apply_aggr(func, &selected) else {
            return Step::error(Rule::Agr, format!("{} does not apply to the selected rows", render(&func)));
        };
        let Ok(sigma) = match_tuple(&result, bind) else {
            return Step::error(Rule::Agr, format!("result {result} does not match the result template"));
        };
        let detail = format!("{} over {} rows of {name} = {result}", render(&func), selected.len());
        Step::new(Rule::Agr, detail, cont.subst(&sigma), Effect::None)
    }

    fn select(
        &self,
        refs: &[TableRef],
        template: &Template,
        pred: &Pred,
        tuple: &Tuple,
        bind: &str,
        cont: &Process,
    ) -> Vec<Step> {
        // Candidate tables for each reference; one step per combination.
        let mut choices: Vec<Vec<&Table>> = Vec::with_capacity(refs.len());
        for r in refs {
            let found: Vec<&Table> = match r {
                TableRef::ByName { tid, loc } => self.tables_at(loc, tid).into_iter().map(|(_, t)| t).collect(),
                TableRef::Literal(t) => vec![t],
                TableRef::ByVar(_) => Vec::new(),
            };
            if found.is_empty() {
                return Vec::new();
            }
            choices.push(found);
        }
        let mut combos: Vec<Vec<&Table>> = vec![Vec::new()];
        for c in &choices {
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    c.iter().map(move |t| {
                        let mut v = prefix.clone();
                        v.push(*t);
                        v
                    })
                })
                .collect();
        }
        combos.into_iter().map(|tables| self.select_from(&tables, template, pred, tuple, bind, cont)).collect()
    }

    fn select_from(
        &self,
        tables: &[&Table],
        template: &Template,
        pred: &Pred,
        tuple: &Tuple,
        bind: &str,
        cont: &Process,
    ) -> Step {
        let joined = join_schemas(tables);
        if !well_sorted_template(template, &joined) {
            return Step::error(Rule::Sel, format!("template does not fit {}", render(&joined)));
        }
        let mut result = Multiset::new();
        for (row, &n) in join_rows(tables).iter() {
            let Ok(sigma) = match_tuple(row, template) else {
                return Step::error(Rule::Sel, format!("row {row} does not match the template"));
            };
            let holds = eval_pred(&pred.subst(&sigma));
            let Ok(out) = eval_tuple(&tuple.subst(&sigma)) else {
                return Step::error(Rule::Sel, format!("selected tuple fails to evaluate on {row}"));
            };
            match holds {
                Err(_) => return Step::error(Rule::Sel, format!("predicate fails to evaluate on {row}")),
                Ok(true) => result.insert_n(out, n),
                Ok(false) => {}
            }
        }
        let Some(schema) = project_schema(&joined, template, tuple) else {
            return Step::error(Rule::Sel, "the selected tuple has no schema".into());
        };
        let detail = format!("select {} rows into {bind}", result.len());
        let table = Table { iface: Interface { tid: None, schema }, rows: result };
        Step::new(Rule::Sel, detail, cont.subst(&Subst::table(bind, table)), Effect::None)
    }

    fn call(&self, name: &str, args: &[Expr]) -> Option<Step> {
        let def = self.sys.procedure(name)?;
        if def.params.len() != args.len() {
            return None;
        }
        let values = eval_tuple(&Tuple(args.to_vec())).ok()?;
        let mut sigma = Subst::new();
        for (p, v) in def.params.iter().zip(values.0) {
            sigma.bind_value(p.name.clone(), v);
        }
        let detail = format!("call {name}{}", render(&Tuple(args.to_vec())));
        Some(Step::new(Rule::Call, detail, def.body.subst(&sigma), Effect::None))
    }

    fn foreach(
        &self,
        table: &TableRef,
        template: &Template,
        pred: &Pred,
        order: OrderSpec,
        body: &Process,
        span: Span,
    ) -> Vec<Step> {
        let TableRef::Literal(t) = table else { return Vec::new() };
        let mut satisfying = Multiset::new();
        let mut substs = Vec::new();
        let mut erroneous = false;
        for (row, &n) in t.rows.iter() {
            match test_row(row, template, pred) {
                RowTest::Holds(sigma) => {
                    satisfying.insert_n(row.clone(), n);
                    substs.push((row.clone(), sigma));
                }
                RowTest::Fails => {}
                RowTest::Error => erroneous = true,
            }
        }
        if satisfying.is_empty() {
            if erroneous {
                return vec![Step::error(Rule::ForFf, "loop predicate fails to evaluate".into())];
            }
            return vec![Step::new(Rule::ForFf, "loop finished".into(), Process::Nil, Effect::None)];
        }
        minimal(&satisfying, order)
            .into_iter()
            .map(|t0| {
                let sigma = &substs.iter().find(|(r, _)| *r == t0).expect("satisfying row").1;
                let mut rest = t.clone();
                rest.rows.remove_one(&t0);
                let again = Process::Foreach {
                    table: TableRef::Literal(rest),
                    template: template.clone(),
                    pred: pred.clone(),
                    order,
                    body: Box::new(body.clone()),
                    span,
                };
                let residual = Process::then(body.subst(sigma), again);
                Step::new(Rule::ForTt, format!("iterate with {t0}"), residual, Effect::None)
            })
            .collect()
    }
}
