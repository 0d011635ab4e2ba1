//! Recursive-descent parser for `.kdb` sources.

use std::collections::HashSet;

use num_bigint::BigInt;
use thiserror::Error;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use crate::values::{eval_tuple, Multiset};

/// A syntax error with its position and the tokens that would have been
/// accepted there.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
    pub expected: Vec<String>,
}

type R<T> = Result<T, Failure>;

/// Internal error carrying the token index it was raised at, so that the
/// deepest of several backtracked alternatives can be reported.
#[derive(Debug)]
struct Failure {
    at: usize,
    error: ParseError,
}

/// Words that cannot be used as variable or procedure names.
pub const RESERVED: &[&str] = &[
    "nil", "ERR", "new", "table", "schema", "let", "in", "true", "not", "and", "subset", "insert",
    "delete", "select", "update", "aggr", "create", "drop", "eval", "foreach",
];

const ACTIONS: &[&str] = &["insert", "delete", "select", "update", "aggr", "create", "drop", "eval"];

fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

/// Table identifiers and uppercase literals start with an uppercase letter.
fn is_upper(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase())
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn fail_at<T>(&self, at: usize, message: String, expected: &[&str]) -> R<T> {
        let span = self.toks[at].span;
        Err(Failure {
            at,
            error: ParseError {
                line: span.line,
                col: span.col,
                message,
                expected: expected.iter().map(|s| s.to_string()).collect(),
            },
        })
    }

    fn unexpected<T>(&self, expected: &[&str]) -> R<T> {
        let msg = format!("expected {}, found {}", expected.join(" or "), self.peek());
        self.fail_at(self.pos, msg, expected)
    }

    fn expect(&mut self, tok: Tok) -> R<Span> {
        if *self.peek() == tok {
            Ok(self.advance().span)
        } else {
            self.unexpected(&[&tok.to_string()])
        }
    }

    fn expect_kw(&mut self, kw: &str) -> R<Span> {
        if self.is_kw(kw) {
            Ok(self.advance().span)
        } else {
            self.unexpected(&[&format!("`{kw}`")])
        }
    }

    /// Runs `f`, restoring the position if it fails.
    fn attempt<T>(&mut self, f: impl FnOnce(&mut Self) -> R<T>) -> R<T> {
        let saved = self.pos;
        let r = f(self);
        if r.is_err() {
            self.pos = saved;
        }
        r
    }

    fn deeper(a: Failure, b: Failure) -> Failure {
        if b.at > a.at {
            b
        } else {
            a
        }
    }

    fn finish<T>(&mut self, r: R<T>) -> Result<T, ParseError> {
        let v = r.map_err(|f| f.error)?;
        if *self.peek() != Tok::Eof {
            return self.unexpected::<T>(&["end of input"]).map_err(|f| f.error);
        }
        Ok(v)
    }

    // ---- names -------------------------------------------------------

    fn variable_name(&mut self) -> R<(String, Span)> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_upper(&s) && !is_reserved(&s) => Ok((s, self.advance().span)),
            Tok::Ident(s) if is_reserved(&s) => {
                self.fail_at(self.pos, format!("`{s}` is a reserved word"), &["variable name"])
            }
            _ => self.unexpected(&["variable name"]),
        }
    }

    fn table_id(&mut self) -> R<TableId> {
        match self.peek().clone() {
            Tok::Ident(s) if is_upper(&s) && !is_reserved(&s) => {
                self.advance();
                Ok(TableId(s))
            }
            _ => self.unexpected(&["table identifier"]),
        }
    }

    fn loc_name(&mut self) -> R<Loc> {
        match self.peek().clone() {
            Tok::Loc(s) => {
                self.advance();
                Ok(Loc(s))
            }
            _ => self.unexpected(&["locality"]),
        }
    }

    fn loc_term(&mut self) -> R<LocTerm> {
        match self.peek() {
            Tok::Loc(_) => Ok(LocTerm::Lit(self.loc_name()?)),
            _ => Ok(LocTerm::Var(self.variable_name()?.0)),
        }
    }

    fn index(&mut self) -> R<usize> {
        match self.peek().clone() {
            Tok::Int(n) => match usize::try_from(&n) {
                Ok(i) if i >= 1 => {
                    self.advance();
                    Ok(i)
                }
                _ => self.fail_at(self.pos, "column indices start at 1".into(), &["column index"]),
            },
            _ => self.unexpected(&["column index"]),
        }
    }

    // ---- types -------------------------------------------------------

    fn base_type(&mut self) -> R<BaseType> {
        let b = match self.peek() {
            Tok::Ident(s) if s == "Int" => BaseType::Int,
            Tok::Ident(s) if s == "String" => BaseType::String,
            Tok::Ident(s) if s == "Id" => BaseType::Id,
            Tok::Ident(s) if s == "Loc" => BaseType::Loc,
            _ => return self.unexpected(&["`Int`", "`String`", "`Id`", "`Loc`"]),
        };
        self.advance();
        Ok(b)
    }

    fn mtype(&mut self) -> R<MType> {
        if *self.peek() == Tok::LBrace {
            self.advance();
            let b = self.base_type()?;
            self.expect(Tok::RBrace)?;
            Ok(MType::MSet(b))
        } else {
            Ok(MType::Base(self.base_type()?))
        }
    }

    fn schema(&mut self) -> R<Schema> {
        self.expect(Tok::LParen)?;
        let mut cols = vec![self.mtype()?];
        while *self.peek() == Tok::Comma {
            self.advance();
            cols.push(self.mtype()?);
        }
        self.expect(Tok::RParen)?;
        Ok(Schema(cols))
    }

    // ---- expressions -------------------------------------------------

    fn expr(&mut self) -> R<Expr> {
        let mut l = self.additive()?;
        while *self.peek() == Tok::PlusPlus {
            self.advance();
            let r = self.additive()?;
            let span = l.span.to(r.span);
            l = Expr::spanned(ExprKind::Concat(Box::new(l), Box::new(r)), span);
        }
        Ok(l)
    }

    fn additive(&mut self) -> R<Expr> {
        let mut l = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(l),
            };
            self.advance();
            let r = self.multiplicative()?;
            let span = l.span.to(r.span);
            l = Expr::spanned(ExprKind::Arith(op, Box::new(l), Box::new(r)), span);
        }
    }

    fn multiplicative(&mut self) -> R<Expr> {
        let mut l = self.atom()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                _ => return Ok(l),
            };
            self.advance();
            let r = self.atom()?;
            let span = l.span.to(r.span);
            l = Expr::spanned(ExprKind::Arith(op, Box::new(l), Box::new(r)), span);
        }
    }

    fn atom(&mut self) -> R<Expr> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                ExprKind::IntLit(n)
            }
            Tok::Minus if matches!(self.peek_at(1), Tok::Int(_)) => {
                self.advance();
                let Tok::Int(n) = self.advance().tok else { unreachable!() };
                ExprKind::IntLit(-n)
            }
            Tok::Str(s) => {
                self.advance();
                ExprKind::StrLit(s)
            }
            Tok::Loc(l) => {
                self.advance();
                ExprKind::LocLit(Loc(l))
            }
            Tok::Ident(s) if is_upper(&s) && !is_reserved(&s) => {
                self.advance();
                ExprKind::TidLit(TableId(s))
            }
            Tok::Ident(_) => ExprKind::DataVar(self.variable_name()?.0),
            Tok::LBrace => {
                self.advance();
                let mut items = Vec::new();
                if *self.peek() != Tok::RBrace {
                    items.push(self.multiset_element()?);
                    while *self.peek() == Tok::Comma {
                        self.advance();
                        items.push(self.multiset_element()?);
                    }
                }
                self.expect(Tok::RBrace)?;
                ExprKind::MultisetLit(items)
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(e);
            }
            _ => return self.unexpected(&["expression"]),
        };
        Ok(Expr::spanned(kind, span.to(self.prev_span())))
    }

    fn multiset_element(&mut self) -> R<Expr> {
        let at = self.pos;
        let e = self.expr()?;
        if contains_multiset(&e) {
            return self.fail_at(at, "multiset elements cannot contain multisets".into(), &["scalar expression"]);
        }
        Ok(e)
    }

    fn tuple(&mut self) -> R<Tuple> {
        self.expect(Tok::LParen)?;
        let mut items = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.advance();
            items.push(self.expr()?);
        }
        self.expect(Tok::RParen)?;
        Ok(Tuple(items))
    }

    // ---- predicates --------------------------------------------------

    fn pred(&mut self) -> R<Pred> {
        let mut l = self.pred_unary()?;
        while self.is_kw("and") {
            self.advance();
            let r = self.pred_unary()?;
            let span = l.span.to(r.span);
            l = Pred { kind: PredKind::And(Box::new(l), Box::new(r)), span };
        }
        Ok(l)
    }

    fn pred_unary(&mut self) -> R<Pred> {
        if self.is_kw("not") {
            let span = self.advance().span;
            let inner = self.pred_unary()?;
            let span = span.to(inner.span);
            return Ok(Pred { kind: PredKind::Not(Box::new(inner)), span });
        }
        if self.is_kw("true") {
            let span = self.advance().span;
            return Ok(Pred { kind: PredKind::True, span });
        }
        if *self.peek() == Tok::LParen {
            let grouped = self.attempt(|p| {
                p.advance();
                let inner = p.pred()?;
                p.expect(Tok::RParen)?;
                Ok(inner)
            });
            return match grouped {
                Ok(p) => Ok(p),
                Err(e1) => self.attempt(Self::comparison).map_err(|e2| Self::deeper(e1, e2)),
            };
        }
        self.comparison()
    }

    fn comparison(&mut self) -> R<Pred> {
        let l = self.expr()?;
        let op = match self.peek() {
            Tok::Eq => Some(CmpOp::Eq),
            Tok::Ne => Some(CmpOp::Ne),
            Tok::Lt => Some(CmpOp::Lt),
            Tok::Le => Some(CmpOp::Le),
            Tok::Gt => Some(CmpOp::Gt),
            Tok::Ge => Some(CmpOp::Ge),
            _ => None,
        };
        let kind = if let Some(op) = op {
            self.advance();
            let r = self.expr()?;
            PredKind::Cmp(op, l, r)
        } else if self.is_kw("in") {
            self.advance();
            PredKind::Member(l, self.expr()?)
        } else if self.is_kw("subset") {
            self.advance();
            PredKind::Subset(l, self.expr()?)
        } else {
            return self.unexpected(&["comparison operator", "`in`", "`subset`"]);
        };
        let span = match &kind {
            PredKind::Cmp(_, a, b) | PredKind::Member(a, b) | PredKind::Subset(a, b) => a.span.to(b.span),
            _ => unreachable!(),
        };
        Ok(Pred { kind, span })
    }

    // ---- templates and tables ----------------------------------------

    fn template(&mut self) -> R<Template> {
        self.expect(Tok::LParen)?;
        let mut fields = Vec::new();
        let mut seen = HashSet::new();
        loop {
            let at = self.pos;
            let field = match self.peek() {
                Tok::Bang => {
                    self.advance();
                    Field::Data(self.variable_name()?.0)
                }
                Tok::BangAt => {
                    self.advance();
                    Field::Loc(self.variable_name()?.0)
                }
                _ => return self.unexpected(&["`!x`", "`!@u`"]),
            };
            if !seen.insert(field.name().to_string()) {
                return self.fail_at(
                    at,
                    format!("template is not linear: `{}` is bound more than once", field.name()),
                    &[],
                );
            }
            fields.push(field);
            if *self.peek() == Tok::Comma {
                self.advance();
            } else {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        Ok(Template(fields))
    }

    /// `table TID : (sk) = { rows }`
    fn table_literal(&mut self) -> R<(Table, Span)> {
        let start = self.expect_kw("table")?;
        if matches!(self.peek(), Tok::Ident(s) if s == "_") {
            return self.fail_at(self.pos, "anonymous tables cannot be written in source".into(), &["table identifier"]);
        }
        let tid = self.table_id()?;
        self.expect(Tok::Colon)?;
        let schema = self.schema()?;
        self.expect(Tok::Eq)?;
        self.expect(Tok::LBrace)?;
        let mut rows = Multiset::new();
        if *self.peek() != Tok::RBrace {
            loop {
                let at = self.pos;
                let t = self.tuple()?;
                match eval_tuple(&t) {
                    Ok(row) => rows.insert(row),
                    Err(_) => return self.fail_at(at, "table rows must be constant values".into(), &[]),
                }
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace)?;
        let table = Table { iface: Interface { tid: Some(tid), schema }, rows };
        Ok((table, start.to(self.prev_span())))
    }

    fn table_ref(&mut self) -> R<TableRef> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "table" => Ok(TableRef::Literal(self.table_literal()?.0)),
            Tok::Ident(s) if is_upper(&s) => {
                let (tid, loc) = self.target()?;
                Ok(TableRef::ByName { tid, loc })
            }
            Tok::Ident(_) => Ok(TableRef::ByVar(self.variable_name()?.0)),
            _ => self.unexpected(&["table"]),
        }
    }

    /// `TID @ ℓ`
    fn target(&mut self) -> R<(TableId, LocTerm)> {
        let tid = self.table_id()?;
        self.expect(Tok::At)?;
        Ok((tid, self.loc_term()?))
    }

    fn aggr_fn(&mut self) -> R<AggrFn> {
        let Tok::Ident(name) = self.peek().clone() else {
            return self.unexpected(&["aggregator"]);
        };
        let ctor: fn(usize) -> AggrFn = match name.as_str() {
            "count" => {
                self.advance();
                return Ok(AggrFn::Count);
            }
            "sum" => AggrFn::Sum,
            "avg" => AggrFn::Avg,
            "min" => AggrFn::Min,
            "max" => AggrFn::Max,
            _ => return self.unexpected(&["`sum`", "`avg`", "`count`", "`min`", "`max`"]),
        };
        self.advance();
        self.expect(Tok::LParen)?;
        let i = self.index()?;
        self.expect(Tok::RParen)?;
        Ok(ctor(i))
    }

    fn order(&mut self) -> R<OrderSpec> {
        if *self.peek() == Tok::LBrace {
            self.advance();
            self.expect(Tok::RBrace)?;
            return Ok(OrderSpec::Unordered);
        }
        let Tok::Ident(name) = self.peek().clone() else {
            return self.unexpected(&["order"]);
        };
        let ctor: fn(usize) -> OrderSpec = match name.as_str() {
            "lex" => {
                self.advance();
                return Ok(OrderSpec::Lex);
            }
            "asc" => OrderSpec::Asc,
            "desc" => OrderSpec::Desc,
            _ => return self.unexpected(&["`{}`", "`asc`", "`desc`", "`lex`"]),
        };
        self.advance();
        self.expect(Tok::LParen)?;
        let i = self.index()?;
        self.expect(Tok::RParen)?;
        Ok(ctor(i))
    }

    // ---- actions and processes ---------------------------------------

    fn action(&mut self) -> R<Action> {
        let Tok::Ident(kw) = self.peek().clone() else { unreachable!() };
        let start = self.advance().span;
        self.expect(Tok::LParen)?;
        let kind = match kw.as_str() {
            "insert" => {
                let (tid, loc) = self.target()?;
                self.expect(Tok::Comma)?;
                let tuple = self.tuple()?;
                ActionKind::Insert { tid, tuple, loc }
            }
            "delete" => {
                let (tid, loc) = self.target()?;
                self.expect(Tok::Comma)?;
                let template = self.template()?;
                self.expect(Tok::Comma)?;
                let pred = self.pred()?;
                ActionKind::Delete { tid, template, pred, loc }
            }
            "select" => {
                let tables = if *self.peek() == Tok::LBrack {
                    self.advance();
                    let mut ts = vec![self.table_ref()?];
                    while *self.peek() == Tok::Comma {
                        self.advance();
                        ts.push(self.table_ref()?);
                    }
                    self.expect(Tok::RBrack)?;
                    ts
                } else {
                    vec![self.table_ref()?]
                };
                self.expect(Tok::Comma)?;
                let template = self.template()?;
                self.expect(Tok::Comma)?;
                let pred = self.pred()?;
                self.expect(Tok::Comma)?;
                let tuple = self.tuple()?;
                self.expect(Tok::Comma)?;
                self.expect(Tok::Bang)?;
                let bind = self.variable_name()?.0;
                ActionKind::Select { tables, template, pred, tuple, bind }
            }
            "update" => {
                let (tid, loc) = self.target()?;
                self.expect(Tok::Comma)?;
                let template = self.template()?;
                self.expect(Tok::Comma)?;
                let pred = self.pred()?;
                self.expect(Tok::Comma)?;
                let tuple = self.tuple()?;
                ActionKind::Update { tid, template, pred, tuple, loc }
            }
            "aggr" => {
                let (tid, loc) = self.target()?;
                self.expect(Tok::Comma)?;
                let template = self.template()?;
                self.expect(Tok::Comma)?;
                let pred = self.pred()?;
                self.expect(Tok::Comma)?;
                let func = self.aggr_fn()?;
                self.expect(Tok::Comma)?;
                let bind = self.template()?;
                ActionKind::Aggr { tid, template, pred, func, bind, loc }
            }
            "create" => {
                let (tid, loc) = self.target()?;
                self.expect(Tok::Comma)?;
                let schema = self.schema()?;
                ActionKind::Create { tid, loc, schema }
            }
            "drop" => {
                let (tid, loc) = self.target()?;
                ActionKind::Drop { tid, loc }
            }
            "eval" => {
                let process = self.process()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::At)?;
                let loc = self.loc_term()?;
                let span = start.to(self.prev_span());
                return Ok(Action { kind: ActionKind::Eval { process: Box::new(process), loc }, span });
            }
            _ => unreachable!(),
        };
        self.expect(Tok::RParen)?;
        Ok(Action { kind, span: start.to(self.prev_span()) })
    }

    fn process(&mut self) -> R<Process> {
        let mut l = self.prefix_process()?;
        while *self.peek() == Tok::Semi {
            self.advance();
            let r = self.prefix_process()?;
            l = Process::seq(l, r);
        }
        Ok(l)
    }

    fn prefix_process(&mut self) -> R<Process> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "nil" => {
                self.advance();
                Ok(Process::Nil)
            }
            Tok::LParen => {
                self.advance();
                let p = self.process()?;
                self.expect(Tok::RParen)?;
                Ok(p)
            }
            Tok::Ident(s) if s == "foreach" => self.foreach(),
            Tok::Ident(s) if ACTIONS.contains(&s.as_str()) && *self.peek_at(1) == Tok::LParen => {
                let a = self.action()?;
                self.expect(Tok::Dot)?;
                let cont = self.prefix_process()?;
                Ok(Process::prefix(a, cont))
            }
            Tok::Ident(s) if !is_reserved(&s) && *self.peek_at(1) == Tok::LParen => {
                let start = self.advance().span;
                self.advance();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    args.push(self.expr()?);
                    while *self.peek() == Tok::Comma {
                        self.advance();
                        args.push(self.expr()?);
                    }
                }
                self.expect(Tok::RParen)?;
                Ok(Process::Call { name: s, args, span: start.to(self.prev_span()) })
            }
            _ => self.unexpected(&["process"]),
        }
    }

    fn foreach(&mut self) -> R<Process> {
        let start = self.expect_kw("foreach")?;
        self.expect(Tok::LParen)?;
        let table = self.table_ref()?;
        self.expect(Tok::Comma)?;
        let template = self.template()?;
        self.expect(Tok::Comma)?;
        let pred = self.pred()?;
        self.expect(Tok::Comma)?;
        let order = self.order()?;
        self.expect(Tok::RParen)?;
        let span = start.to(self.prev_span());
        self.expect(Tok::LBrace)?;
        let body = self.process()?;
        self.expect(Tok::RBrace)?;
        Ok(Process::Foreach { table, template, pred, order, body: Box::new(body), span })
    }

    // ---- components and nets -----------------------------------------

    fn component(&mut self) -> R<Component> {
        let mut l = self.component_item()?;
        while *self.peek() == Tok::Bar {
            self.advance();
            let r = self.component_item()?;
            l = Component::Par(Box::new(l), Box::new(r));
        }
        Ok(l)
    }

    fn component_item(&mut self) -> R<Component> {
        if self.is_kw("table") {
            let (t, span) = self.table_literal()?;
            return Ok(Component::Tab(t, span));
        }
        if *self.peek() == Tok::LParen {
            let as_process = self.attempt(Self::process);
            return match as_process {
                Ok(p) => Ok(Component::Proc(p)),
                Err(e1) => self
                    .attempt(|p| {
                        p.advance();
                        let c = p.component()?;
                        p.expect(Tok::RParen)?;
                        Ok(c)
                    })
                    .map_err(|e2| Self::deeper(e1, e2)),
            };
        }
        Ok(Component::Proc(self.process()?))
    }

    fn net(&mut self) -> R<Net> {
        let mut l = self.net_item()?;
        while *self.peek() == Tok::BarBar {
            self.advance();
            let r = self.net_item()?;
            l = Net::par(l, r);
        }
        Ok(l)
    }

    fn net_item(&mut self) -> R<Net> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "nil" => {
                self.advance();
                Ok(Net::Nil)
            }
            Tok::Ident(s) if s == "ERR" => {
                self.advance();
                Ok(Net::Err)
            }
            Tok::LParen if matches!(self.peek_at(1), Tok::Ident(s) if s == "new") => {
                self.advance();
                self.advance();
                let l = self.loc_name()?;
                self.expect(Tok::RParen)?;
                let inner = self.net_item()?;
                Ok(Net::Restrict(l, Box::new(inner)))
            }
            Tok::LParen => {
                self.advance();
                let n = self.net()?;
                self.expect(Tok::RParen)?;
                Ok(n)
            }
            Tok::Loc(_) => {
                let l = self.loc_name()?;
                self.expect(Tok::ColonColon)?;
                Ok(Net::Node(l, self.component()?))
            }
            _ => self.unexpected(&["net"]),
        }
    }

    // ---- systems -----------------------------------------------------

    fn param(&mut self) -> R<Param> {
        let (name, _) = self.variable_name()?;
        self.expect(Tok::Colon)?;
        let ty = self.mtype()?;
        Ok(Param { name, ty })
    }

    fn procedure(&mut self) -> R<ProcDef> {
        let start = self.span();
        let name = match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s) => {
                self.advance();
                s
            }
            _ => return self.unexpected(&["procedure name"]),
        };
        self.expect(Tok::LParen)?;
        let mut params = Vec::new();
        if *self.peek() != Tok::RParen {
            params.push(self.param()?);
            while *self.peek() == Tok::Comma {
                self.advance();
                params.push(self.param()?);
            }
        }
        self.expect(Tok::RParen)?;
        let span = start.to(self.prev_span());
        self.expect(Tok::ColonEq)?;
        let body = self.process()?;
        Ok(ProcDef { name, params, body, span })
    }

    fn system(&mut self) -> R<System> {
        let mut schemas = Vec::new();
        while self.is_kw("schema") {
            let start = self.advance().span;
            let tid = self.table_id()?;
            self.expect(Tok::Colon)?;
            let schema = self.schema()?;
            schemas.push(SchemaDecl { tid, schema, span: start.to(self.prev_span()) });
        }
        let mut procedures = Vec::new();
        if self.is_kw("let") {
            self.advance();
            procedures.push(self.procedure()?);
            while !self.is_kw("in") {
                procedures.push(self.procedure()?);
            }
            self.expect_kw("in")?;
        }
        let net = self.net()?;
        Ok(System { schemas, procedures, net })
    }
}

fn contains_multiset(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::MultisetLit(_) => true,
        ExprKind::Concat(a, b) | ExprKind::Arith(_, a, b) => contains_multiset(a) || contains_multiset(b),
        _ => false,
    }
}

/// Parses a system without the post-parse passes.
pub(crate) fn parse_system_raw(src: &str) -> Result<System, ParseError> {
    let mut p = Parser::new(src)?;
    let r = p.system();
    p.finish(r)
}

macro_rules! entry_point {
    ($(#[$doc:meta])* $name:ident, $method:ident, $ty:ty) => {
        $(#[$doc])*
        pub fn $name(src: &str) -> Result<$ty, ParseError> {
            let mut p = Parser::new(src)?;
            let r = p.$method();
            p.finish(r)
        }
    };
}

entry_point!(
    /// Parses a standalone expression.
    parse_expr, expr, Expr
);
entry_point!(
    /// Parses a standalone predicate.
    parse_pred, pred, Pred
);
entry_point!(
    /// Parses a standalone process (no locality-variable resolution).
    parse_process_raw, process, Process
);
entry_point!(
    /// Parses a standalone net (no locality-variable resolution).
    parse_net_raw, net, Net
);

/// Integer literal helper used by the renderer's tests and generators.
pub fn int_literal(n: i64) -> ExprKind {
    ExprKind::IntLit(BigInt::from(n))
}
