//! Abstract syntax of Klaim-DB systems.
//!
//! Every node that can be the subject of a diagnostic carries a [`Span`].
//! Spans never take part in equality, ordering or hashing, so two trees are
//! equal exactly when they are equal up to source positions.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;

use crate::values::{Multiset, ValueTuple};

/// A source region. Compares equal to every other span.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(start: usize, end: usize, line: u32, col: u32) -> Self {
        Span { start, end, line, col }
    }

    /// Smallest span covering both `self` and `other`.
    pub fn to(self, other: Span) -> Span {
        if self.line == 0 {
            return other;
        }
        Span { start: self.start, end: other.end.max(self.end), line: self.line, col: self.col }
    }

    pub fn is_known(&self) -> bool {
        self.line > 0
    }
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}
impl Eq for Span {}
impl Hash for Span {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}
impl PartialOrd for Span {
    fn partial_cmp(&self, other: &Span) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Span {
    fn cmp(&self, _: &Span) -> Ordering {
        Ordering::Equal
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// A locality name, written `$name` in source.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loc(pub String);

impl Loc {
    pub fn new(name: impl Into<String>) -> Self {
        Loc(name.into())
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${}", self.0)
    }
}

/// A table identifier such as `KLD`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TableId(pub String);

impl TableId {
    pub fn new(name: impl Into<String>) -> Self {
        TableId(name.into())
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Scalar data types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseType {
    Int,
    String,
    Id,
    Loc,
}

/// Column types: a scalar, a multiset of scalars, or the type of the empty
/// multiset literal, which fits every multiset column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MType {
    Base(BaseType),
    MSet(BaseType),
    AnySet,
}

impl MType {
    pub const INT: MType = MType::Base(BaseType::Int);
    pub const STRING: MType = MType::Base(BaseType::String);
    pub const ID: MType = MType::Base(BaseType::Id);
    pub const LOC: MType = MType::Base(BaseType::Loc);

    /// `self` can be used where `expected` is required.
    pub fn fits(self, expected: MType) -> bool {
        self == expected || (self == MType::AnySet && matches!(expected, MType::MSet(_)))
    }
}

/// Row format of a table: a non-empty product of column types.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Schema(pub Vec<MType>);

impl Schema {
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Componentwise [`MType::fits`].
    pub fn fits(&self, expected: &Schema) -> bool {
        self.0.len() == expected.0.len()
            && self.0.iter().zip(&expected.0).all(|(a, b)| a.fits(*b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn is_ordering(self) -> bool {
        !matches!(self, CmpOp::Eq | CmpOp::Ne)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExprKind {
    IntLit(BigInt),
    StrLit(String),
    TidLit(TableId),
    LocLit(Loc),
    DataVar(String),
    LocVar(String),
    Concat(Box<Expr>, Box<Expr>),
    Arith(ArithOp, Box<Expr>, Box<Expr>),
    MultisetLit(Vec<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr { kind, span: Span::default() }
    }

    pub fn spanned(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    pub fn int(n: i64) -> Self {
        Expr::new(ExprKind::IntLit(BigInt::from(n)))
    }

    pub fn str(s: impl Into<String>) -> Self {
        Expr::new(ExprKind::StrLit(s.into()))
    }

    pub fn var(name: impl Into<String>) -> Self {
        Expr::new(ExprKind::DataVar(name.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pred {
    pub kind: PredKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PredKind {
    True,
    Cmp(CmpOp, Expr, Expr),
    Member(Expr, Expr),
    /// Proper sub-multiset test, an extension used by join queries.
    Subset(Expr, Expr),
    Not(Box<Pred>),
    And(Box<Pred>, Box<Pred>),
}

impl Pred {
    pub fn new(kind: PredKind) -> Self {
        Pred { kind, span: Span::default() }
    }

    pub fn tt() -> Self {
        Pred::new(PredKind::True)
    }
}

/// An actual tuple of expressions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tuple(pub Vec<Expr>);

/// A formal field of a template.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    /// `!x`
    Data(String),
    /// `!@u`
    Loc(String),
}

impl Field {
    pub fn name(&self) -> &str {
        match self {
            Field::Data(n) | Field::Loc(n) => n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Template(pub Vec<Field>);

impl Template {
    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(Field::name)
    }
}

/// A locality position `ℓ`: a literal or a locality variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LocTerm {
    Lit(Loc),
    Var(String),
}

impl LocTerm {
    pub fn as_lit(&self) -> Option<&Loc> {
        match self {
            LocTerm::Lit(l) => Some(l),
            LocTerm::Var(_) => None,
        }
    }
}

/// Table interface. `tid == None` is the anonymous identifier of tables
/// produced by selection.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interface {
    pub tid: Option<TableId>,
    pub schema: Schema,
}

/// A concrete table: interface plus a multiset of constant rows.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Table {
    pub iface: Interface,
    pub rows: Multiset<ValueTuple>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TableRef {
    ByName { tid: TableId, loc: LocTerm },
    ByVar(String),
    Literal(Table),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AggrFn {
    Sum(usize),
    Avg(usize),
    Count,
    Min(usize),
    Max(usize),
}

impl AggrFn {
    /// 1-based column the aggregator reads, if any.
    pub fn column(self) -> Option<usize> {
        match self {
            AggrFn::Sum(c) | AggrFn::Avg(c) | AggrFn::Min(c) | AggrFn::Max(c) => Some(c),
            AggrFn::Count => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OrderSpec {
    Unordered,
    Asc(usize),
    Desc(usize),
    Lex,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub kind: ActionKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionKind {
    Insert { tid: TableId, tuple: Tuple, loc: LocTerm },
    Delete { tid: TableId, template: Template, pred: Pred, loc: LocTerm },
    Select { tables: Vec<TableRef>, template: Template, pred: Pred, tuple: Tuple, bind: String },
    Update { tid: TableId, template: Template, pred: Pred, tuple: Tuple, loc: LocTerm },
    Aggr {
        tid: TableId,
        template: Template,
        pred: Pred,
        func: AggrFn,
        bind: Template,
        loc: LocTerm,
    },
    Create { tid: TableId, loc: LocTerm, schema: Schema },
    Drop { tid: TableId, loc: LocTerm },
    Eval { process: Box<Process>, loc: LocTerm },
}

impl Action {
    pub fn new(kind: ActionKind) -> Self {
        Action { kind, span: Span::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Process {
    Nil,
    Prefix(Box<Action>, Box<Process>),
    Call { name: String, args: Vec<Expr>, span: Span },
    Foreach {
        table: TableRef,
        template: Template,
        pred: Pred,
        order: OrderSpec,
        body: Box<Process>,
        span: Span,
    },
    Seq(Box<Process>, Box<Process>),
}

impl Process {
    pub fn prefix(action: Action, cont: Process) -> Self {
        Process::Prefix(Box::new(action), Box::new(cont))
    }

    pub fn seq(first: Process, second: Process) -> Self {
        Process::Seq(Box::new(first), Box::new(second))
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, Process::Nil)
    }

    /// Sequential composition that drops an inert left operand.
    pub fn then(first: Process, second: Process) -> Self {
        if first.is_nil() {
            second
        } else {
            Process::seq(first, second)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    Proc(Process),
    Tab(Table, Span),
    Par(Box<Component>, Box<Component>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Net {
    #[default]
    Nil,
    Err,
    Par(Box<Net>, Box<Net>),
    Restrict(Loc, Box<Net>),
    Node(Loc, Component),
}

impl Net {
    pub fn par(left: Net, right: Net) -> Self {
        Net::Par(Box::new(left), Box::new(right))
    }

    pub fn node(loc: Loc, comp: Component) -> Self {
        Net::Node(loc, comp)
    }

    /// Right-nested parallel composition of `nets`; `nil` when empty.
    pub fn par_all(nets: impl IntoIterator<Item = Net>) -> Self {
        let mut nets: Vec<Net> = nets.into_iter().collect();
        let Some(mut acc) = nets.pop() else { return Net::Nil };
        while let Some(n) = nets.pop() {
            acc = Net::par(n, acc);
        }
        acc
    }
}

/// A procedure parameter `name: type`. Parameters of type `Loc` are
/// locality variables, all others are data variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param {
    pub name: String,
    pub ty: MType,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcDef {
    pub name: String,
    pub params: Vec<Param>,
    pub body: Process,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SchemaDecl {
    pub tid: TableId,
    pub schema: Schema,
    pub span: Span,
}

/// `schema …  let A(…) := P … in N`
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct System {
    pub schemas: Vec<SchemaDecl>,
    pub procedures: Vec<ProcDef>,
    pub net: Net,
}

impl System {
    pub fn procedure(&self, name: &str) -> Option<&ProcDef> {
        self.procedures.iter().find(|p| p.name == name)
    }
}
