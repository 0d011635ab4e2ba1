use std::fmt;

use thiserror::Error;

use crate::syntax::ast::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeErrorKind {
    Unbound,
    Mismatch,
    Arity,
    TemplateMismatch,
    UnknownTable,
    SchemaConflict,
    Aggregator,
    Order,
    UnknownProcedure,
    DuplicateProcedure,
    ArgumentMismatch,
    BadTableRow,
    ErrNet,
}

impl TypeErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TypeErrorKind::Unbound => "unbound",
            TypeErrorKind::Mismatch => "mismatch",
            TypeErrorKind::Arity => "arity",
            TypeErrorKind::TemplateMismatch => "template",
            TypeErrorKind::UnknownTable => "unknown-table",
            TypeErrorKind::SchemaConflict => "schema-conflict",
            TypeErrorKind::Aggregator => "aggregator",
            TypeErrorKind::Order => "order",
            TypeErrorKind::UnknownProcedure => "unknown-procedure",
            TypeErrorKind::DuplicateProcedure => "duplicate-procedure",
            TypeErrorKind::ArgumentMismatch => "argument",
            TypeErrorKind::BadTableRow => "table-row",
            TypeErrorKind::ErrNet => "err-net",
        }
    }
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct TypeError {
    pub span: Span,
    pub kind: TypeErrorKind,
    pub message: String,
}

impl TypeError {
    pub fn new(span: Span, kind: TypeErrorKind, message: impl Into<String>) -> Self {
        TypeError { span, kind, message: message.into() }
    }
}
