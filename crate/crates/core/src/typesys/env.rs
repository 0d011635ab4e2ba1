use std::collections::{BTreeMap, HashMap};

use crate::syntax::ast::{MType, Schema, TableId};

/// Type of a variable: a column type (localities are `Data(LOC)`) or the
/// schema of a table bound to a table variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SType {
    Data(MType),
    Table(Schema),
}

/// `Γ`: variable bindings with constant-time extension, lookup and undo.
#[derive(Clone, Debug, Default)]
pub struct TypeEnv {
    bindings: HashMap<String, Vec<SType>>,
    log: Vec<String>,
}

impl TypeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, name: &str, ty: SType) {
        self.bindings.entry(name.to_string()).or_default().push(ty);
        self.log.push(name.to_string());
    }

    /// Most recent binding of `name`.
    pub fn lookup(&self, name: &str) -> Option<&SType> {
        self.bindings.get(name).and_then(|v| v.last())
    }

    /// Current position for [`TypeEnv::reset`].
    pub fn mark(&self) -> usize {
        self.log.len()
    }

    /// Drops every binding made since `mark`.
    pub fn reset(&mut self, mark: usize) {
        while self.log.len() > mark {
            let name = self.log.pop().expect("log entry");
            if let Some(stack) = self.bindings.get_mut(&name) {
                stack.pop();
                if stack.is_empty() {
                    self.bindings.remove(&name);
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.log.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log.is_empty()
    }

    pub fn extend(&mut self, bindings: impl IntoIterator<Item = (String, SType)>) {
        for (n, t) in bindings {
            self.bind(&n, t);
        }
    }
}

/// `∇`: the schema of each table identifier.
pub type SchemaMap = BTreeMap<TableId, Schema>;
