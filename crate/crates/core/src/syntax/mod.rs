//! Abstract syntax, concrete grammar, pretty-printing and binding structure.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod rename;
pub mod render;
pub mod vars;

pub use ast::System;
pub use parser::{parse_expr, parse_pred, ParseError};
pub use render::{render, Render};
pub use vars::{bound_vars, free_locs, free_vars};

use ast::{Net, Process};

/// Parses a whole system, resolves locality variables and renames bound
/// names apart.
pub fn parse_system(src: &str) -> Result<System, ParseError> {
    let mut sys = parser::parse_system_raw(src)?;
    rename::resolve_locality_vars(&mut sys);
    rename::rename_apart(&mut sys);
    Ok(sys)
}

/// Parses a standalone process with locality variables resolved.
pub fn parse_process(src: &str) -> Result<Process, ParseError> {
    let mut p = parser::parse_process_raw(src)?;
    rename::resolve_locality_vars_in(&mut p);
    Ok(p)
}

/// Parses a standalone net with locality variables resolved.
pub fn parse_net(src: &str) -> Result<Net, ParseError> {
    let mut sys = System { net: parser::parse_net_raw(src)?, ..System::default() };
    rename::resolve_locality_vars(&mut sys);
    Ok(sys.net)
}
