//! Klaim-DB: a coordination language for distributed databases.
//!
//! The crate bundles the whole tool chain for the language:
//!
//! * [`syntax`]: abstract syntax, the `.kdb` grammar, parser, renderer and
//!   binding structure (free/bound variables, α-renaming);
//! * [`values`]: runtime values, multisets and the pure semantic kernel
//!   (evaluation, pattern matching, well-sortedness, joins, aggregation);
//! * [`net`]: canonical forms of nets under structural congruence and the
//!   `lid` bookkeeping of located tables;
//! * [`semantics`]: the small-step transition engine, seeded runs and
//!   bounded exhaustive exploration;
//! * [`typesys`]: the static type checker;
//! * [`cli`]: the `kdb` command-line front end.

pub mod cli;
pub mod dump;
pub mod net;
pub mod semantics;
pub mod syntax;
pub mod typesys;
pub mod values;

pub use net::CanonicalNet;
pub use semantics::{enumerate_transitions, run, Trace};
pub use syntax::{parse_system, render, System};
pub use typesys::check_system;
