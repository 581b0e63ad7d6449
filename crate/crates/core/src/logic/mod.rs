//! Terms, formulas, signatures and their concrete syntax.

mod ast;
mod parser;
mod printer;
pub mod random;
mod signature;
mod validate;

pub use ast::{Binder, BinderKind, Term, Wff};
pub use parser::{parse_all, parse_formula, ParseError};
pub use printer::format_formula;
pub use signature::{Signature, SignatureError, SymbolKind};
pub use validate::{validate_wff, Finding, ValidationReport};
