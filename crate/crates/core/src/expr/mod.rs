//! Textual net representatives: a small expression language over `eps` and
//! the grid index `k`.

mod ast;
mod eval;
mod parser;

pub use ast::{BinaryOp, CmpOp, Expr, Pred, UnaryOp};
pub use eval::{eval, eval_str};
pub use parser::{parse, ParseError};
