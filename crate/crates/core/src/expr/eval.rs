use rug::ops::Pow;
use rug::Float;

use super::ast::{BinaryOp, CmpOp, Expr, Pred, UnaryOp};
use crate::error::{GnaError, Result};
use crate::grid::Grid;
use crate::scalar::GenScalar;

/// Evaluates `e` at every grid sample at the grid's working precision.
pub fn eval(e: &Expr, grid: &Grid) -> Result<GenScalar> {
    let samples = (0..grid.len())
        .map(|i| {
            let ctx = Ctx { k: grid.k(i), eps: grid.eps(i), prec: grid.prec() };
            ctx.eval(e)
        })
        .collect::<Result<Vec<_>>>()?;
    GenScalar::from_real(grid, samples)
}

/// Parses and evaluates in one step.
pub fn eval_str(src: &str, grid: &Grid) -> Result<GenScalar> {
    eval(&super::parse(src)?, grid)
}

struct Ctx<'a> {
    k: i64,
    eps: &'a Float,
    prec: u32,
}

impl Ctx<'_> {
    fn domain(&self, what: &str) -> GnaError {
        GnaError::Domain { index: self.k, what: what.to_string() }
    }

    fn eval(&self, e: &Expr) -> Result<Float> {
        let p = self.prec;
        Ok(match e {
            Expr::Literal(s) => {
                let parsed = Float::parse(s).map_err(|_| self.domain(&format!("bad literal '{s}'")))?;
                Float::with_val(p, parsed)
            }
            Expr::Eps => self.eps.clone(),
            Expr::K => Float::with_val(p, self.k),
            Expr::Unary(op, a) => {
                let x = self.eval(a)?;
                match op {
                    UnaryOp::Neg => -x,
                    UnaryOp::Abs => x.abs(),
                    UnaryOp::Sqrt => {
                        if x.is_sign_negative() && !x.is_zero() {
                            return Err(self.domain("square root of a negative value"));
                        }
                        x.sqrt()
                    }
                    UnaryOp::Sin => x.sin(),
                    UnaryOp::Cos => x.cos(),
                    UnaryOp::Exp => x.exp(),
                    UnaryOp::Log => {
                        if x.is_zero() || x.is_sign_negative() {
                            return Err(self.domain("logarithm of a nonpositive value"));
                        }
                        x.ln()
                    }
                }
            }
            Expr::Binary(op, a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                match op {
                    BinaryOp::Add => Float::with_val(p, &x + &y),
                    BinaryOp::Sub => Float::with_val(p, &x - &y),
                    BinaryOp::Mul => Float::with_val(p, &x * &y),
                    BinaryOp::Div => {
                        if y.is_zero() {
                            return Err(GnaError::DivisionByZero { index: self.k });
                        }
                        Float::with_val(p, &x / &y)
                    }
                }
            }
            Expr::Pow(a, n) => {
                let x = self.eval(a)?;
                if *n < 0 && x.is_zero() {
                    return Err(GnaError::DivisionByZero { index: self.k });
                }
                Float::with_val(p, (&x).pow(*n))
            }
            Expr::Chi(pred) => Float::with_val(p, u8::from(self.holds(pred)?)),
        })
    }

    fn integer(&self, e: &Expr, what: &str) -> Result<Float> {
        let x = self.eval(e)?;
        if !x.is_integer() {
            return Err(self.domain(&format!("{what} of a non-integer value")));
        }
        Ok(x)
    }

    fn residue(&self, x: &Float, m: u32) -> Float {
        let q = Float::with_val(self.prec, x / m).floor();
        Float::with_val(self.prec, x - Float::with_val(self.prec, &q * m))
    }

    fn holds(&self, pred: &Pred) -> Result<bool> {
        Ok(match pred {
            Pred::Even(e) => self.residue(&self.integer(e, "even()")?, 2).is_zero(),
            Pred::Odd(e) => !self.residue(&self.integer(e, "odd()")?, 2).is_zero(),
            Pred::Mod(e, m, r) => self.residue(&self.integer(e, "mod()")?, *m) == r % m,
            Pred::Cmp(a, op, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                match op {
                    CmpOp::Lt => x < y,
                    CmpOp::Le => x <= y,
                    CmpOp::Eq => x == y,
                    CmpOp::Ge => x >= y,
                    CmpOp::Gt => x > y,
                }
            }
        })
    }
}
