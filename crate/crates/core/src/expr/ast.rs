use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Numeric literal, kept as source text so it can be read at any precision.
    Literal(String),
    Eps,
    /// The grid index `k`.
    K,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Chi(Box<Pred>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Abs,
    Sqrt,
    Sin,
    Cos,
    Exp,
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pred {
    Even(Expr),
    Odd(Expr),
    /// `x ≡ r (mod m)`
    Mod(Expr, u32, u32),
    Cmp(Expr, CmpOp, Expr),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl UnaryOp {
    pub const FUNCTIONS: [UnaryOp; 6] =
        [UnaryOp::Abs, UnaryOp::Sqrt, UnaryOp::Sin, UnaryOp::Cos, UnaryOp::Exp, UnaryOp::Log];

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Abs => "abs",
            UnaryOp::Sqrt => "sqrt",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::FUNCTIONS.into_iter().find(|f| f.name() == s)
    }
}

impl BinaryOp {
    fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
        }
    }

    fn prec(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
        }
    }
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Expr {
    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn unary(op: UnaryOp, a: Expr) -> Expr {
        Expr::Unary(op, Box::new(a))
    }

    pub fn num(text: &str) -> Expr {
        Expr::Literal(text.to_string())
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.prec(),
            Expr::Unary(UnaryOp::Neg, _) => PREC_NEG,
            Expr::Pow(..) => PREC_POW,
            _ => PREC_ATOM,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Literal(s) => write!(f, "{s}"),
            Expr::Eps => write!(f, "eps"),
            Expr::K => write!(f, "k"),
            Expr::Unary(UnaryOp::Neg, a) => {
                write!(f, "-")?;
                a.write_at(f, PREC_NEG)
            }
            Expr::Unary(op, a) => write!(f, "{}({a})", op.name()),
            Expr::Binary(op, a, b) => {
                a.write_at(f, op.prec())?;
                write!(f, " {} ", op.symbol())?;
                b.write_at(f, op.prec() + 1)
            }
            Expr::Pow(a, n) => {
                a.write_at(f, PREC_ATOM)?;
                write!(f, "^{n}")
            }
            Expr::Chi(p) => write!(f, "chi({p})"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Display for Pred {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pred::Even(e) => write!(f, "even({e})"),
            Pred::Odd(e) => write!(f, "odd({e})"),
            Pred::Mod(e, m, r) => write!(f, "mod({e}, {m}, {r})"),
            Pred::Cmp(a, op, b) => write!(f, "{a} {} {b}", op.symbol()),
        }
    }
}
