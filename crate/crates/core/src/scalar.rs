//! Generalized scalars: nets sampled on a grid.

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, ClassifierConfig};
use crate::error::{GnaError, Result};
use crate::grid::{same_grid, Grid};
use crate::num::{Cx, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarKind {
    Real,
    Complex,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Samples {
    Real(Vec<Float>),
    Complex(Vec<Cx>),
}

/// A net representative `(r_ε)` sampled on a grid.
#[derive(Clone, Debug)]
pub struct GenScalar {
    grid: Grid,
    samples: Samples,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Conj,
    Abs,
    Sqrt,
    PowInt(i32),
}

/// Applies `op` samplewise. Binary operations take `b`; division and
/// negative powers require a strictly nonzero operand.
pub fn scalar_arith(op: ScalarOp, a: &GenScalar, b: Option<&GenScalar>, cfg: &ClassifierConfig) -> Result<GenScalar> {
    let rhs = || b.ok_or_else(|| GnaError::Shape(format!("{op:?} needs a second operand")));
    match op {
        ScalarOp::Add => a.add(rhs()?),
        ScalarOp::Sub => a.sub(rhs()?),
        ScalarOp::Mul => a.mul(rhs()?),
        ScalarOp::Div => a.div(rhs()?, cfg),
        ScalarOp::Neg => Ok(a.neg()),
        ScalarOp::Conj => Ok(a.conj()),
        ScalarOp::Abs => Ok(a.abs()),
        ScalarOp::Sqrt => a.sqrt(),
        ScalarOp::PowInt(n) => a.pow_int(n, cfg),
    }
}

impl GenScalar {
    pub fn from_real(grid: &Grid, samples: Vec<Float>) -> Result<Self> {
        check_len(grid, samples.len())?;
        let p = grid.prec();
        let samples = samples.into_iter().map(|x| with_prec(x, p)).collect();
        Ok(GenScalar { grid: grid.clone(), samples: Samples::Real(samples) })
    }

    pub fn from_complex(grid: &Grid, samples: Vec<Cx>) -> Result<Self> {
        check_len(grid, samples.len())?;
        let p = grid.prec();
        let samples = samples.into_iter().map(|z| Cx::new(with_prec(z.re, p), with_prec(z.im, p))).collect();
        Ok(GenScalar { grid: grid.clone(), samples: Samples::Complex(samples) })
    }

    /// Internal constructor; samples must already be at grid precision.
    pub(crate) fn from_samples(grid: &Grid, samples: Samples) -> Self {
        GenScalar { grid: grid.clone(), samples }
    }

    pub fn from_fn(grid: &Grid, mut f: impl FnMut(usize) -> Float) -> Self {
        let samples = (0..grid.len()).map(|i| with_prec(f(i), grid.prec())).collect();
        GenScalar { grid: grid.clone(), samples: Samples::Real(samples) }
    }

    pub fn from_fn_cx(grid: &Grid, mut f: impl FnMut(usize) -> Cx) -> Self {
        let p = grid.prec();
        let samples = (0..grid.len())
            .map(|i| {
                let z = f(i);
                Cx::new(with_prec(z.re, p), with_prec(z.im, p))
            })
            .collect();
        GenScalar { grid: grid.clone(), samples: Samples::Complex(samples) }
    }

    pub fn constant(grid: &Grid, x: f64) -> Self {
        Self::from_fn(grid, |_| Float::with_val(grid.prec(), x))
    }

    pub fn constant_cx(grid: &Grid, re: f64, im: f64) -> Self {
        Self::from_fn_cx(grid, |_| Cx::from_f64(re, im, grid.prec()))
    }

    pub fn zero(grid: &Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn one(grid: &Grid) -> Self {
        Self::constant(grid, 1.0)
    }

    /// The net `ε` itself.
    pub fn eps(grid: &Grid) -> Self {
        Self::from_fn(grid, |i| grid.eps(i).clone())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn kind(&self) -> ScalarKind {
        match self.samples {
            Samples::Real(_) => ScalarKind::Real,
            Samples::Complex(_) => ScalarKind::Complex,
        }
    }

    pub fn samples(&self) -> &Samples {
        &self.samples
    }

    pub fn real_samples(&self) -> Option<&[Float]> {
        match &self.samples {
            Samples::Real(v) => Some(v),
            Samples::Complex(_) => None,
        }
    }

    pub fn sample_cx(&self, i: usize) -> Cx {
        match &self.samples {
            Samples::Real(v) => v[i].to_cx(),
            Samples::Complex(v) => v[i].clone(),
        }
    }

    pub fn to_complex_samples(&self) -> Vec<Cx> {
        match &self.samples {
            Samples::Real(v) => v.iter().map(|x| x.to_cx()).collect(),
            Samples::Complex(v) => v.clone(),
        }
    }

    /// Same net with complex storage.
    pub fn into_complex(self) -> Self {
        match self.samples {
            Samples::Real(v) => {
                GenScalar { grid: self.grid, samples: Samples::Complex(v.into_iter().map(Cx::from_real).collect()) }
            }
            Samples::Complex(_) => self,
        }
    }

    /// Real parts as `f64`, for reporting.
    pub fn to_f64(&self) -> Vec<f64> {
        match &self.samples {
            Samples::Real(v) => v.iter().map(|x| x.to_f64()).collect(),
            Samples::Complex(v) => v.iter().map(|z| z.re.to_f64()).collect(),
        }
    }

    pub fn to_f64_pairs(&self) -> Vec<(f64, f64)> {
        match &self.samples {
            Samples::Real(v) => v.iter().map(|x| (x.to_f64(), 0.0)).collect(),
            Samples::Complex(v) => v.iter().map(|z| (z.re.to_f64(), z.im.to_f64())).collect(),
        }
    }

    pub fn re(&self) -> GenScalar {
        match &self.samples {
            Samples::Real(_) => self.clone(),
            Samples::Complex(v) => {
                GenScalar::from_samples(&self.grid, Samples::Real(v.iter().map(|z| z.re.clone()).collect()))
            }
        }
    }

    pub fn im(&self) -> GenScalar {
        match &self.samples {
            Samples::Real(_) => GenScalar::zero(&self.grid),
            Samples::Complex(v) => {
                GenScalar::from_samples(&self.grid, Samples::Real(v.iter().map(|z| z.im.clone()).collect()))
            }
        }
    }

    /// Sample-for-sample equality, ignoring storage kind when the imaginary
    /// parts are zero.
    pub fn same_samples(&self, o: &GenScalar) -> bool {
        same_grid(&self.grid, &o.grid)
            && match (&self.samples, &o.samples) {
                (Samples::Real(a), Samples::Real(b)) => a == b,
                _ => self.to_complex_samples() == o.to_complex_samples(),
            }
    }

    fn check_grid(&self, o: &GenScalar) -> Result<()> {
        if same_grid(&self.grid, &o.grid) {
            Ok(())
        } else {
            Err(GnaError::GridMismatch)
        }
    }

    fn zip(&self, o: &GenScalar, rf: impl Fn(&Float, &Float) -> Float, cf: impl Fn(&Cx, &Cx) -> Cx) -> Result<Self> {
        self.check_grid(o)?;
        let samples = match (&self.samples, &o.samples) {
            (Samples::Real(a), Samples::Real(b)) => Samples::Real(a.iter().zip(b).map(|(x, y)| rf(x, y)).collect()),
            _ => {
                let a = self.to_complex_samples();
                let b = o.to_complex_samples();
                Samples::Complex(a.iter().zip(&b).map(|(x, y)| cf(x, y)).collect())
            }
        };
        Ok(GenScalar { grid: self.grid.clone(), samples })
    }

    fn map(&self, rf: impl Fn(&Float) -> Float, cf: impl Fn(&Cx) -> Cx) -> Self {
        let samples = match &self.samples {
            Samples::Real(v) => Samples::Real(v.iter().map(rf).collect()),
            Samples::Complex(v) => Samples::Complex(v.iter().map(cf).collect()),
        };
        GenScalar { grid: self.grid.clone(), samples }
    }

    pub fn add(&self, o: &GenScalar) -> Result<Self> {
        self.zip(o, Scalar::add, Scalar::add)
    }

    pub fn sub(&self, o: &GenScalar) -> Result<Self> {
        self.zip(o, Scalar::sub, Scalar::sub)
    }

    pub fn mul(&self, o: &GenScalar) -> Result<Self> {
        self.zip(o, Scalar::mul, Scalar::mul)
    }

    pub fn neg(&self) -> Self {
        self.map(Scalar::neg, Scalar::neg)
    }

    pub fn conj(&self) -> Self {
        self.map(Scalar::conj, Scalar::conj)
    }

    pub fn scale(&self, s: f64) -> Self {
        let s = Float::with_val(self.grid.prec(), s);
        self.map(|x| x.mul_real(&s), |z| z.mul_real(&s))
    }

    /// Samplewise modulus; always real.
    pub fn abs(&self) -> Self {
        match &self.samples {
            Samples::Real(v) => GenScalar::from_samples(&self.grid, Samples::Real(v.iter().map(Scalar::abs).collect())),
            Samples::Complex(v) => {
                GenScalar::from_samples(&self.grid, Samples::Real(v.iter().map(Scalar::abs).collect()))
            }
        }
    }

    /// Real input needs every sample nonnegative; complex input takes the
    /// principal root.
    pub fn sqrt(&self) -> Result<Self> {
        match &self.samples {
            Samples::Real(v) => {
                if let Some(i) = v.iter().position(|x| x.is_sign_negative() && !x.is_zero()) {
                    return Err(GnaError::Domain {
                        index: self.grid.k(i),
                        what: "square root of a negative sample".into(),
                    });
                }
                Ok(self.map(|x| x.clone().sqrt(), |z| z.sqrt()))
            }
            Samples::Complex(_) => Ok(self.map(|x| x.clone().sqrt(), |z| z.sqrt())),
        }
    }

    /// Integer power; a negative exponent inverts first.
    pub fn pow_int(&self, n: i32, cfg: &ClassifierConfig) -> Result<Self> {
        let base = if n < 0 { self.invert(cfg)? } else { self.clone() };
        let mut acc = GenScalar::one(&self.grid);
        if base.kind() == ScalarKind::Complex {
            acc = acc.into_complex();
        }
        let mut e = n.unsigned_abs();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Pointwise reciprocal of a strictly nonzero scalar. Exact zero samples
    /// outside the tail map to zero.
    pub fn invert(&self, cfg: &ClassifierConfig) -> Result<Self> {
        let report = classify(self, cfg);
        if !report.classification.is_strictly_nonzero() {
            return Err(GnaError::NonInvertibleScalar { report: Box::new(report) });
        }
        Ok(self.recip_unchecked())
    }

    pub(crate) fn recip_unchecked(&self) -> Self {
        let p = self.grid.prec();
        self.map(
            |x| if x.is_zero() { Float::new(p) } else { Float::with_val(p, x.recip_ref()) },
            |z| if z.is_zero() { Cx::zero(p) } else { Cx::one(p).div(z) },
        )
    }

    pub fn div(&self, o: &GenScalar, cfg: &ClassifierConfig) -> Result<Self> {
        self.check_grid(o)?;
        self.mul(&o.invert(cfg)?)
    }
}

fn check_len(grid: &Grid, n: usize) -> Result<()> {
    if n != grid.len() {
        return Err(GnaError::Shape(format!("{n} samples for a grid of length {}", grid.len())));
    }
    Ok(())
}

fn with_prec(mut x: Float, p: u32) -> Float {
    if x.prec() != p {
        x.set_prec(p);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Classification;
    use crate::grid::{make_grid, GridKind};

    fn grid() -> Grid {
        make_grid(GridKind::Dyadic, 4, 40).unwrap()
    }

    fn alternating(g: &Grid) -> GenScalar {
        GenScalar::from_fn(g, |i| Float::with_val(g.prec(), if g.k(i) % 2 == 0 { 1 } else { 0 }))
    }

    #[test]
    fn reciprocal_of_eps_has_slope_minus_one() {
        let g = grid();
        let cfg = ClassifierConfig::default();
        let inv = scalar_arith(ScalarOp::Div, &GenScalar::one(&g), Some(&GenScalar::eps(&g)), &cfg).unwrap();
        let r = classify(&inv, &cfg);
        assert!((r.slope.unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(r.moderate_exponent, Some(1));
        assert_eq!(inv.to_f64()[0], 16.0);
    }

    #[test]
    fn idempotent_times_complement_vanishes() {
        let g = grid();
        let c = alternating(&g);
        let one_minus = GenScalar::one(&g).sub(&c).unwrap();
        assert!(c.mul(&one_minus).unwrap().same_samples(&GenScalar::zero(&g)));
        assert!(c.add(&one_minus).unwrap().same_samples(&GenScalar::one(&g)));
    }

    #[test]
    fn invert_examples() {
        let g = grid();
        let cfg = ClassifierConfig::default();
        let half = GenScalar::constant(&g, 2.0).invert(&cfg).unwrap();
        assert!(half.same_samples(&GenScalar::constant(&g, 0.5)));
        let err = alternating(&g).invert(&cfg).unwrap_err();
        match err {
            GnaError::NonInvertibleScalar { report } => {
                assert_eq!(report.classification, Classification::ZeroDivisorLike)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sqrt_of_negative_names_the_index() {
        let g = grid();
        let e = GenScalar::constant(&g, -1.0).sqrt().unwrap_err();
        assert!(matches!(e, GnaError::Domain { index: 4, .. }));
        let z = GenScalar::constant(&g, -4.0).into_complex().sqrt().unwrap();
        assert_eq!(z.to_f64_pairs()[3], (0.0, 2.0));
    }

    #[test]
    fn grids_must_match() {
        let a = GenScalar::one(&grid());
        let other = make_grid(GridKind::Dyadic, 4, 30).unwrap();
        assert!(matches!(a.add(&GenScalar::one(&other)), Err(GnaError::GridMismatch)));
    }

    #[test]
    fn negative_power_inverts() {
        let g = grid();
        let cfg = ClassifierConfig::default();
        let e = GenScalar::eps(&g);
        let p = e.pow_int(-2, &cfg).unwrap().mul(&e.pow_int(2, &cfg).unwrap()).unwrap();
        assert!(p.same_samples(&GenScalar::one(&g)));
    }
}
