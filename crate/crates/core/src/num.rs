//! Multi-precision sample values.
//!
//! Every grid sample is stored as an MPFR float (or a pair of them for
//! complex samples). Negligibility is judged against `ε^m` with `ε` as small
//! as `2^-40`, so a sample's rounding error has to sit far below `2^-320`;
//! double precision cannot deliver that.

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::{AddAssignRound, Pow};
use rug::Float;

/// Real sample type.
pub type Real = Float;

/// Complex sample: a pair of MPFR floats sharing one precision.
#[derive(Clone, PartialEq)]
pub struct Cx {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:e} + {:e}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl Cx {
    pub fn new(re: Float, im: Float) -> Self {
        Cx { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Cx { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn i(prec: u32) -> Self {
        Cx::from_f64(0.0, 1.0, prec)
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Cx {
        let p = self.re.prec();
        if self.im.is_zero() {
            return if self.re.is_sign_negative() {
                Cx::new(Float::new(p), Float::with_val(p, -&self.re).sqrt())
            } else {
                Cx::new(self.re.clone().sqrt(), Float::new(p))
            };
        }
        let modulus = self.abs();
        let re = Float::with_val(p, &modulus + &self.re) / 2u32;
        let im = Float::with_val(p, &modulus - &self.re) / 2u32;
        let mut im = im.sqrt();
        if self.im.is_sign_negative() {
            im = -im;
        }
        Cx::new(re.sqrt(), im)
    }
}

/// Arithmetic shared by the real and complex sample types. All results carry
/// the precision of `self`.
pub trait Scalar: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    const IS_COMPLEX: bool;

    fn zero(prec: u32) -> Self;
    fn one(prec: u32) -> Self;
    fn from_real(x: Float) -> Self;
    fn from_f64(x: f64, prec: u32) -> Self;
    /// Converts a complex value; the real type drops the imaginary part.
    fn from_cx(z: Cx) -> Self;
    fn prec(&self) -> u32;
    fn re(&self) -> Float;
    fn im(&self) -> Float;
    fn to_cx(&self) -> Cx;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn mul_real(&self, r: &Float) -> Self;
    fn add_assign(&mut self, o: &Self);
    fn sub_assign(&mut self, o: &Self);
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self);
    /// `self -= a * b`
    fn sub_mul(&mut self, a: &Self, b: &Self);

    fn abs2(&self) -> Float;
    fn abs(&self) -> Float {
        self.abs2().sqrt()
    }
    fn is_zero(&self) -> bool;
}

impl Scalar for Float {
    const IS_COMPLEX: bool = false;

    fn zero(prec: u32) -> Self {
        Float::new(prec)
    }
    fn one(prec: u32) -> Self {
        Float::with_val(prec, 1)
    }
    fn from_real(x: Float) -> Self {
        x
    }
    fn from_f64(x: f64, prec: u32) -> Self {
        Float::with_val(prec, x)
    }
    fn from_cx(z: Cx) -> Self {
        z.re
    }
    fn prec(&self) -> u32 {
        Float::prec(self)
    }
    fn re(&self) -> Float {
        self.clone()
    }
    fn im(&self) -> Float {
        Float::new(Float::prec(self))
    }
    fn to_cx(&self) -> Cx {
        Cx::new(self.clone(), Float::new(Float::prec(self)))
    }

    fn add(&self, o: &Self) -> Self {
        Float::with_val(Float::prec(self), self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Float::with_val(Float::prec(self), self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Float::with_val(Float::prec(self), self * o)
    }
    fn div(&self, o: &Self) -> Self {
        Float::with_val(Float::prec(self), self / o)
    }
    fn neg(&self) -> Self {
        Float::with_val(Float::prec(self), -self)
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn mul_real(&self, r: &Float) -> Self {
        Scalar::mul(self, r)
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn sub_assign(&mut self, o: &Self) {
        *self -= o;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        self.add_assign_round(a * b, Round::Nearest);
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        let p = Float::prec(self);
        *self -= Float::with_val(p, a * b);
    }
    fn abs2(&self) -> Float {
        Float::with_val(Float::prec(self), self.square_ref())
    }
    fn abs(&self) -> Float {
        self.clone().abs()
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
}

impl Scalar for Cx {
    const IS_COMPLEX: bool = true;

    fn zero(prec: u32) -> Self {
        Cx::new(Float::new(prec), Float::new(prec))
    }
    fn one(prec: u32) -> Self {
        Cx::new(Float::with_val(prec, 1), Float::new(prec))
    }
    fn from_real(x: Float) -> Self {
        let p = x.prec();
        Cx::new(x, Float::new(p))
    }
    fn from_f64(x: f64, prec: u32) -> Self {
        Cx::from_f64(x, 0.0, prec)
    }
    fn from_cx(z: Cx) -> Self {
        z
    }
    fn prec(&self) -> u32 {
        self.re.prec()
    }
    fn re(&self) -> Float {
        self.re.clone()
    }
    fn im(&self) -> Float {
        self.im.clone()
    }
    fn to_cx(&self) -> Cx {
        self.clone()
    }

    fn add(&self, o: &Self) -> Self {
        let p = self.prec();
        Cx::new(Float::with_val(p, &self.re + &o.re), Float::with_val(p, &self.im + &o.im))
    }
    fn sub(&self, o: &Self) -> Self {
        let p = self.prec();
        Cx::new(Float::with_val(p, &self.re - &o.re), Float::with_val(p, &self.im - &o.im))
    }
    fn mul(&self, o: &Self) -> Self {
        let p = self.prec();
        if self.im.is_zero() && o.im.is_zero() {
            return Cx::new(Float::with_val(p, &self.re * &o.re), Float::new(p));
        }
        let mut re = Float::with_val(p, &self.re * &o.re);
        re -= Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.re * &o.im);
        im += Float::with_val(p, &self.im * &o.re);
        Cx::new(re, im)
    }
    fn div(&self, o: &Self) -> Self {
        let p = self.prec();
        if o.im.is_zero() {
            return Cx::new(Float::with_val(p, &self.re / &o.re), Float::with_val(p, &self.im / &o.re));
        }
        let den = o.abs2();
        let mut re = Float::with_val(p, &self.re * &o.re);
        re += Float::with_val(p, &self.im * &o.im);
        let mut im = Float::with_val(p, &self.im * &o.re);
        im -= Float::with_val(p, &self.re * &o.im);
        Cx::new(re / &den, im / &den)
    }
    fn neg(&self) -> Self {
        let p = self.prec();
        Cx::new(Float::with_val(p, -&self.re), Float::with_val(p, -&self.im))
    }
    fn conj(&self) -> Self {
        let p = self.prec();
        Cx::new(self.re.clone(), Float::with_val(p, -&self.im))
    }
    fn mul_real(&self, r: &Float) -> Self {
        let p = self.prec();
        Cx::new(Float::with_val(p, &self.re * r), Float::with_val(p, &self.im * r))
    }
    fn add_assign(&mut self, o: &Self) {
        self.re += &o.re;
        self.im += &o.im;
    }
    fn sub_assign(&mut self, o: &Self) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        let t = Scalar::mul(a, b);
        self.add_assign(&t);
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        let t = Scalar::mul(a, b);
        self.sub_assign(&t);
    }
    fn abs2(&self) -> Float {
        let p = self.prec();
        let mut s = Float::with_val(p, self.re.square_ref());
        s += Float::with_val(p, self.im.square_ref());
        s
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

/// `log2 |x|` as an `f64`; `-inf` for zero. Exact for powers of two.
pub fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + e as f64
}

/// `log2 |z|` for a complex sample.
pub fn log2_abs_cx(z: &Cx) -> f64 {
    if z.im.is_zero() {
        return log2_abs(&z.re);
    }
    if z.re.is_zero() {
        return log2_abs(&z.im);
    }
    0.5 * log2_abs(&z.abs2())
}

/// `2^e` at the given precision.
pub fn pow2(e: i64, prec: u32) -> Float {
    let two = Float::with_val(prec, 2);
    two.pow(e as i32)
}

/// Total order on floats for sorting; NaN compares equal to everything.
pub fn cmp_float(a: &Float, b: &Float) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Multiplies a vector by the unit phase that makes its first
/// largest-magnitude component real and positive.
pub fn fix_phase<T: Scalar>(v: &mut [T]) {
    let Some(idx) = largest_component(v) else {
        return;
    };
    let pivot = &v[idx];
    let modulus = pivot.abs();
    if modulus.is_zero() {
        return;
    }
    let phase = pivot.conj().mul_real(&Float::with_val(modulus.prec(), 1u32 / &modulus));
    for x in v.iter_mut() {
        *x = x.mul(&phase);
    }
    // Remove rounding residue from the pivot's imaginary part.
    let p = v[idx].prec();
    v[idx] = T::from_real(v[idx].re());
    debug_assert_eq!(v[idx].prec(), p);
}

/// Index of the first component with the largest modulus.
pub fn largest_component<T: Scalar>(v: &[T]) -> Option<usize> {
    let mut best: Option<(usize, Float)> = None;
    for (i, x) in v.iter().enumerate() {
        let a = x.abs2();
        match &best {
            Some((_, b)) if a <= *b => {}
            _ => best = Some((i, a)),
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_arith_matches_hand_values() {
        let a = Cx::from_f64(1.0, 2.0, 128);
        let b = Cx::from_f64(3.0, -1.0, 128);
        let p = a.mul(&b);
        assert_eq!(p.re.to_f64(), 5.0);
        assert_eq!(p.im.to_f64(), 5.0);
        let q = p.div(&b);
        assert!((q.re.to_f64() - 1.0).abs() < 1e-30);
        assert!((q.im.to_f64() - 2.0).abs() < 1e-30);
    }

    #[test]
    fn sqrt_of_negative_real_is_imaginary() {
        let z = Cx::from_f64(-4.0, 0.0, 64).sqrt();
        assert_eq!(z.re.to_f64(), 0.0);
        assert_eq!(z.im.to_f64(), 2.0);
        let w = Cx::from_f64(3.0, 4.0, 64).sqrt();
        assert!((w.re.to_f64() - 2.0).abs() < 1e-15);
        assert!((w.im.to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log2_is_exact_on_powers_of_two() {
        assert_eq!(log2_abs(&pow2(-40, 256)), -40.0);
        assert_eq!(log2_abs(&Float::new(64)), f64::NEG_INFINITY);
        let z = Cx::from_f64(0.0, 0.25, 64);
        assert_eq!(log2_abs_cx(&z), -2.0);
    }

    #[test]
    fn phase_fix_makes_pivot_real_positive() {
        let mut v = vec![Cx::from_f64(0.1, 0.0, 128), Cx::from_f64(0.0, -1.0, 128)];
        fix_phase(&mut v);
        assert!(v[1].im.is_zero());
        assert!(v[1].re.to_f64() > 0.99);
    }
}
