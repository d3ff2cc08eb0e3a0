//! Characteristic functions of index sets and the constructions built on
//! them.

use rug::Float;

use crate::classify::{classify, ClassifierConfig};
use crate::error::{GnaError, Result};
use crate::grid::{same_grid, Grid};
use crate::num::Cx;
use crate::scalar::{GenScalar, Samples};

/// `e_S` for `S` restricted to the sampled indices.
#[derive(Clone, Debug)]
pub struct Idempotent {
    grid: Grid,
    mask: Vec<bool>,
}

impl PartialEq for Idempotent {
    fn eq(&self, o: &Self) -> bool {
        same_grid(&self.grid, &o.grid) && self.mask == o.mask
    }
}

impl Idempotent {
    pub fn new(grid: &Grid, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != grid.len() {
            return Err(GnaError::Shape(format!("mask of length {} for a grid of length {}", mask.len(), grid.len())));
        }
        Ok(Idempotent { grid: grid.clone(), mask })
    }

    /// Membership decided by the grid index `k`.
    pub fn from_index_fn(grid: &Grid, f: impl Fn(i64) -> bool) -> Self {
        let mask = (0..grid.len()).map(|i| f(grid.k(i))).collect();
        Idempotent { grid: grid.clone(), mask }
    }

    pub fn full(grid: &Grid) -> Self {
        Self::from_index_fn(grid, |_| true)
    }

    pub fn even(grid: &Grid) -> Self {
        Self::from_index_fn(grid, |k| k % 2 == 0)
    }

    pub fn odd(grid: &Grid) -> Self {
        Self::from_index_fn(grid, |k| k % 2 != 0)
    }

    /// Reads a scalar whose samples are exactly zero or one.
    pub fn from_scalar(a: &GenScalar) -> Result<Self> {
        let bit = |re: &Float, im: &Float, i: usize| -> Result<bool> {
            if !im.is_zero() {
                return Err(GnaError::Precondition(format!("sample at k = {} is not real", a.grid().k(i))));
            }
            if re.is_zero() {
                Ok(false)
            } else if *re == 1 {
                Ok(true)
            } else {
                Err(GnaError::Precondition(format!("sample at k = {} is neither 0 nor 1", a.grid().k(i))))
            }
        };
        let zero = Float::new(64);
        let mask = match a.samples() {
            Samples::Real(v) => v.iter().enumerate().map(|(i, x)| bit(x, &zero, i)).collect::<Result<Vec<_>>>(),
            Samples::Complex(v) => v.iter().enumerate().map(|(i, z)| bit(&z.re, &z.im, i)).collect(),
        }?;
        Ok(Idempotent { grid: a.grid().clone(), mask })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn complement(&self) -> Self {
        Idempotent { grid: self.grid.clone(), mask: self.mask.iter().map(|b| !b).collect() }
    }

    pub fn to_scalar(&self) -> GenScalar {
        let p = self.grid.prec();
        GenScalar::from_fn(&self.grid, |i| Float::with_val(p, u8::from(self.mask[i])))
    }

    /// `a · e_S`, computed by selection so it is exact.
    pub fn apply(&self, a: &GenScalar) -> Result<GenScalar> {
        if !same_grid(&self.grid, a.grid()) {
            return Err(GnaError::GridMismatch);
        }
        let p = self.grid.prec();
        let samples = match a.samples() {
            Samples::Real(v) => Samples::Real(
                v.iter().zip(&self.mask).map(|(x, &m)| if m { x.clone() } else { Float::new(p) }).collect(),
            ),
            Samples::Complex(v) => Samples::Complex(
                v.iter()
                    .zip(&self.mask)
                    .map(|(z, &m)| if m { z.clone() } else { Cx::new(Float::new(p), Float::new(p)) })
                    .collect(),
            ),
        };
        Ok(GenScalar::from_samples(&self.grid, samples))
    }
}

/// Finds `S` with `a · e_S` and `b · e_{S^c}` both negligible, given that
/// `a · b` is negligible. `S = {k : |a_k| <= |b_k|}`; the result is checked.
pub fn zero_divisor_split(a: &GenScalar, b: &GenScalar, cfg: &ClassifierConfig) -> Result<Idempotent> {
    let prod = classify(&a.mul(b)?, cfg);
    if !prod.classification.is_negligible() {
        return Err(GnaError::Precondition(format!("product is {}, not negligible", prod.classification)));
    }
    let aa = a.abs();
    let bb = b.abs();
    let (Some(av), Some(bv)) = (aa.real_samples(), bb.real_samples()) else {
        unreachable!("abs is real");
    };
    let mask = av.iter().zip(bv).map(|(x, y)| x <= y).collect();
    let s = Idempotent { grid: a.grid().clone(), mask };

    let left = classify(&s.apply(a)?, cfg);
    let right = classify(&s.complement().apply(b)?, cfg);
    if !left.classification.is_negligible() || !right.classification.is_negligible() {
        return Err(GnaError::SplitFailure(format!(
            "a·e_S is {}, b·e_S^c is {}",
            left.classification, right.classification
        )));
    }
    Ok(s)
}

/// `Σ values_i · e_{S_i}` for a partition `S_1, …, S_N` of the grid.
pub fn interleave(values: &[GenScalar], partition: &[Idempotent]) -> Result<GenScalar> {
    if values.len() != partition.len() || values.is_empty() {
        return Err(GnaError::Shape(format!("{} values for {} partition masks", values.len(), partition.len())));
    }
    let grid = values[0].grid().clone();
    for v in values {
        if !same_grid(&grid, v.grid()) {
            return Err(GnaError::GridMismatch);
        }
    }
    for m in partition {
        if !same_grid(&grid, m.grid()) {
            return Err(GnaError::GridMismatch);
        }
    }
    let mut owner = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let hits: Vec<usize> = (0..partition.len()).filter(|&j| partition[j].mask[i]).collect();
        if hits.len() != 1 {
            return Err(GnaError::Shape(format!(
                "masks do not partition the grid: k = {} lies in {} masks",
                grid.k(i),
                hits.len()
            )));
        }
        owner.push(hits[0]);
    }
    let any_complex = values.iter().any(|v| matches!(v.samples(), Samples::Complex(_)));
    let out = if any_complex {
        GenScalar::from_fn_cx(&grid, |i| values[owner[i]].sample_cx(i))
    } else {
        GenScalar::from_fn(&grid, |i| values[owner[i]].real_samples().expect("real")[i].clone())
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, GridKind};

    fn grid() -> Grid {
        make_grid(GridKind::Dyadic, 4, 40).unwrap()
    }

    #[test]
    fn complement_sums_to_one_and_squares_are_fixed() {
        let g = grid();
        let e = Idempotent::even(&g).to_scalar();
        let f = Idempotent::even(&g).complement().to_scalar();
        assert!(e.add(&f).unwrap().same_samples(&GenScalar::one(&g)));
        assert!(e.mul(&e).unwrap().same_samples(&e));
    }

    #[test]
    fn split_of_disjoint_supports_is_odd_mask() {
        let g = grid();
        let cfg = ClassifierConfig::default();
        let a = Idempotent::even(&g).to_scalar();
        let b = GenScalar::one(&g).sub(&a).unwrap();
        let s = zero_divisor_split(&a, &b, &cfg).unwrap();
        assert_eq!(s, Idempotent::odd(&g));
    }

    #[test]
    fn split_with_zero_first_factor_is_everything() {
        let g = grid();
        let cfg = ClassifierConfig::default();
        let s = zero_divisor_split(&GenScalar::zero(&g), &GenScalar::eps(&g), &cfg).unwrap();
        assert_eq!(s, Idempotent::full(&g));
    }

    #[test]
    fn split_requires_negligible_product() {
        let g = grid();
        let cfg = ClassifierConfig::default();
        let one = GenScalar::one(&g);
        assert!(matches!(zero_divisor_split(&one, &one, &cfg), Err(GnaError::Precondition(_))));
    }

    #[test]
    fn interleave_alternates() {
        let g = grid();
        let v = [GenScalar::zero(&g), GenScalar::one(&g)];
        let p = [Idempotent::even(&g), Idempotent::odd(&g)];
        let x = interleave(&v, &p).unwrap();
        assert!(x.same_samples(&Idempotent::odd(&g).to_scalar()));
        let bad = [Idempotent::even(&g), Idempotent::even(&g)];
        assert!(interleave(&v, &bad).is_err());
    }

    #[test]
    fn from_scalar_rejects_non_binary() {
        let g = grid();
        assert!(Idempotent::from_scalar(&GenScalar::constant(&g, 0.5)).is_err());
        let e = Idempotent::from_scalar(&Idempotent::odd(&g).to_scalar()).unwrap();
        assert_eq!(e, Idempotent::odd(&g));
    }
}
