use rug::Float;

use crate::classify::{classify, AsymptoticReport, ClassifierConfig};
use crate::dense::Mat;
use crate::error::{GnaError, Result};
use crate::grid::{same_grid, Grid};
use crate::num::{Cx, Scalar};
use crate::scalar::{GenScalar, Samples, ScalarKind};

/// Per-sample dense matrices, all of one kind.
#[derive(Clone, Debug, PartialEq)]
pub enum MatSamples {
    Real(Vec<Mat<Float>>),
    Complex(Vec<Mat<Cx>>),
}

/// Matrix with generalized entries, stored sample-major.
#[derive(Clone, Debug)]
pub struct GenMatrix {
    grid: Grid,
    rows: usize,
    cols: usize,
    samples: MatSamples,
}

/// Column vector with generalized entries.
#[derive(Clone, Debug)]
pub struct GenVector(GenMatrix);

/// Applies `f` to each sample, reusing the previous result when a sample
/// repeats its predecessor exactly (constant nets are common).
pub(crate) fn map_cached<T: PartialEq, U: Clone>(v: &[T], mut f: impl FnMut(&T) -> U) -> Vec<U> {
    let mut out: Vec<U> = Vec::with_capacity(v.len());
    for (i, x) in v.iter().enumerate() {
        if i > 0 && v[i - 1] == *x {
            let prev = out[i - 1].clone();
            out.push(prev);
        } else {
            out.push(f(x));
        }
    }
    out
}

impl GenMatrix {
    pub(crate) fn from_samples(grid: &Grid, rows: usize, cols: usize, samples: MatSamples) -> Self {
        GenMatrix { grid: grid.clone(), rows, cols, samples }
    }

    pub fn from_real_samples(grid: &Grid, samples: Vec<Mat<Float>>) -> Result<Self> {
        let (rows, cols) = sample_shape(grid, &samples)?;
        Ok(GenMatrix { grid: grid.clone(), rows, cols, samples: MatSamples::Real(samples) })
    }

    pub fn from_complex_samples(grid: &Grid, samples: Vec<Mat<Cx>>) -> Result<Self> {
        let (rows, cols) = sample_shape(grid, &samples)?;
        Ok(GenMatrix { grid: grid.clone(), rows, cols, samples: MatSamples::Complex(samples) })
    }

    /// Builds a matrix from row-major generalized entries. The result is
    /// complex if any entry is.
    pub fn from_entries(grid: &Grid, rows: usize, cols: usize, entries: &[GenScalar]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(GnaError::Shape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        for e in entries {
            if !same_grid(grid, e.grid()) {
                return Err(GnaError::GridMismatch);
            }
        }
        let complex = entries.iter().any(|e| e.kind() == ScalarKind::Complex);
        let n = grid.len();
        let samples = if complex {
            MatSamples::Complex(
                (0..n).map(|s| Mat::from_fn(rows, cols, |i, j| entries[i * cols + j].sample_cx(s))).collect(),
            )
        } else {
            MatSamples::Real(
                (0..n)
                    .map(|s| {
                        Mat::from_fn(rows, cols, |i, j| entries[i * cols + j].real_samples().expect("real")[s].clone())
                    })
                    .collect(),
            )
        };
        Ok(GenMatrix { grid: grid.clone(), rows, cols, samples })
    }

    pub fn from_rows(grid: &Grid, rows: &[Vec<GenScalar>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(GnaError::Shape("rows have different lengths".into()));
        }
        let flat: Vec<GenScalar> = rows.iter().flatten().cloned().collect();
        Self::from_entries(grid, r, c, &flat)
    }

    /// Constant real matrix from row-major values.
    pub fn from_f64(grid: &Grid, rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(GnaError::Shape(format!("{} values for a {rows}x{cols} matrix", values.len())));
        }
        let p = grid.prec();
        let m = Mat::from_fn(rows, cols, |i, j| Float::with_val(p, values[i * cols + j]));
        Ok(GenMatrix { grid: grid.clone(), rows, cols, samples: MatSamples::Real(vec![m; grid.len()]) })
    }

    pub fn from_fn(
        grid: &Grid,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GenScalar,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::from_entries(grid, rows, cols, &entries)
    }

    pub fn identity(grid: &Grid, n: usize) -> Self {
        GenMatrix {
            grid: grid.clone(),
            rows: n,
            cols: n,
            samples: MatSamples::Real(vec![Mat::identity(n, grid.prec()); grid.len()]),
        }
    }

    pub fn zeros(grid: &Grid, rows: usize, cols: usize) -> Self {
        GenMatrix {
            grid: grid.clone(),
            rows,
            cols,
            samples: MatSamples::Real(vec![Mat::zeros(rows, cols, grid.prec()); grid.len()]),
        }
    }

    pub fn diag(grid: &Grid, values: &[GenScalar]) -> Result<Self> {
        let n = values.len();
        let zero = GenScalar::zero(grid);
        Self::from_fn(grid, n, n, |i, j| if i == j { values[i].clone() } else { zero.clone() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(grid: &Grid, rows: usize, cols: &[GenVector]) -> Result<Self> {
        for c in cols {
            if c.len() != rows {
                return Err(GnaError::Shape(format!("column of length {} in a matrix with {rows} rows", c.len())));
            }
            if !same_grid(grid, c.grid()) {
                return Err(GnaError::GridMismatch);
            }
        }
        let complex = cols.iter().any(|c| c.kind() == ScalarKind::Complex);
        let n = grid.len();
        let samples = if complex {
            let cs: Vec<Vec<Vec<Cx>>> = cols.iter().map(|c| c.complex_samples()).collect();
            MatSamples::Complex((0..n).map(|s| Mat::from_fn(rows, cols.len(), |i, j| cs[j][s][i].clone())).collect())
        } else {
            let cs: Vec<&Vec<Mat<Float>>> = cols
                .iter()
                .map(|c| match &c.0.samples {
                    MatSamples::Real(v) => v,
                    MatSamples::Complex(_) => unreachable!(),
                })
                .collect();
            MatSamples::Real((0..n).map(|s| Mat::from_fn(rows, cols.len(), |i, j| cs[j][s][(i, 0)].clone())).collect())
        };
        Ok(GenMatrix { grid: grid.clone(), rows, cols: cols.len(), samples })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn kind(&self) -> ScalarKind {
        match self.samples {
            MatSamples::Real(_) => ScalarKind::Real,
            MatSamples::Complex(_) => ScalarKind::Complex,
        }
    }

    pub fn samples(&self) -> &MatSamples {
        &self.samples
    }

    pub fn real_samples(&self) -> Option<&[Mat<Float>]> {
        match &self.samples {
            MatSamples::Real(v) => Some(v),
            MatSamples::Complex(_) => None,
        }
    }

    /// Samples as complex matrices, converting if needed.
    pub fn complex_samples(&self) -> Vec<Mat<Cx>> {
        match &self.samples {
            MatSamples::Real(v) => v.iter().map(|m| m.map(Scalar::to_cx)).collect(),
            MatSamples::Complex(v) => v.clone(),
        }
    }

    pub fn into_complex(self) -> Self {
        match self.samples {
            MatSamples::Real(_) => {
                let samples = MatSamples::Complex(self.complex_samples());
                GenMatrix { samples, ..self }
            }
            MatSamples::Complex(_) => self,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> GenScalar {
        let samples = match &self.samples {
            MatSamples::Real(v) => Samples::Real(v.iter().map(|m| m[(i, j)].clone()).collect()),
            MatSamples::Complex(v) => Samples::Complex(v.iter().map(|m| m[(i, j)].clone()).collect()),
        };
        GenScalar::from_samples(&self.grid, samples)
    }

    pub fn column(&self, j: usize) -> GenVector {
        let samples = match &self.samples {
            MatSamples::Real(v) => {
                MatSamples::Real(v.iter().map(|m| Mat::from_fn(self.rows, 1, |i, _| m[(i, j)].clone())).collect())
            }
            MatSamples::Complex(v) => {
                MatSamples::Complex(v.iter().map(|m| Mat::from_fn(self.rows, 1, |i, _| m[(i, j)].clone())).collect())
            }
        };
        GenVector(GenMatrix { grid: self.grid.clone(), rows: self.rows, cols: 1, samples })
    }

    pub fn columns(&self) -> Vec<GenVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Entries as `f64` (real parts), indexed `[sample][row][col]`.
    pub fn to_f64(&self) -> Vec<Vec<Vec<f64>>> {
        let conv = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
            (0..self.rows).map(|i| (0..self.cols).map(|j| f(i, j)).collect()).collect()
        };
        match &self.samples {
            MatSamples::Real(v) => v.iter().map(|m| conv(&|i, j| m[(i, j)].to_f64())).collect(),
            MatSamples::Complex(v) => v.iter().map(|m| conv(&|i, j| m[(i, j)].re.to_f64())).collect(),
        }
    }

    /// Imaginary parts as `f64`, zero for real matrices.
    pub fn to_f64_im(&self) -> Vec<Vec<Vec<f64>>> {
        match &self.samples {
            MatSamples::Real(v) => v.iter().map(|_| vec![vec![0.0; self.cols]; self.rows]).collect(),
            MatSamples::Complex(v) => v
                .iter()
                .map(|m| (0..self.rows).map(|i| (0..self.cols).map(|j| m[(i, j)].im.to_f64()).collect()).collect())
                .collect(),
        }
    }

    pub(crate) fn map(
        &self,
        rows: usize,
        cols: usize,
        fr: impl Fn(&Mat<Float>) -> Mat<Float>,
        fc: impl Fn(&Mat<Cx>) -> Mat<Cx>,
    ) -> Self {
        let samples = match &self.samples {
            MatSamples::Real(v) => MatSamples::Real(v.iter().map(fr).collect()),
            MatSamples::Complex(v) => MatSamples::Complex(v.iter().map(fc).collect()),
        };
        GenMatrix { grid: self.grid.clone(), rows, cols, samples }
    }

    pub(crate) fn zip(
        &self,
        o: &GenMatrix,
        rows: usize,
        cols: usize,
        fr: impl Fn(&Mat<Float>, &Mat<Float>) -> Mat<Float>,
        fc: impl Fn(&Mat<Cx>, &Mat<Cx>) -> Mat<Cx>,
    ) -> Result<Self> {
        if !same_grid(&self.grid, &o.grid) {
            return Err(GnaError::GridMismatch);
        }
        let samples = match (&self.samples, &o.samples) {
            (MatSamples::Real(a), MatSamples::Real(b)) => {
                MatSamples::Real(a.iter().zip(b).map(|(x, y)| fr(x, y)).collect())
            }
            _ => {
                let a = self.complex_samples();
                let b = o.complex_samples();
                MatSamples::Complex(a.iter().zip(&b).map(|(x, y)| fc(x, y)).collect())
            }
        };
        Ok(GenMatrix { grid: self.grid.clone(), rows, cols, samples })
    }

    pub fn transpose(&self) -> Self {
        self.map(self.cols, self.rows, Mat::transpose, Mat::transpose)
    }

    pub fn conj_transpose(&self) -> Self {
        self.map(self.cols, self.rows, Mat::adjoint, Mat::adjoint)
    }

    pub fn conj(&self) -> Self {
        self.map(self.rows, self.cols, Mat::clone, |m| m.map(Scalar::conj))
    }

    pub fn matmul(&self, o: &GenMatrix) -> Result<Self> {
        if self.cols != o.rows {
            return Err(GnaError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        self.zip(o, self.rows, o.cols, Mat::matmul, Mat::matmul)
    }

    pub fn matvec(&self, v: &GenVector) -> Result<GenVector> {
        self.matmul(&v.0).map(GenVector)
    }

    fn same_shape(&self, o: &GenMatrix) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(GnaError::Shape(format!("{}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(())
    }

    pub fn add(&self, o: &GenMatrix) -> Result<Self> {
        self.same_shape(o)?;
        self.zip(o, self.rows, self.cols, Mat::add, Mat::add)
    }

    pub fn sub(&self, o: &GenMatrix) -> Result<Self> {
        self.same_shape(o)?;
        self.zip(o, self.rows, self.cols, Mat::sub, Mat::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(self.rows, self.cols, |m| m.map(Scalar::neg), |m| m.map(Scalar::neg))
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        let s = Float::with_val(self.grid.prec(), s);
        self.map(self.rows, self.cols, |m| m.scale_real(&s), |m| m.scale_real(&s))
    }

    /// Multiplies every entry by the generalized scalar `s`.
    pub fn scale(&self, s: &GenScalar) -> Result<Self> {
        if !same_grid(&self.grid, s.grid()) {
            return Err(GnaError::GridMismatch);
        }
        let samples = match (&self.samples, s.samples()) {
            (MatSamples::Real(v), Samples::Real(x)) => {
                MatSamples::Real(v.iter().zip(x).map(|(m, x)| m.scale(x)).collect())
            }
            _ => {
                let x = s.to_complex_samples();
                MatSamples::Complex(self.complex_samples().iter().zip(&x).map(|(m, x)| m.scale(x)).collect())
            }
        };
        Ok(GenMatrix { grid: self.grid.clone(), rows: self.rows, cols: self.cols, samples })
    }

    /// `A - λ I`
    pub fn shift(&self, lambda: &GenScalar) -> Result<Self> {
        if !self.is_square() {
            return Err(GnaError::Shape("shift of a non-square matrix".into()));
        }
        let li = GenMatrix::identity(&self.grid, self.rows).scale(lambda)?;
        self.sub(&li)
    }

    pub fn re(&self) -> Self {
        match &self.samples {
            MatSamples::Complex(v) => GenMatrix {
                samples: MatSamples::Real(v.iter().map(|m| m.map(|z| z.re.clone())).collect()),
                ..self.clone()
            },
            MatSamples::Real(_) => self.clone(),
        }
    }

    /// Per-sample largest entry modulus, as a real scalar.
    pub fn max_abs(&self) -> GenScalar {
        let p = self.grid.prec();
        let pick = |vals: Vec<Float>| vals.into_iter().fold(Float::new(p), |a, b| if b > a { b } else { a });
        let samples = match &self.samples {
            MatSamples::Real(v) => v.iter().map(|m| pick(m.data().iter().map(|x| x.clone().abs()).collect())).collect(),
            MatSamples::Complex(v) => v.iter().map(|m| pick(m.data().iter().map(|z| z.abs()).collect())).collect(),
        };
        GenScalar::from_samples(&self.grid, Samples::Real(samples))
    }

    /// Classification of the largest entry; negligible exactly when every
    /// entry is.
    pub fn negligibility(&self, cfg: &ClassifierConfig) -> AsymptoticReport {
        classify(&self.max_abs(), cfg)
    }

    pub fn is_negligible(&self, cfg: &ClassifierConfig) -> bool {
        self.negligibility(cfg).classification.is_negligible()
    }

    /// `self - o` is negligible entrywise.
    pub fn approx_eq(&self, o: &GenMatrix, cfg: &ClassifierConfig) -> Result<bool> {
        Ok(self.sub(o)?.is_negligible(cfg))
    }

    /// Exact per-sample equality.
    pub fn same_samples(&self, o: &GenMatrix) -> bool {
        if !same_grid(&self.grid, &o.grid) || self.rows != o.rows || self.cols != o.cols {
            return false;
        }
        match (&self.samples, &o.samples) {
            (MatSamples::Real(a), MatSamples::Real(b)) => a == b,
            _ => self.complex_samples() == o.complex_samples(),
        }
    }

    /// Stacks matrices side by side.
    pub fn hstack(blocks: &[GenMatrix]) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| GnaError::Shape("empty block list".into()))?;
        let rows = first.rows;
        let cols: Vec<GenVector> = blocks.iter().flat_map(|b| b.columns()).collect();
        GenMatrix::from_columns(&first.grid, rows, &cols)
    }
}

fn sample_shape<T>(grid: &Grid, samples: &[Mat<T>]) -> Result<(usize, usize)> {
    if samples.len() != grid.len() {
        return Err(GnaError::Shape(format!("{} samples for a grid of length {}", samples.len(), grid.len())));
    }
    let rows = samples.first().map_or(0, Mat::rows);
    let cols = samples.first().map_or(0, Mat::cols);
    if samples.iter().any(|m| m.rows() != rows || m.cols() != cols) {
        return Err(GnaError::Shape("samples have different shapes".into()));
    }
    Ok((rows, cols))
}

impl GenVector {
    pub fn from_entries(grid: &Grid, entries: &[GenScalar]) -> Result<Self> {
        GenMatrix::from_entries(grid, entries.len(), 1, entries).map(GenVector)
    }

    pub fn from_f64(grid: &Grid, values: &[f64]) -> Result<Self> {
        GenMatrix::from_f64(grid, values.len(), 1, values).map(GenVector)
    }

    /// Standard basis vector `δ_j` (zero-based `j`).
    pub fn basis(grid: &Grid, n: usize, j: usize) -> Self {
        let mut v = vec![0.0; n];
        v[j] = 1.0;
        GenVector::from_f64(grid, &v).expect("shape is consistent")
    }

    pub fn from_matrix(m: GenMatrix) -> Result<Self> {
        if m.cols != 1 {
            return Err(GnaError::Shape(format!("{} columns where a vector was expected", m.cols)));
        }
        Ok(GenVector(m))
    }

    pub(crate) fn from_real_columns(grid: &Grid, cols: Vec<Vec<Float>>) -> Self {
        let n = cols.first().map_or(0, Vec::len);
        let samples = cols.into_iter().map(|c| Mat::from_vec(n, 1, c)).collect();
        GenVector(GenMatrix::from_samples(grid, n, 1, MatSamples::Real(samples)))
    }

    pub(crate) fn from_complex_columns(grid: &Grid, cols: Vec<Vec<Cx>>) -> Self {
        let n = cols.first().map_or(0, Vec::len);
        let samples = cols.into_iter().map(|c| Mat::from_vec(n, 1, c)).collect();
        GenVector(GenMatrix::from_samples(grid, n, 1, MatSamples::Complex(samples)))
    }

    pub fn as_matrix(&self) -> &GenMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> GenMatrix {
        self.0
    }

    pub fn grid(&self) -> &Grid {
        &self.0.grid
    }

    pub fn len(&self) -> usize {
        self.0.rows
    }

    pub fn is_empty(&self) -> bool {
        self.0.rows == 0
    }

    pub fn kind(&self) -> ScalarKind {
        self.0.kind()
    }

    pub fn entry(&self, i: usize) -> GenScalar {
        self.0.entry(i, 0)
    }

    pub fn entries(&self) -> Vec<GenScalar> {
        (0..self.len()).map(|i| self.entry(i)).collect()
    }

    pub fn real_samples(&self) -> Option<Vec<Vec<Float>>> {
        self.0.real_samples().map(|v| v.iter().map(|m| m.data().to_vec()).collect())
    }

    pub fn complex_samples(&self) -> Vec<Vec<Cx>> {
        self.0.complex_samples().into_iter().map(|m| m.data().to_vec()).collect()
    }

    pub fn into_complex(self) -> Self {
        GenVector(self.0.into_complex())
    }

    pub fn re(&self) -> Self {
        GenVector(self.0.re())
    }

    pub fn add(&self, o: &GenVector) -> Result<Self> {
        self.0.add(&o.0).map(GenVector)
    }

    pub fn sub(&self, o: &GenVector) -> Result<Self> {
        self.0.sub(&o.0).map(GenVector)
    }

    pub fn neg(&self) -> Self {
        GenVector(self.0.neg())
    }

    pub fn scale(&self, s: &GenScalar) -> Result<Self> {
        self.0.scale(s).map(GenVector)
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        GenVector(self.0.scale_f64(s))
    }

    pub fn is_negligible(&self, cfg: &ClassifierConfig) -> bool {
        self.0.is_negligible(cfg)
    }

    pub fn negligibility(&self, cfg: &ClassifierConfig) -> AsymptoticReport {
        self.0.negligibility(cfg)
    }

    pub fn same_samples(&self, o: &GenVector) -> bool {
        self.0.same_samples(&o.0)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.0.to_f64().into_iter().map(|m| m.into_iter().map(|r| r[0]).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, GridKind};

    fn grid() -> Grid {
        make_grid(GridKind::Dyadic, 4, 20).unwrap()
    }

    #[test]
    fn identity_times_matrix_is_exact() {
        let g = grid();
        let a = GenMatrix::from_fn(&g, 2, 3, |i, j| GenScalar::eps(&g).scale((i * 3 + j) as f64)).unwrap();
        let ia = GenMatrix::identity(&g, 2).matmul(&a).unwrap();
        assert!(ia.same_samples(&a));
        assert!(a.transpose().transpose().same_samples(&a));
    }

    #[test]
    fn matmul_is_samplewise() {
        let g = grid();
        let e = GenScalar::eps(&g);
        let one = GenScalar::one(&g);
        let a = GenMatrix::from_rows(&g, &[vec![e.clone(), one.clone()], vec![one.clone(), e.clone()]]).unwrap();
        let sq = a.matmul(&a).unwrap();
        let want = e.mul(&e).unwrap().add(&one).unwrap();
        assert!(sq.entry(0, 0).same_samples(&want));
        assert!(sq.entry(0, 1).same_samples(&e.scale(2.0)));
    }

    #[test]
    fn complex_entry_promotes_matrix() {
        let g = grid();
        let m = GenMatrix::from_entries(&g, 1, 2, &[GenScalar::one(&g), GenScalar::constant_cx(&g, 0.0, 1.0)]).unwrap();
        assert_eq!(m.kind(), ScalarKind::Complex);
        let h = m.conj_transpose();
        assert_eq!(h.entry(1, 0).to_f64_pairs()[0], (0.0, -1.0));
    }

    #[test]
    fn shape_errors() {
        let g = grid();
        let a = GenMatrix::zeros(&g, 2, 3);
        assert!(matches!(a.matmul(&a), Err(GnaError::Shape(_))));
        assert!(a.shift(&GenScalar::one(&g)).is_err());
    }

    #[test]
    fn cached_map_reuses_repeats() {
        let mut calls = 0;
        let out = map_cached(&[1, 1, 2, 2, 2, 1], |x| {
            calls += 1;
            x * 10
        });
        assert_eq!(out, vec![10, 10, 20, 20, 20, 10]);
        assert_eq!(calls, 3);
    }
}
