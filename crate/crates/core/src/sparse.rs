//! Compressed sparse row matrices over the free degrees of freedom.

use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Square CSR matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOperator {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

/// Accumulates `(row, col, value)` contributions. Duplicates are summed in insertion order,
/// which makes assembly reproducible bit for bit.
#[derive(Clone, Debug, Default)]
pub struct TripletBuilder {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(n: usize) -> Self {
        TripletBuilder { n, entries: Vec::new() }
    }

    pub fn with_capacity(n: usize, cap: usize) -> Self {
        TripletBuilder {
            n,
            entries: Vec::with_capacity(cap),
        }
    }

    pub fn add(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.n && col < self.n);
        self.entries.push((row, col, value));
    }

    pub fn build(mut self) -> SparseOperator {
        // Stable sort keeps insertion order among duplicates.
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; self.n + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseOperator {
            n: self.n,
            row_ptr,
            col_idx,
            values,
        }
    }
}

impl SparseOperator {
    pub fn zeros(n: usize) -> Self {
        TripletBuilder::new(n).build()
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut b = TripletBuilder::with_capacity(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            b.add(i, i, v);
        }
        b.build()
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        assert_eq!(m.nrows(), m.ncols());
        let mut b = TripletBuilder::new(m.nrows());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)] != 0.0 {
                    b.add(i, j, m[(i, j)]);
                }
            }
        }
        b.build()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Nonzeros as `(row, col, value)`, row-major.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.col_idx[k], self.values[k]))
        })
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (self.col_idx[k], self.values[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn mul_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            *yi = s;
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_into(x, &mut y);
        y
    }

    /// `x^T A y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        self.mul(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v).sum()).collect()
    }

    /// Row-sum lumped diagonal matrix.
    pub fn lumped(&self) -> SparseOperator {
        Self::from_diagonal(&self.row_sums())
    }

    /// `sum_k c_k A_k` for matrices of equal dimension.
    pub fn linear_combination(terms: &[(f64, &SparseOperator)]) -> SparseOperator {
        let n = terms.first().map_or(0, |(_, a)| a.n);
        let cap = terms.iter().map(|(_, a)| a.nnz()).sum();
        let mut b = TripletBuilder::with_capacity(n, cap);
        for (c, a) in terms {
            assert_eq!(a.n, n, "dimension mismatch");
            for (i, j, v) in a.iter() {
                b.add(i, j, c * v);
            }
        }
        b.build()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for (i, j, v) in self.iter() {
            m[(i, j)] += v;
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `max |a_ij - a_ji| / max |a_ij|` (zero for the zero matrix).
    pub fn relative_asymmetry(&self) -> f64 {
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        self.iter()
            .map(|(i, j, v)| (v - self.get(j, i)).abs())
            .fold(0.0_f64, f64::max)
            / scale
    }

    /// Writes `row col value` lines (0-based).
    pub fn write_coo<W: Write>(&self, mut w: W) -> Result<()> {
        for (i, j, v) in self.iter() {
            writeln!(w, "{i} {j} {v:?}")?;
        }
        Ok(())
    }

    /// Reads the format written by [`write_coo`](Self::write_coo).
    pub fn read_coo<R: BufRead>(n: usize, r: R) -> Result<SparseOperator> {
        let mut b = TripletBuilder::new(n);
        for (ln, line) in r.lines().enumerate() {
            let line = line?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            let bad = || Error::parse("coo", ln + 1, format!("malformed entry `{line}`"));
            if toks.len() != 3 {
                return Err(bad());
            }
            let i: usize = toks[0].parse().map_err(|_| bad())?;
            let j: usize = toks[1].parse().map_err(|_| bad())?;
            let v: f64 = toks[2].parse().map_err(|_| bad())?;
            if i >= n || j >= n {
                return Err(Error::parse(
                    "coo",
                    ln + 1,
                    format!("index out of range for dimension {n}"),
                ));
            }
            b.add(i, j, v);
        }
        Ok(b.build())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let mut b = TripletBuilder::new(3);
        b.add(0, 0, 1.0);
        b.add(2, 1, 4.0);
        b.add(0, 0, 2.0);
        b.add(1, 2, -1.0);
        let a = b.build();
        assert_eq!(a.nnz(), 3);
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.mul(&[1.0, 1.0, 1.0]), vec![3.0, -1.0, 4.0]);
    }

    #[test]
    fn coo_round_trip() {
        let mut b = TripletBuilder::new(3);
        b.add(0, 1, 0.1);
        b.add(1, 0, 0.1);
        b.add(2, 2, 1.0 / 3.0);
        let a = b.build();
        let mut buf = Vec::new();
        a.write_coo(&mut buf).unwrap();
        let back = SparseOperator::read_coo(3, buf.as_slice()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn asymmetry_of_symmetric_matrix_is_zero() {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]);
        assert_eq!(SparseOperator::from_dense(&m).relative_asymmetry(), 0.0);
        let m = DMatrix::from_row_slice(2, 2, &[2.0, -1.0, 0.0, 2.0]);
        assert_eq!(SparseOperator::from_dense(&m).relative_asymmetry(), 0.5);
    }
}
