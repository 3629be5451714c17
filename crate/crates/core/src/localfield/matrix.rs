use std::fmt;

use super::series::LaurentSeries;
use crate::error::{Error, Result};

/// A square matrix over `F_p((t))`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixLF {
    n: usize,
    entries: Vec<LaurentSeries>,
}

impl MatrixLF {
    pub fn new(n: usize, entries: Vec<LaurentSeries>) -> Result<Self> {
        if entries.len() != n * n || n == 0 {
            return Err(Error::precondition(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        let p = entries[0].modulus();
        if let Some(e) = entries.iter().find(|e| e.modulus() != p) {
            return Err(Error::PrimeMismatch(p, e.modulus()));
        }
        Ok(MatrixLF { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> LaurentSeries) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        MatrixLF { n, entries }
    }

    pub fn identity(p: u32, n: usize, prec: i32) -> Self {
        Self::from_fn(n, |i, j| LaurentSeries::constant(p, (i == j) as i64, prec))
    }

    /// `antidiag(1, ..., 1)`, the longest Weyl element of `GL_n`.
    pub fn longest_weyl(p: u32, n: usize, prec: i32) -> Self {
        Self::from_fn(n, |i, j| LaurentSeries::constant(p, (i + j == n - 1) as i64, prec))
    }

    pub fn diagonal(values: &[LaurentSeries], prec: i32) -> Self {
        let p = values[0].modulus();
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                values[i].clone()
            } else {
                LaurentSeries::zero(p, prec)
            }
        })
    }

    /// The 1x1 matrix `(x)`.
    pub fn scalar(x: LaurentSeries) -> Self {
        MatrixLF { n: 1, entries: vec![x] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u32 {
        self.entries[0].modulus()
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: LaurentSeries) {
        self.entries[i * self.n + j] = x;
    }

    pub fn entries(&self) -> &[LaurentSeries] {
        &self.entries
    }

    /// Smallest precision among the entries.
    pub fn precision(&self) -> i32 {
        self.entries.iter().map(|e| e.precision()).min().unwrap_or(i32::MAX)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::precondition(format!("{}x{} times {}x{}", self.n, self.n, other.n, other.n)));
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.get(i, 0).checked_mul(other.get(0, j))?;
                for k in 1..n {
                    acc = acc.checked_add(&self.get(i, k).checked_mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(MatrixLF { n, entries })
    }

    /// Product of a chain of matrices, left to right.
    pub fn product(factors: &[&MatrixLF]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::precondition("empty matrix product"))?;
        rest.iter().try_fold((*first).clone(), |acc, m| acc.checked_mul(m))
    }

    pub fn det(&self) -> Result<LaurentSeries> {
        let rows: Vec<usize> = (0..self.n).collect();
        self.minor_det(&rows, 0)
    }

    /// Laplace expansion along column `col` over the listed rows.
    fn minor_det(&self, rows: &[usize], col: usize) -> Result<LaurentSeries> {
        if rows.len() == 1 {
            return Ok(self.get(rows[0], col).clone());
        }
        let mut acc: Option<LaurentSeries> = None;
        for (k, &row) in rows.iter().enumerate() {
            let rest: Vec<usize> = rows.iter().copied().filter(|&r| r != row).collect();
            let term = self.get(row, col).checked_mul(&self.minor_det(&rest, col + 1)?)?;
            let term = if k % 2 == 1 { -term } else { term };
            acc = Some(match acc {
                None => term,
                Some(a) => a.checked_add(&term)?,
            });
        }
        Ok(acc.expect("nonempty rows"))
    }

    /// Inverse through the adjugate.
    pub fn inverse(&self) -> Result<Self> {
        let det_inv = self.det()?.checked_inv()?;
        let n = self.n;
        if n == 1 {
            return Ok(MatrixLF::scalar(det_inv));
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // (i, j) entry of the inverse is the (j, i) cofactor over det
                let minor = MatrixLF::from_fn(n - 1, |a, b| {
                    let r = if a < j { a } else { a + 1 };
                    let c = if b < i { b } else { b + 1 };
                    self.get(r, c).clone()
                });
                let cof = minor.det()?;
                let cof = if (i + j) % 2 == 1 { -cof } else { cof };
                entries.push(cof.checked_mul(&det_inv)?);
            }
        }
        Ok(MatrixLF { n, entries })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Upper triangular with ones on the diagonal (exactly known ones).
    pub fn is_upper_unitriangular(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.get(i, j);
                if i > j {
                    e.is_zero()
                } else if i == j {
                    e.valuation() == Some(0) && e.coeffs().iter().skip(1).all(|&c| c == 0) && e.coeffs()[0] == 1
                } else {
                    true
                }
            })
        })
    }

    /// Sum of the superdiagonal entries `n_{i, i+1}`.
    pub fn superdiagonal_sum(&self) -> Result<LaurentSeries> {
        let p = self.modulus();
        (1..self.n).try_fold(LaurentSeries::zero(p, i32::MAX / 4), |acc, i| {
            acc.checked_add(self.get(i - 1, i))
        })
    }
}

impl fmt::Debug for MatrixLF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{:?}", self.get(i, j))).collect();
            writeln!(f, "  {}", row.join(" | "))?;
        }
        write!(f, "]")
    }
}
