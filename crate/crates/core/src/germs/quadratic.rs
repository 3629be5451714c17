use crate::error::{Error, Result};
use crate::localfield::{LaurentSeries, ResidueElem};

/// Square matrix over `F_p`, row-major rows.
pub type FpMatrix = Vec<Vec<ResidueElem>>;

fn check_large_p(l: usize, p: u32) -> Result<()> {
    if (p as usize) <= 2 * l + 1 {
        return Err(Error::precondition(format!("p = {p} must exceed 2l + 1 = {}", 2 * l + 1)));
    }
    Ok(())
}

/// Gram matrix of `3 sum X_i^2 + 4 sum_{i<j} X_i X_j`: 3 on the diagonal,
/// 2 off it.
pub fn quadratic_form_matrix(l: usize, p: u32) -> FpMatrix {
    (0..l)
        .map(|i| (0..l).map(|j| ResidueElem::new(if i == j { 3 } else { 2 }, p)).collect())
        .collect()
}

/// `(2i + 1) / (2i - 1)` for `i = 1..l`.
pub fn expected_diagonal(l: usize, p: u32) -> Result<Vec<ResidueElem>> {
    (1..=l as i64)
        .map(|i| Ok(ResidueElem::new(2 * i + 1, p) * ResidueElem::new(2 * i - 1, p).inv()?))
        .collect()
}

pub fn transpose(m: &FpMatrix) -> FpMatrix {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect()
}

pub fn fp_mul(x: &FpMatrix, y: &FpMatrix) -> FpMatrix {
    let n = x.len();
    let p = x[0][0].modulus();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(ResidueElem::zero(p), |acc, k| acc + x[i][k] * y[k][j]))
                .collect()
        })
        .collect()
}

/// Symmetric elimination on the form of [`quadratic_form_matrix`]: returns
/// upper unitriangular `T` and diagonal `D` with `T^t A T = D`.
pub fn diagonalize_quadratic(l: usize, p: u32) -> Result<(FpMatrix, Vec<ResidueElem>)> {
    check_large_p(l, p)?;
    let mut a = quadratic_form_matrix(l, p);
    let mut t: FpMatrix = (0..l)
        .map(|i| (0..l).map(|j| ResidueElem::new((i == j) as i64, p)).collect())
        .collect();
    for k in 0..l {
        let pivot_inv = a[k][k]
            .inv()
            .map_err(|_| Error::precondition(format!("pivot {k} vanishes mod {p}")))?;
        for j in k + 1..l {
            let f = a[k][j] * pivot_inv;
            if f.is_zero() {
                continue;
            }
            // column j -= f column k, then row j -= f row k
            for row in a.iter_mut() {
                let sub = row[k] * f;
                row[j] = row[j] - sub;
            }
            for c in 0..l {
                let sub = a[k][c] * f;
                a[j][c] = a[j][c] - sub;
            }
            for row in t.iter_mut() {
                let sub = row[k] * f;
                row[j] = row[j] - sub;
            }
        }
    }
    let d = (0..l).map(|i| a[i][i]).collect();
    Ok((t, d))
}

/// Taylor data of `delta(u) = sum 2(1 + u_i) + prod (1 + u_i)^-2` at `u = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaExpansion {
    pub constant: ResidueElem,
    pub linear: Vec<ResidueElem>,
    /// Gram matrix: the quadratic part is `u^t Q u`.
    pub quadratic: FpMatrix,
}

/// `delta` along the line `u = s v`, as a power series in `s` modulo `s^3`.
fn delta_on_line(v: &[i64], p: u32) -> Result<LaurentSeries> {
    let prec = 3;
    let mut linear_sum = LaurentSeries::zero(p, prec);
    let mut prod = LaurentSeries::one(p, prec);
    for &vi in v {
        let x = LaurentSeries::from_coeffs(p, 0, &[1, vi], prec)?;
        linear_sum = linear_sum.checked_add(&x.scale(ResidueElem::new(2, p)))?;
        prod = prod.checked_mul(&x.pow(-2)?)?;
    }
    linear_sum.checked_add(&prod)
}

/// Recovers the Taylor data of `delta` from its restrictions to the lines
/// through `e_i` and `e_i + e_j`.
pub fn delta_quadratic_part(l: usize, p: u32) -> Result<DeltaExpansion> {
    check_large_p(l, p)?;
    let unit = |idx: &[usize]| -> Vec<i64> { (0..l).map(|k| idx.contains(&k) as i64).collect() };
    let half = ResidueElem::new(2, p).inv()?;
    let mut diag = Vec::with_capacity(l);
    let mut linear = Vec::with_capacity(l);
    let mut constant = ResidueElem::zero(p);
    for i in 0..l {
        let f = delta_on_line(&unit(&[i]), p)?;
        constant = f.coeff(0)?;
        linear.push(f.coeff(1)?);
        diag.push(f.coeff(2)?);
    }
    let mut q: FpMatrix = vec![vec![ResidueElem::zero(p); l]; l];
    for i in 0..l {
        q[i][i] = diag[i];
        for j in i + 1..l {
            let both = delta_on_line(&unit(&[i, j]), p)?.coeff(2)?;
            let off = (both - diag[i] - diag[j]) * half;
            q[i][j] = off;
            q[j][i] = off;
        }
    }
    Ok(DeltaExpansion { constant, linear, quadratic: q })
}
