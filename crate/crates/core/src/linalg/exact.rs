//! Rational elimination. Pivoting always takes the first nonzero entry in
//! column order, so every basis produced here is reproducible.

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use super::{LinalgError, Mat, Rational, SubspaceCheck};

/// Rank by fraction-free (Bareiss) elimination on the integer matrix obtained
/// by clearing each row's denominators.
pub(super) fn bareiss_rank(m: &Mat<Rational>) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| integer_row(m.row(i))).collect();
    let rows = m.rows();
    let cols = m.cols();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// Reduced row echelon form restricted to pivots among the first `pivot_cols` columns.
pub(super) struct Rref {
    pub rows: Vec<Vec<Rational>>,
    /// `pivots[k]` is the pivot column of row `k`.
    pub pivots: Vec<usize>,
}

pub(super) fn rref(m: &Mat<Rational>, pivot_cols: usize) -> Rref {
    let mut a: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
    let rows = m.rows();
    let cols = m.cols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols.min(cols) {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r][c..].iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        let (top, rest) = a.split_at_mut(r);
        let (pivot_row, bottom) = rest.split_first_mut().expect("pivot row exists");
        for row in top.iter_mut().chain(bottom.iter_mut()) {
            let lead = row[c].clone();
            if lead.is_zero() {
                continue;
            }
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    let v = &row[j] - &lead * &pivot_row[j];
                    row[j] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { rows: a, pivots }
}

/// Scales a rational vector to coprime integers (sign preserved).
pub(super) fn clear_to_integers(v: &mut [Rational]) {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return;
    }
    for (slot, n) in v.iter_mut().zip(ints) {
        *slot = Rational::from_integer(n / &gcd);
    }
}

pub(super) fn kernel(m: &Mat<Rational>) -> Mat<Rational> {
    let cols = m.cols();
    let red = rref(m, cols);
    let mut is_pivot = vec![false; cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let basis: Vec<Vec<Rational>> = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (k, &p) in red.pivots.iter().enumerate() {
                v[p] = -red.rows[k][f].clone();
            }
            clear_to_integers(&mut v);
            v
        })
        .collect();
    Mat::from_columns(cols, &basis)
}

pub(super) fn column_space(m: &Mat<Rational>) -> Mat<Rational> {
    let red = rref(m, m.cols());
    m.select_columns(&red.pivots)
}

pub(super) fn solve(m: &Mat<Rational>, rhs: &Mat<Rational>) -> Result<Mat<Rational>, LinalgError> {
    if m.rows() != rhs.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: rhs.rows(),
        });
    }
    let n = m.cols();
    let aug = m.hstack(rhs)?;
    let red = rref(&aug, n);
    let rank = red.pivots.len();
    for row in &red.rows[rank..] {
        if let Some(bad) = row[n..].iter().find(|x| !x.is_zero()) {
            return Err(LinalgError::NotInColumnSpace {
                residual: bad.abs().to_f64().unwrap_or(f64::INFINITY),
            });
        }
    }
    let mut x = Mat::zeros(n, rhs.cols());
    for (k, &p) in red.pivots.iter().enumerate() {
        for j in 0..rhs.cols() {
            x[(p, j)] = red.rows[k][n + j].clone();
        }
    }
    Ok(x)
}

pub(super) fn contains(outer: &Mat<Rational>, inner: &Mat<Rational>) -> SubspaceCheck {
    if outer.rows() != inner.rows() {
        return SubspaceCheck {
            holds: false,
            residual: f64::INFINITY,
        };
    }
    let r_outer = bareiss_rank(outer);
    let joined = outer.hstack(inner).expect("row counts checked");
    let defect = bareiss_rank(&joined) - r_outer;
    SubspaceCheck {
        holds: defect == 0,
        residual: defect as f64,
    }
}
