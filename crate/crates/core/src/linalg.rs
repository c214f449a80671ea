//! Exact dense linear solves over the rationals.

use std::cmp::Ordering;

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::new(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(Rational::new(), |acc, c| {
                    acc + Rational::from(self.get(r, c) * &x[c])
                })
            })
            .collect()
    }
}

/// Solve `a x = b` exactly by Gaussian elimination.
///
/// Each row is first scaled to integers; elimination is then carried out
/// fraction-free (Bareiss), so every intermediate entry is an exact integer
/// and no gcd reductions are needed until back substitution. Rows are
/// pivoted on the entry of largest magnitude in each column.
pub fn solve(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    let n = a.rows;
    if a.cols != n || b.len() != n {
        return Err(Error::domain(format!(
            "solve needs a square system, got {}x{} with rhs of length {}",
            a.rows,
            a.cols,
            b.len()
        )));
    }
    let mut m: Vec<Vec<Integer>> = (0..n)
        .map(|r| {
            let row = a.data[r * n..(r + 1) * n].iter().chain(std::iter::once(&b[r]));
            let lcm = row
                .clone()
                .fold(Integer::from(1), |acc, q| acc.lcm(q.denom()));
            row.map(|q| q.numer() * Integer::from(&lcm / q.denom()))
                .collect()
        })
        .collect();

    let mut prev_pivot = Integer::from(1);
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| m[r][col].cmp0() != Ordering::Equal)
            .max_by(|&x, &y| m[x][col].cmp_abs(&m[y][col]))
            .ok_or_else(|| {
                Error::Singular(format!(
                    "no nonzero pivot in column {col} of a {n}x{n} system"
                ))
            })?;
        m.swap(col, pivot);

        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        let p = &pivot_row[col];
        for row in lower.iter_mut() {
            let f = std::mem::take(&mut row[col]);
            for c in col + 1..=n {
                // (p * row[c] - f * pivot_row[c]) / prev_pivot, exact
                let mut v = Integer::from(p * &row[c]);
                v -= Integer::from(&f * &pivot_row[c]);
                v.div_exact_mut(&prev_pivot);
                row[c] = v;
            }
        }
        prev_pivot = p.clone();
    }

    let mut x = vec![Rational::new(); n];
    for r in (0..n).rev() {
        let mut acc = Rational::from(&m[r][n]);
        for c in r + 1..n {
            if m[r][c].cmp0() != Ordering::Equal {
                acc -= Rational::from(&m[r][c] * &x[c]);
            }
        }
        x[r] = acc / &m[r][r];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn hilbert_system_is_solved_exactly() {
        let n = 8;
        let mut a = RationalMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                a.set(r, c, q(1, (r + c + 1) as i64));
            }
        }
        let x_true: Vec<Rational> = (0..n).map(|i| q(i as i64 - 3, 7)).collect();
        let b = a.mul_vec(&x_true);
        assert_eq!(solve(&a, &b).unwrap(), x_true);
    }

    #[test]
    fn zero_leading_entry_needs_pivoting() {
        let mut a = RationalMatrix::zeros(2, 2);
        a.set(0, 1, q(1, 1));
        a.set(1, 0, q(2, 1));
        let x = solve(&a, &[q(3, 1), q(4, 1)]).unwrap();
        assert_eq!(x, vec![q(2, 1), q(3, 1)]);
    }

    #[test]
    fn singular_system_is_reported() {
        let mut a = RationalMatrix::zeros(2, 2);
        a.set(0, 0, q(1, 1));
        a.set(0, 1, q(2, 1));
        a.set(1, 0, q(2, 1));
        a.set(1, 1, q(4, 1));
        assert!(matches!(solve(&a, &[q(1, 1), q(1, 1)]), Err(Error::Singular(_))));
    }
}
