use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        IntMatrix::from_rows(rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.to_rows()
    }
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if r == 0 || c == 0 {
            return Err(Error::Matrix(
                "matrix needs at least one row and one column".into(),
            ));
        }
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Matrix("ragged rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are `cols`.
    pub fn from_columns(cols: &[Vec<i64>]) -> Result<Self> {
        let d = cols.first().map(|c| c.len()).unwrap_or(0);
        let rows = (0..d)
            .map(|k| {
                cols.iter()
                    .map(|c| c.get(k).copied().unwrap_or(0))
                    .collect()
            })
            .collect();
        if cols.iter().any(|c| c.len() != d) {
            return Err(Error::Matrix("columns of unequal length".into()));
        }
        Self::from_rows(rows)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix {
            rows: n,
            cols: n,
            data: vec![0; n * n],
        };
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// The column `a_i`.
    pub fn column(&self, i: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, i)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|i| self.column(i)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Matrix("dimension mismatch in product".into()));
        }
        let mut out = vec![vec![BigInt::zero(); other.cols]; self.rows];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                for k in 0..self.cols {
                    *slot += BigInt::from(self.get(i, k)) * other.get(k, j);
                }
            }
        }
        from_big(&out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i128> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| *a as i128 * *b as i128)
                    .sum()
            })
            .collect()
    }

    pub(crate) fn to_big(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        hnf_big(self.to_big())
            .0
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .count()
    }
}

pub(crate) fn from_big(rows: &[Vec<BigInt>]) -> Result<IntMatrix> {
    let mut out = Vec::with_capacity(rows.len());
    for r in rows {
        let mut row = Vec::with_capacity(r.len());
        for x in r {
            row.push(
                x.to_i64()
                    .ok_or_else(|| Error::Overflow(format!("entry {x} exceeds 64 bits")))?,
            );
        }
        out.push(row);
    }
    IntMatrix::from_rows(out)
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| format!("{x:>3}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Row Hermite normal form over big integers: returns `(H, U)` with `H = U M`.
pub(crate) fn hnf_big(m: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut h = m;
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        // gcd-combine rows pr.. into row pr on column c
        for r in pr + 1..rows {
            if h[r][c].is_zero() {
                continue;
            }
            let a = h[pr][c].clone();
            let b = h[r][c].clone();
            let eg = a.extended_gcd(&b);
            let (g, x, y) = (eg.gcd, eg.x, eg.y);
            let (p, q) = (&a / &g, &b / &g);
            for mat in [&mut h, &mut u] {
                let width = mat[0].len();
                for k in 0..width {
                    let top = &x * &mat[pr][k] + &y * &mat[r][k];
                    let bot = &p * &mat[r][k] - &q * &mat[pr][k];
                    mat[pr][k] = top;
                    mat[r][k] = bot;
                }
            }
        }
        if h[pr][c].is_zero() {
            continue;
        }
        if h[pr][c].is_negative() {
            for mat in [&mut h, &mut u] {
                for v in mat[pr].iter_mut() {
                    *v = -v.clone();
                }
            }
        }
        let piv = h[pr][c].clone();
        for r in 0..pr {
            let f = h[r][c].div_floor(&piv);
            if f.is_zero() {
                continue;
            }
            for mat in [&mut h, &mut u] {
                let width = mat[0].len();
                for k in 0..width {
                    let d = &f * &mat[pr][k];
                    mat[r][k] -= d;
                }
            }
        }
        pr += 1;
    }
    (h, u)
}

/// `(H, U)` with `H = U M` in row Hermite normal form and `U` unimodular.
pub fn hermite_normal_form(m: &IntMatrix) -> Result<(IntMatrix, IntMatrix)> {
    let (h, u) = hnf_big(m.to_big());
    Ok((from_big(&h)?, from_big(&u)?))
}

/// Elementary divisors (the nonzero diagonal of the Smith form).
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.to_big();
    let (rows, cols) = (a.len(), a[0].len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = a[i][t].div_floor(&a[t][t]);
            if !q.is_zero() {
                for k in t..cols {
                    let d = &q * &a[t][k];
                    a[i][k] -= d;
                }
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = a[t][j].div_floor(&a[t][t]);
            if !q.is_zero() {
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // enforce divisibility of the rest of the block
        let piv = a[t][t].clone();
        let bad = (t + 1..rows)
            .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_multiple_of(&piv));
        if let Some((i, _)) = bad {
            for k in t..cols {
                let v = a[i][k].clone();
                a[t][k] += v;
            }
            continue;
        }
        out.push(piv.abs());
        t += 1;
    }
    out
}

/// Saturated basis of `{ l in Z^N : A l = 0 }`, rows in Hermite normal form.
pub fn kernel_basis(a: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    let rank = a.rank();
    if rank < a.nrows() {
        return Err(Error::RankDeficient {
            rank,
            rows: a.nrows(),
        });
    }
    let (h, u) = hnf_big(a.transpose().to_big());
    let kernel: Vec<Vec<BigInt>> = h
        .iter()
        .zip(u)
        .filter(|(hr, _)| hr.iter().all(|x| x.is_zero()))
        .map(|(_, ur)| ur)
        .collect();
    if kernel.is_empty() {
        return Ok(vec![]);
    }
    let (kh, _) = hnf_big(kernel);
    Ok(from_big(&kh)?.to_rows())
}

/// `Z A = Z^d`, i.e. every elementary divisor equals one and rank is `d`.
pub fn check_full_lattice(a: &IntMatrix) -> bool {
    let inv = smith_invariants(a);
    inv.len() == a.nrows() && inv.iter().all(|x| x.is_one())
}
