//! Small exact linear algebra over the rationals.

use num_traits::{Signed, Zero};

use crate::Rat;

/// Exact determinant by Gaussian elimination with partial pivoting.
pub fn det_rat(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::from_integer(1.into());
    }
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::from_integer(1.into());
    for k in 0..n {
        let pivot = (k..n).max_by(|&i, &j| a[i][k].abs().cmp(&a[j][k].abs()));
        let p = pivot.unwrap();
        if a[p][k].is_zero() {
            return Rat::zero();
        }
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det *= a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &a[k][k];
            for j in k..n {
                let sub = &f * &a[k][j];
                a[i][j] = &a[i][j] - sub;
            }
        }
    }
    det
}

/// Solve `A x = b` exactly; `None` if singular.
pub fn solve_rat(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i][k].abs().cmp(&m[j][k].abs()))?;
        if m[p][k].is_zero() {
            return None;
        }
        m.swap(p, k);
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &m[k][k];
            for j in k..=n {
                let sub = &f * &m[k][j];
                m[i][j] = &m[i][j] - sub;
            }
        }
    }
    Some(
        (0..n)
            .map(|i| &m[i][n] / &m[i][i])
            .collect(),
    )
}
