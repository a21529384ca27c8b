//! Exact rank kernels.
//!
//! Rational mode clears denominators row by row and runs fraction-free
//! (Bareiss) elimination over the integers; every intermediate entry is a
//! minor of the scaled matrix, so no rationals appear during elimination.
//! Prime mode runs ordinary Gaussian elimination over F_p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::{inv_mod, mul_mod, reduce_mod, ScalarMode};

pub fn rank(m: &Matrix, mode: ScalarMode) -> Result<usize> {
    match mode {
        ScalarMode::Rational => Ok(bareiss_rank(m)),
        ScalarMode::Prime(p) => rank_mod_p(m, p),
    }
}

/// Integer rows with the same row space as `m`.
pub fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect()
}

pub fn bareiss_rank(m: &Matrix) -> usize {
    let mut a = integer_rows(m);
    let (rows, cols) = m.shape();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot * &row[j] - &lead * &pivot_row[j];
                // Sylvester's identity guarantees exact division.
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

pub fn rank_mod_p(m: &Matrix, p: u64) -> Result<usize> {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|r| m.row(r).iter().map(|q| reduce_mod(q, p)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = inv_mod(a[rank][c], p);
        for j in c..cols {
            a[rank][j] = mul_mod(a[rank][j], inv, p);
        }
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let sub = mul_mod(f, pivot_row[j], p);
                row[j] = (row[j] + p - sub) % p;
            }
        }
        rank += 1;
    }
    Ok(rank)
}
