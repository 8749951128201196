//! Integer matrices: kernel lattices and Hermite normal forms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lll::lll_reduce;

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Extended gcd with `g >= 0` and `s*a + t*b = g`.
fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Replaces columns `(k, j)` by `(s*c_k + t*c_j, -(b/g)*c_k + (a/g)*c_j)`.
fn combine_columns(m: &mut [Vec<BigInt>], k: usize, j: usize, s: &BigInt, t: &BigInt, u: &BigInt, v: &BigInt) {
    for row in m.iter_mut() {
        let x = row[k].clone();
        let y = row[j].clone();
        row[k] = s * &x + t * &y;
        row[j] = u * &x + v * &y;
    }
}

/// A basis of `{x ∈ ℤ^cols : A x = 0}`, LLL-reduced, each vector with a
/// positive first nonzero entry.
pub fn integer_kernel(a: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut m = a.to_vec();
    let mut u: IntMatrix = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut k = 0;
    for i in 0..m.len() {
        if k == cols {
            break;
        }
        for j in k + 1..cols {
            if m[i][j].is_zero() {
                continue;
            }
            let (x, y) = (m[i][k].clone(), m[i][j].clone());
            let (g, s, t) = xgcd(&x, &y);
            let p = -(&y / &g);
            let q = &x / &g;
            combine_columns(&mut m, k, j, &s, &t, &p, &q);
            combine_columns(&mut u, k, j, &s, &t, &p, &q);
        }
        if !m[i][k].is_zero() {
            k += 1;
        }
    }
    let kernel: IntMatrix = (k..cols).map(|j| u.iter().map(|row| row[j].clone()).collect()).collect();
    let mut kernel = lll_reduce(&kernel).unwrap_or(kernel);
    for v in kernel.iter_mut() {
        if v.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
    kernel
}

/// Row Hermite normal form of the lattice spanned by the rows of `gens`:
/// nonzero rows only, positive pivots, entries above each pivot reduced
/// into `[0, pivot)`.
pub fn hnf_rows(gens: &[Vec<BigInt>]) -> IntMatrix {
    let mut m = gens.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        // gcd-combine all rows below into row r at column c
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let (x, y) = (m[r][c].clone(), m[i][c].clone());
            let (g, s, t) = xgcd(&x, &y);
            let p = -(&y / &g);
            let q = &x / &g;
            let (rr, ri) = (m[r].clone(), m[i].clone());
            m[r] = rr.iter().zip(&ri).map(|(a, b)| &s * a + &t * b).collect();
            m[i] = rr.iter().zip(&ri).map(|(a, b)| &p * a + &q * b).collect();
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot_row = m[r].clone();
        for i in 0..r {
            let f = m[i][c].div_floor(&pivot_row[c]);
            if !f.is_zero() {
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(a: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
        a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(integer_kernel(&int_matrix(&[&[1, 2], &[2, 4]]), 2), int_matrix(&[&[2, -1]]));
        assert!(integer_kernel(&int_matrix(&[&[1, 0], &[0, 1]]), 2).is_empty());
        let k = integer_kernel(&int_matrix(&[&[0, 0]]), 2);
        assert_eq!(k.len(), 2);
        assert_eq!(hnf_rows(&k), int_matrix(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn kernel_is_saturated() {
        let a = int_matrix(&[&[2, 4, 6], &[3, 6, 9]]);
        let k = integer_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&a, v).iter().all(Zero::is_zero));
        }
        assert_eq!(hnf_rows(&k), int_matrix(&[&[1, 1, -1], &[0, 3, -2]]));
    }

    #[test]
    fn hermite_form() {
        let h = hnf_rows(&int_matrix(&[&[2, 0], &[0, 2], &[1, 1]]));
        assert_eq!(h, int_matrix(&[&[1, 1], &[0, 2]]));
        let h = hnf_rows(&int_matrix(&[&[4, 6], &[6, 4]]));
        assert_eq!(h, int_matrix(&[&[2, 8], &[0, 10]]));
    }
}
