//! Integral LLL reduction (all-integer variant with δ = 3/4).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `n / d` for `d > 0`.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * two))
}

/// LLL-reduces the rows of `basis`, which must be linearly independent.
/// Returns `None` if a dependency is detected.
pub fn lll_reduce(basis: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let n = basis.len();
    let mut b = basis.to_vec();
    if n <= 1 {
        return if b.iter().all(|v| v.iter().any(|x| !x.is_zero())) { Some(b) } else { None };
    }
    // d[i + 1] holds the Gram determinant d_i; d[0] = 1
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::from(1);
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return None;
    }
    let mut k = 1;
    let mut kmax = 0;

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return None;
                    }
                    d[k + 1] = u;
                }
            }
        }
        reduce(&mut b, &mut lam, &d, k, k - 1);
        let lhs = BigInt::from(4) * &d[k + 1] * &d[k - 1];
        let rhs = BigInt::from(3) * &d[k] * &d[k] - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            swap(&mut b, &mut lam, &mut d, k, kmax);
            k = (k - 1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                reduce(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Some(b)
}

fn reduce(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let dl = &d[l + 1];
    if (&lam[k][l] * BigInt::from(2)).abs() > *dl {
        let q = round_div(&lam[k][l], dl);
        let bl = b[l].clone();
        for (x, y) in b[k].iter_mut().zip(&bl) {
            *x -= &q * y;
        }
        lam[k][l] -= &q * dl;
        for i in 0..l {
            let t = &q * &lam[l][i];
            lam[k][i] -= t;
        }
    }
}

fn swap(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &mut [BigInt], k: usize, kmax: usize) {
    b.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = t;
    }
    let l = lam[k][k - 1].clone();
    let dk = d[k + 1].clone();
    let dk1 = d[k].clone();
    let dk2 = d[k - 1].clone();
    let nb = (&dk2 * &dk + &l * &l) / &dk1;
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (&dk * &lam[i][k - 1] - &l * &t) / &dk1;
        lam[i][k - 1] = (&nb * &t + &l * &lam[i][k]) / &dk;
    }
    d[k] = nb;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn textbook_example() {
        let b = m(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]);
        let r = lll_reduce(&b).unwrap();
        assert_eq!(r, m(&[&[0, 1, 0], &[1, 0, 1], &[-1, 0, 2]]));
    }

    #[test]
    fn finds_short_vector() {
        let b = m(&[&[1, 0, 1000], &[0, 1, 1414]]);
        let r = lll_reduce(&b).unwrap();
        let norm = |v: &Vec<BigInt>| dot(v, v);
        assert!(norm(&r[0]) < BigInt::from(1_000_000));
    }

    #[test]
    fn detects_dependency() {
        assert!(lll_reduce(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
