//! Small dense `f64` linear algebra for log-embedding computations.

/// Solves the square system `a x = b` by Gaussian elimination with full
/// pivoting. Pivots below `tol` relative to the largest entry make the system
/// singular.
pub fn solve_full_pivot(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &x)| r.iter().copied().chain([x]).collect()).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let scale = a.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs())).max(f64::MIN_POSITIVE);
    for c in 0..n {
        let (mut pr, mut pc, mut best) = (c, c, 0.0);
        for (i, row) in m.iter().enumerate().skip(c) {
            for (j, x) in row.iter().enumerate().take(n).skip(c) {
                if x.abs() > best {
                    (pr, pc, best) = (i, j, x.abs());
                }
            }
        }
        if best <= tol * scale {
            return None;
        }
        m.swap(c, pr);
        for row in m.iter_mut() {
            row.swap(c, pc);
        }
        perm.swap(c, pc);
        for i in c + 1..n {
            let f = m[i][c] / m[c][c];
            if f != 0.0 {
                for j in c..=n {
                    m[i][j] -= f * m[c][j];
                }
            }
        }
    }
    let mut y = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|j| m[c][j] * y[j]).sum();
        y[c] = (m[c][n] - s) / m[c][c];
    }
    let mut x = vec![0.0; n];
    for (c, &p) in perm.iter().enumerate() {
        x[p] = y[c];
    }
    Some(x)
}

/// Numerical rank by full-pivot elimination with relative tolerance `tol`.
pub fn rank(a: &[Vec<f64>], tol: f64) -> usize {
    let mut m = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let scale = m.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs()));
    if scale == 0.0 {
        return 0;
    }
    let mut r = 0;
    while r < rows.min(cols) {
        let (mut pr, mut pc, mut best) = (r, r, 0.0);
        for (i, row) in m.iter().enumerate().skip(r) {
            for (j, x) in row.iter().enumerate().skip(r) {
                if x.abs() > best {
                    (pr, pc, best) = (i, j, x.abs());
                }
            }
        }
        if best <= tol * scale {
            break;
        }
        m.swap(r, pr);
        for row in m.iter_mut() {
            row.swap(r, pc);
        }
        for i in r + 1..rows {
            let f = m[i][r] / m[r][r];
            for j in r..cols {
                m[i][j] -= f * m[r][j];
            }
        }
        r += 1;
    }
    r
}

/// Least-squares solution of `a u = z` (`a` is rows × cols with full column
/// rank) through the normal equations, with the max-norm residual.
pub fn least_squares(a: &[Vec<f64>], z: &[f64]) -> Option<(Vec<f64>, f64)> {
    let cols = a.first().map_or(0, Vec::len);
    if cols == 0 {
        let res = z.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        return Some((Vec::new(), res));
    }
    let ata: Vec<Vec<f64>> = (0..cols)
        .map(|i| (0..cols).map(|j| a.iter().map(|r| r[i] * r[j]).sum()).collect())
        .collect();
    let atz: Vec<f64> = (0..cols).map(|i| a.iter().zip(z).map(|(r, x)| r[i] * x).sum()).collect();
    let u = solve_full_pivot(&ata, &atz, 1e-13)?;
    let residual = a
        .iter()
        .zip(z)
        .map(|(r, x)| (r.iter().zip(&u).map(|(p, q)| p * q).sum::<f64>() - x).abs())
        .fold(0.0f64, f64::max);
    Some((u, residual))
}
