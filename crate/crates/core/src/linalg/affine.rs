use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{max_magnitude, Scalar, C64};

/// `particular + span(basis)`: the complete solution set of a linear system.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSolutionSet<S> {
    pub particular: Vec<S>,
    pub basis: Vec<Vec<S>>,
}

impl<S: Scalar> AffineSolutionSet<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `particular + sum_m params[m] * basis[m]`.
    pub fn member(&self, params: &[S]) -> Vec<S> {
        debug_assert_eq!(params.len(), self.basis.len());
        let mut out = self.particular.clone();
        for (t, b) in params.iter().zip(&self.basis) {
            if t.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(b) {
                *o = o.clone() + t.clone() * v.clone();
            }
        }
        out
    }

    pub fn member_i64(&self, params: &[i64]) -> Vec<S> {
        let params: Vec<S> = params.iter().map(|&t| S::from_i64(t)).collect();
        self.member(&params)
    }
}

/// `max_i |(m x - rhs)_i|`.
pub fn residual<S: Scalar>(m: &[Vec<S>], rhs: &[S], x: &[S]) -> f64 {
    m.iter()
        .zip(rhs)
        .map(|(row, b)| {
            let lhs = row
                .iter()
                .zip(x)
                .fold(S::zero(), |acc, (a, v)| acc + a.clone() * v.clone());
            (lhs - b.clone()).magnitude()
        })
        .fold(0.0, f64::max)
}

/// Exact solve by fraction-free (Bareiss) elimination on the augmented matrix
/// followed by back substitution to reduced row echelon form.
pub(crate) fn exact_solve<S: Scalar>(m: &[Vec<S>], rhs: &[S]) -> Option<AffineSolutionSet<S>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<S>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| row.iter().cloned().chain(std::iter::once(b.clone())).collect())
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut prev = S::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for i in r + 1..rows {
            let factor = a[i][c].clone();
            for j in 0..=cols {
                if j < c {
                    continue;
                }
                let v = (pivot.clone() * a[i][j].clone() - factor.clone() * a[r][j].clone())
                    / prev.clone();
                a[i][j] = v;
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }

    // Rows below the rank must read 0 = 0.
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }

    // Back substitution to RREF.
    for (k, &c) in pivots.iter().enumerate().rev() {
        let pivot = a[k][c].clone();
        for j in c..=cols {
            a[k][j] = a[k][j].clone() / pivot.clone();
        }
        for i in 0..k {
            let factor = a[i][c].clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..=cols {
                a[i][j] = a[i][j].clone() - factor.clone() * a[k][j].clone();
            }
        }
    }

    let mut particular = vec![S::zero(); cols];
    for (k, &c) in pivots.iter().enumerate() {
        particular[c] = a[k][cols].clone();
    }
    let basis = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![S::zero(); cols];
            v[free] = S::one();
            for (k, &c) in pivots.iter().enumerate() {
                v[c] = -a[k][free].clone();
            }
            v
        })
        .collect();
    Some(AffineSolutionSet { particular, basis })
}

/// Least-squares style solve by Householder QR with column pivoting.
///
/// The numerical rank is the number of pivots whose remaining column norm
/// exceeds `rank_tol * max|m_ij|`. The system is declared inconsistent when
/// the part of `rhs` orthogonal to the range exceeds
/// `rank_tol * max(max|m_ij|, max|rhs_i|) * sqrt(rows)`.
pub(crate) fn qr_solve(m: &[Vec<C64>], rhs: &[C64], rank_tol: f64) -> Option<AffineSolutionSet<C64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<C64>> = m.to_vec();
    let mut b: Vec<C64> = rhs.to_vec();
    let mut perm: Vec<usize> = (0..cols).collect();

    let entry_scale = m.iter().map(|r| max_magnitude(r)).fold(0.0, f64::max);
    let pivot_floor = rank_tol * entry_scale;
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let (best, best_norm) = (k..cols)
            .map(|j| (j, (k..rows).map(|i| a[i][j].norm_sqr()).sum::<f64>().sqrt()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_norm <= pivot_floor || best_norm == 0.0 {
            break;
        }
        if best != k {
            for row in a.iter_mut() {
                row.swap(k, best);
            }
            perm.swap(k, best);
        }
        // Householder reflector zeroing a[k+1..][k].
        let x0 = a[k][k];
        let phase = if x0.norm() == 0.0 {
            Complex::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * best_norm;
        let mut v: Vec<C64> = (k..rows).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 > 0.0 {
            for j in k..cols {
                let dot: C64 = (k..rows).map(|i| v[i - k].conj() * a[i][j]).sum();
                let s = dot * (2.0 / vnorm2);
                for i in k..rows {
                    a[i][j] -= s * v[i - k];
                }
            }
            let dot: C64 = (k..rows).map(|i| v[i - k].conj() * b[i]).sum();
            let s = dot * (2.0 / vnorm2);
            for i in k..rows {
                b[i] -= s * v[i - k];
            }
        }
        a[k][k] = alpha;
        for row in a.iter_mut().skip(k + 1) {
            row[k] = C64::zero();
        }
        rank += 1;
    }

    let rhs_scale = max_magnitude(rhs);
    let consistency_floor = rank_tol * entry_scale.max(rhs_scale) * (rows.max(1) as f64).sqrt();
    let leftover = b[rank..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if leftover > consistency_floor {
        return None;
    }

    let back_solve = |target: &[C64]| -> Vec<C64> {
        let mut z = vec![C64::zero(); rank];
        for i in (0..rank).rev() {
            let mut s = target[i];
            for j in i + 1..rank {
                s -= a[i][j] * z[j];
            }
            z[i] = s / a[i][i];
        }
        z
    };
    let unpermute = |z: &[C64]| -> Vec<C64> {
        let mut x = vec![C64::zero(); cols];
        for (k, &c) in perm.iter().enumerate() {
            x[c] = z[k];
        }
        x
    };

    let mut z = back_solve(&b[..rank]);
    z.resize(cols, C64::zero());
    let particular = unpermute(&z);
    let basis = (rank..cols)
        .map(|j| {
            let col: Vec<C64> = (0..rank).map(|i| a[i][j]).collect();
            let w = back_solve(&col);
            let mut z: Vec<C64> = w.into_iter().map(|v| -v).collect();
            z.resize(cols, C64::zero());
            z[j] = Complex::new(1.0, 0.0);
            unpermute(&z)
        })
        .collect();
    Some(AffineSolutionSet { particular, basis })
}

/// Determinant by Bareiss elimination with largest-modulus pivoting.
pub fn determinant<S: Scalar>(m: &[Vec<S>]) -> S {
    let n = m.len();
    if n == 0 {
        return S::one();
    }
    let mut a = m.to_vec();
    let mut prev = S::one();
    let mut negate = false;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i][k].magnitude().total_cmp(&a[j][k].magnitude()))
            .expect("nonempty range");
        if a[p][k].is_zero() {
            return S::zero();
        }
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone())
                    / prev.clone();
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss_ratio, GaussRational};

    fn q(n: i64) -> GaussRational {
        GaussRational::from_i64(n)
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<GaussRational>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    fn cmat(rows: &[&[i64]]) -> Vec<Vec<C64>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| C64::new(v as f64, 0.0)).collect())
            .collect()
    }

    #[test]
    fn inconsistent_singular_system() {
        assert_eq!(exact_solve(&mat(&[&[8, 4], &[4, 2]]), &[q(-2), q(0)]), None);
        assert_eq!(
            qr_solve(&cmat(&[&[8, 4], &[4, 2]]), &[C64::new(-2.0, 0.0), C64::zero()], 1e-10),
            None
        );
    }

    #[test]
    fn underdetermined_single_row() {
        let set = exact_solve(&mat(&[&[0, 1, 0]]), &[q(0)]).unwrap();
        assert_eq!(set.particular, vec![q(0); 3]);
        assert_eq!(set.basis, vec![vec![q(1), q(0), q(0)], vec![q(0), q(0), q(1)]]);

        let set = qr_solve(&cmat(&[&[0, 1, 0]]), &[C64::zero()], 1e-10).unwrap();
        assert_eq!(set.dim(), 2);
        for b in &set.basis {
            assert!(b[1].norm() < 1e-14);
        }
    }

    #[test]
    fn unique_solution() {
        let set = exact_solve(&mat(&[&[1, 0], &[0, 1]]), &[q(3), q(-4)]).unwrap();
        assert_eq!(set.particular, vec![q(3), q(-4)]);
        assert!(set.basis.is_empty());
        let set = exact_solve(&mat(&[&[2, 1], &[1, 3], &[3, 4]]), &[q(1), q(2), q(3)]).unwrap();
        assert_eq!(set.particular, vec![gauss_ratio(1, 5), gauss_ratio(3, 5)]);
    }

    #[test]
    fn family_members_solve_exactly() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let rhs = [q(1), q(2), q(5)];
        let set = exact_solve(&m, &rhs).unwrap();
        assert_eq!(set.dim(), 2);
        for params in [[0, 0], [1, -3], [7, 11]] {
            assert_eq!(residual(&m, &rhs, &set.member_i64(&params)), 0.0);
        }
        let fm: Vec<Vec<C64>> = m.iter().map(|r| r.iter().map(Scalar::to_c64).collect()).collect();
        let frhs: Vec<C64> = rhs.iter().map(Scalar::to_c64).collect();
        let set = qr_solve(&fm, &frhs, 1e-10).unwrap();
        assert_eq!(set.dim(), 2);
        for params in [[0, 0], [1, -3], [7, 11]] {
            assert!(residual(&fm, &frhs, &set.member_i64(&params)) < 1e-12);
        }
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&mat(&[&[2, 1], &[1, 3]])), q(5));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), q(-1));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), q(0));
        let m = mat(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]);
        assert_eq!(determinant(&m), q(4));
        let fm: Vec<Vec<C64>> = m.iter().map(|r| r.iter().map(Scalar::to_c64).collect()).collect();
        assert!((determinant(&fm) - C64::new(4.0, 0.0)).norm() < 1e-12);
    }
}
