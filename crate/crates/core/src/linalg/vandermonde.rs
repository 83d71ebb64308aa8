use crate::error::{Result, WaringError};
use crate::scalar::{Scalar, C64};

/// Solves `sum_k weights_k * nodes_k^i = moments_i` for `i = 0..r-1`.
///
/// Progressive Newton-divided-difference scheme (Björck-Pereyra) in `O(r^2)`
/// operations; no matrix is formed.
pub fn vandermonde_solve<S: Scalar>(nodes: &[S], moments: &[S]) -> Result<Vec<S>> {
    let n = nodes.len();
    if moments.len() != n {
        return Err(WaringError::LengthMismatch {
            expected: n,
            actual: moments.len(),
        });
    }
    for i in 0..n {
        if nodes[i + 1..].contains(&nodes[i]) {
            return Err(WaringError::DuplicateNodes);
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut f = moments.to_vec();
    let last = n - 1;
    for k in 0..last {
        for i in (k + 1..=last).rev() {
            f[i] = f[i].clone() - nodes[k].clone() * f[i - 1].clone();
        }
    }
    for k in (0..last).rev() {
        for i in k + 1..=last {
            f[i] = f[i].clone() / (nodes[i].clone() - nodes[i - k - 1].clone());
        }
        for i in k..last {
            f[i] = f[i].clone() - f[i + 1].clone();
        }
    }
    Ok(f)
}

/// Least-squares weights for `sum_k weights_k * nodes_k^i = moments_i` over
/// all given moments (at least as many as nodes).
///
/// Columns are scaled to unit maximum before a Householder QR, so a node of
/// large modulus with a tiny weight is fitted where its powers dominate.
pub fn vandermonde_least_squares(nodes: &[C64], moments: &[C64]) -> Result<Vec<C64>> {
    let n = nodes.len();
    let m = moments.len();
    if m < n {
        return Err(WaringError::LengthMismatch { expected: n, actual: m });
    }
    for i in 0..n {
        if nodes[i + 1..].contains(&nodes[i]) {
            return Err(WaringError::DuplicateNodes);
        }
    }
    let scales: Vec<f64> = nodes
        .iter()
        .map(|z| z.norm().max(1.0).powi(m.saturating_sub(1) as i32))
        .collect();
    let mut a: Vec<Vec<C64>> = (0..m)
        .map(|i| {
            nodes
                .iter()
                .zip(&scales)
                .map(|(z, s)| z.powu(i as u32) / s)
                .collect()
        })
        .collect();
    let mut b = moments.to_vec();
    for k in 0..n {
        let norm = (k..m).map(|i| a[i][k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(WaringError::DuplicateNodes);
        }
        let head = a[k][k];
        let phase = if head.norm() == 0.0 { C64::new(1.0, 0.0) } else { head / head.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k..m).map(|i| a[i][k]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if vnorm > 0.0 {
            for x in &mut v {
                *x /= vnorm;
            }
            for j in k..n {
                let dot: C64 = (k..m).map(|i| v[i - k].conj() * a[i][j]).sum();
                for i in k..m {
                    a[i][j] -= v[i - k] * dot * 2.0;
                }
            }
            let dot: C64 = (k..m).map(|i| v[i - k].conj() * b[i]).sum();
            for i in k..m {
                b[i] -= v[i - k] * dot * 2.0;
            }
        }
    }
    let mut x = vec![C64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let tail: C64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - tail) / a[k][k];
    }
    Ok(x.into_iter().zip(scales).map(|(w, s)| w / s).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::affine::exact_solve;
    use crate::scalar::{gauss_ratio, pow, GaussRational, C64};
    use num_complex::Complex;
    use proptest::prelude::*;

    fn q(n: i64) -> GaussRational {
        GaussRational::from_i64(n)
    }

    #[test]
    fn two_node_example() {
        assert_eq!(vandermonde_solve(&[q(1), q(-1)], &[q(3), q(-1)]).unwrap(), vec![q(1), q(2)]);
        assert_eq!(vandermonde_solve(&[q(0)], &[q(7)]).unwrap(), vec![q(7)]);
        assert_eq!(vandermonde_solve(&[q(2), q(2)], &[q(1), q(1)]), Err(WaringError::DuplicateNodes));
    }

    #[test]
    fn cube_roots_of_unity() {
        let omega = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let nodes = [C64::new(1.0, 0.0), omega, omega * omega];
        let zero = C64::new(0.0, 0.0);
        let w = vandermonde_solve(&nodes, &[zero, C64::new(1.0, 0.0), zero]).unwrap();
        let expected = [C64::new(1.0 / 3.0, 0.0), omega * omega / 3.0, omega / 3.0];
        for (a, b) in w.iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn least_squares_recovers_consistent_weights() {
        let nodes = [C64::new(-60.5, 0.0), C64::new(0.3, 0.7), C64::new(0.3, -0.7)];
        let weights = [C64::new(1e-8, 0.0), C64::new(-0.5, 0.4), C64::new(-0.5, -0.4)];
        let moments: Vec<C64> = (0..6)
            .map(|i| nodes.iter().zip(&weights).map(|(z, w)| w * z.powu(i)).sum())
            .collect();
        let got = vandermonde_least_squares(&nodes, &moments).unwrap();
        for (g, w) in got.iter().zip(&weights) {
            assert!((g - w).norm() <= 1e-14 * w.norm().max(1e-6), "{g} vs {w}");
        }
    }

    proptest! {
        // Oracle: dense exact elimination on the explicit Vandermonde matrix.
        #[test]
        fn agrees_with_dense_elimination(
            raw in prop::collection::vec((-20i64..20, 1i64..6), 1..7),
            moments in prop::collection::vec(-30i64..30, 7),
        ) {
            let mut nodes: Vec<GaussRational> = Vec::new();
            for (n, d) in raw {
                let v = gauss_ratio(n, d);
                if !nodes.contains(&v) {
                    nodes.push(v);
                }
            }
            let r = nodes.len();
            let m: Vec<GaussRational> = moments[..r].iter().map(|&v| q(v)).collect();
            let matrix: Vec<Vec<GaussRational>> =
                (0..r).map(|i| nodes.iter().map(|b| pow(b, i)).collect()).collect();
            let dense = exact_solve(&matrix, &m).unwrap();
            prop_assert_eq!(vandermonde_solve(&nodes, &m).unwrap(), dense.particular);
        }
    }
}
