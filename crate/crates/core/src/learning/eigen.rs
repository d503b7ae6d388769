use super::{LearningError, SquareMatrix};

pub(crate) const MAX_SWEEPS: usize = 100;

pub(crate) fn check_symmetric(m: &SquareMatrix) -> Result<(), LearningError> {
    let tol = 1e-12 * m.max_abs().max(1.0);
    for i in 0..m.n() {
        for j in (i + 1)..m.n() {
            if (m[(i, j)] - m[(j, i)]).abs() > tol {
                return Err(LearningError::NotSymmetric { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Eigenvalues of a symmetric matrix in ascending order, by cyclic Jacobi
/// rotations until the off-diagonal Frobenius norm drops to `1e-12 * ||M||_F`.
pub fn sym_eigenvalues(m: &SquareMatrix) -> Result<Vec<f64>, LearningError> {
    check_symmetric(m)?;
    let n = m.n();
    // symmetrize exactly so rotations act on a truly symmetric matrix
    let mut a = SquareMatrix::from_fn(n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let frob = a.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = 1e-12 * frob;

    let mut converged = false;
    for _ in 0..=MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
    }
    if !converged {
        return Err(LearningError::NoConvergence(MAX_SWEEPS));
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Applies the plane rotation that annihilates `a[p][q]`.
fn rotate(a: &mut SquareMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta.is_infinite() { 0.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.n();
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
}
