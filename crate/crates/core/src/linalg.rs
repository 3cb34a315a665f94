//! Dense symmetric eigen helpers.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Eigenpairs sorted by ascending eigenvalue.
pub(crate) fn sym_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, &x| a.max(x.abs()))
}

#[cfg(test)]
pub(crate) fn symmetry_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut d: f64 = 0.0;
    for i in 0..n {
        for j in 0..i {
            d = d.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    d
}

/// Solution of `E v = λ V v` on the range of `V`.
pub(crate) struct Pencil {
    pub values: Vec<f64>,
    /// Max of `‖E v − λ V v‖` over eigenpairs, with `vᵀ V v = 1`.
    pub residual: f64,
}

pub(crate) fn pencil(e: &DMatrix<f64>, v: &DMatrix<f64>, rel_cutoff: f64) -> Pencil {
    let (vals, vecs) = sym_eigen(v.clone());
    let top = vals.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > rel_cutoff * top).collect();
    let n = v.nrows();
    let w = DMatrix::from_fn(n, keep.len(), |r, c| vecs[(r, keep[c])] / libm::sqrt(vals[keep[c]]));
    let mut a = w.transpose() * e * &w;
    a = (&a + a.transpose()) * 0.5;
    let (lam, y) = sym_eigen(a);
    let mut residual: f64 = 0.0;
    for (k, &l) in lam.iter().enumerate() {
        let x: DVector<f64> = &w * y.column(k);
        let r = e * &x - (v * &x) * l;
        residual = residual.max(r.norm());
    }
    Pencil { values: lam, residual }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pencil() {
        let e = DMatrix::from_diagonal(&DVector::from_vec(alloc::vec![2.0, 6.0]));
        let v = DMatrix::from_diagonal(&DVector::from_vec(alloc::vec![1.0, 2.0]));
        let p = pencil(&e, &v, 1e-12);
        assert_eq!(p.values.len(), 2);
        assert!((p.values[0] - 2.0).abs() < 1e-12 && (p.values[1] - 3.0).abs() < 1e-12);
        assert!(p.residual < 1e-12);
    }

    #[test]
    fn deflates_kernel() {
        let v = DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]);
        let e = DMatrix::from_row_slice(2, 2, &[3.0, -3.0, -3.0, 3.0]);
        let p = pencil(&e, &v, 1e-12);
        assert_eq!(p.values.len(), 1);
        assert!((p.values[0] - 3.0).abs() < 1e-12);
    }
}
