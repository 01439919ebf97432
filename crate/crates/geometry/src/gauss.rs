use crate::energy::derivatives;
use crate::error::{GeometryError, Result};
use crate::sample::SurfaceField;
use lorentz_core::{RMat, RVec};

const RANK_TOL: f64 = 1e-8;

fn metric(d: usize) -> RMat {
    RMat::from_diagonal(&RVec::from_fn(d, |i, _| if i == 0 { -1.0 } else { 1.0 }))
}

/// Basis of `span{Y, Y_u, Y_v, Y_uu + Y_vv}` with Gram matrix `diag(-1, 1, 1, 1)`.
pub fn gauss_basis(columns: &[RVec; 4]) -> Result<RMat> {
    let d = columns[0].len();
    let span = RMat::from_columns(columns);
    let j = metric(d);
    let gram = span.transpose() * &j * &span;
    let eig = gram.symmetric_eigen();
    let scale = eig.eigenvalues.amax();
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let negatives = eig.eigenvalues.iter().filter(|&&x| x < 0.0).count();
    if negatives != 1 || eig.eigenvalues.iter().any(|x| x.abs() <= RANK_TOL * scale) {
        return Err(GeometryError::Degenerate);
    }
    let mut basis = RMat::zeros(d, 4);
    for (slot, &k) in order.iter().enumerate() {
        let v = &span * eig.eigenvectors.column(k) / eig.eigenvalues[k].abs().sqrt();
        basis.set_column(slot, &v);
    }
    Ok(basis)
}

/// Minkowski-orthogonal projector onto the subspace; independent of the basis.
pub fn subspace_projector(basis: &RMat) -> RMat {
    let j = metric(basis.nrows());
    let g = RMat::from_diagonal(&RVec::from_vec(vec![-1.0, 1.0, 1.0, 1.0]));
    basis * g * basis.transpose() * j
}

/// Conformal Gauss subspace per sample; `None` where no stencil exists.
pub fn conformal_gauss_subspace(field: &SurfaceField) -> Result<Vec<Option<Result<RMat>>>> {
    let (n1, n2) = field.grid.shape().ok_or(GeometryError::Unstructured)?;
    Ok((0..n1 * n2)
        .map(|k| {
            derivatives(field, k / n2, k % n2, true)
                .map(|d| gauss_basis(&[d.value, d.du, d.dv, d.duu + d.dvv]))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lightlike_degenerate_span_is_flagged() {
        let e = |v: [f64; 4]| RVec::from_vec(v.to_vec());
        let null = e([1.0, 1.0, 0.0, 0.0]);
        let cols = [null.clone(), e([0.0, 0.0, 1.0, 0.0]), e([0.0, 0.0, 0.0, 1.0]), null * 2.0];
        assert!(matches!(gauss_basis(&cols), Err(GeometryError::Degenerate)));
    }

    #[test]
    fn basis_is_orthonormal() {
        let e = |v: [f64; 5]| RVec::from_vec(v.to_vec());
        let cols = [
            e([1.0, 1.0, 0.0, 0.0, 0.0]),
            e([0.0, 0.3, 1.0, 0.0, 0.0]),
            e([0.2, 0.0, 0.0, 1.0, 0.0]),
            e([1.0, -1.0, 0.0, 0.0, 0.0]),
        ];
        let b = gauss_basis(&cols).unwrap();
        let gram = b.transpose() * metric(5) * &b;
        let expected = RMat::from_diagonal(&RVec::from_vec(vec![-1.0, 1.0, 1.0, 1.0]));
        assert!((gram - expected).amax() < 1e-12);
    }
}
