//! Spectra of small dense Hermitian matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenpairs sorted by descending eigenvalue.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Vec<DVector<Complex64>>,
}

impl Spectrum {
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    /// Largest absolute eigenvalue.
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Number of eigenvalues within `tol` of the top one.
    pub fn top_multiplicity(&self, tol: f64) -> usize {
        let top = self.max();
        self.values
            .iter()
            .take_while(|v| (top - **v).abs() <= tol)
            .count()
    }
}

pub fn hermitian_spectrum(m: &DMatrix<Complex64>) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::Domain(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let skew = (m - m.adjoint()).camax();
    if skew > 1e-9 {
        return Err(Error::Domain(format!(
            "matrix is not Hermitian (|A - A†| = {skew})"
        )));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    Ok(Spectrum {
        values: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        vectors: order
            .iter()
            .map(|&k| eig.eigenvectors.column(k).into_owned())
            .collect(),
    })
}
