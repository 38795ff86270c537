use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Eigenpairs sorted ascending; each vector's first component above 1e-8 in
/// magnitude is made positive.
#[derive(Debug, Clone)]
pub struct FciSolution {
    pub energies: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl FciSolution {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn vector(&self, k: usize) -> DVector<f64> {
        self.vectors.column(k).into_owned()
    }

    /// Largest ‖Hv − λv‖ over all pairs.
    pub fn max_residual(&self, matrix: &DMatrix<f64>) -> f64 {
        (0..self.len())
            .map(|k| {
                let v = self.vectors.column(k);
                (matrix * v - v * self.energies[k]).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn fci_solve(matrix: &DMatrix<f64>) -> FciSolution {
    let eig = SymmetricEigen::new(matrix.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let dim = matrix.nrows();
    let mut vectors = DMatrix::zeros(dim, order.len());
    let mut energies = Vec::with_capacity(order.len());
    for (col, &k) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(k).into_owned();
        fix_sign(&mut v);
        vectors.set_column(col, &v);
        energies.push(eig.eigenvalues[k]);
    }
    FciSolution { energies, vectors }
}

pub(crate) fn fix_sign(v: &mut DVector<f64>) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-8) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
}
