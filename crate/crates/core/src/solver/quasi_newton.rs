use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use super::strategy::QuasiNewtonMethod;

/// Inverse-Hessian approximation over the flattened generator parameters.
#[derive(Debug, Clone)]
pub struct QuasiNewton {
    method: QuasiNewtonMethod,
    dim: usize,
    dense: Option<DMatrix<f64>>,
    pairs: VecDeque<(DVector<f64>, DVector<f64>, f64)>,
}

impl QuasiNewton {
    pub fn new(method: QuasiNewtonMethod, dim: usize) -> Self {
        Self {
            method,
            dim,
            dense: None,
            pairs: VecDeque::new(),
        }
    }

    pub fn reset(&mut self) {
        self.dense = None;
        self.pairs.clear();
    }

    pub fn is_fresh(&self) -> bool {
        self.dense.is_none() && self.pairs.is_empty()
    }

    /// −H·g
    pub fn direction(&self, grad: &[f64]) -> Vec<f64> {
        let g = DVector::from_column_slice(grad);
        let hg = match self.method {
            QuasiNewtonMethod::Bfgs => match &self.dense {
                Some(h) => h * &g,
                None => g,
            },
            QuasiNewtonMethod::Lbfgs { .. } => self.two_loop(g),
        };
        hg.iter().map(|x| -x).collect()
    }

    fn two_loop(&self, mut q: DVector<f64>) -> DVector<f64> {
        let mut alphas = Vec::with_capacity(self.pairs.len());
        for (s, y, rho) in self.pairs.iter().rev() {
            let a = rho * s.dot(&q);
            q.axpy(-a, y, 1.0);
            alphas.push(a);
        }
        if let Some((s, y, _)) = self.pairs.back() {
            q *= s.dot(y) / y.dot(y);
        }
        for ((s, y, rho), a) in self.pairs.iter().zip(alphas.into_iter().rev()) {
            let b = rho * y.dot(&q);
            q.axpy(a - b, s, 1.0);
        }
        q
    }

    /// Adds the curvature pair (s, y); pairs with s·y ≤ 1e-12 |s||y| are skipped.
    pub fn update(&mut self, s: &[f64], y: &[f64]) -> bool {
        let s = DVector::from_column_slice(s);
        let y = DVector::from_column_slice(y);
        let sy = s.dot(&y);
        if !(sy > 1e-12 * s.norm() * y.norm()) {
            return false;
        }
        let rho = 1.0 / sy;
        match self.method {
            QuasiNewtonMethod::Bfgs => {
                let h = self
                    .dense
                    .get_or_insert_with(|| DMatrix::identity(self.dim, self.dim) * (sy / y.dot(&y)));
                let hy = &*h * &y;
                let yhy = y.dot(&hy);
                h.ger(-rho, &hy, &s, 1.0);
                h.ger(-rho, &s, &hy, 1.0);
                h.ger(rho * rho * yhy + rho, &s, &s, 1.0);
            }
            QuasiNewtonMethod::Lbfgs { history } => {
                if self.pairs.len() == history {
                    self.pairs.pop_front();
                }
                self.pairs.push_back((s, y, rho));
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimise(method: QuasiNewtonMethod) -> usize {
        // f = ½ xᵀ D x on an ill-conditioned diagonal quadratic.
        let d = [1.0, 3.0, 10.0, 30.0, 100.0];
        let mut x = vec![1.0; 5];
        let grad = |x: &[f64]| x.iter().zip(&d).map(|(x, d)| x * d).collect::<Vec<_>>();
        let f = |x: &[f64]| 0.5 * x.iter().zip(&d).map(|(x, d)| d * x * x).sum::<f64>();
        let mut qn = QuasiNewton::new(method, 5);
        for it in 0..200 {
            let g = grad(&x);
            if g.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-10 {
                return it;
            }
            let p = qn.direction(&g);
            let slope: f64 = g.iter().zip(&p).map(|(a, b)| a * b).sum();
            let mut t = 1.0;
            while f(&x.iter().zip(&p).map(|(x, p)| x + t * p).collect::<Vec<_>>()) > f(&x) + 1e-4 * t * slope {
                t *= 0.5;
            }
            let xn: Vec<f64> = x.iter().zip(&p).map(|(x, p)| x + t * p).collect();
            let gn = grad(&xn);
            let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
            let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
            qn.update(&s, &y);
            x = xn;
        }
        usize::MAX
    }

    #[test]
    fn converges_on_quadratic() {
        assert!(minimise(QuasiNewtonMethod::Bfgs) < 40);
        assert!(minimise(QuasiNewtonMethod::Lbfgs { history: 5 }) < 60);
    }

    #[test]
    fn secant_condition() {
        let mut qn = QuasiNewton::new(QuasiNewtonMethod::Bfgs, 3);
        let s = [0.1, -0.2, 0.3];
        let y = [0.5, -0.1, 0.9];
        assert!(qn.update(&s, &y));
        let hy = qn.direction(&y);
        for (a, b) in hy.iter().zip(&s) {
            assert!((a + b).abs() < 1e-12);
        }
        assert!(!qn.update(&s, &[-0.5, 0.1, -0.9]));
    }
}
