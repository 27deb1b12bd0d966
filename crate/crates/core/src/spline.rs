//! Natural cubic spline interpolation through scattered knots.

use crate::tridiag;

#[derive(Debug, Clone)]
pub(crate) struct NaturalSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

impl NaturalSpline {
    /// `xs` must be strictly increasing with at least two knots.
    pub(crate) fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2 && ys.len() == n, "spline needs at least two knots");
        let mut m = vec![0.0; n];
        if n > 2 {
            let k = n - 2;
            let mut lower = vec![0.0; k];
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for j in 0..k {
                let i = j + 1;
                let h0 = xs[i] - xs[i - 1];
                let h1 = xs[i + 1] - xs[i];
                lower[j] = h0;
                diag[j] = 2.0 * (h0 + h1);
                upper[j] = h1;
                rhs[j] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            let mut scratch = vec![0.0; k];
            tridiag::solve_in_place(&lower, &diag, &upper, &mut rhs, &mut scratch);
            m[1..n - 1].copy_from_slice(&rhs);
        }
        Self { xs, ys, m }
    }

    pub(crate) fn first_x(&self) -> f64 {
        self.xs[0]
    }

    pub(crate) fn last_x(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub(crate) fn first_y(&self) -> f64 {
        self.ys[0]
    }

    pub(crate) fn last_y(&self) -> f64 {
        self.ys[self.ys.len() - 1]
    }

    /// Evaluates the spline; outside the knot span the end values are held.
    pub(crate) fn eval_clamped(&self, x: f64) -> f64 {
        if x <= self.first_x() {
            return self.first_y();
        }
        if x >= self.last_x() {
            return self.last_y();
        }
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p => p - 1,
        }
        .min(self.xs.len() - 2);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_knots_and_lines() {
        let s = NaturalSpline::new(vec![0.0, 1.0, 3.0, 4.5], vec![1.0, 3.0, 7.0, 10.0]);
        // collinear knots: the natural spline is the line 2x + 1
        for x in [0.0, 0.3, 1.0, 2.2, 3.0, 4.4] {
            assert!((s.eval_clamped(x) - (2.0 * x + 1.0)).abs() < 1e-12);
        }
        assert_eq!(s.eval_clamped(-5.0), 1.0);
        assert_eq!(s.eval_clamped(9.0), 10.0);
    }

    #[test]
    fn passes_through_knots() {
        let xs: Vec<f64> = (0..8).map(|i| i as f64 * 0.5 + (i as f64).sqrt()).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let s = NaturalSpline::new(xs.clone(), ys.clone());
        for (x, y) in xs.iter().zip(&ys) {
            assert!((s.eval_clamped(*x) - y).abs() < 1e-12);
        }
    }

    #[test]
    fn approximates_smooth_function() {
        let xs: Vec<f64> = (0..=40).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.cos()).collect();
        let s = NaturalSpline::new(xs, ys);
        for i in 0..100 {
            let x = 0.5 + i as f64 * 0.03;
            assert!((s.eval_clamped(x) - x.cos()).abs() < 1e-4);
        }
    }
}
