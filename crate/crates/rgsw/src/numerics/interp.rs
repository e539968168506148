//! Cubic Hermite interpolation on uniform grids. With exact derivative data
//! at the nodes (available wherever a value comes from an ODE right-hand
//! side) the interpolant is fourth-order accurate, which is what the
//! eigenvalue integrations downstream need.

/// Uniform-grid cubic Hermite table. Evaluation clamps to the end values
/// outside the covered range (profiles are constant beyond their samples).
#[derive(Debug, Clone)]
pub struct HermiteTable {
    pub x0: f64,
    pub dx: f64,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
}

impl HermiteTable {
    pub fn new(x0: f64, dx: f64, y: Vec<f64>, dy: Vec<f64>) -> Self {
        assert_eq!(y.len(), dy.len());
        assert!(y.len() >= 2);
        assert!(dx > 0.0);
        HermiteTable { x0, dx, y, dy }
    }

    pub fn x_last(&self) -> f64 {
        self.x0 + self.dx * (self.y.len() - 1) as f64
    }

    fn cell(&self, x: f64) -> (usize, f64) {
        let s = (x - self.x0) / self.dx;
        let i = (s.floor() as isize).clamp(0, self.y.len() as isize - 2) as usize;
        (i, s - i as f64)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.x0 {
            return self.y[0];
        }
        if x >= self.x_last() {
            return *self.y.last().unwrap();
        }
        let (i, t) = self.cell(x);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.dy[i] * self.dx, self.dy[i + 1] * self.dx);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1
    }

    #[allow(dead_code)]
    pub fn eval_deriv(&self, x: f64) -> f64 {
        if x <= self.x0 || x >= self.x_last() {
            return 0.0;
        }
        let (i, t) = self.cell(x);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.dy[i] * self.dx, self.dy[i + 1] * self.dx);
        let t2 = t * t;
        ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / self.dx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let f = |x: f64| 2.0 * x.powi(3) - x + 0.5;
        let df = |x: f64| 6.0 * x * x - 1.0;
        let n = 11;
        let dx = 0.3;
        let y: Vec<f64> = (0..n).map(|i| f(i as f64 * dx)).collect();
        let dy: Vec<f64> = (0..n).map(|i| df(i as f64 * dx)).collect();
        let t = HermiteTable::new(0.0, dx, y, dy);
        for k in 0..100 {
            let x = 0.015 + k as f64 * 0.029;
            assert!((t.eval(x) - f(x)).abs() < 1e-12, "at x = {x}");
            assert!((t.eval_deriv(x) - df(x)).abs() < 1e-11, "at x = {x}");
        }
    }

    #[test]
    fn fourth_order_on_smooth_data() {
        let f = |x: f64| (2.0 * x).sin();
        let df = |x: f64| 2.0 * (2.0 * x).cos();
        let mut errs = Vec::new();
        for n in [21, 41] {
            let dx = 1.0 / (n - 1) as f64;
            let y: Vec<f64> = (0..n).map(|i| f(i as f64 * dx)).collect();
            let dy: Vec<f64> = (0..n).map(|i| df(i as f64 * dx)).collect();
            let t = HermiteTable::new(0.0, dx, y, dy);
            let err = (0..999)
                .map(|k| {
                    let x = (k as f64 + 0.5) / 1000.0;
                    (t.eval(x) - f(x)).abs()
                })
                .fold(0.0f64, f64::max);
            errs.push(err);
        }
        // Halving dx should shrink the error by about 16.
        assert!(errs[0] / errs[1] > 10.0, "ratio {}", errs[0] / errs[1]);
    }

    #[test]
    fn clamps_outside_range() {
        let t = HermiteTable::new(0.0, 1.0, vec![1.0, 2.0, 3.0], vec![0.0, 0.0, 0.0]);
        assert_eq!(t.eval(-5.0), 1.0);
        assert_eq!(t.eval(9.0), 3.0);
    }
}
