//! Fixed-grid quadrature (composite Simpson with a 3/8 tail, fourth-order
//! cumulative integrals) and Gauss-Legendre rules generated by Newton
//! iteration on the Legendre recurrence.

/// Composite Simpson over uniformly spaced samples `ys` with spacing `dx`.
/// An odd interval count is finished with the 3/8 rule, keeping fourth order.
pub fn simpson_uniform(ys: &[f64], dx: f64) -> f64 {
    let n = ys.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * dx * (ys[0] + ys[1]),
        3 => dx / 3.0 * (ys[0] + 4.0 * ys[1] + ys[2]),
        _ => {
            let intervals = n - 1;
            let (simpson_end, tail) = if intervals % 2 == 0 {
                (n - 1, 0.0)
            } else {
                // 3/8 rule over the last three intervals.
                let t = 3.0 * dx / 8.0
                    * (ys[n - 4] + 3.0 * ys[n - 3] + 3.0 * ys[n - 2] + ys[n - 1]);
                (n - 4, t)
            };
            let mut acc = ys[0] + ys[simpson_end];
            let mut i = 1;
            while i < simpson_end {
                acc += 4.0 * ys[i];
                if i + 1 < simpson_end {
                    acc += 2.0 * ys[i + 1];
                }
                i += 2;
            }
            dx / 3.0 * acc + tail
        }
    }
}

/// Cumulative integral of uniformly spaced samples, fourth order: each cell
/// is integrated with the cubic through its four nearest nodes.
pub fn cumulative_uniform(ys: &[f64], dx: f64) -> Vec<f64> {
    let n = ys.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n < 4 {
        for i in 1..n {
            out[i] = out[i - 1] + 0.5 * dx * (ys[i - 1] + ys[i]);
        }
        return out;
    }
    for i in 0..n - 1 {
        let inc = if i == 0 {
            dx / 24.0 * (9.0 * ys[0] + 19.0 * ys[1] - 5.0 * ys[2] + ys[3])
        } else if i == n - 2 {
            dx / 24.0 * (ys[n - 4] - 5.0 * ys[n - 3] + 19.0 * ys[n - 2] + 9.0 * ys[n - 1])
        } else {
            dx / 24.0 * (-ys[i - 1] + 13.0 * ys[i] + 13.0 * ys[i + 1] - ys[i + 2])
        };
        out[i + 1] = out[i] + inc;
    }
    out
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Integrate `f` over [a, b] with an `n`-point Gauss-Legendre rule.
#[allow(dead_code)]
pub fn gauss_integrate(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    xs.iter()
        .zip(&ws)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}
